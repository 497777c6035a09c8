use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::CosetTable;
use crate::error::{Error, Result};
use crate::words::{Alphabet, FreeEndomorphism, Letter, Word};

/// A nontrivial Schreier generator `t x (overline{t x})^-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchreierGenerator {
    pub coset: usize,
    pub gen: usize,
    /// Definition word over the parent alphabet.
    pub word: Word,
}

/// Schreier transversal, Schreier generators and Reidemeister rewriting for a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierData {
    table: CosetTable,
    transversal: Vec<Word>,
    generators: Vec<SchreierGenerator>,
    /// `lookup[coset * rank + gen]` is the generator index of the pair, if nontrivial.
    lookup: Vec<Option<usize>>,
}

impl SchreierData {
    /// Transversal built breadth-first from the base coset over positive letters
    /// in generator order.
    pub fn new(table: &CosetTable) -> Self {
        let n = table.index();
        let mut transversal: Vec<Option<Word>> = vec![None; n];
        transversal[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for g in 0..table.rank() {
                let d = table.image(c, Letter::pos(g));
                if transversal[d].is_none() {
                    let w = transversal[c].as_ref().unwrap().mul(&Word::generator(g));
                    transversal[d] = Some(w);
                    queue.push_back(d);
                }
            }
        }
        let transversal = transversal.into_iter().map(Option::unwrap).collect();
        Self::build(table.clone(), transversal)
    }

    /// Uses the given representatives; `words[c]` must lead from the base coset to `c`
    /// and the set must be closed under taking prefixes.
    pub fn with_transversal(table: &CosetTable, words: Vec<Word>) -> Result<Self> {
        let n = table.index();
        if words.len() != n {
            return Err(Error::Malformed(format!(
                "{} representatives for {n} cosets",
                words.len()
            )));
        }
        for (c, w) in words.iter().enumerate() {
            if w.max_generator().is_some_and(|g| g >= table.rank()) {
                return Err(Error::AlphabetMismatch("representative outside alphabet".into()));
            }
            if table.trace(0, w) != c {
                return Err(Error::Malformed(format!(
                    "representative {c} does not lead to its coset"
                )));
            }
            if let Some((_, prefix)) = w.letters().split_last() {
                let prefix = Word::from_letters(prefix.iter().copied());
                if !words.contains(&prefix) {
                    return Err(Error::Malformed("transversal is not prefix closed".into()));
                }
            }
        }
        if !words[0].is_identity() {
            return Err(Error::Malformed("base coset must be represented by 1".into()));
        }
        Ok(Self::build(table.clone(), words))
    }

    fn build(table: CosetTable, transversal: Vec<Word>) -> Self {
        let rank = table.rank();
        let mut generators = Vec::new();
        let mut lookup = vec![None; table.index() * rank];
        for (c, t) in transversal.iter().enumerate() {
            for g in 0..rank {
                let d = table.image(c, Letter::pos(g));
                let word = t.mul(&Word::generator(g)).mul(&transversal[d].inverse());
                if !word.is_identity() {
                    lookup[c * rank + g] = Some(generators.len());
                    generators.push(SchreierGenerator { coset: c, gen: g, word });
                }
            }
        }
        SchreierData {
            table,
            transversal,
            generators,
            lookup,
        }
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn transversal(&self) -> &[Word] {
        &self.transversal
    }

    pub fn generators(&self) -> &[SchreierGenerator] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn definition_words(&self) -> Vec<Word> {
        self.generators.iter().map(|g| g.word.clone()).collect()
    }

    /// Names `x1, x2, ...`.
    pub fn alphabet(&self) -> Alphabet {
        Alphabet::numbered("x", self.rank())
    }

    /// Index of the Schreier generator attached to `(coset, gen)`.
    pub fn generator_at(&self, coset: usize, gen: usize) -> Option<usize> {
        self.lookup[coset * self.table.rank() + gen]
    }

    /// Reidemeister rewriting of a subgroup element over the Schreier generators.
    pub fn rewrite(&self, w: &Word) -> Result<Word> {
        if w.max_generator().is_some_and(|g| g >= self.table.rank()) {
            return Err(Error::AlphabetMismatch("word outside the table's alphabet".into()));
        }
        let rank = self.table.rank();
        let mut out = Vec::new();
        let mut c = 0;
        for &l in w.letters() {
            if l.is_inverse() {
                let d = self.table.image(c, l);
                if let Some(y) = self.lookup[d * rank + l.gen()] {
                    out.push(Letter::neg(y));
                }
                c = d;
            } else {
                if let Some(y) = self.lookup[c * rank + l.gen()] {
                    out.push(Letter::pos(y));
                }
                c = self.table.image(c, l);
            }
        }
        if c != 0 {
            return Err(Error::NotMember);
        }
        Ok(Word::from_letters(out))
    }

    /// Substitutes each Schreier generator by its definition word.
    pub fn expand(&self, w: &Word) -> Word {
        Word::from_letters(w.letters().iter().flat_map(|l| {
            let def = &self.generators[l.gen()].word;
            let letters: Vec<Letter> = if l.is_inverse() {
                def.inverse().letters().to_vec()
            } else {
                def.letters().to_vec()
            };
            letters
        }))
    }

    /// The endomorphism of the subgroup's free group induced by `e`.
    pub fn induced_endomorphism(&self, e: &FreeEndomorphism) -> Result<FreeEndomorphism> {
        if e.rank() != self.table.rank() {
            return Err(Error::AlphabetMismatch(format!(
                "endomorphism of rank {} on a table of rank {}",
                e.rank(),
                self.table.rank()
            )));
        }
        let images = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                self.rewrite(&e.apply(&g.word)).map_err(|err| match err {
                    Error::NotMember => Error::NotInvariant(format!("x{}", i + 1)),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FreeEndomorphism::new(images)
    }

    /// The endomorphism `u -> t u t^-1` of a normal subgroup.
    pub fn conjugation_endo(&self, t: &Word) -> Result<FreeEndomorphism> {
        if !self.table.is_normal() {
            return Err(Error::NormalityRequired);
        }
        let tinv = t.inverse();
        let images = self
            .generators
            .iter()
            .map(|g| self.rewrite(&t.mul(&g.word).mul(&tinv)))
            .collect::<Result<Vec<_>>>()?;
        FreeEndomorphism::new(images)
    }
}
