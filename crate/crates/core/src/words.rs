//! Free-group words, endomorphisms of free groups and finite L-presentations.
//!
//! Words are always stored freely reduced. Endomorphisms act from the right:
//! `w^(alpha beta) = (w^alpha)^beta`, so in [`FreeEndomorphism::compose`] and in
//! [`MonoidElement`] the left factor is applied first.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    gen: u32,
    inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter {
            gen: gen as u32,
            inverse,
        }
    }

    pub fn pos(gen: usize) -> Self {
        Letter::new(gen, false)
    }

    pub fn neg(gen: usize) -> Self {
        Letter::new(gen, true)
    }

    #[inline]
    pub fn gen(self) -> usize {
        self.gen as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Column index in a coset table with columns `x0, x0^-1, x1, x1^-1, ...`.
    #[inline]
    pub fn column(self) -> usize {
        2 * self.gen as usize + self.inverse as usize
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(gen: usize) -> Self {
        Word(vec![Letter::pos(gen)])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    /// Builds a word from `(generator, exponent)` syllables, e.g. `[(1, 2), (0, -1)]` is `b^2 a^-1`.
    pub fn from_syllables(syllables: &[(usize, i64)]) -> Self {
        Word::from_letters(syllables.iter().flat_map(|&(g, e)| {
            std::iter::repeat_n(Letter::new(g, e < 0), e.unsigned_abs() as usize)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.reserve(other.len());
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `v^-1 w v`.
    pub fn conjugate_by(&self, v: &Word) -> Word {
        v.inverse().mul(self).mul(v)
    }

    /// `[u, v] = u^-1 v^-1 u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().mul(&v.inverse()).mul(u).mul(v)
    }

    /// Removes letters cancelling around the cyclic boundary.
    pub fn cyclically_reduced(&self) -> Word {
        let l = &self.0;
        let (mut i, mut j) = (0, l.len());
        while j >= i + 2 && l[i] == l[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        Word(l[i..j].to_vec())
    }

    /// Largest generator index occurring in the word.
    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen()).max()
    }

    /// Renumbers generators: letter `g` becomes `map(g)`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Word {
        Word::from_letters(self.0.iter().map(|l| Letter::new(map(l.gen()), l.is_inverse())))
    }

    /// Renders the word with `*`-separated syllables such as `b^2*a*b^-1`.
    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> WordDisplay<'a, S> {
        WordDisplay { word: self, names }
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        Word::mul(self, rhs)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word::from_letters(iter)
    }
}

pub struct WordDisplay<'a, S> {
    word: &'a Word,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for WordDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return write!(f, "1");
        }
        let syllables = self
            .word
            .letters()
            .iter()
            .chunk_by(|l| l.gen())
            .into_iter()
            .map(|(g, group)| (g, group.map(|l| l.sign()).sum::<i64>()))
            .collect::<Vec<_>>();
        for (k, (g, e)) in syllables.into_iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            let name = self.names.get(g).map(|s| s.as_ref()).unwrap_or("?");
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSymbol {
    pub name: String,
    pub index: usize,
}

/// An ordered list of pairwise distinct generator names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for n in &names {
            if n.is_empty() {
                return Err(Error::Malformed("empty generator name".into()));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::Malformed(format!("duplicate generator name {n:?}")));
            }
        }
        Ok(Alphabet { names })
    }

    /// `prefix1, prefix2, ..., prefixN`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        Alphabet {
            names: (1..=n).map(|i| format!("{prefix}{i}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn symbols(&self) -> impl Iterator<Item = GeneratorSymbol> + '_ {
        self.names.iter().enumerate().map(|(index, name)| GeneratorSymbol {
            name: name.clone(),
            index,
        })
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(g) if g >= self.len() => Err(Error::Malformed(format!(
                "generator index {g} outside alphabet of size {}",
                self.len()
            ))),
            _ => Ok(()),
        }
    }

    /// Checked free reduction of a raw letter sequence over this alphabet.
    pub fn reduce(&self, letters: &[Letter]) -> Result<Word> {
        if let Some(l) = letters.iter().find(|l| l.gen() >= self.len()) {
            return Err(Error::Malformed(format!(
                "generator index {} outside alphabet of size {}",
                l.gen(),
                self.len()
            )));
        }
        Ok(Word::from_letters(letters.iter().copied()))
    }

    /// Appends `other`, renaming colliding names with the smallest free numeric suffix.
    /// Returns the combined alphabet.
    pub fn disjoint_union(&self, other: &Alphabet) -> Alphabet {
        Alphabet {
            names: disjoint_names(&self.names, &other.names),
        }
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        Alphabet::new(v)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.names
    }
}

/// `existing` followed by `incoming`, renaming incoming names that collide.
pub(crate) fn disjoint_names(existing: &[String], incoming: &[String]) -> Vec<String> {
    let mut taken: HashSet<String> = existing.iter().cloned().collect();
    let mut out = existing.to_vec();
    for name in incoming {
        let fresh = if taken.contains(name) {
            (1..)
                .map(|k| format!("{name}{k}"))
                .find(|cand| !taken.contains(cand) && !incoming.contains(cand))
                .expect("unbounded suffix search")
        } else {
            name.clone()
        };
        taken.insert(fresh.clone());
        out.push(fresh);
    }
    out
}

/// An endomorphism of a free group of finite rank, given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeEndomorphism {
    images: Vec<Word>,
}

impl FreeEndomorphism {
    pub fn new(images: Vec<Word>) -> Result<Self> {
        let rank = images.len();
        for (g, w) in images.iter().enumerate() {
            if let Some(m) = w.max_generator() {
                if m >= rank {
                    return Err(Error::AlphabetMismatch(format!(
                        "image of generator {g} uses generator {m} outside rank {rank}"
                    )));
                }
            }
        }
        Ok(FreeEndomorphism { images })
    }

    pub fn identity(rank: usize) -> Self {
        FreeEndomorphism {
            images: (0..rank).map(Word::generator).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, gen: usize) -> &Word {
        &self.images[gen]
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(g, w)| *w == Word::generator(g))
    }

    /// Substitutes every letter by its image. Panics if `w` uses generators outside the rank.
    pub fn apply(&self, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in w.letters() {
            let img = &self.images[l.gen()];
            if l.is_inverse() {
                for &m in img.letters().iter().rev() {
                    push_reduced(&mut out, m.inverse());
                }
            } else {
                for &m in img.letters() {
                    push_reduced(&mut out, m);
                }
            }
        }
        Word(out)
    }

    pub fn try_apply(&self, w: &Word) -> Result<Word> {
        match w.max_generator() {
            Some(g) if g >= self.rank() => Err(Error::AlphabetMismatch(format!(
                "word uses generator {g}, endomorphism has rank {}",
                self.rank()
            ))),
            _ => Ok(self.apply(w)),
        }
    }

    /// The endomorphism `w -> (w^first)^second`.
    pub fn compose(first: &FreeEndomorphism, second: &FreeEndomorphism) -> Result<Self> {
        if first.rank() != second.rank() {
            return Err(Error::AlphabetMismatch(format!(
                "cannot compose endomorphisms of ranks {} and {}",
                first.rank(),
                second.rank()
            )));
        }
        Ok(FreeEndomorphism {
            images: first.images.iter().map(|w| second.apply(w)).collect(),
        })
    }

    /// Embeds into a free group of rank `total`: generator `g` becomes `offset + g`,
    /// generators outside the embedded block are fixed.
    pub fn extend(&self, offset: usize, total: usize) -> FreeEndomorphism {
        let mut images: Vec<Word> = (0..total).map(Word::generator).collect();
        for (g, w) in self.images.iter().enumerate() {
            images[offset + g] = w.relabel(|h| h + offset);
        }
        FreeEndomorphism { images }
    }
}

/// An element of the free monoid over the substitutions, as a list of indices.
/// The left factor is applied first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MonoidElement(Vec<usize>);

impl MonoidElement {
    pub fn identity() -> Self {
        MonoidElement(Vec::new())
    }

    pub fn new(factors: Vec<usize>) -> Self {
        MonoidElement(factors)
    }

    pub fn generator(i: usize) -> Self {
        MonoidElement(vec![i])
    }

    /// `sigma^n` for a single substitution index.
    pub fn power(i: usize, n: usize) -> Self {
        MonoidElement(vec![i; n])
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    /// Word length over the substitutions.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// `psi * self`: `psi` is applied before `self`.
    pub fn prepend(&self, psi: usize) -> Self {
        let mut f = Vec::with_capacity(self.0.len() + 1);
        f.push(psi);
        f.extend_from_slice(&self.0);
        MonoidElement(f)
    }

    /// `self * other`.
    pub fn concat(&self, other: &MonoidElement) -> Self {
        let mut f = self.0.clone();
        f.extend_from_slice(&other.0);
        MonoidElement(f)
    }

    /// Applies the factors to `w` one after another.
    pub fn apply(&self, phi: &[FreeEndomorphism], w: &Word) -> Word {
        self.0.iter().fold(w.clone(), |acc, &i| phi[i].apply(&acc))
    }

    pub fn to_endomorphism(&self, phi: &[FreeEndomorphism], rank: usize) -> FreeEndomorphism {
        let images = (0..rank)
            .map(|g| self.apply(phi, &Word::generator(g)))
            .collect();
        FreeEndomorphism { images }
    }

    /// All elements of length at most `depth` over `n` generators, in increasing order.
    pub fn up_to_length(n: usize, depth: usize) -> Vec<MonoidElement> {
        let mut out = vec![MonoidElement::identity()];
        if n == 0 {
            return out;
        }
        let mut queue: VecDeque<MonoidElement> = VecDeque::from([MonoidElement::identity()]);
        while let Some(e) = queue.pop_front() {
            if e.len() == depth {
                continue;
            }
            for psi in 0..n {
                let child = e.prepend(psi);
                out.push(child.clone());
                queue.push_back(child);
            }
        }
        out
    }

    /// Compact rendering such as `sigma^3`, `phi2*phi1` or `id`.
    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> String {
        if self.0.is_empty() {
            return "id".to_string();
        }
        self.0
            .iter()
            .chunk_by(|&&i| i)
            .into_iter()
            .map(|(i, run)| {
                let n = run.count();
                let name = names.get(i).map(|s| s.as_ref()).unwrap_or("?");
                if n == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{n}")
                }
            })
            .join("*")
    }

    /// Identifier-safe name, e.g. `sigma4` for `sigma^4`, `phi2_phi1` for `phi2*phi1`.
    pub fn ident<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.0.is_empty() {
            return "id".to_string();
        }
        self.0
            .iter()
            .chunk_by(|&&i| i)
            .into_iter()
            .map(|(i, run)| {
                let n = run.count();
                let name = names.get(i).map(|s| s.as_ref()).unwrap_or("phi");
                if n == 1 {
                    name.to_string()
                } else {
                    format!("{name}{n}")
                }
            })
            .join("_")
    }
}

/// Length first, then lexicographic comparison starting from the rightmost factor.
impl Ord for MonoidElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| {
            self.0
                .iter()
                .rev()
                .zip(other.0.iter().rev())
                .map(|(a, b)| a.cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for MonoidElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `<X | K>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePresentation {
    pub alphabet: Alphabet,
    pub relators: Vec<Word>,
}

impl FinitePresentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            alphabet.check_word(r)?;
        }
        Ok(FinitePresentation { alphabet, relators })
    }

    /// The trivial group on no generators.
    pub fn trivial() -> Self {
        FinitePresentation {
            alphabet: Alphabet::default(),
            relators: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariance {
    AssertedInvariant,
    NotAsserted,
}

/// A named substitution of an L-presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    pub name: String,
    pub endo: FreeEndomorphism,
}

/// A finite L-presentation `<X | Q | Phi | R>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPresentation {
    alphabet: Alphabet,
    fixed: Vec<Word>,
    substitutions: Vec<Substitution>,
    iterated: Vec<Word>,
    invariance: Invariance,
}

impl LPresentation {
    pub fn new(
        alphabet: Alphabet,
        fixed: Vec<Word>,
        substitutions: Vec<Substitution>,
        iterated: Vec<Word>,
        invariance: Invariance,
    ) -> Result<Self> {
        for w in fixed.iter().chain(&iterated) {
            alphabet.check_word(w)?;
        }
        let mut names = HashSet::new();
        for s in &substitutions {
            if s.endo.rank() != alphabet.len() {
                return Err(Error::AlphabetMismatch(format!(
                    "substitution {} has rank {}, alphabet has {} generators",
                    s.name,
                    s.endo.rank(),
                    alphabet.len()
                )));
            }
            if !names.insert(s.name.as_str()) {
                return Err(Error::Malformed(format!("duplicate substitution name {:?}", s.name)));
            }
        }
        Ok(LPresentation {
            alphabet,
            fixed,
            substitutions,
            iterated,
            invariance,
        })
    }

    /// `<X | {} | Phi | R>`, always invariant.
    pub fn ascending(
        alphabet: Alphabet,
        substitutions: Vec<Substitution>,
        iterated: Vec<Word>,
    ) -> Result<Self> {
        Self::new(
            alphabet,
            Vec::new(),
            substitutions,
            iterated,
            Invariance::AssertedInvariant,
        )
    }

    /// The group on no generators.
    pub fn trivial() -> Self {
        LPresentation {
            alphabet: Alphabet::default(),
            fixed: Vec::new(),
            substitutions: Vec::new(),
            iterated: Vec::new(),
            invariance: Invariance::AssertedInvariant,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }

    pub fn fixed(&self) -> &[Word] {
        &self.fixed
    }

    pub fn iterated(&self) -> &[Word] {
        &self.iterated
    }

    pub fn substitutions(&self) -> &[Substitution] {
        &self.substitutions
    }

    pub fn endomorphisms(&self) -> Vec<FreeEndomorphism> {
        self.substitutions.iter().map(|s| s.endo.clone()).collect()
    }

    pub fn substitution_names(&self) -> Vec<String> {
        self.substitutions.iter().map(|s| s.name.clone()).collect()
    }

    pub fn invariance(&self) -> Invariance {
        self.invariance
    }

    pub fn is_invariant(&self) -> bool {
        self.invariance == Invariance::AssertedInvariant
    }

    pub fn is_ascending(&self) -> bool {
        self.fixed.is_empty()
    }

    /// `<X | {} | Phi | Q u R>` for an invariant presentation.
    pub fn as_ascending(&self) -> Result<LPresentation> {
        if !self.is_invariant() {
            return Err(Error::InvarianceRequired);
        }
        let mut iterated = self.fixed.clone();
        iterated.extend(self.iterated.iter().cloned());
        Ok(LPresentation {
            alphabet: self.alphabet.clone(),
            fixed: Vec::new(),
            substitutions: self.substitutions.clone(),
            iterated,
            invariance: Invariance::AssertedInvariant,
        })
    }

    /// `<X | {} | Phi | R>`: drops the fixed relators. Presents a group covering this one.
    pub fn ascending_cover(&self) -> LPresentation {
        LPresentation {
            alphabet: self.alphabet.clone(),
            fixed: Vec::new(),
            substitutions: self.substitutions.clone(),
            iterated: self.iterated.clone(),
            invariance: Invariance::AssertedInvariant,
        }
    }

    /// Truncates the relator set to `Q` and all `r^sigma` with `|sigma| <= depth`.
    pub fn instantiate(&self, depth: usize) -> FinitePresentation {
        let phi = self.endomorphisms();
        let mut seen = HashSet::new();
        let mut relators = Vec::new();
        for q in &self.fixed {
            if seen.insert(q.clone()) {
                relators.push(q.clone());
            }
        }
        for sigma in MonoidElement::up_to_length(phi.len(), depth) {
            for r in &self.iterated {
                let img = sigma.apply(&phi, r);
                if seen.insert(img.clone()) {
                    relators.push(img);
                }
            }
        }
        FinitePresentation {
            alphabet: self.alphabet.clone(),
            relators,
        }
    }

    /// Free product, each substitution extended by the identity on the other factor.
    pub fn free_product(g: &LPresentation, h: &LPresentation) -> LPresentation {
        let (ng, nh) = (g.rank(), h.rank());
        let total = ng + nh;
        let alphabet = g.alphabet.disjoint_union(&h.alphabet);
        let sub_names = disjoint_names(&g.substitution_names(), &h.substitution_names());
        let both_invariant = g.is_invariant() && h.is_invariant();
        let shift = |w: &Word| w.relabel(|x| x + ng);

        let mut substitutions = Vec::new();
        for (k, s) in g.substitutions.iter().enumerate() {
            substitutions.push(Substitution {
                name: sub_names[k].clone(),
                endo: s.endo.extend(0, total),
            });
        }
        for (k, s) in h.substitutions.iter().enumerate() {
            substitutions.push(Substitution {
                name: sub_names[g.substitutions.len() + k].clone(),
                endo: s.endo.extend(ng, total),
            });
        }

        if both_invariant {
            let iterated = g
                .fixed
                .iter()
                .chain(&g.iterated)
                .cloned()
                .chain(h.fixed.iter().chain(&h.iterated).map(shift))
                .collect();
            LPresentation {
                alphabet,
                fixed: Vec::new(),
                substitutions,
                iterated,
                invariance: Invariance::AssertedInvariant,
            }
        } else {
            LPresentation {
                alphabet,
                fixed: g.fixed.iter().cloned().chain(h.fixed.iter().map(shift)).collect(),
                substitutions,
                iterated: g
                    .iterated
                    .iter()
                    .cloned()
                    .chain(h.iterated.iter().map(shift))
                    .collect(),
                invariance: Invariance::NotAsserted,
            }
        }
    }

    /// L-presentation of an extension `1 -> G -> K -> H -> 1` with `H` finitely presented.
    ///
    /// `lifts[i]` is the element of `G` (a word over `X`) that the `i`-th relator of `H`
    /// lifts to; `action[x][t]` is the word over `X` equal to `x^t = t^-1 x t`.
    /// New generators come after `X`. The result is never flagged invariant.
    pub fn finite_extension(
        g: &LPresentation,
        h: &FinitePresentation,
        lifts: &[Word],
        action: &[Vec<Word>],
    ) -> Result<LPresentation> {
        if h.alphabet.is_empty() && h.relators.is_empty() {
            return Ok(g.clone());
        }
        if lifts.len() != h.relators.len() {
            return Err(Error::Malformed(format!(
                "{} lifts for {} relators",
                lifts.len(),
                h.relators.len()
            )));
        }
        if action.len() != g.rank() || action.iter().any(|row| row.len() != h.alphabet.len()) {
            return Err(Error::Malformed(
                "action must give one word per (generator, quotient generator) pair".into(),
            ));
        }
        for w in lifts.iter().chain(action.iter().flatten()) {
            g.alphabet.check_word(w)?;
        }
        for r in &h.relators {
            h.alphabet.check_word(r)?;
        }

        let nx = g.rank();
        let total = nx + h.alphabet.len();
        let alphabet = g.alphabet.disjoint_union(&h.alphabet);
        let shift = |w: &Word| w.relabel(|y| y + nx);

        let mut fixed = g.fixed.clone();
        for (r, lift) in h.relators.iter().zip(lifts) {
            fixed.push(shift(r).mul(&lift.inverse()));
        }
        for (x, row) in action.iter().enumerate() {
            for (t, img) in row.iter().enumerate() {
                let conj = Word::generator(x).conjugate_by(&Word::generator(nx + t));
                fixed.push(conj.mul(&img.inverse()));
            }
        }
        let substitutions = g
            .substitutions
            .iter()
            .map(|s| Substitution {
                name: s.name.clone(),
                endo: s.endo.extend(0, total),
            })
            .collect();
        Ok(LPresentation {
            alphabet,
            fixed,
            substitutions,
            iterated: g.iterated.clone(),
            invariance: Invariance::NotAsserted,
        })
    }

    /// Quotient by the normal closure of `normal_gens`. When the presentation is invariant
    /// and the caller asserts that the normal subgroup is invariant under the substitutions,
    /// the result is ascending and flagged invariant.
    pub fn factor(&self, normal_gens: &[Word], phi_invariant: bool) -> Result<LPresentation> {
        for w in normal_gens {
            self.alphabet.check_word(w)?;
        }
        if self.is_invariant() && phi_invariant {
            let iterated = self
                .fixed
                .iter()
                .chain(&self.iterated)
                .chain(normal_gens)
                .cloned()
                .collect();
            return Ok(LPresentation {
                alphabet: self.alphabet.clone(),
                fixed: Vec::new(),
                substitutions: self.substitutions.clone(),
                iterated,
                invariance: Invariance::AssertedInvariant,
            });
        }
        let mut fixed = self.fixed.clone();
        fixed.extend(normal_gens.iter().cloned());
        let invariance = if normal_gens.is_empty() {
            self.invariance
        } else {
            Invariance::NotAsserted
        };
        Ok(LPresentation {
            alphabet: self.alphabet.clone(),
            fixed,
            substitutions: self.substitutions.clone(),
            iterated: self.iterated.clone(),
            invariance,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: usize = 0;
    const B: usize = 1;

    fn w(s: &[(usize, i64)]) -> Word {
        Word::from_syllables(s)
    }

    fn basilica_sigma() -> FreeEndomorphism {
        FreeEndomorphism::new(vec![w(&[(B, 2)]), w(&[(A, 1)])]).unwrap()
    }

    fn basilica_relator() -> Word {
        let a = Word::generator(A);
        let b = Word::generator(B);
        Word::commutator(&a, &a.conjugate_by(&b))
    }

    fn basilica() -> LPresentation {
        LPresentation::ascending(
            Alphabet::new(["a", "b"]).unwrap(),
            vec![Substitution {
                name: "sigma".into(),
                endo: basilica_sigma(),
            }],
            vec![basilica_relator()],
        )
        .unwrap()
    }

    #[test]
    fn reduce_cancels() {
        let word = Word::from_letters([Letter::pos(A), Letter::neg(A), Letter::pos(B)]);
        assert_eq!(word, Word::generator(B));
        assert!(Word::from_letters([]).is_identity());
    }

    #[test]
    fn commutator_is_already_reduced() {
        let r = basilica_relator();
        assert_eq!(r.len(), 8);
        assert!(r.letters().windows(2).all(|p| p[0] != p[1].inverse()));
        assert_eq!(
            r,
            w(&[(A, -1), (B, -1), (A, -1), (B, 1), (A, 1), (B, -1), (A, 1), (B, 1)])
        );
    }

    #[test]
    fn reduce_rejects_unknown_generator() {
        let alpha = Alphabet::new(["a", "b"]).unwrap();
        assert!(alpha.reduce(&[Letter::pos(2)]).is_err());
    }

    #[test]
    fn basilica_sigma_images() {
        let s = basilica_sigma();
        assert_eq!(s.apply(&w(&[(A, 1), (B, 1)])), w(&[(B, 2), (A, 1)]));
        assert_eq!(
            s.apply(&basilica_relator()),
            w(&[(B, -2), (A, -1), (B, -2), (A, 1), (B, 2), (A, -1), (B, 2), (A, 1)])
        );
        let id = FreeEndomorphism::identity(2);
        assert_eq!(id.apply(&basilica_relator()), basilica_relator());
    }

    #[test]
    fn compose_sigma_twice() {
        let s = basilica_sigma();
        let s2 = FreeEndomorphism::compose(&s, &s).unwrap();
        assert_eq!(s2.images(), &[w(&[(A, 2)]), w(&[(B, 2)])]);
        let id = FreeEndomorphism::identity(2);
        assert_eq!(FreeEndomorphism::compose(&id, &s).unwrap(), s);
        assert_eq!(FreeEndomorphism::compose(&s, &id).unwrap(), s);
    }

    #[test]
    fn compose_rank_mismatch() {
        let e = FreeEndomorphism::identity(3);
        assert!(FreeEndomorphism::compose(&basilica_sigma(), &e).is_err());
        assert!(e.try_apply(&Word::generator(5)).is_err());
    }

    #[test]
    fn monoid_order_is_right_lexicographic() {
        let a = MonoidElement::new(vec![1, 0]);
        let b = MonoidElement::new(vec![0, 1]);
        // compared at the rightmost factor first: 0 < 1
        assert!(a < b);
        assert!(MonoidElement::generator(1) < MonoidElement::new(vec![0, 0]));
        let all = MonoidElement::up_to_length(2, 3);
        assert_eq!(all.len(), 1 + 2 + 4 + 8);
        assert!(all.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn monoid_display() {
        let names = ["sigma"];
        assert_eq!(MonoidElement::power(0, 3).display(&names), "sigma^3");
        assert_eq!(MonoidElement::identity().display(&names), "id");
        let names = ["phi1", "phi2"];
        assert_eq!(MonoidElement::new(vec![1, 0]).display(&names), "phi2*phi1");
        assert_eq!(MonoidElement::new(vec![1, 1, 0]).ident(&names), "phi22_phi1");
    }

    #[test]
    fn as_ascending_basilica_unchanged() {
        let lp = basilica();
        assert_eq!(lp.as_ascending().unwrap(), lp);
    }

    #[test]
    fn as_ascending_requires_invariance() {
        let lp = basilica().factor(&[Word::generator(A)], false).unwrap();
        assert_eq!(lp.invariance(), Invariance::NotAsserted);
        assert!(matches!(lp.as_ascending(), Err(Error::InvarianceRequired)));
    }

    #[test]
    fn instantiate_basilica() {
        let lp = basilica();
        assert_eq!(lp.instantiate(0).relators, vec![basilica_relator()]);
        let b2 = w(&[(B, 2)]);
        let expected = Word::commutator(&b2, &b2.conjugate_by(&Word::generator(A)));
        assert_eq!(lp.instantiate(1).relators, vec![basilica_relator(), expected]);
    }

    #[test]
    fn instantiate_is_monotone_and_bounded() {
        let fp = LPresentation::free_product(&basilica(), &basilica());
        for d in 0..4 {
            let small = fp.instantiate(d).relators;
            let big = fp.instantiate(d + 1).relators;
            assert!(small.iter().all(|r| big.contains(r)));
            // |R| (|Phi|^(d+1) - 1) / (|Phi| - 1) with |Phi| = 2
            assert!(small.len() <= 2 * ((1 << (d + 1)) - 1));
        }
    }

    #[test]
    fn free_product_counts() {
        let g = basilica();
        let p = LPresentation::free_product(&g, &g);
        assert_eq!(p.rank(), 4);
        assert_eq!(p.alphabet().names(), &["a", "b", "a1", "b1"]);
        assert_eq!(p.substitutions().len(), 2);
        assert_eq!(p.substitution_names(), vec!["sigma", "sigma1"]);
        assert_eq!(p.iterated().len(), 2);
        assert!(p.is_invariant());
        // second copy of sigma fixes the first factor
        let s2 = &p.substitutions()[1].endo;
        assert_eq!(s2.image(0), &Word::generator(0));
        assert_eq!(s2.image(2), &w(&[(3, 2)]));
    }

    #[test]
    fn free_product_with_trivial() {
        let g = basilica();
        assert_eq!(LPresentation::free_product(&g, &LPresentation::trivial()), g);
    }

    #[test]
    fn factor_constructions() {
        let g = basilica();
        let f = g.factor(&[Word::generator(A)], false).unwrap();
        assert_eq!(f.fixed(), &[Word::generator(A)]);
        assert_eq!(g.factor(&[], false).unwrap(), g);
        let inv = g.factor(&[Word::generator(A)], true).unwrap();
        assert!(inv.is_ascending() && inv.is_invariant());
        assert_eq!(inv.iterated().len(), 2);
    }

    #[test]
    fn finite_extension_trivial_quotient() {
        let g = basilica();
        let ext = LPresentation::finite_extension(&g, &FinitePresentation::trivial(), &[], &[])
            .unwrap();
        assert_eq!(ext, g);
    }

    #[test]
    fn finite_extension_counts() {
        let g = basilica();
        let h = FinitePresentation::new(
            Alphabet::new(["t"]).unwrap(),
            vec![Word::from_syllables(&[(0, 2)])],
        )
        .unwrap();
        let lifts = vec![Word::identity()];
        let action = vec![vec![Word::generator(B)], vec![Word::generator(A)]];
        let ext = LPresentation::finite_extension(&g, &h, &lifts, &action).unwrap();
        assert_eq!(ext.rank(), 3);
        assert_eq!(ext.fixed().len(), 1 + 2);
        assert_eq!(ext.iterated().len(), 1);
        assert_eq!(ext.invariance(), Invariance::NotAsserted);
        assert_eq!(ext.substitutions()[0].endo.image(2), &Word::generator(2));
        // t^-1 a t b^-1
        assert_eq!(ext.fixed()[1], w(&[(2, -1), (A, 1), (2, 1), (B, -1)]));
        assert!(LPresentation::finite_extension(&g, &h, &[], &action).is_err());
    }

    #[test]
    fn word_display() {
        let names = ["a", "b"];
        let word = w(&[(B, 2), (A, 1), (B, -1)]);
        assert_eq!(word.display(&names).to_string(), "b^2*a*b^-1");
        assert_eq!(Word::identity().display(&names).to_string(), "1");
    }

    #[test]
    fn cyclic_reduction() {
        let word = w(&[(A, 1), (B, 1), (A, -1)]);
        assert_eq!(word.cyclically_reduced(), Word::generator(B));
    }
}
