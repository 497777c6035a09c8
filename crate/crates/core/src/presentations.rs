//! Presentations of finite-index subgroups: classical Reidemeister-Schreier for
//! finite presentations, invariant L-presentations for subgroups satisfying one
//! of the invariance conditions, and a general construction as a quotient of a
//! finite extension.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::{analyze_subgroup, stabilizing_core, SubstitutionTree};
use crate::cosets::{CosetTable, EnumerationLimits, SchreierData};
use crate::error::{Error, Result};
use crate::perms::{GeneratorAction, Permutation};
use crate::words::{
    Alphabet, FinitePresentation, Invariance, LPresentation, Letter,
    Substitution, Word,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Classical,
    InvariantNormal,
    LeafInvariant,
    WeaklyLeafInvariantNormal,
    General,
}

impl Strategy {
    pub fn tag(self) -> &'static str {
        match self {
            Strategy::Classical => "classical",
            Strategy::InvariantNormal => "invariant-normal",
            Strategy::LeafInvariant => "leaf-invariant",
            Strategy::WeaklyLeafInvariantNormal => "weakly-leaf-invariant-normal",
            Strategy::General => "general",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "classical" => Strategy::Classical,
            "invariant-normal" => Strategy::InvariantNormal,
            "leaf-invariant" => Strategy::LeafInvariant,
            "weak-normal" | "weakly-leaf-invariant-normal" => Strategy::WeaklyLeafInvariantNormal,
            "general" => Strategy::General,
            other => return Err(Error::Malformed(format!("unknown strategy {other:?}"))),
        })
    }
}

/// A subgroup presentation together with the data it was built from.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    pub presentation: LPresentation,
    pub strategy: Strategy,
    /// Schreier data of the subgroup (of the stabilizing core for the general strategy).
    pub schreier: SchreierData,
    pub tree: Option<SubstitutionTree>,
    /// Each generator of the presentation with its value as a word over the parent alphabet.
    pub generators: Vec<(String, Word)>,
}

fn inapplicable(strategy: Strategy, reason: impl Into<String>) -> Error {
    Error::StrategyInapplicable {
        strategy: strategy.tag().to_string(),
        reason: reason.into(),
    }
}

fn dictionary(sd: &SchreierData) -> Vec<(String, Word)> {
    sd.alphabet()
        .names()
        .iter()
        .cloned()
        .zip(sd.definition_words())
        .collect()
}

fn push_unique(out: &mut Vec<Word>, seen: &mut HashSet<Word>, w: Word) {
    if seen.insert(w.clone()) {
        out.push(w);
    }
}

/// Conjugation substitutions `u -> x u x^-1`, one per generator moving the base coset.
fn conjugations(lp_alphabet: &Alphabet, sd: &SchreierData) -> Result<Vec<Substitution>> {
    let table = sd.table();
    (0..table.rank())
        .filter(|&x| table.image(0, Letter::pos(x)) != 0)
        .map(|x| {
            Ok(Substitution {
                name: format!("delta_{}", lp_alphabet.name(x)),
                endo: sd.conjugation_endo(&Word::generator(x))?,
            })
        })
        .collect()
}

/// `<Y | {tau(t r t^-1)}>` for a finitely presented group.
pub fn classical_reidemeister_schreier(
    fp: &FinitePresentation,
    table: &CosetTable,
) -> Result<SubgroupPresentation> {
    if fp.alphabet.len() != table.rank() {
        return Err(Error::AlphabetMismatch("presentation and table differ in rank".into()));
    }
    let sd = SchreierData::new(table);
    let mut relators = Vec::new();
    let mut seen = HashSet::new();
    for t in sd.transversal() {
        for r in &fp.relators {
            let w = sd.rewrite(&t.mul(r).mul(&t.inverse()))?;
            push_unique(&mut relators, &mut seen, w);
        }
    }
    let presentation =
        LPresentation::new(sd.alphabet(), relators, vec![], vec![], Invariance::AssertedInvariant)?;
    Ok(SubgroupPresentation {
        presentation,
        strategy: Strategy::Classical,
        generators: dictionary(&sd),
        schreier: sd,
        tree: None,
    })
}

/// Invariant L-presentation of a normal subgroup mapped into itself by all substitutions.
pub fn invariant_normal_lpres(
    lp: &LPresentation,
    table: &CosetTable,
    limits: &EnumerationLimits,
) -> Result<SubgroupPresentation> {
    let s = Strategy::InvariantNormal;
    let asc = lp.as_ascending().map_err(|_| inapplicable(s, "presentation is not invariant"))?;
    let analysis = analyze_subgroup(&asc, table, limits)?;
    if !analysis.report.normal {
        return Err(inapplicable(s, "subgroup is not normal"));
    }
    if !analysis.report.phi_invariant {
        return Err(inapplicable(s, "subgroup is not invariant under the substitutions"));
    }
    let sd = SchreierData::new(table);
    let mut substitutions = Vec::new();
    for sub in asc.substitutions() {
        substitutions.push(Substitution {
            name: format!("{}_hat", sub.name),
            endo: sd.induced_endomorphism(&sub.endo)?,
        });
    }
    substitutions.extend(conjugations(asc.alphabet(), &sd)?);
    let mut iterated = Vec::new();
    let mut seen = HashSet::new();
    for r in asc.iterated() {
        push_unique(&mut iterated, &mut seen, sd.rewrite(r)?);
    }
    let presentation = LPresentation::ascending(sd.alphabet(), substitutions, iterated)?;
    Ok(SubgroupPresentation {
        presentation,
        strategy: s,
        generators: dictionary(&sd),
        schreier: sd,
        tree: Some(analysis.tree),
    })
}

/// Invariant L-presentation of a leaf-invariant subgroup.
pub fn leaf_invariant_lpres(
    lp: &LPresentation,
    table: &CosetTable,
    limits: &EnumerationLimits,
) -> Result<SubgroupPresentation> {
    let s = Strategy::LeafInvariant;
    let asc = lp.as_ascending().map_err(|_| inapplicable(s, "presentation is not invariant"))?;
    let analysis = analyze_subgroup(&asc, table, limits)?;
    if !analysis.report.leaf_invariant {
        return Err(inapplicable(s, "subgroup is not leaf-invariant"));
    }
    let phi = asc.endomorphisms();
    let names = asc.substitution_names();
    let sd = SchreierData::new(table);
    let mut substitutions = Vec::new();
    for leaf in analysis.tree.leafs() {
        let endo = leaf.element.to_endomorphism(&phi, asc.rank());
        substitutions.push(Substitution {
            name: format!("{}_hat", leaf.element.ident(&names)),
            endo: sd.induced_endomorphism(&endo)?,
        });
    }
    let mut iterated = Vec::new();
    let mut seen = HashSet::new();
    for node in analysis.tree.nodes() {
        for r in asc.iterated() {
            let rv = node.element.apply(&phi, r);
            for t in sd.transversal() {
                let w = sd.rewrite(&t.mul(&rv).mul(&t.inverse()))?;
                push_unique(&mut iterated, &mut seen, w);
            }
        }
    }
    let presentation = LPresentation::ascending(sd.alphabet(), substitutions, iterated)?;
    Ok(SubgroupPresentation {
        presentation,
        strategy: s,
        generators: dictionary(&sd),
        schreier: sd,
        tree: Some(analysis.tree),
    })
}

/// Invariant L-presentation of a normal subgroup whose factoring-tree leafs all
/// factor through the root action.
pub fn weakly_leaf_invariant_normal_lpres(
    lp: &LPresentation,
    table: &CosetTable,
    limits: &EnumerationLimits,
) -> Result<SubgroupPresentation> {
    let s = Strategy::WeaklyLeafInvariantNormal;
    let asc = lp.as_ascending().map_err(|_| inapplicable(s, "presentation is not invariant"))?;
    let analysis = analyze_subgroup(&asc, table, limits)?;
    if !analysis.report.normal {
        return Err(inapplicable(s, "subgroup is not normal"));
    }
    if !analysis.report.weakly_leaf_invariant_vtilde {
        return Err(inapplicable(s, "subgroup is not weakly leaf-invariant"));
    }
    let phi = asc.endomorphisms();
    let names = asc.substitution_names();
    let sd = SchreierData::new(table);
    let mut substitutions = Vec::new();
    for leaf in analysis.leadsto.leafs() {
        let endo = leaf.element.to_endomorphism(&phi, asc.rank());
        substitutions.push(Substitution {
            name: format!("{}_hat", leaf.element.ident(&names)),
            endo: sd.induced_endomorphism(&endo)?,
        });
    }
    substitutions.extend(conjugations(asc.alphabet(), &sd)?);
    let mut iterated = Vec::new();
    let mut seen = HashSet::new();
    for node in analysis.leadsto.nodes() {
        for r in asc.iterated() {
            push_unique(&mut iterated, &mut seen, sd.rewrite(&node.element.apply(&phi, r))?);
        }
    }
    let presentation = LPresentation::ascending(sd.alphabet(), substitutions, iterated)?;
    Ok(SubgroupPresentation {
        presentation,
        strategy: s,
        generators: dictionary(&sd),
        schreier: sd,
        tree: Some(analysis.leadsto),
    })
}

/// The finite group `UK / L` presented on chosen elements of `UK`.
struct CoreQuotient {
    /// Words over the parent alphabet whose images generate the quotient.
    gens: Vec<Word>,
    /// Presentation on `alpha`-generators, one per entry of `gens`.
    presentation: FinitePresentation,
    /// Regular action of the quotient on its elements.
    table: CosetTable,
    /// `points[k]` is the core coset of the `k`-th quotient element.
    points: Vec<usize>,
}

fn core_quotient(table: &CosetTable, core: &CosetTable) -> Result<CoreQuotient> {
    let order = core.index() / table.index();
    let candidates = SchreierData::new(table).definition_words();
    let mut gens: Vec<Word> = Vec::new();
    let mut points = vec![0usize];
    let orbit = |gens: &[Word]| -> Vec<usize> {
        let mut pts = vec![0usize];
        let mut head = 0;
        while head < pts.len() {
            let p = pts[head];
            head += 1;
            for g in gens {
                let q = core.trace(p, g);
                if !pts.contains(&q) {
                    pts.push(q);
                }
            }
        }
        pts
    };
    for u in candidates {
        if points.len() == order {
            break;
        }
        let mut trial = gens.clone();
        trial.push(u.clone());
        let pts = orbit(&trial);
        if pts.len() > points.len() {
            gens = trial;
            points = pts;
        }
    }
    debug_assert_eq!(points.len(), order);
    let position = |c: usize| points.iter().position(|&p| p == c).unwrap();
    let perms = gens
        .iter()
        .map(|g| {
            Permutation::new(points.iter().map(|&p| position(core.trace(p, g))).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let qtable = CosetTable::from_action(GeneratorAction::new(points.len(), perms)?)?;
    let names = if gens.len() == 1 {
        vec!["alpha".to_string()]
    } else {
        Alphabet::numbered("alpha", gens.len()).names().to_vec()
    };
    let presentation = FinitePresentation::new(
        Alphabet::new(names)?,
        SchreierData::new(&qtable).definition_words(),
    )?;
    Ok(CoreQuotient {
        gens,
        presentation,
        table: qtable,
        points,
    })
}

/// L-presentation of any finite-index subgroup, as a quotient of a finite
/// extension of its stabilizing core. The result is not flagged invariant.
pub fn general_subgroup_lpres(
    lp: &LPresentation,
    table: &CosetTable,
    limits: &EnumerationLimits,
) -> Result<SubgroupPresentation> {
    let cover = lp.ascending_cover();
    let core = stabilizing_core(&cover, table, limits)?;
    let core_pres = invariant_normal_lpres(&cover, &core, limits)?;
    let sd = core_pres.schreier.clone();
    let quotient = core_quotient(table, &core)?;

    let substitute = |w: &Word| -> Word {
        w.letters().iter().fold(Word::identity(), |acc, l| {
            let g = &quotient.gens[l.gen()];
            acc.mul(&if l.is_inverse() { g.inverse() } else { g.clone() })
        })
    };
    let lifts = quotient
        .presentation
        .relators
        .iter()
        .map(|rho| sd.rewrite(&substitute(rho)))
        .collect::<Result<Vec<_>>>()?;
    let action = sd
        .definition_words()
        .iter()
        .map(|y| {
            quotient
                .gens
                .iter()
                .map(|u| sd.rewrite(&y.conjugate_by(u)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let extension =
        LPresentation::finite_extension(&core_pres.presentation, &quotient.presentation, &lifts, &action)?;

    // express elements of the subgroup over core generators followed by alphas
    let nx = sd.rank();
    let qsd = SchreierData::new(&quotient.table);
    let express = |w: &Word| -> Result<Word> {
        let p = core.trace(0, w);
        let k = quotient
            .points
            .iter()
            .position(|&q| q == p)
            .ok_or(Error::NotMember)?;
        let s_alpha = &qsd.transversal()[k];
        let s_x = substitute(s_alpha);
        let rest = sd.rewrite(&s_x.inverse().mul(w))?;
        Ok(s_alpha.relabel(|a| a + nx).mul(&rest))
    };
    let mut normal_gens = Vec::new();
    let mut seen = HashSet::new();
    for t in SchreierData::new(table).transversal() {
        for q in lp.fixed() {
            let w = express(&t.mul(q).mul(&t.inverse()))?;
            push_unique(&mut normal_gens, &mut seen, w);
        }
    }
    let presentation = extension.factor(&normal_gens, false)?;

    let values = sd.definition_words().into_iter().chain(quotient.gens.iter().cloned());
    let generators = presentation.alphabet().names().iter().cloned().zip(values).collect();
    Ok(SubgroupPresentation {
        presentation,
        strategy: Strategy::General,
        schreier: sd,
        tree: core_pres.tree,
        generators,
    })
}

/// Runs one construction by tag.
pub fn present_with(
    strategy: Strategy,
    lp: &LPresentation,
    table: &CosetTable,
    limits: &EnumerationLimits,
) -> Result<SubgroupPresentation> {
    match strategy {
        Strategy::Classical => {
            if !lp.substitutions().is_empty() {
                return Err(inapplicable(strategy, "presentation has substitutions"));
            }
            classical_reidemeister_schreier(&lp.instantiate(0), table)
        }
        Strategy::InvariantNormal => invariant_normal_lpres(lp, table, limits),
        Strategy::LeafInvariant => leaf_invariant_lpres(lp, table, limits),
        Strategy::WeaklyLeafInvariantNormal => weakly_leaf_invariant_normal_lpres(lp, table, limits),
        Strategy::General => general_subgroup_lpres(lp, table, limits),
    }
}

/// Tries the invariant constructions from strongest to weakest and falls back
/// to the general one.
pub fn best_strategy(
    lp: &LPresentation,
    table: &CosetTable,
    limits: &EnumerationLimits,
) -> Result<SubgroupPresentation> {
    for s in [
        Strategy::InvariantNormal,
        Strategy::LeafInvariant,
        Strategy::WeaklyLeafInvariantNormal,
    ] {
        match present_with(s, lp, table, limits) {
            Err(Error::StrategyInapplicable { .. }) => continue,
            other => return other,
        }
    }
    general_subgroup_lpres(lp, table, limits)
}
