//! Serializable views of command results.

use lpres_core::{AbelianInvariants, CosetTable, LPresentation, SubgroupReport, Word};
use serde::Serialize;

fn words(ws: &[Word], names: &[String]) -> Vec<String> {
    ws.iter().map(|w| w.display(names).to_string()).collect()
}

#[derive(Debug, Serialize)]
pub struct SubstitutionJson {
    pub name: String,
    /// Image of each generator, in generator order.
    pub images: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    pub fixed: Vec<String>,
    pub substitutions: Vec<SubstitutionJson>,
    pub iterated: Vec<String>,
    pub invariant: bool,
}

impl PresentationJson {
    pub fn new(lp: &LPresentation) -> Self {
        let names = lp.alphabet().names();
        PresentationJson {
            generators: names.to_vec(),
            fixed: words(lp.fixed(), names),
            substitutions: lp
                .substitutions()
                .iter()
                .map(|s| SubstitutionJson {
                    name: s.name.clone(),
                    images: words(s.endo.images(), names),
                })
                .collect(),
            iterated: words(lp.iterated(), names),
            invariant: lp.is_invariant(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TableJson {
    pub degree: usize,
    pub generators: Vec<String>,
    /// Image of each coset `1..=degree` under each generator.
    pub action: Vec<Vec<usize>>,
    pub subgroup_generators: Vec<String>,
}

impl TableJson {
    pub fn new(t: &CosetTable, names: &[String]) -> Self {
        TableJson {
            degree: t.index(),
            generators: names.to_vec(),
            action: t
                .action()
                .perms()
                .iter()
                .map(|p| p.images().into_iter().map(|i| i + 1).collect())
                .collect(),
            subgroup_generators: words(t.subgroup_gens(), names),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReportJson {
    pub index: usize,
    pub normal: bool,
    pub maximal: bool,
    pub phi_invariant: bool,
    pub leaf_invariant: bool,
    pub weakly_leaf_invariant_v: bool,
    pub weakly_leaf_invariant_vtilde: bool,
    pub v: Vec<String>,
    pub vtilde: Vec<String>,
    pub phi_leafs: Vec<String>,
    pub recommended: String,
}

impl From<&SubgroupReport> for ReportJson {
    fn from(r: &SubgroupReport) -> Self {
        ReportJson {
            index: r.index,
            normal: r.normal,
            maximal: r.maximal,
            phi_invariant: r.phi_invariant,
            leaf_invariant: r.leaf_invariant,
            weakly_leaf_invariant_v: r.weakly_leaf_invariant_v,
            weakly_leaf_invariant_vtilde: r.weakly_leaf_invariant_vtilde,
            v: r.v.clone(),
            vtilde: r.vtilde.clone(),
            phi_leafs: r.phi_leafs.clone(),
            recommended: r.recommended.tag().to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct QuotientJson {
    pub order: usize,
    pub abelian: bool,
    pub cyclic: bool,
    pub dihedral: bool,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeJson {
    pub subgroup: String,
    pub table: TableJson,
    pub report: ReportJson,
    pub quotient: Option<QuotientJson>,
}

#[derive(Debug, Serialize)]
pub struct DefinitionJson {
    pub name: String,
    pub word: String,
}

#[derive(Debug, Serialize)]
pub struct PresentJson {
    pub subgroup: String,
    pub strategy: String,
    pub presentation: PresentationJson,
    pub definitions: Vec<DefinitionJson>,
}

#[derive(Debug, Serialize)]
pub struct AbelianJson {
    pub subgroup: Option<String>,
    pub invariants: AbelianInvariants,
    pub display: String,
    /// True when the invariants come from a truncated instantiation.
    pub heuristic: bool,
    pub depth: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct LowIndexRow {
    pub index: usize,
    pub subgroups: usize,
    pub normal: usize,
    pub maximal: usize,
    pub leaf_invariant: usize,
    pub weakly_leaf_invariant: usize,
    pub normal_weakly_leaf_invariant: usize,
}

#[derive(Debug, Serialize)]
pub struct LowIndexJson {
    pub max_index: usize,
    pub rows: Vec<LowIndexRow>,
}

#[derive(Debug, Serialize)]
pub struct VerifyJson {
    pub subgroup: String,
    pub index: usize,
    pub depth: usize,
    pub relators_checked: usize,
    pub violations: Vec<String>,
    pub verified: bool,
}
