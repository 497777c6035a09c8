//! Finite sets of representative substitutions for a permutation
//! representation, subgroup classification, and stabilizing subgroups.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::cosets::{kernel_table, orbit_table, CosetTable, EnumerationLimits, SchreierData};
use crate::error::Result;
use crate::perms::{compose_action, factors_through, GeneratorAction, PartialHom};
use crate::presentations::Strategy;
use crate::words::{FreeEndomorphism, LPresentation, MonoidElement};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub element: MonoidElement,
    /// The composite `element` followed by the root action.
    pub action: GeneratorAction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leaf {
    pub element: MonoidElement,
    pub action: GeneratorAction,
    /// Index of the node this leaf is resolved to.
    pub resolution: usize,
    /// Homomorphism from the node's image onto the leaf's image, for factoring trees.
    pub witness: Option<PartialHom>,
}

/// Target of the edge `(psi, node)`, i.e. of the element `psi * node`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Edge {
    Node(usize),
    Leaf(usize),
}

/// The tree of representatives. Nodes are in increasing order and node 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionTree {
    nodes: Vec<TreeNode>,
    leafs: Vec<Leaf>,
    /// `edges[node][psi]`.
    edges: Vec<Vec<Edge>>,
}

/// Same shape, with leafs resolved by factoring instead of equality.
pub type LeadstoTree = SubstitutionTree;

impl SubstitutionTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn leafs(&self) -> &[Leaf] {
        &self.leafs
    }

    pub fn elements(&self) -> Vec<MonoidElement> {
        self.nodes.iter().map(|n| n.element.clone()).collect()
    }

    pub fn root_action(&self) -> &GeneratorAction {
        &self.nodes[0].action
    }

    pub fn edge(&self, node: usize, psi: usize) -> Edge {
        self.edges[node][psi]
    }

    /// Rewrites `sigma` to the node it is equivalent to, consuming factors from
    /// the right and replacing each leaf by its resolution.
    pub fn resolve(&self, sigma: &MonoidElement) -> usize {
        let mut node = 0;
        for &psi in sigma.factors().iter().rev() {
            node = match self.edges[node][psi] {
                Edge::Node(k) => k,
                Edge::Leaf(l) => self.leafs[l].resolution,
            };
        }
        node
    }

    fn build(
        phi: &[FreeEndomorphism],
        action: &GeneratorAction,
        mut settle: impl FnMut(&GeneratorAction, &[TreeNode]) -> Result<Option<(usize, Option<PartialHom>)>>,
    ) -> Result<Self> {
        let mut tree = SubstitutionTree {
            nodes: vec![TreeNode {
                element: MonoidElement::identity(),
                action: action.clone(),
            }],
            leafs: Vec::new(),
            edges: vec![Vec::with_capacity(phi.len())],
        };
        let mut queue: VecDeque<(usize, usize)> = (0..phi.len()).map(|psi| (psi, 0)).collect();
        while let Some((psi, parent)) = queue.pop_front() {
            let element = tree.nodes[parent].element.prepend(psi);
            let child = compose_action(&tree.nodes[parent].action, &phi[psi])?;
            let edge = match settle(&child, &tree.nodes)? {
                Some((resolution, witness)) => {
                    tree.leafs.push(Leaf {
                        element,
                        action: child,
                        resolution,
                        witness,
                    });
                    Edge::Leaf(tree.leafs.len() - 1)
                }
                None => {
                    let k = tree.nodes.len();
                    tree.nodes.push(TreeNode {
                        element,
                        action: child,
                    });
                    tree.edges.push(Vec::with_capacity(phi.len()));
                    queue.extend((0..phi.len()).map(|p| (p, k)));
                    Edge::Node(k)
                }
            };
            tree.edges[parent].push(edge);
        }
        Ok(tree)
    }
}

/// Breadth-first search over the substitution monoid, stopping at elements whose
/// composite action equals that of an earlier element.
pub fn iterating_endomorphisms(
    phi: &[FreeEndomorphism],
    action: &GeneratorAction,
) -> Result<SubstitutionTree> {
    let mut seen: HashMap<GeneratorAction, usize> = HashMap::from([(action.clone(), 0)]);
    SubstitutionTree::build(phi, action, |child, nodes| {
        if let Some(&k) = seen.get(child) {
            return Ok(Some((k, None)));
        }
        seen.insert(child.clone(), nodes.len());
        Ok(None)
    })
}

/// Leafs whose action equals the root action.
pub fn phi_leafs(tree: &SubstitutionTree) -> Vec<MonoidElement> {
    tree.leafs
        .iter()
        .filter(|l| l.action == *tree.root_action())
        .map(|l| l.element.clone())
        .collect()
}

/// Like [`iterating_endomorphisms`], but an element becomes a leaf as soon as its
/// action factors through the action of an existing node, resolving to the
/// smallest such node.
pub fn leadsto_subtree(
    phi: &[FreeEndomorphism],
    action: &GeneratorAction,
    cap: usize,
) -> Result<LeadstoTree> {
    SubstitutionTree::build(phi, action, |child, nodes| {
        for (k, node) in nodes.iter().enumerate() {
            if let Some(w) = factors_through(child, &node.action, cap)? {
                return Ok(Some((k, Some(w))));
            }
        }
        Ok(None)
    })
}

/// Leafs of the factoring tree whose action factors through the root action.
fn leadsto_root(tree: &SubstitutionTree, cap: usize) -> Result<bool> {
    for l in &tree.leafs {
        if l.resolution != 0 && factors_through(&l.action, tree.root_action(), cap)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupReport {
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
    pub recommended: Strategy,
}

/// Everything [`classify_subgroup`] computes, with the trees kept.
#[derive(Clone, Debug)]
pub struct SubgroupAnalysis {
    pub table: CosetTable,
    pub tree: SubstitutionTree,
    pub leadsto: LeadstoTree,
    pub report: SubgroupReport,
}

/// Whether every substitution in the monoid maps the subgroup into itself.
pub fn is_phi_invariant(table: &CosetTable, tree: &SubstitutionTree) -> bool {
    let gens = SchreierData::new(table).definition_words();
    tree.nodes.iter().all(|node| {
        gens.iter()
            .all(|u| node.action.trace(0, u) == 0)
    })
}

pub fn analyze_subgroup(
    lp: &LPresentation,
    table: &CosetTable,
    limits: &EnumerationLimits,
) -> Result<SubgroupAnalysis> {
    let phi = lp.endomorphisms();
    let cap = limits.closure_cap;
    let tree = iterating_endomorphisms(&phi, table.action())?;
    let leadsto = leadsto_subtree(&phi, table.action(), cap)?;
    let psi = phi_leafs(&tree);
    let normal = table.is_normal();
    let phi_invariant = is_phi_invariant(table, &tree);
    let leaf_invariant = psi.len() == tree.leafs.len();
    let mut wli_v = true;
    for l in &tree.leafs {
        if factors_through(&l.action, tree.root_action(), cap)?.is_none() {
            wli_v = false;
            break;
        }
    }
    let wli_vtilde = leadsto_root(&leadsto, cap)?;
    let recommended = if !lp.is_invariant() {
        Strategy::General
    } else if normal && phi_invariant {
        Strategy::InvariantNormal
    } else if leaf_invariant {
        Strategy::LeafInvariant
    } else if normal && wli_vtilde {
        Strategy::WeaklyLeafInvariantNormal
    } else {
        Strategy::General
    };
    let names = lp.substitution_names();
    let show = |t: &SubstitutionTree| -> Vec<String> {
        t.nodes.iter().map(|n| n.element.display(&names)).collect()
    };
    let report = SubgroupReport {
        index: table.index(),
        normal,
        maximal: table.is_maximal(),
        phi_invariant,
        leaf_invariant,
        weakly_leaf_invariant_v: wli_v,
        weakly_leaf_invariant_vtilde: wli_vtilde,
        v: show(&tree),
        vtilde: show(&leadsto),
        phi_leafs: psi.iter().map(|e| e.display(&names)).collect(),
        recommended,
    };
    Ok(SubgroupAnalysis {
        table: table.clone(),
        tree,
        leadsto,
        report,
    })
}

pub fn classify_subgroup(
    lp: &LPresentation,
    table: &CosetTable,
    limits: &EnumerationLimits,
) -> Result<SubgroupReport> {
    Ok(analyze_subgroup(lp, table, limits)?.report)
}

/// The largest subgroup of the given one that every substitution maps into itself.
pub fn stabilizing_subgroup(
    lp: &LPresentation,
    table: &CosetTable,
    limits: &EnumerationLimits,
) -> Result<CosetTable> {
    let tree = iterating_endomorphisms(&lp.endomorphisms(), table.action())?;
    let components: Vec<(GeneratorAction, usize)> =
        tree.nodes.iter().map(|n| (n.action.clone(), 0)).collect();
    orbit_table(&components, limits.max_cosets)
}

/// The largest normal subgroup of the given one that every substitution maps into itself.
pub fn stabilizing_core(
    lp: &LPresentation,
    table: &CosetTable,
    limits: &EnumerationLimits,
) -> Result<CosetTable> {
    let tree = iterating_endomorphisms(&lp.endomorphisms(), table.action())?;
    let components: Vec<GeneratorAction> = tree.nodes.iter().map(|n| n.action.clone()).collect();
    kernel_table(&components, limits.closure_cap)
}
