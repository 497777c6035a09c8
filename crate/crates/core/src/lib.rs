//! Finite-index subgroups of finitely L-presented groups.
//!
//! The crate enumerates cosets of finite-index subgroups of groups given by
//! finite L-presentations `<X | Q | Phi | R>`, classifies such subgroups by how
//! the substitutions act on them, and computes L-presentations and abelian
//! invariants for them.

pub mod abelian;
pub mod analysis;
pub mod cosets;
pub mod error;
pub mod perms;
pub mod presentations;
pub mod words;

pub use abelian::{abelian_invariants, AbelianInvariants, IntegerMatrix};
pub use analysis::{
    analyze_subgroup, classify_subgroup, iterating_endomorphisms, leadsto_subtree, phi_leafs,
    stabilizing_core, stabilizing_subgroup, LeadstoTree, SubgroupReport, SubstitutionTree,
};
pub use cosets::{
    enumerate_cosets, kernel_table, low_index_tables, orbit_table, CosetTable, EnumerationLimits,
    SchreierData,
};
pub use error::{Error, Result};
pub use perms::{
    act_word, actions_equal, closure, compose_action, factors_through, GeneratorAction,
    PartialHom, Permutation,
};
pub use presentations::{best_strategy, present_with, Strategy, SubgroupPresentation};
pub use words::{
    Alphabet, FinitePresentation, FreeEndomorphism, GeneratorSymbol, Invariance, LPresentation,
    Letter, MonoidElement, Substitution, Word,
};
