//! Generalized strong external difference families (GSEDFs) in finite
//! abelian groups.
//!
//! A `(v, m; k_1..k_m; lambda_1..lambda_m)`-GSEDF is a collection of `m`
//! pairwise-disjoint subsets `D_i` of a group `G` of order `v` with
//! `|D_i| = k_i`, such that for each `i` the external differences
//! `D_i - D_j` (over all `j != i`) cover every nonzero element exactly
//! `lambda_i` times.
//!
//! The crate provides exact group and field arithmetic, exact and spectral
//! verifiers, the known explicit constructions, parameter filters and
//! enumeration, an exhaustive backtracking search, and the cyclic
//! complete-bipartite decompositions induced by two-set families.

pub mod arith;
pub mod construct;
pub mod decomp;
pub mod error;
pub mod family;
pub mod feasibility;
pub mod ffield;
pub mod group;
pub mod search;
pub mod verify;

pub use construct::{ConstructionRecipe, RecipeName};
pub use decomp::{decompose, emit, verify_decomposition, BipartiteBlock, Decomposition, EmitFormat};
pub use error::{Error, Result};
pub use family::DiffFamily;
pub use feasibility::{
    alpha_scan, catalog_lookup, classify, counting_solve, enumerate_params, rule_out, AlphaReport,
    Constraints, FeasibilityStatus, FeasibilityVerdict, ParamTuple,
};
pub use ffield::{FieldElement, FiniteField};
pub use group::{abelian_groups_of_order, AbelianGroup, DirectProduct, GroupElement, Multiset};
pub use search::{exhaustive_search, search_all_groups, SearchConfig, SearchOutcome, SearchStatus};
pub use verify::{
    coset_check, partition_equivalence_check, spectral_verify, verify_ds, verify_gsedf, verify_pds,
    VerifyReport,
};
