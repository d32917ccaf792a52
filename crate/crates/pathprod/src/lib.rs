//! Exact string-topology engine: graded homology models of manifolds,
//! loop spaces and spaces of paths with endpoints in a submanifold,
//! with the products and module actions that live on them.
//!
//! Everything is computed over an exact coefficient field (arbitrary-
//! precision rationals by default, or a prime field chosen per run);
//! truncated models refuse to answer outside their reliable degree
//! window instead of returning silent zeros.

pub mod bilinear;
pub mod catalog;
pub mod checks;
pub mod error;
pub mod graded;
pub mod liegroup;
pub mod linalg;
pub mod loops;
pub mod manifold;
pub mod report;
pub mod scalar;
pub mod stringtop;

pub mod presentation;

pub use bilinear::{BilinearTable, Completeness};
pub use catalog::{Catalog, EntryKind, ScenarioModel, BUILTIN_CATALOG_JSON};
pub use checks::{check_map, run_entry_checks};
pub use error::{EngineError, Result};
pub use liegroup::{
    build_sun_scenario, distinguish_module_structures, verify_counterexample, EmbeddingKind,
    SubgroupScenario,
};

pub use graded::{
    koszul_sign, koszul_swap, swap_tensor, tensor_space, tensor_space_trunc, BasisSymbol,
    GradedElement, GradedSpace, TensorSpace,
};
pub use loops::{
    graded_center, is_in_graded_center, DeclaredFreeLoopSpec, FreeLoopModel, LoopSpaceModel,
};
pub use manifold::{ManifoldMap, ManifoldModel, ManifoldSpec};
pub use presentation::{ExpandedRing, ExplicitData, RingKind, RingPresentation};
pub use report::{CheckLine, CheckStatus, Report};
pub use scalar::{Field, Scalar};
pub use stringtop::{
    check_algebra_over_loops, check_augmentation, check_generators, check_module, check_path_ring,
    check_ring, PathSpaceModel,
};
