pub mod cc;
pub mod composite;
pub mod engine;
pub mod field;
pub mod grid;
pub mod growth;
pub mod spec;
pub mod window;

pub use cc::{cc_distance, cc_seminorm_on_grid};
pub use composite::{
    composite_norm, theorem1_lhs, theorem1_rhs, NormBreakdown, NormTerm, NormVariant, TermEstimate, TermKind,
};
pub use engine::{
    kth_difference_seminorm, seminorm_ladder, seminorm_on_grid, sup_norm_on_grid, time_seminorm, weighted_seminorm,
    zygmund_seminorm, ZygmundVariant,
};
pub use field::{Field, PointEval, SymbolicField, TermRequest};
pub use grid::SampleGrid;
pub use growth::classify_growth;
pub use spec::{
    EpsRestriction, Growth, PairKind, Rung, SeminormEstimate, SeminormSpec, Tolerances, WeightConvention, Witness,
};
pub use window::{Ladder, LadderKind, Window};
