//! Exactly differentiable symbolic test functions.

pub mod cutoff;
pub mod expr;
pub mod fd;
pub mod multi_index;
pub mod params;
pub mod poly;

pub use cutoff::CutoffSpec;
pub use expr::{cutoff, differentiate, evaluate, Expr};
pub use fd::fd_consistency;
pub use multi_index::MultiIndex;
pub use params::SpaceParams;
pub use poly::Poly;
