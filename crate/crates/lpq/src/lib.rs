//! Weighted Hardy constants and triviality classification of
//! `L_{p,q}`-cohomology and torsion.
//!
//! The crate computes the two-weight Hardy constant `χ_{p,q}(α, β, v0, v1)`
//! exactly (for power–log–exponential weights) or numerically, and applies
//! the resulting finiteness criteria to classify when the first weighted
//! `L_{p,q}`-cohomology of a half-interval, the degree-`j` cohomology of a
//! warped cylinder, and the `L_{p,q}`-torsion of a surface of revolution are
//! trivial.
//!
//! Start with [`hardy::hardy_constant`] for the analytic core, or with the
//! classifiers in [`half_interval`], [`cylinder`], and [`surface`] for the
//! geometric applications. The `lpq` binary exposes the same entry points on
//! the command line.

pub mod types;
pub mod special;
pub mod symfun;
pub mod quad;
pub mod hardy;
pub mod half_interval;
pub mod cylinder;
pub mod surface;

pub use special::sphere_volume;
pub use symfun::{parse_symfun, SymFun};
pub use symfun::asym::{Asym, AsymLimit, LocalVar};
pub use types::{
    make_exponents, Exponents, ExtendedValue, Interval, LpqError, Orientation, Result, Side,
    Tolerances, Verdict, VerdictStatus,
};
