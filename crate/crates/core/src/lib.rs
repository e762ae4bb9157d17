//! Periodic de Bruijn triangles.
//!
//! Exact counts of permutations with a periodic up-down sequence, grouped by
//! last entry; their exponential generating functions as ratios of
//! determinants of Olivier functions; and the spectral problem governing the
//! large-row asymptotics of the triangles.

pub mod asymptotics;
pub mod egf;
pub mod error;
pub mod oracle;
pub mod spectral;
pub mod triangle;
pub mod updown;

pub use asymptotics::{convergence_report, growth_constant, law_ratio, ConvergenceReport, RowScale, StepFunction};
pub use egf::{closed_form, corollary1_total, expand_bivariate, olivier, theorem1_f, ClosedForm, TruncatedEGF};
pub use error::{Error, Result};
pub use spectral::{discretize, eigenfunction, find_lambda, power_iterate, EigenSolution, SpectralProblem};
pub use triangle::{
    build_debruijn, build_named, build_seidel, build_signed, Direction, ExactTriangle, FinitePrefix,
    NamedSystem, SeidelBoundary, Shape, Side, SystemName,
};
pub use updown::{normalize, SignSequence, UpDownPeriod};
