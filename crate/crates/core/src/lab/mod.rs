//! Numerical checks of the multiplier, embedding, Bernstein and
//! logarithmic interpolation inequalities.

pub mod checks;
pub mod corpus;
pub mod quadrature;
pub mod radial;
pub mod report;

pub use checks::{check_bernstein, check_embedding, check_log_interpolation, check_multiplier_bound};
pub use corpus::{default_corpus, generate, generate_all, CorpusField, CorpusKind, CorpusSpec};
pub use radial::{build_extremizer, fit_sharpness, radial_norms, sharpness_curve, RadialProfile};
pub use report::{InequalityReport, ReportRow};
