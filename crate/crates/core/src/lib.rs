//! Generalized entropies and quasilinear means.
//!
//! Deformed q-algebra, finite distributions, Kolmogorov-Nagumo means, the
//! Shannon/Rényi/Tsallis family, and randomized checks of the
//! characterization results that tie them together.

pub mod entropy;
pub mod error;
pub mod json;
pub mod knmean;
pub mod pmf;
pub mod qalgebra;
pub mod report;
pub mod sampling;
pub mod theoremlab;

pub use entropy::{entropy_report, renyi, shannon, tsallis, EntropyReport};
pub use error::{Error, Result};
pub use knmean::{kn_mean, KnFunction, KnMeanInput};
pub use pmf::Pmf;
pub use qalgebra::QParam;
pub use report::{LabConfig, Verdict, VerificationReport, Witness};
