//! Non-classicality of average local quantum coherence under steering.
//!
//! The crate covers dense complex linear algebra for small systems, finite
//! fields and mutually unbiased bases, coherence measures, steering
//! assemblages and hidden-state models, the coherence functional `S` with its
//! model bounds, frame optimization, and randomized cross-checks.

pub mod assemblage;
pub mod coherence;
pub mod error;
pub mod gf;
pub mod mub;
pub mod naqc;
pub mod optimizer;
pub mod oracle;
pub mod qmatrix;

pub use assemblage::{realize, steer, validate, Assemblage, ModelEnsemble, ModelKind, ValidationMode};
pub use coherence::{coherence, CoherenceMeasure, MeasureKind};
pub use error::{Error, Result};
pub use mub::{mubs_prime_power, rotated_qubit_mubs, Basis, MubFamily};
pub use naqc::{bound, s_quantity, s_report, BoundKind, IndexPattern, NaqcReport};
pub use optimizer::{find_threshold, optimize_s, scan_werner, OptResult, Threshold};
pub use qmatrix::{werner, ComplexMatrix, DensityMatrix};
