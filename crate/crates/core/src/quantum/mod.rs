//! Complex linear algebra and the quantum objects built on it: states,
//! measurements, Born probabilities and conditional assemblages.

pub mod assemblage;
pub mod builtin;
pub mod io;
pub mod linalg;
pub mod measurement;
pub mod state;

pub use assemblage::{conditional_assemblage, Assemblage};
pub use linalg::{c64, hermitian_spectrum, singular_values, ComplexMatrix, HermitianEigen, Spectrum};
pub use measurement::{born_probabilities, Measurement, MeasurementKind, MeasurementSet};
pub use state::{random_state, werner_state, DensityState, Purity, WernerFamily};
