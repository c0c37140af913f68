//! Special torsion modules over the standard order of index `d` at a bad
//! place: the rank test, chart coordinates and the comparison with
//! freeness of kernels.

pub mod candidate;
pub mod error;
pub mod fmat;
pub mod sequence;

pub use candidate::{chart_point, special_test, CandidateJson, Shift, SpecialCandidate};
pub use error::{Result, SpecialError};
pub use fmat::FMat;
pub use sequence::{
    batch_reports, candidate_from_quotient, free_module, random_sequence, residue_filtration_test, standard_model,
    submodule_generated, FiltrationReport,
};
