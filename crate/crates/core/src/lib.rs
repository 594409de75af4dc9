//! Matrix-valued Nevanlinna functions under the maps `M ↦ M⁻¹/(λ² − 1)` and
//! `ℳ ↦ −(ℳ + λ)⁻¹`: their fixed points, operator realizations, block Jacobi
//! m-functions, and the step Hamiltonians of the Kac algorithm.

pub mod error;
pub mod herglotz;
pub mod json;
pub mod linalg;
pub mod random;
pub mod specialfn;
pub mod jacobi;
pub mod transforms;
pub mod realize;
pub mod kac;
pub mod canonical;
pub mod verify;
pub mod cli;
