//! Fidelity of finite-dimensional quantum channels.
//!
//! The channel fidelity of `S, T: S(H) -> S(K)` is the state fidelity of their
//! normalized Choi states, `F(S, T) = F(R_S / d, R_T / d)`. The crate provides the
//! representation machinery behind it (Kraus operators, Choi operators, Stinespring
//! isometries), the structural properties as executable checks, the dilation form of
//! Uhlmann's theorem, certified lower bounds on the completely bounded distance, and
//! three applications: Hamiltonian discrimination, preprocessing for perfect
//! discrimination of qubit unitaries, and verification of error-correcting codes.
//!
//! All linear algebra is generic over [`Real`] (`f64` and `f32`); the aliases at the
//! crate root fix the scalar to `f64`.

pub mod apps;
pub mod chanfid;
pub mod channels;
mod error;
pub mod matlin;
pub mod random;
mod scalar;
pub mod states;
pub mod tol;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type Complex64 = C<f64>;
pub type ComplexMatrix = matlin::Matrix<f64>;
pub type ComplexMatrix32 = matlin::Matrix<f32>;
pub type HermitianEigen = matlin::HermitianEigen<f64>;
pub type DensityMatrix = states::DensityMatrix<f64>;
pub type PureState = states::PureState<f64>;
pub type Povm = states::Povm<f64>;
pub type QuantumChannel = channels::QuantumChannel<f64>;
pub type QuantumChannel32 = channels::QuantumChannel<f32>;
pub type ChoiOperator = channels::ChoiOperator<f64>;
pub type StinespringIsometry = channels::StinespringIsometry<f64>;
pub type FidelityReport = chanfid::FidelityReport<f64>;
pub type BoundReport = chanfid::BoundReport<f64>;
