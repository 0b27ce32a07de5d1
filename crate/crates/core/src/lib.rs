//! Option pricing and nonlinear wave models: Black–Scholes closed forms,
//! Jacobi elliptic wave solutions of the cubic Schrödinger equation, fits of
//! its probability density to option price curves, two-component (Manakov)
//! solutions with Hebbian-adapted coupling, and a split-step integrator.

pub mod black_scholes;
pub mod error;
pub mod fit;
pub mod manakov;
pub mod numerics;
pub mod random;
pub mod special;
pub mod waves;

pub use black_scholes::{OptionKind, OptionSpec};
pub use error::{Error, Result};
pub use fit::{FitResult, MarketPotential};
pub use num_complex::Complex64;
pub use numerics::{Boundary, Dispersion, EvolutionConfig, GridSpec, Potential};
pub use special::EllipticModulus;
pub use waves::{ComplexField, UniformGrid, WaveFamily, WaveParams};
