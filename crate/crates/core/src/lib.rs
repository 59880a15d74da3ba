//! Numerical laboratory for the Landau problem: an electron (charge `-e`) in a
//! uniform magnetic field, studied across gauge choices.
//!
//! Natural units `ħ = 1` are used throughout. The building blocks are
//!
//! * [`params`]: physical parameters and uniform 2-D grids,
//! * [`special`]: Hermite / associated Laguerre polynomials and `ln n!`,
//! * [`gauge`]: vector potentials, polynomial gauge functions, U(1) phases,
//! * [`field`]: complex fields sampled on a grid and their quadrature,
//! * [`states`]: analytic eigenstates in every gauge family and packets,
//! * [`operators`]: gauge-covariant finite-difference operators,
//! * [`hall`]: crossed electric and magnetic fields, drift velocity,
//! * [`oscillator`]: exact 2-D oscillator algebra and Zeeman splitting,
//! * [`overlap`]: the symmetric ↔ Landau-gauge basis bridge,
//! * [`verify`]: the numbered acceptance checks shared by tests and CLI.

pub mod error;
pub mod exec;
pub mod field;
pub mod gauge;
pub mod hall;
pub mod operators;
pub mod oscillator;
pub mod overlap;
pub mod params;
pub mod special;
pub mod states;
pub mod verify;

pub use error::{LandauError, Result};
pub use exec::Exec;
pub use field::WaveField;
pub use gauge::{GaugeBase, GaugeSpec, PolynomialGaugeFunction, RadialProfile};
pub use operators::{Engine, ExpectationReport, FdOrder, OperatorKind, OperatorSpec};
pub use params::{GridSpec, PhysicalParams};
pub use states::{PacketForm, PacketSpec, QuantumNumbers, StateLabel};

pub use num_complex::Complex64 as C64;
