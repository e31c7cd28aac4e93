//! Spectral theory of discrete graph Laplacians through the bond scattering
//! picture.
//!
//! A graph with `B` bonds is viewed as `2B` directed bonds. At every vertex a
//! unitary (for real spectral parameter) scattering matrix maps incoming bond
//! amplitudes to outgoing ones; gluing them together gives the evolution
//! operator `U(λ)`, whose stationary vectors mark the Laplacian eigenvalues.
//! From `U(λ)` the crate builds
//!
//! - the secular function `Z_S(λ)` and its zeros ([`scattering`]),
//! - primitive periodic orbits and their amplitudes ([`orbits`]),
//! - the orbit zeta function, the Ihara and Stark zeta functions ([`zeta`]),
//! - the periodic-orbit trace formula for the spectral density ([`trace`]),
//! - the induced bi-stochastic Markov dynamics `M = |U|²` ([`classical`]).
//!
//! Every identity is computed along two independent routes (determinants vs.
//! orbit sums, closed forms vs. dense linear algebra) so the two can be
//! compared numerically.

pub mod classical;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod laplacian;
pub mod linalg;
pub mod orbits;
pub mod scattering;
pub mod trace;
pub mod zeta;

pub use error::{Error, Result};
pub use graph::{DirectedBondSpace, Graph, VertexDegrees};
pub use laplacian::{LaplacianKind, LaplacianOperator};
pub use linalg::{ComplexMatrix, SpectralResult};
pub use num_complex::Complex64;
