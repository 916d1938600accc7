//! Construction, verification and classification of finite-energy abelian
//! vortices on the complex plane with target `C^N`.
//!
//! A vortex is encoded by its polynomial data (an *N-pair* of complex
//! polynomials) together with the real scalar `h` solving the Kazdan-Warner
//! equation
//!
//! ```text
//!     Δh + (1/2) (e^{-2h} Σ_j |ψ_j(z)|² − 1) = 0
//! ```
//!
//! on a truncated polar disk. From `(pair, h)` the crate reconstructs the
//! connection and Higgs field and computes energy, decay and evaluation at
//! infinity. Alongside the solver it provides the combinatorial layer:
//! stratum classification of the degeneration compactifications, the
//! bubbling criterion arithmetic on sampled sequences, and exact arithmetic
//! in `QH*(P^{N-1}) = R[c,q]/(c^N - q)` with the quantum Kirwan map.

pub mod error;
pub mod grid;
pub mod kw;
pub mod moduli;
pub mod poly;
pub mod qh;
pub mod radial;
pub mod roots;
pub mod vortex;

pub use error::VortexError;
pub use num_complex::Complex64;
