//! Spectral networks of rational quadratic differentials
//!
//! ```text
//!     q(z) dz^2 = (z^k + a_{k-1} z^{k-1} + ... + a_0) / z  dz^2
//! ```
//!
//! The crate traces the critical horizontal and vertical trajectories of such
//! differentials, reads off their strip and half-plane domains, encodes the
//! result as weighted graphs and chord diagrams, and relates the appearance of
//! short trajectories (saddle connections between zeros) to incomplete
//! triangulations and the walls of the Stasheff fan.
//!
//! Modules, bottom-up:
//!
//! * [`qdcore`]: polynomial roots, branch-tracked `sqrt(q)`, periods.
//! * [`combinat`]: balanced weights, chord diagrams, triangulations, fan faces.
//! * [`tracer`]: critical trajectories and trajectory structures.
//! * [`network`]: admissible graphs, the merged and extended graphs, chord diagrams.
//! * [`scanner`]: parameter slices, cell signatures and wall refinement.

pub mod combinat;
pub mod error;
pub mod network;
pub mod qdcore;
pub mod scanner;
pub mod tracer;

pub use error::{Error, Result};
pub use num_complex::Complex64;
