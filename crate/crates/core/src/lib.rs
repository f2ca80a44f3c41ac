//! Computations with projective representations and Hilbert geometry:
//! determinant-normalized matrices with spectral data, free-group ball
//! enumeration, explicit representation families (binary-form pullbacks,
//! Schottky pairs, symplectic/orthogonal/G2 one-parameter subgroups, split
//! octonions), the Hilbert cross-ratio metric on convex bodies, boundary-map
//! sampling with sign lifting and invariant-domain construction, and
//! entropy/rigidity scans.
//!
//! Everything is plain `f64` at desk scale (dimensions up to 64, Cayley
//! balls up to ~10^7 words). Randomized helpers take explicit seeds and
//! every scan is deterministic, independent of the worker count.

pub mod boundary;
pub mod eigen;
pub mod error;
pub mod families;
pub mod hilbert;
pub mod lp;
pub mod mat;
pub mod parallel;
pub mod projlin;
pub mod rigidity;
pub mod rng;
pub mod wordgroup;

pub use error::Error;
