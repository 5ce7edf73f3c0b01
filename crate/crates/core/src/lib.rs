//! Exact computations for cuspidal sl(n+1)-modules: string and band modules of
//! the Gelfand-Ponomarev quiver, windowed weight modules and their 1-cohomology.

pub mod linalg;
pub mod string_band;
pub mod quiver_rep;
pub mod weight_engine;
pub mod cohomology;
pub mod verify;
