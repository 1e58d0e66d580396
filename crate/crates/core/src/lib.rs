//! Exact solutions of the three-dimensional biharmonic equation built
//! from commutative nilpotent algebras.
//!
//! The pipeline: pick free complex data (k_r, m_r), solve the
//! characteristic equation (e1² + e2² + e3²)² = 0 for the third basis
//! vector ([`characteristic`]), pair the resulting resolvent expansion
//! with an arbitrary holomorphic F ([`resolvent`], [`holo`]), and read
//! off an infinite family of fields U_k(x, y, z) ([`solutions`]) whose
//! Δ²U vanishes — certified symbolically and by finite differences
//! ([`verify`]).

pub mod characteristic;
pub mod config;
pub mod error;
pub mod holo;
pub mod jets;
pub mod resolvent;
pub mod solutions;
pub mod verify;

pub use error::{Error, Result};
pub use jets::Cx;
