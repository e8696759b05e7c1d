//! Exact classification of `Z_p^m`-actions on generalized Fermat curves of
//! signature `(0; p^(n+1))`.
//!
//! Pipeline: enumerate admissible kernels ([`enumeration`]), partition them
//! under permutation groups ([`classify`]), compare with closed forms
//! ([`predictions`]) and describe quotients ([`geometry`]).

pub mod classify;
pub mod cli;
pub mod enumeration;
pub mod error;
pub mod fpalgebra;
pub mod geometry;
pub mod hgroup;
pub mod predictions;
pub mod verify;

pub use error::{Error, Result};
