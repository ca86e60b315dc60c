//! Exact computation with automorphism groups of the binary rooted tree.
//!
//! The crate works entirely with finite-level quotients: a depth-`n`
//! automorphism is a bit-packed [`Portrait`], recursion systems extend
//! elements to any level on demand, and group-level questions (orders,
//! membership, conjugacy, normalizers, Hausdorff dimension) are answered
//! either by closed formulas or by breadth-first closure at desk scale,
//! with the two routes cross-checking each other.

pub mod cases;
pub mod groups;
pub mod catalog;
pub mod conjugacy;
pub mod dynamics;
pub mod error;
pub mod portrait;
pub mod recursion;
pub mod twoadic;
pub mod verify;

pub use cases::GroupCase;
pub use error::{Error, Result};
pub use portrait::{Level, Portrait, SignVector, MAX_LEVEL};
pub use twoadic::TwoAdic;
