//! Weighted two-colour extremal problems for igraphs that avoid an eye
//! `I_{a,b} = K_{a+b} \ K_b`.
//!
//! The crate covers exact p-weights of igraphs, the extremal constructions,
//! type p-values and `κ_p`, brute-force extremal search and random models
//! conditioned on avoiding an induced eye.

pub mod bitset;
pub mod constructions;
pub mod error;
pub mod extremal;
pub mod graph;
pub mod igraph;
pub mod pattern;
pub mod randmodel;
pub mod rational;
pub mod typecalc;
pub mod verify;

pub use error::{Error, Result};
pub use igraph::{IGraph, PairColor};
pub use pattern::Pattern;
pub use rational::Rat;
