//! Quasiperiodic infinite words: coverage tests, derivation and integration
//! along a quasiperiod, factor complexity, Rauzy graphs, frequencies and a
//! quasiperiod-based compressor.
//!
//! Infinite words are [`WordStream`]s; every question about one is asked at
//! an explicit finite horizon.

pub mod calculus;
pub mod complexity;
pub mod corpus;
pub mod ergodic;
pub mod error;
pub mod factors;
pub mod occurrence;
pub mod qpzip;
pub mod quasiperiod;
pub mod rauzy;
pub mod stream;
pub mod sturmian;
pub mod word;

pub use error::{QwError, Result};
pub use stream::{StreamSpec, WordStream};
pub use word::{Alphabet, FiniteWord, Letter};
