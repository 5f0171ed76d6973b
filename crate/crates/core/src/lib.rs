//! Corpus analysis around significant windows: stretches of a document's
//! fulltext where terms from a chosen set cluster more densely than chance.
//!
//! The crate covers corpus loading, term-set construction (document fields,
//! dictionaries, weighted vocabularies), window scanning, coverage profiles,
//! location curves, overlap matrices, type/token statistics and part-of-speech
//! construct statistics.

pub mod classify;
pub mod corpus;
pub mod error;
pub mod grammar;
pub mod lexstats;
pub mod profile;
pub mod special;
pub mod sterm;
pub mod synth;
pub mod window;

pub use error::{Error, Result};
