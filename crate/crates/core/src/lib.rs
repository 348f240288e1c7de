//! Exact computations on finite Lawvere metric spaces and finite categories.
//!
//! Distances are values in `[0, ∞]` stored as exact rationals ([`extnum`]).
//! Spaces, short maps and presheaves live in [`space`], [`maps`] and
//! [`presheaf`]; Cauchy sequences in [`cauchy`]; the three model structures on
//! spaces in [`model`]; finite categories, Karoubi envelopes and the Karoubian
//! model structure in [`karoubi`]. [`doc`] holds the JSON document formats and
//! [`cli`] the `lawvere` command line.

pub mod cauchy;
pub mod cli;
pub mod doc;
pub mod extnum;
pub mod karoubi;
pub mod maps;
pub mod model;
pub mod presheaf;
pub mod random;
pub mod search;
pub mod space;

pub use extnum::ExtNN;
pub use maps::{MapFlags, SpaceMap};
pub use space::{Space, WeightedGraph};
