//! Indices of qualitative variation and Ord's graph for categorical frequency
//! data.
//!
//! The crate turns category counts (for instance grapheme frequencies of a
//! text) into two kinds of planar coordinates:
//!
//! * Ord's `(I, S) = (μ₂/μ, μ₃/μ₂)` computed from the rank-frequency
//!   distribution, see [`moments`];
//! * the order-free `(I_m, S_m) = (SDA/VA, RE/SDA)` built from indices of
//!   qualitative variation, see [`indices`].
//!
//! The points can then be clustered with k-means or k-medoids ([`cluster`]),
//! compared against theoretical distributions ([`theory`]) and rendered
//! as SVG ([`pipeline`]). A grapheme table for eleven Slavic languages ships
//! with the crate; [`pipeline::reproduce`] classifies them.
//!
//! ```
//! use qvord::freqdata::CategoryTable;
//! use qvord::indices::modified_coords;
//!
//! let table = CategoryTable::from_counts(&[3, 1]).unwrap();
//! let point = modified_coords(&table).unwrap();
//! assert!((point.i_m - 2.0 / 3.0).abs() < 1e-12);
//! ```

pub mod cluster;
pub mod error;
pub mod freqdata;
pub mod indices;
pub mod moments;
pub mod pipeline;
pub mod theory;

pub use error::{Error, Result};
