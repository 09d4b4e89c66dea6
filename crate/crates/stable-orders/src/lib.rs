//! Exact samplers, factorization plans, Mittag-Leffler evaluation, and
//! machine-checkable stochastic/convex order verification for positive
//! stable, Fréchet, Mittag-Leffler and Kanter distributions.
//!
//! Everything is deterministic given an [`rng::RngState`]: samplers are pure
//! functions of explicit streams, so any reported number can be reproduced
//! from its `(seed, stream_id)` provenance.

pub mod branches;
pub mod dist;
pub mod empirical;
pub mod error;
pub mod factorize;
pub mod medians;
pub mod mittag_leffler;
pub mod orderings;
pub mod repro;
pub mod rng;
pub mod special;

pub use dist::{Alpha, Dist};
pub use error::{Error, Result};
pub use rng::RngState;
