//! Hyperbolic selfdecomposable laws: closed forms, quadrature checks of their
//! Lévy densities, samplers, and squared Bessel Monte Carlo.
#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` is how range checks reject NaN

pub mod analytic;
pub mod bessel;
pub mod error;
pub mod law;
pub mod quadrature;
mod rng;
pub mod samplers;
pub mod stats;
pub mod structure;

pub use error::{Error, Result};
pub use law::LawId;

// The guide's code listings run as doctests, one module per chapter so a
// failure names its chapter.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/laws.md")]
    mod laws {}
    #[doc = include_str!("../../../book/src/identities.md")]
    mod identities {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/bessel.md")]
    mod bessel {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
