//! Tchebychev characteristics, fundamental functions and tail bounds for a
//! catalog of rearrangement-invariant spaces.
//!
//! The crate is organized around [`tail::TailFunction`], an immutable,
//! thread-safe evaluable tail `t ↦ μ{|ξ| ≥ t}`. Characteristics of the
//! cataloged spaces ([`catalog`]) are tail functions; so are dilations,
//! infimal splits and Monte-Carlo tail estimates.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`tail`] | dilation, order/equivalence checks, `∨`, left inverse |
//! | [`catalog`] | `L_p`, Lorentz, Orlicz and Grand Lebesgue spaces |
//! | [`convex`] | numerical Legendre transform and GLS tail bounds |
//! | [`diagnostics`] | regularity, associate products, sandwich bounds |
//! | [`witness`] | two-point variables that saturate characteristics |
//! | [`montecarlo`] | sampling, empirical tails, confidence intervals |

// `!(x >= a)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod convex;
pub mod diagnostics;
pub mod error;
pub mod montecarlo;
pub mod optimize;
pub mod quad;
pub mod report;
pub mod tail;
pub mod witness;

pub use error::{Error, Result};
