//! Skew products `F(r, [θ]) = (f(λ, r), [θ] + [rotation])` on `ℝ × S¹`.
//!
//! The crate locates the period-doubling 2-cycle `{r1, r2}` of a one-parameter
//! map family and certifies, numerically, that the two level circles
//! `Γ¹ = {r1} × S¹` and `Γ² = {r2} × S¹` form an invariant double circle:
//! they are disjoint, swapped by `F`, each fixed by `F²`, their union is
//! invariant, and the orbit of `(r1, [0])` is `ε`-dense in both.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod circle;
mod error;
pub mod map1d;
mod roots;
pub mod skew;
pub mod verify;

pub use circle::{CirclePoint, GapStats};
pub use error::{Error, RationalRotationDetail, Result};
pub use map1d::{
    ConditionOptions, ConditionReport, DoublingWindow, FnFamily, Logistic, MapFamily, TwoCycle,
};
pub use skew::{RotationFn, RotationSpec, SkewState, SkewSystem};
pub use verify::{InvariantCircle, VerificationReport, VerifyConfig};
