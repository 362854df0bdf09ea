//! Weyl group combinatorics behind the first extension groups between Verma
//! modules.
//!
//! The crate computes, for a finite Weyl group `W`, the subspaces `V(x, y)` of
//! the reflection representation obtained from the descent recursion
//!
//! * `V(x, x) = 0`,
//! * `V(xs, y) = s(V(x, ys))` if `ys < y`,
//! * `V(xs, y) = K v_s + s(V(x, y))` if `ys > y`,
//!
//! together with the Kazhdan–Lusztig `R`-polynomials, so that
//! `dim V(x, y)` can be compared with the coefficient of `q` in
//! `(-1)^(l(y) - l(x) - 1) R_{y,x}(q)`.

pub mod coxeter;
pub mod error;
pub mod poly;
pub mod reflection;
pub mod rpoly;
pub mod subspace;
pub mod vtable;

pub use error::{Error, Result};
