//! Closed-form solution of `-eps u'' + u' = 1`, `u(0) = u(1) = 0`.
//!
//! Written with `exp((x - 1) / eps)` so that nothing overflows for small
//! `eps`; `exp(1 / eps)` would already be infinite at `eps = 0.001`.

use crate::scalar::Real;

/// `u(x) = x - (e^{(x-1)/eps} - e^{-1/eps}) / (1 - e^{-1/eps})`.
pub fn exact_solution<T: Real>(eps: T, x: T) -> T {
    let tail = (-eps.recip()).exp();
    let denom = -(-eps.recip()).exp_m1();
    x - (((x - T::one()) / eps).exp() - tail) / denom
}

/// `u'(x) = 1 - e^{(x-1)/eps} / (eps (1 - e^{-1/eps}))`.
pub fn exact_derivative<T: Real>(eps: T, x: T) -> T {
    let denom = -(-eps.recip()).exp_m1();
    T::one() - ((x - T::one()) / eps).exp() / (eps * denom)
}
