use std::cell::RefCell;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::Complex;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn forward(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len))
}

pub(crate) fn inverse(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(len))
}

/// Evaluates `Σ_c bins[c] · e^{2πi c k / A}` for every `k < A`, in place.
///
/// With `bins[c] = Σ_{n ≡ c (mod A)} a_n rⁿ` this is the series `Σ a_n wⁿ`
/// on the ring `w = r e^{2πik/A}`: the regrouping is exact because
/// `e^{inθ_k}` only depends on `n mod A`.
pub(crate) fn ring_synthesis(bins: &mut [Complex]) {
    if bins.len() > 1 {
        inverse(bins.len()).process(bins);
    }
}

pub(crate) fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}
