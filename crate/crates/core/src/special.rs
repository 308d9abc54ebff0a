//! Log-gamma and Beta values accurate enough for moments up to order 10⁶.
//!
//! `ln Γ` is evaluated from the Stirling series once the argument exceeds
//! [`STIRLING_FLOOR`]; smaller arguments are shifted upward with the
//! functional equation. Differences `ln Γ(x + d) − ln Γ(x)` are formed
//! without cancelling two large logarithms, which keeps `B(n + 1, s + 1)`
//! at full relative precision for large `n`.

use std::f64::consts::PI;

/// Arguments at or above this use the asymptotic series directly.
const STIRLING_FLOOR: f64 = 16.0;

/// Bernoulli-number coefficients `B_{2k} / (2k (2k − 1))` for k = 1..6.
const STIRLING_COEFFS: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
];

/// Correction `ln Γ(z) − [(z − ½) ln z − z + ½ ln 2π]` for `z ≥ 16`.
fn stirling_correction(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in STIRLING_COEFFS.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Returns `NaN` for non-positive or non-finite arguments.
pub fn ln_gamma(x: f64) -> f64 {
    if !(x > 0.0) || !x.is_finite() {
        return f64::NAN;
    }
    let mut z = x;
    let mut shift = 0.0;
    while z < STIRLING_FLOOR {
        shift += z.ln();
        z += 1.0;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + stirling_correction(z) - shift
}

/// `ln Γ(x + d) − ln Γ(x)` for `x > 0` and `x + d > 0`.
pub fn ln_gamma_ratio(x: f64, d: f64) -> f64 {
    let y = x + d;
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !d.is_finite() {
        return f64::NAN;
    }
    if d == 0.0 {
        return 0.0;
    }
    // ln Γ(y) − ln Γ(x) = [ln Γ(y + m) − ln Γ(x + m)] − Σ_{i<m} ln(1 + d/(x + i))
    let mut lo = x;
    let mut shift = 0.0;
    while lo.min(lo + d) < STIRLING_FLOOR {
        shift += (d / lo).ln_1p();
        lo += 1.0;
    }
    let hi = lo + d;
    (lo - 0.5) * (d / lo).ln_1p() + d * hi.ln() - d + stirling_correction(hi)
        - stirling_correction(lo)
        - shift
}

/// `ln B(a, b)` for `a, b > 0`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    // B(a, b) = Γ(b) · Γ(a) / Γ(a + b); the ratio keeps large `a` exact.
    ln_gamma(b) - ln_gamma_ratio(a, b)
}

/// Euler Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a + b)`.
pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_at_integers_matches_factorials() {
        let mut fact = 1.0f64;
        for n in 1..=25u32 {
            // Γ(n) = (n − 1)!
            let got = ln_gamma(n as f64);
            assert!((got - fact.ln()).abs() <= 1e-13 * fact.ln().abs().max(1.0), "n = {n}");
            fact *= n as f64;
        }
    }

    #[test]
    fn ln_gamma_at_half_integers() {
        // Γ(1/2) = √π, Γ(3/2) = √π/2, Γ(5/2) = 3√π/4
        let sqrt_pi = PI.sqrt();
        assert!((ln_gamma(0.5) - sqrt_pi.ln()).abs() < 1e-14);
        assert!((ln_gamma(1.5) - (sqrt_pi / 2.0).ln()).abs() < 1e-14);
        assert!((ln_gamma(2.5) - (0.75 * sqrt_pi).ln()).abs() < 1e-14);
    }

    #[test]
    fn ln_gamma_rejects_non_positive() {
        assert!(ln_gamma(0.0).is_nan());
        assert!(ln_gamma(-1.5).is_nan());
    }

    #[test]
    fn ratio_agrees_with_plain_difference_for_small_arguments() {
        for &(x, d) in &[(1.0, 0.5), (3.0, 2.25), (0.3, 7.0), (20.0, -0.5), (2.0, -1.5)] {
            let want = ln_gamma(x + d) - ln_gamma(x);
            assert!((ln_gamma_ratio(x, d) - want).abs() < 1e-13, "x = {x}, d = {d}");
        }
    }

    #[test]
    fn ratio_matches_product_recursion_at_large_order() {
        // Γ(n + 1 + d)/Γ(n + 1) for d = 1 is exactly n + 1.
        for &n in &[10.0, 1e3, 1e6, 1e9] {
            let got = ln_gamma_ratio(n + 1.0, 1.0);
            assert!((got - (n + 1.0).ln()).abs() < 1e-14 * (n + 1.0).ln());
        }
        // d = 2: (x)(x + 1)
        let x: f64 = 123_456.5;
        let want = (x * (x + 1.0)).ln();
        assert!((ln_gamma_ratio(x, 2.0) - want).abs() < 1e-14 * want);
    }

    #[test]
    fn beta_small_cases() {
        // B(2, 2) = 1/6, B(1, s + 1) = 1/(s + 1)
        assert!((beta(2.0, 2.0) - 1.0 / 6.0).abs() < 1e-14);
        assert!((beta(1.0, 1.5) - 1.0 / 1.5).abs() < 1e-14);
        // B(2, 3/2) = 4/15
        assert!((beta(2.0, 1.5) - 4.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn beta_relative_accuracy_at_order_one_million() {
        // B(n + 1, 2) = 1/((n + 1)(n + 2)) exactly.
        let n = 1e6;
        let want = 1.0 / ((n + 1.0) * (n + 2.0));
        let got = beta(n + 1.0, 2.0);
        assert!(((got - want) / want).abs() < 1e-13);
    }
}
