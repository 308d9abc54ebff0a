//! Truncated Taylor series and function-space (semi)norm estimates.
//!
//! Suprema over the disk are sampled on finite grids, so [`bloch_seminorm`]
//! and [`qp_seminorm`] report lower bounds that can only grow as the grid is
//! refined.

use std::f64::consts::PI;

use serde::Serialize;

use crate::fft;
use crate::measure::MomentSequence;
use crate::quadrature::{DiskGrid, QuadratureScheme};
use crate::sum::{compensated_sum, Compensated};
use crate::{Complex, Error, Result};

/// Polynomial `Σ_{n ≤ N} a_n zⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeries {
    coefficients: Vec<Complex>,
}

impl CoeffSeries {
    pub fn new(coefficients: Vec<Complex>) -> Self {
        if coefficients.is_empty() {
            return Self::zero();
        }
        Self { coefficients }
    }

    pub fn from_real(coefficients: &[f64]) -> Self {
        Self::new(coefficients.iter().copied().map(Complex::from).collect())
    }

    pub fn zero() -> Self {
        Self {
            coefficients: vec![Complex::new(0.0, 0.0)],
        }
    }

    /// `Σ_{k ∈ indices} zᵏ`.
    pub fn monomials(indices: impl IntoIterator<Item = usize>) -> Self {
        let indices: Vec<usize> = indices.into_iter().collect();
        let len = indices.iter().max().map_or(1, |&m| m + 1);
        let mut c = vec![Complex::new(0.0, 0.0); len];
        for i in indices {
            c[i] += 1.0;
        }
        Self::new(c)
    }

    /// `Σ_{k=1}^{K} z^{2^k}`.
    pub fn lacunary_powers_of_two(k: u32) -> Self {
        Self::monomials((1..=k).map(|j| 1usize << j))
    }

    pub fn coefficients(&self) -> &[Complex] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Horner evaluation at `|w| ≤ 1`.
    pub fn eval(&self, w: Complex) -> Result<Complex> {
        if w.norm() > 1.0 {
            return Err(Error::OutOfDomain {
                value: w.to_string(),
                region: "closed unit disk",
            });
        }
        Ok(horner(&self.coefficients, w))
    }

    /// `f′(w)` at `|w| < 1`.
    pub fn eval_derivative(&self, w: Complex) -> Result<Complex> {
        if w.norm() >= 1.0 {
            return Err(Error::OutOfDomain {
                value: w.to_string(),
                region: "open unit disk",
            });
        }
        let mut acc = Complex::new(0.0, 0.0);
        for (n, a) in self.coefficients.iter().enumerate().skip(1).rev() {
            acc = acc * w + a * n as f64;
        }
        Ok(acc)
    }

    /// Coefficients of `f′`.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, a)| a * n as f64)
                .collect(),
        )
    }

    /// Cauchy product `f · g`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex::new(0.0, 0.0); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `f(r e^{2πik/A})` for `k < A`.
    pub fn ring_values(&self, r: f64, angles: usize) -> Vec<Complex> {
        ring_eval(&self.coefficients, r, angles)
    }

    /// `f′(r e^{2πik/A})` for `k < A`.
    pub fn ring_derivative_values(&self, r: f64, angles: usize) -> Vec<Complex> {
        ring_eval(&self.derivative().coefficients, r, angles)
    }
}

fn horner(c: &[Complex], w: Complex) -> Complex {
    c.iter().rev().fold(Complex::new(0.0, 0.0), |acc, a| acc * w + a)
}

/// Folds `a_n rⁿ` by `n mod A` and synthesises the ring with one FFT.
fn ring_eval(c: &[Complex], r: f64, angles: usize) -> Vec<Complex> {
    let mut bins = vec![Complex::new(0.0, 0.0); angles];
    let mut rn = 1.0;
    for (n, a) in c.iter().enumerate() {
        if n % 64 == 0 {
            rn = r.powi(n as i32);
        }
        bins[n % angles] += a * rn;
        rn *= r;
    }
    fft::ring_synthesis(&mut bins);
    bins
}

/// `P_μ(w) = Σ μ[n] wⁿ` truncated to the stored moments.
pub fn p_mu_series(m: &MomentSequence) -> CoeffSeries {
    CoeffSeries::new(m.values().to_vec())
}

/// Möbius map `σ_a(z) = (a − z)/(1 − āz)` swapping `a` and `0`.
pub fn mobius(a: Complex, z: Complex) -> Complex {
    (a - z) / (1.0 - a.conj() * z)
}

/// `1 − |σ_a(z)|² = (1 − |a|²)(1 − |z|²)/|1 − āz|²`, clamped to `[0, 1]`.
fn mobius_defect(a: Complex, z: Complex) -> f64 {
    let d = (1.0 - a.norm_sqr()) * (1.0 - z.norm_sqr()) / (1.0 - a.conj() * z).norm_sqr();
    d.clamp(0.0, 1.0)
}

/// `‖f‖_{H²} = (Σ |a_n|²)^{1/2}`.
pub fn hardy2_norm(f: &CoeffSeries) -> f64 {
    compensated_sum(f.coefficients.iter().map(|a| a.norm_sqr())).sqrt()
}

/// `‖f‖_{H^p}` from the trapezoid rule on the unit circle with `angles`
/// nodes; requires `angles ≥ 4 (deg + 1)`.
pub fn hardy_p_norm(f: &CoeffSeries, p: f64, angles: usize) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::invalid("p", format!("exponent {p} must be positive")));
    }
    let floor = 4 * (f.degree() + 1);
    if angles < floor {
        return Err(Error::invalid(
            "angles",
            format!("{angles} angular nodes below the floor {floor} = 4 (degree + 1)"),
        ));
    }
    let ring = f.ring_values(1.0, angles);
    let mean = compensated_sum(ring.iter().map(|v| v.norm().powf(p))) / angles as f64;
    Ok(mean.powf(1.0 / p))
}

/// `‖f‖_{D_α} = (Σ (n + 1)^{1−α} |a_n|²)^{1/2}`.
pub fn dirichlet_alpha_norm(f: &CoeffSeries, alpha: f64) -> f64 {
    compensated_sum(
        f.coefficients
            .iter()
            .enumerate()
            .map(|(n, a)| (n as f64 + 1.0).powf(1.0 - alpha) * a.norm_sqr()),
    )
    .sqrt()
}

/// `max (1 − |z|²)|f′(z)|` over the grid.
pub fn bloch_seminorm(f: &CoeffSeries, grid: &DiskGrid) -> f64 {
    let df = f.derivative();
    grid.radii()
        .iter()
        .map(|&r| {
            let ring = ring_eval(&df.coefficients, r, grid.angles());
            let peak = ring.iter().map(|v| v.norm()).fold(0.0, f64::max);
            (1.0 - r * r) * peak
        })
        .fold(0.0, f64::max)
}

/// Result of a `Q_p` seminorm estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QpEstimate {
    /// `sqrt(max_a ∫ |f′|² (1 − |σ_a|²)^p dA)`.
    pub value: f64,
    /// Möbius centre attaining the maximum.
    #[serde(serialize_with = "serialize_complex")]
    pub argmax: Complex,
    /// Difference to the half-resolution rule at `argmax`.
    pub error_estimate: f64,
}

pub(crate) fn serialize_complex<S: serde::Serializer>(z: &Complex, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// Default Möbius centres: `0` and `r e^{2πij/16}` for
/// `r ∈ {0.5, 0.9, 0.99, 0.999}`.
pub fn default_a_samples() -> Vec<Complex> {
    let mut out = vec![Complex::new(0.0, 0.0)];
    for r in [0.5, 0.9, 0.99, 0.999] {
        for j in 0..16 {
            out.push(Complex::from_polar(r, 2.0 * PI * j as f64 / 16.0));
        }
    }
    out
}

/// Lower estimate of `‖f‖_{Q_p}` from the polar rule `quad`, maximised
/// over the Möbius centres `a_samples` (`Q_1 = BMOA`).
pub fn qp_seminorm(
    f: &CoeffSeries,
    p: f64,
    a_samples: &[Complex],
    quad: &QuadratureScheme,
) -> Result<QpEstimate> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::invalid("p", format!("exponent {p} must be positive")));
    }
    if a_samples.is_empty() {
        return Err(Error::invalid("a_samples", "need at least one Möbius centre"));
    }
    if let Some(a) = a_samples.iter().find(|a| a.norm() >= 1.0) {
        return Err(Error::OutOfDomain {
            value: a.to_string(),
            region: "open unit disk",
        });
    }
    let fine = qp_integrals(f, p, a_samples, quad);
    let (best, &integral) = fine
        .iter()
        .enumerate()
        .fold((0, &f64::NEG_INFINITY), |acc, (i, v)| if *v > *acc.1 { (i, v) } else { acc });
    let argmax = a_samples[best];
    let coarse = qp_integrals(f, p, &[argmax], &quad.coarsened())[0];
    let value = integral.max(0.0).sqrt();
    Ok(QpEstimate {
        value,
        argmax,
        error_estimate: (value - coarse.max(0.0).sqrt()).abs(),
    })
}

/// `∫ |f′|² (1 − |σ_a|²)^p dA` for each centre.
fn qp_integrals(f: &CoeffSeries, p: f64, a_samples: &[Complex], quad: &QuadratureScheme) -> Vec<f64> {
    let df = f.derivative();
    let angles = quad.angular_count();
    let rays: Vec<Complex> = (0..angles)
        .map(|k| Complex::from_polar(1.0, 2.0 * PI * k as f64 / angles as f64))
        .collect();
    let mut acc = vec![Compensated::default(); a_samples.len()];
    let mut weights = vec![0.0; angles];
    for node in quad.polar_nodes() {
        let ring = ring_eval(&df.coefficients, node.radius, angles);
        for (w, v) in weights.iter_mut().zip(&ring) {
            *w = node.weight * v.norm_sqr();
        }
        for (slot, &a) in acc.iter_mut().zip(a_samples) {
            let mut ring_sum = 0.0;
            for (w, ray) in weights.iter().zip(&rays) {
                let defect = mobius_defect(a, ray * node.radius);
                let factor = if p == 1.0 { defect } else { defect.powf(p) };
                ring_sum += w * factor;
            }
            slot.add(ring_sum);
        }
    }
    acc.iter().map(Compensated::value).collect()
}

/// Coefficient profile of a series viewed as a gap series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LacunaryProfile {
    pub is_lacunary: bool,
    pub sup_coeff: f64,
    pub sum_sq: f64,
}

/// Checks the Hadamard gap condition `n_{k+1} ≥ λ n_k` on the nonzero
/// coefficients of positive index and reports `sup |a_k|` and `Σ |a_k|²`
/// over the same indices. The constant term is ignored throughout.
pub fn lacunary_profile(f: &CoeffSeries, lambda: f64) -> Result<LacunaryProfile> {
    if !(lambda > 1.0) {
        return Err(Error::invalid("lambda", format!("gap ratio {lambda} must exceed 1")));
    }
    let support: Vec<(usize, f64)> = f
        .coefficients
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .map(|(n, a)| (n, a.norm()))
        .collect();
    let is_lacunary = support
        .windows(2)
        .all(|w| w[1].0 as f64 >= lambda * w[0].0 as f64);
    Ok(LacunaryProfile {
        is_lacunary,
        sup_coeff: support.iter().map(|&(_, a)| a).fold(0.0, f64::max),
        sum_sq: compensated_sum(support.iter().map(|&(_, a)| a * a)),
    })
}

/// `max_n (n + 1) h_n` for a real nonnegative moment sequence; bounded
/// exactly when `h_n = O(1/n)`.
pub fn moment_decay_sup(m: &MomentSequence) -> Result<f64> {
    let values = m
        .real_values()
        .ok_or_else(|| Error::invalid("moments", "sequence has non-real entries"))?;
    if let Some((n, v)) = values.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
        return Err(Error::invalid("moments", format!("entry {n} is negative ({v})")));
    }
    Ok(values
        .iter()
        .enumerate()
        .map(|(n, v)| (n as f64 + 1.0) * v)
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{DiskDensityMeasure, RadialMeasure};
    use crate::quadrature::GridParams;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let f = CoeffSeries::from_real(&[1.0, 1.0]);
        assert_eq!(f.eval(c(0.5, 0.0)).unwrap(), c(1.5, 0.0));
        assert_eq!(CoeffSeries::zero().eval(c(0.3, -0.4)).unwrap(), c(0.0, 0.0));
        assert!(f.eval(c(1.0, 0.1)).is_err());
        assert!(f.eval(c(1.0, 0.0)).is_ok());
    }

    #[test]
    fn eval_log_series_matches_direct_summation() {
        let coeffs: Vec<f64> = (0..=200).map(|n| 1.0 / (n as f64 + 1.0)).collect();
        let f = CoeffSeries::from_real(&coeffs);
        // oracle: ascending partial sum of Σ wⁿ/(n+1) at w = 1/2
        let oracle: f64 = (0..=200).map(|n| 0.5f64.powi(n) / (n as f64 + 1.0)).sum();
        let got = f.eval(c(0.5, 0.0)).unwrap().re;
        assert!((got - oracle).abs() < 1e-14);
        assert!((got - 2.0 * 2f64.ln()).abs() < 1e-7);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(CoeffSeries::from_real(&[5.0]).eval_derivative(c(0.2, 0.1)).unwrap(), c(0.0, 0.0));
        assert_eq!(CoeffSeries::from_real(&[0.0, 1.0]).eval_derivative(c(0.3, 0.1)).unwrap(), c(1.0, 0.0));
        assert_eq!(CoeffSeries::from_real(&[0.0, 0.0, 1.0]).eval_derivative(c(0.25, 0.0)).unwrap(), c(0.5, 0.0));
        assert!(CoeffSeries::from_real(&[0.0, 1.0]).eval_derivative(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn ring_values_agree_with_horner() {
        let f = CoeffSeries::new((0..300).map(|n| c((n as f64).sin(), 1.0 / (n as f64 + 1.0))).collect());
        let r = 0.93;
        let angles = 64; // smaller than the degree: exercises folding
        for (k, v) in f.ring_values(r, angles).iter().enumerate() {
            let w = Complex::from_polar(r, 2.0 * PI * k as f64 / angles as f64);
            assert!((v - horner(f.coefficients(), w)).norm() < 1e-11);
        }
        for (k, v) in f.ring_derivative_values(r, angles).iter().enumerate() {
            let w = Complex::from_polar(r, 2.0 * PI * k as f64 / angles as f64);
            assert!((v - f.eval_derivative(w).unwrap()).norm() < 1e-9);
        }
    }

    #[test]
    fn p_mu_examples() {
        let atom = RadialMeasure::atoms_from_pairs(&[(0.5, 1.0)]).unwrap();
        let p = p_mu_series(&atom.moment_sequence(10));
        for (n, a) in p.coefficients().iter().enumerate() {
            assert_eq!(*a, c(0.5f64.powi(n as i32), 0.0));
        }
        let leb = p_mu_series(&RadialMeasure::lebesgue().moment_sequence(5));
        assert_eq!(leb.coefficients()[4], c(0.2, 0.0));
        let ce = DiskDensityMeasure::counterexample(3).unwrap().moment_sequence(8);
        let nz: Vec<usize> = p_mu_series(&ce)
            .coefficients()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.re != 0.0)
            .map(|(n, _)| n)
            .collect();
        assert_eq!(nz, vec![0, 2, 4, 8]);
    }

    #[test]
    fn mobius_examples() {
        let a = c(0.3, -0.2);
        assert!(mobius(a, a).norm() < 1e-16);
        assert_eq!(mobius(a, c(0.0, 0.0)), a);
        let b = mobius(c(0.5, 0.0), c(1.0, 0.0));
        assert_eq!(b, c(-1.0, 0.0));
        let on_circle = mobius(a, Complex::from_polar(1.0, 2.1));
        assert!((on_circle.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hardy_norm_examples() {
        let f = CoeffSeries::from_real(&[1.0, 1.0]);
        assert!((hardy2_norm(&f) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(hardy2_norm(&CoeffSeries::zero()), 0.0);
        let harmonic: Vec<f64> = (0..10_000).map(|n| 1.0 / (n as f64 + 1.0)).collect();
        // oracle: direct sum of 1/(n+1)² for n < 10⁴; π/√6 minus a 1e−4 tail gives ≈ 1.28251
        let oracle = (0..10_000).map(|n| 1.0 / ((n as f64 + 1.0) * (n as f64 + 1.0))).sum::<f64>().sqrt();
        let got = hardy2_norm(&CoeffSeries::from_real(&harmonic));
        assert!((got - oracle).abs() < 1e-12);
        assert!((got - 1.28251).abs() < 1e-5);
    }

    #[test]
    fn hardy_p_examples() {
        let f = CoeffSeries::from_real(&[1.0, 1.0]);
        // closed form of the trapezoid mean: (2/A) cot(π/(2A)) = 4/π − π/(3A²) + …
        let h1 = hardy_p_norm(&f, 1.0, 1 << 17).unwrap();
        assert!((h1 - 4.0 / PI).abs() < 1e-9);
        let constant = CoeffSeries::from_real(&[-2.5]);
        for p in [0.5, 1.0, 3.0] {
            assert!((hardy_p_norm(&constant, p, 8).unwrap() - 2.5).abs() < 1e-14);
        }
        assert!((hardy_p_norm(&f, 2.0, 8).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert!(hardy_p_norm(&f, 1.0, 7).is_err());
        assert!(hardy_p_norm(&f, 0.0, 64).is_err());
    }

    #[test]
    fn dirichlet_examples() {
        let z = CoeffSeries::from_real(&[0.0, 1.0]);
        assert_eq!(dirichlet_alpha_norm(&z, 1.0), 1.0);
        assert!((dirichlet_alpha_norm(&z, 0.0) - 2f64.sqrt()).abs() < 1e-15);
        let f = CoeffSeries::from_real(&[1.0, 1.0, 1.0]);
        let want = (1.0 + 0.5 + 1.0 / 3.0f64).sqrt();
        assert!((dirichlet_alpha_norm(&f, 2.0) - want).abs() < 1e-15);
    }

    #[test]
    fn bloch_examples() {
        let grid = DiskGrid::default();
        assert!((bloch_seminorm(&CoeffSeries::from_real(&[0.0, 1.0]), &grid) - 1.0).abs() < 1e-15);
        assert_eq!(bloch_seminorm(&CoeffSeries::from_real(&[3.0]), &grid), 0.0);
        let z2 = bloch_seminorm(&CoeffSeries::from_real(&[0.0, 0.0, 1.0]), &grid);
        let want = 4.0 / (3.0 * 3f64.sqrt());
        assert!(z2 <= want + 1e-15 && want - z2 < 1e-3, "{z2}");
    }

    #[test]
    fn qp_examples() {
        let quad = QuadratureScheme::default();
        let origin = [c(0.0, 0.0)];
        let z = CoeffSeries::from_real(&[0.0, 1.0]);
        let q1 = qp_seminorm(&z, 1.0, &origin, &quad).unwrap();
        assert!((q1.value - 0.5f64.sqrt()).abs() < 1e-6);
        let q2 = qp_seminorm(&z, 2.0, &origin, &quad).unwrap();
        assert!((q2.value - (1.0 / 3.0f64).sqrt()).abs() < 1e-6);
        let constant = qp_seminorm(&CoeffSeries::from_real(&[4.0]), 1.5, &default_a_samples(), &quad).unwrap();
        assert_eq!(constant.value, 0.0);
        assert!(qp_seminorm(&z, 1.0, &[], &quad).is_err());
        assert!(qp_seminorm(&z, 1.0, &[c(1.0, 0.0)], &quad).is_err());
    }

    #[test]
    fn lacunary_examples() {
        let f = CoeffSeries::lacunary_powers_of_two(10);
        let p = lacunary_profile(&f, 2.0).unwrap();
        assert_eq!(p, LacunaryProfile { is_lacunary: true, sup_coeff: 1.0, sum_sq: 10.0 });
        let g = CoeffSeries::from_real(&[0.0, 1.0, 1.0, 1.0]);
        assert_eq!(
            lacunary_profile(&g, 2.0).unwrap(),
            LacunaryProfile { is_lacunary: false, sup_coeff: 1.0, sum_sq: 3.0 }
        );
        assert_eq!(
            lacunary_profile(&CoeffSeries::zero(), 2.0).unwrap(),
            LacunaryProfile { is_lacunary: true, sup_coeff: 0.0, sum_sq: 0.0 }
        );
        assert!(lacunary_profile(&f, 1.0).is_err());
    }

    #[test]
    fn moment_decay_examples() {
        let leb = RadialMeasure::lebesgue().moment_sequence(10_000);
        let sup = moment_decay_sup(&leb).unwrap();
        assert!((sup - 1.0).abs() < 1e-15);
        let dirac = RadialMeasure::atoms_from_pairs(&[(0.0, 1.0)]).unwrap();
        assert_eq!(moment_decay_sup(&dirac.moment_sequence(10)).unwrap(), 1.0);
        assert!(moment_decay_sup(&MomentSequence::from_real(vec![1.0, -0.1])).is_err());
    }

    #[test]
    fn moment_decay_grows_like_sqrt_for_negative_half_weight() {
        let mu = RadialMeasure::power_weight(-0.5).unwrap();
        let big = moment_decay_sup(&mu.moment_sequence(4096)).unwrap();
        let small = moment_decay_sup(&mu.moment_sequence(256)).unwrap();
        // (n+1)B(n+1, 1/2) ~ Γ(1/2)√n: a 16× longer sequence gives ≈ 4×
        assert!((big / small / 4.0 - 1.0).abs() < 0.25, "{}", big / small);
        assert!(big > 2.0 * small);
    }

    #[test]
    fn finer_grid_never_lowers_bloch_estimate() {
        let f = CoeffSeries::lacunary_powers_of_two(6);
        let coarse = DiskGrid::new(GridParams { levels: 20, angles: 64, uniform: 16 }).unwrap();
        let fine = DiskGrid::new(GridParams { levels: 40, angles: 256, uniform: 64 }).unwrap();
        assert!(bloch_seminorm(&f, &fine) >= bloch_seminorm(&f, &coarse) - 1e-14);
    }
}
