//! Finite sections of the moment Hankel matrix `(h_{n+k})`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::analytic::CoeffSeries;
use crate::fft;
use crate::measure::{MomentSequence, RadialMeasure};
use crate::sum::{compensated_sum, CompensatedComplex};
use crate::{Complex, Error, Result};

/// Below this size products are formed densely.
const DENSE_CUTOFF: usize = 128;

/// The `N × N` matrix `H[n][k] = h_{n+k}` stored through `h_0, …, h_{2N−2}`.
#[derive(Debug, Clone)]
pub struct HankelOperator {
    moments: Vec<f64>,
    size: usize,
    spectrum: OnceLock<Vec<Complex>>,
}

/// Stopping rule for the power iterations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerIteration {
    /// Relative change of the norm estimate that counts as converged.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100_000,
        }
    }
}

impl PowerIteration {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::invalid("tol", format!("{} must be positive", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter", "must be at least 1"));
        }
        Ok(())
    }
}

/// Space on which an operator norm was taken.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "space", rename_all = "lowercase")]
pub enum NormSpace {
    H2,
    Dalpha { alpha: f64 },
}

impl std::fmt::Display for NormSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormSpace::H2 => f.write_str("h2"),
            NormSpace::Dalpha { alpha } => write!(f, "dalpha:{alpha}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorNormReport {
    pub value: f64,
    pub iterations: usize,
    /// Relative change at the last step.
    pub residual: f64,
    #[serde(flatten)]
    pub space: NormSpace,
}

impl HankelOperator {
    /// Section of size `n` built from the closed-form moments of `mu`.
    pub fn build(mu: &RadialMeasure, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "truncation size must be at least 1"));
        }
        let seq = mu.moment_sequence(2 * n - 2);
        Ok(Self::from_real(seq.real_values().expect("radial moments are real"), n))
    }

    /// Section of size `n` from a real moment sequence; needs `h_0..=h_{2n−2}`.
    pub fn from_moments(m: &MomentSequence, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "truncation size must be at least 1"));
        }
        let mut h = Vec::with_capacity(2 * n - 1);
        for k in 0..2 * n - 1 {
            let v = m.get(k).ok_or(Error::DimensionMismatch {
                expected: 2 * n - 1,
                found: m.len(),
            })?;
            if v.im != 0.0 {
                return Err(Error::invalid("moments", format!("entry {k} is not real ({v})")));
            }
            h.push(v.re);
        }
        Ok(Self::from_real(h, n))
    }

    fn from_real(moments: Vec<f64>, size: usize) -> Self {
        debug_assert_eq!(moments.len(), 2 * size - 1);
        Self {
            moments,
            size,
            spectrum: OnceLock::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `h_0, …, h_{2N−2}`.
    pub fn moments(&self) -> &[f64] {
        &self.moments
    }

    pub fn entry(&self, n: usize, k: usize) -> f64 {
        assert!(n < self.size && k < self.size, "index ({n}, {k}) outside {0}×{0}", self.size);
        self.moments[n + k]
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found != self.size {
            return Err(Error::DimensionMismatch {
                expected: self.size,
                found,
            });
        }
        Ok(())
    }

    /// `y_n = Σ_k h_{n+k} x_k` by direct summation.
    pub fn apply_dense(&self, x: &[Complex]) -> Result<Vec<Complex>> {
        self.check_len(x.len())?;
        Ok((0..self.size)
            .map(|n| {
                let mut acc = CompensatedComplex::default();
                for (k, xk) in x.iter().enumerate() {
                    acc.add(xk * self.moments[n + k]);
                }
                acc.value()
            })
            .collect())
    }

    /// Same product as [`apply_dense`](Self::apply_dense) via a cyclic
    /// convolution of `h` with the reversed input.
    pub fn apply_fast(&self, x: &[Complex]) -> Result<Vec<Complex>> {
        self.check_len(x.len())?;
        Ok(self.convolve(x.iter().copied()))
    }

    fn convolve(&self, x: impl Iterator<Item = Complex>) -> Vec<Complex> {
        let n = self.size;
        let len = fft::next_pow2(2 * n);
        let spectrum = self.spectrum.get_or_init(|| {
            let mut buf = vec![Complex::new(0.0, 0.0); len];
            for (b, h) in buf.iter_mut().zip(&self.moments) {
                *b = Complex::from(h);
            }
            fft::forward(len).process(&mut buf);
            buf
        });
        let mut buf = vec![Complex::new(0.0, 0.0); len];
        for (j, v) in x.enumerate() {
            buf[n - 1 - j] = v;
        }
        fft::forward(len).process(&mut buf);
        let scale = 1.0 / len as f64;
        for (b, s) in buf.iter_mut().zip(spectrum) {
            *b *= s * scale;
        }
        fft::inverse(len).process(&mut buf);
        buf.drain(..n - 1);
        buf.truncate(n);
        buf
    }

    fn apply_real(&self, x: &[f64]) -> Vec<f64> {
        if self.size <= DENSE_CUTOFF {
            (0..self.size)
                .map(|n| compensated_sum(x.iter().zip(&self.moments[n..]).map(|(a, h)| a * h)))
                .collect()
        } else {
            self.convolve(x.iter().map(|&v| Complex::from(v)))
                .into_iter()
                .map(|c| c.re)
                .collect()
        }
    }

    /// `xᵀ H x` for a real vector.
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x.len())?;
        let y = self.apply_real(x);
        Ok(compensated_sum(x.iter().zip(&y).map(|(a, b)| a * b)))
    }

    fn scale(&self) -> f64 {
        self.moments.iter().map(|h| h.abs()).fold(0.0, f64::max)
    }

    /// Largest singular value of the section, by power iteration on `HᵀH`.
    pub fn operator_norm_h2(&self, params: &PowerIteration) -> Result<OperatorNormReport> {
        params.validate()?;
        let (value, iterations, residual) = gram_power_iteration(
            self.size,
            self.scale(),
            |x| self.apply_real(x),
            |y| self.apply_real(y),
            params,
        )?;
        Ok(OperatorNormReport {
            value,
            iterations,
            residual,
            space: NormSpace::H2,
        })
    }

    /// Norm of the section on `D_α`, i.e. of `W H W⁻¹` on `ℓ²` with
    /// `W = diag((n + 1)^{(1−α)/2})`; requires `0 < α < 2`.
    pub fn operator_norm_dalpha(&self, alpha: f64, params: &PowerIteration) -> Result<OperatorNormReport> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::invalid("alpha", format!("{alpha} outside (0, 2)")));
        }
        params.validate()?;
        let w: Vec<f64> = (0..self.size)
            .map(|n| (n as f64 + 1.0).powf(0.5 * (1.0 - alpha)))
            .collect();
        let weighted = |x: &[f64], scale_in: &dyn Fn(f64, f64) -> f64, scale_out: &dyn Fn(f64, f64) -> f64| {
            let inner: Vec<f64> = x.iter().zip(&w).map(|(v, wn)| scale_in(*v, *wn)).collect();
            self.apply_real(&inner)
                .into_iter()
                .zip(&w)
                .map(|(v, wn)| scale_out(v, *wn))
                .collect::<Vec<f64>>()
        };
        let (value, iterations, residual) = gram_power_iteration(
            self.size,
            self.scale(),
            |x| weighted(x, &|v, wn| v / wn, &|v, wn| v * wn),
            |y| weighted(y, &|v, wn| v * wn, &|v, wn| v / wn),
            params,
        )?;
        Ok(OperatorNormReport {
            value,
            iterations,
            residual,
            space: NormSpace::Dalpha { alpha },
        })
    }

    /// `sup |xᵀHx| / ‖x‖²` over real `x`, by power iteration on `H` itself.
    pub fn quadratic_form_constant(&self, params: &PowerIteration) -> Result<f64> {
        params.validate()?;
        let n = self.size;
        let scale = self.scale();
        if scale == 0.0 {
            return Ok(0.0);
        }
        let mut last_residual = f64::NAN;
        for start in starts(n) {
            let mut v = start;
            let mut prev = f64::NAN;
            let mut stalled = false;
            for it in 1..=params.max_iter {
                let y = self.apply_real(&v);
                let norm = l2(&y);
                if it == 1 && norm <= STALL * scale {
                    stalled = true;
                    break;
                }
                if it > 1 {
                    last_residual = (norm - prev).abs() / norm;
                    if last_residual < params.tol {
                        return Ok(norm);
                    }
                }
                prev = norm;
                v = y.into_iter().map(|c| c / norm).collect();
            }
            if !stalled {
                break;
            }
        }
        Err(Error::NotConverged {
            iterations: params.max_iter,
            residual: last_residual,
        })
    }
}

/// A start vector whose image is this small relative to `max |h|` is taken
/// to lie in the kernel.
const STALL: f64 = 1e-13;

/// `(1, …, 1)/√N`, then `(1, −1, 1, …)/√N`.
fn starts(n: usize) -> [Vec<f64>; 2] {
    let c = 1.0 / (n as f64).sqrt();
    [
        vec![c; n],
        (0..n).map(|i| if i % 2 == 0 { c } else { -c }).collect(),
    ]
}

fn l2(v: &[f64]) -> f64 {
    compensated_sum(v.iter().map(|x| x * x)).sqrt()
}

/// Power iteration on `AᵀA`; returns `(‖A‖, iterations, residual)`.
fn gram_power_iteration(
    n: usize,
    scale: f64,
    apply: impl Fn(&[f64]) -> Vec<f64>,
    apply_t: impl Fn(&[f64]) -> Vec<f64>,
    params: &PowerIteration,
) -> Result<(f64, usize, f64)> {
    if scale == 0.0 {
        return Ok((0.0, 0, 0.0));
    }
    let mut last_residual = f64::NAN;
    let mut total = 0;
    for start in starts(n) {
        let mut v = start;
        let mut prev = f64::NAN;
        let mut stalled = false;
        for it in 1..=params.max_iter {
            total += 1;
            let y = apply(&v);
            let sigma = l2(&y);
            if it == 1 && sigma <= STALL * scale {
                stalled = true;
                break;
            }
            if it > 1 {
                last_residual = (sigma - prev).abs() / sigma;
                if last_residual < params.tol {
                    return Ok((sigma, total, last_residual));
                }
            }
            prev = sigma;
            let z = apply_t(&y);
            let zn = l2(&z);
            v = z.into_iter().map(|c| c / zn).collect();
        }
        if !stalled {
            break;
        }
    }
    Err(Error::NotConverged {
        iterations: total,
        residual: last_residual,
    })
}

/// `Σ a_n h_n`, i.e. `∫ f dμ` for a radial measure.
///
/// Explicit sequences must hold at least `deg f + 1` values.
pub fn hankel_pairing(f: &CoeffSeries, m: &MomentSequence) -> Result<Complex> {
    let mut acc = CompensatedComplex::default();
    for (n, a) in f.coefficients().iter().enumerate() {
        let h = m.get(n).ok_or(Error::DimensionMismatch {
            expected: f.degree() + 1,
            found: m.len(),
        })?;
        acc.add(a * h);
    }
    Ok(acc.value())
}
