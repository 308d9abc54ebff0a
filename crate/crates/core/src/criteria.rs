//! Measure-level boundedness criteria.
//!
//! Every supremum is sampled, so a [`CriterionReport`] value is a lower
//! bound that can only grow when the grid or depth is refined. Boundedness
//! shows up as a plateau of the profile, unboundedness as growth toward the
//! boundary.

use std::f64::consts::PI;

use serde::Serialize;

use crate::analytic::serialize_complex;
use crate::fft;
use crate::measure::{Extent, MassPoint, MomentSequence, MomentSource, RadialMeasure};
use crate::quadrature::{DiskGrid, GaussLegendre, QuadratureScheme};
use crate::sum::CompensatedComplex;
use crate::{Complex, Error, Result};

/// Series are summed until the remaining tail is certified below this.
pub const TAIL_LIMIT: f64 = 1e-12;

/// Nodes per direction on each box panel for smooth integrands.
const BOX_ORDER: usize = 8;
/// Dyadic levels resolved below each Carleson box in `1 − r` and in `θ`.
const BOX_SPAN: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    /// Largest sampled value.
    pub value: f64,
    /// Sample attaining `value`.
    #[serde(serialize_with = "serialize_complex")]
    pub argmax: Complex,
    pub samples: usize,
    /// Per-radius maxima for disk criteria, per-box values for box criteria.
    pub profile: Vec<ProfilePoint>,
    /// Quadrature error estimate at `argmax`, when one is available.
    pub error_estimate: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    /// Radius `r` for disk criteria, `|I|/2π` for box criteria.
    pub coordinate: f64,
    pub value: f64,
    /// Where `value` is attained.
    #[serde(serialize_with = "serialize_complex")]
    pub at: Complex,
}

impl CriterionReport {
    fn from_profile(profile: Vec<ProfilePoint>, samples: usize) -> Self {
        let best = profile
            .iter()
            .copied()
            .reduce(|a, b| if b.value > a.value { b } else { a });
        Self {
            value: best.map_or(0.0, |p| p.value),
            argmax: best.map_or(Complex::new(0.0, 0.0), |p| p.at),
            samples,
            profile,
            error_estimate: None,
        }
    }

    /// The report restricted to the profile points accepted by `keep`, as
    /// if a coarser grid or depth had been used. The error estimate is kept
    /// only when the argmax survives.
    pub fn restricted(&self, keep: impl Fn(&ProfilePoint) -> bool) -> Self {
        let per_point = self.samples / self.profile.len().max(1);
        let profile: Vec<ProfilePoint> = self.profile.iter().copied().filter(|p| keep(p)).collect();
        let samples = per_point * profile.len();
        let mut out = Self::from_profile(profile, samples);
        if out.argmax == self.argmax {
            out.error_estimate = self.error_estimate;
        }
        out
    }
}

/// `Σ_{k>n} (k + 1) ρᵏ`.
fn weighted_geometric_tail(n: usize, rho: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    let m = n as f64 + 1.0;
    let q = 1.0 - rho;
    (m * rho.ln()).exp() * ((m + 1.0) - m * rho) / (q * q)
}

/// Feeds `(n, (n + 1) h_n rⁿ)` to `sink` until the tail is below
/// [`TAIL_LIMIT`].
fn stream_kernel_terms(m: &MomentSequence, r: f64, mut sink: impl FnMut(usize, Complex)) -> Result<()> {
    let ln_r = (-(1.0 - r)).ln_1p();
    let extent = m.extent();
    let stored_envelope = match extent {
        Extent::Stored(len) => Some(m.envelope_from(len, 0.0)),
        _ => None,
    };
    let envelope = |n: usize, h_n: f64| stored_envelope.unwrap_or_else(|| m.envelope_from(n, h_n));
    let mut rn = 1.0;
    let mut last = (0, 0.0);
    for (n, h) in m.stream().enumerate() {
        if n % 256 == 0 {
            rn = if r == 0.0 { if n == 0 { 1.0 } else { 0.0 } } else { (n as f64 * ln_r).exp() };
        }
        sink(n, h * ((n as f64 + 1.0) * rn));
        rn *= r;
        last = (n, h.norm());
        if n % 64 == 63 || r == 0.0 {
            let tail = envelope(n, last.1) * weighted_geometric_tail(n, r);
            if tail <= TAIL_LIMIT {
                return Ok(());
            }
        }
        if let Extent::Finite(len) = extent {
            if n + 1 >= len {
                return Ok(());
            }
        }
    }
    // only explicit sequences run out
    let bound = envelope(last.0, last.1) * weighted_geometric_tail(last.0, r);
    if bound <= TAIL_LIMIT {
        Ok(())
    } else {
        Err(Error::TailBound {
            length: m.len(),
            radius: r,
            bound,
            limit: TAIL_LIMIT,
        })
    }
}

fn check_disk(w: Complex) -> Result<()> {
    if w.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            value: w.to_string(),
            region: "open unit disk",
        })
    }
}

/// `(1 − |w|²) |Σ (n + 1) h_n wⁿ|`, the modulus of `∫ (1 − |w|²)/(1 − w̄z)² dμ(z)`
/// written through the moments.
pub fn condition2_value(m: &MomentSequence, w: Complex) -> Result<f64> {
    check_disk(w)?;
    let r = w.norm();
    let theta = w.arg();
    let mut acc = CompensatedComplex::default();
    let mut phase = Complex::new(1.0, 0.0);
    let step = Complex::from_polar(1.0, theta);
    stream_kernel_terms(m, r, |n, term| {
        if n % 256 == 0 {
            phase = Complex::from_polar(1.0, n as f64 * theta);
        }
        acc.add(term * phase);
        phase *= step;
    })?;
    Ok((1.0 - r) * (1.0 + r) * acc.value().norm())
}

/// Maximum of [`condition2_value`] over `grid`, one FFT per radius.
pub fn condition2_sup(m: &MomentSequence, grid: &DiskGrid) -> Result<CriterionReport> {
    let angles = grid.angles();
    let mut profile = Vec::with_capacity(grid.radii().len());
    for &r in grid.radii() {
        let mut bins = vec![Complex::new(0.0, 0.0); angles];
        stream_kernel_terms(m, r, |n, term| bins[n % angles] += term)?;
        fft::ring_synthesis(&mut bins);
        let scale = (1.0 - r) * (1.0 + r);
        let (k, peak) = ring_peak(bins.iter().map(|v| scale * v.norm()));
        profile.push(ProfilePoint {
            coordinate: r,
            value: peak,
            at: Complex::from_polar(r, grid.angle(k)),
        });
    }
    Ok(CriterionReport::from_profile(profile, grid.len()))
}

fn ring_peak(values: impl Iterator<Item = f64>) -> (usize, f64) {
    values
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc })
}

/// `(1 − |w|²)/|1 − w̄t|²` at `w = r e^{iθ}` for one mass point, with
/// `u = 1 − r` and `s2 = sin²(θ/2)`.
#[inline]
fn poisson_like(p: &MassPoint, r: f64, u: f64, s2: f64) -> f64 {
    let near = p.gap + p.t * u;
    u * (2.0 - u) / (near * near + 4.0 * r * p.t * s2)
}

fn kernel_at(points: &[MassPoint], r: f64, theta: f64) -> f64 {
    let u = 1.0 - r;
    let s = (0.5 * theta).sin();
    let s2 = s * s;
    points.iter().map(|p| p.mass * poisson_like(p, r, u, s2)).sum()
}

/// `∫ (1 − |w|²)/|1 − w̄t|² dμ(t)` at a single point.
pub fn carleson_kernel_value(mu: &RadialMeasure, w: Complex, quad: &QuadratureScheme) -> Result<f64> {
    check_disk(w)?;
    let disc = mu.discretize(quad.panel_rule(), quad.panel_depth());
    Ok(kernel_at(&disc.points, w.norm(), w.arg()))
}

/// Maximum over `grid` of the Carleson kernel integral. Atoms are summed
/// exactly; densities use the graded panels of [`RadialMeasure::discretize`],
/// and the error estimate at the argmax compares with a half-order rule and
/// adds the mass dropped below the deepest panel.
pub fn carleson_kernel_sup(mu: &RadialMeasure, grid: &DiskGrid, quad: &QuadratureScheme) -> Result<CriterionReport> {
    let disc = mu.discretize(quad.panel_rule(), quad.panel_depth());
    let angles = grid.angles();
    let sines: Vec<f64> = (0..angles)
        .map(|k| {
            let s = (0.5 * grid.angle(k)).sin();
            s * s
        })
        .collect();
    let mut profile = Vec::with_capacity(grid.radii().len());
    for &r in grid.radii() {
        let u = 1.0 - r;
        let (k, peak) = ring_peak(
            sines
                .iter()
                .map(|&s2| disc.points.iter().map(|p| p.mass * poisson_like(p, r, u, s2)).sum::<f64>()),
        );
        profile.push(ProfilePoint {
            coordinate: r,
            value: peak,
            at: Complex::from_polar(r, grid.angle(k)),
        });
    }
    let mut report = CriterionReport::from_profile(profile, grid.len());
    let coarse_rule = GaussLegendre::new(quad.panel_rule().len().div_ceil(2).max(2));
    let coarse = mu.discretize(&coarse_rule, quad.panel_depth());
    let (r, theta) = (report.argmax.norm(), report.argmax.arg());
    let dropped = disc.dropped_mass * (1.0 + r) / (1.0 - r);
    report.error_estimate = Some((report.value - kernel_at(&coarse.points, r, theta)).abs() + dropped);
    Ok(report)
}

/// `g(w) = Σ_{k≥0} (k + 1) h_{k+1} wᵏ` on a box panel.
enum BoxIntegrand {
    /// `g(w) = ∫ t/(1 − wt)² dμ(t)` over a discretised radial measure.
    Measure(Vec<MassPoint>),
    /// Coefficients of a polynomial `g`.
    Polynomial(Vec<Complex>),
}

impl BoxIntegrand {
    fn new(m: &MomentSequence, quad: &QuadratureScheme, r_max: f64) -> Result<Self> {
        match m.source() {
            MomentSource::Radial(mu) => Ok(Self::Measure(
                mu.discretize(quad.panel_rule(), quad.panel_depth()).points,
            )),
            MomentSource::Disk(d) => Ok(Self::Polynomial(derivative_coefficients(m, d.degree() + 1))),
            MomentSource::Explicit => {
                let len = m.len();
                if len == 0 {
                    return Err(Error::invalid("moments", "empty sequence"));
                }
                // coefficients (k + 1) h_{k+1} with k + 1 ≥ len are unknown
                let first_unknown = len - 1;
                let weights = if first_unknown == 0 {
                    1.0 / ((1.0 - r_max) * (1.0 - r_max))
                } else {
                    weighted_geometric_tail(first_unknown - 1, r_max)
                };
                let bound = m.envelope_from(len, 0.0) * weights;
                if bound > TAIL_LIMIT {
                    return Err(Error::TailBound {
                        length: len,
                        radius: r_max,
                        bound,
                        limit: TAIL_LIMIT,
                    });
                }
                Ok(Self::Polynomial(derivative_coefficients(m, len)))
            }
        }
    }

    fn degree(&self) -> usize {
        match self {
            Self::Measure(_) => 0,
            Self::Polynomial(c) => c.len().saturating_sub(1),
        }
    }

    /// `g(r e^{iθ})` with `u = 1 − r`.
    fn eval(&self, r: f64, u: f64, theta: f64) -> Complex {
        match self {
            Self::Measure(points) => {
                let s = (0.5 * theta).sin();
                let one_minus_w = Complex::new(u + 2.0 * r * s * s, -r * theta.sin());
                points
                    .iter()
                    .map(|p| {
                        let d = p.gap + one_minus_w * p.t;
                        p.mass * p.t / (d * d)
                    })
                    .sum()
            }
            Self::Polynomial(c) => {
                let w = Complex::from_polar(r, theta);
                c.iter().rev().fold(Complex::new(0.0, 0.0), |acc, a| acc * w + a)
            }
        }
    }
}

/// `(k + 1) h_{k+1}` for `k + 1 < len`.
fn derivative_coefficients(m: &MomentSequence, len: usize) -> Vec<Complex> {
    (1..len)
        .map(|k| m.get(k).unwrap_or_default() * k as f64)
        .collect()
}

/// Gauss–Legendre orders `(radial, angular)` for a panel of widths
/// `(du, dθ)` when `g` has the given polynomial degree.
fn panel_orders(degree: usize, du: f64, dtheta: f64) -> (usize, usize) {
    if degree == 0 {
        return (BOX_ORDER, BOX_ORDER);
    }
    let d = degree as f64;
    let radial = (BOX_ORDER + (2.0 * d * du).ceil() as usize).min(degree + 2);
    let angular = BOX_ORDER + (d * dtheta).ceil() as usize;
    (radial, angular)
}

/// Carleson-box integral `(1/|I|) ∫_{S(I)} |g(w)|² (1 − |w|²) dA(w)` for the
/// arcs `I` of length `2π·2^{−j}` centred at angle 0, `j = 0..=depth`.
///
/// The region `1 − r ∈ (0, 1]`, `θ ∈ (0, π]` is split into dyadic panels in
/// both `1 − r` and `θ`; each box collects the panels beneath it down to
/// [`BOX_SPAN`] levels below its own size, and the lower half-box follows
/// from `g(w̄) = conj g(w)`, which holds because the moments are real.
pub fn box_condition4(m: &MomentSequence, depth: usize, quad: &QuadratureScheme) -> Result<CriterionReport> {
    if depth == 0 {
        return Err(Error::invalid("depth", "must be at least 1"));
    }
    if m.real_values().is_none() {
        return Err(Error::invalid("moments", "box integral needs real moments"));
    }
    let levels = depth + BOX_SPAN;
    let r_max = 1.0 - (-(levels as f64)).exp2();
    let g = BoxIntegrand::new(m, quad, r_max)?;
    let degree = g.degree();
    let mut rules: Vec<Option<GaussLegendre>> = Vec::new();
    let mut rule = |order: usize| -> GaussLegendre {
        if rules.len() <= order {
            rules.resize(order + 1, None);
        }
        rules[order].get_or_insert_with(|| GaussLegendre::new(order)).clone()
    };
    let mut samples = 0;
    // panel[a][b]: u ∈ [2^{−a−1}, 2^{−a}], θ ∈ [π 2^{−b−1}, π 2^{−b}]
    let mut panel = vec![vec![0.0; levels]; levels];
    for (a, row) in panel.iter_mut().enumerate() {
        let u_hi = (-(a as f64)).exp2();
        let u_lo = 0.5 * u_hi;
        for (b, cell) in row.iter_mut().enumerate() {
            let t_hi = PI * (-(b as f64)).exp2();
            let t_lo = 0.5 * t_hi;
            let (qr, qt) = panel_orders(degree, u_hi - u_lo, t_hi - t_lo);
            let (ru, rt) = (rule(qr), rule(qt));
            let mut acc = 0.0;
            for (&xu, &wu) in ru.nodes().iter().zip(ru.weights()) {
                let u = u_lo + (u_hi - u_lo) * xu;
                let r = 1.0 - u;
                let mut ring = 0.0;
                for (&xt, &wt) in rt.nodes().iter().zip(rt.weights()) {
                    let theta = t_lo + (t_hi - t_lo) * xt;
                    ring += wt * g.eval(r, u, theta).norm_sqr();
                }
                acc += wu * ring * u * (2.0 - u) * r;
            }
            samples += qr * qt;
            *cell = acc * (u_hi - u_lo) * (t_hi - t_lo) / PI;
        }
    }
    let mut profile = Vec::with_capacity(depth + 1);
    for j in 0..=depth {
        let total: f64 = panel[j..j + BOX_SPAN]
            .iter()
            .map(|row| row[j..j + BOX_SPAN].iter().sum::<f64>())
            .sum();
        let h = (-(j as f64)).exp2();
        profile.push(ProfilePoint {
            coordinate: h,
            value: 2.0 * total / (2.0 * PI * h),
            at: Complex::new(1.0 - h, 0.0),
        });
    }
    Ok(CriterionReport::from_profile(profile, samples))
}

/// Carleson-box ratios `μ([1 − h, 1))/h` at `h = 2^{−j}` as a report.
pub fn carleson_box(mu: &RadialMeasure, depth: usize) -> CriterionReport {
    let profile: Vec<ProfilePoint> = mu
        .carleson_profile(depth)
        .into_iter()
        .map(|(h, ratio)| ProfilePoint {
            coordinate: h,
            value: ratio,
            at: Complex::new(1.0 - h, 0.0),
        })
        .collect();
    CriterionReport::from_profile(profile, depth + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentDecay {
    /// `max_n (n + 1) h_n`.
    pub sup: f64,
    /// Index attaining `sup`.
    pub argmax: usize,
    pub exceeded: bool,
}

/// Compares `max_n (n + 1) h_n` against `threshold`.
pub fn moment_decay_test(m: &MomentSequence, threshold: f64) -> Result<MomentDecay> {
    let sup = crate::analytic::moment_decay_sup(m)?;
    let values = m.real_values().expect("checked by moment_decay_sup");
    let argmax = values
        .iter()
        .enumerate()
        .position(|(n, v)| (n as f64 + 1.0) * v == sup)
        .unwrap_or(0);
    Ok(MomentDecay {
        sup,
        argmax,
        exceeded: sup > threshold,
    })
}
