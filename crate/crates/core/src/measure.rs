//! Measures on `[0, 1)` and analytic-density measures on the disk.
//!
//! Every measure here has closed-form moments, so the criteria built on top
//! can be tested against exact values.
//!
//! ```
//! use hankel_lab::measure::RadialMeasure;
//!
//! let lebesgue = RadialMeasure::lebesgue();
//! assert_eq!(lebesgue.moment(3), 0.25);
//!
//! let w = RadialMeasure::power_weight(1.0).unwrap();
//! assert!((w.moment(1) - 1.0 / 6.0).abs() < 1e-15);
//! ```

use std::f64::consts::PI;
use std::fmt;

use crate::fft;
use crate::quadrature::{GaussLegendre, QuadratureScheme};
use crate::special;
use crate::sum::CompensatedComplex;
use crate::{Complex, Error, Result};

/// A point mass `mass · δ_position` with `position ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub position: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(position: f64, mass: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&position) {
            return Err(Error::invalid(
                "atoms",
                format!("position {position} outside [0, 1)"),
            ));
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::invalid(
                "atoms",
                format!("mass {mass} must be positive and finite"),
            ));
        }
        Ok(Self { position, mass })
    }
}

/// The closed-form families of positive measures on `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialKind {
    /// `dt`
    Lebesgue,
    /// `(1 − t)^s dt` with `s > −1`.
    PowerWeight { s: f64 },
    /// Finite sum of point masses.
    Atoms(Vec<Atom>),
}

/// A validated positive Borel measure on `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMeasure(RadialKind);

/// A node of a discretised radial measure: `∫ φ dμ ≈ Σ mass · φ(t)`.
///
/// `gap = 1 − t` is kept separately so kernels with a singularity at `t = 1`
/// keep their relative precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassPoint {
    pub t: f64,
    pub gap: f64,
    pub mass: f64,
}

/// Discretisation of a radial measure together with the mass it drops.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretized {
    pub points: Vec<MassPoint>,
    /// Mass of `μ` near `t = 1` that the panels do not cover.
    pub dropped_mass: f64,
}

impl RadialMeasure {
    pub fn lebesgue() -> Self {
        Self(RadialKind::Lebesgue)
    }

    /// `(1 − t)^s dt`; rejects `s ≤ −1`, where the total mass diverges.
    pub fn power_weight(s: f64) -> Result<Self> {
        if !(s > -1.0) || !s.is_finite() {
            return Err(Error::invalid(
                "s",
                format!("power weight exponent {s} must be finite and > -1"),
            ));
        }
        Ok(Self(RadialKind::PowerWeight { s }))
    }

    pub fn atoms(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("atoms", "atom list is empty"));
        }
        Ok(Self(RadialKind::Atoms(atoms)))
    }

    /// Convenience constructor from `(position, mass)` pairs.
    pub fn atoms_from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let atoms = pairs
            .iter()
            .map(|&(t, m)| Atom::new(t, m))
            .collect::<Result<Vec<_>>>()?;
        Self::atoms(atoms)
    }

    pub fn kind(&self) -> &RadialKind {
        &self.0
    }

    /// Power-weight exponent, with Lebesgue as `s = 0`.
    fn exponent(&self) -> Option<f64> {
        match self.0 {
            RadialKind::Lebesgue => Some(0.0),
            RadialKind::PowerWeight { s } => Some(s),
            RadialKind::Atoms(_) => None,
        }
    }

    /// `μ[n] = ∫₀¹ tⁿ dμ(t)`.
    pub fn moment(&self, n: u64) -> f64 {
        match &self.0 {
            RadialKind::Lebesgue => 1.0 / (n as f64 + 1.0),
            RadialKind::PowerWeight { s } => power_weight_moment(*s, n),
            RadialKind::Atoms(atoms) => atoms.iter().map(|a| a.mass * pow_u64(a.position, n)).sum(),
        }
    }

    /// Moments `μ[0], …, μ[n_max]`.
    pub fn moment_sequence(&self, n_max: usize) -> MomentSequence {
        let values = self
            .moment_stream()
            .take(n_max + 1)
            .map(Complex::from)
            .collect();
        MomentSequence {
            values,
            source: MomentSource::Radial(self.clone()),
        }
    }

    /// Infinite iterator over `μ[0], μ[1], …`, cheaper per term than
    /// [`moment`](Self::moment) for long runs.
    pub fn moment_stream(&self) -> RadialMomentStream {
        RadialMomentStream::new(self.clone())
    }

    /// `μ(D)`.
    pub fn total_mass(&self) -> f64 {
        self.moment(0)
    }

    /// `μ([1 − h, 1))` for `0 < h ≤ 1`.
    pub fn tail_mass(&self, h: f64) -> Result<f64> {
        if !(h > 0.0 && h <= 1.0) {
            return Err(Error::invalid("h", format!("tail width {h} outside (0, 1]")));
        }
        Ok(match &self.0 {
            RadialKind::Lebesgue => h,
            RadialKind::PowerWeight { s } => h.powf(s + 1.0) / (s + 1.0),
            RadialKind::Atoms(atoms) => atoms
                .iter()
                .filter(|a| a.position >= 1.0 - h)
                .map(|a| a.mass)
                .sum(),
        })
    }

    /// `max_{j ≤ depth} μ([1 − h_j, 1)) / h_j` over dyadic `h_j = 2^{−j}`.
    ///
    /// This is the Carleson-box ratio for boxes anchored at `ζ = 1`, a lower
    /// bound for the Carleson constant that is sharp up to a universal factor
    /// for radial measures.
    pub fn carleson_constant(&self, depth: usize) -> f64 {
        self.carleson_profile(depth)
            .into_iter()
            .map(|(_, ratio)| ratio)
            .fold(0.0, f64::max)
    }

    /// `(h_j, μ([1 − h_j, 1)) / h_j)` for `j = 0..=depth`.
    pub fn carleson_profile(&self, depth: usize) -> Vec<(f64, f64)> {
        (0..=depth)
            .map(|j| {
                let h = (-(j as f64)).exp2();
                (h, self.tail_mass(h).expect("dyadic h lies in (0, 1]") / h)
            })
            .collect()
    }

    /// Discretisation for integrals `∫ φ(t) dμ(t)` whose integrand may peak
    /// at `t = 1`.
    ///
    /// Absolutely continuous members substitute `v = (1 − t)^{s+1}`, which
    /// turns `dμ` into `dv/(s + 1)`, and split `v ∈ (0, 1]` into dyadic
    /// panels `[2^{−i−1}, 2^{−i}]`, `i < depth`, each carrying `rule`. Atoms
    /// are returned exactly.
    pub fn discretize(&self, rule: &GaussLegendre, depth: usize) -> Discretized {
        match (&self.0, self.exponent()) {
            (RadialKind::Atoms(atoms), _) => Discretized {
                points: atoms
                    .iter()
                    .map(|a| MassPoint {
                        t: a.position,
                        gap: 1.0 - a.position,
                        mass: a.mass,
                    })
                    .collect(),
                dropped_mass: 0.0,
            },
            (_, Some(s)) => {
                let inv = 1.0 / (s + 1.0);
                let mut points = Vec::with_capacity(depth * rule.len());
                for i in 0..depth {
                    let hi = (-(i as f64)).exp2();
                    let lo = 0.5 * hi;
                    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
                        let v = lo + (hi - lo) * x;
                        let gap = v.powf(inv);
                        points.push(MassPoint {
                            t: 1.0 - gap,
                            gap,
                            mass: w * (hi - lo) * inv,
                        });
                    }
                }
                Discretized {
                    points,
                    dropped_mass: (-(depth as f64)).exp2() * inv,
                }
            }
            _ => unreachable!("non-atomic kinds carry an exponent"),
        }
    }
}

impl fmt::Display for RadialMeasure {
    /// Formats in the measure mini-language accepted by the command line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            RadialKind::Lebesgue => write!(f, "lebesgue"),
            RadialKind::PowerWeight { s } => write!(f, "powerweight:s={s:?}"),
            RadialKind::Atoms(atoms) => {
                write!(f, "atoms:[")?;
                for (i, a) in atoms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "({:?},{:?})", a.position, a.mass)?;
                }
                write!(f, "]")
            }
        }
    }
}

fn power_weight_moment(s: f64, n: u64) -> f64 {
    // B(n + 1, s + 1)
    special::beta(n as f64 + 1.0, s + 1.0)
}

fn pow_u64(x: f64, n: u64) -> f64 {
    if n <= i32::MAX as u64 {
        x.powi(n as i32)
    } else {
        x.powf(n as f64)
    }
}

/// Iterator over the moments of a [`RadialMeasure`].
///
/// Power weights advance by `μ[n+1] = μ[n] (n + 1)/(n + s + 2)` and re-anchor
/// on the closed form every [`RadialMomentStream::ANCHOR`] steps, so drift
/// never exceeds a few hundred ulps.
#[derive(Debug, Clone)]
pub struct RadialMomentStream {
    measure: RadialMeasure,
    n: u64,
    current: f64,
    powers: Vec<f64>,
}

impl RadialMomentStream {
    const ANCHOR: u64 = 256;

    fn new(measure: RadialMeasure) -> Self {
        let powers = match measure.kind() {
            RadialKind::Atoms(atoms) => vec![1.0; atoms.len()],
            _ => Vec::new(),
        };
        let current = measure.moment(0);
        Self {
            measure,
            n: 0,
            current,
            powers,
        }
    }
}

impl Iterator for RadialMomentStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let n = self.n;
        let value = match self.measure.kind() {
            RadialKind::Lebesgue => 1.0 / (n as f64 + 1.0),
            RadialKind::PowerWeight { s } => {
                if n > 0 {
                    if n % Self::ANCHOR == 0 {
                        self.current = power_weight_moment(*s, n);
                    } else {
                        let prev = (n - 1) as f64;
                        self.current *= (prev + 1.0) / (prev + s + 2.0);
                    }
                }
                self.current
            }
            RadialKind::Atoms(atoms) => {
                if n > 0 {
                    for (p, a) in self.powers.iter_mut().zip(atoms) {
                        *p = if n % Self::ANCHOR == 0 {
                            pow_u64(a.position, n)
                        } else {
                            *p * a.position
                        };
                    }
                }
                self.powers.iter().zip(atoms).map(|(p, a)| p * a.mass).sum()
            }
        };
        self.n += 1;
        Some(value)
    }
}

/// Complex measure `f(z) dA(z)` on the disk with a polynomial density
/// `f(z) = Σ_{m ≤ M} c_m z^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskDensityMeasure {
    coefficients: Vec<Complex>,
}

/// A quadrature value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureValue {
    pub value: Complex,
    pub error: f64,
}

impl DiskDensityMeasure {
    pub fn new(coefficients: Vec<Complex>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid("coefficients", "density needs at least one coefficient"));
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("coefficients", "coefficients must be finite"));
        }
        Ok(Self { coefficients })
    }

    /// Truncation `f_K(z) = 1 + Σ_{k=1}^{K} (1 + 2^k) z^{2^k}` of the density
    /// whose measure satisfies the reproducing-kernel condition without being
    /// a Hankel measure. Its conjugate moments are `1` at `n ∈ {0, 2, 4, …, 2^K}`
    /// and `0` elsewhere.
    pub fn counterexample(k: u32) -> Result<Self> {
        if !(1..=20).contains(&k) {
            return Err(Error::invalid("K", format!("truncation {k} outside 1..=20")));
        }
        let degree = 1usize << k;
        let mut coefficients = vec![Complex::new(0.0, 0.0); degree + 1];
        coefficients[0] = Complex::new(1.0, 0.0);
        for j in 1..=k {
            let m = 1usize << j;
            coefficients[m] = Complex::new(1.0 + m as f64, 0.0);
        }
        Ok(Self { coefficients })
    }

    pub fn coefficients(&self) -> &[Complex] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `∫_D z̄ⁿ f(z) dA(z) = c_n / (n + 1)` by angular orthogonality.
    pub fn conjugate_moment(&self, n: usize) -> Complex {
        self.coefficients
            .get(n)
            .map_or(Complex::new(0.0, 0.0), |c| c / (n as f64 + 1.0))
    }

    /// Conjugate moments `0..=n_max`.
    pub fn moment_sequence(&self, n_max: usize) -> MomentSequence {
        MomentSequence {
            values: (0..=n_max).map(|n| self.conjugate_moment(n)).collect(),
            source: MomentSource::Disk(self.clone()),
        }
    }

    /// `(1/π) ∫₀¹∫₀^{2π} r^{n+1} e^{−inθ} f(re^{iθ}) dθ dr` by polar quadrature.
    pub fn conjugate_moment_quadrature(
        &self,
        n: usize,
        scheme: &QuadratureScheme,
    ) -> QuadratureValue {
        self.conjugate_moments_quadrature(n, scheme)[n]
    }

    /// Quadrature conjugate moments for `0..=n_max`, sharing one evaluation
    /// of the density on the polar grid.
    ///
    /// The error estimate is the difference to the half-resolution rule plus
    /// a rounding floor proportional to `∫ |z|ⁿ |f| dA`.
    pub fn conjugate_moments_quadrature(
        &self,
        n_max: usize,
        scheme: &QuadratureScheme,
    ) -> Vec<QuadratureValue> {
        let fine = self.polar_moments(n_max, scheme);
        let coarse = self.polar_moments(n_max, &scheme.coarsened());
        fine.into_iter()
            .zip(coarse)
            .map(|((v, l1), (c, _))| QuadratureValue {
                value: v,
                error: (v - c).norm() + 64.0 * f64::EPSILON * l1,
            })
            .collect()
    }

    /// `(value, ∫|z|ⁿ|f| dA)` pairs for `n = 0..=n_max`.
    fn polar_moments(&self, n_max: usize, scheme: &QuadratureScheme) -> Vec<(Complex, f64)> {
        let a = scheme.angular_count();
        let twiddle: Vec<Complex> = (0..a)
            .map(|k| Complex::from_polar(1.0, 2.0 * PI * k as f64 / a as f64))
            .collect();
        let nonzero: Vec<(usize, Complex)> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(m, &c)| (m, c))
            .collect();
        let forward = fft::forward(a);
        let mut acc = vec![CompensatedComplex::default(); n_max + 1];
        let mut l1 = vec![0.0; n_max + 1];
        let mut ring = vec![Complex::new(0.0, 0.0); a];
        for node in scheme.polar_nodes() {
            let r = node.radius;
            let scaled: Vec<(usize, Complex)> =
                nonzero.iter().map(|&(m, c)| (m, c * r.powi(m as i32))).collect();
            // density values at the ring nodes, f(r e^{2πik/A})
            let mut abs_sum = 0.0;
            for (k, slot) in ring.iter_mut().enumerate() {
                let mut v = Complex::new(0.0, 0.0);
                for &(m, c) in &scaled {
                    v += c * twiddle[(m * k) % a];
                }
                abs_sum += v.norm();
                *slot = v;
            }
            // trapezoid sums Σ_k e^{−inθ_k} f_k for all n at once
            forward.process(&mut ring);
            // node weight carries r dr dθ/π, leaving |z|ⁿ = rⁿ
            let mut rn = 1.0;
            for n in 0..=n_max {
                acc[n].add(ring[n % a] * (node.weight * rn));
                l1[n] += node.weight * rn * abs_sum;
                rn *= r;
            }
        }
        acc.into_iter().map(|c| c.value()).zip(l1).collect()
    }
}

/// Where a [`MomentSequence`] came from, which decides how it extends.
#[derive(Debug, Clone, PartialEq)]
pub enum MomentSource {
    /// Moments of a closed-form radial measure; extend indefinitely.
    Radial(RadialMeasure),
    /// Conjugate moments of a polynomial density; zero beyond the degree.
    Disk(DiskDensityMeasure),
    /// Bare numbers; nothing is known beyond the stored values.
    Explicit,
}

/// Moments `μ[0..=N]` (or conjugate moments) with their provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    values: Vec<Complex>,
    source: MomentSource,
}

/// How the series `Σ h_n …` behaves past the stored values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extent {
    /// All moments from this index on vanish.
    Finite(usize),
    /// Closed form available for every index.
    Unbounded,
    /// Only this many values are known.
    Stored(usize),
}

impl MomentSequence {
    /// Sequence with no source measure; criteria treat indices past the end
    /// as unknown and bound them by the largest stored modulus.
    pub fn from_values(values: Vec<Complex>) -> Self {
        Self {
            values,
            source: MomentSource::Explicit,
        }
    }

    pub fn from_real(values: Vec<f64>) -> Self {
        Self::from_values(values.into_iter().map(Complex::from).collect())
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn source(&self) -> &MomentSource {
        &self.source
    }

    /// Real parts, if every stored value is real.
    pub fn real_values(&self) -> Option<Vec<f64>> {
        self.values
            .iter()
            .all(|c| c.im == 0.0)
            .then(|| self.values.iter().map(|c| c.re).collect())
    }

    pub fn extent(&self) -> Extent {
        match &self.source {
            MomentSource::Radial(_) => Extent::Unbounded,
            MomentSource::Disk(d) => Extent::Finite(d.degree() + 1),
            MomentSource::Explicit => Extent::Stored(self.values.len()),
        }
    }

    /// Moment of order `n`: stored, closed form, or `None` when unknown.
    pub fn get(&self, n: usize) -> Option<Complex> {
        if let Some(v) = self.values.get(n) {
            return Some(*v);
        }
        match &self.source {
            MomentSource::Radial(mu) => Some(Complex::from(mu.moment(n as u64))),
            MomentSource::Disk(d) => Some(d.conjugate_moment(n)),
            MomentSource::Explicit => None,
        }
    }

    /// Same source, `0..=n_max` stored. Fails for explicit sequences that
    /// are too short.
    pub fn extended(&self, n_max: usize) -> Result<Self> {
        match &self.source {
            MomentSource::Radial(mu) => Ok(mu.moment_sequence(n_max)),
            MomentSource::Disk(d) => Ok(d.moment_sequence(n_max)),
            MomentSource::Explicit if n_max < self.values.len() => {
                Ok(Self::from_values(self.values[..=n_max].to_vec()))
            }
            MomentSource::Explicit => Err(Error::invalid(
                "moments",
                format!(
                    "explicit sequence has {} values, {} requested",
                    self.values.len(),
                    n_max + 1
                ),
            )),
        }
    }

    /// Sequential access to `h_0, h_1, …` following [`extent`](Self::extent):
    /// radial sources never end, disk sources yield zeros past the degree,
    /// explicit ones stop after the stored values.
    pub fn stream(&self) -> MomentStream<'_> {
        let inner = match &self.source {
            MomentSource::Radial(mu) => StreamInner::Radial(mu.moment_stream()),
            MomentSource::Disk(d) => StreamInner::Disk(d),
            MomentSource::Explicit => StreamInner::Explicit,
        };
        MomentStream {
            seq: self,
            n: 0,
            inner,
        }
    }

    /// Bound on `|h_m|` for every `m ≥ n` beyond what has been summed.
    ///
    /// Radial moments are nonincreasing, so `h_n` itself bounds the rest;
    /// explicit sequences fall back to the largest stored modulus.
    pub(crate) fn envelope_from(&self, n: usize, h_n: f64) -> f64 {
        match self.extent() {
            Extent::Unbounded => h_n,
            Extent::Finite(len) if n >= len => 0.0,
            Extent::Finite(len) => self.max_abs_in(n, len),
            Extent::Stored(_) => self.values.iter().map(|c| c.norm()).fold(0.0, f64::max),
        }
    }

    fn max_abs_in(&self, lo: usize, hi: usize) -> f64 {
        (lo..hi)
            .map(|m| self.get(m).map_or(0.0, |c| c.norm()))
            .fold(0.0, f64::max)
    }
}

/// See [`MomentSequence::stream`].
#[derive(Debug, Clone)]
pub struct MomentStream<'a> {
    seq: &'a MomentSequence,
    n: usize,
    inner: StreamInner<'a>,
}

#[derive(Debug, Clone)]
enum StreamInner<'a> {
    Radial(RadialMomentStream),
    Disk(&'a DiskDensityMeasure),
    Explicit,
}

impl Iterator for MomentStream<'_> {
    type Item = Complex;

    fn next(&mut self) -> Option<Complex> {
        let n = self.n;
        self.n += 1;
        match &mut self.inner {
            StreamInner::Radial(s) => {
                let v = s.next().map(Complex::from);
                // stored values take precedence so streamed and indexed agree
                self.seq.values.get(n).copied().or(v)
            }
            StreamInner::Disk(d) => Some(d.conjugate_moment(n)),
            StreamInner::Explicit => self.seq.values.get(n).copied(),
        }
    }
}
