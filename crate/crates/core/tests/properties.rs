use hankel_lab::analytic::{
    bloch_seminorm, default_a_samples, dirichlet_alpha_norm, hardy2_norm, hardy_p_norm, mobius, qp_seminorm,
    CoeffSeries,
};
use hankel_lab::criteria::{carleson_kernel_value, condition2_value};
use hankel_lab::hankel::{hankel_pairing, HankelOperator, PowerIteration};
use hankel_lab::measure::{DiskDensityMeasure, MomentSequence, RadialMeasure};
use hankel_lab::quadrature::{DiskGrid, GridParams, QuadratureParams, QuadratureScheme};
use hankel_lab::Complex;
use proptest::prelude::*;

fn radial() -> impl Strategy<Value = RadialMeasure> {
    prop_oneof![
        Just(RadialMeasure::lebesgue()),
        (-0.9f64..3.0).prop_map(|s| RadialMeasure::power_weight(s).unwrap()),
        prop::collection::vec((0.0f64..0.999, 0.01f64..2.0), 1..5)
            .prop_map(|pairs| RadialMeasure::atoms_from_pairs(&pairs).unwrap()),
    ]
}

fn disk_point(max_r: f64) -> impl Strategy<Value = Complex> {
    (0.0..max_r, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
}

fn real_vec(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moments_are_nonnegative_and_nonincreasing(mu in radial(), n in 0u64..5000) {
        let (a, b) = (mu.moment(n), mu.moment(n + 1));
        prop_assert!(b >= 0.0);
        prop_assert!(b <= a * (1.0 + 1e-13));
    }

    #[test]
    fn atom_lists_add(
        first in prop::collection::vec((0.0f64..0.999, 0.01f64..2.0), 1..4),
        second in prop::collection::vec((0.0f64..0.999, 0.01f64..2.0), 1..4),
        n in 0u64..200,
    ) {
        let joined: Vec<_> = first.iter().chain(&second).copied().collect();
        let a = RadialMeasure::atoms_from_pairs(&first).unwrap().moment(n);
        let b = RadialMeasure::atoms_from_pairs(&second).unwrap().moment(n);
        let sum = RadialMeasure::atoms_from_pairs(&joined).unwrap().moment(n);
        prop_assert!((sum - (a + b)).abs() <= 1e-14 * sum.max(1e-300));
    }

    #[test]
    fn tail_mass_is_monotone(mu in radial(), h1 in 1e-6f64..1.0, h2 in 1e-6f64..1.0) {
        let (lo, hi) = if h1 <= h2 { (h1, h2) } else { (h2, h1) };
        prop_assert!(mu.tail_mass(lo).unwrap() <= mu.tail_mass(hi).unwrap() * (1.0 + 1e-14));
        prop_assert!((mu.tail_mass(1.0).unwrap() - mu.moment(0)).abs() <= 1e-12 * mu.moment(0));
    }

    #[test]
    fn stream_agrees_with_indexed_moments(s in -0.9f64..3.0, n in 0usize..3000) {
        let mu = RadialMeasure::power_weight(s).unwrap();
        let streamed = mu.moment_sequence(0).stream().nth(n).unwrap().re;
        let direct = mu.moment(n as u64);
        prop_assert!((streamed - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn hankel_symmetry(h in real_vec(15), n in 0usize..8, k in 0usize..8) {
        let op = HankelOperator::from_moments(&MomentSequence::from_real(h), 8).unwrap();
        let unit = |i: usize| (0..8).map(|j| Complex::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect::<Vec<_>>();
        let a = op.apply_dense(&unit(n)).unwrap()[k];
        let b = op.apply_dense(&unit(k)).unwrap()[n];
        prop_assert_eq!(a, b);
    }

    #[test]
    fn radial_sections_are_positive_semidefinite(mu in radial(), x in real_vec(24)) {
        let op = HankelOperator::build(&mu, 24).unwrap();
        let q = op.quadratic_form(&x).unwrap();
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        let scale = op.moments().iter().map(|h| h.abs()).fold(0.0, f64::max);
        prop_assert!(q >= -1e-12 * norm2 * scale);
    }

    #[test]
    fn fast_apply_matches_dense(mu in radial(), n in 1usize..300, seed in any::<u64>()) {
        let op = HankelOperator::build(&mu, n).unwrap();
        let x: Vec<Complex> = (0..n)
            .map(|i| {
                let t = (seed.wrapping_add(i as u64 * 0x9E37_79B9)) as f64 / u64::MAX as f64;
                Complex::new(t - 0.5, (3.0 * t).sin())
            })
            .collect();
        let dense = op.apply_dense(&x).unwrap();
        let fast = op.apply_fast(&x).unwrap();
        let dev = dense.iter().zip(&fast).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(dev <= 1e-9, "deviation {dev}");
    }

    #[test]
    fn pairing_of_square_is_quadratic_form(mu in radial(), x in real_vec(12)) {
        let f = CoeffSeries::from_real(&x);
        let m = mu.moment_sequence(22);
        let pairing = hankel_pairing(&f.mul(&f), &m).unwrap();
        let q = HankelOperator::from_moments(&m, 12).unwrap().quadratic_form(&x).unwrap();
        prop_assert!((pairing.re - q).abs() <= 1e-12 * q.abs().max(1.0));
        prop_assert!(pairing.im == 0.0);
    }

    #[test]
    fn parseval_and_d1(coeffs in prop::collection::vec(-2.0f64..2.0, 1..40)) {
        let f = CoeffSeries::from_real(&coeffs);
        let a = 4 * coeffs.len();
        let h2 = hardy2_norm(&f);
        prop_assert!((hardy_p_norm(&f, 2.0, a).unwrap() - h2).abs() <= 1e-10);
        prop_assert_eq!(dirichlet_alpha_norm(&f, 1.0), h2);
    }

    #[test]
    fn mobius_is_an_involution(a in disk_point(0.999), z in disk_point(0.999)) {
        let w = mobius(a, z);
        prop_assert!(w.norm() < 1.0 + 1e-12);
        prop_assert!((mobius(a, w) - z).norm() <= 1e-9);
    }

    #[test]
    fn condition2_conjugation_symmetry(mu in radial(), w in disk_point(0.95)) {
        let m = mu.moment_sequence(0);
        let a = condition2_value(&m, w).unwrap();
        let b = condition2_value(&m, w.conj()).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn condition2_never_exceeds_kernel(mu in radial(), w in disk_point(0.99)) {
        let quad = QuadratureScheme::default();
        let c = condition2_value(&mu.moment_sequence(0), w).unwrap();
        let k = carleson_kernel_value(&mu, w, &quad).unwrap();
        prop_assert!(c <= k * (1.0 + 1e-9) + 1e-12, "{c} > {k}");
    }

    #[test]
    fn bloch_growth_bound(coeffs in prop::collection::vec(-1.0f64..1.0, 2..12), z in disk_point(0.98)) {
        let f = CoeffSeries::from_real(&coeffs);
        let refined = DiskGrid::new(GridParams { levels: 40, angles: 512, uniform: 256 }).unwrap();
        let b = bloch_seminorm(&f, &refined) * (1.0 + 1e-3);
        let lhs = (f.eval(z).unwrap() - f.eval(Complex::new(0.0, 0.0)).unwrap()).norm();
        prop_assert!(lhs <= b * z.norm().atanh() + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn qp_ordering_in_p(coeffs in prop::collection::vec(-1.0f64..1.0, 2..10), p1 in 0.5f64..3.0, dp in 0.0f64..2.0) {
        let f = CoeffSeries::from_real(&coeffs);
        let quad = QuadratureScheme::new(QuadratureParams { radial: 32, angular: 64, ..Default::default() }).unwrap();
        let a = default_a_samples();
        let low = qp_seminorm(&f, p1, &a, &quad).unwrap().value;
        let high = qp_seminorm(&f, p1 + dp, &a, &quad).unwrap().value;
        prop_assert!(high <= low * (1.0 + 1e-12));
    }

    #[test]
    fn qp_monotone_in_centres(coeffs in prop::collection::vec(-1.0f64..1.0, 2..10), extra in disk_point(0.99)) {
        let f = CoeffSeries::from_real(&coeffs);
        let quad = QuadratureScheme::new(QuadratureParams { radial: 32, angular: 64, ..Default::default() }).unwrap();
        let base = default_a_samples();
        let mut more = base.clone();
        more.push(extra);
        prop_assert!(qp_seminorm(&f, 1.0, &more, &quad).unwrap().value >= qp_seminorm(&f, 1.0, &base, &quad).unwrap().value);
    }

    #[test]
    fn section_norms_grow_with_truncation(mu in radial(), n in 1usize..40) {
        let p = PowerIteration::default();
        let small = HankelOperator::build(&mu, n).unwrap().operator_norm_h2(&p).unwrap().value;
        let big = HankelOperator::build(&mu, n + 1).unwrap().operator_norm_h2(&p).unwrap().value;
        prop_assert!(big >= small * (1.0 - 1e-8), "{small} > {big}");
    }

    #[test]
    fn bloch_monotone_under_refinement(coeffs in prop::collection::vec(-1.0f64..1.0, 2..30)) {
        let f = CoeffSeries::from_real(&coeffs);
        let coarse = DiskGrid::new(GridParams { levels: 10, angles: 32, uniform: 8 }).unwrap();
        let fine = DiskGrid::new(GridParams { levels: 20, angles: 64, uniform: 16 }).unwrap();
        prop_assert!(bloch_seminorm(&f, &fine) >= bloch_seminorm(&f, &coarse));
    }
}

#[test]
fn counterexample_quadrature_within_reported_error() {
    let quad = QuadratureScheme::default();
    for k in 1..=6 {
        let d = DiskDensityMeasure::counterexample(k).unwrap();
        for (n, q) in d.conjugate_moments_quadrature(64, &quad).iter().enumerate() {
            let exact = d.conjugate_moment(n);
            assert!((q.value - exact).norm() <= q.error.max(1e-15), "K = {k}, n = {n}");
        }
    }
}

#[test]
fn hilbert_sections_stay_below_pi() {
    let p = PowerIteration::default();
    for n in [3, 10, 100, 500, 3000] {
        let v = HankelOperator::build(&RadialMeasure::lebesgue(), n).unwrap().operator_norm_h2(&p).unwrap().value;
        assert!(v < std::f64::consts::PI);
    }
}
