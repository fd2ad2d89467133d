//! End-to-end acceptance checks for the whole toolkit.
//!
//! Each test covers one externally visible guarantee at its stated tolerance
//! and prints as one pass/fail line in the harness output. Timing-sensitive
//! checks assert wall-clock budgets so a performance regression fails loudly
//! rather than silently degrading.

use std::f64::consts::{LN_2, PI};
use std::time::{Duration, Instant};

use densmat::bipartite::{
    random_state, reduce_u, reduce_v, schmidt, PureBipartiteState, DEFAULT_RANK_TOL,
};
use densmat::hydrogen::{self, HydrogenParams};
use densmat::lattice::{self, SPREAD_DECAY_PRODUCT};
use densmat::linalg::ComplexMatrix;
use densmat::{homogeneous, quad, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The maximally entangled two-qubit fixture with coefficients 1/sqrt(2).
fn bell_state() -> PureBipartiteState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureBipartiteState::new(ComplexMatrix::from_real_diag(&[s, s]).unwrap()).unwrap()
}

/// A seeded random product state `d = u v^H` with normalized factors.
fn seeded_product_state(dim_u: usize, dim_v: usize, seed: u64) -> PureBipartiteState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |dim: usize| -> Vec<Complex64> {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= norm;
        }
        v
    };
    let u = draw(dim_u);
    let v = draw(dim_v);
    let d = ComplexMatrix::from_fn(dim_u, dim_v, |i, j| u[i] * v[j].conj()).unwrap();
    PureBipartiteState::new(d).unwrap()
}

/// Descending spectra of both reductions agree entry by entry, with the
/// longer side's surplus eigenvalues vanishing.
fn assert_reductions_share_spectrum(state: &PureBipartiteState, tol: f64, label: &str) {
    let spec_u = reduce_u(state).spectrum().unwrap();
    let spec_v = reduce_v(state).spectrum().unwrap();
    let common = spec_u.len().min(spec_v.len());
    for l in 0..common {
        let diff = (spec_u[l] - spec_v[l]).abs();
        assert!(
            diff <= tol,
            "{label}: spectra differ by {diff:.3e} at mode {l}"
        );
    }
    for (side, spec) in [("u", &spec_u), ("v", &spec_v)] {
        for (l, &lambda) in spec.iter().enumerate().skip(common) {
            assert!(
                lambda.abs() <= tol,
                "{label}: surplus {side} eigenvalue {lambda:.3e} at mode {l}"
            );
        }
    }
}

#[test]
fn reduced_spectra_agree_for_seeded_random_states() {
    let start = Instant::now();
    let mut dims = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for case in 0..200u64 {
        let du = dims.gen_range(2..=16);
        let dv = dims.gen_range(2..=16);
        let state = random_state(du, dv, 1000 + case).unwrap();
        assert_reductions_share_spectrum(&state, 1e-10, &format!("case {case} ({du}x{dv})"));
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(5),
        "200-state sweep took {elapsed:?}, budget is 5 s"
    );
}

#[test]
fn schmidt_spectra_sum_to_one_across_the_suite() {
    let mut dims = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let check = |state: &PureBipartiteState, label: &str| {
        let sd = schmidt(state, DEFAULT_RANK_TOL).unwrap();
        let total: f64 = sd.lambdas.iter().sum();
        assert!(
            (total - 1.0).abs() <= 1e-10,
            "{label}: spectrum sums to {total}"
        );
    };
    for case in 0..200u64 {
        let du = dims.gen_range(2..=16);
        let dv = dims.gen_range(2..=16);
        let state = random_state(du, dv, 2000 + case).unwrap();
        check(&state, &format!("random case {case}"));
    }
    check(&bell_state(), "bell fixture");
    check(&seeded_product_state(5, 7, 11), "product fixture");
    let lattice_state = lattice::build_state(32, 20.0, 2.0, 0, 1.0).unwrap();
    check(lattice_state.state(), "lattice fixture");
}

#[test]
fn purity_separates_product_states_from_bell_pairs() {
    for seed in [3u64, 17, 91] {
        let state = seeded_product_state(6, 4, seed);
        let sd = schmidt(&state, DEFAULT_RANK_TOL).unwrap();
        let report = sd.entanglement_report();
        assert_eq!(sd.rank, 1, "product state seed {seed} not rank 1");
        assert!(
            (report.purity - 1.0).abs() <= 1e-10,
            "product purity {} at seed {seed}",
            report.purity
        );
        assert!(
            report.entropy < 1e-8,
            "product entropy {} at seed {seed}",
            report.entropy
        );
    }

    let sd = schmidt(&bell_state(), DEFAULT_RANK_TOL).unwrap();
    let report = sd.entanglement_report();
    assert_eq!(sd.rank, 2);
    assert!(
        (report.purity - 0.5).abs() <= 1e-12,
        "bell purity {}",
        report.purity
    );
    assert!(
        (report.entropy - LN_2).abs() <= 1e-9,
        "bell entropy {}",
        report.entropy
    );
}

#[test]
fn plane_wave_spectra_match_dense_diagonalization() {
    let start = Instant::now();
    for n_sites in [8usize, 16, 32, 64, 128] {
        let state = lattice::build_state(n_sites, 40.0, 3.0, 0, 1.0).unwrap();
        let corr = lattice::reduced_electron_correlation(&state).unwrap();
        let spectral = homogeneous::spectrum(&corr, 1.0).unwrap();
        let mut via_dft = spectral.lambdas().to_vec();
        via_dft.sort_by(|a, b| b.partial_cmp(a).unwrap());

        let via_dense = reduce_u(state.state()).spectrum().unwrap();
        assert_eq!(via_dense.len(), via_dft.len());
        for (l, (d, f)) in via_dense.iter().zip(&via_dft).enumerate() {
            assert!(
                (d - f).abs() <= 1e-10,
                "N = {n_sites}: dense {d} vs plane-wave {f} at mode {l}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(10),
        "dense sweep took {elapsed:?}, budget is 10 s"
    );
}

#[test]
fn occupation_trace_is_unity_and_needs_the_quartic_tail() {
    let trace = quad::integrate_half_line(
        |k| 4.0 * PI * k * k * hydrogen::rho_tilde_int(k, 1.0) / (2.0 * PI).powi(3),
        1e-12,
    )
    .unwrap();
    assert!(
        (trace - 1.0).abs() <= 1e-8,
        "occupation trace {trace} not unity"
    );

    // With the denominator power lowered from 4 to 1 the integrand tends to
    // the constant 32/pi, so cutoff integrals track the antiderivative
    // (32/pi)(cut - atan cut) and grow without bound instead of converging.
    let first_power = |cut: f64| {
        quad::integrate(
            |k: f64| 4.0 * PI * k * k * 64.0 * PI / (1.0 + k * k) / (2.0 * PI).powi(3),
            0.0,
            cut,
            1e-6,
        )
        .unwrap()
    };
    let at_1e3 = first_power(1e3);
    let at_1e4 = first_power(1e4);
    assert!(at_1e3 > 1e3, "cutoff integral {at_1e3} should dwarf 1");
    assert!(
        at_1e4 / at_1e3 > 9.9,
        "cutoff growth {at_1e3} -> {at_1e4} is not linear"
    );
    for (cut, val) in [(1e3f64, at_1e3), (1e4, at_1e4)] {
        let linear = 32.0 / PI * (cut - cut.atan());
        assert!(
            ((val - linear) / linear).abs() <= 1e-6,
            "cutoff {cut}: {val} departs from linear growth {linear}"
        );
    }
}

#[test]
fn numeric_transform_of_autocorrelation_matches_closed_form() {
    let sinc = |x: f64| {
        if x.abs() < 1e-8 {
            1.0 - x * x / 6.0
        } else {
            x.sin() / x
        }
    };
    for k in [0.5f64, 1.0, 2.0] {
        let numeric = quad::integrate_half_line(
            |s| 4.0 * PI * s * s * hydrogen::autocorrelation_1s(s, 1.0) * sinc(k * s),
            1e-11,
        )
        .unwrap();
        let closed = hydrogen::rho_tilde_int(k, 1.0);
        let rel = ((numeric - closed) / closed).abs();
        assert!(
            rel <= 1e-7,
            "k = {k}: transform {numeric} vs closed form {closed} (rel {rel:.3e})"
        );
    }
}

#[test]
fn momentum_spread_is_inverse_correlation_length() {
    let params = HydrogenParams::default();
    let closed = hydrogen::delta_p(&params);
    assert!((closed - 1.0).abs() <= 1e-15, "closed form {closed}");

    let via_quadrature = hydrogen::delta_p_quadrature(&params).unwrap();
    assert!(
        (via_quadrature - 1.0).abs() <= 1e-8,
        "quadrature spread {via_quadrature}"
    );

    let table = hydrogen::radial_spectrum_export(&params, 20.0, 2048).unwrap();
    let via_export = table.weighted_moment(2).unwrap().sqrt();
    assert!(
        (via_export - 1.0).abs() <= 1e-3,
        "discretized spread {via_export}"
    );
}

#[test]
fn boost_shifts_the_mean_and_leaves_the_spread_alone() {
    let total_momentum = [400.0, -300.0, 500.0];
    let boosted = HydrogenParams::new(
        1.0,
        1.0,
        1.0,
        hydrogen::PROTON_ELECTRON_MASS_RATIO,
        total_momentum,
    )
    .unwrap();
    let mean = hydrogen::mean_momentum(&boosted).unwrap();
    let share = boosted.electron_fraction();
    for (axis, (got, p)) in mean.iter().zip(&total_momentum).enumerate() {
        let want = share * p;
        assert!(
            (got - want).abs() <= 1e-6,
            "axis {axis}: mean {got} vs electron share {want}"
        );
    }

    let at_rest = hydrogen::delta_p_quadrature(&HydrogenParams::default()).unwrap();
    let fast = HydrogenParams::new(
        1.0,
        1.0,
        1.0,
        hydrogen::PROTON_ELECTRON_MASS_RATIO,
        [3000.0, 0.0, 0.0],
    )
    .unwrap();
    let moving = hydrogen::delta_p_quadrature(&fast).unwrap();
    assert!(
        (moving - at_rest).abs() <= 1e-6,
        "spread changed under boost: {at_rest} -> {moving}"
    );

    // Same statement on the lattice: boosting the pair by two center-of-mass
    // momentum quanta cyclically shifts the electron spectrum by one bin per
    // unit of the electron's mass share (1/2 here), bin for bin.
    let resting = lattice::build_state(64, 40.0, 3.5, 0, 1.0).unwrap();
    let moving = lattice::build_state(64, 40.0, 3.5, 4, 1.0).unwrap();
    let rest_spec = homogeneous::spectrum(
        &lattice::reduced_electron_correlation(&resting).unwrap(),
        1.0,
    )
    .unwrap();
    let moving_spec = homogeneous::spectrum(
        &lattice::reduced_electron_correlation(&moving).unwrap(),
        1.0,
    )
    .unwrap();
    let predicted = rest_spec.boost(2);
    for (bin, (got, want)) in moving_spec
        .lambdas()
        .iter()
        .zip(predicted.lambdas())
        .enumerate()
    {
        assert!(
            (got - want).abs() <= 1e-9,
            "bin {bin}: boosted weight {got} vs shifted weight {want}"
        );
    }
}

#[test]
fn lattice_schmidt_and_plane_wave_spectra_coincide() {
    let state = lattice::build_state(64, 40.0, 3.5, 0, hydrogen::PROTON_ELECTRON_MASS_RATIO)
        .unwrap();

    let sd = schmidt(state.state(), DEFAULT_RANK_TOL).unwrap();
    let mut via_schmidt = sd.lambdas.clone();
    via_schmidt.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let corr = lattice::reduced_electron_correlation(&state).unwrap();
    let mut via_dft = homogeneous::spectrum(&corr, 1.0).unwrap().lambdas().to_vec();
    via_dft.sort_by(|a, b| b.partial_cmp(a).unwrap());

    assert_eq!(via_schmidt.len(), via_dft.len());
    for (l, (s, f)) in via_schmidt.iter().zip(&via_dft).enumerate() {
        assert!(
            (s - f).abs() <= 1e-9,
            "mode {l}: Schmidt weight {s} vs plane-wave weight {f}"
        );
    }
}

#[test]
fn momentum_spread_falls_as_correlation_grows() {
    let decays = [2.5, 3.0, 3.5, 4.0, 4.5, 5.0];
    let rows = lattice::entanglement_vs_decay_scan(64, 40.0, &decays, 1e-12).unwrap();
    for pair in rows.windows(2) {
        assert!(
            pair[1].delta_p < pair[0].delta_p,
            "spread not strictly decreasing: {} then {}",
            pair[0].delta_p,
            pair[1].delta_p
        );
    }
    for row in &rows {
        assert!(row.in_regime, "decay {} left the resolved window", row.decay);
        let product = row.delta_p * row.decay;
        let rel = ((product - SPREAD_DECAY_PRODUCT) / SPREAD_DECAY_PRODUCT).abs();
        assert!(
            rel <= 0.2,
            "decay {}: spread-decay product {product} drifts {rel:.3} from {SPREAD_DECAY_PRODUCT}",
            row.decay
        );
    }
}
