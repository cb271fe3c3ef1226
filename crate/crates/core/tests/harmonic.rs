use std::f64::consts::PI;

use anyon1d_core::freespace::{contact_from_wavefunction, Universality};
use anyon1d_core::harmonic::*;
use anyon1d_core::numerics::{hermite, integrate_real, pochhammer, QuadratureSpec};
use anyon1d_core::statistics::{ba_fa_map, exchange_residual, symmetric_log_samples, StatisticsKind};
use anyon1d_core::zerorange::{boundary_residual, Extended, ScatteringModel};
use anyon1d_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;

// mpmath at 30 digits: M and the contact 2 pi (M / Gamma(3/4 - eps/2))^2
const NORMS: [(f64, f64, f64); 6] = [
    (-0.5, 0.53644759741100585075, 1.8081500905811015335),
    (-1.3, 0.55471621064838343869, 2.4559303196460267261),
    (0.9, 0.72111960718331437674, 0.36508705288947807559),
    (0.5, 0.63161877774606470129, 0.79788456080286535588),
    (3.5, 0.72933054271382572518, 0.0),
    (4.2, 0.58860994754312364225, 0.2534356182802594275),
];

fn kinds(alpha: f64) -> [StatisticsKind; 4] {
    [
        StatisticsKind::Boson,
        StatisticsKind::Fermion,
        StatisticsKind::BosonicAnyon(alpha),
        StatisticsKind::FermionicAnyon(alpha),
    ]
}

#[test]
fn asc_examples() {
    assert_eq!(asc_from_epsilon(0.5), Extended::Infinite);
    assert_eq!(asc_from_epsilon(4.5), Extended::Infinite);
    assert_eq!(asc_from_epsilon(1.5), Extended::Finite(0.0));
    let a = asc_from_epsilon(-0.5).finite().unwrap();
    assert!((a - (PI / 2.0).sqrt()).abs() < 1e-14);
    let back = epsilon_from_asc(Extended::Finite(a), 0).unwrap();
    assert!((back + 0.5).abs() < 1e-10);
}

#[test]
fn limiting_levels_are_exact() {
    for n in 0..=3 {
        assert_eq!(epsilon_from_asc(Extended::Infinite, n).unwrap(), 0.5 + 2.0 * n as f64);
        assert_eq!(epsilon_from_asc(Extended::Finite(0.0), n).unwrap(), 1.5 + 2.0 * n as f64);
    }
    assert!(matches!(epsilon_from_asc(Extended::Infinite, MAX_BRANCH + 1), Err(Error::BranchOutOfRange { .. })));
}

/// Roots from mpmath findroot on sqrt(2) Gamma(3/4 - e/2) / Gamma(1/4 - e/2) = 1/a.
#[test]
fn roots_match_reference() {
    let cases = [
        (1.0, 0, -0.89928644505420757799),
        (-1.0, 0, 0.98740235416086321031),
        (-1.0, 1, 2.8389651616259809439),
        (1.0, 1, 2.1206131962227220325),
        (0.3, 0, -11.099900305007611939),
        (-0.2, 2, 5.2264468871933406988),
    ];
    for (a, branch, want) in cases {
        let got = epsilon_from_asc(Extended::Finite(a), branch).unwrap();
        assert!((got - want).abs() < 1e-10, "a={a} n={branch}: {got} vs {want}");
        let resid = inverse_asc_from_epsilon(got).unwrap() - 1.0 / a;
        assert!(resid.abs() < 1e-10 * (1.0 / a).abs().max(1.0));
    }
}

#[test]
fn round_trip_across_branches() {
    let mut count = 0;
    for branch in 0..3i64 {
        let lo = if branch == 0 { -6.0 } else { 2.0 * branch as f64 - 0.5 };
        let hi = 2.0 * branch as f64 + 1.5;
        for i in 1..=17 {
            let eps = lo + (hi - lo) * i as f64 / 18.0;
            let a = asc_from_epsilon(eps);
            let back = epsilon_from_asc(a, branch).unwrap();
            assert!((back - eps).abs() < 1e-9, "eps={eps} a={a} -> {back}");
            count += 1;
        }
    }
    assert!(count >= 50);
}

#[test]
fn normalization_matches_reference_and_closed_forms() {
    for (eps, m, _) in NORMS {
        let s = TrapRelativeState::new(StatisticsKind::Boson, eps).unwrap();
        assert!((s.norm - m).abs() < 1e-10 * m, "eps={eps}: {} vs {m}", s.norm);
    }
    for n in 0..3u32 {
        let free = TrapRelativeState::new(StatisticsKind::Boson, 0.5 + 2.0 * n as f64).unwrap();
        let want = (2.0 * PI).powf(-0.25) / (pochhammer(0.5, n) * pochhammer(1.0, n)).sqrt();
        assert!((free.norm - want).abs() < 1e-10 * want);
        let hard = TrapRelativeState::new(StatisticsKind::Boson, 1.5 + 2.0 * n as f64).unwrap();
        let want = (2.0 / PI).powf(0.25) / (pochhammer(1.5, n) * pochhammer(1.0, n)).sqrt();
        assert!((hard.norm - want).abs() < 1e-10 * want);
    }
}

#[test]
fn state_invariants() {
    let s = TrapRelativeState::new(StatisticsKind::BosonicAnyon(0.3), 0.7).unwrap();
    assert_eq!(s.nu_plus, s.nu_minus + 0.5);
    assert_eq!(s.nu_plus, 0.7 / 2.0 - 0.25);
    assert!(s.eval(0.0).is_err());
    assert!(TrapRelativeState::new(StatisticsKind::BosonicAnyon(1.5), 0.7).is_err());
}

#[test]
fn wavefunction_examples() {
    let s = TrapRelativeState::new(StatisticsKind::Boson, 0.5).unwrap();
    for z in [-2.0, 0.3, 1.7] {
        let want = (2.0 * PI).powf(-0.25) * (-z * z / 4.0f64).exp();
        assert!((s.eval(z).unwrap() - want).norm() < 1e-12);
    }
    // odd Gaussian |z| exp(-z^2/4) sign(z) at the hard-core fermion level
    let f = TrapRelativeState::new(StatisticsKind::Fermion, 1.5).unwrap();
    let w = f.wavefunction();
    let samples = symmetric_log_samples(1e-3, 10.0, 50);
    assert_eq!(exchange_residual(&w, &samples).unwrap(), 0.0);
    let c = (2.0 / PI).powf(0.25) / 2f64.sqrt();
    for z in [-1.2f64, 0.4, 3.0] {
        assert!((w.at(z).re - c * z * (-z * z / 4.0).exp()).abs() < 1e-10, "{z}");
    }
}

#[test]
fn trap_states_obey_exchange_and_contact_conditions() {
    let samples = symmetric_log_samples(1e-3, 10.0, 50);
    for eps in [-0.5, 0.9, 2.3] {
        let a = asc_from_epsilon(eps).finite().unwrap();
        for &alpha in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            for kind in kinds(alpha) {
                let w = TrapRelativeState::new(kind, eps).unwrap().wavefunction();
                assert!(exchange_residual(&w, &samples).unwrap() <= 1e-12);
                let r = boundary_residual(&w, &ScatteringModel::new(a)).unwrap();
                assert!(r <= 1e-8, "{kind} eps={eps}: {r}");
            }
        }
    }
}

/// Finite-difference `-psi'' + z^2 psi / 4` away from the origin.
#[test]
fn trap_states_are_eigenstates() {
    let h = 1e-3;
    for eps in [-1.3, -0.5, 0.5, 1.5, 0.9, 3.1] {
        for kind in [StatisticsKind::BosonicAnyon(0.4), StatisticsKind::FermionicAnyon(0.8)] {
            let w = TrapRelativeState::new(kind, eps).unwrap().wavefunction();
            let mut worst: f64 = 0.0;
            let mut scale: f64 = 0.0;
            for i in 0..200 {
                let z = -6.0 + 12.0 * (i as f64 + 0.5) / 200.0;
                if z.abs() < 1e-2 {
                    continue;
                }
                let lap = (w.at(z + h) - w.at(z) * 2.0 + w.at(z - h)) / (h * h);
                let res = -lap + w.at(z) * (0.25 * z * z - eps);
                worst = worst.max(res.norm());
                scale = scale.max(w.at(z).norm());
            }
            assert!(worst <= 1e-6 * scale, "{kind} eps={eps}: {worst}");
        }
    }
}

#[test]
fn ba_fa_map_links_trap_states() {
    let samples = symmetric_log_samples(1e-3, 10.0, 50);
    for &alpha in &[0.0, 0.3, 1.0] {
        let b = TrapRelativeState::new(StatisticsKind::BosonicAnyon(alpha), -0.5).unwrap();
        let f = b.with_kind(StatisticsKind::FermionicAnyon(alpha));
        let mapped = ba_fa_map(&b.wavefunction()).unwrap();
        for &z in &samples {
            assert!((mapped.at(z) - f.eval(z).unwrap()).norm() <= 1e-12);
        }
    }
}

#[test]
fn com_examples() {
    assert!((com_wavefunction(0, 0.0) - 0.8932438417380023).abs() < 1e-15);
    assert_eq!(com_wavefunction(1, 0.0), 0.0);
    for m in 0..10u32 {
        for z in [-1.3, 0.2, 0.9] {
            let y = 2f64.sqrt() * z;
            let direct = (2f64.sqrt() / (2f64.powi(m as i32) * (1..=m).map(f64::from).product::<f64>() * PI.sqrt())).sqrt()
                * (-z * z).exp()
                * hermite(m, y);
            assert!((com_wavefunction(m, z) - direct).abs() < 1e-12, "M={m} Z={z}");
        }
    }
}

#[test]
fn contact_examples() {
    assert!((contact_ho(0.5).unwrap() - (2.0 / PI).sqrt()).abs() < 1e-9);
    for (eps, _, c) in NORMS {
        assert!((contact_ho(eps).unwrap() - c).abs() < 1e-9 * c.max(1.0), "eps={eps}");
    }
    let hard = trap_contact(2.5 + 1.0).unwrap();
    assert_eq!(hard.contact, 0.0);
    let ratio = trap_contact(3.5).unwrap().over_asc2;
    assert!((ratio - 1.5 * (2.0 / PI).sqrt()).abs() < 1e-9, "{ratio}");
    let free = trap_contact(4.5).unwrap();
    assert!((free.contact - (2.0 / PI).sqrt() * pochhammer(0.5, 2) / pochhammer(1.0, 2)).abs() < 1e-9);
    assert_eq!(free.over_asc, 0.0);
    assert_eq!(free.over_asc2, 0.0);
}

#[test]
fn contact_routes_agree() {
    let quad = QuadratureSpec::split_at(-30.0, 30.0, &[0.0], 24);
    for eps in [-0.5, -1.3, 0.9] {
        let closed = contact_ho(eps).unwrap();
        let mut values = Vec::new();
        for kind in kinds(0.37) {
            let pair = TrapTwoBodyState::new(0, TrapRelativeState::new(kind, eps).unwrap()).pair();
            let est = contact_from_wavefunction(&pair, 10.0, &quad).unwrap();
            assert!(est.normalized, "{est:?}");
            assert!((est.contact - closed).abs() <= 1e-7 * closed, "eps={eps}: {} vs {closed}", est.contact);
            values.push(est.contact);
        }
        for v in &values {
            assert!((v - values[0]).abs() <= 1e-9 * values[0]);
        }
    }
}

#[test]
fn k2_examples() {
    match k2_coefficient(-0.5) {
        K2Coefficient::Value(v) => assert!((v + PI / 8.0).abs() < 1e-14),
        other => panic!("{other:?}"),
    }
    assert_eq!(k2_coefficient(1.5), K2Coefficient::Value(0.0));
    assert_eq!(k2_coefficient(0.5), K2Coefficient::RatioToAsc2(1.75));
    assert_eq!(k2_coefficient(2.5), K2Coefficient::RatioToAsc2(5.75));
}

#[test]
fn tail_examples() {
    let eps = -0.7;
    let c = contact_ho(eps).unwrap();
    let a = asc_from_epsilon(eps).finite().unwrap();
    let K2Coefficient::Value(k2) = k2_coefficient(eps) else { panic!() };
    let t = tail_ho(StatisticsKind::BosonicAnyon(1.0), eps).unwrap();
    assert!((t.c2 - 4.0 * c).abs() < 1e-12);
    assert_eq!(t.c3, 0.0);
    assert!((t.c4 - 4.0 * c * k2 / (a * a)).abs() < 1e-9);

    let half = contact_ho(0.5).unwrap();
    let t = tail_ho(StatisticsKind::BosonicAnyon(0.5), 0.5).unwrap();
    assert!((t.c2 - 2.0 * half).abs() < 1e-12);
    assert_eq!(t.c3, 0.0);
    assert!((t.c4 - 3.5 * half).abs() < 1e-12);
    assert_eq!(t.flags.c4, Universality::MixedUniversality);

    let c = contact_ho(-0.5).unwrap();
    let a = asc_from_epsilon(-0.5).finite().unwrap();
    let t = tail_ho(StatisticsKind::FermionicAnyon(0.0), -0.5).unwrap();
    assert!((t.c2 - 4.0 * c).abs() < 1e-12);
    assert_eq!(t.c3, 0.0);
    assert!((t.c4 - 4.0 * c * (-PI / 8.0) / (a * a)).abs() < 1e-9);

    // hard-core level: pure, universal k^-4 tail scaled by cos^2
    let t = tail_ho(StatisticsKind::BosonicAnyon(0.5), 1.5).unwrap();
    assert_eq!((t.c2, t.c3), (0.0, 0.0));
    assert!((t.c4 - 4.0 * (2.0 / PI).sqrt() * 0.5).abs() < 1e-9);
    assert_eq!(t.flags.c4, Universality::Universal);
    // no algebraic tail for free bosons or hard-core fermions
    assert_eq!(tail_ho(StatisticsKind::Boson, 0.5).unwrap().as_array(), [0.0, 0.0, 0.0]);
    assert_eq!(tail_ho(StatisticsKind::BosonicAnyon(1.0), 1.5).unwrap().as_array(), [0.0, 0.0, 0.0]);
}

#[test]
fn generic_tail_cell() {
    let eps = -0.5;
    let c = contact_ho(eps).unwrap();
    let a = asc_from_epsilon(eps).finite().unwrap();
    let k2 = (2.0 * eps + 0.75) * a * a;
    for &alpha in &[0.2, 0.5, 0.9] {
        let (s, co) = (0.5 * PI * alpha).sin_cos();
        let b = tail_ho(StatisticsKind::BosonicAnyon(alpha), eps).unwrap();
        let want = [4.0 * c * s * s, 4.0 * c * (PI * alpha).sin() / a, 4.0 * c / (a * a) * (co * co + k2 * s * s)];
        let f = tail_ho(StatisticsKind::FermionicAnyon(alpha), eps).unwrap();
        let want_f = [4.0 * c * co * co, -4.0 * c * (PI * alpha).sin() / a, 4.0 * c / (a * a) * (s * s + k2 * co * co)];
        for i in 0..3 {
            assert!((b.as_array()[i] - want[i]).abs() < 1e-12, "{b:?}");
            assert!((f.as_array()[i] - want_f[i]).abs() < 1e-12, "{f:?}");
        }
    }
}

#[test]
fn short_distance_examples() {
    let state = TrapTwoBodyState::new(0, TrapRelativeState::new(StatisticsKind::BosonicAnyon(0.5), -0.5).unwrap());
    let e = short_distance_expansion(&state, 0.0).unwrap();
    let a = asc_from_epsilon(-0.5).finite().unwrap();
    assert!((e.abs_linear / e.constant + 1.0 / a).abs() < 1e-12);
    assert_eq!(e.linear, 0.0);
    let fa = TrapTwoBodyState::new(0, TrapRelativeState::new(StatisticsKind::FermionicAnyon(0.5), -0.5).unwrap());
    assert!(short_distance_expansion(&fa, 0.0).is_err());
    let excited = TrapTwoBodyState::new(1, state.relative);
    assert!(matches!(short_distance_expansion(&excited, 0.0), Err(Error::Unsupported(_))));
}

/// The expansion reproduces the assembled pair to third order.
#[test]
fn short_distance_tracks_the_pair() {
    let state = TrapTwoBodyState::new(0, TrapRelativeState::new(StatisticsKind::BosonicAnyon(0.3), -0.5).unwrap());
    let pair = state.pair();
    for z2 in [0.0, 0.5, 1.0] {
        let e = short_distance_expansion(&state, z2).unwrap();
        for xi in [1e-2, -1e-2, 2e-2, -2e-2] {
            let exact = pair.eval(z2 + xi, z2);
            let approx = e.phase(xi) * e.series(xi);
            let rel = (exact - approx).norm() / e.constant;
            assert!(rel < 1e-4 * xi.abs().powi(3) / 1e-6, "z2={z2} xi={xi}: {rel}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn com_states_are_normalized(m in 0u32..40) {
        let spec = QuadratureSpec::uniform(-12.0, 12.0, 96, 16);
        let n = integrate_real(|z| com_wavefunction(m, z).powi(2), &spec);
        prop_assert!((n - 1.0).abs() < 1e-10, "{}", n);
    }

    #[test]
    fn contact_is_statistics_independent(eps in -3.0f64..4.0, alpha in 0.0f64..=1.0) {
        prop_assume!(((eps - 0.5) / 2.0 - ((eps - 0.5) / 2.0).round()).abs() > 1e-3);
        let base = TrapRelativeState::new(StatisticsKind::Boson, eps).unwrap();
        let samples: Vec<Complex64> = kinds(alpha).iter().map(|&k| base.with_kind(k).eval(1e-9).unwrap()).collect();
        for s in &samples {
            prop_assert!((s.norm() - samples[0].norm()).abs() <= 1e-12 * samples[0].norm().max(1e-300));
        }
    }
}
