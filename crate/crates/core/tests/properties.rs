use anyon1d_core::pair::{CenterOfMass, PairWavefunction};
use anyon1d_core::properties::*;
use anyon1d_core::statistics::StatisticsKind;
use anyon1d_core::Error;

fn print(reports: &[PropertyReport]) {
    for r in reports {
        eprintln!("{:<36} {:>10.3e} <= {:.0e} {} ({} states)", r.name, r.max_residual, r.tolerance, r.passed, r.states_tested);
    }
}

fn small_corpus() -> Corpus {
    Corpus {
        states: vec![PhysicalState::Bound { a_sc: 1.0 }, PhysicalState::Trap { epsilon: -0.5 }],
        alphas: vec![0.0, 0.5, 1.0],
    }
}

#[test]
fn shipped_corpus_passes() {
    let reports = run_suite(&Corpus::shipped(), Suite::All, SuiteOptions::default()).unwrap();
    print(&reports);
    assert_eq!(reports.len(), 19);
    assert!(reports.iter().all(|r| r.passed));
}

#[test]
fn sign_flip_breaks_only_the_mirror() {
    let options = SuiteOptions { inject_sign_flip: true };
    let reports = run_suite(&small_corpus(), Suite::ChiralMirror, options).unwrap();
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    assert_eq!(failed, ["chiral_mirror_wavefunction/bound", "chiral_mirror_wavefunction/trap"]);
    let formal = run_suite(&small_corpus(), Suite::FormalShift, options).unwrap();
    assert!(formal.iter().all(|r| r.passed));
}

#[test]
fn unnormalized_state_is_flagged() {
    let state = PhysicalState::Bound { a_sc: 1.0 };
    let good = state.pair(StatisticsKind::BosonicAnyon(0.5)).unwrap();
    let bad = PairWavefunction::new(good.relative.scaled(|_| 1.01), CenterOfMass::Box { length: 80.0 });
    assert!(verify_pair_normalizations("good", &[(good, 40.0)], 1e-10).passed);
    let report = verify_pair_normalizations("bad", &[(bad, 40.0)], 1e-10);
    assert!(!report.passed);
    assert!((report.max_residual - 2.0 * (1.01f64.powi(2) - 1.0)).abs() < 1e-10);
}

#[test]
fn suite_filter_selects_reports() {
    let reports = run_suite(&small_corpus(), Suite::Contacts, SuiteOptions::default()).unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r.name.starts_with("contact_")));
    assert!(matches!("nonsense".parse::<Suite>(), Err(Error::Domain(_))));
    for name in Suite::NAMES {
        assert!(name.parse::<Suite>().is_ok());
    }
}

#[test]
fn reports_are_reproducible() {
    let corpus = small_corpus();
    let a = run_suite(&corpus, Suite::Boundary, SuiteOptions::default()).unwrap();
    let b = run_suite(&corpus, Suite::Boundary, SuiteOptions::default()).unwrap();
    assert_eq!(a, b);
    let m1 = run_suite(&corpus, Suite::ChiralMirror, SuiteOptions::default()).unwrap();
    let m2 = run_suite(&corpus, Suite::ChiralMirror, SuiteOptions::default()).unwrap();
    assert_eq!(m1, m2);
}

#[test]
fn empty_corpus_is_rejected() {
    let corpus = Corpus { states: vec![], alphas: vec![0.5] };
    assert!(run_suite(&corpus, Suite::All, SuiteOptions::default()).is_err());
}

#[test]
fn contact_report_includes_hard_core_state() {
    let corpus = Corpus {
        states: vec![PhysicalState::Trap { epsilon: 1.5 }],
        alphas: vec![0.25, 0.75],
    };
    let reports = verify_contact_independence(&corpus).unwrap();
    print(&reports);
    assert!(reports.iter().all(|r| r.passed && r.max_residual < 1e-12));
}
