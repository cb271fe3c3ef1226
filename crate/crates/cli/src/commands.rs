use std::f64::consts::PI;
use std::path::Path;

use anyon1d_core::freespace::{contact_bound, extrema_bound, momentum_bound, obdm_bound, tail_bound, ExtremumRecord, TailCoefficients};
use anyon1d_core::harmonic::{k2_coefficient, tail_ho, trap_contact, K2Coefficient, TrapRelativeState, TrapTwoBodyState};
use anyon1d_core::momentum_numeric::{build_grid, momentum_distribution, theta_xi_upsilon};
use anyon1d_core::properties::{run_suite, Corpus, PropertyReport, Suite, SuiteOptions};
use anyon1d_core::statistics::StatisticsKind;
use anyon1d_core::zerorange::{bound_state, Extended, ScatteringModel};
use anyon1d_core::Error;
use serde::Serialize;

use crate::output::{write_json, write_table, Table};
use crate::{Failure, HoArgs, StateArgs, Stats, VerifyArgs};

fn config(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn kind_of(args: &StateArgs) -> Result<StatisticsKind, Failure> {
    let alpha = args.alpha.unwrap_or(0.0);
    if !(0.0..=1.0).contains(&alpha) {
        return Err(config(format!("--alpha must lie in [0, 1], got {alpha}")));
    }
    match args.stats {
        Stats::Boson | Stats::Fermion if alpha != 0.0 => Err(config("--alpha only applies to --stats ba or fa")),
        Stats::Boson => Ok(StatisticsKind::Boson),
        Stats::Fermion => Ok(StatisticsKind::Fermion),
        Stats::Ba => Ok(StatisticsKind::BosonicAnyon(alpha)),
        Stats::Fa => Ok(StatisticsKind::FermionicAnyon(alpha)),
    }
}

fn stats_label(stats: Stats) -> &'static str {
    match stats {
        Stats::Boson => "boson",
        Stats::Fermion => "fermion",
        Stats::Ba => "ba",
        Stats::Fa => "fa",
    }
}

fn parse_asc(raw: &str) -> Result<Extended, Failure> {
    match raw.trim() {
        "inf" | "infinity" => Ok(Extended::Infinite),
        s => s
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Extended::Finite)
            .ok_or_else(|| config(format!("--asc must be a number, 'inf' or '0', got '{raw}'"))),
    }
}

fn positive(name: &str, value: f64) -> Result<f64, Failure> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(config(format!("{name} must be positive and finite, got {value}")))
    }
}

fn prepare_out(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| config(format!("cannot create output directory {}: {e}", dir.display())))
}

/// `count` evenly spaced points on `[lo, hi]`, endpoints included.
fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
}

#[derive(Serialize)]
struct BoundSummary {
    stats: &'static str,
    alpha: f64,
    a_sc: f64,
    energy: f64,
    kappa: f64,
    contact: f64,
    extrema: Vec<ExtremumRecord>,
    tail: TailCoefficients,
}

pub fn boundstate(args: &StateArgs) -> Result<(), Failure> {
    let kind = kind_of(args)?;
    if args.epsilon.is_some() {
        return Err(config("boundstate takes --asc, not --epsilon"));
    }
    let a = match parse_asc(args.asc.as_deref().ok_or_else(|| config("boundstate needs --asc"))?)? {
        Extended::Finite(a) if a > 0.0 => a,
        other => return Err(config(format!("a bound state needs a positive finite --asc, got {other}"))),
    };
    let kmax = positive("--kmax", args.kmax.unwrap_or(10.0))?;
    prepare_out(&args.out)?;

    let bound = bound_state(kind, &ScatteringModel::new(a))?;
    let extrema = extrema_bound(kind, a)?;

    let mut obdm_rows = Vec::new();
    for x in linspace(-5.0, 5.0, 201) {
        let rho = obdm_bound(kind, a, x * a, -x * a)?;
        obdm_rows.push(vec![x, rho.re, rho.im]);
    }
    let obdm = Table {
        columns: vec!["z1", "re_rho", "im_rho"],
        rows: obdm_rows,
    };

    // the maxima are added as exact rows so the peaks are tabulated
    let mut ak = linspace(-kmax, kmax, 2001);
    ak.extend(extrema.iter().map(|e| e.location_k * a).filter(|x| x.abs() <= kmax));
    ak.sort_by(f64::total_cmp);
    ak.dedup();
    let nk = Table {
        columns: vec!["asc_k", "n_over_asc"],
        rows: ak
            .iter()
            .map(|&x| Ok(vec![x, momentum_bound(kind, a, x / a)? / a]))
            .collect::<Result<_, Error>>()?,
    };

    let summary = BoundSummary {
        stats: stats_label(args.stats),
        alpha: kind.alpha(),
        a_sc: a,
        energy: bound.energy,
        kappa: bound.kappa,
        contact: contact_bound(a)?,
        extrema,
        tail: tail_bound(kind, a)?,
    };
    write_table(&args.out, "obdm", &obdm, args.format)?;
    write_table(&args.out, "nk", &nk, args.format)?;
    write_json(&args.out.join("summary.json"), &summary)?;
    Ok(())
}

#[derive(Serialize)]
struct Spectrum {
    stats: &'static str,
    alpha: f64,
    epsilon: f64,
    energy: f64,
    nu_plus: f64,
    nu_minus: f64,
    a_sc: Extended,
    branch: Option<i64>,
    norm: f64,
    contact: f64,
    contact_over_asc: f64,
    contact_over_asc2: f64,
    k2: K2Coefficient,
    tail: TailCoefficients,
}

/// Errors from building the state reflect the requested parameters.
fn state_error(e: Error) -> Failure {
    match e {
        Error::Domain(_) | Error::BranchOutOfRange { .. } | Error::Pole(_) => Failure::Config(e.to_string()),
        other => other.into(),
    }
}

pub fn ho(args: &HoArgs) -> Result<(), Failure> {
    let s = &args.state;
    let kind = kind_of(s)?;
    let relative = match (s.epsilon, s.asc.as_deref()) {
        (Some(_), Some(_)) => return Err(config("give either --epsilon or --asc, not both")),
        (None, None) => return Err(config("ho needs --epsilon or --asc")),
        (Some(eps), None) => {
            if args.branch.is_some() {
                return Err(config("--branch only applies with --asc"));
            }
            TrapRelativeState::new(kind, eps).map_err(state_error)?
        }
        (None, Some(raw)) => TrapRelativeState::from_asc(kind, parse_asc(raw)?, args.branch.unwrap_or(0)).map_err(state_error)?,
    };
    let kmax = positive("--kmax", s.kmax.unwrap_or(100.0 * PI))?;
    positive("--window", args.window)?;
    let grid = build_grid(args.window, args.grid_coarse, args.grid_fine, 0.1).map_err(|e| config(e.to_string()))?;
    prepare_out(&s.out)?;

    let eps = relative.epsilon;
    let state = TrapTwoBodyState::new(0, relative);
    let pair = state.pair();
    let contact = trap_contact(eps)?;
    let tail = tail_ho(kind, eps)?;

    let ks = linspace(-10.0, 10.0, 401);
    let nd = momentum_distribution(&pair, &grid, &ks)?;
    let nk = Table {
        columns: vec!["aho_k", "n"],
        rows: ks.iter().zip(&nd.values).map(|(&k, &n)| vec![k, n]).collect(),
    };

    let tail_k: Vec<f64> = (0..40).map(|i| kmax.powf(i as f64 / 39.0)).collect();
    let tail_nd = momentum_distribution(&pair, &grid, &tail_k)?;
    let scaled = theta_xi_upsilon(&tail_nd, contact.contact, relative.a_sc);
    let tails = Table {
        columns: vec!["aho_k", "theta", "xi", "upsilon", "theta_asymptote", "xi_asymptote", "upsilon_asymptote"],
        rows: (0..tail_k.len())
            .map(|i| vec![tail_k[i], scaled.theta[i], scaled.xi[i], scaled.upsilon[i], tail.c2, tail.c3, tail.c4])
            .collect(),
    };

    let spectrum = Spectrum {
        stats: stats_label(s.stats),
        alpha: kind.alpha(),
        epsilon: eps,
        energy: state.energy(),
        nu_plus: relative.nu_plus,
        nu_minus: relative.nu_minus,
        a_sc: relative.a_sc,
        branch: s.asc.as_ref().map(|_| args.branch.unwrap_or(0)),
        norm: relative.norm,
        contact: contact.contact,
        contact_over_asc: contact.over_asc,
        contact_over_asc2: contact.over_asc2,
        k2: k2_coefficient(eps),
        tail,
    };
    write_json(&s.out.join("spectrum.json"), &spectrum)?;
    write_table(&s.out, "nk", &nk, s.format)?;
    write_table(&s.out, "tails", &tails, s.format)?;
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    suite: &'a str,
    inject_sign_flip: bool,
    passed: bool,
    reports: &'a [PropertyReport],
}

pub fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let suite: Suite = args.suite.parse().map_err(|e: Error| config(e.to_string()))?;
    if let Some(dir) = &args.out {
        prepare_out(dir)?;
    }
    let options = SuiteOptions {
        inject_sign_flip: args.inject_sign_flip,
    };
    let reports = run_suite(&Corpus::shipped(), suite, options)?;
    for r in &reports {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {:<36} residual {:.3e} tolerance {:.0e} states {}", r.name, r.max_residual, r.tolerance, r.states_tested);
    }
    let passed = reports.iter().all(|r| r.passed);
    if let Some(dir) = &args.out {
        let doc = VerifyReport {
            suite: &args.suite,
            inject_sign_flip: args.inject_sign_flip,
            passed,
            reports: &reports,
        };
        write_json(&dir.join("report.json"), &doc)?;
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}
