//! Acceptance run: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use crossnorm_core::fiber::{gauge_lp, NormDescriptor};
use crossnorm_core::linalg::Matrix;
use crossnorm_core::measure::MeasureSpace;
use crossnorm_core::module::ModuleSpec;
use crossnorm_core::rational::{int, Rational};
use crossnorm_core::tensor::Tensor;
use crossnorm_core::theorems::{verify, CaseReport, TheoremId};
use num_traits::{One, Signed};

mod common;

use common::brute_force_gauge;

const SEED: u64 = 20_240_601;

struct Line {
    name: String,
    pass: bool,
    detail: String,
}

fn suite(id: TheoremId, cases: u64) -> Vec<CaseReport> {
    verify(id, SEED, cases, None)
}

fn summarize(name: &str, reports: &[&[CaseReport]]) -> Line {
    let total: usize = reports.iter().map(|r| r.len()).sum();
    let failed: Vec<&CaseReport> = reports
        .iter()
        .flat_map(|r| r.iter())
        .filter(|r| !r.pass)
        .collect();
    let detail = match failed.first() {
        None => format!("{total} cases"),
        Some(f) => format!(
            "{}/{total} failed; case {}: {}",
            failed.len(),
            f.index,
            f.detail
        ),
    };
    Line {
        name: name.to_string(),
        pass: failed.is_empty(),
        detail,
    }
}

fn sandwich_identity() -> Line {
    let space = Arc::new(MeasureSpace::uniform(1));
    let m = Arc::new(ModuleSpec::constant(space, NormDescriptor::l2(2)));
    let alpha = Tensor::new(m.clone(), m, vec![Matrix::identity(2)]).unwrap();
    let r = alpha.crossnorm_sandwich(1e-7).unwrap();
    let hs = r.hs.clone().unwrap();
    let close = |v: f64, want: f64| (v - want).abs() <= 1e-7;
    let pass = r.holds
        && close(r.eps.value(0).to_f64(), 1.0)
        && close(hs.value(0).to_f64(), 2f64.sqrt())
        && close(r.pi.value(0).to_f64(), 2.0);
    Line {
        name: "TH-SANDWICH identity".into(),
        pass,
        detail: format!("(eps, hs, pi) = ({}, {hs}, {})", r.eps, r.pi),
    }
}

fn oracle_equivalence() -> Line {
    let directions: Vec<[i64; 2]> = (-1..=1)
        .flat_map(|a| (-1..=1).map(move |b| [a, b]))
        .filter(|v| *v != [0, 0])
        .collect();
    let mut targets = Vec::new();
    for a in -4..=4 {
        for b in -4..=4 {
            if (a, b) != (0, 0) {
                targets.push([
                    Rational::new(a.into(), 2.into()),
                    Rational::new(b.into(), 3.into()),
                ]);
            }
        }
    }
    let mut instances = 0;
    let mut mismatch = None;
    for mask in 1u32..(1 << directions.len()) {
        let dictionary: Vec<[i64; 2]> = (0..directions.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| directions[i])
            .collect();
        let full_rank = dictionary
            .iter()
            .any(|a| dictionary.iter().any(|b| a[0] * b[1] - a[1] * b[0] != 0));
        if !full_rank {
            continue;
        }
        let dict: Vec<Vec<Rational>> = dictionary
            .iter()
            .map(|c| vec![int(c[0]), int(c[1])])
            .collect();
        for t in &targets {
            instances += 1;
            let lp = gauge_lp(&dict, t).unwrap();
            let brute = brute_force_gauge(&dictionary, t).unwrap();
            let rebuilt = lp.combination(&dict, 2);
            let weight: Rational = lp.terms.iter().map(|x| x.weight.clone()).sum();
            let dual_ok = dict.iter().all(|c| {
                let p: Rational = c.iter().zip(&lp.dual_certificate).map(|(a, b)| a * b).sum();
                p.abs() <= Rational::one()
            });
            if lp.value != brute || rebuilt != t.to_vec() || weight != lp.value || !dual_ok {
                mismatch.get_or_insert(format!(
                    "dictionary {dictionary:?}, target {t:?}: lp {} vs brute force {brute}",
                    lp.value
                ));
            }
        }
    }
    Line {
        name: "oracle equivalence (2x2 gauge LP)".into(),
        pass: mismatch.is_none(),
        detail: mismatch.unwrap_or_else(|| format!("{instances} instances")),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let pi_elem = suite(TheoremId::PiElem, 200);
    let eps_elem = suite(TheoremId::EpsElem, 200);
    let null = suite(TheoremId::Null, 200);
    let sandwich = suite(TheoremId::Sandwich, 200);
    let pi_dual = suite(TheoremId::PiDual, 100);
    let vv = suite(TheoremId::Vv, 100);
    let diag = suite(TheoremId::Diag, 50);
    let uc_eps = suite(TheoremId::UcEps, 100);
    let quot = suite(TheoremId::QuotTensorPi, 30);
    let uc_quot = suite(TheoremId::UcQuot, 30);
    let hb = suite(TheoremId::Hb, 200);
    let pull_pi = suite(TheoremId::PullPi, 100);
    let pull_eps = suite(TheoremId::PullEps, 100);
    let sum_cauchy = suite(TheoremId::SumCauchy, 100);
    let sum_hom = suite(TheoremId::SumHom, 100);

    let lp_suites: [&[CaseReport]; 4] = [&pi_elem, &pi_dual, &vv, &pull_pi];
    let certificates: usize = lp_suites
        .iter()
        .flat_map(|s| s.iter())
        .map(|r| r.certificates)
        .sum();
    let rejected = lp_suites
        .iter()
        .flat_map(|s| s.iter())
        .find(|r| r.detail.contains("certificate rejected"));
    let pi_dual_line = Line {
        name: "TH-PI-DUAL".into(),
        pass: rejected.is_none() && certificates > 0 && pi_dual.iter().all(|r| r.pass),
        detail: match rejected {
            Some(r) => format!("certificate rejected in case {}", r.index),
            None => format!("{certificates} certificates"),
        },
    };

    let lines = vec![
        summarize("TH-PI-ELEM / TH-EPS-ELEM", &[&pi_elem, &eps_elem]),
        summarize("TH-NULL", &[&null]),
        summarize("TH-SANDWICH", &[&sandwich]),
        sandwich_identity(),
        pi_dual_line,
        summarize("TH-VV", &[&vv]),
        summarize("TH-DIAG", &[&diag]),
        summarize("TH-UC-EPS", &[&uc_eps]),
        summarize("TH-QUOT-TENSOR-PI / TH-UC-QUOT", &[&quot, &uc_quot]),
        summarize("TH-HB", &[&hb]),
        summarize("TH-PULL-PI / TH-PULL-EPS", &[&pull_pi, &pull_eps]),
        summarize("TH-SUM-CAUCHY / TH-SUM-HOM", &[&sum_cauchy, &sum_hom]),
        oracle_equivalence(),
    ];
    let mut ok = true;
    for l in &lines {
        println!(
            "{} {}: {}",
            if l.pass { "PASS" } else { "FAIL" },
            l.name,
            l.detail
        );
        ok &= l.pass;
    }
    let elapsed = start.elapsed();
    let fast = elapsed.as_secs_f64() < 60.0;
    println!(
        "{} runtime: {:.1}s",
        if fast { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    if ok && fast {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
