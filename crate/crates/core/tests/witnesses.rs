//! Counterexample witnesses re-evaluated from scratch: closed-form ψ,
//! bisection for ψ⁻¹, and hand-written entropy formulas. Nothing here goes
//! through `kn_mean` or the entropy module.

use knent::knmean::{Family, KnSpec};
use knent::report::{LabConfig, Verdict, VerificationReport, Witness};
use knent::theoremlab::{
    search_renyi_concavity_violation, verify_corollary2, verify_theorem2, verify_theorem3, verify_theorem4, Check,
};
use knent::qalgebra::QParam;

fn forward(spec: &KnSpec, x: f64) -> f64 {
    let base = match spec.family {
        Family::Linear => x,
        Family::Exponential { alpha } => ((1.0 - alpha) * x).exp(),
        Family::Power { gamma } => x.powf(gamma),
        Family::PhiQ { q } => (((1.0 - q) * x).exp() - 1.0) / (1.0 - q),
    };
    spec.scale * base + spec.offset
}

/// ψ⁻¹ by bracketing and bisection.
fn inverse(spec: &KnSpec, y: f64) -> f64 {
    let floor = matches!(spec.family, Family::Power { .. }).then_some(0.0);
    let (mut lo, mut hi) = (floor.unwrap_or(-1.0), 1.0);
    let increasing = forward(spec, hi) > forward(spec, lo);
    let below = |x: f64| (forward(spec, x) < y) == increasing;
    while below(hi) {
        hi *= 2.0;
    }
    while floor.is_none() && !below(lo) {
        lo *= 2.0;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn mean(spec: &KnSpec, p: &[f64], x: &[f64]) -> f64 {
    let s: f64 = p.iter().zip(x).filter(|(pk, _)| **pk > 0.0).map(|(pk, xk)| pk * forward(spec, *xk)).sum();
    inverse(spec, s)
}

fn pseudo(a: f64, b: f64, q: f64) -> f64 {
    a + b + (1.0 - q) * a * b
}

fn q_quasilinear(spec: &KnSpec, p: &[f64], q: f64) -> f64 {
    let support: Vec<f64> = p.iter().copied().filter(|&x| x > 0.0).collect();
    let hartleys: Vec<f64> = support.iter().map(|pk| (pk.powf(q - 1.0) - 1.0) / (1.0 - q)).collect();
    mean(spec, &support, &hartleys)
}

fn renyi(p: &[f64], a: f64) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|x| x.powf(a)).sum::<f64>().ln() / (1.0 - a)
}

fn recompute(report: &VerificationReport) -> Option<f64> {
    let w: &Witness = report.witness.as_ref()?;
    let id = report.theorem_id.as_str();
    let param = |k: &str| w.param(k).expect("witness parameter");
    if id.starts_with("concavity:renyi") {
        let (l, a) = (param("lambda"), param("alpha"));
        let mix: Vec<f64> = w.pmfs[0].iter().zip(&w.pmfs[1]).map(|(x, y)| l * x + (1.0 - l) * y).collect();
        return Some(l * renyi(&w.pmfs[0], a) + (1.0 - l) * renyi(&w.pmfs[1], a) - renyi(&mix, a));
    }
    let spec = w.psi.as_ref().expect("KN witness carries ψ");
    if id.starts_with("theorem3:") {
        let c = param("c");
        let shifted: Vec<f64> = w.values[0].iter().map(|x| x + c).collect();
        Some((mean(spec, &w.pmfs[0], &shifted) - mean(spec, &w.pmfs[0], &w.values[0]) - c).abs())
    } else if id.starts_with("theorem4:homogeneity") {
        let d = param("d");
        let scaled: Vec<f64> = w.values[0].iter().map(|x| x * d).collect();
        Some((mean(spec, &w.pmfs[0], &scaled) - d * mean(spec, &w.pmfs[0], &w.values[0])).abs())
    } else if id.starts_with("theorem4:pseudo_additivity") {
        let q = param("q");
        let (mut pj, mut xj) = (Vec::new(), Vec::new());
        for (p, x) in w.pmfs[0].iter().zip(&w.values[0]) {
            for (r, y) in w.pmfs[1].iter().zip(&w.values[1]) {
                pj.push(p * r);
                xj.push(pseudo(*x, *y, q));
            }
        }
        let rhs = pseudo(mean(spec, &w.pmfs[0], &w.values[0]), mean(spec, &w.pmfs[1], &w.values[1]), q);
        Some((mean(spec, &pj, &xj) - rhs).abs())
    } else if id.starts_with("corollary2:") {
        let q = param("q");
        let joint: Vec<f64> = w.pmfs[0].iter().flat_map(|p| w.pmfs[1].iter().map(move |r| p * r)).collect();
        let rhs = pseudo(q_quasilinear(spec, &w.pmfs[0], q), q_quasilinear(spec, &w.pmfs[1], q), q);
        Some((q_quasilinear(spec, &joint, q) - rhs).abs())
    } else if id.starts_with("theorem2:") {
        let m1 = mean(spec, &w.pmfs[0], &w.values[0]);
        assert!((m1 - param("mean_psi1")).abs() <= 1e-9 * (1.0 + m1.abs()), "{id}");
        Some((param("mean_psi1") - param("mean_psi2")).abs())
    } else {
        None
    }
}

fn assert_reproduces(checks: &[Check], threshold: f64) {
    let mut seen = 0;
    for c in checks {
        let r = &c.report;
        if r.verdict != Verdict::CounterexampleFound {
            assert!(r.witness.is_none(), "{}", r.theorem_id);
            continue;
        }
        let again = recompute(r).unwrap_or_else(|| panic!("no recomputation for {}", r.theorem_id));
        assert!(
            (again - r.max_residual).abs() <= 0.01 * r.max_residual,
            "{}: reported {} recomputed {again}",
            r.theorem_id,
            r.max_residual
        );
        assert!(again > threshold, "{}", r.theorem_id);
        seen += 1;
    }
    assert!(seen > 0, "no counterexamples to recheck");
}

#[test]
fn theorem_witnesses_reproduce() {
    let cfg = LabConfig::new(300, 0);
    assert_reproduces(&verify_theorem2(&cfg).unwrap(), cfg.counterexample_threshold);
    assert_reproduces(&verify_theorem3(&cfg).unwrap(), cfg.counterexample_threshold);
    assert_reproduces(&verify_theorem4(&cfg).unwrap(), cfg.counterexample_threshold);
    assert_reproduces(&verify_corollary2(&cfg).unwrap(), cfg.counterexample_threshold);
}

#[test]
fn renyi_concavity_witnesses_reproduce() {
    let cfg = LabConfig::new(2000, 4);
    for &a in &[2.0, 3.0, 10.0] {
        let r = search_renyi_concavity_violation(QParam::new(a).unwrap(), 8, &cfg).unwrap();
        assert_ne!(r.verdict, Verdict::Pass);
        if r.verdict == Verdict::CounterexampleFound {
            let again = recompute(&r).unwrap();
            assert!((again - r.max_residual).abs() <= 0.01 * r.max_residual, "alpha={a}");
            assert!(again > knent::theoremlab::RENYI_CONCAVITY_MARGIN);
        }
    }
}

#[test]
fn hand_witness_inverse_is_sound() {
    let spec = KnSpec { family: Family::Power { gamma: 2.0 }, scale: 1.0, offset: 0.0 };
    let m = mean(&spec, &[0.5, 0.5], &[1.0, 2.0]);
    assert!((m - 2.5f64.sqrt()).abs() < 1e-14);
    let spec = KnSpec { family: Family::Exponential { alpha: 2.0 }, scale: -1.0, offset: 3.0 };
    let m = mean(&spec, &[0.5, 0.5], &[0.0, 2.0]);
    assert!((m - -(0.5 * (1.0 + (-2.0f64).exp())).ln()).abs() < 1e-14);
}

#[test]
fn reports_are_deterministic() {
    let lines = |seed| -> Vec<String> {
        let cfg = LabConfig::new(150, seed);
        [verify_theorem3(&cfg), verify_theorem4(&cfg), verify_corollary2(&cfg)]
            .into_iter()
            .flat_map(|r| r.unwrap())
            .map(|c| c.report.to_json_line())
            .collect()
    };
    assert_eq!(lines(7), lines(7));
    assert_ne!(lines(7), lines(8));
}
