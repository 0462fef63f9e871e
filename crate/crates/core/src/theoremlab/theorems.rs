//! Translativity (additive case), pseudo-additivity of KN-means, and the
//! uniqueness of Tsallis entropy among q-quasilinear entropies.

use rand::Rng;

use super::{Check, Expectation};
use crate::entropy::q_quasilinear_entropy;
use crate::error::Result;
use crate::knmean::{
    check_homogeneity, check_translativity, kn_equivalent, kn_mean, kn_mean_pairs, KnFunction, KnMeanInput,
};
use crate::pmf::Pmf;
use crate::qalgebra::{pseudo_add, QParam};
use crate::report::{Extremum, LabConfig, VerificationReport, Witness};
use crate::sampling::{self, sampling_window, sub_rng};

const SHIFT_RANGE: f64 = 3.0;
const SCALE_RANGE: (f64, f64) = (0.5, 3.0);

fn builtin(f: Result<KnFunction>) -> KnFunction {
    f.expect("builtin KN-function parameters are valid")
}

fn qp(v: f64) -> QParam {
    QParam::new(v).expect("valid q")
}

/// Translativity residuals of one KN-function over `cfg.budget` draws.
pub fn theorem3_suite(psi: &KnFunction, cfg: &LabConfig) -> Result<VerificationReport> {
    let id = format!("theorem3:{}", psi.name());
    let mut rng = sub_rng(cfg.seed, &id);
    let window = sampling_window(psi.domain());
    let mut worst = Extremum::new();
    for trial in 0..cfg.budget {
        let input = crate::knmean::random_input(&mut rng, window);
        let (vmin, _) = input.support_range();
        let c_lo = (-SHIFT_RANGE).max(psi.domain().lo - vmin);
        let c = c_lo + (SHIFT_RANGE - c_lo) * rng.random::<f64>();
        let residual = check_translativity(psi, c, &input)?;
        worst.offer(trial, residual, || {
            Witness::new(Some(psi.spec()), residual)
                .with_pmf(input.weights().probs())
                .with_values(input.values())
                .with_param("c", c)
        });
    }
    Ok(cfg.report(id, cfg.classify(worst.residual), worst, cfg.budget))
}

/// `⟨X + c⟩_ψ = ⟨X⟩_ψ + c` iff ψ is linear or exponential.
///
/// Linear and exponential families (and `φ_q`, an affine image of an
/// exponential) are expected to pass; power families to fail.
pub fn verify_theorem3(cfg: &LabConfig) -> Result<Vec<Check>> {
    let pass = [
        builtin(KnFunction::linear(1.0, 0.0)),
        builtin(KnFunction::linear(2.0, 1.0)),
        builtin(KnFunction::exponential(0.5)),
        builtin(KnFunction::exponential(2.0)),
        builtin(KnFunction::exponential(3.0)),
        builtin(KnFunction::phi_q(qp(2.0))),
    ];
    let fail = [
        builtin(KnFunction::power(2.0)),
        builtin(KnFunction::power(3.0)),
        builtin(KnFunction::power(0.5)),
    ];
    let mut checks = Vec::new();
    for psi in &pass {
        checks.push(Check::new(theorem3_suite(psi, cfg)?, Expectation::Pass));
    }
    for psi in &fail {
        checks.push(Check::new(theorem3_suite(psi, cfg)?, Expectation::Counterexample));
    }
    Ok(checks)
}

/// KN-equivalence holds exactly for affine images: each builtin family
/// against `aψ + b` and `-ψ` should pass, unrelated families should not.
pub fn verify_theorem2(cfg: &LabConfig) -> Result<Vec<Check>> {
    let families = [
        builtin(KnFunction::exponential(2.0)),
        builtin(KnFunction::exponential(0.5)),
        builtin(KnFunction::power(2.0)),
        builtin(KnFunction::power(0.5)),
        builtin(KnFunction::phi_q(qp(2.0))),
        builtin(KnFunction::linear(1.0, 0.0)),
    ];
    let mut checks = Vec::new();
    for psi in &families {
        for image in [psi.affine(1.5, -0.5)?, psi.negated()?] {
            checks.push(Check::new(kn_equivalent(psi, &image, cfg)?.report, Expectation::Pass));
        }
    }
    let unrelated = [
        (KnFunction::identity(), builtin(KnFunction::exponential(2.0))),
        (builtin(KnFunction::exponential(2.0)), builtin(KnFunction::power(2.0))),
    ];
    for (a, b) in &unrelated {
        checks.push(Check::new(kn_equivalent(a, b, cfg)?.report, Expectation::Counterexample));
    }
    Ok(checks)
}

/// Value window on which `⊕_q` keeps non-negative values non-negative:
/// for `q > 1` every value must stay below `1/(q-1)`.
pub fn q_value_window(psi: &KnFunction, q: QParam) -> (f64, f64) {
    let (lo, mut hi) = sampling_window(psi.domain());
    if q.value() > 1.0 {
        hi = hi.min(0.9 / (q.value() - 1.0));
    }
    (lo.max(0.0), hi)
}

/// `|⟨X ⊕_q Y⟩_ψ - ⟨X⟩_ψ ⊕_q ⟨Y⟩_ψ|` for independent `X`, `Y`.
pub fn pseudo_additivity_residual(psi: &KnFunction, q: QParam, x: &KnMeanInput, y: &KnMeanInput) -> Result<f64> {
    let joint = x.weights().product(y.weights());
    let mut values = Vec::with_capacity(joint.len());
    for &xi in x.values() {
        for &yj in y.values() {
            values.push(pseudo_add(xi, yj, q));
        }
    }
    let lhs = kn_mean(&KnMeanInput::new(values, joint)?, psi)?;
    let rhs = pseudo_add(kn_mean(x, psi)?, kn_mean(y, psi)?, q);
    Ok((lhs - rhs).abs())
}

/// Direct pseudo-additivity search for one `(ψ, q)`.
pub fn theorem4_pseudo_additivity(psi: &KnFunction, q: QParam, cfg: &LabConfig) -> Result<VerificationReport> {
    let id = format!("theorem4:pseudo_additivity:{}:q={}", psi.name(), q.value());
    let mut rng = sub_rng(cfg.seed, &id);
    let window = q_value_window(psi, q);
    let mut worst = Extremum::new();
    for trial in 0..cfg.budget {
        let x = crate::knmean::random_input(&mut rng, window);
        let y = crate::knmean::random_input(&mut rng, window);
        let residual = pseudo_additivity_residual(psi, q, &x, &y)?;
        worst.offer(trial, residual, || {
            Witness::new(Some(psi.spec()), residual)
                .with_pmf(x.weights().probs())
                .with_pmf(y.weights().probs())
                .with_values(x.values())
                .with_values(y.values())
                .with_param("q", q.value())
        });
    }
    Ok(cfg.report(id, cfg.classify(worst.residual), worst, cfg.budget))
}

/// Homogeneity `⟨dX⟩_ψ = d⟨X⟩_ψ`, which fails for exponential ψ; this is
/// what rules the exponential family out under pseudo-additivity.
pub fn theorem4_homogeneity(psi: &KnFunction, cfg: &LabConfig) -> Result<VerificationReport> {
    let id = format!("theorem4:homogeneity:{}", psi.name());
    let mut rng = sub_rng(cfg.seed, &id);
    let window = sampling_window(psi.domain());
    let mut worst = Extremum::new();
    for trial in 0..cfg.budget {
        let input = crate::knmean::random_input(&mut rng, window);
        let d = SCALE_RANGE.0 + (SCALE_RANGE.1 - SCALE_RANGE.0) * rng.random::<f64>();
        let residual = check_homogeneity(psi, d, &input)?;
        worst.offer(trial, residual, || {
            Witness::new(Some(psi.spec()), residual)
                .with_pmf(input.weights().probs())
                .with_values(input.values())
                .with_param("d", d)
        });
    }
    Ok(cfg.report(id, cfg.classify(worst.residual), worst, cfg.budget))
}

/// `⟨X ⊕_q Y⟩_ψ = ⟨X⟩_ψ ⊕_q ⟨Y⟩_ψ` iff ψ is linear.
pub fn verify_theorem4(cfg: &LabConfig) -> Result<Vec<Check>> {
    let lin = builtin(KnFunction::linear(1.0, 0.0));
    let exp2 = builtin(KnFunction::exponential(2.0));
    let pow2 = builtin(KnFunction::power(2.0));
    let mut checks = Vec::new();
    for &q in &[0.5, 2.0, 3.0] {
        checks.push(Check::new(theorem4_pseudo_additivity(&lin, qp(q), cfg)?, Expectation::Pass));
    }
    checks.push(Check::new(theorem4_pseudo_additivity(&exp2, qp(2.0), cfg)?, Expectation::Counterexample));
    checks.push(Check::new(theorem4_pseudo_additivity(&pow2, qp(2.0), cfg)?, Expectation::Counterexample));
    // at q = 1 pseudo-addition is addition and the exponential case is additive
    checks.push(Check::new(theorem4_pseudo_additivity(&exp2, QParam::one(), cfg)?, Expectation::Pass));
    checks.push(Check::new(theorem4_homogeneity(&lin, cfg)?, Expectation::Pass));
    checks.push(Check::new(theorem4_homogeneity(&exp2, cfg)?, Expectation::Counterexample));
    Ok(checks)
}

/// `|S̃_ψ(p×r) - S̃_ψ(p) ⊕_q S̃_ψ(r)|`.
pub fn corollary2_residual(psi: &KnFunction, q: QParam, p: &Pmf, r: &Pmf) -> Result<f64> {
    let joint = q_quasilinear_entropy(&p.product(r), psi, q)?;
    let sp = q_quasilinear_entropy(p, psi, q)?;
    let sr = q_quasilinear_entropy(r, psi, q)?;
    Ok((joint - pseudo_add(sp, sr, q)).abs())
}

fn corollary2_suite(psi: &KnFunction, q: QParam, cfg: &LabConfig) -> Result<VerificationReport> {
    let id = format!("corollary2:{}:q={}", psi.name(), q.value());
    let mut rng = sub_rng(cfg.seed, &id);
    let mut worst = Extremum::new();
    for trial in 0..cfg.budget {
        let p = sampling::random_pmf(&mut rng);
        let r = sampling::random_pmf(&mut rng);
        let residual = corollary2_residual(psi, q, &p, &r)?;
        worst.offer(trial, residual, || {
            Witness::new(Some(psi.spec()), residual)
                .with_pmf(p.probs())
                .with_pmf(r.probs())
                .with_param("q", q.value())
        });
    }
    Ok(cfg.report(id, cfg.classify(worst.residual), worst, cfg.budget))
}

/// Under pseudo-additivity the only q-quasilinear entropy is Tsallis: the
/// linear KN-function passes, every non-linear builtin fails.
pub fn verify_corollary2(cfg: &LabConfig) -> Result<Vec<Check>> {
    let lin = builtin(KnFunction::linear(1.0, 0.0));
    let mut checks = Vec::new();
    for &q in &[0.5, 2.0, 3.0] {
        checks.push(Check::new(corollary2_suite(&lin, qp(q), cfg)?, Expectation::Pass));
    }
    for &q in &[2.0, 3.0] {
        let nonlinear = [
            builtin(KnFunction::exponential(2.0)),
            builtin(KnFunction::exponential(0.5)),
            builtin(KnFunction::power(2.0)),
            builtin(KnFunction::power(0.5)),
            builtin(KnFunction::phi_q(qp(q))),
        ];
        for psi in &nonlinear {
            checks.push(Check::new(corollary2_suite(psi, qp(q), cfg)?, Expectation::Counterexample));
        }
    }
    Ok(checks)
}

/// Evaluates the joint mean of independent `(values, weights)` pairs from a
/// witness; used by callers that want to recompute residuals.
pub fn joint_pseudo_sum_mean(psi: &KnFunction, q: QParam, x: &KnMeanInput, y: &KnMeanInput) -> Result<f64> {
    let pairs = x.supported().flat_map(|(p, xi)| {
        y.supported().map(move |(r, yj)| (p * r, pseudo_add(xi, yj, q)))
    });
    kn_mean_pairs(pairs, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;
    use crate::sampling::uniform_values;

    #[test]
    fn theorem3_handful_of_trials() {
        let cfg = LabConfig::new(50, 3);
        let checks = verify_theorem3(&cfg).unwrap();
        for c in &checks {
            assert!(c.met(), "{:?}", c.report);
        }
    }

    #[test]
    fn theorem2_affine_images_agree() {
        let cfg = LabConfig::new(100, 2);
        for c in verify_theorem2(&cfg).unwrap() {
            assert!(c.met(), "{:?}", c.report);
        }
    }

    #[test]
    fn theorem4_and_corollary2_expectations() {
        let cfg = LabConfig::new(100, 0);
        for c in verify_theorem4(&cfg).unwrap().into_iter().chain(verify_corollary2(&cfg).unwrap()) {
            assert!(c.met(), "{:?}", c.report);
        }
    }

    #[test]
    fn theorem4_linear_passes_at_classical_q() {
        let cfg = LabConfig::new(50, 0);
        let r = theorem4_pseudo_additivity(&KnFunction::identity(), QParam::one(), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn q_window_respects_pseudo_addition() {
        let lin = KnFunction::identity();
        assert_eq!(q_value_window(&lin, qp(3.0)), (0.0, 0.45));
        assert_eq!(q_value_window(&lin, qp(0.5)), (0.0, 10.0));
        let mut rng = sub_rng(0, "w");
        let xs = uniform_values(&mut rng, q_value_window(&lin, qp(3.0)), 100);
        for &a in &xs {
            for &b in &xs {
                assert!(pseudo_add(a, b, qp(3.0)) >= 0.0);
            }
        }
    }

    #[test]
    fn joint_mean_helper_matches_product_route() {
        let mut rng = sub_rng(1, "j");
        let psi = KnFunction::exponential(2.0).unwrap();
        let x = crate::knmean::random_input(&mut rng, (0.0, 0.9));
        let y = crate::knmean::random_input(&mut rng, (0.0, 0.9));
        let q = qp(2.0);
        let direct = joint_pseudo_sum_mean(&psi, q, &x, &y).unwrap();
        let rhs = pseudo_add(kn_mean(&x, &psi).unwrap(), kn_mean(&y, &psi).unwrap(), q);
        let residual = pseudo_additivity_residual(&psi, q, &x, &y).unwrap();
        assert!(((direct - rhs).abs() - residual).abs() < 1e-14);
    }
}
