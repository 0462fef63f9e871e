//! Mixture concavity of Tsallis entropy, and the search for Rényi
//! non-concavity at orders above one.

use rand::Rng;

use crate::entropy::{renyi, tsallis};
use crate::error::{Error, Result};
use crate::pmf::Pmf;
use crate::qalgebra::QParam;
use crate::report::{Extremum, LabConfig, Verdict, VerificationReport, Witness};
use crate::sampling::{dirichlet_probs_concentrated, pmf_from_draw, sub_rng, MIN_SUPPORT};

/// A Rényi gap counts as a violation only above this.
pub const RENYI_CONCAVITY_MARGIN: f64 = 1e-8;
pub const TSALLIS_CONCAVITY_MARGIN: f64 = 1e-10;

/// Dirichlet concentrations; small ones give the spiky pmfs where Rényi
/// non-concavity shows up.
const CONCENTRATIONS: [f64; 4] = [0.1, 0.5, 1.0, 5.0];

/// `λ·f(p) + (1-λ)·f(r) - f(λp + (1-λ)r)`; positive means concavity fails.
fn mixture_gap(p: &Pmf, r: &Pmf, lambda: f64, f: impl Fn(&Pmf) -> f64) -> Result<f64> {
    let mix = p.mixture(r, lambda)?;
    Ok(lambda * f(p) + (1.0 - lambda) * f(r) - f(&mix))
}

fn random_pair<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> (Pmf, Pmf, f64) {
    let n = rng.random_range(MIN_SUPPORT..=max_n);
    let c = CONCENTRATIONS[rng.random_range(0..CONCENTRATIONS.len())];
    let p = pmf_from_draw(dirichlet_probs_concentrated(rng, n, c));
    let r = pmf_from_draw(dirichlet_probs_concentrated(rng, n, c));
    (p, r, rng.random())
}

/// Rényi entropy straight from `ln(Σ p^α)/(1-α)`.
fn renyi_direct(p: &[f64], alpha: f64) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|x| x.powf(alpha)).sum::<f64>().ln() / (1.0 - alpha)
}

fn renyi_gap_direct(p: &[f64], r: &[f64], lambda: f64, alpha: f64) -> f64 {
    let mix: Vec<f64> = p.iter().zip(r).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
    lambda * renyi_direct(p, alpha) + (1.0 - lambda) * renyi_direct(r, alpha) - renyi_direct(&mix, alpha)
}

/// Random search for `R(λp + (1-λ)r) < λR(p) + (1-λ)R(r) - margin`.
///
/// Reports `counterexample_found` only for a gap that the direct power-sum
/// formula confirms; otherwise `inconclusive`. Also runs for `α ≤ 1`, where
/// Rényi entropy is concave and the search serves as a control.
pub fn search_renyi_concavity_violation(alpha: QParam, max_n: usize, cfg: &LabConfig) -> Result<VerificationReport> {
    if max_n < MIN_SUPPORT {
        return Err(Error::InvalidParameter {
            name: "max_n",
            value: max_n as f64,
            reason: "support size must be at least 2",
        });
    }
    let id = format!("concavity:renyi:alpha={}", alpha.value());
    let mut rng = sub_rng(cfg.seed, &id);
    let mut worst = Extremum::new();
    for trial in 0..cfg.budget {
        let (p, r, lambda) = random_pair(&mut rng, max_n);
        let gap = mixture_gap(&p, &r, lambda, |x| renyi(x, alpha))?;
        worst.offer(trial, gap, || {
            Witness::new(None, gap)
                .with_pmf(p.probs())
                .with_pmf(r.probs())
                .with_param("alpha", alpha.value())
                .with_param("lambda", lambda)
        });
    }
    let confirmed = worst.witness.as_ref().is_some_and(|w| {
        let lambda = w.param("lambda").unwrap_or(f64::NAN);
        let direct = renyi_gap_direct(&w.pmfs[0], &w.pmfs[1], lambda, alpha.value());
        direct > RENYI_CONCAVITY_MARGIN && (direct - w.residual).abs() <= 0.01 * w.residual.abs()
    });
    let verdict = if worst.residual > RENYI_CONCAVITY_MARGIN && confirmed {
        Verdict::CounterexampleFound
    } else {
        Verdict::Inconclusive
    };
    Ok(cfg.report(id, verdict, worst, cfg.budget))
}

/// Mixture concavity of Tsallis entropy over `cfg.budget` random triples.
pub fn verify_tsallis_concavity(q: QParam, cfg: &LabConfig) -> Result<VerificationReport> {
    let id = format!("concavity:tsallis:q={}", q.value());
    let mut rng = sub_rng(cfg.seed, &id);
    let mut worst = Extremum::new();
    for trial in 0..cfg.budget {
        let (p, r, lambda) = random_pair(&mut rng, crate::sampling::MAX_SUPPORT);
        let gap = mixture_gap(&p, &r, lambda, |x| tsallis(x, q))?;
        let residual = gap.max(0.0);
        worst.offer(trial, residual, || {
            Witness::new(None, residual)
                .with_pmf(p.probs())
                .with_pmf(r.probs())
                .with_param("q", q.value())
                .with_param("lambda", lambda)
        });
    }
    let verdict = if worst.residual <= TSALLIS_CONCAVITY_MARGIN {
        Verdict::Pass
    } else {
        Verdict::CounterexampleFound
    };
    Ok(cfg.report(id, verdict, worst, cfg.budget))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    #[test]
    fn tsallis_is_concave() {
        let cfg = LabConfig::new(500, 3);
        for &v in &[0.5, 1.5, 2.0, 5.0] {
            let r = verify_tsallis_concavity(q(v), &cfg).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        }
    }

    #[test]
    fn renyi_below_one_never_violates() {
        let cfg = LabConfig::new(2000, 0);
        for &a in &[0.5, 1.0] {
            let r = search_renyi_concavity_violation(q(a), 8, &cfg).unwrap();
            assert_eq!(r.verdict, Verdict::Inconclusive);
            assert!(r.max_residual <= RENYI_CONCAVITY_MARGIN);
        }
    }

    #[test]
    fn renyi_large_alpha_witness_reverifies() {
        let cfg = LabConfig::new(2000, 0);
        let r = search_renyi_concavity_violation(q(10.0), 8, &cfg).unwrap();
        assert_ne!(r.verdict, Verdict::Pass);
        if r.verdict == Verdict::CounterexampleFound {
            let w = r.witness.unwrap();
            let direct = renyi_gap_direct(&w.pmfs[0], &w.pmfs[1], w.param("lambda").unwrap(), 10.0);
            assert!((direct - r.max_residual).abs() <= 0.01 * r.max_residual);
        }
    }

    #[test]
    fn hand_violation_at_alpha_two() {
        // uniform(8) mixed with a point mass on one of its atoms
        let p = Pmf::uniform(8).unwrap();
        let mut d = vec![0.0; 8];
        d[7] = 1.0;
        let r = Pmf::from_probs(&d).unwrap();
        let gap = mixture_gap(&p, &r, 0.2, |x| renyi(x, q(2.0))).unwrap();
        assert!((gap - 0.0375518676160555).abs() < 1e-12, "{gap}");
        assert!((gap - renyi_gap_direct(p.probs(), r.probs(), 0.2, 2.0)).abs() < 1e-14);
    }

    #[test]
    fn rejects_tiny_alphabet() {
        assert!(search_renyi_concavity_violation(q(2.0), 1, &LabConfig::default()).is_err());
    }
}
