//! Hartley, Shannon, Rényi and Tsallis measures, the quasilinear entropies
//! `S_ψ` and `S̃_ψ`, and the bridge `φ_q` with `S_q^T = φ_q(S_q^R)`.
//!
//! All values are in nats. Sums run over the support only, so zero-mass
//! atoms contribute nothing (`0·ln 0 = 0`).

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::json::ser_f64;
use crate::knmean::{kn_mean_pairs, KnFunction};
use crate::pmf::Pmf;
use crate::qalgebra::{q_log_from_ln, QParam};

/// Information of the event `label`: `-ln p`.
pub fn hartley(p: &Pmf, label: &str) -> Result<f64> {
    Ok(-ln_prob(p, label)?)
}

/// q-Hartley information `ln_q(1/p)`.
pub fn q_hartley(p: &Pmf, label: &str, q: QParam) -> Result<f64> {
    Ok(q_log_from_ln(-ln_prob(p, label)?, q))
}

fn ln_prob(p: &Pmf, label: &str) -> Result<f64> {
    let prob = p.prob(label)?;
    if prob <= 0.0 {
        return Err(Error::InfiniteInformation {
            label: label.to_string(),
        });
    }
    Ok(prob.ln())
}

/// `(p_k, H_k)` over the support.
pub fn hartley_values(p: &Pmf) -> impl Iterator<Item = (f64, f64)> + '_ {
    p.support().map(|(_, pk)| (pk, -pk.ln()))
}

/// `(p_k, H̃_k)` over the support.
pub fn q_hartley_values(p: &Pmf, q: QParam) -> impl Iterator<Item = (f64, f64)> + '_ {
    hartley_values(p).map(move |(pk, h)| (pk, q_log_from_ln(h, q)))
}

/// `-Σ p ln p`.
pub fn shannon(p: &Pmf) -> f64 {
    hartley_values(p).map(|(pk, h)| pk * h).sum()
}

/// `ln(Σ p^α)/(1-α)`; Shannon inside the classical band.
///
/// Near `α = 1` the sum is formed as `1 + Σ p·expm1((α-1) ln p)` so that
/// `ln_1p` sees the small deviation directly.
pub fn renyi(p: &Pmf, alpha: QParam) -> f64 {
    if alpha.is_classical() {
        return shannon(p);
    }
    let k = alpha.deformation();
    let deviation: f64 = hartley_values(p).map(|(pk, h)| pk * (k * h).exp_m1()).sum();
    let log_sum = if deviation > -0.5 {
        deviation.ln_1p()
    } else {
        log_sum_exp(&p.support().map(|(_, pk)| alpha.value() * pk.ln()).collect::<Vec<_>>())
    };
    log_sum / k
}

/// `(1 - Σ p^q)/(q-1)`; Shannon inside the classical band.
///
/// Evaluated as `-Σ p·expm1((q-1) ln p)/(q-1)`, which is the same quantity
/// without the cancellation in `1 - Σ p^q`.
pub fn tsallis(p: &Pmf, q: QParam) -> f64 {
    if q.is_classical() {
        return shannon(p);
    }
    let deviation: f64 = hartley_values(p)
        .map(|(pk, h)| pk * (q.deformation() * h).exp_m1())
        .sum();
    deviation / q.deformation()
}

/// `S_ψ = ψ⁻¹(Σ p ψ(H_k))`.
pub fn quasilinear_entropy(p: &Pmf, psi: &KnFunction) -> Result<f64> {
    kn_mean_pairs(hartley_values(p), psi)
}

/// `S̃_ψ = ψ⁻¹(Σ p ψ(H̃_k))`.
pub fn q_quasilinear_entropy(p: &Pmf, psi: &KnFunction, q: QParam) -> Result<f64> {
    kn_mean_pairs(q_hartley_values(p, q), psi)
}

/// `φ_q(x) = (e^{(1-q)x} - 1)/(1-q) = ln_q(e^x)`; the identity inside the
/// classical band, matching [`renyi`] and [`tsallis`] there.
pub fn phi_q(x: f64, q: QParam) -> f64 {
    if q.is_classical() {
        return x;
    }
    q_log_from_ln(x, q)
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Shannon, Rényi and Tsallis values of one pmf at one parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub pmf_id: String,
    #[serde(rename = "q", serialize_with = "ser_qparam", deserialize_with = "de_qparam")]
    pub parameter: QParam,
    #[serde(serialize_with = "ser_f64")]
    pub shannon: f64,
    #[serde(serialize_with = "ser_f64")]
    pub renyi: f64,
    #[serde(serialize_with = "ser_f64")]
    pub tsallis: f64,
    #[serde(serialize_with = "ser_f64")]
    pub phi_q_residual: f64,
}

/// Relative tolerance on `|S^T - φ_q(S^R)|`.
pub const PHI_Q_TOLERANCE: f64 = 1e-10;

impl EntropyReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization is infallible")
    }

    pub fn bridge_holds(&self) -> bool {
        self.phi_q_residual <= PHI_Q_TOLERANCE * (1.0 + self.tsallis.abs())
    }
}

pub fn entropy_report(pmf_id: &str, p: &Pmf, q: QParam) -> EntropyReport {
    let shannon = shannon(p);
    let renyi = renyi(p, q);
    let tsallis = tsallis(p, q);
    let report = EntropyReport {
        pmf_id: pmf_id.to_string(),
        parameter: q,
        shannon,
        renyi,
        tsallis,
        phi_q_residual: (tsallis - phi_q(renyi, q)).abs(),
    };
    debug_assert!(report.bridge_holds(), "phi_q bridge violated: {report:?}");
    report
}

fn ser_qparam<S: Serializer>(q: &QParam, s: S) -> std::result::Result<S::Ok, S::Error> {
    ser_f64(&q.value(), s)
}

fn de_qparam<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<QParam, D::Error> {
    let v = f64::deserialize(d)?;
    QParam::new(v).map_err(serde::de::Error::custom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, LN_2};

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    fn p2575() -> Pmf {
        Pmf::new([("a", 0.25), ("b", 0.75)]).unwrap()
    }

    #[test]
    fn hartley_examples() {
        let p = Pmf::new([("x", 1.0 / E), ("y", 1.0 - 1.0 / E)]).unwrap();
        assert!((hartley(&p, "x").unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(hartley(&Pmf::degenerate("a"), "a").unwrap(), 0.0);
        assert!((hartley(&p2575(), "a").unwrap() - 1.386294).abs() < 1e-6);
    }

    #[test]
    fn hartley_zero_probability_is_an_error() {
        let p = Pmf::new([("a", 1.0), ("b", 0.0)]).unwrap();
        assert!(matches!(hartley(&p, "b"), Err(Error::InfiniteInformation { .. })));
        assert!(matches!(q_hartley(&p, "b", q(2.0)), Err(Error::InfiniteInformation { .. })));
        assert!(matches!(hartley(&p, "zz"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn q_hartley_examples() {
        for &qv in &[0.5, 1.0, 2.0] {
            assert_eq!(q_hartley(&Pmf::degenerate("a"), "a", q(qv)).unwrap(), 0.0);
        }
        let u = Pmf::uniform(2).unwrap();
        assert!((q_hartley(&u, "0", q(2.0)).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(q_hartley(&p2575(), "b", q(1.0)).unwrap(), hartley(&p2575(), "b").unwrap());
    }

    #[test]
    fn shannon_examples() {
        assert!((shannon(&Pmf::uniform(2).unwrap()) - LN_2).abs() < 1e-15);
        assert_eq!(shannon(&Pmf::degenerate("a")), 0.0);
        let hand = 0.25 * 4f64.ln() + 0.75 * (4.0f64 / 3.0).ln();
        assert!((shannon(&p2575()) - hand).abs() < 1e-15);
        assert!((hand - 0.562335).abs() < 1e-6);
    }

    #[test]
    fn renyi_examples() {
        for &n in &[1usize, 2, 5, 8] {
            for &a in &[0.3, 2.0, 7.0] {
                let u = Pmf::uniform(n).unwrap();
                assert!((renyi(&u, q(a)) - (n as f64).ln()).abs() < 1e-14);
            }
        }
        assert!((renyi(&p2575(), q(2.0)) - -(0.625f64.ln())).abs() < 1e-15);
        let near = renyi(&p2575(), q(1.0 + 1e-7));
        assert!((near - shannon(&p2575())).abs() < 1e-6);
    }

    #[test]
    fn renyi_large_alpha_uses_log_sum_exp() {
        let p = Pmf::from_probs(&[0.01, 0.02, 0.97]).unwrap();
        let a = 200.0;
        let direct = (0.01f64.powf(a) + 0.02f64.powf(a) + 0.97f64.powf(a)).ln() / (1.0 - a);
        assert!((renyi(&p, q(a)) - direct).abs() < 1e-13);
    }

    #[test]
    fn tsallis_examples() {
        let u2 = Pmf::uniform(2).unwrap();
        assert!((tsallis(&u2, q(2.0)) - 0.5).abs() < 1e-15);
        let j = u2.product(&u2);
        assert!((tsallis(&j, q(2.0)) - 0.75).abs() < 1e-15);
        assert_eq!(crate::qalgebra::pseudo_add(0.5, 0.5, q(2.0)), 0.75);
        for &qv in &[0.5, 1.0, 3.0] {
            assert_eq!(tsallis(&Pmf::degenerate("a"), q(qv)), 0.0);
        }
    }

    #[test]
    fn quasilinear_entropy_examples() {
        let lin = KnFunction::identity();
        assert!((quasilinear_entropy(&p2575(), &lin).unwrap() - shannon(&p2575())).abs() < 1e-15);
        let e2 = KnFunction::exponential(2.0).unwrap();
        let u2 = Pmf::uniform(2).unwrap();
        assert!((quasilinear_entropy(&u2, &e2).unwrap() - LN_2).abs() < 1e-15);
        for psi in [lin, e2, KnFunction::power(2.0).unwrap()] {
            assert!(quasilinear_entropy(&Pmf::degenerate("a"), &psi).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn q_quasilinear_entropy_examples() {
        let lin = KnFunction::identity();
        let u2 = Pmf::uniform(2).unwrap();
        assert!((q_quasilinear_entropy(&u2, &lin, q(2.0)).unwrap() - 0.5).abs() < 1e-15);
        let v = q_quasilinear_entropy(&p2575(), &lin, q(1.0)).unwrap();
        assert!((v - shannon(&p2575())).abs() < 1e-15);

        // Uniform pmfs have a single q-Hartley value, so every ψ returns it
        // and uniform pairs cannot separate ψ from the linear case.
        let e2 = KnFunction::exponential(2.0).unwrap();
        let s = q_quasilinear_entropy(&u2, &e2, q(2.0)).unwrap();
        assert!((s - 0.5).abs() < 1e-15);
        let joint = q_quasilinear_entropy(&u2.product(&u2), &e2, q(2.0)).unwrap();
        assert!((joint - crate::qalgebra::pseudo_add(s, s, q(2.0))).abs() < 1e-15);

        // Unequal masses expose the failure of pseudo-additivity.
        let p = Pmf::from_probs(&[0.1, 0.9]).unwrap();
        let r = Pmf::from_probs(&[0.3, 0.7]).unwrap();
        let sp = q_quasilinear_entropy(&p, &e2, q(2.0)).unwrap();
        let sr = q_quasilinear_entropy(&r, &e2, q(2.0)).unwrap();
        let sj = q_quasilinear_entropy(&p.product(&r), &e2, q(2.0)).unwrap();
        assert!((sj - crate::qalgebra::pseudo_add(sp, sr, q(2.0))).abs() > 1e-3);
    }

    #[test]
    fn phi_q_examples() {
        for &qv in &[0.5, 2.0, 4.0] {
            assert_eq!(phi_q(0.0, q(qv)), 0.0);
        }
        assert!((phi_q(LN_2, q(2.0)) - 0.5).abs() < 1e-15);
        assert_eq!(phi_q(1.3, q(1.0)), 1.3);
    }

    #[test]
    fn report_bundles_and_round_trips() {
        let r = entropy_report("u2", &Pmf::uniform(2).unwrap(), q(2.0));
        assert!((r.tsallis - 0.5).abs() < 1e-15);
        assert!((r.renyi - LN_2).abs() < 1e-15);
        assert!(r.bridge_holds());
        let line = r.to_json_line();
        assert!(line.starts_with(r#"{"pmf_id":"u2","q":2,"shannon":0.69314718055994529"#));
        let back: EntropyReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
    }
}
