//! q-deformed scalar arithmetic: the q-logarithm, its inverse the
//! q-exponential, and the pseudo-addition `x ⊕_q y = x + y + (1-q)xy`.
//!
//! Every operation reduces to its ordinary counterpart as `q → 1`. The raw
//! formulas are `0/0` at `q = 1`, so both transcendental functions switch to
//! a truncated Taylor series once `|(1-q)·ln x|` (resp. `|(1-q)·x|`) drops
//! below [`SERIES_THRESHOLD`]. The series and the closed form agree to a few
//! ulps at the switch point, which keeps the transition continuous.

use crate::error::{Error, Result};

/// Default width of the band `|q - 1| <= tol` treated as the classical case.
pub const DEFAULT_CLASSICAL_TOLERANCE: f64 = 1e-8;

/// Below this magnitude of the deformation argument the series path is used.
pub const SERIES_THRESHOLD: f64 = 1e-5;

/// A validated nonextensivity / order parameter (Tsallis `q`, Rényi `α`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParam {
    value: f64,
    classical_tolerance: f64,
}

impl QParam {
    /// `q` must be finite and strictly positive.
    pub fn new(value: f64) -> Result<Self> {
        Self::with_tolerance(value, DEFAULT_CLASSICAL_TOLERANCE)
    }

    pub fn with_tolerance(value: f64, classical_tolerance: f64) -> Result<Self> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "q",
                value,
                reason: "must be finite and > 0",
            });
        }
        if !classical_tolerance.is_finite() || classical_tolerance < 0.0 {
            return Err(Error::InvalidParameter {
                name: "classical_tolerance",
                value: classical_tolerance,
                reason: "must be finite and >= 0",
            });
        }
        Ok(Self {
            value,
            classical_tolerance,
        })
    }

    /// The classical parameter `q = 1`.
    pub fn one() -> Self {
        Self {
            value: 1.0,
            classical_tolerance: DEFAULT_CLASSICAL_TOLERANCE,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn classical_tolerance(&self) -> f64 {
        self.classical_tolerance
    }

    /// `1 - q`, the deformation strength.
    pub fn deformation(&self) -> f64 {
        1.0 - self.value
    }

    pub fn is_classical(&self) -> bool {
        (self.value - 1.0).abs() <= self.classical_tolerance
    }
}

/// `ln_q` evaluated from `ln x` rather than `x`.
///
/// Computes `(e^{(1-q)l} - 1)/(1-q)` with `expm1`, falling back to
/// `l·(1 + t/2 + t²/6 + t³/24)`, `t = (1-q)l`, when `|t|` is tiny.
/// This is also `φ_q(l)`.
pub fn q_log_from_ln(ln_x: f64, q: QParam) -> f64 {
    let k = q.deformation();
    let t = k * ln_x;
    if t.abs() < SERIES_THRESHOLD {
        ln_x * (1.0 + t * (0.5 + t * (1.0 / 6.0 + t / 24.0)))
    } else {
        t.exp_m1() / k
    }
}

/// The q-logarithm `ln_q(x) = (x^{1-q} - 1)/(1-q)`.
pub fn q_log(x: f64, q: QParam) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("q_log requires finite x > 0, got {x}")));
    }
    Ok(q_log_from_ln(x.ln(), q))
}

/// The q-exponential `[1 + (1-q)x]^{1/(1-q)}`, inverse of [`q_log`].
pub fn q_exp(x: f64, q: QParam) -> Result<f64> {
    Ok(ln_q_exp(x, q)?.exp())
}

/// `ln(q_exp(x))`, i.e. `ln(1 + (1-q)x)/(1-q)`; the inverse of [`q_log_from_ln`].
pub fn ln_q_exp(x: f64, q: QParam) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("q_exp requires finite x, got {x}")));
    }
    let k = q.deformation();
    let t = k * x;
    if !(1.0 + t > 0.0) {
        return Err(Error::Domain(format!(
            "q_exp undefined: 1 + (1-q)x = {} <= 0 (x = {x}, q = {})",
            1.0 + t,
            q.value()
        )));
    }
    if t.abs() < SERIES_THRESHOLD {
        Ok(x * (1.0 - t * (0.5 - t * (1.0 / 3.0 - t / 4.0))))
    } else {
        Ok(t.ln_1p() / k)
    }
}

/// Pseudo-addition `x ⊕_q y = x + y + (1-q)xy`.
pub fn pseudo_add(x: f64, y: f64, q: QParam) -> f64 {
    x + y + q.deformation() * (x * y)
}

/// Left fold of [`pseudo_add`] over a non-empty sequence.
pub fn pseudo_sum(xs: &[f64], q: QParam) -> Result<f64> {
    let (first, rest) = xs.split_first().ok_or(Error::EmptySequence)?;
    Ok(rest.iter().fold(*first, |acc, &x| pseudo_add(acc, x, q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    #[test]
    fn qparam_validation() {
        assert!(QParam::new(0.0).is_err());
        assert!(QParam::new(-1.0).is_err());
        assert!(QParam::new(f64::NAN).is_err());
        assert!(QParam::new(f64::INFINITY).is_err());
        assert!(QParam::with_tolerance(2.0, -1.0).is_err());
        assert!(q(1.0).is_classical());
        assert!(q(1.0 + 1e-8).is_classical());
        assert!(!q(1.0 + 1e-7).is_classical());
        assert!(!q(2.0).is_classical());
    }

    #[test]
    fn q_log_examples() {
        assert_eq!(q_log(1.0, q(2.0)).unwrap(), 0.0);
        assert!((q_log(2.0, q(2.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!((q_log(std::f64::consts::E, q(1.0)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn q_log_domain_errors() {
        assert!(matches!(q_log(0.0, q(2.0)), Err(Error::Domain(_))));
        assert!(matches!(q_log(-1.0, q(0.5)), Err(Error::Domain(_))));
        assert!(q_log(f64::NAN, q(0.5)).is_err());
    }

    #[test]
    fn q_exp_examples() {
        assert_eq!(q_exp(0.0, q(3.0)).unwrap(), 1.0);
        assert!((q_exp(0.5, q(2.0)).unwrap() - 2.0).abs() < 1e-15);
        assert!((q_exp(1.0, q(1.0)).unwrap() - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn q_exp_domain_error() {
        // 1 + (1-2)·1 = 0
        assert!(matches!(q_exp(1.0, q(2.0)), Err(Error::Domain(_))));
        assert!(q_exp(-3.0, q(0.5)).is_err());
        assert!(q_exp(0.99, q(2.0)).is_ok());
    }

    #[test]
    fn pseudo_add_examples() {
        for &qv in &[0.3, 1.0, 2.0, 7.0] {
            assert_eq!(pseudo_add(3.25, 0.0, q(qv)), 3.25);
        }
        assert_eq!(pseudo_add(1.0, 1.0, q(2.0)), 1.0);
        assert_eq!(pseudo_add(2.0, 3.0, q(1.0)), 5.0);
    }

    #[test]
    fn pseudo_sum_examples() {
        assert_eq!(pseudo_sum(&[4.5], q(2.0)).unwrap(), 4.5);
        assert_eq!(pseudo_sum(&[1.0, 1.0, 1.0], q(2.0)).unwrap(), 1.0);
        assert_eq!(pseudo_sum(&[1.0, 2.0, 3.0], q(1.0)).unwrap(), 6.0);
        assert_eq!(pseudo_sum(&[], q(2.0)), Err(Error::EmptySequence));
    }

    #[test]
    fn series_switch_is_continuous() {
        // Straddle the series threshold from both sides.
        for &x in &[0.1, 0.5, 2.0, 10.0] {
            let l: f64 = f64::ln(x);
            let k_edge = SERIES_THRESHOLD / l.abs();
            let below = q(1.0 - k_edge * (1.0 - 1e-9));
            let above = q(1.0 - k_edge * (1.0 + 1e-9));
            let a = q_log(x, below).unwrap();
            let b = q_log(x, above).unwrap();
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn classical_band_edge_is_continuous() {
        for &x in &[0.1, 3.0, 10.0] {
            let inside = q_log(x, q(1.0 + 0.99e-8)).unwrap();
            let outside = q_log(x, q(1.0 + 1.01e-8)).unwrap();
            // d ln_q / dq = -l²/2 at q = 1, so a 2e-10 step in q moves the value by about l²·1e-10
            let l = f64::ln(x);
            assert!((inside - outside).abs() <= 1.01 * l * l * 1e-10 + 1e-15, "x={x}");
        }
    }
}
