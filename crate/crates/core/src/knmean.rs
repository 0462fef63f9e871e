//! Kolmogorov-Nagumo functions and the quasilinear mean
//! `⟨X⟩_ψ = ψ⁻¹(Σ p_k ψ(x_k))`.
//!
//! A [`KnFunction`] is one of four closed-form families composed with an
//! outer affine map `x ↦ a·base(x) + b`. Every family has an exact inverse, so
//! residuals measured by the theorem checks reflect the mean itself and not a
//! root finder. Construction spot-checks strict monotonicity and the inverse
//! on a 1024-point grid.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::json::ser_f64;
use crate::pmf::Pmf;
use crate::qalgebra::{ln_q_exp, q_log_from_ln, QParam};
use crate::report::{Extremum, LabConfig, VerificationReport, Witness};
use crate::sampling;

pub const VALIDATION_GRID_POINTS: usize = 1024;
/// Half-width of the window the validation grid is laid on.
const VALIDATION_HALF_WIDTH: f64 = 8.0;
/// Bound on `|(1-α)x|` over the validation grid of exponential-type families.
const VALIDATION_EXPONENT_BOUND: f64 = 12.0;
const ROUND_TRIP_TOLERANCE: f64 = 1e-10;
const FIT_GRID_POINTS: usize = 257;
pub const DEFAULT_FIT_TOLERANCE: f64 = 1e-8;

/// Closed real interval; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// The inner map of a KN-function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `x`
    Linear,
    /// `e^{(1-α)x}`
    Exponential {
        #[serde(serialize_with = "ser_f64")]
        alpha: f64,
    },
    /// `x^γ` on `x >= 0`
    Power {
        #[serde(serialize_with = "ser_f64")]
        gamma: f64,
    },
    /// `φ_q(x) = (e^{(1-q)x} - 1)/(1-q)`
    PhiQ {
        #[serde(serialize_with = "ser_f64")]
        q: f64,
    },
}

impl Family {
    fn forward(&self, x: f64) -> f64 {
        match *self {
            Family::Linear => x,
            Family::Exponential { alpha } => ((1.0 - alpha) * x).exp(),
            Family::Power { gamma } => x.powf(gamma),
            Family::PhiQ { q } => q_log_from_ln(x, qparam_unchecked(q)),
        }
    }

    fn inverse(&self, y: f64) -> Option<f64> {
        let x = match *self {
            Family::Linear => y,
            Family::Exponential { alpha } => {
                if !(y > 0.0) {
                    return None;
                }
                y.ln() / (1.0 - alpha)
            }
            Family::Power { gamma } => {
                if y < 0.0 {
                    return None;
                }
                y.powf(1.0 / gamma)
            }
            Family::PhiQ { q } => ln_q_exp(y, qparam_unchecked(q)).ok()?,
        };
        x.is_finite().then_some(x)
    }

    fn domain(&self) -> Interval {
        match self {
            Family::Power { .. } => Interval::new(0.0, f64::INFINITY),
            _ => Interval::REAL,
        }
    }

    fn increasing(&self) -> bool {
        match *self {
            Family::Exponential { alpha } => alpha < 1.0,
            _ => true,
        }
    }

    /// Rate of the exponential inside the family, if any.
    pub fn exponent_rate(&self) -> Option<f64> {
        match *self {
            Family::Exponential { alpha } => Some(1.0 - alpha),
            Family::PhiQ { q } => Some(1.0 - q),
            _ => None,
        }
    }

    fn name(&self) -> String {
        match *self {
            Family::Linear => "linear".into(),
            Family::Exponential { alpha } => format!("exponential({alpha})"),
            Family::Power { gamma } => format!("power({gamma})"),
            Family::PhiQ { q } => format!("phi_q({q})"),
        }
    }
}

fn qparam_unchecked(q: f64) -> QParam {
    QParam::new(q).expect("validated at construction")
}

/// Serializable definition of a KN-function: `scale · family(x) + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KnSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(serialize_with = "ser_f64")]
    pub scale: f64,
    #[serde(serialize_with = "ser_f64")]
    pub offset: f64,
}

impl KnSpec {
    pub fn forward(&self, x: f64) -> f64 {
        self.scale * self.family.forward(x) + self.offset
    }

    pub fn inverse(&self, y: f64) -> Option<f64> {
        self.family.inverse((y - self.offset) / self.scale)
    }
}

/// A continuous, strictly monotone function with closed-form inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct KnFunction {
    name: String,
    spec: KnSpec,
    domain: Interval,
    direction: Direction,
}

impl KnFunction {
    /// `x ↦ a·x + b`, `a ≠ 0`.
    pub fn linear(a: f64, b: f64) -> Result<Self> {
        Self::from_spec(KnSpec {
            family: Family::Linear,
            scale: a,
            offset: b,
        })
    }

    /// The identity, `linear(1, 0)`.
    pub fn identity() -> Self {
        Self::linear(1.0, 0.0).expect("identity is valid")
    }

    /// `x ↦ e^{(1-α)x}`, `α ≠ 1`.
    pub fn exponential(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha == 1.0 {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "exponential KN-function needs finite alpha != 1",
            });
        }
        Self::from_spec(Family::Exponential { alpha }.into())
    }

    /// `x ↦ x^γ` on `[0, ∞)`, `γ > 0`.
    pub fn power(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "power KN-function needs finite gamma > 0",
            });
        }
        Self::from_spec(Family::Power { gamma }.into())
    }

    /// `φ_q`; at `q = 1` this is the identity.
    pub fn phi_q(q: QParam) -> Result<Self> {
        Self::from_spec(Family::PhiQ { q: q.value() }.into())
    }

    /// Builtins by name: `linear(a, b)`, `exponential(α)`, `power(γ)`,
    /// `phi_q(q)`.
    pub fn builtin(name: &str, params: &[f64]) -> Result<Self> {
        let arity = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "{name} takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match name {
            "linear" => {
                arity(2)?;
                Self::linear(params[0], params[1])
            }
            "exponential" => {
                arity(1)?;
                Self::exponential(params[0])
            }
            "power" => {
                arity(1)?;
                Self::power(params[0])
            }
            "phi_q" => {
                arity(1)?;
                Self::phi_q(QParam::new(params[0])?)
            }
            other => Err(Error::Parse(format!("unknown KN-function family {other:?}"))),
        }
    }

    /// `a·ψ + b`, `a ≠ 0`.
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        Self::from_spec(KnSpec {
            family: self.spec.family,
            scale: a * self.spec.scale,
            offset: a * self.spec.offset + b,
        })
    }

    /// `-ψ`.
    pub fn negated(&self) -> Result<Self> {
        self.affine(-1.0, 0.0)
    }

    pub fn from_spec(spec: KnSpec) -> Result<Self> {
        let name = spec_name(&spec);
        let invalid = {
            let name = name.clone();
            move |reason: String| Error::InvalidKnFunction {
                name: name.clone(),
                reason,
            }
        };
        if !spec.scale.is_finite() || spec.scale == 0.0 || !spec.offset.is_finite() {
            return Err(invalid(format!(
                "affine coefficients must be finite with nonzero scale, got a = {}, b = {}",
                spec.scale, spec.offset
            )));
        }
        match spec.family {
            Family::Exponential { alpha } if !alpha.is_finite() || alpha == 1.0 => {
                return Err(invalid("alpha must be finite and != 1".into()))
            }
            Family::Power { gamma } if !gamma.is_finite() || gamma <= 0.0 => {
                return Err(invalid("gamma must be finite and > 0".into()))
            }
            Family::PhiQ { q } if !q.is_finite() || q <= 0.0 => {
                return Err(invalid("q must be finite and > 0".into()))
            }
            _ => {}
        }
        let domain = spec.family.domain();
        let direction = if spec.family.increasing() == (spec.scale > 0.0) {
            Direction::Increasing
        } else {
            Direction::Decreasing
        };
        let f = Self {
            name,
            spec,
            domain,
            direction,
        };
        f.validate().map_err(invalid)?;
        Ok(f)
    }

    fn validation_window(&self) -> (f64, f64) {
        let mut half = VALIDATION_HALF_WIDTH;
        if let Some(rate) = self.spec.family.exponent_rate() {
            half = half.min(VALIDATION_EXPONENT_BOUND / rate.abs());
        }
        (self.domain.lo.max(-half), self.domain.hi.min(half))
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let (lo, hi) = self.validation_window();
        let step = (hi - lo) / (VALIDATION_GRID_POINTS - 1) as f64;
        let sign = match self.direction {
            Direction::Increasing => 1.0,
            Direction::Decreasing => -1.0,
        };
        let mut prev: Option<f64> = None;
        for i in 0..VALIDATION_GRID_POINTS {
            let x = lo + step * i as f64;
            let y = self.forward(x);
            if !y.is_finite() {
                return Err(format!("forward({x}) = {y} is not finite"));
            }
            if let Some(p) = prev {
                if !(sign * (y - p) > 0.0) {
                    return Err(format!("not strictly monotone near x = {x}"));
                }
            }
            prev = Some(y);
            let back = self
                .inverse(y)
                .ok_or_else(|| format!("inverse undefined at forward({x}) = {y}"))?;
            if (back - x).abs() > ROUND_TRIP_TOLERANCE * x.abs().max(1.0) {
                return Err(format!("inverse(forward({x})) = {back}"));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> KnSpec {
        self.spec
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.spec.family, Family::Linear)
    }

    pub fn forward(&self, x: f64) -> f64 {
        self.spec.forward(x)
    }

    pub fn inverse(&self, y: f64) -> Option<f64> {
        self.spec.inverse(y)
    }
}

impl From<Family> for KnSpec {
    fn from(family: Family) -> Self {
        KnSpec {
            family,
            scale: 1.0,
            offset: 0.0,
        }
    }
}

fn spec_name(spec: &KnSpec) -> String {
    match spec.family {
        Family::Linear => format!("linear({},{})", spec.scale, spec.offset),
        family if spec.scale == 1.0 && spec.offset == 0.0 => family.name(),
        family => format!("affine({},{})*{}", spec.scale, spec.offset, family.name()),
    }
}

impl fmt::Display for KnFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Values `x_k` paired index-wise with the atoms of a weight pmf.
#[derive(Debug, Clone, PartialEq)]
pub struct KnMeanInput {
    values: Vec<f64>,
    weights: Pmf,
}

impl KnMeanInput {
    pub fn new(values: Vec<f64>, weights: Pmf) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(Error::LengthMismatch(values.len(), weights.len()));
        }
        if let Some(x) = values.iter().find(|x| !x.is_finite()) {
            return Err(Error::Domain(format!("non-finite value {x}")));
        }
        Ok(Self { values, weights })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &Pmf {
        &self.weights
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&x| f(x)).collect(), self.weights.clone())
    }

    /// `(weight, value)` over the support of the weights.
    pub fn supported(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.weights.support().map(|(i, p)| (p, self.values[i]))
    }

    /// Smallest and largest supported value.
    pub fn support_range(&self) -> (f64, f64) {
        self.supported()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, x)| {
                (lo.min(x), hi.max(x))
            })
    }
}

/// `ψ⁻¹(Σ p ψ(x))` over arbitrary `(p, x)` pairs with `p > 0`.
pub fn kn_mean_pairs(pairs: impl IntoIterator<Item = (f64, f64)>, psi: &KnFunction) -> Result<f64> {
    let mut acc = 0.0;
    let mut any = false;
    for (p, x) in pairs {
        if !psi.domain.contains(x) {
            return Err(Error::Domain(format!(
                "value {x} outside the domain {} of {}",
                psi.domain, psi.name
            )));
        }
        acc += p * psi.forward(x);
        any = true;
    }
    if !any {
        return Err(Error::EmptySequence);
    }
    psi.inverse(acc).ok_or_else(|| {
        Error::Domain(format!(
            "{}: averaged value {acc} lies outside the range of the function",
            psi.name
        ))
    })
}

/// The quasilinear mean `⟨X⟩_ψ` over the support of the input weights.
pub fn kn_mean(input: &KnMeanInput, psi: &KnFunction) -> Result<f64> {
    kn_mean_pairs(input.supported(), psi)
}

/// `|⟨X + c⟩_ψ - (⟨X⟩_ψ + c)|`.
pub fn check_translativity(psi: &KnFunction, c: f64, input: &KnMeanInput) -> Result<f64> {
    let shifted = input.map_values(|x| x + c)?;
    Ok((kn_mean(&shifted, psi)? - (kn_mean(input, psi)? + c)).abs())
}

/// `|⟨dX⟩_ψ - d⟨X⟩_ψ|`, `d ≠ 0`.
pub fn check_homogeneity(psi: &KnFunction, d: f64, input: &KnMeanInput) -> Result<f64> {
    if d == 0.0 || !d.is_finite() {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d,
            reason: "scaling factor must be finite and nonzero",
        });
    }
    let scaled = input.map_values(|x| d * x)?;
    Ok((kn_mean(&scaled, psi)? - d * kn_mean(input, psi)?).abs())
}

/// Random `(values, weights)` pair with values in `window`.
pub fn random_input<R: Rng + ?Sized>(rng: &mut R, window: (f64, f64)) -> KnMeanInput {
    let weights = sampling::random_pmf(rng);
    let values = sampling::uniform_values(rng, window, weights.len());
    KnMeanInput::new(values, weights).expect("lengths agree by construction")
}

/// Least-squares fit `ψ1 ≈ scale·ψ2 + offset` on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineFit {
    pub scale: f64,
    pub offset: f64,
    /// Max absolute misfit divided by the range of `ψ1` on the grid.
    pub relative_residual: f64,
}

pub fn fit_affine(psi1: &KnFunction, psi2: &KnFunction, window: (f64, f64)) -> AffineFit {
    let (lo, hi) = window;
    let step = (hi - lo) / (FIT_GRID_POINTS - 1) as f64;
    let pts: Vec<(f64, f64)> = (0..FIT_GRID_POINTS)
        .map(|i| {
            let x = lo + step * i as f64;
            (psi2.forward(x), psi1.forward(x))
        })
        .collect();
    let n = pts.len() as f64;
    let mean_u = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_v = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut suv, mut suu) = (0.0, 0.0);
    for &(u, v) in &pts {
        suv += (u - mean_u) * (v - mean_v);
        suu += (u - mean_u) * (u - mean_u);
    }
    let scale = suv / suu;
    let offset = mean_v - scale * mean_u;
    let (vmin, vmax) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let misfit = pts
        .iter()
        .map(|&(u, v)| (v - (scale * u + offset)).abs())
        .fold(0.0, f64::max);
    AffineFit {
        scale,
        offset,
        relative_residual: misfit / (vmax - vmin),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub report: VerificationReport,
    pub fit: AffineFit,
    /// The affine fit's own verdict: residual within [`DEFAULT_FIT_TOLERANCE`].
    pub fit_says_equivalent: bool,
}

impl EquivalenceReport {
    /// Both routes reach the same conclusion.
    pub fn verdicts_agree(&self) -> bool {
        (self.report.verdict == crate::report::Verdict::Pass) == self.fit_says_equivalent
    }
}

/// Empirical KN-equivalence: the two means agree on `cfg.budget` random
/// inputs drawn from the common domain (within `[0, 10]`).
pub fn kn_equivalent(psi1: &KnFunction, psi2: &KnFunction, cfg: &LabConfig) -> Result<EquivalenceReport> {
    let overlap = psi1
        .domain
        .intersect(&psi2.domain)
        .ok_or_else(|| Error::DisjointDomains(psi1.name.clone(), psi2.name.clone()))?;
    if cfg.budget == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            value: 0.0,
            reason: "need at least one trial",
        });
    }
    let window = sampling::sampling_window(overlap);
    let theorem_id = format!("theorem2:{}~{}", psi1.name, psi2.name);
    let mut rng = sampling::sub_rng(cfg.seed, &theorem_id);
    let mut worst = Extremum::new();
    for trial in 0..cfg.budget {
        let input = random_input(&mut rng, window);
        let m1 = kn_mean(&input, psi1)?;
        let m2 = kn_mean(&input, psi2)?;
        let residual = (m1 - m2).abs();
        worst.offer(trial, residual, || {
            Witness::new(Some(psi1.spec), residual)
                .with_pmf(input.weights().probs())
                .with_values(input.values())
                .with_param("mean_psi1", m1)
                .with_param("mean_psi2", m2)
        });
    }
    let verdict = cfg.classify(worst.residual);
    let fit = fit_affine(psi1, psi2, window);
    Ok(EquivalenceReport {
        report: cfg.report(theorem_id, verdict, worst, cfg.budget),
        fit,
        fit_says_equivalent: fit.relative_residual <= DEFAULT_FIT_TOLERANCE,
    })
}
