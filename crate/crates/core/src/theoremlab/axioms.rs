//! Finite-support checks of the quasilinear-mean axioms: consistency with
//! certainty, monotonicity, and quasilinearity.

use rand::Rng;

use crate::error::Result;
use crate::knmean::{kn_mean, KnFunction, KnMeanInput};
use crate::pmf::Pmf;
use crate::report::{Extremum, LabConfig, Verdict, VerificationReport, Witness};
use crate::sampling::{dirichlet_probs, pmf_from_draw, sampling_window, sub_rng, uniform_values};

pub const CERTAINTY_TOLERANCE: f64 = 1e-12;
pub const MONOTONICITY_TOLERANCE: f64 = 1e-12;
/// Equal-mean pairs are accepted once their means agree to this.
pub const PAIR_MATCH_TOLERANCE: f64 = 1e-10;
const GRID_SIZES: std::ops::RangeInclusive<usize> = 3..=6;
const MIN_GRID_GAP: f64 = 0.1;
const BISECTION_STEPS: usize = 200;

pub const MONOTONICITY_NOTE: &str = "monotonicity is checked under first-order stochastic dominance: \
if G dominates F (CDF_G <= CDF_F pointwise) then mean(G) >= mean(F), with equality only when F = G. \
The axiom as commonly stated (F <= G implies kappa(F) <= kappa(G)) reads in the opposite direction for CDFs.";

/// Sorted grid values with a minimum spacing, inside the sampling window.
fn value_grid<R: Rng + ?Sized>(rng: &mut R, window: (f64, f64)) -> Vec<f64> {
    let n = rng.random_range(GRID_SIZES);
    loop {
        let mut v = uniform_values(rng, window, n);
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[1] - w[0] >= MIN_GRID_GAP) {
            return v;
        }
    }
}

fn mean_on(grid: &[f64], weights: &Pmf, psi: &KnFunction) -> Result<f64> {
    kn_mean(&KnMeanInput::new(grid.to_vec(), weights.clone())?, psi)
}

/// `G` on the same grid with `⟨G⟩_ψ = ⟨F⟩_ψ`, found by bisection on the
/// weight `t` of `(1-t)·G0 + t·δ_extreme`, where the extreme grid point lies
/// on the far side of the target mean.
fn matching_pmf(grid: &[f64], target: f64, g0: &Pmf, psi: &KnFunction) -> Result<Option<Pmf>> {
    let start = mean_on(grid, g0, psi)?;
    let extreme_idx = if start > target { 0 } else { grid.len() - 1 };
    let mut delta = vec![0.0; grid.len()];
    delta[extreme_idx] = 1.0;
    let delta = Pmf::from_probs(&delta)?;
    let at = |t: f64| -> Result<(Pmf, f64)> {
        let g = delta.mixture(g0, t)?;
        let m = mean_on(grid, &g, psi)?;
        Ok((g, m))
    };
    // mean(t) runs monotonically from `start` (t = 0) to the extreme (t = 1)
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let toward_target = |m: f64| if start > target { m > target } else { m < target };
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (_, m) = at(mid)?;
        if toward_target(m) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (g, m) = at(0.5 * (lo + hi))?;
    Ok(((m - target).abs() <= PAIR_MATCH_TOLERANCE).then_some(g))
}

/// Runs all three axioms on `cfg.budget` random finite distributions.
pub fn verify_axioms(psi: &KnFunction, cfg: &LabConfig) -> Result<VerificationReport> {
    let id = format!("axioms:{}", psi.name());
    let mut rng = sub_rng(cfg.seed, &id);
    let window = sampling_window(psi.domain());
    let mut certainty = Extremum::new();
    let mut monotone = Extremum::new();
    let mut quasilinear = Extremum::new();
    let mut strict_failures = 0u64;

    for trial in 0..cfg.budget {
        // axiom 1: a point mass returns its location, also with zero-mass atoms around it
        let x = uniform_values(&mut rng, window, 1)[0];
        let point = kn_mean(&KnMeanInput::new(vec![x], Pmf::degenerate("x"))?, psi)?;
        let grid = value_grid(&mut rng, window);
        let hit = rng.random_range(0..grid.len());
        let mut padded = vec![0.0; grid.len()];
        padded[hit] = 1.0;
        let padded_mean = mean_on(&grid, &Pmf::from_probs(&padded)?, psi)?;
        let r1 = (point - x).abs().max((padded_mean - grid[hit]).abs());
        certainty.offer(trial, r1, || {
            Witness::new(Some(psi.spec()), r1)
                .with_values(&[x])
                .with_pmf(&padded)
                .with_values(&grid)
        });

        // axiom 2: move mass upward on the grid, which yields a dominating G
        let f = pmf_from_draw(dirichlet_probs(&mut rng, grid.len()));
        let from = rng.random_range(0..grid.len() - 1);
        let to = rng.random_range(from + 1..grid.len());
        let moved = f.probs()[from] * (0.05 + 0.95 * rng.random::<f64>());
        let mut g = f.probs().to_vec();
        g[from] -= moved;
        g[to] += moved;
        let g = pmf_from_draw(g);
        let mf = mean_on(&grid, &f, psi)?;
        let mg = mean_on(&grid, &g, psi)?;
        if !(mg > mf) {
            strict_failures += 1;
        }
        let r2 = (mf - mg).max(0.0);
        monotone.offer(trial, r2, || {
            Witness::new(Some(psi.spec()), r2)
                .with_values(&grid)
                .with_pmf(f.probs())
                .with_pmf(g.probs())
        });

        // axiom 3: equal means survive mixing with a common H
        let f = pmf_from_draw(dirichlet_probs(&mut rng, grid.len()));
        let g0 = pmf_from_draw(dirichlet_probs(&mut rng, grid.len()));
        let h = pmf_from_draw(dirichlet_probs(&mut rng, grid.len()));
        let beta: f64 = rng.random();
        let target = mean_on(&grid, &f, psi)?;
        let Some(g) = matching_pmf(&grid, target, &g0, psi)? else {
            continue;
        };
        let lhs = mean_on(&grid, &f.mixture(&h, beta)?, psi)?;
        let rhs = mean_on(&grid, &g.mixture(&h, beta)?, psi)?;
        let r3 = (lhs - rhs).abs();
        quasilinear.offer(trial, r3, || {
            Witness::new(Some(psi.spec()), r3)
                .with_values(&grid)
                .with_pmf(f.probs())
                .with_pmf(g.probs())
                .with_pmf(h.probs())
                .with_param("beta", beta)
        });
    }

    let ok = certainty.residual <= CERTAINTY_TOLERANCE
        && monotone.residual <= MONOTONICITY_TOLERANCE
        && strict_failures == 0
        && quasilinear.residual <= cfg.pass_threshold;
    let max_residual = certainty.residual.max(monotone.residual).max(quasilinear.residual);
    let mut note = MONOTONICITY_NOTE.to_string();
    let (verdict, witness) = if ok {
        (Verdict::Pass, None)
    } else {
        let (_, worst, axiom) = [
            (certainty.residual / CERTAINTY_TOLERANCE, &certainty, "certainty"),
            (monotone.residual / MONOTONICITY_TOLERANCE, &monotone, "monotonicity"),
            (quasilinear.residual / cfg.pass_threshold, &quasilinear, "quasilinearity"),
        ]
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("three axioms");
        note = format!("violated axiom: {axiom}; strict monotonicity failures: {strict_failures}. {note}");
        (Verdict::CounterexampleFound, worst.witness.clone())
    };
    Ok(VerificationReport {
        theorem_id: id,
        verdict,
        max_residual,
        trials_run: cfg.budget,
        seed: cfg.seed,
        witness,
        note: Some(note),
    })
}
