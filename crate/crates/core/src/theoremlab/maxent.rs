//! Maximum-entropy distributions on a three-point support under a mean
//! constraint, by exhaustive search over a barycentric grid.

use std::fmt;

use crate::entropy::{renyi, shannon, tsallis};
use crate::error::{Error, Result};
use crate::pmf::Pmf;
use crate::qalgebra::QParam;

/// Cells per barycentric coordinate on the coarse pass.
pub const DEFAULT_GRID_RESOLUTION: u64 = 400;
/// The refinement pass subdivides each coarse cell this many times.
pub const REFINEMENT_FACTOR: u64 = 10;
const SUPPORT_SIZE: usize = 3;
/// Objective values this close (relative) count as ties; the earliest cell wins.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    Shannon,
    Renyi(QParam),
    Tsallis(QParam),
}

impl Objective {
    /// `shannon`, `renyi` or `tsallis`; the latter two take `q`.
    pub fn parse(name: &str, q: QParam) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "shannon" => Ok(Self::Shannon),
            "renyi" => Ok(Self::Renyi(q)),
            "tsallis" => Ok(Self::Tsallis(q)),
            other => Err(Error::Parse(format!("unknown objective {other:?}"))),
        }
    }

    pub fn evaluate(&self, p: &Pmf) -> f64 {
        match *self {
            Self::Shannon => shannon(p),
            Self::Renyi(a) => renyi(p, a),
            Self::Tsallis(q) => tsallis(p, q),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Shannon => "shannon",
            Self::Renyi(_) => "renyi",
            Self::Tsallis(_) => "tsallis",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Shannon => f.write_str("shannon"),
            Self::Renyi(a) => write!(f, "renyi({})", a.value()),
            Self::Tsallis(q) => write!(f, "tsallis({})", q.value()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxentResult {
    pub objective: Objective,
    /// Maximizer, labelled by the support values.
    pub pmf: Pmf,
    pub objective_value: f64,
    /// Integer barycentric coordinates at `resolution`.
    pub cell: [u64; 3],
    pub resolution: u64,
    pub coarse_cell: [u64; 3],
    pub coarse_resolution: u64,
}

/// L∞ distance between two cells in units of the finer of the two grids.
pub fn cell_distance(a: ([u64; 3], u64), b: ([u64; 3], u64)) -> Result<u64> {
    let fine = a.1.max(b.1);
    if fine % a.1 != 0 || fine % b.1 != 0 {
        return Err(Error::Unsupported(format!(
            "grids of resolution {} and {} do not nest",
            a.1, b.1
        )));
    }
    let scale = |c: [u64; 3], r: u64| c.map(|x| x * (fine / r));
    let (ca, cb) = (scale(a.0, a.1), scale(b.0, b.1));
    Ok((0..3).map(|k| ca[k].abs_diff(cb[k])).max().unwrap_or(0))
}

struct Best {
    cell: [u64; 3],
    value: f64,
}

/// Best feasible cell over `cells` at resolution `n`.
fn search(
    objective: &Objective,
    values: &[f64],
    target: f64,
    n: u64,
    cells: impl Iterator<Item = (u64, u64)>,
) -> Option<Best> {
    let spread = values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - values.iter().copied().fold(f64::INFINITY, f64::min);
    let tolerance = spread / (2 * n) as f64 * (1.0 + 1e-9);
    let mut best: Option<Best> = None;
    for (i, j) in cells {
        let cell = [i, j, n - i - j];
        let probs = cell.map(|c| c as f64 / n as f64);
        let mean: f64 = probs.iter().zip(values).map(|(p, x)| p * x).sum();
        if (mean - target).abs() > tolerance {
            continue;
        }
        let pmf = Pmf::from_probs(&probs).expect("grid cells are normalized");
        let value = objective.evaluate(&pmf);
        let improves = match &best {
            None => true,
            Some(b) => value > b.value + TIE_TOLERANCE * b.value.abs().max(1.0),
        };
        if improves {
            best = Some(Best { cell, value });
        }
    }
    best
}

/// Grid maximizer of `objective` subject to `Σ p_k x_k = mean_target`.
///
/// The coarse pass visits every cell of the simplex at `resolution`; the
/// refinement pass searches the grid `REFINEMENT_FACTOR` times finer within
/// one coarse cell of the coarse winner. A cell is feasible when its mean is
/// within half a cell's mean spread of the target.
pub fn maxent_argmax(
    objective: Objective,
    support_values: &[f64],
    mean_target: f64,
    resolution: u64,
) -> Result<MaxentResult> {
    if support_values.len() != SUPPORT_SIZE {
        return Err(Error::Unsupported(format!(
            "maxent search needs exactly {SUPPORT_SIZE} support values, got {}",
            support_values.len()
        )));
    }
    if resolution == 0 {
        return Err(Error::InvalidParameter {
            name: "grid_resolution",
            value: 0.0,
            reason: "must be positive",
        });
    }
    if let Some(x) = support_values.iter().find(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("non-finite support value {x}")));
    }
    let lo = support_values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = support_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(mean_target > lo && mean_target < hi) {
        return Err(Error::Infeasible(format!(
            "mean target {mean_target} is not strictly inside [{lo}, {hi}]"
        )));
    }

    let n = resolution;
    let coarse = search(
        &objective,
        support_values,
        mean_target,
        n,
        (0..=n).flat_map(|i| (0..=n - i).map(move |j| (i, j))),
    )
    .ok_or_else(|| Error::Infeasible(format!("no grid cell at resolution {n} meets the mean target")))?;

    let fine_n = n * REFINEMENT_FACTOR;
    let [ci, cj, _] = coarse.cell.map(|c| c * REFINEMENT_FACTOR);
    let reach = REFINEMENT_FACTOR;
    let i_range = ci.saturating_sub(reach)..=(ci + reach).min(fine_n);
    let fine_cells = i_range.flat_map(move |i| {
        let j_hi = (cj + reach).min(fine_n - i);
        (cj.saturating_sub(reach)..=j_hi).map(move |j| (i, j))
    });
    let (cell, value, res) = match search(&objective, support_values, mean_target, fine_n, fine_cells) {
        Some(b) => (b.cell, b.value, fine_n),
        None => (coarse.cell, coarse.value, n),
    };

    let probs = cell.map(|c| c as f64 / res as f64);
    let pmf = Pmf::new(support_values.iter().zip(probs).map(|(x, p)| (x.to_string(), p)))?;
    Ok(MaxentResult {
        objective,
        pmf,
        objective_value: value,
        cell,
        resolution: res,
        coarse_cell: coarse.cell,
        coarse_resolution: n,
    })
}
