//! Seeded random inputs for the verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::knmean::Interval;
use crate::pmf::Pmf;

pub type LabRng = ChaCha8Rng;

/// Supports of random pmfs range over `MIN_SUPPORT..=MAX_SUPPORT` atoms.
pub const MIN_SUPPORT: usize = 2;
pub const MAX_SUPPORT: usize = 8;

/// Values are drawn from the KN-function domain intersected with this window.
pub const VALUE_WINDOW: (f64, f64) = (0.0, 10.0);

pub fn rng(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for one sub-suite, so adding a suite does not shift
/// the draws of the others.
pub fn sub_rng(seed: u64, stream: &str) -> LabRng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in stream.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(h);
    r
}

/// A symmetric Dirichlet(1) draw, i.e. uniform on the simplex.
pub fn dirichlet_probs<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n)
        .map(|_| {
            let e: f64 = Exp1.sample(rng);
            e.max(f64::MIN_POSITIVE)
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Dirichlet draw with a shared concentration; small values give
/// near-degenerate pmfs, large values near-uniform ones.
pub fn dirichlet_probs_concentrated<R: Rng + ?Sized>(rng: &mut R, n: usize, concentration: f64) -> Vec<f64> {
    let gamma = Gamma::new(concentration, 1.0).expect("positive concentration");
    let mut raw: Vec<f64> = (0..n).map(|_| gamma.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    if !(total > 0.0) {
        raw = vec![0.0; n];
        raw[rng.random_range(0..n)] = 1.0;
        return raw;
    }
    raw.into_iter().map(|x| x / total).collect()
}

pub fn random_support_size<R: Rng + ?Sized>(rng: &mut R) -> usize {
    rng.random_range(MIN_SUPPORT..=MAX_SUPPORT)
}

/// Dirichlet(1) pmf over a random support size in `2..=8`.
pub fn random_pmf<R: Rng + ?Sized>(rng: &mut R) -> Pmf {
    let n = random_support_size(rng);
    pmf_from_draw(dirichlet_probs(rng, n))
}

/// Wraps a fresh simplex draw; the draw is normalized by construction.
pub fn pmf_from_draw(probs: Vec<f64>) -> Pmf {
    Pmf::renormalized(probs.into_iter().enumerate().map(|(i, p)| (i.to_string(), p)))
        .expect("simplex draw is a valid pmf")
}

/// `domain ∩ [0, 10]`, falling back to the width-10 window nearest to the
/// origin when the intersection is empty.
pub fn sampling_window(domain: Interval) -> (f64, f64) {
    let (lo, hi) = (domain.lo.max(VALUE_WINDOW.0), domain.hi.min(VALUE_WINDOW.1));
    if lo < hi {
        return (lo, hi);
    }
    if domain.hi <= VALUE_WINDOW.0 {
        ((domain.hi - 10.0).max(domain.lo), domain.hi)
    } else {
        (domain.lo, (domain.lo + 10.0).min(domain.hi))
    }
}

pub fn uniform_values<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    (0..n).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect()
}
