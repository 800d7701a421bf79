//! Exceptional sets: finite forward-invariant `Σ ⊂ J` whose extra preimages
//! all fall into the singular set `Λ`.
//!
//! Any finite forward-invariant set is a union of preperiodic orbits, so it
//! contains a periodic cycle. The search seeds with each cycle of period at
//! most `p_max` and adds every preimage that is neither in `Σ` nor in `Λ`.
//! The closure is forced, which makes the search complete up to its bounds.
//! A `NoSetFound` result is a bounded-search statement only.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::SmoothIntervalMap;
use crate::potentials::Potential;
use crate::preimage::preimages;

/// Two points closer than this are the same point.
pub const POINT_TOL: f64 = 1e-9;
pub const MAX_SEED_PERIOD: usize = 8;
pub const MAX_SET_SIZE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalStatus {
    NonExceptionalCertifiedTrivially,
    Exceptional,
    NoSetFound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    pub p_max: usize,
    pub size_max: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            p_max: MAX_SEED_PERIOD,
            size_max: MAX_SET_SIZE,
        }
    }
}

/// Points appended while closing up the preimages of `source`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureStep {
    pub source: f64,
    pub added: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalReport {
    pub status: ExceptionalStatus,
    /// Sorted ascending; empty unless exceptional.
    pub sigma: Vec<f64>,
    pub seed: Vec<f64>,
    pub trace: Vec<ClosureStep>,
    /// `max_{σ ∈ Σ} dist(f(σ), Σ)`, when a set was found.
    pub forward_defect: Option<f64>,
    /// Largest distance to `Λ` of a preimage of `Σ` lying outside `Σ`.
    pub backward_defect: Option<f64>,
}

impl ExceptionalReport {
    fn trivial() -> Self {
        ExceptionalReport {
            status: ExceptionalStatus::NonExceptionalCertifiedTrivially,
            sigma: Vec::new(),
            seed: Vec::new(),
            trace: Vec::new(),
            forward_defect: None,
            backward_defect: None,
        }
    }

    pub fn is_exceptional(&self) -> bool {
        self.status == ExceptionalStatus::Exceptional
    }
}

fn dist(x: f64, set: &[f64]) -> f64 {
    set.iter().map(|s| (x - s).abs()).fold(f64::INFINITY, f64::min)
}

fn near(x: f64, set: &[f64]) -> bool {
    dist(x, set) < POINT_TOL
}

/// Forward and backward defects of `sigma` against `lambda`.
pub fn exceptional_defects(map: &SmoothIntervalMap, sigma: &[f64], lambda: &[f64]) -> (f64, f64) {
    let forward = sigma
        .iter()
        .map(|&s| dist(map.snap(map.apply(s), POINT_TOL), sigma))
        .fold(0.0, f64::max);
    let backward = sigma
        .iter()
        .flat_map(|&s| preimages(map, s))
        .map(|y| map.snap(y, POINT_TOL))
        .filter(|&y| !near(y, sigma))
        .map(|y| dist(y, lambda))
        .fold(0.0, f64::max);
    (forward, backward)
}

/// Whether `sigma` is a non-empty `Λ`-exceptional set within [`POINT_TOL`].
pub fn is_exceptional_set(map: &SmoothIntervalMap, sigma: &[f64], lambda: &[f64]) -> bool {
    let (fwd, bwd) = exceptional_defects(map, sigma, lambda);
    !sigma.is_empty() && fwd < POINT_TOL && bwd < POINT_TOL
}

/// Periodic cycles of minimal period `1..=p_max`, each sorted, in order of
/// period and then of smallest point.
pub fn periodic_cycles(map: &SmoothIntervalMap, p_max: usize) -> Result<Vec<Vec<f64>>> {
    let mut cycles: Vec<Vec<f64>> = Vec::new();
    for p in 1..=p_max {
        let points = map.periodic_points(p)?;
        let mut used = vec![false; points.len()];
        for i in 0..points.len() {
            if used[i] {
                continue;
            }
            let start = map.snap(points[i].point, POINT_TOL);
            let mut cycle = vec![start];
            let mut y = start;
            for _ in 1..p {
                y = map.snap(map.apply(y), POINT_TOL);
                if (y - start).abs() < POINT_TOL {
                    break;
                }
                cycle.push(y);
            }
            for c in &cycle {
                if let Some(j) = points.iter().position(|q| (q.point - c).abs() < POINT_TOL) {
                    used[j] = true;
                }
            }
            if cycle.len() == p {
                cycle.sort_by(f64::total_cmp);
                cycles.push(cycle);
            }
        }
    }
    Ok(cycles)
}

fn close_up(map: &SmoothIntervalMap, seed: &[f64], lambda: &[f64], size_max: usize) -> ExceptionalReport {
    let mut sigma = seed.to_vec();
    let mut trace = Vec::new();
    let mut next = 0;
    let mut overflow = false;
    while next < sigma.len() {
        let source = sigma[next];
        next += 1;
        let mut added = Vec::new();
        for y in preimages(map, source) {
            let y = map.snap(y, POINT_TOL);
            if near(y, &sigma) || near(y, lambda) {
                continue;
            }
            sigma.push(y);
            added.push(y);
        }
        if !added.is_empty() {
            trace.push(ClosureStep { source, added });
        }
        if sigma.len() > size_max {
            overflow = true;
            break;
        }
    }
    let mut seed = seed.to_vec();
    seed.sort_by(f64::total_cmp);
    if overflow {
        return ExceptionalReport {
            status: ExceptionalStatus::NoSetFound,
            sigma: Vec::new(),
            seed,
            trace,
            forward_defect: None,
            backward_defect: None,
        };
    }
    sigma.sort_by(f64::total_cmp);
    let (forward_defect, backward_defect) = exceptional_defects(map, &sigma, lambda);
    ExceptionalReport {
        status: ExceptionalStatus::Exceptional,
        sigma,
        seed,
        trace,
        forward_defect: Some(forward_defect),
        backward_defect: Some(backward_defect),
    }
}

/// One report per periodic seed, with duplicate exceptional sets removed.
pub fn find_exceptional_sets(
    map: &SmoothIntervalMap,
    lambda: &[f64],
    params: SearchParams,
) -> Result<Vec<ExceptionalReport>> {
    if params.p_max > MAX_SEED_PERIOD || params.size_max > MAX_SET_SIZE {
        return Err(Error::InvalidParameter(format!(
            "search bounds must satisfy p_max <= {MAX_SEED_PERIOD}, size_max <= {MAX_SET_SIZE}"
        )));
    }
    if lambda.is_empty() {
        return Ok(vec![ExceptionalReport::trivial()]);
    }
    let cycles = periodic_cycles(map, params.p_max)?;
    let reports: Vec<ExceptionalReport> = cycles
        .par_iter()
        .map(|seed| close_up(map, seed, lambda, params.size_max))
        .collect();
    let mut out: Vec<ExceptionalReport> = Vec::with_capacity(reports.len());
    for r in reports {
        let dup = r.is_exceptional()
            && out.iter().any(|o| {
                o.is_exceptional()
                    && o.sigma.len() == r.sigma.len()
                    && o.sigma.iter().zip(&r.sigma).all(|(a, b)| (a - b).abs() < POINT_TOL)
            });
        if !dup {
            out.push(r);
        }
    }
    Ok(out)
}

/// Searches for an exceptional set of `G` with `Λ = Λ(G)`.
///
/// Returns the first exceptional set found. Otherwise the result is
/// `NoSetFound`, meaning non-exceptional within the search bounds.
pub fn is_exceptional<P: Potential + ?Sized>(
    map: &SmoothIntervalMap,
    g: &P,
    params: SearchParams,
) -> Result<ExceptionalReport> {
    let lambda = g.poles();
    let reports = find_exceptional_sets(map, &lambda, params)?;
    if let Some(r) = reports.iter().find(|r| {
        r.status != ExceptionalStatus::NoSetFound
    }) {
        return Ok(r.clone());
    }
    Ok(ExceptionalReport {
        status: ExceptionalStatus::NoSetFound,
        sigma: Vec::new(),
        seed: Vec::new(),
        trace: Vec::new(),
        forward_defect: None,
        backward_defect: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaPrimeReport {
    pub sigma_tilde: Vec<f64>,
    /// `(x, j*)` for each `x ∈ f^{−1}(Σ̃) \ Σ̃`.
    pub last_hits: Vec<(f64, usize)>,
    pub a: Vec<f64>,
    pub sigma_prime: Vec<f64>,
    pub forward_defect: f64,
    pub backward_defect: f64,
}

/// Builds a `Λ(G)`-exceptional set `Σ′` from a set `Σ̃` that is exceptional
/// for the averaged potential `(1/N)·S_N(G)`.
///
/// Each extra preimage `x` of `Σ̃` has a last visit `j*` to `Λ(G)` along its
/// orbit; `A` collects the points `f^{j*}(x)` and `Σ′ = ⋃_{i ≥ 1} f^i(A)`.
pub fn sigma_prime_construction<P: Potential + ?Sized>(
    map: &SmoothIntervalMap,
    g: &P,
    n_avg: usize,
    sigma_tilde: &[f64],
) -> Result<SigmaPrimeReport> {
    if n_avg == 0 {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    let lambda = g.poles();
    let mut st: Vec<f64> = sigma_tilde.iter().map(|&s| map.snap(s, POINT_TOL)).collect();
    st.sort_by(f64::total_cmp);
    st.dedup_by(|b, a| (*a - *b).abs() < POINT_TOL);
    if st.is_empty() {
        return Err(Error::Precondition("the set is empty".into()));
    }

    // Λ(G̃) = ⋃_{j<N} f^{−j}(Λ(G)): a point lies in it iff some f^j, j < N, hits Λ.
    let hits_lambda_within = |x: f64, horizon: usize| -> Vec<usize> {
        let mut y = x;
        let mut hits = Vec::new();
        for j in 0..=horizon {
            if near(y, &lambda) {
                hits.push(j);
            }
            y = map.snap(map.apply(y), POINT_TOL);
        }
        hits
    };
    let (fwd, _) = exceptional_defects(map, &st, &[]);
    if fwd >= POINT_TOL {
        return Err(Error::Precondition("the set is not forward invariant".into()));
    }
    let extra: Vec<f64> = st
        .iter()
        .flat_map(|&s| preimages(map, s))
        .map(|y| map.snap(y, POINT_TOL))
        .filter(|&y| !near(y, &st))
        .collect();
    for &x in &extra {
        if hits_lambda_within(x, n_avg - 1).is_empty() {
            return Err(Error::Precondition(format!(
                "the set is not exceptional for the averaged potential: preimage {x} avoids Λ for {n_avg} steps"
            )));
        }
    }

    let horizon = 2 * st.len() + n_avg;
    let mut last_hits = Vec::new();
    let mut a: Vec<f64> = Vec::new();
    for &x in &extra {
        let j_star = *hits_lambda_within(x, horizon).last().ok_or_else(|| {
            Error::Verification(format!("no visit to Λ found from {x}"))
        })?;
        last_hits.push((x, j_star));
        let mut y = x;
        for _ in 0..j_star {
            y = map.snap(map.apply(y), POINT_TOL);
        }
        if !near(y, &a) {
            a.push(y);
        }
    }

    let mut sigma_prime: Vec<f64> = Vec::new();
    for &p in &a {
        let mut y = map.snap(map.apply(p), POINT_TOL);
        while !near(y, &sigma_prime) {
            sigma_prime.push(y);
            if sigma_prime.len() > MAX_SET_SIZE {
                return Err(Error::Verification("forward orbit of A does not close up".into()));
            }
            y = map.snap(map.apply(y), POINT_TOL);
        }
    }
    sigma_prime.sort_by(f64::total_cmp);
    let (forward_defect, backward_defect) = exceptional_defects(map, &sigma_prime, &lambda);
    if !is_exceptional_set(map, &sigma_prime, &lambda) {
        return Err(Error::Verification(format!(
            "constructed set {sigma_prime:?} is not exceptional (defects {forward_defect}, {backward_defect})"
        )));
    }
    a.sort_by(f64::total_cmp);
    Ok(SigmaPrimeReport {
        sigma_tilde: st,
        last_hits,
        a,
        sigma_prime,
        forward_defect,
        backward_defect,
    })
}
