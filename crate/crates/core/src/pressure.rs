//! Pressure estimators.
//!
//! The tree estimator folds the preimage tree of a single point. Two
//! independent oracles are provided for comparison: the leading eigenvalue of
//! a weighted Ulam discretization of the transfer operator (full-interval maps
//! only) and sums over periodic orbits. Neither oracle is rigorous; agreement
//! between them is what the acceptance tests measure.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::lse::LogSumExp;
use crate::maps::{Interval, JuliaStructure, SmoothIntervalMap};
use crate::numeric::gauss_legendre;
use crate::potentials::{
    birkhoff_sum, sup_birkhoff_average, verify_snbound, AveragedPotential, CompactSet, Potential,
    SupEstimate,
};
use crate::preimage::{preimage_tree_fold, preimages, FoldMode, TreeFoldResult};

/// Consecutive tree estimates closer than this count towards convergence.
pub const CONVERGENCE_STEP: f64 = 5e-3;
/// Number of consecutive small steps that declares convergence.
pub const CONVERGENCE_RUN: usize = 3;
pub const ULAM_MIN_BINS: usize = 64;
pub const ULAM_QUADRATURE_POINTS: usize = 32;
pub const ULAM_POLE_QUADRATURE_POINTS: usize = 64;
pub const POWER_ITERATION_TOL: f64 = 1e-10;
/// Margin by which the pressure must exceed the Birkhoff sup.
pub const HYPERBOLICITY_SLACK: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Tree,
    Ulam,
    Periodic,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostics {
    Tree(TreeFoldResult),
    Spectral {
        eigenvalue: f64,
        iterations: usize,
        residual: f64,
        nonzeros: usize,
    },
    Periodic {
        points: usize,
        annihilated: usize,
    },
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureEstimate {
    pub method: Method,
    pub value: ExtendedReal,
    /// Depth, number of bins, or period, depending on the method.
    pub size: usize,
    pub diagnostics: Diagnostics,
    pub map: String,
    pub potential: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreePressureRun {
    pub x: f64,
    pub estimates: Vec<PressureEstimate>,
    /// `|P_n − P_{n−1}|`, `None` for `n = 1`.
    pub cauchy_increments: Vec<Option<f64>>,
    /// Depth at which every path hit a pole, ending the sequence.
    pub truncated_at: Option<usize>,
    /// First `n` closing a run of small Cauchy increments.
    pub converged_at: Option<usize>,
}

impl TreePressureRun {
    pub fn last_value(&self) -> Option<f64> {
        self.estimates.last().and_then(|e| e.value.finite())
    }
}

/// `P_n = (1/n)·log Σ_{y ∈ f^{−n}(x)} exp(S_n(G)(y))` for `n = 1..=n_max`.
pub fn tree_pressure<P: Potential + ?Sized>(
    map: &SmoothIntervalMap,
    g: &P,
    x: f64,
    n_max: usize,
    mode: FoldMode,
) -> Result<TreePressureRun> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be >= 1".into()));
    }
    let mut estimates = Vec::with_capacity(n_max);
    let mut cauchy = Vec::with_capacity(n_max);
    let mut truncated_at = None;
    let mut converged_at = None;
    let mut run = 0;
    let mut prev: Option<f64> = None;
    for n in 1..=n_max {
        let fold = preimage_tree_fold(map, g, x, n, mode)?;
        let Some(log_sum) = fold.log_sum.finite() else {
            truncated_at = Some(n);
            break;
        };
        let value = log_sum / n as f64;
        let inc = prev.map(|p| (value - p).abs());
        if let Some(d) = inc {
            run = if d < CONVERGENCE_STEP { run + 1 } else { 0 };
            if run >= CONVERGENCE_RUN && converged_at.is_none() {
                converged_at = Some(n);
            }
        }
        cauchy.push(inc);
        prev = Some(value);
        estimates.push(PressureEstimate {
            method: Method::Tree,
            value: ExtendedReal::Finite(value),
            size: n,
            diagnostics: Diagnostics::Tree(fold),
            map: map.name().to_string(),
            potential: g.label(),
        });
    }
    Ok(TreePressureRun {
        x,
        estimates,
        cauchy_increments: cauchy,
        truncated_at,
        converged_at,
    })
}

/// A function on a uniform grid over an interval, linearly interpolated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub domain: Interval,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn constant(domain: Interval, value: f64) -> Self {
        GridFunction {
            domain,
            values: vec![value, value],
        }
    }

    pub fn sample<F: Fn(f64) -> f64>(domain: Interval, points: usize, f: F) -> Self {
        let m = points.max(2);
        let values = (0..m)
            .map(|i| f(domain.lo + domain.width() * i as f64 / (m - 1) as f64))
            .collect();
        GridFunction { domain, values }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let m = self.values.len();
        let t = ((x - self.domain.lo) / self.domain.width()).clamp(0.0, 1.0) * (m - 1) as f64;
        let i = (t.floor() as usize).min(m - 2);
        let s = t - i as f64;
        self.values[i] * (1.0 - s) + self.values[i + 1] * s
    }
}

/// `ℒ_G ψ(x) = Σ_{y ∈ f^{−1}(x)} exp(G(y))·ψ(y)`.
pub fn transfer_apply<P: Potential + ?Sized>(
    map: &SmoothIntervalMap,
    g: &P,
    psi: &GridFunction,
    x: f64,
) -> Result<f64> {
    if !map.in_domain(x) {
        let d = map.domain();
        return Err(Error::OutsideDomain { x, lo: d.lo, hi: d.hi });
    }
    Ok(preimages(map, x)
        .into_iter()
        .map(|y| g.eval(y).exp() * psi.eval(y))
        .sum())
}

/// Row-compressed nonnegative matrix.
#[derive(Debug, Clone)]
struct Csr {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Csr {
    fn mul(&self, v: &[f64], out: &mut [f64]) {
        out.iter_mut().enumerate().for_each(|(i, o)| {
            let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
            *o = self.cols[s..e]
                .iter()
                .zip(&self.vals[s..e])
                .map(|(&j, &a)| a * v[j])
                .sum();
        });
    }
}

/// Weighted Ulam matrix of `ℒ_G` on `bins` equal cells.
///
/// Row `i` averages `ℒ_G ψ` over cell `I_i` for piecewise-constant `ψ`:
/// `M[i][j] = (1/|I_i|) ∫_{I_i} Σ_{y ∈ f^{−1}(x) ∩ I_j} exp(G(y)) dx`, computed
/// by Gauss–Legendre quadrature in `x` on the branch inverses. Cells whose
/// preimages reach a pole get the finer rule.
fn ulam_matrix<P: Potential + ?Sized>(map: &SmoothIntervalMap, g: &P, bins: usize) -> Csr {
    let dom = map.domain();
    let h = dom.width() / bins as f64;
    let (x32, w32) = gauss_legendre(ULAM_QUADRATURE_POINTS);
    let (x64, w64) = gauss_legendre(ULAM_POLE_QUADRATURE_POINTS);
    let pole_images: Vec<f64> = g.poles().iter().map(|&c| map.apply(c)).collect();
    let cell_of = |y: f64| (((y - dom.lo) / h).floor().max(0.0) as usize).min(bins - 1);

    let rows: Vec<Vec<(usize, f64)>> = (0..bins)
        .into_par_iter()
        .map(|i| {
            let lo = dom.lo + h * i as f64;
            let hi = if i + 1 == bins { dom.hi } else { lo + h };
            let fine = pole_images.iter().any(|&p| p >= lo && p <= hi);
            let (nodes, weights) = if fine { (&x64, &w64) } else { (&x32, &w32) };
            let mut entries: Vec<(usize, f64)> = Vec::new();
            for (t, w) in nodes.iter().zip(weights) {
                let x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
                for y in preimages(map, x) {
                    entries.push((cell_of(y), 0.5 * w * g.eval(y).exp()));
                }
            }
            entries.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
            for (j, v) in entries {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += v,
                    _ => merged.push((j, v)),
                }
            }
            merged
        })
        .collect();

    let mut row_ptr = Vec::with_capacity(bins + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    row_ptr.push(0);
    for row in rows {
        for (j, v) in row {
            cols.push(j);
            vals.push(v);
        }
        row_ptr.push(cols.len());
    }
    Csr {
        row_ptr,
        cols,
        vals,
    }
}

/// `log λ` for the leading eigenvalue `λ` of the weighted Ulam matrix.
pub fn ulam_pressure<P: Potential + ?Sized>(
    map: &SmoothIntervalMap,
    g: &P,
    bins: usize,
    iters: usize,
) -> Result<PressureEstimate> {
    if bins < ULAM_MIN_BINS {
        return Err(Error::InvalidParameter(format!(
            "Ulam discretization needs at least {ULAM_MIN_BINS} bins (got {bins})"
        )));
    }
    if map.julia_structure() != JuliaStructure::FullInterval {
        return Err(Error::Unsupported(format!(
            "Ulam pressure needs a full-interval Julia set; {} is a Cantor repeller",
            map.name()
        )));
    }
    let m = ulam_matrix(map, g, bins);
    let mut v = vec![1.0 / bins as f64; bins];
    let mut w = vec![0.0; bins];
    let mut lambda = f64::NAN;
    let mut change = f64::INFINITY;
    let mut iterations = 0;
    for k in 1..=iters {
        m.mul(&v, &mut w);
        // v is a positive probability vector, so the 1-norm of Mv is the
        // Rayleigh-type estimate of λ.
        let next: f64 = w.iter().sum();
        if !(next > 0.0) || !next.is_finite() {
            return Err(Error::NoConvergence {
                iters: k,
                change: f64::NAN,
            });
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / next;
        }
        change = ((next - lambda) / next).abs();
        lambda = next;
        iterations = k;
        if change < POWER_ITERATION_TOL {
            break;
        }
    }
    if !(change < POWER_ITERATION_TOL) {
        return Err(Error::NoConvergence { iters, change });
    }
    m.mul(&v, &mut w);
    let residual = w
        .iter()
        .zip(&v)
        .map(|(wi, vi)| (wi - lambda * vi).abs())
        .sum::<f64>();
    Ok(PressureEstimate {
        method: Method::Ulam,
        value: ExtendedReal::Finite(lambda.ln()),
        size: bins,
        diagnostics: Diagnostics::Spectral {
            eigenvalue: lambda,
            iterations,
            residual,
            nonzeros: m.vals.len(),
        },
        map: map.name().to_string(),
        potential: g.label(),
    })
}

/// `(1/n)·log Σ_{f^n(p) = p} exp(S_n(G)(p))`.
pub fn periodic_orbit_pressure<P: Potential + ?Sized>(
    map: &SmoothIntervalMap,
    g: &P,
    n: usize,
) -> Result<PressureEstimate> {
    let points = map.periodic_points(n)?;
    if points.is_empty() {
        return Err(Error::NoPeriodicPoints(n));
    }
    let mut acc = LogSumExp::new();
    let mut annihilated = 0;
    for p in &points {
        let s = birkhoff_sum(g, map, p.point, n)?;
        if s.is_neg_infinity() {
            annihilated += 1;
        }
        acc.push(s);
    }
    let value = match acc.value() {
        ExtendedReal::Finite(v) => ExtendedReal::Finite(v / n as f64),
        ExtendedReal::NegInfinity => ExtendedReal::NegInfinity,
    };
    Ok(PressureEstimate {
        method: Method::Periodic,
        value,
        size: n,
        diagnostics: Diagnostics::Periodic {
            points: points.len(),
            annihilated,
        },
        map: map.name().to_string(),
        potential: g.label(),
    })
}

/// Closed-form pressure where one is known: constant potentials on maps
/// conjugate to the full two-shift, `P = log 2 + c`.
pub fn exact_pressure_constant(map: &SmoothIntervalMap, c: f64) -> Option<PressureEstimate> {
    (map.is_certified() && map.branches().len() == 2).then(|| PressureEstimate {
        method: Method::Exact,
        value: ExtendedReal::Finite(std::f64::consts::LN_2 + c),
        size: 0,
        diagnostics: Diagnostics::ClosedForm,
        map: map.name().to_string(),
        potential: format!("constant({c})"),
    })
}

/// Where a reference value of `P(f, G)` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum PressureOracle {
    Ulam { bins: usize, iters: usize },
    Periodic { n: usize },
    Value { value: f64 },
}

impl PressureOracle {
    pub fn estimate<P: Potential + ?Sized>(&self, map: &SmoothIntervalMap, g: &P) -> Result<f64> {
        let est = match *self {
            PressureOracle::Ulam { bins, iters } => ulam_pressure(map, g, bins, iters)?,
            PressureOracle::Periodic { n } => periodic_orbit_pressure(map, g, n)?,
            PressureOracle::Value { value } => return Ok(value),
        };
        est.value
            .finite()
            .ok_or_else(|| Error::Verification("pressure oracle returned -inf".into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Hyperbolic,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityReport {
    /// Smallest sampled `sup (1/n')·S_{n'}(G)` over `n' ≤ n`.
    pub sup_estimate: f64,
    pub pressure_estimate: f64,
    /// The `n'` achieving `sup_estimate`.
    pub n: usize,
    pub margin: f64,
    pub slack: f64,
    pub verdict: Verdict,
    pub sups: Vec<SupEstimate>,
}

/// Compares the sampled Birkhoff sup against an oracle pressure.
pub fn hyperbolicity_check<P: Potential + ?Sized>(
    map: &SmoothIntervalMap,
    g: &P,
    n: usize,
    grid_size: usize,
    oracle: &PressureOracle,
    slack: f64,
) -> Result<HyperbolicityReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let pressure = oracle.estimate(map, g)?;
    let sups = (1..=n)
        .map(|k| sup_birkhoff_average(g, map, k, grid_size))
        .collect::<Result<Vec<_>>>()?;
    let (best_n, best) = sups
        .iter()
        .enumerate()
        .map(|(i, s)| (i + 1, s.value.to_f64()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("n >= 1");
    let margin = pressure - best;
    Ok(HyperbolicityReport {
        sup_estimate: best,
        pressure_estimate: pressure,
        n: best_n,
        margin,
        slack,
        verdict: if margin > slack {
            Verdict::Hyperbolic
        } else {
            Verdict::Inconclusive
        },
        sups,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub n: usize,
    pub holds: bool,
    /// `log ℒ^n_{G̃}(1)(x)`.
    pub log_lhs: ExtendedReal,
    /// `C_K + n(P − ε)`.
    pub log_rhs: f64,
    pub c_k: f64,
    pub pressure: f64,
    pub epsilon: f64,
    pub fold: TreeFoldResult,
}

/// Tests `ℒ^n_{G̃}(1)(x) ≥ exp(C_K)·exp(n(P(f, G̃) − ε))` with `G̃ = (1/N) S_N(G)`.
///
/// `C_K` is the bound `(N − 1)(sup_K G − inf_K G)` on the orbit of `x`, and
/// `P(f, G̃) = P(f, G)` comes from `oracle`. The potential must pass the
/// hyperbolicity check at `N` against the same oracle.
#[allow(clippy::too_many_arguments)]
pub fn lower_bound_diagnostic<P: Potential + ?Sized>(
    map: &SmoothIntervalMap,
    g: &P,
    n_avg: usize,
    x: f64,
    n: usize,
    epsilon: f64,
    oracle: &PressureOracle,
    grid_size: usize,
) -> Result<LowerBoundReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let orbit = map.iterate(x, n + n_avg);
    if let Some(step) = orbit.escape_index {
        return Err(Error::Escape { x, step });
    }
    if let Some(y) = orbit.points.iter().find(|&&y| g.eval(y).is_neg_infinity()) {
        return Err(Error::Pole(format!("the orbit of {x} passes through the pole {y}")));
    }
    let pressure = oracle.estimate(map, g)?;
    let hyp = hyperbolicity_check(
        map,
        g,
        n_avg,
        grid_size,
        &PressureOracle::Value { value: pressure },
        HYPERBOLICITY_SLACK,
    )?;
    if hyp.verdict != Verdict::Hyperbolic {
        return Err(Error::Precondition(format!(
            "potential is not certified hyperbolic at N = {n_avg} (margin {})",
            hyp.margin
        )));
    }
    let avg = AveragedPotential::new(g, map, n_avg)?;
    let fold = preimage_tree_fold(map, &avg, x, n, FoldMode::Serial)?;
    let k_hat = CompactSet::Points {
        points: orbit.points[..=n].to_vec(),
    };
    let c_k = verify_snbound(g, map, n_avg, &k_hat, n)?.bound;
    let log_rhs = c_k + n as f64 * (pressure - epsilon);
    let holds = match fold.log_sum {
        ExtendedReal::Finite(l) => l >= log_rhs,
        ExtendedReal::NegInfinity => false,
    };
    Ok(LowerBoundReport {
        n,
        holds,
        log_lhs: fold.log_sum,
        log_rhs,
        c_k,
        pressure,
        epsilon,
        fold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::SingularPotential;
    use std::f64::consts::LN_2;

    fn cheb() -> SmoothIntervalMap {
        SmoothIntervalMap::chebyshev()
    }

    /// Number of depth-n preimage paths of x, by plain breadth-first expansion.
    fn brute_force_count(map: &SmoothIntervalMap, x: f64, n: usize) -> usize {
        let mut level = vec![x];
        for _ in 0..n {
            level = level.iter().flat_map(|&y| preimages(map, y)).collect();
        }
        level.len()
    }

    #[test]
    fn tree_pressure_trivial_potential() {
        let f = cheb();
        let run = tree_pressure(&f, &SingularPotential::zero(), 0.3, 12, FoldMode::Serial).unwrap();
        assert_eq!(run.estimates.len(), 12);
        for e in &run.estimates {
            assert!((e.value.to_f64() - LN_2).abs() < 1e-12);
        }
        assert_eq!(run.converged_at, Some(4));
        assert!(run.truncated_at.is_none());
    }

    #[test]
    fn tree_pressure_at_zero_loses_a_branch() {
        let f = cheb();
        let run = tree_pressure(&f, &SingularPotential::zero(), 0.0, 12, FoldMode::Serial).unwrap();
        for (k, e) in run.estimates.iter().enumerate() {
            let n = k + 1;
            let count = brute_force_count(&f, 0.0, n);
            assert!(count <= 1 << n);
            assert!(n == 1 || count < 1 << n);
            let want = (count as f64).ln() / n as f64;
            assert!((e.value.to_f64() - want).abs() < 1e-12);
            assert!(e.value.to_f64() <= LN_2 + 1e-15);
        }
        let v: Vec<f64> = run.estimates.iter().map(|e| e.value.to_f64()).collect();
        assert!(v[11] > v[3], "increasing towards log 2: {v:?}");
    }

    #[test]
    fn tree_pressure_on_repeller() {
        let l = SmoothIntervalMap::logistic(4.5).unwrap();
        let run = tree_pressure(&l, &SingularPotential::zero(), 0.3, 12, FoldMode::Serial).unwrap();
        assert!((run.last_value().unwrap() - LN_2).abs() < 1e-12);
    }

    #[test]
    fn tree_pressure_truncates_on_total_annihilation() {
        let f = cheb();
        let g = SingularPotential::geometric(&f, -1.0).unwrap();
        let run = tree_pressure(&f, &g, 1.0, 5, FoldMode::Serial).unwrap();
        assert_eq!(run.truncated_at, Some(1));
        assert!(run.estimates.is_empty());
    }

    #[test]
    fn transfer_examples() {
        let f = cheb();
        let one = GridFunction::constant(f.domain(), 1.0);
        let z = SingularPotential::zero();
        assert_eq!(transfer_apply(&f, &z, &one, 0.3).unwrap(), 2.0);
        assert_eq!(transfer_apply(&f, &z, &one, 1.0).unwrap(), 1.0);
        let g = SingularPotential::geometric(&f, -1.0).unwrap();
        assert!((transfer_apply(&f, &g, &one, 0.0).unwrap() - 8.0).abs() < 1e-13);
    }

    #[test]
    fn tree_matches_transfer_at_depth_one() {
        let f = cheb();
        let one = GridFunction::constant(f.domain(), 1.0);
        let pots = [
            SingularPotential::polynomial(vec![0.0, 0.5]),
            SingularPotential::geometric(&f, -0.5).unwrap(),
            SingularPotential::constant(-0.3),
        ];
        for g in &pots {
            for x in [0.05, 0.3, 0.61, 0.99] {
                let t = transfer_apply(&f, g, &one, x).unwrap();
                let run = tree_pressure(&f, g, x, 1, FoldMode::Serial).unwrap();
                let e = run.estimates[0].value.to_f64().exp();
                assert!(((e - t) / t).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn grid_function_interpolates() {
        let psi = GridFunction::sample(Interval::new(0.0, 1.0), 11, |x| 2.0 * x + 1.0);
        assert!((psi.eval(0.37) - 1.74).abs() < 1e-14);
        assert_eq!(psi.eval(1.0), 3.0);
    }

    #[test]
    fn ulam_examples() {
        let f = cheb();
        let e = ulam_pressure(&f, &SingularPotential::zero(), 1024, 10_000).unwrap();
        assert!((e.value.to_f64() - LN_2).abs() < 1e-2);
        let c0 = 0.7;
        let e = ulam_pressure(&f, &SingularPotential::constant(c0), 1024, 10_000).unwrap();
        assert!((e.value.to_f64() - LN_2 - c0).abs() < 1e-2);
        assert!(matches!(
            ulam_pressure(&f, &SingularPotential::zero(), 32, 100),
            Err(Error::InvalidParameter(_))
        ));
        let l = SmoothIntervalMap::logistic(4.5).unwrap();
        assert!(matches!(
            ulam_pressure(&l, &SingularPotential::zero(), 256, 100),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn periodic_examples() {
        let f = cheb();
        let e = periodic_orbit_pressure(&f, &SingularPotential::zero(), 10).unwrap();
        assert!((e.value.to_f64() - LN_2).abs() < 1e-14);
        let e = periodic_orbit_pressure(&f, &SingularPotential::constant(-1.25), 10).unwrap();
        assert!((e.value.to_f64() - (LN_2 - 1.25)).abs() < 1e-13);
        assert!(periodic_orbit_pressure(&f, &SingularPotential::zero(), 17).is_err());
    }

    #[test]
    fn constant_shift_covariance() {
        let f = cheb();
        let l = SmoothIntervalMap::logistic(4.5).unwrap();
        let c0 = 0.4;
        let base = [
            (f.clone(), SingularPotential::polynomial(vec![0.0, 0.5])),
            (f.clone(), SingularPotential::geometric(&f, -0.5).unwrap()),
            (l.clone(), SingularPotential::geometric(&l, -0.5).unwrap()),
        ];
        for (map, g) in &base {
            let s = g.shifted(c0);
            let a = tree_pressure(map, g, 0.3, 8, FoldMode::Serial).unwrap().last_value().unwrap();
            let b = tree_pressure(map, &s, 0.3, 8, FoldMode::Serial).unwrap().last_value().unwrap();
            assert!((b - a - c0).abs() < 1e-9);
            let a = periodic_orbit_pressure(map, g, 8).unwrap().value.to_f64();
            let b = periodic_orbit_pressure(map, &s, 8).unwrap().value.to_f64();
            assert!((b - a - c0).abs() < 1e-9);
            if map.julia_structure() == JuliaStructure::FullInterval {
                let a = ulam_pressure(map, g, 256, 10_000).unwrap().value.to_f64();
                let b = ulam_pressure(map, &s, 256, 10_000).unwrap().value.to_f64();
                assert!((b - a - c0).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn exact_constant_pressure() {
        let e = exact_pressure_constant(&cheb(), 0.5).unwrap();
        assert_eq!(e.value.to_f64(), LN_2 + 0.5);
        let p = SmoothIntervalMap::polynomial(vec![0.0, 4.0, -4.0], Interval::new(0.0, 1.0)).unwrap();
        assert!(exact_pressure_constant(&p, 0.0).is_none());
    }

    #[test]
    fn hyperbolicity_examples() {
        let f = cheb();
        let oracle = PressureOracle::Ulam { bins: 512, iters: 10_000 };
        let r = hyperbolicity_check(&f, &SingularPotential::zero(), 2, 201, &oracle, HYPERBOLICITY_SLACK).unwrap();
        assert_eq!(r.verdict, Verdict::Hyperbolic);
        assert!((r.margin - LN_2).abs() < 1e-2);

        let g = SingularPotential::constant(LN_2);
        let r = hyperbolicity_check(&f, &g, 2, 201, &oracle, HYPERBOLICITY_SLACK).unwrap();
        assert_eq!(r.verdict, Verdict::Hyperbolic);
        assert!((r.sup_estimate - LN_2).abs() < 1e-12);
        assert!((r.margin - LN_2).abs() < 1e-2);

        let r = hyperbolicity_check(
            &f,
            &SingularPotential::zero(),
            1,
            101,
            &PressureOracle::Value { value: 0.005 },
            HYPERBOLICITY_SLACK,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn lower_bound_examples() {
        let f = cheb();
        let oracle = PressureOracle::Value { value: LN_2 };
        let r = lower_bound_diagnostic(&f, &SingularPotential::zero(), 1, 0.3, 12, 0.1, &oracle, 101).unwrap();
        assert!(r.holds);
        assert!((r.log_lhs.to_f64() - 12.0 * LN_2).abs() < 1e-10);
        assert!((r.log_rhs - 12.0 * (LN_2 - 0.1)).abs() < 1e-12);
        assert_eq!(r.c_k, 0.0);

        let g = SingularPotential::polynomial(vec![0.0, 0.5]);
        let oracle = PressureOracle::Ulam { bins: 1024, iters: 10_000 };
        let r = lower_bound_diagnostic(&f, &g, 1, 0.3, 16, 0.05, &oracle, 101).unwrap();
        assert!(r.holds, "{r:?}");

        let geo = SingularPotential::geometric(&f, -1.0).unwrap();
        assert!(matches!(
            lower_bound_diagnostic(&f, &geo, 1, 0.5, 4, 0.1, &oracle, 101),
            Err(Error::Pole(_))
        ));
    }
}
