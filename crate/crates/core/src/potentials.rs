//! Potentials with logarithmic singularities at critical points, Birkhoff
//! sums, and the averaged potential `G̃ = (1/N) S_N(G)` together with the
//! coboundary that relates it to `G`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::maps::{Interval, JuliaStructure, SmoothIntervalMap};
use crate::numeric::poly_eval;

/// `|x − c|` below this counts as hitting the pole at `c`.
pub const POLE_SNAP_TOL: f64 = 1e-12;
/// Samples closer than this to a pole (along the relevant orbit segment) are
/// dropped from identity checks.
pub const IDENTITY_FILTER_DIST: f64 = 1e-6;
/// Absolute allowance for rounding in the sup-bound comparison.
pub const SNBOUND_ROUNDING: f64 = 1e-12;
/// Depth of the cylinder representatives used to grid a Cantor repeller.
pub const CANTOR_GRID_DEPTH: usize = 10;

/// The regular part `g` of a potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HoelderPart {
    Constant { value: f64 },
    Polynomial { coeffs: Vec<f64> },
    /// `offset + weight·log|x − center|`, for a center outside the Julia set.
    LogDistance { offset: f64, weight: f64, center: f64 },
}

impl HoelderPart {
    pub fn eval(&self, x: f64) -> ExtendedReal {
        match self {
            HoelderPart::Constant { value } => ExtendedReal::Finite(*value),
            HoelderPart::Polynomial { coeffs } => ExtendedReal::Finite(poly_eval(coeffs, x)),
            HoelderPart::LogDistance {
                offset,
                weight,
                center,
            } => {
                let d = (x - center).abs();
                if *weight == 0.0 {
                    ExtendedReal::Finite(*offset)
                } else if d == 0.0 {
                    // Only reachable off the Julia set.
                    ExtendedReal::Finite(if *weight > 0.0 { f64::MIN } else { f64::MAX })
                } else {
                    ExtendedReal::Finite(offset + weight * d.ln())
                }
            }
        }
    }

    fn shifted(&self, c0: f64) -> HoelderPart {
        match self {
            HoelderPart::Constant { value } => HoelderPart::Constant { value: value + c0 },
            HoelderPart::Polynomial { coeffs } => {
                let mut coeffs = coeffs.clone();
                if coeffs.is_empty() {
                    coeffs.push(0.0);
                }
                coeffs[0] += c0;
                HoelderPart::Polynomial { coeffs }
            }
            HoelderPart::LogDistance {
                offset,
                weight,
                center,
            } => HoelderPart::LogDistance {
                offset: offset + c0,
                weight: *weight,
                center: *center,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularTerm {
    pub c: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    User,
    Geometric { t: f64 },
}

/// Anything that can be summed along orbits: a value in `ℝ ∪ {−∞}` at each
/// point, with a finite pole set used for diagnostics.
pub trait Potential: Sync {
    fn eval(&self, x: f64) -> ExtendedReal;

    /// Points where the underlying singular terms blow up, sorted ascending.
    fn poles(&self) -> Vec<f64>;

    fn label(&self) -> String;
}

/// `G(x) = g(x) + Σ b(c)·log|x − c|` with every `b(c) ≥ 0` and every `c` a
/// critical point lying in the Julia set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularPotential {
    hoelder: HoelderPart,
    singular: Vec<SingularTerm>,
    provenance: Provenance,
}

impl SingularPotential {
    /// Builds a potential, rejecting anything outside class U.
    pub fn new(
        map: &SmoothIntervalMap,
        hoelder: HoelderPart,
        singular: Vec<SingularTerm>,
    ) -> Result<Self> {
        for term in &singular {
            if !term.b.is_finite() || term.b < 0.0 {
                return Err(Error::NotClassU(format!(
                    "log weight b = {} at c = {} must be finite and nonnegative",
                    term.b, term.c
                )));
            }
            let crit = map
                .critical_points()
                .iter()
                .find(|cp| (cp.location - term.c).abs() <= POLE_SNAP_TOL);
            match crit {
                None => {
                    return Err(Error::NotClassU(format!(
                        "pole at {} is not a critical point of {}",
                        term.c,
                        map.name()
                    )))
                }
                Some(cp) if !cp.in_julia => {
                    return Err(Error::NotClassU(format!(
                        "critical point {} of {} is not in the Julia set",
                        term.c,
                        map.name()
                    )))
                }
                Some(_) => {}
            }
        }
        let mut singular = singular;
        singular.sort_by(|a, b| a.c.total_cmp(&b.c));
        Ok(SingularPotential {
            hoelder,
            singular,
            provenance: Provenance::User,
        })
    }

    pub fn hoelder(part: HoelderPart) -> Self {
        SingularPotential {
            hoelder: part,
            singular: Vec::new(),
            provenance: Provenance::User,
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn constant(value: f64) -> Self {
        Self::hoelder(HoelderPart::Constant { value })
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Self::hoelder(HoelderPart::Polynomial { coeffs })
    }

    /// `G = −t·log|Df|` for the quadratic family, `t ≤ 0`.
    ///
    /// With `|Df(x)| = 2a·|x − 1/2|` this is a constant regular part
    /// `−t·log(2a)` plus the single term `(1/2, −t)`. When the critical point
    /// is not in the Julia set the log term is smooth on `J` and is stored in
    /// the regular part instead.
    pub fn geometric(map: &SmoothIntervalMap, t: f64) -> Result<Self> {
        if !t.is_finite() || t > 0.0 {
            return Err(Error::NotClassU(format!(
                "geometric potential needs t <= 0 (got t = {t})"
            )));
        }
        let a = map.quadratic_parameter().ok_or_else(|| {
            Error::Unsupported(format!(
                "geometric potential is only built for the quadratic family, not {}",
                map.name()
            ))
        })?;
        let weight = if t == 0.0 { 0.0 } else { -t };
        let offset = weight * (2.0 * a).ln();
        let crit_in_julia = map.critical_points().iter().all(|c| c.in_julia);
        let (hoelder, singular) = if weight == 0.0 {
            (HoelderPart::Constant { value: 0.0 }, Vec::new())
        } else if crit_in_julia {
            (
                HoelderPart::Constant { value: offset },
                vec![SingularTerm { c: 0.5, b: weight }],
            )
        } else {
            (
                HoelderPart::LogDistance {
                    offset,
                    weight,
                    center: 0.5,
                },
                Vec::new(),
            )
        };
        Ok(SingularPotential {
            hoelder,
            singular,
            provenance: Provenance::Geometric { t },
        })
    }

    pub fn hoelder_part(&self) -> &HoelderPart {
        &self.hoelder
    }

    pub fn singular_terms(&self) -> &[SingularTerm] {
        &self.singular
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `G + c0`.
    pub fn shifted(&self, c0: f64) -> Self {
        SingularPotential {
            hoelder: self.hoelder.shifted(c0),
            singular: self.singular.clone(),
            provenance: Provenance::User,
        }
    }

    /// `Λ(G) = {c : b(c) > 0}`, sorted ascending.
    pub fn singular_set(&self) -> Vec<f64> {
        self.singular
            .iter()
            .filter(|t| t.b > 0.0)
            .map(|t| t.c)
            .collect()
    }

    pub fn eval_potential(&self, x: f64) -> ExtendedReal {
        let mut v = self.hoelder.eval(x);
        for term in &self.singular {
            if term.b == 0.0 {
                continue;
            }
            let d = (x - term.c).abs();
            if d < POLE_SNAP_TOL {
                return ExtendedReal::NegInfinity;
            }
            v += ExtendedReal::Finite(term.b * d.ln());
        }
        v
    }
}

impl Potential for SingularPotential {
    fn eval(&self, x: f64) -> ExtendedReal {
        self.eval_potential(x)
    }

    fn poles(&self) -> Vec<f64> {
        self.singular_set()
    }

    fn label(&self) -> String {
        match self.provenance {
            Provenance::Geometric { t } => format!("geometric(t={t})"),
            Provenance::User => match (&self.hoelder, self.singular.is_empty()) {
                (HoelderPart::Constant { value }, true) => format!("constant({value})"),
                (HoelderPart::Polynomial { coeffs }, true) => format!("polynomial({coeffs:?})"),
                _ => "custom".to_string(),
            },
        }
    }
}

/// `G̃ := (1/N)·S_N(G)`. Its poles are the preimages of `Λ(G)` up to order
/// `N − 1`; they are never enumerated, each evaluation iterates forward.
#[derive(Debug, Clone)]
pub struct AveragedPotential<'a, P: Potential + ?Sized> {
    base: &'a P,
    map: &'a SmoothIntervalMap,
    n: usize,
}

impl<'a, P: Potential + ?Sized> AveragedPotential<'a, P> {
    pub fn new(base: &'a P, map: &'a SmoothIntervalMap, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("averaging length N must be >= 1".into()));
        }
        Ok(AveragedPotential { base, map, n })
    }

    pub fn length(&self) -> usize {
        self.n
    }
}

impl<P: Potential + ?Sized> Potential for AveragedPotential<'_, P> {
    fn eval(&self, x: f64) -> ExtendedReal {
        let mut y = x;
        let mut sum = ExtendedReal::ZERO;
        for j in 0..self.n {
            sum += self.base.eval(y);
            if sum.is_neg_infinity() {
                return sum;
            }
            if j + 1 < self.n {
                y = self.map.apply(y);
            }
        }
        sum.scale(1.0 / self.n as f64)
    }

    fn poles(&self) -> Vec<f64> {
        self.base.poles()
    }

    fn label(&self) -> String {
        format!("averaged(N={}, {})", self.n, self.base.label())
    }
}

/// `S_n(G)(x) = Σ_{j<n} G(f^j(x))`.
pub fn birkhoff_sum<P: Potential + ?Sized>(
    g: &P,
    map: &SmoothIntervalMap,
    x: f64,
    n: usize,
) -> Result<ExtendedReal> {
    if n == 0 {
        return Err(Error::InvalidParameter("Birkhoff sums need n >= 1".into()));
    }
    let mut y = x;
    let mut sum = ExtendedReal::ZERO;
    for step in 0..n {
        if !map.in_domain(y) {
            return Err(Error::Escape { x, step });
        }
        sum += g.eval(y);
        if sum.is_neg_infinity() {
            return Ok(sum);
        }
        y = map.apply(y);
    }
    Ok(sum)
}

/// `G̃(x) = (1/N)·S_N(G)(x)`.
pub fn averaged_potential_eval<P: Potential + ?Sized>(
    g: &P,
    map: &SmoothIntervalMap,
    n: usize,
    x: f64,
) -> Result<ExtendedReal> {
    if !map.in_domain(x) {
        let d = map.domain();
        return Err(Error::OutsideDomain { x, lo: d.lo, hi: d.hi });
    }
    Ok(AveragedPotential::new(g, map, n)?.eval(x))
}

/// `h(x) = −(1/N)·Σ_{j<N} (N−1−j)·G(f^j(x))`.
///
/// `None` marks a pole: some `G(f^j(x)) = −∞` enters with a positive weight,
/// so formally `h(x) = +∞`. Terms with weight zero (`j = N − 1`) are skipped.
pub fn coboundary_h<P: Potential + ?Sized>(
    g: &P,
    map: &SmoothIntervalMap,
    n: usize,
    x: f64,
) -> Result<Option<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("averaging length N must be >= 1".into()));
    }
    let mut y = x;
    let mut acc = 0.0;
    for j in 0..n.saturating_sub(1) {
        let w = (n - 1 - j) as f64;
        match g.eval(y) {
            ExtendedReal::NegInfinity => return Ok(None),
            ExtendedReal::Finite(v) => acc += w * v,
        }
        y = map.apply(y);
    }
    Ok(Some(-acc / n as f64))
}

fn dist_to_set(x: f64, set: &[f64]) -> f64 {
    set.iter()
        .map(|c| (x - c).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Whether the orbit segment `x, …, f^len(x)` stays in the domain and keeps
/// more than `dist` away from `poles`.
fn orbit_clear(map: &SmoothIntervalMap, poles: &[f64], x: f64, len: usize, dist: f64) -> bool {
    let orbit = map.iterate(x, len);
    orbit.escape_index.is_none() && orbit.points.iter().all(|&y| dist_to_set(y, poles) > dist)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohomologyCheck {
    pub max_residual: f64,
    pub samples_used: usize,
    pub samples_filtered: usize,
}

/// Max over samples of `|G̃(x) − (G(x) + h(x) − h(f(x)))|`.
pub fn verify_cohomology<P: Potential + ?Sized>(
    g: &P,
    map: &SmoothIntervalMap,
    n: usize,
    samples: &[f64],
) -> Result<CohomologyCheck> {
    let poles = g.poles();
    let avg = AveragedPotential::new(g, map, n)?;
    let mut max_residual: f64 = 0.0;
    let mut used = 0;
    for &x in samples {
        if !orbit_clear(map, &poles, x, n, IDENTITY_FILTER_DIST) {
            continue;
        }
        let (Some(gx), Some(tilde)) = (g.eval(x).finite(), avg.eval(x).finite()) else {
            continue;
        };
        let (Some(hx), Some(hfx)) = (coboundary_h(g, map, n, x)?, coboundary_h(g, map, n, map.apply(x))?) else {
            continue;
        };
        max_residual = max_residual.max((tilde - (gx + hx - hfx)).abs());
        used += 1;
    }
    if used == 0 {
        return Err(Error::NoSamples);
    }
    Ok(CohomologyCheck {
        max_residual,
        samples_used: used,
        samples_filtered: samples.len() - used,
    })
}

/// A compact set on which `S_n(G) − S_n(G̃)` is compared with its bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompactSet {
    /// Finite union of intervals, sampled on a uniform grid of `resolution`
    /// points per interval.
    Intervals { intervals: Vec<Interval>, resolution: usize },
    /// A finite set of points.
    Points { points: Vec<f64> },
    /// The closure of the forward orbits of `seeds` that stay at distance
    /// at least `delta` from the pole set. The set is forward invariant, so
    /// `sup_K G` and `inf_K G` are taken over every visited orbit point.
    AvoidingOrbits { seeds: Vec<f64>, delta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnBoundCheck {
    /// Sampled `sup_K |S_n(G) − S_n(G̃)|`.
    pub lhs: f64,
    /// `(N − 1)(sup_K G − inf_K G)`.
    pub bound: f64,
    pub sup_g: f64,
    pub inf_g: f64,
    /// Max of `|S_n(G̃) − S_n(G) − (h − h∘f^n)|`.
    pub telescoping_residual: f64,
    /// Max of `|S_n(G̃) − S_n(G) − (h∘f^n − h)|`, i.e. the telescoping sum
    /// with the opposite sign. Nonzero whenever `h` is not `f^n`-invariant.
    pub reversed_sign_residual: f64,
    pub samples_used: usize,
}

impl SnBoundCheck {
    /// `lhs ≤ bound`, up to [`SNBOUND_ROUNDING`] for floating-point noise
    /// (the bound is exactly zero for constant potentials).
    pub fn holds(&self) -> bool {
        self.lhs <= self.bound + SNBOUND_ROUNDING
    }
}

/// Compares `sup_K |S_n(G) − S_n(G̃)|` with `C_K = (N − 1)(sup_K G − inf_K G)`
/// and checks the telescoping identity `S_n(G̃) = S_n(G) + h − h∘f^n` at
/// every sample.
pub fn verify_snbound<P: Potential + ?Sized>(
    g: &P,
    map: &SmoothIntervalMap,
    n_avg: usize,
    k: &CompactSet,
    n: usize,
) -> Result<SnBoundCheck> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let poles = g.poles();
    let avg = AveragedPotential::new(g, map, n_avg)?;
    // Orbit length touched by S_n(G̃) and h∘f^n.
    let horizon = n + n_avg;

    let (samples, mut range_points): (Vec<f64>, Vec<f64>) = match k {
        CompactSet::Intervals {
            intervals,
            resolution,
        } => {
            let res = (*resolution).max(2);
            let pts: Vec<f64> = intervals
                .iter()
                .flat_map(|iv| {
                    (0..res).map(move |i| iv.lo + iv.width() * i as f64 / (res - 1) as f64)
                })
                .collect();
            (pts.clone(), pts)
        }
        CompactSet::Points { points } => (points.clone(), points.clone()),
        CompactSet::AvoidingOrbits { seeds, delta } => {
            let mut kept = Vec::new();
            let mut visited = Vec::new();
            for &s in seeds {
                let orbit = map.iterate(s, horizon);
                if orbit.escape_index.is_none()
                    && orbit.points.iter().all(|&y| dist_to_set(y, &poles) >= *delta)
                {
                    kept.push(s);
                    visited.extend_from_slice(&orbit.points);
                }
            }
            (kept, visited)
        }
    };
    if samples.is_empty() {
        return Err(Error::NoSamples);
    }
    for &x in &samples {
        if !map.in_domain(x) {
            let d = map.domain();
            return Err(Error::OutsideDomain { x, lo: d.lo, hi: d.hi });
        }
        for (j, y) in map.iterate(x, n_avg.saturating_sub(1)).points.into_iter().enumerate() {
            if g.eval(y).is_neg_infinity() {
                return Err(Error::Pole(format!(
                    "f^{j}({x}) = {y} is a pole; K must avoid the first {n_avg} preimages of the singular set"
                )));
            }
        }
    }

    range_points.retain(|&y| map.in_domain(y));
    let mut sup_g = f64::NEG_INFINITY;
    let mut inf_g = f64::INFINITY;
    for &y in &range_points {
        let v = g.eval(y).finite().ok_or_else(|| {
            Error::Pole(format!("{y} is a pole inside K"))
        })?;
        sup_g = sup_g.max(v);
        inf_g = inf_g.min(v);
    }

    let mut lhs: f64 = 0.0;
    let mut tele: f64 = 0.0;
    let mut reversed: f64 = 0.0;
    for &x in &samples {
        let sn_g = birkhoff_sum(g, map, x, n)?
            .finite()
            .ok_or_else(|| Error::Pole(format!("S_n(G) is -inf at {x}")))?;
        let sn_tilde = birkhoff_sum(&avg, map, x, n)?
            .finite()
            .ok_or_else(|| Error::Pole(format!("S_n(G~) is -inf at {x}")))?;
        let fnx = map.iterate_to(x, n)?;
        let (Some(hx), Some(hfnx)) = (coboundary_h(g, map, n_avg, x)?, coboundary_h(g, map, n_avg, fnx)?) else {
            return Err(Error::Pole(format!("h is infinite along the orbit of {x}")));
        };
        lhs = lhs.max((sn_g - sn_tilde).abs());
        tele = tele.max((sn_tilde - sn_g - (hx - hfnx)).abs());
        reversed = reversed.max((sn_tilde - sn_g - (hfnx - hx)).abs());
    }

    Ok(SnBoundCheck {
        lhs,
        bound: (n_avg as f64 - 1.0) * (sup_g - inf_g),
        sup_g,
        inf_g,
        telescoping_residual: tele,
        reversed_sign_residual: reversed,
        samples_used: samples.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    /// Best sampled value of `(1/n)·S_n(G)`; a lower estimate of the true sup.
    pub value: ExtendedReal,
    pub argmax: Option<f64>,
    pub n: usize,
    pub grid_size: usize,
    pub refined_points: usize,
    /// Depth of the cylinder representatives when the Julia set is a Cantor set.
    pub cylinder_depth: Option<usize>,
}

/// Sampled `sup_J (1/n)·S_n(G)`.
///
/// For a full-interval Julia set this is a uniform grid over the domain,
/// refined once around its top decile. For a Cantor repeller the grid is the
/// set of depth-10 cylinder representatives (preimages of the nonzero fixed
/// point), refined by depth-4 representatives inside the top decile.
pub fn sup_birkhoff_average<P: Potential + ?Sized>(
    g: &P,
    map: &SmoothIntervalMap,
    n: usize,
    grid_size: usize,
) -> Result<SupEstimate> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let avg_at = |x: f64| -> Option<f64> {
        birkhoff_sum(g, map, x, n)
            .ok()
            .and_then(|s| s.finite())
            .map(|s| s / n as f64)
    };

    type Refine<'r> = Box<dyn Fn(&[f64]) -> Vec<f64> + 'r>;
    let (coarse, refine, depth): (Vec<f64>, Refine, Option<usize>) =
        match map.julia_structure() {
            JuliaStructure::FullInterval => {
                let dom = map.domain();
                let m = grid_size.max(2);
                let step = dom.width() / (m - 1) as f64;
                let pts = (0..m).map(|i| dom.lo + step * i as f64).collect();
                let refine = Box::new(move |tops: &[f64]| {
                    tops.iter()
                        .flat_map(|&x| {
                            (1..16).map(move |k| x - step + 2.0 * step * k as f64 / 16.0)
                        })
                        .filter(|y| dom.contains(*y))
                        .collect()
                });
                (pts, refine, None)
            }
            JuliaStructure::CantorRepeller => {
                let base = repeller_base_point(map)?;
                let words = map.cylinder_words(CANTOR_GRID_DEPTH);
                let pts = words
                    .iter()
                    .filter_map(|w| map.pull_back_word(w, base))
                    .collect();
                let sub = map.cylinder_words(4);
                let map_ref = map;
                let refine = Box::new(move |tops: &[f64]| {
                    let mut out = Vec::new();
                    for &x in tops {
                        // Recover the depth-10 word of x from its forward itinerary.
                        let Some(word) = map_ref.itinerary(x, CANTOR_GRID_DEPTH) else {
                            continue;
                        };
                        for s in &sub {
                            if let Some(z) = map_ref.pull_back_word(s, base) {
                                if let Some(y) = map_ref.pull_back_word(&word, z) {
                                    out.push(y);
                                }
                            }
                        }
                    }
                    out
                });
                (pts, refine, Some(CANTOR_GRID_DEPTH))
            }
        };

    let mut scored: Vec<(f64, f64)> = coarse
        .iter()
        .filter_map(|&x| avg_at(x).map(|v| (v, x)))
        .collect();
    let grid = coarse.len();
    if scored.is_empty() {
        return Ok(SupEstimate {
            value: ExtendedReal::NegInfinity,
            argmax: None,
            n,
            grid_size: grid,
            refined_points: 0,
            cylinder_depth: depth,
        });
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let top = (scored.len() / 10).max(1);
    let tops: Vec<f64> = scored[..top].iter().map(|s| s.1).collect();
    let extra = refine(&tops);
    let refined = extra.len();
    scored.extend(extra.into_iter().filter_map(|x| avg_at(x).map(|v| (v, x))));
    let best = scored
        .iter()
        .copied()
        .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)))
        .expect("nonempty");
    Ok(SupEstimate {
        value: ExtendedReal::Finite(best.0),
        argmax: Some(best.1),
        n,
        grid_size: grid,
        refined_points: refined,
        cylinder_depth: depth,
    })
}

/// A point of the Julia set used as the root of cylinder representatives:
/// the largest fixed point.
pub fn repeller_base_point(map: &SmoothIntervalMap) -> Result<f64> {
    let fixed = map.periodic_points(1)?;
    fixed
        .last()
        .map(|p| p.point)
        .ok_or(Error::NoPeriodicPoints(1))
}

/// Points spread over the Julia set: a uniform grid for full-interval maps,
/// cylinder representatives of the given depth for Cantor repellers.
pub fn julia_samples(map: &SmoothIntervalMap, count: usize, cylinder_depth: usize) -> Result<Vec<f64>> {
    match map.julia_structure() {
        JuliaStructure::FullInterval => {
            let dom = map.domain();
            let m = count.max(2);
            Ok((0..m)
                .map(|i| dom.lo + dom.width() * i as f64 / (m - 1) as f64)
                .collect())
        }
        JuliaStructure::CantorRepeller => {
            let base = repeller_base_point(map)?;
            let words = map.cylinder_words(cylinder_depth);
            let stride = (words.len() / count.max(1)).max(1);
            let mut pts: Vec<f64> = words
                .iter()
                .step_by(stride)
                .filter_map(|w| map.pull_back_word(w, base))
                .collect();
            pts.sort_by(f64::total_cmp);
            Ok(pts)
        }
    }
}

/// Default `K` for the sup-bound check.
///
/// Hölder potentials on a full interval use `[0.05, 0.45] ∪ [0.55, 0.95]`
/// (rescaled to the domain). With poles, a fixed interval is not enough: the
/// bound involves `G` along `f^j(x)` for `j` up to `n + N`, so `K` is taken
/// forward invariant, made of grid orbits staying 0.02 away from the poles.
/// On a Cantor repeller `K` is a set of cylinder representatives.
pub fn standard_compact_set<P: Potential + ?Sized>(map: &SmoothIntervalMap, g: &P) -> Result<CompactSet> {
    match map.julia_structure() {
        JuliaStructure::FullInterval if g.poles().is_empty() => {
            let d = map.domain();
            let at = |s: f64| d.lo + s * d.width();
            Ok(CompactSet::Intervals {
                intervals: vec![Interval::new(at(0.05), at(0.45)), Interval::new(at(0.55), at(0.95))],
                resolution: 200,
            })
        }
        JuliaStructure::FullInterval => Ok(CompactSet::AvoidingOrbits {
            seeds: julia_samples(map, 400, 0)?,
            delta: 0.02,
        }),
        JuliaStructure::CantorRepeller => Ok(CompactSet::Points {
            points: julia_samples(map, 128, CANTOR_GRID_DEPTH)?,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn cheb() -> SmoothIntervalMap {
        SmoothIntervalMap::chebyshev()
    }

    #[test]
    fn eval_examples() {
        let f = cheb();
        let g = SingularPotential::geometric(&f, -1.0).unwrap();
        assert!(g.eval_potential(0.5).is_neg_infinity());
        assert!(g.eval_potential(0.5 + 1e-13).is_neg_infinity());
        let v = g.eval_potential(0.0).to_f64();
        assert!((v - 4f64.ln()).abs() < 1e-15);
        assert_eq!(SingularPotential::zero().eval_potential(0.37).to_f64(), 0.0);
    }

    #[test]
    fn geometric_decomposition() {
        let f = cheb();
        let g = SingularPotential::geometric(&f, -1.0).unwrap();
        assert_eq!(g.hoelder_part(), &HoelderPart::Constant { value: 8f64.ln() });
        assert_eq!(g.singular_terms(), &[SingularTerm { c: 0.5, b: 1.0 }]);
        let g0 = SingularPotential::geometric(&f, 0.0).unwrap();
        assert!(g0.singular_set().is_empty());
        assert_eq!(g0.eval_potential(0.3).to_f64(), 0.0);
        assert!(matches!(
            SingularPotential::geometric(&f, 0.5),
            Err(Error::NotClassU(_))
        ));

        let l = SmoothIntervalMap::logistic(4.5).unwrap();
        let gl = SingularPotential::geometric(&l, -0.5).unwrap();
        assert!(gl.singular_set().is_empty());
        let x = 0.2;
        let want = 0.5 * l.apply_deriv(x).abs().ln();
        assert!((gl.eval_potential(x).to_f64() - want).abs() < 1e-14);
    }

    #[test]
    fn geometric_matches_log_derivative() {
        for f in [cheb(), SmoothIntervalMap::logistic(4.5).unwrap()] {
            for t in [-0.25, -0.5, -1.0, -2.0] {
                let g = SingularPotential::geometric(&f, t).unwrap();
                for i in 0..=2000 {
                    let x = i as f64 / 2000.0;
                    if (x - 0.5).abs() <= 1e-6 {
                        continue;
                    }
                    let want = -t * f.apply_deriv(x).abs().ln();
                    let got = g.eval_potential(x).to_f64();
                    assert!((got - want).abs() < 1e-12, "t={t} x={x}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn singular_sets() {
        let f = cheb();
        assert_eq!(SingularPotential::geometric(&f, -0.5).unwrap().singular_set(), vec![0.5]);
        assert!(SingularPotential::polynomial(vec![0.0, 0.5]).singular_set().is_empty());
        assert!(SingularPotential::geometric(&f, 0.0).unwrap().singular_set().is_empty());
        // b = 0 is allowed but is not a pole.
        let g = SingularPotential::new(
            &f,
            HoelderPart::Constant { value: 1.0 },
            vec![SingularTerm { c: 0.5, b: 0.0 }],
        )
        .unwrap();
        assert!(g.singular_set().is_empty());
        assert_eq!(g.eval_potential(0.5).to_f64(), 1.0);
    }

    #[test]
    fn class_u_gate() {
        let f = cheb();
        let neg = SingularPotential::new(
            &f,
            HoelderPart::Constant { value: 0.0 },
            vec![SingularTerm { c: 0.5, b: -1.0 }],
        );
        assert!(matches!(neg, Err(Error::NotClassU(_))));
        let off = SingularPotential::new(
            &f,
            HoelderPart::Constant { value: 0.0 },
            vec![SingularTerm { c: 0.3, b: 1.0 }],
        );
        assert!(matches!(off, Err(Error::NotClassU(_))));
        let l = SmoothIntervalMap::logistic(4.5).unwrap();
        let outside = SingularPotential::new(
            &l,
            HoelderPart::Constant { value: 0.0 },
            vec![SingularTerm { c: 0.5, b: 1.0 }],
        );
        assert!(matches!(outside, Err(Error::NotClassU(_))));
    }

    #[test]
    fn weight_vanishes_continuously_at_pole() {
        let f = cheb();
        for t in [-0.5, -1.0] {
            let g = SingularPotential::geometric(&f, t).unwrap();
            for sign in [-1.0, 1.0] {
                let w: Vec<f64> = (4..=12)
                    .map(|k| g.eval_potential(0.5 + sign * 10f64.powi(-k)).exp())
                    .collect();
                assert!(w.windows(2).all(|p| p[1] < p[0]), "{w:?}");
                assert!(*w.last().unwrap() < 1e-5);
            }
        }
    }

    #[test]
    fn birkhoff_examples() {
        let f = cheb();
        let z = SingularPotential::zero();
        for n in 1..6 {
            assert_eq!(birkhoff_sum(&z, &f, 0.123, n).unwrap().to_f64(), 0.0);
        }
        let g = SingularPotential::geometric(&f, -1.0).unwrap();
        let s = birkhoff_sum(&g, &f, 0.75, 2).unwrap().to_f64();
        assert!((s - 2.0 * LN_2).abs() < 1e-14);
        assert!(birkhoff_sum(&g, &f, 0.5, 1).unwrap().is_neg_infinity());

        let l = SmoothIntervalMap::logistic(4.5).unwrap();
        assert!(matches!(
            birkhoff_sum(&z, &l, 0.5, 3),
            Err(Error::Escape { step: 1, .. })
        ));
    }

    #[test]
    fn coboundary_examples() {
        let f = cheb();
        let g = SingularPotential::geometric(&f, -1.0).unwrap();
        assert_eq!(coboundary_h(&g, &f, 1, 0.5).unwrap(), Some(0.0));
        assert_eq!(coboundary_h(&g, &f, 1, 0.3).unwrap(), Some(0.0));
        let c0 = 1.7;
        let h = coboundary_h(&SingularPotential::constant(c0), &f, 3, 0.42).unwrap().unwrap();
        assert!((h + c0).abs() < 1e-15);
        let h = coboundary_h(&g, &f, 2, 0.75).unwrap().unwrap();
        assert!((h + 0.5 * LN_2).abs() < 1e-15);
        // Positive weight on a pole gives the pole marker.
        assert_eq!(coboundary_h(&g, &f, 2, 0.5).unwrap(), None);
    }

    #[test]
    fn averaged_examples() {
        let f = cheb();
        let g = SingularPotential::geometric(&f, -1.0).unwrap();
        for x in [0.1, 0.3, 0.77] {
            assert_eq!(
                averaged_potential_eval(&g, &f, 1, x).unwrap(),
                g.eval_potential(x)
            );
        }
        let x = (2.0 + 2f64.sqrt()) / 4.0;
        assert!(averaged_potential_eval(&g, &f, 2, x).unwrap().is_neg_infinity());
        assert_eq!(
            averaged_potential_eval(&SingularPotential::zero(), &f, 5, 0.6).unwrap().to_f64(),
            0.0
        );
        assert!(averaged_potential_eval(&g, &f, 2, 1.2).is_err());
    }

    #[test]
    fn cohomology_examples() {
        let f = cheb();
        let samples: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        let g = SingularPotential::geometric(&f, -0.5).unwrap();
        let r = verify_cohomology(&g, &f, 1, &samples).unwrap();
        assert_eq!(r.max_residual, 0.0);
        let r = verify_cohomology(&g, &f, 3, &samples).unwrap();
        assert!(r.max_residual < 1e-10, "{r:?}");
        let p = SingularPotential::polynomial(vec![0.0, 0.5]);
        let r = verify_cohomology(&p, &f, 4, &samples).unwrap();
        assert!(r.max_residual < 1e-10);
        assert_eq!(r.samples_used, 100);
        // Everything filtered.
        assert!(matches!(
            verify_cohomology(&g, &f, 2, &[0.5]),
            Err(Error::NoSamples)
        ));
    }

    #[test]
    fn snbound_examples() {
        let f = cheb();
        let k = CompactSet::Intervals {
            intervals: vec![Interval::new(0.05, 0.45), Interval::new(0.55, 0.95)],
            resolution: 200,
        };
        let c = verify_snbound(&SingularPotential::constant(2.5), &f, 3, &k, 10).unwrap();
        assert!(c.lhs < 1e-12 && c.bound == 0.0, "{c:?}");

        let p = SingularPotential::polynomial(vec![0.0, 0.5]);
        let c = verify_snbound(&p, &f, 3, &k, 10).unwrap();
        assert!(c.holds(), "{c:?}");
        assert!(c.telescoping_residual < 1e-8);
        // n < N: telescoping still exact with the same h.
        let c = verify_snbound(&p, &f, 5, &k, 2).unwrap();
        assert!(c.telescoping_residual < 1e-8);
        assert!(c.reversed_sign_residual > 1e-3);

        let g = SingularPotential::geometric(&f, -1.0).unwrap();
        let bad = CompactSet::Points { points: vec![0.5] };
        assert!(matches!(verify_snbound(&g, &f, 2, &bad, 3), Err(Error::Pole(_))));
    }

    #[test]
    fn sup_examples() {
        let f = cheb();
        let s = sup_birkhoff_average(&SingularPotential::zero(), &f, 3, 101).unwrap();
        assert_eq!(s.value.to_f64(), 0.0);
        let s = sup_birkhoff_average(&SingularPotential::constant(-5.0), &f, 4, 101).unwrap();
        assert!((s.value.to_f64() + 5.0).abs() < 1e-14);
        let g = SingularPotential::geometric(&f, -1.0).unwrap();
        let s = sup_birkhoff_average(&g, &f, 1, 1001).unwrap();
        assert!((s.value.to_f64() - 4f64.ln()).abs() < 1e-12, "{s:?}");

        let l = SmoothIntervalMap::logistic(4.5).unwrap();
        let s = sup_birkhoff_average(&SingularPotential::zero(), &l, 5, 0).unwrap();
        assert_eq!(s.value.to_f64(), 0.0);
        assert_eq!(s.cylinder_depth, Some(CANTOR_GRID_DEPTH));
    }

    #[test]
    fn shift_changes_only_constant() {
        let f = cheb();
        let g = SingularPotential::geometric(&f, -0.5).unwrap();
        let s = g.shifted(0.25);
        for x in [0.1, 0.2, 0.9] {
            let d = s.eval_potential(x).to_f64() - g.eval_potential(x).to_f64();
            assert!((d - 0.25).abs() < 1e-15);
        }
        assert_eq!(s.singular_set(), g.singular_set());
    }
}
