//! Smooth multimodal interval maps with explicit branch structure.
//!
//! Two certified families are built in: the full quadratic map `4x(1−x)` on
//! `[0, 1]` (conjugate to the tent map) and the logistic family `a·x(1−x)` for
//! `a ≥ 4.4`, whose invariant set is a uniformly expanding Cantor repeller.
//! User polynomials are accepted but flagged as uncertified.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{bisect, poly_derivative, poly_eval, safeguarded_newton};

/// Largest period accepted by [`SmoothIntervalMap::periodic_points`].
pub const PERIODIC_CAP: usize = 16;
/// Points closer than this are treated as the same periodic point.
pub const PERIODIC_DEDUP_TOL: f64 = 1e-9;
/// Residual target for numeric branch inversion.
pub const ROOT_TOL: f64 = 1e-13;
/// Two preimages closer than this are merged (tangency at a critical value).
pub const PREIMAGE_MERGE_TOL: f64 = 1e-12;
/// Smallest logistic parameter for which the repeller is certified here.
pub const LOGISTIC_MIN_PARAMETER: f64 = 4.4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: f64,
    /// Order of the local model `|φ|^ℓ`.
    pub order: u32,
    /// Whether the critical point lies in the Julia set.
    pub in_julia: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseRule {
    /// `(1 − √(1 − 4x/a))/2`, written in the cancellation-free form.
    QuadraticLower { a: f64 },
    /// `(1 + √(1 − 4x/a))/2`.
    QuadraticUpper { a: f64 },
    /// Bracketed Newton/bisection on the branch interval.
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneBranch {
    pub interval: Interval,
    pub orientation: Orientation,
    pub image: Interval,
    pub inverse: InverseRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JuliaStructure {
    FullInterval,
    CantorRepeller,
}

/// Conjugacy `h(θ) = sin²(πθ/2)` between the tent map and `4x(1−x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conjugacy {
    TentSine,
}

impl Conjugacy {
    pub fn h(&self, theta: f64) -> f64 {
        let s = (0.5 * PI * theta).sin();
        s * s
    }

    pub fn tent(&self, theta: f64) -> f64 {
        if theta <= 0.5 {
            2.0 * theta
        } else {
            2.0 - 2.0 * theta
        }
    }

    /// All `2^n` tent-map points with `T^n(θ) = θ`, as exact rationals `num/den`.
    pub fn tent_periodic_angles(&self, n: usize) -> Vec<(u64, u64)> {
        let p = 1u64 << n;
        let mut out = Vec::with_capacity(p as usize);
        for k in 0..p / 2 {
            out.push((2 * k, p - 1));
        }
        for k in 1..=p / 2 {
            out.push((2 * k, p + 1));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Rule {
    Quadratic { a: f64 },
    Polynomial { coeffs: Vec<f64>, dcoeffs: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPoint {
    pub point: f64,
    /// Computed from a closed-form conjugacy rather than by root isolation.
    pub exact: bool,
}

/// An orbit segment `[x, f(x), …, f^n(x)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub points: Vec<f64>,
    /// First index whose point lies outside the domain.
    pub escape_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothIntervalMap {
    name: String,
    domain: Interval,
    rule: Rule,
    critical_points: Vec<CriticalPoint>,
    branches: Vec<MonotoneBranch>,
    julia: JuliaStructure,
    conjugacy: Option<Conjugacy>,
    certified: bool,
}

impl SmoothIntervalMap {
    /// The full quadratic map `x ↦ 4x(1−x)` on `[0, 1]`.
    pub fn chebyshev() -> Self {
        let mut map = Self::quadratic(4.0, JuliaStructure::FullInterval, true);
        map.name = "chebyshev".to_string();
        map.conjugacy = Some(Conjugacy::TentSine);
        map
    }

    /// `x ↦ a·x(1−x)` on `[0, 1]` with `a ≥ 4.4`.
    pub fn logistic(a: f64) -> Result<Self> {
        if !(a >= LOGISTIC_MIN_PARAMETER) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "logistic parameter a = {a} is below the certified bound {LOGISTIC_MIN_PARAMETER}"
            )));
        }
        let mut map = Self::quadratic(a, JuliaStructure::CantorRepeller, false);
        map.name = format!("logistic(a={a})");
        Ok(map)
    }

    fn quadratic(a: f64, julia: JuliaStructure, crit_in_julia: bool) -> Self {
        let domain = Interval::new(0.0, 1.0);
        let image = Interval::new(0.0, a / 4.0);
        SmoothIntervalMap {
            name: String::new(),
            domain,
            rule: Rule::Quadratic { a },
            critical_points: vec![CriticalPoint {
                location: 0.5,
                order: 2,
                in_julia: crit_in_julia,
            }],
            branches: vec![
                MonotoneBranch {
                    interval: Interval::new(0.0, 0.5),
                    orientation: Orientation::Increasing,
                    image,
                    inverse: InverseRule::QuadraticLower { a },
                },
                MonotoneBranch {
                    interval: Interval::new(0.5, 1.0),
                    orientation: Orientation::Decreasing,
                    image,
                    inverse: InverseRule::QuadraticUpper { a },
                },
            ],
            julia,
            conjugacy: None,
            certified: true,
        }
    }

    /// A user polynomial `Σ coeffs[k] x^k` on `domain`. The map must send the
    /// domain into itself; class membership is not verified.
    pub fn polynomial(coeffs: Vec<f64>, domain: Interval) -> Result<Self> {
        if coeffs.len() < 3 || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "polynomial maps need finite coefficients and degree at least 2".into(),
            ));
        }
        if !(domain.lo < domain.hi) || !domain.lo.is_finite() || !domain.hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "invalid domain [{}, {}]",
                domain.lo, domain.hi
            )));
        }
        let dcoeffs = poly_derivative(&coeffs);
        let criticals = isolate_roots(&dcoeffs, domain);
        let mut critical_points = Vec::with_capacity(criticals.len());
        for &c in &criticals {
            critical_points.push(CriticalPoint {
                location: c,
                order: critical_order(&coeffs, c),
                in_julia: true,
            });
        }
        if critical_points.is_empty() {
            return Err(Error::InvalidParameter(
                "polynomial has no critical point in the interior of the domain".into(),
            ));
        }

        let mut cuts = vec![domain.lo];
        cuts.extend(criticals.iter().copied());
        cuts.push(domain.hi);
        let mut branches = Vec::with_capacity(cuts.len() - 1);
        for w in cuts.windows(2) {
            let iv = Interval::new(w[0], w[1]);
            let d_mid = poly_eval(&dcoeffs, iv.midpoint());
            let orientation = if d_mid > 0.0 {
                Orientation::Increasing
            } else {
                Orientation::Decreasing
            };
            let (fa, fb) = (poly_eval(&coeffs, iv.lo), poly_eval(&coeffs, iv.hi));
            let image = Interval::new(fa.min(fb), fa.max(fb));
            if image.lo < domain.lo - ROOT_TOL || image.hi > domain.hi + ROOT_TOL {
                return Err(Error::Unsupported(format!(
                    "polynomial maps [{}, {}] outside the domain",
                    image.lo, image.hi
                )));
            }
            let image = Interval::new(image.lo.max(domain.lo), image.hi.min(domain.hi));
            branches.push(MonotoneBranch {
                interval: iv,
                orientation,
                image,
                inverse: InverseRule::Numeric,
            });
        }

        Ok(SmoothIntervalMap {
            name: format!("polynomial({coeffs:?})"),
            domain,
            rule: Rule::Polynomial { coeffs, dcoeffs },
            critical_points,
            branches,
            julia: JuliaStructure::FullInterval,
            conjugacy: None,
            certified: false,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn critical_points(&self) -> &[CriticalPoint] {
        &self.critical_points
    }

    pub fn branches(&self) -> &[MonotoneBranch] {
        &self.branches
    }

    pub fn julia_structure(&self) -> JuliaStructure {
        self.julia
    }

    pub fn conjugacy(&self) -> Option<Conjugacy> {
        self.conjugacy
    }

    /// `false` for user-supplied polynomials: membership in the admissible
    /// class of maps has not been checked.
    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Parameter `a` for the quadratic family.
    pub fn quadratic_parameter(&self) -> Option<f64> {
        match self.rule {
            Rule::Quadratic { a } => Some(a),
            Rule::Polynomial { .. } => None,
        }
    }

    pub fn in_domain(&self, x: f64) -> bool {
        self.domain.contains(x)
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if self.in_domain(x) {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                x,
                lo: self.domain.lo,
                hi: self.domain.hi,
            })
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.apply(x))
    }

    pub fn deriv(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.apply_deriv(x))
    }

    /// `f(x)` without the domain check; the formula is defined on all of ℝ.
    pub fn apply(&self, x: f64) -> f64 {
        match &self.rule {
            Rule::Quadratic { a } => a * x * (1.0 - x),
            Rule::Polynomial { coeffs, .. } => poly_eval(coeffs, x),
        }
    }

    pub fn apply_deriv(&self, x: f64) -> f64 {
        match &self.rule {
            Rule::Quadratic { a } => a - 2.0 * a * x,
            Rule::Polynomial { dcoeffs, .. } => poly_eval(dcoeffs, x),
        }
    }

    pub fn iterate(&self, x: f64, n: usize) -> Orbit {
        let mut points = Vec::with_capacity(n + 1);
        let mut escape_index = None;
        let mut y = x;
        for k in 0..=n {
            if escape_index.is_none() && !self.in_domain(y) {
                escape_index = Some(k);
            }
            points.push(y);
            if k < n {
                y = self.apply(y);
            }
        }
        Orbit {
            points,
            escape_index,
        }
    }

    /// `f^n(x)`, failing if the orbit leaves the domain.
    pub fn iterate_to(&self, x: f64, n: usize) -> Result<f64> {
        let mut y = x;
        for step in 0..=n {
            if !self.in_domain(y) {
                return Err(Error::Escape { x, step });
            }
            if step < n {
                y = self.apply(y);
            }
        }
        Ok(y)
    }

    /// `|Df^n(p)|` along the orbit of `p`.
    pub fn cycle_derivative(&self, p: f64, n: usize) -> f64 {
        let mut y = p;
        let mut d = 1.0;
        for _ in 0..n {
            d *= self.apply_deriv(y);
            y = self.apply(y);
        }
        d.abs()
    }

    /// Index of the branch containing `x`; the lower index wins at shared endpoints.
    pub fn branch_of(&self, x: f64) -> Option<usize> {
        self.branches.iter().position(|b| b.interval.contains(x))
    }

    /// The point of branch `idx` mapped to `x`, if `x` is in the branch image.
    pub fn branch_inverse(&self, idx: usize, x: f64) -> Option<f64> {
        let branch = &self.branches[idx];
        if !branch.image.contains(x) {
            return None;
        }
        match branch.inverse {
            InverseRule::QuadraticLower { a } => {
                let s = (1.0 - 4.0 * x / a).max(0.0).sqrt();
                Some(2.0 * x / (a * (1.0 + s)))
            }
            InverseRule::QuadraticUpper { a } => {
                let s = (1.0 - 4.0 * x / a).max(0.0).sqrt();
                Some(0.5 * (1.0 + s))
            }
            InverseRule::Numeric => {
                let iv = branch.interval;
                safeguarded_newton(
                    |y| self.apply(y) - x,
                    |y| self.apply_deriv(y),
                    iv.lo,
                    iv.hi,
                    ROOT_TOL,
                )
                .map(|y| y.clamp(iv.lo, iv.hi))
            }
        }
    }

    /// Image of an interval under the inverse of branch `idx`.
    fn pull_back_interval(&self, idx: usize, iv: Interval) -> Option<Interval> {
        let branch = &self.branches[idx];
        let clipped = iv.intersect(&branch.image)?;
        let u = self.branch_inverse(idx, clipped.lo)?;
        let v = self.branch_inverse(idx, clipped.hi)?;
        Some(Interval::new(u.min(v), u.max(v)))
    }

    /// Exact values that recur in the dynamics of the built-in maps (fixed
    /// points, the critical point and its orbit). Used to snap numerically
    /// computed points back onto their algebraic values.
    pub fn landmarks(&self) -> Vec<f64> {
        let mut pts = vec![self.domain.lo, self.domain.hi];
        pts.extend(self.critical_points.iter().map(|c| c.location));
        if let Rule::Quadratic { a } = self.rule {
            pts.push(1.0 - 1.0 / a);
            if self.conjugacy.is_some() {
                pts.push(0.25);
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Replaces `x` by a landmark within `tol`, if any.
    pub fn snap(&self, x: f64, tol: f64) -> f64 {
        self.landmarks()
            .into_iter()
            .find(|l| (x - l).abs() < tol)
            .unwrap_or(x)
    }

    /// All solutions of `f^n(p) = p` in the Julia set, sorted ascending.
    pub fn periodic_points(&self, n: usize) -> Result<Vec<PeriodicPoint>> {
        if n == 0 {
            return Err(Error::InvalidParameter("period must be at least 1".into()));
        }
        if n > PERIODIC_CAP {
            return Err(Error::CapExceeded {
                what: "period",
                requested: n,
                cap: PERIODIC_CAP,
            });
        }
        let mut points = match self.conjugacy {
            Some(conj) => conj
                .tent_periodic_angles(n)
                .into_iter()
                .map(|(num, den)| PeriodicPoint {
                    point: conj.h(num as f64 / den as f64),
                    exact: true,
                })
                .collect(),
            None => self
                .periodic_points_by_isolation(n)
                .into_iter()
                .map(|point| PeriodicPoint {
                    point,
                    exact: false,
                })
                .collect::<Vec<_>>(),
        };
        points.sort_by(|a, b| a.point.total_cmp(&b.point));
        points.dedup_by(|b, a| (a.point - b.point).abs() < PERIODIC_DEDUP_TOL);
        Ok(points)
    }

    /// Fixed points of `f^n` located one itinerary at a time. For each word
    /// `w` the composite inverse branch `φ_w` maps an interval `D_w` onto the
    /// cylinder `C_w`; a fixed point of `f^n` with itinerary `w` is a root of
    /// `φ_w(y) − y` on `D_w`.
    pub fn periodic_points_by_isolation(&self, n: usize) -> Vec<f64> {
        let mut word = vec![0usize; n];
        let mut out = Vec::new();
        self.isolate_words(n, self.domain, &mut word, &mut out);
        out
    }

    fn isolate_words(
        &self,
        remaining: usize,
        cylinder: Interval,
        word: &mut [usize],
        out: &mut Vec<f64>,
    ) {
        if remaining == 0 {
            if let Some(p) = self.fixed_point_on_word(word, cylinder) {
                out.push(p);
            }
            return;
        }
        let pos = remaining - 1;
        for b in 0..self.branches.len() {
            if let Some(next) = self.pull_back_interval(b, cylinder) {
                word[pos] = b;
                self.isolate_words(remaining - 1, next, word, out);
            }
        }
    }

    /// `φ_{w_0} ∘ … ∘ φ_{w_{d−1}}(z)`: the point whose first `d` iterates lie
    /// in branches `w_0, …, w_{d−1}` and whose `d`-th iterate is `z`.
    pub fn pull_back_word(&self, word: &[usize], z: f64) -> Option<f64> {
        let mut y = z;
        for &b in word.iter().rev() {
            y = self.branch_inverse(b, y)?;
        }
        Some(y)
    }

    /// Branch indices of `x, f(x), …, f^{d−1}(x)`.
    pub fn itinerary(&self, x: f64, depth: usize) -> Option<Vec<usize>> {
        let mut y = x;
        let mut word = Vec::with_capacity(depth);
        for _ in 0..depth {
            word.push(self.branch_of(y)?);
            y = self.apply(y);
        }
        Some(word)
    }

    /// All branch words of the given length, in lexicographic order.
    pub fn cylinder_words(&self, depth: usize) -> Vec<Vec<usize>> {
        let k = self.branches.len();
        let mut words: Vec<Vec<usize>> = vec![Vec::with_capacity(depth)];
        for _ in 0..depth {
            words = words
                .into_iter()
                .flat_map(|w| {
                    (0..k).map(move |b| {
                        let mut v = w.clone();
                        v.push(b);
                        v
                    })
                })
                .collect();
        }
        words
    }

    fn fixed_point_on_word(&self, word: &[usize], cylinder: Interval) -> Option<f64> {
        let n = word.len();
        let (u, v) = (self.apply_n(cylinder.lo, n), self.apply_n(cylinder.hi, n));
        let reach = Interval::new(u.min(v), u.max(v)).intersect(&self.domain)?;
        let g = |y: f64| match self.pull_back_word(word, y) {
            Some(z) => z - y,
            None => f64::NAN,
        };
        let (g_lo, g_hi) = (g(reach.lo), g(reach.hi));
        if g_lo.is_nan() || g_hi.is_nan() {
            return None;
        }
        let y = bisect(g, reach.lo, reach.hi)?;
        let p = self.pull_back_word(word, y)?;
        // The composite inverse contracts towards the cycle point for
        // expanding maps; a few extra applications clean up the last bits.
        let mut q = p;
        for _ in 0..4 {
            match self.pull_back_word(word, q) {
                Some(r) if reach.contains(q) => q = r,
                _ => break,
            }
        }
        let q = if (self.apply_n(q, n) - q).abs() <= (self.apply_n(p, n) - p).abs() {
            q
        } else {
            p
        };
        ((self.apply_n(q, n) - q).abs() < 1e-6).then_some(q)
    }

    fn apply_n(&self, x: f64, n: usize) -> f64 {
        (0..n).fold(x, |y, _| self.apply(y))
    }
}

/// Interior roots of a polynomial on `domain` by sign-change scanning.
fn isolate_roots(coeffs: &[f64], domain: Interval) -> Vec<f64> {
    const SCAN: usize = 4096;
    let dcoeffs = poly_derivative(coeffs);
    let h = domain.width() / SCAN as f64;
    let mut roots: Vec<f64> = Vec::new();
    let mut prev_x = domain.lo;
    let mut prev = poly_eval(coeffs, prev_x);
    for i in 1..=SCAN {
        let x = if i == SCAN { domain.hi } else { domain.lo + h * i as f64 };
        let v = poly_eval(coeffs, x);
        if prev == 0.0 && i > 1 {
            roots.push(prev_x);
        } else if prev.signum() != v.signum() && v != 0.0 && prev != 0.0 {
            if let Some(r) = safeguarded_newton(
                |t| poly_eval(coeffs, t),
                |t| poly_eval(&dcoeffs, t),
                prev_x,
                x,
                1e-15,
            ) {
                roots.push(r);
            }
        }
        prev_x = x;
        prev = v;
    }
    roots.retain(|&r| r > domain.lo && r < domain.hi);
    roots.dedup_by(|b, a| (*a - *b).abs() < PREIMAGE_MERGE_TOL);
    roots
}

fn critical_order(coeffs: &[f64], c: f64) -> u32 {
    let mut d = poly_derivative(coeffs);
    let mut order = 1;
    while !d.is_empty() {
        d = poly_derivative(&d);
        order += 1;
        if poly_eval(&d, c).abs() > 1e-9 {
            return order;
        }
    }
    order
}
