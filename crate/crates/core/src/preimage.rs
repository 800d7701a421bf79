//! Branchwise inversion, preimage-tree folds in the log domain, and
//! Λ-normality certificates.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::lse::LogSumExp;
use crate::maps::{SmoothIntervalMap, PREIMAGE_MERGE_TOL};
use crate::potentials::Potential;

/// Deepest preimage tree a fold will enumerate.
pub const TREE_DEPTH_CAP: usize = 24;
/// Depth at which the parallel fold cuts the tree into independent tasks.
/// Fixed, so the reduction order does not depend on the thread count.
pub const PARALLEL_SPLIT_DEPTH: usize = 5;

/// All `y` with `f(y) = x`, sorted ascending, one per branch whose image
/// contains `x`. Coincident roots at a critical value are merged.
pub fn preimages(map: &SmoothIntervalMap, x: f64) -> Vec<f64> {
    let mut out: Vec<f64> = (0..map.branches().len())
        .filter_map(|b| map.branch_inverse(b, x))
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|b, a| (*a - *b).abs() < PREIMAGE_MERGE_TOL);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FoldMode {
    #[default]
    Serial,
    #[serde(alias = "parallel")]
    ParallelDeterministic,
}

/// `log Σ_{y ∈ f^{−n}(x)} exp(S_n(G)(y))` together with path accounting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeFoldResult {
    pub depth: usize,
    pub log_sum: ExtendedReal,
    /// Number of depth-`n` preimage paths, including annihilated ones.
    pub leaf_count: u64,
    /// Paths that pass through a pole and contribute zero weight.
    pub pole_hits: u64,
    /// Closest approach of a surviving path point to the pole set
    /// (`None` when there are no poles).
    pub min_pole_distance: Option<f64>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Copy)]
struct Accum {
    lse: LogSumExp,
    leaves: u64,
    pole_hits: u64,
    min_dist: f64,
}

impl Accum {
    fn new() -> Self {
        Accum {
            lse: LogSumExp::new(),
            leaves: 0,
            pole_hits: 0,
            min_dist: f64::INFINITY,
        }
    }

    fn merge(&mut self, other: &Accum) {
        self.lse.merge(&other.lse);
        self.leaves += other.leaves;
        self.pole_hits += other.pole_hits;
        self.min_dist = self.min_dist.min(other.min_dist);
    }
}

/// A node of the preimage tree: its point and the path weight accumulated
/// from the root (`−∞` once the path has hit a pole).
#[derive(Debug, Clone, Copy)]
struct Node {
    point: f64,
    weight: ExtendedReal,
}

struct Folder<'a, P: Potential + ?Sized> {
    map: &'a SmoothIntervalMap,
    g: &'a P,
    poles: Vec<f64>,
}

impl<P: Potential + ?Sized> Folder<'_, P> {
    fn dist(&self, y: f64) -> f64 {
        self.poles
            .iter()
            .map(|c| (y - c).abs())
            .fold(f64::INFINITY, f64::min)
    }

    fn children(&self, node: Node, acc: &mut Accum) -> Vec<Node> {
        preimages(self.map, node.point)
            .into_iter()
            .map(|y| {
                let weight = if node.weight.is_neg_infinity() {
                    ExtendedReal::NegInfinity
                } else {
                    let w = node.weight + self.g.eval(y);
                    if !w.is_neg_infinity() {
                        acc.min_dist = acc.min_dist.min(self.dist(y));
                    }
                    w
                };
                Node { point: y, weight }
            })
            .collect()
    }

    fn leaf(&self, node: Node, acc: &mut Accum) {
        acc.leaves += 1;
        match node.weight {
            ExtendedReal::NegInfinity => acc.pole_hits += 1,
            w => acc.lse.push(w),
        }
    }

    fn descend(&self, node: Node, remaining: usize, acc: &mut Accum) {
        if remaining == 0 {
            self.leaf(node, acc);
            return;
        }
        for child in self.children(node, acc) {
            self.descend(child, remaining - 1, acc);
        }
    }

    /// Breadth-first expansion to `depth`, in canonical (ascending) order.
    fn frontier(&self, root: Node, depth: usize, acc: &mut Accum) -> Vec<Node> {
        let mut level = vec![root];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(level.len() * 2);
            for node in level {
                next.extend(self.children(node, acc));
            }
            level = next;
        }
        level
    }
}

/// Folds the depth-`n` preimage tree of `x`.
///
/// Path weights are the Birkhoff sums `G(y_n) + … + G(y_1)` along
/// `y_n ↦ … ↦ y_1 ↦ x`. A path touching a pole keeps being enumerated (so
/// `leaf_count` counts every path) but contributes exactly zero.
pub fn preimage_tree_fold<P: Potential + ?Sized>(
    map: &SmoothIntervalMap,
    g: &P,
    x: f64,
    n: usize,
    mode: FoldMode,
) -> Result<TreeFoldResult> {
    if n > TREE_DEPTH_CAP {
        return Err(Error::CapExceeded {
            what: "tree depth",
            requested: n,
            cap: TREE_DEPTH_CAP,
        });
    }
    if !map.in_domain(x) {
        let d = map.domain();
        return Err(Error::OutsideDomain { x, lo: d.lo, hi: d.hi });
    }
    let start = Instant::now();
    let folder = Folder {
        map,
        g,
        poles: g.poles(),
    };
    let root = Node {
        point: x,
        weight: ExtendedReal::ZERO,
    };
    let mut acc = Accum::new();
    match mode {
        FoldMode::Serial => folder.descend(root, n, &mut acc),
        FoldMode::ParallelDeterministic => {
            let split = n.min(PARALLEL_SPLIT_DEPTH);
            let frontier = folder.frontier(root, split, &mut acc);
            let parts: Vec<Accum> = frontier
                .par_iter()
                .map(|&node| {
                    let mut local = Accum::new();
                    folder.descend(node, n - split, &mut local);
                    local
                })
                .collect();
            for part in &parts {
                acc.merge(part);
            }
        }
    }
    Ok(TreeFoldResult {
        depth: n,
        log_sum: acc.lse.value(),
        leaf_count: acc.leaves,
        pole_hits: acc.pole_hits,
        min_pole_distance: acc.min_dist.is_finite().then_some(acc.min_dist),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityCertificate {
    pub point: f64,
    pub depth: usize,
    pub epsilon: f64,
    pub normal: bool,
    /// `[y, f(y), …, f^{n−1}(y)]` with `f^n(y) = x`, when normal.
    pub witness: Option<Vec<f64>>,
    /// First depth at which every path had been pruned, when not normal.
    pub blocking_depth: Option<usize>,
}

/// Searches the depth-`n` preimage tree of `x` for a path whose points all
/// stay farther than `eps` from `lambda`.
pub fn lambda_normal(
    map: &SmoothIntervalMap,
    lambda: &[f64],
    x: f64,
    n: usize,
    eps: f64,
) -> Result<NormalityCertificate> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive (got {eps})")));
    }
    if !map.in_domain(x) {
        let d = map.domain();
        return Err(Error::OutsideDomain { x, lo: d.lo, hi: d.hi });
    }
    let blocked = |y: f64| lambda.iter().any(|c| (y - c).abs() <= eps);

    fn search(
        map: &SmoothIntervalMap,
        blocked: &dyn Fn(f64) -> bool,
        y: f64,
        remaining: usize,
        depth: usize,
        path: &mut Vec<f64>,
        deepest: &mut usize,
    ) -> bool {
        *deepest = (*deepest).max(depth);
        if remaining == 0 {
            return true;
        }
        for z in preimages(map, y) {
            if blocked(z) {
                continue;
            }
            path.push(z);
            if search(map, blocked, z, remaining - 1, depth + 1, path, deepest) {
                return true;
            }
            path.pop();
        }
        false
    }

    let mut path = Vec::with_capacity(n);
    let mut deepest = 0;
    let normal = search(map, &blocked, x, n, 0, &mut path, &mut deepest);
    Ok(if normal {
        path.reverse();
        NormalityCertificate {
            point: x,
            depth: n,
            epsilon: eps,
            normal: true,
            witness: Some(path),
            blocking_depth: None,
        }
    } else {
        NormalityCertificate {
            point: x,
            depth: n,
            epsilon: eps,
            normal: false,
            witness: None,
            blocking_depth: Some(deepest + 1),
        }
    })
}
