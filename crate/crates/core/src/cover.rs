//! Visibility covers of the grid A_n = {0..n}^2: a cover is a set of
//! observers such that every grid point is visible from at least one
//! observer other than itself. Provides the greedy cover, the exact minimum
//! for small grids, blind spots invisible from a given point set, and the
//! general size bounds ln n / (2 ln ln n) < f(n) < 4 ln n.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::primes_first;
use crate::error::{Error, Result};
use crate::hidden_forest::{crt_solve, CrtSystem};
use crate::visibility::Point;
use crate::{BigLatticePoint, LatticePoint};

/// The square grid A_n = {0, ..., n}^2, axes and origin included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: u64,
}

impl Grid {
    pub fn new(n: u64) -> Result<Grid> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "grid bound n must be at least 1".into(),
            ));
        }
        Ok(Grid { n })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Points per side, n + 1.
    pub fn side(&self) -> u64 {
        self.n + 1
    }

    pub fn point_count(&self) -> u64 {
        self.side() * self.side()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        p.x >= 0 && p.y >= 0 && p.x as u64 <= self.n && p.y as u64 <= self.n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMethod {
    Greedy,
    Exact,
    Explicit,
}

impl CoverMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoverMethod::Greedy => "greedy",
            CoverMethod::Exact => "exact",
            CoverMethod::Explicit => "explicit",
        }
    }
}

impl fmt::Display for CoverMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An observer set for A_n. `complete` is recomputed from scratch by the
/// pairwise predicate, never assumed from the search that built the set.
#[derive(Debug, Clone)]
pub struct CoverSolution {
    pub n: u64,
    pub method: CoverMethod,
    pub points: Vec<LatticePoint>,
    /// Newly covered points per selection step; empty for exact solutions.
    pub step_gains: Vec<u64>,
    pub complete: bool,
}

impl CoverSolution {
    pub fn size(&self) -> u64 {
        self.points.len() as u64
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "method": self.method.as_str(),
            "size": self.size(),
            "points": self.points.iter().map(|p| json!([p.x, p.y])).collect::<Vec<_>>(),
            "complete": self.complete,
        })
    }
}

/// All points of the grid visible from p, in row-major (lexicographic)
/// order. p itself is never in the set.
pub fn visible_set(p: &LatticePoint, grid: &Grid) -> Result<Vec<LatticePoint>> {
    if !grid.contains(p) {
        return Err(Error::InvalidArgument(format!(
            "observer {p} lies outside the grid [0, {}]^2",
            grid.n()
        )));
    }
    let n = grid.n() as i64;
    let mut out = Vec::new();
    for x in 0..=n {
        let dx = (x - p.x).unsigned_abs();
        for y in 0..=n {
            let dy = (y - p.y).unsigned_abs();
            if dx.gcd(&dy) == 1 {
                out.push(Point::new(x, y));
            }
        }
    }
    Ok(out)
}

/// First grid point no observer sees, in row-major order; None means the
/// observers form a complete cover. Checks run through raw pairwise gcds.
pub fn first_uncovered(
    grid: &Grid,
    observers: &[LatticePoint],
) -> Result<Option<LatticePoint>> {
    for ob in observers {
        if !grid.contains(ob) {
            return Err(Error::InvalidArgument(format!(
                "observer {ob} lies outside the grid [0, {}]^2",
                grid.n()
            )));
        }
    }
    let n = grid.n() as i64;
    for x in 0..=n {
        for y in 0..=n {
            let q = Point::new(x, y);
            let seen = observers.iter().any(|p| {
                *p != q && (p.x - x).unsigned_abs().gcd(&(p.y - y).unsigned_abs()) == 1
            });
            if !seen {
                return Ok(Some(q));
            }
        }
    }
    Ok(None)
}

/// Whether the observers see every point of the grid.
pub fn verify_cover(grid: &Grid, observers: &[LatticePoint]) -> Result<bool> {
    Ok(first_uncovered(grid, observers)?.is_none())
}

/// Hard cap on the greedy grid bound; the first candidate sweep costs about
/// (n+1)^4 / 64 word operations, which passes a minute near n = 2000.
pub const GREEDY_GRID_CAP: u64 = 2000;

// Greedy state over bit rows. Coverage of a candidate (px, py) against
// target row qx is a contiguous window of the kernel row for d = |px - qx|:
// kernel bit j says gcd(d, |n - j|) = 1, so the window starting at n - py
// aligns bit qy with gcd(d, |py - qy|). Row d = 0 leaves only |dy| = 1 set
// and never marks the candidate's own cell, since gcd(0, 0) = 0.
struct GreedyEngine {
    n: usize,
    side: usize,
    words: usize,
    kernel_words: usize,
    kernel: Vec<u64>,
    uncovered: Vec<u64>,
    row_pop: Vec<u32>,
    remaining: u64,
}

impl GreedyEngine {
    fn new(n: usize) -> Self {
        let side = n + 1;
        let words = side.div_ceil(64);
        // One spare word so shifted two-word reads stay in bounds.
        let kernel_words = (2 * n + 1).div_ceil(64) + 1;
        let mut kernel = vec![0u64; side * kernel_words];
        for d in 0..side {
            let row = &mut kernel[d * kernel_words..(d + 1) * kernel_words];
            for j in 0..=2 * n {
                let e = (n as i64 - j as i64).unsigned_abs();
                if (d as u64).gcd(&e) == 1 {
                    row[j / 64] |= 1u64 << (j % 64);
                }
            }
        }
        let mut uncovered = vec![0u64; side * words];
        for x in 0..side {
            let row = &mut uncovered[x * words..(x + 1) * words];
            for y in 0..side {
                row[y / 64] |= 1u64 << (y % 64);
            }
        }
        GreedyEngine {
            n,
            side,
            words,
            kernel_words,
            kernel,
            uncovered,
            row_pop: vec![side as u32; side],
            remaining: (side * side) as u64,
        }
    }

    #[inline]
    fn window_word(&self, d: usize, base: usize, wi: usize) -> u64 {
        let ks = &self.kernel[d * self.kernel_words..];
        let off = base / 64;
        let sh = base % 64;
        if sh == 0 {
            ks[off + wi]
        } else {
            (ks[off + wi] >> sh) | (ks[off + wi + 1] << (64 - sh))
        }
    }

    /// Uncovered points the candidate would newly see.
    fn gain(&self, px: usize, py: usize) -> u64 {
        let base = self.n - py;
        let mut acc = 0u64;
        for qx in 0..self.side {
            if self.row_pop[qx] == 0 {
                continue;
            }
            let d = px.abs_diff(qx);
            let row = &self.uncovered[qx * self.words..(qx + 1) * self.words];
            for (wi, &u) in row.iter().enumerate() {
                if u != 0 {
                    acc += (u & self.window_word(d, base, wi)).count_ones() as u64;
                }
            }
        }
        acc
    }

    /// Marks everything the candidate sees as covered; returns the gain.
    fn apply(&mut self, px: usize, py: usize) -> u64 {
        let base = self.n - py;
        let mut removed = 0u64;
        for qx in 0..self.side {
            if self.row_pop[qx] == 0 {
                continue;
            }
            let d = px.abs_diff(qx);
            for wi in 0..self.words {
                let hit =
                    self.uncovered[qx * self.words + wi] & self.window_word(d, base, wi);
                if hit != 0 {
                    self.uncovered[qx * self.words + wi] &= !hit;
                    let c = hit.count_ones();
                    self.row_pop[qx] -= c;
                    removed += c as u64;
                }
            }
        }
        self.remaining -= removed;
        removed
    }

    // Lazy greedy: cached gains are upper bounds because coverage only
    // shrinks the uncovered set; a candidate is selected only when its gain
    // was recomputed against the current state. Ties break to the smallest
    // row-major index, i.e. the lexicographically smallest point.
    fn run(mut self) -> CoverSolution {
        let side = self.side;
        let total = side * side;
        let mut points: Vec<LatticePoint> = Vec::new();
        let mut step_gains: Vec<u64> = Vec::new();

        // The first observer is pinned at the origin.
        let g = self.apply(0, 0);
        points.push(Point::new(0, 0));
        step_gains.push(g);

        if self.remaining > 0 {
            let mut bound = vec![0u64; total];
            let mut fresh = vec![1u32; total];
            let mut heap: BinaryHeap<(u64, Reverse<u32>)> = BinaryHeap::with_capacity(total);
            for idx in 0..total {
                let g = self.gain(idx / side, idx % side);
                bound[idx] = g;
                if g > 0 {
                    heap.push((g, Reverse(idx as u32)));
                }
            }
            let mut step: u32 = 1;
            while self.remaining > 0 {
                let (g, Reverse(idx)) = heap
                    .pop()
                    .expect("an uncovered point always has a positive-gain neighbor");
                let i = idx as usize;
                if g != bound[i] {
                    continue; // superseded by a later recomputation
                }
                let (px, py) = (i / side, i % side);
                if fresh[i] == step {
                    let removed = self.apply(px, py);
                    debug_assert_eq!(removed, g);
                    points.push(Point::new(px as i64, py as i64));
                    step_gains.push(removed);
                    bound[i] = 0;
                    step += 1;
                } else {
                    let g2 = self.gain(px, py);
                    bound[i] = g2;
                    fresh[i] = step;
                    if g2 > 0 {
                        heap.push((g2, Reverse(idx)));
                    }
                }
            }
        }

        CoverSolution {
            n: self.n as u64,
            method: CoverMethod::Greedy,
            points,
            step_gains,
            complete: true, // replaced by re-verification in greedy_cover
        }
    }
}

/// Greedy cover of A_n: starts at the origin, then repeatedly takes the
/// point covering the most still-uncovered points, breaking ties toward the
/// lexicographically smallest point. Runs until everything is covered.
pub fn greedy_cover(grid: &Grid) -> Result<CoverSolution> {
    let n = grid.n();
    if n > GREEDY_GRID_CAP {
        return Err(Error::Budget(format!(
            "greedy cover is capped at n <= {GREEDY_GRID_CAP}, got n = {n}"
        )));
    }
    let mut sol = GreedyEngine::new(n as usize).run();
    sol.complete = verify_cover(grid, &sol.points)?;
    Ok(sol)
}

/// Grids the exact search accepts; (n+1)^2 must fit a u128 coverage mask.
pub const EXACT_GRID_CAP: u64 = 8;

fn exact_dfs(
    masks: &[u128],
    full: u128,
    max_gain: usize,
    start: usize,
    slots: usize,
    acc: u128,
    chosen: &mut Vec<usize>,
) -> bool {
    if acc == full {
        return true;
    }
    if slots == 0 {
        return false;
    }
    let missing = (full & !acc).count_ones() as usize;
    if missing > slots * max_gain || masks.len() - start < slots {
        return false;
    }
    for idx in start..masks.len() {
        if masks[idx] & !acc == 0 {
            continue; // contributes nothing here, so no minimum cover needs it
        }
        chosen.push(idx);
        if exact_dfs(masks, full, max_gain, idx + 1, slots - 1, acc | masks[idx], chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Minimum cover of A_n for n <= 8 by iterative deepening over cover sizes.
/// Candidates are explored in row-major order, so the first complete set is
/// the lexicographically smallest among the minimum-size solutions.
pub fn exact_min_cover(grid: &Grid) -> Result<CoverSolution> {
    let n = grid.n();
    if n > EXACT_GRID_CAP {
        return Err(Error::Budget(format!(
            "exact minimum cover is capped at n <= {EXACT_GRID_CAP}, got n = {n}; \
             greedy_cover handles larger grids"
        )));
    }
    let side = (n + 1) as usize;
    let count = side * side;
    let coord = |i: usize| (i / side, i % side);
    let masks: Vec<u128> = (0..count)
        .map(|i| {
            let (px, py) = coord(i);
            let mut m = 0u128;
            for (j, mask_bit) in (0..count).map(|j| (j, 1u128 << j)) {
                let (qx, qy) = coord(j);
                if i != j && px.abs_diff(qx).gcd(&py.abs_diff(qy)) == 1 {
                    m |= mask_bit;
                }
            }
            m
        })
        .collect();
    let full = (1u128 << count) - 1;
    let max_gain = masks.iter().map(|m| m.count_ones()).max().unwrap() as usize;

    for s in 1..=count {
        let mut chosen = Vec::with_capacity(s);
        if exact_dfs(&masks, full, max_gain, 0, s, 0, &mut chosen) {
            let points: Vec<LatticePoint> = chosen
                .iter()
                .map(|&i| Point::new((i / side) as i64, (i % side) as i64))
                .collect();
            let complete = verify_cover(grid, &points)?;
            return Ok(CoverSolution {
                n,
                method: CoverMethod::Exact,
                points,
                step_gains: Vec::new(),
                complete,
            });
        }
    }
    unreachable!("the full grid covers itself once n >= 1")
}

/// Most input points a blind-spot request accepts.
pub const BLIND_SPOT_MAX_POINTS: usize = 12;

/// A lattice point invisible from every requested observer.
#[derive(Debug, Clone)]
pub struct BlindSpot {
    pub point: BigLatticePoint,
    /// Product of the first r primes (r = number of observers).
    pub modulus: BigInt,
    /// Multiple of the modulus added to both base coordinates to dodge the
    /// observers themselves; at most r, so coordinates stay below the bound.
    pub shift: u64,
    /// (r + 1) times the modulus; both coordinates are strictly below it.
    pub containment_bound: BigInt,
}

impl BlindSpot {
    /// Whether the containment bound already places the point inside A_n.
    pub fn guaranteed_within(&self, n: u64) -> bool {
        self.containment_bound < BigInt::from(n)
    }
}

/// Builds a point invisible from all given observers: both coordinates are
/// made congruent to the observer's coordinates modulo a distinct prime per
/// observer, so each difference vector picks up that prime as a common
/// factor. Inputs must be distinct; at most 12 keep the modulus tame.
pub fn blind_spot(points: &[LatticePoint]) -> Result<BlindSpot> {
    let r = points.len();
    if r == 0 || r > BLIND_SPOT_MAX_POINTS {
        return Err(Error::OutOfRange {
            name: "observer count",
            value: r as u64,
            min: 1,
            max: BLIND_SPOT_MAX_POINTS as u64,
        });
    }
    for i in 0..r {
        for j in (i + 1)..r {
            if points[i] == points[j] {
                return Err(Error::InvalidArgument(format!(
                    "observers must be distinct, but {} repeats",
                    points[i]
                )));
            }
        }
    }
    let moduli: Vec<BigInt> = primes_first(r as u64)
        .into_iter()
        .map(BigInt::from)
        .collect();
    let (x0, modulus) = crt_solve(&CrtSystem::new(
        points.iter().map(|p| BigInt::from(p.x)).collect(),
        moduli.clone(),
    ))?;
    let (y0, _) = crt_solve(&CrtSystem::new(
        points.iter().map(|p| BigInt::from(p.y)).collect(),
        moduli,
    ))?;
    // Each observer rules out at most one shift, so one of r + 1 survives.
    for shift in 0..=r as u64 {
        let offset = BigInt::from(shift) * &modulus;
        let cand = Point::new(&x0 + &offset, &y0 + &offset);
        let clashes = points
            .iter()
            .any(|p| cand.x == BigInt::from(p.x) && cand.y == BigInt::from(p.y));
        if !clashes {
            debug_assert!(points.iter().all(|p| {
                let g = (&cand.x - BigInt::from(p.x)).gcd(&(&cand.y - BigInt::from(p.y)));
                !g.is_zero() && !g.is_one()
            }));
            let containment_bound = BigInt::from(r as u64 + 1) * &modulus;
            return Ok(BlindSpot {
                point: cand,
                modulus,
                shift,
                containment_bound,
            });
        }
    }
    unreachable!("r distinct observers cannot veto r + 1 candidate shifts")
}

/// General bounds on the minimum cover size next to achieved sizes.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub n: u64,
    /// ln n / (2 ln ln n).
    pub lower: f64,
    /// 4 ln n.
    pub upper: f64,
    pub checks: Vec<BoundCheck>,
}

/// Achieved sizes sit strictly between the bounds only for true minima;
/// heuristic covers may land outside, so these are flags, not failures.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub method: CoverMethod,
    pub size: u64,
    pub above_lower: bool,
    pub within_upper: bool,
}

pub fn bound_report(n: u64, achieved: &[(CoverMethod, u64)]) -> Result<BoundReport> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!(
            "bound report requires n >= 16 so both bounds are positive, got n = {n}"
        )));
    }
    let ln_n = (n as f64).ln();
    let lower = ln_n / (2.0 * ln_n.ln());
    let upper = 4.0 * ln_n;
    let checks = achieved
        .iter()
        .map(|&(method, size)| BoundCheck {
            method,
            size,
            above_lower: size as f64 > lower,
            within_upper: (size as f64) < upper,
        })
        .collect();
    Ok(BoundReport {
        n,
        lower,
        upper,
        checks,
    })
}
