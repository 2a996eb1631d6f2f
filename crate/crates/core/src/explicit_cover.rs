//! Explicit observer sets B_n for the grid A_n, driven by a factor-count
//! threshold g: two thin rectangles ({1..2t} x {1..2s} and its transpose)
//! near the origin. Blocks of rows and columns are indexed by i and j; a
//! block can fail only when the integers it - a pile up too many distinct
//! prime factors, which the sets E_n(g), X_i, Y_i and the index set I
//! account for exactly.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arith::SieveTable;
use crate::error::{Error, Result};
use crate::visibility::Point;
use crate::LatticePoint;

/// Sorted set of m <= n whose count of distinct prime factors reaches the
/// real threshold g (integer omega compared against g directly).
pub fn en_g(n: u64, g_value: f64, table: &SieveTable) -> Result<Vec<u64>> {
    if n == 0 || n > table.limit() {
        return Err(Error::OutOfRange {
            name: "n",
            value: n,
            min: 1,
            max: table.limit(),
        });
    }
    if !(g_value > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold g must be positive, got {g_value}"
        )));
    }
    let omega = table.omega_values();
    Ok((1..=n)
        .filter(|&m| omega[m as usize] as f64 >= g_value)
        .collect())
}

/// The block construction around threshold g. Immutable once built.
///
/// s = floor(10 g) and t = floor(10 ln ln g) size the rectangles; blocks are
/// X_i = {m : (i-1)t + 1 < m <= it} (note the strict left edge: integers
/// congruent to 1 mod t fall in no block). Y_i collects the offsets it - m
/// of heavy members m in X_i, and I the indices where at least
/// t0 = floor(t/10) + 1 of them pile up.
#[derive(Debug, Clone)]
pub struct ExplicitCoverPlan {
    n: u64,
    g_value: f64,
    s: u64,
    t: u64,
    t0: u64,
    en: Vec<u64>,
    index_set: BTreeSet<u64>,
    y_sets: BTreeMap<u64, BTreeSet<u64>>,
    b_n: Vec<LatticePoint>,
}

impl ExplicitCoverPlan {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn g_value(&self) -> f64 {
        self.g_value
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn t0(&self) -> u64 {
        self.t0
    }

    /// Members of E_n(g), ascending.
    pub fn en(&self) -> &[u64] {
        &self.en
    }

    pub fn en_count(&self) -> u64 {
        self.en.len() as u64
    }

    /// Indices whose block holds at least t0 heavy members.
    pub fn index_set(&self) -> &BTreeSet<u64> {
        &self.index_set
    }

    /// Offsets it - m of heavy members per block; only nonempty sets are kept.
    pub fn y_sets(&self) -> &BTreeMap<u64, BTreeSet<u64>> {
        &self.y_sets
    }

    pub fn y_set(&self, i: u64) -> Option<&BTreeSet<u64>> {
        self.y_sets.get(&i)
    }

    /// Observer points, sorted lexicographically, duplicates merged.
    pub fn b_n(&self) -> &[LatticePoint] {
        &self.b_n
    }

    pub fn b_size(&self) -> u64 {
        self.b_n.len() as u64
    }

    /// Largest block index with it <= n.
    pub fn max_i(&self) -> u64 {
        self.n / self.t
    }

    /// Largest block index with js <= n.
    pub fn max_j(&self) -> u64 {
        self.n / self.s
    }

    /// JSON form. Past 10^4 members the heavy set is elided down to its
    /// count plus a SHA-256 digest of the comma-joined decimal members.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "n": self.n,
            "g_value": self.g_value,
            "s": self.s,
            "t": self.t,
            "t0": self.t0,
            "en_count": self.en_count(),
            "index_set": self.index_set.iter().collect::<Vec<_>>(),
            "y_sets": self.y_sets.iter()
                .map(|(i, ys)| (i.to_string(), json!(ys.iter().collect::<Vec<_>>())))
                .collect::<serde_json::Map<_, _>>(),
            "b_size": self.b_size(),
            "b_rects": [[2 * self.t, 2 * self.s], [2 * self.s, 2 * self.t]],
        });
        let obj = v.as_object_mut().unwrap();
        if self.en.len() <= 10_000 {
            obj.insert("en_g".into(), json!(self.en));
        } else {
            let joined = self
                .en
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let digest = Sha256::digest(joined.as_bytes());
            let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
            obj.insert("en_digest_sha256".into(), json!(hex));
        }
        v
    }
}

/// Builds the plan for grid bound n and threshold g. Needs g large enough
/// that t = floor(10 ln ln g) >= 1 (that is g >= e^(e^0.1), about 3.02) and
/// n >= s*t so the blocks tile the range.
pub fn build_plan(n: u64, g_value: f64, table: &SieveTable) -> Result<ExplicitCoverPlan> {
    let en = en_g(n, g_value, table)?;
    let lnln = g_value.ln().ln();
    let t = (10.0 * lnln).floor();
    if !(t >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "g = {g_value} is too small for the block construction; \
             floor(10 ln ln g) must be at least 1, i.e. g >= 3.02"
        )));
    }
    let t = t as u64;
    let s = (10.0 * g_value).floor() as u64;
    let t0 = t / 10 + 1;
    if n < s * t {
        return Err(Error::InvalidArgument(format!(
            "n = {n} is below s*t = {}*{} = {}; the blocks would not fit",
            s,
            t,
            s * t
        )));
    }

    let mut buckets: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for &m in &en {
        let i = m.div_ceil(t);
        if m > (i - 1) * t + 1 {
            buckets.entry(i).or_default().insert(m);
        }
    }
    let index_set: BTreeSet<u64> = buckets
        .iter()
        .filter(|(_, members)| members.len() as u64 >= t0)
        .map(|(&i, _)| i)
        .collect();
    let y_sets: BTreeMap<u64, BTreeSet<u64>> = buckets
        .iter()
        .map(|(&i, members)| (i, members.iter().map(|&m| i * t - m).collect()))
        .collect();

    let mut b_points: BTreeSet<LatticePoint> = BTreeSet::new();
    for a in 1..=2 * t as i64 {
        for b in 1..=2 * s as i64 {
            b_points.insert(Point::new(a, b));
            b_points.insert(Point::new(b, a));
        }
    }
    let b_n: Vec<LatticePoint> = b_points.into_iter().collect();

    Ok(ExplicitCoverPlan {
        n,
        g_value,
        s,
        t,
        t0,
        en,
        index_set,
        y_sets,
        b_n,
    })
}

/// Lexicographically first (a, b) with 1 <= a <= t, a not in Y_i,
/// 1 <= b <= s, and gcd(it - a, js - b) = 1. Block i must avoid the index
/// set I; existence can genuinely fail for small n, reported as an error.
pub fn coprime_pair_find(i: u64, j: u64, plan: &ExplicitCoverPlan) -> Result<(u64, u64)> {
    if i == 0 || i > plan.max_i() {
        return Err(Error::OutOfRange {
            name: "i",
            value: i,
            min: 1,
            max: plan.max_i(),
        });
    }
    if j == 0 || j > plan.max_j() {
        return Err(Error::OutOfRange {
            name: "j",
            value: j,
            min: 1,
            max: plan.max_j(),
        });
    }
    if plan.index_set.contains(&i) {
        return Err(Error::InvalidArgument(format!(
            "block i = {i} belongs to the index set I; no admissible offset is promised there"
        )));
    }
    let empty = BTreeSet::new();
    let y = plan.y_set(i).unwrap_or(&empty);
    for a in 1..=plan.t {
        if y.contains(&a) {
            continue;
        }
        let u = i * plan.t - a;
        for b in 1..=plan.s {
            let v = j * plan.s - b;
            if u.gcd(&v) == 1 {
                return Ok((a, b));
            }
        }
    }
    Err(Error::NoCoprimePair { i, j })
}

/// Default cap on gcd evaluations in [`exceptional_scan`].
pub const DEFAULT_SCAN_BUDGET: u64 = 2_000_000_000;

/// Exceptional points of A_n relative to the plan's B_n, with every bound
/// the construction promises. The quadratic bound is the operative one; the
/// linear form is reported alongside without judgment.
#[derive(Debug, Clone)]
pub struct ExceptionalReport {
    pub n: u64,
    pub g_value: f64,
    pub s: u64,
    pub t: u64,
    pub t0: u64,
    pub en_count: u64,
    pub b_size: u64,
    /// Points of A_n no observer in B_n sees.
    pub exceptional_count: u64,
    /// 100 * |E_n(g)|^2.
    pub bound_quadratic: u128,
    /// 100 * |E_n(g)|.
    pub bound_linear: u128,
    /// 800 * g * ln ln g, the cap on |B_n|.
    pub cardinality_bound: f64,
    pub within_quadratic_bound: bool,
}

impl ExceptionalReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "g_value": self.g_value,
            "s": self.s,
            "t": self.t,
            "t0": self.t0,
            "en_count": self.en_count,
            "b_size": self.b_size,
            "exceptional_count": self.exceptional_count,
            "bound_quadratic": self.bound_quadratic.to_string(),
            "bound_linear": self.bound_linear.to_string(),
            "cardinality_bound": self.cardinality_bound,
            "within_quadratic_bound": self.within_quadratic_bound,
        })
    }
}

fn report_from_count(plan: &ExplicitCoverPlan, exceptional_count: u64) -> ExceptionalReport {
    let e = plan.en_count() as u128;
    let bound_quadratic = 100 * e * e;
    ExceptionalReport {
        n: plan.n,
        g_value: plan.g_value,
        s: plan.s,
        t: plan.t,
        t0: plan.t0,
        en_count: plan.en_count(),
        b_size: plan.b_size(),
        exceptional_count,
        bound_quadratic,
        bound_linear: 100 * e,
        cardinality_bound: 800.0 * plan.g_value * plan.g_value.ln().ln(),
        within_quadratic_bound: (exceptional_count as u128) <= bound_quadratic,
    }
}

fn invisible_from_all(q: &LatticePoint, observers: &[LatticePoint], work: &mut u64) -> bool {
    for p in observers {
        if p == q {
            continue;
        }
        *work += 1;
        if (p.x - q.x).unsigned_abs().gcd(&(p.y - q.y).unsigned_abs()) == 1 {
            return false;
        }
    }
    true
}

/// Scans all of A_n for points invisible from every observer in B_n.
pub fn exceptional_scan(plan: &ExplicitCoverPlan) -> Result<ExceptionalReport> {
    exceptional_scan_with_budget(plan, DEFAULT_SCAN_BUDGET)
}

/// Same as [`exceptional_scan`] under an explicit gcd-evaluation budget.
/// Rows scan independently and early-exit on the first visible witness, so
/// typical work is a couple of gcds per point, not |B_n|.
pub fn exceptional_scan_with_budget(
    plan: &ExplicitCoverPlan,
    budget: u64,
) -> Result<ExceptionalReport> {
    let n = plan.n as i64;
    let mut work = 0u64;
    let mut count = 0u64;
    for x in 0..=n {
        for y in 0..=n {
            if invisible_from_all(&Point::new(x, y), &plan.b_n, &mut work) {
                count += 1;
            }
        }
        if work > budget {
            return Err(Error::Budget(format!(
                "full scan passed {budget} gcd evaluations by row x = {x}; \
                 use sampled_exceptional_estimate or raise the budget"
            )));
        }
    }
    Ok(report_from_count(plan, count))
}

/// Estimated fraction of A_n invisible from B_n, from a seeded uniform
/// sample with a 95% Wilson score interval.
#[derive(Debug, Clone)]
pub struct SampledEstimate {
    pub n: u64,
    pub sample_size: u64,
    pub seed: u64,
    pub invisible_hits: u64,
    pub fraction: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl SampledEstimate {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "sample_size": self.sample_size,
            "seed": self.seed,
            "invisible_hits": self.invisible_hits,
            "fraction": self.fraction,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
        })
    }
}

/// Samples A_n uniformly and reports the invisible fraction. Each sample
/// point is derived from (seed, index) alone, so the result is independent
/// of any work partitioning and exactly reproducible.
pub fn sampled_exceptional_estimate(
    plan: &ExplicitCoverPlan,
    sample_size: u64,
    seed: u64,
) -> Result<SampledEstimate> {
    if sample_size < 1000 {
        return Err(Error::InvalidArgument(format!(
            "sample_size must be at least 1000 for a meaningful interval, got {sample_size}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    let mut work = 0u64;
    for index in 0..sample_size {
        rng.set_stream(index);
        rng.set_word_pos(0);
        let q = Point::new(
            rng.gen_range(0..=plan.n) as i64,
            rng.gen_range(0..=plan.n) as i64,
        );
        if invisible_from_all(&q, &plan.b_n, &mut work) {
            hits += 1;
        }
    }
    let m = sample_size as f64;
    let p = hits as f64 / m;
    // 95% Wilson score interval.
    let z = 1.959963984540054_f64;
    let z2 = z * z;
    let denom = 1.0 + z2 / m;
    let center = (p + z2 / (2.0 * m)) / denom;
    let half = z * (p * (1.0 - p) / m + z2 / (4.0 * m * m)).sqrt() / denom;
    Ok(SampledEstimate {
        n: plan.n,
        sample_size,
        seed,
        invisible_hits: hits,
        fraction: p,
        ci_low: (center - half).max(0.0),
        ci_high: (center + half).min(1.0),
    })
}

/// All n in [16, limit] where omega(n) fails to stay below
/// 2 ln n / ln ln n. Expected empty at any reachable scale.
pub fn omega_inequality_check(limit: u64, table: &SieveTable) -> Result<Vec<u64>> {
    if limit == 0 || limit > table.limit() {
        return Err(Error::OutOfRange {
            name: "limit",
            value: limit,
            min: 1,
            max: table.limit(),
        });
    }
    let omega = table.omega_values();
    let mut violations = Vec::new();
    for m in 16..=limit {
        let ln = (m as f64).ln();
        if omega[m as usize] as f64 >= 2.0 * ln / ln.ln() {
            violations.push(m);
        }
    }
    Ok(violations)
}

/// A named threshold choice with the properties it promises.
#[derive(Debug, Clone)]
pub struct ThresholdProfile {
    pub g_value: f64,
    pub description: &'static str,
    /// Whether E_n(g) is expected to be empty at this n.
    pub expect_empty_en: bool,
    /// Expected cap on the exceptional count, when one is promised.
    pub exceptional_bound: Option<f64>,
    /// Cap on |B_n| in this configuration.
    pub bn_bound: f64,
}

/// The two standard threshold choices for grid bound n: g = 2 ln ln n,
/// which keeps |B_n| tiny at the price of at most 100 n^2 / (ln ln n)^2
/// exceptional points, and g = 2 ln n / ln ln n, which empties E_n(g) so
/// the scan must find nothing.
pub fn threshold_profiles(n: u64) -> Result<(ThresholdProfile, ThresholdProfile)> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!(
            "threshold profiles need n >= 16, got {n}"
        )));
    }
    let ln = (n as f64).ln();
    let lnln = ln.ln();
    let g1 = 2.0 * lnln;
    let g2 = 2.0 * ln / lnln;
    Ok((
        ThresholdProfile {
            g_value: g1,
            description: "g = 2 ln ln n",
            expect_empty_en: false,
            exceptional_bound: Some(100.0 * (n as f64) * (n as f64) / (lnln * lnln)),
            bn_bound: 800.0 * g1 * g1.ln().ln(),
        },
        ThresholdProfile {
            g_value: g2,
            description: "g = 2 ln n / ln ln n",
            expect_empty_en: true,
            exceptional_bound: None,
            bn_bound: 1600.0 * ln * lnln.ln() / lnln,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn table_100k() -> &'static SieveTable {
        static TABLE: OnceLock<SieveTable> = OnceLock::new();
        TABLE.get_or_init(|| SieveTable::build(100_000).unwrap())
    }

    #[test]
    fn en_g_examples() {
        let t = table_100k();
        assert_eq!(
            en_g(10, 1.0, t).unwrap(),
            vec![2, 3, 4, 5, 6, 7, 8, 9, 10]
        );
        assert_eq!(en_g(30, 3.0, t).unwrap(), vec![30]);
        assert!(en_g(100, 4.0, t).unwrap().is_empty());
        assert!(en_g(0, 1.0, t).is_err());
        assert!(en_g(10, 0.0, t).is_err());
        assert!(en_g(t.limit() + 1, 1.0, t).is_err());
    }

    #[test]
    fn plan_parameters_at_10k() {
        let t = table_100k();
        let g = 2.0 * (10_000f64).ln().ln();
        assert!((g - 4.4406) < 1e-3 && g > 4.44);
        let plan = build_plan(10_000, g, t).unwrap();
        assert_eq!(plan.s(), 44);
        assert_eq!(plan.t(), 3);
        assert_eq!(plan.t0(), 1);
        assert!(plan.en().contains(&2310));
        assert!(plan.index_set().contains(&770), "2310 sits in block 770");
    }

    #[test]
    fn plan_rejects_small_g_and_small_n() {
        let t = table_100k();
        assert!(matches!(
            build_plan(1000, 3.0, t),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            build_plan(1000, 1.0, t),
            Err(Error::InvalidArgument(_))
        ));
        // g = 4.44 gives s*t = 132 > 100.
        let g = 2.0 * (10_000f64).ln().ln();
        assert!(matches!(
            build_plan(100, g, t),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn plan_invariants_hold_on_samples() {
        let t = table_100k();
        let cases = [
            (10_000u64, 2.0 * (10_000f64).ln().ln()),
            (2000, 2.0 * (2000f64).ln().ln()),
            (500, 2.0 * (500f64).ln().ln()),
            (10_000, 2.0 * (10_000f64).ln() / (10_000f64).ln().ln()),
        ];
        for (n, g) in cases {
            let plan = build_plan(n, g, t).unwrap();
            assert!(plan.s() >= 1 && plan.t() >= 1);
            assert!(plan.t0() >= 1 && plan.t0() <= plan.t());
            assert!(
                plan.t0() * plan.index_set().len() as u64 <= plan.en_count(),
                "n = {n}: index set too large"
            );
            for (&i, y) in plan.y_sets() {
                if !plan.index_set().contains(&i) {
                    assert!(
                        (y.len() as u64) < plan.t0(),
                        "block {i} outside I holds {} offsets",
                        y.len()
                    );
                }
            }
            assert!(plan.b_size() <= 8 * plan.s() * plan.t());
            assert!(
                8.0 * (plan.s() * plan.t()) as f64
                    <= 800.0 * plan.g_value() * plan.g_value().ln().ln()
            );
            let mut sorted = plan.en().to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted, plan.en());
            let mut b = plan.b_n().to_vec();
            b.sort();
            b.dedup();
            assert_eq!(b, plan.b_n());
        }
    }

    // The offsets Y_i are exactly the a in [1, t-2] for which it - a has
    // omega >= g; everything else in the block stays light. Checked by
    // reading omega straight off the sieve rather than through the buckets.
    #[test]
    fn y_sets_match_direct_omega_threshold()
    {
        let t = table_100k();
        let g = 2.0 * (10_000f64).ln().ln();
        let plan = build_plan(10_000, g, t).unwrap();
        let empty = BTreeSet::new();
        for i in (1..=plan.max_i()).step_by(17) {
            let y = plan.y_set(i).unwrap_or(&empty);
            // it - a ranges over the block interior exactly for a <= t - 2.
            for a in 1..=plan.t().saturating_sub(2) {
                let m = i * plan.t() - a;
                let heavy = t.omega(m).unwrap() as f64 >= g;
                assert_eq!(heavy, y.contains(&a), "i = {i}, a = {a}, m = {m}");
            }
        }
    }

    #[test]
    fn coprime_pair_basic() {
        let t = table_100k();
        let g = 2.0 * (10_000f64).ln().ln();
        let plan = build_plan(10_000, g, t).unwrap();
        let (a, b) = coprime_pair_find(1, 1, &plan).unwrap();
        // a = 1 is admissible since Y_1 is empty, and gcd(t - 1, s - 1) =
        // gcd(2, 43) = 1 already.
        assert_eq!((a, b), (1, 1));
        let u = plan.t() - a;
        let v = plan.s() - b;
        assert_eq!(u.gcd(&v), 1);

        assert!(matches!(
            coprime_pair_find(770, 1, &plan),
            Err(Error::InvalidArgument(_))
        ));
        assert!(coprime_pair_find(0, 1, &plan).is_err());
        assert!(coprime_pair_find(1, 0, &plan).is_err());
        assert!(coprime_pair_find(plan.max_i() + 1, 1, &plan).is_err());
        assert!(coprime_pair_find(1, plan.max_j() + 1, &plan).is_err());
    }

    // With t = 1 the block value it - a is zero for i = 1, and gcd(0, v) = v
    // can only be 1 when some js - b hits 1, which fails for j >= 2. This is
    // the honest small-n failure mode, not a crash.
    #[test]
    fn coprime_pair_not_found_is_first_class() {
        let t = table_100k();
        let plan = build_plan(100, 3.1, t).unwrap();
        assert_eq!(plan.t(), 1);
        assert_eq!(coprime_pair_find(1, 1, &plan).unwrap(), (1, plan.s() - 1));
        match coprime_pair_find(1, 2, &plan) {
            Err(Error::NoCoprimePair { i: 1, j: 2 }) => {}
            other => panic!("expected NoCoprimePair, got {other:?}"),
        }
    }

    #[test]
    fn scan_agrees_with_independent_recount_at_500() {
        let t = table_100k();
        let g = 2.0 * (500f64).ln().ln();
        let plan = build_plan(500, g, t).unwrap();
        let report = exceptional_scan(&plan).unwrap();

        // Independent recount through the public pairwise predicate.
        let mut recount = 0u64;
        for x in 0..=500i64 {
            for y in 0..=500i64 {
                let q = Point::new(x, y);
                let seen = plan.b_n().iter().any(|p| {
                    *p != q
                        && crate::visibility::is_visible(p, &q).unwrap()
                });
                if !seen {
                    recount += 1;
                }
            }
        }
        assert_eq!(report.exceptional_count, recount);
        assert!(report.within_quadratic_bound);
        assert_eq!(report.bound_quadratic, 100 * 25);
        assert_eq!(report.bound_linear, 100 * 5);
    }

    #[test]
    fn scan_budget_is_enforced() {
        let t = table_100k();
        let g = 2.0 * (500f64).ln().ln();
        let plan = build_plan(500, g, t).unwrap();
        assert!(matches!(
            exceptional_scan_with_budget(&plan, 10),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn empty_en_plan_sees_everything_at_500() {
        let t = table_100k();
        let g = 2.0 * (500f64).ln() / (500f64).ln().ln();
        let plan = build_plan(500, g, t).unwrap();
        assert_eq!(plan.en_count(), 0);
        let report = exceptional_scan(&plan).unwrap();
        assert_eq!(report.exceptional_count, 0, "a heavy-free plan must cover");
        assert!(report.within_quadratic_bound);
    }

    #[test]
    fn sampled_estimate_is_deterministic_and_sane() {
        let t = table_100k();
        let g = 2.0 * (500f64).ln() / (500f64).ln().ln();
        let plan = build_plan(500, g, t).unwrap();
        let e1 = sampled_exceptional_estimate(&plan, 2000, 7).unwrap();
        let e2 = sampled_exceptional_estimate(&plan, 2000, 7).unwrap();
        assert_eq!(e1.invisible_hits, e2.invisible_hits);
        assert_eq!(e1.fraction, e2.fraction);
        assert_eq!(e1.invisible_hits, 0);
        assert_eq!(e1.fraction, 0.0);
        assert!(e1.ci_low.abs() < 1e-12);
        assert!(e1.ci_high > 0.0 && e1.ci_high < 0.01);

        let e3 = sampled_exceptional_estimate(&plan, 2000, 8).unwrap();
        assert_eq!(e3.invisible_hits, 0);

        assert!(sampled_exceptional_estimate(&plan, 999, 7).is_err());
    }

    #[test]
    fn omega_inequality_holds_to_10k() {
        let t = table_100k();
        assert!(omega_inequality_check(10_000, t).unwrap().is_empty());
        assert!(omega_inequality_check(16, t).unwrap().is_empty());
        assert!(omega_inequality_check(15, t).unwrap().is_empty());
        assert!(omega_inequality_check(t.limit() + 1, t).is_err());
    }

    #[test]
    fn threshold_profile_values() {
        let (c1, c2) = threshold_profiles(10_000).unwrap();
        assert!((c1.g_value - 4.440663).abs() < 1e-5);
        assert!((c2.g_value - 8.296305).abs() < 1e-3);
        assert!(!c1.expect_empty_en && c2.expect_empty_en);
        assert!(c1.exceptional_bound.unwrap() > 0.0);
        assert!(c2.exceptional_bound.is_none());
        assert!(c1.bn_bound > 0.0 && c2.bn_bound > 0.0);

        let (_, c2m) = threshold_profiles(1_000_000).unwrap();
        assert!((c2m.g_value - 10.5227).abs() < 1e-3);

        assert!(threshold_profiles(15).is_err());
    }

    #[test]
    fn heavy_set_stays_below_loglog_budget() {
        let t = table_100k();
        for n in [1000u64, 10_000, 100_000] {
            let g = 2.0 * (n as f64).ln().ln();
            let e = en_g(n, g, t).unwrap();
            let bound = n as f64 / (n as f64).ln().ln();
            assert!(
                (e.len() as f64) <= bound,
                "n = {n}: |E| = {} over {bound}",
                e.len()
            );
        }
    }

    #[test]
    fn plan_json_elides_large_heavy_sets() {
        let t = table_100k();
        let small = build_plan(500, 2.0 * (500f64).ln().ln(), t).unwrap();
        let sv = small.to_json();
        assert!(sv.get("en_g").is_some());
        assert!(sv.get("en_digest_sha256").is_none());
        assert_eq!(sv["en_count"], 5);

        let big = build_plan(100_000, 3.5, t).unwrap();
        assert!(big.en_count() > 10_000, "en_count = {}", big.en_count());
        let bv = big.to_json();
        assert!(bv.get("en_g").is_none());
        let digest = bv["en_digest_sha256"].as_str().unwrap();
        assert_eq!(digest.len(), 64);
        assert!(digest.chars().all(|c| c.is_ascii_hexdigit()));
    }
}
