//! The visibility predicate and its statistics: a lattice point q is visible
//! from p exactly when gcd(|qx - px|, |qy - py|) = 1, i.e. the open segment
//! pq crosses no lattice point. Densities tend to 6/pi^2 in the plane and to
//! 1/zeta(d) in dimension d.

use num_integer::Integer;
use num_traits::FromPrimitive;
use std::fmt;

use crate::arith::{totient_partial_sum, SieveTable};
use crate::error::{Error, Result};

/// Integer scalar usable as a lattice coordinate: machine ints or big ints.
pub trait Coord: Integer + Clone + fmt::Display + FromPrimitive {}
impl<T: Integer + Clone + fmt::Display + FromPrimitive> Coord for T {}

/// A point of the integer lattice, generic over the coordinate scalar.
/// The derived order is lexicographic (x first), which every tie-breaking
/// rule in this crate relies on.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }
}

impl<T: fmt::Display> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn abs_diff<T: Coord>(a: &T, b: &T) -> T {
    if a >= b {
        a.clone() - b.clone()
    } else {
        b.clone() - a.clone()
    }
}

/// Whether q is visible from p. Visibility is symmetric and translation
/// invariant; a point is never visible from itself and asking is an error.
pub fn is_visible<T: Coord>(p: &Point<T>, q: &Point<T>) -> Result<bool> {
    if p == q {
        return Err(Error::InvalidArgument(format!(
            "visibility of {p} from itself is undefined"
        )));
    }
    let dx = abs_diff(&p.x, &q.x);
    let dy = abs_diff(&p.y, &q.y);
    Ok(dx.gcd(&dy).is_one())
}

/// Count of points of [1, n]^2 visible from the origin, via the totient
/// identity 2 * sum(phi(1..=n)) - 1.
pub fn visible_from_origin_count(n: u64, table: &SieveTable) -> Result<u64> {
    let report = totient_partial_sum(n, table)?;
    Ok((2 * report.phi_sum - 1) as u64)
}

/// Default cap on gcd evaluations for the density scans.
pub const DEFAULT_WORK_BUDGET: u64 = 1_000_000_000;

/// Empirical visibility density over [1, n]^2 next to 6/pi^2.
#[derive(Debug, Clone)]
pub struct DensityReport {
    pub n: u64,
    pub d: u32,
    pub visible_count: u64,
    pub total_count: u64,
    pub ratio: f64,
    pub target: f64,
    pub abs_gap: f64,
}

/// Limiting density of origin-visible points in dimension d, i.e. 1/zeta(d).
pub fn density_target(d: u32) -> Result<f64> {
    let pi = std::f64::consts::PI;
    // Apery's constant.
    const ZETA_3: f64 = 1.2020569031595942854;
    match d {
        2 => Ok(6.0 / (pi * pi)),
        3 => Ok(1.0 / ZETA_3),
        4 => Ok(90.0 / (pi * pi * pi * pi)),
        _ => Err(Error::InvalidArgument(format!(
            "dimension {d} is unsupported; choose 2, 3, or 4"
        ))),
    }
}

/// Coprime pairs in [1, n]^2, counted by raw gcd with the below-diagonal
/// half mirrored: (1, 1) is the only coprime pair on the diagonal.
fn coprime_square_census(n: u64) -> u64 {
    let mut below = 0u64;
    for a in 2..=n {
        for b in 1..a {
            if a.gcd(&b) == 1 {
                below += 1;
            }
        }
    }
    2 * below + 1
}

/// Exact visibility density over [1, n]^2 by full scan.
pub fn density_visible(n: u64) -> Result<DensityReport> {
    density_visible_with_budget(n, DEFAULT_WORK_BUDGET)
}

/// Same as [`density_visible`] under an explicit work budget of n^2.
pub fn density_visible_with_budget(n: u64, budget: u64) -> Result<DensityReport> {
    density_nd_with_budget(n, 2, budget)
}

/// Exact visibility density over [1, n]^d for d in {2, 3, 4}.
pub fn density_nd(n: u64, d: u32) -> Result<DensityReport> {
    density_nd_with_budget(n, d, DEFAULT_WORK_BUDGET)
}

/// Same as [`density_nd`] under an explicit work budget of n^d.
pub fn density_nd_with_budget(n: u64, d: u32, budget: u64) -> Result<DensityReport> {
    let target = density_target(d)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let total = n
        .checked_pow(d)
        .filter(|&w| w <= budget)
        .ok_or_else(|| {
            Error::Budget(format!(
                "density scan needs n^{d} = {n}^{d} gcd checks, over the budget of {budget}; \
                 lower n or raise the budget"
            ))
        })?;
    // A zero prefix gcd means the remaining coordinates decide alone; a unit
    // prefix gcd makes every completion visible, so whole sub-blocks are
    // credited without scanning them.
    let visible_count = match d {
        2 => coprime_square_census(n),
        3 => {
            let mut count = 0u64;
            for x in 1..=n {
                for y in 1..=n {
                    let g = x.gcd(&y);
                    if g == 1 {
                        count += n;
                    } else {
                        count += (1..=n).filter(|z| g.gcd(z) == 1).count() as u64;
                    }
                }
            }
            count
        }
        4 => {
            let mut count = 0u64;
            for x in 1..=n {
                for y in 1..=n {
                    let g2 = x.gcd(&y);
                    if g2 == 1 {
                        count += n * n;
                        continue;
                    }
                    for z in 1..=n {
                        let g3 = g2.gcd(&z);
                        if g3 == 1 {
                            count += n;
                        } else {
                            count += (1..=n).filter(|w| g3.gcd(w) == 1).count() as u64;
                        }
                    }
                }
            }
            count
        }
        _ => unreachable!("density_target already rejected d"),
    };
    let ratio = visible_count as f64 / total as f64;
    Ok(DensityReport {
        n,
        d,
        visible_count,
        total_count: total,
        ratio,
        target,
        abs_gap: (ratio - target).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    type P = Point<i64>;

    // Oracle: walk the interior lattice points of the closed segment pq and
    // declare q visible when none exist.
    fn visible_by_segment(p: &P, q: &P) -> bool {
        let dx = q.x - p.x;
        let dy = q.y - p.y;
        let g = dx.gcd(&dy);
        let (sx, sy) = (dx / g, dy / g);
        for t in 1..g {
            let interior = Point::new(p.x + sx * t, p.y + sy * t);
            assert_ne!(&interior, p);
            assert_ne!(&interior, q);
        }
        g == 1
    }

    #[test]
    fn visibility_examples() {
        let o = Point::new(0i64, 0);
        assert!(is_visible(&o, &Point::new(1, 1)).unwrap());
        assert!(!is_visible(&o, &Point::new(2, 2)).unwrap());
        assert!(is_visible(&Point::new(1, 2), &Point::new(4, 6)).unwrap());
        assert!(is_visible(&o, &Point::new(0, 1)).unwrap());
        assert!(!is_visible(&o, &Point::new(0, 2)).unwrap());
        assert!(is_visible(&o, &Point::new(-3, 7)).unwrap());
        assert!(matches!(
            is_visible(&o, &o),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn visibility_matches_segment_oracle_on_seeded_pairs() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..10_000 {
            let p = Point::new(rng.gen_range(-50i64..=50), rng.gen_range(-50i64..=50));
            let q = Point::new(rng.gen_range(-50i64..=50), rng.gen_range(-50i64..=50));
            if p == q {
                continue;
            }
            assert_eq!(
                is_visible(&p, &q).unwrap(),
                visible_by_segment(&p, &q),
                "{p} vs {q}"
            );
        }
    }

    #[test]
    fn visibility_is_symmetric_on_seeded_pairs() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100_000 {
            let p = Point::new(rng.gen_range(-1000i64..=1000), rng.gen_range(-1000i64..=1000));
            let q = Point::new(rng.gen_range(-1000i64..=1000), rng.gen_range(-1000i64..=1000));
            if p == q {
                continue;
            }
            assert_eq!(is_visible(&p, &q).unwrap(), is_visible(&q, &p).unwrap());
        }
    }

    #[test]
    fn big_coordinates_work() {
        let two_pow = BigInt::from(2u32).pow(100);
        let three_pow = BigInt::from(3u32).pow(60);
        let o = Point::new(BigInt::from(0), BigInt::from(0));
        let q = Point::new(two_pow.clone(), three_pow);
        assert!(is_visible(&o, &q).unwrap());
        let r = Point::new(two_pow.clone(), two_pow + 2);
        assert!(!is_visible(&o, &r).unwrap());
        assert!(is_visible(&o, &o.clone()).is_err());
    }

    #[test]
    fn census_matches_incremental_gcd_oracle_to_1000() {
        let table = SieveTable::build(1000).unwrap();
        let mut oracle = 0u64;
        for n in 1u64..=1000 {
            // New pairs on the boundary of [1, n]^2, counted by raw gcd.
            if n == 1 {
                oracle += 1;
            } else {
                oracle += 2 * (1..n).filter(|b| n.gcd(b) == 1).count() as u64;
            }
            assert_eq!(
                visible_from_origin_count(n, &table).unwrap(),
                oracle,
                "census at n = {n}"
            );
        }
    }

    #[test]
    fn census_examples() {
        let table = SieveTable::build(100).unwrap();
        assert_eq!(visible_from_origin_count(1, &table).unwrap(), 1);
        assert_eq!(visible_from_origin_count(2, &table).unwrap(), 3);
        assert_eq!(visible_from_origin_count(10, &table).unwrap(), 63);
        assert!(visible_from_origin_count(0, &table).is_err());
        assert!(visible_from_origin_count(101, &table).is_err());
    }

    #[test]
    fn density_examples() {
        let r1 = density_visible(1).unwrap();
        assert_eq!(r1.visible_count, 1);
        assert!((r1.ratio - 1.0).abs() < 1e-12);

        let r10 = density_visible(10).unwrap();
        assert_eq!(r10.visible_count, 63);
        assert!((r10.ratio - 0.63).abs() < 1e-12);
        assert!((r10.target - 0.6079271018540267).abs() < 1e-12);
        assert!((r10.abs_gap - 0.0220728981459733).abs() < 1e-12);

        assert!(density_visible(0).is_err());
    }

    #[test]
    fn density_nd_examples() {
        let d2 = density_nd(10, 2).unwrap();
        assert_eq!(d2.ratio, density_visible(10).unwrap().ratio);

        let d3 = density_nd(50, 3).unwrap();
        assert!((d3.target - 0.8319073725807076).abs() < 1e-12);
        assert!(d3.abs_gap < 0.02, "gap {}", d3.abs_gap);

        let d4 = density_nd(30, 4).unwrap();
        assert!((d4.target - 0.9239384029215904).abs() < 1e-12);
        assert!(d4.abs_gap < 0.02, "gap {}", d4.abs_gap);

        assert!(matches!(
            density_nd(10, 5),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            density_nd(10, 1),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            density_nd(100_000, 2),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn density_gap_shrinks_like_log_over_n() {
        for n in [100u64, 1000] {
            let r = density_visible(n).unwrap();
            let bound = 5.0 * (n as f64).ln() / n as f64;
            assert!(r.abs_gap <= bound, "n = {n}: gap {} > {bound}", r.abs_gap);
        }
    }

    proptest! {
        #[test]
        fn visibility_is_translation_invariant(
            px in -1_000_000i64..=1_000_000,
            py in -1_000_000i64..=1_000_000,
            qx in -1_000_000i64..=1_000_000,
            qy in -1_000_000i64..=1_000_000,
            tx in -1_000_000i64..=1_000_000,
            ty in -1_000_000i64..=1_000_000,
        ) {
            let p = Point::new(px, py);
            let q = Point::new(qx, qy);
            prop_assume!(p != q);
            let pt = Point::new(px + tx, py + ty);
            let qt = Point::new(qx + tx, qy + ty);
            prop_assert_eq!(is_visible(&p, &q).unwrap(), is_visible(&pt, &qt).unwrap());
        }

        #[test]
        fn scaling_by_k_kills_visibility(
            px in -1000i64..=1000,
            py in -1000i64..=1000,
            qx in -1000i64..=1000,
            qy in -1000i64..=1000,
            k in 2i64..=50,
        ) {
            let p = Point::new(px, py);
            let q = Point::new(qx, qy);
            prop_assume!(p != q);
            // Stretching the difference vector by k >= 2 plants interior points.
            let stretched = Point::new(px + k * (qx - px), py + k * (qy - py));
            prop_assert!(!is_visible(&p, &stretched).unwrap());
        }
    }
}
