//! Hidden grids: k-by-k blocks of lattice points, none of which is visible
//! from the origin. Corners are built by the Chinese remainder theorem from a
//! k-by-k matrix of distinct primes, so every point in the block picks up a
//! shared prime factor in both coordinate offsets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::primes_first;
use crate::error::{Error, Result};
use crate::visibility::{Coord, Point};
use crate::LatticePoint;

/// A simultaneous congruence system x = residues[i] (mod moduli[i]).
#[derive(Debug, Clone)]
pub struct CrtSystem {
    pub residues: Vec<BigInt>,
    pub moduli: Vec<BigInt>,
}

impl CrtSystem {
    pub fn new(residues: Vec<BigInt>, moduli: Vec<BigInt>) -> Self {
        CrtSystem { residues, moduli }
    }
}

/// Solves the system, returning the canonical representative in [0, M)
/// together with M, the product of the moduli. The moduli must be pairwise
/// coprime and at least 2; residues may be arbitrary integers.
pub fn crt_solve(system: &CrtSystem) -> Result<(BigInt, BigInt)> {
    let k = system.moduli.len();
    if k == 0 {
        return Err(Error::InvalidArgument(
            "at least one congruence is required".into(),
        ));
    }
    if system.residues.len() != k {
        return Err(Error::InvalidArgument(format!(
            "system has {} residues but {} moduli",
            system.residues.len(),
            k
        )));
    }
    for m in &system.moduli {
        if *m < BigInt::from(2) {
            return Err(Error::InvalidArgument(format!(
                "modulus {m} is invalid; moduli must be at least 2"
            )));
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            let g = system.moduli[i].gcd(&system.moduli[j]);
            if !g.is_one() {
                return Err(Error::InvalidArgument(format!(
                    "moduli must be pairwise coprime, but gcd({}, {}) = {g}",
                    system.moduli[i], system.moduli[j]
                )));
            }
        }
    }

    let mut r = system.residues[0].mod_floor(&system.moduli[0]);
    let mut m = system.moduli[0].clone();
    for i in 1..k {
        let mi = &system.moduli[i];
        // inv * m = 1 (mod mi); exists because the moduli are coprime.
        let eg = m.extended_gcd(mi);
        debug_assert!(eg.gcd.is_one());
        let step = ((&system.residues[i] - &r) * eg.x).mod_floor(mi);
        r += &m * step;
        m *= mi;
    }
    debug_assert!(r >= BigInt::zero() && r < m);
    Ok((r, m))
}

/// A k-by-k matrix of the first k^2 primes, row-major, with the row products
/// d_i and column products D_j used to pin down hidden-grid corners.
#[derive(Debug, Clone)]
pub struct PrimeMatrix {
    k: usize,
    entries: Vec<u64>,
    row_products: Vec<BigInt>,
    col_products: Vec<BigInt>,
}

impl PrimeMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Entry at (row, col), zero-based. Panics out of bounds.
    pub fn entry(&self, row: usize, col: usize) -> u64 {
        assert!(row < self.k && col < self.k);
        self.entries[row * self.k + col]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn row_products(&self) -> &[BigInt] {
        &self.row_products
    }

    pub fn col_products(&self) -> &[BigInt] {
        &self.col_products
    }
}

/// Fills a k-by-k matrix with the first k^2 primes in row-major order.
/// Row and column products are pairwise coprime since the entries are
/// distinct primes. Practical cap is around k = 40 (1600 primes).
pub fn prime_matrix(k: u64) -> Result<PrimeMatrix> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "matrix dimension k must be at least 1".into(),
        ));
    }
    let k = k as usize;
    let entries = primes_first((k * k) as u64);
    let product = |it: Box<dyn Iterator<Item = u64> + '_>| -> BigInt {
        it.fold(BigInt::one(), |acc, p| acc * BigInt::from(p))
    };
    let row_products: Vec<BigInt> = (0..k)
        .map(|i| product(Box::new(entries[i * k..(i + 1) * k].iter().copied())))
        .collect();
    let col_products: Vec<BigInt> = (0..k)
        .map(|j| product(Box::new(entries.iter().copied().skip(j).step_by(k))))
        .collect();
    Ok(PrimeMatrix {
        k,
        entries,
        row_products,
        col_products,
    })
}

/// Corner (a, b) of a k-by-k grid hidden from the origin, with the shared
/// modulus (the product of all k^2 primes) and the verification outcome.
#[derive(Debug, Clone)]
pub struct HiddenGridWitness {
    pub k: u64,
    pub a: BigInt,
    pub b: BigInt,
    pub modulus: BigInt,
    pub verified: bool,
}

impl HiddenGridWitness {
    /// JSON form with big integers as decimal strings.
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "a": self.a.to_string(),
            "b": self.b.to_string(),
            "modulus": self.modulus.to_string(),
            "verified": self.verified,
        })
    }
}

/// Builds a hidden k-by-k grid corner: a = -i (mod d_i) for every row
/// product d_i and b = -j (mod D_j) for every column product D_j, so the
/// point (a + i, b + j) is divisible by the matrix prime at (i, j) in both
/// offsets. Verification runs anyway and is reported, not assumed.
pub fn hidden_grid_witness(k: u64) -> Result<HiddenGridWitness> {
    let matrix = prime_matrix(k)?;
    let negatives: Vec<BigInt> = (1..=k as i64).map(|i| BigInt::from(-i)).collect();
    let (a, modulus) = crt_solve(&CrtSystem::new(
        negatives.clone(),
        matrix.row_products().to_vec(),
    ))?;
    let (b, col_modulus) = crt_solve(&CrtSystem::new(
        negatives,
        matrix.col_products().to_vec(),
    ))?;
    debug_assert_eq!(modulus, col_modulus);
    let verified = verify_hidden(&a, &b, k)?;
    Ok(HiddenGridWitness {
        k,
        a,
        b,
        modulus,
        verified,
    })
}

/// Checks that every point of the k-by-k block with corner (a, b), i.e.
/// (a + r, b + s) for 1 <= r, s <= k, is invisible from the origin.
pub fn verify_hidden<T: Coord>(a: &T, b: &T, k: u64) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "grid size k must be at least 1".into(),
        ));
    }
    if *a < T::zero() || *b < T::zero() {
        return Err(Error::InvalidArgument(
            "corner coordinates must be nonnegative".into(),
        ));
    }
    let offset = |base: &T, step: u64| -> Result<T> {
        let s = T::from_u64(step).ok_or_else(|| {
            Error::InvalidArgument("k does not fit in the coordinate type".into())
        })?;
        Ok(base.clone() + s)
    };
    let xs: Vec<T> = (1..=k).map(|r| offset(a, r)).collect::<Result<_>>()?;
    let ys: Vec<T> = (1..=k).map(|s| offset(b, s)).collect::<Result<_>>()?;
    for x in &xs {
        for y in &ys {
            if x.gcd(y).is_one() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Default cap on the scan bound for [`search_hidden_grid`].
pub const DEFAULT_SEARCH_LIMIT_CAP: u64 = 100_000;

/// Smallest hidden-grid corner by brute force: scans (a, b) in [0, limit]^2
/// in lexicographic order (a-major) and returns the first corner whose
/// k-by-k block is entirely invisible from the origin, or None.
pub fn search_hidden_grid(k: u64, limit: u64) -> Result<Option<LatticePoint>> {
    search_hidden_grid_with_cap(k, limit, DEFAULT_SEARCH_LIMIT_CAP)
}

/// Same as [`search_hidden_grid`] with an explicit cap on limit.
pub fn search_hidden_grid_with_cap(
    k: u64,
    limit: u64,
    cap: u64,
) -> Result<Option<LatticePoint>> {
    if k == 0 || k > 5 {
        return Err(Error::InvalidArgument(format!(
            "search supports grid sizes 1 through 5, got k = {k}"
        )));
    }
    if limit > cap {
        return Err(Error::Budget(format!(
            "scan bound {limit} exceeds the cap of {cap}; raise the budget to allow it"
        )));
    }
    for a in 0..=limit {
        'corner: for b in 0..=limit {
            for r in 1..=k {
                for s in 1..=k {
                    if (a + r).gcd(&(b + s)) == 1 {
                        continue 'corner;
                    }
                }
            }
            return Ok(Some(Point::new(a as i64, b as i64)));
        }
    }
    Ok(None)
}
