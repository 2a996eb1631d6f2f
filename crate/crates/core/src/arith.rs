//! Sieve-backed multiplicative arithmetic: smallest prime factors, Euler's
//! totient, the Moebius function, distinct-prime-factor counts, and totient
//! partial sums compared against their average order 3x^2/pi^2.

use crate::error::{Error, Result};

/// Hard ceiling on sieve size; phi values must fit in u32.
pub const MAX_SIEVE_LIMIT: u64 = 1 << 31;

/// Per-integer arithmetic data for 1..=limit, built by one linear sieve pass.
///
/// Immutable after construction. Memory is ~10 bytes per slot, so 10^7 is a
/// comfortable in-memory bound and 10^8 is feasible but slow to build.
pub struct SieveTable {
    limit: u64,
    spf: Vec<u32>,
    phi: Vec<u32>,
    mu: Vec<i8>,
    omega: Vec<u8>,
    primes: Vec<u32>,
}

impl SieveTable {
    /// Builds the table for 1..=limit in O(limit) time.
    pub fn build(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::InvalidArgument(
                "sieve limit must be at least 1".into(),
            ));
        }
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::OutOfRange {
                name: "limit",
                value: limit,
                min: 1,
                max: MAX_SIEVE_LIMIT,
            });
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut phi = vec![0u32; n + 1];
        let mut mu = vec![0i8; n + 1];
        let mut omega = vec![0u8; n + 1];
        let mut primes: Vec<u32> = Vec::new();

        phi[1] = 1;
        mu[1] = 1;
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                phi[i] = (i - 1) as u32;
                mu[i] = -1;
                omega[i] = 1;
                primes.push(i as u32);
            }
            for &p in &primes {
                let p = p as usize;
                if p > spf[i] as usize || i * p > n {
                    break;
                }
                let ip = i * p;
                spf[ip] = p as u32;
                if p == spf[i] as usize {
                    // p divides i: the p-part of ip deepens, no new prime.
                    phi[ip] = phi[i] * p as u32;
                    mu[ip] = 0;
                    omega[ip] = omega[i];
                } else {
                    phi[ip] = phi[i] * (p - 1) as u32;
                    mu[ip] = -mu[i];
                    omega[ip] = omega[i] + 1;
                }
            }
        }

        Ok(SieveTable {
            limit,
            spf,
            phi,
            mu,
            omega,
            primes,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn index(&self, n: u64, name: &'static str) -> Result<usize> {
        if n == 0 || n > self.limit {
            return Err(Error::OutOfRange {
                name,
                value: n,
                min: 1,
                max: self.limit,
            });
        }
        Ok(n as usize)
    }

    /// Euler's totient of n.
    pub fn phi(&self, n: u64) -> Result<u64> {
        Ok(self.phi[self.index(n, "n")?] as u64)
    }

    /// Moebius function of n: 0 on square divisors, else (-1)^omega(n).
    pub fn mu(&self, n: u64) -> Result<i8> {
        Ok(self.mu[self.index(n, "n")?])
    }

    /// Number of distinct prime factors of n; omega(1) = 0.
    pub fn omega(&self, n: u64) -> Result<u8> {
        Ok(self.omega[self.index(n, "n")?])
    }

    /// Smallest prime factor of n; defined for n >= 2.
    pub fn smallest_prime_factor(&self, n: u64) -> Result<u64> {
        let i = self.index(n, "n")?;
        if n < 2 {
            return Err(Error::InvalidArgument(
                "smallest prime factor is undefined for n = 1".into(),
            ));
        }
        Ok(self.spf[i] as u64)
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        let i = self.index(n, "n")?;
        Ok(n >= 2 && self.spf[i] as u64 == n)
    }

    /// Prime factorization as (prime, exponent) pairs in increasing order.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        let mut i = self.index(n, "n")?;
        let mut out = Vec::new();
        while i > 1 {
            let p = self.spf[i] as usize;
            let mut e = 0u32;
            while i % p == 0 {
                i /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        Ok(out)
    }

    /// All primes <= limit, increasing.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Totient values indexed by n; entry 0 is unused.
    pub fn phi_values(&self) -> &[u32] {
        &self.phi
    }

    /// Moebius values indexed by n; entry 0 is unused.
    pub fn mu_values(&self) -> &[i8] {
        &self.mu
    }

    /// Distinct-prime-factor counts indexed by n; entry 0 is unused.
    pub fn omega_values(&self) -> &[u8] {
        &self.omega
    }
}

/// Totient via the product formula n * prod(1 - 1/p) over primes p | n,
/// evaluated exactly as n / prod(p) * prod(p - 1).
pub fn totient(n: u64, table: &SieveTable) -> Result<u64> {
    let mut value = n;
    for (p, _) in table.factorize(n)? {
        value = value / p * (p - 1);
    }
    Ok(value)
}

/// Partial sum of the totient over 1..=x next to its average order.
#[derive(Debug, Clone)]
pub struct PartialSumReport {
    pub x: u64,
    pub phi_sum: u128,
    /// 3x^2/pi^2.
    pub main_term: f64,
    pub abs_error: f64,
    /// abs_error / (x ln x); infinite at x = 1 where ln x = 0.
    pub normalized_error: f64,
}

/// Sums phi(1..=x) and reports the gap to 3x^2/pi^2.
pub fn totient_partial_sum(x: u64, table: &SieveTable) -> Result<PartialSumReport> {
    if x == 0 || x > table.limit() {
        return Err(Error::OutOfRange {
            name: "x",
            value: x,
            min: 1,
            max: table.limit(),
        });
    }
    let phi_sum: u128 = table.phi_values()[1..=x as usize]
        .iter()
        .map(|&v| v as u128)
        .sum();
    let xf = x as f64;
    let main_term = 3.0 * xf * xf / (std::f64::consts::PI * std::f64::consts::PI);
    let abs_error = (phi_sum as f64 - main_term).abs();
    let normalized_error = abs_error / (xf * xf.ln());
    Ok(PartialSumReport {
        x,
        phi_sum,
        main_term,
        abs_error,
        normalized_error,
    })
}

/// First m primes in increasing order; m = 0 yields an empty list.
pub fn primes_first(m: u64) -> Vec<u64> {
    if m == 0 {
        return Vec::new();
    }
    // Rosser-style upper bound on the m-th prime, grown if it falls short.
    let mut bound = if m < 6 {
        13
    } else {
        let mf = m as f64;
        (mf * (mf.ln() + mf.ln().ln())).ceil() as usize + 1
    };
    loop {
        let mut composite = vec![false; bound + 1];
        let mut out = Vec::with_capacity(m as usize);
        for i in 2..=bound {
            if !composite[i] {
                out.push(i as u64);
                if out.len() == m as usize {
                    return out;
                }
                let mut j = i * i;
                while j <= bound {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        bound *= 2;
    }
}
