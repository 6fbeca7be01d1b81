//! Support size of a uniform random multigraph.
//!
//! A uniform multigraph with `m` edges over `N` edge slots is a uniform
//! `m`-multiset of the slots. Its support size `Z` (the number of distinct slots
//! used) is hypergeometric `H(N + m - 1, N, m)`:
//!
//! ```text
//! Pr[Z = s] = C(N, s) C(m - 1, m - s) / C(N + m - 1, m)
//! ```
//!
//! Write `q = N / (N + m - 1)`. Then `E[Z] = mq` and
//! `Var Z = mq (N - 1)(1 - q) / (N + m - 2)`.
//!
//! Everything is computed in exact rationals. The `*_f64` functions are a
//! log-gamma path for sizes where exact binomials get slow. With `m = 0` the
//! support is empty with probability one.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};
use crate::rng;
use crate::space::sample_counts_into;

/// The law of `Z` for `m` edges over `N` slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SupportLaw {
    slots: u64,
    edges: u64,
}

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) = C(n, i + 1) * (i + 1), so the division is exact
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

impl SupportLaw {
    pub fn new(slots: u64, edges: u64) -> Result<Self> {
        if slots == 0 {
            return Err(Error::InvalidDomain("the support law needs N >= 1".into()));
        }
        Ok(Self { slots, edges })
    }

    pub fn slots(&self) -> u64 {
        self.slots
    }

    pub fn edges(&self) -> u64 {
        self.edges
    }

    /// Hypergeometric parameters `(population, successes, draws) = (N + m - 1, N, m)`.
    pub fn hypergeometric(&self) -> (u64, u64, u64) {
        (self.slots + self.edges - 1, self.slots, self.edges)
    }

    /// `q = N / (N + m - 1)`, taken as 1 when `N = 1, m = 0`.
    pub fn q(&self) -> BigRational {
        let den = self.slots + self.edges - 1;
        if den == 0 {
            return BigRational::one();
        }
        ratio(self.slots, den)
    }

    pub fn q_f64(&self) -> f64 {
        let den = self.slots + self.edges - 1;
        if den == 0 {
            1.0
        } else {
            self.slots as f64 / den as f64
        }
    }

    pub fn pmf(&self, s: u64) -> BigRational {
        let (n, m) = (self.slots, self.edges);
        if m == 0 {
            return if s == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            };
        }
        if s == 0 || s > n.min(m) {
            return BigRational::zero();
        }
        let num = binom(n, s) * binom(m - 1, m - s);
        ratio(num, binom(n + m - 1, m))
    }

    /// The support `s` can take with positive probability.
    pub fn range(&self) -> std::ops::RangeInclusive<u64> {
        if self.edges == 0 {
            0..=0
        } else {
            1..=self.slots.min(self.edges)
        }
    }

    /// `Pr[Z = s]` through log-binomials, for `N` too large for exact arithmetic.
    pub fn pmf_f64(&self, s: u64) -> f64 {
        let (n, m) = (self.slots, self.edges);
        if m == 0 {
            return if s == 0 { 1.0 } else { 0.0 };
        }
        if s == 0 || s > n.min(m) {
            return 0.0;
        }
        (ln_binomial(n, s) + ln_binomial(m - 1, m - s) - ln_binomial(n + m - 1, m)).exp()
    }

    /// `E[Z] = mq`.
    pub fn mean(&self) -> BigRational {
        int(self.edges) * self.q()
    }

    pub fn mean_f64(&self) -> f64 {
        self.edges as f64 * self.q_f64()
    }

    /// `E[Z^k]` by the hypergeometric recursion
    /// `E[X^k] = (K l / L) E[(Y + 1)^(k - 1)]` with `X ~ H(L, K, l)` and
    /// `Y ~ H(L - 1, K - 1, l - 1)`.
    pub fn moment(&self, k: u32) -> BigRational {
        let (pop, succ, draws) = self.hypergeometric();
        hypergeometric_moment(pop, succ, draws, k)
    }

    /// `mq (N - 1)(1 - q) / (N + m - 2)`. Requires `N + m >= 3`, except that
    /// `m = 0` always gives 0.
    pub fn variance(&self) -> Result<BigRational> {
        let (n, m) = (self.slots, self.edges);
        if m == 0 {
            return Ok(BigRational::zero());
        }
        if n + m < 3 {
            return Err(Error::InvalidDomain(format!(
                "variance closed form needs N + m >= 3, got N = {n}, m = {m}"
            )));
        }
        let q = self.q();
        Ok(self.mean() * int(n - 1) * (BigRational::one() - q) / int(n + m - 2))
    }

    pub fn variance_f64(&self) -> Result<f64> {
        let (n, m) = (self.slots, self.edges);
        if m == 0 {
            return Ok(0.0);
        }
        if n + m < 3 {
            return Err(Error::InvalidDomain(format!(
                "variance closed form needs N + m >= 3, got N = {n}, m = {m}"
            )));
        }
        let q = self.q_f64();
        Ok(self.mean_f64() * (n - 1) as f64 * (1.0 - q) / (n + m - 2) as f64)
    }
}

/// `E[X^k]` for `X ~ H(population, successes, draws)`.
///
/// Level `d` of the recursion is `H(L - d, K - d, l - d)`; the table is filled
/// from the deepest level up, level `d` needing powers up to `k - d`.
fn hypergeometric_moment(pop: u64, succ: u64, draws: u64, k: u32) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    let k = k as usize;
    // below[j] = E[Y^j] at the level under the current one
    let mut below: Vec<BigRational> = vec![BigRational::one()];
    for d in (0..k).rev() {
        let d64 = d as u64;
        let scale = if succ <= d64 || draws <= d64 {
            BigRational::zero()
        } else {
            ratio((succ - d64) * (draws - d64), pop - d64)
        };
        let powers = k - d;
        let mut here = Vec::with_capacity(powers + 1);
        here.push(BigRational::one());
        for j in 1..=powers {
            // E[(Y + 1)^(j - 1)] = sum_i C(j - 1, i) E[Y^i]
            let shifted = (0..j).fold(BigRational::zero(), |acc, i| {
                acc + int(binom(j as u64 - 1, i as u64)) * &below[i]
            });
            here.push(&scale * shifted);
        }
        below = here;
    }
    below.swap_remove(k)
}

pub fn support_pmf(slots: u64, edges: u64, s: u64) -> Result<BigRational> {
    Ok(SupportLaw::new(slots, edges)?.pmf(s))
}

pub fn support_moment(slots: u64, edges: u64, k: u32) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::InvalidDomain(
            "moment order must be at least 1".into(),
        ));
    }
    Ok(SupportLaw::new(slots, edges)?.moment(k))
}

pub fn support_variance(slots: u64, edges: u64) -> Result<BigRational> {
    SupportLaw::new(slots, edges)?.variance()
}

/// Union bound on some slot receiving at least `k` of the `m` edges:
/// `N <N over m - k> / <N over m> = N prod_{i < k} (m - i) / (N + m - 1 - i)`.
pub fn multiplicity_bound(slots: u64, edges: u64, k: u64) -> Result<BigRational> {
    SupportLaw::new(slots, edges)?;
    if k > edges {
        return Ok(BigRational::zero());
    }
    Ok((0..k).fold(int(slots), |acc, i| {
        acc * ratio(edges - i, slots + edges - 1 - i)
    }))
}

/// The same bound in floating point.
pub fn multiplicity_bound_f64(slots: u64, edges: u64, k: u64) -> f64 {
    if k > edges {
        return 0.0;
    }
    (0..k).fold(slots as f64, |acc, i| {
        acc * (edges - i) as f64 / (slots + edges - 1 - i) as f64
    })
}

/// Support sizes of `trials` independent uniform multigraphs with `m` edges on
/// `K_{n,n}`. Trial `i` uses a seed derived from `(seed, n, m, i)`.
pub fn sample_support_sizes(n: usize, edges: u64, trials: usize, seed: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::InvalidDomain(
            "bipartite part size must be positive".into(),
        ));
    }
    let slots = n * n;
    Ok((0..trials)
        .into_par_iter()
        .map_init(Vec::new, |counts, i| {
            let mut rng = rng::seeded(rng::derive_seed(seed, &[n as u64, edges, i as u64]));
            sample_counts_into(&mut rng, slots, edges, counts);
            counts.iter().filter(|&&c| c > 0).count() as u64
        })
        .collect())
}

/// Fraction of samples with `|Z - mq| <= epsilon * mq`.
pub fn concentration_fraction(samples: &[u64], law: &SupportLaw, epsilon: f64) -> f64 {
    if samples.is_empty() {
        return 1.0;
    }
    let mean = law.mean_f64();
    let within = samples
        .iter()
        .filter(|&&z| (z as f64 - mean).abs() <= epsilon * mean)
        .count();
    within as f64 / samples.len() as f64
}

/// Empirical `Pr[|Z - mq| <= epsilon mq]` over `trials` samples on `K_{n,n}`.
pub fn concentration_check(
    n: usize,
    edges: u64,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if edges == 0 {
        return Err(Error::InvalidDomain("concentration needs m >= 1".into()));
    }
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::InvalidDomain(format!(
            "epsilon must be non-negative, got {epsilon}"
        )));
    }
    let law = SupportLaw::new((n * n) as u64, edges)?;
    let samples = sample_support_sizes(n, edges, trials, seed)?;
    Ok(concentration_fraction(&samples, &law, epsilon))
}

/// Chebyshev's lower bound `1 - Var / (epsilon mq)^2` on the concentration fraction.
pub fn chebyshev_floor(law: &SupportLaw, epsilon: f64) -> Result<f64> {
    let lambda = epsilon * law.mean_f64();
    Ok(1.0 - law.variance_f64()? / (lambda * lambda))
}

/// Lossy conversion for display.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
