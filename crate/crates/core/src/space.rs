//! The space of configurations of `t` indistinguishable pebbles on `N` vertices.
//!
//! Every multiset is equally likely. This is *not* the law obtained by
//! dropping pebbles independently on uniform vertices, which favours spread-out
//! configurations.

use num_bigint::BigUint;
use rand::Rng;

use crate::config::PebbleConfiguration;
use crate::error::{Error, Result};
use crate::rng;

/// Default ceiling on the number of configurations [`enumerate_configurations`] will emit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Multiset coefficient `C(N + t - 1, t)`.
pub fn configuration_count(vertex_count: u64, pebbles: u64) -> Result<BigUint> {
    if vertex_count == 0 {
        return Err(Error::InvalidDomain(
            "configuration space needs N >= 1".into(),
        ));
    }
    Ok(multiset_coefficient(vertex_count, pebbles))
}

pub(crate) fn multiset_coefficient(n: u64, k: u64) -> BigUint {
    if n == 0 {
        return BigUint::from(u32::from(k == 0));
    }
    let top = n + k - 1;
    let k = k.min(top - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= top - i;
        acc /= i + 1;
    }
    acc
}

/// Uniform random configuration, reproducible from `seed`.
pub fn sample_configuration(
    vertex_count: usize,
    pebbles: u64,
    seed: u64,
) -> Result<PebbleConfiguration> {
    if vertex_count == 0 {
        return Err(Error::InvalidDomain(
            "configuration space needs N >= 1".into(),
        ));
    }
    let mut rng = rng::seeded(seed);
    let mut counts = Vec::new();
    sample_counts_into(&mut rng, vertex_count, pebbles, &mut counts);
    Ok(PebbleConfiguration::new(counts))
}

/// Stars and bars: a uniform `t`-subset of `N + t - 1` slots marks the pebbles,
/// the remaining `N - 1` slots are separators between consecutive vertices.
///
/// Reuses `counts` to avoid reallocating in hot loops. `vertex_count >= 1`.
pub fn sample_counts_into<R: Rng + ?Sized>(
    rng: &mut R,
    vertex_count: usize,
    pebbles: u64,
    counts: &mut Vec<u32>,
) {
    debug_assert!(vertex_count >= 1);
    counts.clear();
    counts.resize(vertex_count, 0);
    let t = usize::try_from(pebbles).expect("pebble count fits in memory");
    if t == 0 {
        return;
    }
    let slots = vertex_count + t - 1;
    let mut is_pebble = vec![false; slots];
    for s in rand::seq::index::sample(rng, slots, t) {
        is_pebble[s] = true;
    }
    let mut vertex = 0;
    for pebble in is_pebble {
        if pebble {
            counts[vertex] += 1;
        } else {
            vertex += 1;
        }
    }
}

/// Every configuration of `t` pebbles on `N` vertices, each once, in decreasing
/// lexicographic order of the count vector: `(t, 0, ..)` first, `(.., 0, t)` last.
pub fn enumerate_configurations(
    vertex_count: usize,
    pebbles: u64,
    cap: u64,
) -> Result<Configurations> {
    let count = configuration_count(vertex_count as u64, pebbles)?;
    if count > BigUint::from(cap) {
        return Err(Error::EnumerationCap {
            count: count.to_string(),
            cap,
        });
    }
    let t = u32::try_from(pebbles).map_err(|_| Error::InvalidDomain("too many pebbles".into()))?;
    let mut first = vec![0; vertex_count];
    first[0] = t;
    Ok(Configurations { next: Some(first) })
}

/// Iterator returned by [`enumerate_configurations`].
#[derive(Debug, Clone)]
pub struct Configurations {
    next: Option<Vec<u32>>,
}

impl Iterator for Configurations {
    type Item = PebbleConfiguration;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let last_idx = succ.len() - 1;
        let last = std::mem::take(&mut succ[last_idx]);
        if let Some(i) = (0..last_idx).rev().find(|&i| succ[i] > 0) {
            succ[i] -= 1;
            succ[i + 1] = last + 1;
            self.next = Some(succ);
        }
        Some(PebbleConfiguration::new(current))
    }
}
