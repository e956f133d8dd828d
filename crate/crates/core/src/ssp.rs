//! Subset-sum instances and exact combinatorial ground truth.
//!
//! Everything downstream — network construction, intensity propagation,
//! threshold read-out — is checked against the two oracles in this module:
//! a pseudo-polynomial counting table ([`SubsetCountTable`]) and a brute-force
//! enumeration ([`enumerate_subsets`]). The two are implemented independently
//! on purpose; agreement between them is part of the test surface.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest instance size accepted by exhaustive enumeration.
pub const MAX_ENUMERATION_SIZE: usize = 30;

/// A subset-sum instance: positive integer elements and an optional target.
///
/// Construction goes through [`SspInstance::new`], which validates that the
/// element list is non-empty, every element is a positive integer, the total
/// fits `u64`, and the target (when present) lies in `0..=total`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct SspInstance {
    elements: Vec<u64>,
    target: Option<u64>,
    total: u64,
}

/// Wire form of an instance file: `{"elements": [...], "target": int|null}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawInstance {
    elements: Vec<i64>,
    #[serde(default)]
    target: Option<i64>,
}

impl TryFrom<RawInstance> for SspInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        SspInstance::new(&raw.elements, raw.target)
    }
}

impl From<SspInstance> for RawInstance {
    fn from(inst: SspInstance) -> Self {
        RawInstance {
            elements: inst.elements.iter().map(|&e| e as i64).collect(),
            target: inst.target.map(|t| t as i64),
        }
    }
}

impl SspInstance {
    /// Validates and builds an instance from signed wire values.
    pub fn new(elements: &[i64], target: Option<i64>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyElements);
        }
        let mut checked = Vec::with_capacity(elements.len());
        let mut total: u64 = 0;
        for (index, &value) in elements.iter().enumerate() {
            if value <= 0 {
                return Err(Error::NonPositiveElement { index, value });
            }
            let e = value as u64;
            total = total.checked_add(e).ok_or(Error::ElementOverflow)?;
            checked.push(e);
        }
        let target = match target {
            None => None,
            Some(t) => {
                if t < 0 || t as u64 > total {
                    return Err(Error::TargetOutOfRange { target: t, total });
                }
                Some(t as u64)
            }
        };
        Ok(SspInstance { elements: checked, target, total })
    }

    /// Builds an instance from elements already known to be positive.
    pub fn from_elements(elements: &[u64]) -> Result<Self> {
        let signed: Vec<i64> = elements.iter().map(|&e| e as i64).collect();
        SspInstance::new(&signed, None)
    }

    /// The instance `{first n primes}` used throughout the scaling studies.
    pub fn successive_primes(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyElements);
        }
        let primes = first_primes(n as usize);
        SspInstance::from_elements(&primes)
    }

    /// Returns a copy with the target replaced.
    pub fn with_target(&self, target: u64) -> Result<Self> {
        if target > self.total {
            return Err(Error::TargetOutOfRange { target: target as i64, total: self.total });
        }
        let mut inst = self.clone();
        inst.target = Some(target);
        Ok(inst)
    }

    /// The elements, in input order.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    /// Number of elements, `N`.
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// Sum of all elements; the largest reachable sum and the widest column.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// The target sum, when the instance carries one.
    pub fn target(&self) -> Option<u64> {
        self.target
    }

    /// Parses the instance file format, validating on the way in.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawInstance =
            serde_json::from_str(text).map_err(|e| Error::InvalidParams(format!("instance JSON: {e}")))?;
        SspInstance::try_from(raw)
    }

    /// Serializes to the instance file format.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }
}

/// Subset counts for every sum `0..=total`, from the standard DP recurrence
/// `row_i[s] = row_{i-1}[s] + row_{i-1}[s - e_i]`.
///
/// Counts are exact in `u64`, which holds because the table is only built for
/// `N < 64` (the row sum is `2^N`); larger instances get [`Error::CountOverflow`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetCountTable {
    counts: Vec<u64>,
    size: usize,
}

impl SubsetCountTable {
    /// Builds the counting table for an instance.
    pub fn build(inst: &SspInstance) -> Result<Self> {
        if inst.size() >= 64 {
            return Err(Error::CountOverflow);
        }
        let total = inst.total() as usize;
        let mut counts = vec![0u64; total + 1];
        counts[0] = 1;
        for &e in inst.elements() {
            let e = e as usize;
            // Walk sums downward so each element is used at most once.
            for s in (e..=total).rev() {
                counts[s] += counts[s - e];
            }
        }
        Ok(SubsetCountTable { counts, size: inst.size() })
    }

    /// Number of subsets summing to `s`; zero outside `0..=total`.
    pub fn count(&self, s: u64) -> u64 {
        self.counts.get(s as usize).copied().unwrap_or(0)
    }

    /// Whether any subset reaches `s`.
    pub fn is_achievable(&self, s: u64) -> bool {
        self.count(s) > 0
    }

    /// The full count row, indexed by sum.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Largest representable sum (the element total).
    pub fn total(&self) -> u64 {
        (self.counts.len() - 1) as u64
    }

    /// All achievable sums, ascending.
    pub fn achievable_sums(&self) -> Vec<u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(s, _)| s as u64)
            .collect()
    }

    /// Number of subsets counted, `2^N`.
    pub fn num_subsets(&self) -> u64 {
        1u64 << self.size
    }
}

/// Exhaustively enumerates all `2^N` subsets, yielding `(mask, sum)` pairs.
///
/// Kept deliberately separate from [`SubsetCountTable`] as a second route to
/// the same ground truth. Capped at [`MAX_ENUMERATION_SIZE`] elements.
pub fn enumerate_subsets(inst: &SspInstance) -> Result<impl Iterator<Item = (u32, u64)> + '_> {
    if inst.size() > MAX_ENUMERATION_SIZE {
        return Err(Error::InstanceTooLarge { size: inst.size(), max: MAX_ENUMERATION_SIZE });
    }
    let n = inst.size();
    Ok((0u32..(1u32 << n)).map(move |mask| {
        let sum = inst
            .elements()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .sum();
        (mask, sum)
    }))
}

/// Counts subsets per sum by enumeration; the slow cross-check for the DP table.
pub fn count_by_enumeration(inst: &SspInstance) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; inst.total() as usize + 1];
    for (_, sum) in enumerate_subsets(inst)? {
        counts[sum as usize] += 1;
    }
    Ok(counts)
}

/// Decides whether the instance's target is reachable.
///
/// Runs a boolean reachability DP rather than the counting table, so it works
/// for any instance size. Errors with [`Error::MissingTarget`] when the
/// instance has no target.
pub fn decide(inst: &SspInstance) -> Result<bool> {
    let target = inst.target().ok_or(Error::MissingTarget)?;
    let t = target as usize;
    let mut reachable = vec![false; t + 1];
    reachable[0] = true;
    for &e in inst.elements() {
        let e = e as usize;
        if e > t {
            continue;
        }
        for s in (e..=t).rev() {
            if reachable[s - e] {
                reachable[s] = true;
            }
        }
    }
    Ok(reachable[t])
}

/// First `n` primes, by trial division; plenty for instance sizes in scope.
pub fn first_primes(n: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(n);
    let mut candidate = 2u64;
    while primes.len() < n {
        if primes.iter().take_while(|&&p| p * p <= candidate).all(|&p| candidate % p != 0) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// Sum of the first `n` primes; the `S` entering the scaling formulas.
pub fn sum_of_first_primes(n: u32) -> u64 {
    first_primes(n as usize).iter().sum()
}
