//! Y = cycles of permutations in Sym(n), Xᵢ = cycles through i.

use serde::Serialize;

use crate::error::{Error, Result};

pub const OVERLAPS_MAX_N: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapsFamily {
    pub n: usize,
    /// (permutation index, bitmask of the cycle).
    pub y: Vec<(u32, u16)>,
    /// x[i]: indices into y of the cycles through i (0-based).
    pub x: Vec<Vec<usize>>,
    /// Y carries one extra point outside every Xᵢ (n ≥ 2).
    pub augmented: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverlapsReport {
    pub n: usize,
    pub y_size: usize,
    /// Σ_{i=1}^n n!/i.
    pub y_expected: usize,
    pub x_sizes: Vec<usize>,
    /// Number of (i, I) pairs checked against #X_{i,I} = n!/#I.
    pub pairs_checked: usize,
    /// (i, I, found, expected), 1-based.
    pub pair_failures: Vec<(usize, Vec<usize>, usize, usize)>,
    /// #X_{i,I} ≥ #Y/((1+log n)#I) for every pair.
    pub bound_holds: bool,
    pub augmented_size: usize,
    pub union_is_proper: bool,
    /// The same bound with #Y replaced by the augmented size.
    pub augmented_bound_holds: bool,
    pub passed: bool,
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn next_permutation(p: &mut [u8]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn overlaps_family(n: usize) -> Result<OverlapsFamily> {
    if n > OVERLAPS_MAX_N {
        return Err(Error::CapExceeded { what: "overlaps n", limit: OVERLAPS_MAX_N, reached: n });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut perm: Vec<u8> = (0..n as u8).collect();
    let mut y = Vec::new();
    let mut x = vec![Vec::new(); n];
    let mut idx = 0u32;
    loop {
        let mut seen = 0u16;
        for s in 0..n {
            if seen >> s & 1 == 1 {
                continue;
            }
            let mut mask = 0u16;
            let mut t = s;
            while mask >> t & 1 == 0 {
                mask |= 1 << t;
                t = perm[t] as usize;
            }
            seen |= mask;
            for (i, xi) in x.iter_mut().enumerate() {
                if mask >> i & 1 == 1 {
                    xi.push(y.len());
                }
            }
            y.push((idx, mask));
        }
        idx += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(OverlapsFamily { n, y, x, augmented: n >= 2 })
}

impl OverlapsFamily {
    pub fn report(&self) -> OverlapsReport {
        let n = self.n;
        let nf = factorial(n);
        let y_expected = (1..=n).map(|i| nf / i).sum();
        let log_term = 1.0 + (n as f64).ln();
        let augmented_size = self.y.len() + usize::from(self.augmented);
        let mut pair_failures = Vec::new();
        let mut pairs_checked = 0;
        let mut bound_holds = true;
        let mut augmented_bound_holds = true;
        for set in 1u16..(1 << n) {
            let size = set.count_ones() as usize;
            let mut counts = vec![0usize; n];
            for &(_, c) in &self.y {
                let hit = c & set;
                if hit.count_ones() == 1 {
                    counts[hit.trailing_zeros() as usize] += 1;
                }
            }
            for i in (0..n).filter(|&i| set >> i & 1 == 1) {
                pairs_checked += 1;
                let expected = nf / size;
                if counts[i] != expected {
                    let members = (0..n).filter(|&j| set >> j & 1 == 1).map(|j| j + 1).collect();
                    pair_failures.push((i + 1, members, counts[i], expected));
                }
                let found = counts[i] as f64;
                bound_holds &= found >= self.y.len() as f64 / (log_term * size as f64);
                augmented_bound_holds &= found >= augmented_size as f64 / (log_term * size as f64);
            }
        }
        let covered = self.x.iter().flatten().collect::<std::collections::HashSet<_>>().len();
        let union_is_proper = covered < augmented_size;
        let passed = self.y.len() == y_expected && pair_failures.is_empty();
        OverlapsReport {
            n,
            y_size: self.y.len(),
            y_expected,
            x_sizes: self.x.iter().map(|v| v.len()).collect(),
            pairs_checked,
            pair_failures,
            bound_holds,
            augmented_size,
            union_is_proper,
            augmented_bound_holds,
            passed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_families() {
        let r = overlaps_family(2).unwrap().report();
        assert_eq!((r.y_size, r.x_sizes[0]), (3, 2));
        assert!(r.passed && r.union_is_proper);
        assert!(!r.augmented_bound_holds);
        let r = overlaps_family(3).unwrap().report();
        assert_eq!(r.y_size, 11);
        assert!(r.passed && r.bound_holds && r.augmented_bound_holds);
        assert!(overlaps_family(9).unwrap_err().is_cap());
    }
}
