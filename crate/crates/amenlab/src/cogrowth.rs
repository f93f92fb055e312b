//! Reduced words in the free cover F_S that map to the identity, and the
//! functional equation B(z)/(1−z²) = C(z/(1+qz²))/(1+qz²) relating them to
//! all closed walks, with q = #S± − 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::MarkedGroup;
use crate::orbits::{build_ball_capped, default_vertex_cap, MarkedGSet, SchreierGraph};
use crate::text;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CogrowthCounts {
    pub group: String,
    /// #S±, the number of formal letters.
    pub letters: usize,
    /// c(k) for k = 0..=n.
    #[serde(serialize_with = "ser_u128_vec")]
    pub counts: Vec<u128>,
}

fn ser_u128_vec<S: serde::Serializer>(v: &[u128], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&c.to_string())?;
    }
    seq.end()
}

impl CogrowthCounts {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,c(n)\n");
        for (k, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{k},{c}\n"));
        }
        out
    }
}

/// Adjacency column for each formal letter; s⁻¹ of an involution s uses s's column.
fn formal_columns(group: &MarkedGroup, g: &SchreierGraph) -> Vec<usize> {
    group
        .formal_letters()
        .into_iter()
        .map(|l| {
            g.letters()
                .iter()
                .position(|&m| m == l)
                .or_else(|| g.letters().iter().position(|&m| m.generator == l.generator))
                .expect("every generator labels an edge")
        })
        .collect()
}

fn closed_ball(group: &MarkedGroup, n: usize) -> Result<SchreierGraph> {
    let x = MarkedGSet::regular(group.clone());
    build_ball_capped(&x, n / 2, default_vertex_cap())
}

fn overflow(k: usize) -> Error {
    Error::CapExceeded { what: "u128 word count at length", limit: u128::BITS as usize, reached: k }
}

/// c(k) for k ≤ n by dynamic programming over (ball vertex, last formal
/// letter), forbidding a letter right after its formal inverse.
pub fn reduced_closed_counts(group: &MarkedGroup, n: usize) -> Result<CogrowthCounts> {
    let g = closed_ball(group, n)?;
    let letters = group.formal_letters();
    let cols = formal_columns(group, &g);
    let s = letters.len();
    let inverse_of: Vec<usize> =
        letters.iter().map(|l| letters.iter().position(|m| *m == l.inv()).expect("formal alphabet is closed")).collect();
    let nv = g.len();
    let base = g.basepoint();
    let mut counts = vec![1u128];
    // cur[v * s + l]: reduced words ending at v whose last letter is l
    let mut cur = vec![0u128; nv * s];
    let mut next = vec![0u128; nv * s];
    for k in 1..=n {
        next.iter_mut().for_each(|c| *c = 0);
        for v in 0..nv {
            for (li, &col) in cols.iter().enumerate() {
                let Some(t) = g.neighbor(v, col) else { continue };
                let add = if k == 1 {
                    u128::from(v == base)
                } else {
                    let mut a: u128 = 0;
                    for prev in 0..s {
                        if prev != inverse_of[li] {
                            a = a.checked_add(cur[v * s + prev]).ok_or_else(|| overflow(k))?;
                        }
                    }
                    a
                };
                let slot = &mut next[t * s + li];
                *slot = slot.checked_add(add).ok_or_else(|| overflow(k))?;
            }
        }
        std::mem::swap(&mut cur, &mut next);
        let mut c: u128 = 0;
        for l in 0..s {
            c = c.checked_add(cur[base * s + l]).ok_or_else(|| overflow(k))?;
        }
        counts.push(c);
    }
    Ok(CogrowthCounts { group: group.spec(), letters: s, counts })
}

/// Closed walks of each length ≤ n in the formal letters (no reduction).
pub fn closed_walk_counts(group: &MarkedGroup, n: usize) -> Result<Vec<u128>> {
    let g = closed_ball(group, n)?;
    let cols = formal_columns(group, &g);
    let base = g.basepoint();
    let mut cur = vec![0u128; g.len()];
    cur[base] = 1;
    let mut out = vec![1u128];
    for k in 1..=n {
        let mut next = vec![0u128; g.len()];
        for v in 0..g.len() {
            if cur[v] == 0 {
                continue;
            }
            for &col in &cols {
                if let Some(t) = g.neighbor(v, col) {
                    next[t] = next[t].checked_add(cur[v]).ok_or_else(|| overflow(k))?;
                }
            }
        }
        cur = next;
        out.push(cur[base]);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CogrowthReport {
    pub letters: usize,
    /// max over computed even lengths of c(2n)^{1/2n}; absent when degenerate.
    #[serde(serialize_with = "text::ser_opt_float")]
    pub gamma_hat: Option<f64>,
    #[serde(serialize_with = "text::ser_opt_float")]
    pub predicted_rho: Option<f64>,
    #[serde(serialize_with = "text::ser_opt_float")]
    pub rho_reference: Option<f64>,
    #[serde(serialize_with = "text::ser_opt_float")]
    pub residual: Option<f64>,
    /// No c(2n) > 0, or γ̂ ≤ 1, where ρ = (γ + (#S±−1)/γ)/#S± does not apply.
    pub degenerate: bool,
}

pub fn cogrowth_report(counts: &CogrowthCounts, rho_reference: Option<f64>) -> CogrowthReport {
    let s = counts.letters as f64;
    let gamma = counts
        .counts
        .iter()
        .enumerate()
        .skip(2)
        .step_by(2)
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| (c as f64).powf(1.0 / k as f64))
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
    let degenerate = gamma.is_none_or(|g| g <= 1.0);
    let predicted = if degenerate { None } else { gamma.map(|g| (g + (s - 1.0) / g) / s) };
    let residual = match (predicted, rho_reference) {
        (Some(p), Some(r)) => Some((p - r).abs()),
        _ => None,
    };
    CogrowthReport { letters: counts.letters, gamma_hat: gamma, predicted_rho: predicted, rho_reference, residual, degenerate }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesCheck {
    pub degree: usize,
    pub q: i64,
    #[serde(serialize_with = "ser_big_vec")]
    pub lhs: Vec<BigInt>,
    #[serde(serialize_with = "ser_big_vec")]
    pub rhs: Vec<BigInt>,
    #[serde(serialize_with = "text::ser_big_ratio")]
    pub max_residual: BigRational,
}

fn ser_big_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&c.to_string())?;
    }
    seq.end()
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::from(1);
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Both sides of the functional equation at the basepoint entry, expanded
/// to degree n. Coefficient k of the left side is Σ_{j ≤ k, j ≡ k (2)} c(j);
/// of the right side Σ_{m+2i=k} a(m)·C(m+i, i)·(−q)^i with a the closed-walk
/// counts.
pub fn series_identity_check(group: &MarkedGroup, n: usize) -> Result<SeriesCheck> {
    let b = reduced_closed_counts(group, n)?.counts;
    let a = closed_walk_counts(group, n)?;
    let q = group.formal_letters().len() as i64 - 1;
    let lhs: Vec<BigInt> =
        (0..=n).map(|k| (0..=k).filter(|j| (k - j) % 2 == 0).map(|j| BigInt::from(b[j])).sum()).collect();
    let minus_q = BigInt::from(-q);
    let rhs: Vec<BigInt> = (0..=n)
        .map(|k| {
            let mut t = BigInt::zero();
            for i in 0..=k / 2 {
                let m = k - 2 * i;
                t += BigInt::from(a[m]) * binomial(m + i, i) * num_traits::pow(minus_q.clone(), i);
            }
            t
        })
        .collect();
    let max_residual = lhs.iter().zip(&rhs).map(|(l, r)| (l - r).abs()).max().unwrap_or_default();
    Ok(SeriesCheck { degree: n, q, lhs, rhs, max_residual: BigRational::from_integer(max_residual) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GeneratorWord, Letter};

    fn grp(s: &str) -> MarkedGroup {
        MarkedGroup::parse(s).unwrap()
    }

    /// Brute force over all reduced words of length k.
    fn brute(group: &MarkedGroup, k: usize) -> u128 {
        let letters = group.formal_letters();
        let mut total = 0;
        let mut stack: Vec<Vec<Letter>> = vec![vec![]];
        while let Some(w) = stack.pop() {
            if w.len() == k {
                if group.is_identity(&group.eval(&GeneratorWord(w)).unwrap()) {
                    total += 1;
                }
                continue;
            }
            for &l in &letters {
                if w.last() != Some(&l.inv()) {
                    let mut v = w.clone();
                    v.push(l);
                    stack.push(v);
                }
            }
        }
        total
    }

    #[test]
    fn small_counts() {
        assert_eq!(reduced_closed_counts(&grp("z:2"), 4).unwrap().counts, vec![1, 0, 0, 0, 8]);
        assert_eq!(reduced_closed_counts(&grp("z:1"), 4).unwrap().counts, vec![1, 0, 0, 0, 0]);
        assert!(reduced_closed_counts(&grp("free:2"), 8).unwrap().counts[1..].iter().all(|&c| c == 0));
    }

    #[test]
    fn dp_matches_brute_force() {
        for spec in ["z:2", "zmod:3", "dihedral", "lamplighter", "grigorchuk"] {
            let g = grp(spec);
            let n = if spec == "grigorchuk" { 6 } else { 7 };
            let c = reduced_closed_counts(&g, n).unwrap();
            for k in 0..=n {
                assert_eq!(c.counts[k], brute(&g, k), "{spec} k={k}");
            }
        }
    }

    #[test]
    fn series_is_formal() {
        for (spec, n) in [("zmod:5", 12), ("z:1", 10), ("trivial", 6), ("z:2", 8), ("dihedral", 9), ("free:2", 8)] {
            let r = series_identity_check(&grp(spec), n).unwrap();
            assert!(r.max_residual.is_zero(), "{spec}: {:?} vs {:?}", r.lhs, r.rhs);
        }
    }

    #[test]
    fn degenerate_reports() {
        let r = cogrowth_report(&reduced_closed_counts(&grp("free:2"), 10).unwrap(), None);
        assert!(r.degenerate && r.predicted_rho.is_none());
        let r = cogrowth_report(&reduced_closed_counts(&grp("z:1"), 10).unwrap(), Some(1.0));
        assert!(r.degenerate);
    }
}
