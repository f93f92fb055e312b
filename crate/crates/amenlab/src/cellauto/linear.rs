//! Matrices over the group ring 𝔽_pG and exact row reduction over 𝔽_p.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{Element, GeneratorWord, MarkedGroup};

/// A finitely supported configuration G → 𝔽_pⁿ; absent elements are 0.
pub type LinConfig = BTreeMap<Element, Vec<u32>>;

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat
    let (mut base, mut e, mut r) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Row-reduces in place; returns the pivot columns.
fn reduce(rows: &mut [Vec<u32>], ncols: usize, p: u32) -> Vec<usize> {
    let pm = p as u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(r, piv);
        let s = inv_mod(rows[r][col], p) as u64;
        for x in rows[r].iter_mut() {
            *x = (*x as u64 * s % pm) as u32;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let f = rows[i][col] as u64;
                let (top, rest) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (y, &t) in rest.iter_mut().zip(top.iter()) {
                    *y = ((*y as u64 + pm * pm - f * t as u64) % pm) as u32;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<u32>], p: u32) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut m = rows.to_vec();
    reduce(&mut m, ncols, p).len()
}

/// Basis of {c : Σ cₐ·rowₐ = 0}.
pub fn left_kernel(rows: &[Vec<u32>], ncols: usize, p: u32) -> Vec<Vec<u32>> {
    let m = rows.len();
    let mut aug: Vec<Vec<u32>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.resize(ncols, 0);
            v.extend((0..m).map(|j| u32::from(i == j)));
            v
        })
        .collect();
    let k = reduce(&mut aug, ncols, p).len();
    aug[k..].iter().map(|r| r[ncols..].to_vec()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingMatrix {
    group: MarkedGroup,
    p: u32,
    n: usize,
    /// entries[i][j]: sorted (element, nonzero coefficient) pairs.
    entries: Vec<Vec<Vec<(Element, u32)>>>,
}

impl GroupRingMatrix {
    pub fn new(group: &MarkedGroup, p: u32, entries: Vec<Vec<Vec<(GeneratorWord, i64)>>>) -> Result<Self> {
        let mut elems = Vec::with_capacity(entries.len());
        for row in entries {
            let mut r = Vec::with_capacity(row.len());
            for e in row {
                let mut v = Vec::with_capacity(e.len());
                for (w, c) in e {
                    v.push((group.eval(&w)?, c.rem_euclid(p as i64) as u32));
                }
                r.push(v);
            }
            elems.push(r);
        }
        Self::from_elements(group, p, elems)
    }

    pub fn from_elements(group: &MarkedGroup, p: u32, entries: Vec<Vec<Vec<(Element, u32)>>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("field size {p} is not prime")));
        }
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix must be square".into()));
        }
        let entries = entries
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| {
                        let mut acc: BTreeMap<Element, u32> = BTreeMap::new();
                        for (g, c) in e {
                            let s = acc.entry(g).or_insert(0);
                            *s = (*s + c % p) % p;
                        }
                        acc.into_iter().filter(|(_, c)| *c != 0).collect()
                    })
                    .collect()
            })
            .collect();
        Ok(GroupRingMatrix { group: group.clone(), p, n, entries })
    }

    /// [[a+b, 0], [b+c, 0]] over C₂*C₂*C₂.
    pub fn muller(p: u32) -> Result<Self> {
        let g = MarkedGroup::parse("c2free:3")?;
        let w = |s: &str| g.parse_word(s);
        Self::new(&g, p, vec![vec![vec![(w("a")?, 1), (w("b")?, 1)], vec![]], vec![vec![(w("b")?, 1), (w("c")?, 1)], vec![]]])
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn field(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &[(Element, u32)] {
        &self.entries[i][j]
    }

    pub fn support(&self) -> BTreeSet<Element> {
        self.entries.iter().flatten().flatten().map(|(g, _)| g.clone()).collect()
    }

    /// (M*)ᵢⱼ = (Mⱼᵢ)* with g* = g⁻¹.
    pub fn adjoint(&self) -> Result<Self> {
        let mut e = vec![vec![Vec::new(); self.n]; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                for (g, c) in &self.entries[j][i] {
                    e[i][j].push((self.group.inverse(g)?, *c));
                }
            }
        }
        Self::from_elements(&self.group, self.p, e)
    }

    /// x·M: (xM)ⱼ(gh) += xᵢ(g)·Mᵢⱼ(h).
    pub fn apply(&self, x: &LinConfig) -> Result<LinConfig> {
        let mut out: LinConfig = BTreeMap::new();
        for (g, v) in x {
            for i in 0..self.n {
                if v[i] == 0 {
                    continue;
                }
                for j in 0..self.n {
                    for (h, c) in &self.entries[i][j] {
                        let t = out.entry(self.group.mul(g, h)?).or_insert_with(|| vec![0; self.n]);
                        t[j] = (t[j] + v[i] * c) % self.p;
                    }
                }
            }
        }
        out.retain(|_, v| v.iter().any(|&c| c != 0));
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let m: Vec<Vec<Vec<Value>>> = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.iter().map(|(g, c)| json!([self.group.key_text(g), c])).collect())
                    .collect()
            })
            .collect();
        json!({"group": self.group.spec(), "field": self.p, "matrix": m})
    }

    /// `{"group": …, "field": p, "matrix": [[[[word, coeff], …], …], …]}`
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(format!("linear rule: {m}"));
        let group = MarkedGroup::parse(v["group"].as_str().ok_or_else(|| bad("missing group"))?)?;
        let p = v["field"].as_u64().ok_or_else(|| bad("missing field"))? as u32;
        let rows = v["matrix"].as_array().ok_or_else(|| bad("missing matrix"))?;
        let mut entries = Vec::new();
        for row in rows {
            let mut r = Vec::new();
            for e in row.as_array().ok_or_else(|| bad("row is not a list"))? {
                let mut terms = Vec::new();
                for t in e.as_array().ok_or_else(|| bad("entry is not a list"))? {
                    let word = t[0].as_str().ok_or_else(|| bad("term word"))?;
                    let c = t[1].as_i64().ok_or_else(|| bad("term coefficient"))?;
                    terms.push((group.parse_word(word)?, c));
                }
                r.push(terms);
            }
            entries.push(r);
        }
        Self::new(&group, p, entries)
    }
}

/// ⟨x, y⟩ = Σ_g Σᵢ xᵢ(g)yᵢ(g).
pub fn pairing(x: &LinConfig, y: &LinConfig, p: u32) -> u32 {
    let mut s = 0u64;
    for (g, v) in x {
        if let Some(w) = y.get(g) {
            for (a, b) in v.iter().zip(w) {
                s = (s + *a as u64 * *b as u64) % p as u64;
            }
        }
    }
    s as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_and_ranks() {
        let rows = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        assert_eq!(rank(&rows, 2), 2);
        assert_eq!(rank(&rows, 3), 3);
        assert_eq!(left_kernel(&rows, 3, 2), vec![vec![1, 1, 1]]);
        assert!(left_kernel(&rows, 3, 3).is_empty());
    }

    #[test]
    fn adjoint_examples() {
        let z = MarkedGroup::parse("z:1").unwrap();
        let m = GroupRingMatrix::new(&z, 2, vec![vec![vec![(GeneratorWord::identity(), 1), (z.parse_word("x").unwrap(), 1)]]]).unwrap();
        let a = m.adjoint().unwrap();
        let keys: Vec<String> = a.entry(0, 0).iter().map(|(g, _)| z.key_text(g)).collect();
        assert_eq!(keys, vec!["-1", "0"]);
        assert_eq!(a.adjoint().unwrap(), m);
        let mu = GroupRingMatrix::muller(2).unwrap();
        let ma = mu.adjoint().unwrap();
        assert_eq!(ma.entry(0, 0), mu.entry(0, 0));
        assert_eq!(ma.entry(0, 1), mu.entry(1, 0));
        assert!(ma.entry(1, 0).is_empty());
    }

    #[test]
    fn json_round_trip() {
        let mu = GroupRingMatrix::muller(2).unwrap();
        assert_eq!(GroupRingMatrix::from_json(&mu.to_json()).unwrap(), mu);
        assert!(GroupRingMatrix::muller(4).is_err());
    }
}
