//! The Fibonacci subshift (σ: 0↦01, 1↦0) and elements of its topological
//! full group given by cylinder tables: on the cylinder where
//! x[anchor..anchor+|w|] = w, the element acts as the shift Tᵏ, with
//! (Tᵏx)ᵢ = xᵢ₊ₖ.
//!
//! Points are only ever seen through finite windows, so bijectivity is
//! certified at a stated depth.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_LEN: usize = 24;
pub const DEFAULT_SHIFT_CAP: i64 = 4;

pub fn substitute(w: &str) -> String {
    w.chars().map(|c| if c == '0' { "01" } else { "0" }).collect()
}

/// Prefix of the fixed point σ^∞(0).
pub fn fib_prefix(len: usize) -> String {
    let mut w = String::from("0");
    while w.len() < len {
        w = substitute(&w);
    }
    w.truncate(len);
    w
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubshiftLanguage {
    pub max_len: usize,
    /// by_len[n] = admissible words of length n.
    pub by_len: Vec<BTreeSet<String>>,
}

fn insert_factors(w: &str, max_len: usize, by_len: &mut [BTreeSet<String>]) {
    for n in 1..=max_len.min(w.len()) {
        for i in 0..=w.len() - n {
            by_len[n].insert(w[i..i + n].to_string());
        }
    }
}

/// Factors of the Fibonacci word up to length max_len. Any factor of length
/// ≤ |σᵏ(1)| sits inside σᵏ(uv) for an admissible pair uv, so those images
/// for uv ∈ {00, 01, 10} suffice.
pub fn fib_language(max_len: usize) -> Result<SubshiftLanguage> {
    if max_len > MAX_LEN {
        return Err(Error::CapExceeded { what: "language length", limit: MAX_LEN, reached: max_len });
    }
    let mut by_len = vec![BTreeSet::new(); max_len + 1];
    by_len[0].insert(String::new());
    let mut blocks = ["00".to_string(), "01".to_string(), "10".to_string()];
    let mut one = String::from("1");
    while one.len() < max_len {
        one = substitute(&one);
        for b in blocks.iter_mut() {
            *b = substitute(b);
        }
    }
    for b in &blocks {
        insert_factors(b, max_len, &mut by_len);
    }
    Ok(SubshiftLanguage { max_len, by_len })
}

/// Factors of a finite word, for cross-checking.
pub fn language_from_word(w: &str, max_len: usize) -> SubshiftLanguage {
    let mut by_len = vec![BTreeSet::new(); max_len + 1];
    by_len[0].insert(String::new());
    insert_factors(w, max_len, &mut by_len);
    SubshiftLanguage { max_len, by_len }
}

impl SubshiftLanguage {
    pub fn words(&self, n: usize) -> Result<&BTreeSet<String>> {
        self.by_len
            .get(n)
            .ok_or(Error::CapExceeded { what: "language length", limit: self.max_len, reached: n })
    }

    pub fn contains(&self, w: &str) -> bool {
        self.by_len.get(w.len()).is_some_and(|s| s.contains(w))
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_len.iter().map(|s| s.len()).collect()
    }

    pub fn is_factor_closed(&self) -> bool {
        self.by_len.iter().flatten().all(|w| w.is_empty() || (self.contains(&w[1..]) && self.contains(&w[..w.len() - 1])))
    }

    /// Every word below max_len extends on both sides.
    pub fn is_extendable(&self) -> bool {
        self.by_len[..self.max_len].iter().flatten().all(|w| {
            let r = ["0", "1"].iter().any(|c| self.contains(&format!("{w}{c}")));
            let l = ["0", "1"].iter().any(|c| self.contains(&format!("{c}{w}")));
            r && l
        })
    }
}

/// A finite piece of a point: bits[i] = x_{start+i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub start: i64,
    pub bits: Vec<u8>,
}

impl Window {
    /// `"010.0101"`: the character after the dot is position 0. Without a
    /// dot the word starts at 0.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad window `{text}`"));
        let (left, right) = text.split_once('.').unwrap_or(("", text));
        let mut bits = Vec::new();
        for c in left.chars().chain(right.chars()) {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => return Err(bad()),
            }
        }
        Ok(Window { start: -(left.len() as i64), bits })
    }

    pub fn get(&self, i: i64) -> Option<u8> {
        let k = i - self.start;
        (k >= 0).then(|| self.bits.get(k as usize).copied()).flatten()
    }

    fn slice(&self, from: i64, len: usize) -> Option<String> {
        (0..len as i64).map(|j| self.get(from + j).map(|b| if b == 1 { '1' } else { '0' })).collect()
    }

    /// Tᵏx seen through the same data.
    pub fn shifted(&self, k: i64) -> Window {
        Window { start: self.start - k, bits: self.bits.clone() }
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, b) in self.bits.iter().enumerate() {
            if self.start + i as i64 == 0 {
                f.write_str(".")?;
            }
            f.write_str(if *b == 1 { "1" } else { "0" })?;
        }
        if self.start > 0 || self.start + self.bits.len() as i64 == 0 {
            f.write_str(&format!(" @{}", self.start))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cylinder {
    pub word: String,
    pub shift: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FullGroupElement {
    #[serde(default)]
    pub anchor: i64,
    pub cylinders: Vec<Cylinder>,
}

impl FullGroupElement {
    /// Validates admissibility, prefix-freeness, coverage and the shift cap.
    pub fn new(anchor: i64, cylinders: Vec<Cylinder>, lang: &SubshiftLanguage, shift_cap: i64) -> Result<Self> {
        let e = FullGroupElement { anchor, cylinders };
        e.validate(lang, shift_cap)?;
        Ok(e)
    }

    pub fn validate(&self, lang: &SubshiftLanguage, shift_cap: i64) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        for c in &self.cylinders {
            if !lang.contains(&c.word) {
                return bad(format!("cylinder `{}` is not admissible", c.word));
            }
            if c.shift.abs() > shift_cap {
                return bad(format!("shift {} exceeds cap {shift_cap}", c.shift));
            }
        }
        let depth = self.depth();
        for w in lang.words(depth)? {
            let n = self.cylinders.iter().filter(|c| w.starts_with(&c.word)).count();
            if n != 1 {
                return bad(format!("{n} cylinders match `{w}`"));
            }
        }
        Ok(())
    }

    pub fn identity() -> Self {
        Self::shift(0)
    }

    pub fn shift(k: i64) -> Self {
        FullGroupElement { anchor: 0, cylinders: vec![Cylinder { word: String::new(), shift: k }] }
    }

    pub fn depth(&self) -> usize {
        self.cylinders.iter().map(|c| c.word.len()).max().unwrap_or(0)
    }

    fn max_abs_shift(&self) -> i64 {
        self.cylinders.iter().map(|c| c.shift.abs()).max().unwrap_or(0)
    }

    /// ν(x), read from the window.
    pub fn shift_at(&self, x: &Window) -> Result<i64> {
        for c in &self.cylinders {
            let s = x
                .slice(self.anchor, c.word.len())
                .ok_or_else(|| Error::Unresolved(format!("window {x} does not cover the cylinder `{}`", c.word)))?;
            if s == c.word {
                return Ok(c.shift);
            }
        }
        Err(Error::Unresolved(format!("no cylinder matches window {x}")))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    /// Shift on every admissible word over [anchor, anchor+len).
    fn refined(&self, anchor: i64, len: usize, lang: &SubshiftLanguage) -> Result<BTreeMap<String, i64>> {
        let mut out = BTreeMap::new();
        for w in lang.words(len)? {
            let x = Window { start: anchor, bits: w.bytes().map(|b| b - b'0').collect() };
            out.insert(w.clone(), self.shift_at(&x)?);
        }
        Ok(out)
    }

    /// Smallest equivalent table: drop leading columns that never matter,
    /// then merge sibling cylinders with equal shifts.
    pub fn canonical(&self, lang: &SubshiftLanguage) -> Result<Self> {
        collapse(self.anchor, self.refined(self.anchor, self.depth(), lang)?, lang)
    }
}

fn collapse(mut anchor: i64, mut table: BTreeMap<String, i64>, lang: &SubshiftLanguage) -> Result<FullGroupElement> {
    loop {
        let len = table.keys().next().map_or(0, |w| w.len());
        if len == 0 {
            break;
        }
        let mut trimmed: BTreeMap<String, i64> = BTreeMap::new();
        let mut ok = true;
        for (w, &k) in &table {
            if *trimmed.entry(w[1..].to_string()).or_insert(k) != k {
                ok = false;
                break;
            }
        }
        if !ok {
            break;
        }
        table = trimmed;
        anchor += 1;
    }
    let mut cyl: BTreeMap<String, i64> = table;
    loop {
        let mut changed = false;
        let longest = cyl.keys().map(|w| w.len()).max().unwrap_or(0);
        if longest == 0 {
            break;
        }
        let prefixes: BTreeSet<String> = cyl.keys().filter(|w| w.len() == longest).map(|w| w[..longest - 1].to_string()).collect();
        for p in prefixes {
            let kids: Vec<String> = ["0", "1"].iter().map(|c| format!("{p}{c}")).filter(|w| lang.contains(w)).collect();
            let shifts: Option<Vec<i64>> = kids.iter().map(|w| cyl.get(w).copied()).collect();
            if let Some(s) = shifts {
                if s.windows(2).all(|v| v[0] == v[1]) {
                    for w in &kids {
                        cyl.remove(w);
                    }
                    cyl.insert(p, s[0]);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    if cyl.len() == 1 && cyl.keys().next().is_some_and(|w| w.is_empty()) {
        anchor = 0;
    }
    let cylinders = cyl.into_iter().map(|(word, shift)| Cylinder { word, shift }).collect();
    Ok(FullGroupElement { anchor, cylinders })
}

pub fn tf_apply(e: &FullGroupElement, x: &Window) -> Result<Window> {
    Ok(x.shifted(e.shift_at(x)?))
}

/// The element x ↦ (x·e₁)·e₂, refined to a common window and collapsed.
pub fn tf_compose(e1: &FullGroupElement, e2: &FullGroupElement, lang: &SubshiftLanguage) -> Result<FullGroupElement> {
    let ks: Vec<i64> = e1.cylinders.iter().map(|c| c.shift).collect();
    let (kmin, kmax) = (*ks.iter().min().unwrap_or(&0), *ks.iter().max().unwrap_or(&0));
    let start = e1.anchor.min(e2.anchor + kmin);
    let end = (e1.anchor + e1.depth() as i64).max(e2.anchor + e2.depth() as i64 + kmax);
    let len = (end - start).max(0) as usize;
    if len > lang.max_len {
        return Err(Error::CapExceeded { what: "refined cylinder length", limit: lang.max_len, reached: len });
    }
    let mut table = BTreeMap::new();
    for w in lang.words(len)? {
        let x = Window { start, bits: w.bytes().map(|b| b - b'0').collect() };
        let k1 = e1.shift_at(&x)?;
        let k2 = e2.shift_at(&x.shifted(k1))?;
        table.insert(w.clone(), k1 + k2);
    }
    collapse(start, table, lang)
}

/// Radius needed to read every candidate preimage's cylinder.
fn certificate_radius(e: &FullGroupElement) -> i64 {
    let last = e.anchor + e.depth() as i64 - 1;
    e.cylinders
        .iter()
        .map(|c| (e.anchor - c.shift).abs().max((last - c.shift).abs()))
        .max()
        .unwrap_or(0)
        .max(e.max_abs_shift())
}

/// For every admissible window y on [−depth, depth], the shifts k with
/// ν(T⁻ᵏy) = k. The element is a bijection of X exactly when each window
/// has one such k; this only reads y inside the window, so the verdict is
/// exact once depth reaches the certificate radius.
fn preimage_shifts(e: &FullGroupElement, depth: usize, lang: &SubshiftLanguage) -> Result<Vec<(String, Vec<i64>)>> {
    let need = certificate_radius(e);
    if (depth as i64) < need {
        return Err(Error::WindowTooSmall(format!("depth {depth} < certificate radius {need}")));
    }
    let mut ks: Vec<i64> = e.cylinders.iter().map(|c| c.shift).collect();
    ks.sort_unstable();
    ks.dedup();
    let mut out = Vec::new();
    for w in lang.words(2 * depth + 1)? {
        let y = Window { start: -(depth as i64), bits: w.bytes().map(|b| b - b'0').collect() };
        let mut hits = Vec::new();
        for &k in &ks {
            if e.shift_at(&y.shifted(-k))? == k {
                hits.push(k);
            }
        }
        out.push((w.clone(), hits));
    }
    Ok(out)
}

pub fn certify_bijective(e: &FullGroupElement, depth: usize, lang: &SubshiftLanguage) -> Result<bool> {
    Ok(preimage_shifts(e, depth, lang)?.iter().all(|(_, h)| h.len() == 1))
}

pub fn tf_inverse(e: &FullGroupElement, depth: usize, lang: &SubshiftLanguage) -> Result<FullGroupElement> {
    let mut table = BTreeMap::new();
    for (w, hits) in preimage_shifts(e, depth, lang)? {
        match hits.as_slice() {
            [k] => table.insert(w, -k),
            _ => return Err(Error::InvalidArgument(format!("not bijective: window {w} has preimage shifts {hits:?}"))),
        };
    }
    collapse(-(depth as i64), table, lang)
}

pub fn tf_compose_check(
    e1: &FullGroupElement,
    e2: &FullGroupElement,
    depth: usize,
    lang: &SubshiftLanguage,
) -> Result<(FullGroupElement, bool)> {
    let c = tf_compose(e1, e2, lang)?;
    let ok = certify_bijective(&c, depth, lang)?;
    Ok((c, ok))
}

/// Prefix-free covers of the language by words of length ≤ max_len.
fn covers(prefix: String, max_len: usize, lang: &SubshiftLanguage) -> Vec<Vec<String>> {
    let mut out = vec![vec![prefix.clone()]];
    if prefix.len() < max_len {
        let kids: Vec<String> = ["0", "1"].iter().map(|c| format!("{prefix}{c}")).filter(|w| lang.contains(w)).collect();
        let mut acc: Vec<Vec<String>> = vec![vec![]];
        for k in kids {
            let sub = covers(k, max_len, lang);
            acc = acc.iter().flat_map(|a| sub.iter().map(move |s| [a.clone(), s.clone()].concat())).collect();
        }
        out.extend(acc);
    }
    out
}

/// First element, in order of cover size then shift pattern, with anchor 0,
/// cylinders of length ≤ max_len and shifts from `shifts`, that is not a
/// power of the shift and is certified bijective at `depth`.
pub fn search_element(lang: &SubshiftLanguage, max_len: usize, shifts: &[i64], depth: usize) -> Result<Option<FullGroupElement>> {
    let mut all = covers(String::new(), max_len, lang);
    all.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    for cover in all {
        let n = cover.len();
        let total = shifts.len().pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let cylinders: Vec<Cylinder> = cover
                .iter()
                .map(|w| {
                    let k = shifts[c % shifts.len()];
                    c /= shifts.len();
                    Cylinder { word: w.clone(), shift: k }
                })
                .collect();
            let e = FullGroupElement { anchor: 0, cylinders };
            let canon = e.canonical(lang)?;
            if canon.cylinders.len() != n || n == 1 {
                continue;
            }
            if certify_bijective(&e, depth, lang)? {
                return Ok(Some(e));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ws: &[&str]) -> BTreeSet<String> {
        ws.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn language_examples() {
        assert_eq!(fib_prefix(13), "0100101001001");
        let l = fib_language(3).unwrap();
        assert_eq!(l.by_len[1], set(&["0", "1"]));
        assert_eq!(l.by_len[2], set(&["00", "01", "10"]));
        assert_eq!(l.by_len[3], set(&["001", "010", "100", "101"]));
        let l = fib_language(20).unwrap();
        assert!(l.is_factor_closed() && l.is_extendable());
        // Sturmian complexity
        assert_eq!(l.counts(), (0..=20).map(|n| n + 1).collect::<Vec<_>>());
    }

    #[test]
    fn shift_and_identity() {
        let x = Window::parse("0100.1010").unwrap();
        let y = tf_apply(&FullGroupElement::shift(1), &x).unwrap();
        assert_eq!(y.get(0), Some(0));
        assert_eq!(y.get(-1), Some(1));
        assert_eq!(tf_apply(&FullGroupElement::identity(), &x).unwrap(), x);
        let lang = fib_language(16).unwrap();
        let (c, ok) = tf_compose_check(&FullGroupElement::shift(1), &FullGroupElement::shift(-1), 6, &lang).unwrap();
        assert_eq!(c, FullGroupElement::identity());
        assert!(ok);
    }

    #[test]
    fn validation() {
        let lang = fib_language(6).unwrap();
        let c = |w: &str, k| Cylinder { word: w.into(), shift: k };
        assert!(FullGroupElement::new(0, vec![c("0", 0), c("1", 1)], &lang, 4).is_ok());
        assert!(FullGroupElement::new(0, vec![c("0", 0)], &lang, 4).is_err());
        assert!(FullGroupElement::new(0, vec![c("0", 0), c("01", 0), c("1", 0)], &lang, 4).is_err());
        assert!(FullGroupElement::new(0, vec![c("", 5)], &lang, 4).is_err());
        assert!(FullGroupElement::new(0, vec![c("00", 0), c("01", 0), c("11", 0), c("10", 0)], &lang, 4).is_err());
    }

    #[test]
    fn swap_element() {
        let lang = fib_language(16).unwrap();
        let c = |w: &str, k| Cylinder { word: w.into(), shift: k };
        let e = FullGroupElement::new(0, vec![c("00", 0), c("010", 1), c("10", -1)], &lang, 4).unwrap();
        assert!(certify_bijective(&e, 6, &lang).unwrap());
        let (sq, ok) = tf_compose_check(&e, &e, 6, &lang).unwrap();
        assert!(ok);
        assert_eq!(sq, FullGroupElement::identity());
        let inv = tf_inverse(&e, 6, &lang).unwrap();
        assert_eq!(inv, e.canonical(&lang).unwrap());
    }

    #[test]
    fn search_finds_bijection() {
        let lang = fib_language(16).unwrap();
        let e = search_element(&lang, 3, &[-1, 0, 1], 6).unwrap().expect("an element exists");
        assert!(certify_bijective(&e, 6, &lang).unwrap());
        let inv = tf_inverse(&e, 6, &lang).unwrap();
        assert_eq!(tf_compose(&e, &inv, &lang).unwrap(), FullGroupElement::identity());
        assert_eq!(tf_compose(&inv, &e, &lang).unwrap(), FullGroupElement::identity());
    }
}
