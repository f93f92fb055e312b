//! Marked groups: words over a fixed generating set, normal forms and
//! equality. Products are evaluated left to right (right actions).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::selfsim::{self, SelfSimFamily, TreeElement};

/// One letter of a word: a generator index and an exponent sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(generator: usize) -> Self {
        Letter { generator, inverse: false }
    }

    pub fn neg(generator: usize) -> Self {
        Letter { generator, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A formal word; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorWord(pub Vec<Letter>);

impl GeneratorWord {
    pub fn identity() -> Self {
        GeneratorWord(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        GeneratorWord(letters.into_iter().collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &GeneratorWord) -> GeneratorWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GeneratorWord(v)
    }

    /// Formal inverse: reversed word with every sign flipped.
    pub fn inverse(&self) -> GeneratorWord {
        GeneratorWord(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn power(&self, k: usize) -> GeneratorWord {
        let mut v = Vec::with_capacity(self.0.len() * k);
        for _ in 0..k {
            v.extend_from_slice(&self.0);
        }
        GeneratorWord(v)
    }

    /// Free reduction in the free group on the letters.
    pub fn freely_reduced(&self) -> GeneratorWord {
        GeneratorWord(free_reduce(&self.0))
    }
}

pub(crate) fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn involution_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        let l = Letter::pos(l.generator);
        if out.last() == Some(&l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Registered group families.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Trivial,
    /// Free group of the given rank.
    Free(usize),
    /// Product of cyclic factors; modulus 0 stands for Z.
    Abelian(Vec<u64>),
    /// Z/2 wr Z with the lamp toggle `a` and the shift `t`.
    Lamplighter,
    /// Free product of k copies of Z/2; k = 2 is the infinite dihedral group.
    Involutions(usize),
    SelfSimilar(SelfSimFamily),
}

impl Family {
    pub fn tag(&self) -> String {
        match self {
            Family::Trivial => "trivial".into(),
            Family::Free(k) => format!("free:{k}"),
            Family::Abelian(m) => {
                if m.iter().all(|&x| x == 0) {
                    format!("z:{}", m.len())
                } else if m.len() == 1 {
                    format!("zmod:{}", m[0])
                } else {
                    let parts: Vec<String> = m.iter().map(|x| x.to_string()).collect();
                    format!("torus:{}", parts.join("x"))
                }
            }
            Family::Lamplighter => "lamplighter".into(),
            Family::Involutions(2) => "dihedral".into(),
            Family::Involutions(k) => format!("c2free:{k}"),
            Family::SelfSimilar(SelfSimFamily::Grigorchuk) => "grigorchuk".into(),
            Family::SelfSimilar(SelfSimFamily::Basilica) => "basilica".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GeneratorInfo {
    pub name: String,
    pub involution: bool,
}

/// A group element in the family's internal canonical representation.
/// Equality of `Element`s is equality in the group (for Basilica: up to
/// the configured tree depth).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Word(Vec<Letter>),
    Vector(Vec<i64>),
    Lamp { lamps: Vec<i64>, position: i64 },
    Tree(TreeElement),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedGroup {
    family: Family,
    gens: Vec<GeneratorInfo>,
    /// Depth used for Basilica portraits.
    tree_depth: usize,
}

const ABELIAN_NAMES: [&str; 4] = ["x", "y", "z", "w"];

fn gens_named(names: &[&str], involution: bool) -> Vec<GeneratorInfo> {
    names
        .iter()
        .map(|n| GeneratorInfo { name: (*n).to_string(), involution })
        .collect()
}

fn letter_names(k: usize) -> Result<Vec<String>> {
    if k > 26 {
        return Err(Error::InvalidArgument(format!("rank {k} exceeds 26")));
    }
    Ok((0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect())
}

fn parse_num<T: std::str::FromStr>(s: &str, spec: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::UnknownSpec(spec.to_string()))
}

impl MarkedGroup {
    pub fn new(family: Family) -> Result<Self> {
        let gens = match &family {
            Family::Trivial => Vec::new(),
            Family::Free(k) => letter_names(*k)?
                .into_iter()
                .map(|name| GeneratorInfo { name, involution: false })
                .collect(),
            Family::Abelian(m) => {
                if m.is_empty() || m.len() > 4 {
                    return Err(Error::InvalidArgument("abelian rank must be 1..=4".into()));
                }
                if m.len() == 1 && m[0] != 0 {
                    gens_named(&["t"], false)
                } else {
                    gens_named(&ABELIAN_NAMES[..m.len()], false)
                }
            }
            Family::Lamplighter => vec![
                GeneratorInfo { name: "a".into(), involution: true },
                GeneratorInfo { name: "t".into(), involution: false },
            ],
            Family::Involutions(k) => {
                if *k < 1 {
                    return Err(Error::InvalidArgument("need at least one involution".into()));
                }
                letter_names(*k)?
                    .into_iter()
                    .map(|name| GeneratorInfo { name, involution: true })
                    .collect()
            }
            Family::SelfSimilar(SelfSimFamily::Grigorchuk) => gens_named(&["a", "b", "c", "d"], true),
            Family::SelfSimilar(SelfSimFamily::Basilica) => gens_named(&["a", "b"], false),
        };
        Ok(MarkedGroup { family, gens, tree_depth: selfsim::BASILICA_DEFAULT_DEPTH })
    }

    /// Parses the group mini-language: `trivial`, `free:k`, `z:d`,
    /// `zmod:n`, `torus:nxm`, `lamplighter`, `dihedral`, `c2free:k`,
    /// `grigorchuk`, `basilica[:depth=N]`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = || Error::UnknownSpec(spec.to_string());
        let (head, rest) = match spec.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (spec, None),
        };
        let family = match (head, rest) {
            ("trivial", None) => Family::Trivial,
            ("free", Some(k)) => Family::Free(parse_num(k, spec)?),
            ("z", Some(d)) => Family::Abelian(vec![0; parse_num::<usize>(d, spec)?]),
            ("zmod", Some(n)) => {
                let n: u64 = parse_num(n, spec)?;
                if n == 0 {
                    return Err(bad());
                }
                Family::Abelian(vec![n])
            }
            ("torus", Some(dims)) => {
                let m: Vec<u64> = dims
                    .split(['x', ','])
                    .map(|s| parse_num(s, spec))
                    .collect::<Result<_>>()?;
                if m.contains(&0) {
                    return Err(bad());
                }
                Family::Abelian(m)
            }
            ("lamplighter", None) => Family::Lamplighter,
            ("dihedral", None) => Family::Involutions(2),
            ("c2free", Some(k)) => Family::Involutions(parse_num(k, spec)?),
            ("grigorchuk", None) => Family::SelfSimilar(SelfSimFamily::Grigorchuk),
            ("basilica", r) => {
                let mut g = MarkedGroup::new(Family::SelfSimilar(SelfSimFamily::Basilica))?;
                if let Some(r) = r {
                    let d = r.strip_prefix("depth=").ok_or_else(bad)?;
                    g.tree_depth = parse_num(d, spec)?;
                    if g.tree_depth == 0 {
                        return Err(bad());
                    }
                }
                return Ok(g);
            }
            _ => return Err(bad()),
        };
        MarkedGroup::new(family)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn spec(&self) -> String {
        match self.family {
            Family::SelfSimilar(SelfSimFamily::Basilica)
                if self.tree_depth != selfsim::BASILICA_DEFAULT_DEPTH =>
            {
                format!("basilica:depth={}", self.tree_depth)
            }
            _ => self.family.tag(),
        }
    }

    pub fn generators(&self) -> &[GeneratorInfo] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn tree_depth(&self) -> usize {
        self.tree_depth
    }

    /// True when equality is only checked to a finite tree depth.
    pub fn equality_is_approximate(&self) -> bool {
        self.family == Family::SelfSimilar(SelfSimFamily::Basilica)
    }

    /// True for families whose `normal_form` is a complete invariant.
    pub fn has_complete_normal_form(&self) -> bool {
        !matches!(self.family, Family::SelfSimilar(_))
    }

    /// Finite order of the group, if it is known to be finite.
    pub fn finite_order(&self) -> Option<u64> {
        match &self.family {
            Family::Trivial => Some(1),
            Family::Abelian(m) if m.iter().all(|&x| x > 0) => Some(m.iter().product()),
            _ => None,
        }
    }

    /// Edge labels of Cayley and Schreier graphs: each generator, plus its
    /// inverse unless the generator is flagged as an involution.
    pub fn edge_letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            out.push(Letter::pos(i));
            if !g.involution {
                out.push(Letter::neg(i));
            }
        }
        out
    }

    /// All formal letters s and s⁻¹, involutions included.
    pub fn formal_letters(&self) -> Vec<Letter> {
        (0..self.rank()).flat_map(|i| [Letter::pos(i), Letter::neg(i)]).collect()
    }

    pub fn check_word(&self, w: &GeneratorWord) -> Result<()> {
        for l in w.letters() {
            if l.generator >= self.rank() {
                return Err(Error::UnknownGenerator { index: l.generator, rank: self.rank() });
            }
        }
        Ok(())
    }

    pub fn identity(&self) -> Element {
        match &self.family {
            Family::Abelian(m) => Element::Vector(vec![0; m.len()]),
            Family::Lamplighter => Element::Lamp { lamps: Vec::new(), position: 0 },
            Family::SelfSimilar(f) => Element::Tree(selfsim::tree_identity(*f, self.tree_depth)),
            _ => Element::Word(Vec::new()),
        }
    }

    /// Right multiplication by one letter.
    pub fn mul_letter(&self, e: &Element, l: Letter) -> Result<Element> {
        if l.generator >= self.rank() {
            return Err(Error::UnknownGenerator { index: l.generator, rank: self.rank() });
        }
        Ok(match (e, &self.family) {
            (Element::Word(w), Family::Free(_)) => {
                let mut w = w.clone();
                if w.last() == Some(&l.inv()) {
                    w.pop();
                } else {
                    w.push(l);
                }
                Element::Word(w)
            }
            (Element::Word(w), Family::Involutions(_)) => {
                let l = Letter::pos(l.generator);
                let mut w = w.clone();
                if w.last() == Some(&l) {
                    w.pop();
                } else {
                    w.push(l);
                }
                Element::Word(w)
            }
            (Element::Vector(v), Family::Abelian(m)) => {
                let mut v = v.clone();
                let i = l.generator;
                v[i] += l.sign();
                if m[i] > 0 {
                    v[i] = v[i].rem_euclid(m[i] as i64);
                }
                Element::Vector(v)
            }
            (Element::Lamp { lamps, position }, Family::Lamplighter) => {
                if l.generator == 0 {
                    let mut lamps = lamps.clone();
                    match lamps.binary_search(position) {
                        Ok(i) => {
                            lamps.remove(i);
                        }
                        Err(i) => lamps.insert(i, *position),
                    }
                    Element::Lamp { lamps, position: *position }
                } else {
                    Element::Lamp { lamps: lamps.clone(), position: position + l.sign() }
                }
            }
            (Element::Tree(t), Family::SelfSimilar(_)) => Element::Tree(selfsim::tree_mul_letters(t, &[l])?),
            (e, _) => return Err(self.foreign(e)),
        })
    }

    fn foreign(&self, e: &Element) -> Error {
        Error::InvalidArgument(format!("element {e:?} does not belong to {}", self.spec()))
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(match (a, b, &self.family) {
            (Element::Word(x), Element::Word(y), Family::Free(_)) => {
                let mut v = x.clone();
                v.extend_from_slice(y);
                Element::Word(free_reduce(&v))
            }
            (Element::Word(x), Element::Word(y), Family::Involutions(_)) => {
                let mut v = x.clone();
                v.extend_from_slice(y);
                Element::Word(involution_reduce(&v))
            }
            (Element::Word(_), Element::Word(_), Family::Trivial) => Element::Word(Vec::new()),
            (Element::Vector(x), Element::Vector(y), Family::Abelian(m)) => Element::Vector(
                x.iter()
                    .zip(y)
                    .zip(m)
                    .map(|((a, b), &n)| if n > 0 { (a + b).rem_euclid(n as i64) } else { a + b })
                    .collect(),
            ),
            (
                Element::Lamp { lamps: f, position: p },
                Element::Lamp { lamps: g, position: q },
                Family::Lamplighter,
            ) => {
                // (f, p)(g, q) = (f + shift_p g, p + q)
                let mut lamps: Vec<i64> = f.clone();
                for x in g {
                    let y = x + p;
                    match lamps.binary_search(&y) {
                        Ok(i) => {
                            lamps.remove(i);
                        }
                        Err(i) => lamps.insert(i, y),
                    }
                }
                Element::Lamp { lamps, position: p + q }
            }
            (Element::Tree(x), Element::Tree(y), Family::SelfSimilar(_)) => {
                Element::Tree(selfsim::tree_mul_letters(x, &y.word)?)
            }
            (x, _, _) => return Err(self.foreign(x)),
        })
    }

    pub fn inverse(&self, e: &Element) -> Result<Element> {
        match e {
            Element::Tree(t) => Ok(Element::Tree(selfsim::tree_from_word(
                t.family,
                self.tree_depth,
                &GeneratorWord(t.word.clone()).inverse().0,
            )?)),
            _ => self.eval(&self.word_of(e).inverse()),
        }
    }

    pub fn letter_element(&self, l: Letter) -> Result<Element> {
        self.mul_letter(&self.identity(), l)
    }

    pub fn eval(&self, w: &GeneratorWord) -> Result<Element> {
        self.check_word(w)?;
        if let Family::SelfSimilar(f) = self.family {
            return Ok(Element::Tree(selfsim::tree_from_word(f, self.tree_depth, w.letters())?));
        }
        let mut e = self.identity();
        for &l in w.letters() {
            e = self.mul_letter(&e, l)?;
        }
        Ok(e)
    }

    /// The normal-form word of an element. For self-similar families this
    /// is the stored reduced representative, which is not unique.
    pub fn word_of(&self, e: &Element) -> GeneratorWord {
        match e {
            Element::Word(w) => GeneratorWord(w.clone()),
            Element::Vector(v) => {
                let mut out = Vec::new();
                for (i, &x) in v.iter().enumerate() {
                    let l = if x >= 0 { Letter::pos(i) } else { Letter::neg(i) };
                    out.extend(std::iter::repeat_n(l, x.unsigned_abs() as usize));
                }
                GeneratorWord(out)
            }
            Element::Lamp { lamps, position } => lamplighter_word(lamps, *position),
            Element::Tree(t) => GeneratorWord(t.word.clone()),
        }
    }

    pub fn normal_form(&self, w: &GeneratorWord) -> Result<GeneratorWord> {
        Ok(self.word_of(&self.eval(w)?))
    }

    pub fn compose(&self, w1: &GeneratorWord, w2: &GeneratorWord) -> Result<GeneratorWord> {
        self.normal_form(&w1.concat(w2))
    }

    pub fn equals(&self, w1: &GeneratorWord, w2: &GeneratorWord) -> Result<bool> {
        Ok(self.eval(w1)? == self.eval(w2)?)
    }

    pub fn is_identity(&self, e: &Element) -> bool {
        *e == self.identity()
    }

    pub fn letter_name(&self, l: Letter) -> String {
        let n = &self.gens[l.generator].name;
        if l.inverse && !self.gens[l.generator].involution {
            format!("{n}^-1")
        } else {
            n.clone()
        }
    }

    /// Renders a word, grouping runs of equal letters into powers.
    pub fn format_word(&self, w: &GeneratorWord) -> String {
        let ls = w.letters();
        if ls.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < ls.len() {
            let mut j = i + 1;
            while j < ls.len() && ls[j] == ls[i] {
                j += 1;
            }
            let run = (j - i) as i64;
            let name = &self.gens[ls[i].generator].name;
            let exp = if ls[i].inverse && !self.gens[ls[i].generator].involution { -run } else { run };
            if exp == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{exp}"));
            }
            i = j;
        }
        parts.join(" ")
    }

    /// Parses words such as `a b^-1`, `x^3 y`, `aBA` (upper case = inverse),
    /// `1` for the identity. `⁻¹` is accepted as an inverse marker.
    pub fn parse_word(&self, text: &str) -> Result<GeneratorWord> {
        let bad = || Error::BadWord(text.to_string());
        let chars: Vec<char> = text.replace("⁻¹", "^-1").chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || c == '*' || c == '·' || c == '.' {
                i += 1;
                continue;
            }
            if c == '1' {
                i += 1;
                continue;
            }
            let (gen, inv) = if let Some(g) = self.gens.iter().position(|g| g.name == c.to_string()) {
                (g, false)
            } else if c.is_uppercase() {
                let lc = c.to_lowercase().to_string();
                let g = self.gens.iter().position(|g| g.name == lc).ok_or_else(bad)?;
                (g, true)
            } else {
                return Err(bad());
            };
            i += 1;
            let mut exp: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                exp = s.parse().map_err(|_| bad())?;
            }
            let l = if (exp < 0) != inv { Letter::neg(gen) } else { Letter::pos(gen) };
            out.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Ok(GeneratorWord(out))
    }

    /// Canonical text key of an element.
    pub fn key_text(&self, e: &Element) -> String {
        match e {
            Element::Vector(v) if v.len() == 1 => v[0].to_string(),
            Element::Vector(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            }
            _ => self.format_word(&self.word_of(e)),
        }
    }

    /// Inverse of `key_text`: integer tuples for abelian families, words otherwise.
    pub fn parse_key(&self, text: &str) -> Result<Element> {
        if let Family::Abelian(m) = &self.family {
            let t = text.trim();
            let looks_numeric = t
                .chars()
                .all(|c| c.is_ascii_digit() || "-+(), ".contains(c));
            if looks_numeric {
                let inner = t.trim_start_matches('(').trim_end_matches(')');
                let v: Vec<i64> = inner
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| Error::BadWord(text.to_string())))
                    .collect::<Result<_>>()?;
                if v.len() != m.len() {
                    return Err(Error::BadWord(text.to_string()));
                }
                let v = v
                    .iter()
                    .zip(m)
                    .map(|(&x, &n)| if n > 0 { x.rem_euclid(n as i64) } else { x })
                    .collect();
                return Ok(Element::Vector(v));
            }
        }
        self.eval(&self.parse_word(text)?)
    }
}

impl fmt::Display for MarkedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

/// Geodesic word for a lamplighter element: sweep to one end of the
/// visited interval, then to the other, toggling lamps on first visit,
/// then walk to the final position. Ties prefer going left first.
fn lamplighter_word(lamps: &[i64], position: i64) -> GeneratorWord {
    let lo = lamps.iter().copied().chain([0, position]).min().unwrap_or(0);
    let hi = lamps.iter().copied().chain([0, position]).max().unwrap_or(0);
    let left_first = -lo + (hi - lo) + (hi - position);
    let right_first = hi + (hi - lo) + (position - lo);
    let stops: Vec<i64> = if left_first <= right_first {
        vec![lo, hi, position]
    } else {
        vec![hi, lo, position]
    };
    let mut out = Vec::new();
    let mut lit: Vec<i64> = Vec::new();
    let mut cur = 0i64;
    let mut visit = |p: i64, out: &mut Vec<Letter>| {
        if lamps.binary_search(&p).is_ok() && !lit.contains(&p) {
            lit.push(p);
            out.push(Letter::pos(0));
        }
    };
    visit(cur, &mut out);
    for s in stops {
        while cur != s {
            let step = if s > cur { 1 } else { -1 };
            cur += step;
            out.push(if step > 0 { Letter::pos(1) } else { Letter::neg(1) });
            visit(cur, &mut out);
        }
    }
    GeneratorWord(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(g: &MarkedGroup, s: &str) -> GeneratorWord {
        g.parse_word(s).unwrap()
    }

    #[test]
    fn free_cancellation() {
        let g = MarkedGroup::parse("free:2").unwrap();
        assert_eq!(g.normal_form(&w(&g, "a a^-1 b")).unwrap(), w(&g, "b"));
        assert_eq!(g.compose(&w(&g, "ab"), &w(&g, "B")).unwrap(), w(&g, "a"));
        assert!(!g.equals(&w(&g, "ab"), &w(&g, "ba")).unwrap());
    }

    #[test]
    fn abelian_forms() {
        let z2 = MarkedGroup::parse("z:2").unwrap();
        assert_eq!(z2.normal_form(&w(&z2, "x y x^-1")).unwrap(), w(&z2, "y"));
        assert!(z2.equals(&w(&z2, "xyxy"), &w(&z2, "x^2 y^2")).unwrap());
        let z1 = MarkedGroup::parse("z:1").unwrap();
        assert_eq!(z1.compose(&w(&z1, "x^3"), &w(&z1, "x⁻¹x^-4")).unwrap(), w(&z1, "x^-2"));
        assert_eq!(z1.key_text(&z1.eval(&w(&z1, "x^-2")).unwrap()), "-2");
        assert_eq!(z2.key_text(&z2.eval(&w(&z2, "x Y Y")).unwrap()), "(1,-2)");
        let t = MarkedGroup::parse("torus:4x3").unwrap();
        assert_eq!(t.eval(&w(&t, "x^5 y^-1")).unwrap(), Element::Vector(vec![1, 2]));
        assert_eq!(t.parse_key("(5,-1)").unwrap(), Element::Vector(vec![1, 2]));
    }

    #[test]
    fn lamplighter_examples() {
        let g = MarkedGroup::parse("lamplighter").unwrap();
        assert_eq!(
            g.eval(&w(&g, "a t a t^-1")).unwrap(),
            Element::Lamp { lamps: vec![0, 1], position: 0 }
        );
        // t a · a t⁻¹ is the identity
        assert!(g.is_identity(&g.eval(&g.compose(&w(&g, "t a"), &w(&g, "a T")).unwrap()).unwrap()));
        let e = Element::Lamp { lamps: vec![-2, 0, 3], position: 1 };
        let nf = g.word_of(&e);
        assert_eq!(g.eval(&nf).unwrap(), e);
        // left first: 2 + 5 + 2 steps, 3 toggles
        assert_eq!(nf.len(), 12);
    }

    #[test]
    fn involution_families() {
        let g = MarkedGroup::parse("dihedral").unwrap();
        assert_eq!(g.normal_form(&w(&g, "a b B a")).unwrap(), GeneratorWord::identity());
        assert_eq!(g.edge_letters().len(), 2);
        assert_eq!(g.formal_letters().len(), 4);
        assert_eq!(g.format_word(&w(&g, "a A")), "a a");
    }

    #[test]
    fn parse_errors() {
        assert!(MarkedGroup::parse("free").is_err());
        assert!(MarkedGroup::parse("zmod:0").is_err());
        assert!(MarkedGroup::parse("nonsense").is_err());
        let g = MarkedGroup::parse("free:2").unwrap();
        assert!(g.parse_word("q").is_err());
        assert!(g.eval(&GeneratorWord(vec![Letter::pos(5)])).is_err());
    }

    #[test]
    fn trivial_group() {
        let g = MarkedGroup::parse("trivial").unwrap();
        assert_eq!(g.rank(), 0);
        assert_eq!(g.finite_order(), Some(1));
        assert_eq!(g.key_text(&g.identity()), "1");
    }
}
