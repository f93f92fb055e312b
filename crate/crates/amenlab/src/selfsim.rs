//! Self-similar groups acting on the binary rooted tree: the Grigorchuk
//! group and the Basilica group.
//!
//! Wreath recursion convention: g = ⟨g₀,g₁⟩π means (x w)g = (xπ)(w g_x), and
//! products decompose as (⟨g₀,g₁⟩π)(⟨h₀,h₁⟩ρ) = ⟨g₀h_{0π}, g₁h_{1π}⟩πρ.
//!
//! Grigorchuk elements are compared exactly. Each element is interned as a
//! hash-consed tree: words of syllable length ≤ 1 are leaves, anything
//! else is the triple (π, canon(g₀), canon(g₁)), folded back to a leaf
//! when it coincides with the decomposition of a generator. Sections of a
//! syllable word of length n ≥ 2 have length ≤ (n+1)/2, so this
//! terminates; the result is a complete invariant because the action is
//! faithful. Basilica elements are compared through their portrait to a
//! fixed depth, which is only an approximation of equality.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{free_reduce, Family, GeneratorWord, Letter, MarkedGroup};

pub const BASILICA_DEFAULT_DEPTH: usize = 16;
/// Upper bound on interned tree nodes.
pub const INTERN_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SelfSimFamily {
    Grigorchuk,
    Basilica,
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;

/// Output bit and section letter of one generator letter reading `bit`.
fn step(family: SelfSimFamily, l: Letter, bit: u8) -> (u8, Option<Letter>) {
    match family {
        SelfSimFamily::Grigorchuk => match (l.generator, bit) {
            (A, b) => (1 - b, None),
            (B, 0) | (C, 0) => (0, Some(Letter::pos(A))),
            (B, _) => (1, Some(Letter::pos(C))),
            (C, _) => (1, Some(Letter::pos(D))),
            (D, 0) => (0, None),
            (_, _) => (1, Some(Letter::pos(B))),
        },
        SelfSimFamily::Basilica => match (l.generator, l.inverse, bit) {
            (0, false, 0) => (1, None),
            (0, false, _) => (0, Some(Letter::pos(1))),
            (0, true, 1) => (0, None),
            (0, true, _) => (1, Some(Letter::neg(1))),
            (_, _, 0) => (0, None),
            (_, inv, _) => (1, Some(Letter { generator: 0, inverse: inv })),
        },
    }
}

/// Syllable form for the Grigorchuk group: a² = 1 and the letters b, c, d
/// multiply as the Klein four-group (b·c = d and so on).
pub fn syllable_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        let g = l.generator;
        match out.last().map(|x| x.generator) {
            Some(A) if g == A => {
                out.pop();
            }
            Some(top) if top != A && g != A => {
                // indices 1,2,3 compose by xor
                let prod = top ^ g;
                out.pop();
                if prod != 0 {
                    out.push(Letter::pos(prod));
                }
            }
            _ => out.push(Letter::pos(g)),
        }
    }
    out
}

fn reduce(family: SelfSimFamily, letters: &[Letter]) -> Vec<Letter> {
    match family {
        SelfSimFamily::Grigorchuk => syllable_reduce(letters),
        SelfSimFamily::Basilica => free_reduce(letters),
    }
}

/// Root swap flag and the two reduced sections.
fn sections(family: SelfSimFamily, letters: &[Letter]) -> (bool, [Vec<Letter>; 2]) {
    let mut secs: [Vec<Letter>; 2] = [Vec::new(), Vec::new()];
    let mut swap = false;
    for x in 0..2u8 {
        let mut bit = x;
        let mut s = Vec::new();
        for &l in letters {
            let (o, sec) = step(family, l, bit);
            if let Some(sl) = sec {
                s.push(sl);
            }
            bit = o;
        }
        if x == 0 {
            swap = bit == 1;
        }
        secs[x as usize] = reduce(family, &s);
    }
    (swap, secs)
}

fn act_letters(family: SelfSimFamily, letters: &[Letter], x: &[u8]) -> Vec<u8> {
    let mut w = letters.to_vec();
    let mut out = Vec::with_capacity(x.len());
    for &bit in x {
        let mut b = bit;
        let mut s = Vec::new();
        for &l in &w {
            let (o, sec) = step(family, l, b);
            if let Some(sl) = sec {
                s.push(sl);
            }
            b = o;
        }
        out.push(b);
        w = reduce(family, &s);
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Node {
    Leaf(u8),
    Inner(bool, u32, u32),
}

#[derive(Default)]
struct Table {
    nodes: Vec<Node>,
    index: HashMap<Node, u32>,
    memo: HashMap<(Vec<Letter>, usize), u32>,
}

impl Table {
    fn intern(&mut self, n: Node) -> Result<u32> {
        if let Some(&id) = self.index.get(&n) {
            return Ok(id);
        }
        if self.nodes.len() >= INTERN_CAP {
            return Err(Error::CapExceeded { what: "tree interner", limit: INTERN_CAP, reached: self.nodes.len() });
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(n);
        self.index.insert(n, id);
        Ok(id)
    }

    fn remember(&mut self, key: (Vec<Letter>, usize), id: u32) {
        if self.memo.len() >= INTERN_CAP {
            // the memo is only a cache; the node table carries the identity
            self.memo.clear();
        }
        self.memo.insert(key, id);
    }
}

fn grig_table() -> &'static Mutex<Table> {
    static T: OnceLock<Mutex<Table>> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = Table::default();
        for leaf in 0..5u8 {
            t.intern(Node::Leaf(leaf)).expect("leaves fit");
        }
        Mutex::new(t)
    })
}

fn basilica_table() -> &'static Mutex<Table> {
    static T: OnceLock<Mutex<Table>> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = Table::default();
        t.intern(Node::Leaf(0)).expect("leaf fits");
        Mutex::new(t)
    })
}

fn lock(m: &'static Mutex<Table>) -> std::sync::MutexGuard<'static, Table> {
    m.lock().unwrap_or_else(|p| p.into_inner())
}

// leaf ids: 0 = identity, 1..=4 = a, b, c, d
fn grig_canon(t: &mut Table, w: &[Letter]) -> Result<u32> {
    if w.len() <= 1 {
        return Ok(w.first().map_or(0, |l| l.generator as u32 + 1));
    }
    let key = (w.to_vec(), 0);
    if let Some(&id) = t.memo.get(&key) {
        return Ok(id);
    }
    let (swap, [s0, s1]) = sections(SelfSimFamily::Grigorchuk, w);
    let c0 = grig_canon(t, &s0)?;
    let c1 = grig_canon(t, &s1)?;
    let id = match (swap, c0, c1) {
        (false, 0, 0) => 0,
        (true, 0, 0) => 1,
        (false, 1, 3) => 2,
        (false, 1, 4) => 3,
        (false, 0, 2) => 4,
        _ => t.intern(Node::Inner(swap, c0, c1))?,
    };
    t.remember(key, id);
    Ok(id)
}

fn basilica_canon(t: &mut Table, w: &[Letter], depth: usize) -> Result<u32> {
    if depth == 0 {
        return Ok(0);
    }
    let key = (w.to_vec(), depth);
    if let Some(&id) = t.memo.get(&key) {
        return Ok(id);
    }
    let (swap, [s0, s1]) = sections(SelfSimFamily::Basilica, w);
    let c0 = basilica_canon(t, &s0, depth - 1)?;
    let c1 = basilica_canon(t, &s1, depth - 1)?;
    let id = t.intern(Node::Inner(swap, c0, c1))?;
    t.remember(key, id);
    Ok(id)
}

/// A canonicalized group element: equality and hashing use the interned
/// id only, the stored word is one representative.
#[derive(Clone, Debug)]
pub struct TreeElement {
    pub family: SelfSimFamily,
    pub depth: usize,
    pub id: u32,
    pub word: Vec<Letter>,
}

impl PartialEq for TreeElement {
    fn eq(&self, o: &Self) -> bool {
        (self.family, self.depth, self.id) == (o.family, o.depth, o.id)
    }
}
impl Eq for TreeElement {}
impl std::hash::Hash for TreeElement {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        (self.family, self.depth, self.id).hash(h)
    }
}
impl PartialOrd for TreeElement {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for TreeElement {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.family, self.depth, self.id).cmp(&(o.family, o.depth, o.id))
    }
}

pub(crate) fn tree_from_word(family: SelfSimFamily, depth: usize, letters: &[Letter]) -> Result<TreeElement> {
    let word = reduce(family, letters);
    let (id, depth) = match family {
        SelfSimFamily::Grigorchuk => (grig_canon(&mut lock(grig_table()), &word)?, 0),
        SelfSimFamily::Basilica => (basilica_canon(&mut lock(basilica_table()), &word, depth)?, depth),
    };
    Ok(TreeElement { family, depth, id, word })
}

pub(crate) fn tree_identity(family: SelfSimFamily, depth: usize) -> TreeElement {
    tree_from_word(family, depth, &[]).expect("identity always interns")
}

pub(crate) fn tree_mul_letters(t: &TreeElement, letters: &[Letter]) -> Result<TreeElement> {
    let mut w = t.word.clone();
    w.extend_from_slice(letters);
    tree_from_word(t.family, t.depth, &w)
}

/// A word over the generators of a self-similar group, kept reduced
/// (syllable form for Grigorchuk, free reduction for Basilica).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeAutomorphism {
    pub family: SelfSimFamily,
    word: Vec<Letter>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathDecomposition {
    pub sections: [TreeAutomorphism; 2],
    pub root_swap: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfSimEquality {
    pub equal: bool,
    /// Set when equality was only checked up to `depth` levels.
    pub approximate: bool,
    pub depth: Option<usize>,
}

impl TreeAutomorphism {
    pub fn new(family: SelfSimFamily, letters: &[Letter]) -> Result<Self> {
        let rank = match family {
            SelfSimFamily::Grigorchuk => 4,
            SelfSimFamily::Basilica => 2,
        };
        if let Some(l) = letters.iter().find(|l| l.generator >= rank) {
            return Err(Error::UnknownGenerator { index: l.generator, rank });
        }
        Ok(TreeAutomorphism { family, word: reduce(family, letters) })
    }

    pub fn identity(family: SelfSimFamily) -> Self {
        TreeAutomorphism { family, word: Vec::new() }
    }

    pub fn group(family: SelfSimFamily) -> MarkedGroup {
        MarkedGroup::new(Family::SelfSimilar(family)).expect("registered family")
    }

    pub fn parse(family: SelfSimFamily, text: &str) -> Result<Self> {
        let w = Self::group(family).parse_word(text)?;
        Self::new(family, w.letters())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn to_text(&self) -> String {
        Self::group(self.family).format_word(&GeneratorWord(self.word.clone()))
    }

    pub fn mul(&self, o: &TreeAutomorphism) -> Result<TreeAutomorphism> {
        if self.family != o.family {
            return Err(Error::WrongFamily { expected: format!("{:?}", self.family), got: format!("{:?}", o.family) });
        }
        let mut w = self.word.clone();
        w.extend_from_slice(&o.word);
        Ok(TreeAutomorphism { family: self.family, word: reduce(self.family, &w) })
    }

    pub fn inverse(&self) -> TreeAutomorphism {
        let inv = GeneratorWord(self.word.clone()).inverse();
        TreeAutomorphism { family: self.family, word: reduce(self.family, inv.letters()) }
    }

    pub fn pow(&self, k: usize) -> TreeAutomorphism {
        let w = GeneratorWord(self.word.clone()).power(k);
        TreeAutomorphism { family: self.family, word: reduce(self.family, w.letters()) }
    }

    /// Image of a finite word over {0,1}; acts letter by letter from the left
    /// of the generator word.
    pub fn act_on_word(&self, x: &[u8]) -> Result<Vec<u8>> {
        if let Some(&b) = x.iter().find(|&&b| b > 1) {
            return Err(Error::WrongAlphabet { letter: (b'0' + b) as char });
        }
        Ok(act_letters(self.family, &self.word, x))
    }

    pub fn act_on_str(&self, x: &str) -> Result<String> {
        let bits = parse_bits(x)?;
        Ok(self.act_on_word(&bits)?.iter().map(|b| (b'0' + b) as char).collect())
    }

    pub fn wreath_decompose(&self) -> WreathDecomposition {
        let (root_swap, [s0, s1]) = sections(self.family, &self.word);
        WreathDecomposition {
            sections: [
                TreeAutomorphism { family: self.family, word: s0 },
                TreeAutomorphism { family: self.family, word: s1 },
            ],
            root_swap,
        }
    }

    pub fn canonical(&self, depth: usize) -> Result<TreeElement> {
        tree_from_word(self.family, depth, &self.word)
    }

    /// Exact for the Grigorchuk group; depth-limited (and flagged) for Basilica.
    pub fn equals(&self, o: &TreeAutomorphism) -> Result<SelfSimEquality> {
        self.equals_to_depth(o, BASILICA_DEFAULT_DEPTH)
    }

    pub fn equals_to_depth(&self, o: &TreeAutomorphism, depth: usize) -> Result<SelfSimEquality> {
        if self.family != o.family {
            return Err(Error::WrongFamily { expected: format!("{:?}", self.family), got: format!("{:?}", o.family) });
        }
        let equal = self.canonical(depth)? == o.canonical(depth)?;
        Ok(match self.family {
            SelfSimFamily::Grigorchuk => SelfSimEquality { equal, approximate: false, depth: None },
            SelfSimFamily::Basilica => SelfSimEquality { equal, approximate: true, depth: Some(depth) },
        })
    }

    pub fn is_identity(&self) -> Result<bool> {
        Ok(self.equals(&TreeAutomorphism::identity(self.family))?.equal)
    }

    /// Sum of generator norms along the stored syllable word. This is an
    /// upper bound for the minimum over all factorizations.
    pub fn eta_norm(&self) -> Result<f64> {
        self.require_grigorchuk()?;
        let n = generator_norms();
        Ok(self.word.iter().map(|l| n[l.generator]).sum())
    }

    /// The endomorphism a ↦ aca, b ↦ d, c ↦ b, d ↦ c.
    pub fn sigma(&self) -> Result<TreeAutomorphism> {
        self.require_grigorchuk()?;
        let mut w = Vec::new();
        for l in &self.word {
            match l.generator {
                A => w.extend([Letter::pos(A), Letter::pos(C), Letter::pos(A)]),
                B => w.push(Letter::pos(D)),
                C => w.push(Letter::pos(B)),
                _ => w.push(Letter::pos(C)),
            }
        }
        Ok(TreeAutomorphism { family: self.family, word: syllable_reduce(&w) })
    }

    /// Companion of `sigma` on the first section: a ↦ d, b ↦ 1, c ↦ a, d ↦ a.
    pub fn theta(&self) -> Result<TreeAutomorphism> {
        self.require_grigorchuk()?;
        let w: Vec<Letter> = self
            .word
            .iter()
            .filter_map(|l| match l.generator {
                A => Some(Letter::pos(D)),
                B => None,
                _ => Some(Letter::pos(A)),
            })
            .collect();
        Ok(TreeAutomorphism { family: self.family, word: syllable_reduce(&w) })
    }

    /// Checks ⟨θ(g), g⟩ = σ(g) on all words of length ≤ depth.
    pub fn sigma_check(&self, depth: usize) -> Result<bool> {
        let s = self.sigma()?;
        let th = self.theta()?;
        for x in all_words(depth) {
            let img = s.act_on_word(&x)?;
            if x.is_empty() {
                continue;
            }
            let tail = if x[0] == 0 { th.act_on_word(&x[1..])? } else { self.act_on_word(&x[1..])? };
            if img[0] != x[0] || img[1..] != tail[..] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Least k ≤ max_order with gᵏ = 1.
    pub fn element_order(&self, max_order: usize) -> Result<Option<usize>> {
        let g = self.canonical(BASILICA_DEFAULT_DEPTH)?;
        let mut p = g.clone();
        for k in 1..=max_order {
            if p.word.is_empty() || p == tree_identity(self.family, g.depth) {
                return Ok(Some(k));
            }
            p = tree_mul_letters(&p, &g.word)?;
        }
        Ok(None)
    }

    /// JSON portrait: root permutation and the two children, to `depth` levels.
    pub fn portrait(&self, depth: usize) -> Value {
        if depth == 0 {
            return Value::Null;
        }
        let d = self.wreath_decompose();
        json!({
            "perm": if d.root_swap { "swap" } else { "id" },
            "children": [d.sections[0].portrait(depth - 1), d.sections[1].portrait(depth - 1)],
        })
    }

    fn require_grigorchuk(&self) -> Result<()> {
        if self.family != SelfSimFamily::Grigorchuk {
            return Err(Error::WrongFamily { expected: "grigorchuk".into(), got: "basilica".into() });
        }
        Ok(())
    }
}

pub fn parse_bits(x: &str) -> Result<Vec<u8>> {
    x.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::WrongAlphabet { letter: other }),
        })
        .collect()
}

/// All binary words of length ≤ depth, shortest first.
pub fn all_words(depth: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for w in &layer {
            for b in 0..2u8 {
                let mut v: Vec<u8> = w.clone();
                v.push(b);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// The real root of X³ + X² + X − 2, by Newton iteration.
pub fn eta() -> f64 {
    static ETA: OnceLock<f64> = OnceLock::new();
    *ETA.get_or_init(|| {
        let mut x = 1.0f64;
        for _ in 0..100 {
            let f = x * x * x + x * x + x - 2.0;
            let df = 3.0 * x * x + 2.0 * x + 1.0;
            let nx = x - f / df;
            if (nx - x).abs() < 1e-15 {
                x = nx;
                break;
            }
            x = nx;
        }
        x
    })
}

/// Norms of a, b, c, d.
pub fn generator_norms() -> [f64; 4] {
    let e = eta();
    [1.0 - e * e * e, e * e * e, 1.0 - e * e, 1.0 - e]
}

/// Direct reading of the alternative definition of b, c, d: flip the bit
/// right after the first 1 at index n−1, unless n is in the excluded
/// residue class mod 3 (0 for b, 2 for c, 1 for d).
pub fn mod3_act(generator: usize, x: &[u8]) -> Vec<u8> {
    let mut y = x.to_vec();
    if generator == A {
        if let Some(b) = y.first_mut() {
            *b = 1 - *b;
        }
        return y;
    }
    let excluded = match generator {
        B => 0,
        C => 2,
        _ => 1,
    };
    if let Some(j) = x.iter().position(|&b| b == 1) {
        let n = j + 1;
        if n < y.len() && n % 3 != excluded {
            y[n] = 1 - y[n];
        }
    }
    y
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mod3Report {
    pub depth: usize,
    /// The two definitions agree letter for letter.
    pub literal_agrees: bool,
    /// They agree after exchanging the symbols 0 and 1.
    pub swapped_agrees: bool,
}

/// Compares the mod-3 definition with the wreath recursion on all words of
/// length ≤ depth.
pub fn mod3_agreement(depth: usize) -> Mod3Report {
    let flip = |v: &[u8]| v.iter().map(|b| 1 - b).collect::<Vec<u8>>();
    let mut literal = true;
    let mut swapped = true;
    for g in 0..4 {
        for x in all_words(depth) {
            let rec = act_letters(SelfSimFamily::Grigorchuk, &[Letter::pos(g)], &x);
            literal &= mod3_act(g, &x) == rec;
            swapped &= flip(&mod3_act(g, &flip(&x))) == rec;
        }
    }
    Mod3Report { depth, literal_agrees: literal, swapped_agrees: swapped }
}
