//! Cellular automata Θ(x)(g) = θ(s ↦ x(gs)) on a group G with finite memory
//! set S, evaluated on finite windows.
//!
//! Verdicts about Gardens of Eden and Mutually Erasable Patterns hold at the
//! stated window or support bound only; on infinite groups absence is never
//! claimed globally.

pub mod linear;
pub mod overlaps;

use std::collections::HashMap;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{GeneratorWord, Letter, MarkedGroup};
use crate::orbits::{build_ball, MarkedGSet, Point};

pub use linear::{left_kernel, pairing, rank, GroupRingMatrix, LinConfig};
pub use overlaps::{overlaps_family, OverlapsFamily, OverlapsReport};

/// Default cap on the number of configurations an exhaustive scan visits.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleKind {
    /// Conway's rule on S = {−1,0,1}² in the first two generators.
    Life,
    /// x(g) ∧ x(g·s₁).
    And,
    Or,
    /// x(g) + x(g·s₁) mod 2.
    Xor,
    Identity,
    /// x(g·s₁).
    Shift,
    Constant(u32),
    /// x ↦ x·M over 𝔽_pⁿ; a state v encodes the vector with vᵢ the i-th base-p digit.
    Linear(LinearRule),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRule {
    pub matrix: GroupRingMatrix,
    /// coef[m][i][j] = coefficient of h_m in Mᵢⱼ, where memory[m] = h_m⁻¹.
    coef: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug)]
pub struct LocalRule {
    name: String,
    gset: MarkedGSet,
    memory: Vec<GeneratorWord>,
    states: u32,
    kind: RuleKind,
}

fn pow_u64(base: u64, exp: usize) -> Option<u64> {
    let mut r: u64 = 1;
    for _ in 0..exp {
        r = r.checked_mul(base)?;
    }
    Some(r)
}

impl LocalRule {
    /// `life`, `and:z`, `or`, `xor:z`, `identity`, `shift`, `const:K`,
    /// `muller`, `linear:<json>`, each optionally followed by `@<group>`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(json) = text.strip_prefix("linear:") {
            let v: serde_json::Value =
                serde_json::from_str(json).map_err(|e| Error::InvalidArgument(format!("linear rule: {e}")))?;
            return Self::linear(GroupRingMatrix::from_json(&v)?);
        }
        let (name, group) = match text.split_once('@') {
            Some((n, g)) => (n, Some(MarkedGroup::parse(g)?)),
            None => (text, None),
        };
        let (base, arg) = match name.split_once(':') {
            Some((b, a)) => (b, Some(a)),
            None => (name, None),
        };
        if base == "muller" {
            let p = arg.map_or(Ok(2), |a| a.parse().map_err(|_| Error::InvalidArgument(format!("bad field `{a}`"))))?;
            return Self::linear(GroupRingMatrix::muller(p)?);
        }
        let default_group = |spec: &str| group.clone().map_or_else(|| MarkedGroup::parse(spec), Ok);
        let (kind, group) = match base {
            "life" => (RuleKind::Life, default_group("z:2")?),
            "and" | "or" | "xor" | "shift" | "identity" => {
                if let Some(a) = arg {
                    if a != "z" {
                        return Err(Error::UnknownSpec(text.to_string()));
                    }
                }
                let kind = match base {
                    "and" => RuleKind::And,
                    "or" => RuleKind::Or,
                    "xor" => RuleKind::Xor,
                    "shift" => RuleKind::Shift,
                    _ => RuleKind::Identity,
                };
                (kind, default_group("z:1")?)
            }
            "const" | "dead" => {
                let k = arg.map_or(Ok(0), |a| a.parse().map_err(|_| Error::UnknownSpec(text.to_string())))?;
                if k > 1 {
                    return Err(Error::InvalidArgument("constant rules use states {0,1}".into()));
                }
                (RuleKind::Constant(k), default_group("z:1")?)
            }
            _ => return Err(Error::UnknownSpec(text.to_string())),
        };
        Self::table(text, kind, group)
    }

    fn table(name: &str, kind: RuleKind, group: MarkedGroup) -> Result<Self> {
        let x = Letter::pos(0);
        let memory = match kind {
            RuleKind::Life => {
                if group.rank() < 2 {
                    return Err(Error::InvalidArgument("life needs two generators".into()));
                }
                let mut m = Vec::new();
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        let mut w = Vec::new();
                        w.extend(std::iter::repeat_n(if dx < 0 { x.inv() } else { x }, dx.unsigned_abs() as usize));
                        let y = Letter::pos(1);
                        w.extend(std::iter::repeat_n(if dy < 0 { y.inv() } else { y }, dy.unsigned_abs() as usize));
                        m.push(GeneratorWord(w));
                    }
                }
                m
            }
            RuleKind::And | RuleKind::Or | RuleKind::Xor | RuleKind::Shift => {
                if group.rank() < 1 {
                    return Err(Error::InvalidArgument("rule needs a generator".into()));
                }
                vec![GeneratorWord::identity(), GeneratorWord(vec![x])]
            }
            _ => vec![GeneratorWord::identity()],
        };
        Ok(LocalRule { name: name.to_string(), gset: MarkedGSet::regular(group), memory, states: 2, kind })
    }

    pub fn linear(matrix: GroupRingMatrix) -> Result<Self> {
        let group = matrix.group().clone();
        let n = matrix.dim();
        let hs: Vec<_> = matrix.support().into_iter().collect();
        let mut memory = Vec::with_capacity(hs.len());
        let mut coef = Vec::with_capacity(hs.len());
        for h in &hs {
            memory.push(group.word_of(&group.inverse(h)?));
            let mut c = vec![vec![0u32; n]; n];
            for (i, row) in c.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = matrix.entry(i, j).iter().find(|(g, _)| g == h).map_or(0, |(_, k)| *k);
                }
            }
            coef.push(c);
        }
        let states = pow_u64(matrix.field() as u64, n)
            .filter(|&s| s <= u32::MAX as u64)
            .ok_or_else(|| Error::InvalidArgument("alphabet too large".into()))? as u32;
        Ok(LocalRule {
            name: "linear".into(),
            gset: MarkedGSet::regular(group),
            memory,
            states,
            kind: RuleKind::Linear(LinearRule { matrix, coef }),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &MarkedGroup {
        self.gset.group()
    }

    pub fn memory(&self) -> &[GeneratorWord] {
        &self.memory
    }

    pub fn states(&self) -> u32 {
        self.states
    }

    pub fn kind(&self) -> &RuleKind {
        &self.kind
    }

    pub fn linear_matrix(&self) -> Option<&GroupRingMatrix> {
        match &self.kind {
            RuleKind::Linear(l) => Some(&l.matrix),
            _ => None,
        }
    }

    /// θ applied to the values at g·s for s in the memory order.
    pub fn theta(&self, vals: &[u32]) -> u32 {
        match &self.kind {
            RuleKind::Life => {
                let alive = vals.iter().enumerate().filter(|&(i, &v)| i != 4 && v == 1).count();
                u32::from(alive == 3 || (vals[4] == 1 && alive == 2))
            }
            RuleKind::And => vals[0] & vals[1],
            RuleKind::Or => vals[0] | vals[1],
            RuleKind::Xor => vals[0] ^ vals[1],
            RuleKind::Shift => vals[1],
            RuleKind::Identity => vals[0],
            RuleKind::Constant(k) => *k,
            RuleKind::Linear(l) => {
                let p = l.matrix.field();
                let n = l.matrix.dim();
                let mut out = vec![0u32; n];
                for (m, &v) in vals.iter().enumerate() {
                    let mut v = v;
                    for i in 0..n {
                        let d = v % p;
                        v /= p;
                        if d != 0 {
                            for (j, o) in out.iter_mut().enumerate() {
                                *o = (*o + d * l.coef[m][i][j]) % p;
                            }
                        }
                    }
                }
                out.iter().rev().fold(0, |acc, &d| acc * p + d)
            }
        }
    }

    /// Smallest q with θ(q, …, q) = q.
    pub fn quiescent(&self) -> Option<u32> {
        (0..self.states).find(|&q| self.theta(&vec![q; self.memory.len()]) == q)
    }

    fn neighbours(&self, p: &Point) -> Result<Vec<Point>> {
        self.memory.iter().map(|s| self.gset.act_word(p, s)).collect()
    }
}

/// Values on a finite window of G, keyed by canonical element keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellPattern {
    pub group: String,
    pub cells: Vec<(String, u32)>,
}

#[derive(Serialize, Deserialize)]
struct CellJson {
    key: String,
    value: u32,
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    group: String,
    cells: Vec<CellJson>,
}

impl CellPattern {
    pub fn to_json(&self) -> serde_json::Value {
        let p = PatternJson {
            group: self.group.clone(),
            cells: self.cells.iter().map(|(k, v)| CellJson { key: k.clone(), value: *v }).collect(),
        };
        serde_json::to_value(p).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: PatternJson = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("pattern: {e}")))?;
        Ok(CellPattern { group: p.group, cells: p.cells.into_iter().map(|c| (c.key, c.value)).collect() })
    }

    pub fn get(&self, key: &str) -> Option<u32> {
        self.cells.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    /// Keys of cells with nonzero value.
    pub fn support(&self) -> Vec<String> {
        self.cells.iter().filter(|(_, v)| *v != 0).map(|(k, _)| k.clone()).collect()
    }

    /// Adds every element within word distance `radius` of the window, set to `fill`.
    pub fn padded(&self, radius: usize, fill: u32) -> Result<Self> {
        let x = MarkedGSet::regular(MarkedGroup::parse(&self.group)?);
        let mut frame = Frame::from_pattern(&x, self)?;
        let letters = x.letters();
        let mut layer: Vec<Point> = frame.points.iter().cloned().collect();
        for _ in 0..radius {
            let mut next = Vec::new();
            for p in &layer {
                for &l in &letters {
                    let q = x.act(p, l)?;
                    if frame.points.insert(q.clone()) {
                        frame.values.push(fill);
                        next.push(q);
                    }
                }
            }
            layer = next;
        }
        Ok(frame.to_pattern(&x))
    }
}

struct Frame {
    points: IndexSet<Point>,
    values: Vec<u32>,
}

impl Frame {
    fn from_pattern(x: &MarkedGSet, p: &CellPattern) -> Result<Self> {
        let group = x.group();
        let mut points = IndexSet::new();
        let mut values = Vec::new();
        for (k, v) in &p.cells {
            let pt = Point::Element(group.parse_key(k)?);
            if !points.insert(pt) {
                return Err(Error::InvalidArgument(format!("cell `{k}` repeated")));
            }
            values.push(*v);
        }
        Ok(Frame { points, values })
    }

    fn to_pattern(&self, x: &MarkedGSet) -> CellPattern {
        CellPattern {
            group: x.group().spec(),
            cells: self.points.iter().zip(&self.values).map(|(p, v)| (x.key(p), *v)).collect(),
        }
    }
}

fn check_group(rule: &LocalRule, group: &str) -> Result<()> {
    let g = MarkedGroup::parse(group)?;
    if &g != rule.group() {
        return Err(Error::WrongFamily { expected: rule.group().spec(), got: g.spec() });
    }
    Ok(())
}

fn check_states(rule: &LocalRule, values: &[u32]) -> Result<()> {
    match values.iter().find(|&&v| v >= rule.states) {
        Some(v) => Err(Error::InvalidArgument(format!("state {v} outside alphabet of size {}", rule.states))),
        None => Ok(()),
    }
}

/// Θ on the interior E = {g ∈ F : gS ⊆ F} of the pattern's window.
pub fn ca_step(rule: &LocalRule, pattern: &CellPattern) -> Result<CellPattern> {
    check_group(rule, &pattern.group)?;
    let x = &rule.gset;
    let frame = Frame::from_pattern(x, pattern)?;
    check_states(rule, &frame.values)?;
    let mut cells = Vec::new();
    let mut vals = Vec::with_capacity(rule.memory.len());
    'outer: for p in &frame.points {
        vals.clear();
        for q in rule.neighbours(p)? {
            match frame.points.get_index_of(&q) {
                Some(i) => vals.push(frame.values[i]),
                None => continue 'outer,
            }
        }
        cells.push((x.key(p), rule.theta(&vals)));
    }
    if cells.is_empty() {
        return Err(Error::WindowTooSmall("no cell has its whole neighbourhood in the window".into()));
    }
    Ok(CellPattern { group: pattern.group.clone(), cells })
}

pub fn ca_run(rule: &LocalRule, pattern: &CellPattern, steps: usize) -> Result<CellPattern> {
    let mut p = pattern.clone();
    for _ in 0..steps {
        p = ca_step(rule, &p)?;
    }
    Ok(p)
}

/// Window F and its neighbourhood FS, with nb[f][m] = index of f·s_m in FS.
struct Extended {
    window: Vec<Point>,
    fs: IndexSet<Point>,
    nb: Vec<Vec<usize>>,
}

fn extend(rule: &LocalRule, keys: &[String]) -> Result<Extended> {
    let group = rule.group();
    let mut window: IndexSet<Point> = IndexSet::new();
    for k in keys {
        window.insert(Point::Element(group.parse_key(k)?));
    }
    let window: Vec<Point> = window.into_iter().collect();
    let mut fs = IndexSet::new();
    let mut nb = Vec::with_capacity(window.len());
    for f in &window {
        let row = rule.neighbours(f)?.into_iter().map(|q| fs.insert_full(q).0).collect();
        nb.push(row);
    }
    Ok(Extended { window, fs, nb })
}

/// Distinct images on F of all configurations on FS, as a bitset over
/// pattern codes (digit i = value at F[i]).
fn image_set(rule: &LocalRule, ext: &Extended, budget: u64) -> Result<Vec<bool>> {
    let k = rule.states as u64;
    let total = pow_u64(k, ext.fs.len()).filter(|&t| t <= budget).ok_or(Error::CapExceeded {
        what: "exhaustive configurations",
        limit: budget as usize,
        reached: pow_u64(k, ext.fs.len()).unwrap_or(u64::MAX) as usize,
    })?;
    let outs = pow_u64(k, ext.window.len()).filter(|&t| t <= budget).ok_or(Error::CapExceeded {
        what: "window patterns",
        limit: budget as usize,
        reached: usize::MAX,
    })?;
    let mut seen = vec![false; outs as usize];
    let mut digits = vec![0u32; ext.fs.len()];
    let mut vals = Vec::new();
    for _ in 0..total {
        let mut code = 0u64;
        for f in (0..ext.window.len()).rev() {
            vals.clear();
            vals.extend(ext.nb[f].iter().map(|&i| digits[i]));
            code = code * k + rule.theta(&vals) as u64;
        }
        seen[code as usize] = true;
        // odometer
        for d in digits.iter_mut() {
            *d += 1;
            if *d < rule.states {
                break;
            }
            *d = 0;
        }
    }
    Ok(seen)
}

/// Linear map x↾FS ↦ Θ(x)↾F as rows indexed by (FS cell, component).
fn linear_rows(l: &LinearRule, ext: &Extended) -> Vec<Vec<u32>> {
    let n = l.matrix.dim();
    let p = l.matrix.field();
    let mut rows = vec![vec![0u32; n * ext.window.len()]; n * ext.fs.len()];
    for (f, nbs) in ext.nb.iter().enumerate() {
        for (m, &u) in nbs.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let c = &mut rows[u * n + i][f * n + j];
                    *c = (*c + l.coef[m][i][j]) % p;
                }
            }
        }
    }
    rows
}

fn pattern_from_code(x: &MarkedGSet, points: &[Point], mut code: u64, k: u64, map: impl Fn(u32) -> u32) -> CellPattern {
    let cells = points
        .iter()
        .map(|p| {
            let d = (code % k) as u32;
            code /= k;
            (x.key(p), map(d))
        })
        .collect();
    CellPattern { group: x.group().spec(), cells }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchKind {
    Exhaustive,
    Rank,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoeReport {
    pub window: Vec<String>,
    /// #FS.
    pub extended: usize,
    pub mode: SearchKind,
    /// #Θ(A^{FS})↾F.
    pub images: u64,
    pub patterns: u64,
    #[serde(serialize_with = "ser_opt_pattern")]
    pub witness: Option<CellPattern>,
}

fn ser_opt_pattern<S: serde::Serializer>(p: &Option<CellPattern>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match p {
        Some(p) => p.to_json().serialize(s),
        None => s.serialize_none(),
    }
}

fn count_images(rule: &LocalRule, ext: &Extended, budget: u64) -> Result<(SearchKind, u64, Option<u64>)> {
    let k = rule.states as u64;
    match &rule.kind {
        RuleKind::Linear(l) => {
            let rows = linear_rows(l, ext);
            let n = l.matrix.dim();
            let p = l.matrix.field();
            let r = rank(&rows, p);
            let images = pow_u64(p as u64, r).unwrap_or(u64::MAX);
            let mut missing = None;
            if r < n * ext.window.len() {
                for col in 0..n * ext.window.len() {
                    let mut with = rows.clone();
                    let mut e = vec![0u32; n * ext.window.len()];
                    e[col] = 1;
                    with.push(e);
                    if rank(&with, p) > r {
                        // unit vector at cell col / n, component col % n
                        missing = Some((p as u64).pow((col % n) as u32) * k.pow((col / n) as u32));
                        break;
                    }
                }
            }
            Ok((SearchKind::Rank, images, missing))
        }
        _ => {
            let seen = image_set(rule, ext, budget)?;
            let images = seen.iter().filter(|&&b| b).count() as u64;
            let missing = seen.iter().position(|&b| !b).map(|c| c as u64);
            Ok((SearchKind::Exhaustive, images, missing))
        }
    }
}

/// A pattern on F outside Θ(A^{FS})↾F, if any. Exhaustive over A^{FS}
/// for table rules; by rank over 𝔽_p for linear rules.
pub fn goe_search(rule: &LocalRule, window: &[String], budget: u64) -> Result<GoeReport> {
    let ext = extend(rule, window)?;
    let k = rule.states as u64;
    let (mode, images, missing) = count_images(rule, &ext, budget)?;
    let x = &rule.gset;
    Ok(GoeReport {
        window: ext.window.iter().map(|p| x.key(p)).collect(),
        extended: ext.fs.len(),
        mode,
        images,
        patterns: pow_u64(k, ext.window.len()).unwrap_or(u64::MAX),
        witness: missing.map(|c| pattern_from_code(x, &ext.window, c, k, |d| d)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyEntry {
    pub cells: usize,
    pub images: u64,
    /// log(#images)/#F.
    #[serde(serialize_with = "crate::text::ser_float")]
    pub entropy: f64,
}

/// log #Θ(A^G)↾F / #F for each window F.
pub fn entropy_estimate(rule: &LocalRule, windows: &[Vec<String>], budget: u64) -> Result<Vec<EntropyEntry>> {
    windows
        .iter()
        .map(|w| {
            let ext = extend(rule, w)?;
            let (_, images, _) = count_images(rule, &ext, budget)?;
            let cells = ext.window.len();
            Ok(EntropyEntry { cells, images, entropy: (images as f64).ln() / cells as f64 })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MepReport {
    pub bound: usize,
    /// #W, the cells where the patterns may differ from the background.
    pub support: usize,
    pub mode: SearchKind,
    #[serde(serialize_with = "ser_opt_pair")]
    pub witness: Option<(CellPattern, CellPattern)>,
}

fn ser_opt_pair<S: serde::Serializer>(p: &Option<(CellPattern, CellPattern)>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match p {
        Some((a, b)) => [a.to_json(), b.to_json()].serialize(s),
        None => s.serialize_none(),
    }
}

/// Two distinct patterns supported in W = B(bound) with equal images.
/// Table rules: exhaustive over A^W on the quiescent background, comparing
/// images on W·S⁻¹, where they can differ. Returns (later, earlier) in scan
/// order, where digit 0 stands for the quiescent state. Linear rules: a
/// kernel vector of x ↦ xM on W, paired with 0.
pub fn mep_search(rule: &LocalRule, bound: usize, budget: u64) -> Result<MepReport> {
    let x = &rule.gset;
    let ball = build_ball(x, bound)?;
    let w_points: Vec<Point> = (0..ball.len()).map(|v| ball.point(v).clone()).collect();
    if let RuleKind::Linear(l) = &rule.kind {
        let basis = kernel_on(l, &w_points)?;
        let zero = CellPattern { group: x.group().spec(), cells: w_points.iter().map(|p| (x.key(p), 0)).collect() };
        let witness = basis.into_iter().next().map(|v| (v, zero));
        return Ok(MepReport { bound, support: w_points.len(), mode: SearchKind::Rank, witness });
    }
    let q = rule.quiescent().ok_or(Error::NoQuiescent)?;
    let k = rule.states as u64;
    let total = pow_u64(k, w_points.len()).filter(|&t| t <= budget).ok_or(Error::CapExceeded {
        what: "exhaustive configurations",
        limit: budget as usize,
        reached: pow_u64(k, w_points.len()).unwrap_or(u64::MAX) as usize,
    })?;
    let w_index: HashMap<&Point, usize> = w_points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut e_points: IndexSet<Point> = IndexSet::new();
    for p in &w_points {
        for s in &rule.memory {
            e_points.insert(x.act_word(p, &s.inverse())?);
        }
    }
    // nb[e][m] = index in W of e·s_m, or None for background cells
    let mut nb = Vec::with_capacity(e_points.len());
    for e in &e_points {
        nb.push(rule.neighbours(e)?.iter().map(|t| w_index.get(t).copied()).collect::<Vec<_>>());
    }
    let state = |d: u32| (d + q) % rule.states;
    let mut seen: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut digits = vec![0u32; w_points.len()];
    let mut vals = Vec::new();
    for code in 0..total {
        let img: Vec<u32> = nb
            .iter()
            .map(|row: &Vec<Option<usize>>| {
                vals.clear();
                vals.extend(row.iter().map(|i| i.map_or(q, |i| state(digits[i]))));
                rule.theta(&vals)
            })
            .collect();
        if let Some(&earlier) = seen.get(&img) {
            let a = pattern_from_code(x, &w_points, code, k, state);
            let b = pattern_from_code(x, &w_points, earlier, k, state);
            return Ok(MepReport { bound, support: w_points.len(), mode: SearchKind::Exhaustive, witness: Some((a, b)) });
        }
        seen.insert(img, code);
        for d in digits.iter_mut() {
            *d += 1;
            if *d < rule.states {
                break;
            }
            *d = 0;
        }
    }
    Ok(MepReport { bound, support: w_points.len(), mode: SearchKind::Exhaustive, witness: None })
}

fn kernel_on(l: &LinearRule, w_points: &[Point]) -> Result<Vec<CellPattern>> {
    let m = &l.matrix;
    let group = m.group();
    let x = MarkedGSet::regular(group.clone());
    let n = m.dim();
    let p = m.field();
    let mut out_index: IndexSet<crate::groups::Element> = IndexSet::new();
    let mut entries: Vec<Vec<(usize, u32)>> = Vec::new();
    for pt in w_points {
        let Point::Element(g) = pt else { unreachable!("regular action") };
        for i in 0..n {
            let mut row = Vec::new();
            for j in 0..n {
                for (h, c) in m.entry(i, j) {
                    let (idx, _) = out_index.insert_full(group.mul(g, h)?);
                    row.push((idx * n + j, *c));
                }
            }
            entries.push(row);
        }
    }
    let ncols = out_index.len() * n;
    let rows: Vec<Vec<u32>> = entries
        .into_iter()
        .map(|r| {
            let mut v = vec![0u32; ncols];
            for (c, k) in r {
                v[c] = (v[c] + k) % p;
            }
            v
        })
        .collect();
    let basis = left_kernel(&rows, ncols, p);
    Ok(basis
        .into_iter()
        .map(|v| CellPattern {
            group: group.spec(),
            cells: w_points
                .iter()
                .enumerate()
                .map(|(a, pt)| (x.key(pt), v[a * n..(a + 1) * n].iter().rev().fold(0, |acc, &d| acc * p + d)))
                .collect(),
        })
        .collect())
}

/// Basis of {x supported in B(radius) : xM = 0}; empty certifies
/// pre-injectivity at this scale.
pub fn linca_kernel_basis(m: &GroupRingMatrix, radius: usize) -> Result<Vec<CellPattern>> {
    let rule = LocalRule::linear(m.clone())?;
    let RuleKind::Linear(l) = &rule.kind else { unreachable!() };
    let ball = build_ball(&rule.gset, radius)?;
    let pts: Vec<Point> = (0..ball.len()).map(|v| ball.point(v).clone()).collect();
    kernel_on(l, &pts)
}

pub fn linca_adjoint(m: &GroupRingMatrix) -> Result<GroupRingMatrix> {
    m.adjoint()
}

/// Decodes a pattern of a linear rule into a configuration.
pub fn pattern_to_config(m: &GroupRingMatrix, pattern: &CellPattern) -> Result<LinConfig> {
    let mut out = LinConfig::new();
    let p = m.field();
    for (k, v) in &pattern.cells {
        let mut v = *v;
        let digits: Vec<u32> = (0..m.dim())
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect();
        if digits.iter().any(|&d| d != 0) {
            out.insert(m.group().parse_key(k)?, digits);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoherenceReport {
    pub group: String,
    pub rule: String,
    pub order: usize,
    pub goe: bool,
    pub mep: bool,
    pub coherent: bool,
}

/// On a finite group, decides GOE and MEP on the whole group.
pub fn finite_coherence(rule: &LocalRule, budget: u64) -> Result<CoherenceReport> {
    let x = &rule.gset;
    let order = x
        .group()
        .finite_order()
        .ok_or_else(|| Error::InvalidArgument(format!("{} is not finite", x.group().spec())))? as usize;
    let whole = build_ball(x, order)?;
    let keys: Vec<String> = (0..whole.len()).map(|v| whole.key(v)).collect();
    let goe = goe_search(rule, &keys, budget)?.witness.is_some();
    let mep = mep_search(rule, order, budget)?.witness.is_some();
    Ok(CoherenceReport { group: x.group().spec(), rule: rule.name.clone(), order, goe, mep, coherent: goe == mep })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_pattern(live: &[(i64, i64)], lo: i64, hi: i64) -> CellPattern {
        let mut cells = Vec::new();
        for y in lo..=hi {
            for x in lo..=hi {
                cells.push((format!("({x},{y})"), u32::from(live.contains(&(x, y)))));
            }
        }
        CellPattern { group: "z:2".into(), cells }
    }

    fn live_in(p: &CellPattern, lo: i64, hi: i64) -> Vec<(i64, i64)> {
        let mut v = Vec::new();
        for (k, val) in &p.cells {
            let t: Vec<i64> = k.trim_matches(|c| c == '(' || c == ')').split(',').map(|s| s.parse().unwrap()).collect();
            if *val == 1 && (lo..=hi).contains(&t[0]) && (lo..=hi).contains(&t[1]) {
                v.push((t[0], t[1]));
            }
        }
        v.sort();
        v
    }

    #[test]
    fn life_glider() {
        let life = LocalRule::parse("life").unwrap();
        let start = z2_pattern(&[(1, 1), (2, 1), (3, 1), (3, 2), (2, 3)], -3, 8);
        let one = ca_step(&life, &start).unwrap();
        let mut want = vec![(1, 2), (2, 1), (3, 1), (3, 2), (2, 0)];
        want.sort();
        assert_eq!(live_in(&one, 0, 5), want);
        let two = ca_step(&life, &one).unwrap();
        let mut want = vec![(1, 1), (3, 2), (3, 1), (2, 0), (3, 0)];
        want.sort();
        assert_eq!(live_in(&two, 0, 5), want);
    }

    #[test]
    fn life_truth_table() {
        let life = LocalRule::parse("life").unwrap();
        for code in 0u32..512 {
            let vals: Vec<u32> = (0..9).map(|i| code >> i & 1).collect();
            let nbrs: u32 = vals.iter().enumerate().filter(|(i, _)| *i != 4).map(|(_, v)| v).sum();
            let alive = vals[4] == 1;
            let want = if alive && (nbrs == 2 || nbrs == 3) {
                1
            } else if !alive && nbrs == 3 {
                1
            } else {
                0
            };
            assert_eq!(life.theta(&vals), want, "{vals:?}");
        }
    }

    #[test]
    fn window_too_small() {
        let life = LocalRule::parse("life").unwrap();
        let p = z2_pattern(&[], 0, 1);
        assert!(matches!(ca_step(&life, &p), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn goe_examples() {
        let and = LocalRule::parse("and:z").unwrap();
        let keys: Vec<String> = ["0", "1", "2"].iter().map(|s| s.to_string()).collect();
        let r = goe_search(&and, &keys, DEFAULT_BUDGET).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.cells, vec![("0".into(), 1), ("1".into(), 0), ("2".into(), 1)]);
        let life = LocalRule::parse("life").unwrap();
        let keys: Vec<String> = ["(0,0)", "(1,0)", "(0,1)", "(1,1)"].iter().map(|s| s.to_string()).collect();
        let r = goe_search(&life, &keys, DEFAULT_BUDGET).unwrap();
        assert!(r.witness.is_none());
        assert_eq!(r.images, 16);
    }

    #[test]
    fn muller_examples() {
        let m = LocalRule::parse("muller").unwrap();
        let r = goe_search(&m, &["1".to_string()], DEFAULT_BUDGET).unwrap();
        assert_eq!(r.mode, SearchKind::Rank);
        assert_eq!(r.witness.unwrap().cells, vec![("1".into(), 2)]);
        let e = entropy_estimate(&m, &[vec!["1".to_string()]], DEFAULT_BUDGET).unwrap();
        assert_eq!(e[0].images, 2);
        assert!(linca_kernel_basis(m.linear_matrix().unwrap(), 2).unwrap().is_empty());
        assert!(mep_search(&m, 3, DEFAULT_BUDGET).unwrap().witness.is_none());
        // x = δ₁·(α,β) with α = 1, β = 1
        let mut p = CellPattern { group: "c2free:3".into(), cells: vec![("1".into(), 3)] };
        p = p.padded(2, 0).unwrap();
        let out = ca_step(&m, &p).unwrap();
        assert_eq!(out.get("a"), Some(1));
        assert_eq!(out.get("b"), Some(0));
        assert_eq!(out.get("c"), Some(1));
        assert_eq!(out.get("1"), Some(0));
    }

    #[test]
    fn mep_examples() {
        let life = LocalRule::parse("life").unwrap();
        let (a, b) = mep_search(&life, 1, DEFAULT_BUDGET).unwrap().witness.unwrap();
        assert_eq!(a.support(), vec!["(0,0)".to_string()]);
        assert!(b.support().is_empty());
        let and = LocalRule::parse("and:z").unwrap();
        let (a, b) = mep_search(&and, 1, DEFAULT_BUDGET).unwrap().witness.unwrap();
        assert_eq!(a.support(), vec!["0".to_string()]);
        assert!(b.support().is_empty());
        let id = LocalRule::parse("identity").unwrap();
        assert!(mep_search(&id, 2, DEFAULT_BUDGET).unwrap().witness.is_none());
    }

    #[test]
    fn kernels() {
        let z = MarkedGroup::parse("z:1").unwrap();
        let one_t = GroupRingMatrix::new(&z, 2, vec![vec![vec![(GeneratorWord::identity(), 1), (z.parse_word("x").unwrap(), 1)]]]).unwrap();
        assert!(linca_kernel_basis(&one_t, 5).unwrap().is_empty());
        let zero = GroupRingMatrix::new(&z, 2, vec![vec![vec![]]]).unwrap();
        assert_eq!(linca_kernel_basis(&zero, 1).unwrap().len(), 3);
    }

    #[test]
    fn entropy_examples() {
        let xor = LocalRule::parse("xor:z").unwrap();
        let keys: Vec<String> = (0..8).map(|i| i.to_string()).collect();
        let e = entropy_estimate(&xor, std::slice::from_ref(&keys), DEFAULT_BUDGET).unwrap();
        assert!((e[0].entropy - 2f64.ln()).abs() < 1e-15);
        let dead = LocalRule::parse("const:0").unwrap();
        assert_eq!(entropy_estimate(&dead, &[keys], DEFAULT_BUDGET).unwrap()[0].entropy, 0.0);
    }

    #[test]
    fn torus_coherence() {
        for r in ["xor@zmod:5", "and@zmod:6", "identity@zmod:4"] {
            let rule = LocalRule::parse(r).unwrap();
            let c = finite_coherence(&rule, DEFAULT_BUDGET).unwrap();
            assert!(c.coherent, "{c:?}");
        }
    }
}
