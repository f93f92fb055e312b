//! Marked G-sets and their Schreier graphs.
//!
//! G-set specs: `cayley:<group>` (or a bare group spec) for the regular
//! action, `coset:f2` for H\F₂ with H = ⟨bᵐab⁻ᵐ : m ≥ 0⟩, and
//! `orbit:<grigorchuk|basilica>:depth=n[:base=w]` for the action on a
//! level of the binary tree.

use indexmap::IndexSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Element, Family, GeneratorWord, Letter, MarkedGroup};
use crate::selfsim::{parse_bits, SelfSimFamily, TreeAutomorphism};

/// A point of H\F₂: either Hbᵏ with k ≥ 0, or Hw with w a reduced word
/// starting with b⁻¹. These representatives are the shortest words of
/// their cosets, so they double as canonical keys.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CosetPoint {
    Core(u64),
    Branch(Vec<Letter>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Element(Element),
    Level(Vec<u8>),
    Coset(CosetPoint),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionKind {
    Regular,
    TreeLevel { depth: usize },
    CosetF2,
}

#[derive(Clone, Debug)]
pub struct MarkedGSet {
    group: MarkedGroup,
    kind: ActionKind,
    basepoint: Point,
    spec: String,
}

const COSET_A: usize = 0;
const COSET_B: usize = 1;

impl MarkedGSet {
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = || Error::UnknownSpec(spec.to_string());
        if spec == "coset:f2" {
            let group = MarkedGroup::parse("free:2")?;
            return Ok(MarkedGSet {
                group,
                kind: ActionKind::CosetF2,
                basepoint: Point::Coset(CosetPoint::Core(0)),
                spec: spec.into(),
            });
        }
        if let Some(rest) = spec.strip_prefix("orbit:") {
            let mut parts = rest.split(':');
            let family = match parts.next() {
                Some("grigorchuk") => SelfSimFamily::Grigorchuk,
                Some("basilica") => SelfSimFamily::Basilica,
                _ => return Err(bad()),
            };
            let mut depth = None;
            let mut base = None;
            for p in parts {
                if let Some(d) = p.strip_prefix("depth=") {
                    depth = Some(d.parse::<usize>().map_err(|_| bad())?);
                } else if let Some(b) = p.strip_prefix("base=") {
                    base = Some(parse_bits(b)?);
                } else {
                    return Err(bad());
                }
            }
            let depth = depth.ok_or_else(bad)?;
            let base = base.unwrap_or_else(|| vec![0; depth]);
            if base.len() != depth {
                return Err(Error::InvalidArgument(format!("basepoint must have length {depth}")));
            }
            return Ok(MarkedGSet {
                group: TreeAutomorphism::group(family),
                kind: ActionKind::TreeLevel { depth },
                basepoint: Point::Level(base),
                spec: spec.into(),
            });
        }
        let gspec = spec.strip_prefix("cayley:").unwrap_or(spec);
        let group = MarkedGroup::parse(gspec)?;
        Ok(MarkedGSet::regular(group))
    }

    pub fn regular(group: MarkedGroup) -> Self {
        let basepoint = Point::Element(group.identity());
        let spec = format!("cayley:{}", group.spec());
        MarkedGSet { group, kind: ActionKind::Regular, basepoint, spec }
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn kind(&self) -> &ActionKind {
        &self.kind
    }

    pub fn basepoint(&self) -> &Point {
        &self.basepoint
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn letters(&self) -> Vec<Letter> {
        self.group.edge_letters()
    }

    pub fn act(&self, p: &Point, l: Letter) -> Result<Point> {
        match (p, &self.kind) {
            (Point::Element(e), ActionKind::Regular) => Ok(Point::Element(self.group.mul_letter(e, l)?)),
            (Point::Level(x), ActionKind::TreeLevel { .. }) => {
                let Family::SelfSimilar(f) = *self.group.family() else {
                    unreachable!("tree levels only exist for self-similar groups")
                };
                Ok(Point::Level(TreeAutomorphism::new(f, &[l])?.act_on_word(x)?))
            }
            (Point::Coset(c), ActionKind::CosetF2) => {
                if l.generator > 1 {
                    return Err(Error::UnknownGenerator { index: l.generator, rank: 2 });
                }
                Ok(Point::Coset(coset_step(c, l)))
            }
            _ => Err(Error::InvalidArgument(format!("point {p:?} does not belong to {}", self.spec))),
        }
    }

    pub fn act_word(&self, p: &Point, w: &GeneratorWord) -> Result<Point> {
        let mut q = p.clone();
        for &l in w.letters() {
            q = self.act(&q, l)?;
        }
        Ok(q)
    }

    pub fn key(&self, p: &Point) -> String {
        match p {
            Point::Element(e) => self.group.key_text(e),
            Point::Level(x) => x.iter().map(|b| (b'0' + b) as char).collect(),
            Point::Coset(CosetPoint::Core(0)) => "H".into(),
            Point::Coset(CosetPoint::Core(k)) => {
                let w = GeneratorWord(vec![Letter::pos(COSET_B); *k as usize]);
                format!("H {}", self.group.format_word(&w))
            }
            Point::Coset(CosetPoint::Branch(w)) => format!("H {}", self.group.format_word(&GeneratorWord(w.clone()))),
        }
    }

    /// Whether every orbit is finite (then balls eventually stabilize).
    pub fn is_finite(&self) -> bool {
        match self.kind {
            ActionKind::TreeLevel { .. } => true,
            ActionKind::CosetF2 => false,
            ActionKind::Regular => self.group.finite_order().is_some(),
        }
    }
}

fn coset_step(c: &CosetPoint, l: Letter) -> CosetPoint {
    match c {
        CosetPoint::Core(k) => match (l.generator, l.inverse) {
            (COSET_A, _) => CosetPoint::Core(*k),
            (_, false) => CosetPoint::Core(k + 1),
            (_, true) if *k > 0 => CosetPoint::Core(k - 1),
            (_, true) => CosetPoint::Branch(vec![l]),
        },
        CosetPoint::Branch(w) => {
            let mut w = w.clone();
            if w.last() == Some(&l.inv()) {
                w.pop();
            } else {
                w.push(l);
            }
            if w.is_empty() {
                CosetPoint::Core(0)
            } else {
                CosetPoint::Branch(w)
            }
        }
    }
}

/// Membership in H = ⟨bᵐab⁻ᵐ : m ≥ 0⟩ ≤ F₂ = ⟨a, b⟩. A word lies in H
/// iff its b-exponent sum is 0 and every a-letter sits at b-height ≥ 0
/// (the height being the b-exponent sum of the prefix before it); such a
/// word telescopes into a product of the bᵐa^{±1}b⁻ᵐ, and both conditions
/// are invariant under free reduction.
pub fn coset_f2_contains(w: &GeneratorWord) -> bool {
    let mut h: i64 = 0;
    for l in w.letters() {
        if l.generator == COSET_A {
            if h < 0 {
                return false;
            }
        } else {
            h += l.sign();
        }
    }
    h == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub src: usize,
    /// Index into the graph's letter list.
    pub gen: usize,
    pub dst: usize,
}

/// A ball in a Schreier graph. Vertices whose every neighbour lies in the
/// ball are "complete"; all others are frontier vertices.
#[derive(Clone, Debug)]
pub struct SchreierGraph {
    gset: MarkedGSet,
    letters: Vec<Letter>,
    letter_names: Vec<String>,
    radius: usize,
    points: IndexSet<Point>,
    depths: Vec<u32>,
    /// Row-major targets per (vertex, letter); `NONE` when outside the ball.
    adj: Vec<u32>,
    complete: Vec<bool>,
}

const NONE: u32 = u32::MAX;

#[derive(Serialize)]
struct VertexJson<'a> {
    key: &'a str,
    depth: usize,
}

#[derive(Serialize)]
struct EdgeJson<'a> {
    src: &'a str,
    gen: &'a str,
    dst: &'a str,
}

#[derive(Serialize)]
struct GraphJson<'a> {
    vertices: Vec<VertexJson<'a>>,
    edges: Vec<EdgeJson<'a>>,
    basepoint: &'a str,
    radius: usize,
    group: &'a str,
}

/// Default vertex cap, derived from the AMENLAB_CAP_MB budget (default
/// 1024 MB) at roughly 512 bytes per stored vertex.
pub fn default_vertex_cap() -> usize {
    let mb = std::env::var("AMENLAB_CAP_MB")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(1024);
    (mb.saturating_mul(1 << 20) / 512).max(1)
}

pub fn build_ball(x: &MarkedGSet, radius: usize) -> Result<SchreierGraph> {
    build_ball_capped(x, radius, default_vertex_cap())
}

/// Exact ball of the given radius, or `CapExceeded` with the number of
/// vertices reached.
pub fn build_ball_capped(x: &MarkedGSet, radius: usize, cap: usize) -> Result<SchreierGraph> {
    let cap = cap.min(NONE as usize - 1);
    bfs(x, radius, cap)?.map_err(|_| Error::CapExceeded { what: "ball vertices", limit: cap, reached: cap })
}

/// Inner `Err(d)`: the cap was hit while adding a vertex at depth d, so
/// B(d−1) fits.
fn bfs(x: &MarkedGSet, radius: usize, cap: usize) -> Result<std::result::Result<SchreierGraph, usize>> {
    let letters = x.letters();
    let k = letters.len();
    let mut points: IndexSet<Point> = IndexSet::new();
    points.insert(x.basepoint().clone());
    let mut depths = vec![0u32];
    let mut adj: Vec<u32> = Vec::new();
    let mut head = 0;
    while head < points.len() {
        let d = depths[head] as usize;
        let p = points[head].clone();
        for &l in &letters {
            let q = x.act(&p, l)?;
            let t = match points.get_index_of(&q) {
                Some(t) => t as u32,
                None if d < radius => {
                    if points.len() >= cap {
                        return Ok(Err(d + 1));
                    }
                    points.insert(q);
                    depths.push(d as u32 + 1);
                    (points.len() - 1) as u32
                }
                None => NONE,
            };
            adj.push(t);
        }
        head += 1;
    }
    let complete = adj.chunks(k.max(1)).map(|r| r.iter().all(|&t| t != NONE)).collect::<Vec<_>>();
    let complete = if k == 0 { vec![true; points.len()] } else { complete };
    let letter_names = letters.iter().map(|&l| x.group().letter_name(l)).collect();
    Ok(Ok(SchreierGraph { gset: x.clone(), letters, letter_names, radius, points, depths, adj, complete }))
}

/// The largest ball of radius ≤ max_radius that fits under the cap.
pub fn largest_ball(x: &MarkedGSet, max_radius: usize, cap: usize) -> Result<SchreierGraph> {
    let cap = cap.min(NONE as usize - 1);
    match bfs(x, max_radius, cap)? {
        Ok(g) => Ok(g),
        Err(d) => build_ball_capped(x, d - 1, cap),
    }
}

impl SchreierGraph {
    pub fn gset(&self) -> &MarkedGSet {
        &self.gset
    }

    pub fn gset_spec(&self) -> &str {
        self.gset.spec()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter_names(&self) -> &[String] {
        &self.letter_names
    }

    pub fn basepoint(&self) -> usize {
        0
    }

    pub fn point(&self, v: usize) -> &Point {
        &self.points[v]
    }

    pub fn key(&self, v: usize) -> String {
        self.gset.key(&self.points[v])
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depths[v] as usize
    }

    pub fn vertex_of(&self, p: &Point) -> Option<usize> {
        self.points.get_index_of(p)
    }

    pub fn vertex_by_key(&self, key: &str) -> Option<usize> {
        (0..self.len()).find(|&v| self.key(v) == key)
    }

    /// Target of the edge (v, letter index), if it lies in the ball.
    #[inline]
    pub fn neighbor(&self, v: usize, gen: usize) -> Option<usize> {
        let t = self.adj[v * self.letters.len() + gen];
        (t != NONE).then_some(t as usize)
    }

    pub fn is_complete(&self, v: usize) -> bool {
        self.complete[v]
    }

    pub fn interior(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.complete[v]).collect()
    }

    /// Vertex counts by depth, i.e. sphere sizes.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.radius + 1];
        for &d in &self.depths {
            s[d as usize] += 1;
        }
        s
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for v in 0..self.len() {
            for g in 0..self.letters.len() {
                if let Some(t) = self.neighbor(v, g) {
                    out.push(Edge { src: v, gen: g, dst: t });
                }
            }
        }
        out
    }

    pub fn require_interior(&self, f: &[usize]) -> Result<()> {
        for &v in f {
            if !self.complete[v] {
                return Err(Error::Frontier(self.key(v)));
            }
        }
        Ok(())
    }

    pub fn membership(&self, f: &[usize]) -> Vec<bool> {
        let mut m = vec![false; self.len()];
        for &v in f {
            m[v] = true;
        }
        m
    }

    /// Edges leaving F. Refuses sets that touch the frontier.
    pub fn boundary_edges(&self, f: &[usize]) -> Result<Vec<Edge>> {
        self.require_interior(f)?;
        let m = self.membership(f);
        let mut out = Vec::new();
        let mut seen = vec![false; self.len()];
        for &v in f {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            for g in 0..self.letters.len() {
                let t = self.neighbor(v, g).expect("complete vertex");
                if !m[t] {
                    out.push(Edge { src: v, gen: g, dst: t });
                }
            }
        }
        Ok(out)
    }

    pub fn subset_from_keys<S: AsRef<str>>(&self, keys: &[S]) -> Result<Vec<usize>> {
        let all: std::collections::HashMap<String, usize> = (0..self.len()).map(|v| (self.key(v), v)).collect();
        keys.iter()
            .map(|k| {
                all.get(k.as_ref())
                    .copied()
                    .ok_or_else(|| Error::InvalidArgument(format!("`{}` is not a vertex of the ball", k.as_ref())))
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let keys: Vec<String> = (0..self.len()).map(|v| self.key(v)).collect();
        let edges = self.edges();
        let g = GraphJson {
            vertices: (0..self.len()).map(|v| VertexJson { key: &keys[v], depth: self.depth(v) }).collect(),
            edges: edges
                .iter()
                .map(|e| EdgeJson { src: &keys[e.src], gen: &self.letter_names[e.gen], dst: &keys[e.dst] })
                .collect(),
            basepoint: &keys[0],
            radius: self.radius,
            group: self.gset.spec(),
        };
        serde_json::to_value(g).expect("graph serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_balls() {
        let z = MarkedGSet::parse("cayley:z:1").unwrap();
        assert_eq!(build_ball(&z, 2).unwrap().len(), 5);
        let o = MarkedGSet::parse("orbit:grigorchuk:depth=3:base=000").unwrap();
        assert_eq!(build_ball(&o, 8).unwrap().len(), 8);
        let c = MarkedGSet::parse("coset:f2").unwrap();
        let g = build_ball(&c, 2).unwrap();
        let mut keys: Vec<String> = (0..g.len()).map(|v| g.key(v)).collect();
        keys.sort();
        assert_eq!(keys, vec!["H", "H b", "H b^-1", "H b^-1 a", "H b^-1 a^-1", "H b^-2", "H b^2"]);
    }

    #[test]
    fn coset_loops_and_boundary() {
        let c = MarkedGSet::parse("coset:f2").unwrap();
        let g = build_ball(&c, 4).unwrap();
        let f = g.subset_from_keys(&["H", "H b", "H b^2"]).unwrap();
        assert_eq!(g.boundary_edges(&f).unwrap().len(), 2);
        let h = g.vertex_by_key("H").unwrap();
        assert_eq!(g.neighbor(h, 0), Some(h));
    }

    #[test]
    fn coset_membership_examples() {
        let f2 = MarkedGroup::parse("free:2").unwrap();
        let w = |s: &str| f2.parse_word(s).unwrap();
        assert!(coset_f2_contains(&w("a")));
        assert!(coset_f2_contains(&w("b a B")));
        assert!(!coset_f2_contains(&w("B a b")));
        assert!(!coset_f2_contains(&w("b")));
        assert!(coset_f2_contains(&w("b a b a B B")));
    }

    #[test]
    fn frontier_refused() {
        let z = MarkedGSet::parse("z:1").unwrap();
        let g = build_ball(&z, 2).unwrap();
        let f = g.subset_from_keys(&["2"]).unwrap();
        assert!(matches!(g.boundary_edges(&f), Err(Error::Frontier(_))));
    }

    #[test]
    fn cap_is_reported() {
        let f2 = MarkedGSet::parse("free:2").unwrap();
        let e = build_ball_capped(&f2, 5, 100).unwrap_err();
        assert!(e.is_cap());
        assert_eq!(largest_ball(&f2, 5, 100).unwrap().radius(), 3);
    }

    #[test]
    fn json_shape() {
        let z = MarkedGSet::parse("z:1").unwrap();
        let j = build_ball(&z, 1).unwrap().to_json();
        assert_eq!(j["vertices"].as_array().unwrap().len(), 3);
        assert_eq!(j["edges"].as_array().unwrap().len(), 4);
        assert_eq!(j["basepoint"], "0");
        assert_eq!(j["group"], "cayley:z:1");
    }
}
