//! The paradoxical decomposition of F₂ = ⟨x₁, x₂⟩, the doubling wobble built
//! from it, finite Hall matchings and Cantor–Schröder–Bernstein merging.
//!
//! x₁ and x₂ are generators `a` and `b` of `free:2`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::Hash;

use serde::Serialize;

use crate::error::Result;
use crate::groups::{free_reduce, GeneratorWord, Letter, MarkedGroup};
use crate::orbits::{build_ball, MarkedGSet};

const X1: Letter = Letter { generator: 0, inverse: false };
const X2: Letter = Letter { generator: 1, inverse: false };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum YPart {
    Y1,
    Y2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ZPart {
    Z1,
    Z2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PieceLabel {
    pub y: YPart,
    pub z: ZPart,
}

/// One of the four pieces of G = Y₁ ⊔ Y₂x₁⁻¹ ⊔ Z₁ ⊔ Z₂x₂⁻¹.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Cell {
    Y1,
    Y2X1Inv,
    Z1,
    Z2X2Inv,
}

/// Y₁ = words ending in x₁; Z₁ = words ending in x₂, together with
/// 1, x₂⁻¹, x₂⁻², …
pub fn f2_piece(w: &GeneratorWord) -> PieceLabel {
    let r = free_reduce(w.letters());
    let y = if r.last() == Some(&X1) { YPart::Y1 } else { YPart::Y2 };
    let axis = r.iter().all(|&l| l == X2.inv());
    let z = if r.last() == Some(&X2) || axis { ZPart::Z1 } else { ZPart::Z2 };
    PieceLabel { y, z }
}

fn times(w: &GeneratorWord, l: Letter) -> GeneratorWord {
    let mut v = w.letters().to_vec();
    v.push(l);
    GeneratorWord(free_reduce(&v))
}

/// Every cell containing w; a partition yields exactly one.
pub fn cells_of(w: &GeneratorWord) -> Vec<Cell> {
    let w = w.freely_reduced();
    let mut out = Vec::new();
    if f2_piece(&w).y == YPart::Y1 {
        out.push(Cell::Y1);
    }
    if f2_piece(&times(&w, X1)).y == YPart::Y2 {
        out.push(Cell::Y2X1Inv);
    }
    if f2_piece(&w).z == ZPart::Z1 {
        out.push(Cell::Z1);
    }
    if f2_piece(&times(&w, X2)).z == ZPart::Z2 {
        out.push(Cell::Z2X2Inv);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParadoxReport {
    pub radius: usize,
    pub elements: usize,
    /// Size of B(radius−1), on which the four pieces must tile.
    pub covered: usize,
    pub violations: Vec<String>,
    pub passed: bool,
}

fn f2() -> MarkedGroup {
    MarkedGroup::parse("free:2").expect("free:2 parses")
}

fn ball_words(radius: usize) -> Result<Vec<GeneratorWord>> {
    let group = f2();
    let g = build_ball(&MarkedGSet::regular(group.clone()), radius)?;
    Ok((0..g.len())
        .map(|v| match g.point(v) {
            crate::orbits::Point::Element(e) => group.word_of(e),
            _ => unreachable!("regular action"),
        })
        .collect())
}

/// On B(radius): the Y and Z labels partition; the translated pieces
/// Y₁, Y₂x₁⁻¹, Z₁, Z₂x₂⁻¹ (built from elements of B(radius)) are pairwise
/// disjoint and cover B(radius−1).
pub fn paradox_verify(radius: usize) -> Result<ParadoxReport> {
    let group = f2();
    let words = ball_words(radius)?;
    let mut violations = Vec::new();
    let mut pieces: [HashSet<Vec<Letter>>; 4] = Default::default();
    for w in &words {
        let label = f2_piece(w);
        // the labels are functions, so the partition checks are against the
        // defining suffix conditions written independently
        let ends_x1 = w.letters().last() == Some(&X1);
        if (label.y == YPart::Y1) != ends_x1 {
            violations.push(format!("Y label of {}", group.format_word(w)));
        }
        let ends_x2 = w.letters().last() == Some(&X2);
        let on_axis = w.letters().iter().all(|l| *l == X2.inv());
        if (label.z == ZPart::Z1) != (ends_x2 || on_axis) {
            violations.push(format!("Z label of {}", group.format_word(w)));
        }
        match label.y {
            YPart::Y1 => pieces[0].insert(w.0.clone()),
            YPart::Y2 => pieces[1].insert(times(w, X1.inv()).0),
        };
        match label.z {
            ZPart::Z1 => pieces[2].insert(w.0.clone()),
            ZPart::Z2 => pieces[3].insert(times(w, X2.inv()).0),
        };
    }
    let names = ["Y1", "Y2 x1^-1", "Z1", "Z2 x2^-1"];
    let mut covered = 0;
    for w in words.iter().filter(|w| w.len() < radius) {
        covered += 1;
        let hits: Vec<&str> = (0..4).filter(|&i| pieces[i].contains(&w.0)).map(|i| names[i]).collect();
        if hits.len() != 1 {
            violations.push(format!("{} lies in {:?}", group.format_word(w), hits));
        }
    }
    // disjointness beyond the covered ball
    for i in 0..4 {
        for j in i + 1..4 {
            if let Some(w) = pieces[i].intersection(&pieces[j]).next() {
                violations.push(format!("{} in both {} and {}", group.format_word(&GeneratorWord(w.clone())), names[i], names[j]));
            }
        }
    }
    violations.sort();
    violations.dedup();
    Ok(ParadoxReport { radius, elements: words.len(), covered, passed: violations.is_empty(), violations })
}

/// φ = id on Y₁ ∪ Z₁, ·x₁ on Y₂x₁⁻¹, ·x₂ on Z₂x₂⁻¹; exactly 2-to-1.
pub fn doubling_map(w: &GeneratorWord) -> GeneratorWord {
    let w = w.freely_reduced();
    let cells = cells_of(&w);
    assert_eq!(cells.len(), 1, "the four cells partition F2");
    match cells[0] {
        Cell::Y1 | Cell::Z1 => w,
        Cell::Y2X1Inv => times(&w, X1),
        Cell::Z2X2Inv => times(&w, X2),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoublingReport {
    pub radius: usize,
    pub targets: usize,
    /// (target, preimage count) for every target in B(radius−1) without exactly 2.
    pub violations: Vec<(String, usize)>,
    /// Preimage pairs of the first few targets, as witnesses.
    pub sample: Vec<(String, [String; 2])>,
    pub passed: bool,
}

/// Counts preimages under φ of every element of B(radius−1) among B(radius).
pub fn doubling_check(radius: usize) -> Result<DoublingReport> {
    let group = f2();
    let words = ball_words(radius)?;
    let mut pre: HashMap<Vec<Letter>, Vec<Vec<Letter>>> = HashMap::new();
    for w in &words {
        pre.entry(doubling_map(w).0).or_default().push(w.0.clone());
    }
    let mut violations = Vec::new();
    let mut sample = Vec::new();
    let mut targets = 0;
    for w in words.iter().filter(|w| w.len() < radius) {
        targets += 1;
        let ps = pre.get(&w.0).map_or(&[][..], |v| v.as_slice());
        if ps.len() != 2 {
            violations.push((group.format_word(w), ps.len()));
        } else if sample.len() < 5 {
            let f = |p: &Vec<Letter>| group.format_word(&GeneratorWord(p.clone()));
            sample.push((group.format_word(w), [f(&ps[0]), f(&ps[1])]));
        }
    }
    Ok(DoublingReport { radius, targets, passed: violations.is_empty(), violations, sample })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum HallOutcome {
    /// matching[v] = the W-vertex matched to v.
    Matching(Vec<usize>),
    /// F ⊆ V with fewer than #F neighbours.
    Violator(Vec<usize>),
}

/// Augmenting paths over V in order. `edges[v]` lists the W-neighbours of v.
pub fn hall_matching(edges: &[Vec<usize>], w_count: usize) -> HallOutcome {
    let mut owner: Vec<Option<usize>> = vec![None; w_count];
    for v in 0..edges.len() {
        let mut seen = vec![false; w_count];
        if !augment(v, edges, &mut owner, &mut seen) {
            let mut f: Vec<usize> = (0..w_count).filter(|&w| seen[w]).filter_map(|w| owner[w]).collect();
            f.push(v);
            f.sort_unstable();
            f.dedup();
            return HallOutcome::Violator(f);
        }
    }
    let mut matching = vec![usize::MAX; edges.len()];
    for (w, o) in owner.iter().enumerate() {
        if let Some(v) = o {
            matching[*v] = w;
        }
    }
    HallOutcome::Matching(matching)
}

fn augment(v: usize, edges: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &w in &edges[v] {
        if seen[w] {
            continue;
        }
        seen[w] = true;
        if owner[w].is_none_or(|u| augment(u, edges, owner, seen)) {
            owner[w] = Some(v);
            return true;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CsbBranch {
    /// The backward chain stops on the Y side after an even number of steps.
    Alpha,
    /// It stops on the Z side.
    BetaInverse,
    /// It returns to its start: the point lies in every Yₙ.
    Cyclic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CsbOutcome<T> {
    Resolved { value: T, branch: CsbBranch, depth: usize },
    Undetermined { cap: usize },
}

/// γ(y) for the bijection merged from injections α: Y→Z and β: Z→Y, given
/// by α and the partial inverses α⁻¹, β⁻¹.
pub fn csb_merge<T, A, AI, BI>(alpha: A, alpha_inv: AI, beta_inv: BI, y: &T, depth_cap: usize) -> CsbOutcome<T>
where
    T: Clone + Eq,
    A: Fn(&T) -> T,
    AI: Fn(&T) -> Option<T>,
    BI: Fn(&T) -> Option<T>,
{
    let mut cur = y.clone();
    for depth in 0..depth_cap {
        let back = if depth % 2 == 0 { beta_inv(&cur) } else { alpha_inv(&cur) };
        match back {
            None if depth % 2 == 0 => return CsbOutcome::Resolved { value: alpha(y), branch: CsbBranch::Alpha, depth },
            None => {
                let value = beta_inv(y).expect("chain left y through beta");
                return CsbOutcome::Resolved { value, branch: CsbBranch::BetaInverse, depth };
            }
            Some(next) => {
                if depth % 2 == 1 && next == *y {
                    let value = beta_inv(y).expect("cycle passes through beta");
                    return CsbOutcome::Resolved { value, branch: CsbBranch::Cyclic, depth: depth + 1 };
                }
                cur = next;
            }
        }
    }
    CsbOutcome::Undetermined { cap: depth_cap }
}

/// α = id on Y₁, ·x₁⁻¹ on Y₂; its image is Y₁ ⊔ Y₂x₁⁻¹.
pub fn f2_alpha(w: &GeneratorWord) -> GeneratorWord {
    match f2_piece(w).y {
        YPart::Y1 => w.freely_reduced(),
        YPart::Y2 => times(w, X1.inv()),
    }
}

pub fn f2_alpha_inv(w: &GeneratorWord) -> Option<GeneratorWord> {
    let cells = cells_of(w);
    if cells.contains(&Cell::Y1) {
        Some(w.freely_reduced())
    } else if cells.contains(&Cell::Y2X1Inv) {
        Some(times(w, X1))
    } else {
        None
    }
}

/// β = id on Z₁, ·x₂⁻¹ on Z₂; its image is Z₁ ⊔ Z₂x₂⁻¹.
pub fn f2_beta(w: &GeneratorWord) -> GeneratorWord {
    match f2_piece(w).z {
        ZPart::Z1 => w.freely_reduced(),
        ZPart::Z2 => times(w, X2.inv()),
    }
}

pub fn f2_beta_inv(w: &GeneratorWord) -> Option<GeneratorWord> {
    let cells = cells_of(w);
    if cells.contains(&Cell::Z1) {
        Some(w.freely_reduced())
    } else if cells.contains(&Cell::Z2X2Inv) {
        Some(times(w, X2))
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CsbF2Report {
    pub radius: usize,
    pub cap: usize,
    pub branches: BTreeMap<String, usize>,
    pub undetermined: Vec<String>,
    pub injective: bool,
    pub pointwise_ok: bool,
}

/// Runs `csb_merge` with the F₂ injections on every element of B(radius).
pub fn csb_f2(radius: usize, cap: usize) -> Result<CsbF2Report> {
    let group = f2();
    let words = ball_words(radius)?;
    let mut branches = BTreeMap::new();
    let mut undetermined = Vec::new();
    let mut images = HashSet::new();
    let mut injective = true;
    let mut pointwise_ok = true;
    for w in &words {
        match csb_merge(f2_alpha, f2_alpha_inv, f2_beta_inv, w, cap) {
            CsbOutcome::Resolved { value, branch, .. } => {
                *branches.entry(format!("{branch:?}")).or_insert(0) += 1;
                let ok = value == f2_alpha(w) || Some(&value) == f2_beta_inv(w).as_ref();
                pointwise_ok &= ok;
                injective &= images.insert(value.0);
            }
            CsbOutcome::Undetermined { .. } => undetermined.push(group.format_word(w)),
        }
    }
    Ok(CsbF2Report { radius, cap, branches, undetermined, injective, pointwise_ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GeneratorWord {
        f2().parse_word(s).unwrap()
    }

    #[test]
    fn labels() {
        assert_eq!(f2_piece(&w("a")), PieceLabel { y: YPart::Y1, z: ZPart::Z2 });
        assert_eq!(f2_piece(&w("1")), PieceLabel { y: YPart::Y2, z: ZPart::Z1 });
        assert_eq!(f2_piece(&w("b^-3")), PieceLabel { y: YPart::Y2, z: ZPart::Z1 });
        assert_eq!(f2_piece(&w("a b^-1")).z, ZPart::Z2);
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(doubling_map(&w("1")), w("1"));
        assert_eq!(doubling_map(&w("a^-1")), w("1"));
        assert_eq!(doubling_map(&w("b a^-1")), w("b"));
        let pre: Vec<GeneratorWord> = ball_words(2).unwrap().into_iter().filter(|v| doubling_map(v).is_empty()).collect();
        assert_eq!(pre.len(), 2);
    }

    #[test]
    fn verify_small() {
        let r = paradox_verify(0).unwrap();
        assert!(r.passed && r.elements == 1);
        let r = paradox_verify(1).unwrap();
        assert!(r.passed && r.elements == 5);
        assert!(doubling_check(4).unwrap().passed);
    }

    #[test]
    fn hall_examples() {
        assert_eq!(hall_matching(&[vec![0], vec![0, 1]], 2), HallOutcome::Matching(vec![0, 1]));
        assert_eq!(hall_matching(&[vec![0], vec![0]], 1), HallOutcome::Violator(vec![0, 1]));
        match hall_matching(&[vec![0, 1], vec![1, 2], vec![2, 0]], 3) {
            HallOutcome::Matching(m) => assert_eq!(m, vec![0, 1, 2]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csb_examples() {
        let id = |n: &u64| *n;
        let some = |n: &u64| Some(*n);
        match csb_merge(id, some, some, &3u64, 10) {
            CsbOutcome::Resolved { value, branch, .. } => assert_eq!((value, branch), (3, CsbBranch::Cyclic)),
            o => panic!("{o:?}"),
        }
        let succ = |n: &u64| n + 1;
        let pred = |n: &u64| n.checked_sub(1);
        let g = |y: u64| match csb_merge(succ, pred, pred, &y, 100) {
            CsbOutcome::Resolved { value, .. } => value,
            o => panic!("{o:?}"),
        };
        assert_eq!((g(0), g(1), g(2), g(3)), (1, 0, 3, 2));
        assert_eq!(csb_merge(succ, pred, pred, &500, 100), CsbOutcome::Undetermined { cap: 100 });
    }

    #[test]
    fn csb_on_f2() {
        let r = csb_f2(4, 32).unwrap();
        assert!(r.undetermined.is_empty() && r.injective && r.pointwise_ok, "{r:?}");
    }
}
