//! Random walks driven by a finitely supported measure μ on G acting on a
//! G-set: p₁(x, y) = Σ_{g : y = xg} μ(g).

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Element, GeneratorWord, MarkedGroup};
use crate::orbits::{largest_ball, ActionKind, MarkedGSet, Point, SchreierGraph};
use crate::text;

/// Exact mode refuses more steps than this.
pub const EXACT_STEP_CAP: usize = 64;
/// Exact mode refuses distributions with more support points than this.
pub const EXACT_SUPPORT_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Exact,
    Float,
}

impl std::str::FromStr for Precision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Precision::Exact),
            "float" => Ok(Precision::Float),
            _ => Err(Error::InvalidArgument(format!("unknown precision `{s}`"))),
        }
    }
}

pub fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug)]
pub struct StepMeasure {
    support: Vec<(GeneratorWord, BigRational)>,
    symmetric: bool,
    aperiodic: bool,
}

impl StepMeasure {
    /// Uniform measure on the edge labels (generators and inverses of
    /// non-involutions).
    pub fn simple(group: &MarkedGroup) -> Self {
        let letters = group.edge_letters();
        let w = rational(1, letters.len().max(1) as i64);
        let support = if letters.is_empty() {
            vec![(GeneratorWord::identity(), BigRational::one())]
        } else {
            letters.into_iter().map(|l| (GeneratorWord(vec![l]), w.clone())).collect()
        };
        StepMeasure::new(group, support).expect("simple walk is valid")
    }

    pub fn new(group: &MarkedGroup, support: Vec<(GeneratorWord, BigRational)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidArgument("empty support".into()));
        }
        let mut total = BigRational::zero();
        for (w, p) in &support {
            group.check_word(w)?;
            if !p.is_positive() {
                return Err(Error::InvalidArgument("weights must be positive".into()));
            }
            total += p;
        }
        if !total.is_one() {
            return Err(Error::InvalidArgument(format!("weights sum to {}, not 1", text::big_ratio(&total))));
        }
        let mut by_elem: HashMap<Element, BigRational> = HashMap::new();
        for (w, p) in &support {
            *by_elem.entry(group.eval(w)?).or_insert_with(BigRational::zero) += p;
        }
        let mut symmetric = true;
        for (e, p) in &by_elem {
            let inv = group.inverse(e)?;
            if by_elem.get(&inv) != Some(p) {
                symmetric = false;
                break;
            }
        }
        let identity = group.identity();
        let aperiodic = by_elem.contains_key(&identity);
        Ok(StepMeasure { support, symmetric, aperiodic })
    }

    /// qδ₁ + (1−q)μ.
    pub fn lazy(&self, group: &MarkedGroup, q: BigRational) -> Result<Self> {
        if !q.is_positive() || q >= BigRational::one() {
            return Err(Error::InvalidArgument("laziness must lie in (0,1)".into()));
        }
        let rest = BigRational::one() - &q;
        let mut support = vec![(GeneratorWord::identity(), q)];
        support.extend(self.support.iter().map(|(w, p)| (w.clone(), p * &rest)));
        StepMeasure::new(group, support)
    }

    /// `srw`, `lazy`, `lazy:p/q`, or a list `word:p/q, word:p/q, ...`.
    pub fn parse(group: &MarkedGroup, text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "srw" {
            return Ok(StepMeasure::simple(group));
        }
        if t == "lazy" {
            return StepMeasure::simple(group).lazy(group, rational(1, 2));
        }
        if let Some(q) = t.strip_prefix("lazy:") {
            return StepMeasure::simple(group).lazy(group, parse_rational(q)?);
        }
        let mut support = Vec::new();
        for item in t.split(',') {
            let (w, p) = item
                .rsplit_once(':')
                .ok_or_else(|| Error::InvalidArgument(format!("bad measure entry `{item}`")))?;
            support.push((group.parse_word(w)?, parse_rational(p)?));
        }
        StepMeasure::new(group, support)
    }

    pub fn support(&self) -> &[(GeneratorWord, BigRational)] {
        &self.support
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// True when μ charges the identity.
    pub fn is_aperiodic(&self) -> bool {
        self.aperiodic
    }

    fn float_support(&self) -> Vec<(GeneratorWord, f64)> {
        self.support.iter().map(|(w, p)| (w.clone(), to_f64(p))).collect()
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("bad rational `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Mass {
    Exact(BigRational),
    Float(f64),
}

impl Mass {
    pub fn to_f64(&self) -> f64 {
        match self {
            Mass::Exact(r) => to_f64(r),
            Mass::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Mass::Exact(r) => Some(r),
            Mass::Float(_) => None,
        }
    }

    pub fn text(&self) -> String {
        match self {
            Mass::Exact(r) => text::big_ratio(r),
            Mass::Float(x) => text::float(*x),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    pub precision: Precision,
    /// (vertex key, mass), ordered by point.
    pub entries: Vec<(String, Mass)>,
}

impl Distribution {
    pub fn get(&self, key: &str) -> Option<&Mass> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, m)| m)
    }

    pub fn total_f64(&self) -> f64 {
        self.entries.iter().map(|(_, m)| m.to_f64()).sum()
    }

    pub fn total_exact(&self) -> Option<BigRational> {
        let mut t = BigRational::zero();
        for (_, m) in &self.entries {
            t += m.exact()?;
        }
        Some(t)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|(k, m)| serde_json::json!({"key": k, "mass": m.text()}))
            .collect();
        serde_json::json!({"precision": self.precision, "entries": entries})
    }
}

enum Law {
    Exact(BTreeMap<Point, BigRational>),
    Float(BTreeMap<Point, f64>),
}

fn step_law(x: &MarkedGSet, mu: &StepMeasure, law: Law) -> Result<Law> {
    Ok(match law {
        Law::Exact(cur) => {
            let mut next: BTreeMap<Point, BigRational> = BTreeMap::new();
            for (p, m) in &cur {
                for (w, q) in &mu.support {
                    let t = x.act_word(p, w)?;
                    *next.entry(t).or_insert_with(BigRational::zero) += m * q;
                }
            }
            if next.len() > EXACT_SUPPORT_CAP {
                return Err(Error::CapExceeded { what: "exact support points", limit: EXACT_SUPPORT_CAP, reached: next.len() });
            }
            Law::Exact(next)
        }
        Law::Float(cur) => {
            let fs = mu.float_support();
            let mut next: BTreeMap<Point, f64> = BTreeMap::new();
            for (p, m) in &cur {
                for (w, q) in &fs {
                    *next.entry(x.act_word(p, w)?).or_insert(0.0) += m * q;
                }
            }
            let cap = crate::orbits::default_vertex_cap();
            if next.len() > cap {
                return Err(Error::CapExceeded { what: "support points", limit: cap, reached: next.len() });
            }
            Law::Float(next)
        }
    })
}

fn start_law(x: &MarkedGSet, precision: Precision, n: usize) -> Result<Law> {
    let base = x.basepoint().clone();
    Ok(match precision {
        Precision::Exact => {
            if n > EXACT_STEP_CAP {
                return Err(Error::CapExceeded { what: "exact walk steps", limit: EXACT_STEP_CAP, reached: n });
            }
            Law::Exact(BTreeMap::from([(base, BigRational::one())]))
        }
        Precision::Float => Law::Float(BTreeMap::from([(base, 1.0)])),
    })
}

fn base_mass(x: &MarkedGSet, law: &Law) -> Mass {
    match law {
        Law::Exact(m) => Mass::Exact(m.get(x.basepoint()).cloned().unwrap_or_else(BigRational::zero)),
        Law::Float(m) => Mass::Float(m.get(x.basepoint()).copied().unwrap_or(0.0)),
    }
}

/// Law of the walk started at the basepoint after n steps.
pub fn measure_power(x: &MarkedGSet, mu: &StepMeasure, n: usize, precision: Precision) -> Result<Distribution> {
    let mut law = start_law(x, precision, n)?;
    for _ in 0..n {
        law = step_law(x, mu, law)?;
    }
    let entries = match law {
        Law::Exact(m) => m.into_iter().map(|(p, v)| (x.key(&p), Mass::Exact(v))).collect(),
        Law::Float(m) => m.into_iter().map(|(p, v)| (x.key(&p), Mass::Float(v))).collect(),
    };
    Ok(Distribution { precision, entries })
}

pub fn return_probability(x: &MarkedGSet, mu: &StepMeasure, n: usize, precision: Precision) -> Result<Mass> {
    Ok(return_probabilities(x, mu, n, precision)?.pop().expect("n+1 entries"))
}

/// pₖ(x₀, x₀) for k = 0..=n in a single pass.
pub fn return_probabilities(x: &MarkedGSet, mu: &StepMeasure, n: usize, precision: Precision) -> Result<Vec<Mass>> {
    let mut law = start_law(x, precision, n)?;
    let mut out = vec![base_mass(x, &law)];
    for _ in 0..n {
        law = step_law(x, mu, law)?;
        out.push(base_mass(x, &law));
    }
    Ok(out)
}

/// Sparse transitions of μ restricted to the vertices of a ball; mass that
/// leaves the ball is dropped.
#[derive(Clone, Debug)]
pub struct WalkOperator {
    pub rows: Vec<Vec<(usize, f64)>>,
    /// Rows whose full transition mass stays inside the ball.
    pub closed_rows: Vec<bool>,
}

pub fn walk_operator(g: &SchreierGraph, mu: &StepMeasure) -> Result<WalkOperator> {
    let x = g.gset();
    let fs = mu.float_support();
    // single-letter words follow the adjacency table directly
    let letter_index: Vec<Option<usize>> = fs
        .iter()
        .map(|(w, _)| match w.letters() {
            [l] => g.letters().iter().position(|m| m == l),
            _ => None,
        })
        .collect();
    let mut rows = Vec::with_capacity(g.len());
    let mut closed_rows = Vec::with_capacity(g.len());
    for v in 0..g.len() {
        let mut row: Vec<(usize, f64)> = Vec::with_capacity(fs.len());
        let mut closed = true;
        for ((w, p), li) in fs.iter().zip(&letter_index) {
            let t = match li {
                Some(s) => g.neighbor(v, *s),
                None if w.is_empty() => Some(v),
                None => g.vertex_of(&x.act_word(g.point(v), w)?),
            };
            match t {
                Some(t) => match row.iter_mut().find(|(u, _)| *u == t) {
                    Some(e) => e.1 += p,
                    None => row.push((t, *p)),
                },
                None => closed = false,
            }
        }
        rows.push(row);
        closed_rows.push(closed);
    }
    Ok(WalkOperator { rows, closed_rows })
}

impl WalkOperator {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn apply(&self, f: &[f64], out: &mut [f64]) {
        for (v, row) in self.rows.iter().enumerate() {
            out[v] = row.iter().map(|&(t, p)| p * f[t]).sum();
        }
    }

    pub fn dense(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut m = vec![vec![0.0; n]; n];
        for (v, row) in self.rows.iter().enumerate() {
            for &(t, p) in row {
                m[v][t] += p;
            }
        }
        m
    }

    pub fn max_asymmetry(&self) -> f64 {
        let d = self.dense();
        let mut worst: f64 = 0.0;
        for i in 0..d.len() {
            for j in 0..i {
                worst = worst.max((d[i][j] - d[j][i]).abs());
            }
        }
        worst
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhoBound {
    #[serde(serialize_with = "text::ser_float")]
    pub best: f64,
    /// (2n, p₂ₙ^{1/2n}) for the killed walk; each entry is a lower bound for ρ.
    pub sequence: Vec<(usize, f64)>,
    pub ball_radius: usize,
    /// Set when the ball is smaller than the walk's reach, so the walk is
    /// killed on leaving it. The entries remain lower bounds.
    pub truncated: bool,
}

/// Lower bounds p₂ₙ(x,x)^{1/2n} ≤ ρ from a float walk on the largest ball
/// that fits under the vertex cap.
pub fn rho_lower_bound(x: &MarkedGSet, mu: &StepMeasure, max_steps: usize, vertex_cap: usize) -> Result<RhoBound> {
    if !mu.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let reach = mu.support().iter().map(|(w, _)| w.len()).max().unwrap_or(0).max(1);
    let needed = (max_steps / 2 + 1) * reach;
    let g = largest_ball(x, needed, vertex_cap)?;
    let op = walk_operator(&g, mu)?;
    let base = g.basepoint();
    let mut f = vec![0.0; g.len()];
    f[base] = 1.0;
    let mut next = vec![0.0; g.len()];
    let mut sequence = Vec::new();
    for step in 1..=max_steps {
        // push mass forward: next[t] += f[v] p(v,t)
        next.iter_mut().for_each(|y| *y = 0.0);
        for (v, row) in op.rows.iter().enumerate() {
            let m = f[v];
            if m != 0.0 {
                for &(t, p) in row {
                    next[t] += m * p;
                }
            }
        }
        std::mem::swap(&mut f, &mut next);
        if step % 2 == 0 && f[base] > 0.0 {
            sequence.push((step, f[base].powf(1.0 / step as f64)));
        }
    }
    let best = sequence.iter().map(|e| e.1).fold(0.0, f64::max);
    Ok(RhoBound { best, sequence, ball_radius: g.radius(), truncated: g.radius() < needed && !x.is_finite() })
}

/// Top eigenvalue of the Dirichlet-truncated operator T_F on the whole ball,
/// by power iteration on (1+T)/2 with a Rayleigh-quotient stop.
pub fn truncated_rho(g: &SchreierGraph, mu: &StepMeasure, tol: f64, max_iter: usize) -> Result<f64> {
    if !mu.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if g.is_empty() {
        return Err(Error::NoInterior);
    }
    let op = walk_operator(g, mu)?;
    let n = op.len();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut tv = vec![0.0; n];
    let mut prev = f64::NEG_INFINITY;
    for _ in 0..max_iter {
        op.apply(&v, &mut tv);
        let rq: f64 = v.iter().zip(&tv).map(|(a, b)| a * b).sum::<f64>() / v.iter().map(|a| a * a).sum::<f64>();
        if (rq - prev).abs() < tol {
            return Ok(rq);
        }
        prev = rq;
        let mut norm = 0.0;
        for i in 0..n {
            v[i] = 0.5 * (v[i] + tv[i]);
            norm += v[i] * v[i];
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        v.iter_mut().for_each(|a| *a /= norm);
    }
    Err(Error::NoConvergence(max_iter))
}

/// Assembles d: ℝ^V → ℝ^E, (df)(x,y) = f(x) − f(y) over edges with
/// p₁(x,y) > 0, and d*: (d*g)(x) = Σ_y p₁(x,y) g(x,y), then returns the
/// largest entrywise deviation of T_F from 1 − d*d on the block F of rows
/// whose transitions stay inside the ball.
pub fn difference_identity_residual(g: &SchreierGraph, mu: &StepMeasure) -> Result<f64> {
    let op = walk_operator(g, mu)?;
    let n = op.len();
    let block: Vec<usize> = (0..n).filter(|&v| op.closed_rows[v]).collect();
    if block.is_empty() {
        return Err(Error::NoInterior);
    }
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for (x, row) in op.rows.iter().enumerate() {
        for &(y, p) in row {
            if p > 0.0 {
                edges.push((x, y, p));
            }
        }
    }
    // dense d (|E| × |V|) and d* (|V| × |E|)
    let e = edges.len();
    let mut d = vec![vec![0.0; n]; e];
    let mut ds = vec![vec![0.0; e]; n];
    for (k, &(x, y, p)) in edges.iter().enumerate() {
        d[k][x] += 1.0;
        d[k][y] -= 1.0;
        ds[x][k] = p;
    }
    let t = op.dense();
    let mut worst: f64 = 0.0;
    for &i in &block {
        for &j in &block {
            let dsd: f64 = (0..e).map(|k| ds[i][k] * d[k][j]).sum();
            let id = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((t[i][j] - (id - dsd)).abs());
        }
    }
    Ok(worst)
}

/// p₁(F, X∖F)/#F, an upper bound for the isoperimetric constant ι.
pub fn iota_upper(g: &SchreierGraph, mu: &StepMeasure, f: &[usize]) -> Result<BigRational> {
    if f.is_empty() {
        return Err(Error::InvalidArgument("empty subset".into()));
    }
    let x = g.gset();
    let m = g.membership(f);
    let mut escape = BigRational::zero();
    for &v in f {
        for (w, p) in mu.support() {
            let t = x.act_word(g.point(v), w)?;
            let inside = g.vertex_of(&t).is_some_and(|u| m[u]);
            if !inside {
                escape += p;
            }
        }
    }
    Ok(escape / BigRational::from_integer(BigInt::from(f.len())))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    Exact(f64),
    /// A value known to be ≥ the true quantity.
    Upper(f64),
    /// A value known to be ≤ the true quantity.
    Lower(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KestenReport {
    /// Checks that could be made from the given inputs, with outcomes.
    pub checks: Vec<(String, bool)>,
    pub passed: bool,
    /// Best lower bound on ρ implied by the inputs.
    #[serde(serialize_with = "text::ser_opt_float")]
    pub rho_floor: Option<f64>,
}

/// Checks ι² + ρ² ≤ 1 ≤ ι + ρ in whatever direction the inputs support.
pub fn kesten_check(iota: Bound, rho: Bound) -> KestenReport {
    const TOL: f64 = 1e-12;
    let mut checks = Vec::new();
    let mut rho_floor = None;
    match (iota, rho) {
        (Bound::Exact(i), Bound::Exact(r)) => {
            checks.push((format!("iota^2 + rho^2 = {} <= 1", text::float(i * i + r * r)), i * i + r * r <= 1.0 + TOL));
            checks.push((format!("iota + rho = {} >= 1", text::float(i + r)), i + r >= 1.0 - TOL));
            rho_floor = Some(r);
        }
        (Bound::Exact(i), Bound::Lower(r)) => {
            checks.push(("rho_lower^2 <= 1 - iota^2".into(), r * r <= 1.0 - i * i + TOL));
            rho_floor = Some(r.max(1.0 - i));
        }
        (Bound::Upper(i), Bound::Exact(r)) => {
            checks.push(("1 <= iota_upper + rho".into(), i + r >= 1.0 - TOL));
            rho_floor = Some(r);
        }
        (Bound::Upper(i), Bound::Lower(r)) => {
            checks.push(("0 <= iota_upper".into(), i >= 0.0));
            checks.push(("rho_lower <= 1".into(), r <= 1.0 + TOL));
            rho_floor = Some(r.max(1.0 - i));
        }
        _ => checks.push(("inputs must be (exact|upper iota, exact|lower rho)".into(), false)),
    }
    let passed = checks.iter().all(|c| c.1);
    KestenReport { checks, passed, rho_floor }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvertedOrbitStats {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(serialize_with = "text::ser_float")]
    pub mean_size: f64,
    #[serde(serialize_with = "text::ser_float")]
    pub mean_size_se: f64,
    /// Estimate of E(2^{−#Oₙ}).
    #[serde(serialize_with = "text::ser_float")]
    pub mean_two_pow: f64,
    #[serde(serialize_with = "text::ser_float")]
    pub mean_two_pow_se: f64,
}

/// Monte Carlo over Oₙ = {x, xgₙ, xgₙ₋₁gₙ, …, xg₁⋯gₙ}. Trial t draws from
/// ChaCha8 seeded with `seed` on stream t, so results depend only on
/// (seed, trials).
pub fn inverted_orbit_stats(x: &MarkedGSet, mu: &StepMeasure, n: usize, trials: usize, seed: u64) -> Result<InvertedOrbitStats> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let fs = mu.float_support();
    let mut cumulative = Vec::with_capacity(fs.len());
    let mut acc = 0.0;
    for (_, p) in &fs {
        acc += p;
        cumulative.push(acc);
    }
    let group = x.group();
    let regular = *x.kind() == ActionKind::Regular;
    let elems: Vec<Element> = fs.iter().map(|(w, _)| group.eval(w)).collect::<Result<_>>()?;
    let (mut s1, mut s2, mut t1, mut t2) = (0.0, 0.0, 0.0, 0.0);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let picks: Vec<usize> = (0..n)
            .map(|_| {
                let u: f64 = rng.gen::<f64>() * acc;
                cumulative.iter().position(|&c| u < c).unwrap_or(cumulative.len() - 1)
            })
            .collect();
        let mut seen: std::collections::HashSet<Point> = std::collections::HashSet::new();
        seen.insert(x.basepoint().clone());
        if regular {
            // basepoint is the identity: Oₙ is the set of suffix products
            let mut w = group.identity();
            for &k in picks.iter().rev() {
                w = group.mul(&elems[k], &w)?;
                seen.insert(Point::Element(w.clone()));
            }
        } else {
            let mut suffix: Vec<crate::groups::Letter> = Vec::new();
            for &k in picks.iter().rev() {
                let mut s = fs[k].0.letters().to_vec();
                s.extend_from_slice(&suffix);
                suffix = s;
                seen.insert(x.act_word(x.basepoint(), &GeneratorWord(suffix.clone()))?);
            }
        }
        let size = seen.len() as f64;
        let tp = (-size * std::f64::consts::LN_2).exp();
        s1 += size;
        s2 += size * size;
        t1 += tp;
        t2 += tp * tp;
    }
    let k = trials as f64;
    let se = |a: f64, b: f64| {
        if trials < 2 {
            0.0
        } else {
            let var = (b - a * a / k) / (k - 1.0);
            (var.max(0.0) / k).sqrt()
        }
    };
    Ok(InvertedOrbitStats {
        n,
        trials,
        seed,
        mean_size: s1 / k,
        mean_size_se: se(s1, s2),
        mean_two_pow: t1 / k,
        mean_two_pow_se: se(t1, t2),
    })
}
