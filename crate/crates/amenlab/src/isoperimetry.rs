//! Growth series, Følner-set search, exact small values of the Følner
//! function and the growth lower bound Fol(n) ≥ v(n)/2.

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbits::{build_ball, MarkedGSet, Point, SchreierGraph};
use crate::text;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthSeries {
    pub gset: String,
    pub generators: usize,
    pub values: Vec<u64>,
}

impl GrowthSeries {
    pub fn to_csv(&self) -> String {
        let rows: Vec<String> = self.values.iter().enumerate().map(|(n, v)| format!("{n},{v}")).collect();
        rows.join("\n")
    }
}

/// v(k) = #B(k) for k ≤ n.
pub fn growth_series(x: &MarkedGSet, n: usize) -> Result<GrowthSeries> {
    let g = build_ball(x, n)?;
    Ok(growth_from_ball(&g))
}

pub fn growth_from_ball(g: &SchreierGraph) -> GrowthSeries {
    let mut acc = 0u64;
    let values = g
        .sphere_sizes()
        .into_iter()
        .map(|s| {
            acc += s as u64;
            acc
        })
        .collect();
    GrowthSeries { gset: g.gset_spec().to_string(), generators: g.letters().len(), values }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Greedy,
    Anneal,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "greedy" => Ok(SearchMode::Greedy),
            "anneal" => Ok(SearchMode::Anneal),
            _ => Err(Error::InvalidArgument(format!("unknown search mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FolnerReport {
    pub subset: Vec<String>,
    /// #(Fs∖F)/#F for every edge label s.
    #[serde(serialize_with = "text::ser_ratio64_vec")]
    pub ratios: Vec<(String, Rational64)>,
    #[serde(serialize_with = "text::ser_ratio64")]
    pub worst: Rational64,
    #[serde(serialize_with = "text::ser_ratio64")]
    pub epsilon: Rational64,
    pub mode: SearchMode,
    pub success: bool,
}

/// #{x ∈ F : xs ∉ F} for each edge label s. F must be interior.
pub fn escape_counts(g: &SchreierGraph, f: &[usize]) -> Result<Vec<usize>> {
    g.require_interior(f)?;
    let m = g.membership(f);
    Ok(escape_counts_unchecked(g, f, &m))
}

fn escape_counts_unchecked(g: &SchreierGraph, f: &[usize], m: &[bool]) -> Vec<usize> {
    let mut out = vec![0; g.letters().len()];
    for &v in f {
        for (s, c) in out.iter_mut().enumerate() {
            let t = g.neighbor(v, s).expect("interior vertex");
            if !m[t] {
                *c += 1;
            }
        }
    }
    out
}

pub fn folner_ratios(g: &SchreierGraph, f: &[usize]) -> Result<Vec<Rational64>> {
    if f.is_empty() {
        return Err(Error::InvalidArgument("empty subset".into()));
    }
    let n = f.len() as i64;
    Ok(escape_counts(g, f)?.into_iter().map(|c| Rational64::new(c as i64, n)).collect())
}

fn worst_of(counts: &[usize], n: usize) -> Rational64 {
    let c = counts.iter().copied().max().unwrap_or(0);
    Rational64::new(c as i64, n.max(1) as i64)
}

/// Følner ratios of a finite set of points computed from the action
/// directly, with no ball needed.
pub fn action_ratios(x: &MarkedGSet, f: &[Point]) -> Result<Vec<(String, Rational64)>> {
    let set: std::collections::HashSet<&Point> = f.iter().collect();
    if set.is_empty() {
        return Err(Error::InvalidArgument("empty subset".into()));
    }
    let mut out = Vec::new();
    for l in x.letters() {
        let mut c = 0i64;
        for p in &set {
            if !set.contains(&x.act(p, l)?) {
                c += 1;
            }
        }
        out.push((x.group().letter_name(l), Rational64::new(c, set.len() as i64)));
    }
    Ok(out)
}

fn report(g: &SchreierGraph, f: &[usize], eps: Rational64, mode: SearchMode) -> FolnerReport {
    let mut sorted = f.to_vec();
    sorted.sort_by_key(|&v| g.key(v));
    let m = g.membership(f);
    let counts = escape_counts_unchecked(g, f, &m);
    let n = f.len() as i64;
    let ratios: Vec<(String, Rational64)> = counts
        .iter()
        .enumerate()
        .map(|(s, &c)| (g.letter_names()[s].clone(), Rational64::new(c as i64, n)))
        .collect();
    let worst = worst_of(&counts, f.len());
    FolnerReport {
        subset: sorted.iter().map(|&v| g.key(v)).collect(),
        ratios,
        worst,
        epsilon: eps,
        mode,
        success: worst < eps,
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub size_cap: usize,
    pub seed: Option<u64>,
    pub steps: usize,
    pub t0: f64,
    /// Upper bound on subsets visited by exhaustive search.
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { size_cap: 12, seed: None, steps: 20_000, t0: 0.5, budget: 50_000_000 }
    }
}

/// Looks for an interior set with worst ratio < ε; on failure returns the
/// best set found with `success = false`.
pub fn folner_search(g: &SchreierGraph, eps: Rational64, mode: SearchMode, opts: &SearchOptions) -> Result<FolnerReport> {
    let interior = g.interior();
    if interior.is_empty() {
        return Err(Error::NoInterior);
    }
    match mode {
        SearchMode::Exhaustive => exhaustive(g, &interior, eps, opts),
        SearchMode::Greedy => Ok(greedy(g, &interior, eps, opts.size_cap)),
        SearchMode::Anneal => {
            let seed = opts
                .seed
                .ok_or_else(|| Error::InvalidArgument("annealing needs a seed".into()))?;
            Ok(anneal(g, &interior, eps, opts, seed))
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
        if r > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    r as u64
}

/// Calls `visit` on all k-subsets of `items` in lexicographic order until
/// it returns true.
fn for_each_subset(items: &[usize], k: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    let m = items.len();
    if k > m {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut cur: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
    loop {
        if visit(&cur) {
            return true;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + m - k {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        i -= 1;
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..k {
            cur[j] = items[idx[j]];
        }
    }
}

fn check_budget(m: usize, cap: usize, budget: u64) -> Result<()> {
    let mut total: u64 = 0;
    for k in 1..=cap.min(m) {
        total = total.saturating_add(binomial(m as u64, k as u64));
    }
    if total > budget {
        return Err(Error::CapExceeded {
            what: "exhaustive subsets",
            limit: budget as usize,
            reached: total.min(usize::MAX as u64) as usize,
        });
    }
    Ok(())
}

fn exhaustive(g: &SchreierGraph, interior: &[usize], eps: Rational64, opts: &SearchOptions) -> Result<FolnerReport> {
    check_budget(interior.len(), opts.size_cap, opts.budget)?;
    let mut m = vec![false; g.len()];
    let mut best: Option<(Rational64, Vec<usize>)> = None;
    for k in 1..=opts.size_cap.min(interior.len()) {
        let found = for_each_subset(interior, k, |f| {
            for &v in f {
                m[v] = true;
            }
            let w = worst_of(&escape_counts_unchecked(g, f, &m), k);
            for &v in f {
                m[v] = false;
            }
            if best.as_ref().is_none_or(|(b, _)| w < *b) {
                best = Some((w, f.to_vec()));
            }
            w < eps
        });
        if found {
            break;
        }
    }
    let (_, f) = best.expect("at least one subset");
    Ok(report(g, &f, eps, SearchMode::Exhaustive))
}

fn greedy(g: &SchreierGraph, interior: &[usize], eps: Rational64, cap: usize) -> FolnerReport {
    let allowed = g.membership(interior);
    let start = if allowed[g.basepoint()] { g.basepoint() } else { interior[0] };
    let mut f = vec![start];
    let mut m = g.membership(&f);
    let mut best = (worst_of(&escape_counts_unchecked(g, &f, &m), 1), f.clone());
    while best.0 >= eps && f.len() < cap {
        let mut cands: Vec<usize> = Vec::new();
        for &v in &f {
            for s in 0..g.letters().len() {
                let t = g.neighbor(v, s).expect("interior vertex");
                if allowed[t] && !m[t] && !cands.contains(&t) {
                    cands.push(t);
                }
            }
        }
        if cands.is_empty() {
            break;
        }
        let mut choice: Option<(Rational64, usize)> = None;
        for &c in &cands {
            m[c] = true;
            f.push(c);
            let w = worst_of(&escape_counts_unchecked(g, &f, &m), f.len());
            f.pop();
            m[c] = false;
            let better = match choice {
                None => true,
                Some((bw, bc)) => w < bw || (w == bw && g.key(c) < g.key(bc)),
            };
            if better {
                choice = Some((w, c));
            }
        }
        let (w, c) = choice.expect("nonempty candidates");
        f.push(c);
        m[c] = true;
        if w < best.0 {
            best = (w, f.clone());
        }
    }
    report(g, &best.1, eps, SearchMode::Greedy)
}

fn anneal(g: &SchreierGraph, interior: &[usize], eps: Rational64, opts: &SearchOptions, seed: u64) -> FolnerReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let allowed = g.membership(interior);
    // start from the interior part of the radius-1 ball
    let mut f: Vec<usize> = interior.iter().copied().filter(|&v| g.depth(v) <= 1).collect();
    if f.is_empty() {
        f.push(interior[0]);
    }
    f.truncate(opts.size_cap.max(1));
    let mut m = g.membership(&f);
    let score = |f: &[usize], m: &[bool]| worst_of(&escape_counts_unchecked(g, f, m), f.len());
    let mut cur = score(&f, &m);
    let mut best = (cur, f.clone());
    let mut t = opts.t0;
    for _ in 0..opts.steps {
        if best.0 < eps {
            break;
        }
        // toggle: add a neighbour of F or drop a member of F
        let add = f.len() < 2 || (f.len() < opts.size_cap && rng.gen_bool(0.5));
        let mut nf = f.clone();
        let mut nm = m.clone();
        if add {
            let v = f[rng.gen_range(0..f.len())];
            let t2 = g.neighbor(v, rng.gen_range(0..g.letters().len())).expect("interior vertex");
            if !allowed[t2] || m[t2] {
                t *= 0.995;
                continue;
            }
            nf.push(t2);
            nm[t2] = true;
        } else {
            let i = rng.gen_range(0..f.len());
            nm[nf[i]] = false;
            nf.swap_remove(i);
        }
        let s = score(&nf, &nm);
        let delta = (*s.numer() as f64 / *s.denom() as f64) - (*cur.numer() as f64 / *cur.denom() as f64);
        if delta <= 0.0 || rng.gen::<f64>() < (-delta / t.max(1e-12)).exp() {
            f = nf;
            m = nm;
            cur = s;
            if cur < best.0 || (cur == best.0 && f.len() < best.1.len()) {
                best = (cur, f.clone());
            }
        }
        t *= 0.995;
    }
    report(g, &best.1, eps, SearchMode::Anneal)
}

/// Default bound on sizeCap for exhaustive Følner-function search.
pub const EXHAUSTIVE_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FolExact {
    pub n: usize,
    /// Least #F among interior subsets with #(F△Fs) < #F/n for all s.
    pub value: Option<usize>,
    pub witness: Option<Vec<String>>,
    pub interior_size: usize,
    pub size_cap: usize,
    /// True when the ball is the whole (finite) G-set, so `value` is Fol(n)
    /// of the G-set itself; otherwise it is the minimum over subsets of the
    /// interior only.
    pub covers_gset: bool,
}

pub fn fol_exact(g: &SchreierGraph, n: usize, size_cap: usize) -> Result<FolExact> {
    fol_exact_with_limit(g, n, size_cap, EXHAUSTIVE_LIMIT, SearchOptions::default().budget)
}

pub fn fol_exact_with_limit(g: &SchreierGraph, n: usize, size_cap: usize, limit: usize, budget: u64) -> Result<FolExact> {
    if size_cap > limit {
        return Err(Error::CapExceeded { what: "exhaustive subset size", limit, reached: size_cap });
    }
    let interior = g.interior();
    if interior.is_empty() {
        return Err(Error::NoInterior);
    }
    check_budget(interior.len(), size_cap, budget)?;
    let mut m = vec![false; g.len()];
    let mut witness = None;
    for k in 1..=size_cap.min(interior.len()) {
        let found = for_each_subset(&interior, k, |f| {
            for &v in f {
                m[v] = true;
            }
            // #(F△Fs) = 2·#(Fs∖F) since s acts bijectively
            let ok = escape_counts_unchecked(g, f, &m).iter().all(|&c| 2 * c * n < k);
            for &v in f {
                m[v] = false;
            }
            if ok {
                witness = Some(f.to_vec());
            }
            ok
        });
        if found {
            break;
        }
    }
    Ok(FolExact {
        n,
        value: witness.as_ref().map(|w| w.len()),
        witness: witness.map(|w| w.iter().map(|&v| g.key(v)).collect()),
        interior_size: interior.len(),
        size_cap,
        covers_gset: interior.len() == g.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CscReport {
    pub n: usize,
    pub fol: Option<usize>,
    pub v_n: u64,
    #[serde(serialize_with = "text::ser_ratio64")]
    pub bound: Rational64,
    pub holds: bool,
}

/// Compares Fol(n) with v(n)/2. The Følner value comes from exhaustive
/// search inside the ball of the given radius.
pub fn csc_check(x: &MarkedGSet, n: usize, radius: usize, size_cap: usize) -> Result<CscReport> {
    let g = build_ball(x, radius.max(n))?;
    let v_n = growth_from_ball(&g).values[n];
    let fe = fol_exact(&g, n, size_cap)?;
    let bound = Rational64::new(v_n as i64, 2);
    let holds = fe.value.is_none_or(|f| Rational64::from_integer(f as i64) >= bound);
    Ok(CscReport { n, fol: fe.value, v_n, bound, holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(spec: &str, r: usize) -> SchreierGraph {
        build_ball(&MarkedGSet::parse(spec).unwrap(), r).unwrap()
    }

    #[test]
    fn growth_examples() {
        let v = |s: &str, n| growth_series(&MarkedGSet::parse(s).unwrap(), n).unwrap().values;
        assert_eq!(v("z:2", 2), vec![1, 5, 13]);
        assert_eq!(v("free:2", 3), vec![1, 5, 17, 53]);
        assert_eq!(v("grigorchuk", 2), vec![1, 5, 11]);
        let s = growth_series(&MarkedGSet::parse("free:2").unwrap(), 3).unwrap();
        assert_eq!(s.to_csv(), "0,1\n1,5\n2,17\n3,53");
    }

    #[test]
    fn subsets_enumerated_in_order() {
        let mut seen = Vec::new();
        for_each_subset(&[1, 2, 3, 4], 2, |f| {
            seen.push(f.to_vec());
            false
        });
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![1, 2]);
        assert_eq!(seen[5], vec![3, 4]);
        let mut count = 0;
        for_each_subset(&[7], 1, |_| {
            count += 1;
            false
        });
        assert_eq!(count, 1);
    }

    #[test]
    fn fol_on_z() {
        let g = ball("z:1", 5);
        assert_eq!(fol_exact(&g, 1, 12).unwrap().value, Some(3));
        assert_eq!(fol_exact(&g, 2, 12).unwrap().value, Some(5));
        let c = ball("zmod:6", 6);
        let r = fol_exact(&c, 10, 12).unwrap();
        assert_eq!(r.value, Some(6));
        assert!(r.covers_gset);
        assert!(fol_exact(&g, 1, 13).unwrap_err().is_cap());
    }

    #[test]
    fn z_interval_search() {
        let g = ball("z:1", 8);
        let eps = Rational64::new(1, 10);
        for mode in [SearchMode::Exhaustive, SearchMode::Greedy] {
            let r = folner_search(&g, eps, mode, &SearchOptions::default()).unwrap();
            assert!(r.success, "{mode:?}");
            assert_eq!(r.subset.len(), 11);
            assert_eq!(r.worst, Rational64::new(1, 11));
        }
        let opts = SearchOptions { seed: Some(7), size_cap: 15, ..Default::default() };
        let r = folner_search(&g, eps, SearchMode::Anneal, &opts).unwrap();
        assert!(r.worst >= Rational64::new(1, 15));
        assert!(folner_search(&g, eps, SearchMode::Anneal, &SearchOptions::default()).is_err());
    }

    #[test]
    fn free_group_fails() {
        let g = ball("free:2", 3);
        let r = folner_search(&g, Rational64::new(1, 2), SearchMode::Greedy, &SearchOptions::default()).unwrap();
        assert!(!r.success);
    }

    #[test]
    fn csc_on_z() {
        let z = MarkedGSet::parse("z:1").unwrap();
        let r = csc_check(&z, 2, 5, 12).unwrap();
        assert_eq!((r.fol, r.bound, r.holds), (Some(5), Rational64::new(5, 2), true));
        let r = csc_check(&z, 1, 4, 12).unwrap();
        assert_eq!((r.fol, r.bound, r.holds), (Some(3), Rational64::new(3, 2), true));
    }
}
