//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so every line is printed; exits nonzero if any fails.

use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use amenlab::cellauto::overlaps::overlaps_family;
use amenlab::cellauto::{self, ca_step, LocalRule, DEFAULT_BUDGET};
use amenlab::cogrowth::{cogrowth_report, reduced_closed_counts, series_identity_check};
use amenlab::isoperimetry::{action_ratios, csc_check, fol_exact, growth_series};
use amenlab::orbits::{build_ball, default_vertex_cap, MarkedGSet, Point};
use amenlab::paradox::{doubling_check, hall_matching, paradox_verify, HallOutcome};
use amenlab::randwalk::{
    kesten_check, return_probabilities, rho_lower_bound, truncated_rho, Bound, Precision, StepMeasure,
};
use amenlab::selfsim::{generator_norms, eta, SelfSimFamily, TreeAutomorphism};
use amenlab::{GeneratorWord, Letter, MarkedGroup};
use amenlab_tests::{gset, grp, live_in, z2_pattern};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

const KESTEN_TOL: f64 = 1e-12;
const RHO_F2_LOWER_MIN: f64 = 0.80;
const RHO_F2_TRUNC_MIN: f64 = 0.83;
const RHO_SLACK: f64 = 1e-9;
const CONTRACTION_TOL: f64 = 1e-9;
const COGROWTH_RHO_TOL: f64 = 0.05;
const LAMPLIGHTER_C: f64 = 4.0;
const ORDER_CAP: usize = 16;

type Outcome = (bool, String);

fn binom(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn c1_z_returns() -> Outcome {
    let t = Instant::now();
    let x = gset("cayley:z:1");
    let mu = StepMeasure::simple(x.group());
    let ps = return_probabilities(&x, &mu, 60, Precision::Exact).unwrap();
    let bad: Vec<u64> = (0..=30u64)
        .filter(|&n| {
            let want = BigRational::new(binom(2 * n, n), BigInt::from(1) << (2 * n));
            ps[2 * n as usize].exact() != Some(&want)
        })
        .collect();
    let el = t.elapsed();
    (bad.is_empty() && el < Duration::from_secs(1), format!("mismatches {bad:?}, {el:.2?} (limit 1s)"))
}

fn c2_f2_rho() -> Outcome {
    let t = Instant::now();
    let x = gset("cayley:free:2");
    let mu = StepMeasure::simple(x.group());
    let top = 3f64.sqrt() / 2.0 + RHO_SLACK;
    let lower = rho_lower_bound(&x, &mu, 100, default_vertex_cap()).unwrap();
    let at100 = lower.sequence.iter().find(|e| e.0 == 100).map(|e| e.1).unwrap_or(0.0);
    let ball = build_ball(&x, 12).unwrap();
    let trunc = truncated_rho(&ball, &mu, 1e-10, 200_000).unwrap();
    let el = t.elapsed();
    let ok = (RHO_F2_LOWER_MIN..=top).contains(&at100)
        && trunc > RHO_F2_TRUNC_MIN
        && trunc <= top
        && el < Duration::from_secs(30);
    (ok, format!("p_100^(1/100) = {at100:.6} (ball radius {}), truncated rho(B(12)) = {trunc:.6}, {el:.1?} (limit 30s)", lower.ball_radius))
}

fn c3_kesten() -> Outcome {
    let (i, r) = (0.5, 3f64.sqrt() / 2.0);
    let rep = kesten_check(Bound::Exact(i), Bound::Exact(r));
    let eq = (i * i + r * r - 1.0).abs() <= KESTEN_TOL;
    (rep.passed && eq && i + r >= 1.0, format!("iota^2+rho^2-1 = {:e}, iota+rho = {:.6}", i * i + r * r - 1.0, i + r))
}

/// Connected subsets of the ball graph containing the basepoint, up to size k.
fn connected_sets(g: &amenlab::orbits::SchreierGraph, k: usize) -> Vec<Vec<usize>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut layer = vec![vec![g.basepoint()]];
    seen.insert(layer[0].clone());
    let mut all = layer.clone();
    for _ in 1..k {
        let mut next = Vec::new();
        for s in &layer {
            for &v in s {
                for l in 0..g.letters().len() {
                    let Some(t) = g.neighbor(v, l) else { continue };
                    if s.contains(&t) {
                        continue;
                    }
                    let mut n = s.clone();
                    n.push(t);
                    n.sort_unstable();
                    if seen.insert(n.clone()) {
                        next.push(n);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

fn c4_free_boundary() -> Outcome {
    let g = build_ball(&gset("cayley:free:2"), 9).unwrap();
    let sets = connected_sets(&g, 8);
    let bad = sets.iter().filter(|f| g.boundary_edges(f).unwrap().len() != 2 * f.len() + 2).count();
    (bad == 0, format!("{} connected sets checked, {bad} violations", sets.len()))
}

fn c5_folner_z() -> Outcome {
    let t = Instant::now();
    let z = build_ball(&gset("cayley:z:1"), 8).unwrap();
    let f1 = fol_exact(&z, 1, 8).unwrap().value;
    let f2 = fol_exact(&z, 2, 8).unwrap().value;
    let c1 = csc_check(&gset("cayley:z:1"), 1, 8, 8).unwrap();
    let c2 = csc_check(&gset("cayley:z:1"), 2, 8, 8).unwrap();
    let c3 = csc_check(&gset("cayley:z:2"), 1, 3, 10).unwrap();
    let el = t.elapsed();
    let ok = f1 == Some(3)
        && f2 == Some(5)
        && [&c1, &c2, &c3].iter().all(|c| c.holds && c.fol.is_some())
        && el < Duration::from_secs(60);
    (ok, format!("Fol_Z(1) = {f1:?}, Fol_Z(2) = {f2:?}, Fol_Z2(1) = {:?} vs v(1)/2 = 5/2, {el:.1?}", c3.fol))
}

fn lamp_point(g: &MarkedGroup, lamps: &[i64], pos: i64) -> Point {
    let mut w = String::new();
    for j in lamps {
        w.push_str(&format!("t^{j} a t^{} ", -j));
    }
    w.push_str(&format!("t^{pos}"));
    Point::Element(g.eval(&g.parse_word(&w).unwrap()).unwrap())
}

fn c6_lamplighter() -> Outcome {
    let g = grp("lamplighter");
    let rel_ok = (1..=8).all(|k| {
        let w = g.parse_word(&format!("a t^-{k} a t^{k} a t^-{k} a t^{k}")).unwrap();
        g.is_identity(&g.eval(&w).unwrap())
    });
    let x = MarkedGSet::regular(g.clone());
    let mut worst = Vec::new();
    for n in 1..=5i64 {
        let span: Vec<i64> = (-n..=n).collect();
        let mut pts = Vec::new();
        for mask in 0u32..(1 << span.len()) {
            let lamps: Vec<i64> = span.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &j)| j).collect();
            for &m in &span {
                pts.push(lamp_point(&g, &lamps, m));
            }
        }
        let r = action_ratios(&x, &pts).unwrap();
        let w = r.iter().map(|(_, q)| *q.numer() as f64 / *q.denom() as f64).fold(0.0, f64::max);
        worst.push(w * n as f64);
    }
    let ok = rel_ok && worst.iter().all(|&c| c <= LAMPLIGHTER_C);
    (ok, format!("relations k=1..8 {}, n*worst ratio for n=1..5: {worst:?} (C <= {LAMPLIGHTER_C})", if rel_ok { "hold" } else { "FAIL" }))
}

fn tree(s: &str) -> TreeAutomorphism {
    TreeAutomorphism::parse(SelfSimFamily::Grigorchuk, s).unwrap()
}

/// Alternating words a x a y … with x, y ∈ {b, c, d}, up to `len` letters.
fn syllable_words(len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            let last_is_a = w.ends_with('a');
            let choices: &[&str] = if w.is_empty() {
                &["a", "b", "c", "d"]
            } else if last_is_a {
                &["b", "c", "d"]
            } else {
                &["a"]
            };
            for c in choices {
                next.push(format!("{w}{c}"));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn level_perm(t: &TreeAutomorphism, depth: usize) -> Vec<u32> {
    (0..1u32 << depth)
        .map(|i| {
            let bits: Vec<u8> = (0..depth).map(|k| (i >> k & 1) as u8).collect();
            t.act_on_word(&bits).unwrap().iter().enumerate().map(|(k, &b)| (b as u32) << k).sum()
        })
        .collect()
}

fn c7_grigorchuk() -> Outcome {
    let rels = ["aa", "bb", "cc", "dd", "bcd", "adadadad"];
    let id8: Vec<u32> = (0..256).collect();
    let rel_ok = rels.iter().all(|r| tree(r).is_identity().unwrap() && level_perm(&tree(r), 8) == id8);
    let e = eta();
    let na = generator_norms()[0];
    let words = syllable_words(8);
    let mut worst = f64::NEG_INFINITY;
    for w in &words {
        let t = tree(w);
        let d = t.wreath_decompose();
        let lhs = d.sections[0].eta_norm().unwrap() + d.sections[1].eta_norm().unwrap();
        let rhs = e * (t.eta_norm().unwrap() + na);
        worst = worst.max(lhs - rhs);
    }
    let contraction_ok = worst <= CONTRACTION_TOL;
    let ball = build_ball(&gset("cayley:grigorchuk"), 6).unwrap();
    let mut orders_ok = true;
    for v in 0..ball.len() {
        match tree(&ball.key(v)).element_order(ORDER_CAP).unwrap() {
            Some(k) if k.is_power_of_two() => {}
            _ => orders_ok = false,
        }
    }
    let golden: Vec<u64> = include_str!("../../amenlab/tests/data/grigorchuk_growth.csv")
        .lines()
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').nth(1).unwrap().trim().parse().unwrap())
        .collect();
    let got = growth_series(&gset("cayley:grigorchuk"), golden.len() - 1).unwrap().values;
    let ok = rel_ok && contraction_ok && orders_ok && got == golden;
    (
        ok,
        format!(
            "relations {rel_ok}, contraction max slack {worst:.3e} over {} words, orders in B(6) ({}) power of 2 <= {ORDER_CAP}: {orders_ok}, growth {:?} vs golden {}",
            words.len(),
            ball.len(),
            got,
            if got == golden { "match" } else { "MISMATCH" }
        ),
    )
}

fn c8_cogrowth() -> Outcome {
    let z5 = series_identity_check(&grp("zmod:5"), 12).unwrap().max_residual;
    let z = series_identity_check(&grp("z:1"), 10).unwrap().max_residual;
    let c = reduced_closed_counts(&grp("z:2"), 4).unwrap().counts[4];
    // exhaustive: reduced words of length 4 over x,X,y,Y evaluating to 0
    let letters = [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)];
    let mut brute = 0;
    for code in 0..256u32 {
        let w: Vec<usize> = (0..4).map(|i| (code >> (2 * i) & 3) as usize).collect();
        let reduced = w.windows(2).all(|p| p[0] ^ 1 != p[1]);
        let sum = w.iter().fold((0, 0), |s, &l| (s.0 + letters[l].0, s.1 + letters[l].1));
        if reduced && sum == (0, 0) {
            brute += 1;
        }
    }
    let counts = reduced_closed_counts(&grp("z:2"), 16).unwrap();
    let rep = cogrowth_report(&counts, Some(1.0));
    let predicted = rep.predicted_rho.unwrap_or(f64::NAN);
    let resid = (predicted - 1.0).abs();
    let ok = z5.is_zero() && z.is_zero() && c == 8 && brute == 8 && resid <= COGROWTH_RHO_TOL;
    (
        ok,
        format!(
            "series residual Z/5 = {z5}, Z = {z}; c(4) on Z^2 = {c} (enumeration {brute}); c(16) = {}, gamma_hat = {:.4}, predicted rho = {predicted:.4}, |rho - 1| = {resid:.4} (tol {COGROWTH_RHO_TOL})",
            counts.counts[16],
            rep.gamma_hat.unwrap_or(f64::NAN)
        ),
    )
}

fn c9_cellauto() -> Outcome {
    let life = LocalRule::parse("life").unwrap();
    let start = z2_pattern(&[(1, 1), (2, 1), (3, 1), (3, 2), (2, 3)], -3, 8);
    let one = ca_step(&life, &start).unwrap();
    let two = ca_step(&life, &one).unwrap();
    let mut want1 = vec![(1, 2), (2, 1), (3, 1), (3, 2), (2, 0)];
    let mut want2 = vec![(1, 1), (3, 2), (3, 1), (2, 0), (3, 0)];
    want1.sort();
    want2.sort();
    let figures = live_in(&one, 0, 5) == want1 && live_in(&two, 0, 5) == want2;

    let mep = cellauto::mep_search(&life, 0, DEFAULT_BUDGET).unwrap();
    let lone = match &mep.witness {
        Some((a, b)) => {
            let (s1, s2) = (a.support(), b.support());
            (s1 == vec!["(0,0)".to_string()] && s2.is_empty()) || (s2 == vec!["(0,0)".to_string()] && s1.is_empty())
        }
        None => false,
    };

    let muller = LocalRule::parse("muller").unwrap();
    let goe = cellauto::goe_search(&muller, &["1".to_string()], DEFAULT_BUDGET).unwrap();
    let kernel = cellauto::linca_kernel_basis(muller.linear_matrix().unwrap(), 2).unwrap();
    let muller_ok = goe.witness.is_some() && kernel.is_empty();

    let and = LocalRule::parse("and").unwrap();
    let keys: Vec<String> = ["0", "1", "2"].iter().map(|s| s.to_string()).collect();
    let g = cellauto::goe_search(&and, &keys, DEFAULT_BUDGET).unwrap();
    let and_ok = g.witness.as_ref().map(|w| w.cells.iter().map(|c| c.1.to_string()).collect::<String>()).as_deref() == Some("101")
        && g.mode == cellauto::SearchKind::Exhaustive;

    let rules = ["life", "and", "or", "xor", "identity", "shift", "const:0", "const:1"];
    let mut torus = Vec::new();
    for r in rules {
        let rule = LocalRule::parse(&format!("{r}@torus:4x4")).unwrap();
        let c = cellauto::finite_coherence(&rule, DEFAULT_BUDGET).unwrap();
        torus.push((r, c.goe, c.mep, c.coherent));
    }
    let torus_ok = torus.iter().all(|t| t.3);
    let ok = figures && lone && muller_ok && and_ok && torus_ok;
    (
        ok,
        format!(
            "life figures {figures}, lone cell MEP {lone}, muller GOE at {{1}} {} and kernel dim {} at radius 2, AND GOE 101 {and_ok}, torus (rule, goe, mep): {:?}",
            goe.witness.is_some(),
            kernel.len(),
            torus.iter().map(|t| (t.0, t.1, t.2)).collect::<Vec<_>>()
        ),
    )
}

fn c10_overlaps() -> Outcome {
    let mut det = Vec::new();
    let mut ok = true;
    for n in 2..=4 {
        let r = overlaps_family(n).unwrap().report();
        ok &= r.passed && r.y_size == r.y_expected;
        det.push(format!("n={n}: #Y={} (expect {}), {} pairs, {} failures", r.y_size, r.y_expected, r.pairs_checked, r.pair_failures.len()));
    }
    (ok, det.join("; "))
}

/// Exhaustive: is there an injective V → W along edges? DP over used
/// subsets of W, with the reachable family stored as a bitset over the 32
/// subsets.
fn matching_exists(masks: &[u32]) -> bool {
    let mut reach: u64 = 1;
    for &m in masks {
        let mut next = 0u64;
        for used in (0..32).filter(|u| reach >> u & 1 == 1) {
            for w in (0..5).filter(|w| m >> w & 1 == 1 && used >> w & 1 == 0) {
                next |= 1 << (used | 1 << w);
            }
        }
        if next == 0 {
            return false;
        }
        reach = next;
    }
    true
}

fn c11_paradox() -> Outcome {
    let p = paradox_verify(6).unwrap();
    let d = doubling_check(8).unwrap();
    let mut graphs = 0u64;
    let mut disagreements = 0u64;
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for nv in 0..=5usize {
        for nw in 0..=5usize {
            edges.resize(nv, Vec::new());
            for code in 0u64..(1 << (nv * nw)) {
                graphs += 1;
                let masks: Vec<u32> = (0..nv).map(|v| ((code >> (v * nw)) & ((1 << nw) - 1)) as u32).collect();
                for (v, e) in edges.iter_mut().enumerate() {
                    e.clear();
                    e.extend((0..nw).filter(|w| masks[v] >> w & 1 == 1));
                }
                let want = matching_exists(&masks);
                let good = match hall_matching(&edges, nw) {
                    HallOutcome::Matching(m) => {
                        want && m.len() == nv
                            && m.iter().enumerate().all(|(v, &w)| edges[v].contains(&w))
                            && m.iter().collect::<HashSet<_>>().len() == nv
                    }
                    HallOutcome::Violator(f) => {
                        let nb: u32 = f.iter().fold(0, |a, &v| a | masks[v]);
                        !want && !f.is_empty() && (nb.count_ones() as usize) < f.len()
                    }
                };
                if !good {
                    disagreements += 1;
                }
            }
        }
    }
    let ok = p.passed && p.covered == 485 && d.passed && disagreements == 0;
    (
        ok,
        format!(
            "paradox B(6): {} elements, covers {} , violations {}; doubling on B(7): {} targets, {} violations; Hall sweep {graphs} graphs, {disagreements} disagreements",
            p.elements,
            p.covered,
            p.violations.len(),
            d.targets,
            d.violations.len()
        ),
    )
}

fn c12_coset() -> Outcome {
    let x = gset("coset:f2");
    let b = Letter::pos(1);
    let mut det = Vec::new();
    let mut ok = true;
    for n in 0..=10usize {
        let pts: Vec<Point> = (0..=n).map(|k| x.act_word(x.basepoint(), &GeneratorWord(vec![b; k])).unwrap()).collect();
        let mut boundary = 0;
        let set: HashSet<&Point> = pts.iter().collect();
        let mut loops = true;
        for p in &pts {
            for l in x.letters() {
                let q = x.act(p, l).unwrap();
                if !set.contains(&q) {
                    boundary += 1;
                }
                if l.generator == 0 && q != *p {
                    loops = false;
                }
            }
        }
        let ratios = action_ratios(&x, &pts).unwrap();
        let total: num_rational::Rational64 = ratios.iter().map(|r| r.1).sum();
        ok &= set.len() == n + 1 && boundary == 2 && loops && total == num_rational::Rational64::new(2, n as i64 + 1);
        if n == 10 {
            det.push(format!("n=10: boundary {boundary}, ratio {total}, a-loops {loops}"));
        }
    }
    (ok, format!("n = 0..10 all boundary 2; {}", det.join("")))
}

fn c13_documented() -> Outcome {
    let readme = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md")).unwrap_or_default();
    let ok = readme.contains("## Not reproduced numerically");
    (ok, "asymptotic claims are listed as documentation in README, covered by the property suites".into())
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "Z return probabilities", c1_z_returns),
        (2, "F2 spectral radius", c2_f2_rho),
        (3, "Kesten equality instance", c3_kesten),
        (4, "free-group boundary formula", c4_free_boundary),
        (5, "Folner function of Z", c5_folner_z),
        (6, "lamplighter", c6_lamplighter),
        (7, "Grigorchuk group", c7_grigorchuk),
        (8, "cogrowth", c8_cogrowth),
        (9, "cellular automata", c9_cellauto),
        (10, "overlaps family", c10_overlaps),
        (11, "paradox", c11_paradox),
        (12, "coset action", c12_coset),
        (13, "asymptotic claims documented", c13_documented),
    ];
    let mut failed = Vec::new();
    let mut summary: HashMap<u32, bool> = HashMap::new();
    for (n, name, f) in criteria {
        let t = Instant::now();
        let (ok, detail) = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        println!("{} criterion {n:>2} ({name}): {detail} [{:.2?}]", if ok { "PASS" } else { "FAIL" }, t.elapsed());
        summary.insert(n, ok);
        if !ok {
            failed.push(n);
        }
    }
    println!("acceptance: {} passed, {} failed {failed:?}", summary.values().filter(|&&b| b).count(), failed.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
