//! Library results against independent brute-force computations.

use std::collections::HashSet;

use amenlab::cogrowth::reduced_closed_counts;
use amenlab::isoperimetry::growth_series;
use amenlab::orbits::MarkedGSet;
use amenlab::randwalk::{inverted_orbit_stats, measure_power, return_probabilities, Precision, StepMeasure};
use amenlab::selfsim::{SelfSimFamily, TreeAutomorphism};
use num_bigint::BigInt;
use num_rational::BigRational;

fn gset(s: &str) -> MarkedGSet {
    MarkedGSet::parse(s).unwrap()
}

/// Mean of #O and of 2^{-#O} over all equally likely step sequences.
fn exact_means(steps: usize, letters: usize, orbit_size: impl Fn(&[usize]) -> usize) -> (f64, f64) {
    let total = letters.pow(steps as u32);
    let (mut s, mut t) = (0.0, 0.0);
    let mut seq = vec![0usize; steps];
    for mut code in 0..total {
        for x in seq.iter_mut() {
            *x = code % letters;
            code /= letters;
        }
        let k = orbit_size(&seq);
        s += k as f64;
        t += 0.5f64.powi(k as i32);
    }
    (s / total as f64, t / total as f64)
}

#[test]
fn inverted_orbits_on_z_match_enumeration() {
    // suffix sums g_k + … + g_n are the positions of the reversed walk
    let (mean, two) = exact_means(20, 2, |seq| {
        let mut pos = 0i64;
        let mut seen = HashSet::from([0i64]);
        for &s in seq.iter().rev() {
            pos += if s == 0 { 1 } else { -1 };
            seen.insert(pos);
        }
        seen.len()
    });
    let x = gset("z:1");
    let mu = StepMeasure::simple(x.group());
    let st = inverted_orbit_stats(&x, &mu, 20, 20_000, 11).unwrap();
    assert!((st.mean_size - mean).abs() < 5.0 * st.mean_size_se, "{} vs {mean}", st.mean_size);
    assert!((st.mean_two_pow - two).abs() < 5.0 * st.mean_two_pow_se + 1e-12, "{} vs {two}", st.mean_two_pow);
}

#[test]
fn inverted_orbits_on_f2_match_enumeration() {
    // letters in edge order a, A, b, B; suffix products g_k⋯g_n as reduced words
    let inv = [1usize, 0, 3, 2];
    let (mean, two) = exact_means(6, 4, |seq| {
        let mut seen: HashSet<Vec<usize>> = HashSet::from([vec![]]);
        let mut word: Vec<usize> = Vec::new();
        for &s in seq.iter().rev() {
            // prepend s
            if word.first() == Some(&inv[s]) {
                word.remove(0);
            } else {
                word.insert(0, s);
            }
            seen.insert(word.clone());
        }
        seen.len()
    });
    let x = gset("free:2");
    let mu = StepMeasure::simple(x.group());
    let st = inverted_orbit_stats(&x, &mu, 6, 20_000, 5).unwrap();
    assert!((st.mean_size - mean).abs() < 5.0 * st.mean_size_se, "{} vs {mean}", st.mean_size);
    assert!((st.mean_two_pow - two).abs() < 5.0 * st.mean_two_pow_se + 1e-12);
}

#[test]
fn inverted_orbit_runs_are_reproducible() {
    let x = gset("lamplighter");
    let mu = StepMeasure::parse(x.group(), "lazy").unwrap();
    let a = inverted_orbit_stats(&x, &mu, 30, 200, 99).unwrap();
    let b = inverted_orbit_stats(&x, &mu, 30, 200, 99).unwrap();
    assert_eq!(a, b);
    let c = inverted_orbit_stats(&x, &mu, 30, 200, 100).unwrap();
    assert_ne!(a, c);
}

fn level_perm(t: &TreeAutomorphism, depth: usize) -> Vec<u16> {
    (0..1u32 << depth)
        .map(|i| {
            let bits: Vec<u8> = (0..depth).map(|k| (i >> k & 1) as u8).collect();
            t.act_on_word(&bits).unwrap().iter().enumerate().map(|(k, &b)| (b as u16) << k).sum()
        })
        .collect()
}

#[test]
fn grigorchuk_golden_growth_matches_level_eight_bfs() {
    let golden: Vec<u64> = include_str!("data/grigorchuk_growth.csv")
        .lines()
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let gens: Vec<Vec<u16>> = ["a", "b", "c", "d"]
        .iter()
        .map(|s| level_perm(&TreeAutomorphism::parse(SelfSimFamily::Grigorchuk, s).unwrap(), 8))
        .collect();
    let id: Vec<u16> = (0..256).collect();
    let mut seen: HashSet<Vec<u16>> = HashSet::from([id.clone()]);
    let mut layer = vec![id];
    let mut sizes = vec![1u64];
    for _ in 1..golden.len() {
        let mut next = Vec::new();
        for p in &layer {
            for g in &gens {
                let q: Vec<u16> = p.iter().map(|&i| g[i as usize]).collect();
                if seen.insert(q.clone()) {
                    next.push(q);
                }
            }
        }
        sizes.push(seen.len() as u64);
        layer = next;
    }
    assert_eq!(sizes, golden);
    let lib = growth_series(&gset("grigorchuk"), golden.len() - 1).unwrap().values;
    assert_eq!(lib, golden);
}

#[test]
fn growth_matches_closed_forms() {
    let v = growth_series(&gset("free:2"), 8).unwrap().values;
    for (n, &x) in v.iter().enumerate() {
        assert_eq!(x, 2 * 3u64.pow(n as u32) - 1);
    }
    let v = growth_series(&gset("z:2"), 10).unwrap().values;
    for (n, &x) in v.iter().enumerate() {
        let n = n as u64;
        assert_eq!(x, 2 * n * n + 2 * n + 1);
    }
    let v = growth_series(&gset("free:3"), 5).unwrap().values;
    for (n, &x) in v.iter().enumerate() {
        assert_eq!(x, 1 + 6 * (5u64.pow(n as u32) - 1) / 4);
    }
}

#[test]
fn f2_return_probabilities_match_word_enumeration() {
    let x = gset("free:2");
    let mu = StepMeasure::simple(x.group());
    let lib = return_probabilities(&x, &mu, 8, Precision::Exact).unwrap();
    let inv = [1usize, 0, 3, 2];
    for n in 0..=8usize {
        let mut closed = 0u64;
        for mut code in 0..4u64.pow(n as u32) {
            let mut stack: Vec<usize> = Vec::new();
            for _ in 0..n {
                let s = (code % 4) as usize;
                code /= 4;
                if stack.last() == Some(&inv[s]) {
                    stack.pop();
                } else {
                    stack.push(s);
                }
            }
            closed += u64::from(stack.is_empty());
        }
        let want = BigRational::new(BigInt::from(closed), BigInt::from(4u64.pow(n as u32)));
        assert_eq!(lib[n].exact(), Some(&want), "n = {n}");
    }
}

#[test]
fn z_laws_are_binomial() {
    let x = gset("z:1");
    let mu = StepMeasure::simple(x.group());
    let n = 12i64;
    let d = measure_power(&x, &mu, n as usize, Precision::Exact).unwrap();
    assert_eq!(d.entries.len(), n as usize + 1);
    for k in (-n..=n).step_by(2) {
        let m = ((n + k) / 2) as u64;
        let c: u64 = (0..m).fold(1, |acc, i| acc * (n as u64 - i) / (i + 1));
        let want = BigRational::new(BigInt::from(c), BigInt::from(1u64 << n));
        assert_eq!(d.get(&k.to_string()).and_then(|m| m.exact()), Some(&want), "k = {k}");
    }
}

#[test]
fn lazy_walk_on_two_points() {
    // p_n(0,0) = (1 + (2q−1)^n)/2 for holding probability q on Z/2
    let x = gset("zmod:2");
    let mu = StepMeasure::parse(x.group(), "lazy:1/3").unwrap();
    let ps = return_probabilities(&x, &mu, 10, Precision::Exact).unwrap();
    for (n, p) in ps.iter().enumerate() {
        let r = BigRational::new(BigInt::from(-1), BigInt::from(3));
        let want = (BigRational::from_integer(1.into()) + num_traits::pow(r, n)) / BigRational::from_integer(2.into());
        assert_eq!(p.exact(), Some(&want), "n = {n}");
    }
}

#[test]
fn z2_cogrowth_counts_match_enumeration() {
    let c = reduced_closed_counts(&amenlab::MarkedGroup::parse("z:2").unwrap(), 10).unwrap().counts;
    let steps = [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)];
    for n in 0..=10usize {
        let mut count = 0u128;
        for mut code in 0..4u64.pow(n as u32) {
            let mut w = Vec::with_capacity(n);
            for _ in 0..n {
                w.push((code % 4) as usize);
                code /= 4;
            }
            if w.windows(2).any(|p| p[0] ^ 1 == p[1]) {
                continue;
            }
            let s = w.iter().fold((0, 0), |a, &l| (a.0 + steps[l].0, a.1 + steps[l].1));
            count += u128::from(s == (0, 0));
        }
        assert_eq!(c[n], count, "n = {n}");
    }
}
