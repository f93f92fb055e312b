//! Small fixtures shared by the acceptance suite.

use amenlab::cellauto::CellPattern;
use amenlab::orbits::MarkedGSet;
use amenlab::MarkedGroup;

pub fn gset(s: &str) -> MarkedGSet {
    MarkedGSet::parse(s).unwrap()
}

pub fn grp(s: &str) -> MarkedGroup {
    MarkedGroup::parse(s).unwrap()
}

/// The square [lo, hi]² of Z² with the listed cells alive.
pub fn z2_pattern(live: &[(i64, i64)], lo: i64, hi: i64) -> CellPattern {
    let mut cells = Vec::new();
    for y in lo..=hi {
        for x in lo..=hi {
            cells.push((format!("({x},{y})"), u32::from(live.contains(&(x, y)))));
        }
    }
    CellPattern { group: "z:2".into(), cells }
}

/// Live cells of a Z² pattern inside [lo, hi]², sorted.
pub fn live_in(p: &CellPattern, lo: i64, hi: i64) -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = p
        .cells
        .iter()
        .filter(|c| c.1 == 1)
        .map(|(k, _)| {
            let t: Vec<i64> = k.trim_matches(|c| c == '(' || c == ')').split(',').map(|s| s.parse().unwrap()).collect();
            (t[0], t[1])
        })
        .filter(|(x, y)| (lo..=hi).contains(x) && (lo..=hi).contains(y))
        .collect();
    v.sort();
    v
}
