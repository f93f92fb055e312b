//! `amenlab`: growth, Følner sets, random walks, cogrowth, cellular automata,
//! paradoxical decompositions and topological full groups from the shell.
//!
//! Exit codes: 0 success, 2 validation error, 3 cap exceeded.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use amenlab::cellauto::{self, CellPattern, LocalRule};
use amenlab::cogrowth;
use amenlab::isoperimetry::{self, SearchMode, SearchOptions};
use amenlab::orbits::{build_ball_capped, default_vertex_cap, MarkedGSet};
use amenlab::paradox::{self, HallOutcome};
use amenlab::randwalk::{self, Bound, Precision, StepMeasure};
use amenlab::selfsim::{self, SelfSimFamily, TreeAutomorphism};
use amenlab::text;
use amenlab::topfull::{self, FullGroupElement, Window};
use amenlab::MarkedGroup;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "amenlab", version, about = "Computations around amenability of groups and group actions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Growth function v(n) = #B(n) of a marked G-set.
    Growth(GrowthArgs),
    /// Følner sets: #(Fs∖F) < ε#F, the Følner function and Fol(n) ≥ v(n)/2.
    #[command(subcommand)]
    Folner(FolnerCmd),
    /// Random walks: μ^{*n}, return probabilities, spectral radius, Kesten's criterion.
    #[command(subcommand)]
    Walk(WalkCmd),
    /// Cogrowth: reduced words representing 1 and Grigorchuk's cogrowth formula.
    #[command(subcommand)]
    Cogrowth(CogrowthCmd),
    /// Cellular automata over groups: Gardens of Eden, mutually erasable patterns.
    #[command(subcommand)]
    Ca(CaCmd),
    /// Paradoxical decomposition of F₂, Hall matchings, Cantor–Schröder–Bernstein.
    #[command(subcommand)]
    Paradox(ParadoxCmd),
    /// Topological full group of the Fibonacci subshift.
    #[command(subcommand)]
    Topfull(TopfullCmd),
    /// Schreier graphs of balls, tree portraits of self-similar elements.
    #[command(subcommand)]
    Graph(GraphCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Out {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GrowthArgs {
    /// Group or G-set spec, e.g. free:2, cayley:z:2, coset:f2, orbit:grigorchuk:depth=5.
    #[arg(long, visible_alias = "gset")]
    group: String,
    #[arg(long)]
    radius: usize,
    #[arg(long)]
    cap_vertices: Option<usize>,
    #[command(flatten)]
    out: Out,
}

#[derive(Subcommand)]
enum FolnerCmd {
    /// Search the interior of B(radius) for F with #(Fs∖F)/#F < ε for every s.
    Search {
        #[arg(long, visible_alias = "group")]
        gset: String,
        #[arg(long)]
        radius: usize,
        /// ε as p/q.
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value = "greedy")]
        mode: ModeArg,
        /// Required for anneal.
        #[arg(long)]
        seed: Option<u64>,
        /// Annealing steps.
        #[arg(long, default_value_t = 20_000)]
        steps: usize,
        #[arg(long, default_value_t = 12)]
        cap_subset_size: usize,
        #[arg(long)]
        cap_vertices: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Exact Følner function Fol(n) by exhaustive search up to a subset size.
    Exact {
        #[arg(long, visible_alias = "group")]
        gset: String,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        cap_subset_size: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Compares Fol(n) with v(n)/2.
    Bound {
        #[arg(long, visible_alias = "group")]
        gset: String,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        cap_subset_size: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Greedy,
    Anneal,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    Exact,
    Float,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::Exact => Precision::Exact,
            PrecisionArg::Float => Precision::Float,
        }
    }
}

#[derive(Args)]
struct WalkBase {
    #[arg(long, visible_alias = "group")]
    gset: String,
    /// srw, lazy, lazy:p/q, or an explicit list "word:p/q,…".
    #[arg(long, default_value = "srw")]
    measure: String,
}

#[derive(Subcommand)]
enum WalkCmd {
    /// Distribution of the walk after n steps, μ^{*n}.
    Power {
        #[command(flatten)]
        base: WalkBase,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value = "exact")]
        precision: PrecisionArg,
        #[command(flatten)]
        out: Out,
    },
    /// Return probability pₙ(x,x); csv gives the whole series.
    Return {
        #[command(flatten)]
        base: WalkBase,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value = "exact")]
        precision: PrecisionArg,
        #[command(flatten)]
        out: Out,
    },
    /// Lower bounds p₂ₙ(x,x)^{1/2n} ≤ ρ for the spectral radius.
    Rho {
        #[command(flatten)]
        base: WalkBase,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        cap_vertices: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Top eigenvalue of the walk operator killed outside B(radius).
    Truncated {
        #[command(flatten)]
        base: WalkBase,
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 200_000)]
        max_iter: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Upper bound on the isoperimetric constant ι from F = B(radius).
    Iota {
        #[command(flatten)]
        base: WalkBase,
        #[arg(long)]
        radius: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Kesten's inequalities ι² + ρ² ≤ 1 ≤ ι + ρ.
    Kesten {
        /// exact:VALUE or upper:VALUE; VALUE is p/q or a decimal.
        #[arg(long)]
        iota: String,
        /// exact:VALUE or lower:VALUE.
        #[arg(long)]
        rho: String,
        #[command(flatten)]
        out: Out,
    },
    /// Inverted orbits Oₙ: mean size and E(2^{−#Oₙ}) by Monte Carlo.
    Inverted {
        #[command(flatten)]
        base: WalkBase,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum CogrowthCmd {
    /// c(k): reduced words of length k over S± representing 1.
    Counts {
        #[arg(long, visible_alias = "gset")]
        group: String,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        out: Out,
    },
    /// γ̂ and ρ = (γ + (#S±−1)/γ)/#S±, compared with a reference ρ.
    Report {
        #[arg(long, visible_alias = "gset")]
        group: String,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        rho_reference: Option<f64>,
        #[command(flatten)]
        out: Out,
    },
    /// Coefficientwise check of the series identity linking reduced and all closed walks.
    Series {
        #[arg(long, visible_alias = "gset")]
        group: String,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Args)]
struct RuleArg {
    /// life, and, or, xor, identity, shift, const:K, muller[:p] (optionally @group), or linear:<json|file>.
    #[arg(long)]
    rule: String,
}

#[derive(Subcommand)]
enum CaCmd {
    /// Apply the global map Θ(x)(g) = θ(x(g·s)) to a finite pattern.
    Step {
        #[command(flatten)]
        rule: RuleArg,
        /// Pattern JSON, inline or a file path.
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Pad the pattern with the quiescent state to this word radius first.
        #[arg(long, default_value_t = 0)]
        pad: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Garden of Eden pattern on a window F: a pattern outside Θ(A^{FS})↾F.
    Goe {
        #[command(flatten)]
        rule: RuleArg,
        /// Window keys separated by ';'. Defaults to B(radius).
        #[arg(long)]
        window: Option<String>,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, default_value_t = cellauto::DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Mutually erasable patterns supported in B(bound).
    Mep {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = cellauto::DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Entropy estimates log #Θ(A^G)↾B(r) / #B(r).
    Entropy {
        #[command(flatten)]
        rule: RuleArg,
        /// Radii separated by commas.
        #[arg(long, default_value = "0,1,2")]
        radii: String,
        #[arg(long, default_value_t = cellauto::DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Kernel of x ↦ xM for a linear automaton, on configurations supported in B(radius).
    Kernel {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long)]
        radius: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Adjoint M* of a linear automaton, (M*)ᵢⱼ = (Mⱼᵢ)*.
    Adjoint {
        #[command(flatten)]
        rule: RuleArg,
        #[command(flatten)]
        out: Out,
    },
    /// On a finite group: Garden of Eden exists iff mutually erasable patterns exist.
    Coherence {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long, default_value_t = cellauto::DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Overlap family of cycles in Sym(n).
    Overlaps {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum ParadoxCmd {
    /// Paradoxical decomposition of F₂ checked on B(radius).
    Verify {
        #[arg(long)]
        radius: usize,
        #[command(flatten)]
        out: Out,
    },
    /// The 2-to-1 map φ on F₂ checked on B(radius).
    Doubling {
        #[arg(long)]
        radius: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Hall matching or a violating set.
    Hall {
        /// Neighbour lists of V separated by ';', each a comma list of W indices.
        #[arg(long)]
        edges: String,
        #[arg(long)]
        w_count: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Cantor–Schröder–Bernstein bijection from the F₂ injections, on B(radius).
    Csb {
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = 32)]
        cap: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum TopfullCmd {
    /// Factor language of the Fibonacci subshift up to a length.
    Language {
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Apply a full-group element to a window like 010.0101 (dot before position 0).
    Apply {
        /// Element JSON, inline or a file path.
        #[arg(long)]
        element: String,
        #[arg(long)]
        window: String,
        #[command(flatten)]
        out: Out,
    },
    /// Compose two elements and certify the product is bijective.
    Compose {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = topfull::MAX_LEN)]
        max_len: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Inverse of an element.
    Inverse {
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = topfull::MAX_LEN)]
        max_len: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Search for an element that is not a power of the shift.
    Search {
        #[arg(long, default_value_t = 3)]
        cylinder_len: usize,
        /// Allowed shifts, comma separated.
        #[arg(long, default_value = "-1,0,1", allow_hyphen_values = true)]
        shifts: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Schreier graph of B(radius) in a marked G-set.
    Ball {
        #[arg(long, visible_alias = "group")]
        gset: String,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        cap_vertices: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Portrait of a Grigorchuk or Basilica element on the binary tree.
    Portrait {
        /// grigorchuk or basilica.
        #[arg(long, default_value = "grigorchuk")]
        family: String,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[command(flatten)]
        out: Out,
    },
    /// The contraction constant η and the generator norms of the Grigorchuk group.
    Eta {
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Debug)]
enum Failure {
    Lib(amenlab::Error),
    Usage(String),
}

impl From<amenlab::Error> for Failure {
    fn from(e: amenlab::Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn emit(out: &Out, default: Format, json_value: Value, csv: Option<String>, text: Option<String>) -> Res<()> {
    let body = match out.format.unwrap_or(default) {
        Format::Json => serde_json::to_string_pretty(&json_value).expect("serializable"),
        Format::Csv => csv.ok_or_else(|| usage("csv output is not available here"))?,
        Format::Text => text.ok_or_else(|| usage("text output is not available here"))?,
    };
    let body = body.trim_end().to_string() + "\n";
    match &out.out {
        Some(p) => std::fs::write(p, body).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(body.as_bytes()).map_err(|e| usage(e.to_string()))
        }
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

/// Inline JSON or a path to a file holding it.
fn json_text(arg: &str) -> Res<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| usage(format!("{arg}: {e}")))
    }
}

fn parse_rule(arg: &str) -> Res<LocalRule> {
    match arg.strip_prefix("linear:") {
        Some(src) => Ok(LocalRule::parse(&format!("linear:{}", json_text(src)?))?),
        None => Ok(LocalRule::parse(arg)?),
    }
}

fn vertex_cap(c: Option<usize>) -> Res<usize> {
    match c {
        Some(0) => Err(usage("caps must be positive")),
        Some(c) => Ok(c),
        None => Ok(default_vertex_cap()),
    }
}

fn parse_bound(s: &str, upper_name: &str) -> Res<Bound> {
    let (kind, v) = s.split_once(':').ok_or_else(|| usage(format!("expected kind:value, got `{s}`")))?;
    let x = if v.contains('/') {
        let r = text::parse_ratio64(v)?;
        *r.numer() as f64 / *r.denom() as f64
    } else {
        v.parse::<f64>().map_err(|_| usage(format!("bad value `{v}`")))?
    };
    match kind {
        "exact" => Ok(Bound::Exact(x)),
        k if k == upper_name && k == "upper" => Ok(Bound::Upper(x)),
        k if k == upper_name && k == "lower" => Ok(Bound::Lower(x)),
        _ => Err(usage(format!("bound kind must be exact or {upper_name}"))),
    }
}

fn walk_setup(b: &WalkBase) -> Res<(MarkedGSet, StepMeasure)> {
    let x = MarkedGSet::parse(&b.gset)?;
    let mu = StepMeasure::parse(x.group(), &b.measure)?;
    Ok((x, mu))
}

fn ball_keys(group: &MarkedGroup, radius: usize) -> Res<Vec<String>> {
    let g = build_ball_capped(&MarkedGSet::regular(group.clone()), radius, default_vertex_cap())?;
    Ok((0..g.len()).map(|v| g.key(v)).collect())
}

fn pattern_value(p: &CellPattern) -> Value {
    let mut v = p.to_json();
    v["support"] = json!(p.support());
    v
}

fn run(cli: Cli) -> Res<()> {
    match cli.cmd {
        Cmd::Growth(a) => {
            let x = MarkedGSet::parse(&a.group)?;
            let g = build_ball_capped(&x, a.radius, vertex_cap(a.cap_vertices)?)?;
            let s = isoperimetry::growth_from_ball(&g);
            let csv = s.to_csv();
            emit(&a.out, Format::Json, to_value(&s), Some(csv.clone()), Some(csv))
        }
        Cmd::Folner(c) => folner(c),
        Cmd::Walk(c) => walk(c),
        Cmd::Cogrowth(c) => cogrowth_cmd(c),
        Cmd::Ca(c) => ca(c),
        Cmd::Paradox(c) => paradox_cmd(c),
        Cmd::Topfull(c) => topfull_cmd(c),
        Cmd::Graph(c) => graph(c),
    }
}

fn folner(c: FolnerCmd) -> Res<()> {
    match c {
        FolnerCmd::Search { gset, radius, epsilon, mode, seed, steps, cap_subset_size, cap_vertices, out } => {
            if cap_subset_size == 0 {
                return Err(usage("caps must be positive"));
            }
            let mode = match mode {
                ModeArg::Exhaustive => SearchMode::Exhaustive,
                ModeArg::Greedy => SearchMode::Greedy,
                ModeArg::Anneal => SearchMode::Anneal,
            };
            if mode == SearchMode::Anneal && seed.is_none() {
                return Err(usage("--seed is required for anneal"));
            }
            let x = MarkedGSet::parse(&gset)?;
            let g = build_ball_capped(&x, radius, vertex_cap(cap_vertices)?)?;
            let eps = text::parse_ratio64(&epsilon)?;
            let opts = SearchOptions { size_cap: cap_subset_size, seed, steps, ..SearchOptions::default() };
            let r = isoperimetry::folner_search(&g, eps, mode, &opts)?;
            let txt = format!("{} {}", if r.success { "found" } else { "not-found" }, text::ratio64(&r.worst));
            emit(&out, Format::Json, to_value(&r), None, Some(txt))
        }
        FolnerCmd::Exact { gset, radius, n, cap_subset_size, out } => {
            let x = MarkedGSet::parse(&gset)?;
            let g = build_ball_capped(&x, radius, default_vertex_cap())?;
            let r = isoperimetry::fol_exact(&g, n, cap_subset_size)?;
            let txt = r.value.map_or("none".to_string(), |v| v.to_string());
            emit(&out, Format::Json, to_value(&r), None, Some(txt))
        }
        FolnerCmd::Bound { gset, radius, n, cap_subset_size, out } => {
            let x = MarkedGSet::parse(&gset)?;
            let r = isoperimetry::csc_check(&x, n, radius, cap_subset_size)?;
            emit(&out, Format::Json, to_value(&r), None, Some(r.holds.to_string()))
        }
    }
}

fn walk(c: WalkCmd) -> Res<()> {
    match c {
        WalkCmd::Power { base, steps, precision, out } => {
            let (x, mu) = walk_setup(&base)?;
            let d = randwalk::measure_power(&x, &mu, steps, precision.into())?;
            let csv = std::iter::once("key,mass".to_string())
                .chain(d.entries.iter().map(|(k, m)| format!("\"{k}\",{}", m.text())))
                .collect::<Vec<_>>()
                .join("\n");
            emit(&out, Format::Json, d.to_json(), Some(csv), None)
        }
        WalkCmd::Return { base, steps, precision, out } => {
            let (x, mu) = walk_setup(&base)?;
            let ps = randwalk::return_probabilities(&x, &mu, steps, precision.into())?;
            let csv = std::iter::once("n,p_n(x,x)".to_string())
                .chain(ps.iter().enumerate().map(|(k, m)| format!("{k},{}", m.text())))
                .collect::<Vec<_>>()
                .join("\n");
            let last = ps.last().expect("n+1 entries").text();
            let v = json!({"gset": x.spec(), "steps": steps, "values": ps.iter().map(|m| m.text()).collect::<Vec<_>>()});
            emit(&out, Format::Text, v, Some(csv), Some(last))
        }
        WalkCmd::Rho { base, steps, cap_vertices, out } => {
            let (x, mu) = walk_setup(&base)?;
            let r = randwalk::rho_lower_bound(&x, &mu, steps, vertex_cap(cap_vertices)?)?;
            let csv = std::iter::once("2n,lower_bound".to_string())
                .chain(r.sequence.iter().map(|(k, v)| format!("{k},{}", text::float(*v))))
                .collect::<Vec<_>>()
                .join("\n");
            let mut v = to_value(&r);
            v["sequence"] = json!(r.sequence.iter().map(|(k, f)| json!([k, text::float(*f)])).collect::<Vec<_>>());
            emit(&out, Format::Json, v, Some(csv), Some(text::float(r.best)))
        }
        WalkCmd::Truncated { base, radius, tol, max_iter, out } => {
            let (x, mu) = walk_setup(&base)?;
            let g = build_ball_capped(&x, radius, default_vertex_cap())?;
            let rho = randwalk::truncated_rho(&g, &mu, tol, max_iter)?;
            let v = json!({"gset": x.spec(), "radius": radius, "vertices": g.len(), "rho": text::float(rho)});
            emit(&out, Format::Json, v, None, Some(text::float(rho)))
        }
        WalkCmd::Iota { base, radius, out } => {
            let (x, mu) = walk_setup(&base)?;
            let reach = mu.support().iter().map(|(w, _)| w.len()).max().unwrap_or(0).max(1);
            let g = build_ball_capped(&x, radius + reach, default_vertex_cap())?;
            let f: Vec<usize> = (0..g.len()).filter(|&v| g.depth(v) <= radius).collect();
            let i = randwalk::iota_upper(&g, &mu, &f)?;
            let v = json!({"gset": x.spec(), "radius": radius, "subset_size": f.len(), "iota_upper": text::big_ratio(&i)});
            emit(&out, Format::Json, v, None, Some(text::big_ratio(&i)))
        }
        WalkCmd::Kesten { iota, rho, out } => {
            let r = randwalk::kesten_check(parse_bound(&iota, "upper")?, parse_bound(&rho, "lower")?);
            emit(&out, Format::Json, to_value(&r), None, Some(if r.passed { "PASS" } else { "FAIL" }.to_string()))
        }
        WalkCmd::Inverted { base, steps, trials, seed, out } => {
            let (x, mu) = walk_setup(&base)?;
            let s = randwalk::inverted_orbit_stats(&x, &mu, steps, trials, seed)?;
            emit(&out, Format::Json, to_value(&s), None, None)
        }
    }
}

fn cogrowth_cmd(c: CogrowthCmd) -> Res<()> {
    match c {
        CogrowthCmd::Counts { group, steps, out } => {
            let g = MarkedGroup::parse(&group)?;
            let r = cogrowth::reduced_closed_counts(&g, steps)?;
            emit(&out, Format::Csv, to_value(&r), Some(r.to_csv()), None)
        }
        CogrowthCmd::Report { group, steps, rho_reference, out } => {
            let g = MarkedGroup::parse(&group)?;
            let counts = cogrowth::reduced_closed_counts(&g, steps)?;
            let r = cogrowth::cogrowth_report(&counts, rho_reference);
            emit(&out, Format::Json, to_value(&r), None, None)
        }
        CogrowthCmd::Series { group, steps, out } => {
            let g = MarkedGroup::parse(&group)?;
            let r = cogrowth::series_identity_check(&g, steps)?;
            emit(&out, Format::Json, to_value(&r), None, Some(text::big_ratio(&r.max_residual)))
        }
    }
}

fn ca(c: CaCmd) -> Res<()> {
    match c {
        CaCmd::Step { rule, pattern, steps, pad, out } => {
            let rule = parse_rule(&rule.rule)?;
            let mut p = CellPattern::from_json(&json_text(&pattern)?)?;
            if pad > 0 {
                let fill = rule.quiescent().ok_or(amenlab::Error::NoQuiescent)?;
                p = p.padded(pad, fill)?;
            }
            let r = cellauto::ca_run(&rule, &p, steps)?;
            let csv = std::iter::once("key,value".to_string())
                .chain(r.cells.iter().map(|(k, v)| format!("\"{k}\",{v}")))
                .collect::<Vec<_>>()
                .join("\n");
            emit(&out, Format::Json, pattern_value(&r), Some(csv), None)
        }
        CaCmd::Goe { rule, window, radius, budget, out } => {
            let rule = parse_rule(&rule.rule)?;
            let keys = match window {
                Some(w) => w.split(';').map(|k| k.trim().to_string()).collect(),
                None => ball_keys(rule.group(), radius)?,
            };
            let r = cellauto::goe_search(&rule, &keys, budget)?;
            emit(&out, Format::Json, to_value(&r), None, None)
        }
        CaCmd::Mep { rule, radius, budget, out } => {
            let rule = parse_rule(&rule.rule)?;
            let r = cellauto::mep_search(&rule, radius, budget)?;
            emit(&out, Format::Json, to_value(&r), None, None)
        }
        CaCmd::Entropy { rule, radii, budget, out } => {
            let rule = parse_rule(&rule.rule)?;
            let mut windows = Vec::new();
            for r in radii.split(',') {
                let r: usize = r.trim().parse().map_err(|_| usage(format!("bad radius `{r}`")))?;
                windows.push(ball_keys(rule.group(), r)?);
            }
            let es = cellauto::entropy_estimate(&rule, &windows, budget)?;
            let csv = std::iter::once("cells,images,entropy".to_string())
                .chain(es.iter().map(|e| format!("{},{},{}", e.cells, e.images, text::float(e.entropy))))
                .collect::<Vec<_>>()
                .join("\n");
            emit(&out, Format::Json, to_value(&es), Some(csv), None)
        }
        CaCmd::Kernel { rule, radius, out } => {
            let rule = parse_rule(&rule.rule)?;
            let m = rule.linear_matrix().ok_or_else(|| usage("kernel needs a linear rule"))?;
            let basis = cellauto::linca_kernel_basis(m, radius)?;
            let v = json!({"radius": radius, "dimension": basis.len(), "basis": basis.iter().map(|p| p.to_json()).collect::<Vec<_>>()});
            emit(&out, Format::Json, v, None, Some(basis.len().to_string()))
        }
        CaCmd::Adjoint { rule, out } => {
            let rule = parse_rule(&rule.rule)?;
            let m = rule.linear_matrix().ok_or_else(|| usage("adjoint needs a linear rule"))?;
            emit(&out, Format::Json, cellauto::linca_adjoint(m)?.to_json(), None, None)
        }
        CaCmd::Coherence { rule, budget, out } => {
            let rule = parse_rule(&rule.rule)?;
            let r = cellauto::finite_coherence(&rule, budget)?;
            emit(&out, Format::Json, to_value(&r), None, Some(r.coherent.to_string()))
        }
        CaCmd::Overlaps { n, out } => {
            let r = cellauto::overlaps::overlaps_family(n)?.report();
            emit(&out, Format::Json, to_value(&r), None, Some(r.passed.to_string()))
        }
    }
}

fn paradox_cmd(c: ParadoxCmd) -> Res<()> {
    match c {
        ParadoxCmd::Verify { radius, out } => {
            let r = paradox::paradox_verify(radius)?;
            emit(&out, Format::Json, to_value(&r), None, Some(r.passed.to_string()))
        }
        ParadoxCmd::Doubling { radius, out } => {
            let r = paradox::doubling_check(radius)?;
            emit(&out, Format::Json, to_value(&r), None, Some(r.passed.to_string()))
        }
        ParadoxCmd::Hall { edges, w_count, out } => {
            let mut lists = Vec::new();
            for part in edges.split(';') {
                let mut l = Vec::new();
                for t in part.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                    let w: usize = t.parse().map_err(|_| usage(format!("bad vertex `{t}`")))?;
                    if w >= w_count {
                        return Err(usage(format!("vertex {w} not below --w-count {w_count}")));
                    }
                    l.push(w);
                }
                lists.push(l);
            }
            let r = paradox::hall_matching(&lists, w_count);
            let txt = match &r {
                HallOutcome::Matching(m) => format!("matching {m:?}"),
                HallOutcome::Violator(f) => format!("violator {f:?}"),
            };
            emit(&out, Format::Json, to_value(&r), None, Some(txt))
        }
        ParadoxCmd::Csb { radius, cap, out } => {
            let r = paradox::csb_f2(radius, cap)?;
            emit(&out, Format::Json, to_value(&r), None, None)
        }
    }
}

fn topfull_cmd(c: TopfullCmd) -> Res<()> {
    match c {
        TopfullCmd::Language { max_len, out } => {
            let l = topfull::fib_language(max_len)?;
            let csv = std::iter::once("n,count".to_string())
                .chain(l.counts().iter().enumerate().map(|(n, c)| format!("{n},{c}")))
                .collect::<Vec<_>>()
                .join("\n");
            emit(&out, Format::Json, to_value(&l), Some(csv), None)
        }
        TopfullCmd::Apply { element, window, out } => {
            let e = FullGroupElement::from_json(&json_text(&element)?)?;
            let w = Window::parse(&window)?;
            let y = topfull::tf_apply(&e, &w)?;
            let shift = e.shift_at(&w)?;
            let v = json!({"input": w.to_string(), "shift": shift, "output": y.to_string()});
            emit(&out, Format::Text, v, None, Some(y.to_string()))
        }
        TopfullCmd::Compose { left, right, depth, max_len, out } => {
            let e1 = FullGroupElement::from_json(&json_text(&left)?)?;
            let e2 = FullGroupElement::from_json(&json_text(&right)?)?;
            let lang = topfull::fib_language(max_len)?;
            let (c, ok) = topfull::tf_compose_check(&e1, &e2, depth, &lang)?;
            emit(&out, Format::Json, json!({"product": c.to_json(), "bijective": ok}), None, None)
        }
        TopfullCmd::Inverse { element, depth, max_len, out } => {
            let e = FullGroupElement::from_json(&json_text(&element)?)?;
            let lang = topfull::fib_language(max_len)?;
            emit(&out, Format::Json, topfull::tf_inverse(&e, depth, &lang)?.to_json(), None, None)
        }
        TopfullCmd::Search { cylinder_len, shifts, depth, out } => {
            let mut ks = Vec::new();
            for s in shifts.split(',') {
                ks.push(s.trim().parse::<i64>().map_err(|_| usage(format!("bad shift `{s}`")))?);
            }
            let lang = topfull::fib_language(topfull::MAX_LEN)?;
            let found = topfull::search_element(&lang, cylinder_len, &ks, depth)?;
            let v = json!({"artifact_generated": true, "element": found.map(|e| e.to_json())});
            emit(&out, Format::Json, v, None, None)
        }
    }
}

fn graph(c: GraphCmd) -> Res<()> {
    match c {
        GraphCmd::Ball { gset, radius, cap_vertices, out } => {
            let x = MarkedGSet::parse(&gset)?;
            let g = build_ball_capped(&x, radius, vertex_cap(cap_vertices)?)?;
            let csv = std::iter::once("from,label,to".to_string())
                .chain(g.edges().iter().map(|e| {
                    format!("\"{}\",{},\"{}\"", g.key(e.src), g.letter_names()[e.gen], g.key(e.dst))
                }))
                .collect::<Vec<_>>()
                .join("\n");
            emit(&out, Format::Json, g.to_json(), Some(csv), None)
        }
        GraphCmd::Portrait { family, element, depth, out } => {
            let fam = match family.as_str() {
                "grigorchuk" => SelfSimFamily::Grigorchuk,
                "basilica" => SelfSimFamily::Basilica,
                f => return Err(usage(format!("unknown family `{f}`"))),
            };
            let e = TreeAutomorphism::parse(fam, &element)?;
            emit(&out, Format::Json, e.portrait(depth), None, None)
        }
        GraphCmd::Eta { out } => {
            let norms = selfsim::generator_norms();
            let v = json!({
                "eta": text::float(selfsim::eta()),
                "norms": {"a": text::float(norms[0]), "b": text::float(norms[1]), "c": text::float(norms[2]), "d": text::float(norms[3])},
            });
            emit(&out, Format::Json, v, None, Some(text::float(selfsim::eta())))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_cap() { 3 } else { 2 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
