use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gaussent::measures::gaussian_eof;
use gaussent::sample::{rng_from_seed, StateSampler};
use gaussent::separability::{h_function, log_negativity, Bipartition};
use gaussent::state::reduce;
use gaussent::symmetric::{block_log_negativity, fully_symmetric_mixed, fully_symmetric_pure, one_by_k_log_negativity};
use gaussent::tripartite::residual_contangle_pure;
use rayon::prelude::*;
use serde_json::json;

use crate::common::{command_echo, sig, CliResult, Failure, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    /// 1×K log-negativities of a pure fully symmetric state against b.
    Hierarchy,
    /// 1×1 and 1×(N−1) log-negativities of pure (1+N)-mode states against N.
    Scaling,
    /// The same pair after tracing out one mode of the (1+N)-mode state.
    ScalingMixed,
    /// K|(n−K) block log-negativities, pure and with modes traced out, against b.
    Blocks,
    /// Residual contangle of pure three-mode states against the local mixedness.
    Residual,
    /// (E_N, G_EF) of random two-mode states with the symmetric-state boundary.
    Ordering,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub kind: SweepKind,
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Total modes (hierarchy, blocks).
    #[arg(long)]
    pub n: Option<usize>,
    /// Local mixedness b (scaling, scaling-mixed).
    #[arg(long)]
    pub b: Option<f64>,
    /// Modes traced out for the mixed curves (blocks).
    #[arg(long)]
    pub traced: Option<usize>,
    /// Fix a1 and sweep a2 = a3 instead of a1 = a2 = a3 (residual).
    #[arg(long)]
    pub a1: Option<f64>,
    /// Random states (ordering).
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV file; stdout when omitted. The run report goes to stderr.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Grid over one named parameter plus the fixed ones.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: &'static str,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub fixed: Vec<(&'static str, f64)>,
    pub out: Option<PathBuf>,
}

impl SweepSpec {
    pub fn validate(&self) -> CliResult<()> {
        if self.steps < 2 {
            return Err(Failure::usage(format!("steps must be at least 2, got {}", self.steps)));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Failure::usage(format!(
                "need start < stop, got {} and {}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.stop } else { self.start + h * i as f64 })
            .collect()
    }

    fn fixed(&self, name: &str) -> f64 {
        self.fixed.iter().find(|(k, _)| *k == name).expect("fixed parameter set").1
    }
}

fn spec_for(args: &SweepArgs) -> SweepSpec {
    let range = |start: f64, stop: f64, steps: usize| {
        (args.start.unwrap_or(start), args.stop.unwrap_or(stop), args.steps.unwrap_or(steps))
    };
    let (parameter, (start, stop, steps), fixed) = match args.kind {
        SweepKind::Hierarchy => ("b", range(1.0, 3.0, 21), vec![("n", args.n.unwrap_or(10) as f64)]),
        SweepKind::Scaling | SweepKind::ScalingMixed => {
            let (start, stop) = (args.start.unwrap_or(2.0), args.stop.unwrap_or(10.0));
            let steps = args.steps.unwrap_or((stop - start).round().max(1.0) as usize + 1);
            ("N", (start, stop, steps), vec![("b", args.b.unwrap_or(1.5))])
        }
        SweepKind::Blocks => (
            "b",
            range(1.0, 3.0, 21),
            vec![("n", args.n.unwrap_or(10) as f64), ("traced", args.traced.unwrap_or(4) as f64)],
        ),
        SweepKind::Residual => ("a", range(1.0, 5.0, 41), args.a1.map(|a| vec![("a1", a)]).unwrap_or_default()),
        SweepKind::Ordering => (
            "index",
            (0.0, args.samples.saturating_sub(1) as f64, args.samples),
            Vec::new(),
        ),
    };
    SweepSpec {
        parameter,
        start,
        stop,
        steps,
        fixed,
        out: args.out.clone(),
    }
}

type Rows = Vec<Vec<String>>;

fn symmetric_row(n: usize, k: usize, b: f64, e: f64, name: &str) -> Vec<String> {
    vec![n.to_string(), k.to_string(), sig(b), sig(e), name.to_string()]
}

const SYMMETRIC_HEADER: [&str; 5] = ["n", "K", "b", "E_N", "measure_name"];

fn hierarchy(spec: &SweepSpec, b: f64) -> CliResult<Rows> {
    let n = spec.fixed("n") as usize;
    let st = fully_symmetric_pure(n, b)?;
    (1..n)
        .map(|k| Ok(symmetric_row(n, k, b, one_by_k_log_negativity(&st, k)?, &format!("1x{k}"))))
        .collect()
}

/// Integer grid for the mode-count sweeps, duplicates dropped.
fn mode_counts(spec: &SweepSpec) -> CliResult<Vec<usize>> {
    let mut counts: Vec<usize> = spec.grid().iter().map(|x| x.round() as usize).collect();
    counts.dedup();
    if counts.first().is_none_or(|&n| n < 2) {
        return Err(Failure::usage("scaling needs N ≥ 2"));
    }
    Ok(counts)
}

fn scaling(spec: &SweepSpec, big_n: usize, traced: bool) -> CliResult<Rows> {
    let b = spec.fixed("b");
    let pure = fully_symmetric_pure(1 + big_n, b)?;
    let st = if traced { reduce(&pure, &(0..big_n).collect::<Vec<_>>())? } else { pure };
    let n = st.n_modes();
    Ok(vec![
        symmetric_row(n, 1, b, one_by_k_log_negativity(&st, 1)?, "1x1"),
        symmetric_row(n, big_n - 1, b, one_by_k_log_negativity(&st, big_n - 1)?, "1x(N-1)"),
    ])
}

fn blocks(spec: &SweepSpec, b: f64) -> CliResult<Rows> {
    let n = spec.fixed("n") as usize;
    let traced = spec.fixed("traced") as usize;
    let pure = fully_symmetric_pure(n, b)?;
    let mixed = fully_symmetric_mixed(n, traced, b)?;
    let mut rows = Vec::new();
    for k in 1..=n / 2 {
        rows.push(symmetric_row(n, k, b, block_log_negativity(&pure, k)?, "block-pure"));
        rows.push(symmetric_row(n, k, b, block_log_negativity(&mixed, k)?, &format!("block-traced-{traced}")));
    }
    Ok(rows)
}

fn residual(spec: &SweepSpec, a: f64) -> CliResult<Rows> {
    let a1 = spec.fixed.iter().find(|(k, _)| *k == "a1").map_or(a, |f| f.1);
    // triples outside the pure-state triangle are skipped
    Ok(match residual_contangle_pure(a1, a, a) {
        Ok(r) => {
            let mut row: Vec<String> = [a1, a, a].iter().map(|&x| sig(x)).collect();
            row.push((r.probe_mode + 1).to_string());
            row.extend([r.one_to_rest, r.pairwise[0], r.pairwise[1], r.value].iter().map(|&x| sig(x)));
            vec![row]
        }
        Err(_) => Vec::new(),
    })
}

fn ordering(base: u64, index: usize) -> CliResult<Rows> {
    let seed = base.wrapping_add(index as u64);
    let st = StateSampler::default().state(2, &mut rng_from_seed(seed));
    let en = log_negativity(st.cm(), &Bipartition::new(vec![0], vec![1])?)?;
    let gef = gaussian_eof(st.cm())?;
    let lower = if en > 0.0 { h_function((-en).exp()) } else { 0.0 };
    Ok(vec![vec![seed.to_string(), index.to_string(), sig(en), sig(gef), sig(lower)]])
}

fn collect(chunks: Vec<CliResult<Rows>>) -> CliResult<Rows> {
    let mut rows = Vec::new();
    for c in chunks {
        rows.extend(c?);
    }
    Ok(rows)
}

pub fn build(args: &SweepArgs) -> CliResult<(SweepSpec, Table)> {
    let spec = spec_for(args);
    if args.kind == SweepKind::Ordering && args.samples == 0 {
        return Err(Failure::usage("need at least one sample"));
    }
    if args.kind != SweepKind::Ordering {
        spec.validate()?;
    }
    let grid = spec.grid();
    let table = match args.kind {
        SweepKind::Hierarchy | SweepKind::Blocks => {
            let f = if args.kind == SweepKind::Hierarchy { hierarchy } else { blocks };
            let mut t = Table::new(SYMMETRIC_HEADER);
            t.rows = collect(grid.par_iter().map(|&b| f(&spec, b)).collect())?;
            t
        }
        SweepKind::Scaling | SweepKind::ScalingMixed => {
            let traced = args.kind == SweepKind::ScalingMixed;
            let mut t = Table::new(SYMMETRIC_HEADER);
            let counts = mode_counts(&spec)?;
            t.rows = collect(counts.par_iter().map(|&n| scaling(&spec, n, traced)).collect())?;
            t
        }
        SweepKind::Residual => {
            let mut t = Table::new([
                "a1",
                "a2",
                "a3",
                "probe",
                "one_to_rest",
                "pairwise_j",
                "pairwise_k",
                "residual",
            ]);
            t.rows = collect(grid.par_iter().map(|&a| residual(&spec, a)).collect())?;
            t
        }
        SweepKind::Ordering => {
            let mut t = Table::new(["seed", "index", "E_N", "G_EF", "symmetric_lower"]);
            t.rows = collect((0..args.samples).into_par_iter().map(|i| ordering(args.seed, i)).collect())?;
            t
        }
    };
    Ok((spec, table))
}

/// Ordering rows with G_EF under the symmetric-state curve by more than 1e-7.
fn below_boundary(table: &Table) -> usize {
    let num = |s: &str| s.parse::<f64>().unwrap_or(f64::NAN);
    table.rows.iter().filter(|r| num(&r[3]) < num(&r[4]) - 1e-7).count()
}

pub fn run(args: &SweepArgs) -> CliResult<()> {
    let (spec, table) = build(args)?;
    table.write(spec.out.as_ref())?;
    let violations = if args.kind == SweepKind::Ordering { below_boundary(&table) } else { 0 };
    let fixed: serde_json::Map<String, serde_json::Value> =
        spec.fixed.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let report = json!({
        "command": command_echo(),
        "kind": args.kind.to_possible_value().expect("named").get_name(),
        "parameter": spec.parameter,
        "range": [spec.start, spec.stop, spec.steps],
        "fixed": fixed,
        "seed": args.seed,
        "rows": table.rows.len(),
        "violations": violations,
    });
    eprintln!("{}", serde_json::to_string_pretty(&report).expect("plain json values"));
    Ok(())
}
