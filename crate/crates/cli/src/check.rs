use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gaussent::measures::OneToRestOptions;
use gaussent::sample::{rng_from_seed, triangle_triple, SampleRng, StateSampler};
use gaussent::separability::{pt_min_eigenvalue, Bipartition};
use gaussent::state::{reduce, von_neumann_entropy, GaussianState};
use gaussent::symplectic::{symplectic_spectrum, williamson, RECONSTRUCTION_TOL, STRUCTURAL_TOL};
use gaussent::tripartite::{monogamy_check, pure_three_mode, residual_contangle_pure, SharingMeasure, MONOGAMY_TOL};
use gaussent::CovMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::common::{command_echo, emit, sig, tolerance, CliResult, Failure, Table, EXIT_VIOLATION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    /// Random states: spectrum ≥ 1, ∏ν² = det σ, Σν² = Δ, Williamson reconstruction.
    BonaFide,
    /// Random product states are PPT across random bipartitions.
    Ppt,
    /// Monogamy of the residual contangle (pure three-mode) or of a chosen measure.
    Monogamy,
    /// Both sides of a random pure state share their non-unit symplectic spectrum.
    Schmidt,
    /// Pure three-mode states: det σ = 1, Δ = 3, Δ_ij = det σ_ij + 1.
    Glems3m,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Contangle,
    Tangle,
}

impl From<MeasureArg> for SharingMeasure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Contangle => SharingMeasure::Contangle,
            MeasureArg::Tangle => SharingMeasure::Tangle,
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub kind: CheckKind,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Sample i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of modes per random state.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Monogamy on random mixed states through the numeric one-to-rest search.
    #[arg(long)]
    pub mixed: bool,
    /// Sharing measure for mixed monogamy runs.
    #[arg(long, value_enum, default_value = "tangle")]
    pub measure: MeasureArg,
    /// CSV with one row per sample.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV with the violating rows only.
    #[arg(long)]
    pub violations: Option<PathBuf>,
    /// Also write the run report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

struct Sample {
    row: Vec<String>,
    violation: bool,
    /// Negative slack on runs where it is only reported.
    flagged: bool,
}

struct Plan {
    kind: CheckKind,
    modes: usize,
    mixed: bool,
    measure: SharingMeasure,
    tol: f64,
}

impl Plan {
    fn new(args: &CheckArgs, tol_flag: Option<f64>) -> CliResult<Self> {
        let (default_modes, range, default_tol) = match args.kind {
            CheckKind::BonaFide => (3, 1..=8, RECONSTRUCTION_TOL),
            CheckKind::Ppt => (3, 2..=8, STRUCTURAL_TOL),
            CheckKind::Monogamy if args.mixed => (3, 3..=4, MONOGAMY_TOL),
            CheckKind::Monogamy => (3, 3..=3, MONOGAMY_TOL),
            CheckKind::Glems3m => (3, 3..=3, RECONSTRUCTION_TOL),
            CheckKind::Schmidt => (4, 2..=8, RECONSTRUCTION_TOL),
        };
        let modes = args.modes.unwrap_or(default_modes);
        if !range.contains(&modes) {
            return Err(Failure::usage(format!(
                "{} needs between {} and {} modes, got {modes}",
                kind_name(args.kind),
                range.start(),
                range.end()
            )));
        }
        if args.samples == 0 {
            return Err(Failure::usage("need at least one sample"));
        }
        Ok(Self {
            kind: args.kind,
            modes,
            mixed: args.mixed,
            measure: args.measure.into(),
            tol: tolerance(tol_flag, default_tol)?,
        })
    }

    /// Only the proven cases can fail a run: pure three-mode contangle and
    /// three-mode Gaussian tangle.
    fn enforced(&self) -> bool {
        self.kind != CheckKind::Monogamy
            || !self.mixed
            || (self.modes == 3 && self.measure == SharingMeasure::Tangle)
    }

    fn header(&self) -> Vec<String> {
        let fixed: &[&str] = match self.kind {
            CheckKind::BonaFide => &["seed", "n", "min_nu", "det_rel", "seralian_rel", "reconstruction"],
            CheckKind::Ppt => &["seed", "partition", "min_pt_nu"],
            CheckKind::Schmidt => &["seed", "partition", "entropy_a", "entropy_b", "spectrum_gap"],
            CheckKind::Glems3m => &["seed", "a1", "a2", "a3", "det_dev", "seralian_dev", "pair_dev"],
            CheckKind::Monogamy => {
                let mut h: Vec<String> = vec!["seed".into()];
                h.extend((1..=self.modes).map(|k| format!("a{k}")));
                h.extend(["lhs", "rhs", "slack"].map(String::from));
                return h;
            }
        };
        fixed.iter().map(|s| s.to_string()).collect()
    }

    fn sample(&self, seed: u64) -> CliResult<Sample> {
        let mut rng = rng_from_seed(seed);
        let sampler = StateSampler::default();
        let s = seed.to_string();
        let tol = self.tol;
        let plain = |row: Vec<String>, violation: bool| Sample { row, violation, flagged: false };
        match self.kind {
            CheckKind::BonaFide => {
                let st = sampler.state(self.modes, &mut rng);
                let cm = st.cm();
                let sp = symplectic_spectrum(cm)?;
                let det_rel = (sp.values().iter().map(|v| v * v).product::<f64>() - cm.det()).abs() / cm.det();
                let ser_rel = (sp.values().iter().map(|v| v * v).sum::<f64>() - cm.seralian()).abs() / cm.seralian();
                let (w, nu) = williamson(cm)?;
                let rec = (w.matrix().transpose() * nu.diagonal_form() * w.matrix() - cm.matrix()).amax();
                let bad = sp.min() < 1.0 - tol || det_rel > tol || ser_rel > tol || rec > tol;
                let row = vec![s, self.modes.to_string(), sig(sp.min()), sig(det_rel), sig(ser_rel), sig(rec)];
                Ok(plain(row, bad))
            }
            CheckKind::Ppt => {
                let cm = (1..self.modes).fold(sampler.state(1, &mut rng).into_cm(), |acc, _| {
                    acc.direct_sum(sampler.state(1, &mut rng).cm())
                });
                let part = random_partition(self.modes, &mut rng)?;
                let min = pt_min_eigenvalue(&cm, &part)?;
                Ok(plain(vec![s, part.to_string(), sig(min)], min < 1.0 - tol))
            }
            CheckKind::Schmidt => {
                let st = sampler.pure_state(self.modes, &mut rng);
                let part = random_partition(self.modes, &mut rng)?;
                let (ra, rb) = (reduce(&st, part.side_a())?, reduce(&st, part.side_b())?);
                let (sa, sb) = (von_neumann_entropy(&ra)?, von_neumann_entropy(&rb)?);
                let gap = spectrum_gap(&ra, &rb)?;
                let bad = gap > tol || (sa - sb).abs() > tol * sa.max(1.0);
                Ok(plain(vec![s, part.to_string(), sig(sa), sig(sb), sig(gap)], bad))
            }
            CheckKind::Glems3m => {
                let a = triangle_triple(5.0, &mut rng);
                let cm = pure_three_mode(a[0], a[1], a[2])?.into_cm();
                let det_dev = (cm.det() - 1.0).abs();
                let ser_dev = (cm.seralian() - 3.0).abs();
                let mut pair_dev: f64 = 0.0;
                for pair in [[0, 1], [0, 2], [1, 2]] {
                    let sub: CovMatrix = cm.submatrix(&pair)?;
                    pair_dev = pair_dev.max((sub.seralian() - sub.det() - 1.0).abs());
                }
                let bad = det_dev > tol || ser_dev > tol || pair_dev > tol;
                let mut row = vec![s];
                row.extend([a[0], a[1], a[2], det_dev, ser_dev, pair_dev].map(sig));
                Ok(plain(row, bad))
            }
            CheckKind::Monogamy => {
                let (a, lhs, rhs, slack) = if self.mixed {
                    let st = sampler.state(self.modes, &mut rng);
                    let rep = monogamy_check(st.cm(), self.measure, &OneToRestOptions::default())?;
                    let worst = rep
                        .entries
                        .iter()
                        .min_by(|x, y| x.slack.total_cmp(&y.slack))
                        .expect("one entry per probe");
                    let a: Vec<f64> = (0..self.modes).map(|k| st.cm().local_mixedness(k)).collect();
                    (a, worst.lhs, worst.rhs, worst.slack)
                } else {
                    let a = triangle_triple(5.0, &mut rng);
                    let r = residual_contangle_pure(a[0], a[1], a[2])?;
                    (a.to_vec(), r.one_to_rest, r.pairwise[0] + r.pairwise[1], r.value)
                };
                let negative = slack < -tol;
                let mut row = vec![s];
                row.extend(a.into_iter().chain([lhs, rhs, slack]).map(sig));
                Ok(Sample {
                    row,
                    violation: negative && self.enforced(),
                    flagged: negative && !self.enforced(),
                })
            }
        }
    }
}

fn kind_name(kind: CheckKind) -> String {
    kind.to_possible_value().expect("named").get_name().to_string()
}

/// Random bipartition with both sides non-empty.
fn random_partition(n: usize, rng: &mut SampleRng) -> CliResult<Bipartition> {
    let mask: u32 = rng.random_range(1..(1u32 << n) - 1);
    Ok(Bipartition::split((0..n).filter(|i| mask >> i & 1 == 1).collect(), n)?)
}

/// Largest mismatch between the two sorted spectra, unit entries padded,
/// relative to the largest eigenvalue.
fn spectrum_gap(a: &GaussianState, b: &GaussianState) -> CliResult<f64> {
    let sorted = |st: &GaussianState| -> CliResult<Vec<f64>> {
        let mut v = symplectic_spectrum(st.cm())?.values().to_vec();
        v.sort_by(|x, y| y.total_cmp(x));
        Ok(v)
    };
    let (mut x, mut y) = (sorted(a)?, sorted(b)?);
    let len = x.len().max(y.len());
    x.resize(len, 1.0);
    y.resize(len, 1.0);
    let scale = x[0].max(y[0]);
    Ok(x.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) / scale)
}

pub fn run(args: &CheckArgs, tol_flag: Option<f64>) -> CliResult<u8> {
    let plan = Plan::new(args, tol_flag)?;
    let results: Vec<CliResult<Sample>> = (0..args.samples)
        .into_par_iter()
        .map(|i| plan.sample(args.seed.wrapping_add(i as u64)))
        .collect();
    let mut all = Table::new(plan.header());
    let mut bad = Table::new(plan.header());
    let (mut violations, mut flagged) = (0, 0);
    for r in results {
        let sample = r?;
        violations += usize::from(sample.violation);
        flagged += usize::from(sample.flagged);
        if sample.violation || sample.flagged {
            bad.rows.push(sample.row.clone());
        }
        all.rows.push(sample.row);
    }
    if let Some(path) = &args.out {
        all.write(Some(path))?;
    }
    if let Some(path) = &args.violations {
        bad.write(Some(path))?;
    }
    let report = json!({
        "command": command_echo(),
        "kind": kind_name(args.kind),
        "seed": args.seed,
        "samples": args.samples,
        "modes": plan.modes,
        "measure": (args.kind == CheckKind::Monogamy).then(|| {
            if args.mixed { plan.measure.as_str() } else { "contangle" }
        }),
        "tolerance": plan.tol,
        "tolerances": {
            "structural": STRUCTURAL_TOL,
            "reconstruction": RECONSTRUCTION_TOL,
            "monogamy": MONOGAMY_TOL,
        },
        "version": env!("CARGO_PKG_VERSION"),
        "rows": all.rows.len(),
        "violations": violations,
        "enforced": plan.enforced(),
        "unenforced_negative_slack": flagged,
        "min_slack": (args.kind == CheckKind::Monogamy).then(|| min_column(&all, all.header.len() - 1)),
    });
    let text = serde_json::to_string_pretty(&report).expect("plain json values") + "\n";
    if let Some(path) = &args.report {
        emit(Some(path), &text)?;
    }
    emit(None, &text)?;
    Ok(if violations > 0 { EXIT_VIOLATION } else { 0 })
}

fn min_column(table: &Table, col: usize) -> f64 {
    table
        .rows
        .iter()
        .filter_map(|r| r[col].parse::<f64>().ok())
        .fold(f64::INFINITY, f64::min)
}
