use std::path::PathBuf;

use clap::{Args, Subcommand};
use gaussent::state::{thermal, to_json, two_mode_squeezed, vacuum, GaussianState};
use gaussent::symmetric::{fully_symmetric_mixed, fully_symmetric_pure};
use gaussent::tripartite::{four_mode_promiscuous, ghzw, pure_three_mode};

use crate::common::{emit, CliResult, Failure};

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// n-mode vacuum (identity CM).
    Vacuum {
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Product of thermal modes with the given symplectic eigenvalues.
    Thermal {
        #[arg(long, value_delimiter = ',', required = true)]
        nu: Vec<f64>,
    },
    /// Two-mode squeezed vacuum.
    Tms {
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
    },
    /// Pure fully symmetric n-mode state with local mixedness b.
    FsymPure {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: f64,
    },
    /// n modes of a pure fully symmetric (n + traced)-mode state.
    FsymMixed {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        traced: usize,
        #[arg(long)]
        b: f64,
    },
    /// Pure three-mode state with local mixednesses a1,a2,a3.
    Pure3 {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<f64>,
    },
    /// Pure fully symmetric three-mode state with local mixedness a.
    Ghzw {
        #[arg(long)]
        a: f64,
    },
    /// Four-mode state from two outer squeezers (a) and a central one (s).
    FourMode {
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
    },
}

pub fn build(kind: &GenKind) -> CliResult<GaussianState> {
    let st = match kind {
        GenKind::Vacuum { n } => vacuum(*n)?,
        GenKind::Thermal { nu } => thermal(nu)?,
        GenKind::Tms { r } => {
            if !r.is_finite() {
                return Err(Failure::usage(format!("squeezing must be finite, got {r}")));
            }
            two_mode_squeezed(*r)
        }
        GenKind::FsymPure { n, b } => fully_symmetric_pure(*n, *b)?,
        GenKind::FsymMixed { n, traced, b } => fully_symmetric_mixed(*n, *traced, *b)?,
        GenKind::Pure3 { a } => match a[..] {
            [a1, a2, a3] => pure_three_mode(a1, a2, a3)?,
            _ => return Err(Failure::usage(format!("--a needs three values, got {}", a.len()))),
        },
        GenKind::Ghzw { a } => ghzw(*a)?,
        GenKind::FourMode { s, a } => four_mode_promiscuous(*s, *a)?,
    };
    Ok(st)
}

pub fn run(args: &GenArgs) -> CliResult<()> {
    let st = build(&args.kind)?;
    let mut text = to_json(&st);
    text.push('\n');
    emit(args.out.as_deref(), &text)
}
