use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gaussent::measures::{
    contangle_of_m_squared, eof_of_m_squared, m_squared_across, tangle_of_m_squared, OneToRestOptions,
};
use gaussent::separability::{eof_symmetric, log_negativity, negativity, pt_spectrum, two_mode_standard_form, Bipartition};
use gaussent::state::{cm_from_json, linear_entropy, purity, reduce, von_neumann_entropy, GaussianState};
use gaussent::symplectic::{symplectic_spectrum, STRUCTURAL_TOL};
use gaussent::tripartite::{residual_contangle_generic, residual_contangle_pure, SharingMeasure};
use gaussent::Error;
use serde_json::json;

use crate::common::{emit, read_input, sig, tolerance, CliResult, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureKind {
    LogNegativity,
    Negativity,
    EofSymmetric,
    GaussianEof,
    Contangle,
    GaussianTangle,
    VonNeumann,
    Purity,
    LinearEntropy,
    ResidualContangle,
    ResidualTangle,
}

impl MeasureKind {
    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// CM JSON file.
    pub file: PathBuf,
    #[arg(long, value_enum)]
    pub measure: MeasureKind,
    /// 1-based modes, e.g. `1,2|3`. Defaults to the first mode against the rest.
    /// Entropies use the marginal of the left side when a partition is given.
    #[arg(long)]
    pub partition: Option<String>,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Print the JSON report instead of the bare value.
    #[arg(long)]
    pub json: bool,
}

pub struct Evaluation {
    pub value: f64,
    pub method: &'static str,
}

fn load(args: &MeasureArgs, tol: f64) -> CliResult<GaussianState> {
    let (cm, mean) = cm_from_json(&read_input(&args.file)?)?;
    GaussianState::with_tolerance(cm, mean, tol).map_err(|e| match e {
        Error::Domain(_) => Failure::unphysical(),
        other => other.into(),
    })
}

fn partition_for(text: Option<&str>, n: usize) -> CliResult<Option<Bipartition>> {
    let part = match text {
        Some(t) => Bipartition::parse(t).map_err(Failure::partition)?,
        None if n >= 2 => Bipartition::split(vec![0], n)?,
        None => return Ok(None),
    };
    part.check(n).map_err(Failure::partition)?;
    Ok(Some(part))
}

fn require(part: Option<&Bipartition>) -> CliResult<&Bipartition> {
    part.ok_or_else(|| Failure::partition("a single-mode state has no bipartition"))
}

fn gaussian_m_squared(st: &GaussianState, part: &Bipartition) -> CliResult<(f64, &'static str)> {
    let method = match (part.side_a().len(), part.side_b().len()) {
        (1, 1) => "two-mode",
        (1, _) | (_, 1) => "one-to-rest",
        _ => return Err(Failure::partition("Gaussian measures need one side with a single mode")),
    };
    Ok((m_squared_across(st.cm(), part, &OneToRestOptions::default())?, method))
}

fn marginal(st: &GaussianState, part: Option<&Bipartition>, explicit: bool) -> CliResult<GaussianState> {
    match part {
        Some(p) if explicit => Ok(reduce(st, p.side_a())?),
        _ => Ok(st.clone()),
    }
}

fn residual(st: &GaussianState, measure: SharingMeasure, tol: f64) -> CliResult<Evaluation> {
    if st.n_modes() != 3 {
        return Err(Failure::usage(format!(
            "residual sharing needs a three-mode state, got {} modes",
            st.n_modes()
        )));
    }
    let pure = symplectic_spectrum(st.cm())?.max() <= 1.0 + tol.max(STRUCTURAL_TOL);
    if measure == SharingMeasure::Contangle && pure {
        let a = [0, 1, 2].map(|k| st.cm().local_mixedness(k));
        if let Ok(r) = residual_contangle_pure(a[0], a[1], a[2]) {
            return Ok(Evaluation { value: r.value, method: "pure-closed-form" });
        }
    }
    let r = residual_contangle_generic(st.cm(), measure, &OneToRestOptions::default())?;
    Ok(Evaluation { value: r.value, method: "one-to-rest" })
}

pub fn evaluate(
    st: &GaussianState,
    kind: MeasureKind,
    part: Option<&Bipartition>,
    explicit: bool,
    tol: f64,
) -> CliResult<Evaluation> {
    let direct = |value| Evaluation { value, method: "direct" };
    let ev = match kind {
        MeasureKind::LogNegativity => direct(log_negativity(st.cm(), require(part)?)?),
        MeasureKind::Negativity => direct(negativity(st.cm(), require(part)?)?),
        MeasureKind::EofSymmetric => {
            let part = require(part)?;
            let (&[a], &[b]) = (part.side_a(), part.side_b()) else {
                return Err(Failure::partition("eof-symmetric needs a 1|1 partition"));
            };
            let sf = two_mode_standard_form(&st.cm().submatrix(&[a, b])?)?;
            direct(eof_symmetric(&sf)?)
        }
        MeasureKind::GaussianEof | MeasureKind::Contangle | MeasureKind::GaussianTangle => {
            let (m2, method) = gaussian_m_squared(st, require(part)?)?;
            let value = match kind {
                MeasureKind::GaussianEof => eof_of_m_squared(m2),
                MeasureKind::Contangle => contangle_of_m_squared(m2),
                _ => tangle_of_m_squared(m2),
            };
            Evaluation { value, method }
        }
        MeasureKind::VonNeumann => direct(von_neumann_entropy(&marginal(st, part, explicit)?)?),
        MeasureKind::Purity => direct(purity(&marginal(st, part, explicit)?)?),
        MeasureKind::LinearEntropy => direct(linear_entropy(&marginal(st, part, explicit)?)?),
        MeasureKind::ResidualContangle => residual(st, SharingMeasure::Contangle, tol)?,
        MeasureKind::ResidualTangle => residual(st, SharingMeasure::Tangle, tol)?,
    };
    if !ev.value.is_finite() {
        return Err(Error::Numeric(format!("{} evaluated to {}", kind.name(), ev.value)).into());
    }
    Ok(ev)
}

pub fn run(args: &MeasureArgs, tol_flag: Option<f64>) -> CliResult<()> {
    let tol = tolerance(tol_flag, STRUCTURAL_TOL)?;
    let st = load(args, tol)?;
    let part = partition_for(args.partition.as_deref(), st.n_modes())?;
    let ev = evaluate(&st, args.measure, part.as_ref(), args.partition.is_some(), tol)?;

    let pt = match &part {
        Some(p) => Some(pt_spectrum(st.cm(), p)?.values().to_vec()),
        None => None,
    };
    let report = json!({
        "file": args.file.display().to_string(),
        "measure": args.measure.name(),
        "value": ev.value,
        "printed": sig(ev.value),
        "method": ev.method,
        "n_modes": st.n_modes(),
        "partition": part.as_ref().map(ToString::to_string),
        "pt_spectrum": pt,
        "symplectic_spectrum": symplectic_spectrum(st.cm())?.values(),
        "tolerance": tol,
    });
    let report = serde_json::to_string_pretty(&report).expect("plain json values") + "\n";
    if let Some(path) = &args.report {
        emit(Some(path), &report)?;
    }
    if args.json {
        emit(None, &report)
    } else {
        emit(None, &format!("{}\n", sig(ev.value)))
    }
}
