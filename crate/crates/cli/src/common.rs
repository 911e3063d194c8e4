use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use gaussent::Error;

/// Environment variable that overrides every default tolerance.
pub const TOL_ENV: &str = "GAUSSENT_TOL";

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_UNPHYSICAL: u8 = 2;
pub const EXIT_PARTITION: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;
pub const EXIT_VIOLATION: u8 = 5;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn unphysical() -> Self {
        Self {
            code: EXIT_UNPHYSICAL,
            message: "not a physical covariance matrix".into(),
        }
    }

    pub fn partition(message: impl fmt::Display) -> Self {
        Self {
            code: EXIT_PARTITION,
            message: format!("bad partition: {message}"),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Numeric(_) => EXIT_NUMERIC,
            Error::InvalidArgument(_) | Error::Domain(_) => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::usage(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self::usage(format!("csv error: {e}"))
    }
}

pub type CliResult<T> = Result<T, Failure>;

/// `--tol` beats the environment variable, which beats `default`.
pub fn tolerance(flag: Option<f64>, default: f64) -> CliResult<f64> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("{TOL_ENV}={s:?} is not a number")))?,
            Err(_) => default,
        },
    };
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure::usage(format!("tolerance must be a finite non-negative number, got {tol}")));
    }
    Ok(tol)
}

/// Twelve significant digits, `%.12g` style, trailing zeros dropped.
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    trim_zeros(&format!("{x:.*}", (11 - exp) as usize)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes to the file, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

/// A CSV table held in memory so rows come out in input order.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::usage(format!("csv error: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv of ascii cells"))
    }

    pub fn write(&self, path: Option<&PathBuf>) -> CliResult<()> {
        emit(path.map(PathBuf::as_path), &self.to_csv()?)
    }
}

/// The command line as typed, for reports.
pub fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}
