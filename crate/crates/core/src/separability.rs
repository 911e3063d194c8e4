//! Partial transposition, PPT tests and negativities; two-mode standard
//! forms, their invariants, extremal states at fixed purities and the
//! purity-based classification of two-mode states.

use std::fmt;

use nalgebra::{DMatrix, Matrix2};

use crate::error::{domain, invalid, numeric, Result};
use crate::state::{self, CovMatrix, GaussianState};
use crate::symplectic::{spectrum_of, SymplecticSpectrum};

/// Two disjoint, non-empty groups of mode indices (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    pub fn new(side_a: Vec<usize>, side_b: Vec<usize>) -> Result<Self> {
        if side_a.is_empty() || side_b.is_empty() {
            return invalid("both sides of a bipartition must be non-empty");
        }
        let mut all: Vec<usize> = side_a.iter().chain(&side_b).copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return invalid("bipartition sides overlap or repeat a mode");
        }
        Ok(Self { side_a, side_b })
    }

    /// `modes` in A, every other mode of an `n`-mode system in B.
    pub fn split(side_a: Vec<usize>, n: usize) -> Result<Self> {
        let side_b = (0..n).filter(|m| !side_a.contains(m)).collect();
        Self::new(side_a, side_b)
    }

    /// Parses the 1-based form `1,2|3`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.split('|');
        let (a, b) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return invalid(format!("partition {text:?} must look like 1,2|3")),
        };
        let side = |s: &str| -> Result<Vec<usize>> {
            s.split(',')
                .map(|t| match t.trim().parse::<usize>() {
                    Ok(k) if k >= 1 => Ok(k - 1),
                    _ => invalid(format!("bad mode label {t:?} in partition {text:?}")),
                })
                .collect()
        };
        Self::new(side(a)?, side(b)?)
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn check(&self, n_modes: usize) -> Result<()> {
        match self.side_a.iter().chain(&self.side_b).find(|&&m| m >= n_modes) {
            Some(m) => invalid(format!("mode {} not present in a {n_modes}-mode state", m + 1)),
            None => Ok(()),
        }
    }

    pub fn covers(&self, n_modes: usize) -> bool {
        self.side_a.len() + self.side_b.len() == n_modes
    }

    /// A's modes followed by B's.
    pub fn modes(&self) -> Vec<usize> {
        self.side_a.iter().chain(&self.side_b).copied().collect()
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|m| (m + 1).to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}|{}", join(&self.side_a), join(&self.side_b))
    }
}

fn flip_momenta(m: &mut DMatrix<f64>, modes: impl IntoIterator<Item = usize>) {
    for k in modes {
        let p = 2 * k + 1;
        m.row_mut(p).neg_mut();
        m.column_mut(p).neg_mut();
    }
}

/// θσθ with θ flipping the momenta of side A. The partition must cover
/// every mode.
pub fn partial_transpose(cm: &CovMatrix, partition: &Bipartition) -> Result<CovMatrix> {
    partition.check(cm.n_modes())?;
    if !partition.covers(cm.n_modes()) {
        return invalid("partial transpose needs a partition covering all modes");
    }
    let mut m = cm.matrix().clone();
    flip_momenta(&mut m, partition.side_a().iter().copied());
    CovMatrix::new(m)
}

/// Symplectic spectrum of the partial transpose of the reduced state on A ∪ B.
pub fn pt_spectrum(cm: &CovMatrix, partition: &Bipartition) -> Result<SymplecticSpectrum> {
    partition.check(cm.n_modes())?;
    let sub = cm.submatrix(&partition.modes())?;
    let mut m = sub.into_matrix();
    flip_momenta(&mut m, 0..partition.side_a().len());
    spectrum_of(&m)
}

pub fn pt_min_eigenvalue(cm: &CovMatrix, partition: &Bipartition) -> Result<f64> {
    Ok(pt_spectrum(cm, partition)?.min())
}

pub fn is_ppt(cm: &CovMatrix, partition: &Bipartition, tol: f64) -> Result<bool> {
    Ok(pt_min_eigenvalue(cm, partition)? >= 1.0 - tol)
}

/// ½(∏_{ν̃<1} ν̃⁻¹ − 1).
pub fn negativity(cm: &CovMatrix, partition: &Bipartition) -> Result<f64> {
    let p: f64 = pt_spectrum(cm, partition)?
        .values()
        .iter()
        .filter(|&&v| v < 1.0)
        .map(|v| 1.0 / v)
        .product();
    Ok((p - 1.0) / 2.0)
}

/// −Σ_{ν̃<1} ln ν̃.
pub fn log_negativity(cm: &CovMatrix, partition: &Bipartition) -> Result<f64> {
    Ok(log_negativity_of(&pt_spectrum(cm, partition)?))
}

pub fn log_negativity_of(pt: &SymplecticSpectrum) -> f64 {
    -pt.values().iter().filter(|&&v| v < 1.0).map(|v| v.ln()).sum::<f64>()
}

/// N = (e^{E_N} − 1)/2.
pub fn negativity_from_log_negativity(e_n: f64) -> f64 {
    (e_n.exp() - 1.0) / 2.0
}

/// Von Neumann entropy of side A of a pure state.
pub fn entropy_of_entanglement(pure: &GaussianState, partition: &Bipartition) -> Result<f64> {
    partition.check(pure.n_modes())?;
    let sp = crate::symplectic::symplectic_spectrum(pure.cm())?;
    if sp.max() > 1.0 + 1e-7 {
        return domain("entropy of entanglement needs a pure state");
    }
    state::von_neumann_entropy(&state::reduce(pure, partition.side_a())?)
}

/// h(x) = ((1+x)²/4x) ln((1+x)²/4x) − ((1−x)²/4x) ln((1−x)²/4x), h(1) = 0.
pub fn h_function(x: f64) -> f64 {
    let up = (1.0 + x).powi(2) / (4.0 * x);
    let dn = (1.0 - x).powi(2) / (4.0 * x);
    let tail = if dn > 0.0 { dn * dn.ln() } else { 0.0 };
    up * up.ln() - tail
}

/// Standard form diag(a, a, b, b) with ⟨q1 q2⟩ = c₊ and ⟨p1 p2⟩ = c₋.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeStdForm {
    pub a: f64,
    pub b: f64,
    pub c_plus: f64,
    pub c_minus: f64,
}

/// Marginal purities, global purity and seralian of a two-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeInvariants {
    pub mu1: f64,
    pub mu2: f64,
    pub mu: f64,
    pub delta: f64,
}

impl TwoModeStdForm {
    pub fn det_alpha(&self) -> f64 {
        self.a * self.a
    }

    pub fn det_beta(&self) -> f64 {
        self.b * self.b
    }

    pub fn det_gamma(&self) -> f64 {
        self.c_plus * self.c_minus
    }

    pub fn det_sigma(&self) -> f64 {
        let ab = self.a * self.b;
        (ab - self.c_plus * self.c_plus) * (ab - self.c_minus * self.c_minus)
    }

    pub fn seralian(&self) -> f64 {
        self.a * self.a + self.b * self.b + 2.0 * self.det_gamma()
    }

    pub fn invariants(&self) -> TwoModeInvariants {
        TwoModeInvariants {
            mu1: 1.0 / self.a,
            mu2: 1.0 / self.b,
            mu: 1.0 / self.det_sigma().sqrt(),
            delta: self.seralian(),
        }
    }

    /// Relabels quadratures (a local symplectic) so that c₊ ≥ |c₋|.
    pub fn canonical(&self) -> TwoModeStdForm {
        let (mut cp, mut cm) = (self.c_plus, self.c_minus);
        if cm.abs() > cp.abs() {
            std::mem::swap(&mut cp, &mut cm);
        }
        if cp < 0.0 {
            cp = -cp;
            cm = -cm;
        }
        TwoModeStdForm {
            c_plus: cp,
            c_minus: cm,
            ..*self
        }
    }

    pub fn to_cov(&self) -> CovMatrix {
        #[rustfmt::skip]
        let m = DMatrix::from_row_slice(4, 4, &[
            self.a, 0.0, self.c_plus, 0.0,
            0.0, self.a, 0.0, self.c_minus,
            self.c_plus, 0.0, self.b, 0.0,
            0.0, self.c_minus, 0.0, self.b,
        ]);
        CovMatrix::from_matrix_unchecked(m)
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.det_sigma() - 1.0).abs() <= tol
    }
}

/// c₊², c₋² as roots of t² − s t + p = 0; sign of c₋ from `det_gamma`.
fn solve_c(a: f64, b: f64, det_gamma: f64, det_sigma: f64) -> Result<(f64, f64)> {
    let ab = a * b;
    let s = (ab * ab + det_gamma * det_gamma - det_sigma) / ab;
    let p = det_gamma * det_gamma;
    let mut disc = s * s - 4.0 * p;
    let scale = (s * s).max(1.0);
    if disc < -1e-10 * scale {
        return numeric(format!("standard form discriminant {disc:e} is negative"));
    }
    disc = disc.max(0.0);
    let big = ((s + disc.sqrt()) / 2.0).max(0.0);
    let c_plus = big.sqrt();
    let c_minus = if det_gamma == 0.0 || c_plus == 0.0 {
        0.0
    } else {
        det_gamma / c_plus
    };
    Ok((c_plus, c_minus))
}

/// Standard form by local normalisation: each local block is brought to a·I by
/// √a·α^{-1/2}, then the singular values of the rescaled correlation block
/// give c₊ ≥ |c₋|, with c₋ carrying the sign of det γ.
pub fn two_mode_standard_form(cm: &CovMatrix) -> Result<TwoModeStdForm> {
    if cm.n_modes() != 2 {
        return invalid(format!("expected a two-mode state, got {} modes", cm.n_modes()));
    }
    let alpha = cm.block(0, 0);
    let beta = cm.block(1, 1);
    let det_a = alpha.determinant();
    let det_b = beta.determinant();
    if !(det_a > 0.0 && det_b > 0.0 && alpha[(0, 0)] > 0.0 && beta[(0, 0)] > 0.0) {
        return domain("local blocks are not positive definite");
    }
    let a = det_a.sqrt();
    let b = det_b.sqrt();
    let sa = inv_sqrt2(&alpha) * a.sqrt();
    let sb = inv_sqrt2(&beta) * b.sqrt();
    let g = sa * cm.block(0, 1) * sb.transpose();
    let sv = g.singular_values();
    let (s1, s2) = (sv[0].max(sv[1]), sv[0].min(sv[1]));
    let det_g = cm.block(0, 1).determinant();
    let c_minus = if det_g < 0.0 { -s2 } else { s2 };
    let sf = TwoModeStdForm {
        a,
        b,
        c_plus: s1,
        c_minus,
    };
    if !(sf.det_sigma() > 0.0) || (sf.a * sf.b - s1 * s1) < -1e-10 * sf.a * sf.b {
        return numeric("standard form is not positive definite; input is not physical");
    }
    Ok(sf)
}

fn inv_sqrt2(m: &Matrix2<f64>) -> Matrix2<f64> {
    // closed form for a 2×2 SPD matrix: √M = (M + √det·I)/√(tr + 2√det)
    let sd = m.determinant().sqrt();
    let t = (m.trace() + 2.0 * sd).sqrt();
    let root = (m + Matrix2::identity() * sd) / t;
    root.try_inverse().expect("positive definite block")
}

/// (ν̃₋, ν̃₊) from 2ν̃∓² = Δ̃ ∓ √(Δ̃² − 4 det σ), Δ̃ = Δ − 4 det γ.
pub fn pt_symplectic_pair(sf: &TwoModeStdForm) -> Result<(f64, f64)> {
    let dt = sf.seralian() - 4.0 * sf.det_gamma();
    let det = sf.det_sigma();
    let rad = dt * dt - 4.0 * det;
    if rad < -1e-10 * (dt * dt).max(1.0) {
        return numeric(format!("partial-transpose radicand {rad:e} is negative"));
    }
    let r = rad.max(0.0).sqrt();
    let minus = ((dt - r) / 2.0).max(0.0).sqrt();
    // product of the pair is √det σ; use it for the small root when it is tiny
    let plus = ((dt + r) / 2.0).sqrt();
    let minus = if minus < 1e-4 * plus { det.sqrt() / plus } else { minus };
    Ok((minus, plus))
}

/// h(ν̃₋) for symmetric two-mode states, zero when ν̃₋ ≥ 1.
pub fn eof_symmetric(sf: &TwoModeStdForm) -> Result<f64> {
    if (sf.a - sf.b).abs() > 1e-9 {
        return domain(format!("state is not symmetric (a = {}, b = {})", sf.a, sf.b));
    }
    let (nm, _) = pt_symplectic_pair(sf)?;
    Ok(if nm >= 1.0 { 0.0 } else { h_function(nm) })
}

/// Regions of the (μ₁, μ₂, μ) purity space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PurityRegion {
    UnphysicalLow,
    Separable,
    Coexistence,
    Entangled,
    UnphysicalHigh,
}

impl PurityRegion {
    pub fn as_str(&self) -> &'static str {
        match self {
            PurityRegion::UnphysicalLow => "unphysical-low",
            PurityRegion::Separable => "separable",
            PurityRegion::Coexistence => "coexistence",
            PurityRegion::Entangled => "entangled",
            PurityRegion::UnphysicalHigh => "unphysical-high",
        }
    }

    pub fn is_physical(&self) -> bool {
        !matches!(self, PurityRegion::UnphysicalLow | PurityRegion::UnphysicalHigh)
    }
}

impl fmt::Display for PurityRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_purities(mu1: f64, mu2: f64, mu: f64) -> PurityRegion {
    let p = mu1 * mu2;
    if mu < p {
        return PurityRegion::UnphysicalLow;
    }
    if mu <= p / (mu1 + mu2 - p) {
        return PurityRegion::Separable;
    }
    if mu <= p / (mu1 * mu1 + mu2 * mu2 - p * p).sqrt() {
        return PurityRegion::Coexistence;
    }
    if mu <= p / (p + (mu1 - mu2).abs()) {
        return PurityRegion::Entangled;
    }
    PurityRegion::UnphysicalHigh
}

fn physical_triple(mu1: f64, mu2: f64, mu: f64) -> Result<()> {
    for (name, v) in [("mu1", mu1), ("mu2", mu2), ("mu", mu)] {
        if !(v > 0.0 && v <= 1.0) {
            return domain(format!("{name} = {v} outside (0, 1]"));
        }
    }
    let region = classify_purities(mu1, mu2, mu);
    if !region.is_physical() {
        return domain(format!("purities ({mu1}, {mu2}, {mu}) are {region}"));
    }
    Ok(())
}

fn from_purities(mu1: f64, mu2: f64, mu: f64, delta: f64) -> Result<TwoModeStdForm> {
    let a = 1.0 / mu1;
    let b = 1.0 / mu2;
    let det_gamma = (delta - a * a - b * b) / 2.0;
    let (c_plus, c_minus) = solve_c(a, b, det_gamma, 1.0 / (mu * mu))?;
    Ok(TwoModeStdForm {
        a,
        b,
        c_plus,
        c_minus,
    })
}

/// Standard form minimising Δ at fixed purities (maximal entanglement).
pub fn gmems(mu1: f64, mu2: f64, mu: f64) -> Result<TwoModeStdForm> {
    physical_triple(mu1, mu2, mu)?;
    let d = (mu1 - mu2) / (mu1 * mu2);
    from_purities(mu1, mu2, mu, 2.0 / mu + d * d)
}

/// Standard form maximising Δ at fixed purities (minimal entanglement).
pub fn glems(mu1: f64, mu2: f64, mu: f64) -> Result<TwoModeStdForm> {
    physical_triple(mu1, mu2, mu)?;
    from_purities(mu1, mu2, mu, glems_delta(mu1, mu2, mu))
}

fn glems_delta(mu1: f64, mu2: f64, mu: f64) -> f64 {
    let s = (mu1 + mu2) / (mu1 * mu2);
    (s * s - 2.0 / mu).min(1.0 + 1.0 / (mu * mu))
}

/// True when the GLEMS at this triple sits on the ν₋ = 1 branch.
pub fn glems_is_partial_minimum_uncertainty(mu1: f64, mu2: f64, mu: f64) -> bool {
    let s = (mu1 + mu2) / (mu1 * mu2);
    s * s - 2.0 / mu >= 1.0 + 1.0 / (mu * mu)
}

pub fn log_negativity_std(sf: &TwoModeStdForm) -> Result<f64> {
    let (nm, _) = pt_symplectic_pair(sf)?;
    Ok((-nm.ln()).max(0.0))
}

/// Mean of the GMEMS and GLEMS log-negativities at fixed purities.
pub fn average_log_negativity(mu1: f64, mu2: f64, mu: f64) -> Result<f64> {
    let hi = log_negativity_std(&gmems(mu1, mu2, mu)?)?;
    let lo = log_negativity_std(&glems(mu1, mu2, mu)?)?;
    Ok((hi + lo) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{thermal, two_mode_squeezed, vacuum};
    use crate::symplectic::{apply, phase_rotation, single_mode_squeezer, symplectic_spectrum};

    fn p12() -> Bipartition {
        Bipartition::new(vec![0], vec![1]).unwrap()
    }

    #[test]
    fn bipartition_parsing() {
        let b = Bipartition::parse("1,2|3").unwrap();
        assert_eq!(b.side_a(), &[0, 1]);
        assert_eq!(b.side_b(), &[2]);
        assert_eq!(b.to_string(), "1,2|3");
        assert!(Bipartition::parse("1|1").is_err());
        assert!(Bipartition::parse("0|1").is_err());
        assert!(Bipartition::parse("1,2").is_err());
        assert!(Bipartition::parse("|2").is_err());
    }

    #[test]
    fn pt_of_tms() {
        for r in [0.3, 1.0] {
            let t = two_mode_squeezed(r);
            let sp = pt_spectrum(t.cm(), &p12()).unwrap();
            assert!((sp.values()[0] - (-2.0 * r).exp()).abs() < 1e-10);
            assert!((sp.values()[1] - (2.0 * r).exp()).abs() < 1e-8);
            assert!((log_negativity(t.cm(), &p12()).unwrap() - 2.0 * r).abs() < 1e-10);
            let twice = partial_transpose(&partial_transpose(t.cm(), &p12()).unwrap(), &p12()).unwrap();
            assert_eq!(&twice, t.cm());
        }
        let neg = negativity(two_mode_squeezed(1.0).cm(), &p12()).unwrap();
        assert!((neg - (1f64.exp().powi(2) - 1.0) / 2.0).abs() < 1e-9);
        let v = vacuum(2).unwrap();
        assert_eq!(partial_transpose(v.cm(), &p12()).unwrap(), *v.cm());
        assert!((pt_min_eigenvalue(v.cm(), &p12()).unwrap() - 1.0).abs() < 1e-12);
        assert!(is_ppt(thermal(&[2.0, 3.0]).unwrap().cm(), &p12(), 1e-9).unwrap());
        assert!(!is_ppt(two_mode_squeezed(0.1).cm(), &p12(), 1e-9).unwrap());
    }

    #[test]
    fn negativity_log_negativity_link() {
        let t = two_mode_squeezed(0.8);
        let n = negativity(t.cm(), &p12()).unwrap();
        let e = log_negativity(t.cm(), &p12()).unwrap();
        assert!((negativity_from_log_negativity(e) - n).abs() < 1e-9);
        assert!(((1.0 + 2.0 * n).ln() - e).abs() < 1e-10);
    }

    #[test]
    fn entropy_of_entanglement_tms() {
        let r = 0.6;
        let t = two_mode_squeezed(r);
        let e = entropy_of_entanglement(&t, &p12()).unwrap();
        assert!((e - state::entropy_function((2.0 * r).cosh())).abs() < 1e-9);
        let rev = Bipartition::new(vec![1], vec![0]).unwrap();
        assert!((entropy_of_entanglement(&t, &rev).unwrap() - e).abs() < 1e-9);
        assert!(entropy_of_entanglement(&thermal(&[2.0, 1.0]).unwrap(), &p12()).is_err());
        assert!(entropy_of_entanglement(&vacuum(2).unwrap(), &p12()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn standard_form_examples() {
        let r = 0.45;
        let sf = two_mode_standard_form(two_mode_squeezed(r).cm()).unwrap();
        let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        assert!((sf.a - c).abs() < 1e-12 && (sf.b - c).abs() < 1e-12);
        assert!((sf.c_plus - s).abs() < 1e-7 && (sf.c_minus + s).abs() < 1e-7);
        let th = two_mode_standard_form(thermal(&[2.0, 3.0]).unwrap().cm()).unwrap();
        assert_eq!((th.a, th.b, th.c_plus, th.c_minus), (2.0, 3.0, 0.0, 0.0));
    }

    #[test]
    fn standard_form_invariants_under_local_maps() {
        let t = two_mode_squeezed(1.0);
        let s = phase_rotation(0.4, 0, 2)
            .unwrap()
            .compose(&single_mode_squeezer(0.7, 1, 2).unwrap())
            .unwrap()
            .compose(&phase_rotation(-1.1, 1, 2).unwrap())
            .unwrap();
        let rotated = apply(&s, t.cm()).unwrap();
        let a = two_mode_standard_form(t.cm()).unwrap().invariants();
        let b = two_mode_standard_form(&rotated).unwrap().invariants();
        for (x, y) in [(a.mu1, b.mu1), (a.mu2, b.mu2), (a.mu, b.mu), (a.delta, b.delta)] {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn pt_pair_matches_spectrum() {
        let sf = TwoModeStdForm {
            a: 2.0,
            b: 2.5,
            c_plus: 1.6,
            c_minus: -1.2,
        };
        let (nm, np) = pt_symplectic_pair(&sf).unwrap();
        let sp = pt_spectrum(&sf.to_cov(), &p12()).unwrap();
        assert!((nm - sp.values()[0]).abs() < 1e-9);
        assert!((np - sp.values()[1]).abs() < 1e-9);
    }

    #[test]
    fn h_and_symmetric_eof() {
        assert_eq!(h_function(1.0), 0.0);
        let mut prev = f64::INFINITY;
        for k in 1..100 {
            let v = h_function(k as f64 / 100.0);
            assert!(v < prev);
            prev = v;
        }
        let r = 0.5;
        let sf = two_mode_standard_form(two_mode_squeezed(r).cm()).unwrap();
        let e = eof_symmetric(&sf).unwrap();
        assert!((e - h_function((-2.0 * r).exp())).abs() < 1e-7);
        // the pure-state value is also the entropy of entanglement
        assert!((e - state::entropy_function((2.0 * r).cosh())).abs() < 1e-7);
        let asym = TwoModeStdForm {
            a: 2.0,
            b: 3.0,
            c_plus: 0.0,
            c_minus: 0.0,
        };
        assert!(eof_symmetric(&asym).is_err());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_purities(0.5, 0.5, 0.2), PurityRegion::UnphysicalLow);
        assert_eq!(classify_purities(0.5, 0.5, 0.3), PurityRegion::Separable);
        assert_eq!(classify_purities(0.5, 0.5, 1.0 / 3.0), PurityRegion::Separable);
        assert_eq!(classify_purities(0.5, 0.5, 0.36), PurityRegion::Coexistence);
        assert_eq!(classify_purities(0.5, 0.5, 0.5), PurityRegion::Entangled);
        assert_eq!(classify_purities(0.5, 0.4, 1.0), PurityRegion::UnphysicalHigh);
        assert_eq!(PurityRegion::Coexistence.as_str(), "coexistence");
    }

    #[test]
    fn extremal_states() {
        let v = gmems(1.0, 1.0, 1.0).unwrap();
        assert!((v.seralian() - 2.0).abs() < 1e-12);
        let l = glems(1.0, 1.0, 1.0).unwrap();
        assert!((l.seralian() - 2.0).abs() < 1e-12);

        let (m1, m2, mu) = (0.5, 0.5, 0.4);
        let lo = glems(m1, m2, mu).unwrap();
        assert!(glems_is_partial_minimum_uncertainty(m1, m2, mu));
        let sp = symplectic_spectrum(&lo.to_cov()).unwrap();
        assert!((sp.min() - 1.0).abs() < 1e-8);
        let hi = gmems(m1, m2, mu).unwrap();
        let inv = hi.invariants();
        assert!((inv.mu - mu).abs() < 1e-12 && (inv.mu1 - m1).abs() < 1e-12);
        assert!(log_negativity_std(&hi).unwrap() >= log_negativity_std(&lo).unwrap());
        assert!(gmems(0.5, 0.5, 0.1).is_err());
    }

    #[test]
    fn average_log_negativity_cases() {
        let r: f64 = 0.7;
        let mu1 = 1.0 / (2.0 * r).cosh();
        let avg = average_log_negativity(mu1, mu1, 1.0).unwrap();
        assert!((avg - 2.0 * r).abs() < 1e-7);
        assert_eq!(average_log_negativity(0.5, 0.5, 0.3).unwrap(), 0.0);
        assert!(average_log_negativity(0.5, 0.5, 0.1).is_err());
    }
}
