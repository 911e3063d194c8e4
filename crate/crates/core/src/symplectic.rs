//! Symplectic form, Gaussian unitary generators, symplectic spectra and the
//! Williamson normal form.
//!
//! Conventions: quadratures ordered `(q1, p1, ..., qN, pN)`, ħ = 2, so the
//! vacuum covariance matrix is the identity.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{invalid, numeric, Error, Result};
use crate::state::CovMatrix;

/// Default tolerance for structural checks (symplecticity, symmetry).
pub const STRUCTURAL_TOL: f64 = 1e-9;
/// Default tolerance for reconstruction residuals.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// The block-diagonal form Ω = ⊕ ω, ω = [[0, 1], [-1, 0]].
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n_modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

pub fn omega(n_modes: usize) -> Result<SymplecticForm> {
    if n_modes == 0 {
        return invalid("omega needs at least one mode");
    }
    Ok(SymplecticForm {
        n_modes,
        matrix: omega_matrix(n_modes),
    })
}

pub(crate) fn omega_matrix(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

/// A real 2N×2N matrix with SᵀΩS = Ω.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMap {
    n_modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticMap {
    /// Wraps `matrix` after checking SᵀΩS = Ω within `tol`.
    pub fn new(matrix: DMatrix<f64>, tol: f64) -> Result<Self> {
        if !is_symplectic(&matrix, tol)? {
            return Err(Error::Domain("matrix is not symplectic".into()));
        }
        Ok(Self::from_matrix_unchecked(matrix))
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<f64>) -> Self {
        Self {
            n_modes: matrix.nrows() / 2,
            matrix,
        }
    }

    pub fn identity(n_modes: usize) -> Self {
        Self::from_matrix_unchecked(DMatrix::identity(2 * n_modes, 2 * n_modes))
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Composition `self · other` (apply `other` first).
    pub fn compose(&self, other: &SymplecticMap) -> Result<SymplecticMap> {
        if self.n_modes != other.n_modes {
            return invalid("cannot compose maps on different numbers of modes");
        }
        Ok(Self::from_matrix_unchecked(&self.matrix * &other.matrix))
    }

    pub fn transpose(&self) -> SymplecticMap {
        Self::from_matrix_unchecked(self.matrix.transpose())
    }

    pub fn inverse(&self) -> SymplecticMap {
        // S⁻¹ = -Ω Sᵀ Ω
        let om = omega_matrix(self.n_modes);
        Self::from_matrix_unchecked(-(&om * self.matrix.transpose() * &om))
    }

    /// Direct sum acting on the modes of `self` followed by those of `other`.
    pub fn direct_sum(&self, other: &SymplecticMap) -> SymplecticMap {
        let (d1, d2) = (self.matrix.nrows(), other.matrix.nrows());
        let mut m = DMatrix::zeros(d1 + d2, d1 + d2);
        m.view_mut((0, 0), (d1, d1)).copy_from(&self.matrix);
        m.view_mut((d1, d1), (d2, d2)).copy_from(&other.matrix);
        Self::from_matrix_unchecked(m)
    }
}

/// Ascending symplectic eigenvalues ν₁ ≤ … ≤ ν_N.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum {
    values: Vec<f64>,
}

impl SymplecticSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn product(&self) -> f64 {
        self.values.iter().product()
    }

    /// ν repeated per quadrature: diag(ν₁, ν₁, …, ν_N, ν_N).
    pub fn diagonal_form(&self) -> DMatrix<f64> {
        let d: Vec<f64> = self.values.iter().flat_map(|&v| [v, v]).collect();
        DMatrix::from_diagonal(&DVector::from_vec(d))
    }
}

pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> Result<bool> {
    if s.nrows() != s.ncols() || s.nrows() % 2 != 0 || s.nrows() == 0 {
        return invalid(format!(
            "expected a square even-dimensional matrix, got {}x{}",
            s.nrows(),
            s.ncols()
        ));
    }
    let om = omega_matrix(s.nrows() / 2);
    let r = s.transpose() * &om * s - om;
    Ok(r.amax() <= tol)
}

/// Square root and inverse square root of a symmetric positive definite matrix.
pub(crate) fn spd_sqrt(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let eig = m.clone().symmetric_eigen();
    let scale = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
    if eig.eigenvalues.iter().any(|&l| !(l > 1e-14 * scale)) {
        return Err(Error::Domain("matrix is not positive definite".into()));
    }
    let q = &eig.eigenvectors;
    let sq = DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|l| l.sqrt()));
    let isq = sq.map(|x| 1.0 / x);
    let root = q * DMatrix::from_diagonal(&sq) * q.transpose();
    let iroot = q * DMatrix::from_diagonal(&isq) * q.transpose();
    Ok((symmetrize(&root), symmetrize(&iroot)))
}

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Spectrum plus the orthogonal O with Oᵀ K O = ⊕ ν_k ω, K = σ^{1/2} Ω σ^{1/2}.
struct Canonical {
    nu: Vec<f64>,
    o: DMatrix<f64>,
    sqrt: DMatrix<f64>,
}

fn canonical(m: &DMatrix<f64>, want_frame: bool) -> Result<Canonical> {
    let n = m.nrows() / 2;
    let (sqrt, _) = spd_sqrt(m)?;
    let k = &sqrt * omega_matrix(n) * &sqrt;
    // iK is Hermitian with eigenvalues ±ν_k.
    let h = DMatrix::from_fn(2 * n, 2 * n, |r, c| Complex::new(0.0, k[(r, c)]));
    let eig = if want_frame {
        h.symmetric_eigen()
    } else {
        let vals = h.symmetric_eigenvalues();
        let mut nu: Vec<f64> = vals.iter().copied().filter(|v| *v > 0.0).collect();
        if nu.len() != n {
            return numeric("symplectic spectrum: eigenvalue pairs could not be matched");
        }
        nu.sort_by(|a, b| a.total_cmp(b));
        return Ok(Canonical {
            nu,
            o: DMatrix::zeros(0, 0),
            sqrt,
        });
    };
    let mut idx: Vec<usize> = (0..2 * n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let pos = &idx[n..];
    let mut nu = Vec::with_capacity(n);
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    let r2 = std::f64::consts::SQRT_2;
    for (slot, &j) in pos.iter().enumerate() {
        let v = eig.eigenvalues[j];
        if !(v > 0.0) {
            return numeric("symplectic spectrum: non-positive eigenvalue in the upper half");
        }
        nu.push(v);
        let u = eig.eigenvectors.column(j);
        for r in 0..2 * n {
            o[(r, 2 * slot)] = r2 * u[r].im;
            o[(r, 2 * slot + 1)] = r2 * u[r].re;
        }
    }
    Ok(Canonical { nu, o, sqrt })
}

/// Symplectic eigenvalues of a positive definite covariance matrix, ascending.
pub fn symplectic_spectrum(cm: &CovMatrix) -> Result<SymplecticSpectrum> {
    spectrum_of(cm.matrix())
}

pub(crate) fn spectrum_of(m: &DMatrix<f64>) -> Result<SymplecticSpectrum> {
    let c = canonical(m, false)?;
    Ok(SymplecticSpectrum { values: c.nu })
}

/// Williamson decomposition σ = Sᵀ ν S with ν = ⊕ diag(ν_k, ν_k).
pub fn williamson(cm: &CovMatrix) -> Result<(SymplecticMap, SymplecticSpectrum)> {
    let m = cm.matrix();
    let c = canonical(m, true)?;
    let n = c.nu.len();
    let inv_sqrt_nu = DMatrix::from_diagonal(&DVector::from_iterator(
        2 * n,
        c.nu.iter().flat_map(|&v| {
            let s = 1.0 / v.sqrt();
            [s, s]
        }),
    ));
    let s = inv_sqrt_nu * c.o.transpose() * &c.sqrt;

    // Canonical order may differ from ascending when values coincide; sort blocks.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| c.nu[a].total_cmp(&c.nu[b]));
    let mut s_sorted = DMatrix::zeros(2 * n, 2 * n);
    for (dst, &src) in order.iter().enumerate() {
        s_sorted.row_mut(2 * dst).copy_from(&s.row(2 * src));
        s_sorted.row_mut(2 * dst + 1).copy_from(&s.row(2 * src + 1));
    }
    let spectrum = SymplecticSpectrum {
        values: order.iter().map(|&i| c.nu[i]).collect(),
    };

    let scale = m.amax().max(1.0);
    let resid = (s_sorted.transpose() * spectrum.diagonal_form() * &s_sorted - m).amax();
    if resid > RECONSTRUCTION_TOL * scale {
        return numeric(format!("williamson reconstruction residual {resid:e}"));
    }
    let om = omega_matrix(n);
    let sresid = (s_sorted.transpose() * &om * &s_sorted - &om).amax();
    if sresid > RECONSTRUCTION_TOL * scale {
        return numeric(format!("williamson symplecticity residual {sresid:e}"));
    }
    Ok((SymplecticMap::from_matrix_unchecked(s_sorted), spectrum))
}

fn check_pair(i: usize, j: usize, n: usize) -> Result<()> {
    if i == j {
        return invalid("mode indices must differ");
    }
    if i >= n || j >= n {
        return invalid(format!("mode index out of range for {n} modes"));
    }
    Ok(())
}

fn embed_pair(block: [[f64; 4]; 4], i: usize, j: usize, n: usize) -> SymplecticMap {
    let mut m = DMatrix::identity(2 * n, 2 * n);
    let idx = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1];
    for (r, &gr) in idx.iter().enumerate() {
        for (c, &gc) in idx.iter().enumerate() {
            m[(gr, gc)] = block[r][c];
        }
    }
    SymplecticMap::from_matrix_unchecked(m)
}

pub fn two_mode_squeezer(r: f64, i: usize, j: usize, n: usize) -> Result<SymplecticMap> {
    check_pair(i, j, n)?;
    let (ch, sh) = (r.cosh(), r.sinh());
    Ok(embed_pair(
        [
            [ch, 0.0, sh, 0.0],
            [0.0, ch, 0.0, -sh],
            [sh, 0.0, ch, 0.0],
            [0.0, -sh, 0.0, ch],
        ],
        i,
        j,
        n,
    ))
}

pub fn beam_splitter(tau: f64, i: usize, j: usize, n: usize) -> Result<SymplecticMap> {
    if !(0.0..=1.0).contains(&tau) {
        return invalid(format!("transmittivity {tau} outside [0, 1]"));
    }
    check_pair(i, j, n)?;
    let (t, s) = (tau.sqrt(), (1.0 - tau).sqrt());
    Ok(embed_pair(
        [
            [t, 0.0, s, 0.0],
            [0.0, t, 0.0, s],
            [s, 0.0, -t, 0.0],
            [0.0, s, 0.0, -t],
        ],
        i,
        j,
        n,
    ))
}

pub fn single_mode_squeezer(r: f64, j: usize, n: usize) -> Result<SymplecticMap> {
    if j >= n {
        return invalid(format!("mode index {j} out of range for {n} modes"));
    }
    let mut m = DMatrix::identity(2 * n, 2 * n);
    m[(2 * j, 2 * j)] = r.exp();
    m[(2 * j + 1, 2 * j + 1)] = (-r).exp();
    Ok(SymplecticMap::from_matrix_unchecked(m))
}

/// Phase-space rotation by `phi` on mode `j`.
pub fn phase_rotation(phi: f64, j: usize, n: usize) -> Result<SymplecticMap> {
    if j >= n {
        return invalid(format!("mode index {j} out of range for {n} modes"));
    }
    let (c, s) = (phi.cos(), phi.sin());
    let mut m = DMatrix::identity(2 * n, 2 * n);
    m[(2 * j, 2 * j)] = c;
    m[(2 * j, 2 * j + 1)] = s;
    m[(2 * j + 1, 2 * j)] = -s;
    m[(2 * j + 1, 2 * j + 1)] = c;
    Ok(SymplecticMap::from_matrix_unchecked(m))
}

/// S σ Sᵀ, symmetrised.
pub fn apply(s: &SymplecticMap, cm: &CovMatrix) -> Result<CovMatrix> {
    if s.n_modes() != cm.n_modes() {
        return invalid(format!(
            "map acts on {} modes, covariance matrix has {}",
            s.n_modes(),
            cm.n_modes()
        ));
    }
    let m = s.matrix() * cm.matrix() * s.matrix().transpose();
    Ok(CovMatrix::from_matrix_unchecked(symmetrize(&m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{thermal, two_mode_squeezed};

    #[test]
    fn omega_blocks() {
        let w = omega(1).unwrap();
        assert_eq!(w.matrix(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        let w3 = omega(3).unwrap();
        let sq = w3.matrix() * w3.matrix();
        assert_eq!(sq, -DMatrix::<f64>::identity(6, 6));
        assert!(omega(0).is_err());
    }

    #[test]
    fn symplectic_checks() {
        assert!(is_symplectic(&DMatrix::identity(4, 4), 1e-12).unwrap());
        let s = two_mode_squeezer(0.7, 0, 1, 2).unwrap();
        assert!(is_symplectic(s.matrix(), 1e-12).unwrap());
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 2.0, 1.0, 1.0]));
        assert!(!is_symplectic(&d, 1e-9).unwrap());
        assert!(is_symplectic(&DMatrix::identity(3, 3), 1e-9).is_err());
    }

    #[test]
    fn squeezer_entries_and_inverse() {
        let s = two_mode_squeezer(1.0, 0, 1, 2).unwrap();
        let m = s.matrix();
        assert!((m[(0, 0)] - 1.0f64.cosh()).abs() < 1e-15);
        assert!((m[(0, 2)] - 1.0f64.sinh()).abs() < 1e-15);
        assert!((m[(1, 3)] + 1.0f64.sinh()).abs() < 1e-15);
        let back = two_mode_squeezer(-1.0, 0, 1, 2).unwrap();
        let id = s.compose(&back).unwrap();
        assert!((id.matrix() - DMatrix::<f64>::identity(4, 4)).amax() < 1e-14);
        assert!(two_mode_squeezer(1.0, 1, 1, 2).is_err());
    }

    #[test]
    fn beam_splitter_patterns() {
        let b = beam_splitter(1.0, 0, 1, 2).unwrap();
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, -1.0, -1.0]));
        assert_eq!(b.matrix(), &d);
        let h = beam_splitter(0.5, 0, 1, 2).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((h.matrix()[(0, 2)] - r).abs() < 1e-15);
        assert!((h.matrix()[(2, 2)] + r).abs() < 1e-15);
        assert!(beam_splitter(1.5, 0, 1, 2).is_err());
    }

    #[test]
    fn single_mode_squeezer_ln2() {
        let s = single_mode_squeezer(2.0f64.ln(), 1, 2).unwrap();
        assert!((s.matrix()[(2, 2)] - 2.0).abs() < 1e-15);
        assert!((s.matrix()[(3, 3)] - 0.5).abs() < 1e-15);
        assert!((s.matrix().determinant() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spectra_of_known_states() {
        let tms = two_mode_squeezed(1.3);
        let sp = symplectic_spectrum(tms.cm()).unwrap();
        for v in sp.values() {
            assert!((v - 1.0).abs() < 1e-10);
        }
        let th = thermal(&[5.0, 3.0]).unwrap();
        let sp = symplectic_spectrum(th.cm()).unwrap();
        assert!((sp.values()[0] - 3.0).abs() < 1e-12);
        assert!((sp.values()[1] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn williamson_of_squeezed_thermal() {
        let th = thermal(&[2.0, 4.0]).unwrap();
        let s0 = two_mode_squeezer(0.4, 0, 1, 2)
            .unwrap()
            .compose(&beam_splitter(0.3, 0, 1, 2).unwrap())
            .unwrap()
            .compose(&single_mode_squeezer(-0.6, 1, 2).unwrap())
            .unwrap();
        let cm = apply(&s0, th.cm()).unwrap();
        let (s, nu) = williamson(&cm).unwrap();
        assert!((nu.values()[0] - 2.0).abs() < 1e-9);
        assert!((nu.values()[1] - 4.0).abs() < 1e-9);
        assert!(is_symplectic(s.matrix(), 1e-8).unwrap());
        let rec = s.matrix().transpose() * nu.diagonal_form() * s.matrix();
        assert!((rec - cm.matrix()).amax() < 1e-8);
    }

    #[test]
    fn williamson_degenerate_and_pure() {
        let tms = two_mode_squeezed(0.9);
        let (s, nu) = williamson(tms.cm()).unwrap();
        assert!(nu.values().iter().all(|v| (v - 1.0).abs() < 1e-10));
        let rec = s.matrix().transpose() * s.matrix();
        assert!((rec - tms.cm().matrix()).amax() < 1e-8);
    }

    #[test]
    fn inverse_is_inverse() {
        let s = two_mode_squeezer(0.3, 0, 1, 2)
            .unwrap()
            .compose(&phase_rotation(0.8, 1, 2).unwrap())
            .unwrap();
        let p = s.matrix() * s.inverse().matrix();
        assert!((p - DMatrix::<f64>::identity(4, 4)).amax() < 1e-13);
    }
}
