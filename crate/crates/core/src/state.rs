//! Gaussian states: covariance matrices, standard constructors, reduction and
//! entropic quantities.

use nalgebra::{DMatrix, DVector, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, numeric, Error, Result};
use crate::symplectic::{self, spd_sqrt, symmetrize, SymplecticSpectrum};

/// Real symmetric 2N×2N covariance matrix in xpxp ordering, units of vacuum noise.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix {
    n_modes: usize,
    matrix: DMatrix<f64>,
}

impl CovMatrix {
    /// Accepts a square even-dimensional matrix that is symmetric within
    /// 1e-9 (relative to its largest entry) and symmetrises it.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c || r == 0 || r % 2 != 0 {
            return invalid(format!("covariance matrix must be 2N×2N, got {r}×{c}"));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return invalid("covariance matrix has non-finite entries");
        }
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > 1e-9 * matrix.amax().max(1.0) {
            return invalid(format!("covariance matrix is not symmetric (deviation {asym:e})"));
        }
        Ok(Self::from_matrix_unchecked(symmetrize(&matrix)))
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<f64>) -> Self {
        Self {
            n_modes: matrix.nrows() / 2,
            matrix,
        }
    }

    pub fn from_row_slice(dim: usize, data: &[f64]) -> Result<Self> {
        if data.len() != dim * dim {
            return invalid("row data does not match the requested dimension");
        }
        Self::new(DMatrix::from_row_slice(dim, dim, data))
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// The 2×2 block between modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> Matrix2<f64> {
        let v = self.matrix.fixed_view::<2, 2>(2 * i, 2 * j);
        Matrix2::new(v[(0, 0)], v[(0, 1)], v[(1, 0)], v[(1, 1)])
    }

    pub fn det(&self) -> f64 {
        self.matrix.determinant()
    }

    /// Σ_k det σ_k + 2 Σ_{i<j} det ε_ij, which equals Σ ν_k².
    pub fn seralian(&self) -> f64 {
        let n = self.n_modes;
        let mut d = 0.0;
        for i in 0..n {
            d += self.block(i, i).determinant();
            for j in i + 1..n {
                d += 2.0 * self.block(i, j).determinant();
            }
        }
        d
    }

    /// Local symplectic invariant a_k = √det σ_k of mode `k`.
    pub fn local_mixedness(&self, k: usize) -> f64 {
        self.block(k, k).determinant().max(0.0).sqrt()
    }

    pub fn direct_sum(&self, other: &CovMatrix) -> CovMatrix {
        let (d1, d2) = (self.matrix.nrows(), other.matrix.nrows());
        let mut m = DMatrix::zeros(d1 + d2, d1 + d2);
        m.view_mut((0, 0), (d1, d1)).copy_from(&self.matrix);
        m.view_mut((d1, d1), (d2, d2)).copy_from(&other.matrix);
        Self::from_matrix_unchecked(m)
    }

    /// Rows and columns of `modes`, in the given order.
    pub fn submatrix(&self, modes: &[usize]) -> Result<CovMatrix> {
        check_modes(modes, self.n_modes)?;
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let k = idx.len();
        let m = DMatrix::from_fn(k, k, |r, c| self.matrix[(idx[r], idx[c])]);
        Ok(Self::from_matrix_unchecked(m))
    }
}

fn check_modes(modes: &[usize], n: usize) -> Result<()> {
    if modes.is_empty() {
        return invalid("mode set is empty");
    }
    let mut seen = vec![false; n];
    for &m in modes {
        if m >= n {
            return invalid(format!("mode index {m} out of range for {n} modes"));
        }
        if seen[m] {
            return invalid(format!("mode index {m} repeated"));
        }
        seen[m] = true;
    }
    Ok(())
}

/// A Gaussian state: bona fide covariance matrix plus first moments.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    cm: CovMatrix,
    mean: DVector<f64>,
}

impl GaussianState {
    /// Checks the bona fide condition at the structural tolerance.
    pub fn new(cm: CovMatrix, mean: Option<DVector<f64>>) -> Result<Self> {
        Self::with_tolerance(cm, mean, symplectic::STRUCTURAL_TOL)
    }

    pub fn with_tolerance(cm: CovMatrix, mean: Option<DVector<f64>>, tol: f64) -> Result<Self> {
        let dim = cm.matrix.nrows();
        let mean = mean.unwrap_or_else(|| DVector::zeros(dim));
        if mean.len() != dim {
            return invalid(format!("mean has length {}, expected {dim}", mean.len()));
        }
        if !is_bona_fide(&cm, tol) {
            return domain("not a physical covariance matrix");
        }
        Ok(Self { cm, mean })
    }

    pub(crate) fn from_cm_unchecked(cm: CovMatrix) -> Self {
        let dim = cm.matrix.nrows();
        Self {
            cm,
            mean: DVector::zeros(dim),
        }
    }

    pub fn cm(&self) -> &CovMatrix {
        &self.cm
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn n_modes(&self) -> usize {
        self.cm.n_modes
    }

    pub fn into_cm(self) -> CovMatrix {
        self.cm
    }
}

pub fn vacuum(n: usize) -> Result<GaussianState> {
    if n == 0 {
        return invalid("vacuum needs at least one mode");
    }
    Ok(GaussianState::from_cm_unchecked(CovMatrix::from_matrix_unchecked(
        DMatrix::identity(2 * n, 2 * n),
    )))
}

pub fn thermal(nu: &[f64]) -> Result<GaussianState> {
    if nu.is_empty() {
        return invalid("thermal state needs at least one mode");
    }
    if let Some(v) = nu.iter().find(|&&v| !(v >= 1.0)) {
        return domain(format!("symplectic eigenvalue {v} below 1"));
    }
    let d: Vec<f64> = nu.iter().flat_map(|&v| [v, v]).collect();
    Ok(GaussianState::from_cm_unchecked(CovMatrix::from_matrix_unchecked(
        DMatrix::from_diagonal(&DVector::from_vec(d)),
    )))
}

/// Mean photon numbers (ν_k − 1)/2 of a thermal spectrum.
pub fn mean_photon_numbers(nu: &[f64]) -> Vec<f64> {
    nu.iter().map(|v| (v - 1.0) / 2.0).collect()
}

pub fn two_mode_squeezed(r: f64) -> GaussianState {
    let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        c, 0.0, s, 0.0,
        0.0, c, 0.0, -s,
        s, 0.0, c, 0.0,
        0.0, -s, 0.0, c,
    ]);
    GaussianState::from_cm_unchecked(CovMatrix::from_matrix_unchecked(m))
}

/// Positive definite with all symplectic eigenvalues ≥ 1 − tol.
pub fn is_bona_fide(cm: &CovMatrix, tol: f64) -> bool {
    match symplectic::symplectic_spectrum(cm) {
        Ok(sp) => sp.min() >= 1.0 - tol,
        Err(_) => false,
    }
}

pub fn reduce(state: &GaussianState, modes: &[usize]) -> Result<GaussianState> {
    let cm = state.cm.submatrix(modes)?;
    let mean = DVector::from_iterator(
        2 * modes.len(),
        modes.iter().flat_map(|&m| [state.mean[2 * m], state.mean[2 * m + 1]]),
    );
    Ok(GaussianState { cm, mean })
}

fn spectrum(state: &GaussianState) -> Result<SymplecticSpectrum> {
    symplectic::symplectic_spectrum(&state.cm)
}

pub fn purity(state: &GaussianState) -> Result<f64> {
    Ok(1.0 / spectrum(state)?.product())
}

pub fn linear_entropy(state: &GaussianState) -> Result<f64> {
    Ok(1.0 - purity(state)?)
}

/// f(x) = ((x+1)/2) ln((x+1)/2) − ((x−1)/2) ln((x−1)/2), f(1) = 0.
pub fn entropy_function(x: f64) -> f64 {
    let up = (x + 1.0) / 2.0;
    let dn = (x - 1.0) / 2.0;
    // x ln x → 0 as x → 0⁺
    let tail = if dn > 0.0 { dn * dn.ln() } else { 0.0 };
    up * up.ln() - tail
}

/// g_p(x) = 2^p / ((x+1)^p − (x−1)^p).
pub fn g_p(x: f64, p: f64) -> f64 {
    if x - 1.0 <= 1e-12 {
        // (x−1)^p vanishes faster than the leading term for p > 1
        return (2.0 / (x + 1.0)).powf(p);
    }
    2f64.powf(p) / ((x + 1.0).powf(p) - (x - 1.0).powf(p))
}

pub fn von_neumann_entropy(state: &GaussianState) -> Result<f64> {
    Ok(spectrum(state)?.values().iter().map(|&v| entropy_function(v)).sum())
}

pub fn generalized_entropy(state: &GaussianState, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return invalid(format!("entropy order {p} must exceed 1"));
    }
    let tr: f64 = spectrum(state)?.values().iter().map(|&v| g_p(v, p)).product();
    Ok((1.0 - tr) / (p - 1.0))
}

pub fn renyi_entropy(state: &GaussianState, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return invalid(format!("entropy order {p} must exceed 1"));
    }
    let ln_tr: f64 = spectrum(state)?.values().iter().map(|&v| g_p(v, p).ln()).sum();
    Ok(ln_tr / (1.0 - p))
}

pub fn symplectic_rank(state: &GaussianState, tol: f64) -> Result<usize> {
    Ok(spectrum(state)?.values().iter().filter(|&&v| v > 1.0 + tol).count())
}

/// Wigner function e^{−ξᵀσ⁻¹ξ} / (π^N √det σ) at `point`, centred on the mean.
pub fn wigner_at(state: &GaussianState, point: &[f64]) -> Result<f64> {
    let dim = state.cm.matrix.nrows();
    if point.len() != dim {
        return invalid(format!("point has length {}, expected {dim}", point.len()));
    }
    let chol = state
        .cm
        .matrix
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numeric("singular covariance matrix".into()))?;
    let x = DVector::from_column_slice(point) - &state.mean;
    let y = chol.solve(&x);
    let q = x.dot(&y);
    let det = chol.determinant();
    if !(det > 0.0) {
        return numeric("singular covariance matrix");
    }
    let n = state.n_modes() as i32;
    Ok((-q).exp() / (std::f64::consts::PI.powi(n) * det.sqrt()))
}

/// √σ, used by callers that need a symmetric square root of a covariance matrix.
pub fn cm_sqrt(cm: &CovMatrix) -> Result<DMatrix<f64>> {
    Ok(spd_sqrt(cm.matrix())?.0)
}

#[derive(Serialize, Deserialize)]
struct CmDocument {
    n_modes: usize,
    ordering: String,
    hbar: f64,
    matrix: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mean: Option<Vec<f64>>,
}

/// Serialises to the CM JSON document format.
pub fn to_json(state: &GaussianState) -> String {
    let m = &state.cm.matrix;
    let rows = (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect();
    let mean = if state.mean.iter().all(|&x| x == 0.0) {
        None
    } else {
        Some(state.mean.iter().copied().collect())
    };
    let doc = CmDocument {
        n_modes: state.n_modes(),
        ordering: "xpxp".into(),
        hbar: 2.0,
        matrix: rows,
        mean,
    };
    serde_json::to_string_pretty(&doc).expect("serialising plain numbers cannot fail")
}

/// Parses a CM JSON document. Structure and symmetry are checked here;
/// physicality is left to the caller.
pub fn cm_from_json(text: &str) -> Result<(CovMatrix, Option<DVector<f64>>)> {
    let doc: CmDocument =
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("bad CM JSON: {e}")))?;
    if doc.ordering != "xpxp" {
        return invalid(format!("unsupported ordering {:?}", doc.ordering));
    }
    if (doc.hbar - 2.0).abs() > 1e-12 {
        return invalid(format!("unsupported hbar {}", doc.hbar));
    }
    let dim = 2 * doc.n_modes;
    if doc.n_modes == 0 || doc.matrix.len() != dim || doc.matrix.iter().any(|r| r.len() != dim) {
        return invalid(format!("matrix must be {dim}×{dim} for {} modes", doc.n_modes));
    }
    let flat: Vec<f64> = doc.matrix.into_iter().flatten().collect();
    let cm = CovMatrix::from_row_slice(dim, &flat)?;
    let mean = match doc.mean {
        Some(v) if v.len() != dim => return invalid("mean vector has the wrong length"),
        Some(v) => Some(DVector::from_vec(v)),
        None => None,
    };
    Ok((cm, mean))
}

pub fn state_from_json(text: &str) -> Result<GaussianState> {
    let (cm, mean) = cm_from_json(text)?;
    GaussianState::new(cm, mean)
}
