//! Fully symmetric and bisymmetric multimode states, unitary localization
//! of their block entanglement, and the resulting entanglement hierarchy.

use nalgebra::{DMatrix, Matrix2};

use crate::error::{domain, invalid, Result};
use crate::separability::{log_negativity, Bipartition};
use crate::state::{is_bona_fide, reduce, CovMatrix, GaussianState};
use crate::symplectic::{apply, SymplecticMap, STRUCTURAL_TOL};

/// Tolerance for the block-equality test behind permutation symmetry.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// Fully symmetric n-mode covariance matrix with diagonal blocks b·I and
/// off-diagonal blocks diag(z1, z2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullySymmetricSpec {
    pub n_modes: usize,
    pub b: f64,
    pub z1: f64,
    pub z2: f64,
}

impl FullySymmetricSpec {
    pub fn new(n_modes: usize, b: f64, z1: f64, z2: f64) -> Result<Self> {
        if n_modes < 1 {
            return invalid("fully symmetric block needs at least one mode");
        }
        if !(b >= 1.0) {
            return domain(format!("b = {b} is below 1"));
        }
        Ok(Self { n_modes, b, z1, z2 })
    }

    /// Parameters of the pure fully symmetric state of `n` modes.
    pub fn pure(n: usize, b: f64) -> Result<Self> {
        if n < 2 {
            return invalid(format!("need at least two modes, got {n}"));
        }
        if !(b >= 1.0) {
            return domain(format!("b = {b} is below 1"));
        }
        let l = n as f64;
        let e = b * b - 1.0;
        let r = (e * (l * (e * l + 4.0) - 4.0)).max(0.0).sqrt();
        let den = 2.0 * b * (l - 1.0);
        Ok(Self {
            n_modes: n,
            b,
            z1: ((l - 2.0) * e + r) / den,
            z2: ((l - 2.0) * e - r) / den,
        })
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.n_modes;
        DMatrix::from_fn(2 * n, 2 * n, |r, c| {
            if r % 2 != c % 2 {
                0.0
            } else if r / 2 == c / 2 {
                self.b
            } else if r % 2 == 0 {
                self.z1
            } else {
                self.z2
            }
        })
    }

    pub fn state(&self) -> Result<GaussianState> {
        checked_state(self.matrix())
    }
}

/// Two fully symmetric blocks coupled by the same 2×2 block `gamma` between
/// every pair of modes across the split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisymmetricSpec {
    pub block_a: FullySymmetricSpec,
    pub block_b: FullySymmetricSpec,
    pub gamma: Matrix2<f64>,
}

fn checked_state(m: DMatrix<f64>) -> Result<GaussianState> {
    let cm = CovMatrix::new(m)?;
    if !is_bona_fide(&cm, STRUCTURAL_TOL) {
        return domain("assembled covariance matrix is not bona fide");
    }
    GaussianState::new(cm, None)
}

/// Pure by construction; the numeric bona fide test is skipped because it
/// loses precision at large `b`.
pub fn fully_symmetric_pure(n: usize, b: f64) -> Result<GaussianState> {
    let m = FullySymmetricSpec::pure(n, b)?.matrix();
    Ok(GaussianState::from_cm_unchecked(CovMatrix::new(m)?))
}

/// Pure fully symmetric state of `n + traced` modes reduced to its first `n`.
pub fn fully_symmetric_mixed(n: usize, traced: usize, b: f64) -> Result<GaussianState> {
    if n < 1 {
        return invalid("need at least one remaining mode");
    }
    let pure = fully_symmetric_pure(n + traced, b)?;
    reduce(&pure, &(0..n).collect::<Vec<_>>())
}

pub fn assemble_bisymmetric(spec: &BisymmetricSpec) -> Result<GaussianState> {
    let (m, n) = (spec.block_a.n_modes, spec.block_b.n_modes);
    let mut s = DMatrix::zeros(2 * (m + n), 2 * (m + n));
    s.view_mut((0, 0), (2 * m, 2 * m)).copy_from(&spec.block_a.matrix());
    s.view_mut((2 * m, 2 * m), (2 * n, 2 * n)).copy_from(&spec.block_b.matrix());
    for i in 0..m {
        for j in 0..n {
            let (r, c) = (2 * i, 2 * (m + j));
            s.view_mut((r, c), (2, 2)).copy_from(&spec.gamma);
            s.view_mut((c, r), (2, 2)).copy_from(&spec.gamma.transpose());
        }
    }
    checked_state(s)
}

/// Orthogonal K×K matrix whose first row is uniform (Householder reflection
/// sending e₁ to the normalised all-ones vector).
pub fn uniform_mixer(k: usize) -> DMatrix<f64> {
    let mut v = DMatrix::from_element(k, 1, -1.0 / (k as f64).sqrt());
    v[(0, 0)] += 1.0;
    let vv = v.norm_squared();
    let mut h = DMatrix::identity(k, k);
    if vv > 1e-300 {
        h -= &v * v.transpose() * (2.0 / vv);
    }
    h
}

fn block_scale(cm: &CovMatrix) -> f64 {
    cm.matrix().amax().max(1.0)
}

fn blocks_agree(cm: &CovMatrix, pairs: impl IntoIterator<Item = (usize, usize)>, tol: f64) -> bool {
    let mut reference: Option<Matrix2<f64>> = None;
    for (i, j) in pairs {
        let blk = cm.block(i, j);
        match reference {
            None => reference = Some(blk),
            Some(r) if (blk - r).amax() > tol => return false,
            Some(_) => {}
        }
    }
    true
}

/// Whether the state is invariant under permutations inside each side of
/// `partition`: equal diagonal blocks, equal intra-side blocks and equal
/// cross blocks.
pub fn is_bisymmetric(cm: &CovMatrix, partition: &Bipartition, tol: f64) -> bool {
    let tol = tol * block_scale(cm);
    let (a, b) = (partition.side_a(), partition.side_b());
    let intra = |side: &[usize]| {
        blocks_agree(cm, side.iter().map(|&i| (i, i)), tol)
            && blocks_agree(
                cm,
                side.iter()
                    .flat_map(|&i| side.iter().filter(move |&&j| j != i).map(move |&j| (i, j))),
                tol,
            )
    };
    intra(a) && intra(b) && blocks_agree(cm, a.iter().flat_map(|&i| b.iter().map(move |&j| (i, j))), tol)
}

pub fn is_fully_symmetric(cm: &CovMatrix, tol: f64) -> bool {
    let n = cm.n_modes();
    if n < 2 {
        return true;
    }
    let tol = tol * block_scale(cm);
    blocks_agree(cm, (0..n).map(|i| (i, i)), tol)
        && blocks_agree(cm, (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))), tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Localization {
    /// Full covariance matrix after the local mixing, modes ordered as
    /// side A then side B.
    pub transformed: CovMatrix,
    /// First mode of each side after mixing.
    pub two_mode: CovMatrix,
    /// The remaining single-mode reduced states, side A first.
    pub residual: Vec<CovMatrix>,
    /// Largest correlation entry between distinct output groups.
    pub leakage: f64,
}

/// Concentrates the entanglement of a bisymmetric state across `partition`
/// onto one pair of modes with local orthogonal mixing on each side.
pub fn unitary_localization(state: &GaussianState, partition: &Bipartition) -> Result<Localization> {
    let cm = state.cm();
    let n = cm.n_modes();
    partition.check(n)?;
    if !partition.covers(n) {
        return invalid(format!("partition {partition} does not cover all {n} modes"));
    }
    if !is_bisymmetric(cm, partition, SYMMETRY_TOL) {
        return domain(format!("state is not permutation symmetric within the sides of {partition}"));
    }
    let (m, k) = (partition.side_a().len(), partition.side_b().len());
    let order: Vec<usize> = partition.side_a().iter().chain(partition.side_b()).copied().collect();
    let ordered = cm.submatrix(&order)?;

    let mut o = DMatrix::zeros(2 * n, 2 * n);
    let (oa, ob) = (uniform_mixer(m), uniform_mixer(k));
    for (off, om) in [(0, &oa), (m, &ob)] {
        for r in 0..om.nrows() {
            for c in 0..om.ncols() {
                o[(2 * (off + r), 2 * (off + c))] = om[(r, c)];
                o[(2 * (off + r) + 1, 2 * (off + c) + 1)] = om[(r, c)];
            }
        }
    }
    let mixed = apply(&SymplecticMap::from_matrix_unchecked(o), &ordered)?;

    let group = |i: usize| if i == 0 || i == m { 0 } else { i };
    let mut leakage: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if group(i) != group(j) {
                leakage = leakage.max(mixed.block(i, j).amax());
            }
        }
    }
    let two_mode = mixed.submatrix(&[0, m])?;
    let residual = (1..n)
        .filter(|&i| i != m)
        .map(|i| mixed.submatrix(&[i]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Localization {
        transformed: mixed,
        two_mode,
        residual,
        leakage,
    })
}

fn require_fully_symmetric(state: &GaussianState) -> Result<()> {
    if !is_fully_symmetric(state.cm(), SYMMETRY_TOL) {
        return domain("state is not fully symmetric");
    }
    Ok(())
}

/// Logarithmic negativity across the first `k` modes versus the other n − k.
pub fn block_log_negativity(state: &GaussianState, k: usize) -> Result<f64> {
    let n = state.n_modes();
    if k < 1 || k >= n {
        return invalid(format!("block size {k} outside 1..{n}"));
    }
    require_fully_symmetric(state)?;
    log_negativity(state.cm(), &Bipartition::split((0..k).collect(), n)?)
}

/// Logarithmic negativity of one mode against K others, the remaining modes
/// traced out.
pub fn one_by_k_log_negativity(state: &GaussianState, k: usize) -> Result<f64> {
    let n = state.n_modes();
    if k < 1 || k >= n {
        return invalid(format!("block size {k} outside 1..{n}"));
    }
    require_fully_symmetric(state)?;
    let part = Bipartition::new(vec![0], (1..=k).collect())?;
    log_negativity(state.cm(), &part)
}

/// Infinite-squeezing limit of the 1×K logarithmic negativity in a pure fully
/// symmetric (1+N)-mode state.
pub fn asymptotic_1k_bound(n: usize, k: usize) -> Result<f64> {
    if k < 1 || k >= n {
        return invalid(format!("need 1 ≤ K < N, got N = {n}, K = {k}"));
    }
    let (nf, kf) = (n as f64, k as f64);
    let arg = (kf + 1.0) * (nf - kf) / (nf * (kf + 1.0) - kf * (kf - 3.0));
    Ok(-0.5 * arg.ln())
}

/// Block log-negativity across the most balanced split, ⌈n/2⌉ | ⌊n/2⌋.
pub fn ole(state: &GaussianState) -> Result<f64> {
    let n = state.n_modes();
    if n < 2 {
        return invalid("need at least two modes");
    }
    block_log_negativity(state, n.div_ceil(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::vacuum;
    use crate::symplectic::symplectic_spectrum;

    #[test]
    fn pure_spec_is_pure() {
        for n in 2..=8 {
            for b in [1.0, 1.3, 2.0, 4.0] {
                let s = fully_symmetric_pure(n, b).unwrap();
                let sp = symplectic_spectrum(s.cm()).unwrap();
                assert!(sp.values().iter().all(|v| (v - 1.0).abs() < 1e-8), "n={n} b={b}");
            }
        }
        assert_eq!(fully_symmetric_pure(3, 1.0).unwrap().cm(), vacuum(3).unwrap().cm());
        assert!(fully_symmetric_pure(3, 0.9).is_err());
    }

    #[test]
    fn three_mode_matches_ghz_w_coefficients() {
        let a: f64 = 1.7;
        let r = ((a * a - 1.0) * (9.0 * a * a - 1.0)).sqrt();
        let sp = FullySymmetricSpec::pure(3, a).unwrap();
        assert!((sp.z1 - (a * a - 1.0 + r) / (4.0 * a)).abs() < 1e-14);
        assert!((sp.z2 - (a * a - 1.0 - r) / (4.0 * a)).abs() < 1e-14);
    }

    #[test]
    fn mixer_is_orthogonal_with_uniform_row() {
        for k in 1..6 {
            let o = uniform_mixer(k);
            assert!((&o * o.transpose() - DMatrix::identity(k, k)).amax() < 1e-14);
            assert!(o.row(0).iter().all(|x| (x - 1.0 / (k as f64).sqrt()).abs() < 1e-14));
        }
    }

    #[test]
    fn bisymmetric_assembly() {
        let a = FullySymmetricSpec::new(2, 1.5, 0.0, 0.0).unwrap();
        let zero = BisymmetricSpec {
            block_a: a,
            block_b: a,
            gamma: Matrix2::zeros(),
        };
        let s = assemble_bisymmetric(&zero).unwrap();
        assert_eq!(s.cm().block(0, 2), Matrix2::zeros());
        let bad = BisymmetricSpec {
            gamma: Matrix2::new(3.0, 0.0, 0.0, 3.0),
            ..zero
        };
        assert!(assemble_bisymmetric(&bad).is_err());
    }

    #[test]
    fn localization_leaves_vacua_for_pure_input() {
        let s = fully_symmetric_pure(4, 2.0).unwrap();
        let part = Bipartition::split(vec![0, 1], 4).unwrap();
        let loc = unitary_localization(&s, &part).unwrap();
        assert!(loc.leakage < 1e-8);
        // vacua up to a local squeezer: unit symplectic eigenvalue
        for r in &loc.residual {
            assert!((r.local_mixedness(0) - 1.0).abs() < 1e-8);
            assert!(r.block(0, 0)[(0, 1)].abs() < 1e-12);
        }
        let e = log_negativity(s.cm(), &part).unwrap();
        let e2 = log_negativity(&loc.two_mode, &Bipartition::split(vec![0], 2).unwrap()).unwrap();
        assert!((e - e2).abs() < 1e-7);
    }

    #[test]
    fn localization_rejects_asymmetric_state() {
        let s = fully_symmetric_pure(3, 2.0).unwrap();
        let mut m = s.cm().matrix().clone();
        m[(0, 0)] += 0.1;
        let st = GaussianState::new(CovMatrix::new(m).unwrap(), None).unwrap();
        let part = Bipartition::split(vec![0, 1], 3).unwrap();
        assert!(unitary_localization(&st, &part).is_err());
    }

    #[test]
    fn asymptotic_values() {
        // N = 2, K = 1: argument 2/6
        assert!((asymptotic_1k_bound(2, 1).unwrap() - 0.5 * 3f64.ln()).abs() < 1e-15);
        for n in 2..=20 {
            for k in 1..n {
                assert!(asymptotic_1k_bound(n, k).unwrap() <= 5f64.sqrt().ln());
            }
        }
        assert!(asymptotic_1k_bound(3, 3).is_err());
    }
}
