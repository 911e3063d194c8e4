//! Gaussian entanglement measures built on the pure-state optimisation: the
//! smallest single-mode determinant m² among pure states σp ≤ σ.
//!
//! For two modes in standard form the feasible pure states without x–p
//! correlations are labelled by their q-covariance Γ, with Γ ≤ γq and
//! Γ⁻¹ ≤ γp. The minimum of m² = 1 + Γ₁₂²/det Γ sits where both
//! constraints are saturated, a closed curve parametrised by an angle θ:
//! Γ(θ) = C + ½ M^{1/2} Y(θ) M^{1/2}, C = (γq + γp⁻¹)/2, M = γq − γp⁻¹.
//!
//! For one mode against several, pure states below σ are searched
//! numerically in the Williamson frame of σ.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, Matrix2};
use rand::Rng;

use crate::error::{domain, invalid, numeric, Result};
use crate::optim::golden_section;
use crate::sample::rng_from_seed;
use crate::separability::{
    h_function, negativity, pt_min_eigenvalue, pt_symplectic_pair, two_mode_standard_form,
    Bipartition, TwoModeStdForm,
};
use crate::state::{CovMatrix, GaussianState};
use crate::symplectic::{symplectic_spectrum, williamson};

/// Below this distance from 1, ν̃₋ counts as separable and measures vanish.
pub const SEPARABLE_GUARD: f64 = 1e-9;
const GRID_POINTS: usize = 720;
const THETA_TOL: f64 = 1e-10;

/// Optimal pure-state data shared by all Gaussian measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianEMResult {
    pub m_squared_opt: f64,
    pub theta_opt: f64,
    pub nu_tilde_opt: f64,
}

impl GaussianEMResult {
    fn from_m_squared(m2: f64, theta: f64) -> Self {
        let m2 = m2.max(1.0);
        Self {
            m_squared_opt: m2,
            theta_opt: theta,
            nu_tilde_opt: nu_tilde_of_m_squared(m2),
        }
    }

    pub fn eof(&self) -> f64 {
        eof_of_m_squared(self.m_squared_opt)
    }

    pub fn contangle(&self) -> f64 {
        contangle_of_m_squared(self.m_squared_opt)
    }

    pub fn tangle(&self) -> f64 {
        tangle_of_m_squared(self.m_squared_opt)
    }

    pub fn is_separable(&self) -> bool {
        self.m_squared_opt <= 1.0
    }
}

/// ν̃ = m − √(m² − 1).
pub fn nu_tilde_of_m_squared(m2: f64) -> f64 {
    let m2 = m2.max(1.0);
    // 1/(m + √(m²−1)) avoids cancellation at large m
    1.0 / (m2.sqrt() + (m2 - 1.0).sqrt())
}

pub fn eof_of_m_squared(m2: f64) -> f64 {
    if m2 <= 1.0 {
        0.0
    } else {
        h_function(nu_tilde_of_m_squared(m2))
    }
}

/// g[x] = arcsinh²(√(x − 1)).
pub fn contangle_of_m_squared(m2: f64) -> f64 {
    (m2 - 1.0).max(0.0).sqrt().asinh().powi(2)
}

/// w[x] = ¼(√(x − 1) + √x − 1)².
pub fn tangle_of_m_squared(m2: f64) -> f64 {
    let x = m2.max(1.0);
    0.25 * ((x - 1.0).sqrt() + x.sqrt() - 1.0).powi(2)
}

/// Precomputed pieces of the saturated-constraint curve for one standard form.
#[derive(Debug, Clone)]
struct Rim {
    centre: Matrix2<f64>,
    root: Matrix2<f64>,
}

impl Rim {
    fn new(sf: &TwoModeStdForm) -> Result<Rim> {
        let sf = sf.canonical();
        let gq = Matrix2::new(sf.a, sf.c_plus, sf.c_plus, sf.b);
        let gp = Matrix2::new(sf.a, sf.c_minus, sf.c_minus, sf.b);
        let gp_inv = match gp.try_inverse() {
            Some(m) if gp.determinant() > 0.0 => m,
            _ => return domain("p-block of the standard form is not positive definite"),
        };
        let m = gq - gp_inv;
        let m = (m + m.transpose()) * 0.5;
        let eig = m.symmetric_eigen();
        let scale = gq.amax().max(1.0);
        if eig.eigenvalues.min() < -1e-9 * scale {
            return numeric(format!(
                "no pure state below the standard form (γq − γp⁻¹ has eigenvalue {:e})",
                eig.eigenvalues.min()
            ));
        }
        let sq = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        let root = eig.eigenvectors * Matrix2::from_diagonal(&sq) * eig.eigenvectors.transpose();
        Ok(Rim {
            centre: (gq + gp_inv) * 0.5,
            root,
        })
    }

    fn m_squared(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let y = Matrix2::new(c, s, s, -c);
        let g = self.centre + self.root * y * self.root * 0.5;
        1.0 + g[(0, 1)] * g[(0, 1)] / g.determinant()
    }
}

/// m² of the optimal-candidate pure state at angle θ on the saturated curve.
pub fn m_squared_theta(sf: &TwoModeStdForm, theta: f64) -> Result<f64> {
    Ok(Rim::new(sf)?.m_squared(theta))
}

/// Global minimum of m²(θ): 720-point grid, golden-section refinement of the
/// three best local minima, smallest θ on ties.
pub fn minimize_m_squared(sf: &TwoModeStdForm) -> Result<GaussianEMResult> {
    let sf = sf.canonical();
    if sf.is_pure(1e-10) {
        return Ok(GaussianEMResult::from_m_squared(sf.a * sf.a, 0.0));
    }
    let (nm, _) = pt_symplectic_pair(&sf)?;
    if nm >= 1.0 - SEPARABLE_GUARD {
        return Ok(GaussianEMResult::from_m_squared(1.0, 0.0));
    }
    let rim = Rim::new(&sf)?;
    let step = TAU / GRID_POINTS as f64;
    let vals: Vec<f64> = (0..GRID_POINTS).map(|i| rim.m_squared(i as f64 * step)).collect();

    let mut minima: Vec<usize> = (0..GRID_POINTS)
        .filter(|&i| {
            let prev = vals[(i + GRID_POINTS - 1) % GRID_POINTS];
            let next = vals[(i + 1) % GRID_POINTS];
            vals[i] <= prev && vals[i] <= next
        })
        .collect();
    if minima.is_empty() {
        minima.push(0);
    }
    minima.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
    minima.truncate(3);

    let mut best: Option<(f64, f64)> = None;
    for i in minima {
        let centre = i as f64 * step;
        let (t, v) = golden_section(|t| rim.m_squared(t), centre - step, centre + step, THETA_TOL);
        let (t, v) = if vals[i] < v { (centre, vals[i]) } else { (t, v) };
        let t = t.rem_euclid(TAU);
        best = match best {
            None => Some((t, v)),
            Some((bt, bv)) if v < bv - 1e-12 || ((v - bv).abs() <= 1e-12 && t < bt) => Some((t, v)),
            keep => keep,
        };
    }
    let (t, v) = best.expect("at least one candidate");
    Ok(GaussianEMResult::from_m_squared(v, t))
}

fn two_mode_em(cm: &CovMatrix) -> Result<GaussianEMResult> {
    minimize_m_squared(&two_mode_standard_form(cm)?)
}

/// Gaussian entanglement of formation h(ν̃_opt) of a two-mode state.
pub fn gaussian_eof(cm: &CovMatrix) -> Result<f64> {
    Ok(two_mode_em(cm)?.eof())
}

pub fn contangle_two_mode(cm: &CovMatrix) -> Result<f64> {
    Ok(two_mode_em(cm)?.contangle())
}

pub fn gaussian_tangle_two_mode(cm: &CovMatrix) -> Result<f64> {
    Ok(two_mode_em(cm)?.tangle())
}

pub fn gaussian_em_two_mode(cm: &CovMatrix) -> Result<GaussianEMResult> {
    two_mode_em(cm)
}

fn probe_a_squared(pure: &GaussianState, probe: usize) -> Result<f64> {
    if probe >= pure.n_modes() {
        return invalid(format!("probe mode {probe} out of range"));
    }
    let sp = symplectic_spectrum(pure.cm())?;
    if sp.max() > 1.0 + 1e-7 {
        return domain("state is not pure");
    }
    Ok(pure.cm().block(probe, probe).determinant().max(1.0))
}

/// ln²(a − √(a² − 1)) with a the probe's local mixedness.
pub fn contangle_pure_1xn(pure: &GaussianState, probe: usize) -> Result<f64> {
    let a2 = probe_a_squared(pure, probe)?;
    let a = a2.sqrt();
    // a − √(a²−1) = 1/(a + √(a²−1))
    Ok((a + (a2 - 1.0).sqrt()).ln().powi(2))
}

pub fn gaussian_tangle_pure_1xn(pure: &GaussianState, probe: usize) -> Result<f64> {
    Ok(tangle_of_m_squared(probe_a_squared(pure, probe)?))
}

/// Settings for the one-mode-versus-rest pure-state search.
#[derive(Debug, Clone, Copy)]
pub struct OneToRestOptions {
    pub starts: usize,
    pub seed: u64,
    /// Relative objective change below which a barrier stage is converged.
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for OneToRestOptions {
    fn default() -> Self {
        Self {
            starts: 8,
            seed: 0x5eed,
            rel_tol: 1e-7,
            max_iter: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OneToRestResult {
    /// Smallest probe determinant found among feasible pure states.
    pub m_squared: f64,
    /// N² across probe|rest, a lower bound on the Gaussian tangle.
    pub tangle_lower_bound: f64,
    pub iterations: usize,
    /// Index of the start that produced `m_squared`.
    pub best_start: usize,
}

impl OneToRestResult {
    pub fn contangle(&self) -> f64 {
        contangle_of_m_squared(self.m_squared)
    }

    pub fn tangle(&self) -> f64 {
        tangle_of_m_squared(self.m_squared)
    }
}

/// Basis of symmetric 2M×2M matrices anticommuting with Ω (xpxp order),
/// each stored as its full list of (row, col, value) entries.
fn hamiltonian_basis(m: usize) -> Vec<Vec<(usize, usize, f64)>> {
    // qqpp blocks [[A, B], [B, −A]] with A, B symmetric
    let q = |i: usize| 2 * i;
    let p = |i: usize| 2 * i + 1;
    let mut basis = Vec::with_capacity(m * (m + 1));
    for i in 0..m {
        for j in i..m {
            let mut a = vec![(q(i), q(j), 1.0), (p(i), p(j), -1.0)];
            let mut b = vec![(q(i), p(j), 1.0), (p(j), q(i), 1.0)];
            if i != j {
                a.extend([(q(j), q(i), 1.0), (p(j), p(i), -1.0)]);
                b.extend([(p(i), q(j), 1.0), (q(j), p(i), 1.0)]);
            }
            basis.push(a);
            basis.push(b);
        }
    }
    basis
}

/// Pure states Sᵀ(exp(H) ⊕ I)S below σ = SᵀνS, with H acting on the mixed
/// Williamson modes; the objective is the probe determinant.
struct PureBelow {
    nu: DVector<f64>,
    /// Probe columns of S restricted to the mixed modes.
    b: DMatrix<f64>,
    /// Probe block contributed by the pure Williamson modes.
    k0: Matrix2<f64>,
    basis: Vec<Vec<(usize, usize, f64)>>,
}

struct Point {
    x: Vec<f64>,
    m2: f64,
    phi: f64,
    grad: Vec<f64>,
}

impl PureBelow {
    fn eval(&self, x: &[f64], rho: f64) -> Option<Point> {
        let dim = self.nu.len();
        let mut h = DMatrix::<f64>::zeros(dim, dim);
        for (c, e) in x.iter().zip(&self.basis) {
            for &(r, k, v) in e {
                h[(r, k)] += c * v;
            }
        }
        let eig = h.symmetric_eigen();
        let v = &eig.eigenvectors;
        let ex: DVector<f64> = eig.eigenvalues.map(f64::exp);
        let p: DMatrix<f64> = v * DMatrix::from_diagonal(&ex) * v.transpose();
        let mut gap: DMatrix<f64> = -p.clone();
        for k in 0..dim {
            gap[(k, k)] += self.nu[k];
        }
        let chol = gap.cholesky()?;
        let logdet: f64 = 2.0 * chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>();
        let mb = self.b.transpose() * &p * &self.b;
        let m = Matrix2::new(mb[(0, 0)], mb[(0, 1)], mb[(1, 0)], mb[(1, 1)]) + self.k0;
        let m2 = m.determinant();
        if !(m2 > 0.0) || !logdet.is_finite() {
            return None;
        }
        let minv = m.try_inverse()?;
        let minv_d = DMatrix::from_fn(2, 2, |r, c| minv[(r, c)]);
        let g = &self.b * minv_d * self.b.transpose() * m2 + chol.inverse() * rho;
        let w = v.transpose() * g * v;
        let lam: &DVector<f64> = &eig.eigenvalues;
        let wg = DMatrix::from_fn(dim, dim, |i, j| {
            let d: f64 = lam[i] - lam[j];
            let div = if d.abs() > 1e-9 {
                (ex[i] - ex[j]) / d
            } else {
                (0.5 * (lam[i] + lam[j])).exp()
            };
            w[(i, j)] * div
        });
        let z = v * wg * v.transpose();
        let grad = self
            .basis
            .iter()
            .map(|e| e.iter().map(|&(r, k, c)| c * z[(r, k)]).sum())
            .collect();
        Some(Point {
            x: x.to_vec(),
            m2,
            phi: m2 - rho * logdet,
            grad,
        })
    }

    /// BFGS with Armijo backtracking; infeasible trial points are rejected.
    fn bfgs(
        &self,
        start: Point,
        rho: f64,
        warm: Option<DMatrix<f64>>,
        opts: &OneToRestOptions,
    ) -> (Point, DMatrix<f64>, usize, bool) {
        let d = start.x.len();
        let mut cur = start;
        let mut first = warm.is_none();
        let mut hinv = warm.unwrap_or_else(|| DMatrix::<f64>::identity(d, d));
        let mut quiet = 0;
        for it in 0..opts.max_iter {
            let g = DVector::from_column_slice(&cur.grad);
            let mut dir = -(&hinv * &g);
            let mut slope = g.dot(&dir);
            if slope >= 0.0 {
                hinv = DMatrix::identity(d, d);
                dir = -g.clone();
                slope = -g.norm_squared();
            }
            if slope.abs() < 1e-30 {
                return (cur, hinv, it, true);
            }
            let mut step = 1.0;
            let next = loop {
                let xn: Vec<f64> = cur.x.iter().zip(dir.iter()).map(|(x, dx)| x + step * dx).collect();
                if let Some(pn) = self.eval(&xn, rho) {
                    if pn.phi <= cur.phi + 1e-4 * step * slope {
                        break Some(pn);
                    }
                }
                step *= 0.5;
                if step < 1e-14 {
                    break None;
                }
            };
            let Some(next) = next else {
                return (cur, hinv, it, true);
            };
            let s = DVector::from_iterator(d, next.x.iter().zip(&cur.x).map(|(a, b)| a - b));
            let y = DVector::from_iterator(d, next.grad.iter().zip(&cur.grad).map(|(a, b)| a - b));
            let sy = s.dot(&y);
            if sy > 1e-300 {
                if first {
                    hinv = DMatrix::identity(d, d) * (sy / y.norm_squared());
                    first = false;
                }
                let hy = &hinv * &y;
                let yhy = y.dot(&hy);
                hinv += (&s * s.transpose()) * ((sy + yhy) / (sy * sy))
                    - (&hy * s.transpose() + &s * hy.transpose()) / sy;
            }
            let change = (cur.phi - next.phi).abs() / next.phi.abs().max(1.0);
            cur = next;
            quiet = if change < opts.rel_tol { quiet + 1 } else { 0 };
            if quiet >= 3 {
                return (cur, hinv, it + 1, true);
            }
        }
        (cur, hinv, opts.max_iter, false)
    }

    /// Continues a run through the given barrier weights, warm-starting
    /// BFGS from the previous stage.
    fn advance(&self, run: &mut Run, rhos: &[f64], opts: &OneToRestOptions) -> Option<()> {
        for &rho in rhos {
            let cur = self.eval(&run.point.x, rho)?;
            let (p, h, it, conv) = self.bfgs(cur, rho, run.hinv.take(), opts);
            run.point = p;
            run.hinv = Some(h);
            run.iterations += it;
            run.converged &= conv;
        }
        Some(())
    }
}

struct Run {
    start: usize,
    point: Point,
    hinv: Option<DMatrix<f64>>,
    iterations: usize,
    converged: bool,
}

const BARRIER_WEIGHTS: [f64; 6] = [1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12];
/// Stages run for every start before only the best few are refined.
const COARSE_STAGES: usize = 2;
const REFINED_STARTS: usize = 2;

/// Smallest probe determinant m² over pure states σp ≤ σ, probe against all
/// other modes. Pure inputs return their own probe determinant; inputs that
/// are PPT across probe|rest return 1.
pub fn one_to_rest_m_squared(cm: &CovMatrix, probe: usize, opts: &OneToRestOptions) -> Result<OneToRestResult> {
    let n = cm.n_modes();
    if n < 2 || probe >= n {
        return invalid(format!("probe {probe} invalid for a {n}-mode state"));
    }
    let part = Bipartition::split(vec![probe], n)?;
    let neg = negativity(cm, &part)?;
    let lower = neg * neg;
    let done = |m2: f64| OneToRestResult {
        m_squared: m2,
        tangle_lower_bound: lower,
        iterations: 0,
        best_start: 0,
    };
    let sp = symplectic_spectrum(cm)?;
    if sp.min() < 1.0 - 1e-9 {
        return domain("not a physical covariance matrix");
    }
    if sp.max() <= 1.0 + 1e-9 {
        return Ok(done(cm.block(probe, probe).determinant().max(1.0)));
    }
    if pt_min_eigenvalue(cm, &part)? >= 1.0 - SEPARABLE_GUARD {
        return Ok(done(1.0));
    }

    let (s, nu) = williamson(cm)?;
    let mixed: Vec<usize> = (0..n).filter(|&k| nu.values()[k] > 1.0 + 1e-9).collect();
    let rows: Vec<usize> = mixed.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
    let pc = s.matrix().columns(2 * probe, 2).into_owned();
    let b = DMatrix::from_fn(rows.len(), 2, |r, c| pc[(rows[r], c)]);
    let mut k0 = Matrix2::zeros();
    for k in (0..n).filter(|k| !mixed.contains(k)) {
        for r in [2 * k, 2 * k + 1] {
            for i in 0..2 {
                for j in 0..2 {
                    k0[(i, j)] += pc[(r, i)] * pc[(r, j)];
                }
            }
        }
    }
    let prob = PureBelow {
        nu: DVector::from_iterator(rows.len(), mixed.iter().flat_map(|&k| [nu.values()[k]; 2])),
        b,
        k0,
        basis: hamiltonian_basis(mixed.len()),
    };
    let dim = prob.basis.len();
    let mut rng = rng_from_seed(opts.seed);
    let (coarse, fine) = BARRIER_WEIGHTS.split_at(COARSE_STAGES);
    let mut runs = Vec::new();
    for start in 0..opts.starts.max(1) {
        let mut x0: Vec<f64> = if start == 0 {
            vec![0.0; dim]
        } else {
            (0..dim).map(|_| rng.random_range(-0.5..0.5)).collect()
        };
        // pull random starts towards P = I until strictly feasible
        while prob.eval(&x0, coarse[0]).is_none() && x0.iter().any(|v| v.abs() > 1e-12) {
            x0.iter_mut().for_each(|v| *v *= 0.5);
        }
        let Some(point) = prob.eval(&x0, coarse[0]) else {
            continue;
        };
        let mut run = Run {
            start,
            point,
            hinv: None,
            iterations: 0,
            converged: true,
        };
        if prob.advance(&mut run, coarse, opts).is_some() {
            runs.push(run);
        }
    }
    let mut iterations: usize = runs.iter().map(|r| r.iterations).sum();
    // stable sort keeps the lowest start index first among ties
    runs.sort_by(|a, b| a.point.phi.total_cmp(&b.point.phi));
    runs.truncate(REFINED_STARTS);
    let mut best: Option<(f64, usize)> = None;
    let mut any_converged = false;
    for mut run in runs {
        let before = run.iterations;
        let ok = prob.advance(&mut run, fine, opts).is_some();
        iterations += run.iterations - before;
        if !ok {
            continue;
        }
        any_converged |= run.converged;
        let m2 = run.point.m2;
        if best.is_none_or(|(bv, bi)| m2 < bv || (m2 == bv && run.start < bi)) {
            best = Some((m2, run.start));
        }
    }
    let Some((m2, idx)) = best else {
        return numeric("one-to-rest search found no feasible start");
    };
    if !any_converged || !m2.is_finite() {
        return numeric(format!(
            "one-to-rest search did not converge (best m² = {m2}, {iterations} iterations)"
        ));
    }
    Ok(OneToRestResult {
        m_squared: m2.max(1.0),
        tangle_lower_bound: lower,
        iterations,
        best_start: idx,
    })
}

/// m² across a bipartition with a single-mode side, the other side's modes
/// kept and everything else traced out. Two modes use the exact two-mode
/// minimisation, more modes the one-to-rest search.
pub fn m_squared_across(cm: &CovMatrix, partition: &Bipartition, opts: &OneToRestOptions) -> Result<f64> {
    partition.check(cm.n_modes())?;
    let (single, rest) = match (partition.side_a(), partition.side_b()) {
        ([m], rest) | (rest, [m]) => (*m, rest),
        _ => return invalid(format!("partition {partition} has no single-mode side")),
    };
    let modes: Vec<usize> = std::iter::once(single).chain(rest.iter().copied()).collect();
    let sub = cm.submatrix(&modes)?;
    if rest.len() == 1 {
        Ok(two_mode_em(&sub)?.m_squared_opt)
    } else {
        Ok(one_to_rest_m_squared(&sub, 0, opts)?.m_squared)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::{nelder_mead, NelderMeadOptions};
    use crate::separability::{eof_symmetric, log_negativity};
    use crate::state::{thermal, two_mode_squeezed, vacuum};
    use crate::symplectic::{apply, beam_splitter, single_mode_squeezer, two_mode_squeezer};

    fn sf(a: f64, b: f64, cp: f64, cm: f64) -> TwoModeStdForm {
        TwoModeStdForm {
            a,
            b,
            c_plus: cp,
            c_minus: cm,
        }
    }

    #[test]
    fn transforms_at_known_points() {
        assert_eq!(contangle_of_m_squared(1.0), 0.0);
        assert_eq!(tangle_of_m_squared(1.0), 0.0);
        assert_eq!(eof_of_m_squared(1.0), 0.0);
        let r: f64 = 0.4;
        let m2 = (2.0 * r).cosh().powi(2);
        assert!((contangle_of_m_squared(m2) - 4.0 * r * r).abs() < 1e-12);
        assert!((tangle_of_m_squared(m2) - 0.25 * ((2.0 * r).exp() - 1.0).powi(2)).abs() < 1e-12);
        assert!((nu_tilde_of_m_squared(m2) - (-2.0 * r).exp()).abs() < 1e-12);
    }

    #[test]
    fn separable_minimum_is_one() {
        let r = minimize_m_squared(&sf(2.0, 3.0, 0.0, 0.0)).unwrap();
        assert_eq!(r.m_squared_opt, 1.0);
        assert_eq!(r.eof(), 0.0);
        // the curve passes through the product pure state at θ = 0
        assert!((m_squared_theta(&sf(2.0, 3.0, 0.0, 0.0), 0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tms_values() {
        let t = two_mode_squeezed(0.5);
        let s = two_mode_standard_form(t.cm()).unwrap();
        for th in [0.0, std::f64::consts::PI] {
            assert!(m_squared_theta(&s, th).unwrap() >= 1.0 - 1e-10);
        }
        let c = contangle_two_mode(t.cm()).unwrap();
        assert!((c - 1.0).abs() < 1e-9);
        let p12 = Bipartition::new(vec![0], vec![1]).unwrap();
        let e = negativity(t.cm(), &p12).unwrap();
        assert!((gaussian_tangle_two_mode(t.cm()).unwrap() - e * e).abs() < 1e-9);
    }

    #[test]
    fn symmetric_mixed_matches_closed_forms() {
        // squeezed thermal symmetric state
        let th = thermal(&[1.3, 1.3]).unwrap();
        let cm = apply(&two_mode_squeezer(0.6, 0, 1, 2).unwrap(), th.cm()).unwrap();
        let s = two_mode_standard_form(&cm).unwrap();
        let (nm, _) = pt_symplectic_pair(&s).unwrap();
        let r = minimize_m_squared(&s).unwrap();
        assert!((r.nu_tilde_opt - nm).abs() < 1e-7);
        assert!((gaussian_eof(&cm).unwrap() - eof_symmetric(&s).unwrap()).abs() < 1e-6);
        let p12 = Bipartition::new(vec![0], vec![1]).unwrap();
        let en = log_negativity(&cm, &p12).unwrap();
        assert!((contangle_two_mode(&cm).unwrap() - en * en).abs() < 1e-6);
    }

    /// Independent check: penalised search directly over the q-covariance Γ
    /// of pure states (Γ, Γ⁻¹) under Γ ≤ γq and Γ⁻¹ ≤ γp.
    fn direct_gamma_search(s: &TwoModeStdForm) -> f64 {
        let gq = Matrix2::new(s.a, s.c_plus, s.c_plus, s.b);
        let gp = Matrix2::new(s.a, s.c_minus, s.c_minus, s.b);
        let psd_violation = |m: Matrix2<f64>| -> f64 { (-m.symmetric_eigenvalues().min()).max(0.0) };
        let f = |x: &[f64]| -> f64 {
            let l = Matrix2::new(x[0].exp(), 0.0, x[1], x[2].exp());
            let g = l * l.transpose();
            let gi = g.try_inverse().unwrap();
            let pen = psd_violation(gq - g) + psd_violation(gp - gi);
            1.0 + g[(0, 1)].powi(2) / g.determinant() + 1e4 * pen
        };
        let mut best = f64::INFINITY;
        let mut rng = rng_from_seed(7);
        for _ in 0..40 {
            let x0 = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let r = nelder_mead(
                f,
                &x0,
                &NelderMeadOptions {
                    initial_step: 0.2,
                    f_rel_tol: 1e-13,
                    max_evals: 20_000,
                },
            );
            best = best.min(r.f);
        }
        best
    }

    #[test]
    fn nonsymmetric_against_direct_search() {
        for s in [sf(3.0, 2.0, 2.0, -1.5), sf(2.0, 3.0, 1.8, -1.2), sf(1.5, 2.5, 1.2, -0.9)] {
            let r = minimize_m_squared(&s).unwrap();
            let direct = direct_gamma_search(&s);
            assert!(
                (r.m_squared_opt - direct).abs() < 1e-5 * direct,
                "{s:?}: curve {} vs direct {direct}",
                r.m_squared_opt
            );
        }
        // frozen reference for (3, 2, 2, −1.5)
        let r = minimize_m_squared(&sf(3.0, 2.0, 2.0, -1.5)).unwrap();
        assert!((r.m_squared_opt - 1.271_991_581_653).abs() < 1e-9);
    }

    #[test]
    fn pure_bypass_and_1xn() {
        let t = two_mode_squeezed(0.7);
        let a2 = (1.4f64).cosh().powi(2);
        let r = gaussian_em_two_mode(t.cm()).unwrap();
        assert!((r.m_squared_opt - a2).abs() < 1e-9);
        assert!((contangle_pure_1xn(&t, 0).unwrap() - 4.0 * 0.49).abs() < 1e-10);
        let tg = gaussian_tangle_pure_1xn(&t, 1).unwrap();
        assert!((tg - 0.25 * (1.4f64.exp() - 1.0).powi(2)).abs() < 1e-10);
        assert_eq!(contangle_pure_1xn(&vacuum(3).unwrap(), 1).unwrap(), 0.0);
        assert!(contangle_pure_1xn(&thermal(&[2.0, 1.0]).unwrap(), 0).is_err());
    }

    #[test]
    fn one_to_rest_reduces_to_two_mode_with_vacuum_ancilla() {
        // mixed two-mode state on (0,1), mode 2 vacuum, then a beam splitter
        // on the (1,2) side: a local unitary that must not change 0|(12)
        let th = thermal(&[1.4, 1.1]).unwrap();
        let s = two_mode_squeezer(0.5, 0, 1, 2)
            .unwrap()
            .compose(&single_mode_squeezer(0.3, 1, 2).unwrap())
            .unwrap();
        let two = apply(&s, th.cm()).unwrap();
        let reference = gaussian_em_two_mode(&two).unwrap().m_squared_opt;
        let three = two.direct_sum(vacuum(1).unwrap().cm());
        let mixed = apply(&beam_splitter(0.6, 1, 2, 3).unwrap(), &three).unwrap();
        let r = one_to_rest_m_squared(&mixed, 0, &OneToRestOptions::default()).unwrap();
        assert!(
            (r.m_squared - reference).abs() < 1e-5 * reference,
            "search {} vs two-mode {}",
            r.m_squared,
            reference
        );
        assert!(r.tangle() >= r.tangle_lower_bound - 1e-9);
    }

    #[test]
    fn m_squared_across_picks_the_single_side() {
        let opts = OneToRestOptions::default();
        let tms = two_mode_squeezed(0.6);
        let wide = tms.cm().direct_sum(vacuum(1).unwrap().cm());
        let exact = gaussian_em_two_mode(tms.cm()).unwrap().m_squared_opt;
        let left = m_squared_across(&wide, &Bipartition::parse("1|2").unwrap(), &opts).unwrap();
        let right = m_squared_across(&wide, &Bipartition::parse("2|1").unwrap(), &opts).unwrap();
        assert_eq!(left, exact);
        assert!((right - exact).abs() < 1e-12);
        let rest = m_squared_across(&wide, &Bipartition::parse("2,3|1").unwrap(), &opts).unwrap();
        assert!((rest - exact).abs() < 1e-6 * exact);
        let four = wide.direct_sum(vacuum(1).unwrap().cm());
        assert!(m_squared_across(&four, &Bipartition::parse("1,2|3,4").unwrap(), &opts).is_err());
        assert!(m_squared_across(&wide, &Bipartition::parse("1|4").unwrap(), &opts).is_err());
    }
}
