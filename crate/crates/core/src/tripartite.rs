//! Three-mode entanglement sharing: pure standard forms, residual contangle,
//! GHZ/W states, monogamy checks and a four-mode promiscuous family.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{domain, invalid, numeric, Result};
use crate::measures::{
    contangle_of_m_squared, gaussian_em_two_mode, one_to_rest_m_squared, tangle_of_m_squared, OneToRestOptions,
};
use crate::separability::{is_ppt, Bipartition};
use crate::state::{entropy_function, vacuum, CovMatrix, GaussianState};
use crate::symmetric::FullySymmetricSpec;
use crate::symplectic::{apply, two_mode_squeezer};

/// Slack below which a monogamy inequality counts as violated.
pub const MONOGAMY_TOL: f64 = 1e-6;

/// Local mixednesses a_l = √det σ_l of a pure three-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeModeLocalMix {
    pub a: [f64; 3],
}

impl ThreeModeLocalMix {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        let a = [a1, a2, a3];
        if a.iter().any(|&x| !(x >= 1.0)) {
            return domain(format!("local mixednesses {a:?} must be at least 1"));
        }
        if !satisfies_triangle(a, 1e-12) {
            return domain(format!("local mixednesses {a:?} violate the triangle inequality"));
        }
        Ok(Self { a })
    }
}

/// |a′ᵢ − a′ⱼ| ≤ a′ₖ ≤ a′ᵢ + a′ⱼ with a′ = a − 1, all permutations.
pub fn satisfies_triangle(a: [f64; 3], tol: f64) -> bool {
    let p = a.map(|x| x - 1.0);
    (0..3).all(|k| {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        (p[i] - p[j]).abs() <= p[k] + tol && p[k] <= p[i] + p[j] + tol
    })
}

/// Subadditivity and Araki–Lieb for the entropies f(a_l) of a pure state.
pub fn satisfies_araki_lieb(a: [f64; 3], tol: f64) -> bool {
    let s = a.map(entropy_function);
    (0..3).all(|k| {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        (s[i] - s[j]).abs() <= s[k] + tol && s[k] <= s[i] + s[j] + tol
    })
}

fn root(x: f64, tol: f64, what: &str) -> Result<f64> {
    if x < -tol {
        return numeric(format!("negative radicand {x} in {what}"));
    }
    Ok(x.max(0.0).sqrt())
}

/// (e⁺ᵢⱼ, e⁻ᵢⱼ) for the pair (i, j) with third mode k.
fn e_pair(ai: f64, aj: f64, ak: f64) -> Result<(f64, f64)> {
    let (m, p) = ((ai - aj).powi(2), (ai + aj).powi(2));
    let (km, kp) = ((ak - 1.0).powi(2), (ak + 1.0).powi(2));
    let r1 = root((m - km) * (m - kp), 1e-10, "e_ij")?;
    let r2 = root((p - km) * (p - kp), 1e-10, "e_ij")?;
    let den = 4.0 * (ai * aj).sqrt();
    Ok(((r1 + r2) / den, (r1 - r2) / den))
}

/// Standard-form covariance matrix of the pure three-mode state with the
/// given local mixednesses.
pub fn pure_three_mode(a1: f64, a2: f64, a3: f64) -> Result<GaussianState> {
    let a = ThreeModeLocalMix::new(a1, a2, a3)?.a;
    let mut m = DMatrix::zeros(6, 6);
    for l in 0..3 {
        m[(2 * l, 2 * l)] = a[l];
        m[(2 * l + 1, 2 * l + 1)] = a[l];
    }
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let (ep, em) = e_pair(a[i], a[j], a[k])?;
        m[(2 * i, 2 * j)] = ep;
        m[(2 * j, 2 * i)] = ep;
        m[(2 * i + 1, 2 * j + 1)] = em;
        m[(2 * j + 1, 2 * i + 1)] = em;
    }
    GaussianState::new(CovMatrix::new(m)?, None)
}

/// Which bipartite measure the sharing quantities are built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharingMeasure {
    Contangle,
    Tangle,
}

impl SharingMeasure {
    pub fn of_m_squared(self, m2: f64) -> f64 {
        match self {
            SharingMeasure::Contangle => contangle_of_m_squared(m2),
            SharingMeasure::Tangle => tangle_of_m_squared(m2),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SharingMeasure::Contangle => "contangle",
            SharingMeasure::Tangle => "tangle",
        }
    }
}

impl fmt::Display for SharingMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualContangleReport {
    pub value: f64,
    pub probe_mode: usize,
    pub one_to_rest: f64,
    /// Probe against each other mode, in increasing mode order.
    pub pairwise: [f64; 2],
}

fn others(probe: usize) -> [usize; 2] {
    match probe {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

/// m(a, s, d) for the GLEMS reduced state of a pure three-mode state.
fn glems_m(a: f64, s: f64, d: f64) -> Result<f64> {
    let kp = a * a + (s + d).powi(2);
    let km = a * a - (s + d).powi(2);
    let m_minus = km.abs() / ((s - d).powi(2) - 1.0);
    let big_d = 2.0 * (s - d)
        - root(
            2.0 * (km * km + 2.0 * kp + km.abs() * (km * km + 8.0 * kp).sqrt()) / kp,
            1e-9,
            "D",
        )?;
    if big_d <= 1e-10 {
        return Ok(m_minus.max(1.0));
    }
    let delta = (a - 2.0 * d - 1.0)
        * (a - 2.0 * d + 1.0)
        * (a + 2.0 * d - 1.0)
        * (a + 2.0 * d + 1.0)
        * (a - 2.0 * s - 1.0)
        * (a - 2.0 * s + 1.0)
        * (a + 2.0 * s - 1.0)
        * (a + 2.0 * s + 1.0);
    let sd = root(delta, 1e-9, "δ")?;
    let inner = 2.0
        * (2.0 * a * a * (1.0 + 2.0 * s * s + 2.0 * d * d)
            - (4.0 * s * s - 1.0) * (4.0 * d * d - 1.0)
            - a.powi(4)
            - sd);
    Ok((root(inner, 1e-9, "m₊")? / (4.0 * (s - d))).max(1.0))
}

fn contangle_of_m(m: f64) -> f64 {
    contangle_of_m_squared(m * m)
}

/// Residual Gaussian contangle of the pure three-mode state with local
/// mixednesses (a1, a2, a3), in closed form.
pub fn residual_contangle_pure(a1: f64, a2: f64, a3: f64) -> Result<ResidualContangleReport> {
    let a = ThreeModeLocalMix::new(a1, a2, a3)?.a;
    let mut probe = 0;
    for l in 1..3 {
        if a[l] < a[probe] {
            probe = l;
        }
    }
    let [j, k] = others(probe);
    let am = a[probe];
    if am - 1.0 <= 1e-12 {
        return Ok(ResidualContangleReport {
            value: 0.0,
            probe_mode: probe,
            one_to_rest: 0.0,
            pairwise: [0.0, 0.0],
        });
    }
    let (s, d) = ((a[j] + a[k]) / 2.0, (a[j] - a[k]) / 2.0);
    let window = (am * am - 1.0) / (4.0 * s);
    let g_j = if d <= -window { 0.0 } else { contangle_of_m(glems_m(am, s, d)?) };
    let g_k = if d >= window { 0.0 } else { contangle_of_m(glems_m(am, s, -d)?) };
    let one_to_rest = contangle_of_m_squared(am * am);
    Ok(ResidualContangleReport {
        value: one_to_rest - g_j - g_k,
        probe_mode: probe,
        one_to_rest,
        pairwise: [g_j, g_k],
    })
}

/// Residual sharing min over probes of E(i|jk) − E(i|j) − E(i|k), with the
/// one-to-rest term from the numeric pure-state search.
pub fn residual_contangle_generic(
    cm: &CovMatrix,
    measure: SharingMeasure,
    opts: &OneToRestOptions,
) -> Result<ResidualContangleReport> {
    if cm.n_modes() != 3 {
        return invalid(format!("expected a three-mode state, got {} modes", cm.n_modes()));
    }
    let mut best: Option<ResidualContangleReport> = None;
    for probe in 0..3 {
        let e = monogamy_terms(cm, probe, measure, opts)?;
        let report = ResidualContangleReport {
            value: e.lhs - e.pairwise.iter().sum::<f64>(),
            probe_mode: probe,
            one_to_rest: e.lhs,
            pairwise: [e.pairwise[0], e.pairwise[1]],
        };
        if best.is_none_or(|b| report.value < b.value) {
            best = Some(report);
        }
    }
    Ok(best.expect("three probes evaluated"))
}

/// Fully symmetric pure three-mode state with local mixedness `a`.
pub fn ghzw(a: f64) -> Result<GaussianState> {
    if !(a >= 1.0) {
        return domain(format!("a = {a} is below 1"));
    }
    let r = ((a * a - 1.0) * (9.0 * a * a - 1.0)).sqrt();
    let e_plus = (a * a - 1.0 + r) / (4.0 * a);
    let e_minus = (a * a - 1.0 - r) / (4.0 * a);
    FullySymmetricSpec::new(3, a, e_plus, e_minus)?.state()
}

/// Closed-form residual contangle of the GHZ/W state.
pub fn ghzw_residual(a: f64) -> Result<f64> {
    if !(a >= 1.0) {
        return domain(format!("a = {a} is below 1"));
    }
    let a2 = a * a;
    let arg = (3.0 * a2 - 1.0 - (9.0 * a2 * a2 - 10.0 * a2 + 1.0).max(0.0).sqrt()) / 2.0;
    Ok(contangle_of_m_squared(a2) - 0.5 * arg.ln().powi(2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonogamyEntry {
    pub probe: usize,
    pub lhs: f64,
    /// Probe against each other mode, in increasing mode order.
    pub pairwise: Vec<f64>,
    pub rhs: f64,
    pub slack: f64,
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonogamyReport {
    pub measure: SharingMeasure,
    pub entries: Vec<MonogamyEntry>,
}

impl MonogamyReport {
    pub fn min_slack(&self) -> f64 {
        self.entries.iter().map(|e| e.slack).fold(f64::INFINITY, f64::min)
    }

    pub fn has_violation(&self) -> bool {
        self.entries.iter().any(|e| e.violation)
    }
}

fn monogamy_terms(cm: &CovMatrix, probe: usize, measure: SharingMeasure, opts: &OneToRestOptions) -> Result<MonogamyEntry> {
    let n = cm.n_modes();
    let lhs = measure.of_m_squared(one_to_rest_m_squared(cm, probe, opts)?.m_squared);
    let pairwise = (0..n)
        .filter(|&j| j != probe)
        .map(|j| Ok(measure.of_m_squared(gaussian_em_two_mode(&cm.submatrix(&[probe, j])?)?.m_squared_opt)))
        .collect::<Result<Vec<f64>>>()?;
    let rhs: f64 = pairwise.iter().sum();
    let slack = lhs - rhs;
    Ok(MonogamyEntry {
        probe,
        lhs,
        pairwise,
        rhs,
        slack,
        violation: slack < -MONOGAMY_TOL,
    })
}

/// E(i|rest) − Σⱼ E(i|j) for every probe mode of a state with 2 to 4 modes.
pub fn monogamy_check(cm: &CovMatrix, measure: SharingMeasure, opts: &OneToRestOptions) -> Result<MonogamyReport> {
    let n = cm.n_modes();
    if !(2..=4).contains(&n) {
        return invalid(format!("monogamy check supports 2 to 4 modes, got {n}"));
    }
    let entries = (0..n)
        .map(|probe| monogamy_terms(cm, probe, measure, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonogamyReport { measure, entries })
}

/// S₃₄(a)S₁₂(a)S₂₃(s) applied to the four-mode vacuum.
pub fn four_mode_promiscuous(s: f64, a: f64) -> Result<GaussianState> {
    if !(s >= 0.0 && a >= 0.0) {
        return invalid(format!("squeezings must be non-negative, got s = {s}, a = {a}"));
    }
    let map = two_mode_squeezer(a, 2, 3, 4)?
        .compose(&two_mode_squeezer(a, 0, 1, 4)?)?
        .compose(&two_mode_squeezer(s, 1, 2, 4)?)?;
    let cm = apply(&map, vacuum(4)?.cm())?;
    Ok(GaussianState::from_cm_unchecked(cm))
}

/// Partial classification of three-mode states from the PPT criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PptClass {
    FullyInseparable,
    OneModeBiseparable,
    TwoModeBiseparable,
    /// Separable or bound entangled; partial transposition cannot tell.
    PptAll,
}

impl PptClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PptClass::FullyInseparable => "fully-inseparable",
            PptClass::OneModeBiseparable => "one-mode-biseparable",
            PptClass::TwoModeBiseparable => "two-mode-biseparable",
            PptClass::PptAll => "ppt-all",
        }
    }
}

impl fmt::Display for PptClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn ppt_class(cm: &CovMatrix, tol: f64) -> Result<PptClass> {
    if cm.n_modes() != 3 {
        return invalid(format!("expected a three-mode state, got {} modes", cm.n_modes()));
    }
    let mut ppt = 0;
    for k in 0..3 {
        if is_ppt(cm, &Bipartition::split(vec![k], 3)?, tol)? {
            ppt += 1;
        }
    }
    Ok(match ppt {
        0 => PptClass::FullyInseparable,
        1 => PptClass::OneModeBiseparable,
        2 => PptClass::TwoModeBiseparable,
        _ => PptClass::PptAll,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric::fully_symmetric_pure;
    use crate::symplectic::symplectic_spectrum;
    use nalgebra::Matrix2;

    #[test]
    fn triangle_and_entropic_checks() {
        assert!(satisfies_triangle([2.0, 2.0, 1.0], 0.0));
        assert!(!satisfies_triangle([3.0, 1.0, 1.0], 0.0));
        assert!(pure_three_mode(3.0, 1.0, 1.0).is_err());
        assert!(pure_three_mode(0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn pure_three_mode_cases() {
        assert_eq!(pure_three_mode(1.0, 1.0, 1.0).unwrap().cm(), vacuum(3).unwrap().cm());
        let s = pure_three_mode(2.0, 2.0, 1.0).unwrap();
        assert!(s.cm().block(0, 2).amax() < 1e-12 && s.cm().block(1, 2).amax() < 1e-12);
        let sh = 3f64.sqrt();
        assert!((s.cm().block(0, 1) - Matrix2::new(sh, 0.0, 0.0, -sh)).amax() < 1e-12);

        let s = pure_three_mode(1.8, 2.3, 2.9).unwrap();
        assert!((s.cm().det() - 1.0).abs() < 1e-8);
        assert!((s.cm().seralian() - 3.0).abs() < 1e-8);
        for (l, a) in [1.8, 2.3, 2.9].iter().enumerate() {
            assert!((s.cm().local_mixedness(l) - a).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_point_matches_fully_symmetric() {
        let a = pure_three_mode(2.0, 2.0, 2.0).unwrap();
        let b = fully_symmetric_pure(3, 2.0).unwrap();
        assert!((a.cm().matrix() - b.cm().matrix()).amax() < 1e-12);
        let g = ghzw(2.0).unwrap();
        assert!((g.cm().matrix() - b.cm().matrix()).amax() < 1e-12);
        let sp = symplectic_spectrum(g.cm()).unwrap();
        assert!(sp.values().iter().all(|v| (v - 1.0).abs() < 1e-8));
    }

    #[test]
    fn residual_closed_forms() {
        let r = residual_contangle_pure(1.0, 2.0, 2.0).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.probe_mode, 0);
        for a in [1.0, 1.2, 2.0, 5.0] {
            let r = residual_contangle_pure(a, a, a).unwrap();
            assert!((r.value - ghzw_residual(a).unwrap()).abs() < 1e-8, "a={a}");
        }
        assert!(ghzw_residual(1.5).unwrap() > 0.0);
        assert!(ghzw(0.9).is_err());
    }

    #[test]
    fn pairwise_terms_match_two_mode_optimum() {
        let mut rng = crate::sample::rng_from_seed(11);
        let mut triples = vec![[1.5, 2.0, 2.4], [2.0, 2.6, 3.1], [1.3, 1.4, 1.6], [3.0, 1.9, 2.2], [1.6, 2.1, 1.6]];
        triples.extend((0..40).map(|_| crate::sample::triangle_triple(4.0, &mut rng)));
        for a in triples {
            let r = residual_contangle_pure(a[0], a[1], a[2]).unwrap();
            let st = pure_three_mode(a[0], a[1], a[2]).unwrap();
            let [j, k] = others(r.probe_mode);
            for (t, other) in [j, k].into_iter().enumerate() {
                let sub = st.cm().submatrix(&[r.probe_mode, other]).unwrap();
                let g = contangle_of_m_squared(gaussian_em_two_mode(&sub).unwrap().m_squared_opt);
                assert!((g - r.pairwise[t]).abs() < 1e-6, "{a:?} term {t}: {g} vs {}", r.pairwise[t]);
            }
        }
    }

    #[test]
    fn promiscuous_blocks() {
        let (s, a) = (0.7f64, 0.4f64);
        let st = four_mode_promiscuous(s, a).unwrap();
        let cm = st.cm();
        let z = Matrix2::new(1.0, 0.0, 0.0, -1.0);
        let id = Matrix2::identity();
        let (ch, sh) = (a.cosh(), a.sinh());
        let expect = [
            (0, 0, id * (ch * ch + (2.0 * s).cosh() * sh * sh)),
            (3, 3, id * (ch * ch + (2.0 * s).cosh() * sh * sh)),
            (1, 1, id * ((2.0 * s).cosh() * ch * ch + sh * sh)),
            (2, 2, id * ((2.0 * s).cosh() * ch * ch + sh * sh)),
            (0, 1, z * (s.cosh().powi(2) * (2.0 * a).sinh())),
            (2, 3, z * (s.cosh().powi(2) * (2.0 * a).sinh())),
            (0, 2, id * (ch * sh * (2.0 * s).sinh())),
            (1, 3, id * (ch * sh * (2.0 * s).sinh())),
            (0, 3, z * (sh * sh * (2.0 * s).sinh())),
            (1, 2, z * (ch * ch * (2.0 * s).sinh())),
        ];
        for (i, j, blk) in expect {
            assert!((cm.block(i, j) - blk).amax() < 1e-10, "block ({i},{j})");
        }
    }

    #[test]
    fn generic_residual_matches_pure_closed_form() {
        let opts = OneToRestOptions::default();
        for a in [[1.5, 1.5, 1.5], [1.5, 2.0, 2.4], [2.0, 1.4, 1.7]] {
            let st = pure_three_mode(a[0], a[1], a[2]).unwrap();
            let g = residual_contangle_generic(st.cm(), SharingMeasure::Contangle, &opts).unwrap();
            let p = residual_contangle_pure(a[0], a[1], a[2]).unwrap();
            assert!((g.value - p.value).abs() < 1e-5, "{a:?}: {} vs {}", g.value, p.value);
            assert_eq!(g.probe_mode, p.probe_mode);
        }
    }

    #[test]
    fn generic_residual_mixed_states() {
        let opts = OneToRestOptions::default();
        let th = crate::state::thermal(&[1.5, 2.0, 1.2]).unwrap();
        let r = residual_contangle_generic(th.cm(), SharingMeasure::Contangle, &opts).unwrap();
        assert!(r.value.abs() < 1e-12);

        let sampler = crate::sample::StateSampler::default();
        let mut rng = crate::sample::rng_from_seed(5);
        for _ in 0..5 {
            let st = sampler.state(3, &mut rng);
            for m in [SharingMeasure::Contangle, SharingMeasure::Tangle] {
                let rep = monogamy_check(st.cm(), m, &opts).unwrap();
                assert!(!rep.has_violation(), "{m}: {rep:?}");
            }
        }
    }

    #[test]
    fn ppt_classes() {
        assert_eq!(ppt_class(vacuum(3).unwrap().cm(), 1e-9).unwrap(), PptClass::PptAll);
        assert_eq!(ppt_class(ghzw(2.0).unwrap().cm(), 1e-9).unwrap(), PptClass::FullyInseparable);
        let tms_vac = pure_three_mode(2.0, 2.0, 1.0).unwrap();
        assert_eq!(ppt_class(tms_vac.cm(), 1e-9).unwrap(), PptClass::OneModeBiseparable);
    }
}
