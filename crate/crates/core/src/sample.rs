//! Seeded random generators for bona fide states and symplectic maps.
//!
//! States are built as S ν Sᵀ from a thermal spectrum and a product of
//! generator maps, so they are physical by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::state::{thermal, GaussianState};
use crate::symplectic::{
    apply, beam_splitter, phase_rotation, single_mode_squeezer, two_mode_squeezer, SymplecticMap,
};

pub type SampleRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct StateSampler {
    /// Thermal eigenvalues are drawn from [1, nu_max].
    pub nu_max: f64,
    /// Scale of the squeezing parameters. Each generator draws from a range
    /// shrunk by the number of squeezers touching a mode, so the overall
    /// squeezing per mode stays comparable across mode counts.
    pub r_max: f64,
    /// Number of generator sweeps over all modes and pairs.
    pub layers: usize,
}

impl Default for StateSampler {
    fn default() -> Self {
        Self {
            nu_max: 4.0,
            r_max: 1.5,
            layers: 2,
        }
    }
}

impl StateSampler {
    pub fn symplectic<R: Rng>(&self, n: usize, rng: &mut R) -> SymplecticMap {
        let mut s = SymplecticMap::identity(n);
        let mut push = |g: Result<SymplecticMap>| {
            s = g.and_then(|g| g.compose(&s)).expect("generator indices are in range");
        };
        let per_layer = self.r_max / (self.layers.max(1) as f64).sqrt();
        let r1 = per_layer / 2f64.sqrt();
        let r2 = per_layer / (2.0 * (n.max(2) - 1) as f64).sqrt();
        for _ in 0..self.layers {
            for j in 0..n {
                push(phase_rotation(rng.random_range(0.0..std::f64::consts::TAU), j, n));
                push(single_mode_squeezer(rng.random_range(-r1..=r1), j, n));
            }
            for i in 0..n {
                for j in i + 1..n {
                    push(beam_splitter(rng.random_range(0.0..=1.0), i, j, n));
                    push(two_mode_squeezer(rng.random_range(-r2..=r2), i, j, n));
                    push(phase_rotation(rng.random_range(0.0..std::f64::consts::TAU), j, n));
                }
            }
        }
        s
    }

    pub fn thermal_spectrum<R: Rng>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| rng.random_range(1.0..=self.nu_max)).collect()
    }

    pub fn state<R: Rng>(&self, n: usize, rng: &mut R) -> GaussianState {
        let nu = self.thermal_spectrum(n, rng);
        self.state_with_spectrum(&nu, rng)
    }

    pub fn pure_state<R: Rng>(&self, n: usize, rng: &mut R) -> GaussianState {
        self.state_with_spectrum(&vec![1.0; n], rng)
    }

    pub fn state_with_spectrum<R: Rng>(&self, nu: &[f64], rng: &mut R) -> GaussianState {
        let th = thermal(nu).expect("spectrum entries are at least 1");
        let s = self.symplectic(nu.len(), rng);
        let cm = apply(&s, th.cm()).expect("dimensions agree");
        GaussianState::from_cm_unchecked(cm)
    }
}

/// Local mixednesses (a1, a2, a3) satisfying the pure three-mode triangle
/// inequality, with a1, a2 uniform in [1, a_max].
pub fn triangle_triple<R: Rng>(a_max: f64, rng: &mut R) -> [f64; 3] {
    let a1 = rng.random_range(1.0..=a_max);
    let a2 = rng.random_range(1.0..=a_max);
    let (p1, p2) = (a1 - 1.0, a2 - 1.0);
    let lo = (p1 - p2).abs();
    let hi = p1 + p2;
    let p3 = if hi > lo { rng.random_range(lo..=hi) } else { lo };
    [a1, a2, 1.0 + p3]
}
