//! Truncated Fock space of one signal mode and `N` two-level ground-state atoms.
//!
//! Basis states are `|n⟩_photon ⊗ |s_1 … s_N⟩` with `s_j ∈ {g−, g+}`. The index of a basis
//! state is `n · 2^N + bits`, where bit `j` set means atom `j` is in `g+`. Operators act
//! matrix-free on dense amplitude vectors.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::constants::MU_B;
use crate::{Error, Result};

pub const MAX_ATOMS: usize = 12;
pub const MAX_PHOTONS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    n_atoms: usize,
    max_photons: usize,
}

impl FockSpace {
    pub fn new(n_atoms: usize, max_photons: usize) -> Result<Self> {
        if !(1..=MAX_ATOMS).contains(&n_atoms) {
            return Err(Error::InvalidParameter {
                name: "n_atoms",
                reason: "must lie in 1..=12",
            });
        }
        if !(1..=MAX_PHOTONS).contains(&max_photons) {
            return Err(Error::InvalidParameter {
                name: "max_photons",
                reason: "must lie in 1..=3",
            });
        }
        Ok(Self {
            n_atoms,
            max_photons,
        })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn max_photons(&self) -> usize {
        self.max_photons
    }

    fn atom_states(&self) -> usize {
        1 << self.n_atoms
    }

    pub fn dimension(&self) -> usize {
        (self.max_photons + 1) * self.atom_states()
    }

    fn split(&self, index: usize) -> (usize, usize) {
        (index / self.atom_states(), index % self.atom_states())
    }

    fn join(&self, photons: usize, bits: usize) -> usize {
        photons * self.atom_states() + bits
    }

    /// `|0⟩_photon |g− … g−⟩`.
    pub fn vacuum(&self) -> Vec<Complex64> {
        let mut state = vec![Complex64::new(0.0, 0.0); self.dimension()];
        state[0] = Complex64::new(1.0, 0.0);
        state
    }

    /// `a†`, truncated at `max_photons`.
    pub fn create_photon(&self, state: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
        for (i, &amp) in state.iter().enumerate() {
            let (n, bits) = self.split(i);
            if n < self.max_photons {
                out[self.join(n + 1, bits)] += amp * libm::sqrt((n + 1) as f64);
            }
        }
        out
    }

    /// `σ_{+−}^j`: moves atom `j` from `g−` to `g+`.
    pub fn flip_atom(&self, state: &[Complex64], atom: usize) -> Vec<Complex64> {
        let mask = 1 << atom;
        let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
        for (i, &amp) in state.iter().enumerate() {
            let (n, bits) = self.split(i);
            if bits & mask == 0 {
                out[self.join(n, bits | mask)] += amp;
            }
        }
        out
    }

    /// `Ψ† = cos Θ a† − sin Θ N^{-1/2} Σ_j σ_{+−}^j` applied to `state`.
    pub fn polariton_creation(&self, state: &[Complex64], theta: f64) -> Vec<Complex64> {
        let photon = self.create_photon(state);
        let weight = libm::sin(theta) / libm::sqrt(self.n_atoms as f64);
        let mut out: Vec<Complex64> = photon.iter().map(|&a| a * libm::cos(theta)).collect();
        for atom in 0..self.n_atoms {
            for (o, f) in out.iter_mut().zip(self.flip_atom(state, atom)) {
                *o -= f * weight;
            }
        }
        out
    }

    /// `⟨S_z⟩` with `S_z` counting atoms in `g+`.
    pub fn spin_expectation(&self, state: &[Complex64]) -> f64 {
        let amplitude: f64 = state
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * self.split(i).1.count_ones() as f64)
            .sum();
        amplitude / norm_sqr(state)
    }

    /// `⟨a†a⟩`.
    pub fn photon_expectation(&self, state: &[Complex64]) -> f64 {
        let amplitude: f64 = state
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * self.split(i).0 as f64)
            .sum();
        amplitude / norm_sqr(state)
    }
}

pub fn norm_sqr(state: &[Complex64]) -> f64 {
    state.iter().map(|a| a.norm_sqr()).sum()
}

/// One-polariton state `Ψ†|0⟩_p`, normalised.
pub fn fock_build_polariton(fs: &FockSpace, theta: f64) -> Vec<Complex64> {
    let mut state = fs.polariton_creation(&fs.vacuum(), theta);
    let norm = libm::sqrt(norm_sqr(&state));
    state.iter_mut().for_each(|a| *a /= norm);
    state
}

/// `2 g_F μ_B (⟨1|S_z|1⟩ − ⟨0|S_z|0⟩)`, J/T.
pub fn fock_moment(fs: &FockSpace, theta: f64, g_factor: f64) -> f64 {
    let one = fock_build_polariton(fs, theta);
    let difference = fs.spin_expectation(&one) - fs.spin_expectation(&fs.vacuum());
    2.0 * g_factor * MU_B * difference
}
