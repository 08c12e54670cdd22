//! Dressed qubit–ζ states in the product basis |l⟩ ⊗ |n⟩.
//!
//! The 0-π part is represented by its lowest `levels` eigenstates, so the
//! Hamiltonian is `Σ E_l |l⟩⟨l| + Ω_ζ a†a + Σ g_ll' |l⟩⟨l'| a + h.c.`,
//! small enough for dense diagonalization. Index of |l, n⟩: `l * (n_max + 1) + n`.

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::{czero, lit, Cplx, Real};
use crate::spectrum::{assign_labels, LabeledSpectrum};

pub const DEFAULT_DRESSED_LEVELS: usize = 15;

/// Dense Hermitian matrix (row-major) of the truncated product-basis model.
pub fn product_hamiltonian<T: Real>(energies: &[T], g: &CMatrix<T>, omega_zeta: T, n_zeta_max: usize) -> Vec<Cplx<T>> {
    let levels = g.dim().min(energies.len());
    let z = n_zeta_max + 1;
    let dim = levels * z;
    let mut h = vec![czero(); dim * dim];
    for l in 0..levels {
        for n in 0..z {
            let r = l * z + n;
            h[r * dim + r] = Cplx::new(energies[l] + omega_zeta * T::from_usize(n).unwrap(), T::zero());
            if n + 1 < z {
                let amp = T::from_usize(n + 1).unwrap().sqrt();
                for lp in 0..levels {
                    let c = lp * z + n + 1;
                    let v = g.get(l, lp).scale(amp);
                    h[r * dim + c] = h[r * dim + c] + v;
                    h[c * dim + r] = h[c * dim + r] + v.conj();
                }
            }
        }
    }
    h
}

#[derive(Debug, Clone)]
pub struct DressedSpectrum<T> {
    pub levels: usize,
    pub n_zeta_max: usize,
    /// Bare 0-π energies E_l the model was built from, GHz.
    pub bare_energies: Vec<T>,
    pub omega_zeta: T,
    /// Ascending.
    pub energies: Vec<T>,
    /// Eigenvector j occupies `vectors[j * dim .. (j + 1) * dim]`.
    vectors: Vec<Cplx<T>>,
    /// Labels cover the states with energy below `cutoff`, GHz.
    pub labels: LabeledSpectrum<T>,
    pub cutoff: T,
}

impl<T: Real> DressedSpectrum<T> {
    pub fn dim(&self) -> usize {
        self.levels * (self.n_zeta_max + 1)
    }

    pub fn vector(&self, j: usize) -> &[Cplx<T>] {
        let d = self.dim();
        &self.vectors[j * d..(j + 1) * d]
    }

    /// Index of the state labeled (l, n).
    pub fn state(&self, l: usize, n: usize) -> Option<usize> {
        self.labels.find(l, n).map(|s| s.index)
    }

    /// Energy of the state labeled (l, n), GHz.
    pub fn energy(&self, l: usize, n: usize) -> Option<T> {
        self.labels.find(l, n).map(|s| s.energy)
    }

    /// `(O ⊗ 1) |ψ_j⟩` for an operator given by its matrix over the 0-π levels.
    pub fn apply_qubit_operator(&self, op: &CMatrix<T>, j: usize) -> Vec<Cplx<T>> {
        let z = self.n_zeta_max + 1;
        let psi = self.vector(j);
        let mut out = vec![czero(); self.dim()];
        for l in 0..self.levels {
            for lp in 0..self.levels {
                let o = op.get(l, lp);
                if o.re == T::zero() && o.im == T::zero() {
                    continue;
                }
                for n in 0..z {
                    out[l * z + n] = out[l * z + n] + o * psi[lp * z + n];
                }
            }
        }
        out
    }

    /// `a† |ψ_j⟩`, truncated at the Fock cutoff.
    pub fn apply_creation(&self, j: usize) -> Vec<Cplx<T>> {
        let z = self.n_zeta_max + 1;
        let psi = self.vector(j);
        let mut out = vec![czero(); self.dim()];
        for l in 0..self.levels {
            for n in 0..z - 1 {
                out[l * z + n + 1] = psi[l * z + n].scale(T::from_usize(n + 1).unwrap().sqrt());
            }
        }
        out
    }

    /// `a |ψ_j⟩`.
    pub fn apply_annihilation(&self, j: usize) -> Vec<Cplx<T>> {
        let z = self.n_zeta_max + 1;
        let psi = self.vector(j);
        let mut out = vec![czero(); self.dim()];
        for l in 0..self.levels {
            for n in 1..z {
                out[l * z + n - 1] = psi[l * z + n].scale(T::from_usize(n).unwrap().sqrt());
            }
        }
        out
    }

    /// |⟨ψ_f| v⟩|² for every state f.
    pub fn overlaps_with(&self, v: &[Cplx<T>]) -> Vec<T> {
        (0..self.energies.len()).map(|f| crate::scalar::inner(self.vector(f), v).norm_sqr()).collect()
    }
}

/// Energy of the bare state (0, n_zeta_max): states above it sit on the
/// Fock truncation edge.
pub fn fock_edge<T: Real>(energies: &[T], omega_zeta: T, n_zeta_max: usize) -> T {
    energies[0] + omega_zeta * lit(n_zeta_max as f64)
}

/// Diagonalizes the product-basis model and labels every state.
pub fn dressed_spectrum<T: Real>(
    energies: &[T],
    g: &CMatrix<T>,
    omega_zeta: T,
    n_zeta_max: usize,
    threshold: f64,
) -> Result<DressedSpectrum<T>> {
    dressed_spectrum_below(energies, g, omega_zeta, n_zeta_max, threshold, T::infinity())
}

/// As [`dressed_spectrum`], labeling only the states with energy below
/// `cutoff` (GHz).
pub fn dressed_spectrum_below<T: Real>(
    energies: &[T],
    g: &CMatrix<T>,
    omega_zeta: T,
    n_zeta_max: usize,
    threshold: f64,
    cutoff: T,
) -> Result<DressedSpectrum<T>> {
    let levels = g.dim();
    if levels == 0 || energies.len() < levels {
        return Err(Error::Usage(format!("{} energies for a {levels}-level coupling matrix", energies.len())));
    }
    let z = n_zeta_max + 1;
    let dim = levels * z;
    let h = product_hamiltonian(energies, g, omega_zeta, n_zeta_max);
    let (vals, vecs) = T::hermitian_eigh(dim, &h);
    let retained: Vec<usize> = (0..dim).filter(|&j| vals[j] < cutoff).collect();
    let kept: Vec<T> = retained.iter().map(|&j| vals[j]).collect();
    let mut labels = assign_labels(&kept, levels, z, threshold, |i, l, n| {
        crate::scalar::to_f64(vecs[retained[i] * dim + l * z + n].norm_sqr())
    })?;
    for st in &mut labels.states {
        st.index = retained[st.index];
    }
    Ok(DressedSpectrum {
        levels,
        n_zeta_max,
        bare_energies: energies[..levels].to_vec(),
        omega_zeta,
        energies: vals,
        vectors: vecs,
        labels,
        cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn two_levels_two_fock_states_match_hand_diagonalization() {
        // Basis |0,0>, |0,1>, |1,0>, |1,1>; only |0,0> <-> |1,1> and
        // |0,1> <-> |1,0> couple for a purely off-diagonal g.
        let mut g = CMatrix::<f64>::zeros(2);
        let c = cplx(0.01, 0.004);
        g.set(0, 1, c);
        g.set(1, 0, c.conj());
        let (e0, e1, w) = (0.0, 0.3, 0.1);
        let d = dressed_spectrum(&[e0, e1], &g, w, 1, 0.5).unwrap();
        let pair = |a: f64, b: f64, x: f64| {
            let m = 0.5 * (a + b);
            let r = (0.25 * (a - b) * (a - b) + x * x).sqrt();
            [m - r, m + r]
        };
        let mut want = Vec::new();
        want.extend(pair(e0, e1 + w, c.norm()));
        want.extend(pair(e0 + w, e1, c.norm()));
        want.sort_by(f64::total_cmp);
        for (a, b) in d.energies.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert_eq!(d.state(0, 0), Some(0));
    }

    #[test]
    fn decoupled_model_has_exact_labels() {
        let g = CMatrix::<f64>::zeros(3);
        let d = dressed_spectrum(&[0.0, 0.05, 0.7], &g, 0.11, 4, 0.5).unwrap();
        assert!(d.labels.states.iter().all(|s| s.overlap == 1.0 && !s.hybridized));
        assert!((d.energy(1, 3).unwrap() - (0.05 + 3.0 * 0.11)).abs() < 1e-14);
    }

    #[test]
    fn creation_operator_on_bare_states() {
        let g = CMatrix::<f64>::zeros(1);
        let d = dressed_spectrum(&[0.0], &g, 1.0, 3, 0.5).unwrap();
        let v = d.apply_creation(d.state(0, 2).unwrap());
        let ov = d.overlaps_with(&v);
        assert!((ov[d.state(0, 3).unwrap()] - 3.0).abs() < 1e-12);
    }
}
