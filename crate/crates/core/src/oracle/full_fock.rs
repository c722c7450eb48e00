//! Brute-force joint evolution of the qubit and every bin at once.
//!
//! The state vector lives on `2 ⊗ (n_max+1)^n_bins`, so this is only usable
//! on coarse grids; it validates the traced two-body stepper, whose fresh-bin
//! product structure makes it exact rather than approximate.

use num_complex::Complex64;

use super::linalg::{self, c, CMatrix, CVector};
use super::two_body::{self, collision_unitary};
use crate::error::{Error, Result};

/// Largest joint dimension accepted.
pub const MAX_DIMENSION: usize = 1 << 25;

/// Largest number of bins accepted.
pub const MAX_BINS: usize = 14;

/// Initial field state of the bins.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldInput {
    /// Product of coherent states with these `⟨a_n⟩`.
    Coherent(Vec<Complex64>),
    /// One photon with these bin weights.
    SinglePhoton(Vec<Complex64>),
}

impl FieldInput {
    fn n_bins(&self) -> usize {
        match self {
            FieldInput::Coherent(a) | FieldInput::SinglePhoton(a) => a.len(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FullFockRun {
    /// Qubit density matrix before the first and after every collision.
    pub qubit_marginals: Vec<CMatrix>,
    /// Norm of the global state at the same times.
    pub norms: Vec<f64>,
}

fn joint_dimension(n_bins: usize, n_max: usize) -> Option<usize> {
    (n_max + 1).checked_pow(n_bins as u32)?.checked_mul(2)
}

/// Evolve `qubit ⊗ field` through `n_bins` collisions.
///
/// `qubit` holds the `(g, e)` amplitudes of a pure initial qubit state.
pub fn simulate_full_fock(
    qubit: [Complex64; 2],
    field: &FieldInput,
    n_max: usize,
    gamma: f64,
    dt: f64,
) -> Result<FullFockRun> {
    let n_bins = field.n_bins();
    if n_bins == 0 || n_bins > MAX_BINS {
        return Err(Error::domain(format!(
            "full Fock simulation takes 1..={MAX_BINS} bins, got {n_bins}"
        )));
    }
    let dim = joint_dimension(n_bins, n_max)
        .filter(|d| *d <= MAX_DIMENSION)
        .ok_or_else(|| {
            Error::domain(format!(
                "joint dimension 2·{}^{n_bins} exceeds 2^25",
                n_max + 1
            ))
        })?;
    let d = n_max + 1;
    let field_dim = dim / 2;

    let mut psi = CVector::zeros(dim);
    match field {
        FieldInput::Coherent(amps) => {
            let bins: Vec<CVector> = amps
                .iter()
                .map(|a| two_body::coherent_bin_state(*a, n_max))
                .collect();
            for f in 0..field_dim {
                let mut amp = c(1.0);
                let mut rest = f;
                for bin in &bins {
                    amp *= bin[rest % d];
                    rest /= d;
                }
                for (q, qa) in qubit.iter().enumerate() {
                    psi[q * field_dim + f] = qa * amp;
                }
            }
        }
        FieldInput::SinglePhoton(weights) => {
            if n_max < 1 {
                return Err(Error::domain("single-photon input needs n_max ≥ 1"));
            }
            for (k, w) in weights.iter().enumerate() {
                let f = d.pow(k as u32);
                for (q, qa) in qubit.iter().enumerate() {
                    psi[q * field_dim + f] = qa * w;
                }
            }
        }
    }

    let u = collision_unitary(gamma, dt, n_max)?;
    let mut run = FullFockRun {
        qubit_marginals: vec![qubit_marginal(&psi, field_dim)],
        norms: vec![psi.norm()],
    };
    let mut local = CVector::zeros(2 * d);
    for k in 0..n_bins {
        let stride = d.pow(k as u32);
        for f in 0..field_dim {
            if !(f / stride).is_multiple_of(d) {
                continue;
            }
            for q in 0..2 {
                for n in 0..d {
                    local[q * d + n] = psi[q * field_dim + f + n * stride];
                }
            }
            let out = &u * &local;
            for q in 0..2 {
                for n in 0..d {
                    psi[q * field_dim + f + n * stride] = out[q * d + n];
                }
            }
        }
        run.qubit_marginals.push(qubit_marginal(&psi, field_dim));
        run.norms.push(psi.norm());
    }
    Ok(run)
}

fn qubit_marginal(psi: &CVector, field_dim: usize) -> CMatrix {
    let mut rho = CMatrix::zeros(2, 2);
    for q in 0..2 {
        for p in 0..2 {
            let mut acc = c(0.0);
            for f in 0..field_dim {
                acc += psi[q * field_dim + f] * psi[p * field_dim + f].conj();
            }
            rho[(q, p)] = acc;
        }
    }
    rho
}

/// Qubit marginals of the traced two-body stepper for the same coherent
/// input, for comparison with [`simulate_full_fock`].
pub fn two_body_marginals(
    qubit: [Complex64; 2],
    amplitudes: &[Complex64],
    n_max: usize,
    gamma: f64,
    dt: f64,
) -> Result<Vec<CMatrix>> {
    let u = collision_unitary(gamma, dt, n_max)?;
    let v = CVector::from_vec(qubit.to_vec());
    let mut rho = linalg::outer(&v);
    let mut out = vec![rho.clone()];
    for a in amplitudes {
        let step = two_body::step_collision_coherent(
            &rho,
            &two_body::coherent_bin_state(*a, n_max),
            &u,
            dt,
        )?;
        rho = step.qubit;
        out.push(rho.clone());
    }
    Ok(out)
}

/// Largest entrywise difference between two marginal sequences.
pub fn max_marginal_deviation(a: &[CMatrix], b: &[CMatrix]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).iter().map(|z| z.norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}
