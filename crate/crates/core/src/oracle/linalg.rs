//! Small dense complex matrices on qubit ⊗ bin spaces.
//!
//! Joint basis ordering is `|q, n⟩ ↦ q·d + n` with `q = 0` for `|g⟩`,
//! `q = 1` for `|e⟩` and `d = n_max + 1` Fock levels per bin.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Truncated annihilation operator on `d` Fock levels.
pub fn lowering(d: usize) -> CMatrix {
    let mut a = CMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = c((n as f64).sqrt());
    }
    a
}

/// `σ₋ = |g⟩⟨e|`.
pub fn sigma_minus() -> CMatrix {
    let mut s = CMatrix::zeros(2, 2);
    s[(0, 1)] = c(1.0);
    s
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.trace()
}

/// `Tr_bin ρ` for a joint matrix on `2 ⊗ d`.
pub fn trace_out_bin(rho: &CMatrix, d: usize) -> CMatrix {
    let mut out = CMatrix::zeros(2, 2);
    for q in 0..2 {
        for p in 0..2 {
            let mut acc = c(0.0);
            for n in 0..d {
                acc += rho[(q * d + n, p * d + n)];
            }
            out[(q, p)] = acc;
        }
    }
    out
}

/// `Tr_qubit ρ` for a joint matrix on `2 ⊗ d`.
pub fn trace_out_qubit(rho: &CMatrix, d: usize) -> CMatrix {
    let mut out = CMatrix::zeros(d, d);
    for n in 0..d {
        for m in 0..d {
            out[(n, m)] = rho[(n, m)] + rho[(d + n, d + m)];
        }
    }
    out
}

/// `exp(G)` for anti-Hermitian `G`, via the eigendecomposition of the
/// Hermitian `iG`.
pub fn expm_anti_hermitian(g: &CMatrix) -> CMatrix {
    let h = g * Complex64::i();
    let h = (&h + h.adjoint()) * c(0.5);
    let eig = h.symmetric_eigen();
    let phases = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// `max |(U†U − 1)_ij|`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - CMatrix::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_residual(a: &CMatrix) -> f64 {
    (a - a.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    let h = (a + a.adjoint()) * c(0.5);
    h.symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn to_array2(m: &CMatrix) -> [[Complex64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

pub fn from_array2(m: &[[Complex64; 2]; 2]) -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| m[i][j])
}
