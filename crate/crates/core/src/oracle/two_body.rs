//! Traced two-body collision stepper: qubit ⊗ current bin.
//!
//! For coherent input each fresh bin is uncorrelated with the qubit before
//! it collides, so evolving `U(ρ_q ⊗ |α⟩⟨α|)U†` and tracing the bin out
//! reproduces the exact qubit marginal.

use num_complex::Complex64;

use super::bins::TimeBins;
use super::linalg::{self, c, CMatrix, CVector};
use crate::error::{Error, Result};
use crate::pulse::Statistics;
use crate::qubit::QubitState;

/// Tolerance on trace and Hermiticity of joint states.
pub const STATE_TOLERANCE: f64 = 1e-10;

/// Most negative eigenvalue a joint state may show before the Fock
/// truncation is deemed too small.
pub const POSITIVITY_TOLERANCE: f64 = 1e-9;

/// Poisson tail mass tolerated when choosing `n_max` automatically.
pub const FOCK_TAIL: f64 = 1e-8;

/// Smallest `n` such that a Poisson distribution of mean `mean` puts less
/// than `tail` probability above `n`. Never below 1.
pub fn poisson_cutoff(mean: f64, tail: f64) -> usize {
    let mut term = (-mean).exp();
    let mut cdf = term;
    let mut n = 0;
    while 1.0 - cdf >= tail && n < 200 {
        n += 1;
        term *= mean / n as f64;
        cdf += term;
    }
    n.max(1)
}

/// Per-step generator `√(γΔt)(σ₊a − σ₋a†)` on `2 ⊗ (n_max+1)`.
pub fn collision_generator(gamma: f64, dt: f64, n_max: usize) -> CMatrix {
    let d = n_max + 1;
    let a = linalg::kron(&CMatrix::identity(2, 2), &linalg::lowering(d));
    let sm = linalg::kron(&linalg::sigma_minus(), &CMatrix::identity(d, d));
    let term = linalg::dagger(&sm) * &a;
    (&term - linalg::dagger(&term)) * c((gamma * dt).sqrt())
}

/// Coupling Hamiltonian `V` (rate units) such that `U = exp(−iVΔt)`.
pub fn coupling_hamiltonian(gamma: f64, dt: f64, n_max: usize) -> CMatrix {
    collision_generator(gamma, dt, n_max) * Complex64::new(0.0, 1.0 / dt)
}

/// Exact unitary for one collision of duration `dt`.
pub fn collision_unitary(gamma: f64, dt: f64, n_max: usize) -> Result<CMatrix> {
    if n_max < 1 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    if !(dt > 0.0 && gamma > 0.0) {
        return Err(Error::domain("dt and gamma must be positive"));
    }
    Ok(linalg::expm_anti_hermitian(&collision_generator(
        gamma, dt, n_max,
    )))
}

/// Coherent state `|α⟩` truncated to `n_max` photons and renormalized.
pub fn coherent_bin_state(alpha: Complex64, n_max: usize) -> CVector {
    let mut v = CVector::zeros(n_max + 1);
    let mut term = c(1.0);
    for n in 0..=n_max {
        if n > 0 {
            term *= alpha / (n as f64).sqrt();
        }
        v[n] = term;
    }
    let norm = v.norm();
    v / c(norm)
}

#[derive(Debug, Clone)]
pub struct CollisionStepState {
    /// Qubit density matrix after the collision, `(g, e)` basis.
    pub qubit: CMatrix,
    pub bin_in: CVector,
    /// Joint state before (`ρ_q ⊗ ρ_bin`) and after the collision.
    pub joint_pre: CMatrix,
    pub joint_post: CMatrix,
    /// `⟨a_bin⟩_post / √Δt`.
    pub output_amplitude: Complex64,
    /// `⟨a†a⟩_post`.
    pub output_photons: f64,
}

pub(crate) fn check_state(rho: &CMatrix) -> Result<()> {
    let tr = linalg::trace(rho);
    if (tr - c(1.0)).norm() > STATE_TOLERANCE {
        return Err(Error::Numerical(format!(
            "joint state trace {tr} differs from 1"
        )));
    }
    let herm = linalg::hermiticity_residual(rho);
    if herm > STATE_TOLERANCE {
        return Err(Error::Numerical(format!(
            "joint state not Hermitian (residual {herm:e})"
        )));
    }
    let min_eig = linalg::min_eigenvalue(rho);
    if min_eig < -POSITIVITY_TOLERANCE {
        return Err(Error::Truncation(format!(
            "joint state eigenvalue {min_eig:e} is negative"
        )));
    }
    Ok(())
}

/// One collision between the qubit and a fresh bin in pure state `bin`.
pub fn step_collision_coherent(
    qubit: &CMatrix,
    bin: &CVector,
    u: &CMatrix,
    dt: f64,
) -> Result<CollisionStepState> {
    let d = bin.len();
    if u.nrows() != 2 * d || qubit.nrows() != 2 {
        return Err(Error::domain(
            "collision unitary does not match qubit ⊗ bin dimension",
        ));
    }
    if (bin.norm() - 1.0).abs() > STATE_TOLERANCE {
        return Err(Error::domain("bin state must be normalized"));
    }
    let joint_pre = linalg::kron(qubit, &linalg::outer(bin));
    let joint_post = u * &joint_pre * u.adjoint();
    check_state(&joint_post)?;
    let field = linalg::trace_out_qubit(&joint_post, d);
    let a = linalg::lowering(d);
    let output_amplitude = (&a * &field).trace() / dt.sqrt();
    let output_photons = (linalg::dagger(&a) * &a * &field).trace().re;
    Ok(CollisionStepState {
        qubit: linalg::trace_out_bin(&joint_post, d),
        bin_in: bin.clone(),
        joint_pre,
        joint_post,
        output_amplitude,
        output_photons,
    })
}

/// Energy flows of one collision, split into work and correlation parts for
/// both subsystems (rate × ħω₀ units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowDecomposition {
    pub work_qubit: f64,
    pub correlation_qubit: f64,
    pub work_field: f64,
    pub correlation_field: f64,
}

/// Evaluate the effective-drive work flows and the correlation remainder at
/// the midpoint state `(pre + post)/2` of a collision.
///
/// `coupling` is the coupling Hamiltonian on qubit ⊗ bin. The effective
/// drive on each side is `Tr_other[V ρ_other]`, its work flow is
/// `−i Tr{[H_k, 𝓗^k] ρ^k}`, and the correlation flow is
/// `−i Tr{H_k [V, χ]}` with `χ = ρ − ρ^q ⊗ ρ^f`.
pub fn decompose_energy_flows(
    pre: &CMatrix,
    post: &CMatrix,
    coupling: &CMatrix,
) -> FlowDecomposition {
    let d = pre.nrows() / 2;
    let rho = (pre + post) * c(0.5);
    let rho_q = linalg::trace_out_bin(&rho, d);
    let rho_f = linalg::trace_out_qubit(&rho, d);
    let id_q = CMatrix::identity(2, 2);
    let id_f = CMatrix::identity(d, d);

    let n_q = linalg::dagger(&linalg::sigma_minus()) * linalg::sigma_minus();
    let a = linalg::lowering(d);
    let n_f = linalg::dagger(&a) * &a;

    let drive_q = linalg::trace_out_bin(&(coupling * linalg::kron(&id_q, &rho_f)), d);
    let drive_f = linalg::trace_out_qubit(&(coupling * linalg::kron(&rho_q, &id_f)), d);
    let minus_i = Complex64::new(0.0, -1.0);
    let work_qubit = (minus_i * (linalg::commutator(&n_q, &drive_q) * &rho_q).trace()).re;
    let work_field = (minus_i * (linalg::commutator(&n_f, &drive_f) * &rho_f).trace()).re;

    let chi = &rho - linalg::kron(&rho_q, &rho_f);
    let v_chi = linalg::commutator(coupling, &chi);
    let correlation_qubit = (minus_i * (linalg::kron(&n_q, &id_f) * &v_chi).trace()).re;
    let correlation_field = (minus_i * (linalg::kron(&id_q, &n_f) * &v_chi).trace()).re;
    FlowDecomposition {
        work_qubit,
        correlation_qubit,
        work_field,
        correlation_field,
    }
}

/// Qubit energy `⟨σ₊σ₋⟩` and bin energy `⟨a†a⟩` of a joint state.
pub fn local_energies(rho: &CMatrix) -> (f64, f64) {
    let d = rho.nrows() / 2;
    let rq = linalg::trace_out_bin(rho, d);
    let rf = linalg::trace_out_qubit(rho, d);
    let nf: f64 = (0..d).map(|n| n as f64 * rf[(n, n)].re).sum();
    (rq[(1, 1)].re, nf)
}

/// Per-step record of a coherent oracle run.
#[derive(Debug, Clone)]
pub struct CoherentOracleRun {
    pub gamma: f64,
    pub dt: f64,
    pub n_max: usize,
    /// `t0` followed by the end time of every collision.
    pub times: Vec<f64>,
    /// Qubit state at each of `times`.
    pub states: Vec<QubitState>,
    /// Per bin: `⟨a_in⟩ = α_n/√Δt` and `⟨a_out⟩ = ⟨a⟩_post/√Δt`.
    pub input_amplitude: Vec<Complex64>,
    pub output_amplitude: Vec<Complex64>,
    pub flows: Vec<FlowDecomposition>,
    /// `(U^q_post − U^q_pre)/Δt` per collision.
    pub qubit_energy_rate: Vec<f64>,
    /// `ΔU^q + ΔU^f` per collision (ħω₀).
    pub energy_exchange: Vec<f64>,
    /// `⟨V⟩` at the collision midpoint (rate units).
    pub mean_coupling: Vec<f64>,
}

impl CoherentOracleRun {
    pub fn max_action_reaction(&self) -> f64 {
        self.flows
            .iter()
            .map(|f| (f.work_qubit + f.work_field).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_energy_exchange(&self) -> f64 {
        self.energy_exchange
            .iter()
            .map(|e| e.abs())
            .fold(0.0, f64::max)
    }

    pub fn max_mean_coupling(&self) -> f64 {
        self.mean_coupling
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    }

    /// `max_n |⟨a_out⟩ − (⟨a_in⟩ − √γ⟨σ₋⟩)|`, the dipole taken at the
    /// collision midpoint.
    pub fn input_output_deviation(&self) -> f64 {
        let sg = self.gamma.sqrt();
        (0..self.flows.len())
            .map(|n| {
                let s_mid = 0.5 * (self.states[n].sigma_minus() + self.states[n + 1].sigma_minus());
                (self.output_amplitude[n] - (self.input_amplitude[n] - sg * s_mid)).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `max_n |Ẇ^q + Q̇^q − ΔU^q/Δt|`: consistency of the decomposition with
    /// the finite-difference energy change.
    pub fn max_decomposition_gap(&self) -> f64 {
        self.flows
            .iter()
            .zip(&self.qubit_energy_rate)
            .map(|(f, r)| (f.work_qubit + f.correlation_qubit - r).abs())
            .fold(0.0, f64::max)
    }
}

/// Collide `s0` with every coherent bin in turn.
///
/// `n_max = None` picks the smallest cutoff whose Poisson tail at the most
/// populated bin is below [`FOCK_TAIL`].
pub fn run_coherent_oracle(
    bins: &TimeBins,
    s0: QubitState,
    n_max: Option<usize>,
    gamma: f64,
) -> Result<CoherentOracleRun> {
    if bins.statistics != Statistics::Coherent {
        return Err(Error::domain(
            "the two-body stepper is exact only for coherent bins",
        ));
    }
    s0.validate()?;
    let n_max = n_max.unwrap_or_else(|| poisson_cutoff(bins.max_occupation(), FOCK_TAIL));
    let u = collision_unitary(gamma, bins.dt, n_max)?;
    let v = coupling_hamiltonian(gamma, bins.dt, n_max);
    let sdt = bins.dt.sqrt();

    let mut qubit = linalg::from_array2(&s0.density());
    let mut run = CoherentOracleRun {
        gamma,
        dt: bins.dt,
        n_max,
        times: vec![bins.t0],
        states: vec![s0],
        input_amplitude: Vec::with_capacity(bins.len()),
        output_amplitude: Vec::with_capacity(bins.len()),
        flows: Vec::with_capacity(bins.len()),
        qubit_energy_rate: Vec::with_capacity(bins.len()),
        energy_exchange: Vec::with_capacity(bins.len()),
        mean_coupling: Vec::with_capacity(bins.len()),
    };
    for (n, &alpha) in bins.amplitudes.iter().enumerate() {
        let bin = coherent_bin_state(alpha, n_max);
        let step = step_collision_coherent(&qubit, &bin, &u, bins.dt)?;
        let (uq0, uf0) = local_energies(&step.joint_pre);
        let (uq1, uf1) = local_energies(&step.joint_post);
        let mid = (&step.joint_pre + &step.joint_post) * c(0.5);
        run.flows.push(decompose_energy_flows(
            &step.joint_pre,
            &step.joint_post,
            &v,
        ));
        run.qubit_energy_rate.push((uq1 - uq0) / bins.dt);
        run.energy_exchange.push((uq1 - uq0) + (uf1 - uf0));
        run.mean_coupling.push((&v * &mid).trace().re);
        run.input_amplitude.push(alpha / sdt);
        run.output_amplitude.push(step.output_amplitude);
        qubit = step.qubit;
        run.times.push(bins.end(n));
        run.states
            .push(QubitState::from_density(&linalg::to_array2(&qubit)));
    }
    Ok(run)
}
