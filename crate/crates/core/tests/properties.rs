use nalgebra::Matrix2;
use num_complex::Complex64;
use proptest::prelude::*;

use wgqed::coherent::{correlation_flow, integrate_obe};
use wgqed::config::parse_config;
use wgqed::energetics::{assemble_ledger, classical_bound_witness, Trajectory};
use wgqed::oracle::linalg::{from_array2, kron, outer};
use wgqed::oracle::two_body::{
    coherent_bin_state, collision_unitary, coupling_hamiltonian, decompose_energy_flows,
    local_energies,
};
use wgqed::pulse::{Pulse, Shape};
use wgqed::qubit::{ergotropy, qubit_energy, QubitState};
use wgqed::runner::run_scenario;
use wgqed::single_photon::integrate_single_excitation;
use wgqed::units::{TimeGrid, UnitsConvention};

type C = Complex64;

/// A point in the Bloch ball, uniform in direction and radius.
fn bloch_state() -> impl Strategy<Value = QubitState> {
    (0.0..1.0f64, -1.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, cos_t, phi)| {
        let sin_t = (1.0 - cos_t * cos_t).sqrt();
        QubitState::new(r * sin_t * phi.cos(), r * sin_t * phi.sin(), r * cos_t).unwrap()
    })
}

fn density(s: &QubitState) -> Matrix2<C> {
    let d = s.density();
    Matrix2::new(d[0][0], d[0][1], d[1][0], d[1][1])
}

/// `exp(−iθ/2 n·σ)` in the `(g, e)` basis, `n` from polar angles.
fn su2(alpha: f64, beta: f64, theta: f64) -> Matrix2<C> {
    let n = [
        alpha.sin() * beta.cos(),
        alpha.sin() * beta.sin(),
        alpha.cos(),
    ];
    let i = C::new(0.0, 1.0);
    // σ_z = |e⟩⟨e| − |g⟩⟨g| with g first.
    let sx = Matrix2::new(
        C::new(0.0, 0.0),
        C::new(1.0, 0.0),
        C::new(1.0, 0.0),
        C::new(0.0, 0.0),
    );
    let sy = Matrix2::new(C::new(0.0, 0.0), i, -i, C::new(0.0, 0.0));
    let sz = Matrix2::new(
        C::new(-1.0, 0.0),
        C::new(0.0, 0.0),
        C::new(0.0, 0.0),
        C::new(1.0, 0.0),
    );
    let ns = sx * C::new(n[0], 0.0) + sy * C::new(n[1], 0.0) + sz * C::new(n[2], 0.0);
    Matrix2::identity() * C::new((theta / 2.0).cos(), 0.0) - ns * (i * (theta / 2.0).sin())
}

fn energy_after(rho: &Matrix2<C>, p: [f64; 3]) -> f64 {
    let u = su2(p[0], p[1], p[2]);
    (u * rho * u.adjoint())[(1, 1)].re
}

/// `E(ρ) − min_U E(UρU†)` by grid search over SU(2) with local refinement.
fn brute_force_ergotropy(s: &QubitState) -> f64 {
    use std::f64::consts::PI;
    let rho = density(s);
    let mut best = ([0.0; 3], f64::INFINITY);
    let n = 16;
    for a in 0..=n {
        for b in 0..n {
            for t in 0..=n {
                let p = [
                    PI * a as f64 / n as f64,
                    2.0 * PI * b as f64 / n as f64,
                    2.0 * PI * t as f64 / n as f64,
                ];
                let e = energy_after(&rho, p);
                if e < best.1 {
                    best = (p, e);
                }
            }
        }
    }
    let mut step = [PI / n as f64, 2.0 * PI / n as f64, 2.0 * PI / n as f64];
    for _ in 0..60 {
        let centre = best.0;
        for da in -2..=2 {
            for db in -2..=2 {
                for dtheta in -2..=2 {
                    let p = [
                        centre[0] + da as f64 * step[0] / 2.0,
                        centre[1] + db as f64 * step[1] / 2.0,
                        centre[2] + dtheta as f64 * step[2] / 2.0,
                    ];
                    let e = energy_after(&rho, p);
                    if e < best.1 {
                        best = (p, e);
                    }
                }
            }
        }
        for s in &mut step {
            *s *= 0.7;
        }
    }
    rho[(1, 1)].re - best.1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ergotropy_matches_unitary_search(s in bloch_state()) {
        let e = ergotropy(&s).unwrap();
        let b = brute_force_ergotropy(&s);
        prop_assert!((e - b).abs() < 1e-6, "closed form {e}, search {b}");
    }

    #[test]
    fn ergotropy_ignores_phase(s in bloch_state(), phi in 0.0..std::f64::consts::TAU) {
        let (c, sn) = (phi.cos(), phi.sin());
        let rotated = QubitState::new(c * s.x - sn * s.y, sn * s.x + c * s.y, s.z).unwrap();
        prop_assert!((ergotropy(&s).unwrap() - ergotropy(&rotated).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn ergotropy_within_energy(s in bloch_state()) {
        let e = ergotropy(&s).unwrap();
        prop_assert!(e >= 0.0);
        prop_assert!(e <= qubit_energy(&s).unwrap() + 1e-15);
    }

    #[test]
    fn correlation_flow_never_positive(s in bloch_state(), gamma in 0.1..10.0f64) {
        let pe = s.excited_population();
        prop_assert!(s.sigma_minus().norm_sqr() <= pe * (1.0 - pe) + 1e-15);
        prop_assert!(correlation_flow(&s, gamma) <= 1e-15);
    }

    #[test]
    fn collision_flows_balance(
        s in bloch_state(),
        re in -0.5..0.5f64,
        im in -0.5..0.5f64,
        dt in 1e-3..0.1f64,
    ) {
        let n_max = 6;
        let u = collision_unitary(1.0, dt, n_max).unwrap();
        let v = coupling_hamiltonian(1.0, dt, n_max);
        let bin = coherent_bin_state(C::new(re, im), n_max);
        let pre = kron(&from_array2(&s.density()), &outer(&bin));
        let post = &u * &pre * u.adjoint();
        let f = decompose_energy_flows(&pre, &post, &v);
        prop_assert!((f.work_qubit + f.work_field).abs() < 1e-10);
        let (q0, f0) = local_energies(&pre);
        let (q1, f1) = local_energies(&post);
        prop_assert!(((q1 - q0) + (f1 - f0)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coherent_bound_for_any_start(s in bloch_state(), n in 0.1..4.0f64) {
        let p = Pulse::coherent_with_photons(Shape::RisingExponential { rate: 1.0 }, (-5.0, 0.0), n).unwrap();
        let grid = TimeGrid::new(-5.0, 5.0, 1e-2).unwrap();
        let traj = integrate_obe(&p, s, &grid, 1.0).unwrap();
        let ledger = assemble_ledger(&Trajectory::Coherent(traj), UnitsConvention::new(1.0, 1.0).unwrap()).unwrap();
        prop_assert!(ledger.correlation().iter().all(|q| *q <= 1e-9));
        prop_assert!(!classical_bound_witness(&ledger).violation);
        prop_assert!(ledger.balance_residual() < 1e-6);
    }

    #[test]
    fn mode_matched_pulse_wins(w in 20..500u32, d in 20..1000u32) {
        // Widths and durations on the 0.01 grid keep pulse edges commensurate.
        let (width, duration) = (w as f64 / 100.0, d as f64 / 100.0);
        let grid = TimeGrid::new(-30.0, 20.0, 1e-2).unwrap();
        let peak = |shape: Shape| {
            let p = Pulse::single_photon(shape, shape.default_support()).unwrap();
            let t = integrate_single_excitation(&p, &grid, 1.0).unwrap();
            t.excited_population.iter().cloned().fold(0.0, f64::max)
        };
        let matched = peak(Shape::RisingExponential { rate: 1.0 });
        let gaussian = peak(Shape::Gaussian { center: 0.0, width });
        let square = peak(Shape::Square { start: -10.0, duration });
        prop_assert!(matched > gaussian);
        prop_assert!(matched > square);
    }

    #[test]
    fn config_round_trip(
        kind in 0..3usize,
        pulse in 0..3usize,
        a in prop::sample::select(vec![0.5, 1.0, 2.0, 2.5, 4.0, 5.0]),
        gamma in prop::sample::select(vec![0.5, 1.0, 2.0, 4.0]),
        oracle in any::<bool>(),
    ) {
        let text = match (kind, pulse) {
            (2, _) => format!("scenario = spontaneous\ninitial_x = 0.6\ninitial_z = 0.8\ngamma = {gamma}\noracle = {oracle}\n"),
            (k, p) => {
                let scenario = if k == 0 { "coherent" } else { "single_photon" };
                let shape = match p {
                    0 => format!("pulse = rising_exponential\nrate = {a}"),
                    1 => format!("pulse = gaussian\nwidth = {a}"),
                    _ => "pulse = square\nstart = -1\nduration = 2".to_string(),
                };
                format!("scenario = {scenario}\n{shape}\ngamma = {gamma}\noracle = {oracle}\ndt = 0.01\n")
            }
        };
        let cfg = parse_config(&text).unwrap();
        let again = parse_config(&cfg.serialize()).unwrap();
        prop_assert_eq!(&cfg, &again);
        prop_assert_eq!(cfg.serialize(), again.serialize());
    }
}

#[test]
fn identical_configs_give_identical_csv() {
    let text = "scenario = coherent\npulse = gaussian\nwidth = 0.7\nphoton_number = 2\ndt = 0.01\nt_max = 6\noracle = true\noracle_dt = 0.05\n";
    let a = run_scenario(&parse_config(text).unwrap())
        .unwrap()
        .to_csv()
        .unwrap();
    let b = run_scenario(&parse_config(text).unwrap())
        .unwrap()
        .to_csv()
        .unwrap();
    assert_eq!(a, b);
}
