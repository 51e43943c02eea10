mod common;

use approx::assert_abs_diff_eq;
use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use lrxxz::ansatz::{build_circuit, ParameterVector};
use lrxxz::exact::{full_spectrum, lowest_two, sector_ground};
use lrxxz::model::{apply_hamiltonian, build_dense, build_terms, expectation, ModelParams};
use lrxxz::statevec::{neel_state, GateOp, StateVector};

fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let amps: Vec<Complex64> = (0..1 << n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(n, amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn to_dvec(s: &StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(s.amplitudes())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dense_matches_pauli_strings(n in 2usize..=6, j in -2.0f64..2.0, delta in -4.0f64..4.0, alpha in 0.2f64..5.0) {
        let p = ModelParams::new(j, delta, alpha, n).unwrap();
        let ours = build_dense(&p).unwrap();
        let oracle = pauli_hamiltonian(n, j, delta, alpha, n);
        prop_assert!((ours - oracle).amax() < 1e-12);
    }

    #[test]
    fn termwise_action_matches_dense(n in 2usize..=6, j in -2.0f64..2.0, delta in -4.0f64..4.0, alpha in 0.2f64..5.0, seed in any::<u64>()) {
        let p = ModelParams::new(j, delta, alpha, n).unwrap();
        let s = random_state(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let ours = apply_hamiltonian(&build_terms(&p).unwrap(), &s).unwrap();
        let h = pauli_hamiltonian(n, j, delta, alpha, n).map(|x| c(x, 0.0));
        let want = h * to_dvec(&s);
        for (a, b) in ours.amplitudes().iter().zip(want.iter()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn expectation_matches_dense(n in 2usize..=5, delta in -4.0f64..4.0, alpha in 0.5f64..4.0, seed in any::<u64>()) {
        let p = ModelParams::new(1.0, delta, alpha, n).unwrap();
        let s = random_state(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let v = to_dvec(&s);
        let h = pauli_hamiltonian(n, 1.0, delta, alpha, n).map(|x| c(x, 0.0));
        let want = (v.adjoint() * h * &v)[(0, 0)].re;
        prop_assert!((expectation(&build_terms(&p).unwrap(), &s).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn sector_spectra_cover_the_full_spectrum(n in 2usize..=6, delta in -3.0f64..3.0, alpha in 0.5f64..4.0) {
        let p = ModelParams::new(-1.0, delta, alpha, n).unwrap();
        let full = full_spectrum(&p).unwrap();
        let sectors = (0..=n).map(|k| sector_ground(&p, k).unwrap()).fold(f64::INFINITY, f64::min);
        prop_assert!((full[0] - sectors).abs() < 1e-10);
        prop_assert!((lowest_two(&p).unwrap().0 - full[0]).abs() < 1e-10);
    }
}

#[test]
fn two_site_spectra() {
    let p = ModelParams::new(1.0, 1.0, 2.0, 2).unwrap();
    let spec = full_spectrum(&p).unwrap();
    for (got, want) in spec.iter().zip([-0.25, -0.25, -0.25, 0.75]) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
    }
    let p = ModelParams::new(1.0, -1.0, 2.0, 2).unwrap();
    assert_abs_diff_eq!(lowest_two(&p).unwrap().0, -0.75, epsilon = 1e-12);
}

#[test]
fn steep_decay_is_nearest_neighbour() {
    for delta in [-2.0, -1.0, 0.0, 0.5, 1.5] {
        let p = ModelParams::new(1.0, delta, 50.0, 4).unwrap();
        let oracle = ground_energy(pauli_hamiltonian(4, 1.0, delta, 50.0, 1));
        assert_abs_diff_eq!(lowest_two(&p).unwrap().0, oracle, epsilon = 1e-8);
    }
}

fn random_gate(n: usize, rng: &mut impl Rng) -> (GateOp, f64) {
    let t = rng.gen_range(0..n);
    let mut ctl = rng.gen_range(0..n - 1);
    if ctl >= t {
        ctl += 1;
    }
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let angle = rng.gen_range(-2.0 * std::f64::consts::PI..2.0 * std::f64::consts::PI);
    let g = match rng.gen_range(0..4) {
        0 => GateOp::x(t),
        1 => GateOp::cnot(ctl, t),
        2 => GateOp::crz(ctl, t, Some(0), sign),
        _ => GateOp::crx(ctl, t, Some(0), sign),
    };
    (g, angle)
}

#[test]
fn gate_by_gate_matches_dense_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..100 {
        let n = 2 + case % 3;
        let mut s = random_state(n, &mut rng);
        let mut v = to_dvec(&s);
        for _ in 0..rng.gen_range(1..25) {
            let (g, angle) = random_gate(n, &mut rng);
            let u = gate_unitary(n, &g, g.sign * angle);
            assert!(max_abs(&(u.adjoint() * &u - CMat::identity(1 << n, 1 << n))) < 1e-12);
            s.apply_gate(&g, angle).unwrap();
            v = u * v;
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            for (a, b) in s.amplitudes().iter().zip(v.iter()) {
                assert!((a - b).norm() < 1e-12, "case {case}");
            }
        }
    }
}

#[test]
fn ansatz_matches_composed_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, depth) in [(2, 1), (2, 2), (4, 1), (4, 2)] {
        let a = build_circuit(n, depth).unwrap();
        let x: Vec<f64> = (0..a.param_count()).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let pv = ParameterVector::new(x.clone()).unwrap();
        let mut u = CMat::identity(1 << n, 1 << n);
        for g in a.circuit() {
            let angle = g.param_slot.map_or(0.0, |k| x[k]) * g.sign;
            u = gate_unitary(n, g, angle) * u;
        }
        let want = u * to_dvec(&neel_state(n).unwrap());
        let got = a.prepare_state(&pv).unwrap();
        for (p, q) in got.amplitudes().iter().zip(want.iter()) {
            assert!((p - q).norm() < 1e-12);
        }
    }
}

#[test]
fn neel_pattern() {
    // up on even sites, down on odd: bits 1 and 3 set
    let s = neel_state(4).unwrap();
    assert_eq!(s.amplitudes()[0b1010], c(1.0, 0.0));
    assert_abs_diff_eq!(sz_of(4, 0b1010), 0.0);
}
