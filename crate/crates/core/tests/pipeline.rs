use num_complex::Complex64;

use bargmann::analytic::{critical_coupling, noninteracting_phase};
use bargmann::bargmann::bargmann_invariant;
use bargmann::circuit::{polygon_circuit, polygon_circuit_oriented, Orientation};
use bargmann::groundstate::{SolverKind, SolverOptions};
use bargmann::spin_ops::Spin;
use bargmann::sweep::{coupling_grid, critical_window, sweep, ChainSpec, GroundMethod, SweepOptions, VertexSolver};

fn full() -> SweepOptions {
    SweepOptions {
        method: GroundMethod::Full,
        ..Default::default()
    }
}

#[test]
fn single_site_berry_phase_matches_the_solid_angle_oracle() {
    let circuit = polygon_circuit(100, 0.5).unwrap();
    let r = sweep(ChainSpec::new(1, Spin::Half), &circuit, &[0.0], &full()).unwrap();
    assert_eq!(r.records.len(), 1);
    assert!(r.speed.is_empty());
    let oracle = noninteracting_phase(1, Spin::Half, &circuit).unwrap();
    assert!((r.records[0].phase - oracle).abs() < 1e-3);
}

#[test]
fn noninteracting_chains_follow_the_oracle() {
    let circuit = polygon_circuit(60, 0.3).unwrap();
    for (sites, spin) in [(2, Spin::Half), (3, Spin::Half), (2, Spin::One)] {
        let r = sweep(ChainSpec::new(sites, spin), &circuit, &[0.0], &full()).unwrap();
        let oracle = noninteracting_phase(sites, spin, &circuit).unwrap();
        assert!((r.records[0].phase - oracle).abs() < 1e-9, "N={sites} {spin}");
    }
}

#[test]
fn sector_engine_agrees_with_full_space_at_the_paper_radius() {
    let circuit = polygon_circuit(100, 1e-5).unwrap();
    let jc = critical_coupling(1.0);
    let grid = [jc - 1.5e-5, jc - 2e-7, jc + 3e-7, jc + 1.9e-5];
    let chain = ChainSpec::new(3, Spin::Half);
    let a = sweep(chain, &circuit, &grid, &full()).unwrap();
    let b = sweep(chain, &circuit, &grid, &SweepOptions::default()).unwrap();
    for (x, y) in a.records.iter().zip(&b.records) {
        assert!(
            (x.value - y.value).norm() < 1e-8,
            "J={}: {} vs {}",
            x.coupling,
            x.value,
            y.value
        );
    }
}

#[test]
fn lanczos_path_agrees_with_the_sector_engine() {
    // Spin-1 with six sites has dimension 729, above the dense cutoff.
    let circuit = polygon_circuit(8, 0.05).unwrap();
    let chain = ChainSpec::new(6, Spin::One);
    let grid = [0.3, 0.7];
    let lanczos = SweepOptions {
        method: GroundMethod::Full,
        solver: SolverOptions {
            force: Some(SolverKind::Lanczos),
            ..Default::default()
        },
        ..Default::default()
    };
    let a = sweep(chain, &circuit, &grid, &lanczos).unwrap();
    let b = sweep(chain, &circuit, &grid, &SweepOptions::default()).unwrap();
    let (below, above) = (&a.records[0], &a.records[1]);
    assert!(!below.near_degenerate);
    assert!((below.value - b.records[0].value).norm() < 1e-8);
    // Above J_c the two Néel states of the even ring are split far below
    // solver precision; the full-space solve must say so. The sector keeps
    // only their symmetric combination and stays resolved.
    assert!(above.near_degenerate);
    assert!(!b.records[1].near_degenerate);
}

#[test]
fn reversing_the_circuit_conjugates_the_invariant() {
    let grid = coupling_grid(0.45, 0.55, 3).unwrap();
    let forward = polygon_circuit_oriented(30, 0.05, Orientation::Standard).unwrap();
    let backward = polygon_circuit_oriented(30, 0.05, Orientation::Reversed).unwrap();
    for method in [GroundMethod::Full, GroundMethod::Symmetric] {
        let opts = SweepOptions {
            method,
            ..Default::default()
        };
        let chain = ChainSpec::new(4, Spin::Half);
        let a = sweep(chain, &forward, &grid, &opts).unwrap();
        let b = sweep(chain, &backward, &grid, &opts).unwrap();
        for (x, y) in a.records.iter().zip(&b.records) {
            assert!((x.value - y.value.conj()).norm() < 1e-12);
        }
        // Walking the same vertices backwards conjugates too.
        let states = VertexSolver::new(chain, &forward, &opts).unwrap().states(0.5).unwrap();
        let mut rev = states.clone();
        rev.reverse();
        let c = bargmann_invariant(&states).unwrap().value;
        assert!((bargmann_invariant(&rev).unwrap().value - c.conj()).norm() < 1e-12);
    }
}

#[test]
fn magnitude_is_one_only_for_parallel_states() {
    let base = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
    let parallel: Vec<Vec<Complex64>> = (0..5)
        .map(|k| base.iter().map(|z| z * Complex64::from_polar(1.0, k as f64)).collect())
        .collect();
    let r = bargmann_invariant(&parallel).unwrap();
    assert!((r.magnitude - 1.0).abs() < 1e-15);
    let mut tilted = parallel.clone();
    tilted[2] = vec![Complex64::new(0.8, 0.0), Complex64::new(0.0, 0.6)];
    assert!(bargmann_invariant(&tilted).unwrap().magnitude < 1.0 - 1e-3);
}

#[test]
fn paper_window_dip_and_discontinuities_sit_at_the_critical_point() {
    let circuit = polygon_circuit(100, 1e-5).unwrap();
    let grid = critical_window(1.0, 1e-5, 201).unwrap();
    let r = sweep(ChainSpec::new(3, Spin::Half), &circuit, &grid, &SweepOptions::default()).unwrap();
    assert_eq!(r.argmin_magnitude(), 100);
    assert!(r.records.iter().all(|x| x.magnitude <= 1.0 + 1e-12));
    // Raw phase discontinuities only appear next to J_c.
    let phases = r.phases();
    for (i, w) in phases.windows(2).enumerate() {
        if (w[1] - w[0]).abs() > std::f64::consts::FRAC_PI_2 {
            assert!((99..=100).contains(&i), "jump between samples {i} and {}", i + 1);
        }
    }
}

#[test]
fn sweep_is_deterministic() {
    let circuit = polygon_circuit(20, 1e-3).unwrap();
    let grid = coupling_grid(0.49, 0.51, 9).unwrap();
    let chain = ChainSpec::new(5, Spin::Half);
    let a = sweep(chain, &circuit, &grid, &SweepOptions::default()).unwrap();
    let b = sweep(chain, &circuit, &grid, &SweepOptions::default()).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
}
