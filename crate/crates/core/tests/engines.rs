use std::f64::consts::PI;

use giant_atoms::dynamics::{evolve_amplitudes, integrate_lindblad_on_grid, Method};
use giant_atoms::entanglement::{all_pairs_from_amplitudes, all_pairs_from_density};
use giant_atoms::oracles::{analytic_concurrence, available_cases};
use giant_atoms::sweep::{evolve_series, find_peak, run_sweep, series_csv, Model, SweepAxes};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use giant_atoms::{Configuration, ConnectionLayout, InitialSign, PairId};

#[test]
fn oracle_agreement_on_dense_grid() {
    for case in available_cases() {
        let k = case.config.coefficients(case.phi, 1.0).unwrap();
        for n in 0..2000 {
            let t = n as f64 * 0.01;
            let want = analytic_concurrence(&case, t, 1.0).unwrap().unwrap();
            let s = evolve_amplitudes(&k, t, InitialSign::Plus).unwrap();
            let got = all_pairs_from_amplitudes(&s)[PairId::ALL.iter().position(|p| *p == case.pair).unwrap()];
            assert!((got - want).abs() < 1e-10, "{case:?} t={t}: {got} vs {want}");
        }
    }
}

#[test]
fn oracles_scale_with_gamma() {
    let case = &available_cases()[0];
    for gamma in [0.5, 2.0, 7.0] {
        let k = case.config.coefficients(case.phi, gamma).unwrap();
        let t = 0.37;
        let want = analytic_concurrence(case, t, gamma).unwrap().unwrap();
        let got = all_pairs_from_amplitudes(&evolve_amplitudes(&k, t, InitialSign::Plus).unwrap())[0];
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn sweep_matches_pointwise_evaluation() {
    let model = Model::new(Configuration::Nested);
    let axes = SweepAxes {
        phi_points: 41,
        t_points: 51,
        ..SweepAxes::default()
    };
    let grid = run_sweep(&model, PairId::Bd, &axes).unwrap();
    assert_eq!(grid.values.len(), 41);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let (i, j) = (rng.gen_range(0..41), rng.gen_range(0..51));
        let direct = model.concurrence(PairId::Bd, grid.phi_values[i], grid.t_values[j]).unwrap();
        assert!((grid.get(i, j) - direct).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&grid.get(i, j)));
    }
}

fn default_grid(config: Configuration, pair: PairId) -> giant_atoms::sweep::SweepGrid {
    run_sweep(&Model::new(config), pair, &SweepAxes::default()).unwrap()
}

#[test]
fn nested_bd_has_two_ridges_flanking_pi() {
    let grid = default_grid(Configuration::Nested, PairId::Bd);
    let column_max = |i: usize| grid.values[i].iter().cloned().fold(0.0, f64::max);
    // φ index 200 is exactly π, where the pair never gets entangled.
    assert_eq!(grid.phi_values[200], grid.phi_values[200].clamp(PI - 1e-12, PI + 1e-12));
    assert!(column_max(200) < 1e-9);
    let argmax = |range: std::ops::Range<usize>| {
        range.max_by(|&i, &j| column_max(i).total_cmp(&column_max(j))).unwrap()
    };
    let (left, right) = (argmax(150..200), argmax(201..251));
    // Interior maxima on both sides, mirror images of each other.
    assert!(left > 150 && left < 199 && right > 201 && right < 250, "{left} {right}");
    assert_eq!(left + right, 400);
    assert!(column_max(left) > 0.3);
    assert!((column_max(left) - column_max(right)).abs() < 1e-9);
}

#[test]
fn braided_ac_grid_is_pi_periodic() {
    let grid = default_grid(Configuration::Braided, PairId::Ac);
    for i in 0..200 {
        for (a, b) in grid.values[i].iter().zip(&grid.values[i + 200]) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn small_bd_rises_monotonically_at_pi() {
    let grid = default_grid(Configuration::Small, PairId::Bd);
    let column = &grid.values[200];
    assert!(column.windows(2).all(|w| w[1] >= w[0] - 1e-15));
    assert!((column.last().unwrap() - 0.25).abs() < 1e-3);
}

#[test]
fn lindblad_sweep_column_matches_amplitudes() {
    let mut model = Model::new(Configuration::Braided);
    model.method = Method::Lindblad;
    let axes = SweepAxes {
        phi_min: 0.3,
        phi_max: 0.3,
        phi_points: 1,
        t_max: 4.0,
        t_points: 21,
    };
    let grid = run_sweep(&model, PairId::Ab, &axes).unwrap();
    model.method = Method::Amplitude;
    let exact = run_sweep(&model, PairId::Ab, &axes).unwrap();
    for (a, b) in grid.values[0].iter().zip(&exact.values[0]) {
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn sweeps_are_deterministic() {
    let model = Model::new(Configuration::Separated);
    let axes = SweepAxes {
        phi_points: 64,
        t_points: 33,
        ..SweepAxes::default()
    };
    let a = run_sweep(&model, PairId::Ac, &axes).unwrap().to_csv();
    let b = run_sweep(&model, PairId::Ac, &axes).unwrap().to_csv();
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 1 + 64 * 33);
    assert!(!a.contains('\r'));
}

#[test]
fn series_has_one_row_per_sample() {
    let model = Model::new(Configuration::Small);
    let rows = evolve_series(&model, 0.0, 10.0, 1000).unwrap();
    assert_eq!(rows.len(), 1001);
    assert!((rows[0].concurrence[0] - 1.0).abs() < 1e-15);
    assert_eq!(rows.last().unwrap().t, 10.0);
    let csv = series_csv(&rows);
    assert!(csv.starts_with("t,C_ac,C_bd,C_ab,C_cd,C_ad,C_bc,N\n0,1,0,0,0,0,0,1\n"));
}

#[test]
fn series_engines_agree() {
    let mut model = Model::new(Configuration::Nested);
    let amp = evolve_series(&model, 1.1, 5.0, 50).unwrap();
    model.method = Method::Lindblad;
    let lin = evolve_series(&model, 1.1, 5.0, 50).unwrap();
    for (a, b) in amp.iter().zip(&lin) {
        assert_eq!(a.t, b.t);
        for (x, y) in a.concurrence.iter().zip(&b.concurrence) {
            assert!((x - y).abs() < 1e-6);
        }
        assert!((a.excitation - b.excitation).abs() < 1e-6);
    }
}

#[test]
fn minus_sign_gives_same_concurrences_for_presets() {
    for config in Configuration::PRESETS {
        let k = config.coefficients(0.9, 1.0).unwrap();
        for t in [0.0, 0.5, 3.0] {
            let plus = all_pairs_from_amplitudes(&evolve_amplitudes(&k, t, InitialSign::Plus).unwrap());
            let minus = all_pairs_from_amplitudes(&evolve_amplitudes(&k, t, InitialSign::Minus).unwrap());
            for (p, m) in plus.iter().zip(&minus) {
                assert!((p - m).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn custom_layout_reproduces_preset() {
    let layout = ConnectionLayout::from_json(r#"{"a":[0,3],"b":[1,2],"c":[0,3],"d":[1,2]}"#).unwrap();
    let custom = Configuration::Custom(layout);
    for phi in [0.0, 0.4, PI / 3.0, 2.5] {
        let a = custom.coefficients(phi, 1.0).unwrap();
        let b = Configuration::Nested.coefficients(phi, 1.0).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-14);
    }
}

#[test]
fn asymmetric_custom_layout_runs_both_engines() {
    // Waveguide 2 differs from waveguide 1, so the blocks are not copies.
    let layout = ConnectionLayout::from_json(r#"{"a":[0,2.5],"b":[1],"c":[0],"d":[0.5,1.5,3]}"#).unwrap();
    let k = Configuration::Custom(layout).coefficients(1.3, 1.0).unwrap();
    let states = integrate_lindblad_on_grid(&k, 3.0, 30, InitialSign::Plus).unwrap();
    for rho in &states {
        let amp = all_pairs_from_amplitudes(&evolve_amplitudes(&k, rho.t, InitialSign::Plus).unwrap());
        let lin = all_pairs_from_density(rho).unwrap();
        for (x, y) in amp.iter().zip(&lin) {
            assert!((x - y).abs() < 1e-6, "t={}: {x} vs {y}", rho.t);
        }
    }
}

#[test]
fn nested_peak_near_one_third() {
    let model = Model::new(Configuration::Nested);
    let report = find_peak(&model, PairId::Bd, PI / 3.0, 50.0).unwrap();
    assert!((report.value - 0.33).abs() < 0.01);
    assert!(report.bracket.1 - report.bracket.0 <= 1e-6);
}
