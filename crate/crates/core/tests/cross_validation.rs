//! Independent numerical paths must agree on shared problems.

use gpbound::model::{Delta, Parity, Potential, Segment};
use gpbound::oracle::{self, ShootingOptions};
use gpbound::propagator::{self, Seed, SpectralKind, SpectralRequest, Splitting};
use gpbound::roots::linspace;
use gpbound::square_well::{self, WellConfig};

fn spectrum<P: gpbound::model::PotentialProfile>(pot: &P, kind: SpectralKind, seed: Seed, energies: Vec<f64>, tau_max: f64, n_steps: usize) -> Vec<f64> {
    let req = SpectralRequest {
        potential: pot,
        kind,
        seed,
        energies,
        tau_max,
        n_steps,
        root_tol: 0.0,
    };
    propagator::find_spectrum(&req).unwrap().root_energies()
}

fn exact_opts() -> ShootingOptions {
    ShootingOptions {
        root_tol: 0.0,
        ..ShootingOptions::default()
    }
}

#[test]
fn nonlinear_well_roots_match_quantization_scan() {
    let cfg = WellConfig::new(6.0, 1.0, -1.0, 0.5).unwrap();
    let (lo, hi) = cfg.energy_window();
    let mut expected: Vec<f64> = [Parity::Symmetric, Parity::Antisymmetric]
        .iter()
        .flat_map(|&p| square_well::quantization_scan(&cfg, p, (lo, hi), 2000, 0.0).unwrap())
        .map(|s| s.energy)
        .collect();
    expected.sort_by(f64::total_cmp);
    let kind = SpectralKind::Nonlinear {
        g: -1.0,
        scheme: Splitting::Strang,
    };
    let found = spectrum(&cfg.potential(), kind, Seed::SupportEdge(0.5), linspace(lo, -0.01, 400), 20.0, 100_000);
    assert_eq!(found.len(), expected.len(), "{found:?} vs {expected:?}");
    for (a, b) in found.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn shooting_and_transfer_matrices_agree_on_a_layered_potential() {
    let pot = Potential::new(
        vec![
            Segment { from: -2.0, to: -0.5, v: -4.0 },
            Segment { from: -0.5, to: 0.7, v: -1.0 },
            Segment { from: 0.7, to: 1.5, v: -5.0 },
        ],
        vec![Delta { at: 0.2, strength: -1.2 }],
        None,
    )
    .unwrap();
    let lin = spectrum(&pot, SpectralKind::Linear, Seed::Cutoff(1.0), linspace(-5.5, -0.02, 300), 20.0, 2000);
    let shot = oracle::shooting_eigenvalues(&pot, 0.0, 1.0, None, (-5.5, -0.02), 300, &exact_opts());
    assert!(!lin.is_empty());
    assert_eq!(lin.len(), shot.len());
    for (a, b) in lin.iter().zip(&shot) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn smooth_potential_levels_match_closed_form() {
    let pot = gpbound::model::SmoothPotential::new(|t: f64| -4.0 / t.cosh().powi(2), Some((-12.0, 12.0)));
    // Pöschl–Teller λ(λ+1) = 4: E = −(λ − n)², λ = (√17 − 1)/2
    let lambda = (17f64.sqrt() - 1.0) / 2.0;
    let exact: Vec<f64> = (0..2).map(|n| -(lambda - n as f64).powi(2)).collect();
    let lin = spectrum(&pot, SpectralKind::Linear, Seed::SupportEdge(1.0), linspace(-2.5, -0.05, 100), 20.0, 20_000);
    assert_eq!(lin.len(), 2, "{lin:?}");
    for (a, b) in lin.iter().zip(&exact) {
        // the tail beyond ±12 is cut, O(e^{−24})
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn cutoff_is_adequate() {
    let pot = Potential::single_delta(0.0, -1.5).unwrap();
    let at = |tau_max| spectrum(&pot, SpectralKind::Linear, Seed::Cutoff(1.0), linspace(-1.0, -0.1, 20), tau_max, 2000);
    let (a, b) = (at(20.0), at(40.0));
    assert_eq!(a.len(), 1);
    assert!((a[0] - b[0]).abs() < 1e-9 && (a[0] + 0.5625).abs() < 1e-9);
}

#[test]
fn nonlinear_roots_depend_on_the_seed_only_when_coupled() {
    let well = Potential::square_well(6.0, 1.0).unwrap();
    let root = |g: f64, seed: f64| {
        let kind = SpectralKind::Nonlinear {
            g,
            scheme: Splitting::Strang,
        };
        spectrum(&well, kind, Seed::SupportEdge(seed), linspace(-5.9, -0.5, 60), 20.0, 20_000)[0]
    };
    assert!((root(0.0, 0.5) - root(0.0, 0.25)).abs() < 1e-10);
    assert!((root(4.0, 0.5) - root(4.0, 0.25)).abs() > 1e-6);
}

#[test]
fn closed_form_waves_pass_the_oracle_residual() {
    let h = oracle::RESIDUAL_STEP;
    let grid: Vec<f64> = linspace(-6.0, 6.0, 1201).into_iter().filter(|t| (t.abs() - 1.0).abs() > 2.0 * h).collect();
    for g in [4.0, -1.0] {
        let cfg = WellConfig::new(6.0, 1.0, g, 0.5).unwrap();
        let states = square_well::quantization_scan(&cfg, Parity::Symmetric, cfg.energy_window(), 2000, 0.0).unwrap();
        assert!(!states.is_empty());
        for s in states {
            let r = oracle::gp_residual(|t| s.psi(t), &cfg.potential(), s.energy, g, &grid, h);
            assert!(r < 1e-7, "g = {g}, E = {}: {r}", s.energy);
        }
    }
}

#[test]
fn particle_number_is_stable_under_refinement() {
    let cfg = WellConfig::new(6.0, 1.0, 4.0, 0.5).unwrap();
    let e = square_well::level_energy(&cfg, Parity::Symmetric, 0, 2000).unwrap().unwrap();
    let s = square_well::WellBoundState::new(&cfg, e, Parity::Symmetric).unwrap();
    // walls sit on sample points for both steps
    let a = oracle::particle_number(|t| s.psi(t), (-30.0, 30.0), 1e-3);
    let b = oracle::particle_number(|t| s.psi(t), (-30.0, 30.0), 5e-4);
    assert!(a.n > 0.0 && (a.n - b.n).abs() < 1e-8, "{} {}", a.n, b.n);
}
