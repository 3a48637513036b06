//! Acceptance suite: one PASS/FAIL line per criterion, with the measured
//! quantities. Runs as a plain binary (`harness = false`).
//!
//! The exit status is 0 unless `GPBOUND_ACCEPTANCE_STRICT=1`, in which case
//! any failing criterion makes it 1.

use std::cell::Cell;
use std::f64::consts::FRAC_PI_2;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use gpbound::delta_defect::{self, alpha_crit};
use gpbound::elliptic::{ellip_f, jacobi_am, jacobi_sn_cn_dn};
use gpbound::model::{critical_points, delta_jump_residual, CriticalKind, Delta, Parity, Potential, QuasiParams, Segment, Stability, StateVector};
use gpbound::oracle::{self, ShootingOptions};
use gpbound::propagator::{self, Seed, SpectralKind, SpectralRequest, Splitting};
use gpbound::roots::{self, linspace};
use gpbound::square_well::{self, WellConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::INFINITY } else { m.max(v.abs()) })
}

fn elliptic_kernel() -> Outcome {
    let grid = linspace(-10.0, 10.0, 10_000);
    let h = oracle::RESIDUAL_STEP;
    let (mut ident, mut ode, mut trip) = (0.0f64, 0.0f64, 0.0f64);
    for m in [0.0, 0.3, 0.6, 0.9, 1.0 - 1e-8] {
        let sn = |u: f64| jacobi_sn_cn_dn(u, m).unwrap().sn;
        for &u in &grid {
            let t = jacobi_sn_cn_dn(u, m).unwrap();
            ident = ident.max((t.sn * t.sn + t.cn * t.cn - 1.0).abs());
            ident = ident.max((t.dn * t.dn + m * m * t.sn * t.sn - 1.0).abs());
            let d2 = (-sn(u + 2.0 * h) + 16.0 * sn(u + h) - 30.0 * t.sn + 16.0 * sn(u - h) - sn(u - 2.0 * h)) / (12.0 * h * h);
            ode = ode.max((d2 - (2.0 * m * m * t.sn.powi(3) - (1.0 + m * m) * t.sn)).abs());
            let phi = u;
            trip = trip.max((jacobi_am(ellip_f(phi, m).unwrap(), m).unwrap() - phi).abs());
        }
    }
    outcome(
        ident <= 1e-12 && ode <= 1e-8 && trip <= 1e-10,
        format!("identities {ident:.2e} (<= 1e-12), ODE residual {ode:.2e} (<= 1e-8), am(F) round trip {trip:.2e} (<= 1e-10)"),
    )
}

fn piecewise() -> impl Strategy<Value = (Potential, f64, usize)> {
    // gap before the segment, its length and level
    let segment = (0.0f64..0.3, 0.05f64..0.5, -8.0f64..8.0);
    // position as a fraction of the segment hull, strength
    let delta = (0.0f64..1.0, -3.0f64..3.0);
    (
        prop::collection::vec(segment, 1..5),
        prop::collection::vec(delta, 0..3),
        -4.0f64..0.0,
        1usize..400,
    )
        .prop_map(|(segs, deltas, e, n)| {
            let mut cursor = -1.2;
            let segments: Vec<Segment> = segs
                .into_iter()
                .map(|(gap, len, v)| {
                    let from = cursor + gap;
                    cursor = from + len;
                    Segment { from, to: cursor, v }
                })
                .collect();
            let (lo, hi) = (-1.2 + segs_start(&segments), cursor);
            let deltas = deltas.into_iter().map(|(frac, strength)| Delta { at: lo + frac * (hi - lo), strength }).collect();
            (Potential::new(segments, deltas, None).unwrap(), e, n)
        })
}

fn segs_start(segments: &[Segment]) -> f64 {
    segments[0].from + 1.2
}

fn unimodularity() -> Outcome {
    let worst = Cell::new(0.0f64);
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let result = runner.run(&piecewise(), |(pot, e, n)| {
        let m = propagator::ordered_exponential(&pot, e, -1.0, 1.5, n).unwrap();
        let err = (m.det() - 1.0).abs();
        worst.set(worst.get().max(err));
        prop_assert!(err <= 1e-10, "det − 1 = {err:e}");
        Ok(())
    });
    outcome(result.is_ok(), format!("1000 random piecewise potentials, max |det − 1| = {:.2e} (<= 1e-10)", worst.get()))
}

/// Roots of `q sin(qτ0) = κ cos(qτ0)` (even) and `−q cos(qτ0) = κ sin(qτ0)` (odd).
fn analytic_well_levels(v0: f64, tau0: f64) -> Vec<f64> {
    let qmax = v0.sqrt();
    let mut levels = Vec::new();
    let mut j = 0;
    while (j as f64) * FRAC_PI_2 / tau0 < qmax {
        let lo = j as f64 * FRAC_PI_2 / tau0 + 1e-15;
        let hi = ((j + 1) as f64 * FRAC_PI_2 / tau0).min(qmax) - 1e-15;
        let odd = j % 2 == 1;
        let f = |q: f64| {
            let kappa = (v0 - q * q).max(0.0).sqrt();
            if odd {
                -q * (q * tau0).cos() - kappa * (q * tau0).sin()
            } else {
                q * (q * tau0).sin() - kappa * (q * tau0).cos()
            }
        };
        if f(lo) * f(hi) < 0.0 {
            let q = roots::bisect(f, lo, hi, f(lo), 0.0).root;
            levels.push(q * q - v0);
        }
        j += 1;
    }
    levels.sort_by(f64::total_cmp);
    levels
}

fn linear_reduction() -> Outcome {
    let well = Potential::square_well(6.0, 1.0).unwrap();
    let analytic = analytic_well_levels(6.0, 1.0);
    let expected_count = (2.0 * 6f64.sqrt() / std::f64::consts::PI).ceil() as usize;
    let req = SpectralRequest {
        potential: &well,
        kind: SpectralKind::Linear,
        seed: Seed::Cutoff(1.0),
        energies: linspace(-5.99, -0.01, 600),
        tau_max: 20.0,
        n_steps: 1000,
        root_tol: 0.0,
    };
    let spectral = propagator::find_spectrum(&req).unwrap().root_energies();
    let opts = ShootingOptions {
        root_tol: 0.0,
        ..ShootingOptions::default()
    };
    let shot = oracle::shooting_eigenvalues(&well, 0.0, 1.0, None, (-5.99, -0.01), 600, &opts);
    let counts_ok = spectral.len() == expected_count && shot.len() == expected_count && analytic.len() == expected_count;
    let gap = if counts_ok {
        max_abs((0..expected_count).flat_map(|i| [spectral[i] - shot[i], spectral[i] - analytic[i], shot[i] - analytic[i]]))
    } else {
        f64::INFINITY
    };
    outcome(
        counts_ok && gap <= 1e-8,
        format!(
            "levels {:?} (count {} vs analytic {}), max pairwise gap {gap:.2e} (<= 1e-8)",
            analytic,
            spectral.len(),
            expected_count
        ),
    )
}

fn delta_closed_forms() -> Outcome {
    let h = oracle::RESIDUAL_STEP;
    let grid: Vec<f64> = linspace(-8.0, 8.0, 801).into_iter().filter(|t| t.abs() > 2.0 * h).collect();
    let (mut gp, mut jump) = (0.0f64, 0.0f64);
    let mut solved = 0;
    for alpha in [-1.2, -0.6, 0.0, 0.6, 1.2] {
        for gamma in [-0.5, -1.0, -1.5, -2.0, -3.0] {
            for energy in [-0.5, -1.0, -1.5, -2.0, -3.0] {
                let Ok(sol) = delta_defect::solve_bright(alpha, gamma, energy) else {
                    continue;
                };
                solved += 1;
                gp = gp.max(oracle::gp_residual(|t| sol.psi(t), &sol.potential(), energy, gamma, &grid, h));
                let (l, r) = sol.states_at_defect();
                let (a, b) = delta_jump_residual(l, r, alpha);
                jump = jump.max(a.abs()).max(b.abs());
            }
        }
    }
    let (gamma, psi0) = (1.0, 1.0);
    let threshold = alpha_crit(gamma, psi0);
    let mut sweep_ok = true;
    for i in 0..20 {
        // ten strengths at or below the threshold, ten above
        let alpha = if i < 10 { threshold - 0.1 * i as f64 } else { threshold + 0.1 * (i - 9) as f64 };
        let result = delta_defect::solve_log_quadrature_at_amplitude(alpha, gamma, psi0);
        sweep_ok &= result.is_ok() == (alpha <= threshold);
    }
    outcome(
        solved == 125 && gp <= 1e-8 && jump <= 1e-10 && sweep_ok,
        format!(
            "{solved}/125 solved, GP residual {gp:.2e} (<= 1e-8), jump residual {jump:.2e} (<= 1e-10), threshold sweep at ᾱ_crit = {threshold:.6} {}",
            if sweep_ok { "consistent" } else { "INCONSISTENT" }
        ),
    )
}

/// Lie steps for the nonlinear spectral path; its root error is about 1/n.
const WELL_STEPS: usize = 4_000_000;

fn nonlinear_well_agreement() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for g in [4.0, -1.0] {
        let cfg = WellConfig::new(6.0, 1.0, g, 0.5).unwrap();
        let states = square_well::quantization_scan(&cfg, Parity::Symmetric, cfg.energy_window(), 2000, 0.0).unwrap();
        let Some(ground) = states.iter().map(|s| s.energy).min_by(f64::total_cmp) else {
            pass = false;
            parts.push(format!("g={g}: no symmetric level"));
            continue;
        };
        let in_range = ground > -cfg.v0 && ground < 0.0;
        let pot = cfg.potential();
        // lowest F_g zero on a coarse scan, refined with the full step count
        let kind = SpectralKind::Nonlinear { g, scheme: Splitting::Lie };
        let coarse = SpectralRequest {
            potential: &pot,
            kind,
            seed: Seed::SupportEdge(cfg.phi_b),
            energies: linspace(cfg.energy_window().0, -0.01, 200),
            tau_max: 20.0,
            n_steps: 100_000,
            root_tol: 1e-8,
        };
        let lowest = propagator::find_spectrum(&coarse).unwrap().root_energies().into_iter().next();
        let spectral = lowest.and_then(|e| {
            let fine = SpectralRequest {
                energies: vec![e - 1e-3, e + 1e-3],
                n_steps: WELL_STEPS,
                root_tol: 1e-10,
                ..coarse.clone()
            };
            propagator::find_spectrum(&fine).unwrap().root_energies().into_iter().next()
        });
        let opts = ShootingOptions {
            root_tol: 0.0,
            ..ShootingOptions::default()
        };
        let shot = oracle::shooting_eigenvalues(&pot, g, cfg.phi_b, Some(Parity::Symmetric), (ground - 0.05, ground + 0.05), 11, &opts)
            .into_iter()
            .min_by(|a, b| (a - ground).abs().total_cmp(&(b - ground).abs()));
        let gap = match (spectral, shot) {
            (Some(s), Some(o)) => max_abs([ground - s, ground - o, s - o]),
            _ => f64::INFINITY,
        };
        pass &= in_range && gap <= 1e-6;
        parts.push(format!(
            "g={g}: ground {ground:.10} {} (−V0, 0), F_g root {}, shooting {}, max gap {gap:.2e} (<= 1e-6)",
            if in_range { "in" } else { "NOT in" },
            spectral.map_or("none".into(), |e| format!("{e:.10}")),
            shot.map_or("none".into(), |e| format!("{e:.10}")),
        ));
    }
    outcome(pass, parts.join("; "))
}

fn kink_at_zero() -> Outcome {
    let report = square_well::kink_analysis(6.0, 1.0, 0.5, Parity::Symmetric, 0, 1e-6, 2000).unwrap();
    let Some(k) = report else {
        return outcome(false, "ground level missing near g = 0".into());
    };
    let continuous = k.continuity_gap() < 1e-4;
    let kinked = k.slope_jump > 10.0 * k.noise_floor;
    outcome(
        continuous && kinked,
        format!(
            "|E(±1e-6) − E(0)| = {:.2e} (< 1e-4), slopes {:.9} / {:.9}, jump {:.2e} vs noise floor {:.2e} (needs > 10×, got {:.1}×)",
            k.continuity_gap(),
            k.slope_minus,
            k.slope_plus,
            k.slope_jump,
            k.noise_floor,
            k.significance()
        ),
    )
}

fn trotter_errors(to: f64, levels: &[usize]) -> Vec<f64> {
    let sol = delta_defect::solve_bright(0.0, -2.0, -1.0).unwrap();
    let free = Potential::default();
    let s0 = sol.state(-8.0);
    let reference = oracle::integrate(&free, -1.0, -2.0, s0, -8.0, to, 1e-4).last();
    levels
        .iter()
        .map(|&n| {
            let s = propagator::trotter_propagate(s0, &free, -1.0, -2.0, -8.0, to, n, Splitting::Lie).unwrap().last();
            (s.psi - reference.psi).hypot(s.dpsi - reference.dpsi)
        })
        .collect()
}

fn loglog_slope(steps: &[f64], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = steps.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn trotter_convergence() -> Outcome {
    let levels = [1000usize, 2000, 4000, 8000];
    let errors = trotter_errors(8.0, &levels);
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let steps: Vec<f64> = levels.iter().map(|&n| 16.0 / n as f64).collect();
    let slope = loglog_slope(&steps, &errors);
    let pass = ratios.iter().all(|r| (1.8..=2.2).contains(r)) && (0.9..=2.1).contains(&slope);
    let peak = trotter_errors(0.0, &levels);
    let peak_ratios: Vec<String> = peak.windows(2).map(|w| format!("{:.2}", w[0] / w[1])).collect();
    outcome(
        pass,
        format!(
            "[−8, 8] endpoint errors {:?}, ratios {:?} (each in [1.8, 2.2]), log-log slope {slope:.3} (in [0.9, 2.1]); \
             diagnostic run ending at the peak τ = 0: ratios [{}]",
            errors.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>(),
            ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>(),
            peak_ratios.join(", ")
        ),
    )
}

fn seed_dichotomy() -> Outcome {
    let well = Potential::square_well(6.0, 1.0).unwrap();
    let roots_for = |kind, seed, n_steps| {
        let req = SpectralRequest {
            potential: &well,
            kind,
            seed,
            energies: linspace(-5.99, -0.01, 300),
            tau_max: 20.0,
            n_steps,
            root_tol: 0.0,
        };
        propagator::find_spectrum(&req).unwrap().root_energies()
    };
    let (a, b) = (roots_for(SpectralKind::Linear, Seed::Cutoff(1.0), 1000), roots_for(SpectralKind::Linear, Seed::Cutoff(10.0), 1000));
    let linear_drift = if a.len() == b.len() && !a.is_empty() {
        max_abs(a.iter().zip(&b).map(|(x, y)| x - y))
    } else {
        f64::INFINITY
    };
    let kind = SpectralKind::Nonlinear { g: 4.0, scheme: Splitting::Lie };
    let (c, d) = (roots_for(kind, Seed::SupportEdge(0.25), 100_000), roots_for(kind, Seed::SupportEdge(0.5), 100_000));
    let nonlinear_drift = match (c.first(), d.first()) {
        (Some(x), Some(y)) => (x - y).abs(),
        _ => 0.0,
    };
    outcome(
        linear_drift <= 1e-10 && nonlinear_drift > 1e-6,
        format!(
            "linear roots {a:?}, drift under 10× seed {linear_drift:.2e} (<= 1e-10); g=4 lowest root at seeds 0.25 / 0.5: {:?} / {:?}, drift {nonlinear_drift:.2e} (> 1e-6)",
            c.first(),
            d.first()
        ),
    )
}

/// Largest displacement from `(x, 0)` over a short oracle run started at
/// `(x + eps, 0)`, in units of `eps`.
fn excursion(x: f64, energy: f64, g: f64, v: f64) -> f64 {
    let eps = 1e-4;
    let traj = oracle::integrate(&Potential::default(), energy - v, g, StateVector::new(x + eps, 0.0), 0.0, 5.0, 1e-3);
    traj.states.iter().map(|s| (s.psi - x).hypot(s.dpsi)).fold(0.0, f64::max) / eps
}

fn critical_point_labels() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, energy, g, v, want_pair) in [("bright", -1.0, -1.0, -3.0, false), ("dark", 1.0, 1.0, 0.0, true)] {
        let points = critical_points(&QuasiParams::new(energy, g), v);
        let pair_ok = if want_pair {
            let x = ((energy - v) / g).sqrt();
            points.len() == 3
                && points.iter().any(|p| p.kind == CriticalKind::DarkPairPlus && (p.x - x).abs() < 1e-15)
                && points.iter().any(|p| p.kind == CriticalKind::DarkPairMinus && (p.x + x).abs() < 1e-15)
        } else {
            points.len() == 1 && points[0].kind == CriticalKind::OriginBright
        };
        let mut labels_ok = true;
        for p in &points {
            let grow = excursion(p.x, energy, g, v);
            // a centre keeps the excursion O(1); a saddle amplifies it by e^{λT}
            let observed = if grow < 10.0 { Stability::Stable } else if grow > 100.0 { Stability::Unstable } else { return outcome(false, format!("{label}: ambiguous excursion {grow:.1}")) };
            labels_ok &= observed == p.stability;
            parts.push(format!("{label} x={:+.3}: {:?} (excursion {grow:.1}×)", p.x, p.stability));
        }
        pass &= pair_ok && labels_ok;
        if !pair_ok {
            parts.push(format!("{label}: unexpected point set"));
        }
    }
    outcome(pass, parts.join("; "))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 elliptic kernel", elliptic_kernel, Duration::from_secs(5)),
        ("2 unimodularity", unimodularity, Duration::from_secs(10)),
        ("3 linear reduction", linear_reduction, Duration::from_secs(30)),
        ("4 delta closed forms", delta_closed_forms, Duration::from_secs(20)),
        ("5 nonlinear well agreement", nonlinear_well_agreement, Duration::from_secs(60)),
        ("6 kink at g=0", kink_at_zero, Duration::from_secs(60)),
        ("7 trotter convergence", trotter_convergence, Duration::from_secs(60)),
        ("8 seed dichotomy", seed_dichotomy, Duration::from_secs(30)),
        ("9 critical points", critical_point_labels, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let pass = result.pass && elapsed < budget;
        failed += usize::from(!pass);
        println!(
            "criterion {name}: {} [{:.2} s of {} s] {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            result.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 && std::env::var("GPBOUND_ACCEPTANCE_STRICT").as_deref() == Ok("1") {
        std::process::exit(1);
    }
}
