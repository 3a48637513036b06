//! Bound states of a condensate in the finite square well
//! `V = −V0` for `|τ| < τ0`, zero outside.
//!
//! The wave is fixed by its amplitude `φ_b` at the walls. Outside, the
//! decaying tail has zero quasi-energy; inside, the quasi-energy is
//! `U2 = ½ V0 φ_b²` and `η = ψ²` obeys
//!
//! ```text
//! η'² = 2g P(η),   P(η) = η (η² − 2cη + d),   c = (E + V0)/g,   d = 2 V0 φ_b²/g
//! ```
//!
//! whose roots bound the interior oscillation. The interior is a Jacobi `sn`
//! (g > 0) or `cn` (g < 0) wave launched from the left wall; the phase it
//! accumulates up to the centre, `Q(E) = α(0)`, quantizes the levels:
//! `Q = nπ` for even states, `Q = (n + ½)π` for odd ones.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elliptic::{self, EllipticError};
use crate::model::{Parity, Potential};
use crate::roots;

/// Margin keeping scans away from `E = −V0` and `E = 0`.
pub const ENERGY_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SquareWellError {
    #[error("invalid well configuration: {0}")]
    InvalidConfig(String),
    #[error("energy {energy} outside the open interval (−V0, 0) = ({lower}, 0)")]
    EnergyOutOfRange { energy: f64, lower: f64 },
    #[error("the η-roots need a nonzero coupling")]
    ZeroCoupling,
    #[error("no turning point: discriminant {discriminant} is negative")]
    NoTurningPoint { discriminant: f64 },
    #[error("boundary amplitude {phi_b} exceeds the interior turning amplitude {limit}")]
    AmplitudeTooLarge { phi_b: f64, limit: f64 },
    #[error("boundary amplitude {phi_b} exceeds the soliton peak {peak} of the exterior tail")]
    ExceedsSolitonPeak { phi_b: f64, peak: f64 },
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellConfig {
    pub v0: f64,
    pub tau0: f64,
    pub g: f64,
    pub phi_b: f64,
}

impl WellConfig {
    pub fn new(v0: f64, tau0: f64, g: f64, phi_b: f64) -> Result<Self, SquareWellError> {
        let cfg = Self { v0, tau0, g, phi_b };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SquareWellError> {
        let bad = |what: &str| Err(SquareWellError::InvalidConfig(what.to_string()));
        if ![self.v0, self.tau0, self.g, self.phi_b].iter().all(|v| v.is_finite()) {
            return bad("parameters must be finite");
        }
        if self.v0 <= 0.0 {
            return bad("V0 must be positive");
        }
        if self.tau0 <= 0.0 {
            return bad("tau0 must be positive");
        }
        if self.phi_b <= 0.0 {
            return bad("phi_b must be positive");
        }
        Ok(())
    }

    pub fn with_coupling(self, g: f64) -> Self {
        Self { g, ..self }
    }

    pub fn potential(&self) -> Potential {
        Potential::square_well(self.v0, self.tau0).expect("validated well")
    }

    /// Attractive gases can bind below the well floor; repulsive and linear
    /// ones cannot.
    fn check_energy(&self, energy: f64) -> Result<(), SquareWellError> {
        if energy < 0.0 && (energy > -self.v0 || self.g < 0.0) {
            Ok(())
        } else {
            Err(SquareWellError::EnergyOutOfRange {
                energy,
                lower: -self.v0,
            })
        }
    }

    /// Energy window a scan covers by default. For `g < 0` it reaches below
    /// the floor by `4 φ_b √(2 V0 |g|)`, four times `|g| η3` at `E = −V0`.
    pub fn energy_window(&self) -> (f64, f64) {
        let lower = if self.g < 0.0 {
            -self.v0 - 4.0 * self.phi_b * (2.0 * self.v0 * -self.g).sqrt()
        } else {
            -self.v0 + ENERGY_MARGIN * self.v0.max(1.0)
        };
        (lower, -ENERGY_MARGIN)
    }
}

/// Roots of `P`; `g > 0`: `η1 = 0 ≤ η2 ≤ η3`, `g < 0`: `η1 < 0 = η2 < η3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaRoots {
    pub eta1: f64,
    pub eta2: f64,
    pub eta3: f64,
}

pub fn eta_roots(cfg: &WellConfig, energy: f64) -> Result<EtaRoots, SquareWellError> {
    cfg.validate()?;
    if cfg.g == 0.0 {
        return Err(SquareWellError::ZeroCoupling);
    }
    let c = (energy + cfg.v0) / cfg.g;
    let d = 2.0 * cfg.v0 * cfg.phi_b * cfg.phi_b / cfg.g;
    let discriminant = c * c - d;
    if discriminant < 0.0 {
        return Err(SquareWellError::NoTurningPoint { discriminant });
    }
    // larger-magnitude root first, the other from the product d
    let big = c + if c < 0.0 { -1.0 } else { 1.0 } * discriminant.sqrt();
    let other = if big == 0.0 { 0.0 } else { d / big };
    let (lo, hi) = (big.min(other), big.max(other));
    Ok(if cfg.g > 0.0 {
        EtaRoots {
            eta1: 0.0,
            eta2: lo,
            eta3: hi,
        }
    } else {
        EtaRoots {
            eta1: lo,
            eta2: 0.0,
            eta3: hi,
        }
    })
}

/// `P(η) = η(η² − 2cη + d)`.
pub fn cubic(cfg: &WellConfig, energy: f64, eta: f64) -> f64 {
    let c = (energy + cfg.v0) / cfg.g;
    let d = 2.0 * cfg.v0 * cfg.phi_b * cfg.phi_b / cfg.g;
    eta * (eta * eta - 2.0 * c * eta + d)
}

/// Interior wave data, `ψ = amp · f(λ(τ + τ0) + θ0)` with `f` = `sin`, `sn`
/// or `cn` depending on the sign of `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Interior {
    Linear { amp: f64, q: f64, theta0: f64 },
    Sn { amp: f64, lambda: f64, theta0: f64, modulus: f64 },
    Cn { amp: f64, lambda: f64, theta0: f64, modulus: f64 },
}

impl Interior {
    fn argument(&self, s: f64) -> f64 {
        match *self {
            Interior::Linear { q, theta0, .. } => q * s + theta0,
            Interior::Sn { lambda, theta0, .. } | Interior::Cn { lambda, theta0, .. } => lambda * s + theta0,
        }
    }

    /// `α` at distance `s = τ + τ0` from the left wall; the wave is `amp·cos α`.
    fn alpha(&self, s: f64) -> Result<f64, EllipticError> {
        let u = self.argument(s);
        Ok(match *self {
            Interior::Linear { .. } => u - FRAC_PI_2,
            Interior::Sn { modulus, .. } => elliptic::jacobi_am(u, modulus)? - FRAC_PI_2,
            Interior::Cn { modulus, .. } => elliptic::jacobi_am(u, modulus)?,
        })
    }

    fn state(&self, s: f64) -> (f64, f64) {
        let u = self.argument(s);
        match *self {
            Interior::Linear { amp, q, .. } => {
                let (sin, cos) = u.sin_cos();
                (amp * sin, amp * q * cos)
            }
            Interior::Sn { amp, lambda, modulus, .. } => {
                let t = elliptic::jacobi_sn_cn_dn(u, modulus).expect("modulus checked at construction");
                (amp * t.sn, amp * lambda * t.cn * t.dn)
            }
            Interior::Cn { amp, lambda, modulus, .. } => {
                let t = elliptic::jacobi_sn_cn_dn(u, modulus).expect("modulus checked at construction");
                (amp * t.cn, -amp * lambda * t.sn * t.dn)
            }
        }
    }
}

/// Interior wave matched to the decaying exterior at the left wall.
pub fn interior(cfg: &WellConfig, energy: f64) -> Result<Interior, SquareWellError> {
    cfg.validate()?;
    cfg.check_energy(energy)?;
    let phi_b = cfg.phi_b;
    let kappa = (-energy).sqrt();
    if cfg.g == 0.0 {
        let q = (energy + cfg.v0).sqrt();
        return Ok(Interior::Linear {
            amp: phi_b * q.hypot(kappa) / q,
            q,
            theta0: q.atan2(kappa),
        });
    }
    if cfg.g < 0.0 {
        let peak = (2.0 * kappa * kappa / -cfg.g).sqrt();
        if phi_b > peak {
            return Err(SquareWellError::ExceedsSolitonPeak { phi_b, peak });
        }
    }
    let roots = eta_roots(cfg, energy)?;
    if cfg.g > 0.0 {
        let EtaRoots { eta2, eta3, .. } = roots;
        if phi_b * phi_b > eta2 {
            return Err(SquareWellError::AmplitudeTooLarge {
                phi_b,
                limit: eta2.sqrt(),
            });
        }
        let modulus = (eta2 / eta3).sqrt().min(1.0);
        let start = phi_b.atan2((eta2 - phi_b * phi_b).sqrt());
        Ok(Interior::Sn {
            amp: eta2.sqrt(),
            lambda: (0.5 * cfg.g * eta3).sqrt(),
            theta0: elliptic::ellip_f(start, modulus)?,
            modulus,
        })
    } else {
        let EtaRoots { eta1, eta3, .. } = roots;
        if phi_b * phi_b > eta3 {
            return Err(SquareWellError::AmplitudeTooLarge {
                phi_b,
                limit: eta3.sqrt(),
            });
        }
        let modulus = (eta3 / (eta3 - eta1)).sqrt().min(1.0);
        let start = (eta3 - phi_b * phi_b).sqrt().atan2(phi_b);
        Ok(Interior::Cn {
            amp: eta3.sqrt(),
            lambda: (0.5 * -cfg.g * (eta3 - eta1)).sqrt(),
            theta0: -elliptic::ellip_f(start, modulus)?,
            modulus,
        })
    }
}

/// Interior phase `α(τ)` for `τ ∈ [−τ0, τ0]`; the interior wave is
/// `amp · cos α(τ)`.
pub fn alpha_interior(cfg: &WellConfig, energy: f64, tau: f64) -> Result<f64, SquareWellError> {
    let wave = interior(cfg, energy)?;
    Ok(wave.alpha(tau + cfg.tau0)?)
}

/// Quantization function `Q(E) = α(0)`.
pub fn quantization_phase(cfg: &WellConfig, energy: f64) -> Result<f64, SquareWellError> {
    alpha_interior(cfg, energy, 0.0)
}

/// Decaying exterior amplitude at `|τ| ≥ τ0`, equal to `φ_b` at the walls.
pub fn exterior_tail(cfg: &WellConfig, energy: f64, tau: f64) -> Result<f64, SquareWellError> {
    cfg.validate()?;
    if energy >= 0.0 {
        return Err(SquareWellError::EnergyOutOfRange {
            energy,
            lower: -cfg.v0,
        });
    }
    let kappa = (-energy).sqrt();
    let s = (tau.abs() - cfg.tau0).max(0.0);
    let phi_b = cfg.phi_b;
    if cfg.g == 0.0 {
        return Ok(phi_b * (-kappa * s).exp());
    }
    let scale = (2.0 * kappa * kappa / cfg.g.abs()).sqrt();
    if cfg.g > 0.0 {
        let x = kappa * s + (scale / phi_b).asinh();
        let w = (-x).exp();
        Ok(2.0 * scale * w / -(-2.0 * x).exp_m1())
    } else {
        if phi_b > scale {
            return Err(SquareWellError::ExceedsSolitonPeak { phi_b, peak: scale });
        }
        let x = kappa * s + (scale / phi_b).acosh();
        Ok(scale / x.cosh())
    }
}

fn tail_slope(cfg: &WellConfig, energy: f64, psi: f64) -> f64 {
    let rad = (-energy + 0.5 * cfg.g * psi * psi).max(0.0);
    psi * rad.sqrt()
}

/// A quantized level with its assembled wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WellBoundState {
    pub energy: f64,
    pub n: u32,
    pub parity: Parity,
    pub config: WellConfig,
    pub interior: Interior,
}

impl WellBoundState {
    pub fn new(cfg: &WellConfig, energy: f64, parity: Parity) -> Result<Self, SquareWellError> {
        let interior = interior(cfg, energy)?;
        let q = interior.alpha(cfg.tau0)?;
        let n = match parity {
            Parity::Symmetric => (q / PI).round(),
            Parity::Antisymmetric => (q / PI - 0.5).round(),
        };
        Ok(Self {
            energy,
            n: n.max(0.0) as u32,
            parity,
            config: *cfg,
            interior,
        })
    }

    /// `(ψ, ψ')` at `tau`. The walls belong to the interior.
    pub fn state(&self, tau: f64) -> (f64, f64) {
        let cfg = &self.config;
        if tau.abs() <= cfg.tau0 {
            return self.interior.state(tau + cfg.tau0);
        }
        let tail = exterior_tail(cfg, self.energy, tau).expect("tail validated at construction");
        let slope = tail_slope(cfg, self.energy, tail);
        if tau < 0.0 {
            (tail, slope)
        } else {
            let sign = match self.parity {
                Parity::Symmetric => 1.0,
                Parity::Antisymmetric => -1.0,
            };
            (sign * tail, -sign * slope)
        }
    }

    pub fn psi(&self, tau: f64) -> f64 {
        self.state(tau).0
    }

    /// Largest mismatch of `(ψ, ψ')` between interior and exterior pieces at
    /// the two walls.
    pub fn wall_mismatch(&self) -> f64 {
        let cfg = &self.config;
        let sign = match self.parity {
            Parity::Symmetric => 1.0,
            Parity::Antisymmetric => -1.0,
        };
        let tail = cfg.phi_b;
        let slope = tail_slope(cfg, self.energy, tail);
        let (l_psi, l_dpsi) = self.interior.state(0.0);
        let (r_psi, r_dpsi) = self.interior.state(2.0 * cfg.tau0);
        [
            (l_psi - tail).abs(),
            (l_dpsi - slope).abs(),
            (r_psi - sign * tail).abs(),
            (r_dpsi + sign * slope).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// `ψ'(0)` for even states, `ψ(0)` for odd ones, relative to the interior
    /// amplitude.
    pub fn parity_defect(&self) -> f64 {
        let (psi, dpsi) = self.interior.state(self.config.tau0);
        let amp = match self.interior {
            Interior::Linear { amp, .. } | Interior::Sn { amp, .. } | Interior::Cn { amp, .. } => amp,
        };
        match self.parity {
            Parity::Symmetric => dpsi.abs() / (amp * self.config.v0.sqrt()),
            Parity::Antisymmetric => psi.abs() / amp,
        }
    }
}

fn target_phase(parity: Parity, n: i64) -> f64 {
    match parity {
        Parity::Symmetric => n as f64 * PI,
        Parity::Antisymmetric => (n as f64 + 0.5) * PI,
    }
}

/// Graphic-method scan: samples `Q(E)` on `n_grid` points of `e_range`
/// (clipped to the open well window), brackets each crossing of the parity
/// targets and bisects it to `root_tol` in `E`.
///
/// Grid points where no interior wave exists are skipped, and so are roots
/// whose parity condition fails the a-posteriori check.
pub fn quantization_scan(
    cfg: &WellConfig,
    parity: Parity,
    e_range: (f64, f64),
    n_grid: usize,
    root_tol: f64,
) -> Result<Vec<WellBoundState>, SquareWellError> {
    cfg.validate()?;
    let (win_lo, win_hi) = cfg.energy_window();
    let lo = e_range.0.max(win_lo);
    let hi = e_range.1.min(win_hi);
    if !(lo < hi) || n_grid < 2 {
        return Ok(Vec::new());
    }
    let grid = roots::linspace(lo, hi, n_grid);
    let phases: Vec<f64> = grid
        .par_iter()
        .map(|&e| quantization_phase(cfg, e).unwrap_or(f64::NAN))
        .collect();

    let mut brackets = Vec::new();
    for i in 0..grid.len() - 1 {
        let (qa, qb) = (phases[i], phases[i + 1]);
        if !(qa.is_finite() && qb.is_finite()) {
            continue;
        }
        let (qmin, qmax) = (qa.min(qb), qa.max(qb));
        let offset = match parity {
            Parity::Symmetric => 0.0,
            Parity::Antisymmetric => 0.5,
        };
        let first = ((qmin / PI - offset).ceil() as i64).max(0);
        let last = (qmax / PI - offset).floor() as i64;
        for n in first..=last {
            let target = target_phase(parity, n);
            // a target sitting exactly on the left node is owned by the
            // previous interval
            if qa == target && i > 0 {
                continue;
            }
            brackets.push((i, target));
        }
    }

    let found: Vec<Option<WellBoundState>> = brackets
        .par_iter()
        .map(|&(i, target)| {
            let f = |e: f64| quantization_phase(cfg, e).map(|q| q - target).unwrap_or(f64::NAN);
            let refined = roots::bisect(f, grid[i], grid[i + 1], phases[i] - target, root_tol);
            let state = WellBoundState::new(cfg, refined.root, parity).ok()?;
            (state.parity_defect() <= 1e-8).then_some(state)
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

/// Energy of level `n` of the given parity, or `None` when it is unbound.
pub fn level_energy(cfg: &WellConfig, parity: Parity, n: u32, n_grid: usize) -> Result<Option<f64>, SquareWellError> {
    let states = quantization_scan(cfg, parity, cfg.energy_window(), n_grid, 0.0)?;
    Ok(states.into_iter().find(|s| s.n == n).map(|s| s.energy))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub g: f64,
    pub energy: Option<f64>,
}

/// `E(g)` for one level; `truncated` is set when the level is unbound at some
/// of the requested couplings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyCurve {
    pub points: Vec<CurvePoint>,
    pub truncated: bool,
}

pub fn energy_vs_g_curve(
    v0: f64,
    tau0: f64,
    phi_b: f64,
    parity: Parity,
    n: u32,
    couplings: &[f64],
    n_grid: usize,
) -> Result<EnergyCurve, SquareWellError> {
    let base = WellConfig::new(v0, tau0, 0.0, phi_b)?;
    let energies: Vec<Result<Option<f64>, SquareWellError>> = couplings
        .par_iter()
        .map(|&g| level_energy(&base.with_coupling(g), parity, n, n_grid))
        .collect();
    let mut points = Vec::with_capacity(couplings.len());
    for (&g, e) in couplings.iter().zip(energies) {
        points.push(CurvePoint { g, energy: e? });
    }
    let truncated = points.iter().any(|p| p.energy.is_none());
    Ok(EnergyCurve { points, truncated })
}

/// One-sided slopes of `E(g)` at `g = 0` and the noise floor of that
/// estimate, measured as the slope change between steps `δ` and `δ/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KinkReport {
    pub delta: f64,
    pub e_zero: f64,
    pub e_minus: f64,
    pub e_plus: f64,
    pub slope_minus: f64,
    pub slope_plus: f64,
    pub slope_jump: f64,
    pub noise_floor: f64,
}

impl KinkReport {
    pub fn continuity_gap(&self) -> f64 {
        (self.e_plus - self.e_zero).abs().max((self.e_minus - self.e_zero).abs())
    }

    /// Slope jump in units of the noise floor.
    pub fn significance(&self) -> f64 {
        self.slope_jump / self.noise_floor
    }
}

/// Estimates the one-sided slopes of a sampled function `f` at 0 from steps
/// `δ` and `δ/2`; the reported slopes use the finer step.
pub fn one_sided_slopes<F: Fn(f64) -> Option<f64>>(f: F, delta: f64) -> Option<KinkReport> {
    let e0 = f(0.0)?;
    let (ep, em) = (f(delta)?, f(-delta)?);
    let (ep2, em2) = (f(0.5 * delta)?, f(-0.5 * delta)?);
    let coarse_plus = (ep - e0) / delta;
    let coarse_minus = (e0 - em) / delta;
    let slope_plus = (ep2 - e0) / (0.5 * delta);
    let slope_minus = (e0 - em2) / (0.5 * delta);
    let noise_floor = (slope_plus - coarse_plus).abs().max((slope_minus - coarse_minus).abs());
    Some(KinkReport {
        delta,
        e_zero: e0,
        e_minus: em,
        e_plus: ep,
        slope_minus,
        slope_plus,
        slope_jump: (slope_plus - slope_minus).abs(),
        noise_floor,
    })
}

/// Kink analysis of level `n` of the given parity around `g = 0`.
pub fn kink_analysis(
    v0: f64,
    tau0: f64,
    phi_b: f64,
    parity: Parity,
    n: u32,
    delta: f64,
    n_grid: usize,
) -> Result<Option<KinkReport>, SquareWellError> {
    let base = WellConfig::new(v0, tau0, 0.0, phi_b)?;
    let level = |g: f64| level_energy(&base.with_coupling(g), parity, n, n_grid).ok().flatten();
    Ok(one_sided_slopes(level, delta))
}
