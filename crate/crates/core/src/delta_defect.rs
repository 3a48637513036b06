//! Closed-form bound states for a single point defect `ᾱ δ(τ)` in an otherwise
//! free condensate:
//!
//! ```text
//! −ψ'' + ᾱ δ(τ) ψ + γ ψ³ = E ψ,   E < 0
//! ```
//!
//! Attractive gases (`γ < 0`) bind bright sech solitons for either defect
//! sign. Repulsive gases (`γ > 0`) bind only on an attractive defect, through
//! a csch profile with zero quasi-energy on both sides.

use serde::Serialize;
use thiserror::Error;

use crate::model::{Potential, StateVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeltaError {
    #[error("wrong branch: {0}")]
    WrongBranch(&'static str),
    #[error("energy must be negative for a bound state, got {energy}")]
    NonNegativeEnergy { energy: f64 },
    #[error("no bound state: defect strength {alpha_bar} exceeds the threshold {threshold}")]
    NoBoundState { alpha_bar: f64, threshold: f64 },
    #[error("imaginary amplitude: 4|E| = {four_e} exceeds ᾱ² = {alpha_sq}")]
    ImaginaryAmplitude { four_e: f64, alpha_sq: f64 },
    #[error("non-finite parameter")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaBranch {
    BrightRepulsive,
    BrightAttractive,
    LogQuadrature,
}

/// A delta-defect bound state together with its wave evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaSolution {
    pub alpha_bar: f64,
    pub gamma: f64,
    pub energy: f64,
    /// Bright branches: displacement of the sech centre. Log branch: the
    /// quasi-time shift `s0/κ` of the csch argument (infinite at `E = 0`).
    pub tau_bar: f64,
    pub branch: DeltaBranch,
    pub psi0: f64,
}

/// `E = −ᾱ²/4 + (γ/2) ψ(0)²`, valid on every branch.
pub fn energy_relation(alpha_bar: f64, gamma: f64, psi0: f64) -> f64 {
    -0.25 * alpha_bar * alpha_bar + 0.5 * gamma * psi0 * psi0
}

/// Inverts [`energy_relation`] for `ψ(0) ≥ 0`.
pub fn amplitude_for_energy(alpha_bar: f64, gamma: f64, energy: f64) -> Result<f64, DeltaError> {
    if gamma == 0.0 {
        return Err(DeltaError::WrongBranch("amplitude is free when γ = 0"));
    }
    let sq = 2.0 * (energy + 0.25 * alpha_bar * alpha_bar) / gamma;
    if sq < 0.0 {
        return Err(DeltaError::ImaginaryAmplitude {
            four_e: 4.0 * energy.abs(),
            alpha_sq: alpha_bar * alpha_bar,
        });
    }
    Ok(sq.sqrt())
}

/// Threshold `α_crit = −√(2γ) ψ(0)` of the repulsive-gas branch.
pub fn alpha_crit(gamma: f64, psi0: f64) -> f64 {
    -(2.0 * gamma).sqrt() * psi0
}

fn check_finite(values: &[f64]) -> Result<(), DeltaError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(DeltaError::NonFinite)
    }
}

/// Bright soliton `ψ = √(2|E|/|γ|) sech(√|E| (|τ| ∓ τ̄))` for `γ < 0`.
///
/// A repulsive defect (`ᾱ ≥ 0`) pushes two maxima out to `±τ̄`; an attractive
/// one keeps a single maximum at the defect.
pub fn solve_bright(alpha_bar: f64, gamma: f64, energy: f64) -> Result<DeltaSolution, DeltaError> {
    check_finite(&[alpha_bar, gamma, energy])?;
    if gamma >= 0.0 {
        return Err(DeltaError::WrongBranch("bright solitons need γ < 0"));
    }
    if energy >= 0.0 {
        return Err(DeltaError::NonNegativeEnergy { energy });
    }
    let kappa = (-energy).sqrt();
    let ratio = alpha_bar.abs() / (2.0 * kappa);
    if alpha_bar > 0.0 && ratio > 1.0 {
        return Err(DeltaError::NoBoundState {
            alpha_bar,
            threshold: 2.0 * kappa,
        });
    }
    if alpha_bar < 0.0 && ratio > 1.0 {
        return Err(DeltaError::ImaginaryAmplitude {
            four_e: 4.0 * kappa * kappa,
            alpha_sq: alpha_bar * alpha_bar,
        });
    }
    let tau_bar = ratio.atanh() / kappa;
    let peak = (2.0 * kappa * kappa / -gamma).sqrt();
    Ok(DeltaSolution {
        alpha_bar,
        gamma,
        energy,
        tau_bar,
        branch: if alpha_bar >= 0.0 {
            DeltaBranch::BrightRepulsive
        } else {
            DeltaBranch::BrightAttractive
        },
        psi0: peak * (1.0 - ratio * ratio).sqrt(),
    })
}

/// Repulsive gas on an attractive defect at given energy:
/// `ψ = B csch(κ|τ| + s0)` with `B = √(2|E|/γ)`, `κ = √|E|`, `s0 = asinh(B/ψ(0))`.
pub fn solve_log_quadrature(alpha_bar: f64, gamma: f64, energy: f64) -> Result<DeltaSolution, DeltaError> {
    check_finite(&[alpha_bar, gamma, energy])?;
    if gamma <= 0.0 {
        return Err(DeltaError::WrongBranch("the logarithmic branch needs γ > 0"));
    }
    if energy > 0.0 {
        return Err(DeltaError::NonNegativeEnergy { energy });
    }
    if alpha_bar >= 0.0 {
        return Err(DeltaError::NoBoundState {
            alpha_bar,
            threshold: -(4.0 * energy.abs()).sqrt(),
        });
    }
    let four_e = 4.0 * energy.abs();
    let alpha_sq = alpha_bar * alpha_bar;
    if four_e > alpha_sq {
        return Err(DeltaError::ImaginaryAmplitude { four_e, alpha_sq });
    }
    let psi0 = ((alpha_sq - four_e) / (2.0 * gamma)).sqrt();
    Ok(log_solution(alpha_bar, gamma, energy, psi0))
}

/// Same branch parameterized by the defect amplitude `ψ(0)`; the energy
/// follows from [`energy_relation`]. Bound states exist for
/// `ᾱ ≤ α_crit(γ, ψ(0))`, with `E = 0` exactly at the threshold.
pub fn solve_log_quadrature_at_amplitude(
    alpha_bar: f64,
    gamma: f64,
    psi0: f64,
) -> Result<DeltaSolution, DeltaError> {
    check_finite(&[alpha_bar, gamma, psi0])?;
    if gamma <= 0.0 {
        return Err(DeltaError::WrongBranch("the logarithmic branch needs γ > 0"));
    }
    if psi0 <= 0.0 {
        return Err(DeltaError::WrongBranch("defect amplitude must be positive"));
    }
    let threshold = alpha_crit(gamma, psi0);
    if alpha_bar > threshold {
        return Err(DeltaError::NoBoundState { alpha_bar, threshold });
    }
    let energy = energy_relation(alpha_bar, gamma, psi0).min(0.0);
    Ok(log_solution(alpha_bar, gamma, energy, psi0))
}

fn log_solution(alpha_bar: f64, gamma: f64, energy: f64, psi0: f64) -> DeltaSolution {
    let kappa = (-energy).sqrt();
    let b = (2.0 * kappa * kappa / gamma).sqrt();
    let s0 = if psi0 > 0.0 { (b / psi0).asinh() } else { f64::INFINITY };
    DeltaSolution {
        alpha_bar,
        gamma,
        energy,
        tau_bar: if kappa > 0.0 { s0 / kappa } else { f64::INFINITY },
        branch: DeltaBranch::LogQuadrature,
        psi0,
    }
}

impl DeltaSolution {
    pub fn kappa(&self) -> f64 {
        (-self.energy).sqrt()
    }

    /// The defect as a potential, for the numerical solvers.
    pub fn potential(&self) -> Potential {
        Potential::single_delta(0.0, self.alpha_bar).expect("finite delta")
    }

    pub fn psi(&self, tau: f64) -> f64 {
        let kappa = self.kappa();
        let t = tau.abs();
        match self.branch {
            DeltaBranch::BrightRepulsive | DeltaBranch::BrightAttractive => {
                let peak = (2.0 * kappa * kappa / -self.gamma).sqrt();
                peak / (kappa * (t + self.signed_shift())).cosh()
            }
            DeltaBranch::LogQuadrature => {
                if self.psi0 == 0.0 {
                    return 0.0;
                }
                if kappa == 0.0 {
                    let c = (2.0 / self.gamma).sqrt();
                    return c / (t + c / self.psi0);
                }
                let b = (2.0 * kappa * kappa / self.gamma).sqrt();
                let x = kappa * t + (b / self.psi0).asinh();
                // B/sinh x, written to stay accurate for small and large x
                let w = (-x).exp();
                2.0 * b * w / -(-2.0 * x).exp_m1()
            }
        }
    }

    /// `ψ'` at `tau`; at `τ = 0` this is the right-hand limit.
    pub fn dpsi(&self, tau: f64) -> f64 {
        let side = if tau < 0.0 { -1.0 } else { 1.0 };
        self.dpsi_on_side(tau, side)
    }

    fn dpsi_on_side(&self, tau: f64, side: f64) -> f64 {
        let kappa = self.kappa();
        let psi = self.psi(tau);
        match self.branch {
            DeltaBranch::BrightRepulsive | DeltaBranch::BrightAttractive => {
                let y = kappa * (tau.abs() + self.signed_shift());
                -side * kappa * psi * y.tanh()
            }
            DeltaBranch::LogQuadrature => {
                // zero quasi-energy: ψ'² = κ²ψ² + (γ/2)ψ⁴, decaying away from 0
                -side * psi * (kappa * kappa + 0.5 * self.gamma * psi * psi).sqrt()
            }
        }
    }

    fn signed_shift(&self) -> f64 {
        match self.branch {
            DeltaBranch::BrightRepulsive => -self.tau_bar,
            _ => self.tau_bar,
        }
    }

    pub fn state(&self, tau: f64) -> StateVector {
        StateVector::new(self.psi(tau), self.dpsi(tau))
    }

    /// States on either side of the defect.
    pub fn states_at_defect(&self) -> (StateVector, StateVector) {
        (
            StateVector::new(self.psi(0.0), self.dpsi_on_side(0.0, -1.0)),
            StateVector::new(self.psi(0.0), self.dpsi_on_side(0.0, 1.0)),
        )
    }
}
