//! Transfer-matrix propagation of the spinor `(ψ', ψ)` through general
//! potentials, and spectral functions whose zeros are the bound states.
//!
//! The linear flow `d/dτ (ψ', ψ) = M (ψ', ψ)` with `M = [[0, V − E], [1, 0]]`
//! is traceless, so every propagator here is unimodular. Constant stretches
//! are exponentiated exactly; point defects act as shears `[[1, ᾱ], [0, 1]]`.
//! The cubic term enters through the same shear with strength `gψ²Δτ`,
//! evaluated with the current `ψ` (Lie–Trotter splitting), kick first.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::model::{tail_slope, Delta, ExteriorWindow, PotentialProfile, StateVector};
use crate::roots;

/// `|ψ|` beyond which a nonlinear propagation is declared divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e150;

/// Reported for `F_g` when the propagation diverges.
pub const DIVERGENT_F: f64 = 1e150;

const RESCALE_LIMIT: f64 = 1e100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PropagatorError {
    #[error("energy {energy} is not below the exterior floor {floor}: no bound state regime")]
    NotBoundRegime { energy: f64, floor: f64 },
    #[error("n_steps must be at least 1")]
    NoSteps,
    #[error("interval [{from}, {to}] must be finite and ordered")]
    InvalidInterval { from: f64, to: f64 },
    #[error("invalid energy grid: {0}")]
    InvalidGrid(String),
    #[error("seed amplitude {amplitude} is not admissible: {reason}")]
    InvalidSeed { amplitude: f64, reason: &'static str },
}

/// Real 2×2 matrix acting on `(ψ', ψ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferMatrix {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl TransferMatrix {
    pub const IDENTITY: Self = Self {
        m11: 1.0,
        m12: 0.0,
        m21: 0.0,
        m22: 1.0,
    };

    /// `self · rhs`: apply `rhs` first.
    pub fn then_after(&self, rhs: &Self) -> Self {
        Self {
            m11: self.m11 * rhs.m11 + self.m12 * rhs.m21,
            m12: self.m11 * rhs.m12 + self.m12 * rhs.m22,
            m21: self.m21 * rhs.m11 + self.m22 * rhs.m21,
            m22: self.m21 * rhs.m12 + self.m22 * rhs.m22,
        }
    }

    pub fn apply(&self, s: StateVector) -> StateVector {
        StateVector::new(self.m21 * s.dpsi + self.m22 * s.psi, self.m11 * s.dpsi + self.m12 * s.psi)
    }

    /// Determinant with the cross term compensated by a fused multiply-add.
    pub fn det(&self) -> f64 {
        let cross = self.m12 * self.m21;
        let cross_err = self.m12.mul_add(self.m21, -cross);
        self.m11.mul_add(self.m22, -cross) - cross_err
    }

    pub fn max_abs(&self) -> f64 {
        self.m11.abs().max(self.m12.abs()).max(self.m21.abs()).max(self.m22.abs())
    }
}

impl std::ops::Mul for TransferMatrix {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.then_after(&rhs)
    }
}

/// `exp(Δτ · [[0, V − E], [1, 0]])` in closed form.
pub fn interval_propagator(v: f64, energy: f64, dtau: f64) -> TransferMatrix {
    let w2 = v - energy;
    if w2 == 0.0 || dtau == 0.0 {
        return TransferMatrix {
            m11: 1.0,
            m12: 0.0,
            m21: dtau,
            m22: 1.0,
        };
    }
    let w = w2.abs().sqrt();
    let x = w * dtau;
    if w2 > 0.0 {
        let (c, s) = (x.cosh(), x.sinh());
        TransferMatrix {
            m11: c,
            m12: w * s,
            m21: s / w,
            m22: c,
        }
    } else {
        let (s, c) = x.sin_cos();
        TransferMatrix {
            m11: c,
            m12: -w * s,
            m21: s / w,
            m22: c,
        }
    }
}

/// Shear `ψ' → ψ' + v'ψ` of a point defect of strength `v'`.
pub fn delta_kick(strength: f64) -> TransferMatrix {
    TransferMatrix {
        m11: 1.0,
        m12: strength,
        m21: 0.0,
        m22: 1.0,
    }
}

/// Uniform Dirac-comb sampling of the regular part of a potential: kicks of
/// strength `V(τ_i)Δτ` at the slice midpoints `τ_i = τ0 + iΔτ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombLayering {
    pub positions: Vec<f64>,
    pub strengths: Vec<f64>,
    pub dtau: f64,
    pub from: f64,
    pub to: f64,
}

impl CombLayering {
    pub fn new<P: PotentialProfile + ?Sized>(pot: &P, from: f64, to: f64, n: usize) -> Result<Self, PropagatorError> {
        check_interval(from, to, n)?;
        let dtau = (to - from) / n as f64;
        let positions: Vec<f64> = (0..n).map(|i| from + (i as f64 + 0.5) * dtau).collect();
        let strengths = positions.iter().map(|&t| pot.value(t) * dtau).collect();
        Ok(Self {
            positions,
            strengths,
            dtau,
            from,
            to,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Product of free flights (`V = 0`) and comb kicks, with the point defects
/// `deltas` inserted at their own positions. Converges to the ordered
/// exponential as `Δτ → 0`.
pub fn dirac_comb_product(layering: &CombLayering, deltas: &[Delta], energy: f64) -> TransferMatrix {
    let mut kicks: Vec<(f64, f64)> = layering.positions.iter().copied().zip(layering.strengths.iter().copied()).collect();
    kicks.extend(
        deltas
            .iter()
            .filter(|d| d.at >= layering.from && d.at < layering.to)
            .map(|d| (d.at, d.strength)),
    );
    kicks.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = TransferMatrix::IDENTITY;
    let mut cursor = layering.from;
    for (at, strength) in kicks {
        total = delta_kick(strength) * interval_propagator(0.0, energy, at - cursor) * total;
        cursor = at;
    }
    interval_propagator(0.0, energy, layering.to - cursor) * total
}

fn check_interval(from: f64, to: f64, n: usize) -> Result<(), PropagatorError> {
    if n == 0 {
        return Err(PropagatorError::NoSteps);
    }
    if !(from.is_finite() && to.is_finite() && from <= to) {
        return Err(PropagatorError::InvalidInterval { from, to });
    }
    Ok(())
}

/// One piece of a sliced propagation.
#[derive(Debug, Clone, Copy)]
enum Piece {
    /// constant level `v` over `len`
    Flat { v: f64, len: f64 },
    Kick(f64),
    /// end of uniform slice at `tau`
    SliceEnd(f64),
}

/// Uniform slices of `[from, to]`, each cut at breakpoints and defects.
/// Defects in `[from, to)` are emitted as kicks when reached.
fn slice<P: PotentialProfile + ?Sized>(pot: &P, from: f64, to: f64, n: usize, mut visit: impl FnMut(Piece) -> bool) {
    let mut events: Vec<(f64, f64)> = pot.breakpoints().iter().map(|&b| (b, 0.0)).collect();
    events.extend(pot.deltas().iter().map(|d| (d.at, d.strength)));
    events.retain(|e| e.0 >= from && e.0 < to);
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut next = 0;
    let h = (to - from) / n as f64;
    let mut cursor = from;
    for i in 0..n {
        let end = if i + 1 == n { to } else { from + (i + 1) as f64 * h };
        while next < events.len() && events[next].0 < end {
            let (at, strength) = events[next];
            if at > cursor {
                let v = pot.value(0.5 * (cursor + at));
                if !visit(Piece::Flat { v, len: at - cursor }) {
                    return;
                }
                cursor = at;
            }
            if strength != 0.0 && !visit(Piece::Kick(strength)) {
                return;
            }
            next += 1;
        }
        if end > cursor {
            let v = pot.value(0.5 * (cursor + end));
            if !visit(Piece::Flat { v, len: end - cursor }) {
                return;
            }
        }
        cursor = end;
        if !visit(Piece::SliceEnd(end)) {
            return;
        }
    }
}

/// Reuses the last interval propagator when consecutive pieces repeat.
struct StepCache {
    key: (f64, f64),
    matrix: TransferMatrix,
    energy: f64,
}

impl StepCache {
    fn new(energy: f64) -> Self {
        Self {
            key: (f64::NAN, f64::NAN),
            matrix: TransferMatrix::IDENTITY,
            energy,
        }
    }

    fn get(&mut self, v: f64, len: f64) -> TransferMatrix {
        if self.key != (v, len) {
            self.key = (v, len);
            self.matrix = interval_propagator(v, self.energy, len);
        }
        self.matrix
    }
}

/// Position-ordered product over `[from, to]` on `n_steps` uniform slices.
/// Each slice is cut at breakpoints and defects and every piece is
/// exponentiated exactly at its midpoint level, so piecewise-constant
/// potentials are reproduced for any `n_steps`. Defects in `[from, to)` are
/// included.
pub fn ordered_exponential<P: PotentialProfile + ?Sized>(
    pot: &P,
    energy: f64,
    from: f64,
    to: f64,
    n_steps: usize,
) -> Result<TransferMatrix, PropagatorError> {
    check_interval(from, to, n_steps)?;
    let mut cache = StepCache::new(energy);
    let mut total = TransferMatrix::IDENTITY;
    slice(pot, from, to, n_steps, |piece| {
        match piece {
            Piece::Flat { v, len } => total = cache.get(v, len) * total,
            Piece::Kick(strength) => total = delta_kick(strength) * total,
            Piece::SliceEnd(_) => {}
        }
        true
    });
    Ok(total)
}

/// Splitting of the cubic kick against the linear flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    /// kick with the current `ψ²`, then the linear interval (first order)
    #[default]
    Lie,
    /// half kick, linear interval, half kick (second order)
    Strang,
}

#[inline]
fn kick(s: StateVector, g: f64, dtau: f64) -> StateVector {
    StateVector::new(s.psi, s.dpsi + g * s.psi * s.psi * dtau * s.psi)
}

fn split_step(s: StateVector, linear: &TransferMatrix, g: f64, dtau: f64, scheme: Splitting) -> StateVector {
    if g == 0.0 {
        return linear.apply(s);
    }
    match scheme {
        Splitting::Lie => linear.apply(kick(s, g, dtau)),
        Splitting::Strang => kick(linear.apply(kick(s, g, 0.5 * dtau)), g, 0.5 * dtau),
    }
}

/// One Lie–Trotter step: nonlinear shear with the current `ψ²`, then the exact
/// linear interval.
pub fn nonlinear_step(s: StateVector, v: f64, energy: f64, g: f64, dtau: f64) -> StateVector {
    split_step(s, &interval_propagator(v, energy, dtau), g, dtau, Splitting::Lie)
}

/// [`nonlinear_step`] with an explicit splitting.
pub fn nonlinear_step_with(s: StateVector, v: f64, energy: f64, g: f64, dtau: f64, scheme: Splitting) -> StateVector {
    split_step(s, &interval_propagator(v, energy, dtau), g, dtau, scheme)
}

/// States on the uniform grid of a Trotter propagation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrotterTrajectory {
    pub grid: Vec<f64>,
    pub states: Vec<StateVector>,
    pub divergent: bool,
}

impl TrotterTrajectory {
    pub fn last(&self) -> StateVector {
        *self.states.last().expect("trajectory holds the initial state")
    }
}

/// Composes Trotter steps over `[from, to]` on `n_steps` uniform slices,
/// recording the state at every slice end. Stops with `divergent` set once
/// `|ψ|` exceeds `1e150`.
#[allow(clippy::too_many_arguments)]
pub fn trotter_propagate<P: PotentialProfile + ?Sized>(
    s0: StateVector,
    pot: &P,
    energy: f64,
    g: f64,
    from: f64,
    to: f64,
    n_steps: usize,
    scheme: Splitting,
) -> Result<TrotterTrajectory, PropagatorError> {
    check_interval(from, to, n_steps)?;
    let mut traj = TrotterTrajectory {
        grid: Vec::with_capacity(n_steps + 1),
        states: Vec::with_capacity(n_steps + 1),
        divergent: false,
    };
    traj.grid.push(from);
    traj.states.push(s0);
    let mut cache = StepCache::new(energy);
    let mut s = s0;
    slice(pot, from, to, n_steps, |piece| {
        match piece {
            Piece::Flat { v, len } => s = split_step(s, &cache.get(v, len), g, len, scheme),
            Piece::Kick(strength) => s = delta_kick(strength).apply(s),
            Piece::SliceEnd(tau) => {
                traj.grid.push(tau);
                traj.states.push(s);
                if !(s.psi.abs() <= DIVERGENCE_LIMIT) || !s.is_finite() {
                    traj.divergent = true;
                    return false;
                }
            }
        }
        true
    });
    Ok(traj)
}

/// Where and how the decaying exterior tail is launched.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "at", content = "amplitude", rename_all = "kebab-case")]
pub enum Seed {
    /// `(ψ', ψ) = a (κ, 1)` at `−tau_max`, propagated through the flat exterior
    Cutoff(f64),
    /// exact zero-quasi-energy tail state of amplitude `a` at the left edge of
    /// the support
    SupportEdge(f64),
}

impl Seed {
    pub fn amplitude(&self) -> f64 {
        match *self {
            Seed::Cutoff(a) | Seed::SupportEdge(a) => a,
        }
    }
}

/// Launch point and state for a seed.
fn launch(win: &ExteriorWindow, seed: Seed, kappa_l_sq: f64, g: f64, tau_max: f64) -> Result<(f64, StateVector), PropagatorError> {
    let a = seed.amplitude();
    if !(a > 0.0 && a.is_finite()) {
        return Err(PropagatorError::InvalidSeed {
            amplitude: a,
            reason: "must be positive and finite",
        });
    }
    match seed {
        Seed::Cutoff(a) => Ok((-tau_max.max(-win.left), StateVector::new(a, a * kappa_l_sq.sqrt()))),
        Seed::SupportEdge(a) => {
            let slope = tail_slope(kappa_l_sq, g, a).ok_or(PropagatorError::InvalidSeed {
                amplitude: a,
                reason: "above the soliton peak of the exterior tail",
            })?;
            Ok((win.left, StateVector::new(a, slope)))
        }
    }
}

/// Launch point and state of `seed` for the energy `energy`.
pub fn launch_state<P: PotentialProfile + ?Sized>(
    pot: &P,
    energy: f64,
    g: f64,
    seed: Seed,
    tau_max: f64,
) -> Result<(f64, StateVector), PropagatorError> {
    let (win, kl, _) = bound_window(pot, energy, tau_max)?;
    launch(&win, seed, kl, g, tau_max)
}

fn bound_window<P: PotentialProfile + ?Sized>(pot: &P, energy: f64, tau_max: f64) -> Result<(ExteriorWindow, f64, f64), PropagatorError> {
    let win = ExteriorWindow::new(pot, tau_max);
    let (kl, kr) = win.kappa_sq(energy);
    if kl <= 0.0 || kr <= 0.0 {
        return Err(PropagatorError::NotBoundRegime {
            energy,
            floor: win.v_left.min(win.v_right),
        });
    }
    Ok((win, kl, kr))
}

/// Signed, normalized growing-mode coefficient `(ψ' + κψ) / √(ψ'² + κ²ψ²)`
/// at the right edge of the support for the linear problem; zero exactly on
/// bound states.
pub fn spectral_indicator_linear<P: PotentialProfile + ?Sized>(
    pot: &P,
    energy: f64,
    seed: Seed,
    tau_max: f64,
    n_steps: usize,
) -> Result<f64, PropagatorError> {
    let (win, kl, kr) = bound_window(pot, energy, tau_max)?;
    let (start, s0) = launch(&win, seed, kl, 0.0, tau_max)?;
    check_interval(start, win.right, n_steps)?;
    let mut cache = StepCache::new(energy);
    let mut s = s0;
    slice(pot, start, win.right, n_steps, |piece| {
        match piece {
            Piece::Flat { v, len } => s = cache.get(v, len).apply(s),
            Piece::Kick(strength) => s = delta_kick(strength).apply(s),
            Piece::SliceEnd(_) => {
                // positive rescaling leaves the sign and the zeros alone
                let size = s.psi.abs().max(s.dpsi.abs());
                if size > RESCALE_LIMIT {
                    s = s.scaled(1.0 / size);
                }
            }
        }
        true
    });
    s = edge_kicks(pot, win.right, s);
    let kappa = kr.sqrt();
    Ok((s.dpsi + kappa * s.psi) / s.dpsi.hypot(kappa * s.psi))
}

/// Defects sitting exactly on the right edge are crossed to reach the
/// exterior.
fn edge_kicks<P: PotentialProfile + ?Sized>(pot: &P, at: f64, s: StateVector) -> StateVector {
    pot.deltas()
        .iter()
        .filter(|d| d.at == at)
        .fold(s, |s, d| delta_kick(d.strength).apply(s))
}

/// `F(E) ≥ 0`: magnitude of [`spectral_indicator_linear`].
pub fn spectral_function_linear<P: PotentialProfile + ?Sized>(
    pot: &P,
    energy: f64,
    seed: Seed,
    tau_max: f64,
    n_steps: usize,
) -> Result<f64, PropagatorError> {
    spectral_indicator_linear(pot, energy, seed, tau_max, n_steps).map(f64::abs)
}

/// Signed nonlinear indicator `(ψ' + ψ√(κ² + gψ²/2)) / (κ max|ψ|)` at the
/// right edge of the support, after Trotter propagation of the seed. `NaN`
/// when the propagation diverges.
#[allow(clippy::too_many_arguments)]
pub fn spectral_indicator_nonlinear<P: PotentialProfile + ?Sized>(
    pot: &P,
    energy: f64,
    g: f64,
    seed: Seed,
    tau_max: f64,
    n_steps: usize,
    scheme: Splitting,
) -> Result<f64, PropagatorError> {
    let (win, kl, kr) = bound_window(pot, energy, tau_max)?;
    let (start, s0) = launch(&win, seed, kl, g, tau_max)?;
    check_interval(start, win.right, n_steps)?;
    let mut cache = StepCache::new(energy);
    let mut s = s0;
    let mut peak = s0.psi.abs();
    let mut divergent = false;
    slice(pot, start, win.right, n_steps, |piece| {
        match piece {
            Piece::Flat { v, len } => s = split_step(s, &cache.get(v, len), g, len, scheme),
            Piece::Kick(strength) => s = delta_kick(strength).apply(s),
            Piece::SliceEnd(_) => {
                peak = peak.max(s.psi.abs());
                if !(s.psi.abs() <= DIVERGENCE_LIMIT) || !s.is_finite() {
                    divergent = true;
                    return false;
                }
            }
        }
        true
    });
    if divergent {
        return Ok(f64::NAN);
    }
    s = edge_kicks(pot, win.right, s);
    let kappa = kr.sqrt();
    let rate = (kr + 0.5 * g * s.psi * s.psi).max(0.0).sqrt();
    Ok((s.dpsi + rate * s.psi) / (kappa * peak.max(s.psi.abs())))
}

/// `F_g(E) ≥ 0`; divergent propagations report [`DIVERGENT_F`].
#[allow(clippy::too_many_arguments)]
pub fn spectral_function_nonlinear<P: PotentialProfile + ?Sized>(
    pot: &P,
    energy: f64,
    g: f64,
    seed: Seed,
    tau_max: f64,
    n_steps: usize,
    scheme: Splitting,
) -> Result<f64, PropagatorError> {
    spectral_indicator_nonlinear(pot, energy, g, seed, tau_max, n_steps, scheme)
        .map(|v| if v.is_nan() { DIVERGENT_F } else { v.abs() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpectralKind {
    Linear,
    Nonlinear { g: f64, scheme: Splitting },
}

/// Inputs of [`find_spectrum`].
#[derive(Debug, Clone)]
pub struct SpectralRequest<'a, P: ?Sized> {
    pub potential: &'a P,
    pub kind: SpectralKind,
    pub seed: Seed,
    pub energies: Vec<f64>,
    pub tau_max: f64,
    pub n_steps: usize,
    /// bisection tolerance in `E`; zero means machine precision
    pub root_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralRoot {
    #[serde(rename = "E")]
    pub energy: f64,
    pub bracket: (f64, f64),
    pub iterations: u32,
}

/// Sampled `F(E)` with the refined zeros.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralScan {
    pub kind: SpectralKind,
    pub energies: Vec<f64>,
    /// `F ≥ 0`; `NaN` where the energy is outside the bound-state regime
    pub values: Vec<f64>,
    pub roots: Vec<SpectralRoot>,
}

impl SpectralScan {
    pub fn root_energies(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.energy).collect()
    }

    /// `E,F` table with a one-line header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("E,F\n");
        for (e, f) in self.energies.iter().zip(&self.values) {
            let _ = writeln!(out, "{e:.12e},{f:.12e}");
        }
        out
    }

    /// `{"roots":[{"E":…,"bracket":[…,…],"iterations":…}]}`
    pub fn manifest_json(&self) -> String {
        #[derive(Serialize)]
        struct Manifest<'a> {
            roots: &'a [SpectralRoot],
        }
        serde_json::to_string_pretty(&Manifest { roots: &self.roots }).expect("manifest serializes")
    }
}

fn indicator<P: PotentialProfile + ?Sized>(req: &SpectralRequest<'_, P>, energy: f64) -> f64 {
    let value = match req.kind {
        SpectralKind::Linear => spectral_indicator_linear(req.potential, energy, req.seed, req.tau_max, req.n_steps),
        SpectralKind::Nonlinear { g, scheme } => {
            spectral_indicator_nonlinear(req.potential, energy, g, req.seed, req.tau_max, req.n_steps, scheme)
        }
    };
    value.unwrap_or(f64::NAN)
}

/// Samples the signed indicator on the grid (in parallel), bisects every
/// sign change and keeps the brackets whose bisection converged without
/// meeting a divergent energy.
pub fn find_spectrum<P: PotentialProfile + ?Sized>(req: &SpectralRequest<'_, P>) -> Result<SpectralScan, PropagatorError> {
    if req.energies.len() < 2 {
        return Err(PropagatorError::InvalidGrid("need at least two energies".into()));
    }
    if req.energies.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(PropagatorError::InvalidGrid("energies must be strictly increasing".into()));
    }
    if req.n_steps == 0 {
        return Err(PropagatorError::NoSteps);
    }
    let signed: Vec<f64> = req.energies.par_iter().map(|&e| indicator(req, e)).collect();
    let found: Vec<Option<SpectralRoot>> = roots::sign_changes(&signed)
        .par_iter()
        .map(|&i| {
            let r = roots::bisect(|e| indicator(req, e), req.energies[i], req.energies[i + 1], signed[i], req.root_tol);
            r.converged.then_some(SpectralRoot {
                energy: r.root,
                bracket: r.bracket,
                iterations: r.iterations,
            })
        })
        .collect();
    let values = signed
        .iter()
        .zip(&req.energies)
        .map(|(&v, &e)| {
            if v.is_nan() && bound_window(req.potential, e, req.tau_max).is_ok() {
                DIVERGENT_F
            } else {
                v.abs()
            }
        })
        .collect();
    Ok(SpectralScan {
        kind: req.kind,
        energies: req.energies.clone(),
        values,
        roots: found.into_iter().flatten().collect(),
    })
}
