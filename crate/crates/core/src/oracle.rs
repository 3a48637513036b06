//! Reference solver used to check every other path: classical RK4 on
//! `(ψ, ψ')` with exact jumps at point defects, second-difference residuals,
//! shooting eigenvalues and numeric normalization.
//!
//! Deliberately shares nothing with the transfer-matrix code beyond the
//! potential description.

use rayon::prelude::*;
use serde::Serialize;

use crate::model::{tail_slope, ExteriorWindow, Parity, PotentialProfile, StateVector};
use crate::roots;

/// Default step of the five-point second difference. Smaller steps let
/// rounding (`~ε|ψ|/h²`) dominate the residual.
pub const RESIDUAL_STEP: f64 = 1e-3;

/// `|ψ|` beyond which a nonlinear trajectory is declared divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e150;

const RESCALE_LIMIT: f64 = 1e100;

/// Samples on a uniform grid. For linear runs the stored states are scaled by
/// `exp(−scale_log)`; the true states are `states[i] · exp(scale_log)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub grid: Vec<f64>,
    pub states: Vec<StateVector>,
    pub scale_log: f64,
    pub divergent: bool,
}

impl Trajectory {
    pub fn last(&self) -> StateVector {
        *self.states.last().expect("trajectory holds the initial state")
    }
}

#[inline]
fn rhs(state: StateVector, v: f64, energy: f64, g: f64) -> StateVector {
    let psi = state.psi;
    StateVector::new(state.dpsi, (v - energy + g * psi * psi) * psi)
}

#[inline]
fn axpy(a: StateVector, h: f64, k: StateVector) -> StateVector {
    StateVector::new(a.psi + h * k.psi, a.dpsi + h * k.dpsi)
}

/// One RK4 step across `[a, b]`, with `V` sampled strictly inside so that a
/// jump at either end is seen from the correct side.
fn rk4_step<P: PotentialProfile + ?Sized>(pot: &P, s: StateVector, a: f64, b: f64, energy: f64, g: f64) -> StateVector {
    let h = b - a;
    let nudge = 1e-12 * h;
    let (v0, v1, v2) = (pot.value(a + nudge), pot.value(0.5 * (a + b)), pot.value(b - nudge));
    let k1 = rhs(s, v0, energy, g);
    let k2 = rhs(axpy(s, 0.5 * h, k1), v1, energy, g);
    let k3 = rhs(axpy(s, 0.5 * h, k2), v1, energy, g);
    let k4 = rhs(axpy(s, h, k3), v2, energy, g);
    StateVector::new(
        s.psi + h / 6.0 * (k1.psi + 2.0 * (k2.psi + k3.psi) + k4.psi),
        s.dpsi + h / 6.0 * (k1.dpsi + 2.0 * (k2.dpsi + k3.dpsi) + k4.dpsi),
    )
}

/// Applies `ψ' → ψ' + ᾱψ` for every defect located exactly at `tau`, in the
/// direction of travel.
pub fn apply_deltas_at<P: PotentialProfile + ?Sized>(pot: &P, tau: f64, state: StateVector, forward: bool) -> StateVector {
    let sign = if forward { 1.0 } else { -1.0 };
    pot.deltas()
        .iter()
        .filter(|d| d.at == tau)
        .fold(state, |s, d| StateVector::new(s.psi, s.dpsi + sign * d.strength * s.psi))
}

struct Marcher<'a, P: ?Sized> {
    pot: &'a P,
    energy: f64,
    g: f64,
    /// breakpoints and defect positions, sorted
    events: Vec<f64>,
}

impl<'a, P: PotentialProfile + ?Sized> Marcher<'a, P> {
    fn new(pot: &'a P, energy: f64, g: f64) -> Self {
        let mut events: Vec<f64> = pot.breakpoints().to_vec();
        events.extend(pot.deltas().iter().map(|d| d.at));
        events.sort_by(f64::total_cmp);
        events.dedup();
        Self { pot, energy, g, events }
    }

    /// Advances `s` from `a` to `b` (either direction). Defects at `a` are
    /// crossed, defects at `b` are not: the result is the state on the `a`
    /// side of `b`.
    fn advance(&self, mut s: StateVector, a: f64, b: f64) -> StateVector {
        if a == b {
            return s;
        }
        let forward = b > a;
        let (lo, hi) = if forward { (a, b) } else { (b, a) };
        let start = self.events.partition_point(|&e| e < lo);
        let end = self.events.partition_point(|&e| e <= hi);
        let inner = &self.events[start..end];
        let mut cursor = a;
        let visit = |e: f64, s: &mut StateVector, cursor: &mut f64| {
            if e == a {
                *s = apply_deltas_at(self.pot, e, *s, forward);
                return;
            }
            if e == b {
                return;
            }
            *s = rk4_step(self.pot, *s, *cursor, e, self.energy, self.g);
            *s = apply_deltas_at(self.pot, e, *s, forward);
            *cursor = e;
        };
        if forward {
            for &e in inner {
                visit(e, &mut s, &mut cursor);
            }
        } else {
            for &e in inner.iter().rev() {
                visit(e, &mut s, &mut cursor);
            }
        }
        rk4_step(self.pot, s, cursor, b, self.energy, self.g)
    }
}

/// RK4 integration of `ψ'' = (V − E + gψ²)ψ` from `tau_from` to `tau_to`
/// (either direction) with uniform steps no longer than `dtau`.
///
/// `s0` is the state just on the near side of `tau_from`; a defect sitting at
/// `tau_from` is crossed, one at `tau_to` is not. Linear runs (`g = 0`) are
/// renormalized whenever the state grows past `1e100`; nonlinear runs stop
/// with `divergent` set once `|ψ| > 1e150`.
pub fn integrate<P: PotentialProfile + ?Sized>(
    pot: &P,
    energy: f64,
    g: f64,
    s0: StateVector,
    tau_from: f64,
    tau_to: f64,
    dtau: f64,
) -> Trajectory {
    march(pot, energy, g, s0, tau_from, tau_to, dtau, true)
}

#[allow(clippy::too_many_arguments)]
fn march<P: PotentialProfile + ?Sized>(
    pot: &P,
    energy: f64,
    g: f64,
    s0: StateVector,
    tau_from: f64,
    tau_to: f64,
    dtau: f64,
    record: bool,
) -> Trajectory {
    assert!(dtau > 0.0, "dtau must be positive");
    let marcher = Marcher::new(pot, energy, g);
    let span = tau_to - tau_from;
    let steps = ((span.abs() / dtau).ceil() as usize).max(1);
    let h = span / steps as f64;
    let mut traj = Trajectory {
        grid: vec![tau_from],
        states: vec![s0],
        scale_log: 0.0,
        divergent: false,
    };
    let mut s = s0;
    for i in 0..steps {
        let a = tau_from + i as f64 * h;
        let b = if i + 1 == steps { tau_to } else { tau_from + (i + 1) as f64 * h };
        s = marcher.advance(s, a, b);
        if g == 0.0 {
            let size = s.psi.abs().max(s.dpsi.abs());
            if size > RESCALE_LIMIT {
                s = s.scaled(1.0 / size);
                traj.scale_log += size.ln();
                if record {
                    for earlier in &mut traj.states {
                        *earlier = earlier.scaled(1.0 / size);
                    }
                }
            }
        } else if !(s.psi.abs() <= DIVERGENCE_LIMIT) || !s.is_finite() {
            traj.divergent = true;
        }
        if record || i + 1 == steps || traj.divergent {
            if !record {
                traj.grid.clear();
                traj.states.clear();
            }
            traj.grid.push(b);
            traj.states.push(s);
        }
        if traj.divergent {
            break;
        }
    }
    traj
}

/// Largest `|−ψ'' + (V + gψ²)ψ − Eψ|` over `grid`, with `ψ''` from the
/// five-point stencil of step `h`. Grid points within `2h` of a breakpoint or
/// defect are skipped.
pub fn gp_residual<P, F>(wave: F, pot: &P, energy: f64, g: f64, grid: &[f64], h: f64) -> f64
where
    P: PotentialProfile + ?Sized,
    F: Fn(f64) -> f64,
{
    let mut events: Vec<f64> = pot.breakpoints().to_vec();
    events.extend(pot.deltas().iter().map(|d| d.at));
    grid.iter()
        .filter(|&&t| events.iter().all(|&e| (t - e).abs() > 2.0 * h))
        .map(|&t| {
            let psi = wave(t);
            let d2 = (-wave(t + 2.0 * h) + 16.0 * wave(t + h) - 30.0 * psi + 16.0 * wave(t - h) - wave(t - 2.0 * h))
                / (12.0 * h * h);
            (-d2 + (pot.value(t) + g * psi * psi - energy) * psi).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    pub dtau: f64,
    /// bisection tolerance in `E`; zero means machine precision
    pub root_tol: f64,
    pub tau_max: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            dtau: 1e-3,
            root_tol: 1e-12,
            tau_max: 20.0,
        }
    }
}

/// Launches the decaying exterior state of amplitude `psi_seed` at the left
/// support edge and returns the normalized mismatch of the boundary
/// condition: decay at the right edge, or `ψ'(c) = 0` / `ψ(c) = 0` at the
/// centre `c` of the support when a parity is given.
///
/// `NaN` marks energies where the launch or the run is not defined.
pub fn shooting_mismatch<P: PotentialProfile + ?Sized>(
    pot: &P,
    energy: f64,
    g: f64,
    psi_seed: f64,
    parity: Option<Parity>,
    opts: &ShootingOptions,
) -> f64 {
    let win = ExteriorWindow::new(pot, opts.tau_max);
    let (kl, kr) = win.kappa_sq(energy);
    if kl <= 0.0 || kr <= 0.0 {
        return f64::NAN;
    }
    let Some(slope) = tail_slope(kl, g, psi_seed) else {
        return f64::NAN;
    };
    let s0 = StateVector::new(psi_seed, slope);
    match parity {
        None => {
            let traj = march(pot, energy, g, s0, win.left, win.right, opts.dtau, false);
            if traj.divergent {
                return f64::NAN;
            }
            let s = apply_deltas_at(pot, win.right, traj.last(), true);
            let rate = (kr + 0.5 * g * s.psi * s.psi).max(0.0).sqrt();
            let norm = s.dpsi.hypot(kr.sqrt() * s.psi);
            (s.dpsi + rate * s.psi) / norm
        }
        Some(parity) => {
            let centre = 0.5 * (win.left + win.right);
            let traj = march(pot, energy, g, s0, win.left, centre, opts.dtau, false);
            if traj.divergent {
                return f64::NAN;
            }
            let s = traj.last();
            let kick: f64 = pot.deltas().iter().filter(|d| d.at == centre).map(|d| d.strength).sum();
            let norm = s.dpsi.hypot(kr.sqrt() * s.psi);
            match parity {
                // even: ψ'(c⁺) = −ψ'(c⁻) with ψ'(c⁺) − ψ'(c⁻) = ᾱψ(c)
                Parity::Symmetric => (s.dpsi + 0.5 * kick * s.psi) / norm,
                Parity::Antisymmetric => kr.sqrt() * s.psi / norm,
            }
        }
    }
}

/// Bound-state energies in `e_range` by shooting: the mismatch is sampled on
/// `n_grid` points (in parallel) and each sign change is bisected.
///
/// The normalized mismatch is bounded and continuous wherever the run stays
/// finite, so a sign change is a root unless bisection runs into a
/// divergent (`NaN`) energy, in which case the bracket is dropped. Its value
/// at the root is not tested: across wide supports the growing mode is
/// amplified beyond `1/ε` and the mismatch jumps by `O(1)` within one ulp.
pub fn shooting_eigenvalues<P: PotentialProfile + ?Sized>(
    pot: &P,
    g: f64,
    psi_seed: f64,
    parity: Option<Parity>,
    e_range: (f64, f64),
    n_grid: usize,
    opts: &ShootingOptions,
) -> Vec<f64> {
    let grid = roots::linspace(e_range.0, e_range.1, n_grid);
    let f = |e: f64| shooting_mismatch(pot, e, g, psi_seed, parity, opts);
    let values: Vec<f64> = grid.par_iter().map(|&e| f(e)).collect();
    let refined: Vec<Option<f64>> = roots::sign_changes(&values)
        .par_iter()
        .map(|&i| {
            let r = roots::bisect(f, grid[i], grid[i + 1], values[i], opts.root_tol);
            r.converged.then_some(r.root)
        })
        .collect();
    refined.into_iter().flatten().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParticleNumber {
    pub n: f64,
    /// exponential extrapolation of `∫ψ²` beyond both ends
    pub tail_estimate: f64,
    /// set when a tail does not decay or exceeds `1e-12`
    pub tail_warning: bool,
}

/// Composite Simpson estimate of `∫ψ² dτ` over `range`, for diagnostics.
pub fn particle_number<F: Fn(f64) -> f64>(wave: F, range: (f64, f64), dtau: f64) -> ParticleNumber {
    let (a, b) = range;
    let mut steps = ((b - a) / dtau).ceil().max(2.0) as usize;
    if steps % 2 == 1 {
        steps += 1;
    }
    let h = (b - a) / steps as f64;
    let density = |t: f64| {
        let v = wave(t);
        v * v
    };
    let mut sum = density(a) + density(b);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * density(a + i as f64 * h);
    }
    let n = sum * h / 3.0;

    let probe = 10.0 * h;
    let tail = |edge: f64, inward: f64| -> Option<f64> {
        let (outer, inner) = (density(edge), density(edge + inward * probe));
        if outer == 0.0 {
            return Some(0.0);
        }
        let rate = (inner / outer).ln() / probe;
        (rate > 0.0).then(|| outer / rate)
    };
    let (left, right) = (tail(a, 1.0), tail(b, -1.0));
    let tail_estimate = left.unwrap_or(f64::INFINITY) + right.unwrap_or(f64::INFINITY);
    ParticleNumber {
        n,
        tail_estimate,
        tail_warning: !(tail_estimate < 1e-12),
    }
}
