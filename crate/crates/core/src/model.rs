//! Potentials, spinor states and the quasi-time picture of the stationary GP
//! equation
//!
//! ```text
//! −ψ'' + V(τ) ψ + g ψ³ = E ψ
//! ```
//!
//! read as a mechanical system in the quasi-time `τ` (rescaled position). All
//! quantities are in rescaled units where `√(2m)/ħ = 1`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quad;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("potential JSON error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("radicand 2(U − Φ) is not positive at r = {r}: no motion between the given amplitudes")]
    InvalidTurningPoint { r: f64 },
}

/// Constant level `v` on `[from, to)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub from: f64,
    pub to: f64,
    pub v: f64,
}

/// Point defect `strength · δ(τ − at)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Delta {
    pub at: f64,
    pub strength: f64,
}

/// Uniform samples `values[i] = V(tau0 + i·dtau)`. Each sample holds on the
/// cell of width `dtau` centred on its node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampledGrid {
    pub tau0: f64,
    pub dtau: f64,
    pub values: Vec<f64>,
}

impl SampledGrid {
    fn lower(&self) -> f64 {
        self.tau0 - 0.5 * self.dtau
    }

    fn upper(&self) -> f64 {
        self.tau0 + (self.values.len() as f64 - 0.5) * self.dtau
    }

    fn value(&self, tau: f64) -> Option<f64> {
        if tau < self.lower() || tau >= self.upper() {
            return None;
        }
        let idx = ((tau - self.tau0) / self.dtau).round();
        let idx = (idx.max(0.0) as usize).min(self.values.len() - 1);
        Some(self.values[idx])
    }
}

/// Anything the propagators and the oracle integrator can march through.
///
/// `value` is the regular part of the potential; point defects come from
/// `deltas`; `breakpoints` lists the positions where `value` jumps, so that
/// piecewise-constant pieces can be propagated exactly.
pub trait PotentialProfile: Sync {
    fn value(&self, tau: f64) -> f64;
    fn deltas(&self) -> &[Delta];
    fn breakpoints(&self) -> &[f64];
    /// Closed interval outside which the potential is flat.
    fn support(&self) -> Option<(f64, f64)>;
}

/// Piecewise-constant segments, point defects and an optional sampled grid.
/// Contributions add; the potential is zero outside all of them.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Potential {
    segments: Vec<Segment>,
    deltas: Vec<Delta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sampled: Option<SampledGrid>,
    #[serde(skip)]
    breaks: Vec<f64>,
    #[serde(skip)]
    support: Option<(f64, f64)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialDoc {
    segments: Option<Vec<Segment>>,
    deltas: Option<Vec<Delta>>,
    sampled: Option<SampledGrid>,
}

impl Potential {
    pub fn new(
        mut segments: Vec<Segment>,
        mut deltas: Vec<Delta>,
        sampled: Option<SampledGrid>,
    ) -> Result<Self, ModelError> {
        let bad = |msg: String| Err(ModelError::InvalidPotential(msg));
        for s in &segments {
            if !(s.from.is_finite() && s.to.is_finite() && s.v.is_finite()) {
                return bad(format!("segment {s:?} has non-finite fields"));
            }
            if s.from >= s.to {
                return bad(format!("segment [{}, {}) is empty or reversed", s.from, s.to));
            }
        }
        segments.sort_by(|a, b| a.from.total_cmp(&b.from));
        for pair in segments.windows(2) {
            if pair[0].to > pair[1].from {
                return bad(format!(
                    "segments [{}, {}) and [{}, {}) overlap",
                    pair[0].from, pair[0].to, pair[1].from, pair[1].to
                ));
            }
        }
        if let Some(grid) = &sampled {
            if !(grid.dtau > 0.0 && grid.dtau.is_finite() && grid.tau0.is_finite()) {
                return bad(format!("sampled grid needs finite tau0 and dtau > 0, got dtau = {}", grid.dtau));
            }
            if grid.values.len() < 2 {
                return bad("sampled grid needs at least 2 values".into());
            }
            if grid.values.iter().any(|v| !v.is_finite()) {
                return bad("sampled grid has non-finite values".into());
            }
        }
        for d in &deltas {
            if !(d.at.is_finite() && d.strength.is_finite()) {
                return bad(format!("delta {d:?} has non-finite fields"));
            }
        }
        deltas.sort_by(|a, b| a.at.total_cmp(&b.at));

        let mut extent: Option<(f64, f64)> = None;
        let mut widen = |lo: f64, hi: f64| {
            extent = Some(match extent {
                Some((a, b)) => (a.min(lo), b.max(hi)),
                None => (lo, hi),
            });
        };
        for s in &segments {
            widen(s.from, s.to);
        }
        if let Some(grid) = &sampled {
            widen(grid.lower(), grid.upper());
        }
        if let Some((lo, hi)) = extent {
            if let Some(d) = deltas.iter().find(|d| d.at < lo || d.at > hi) {
                return bad(format!("delta at {} lies outside the support [{lo}, {hi}]", d.at));
            }
        }
        let support = match (extent, deltas.first(), deltas.last()) {
            (Some(e), _, _) => Some(e),
            (None, Some(first), Some(last)) => Some((first.at, last.at)),
            _ => None,
        };

        let mut breaks: Vec<f64> = segments.iter().flat_map(|s| [s.from, s.to]).collect();
        if let Some(grid) = &sampled {
            breaks.push(grid.lower());
            breaks.push(grid.upper());
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();

        Ok(Self {
            segments,
            deltas,
            sampled,
            breaks,
            support,
        })
    }

    /// Parses the JSON potential document
    /// `{"segments":[{"from","to","v"}], "deltas":[{"at","strength"}],
    /// "sampled":{"tau0","dtau","values"}}`; at least one key is required.
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let doc: PotentialDoc = serde_json::from_str(text).map_err(|e| ModelError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if doc.segments.is_none() && doc.deltas.is_none() && doc.sampled.is_none() {
            return Err(ModelError::InvalidPotential(
                "document needs at least one of segments, deltas, sampled".into(),
            ));
        }
        Self::new(
            doc.segments.unwrap_or_default(),
            doc.deltas.unwrap_or_default(),
            doc.sampled,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("potential serializes")
    }

    /// Square well of depth `depth` on `[−half_width, half_width]`.
    pub fn square_well(depth: f64, half_width: f64) -> Result<Self, ModelError> {
        Self::new(
            vec![Segment {
                from: -half_width,
                to: half_width,
                v: -depth,
            }],
            Vec::new(),
            None,
        )
    }

    pub fn single_delta(at: f64, strength: f64) -> Result<Self, ModelError> {
        Self::new(Vec::new(), vec![Delta { at, strength }], None)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn sampled(&self) -> Option<&SampledGrid> {
        self.sampled.as_ref()
    }
}

impl PotentialProfile for Potential {
    fn value(&self, tau: f64) -> f64 {
        let idx = self.segments.partition_point(|s| s.from <= tau);
        let seg = match idx.checked_sub(1).map(|i| &self.segments[i]) {
            Some(s) if tau < s.to => s.v,
            _ => 0.0,
        };
        seg + self.sampled.as_ref().and_then(|g| g.value(tau)).unwrap_or(0.0)
    }

    fn deltas(&self) -> &[Delta] {
        &self.deltas
    }

    fn breakpoints(&self) -> &[f64] {
        &self.breaks
    }

    fn support(&self) -> Option<(f64, f64)> {
        self.support
    }
}

/// Smooth potential given by a closure, with an optional declared support.
pub struct SmoothPotential<F> {
    profile: F,
    support: Option<(f64, f64)>,
}

impl<F: Fn(f64) -> f64 + Sync> SmoothPotential<F> {
    pub fn new(profile: F, support: Option<(f64, f64)>) -> Self {
        Self { profile, support }
    }
}

impl<F: Fn(f64) -> f64 + Sync> PotentialProfile for SmoothPotential<F> {
    fn value(&self, tau: f64) -> f64 {
        (self.profile)(tau)
    }

    fn deltas(&self) -> &[Delta] {
        &[]
    }

    fn breakpoints(&self) -> &[f64] {
        &[]
    }

    fn support(&self) -> Option<(f64, f64)> {
        self.support
    }
}

/// The spinor `(ψ, ψ')` advanced in quasi-time.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StateVector {
    pub psi: f64,
    pub dpsi: f64,
}

impl StateVector {
    pub const fn new(psi: f64, dpsi: f64) -> Self {
        Self { psi, dpsi }
    }

    pub fn is_finite(&self) -> bool {
        self.psi.is_finite() && self.dpsi.is_finite()
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self::new(self.psi * factor, self.dpsi * factor)
    }
}

/// Energy and nonlinear coupling of a stationary problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiParams {
    pub energy: f64,
    pub coupling: f64,
    /// `√(2m)/ħ`; position is `τ = scale · x`. Internal code uses 1.
    pub scale: f64,
}

impl QuasiParams {
    pub fn new(energy: f64, coupling: f64) -> Self {
        Self {
            energy,
            coupling,
            scale: 1.0,
        }
    }

    pub fn tau_from_x(&self, x: f64) -> f64 {
        self.scale * x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

/// Effective potential `Φ(ψ) = ½(E − V)ψ² − (g/4)ψ⁴`.
#[inline]
pub fn effective_potential(psi: f64, v_local: f64, params: &QuasiParams) -> f64 {
    let psi2 = psi * psi;
    0.5 * (params.energy - v_local) * psi2 - 0.25 * params.coupling * psi2 * psi2
}

/// `U = ½ψ'² + Φ(ψ)`, conserved on stretches of constant `V`.
pub fn quasi_energy(state: StateVector, v_local: f64, params: &QuasiParams) -> f64 {
    0.5 * state.dpsi * state.dpsi + effective_potential(state.psi, v_local, params)
}

/// Matching defect across `strength · δ(τ)`: zero when `ψ` is continuous and
/// `ψ'` jumps by `strength · ψ`.
pub fn delta_jump_residual(left: StateVector, right: StateVector, strength: f64) -> (f64, f64) {
    (
        right.psi - left.psi,
        right.dpsi - left.dpsi - strength * left.psi,
    )
}

/// Slope of the decaying exterior tail at amplitude `psi`, in the direction
/// away from the infinity it decays to: `ψ √(κ² + gψ²/2)`. This is the
/// zero-quasi-energy branch for a flat exterior with `κ² = V − E`.
///
/// Returns `None` when `κ² + gψ²/2 < 0` (amplitude above the soliton peak).
pub fn tail_slope(kappa_sq: f64, coupling: f64, psi: f64) -> Option<f64> {
    let rad = kappa_sq + 0.5 * coupling * psi * psi;
    (rad >= 0.0).then(|| psi * rad.sqrt())
}

/// Where a bound-state computation starts and stops: the edges of the
/// potential's support (clipped to `±tau_max`) and the flat levels outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExteriorWindow {
    pub left: f64,
    pub right: f64,
    pub v_left: f64,
    pub v_right: f64,
}

impl ExteriorWindow {
    /// Falls back to `[−tau_max, tau_max]` for potentials without support.
    pub fn new<P: PotentialProfile + ?Sized>(pot: &P, tau_max: f64) -> Self {
        let (left, right) = match pot.support() {
            Some((l, r)) => (l.max(-tau_max), r.min(tau_max)),
            None => (-tau_max, tau_max),
        };
        let nudge = 1e-9 * (1.0 + left.abs().max(right.abs()));
        Self {
            left,
            right,
            v_left: pot.value(left - nudge),
            v_right: pot.value(right + nudge),
        }
    }

    /// Decay rates `κ² = V − E` on the two sides.
    pub fn kappa_sq(&self, energy: f64) -> (f64, f64) {
        (self.v_left - energy, self.v_right - energy)
    }
}

/// Quasi-time needed to move between two amplitudes at fixed `U` and `V`:
///
/// ```text
/// τ = ∫ dr / √(2(U − Φ(r)))
/// ```
///
/// The lapse is non-negative regardless of the order of `r_from`, `r_to`.
/// Endpoints may be turning points: each half of the interval is mapped by
/// `r = r_end ∓ s²`, which removes the inverse-square-root singularity.
pub fn quadrature_lapse(
    r_from: f64,
    r_to: f64,
    quasi: f64,
    params: &QuasiParams,
    v_local: f64,
) -> Result<f64, ModelError> {
    if r_from == r_to {
        return Ok(0.0);
    }
    let (lo, hi) = if r_from < r_to { (r_from, r_to) } else { (r_to, r_from) };
    let mid = 0.5 * (lo + hi);
    let radicand = |r: f64| 2.0 * (quasi - effective_potential(r, v_local, params));
    let mut failure: Option<f64> = None;

    let mut half = |anchor: f64, dir: f64| {
        let span = (mid - anchor).abs().sqrt();
        let (value, _) = quad::integrate(
            |s| {
                let r = anchor + dir * s * s;
                let rad = radicand(r);
                if rad <= 0.0 {
                    failure.get_or_insert(r);
                    return 0.0;
                }
                2.0 * s / rad.sqrt()
            },
            0.0,
            span,
            1e-14,
            1e-13,
            40,
        );
        value
    };
    let total = half(lo, 1.0) + half(hi, -1.0);
    match failure {
        Some(r) => Err(ModelError::InvalidTurningPoint { r }),
        None => Ok(total),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriticalKind {
    OriginBright,
    DarkPairPlus,
    DarkPairMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
}

/// Equilibrium of `X' = P`, `P' = (V − E)X + gX³` at frozen `V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub x: f64,
    pub p: f64,
    pub kind: CriticalKind,
    pub stability: Stability,
}

/// Linearised classification: the Jacobian `[[0, 1], [c, 0]]` with
/// `c = V − E + 3gX²` is a centre for `c < 0` and a saddle for `c > 0`.
fn classify(curvature: f64) -> Stability {
    if curvature < 0.0 {
        Stability::Stable
    } else {
        Stability::Unstable
    }
}

/// Equilibria of the phase-space flow. The origin is always present; the pair
/// `±√((E − V)/g)` appears when `g ≠ 0` and that ratio is positive.
pub fn critical_points(params: &QuasiParams, v_local: f64) -> Vec<CriticalPoint> {
    let detuning = v_local - params.energy;
    let mut points = vec![CriticalPoint {
        x: 0.0,
        p: 0.0,
        kind: CriticalKind::OriginBright,
        stability: classify(detuning),
    }];
    let g = params.coupling;
    if g != 0.0 {
        let ratio = -detuning / g;
        if ratio > 0.0 {
            let x = ratio.sqrt();
            // V − E + 3g·(E − V)/g = 2(E − V)
            let stability = classify(-2.0 * detuning);
            points.push(CriticalPoint {
                x,
                p: 0.0,
                kind: CriticalKind::DarkPairPlus,
                stability,
            });
            points.push(CriticalPoint {
                x: -x,
                p: 0.0,
                kind: CriticalKind::DarkPairMinus,
                stability,
            });
        }
    }
    points
}
