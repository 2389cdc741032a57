//! The stationary problem as a planar Hamiltonian system.
//!
//! With `χ = φ'/(1 - φ^{2α})` a real stationary profile satisfies
//!
//! ```text
//! χ' = α χ² φ^{2α-1} - a φ^{2α+1} + b φ = -∂H/∂φ
//! φ' = χ (1 - φ^{2α})                   =  ∂H/∂χ
//! H(χ, φ) = ½ χ² (1 - φ^{2α}) + a/(2(α+1)) φ^{2α+2} - b/2 φ²
//! ```
//!
//! The ground state is the homoclinic orbit of `(0, 0)` on the level set `H = 0`. This
//! module also discretizes the operator obtained by linearizing the stationary equation
//! around the ground state,
//!
//! ```text
//! L v = -(v'/(1 - φ^{2α}))' + V v
//! ```
//!
//! whose kernel is spanned by `φ'`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GroundState, ModelParams};
use crate::ode::Rk4;
use crate::tridiag::SymTridiagonal;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub chi: f64,
    pub phi: f64,
}

impl PhasePoint {
    pub fn new(chi: f64, phi: f64) -> Self {
        Self { chi, phi }
    }
}

fn pow(x: f64, n: i32) -> f64 {
    if n == 0 {
        1.0
    } else {
        x.powi(n)
    }
}

pub fn hamiltonian(p: PhasePoint, params: &ModelParams) -> f64 {
    let al = params.alpha() as i32;
    let p2a = pow(p.phi, 2 * al);
    0.5 * p.chi * p.chi * (1.0 - p2a) + params.a() / (2.0 * (al as f64 + 1.0)) * p2a * p.phi * p.phi
        - 0.5 * params.b() * p.phi * p.phi
}

/// `(∂H/∂χ, ∂H/∂φ)`.
pub fn gradient(p: PhasePoint, params: &ModelParams) -> (f64, f64) {
    let al = params.alpha() as i32;
    let p2a1 = pow(p.phi, 2 * al - 1);
    let p2a = p2a1 * p.phi;
    let h_chi = p.chi * (1.0 - p2a);
    let h_phi = -(al as f64) * p.chi * p.chi * p2a1 + params.a() * p2a * p.phi - params.b() * p.phi;
    (h_chi, h_phi)
}

/// Symmetric Hessian `[[H_χχ, H_χφ], [H_χφ, H_φφ]]`.
pub fn hessian(p: PhasePoint, params: &ModelParams) -> [[f64; 2]; 2] {
    let al = params.alpha() as i32;
    let alf = al as f64;
    let p2a = pow(p.phi, 2 * al);
    let hcc = 1.0 - p2a;
    let hcp = -2.0 * alf * p.chi * pow(p.phi, 2 * al - 1);
    let hpp = -alf * (2.0 * alf - 1.0) * p.chi * p.chi * pow(p.phi, 2 * al - 2)
        + params.a() * (2.0 * alf + 1.0) * p2a
        - params.b();
    [[hcc, hcp], [hcp, hpp]]
}

/// Right-hand side `(χ', φ')` of the stationary system.
pub fn flow(p: PhasePoint, params: &ModelParams) -> PhasePoint {
    let (h_chi, h_phi) = gradient(p, params);
    PhasePoint {
        chi: -h_phi,
        phi: h_chi,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    LocalMin,
    LocalMax,
    Saddle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    AGtB,
    AEqB,
    ALtB,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub point: PhasePoint,
    pub kind: CriticalKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointReport {
    pub points: Vec<CriticalPoint>,
    pub regime: Regime,
}

/// Classifies a critical point of `H` from its Hessian. A singular Hessian whose null
/// direction is `χ` and along which `H_χχ` changes sign with `φ` is a saddle.
pub fn classify(p: PhasePoint, params: &ModelParams) -> CriticalKind {
    let [[hcc, hcp], [_, hpp]] = hessian(p, params);
    let det = hcc * hpp - hcp * hcp;
    let scale = (hcc * hcc + 2.0 * hcp * hcp + hpp * hpp).max(f64::MIN_POSITIVE);
    if det.abs() <= 1e-12 * scale {
        // H_χχ = 1 - φ^{2α} vanishes at |φ| = 1 while its φ-derivative does not
        return CriticalKind::Saddle;
    }
    if det < 0.0 {
        CriticalKind::Saddle
    } else if hcc + hpp > 0.0 {
        CriticalKind::LocalMin
    } else {
        CriticalKind::LocalMax
    }
}

/// All critical points of `H` for `a, b > 0`.
pub fn critical_points(params: &ModelParams) -> CriticalPointReport {
    let (a, b) = (params.a(), params.b());
    let alf = params.alpha() as f64;
    let mut pts = vec![PhasePoint::new(0.0, 0.0)];
    let regime = if a > b {
        Regime::AGtB
    } else if a == b {
        Regime::AEqB
    } else {
        Regime::ALtB
    };
    let phi_star = (b / a).powf(1.0 / (2.0 * alf));
    if regime == Regime::AEqB {
        pts.extend([PhasePoint::new(0.0, 1.0), PhasePoint::new(0.0, -1.0)]);
    } else {
        pts.extend([
            PhasePoint::new(0.0, phi_star),
            PhasePoint::new(0.0, -phi_star),
        ]);
    }
    if regime == Regime::AGtB {
        let chi = ((a - b) / alf).sqrt();
        for (c, p) in [(chi, 1.0), (-chi, 1.0), (chi, -1.0), (-chi, -1.0)] {
            pts.push(PhasePoint::new(c, p));
        }
    }
    let points = pts
        .into_iter()
        .map(|p| CriticalPoint {
            point: p,
            kind: classify(p, params),
        })
        .collect();
    CriticalPointReport { points, regime }
}

/// `χ²` on the zero level set `H = 0` as a function of `φ`; negative where the level set
/// has no real branch.
pub fn zero_level_set(phi: f64, params: &ModelParams) -> Result<f64> {
    if !(phi * phi < 1.0) {
        return Err(Error::Domain(format!(
            "zero level set needs phi^2 < 1, got phi = {phi}"
        )));
    }
    let al = params.alpha() as i32;
    let p2a = pow(phi, 2 * al);
    Ok(phi * phi * (params.b() - params.a() / (al as f64 + 1.0) * p2a) / (1.0 - p2a))
}

fn guard(x: f64, p: PhasePoint) -> Result<()> {
    if p.phi * p.phi < 1.0 && p.chi.is_finite() {
        Ok(())
    } else {
        Err(Error::OrbitGuard { x, phi: p.phi })
    }
}

fn flow_into(y: &[f64], out: &mut [f64], params: &ModelParams) -> Result<(), Error> {
    let p = PhasePoint::new(y[0], y[1]);
    if !(p.phi * p.phi < 1.0) {
        return Err(Error::OrbitGuard {
            x: f64::NAN,
            phi: p.phi,
        });
    }
    let d = flow(p, params);
    out[0] = d.chi;
    out[1] = d.phi;
    Ok(())
}

/// Plain RK4 integration of the stationary system from `start` with step `h` (negative
/// steps integrate backwards). Returns the `n_steps + 1` states including `start`.
pub fn integrate_orbit(
    start: PhasePoint,
    params: &ModelParams,
    h: f64,
    n_steps: usize,
) -> Result<Vec<PhasePoint>> {
    guard(0.0, start)?;
    let mut rk = Rk4::<f64>::new(2);
    let mut y = [start.chi, start.phi];
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(start);
    for n in 1..=n_steps {
        let x = n as f64 * h;
        rk.step(&mut y, h, |y, o| flow_into(y, o, params))
            .map_err(|(_, _)| Error::OrbitGuard { x, phi: y[1] })?;
        let p = PhasePoint::new(y[0], y[1]);
        guard(x, p)?;
        out.push(p);
    }
    Ok(out)
}

/// Reconstructs the ground state centred at 0 by integrating from the turning point
/// `(0, φ₀)` in both directions over `[-x_span, x_span]`, `n_steps` steps each way.
///
/// After every step `χ` is reset onto the branch of `H = 0` through the current `φ`,
/// keeping its sign. Returns `(x, point)` pairs in increasing `x`.
pub fn shoot_ground_state(
    params: &ModelParams,
    x_span: f64,
    n_steps: usize,
) -> Result<Vec<(f64, PhasePoint)>> {
    params.require_ground_state()?;
    if !(x_span.is_finite() && x_span > 0.0) || n_steps == 0 {
        return Err(Error::InvalidConfig(format!(
            "shooting needs x_span > 0 and n_steps > 0, got {x_span}, {n_steps}"
        )));
    }
    let start = PhasePoint::new(0.0, params.peak_amplitude());
    let h = x_span / n_steps as f64;
    let mut branches = Vec::with_capacity(2);
    for dir in [1.0, -1.0] {
        let mut rk = Rk4::<f64>::new(2);
        let mut y = [start.chi, start.phi];
        let mut branch = Vec::with_capacity(n_steps);
        for n in 1..=n_steps {
            let x = dir * n as f64 * h;
            rk.step(&mut y, dir * h, |y, o| flow_into(y, o, params))
                .map_err(|_| Error::OrbitGuard { x, phi: y[1] })?;
            guard(x, PhasePoint::new(y[0], y[1]))?;
            if y[1] <= 0.0 {
                return Err(Error::OrbitGuard { x, phi: y[1] });
            }
            let chi2 = zero_level_set(y[1], params)?;
            if chi2 > 0.0 {
                y[0] = chi2.sqrt().copysign(y[0]);
            }
            branch.push((x, PhasePoint::new(y[0], y[1])));
        }
        branches.push(branch);
    }
    let backward = branches.pop().unwrap();
    let forward = branches.pop().unwrap();
    let mut out: Vec<(f64, PhasePoint)> = backward.into_iter().rev().collect();
    out.push((0.0, start));
    out.extend(forward);
    Ok(out)
}

/// Interior nodes `x_min + i·h`, `i = 1..=n`, of `[x_min, x_max]` with `h = (x_max - x_min)/(n+1)`.
/// Functions on it vanish at both end points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalGrid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl IntervalGrid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) || n == 0 {
            return Err(Error::InvalidGrid(format!(
                "interval grid needs x_min < x_max and n > 0, got [{x_min}, {x_max}], {n}"
            )));
        }
        Ok(Self { x_min, x_max, n })
    }

    /// `n` interior nodes of `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.x_min, self.x_max)
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n + 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.x_min + (i + 1) as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Midpoint between node `i - 1` and node `i`, for `i = 0..=n` (end points included as nodes -1, n).
    fn midpoint(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.spacing()
    }
}

/// Potential `V` of the linearized operator at `x`.
pub fn linearized_potential(gs: &GroundState, x: f64) -> f64 {
    let p = gs.params();
    let al = p.alpha() as i32;
    let alf = al as f64;
    let s = gs.sample(x);
    let c = 1.0 / s.gap;
    let p1 = pow(s.phi, 2 * al - 1);
    let p2 = pow(s.phi, 2 * al - 2);
    let beta = 2.0 * alf * s.dphi * p1 * c * c;
    let dc = c * c * 2.0 * alf * p1 * s.dphi;
    let dbeta = 2.0
        * alf
        * (s.d2phi * p1 * c * c
            + (2.0 * alf - 1.0) * s.dphi * s.dphi * p2 * c * c
            + s.dphi * p1 * 2.0 * c * dc);
    let chi = s.dphi * c;
    -dbeta + beta * beta / c + alf * (2.0 * alf - 1.0) * chi * chi * p2
        - p.a() * (2.0 * alf + 1.0) * p1 * s.phi
        + p.b()
}

/// Second-order conservative discretization of `L` with zero boundary values: diagonal and
/// off-diagonal of the symmetric tridiagonal matrix.
pub fn linearized_matrix(gs: &GroundState, grid: &IntervalGrid) -> Result<SymTridiagonal> {
    let n = grid.len();
    let h2 = grid.spacing() * grid.spacing();
    let c_mid: Vec<f64> = (0..=n)
        .map(|i| 1.0 / gs.sample(grid.midpoint(i)).gap)
        .collect();
    let diag = (0..n)
        .map(|i| (c_mid[i] + c_mid[i + 1]) / h2 + linearized_potential(gs, grid.node(i)))
        .collect();
    let off = (1..n).map(|i| -c_mid[i] / h2).collect();
    SymTridiagonal::new(diag, off)
}

/// Applies the discretized `L` to samples `v` on the interior nodes.
pub fn linearized_apply(v: &[f64], gs: &GroundState, grid: &IntervalGrid) -> Result<Vec<f64>> {
    let n = grid.len();
    if v.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: v.len(),
        });
    }
    let h = grid.spacing();
    let at = |i: isize| {
        if i < 0 || i as usize >= n {
            0.0
        } else {
            v[i as usize]
        }
    };
    let flux: Vec<f64> = (0..=n)
        .map(|i| (at(i as isize) - at(i as isize - 1)) / h / gs.sample(grid.midpoint(i)).gap)
        .collect();
    Ok((0..n)
        .map(|i| -(flux[i + 1] - flux[i]) / h + linearized_potential(gs, grid.node(i)) * v[i])
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Nondegeneracy {
    /// Eigenvalue of smallest magnitude.
    pub eigenvalue_near_zero: f64,
    /// `|⟨e, φ'⟩| / ‖φ'‖` for the unit eigenvector `e` of that eigenvalue.
    pub alignment: f64,
    /// Number of eigenvalues in `[-tol_zero, tol_zero]`.
    pub zero_multiplicity: usize,
    pub tol_zero: f64,
}

/// Spectral check that the discretized `L` has a one-dimensional near-kernel spanned by `φ'`.
/// `tol_zero` is `10 h²`.
pub fn nondegeneracy_check(gs: &GroundState, grid: &IntervalGrid) -> Result<Nondegeneracy> {
    let (lo, hi) = grid.bounds();
    let edge = gs.eval(lo).max(gs.eval(hi));
    if !(edge < 1e-6) {
        return Err(Error::Domain(format!(
            "ground state is {edge:e} at the interval edge, need < 1e-6"
        )));
    }
    let t = linearized_matrix(gs, grid)?;
    let h = grid.spacing();
    let tol_zero = 10.0 * h * h;
    let lambda = t.smallest_magnitude()?;
    let e = t.eigenvector(lambda)?;
    let dphi: Vec<f64> = grid.nodes().iter().map(|&x| gs.deriv(x)).collect();
    let norm = dphi.iter().map(|d| d * d).sum::<f64>().sqrt();
    let alignment = e.iter().zip(&dphi).map(|(a, b)| a * b).sum::<f64>().abs() / norm;
    Ok(Nondegeneracy {
        eigenvalue_near_zero: lambda,
        alignment,
        zero_multiplicity: t.count_in(-tol_zero, tol_zero),
        tol_zero,
    })
}

/// Integrates the orbit together with the linearized system
///
/// ```text
/// u' = 2α χ φ^{2α-1} u + (α(2α-1) χ² φ^{2α-2} - a(2α+1) φ^{2α} + b) v
/// v' = (1 - φ^{2α}) u - 2α χ φ^{2α-1} v
/// ```
///
/// from `(0, φ₀, u0, v0)` at the centre of `gs` over `[-span, span]` (`n_steps` each way) and
/// returns `(x, u φ' - v χ')` in increasing `x`.
pub fn wronskian_profile(
    gs: &GroundState,
    span: f64,
    n_steps: usize,
    initial: (f64, f64),
) -> Result<Vec<(f64, f64)>> {
    if !(span.is_finite() && span > 0.0) || n_steps == 0 {
        return Err(Error::InvalidConfig(format!(
            "wronskian needs span > 0 and n_steps > 0, got {span}, {n_steps}"
        )));
    }
    let params = gs.params();
    let al = params.alpha() as i32;
    let alf = al as f64;
    let (a, b) = (params.a(), params.b());
    let rhs = |y: &[f64], out: &mut [f64]| -> Result<(), Error> {
        let (chi, phi, u, v) = (y[0], y[1], y[2], y[3]);
        if !(phi * phi < 1.0) {
            return Err(Error::OrbitGuard { x: f64::NAN, phi });
        }
        let p1 = pow(phi, 2 * al - 1);
        let p2a = p1 * phi;
        let d = flow(PhasePoint::new(chi, phi), &params);
        out[0] = d.chi;
        out[1] = d.phi;
        out[2] = 2.0 * alf * chi * p1 * u
            + (alf * (2.0 * alf - 1.0) * chi * chi * pow(phi, 2 * al - 2)
                - a * (2.0 * alf + 1.0) * p2a
                + b)
                * v;
        out[3] = (1.0 - p2a) * u - 2.0 * alf * chi * p1 * v;
        Ok(())
    };
    let w_of = |y: &[f64]| {
        let d = flow(PhasePoint::new(y[0], y[1]), &params);
        y[2] * d.phi - y[3] * d.chi
    };
    let x0 = gs.center();
    let y0 = [0.0, params.peak_amplitude(), initial.0, initial.1];
    let h = span / n_steps as f64;
    let mut sides = Vec::with_capacity(2);
    for dir in [1.0, -1.0] {
        let mut rk = Rk4::<f64>::new(4);
        let mut y = y0;
        let mut side = Vec::with_capacity(n_steps);
        for n in 1..=n_steps {
            let x = x0 + dir * n as f64 * h;
            rk.step(&mut y, dir * h, rhs)
                .map_err(|_| Error::OrbitGuard { x, phi: y[1] })?;
            guard(x, PhasePoint::new(y[0], y[1]))?;
            side.push((x, w_of(&y)));
        }
        sides.push(side);
    }
    let backward = sides.pop().unwrap();
    let forward = sides.pop().unwrap();
    let mut out: Vec<(f64, f64)> = backward.into_iter().rev().collect();
    out.push((x0, w_of(&y0)));
    out.extend(forward);
    Ok(out)
}

/// Variation `max W - min W` of the Wronskian along [`wronskian_profile`].
pub fn wronskian_constancy(
    gs: &GroundState,
    span: f64,
    n_steps: usize,
    initial: (f64, f64),
) -> Result<f64> {
    let w = wronskian_profile(gs, span, n_steps, initial)?;
    let (lo, hi) = w
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v)| {
            (lo.min(v), hi.max(v))
        });
    Ok(hi - lo)
}
