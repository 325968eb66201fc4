//! Two-field poromechanics phase coexistence.
//!
//! The first-gradient energy density couples a fluid-density deviation m and
//! a solid strain deviation eps under an external pressure p:
//!
//! ```text
//!   Psi = alpha/12 m^2 (3 m^2 - 8 b eps m + 6 b^2 eps^2)
//!       + p eps + eps^2/2 + a (m - b eps)^2 / 2
//! ```
//!
//! Its local minima are the homogeneous phases. Above a critical pressure a
//! second, fluid-rich phase appears; at the coexistence pressure both phases
//! have equal energy and kink profiles connecting them exist. When the
//! second-gradient coefficients satisfy k1 k3 = k2^2 the coupled problem
//! rotates onto a single effective field along the constraint curve, which
//! this module exposes as a [`DoubleWellPotential`] for the one-field theory.

use crate::error::{Error, Result};
use crate::kinkcore;
use crate::numerics::diff;
use crate::numerics::roots::brent;
use crate::potential::DoubleWellPotential;
use std::sync::Arc;

/// Relative tolerance for pressure searches.
pub const P_TOL: f64 = 1e-10;
/// Relative tolerance on k1 k3 - k2^2 for the degenerate reduction.
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Tolerance on |grad Psi| for accepting a critical point.
const PHASE_GRAD_TOL: f64 = 1e-11;
/// Critical points closer than this in the (m, eps) plane are merged.
const PHASE_DEDUP_TOL: f64 = 1e-6;

/// Material constants, external pressure, and second-gradient coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoroParams {
    pub alpha: f64,
    /// Fluid/solid rigidity ratio (the energy's `a`).
    pub a_ratio: f64,
    /// Fluid–solid coupling (the energy's `b`).
    pub b_couple: f64,
    /// External pressure.
    pub p: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

impl PoroParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !(self.a_ratio > 0.0) || !(self.b_couple > 0.0) {
            return Err(Error::InvalidParams(format!(
                "alpha, a_ratio, b_couple must be positive, got {}, {}, {}",
                self.alpha, self.a_ratio, self.b_couple
            )));
        }
        if self.p < 0.0 {
            return Err(Error::InvalidParams(format!("pressure must be >= 0, got {}", self.p)));
        }
        if !(self.k1 > 0.0) || !(self.k3 > 0.0) {
            return Err(Error::InvalidParams(format!(
                "k1 and k3 must be positive, got {} and {}",
                self.k1, self.k3
            )));
        }
        let defect = self.k1 * self.k3 - self.k2 * self.k2;
        if defect < -DEGENERACY_TOL * (self.k1 * self.k3).abs() {
            return Err(Error::ConvexityViolation { defect });
        }
        Ok(())
    }

    pub fn with_pressure(&self, p: f64) -> Self {
        PoroParams { p, ..*self }
    }

    pub fn with_gradient_coefficients(&self, k1: f64, k2: f64, k3: f64) -> Self {
        PoroParams { k1, k2, k3, ..*self }
    }

    /// First-gradient energy density Psi(m, eps) at this pressure.
    pub fn psi(&self, m: f64, eps: f64) -> f64 {
        let b = self.b_couple;
        let me = m - b * eps;
        self.alpha / 12.0 * m * m * (3.0 * m * m - 8.0 * b * eps * m + 6.0 * b * b * eps * eps)
            + self.p * eps
            + 0.5 * eps * eps
            + 0.5 * self.a_ratio * me * me
    }

    /// (dPsi/deps, dPsi/dm).
    pub fn grad_psi(&self, m: f64, eps: f64) -> (f64, f64) {
        let (al, a, b) = (self.alpha, self.a_ratio, self.b_couple);
        let me = m - b * eps;
        let ge = -(2.0 / 3.0) * al * b * m * m * m + al * b * b * m * m * eps + self.p + eps
            - a * b * me;
        let gm = al * m * me * me + a * me;
        (ge, gm)
    }

    /// (d2Psi/deps2, d2Psi/deps dm, d2Psi/dm2).
    pub fn hess_psi(&self, m: f64, eps: f64) -> (f64, f64, f64) {
        let (al, a, b) = (self.alpha, self.a_ratio, self.b_couple);
        let hee = al * b * b * m * m + 1.0 + a * b * b;
        let hem = -2.0 * al * b * m * m + 2.0 * al * b * b * m * eps - a * b;
        let hmm = al * (3.0 * m * m - 4.0 * b * eps * m + b * b * eps * eps) + a;
        (hee, hem, hmm)
    }

    fn degeneracy_defect(&self) -> f64 {
        self.k1 * self.k3 - self.k2 * self.k2
    }
}

/// Convenience for Psi as a free function.
pub fn psi(params: &PoroParams, m: f64, eps: f64) -> f64 {
    params.psi(m, eps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKind {
    Standard,
    FluidRich,
}

/// A local minimum of Psi: a homogeneous phase.
#[derive(Debug, Clone, Copy)]
pub struct PhasePoint {
    pub m: f64,
    pub eps: f64,
    pub psi: f64,
    pub kind: PhaseKind,
}

/// 2D Newton on grad Psi = 0 from one start; None if it wanders or stalls.
fn newton_critical(params: &PoroParams, m0: f64, eps0: f64) -> Option<(f64, f64)> {
    let (mut m, mut eps) = (m0, eps0);
    for _ in 0..80 {
        let (ge, gm) = params.grad_psi(m, eps);
        let (hee, hem, hmm) = params.hess_psi(m, eps);
        let det = hee * hmm - hem * hem;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let de = (ge * hmm - gm * hem) / det;
        let dm = (gm * hee - ge * hem) / det;
        eps -= de;
        m -= dm;
        if !m.is_finite() || !eps.is_finite() || m.abs() > 1e6 || eps.abs() > 1e6 {
            return None;
        }
        if de.abs() + dm.abs() < 1e-15 * (1.0 + m.abs() + eps.abs()) {
            break;
        }
    }
    let (ge, gm) = params.grad_psi(m, eps);
    if ge.abs().max(gm.abs()) < PHASE_GRAD_TOL {
        Some((m, eps))
    } else {
        None
    }
}

/// All local minima of Psi found from a deterministic 21x21 multistart over
/// m in [-0.5, 3b], eps in [-3, 1], Hessian-classified, deduplicated, sorted
/// by m. Two minima are labeled standard (smaller m) and fluid-rich.
pub fn find_phases(params: &PoroParams) -> Result<Vec<PhasePoint>> {
    let b = params.b_couple;
    let mut minima: Vec<(f64, f64)> = Vec::new();
    for i in 0..21 {
        for j in 0..21 {
            let m0 = -0.5 + (3.0 * b + 0.5) * (i as f64) / 20.0;
            let e0 = -3.0 + 4.0 * (j as f64) / 20.0;
            let Some((m, eps)) = newton_critical(params, m0, e0) else {
                continue;
            };
            let (hee, hem, hmm) = params.hess_psi(m, eps);
            let det = hee * hmm - hem * hem;
            if !(det > 0.0 && hmm > 0.0) {
                continue; // saddle or maximum
            }
            if !minima
                .iter()
                .any(|&(mm, ee)| (mm - m).abs() + (ee - eps).abs() < PHASE_DEDUP_TOL)
            {
                minima.push((m, eps));
            }
        }
    }
    if minima.is_empty() {
        return Err(Error::NoPhaseFound { p: params.p });
    }
    minima.sort_by(|a, b| a.0.total_cmp(&b.0));
    let last = minima.len() - 1;
    Ok(minima
        .iter()
        .enumerate()
        .map(|(i, &(m, eps))| PhasePoint {
            m,
            eps,
            psi: params.psi(m, eps),
            kind: if i == last && last > 0 { PhaseKind::FluidRich } else { PhaseKind::Standard },
        })
        .collect())
}

fn two_minima_exist(params: &PoroParams, p: f64) -> bool {
    matches!(find_phases(&params.with_pressure(p)), Ok(ph) if ph.len() >= 2)
}

/// Critical pressure: the infimum of pressures at which the fluid-rich
/// minimum exists. Bisection on the two-minima indicator; `params.p` is
/// ignored.
pub fn find_critical_pressure(params: &PoroParams) -> Result<f64> {
    params.validate()?;
    let mut lo = 0.0;
    let mut hi = 0.5;
    let mut attempts = 0;
    while !two_minima_exist(params, hi) {
        lo = hi;
        hi *= 2.0;
        attempts += 1;
        if attempts > 60 {
            return Err(Error::BracketFailure { what: "critical pressure", attempts });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if two_minima_exist(params, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= P_TOL * hi.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Coexistence pressure: the root of Psi(standard) - Psi(fluid-rich) for
/// p above the critical pressure. `params.p` is ignored.
pub fn find_coexistence_pressure(params: &PoroParams) -> Result<f64> {
    params.validate()?;
    let p_c = find_critical_pressure(params)?;

    let delta = |p: f64| -> Result<f64> {
        let phases = find_phases(&params.with_pressure(p))?;
        if phases.len() < 2 {
            return Err(Error::NoPhaseFound { p });
        }
        Ok(phases[0].psi - phases[phases.len() - 1].psi)
    };

    // just above p_c the fluid-rich phase is shallow: delta < 0 there
    let mut lo = p_c * (1.0 + 1e-6) + 1e-12;
    let mut f_lo = delta(lo)?;
    if f_lo > 0.0 {
        // the crossing could sit arbitrarily close to p_c; tighten downward
        let mut attempts = 0;
        loop {
            let cand = p_c + (lo - p_c) * 0.1;
            match delta(cand) {
                Ok(v) if v <= 0.0 => {
                    lo = cand;
                    f_lo = v;
                    break;
                }
                Ok(_) => {
                    lo = cand;
                    attempts += 1;
                }
                Err(_) => break,
            }
            if attempts > 40 {
                return Err(Error::BracketFailure { what: "coexistence (lower)", attempts });
            }
        }
    }
    let mut hi = lo.max(p_c) * 1.5;
    let mut f_hi = delta(hi)?;
    let mut attempts = 0;
    while f_hi < 0.0 {
        hi *= 1.5;
        f_hi = delta(hi)?;
        attempts += 1;
        if attempts > 60 {
            return Err(Error::BracketFailure { what: "coexistence (upper)", attempts });
        }
    }

    let mut inner_err = None;
    let g = |p: f64| match delta(p) {
        Ok(v) => v,
        Err(e) => {
            inner_err = Some(e);
            f64::NAN
        }
    };
    let res = brent(g, lo, hi, f_lo, f_hi, P_TOL * hi, 0.0, 200);
    if let Some(e) = inner_err {
        return Err(e);
    }
    Ok(res?.x)
}

/// The effective one-field potential of the degenerate case, exposed through
/// the constraint curve dU/deta = 0.
///
/// `u_eff(xi)` re-solves the 1D constraint by Newton seeded from a tabulated
/// branch walk, so evaluations are machine-accurate anywhere on the branch
/// rather than interpolation-limited.
#[derive(Debug, Clone)]
pub struct ReducedPotential {
    pub lambda: f64,
    /// k3 (1 + lambda^2): the effective k^2 multiplier of the reduced problem.
    pub mass_coeff: f64,
    pub xi_s: f64,
    pub xi_f: f64,
    pub eta_s: f64,
    pub eta_f: f64,
    /// Psi at the phases (equal at coexistence); subtracted so u_eff has
    /// zero minima.
    pub psi_offset: f64,
    branch: Vec<(f64, f64)>,
    params: PoroParams,
}

impl ReducedPotential {
    /// Rotate (m, eps) to (xi, eta).
    pub fn rotate(&self, m: f64, eps: f64) -> (f64, f64) {
        rotate(self.lambda, m, eps)
    }

    /// Rotate back from (xi, eta) to (m, eps).
    pub fn unrotate(&self, xi: f64, eta: f64) -> (f64, f64) {
        unrotate(self.lambda, xi, eta)
    }

    fn du_deta(&self, xi: f64, eta: f64) -> (f64, f64) {
        constraint_g_h(&self.params, self.lambda, xi, eta)
    }

    /// Branch value eta(xi), Newton from the nearest tabulated seed.
    pub fn eta_at(&self, xi: f64) -> f64 {
        let seed = self.seed_for(xi);
        let mut eta = seed;
        for _ in 0..60 {
            let (g, h) = self.du_deta(xi, eta);
            let step = g / h;
            eta -= step;
            if step.abs() < 1e-15 * (1.0 + eta.abs()) {
                break;
            }
        }
        eta
    }

    fn seed_for(&self, xi: f64) -> f64 {
        let (first, last) = (self.branch[0].0, self.branch[self.branch.len() - 1].0);
        if xi <= first {
            return self.branch[0].1;
        }
        if xi >= last {
            return self.branch[self.branch.len() - 1].1;
        }
        let t = (xi - first) / (last - first) * (self.branch.len() - 1) as f64;
        let i = (t as usize).min(self.branch.len() - 2);
        // linear interpolation between tabulated neighbors
        let (x0, y0) = self.branch[i];
        let (x1, y1) = self.branch[i + 1];
        if x1 == x0 {
            y0
        } else {
            y0 + (y1 - y0) * (xi - x0) / (x1 - x0)
        }
    }

    /// Effective one-field energy U(xi, eta(xi)) - Psi_offset.
    pub fn u_eff(&self, xi: f64) -> f64 {
        let eta = self.eta_at(xi);
        let (m, eps) = self.unrotate(xi, eta);
        self.params.psi(m, eps) - self.psi_offset
    }

    /// Effective gradient coefficient of Eq. k_eff^2 xi'' = u_eff'(xi).
    pub fn effective_k(&self) -> f64 {
        self.mass_coeff.sqrt()
    }

    /// Package as a double-well potential on [min(xi_s, xi_f), max(...)].
    pub fn to_double_well(&self) -> Result<DoubleWellPotential> {
        let this = Arc::new(self.clone());
        let span = (self.xi_f - self.xi_s).abs();
        let v = {
            let p = this.clone();
            move |xi: f64| p.u_eff(xi)
        };
        // step 1e-3 * span balances the stencil's rounding floor (u_eff is
        // itself computed, noise ~1e-17) against truncation
        let h = 1e-3 * span;
        let d2 = {
            let p = this.clone();
            move |xi: f64| diff::d2_five_point_richardson(&|x| p.u_eff(x), xi, h)
        };
        let lo = self.xi_s.min(self.xi_f);
        let hi = self.xi_s.max(self.xi_f);
        DoubleWellPotential::build(Arc::new(v), None, Some(Arc::new(d2)), lo, hi)?
            .with_fd_step(h)
    }
}

fn rotate(lambda: f64, m: f64, eps: f64) -> (f64, f64) {
    let s = (1.0 + lambda * lambda).sqrt();
    ((m + lambda * eps) / s, (-lambda * m + eps) / s)
}

fn unrotate(lambda: f64, xi: f64, eta: f64) -> (f64, f64) {
    let s = (1.0 + lambda * lambda).sqrt();
    ((xi - lambda * eta) / s, (lambda * xi + eta) / s)
}

/// (dU/deta, d2U/deta2) at (xi, eta) through the rotation chain rule.
fn constraint_g_h(params: &PoroParams, lambda: f64, xi: f64, eta: f64) -> (f64, f64) {
    let s2 = 1.0 + lambda * lambda;
    let s = s2.sqrt();
    let (m, eps) = unrotate(lambda, xi, eta);
    let (ge, gm) = params.grad_psi(m, eps);
    let (hee, hem, hmm) = params.hess_psi(m, eps);
    let g = (-lambda * gm + ge) / s;
    let h = (lambda * lambda * hmm - 2.0 * lambda * hem + hee) / s2;
    (g, h)
}

/// Reduce the degenerate two-field problem (k1 k3 = k2^2, k2 != 0) to the
/// effective one-field potential along the constraint branch through both
/// phases. Requires `params.p` at the coexistence pressure so the reduced
/// minima are degenerate zeros.
pub fn reduce_degenerate(params: &PoroParams) -> Result<ReducedPotential> {
    params.validate()?;
    let defect = params.degeneracy_defect();
    let scale = (params.k1 * params.k3).abs().max(f64::MIN_POSITIVE);
    if params.k2 == 0.0 || defect.abs() > DEGENERACY_TOL * scale {
        return Err(Error::NotDegenerate { defect, relative: defect / scale });
    }
    let lambda = params.k1 / params.k2;

    let phases = find_phases(params)?;
    if phases.len() < 2 {
        return Err(Error::NoPhaseFound { p: params.p });
    }
    let standard = phases[0];
    let fluid = phases[phases.len() - 1];
    let psi_scale = standard.psi.abs().max(fluid.psi.abs()).max(1e-3);
    if (standard.psi - fluid.psi).abs() > 1e-6 * psi_scale {
        return Err(Error::InvalidParams(format!(
            "phases are not energy-degenerate (Psi_s - Psi_f = {:e}); set p to the \
             coexistence pressure first",
            standard.psi - fluid.psi
        )));
    }

    let (xi_s, eta_s) = rotate(lambda, standard.m, standard.eps);
    let (xi_f, eta_f) = rotate(lambda, fluid.m, fluid.eps);

    let mut reduced = ReducedPotential {
        lambda,
        mass_coeff: params.k3 * (1.0 + lambda * lambda),
        xi_s,
        xi_f,
        eta_s,
        eta_f,
        psi_offset: standard.psi,
        branch: vec![(xi_s, eta_s)],
        params: *params,
    };

    // walk the constraint branch from xi_s to xi_f with 10% extension on
    // both sides, seeding each Newton solve with the previous eta
    let n_steps = 2000usize;
    let step = (xi_f - xi_s) / n_steps as f64;
    let ext = (n_steps as f64 * 0.1).ceil() as i64;
    let eta_span_guess = (eta_f - eta_s).abs().max(1e-3);

    let mut branch: Vec<(f64, f64)> = Vec::with_capacity(n_steps + 2 * ext as usize + 1);
    let mut eta = eta_s;
    for i in -ext..=(n_steps as i64 + ext) {
        let xi = xi_s + step * i as f64;
        let mut e = eta;
        let mut ok = false;
        for _ in 0..60 {
            let (g, h) = constraint_g_h(params, lambda, xi, e);
            if !(h > 0.0) {
                // the branch through minima has U_etaeta > 0; losing that
                // positivity means we slid off the maximal component
                return Err(Error::BranchJump { xi });
            }
            let d = g / h;
            e -= d;
            if d.abs() < 1e-14 * (1.0 + e.abs()) {
                ok = true;
                break;
            }
        }
        if !ok || !e.is_finite() || (e - eta).abs() > 0.5 * eta_span_guess + 10.0 * step.abs() {
            return Err(Error::BranchJump { xi });
        }
        eta = e;
        branch.push((xi, eta));
    }
    if step < 0.0 {
        branch.reverse();
    }

    // both phases must sit on the walked component
    let at_f = branch
        .iter()
        .map(|&(x, e)| ((x - xi_f).abs(), e))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("branch is nonempty");
    if (at_f.1 - eta_f).abs() > 1e-6 * (1.0 + eta_f.abs()) {
        return Err(Error::BranchJump { xi: xi_f });
    }

    reduced.branch = branch;
    Ok(reduced)
}

/// Limiting interface position of the degenerate two-field kink on [0, ell],
/// with the standard phase held at x = 0. Derives the coexistence pressure
/// internally, reduces to one field, and applies the curvature formula.
pub fn predict_interface(params: &PoroParams, ell: f64) -> Result<f64> {
    let p_co = find_coexistence_pressure(params)?;
    let reduced = reduce_degenerate(&params.with_pressure(p_co))?;
    let pot = reduced.to_double_well()?;
    let x0 = kinkcore::limit_position(&pot, ell)?;
    // limit_position measures from min_a; flip if the standard phase is the
    // right minimum
    if reduced.xi_s <= reduced.xi_f {
        Ok(x0)
    } else {
        Ok(ell - x0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn material() -> PoroParams {
        PoroParams {
            alpha: 100.0,
            a_ratio: 0.5,
            b_couple: 1.0,
            p: 0.0,
            k1: 0.1,
            k2: 0.1,
            k3: 0.1,
        }
    }

    const P_CO: f64 = 0.24220915762437818;

    #[test]
    fn psi_closed_form_values() {
        let params = material();
        assert_eq!(params.psi(0.0, 0.0), 0.0);
        // m=0, eps=1, p=0: eps^2/2 + a b^2/2 = 0.5 + 0.25
        assert!((params.psi(0.0, 1.0) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let params = material().with_pressure(0.3);
        let h = 1e-6;
        for &(m, e) in &[(0.2, -0.1), (-0.05, 0.4), (1.1, -0.9)] {
            let (ge, gm) = params.grad_psi(m, e);
            let fe = (params.psi(m, e + h) - params.psi(m, e - h)) / (2.0 * h);
            let fm = (params.psi(m + h, e) - params.psi(m - h, e)) / (2.0 * h);
            assert!((ge - fe).abs() < 1e-6, "grad eps at ({m},{e}): {ge} vs {fe}");
            assert!((gm - fm).abs() < 1e-6, "grad m at ({m},{e}): {gm} vs {fm}");
        }
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let params = material().with_pressure(0.3);
        let h = 1e-5;
        let (m, e) = (0.3, -0.2);
        let (hee, hem, hmm) = params.hess_psi(m, e);
        let fee = (params.psi(m, e + h) - 2.0 * params.psi(m, e) + params.psi(m, e - h)) / (h * h);
        let fmm = (params.psi(m + h, e) - 2.0 * params.psi(m, e) + params.psi(m - h, e)) / (h * h);
        let fem = (params.psi(m + h, e + h) - params.psi(m + h, e - h) - params.psi(m - h, e + h)
            + params.psi(m - h, e - h))
            / (4.0 * h * h);
        assert!((hee - fee).abs() < 1e-4);
        assert!((hmm - fmm).abs() < 1e-4);
        assert!((hem - fem).abs() < 1e-4);
    }

    #[test]
    fn single_phase_below_critical_pressure() {
        let phases = find_phases(&material().with_pressure(0.05)).unwrap();
        assert_eq!(phases.len(), 1);
        assert_eq!(phases[0].kind, PhaseKind::Standard);
    }

    #[test]
    fn two_phases_above_critical_pressure() {
        let phases = find_phases(&material().with_pressure(0.3)).unwrap();
        assert_eq!(phases.len(), 2);
        assert!(phases[1].m > phases[0].m, "fluid-rich phase is richer in fluid");
        assert_eq!(phases[0].kind, PhaseKind::Standard);
        assert_eq!(phases[1].kind, PhaseKind::FluidRich);
    }

    #[test]
    fn critical_pressure_brackets_phase_count() {
        let params = material();
        let p_c = find_critical_pressure(&params).unwrap();
        // frozen from the oracle scan
        assert!((p_c - 0.2218821569).abs() < 1e-6, "p_c = {p_c}");
        assert_eq!(find_phases(&params.with_pressure(p_c * 0.999)).unwrap().len(), 1);
        assert_eq!(find_phases(&params.with_pressure(p_c * 1.001)).unwrap().len(), 2);
    }

    #[test]
    fn coexistence_pressure_equalizes_energies() {
        let params = material();
        let p_co = find_coexistence_pressure(&params).unwrap();
        assert!((p_co - P_CO).abs() < 1e-9, "p_co = {p_co}");
        let phases = find_phases(&params.with_pressure(p_co)).unwrap();
        assert_eq!(phases.len(), 2);
        assert!((phases[0].psi - phases[1].psi).abs() < 1e-10);
        // away from p_co the energies differ
        let off = find_phases(&params.with_pressure(p_co * 1.05)).unwrap();
        assert!((off[0].psi - off[1].psi).abs() > 1e-6);
    }

    #[test]
    fn phases_at_coexistence_match_oracle() {
        // frozen from the independent dense-grid + Newton-polish oracle
        let phases = find_phases(&material().with_pressure(P_CO)).unwrap();
        let s = phases[0];
        let f = phases[1];
        assert!((s.m - (-0.14356847959423177)).abs() < 1e-9);
        assert!((s.eps - (-0.14356847959423177)).abs() < 1e-9);
        assert!((f.m - (-0.042732959834035284)).abs() < 1e-9);
        assert!((f.eps - (-0.15973866267836945)).abs() < 1e-9);
        // the standard phase lies on the m = b eps branch, so it also solves
        // (alpha b / 3) m^3 + m / b + p = 0
        let params = material();
        let cubic = params.alpha * params.b_couple / 3.0 * s.m.powi(3) + s.m / params.b_couple
            + P_CO;
        assert!(cubic.abs() < 1e-10, "cubic defect {cubic:e}");
    }

    #[test]
    fn rotation_is_orthogonal_and_invertible() {
        let lambda = 1.7;
        for &(m, e) in &[(0.3, -0.2), (-1.0, 0.5), (2.0, 2.0)] {
            let (xi, eta) = rotate(lambda, m, e);
            assert!((xi * xi + eta * eta - (m * m + e * e)).abs() < 1e-12);
            let (m2, e2) = unrotate(lambda, xi, eta);
            assert!((m2 - m).abs() < 1e-12 && (e2 - e).abs() < 1e-12);
        }
    }

    #[test]
    fn reduce_rejects_nondegenerate_coefficients() {
        // fig.-5 ratios: k1 k3 - k2^2 = k^2/12 != 0
        let k = 0.1;
        let params = material()
            .with_pressure(P_CO)
            .with_gradient_coefficients(k, k / 2.0, k / 3.0);
        assert!(matches!(reduce_degenerate(&params), Err(Error::NotDegenerate { .. })));
    }

    #[test]
    fn reduce_degenerate_equal_coefficients() {
        let params = material().with_pressure(P_CO);
        let red = reduce_degenerate(&params).unwrap();
        assert_eq!(red.lambda, 1.0);
        assert!((red.mass_coeff - 0.2).abs() < 1e-15);
        // rotated phase round trip
        let (m, e) = red.unrotate(red.xi_s, red.eta_s);
        assert!((m - (-0.14356847959423177)).abs() < 1e-9);
        assert!((e - (-0.14356847959423177)).abs() < 1e-9);
        // oracle values of the rotated coordinates
        assert!((red.xi_s - (-0.20303649097144752)).abs() < 1e-9);
        assert!((red.xi_f - (-0.14316905727636423)).abs() < 1e-9);
        assert!((red.eta_f - (-0.08273552591872680)).abs() < 1e-9);
        // eta continuation arrives at the fluid phase
        assert!((red.eta_at(red.xi_f) - red.eta_f).abs() < 1e-10);
        // u_eff has zero minima at both phases
        assert!(red.u_eff(red.xi_s).abs() < 1e-11);
        assert!(red.u_eff(red.xi_f).abs() < 1e-11);
    }

    #[test]
    fn reduced_potential_validates_and_matches_curvature_oracle() {
        let params = material().with_pressure(P_CO);
        let red = reduce_degenerate(&params).unwrap();
        let pot = red.to_double_well().unwrap();
        assert!(pot.validate(128).passed());
        let (ca, cb) = pot.curvature_at_minima().unwrap();
        // frozen oracle curvatures of U along the branch; the FD stencil on
        // the implicitly-defined u_eff is roundoff-limited near 1e-7
        assert!((ca - 0.60483608188786966).abs() < 5e-7, "ca = {ca}");
        assert!((cb - 1.5625296192006124).abs() < 5e-7, "cb = {cb}");
    }

    #[test]
    fn pointwise_u_equals_psi_on_random_samples() {
        let params = material().with_pressure(P_CO);
        let red = reduce_degenerate(&params).unwrap();
        // U(xi, eta) = Psi(m, eps) is the rotation identity; check along the
        // branch where u_eff is defined
        for i in 0..50 {
            let t = i as f64 / 49.0;
            let xi = red.xi_s + (red.xi_f - red.xi_s) * t;
            let eta = red.eta_at(xi);
            let (m, eps) = red.unrotate(xi, eta);
            let direct = params.psi(m, eps) - red.psi_offset;
            assert!((red.u_eff(xi) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn chain_rule_on_branch() {
        // d u_eff / d xi equals dU/dxi at (xi, eta(xi)) since dU/deta = 0
        let params = material().with_pressure(P_CO);
        let red = reduce_degenerate(&params).unwrap();
        let s = (1.0 + red.lambda * red.lambda).sqrt();
        let h = 1e-6 * (red.xi_f - red.xi_s).abs();
        for i in 1..10 {
            let xi = red.xi_s + (red.xi_f - red.xi_s) * (i as f64) / 10.0;
            let fd = (red.u_eff(xi + h) - red.u_eff(xi - h)) / (2.0 * h);
            let eta = red.eta_at(xi);
            let (m, eps) = red.unrotate(xi, eta);
            let (ge, gm) = params.grad_psi(m, eps);
            let du_dxi = (gm + red.lambda * ge) / s;
            assert!((fd - du_dxi).abs() < 1e-6, "xi={xi}: fd={fd} analytic={du_dxi}");
        }
    }

    #[test]
    fn predict_interface_hits_paper_value() {
        let x0 = predict_interface(&material(), 1.0).unwrap();
        assert!((x0 - 0.61646056921268536).abs() < 1e-6, "x0 = {x0}");
    }

    #[test]
    fn prediction_invariant_under_coefficient_scale() {
        let base = predict_interface(&material(), 1.0).unwrap();
        let scaled = predict_interface(
            &material().with_gradient_coefficients(1e-3, 1e-3, 1e-3),
            1.0,
        )
        .unwrap();
        assert!((base - scaled).abs() < 1e-9);
    }
}
