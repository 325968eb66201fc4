//! One-field kink theory on a finite interval.
//!
//! The stationary profile connecting the two wells of a validated
//! [`DoubleWellPotential`] is implicit in the traversal integral
//!
//! ```text
//!     x(u) = k * integral_a^u ds / sqrt(2 (E_k + V(s)))
//! ```
//!
//! with the energy level E_k fixed so that x(b) = ell. The integrand's peak
//! height grows like 1/sqrt(2 E_k) and E_k decays exponentially in 1/k, so
//! for small k it leaves f64 range entirely (the rocked ratchet at k = 0.025
//! already needs E ~ 1e-329). All internals therefore carry t = ln E_k and
//! split each well region as the exact identity
//!
//! ```text
//!     integral 1/sqrt(2(E+V)) = S + R,
//!     S = integral 1/sqrt(2E + V''(a)(s-a)^2)     (arcsinh closed form)
//!     R = integral [1/sqrt(2(E+V)) - 1/sqrt(2E + V''(a)(s-a)^2)]
//! ```
//!
//! where S absorbs the divergence (stable in log form for any t) and R stays
//! bounded as E -> 0.

use crate::error::{Error, Result};
use crate::numerics::quad::adaptive_gk;
use crate::numerics::roots::brent;
use crate::potential::DoubleWellPotential;
use std::f64::consts::LN_2;

/// Default absolute tolerance per traversal integral.
pub const QUAD_TOL: f64 = 1e-9;
/// Default relative tolerance on the energy level (as |delta ln E|).
pub const ENERGY_TOL: f64 = 1e-10;

const MAX_INTERVALS: usize = 100_000;
const BRACKET_STEP: f64 = 6.0;
const BRACKET_BUDGET: usize = 600;

/// Energy level of the first integral, with solver metadata.
///
/// `e_k = exp(ln_e_k)` underflows to 0 for very small k; `ln_e_k` is always
/// finite and is what downstream computations consume.
#[derive(Debug, Clone, Copy)]
pub struct EnergySolution {
    pub k: f64,
    pub ell: f64,
    pub e_k: f64,
    pub ln_e_k: f64,
    /// Defect |k * T(E_k) - ell| at convergence.
    pub residual: f64,
    pub iterations: usize,
}

/// Sampled monotone kink profile u(x) on [0, ell].
#[derive(Debug, Clone)]
pub struct KinkProfile {
    pub xs: Vec<f64>,
    pub us: Vec<f64>,
    pub k: f64,
    pub e_k: f64,
    pub ln_e_k: f64,
    /// Where the profile attains the mid level (a+b)/2.
    pub interface_x: f64,
}

/// Finite-k measurements of the two localization limits, plus the predicted
/// limiting interface position.
#[derive(Debug, Clone, Copy)]
pub struct LocalizationDiagnostics {
    pub k: f64,
    pub interface_x: f64,
    pub predicted_limit: f64,
    /// sqrt(V''(a)) x_i - sqrt(V''(b)) (ell - x_i); vanishes as k -> 0.
    pub weighted_residual: f64,
    /// x(u2) - x(u1), the interior width; vanishes as k -> 0.
    pub width_u1_u2: f64,
}

impl KinkProfile {
    /// Profile value at x by linear interpolation, clamped to the boundary
    /// phases outside the sampled range.
    pub fn u_at(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return self.us[0];
        }
        if x >= *self.xs.last().unwrap() {
            return *self.us.last().unwrap();
        }
        let i = match self.xs.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => return self.us[i],
            Err(i) => i,
        };
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (u0, u1) = (self.us[i - 1], self.us[i]);
        u0 + (u1 - u0) * (x - x0) / (x1 - x0)
    }

    /// Largest slope between consecutive nodes; grows as k shrinks.
    pub fn max_slope(&self) -> f64 {
        self.xs
            .windows(2)
            .zip(self.us.windows(2))
            .map(|(x, u)| (u[1] - u[0]) / (x[1] - x[0]))
            .fold(0.0f64, f64::max)
    }
}

/// Optional alternative interface marker: crossing at the potential's
/// interior maximum rather than at (a+b)/2. Equivalent in the k -> 0 limit.
pub fn barrier_top(pot: &DoubleWellPotential, n_scan: usize) -> f64 {
    let n = n_scan.max(64);
    let mut best = (pot.midpoint(), f64::NEG_INFINITY);
    for i in 1..n {
        let u = pot.min_a() + pot.span() * (i as f64) / (n as f64);
        let v = pot.v(u);
        if v > best.1 {
            best = (u, v);
        }
    }
    best.0
}

/// Geometry and curvature data the split quadrature needs, computed once.
struct WellSplit {
    a: f64,
    b: f64,
    vpp_a: f64,
    vpp_b: f64,
    /// split points a + span/4 and b - span/4
    qa: f64,
    qb: f64,
}

impl WellSplit {
    fn prepare(pot: &DoubleWellPotential) -> Option<Self> {
        let (vpp_a, vpp_b) = pot.curvature_at_minima().ok()?;
        let a = pot.min_a();
        let b = pot.min_b();
        let quarter = 0.25 * (b - a);
        Some(WellSplit { a, b, vpp_a, vpp_b, qa: a + quarter, qb: b - quarter })
    }
}

/// arcsinh(exp(y)) without overflow.
fn asinh_of_exp(y: f64) -> f64 {
    if y > 33.0 {
        // asinh(x) = ln(2x) + O(1/x^2); the correction is below epsilon here
        y + LN_2
    } else if y < -340.0 {
        0.0
    } else {
        y.exp().asinh()
    }
}

/// ln(sinh(theta)) for theta > 0 without overflow.
fn ln_sinh(theta: f64) -> f64 {
    // sinh t = e^t (1 - e^{-2t}) / 2
    theta + ((-f64::exp_m1(-2.0 * theta)) * 0.5).ln()
}

/// Closed-form S part over [lo, hi] within the well region anchored at
/// `edge` with curvature `vpp`: integral ds / sqrt(2E + vpp (s-edge)^2),
/// where distances are taken as |s - edge|.
fn s_part(ln_e: f64, vpp: f64, d_lo: f64, d_hi: f64) -> f64 {
    let sc = vpp.sqrt();
    let scale = 0.5 * (vpp.ln() - LN_2 - ln_e);
    let upper = asinh_of_exp(d_hi.ln() + scale);
    let lower = if d_lo > 0.0 { asinh_of_exp(d_lo.ln() + scale) } else { 0.0 };
    (upper - lower) / sc
}

/// Geometric seed points approaching `edge` from inside, for integrands with
/// structure at every scale down to the peak width.
fn geometric_seeds(edge: f64, inner: f64, knee: f64) -> Vec<f64> {
    let width = (inner - edge).abs();
    let floor = (knee / 16.0).max(width * 2f64.powi(-120));
    let mut pts = Vec::new();
    let mut d = width * 0.25;
    while d > floor && pts.len() < 80 {
        pts.push(edge + (inner - edge).signum() * d);
        d *= 0.25;
    }
    pts
}

/// Traversal-time integral of 1/sqrt(2(E+V)) over [u_lo, u_hi] with
/// E = exp(ln_e). This is Eq.-(3)'s integrand without the k factor.
pub fn profile_time_ln(
    pot: &DoubleWellPotential,
    ln_e: f64,
    u_lo: f64,
    u_hi: f64,
    quad_tol: f64,
) -> Result<f64> {
    if !(u_lo <= u_hi) {
        return Err(Error::InvalidParams(format!(
            "integration bounds must be ordered, got [{u_lo}, {u_hi}]"
        )));
    }
    if u_lo == u_hi {
        return Ok(0.0);
    }
    match WellSplit::prepare(pot) {
        Some(split) => profile_time_split(pot, &split, ln_e, u_lo, u_hi, quad_tol),
        None => {
            // no usable curvature (test potentials); direct quadrature
            let e = ln_e.exp();
            let f = |s: f64| 1.0 / (2.0 * (e + pot.v(s).max(0.0))).sqrt();
            adaptive_gk(&f, u_lo, u_hi, &[pot.midpoint()], quad_tol, MAX_INTERVALS)
        }
    }
}

/// Public operation with a plain positive energy argument.
pub fn profile_time(
    pot: &DoubleWellPotential,
    e: f64,
    u_lo: f64,
    u_hi: f64,
) -> Result<f64> {
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::InvalidParams(format!("energy level must be positive, got {e}")));
    }
    profile_time_ln(pot, e.ln(), u_lo, u_hi, QUAD_TOL)
}

fn profile_time_split(
    pot: &DoubleWellPotential,
    w: &WellSplit,
    ln_e: f64,
    u_lo: f64,
    u_hi: f64,
    quad_tol: f64,
) -> Result<f64> {
    let e = ln_e.exp(); // 0.0 on underflow: harmless in R and interior parts
    let tol = quad_tol / 4.0;
    let mut total = 0.0;

    // left well region [u_lo, min(u_hi, qa)]
    if u_lo < w.qa {
        let hi = u_hi.min(w.qa);
        total += s_part(ln_e, w.vpp_a, u_lo - w.a, hi - w.a);
        let (a, vpp) = (w.a, w.vpp_a);
        let r = |s: f64| {
            let d = s - a;
            let q = 2.0 * e + vpp * d * d;
            let t = 2.0 * (e + pot.v(s).max(0.0));
            if q <= 0.0 || t <= 0.0 {
                return 0.0;
            }
            1.0 / t.sqrt() - 1.0 / q.sqrt()
        };
        let knee = ((ln_e - vpp.ln()) * 0.5 + 0.5 * LN_2).exp(); // sqrt(2E/vpp), 0 on underflow
        let seeds = geometric_seeds(w.a, hi, knee);
        total += adaptive_gk(&r, u_lo, hi, &seeds, tol, MAX_INTERVALS)?;
    }

    // interior [max(u_lo, qa), min(u_hi, qb)]
    let lo = u_lo.max(w.qa);
    let hi = u_hi.min(w.qb);
    if lo < hi {
        let f = |s: f64| 1.0 / (2.0 * (e + pot.v(s).max(0.0))).sqrt();
        let mid = 0.5 * (w.a + w.b);
        total += adaptive_gk(&f, lo, hi, &[mid], tol, MAX_INTERVALS)?;
    }

    // right well region [max(u_lo, qb), u_hi]
    if u_hi > w.qb {
        let lo = u_lo.max(w.qb);
        total += s_part(ln_e, w.vpp_b, w.b - u_hi, w.b - lo);
        let (b, vpp) = (w.b, w.vpp_b);
        let r = |s: f64| {
            let d = b - s;
            let q = 2.0 * e + vpp * d * d;
            let t = 2.0 * (e + pot.v(s).max(0.0));
            if q <= 0.0 || t <= 0.0 {
                return 0.0;
            }
            1.0 / t.sqrt() - 1.0 / q.sqrt()
        };
        let knee = ((ln_e - vpp.ln()) * 0.5 + 0.5 * LN_2).exp();
        let seeds = geometric_seeds(w.b, lo, knee);
        total += adaptive_gk(&r, lo, u_hi, &seeds, tol, MAX_INTERVALS)?;
    }

    Ok(total)
}

/// Sampled maximum of V over [a, b].
fn sampled_max(pot: &DoubleWellPotential) -> f64 {
    let n = 257;
    let mut m: f64 = 0.0;
    for i in 0..=n {
        let u = pot.min_a() + pot.span() * (i as f64) / (n as f64);
        m = m.max(pot.v(u));
    }
    m
}

/// Solve Eq. (4): find E_k with k * T(E_k) = ell, T strictly decreasing in E.
///
/// Root finding runs in t = ln E. The initial guess comes from the arcsinh
/// model of both wells calibrated by one full quadrature, after which the
/// bracket expands geometrically in E (linearly in t) if the guess missed.
pub fn solve_energy_level(
    pot: &DoubleWellPotential,
    k: f64,
    ell: f64,
) -> Result<EnergySolution> {
    solve_energy_level_tol(pot, k, ell, QUAD_TOL, ENERGY_TOL)
}

pub fn solve_energy_level_tol(
    pot: &DoubleWellPotential,
    k: f64,
    ell: f64,
    quad_tol: f64,
    energy_tol: f64,
) -> Result<EnergySolution> {
    if !(k > 0.0) || !(ell > 0.0) {
        return Err(Error::InvalidParams(format!(
            "k and ell must be positive, got k={k}, ell={ell}"
        )));
    }
    let (a, b) = (pot.min_a(), pot.min_b());
    let target = ell / k;
    let mut evals = 0usize;
    let mut time_of = |t: f64| -> Result<f64> {
        evals += 1;
        profile_time_ln(pot, t, a, b, quad_tol)
    };

    let vmax = sampled_max(pot).max(f64::MIN_POSITIVE);
    let t_ref = (0.5 * vmax).ln();

    // seed from the two-well arcsinh model, calibrated at t_ref
    let t_seed = match pot.curvature_at_minima() {
        Ok((ca, cb)) => {
            let half = 0.5 * (b - a);
            let model = |t: f64| {
                s_part(t, ca, 0.0, half) + s_part(t, cb, 0.0, half)
            };
            let c_off = time_of(t_ref)? - model(t_ref);
            // bisect the cheap model for model(t) + c_off = target
            let (mut lo, mut hi) = (t_ref - 1.0, t_ref + 1.0);
            while model(lo) + c_off < target && lo > -1.0e6 {
                lo -= (hi - lo).max(2.0);
            }
            while model(hi) + c_off > target && hi < 1.0e4 {
                hi += (hi - lo).max(2.0);
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if model(mid) + c_off > target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        }
        Err(_) => t_ref,
    };

    // verified bracket around the seed; g(t) = k*T(t) - ell decreases in t
    let mut t_lo = t_seed - 0.5;
    let mut t_hi = t_seed + 0.5;
    let mut g_lo = k * time_of(t_lo)? - ell;
    let mut g_hi = k * time_of(t_hi)? - ell;
    let mut attempts = 0;
    while g_lo < 0.0 {
        t_lo -= BRACKET_STEP;
        g_lo = k * time_of(t_lo)? - ell;
        attempts += 1;
        if attempts > BRACKET_BUDGET {
            return Err(Error::BracketFailure { what: "energy level (lower)", attempts });
        }
    }
    while g_hi > 0.0 {
        t_hi += BRACKET_STEP;
        g_hi = k * time_of(t_hi)? - ell;
        attempts += 1;
        if attempts > BRACKET_BUDGET {
            return Err(Error::BracketFailure { what: "energy level (upper)", attempts });
        }
    }

    let mut root_err: Option<Error> = None;
    let g = |t: f64| match profile_time_ln(pot, t, a, b, quad_tol) {
        Ok(time) => k * time - ell,
        Err(e) => {
            root_err = Some(e);
            f64::NAN
        }
    };
    let xtol = energy_tol * t_seed.abs().max(1.0);
    let res = brent(g, t_lo, t_hi, g_lo, g_hi, xtol, 0.5 * quad_tol * ell, 200)?;
    if let Some(e) = root_err {
        return Err(e);
    }

    Ok(EnergySolution {
        k,
        ell,
        e_k: res.x.exp(),
        ln_e_k: res.x,
        residual: res.f.abs(),
        iterations: evals + res.iterations,
    })
}

/// u-grid node placement: equal increments of the arcsinh coordinate of each
/// well, switching branches at the midpoint. This linearizes the traversal
/// integrand, giving roughly uniform spacing in x.
fn arcsinh_grid(w: &WellSplit, ln_e: f64, n_points: usize) -> Vec<f64> {
    let mid = 0.5 * (w.a + w.b);
    let half = 0.5 * (w.b - w.a);
    let n_left = (n_points - 1) / 2;
    let n_right = n_points - 1 - n_left;

    let mut us = Vec::with_capacity(n_points);
    us.push(w.a);

    let scale_a = 0.5 * (ln_e + LN_2 - w.vpp_a.ln());
    let theta_a = asinh_of_exp(half.ln() - scale_a);
    for j in 1..n_left {
        let th = theta_a * (j as f64) / (n_left as f64);
        let u = w.a + (scale_a + ln_sinh(th)).exp();
        us.push(u);
    }
    us.push(mid);

    let scale_b = 0.5 * (ln_e + LN_2 - w.vpp_b.ln());
    let theta_b = asinh_of_exp(half.ln() - scale_b);
    for j in 1..n_right {
        let th = theta_b * ((n_right - j) as f64) / (n_right as f64);
        let u = w.b - (scale_b + ln_sinh(th)).exp();
        us.push(u);
    }
    us.push(w.b);

    // offsets below one ulp of the endpoints collapse onto them; keep the
    // profile strictly increasing by dropping the duplicates
    us.dedup();
    us
}

/// Compute the kink profile by evaluating the traversal integral on an
/// arcsinh-clustered u-grid.
pub fn compute_profile(
    pot: &DoubleWellPotential,
    k: f64,
    ell: f64,
    n_points: usize,
) -> Result<KinkProfile> {
    if n_points < 3 {
        return Err(Error::InvalidParams(format!("n_points must be >= 3, got {n_points}")));
    }
    let energy = solve_energy_level(pot, k, ell)?;
    let split = WellSplit::prepare(pot).ok_or(Error::NonPositiveCurvature {
        at: pot.min_a(),
        value: pot.d2v(pot.min_a()),
    })?;

    let us = arcsinh_grid(&split, energy.ln_e_k, n_points);
    let seg_tol = QUAD_TOL / (us.len() as f64);

    let mut xs = Vec::with_capacity(us.len());
    xs.push(0.0);
    let mut acc = 0.0;
    for w in us.windows(2) {
        acc += k * profile_time_split(pot, &split, energy.ln_e_k, w[0], w[1], seg_tol)?;
        xs.push(acc);
    }

    let mid = pot.midpoint();
    let mid_idx = us
        .iter()
        .position(|&u| u == mid)
        .expect("midpoint is a grid node by construction");

    Ok(KinkProfile {
        interface_x: xs[mid_idx],
        xs,
        us,
        k,
        e_k: energy.e_k,
        ln_e_k: energy.ln_e_k,
    })
}

/// Interface position x_i(k): where the profile crosses (a+b)/2 (Eq. 6).
pub fn interface_position(pot: &DoubleWellPotential, k: f64, ell: f64) -> Result<f64> {
    let energy = solve_energy_level(pot, k, ell)?;
    Ok(k * profile_time_ln(pot, energy.ln_e_k, pot.min_a(), pot.midpoint(), QUAD_TOL)?)
}

/// Limiting interface position as k -> 0 (Eq. 8):
/// ell * sqrt(V''(b)) / (sqrt(V''(a)) + sqrt(V''(b))).
pub fn limit_position(pot: &DoubleWellPotential, ell: f64) -> Result<f64> {
    let (ca, cb) = pot.curvature_at_minima()?;
    Ok(ell * cb.sqrt() / (ca.sqrt() + cb.sqrt()))
}

/// Finite-k localization measurements (Theorems 1 and 2 quantities).
pub fn localization_diagnostics(
    pot: &DoubleWellPotential,
    k: f64,
    ell: f64,
    u1: f64,
    u2: f64,
) -> Result<LocalizationDiagnostics> {
    if !(pot.min_a() < u1 && u1 < u2 && u2 < pot.min_b()) {
        return Err(Error::InvalidParams(format!(
            "need min_a < u1 < u2 < min_b, got u1={u1}, u2={u2}"
        )));
    }
    let (ca, cb) = pot.curvature_at_minima()?;
    let energy = solve_energy_level(pot, k, ell)?;
    let t = energy.ln_e_k;
    let mid = pot.midpoint();

    let x_i = k * profile_time_ln(pot, t, pot.min_a(), mid, QUAD_TOL)?;
    // the complement integral is better conditioned than ell - x_i
    let x_rest = k * profile_time_ln(pot, t, mid, pot.min_b(), QUAD_TOL)?;
    let width = k * profile_time_ln(pot, t, u1, u2, QUAD_TOL)?;

    Ok(LocalizationDiagnostics {
        k,
        interface_x: x_i,
        predicted_limit: limit_position(pot, ell)?,
        weighted_residual: ca.sqrt() * x_i - cb.sqrt() * x_rest,
        width_u1_u2: width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{build_ratchet_cm, build_rocked_ratchet, quartic, RatchetCmParams,
                           RockedRatchetParams};

    fn ratchet_cm_paper() -> DoubleWellPotential {
        build_ratchet_cm(&RatchetCmParams { omega0: 1.0, b1: 1.0, b2: 5.0, u0: 0.5 }).unwrap()
    }

    #[test]
    fn constant_potential_time_is_linear() {
        // V == 0 on [0,1], e = 1/2: integrand is 1 everywhere
        let pot = DoubleWellPotential::new(|_| 0.0, 0.0, 1.0).unwrap();
        let t = profile_time(&pot, 0.5, 0.0, 1.0).unwrap();
        assert!((t - 1.0).abs() < 1e-12, "t = {t}");
    }

    #[test]
    fn quartic_full_span_matches_simpson_oracle() {
        // frozen from a composite-Simpson run at 1e6 panels (and a 40-digit
        // mpmath cross-check): integral over [-1,1] at e = 0.1
        let q = quartic();
        let t = profile_time(&q, 0.1, -1.0, 1.0).unwrap();
        assert!((t - 2.635238517738492).abs() < 2e-9, "t = {t}");
    }

    #[test]
    fn time_decreases_in_energy() {
        let q = quartic();
        let t1 = profile_time(&q, 0.1, -1.0, 1.0).unwrap();
        let t2 = profile_time(&q, 0.05, -1.0, 1.0).unwrap();
        assert!(t2 > t1);
    }

    #[test]
    fn energy_level_quartic_matches_nested_bisection_oracle() {
        // frozen: E_k for k = 0.1, ell = 1 from bisection over brute-force
        // quadrature (mpmath, 40 digits)
        let q = quartic();
        let sol = solve_energy_level(&q, 0.1, 1.0).unwrap();
        assert!(
            (sol.e_k - 6.593294193651875e-8).abs() / 6.59e-8 < 1e-6,
            "e_k = {:e}",
            sol.e_k
        );
        assert!(sol.residual <= QUAD_TOL);
        // Eq. (4) defect in the plain-energy form
        let t = profile_time(&q, sol.e_k, -1.0, 1.0).unwrap();
        assert!((0.1 * t - 1.0).abs() <= QUAD_TOL);
    }

    #[test]
    fn energy_level_increases_with_k() {
        let pot = ratchet_cm_paper();
        let e1 = solve_energy_level(&pot, 0.1, 1.0).unwrap();
        let e2 = solve_energy_level(&pot, 0.2, 1.0).unwrap();
        assert!(e2.ln_e_k > e1.ln_e_k);
    }

    #[test]
    fn energy_level_tends_to_zero() {
        let q = quartic();
        let es: Vec<f64> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&k| solve_energy_level(&q, k, 1.0).unwrap().e_k)
            .collect();
        assert!(es[0] > es[1] && es[1] > es[2]);
        assert!(es[2] < 1e-10);
        // frozen oracle values for the sequence
        assert!((es[0] - 1.3739261825798991e-3).abs() / es[0] < 1e-6);
        assert!((es[2] - 1.3594733392766388e-16).abs() / es[2] < 1e-6);
    }

    #[test]
    fn extreme_k_energy_underflow_is_handled() {
        // rocked ratchet at k = 0.025: ln E ~ -756, far below f64 range
        let pot = build_rocked_ratchet(&RockedRatchetParams { a_period: 1.0 }).unwrap();
        let sol = solve_energy_level(&pot, 0.025, 1.0).unwrap();
        assert_eq!(sol.e_k, 0.0);
        assert!((sol.ln_e_k - (-755.9538)).abs() < 1e-2, "ln_e_k = {}", sol.ln_e_k);
    }

    #[test]
    fn quartic_interface_is_central() {
        let q = quartic();
        for k in [0.5, 0.1] {
            let x = interface_position(&q, k, 1.0).unwrap();
            assert!((x - 0.5).abs() < 1e-9, "k={k}: x={x}");
        }
    }

    #[test]
    fn ratchet_cm_interface_positions_match_oracle() {
        // frozen from the mpmath S/R reference (30 digits)
        let pot = ratchet_cm_paper();
        let cases = [
            (0.1, 0.214193360494506),
            (0.05, 0.201019500502728),
            (0.025, 0.194432570506837),
        ];
        for (k, expect) in cases {
            let x = interface_position(&pot, k, 1.0).unwrap();
            assert!((x - expect).abs() < 1e-7, "k={k}: x={x} expect={expect}");
        }
    }

    #[test]
    fn rocked_interface_positions_match_oracle() {
        let pot = build_rocked_ratchet(&RockedRatchetParams { a_period: 1.0 }).unwrap();
        let cases = [(0.5, 0.491912026214632), (0.45, 0.49272082331776), (0.1, 0.498382405173352)];
        for (k, expect) in cases {
            let x = interface_position(&pot, k, 1.0).unwrap();
            assert!((x - expect).abs() < 1e-7, "k={k}: x={x} expect={expect}");
        }
    }

    #[test]
    fn limit_position_closed_forms() {
        let pot = ratchet_cm_paper();
        let x0 = limit_position(&pot, 1.0).unwrap();
        // (1+e^2+e^4+e^6+e^8)/(1+e^2+e^4+e^6+6e^8)
        let e2 = std::f64::consts::E * std::f64::consts::E;
        let num = 1.0 + e2 + e2.powi(2) + e2.powi(3) + e2.powi(4);
        let den = 1.0 + e2 + e2.powi(2) + e2.powi(3) + 6.0 * e2.powi(4);
        assert!((x0 - num / den).abs() < 1e-12);
        assert!((x0 - 0.187845640510947).abs() < 1e-9);

        let q = quartic();
        assert!((limit_position(&q, 2.0).unwrap() - 1.0).abs() < 1e-14);
    }

    fn first_integral_drift(pot: &DoubleWellPotential, prof: &KinkProfile) -> f64 {
        // nonuniform 3-point derivative at interior nodes
        let k = prof.k;
        let mut worst: f64 = 0.0;
        for i in 1..prof.us.len() - 1 {
            let (x0, x1, x2) = (prof.xs[i - 1], prof.xs[i], prof.xs[i + 1]);
            let (u0, u1, u2) = (prof.us[i - 1], prof.us[i], prof.us[i + 1]);
            let hl = x1 - x0;
            let hr = x2 - x1;
            let du = (u2 * hl * hl - u0 * hr * hr + u1 * (hr * hr - hl * hl))
                / (hl * hr * (hl + hr));
            let resid = (k * k * du * du / 2.0 - pot.v(u1) - prof.e_k).abs();
            worst = worst.max(resid);
        }
        worst
    }

    #[test]
    fn profile_nodes_are_monotone_and_conserve_first_integral() {
        let pot = ratchet_cm_paper();
        let k = 0.25;
        let prof = compute_profile(&pot, k, 1.0, 801).unwrap();
        assert_eq!(prof.xs.len(), prof.us.len());
        assert_eq!(prof.us[0], -1.0);
        assert_eq!(*prof.us.last().unwrap(), 1.0);
        assert_eq!(prof.xs[0], 0.0);
        assert!((prof.xs.last().unwrap() - 1.0).abs() < 1e-7);
        for w in prof.us.windows(2) {
            assert!(w[1] > w[0]);
        }
        for w in prof.xs.windows(2) {
            assert!(w[1] > w[0]);
        }
        // second-order derivative error: drift shrinks ~4x when the node
        // spacing halves
        let coarse = first_integral_drift(&pot, &prof);
        let fine = first_integral_drift(&pot, &compute_profile(&pot, k, 1.0, 1601).unwrap());
        assert!(coarse < 2e-3, "coarse drift {coarse}");
        assert!(fine < coarse / 2.5, "drift {coarse} -> {fine} is not O(h^2)");
    }

    #[test]
    fn interface_from_profile_agrees_with_direct() {
        let pot = ratchet_cm_paper();
        let prof = compute_profile(&pot, 0.1, 1.0, 501).unwrap();
        let direct = interface_position(&pot, 0.1, 1.0).unwrap();
        assert!((prof.interface_x - direct).abs() < 1e-7);
    }

    #[test]
    fn diagnostics_sequences_shrink() {
        let pot = ratchet_cm_paper();
        let (u1, u2) = (-0.5, 0.5);
        let seq: Vec<LocalizationDiagnostics> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&k| localization_diagnostics(&pot, k, 1.0, u1, u2).unwrap())
            .collect();
        for w in seq.windows(2) {
            assert!(w[1].width_u1_u2 < w[0].width_u1_u2);
            assert!(w[1].weighted_residual.abs() < w[0].weighted_residual.abs());
        }
        // oracle: wr/k settles at 5.04390118799 for this potential
        for d in &seq[1..] {
            assert!((d.weighted_residual / d.k - 5.0439011880).abs() < 1e-4);
        }
        // reported widths match the oracle
        assert!((seq[1].width_u1_u2 - 0.047380887).abs() < 1e-7);
    }

    #[test]
    fn symmetric_weighted_residual_vanishes() {
        let q = quartic();
        for k in [0.4, 0.2, 0.1] {
            let d = localization_diagnostics(&q, k, 1.0, -0.5, 0.5).unwrap();
            assert!(d.weighted_residual.abs() < 1e-7, "k={k}: wr={}", d.weighted_residual);
        }
    }

    #[test]
    fn diagnostics_reject_bad_levels() {
        let q = quartic();
        assert!(localization_diagnostics(&q, 0.1, 1.0, 0.5, -0.5).is_err());
        assert!(localization_diagnostics(&q, 0.1, 1.0, -1.5, 0.5).is_err());
    }

    #[test]
    fn large_k_runs_same_code_path() {
        // k well above ell*sqrt(max V): profile nearly linear, E_k large
        let pot = build_rocked_ratchet(&RockedRatchetParams { a_period: 1.0 }).unwrap();
        let sol = solve_energy_level(&pot, 3.0, 1.0).unwrap();
        assert!((sol.ln_e_k - (-0.176838260181608)).abs() < 1e-6);
        let prof = compute_profile(&pot, 3.0, 1.0, 101).unwrap();
        assert!((prof.xs.last().unwrap() - 1.0).abs() < 1e-8);
    }
}
