//! Double-well potentials: the abstraction all solvers consume, builtin
//! benchmark potentials, and validation against the double-well conditions
//! (positive C^2 energy, two isolated zero minima with positive curvature).

use crate::error::{Error, Result};
use crate::numerics::diff;
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

/// Absolute tolerance for "the potential vanishes at its minima".
pub const TOL_ZERO: f64 = 1e-9;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An energy density with two degenerate zero minima `min_a < min_b`.
///
/// `v` is required; first and second derivatives are optional and fall back
/// to central finite differences with one Richardson level, step `fd_step`.
/// Instances are immutable and cheaply cloneable (closures are shared).
#[derive(Clone)]
pub struct DoubleWellPotential {
    v: RealFn,
    dv: Option<RealFn>,
    d2v: Option<RealFn>,
    min_a: f64,
    min_b: f64,
    fd_step: f64,
}

impl std::fmt::Debug for DoubleWellPotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DoubleWellPotential")
            .field("min_a", &self.min_a)
            .field("min_b", &self.min_b)
            .field("fd_step", &self.fd_step)
            .field("analytic_dv", &self.dv.is_some())
            .field("analytic_d2v", &self.d2v.is_some())
            .finish()
    }
}

impl DoubleWellPotential {
    pub fn new(
        v: impl Fn(f64) -> f64 + Send + Sync + 'static,
        min_a: f64,
        min_b: f64,
    ) -> Result<Self> {
        Self::build(Arc::new(v), None, None, min_a, min_b)
    }

    pub fn with_derivatives(
        v: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2v: impl Fn(f64) -> f64 + Send + Sync + 'static,
        min_a: f64,
        min_b: f64,
    ) -> Result<Self> {
        Self::build(Arc::new(v), Some(Arc::new(dv)), Some(Arc::new(d2v)), min_a, min_b)
    }

    pub(crate) fn build(
        v: RealFn,
        dv: Option<RealFn>,
        d2v: Option<RealFn>,
        min_a: f64,
        min_b: f64,
    ) -> Result<Self> {
        if !(min_a < min_b) || !min_a.is_finite() || !min_b.is_finite() {
            return Err(Error::InvalidParams(format!(
                "minima must satisfy min_a < min_b, got {min_a} and {min_b}"
            )));
        }
        Ok(Self {
            v,
            dv,
            d2v,
            min_a,
            min_b,
            fd_step: (min_b - min_a) * 1e-5,
        })
    }

    /// Override the finite-difference step used by derivative fallbacks.
    pub fn with_fd_step(mut self, fd_step: f64) -> Result<Self> {
        if !(fd_step > 0.0) {
            return Err(Error::InvalidParams(format!("fd_step must be positive, got {fd_step}")));
        }
        self.fd_step = fd_step;
        Ok(self)
    }

    pub fn min_a(&self) -> f64 {
        self.min_a
    }

    pub fn min_b(&self) -> f64 {
        self.min_b
    }

    pub fn span(&self) -> f64 {
        self.min_b - self.min_a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.min_a + self.min_b)
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn v(&self, u: f64) -> f64 {
        (self.v)(u)
    }

    pub fn dv(&self, u: f64) -> f64 {
        match &self.dv {
            Some(f) => f(u),
            None => diff::d1_central(&|x| (self.v)(x), u, self.fd_step),
        }
    }

    pub fn d2v(&self, u: f64) -> f64 {
        match &self.d2v {
            Some(f) => f(u),
            None => diff::d2_central_richardson(&|x| (self.v)(x), u, self.fd_step),
        }
    }

    pub fn has_analytic_d2v(&self) -> bool {
        self.d2v.is_some()
    }

    /// Copy of this potential with analytic derivatives stripped, so the
    /// finite-difference fallbacks are exercised.
    pub fn without_analytic_derivatives(&self) -> Self {
        Self {
            v: self.v.clone(),
            dv: None,
            d2v: None,
            min_a: self.min_a,
            min_b: self.min_b,
            fd_step: self.fd_step,
        }
    }

    /// Second derivatives at the two minima.
    pub fn curvature_at_minima(&self) -> Result<(f64, f64)> {
        let ca = self.d2v(self.min_a);
        let cb = self.d2v(self.min_b);
        if !(ca > 0.0) || !ca.is_finite() {
            return Err(Error::NonPositiveCurvature { at: self.min_a, value: ca });
        }
        if !(cb > 0.0) || !cb.is_finite() {
            return Err(Error::NonPositiveCurvature { at: self.min_b, value: cb });
        }
        Ok((ca, cb))
    }

    /// Check the double-well conditions by direct measurement.
    ///
    /// Always returns a report; callers decide whether failures abort.
    pub fn validate(&self, n_samples: usize) -> ValidationReport {
        let n = n_samples.max(16);
        let mut checks = Vec::new();

        checks.push(ValidationCheck {
            name: "minima ordered (min_a < min_b)",
            passed: self.min_a < self.min_b,
            measured: self.min_b - self.min_a,
            threshold: 0.0,
        });

        let va = self.v(self.min_a);
        let vb = self.v(self.min_b);
        checks.push(ValidationCheck {
            name: "zero minimum at min_a (|V| <= tol_zero)",
            passed: va.abs() <= TOL_ZERO,
            measured: va.abs(),
            threshold: TOL_ZERO,
        });
        checks.push(ValidationCheck {
            name: "zero minimum at min_b (|V| <= tol_zero)",
            passed: vb.abs() <= TOL_ZERO,
            measured: vb.abs(),
            threshold: TOL_ZERO,
        });

        let ca = self.d2v(self.min_a);
        let cb = self.d2v(self.min_b);
        checks.push(ValidationCheck {
            name: "positive curvature at min_a",
            passed: ca.is_finite() && ca > 0.0,
            measured: ca,
            threshold: 0.0,
        });
        checks.push(ValidationCheck {
            name: "positive curvature at min_b",
            passed: cb.is_finite() && cb > 0.0,
            measured: cb,
            threshold: 0.0,
        });

        // positivity between the wells, skipping neighborhoods where a valid
        // potential may legitimately be below tol_zero
        let span = self.span();
        let radius_a = if ca > 0.0 { 2.0 * (2.0 * TOL_ZERO / ca).sqrt() } else { 1e-3 * span };
        let radius_b = if cb > 0.0 { 2.0 * (2.0 * TOL_ZERO / cb).sqrt() } else { 1e-3 * span };
        let mut min_sampled = f64::INFINITY;
        let mut sampled_any = false;
        for i in 1..n {
            let u = self.min_a + span * (i as f64) / (n as f64);
            if u - self.min_a < radius_a || self.min_b - u < radius_b {
                continue;
            }
            sampled_any = true;
            min_sampled = min_sampled.min(self.v(u));
        }
        checks.push(ValidationCheck {
            name: "V > 0 on sampled interior",
            passed: sampled_any && min_sampled > 0.0,
            measured: if sampled_any { min_sampled } else { f64::NAN },
            threshold: 0.0,
        });

        ValidationReport { checks }
    }
}

/// One measured invariant in a [`ValidationReport`].
#[derive(Debug, Clone)]
pub struct ValidationCheck {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
}

/// Outcome of [`DoubleWellPotential::validate`].
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// The symmetric quartic well V(u) = (1 - u^2)^2 / 2 with minima at ±1.
pub fn quartic() -> DoubleWellPotential {
    DoubleWellPotential::build(
        Arc::new(|u: f64| {
            let d = (1.0 - u) * (1.0 + u);
            0.5 * d * d
        }),
        Some(Arc::new(|u: f64| -2.0 * u * (1.0 - u) * (1.0 + u))),
        Some(Arc::new(|u: f64| 6.0 * u * u - 2.0)),
        -1.0,
        1.0,
    )
    .expect("quartic minima are fixed")
}

/// Parameters of the exponential-product asymmetric well with minima at ±1.
///
/// `u0` sets where the two factors both equal their normalization, which
/// controls the internal barrier height; `omega0` scales the energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatchetCmParams {
    pub omega0: f64,
    pub b1: f64,
    pub b2: f64,
    pub u0: f64,
}

impl RatchetCmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.b1 > 0.0) || !(self.b2 > 0.0) {
            return Err(Error::InvalidParams(format!(
                "b1 and b2 must be positive, got {} and {}",
                self.b1, self.b2
            )));
        }
        if !(self.u0 > -1.0 && self.u0 < 1.0) {
            return Err(Error::InvalidParams(format!("u0 must lie in (-1, 1), got {}", self.u0)));
        }
        if self.omega0 == 0.0 || !self.omega0.is_finite() {
            return Err(Error::InvalidParams("omega0 must be finite and nonzero".into()));
        }
        Ok(())
    }
}

/// Asymmetric double well built from two exponential saturation factors.
///
/// V(u) = (f(u) g(u) / (f(u0) g(u0)))^2 / omega0^2 with
/// f(u) = 1 - exp(b1 (u-1)) and g(u) = 1 - exp(-b2 (u+1)), so V(±1) = 0
/// exactly and V(u0) = 1/omega0^2 by construction. The factors are computed
/// through expm1, which keeps the double zeros exact to rounding.
pub fn build_ratchet_cm(p: &RatchetCmParams) -> Result<DoubleWellPotential> {
    p.validate()?;
    let (b1, b2) = (p.b1, p.b2);
    let f = move |u: f64| -f64::exp_m1(b1 * (u - 1.0));
    let g = move |u: f64| -f64::exp_m1(-b2 * (u + 1.0));
    let norm = p.omega0 * f(p.u0) * g(p.u0);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidParams("degenerate normalization at u0".into()));
    }
    let c = 1.0 / (norm * norm);

    let fp = move |u: f64| -b1 * f64::exp(b1 * (u - 1.0));
    let gp = move |u: f64| b2 * f64::exp(-b2 * (u + 1.0));
    let fpp = move |u: f64| -b1 * b1 * f64::exp(b1 * (u - 1.0));
    let gpp = move |u: f64| -b2 * b2 * f64::exp(-b2 * (u + 1.0));

    DoubleWellPotential::build(
        Arc::new(move |u: f64| {
            let w = f(u) * g(u);
            c * w * w
        }),
        Some(Arc::new(move |u: f64| {
            2.0 * c * f(u) * g(u) * (fp(u) * g(u) + f(u) * gp(u))
        })),
        Some(Arc::new(move |u: f64| {
            let s = fp(u) * g(u) + f(u) * gp(u);
            2.0 * c * (s * s + f(u) * g(u) * (fpp(u) * g(u) + 2.0 * fp(u) * gp(u) + f(u) * gpp(u)))
        })),
        -1.0,
        1.0,
    )
}

/// Parameters of the two-harmonic ratchet potential, restricted to one
/// spatial period `[0, a_period]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RockedRatchetParams {
    pub a_period: f64,
}

impl RockedRatchetParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a_period > 0.0) || !self.a_period.is_finite() {
            return Err(Error::InvalidParams(format!(
                "a_period must be positive, got {}",
                self.a_period
            )));
        }
        Ok(())
    }

    /// Amplitude sigma = 8 pi / (a (sqrt(3)/2)^(1/2) (3 + sqrt(3))).
    pub fn sigma(&self) -> f64 {
        let s3 = 3f64.sqrt();
        8.0 * PI / (self.a_period * (s3 / 2.0).sqrt() * (3.0 + s3))
    }

    /// Minimum offset u0 = (a / 2 pi) * arccos((sqrt(3) - 1) / 2).
    pub fn u0(&self) -> f64 {
        self.a_period * Self::theta0() / TAU
    }

    /// Additive constant that zeroes the minima: R = 2 pi / a.
    pub fn r_offset(&self) -> f64 {
        TAU / self.a_period
    }

    fn theta0() -> f64 {
        ((3f64.sqrt() - 1.0) / 2.0).acos()
    }
}

/// Two-harmonic ratchet well: sigma [ sin(2pi(u-u0)/a) + sin(4pi(u-u0)/a)/4 ] + 2pi/a,
/// restricted to one period with minima at 0 and a_period.
///
/// Evaluation uses the algebraically equivalent product form
/// sigma sin(delta/2) dH(delta), delta = 2 pi frac(u/a), where every term of
/// dH carries a sin(k delta/4) factor. The direct sum of sines leaves the
/// minima displaced by rounding, which the singular quadrature downstream
/// cannot tolerate.
pub fn build_rocked_ratchet(p: &RockedRatchetParams) -> Result<DoubleWellPotential> {
    p.validate()?;
    let a = p.a_period;
    let sigma = p.sigma();
    let th = RockedRatchetParams::theta0();

    let delta_of = move |u: f64| {
        let t = u / a;
        TAU * (t - t.round())
    };

    let dh = move |d: f64| {
        let q = 0.25 * d;
        -4.0 * q.sin() * (q - th).sin() + q.sin() * (2.0 * th - q).sin()
            - (3.0 * q).sin() * (3.0 * q - 2.0 * th).sin()
    };

    let phi_of = move |u: f64| delta_of(u) - th;

    DoubleWellPotential::build(
        Arc::new(move |u: f64| {
            let d = delta_of(u);
            sigma * (0.5 * d).sin() * dh(d)
        }),
        Some(Arc::new(move |u: f64| {
            let phi = phi_of(u);
            sigma * (TAU / a) * (phi.cos() + 0.5 * (2.0 * phi).cos())
        })),
        Some(Arc::new(move |u: f64| {
            let phi = phi_of(u);
            -sigma * (TAU / a) * (TAU / a) * (phi.sin() + (2.0 * phi).sin())
        })),
        0.0,
        a,
    )
}

/// Closed-form curvature of the rocked ratchet at its minima:
/// V''(n a) = 16 (sqrt(3) - 1) pi^3 / a^3.
pub fn rocked_ratchet_curvature(a_period: f64) -> f64 {
    16.0 * (3f64.sqrt() - 1.0) * PI.powi(3) / a_period.powi(3)
}
