//! Finite-difference Newton solvers for the one-field and coupled two-field
//! second-order Dirichlet problems.
//!
//! Second-order central differences on a uniform grid; damped Newton with a
//! backtracking line search on the residual norm; direct tridiagonal
//! (one-field) and 2x2 block-tridiagonal (two-field) elimination. The
//! one-field solver doubles as the independent oracle for the quadrature
//! profiles in `kinkcore`.

use crate::error::{Error, Result};
use crate::poromechanics::PoroParams;
use crate::potential::DoubleWellPotential;

/// Uniform interior grid: n interior nodes, spacing h = ell / (n + 1).
#[derive(Debug, Clone, Copy)]
pub struct FdGrid {
    n: usize,
    ell: f64,
}

impl FdGrid {
    pub fn new(n: usize, ell: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams(format!("grid needs n >= 3 interior nodes, got {n}")));
        }
        if !(ell > 0.0) {
            return Err(Error::InvalidParams(format!("ell must be positive, got {ell}")));
        }
        Ok(FdGrid { n, ell })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn h(&self) -> f64 {
        self.ell / (self.n as f64 + 1.0)
    }

    /// Interior node abscissa, i in 0..n.
    pub fn x(&self, i: usize) -> f64 {
        self.h() * (i as f64 + 1.0)
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }
}

/// Newton iteration controls.
#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    /// Target on the residual infinity norm.
    pub tol: f64,
    pub max_iter: usize,
    pub max_backtracks: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-10, max_iter: 100, max_backtracks: 30 }
    }
}

/// Convergence record of one Newton solve.
///
/// `converged` means the residual reached `tol`, or the line search
/// stagnated with the residual at the field-quantization floor
/// (storage rounding of the unknowns enters the second difference as
/// ~4 ulp * coef / h^2, which for fine grids exceeds any fixed tolerance).
#[derive(Debug, Clone, Copy)]
pub struct NewtonReport {
    pub converged: bool,
    pub iterations: usize,
    pub final_residual_norm: f64,
    pub damping_used: bool,
}

/// Second difference by differences-of-differences; the inner differences of
/// neighboring values are exact, which keeps the rounding floor at
/// ulp(field) rather than ulp(field)/h^2 * h-free terms.
#[inline]
fn second_diff(left: f64, mid: f64, right: f64) -> f64 {
    (right - mid) - (mid - left)
}

fn residual_floor(coef_over_h2: f64, field_scale: f64) -> f64 {
    1e3 * f64::EPSILON * coef_over_h2 * field_scale.max(1.0)
}

/// Tanh initial kink guess centered at ell/2 with width 5k, rescaled so it
/// connects the boundary values exactly (a raw tanh leaves an O(b-a) jump at
/// the endpoints when the width is comparable to ell, and the discrete
/// residual there blows up as 1/h^2).
pub fn tanh_guess(grid: &FdGrid, left: f64, right: f64, k: f64) -> Vec<f64> {
    let ell = grid.ell();
    let w = 5.0 * k.max(1e-12);
    let t_end = (0.5 * ell / w).tanh();
    (0..grid.n())
        .map(|i| {
            let t = ((grid.x(i) - 0.5 * ell) / w).tanh();
            left + (right - left) * 0.5 * (1.0 + t / t_end)
        })
        .collect()
}

/// Thomas elimination for a general tridiagonal system.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    debug_assert!(sub.len() == n - 1 && sup.len() == n - 1 && rhs.len() == n);
    let mut c = vec![0.0; n - 1];
    let mut d = vec![0.0; n];

    let mut pivot = diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::SingularJacobian { node: 0 });
    }
    c[0] = sup[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - sub[i - 1] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::SingularJacobian { node: i });
        }
        if i < n - 1 {
            c[i] = sup[i] / pivot;
        }
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

/// Solve k^2 u'' = V'(u) with u(0) = min_a, u(ell) = min_b.
pub fn solve_one_field(
    pot: &DoubleWellPotential,
    k: f64,
    grid: &FdGrid,
    init: &[f64],
) -> Result<(Vec<f64>, NewtonReport)> {
    solve_one_field_with_options(pot, k, grid, init, &NewtonOptions::default())
}

pub fn solve_one_field_with_options(
    pot: &DoubleWellPotential,
    k: f64,
    grid: &FdGrid,
    init: &[f64],
    opts: &NewtonOptions,
) -> Result<(Vec<f64>, NewtonReport)> {
    solve_one_field_dirichlet(pot, k, grid, pot.min_a(), pot.min_b(), init, opts)
}

/// Same solver with arbitrary Dirichlet data (equal boundary values admit
/// the constant solution).
pub fn solve_one_field_dirichlet(
    pot: &DoubleWellPotential,
    k: f64,
    grid: &FdGrid,
    left_bc: f64,
    right_bc: f64,
    init: &[f64],
    opts: &NewtonOptions,
) -> Result<(Vec<f64>, NewtonReport)> {
    if init.len() != grid.n() {
        return Err(Error::InvalidParams(format!(
            "init length {} does not match grid n = {}",
            init.len(),
            grid.n()
        )));
    }
    if !(k > 0.0) {
        return Err(Error::InvalidParams(format!("k must be positive, got {k}")));
    }
    let n = grid.n();
    let h = grid.h();
    let kh = k * k / (h * h);
    let (ua, ub) = (left_bc, right_bc);

    let residual = |u: &[f64], out: &mut Vec<f64>| {
        out.clear();
        for i in 0..n {
            let left = if i == 0 { ua } else { u[i - 1] };
            let right = if i == n - 1 { ub } else { u[i + 1] };
            out.push(kh * second_diff(left, u[i], right) - pot.dv(u[i]));
        }
    };
    let norm = |f: &[f64]| f.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    // the Newton direction is a guaranteed descent direction for the
    // least-squares merit only; the line search accepts on that, while the
    // convergence test stays on the infinity norm
    let merit = |f: &[f64]| f.iter().map(|&v| v * v).sum::<f64>();

    let mut u = init.to_vec();
    let mut f = Vec::with_capacity(n);
    let mut f_trial = Vec::with_capacity(n);
    residual(&u, &mut f);
    let mut rn = norm(&f);
    let mut m2 = merit(&f);
    let mut damping_used = false;

    let field_scale = ua.abs().max(ub.abs());
    let floor = residual_floor(kh, field_scale);

    for it in 0..opts.max_iter {
        if rn <= opts.tol {
            return Ok((u, NewtonReport {
                converged: true,
                iterations: it,
                final_residual_norm: rn,
                damping_used,
            }));
        }
        let sub = vec![kh; n - 1];
        let sup = vec![kh; n - 1];
        let diag: Vec<f64> = (0..n).map(|i| -2.0 * kh - pot.d2v(u[i])).collect();
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let step = solve_tridiagonal(&sub, &diag, &sup, &rhs)?;

        let mut lambda = 1.0;
        let mut accepted = false;
        for bt in 0..=opts.max_backtracks {
            let trial: Vec<f64> =
                u.iter().zip(&step).map(|(&ui, &si)| ui + lambda * si).collect();
            residual(&trial, &mut f_trial);
            let m2_trial = merit(&f_trial);
            if m2_trial <= m2 * (1.0 - 1e-4 * lambda) {
                u = trial;
                std::mem::swap(&mut f, &mut f_trial);
                rn = norm(&f);
                m2 = m2_trial;
                accepted = true;
                if bt > 0 {
                    damping_used = true;
                }
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            // stagnation: accept if we are at the quantization floor
            if rn <= opts.tol.max(floor) {
                return Ok((u, NewtonReport {
                    converged: true,
                    iterations: it + 1,
                    final_residual_norm: rn,
                    damping_used,
                }));
            }
            return Err(Error::NewtonDivergence { iterations: it + 1, residual: rn });
        }
    }
    if rn <= opts.tol.max(floor) {
        return Ok((u, NewtonReport {
            converged: true,
            iterations: opts.max_iter,
            final_residual_norm: rn,
            damping_used,
        }));
    }
    Err(Error::NewtonDivergence { iterations: opts.max_iter, residual: rn })
}

/// Interior fields of the coupled strain/fluid-density problem plus the
/// Dirichlet boundary values (m0, eps0, m_ell, eps_ell).
#[derive(Debug, Clone)]
pub struct TwoFieldState {
    pub eps: Vec<f64>,
    pub m: Vec<f64>,
    pub boundary: (f64, f64, f64, f64),
}

impl TwoFieldState {
    pub fn new(eps: Vec<f64>, m: Vec<f64>, boundary: (f64, f64, f64, f64)) -> Result<Self> {
        if eps.len() != m.len() {
            return Err(Error::InvalidParams(format!(
                "field lengths differ: eps {} vs m {}",
                eps.len(),
                m.len()
            )));
        }
        Ok(TwoFieldState { eps, m, boundary })
    }

    pub fn n(&self) -> usize {
        self.eps.len()
    }

    /// Component-wise tanh kink guess between the boundary phases.
    pub fn tanh_kink(grid: &FdGrid, boundary: (f64, f64, f64, f64), k: f64) -> Self {
        let (m0, e0, ml, el) = boundary;
        TwoFieldState {
            eps: tanh_guess(grid, e0, el, k),
            m: tanh_guess(grid, m0, ml, k),
            boundary,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Block2 {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Block2 {
    fn inv(&self, node: usize) -> Result<Block2> {
        let det = self.a * self.d - self.b * self.c;
        if det == 0.0 || !det.is_finite() {
            return Err(Error::SingularJacobian { node });
        }
        Ok(Block2 { a: self.d / det, b: -self.b / det, c: -self.c / det, d: self.a / det })
    }

    fn mul(&self, o: &Block2) -> Block2 {
        Block2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    fn mul_vec(&self, x: (f64, f64)) -> (f64, f64) {
        (self.a * x.0 + self.b * x.1, self.c * x.0 + self.d * x.1)
    }

    fn sub(&self, o: &Block2) -> Block2 {
        Block2 { a: self.a - o.a, b: self.b - o.b, c: self.c - o.c, d: self.d - o.d }
    }
}

/// Block-tridiagonal elimination with 2x2 blocks; off-diagonal blocks are the
/// constant second-gradient matrix divided by h^2.
fn solve_block_tridiagonal(
    diag: &[Block2],
    off: Block2,
    rhs: &[(f64, f64)],
) -> Result<Vec<(f64, f64)>> {
    let n = diag.len();
    let mut cp: Vec<Block2> = Vec::with_capacity(n);
    let mut dp: Vec<(f64, f64)> = Vec::with_capacity(n);

    let inv0 = diag[0].inv(0)?;
    cp.push(inv0.mul(&off));
    dp.push(inv0.mul_vec(rhs[0]));

    for i in 1..n {
        let denom = diag[i].sub(&off.mul(&cp[i - 1]));
        let inv = denom.inv(i)?;
        cp.push(inv.mul(&off));
        let prev = off.mul_vec(dp[i - 1]);
        dp.push(inv.mul_vec((rhs[i].0 - prev.0, rhs[i].1 - prev.1)));
    }
    for i in (0..n - 1).rev() {
        let nx = dp[i + 1];
        let corr = cp[i].mul_vec(nx);
        dp[i].0 -= corr.0;
        dp[i].1 -= corr.1;
    }
    Ok(dp)
}

/// Solve the coupled Euler–Lagrange system
/// k1 eps'' + k2 m'' = dPsi/deps, k2 eps'' + k3 m'' = dPsi/dm
/// with Dirichlet data from `init.boundary`.
pub fn solve_two_field(
    model: &PoroParams,
    grid: &FdGrid,
    init: &TwoFieldState,
) -> Result<(TwoFieldState, NewtonReport)> {
    solve_two_field_with_options(model, grid, init, &NewtonOptions::default())
}

pub fn solve_two_field_with_options(
    model: &PoroParams,
    grid: &FdGrid,
    init: &TwoFieldState,
    opts: &NewtonOptions,
) -> Result<(TwoFieldState, NewtonReport)> {
    model.validate()?;
    if init.n() != grid.n() {
        return Err(Error::InvalidParams(format!(
            "init has {} nodes, grid has {}",
            init.n(),
            grid.n()
        )));
    }
    let n = grid.n();
    let h = grid.h();
    let h2 = h * h;
    let (k1, k2, k3) = (model.k1, model.k2, model.k3);
    let (m0, e0, ml, el) = init.boundary;

    let residual = |eps: &[f64], m: &[f64], out: &mut Vec<(f64, f64)>| {
        out.clear();
        for i in 0..n {
            let (el_, er) = (
                if i == 0 { e0 } else { eps[i - 1] },
                if i == n - 1 { el } else { eps[i + 1] },
            );
            let (mll, mr) = (
                if i == 0 { m0 } else { m[i - 1] },
                if i == n - 1 { ml } else { m[i + 1] },
            );
            let dde = second_diff(el_, eps[i], er) / h2;
            let ddm = second_diff(mll, m[i], mr) / h2;
            let (ge, gm) = model.grad_psi(m[i], eps[i]);
            out.push((k1 * dde + k2 * ddm - ge, k2 * dde + k3 * ddm - gm));
        }
    };
    let norm = |f: &[(f64, f64)]| {
        f.iter().fold(0.0f64, |mx, &(a, b)| mx.max(a.abs()).max(b.abs()))
    };
    let merit = |f: &[(f64, f64)]| f.iter().map(|&(a, b)| a * a + b * b).sum::<f64>();

    let mut eps = init.eps.clone();
    let mut m = init.m.clone();
    let mut f = Vec::with_capacity(n);
    let mut f_trial = Vec::with_capacity(n);
    residual(&eps, &m, &mut f);
    let mut rn = norm(&f);
    let mut m2 = merit(&f);
    let mut damping_used = false;

    let field_scale = [m0, e0, ml, el].iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let kmax = k1.abs().max(k2.abs()).max(k3.abs());
    let floor = residual_floor(kmax / h2, field_scale);
    let off = Block2 { a: k1 / h2, b: k2 / h2, c: k2 / h2, d: k3 / h2 };

    for it in 0..opts.max_iter {
        if rn <= opts.tol {
            return Ok((
                TwoFieldState { eps, m, boundary: init.boundary },
                NewtonReport {
                    converged: true,
                    iterations: it,
                    final_residual_norm: rn,
                    damping_used,
                },
            ));
        }
        let diag: Vec<Block2> = (0..n)
            .map(|i| {
                let (hee, hem, hmm) = model.hess_psi(m[i], eps[i]);
                Block2 {
                    a: -2.0 * k1 / h2 - hee,
                    b: -2.0 * k2 / h2 - hem,
                    c: -2.0 * k2 / h2 - hem,
                    d: -2.0 * k3 / h2 - hmm,
                }
            })
            .collect();
        let rhs: Vec<(f64, f64)> = f.iter().map(|&(a, b)| (-a, -b)).collect();
        let step = solve_block_tridiagonal(&diag, off, &rhs)?;

        let mut lambda = 1.0;
        let mut accepted = false;
        for bt in 0..=opts.max_backtracks {
            let eps_t: Vec<f64> =
                eps.iter().zip(&step).map(|(&v, s)| v + lambda * s.0).collect();
            let m_t: Vec<f64> = m.iter().zip(&step).map(|(&v, s)| v + lambda * s.1).collect();
            residual(&eps_t, &m_t, &mut f_trial);
            let m2_trial = merit(&f_trial);
            if m2_trial <= m2 * (1.0 - 1e-4 * lambda) {
                eps = eps_t;
                m = m_t;
                std::mem::swap(&mut f, &mut f_trial);
                rn = norm(&f);
                m2 = m2_trial;
                accepted = true;
                if bt > 0 {
                    damping_used = true;
                }
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            if rn <= opts.tol.max(floor) {
                return Ok((
                    TwoFieldState { eps, m, boundary: init.boundary },
                    NewtonReport {
                        converged: true,
                        iterations: it + 1,
                        final_residual_norm: rn,
                        damping_used,
                    },
                ));
            }
            return Err(Error::NewtonDivergence { iterations: it + 1, residual: rn });
        }
    }
    if rn <= opts.tol.max(floor) {
        return Ok((
            TwoFieldState { eps, m, boundary: init.boundary },
            NewtonReport {
                converged: true,
                iterations: opts.max_iter,
                final_residual_norm: rn,
                damping_used,
            },
        ));
    }
    Err(Error::NewtonDivergence { iterations: opts.max_iter, residual: rn })
}

/// Homotopy in the common scale of (k1, k2, k3): the model's coefficients fix
/// the mutual ratios (normalized by k1) and each entry of `k_values` sets the
/// scale. The first solve starts from a tanh kink; each subsequent solve is
/// seeded by the previous converged state.
pub fn continuation_sweep(
    model: &PoroParams,
    grid: &FdGrid,
    k_values: &[f64],
) -> Result<Vec<TwoFieldState>> {
    continuation_sweep_with_options(model, grid, k_values, &NewtonOptions::default())
}

pub fn continuation_sweep_with_options(
    model: &PoroParams,
    grid: &FdGrid,
    k_values: &[f64],
    opts: &NewtonOptions,
) -> Result<Vec<TwoFieldState>> {
    if k_values.is_empty() {
        return Err(Error::InvalidParams("k_values must not be empty".into()));
    }
    for w in k_values.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::InvalidParams("k_values must be strictly decreasing".into()));
        }
    }
    if !(k_values[k_values.len() - 1] > 0.0) {
        return Err(Error::InvalidParams("k_values must be positive".into()));
    }
    if model.k1 == 0.0 {
        return Err(Error::InvalidParams("model k1 must be nonzero to define ratios".into()));
    }
    let ratios = (1.0, model.k2 / model.k1, model.k3 / model.k1);

    let phases = crate::poromechanics::find_phases(model)?;
    if phases.len() < 2 {
        return Err(Error::NoPhaseFound { p: model.p });
    }
    let standard = &phases[0];
    let fluid = &phases[phases.len() - 1];
    let boundary = (standard.m, standard.eps, fluid.m, fluid.eps);

    let mut out = Vec::with_capacity(k_values.len());
    let mut state: Option<TwoFieldState> = None;
    for &k in k_values {
        let scaled = model.with_gradient_coefficients(k * ratios.0, k * ratios.1, k * ratios.2);
        let init = match &state {
            Some(prev) => prev.clone(),
            None => TwoFieldState::tanh_kink(grid, boundary, k),
        };
        let (solved, _report) = solve_two_field_with_options(&scaled, grid, &init, opts)
            .map_err(|e| Error::ContinuationDivergence { k, source: Box::new(e) })?;
        state = Some(solved.clone());
        out.push(solved);
    }
    Ok(out)
}

/// First crossing of `target` by linear interpolation on the grid, including
/// the boundary values.
pub fn mid_crossing(grid: &FdGrid, values: &[f64], left_bc: f64, right_bc: f64, target: f64) -> Option<f64> {
    let mut prev_x = 0.0;
    let mut prev_v = left_bc;
    for i in 0..=values.len() {
        let (x, v) = if i < values.len() {
            (grid.x(i), values[i])
        } else {
            (grid.ell(), right_bc)
        };
        if (prev_v - target) * (v - target) <= 0.0 && prev_v != v {
            return Some(prev_x + (target - prev_v) * (x - prev_x) / (v - prev_v));
        }
        prev_x = x;
        prev_v = v;
    }
    None
}
