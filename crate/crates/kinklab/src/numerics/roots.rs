//! Bracketed scalar root finding (Brent's method).

use crate::error::{Error, Result};

/// Outcome of a bracketed solve: the root abscissa plus the work done.
#[derive(Debug, Clone, Copy)]
pub struct RootResult {
    pub x: f64,
    pub f: f64,
    pub iterations: usize,
}

/// Brent's method on a bracket `[a, b]` with `f(a)*f(b) <= 0`.
///
/// Stops when the bracket is narrower than `xtol` (absolute) or |f| falls
/// below `ftol`. The caller supplies the already-evaluated endpoint values so
/// bracket expansion does not pay for re-evaluation.
pub fn brent<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    xtol: f64,
    ftol: f64,
    max_iter: usize,
) -> Result<RootResult> {
    if fa == 0.0 {
        return Ok(RootResult { x: a, f: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(RootResult { x: b, f: 0.0, iterations: 0 });
    }
    if fa * fb > 0.0 {
        return Err(Error::BracketFailure { what: "brent endpoints", attempts: 0 });
    }

    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for it in 1..=max_iter {
        if fb.abs() > fc.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb.abs() <= ftol {
            return Ok(RootResult { x: b, f: fb, iterations: it });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic / secant step
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * q0 * (q0 - r) - (b - a) * (r - 1.0));
                q = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Err(Error::BracketFailure { what: "brent iterations", attempts: max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_root() {
        let f = |x: f64| x * x * x - 2.0;
        let r = brent(f, 1.0, 2.0, f(1.0), f(2.0), 1e-14, 0.0, 100).unwrap();
        assert!((r.x - 2f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn rejects_unbracketed() {
        let f = |x: f64| x * x + 1.0;
        assert!(brent(f, -1.0, 1.0, 2.0, 2.0, 1e-12, 0.0, 50).is_err());
    }

    #[test]
    fn endpoint_root_returns_immediately() {
        let f = |x: f64| x;
        let r = brent(f, 0.0, 1.0, 0.0, 1.0, 1e-12, 0.0, 50).unwrap();
        assert_eq!(r.x, 0.0);
        assert_eq!(r.iterations, 0);
    }
}
