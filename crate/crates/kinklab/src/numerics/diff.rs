//! Finite-difference derivatives with Richardson extrapolation.

/// Central first derivative, O(h^2).
pub fn d1_central<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Second derivative by the 3-point central stencil with one Richardson
/// level (h and h/2), giving O(h^4).
pub fn d2_central_richardson<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    let d2 = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    let coarse = d2(h);
    let fine = d2(0.5 * h);
    (4.0 * fine - coarse) / 3.0
}

/// Second derivative by the 5-point central stencil with one Richardson
/// level, O(h^6). Used where the function is only available numerically and
/// extra accuracy is cheap.
pub fn d2_five_point_richardson<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    let d2 = |h: f64| {
        (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
            / (12.0 * h * h)
    };
    let coarse = d2(h);
    let fine = d2(0.5 * h);
    (16.0 * fine - coarse) / 15.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_derivative_of_exp() {
        // near the roundoff-optimal steps both stencils reach ~1e-10
        let f = |x: f64| x.exp();
        let v = d2_central_richardson(&f, 0.7, 5e-3);
        assert!((v - 0.7f64.exp()).abs() < 1e-9, "3pt err {:e}", (v - 0.7f64.exp()).abs());
        let v5 = d2_five_point_richardson(&f, 0.7, 1e-2);
        assert!((v5 - 0.7f64.exp()).abs() < 1e-9, "5pt err {:e}", (v5 - 0.7f64.exp()).abs());
    }

    #[test]
    fn first_derivative_of_sin() {
        let f = |x: f64| x.sin();
        assert!((d1_central(&f, 1.1, 1e-5) - 1.1f64.cos()).abs() < 1e-9);
    }
}
