//! Cubic-spline interpolation with derivatives and monotone inversion.
//! Used to cache transform integrals on dense time grids.

use crate::error::{Error, Result};

/// Cubic spline through strictly increasing knots with not-a-knot end
/// conditions, so cubic data are reproduced exactly and endpoint
/// derivatives carry no artificial flattening.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    d2: Vec<f64>,
}

impl CubicSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(Error::domain(format!(
                "spline needs >= 2 knots with matching values, got {} and {}",
                n,
                ys.len()
            )));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("spline knots must be strictly increasing"));
        }
        let mut d2 = vec![0.0; n];
        if n == 3 {
            // Both not-a-knot conditions coincide; use the parabola.
            let h0 = xs[1] - xs[0];
            let h1 = xs[2] - xs[1];
            let c = ((ys[2] - ys[1]) / h1 - (ys[1] - ys[0]) / h0) / (h0 + h1);
            d2 = vec![2.0 * c; 3];
        } else if n > 3 {
            // Thomas algorithm on the interior second-derivative system,
            // with the first and last rows folded into their neighbors by
            // the not-a-knot conditions (third derivative continuous across
            // the first and last interior knots).
            let m = n - 2;
            let mut sub = vec![0.0; m];
            let mut diag = vec![0.0; m];
            let mut sup = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            for i in 0..m {
                let h0 = xs[i + 1] - xs[i];
                let h1 = xs[i + 2] - xs[i + 1];
                sub[i] = h0;
                diag[i] = 2.0 * (h0 + h1);
                sup[i] = h1;
                rhs[i] = 6.0 * ((ys[i + 2] - ys[i + 1]) / h1 - (ys[i + 1] - ys[i]) / h0);
            }
            let (h0, h1) = (xs[1] - xs[0], xs[2] - xs[1]);
            diag[0] += h0 + h0 * h0 / h1;
            sup[0] -= h0 * h0 / h1;
            let (ha, hb) = (xs[n - 2] - xs[n - 3], xs[n - 1] - xs[n - 2]);
            diag[m - 1] += hb + hb * hb / ha;
            sub[m - 1] -= hb * hb / ha;
            for i in 1..m {
                let w = sub[i] / diag[i - 1];
                diag[i] -= w * sup[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            d2[m] = rhs[m - 1] / diag[m - 1];
            for i in (0..m - 1).rev() {
                d2[i + 1] = (rhs[i] - sup[i] * d2[i + 2]) / diag[i];
            }
            d2[0] = (1.0 + h0 / h1) * d2[1] - h0 / h1 * d2[2];
            d2[n - 1] = (1.0 + hb / ha) * d2[n - 2] - hb / ha * d2[n - 3];
        }
        Ok(CubicSpline { xs, ys, d2 })
    }

    /// Index of the segment containing `x`, clamped to the end segments for
    /// out-of-range queries (polynomial extrapolation).
    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.xs.len() - 2),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.d2[i] + (b * b * b - b) * self.d2[i + 1]) * h * h / 6.0
    }

    pub fn eval_deriv(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        (self.ys[i + 1] - self.ys[i]) / h
            + ((3.0 * b * b - 1.0) * self.d2[i + 1] - (3.0 * a * a - 1.0) * self.d2[i]) * h / 6.0
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    /// Solves eval(x) = target on the knot range for monotone data:
    /// bisection to a tight bracket, then Newton polish. Fails when the
    /// target lies outside the sampled range or the data are not monotone
    /// around the bracket.
    pub fn invert_monotone(&self, target: f64) -> Result<f64> {
        let (y_lo, y_hi) = (self.ys[0], *self.ys.last().unwrap());
        let increasing = y_hi >= y_lo;
        let (lo_v, hi_v) = if increasing { (y_lo, y_hi) } else { (y_hi, y_lo) };
        let pad = 1e-12 * (1.0 + lo_v.abs().max(hi_v.abs()));
        if target < lo_v - pad || target > hi_v + pad {
            return Err(Error::domain(format!(
                "inverse target {target:.6e} outside sampled range [{lo_v:.6e}, {hi_v:.6e}]"
            )));
        }
        let mut a = self.x_min();
        let mut b = self.x_max();
        let side = |x: f64| {
            let v = self.eval(x) - target;
            if increasing {
                v
            } else {
                -v
            }
        };
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if side(m) <= 0.0 {
                a = m;
            } else {
                b = m;
            }
            if b - a < 1e-13 * (1.0 + a.abs()) {
                break;
            }
        }
        let mut x = 0.5 * (a + b);
        for _ in 0..3 {
            let d = self.eval_deriv(x);
            if d.abs() < 1e-300 {
                break;
            }
            let step = (self.eval(x) - target) / d;
            let x_new = (x - step).clamp(self.x_min(), self.x_max());
            if (x_new - x).abs() < 1e-15 * (1.0 + x.abs()) {
                x = x_new;
                break;
            }
            x = x_new;
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
    }

    #[test]
    fn reproduces_linear_functions_exactly() {
        let xs = grid(-1.0, 3.0, 7);
        let ys: Vec<f64> = xs.iter().map(|&x| 2.5 * x - 0.7).collect();
        let s = CubicSpline::new(xs, ys).unwrap();
        for &x in &[-0.9, 0.33, 1.5, 2.99] {
            assert!((s.eval(x) - (2.5 * x - 0.7)).abs() < 1e-13);
            assert!((s.eval_deriv(x) - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn reproduces_cubics_exactly_to_the_ends() {
        let p = |x: f64| 0.3 * x * x * x - 1.1 * x * x + 0.4 * x + 2.0;
        let dp = |x: f64| 0.9 * x * x - 2.2 * x + 0.4;
        for n in [3usize, 4, 9, 30] {
            let xs = grid(0.0, 2.0, n);
            let ys: Vec<f64> = xs.iter().map(|&x| p(x)).collect();
            let s = CubicSpline::new(xs, ys).unwrap();
            for &x in &[0.0, 0.013, 0.5, 1.37, 1.99, 2.0] {
                assert!((s.eval(x) - p(x)).abs() < 1e-12, "n={n}, x={x}");
                if n > 3 {
                    assert!((s.eval_deriv(x) - dp(x)).abs() < 1e-11, "n={n}, x={x}");
                }
            }
        }
    }

    #[test]
    fn interpolates_at_knots() {
        let xs = grid(0.0, 1.0, 10);
        let ys: Vec<f64> = xs.iter().map(|&x| (3.0 * x).sin()).collect();
        let s = CubicSpline::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((s.eval(*x) - y).abs() < 1e-14);
        }
    }

    #[test]
    fn dense_grid_reaches_interpolation_accuracy() {
        let xs = grid(0.0, 2.0, 512);
        let ys: Vec<f64> = xs.iter().map(|&x| (x * x).exp() * (1.0 + x)).collect();
        let s = CubicSpline::new(xs, ys).unwrap();
        for &x in &[0.123f64, 0.777, 1.369, 1.901] {
            let exact = (x * x).exp() * (1.0 + x);
            assert!(
                (s.eval(x) - exact).abs() < 1e-9 * exact.abs(),
                "x={x}: {} vs {exact}",
                s.eval(x)
            );
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let xs = grid(0.0, 1.0, 200);
        let ys: Vec<f64> = xs.iter().map(|&x| (2.0 * x).cos()).collect();
        let s = CubicSpline::new(xs, ys).unwrap();
        let h = 1e-6;
        for &x in &[0.2, 0.5, 0.83] {
            let fd = (s.eval(x + h) - s.eval(x - h)) / (2.0 * h);
            assert!((s.eval_deriv(x) - fd).abs() < 1e-7);
        }
    }

    #[test]
    fn monotone_inverse_round_trips() {
        let xs = grid(0.0, 1.0, 128);
        // Strictly decreasing data, like tau as a function of t.
        let ys: Vec<f64> = xs.iter().map(|&x| (-1.3 * x).exp() + 0.1 * (1.0 - x)).collect();
        let s = CubicSpline::new(xs, ys).unwrap();
        for &x in &[0.05, 0.31, 0.64, 0.99] {
            let y = s.eval(x);
            let back = s.invert_monotone(y).unwrap();
            assert!((back - x).abs() < 1e-10, "x={x}, back={back}");
        }
    }

    #[test]
    fn inverse_rejects_out_of_range_targets() {
        let xs = grid(0.0, 1.0, 8);
        let ys: Vec<f64> = xs.iter().map(|&x| x * x).collect();
        let s = CubicSpline::new(xs, ys).unwrap();
        assert!(s.invert_monotone(2.0).is_err());
    }
}
