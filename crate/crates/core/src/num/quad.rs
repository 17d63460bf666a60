//! Numerical integration: an adaptive Gauss-Kronrod rule for general
//! integrands and fixed composite rules for grid-based work.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Abscissae of the 15-point Kronrod rule on [-1, 1]. The odd-index entries
/// are the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss weights for the embedded 7-point rule (nodes XGK[1], XGK[3],
/// XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    /// Estimated absolute error.
    pub abs_err: f64,
    /// Number of panel subdivisions performed.
    pub subdivisions: usize,
}

/// One Gauss-Kronrod panel on [a, b]. Returns the K15 value and an error
/// estimate from the G7/K15 discrepancy.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let fsum = f(mid - dx) + f(mid + dx);
        kron += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    kron *= half;
    gauss *= half;
    // The QUADPACK-style sharpened estimate (200|dk|)^1.5 is tuned for its
    // rescaled integrands; the plain discrepancy is a safe bound here.
    (kron, (kron - gauss).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss-Kronrod integration of `f` over [a, b].
///
/// Splits the worst panel until the summed error estimate meets
/// `abs_tol + rel_tol * |value|` or `max_panels` is reached. The result is
/// returned either way; callers that need a guarantee check `abs_err`.
/// `a > b` integrates with the usual sign flip.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            abs_err: 0.0,
            subdivisions: 0,
        };
    }
    if a > b {
        let mut r = integrate(f, b, a, abs_tol, rel_tol);
        r.value = -r.value;
        return r;
    }
    const MAX_PANELS: usize = 2000;
    let (value, err) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, err });
    let mut total = value;
    let mut total_err = err;
    let mut subdivisions = 0;
    while total_err > abs_tol.max(rel_tol * total.abs()) && heap.len() < MAX_PANELS {
        let worst = heap.pop().expect("heap nonempty while error positive");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel no longer splittable in f64; keep it and stop.
            heap.push(worst);
            break;
        }
        let (vl, el) = gk15(f, worst.a, mid);
        let (vr, er) = gk15(f, mid, worst.b);
        total += vl + vr - worst.value;
        total_err += el + er - worst.err;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: vl,
            err: el,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: vr,
            err: er,
        });
        subdivisions += 1;
        if subdivisions % 64 == 0 {
            // Re-sum to shed accumulated cancellation in the running totals.
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.err).sum();
        }
    }
    total = heap.iter().map(|p| p.value).sum();
    total_err = heap.iter().map(|p| p.err).sum();
    QuadResult {
        value: total,
        abs_err: total_err,
        subdivisions,
    }
}

/// Convenience wrapper returning just the value at default tolerances.
pub fn integrate_default<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    integrate(f, a, b, 1e-12, 1e-12).value
}

/// Composite Simpson rule with `n` panels (`n` even) on [a, b].
pub fn simpson_composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n >= 2 && n % 2 == 0, "simpson panel count must be even, got {n}");
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    s * h / 3.0
}

/// Composite trapezoid rule over the sampled values `fs` at spacing `h`.
pub fn trapezoid_sampled(fs: &[f64], h: f64) -> f64 {
    if fs.len() < 2 {
        return 0.0;
    }
    let interior: f64 = fs[1..fs.len() - 1].iter().sum();
    h * (0.5 * (fs[0] + fs[fs.len() - 1]) + interior)
}

/// Composite Simpson rule over sampled values at spacing `h`. The sample
/// count must be odd (even panel count); an even count falls back to
/// Simpson on the leading panels plus a trapezoid correction on the last,
/// which keeps the rule usable on every prefix of a growing grid.
pub fn simpson_sampled(fs: &[f64], h: f64) -> f64 {
    let n = fs.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * h * (fs[0] + fs[1]);
    }
    if n % 2 == 1 {
        let mut s = fs[0] + fs[n - 1];
        for (i, &v) in fs.iter().enumerate().take(n - 1).skip(1) {
            s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        s * h / 3.0
    } else {
        // Simpson on the first n-1 samples, then a cubic Newton-Cotes
        // correction for the final panel so the even branch stays exact
        // on cubics too.
        let head = simpson_sampled(&fs[..n - 1], h);
        let tail =
            h / 24.0 * (fs[n - 4] - 5.0 * fs[n - 3] + 19.0 * fs[n - 2] + 9.0 * fs[n - 1]);
        head + tail
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk15_panel_is_exact_on_degree_23_polynomials() {
        // Exactness degree of the 7-point Kronrod extension is 3*7+2 = 23.
        for k in (0..=23).step_by(2) {
            let (v, _) = gk15(&|x: f64| x.powi(k), -1.0, 1.0);
            let exact = 2.0 / (k as f64 + 1.0);
            assert!(
                (v - exact).abs() < 1e-14,
                "degree {k}: got {v}, want {exact}"
            );
        }
    }

    #[test]
    fn integrates_smooth_functions_to_tolerance() {
        let r = integrate(&|x: f64| x.exp(), 0.0, 1.0, 1e-13, 0.0);
        assert!((r.value - (1f64.exp() - 1.0)).abs() < 1e-13);

        let r = integrate(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-13, 0.0);
        assert!((r.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn integrates_mild_endpoint_singularity() {
        // sqrt(x) has unbounded second derivative at 0 but the adaptive
        // splitting should still reach 1e-10.
        let r = integrate(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-11, 0.0);
        assert!(
            (r.value - 2.0 / 3.0).abs() < 1e-10,
            "got {}, err est {}",
            r.value,
            r.abs_err
        );
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let fwd = integrate_default(&|x: f64| x * x, 0.0, 2.0);
        let rev = integrate_default(&|x: f64| x * x, 2.0, 0.0);
        assert!((fwd + rev).abs() < 1e-14);
    }

    #[test]
    fn sampled_rules_match_closed_forms() {
        // f(x) = x^2 on [0,1]: trapezoid error is h^2/6 exactly for this f.
        let n = 64;
        let h = 1.0 / n as f64;
        let fs: Vec<f64> = (0..=n).map(|i| (i as f64 * h).powi(2)).collect();
        let trap = trapezoid_sampled(&fs, h);
        assert!((trap - (1.0 / 3.0 + h * h / 6.0)).abs() < 1e-14);

        // Simpson is exact on cubics, both with odd and even sample counts.
        let fs3: Vec<f64> = (0..=n).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((simpson_sampled(&fs3, h) - 0.25).abs() < 1e-14);
        let fs3e: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(3)).collect();
        let exact_even = ((n - 1) as f64 * h).powi(4) / 4.0;
        assert!((simpson_sampled(&fs3e, h) - exact_even).abs() < 1e-13);
    }

    #[test]
    fn simpson_composite_converges_fourth_order() {
        let f = |x: f64| (2.0 * x).cos();
        let exact = 0.5 * 2f64.sin();
        let e1 = (simpson_composite(&f, 0.0, 1.0, 8) - exact).abs();
        let e2 = (simpson_composite(&f, 0.0, 1.0, 16) - exact).abs();
        let order = (e1 / e2).log2();
        assert!(
            (3.5..=4.5).contains(&order),
            "observed order {order}, errors {e1:.3e} {e2:.3e}"
        );
    }
}
