//! Regularized incomplete beta by adaptive Simpson quadrature of the beta
//! density, with the normalizing constant also obtained by quadrature.

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = simpson(f, a, m);
    let right = simpson(f, m, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, left, tol / 2.0, depth - 1) + adaptive(f, m, b, right, tol / 2.0, depth - 1)
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    // split into panels so the adaptive rule starts from a reasonable mesh
    let panels = 16;
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            adaptive(f, lo, hi, simpson(f, lo, hi), 1e-15, 48)
        })
        .sum()
}

/// `∫_0^c t^(p−1) (1−t)^(q−1) dt` for `c ≤ 1/2`. When `p < 1` the endpoint
/// singularity is removed with `u = t^p`.
fn lower_tail(p: f64, q: f64, c: f64) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    if p < 1.0 {
        let f = move |u: f64| (1.0 - u.powf(1.0 / p)).powf(q - 1.0) / p;
        integrate(&f, 0.0, c.powf(p))
    } else {
        let f = move |t: f64| t.powf(p - 1.0) * (1.0 - t).powf(q - 1.0);
        integrate(&f, 0.0, c)
    }
}

/// Unregularized `B(x; a, b)`.
fn partial_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.5 {
        lower_tail(a, b, x)
    } else {
        lower_tail(a, b, 0.5) + lower_tail(b, a, 0.5) - lower_tail(b, a, 1.0 - x)
    }
}

pub fn reg_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    let total = lower_tail(a, b, 0.5) + lower_tail(b, a, 0.5);
    partial_beta(a, b, x) / total
}
