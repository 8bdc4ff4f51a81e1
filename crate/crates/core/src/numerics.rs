//! Shared numerical kernels: an embedded Runge-Kutta integrator with
//! adaptive step control, bracketed bisection, golden-section maximization,
//! and adaptive Simpson quadrature.

use crate::error::{Error, Result};

// Cash-Karp 4(5) tableau.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [3.0 / 10.0, -9.0 / 10.0, 6.0 / 5.0];
const A5: [f64; 4] = [-11.0 / 54.0, 5.0 / 2.0, -70.0 / 27.0, 35.0 / 27.0];
const A6: [f64; 5] = [
    1631.0 / 55296.0,
    175.0 / 512.0,
    575.0 / 13824.0,
    44275.0 / 110592.0,
    253.0 / 4096.0,
];
const B5: [f64; 6] = [
    37.0 / 378.0,
    0.0,
    250.0 / 621.0,
    125.0 / 594.0,
    0.0,
    512.0 / 1771.0,
];
const B4: [f64; 6] = [
    2825.0 / 27648.0,
    0.0,
    18575.0 / 48384.0,
    13525.0 / 55296.0,
    277.0 / 14336.0,
    1.0 / 4.0,
];

/// Advance one Cash-Karp step; returns (5th-order solution, error estimate).
fn ck_step<const D: usize>(
    rhs: &impl Fn(f64, &[f64; D]) -> [f64; D],
    t: f64,
    y: &[f64; D],
    h: f64,
) -> ([f64; D], f64) {
    let k1 = rhs(t, y);
    let mut tmp = [0.0; D];

    for i in 0..D {
        tmp[i] = y[i] + h * A2[0] * k1[i];
    }
    let k2 = rhs(t + h / 5.0, &tmp);

    for i in 0..D {
        tmp[i] = y[i] + h * (A3[0] * k1[i] + A3[1] * k2[i]);
    }
    let k3 = rhs(t + 3.0 * h / 10.0, &tmp);

    for i in 0..D {
        tmp[i] = y[i] + h * (A4[0] * k1[i] + A4[1] * k2[i] + A4[2] * k3[i]);
    }
    let k4 = rhs(t + 3.0 * h / 5.0, &tmp);

    for i in 0..D {
        tmp[i] = y[i] + h * (A5[0] * k1[i] + A5[1] * k2[i] + A5[2] * k3[i] + A5[3] * k4[i]);
    }
    let k5 = rhs(t + h, &tmp);

    for i in 0..D {
        tmp[i] = y[i]
            + h * (A6[0] * k1[i] + A6[1] * k2[i] + A6[2] * k3[i] + A6[3] * k4[i] + A6[4] * k5[i]);
    }
    let k6 = rhs(t + 7.0 * h / 8.0, &tmp);

    let ks = [k1, k2, k3, k4, k5, k6];
    let mut y5 = *y;
    let mut err = 0.0_f64;
    for i in 0..D {
        let mut hi5 = 0.0;
        let mut hi4 = 0.0;
        for (j, k) in ks.iter().enumerate() {
            hi5 += B5[j] * k[i];
            hi4 += B4[j] * k[i];
        }
        y5[i] += h * hi5;
        err = err.max((h * (hi5 - hi4)).abs());
    }
    (y5, err)
}

/// Integrate `dy/dt = rhs(t, y)` from `t0` to `t_end`, recording the state
/// at each requested sample time (which must be non-decreasing and within
/// `[t0, t_end]`). The step is clipped to land exactly on sample times.
///
/// `tol` is the local error target per unit time: a step of size `h` is
/// accepted when its error estimate is at most `tol * h`.
///
/// `stop` may end the integration early; the remaining samples are then
/// filled with the frozen final state (time still advancing).
pub fn integrate_sampled<const D: usize>(
    rhs: impl Fn(f64, &[f64; D]) -> [f64; D],
    t0: f64,
    y0: [f64; D],
    t_end: f64,
    tol: f64,
    sample_times: &[f64],
    mut stop: impl FnMut(f64, &[f64; D]) -> bool,
) -> Vec<(f64, [f64; D])> {
    let mut samples = Vec::with_capacity(sample_times.len());
    let mut t = t0;
    let mut y = y0;
    let mut h = ((t_end - t0) / 100.0).max(1e-12);
    let mut next_sample = 0;

    while next_sample < sample_times.len() && sample_times[next_sample] <= t {
        samples.push((sample_times[next_sample], y));
        next_sample += 1;
    }

    let mut frozen = stop(t, &y);
    while t < t_end {
        if frozen {
            // Past effective absorption: emit the frozen state.
            while next_sample < sample_times.len() {
                samples.push((sample_times[next_sample], y));
                next_sample += 1;
            }
            break;
        }
        let mut h_try = h.min(t_end - t);
        if next_sample < sample_times.len() {
            h_try = h_try.min(sample_times[next_sample] - t);
        }
        let (y_new, err) = ck_step(&rhs, t, &y, h_try);
        let tol_step = tol * h_try;
        if err <= tol_step || h_try <= 1e-13 {
            t += h_try;
            y = y_new;
            while next_sample < sample_times.len() && sample_times[next_sample] <= t + 1e-15 {
                samples.push((sample_times[next_sample], y));
                next_sample += 1;
            }
            frozen = stop(t, &y);
            let grow = if err > 0.0 {
                0.9 * (tol_step / err).powf(0.2)
            } else {
                5.0
            };
            h = (h_try * grow.clamp(0.2, 5.0)).max(1e-13);
        } else {
            h = (h_try * (0.9 * (tol_step / err).powf(0.25)).clamp(0.1, 1.0)).max(1e-13);
        }
    }
    while next_sample < sample_times.len() {
        samples.push((sample_times[next_sample], y));
        next_sample += 1;
    }
    samples
}

/// Bracketed bisection for `f(x) = 0` on `[lo, hi]` to width `tol`.
///
/// The endpoints must straddle a sign change (zero counts for either side).
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::BracketFailure { lo, hi });
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval at floating-point resolution
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
///
/// Returns `(x_max, f_max)` once the bracket is narrower than `tol`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to relative tolerance
/// `rel_tol` (with a small absolute floor for near-zero integrals).
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, b - a);
    let eps = (rel_tol * whole.abs()).max(1e-300);
    recurse(&f, a, b, fa, fm, fb, whole, eps, 60)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrator_matches_exponential_decay() {
        let samples = integrate_sampled(
            |_, y: &[f64; 1]| [-y[0]],
            0.0,
            [1.0],
            5.0,
            1e-9,
            &[1.0, 2.5, 5.0],
            |_, _| false,
        );
        for (t, y) in samples {
            assert!(
                (y[0] - (-t).exp()).abs() < 1e-8,
                "t = {t}: {} vs {}",
                y[0],
                (-t).exp()
            );
        }
    }

    #[test]
    fn integrator_logistic_closed_form() {
        // dy/dt = y(1-y), y(0) = 0.05 -> y(t) = y0 / (y0 + (1-y0) e^{-t})
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
        let samples = integrate_sampled(
            |_, y: &[f64; 1]| [y[0] * (1.0 - y[0])],
            0.0,
            [0.05],
            10.0,
            1e-9,
            &grid,
            |_, _| false,
        );
        for (t, y) in samples {
            let exact = 0.05 / (0.05 + 0.95 * (-t).exp());
            assert!((y[0] - exact).abs() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let root = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((root - std::f64::consts::SQRT_2).abs() < 1e-11);
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::BracketFailure { .. })
        ));
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 1.3) * (x - 1.3) + 2.0, 0.0, 3.0, 1e-6);
        assert!((x - 1.3).abs() < 1e-5);
        assert!((fx - 2.0).abs() < 1e-9);
    }

    #[test]
    fn simpson_integrates_exp() {
        let v = adaptive_simpson(|x| (-x).exp(), 0.0, 20.0, 1e-10);
        assert!((v - (1.0 - (-20.0_f64).exp())).abs() < 1e-9);
    }
}
