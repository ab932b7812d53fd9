//! Modified Bessel function of the first kind, order zero.

/// Below this the power series is summed directly; above it the asymptotic
/// expansion's truncation error (about `e^{-2x}`) is far below 1e-16.
const SERIES_LIMIT: f64 = 30.0;

/// `Σ (x/2)^{2k} / (k!)²`. All terms are positive, so there is no
/// cancellation and the relative error stays at a few ulps.
fn series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term < sum * 1e-17 {
            return sum;
        }
        k += 1.0;
    }
}

/// `e^{-x} I₀(x)` for large positive `x`:
/// `(2πx)^{-1/2} Σ_k [(2k-1)!!]² / (k! (8x)^k)`.
fn asymptotic_scaled(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        let ratio = (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        // Stop at the smallest term; beyond it the series diverges.
        if ratio >= 1.0 {
            break;
        }
        term *= ratio;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
        k += 1.0;
    }
    sum / libm::sqrt(2.0 * core::f64::consts::PI) / libm::sqrt(x)
}

/// `I₀(x)`. Even in `x`; overflows to `+∞` past `|x| ≈ 713`.
pub fn bessel_i0(x: f64) -> f64 {
    let ax = x.abs();
    if ax.is_nan() {
        return f64::NAN;
    }
    if ax <= SERIES_LIMIT {
        series(ax)
    } else {
        asymptotic_scaled(ax) * libm::exp(ax)
    }
}

/// `e^{-|x|} I₀(x)`, finite and positive for every finite `x`.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    let ax = x.abs();
    if ax.is_nan() {
        return f64::NAN;
    }
    if ax <= SERIES_LIMIT {
        series(ax) * libm::exp(-ax)
    } else {
        asymptotic_scaled(ax)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Double-double accumulation of the defining series, independent of the
    /// single-precision recurrence above.
    fn oracle(x: f64) -> f64 {
        fn two_sum(a: f64, b: f64) -> (f64, f64) {
            let s = a + b;
            let bb = s - a;
            (s, (a - (s - bb)) + (b - bb))
        }
        let q = 0.25 * x * x;
        let (mut hi, mut lo) = (1.0_f64, 0.0_f64);
        let mut log_term = 0.0_f64;
        let lq = libm::log(q);
        for k in 1..400 {
            let kf = k as f64;
            log_term += lq - 2.0 * libm::log(kf);
            let t = libm::exp(log_term);
            let (s, e) = two_sum(hi, t);
            hi = s;
            lo += e;
            if t < 1e-20 * hi && kf > q {
                break;
            }
        }
        hi + lo
    }

    #[test]
    fn known_values() {
        assert_eq!(bessel_i0(0.0), 1.0);
        assert!((bessel_i0(1.0) - 1.266_065_877_752_008_4).abs() < 1e-15);
        assert_eq!(bessel_i0(-2.5), bessel_i0(2.5));
    }

    #[test]
    fn matches_series_oracle() {
        let mut x = 0.05;
        while x <= 20.0 {
            let rel = (bessel_i0(x) - oracle(x)).abs() / oracle(x);
            assert!(rel < 1e-12, "x={x} rel={rel}");
            x += 0.05;
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        let lo = series(SERIES_LIMIT) * libm::exp(-SERIES_LIMIT);
        let hi = asymptotic_scaled(SERIES_LIMIT);
        assert!((lo - hi).abs() / hi < 1e-13);
    }

    #[test]
    fn scaled_never_overflows() {
        for x in [700.0, 1e4, 1e10, f64::MAX] {
            let v = bessel_i0_scaled(x);
            assert!(v.is_finite() && v > 0.0, "x={x}");
        }
        assert!(bessel_i0(800.0).is_infinite());
    }

    #[test]
    fn satisfies_bessel_ode() {
        // I₀'' + I₀'/x − I₀ = 0, by fourth-order central differences.
        for x in [0.5, 2.0, 10.0] {
            let h = 1e-2;
            let f = |k: f64| bessel_i0(x + k * h);
            let d1 = (-f(2.0) + 8.0 * f(1.0) - 8.0 * f(-1.0) + f(-2.0)) / (12.0 * h);
            let d2 = (-f(2.0) + 16.0 * f(1.0) - 30.0 * f(0.0) + 16.0 * f(-1.0) - f(-2.0)) / (12.0 * h * h);
            let resid = (d2 + d1 / x - f(0.0)) / f(0.0);
            assert!(resid.abs() < 1e-8, "x={x} resid={resid}");
        }
    }
}
