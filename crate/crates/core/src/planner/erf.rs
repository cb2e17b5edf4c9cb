//! Error function and its inverse in double precision.

use core::f64::consts::PI;

use crate::{Error, Result};

use core::f64::consts::FRAC_2_SQRT_PI as TWO_OVER_SQRT_PI;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Error function.
///
/// For `|x| <= 3` the series `erf(x) = 2/√π e^(-x²) Σ 2^n x^(2n+1) / (2n+1)!!`
/// is summed (all terms positive, no cancellation). Beyond that `erfc` is
/// evaluated by its continued fraction.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax <= 3.0 {
        erf_series(ax)
    } else {
        1.0 - erfc_cf(ax)
    };
    v.copysign(x)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        2.0 - erfc(-x)
    } else if x < 0.5 {
        1.0 - erf_series(x)
    } else {
        erfc_cf(x)
    }
}

fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    TWO_OVER_SQRT_PI * libm::exp(-x2) * sum
}

/// `erfc(x)` for `x >= 0.5` by the continued fraction
/// `erfc(x) = e^(-x²)/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`,
/// evaluated with the modified Lentz method.
fn erfc_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..5000 {
        let a = f64::from(k) / 2.0;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    libm::exp(-x * x) / (SQRT_PI * f)
}

/// Inverse error function on `(-1, 1)`.
///
/// A closed-form initial guess is polished by Newton steps on [`erf`],
/// giving `erf(erfinv(y)) == y` to about one ulp.
pub fn erfinv(y: f64) -> Result<f64> {
    if !(y > -1.0 && y < 1.0) {
        return Err(Error::domain("y", y, "(-1, 1)"));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let ay = y.abs();
    let mut x = initial_guess(ay);
    for _ in 0..100 {
        // Residual taken in whichever of erf/erfc keeps precision; both
        // have the sign of erf(x) - y.
        let r = if ay > 0.5 {
            (1.0 - ay) - erfc(x)
        } else {
            erf(x) - ay
        };
        let slope = TWO_OVER_SQRT_PI * libm::exp(-x * x);
        let step = r / slope;
        x -= step;
        if step.abs() <= 1e-16 * x.abs() {
            break;
        }
    }
    Ok(x.copysign(y))
}

/// Winitzki's approximation, about 2e-3 relative error.
fn initial_guess(y: f64) -> f64 {
    const A: f64 = 0.147;
    let ln = libm::log(1.0 - y * y);
    let t = 2.0 / (PI * A) + ln / 2.0;
    libm::sqrt(libm::sqrt(t * t - ln / A) - t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erf_matches_reference_implementation() {
        // libm's erf is an independent implementation (fdlibm).
        let mut x = -6.0;
        while x <= 6.0 {
            let want = libm::erf(x);
            let got = erf(x);
            assert!(
                (got - want).abs() <= 2e-16 + 2e-15 * want.abs(),
                "x={x} {got} {want}"
            );
            let want_c = libm::erfc(x);
            let got_c = erfc(x);
            assert!(
                (got_c - want_c).abs() <= 1e-14 * want_c.abs() + 1e-300,
                "erfc x={x} {got_c} {want_c}"
            );
            x += 0.013;
        }
    }

    #[test]
    fn known_values() {
        let e1 = erf(1.0);
        assert!((e1 - 0.842_700_792_949_714_9).abs() <= 2.0 * f64::EPSILON);
        assert_eq!(erfinv(0.0).unwrap(), 0.0);
        let x = erfinv(0.842_700_792_949_714_9).unwrap();
        assert!((x - 1.0).abs() < 1e-14);
        let x = erfinv(0.99).unwrap();
        assert!((x - 1.821_386_367_718_449_7).abs() < 1e-13);
    }

    #[test]
    fn odd() {
        for &y in &[0.1, 0.5, 0.9, 0.999_999] {
            assert_eq!(erfinv(-y).unwrap(), -erfinv(y).unwrap());
        }
    }

    #[test]
    fn domain() {
        assert!(erfinv(1.0).is_err());
        assert!(erfinv(-1.0).is_err());
        assert!(erfinv(f64::NAN).is_err());
        assert!(erfinv(2.0).is_err());
    }

    #[test]
    fn roundtrip_grid() {
        for i in 0..=2000 {
            let y = -0.999 + 1.998 * f64::from(i) / 2000.0;
            let x = erfinv(y).unwrap();
            let back = erf(x);
            if y != 0.0 {
                assert!(((back - y) / y).abs() <= 1e-12, "y={y} back={back}");
            }
        }
    }

    #[test]
    fn tail_accuracy() {
        // 1 - y is exact for these, so erfc(x) must reproduce it.
        for &t in &[1e-4, 1e-8, 1e-12] {
            let x = erfinv(1.0 - t).unwrap();
            assert!(((erfc(x) - t) / t).abs() < 1e-3, "t={t}");
            assert!(((libm::erfc(x) - t) / t).abs() < 1e-3, "t={t}");
        }
    }
}
