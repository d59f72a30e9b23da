//! Adaptive Gauss–Kronrod (7/15) quadrature with global bisection of the
//! worst interval, plus a `[a, ∞)` variant via `x = a + u / (1 - u)`.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Segment {
        a,
        b,
        value: kron * h,
        err: ((kron - gauss) * h).abs(),
    }
}

/// Integrates `f` over the finite interval `[a, b]` to relative tolerance
/// `rtol`. Fails if the error estimate does not converge within the
/// subdivision budget or if the integrand produces non-finite values.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rtol: f64) -> Result<f64> {
    const MAX_SEGMENTS: usize = 4000;
    let mut segs = vec![gk15(&f, a, b)];
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite integrand on [{a}, {b}] (estimate {total}, error {err})"
            )));
        }
        if err <= rtol * total.abs() || err < 1e-300 {
            return Ok(total);
        }
        if segs.len() >= MAX_SEGMENTS {
            return Err(Error::Numerical(format!(
                "quadrature did not converge on [{a}, {b}]: estimate {total}, error {err}, {} segments",
                segs.len()
            )));
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .unwrap();
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return Err(Error::Numerical(format!(
                "quadrature interval collapsed near {mid} (error {err})"
            )));
        }
        segs.push(gk15(&f, s.a, mid));
        segs.push(gk15(&f, mid, s.b));
    }
}

/// Integrates `f` over `[a, ∞)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, rtol: f64) -> Result<f64> {
    integrate_to_infinity_scaled(f, a, 1.0, rtol)
}

/// Integrates `f` over `[a, ∞)` through `x = a + scale·u / (1 - u)`; `scale`
/// should be of the order of the integrand's decay length.
pub fn integrate_to_infinity_scaled<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    scale: f64,
    rtol: f64,
) -> Result<f64> {
    integrate(
        |u| {
            if u >= 1.0 {
                return 0.0;
            }
            let w = 1.0 - u;
            let v = scale * f(a + scale * u / w) / (w * w);
            if v.is_nan() {
                0.0
            } else {
                v
            }
        },
        0.0,
        1.0,
        rtol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_tail() {
        let v = integrate_to_infinity(|s| (-0.5 * s).exp(), 0.0, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn slowly_decaying_exponential() {
        // ∫ e^{-κ s} ds = 1/κ with κ small
        let kappa = 5e-4;
        let v = integrate_to_infinity(|s| (-kappa * s).exp(), 0.0, 1e-11).unwrap();
        assert!((v * kappa - 1.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn nonfinite_reported() {
        let e = integrate(|x| 1.0 / x, 0.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(e, Error::Numerical(_)));
    }
}
