//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// Panel-count ceiling for one adaptive run.
pub const MAX_PANELS: usize = 4000;

/// Value of an integral together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kronrod = fc * WGK[7];
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let asc = asc * half.abs();
    let abs_sum = abs_sum * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    // QUADPACK error scaling.
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let round = 50.0 * f64::EPSILON * abs_sum;
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(round);
    }
    Panel { a, b, value, error }
}

/// Adaptive integral of `f` over `[a, b]` to absolute accuracy `tol`.
///
/// The panel with the largest error is bisected until the summed error
/// estimate drops below `tol`. Running out of panels yields
/// [`Error::Accuracy`] carrying the best estimate.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Integral> {
    if !(tol > 0.0) {
        return Err(Error::Input(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !a.is_finite() || !b.is_finite() || b < a {
        return Err(Error::Input(format!("bad integration interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
        });
    }
    let mut panels = vec![gk15(&f, a, b)];
    loop {
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let value: f64 = panels.iter().map(|p| p.value).sum();
        if !value.is_finite() {
            return Err(Error::Input("integrand produced a non-finite value".into()));
        }
        if error <= tol {
            return Ok(Integral { value, error });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("panel list is never empty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if panels.len() + 2 > MAX_PANELS || mid <= p.a || mid >= p.b {
            panels.push(p);
            return Err(Error::Accuracy {
                estimate: value,
                error_bound: error,
                tolerance: tol,
            });
        }
        panels.push(gk15(&f, p.a, mid));
        panels.push(gk15(&f, mid, p.b));
    }
}

/// `∫₀^∞ f(u) du` for integrands with at least Gaussian-like tail decay.
///
/// Integrates `[0, 1]`, then successive doublings `[b, 2b]`; stops once a
/// doubling contributes less than a quarter of its tolerance share, which for
/// such tails bounds everything beyond it well under `tol`.
pub fn integrate_semi_infinite(f: impl Fn(f64) -> f64, tol: f64) -> Result<Integral> {
    if !(tol > 0.0) {
        return Err(Error::Input(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let first = integrate(&f, 0.0, 1.0, 0.5 * tol)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut b = 1.0_f64;
    let mut share = 0.25 * tol;
    while b < 2f64.powi(60) {
        let piece = integrate(&f, b, 2.0 * b, share)?;
        value += piece.value;
        error += piece.error;
        b *= 2.0;
        if piece.value.abs() < 0.25 * share {
            return Ok(Integral { value, error });
        }
        share *= 0.5;
    }
    Err(Error::Accuracy {
        estimate: value,
        error_bound: f64::INFINITY,
        tolerance: tol,
    })
}

/// `∫₀^upper f(u) du` where the caller has bounded the neglected tail.
pub fn integrate_with_cutoff(f: impl Fn(f64) -> f64, upper: f64, tol: f64) -> Result<Integral> {
    integrate(f, 0.0, upper, tol)
}
