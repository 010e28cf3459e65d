//! Special functions and quadrature used by the exponent analysis:
//! Gauss hypergeometric series, incomplete beta, lanczos log-gamma,
//! and an adaptive Gauss-Kronrod integrator.

use crate::error::{Error, Result};

/// Gauss hypergeometric 2F1(a, b; c; x) by direct series, |x| < 1.
///
/// Terms are summed until the increment falls below 1e-16 of the partial sum.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if x.abs() >= 1.0 {
        return Err(Error::range(format!("hyp2f1 needs |x| < 1, got {x}")));
    }
    if c <= 0.0 && c == c.floor() {
        return Err(Error::parameter(format!("hyp2f1 pole at c = {c}")));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..10_000 {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term.abs() <= 1e-16 * sum.abs().max(1.0) {
            return Ok(sum);
        }
    }
    Err(Error::numeric("hyp2f1 series did not converge in 10000 terms"))
}

/// Incomplete beta B_x(a, b) = int_0^x t^{a-1} (1-t)^{b-1} dt, valid for
/// negative non-integer `a` as well, via B_x(a,b) = x^a/a * 2F1(a, 1-b; a+1; x).
pub fn incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::range(format!("incomplete_beta needs 0 <= x < 1, got {x}")));
    }
    if a == 0.0 || (a < 0.0 && a == a.floor()) {
        return Err(Error::parameter(format!("incomplete_beta pole at a = {a}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(x.powf(a) / a * hyp2f1(a, 1.0 - b, a + 1.0, x)?)
}

/// log Gamma(x) for x > 0, Lanczos (g = 7, 9 coefficients).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Gamma(x) for x not a non-positive integer.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        ln_gamma(x).exp()
    } else {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let pi = std::f64::consts::PI;
        pi / ((pi * x).sin() * ln_gamma(1.0 - x).exp())
    }
}

// 15-point Gauss-Kronrod nodes/weights on [-1, 1] (7-point Gauss embedded).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = WGK[7] * f(c);
    let mut gauss = WG[3] * f(c);
    for j in 0..7 {
        let x = h * XGK[j];
        let fv = f(c - x) + f(c + x);
        kron += WGK[j] * fv;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fv;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod quadrature of `f` over [a, b] to absolute
/// tolerance `tol`. The integrand must be finite on the closed interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::range(format!("bad interval [{a}, {b}]")));
    }
    let mut stack = vec![(a, b, tol)];
    let mut total = 0.0;
    let mut evals = 0usize;
    while let Some((lo, hi, t)) = stack.pop() {
        let (val, err) = gk15(&f, lo, hi);
        evals += 1;
        if !val.is_finite() {
            return Err(Error::numeric(format!(
                "non-finite integrand on [{lo}, {hi}]"
            )));
        }
        if err <= t || hi - lo < 1e-14 * (b - a) {
            total += val;
        } else {
            if evals > 100_000 {
                return Err(Error::numeric("quadrature did not converge"));
            }
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * t));
            stack.push((mid, hi, 0.5 * t));
        }
    }
    Ok(total)
}

/// Riemann zeta(s) for s > 1 via Euler-Maclaurin with a power-sum head.
pub fn zeta(s: f64) -> Result<f64> {
    if s <= 1.0 {
        return Err(Error::range(format!("zeta needs s > 1, got {s}")));
    }
    let n = 50u32;
    let nf = n as f64;
    let mut sum = 0.0;
    for k in 1..n {
        sum += (k as f64).powf(-s);
    }
    // tail: n^{1-s}/(s-1) + n^{-s}/2 + s n^{-s-1}/12 - s(s+1)(s+2) n^{-s-3}/720
    sum += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s * nf.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * nf.powf(-s - 3.0) / 720.0;
    Ok(sum)
}
