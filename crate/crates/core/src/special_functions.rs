//! Macdonald functions of imaginary order, the modified Struve function `M_0`
//! and the two composite kernels of the discrete transforms.
//!
//! `K_{i tau}(x)` is evaluated from its real integral representation
//! `int_0^inf exp(-x cosh u) cos(tau u) du`; `Re I_{i tau}(x)` from the
//! ascending series. The transform kernels are Abel integrals of `K_{in}`;
//! each equals a closed form in `K_{in/2}` and `I_{in/2}` at half the argument,
//! so every kernel value has two independent evaluation paths.

use std::f64::consts::{FRAC_2_PI, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_finite, integrate_semi_infinite, try_integrate_abel_lower, try_integrate_abel_upper, QuadratureConfig,
    QuadratureResult,
};

/// Largest argument for which the ascending series of `I_{i tau}` is used.
pub const SERIES_X_MAX: f64 = 30.0;
/// Largest order for which the ascending series of `I_{i tau}` is used.
pub const SERIES_TAU_MAX: f64 = 20.0;
const SERIES_TERM_CAP: usize = 300;

/// Which pair of transforms a kernel or coefficient sequence belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelFamily {
    /// `K_{in/2} (I_{in/2} + I_{-in/2})`: coefficient extraction and synthesis
    /// through the product kernel, inversion through `Phi_n`.
    #[serde(rename = "product")]
    ProductKernel,
    /// `K_{in/2}^2`: inversion through `Psi_n`.
    #[serde(rename = "squared")]
    SquaredKernel,
}

impl KernelFamily {
    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::ProductKernel => "product",
            KernelFamily::SquaredKernel => "squared",
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An evaluation point `(tau, x)` for `K_{i tau}(x)`, with `x > 0` enforced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImaginaryOrderPoint {
    tau: f64,
    x: f64,
}

impl ImaginaryOrderPoint {
    /// `K_{i tau}` is even in `tau`, so the order is stored as `|tau|`.
    pub fn new(tau: f64, x: f64) -> Result<Self> {
        check_positive(x)?;
        if !tau.is_finite() {
            return Err(Error::Domain(format!("order tau = {tau} is not finite")));
        }
        Ok(Self { tau: tau.abs(), x })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn x(&self) -> f64 {
        self.x
    }
}

pub(crate) fn check_positive(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("argument x = {x} must be positive and finite")))
    }
}

pub(crate) fn check_index(n: u32) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::Domain("index n must be at least 1".into()))
    }
}

/// Upper bound on `K_0(t)`; used only to scale inner tolerances.
pub(crate) fn k0_envelope(t: f64) -> f64 {
    let near = (2.0 / t).ln() + 1.0;
    let far = (PI / (2.0 * t)).sqrt() * (-t).exp();
    if t < 1.0 {
        near.min(far)
    } else {
        far
    }
}

/// Config for `K_{i tau}(t)` evaluated inside another integral. The absolute
/// tolerance never drops below what the `L1` norm of the integrand allows.
pub(crate) fn inner_k_cfg(outer: &QuadratureConfig, t: f64) -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: (0.1 * outer.abs_tol).max(1e-13 * k0_envelope(t)),
        rel_tol: (0.1 * outer.rel_tol).max(1e-14),
        ..*outer
    }
}

/// Config for positive integrands (`K_0`, the Struve integrals) evaluated
/// inside another integral: purely relative.
pub(crate) fn inner_positive_cfg(outer: &QuadratureConfig) -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: f64::MIN_POSITIVE,
        rel_tol: (0.01 * outer.rel_tol).clamp(1e-13, 1e-10),
        ..*outer
    }
}

// ---------------------------------------------------------------------------
// Macdonald functions

pub fn macdonald_k0_result(x: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    check_positive(x)?;
    integrate_semi_infinite(|u| (-x * u.cosh()).exp(), 0.0, cfg)
}

/// `K_0(x) = int_0^inf exp(-x cosh u) du`.
pub fn macdonald_k0(x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    macdonald_k0_result(x, cfg)?.into_value()
}

pub fn macdonald_k_imag_result(tau: f64, x: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    let p = ImaginaryOrderPoint::new(tau, x)?;
    if p.tau == 0.0 {
        return macdonald_k0_result(x, cfg);
    }
    let tau = p.tau;
    integrate_semi_infinite(|u| (-x * u.cosh()).exp() * (tau * u).cos(), 0.0, cfg)
}

/// `K_{i tau}(x) = int_0^inf exp(-x cosh u) cos(tau u) du`, real for real `x`.
/// Even in `tau`; identical to [`macdonald_k0`] at `tau = 0`.
pub fn macdonald_k_imag(tau: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    macdonald_k_imag_result(tau, x, cfg)?.into_value()
}

// ---------------------------------------------------------------------------
// Gamma and I_{i tau}

/// Lanczos coefficients, g = 7.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        series += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// `ln sin(pi z)` for `Im z >= 0`, without overflow for large `Im z`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    let w = PI * z;
    // sin w = exp(-i w) (1 - exp(2 i w)) / (-2 i), |exp(2 i w)| <= 1
    -i * w + (1.0 - (2.0 * i * w).exp()).ln() - (-2.0 * i).ln()
}

fn wrap_phase(im: f64) -> f64 {
    let mut r = im - 2.0 * PI * (im / (2.0 * PI)).round();
    if r <= -PI {
        r += 2.0 * PI;
    }
    r
}

/// Principal logarithm of `Gamma(z)`: the imaginary part lies in `(-pi, pi]`.
/// Lanczos approximation, with reflection for `Re z < 1/2`.
pub fn complex_log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("log-gamma argument {z} is not finite")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::PoleArgument(z.re));
    }
    if z.im < 0.0 {
        return Ok(complex_log_gamma(z.conj())?.conj());
    }
    let raw = if z.re < 0.5 {
        Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - lanczos_ln_gamma(1.0 - z)
    } else {
        lanczos_ln_gamma(z)
    };
    Ok(Complex64::new(raw.re, wrap_phase(raw.im)))
}

/// `Re I_{i tau}(x)` from `sum_k (x/2)^{2k + i tau} / (k! Gamma(k + 1 + i tau))`.
/// Since `I_{-i tau}(x)` is the conjugate of `I_{i tau}(x)` for real `x`,
/// `I_{i tau} + I_{-i tau} = 2 Re I_{i tau}`.
pub fn bessel_i_imag_re(tau: f64, x: f64) -> Result<f64> {
    let p = ImaginaryOrderPoint::new(tau, x)?;
    let (tau, x) = (p.tau, p.x);
    if x > SERIES_X_MAX || tau > SERIES_TAU_MAX {
        return Err(Error::SeriesRangeExceeded { tau, x });
    }
    let h = 0.5 * x;
    let lg = complex_log_gamma(Complex64::new(1.0, tau))?;
    let mut term = (Complex64::new(0.0, tau * h.ln()) - lg).exp();
    let mut sum = term;
    let q = h * h;
    for k in 1..=SERIES_TERM_CAP {
        let kf = k as f64;
        term *= q / (kf * Complex64::new(kf, tau));
        sum += term;
        if term.norm() < 1e-16 * sum.norm() {
            return Ok(sum.re);
        }
    }
    Err(Error::SeriesRangeExceeded { tau, x })
}

// ---------------------------------------------------------------------------
// Composite kernels
//
// The transform kernels are the Abel integrals of K_{in}:
//   E_P(n, x) = int_0^x K_{in}(t) / sqrt(x^2 - t^2) dt,
//   E_S(n, x) = int_x^inf K_{in}(t) / sqrt(t^2 - x^2) dt.
// Their closed forms live at half the argument:
//   E_P(n, x) = P_n(x / 2) / 2,  P_n(y) = pi / (2 cosh(pi n/2)) K_{in/2}(y) [I_{in/2}(y) + I_{-in/2}(y)],
//   E_S(n, x) = S_n(x / 2),      S_n(y) = K_{in/2}(y)^2 / 2.

/// Whether `P_n(x)` is inside the validated range of the ascending series.
pub fn in_series_window(n: u32, x: f64) -> bool {
    x <= SERIES_X_MAX && 0.5 * f64::from(n) <= SERIES_TAU_MAX
}

/// `P_n(x) = pi / (2 cosh(pi n/2)) K_{in/2}(x) [I_{in/2}(x) + I_{-in/2}(x)]`,
/// from the ascending series for `Re I_{in/2}`.
pub fn product_kernel_closed_result(n: u32, x: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    check_index(n)?;
    let tau = 0.5 * f64::from(n);
    let re_i = bessel_i_imag_re(tau, x)?;
    let k = macdonald_k_imag_result(tau, x, cfg)?;
    let scale = PI / (PI * tau).cosh() * re_i;
    Ok(QuadratureResult {
        value: scale * k.value,
        error_estimate: scale.abs() * k.error_estimate,
        ..k
    })
}

pub fn product_kernel_closed(n: u32, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    product_kernel_closed_result(n, x, cfg)?.into_value()
}

/// `E_P(n, x)` by Abel quadrature of `K_{in}`.
pub fn product_kernel_abel(n: u32, x: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    check_index(n)?;
    check_positive(x)?;
    let order = f64::from(n);
    try_integrate_abel_lower(|t| macdonald_k_imag(order, t, &inner_k_cfg(cfg, t)), x, cfg)
}

/// Kernel of the product-family transforms, `E_P(n, x) = P_n(x/2) / 2`.
/// Uses the closed form inside the series window and Abel quadrature beyond.
pub fn product_kernel_result(n: u32, x: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    check_index(n)?;
    check_positive(x)?;
    if !in_series_window(n, 0.5 * x) {
        return product_kernel_abel(n, x, cfg);
    }
    let r = product_kernel_closed_result(n, 0.5 * x, cfg)?;
    Ok(QuadratureResult {
        value: 0.5 * r.value,
        error_estimate: 0.5 * r.error_estimate,
        ..r
    })
}

pub fn product_kernel(n: u32, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    product_kernel_result(n, x, cfg)?.into_value()
}

/// `S_n(x) = K_{in/2}(x)^2 / 2`, with the error estimate carried through the square.
pub fn squared_kernel_closed_result(n: u32, x: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    check_index(n)?;
    let k = macdonald_k_imag_result(0.5 * f64::from(n), x, cfg)?;
    Ok(QuadratureResult {
        value: 0.5 * k.value * k.value,
        error_estimate: k.value.abs() * k.error_estimate + 0.5 * k.error_estimate * k.error_estimate,
        ..k
    })
}

pub fn squared_kernel_closed(n: u32, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    squared_kernel_closed_result(n, x, cfg)?.into_value()
}

/// `E_S(n, x)` by Abel quadrature of `K_{in}`.
pub fn squared_kernel_abel(n: u32, x: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    check_index(n)?;
    check_positive(x)?;
    let order = f64::from(n);
    try_integrate_abel_upper(|t| macdonald_k_imag(order, t, &inner_k_cfg(cfg, t)), x, cfg)
}

/// Kernel of the squared-family transforms, `E_S(n, x) = K_{in/2}(x/2)^2 / 2`.
pub fn squared_kernel_result(n: u32, x: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    check_positive(x)?;
    squared_kernel_closed_result(n, 0.5 * x, cfg)
}

/// Non-negative for every `n` and `x`.
pub fn squared_kernel(n: u32, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    squared_kernel_result(n, x, cfg)?.into_value()
}

// ---------------------------------------------------------------------------
// Modified Struve function

fn check_struve_arg(z: f64) -> Result<()> {
    if z >= 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("Struve argument z = {z} must be non-negative")))
    }
}

/// `M_0(z) = L_0(z) - I_0(z) = -(2/pi) int_0^{pi/2} exp(-z cos(theta)) dtheta`.
pub fn struve_m0(z: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_struve_arg(z)?;
    if z == 0.0 {
        return Ok(-1.0);
    }
    let r = integrate_finite(|th| (-z * th.cos()).exp(), 0.0, 0.5 * PI, cfg)?;
    Ok(-FRAC_2_PI * r.into_value()?)
}

/// `2/pi + z M_0(z)`, the bracket of the squared-family kernels.
///
/// Written as `(2/pi) [exp(-z) - z int_0^{pi/2} exp(-z cos(theta)) (1 - sin(theta)) dtheta]`,
/// which avoids the cancellation between `2/pi` and `z M_0(z) ~ -2/pi` at
/// large `z` (the bracket decays like `-2 / (pi z^2)`).
pub fn struve_bracket(z: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_struve_arg(z)?;
    if z == 0.0 {
        return Ok(FRAC_2_PI);
    }
    let r = integrate_finite(|th| (-z * th.cos()).exp() * (1.0 - th.sin()), 0.0, 0.5 * PI, cfg)?;
    Ok(FRAC_2_PI * ((-z).exp() - z * r.into_value()?))
}
