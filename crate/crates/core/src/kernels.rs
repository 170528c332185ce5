//! Inversion kernels `Phi_n`, `Psi_n` and the closed-form projections behind
//! the inversion theorems.
//!
//! ```text
//! Phi_n(x) = x   int_{-pi}^{pi} K_0(x cosh u) sinh(2u) sin(n u) du
//! Psi_n(x) =     int_{-pi}^{pi} [2/pi + x cosh(u) M_0(x cosh u)] sinh(u) sin(n u) du
//! ```
//!
//! Both integrands are even in `u`, so only `[0, pi]` is integrated.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quadrature::{
    try_integrate_abel_lower, try_integrate_abel_upper, try_integrate_periodic_oscillatory,
    try_integrate_periodic_oscillatory_many, try_integrate_semi_infinite, Parity, QuadratureConfig, QuadratureResult,
};
use crate::special_functions::{
    check_index, check_positive, inner_k_cfg, inner_positive_cfg, macdonald_k0, macdonald_k_imag, struve_bracket,
};

/// Below this `|u|`, `sin(n u) / sinh(u)` is taken from its Taylor expansion.
const SMALL_U: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelEvaluation {
    pub n: u32,
    pub x: f64,
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl KernelEvaluation {
    pub fn from_result(n: u32, x: f64, r: QuadratureResult) -> Self {
        Self {
            n,
            x,
            value: r.value,
            error_estimate: r.error_estimate,
            evaluations: r.evaluations,
            converged: r.converged,
        }
    }

    fn scaled(mut self, s: f64) -> Self {
        self.value *= s;
        self.error_estimate *= s.abs();
        self
    }
}

/// The non-oscillatory factor of `Phi_n(x) / x`: `K_0(x cosh u) sinh(2u)`. Odd in `u`.
pub fn phi_integrand(x: f64, u: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(macdonald_k0(x * u.cosh(), &inner_positive_cfg(cfg))? * (2.0 * u).sinh())
}

/// The non-oscillatory factor of `Psi_n(x)`: `[2/pi + x cosh(u) M_0(x cosh u)] sinh(u)`. Odd in `u`.
pub fn psi_integrand(x: f64, u: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(struve_bracket(x * u.cosh(), &inner_positive_cfg(cfg))? * u.sinh())
}

pub fn phi_kernel(n: u32, x: f64, cfg: &QuadratureConfig) -> Result<KernelEvaluation> {
    phi_kernel_with(n, x, Parity::Odd, cfg)
}

/// `Phi_n(x)` integrated over the full range `[-pi, pi]` without using parity.
pub fn phi_kernel_full_range(n: u32, x: f64, cfg: &QuadratureConfig) -> Result<KernelEvaluation> {
    phi_kernel_with(n, x, Parity::None, cfg)
}

fn phi_kernel_with(n: u32, x: f64, parity: Parity, cfg: &QuadratureConfig) -> Result<KernelEvaluation> {
    check_index(n)?;
    check_positive(x)?;
    let r = try_integrate_periodic_oscillatory(|u| phi_integrand(x, u, cfg), n, parity, cfg)?;
    Ok(KernelEvaluation::from_result(n, x, r).scaled(x))
}

/// `Phi_n(x)` for every `n` in `ns`, sharing the `K_0` evaluations.
pub fn phi_kernel_many(ns: &[u32], x: f64, cfg: &QuadratureConfig) -> Result<Vec<KernelEvaluation>> {
    ns.iter().try_for_each(|n| check_index(*n))?;
    check_positive(x)?;
    let rs = try_integrate_periodic_oscillatory_many(|u| phi_integrand(x, u, cfg), ns, Parity::Odd, cfg)?;
    Ok(ns
        .iter()
        .zip(rs)
        .map(|(n, r)| KernelEvaluation::from_result(*n, x, r).scaled(x))
        .collect())
}

pub fn psi_kernel(n: u32, x: f64, cfg: &QuadratureConfig) -> Result<KernelEvaluation> {
    psi_kernel_with(n, x, Parity::Odd, cfg)
}

pub fn psi_kernel_full_range(n: u32, x: f64, cfg: &QuadratureConfig) -> Result<KernelEvaluation> {
    psi_kernel_with(n, x, Parity::None, cfg)
}

fn psi_kernel_with(n: u32, x: f64, parity: Parity, cfg: &QuadratureConfig) -> Result<KernelEvaluation> {
    check_index(n)?;
    check_positive(x)?;
    let r = try_integrate_periodic_oscillatory(|u| psi_integrand(x, u, cfg), n, parity, cfg)?;
    Ok(KernelEvaluation::from_result(n, x, r))
}

pub fn psi_kernel_many(ns: &[u32], x: f64, cfg: &QuadratureConfig) -> Result<Vec<KernelEvaluation>> {
    ns.iter().try_for_each(|n| check_index(*n))?;
    check_positive(x)?;
    let rs = try_integrate_periodic_oscillatory_many(|u| psi_integrand(x, u, cfg), ns, Parity::Odd, cfg)?;
    Ok(ns
        .iter()
        .zip(rs)
        .map(|(n, r)| KernelEvaluation::from_result(*n, x, r))
        .collect())
}

/// `int_0^inf exp(-x cosh u) K_{in}(x) dx = pi sin(n u) / (sinh(u) sinh(pi n))`.
/// At `u = 0` the limit `pi n / sinh(pi n)` is returned.
pub fn laplace_macdonald_closed(n: u32, u: f64) -> Result<f64> {
    check_index(n)?;
    let nf = f64::from(n);
    let ratio = if u.abs() < SMALL_U {
        // sin(nu)/sinh(u) = n [1 - (n^2 + 1) u^2 / 6 + O(u^4)]
        nf * (1.0 - (nf * nf + 1.0) * u * u / 6.0)
    } else {
        (nf * u).sin() / u.sinh()
    };
    Ok(PI * ratio / (PI * nf).sinh())
}

pub fn laplace_macdonald_numeric(n: u32, u: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    check_index(n)?;
    let (order, c) = (f64::from(n), u.cosh());
    try_integrate_semi_infinite(
        |x| {
            if x == 0.0 {
                return Ok(0.0);
            }
            Ok((-x * c).exp() * macdonald_k_imag(order, x, &inner_k_cfg(cfg, x))?)
        },
        0.0,
        cfg,
    )
}

/// `pi exp(-t cosh u) / (2 cosh u)`.
pub fn k0_halfline_projection_closed(t: f64, u: f64) -> f64 {
    let c = u.cosh();
    PI * (-t * c).exp() / (2.0 * c)
}

/// `int_t^inf x K_0(x cosh u) / sqrt(x^2 - t^2) dx` by Abel quadrature.
pub fn k0_halfline_projection(t: f64, u: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    check_positive(t)?;
    let c = u.cosh();
    let inner = inner_positive_cfg(cfg);
    try_integrate_abel_upper(|x| Ok(x * macdonald_k0(x * c, &inner)?), t, cfg)
}

/// `exp(-t cosh u)`.
pub fn struve_abel_projection_closed(t: f64, u: f64) -> f64 {
    (-t * u.cosh()).exp()
}

/// `int_0^t [2/pi + x cosh(u) M_0(x cosh u)] / sqrt(t^2 - x^2) dx` by Abel quadrature.
pub fn struve_abel_projection(t: f64, u: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    check_positive(t)?;
    let c = u.cosh();
    let inner = inner_positive_cfg(cfg);
    try_integrate_abel_lower(|x| struve_bracket(x * c, &inner), t, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn laplace_closed_limits() {
        let at0 = laplace_macdonald_closed(1, 0.0).unwrap();
        assert_relative_eq!(at0, PI / PI.sinh(), max_relative = 1e-15);
        let near = laplace_macdonald_closed(1, 1e-6).unwrap();
        assert_relative_eq!(near, at0, max_relative = 1e-11);
        let edge_lo = laplace_macdonald_closed(3, 0.99e-4).unwrap();
        let edge_hi = laplace_macdonald_closed(3, 1.01e-4).unwrap();
        assert_relative_eq!(edge_lo, edge_hi, max_relative = 1e-8);
        assert!(laplace_macdonald_closed(3, PI).unwrap().abs() < 1e-15);
        let v = laplace_macdonald_closed(1, 1.0).unwrap();
        assert_relative_eq!(v, PI * 1f64.sin() / (1f64.sinh() * PI.sinh()), max_relative = 1e-15);
    }

    #[test]
    fn projections_match_closed_forms() {
        let k = k0_halfline_projection(1.0, 0.0, &cfg()).unwrap().value;
        assert_relative_eq!(k, PI * (-1f64).exp() / 2.0, max_relative = 1e-8);
        let s = struve_abel_projection(1.0, 0.0, &cfg()).unwrap().value;
        assert_relative_eq!(s, (-1f64).exp(), max_relative = 1e-8);
        let tiny = struve_abel_projection(1e-9, 0.0, &cfg()).unwrap().value;
        assert_relative_eq!(tiny, 1.0, max_relative = 1e-8);
    }

    #[test]
    fn integrands_are_odd() {
        for u in [0.3, 1.0, 2.5] {
            assert_eq!(
                phi_integrand(1.0, -u, &cfg()).unwrap(),
                -phi_integrand(1.0, u, &cfg()).unwrap()
            );
            assert_eq!(
                psi_integrand(1.0, -u, &cfg()).unwrap(),
                -psi_integrand(1.0, u, &cfg()).unwrap()
            );
        }
    }

    #[test]
    fn many_matches_single() {
        let ns = [1, 2, 3, 5];
        let phis = phi_kernel_many(&ns, 1.0, &cfg()).unwrap();
        let psis = psi_kernel_many(&ns, 1.0, &cfg()).unwrap();
        for (i, n) in ns.iter().enumerate() {
            let p = phi_kernel(*n, 1.0, &cfg()).unwrap();
            assert!((phis[i].value - p.value).abs() <= 1e-10 * p.value.abs().max(1.0));
            let q = psi_kernel(*n, 1.0, &cfg()).unwrap();
            assert!((psis[i].value - q.value).abs() <= 1e-10 * q.value.abs().max(1.0));
        }
    }
}
