//! The discrete transforms, their inversion series and the profile-generated
//! test functions.
//!
//! A 2π-periodic Lipschitz profile `psi` generates
//!
//! ```text
//! f_a(x) = (2x/pi) int_{-pi}^{pi} K_0(x cosh u) psi(u) sinh(u) cosh(u) du
//! f_b(x) =         int_{-pi}^{pi} psi(u) sinh(u) [2/pi + x cosh(u) M_0(x cosh u)] du
//! ```
//!
//! and for both, the forward transform returns
//! `a_n = pi / sinh(pi n) int_{-pi}^{pi} psi(u) sin(n u) du`.
//! Only the odd part of `psi` contributes.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{phi_kernel_many, psi_kernel_many};
use crate::quadrature::{
    integrate_partition_many, integrate_semi_infinite_many, try_integrate_finite,
    try_integrate_periodic_oscillatory_many, Parity, QuadratureConfig, QuadratureResult,
};
use crate::special_functions::{
    check_index, check_positive, inner_positive_cfg, macdonald_k0, product_kernel, squared_kernel, struve_bracket,
    KernelFamily,
};

/// Inversion series warn when the last retained term exceeds this fraction of the sum.
pub const TAIL_WARNING_RATIO: f64 = 1e-6;
/// Outer integrals over `(0, inf)` are split here.
const SPLIT_POINT: f64 = 1.0;

// ---------------------------------------------------------------------------
// Profiles

type ProfileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A 2π-periodic generator `psi` with a Lipschitz constant.
#[derive(Clone)]
pub struct PeriodicProfile {
    psi: ProfileFn,
    lipschitz_bound: f64,
    label: String,
}

impl fmt::Debug for PeriodicProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicProfile")
            .field("label", &self.label)
            .field("lipschitz_bound", &self.lipschitz_bound)
            .finish()
    }
}

/// Reduces `u` to `[-pi, pi)`.
fn wrap(u: f64) -> f64 {
    u - 2.0 * PI * ((u + PI) / (2.0 * PI)).floor()
}

impl PeriodicProfile {
    /// `psi` must already be 2π-periodic.
    pub fn new<F>(label: impl Into<String>, lipschitz_bound: f64, psi: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(lipschitz_bound > 0.0 && lipschitz_bound.is_finite()) {
            return Err(Error::InvalidProfile(format!(
                "Lipschitz bound {lipschitz_bound} must be positive and finite"
            )));
        }
        Ok(Self {
            psi: Arc::new(psi),
            lipschitz_bound,
            label: label.into(),
        })
    }

    pub fn zero() -> Self {
        Self {
            psi: Arc::new(|_| 0.0),
            lipschitz_bound: f64::MIN_POSITIVE,
            label: "zero".into(),
        }
    }

    /// `psi(u) = sum_k b_k sin(k u)`, `k = 1, 2, ...`.
    pub fn sine_series(coefficients: Vec<f64>) -> Result<Self> {
        Self::trig_series("sine", coefficients, f64::sin)
    }

    /// `psi(u) = sum_k c_k cos(k u)`, `k = 1, 2, ...`.
    pub fn cosine_series(coefficients: Vec<f64>) -> Result<Self> {
        Self::trig_series("cosine", coefficients, f64::cos)
    }

    fn trig_series(kind: &str, coefficients: Vec<f64>, basis: fn(f64) -> f64) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidProfile(format!("{kind} coefficients must be finite")));
        }
        let bound: f64 = coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| (k + 1) as f64 * c.abs())
            .sum();
        let label = format!(
            "{kind}[{}]",
            coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        );
        let psi = move |u: f64| {
            coefficients
                .iter()
                .enumerate()
                .map(|(k, c)| c * basis((k + 1) as f64 * u))
                .sum()
        };
        if bound == 0.0 {
            return Ok(Self {
                psi: Arc::new(psi),
                lipschitz_bound: f64::MIN_POSITIVE,
                label,
            });
        }
        Self::new(label, bound, psi)
    }

    /// `psi(u) = u` on `[-pi, pi)`, extended periodically. Jumps at odd multiples of `pi`.
    pub fn sawtooth() -> Self {
        Self {
            psi: Arc::new(wrap),
            lipschitz_bound: 1.0,
            label: "sawtooth".into(),
        }
    }

    /// Piecewise-linear interpolant of samples spanning `[-pi, pi]`, extended
    /// periodically. The Lipschitz bound is the largest sample slope.
    pub fn sampled(us: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidProfile(m));
        if us.len() != values.len() {
            return bad(format!("{} abscissae but {} values", us.len(), values.len()));
        }
        if us.len() < 8 {
            return bad(format!("need at least 8 samples, got {}", us.len()));
        }
        if us.iter().chain(&values).any(|v| !v.is_finite()) {
            return bad("samples must be finite".into());
        }
        if us.windows(2).any(|w| w[1] <= w[0]) {
            return bad("sample abscissae must be strictly increasing".into());
        }
        let span = 1e-9;
        if us[0] > -PI + span || us[us.len() - 1] < PI - span || us[0] < -PI - span || us[us.len() - 1] > PI + span {
            return bad(format!(
                "samples must span [-pi, pi], got [{}, {}]",
                us[0],
                us[us.len() - 1]
            ));
        }
        let slope = us
            .windows(2)
            .zip(values.windows(2))
            .map(|(u, v)| ((v[1] - v[0]) / (u[1] - u[0])).abs())
            .fold(0.0, f64::max);
        let label = format!("sampled[{}]", us.len());
        let psi = move |u: f64| {
            let w = wrap(u).clamp(us[0], us[us.len() - 1]);
            let i = us.partition_point(|s| *s <= w).clamp(1, us.len() - 1);
            let (u0, u1) = (us[i - 1], us[i]);
            let t = (w - u0) / (u1 - u0);
            values[i - 1] + t * (values[i] - values[i - 1])
        };
        Ok(Self {
            psi: Arc::new(psi),
            lipschitz_bound: slope.max(f64::MIN_POSITIVE),
            label,
        })
    }

    pub fn psi(&self, u: f64) -> f64 {
        (self.psi)(u)
    }

    /// `phi(u) = psi(u) sinh(u)`.
    pub fn phi(&self, u: f64) -> f64 {
        self.psi(u) * u.sinh()
    }

    /// `(psi(u) - psi(-u)) / 2`.
    pub fn odd_part(&self, u: f64) -> f64 {
        0.5 * (self.psi(u) - self.psi(-u))
    }

    pub fn lipschitz_bound(&self) -> f64 {
        self.lipschitz_bound
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Checks the Lipschitz bound on `pairs` random pairs in `[-pi, pi]`.
    pub fn check_lipschitz(&self, pairs: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..pairs {
            let u: f64 = rng.gen_range(-PI..PI);
            let v: f64 = rng.gen_range(-PI..PI);
            let lhs = (self.psi(u) - self.psi(v)).abs();
            let rhs = self.lipschitz_bound * (u - v).abs() * (1.0 + 1e-9) + 1e-12;
            if lhs > rhs {
                return Err(Error::InvalidProfile(format!(
                    "{}: |psi({u}) - psi({v})| = {lhs:e} exceeds the Lipschitz bound",
                    self.label
                )));
            }
        }
        Ok(())
    }

    /// Checks `|psi(u + 2 pi) - psi(u)| <= 1e-12` on an interior grid.
    pub fn check_periodicity(&self) -> Result<()> {
        for k in 1..64 {
            let u = -PI + 2.0 * PI * k as f64 / 64.0;
            let d = (self.psi(u + 2.0 * PI) - self.psi(u)).abs();
            if d > 1e-12 {
                return Err(Error::InvalidProfile(format!(
                    "{}: not 2 pi periodic at u = {u} (difference {d:e})",
                    self.label
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Coefficient sequences

/// Coefficients `a_1 .. a_N` of one kernel family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSequence {
    family: KernelFamily,
    values: Vec<f64>,
}

/// Result of the summability probe on a coefficient prefix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummabilityProbe {
    /// `sum |a_n| e^{-pi n/2}` (product family) or `sum |a_n|` (squared family).
    pub weighted_sum: f64,
    pub last_weighted_terms: Vec<f64>,
    pub passes: bool,
}

impl CoefficientSequence {
    pub fn new(family: KernelFamily, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("coefficient sequence needs n_max >= 1".into()));
        }
        Ok(Self { family, values })
    }

    /// A sequence with a single non-zero coefficient `a_n = value`.
    pub fn single_mode(family: KernelFamily, n: u32, value: f64) -> Result<Self> {
        check_index(n)?;
        let mut values = vec![0.0; n as usize];
        values[n as usize - 1] = value;
        Self::new(family, values)
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_max(&self) -> u32 {
        self.values.len() as u32
    }

    /// `a_n`, or 0 beyond the stored prefix.
    pub fn get(&self, n: u32) -> f64 {
        n.checked_sub(1)
            .and_then(|i| self.values.get(i as usize))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn expect_family(&self, family: KernelFamily) -> Result<()> {
        if self.family == family {
            Ok(())
        } else {
            Err(Error::FamilyMismatch {
                expected: family.name(),
                found: self.family.name(),
            })
        }
    }

    fn weight(&self, n: u32) -> f64 {
        match self.family {
            KernelFamily::ProductKernel => (-0.5 * PI * f64::from(n)).exp(),
            KernelFamily::SquaredKernel => 1.0,
        }
    }

    /// The prefix fails when any coefficient is non-finite, or when the last
    /// three weighted terms are positive and non-decreasing.
    pub fn summability_probe(&self) -> SummabilityProbe {
        let terms: Vec<f64> = (1..=self.n_max()).map(|n| self.get(n).abs() * self.weight(n)).collect();
        let weighted_sum: f64 = terms.iter().sum();
        let tail: Vec<f64> = terms[terms.len().saturating_sub(3)..].to_vec();
        let growing = tail.len() == 3 && tail[0] > 0.0 && tail[1] >= tail[0] && tail[2] >= tail[1];
        let finite = self.values.iter().all(|v| v.is_finite());
        SummabilityProbe {
            weighted_sum,
            last_weighted_terms: tail,
            passes: finite && weighted_sum.is_finite() && !growing,
        }
    }

    fn check_summable(&self) -> Result<()> {
        let probe = self.summability_probe();
        if probe.passes {
            Ok(())
        } else {
            Err(Error::SummabilityViolation(format!(
                "{} coefficients: last weighted terms {:?}",
                self.family, probe.last_weighted_terms
            )))
        }
    }
}

// ---------------------------------------------------------------------------
// Reports

/// A partial sum of an inversion series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub error_estimate: f64,
    /// `|last retained term| / |sum|`.
    pub tail_ratio: f64,
    pub tail_warning: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub family: KernelFamily,
    pub profile: String,
    pub grid: Vec<f64>,
    pub truth: Vec<f64>,
    pub reconstructed: Vec<f64>,
    pub max_abs_error: f64,
    /// Pointwise `|error| / |truth|`; a point with zero truth counts only if its error is non-zero.
    pub max_rel_error: f64,
    pub terms_used: u32,
    pub tail_warning: bool,
}

impl ReconstructionReport {
    pub fn new(
        family: KernelFamily,
        profile: String,
        grid: Vec<f64>,
        truth: Vec<f64>,
        reconstructed: Vec<f64>,
        terms_used: u32,
        tail_warning: bool,
    ) -> Self {
        let (abs, rel) = error_norms(&truth, &reconstructed);
        Self {
            family,
            profile,
            grid,
            truth,
            reconstructed,
            max_abs_error: abs,
            max_rel_error: rel,
            terms_used,
            tail_warning,
        }
    }

    /// Recomputes both error norms from the stored vectors.
    pub fn is_consistent(&self) -> bool {
        let (abs, rel) = error_norms(&self.truth, &self.reconstructed);
        self.grid.len() == self.truth.len()
            && self.truth.len() == self.reconstructed.len()
            && abs == self.max_abs_error
            && rel == self.max_rel_error
    }
}

fn error_norms(truth: &[f64], reconstructed: &[f64]) -> (f64, f64) {
    let mut abs: f64 = 0.0;
    let mut rel: f64 = 0.0;
    for (t, r) in truth.iter().zip(reconstructed) {
        let e = (r - t).abs();
        abs = abs.max(e);
        if e > 0.0 {
            rel = rel.max(e / t.abs().max(f64::MIN_POSITIVE));
        }
    }
    (abs, rel)
}

// ---------------------------------------------------------------------------
// Profile-generated functions and exact coefficients

/// `f_a(x)` from the profile.
pub fn build_f_from_profile_a(p: &PeriodicProfile, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_positive(x)?;
    let inner = inner_positive_cfg(cfg);
    // (2x/pi) int_{-pi}^{pi} = (4x/pi) int_0^pi of the odd part
    let r = try_integrate_finite(
        |u| {
            let odd = p.odd_part(u);
            if odd == 0.0 {
                return Ok(0.0);
            }
            Ok(macdonald_k0(x * u.cosh(), &inner)? * odd * u.sinh() * u.cosh())
        },
        0.0,
        PI,
        cfg,
    )?;
    Ok(4.0 * x / PI * r.into_value()?)
}

/// `f_b(x)` from the profile.
pub fn build_f_from_profile_b(p: &PeriodicProfile, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_positive(x)?;
    let inner = inner_positive_cfg(cfg);
    let r = try_integrate_finite(
        |u| {
            let odd = p.odd_part(u);
            if odd == 0.0 {
                return Ok(0.0);
            }
            Ok(struve_bracket(x * u.cosh(), &inner)? * odd * u.sinh())
        },
        0.0,
        PI,
        cfg,
    )?;
    Ok(2.0 * r.into_value()?)
}

pub fn build_f_from_profile(family: KernelFamily, p: &PeriodicProfile, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    match family {
        KernelFamily::ProductKernel => build_f_from_profile_a(p, x, cfg),
        KernelFamily::SquaredKernel => build_f_from_profile_b(p, x, cfg),
    }
}

/// `a_n = pi / sinh(pi n) int_{-pi}^{pi} psi(u) sin(n u) du` for `n = 1..=n_max`.
pub fn coefficients_from_profile(
    p: &PeriodicProfile,
    family: KernelFamily,
    n_max: u32,
    cfg: &QuadratureConfig,
) -> Result<CoefficientSequence> {
    check_index(n_max)?;
    let ns: Vec<u32> = (1..=n_max).collect();
    let rs = try_integrate_periodic_oscillatory_many(|u| Ok(p.odd_part(u)), &ns, Parity::Odd, cfg)?;
    let mut values = Vec::with_capacity(ns.len());
    for (n, r) in ns.iter().zip(rs) {
        values.push(PI / (PI * f64::from(*n)).sinh() * r.into_value()?);
    }
    CoefficientSequence::new(family, values)
}

// ---------------------------------------------------------------------------
// Integrals over (0, inf)

/// `int_0^inf g(x) dx` for vector-valued `g`, split at `x = 1`.
fn integrate_half_line_many<F>(mut g: F, dim: usize, cfg: &QuadratureConfig) -> Result<Vec<QuadratureResult>>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    let near = integrate_partition_many(&mut g, dim, &[0.0, SPLIT_POINT], cfg)?;
    let far = integrate_semi_infinite_many(&mut g, dim, SPLIT_POINT, cfg)?;
    Ok(near
        .into_iter()
        .zip(far)
        .map(|(a, b)| {
            let value = a.value + b.value;
            let error_estimate = a.error_estimate + b.error_estimate;
            QuadratureResult {
                value,
                error_estimate,
                evaluations: a.evaluations + b.evaluations,
                converged: a.converged && b.converged && error_estimate <= cfg.target(value),
            }
        })
        .collect())
}

fn kernel(family: KernelFamily, n: u32, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    match family {
        KernelFamily::ProductKernel => product_kernel(n, x, cfg),
        KernelFamily::SquaredKernel => squared_kernel(n, x, cfg),
    }
}

/// `a_n = int_0^inf kernel(n, y) f(y) dy` for every `n` in `ns`, evaluating
/// `f` once per node.
pub fn forward_many<F>(family: KernelFamily, f: F, ns: &[u32], cfg: &QuadratureConfig) -> Result<Vec<QuadratureResult>>
where
    F: Fn(f64) -> Result<f64>,
{
    ns.iter().try_for_each(|n| check_index(*n))?;
    integrate_half_line_many(
        |y, out: &mut [f64]| {
            if y == 0.0 {
                out.fill(0.0);
                return Ok(());
            }
            let fy = f(y)?;
            for (o, n) in out.iter_mut().zip(ns) {
                *o = if fy == 0.0 {
                    0.0
                } else {
                    kernel(family, *n, y, cfg)? * fy
                };
            }
            Ok(())
        },
        ns.len(),
        cfg,
    )
}

pub fn forward_a<F>(f: F, n: u32, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    Ok(forward_many(KernelFamily::ProductKernel, f, &[n], cfg)?.remove(0))
}

pub fn forward_b<F>(f: F, n: u32, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    Ok(forward_many(KernelFamily::SquaredKernel, f, &[n], cfg)?.remove(0))
}

/// Inversion kernels `Phi_n(x)` or `Psi_n(x)` for every `n` in `ns`.
fn inversion_kernels(family: KernelFamily, ns: &[u32], x: f64, cfg: &QuadratureConfig) -> Result<Vec<(f64, f64)>> {
    let ks = match family {
        KernelFamily::ProductKernel => phi_kernel_many(ns, x, cfg)?,
        KernelFamily::SquaredKernel => psi_kernel_many(ns, x, cfg)?,
    };
    ks.into_iter()
        .map(|k| {
            if k.converged {
                Ok((k.value, k.error_estimate))
            } else {
                Err(Error::NonConvergence {
                    value: k.value,
                    error_estimate: k.error_estimate,
                    evaluations: k.evaluations,
                })
            }
        })
        .collect()
}

fn inversion_prefactor(family: KernelFamily) -> f64 {
    match family {
        KernelFamily::ProductKernel => PI.powi(3),
        KernelFamily::SquaredKernel => PI * PI,
    }
}

/// `sum_n sinh(pi n) K_n(x) a_n / pi^k` with `K = Phi, k = 3` or `K = Psi, k = 2`.
pub fn invert(c: &CoefficientSequence, x: f64, cfg: &QuadratureConfig) -> Result<SeriesValue> {
    check_positive(x)?;
    let family = c.family();
    let ns: Vec<u32> = (1..=c.n_max()).collect();
    let ks = inversion_kernels(family, &ns, x, cfg)?;
    let pre = inversion_prefactor(family);
    let mut value = 0.0;
    let mut error_estimate = 0.0;
    let mut last = 0.0;
    for (n, (k, e)) in ns.iter().zip(ks) {
        let a = c.get(*n);
        if a == 0.0 {
            last = 0.0;
            continue;
        }
        let w = (PI * f64::from(*n)).sinh() * a / pre;
        last = w * k;
        value += last;
        error_estimate += (w * e).abs();
    }
    let tail_ratio = if value != 0.0 {
        (last / value).abs()
    } else if last == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(SeriesValue {
        value,
        error_estimate,
        tail_ratio,
        tail_warning: tail_ratio > TAIL_WARNING_RATIO,
    })
}

pub fn invert_a(c: &CoefficientSequence, x: f64, cfg: &QuadratureConfig) -> Result<SeriesValue> {
    c.expect_family(KernelFamily::ProductKernel)?;
    invert(c, x, cfg)
}

pub fn invert_b(c: &CoefficientSequence, x: f64, cfg: &QuadratureConfig) -> Result<SeriesValue> {
    c.expect_family(KernelFamily::SquaredKernel)?;
    invert(c, x, cfg)
}

/// `sum_n a_n kernel(n, x)` over the stored prefix.
pub fn synthesize(c: &CoefficientSequence, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_positive(x)?;
    c.check_summable()?;
    let mut sum = 0.0;
    for n in 1..=c.n_max() {
        let a = c.get(n);
        if a != 0.0 {
            sum += a * kernel(c.family(), n, x, cfg)?;
        }
    }
    Ok(sum)
}

pub fn synthesize_a(c: &CoefficientSequence, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    c.expect_family(KernelFamily::ProductKernel)?;
    synthesize(c, x, cfg)
}

pub fn synthesize_b(c: &CoefficientSequence, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    c.expect_family(KernelFamily::SquaredKernel)?;
    synthesize(c, x, cfg)
}

/// `sinh(pi n) / pi^k int_0^inf K_n(x) f(x) dx` for every `n` in `ns`.
pub fn analyze_many<F>(family: KernelFamily, f: F, ns: &[u32], cfg: &QuadratureConfig) -> Result<Vec<QuadratureResult>>
where
    F: Fn(f64) -> Result<f64>,
{
    ns.iter().try_for_each(|n| check_index(*n))?;
    let rs = integrate_half_line_many(
        |x, out: &mut [f64]| {
            if x == 0.0 {
                out.fill(0.0);
                return Ok(());
            }
            let fx = f(x)?;
            if fx == 0.0 {
                out.fill(0.0);
                return Ok(());
            }
            for (o, (k, _)) in out.iter_mut().zip(inversion_kernels(family, ns, x, cfg)?) {
                *o = k * fx;
            }
            Ok(())
        },
        ns.len(),
        cfg,
    )?;
    let pre = inversion_prefactor(family);
    Ok(ns
        .iter()
        .zip(rs)
        .map(|(n, r)| {
            let s = (PI * f64::from(*n)).sinh() / pre;
            QuadratureResult {
                value: s * r.value,
                error_estimate: s * r.error_estimate,
                ..r
            }
        })
        .collect())
}

pub fn analyze_a<F>(f: F, n: u32, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    Ok(analyze_many(KernelFamily::ProductKernel, f, &[n], cfg)?.remove(0))
}

pub fn analyze_b<F>(f: F, n: u32, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    Ok(analyze_many(KernelFamily::SquaredKernel, f, &[n], cfg)?.remove(0))
}

/// Builds `f` from the profile, takes the exact coefficients and compares the
/// inversion series against `f` on `grid`.
pub fn roundtrip_report(
    p: &PeriodicProfile,
    family: KernelFamily,
    n_max: u32,
    grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ReconstructionReport> {
    if grid.is_empty() {
        return Err(Error::Domain("reconstruction grid is empty".into()));
    }
    grid.iter().try_for_each(|x| check_positive(*x))?;
    let c = coefficients_from_profile(p, family, n_max, cfg)?;
    let mut truth = Vec::with_capacity(grid.len());
    let mut reconstructed = Vec::with_capacity(grid.len());
    let mut tail_warning = false;
    for x in grid {
        truth.push(build_f_from_profile(family, p, *x, cfg)?);
        let s = invert(&c, *x, cfg)?;
        tail_warning |= s.tail_warning;
        reconstructed.push(s.value);
    }
    Ok(ReconstructionReport::new(
        family,
        p.label().to_string(),
        grid.to_vec(),
        truth,
        reconstructed,
        n_max,
        tail_warning,
    ))
}
