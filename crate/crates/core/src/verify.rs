//! Verification suites: the closed-form identities, biorthogonality, the
//! round-trip chains and the bounds, each reported as pass/fail with the
//! measured error.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{
    k0_halfline_projection, k0_halfline_projection_closed, laplace_macdonald_closed, laplace_macdonald_numeric,
    struve_abel_projection, struve_abel_projection_closed,
};
use crate::quadrature::QuadratureConfig;
use crate::special_functions::{
    macdonald_k0, macdonald_k_imag, product_kernel_abel, product_kernel_closed, squared_kernel, squared_kernel_abel,
    squared_kernel_closed, struve_bracket, struve_m0, KernelFamily,
};
use crate::transforms::{
    analyze_many, build_f_from_profile, coefficients_from_profile, forward_many, invert, synthesize,
    CoefficientSequence, PeriodicProfile,
};

pub const REPORT_VERSION: u32 = 1;

/// Largest `|K_{i tau}(x)| x^{1/4} sqrt(sinh(pi tau))` over the Lebedev lattice,
/// recorded from this implementation and cross-checked with an independent
/// high-precision evaluation.
pub const LEBEDEV_LATTICE_FIXTURE: f64 = 1.381_379_238_017_416;
/// Orders and arguments of the Lebedev lattice.
pub const LEBEDEV_TAUS: [f64; 10] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0];
pub const LEBEDEV_XS: [f64; 6] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Biorthogonality,
    Roundtrip,
    Bounds,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Biorthogonality => "biorthogonality",
            Suite::Roundtrip => "roundtrip",
            Suite::Bounds => "bounds",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "biorthogonality" => Ok(Suite::Biorthogonality),
            "roundtrip" => Ok(Suite::Roundtrip),
            "bounds" => Ok(Suite::Bounds),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidConfig(format!("unknown suite '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    /// Worst measured error (or statistic) over the check's lattice.
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Where the worst value occurred, or the error that stopped the check.
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub report_version: u32,
    pub suite: Suite,
    pub tolerances: Tolerances,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Tracks the worst error over a lattice.
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Self {
            value: 0.0,
            at: String::new(),
        }
    }

    fn update(&mut self, e: f64, at: impl FnOnce() -> String) {
        if e > self.value || e.is_nan() {
            self.value = e;
            self.at = at();
        }
    }
}

fn check(suite: Suite, name: &str, threshold: f64, run: impl FnOnce() -> Result<Worst>) -> Check {
    let (measured, detail) = match run() {
        Ok(w) => (w.value, w.at),
        Err(e) => (f64::INFINITY, e.to_string()),
    };
    Check {
        suite: suite.name().into(),
        name: name.into(),
        measured,
        threshold,
        passed: measured <= threshold,
        detail,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Relative error against `threshold`, switching to an absolute `floor` for
/// values below `floor / threshold`.
fn rel_floor(a: f64, b: f64, threshold: f64, floor: f64) -> f64 {
    (a - b).abs() / b.abs().max(floor / threshold)
}

/// Tolerances for the Laplace-Macdonald lattice, whose closed side is as small as 1e-8.
pub fn laplace_cfg(cfg: &QuadratureConfig) -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: cfg.abs_tol.min(1e-15),
        rel_tol: cfg.rel_tol.min(1e-12),
        ..*cfg
    }
}

pub fn identity_checks(cfg: &QuadratureConfig) -> Vec<Check> {
    let s = Suite::Identities;
    let mut out = Vec::new();
    out.push(check(s, "laplace_macdonald", 1e-8, || {
        let tight = laplace_cfg(cfg);
        let mut w = Worst::new();
        for n in 1..=5 {
            for u in [0.25, 0.5, 1.0, 2.0, 3.0] {
                let closed = laplace_macdonald_closed(n, u)?;
                let numeric = laplace_macdonald_numeric(n, u, &tight)?.value;
                w.update(rel(numeric, closed), || format!("n={n} u={u}"));
            }
        }
        Ok(w)
    }));
    out.push(check(s, "erdelyi_kober_squared_as_printed", 1e-7, || {
        let mut w = Worst::new();
        for n in 1..=6 {
            for x in [0.5, 1.0, 2.0, 4.0] {
                let lhs = squared_kernel_closed(n, x, cfg)?;
                let rhs = squared_kernel_abel(n, x, cfg)?.value;
                w.update(rel(rhs, lhs), || format!("n={n} x={x}"));
            }
        }
        Ok(w)
    }));
    out.push(check(s, "erdelyi_kober_squared_doubled_argument", 1e-7, || {
        let mut w = Worst::new();
        for n in 1..=6 {
            for x in [0.5, 1.0, 2.0, 4.0] {
                let lhs = squared_kernel_closed(n, x, cfg)?;
                let rhs = squared_kernel_abel(n, 2.0 * x, cfg)?.value;
                w.update(rel(rhs, lhs), || format!("n={n} x={x}"));
            }
        }
        Ok(w)
    }));
    out.push(check(s, "erdelyi_kober_product_as_printed", 1e-6, || {
        let mut w = Worst::new();
        for n in 1..=4 {
            for x in [0.5, 1.0, 2.0] {
                let lhs = product_kernel_closed(n, x, cfg)?;
                let rhs = product_kernel_abel(n, x, cfg)?.value;
                w.update(rel(rhs, lhs), || format!("n={n} x={x}"));
            }
        }
        Ok(w)
    }));
    out.push(check(s, "erdelyi_kober_product_doubled_argument", 1e-6, || {
        let mut w = Worst::new();
        for n in 1..=4 {
            for x in [0.5, 1.0, 2.0] {
                let lhs = product_kernel_closed(n, x, cfg)?;
                let rhs = 2.0 * product_kernel_abel(n, 2.0 * x, cfg)?.value;
                w.update(rel(rhs, lhs), || format!("n={n} x={x}"));
            }
        }
        Ok(w)
    }));
    out.push(check(s, "k0_halfline_projection", 1e-7, || {
        let mut w = Worst::new();
        for t in [0.5, 1.0, 2.0, 4.0] {
            for u in [0.0, 0.5, 1.0, 2.0] {
                let closed = k0_halfline_projection_closed(t, u);
                let numeric = k0_halfline_projection(t, u, cfg)?.value;
                w.update(rel_floor(numeric, closed, 1e-7, 1e-12), || format!("t={t} u={u}"));
            }
        }
        Ok(w)
    }));
    out.push(check(s, "struve_abel_projection", 1e-7, || {
        let mut w = Worst::new();
        for t in [0.5, 1.0, 2.0, 4.0] {
            for u in [0.0, 0.5, 1.0, 2.0] {
                let closed = struve_abel_projection_closed(t, u);
                let numeric = struve_abel_projection(t, u, cfg)?.value;
                w.update(rel_floor(numeric, closed, 1e-7, 1e-12), || format!("t={t} u={u}"));
            }
        }
        Ok(w)
    }));
    out
}

/// Entries of `analyze(synthesize(e_m))_n` for `n, m = 1..=size`, row `m`.
pub fn biorthogonality_matrix(family: KernelFamily, size: u32, cfg: &QuadratureConfig) -> Result<Vec<Vec<f64>>> {
    let ns: Vec<u32> = (1..=size).collect();
    let mut rows = Vec::with_capacity(ns.len());
    for m in &ns {
        let c = CoefficientSequence::single_mode(family, *m, 1.0)?;
        let rs = analyze_many(family, |x| synthesize(&c, x, cfg), &ns, cfg)?;
        rows.push(rs.into_iter().map(|r| r.value).collect());
    }
    Ok(rows)
}

pub fn biorthogonality_checks(cfg: &QuadratureConfig) -> Vec<Check> {
    let s = Suite::Biorthogonality;
    [KernelFamily::ProductKernel, KernelFamily::SquaredKernel]
        .into_iter()
        .map(|family| {
            check(s, &format!("biorthogonality_{family}"), 1e-5, || {
                let rows = biorthogonality_matrix(family, 4, cfg)?;
                let mut w = Worst::new();
                for (i, row) in rows.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        let target = if i == j { 1.0 } else { 0.0 };
                        w.update((v - target).abs(), || format!("m={} n={}", i + 1, j + 1));
                    }
                }
                Ok(w)
            })
        })
        .collect()
}

fn sine_profile() -> PeriodicProfile {
    PeriodicProfile::new("sine[1]", 1.0, f64::sin).expect("positive Lipschitz bound")
}

pub fn roundtrip_checks(cfg: &QuadratureConfig) -> Vec<Check> {
    let s = Suite::Roundtrip;
    let mut out = Vec::new();
    let exact = PI * PI / PI.sinh();
    for family in [KernelFamily::ProductKernel, KernelFamily::SquaredKernel] {
        let f = |x: f64| build_f_from_profile(family, &sine_profile(), x, cfg);
        let forward = forward_many(family, f, &[1, 2, 3, 4, 5, 6, 7, 8], cfg);
        out.push(check(s, &format!("sine_leading_coefficient_{family}"), 1e-8, || {
            let rs = forward.clone()?;
            let mut w = Worst::new();
            w.update(rel(rs[0].value, exact), || "n=1".into());
            Ok(w)
        }));
        out.push(check(s, &format!("sine_higher_coefficients_{family}"), 1e-8, || {
            let rs = forward.clone()?;
            let mut w = Worst::new();
            for (i, r) in rs.iter().enumerate().take(5).skip(1) {
                w.update(r.value.abs(), || format!("n={}", i + 1));
            }
            Ok(w)
        }));
        out.push(check(s, &format!("sine_inversion_{family}"), 1e-4, || {
            let rs = forward.clone()?;
            let c = CoefficientSequence::new(family, rs.iter().map(|r| r.value).collect())?;
            let mut w = Worst::new();
            for x in [0.2, 0.5, 1.0, 2.0, 4.0] {
                let truth = f(x)?;
                let back = invert(&c, x, cfg)?.value;
                w.update(rel(back, truth), || format!("x={x}"));
            }
            Ok(w)
        }));
        out.push(check(s, &format!("forward_vs_formula_{family}"), 1e-6, || {
            let p = PeriodicProfile::sine_series(vec![1.0, 0.5])?;
            let ns = [1, 2, 3, 4];
            let rs = forward_many(family, |x| build_f_from_profile(family, &p, x, cfg), &ns, cfg)?;
            let c = coefficients_from_profile(&p, family, 4, cfg)?;
            let mut w = Worst::new();
            for (n, r) in ns.iter().zip(rs) {
                w.update((r.value - c.get(*n)).abs(), || format!("n={n}"));
            }
            Ok(w)
        }));
    }
    out
}

/// `max |K_{i tau}(x)| x^{1/4} sqrt(sinh(pi tau))` over the Lebedev lattice.
pub fn lebedev_lattice_statistic(cfg: &QuadratureConfig) -> Result<(f64, f64, f64)> {
    let mut best = (0.0, 0.0, 0.0);
    for tau in LEBEDEV_TAUS {
        for x in LEBEDEV_XS {
            let k = macdonald_k_imag(tau, x, cfg)?;
            let v = k.abs() * x.powf(0.25) * (PI * tau).sinh().sqrt();
            if v > best.0 {
                best = (v, tau, x);
            }
        }
    }
    Ok(best)
}

pub fn bound_checks(cfg: &QuadratureConfig, seed: u64) -> Vec<Check> {
    let s = Suite::Bounds;
    let mut out = Vec::new();
    out.push(check(s, "lebedev_lattice_vs_fixture", 0.01, || {
        let (v, tau, x) = lebedev_lattice_statistic(cfg)?;
        let mut w = Worst::new();
        w.update(
            ((v - LEBEDEV_LATTICE_FIXTURE) / LEBEDEV_LATTICE_FIXTURE).max(0.0),
            || format!("statistic {v} at tau={tau} x={x}"),
        );
        Ok(w)
    }));
    out.push(check(s, "k0_large_argument", 0.01, || {
        let scaled = macdonald_k0(50.0, cfg)? * 50f64.exp() * (100.0 / PI).sqrt();
        let mut w = Worst::new();
        w.update((scaled - 1.0).abs(), || format!("scaled value {scaled}"));
        Ok(w)
    }));
    out.push(check(s, "k0_log_singularity", 0.1, || {
        let ratio = macdonald_k0(1e-6, cfg)? / -(1e-6f64.ln());
        let mut w = Worst::new();
        w.update((ratio - 1.0).abs(), || format!("ratio {ratio}"));
        Ok(w)
    }));
    out.push(check(s, "squared_kernel_nonnegative", 0.0, || {
        let mut w = Worst::new();
        for n in 1..=6 {
            for x in [0.5, 1.0, 2.0, 4.0, 8.0] {
                let v = squared_kernel(n, x, cfg)?;
                w.update((-v).max(0.0), || format!("n={n} x={x}"));
            }
        }
        Ok(w)
    }));
    out.push(check(s, "squared_kernel_nonnegative_random", 0.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = Worst::new();
        for _ in 0..16 {
            let n = rng.gen_range(1..=8u32);
            let x: f64 = rng.gen_range(0.05..10.0);
            let v = squared_kernel(n, x, cfg)?;
            w.update((-v).max(0.0), || format!("n={n} x={x}"));
        }
        Ok(w)
    }));
    out.push(check(s, "struve_bracket_bound_random", 0.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let mut w = Worst::new();
        for _ in 0..16 {
            let z: f64 = rng.gen_range(0.0..100.0);
            let b = struve_bracket(z, cfg)?;
            w.update((b.abs() - (2.0 / PI + z)).max(0.0), || format!("z={z}"));
        }
        Ok(w)
    }));
    out.push(check(s, "struve_m0_bounded", 1.0, || {
        let mut w = Worst::new();
        for z in [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0] {
            let m = struve_m0(z, cfg)?;
            w.update(m.abs(), || format!("z={z}"));
        }
        Ok(w)
    }));
    out
}

/// `seed` drives the randomized points of the bounds suite.
pub fn run_suite(suite: Suite, cfg: &QuadratureConfig, seed: u64) -> Result<VerificationReport> {
    cfg.validate()?;
    let mut checks = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        checks.extend(identity_checks(cfg));
    }
    if matches!(suite, Suite::Biorthogonality | Suite::All) {
        checks.extend(biorthogonality_checks(cfg));
    }
    if matches!(suite, Suite::Roundtrip | Suite::All) {
        checks.extend(roundtrip_checks(cfg));
    }
    if matches!(suite, Suite::Bounds | Suite::All) {
        checks.extend(bound_checks(cfg, seed));
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        report_version: REPORT_VERSION,
        suite,
        tolerances: Tolerances {
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
        },
        checks,
        passed,
    })
}
