//! Adaptive Gauss-Kronrod quadrature.
//!
//! Every integral in the crate goes through one engine: the 15-point Gauss /
//! 31-point Kronrod pair with global bisection of the worst segment. The
//! integral shapes needed by the transforms are layered on top:
//!
//! - finite intervals,
//! - semi-infinite intervals with exponential-type decay (probed windows of
//!   doubling width, truncated once the tail is negligible),
//! - Abel-type weights `1/sqrt(x^2 - t^2)` and `1/sqrt(t^2 - x^2)`, removed by
//!   the substitutions `t = x sin(theta)` and `t = x cosh(v)`,
//! - `sin(n u)` weights on `[-pi, pi]`, split into panels at the zeros.
//!
//! Vector-valued ("many") variants integrate several integrands that share
//! one expensive factor on a common grid.
//!
//! All routines are pure functions of their arguments.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kronrod abscissae on [-1, 1], descending; `XGK[15]` is the centre.
/// Odd indices are the 15-point Gauss abscissae.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 16] = [
    0.998002298693397060285172840152271,
    0.987992518020485428489565718586613,
    0.967739075679139134257347978784337,
    0.937273392400705904307758947710209,
    0.897264532344081900882509656454496,
    0.848206583410427216200648320774217,
    0.790418501442465932967649294817947,
    0.724417731360170047416186054613938,
    0.650996741297416970533735895313275,
    0.570972172608538847537226737253911,
    0.485081863640239680693655740232351,
    0.394151347077563369897207370981045,
    0.299180007153168812166780024266389,
    0.201194093997434522300628303394596,
    0.101142066918717499027074231447392,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 16] = [
    0.005377479872923348987792051430128,
    0.015007947329316122538374763075807,
    0.025460847326715320186874001019654,
    0.035346360791375846222037948478360,
    0.044589751324764876608227299373280,
    0.053481524690928087265343147239430,
    0.062009567800670640285139230960803,
    0.069854121318728258709520077099147,
    0.076849680757720378894432777482659,
    0.083080502823133021038289247286104,
    0.088564443056211770647275443693774,
    0.093126598170825321225486872747346,
    0.096642726983623678505179907627589,
    0.099173598721791959332393173484603,
    0.100769845523875595044946662617570,
    0.101330007014791549017374792767492,
];

/// Gauss weights for `XGK[1], XGK[3], ..., XGK[13]`, then the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 8] = [
    0.030753241996117268354628393577204,
    0.070366047488108124709267416450667,
    0.107159220467171935011869546685869,
    0.139570677926154314447804794511028,
    0.166269205816993933553200860481209,
    0.186161000015562211026800561866423,
    0.198431485327111576456118326443839,
    0.202578241925561272880620199967519,
];

const NODES: usize = 31;

/// Probe windows for semi-infinite ranges double in width; give up after this many.
const MAX_PROBE_WINDOWS: usize = 64;
/// Decay is only judged once the probe has covered `[a, a + 255]`.
const DECAY_CHECK_AFTER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections performed after the initial partition.
    pub max_subdivisions: usize,
    pub max_evaluations: usize,
    /// Relative size below which a semi-infinite tail is dropped.
    pub decay_cutoff: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 60,
            max_evaluations: 1_000_000,
            decay_cutoff: 1e-16,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return bad("tolerances must be non-negative");
        }
        let total = self.abs_tol + self.rel_tol;
        if !total.is_finite() || total <= 0.0 {
            return bad("abs_tol + rel_tol must be positive and finite");
        }
        if self.max_subdivisions < 1 {
            return bad("max_subdivisions must be at least 1");
        }
        if self.max_evaluations < 15 {
            return bad("max_evaluations must be at least 15");
        }
        if !(self.decay_cutoff > 0.0 && self.decay_cutoff.is_finite()) {
            return bad("decay_cutoff must be positive");
        }
        Ok(())
    }

    /// The acceptance target for an integral with the given value.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadratureResult {
    /// The value, or `NonConvergence` if the tolerance was not met.
    pub fn into_value(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence {
                value: self.value,
                error_estimate: self.error_estimate,
                evaluations: self.evaluations,
            })
        }
    }
}

/// Parity of the non-oscillatory factor `f` in `f(u) sin(n u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    None,
    Even,
    Odd,
}

// ---------------------------------------------------------------------------
// Engine

#[derive(Debug, Clone)]
struct Segment {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: Vec<f64>,
    /// Roundoff floor of `error`; a segment at its floor cannot be improved.
    floor: Vec<f64>,
    abs: Vec<f64>,
}

impl Segment {
    fn at_floor(&self) -> bool {
        self.error
            .iter()
            .zip(&self.floor)
            .all(|(e, fl)| *e <= fl * (1.0 + 1e-12))
    }
}

struct Engine<'c, F> {
    f: F,
    dim: usize,
    cfg: &'c QuadratureConfig,
    evaluations: usize,
    fv: Vec<f64>,
}

impl<'c, F> Engine<'c, F>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    fn new(f: F, dim: usize, cfg: &'c QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            f,
            dim,
            cfg,
            evaluations: 0,
            fv: vec![0.0; NODES * dim],
        })
    }

    fn eval(&mut self, slot: usize, x: f64) -> Result<()> {
        let row = &mut self.fv[slot * self.dim..(slot + 1) * self.dim];
        (self.f)(x, row)?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEvaluation { at: x });
        }
        Ok(())
    }

    /// One Gauss-Kronrod pass over `[a, b]`. Slot 0 holds the centre, slots
    /// `2j+1` / `2j+2` the pair at `XGK[j]`.
    fn rule(&mut self, a: f64, b: f64) -> Result<Segment> {
        let centre = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.eval(0, centre)?;
        for (j, xk) in XGK.iter().enumerate().take(15) {
            let dx = half * xk;
            self.eval(2 * j + 1, centre - dx)?;
            self.eval(2 * j + 2, centre + dx)?;
        }
        self.evaluations += NODES;

        let dim = self.dim;
        let mut seg = Segment {
            a,
            b,
            value: Vec::with_capacity(dim),
            error: Vec::with_capacity(dim),
            floor: Vec::with_capacity(dim),
            abs: Vec::with_capacity(dim),
        };
        let at = |slot: usize, k: usize| self.fv[slot * dim + k];
        for k in 0..dim {
            let fc = at(0, k);
            let mut resk = WGK[15] * fc;
            let mut resg = WG[7] * fc;
            let mut resabs = resk.abs();
            for j in 0..15 {
                let (f1, f2) = (at(2 * j + 1, k), at(2 * j + 2, k));
                resk += WGK[j] * (f1 + f2);
                resabs += WGK[j] * (f1.abs() + f2.abs());
                if j % 2 == 1 {
                    resg += WG[j / 2] * (f1 + f2);
                }
            }
            let mean = 0.5 * resk;
            let mut resasc = WGK[15] * (fc - mean).abs();
            for (j, w) in WGK.iter().enumerate().take(15) {
                let (f1, f2) = (at(2 * j + 1, k), at(2 * j + 2, k));
                resasc += w * ((f1 - mean).abs() + (f2 - mean).abs());
            }
            let hl = half.abs();
            let value = resk * half;
            let resabs = resabs * hl;
            let resasc = resasc * hl;
            let mut err = ((resk - resg) * half).abs();
            if resasc != 0.0 && err != 0.0 {
                err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
            }
            let floor = if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
                50.0 * f64::EPSILON * resabs
            } else {
                0.0
            };
            seg.value.push(value);
            seg.error.push(err.max(floor));
            seg.floor.push(floor);
            seg.abs.push(resabs);
        }
        Ok(seg)
    }

    fn budget_left(&self) -> bool {
        self.evaluations + 2 * NODES <= self.cfg.max_evaluations
    }

    /// Global adaptive refinement of an initial partition.
    fn refine(&mut self, mut segs: Vec<Segment>) -> Result<Vec<QuadratureResult>> {
        let dim = self.dim;
        let mut bisections = 0usize;
        let mut converged;
        loop {
            let (totals, errors) = totals(&segs, dim);
            let targets: Vec<f64> = totals.iter().map(|v| self.cfg.target(*v)).collect();
            converged = errors.iter().zip(&targets).all(|(e, t)| e <= t);
            if converged || bisections >= self.cfg.max_subdivisions || !self.budget_left() {
                break;
            }
            // Worst segment relative to the per-component targets.
            let mut worst: Option<(usize, f64)> = None;
            for (i, s) in segs.iter().enumerate() {
                if s.at_floor() || !splittable(s.a, s.b) {
                    continue;
                }
                let score = (0..dim)
                    .map(|k| {
                        let excess = s.error[k] - s.floor[k];
                        if targets[k] > 0.0 {
                            excess / targets[k]
                        } else if excess > 0.0 {
                            f64::INFINITY
                        } else {
                            0.0
                        }
                    })
                    .fold(0.0, f64::max);
                if score > 0.0 && worst.is_none_or(|(_, w)| score > w) {
                    worst = Some((i, score));
                }
            }
            let Some((i, _)) = worst else { break };
            let s = segs.swap_remove(i);
            let mid = 0.5 * (s.a + s.b);
            let left = self.rule(s.a, mid)?;
            let right = self.rule(mid, s.b)?;
            segs.push(left);
            segs.push(right);
            bisections += 1;
        }

        // Deterministic summation: ascending magnitude, ties by position.
        segs.sort_by(|p, q| p.a.total_cmp(&q.a));
        let mut out = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut parts: Vec<(f64, f64)> = segs.iter().map(|s| (s.value[k], s.error[k])).collect();
            parts.sort_by(|p, q| p.0.abs().total_cmp(&q.0.abs()));
            let value: f64 = parts.iter().map(|p| p.0).sum();
            let mut errs: Vec<f64> = parts.iter().map(|p| p.1).collect();
            errs.sort_by(f64::total_cmp);
            let error_estimate: f64 = errs.iter().sum();
            out.push(QuadratureResult {
                value,
                error_estimate,
                evaluations: self.evaluations,
                converged: error_estimate <= self.cfg.target(value),
            });
        }
        Ok(out)
    }

    /// Probe `[a, inf)` with windows of doubling width until the tail is
    /// negligible; returns the windows as the initial partition.
    fn probe_tail(&mut self, a: f64) -> Result<Vec<Segment>> {
        let mut segs = Vec::new();
        let mut lo = a;
        let mut width = 1.0;
        let mut acc = 0.0;
        let mut mags: Vec<f64> = Vec::new();
        for k in 0..MAX_PROBE_WINDOWS {
            let hi = lo + width;
            let seg = self.rule(lo, hi)?;
            let window: f64 = seg.abs.iter().sum();
            segs.push(seg);
            let done = k >= 1 && window <= self.cfg.decay_cutoff * acc;
            acc += window;
            if done {
                return Ok(segs);
            }
            mags.push(window / width);
            if k + 1 >= DECAY_CHECK_AFTER {
                let n = mags.len();
                if mags[n - 1] >= mags[n - 2] && mags[n - 2] >= mags[n - 3] {
                    return Err(Error::TailNotDecaying { at: hi });
                }
            }
            if !self.budget_left() {
                return Ok(segs);
            }
            lo = hi;
            width *= 2.0;
        }
        Ok(segs)
    }
}

fn splittable(a: f64, b: f64) -> bool {
    let mid = 0.5 * (a + b);
    mid > a && mid < b && (b - a) > 4.0 * f64::EPSILON * a.abs().max(b.abs())
}

fn totals(segs: &[Segment], dim: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; dim];
    let mut e = vec![0.0; dim];
    for s in segs {
        for k in 0..dim {
            v[k] += s.value[k];
            e[k] += s.error[k];
        }
    }
    (v, e)
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(Error::InvalidInterval { a, b })
    }
}

fn scalar<F>(f: F) -> impl FnMut(f64, &mut [f64]) -> Result<()>
where
    F: Fn(f64) -> Result<f64>,
{
    move |x, out| {
        out[0] = f(x)?;
        Ok(())
    }
}

fn first(mut v: Vec<QuadratureResult>) -> QuadratureResult {
    v.swap_remove(0)
}

// ---------------------------------------------------------------------------
// Finite intervals

/// Adaptive integral of `f` over `[a, b]`.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate_finite(|x| Ok(f(x)), a, b, cfg)
}

/// As [`integrate_finite`] for an integrand that can fail; the first error is
/// returned unchanged.
pub fn try_integrate_finite<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    try_integrate_partition(f, &[a, b], cfg)
}

/// Adaptive integral over `[p[0], p[last]]` starting from the partition `p`.
pub fn try_integrate_partition<F>(f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    Ok(first(integrate_partition_many(scalar(f), 1, points, cfg)?))
}

/// Integrates `dim` components at once; `f(x, out)` fills `out[..dim]`.
/// Each component is held to the tolerance separately.
pub fn integrate_finite_many<F>(
    f: F,
    dim: usize,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<QuadratureResult>>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    integrate_partition_many(f, dim, &[a, b], cfg)
}

pub fn integrate_partition_many<F>(
    f: F,
    dim: usize,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<QuadratureResult>>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    if points.len() < 2 {
        return Err(Error::InvalidConfig("partition needs at least two points".into()));
    }
    for w in points.windows(2) {
        check_interval(w[0], w[1])?;
    }
    let mut engine = Engine::new(f, dim.max(1), cfg)?;
    let mut segs = Vec::with_capacity(points.len() - 1);
    for w in points.windows(2) {
        segs.push(engine.rule(w[0], w[1])?);
    }
    engine.refine(segs)
}

// ---------------------------------------------------------------------------
// Semi-infinite intervals

/// Integral of `f` over `[a, inf)` for an integrand with exponential-type decay.
pub fn integrate_semi_infinite<F>(f: F, a: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate_semi_infinite(|x| Ok(f(x)), a, cfg)
}

pub fn try_integrate_semi_infinite<F>(f: F, a: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    Ok(first(integrate_semi_infinite_many(scalar(f), 1, a, cfg)?))
}

pub fn integrate_semi_infinite_many<F>(
    f: F,
    dim: usize,
    a: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<QuadratureResult>>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    if !a.is_finite() {
        return Err(Error::InvalidInterval { a, b: f64::INFINITY });
    }
    let mut engine = Engine::new(f, dim.max(1), cfg)?;
    let segs = engine.probe_tail(a)?;
    engine.refine(segs)
}

// ---------------------------------------------------------------------------
// Abel-type weights

/// `int_0^x g(t) / sqrt(x^2 - t^2) dt`, computed as `int_0^{pi/2} g(x sin(theta)) dtheta`.
pub fn integrate_abel_lower<G>(g: G, x: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    G: Fn(f64) -> f64,
{
    try_integrate_abel_lower(|t| Ok(g(t)), x, cfg)
}

pub fn try_integrate_abel_lower<G>(g: G, x: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    G: Fn(f64) -> Result<f64>,
{
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidInterval { a: 0.0, b: x });
    }
    try_integrate_finite(|theta| g(x * theta.sin()), 0.0, 0.5 * PI, cfg)
}

/// `int_x^inf g(t) / sqrt(t^2 - x^2) dt`, computed as `int_0^inf g(x cosh(v)) dv`.
pub fn integrate_abel_upper<G>(g: G, x: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    G: Fn(f64) -> f64,
{
    try_integrate_abel_upper(|t| Ok(g(t)), x, cfg)
}

pub fn try_integrate_abel_upper<G>(g: G, x: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    G: Fn(f64) -> Result<f64>,
{
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidInterval { a: x, b: f64::INFINITY });
    }
    try_integrate_semi_infinite(|v| g(x * v.cosh()), 0.0, cfg)
}

// ---------------------------------------------------------------------------
// sin(n u) weights on [-pi, pi]

/// `int_{-pi}^{pi} f(u) sin(n u) du` with panels between consecutive zeros
/// `k pi / n`. When `f` is declared odd the integrand is even and only
/// `[0, pi]` is integrated; an even `f` gives exactly zero.
pub fn integrate_periodic_oscillatory<F>(
    f: F,
    n: u32,
    parity: Parity,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate_periodic_oscillatory(|u| Ok(f(u)), n, parity, cfg)
}

pub fn try_integrate_periodic_oscillatory<F>(
    f: F,
    n: u32,
    parity: Parity,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if n == 0 {
        return Err(Error::Domain("oscillation index n must be at least 1".into()));
    }
    cfg.validate()?;
    if parity == Parity::Even {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        });
    }
    let nf = f64::from(n);
    let lo = if parity == Parity::Odd { 0 } else { -(n as i64) };
    let mut points: Vec<f64> = (lo..=n as i64).map(|k| k as f64 * PI / nf).collect();
    // Exact endpoints.
    *points.first_mut().unwrap() = if parity == Parity::Odd { 0.0 } else { -PI };
    *points.last_mut().unwrap() = PI;
    let r = try_integrate_partition(|u| Ok(f(u)? * (nf * u).sin()), &points, cfg)?;
    Ok(fold_parity(r, parity))
}

/// `int_{-pi}^{pi} f(u) sin(n u) du` for every `n` in `ns`, sharing each
/// evaluation of `f`. Panels are `pi / max(ns)` wide, so every panel spans
/// at most half a period of each `sin(n u)`.
pub fn try_integrate_periodic_oscillatory_many<F>(
    f: F,
    ns: &[u32],
    parity: Parity,
    cfg: &QuadratureConfig,
) -> Result<Vec<QuadratureResult>>
where
    F: Fn(f64) -> Result<f64>,
{
    if ns.is_empty() {
        return Ok(Vec::new());
    }
    if ns.contains(&0) {
        return Err(Error::Domain("oscillation index n must be at least 1".into()));
    }
    cfg.validate()?;
    if parity == Parity::Even {
        let zero = QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        };
        return Ok(vec![zero; ns.len()]);
    }
    let m = *ns.iter().max().unwrap() as i64;
    let lo = if parity == Parity::Odd { 0 } else { -m };
    let mut points: Vec<f64> = (lo..=m).map(|k| k as f64 * PI / m as f64).collect();
    *points.first_mut().unwrap() = if parity == Parity::Odd { 0.0 } else { -PI };
    *points.last_mut().unwrap() = PI;
    let freqs: Vec<f64> = ns.iter().map(|n| f64::from(*n)).collect();
    let rs = integrate_partition_many(
        |u, out: &mut [f64]| {
            let fu = f(u)?;
            for (o, w) in out.iter_mut().zip(&freqs) {
                *o = fu * (w * u).sin();
            }
            Ok(())
        },
        ns.len(),
        &points,
        cfg,
    )?;
    Ok(rs.into_iter().map(|r| fold_parity(r, parity)).collect())
}

fn fold_parity(r: QuadratureResult, parity: Parity) -> QuadratureResult {
    if parity == Parity::Odd {
        QuadratureResult {
            value: 2.0 * r.value,
            error_estimate: 2.0 * r.error_estimate,
            ..r
        }
    } else {
        r
    }
}
