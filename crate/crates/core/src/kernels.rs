//! Sigmoidal activations and the density kernels built from them.
//!
//! For a sigmoidal `sigma` the one-dimensional density is
//! `phi(v) = (sigma(v + 1) - sigma(v - 1)) / 2` and the bivariate kernel is the
//! tensor product `psi(x, y) = phi(x) * phi(y)`. Integer translates of `phi`
//! sum to one, which is what makes the sampling operator a normalised average.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default number of lattice points kept on each side of the origin when an
/// infinite lattice sum is truncated.
pub const DEFAULT_TRUNCATION_RADIUS: usize = 40;

/// Default probe lattice per axis for the sup over the unit cell in [`absolute_moment`].
pub const DEFAULT_MOMENT_PROBES: usize = 33;

/// Tail mass above which a truncated moment is flagged as inaccurate.
pub const MOMENT_TAIL_TOLERANCE: f64 = 1e-12;

/// Anything that can play the role of a sigmoidal activation.
///
/// The two built-in kernels implement this through [`SigmoidalKernel`]; the
/// trait exists so that axiom checks can be run against deliberately broken
/// activations.
pub trait Activation: Sync {
    fn sigma(&self, u: f64) -> f64;

    fn phi(&self, v: f64) -> f64 {
        0.5 * (self.sigma(v + 1.0) - self.sigma(v - 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SigmoidKind {
    /// `1 / (1 + e^{-u})`
    Logistic,
    /// `(tanh u + 1) / 2`
    Tanh,
}

impl SigmoidKind {
    pub fn name(self) -> &'static str {
        match self {
            SigmoidKind::Logistic => "logistic",
            SigmoidKind::Tanh => "tanh",
        }
    }
}

impl fmt::Display for SigmoidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SigmoidKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "logistic" => Ok(SigmoidKind::Logistic),
            "tanh" | "tanh-based" => Ok(SigmoidKind::Tanh),
            other => Err(Error::domain(format!("unknown kernel '{other}'"))),
        }
    }
}

/// A built-in sigmoidal activation together with its decay metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmoidalKernel {
    pub kind: SigmoidKind,
    /// Decay exponent: `sigma(v) = O(|v|^{-1-alpha})` as `v -> -inf`.
    pub alpha: f64,
    /// Truncation radius for infinite lattice sums.
    pub truncation_radius: usize,
}

impl SigmoidalKernel {
    pub fn new(kind: SigmoidKind) -> Self {
        // Both built-ins decay exponentially, so any alpha is admissible.
        SigmoidalKernel { kind, alpha: 1.0, truncation_radius: DEFAULT_TRUNCATION_RADIUS }
    }

    pub fn logistic() -> Self {
        SigmoidalKernel::new(SigmoidKind::Logistic)
    }

    pub fn tanh() -> Self {
        SigmoidalKernel::new(SigmoidKind::Tanh)
    }

    pub fn with_truncation_radius(mut self, radius: usize) -> Self {
        self.truncation_radius = radius;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn psi(&self, x: f64, y: f64) -> f64 {
        self.phi(x) * self.phi(y)
    }

    /// `psi(1, 1)`, the lower bound of the operator's normaliser on `[-1, 1]^2`.
    pub fn psi_11(&self) -> f64 {
        self.psi(1.0, 1.0)
    }
}

#[inline]
fn logistic(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

impl Activation for SigmoidalKernel {
    #[inline]
    fn sigma(&self, u: f64) -> f64 {
        match self.kind {
            SigmoidKind::Logistic => logistic(u),
            // (tanh u + 1)/2 == 1/(1 + e^{-2u}); this form keeps the left tail
            // representable instead of rounding to zero at u ~ -19.
            SigmoidKind::Tanh => logistic(2.0 * u),
        }
    }

    /// Closed forms of the centred difference. They are accurate in both tails
    /// where the literal difference of two values near one would cancel.
    #[inline]
    fn phi(&self, v: f64) -> f64 {
        match self.kind {
            // (sigma(v+1) - sigma(v-1))/2 = sinh 1 / (2 (cosh v + cosh 1))
            SigmoidKind::Logistic => {
                let c = v.cosh();
                if c.is_finite() {
                    0.5 * SINH_1 / (c + COSH_1)
                } else {
                    0.0
                }
            }
            // (tanh(v+1) - tanh(v-1))/4 = sinh 2 / (4 cosh(v+1) cosh(v-1))
            SigmoidKind::Tanh => {
                let d = (v + 1.0).cosh() * (v - 1.0).cosh();
                if d.is_finite() {
                    0.25 * SINH_2 / d
                } else {
                    0.0
                }
            }
        }
    }
}

const SINH_1: f64 = 1.175_201_193_643_801_4;
const COSH_1: f64 = 1.543_080_634_815_243_7;
const SINH_2: f64 = 3.626_860_407_847_019;

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!("{what} must be finite, got {v}")))
    }
}

pub fn sigmoid_eval(kernel: &SigmoidalKernel, u: f64) -> Result<f64> {
    Ok(kernel.sigma(finite(u, "u")?))
}

pub fn phi_eval(kernel: &SigmoidalKernel, v: f64) -> Result<f64> {
    Ok(kernel.phi(finite(v, "v")?))
}

pub fn psi_eval(kernel: &SigmoidalKernel, x: f64, y: f64) -> Result<f64> {
    Ok(kernel.psi(finite(x, "x")?, finite(y, "y")?))
}

/// Outcome of probing an activation against the sigmoidal assumptions.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    /// max |(sigma(v) - 1/2) + (sigma(-v) - 1/2)|
    pub a1_odd_defect: f64,
    /// max positive centred second difference for v >= 0
    pub a2_concavity_defect: f64,
    pub a3_decay_ok: bool,
    /// Power-law exponent fitted to the left tail; `inf` when the tail underflows.
    pub a3_tail_exponent: f64,
    /// Nondecreasing on the probe grid and sigma(2) > sigma(0).
    pub monotone_ok: bool,
    /// sigma(-R) ~ 0 and sigma(R) ~ 1 at the truncation radius R.
    pub limits_ok: bool,
    pub passes: bool,
}

const CONCAVITY_STEP: f64 = 1e-3;
const CONCAVITY_RANGE: f64 = 20.0;

/// Probe a built-in kernel. `probe_count` below 16 is raised to 16.
pub fn verify_axioms(kernel: &SigmoidalKernel, probe_count: usize, tol: f64) -> AxiomReport {
    verify_activation_axioms(kernel, kernel.truncation_radius as f64, kernel.alpha, probe_count, tol)
}

/// Probe any activation out to `radius`, requiring a left-tail decay exponent of
/// at least `1 + alpha`.
pub fn verify_activation_axioms<A: Activation + ?Sized>(
    act: &A,
    radius: f64,
    alpha: f64,
    probe_count: usize,
    tol: f64,
) -> AxiomReport {
    let n = probe_count.max(16);
    let radius = radius.max(2.0);
    // log-spaced probes in [1e-3, radius]
    let lo = 1e-3_f64.ln();
    let hi = radius.ln();
    let probes: Vec<f64> = (0..n)
        .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
        .collect();

    let a1_odd_defect = probes
        .iter()
        .map(|&v| ((act.sigma(v) - 0.5) + (act.sigma(-v) - 0.5)).abs())
        .fold(0.0, f64::max);

    let a2_concavity_defect = (0..n)
        .map(|i| CONCAVITY_RANGE * i as f64 / (n - 1) as f64)
        .map(|v| {
            act.sigma(v + CONCAVITY_STEP) - 2.0 * act.sigma(v) + act.sigma(v - CONCAVITY_STEP)
        })
        .fold(0.0, f64::max);

    let mut line: Vec<f64> = probes.iter().map(|v| -v).rev().collect();
    line.push(0.0);
    line.extend(probes.iter().copied());
    let nondecreasing = line.windows(2).all(|w| act.sigma(w[1]) >= act.sigma(w[0]));
    let monotone_ok = nondecreasing && act.sigma(2.0) > act.sigma(0.0);

    let limits_ok = act.sigma(-radius).abs() < tol && (act.sigma(radius) - 1.0).abs() < tol;

    let a3_tail_exponent = fit_tail_exponent(act, radius);
    let a3_decay_ok = a3_tail_exponent >= 1.0 + alpha;

    let passes = a1_odd_defect < tol
        && a2_concavity_defect < tol
        && a3_decay_ok
        && monotone_ok
        && limits_ok;

    AxiomReport {
        a1_odd_defect,
        a2_concavity_defect,
        a3_decay_ok,
        a3_tail_exponent,
        monotone_ok,
        limits_ok,
        passes,
    }
}

/// Least-squares slope of `ln sigma(-v)` against `ln v` over `v in [R/4, R]`.
fn fit_tail_exponent<A: Activation + ?Sized>(act: &A, radius: f64) -> f64 {
    let pts: Vec<(f64, f64)> = (0..16)
        .map(|i| radius / 4.0 * 4f64.powf(i as f64 / 15.0))
        .map(|v| (v.ln(), act.sigma(-v)))
        .collect();
    if pts.iter().all(|&(_, s)| s == 0.0) {
        return f64::INFINITY;
    }
    if pts.iter().any(|&(_, s)| s <= 0.0 || !s.is_finite()) {
        // partly underflowed or nonsensical; only a genuinely vanishing tail counts
        return if pts.last().is_some_and(|&(_, s)| s == 0.0) { f64::INFINITY } else { 0.0 };
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    -sxy / sxx
}

/// `|sum_k sum_j psi(u - k, v - j) - 1|` over the `(2 radius + 1)^2` lattice
/// points nearest to `(u, v)`.
pub fn partition_of_unity_defect(kernel: &SigmoidalKernel, u: f64, v: f64, radius: usize) -> f64 {
    let radius = radius.max(1);
    (axis_moment(kernel, 0, u, radius) * axis_moment(kernel, 0, v, radius) - 1.0).abs()
}

/// A truncated lattice sum with an estimate of what the truncation dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub value: f64,
    /// Absolute mass of the terms between `radius` and `2 * radius`.
    pub tail_estimate: f64,
    /// False when `tail_estimate` exceeds [`MOMENT_TAIL_TOLERANCE`].
    pub accurate: bool,
}

/// `sum_{|k - c| <= radius} phi(u - k) (k - u)^n` with `c = round(u)`,
/// accumulated from the outside in so small terms are added first.
fn axis_moment(kernel: &SigmoidalKernel, n: u32, u: f64, radius: usize) -> f64 {
    let c = u.round() as i64;
    let mut acc = 0.0;
    for k in outside_in(radius as i64) {
        let d = (c + k) as f64 - u;
        acc += kernel.phi(-d) * d.powi(n as i32);
    }
    acc
}

fn axis_abs_moment(kernel: &SigmoidalKernel, n: u32, u: f64, radius: usize) -> f64 {
    let c = u.round() as i64;
    let mut acc = 0.0;
    for k in outside_in(radius as i64) {
        let d = ((c + k) as f64 - u).abs();
        acc += kernel.phi(d) * d.powi(n as i32);
    }
    acc
}

/// Terms with `radius < |k - c| <= 2 * radius`, absolute.
fn axis_abs_tail(kernel: &SigmoidalKernel, n: u32, u: f64, radius: usize) -> f64 {
    let (c, r) = (u.round() as i64, radius as i64);
    ((r + 1)..=(2 * r))
        .flat_map(|k| [c + k, c - k])
        .map(|k| {
            let d = (k as f64 - u).abs();
            kernel.phi(d) * d.powi(n as i32)
        })
        .sum()
}

fn outside_in(r: i64) -> impl Iterator<Item = i64> {
    (1..=r).rev().flat_map(|k| [-k, k]).chain(std::iter::once(0))
}

/// `m_{(n1,n2)}(psi, u, v) = sum_k sum_j psi(u - k, v - j) (k - u)^n1 (j - v)^n2`.
///
/// The kernel is a tensor product, so the double sum is the product of two
/// axis sums.
pub fn algebraic_moment(
    kernel: &SigmoidalKernel,
    n1: u32,
    n2: u32,
    u: f64,
    v: f64,
    radius: usize,
) -> MomentEstimate {
    let radius = radius.max(1);
    let value = axis_moment(kernel, n1, u, radius) * axis_moment(kernel, n2, v, radius);
    let (au, av) = (axis_abs_moment(kernel, n1, u, radius), axis_abs_moment(kernel, n2, v, radius));
    let tail_estimate = axis_abs_tail(kernel, n1, u, radius) * av + au * axis_abs_tail(kernel, n2, v, radius);
    MomentEstimate { value, tail_estimate, accurate: tail_estimate <= MOMENT_TAIL_TOLERANCE }
}

/// `M_{(n1,n2)}(psi)`: the sup over `(u, v)` of the absolute lattice moment.
///
/// The sums are 1-periodic in each variable, so the sup is taken over a
/// `cell_probes x cell_probes` lattice of `[0, 1)^2`. This is a lower bound of
/// the true sup that tightens as `cell_probes` grows.
pub fn absolute_moment(
    kernel: &SigmoidalKernel,
    n1: u32,
    n2: u32,
    radius: usize,
    cell_probes: usize,
) -> MomentEstimate {
    let radius = radius.max(1);
    let probes: Vec<f64> = (0..cell_probes.max(1)).map(|i| i as f64 / cell_probes.max(1) as f64).collect();
    let per_axis = |n: u32| -> Vec<(f64, f64)> {
        probes
            .iter()
            .map(|&u| (axis_abs_moment(kernel, n, u, radius), axis_abs_tail(kernel, n, u, radius)))
            .collect()
    };
    let (xs, ys) = (per_axis(n1), per_axis(n2));
    let mut value = 0.0_f64;
    let mut tail_estimate = 0.0_f64;
    for &(ax, tx) in &xs {
        for &(ay, ty) in &ys {
            value = value.max(ax * ay);
            tail_estimate = tail_estimate.max(tx * ay + ax * ty);
        }
    }
    MomentEstimate { value, tail_estimate, accurate: tail_estimate <= MOMENT_TAIL_TOLERANCE }
}
