//! Steklov averages and the modified Steklov function.
//!
//! `F_{r,h}` averages `f(x + u_1 + .. + u_r, y + v_1 + .. + v_r)` over
//! `u, v in [0, h]^r`. Per axis this is an expectation over the sum of `r`
//! independent uniforms on `[0, h]`, whose density is the Irwin-Hall spline: a
//! polynomial of degree `r - 1` on each of the `r` knot intervals. The average
//! is therefore computed as a tensor product of two one-dimensional rules, each
//! a Gauss-Legendre rule on every knot interval weighted by the spline. The
//! cost per evaluation is `(r * nodes)^2` rather than `nodes^{2r}`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{Rect, ScalarField2D};

pub const DEFAULT_QUAD_POINTS: usize = 8;
pub const MAX_ORDER: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteklovParams {
    pub r: u32,
    pub h: f64,
    /// Gauss-Legendre nodes per knot interval of each axis rule.
    pub quad_points_per_axis_per_fold: usize,
}

impl SteklovParams {
    pub fn new(r: u32, h: f64) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&r) {
            return Err(Error::domain(format!("Steklov order must be in 1..={MAX_ORDER}, got {r}")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::domain(format!("Steklov step must be finite and > 0, got {h}")));
        }
        Ok(SteklovParams { r, h, quad_points_per_axis_per_fold: DEFAULT_QUAD_POINTS })
    }

    pub fn with_quad_points(mut self, n: usize) -> Self {
        self.quad_points_per_axis_per_fold = n.max(1);
        self
    }
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub(crate) fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let n = n.max(1);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Newton iteration on P_n from the Chebyshev-like initial guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0_f64, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        out.push((0.5 * (1.0 - z), 0.5 * w));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Density of the sum of `r` uniforms on `[0, 1]` at `z`.
fn irwin_hall(r: u32, z: f64) -> f64 {
    if z <= 0.0 || z >= r as f64 {
        return 0.0;
    }
    let mut fact = 1.0;
    for k in 1..r {
        fact *= k as f64;
    }
    let mut binom = 1.0;
    let mut acc = 0.0;
    for k in 0..=(z.floor() as u32).min(r) {
        if k > 0 {
            binom = binom * (r - k + 1) as f64 / k as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * (z - k as f64).powi(r as i32 - 1);
    }
    acc / fact
}

/// Offsets and weights reproducing `E[g(U_1 + .. + U_r)]`, `U_i ~ U[0, h]`.
#[derive(Debug, Clone)]
struct AxisRule {
    nodes: Vec<(f64, f64)>,
}

impl AxisRule {
    fn new(r: u32, h: f64, points: usize) -> Self {
        let gl = gauss_legendre_unit(points);
        let mut nodes = Vec::with_capacity(r as usize * gl.len());
        for piece in 0..r {
            for &(xi, w) in &gl {
                let z = piece as f64 + xi;
                nodes.push((h * z, w * irwin_hall(r, z)));
            }
        }
        AxisRule { nodes }
    }
}

fn apply_rule(f: &ScalarField2D, rule: &AxisRule, x: f64, y: f64) -> f64 {
    let mut acc = 0.0;
    for &(du, wu) in &rule.nodes {
        let mut inner = 0.0;
        for &(dv, wv) in &rule.nodes {
            inner += wv * f.value(x + du, y + dv);
        }
        acc += wu * inner;
    }
    acc
}

/// Domain of the averaged field, given the largest total offset per axis.
fn shrunken_domain(field: &ScalarField2D, margin: f64) -> Result<Option<Rect>> {
    match field.domain() {
        None => Ok(None),
        Some(d) => Rect::new(d.x_lo, d.x_hi - margin, d.y_lo, d.y_hi - margin)
            .map(Some)
            .map_err(|_| Error::domain(format!("domain {d} too small for an averaging margin of {margin}"))),
    }
}

/// The Steklov function `F_{r,h}`. If `field` has a bounded domain the result
/// is defined on that domain shortened by `r*h` at the upper ends.
pub fn steklov_average(field: &ScalarField2D, params: SteklovParams) -> Result<ScalarField2D> {
    let SteklovParams { r, h, quad_points_per_axis_per_fold: pts } = params;
    let domain = shrunken_domain(field, r as f64 * h)?;
    let rule = Arc::new(AxisRule::new(r, h, pts));
    let inner = field.clone();
    let mut out = ScalarField2D::new(move |x, y| apply_rule(&inner, &rule, x, y))
        .with_continuity(crate::fields::Continuity::Continuous);
    if let Some(b) = field.sup_bound() {
        out = out.with_sup_bound(b);
    }
    if let Some(d) = domain {
        out = out.with_domain(d);
    }
    Ok(out)
}

/// The modified Steklov function `f_{r,h} = -sum_{j=1}^r (-1)^j C(r,j) F_{r, jh/r}`.
pub fn modified_steklov(field: &ScalarField2D, params: SteklovParams) -> Result<ScalarField2D> {
    let SteklovParams { r, h, quad_points_per_axis_per_fold: pts } = params;
    let domain = shrunken_domain(field, r as f64 * h)?;
    let mut terms = Vec::with_capacity(r as usize);
    let mut binom = 1.0;
    let mut abs_sum = 0.0;
    for j in 1..=r {
        binom = binom * (r - j + 1) as f64 / j as f64;
        let coeff = if j % 2 == 0 { -binom } else { binom };
        abs_sum += binom;
        terms.push((coeff, AxisRule::new(r, j as f64 * h / r as f64, pts)));
    }
    let terms = Arc::new(terms);
    let inner = field.clone();
    let mut out = ScalarField2D::new(move |x, y| {
        terms.iter().map(|(c, rule)| c * apply_rule(&inner, rule, x, y)).sum()
    });
    if let Some(b) = field.sup_bound() {
        out = out.with_sup_bound(b * abs_sum);
    }
    if let Some(d) = domain {
        out = out.with_domain(d);
    }
    Ok(out)
}

/// Centred finite-difference estimate of `d^{a+b} f / dx^a dy^b`.
pub fn centered_partial(field: &ScalarField2D, a: u32, b: u32, x: f64, y: f64, step: f64) -> f64 {
    fn rec(f: &dyn Fn(f64, f64) -> f64, a: u32, b: u32, x: f64, y: f64, s: f64) -> f64 {
        if a > 0 {
            (rec(f, a - 1, b, x + s, y, s) - rec(f, a - 1, b, x - s, y, s)) / (2.0 * s)
        } else if b > 0 {
            (rec(f, 0, b - 1, x, y + s, s) - rec(f, 0, b - 1, x, y - s, s)) / (2.0 * s)
        } else {
            f(x, y)
        }
    }
    rec(&|u, v| field.value(u, v), a, b, x, y, step)
}
