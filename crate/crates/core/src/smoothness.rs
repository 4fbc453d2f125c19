//! Finite differences and moduli of smoothness on a rectangle.
//!
//! All differences step along the diagonal: the r-th difference with step `h`
//! is `sum_j (-1)^{r-j} C(r,j) f(x + j h, y + j h)`. The local modulus at a
//! point is the sup of such differences over a window of half-width `r*delta/2`
//! clipped to the rectangle; the averaged modulus is the mixed norm of the
//! local modulus.
//!
//! Every sup is estimated on a probe lattice and is therefore a lower bound of
//! the exact quantity.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{make_grid, sample_with, Grid2D, Rect, SampleMatrix, ScalarField2D, CONTAINS_SLACK};
use crate::mixed_norms::{lpq_norm_of_samples, InnerAxis, MixedExponents};

pub const DEFAULT_T_PROBES: usize = 17;
pub const DEFAULT_H_PROBES: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusSpec {
    /// Order of the difference, `>= 1`.
    pub r: u32,
    pub delta: f64,
    /// Base-point probes per axis within a window.
    pub t_probes: usize,
    /// Step probes on `[0, h_max]`, counting `h = 0`.
    pub h_probes: usize,
}

impl ModulusSpec {
    pub fn new(r: u32, delta: f64) -> Result<Self> {
        if r < 1 {
            return Err(Error::domain("modulus order must be >= 1"));
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::domain(format!("delta must be finite and >= 0, got {delta}")));
        }
        Ok(ModulusSpec { r, delta, t_probes: DEFAULT_T_PROBES, h_probes: DEFAULT_H_PROBES })
    }

    pub fn with_probes(mut self, t_probes: usize, h_probes: usize) -> Self {
        self.t_probes = t_probes.max(1);
        self.h_probes = h_probes.max(2);
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    /// `delta <= min(width, height) / r`.
    pub fn check_against(&self, rect: &Rect) -> Result<()> {
        let bound = rect.width().min(rect.height()) / self.r as f64;
        if self.delta > bound * (1.0 + CONTAINS_SLACK) {
            return Err(Error::domain(format!(
                "delta = {} exceeds min side / r = {bound} on {rect}",
                self.delta
            )));
        }
        Ok(())
    }
}

/// `(-1)^{r-j} C(r, j)` for `j = 0..=r`.
pub(crate) fn difference_weights(r: u32) -> Vec<f64> {
    let mut c = 1.0_f64;
    let mut out = Vec::with_capacity(r as usize + 1);
    for j in 0..=r {
        if j > 0 {
            c = c * (r - j + 1) as f64 / j as f64;
        }
        let sign = if (r - j) % 2 == 0 { 1.0 } else { -1.0 };
        out.push(sign * c);
    }
    out
}

#[inline]
fn diff_raw(field: &ScalarField2D, weights: &[f64], h: f64, x: f64, y: f64) -> f64 {
    weights
        .iter()
        .enumerate()
        .map(|(j, w)| w * field.value(x + j as f64 * h, y + j as f64 * h))
        .sum()
}

/// r-th forward difference along the diagonal. Every evaluation point must lie
/// in the field's domain.
pub fn forward_difference(field: &ScalarField2D, r: u32, h: f64, x: f64, y: f64) -> Result<f64> {
    if r < 1 {
        return Err(Error::domain("difference order must be >= 1"));
    }
    let weights = difference_weights(r);
    let mut acc = 0.0;
    for (j, w) in weights.iter().enumerate() {
        acc += w * field.eval(x + j as f64 * h, y + j as f64 * h)?;
    }
    Ok(acc)
}

/// `count` points from `lo` to `hi` inclusive; a single point if the span is empty.
fn probe_line(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let span = hi - lo;
    let n = if span > 0.0 { count.max(1) } else { 1 };
    (0..n).map(move |i| {
        if n == 1 {
            lo
        } else if i + 1 == n {
            hi
        } else {
            lo + span * i as f64 / (n - 1) as f64
        }
    })
}

/// Local modulus `omega_r(f, (x, y); delta)` on `rect`.
pub fn local_modulus(field: &ScalarField2D, spec: &ModulusSpec, x: f64, y: f64, rect: &Rect) -> Result<f64> {
    if !rect.contains(x, y) {
        return Err(Error::domain(format!("point ({x}, {y}) outside {rect}")));
    }
    if !field.covers(rect) {
        return Err(Error::domain(format!("field is not defined on all of {rect}")));
    }
    Ok(local_modulus_unchecked(field, spec, &difference_weights(spec.r), x, y, rect))
}

fn local_modulus_unchecked(
    field: &ScalarField2D,
    spec: &ModulusSpec,
    weights: &[f64],
    x: f64,
    y: f64,
    rect: &Rect,
) -> f64 {
    if spec.delta == 0.0 {
        return 0.0;
    }
    let r = spec.r as f64;
    let half = r * spec.delta / 2.0;
    let (wx_lo, wx_hi) = ((x - half).max(rect.x_lo), (x + half).min(rect.x_hi));
    let (wy_lo, wy_hi) = ((y - half).max(rect.y_lo), (y + half).min(rect.y_hi));
    let h_max = (wx_hi - wx_lo).min(wy_hi - wy_lo) / r;
    if h_max <= 0.0 {
        return 0.0;
    }
    let steps = spec.h_probes.max(2) - 1;
    let mut sup = 0.0_f64;
    // h = 0 contributes nothing
    for k in 1..=steps {
        let h = if k == steps { h_max } else { h_max * k as f64 / steps as f64 };
        let rh = r * h;
        for t in probe_line(wx_lo, wx_hi - rh, spec.t_probes) {
            for s in probe_line(wy_lo, wy_hi - rh, spec.t_probes) {
                sup = sup.max(diff_raw(field, weights, h, t, s).abs());
            }
        }
    }
    sup
}

/// Local modulus at every node of `grid`, with windows clipped to `grid.rect`.
pub fn local_modulus_samples(field: &ScalarField2D, spec: &ModulusSpec, grid: &Grid2D) -> Result<SampleMatrix> {
    if !field.covers(&grid.rect) {
        return Err(Error::domain(format!("field is not defined on all of {}", grid.rect)));
    }
    let weights = difference_weights(spec.r);
    let rect = grid.rect;
    let omega = sample_with(grid, |x, y| {
        Ok(local_modulus_unchecked(field, spec, &weights, x, y, &rect))
    })?;
    if let Some(bad) = omega.as_slice().iter().find(|v| !v.is_finite()) {
        return Err(Error::domain(format!("local modulus is not finite ({bad})")));
    }
    Ok(omega)
}

/// Averaged modulus `tau_r(f; delta)_{p,q}`: the mixed norm of the local
/// modulus sampled on a `resolution x resolution` midpoint grid.
pub fn tau_modulus(
    field: &ScalarField2D,
    spec: &ModulusSpec,
    rect: Rect,
    exps: MixedExponents,
    resolution: usize,
) -> Result<f64> {
    spec.check_against(&rect)?;
    let grid = make_grid(rect, resolution, resolution)?;
    let omega = local_modulus_samples(field, spec, &grid)?;
    Ok(lpq_norm_of_samples(&omega, &grid, exps, InnerAxis::Y))
}

/// Integral modulus: the largest mixed norm of `|Delta^r_h f|` over the
/// shrunken rectangle `(a, b - r h) x (c, d - r h)`, for `h` on the step grid
/// of `[0, delta]`.
pub fn integral_modulus(
    field: &ScalarField2D,
    spec: &ModulusSpec,
    rect: Rect,
    exps: MixedExponents,
    resolution: usize,
) -> Result<f64> {
    spec.check_against(&rect)?;
    if !field.covers(&rect) {
        return Err(Error::domain(format!("field is not defined on all of {rect}")));
    }
    if spec.delta == 0.0 {
        return Ok(0.0);
    }
    let weights = difference_weights(spec.r);
    let steps = spec.h_probes.max(2) - 1;
    let r = spec.r as f64;
    let norms: Vec<f64> = (1..=steps)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let h = if k == steps { spec.delta } else { spec.delta * k as f64 / steps as f64 };
            let (x_hi, y_hi) = (rect.x_hi - r * h, rect.y_hi - r * h);
            if x_hi <= rect.x_lo || y_hi <= rect.y_lo {
                return Ok(0.0);
            }
            let shrunk = Rect::new(rect.x_lo, x_hi, rect.y_lo, y_hi)?;
            let grid = make_grid(shrunk, resolution, resolution)?;
            let diffs = sample_with(&grid, |x, y| Ok(diff_raw(field, &weights, h, x, y).abs()))?;
            Ok(lpq_norm_of_samples(&diffs, &grid, exps, InnerAxis::Y))
        })
        .collect::<Result<_>>()?;
    Ok(norms.into_iter().fold(0.0, f64::max))
}
