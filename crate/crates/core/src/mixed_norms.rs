//! Mixed Lebesgue norms.
//!
//! The continuous norm is an iterated midpoint quadrature,
//!
//! ```text
//! ||f||_{p,q} = ( int ( int |f(x,y)|^q dy )^{p/q} dx )^{1/p},
//! ```
//!
//! and the discrete norm replaces each cell average by a per-cell supremum
//! weighted by the cell area, over an admissible partition.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{make_grid, sample_field, Grid2D, Rect, SampleMatrix, ScalarField2D};

/// Default probe lattice per axis for per-cell suprema.
pub const DEFAULT_CELL_PROBES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedExponents {
    pub p: f64,
    pub q: f64,
    /// `q <= p`: the regime in which the embedding, interpolation and rate
    /// estimates are stated.
    pub theorem_valid: bool,
}

impl MixedExponents {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && q.is_finite() && p >= 1.0 && q >= 1.0) {
            return Err(Error::domain(format!("exponents must be finite and >= 1, got ({p}, {q})")));
        }
        Ok(MixedExponents { p, q, theorem_valid: q <= p })
    }

    /// `1/p'` where `1/p + 1/p' = 1`.
    pub fn inv_conjugate_p(&self) -> f64 {
        1.0 - 1.0 / self.p
    }

    pub fn inv_conjugate_q(&self) -> f64 {
        1.0 - 1.0 / self.q
    }
}

/// Which variable the inner `q`-norm integrates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InnerAxis {
    /// Inner integral over `y`, outer over `x`.
    #[default]
    Y,
    /// Inner integral over `x`, outer over `y`: the norm of the field with its
    /// arguments exchanged.
    X,
}

impl std::str::FromStr for InnerAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "y" => Ok(InnerAxis::Y),
            "x" => Ok(InnerAxis::X),
            other => Err(Error::domain(format!("inner axis must be 'x' or 'y', got '{other}'"))),
        }
    }
}

/// `||f||_{L^{p,q}(rect)}` on a `resolution x resolution` midpoint grid.
pub fn lpq_norm(field: &ScalarField2D, rect: Rect, exps: MixedExponents, resolution: usize) -> Result<f64> {
    lpq_norm_oriented(field, rect, exps, resolution, InnerAxis::Y)
}

pub fn lpq_norm_oriented(
    field: &ScalarField2D,
    rect: Rect,
    exps: MixedExponents,
    resolution: usize,
    axis: InnerAxis,
) -> Result<f64> {
    if resolution < 8 {
        return Err(Error::domain(format!("norm resolution must be >= 8, got {resolution}")));
    }
    let grid = make_grid(rect, resolution, resolution)?;
    let samples = sample_field(field, &grid)?;
    Ok(lpq_norm_of_samples(&samples, &grid, exps, axis))
}

/// Mixed norm of values already sampled at the nodes of `grid`.
///
/// Summation order is fixed (outer index ascending, inner index ascending), so
/// the result is reproducible bit for bit.
pub fn lpq_norm_of_samples(samples: &SampleMatrix, grid: &Grid2D, exps: MixedExponents, axis: InnerAxis) -> f64 {
    let (p, q) = (exps.p, exps.q);
    let (outer_step, inner_step) = match axis {
        InnerAxis::Y => (grid.dx(), grid.dy()),
        InnerAxis::X => (grid.dy(), grid.dx()),
    };
    let inner = |values: &mut dyn Iterator<Item = f64>| -> f64 {
        let s: f64 = values.map(|v| v.abs().powf(q)).sum();
        (s * inner_step).powf(p / q)
    };
    let mut outer = 0.0;
    match axis {
        InnerAxis::Y => {
            for i in 0..samples.nx() {
                outer += inner(&mut samples.row(i).iter().copied());
            }
        }
        InnerAxis::X => {
            for j in 0..samples.ny() {
                outer += inner(&mut (0..samples.nx()).map(|i| samples.get(i, j)));
            }
        }
    }
    (outer * outer_step).powf(1.0 / p)
}

/// Axis-wise knot sequences with mesh sizes bounded away from zero.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissiblePartition2D {
    x_knots: Vec<f64>,
    y_knots: Vec<f64>,
    lower_mesh: f64,
    upper_mesh: f64,
}

impl AdmissiblePartition2D {
    pub fn new(x_knots: Vec<f64>, y_knots: Vec<f64>) -> Result<Self> {
        let mut lower = f64::INFINITY;
        let mut upper = 0.0_f64;
        for (name, knots) in [("x", &x_knots), ("y", &y_knots)] {
            if knots.len() < 2 {
                return Err(Error::domain(format!("{name} partition needs at least two knots")));
            }
            for w in knots.windows(2) {
                let gap = w[1] - w[0];
                if !(gap > 0.0) || !gap.is_finite() {
                    return Err(Error::domain(format!(
                        "{name} knots must be finite and strictly increasing ({} then {})",
                        w[0], w[1]
                    )));
                }
                lower = lower.min(gap);
                upper = upper.max(gap);
            }
        }
        Ok(AdmissiblePartition2D { x_knots, y_knots, lower_mesh: lower, upper_mesh: upper })
    }

    pub fn x_knots(&self) -> &[f64] {
        &self.x_knots
    }

    pub fn y_knots(&self) -> &[f64] {
        &self.y_knots
    }

    pub fn lower_mesh(&self) -> f64 {
        self.lower_mesh
    }

    pub fn upper_mesh(&self) -> f64 {
        self.upper_mesh
    }

    /// Rectangle spanned by the partition.
    pub fn extent(&self) -> Rect {
        Rect {
            x_lo: self.x_knots[0],
            x_hi: *self.x_knots.last().unwrap(),
            y_lo: self.y_knots[0],
            y_hi: *self.y_knots.last().unwrap(),
        }
    }

    /// Closed cell `Q_{jk} = [x_{k-1}, x_k] x [y_{j-1}, y_j]` (cells indexed from 0).
    pub fn cell(&self, k: usize, j: usize) -> Rect {
        Rect {
            x_lo: self.x_knots[k],
            x_hi: self.x_knots[k + 1],
            y_lo: self.y_knots[j],
            y_hi: self.y_knots[j + 1],
        }
    }

    pub fn cell_counts(&self) -> (usize, usize) {
        (self.x_knots.len() - 1, self.y_knots.len() - 1)
    }
}

/// The `k/n` partition, `k = -n..=n`, mapped affinely onto the given ranges:
/// `2n` equal cells per axis.
pub fn uniform_admissible_partition(x_range: (f64, f64), y_range: (f64, f64), n: usize) -> Result<AdmissiblePartition2D> {
    if n < 1 {
        return Err(Error::domain("uniform partition needs n >= 1"));
    }
    let knots = |(lo, hi): (f64, f64)| -> Vec<f64> {
        let m = 2 * n;
        (0..=m)
            .map(|i| if i == m { hi } else { lo + (hi - lo) * i as f64 / m as f64 })
            .collect()
    };
    let part = AdmissiblePartition2D::new(knots(x_range), knots(y_range))?;
    // equal spacing up to rounding; report a single mesh size
    let mesh = ((x_range.1 - x_range.0) / (2 * n) as f64).max((y_range.1 - y_range.0) / (2 * n) as f64);
    let lower = ((x_range.1 - x_range.0) / (2 * n) as f64).min((y_range.1 - y_range.0) / (2 * n) as f64);
    Ok(AdmissiblePartition2D { lower_mesh: lower, upper_mesh: mesh, ..part })
}

/// `||f||_{l^{p,q}(Sigma)}` with per-cell suprema taken over a
/// `cell_probes x cell_probes` lattice that includes the cell corners.
///
/// The probed sup is a lower bound of the true cell sup.
pub fn discrete_lpq_norm(
    field: &ScalarField2D,
    partition: &AdmissiblePartition2D,
    exps: MixedExponents,
    cell_probes: usize,
) -> Result<f64> {
    if cell_probes < 2 {
        return Err(Error::domain(format!("cell_probes must be >= 2, got {cell_probes}")));
    }
    let (p, q) = (exps.p, exps.q);
    let (kx, ky) = partition.cell_counts();
    let column_terms: Vec<f64> = (0..kx)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let mut inner = 0.0;
            for j in 0..ky {
                let cell = partition.cell(k, j);
                let sup = cell_sup(field, &cell, cell_probes)?;
                inner += sup.powf(q) * cell.area();
            }
            Ok(inner.powf(p / q))
        })
        .collect::<Result<_>>()?;
    let outer: f64 = column_terms.iter().sum();
    Ok(outer.powf(1.0 / p))
}

fn cell_sup(field: &ScalarField2D, cell: &Rect, probes: usize) -> Result<f64> {
    let last = (probes - 1) as f64;
    let mut sup = 0.0_f64;
    for a in 0..probes {
        let x = if a + 1 == probes { cell.x_hi } else { cell.x_lo + cell.width() * a as f64 / last };
        for b in 0..probes {
            let y = if b + 1 == probes { cell.y_hi } else { cell.y_lo + cell.height() * b as f64 / last };
            sup = sup.max(field.eval(x, y)?.abs());
        }
    }
    Ok(sup)
}
