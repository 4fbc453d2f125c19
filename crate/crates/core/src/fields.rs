//! Function handles on rectangles, midpoint grids and sampled matrices.
//!
//! Every norm and modulus in this crate is computed by sampling a
//! [`ScalarField2D`] on the cell centres of a uniform [`Grid2D`]. Nodes never
//! lie on the boundary of the rectangle, and for an even number of cells on a
//! symmetric interval no node lies on the axis, so jump discontinuities along
//! `x = 0` are never evaluated directly.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Slack used when testing whether a computed evaluation point lies in a
/// closed rectangle; absorbs rounding in expressions such as `t + r*h`.
pub(crate) const CONTAINS_SLACK: f64 = 1e-12;

/// Closed axis-aligned rectangle `[x_lo, x_hi] x [y_lo, y_hi]` with nonempty interior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Rect {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Result<Self> {
        let finite = [x_lo, x_hi, y_lo, y_hi].iter().all(|v| v.is_finite());
        if !finite || x_lo >= x_hi || y_lo >= y_hi {
            return Err(Error::domain(format!(
                "degenerate rectangle [{x_lo}, {x_hi}] x [{y_lo}, {y_hi}]"
            )));
        }
        Ok(Rect { x_lo, x_hi, y_lo, y_hi })
    }

    /// `[lo, hi]^2`.
    pub fn square(lo: f64, hi: f64) -> Result<Self> {
        Rect::new(lo, hi, lo, hi)
    }

    /// The operator domain `[-1, 1]^2`.
    pub fn bi_unit() -> Self {
        Rect { x_lo: -1.0, x_hi: 1.0, y_lo: -1.0, y_hi: 1.0 }
    }

    pub fn width(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn height(&self) -> f64 {
        self.y_hi - self.y_lo
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let sx = CONTAINS_SLACK * (1.0 + self.x_lo.abs().max(self.x_hi.abs()));
        let sy = CONTAINS_SLACK * (1.0 + self.y_lo.abs().max(self.y_hi.abs()));
        x >= self.x_lo - sx && x <= self.x_hi + sx && y >= self.y_lo - sy && y <= self.y_hi + sy
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.contains(other.x_lo, other.y_lo) && self.contains(other.x_hi, other.y_hi)
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] x [{}, {}]", self.x_lo, self.x_hi, self.y_lo, self.y_hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Continuity {
    Continuous,
    PiecewiseWithJumps,
}

pub type Evaluator = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A real-valued function of two variables treated as a black box.
///
/// `domain == None` means the evaluator is total on the whole plane. Cloning
/// is cheap; the evaluator is shared.
#[derive(Clone)]
pub struct ScalarField2D {
    evaluator: Evaluator,
    continuity: Continuity,
    sup_bound: Option<f64>,
    domain: Option<Rect>,
}

impl fmt::Debug for ScalarField2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField2D")
            .field("continuity", &self.continuity)
            .field("sup_bound", &self.sup_bound)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl ScalarField2D {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        ScalarField2D {
            evaluator: Arc::new(f),
            continuity: Continuity::Continuous,
            sup_bound: None,
            domain: None,
        }
    }

    pub fn constant(c: f64) -> Self {
        ScalarField2D::new(move |_, _| c).with_sup_bound(c.abs())
    }

    pub fn with_continuity(mut self, continuity: Continuity) -> Self {
        self.continuity = continuity;
        self
    }

    pub fn with_sup_bound(mut self, bound: f64) -> Self {
        self.sup_bound = Some(bound);
        self
    }

    pub fn with_domain(mut self, domain: Rect) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn continuity(&self) -> Continuity {
        self.continuity
    }

    pub fn sup_bound(&self) -> Option<f64> {
        self.sup_bound
    }

    pub fn domain(&self) -> Option<Rect> {
        self.domain
    }

    /// True when the field may be evaluated everywhere on `rect`.
    pub fn covers(&self, rect: &Rect) -> bool {
        self.domain.is_none_or(|d| d.contains_rect(rect))
    }

    /// Raw evaluation with no domain or finiteness checks.
    #[inline]
    pub fn value(&self, x: f64, y: f64) -> f64 {
        (self.evaluator)(x, y)
    }

    /// Checked evaluation: the point must lie in the domain and the value must be finite.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        if let Some(d) = &self.domain {
            if !d.contains(x, y) {
                return Err(Error::domain(format!("point ({x}, {y}) outside field domain {d}")));
            }
        }
        let value = self.value(x, y);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Evaluation { x, y, value })
        }
    }

    /// `a*self + b*other` on the intersection of both domains.
    pub fn linear_combination(&self, a: f64, other: &ScalarField2D, b: f64) -> ScalarField2D {
        let (f, g) = (self.evaluator.clone(), other.evaluator.clone());
        let continuity = if self.continuity == Continuity::Continuous
            && other.continuity == Continuity::Continuous
        {
            Continuity::Continuous
        } else {
            Continuity::PiecewiseWithJumps
        };
        let domain = match (self.domain, other.domain) {
            (None, d) | (d, None) => d,
            (Some(d1), Some(d2)) => Some(Rect {
                x_lo: d1.x_lo.max(d2.x_lo),
                x_hi: d1.x_hi.min(d2.x_hi),
                y_lo: d1.y_lo.max(d2.y_lo),
                y_hi: d1.y_hi.min(d2.y_hi),
            }),
        };
        let sup_bound = match (self.sup_bound, other.sup_bound) {
            (Some(s1), Some(s2)) => Some(a.abs() * s1 + b.abs() * s2),
            _ => None,
        };
        ScalarField2D {
            evaluator: Arc::new(move |x, y| a * f(x, y) + b * g(x, y)),
            continuity,
            sup_bound,
            domain,
        }
    }

    pub fn scaled(&self, c: f64) -> ScalarField2D {
        let f = self.evaluator.clone();
        ScalarField2D {
            evaluator: Arc::new(move |x, y| c * f(x, y)),
            continuity: self.continuity,
            sup_bound: self.sup_bound.map(|s| s * c.abs()),
            domain: self.domain,
        }
    }
}

/// Uniform midpoint grid: `nx * ny` cells, one node at the centre of each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
}

pub fn make_grid(rect: Rect, nx: usize, ny: usize) -> Result<Grid2D> {
    if nx == 0 || ny == 0 {
        return Err(Error::domain(format!("grid needs at least one cell per axis, got {nx}x{ny}")));
    }
    // re-validate in case the caller built the Rect by hand
    let rect = Rect::new(rect.x_lo, rect.x_hi, rect.y_lo, rect.y_hi)?;
    Ok(Grid2D { rect, nx, ny })
}

impl Grid2D {
    pub fn dx(&self) -> f64 {
        self.rect.width() / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.rect.height() / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    #[inline]
    pub fn x_node(&self, i: usize) -> f64 {
        self.rect.x_lo + (i as f64 + 0.5) * self.dx()
    }

    #[inline]
    pub fn y_node(&self, j: usize) -> f64 {
        self.rect.y_lo + (j as f64 + 0.5) * self.dy()
    }

    pub fn x_nodes(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x_node(i)).collect()
    }

    pub fn y_nodes(&self) -> Vec<f64> {
        (0..self.ny).map(|j| self.y_node(j)).collect()
    }
}

/// Values on a grid, stored x-major: entry `(i, j)` belongs to `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    nx: usize,
    ny: usize,
    data: Vec<f64>,
}

impl SampleMatrix {
    pub fn from_vec(nx: usize, ny: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != nx * ny {
            return Err(Error::domain(format!(
                "sample buffer of length {} does not match {nx}x{ny}",
                data.len()
            )));
        }
        Ok(SampleMatrix { nx, ny, data })
    }

    pub fn filled(nx: usize, ny: usize, value: f64) -> Self {
        SampleMatrix { nx, ny, data: vec![value; nx * ny] }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.ny + j]
    }

    /// Values along `y` for a fixed `x_i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.ny..(i + 1) * self.ny]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transposed(&self) -> SampleMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.ny {
            for i in 0..self.nx {
                data.push(self.get(i, j));
            }
        }
        SampleMatrix { nx: self.ny, ny: self.nx, data }
    }

    /// Entrywise `self - other`.
    pub fn minus(&self, other: &SampleMatrix) -> Result<SampleMatrix> {
        if self.nx != other.nx || self.ny != other.ny {
            return Err(Error::domain("sample matrices have different shapes"));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(SampleMatrix { nx: self.nx, ny: self.ny, data })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Evaluate `field` at every grid node. Rows are computed in parallel and
/// assembled in index order, so the result does not depend on scheduling.
pub fn sample_field(field: &ScalarField2D, grid: &Grid2D) -> Result<SampleMatrix> {
    sample_with(grid, |x, y| field.eval(x, y))
}

pub(crate) fn sample_with<F>(grid: &Grid2D, f: F) -> Result<SampleMatrix>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let ys = grid.y_nodes();
    let rows: Vec<Vec<f64>> = (0..grid.nx)
        .into_par_iter()
        .map(|i| {
            let x = grid.x_node(i);
            ys.iter().map(|&y| f(x, y)).collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let data = rows.into_iter().flatten().collect();
    Ok(SampleMatrix { nx: grid.nx, ny: grid.ny, data })
}

/// Midpoint-rule integral of a sampled matrix over its grid.
pub fn midpoint_integral(samples: &SampleMatrix, grid: &Grid2D) -> f64 {
    let mut total = 0.0;
    for i in 0..samples.nx() {
        let row_sum: f64 = samples.row(i).iter().sum();
        total += row_sum;
    }
    total * grid.cell_area()
}
