//! The neural-network sampling operator on `[-1, 1]^2`:
//!
//! ```text
//! F_n f(x, y) = sum_{k,j=-n..n} f(k/n, j/n) psi(nx - k, ny - j)
//!             / sum_{k,j=-n..n} psi(nx - k, ny - j)
//! ```
//!
//! `psi` is a tensor product, so both sums factor through per-axis weight
//! vectors. Grid evaluation caches one weight vector per grid column and one
//! partially contracted sample table per grid row, which brings a `G x G` grid
//! down from `O(G^2 n^2)` to `O(G^2 n + G n^2)` work.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{make_grid, Grid2D, Rect, SampleMatrix, ScalarField2D};
use crate::kernels::{Activation, SigmoidalKernel};
use crate::mixed_norms::{
    discrete_lpq_norm, lpq_norm_of_samples, uniform_admissible_partition, InnerAxis, MixedExponents,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NnOperatorConfig {
    pub n: usize,
    pub kernel: SigmoidalKernel,
}

impl NnOperatorConfig {
    pub fn new(n: usize, kernel: SigmoidalKernel) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("operator index n must be >= 1"));
        }
        if !(kernel.psi_11() > 0.0) {
            return Err(Error::domain("kernel must satisfy psi(1,1) > 0"));
        }
        Ok(NnOperatorConfig { n, kernel })
    }
}

/// `F_n` bound to the samples of one field.
#[derive(Debug, Clone)]
pub struct NnOperator {
    cfg: NnOperatorConfig,
    /// `f(k/n, j/n)`, row index `k + n`, column index `j + n`.
    samples: Vec<f64>,
}

impl NnOperator {
    pub fn new(field: &ScalarField2D, cfg: NnOperatorConfig) -> Result<Self> {
        let n = cfg.n as i64;
        let nf = cfg.n as f64;
        let mut samples = Vec::with_capacity((2 * cfg.n + 1).pow(2));
        for k in -n..=n {
            for j in -n..=n {
                samples.push(field.eval(k as f64 / nf, j as f64 / nf)?);
            }
        }
        Ok(NnOperator { cfg, samples })
    }

    pub fn config(&self) -> &NnOperatorConfig {
        &self.cfg
    }

    fn width(&self) -> usize {
        2 * self.cfg.n + 1
    }

    /// `phi(n t - k)` for `k = -n..=n` and their sum.
    fn axis_weights(&self, t: f64) -> (Vec<f64>, f64) {
        let n = self.cfg.n as i64;
        let nt = self.cfg.n as f64 * t;
        let w: Vec<f64> = (-n..=n).map(|k| self.cfg.kernel.phi(nt - k as f64)).collect();
        let s = w.iter().sum();
        (w, s)
    }

    /// `sum_j f(k/n, j/n) wy[j]` for every `k`.
    fn contract_y(&self, wy: &[f64]) -> Vec<f64> {
        let m = self.width();
        (0..m)
            .map(|k| {
                let row = &self.samples[k * m..(k + 1) * m];
                let mut acc = 0.0;
                for (v, w) in row.iter().zip(wy) {
                    acc += v * w;
                }
                acc
            })
            .collect()
    }

    fn combine(wx: &[f64], sx: f64, contracted: &[f64], sy: f64) -> f64 {
        let mut num = 0.0;
        for (w, c) in wx.iter().zip(contracted) {
            num += w * c;
        }
        num / (sx * sy)
    }

    pub fn apply(&self, x: f64, y: f64) -> Result<f64> {
        check_in_square(x, y)?;
        let (wx, sx) = self.axis_weights(x);
        let (wy, sy) = self.axis_weights(y);
        Ok(Self::combine(&wx, sx, &self.contract_y(&wy), sy))
    }

    /// Values at every node of `grid`, bit-identical to [`NnOperator::apply`].
    pub fn apply_grid(&self, grid: &Grid2D) -> Result<SampleMatrix> {
        if !Rect::bi_unit().contains_rect(&grid.rect) {
            return Err(Error::domain(format!("grid {} is not inside [-1, 1]^2", grid.rect)));
        }
        let columns: Vec<(Vec<f64>, f64)> = grid
            .y_nodes()
            .par_iter()
            .map(|&y| {
                let (wy, sy) = self.axis_weights(y);
                (self.contract_y(&wy), sy)
            })
            .collect();
        let rows: Vec<Vec<f64>> = grid
            .x_nodes()
            .par_iter()
            .map(|&x| {
                let (wx, sx) = self.axis_weights(x);
                columns.iter().map(|(c, sy)| Self::combine(&wx, sx, c, *sy)).collect()
            })
            .collect();
        SampleMatrix::from_vec(grid.nx, grid.ny, rows.into_iter().flatten().collect())
    }
}

fn check_in_square(x: f64, y: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&x) && (-1.0..=1.0).contains(&y) {
        Ok(())
    } else {
        Err(Error::domain(format!("({x}, {y}) is outside [-1, 1]^2")))
    }
}

pub fn nn_apply(field: &ScalarField2D, cfg: NnOperatorConfig, x: f64, y: f64) -> Result<f64> {
    check_in_square(x, y)?;
    NnOperator::new(field, cfg)?.apply(x, y)
}

pub fn nn_apply_grid(field: &ScalarField2D, cfg: NnOperatorConfig, grid: &Grid2D) -> Result<SampleMatrix> {
    NnOperator::new(field, cfg)?.apply_grid(grid)
}

/// The normaliser `sum_{k,j=-n..n} psi(nx - k, ny - j)`.
pub fn nn_denominator(cfg: NnOperatorConfig, x: f64, y: f64) -> Result<f64> {
    check_in_square(x, y)?;
    let n = cfg.n as i64;
    let axis = |t: f64| -> f64 { (-n..=n).map(|k| cfg.kernel.phi(cfg.n as f64 * t - k as f64)).sum() };
    Ok(axis(x) * axis(y))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    /// `||F_n f||_{p,q}` on `[-1, 1]^2`.
    pub lhs: f64,
    /// `||f||_{l^{p,q}(Sigma)} * psi(1,1)^{-(1/p + 1/q)/2}` on the `k/n` partition.
    pub rhs: f64,
    pub holds: bool,
}

/// Compare `||F_n f||_{p,q}` with the discrete-norm bound. Requires
/// `exps.theorem_valid`; use [`stability_check_with`] to test other exponents.
pub fn stability_check(
    field: &ScalarField2D,
    cfg: NnOperatorConfig,
    exps: MixedExponents,
    resolution: usize,
) -> Result<StabilityReport> {
    stability_check_with(field, cfg, exps, resolution, crate::mixed_norms::DEFAULT_CELL_PROBES, true)
}

pub fn stability_check_with(
    field: &ScalarField2D,
    cfg: NnOperatorConfig,
    exps: MixedExponents,
    resolution: usize,
    cell_probes: usize,
    require_theorem_regime: bool,
) -> Result<StabilityReport> {
    if require_theorem_regime && !exps.theorem_valid {
        return Err(Error::domain(format!(
            "stability bound is stated for q <= p, got ({}, {})",
            exps.p, exps.q
        )));
    }
    let grid = make_grid(Rect::bi_unit(), resolution, resolution)?;
    let approx = nn_apply_grid(field, cfg, &grid)?;
    let lhs = lpq_norm_of_samples(&approx, &grid, exps, InnerAxis::Y);
    let partition = uniform_admissible_partition((-1.0, 1.0), (-1.0, 1.0), cfg.n)?;
    let discrete = discrete_lpq_norm(field, &partition, exps, cell_probes)?;
    let factor = cfg.kernel.psi_11().powf(-0.5 * (1.0 / exps.p + 1.0 / exps.q));
    let rhs = discrete * factor;
    Ok(StabilityReport { lhs, rhs, holds: lhs <= rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::algebraic_moment;
    use crate::mixed_norms::lpq_norm;
    use crate::test_support::random_trig_field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn test_f() -> ScalarField2D {
        ScalarField2D::new(|x, y| x * x * (x + y).sin() + y * y * (x * y).cos())
    }

    fn cfg(n: usize, k: SigmoidalKernel) -> NnOperatorConfig {
        NnOperatorConfig::new(n, k).unwrap()
    }

    /// Compensated double sum with psi built from sigma differences.
    fn direct_sum(f: &ScalarField2D, k: SigmoidalKernel, n: i64, x: f64, y: f64) -> f64 {
        let sigma = |u: f64| 1.0 / (1.0 + (-u).exp());
        let phi = |v: f64| 0.5 * (sigma(v + 1.0) - sigma(v - 1.0));
        assert_eq!(k, SigmoidalKernel::logistic());
        let (mut num, mut cn, mut den, mut cd) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
        let neumaier = |s: &mut f64, c: &mut f64, v: f64| {
            let t = *s + v;
            if s.abs() >= v.abs() {
                *c += (*s - t) + v;
            } else {
                *c += (v - t) + *s;
            }
            *s = t;
        };
        let nf = n as f64;
        for a in -n..=n {
            for b in -n..=n {
                let w = phi(nf * x - a as f64) * phi(nf * y - b as f64);
                neumaier(&mut num, &mut cn, f.value(a as f64 / nf, b as f64 / nf) * w);
                neumaier(&mut den, &mut cd, w);
            }
        }
        (num + cn) / (den + cd)
    }

    #[test]
    fn reproduces_constants() {
        for k in [SigmoidalKernel::logistic(), SigmoidalKernel::tanh()] {
            for n in [1, 5, 20] {
                for c in [-3.0, 0.0, 1.0] {
                    let v = nn_apply(&ScalarField2D::constant(c), cfg(n, k), 0.33, -0.71).unwrap();
                    assert!((v - c).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn matches_direct_sum_oracle() {
        let f = test_f();
        let k = SigmoidalKernel::logistic();
        let v = nn_apply(&f, cfg(20, k), 0.0, 0.0).unwrap();
        assert!((v - direct_sum(&f, k, 20, 0.0, 0.0)).abs() < 1e-12);

        let grid = make_grid(Rect::bi_unit(), 256, 256).unwrap();
        let m = nn_apply_grid(&f, cfg(20, k), &grid).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let (i, j) = (rng.gen_range(0..256), rng.gen_range(0..256));
            let oracle = direct_sum(&f, k, 20, grid.x_node(i), grid.y_node(j));
            assert!((m.get(i, j) - oracle).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_path_is_bit_identical() {
        let f = test_f();
        let op = NnOperator::new(&f, cfg(13, SigmoidalKernel::tanh())).unwrap();
        let grid = make_grid(Rect::new(-1.0, 0.5, -0.2, 1.0).unwrap(), 31, 17).unwrap();
        let m = op.apply_grid(&grid).unwrap();
        for &(i, j) in &[(0, 0), (30, 16), (12, 9)] {
            assert_eq!(m.get(i, j).to_bits(), op.apply(grid.x_node(i), grid.y_node(j)).unwrap().to_bits());
        }
        let c = nn_apply_grid(&ScalarField2D::constant(2.0), cfg(7, SigmoidalKernel::logistic()), &grid).unwrap();
        assert!(c.as_slice().iter().all(|v| (v - 2.0).abs() < 1e-12));
    }

    #[test]
    fn domain_errors() {
        let f = test_f();
        assert!(matches!(nn_apply(&f, cfg(3, SigmoidalKernel::logistic()), 1.2, 0.0), Err(Error::Domain(_))));
        assert!(NnOperatorConfig::new(0, SigmoidalKernel::logistic()).is_err());
        let outside = make_grid(Rect::square(0.0, 1.5).unwrap(), 4, 4).unwrap();
        assert!(nn_apply_grid(&f, cfg(3, SigmoidalKernel::logistic()), &outside).is_err());
        let small = ScalarField2D::new(|x, y| x + y).with_domain(Rect::square(-0.5, 0.5).unwrap());
        assert!(NnOperator::new(&small, cfg(2, SigmoidalKernel::logistic())).is_err());
    }

    #[test]
    fn denominator_bounded_below() {
        for k in [SigmoidalKernel::logistic(), SigmoidalKernel::tanh()] {
            for n in [1, 4, 20] {
                let grid = make_grid(Rect::bi_unit(), 256, 256).unwrap();
                let mut min = f64::INFINITY;
                for x in grid.x_nodes() {
                    for y in [-1.0, -0.999, 0.0, 0.51, 1.0] {
                        min = min.min(nn_denominator(cfg(n, k), x, y).unwrap());
                    }
                }
                min = min.min(nn_denominator(cfg(n, k), 1.0, 1.0).unwrap());
                assert!(min >= k.psi_11() - 1e-12, "{k:?} n={n}: {min}");
            }
        }
    }

    #[test]
    fn well_definedness_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let k = SigmoidalKernel::logistic();
        let raw = random_trig_field(&mut rng, 3);
        let f = raw.scaled(1.0 / raw.sup_bound().unwrap());
        let op = NnOperator::new(&f, cfg(10, k)).unwrap();
        for _ in 0..100 {
            let (x, y) = (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
            assert!(op.apply(x, y).unwrap().abs() <= 1.0 / k.psi_11());
        }
    }

    #[test]
    fn linear_in_the_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (f, g) = (random_trig_field(&mut rng, 2), random_trig_field(&mut rng, 2));
        let c = cfg(9, SigmoidalKernel::tanh());
        let comb = f.linear_combination(0.3, &g, -2.0);
        for _ in 0..10 {
            let (x, y) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let lhs = nn_apply(&comb, c, x, y).unwrap();
            let rhs = 0.3 * nn_apply(&f, c, x, y).unwrap() - 2.0 * nn_apply(&g, c, x, y).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn error_shrinks_with_n() {
        let f = test_f();
        let e = MixedExponents::new(2.0, 3.0).unwrap();
        let err = |n: usize| {
            let g = ScalarField2D::new({
                let op = NnOperator::new(&f, cfg(n, SigmoidalKernel::logistic())).unwrap();
                let f = f.clone();
                move |x, y| op.apply(x, y).unwrap() - f.value(x, y)
            });
            lpq_norm(&g, Rect::bi_unit(), e, 64).unwrap()
        };
        let (e10, e20, e40) = (err(10), err(20), err(40));
        assert!(e40 < e20 && e20 < e10, "{e10} {e20} {e40}");
    }

    #[test]
    fn normaliser_truncation_is_converged() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for k in [SigmoidalKernel::logistic(), SigmoidalKernel::tanh()] {
            for _ in 0..20 {
                let (x, y) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let n = 20.0;
                let m20 = algebraic_moment(&k, 0, 0, n * x, n * y, 40).value;
                let m80 = algebraic_moment(&k, 0, 0, n * x, n * y, 80).value;
                assert!((m20 - m80).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn stability_bound() {
        let k = SigmoidalKernel::logistic();
        let e23 = MixedExponents::new(2.0, 3.0).unwrap();
        let one = stability_check_with(&ScalarField2D::constant(1.0), cfg(10, k), e23, 64, 5, false).unwrap();
        assert!((one.lhs - 2f64.powf(5.0 / 6.0)).abs() < 1e-10);
        assert!(one.holds && one.rhs > one.lhs);
        let zero = stability_check_with(&ScalarField2D::constant(0.0), cfg(10, k), e23, 64, 5, false).unwrap();
        assert_eq!((zero.lhs, zero.rhs), (0.0, 0.0));
        assert!(zero.holds);
        assert!(stability_check(&ScalarField2D::constant(1.0), cfg(10, k), e23, 64).is_err());
        let e32 = MixedExponents::new(3.0, 2.0).unwrap();
        assert!(stability_check(&test_f(), cfg(10, k), e32, 64).unwrap().holds);
    }
}
