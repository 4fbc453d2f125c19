//! Numerical experiments: the two benchmark fields, the error table, the
//! ratio study behind the Jackson-type estimate, surface export and the
//! settings file shared by the command-line tool.
//!
//! Computation here is pure. The only functions that touch the filesystem are
//! the explicit `write_*`/`read_*`/`export_*` helpers, which attach the path
//! to any failure.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fields::{make_grid, sample_field, Continuity, Grid2D, Rect, SampleMatrix, ScalarField2D};
use crate::kernels::{SigmoidKind, SigmoidalKernel, DEFAULT_TRUNCATION_RADIUS};
use crate::mixed_norms::{lpq_norm_of_samples, InnerAxis, MixedExponents, DEFAULT_CELL_PROBES};
use crate::operator::{NnOperator, NnOperatorConfig};
use crate::smoothness::{tau_modulus, ModulusSpec, DEFAULT_H_PROBES, DEFAULT_T_PROBES};

/// Ratio spread above which the ratio study reports unbounded growth.
pub const RATIO_SPREAD_LIMIT: f64 = 10.0;

/// `x^2 sin(x + y) + y^2 cos(xy)`.
pub fn test_function_f() -> ScalarField2D {
    ScalarField2D::new(smooth_part).with_continuity(Continuity::Continuous)
}

/// `f + 1` for `x > 0` and `-f - 1` for `x <= 0`.
pub fn test_function_g() -> ScalarField2D {
    ScalarField2D::new(|x, y| {
        let s = smooth_part(x, y);
        if x > 0.0 {
            s + 1.0
        } else {
            -s - 1.0
        }
    })
    .with_continuity(Continuity::PiecewiseWithJumps)
}

fn smooth_part(x: f64, y: f64) -> f64 {
    x * x * (x + y).sin() + y * y * (x * y).cos()
}

/// Which benchmark field a command refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    F,
    G,
}

impl TestFunction {
    pub fn field(self) -> ScalarField2D {
        match self {
            TestFunction::F => test_function_f(),
            TestFunction::G => test_function_g(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::F => "f",
            TestFunction::G => "g",
        }
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f" => Ok(TestFunction::F),
            "g" => Ok(TestFunction::G),
            other => Err(Error::domain(format!("unknown test function '{other}', expected f or g"))),
        }
    }
}

/// Resolution and probe counts used by the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    /// Midpoint grid per axis for error norms.
    pub grid: usize,
    pub cell_probes: usize,
    pub truncation_radius: usize,
    pub t_probes: usize,
    pub h_probes: usize,
    /// Midpoint grid per axis for averaged moduli.
    pub modulus_resolution: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            grid: 512,
            cell_probes: DEFAULT_CELL_PROBES,
            truncation_radius: DEFAULT_TRUNCATION_RADIUS,
            t_probes: DEFAULT_T_PROBES,
            h_probes: DEFAULT_H_PROBES,
            modulus_resolution: 64,
        }
    }
}

impl Settings {
    /// Parse `key = value` lines over the defaults. Blank lines and lines
    /// starting with `#` are ignored; unknown keys are rejected.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut s = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| Error::Parse { path: origin.to_path_buf(), message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key = value", lineno + 1)))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| bad(format!("line {}: '{}' is not a non-negative integer", lineno + 1, value.trim())))?;
            match key.trim() {
                "grid" => s.grid = value,
                "cell_probes" => s.cell_probes = value,
                "truncation_radius" => s.truncation_radius = value,
                "t_probes" => s.t_probes = value,
                "h_probes" => s.h_probes = value,
                "modulus_resolution" => s.modulus_resolution = value,
                other => return Err(bad(format!("line {}: unknown key '{other}'", lineno + 1))),
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        Settings::parse(&text, path)
    }

    pub fn kernel(&self, kind: SigmoidKind) -> SigmoidalKernel {
        SigmoidalKernel::new(kind).with_truncation_radius(self.truncation_radius)
    }

    fn modulus_spec(&self, r: u32, delta: f64) -> Result<ModulusSpec> {
        Ok(ModulusSpec::new(r, delta)?.with_probes(self.t_probes, self.h_probes))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub n: usize,
    pub kernel: SigmoidKind,
    pub p: f64,
    pub q: f64,
    pub error_f: f64,
    pub error_g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportMeta {
    pub grid: usize,
    pub cell_probes: usize,
    pub truncation_radius: usize,
    pub inner_axis: InnerAxis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub meta: ReportMeta,
    pub rows: Vec<ErrorRow>,
}

const ERROR_HEADER: [&str; 6] = ["n", "kernel", "p", "q", "error_f", "error_g"];

impl ErrorReport {
    pub fn row(&self, n: usize, kernel: SigmoidKind) -> Option<&ErrorRow> {
        self.rows.iter().find(|r| r.n == n && r.kernel == kernel)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        let axis = match self.meta.inner_axis {
            InnerAxis::Y => "y",
            InnerAxis::X => "x",
        };
        let _ = writeln!(out, "# grid={}", self.meta.grid);
        let _ = writeln!(out, "# cell_probes={}", self.meta.cell_probes);
        let _ = writeln!(out, "# truncation_radius={}", self.meta.truncation_radius);
        let _ = writeln!(out, "# inner_axis={axis}");
        let mut w = csv::Writer::from_writer(Vec::new());
        let body = (|| -> csv::Result<Vec<u8>> {
            w.write_record(ERROR_HEADER)?;
            for r in &self.rows {
                w.write_record([
                    r.n.to_string(),
                    r.kernel.name().to_string(),
                    fmt_real(r.p),
                    fmt_real(r.q),
                    fmt_real(r.error_f),
                    fmt_real(r.error_g),
                ])?;
            }
            w.into_inner().map_err(|e| e.into_error().into())
        })()
        .map_err(|e| Error::domain(format!("csv encoding failed: {e}")))?;
        out.push_str(&String::from_utf8_lossy(&body));
        Ok(out)
    }

    pub fn from_csv(text: &str, origin: &Path) -> Result<Self> {
        let bad = |message: String| Error::Parse { path: origin.to_path_buf(), message };
        let mut grid = None;
        let mut cell_probes = None;
        let mut truncation_radius = None;
        let mut inner_axis = None;
        for line in text.lines().filter_map(|l| l.trim().strip_prefix('#')) {
            let Some((k, v)) = line.split_once('=') else { continue };
            let v = v.trim();
            let int = |v: &str| v.parse::<usize>().map_err(|_| bad(format!("bad metadata value '{v}'")));
            match k.trim() {
                "grid" => grid = Some(int(v)?),
                "cell_probes" => cell_probes = Some(int(v)?),
                "truncation_radius" => truncation_radius = Some(int(v)?),
                "inner_axis" => inner_axis = Some(v.parse::<InnerAxis>().map_err(|e| bad(e.to_string()))?),
                _ => {}
            }
        }
        let missing = |name: &str| bad(format!("missing metadata '{name}'"));
        let meta = ReportMeta {
            grid: grid.ok_or_else(|| missing("grid"))?,
            cell_probes: cell_probes.ok_or_else(|| missing("cell_probes"))?,
            truncation_radius: truncation_radius.ok_or_else(|| missing("truncation_radius"))?,
            inner_axis: inner_axis.unwrap_or_default(),
        };

        let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
        if header.iter().collect::<Vec<_>>() != ERROR_HEADER {
            return Err(bad(format!("unexpected header {:?}", header)));
        }
        let mut rows = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let field = |c: usize| rec.get(c).unwrap_or("");
            let real = |c: usize| parse_real(field(c)).map_err(|m| bad(format!("row {}: {m}", i + 1)));
            rows.push(ErrorRow {
                n: field(0).parse().map_err(|_| bad(format!("row {}: bad n '{}'", i + 1, field(0))))?,
                kernel: field(1).parse().map_err(|e: Error| bad(e.to_string()))?,
                p: real(2)?,
                q: real(3)?,
                error_f: real(4)?,
                error_g: real(5)?,
            });
        }
        Ok(ErrorReport { meta, rows })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_csv()?)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        ErrorReport::from_csv(&read_text(path)?, path)
    }
}

/// `||F_n f - f||_{p,q}` and `||F_n g - g||_{p,q}` on `[-1, 1]^2` for every
/// kernel (outer loop) and every `n` (inner loop).
pub fn error_table(
    ns: &[usize],
    kernels: &[SigmoidalKernel],
    exps: MixedExponents,
    settings: &Settings,
    axis: InnerAxis,
) -> Result<ErrorReport> {
    error_table_for(&test_function_f(), &test_function_g(), ns, kernels, exps, settings, axis)
}

/// [`error_table`] with caller-chosen fields in place of `f` and `g`.
pub fn error_table_for(
    f: &ScalarField2D,
    g: &ScalarField2D,
    ns: &[usize],
    kernels: &[SigmoidalKernel],
    exps: MixedExponents,
    settings: &Settings,
    axis: InnerAxis,
) -> Result<ErrorReport> {
    if ns.is_empty() || kernels.is_empty() {
        return Err(Error::domain("error table needs at least one n and one kernel"));
    }
    let mut keys = BTreeSet::new();
    for k in kernels {
        for &n in ns {
            if !keys.insert((k.kind, n)) {
                return Err(Error::domain(format!("duplicate table row (n = {n}, kernel = {})", k.kind)));
            }
        }
    }
    let grid = make_grid(Rect::bi_unit(), settings.grid, settings.grid)?;
    let truth_f = sample_field(f, &grid)?;
    let truth_g = sample_field(g, &grid)?;
    let mut rows = Vec::with_capacity(keys.len());
    for kernel in kernels {
        for &n in ns {
            let cfg = NnOperatorConfig::new(n, *kernel)?;
            let err = |field: &ScalarField2D, truth: &SampleMatrix| -> Result<f64> {
                let approx = NnOperator::new(field, cfg)?.apply_grid(&grid)?;
                Ok(lpq_norm_of_samples(&approx.minus(truth)?, &grid, exps, axis))
            };
            rows.push(ErrorRow {
                n,
                kernel: kernel.kind,
                p: exps.p,
                q: exps.q,
                error_f: err(f, &truth_f)?,
                error_g: err(g, &truth_g)?,
            });
        }
    }
    Ok(ErrorReport {
        meta: ReportMeta {
            grid: settings.grid,
            cell_probes: settings.cell_probes,
            truncation_radius: kernels[0].truncation_radius,
            inner_axis: axis,
        },
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRow {
    pub n: usize,
    pub error: f64,
    pub tau1: f64,
    pub tau2: f64,
    /// `error / (tau1 + tau2)`, `None` when both moduli vanish.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub kernel: SigmoidKind,
    pub p: f64,
    pub q: f64,
    pub rows: Vec<RatioRow>,
}

impl RatioReport {
    /// `max ratio / min ratio` over rows with a defined ratio.
    pub fn spread(&self) -> Option<f64> {
        let rs: Vec<f64> = self.rows.iter().filter_map(|r| r.ratio).collect();
        if rs.is_empty() {
            return None;
        }
        let max = rs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = rs.iter().cloned().fold(f64::INFINITY, f64::min);
        Some(max / min)
    }

    /// True when the defined ratios stay within [`RATIO_SPREAD_LIMIT`].
    pub fn bounded(&self) -> bool {
        self.spread().map_or(true, |s| s <= RATIO_SPREAD_LIMIT)
    }

    pub fn skipped(&self) -> usize {
        self.rows.iter().filter(|r| r.ratio.is_none()).count()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let body = (|| -> csv::Result<Vec<u8>> {
            w.write_record(["n", "kernel", "p", "q", "error", "tau1", "tau2", "ratio"])?;
            for r in &self.rows {
                w.write_record([
                    r.n.to_string(),
                    self.kernel.name().to_string(),
                    fmt_real(self.p),
                    fmt_real(self.q),
                    fmt_real(r.error),
                    fmt_real(r.tau1),
                    fmt_real(r.tau2),
                    r.ratio.map(fmt_real).unwrap_or_else(|| "skipped".to_string()),
                ])?;
            }
            w.into_inner().map_err(|e| e.into_error().into())
        })()
        .map_err(|e| Error::domain(format!("csv encoding failed: {e}")))?;
        Ok(String::from_utf8_lossy(&body).into_owned())
    }
}

/// Error of `F_n f` next to `tau_1(f, 1/n)` and `tau_2(f, 1/n)` on
/// `[-1, 1]^2` for each `n`. Only the `q <= p` regime is accepted.
pub fn theorem3_ratio_study(
    field: &ScalarField2D,
    kernel: SigmoidalKernel,
    ns: &[usize],
    exps: MixedExponents,
    settings: &Settings,
) -> Result<RatioReport> {
    if !exps.theorem_valid {
        return Err(Error::domain(format!(
            "the estimate is stated for q <= p, got ({}, {})",
            exps.p, exps.q
        )));
    }
    if ns.is_empty() {
        return Err(Error::domain("ratio study needs at least one n"));
    }
    let rect = Rect::bi_unit();
    let grid = make_grid(rect, settings.grid, settings.grid)?;
    let truth = sample_field(field, &grid)?;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let cfg = NnOperatorConfig::new(n, kernel)?;
        let approx = NnOperator::new(field, cfg)?.apply_grid(&grid)?;
        let error = lpq_norm_of_samples(&approx.minus(&truth)?, &grid, exps, InnerAxis::Y);
        let delta = 1.0 / n as f64;
        let tau1 = tau_modulus(field, &settings.modulus_spec(1, delta)?, rect, exps, settings.modulus_resolution)?;
        let tau2 = tau_modulus(field, &settings.modulus_spec(2, delta)?, rect, exps, settings.modulus_resolution)?;
        let denom = tau1 + tau2;
        let ratio = (denom > 0.0).then(|| error / denom);
        rows.push(RatioRow { n, error, tau1, tau2, ratio });
    }
    Ok(RatioReport { kernel: kernel.kind, p: exps.p, q: exps.q, rows })
}

/// Grid nodes and values read back from a surface file.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub x_nodes: Vec<f64>,
    pub y_nodes: Vec<f64>,
    pub values: SampleMatrix,
}

/// CSV text with header `x,y,value`, x-major over the grid.
pub fn surface_csv(values: &SampleMatrix, grid: &Grid2D) -> Result<String> {
    if values.nx() != grid.nx || values.ny() != grid.ny {
        return Err(Error::domain(format!(
            "sample matrix is {}x{} but grid is {}x{}",
            values.nx(),
            values.ny(),
            grid.nx,
            grid.ny
        )));
    }
    let mut out = String::with_capacity(64 * grid.nx * grid.ny + 16);
    out.push_str("x,y,value\n");
    let ys = grid.y_nodes();
    for (i, x) in grid.x_nodes().into_iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", fmt_real(x), fmt_real(*y), fmt_real(values.get(i, j)));
        }
    }
    Ok(out)
}

pub fn parse_surface(text: &str, origin: &Path) -> Result<Surface> {
    let bad = |message: String| Error::Parse { path: origin.to_path_buf(), message };
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["x", "y", "value"] {
        return Err(bad(format!("expected header x,y,value, got {:?}", header)));
    }
    let mut triples = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let mut t = [0.0; 3];
        for (c, slot) in t.iter_mut().enumerate() {
            *slot = parse_real(rec.get(c).unwrap_or("")).map_err(|m| bad(format!("row {}: {m}", i + 1)))?;
        }
        triples.push(t);
    }
    if triples.is_empty() {
        return Err(bad("surface has no data rows".into()));
    }
    let ny = triples.iter().take_while(|t| t[0] == triples[0][0]).count();
    if triples.len() % ny != 0 {
        return Err(bad(format!("{} rows do not form a grid with {ny} y nodes", triples.len())));
    }
    let nx = triples.len() / ny;
    let y_nodes: Vec<f64> = triples[..ny].iter().map(|t| t[1]).collect();
    let x_nodes: Vec<f64> = (0..nx).map(|i| triples[i * ny][0]).collect();
    for (idx, t) in triples.iter().enumerate() {
        if t[0] != x_nodes[idx / ny] || t[1] != y_nodes[idx % ny] {
            return Err(bad(format!("row {} breaks the x-major grid layout", idx + 1)));
        }
    }
    let values = SampleMatrix::from_vec(nx, ny, triples.iter().map(|t| t[2]).collect())?;
    Ok(Surface { x_nodes, y_nodes, values })
}

pub fn export_surface(values: &SampleMatrix, grid: &Grid2D, path: &Path) -> Result<()> {
    write_text(path, &surface_csv(values, grid)?)
}

pub fn read_surface(path: &Path) -> Result<Surface> {
    parse_surface(&read_text(path)?, path)
}

/// Seventeen significant digits: enough for any `f64` to survive a text round trip.
fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_real(s: &str) -> std::result::Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("'{s}' is not a number"))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn origin() -> PathBuf {
        PathBuf::from("<test>")
    }

    #[test]
    fn benchmark_values() {
        let f = test_function_f();
        let g = test_function_g();
        assert_eq!(f.value(0.0, 0.0), 0.0);
        assert!((f.value(1.0, 1.0) - (2f64.sin() + 1f64.cos())).abs() < 1e-15);
        assert!((f.value(1.0, 1.0) - 1.449600).abs() < 1e-6);
        assert!((f.value(-1.0, 1.0) - 0.540302).abs() < 1e-6);
        assert!((g.value(0.5, 0.0) - 1.119857).abs() < 1e-6);
        assert!((g.value(-0.5, 0.0) + 0.880143).abs() < 1e-6);
        assert!((g.value(0.0, 0.3) + 1.09).abs() < 1e-15);
        assert_eq!(g.continuity(), Continuity::PiecewiseWithJumps);
        assert_eq!(f.continuity(), Continuity::Continuous);
    }

    #[test]
    fn settings_file_overrides_defaults() {
        let s = Settings::parse("# comment\ngrid = 128\n\nt_probes=9\n", &origin()).unwrap();
        assert_eq!(s.grid, 128);
        assert_eq!(s.t_probes, 9);
        assert_eq!(s.truncation_radius, DEFAULT_TRUNCATION_RADIUS);
        assert!(Settings::parse("grid = big", &origin()).is_err());
        assert!(Settings::parse("colour = 3", &origin()).is_err());
        assert!(Settings::parse("grid 3", &origin()).is_err());
    }

    fn small_settings() -> Settings {
        Settings { grid: 64, modulus_resolution: 16, t_probes: 9, h_probes: 5, ..Settings::default() }
    }

    #[test]
    fn constant_fields_give_zero_table_error() {
        let c = ScalarField2D::constant(2.5);
        let exps = MixedExponents::new(2.0, 3.0).unwrap();
        let rep = error_table_for(&c, &c, &[5, 9], &[SigmoidalKernel::logistic()], exps, &small_settings(), InnerAxis::Y)
            .unwrap();
        for r in &rep.rows {
            assert!(r.error_f < 1e-12 && r.error_g < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn duplicate_rows_are_rejected() {
        let exps = MixedExponents::new(2.0, 2.0).unwrap();
        let k = SigmoidalKernel::logistic();
        assert!(error_table(&[4, 4], &[k], exps, &small_settings(), InnerAxis::Y).is_err());
        assert!(error_table(&[], &[k], exps, &small_settings(), InnerAxis::Y).is_err());
    }

    #[test]
    fn report_csv_round_trip_and_determinism() {
        let exps = MixedExponents::new(2.0, 3.0).unwrap();
        let ks = [SigmoidalKernel::logistic(), SigmoidalKernel::tanh()];
        let a = error_table(&[4, 6], &ks, exps, &small_settings(), InnerAxis::X).unwrap();
        let b = error_table(&[4, 6], &ks, exps, &small_settings(), InnerAxis::X).unwrap();
        let text = a.to_csv().unwrap();
        assert_eq!(text, b.to_csv().unwrap());
        let back = ErrorReport::from_csv(&text, &origin()).unwrap();
        assert_eq!(back, a);
        assert_eq!(a.rows[0].kernel, SigmoidKind::Logistic);
        assert_eq!(a.rows[2].kernel, SigmoidKind::Tanh);
    }

    #[test]
    fn malformed_report_is_a_parse_error() {
        let err = ErrorReport::from_csv("n,kernel\n1,logistic\n", &origin()).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn surface_round_trip_is_exact() {
        let grid = make_grid(Rect::bi_unit(), 7, 5).unwrap();
        let vals = sample_field(&test_function_g(), &grid).unwrap();
        let s = parse_surface(&surface_csv(&vals, &grid).unwrap(), &origin()).unwrap();
        assert_eq!(s.values, vals);
        assert_eq!(s.x_nodes, grid.x_nodes());
        assert_eq!(s.y_nodes, grid.y_nodes());
    }

    #[test]
    fn constant_surface_has_one_row_per_node() {
        let grid = make_grid(Rect::bi_unit(), 2, 2).unwrap();
        let text = surface_csv(&SampleMatrix::filled(2, 2, 1.0), &grid).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "x,y,value");
        assert!(lines[1..].iter().all(|l| l.ends_with(",1.0000000000000000e0")));
    }

    #[test]
    fn ratio_study_skips_constants_and_requires_regime() {
        let k = SigmoidalKernel::logistic();
        let ok = MixedExponents::new(3.0, 2.0).unwrap();
        let rep = theorem3_ratio_study(&ScalarField2D::constant(1.0), k, &[4, 8], ok, &small_settings()).unwrap();
        assert_eq!(rep.skipped(), 2);
        assert!(rep.spread().is_none());
        assert!(rep.to_csv().unwrap().contains("skipped"));
        let bad = MixedExponents::new(2.0, 3.0).unwrap();
        assert!(theorem3_ratio_study(&test_function_f(), k, &[4], bad, &small_settings()).is_err());
    }

    #[test]
    fn missing_file_reports_path() {
        let p = PathBuf::from("/nonexistent/dir/surface.csv");
        match read_surface(&p).unwrap_err() {
            Error::Io { path, .. } => assert_eq!(path, p),
            e => panic!("unexpected {e}"),
        }
    }
}
