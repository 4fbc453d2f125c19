use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nnsampling::experiments::{
    error_table, export_surface, theorem3_ratio_study, Settings, TestFunction,
};
use nnsampling::fields::{make_grid, sample_field, Rect};
use nnsampling::kernels::{absolute_moment, algebraic_moment, verify_axioms, SigmoidKind, DEFAULT_MOMENT_PROBES};
use nnsampling::mixed_norms::{
    discrete_lpq_norm, lpq_norm_oriented, uniform_admissible_partition, InnerAxis, MixedExponents,
};
use nnsampling::operator::{nn_apply, nn_apply_grid, NnOperatorConfig};
use nnsampling::smoothness::{tau_modulus, ModulusSpec};
use nnsampling::{Error, Result};

#[derive(Parser)]
#[command(name = "nnsamp", about = "Neural-network sampling operators in mixed Lebesgue norms")]
struct Cli {
    /// Settings file with `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the CSV report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Exponents {
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 3.0)]
    q: f64,
}

impl Exponents {
    fn get(&self) -> Result<MixedExponents> {
        MixedExponents::new(self.p, self.q)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the kernel axioms.
    Axioms {
        #[arg(long, default_value = "logistic")]
        kernel: SigmoidKind,
        #[arg(long, default_value_t = 2001)]
        probes: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Absolute and algebraic moments of psi.
    Moments {
        #[arg(long, default_value = "logistic")]
        kernel: SigmoidKind,
        #[arg(long, default_value_t = 0)]
        n1: u32,
        #[arg(long, default_value_t = 0)]
        n2: u32,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        u: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        v: f64,
    },
    /// Mixed norm of a benchmark field on [-1, 1]^2.
    Norm {
        #[command(flatten)]
        exps: Exponents,
        #[arg(long)]
        grid: Option<usize>,
        /// Use the discrete norm over the uniform k/n partition.
        #[arg(long)]
        discrete: bool,
        #[arg(long, default_value_t = 20)]
        mesh_n: usize,
        #[arg(long, default_value = "f")]
        function: TestFunction,
        #[arg(long, default_value = "y")]
        inner_axis: InnerAxis,
    },
    /// Averaged modulus of smoothness of a benchmark field.
    Tau {
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        exps: Exponents,
        #[arg(long, default_value = "f")]
        function: TestFunction,
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// Evaluate F_n at one point.
    Approx {
        #[arg(long, default_value = "logistic")]
        kernel: SigmoidKind,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, default_value = "f")]
        function: TestFunction,
    },
    /// Error table for both benchmark fields and both kernels.
    Table1 {
        #[arg(long, value_delimiter = ',', default_value = "20,30")]
        ns: Vec<usize>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "logistic,tanh")]
        kernels: Vec<SigmoidKind>,
        #[command(flatten)]
        exps: Exponents,
        /// Variable of the inner integral.
        #[arg(long, default_value = "x")]
        inner_axis: InnerAxis,
    },
    /// Error against tau_1 + tau_2 for a sequence of n.
    Ratios {
        #[arg(long, value_delimiter = ',', default_value = "10,20,40,80")]
        ns: Vec<usize>,
        #[arg(long, default_value = "logistic")]
        kernel: SigmoidKind,
        #[arg(long, default_value_t = 3.0)]
        p: f64,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value = "f")]
        function: TestFunction,
    },
    /// Write F_n of a benchmark field (or the field itself) as an x,y,value CSV.
    ExportSurface {
        #[arg(long, default_value = "logistic")]
        kernel: SigmoidKind,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value = "f")]
        function: TestFunction,
        #[arg(long, default_value_t = 128)]
        grid: usize,
        /// Export the field instead of its approximation.
        #[arg(long)]
        exact: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nnsamp: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let settings = match &cli.config {
        Some(p) => Settings::load(p)?,
        None => Settings::default(),
    };
    let bi = Rect::bi_unit();
    let report = match cli.cmd {
        Command::Axioms { kernel, probes, tol } => {
            let r = verify_axioms(&settings.kernel(kernel), probes, tol);
            format!(
                "kernel,a1_odd_defect,a2_concavity_defect,a3_tail_exponent,a3_decay_ok,monotone_ok,limits_ok,passes\n\
                 {kernel},{:e},{:e},{},{},{},{},{}\n",
                r.a1_odd_defect,
                r.a2_concavity_defect,
                r.a3_tail_exponent,
                r.a3_decay_ok,
                r.monotone_ok,
                r.limits_ok,
                r.passes
            )
        }
        Command::Moments { kernel, n1, n2, u, v } => {
            let k = settings.kernel(kernel);
            let abs = absolute_moment(&k, n1, n2, settings.truncation_radius, DEFAULT_MOMENT_PROBES);
            let alg = algebraic_moment(&k, n1, n2, u, v, settings.truncation_radius);
            format!(
                "kernel,n1,n2,u,v,absolute,absolute_tail,algebraic,algebraic_tail\n{kernel},{n1},{n2},{u},{v},{},{:e},{},{:e}\n",
                abs.value, abs.tail_estimate, alg.value, alg.tail_estimate
            )
        }
        Command::Norm { exps, grid, discrete, mesh_n, function, inner_axis } => {
            let e = exps.get()?;
            let field = function.field();
            let (kind, value) = if discrete {
                let part = uniform_admissible_partition((-1.0, 1.0), (-1.0, 1.0), mesh_n)?;
                ("discrete", discrete_lpq_norm(&field, &part, e, settings.cell_probes)?)
            } else {
                let g = grid.unwrap_or(settings.grid);
                ("continuous", lpq_norm_oriented(&field, bi, e, g, inner_axis)?)
            };
            format!("function,p,q,kind,value\n{},{},{},{kind},{value}\n", function.name(), e.p, e.q)
        }
        Command::Tau { r, delta, exps, function, resolution } => {
            let e = exps.get()?;
            let spec = ModulusSpec::new(r, delta)?.with_probes(settings.t_probes, settings.h_probes);
            let res = resolution.unwrap_or(settings.modulus_resolution);
            let t = tau_modulus(&function.field(), &spec, bi, e, res)?;
            format!("function,r,delta,p,q,tau\n{},{r},{delta},{},{},{t}\n", function.name(), e.p, e.q)
        }
        Command::Approx { kernel, n, x, y, function } => {
            let field = function.field();
            let cfg = NnOperatorConfig::new(n, settings.kernel(kernel))?;
            let v = nn_apply(&field, cfg, x, y)?;
            let exact = field.eval(x, y)?;
            format!("kernel,n,function,x,y,approx,exact\n{kernel},{n},{},{x},{y},{v},{exact}\n", function.name())
        }
        Command::Table1 { ns, grid, kernels, exps, inner_axis } => {
            let mut s = settings;
            if let Some(g) = grid {
                s.grid = g;
            }
            let ks: Vec<_> = kernels.into_iter().map(|k| s.kernel(k)).collect();
            error_table(&ns, &ks, exps.get()?, &s, inner_axis)?.to_csv()?
        }
        Command::Ratios { ns, kernel, p, q, function } => {
            let e = MixedExponents::new(p, q)?;
            let rep = theorem3_ratio_study(&function.field(), settings.kernel(kernel), &ns, e, &settings)?;
            let mut text = rep.to_csv()?;
            match rep.spread() {
                Some(s) => {
                    let _ = writeln!(text, "# spread={s:.6} bounded={}", rep.bounded());
                }
                None => text.push_str("# spread=undefined\n"),
            }
            text
        }
        Command::ExportSurface { kernel, n, function, grid, exact } => {
            let out = cli.out.as_deref().ok_or_else(|| Error::Domain("export-surface needs --out PATH".into()))?;
            let g = make_grid(bi, grid, grid)?;
            let field = function.field();
            let values = if exact {
                sample_field(&field, &g)?
            } else {
                nn_apply_grid(&field, NnOperatorConfig::new(n, settings.kernel(kernel))?, &g)?
            };
            export_surface(&values, &g, out)?;
            return Ok(());
        }
    };
    emit(&report, cli.out.as_deref())
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
