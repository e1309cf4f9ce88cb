use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tau_loop::central_ops::{GeneratorScope, Realization};
use tau_loop::io::{read_json_file, AlgebraSpec, InputError, PsiInput};
use tau_loop::jobs::{self, ConventionChoice, JobSpec, ModuleChoice, OutputMode, Params, Report};

#[derive(Parser)]
#[command(name = "tau-loop", version)]
#[command(about = "Exact computations in loop affine-Virasoro algebras and their highest-weight modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Preset algebra: scalar, jet:N, points:z1,z2,..., poly_mod:c0,c1,..., laurent_mod:c0,c1,...
    #[arg(long, conflicts_with = "algebra")]
    preset: Option<String>,
    /// Algebra spec file (JSON)
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Highest weight: `λ=1,c=1,d0=0`, inline JSON `{"h":[..],"K":[..],"L0":[..]}`, or @file.json
    #[arg(long)]
    psi: Option<String>,
    /// Weight box P,Q
    #[arg(long = "box", value_parser = parse_box)]
    bounds: Option<(i64, i64)>,
    #[arg(long, value_enum)]
    module: Option<ModuleArg>,
    /// Which exponent carries the affine cocycle
    #[arg(long, value_enum)]
    convention: Option<ConventionArg>,
    /// Emit the JSON report instead of text
    #[arg(long)]
    json: bool,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Default)]
struct Pair {
    /// First element of A, as coordinates `1,0`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Option<Vec<String>>,
    /// Second element of A
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    b: Option<Vec<String>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModuleArg {
    Verma,
    Irreducible,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    First,
    Second,
}

#[derive(Clone, Copy, ValueEnum)]
enum RealizationArg {
    Normal,
    Commutator,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Affine,
    Loop,
}

#[derive(Subcommand)]
enum Command {
    /// Check the algebra axioms
    ValidateAlgebra {
        #[command(flatten)]
        common: Common,
    },
    /// Radical of the ideal generated by --gen (the nilradical by default)
    Radical {
        #[command(flatten)]
        common: Common,
        #[arg(long = "gen", allow_hyphen_values = true)]
        gens: Vec<String>,
    },
    /// Idempotent decomposition of a split semisimple algebra
    Crt {
        #[command(flatten)]
        common: Common,
    },
    /// Weight-space dimensions of the Verma module
    VermaDims {
        #[command(flatten)]
        common: Common,
    },
    /// Weight-space dimensions of the irreducible quotient
    IrreducibleDims {
        #[command(flatten)]
        common: Common,
    },
    /// Apply an element, or the operator T_j(a,b), to a labeled vector
    Apply {
        #[command(flatten)]
        common: Common,
        /// Vector label such as `Y(t^0;a0)·v`
        #[arg(long, default_value = "v")]
        vector: String,
        /// Element such as `2*X(t^1;a0) + L_-1(a0)`; overrides the operator
        #[arg(long, allow_hyphen_values = true)]
        element: Option<String>,
        /// Operator index; 0 is Omega
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        j: i64,
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum)]
        realization: Option<RealizationArg>,
    },
    /// Scan the box for singular vectors
    Singular {
        #[command(flatten)]
        common: Common,
    },
    /// Commutators of T_j(a,b) with affine generators
    CheckCentral {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        j: i64,
        #[command(flatten)]
        pair: Pair,
        /// t-power window for the generators
        #[arg(long, default_value_t = 2)]
        window: i64,
        #[arg(long, value_enum)]
        scope: Option<ScopeArg>,
        #[arg(long, value_enum)]
        realization: Option<RealizationArg>,
    },
    /// [L_k, T_j(a,b)] against (j-k) T_{j+k}(a,b) and the central term
    CheckBracket {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
        #[command(flatten)]
        pair: Pair,
    },
    /// Dominance and local nilpotency of the top vector
    CheckIntegrable {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Whether the loop algebra of an ideal kills V(psi) on the box
    CheckAnnihilation {
        #[command(flatten)]
        common: Common,
        #[arg(long = "gen", allow_hyphen_values = true)]
        gens: Vec<String>,
    },
    /// The two-point evaluation module and its vectors T_-1, T_-2
    Example31 {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        z: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lam: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        c: Option<Vec<String>>,
    },
    /// Run the acceptance suite
    Selftest {
        #[command(flatten)]
        common: Common,
        /// Run only these criteria
        #[arg(long = "criterion")]
        criteria: Vec<u32>,
    },
    /// Run a JSON job spec
    Run {
        #[arg(long)]
        job: PathBuf,
        /// Override the job's output mode
        #[arg(long)]
        json: bool,
    },
}

fn parse_box(s: &str) -> Result<(i64, i64), String> {
    let (p, q) = s.split_once(',').ok_or("expected P,Q")?;
    let p = p.trim().parse().map_err(|_| format!("bad P `{p}`"))?;
    let q = q.trim().parse().map_err(|_| format!("bad Q `{q}`"))?;
    Ok((p, q))
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_string()).collect()
}

fn realization(r: Option<RealizationArg>) -> Option<Realization> {
    r.map(|r| match r {
        RealizationArg::Normal => Realization::NormalOrdered,
        RealizationArg::Commutator => Realization::CommutatorDefined,
    })
}

fn base(command: &str, c: &Common) -> Result<JobSpec, InputError> {
    let algebra = match (&c.preset, &c.algebra) {
        (Some(p), _) => Some(AlgebraSpec::from_flag(p)?),
        (None, Some(path)) => Some(read_json_file(path)?),
        (None, None) => None,
    };
    let psi = c.psi.as_deref().map(PsiInput::from_flag).transpose()?;
    let params = Params {
        module: c.module.map(|m| match m {
            ModuleArg::Verma => ModuleChoice::Verma,
            ModuleArg::Irreducible => ModuleChoice::Irreducible,
        }),
        convention: c.convention.map(|m| match m {
            ConventionArg::First => ConventionChoice::First,
            ConventionArg::Second => ConventionChoice::Second,
        }),
        ..Default::default()
    };
    Ok(JobSpec {
        command: command.into(),
        algebra,
        psi,
        bounds: c.bounds,
        params,
        output: if c.json { OutputMode::Json } else { OutputMode::Text },
        out: c.out.clone(),
    })
}

fn to_job(cmd: Command) -> Result<JobSpec, InputError> {
    Ok(match cmd {
        Command::ValidateAlgebra { common } => base("validate-algebra", &common)?,
        Command::Radical { common, gens } => {
            let mut j = base("radical", &common)?;
            j.params.gens = gens.iter().map(|g| split_list(g)).collect();
            j
        }
        Command::Crt { common } => base("crt", &common)?,
        Command::VermaDims { common } => base("verma-dims", &common)?,
        Command::IrreducibleDims { common } => base("irreducible-dims", &common)?,
        Command::Apply { common, vector, element, j, pair, realization: r } => {
            let mut job = base("apply", &common)?;
            job.params.vector = Some(vector);
            job.params.element = element;
            job.params.j = Some(j);
            job.params.a = pair.a;
            job.params.b = pair.b;
            job.params.realization = realization(r);
            job
        }
        Command::Singular { common } => base("singular", &common)?,
        Command::CheckCentral { common, j, pair, window, scope, realization: r } => {
            let mut job = base("check-central", &common)?;
            job.params.j = Some(j);
            job.params.a = pair.a;
            job.params.b = pair.b;
            job.params.window = Some(window);
            job.params.scope = scope.map(|s| match s {
                ScopeArg::Affine => GeneratorScope::Affine,
                ScopeArg::Loop => GeneratorScope::Loop,
            });
            job.params.realization = realization(r);
            job
        }
        Command::CheckBracket { common, k, j, pair } => {
            let mut job = base("check-bracket", &common)?;
            job.params.k = Some(k);
            job.params.j = Some(j);
            job.params.a = pair.a;
            job.params.b = pair.b;
            job
        }
        Command::CheckIntegrable { common, n_max } => {
            let mut job = base("check-integrable", &common)?;
            job.params.n_max = Some(n_max);
            job
        }
        Command::CheckAnnihilation { common, gens } => {
            let mut job = base("check-annihilation", &common)?;
            job.params.gens = gens.iter().map(|g| split_list(g)).collect();
            job
        }
        Command::Example31 { common, z, lam, c } => {
            let mut job = base("example31", &common)?;
            job.params.z = z;
            job.params.lam = lam;
            job.params.c = c;
            job
        }
        Command::Selftest { common, criteria } => {
            let mut job = base("selftest", &common)?;
            job.params.criteria = criteria;
            job
        }
        Command::Run { job, json } => {
            let mut spec: JobSpec = read_json_file(&job)?;
            if json {
                spec.output = OutputMode::Json;
            }
            spec
        }
    })
}

fn emit(report: &Report, mode: OutputMode, out: Option<&PathBuf>) -> ExitCode {
    let rendered = report.render(mode);
    match out {
        Some(path) => {
            if let Err(e) = fs::write(path, &rendered) {
                eprintln!("error: {}: cannot write: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    if report.status == jobs::Status::Error {
        eprint!("{}", report.text);
    }
    ExitCode::from(report.status.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match to_job(cli.command) {
        Ok(job) => {
            let report = jobs::run(&job);
            emit(&report, job.output, job.out.as_ref())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
