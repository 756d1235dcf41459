use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use walks_cli::document::SeriesDocument;
use walks_cli::error_name;
use walks_cli::output::emit;
use walks_cli::report::{verify, SolveBundle};
use walks_core::exact_series::{parse_rational, PuiseuxSeries};
use walks_core::kernel_pipeline::{canonical_factorization, exact_stage, kernel_roots, solve, PipelineError, Solution, SolveOptions};
use walks_core::walk_oracle::{ModelName, ModelSpec, Selector, WalkTable, Weights};

#[derive(Parser)]
#[command(name = "walks", version, about = "Exact series for weighted Kreweras and reverse Kreweras quadrant walks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count walks by dynamic programming.
    Enumerate {
        #[command(flatten)]
        common: Common,
        /// full, x0, 0y, diag, point:I,J, line-y:I, line-x:I or diag:J.
        #[arg(long, default_value = "full")]
        quantity: String,
    },
    /// Run the kernel method.
    Solve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        working: Working,
        /// Emit a single series (x0, 0y, diag, full or point:I,J) instead of the whole solution.
        #[arg(long)]
        quantity: Option<String>,
    },
    /// Compare the kernel method with enumeration.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        working: Working,
    },
    /// Print intermediate objects of the kernel method.
    Expand {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        working: Working,
        #[arg(long, value_enum)]
        what: What,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long, default_value = "1")]
    a: String,
    #[arg(long, default_value = "1")]
    b: String,
    #[arg(long, default_value = "1")]
    c: String,
    #[arg(long, default_value_t = 20)]
    order: i64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Working {
    /// Defaults to twice the order.
    #[arg(long)]
    working_order: Option<i64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Kreweras,
    ReverseKreweras,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    DeltaRoots,
    Factorization,
    KernelRoots,
    Determinants,
}

enum Failure {
    Usage(String),
    Compute(String),
    Io(std::io::Error),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure::Compute(format!("{}: {e}", error_name(&e)))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Common {
    fn spec(&self) -> Result<ModelSpec, Failure> {
        let name = match self.model {
            Model::Kreweras => ModelName::Kreweras,
            Model::ReverseKreweras => ModelName::ReverseKreweras,
        };
        for (flag, v) in [("--a", &self.a), ("--b", &self.b), ("--c", &self.c)] {
            if parse_rational(v).is_none() {
                return Err(Failure::Usage(format!("{flag}: {v:?} is not a rational p/q")));
            }
        }
        let w = Weights::parse(&self.a, &self.b, &self.c).map_err(|e| Failure::Usage(e.to_string()))?;
        if self.order < 0 {
            return Err(Failure::Usage("--order must be non-negative".into()));
        }
        Ok(ModelSpec::new(name, w))
    }

    fn write_series(&self, doc: &SeriesDocument) -> Result<(), Failure> {
        let text = match self.format {
            Format::Json => doc.to_json(),
            Format::Csv => doc.to_csv(),
        };
        Ok(emit(self.out.as_deref(), &text)?)
    }

    /// Bundles hold several series, which csv cannot.
    fn require_json(&self) -> Result<(), Failure> {
        match self.format {
            Format::Json => Ok(()),
            Format::Csv => Err(Failure::Usage("csv holds a single series; use --format json or pick one --quantity".into())),
        }
    }

    fn write_bundle(&self, b: &SolveBundle) -> Result<(), Failure> {
        self.require_json()?;
        Ok(emit(self.out.as_deref(), &b.to_json())?)
    }
}

impl Working {
    fn options(&self, order: i64) -> Result<SolveOptions, Failure> {
        let opts = SolveOptions::new(order);
        match self.working_order {
            Some(w) if w < order => Err(Failure::Usage("--working-order must be at least --order".into())),
            Some(w) => Ok(opts.with_working_order(w)),
            None => Ok(opts),
        }
    }
}

enum Quantity {
    Full,
    Sel(Selector),
}

fn parse_quantity(q: &str) -> Result<Quantity, Failure> {
    let bad = || Failure::Usage(format!("unknown quantity {q:?}"));
    let int = |s: &str| s.trim().parse::<i64>().map_err(|_| bad());
    Ok(match q {
        "full" => Quantity::Full,
        "x0" => Quantity::Sel(Selector::LineY(0)),
        "0y" => Quantity::Sel(Selector::LineX(0)),
        "diag" => Quantity::Sel(Selector::Diag(0)),
        _ => {
            let (kind, arg) = q.split_once(':').ok_or_else(bad)?;
            match kind {
                "line-y" => Quantity::Sel(Selector::LineY(int(arg)?)),
                "line-x" => Quantity::Sel(Selector::LineX(int(arg)?)),
                "diag" => Quantity::Sel(Selector::Diag(int(arg)?)),
                "point" => {
                    let (i, j) = arg.split_once(',').ok_or_else(bad)?;
                    Quantity::Sel(Selector::Point(int(i)?, int(j)?))
                }
                _ => return Err(bad()),
            }
        }
    })
}

fn selector_name(sel: Selector) -> String {
    match sel {
        Selector::LineY(0) => "Q(x,0)".into(),
        Selector::LineX(0) => "Q(0,y)".into(),
        Selector::Diag(0) => "Q^d_0(x)".into(),
        Selector::LineY(i) => format!("Q_{{-,{i}}}(x)"),
        Selector::LineX(i) => format!("Q_{{{i},-}}(y)"),
        Selector::Diag(j) => format!("Q^d_{j}(x)"),
        Selector::Point(i, j) => format!("Q_{{{i},{j}}}"),
    }
}

fn enumerate(common: &Common, quantity: &str) -> Result<(), Failure> {
    let m = common.spec()?;
    let q = parse_quantity(quantity)?;
    let table = WalkTable::enumerate(&m, common.order as usize);
    let doc = match q {
        Quantity::Full => SeriesDocument::from_tri(&m, "Q(x,y)", &table.full(), common.order),
        Quantity::Sel(sel) => {
            let s = table.boundary_series(sel).map_err(|e| Failure::Usage(e.to_string()))?;
            SeriesDocument::from_series(&m, &selector_name(sel), &s)
        }
    };
    common.write_series(&doc)
}

fn solve_series(sol: &Solution, q: Quantity) -> Result<SeriesDocument, Failure> {
    let m = &sol.model;
    let pick = |s: &PuiseuxSeries, name: &str| SeriesDocument::from_series(m, name, s);
    Ok(match q {
        Quantity::Full => SeriesDocument::from_tri(m, "Q(x,y)", &sol.full, sol.order),
        Quantity::Sel(Selector::LineY(0)) => pick(&sol.q_x0, "Q(x,0)"),
        Quantity::Sel(Selector::LineX(0)) => pick(&sol.q_0y, "Q(0,y)"),
        Quantity::Sel(Selector::Diag(0)) => pick(&sol.q_diag, "Q^d_0(x)"),
        Quantity::Sel(Selector::Point(i, j)) => {
            let s = sol.point(i, j).ok_or_else(|| Failure::Usage(format!("the solution does not report Q_{{{i},{j}}}")))?;
            pick(s, &selector_name(Selector::Point(i, j)))
        }
        Quantity::Sel(other) => return Err(Failure::Usage(format!("solve does not report {}", selector_name(other)))),
    })
}

fn run_solve(common: &Common, working: &Working, quantity: Option<&str>) -> Result<(), Failure> {
    let m = common.spec()?;
    let opts = working.options(common.order)?;
    let q = quantity.map(parse_quantity).transpose()?;
    if q.is_none() {
        common.require_json()?;
    }
    let sol = solve(&m, &opts)?;
    eprintln!("solved in {:.2}s at working order {}", sol.elapsed.as_secs_f64(), sol.working_order);
    match q {
        Some(q) => common.write_series(&solve_series(&sol, q)?),
        None => common.write_bundle(&SolveBundle::from_solution(&sol)),
    }
}

fn run_verify(common: &Common, working: &Working) -> Result<bool, Failure> {
    let m = common.spec()?;
    let opts = working.options(common.order)?;
    let start = Instant::now();
    let rep = verify(&m, &opts)?;
    eprintln!("verify {} in {:.2}s", rep.status, start.elapsed().as_secs_f64());
    let text = match common.format {
        Format::Json => rep.to_json(),
        Format::Csv => rep.to_csv(),
    };
    emit(common.out.as_deref(), &text)?;
    Ok(rep.passed())
}

fn run_expand(common: &Common, working: &Working, what: What) -> Result<(), Failure> {
    let m = common.spec()?;
    common.require_json()?;
    let n = common.order;
    let label = match what {
        What::DeltaRoots => "expand delta-roots",
        What::Factorization => "expand factorization",
        What::KernelRoots => "expand kernel-roots",
        What::Determinants => "expand determinants",
    };
    let doc = |name: &str, s: &PuiseuxSeries| SeriesDocument::from_series(&m, name, &s.truncate_t(n));
    let bundle = match what {
        What::DeltaRoots | What::Factorization => {
            let delta = exact_stage(&m)?.delta;
            let f = canonical_factorization(&delta, n).map_err(Failure::from)?;
            let series = if matches!(what, What::DeltaRoots) {
                f.small_roots.iter().chain(&f.large_roots).enumerate().map(|(i, r)| doc(&format!("X{}", i + 1), r)).collect()
            } else {
                vec![
                    doc("Delta", &delta),
                    doc("Delta_0", &f.delta0),
                    doc("Delta_+", &f.delta_plus),
                    doc("Delta_-", &f.delta_minus),
                    doc("1/sqrt(Delta_+)", &f.f),
                    doc("sqrt(Delta_0*Delta_-)", &f.g),
                ]
            };
            SolveBundle::new(&m, label, n, series)
        }
        What::KernelRoots => {
            let roots = kernel_roots(&m, n)?;
            SolveBundle::new(&m, label, n, roots.iter().map(|r| doc(&format!("x{}", r.label), &r.value)).collect())
        }
        What::Determinants => {
            let sol = solve(&m, &working.options(n)?)?;
            let full = SolveBundle::from_solution(&sol);
            SolveBundle { series: Vec::new(), command: label.into(), ..full }
        }
    };
    common.write_bundle(&bundle)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Enumerate { common, quantity } => enumerate(common, quantity).map(|_| true),
        Command::Solve { common, working, quantity } => run_solve(common, working, quantity.as_deref()).map(|_| true),
        Command::Verify { common, working } => run_verify(common, working),
        Command::Expand { common, working, what } => run_expand(common, working, *what).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: io: {e}");
            ExitCode::from(3)
        }
    }
}
