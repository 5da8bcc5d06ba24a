use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cospec_core::entangle::{g45_entropy_experiment, graph_entropy, EntropyReport, LogBase};
use cospec_core::families::build_family;
use cospec_core::io::graph_to_json;
use cospec_core::spectral::{adjacency_spectrum, cospectral};
use cospec_core::strata::quotient;
use cospec_core::walk::{
    fermionic_quotient, reference_fermi_quotient, stratum_probabilities, walk_verdict, Phi7Convention, TimeGrid,
    WalkConfig, WalkStrategy, WalkSubject, WalkVerdict, DEFAULT_NNZ_CAP,
};
use cospec_core::{Execution, Family, VertexPartition};
use serde::Serialize;

mod input;
mod output;

use input::{load, load_spec, GraphArgs, Loaded};
use output::{csv_row, fmt_float, matrix_csv, to_json};

#[derive(Debug)]
pub struct Failure(pub String);

impl From<cospec_core::Error> for Failure {
    fn from(e: cospec_core::Error) -> Self {
        Failure(e.to_string())
    }
}

type Res<T> = Result<T, Failure>;

#[derive(Parser)]
#[command(
    name = "cospec",
    version,
    about = "Tell cospectral graphs apart with quantum-walk and entanglement invariants"
)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Clone, Args)]
struct RunArgs {
    /// Oscillator coupling strength.
    #[arg(long, global = true, default_value_t = 0.1, allow_negative_numbers = true)]
    g: f64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Time grid as start:stop:step.
    #[arg(long, global = true, default_value = "0:10:0.1")]
    grid: TimeGrid,
    /// Entropy logarithm base: 2 or e.
    #[arg(long = "log-base", global = true, default_value = "2")]
    log_base: LogBase,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Use the rayon pool for grids, fermion spaces and batch pairs.
    #[arg(long, global = true)]
    parallel: bool,
    /// Upper bound on fermion-operator nonzeros.
    #[arg(long, global = true, default_value_t = DEFAULT_NNZ_CAP)]
    cap: u128,
}

impl RunArgs {
    fn validate(&self) -> Res<()> {
        if !(self.g >= 0.0) {
            return Err(Failure(format!("--g must be >= 0, got {}", self.g)));
        }
        if !(self.tol > 0.0) {
            return Err(Failure(format!("--tol must be > 0, got {}", self.tol)));
        }
        Ok(())
    }

    fn exec(&self) -> Execution {
        if self.parallel {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Spectrum,
    Quotient,
    Trace,
    Fermionic,
    Entropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Convention {
    SingleTransfer,
    Slater,
}

#[derive(Debug, Clone, Args)]
struct Placement {
    /// Walk origin, in the input's vertex labels.
    #[arg(long)]
    origin: Option<usize>,
    /// Partition JSON file ({"blocks": [[...], ...]}), in the input's labels.
    #[arg(long)]
    partition: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sorted adjacency eigenvalues.
    Spectrum(GraphArgs),
    /// Compare two adjacency spectra.
    Cospectral {
        /// Graph file, family spec like g4:1:3, or example name.
        left: String,
        right: String,
    },
    /// Strata-basis (quotient) matrix and closure residual.
    Quotient {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        place: Placement,
    },
    /// Stratum probabilities of a single-particle walk over the time grid.
    Walk {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        place: Placement,
    },
    /// 8x8 antisymmetric-sector quotient of a construction family.
    FermiQuotient {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 1)]
        a: usize,
        #[arg(long, default_value_t = 3)]
        b: usize,
        #[arg(long, value_enum, default_value = "single-transfer")]
        convention: Convention,
    },
    /// Ground-state entanglement entropy between partA and the rest.
    Entropy {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        origin: Option<usize>,
        /// `strata:i-j` or a comma-separated vertex list.
        #[arg(long = "partA", default_value = "strata:0-1")]
        part_a: String,
        /// For g4/g5: run the reduced-system experiment instead.
        #[arg(long)]
        schur: bool,
    },
    /// Try to prove two graphs non-isomorphic.
    Distinguish {
        left: Option<String>,
        right: Option<String>,
        /// JSON list of [left, right] spec pairs.
        #[arg(long, conflicts_with_all = ["left", "right"])]
        batch: Option<PathBuf>,
        /// Repeatable; defaults to every applicable strategy.
        #[arg(long, value_enum)]
        strategy: Vec<Strategy>,
        #[arg(long)]
        origin: Option<usize>,
        #[arg(long = "partA", default_value = "strata:0-1")]
        part_a: String,
    },
    /// Construction family sizes, or a family graph as JSON with --emit.
    Families {
        #[arg(long)]
        family: Option<Family>,
        #[arg(long, default_value_t = 1)]
        a: usize,
        #[arg(long, default_value_t = 3)]
        b: usize,
        #[arg(long, requires = "family")]
        emit: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Res<ExitCode> {
    cli.run.validate()?;
    let r = &cli.run;
    let fmt = |default| r.format.unwrap_or(default);
    match &cli.cmd {
        Command::Spectrum(args) => spectrum(&load(args)?, fmt(Format::Json)),
        Command::Cospectral { left, right } => cmp_spectra(&load_spec(left)?, &load_spec(right)?, r),
        Command::Quotient { graph, place } => cmd_quotient(&load(graph)?, place, r, fmt(Format::Json)),
        Command::Walk { graph, place } => walk(&load(graph)?, place, r, fmt(Format::Csv)),
        Command::FermiQuotient {
            family,
            a,
            b,
            convention,
        } => fermi(*family, *a, *b, *convention, r, fmt(Format::Json)),
        Command::Entropy {
            graph,
            origin,
            part_a,
            schur,
        } => entropy(&load(graph)?, *origin, part_a, *schur, r, fmt(Format::Json)),
        Command::Distinguish {
            left,
            right,
            batch,
            strategy,
            origin,
            part_a,
        } => {
            let opts = DistinguishOpts {
                strategies: strategy.clone(),
                origin: *origin,
                part_a: part_a.clone(),
            };
            match (batch, left, right) {
                (Some(path), _, _) => distinguish_batch(path, &opts, r),
                (None, Some(l), Some(rt)) => {
                    let report = distinguish(&load_spec(l)?, &load_spec(rt)?, &opts, r, r.exec())?;
                    println!("{}", to_json(&report)?);
                    Ok(ExitCode::from(report.exit_code()))
                }
                _ => Err(Failure("distinguish needs two graph specs or --batch".into())),
            }
        }
        Command::Families { family, a, b, emit } => families(*family, *a, *b, *emit, fmt(Format::Json)),
    }
}

fn spectrum(input: &Loaded, fmt: Format) -> Res<ExitCode> {
    #[derive(Serialize)]
    struct Out<'a> {
        graph: &'a str,
        n: usize,
        values: Vec<f64>,
    }
    let values = adjacency_spectrum(&input.graph)?.values;
    match fmt {
        Format::Csv => println!("{}", csv_row(values)),
        Format::Json => println!(
            "{}",
            to_json(&Out {
                graph: &input.label,
                n: input.graph.n(),
                values
            })?
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn check_sizes(l: &Loaded, r: &Loaded) -> Res<()> {
    if l.graph.n() != r.graph.n() {
        return Err(cospec_core::Error::SizeMismatch(l.graph.n(), r.graph.n()).into());
    }
    Ok(())
}

fn cmp_spectra(l: &Loaded, r: &Loaded, run: &RunArgs) -> Res<ExitCode> {
    #[derive(Serialize)]
    struct Out<'a> {
        left: &'a str,
        right: &'a str,
        cospectral: bool,
        max_deviation: f64,
    }
    check_sizes(l, r)?;
    let rep = cospectral(&l.graph, &r.graph, run.tol)?;
    println!(
        "{}",
        to_json(&Out {
            left: &l.label,
            right: &r.label,
            cospectral: rep.equal,
            max_deviation: rep.max_dev,
        })?
    );
    Ok(ExitCode::SUCCESS)
}

fn partition_labels(input: &Loaded, p: &VertexPartition) -> Vec<Vec<usize>> {
    p.blocks().iter().map(|b| input.labels(b)).collect()
}

fn cmd_quotient(input: &Loaded, place: &Placement, run: &RunArgs, fmt: Format) -> Res<ExitCode> {
    #[derive(Serialize)]
    struct Out<'a> {
        graph: &'a str,
        origin: usize,
        strata: Vec<Vec<usize>>,
        matrix: Vec<Vec<f64>>,
        residual: f64,
        closed: bool,
    }
    let origin = input.origin(place.origin)?;
    let p = input.partition(origin, place.partition.as_deref())?;
    let q = quotient(&input.graph, &p, run.tol)?;
    match fmt {
        Format::Csv => println!("{}", matrix_csv(&q.matrix.to_rows())),
        Format::Json => println!(
            "{}",
            to_json(&Out {
                graph: &input.label,
                origin: input.to_label(origin),
                strata: partition_labels(input, &p),
                matrix: q.matrix.to_rows(),
                residual: q.residual,
                closed: q.closed,
            })?
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn walk(input: &Loaded, place: &Placement, run: &RunArgs, fmt: Format) -> Res<ExitCode> {
    #[derive(Serialize)]
    struct Out<'a> {
        graph: &'a str,
        origin: usize,
        strata: Vec<Vec<usize>>,
        times: Vec<f64>,
        probs: Vec<Vec<f64>>,
        residual: f64,
        dual_path_gap: Option<f64>,
    }
    let origin = input.origin(place.origin)?;
    let p = input.partition(origin, place.partition.as_deref())?;
    let st = stratum_probabilities(&input.graph, origin, Some(&p), &run.grid, run.exec())?;
    match fmt {
        Format::Csv => {
            let header: Vec<String> = std::iter::once("t".to_owned())
                .chain((0..p.len()).map(|j| format!("stratum_{j}")))
                .collect();
            println!("{}", header.join(","));
            for (t, row) in st.trace.times.iter().zip(&st.trace.probs) {
                println!("{},{}", fmt_float(*t), csv_row(row.iter().copied()));
            }
        }
        Format::Json => println!(
            "{}",
            to_json(&Out {
                graph: &input.label,
                origin: input.to_label(origin),
                strata: partition_labels(input, &p),
                times: st.trace.times,
                probs: st.trace.probs,
                residual: st.residual,
                dual_path_gap: st.dual_path_gap,
            })?
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn fermi(family: Family, a: usize, b: usize, conv: Convention, run: &RunArgs, fmt: Format) -> Res<ExitCode> {
    #[derive(Serialize)]
    struct Out {
        family: Family,
        a: usize,
        b: usize,
        convention: Phi7Convention,
        space_dim: u128,
        matrix: Vec<Vec<f64>>,
        residual: f64,
        orthonormality_error: f64,
        printed_gap: f64,
    }
    let convention = match conv {
        Convention::SingleTransfer => Phi7Convention::SingleTransfer,
        Convention::Slater => Phi7Convention::Slater,
    };
    let inst = build_family(family, a, b)?;
    let fq = fermionic_quotient(&inst, convention, run.cap, run.exec())?;
    match fmt {
        Format::Csv => println!("{}", matrix_csv(&fq.matrix.to_rows())),
        Format::Json => println!(
            "{}",
            to_json(&Out {
                family,
                a,
                b,
                convention,
                space_dim: cospec_core::walk::binomial(inst.graph.n(), a),
                printed_gap: fq.matrix.max_abs_diff(&reference_fermi_quotient(family, a, b)),
                matrix: fq.matrix.to_rows(),
                residual: fq.residual,
                orthonormality_error: fq.orthonormality_error,
            })?
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn entropy(
    input: &Loaded,
    origin: Option<usize>,
    part_a: &str,
    schur: bool,
    run: &RunArgs,
    fmt: Format,
) -> Res<ExitCode> {
    if schur {
        let inst = input
            .family
            .as_ref()
            .ok_or_else(|| Failure("--schur needs --family g4 or g5".into()))?;
        let e = g45_entropy_experiment(inst.family, inst.a, inst.b, run.g, run.log_base)?;
        if fmt == Format::Csv {
            return Err(Failure("--schur output is JSON only".into()));
        }
        println!("{}", to_json(&e)?);
        return Ok(ExitCode::SUCCESS);
    }
    let origin = input.origin(origin)?;
    let side = input.part_a(part_a, origin)?;
    let s = graph_entropy(&input.graph, run.g, &side, run.log_base)?;
    match fmt {
        Format::Csv => {
            println!("mode,d,nu,entropy");
            for (i, ((d, nu), h)) in s.d.iter().zip(&s.nu).zip(&s.mode_entropies).enumerate() {
                println!("{i},{},{},{}", fmt_float(*d), fmt_float(*nu), fmt_float(*h));
            }
        }
        Format::Json => {
            let report = EntropyReport::new(input.label.clone(), input.labels(&side), run.g, s);
            println!("{}", to_json(&report)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

struct DistinguishOpts {
    strategies: Vec<Strategy>,
    origin: Option<usize>,
    part_a: String,
}

#[derive(Debug, Serialize)]
struct EntropyComparison {
    split: String,
    g: f64,
    log_base: LogBase,
    #[serde(rename = "S_A")]
    s_a: f64,
    #[serde(rename = "S_B")]
    s_b: f64,
    delta: f64,
}

#[derive(Debug, Serialize)]
struct DistinguishReport {
    left: String,
    right: String,
    cospectral: bool,
    spectral_deviation: f64,
    walk: Option<WalkVerdict>,
    entropy: Option<EntropyComparison>,
    decided_by: Vec<&'static str>,
    conclusion: &'static str,
    note: Option<&'static str>,
}

impl DistinguishReport {
    fn exit_code(&self) -> u8 {
        if self.decided_by.is_empty() {
            2
        } else {
            0
        }
    }
}

fn subject(input: &Loaded, origin: usize) -> Res<WalkSubject> {
    match &input.family {
        Some(inst) if origin == input.default_origin => Ok(WalkSubject::from_family(inst.clone())),
        _ => Ok(WalkSubject::new(input.graph.clone(), origin).with_partition(input.partition(origin, None)?)),
    }
}

fn distinguish(
    l: &Loaded,
    r: &Loaded,
    opts: &DistinguishOpts,
    run: &RunArgs,
    exec: Execution,
) -> Res<DistinguishReport> {
    check_sizes(l, r)?;
    let strategies = if opts.strategies.is_empty() {
        let mut all = vec![Strategy::Spectrum, Strategy::Quotient, Strategy::Trace];
        if l.family.is_some() && r.family.is_some() {
            all.push(Strategy::Fermionic);
        }
        all.push(Strategy::Entropy);
        all
    } else {
        opts.strategies.clone()
    };
    let mut decided_by = Vec::new();

    let spec = cospectral(&l.graph, &r.graph, run.tol)?;
    if strategies.contains(&Strategy::Spectrum) && !spec.equal {
        decided_by.push("spectrum");
    }

    let walk_strategies: Vec<WalkStrategy> = strategies
        .iter()
        .filter_map(|s| match s {
            Strategy::Quotient => Some(WalkStrategy::Quotient),
            Strategy::Trace => Some(WalkStrategy::Trace),
            Strategy::Fermionic => Some(WalkStrategy::Fermionic),
            _ => None,
        })
        .collect();
    let walk = if walk_strategies.is_empty() {
        None
    } else {
        let cfg = WalkConfig {
            strategies: walk_strategies,
            tol: run.tol,
            grid: run.grid,
            convention: Phi7Convention::default(),
            cap: run.cap,
            exec,
        };
        let lo = l.origin(opts.origin)?;
        let ro = r.origin(opts.origin)?;
        let v = walk_verdict(&subject(l, lo)?, &subject(r, ro)?, &cfg)?;
        if v.is_distinguished() {
            decided_by.push("walk");
        }
        Some(v)
    };

    let entropy = if strategies.contains(&Strategy::Entropy) {
        let side = |x: &Loaded| -> Res<f64> {
            let o = x.origin(opts.origin)?;
            let part = x.part_a(&opts.part_a, o)?;
            Ok(graph_entropy(&x.graph, run.g, &part, run.log_base)?.total)
        };
        let (s_a, s_b) = (side(l)?, side(r)?);
        let delta = s_a - s_b;
        if delta.abs() > run.tol {
            decided_by.push("entropy");
        }
        Some(EntropyComparison {
            split: opts.part_a.clone(),
            g: run.g,
            log_base: run.log_base,
            s_a,
            s_b,
            delta,
        })
    } else {
        None
    };

    let decided = !decided_by.is_empty();
    Ok(DistinguishReport {
        left: l.label.clone(),
        right: r.label.clone(),
        cospectral: spec.equal,
        spectral_deviation: spec.max_dev,
        walk,
        entropy,
        decided_by,
        conclusion: if decided { "non-isomorphic" } else { "undecided" },
        note: (!decided).then_some("no invariant separated the pair; this does not show they are isomorphic"),
    })
}

fn distinguish_batch(path: &std::path::Path, opts: &DistinguishOpts, run: &RunArgs) -> Res<ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let pairs: Vec<[String; 2]> =
        serde_json::from_str(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let results = run.exec().map(&pairs, |[l, r]| {
        let out = load_spec(l)
            .and_then(|lg| Ok((lg, load_spec(r)?)))
            .and_then(|(lg, rg)| distinguish(&lg, &rg, opts, run, Execution::Sequential));
        match out {
            Ok(rep) => (
                rep.exit_code(),
                serde_json::to_value(&rep).map_err(|e| Failure(e.to_string())),
            ),
            Err(Failure(msg)) => (1, Ok(serde_json::json!({ "left": l, "right": r, "error": msg }))),
        }
    });
    let mut code = 0u8;
    let mut values = Vec::with_capacity(results.len());
    for (c, v) in results {
        code = match (code, c) {
            (1, _) | (_, 1) => 1,
            (2, _) | (_, 2) => 2,
            _ => 0,
        };
        values.push(v?);
    }
    println!("{}", to_json(&values)?);
    Ok(ExitCode::from(code))
}

fn families(family: Option<Family>, a: usize, b: usize, emit: bool, fmt: Format) -> Res<ExitCode> {
    #[derive(Serialize)]
    struct Row {
        family: Family,
        a: usize,
        b: usize,
        vertices: usize,
        edges: usize,
        loops: usize,
        regular_degree: Option<usize>,
        block_sizes: Vec<usize>,
    }
    if emit {
        let f = family.expect("clap enforces --family with --emit");
        println!("{}", graph_to_json(&build_family(f, a, b)?.graph, 0));
        return Ok(ExitCode::SUCCESS);
    }
    let chosen: Vec<Family> = family.map_or(Family::ALL.to_vec(), |f| vec![f]);
    let rows = chosen
        .into_iter()
        .map(|f| {
            let inst = build_family(f, a, b)?;
            Ok(Row {
                family: f,
                a,
                b,
                vertices: inst.graph.n(),
                edges: inst.graph.edge_count(),
                loops: inst.graph.loops().count(),
                regular_degree: inst.graph.regular_degree(),
                block_sizes: inst.block_partition.sizes(),
            })
        })
        .collect::<Res<Vec<_>>>()?;
    match fmt {
        Format::Csv => {
            println!("family,a,b,vertices,edges,loops");
            for r in &rows {
                println!("{},{},{},{},{},{}", r.family, r.a, r.b, r.vertices, r.edges, r.loops);
            }
        }
        Format::Json => println!("{}", to_json(&rows)?),
    }
    Ok(ExitCode::SUCCESS)
}
