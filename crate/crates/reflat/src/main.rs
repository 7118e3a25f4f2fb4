//! Command-line surface over the library: polytope queries, weight-system
//! enumeration, classification runs, face tabulation, involution
//! statistics, and database maintenance. Polytope input is read from a
//! file argument or standard input; data goes to standard output and
//! diagnostics to standard error.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use reflat::classify::{
    classify_by_reflexive_dimension, classify_reflexive_with_progress, faces_by_dim,
};
use reflat::db::ClassDatabase;
use reflat::error::Error;
use reflat::ipc::ipc_report;
use reflat::normal_form::{affine_normal_form, linear_normal_form};
use reflat::polytope::{format_polytope, parse_polytope, Polytope};
use reflat::stats::{
    estimate_population, expected_self_duals, format_estimate, involution_counts,
    sample_and_estimate, ExpectationMode, SampleMode,
};
use reflat::weights::{
    enumerate_ip_simplex_relations, enumerate_ip_weights, format_weight_line,
    newton_polytope_quotient, parse_weight_line, WeightInput, WeightMatrix,
};

#[derive(Parser)]
#[command(
    name = "reflat",
    about = "Exact lattice-polytope toolkit: duality, normal forms, weight systems, \
             classification of reflexive classes, and capture-recapture statistics."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lattice points of a polytope ("v d" header plus vertex rows)
    Points { file: Option<PathBuf> },
    /// Facet inequalities n·x + c >= 0, printed as "n_1 .. n_d c"
    Facets { file: Option<PathBuf> },
    /// Polar dual; vertices are printed as exact fractions when non-integral
    Dual { file: Option<PathBuf> },
    /// Canonical normal-form key
    Nf {
        /// Affine key (translation-invariant, any dimension) instead of the
        /// linear key of a centered IP polytope
        #[arg(long)]
        affine: bool,
        file: Option<PathBuf>,
    },
    /// Reflexivity test; prints "true" or "false"
    Reflexive { file: Option<PathBuf> },
    /// Lattice-point dual closure report
    Ipc { file: Option<PathBuf> },
    /// Weight-system enumeration and Newton polytopes
    Weights {
        #[command(subcommand)]
        cmd: WeightsCmd,
    },
    /// Complete classification of reflexive classes for d <= 3
    Classify {
        #[arg(short = 'd', long = "dim")]
        dim: usize,
        /// Write the resulting database to this path
        #[arg(long)]
        db: Option<PathBuf>,
        /// Echo running p, m, s and estimates to standard error
        #[arg(long)]
        progress: bool,
    },
    /// Distinct affine classes of K-dimensional faces of a database
    Faces {
        #[arg(long)]
        db: PathBuf,
        /// Face dimension
        #[arg(long)]
        rd: usize,
    },
    /// Face-class counts by reflexive dimension, one row per k <= max-rd
    RdTable {
        #[arg(long, default_value_t = 3)]
        max_rd: usize,
    },
    /// Involution counts and population estimators
    Stats {
        #[command(subcommand)]
        cmd: StatsCmd,
    },
    /// Database maintenance
    Db {
        #[command(subcommand)]
        cmd: DbCmd,
    },
}

#[derive(Subcommand)]
enum WeightsCmd {
    /// Enumerate IP weight systems (with --relations: all IP-simplex
    /// relations, non-IP ones marked)
    Enum {
        #[arg(short = 'd', long = "dim")]
        dim: usize,
        #[arg(long)]
        relations: bool,
    },
    /// Newton polytope of each input weight line
    Newton { file: Option<PathBuf> },
}

#[derive(Subcommand)]
enum StatsCmd {
    /// Involution count Z_N and expected fixed points of a random involution
    Involutions {
        n: u64,
        /// Exact ratio N·Z_{N-1}/Z_N (default)
        #[arg(long)]
        exact: bool,
        /// Asymptotic formula sqrt(N) - 1/2 + 1/(3 sqrt(N))
        #[arg(long)]
        asymptotic: bool,
    },
    /// Population estimates from sample size, mirror pairs and self-duals
    Estimate {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        m: u64,
        #[arg(short)]
        s: u64,
    },
    /// Draw a sample from a database and estimate its total size
    Sample {
        #[arg(long)]
        db: PathBuf,
        #[arg(short)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Take the records with the fewest lattice points instead of a
        /// uniform sample (the bias of a classification in progress)
        #[arg(long)]
        ordered_by_points: bool,
    },
}

#[derive(Subcommand)]
enum DbCmd {
    /// Union of two databases of equal dimension
    Merge {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn main() {
    if let Ok(t) = std::env::var("REFLAT_THREADS") {
        if let Ok(n) = t.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(code);
        }
    }
}

type CmdResult = Result<(), (i32, String)>;

fn fail(e: Error) -> (i32, String) {
    let code = match &e {
        Error::UnsupportedDimension(_) => 3,
        Error::CorruptDatabase(_)
        | Error::VersionMismatch { .. }
        | Error::DimensionMismatch(..) => 4,
        _ => 2,
    };
    (code, e.to_string())
}

/// Database commands report every failure (including i/o) as a database
/// error.
fn fail_db(e: Error) -> (i32, String) {
    (4, e.to_string())
}

fn read_input(file: Option<&Path>) -> Result<String, (i32, String)> {
    let mut text = String::new();
    match file {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p)
                .map_err(|e| (2, format!("{}: {e}", p.display())))?;
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| (2, e.to_string()))?;
        }
    }
    Ok(text)
}

fn input_polytope(file: Option<&Path>) -> Result<Polytope, (i32, String)> {
    parse_polytope(&read_input(file)?).map_err(fail)
}

fn run(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::Points { file } => {
            let p = input_polytope(file.as_deref())?;
            for pt in p.lattice_points() {
                println!("{}", join(pt));
            }
            eprintln!("{} lattice points", p.lattice_points().len());
            Ok(())
        }
        Cmd::Facets { file } => {
            let p = input_polytope(file.as_deref())?;
            let facets = p.facet_inequalities().map_err(fail)?;
            for f in facets {
                println!("{} {}", join(&f.normal), f.offset);
            }
            eprintln!("{} facets", facets.len());
            Ok(())
        }
        Cmd::Dual { file } => {
            let p = input_polytope(file.as_deref())?;
            let dual = p.polar_dual().map_err(fail)?;
            if let Some(lattice) = dual.to_lattice() {
                print!("{}", format_polytope(&lattice));
            } else {
                println!("{} {}", dual.vertices.len(), dual.dim);
                for (num, den) in &dual.vertices {
                    let row: Vec<String> = num
                        .iter()
                        .map(|&x| {
                            let g = reflat::linalg::gcd(x, *den);
                            if *den == g {
                                format!("{}", x / g)
                            } else {
                                format!("{}/{}", x / g, den / g)
                            }
                        })
                        .collect();
                    println!("{}", row.join(" "));
                }
                eprintln!("dual is not a lattice polytope");
            }
            Ok(())
        }
        Cmd::Nf { affine, file } => {
            let p = input_polytope(file.as_deref())?;
            let key = if affine {
                affine_normal_form(&p)
            } else {
                linear_normal_form(&p).map_err(fail)?
            };
            println!("{}", key.to_text());
            Ok(())
        }
        Cmd::Reflexive { file } => {
            let p = input_polytope(file.as_deref())?;
            println!("{}", p.is_reflexive());
            Ok(())
        }
        Cmd::Ipc { file } => {
            let p = input_polytope(file.as_deref())?;
            let report = ipc_report(&p).map_err(fail)?;
            println!("ip_confined={}", report.ip_confined);
            println!("ipc_closed={}", report.ipc_closed);
            println!("tilde:");
            print!("{}", format_polytope(&report.tilde));
            if let Some(c) = &report.closure {
                println!("closure:");
                print!("{}", format_polytope(c));
            }
            Ok(())
        }
        Cmd::Weights { cmd } => run_weights(cmd),
        Cmd::Classify { dim, db, progress } => run_classify(dim, db.as_deref(), progress),
        Cmd::Faces { db, rd } => run_faces(&db, rd),
        Cmd::RdTable { max_rd } => {
            let table = classify_by_reflexive_dimension(max_rd).map_err(fail)?;
            for (k, row) in table.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|n| n.to_string()).collect();
                println!("rd={}: {}", k + 1, cells.join(" "));
            }
            Ok(())
        }
        Cmd::Stats { cmd } => run_stats(cmd),
        Cmd::Db { cmd } => match cmd {
            DbCmd::Merge { a, b, output } => {
                let da = ClassDatabase::read_file(&a).map_err(fail_db)?;
                let db_ = ClassDatabase::read_file(&b).map_err(fail_db)?;
                let merged = da.merge(&db_).map_err(fail_db)?;
                merged.write_file(&output).map_err(fail_db)?;
                eprintln!(
                    "merged {} + {} -> {} records",
                    da.len(),
                    db_.len(),
                    merged.len()
                );
                Ok(())
            }
        },
    }
}

fn run_weights(cmd: WeightsCmd) -> CmdResult {
    match cmd {
        WeightsCmd::Enum { dim, relations } => {
            if relations {
                let all = enumerate_ip_simplex_relations(dim).map_err(fail)?;
                let non_ip = all.iter().filter(|r| !r.ip_weight).count();
                for r in &all {
                    let line = format_weight_line(&WeightInput {
                        matrix: WeightMatrix::from_system(&r.ws),
                        quotient: None,
                    });
                    if r.ip_weight {
                        println!("{line}");
                    } else {
                        println!("{line} # non-IP");
                    }
                }
                eprintln!("{} relations, {} non-IP", all.len(), non_ip);
            } else {
                let ws = enumerate_ip_weights(dim).map_err(fail)?;
                for w in &ws {
                    println!(
                        "{}",
                        format_weight_line(&WeightInput {
                            matrix: WeightMatrix::from_system(w),
                            quotient: None,
                        })
                    );
                }
                eprintln!("{} IP weight systems", ws.len());
            }
            Ok(())
        }
        WeightsCmd::Newton { file } => {
            let text = read_input(file.as_deref())?;
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                let input = parse_weight_line(line).map_err(fail)?;
                let p = newton_polytope_quotient(&input.matrix, input.quotient.as_ref())
                    .map_err(fail)?;
                print!("{}", format_polytope(&p));
            }
            Ok(())
        }
    }
}

fn run_classify(dim: usize, db_path: Option<&Path>, progress: bool) -> CmdResult {
    let echo = |p: usize, m: usize, s: usize| {
        let (pairs, selfd) = estimate_population(p as u64, m as u64, s as u64);
        let fmt = |v: Option<f64>| v.map_or_else(|| "-".into(), format_estimate);
        eprintln!(
            "p={p} m={m} s={s} pp/2m={} pp/ss={}",
            fmt(pairs),
            fmt(selfd)
        );
    };
    let run = classify_reflexive_with_progress(dim, progress.then_some(&echo))
        .map_err(fail)?;
    println!(
        "d={dim} classes={} pairs={} selfdual={} maximal={}",
        run.class_count(),
        run.pair_count(),
        run.self_dual_count(),
        run.maximal_ancestors().len()
    );
    if let Some(path) = db_path {
        let db = run.database().map_err(fail_db)?;
        db.write_file(path).map_err(fail_db)?;
        eprintln!("wrote {} records to {}", db.len(), path.display());
    }
    Ok(())
}

fn run_faces(db_path: &Path, face_dim: usize) -> CmdResult {
    let db = ClassDatabase::read_file(db_path).map_err(fail_db)?;
    let mut classes = std::collections::BTreeSet::new();
    for i in 0..db.len() {
        let poly = db.key(i).to_polytope().map_err(fail_db)?;
        let faces = faces_by_dim(&poly).map_err(fail)?;
        if face_dim >= faces.len() {
            continue;
        }
        for verts in &faces[face_dim] {
            let fp = Polytope::from_points(verts, poly.dim()).map_err(fail)?;
            classes.insert(affine_normal_form(&fp));
        }
    }
    for key in &classes {
        println!("{}", key.to_text());
    }
    eprintln!(
        "{} affine classes of {face_dim}-faces over {} records",
        classes.len(),
        db.len()
    );
    Ok(())
}

fn run_stats(cmd: StatsCmd) -> CmdResult {
    match cmd {
        StatsCmd::Involutions { n, exact, asymptotic } => {
            if exact && asymptotic {
                return Err((2, "choose one of --exact and --asymptotic".into()));
            }
            let mode = if asymptotic {
                ExpectationMode::Asymptotic
            } else {
                ExpectationMode::Exact
            };
            println!("N={n}");
            if mode == ExpectationMode::Exact && n <= 500 {
                let (z, _) = involution_counts(n as usize);
                println!("Z={z}");
            }
            println!("S_mean={}", expected_self_duals(n, mode));
            Ok(())
        }
        StatsCmd::Estimate { p, m, s } => {
            let (pairs, selfd) = estimate_population(p, m, s);
            let fmt = |v: Option<f64>| v.map_or_else(|| "-".into(), format_estimate);
            println!("pp/2m={}", fmt(pairs));
            println!("pp/ss={}", fmt(selfd));
            Ok(())
        }
        StatsCmd::Sample { db, p, seed, ordered_by_points } => {
            let database = ClassDatabase::read_file(&db).map_err(fail_db)?;
            let mode = if ordered_by_points {
                SampleMode::OrderedByPoints
            } else {
                SampleMode::Uniform
            };
            let report = sample_and_estimate(&database, p, seed, mode).map_err(fail)?;
            let fmt = |v: Option<f64>| v.map_or_else(|| "-".into(), format_estimate);
            println!("p={}", report.p);
            println!("m={}", report.m);
            println!("s={}", report.s);
            println!("pp/2m={}", fmt(report.est_pairs));
            println!("pp/ss={}", fmt(report.est_self));
            println!("seed={}", report.seed);
            Ok(())
        }
    }
}

fn join(xs: &[i128]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}
