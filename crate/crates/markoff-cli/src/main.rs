//! Command-line front end: spectral classification, fibral discrete logs,
//! path and loop certificates, certificate verification, and the experiment
//! tables, with reproducible seeding and machine-readable output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad input,
//! 3 timeout/retry exhaustion.

mod worked_example;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use markoff::classify::{classify, count_max_hyperbolic};
use markoff::experiments::{exact_fiber_census, heur1_mean_walk, heur1a_census, heur2_rate};
use markoff::fiber_dlp::markoff_dlp;
use markoff::nt::{factor, factor_up_to, probable_primitive_root};
use markoff::pathfinder::{find_loop, find_path, PathCertificate, PathOptions};
use markoff::surface::{Axis, MarkoffPoint};
use markoff::{Error, ExperimentResult, PrimeField, SpectralClass};

#[derive(Parser)]
#[command(
    name = "markoff",
    version,
    about = "Path finding in the rotation graph of Markoff triples over F_q"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify t as hyperbolic/parabolic/elliptic and report its eigenvalue order
    Classify {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        t: u64,
        /// Use only primes up to this bound for the primitivity test
        /// (one-sided probabilistic mode)
        #[arg(long)]
        partial_bound: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Rotation exponent linking two points on a shared maximally hyperbolic fiber
    Fiberdlp {
        #[arg(long)]
        q: u64,
        /// First point, "x,y,z"
        #[arg(long)]
        p: String,
        /// Second point, "x,y,z"
        #[arg(long)]
        r: String,
        /// Fiber coordinate: 1 = x, 2 = y, 3 = z
        #[arg(long)]
        k: u8,
        #[arg(long)]
        json: bool,
    },
    /// Compute a verified path certificate between two points
    Pathfind {
        #[arg(long)]
        q: u64,
        /// Start point, "x,y,z"
        #[arg(long)]
        p: String,
        /// End point, "x,y,z"
        #[arg(long)]
        r: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Restrict both preparatory walks to rho1
        #[arg(long)]
        simple_walk: bool,
        #[arg(long)]
        max_walk_steps: Option<u64>,
        #[arg(long)]
        max_fiber_tries: Option<u64>,
        #[arg(long, default_value_t = 8)]
        max_restarts: u32,
        #[arg(long)]
        json: bool,
    },
    /// Compute a verified non-trivial loop based at a point
    Loop {
        #[arg(long)]
        q: u64,
        /// Base point, "x,y,z"
        #[arg(long)]
        p: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        simple_walk: bool,
        #[arg(long, default_value_t = 8)]
        max_restarts: u32,
        #[arg(long)]
        json: bool,
    },
    /// Re-check a certificate produced by pathfind/loop (file or stdin)
    Verify {
        /// Certificate JSON file; reads stdin when omitted
        #[arg(long)]
        file: Option<std::path::PathBuf>,
    },
    /// Run the pinned worked example end to end and diff every intermediate value
    Example,
    /// Randomized and exhaustive experiment tables
    Experiment {
        #[command(subcommand)]
        experiment: Experiment,
    },
}

#[derive(Args)]
struct SampledArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for the trial loop (trials are seeded independently,
    /// so the output does not depend on this)
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, conflicts_with = "json")]
    csv: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExhaustiveArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, conflicts_with = "json")]
    csv: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Experiment {
    /// Mean random-walk length until a maximally hyperbolic y-coordinate
    Heur1(SampledArgs),
    /// Exact surface census and the maximally-hyperbolic-coordinate fraction
    Heur1a(ExhaustiveArgs),
    /// Rate at which a random x-value connects two random fibers
    Heur2(SampledArgs),
    /// Exhaustive fiber sizes over x0 in F_q^*
    Fibers(ExhaustiveArgs),
    /// Exhaustive count of maximally hyperbolic t, against phi(q-1)/2
    Maxcount(ExhaustiveArgs),
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::WalkTimeout(_) | Error::FiberTimeout(_) | Error::SearchExhausted(_) => 3,
        _ => 2,
    }
}

fn run(command: Command) -> Result<i32, Error> {
    match command {
        Command::Classify {
            q,
            t,
            partial_bound,
            json,
        } => cmd_classify(q, t, partial_bound, json),
        Command::Fiberdlp { q, p, r, k, json } => cmd_fiberdlp(q, &p, &r, k, json),
        Command::Pathfind {
            q,
            p,
            r,
            seed,
            simple_walk,
            max_walk_steps,
            max_fiber_tries,
            max_restarts,
            json,
        } => {
            let options = PathOptions {
                simple_walk,
                max_walk_steps,
                max_fiber_tries,
                max_restarts,
            };
            cmd_pathfind(q, &p, &r, seed, &options, json)
        }
        Command::Loop {
            q,
            p,
            seed,
            simple_walk,
            max_restarts,
            json,
        } => {
            let options = PathOptions {
                simple_walk,
                max_restarts,
                ..PathOptions::default()
            };
            cmd_loop(q, &p, seed, &options, json)
        }
        Command::Verify { file } => cmd_verify(file.as_deref()),
        Command::Example => Ok(worked_example::run()),
        Command::Experiment { experiment } => cmd_experiment(experiment),
    }
}

fn cmd_classify(q: u64, t: u64, partial_bound: Option<u64>, json: bool) -> Result<i32, Error> {
    let k = PrimeField::new(q)?;
    let t = k.reduce(t);
    let f = factor(q - 1);
    let class = classify(&k, t, &f);

    let probably_max = partial_bound.map(|bound| {
        let pf = factor_up_to(q - 1, bound);
        let pass = class
            .lambda()
            .is_some_and(|l| probable_primitive_root(&k, l, &pf));
        (pass, pf.miss_probability_bound())
    });

    if json {
        let mut obj = json!({
            "q": q.to_string(),
            "t": t.to_string(),
            "kind": class.kind(),
        });
        if let SpectralClass::Hyperbolic { lambda, order } = class {
            obj["lambda"] = json!(lambda.to_string());
            obj["order"] = json!(order.to_string());
            obj["max_hyperbolic"] = json!(order == q - 1);
        }
        if let Some((pass, miss)) = probably_max {
            obj["probably_max_hyperbolic"] = json!(pass);
            obj["miss_probability_bound"] = json!(miss);
        }
        println!("{obj}");
    } else {
        match class {
            SpectralClass::Hyperbolic { lambda, order } => {
                println!(
                    "t = {t} is hyperbolic: lambda = {lambda}, order = {order}{}",
                    if order == q - 1 {
                        " (maximally hyperbolic)"
                    } else {
                        ""
                    }
                );
            }
            _ => println!("t = {t} is {}", class.kind()),
        }
        if let Some((pass, miss)) = probably_max {
            println!(
                "partial-factorization test: {} (false-accept bound {miss:.3e})",
                if pass { "probably maximal" } else { "not maximal" }
            );
        }
    }
    Ok(0)
}

fn cmd_fiberdlp(q: u64, p: &str, r: &str, k_idx: u8, json: bool) -> Result<i32, Error> {
    let k = PrimeField::new(q)?;
    let p = MarkoffPoint::parse(&k, p)?;
    let r = MarkoffPoint::parse(&k, r)?;
    let axis = Axis::from_index(k_idx).ok_or(Error::BadPointFormat(format!(
        "generator index {k_idx} (expected 1, 2 or 3)"
    )))?;
    let f = factor(q - 1);
    let n = markoff_dlp(&k, &f, &p, &r, axis)?;
    let verified = p.rho_pow(&k, axis, n as i64) == r;
    if json {
        println!(
            "{}",
            json!({
                "q": q.to_string(),
                "k": k_idx.to_string(),
                "p": point_json(&p),
                "r": point_json(&r),
                "n": n.to_string(),
                "verified": verified,
            })
        );
    } else {
        println!("rho{k_idx}^{n}({p}) = {r}  [verified: {verified}]");
    }
    Ok(if verified { 0 } else { 1 })
}

fn cmd_pathfind(
    q: u64,
    p: &str,
    r: &str,
    seed: Option<u64>,
    options: &PathOptions,
    json: bool,
) -> Result<i32, Error> {
    let k = PrimeField::new(q)?;
    let start = MarkoffPoint::parse(&k, p)?;
    let end = MarkoffPoint::parse(&k, r)?;
    let seed = seed.unwrap_or_else(rand::random);
    let f = factor(q - 1);
    let cert = find_path(&k, &f, start, end, seed, options)?;
    emit_certificate(&k, &cert, json);
    Ok(0)
}

fn cmd_loop(
    q: u64,
    p: &str,
    seed: Option<u64>,
    options: &PathOptions,
    json: bool,
) -> Result<i32, Error> {
    let k = PrimeField::new(q)?;
    let base = MarkoffPoint::parse(&k, p)?;
    let seed = seed.unwrap_or_else(rand::random);
    let f = factor(q - 1);
    let cert = find_loop(&k, &f, base, seed, options)?;
    emit_certificate(&k, &cert, json);
    Ok(0)
}

fn emit_certificate(k: &PrimeField, cert: &PathCertificate, json: bool) {
    debug_assert!(cert.verify(k));
    if json {
        println!("{}", cert.to_json());
    } else {
        println!("path : {}", cert.word);
        println!("from : {}", cert.start);
        println!("to   : {}", cert.end);
        println!("steps: {} (total rotations {})", cert.word.len(), cert.word.rotation_count());
        println!("seed : {}", cert.seed);
        println!("verified: true");
    }
}

fn cmd_verify(file: Option<&std::path::Path>) -> Result<i32, Error> {
    let text = match file {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::BadCertificate(format!("{}: {e}", path.display())))?,
        None => {
            use std::io::Read;
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::BadCertificate(e.to_string()))?;
            buf
        }
    };
    let cert = PathCertificate::from_json(&text)?;
    let k = PrimeField::new(cert.q)?;
    if cert.verify(&k) {
        println!(
            "certificate verified: {} -> {} in {} steps over F_{}",
            cert.start,
            cert.end,
            cert.word.len(),
            cert.q
        );
        Ok(0)
    } else {
        eprintln!("certificate FAILED verification");
        Ok(1)
    }
}

fn cmd_experiment(experiment: Experiment) -> Result<i32, Error> {
    match experiment {
        Experiment::Heur1(args) => {
            let k = PrimeField::new(args.q)?;
            let f = factor(args.q - 1);
            let seed = args.seed.unwrap_or_else(rand::random);
            let result = in_pool(args.threads, || {
                heur1_mean_walk(&k, &f, args.samples, seed)
            });
            emit_result("heur1", &result, args.csv, args.json);
            Ok(0)
        }
        Experiment::Heur2(args) => {
            let k = PrimeField::new(args.q)?;
            let f = factor(args.q - 1);
            let seed = args.seed.unwrap_or_else(rand::random);
            let result = in_pool(args.threads, || heur2_rate(&k, &f, args.samples, seed));
            emit_result("heur2", &result, args.csv, args.json);
            Ok(0)
        }
        Experiment::Heur1a(args) => {
            let k = PrimeField::new(args.q)?;
            let f = factor(args.q - 1);
            let c = heur1a_census(&k, &f)?;
            if args.json {
                println!(
                    "{}",
                    json!({
                        "experiment": "heur1a",
                        "q": c.q.to_string(),
                        "points": c.points.to_string(),
                        "affine_points": c.affine_points.to_string(),
                        "gen_points": c.gen_points.to_string(),
                        "surface_ratio": c.surface_ratio,
                        "gen_ratio": c.gen_ratio,
                        "theory": c.theory,
                    })
                );
            } else if args.csv {
                println!("{}", ExperimentResult::CSV_HEADER);
                println!(
                    "{},{:.6},{:.6},{},0",
                    c.q, c.theory, c.gen_ratio, c.points
                );
            } else {
                println!("q = {}", c.q);
                println!("points (closure)        = {}  ({:.5} of q^2)", c.points, c.surface_ratio);
                println!("points (affine)         = {}", c.affine_points);
                println!("max-hyperbolic x points = {}  ({:.5} of q^2)", c.gen_points, c.gen_ratio);
                println!("phi(q-1)/(2(q-1))       = {:.5}", c.theory);
            }
            Ok(0)
        }
        Experiment::Fibers(args) => {
            let k = PrimeField::new(args.q)?;
            let f = factor(args.q - 1);
            let rows = exact_fiber_census(&k, &f)?;
            if args.json {
                let rows: Vec<_> = rows
                    .iter()
                    .map(|r| {
                        json!({
                            "x0": r.x0.to_string(),
                            "class": r.class.kind(),
                            "size": r.size.to_string(),
                        })
                    })
                    .collect();
                println!("{}", json!({"q": args.q.to_string(), "fibers": rows}));
            } else if args.csv {
                println!("x0,class,size");
                for r in &rows {
                    println!("{},{},{}", r.x0, r.class.kind(), r.size);
                }
            } else {
                let q = args.q;
                let hyp = rows.iter().filter(|r| r.class.is_hyperbolic()).count();
                let ell = rows
                    .iter()
                    .filter(|r| matches!(r.class, SpectralClass::Elliptic))
                    .count();
                let par = rows.len() - hyp - ell;
                let dichotomy = rows.iter().all(|r| match r.class {
                    SpectralClass::Hyperbolic { .. } => r.size == q - 1,
                    SpectralClass::Elliptic => r.size == q + 1,
                    SpectralClass::Parabolic => true,
                });
                println!("q = {q}: {hyp} hyperbolic fibers (size q-1), {ell} elliptic (size q+1), {par} parabolic");
                println!("size dichotomy holds: {dichotomy}");
            }
            Ok(0)
        }
        Experiment::Maxcount(args) => {
            let k = PrimeField::new(args.q)?;
            let f = factor(args.q - 1);
            let count = count_max_hyperbolic(&k, &f)?;
            let expected = f.euler_phi() / 2;
            if args.json {
                println!(
                    "{}",
                    json!({
                        "experiment": "maxcount",
                        "q": args.q.to_string(),
                        "count": count.to_string(),
                        "phi_half": expected.to_string(),
                        "matches": count == expected,
                    })
                );
            } else if args.csv {
                println!("{}", ExperimentResult::CSV_HEADER);
                println!("{},{},{},{},0", args.q, expected, count, args.q);
            } else {
                println!(
                    "maximally hyperbolic count = {count}, phi(q-1)/2 = {expected} [{}]",
                    if count == expected { "match" } else { "MISMATCH" }
                );
            }
            Ok(if count == expected { 0 } else { 1 })
        }
    }
}

fn in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
        .install(job)
}

fn emit_result(name: &str, r: &ExperimentResult, csv: bool, json: bool) {
    if json {
        println!(
            "{}",
            json!({
                "experiment": name,
                "q": r.q.to_string(),
                "theory": r.theory,
                "measured": r.measured,
                "samples": r.samples.to_string(),
                "seed": r.seed.to_string(),
            })
        );
    } else if csv {
        println!("{}", ExperimentResult::CSV_HEADER);
        println!("{}", r.csv_row());
    } else {
        println!(
            "{name} at q = {}: theory {:.4}, measured {:.4} ({} samples, seed {})",
            r.q, r.theory, r.measured, r.samples, r.seed
        );
    }
}

fn point_json(p: &MarkoffPoint) -> serde_json::Value {
    json!([p.x().to_string(), p.y().to_string(), p.z().to_string()])
}
