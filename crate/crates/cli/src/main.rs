//! Command-line front end: every subcommand writes a JSON report with a
//! header holding the tool version, a hash of the config and the seed.

mod output;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};
use serde_json::json;

use eyefree::constructions::{
    blue_construction, distance_to_class, distance_to_colorable, red_construction, weight_b, weight_r, ClassKind,
};
use eyefree::extremal::{exact_check, kex_bruteforce, rb_region, SearchMode};
use eyefree::graph::SimpleGraph;
use eyefree::randmodel::eye_free_structure_stat;
use eyefree::typecalc::{kappa_formula, kappa_search, lambda_p, TypeGraph};
use eyefree::verify::run_suite;
use eyefree::{Error, IGraph, PairColor, Pattern, Rat};

#[derive(Parser, Debug)]
#[command(name = "eyefree", version, about = "Weighted extremal problems for igraphs avoiding an eye I(a,b)")]
struct Cli {
    /// Worker threads for parallel searches and sampling.
    #[arg(long, env = "EYEFREE_THREADS", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// κ_p of an eye from the closed form, optionally confirmed by type search.
    Kappa(KappaArgs),
    /// Exact p-value of a type with maximizer and certificate.
    Lambda(LambdaArgs),
    /// Maximum p-weight of eye-free igraphs on n vertices by exhaustive search.
    Kex(KexArgs),
    /// Brute-force extremal set against the predicted constructions.
    ExactCheck(ExactCheckArgs),
    /// All (R, B) densities reached by eye-free igraphs on n vertices.
    Region(RegionArgs),
    /// Build B_a(n) or R_{b-1}(n) and report its weights.
    Construct(ConstructArgs),
    /// Conditioned samples and their distances to the extremal shapes.
    Sample(SampleArgs),
    /// Edit distance of an igraph to a class.
    Distance(DistanceArgs),
    /// Run a check suite: facts, types, exact, region or random.
    Verify(VerifyArgs),
}

/// `a,b` for the eye `I(a,b)`.
#[derive(Clone, Copy, Debug)]
struct Eye {
    a: usize,
    b: usize,
}

impl FromStr for Eye {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Eye, String> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected a,b, got {s:?}"))?;
        let a: usize = a.trim().parse().map_err(|_| format!("bad a in {s:?}"))?;
        let b: usize = b.trim().parse().map_err(|_| format!("bad b in {s:?}"))?;
        if a < 1 || b < 2 {
            return Err(format!("eye needs a >= 1 and b >= 2, got {a},{b}"));
        }
        Ok(Eye { a, b })
    }
}

impl fmt::Display for Eye {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

impl Serialize for Eye {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Eye {
    fn pattern(&self) -> Result<Pattern> {
        Ok(Pattern::eye(self.a, self.b)?)
    }
}

#[derive(Args, Debug, Serialize)]
struct KappaArgs {
    /// Eye parameters `a,b`.
    #[arg(long)]
    eye: Eye,
    /// Exact fraction `num/den`.
    #[arg(long)]
    p: String,
    /// Also search all p-core types with at most this many vertices (up to 5).
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct LambdaArgs {
    /// File holding a type as `k=..; vcolors=..; ecolors=..`.
    #[arg(long = "type", value_name = "FILE", conflicts_with = "type_text", required_unless_present = "type_text")]
    #[serde(skip)]
    type_file: Option<PathBuf>,
    /// The type given inline.
    #[arg(long)]
    type_text: Option<String>,
    #[arg(long)]
    p: String,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    Exhaustive,
    Bnb,
}

#[derive(Args, Debug, Serialize)]
struct KexArgs {
    #[arg(long)]
    eye: Eye,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: String,
    /// `exhaustive` (n <= 7) or `bnb` (n <= 9).
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ExactCheckArgs {
    #[arg(long)]
    eye: Eye,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: String,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct RegionArgs {
    #[arg(long)]
    eye: Eye,
    /// At most 6.
    #[arg(long)]
    n: usize,
    /// Write the points as CSV.
    #[arg(long)]
    #[serde(skip)]
    csv: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Family {
    /// Blue cliques joined by green.
    B,
    /// Red cliques joined by green.
    R,
}

#[derive(Args, Debug, Serialize)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Number of parts (`a` for B, `b-1` for R).
    #[arg(long)]
    parts: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: String,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    /// Fraction or decimal.
    #[arg(long)]
    p: String,
    #[arg(long)]
    eye: Eye,
    /// Number of conditioned samples.
    #[arg(long, default_value_t = 100)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Draws allowed per conditioned sample.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    #[arg(long)]
    #[serde(skip)]
    csv: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct DistanceArgs {
    /// igraph file: a header line `n=.. p=..` and a colour string over r/b/g/w.
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    input: PathBuf,
    /// `b:<a>`, `r:<b-1>`, `partite:<k>` (red pairs as edges) or
    /// `copartite:<k>` (blue pairs as edges).
    #[arg(long)]
    class: String,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

fn exact_p(s: &str) -> Result<Rat> {
    Ok(Rat::parse_exact(s)?)
}

/// Reports whose checks failed exit with code 3 after being written.
struct Outcome {
    failed: bool,
}

fn run(cli: Cli) -> Result<Outcome> {
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!(Error::InvalidParameter("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring the thread pool")?;
    }
    let mut config = serde_json::to_value(&cli.cmd)?;
    let ok = Outcome { failed: false };
    match &cli.cmd {
        Command::Kappa(a) => {
            let p = exact_p(&a.p)?;
            let formula = kappa_formula(a.eye.a, a.eye.b, &p)?;
            let eye = a.eye.pattern()?;
            let search = a.kmax.map(|k| kappa_search(&eye, &p, k)).transpose()?;
            let agrees = search.as_ref().map(|s| s.value == formula.value);
            let summary = format!("kappa = {} (regime {:?})", formula.value, formula.regime).to_lowercase();
            let json = output::report(&config, None, &json!({ "formula": formula, "search": search, "search_agrees": agrees }))?;
            output::emit(a.out.as_deref(), &json, &summary)?;
            Ok(Outcome { failed: agrees == Some(false) })
        }
        Command::Lambda(a) => {
            let text = match (&a.type_file, &a.type_text) {
                (Some(f), _) => fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?,
                (None, Some(t)) => t.clone(),
                (None, None) => bail!(Error::InvalidParameter("give --type or --type-text".into())),
            };
            let tau = TypeGraph::from_text(text.trim())?;
            config["type_text"] = json!(tau.to_text());
            let p = exact_p(&a.p)?;
            let res = lambda_p(&tau, &p)?;
            let verified = res.verify(&tau, &p);
            let summary = format!("lambda = {}", res.value);
            let json = output::report(&config, None, &json!({ "type": tau, "lambda": res, "certificate_verified": verified }))?;
            output::emit(a.out.as_deref(), &json, &summary)?;
            Ok(Outcome { failed: !verified })
        }
        Command::Kex(a) => {
            let p = exact_p(&a.p)?;
            let mode = match a.mode {
                ModeArg::Exhaustive => SearchMode::Exhaustive,
                ModeArg::Bnb => SearchMode::Bnb,
            };
            let rep = kex_bruteforce(&a.eye.pattern()?, a.n, &p, mode)?;
            let summary = format!("kex = {} with {} extremal igraph(s)", rep.optimum, rep.extremal.len());
            let json = output::report(&config, None, &rep)?;
            output::emit(a.out.as_deref(), &json, &summary)?;
            Ok(ok)
        }
        Command::ExactCheck(a) => {
            let p = exact_p(&a.p)?;
            let c = exact_check(a.eye.a, a.eye.b, &p, a.n)?;
            let summary = format!("verdict {:?}, optimum {}", c.verdict, c.report.optimum);
            let json = output::report(&config, None, &c)?;
            output::emit(a.out.as_deref(), &json, &summary)?;
            Ok(ok)
        }
        Command::Region(a) => {
            let rep = rb_region(a.eye.a, a.eye.b, a.n)?;
            if let Some(path) = &a.csv {
                let rows: Vec<Vec<String>> = rep
                    .points
                    .iter()
                    .map(|q| {
                        vec![q.r.to_string(), q.b.to_string(), q.r.to_f64().to_string(), q.b.to_f64().to_string(), q.witness.clone()]
                    })
                    .collect();
                output::write_csv(path, &config, None, &["R", "B", "R_decimal", "B_decimal", "witness"], &rows)?;
            }
            let failed = !(rep.within_unit_box && rep.covers_all_pairs);
            let summary = format!("{} points, slack {}", rep.points.len(), rep.slack);
            let json = output::report(&config, None, &rep)?;
            output::emit(a.out.as_deref(), &json, &summary)?;
            Ok(Outcome { failed })
        }
        Command::Construct(a) => {
            let p = exact_p(&a.p)?;
            let (g, closed) = match a.family {
                Family::B => (blue_construction(a.parts, a.n), weight_b(a.n, a.parts, &p)?),
                Family::R => (red_construction(a.parts, a.n), weight_r(a.n, a.parts + 1, &p)?),
            };
            let weight = g.weight(&p);
            let entropy = (p > Rat::zero() && p < Rat::one()).then(|| g.entropy_weight(&p)).transpose()?;
            let summary = format!("weight {weight}, closed form {}", closed.value);
            let json = output::report(
                &config,
                None,
                &json!({
                    "igraph": g.to_text(&p), "counts": g.counts(), "weight": weight,
                    "closed_form": closed, "entropy_weight": entropy,
                }),
            )?;
            output::emit(a.out.as_deref(), &json, &summary)?;
            Ok(Outcome { failed: weight != closed.value })
        }
        Command::Sample(a) => {
            let p = Rat::parse_lenient(&a.p)?;
            let stats = eye_free_structure_stat(a.n, &p, a.eye.a, a.eye.b, a.samples, a.seed, a.budget)?;
            if let Some(path) = &a.csv {
                let rows: Vec<Vec<String>> = stats
                    .rows
                    .iter()
                    .map(|r| {
                        [r.index, r.trials, r.edges as u64, r.d_partite, r.d_copartite, r.d_min]
                            .iter()
                            .map(u64::to_string)
                            .collect()
                    })
                    .collect();
                output::write_csv(
                    path,
                    &config,
                    Some(a.seed),
                    &["index", "trials", "edges", "d_partite", "d_copartite", "d_min"],
                    &rows,
                )?;
            }
            let summary = format!(
                "{} samples, acceptance {:.3e}, mean d/n^2 {:.4}",
                stats.rows.len(),
                stats.acceptance.estimate,
                stats.mean_normalized_distance
            );
            let json = output::report(&config, Some(a.seed), &stats)?;
            output::emit(a.out.as_deref(), &json, &summary)?;
            Ok(ok)
        }
        Command::Distance(a) => {
            let text = fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
            let (g, p) = IGraph::from_text(&text)?;
            config["igraph"] = json!(g.to_text(&p));
            let d = distance(&g, &a.class)?;
            let summary = format!("distance {}{}", d.edits, if d.exact { "" } else { " (upper bound)" });
            let json = output::report(&config, None, &d)?;
            output::emit(a.out.as_deref(), &json, &summary)?;
            Ok(ok)
        }
        Command::Verify(a) => {
            let rep = run_suite(&a.suite, a.seed)?;
            let failed = rep.failures().into_iter().map(|c| c.name).collect::<Vec<_>>();
            let summary = if failed.is_empty() {
                format!("suite {}: all {} checks passed", rep.suite, rep.checks.len())
            } else {
                format!("suite {}: failed {}", rep.suite, failed.join(", "))
            };
            let json = output::report(&config, Some(a.seed), &rep)?;
            output::emit(a.out.as_deref(), &json, &summary)?;
            if !failed.is_empty() {
                eprintln!("{summary}");
            }
            Ok(Outcome { failed: !rep.passed })
        }
    }
}

fn distance(g: &IGraph, class: &str) -> Result<eyefree::constructions::Distance> {
    let (kind, k) = class.split_once(':').ok_or_else(|| anyhow!(Error::InvalidParameter(format!("bad class {class:?}"))))?;
    let k: usize = k.parse().map_err(|_| Error::InvalidParameter(format!("bad part count in {class:?}")))?;
    let plain = |c: PairColor| {
        let edges: Vec<(usize, usize)> = g.pairs().filter(|&(u, v)| g.color(u, v) == c).collect();
        SimpleGraph::from_edges(g.n(), &edges)
    };
    Ok(match kind {
        "b" => distance_to_class(g, ClassKind::B(k))?,
        "r" => distance_to_class(g, ClassKind::R(k))?,
        "partite" => distance_to_colorable(&plain(PairColor::Red), k)?,
        "copartite" => distance_to_colorable(&plain(PairColor::Blue), k)?,
        _ => bail!(Error::InvalidParameter(format!("unknown class kind {kind:?}"))),
    })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Exhausted { .. }) => 2,
        Some(Error::CheckFailed(_)) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(o) if o.failed => ExitCode::from(3),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eye_parsing() {
        let e: Eye = "2,3".parse().unwrap();
        assert_eq!((e.a, e.b), (2, 3));
        assert!("2".parse::<Eye>().is_err());
        assert!("0,3".parse::<Eye>().is_err());
        assert!("2,1".parse::<Eye>().is_err());
        assert_eq!(e.to_string(), "2,3");
    }

    #[test]
    fn config_excludes_outputs() {
        let cli = Cli::try_parse_from(["eyefree", "--threads", "3", "verify", "--suite", "facts", "--out", "x.json"]).unwrap();
        let v = serde_json::to_value(&cli.cmd).unwrap();
        assert_eq!(v, json!({ "command": "verify", "suite": "facts", "seed": 42 }));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&anyhow!(Error::Exhausted { budget: 1 })), 2);
        assert_eq!(exit_code(&anyhow!(Error::CheckFailed("x".into()))), 3);
        assert_eq!(exit_code(&anyhow!(Error::Parse("x".into()))), 1);
        assert_eq!(exit_code(&anyhow!("io")), 1);
    }

    #[test]
    fn decimal_rejected_for_exact_p() {
        assert!(exact_p("0.5").is_err());
        assert_eq!(exact_p("1/2").unwrap(), Rat::new(1, 2));
    }

    #[test]
    fn distance_class_parsing() {
        let g = IGraph::new(4, PairColor::Green);
        assert_eq!(distance(&g, "b:1").unwrap().edits, 6);
        assert_eq!(distance(&g, "partite:2").unwrap().edits, 0);
        assert!(distance(&g, "x:1").is_err());
        assert!(distance(&g, "b").is_err());
    }
}
