use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use regulab::altdiff::{ddt, write_csv, DiffOp, SBox};
use regulab::centralizer::{centralizer_descriptor, centralizer_generators, centralizer_group};
use regulab::oracle::{verify, verify_all, VerificationReport};
use regulab::perm::DEFAULT_BUDGET;
use regulab::regular::{
    build_tb, count_t_n, dixon_conjugator, enumerate_second_maximal, translation_group, weak_keys,
    RegularGroupRecord,
};
use regulab::sylow::{
    all_sylows, canonical_sylow, count_s_n, count_sylows, outer_normalizer_element, sylow_from_flag, t_sigma,
};
use regulab::{Affinity, BitMatrix, BitVector, Error, Flag, RegularGroup, Subspace};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "regulab", version, about = "Elementary abelian regular subgroups of Sym(F_2^n) and their XOR-like operations")]
struct Cli {
    /// Cap on worker threads
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Include per-report runtimes (output is then no longer reproducible byte for byte)
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Xor,
    Circ,
}

#[derive(Subcommand)]
enum Command {
    /// List the regular subgroups meeting T in a subgroup of index 4
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=8))]
        n: u8,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run registered checks and emit verification reports
    #[command(group(ArgGroup::new("which").required(true).args(["all", "theorem"])))]
    Verify {
        #[arg(long)]
        all: bool,
        #[arg(long)]
        theorem: Option<String>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=8))]
        n: u8,
    },
    /// Sylow 2-subgroups of AGL(F_2^n)
    #[command(group(ArgGroup::new("mode").required(true).args(["count", "list_flags", "t_sigma", "s_n", "outer"])))]
    Sylow {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=8))]
        n: u8,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        list_flags: bool,
        #[arg(long)]
        t_sigma: bool,
        #[arg(long)]
        s_n: bool,
        /// An element of N_Sym(Σ) outside AGL
        #[arg(long)]
        outer: bool,
        /// Adapted basis of the flag, e.g. "100,010,001" (default: canonical)
        #[arg(long)]
        flag: Option<String>,
    },
    /// Centralizer in Sym(V) of the translations by a subspace
    Centralizer {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=8))]
        n: u8,
        /// Spanning vectors joined by ',' ("" or "0" for the zero subspace)
        #[arg(long)]
        subspace: String,
    },
    /// Weak keys of T_b or of a group read from JSON
    #[command(group(ArgGroup::new("source").required(true).args(["b", "group"])))]
    WeakKeys {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=8))]
        n: u8,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Difference-distribution table of an S-box as CSV
    Ddt {
        /// Newline-separated integers, 2^n of them
        #[arg(long)]
        sbox: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
        /// Group JSON (required for --op circ)
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Conjugator g with H^g = K matching ∘-coordinates through a matrix
    Dixon {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=8))]
        n: u8,
        /// "T", "b:<bits>" for T_b, or a group JSON file
        #[arg(long, default_value = "T")]
        h: String,
        #[arg(long)]
        k: String,
        /// Rows joined by '/' (default: identity)
        #[arg(long)]
        iso: Option<String>,
    },
}

enum Outcome {
    Json(Value),
    Reports(Vec<VerificationReport>),
    Text(String),
}

fn budget() -> anyhow::Result<usize> {
    match std::env::var("REGULAB_BUDGET") {
        Ok(s) => s.trim().parse().map_err(|_| anyhow!(Error::Parse(format!("REGULAB_BUDGET={s:?} is not a count")))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn doc(mut value: Value) -> Value {
    value["schema_version"] = json!(SCHEMA_VERSION);
    value
}

fn big_json(x: &num_bigint::BigUint) -> Value {
    u64::try_from(x).map_or_else(|_| json!(x.to_string()), |v| json!(v))
}

fn parse_flag(n: usize, s: Option<&str>) -> anyhow::Result<Flag> {
    let flag = match s {
        None => Flag::canonical(n),
        Some(s) => s.parse::<Flag>()?,
    };
    if flag.dim() != n {
        bail!(Error::DimensionMismatch { expected: n, found: flag.dim() });
    }
    Ok(flag)
}

fn parse_vector(n: usize, s: &str) -> anyhow::Result<BitVector> {
    let v: BitVector = s.parse()?;
    if v.dim() != n {
        bail!(Error::DimensionMismatch { expected: n, found: v.dim() });
    }
    Ok(v)
}

fn read_group(path: &Path) -> anyhow::Result<RegularGroup> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let record = value.get("group").cloned().unwrap_or(value);
    let record: RegularGroupRecord =
        serde_json::from_value(record).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok(RegularGroup::from_record(&record)?)
}

fn group_spec(n: usize, spec: &str) -> anyhow::Result<RegularGroup> {
    let g = if spec == "T" {
        translation_group(n)?
    } else if let Some(b) = spec.strip_prefix("b:") {
        build_tb(n, parse_vector(n, b)?)?
    } else {
        read_group(Path::new(spec))?
    };
    if g.dim() != n {
        bail!(Error::DimensionMismatch { expected: n, found: g.dim() });
    }
    Ok(g)
}

fn group_json(g: &RegularGroup) -> Value {
    serde_json::to_value(g.to_record()).expect("records serialize")
}

fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Enumerate { n, format } => {
            let n = n as usize;
            if n > 5 {
                bail!(Error::ScaleGuard(format!("listing all {} groups at n = {n}", count_t_n(n))));
            }
            let groups = enumerate_second_maximal(n)?;
            Ok(match format {
                Format::Json => Outcome::Json(doc(json!({
                    "n": n,
                    "count": groups.len(),
                    "groups": groups.iter().map(group_json).collect::<Vec<_>>(),
                }))),
                Format::Text => Outcome::Text(
                    groups
                        .iter()
                        .map(|g| {
                            let b = g.recovered_b().map_or("-".to_owned(), |b| b.to_string());
                            format!("W=[{}] b={b}\n", g.intersection_with_t())
                        })
                        .collect(),
                ),
                Format::Csv => {
                    let mut out = String::from("index,W,b\n");
                    for (i, g) in groups.iter().enumerate() {
                        let b = g.recovered_b().map_or(String::new(), |b| b.to_string());
                        out.push_str(&format!("{i},\"{}\",{b}\n", g.intersection_with_t()));
                    }
                    Outcome::Text(out)
                }
            })
        }
        Command::Verify { all, theorem, n } => {
            let n = n as usize;
            let reports = match theorem {
                Some(id) if !all => verify(&id, n)?,
                _ => verify_all(n),
            };
            Ok(Outcome::Reports(reports))
        }
        Command::Sylow { n, count, list_flags, t_sigma: want_t_sigma, s_n, outer: _, flag } => {
            let n = n as usize;
            if count {
                return Ok(Outcome::Json(doc(json!({
                    "n": n,
                    "count": big_json(&count_sylows(n)),
                }))));
            }
            if s_n {
                return Ok(Outcome::Json(doc(json!({
                    "n": n,
                    "s_n": big_json(&count_s_n(n)),
                    "t_n": big_json(&count_t_n(n)),
                }))));
            }
            if list_flags {
                let flags: Vec<String> = all_sylows(n)?.iter().map(|s| s.flag().to_string()).collect();
                return Ok(Outcome::Json(doc(json!({ "n": n, "count": flags.len(), "flags": flags }))));
            }
            let sigma = sylow_from_flag(&parse_flag(n, flag.as_deref())?)?;
            if want_t_sigma {
                return Ok(Outcome::Json(doc(json!({
                    "n": n,
                    "flag": sigma.flag().to_string(),
                    "group": group_json(&t_sigma(&sigma)?),
                }))));
            }
            let g = outer_normalizer_element(&sigma)?;
            Ok(Outcome::Json(doc(json!({
                "n": n,
                "flag": sigma.flag().to_string(),
                "element": g.images(),
                "cycles": g.to_string(),
                "is_affine": Affinity::from_perm(&g).is_some(),
                "canonical": sigma == canonical_sylow(n)?,
            }))))
        }
        Command::Centralizer { n, subspace } => {
            let n = n as usize;
            let w = Subspace::parse(n, &subspace)?;
            let desc = centralizer_descriptor(&w, n)?;
            let generators = centralizer_generators(&w, n)?;
            let closure_order = match centralizer_group(&w, n, budget()?) {
                Ok(g) => json!(g.order()?),
                Err(Error::BudgetExceeded(_)) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            Ok(Outcome::Json(doc(json!({
                "n": n,
                "subspace": w.to_string(),
                "m": desc.m,
                "top_degree": desc.top_degree,
                "order": big_json(&desc.predicted_order),
                "closure_order": closure_order,
                "generators": generators.iter().map(|g| g.images()).collect::<Vec<_>>(),
                "is_affine_subgroup": generators.iter().all(|g| Affinity::from_perm(g).is_some()),
            }))))
        }
        Command::WeakKeys { n, b, group } => {
            let n = n as usize;
            let g = match (b, group) {
                (Some(b), _) => build_tb(n, parse_vector(n, &b)?)?,
                (None, Some(path)) => read_group(&path)?,
                (None, None) => unreachable!("clap requires one source"),
            };
            if g.dim() != n {
                bail!(Error::DimensionMismatch { expected: n, found: g.dim() });
            }
            let keys = weak_keys(&g).subspace;
            Ok(Outcome::Json(doc(json!({
                "n": n,
                "weak_keys": keys.to_string(),
                "dim": keys.dim(),
                "intersection_with_t": g.intersection_with_t().to_string(),
            }))))
        }
        Command::Ddt { sbox, op, group } => {
            let text = fs::read_to_string(&sbox).with_context(|| format!("reading {}", sbox.display()))?;
            let s = SBox::parse(&text)?;
            let table = match (op, group) {
                (Op::Xor, _) => ddt(&s, DiffOp::Xor)?,
                (Op::Circ, Some(path)) => ddt(&s, DiffOp::Circ(&read_group(&path)?))?,
                (Op::Circ, None) => bail!(Error::Parse("--op circ needs --group".into())),
            };
            let mut out = Vec::new();
            write_csv(&table, &mut out)?;
            Ok(Outcome::Text(String::from_utf8(out).expect("ascii")))
        }
        Command::Dixon { n, h, k, iso } => {
            let n = n as usize;
            let (h, k) = (group_spec(n, &h)?, group_spec(n, &k)?);
            let iso: BitMatrix = match iso {
                Some(s) => s.parse()?,
                None => BitMatrix::identity(n),
            };
            let g = dixon_conjugator(&h, &k, &iso)?;
            Ok(Outcome::Json(doc(json!({
                "n": n,
                "conjugator": g.images(),
                "cycles": g.to_string(),
                "is_affine": Affinity::from_perm(&g).is_some(),
                "conjugates_h_to_k": h.conjugate(&g)? == k,
            }))))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::ScaleGuard(_) | Error::BudgetExceeded(_)) => 3,
        _ => 2,
    }
}

fn emit(outcome: Outcome, timings: bool) -> io::Result<bool> {
    let mut stdout = io::stdout().lock();
    let (text, ok) = match outcome {
        Outcome::Json(v) => (serde_json::to_string_pretty(&v)? + "\n", true),
        Outcome::Text(s) => (s, true),
        Outcome::Reports(mut reports) => {
            if !timings {
                reports.iter_mut().for_each(|r| r.runtime_ms = None);
            }
            let ok = reports.iter().all(VerificationReport::passed);
            let v = doc(json!({ "reports": reports, "all_verified": ok }));
            (serde_json::to_string_pretty(&v)? + "\n", ok)
        }
    };
    stdout.write_all(text.as_bytes())?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(outcome) => match emit(outcome, cli.timings) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
