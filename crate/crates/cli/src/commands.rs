//! Subcommands. Each returns its report text or a [`CliError`] carrying the
//! exit code.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use ulam_core::aggregation::{
    bichromatic_center, bichromatic_median, continuous_median_exhaustive, discrete_center, discrete_median,
    restricted_median_search, DEFAULT_CONTINUOUS_GUARD,
};
use ulam_core::metric::{lcs_oracle, ulam_distance, PositionIndex};
use ulam_core::oracles::maxcut_bruteforce;
use ulam_core::reductions::certificate::{Certificate, CertificateBody};
use ulam_core::reductions::maxcut::maxcut_to_median;
use ulam_core::reductions::monochromatic::bichromatic_to_monochromatic_median;
use ulam_core::reductions::multiset::multiset_to_set;
use ulam_core::reductions::ov::{ov4_to_bichromatic_median, pad_ov_for_divisibility, qov_to_discrete_center};
use ulam_core::reductions::verify::verify;
use ulam_core::reductions::ReducedInstance;
use ulam_core::{Objective, Perm, UlamInstance};

use crate::formats::{parse_graph, parse_instance, parse_vectors, serialize_instance};

/// Largest `n * L` the benchmark generator accepts.
pub const BENCH_SIZE_LIMIT: u64 = 1 << 26;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    /// A check failed; the payload is the full report.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) | CliError::Io { .. } => 2,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Sidecar path: `<instance>.cert.json`.
pub fn cert_path(instance: &Path) -> PathBuf {
    let mut s = instance.as_os_str().to_os_string();
    s.push(".cert.json");
    PathBuf::from(s)
}

pub fn load_instance(path: &Path) -> Result<ReducedInstance, CliError> {
    parse_instance(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn load_certificate(path: &Path) -> Result<Certificate, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn save(output: &Path, inst: &ReducedInstance, cert: &Certificate) -> Result<PathBuf, CliError> {
    write(output, &serialize_instance(inst))?;
    let side = cert_path(output);
    let json = serde_json::to_string_pretty(cert).map_err(usage)?;
    write(&side, &(json + "\n"))?;
    Ok(side)
}

#[derive(Debug, Parser)]
#[command(name = "ulam", version, about = "Ulam-metric median/center solvers, reductions and verifiers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ulam distance between two permutations.
    Dist(DistArgs),
    /// Solve a median or center instance.
    Solve(SolveArgs),
    /// Run a reduction, writing an instance and its certificate sidecar.
    Reduce(ReduceArgs),
    /// Check an instance against its certificate.
    Verify(VerifyArgs),
    /// Time the all-pairs baseline on a random instance; CSV on stdout.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// Two permutations: space- or comma-separated symbols, or digit strings
    /// like `231` when every symbol is below 10.
    #[arg(num_args = 0..=2)]
    pub perms: Vec<String>,
    /// Take the first two members of this instance file instead.
    #[arg(long, conflicts_with = "perms")]
    pub file: Option<PathBuf>,
    /// Also run the quadratic LCS reference and require agreement.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Median,
    Center,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Median => Objective::Median,
            ObjectiveArg::Center => Objective::Center,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value = "median")]
    pub objective: ObjectiveArg,
    /// Candidates are the instance members (default for mono files).
    #[arg(long, group = "mode")]
    pub discrete: bool,
    /// Exhaustive search over all permutations of the alphabet.
    #[arg(long, group = "mode")]
    pub continuous: bool,
    /// Candidates from X, objective over Y (default for bi files).
    #[arg(long, group = "mode")]
    pub bichromatic: bool,
    /// Best cut-shaped permutation of a Max-Cut instance (needs its certificate).
    #[arg(long, group = "mode")]
    pub restricted: bool,
    /// Certificate to compare the decision against; defaults to the sidecar
    /// if one exists.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    /// Alphabet-size guard for --continuous.
    #[arg(long, default_value_t = DEFAULT_CONTINUOUS_GUARD)]
    pub guard: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReduceKind {
    MaxcutMedian,
    MultisetSet,
    QovCenter,
    Ov4Bimedian,
    BiMonomedian,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(value_enum)]
    pub kind: ReduceKind,
    pub input: PathBuf,
    pub output: PathBuf,
    /// Target cut size for maxcut-median (default: the maximum cut).
    #[arg(long)]
    pub cut: Option<usize>,
    /// Pad |A| and |B| to a multiple of 4 (ov4-bimedian).
    #[arg(long)]
    pub pad: bool,
    /// Certificate of the input instance (bi-monomedian; defaults to the sidecar).
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    /// Defaults to `<instance>.cert.json`.
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "L")]
    pub l: usize,
    #[arg(long, value_enum, default_value = "median")]
    pub objective: ObjectiveArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the generated instance here.
    #[arg(long)]
    pub instance_out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Dist(a) => cmd_dist(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::Reduce(a) => cmd_reduce(&a),
        Command::Verify(a) => cmd_verify(&a.instance, a.cert.as_deref()),
        Command::Bench(a) => cmd_bench(&a),
    }
}

/// `"2 1 3"`, `"2,1,3"`, or the compact `"213"` when every symbol is one digit.
fn parse_inline(s: &str) -> Result<Perm, CliError> {
    let s = s.trim();
    if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && s.len() > 1 {
        return Perm::new(s.bytes().map(|b| u32::from(b - b'0')).collect()).map_err(usage);
    }
    s.replace(',', " ").parse::<Perm>().map_err(usage)
}

pub fn cmd_dist(args: &DistArgs) -> Result<String, CliError> {
    let (a, b) = match (&args.file, args.perms.as_slice()) {
        (Some(path), _) => {
            let perms = match load_instance(path)? {
                ReducedInstance::Mono(m) => m.into_perms(),
                ReducedInstance::Bi(b) => b.x.into_iter().chain(b.y).collect(),
            };
            if perms.len() < 2 {
                return Err(usage("the instance has fewer than two members"));
            }
            (perms[0].clone(), perms[1].clone())
        }
        (None, [x, y]) => (parse_inline(x)?, parse_inline(y)?),
        _ => return Err(usage("give two permutations or --file")),
    };
    let d = ulam_distance(&a, &b).map_err(usage)?;
    if !args.oracle {
        return Ok(format!("{d}\n"));
    }
    let reference = a.len() - lcs_oracle(a.as_slice(), b.as_slice());
    let report = format!("ulam {d}\nlcs-oracle {reference}\n");
    if reference != d {
        return Err(CliError::Failed(report + "MISMATCH\n"));
    }
    Ok(report)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<String, CliError> {
    let inst = load_instance(&args.instance)?;
    let cert_file = args.cert.clone().or_else(|| Some(cert_path(&args.instance)).filter(|p| p.exists()));
    let cert = cert_file.as_deref().map(load_certificate).transpose()?;
    let objective: Objective = args.objective.into();

    let mode = if args.continuous {
        "continuous"
    } else if args.restricted {
        "restricted"
    } else if matches!(inst, ReducedInstance::Bi(_)) {
        "bichromatic"
    } else {
        "discrete"
    };

    let (result, tau) = match &inst {
        ReducedInstance::Bi(b) => {
            if args.discrete || args.continuous || args.restricted {
                return Err(usage("bi instances only support --bichromatic"));
            }
            let r = match objective {
                Objective::Median => bichromatic_median(b),
                Objective::Center => bichromatic_center(b),
            };
            (r.map_err(usage)?, b.tau)
        }
        ReducedInstance::Mono(m) => {
            if args.bichromatic {
                return Err(usage("--bichromatic needs a bi instance"));
            }
            let r = if args.continuous {
                if objective != Objective::Median {
                    return Err(usage("--continuous supports the median objective only"));
                }
                continuous_median_exhaustive(m.perms(), args.guard)
            } else if args.restricted {
                let Some(Certificate { body: CertificateBody::MaxcutMedian(c), .. }) = &cert else {
                    return Err(usage("--restricted needs a maxcut-median certificate"));
                };
                if objective != Objective::Median {
                    return Err(usage("--restricted supports the median objective only"));
                }
                restricted_median_search(m, c)
            } else {
                match objective {
                    Objective::Median => discrete_median(m),
                    Objective::Center => discrete_center(m),
                }
            };
            (r.map_err(usage)?, m.tau())
        }
    };

    let mut out = String::new();
    match result.index {
        Some(i) => writeln!(out, "index {i}").unwrap(),
        None => writeln!(out, "perm {}", result.perm).unwrap(),
    }
    let decision = result.within(tau);
    writeln!(out, "cost {}\ntau {tau}\ndecision {}", result.cost, yes_no(decision)).unwrap();
    let certified = cert.as_ref().filter(|c| certifies(c, mode, objective));
    if let Some(expected) = certified.and_then(|c| c.oracle_decision) {
        writeln!(out, "oracle {}", yes_no(expected)).unwrap();
        if expected != decision {
            return Err(CliError::Failed(out + "MISMATCH\n"));
        }
    }
    Ok(out)
}

/// Whether the certificate's oracle bit answers this solve mode.
fn certifies(cert: &Certificate, mode: &str, objective: Objective) -> bool {
    match cert.body {
        CertificateBody::MaxcutMedian(_) => objective == Objective::Median && matches!(mode, "restricted" | "continuous"),
        CertificateBody::MultisetSet(_) => false,
        CertificateBody::QovCenter(_) => objective == Objective::Center && mode == "discrete",
        CertificateBody::Ov4Bimedian(_) => objective == Objective::Median && mode == "bichromatic",
        CertificateBody::BiMonomedian(_) => objective == Objective::Median && mode == "discrete",
    }
}

pub fn cmd_reduce(args: &ReduceArgs) -> Result<String, CliError> {
    let (inst, body) = match args.kind {
        ReduceKind::MaxcutMedian => {
            let g = parse_graph(&read(&args.input)?).map_err(usage)?;
            let k = match args.cut {
                Some(k) => k,
                None => maxcut_bruteforce(&g).map_err(|e| usage(format!("{e}; pass --cut")))?,
            };
            let (inst, cert) = maxcut_to_median(&g, k).map_err(usage)?;
            (ReducedInstance::Mono(inst), CertificateBody::MaxcutMedian(cert))
        }
        ReduceKind::MultisetSet => {
            let ReducedInstance::Mono(m) = load_instance(&args.input)? else {
                return Err(usage("multiset-set needs a mono instance"));
            };
            let (inst, cert) = multiset_to_set(&m).map_err(usage)?;
            (ReducedInstance::Mono(inst), CertificateBody::MultisetSet(cert))
        }
        ReduceKind::QovCenter => {
            let sets = parse_vectors(&read(&args.input)?).map_err(usage)?.to_ov_sets().map_err(usage)?;
            let (inst, cert) = qov_to_discrete_center(&sets).map_err(usage)?;
            (ReducedInstance::Mono(inst), CertificateBody::QovCenter(cert))
        }
        ReduceKind::Ov4Bimedian => {
            let mut sets = parse_vectors(&read(&args.input)?).map_err(usage)?.to_ov_sets().map_err(usage)?;
            if args.pad {
                sets = pad_ov_for_divisibility(&sets);
            }
            let (inst, cert) = ov4_to_bichromatic_median(&sets).map_err(usage)?;
            (ReducedInstance::Bi(inst), CertificateBody::Ov4Bimedian(cert))
        }
        ReduceKind::BiMonomedian => {
            let ReducedInstance::Bi(b) = load_instance(&args.input)? else {
                return Err(usage("bi-monomedian needs a bi instance"));
            };
            let path = args.cert.clone().unwrap_or_else(|| cert_path(&args.input));
            let base = match path.exists().then(|| load_certificate(&path)).transpose()? {
                Some(Certificate { body: CertificateBody::Ov4Bimedian(c), .. }) => Some(c),
                Some(other) => return Err(usage(format!("expected an ov4-bimedian certificate, found {}", other.kind()))),
                None => None,
            };
            let (inst, cert) = bichromatic_to_monochromatic_median(&b, base.as_ref()).map_err(usage)?;
            (ReducedInstance::Mono(inst), CertificateBody::BiMonomedian(cert))
        }
    };
    let cert = Certificate::with_oracle(body);
    let side = save(&args.output, &inst, &cert)?;
    let (count, len) = match &inst {
        ReducedInstance::Mono(m) => (m.len(), m.length()),
        ReducedInstance::Bi(b) => (b.x.len() + b.y.len(), b.length()),
    };
    Ok(format!(
        "wrote {} ({count} permutations of length {len})\nwrote {}\n",
        args.output.display(),
        side.display()
    ))
}

/// Exit 0 with one `pass` line per check, 1 with a `FAIL <tag>` line, 2 when
/// either file cannot be read or parsed.
pub fn cmd_verify(instance: &Path, cert: Option<&Path>) -> Result<String, CliError> {
    let inst = load_instance(instance)?;
    let cert_file = cert.map(Path::to_path_buf).unwrap_or_else(|| cert_path(instance));
    let cert = load_certificate(&cert_file)?;
    match verify(&inst, &cert) {
        Ok(tags) => {
            let mut out: String = tags.iter().map(|t| format!("pass {t}\n")).collect();
            out.push_str("PASS\n");
            Ok(out)
        }
        Err(f) => Err(CliError::Failed(format!("FAIL {f}\n"))),
    }
}

/// `n` uniformly random permutations of `1..=l`, deterministic in `seed`.
pub fn bench_instance(n: usize, l: usize, seed: u64) -> UlamInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms = (0..n)
        .map(|_| {
            let mut v: Vec<u32> = (1..=l as u32).collect();
            v.shuffle(&mut rng);
            Perm::new(v).expect("shuffled identity")
        })
        .collect();
    UlamInstance::new(perms, 0).expect("common alphabet")
}

pub fn cmd_bench(args: &BenchArgs) -> Result<String, CliError> {
    if args.n == 0 || args.l == 0 || (args.n as u64).saturating_mul(args.l as u64) > BENCH_SIZE_LIMIT {
        return Err(usage(format!("need 0 < n * L <= {BENCH_SIZE_LIMIT}")));
    }
    let inst = bench_instance(args.n, args.l, args.seed);
    if let Some(path) = &args.instance_out {
        write(path, &serialize_instance(&ReducedInstance::Mono(inst.clone())))?;
    }
    let objective: Objective = args.objective.into();
    let name = match objective {
        Objective::Median => "median",
        Objective::Center => "center",
    };
    let mut out = String::from("candidate,n,L,objective,cost,micros\n");
    for (i, p) in inst.perms().iter().enumerate() {
        let start = Instant::now();
        let index = PositionIndex::new(p);
        let dists = inst.perms().iter().map(|q| index.ulam_to(q).expect("common alphabet") as u64);
        let cost = match objective {
            Objective::Median => dists.sum::<u64>(),
            Objective::Center => dists.max().unwrap_or(0),
        };
        let micros = start.elapsed().as_micros();
        writeln!(out, "{i},{},{},{name},{cost},{micros}", args.n, args.l).unwrap();
    }
    Ok(out)
}
