//! Command-line front end. [`run`] is the whole program; the binary only
//! forwards its arguments and exit code.
//!
//! Exit codes: 0 success, 1 negative answer (inequivalent codes, invalid
//! code, failed round trip), 2 undecided within the search budget, 3 the
//! input graph is not a valid minimum distance graph, 4 malformed input or
//! usage error, 5 I/O failure.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::automorphism::roundtrip_report;
use crate::codefile::{format_code, format_mapping, parse_code};
use crate::distance::recover_all_distances;
use crate::equivalence::{find_equivalence, EquivOptions, Status, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::generators::{gen_extended, gen_family, Family};
use crate::graph::{build_mdg, format_dimacs, parse_dimacs, shuffle, MdGraph};
use crate::reconstruct::{reconstruct_extended, reconstruct_perfect};
use crate::word::{validate_extended_perfect, validate_perfect, Code, Word};

/// Environment variable holding the default worker thread count.
pub const THREADS_ENV: &str = "MDG_RECONSTRUCT_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_INVALID_GRAPH: i32 = 3;
pub const EXIT_FORMAT: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "mdg-reconstruct", version, about = "Reconstruct perfect codes from minimum distance graphs")]
struct Cli {
    /// Worker threads (default: $MDG_RECONSTRUCT_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a Hamming or Vasil'ev code.
    Gen(GenArgs),
    /// Build the minimum distance graph of a code.
    Mdg(MdgArgs),
    /// Recover all pairwise distances from an extended code's graph.
    Distances(DistancesArgs),
    /// Reconstruct a code from its minimum distance graph.
    Reconstruct(ReconstructArgs),
    /// Decide whether two codes are equivalent.
    Equiv(EquivArgs),
    /// Automorphism transfer checks.
    Aut {
        #[command(subcommand)]
        cmd: AutCommand,
    },
    /// Check that a code is perfect or extended perfect.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyName {
    Hamming,
    Vasilev,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    /// Length is 2^m - 1 (2^m with --extended).
    #[arg(long)]
    m: u32,
    /// Seed choosing the Vasil'ev function; omitted means f = 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Append a parity coordinate.
    #[arg(long)]
    extended: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MdgArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Relabel the vertices by a seeded random permutation.
    #[arg(long)]
    shuffle_seed: Option<u64>,
    /// Write the shuffle as lines `<old> <new>` (1-based).
    #[arg(long, requires = "shuffle_seed")]
    perm_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DistancesArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Extended,
    Perfect,
}

#[derive(Args, Debug)]
struct ReconstructArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Vertex (1-based) labelled with the zero word.
    #[arg(long, default_value_t = 1)]
    base_vertex: usize,
    /// Write lines `<vertex> <word>` (1-based vertex ids).
    #[arg(long)]
    mapping: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EquivArgs {
    #[arg(short = 'a', long = "code-a")]
    a: PathBuf,
    #[arg(short = 'b', long = "code-b")]
    b: PathBuf,
    /// Word of the second code tried first as translation.
    #[arg(long)]
    hint_translation: Option<String>,
    /// Search-node limit before answering undecided.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Subcommand, Debug)]
enum AutCommand {
    /// Round-trip sampled automorphisms through the graph and back.
    Roundtrip(RoundtripArgs),
}

#[derive(Args, Debug)]
struct RoundtripArgs {
    #[arg(short, long)]
    code: PathBuf,
    /// MDG of the code with vertex i carrying word i.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Required kind; defaults to accepting either.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Also require this graph to be the code's MDG.
    #[arg(long)]
    graph: Option<PathBuf>,
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidGraph(_) => EXIT_INVALID_GRAPH,
        Error::NotAutomorphism(_) => EXIT_NEGATIVE,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_FORMAT,
    }
}

/// Runs the program on `argv` (including the program name), writing
/// reports to `out` and diagnostics to `err`.
pub fn run_with<I, S>(argv: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FORMAT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let threads = cli
        .threads
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return EXIT_IO;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| dispatch(cli.cmd, &mut buf));
    if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_IO;
    }
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn read_code(path: &Path) -> Result<Code> {
    parse_code(&read_text(path)?).map_err(|e| e.with_path(&path.display().to_string()))
}

fn read_graph(path: &Path) -> Result<MdGraph> {
    parse_dimacs(&read_text(path)?).map_err(|e| e.with_path(&path.display().to_string()))
}

/// Writes to a temporary file next to `path` and renames it into place.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(path: Option<&Path>, text: &str, out: &mut Vec<u8>) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, text),
        None => {
            out.extend_from_slice(text.as_bytes());
            Ok(())
        }
    }
}

fn dispatch(cmd: Command, out: &mut Vec<u8>) -> Result<i32> {
    match cmd {
        Command::Gen(a) => {
            let family = match a.family {
                FamilyName::Hamming => {
                    if a.seed.is_some() {
                        return Err(Error::InvalidParameter("--seed applies to vasilev only".into()));
                    }
                    Family::Hamming { m: a.m }
                }
                FamilyName::Vasilev => Family::Vasilev { m: a.m, seed: a.seed },
            };
            let code = if a.extended { gen_extended(family)? } else { gen_family(family)? };
            emit(a.output.as_deref(), &format_code(&code), out)?;
            Ok(EXIT_OK)
        }
        Command::Mdg(a) => {
            let code = read_code(&a.input)?;
            let mut g = build_mdg(&code)?;
            g.set_provenance(vec![format!(
                "minimum distance graph of {} ({} words, length {})",
                a.input.display(),
                code.len(),
                code.length()
            )]);
            if let Some(seed) = a.shuffle_seed {
                let (h, perm) = shuffle(&g, seed);
                g = h;
                if let Some(p) = &a.perm_out {
                    let mut text = String::new();
                    for (old, new) in perm.iter().enumerate() {
                        text.push_str(&format!("{} {}\n", old + 1, new + 1));
                    }
                    write_atomic(p, &text)?;
                }
            }
            emit(a.output.as_deref(), &format_dimacs(&g), out)?;
            Ok(EXIT_OK)
        }
        Command::Distances(a) => {
            let g = read_graph(&a.input)?;
            let d = recover_all_distances(&g)?;
            let mut text = String::new();
            for (u, v, dist) in d.pairs() {
                let dist = dist.ok_or_else(|| Error::graph(format!("pair {} {} unresolved", u + 1, v + 1)))?;
                text.push_str(&format!("{} {} {dist}\n", u + 1, v + 1));
            }
            emit(a.output.as_deref(), &text, out)?;
            Ok(EXIT_OK)
        }
        Command::Reconstruct(a) => {
            let g = read_graph(&a.input)?;
            if a.base_vertex == 0 || a.base_vertex > g.vcount() {
                return Err(Error::InvalidParameter(format!(
                    "base vertex {} outside 1..={}",
                    a.base_vertex,
                    g.vcount()
                )));
            }
            let base = a.base_vertex - 1;
            let code = match a.mode {
                Mode::Extended => reconstruct_extended(&g, base)?.code,
                Mode::Perfect => reconstruct_perfect(&g, base)?.code,
            };
            if let Some(p) = &a.mapping {
                write_atomic(p, &format_mapping(code.words()))?;
            }
            emit(a.output.as_deref(), &format_code(&code), out)?;
            Ok(EXIT_OK)
        }
        Command::Equiv(a) => {
            let c1 = read_code(&a.a)?;
            let c2 = read_code(&a.b)?;
            let hint = a.hint_translation.as_deref().map(Word::parse).transpose()?;
            let r = find_equivalence(
                &c1,
                &c2,
                &EquivOptions {
                    hint_translation: hint,
                    budget: a.budget,
                },
            )?;
            let cert = &r.certificate;
            let mut text = String::new();
            let status = match r.status {
                Status::Equivalent => "equivalent",
                Status::Inequivalent => "inequivalent",
                Status::Undecided => "undecided",
            };
            text.push_str(&format!("status {status}\n"));
            text.push_str(&format!("ranks {} {}\n", cert.ranks.0, cert.ranks.1));
            if let Some(reason) = &cert.reason {
                text.push_str(&format!("reason {reason}\n"));
            }
            text.push_str(&format!("translations {}\nnodes {}\n", cert.translations_tried, cert.nodes));
            if let Some(w) = &r.witness {
                let perm: Vec<String> = w.perm().iter().map(|p| p.to_string()).collect();
                text.push_str(&format!("perm {}\ntranslation {}\n", perm.join(" "), w.trans()));
            }
            out.extend_from_slice(text.as_bytes());
            Ok(match r.status {
                Status::Equivalent => EXIT_OK,
                Status::Inequivalent => EXIT_NEGATIVE,
                Status::Undecided => EXIT_UNDECIDED,
            })
        }
        Command::Aut {
            cmd: AutCommand::Roundtrip(a),
        } => {
            let code = read_code(&a.code)?;
            let g = read_graph(&a.graph)?;
            let r = roundtrip_report(&code, &g, a.samples, a.seed)?;
            let line = |ok: bool, what: &str, got: usize, of: usize| {
                format!("{} {what} {got}/{of}\n", if ok { "PASS" } else { "FAIL" })
            };
            let mut text = String::new();
            text.push_str(&line(r.code_roundtrips == r.samples, "code->graph->code", r.code_roundtrips, r.samples));
            text.push_str(&line(r.graph_roundtrips == r.samples, "graph->code->graph", r.graph_roundtrips, r.samples));
            text.push_str(&line(r.code_homomorphism == r.pairs, "code->graph composition", r.code_homomorphism, r.pairs));
            text.push_str(&line(r.graph_homomorphism == r.pairs, "graph->code composition", r.graph_homomorphism, r.pairs));
            text.push_str(&line(r.injective == r.distinct_pairs, "injectivity", r.injective, r.distinct_pairs));
            for f in &r.failures {
                text.push_str(&format!("failure {f}\n"));
            }
            text.push_str(if r.ok() { "result PASS\n" } else { "result FAIL\n" });
            out.extend_from_slice(text.as_bytes());
            Ok(if r.ok() { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Validate(a) => {
            let code = read_code(&a.input)?;
            let perfect = validate_perfect(&code);
            let extended = validate_extended_perfect(&code);
            let verdict = match a.mode {
                Some(Mode::Perfect) => perfect.clone(),
                Some(Mode::Extended) => extended.clone(),
                None if perfect.ok => perfect.clone(),
                None => extended.clone(),
            };
            let mut text = String::new();
            if verdict.ok {
                let kind = if perfect.ok { "perfect" } else { "extended perfect" };
                text.push_str(&format!("valid {kind} length {} words {}\n", code.length(), code.len()));
            } else {
                text.push_str(&format!("invalid {}\n", verdict.reason.clone().unwrap_or_default()));
            }
            let mut ok = verdict.ok;
            if let Some(p) = &a.graph {
                let g = read_graph(p)?;
                if build_mdg(&code)? == g {
                    text.push_str("graph matches\n");
                } else {
                    text.push_str("graph differs from the code's minimum distance graph\n");
                    ok = false;
                }
            }
            out.extend_from_slice(text.as_bytes());
            Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}
