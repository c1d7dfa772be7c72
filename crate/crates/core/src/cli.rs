//! The `ksys` command-line tool.
//!
//! Exit codes: 0 success or verified, 1 refuted or negative answer,
//! 2 invalid input, 3 search budget or cap exceeded. Data goes to stdout,
//! one-line diagnostics to stderr.

use std::io::Write;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::Value;

use crate::certificate::{
    facets_from_2faces, verify_aof_certificate, verify_face_certificate, verify_larger_system,
    verify_smaller_h2, Verdict,
};
use crate::error::Error;
use crate::format::{
    certificate_from_value, graph_from_any, instance_from_value, instance_to_value,
    orientation_for, orientation_to_value, parse_value, set_system_from_value, set_system_to_value,
    to_canonical_string, Certificate,
};
use crate::graph::{hk_sum, indegree_histogram, HVector, HkMode, PolytopeGraph};
use crate::ksystem::validate_k_system;
use crate::oracle::{
    default_weights, faces_from_incidence, generate, geometric_aof, is_aof_oracle, product,
    truncate_vertex, Family, Instance,
};
use crate::search::{
    collect_acyclic_orientations, for_each_k_system, max_k_system, minimize_hk_jobs,
    search_k_sink_counterexample, SearchCaps, DEFAULT_BUDGET, DEFAULT_CANDIDATE_CAP,
    DEFAULT_COUNT_CAP,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

const SCHEMAS: &str = "\
File formats (UTF-8 JSON, sorted keys, sorted vertex lists):
  graph        {\"d\":D,\"edges\":[[u,v],...],\"n\":N}          u<v, lexicographic
  orientation  {\"graph_fingerprint\":HEX,\"heads\":[0|1,...]}  heads[e]=1: head of edge e=(u,v) is v
  set system   {\"graph_fingerprint\":HEX,\"k\":K,\"sets\":[[v,...],...]}
  certificate  {\"k\":K,\"orientation\":{..},\"sets\":[[..],..],\"type\":\"faces\"|\"aof\"}  (no k for aof)
  instance     {\"coords\":[[[\"num\",\"den\"],..],..]|null,\"d\":D,\"facets\":[[..],..],\"graph\":{..},\"name\":S}
  h-vector     space-separated integers h_0 ... h_d
The graph fingerprint is the SHA-256 of the compact graph document.
Wherever a graph is expected, an instance file is accepted too.
Exit codes: 0 ok/verified, 1 refuted/negative, 2 invalid input, 3 budget exceeded.";

#[derive(Parser, Debug)]
#[command(name = "ksys", version, about = "k-systems and AOF certificates for graphs of simple polytopes", after_help = SCHEMAS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CertKind {
    Faces,
    Aof,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance: simplex D | cube D | fig1 | prism | product A B | truncate A V,
    /// or a single spec such as "product(cube:1,simplex:2)".
    Gen {
        family: String,
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Vertex sets of the k-faces of an instance.
    Faces {
        instance: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// In-degree histogram of an orientation.
    Hvector {
        graph: PathBuf,
        orientation: PathBuf,
    },
    /// H^k (or H with -k all) of an h-vector file.
    Hk {
        hvector: PathBuf,
        #[arg(short)]
        k: String,
    },
    /// Check a set system against the k-system definition.
    ValidateKsystem { graph: PathBuf, sets: PathBuf },
    /// Verify a face or AOF certificate.
    Certify {
        kind: CertKind,
        graph: PathBuf,
        certificate: PathBuf,
    },
    /// Verify a no-certificate: a larger k-system (faces) or an orientation
    /// with smaller H^2 (aof).
    Refute {
        kind: CertKind,
        graph: PathBuf,
        current: PathBuf,
        proposed: PathBuf,
    },
    /// Reconstruct the facets from the 2-faces.
    #[command(name = "facets-from-2faces")]
    FacetsFrom2Faces { graph: PathBuf, two_faces: PathBuf },
    /// Stream every acyclic orientation, one document per line.
    EnumOrient {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Minimum of H^k over acyclic orientations: prints the value, then a witness.
    MinHk {
        graph: PathBuf,
        #[arg(short)]
        k: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Stream k-systems, one document per line.
    EnumKsystems {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
        candidate_cap: usize,
        #[arg(long, default_value_t = DEFAULT_COUNT_CAP)]
        count_cap: usize,
    },
    /// A k-system of maximum cardinality.
    MaxKsystem {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
        candidate_cap: usize,
        #[arg(long, default_value_t = DEFAULT_COUNT_CAP)]
        count_cap: usize,
    },
    /// Is the orientation an AOF-orientation? Exit 0 yes, 1 no.
    IsAof {
        instance: PathBuf,
        orientation: PathBuf,
    },
    /// Orientation induced by a linear function; weights like 1,2,4 or 1/2,3.
    AofGeometric {
        instance: PathBuf,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<String>>,
    },
    /// Search an acyclic orientation with one sink per k-face that is not an AOF.
    SearchKSinkCounterexample {
        instance: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

/// Failure of a subcommand, mapped to an exit code.
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

fn read_value(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_value(&text)?)
}

fn read_graph(path: &Path) -> Result<PolytopeGraph, Failure> {
    Ok(graph_from_any(&read_value(path)?)?)
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    Ok(instance_from_value(&read_value(path)?)?)
}

fn read_sets(g: &PolytopeGraph, path: &Path) -> Result<crate::ksystem::SetSystem, Failure> {
    let s = set_system_from_value(&read_value(path)?)?;
    if s.graph_fingerprint() != g.fingerprint() {
        return Err(Error::FingerprintMismatch {
            expected: g.fingerprint(),
            found: s.graph_fingerprint(),
        }
        .into());
    }
    Ok(s)
}

fn parse_mode(k: &str) -> Result<HkMode, Failure> {
    Ok(k.parse::<HkMode>()?)
}

fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    let bad = || Failure::Lib(Error::Parse(format!("bad weight {s:?}")));
    let (num, den) = match s.trim().split_once('/') {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => (s.trim().parse().map_err(|_| bad())?, 1.into()),
    };
    if den == 0.into() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// A family operand: an instance file if the path exists, else a spec.
fn operand(s: &str) -> Result<Instance, Failure> {
    if Path::new(s).is_file() {
        read_instance(Path::new(s))
    } else {
        Ok(generate(&s.parse::<Family>()?)?)
    }
}

fn param<T: std::str::FromStr>(params: &[String], i: usize, what: &str) -> Result<T, Failure> {
    params
        .get(i)
        .and_then(|p| p.parse().ok())
        .ok_or_else(|| Failure::Lib(Error::InvalidParams(format!("missing or bad {what}"))))
}

fn gen_instance(family: &str, params: &[String]) -> Result<Instance, Failure> {
    Ok(match family {
        "simplex" => generate(&Family::Simplex(param(params, 0, "dimension")?))?,
        "cube" => generate(&Family::Cube(param(params, 0, "dimension")?))?,
        "product" => {
            let a: String = param(params, 0, "first factor")?;
            let b: String = param(params, 1, "second factor")?;
            product(&operand(&a)?, &operand(&b)?)?
        }
        "truncate" => {
            let a: String = param(params, 0, "instance")?;
            truncate_vertex(&operand(&a)?, param(params, 1, "vertex")?)?
        }
        spec => {
            if !params.is_empty() {
                return Err(
                    Error::InvalidParams(format!("unexpected parameters for {spec}")).into(),
                );
            }
            generate(&spec.parse::<Family>()?)?
        }
    })
}

fn emit(out: &mut dyn Write, v: &Value) -> std::io::Result<()> {
    writeln!(out, "{}", to_canonical_string(v))
}

fn report_verdict(out: &mut dyn Write, v: &Verdict) -> CmdResult {
    writeln!(out, "{v}")?;
    Ok(if v.is_verified() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn execute(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Gen {
            family,
            params,
            output,
        } => {
            let inst = gen_instance(&family, &params)?;
            let text = to_canonical_string(&instance_to_value(&inst));
            match output {
                Some(path) => std::fs::write(&path, format!("{text}\n"))?,
                None => writeln!(out, "{text}")?,
            }
            Ok(EXIT_OK)
        }
        Command::Faces { instance, k } => {
            let inst = read_instance(&instance)?;
            emit(out, &set_system_to_value(&faces_from_incidence(&inst, k)?))?;
            Ok(EXIT_OK)
        }
        Command::Hvector { graph, orientation } => {
            let g = read_graph(&graph)?;
            let o = orientation_for(&g, &read_value(&orientation)?)?;
            writeln!(out, "{}", indegree_histogram(&g, &o)?)?;
            Ok(EXIT_OK)
        }
        Command::Hk { hvector, k } => {
            let text = std::fs::read_to_string(&hvector)?;
            let h: HVector = match parse_value(&text) {
                Ok(Value::Array(items)) => HVector(
                    items
                        .iter()
                        .map(|x| {
                            x.as_u64().ok_or_else(|| {
                                Error::Parse("h-vector entries must be integers".into())
                            })
                        })
                        .collect::<Result<_, _>>()?,
                ),
                _ => text.parse()?,
            };
            writeln!(out, "{}", hk_sum(&h, parse_mode(&k)?)?)?;
            Ok(EXIT_OK)
        }
        Command::ValidateKsystem { graph, sets } => {
            let g = read_graph(&graph)?;
            let report = validate_k_system(&g, &read_sets(&g, &sets)?)?;
            write!(out, "{report}")?;
            Ok(if report.is_valid() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Certify {
            kind,
            graph,
            certificate,
        } => {
            let g = read_graph(&graph)?;
            let verdict = match (kind, certificate_from_value(&read_value(&certificate)?)?) {
                (CertKind::Faces, Certificate::Faces(c)) => verify_face_certificate(&g, &c)?,
                (CertKind::Aof, Certificate::Aof(c)) => verify_aof_certificate(&g, &c)?,
                _ => {
                    return Err(Error::Parse(
                        "certificate type does not match the subcommand".into(),
                    )
                    .into())
                }
            };
            report_verdict(out, &verdict)
        }
        Command::Refute {
            kind,
            graph,
            current,
            proposed,
        } => {
            let g = read_graph(&graph)?;
            let verdict = match kind {
                CertKind::Faces => {
                    verify_larger_system(&g, &read_sets(&g, &current)?, &read_sets(&g, &proposed)?)?
                }
                CertKind::Aof => {
                    let o = orientation_for(&g, &read_value(&current)?)?;
                    let o2 = orientation_for(&g, &read_value(&proposed)?)?;
                    verify_smaller_h2(&g, &o, &o2)?
                }
            };
            report_verdict(out, &verdict)
        }
        Command::FacetsFrom2Faces { graph, two_faces } => {
            let g = read_graph(&graph)?;
            let facets = facets_from_2faces(&g, &read_sets(&g, &two_faces)?)?;
            emit(out, &set_system_to_value(&facets))?;
            Ok(EXIT_OK)
        }
        Command::EnumOrient {
            graph,
            budget,
            jobs,
        } => {
            let g = read_graph(&graph)?;
            for o in collect_acyclic_orientations(&g, budget, jobs)? {
                emit(out, &orientation_to_value(&o))?;
            }
            Ok(EXIT_OK)
        }
        Command::MinHk {
            graph,
            k,
            budget,
            jobs,
        } => {
            let g = read_graph(&graph)?;
            let (value, witness) = minimize_hk_jobs(&g, parse_mode(&k)?, budget, jobs)?;
            writeln!(out, "{value}")?;
            emit(out, &orientation_to_value(&witness))?;
            Ok(EXIT_OK)
        }
        Command::EnumKsystems {
            graph,
            k,
            candidate_cap,
            count_cap,
        } => {
            let g = read_graph(&graph)?;
            let caps = SearchCaps {
                candidate_cap,
                count_cap,
            };
            let mut io_err = None;
            let found =
                for_each_k_system(&g, k, caps, |s| match emit(out, &set_system_to_value(&s)) {
                    Ok(()) => ControlFlow::Continue(()),
                    Err(e) => {
                        io_err = Some(e);
                        ControlFlow::Break(())
                    }
                })?;
            if let Some(e) = io_err {
                return Err(e.into());
            }
            Ok(if found > 0 { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::MaxKsystem {
            graph,
            k,
            candidate_cap,
            count_cap,
        } => {
            let g = read_graph(&graph)?;
            let caps = SearchCaps {
                candidate_cap,
                count_cap,
            };
            match max_k_system(&g, k, caps)? {
                Some(s) => {
                    emit(out, &set_system_to_value(&s))?;
                    Ok(EXIT_OK)
                }
                None => Ok(EXIT_NEGATIVE),
            }
        }
        Command::IsAof {
            instance,
            orientation,
        } => {
            let inst = read_instance(&instance)?;
            let o = orientation_for(&inst.graph, &read_value(&orientation)?)?;
            let yes = is_aof_oracle(&inst, &o)?;
            writeln!(out, "{yes}")?;
            Ok(if yes { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::AofGeometric { instance, weights } => {
            let inst = read_instance(&instance)?;
            let w = match weights {
                Some(ws) => ws
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>, _>>()?,
                None => default_weights(inst.dim()),
            };
            emit(out, &orientation_to_value(&geometric_aof(&inst, &w)?))?;
            Ok(EXIT_OK)
        }
        Command::SearchKSinkCounterexample {
            instance,
            k,
            budget,
        } => {
            let inst = read_instance(&instance)?;
            match search_k_sink_counterexample(&inst, k, budget)? {
                Some(o) => {
                    emit(out, &orientation_to_value(&o))?;
                    Ok(EXIT_OK)
                }
                None => Ok(EXIT_NEGATIVE),
            }
        }
    }
}

/// Runs the tool on `argv` (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BudgetExceeded { .. } | Error::CandidateCapExceeded(_) => EXIT_BUDGET,
                _ => EXIT_INVALID,
            }
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
    }
}
