use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use torquiv::classify::{
    classify_2d, enumerate_affine_rdd_with, enumerate_maximal_skeletons, enumerate_skeletons_with, normal_fan_2d,
};
use torquiv::error::Error;
use torquiv::ideal::{
    affine_relation_degree_with, bipartition, certify_degree_bound, minimal_generators, osm_certify_degree3_with,
    osm_lattice_points_with, GradedMonoid, GradedSemigroup, OSM_HORIZON,
};
use torquiv::polytope::{check_normality_with, lattice_points_with, vertices};
use torquiv::quiver::{flow_to_json, parse_quiver_json, quiver_to_json, IntFlow, Quiver, Weight};
use torquiv::reductions::{
    compactification_bound, double_quiver, flows_to_json, pairs_to_json, prime_decompose, skeleton, tighten,
    vertex_localization,
};
use torquiv::{corpus, Limits, DEFAULT_MAX_NODES};

#[derive(Parser)]
#[command(name = "torquiv", version, about = "Exact computations with quiver polyhedra and their toric ideals")]
struct Cli {
    /// Output format; csv is available for commands that print flows.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Cap on backtracking nodes per enumeration.
    #[arg(long, default_value_t = DEFAULT_MAX_NODES, global = true)]
    max_nodes: u64,

    /// Worker threads for parallel shards.
    #[arg(long, env = "TORQUIV_JOBS", global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice points of the k-th dilate.
    LatticePoints {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        degree: u32,
    },
    /// Vertices of the polytope, via θ-stable spanning forests.
    Vertices { file: PathBuf },
    /// Decomposes every degree-k lattice point into degree-1 points.
    Normality {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// Removes and contracts arrows until the pair is tight.
    Tighten {
        file: PathBuf,
        /// Write the reduction trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Splits the pair into prime factors.
    Decompose { file: PathBuf },
    /// Skeleton multigraph of the quiver.
    Skeleton { file: PathBuf },
    /// Double quiver of a pair; d defaults to Σ|θ| + 1.
    Double {
        file: PathBuf,
        #[arg(long)]
        d: Option<i64>,
    },
    /// Affine chart at the i-th vertex (in sorted order).
    Localize {
        file: PathBuf,
        #[arg(long)]
        vertex_index: usize,
    },
    /// Minimal binomial generators of the toric ideal up to a degree.
    IdealGens {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// Certifies generation in degree ≤ bound by checking divisor graphs.
    Certify {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        bound: u32,
        /// Highest degree examined; defaults to max(dim + 1, bound + 1).
        #[arg(long)]
        horizon: Option<u32>,
    },
    /// Relation degree of the circulation monoid via primitive cycles.
    AffineDegree { file: PathBuf },
    /// One-sided matchings of a bipartite quiver; negative weight marks
    /// isolated sources.
    Osm {
        file: PathBuf,
        #[arg(long)]
        certify: bool,
        #[arg(long, default_value_t = OSM_HORIZON)]
        horizon: u32,
    },
    /// Prime skeletons with Euler characteristic d.
    Skeletons {
        #[arg(long)]
        d: usize,
        /// Only those not obtained by contracting an edge of another.
        #[arg(long)]
        maximal: bool,
    },
    /// Prime zero-weight tight quivers with Euler characteristic d.
    AffineList {
        #[arg(long)]
        d: usize,
    },
    /// Names the toric surface of a two-dimensional pair.
    Classify2d { file: PathBuf },
    /// Rewrites the example corpus.
    CorpusRegen {
        #[arg(long, default_value = "corpus")]
        out: PathBuf,
    },
}

enum Failure {
    Domain(Error),
    Malformed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_malformed_input() {
            Failure::Malformed(e.to_string())
        } else {
            Failure::Domain(e)
        }
    }
}

type Outcome = Result<Output, Failure>;

enum Output {
    Json(Value),
    Table(Quiver, Vec<IntFlow>, Value),
}

struct Input {
    quiver: Quiver,
    weight: Weight,
    digest: String,
}

fn read_input(path: &Path) -> Result<Input, Failure> {
    let mut bytes = Vec::new();
    let read = if path == Path::new("-") {
        io::stdin().read_to_end(&mut bytes).map(|_| ())
    } else {
        fs::read(path).map(|b| bytes = b)
    };
    read.map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes).map_err(|_| Failure::Malformed("input is not UTF-8".into()))?;
    let (quiver, weight) = parse_quiver_json(&text)?;
    let weight = weight.unwrap_or_else(|| vec![0; quiver.vertex_count()]);
    let digest = format!("sha256:{:x}", Sha256::digest(text.as_bytes()));
    Ok(Input { quiver, weight, digest })
}

fn certificate(command: &str, input: &Input, parameters: Value, verdict: bool, witnesses: Value) -> Value {
    json!({
        "command": command,
        "input_digest": input.digest,
        "parameters": parameters,
        "verdict": verdict,
        "witnesses": witnesses,
        "tool_version": env!("CARGO_PKG_VERSION"),
    })
}

fn generator_table(q: &Quiver, gens: &[IntFlow]) -> Value {
    Value::Array(gens.iter().enumerate().map(|(i, g)| json!({ "index": i, "flow": flow_to_json(q, g) })).collect())
}

fn run(cmd: Command, limits: Limits) -> Outcome {
    let out = match cmd {
        Command::LatticePoints { file, degree } => {
            let i = read_input(&file)?;
            let pts = lattice_points_with(&i.quiver, &i.weight, degree, &limits)?;
            let json = json!({ "degree": degree, "count": pts.len(), "points": flows_to_json(&i.quiver, &pts) });
            Output::Table(i.quiver, pts, json)
        }
        Command::Vertices { file } => {
            let i = read_input(&file)?;
            let vs = vertices(&i.quiver, &i.weight)?;
            let json = json!({ "count": vs.len(), "vertices": flows_to_json(&i.quiver, &vs) });
            Output::Table(i.quiver, vs, json)
        }
        Command::Normality { file, k } => {
            let i = read_input(&file)?;
            let r = check_normality_with(&i.quiver, &i.weight, k, &limits)?;
            let witnesses = json!({
                "generators": generator_table(&i.quiver, &r.generators),
                "decompositions": r.decompositions.iter().map(|(p, parts)| json!({
                    "point": flow_to_json(&i.quiver, p),
                    "parts": parts,
                })).collect::<Vec<_>>(),
                "counterexample": r.counterexample.as_ref().map(|c| flow_to_json(&i.quiver, c)),
            });
            Output::Json(certificate("normality", &i, json!({ "k": k, "max_nodes": limits.max_nodes }), r.holds(), witnesses))
        }
        Command::Tighten { file, trace } => {
            let i = read_input(&file)?;
            let (q, w, t) = tighten(&i.quiver, &i.weight)?;
            if let Some(path) = trace {
                write_json(&path, &t.to_json())?;
            }
            Output::Json(quiver_to_json(&q, Some(&w)))
        }
        Command::Decompose { file } => {
            let i = read_input(&file)?;
            Output::Json(pairs_to_json(&prime_decompose(&i.quiver, &i.weight)?))
        }
        Command::Skeleton { file } => {
            let i = read_input(&file)?;
            Output::Json(skeleton(&i.quiver)?.to_json())
        }
        Command::Double { file, d } => {
            let i = read_input(&file)?;
            let d = d.unwrap_or_else(|| compactification_bound(&i.weight));
            let (q, w) = double_quiver(&i.quiver, &i.weight, d);
            Output::Json(quiver_to_json(&q, Some(&w)))
        }
        Command::Localize { file, vertex_index } => {
            let i = read_input(&file)?;
            let vs = vertices(&i.quiver, &i.weight)?;
            let m = vs.get(vertex_index).ok_or_else(|| {
                Failure::Malformed(format!("vertex index {vertex_index} out of range; the polytope has {} vertices", vs.len()))
            })?;
            let q = vertex_localization(&i.quiver, &i.weight, m)?;
            Output::Json(quiver_to_json(&q, Some(&vec![0; q.vertex_count()])))
        }
        Command::IdealGens { file, max_degree } => {
            if max_degree < 2 {
                return Err(Failure::Malformed("--max-degree must be at least 2".into()));
            }
            let i = read_input(&file)?;
            let s = GradedSemigroup::with_limits(i.quiver.clone(), i.weight.clone(), limits)?;
            let gens = minimal_generators(&s, max_degree)?;
            Output::Json(json!({
                "max_degree": max_degree,
                "generators": generator_table(&i.quiver, s.generators()),
                "binomials": gens.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
            }))
        }
        Command::Certify { file, bound, horizon } => {
            let i = read_input(&file)?;
            let s = GradedSemigroup::with_limits(i.quiver.clone(), i.weight.clone(), limits)?;
            let horizon = horizon.unwrap_or_else(|| s.default_horizon(bound));
            let c = certify_degree_bound(&s, bound, horizon)?;
            let mut witnesses = c.to_json();
            witnesses["generators"] = generator_table(&i.quiver, s.generators());
            let params = json!({ "bound": bound, "horizon": horizon, "max_nodes": limits.max_nodes });
            Output::Json(certificate("certify", &i, params, c.verdict, witnesses))
        }
        Command::AffineDegree { file } => {
            let i = read_input(&file)?;
            Output::Json(json!({ "degree": affine_relation_degree_with(&i.quiver, &limits)? }))
        }
        Command::Osm { file, certify, horizon } => {
            let i = read_input(&file)?;
            let bip = bipartition(&i.quiver, Some(&i.weight))?;
            if certify {
                let c = osm_certify_degree3_with(&i.quiver, &bip, horizon, &limits)?;
                let witnesses = json!({ "matchings": c.osm.to_json(), "completion": c.completed.to_json() });
                let params = json!({ "bound": 3, "horizon": horizon, "max_nodes": limits.max_nodes });
                Output::Json(certificate("osm", &i, params, c.verdict(), witnesses))
            } else {
                let ms = osm_lattice_points_with(&i.quiver, &bip, &limits)?;
                let json = json!({ "count": ms.len(), "matchings": flows_to_json(&i.quiver, &ms) });
                Output::Table(i.quiver, ms, json)
            }
        }
        Command::Skeletons { d, maximal } => {
            let gs = if maximal { enumerate_maximal_skeletons(d)? } else { enumerate_skeletons_with(d, &limits)? };
            Output::Json(json!({
                "d": d,
                "maximal": maximal,
                "count": gs.len(),
                "graphs": gs.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
            }))
        }
        Command::AffineList { d } => {
            let qs = enumerate_affine_rdd_with(d, &limits)?;
            Output::Json(json!({
                "d": d,
                "count": qs.len(),
                "quivers": qs.iter().map(|q| quiver_to_json(q, Some(&vec![0; q.vertex_count()]))).collect::<Vec<_>>(),
            }))
        }
        Command::Classify2d { file } => {
            let i = read_input(&file)?;
            let surface = classify_2d(&i.quiver, &i.weight)?;
            let fan = normal_fan_2d(&i.quiver, &i.weight)?;
            Output::Json(json!({ "surface": surface.name(), "rays": fan.rays }))
        }
        Command::CorpusRegen { out } => {
            fs::create_dir_all(&out).map_err(|e| Failure::Malformed(format!("cannot create {}: {e}", out.display())))?;
            let files = corpus::regenerate();
            for (name, contents) in &files {
                let path = out.join(name);
                fs::write(&path, contents)
                    .map_err(|e| Failure::Malformed(format!("cannot write {}: {e}", path.display())))?;
            }
            Output::Json(json!({ "count": files.len(), "files": files.iter().map(|(n, _)| n).collect::<Vec<_>>() }))
        }
    };
    Ok(out)
}

fn write_json(path: &Path, v: &Value) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    fs::write(path, s).map_err(|e| Failure::Malformed(format!("cannot write {}: {e}", path.display())))
}

fn render_csv(q: &Quiver, rows: &[IntFlow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(q.arrows().iter().map(|a| a.id.as_str())).expect("in-memory write");
    for r in rows {
        w.write_record(r.iter().map(|v| v.to_string())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("ascii digits")
}

fn emit(v: &Value) {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    let _ = io::stdout().write_all(s.as_bytes());
}

fn fail(code: u8, kind: &str, message: String) -> ExitCode {
    emit(&json!({ "error": kind, "message": message }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(1, "Usage", e.render().to_string().trim_end().to_string()),
    };
    if let Some(n) = cli.jobs {
        if n == 0 {
            return fail(1, "Usage", "--jobs must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool is configured once");
    }
    let limits = Limits { max_nodes: cli.max_nodes };
    match run(cli.command, limits) {
        Ok(Output::Json(v)) => {
            if cli.format == Format::Csv {
                return fail(1, "Usage", "csv output is only available for commands that list flows".into());
            }
            emit(&v);
            ExitCode::SUCCESS
        }
        Ok(Output::Table(q, rows, v)) => {
            match cli.format {
                Format::Json => emit(&v),
                Format::Csv => {
                    let _ = io::stdout().write_all(render_csv(&q, &rows).as_bytes());
                }
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Malformed(msg)) => fail(1, "MalformedInput", msg),
        Err(Failure::Domain(e)) => fail(2, e.kind(), e.to_string()),
    }
}
