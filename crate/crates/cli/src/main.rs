mod input;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mlsc::analysis::{
    classify_errors, distance_up_to, single_errors_distinct, single_qubit_errors, syndrome, weight_report, ErrorKind,
};
use mlsc::aux::{block_encode, bvc_encode, AuxCode, BvcLayout};
use mlsc::bksf::bksf_encode;
use mlsc::encoding::{Encoding, ParitySector, Scheme};
use mlsc::lattice::Boundary;
use mlsc::lowering::{lower, snake_path, FermionTerm, TermKind};
use mlsc::mlsc::{derive_mlsc, shipped_pattern, CodeDefinition, DeriveTargets, Offset};
use mlsc::state_prep::{
    assign_for_encoding, assign_hamiltonian_path, assign_leaf_removal, assign_mlsc, assign_spanning_tree, check_assignment,
    satisfies_vertex_parity, EdgeAssignment, OccupationPattern,
};
use mlsc::{Error, Result};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use input::{LatticeSpec, Loaded, SchemeArg, SectorArg};
use report::{table, DistanceRecord, ErrorRecord};

#[derive(Parser)]
#[command(name = "mlsc", version, about = "Locality-preserving fermion-to-qubit encodings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for the analysis and search commands.
    #[arg(long, global = true, env = "MLSC_WORKERS")]
    workers: Option<usize>,
    /// Also print failures as a JSON record on standard error.
    #[arg(long, global = true)]
    error_json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Where an encoding comes from: a document on disk, or built in place.
#[derive(Args, Debug, Clone)]
struct Source {
    /// Encoding or code-definition document.
    input: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "input", requires = "lattice")]
    scheme: Option<SchemeArg>,
    /// Lattice as `RxC[:open|:torus]`.
    #[arg(long, conflicts_with = "input")]
    lattice: Option<LatticeSpec>,
    #[arg(long, value_enum, default_value_t = SectorArg::Even)]
    sector: SectorArg,
    /// Pattern document for the mlsc scheme (the shipped pattern otherwise).
    #[arg(long)]
    pattern: Option<PathBuf>,
    /// BKSF only: order qubits cyclically along this closed walk, e.g. `0,1,3,2,0`.
    #[arg(long)]
    cycle_ordering: Option<String>,
}

impl Source {
    fn load(&self) -> Result<Loaded> {
        let cycle = self.cycle_ordering.as_deref().map(input::parse_walk).transpose()?;
        let scheme = self.scheme.unwrap_or(SchemeArg::Bksf);
        match (&self.input, self.lattice) {
            (Some(p), _) => input::load(p),
            (None, Some(l)) => input::build(scheme, l, self.sector.into(), self.pattern.as_deref(), cycle.as_deref()),
            _ => Err(Error::Parse("give an input document or --scheme with --lattice".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Tree,
    Path,
    Leaf,
    Mlsc,
}

#[derive(Subcommand)]
enum Command {
    /// Build a lattice hopping graph.
    Lattice {
        #[arg(long)]
        lattice: LatticeSpec,
        /// Add boundary-only dangling edges (open lattices).
        #[arg(long)]
        dangling: bool,
    },
    /// Build an encoding and write its document.
    Encode {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long)]
        lattice: LatticeSpec,
        #[arg(long, value_enum, default_value_t = SectorArg::Even)]
        sector: SectorArg,
        #[arg(long)]
        pattern: Option<PathBuf>,
        /// BKSF only: order qubits cyclically along this closed walk.
        #[arg(long)]
        cycle_ordering: Option<String>,
        /// Write a code-definition document instead (bksf and mlsc only).
        #[arg(long)]
        definition: bool,
    },
    /// Re-check every invariant of an encoding or code definition.
    Verify {
        input: PathBuf,
    },
    /// Weights, distance and single-error classification.
    Analyze {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 2)]
        max_weight: usize,
    },
    /// Syndrome of a Pauli error, e.g. `X_0-1 Z_1-5` or `X_3 Z_7`.
    Syndrome {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        error: String,
    },
    /// Search for undetectable logicals up to a weight bound.
    Distance {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        max_weight: usize,
    },
    /// Weight and distance table of BKSF against the shipped MLSC.
    Compare {
        #[arg(long)]
        lattice: LatticeSpec,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
    },
    /// Edge assignment preparing a Fock state.
    Prepare {
        #[command(flatten)]
        source: Source,
        /// One character per mode, `1` occupied.
        #[arg(long)]
        occupation: String,
        #[arg(long, value_enum, default_value_t = Method::Tree)]
        method: Method,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lower the terms of a Hamiltonian document through an encoding.
    Lower {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        hamiltonian: PathBuf,
    },
    /// Search for an MLSC pattern on a torus and write its code definition.
    DeriveMlsc {
        #[arg(long)]
        lattice: LatticeSpec,
        #[arg(long, default_value_t = 3)]
        min_weight: usize,
        #[arg(long, default_value_t = 4)]
        max_hopping: usize,
        /// Skip the 4x4 open-boundary requirement.
        #[arg(long)]
        no_open_check: bool,
    },
}

/// Exit status for a library error.
fn exit_code(e: &Error) -> (i32, &'static str) {
    match e {
        Error::Parse(_) => (2, "parse"),
        Error::SearchExhausted(_) => (4, "search_exhausted"),
        Error::Budget { .. } => (5, "budget"),
        _ => (3, "invariant"),
    }
}

struct Out {
    format: Format,
    path: Option<PathBuf>,
}

impl Out {
    fn write(&self, text: &str) -> Result<()> {
        match &self.path {
            Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn json<T: Serialize>(&self, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::Invariant(e.to_string()))?;
        self.write(&(text + "\n"))
    }

    /// JSON in JSON mode, otherwise the text rendering.
    fn report<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<()> {
        match self.format {
            Format::Json => self.json(value),
            Format::Text => self.write(&text()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let out = Out { format: cli.format, path: cli.output.clone() };
    match run(cli.command, &out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, kind) = exit_code(&e);
            eprintln!("error: {e}");
            if cli.error_json {
                let rec = ErrorRecord { schema: "mlsc.error.v1", exit_code: code, kind, message: e.to_string() };
                eprintln!("{}", serde_json::to_string(&rec).unwrap_or_default());
            }
            ExitCode::from(code as u8)
        }
    }
}

fn run(cmd: Command, out: &Out) -> Result<()> {
    match cmd {
        Command::Lattice { lattice, dangling } => {
            let g = lattice.build(dangling)?;
            out.report(&g.to_document(), || {
                format!(
                    "lattice   {lattice}\nvertices  {}\nedges     {}\ndangling  {}\nqubits    {}\n",
                    g.num_vertices(),
                    g.num_edges(),
                    g.dangling().len(),
                    g.num_qubits()
                )
            })
        }
        Command::Encode { scheme, lattice, sector, pattern, cycle_ordering, definition } => {
            let cycle = cycle_ordering.as_deref().map(input::parse_walk).transpose()?;
            let loaded = input::build(scheme, lattice, sector.into(), pattern.as_deref(), cycle.as_deref())?;
            if definition {
                let def = match loaded.definition {
                    Some(d) => d,
                    None if scheme == SchemeArg::Bksf => CodeDefinition::from_encoding(&loaded.name, &loaded.encoding)?,
                    None => return Err(Error::Parse("code definitions cover the bksf and mlsc schemes".into())),
                };
                return out.json(&def.to_document());
            }
            out.json(&loaded.encoding.to_document())
        }
        Command::Verify { input } => verify(&input, out),
        Command::Analyze { source, max_weight } => analyze(&source.load()?, max_weight, out),
        Command::Syndrome { source, error } => {
            let loaded = source.load()?;
            let enc = &loaded.encoding;
            let e = enc.parse(&error)?;
            let s = syndrome(&e, enc)?;
            let labels: Vec<String> = enc.stabilizers().iter().map(|s| s.label.clone()).collect();
            let rec = SyndromeRecord { schema: "mlsc.syndrome.v1", error: enc.render(&e), stabilizers: labels, syndrome: s };
            out.report(&rec, || {
                let rows: Vec<Vec<String>> =
                    rec.stabilizers.iter().zip(&rec.syndrome).map(|(l, v)| vec![l.clone(), format!("{v:+}")]).collect();
                format!("error  {}\n", rec.error) + &table(&["stabilizer", "sign"], &rows)
            })
        }
        Command::Distance { source, max_weight } => {
            let loaded = source.load()?;
            let r = distance_up_to(&loaded.encoding, max_weight)?;
            let rec = DistanceRecord::new(&loaded.name, &loaded.encoding, &r);
            out.report(&rec, || rec.text())
        }
        Command::Compare { lattice, max_weight } => compare(lattice, max_weight, out),
        Command::Prepare { source, occupation, method, seed } => prepare(&source.load()?, &occupation, method, seed, out),
        Command::Lower { source, hamiltonian } => lower_all(&source.load()?, &hamiltonian, out),
        Command::DeriveMlsc { lattice, min_weight, max_hopping, no_open_check } => {
            if lattice.boundary != Boundary::Torus {
                return Err(Error::Parse("derive-mlsc needs a torus lattice".into()));
            }
            let targets = DeriveTargets {
                min_generalized_weight: min_weight,
                max_hopping_weight: max_hopping,
                open_4x4: !no_open_check,
                ..DeriveTargets::default()
            };
            let (def, stats) = derive_mlsc(&lattice.build(false)?, &targets)?;
            eprintln!(
                "vertex choices {}, local solutions {}, validated {}",
                stats.vertex_choices, stats.local_solutions, stats.validated
            );
            out.json(&def.to_document())
        }
    }
}

#[derive(Serialize)]
struct SyndromeRecord {
    schema: &'static str,
    error: String,
    stabilizers: Vec<String>,
    syndrome: Vec<i8>,
}

#[derive(Serialize)]
struct VerifyRecord {
    schema: &'static str,
    status: &'static str,
    scheme: String,
    qubits: usize,
    stabilizers: usize,
}

fn verify(path: &Path, out: &Out) -> Result<()> {
    let loaded = input::load(path)?;
    loaded.encoding.verify()?;
    let rec = VerifyRecord {
        schema: "mlsc.verify.v1",
        status: "ok",
        scheme: loaded.encoding.scheme().name().to_string(),
        qubits: loaded.encoding.num_qubits(),
        stabilizers: loaded.encoding.stabilizers().len(),
    };
    out.report(&rec, || format!("ok  {} on {} qubits, {} stabilizers\n", rec.scheme, rec.qubits, rec.stabilizers))
}

#[derive(Serialize)]
struct AnalysisRecord {
    schema: &'static str,
    weights: mlsc::analysis::WeightRow,
    single_errors: usize,
    detectable: usize,
    trivial: usize,
    undetectable: usize,
    distinct_syndromes: bool,
}

fn analyze(loaded: &Loaded, max_weight: usize, out: &Out) -> Result<()> {
    let enc = &loaded.encoding;
    let row = match aux_code(enc)? {
        Some(code) => code.weight_row(&loaded.name, max_weight)?,
        None => weight_report(&[(loaded.name.as_str(), enc)], max_weight)?.remove(0),
    };
    let singles = classify_errors(enc, &single_qubit_errors(enc.num_qubits()))?;
    let count = |k: ErrorKind| singles.errors.iter().filter(|e| e.kind == k).count();
    let rec = AnalysisRecord {
        schema: "mlsc.analysis.v1",
        single_errors: singles.errors.len(),
        detectable: count(ErrorKind::Detectable),
        trivial: count(ErrorKind::Trivial),
        undetectable: count(ErrorKind::UndetectableLogical),
        distinct_syndromes: single_errors_distinct(enc),
        weights: row,
    };
    out.report(&rec, || {
        let mut t = report::weight_table(std::slice::from_ref(&rec.weights));
        t += &format!(
            "\nsingle-qubit errors  {}\ndetectable           {}\ntrivial              {}\nundetectable         {}\ndistinct syndromes   {}\n",
            rec.single_errors,
            rec.detectable,
            rec.trivial,
            rec.undetectable,
            if rec.distinct_syndromes { "yes" } else { "no" }
        );
        t
    })
}

/// The auxiliary-mode code behind `enc`, rebuilt from its layout, when the
/// rebuilt operators match the document.
fn aux_code(enc: &Encoding) -> Result<Option<AuxCode>> {
    let build = match enc.scheme() {
        Scheme::Bvc => bvc_encode,
        Scheme::Block => block_encode,
        _ => return Ok(None),
    };
    let Some(d) = enc.graph().dims() else { return Ok(None) };
    let code = build(BvcLayout { rows: d.rows, cols: d.cols })?;
    Ok((code.encoding().to_document() == enc.to_document()).then_some(code))
}

#[derive(Serialize)]
struct CompareRecord {
    schema: &'static str,
    lattice: String,
    rows: Vec<mlsc::analysis::WeightRow>,
}

fn compare(lattice: LatticeSpec, max_weight: usize, out: &Out) -> Result<()> {
    if lattice.boundary != Boundary::Torus {
        return Err(Error::Parse("compare runs on a torus lattice".into()));
    }
    let g = lattice.build(false)?;
    let bksf = bksf_encode(&g, ParitySector::Even)?;
    let mlsc = CodeDefinition::from_pattern("mlsc", &g, &shipped_pattern(), Offset::default(), Some(3))?;
    let rows = weight_report(&[("bksf", &bksf), ("mlsc", mlsc.encoding())], max_weight)?;
    let rec = CompareRecord { schema: "mlsc.compare.v1", lattice: lattice.to_string(), rows };
    out.report(&rec, || report::weight_table(&rec.rows))
}

#[derive(Serialize)]
struct AssignmentRecord {
    schema: &'static str,
    method: &'static str,
    occupation: Vec<i8>,
    z: Vec<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    random_edges: Option<Vec<usize>>,
}

fn prepare(loaded: &Loaded, bits: &str, method: Method, seed: u64, out: &Out) -> Result<()> {
    let enc: &Encoding = &loaded.encoding;
    let g = enc.graph();
    let occ = OccupationPattern::from_bits(bits)?;
    let mut random_edges = None;
    let (name, z): (&'static str, EdgeAssignment) = match method {
        Method::Tree => ("tree", assign_spanning_tree(g, &occ)?),
        Method::Path => ("path", assign_hamiltonian_path(g, &snake_path(g)?.order, &occ)?),
        Method::Leaf => {
            let r = assign_leaf_removal(g, &occ, seed)?;
            random_edges = Some(r.random_edges);
            ("leaf", r.assignment)
        }
        Method::Mlsc => match &loaded.definition {
            Some(def) => ("mlsc", assign_mlsc(def, &occ)?),
            None => ("mlsc", assign_for_encoding(enc, &occ)?),
        },
    };
    // graph methods satisfy the plain parity rule; the encoding check
    // applies whenever the encoding's vertex images are the BKSF ones
    if method == Method::Mlsc || enc.scheme() == Scheme::Bksf {
        check_assignment(enc, &occ, &z)?;
    } else if !satisfies_vertex_parity(g, &occ, &z) {
        return Err(Error::Invariant("assignment misses the vertex parity rule".into()));
    }
    let rec = AssignmentRecord { schema: "mlsc.assignment.v1", method: name, occupation: occ.z.clone(), z: z.z, random_edges };
    out.report(&rec, || {
        let rows: Vec<Vec<String>> =
            rec.z.iter().enumerate().map(|(q, v)| vec![enc.labels()[q].clone(), format!("{v:+}")]).collect();
        table(&["qubit", "z"], &rows)
    })
}

/// Hamiltonian document: `{"schema": "mlsc.hamiltonian.v1", "terms": [...]}`
/// where each term is a tagged [`TermKind`] with a `coefficient` given as an
/// integer or a `"p/q"` string.
#[derive(Deserialize)]
struct HamiltonianDocument {
    schema: String,
    terms: Vec<HamiltonianTerm>,
}

#[derive(Deserialize)]
struct HamiltonianTerm {
    #[serde(flatten)]
    kind: TermKind,
    #[serde(default)]
    coefficient: Option<serde_json::Value>,
}

fn coefficient(v: &Option<serde_json::Value>) -> Result<Rational64> {
    match v {
        None => Ok(Rational64::from_integer(1)),
        Some(serde_json::Value::Number(n)) => {
            n.as_i64().map(Rational64::from_integer).ok_or_else(|| Error::Parse(format!("coefficient {n} is not an integer; use \"p/q\"")))
        }
        Some(serde_json::Value::String(s)) => s.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient {s:?}"))),
        Some(other) => Err(Error::Parse(format!("bad coefficient {other}"))),
    }
}

#[derive(Serialize)]
struct LoweredTerm {
    term: TermKind,
    coefficient: String,
    paulis: Vec<(String, String)>,
}

#[derive(Serialize)]
struct LoweredRecord {
    schema: &'static str,
    code: String,
    terms: Vec<LoweredTerm>,
}

fn term_name(t: &TermKind) -> String {
    match *t {
        TermKind::Occupation { p } => format!("n_{p}"),
        TermKind::PairOccupation { p, q } => format!("n_{p} n_{q}"),
        TermKind::Hopping { j, k } => format!("hop_{j},{k}"),
    }
}

fn lower_all(loaded: &Loaded, path: &Path, out: &Out) -> Result<()> {
    let doc: HamiltonianDocument = input::parse_json(&input::read_text(path)?, "hamiltonian")?;
    if doc.schema != "mlsc.hamiltonian.v1" {
        return Err(Error::Parse(format!("unsupported hamiltonian schema {:?}", doc.schema)));
    }
    let enc = &loaded.encoding;
    let mut terms = Vec::new();
    for t in &doc.terms {
        let c = coefficient(&t.coefficient)?;
        let sum = lower(&FermionTerm { kind: t.kind, coefficient: c }, enc)?;
        terms.push(LoweredTerm {
            term: t.kind,
            coefficient: c.to_string(),
            paulis: sum.terms.iter().map(|(c, p)| (c.to_string(), enc.render(p))).collect(),
        });
    }
    let rec = LoweredRecord { schema: "mlsc.lowered.v1", code: loaded.name.clone(), terms };
    out.report(&rec, || {
        let mut s = String::new();
        for t in &rec.terms {
            let sum: Vec<String> = t.paulis.iter().map(|(c, p)| format!("({c}) {p}")).collect();
            s += &format!("{} * {}  ->  {}\n", t.coefficient, term_name(&t.term), if sum.is_empty() { "0".into() } else { sum.join(" + ") });
        }
        s
    })
}
