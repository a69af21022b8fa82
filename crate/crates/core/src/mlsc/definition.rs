//! Explicit code definitions: a hopping graph with hand-written (or
//! generated) operator tables, checked before use.

use serde::{Deserialize, Serialize};

use crate::encoding::{cycle_stabilizers, Encoding, EncodingParts, ParitySector, QubitRole, Scheme, Stabilizer, StabilizerKind};
use crate::error::{Error, Gen, Result, Violation};
use crate::lattice::{Boundary, GraphDocument, HoppingGraph};
use crate::majorana::{commutation_sign, QuadraticGenerator};
use crate::mlsc::open::{build_open_boundary, hermitian, is_conjugate, BoundaryFamilies, ConjugateSource};
use crate::mlsc::pattern::{vertex_type, MlscPattern, Offset};
use crate::mlsc::search::{derive_pattern, DeriveTargets, SearchStats};
use crate::pauli::{PauliString, Phase};

pub const CODE_SCHEMA: &str = "mlsc.code.v1";

/// A checked code: the encoding it induces plus the data it was defined by.
#[derive(Debug, Clone)]
pub struct CodeDefinition {
    pub name: String,
    pub vertex_types: Option<Vec<usize>>,
    pub boundary: Option<BoundaryFamilies>,
    pub min_generalized_weight: Option<usize>,
    encoding: Encoding,
}

/// Operator tables before checking.
#[derive(Debug, Clone)]
pub struct CodeTables {
    pub name: String,
    pub graph: HoppingGraph,
    pub vertex_types: Option<Vec<usize>>,
    pub vertex_ops: Vec<PauliString>,
    pub edge_ops: Vec<PauliString>,
    pub boundary: Option<BoundaryFamilies>,
    pub min_generalized_weight: Option<usize>,
    pub parity: ParitySector,
}

impl CodeDefinition {
    /// Checks the tables and builds the encoding. Stabilizers are the loop
    /// products over the cycle basis followed by the boundary family `B`.
    pub fn new(t: CodeTables) -> Result<Self> {
        let g = &t.graph;
        let n = g.num_qubits();
        if t.vertex_ops.len() != g.num_vertices() || t.edge_ops.len() != g.num_edges() {
            return Err(Error::Missing("one operator per vertex and per edge".into()));
        }
        if let Some(types) = &t.vertex_types {
            if types.len() != g.num_vertices() || types.iter().any(|&x| x >= 4) {
                return Err(Error::Parse("vertex types must list one type in 0..4 per vertex".into()));
            }
        }
        for p in t.vertex_ops.iter().chain(&t.edge_ops) {
            if p.num_qubits() != n {
                return Err(Error::size(n, p.num_qubits()));
            }
        }
        check_algebra(g, &t.vertex_ops, &t.edge_ops)?;
        check_locality(g, &t.vertex_ops, &t.edge_ops)?;
        if let Some(min) = t.min_generalized_weight {
            check_weights(g, &t.vertex_ops, &t.edge_ops, min)?;
        }
        let mut stabilizers = cycle_stabilizers(g, &t.edge_ops)?;
        if let Some(fam) = &t.boundary {
            check_boundary(g, &t.vertex_ops, &t.edge_ops, fam)?;
            stabilizers.extend(fam.b.iter().enumerate().map(|(i, p)| Stabilizer {
                label: format!("B{i}"),
                pauli: p.clone(),
                kind: StabilizerKind::Boundary,
            }));
        } else if !g.dangling().is_empty() {
            return Err(Error::Missing("boundary operator families for a graph with dangling edges".into()));
        }
        let encoding = Encoding::from_parts(EncodingParts {
            scheme: Scheme::Mlsc,
            graph: t.graph.clone(),
            labels: g.qubit_labels(),
            roles: (0..n).map(|q| if q < g.num_edges() { QubitRole::Edge } else { QubitRole::Dangling }).collect(),
            vertex_ops: t.vertex_ops,
            edge_ops: t.edge_ops,
            stabilizers,
            parity: t.parity,
        })?;
        encoding.verify()?;
        Ok(CodeDefinition {
            name: t.name,
            vertex_types: t.vertex_types,
            boundary: t.boundary,
            min_generalized_weight: t.min_generalized_weight,
            encoding,
        })
    }

    /// Re-reads an encoding's operator tables (any scheme whose stabilizers
    /// are its loop products, BKSF included).
    pub fn from_encoding(name: impl Into<String>, enc: &Encoding) -> Result<Self> {
        let def = CodeDefinition::new(CodeTables {
            name: name.into(),
            graph: enc.graph().clone(),
            vertex_types: None,
            vertex_ops: enc.vertex_ops().to_vec(),
            edge_ops: enc.edge_ops().to_vec(),
            boundary: None,
            min_generalized_weight: None,
            parity: enc.parity_sector(),
        })?;
        for s in enc.stabilizers() {
            if !def.encoding.group().contains(&s.pauli).in_group_up_to_sign() {
                return Err(Error::invariant(format!("stabilizer {} is not generated by loop products", s.label)));
            }
        }
        Ok(def)
    }

    /// A pattern instantiated on a torus or an open lattice without dangling edges.
    pub fn from_pattern(name: impl Into<String>, g: &HoppingGraph, pattern: &MlscPattern, offset: Offset, min_weight: Option<usize>) -> Result<Self> {
        let enc = crate::mlsc::encode_pattern(g, pattern, offset)?;
        CodeDefinition::new(CodeTables {
            name: name.into(),
            graph: g.clone(),
            vertex_types: Some(lattice_types(g, offset)),
            vertex_ops: enc.vertex_ops().to_vec(),
            edge_ops: enc.edge_ops().to_vec(),
            boundary: None,
            min_generalized_weight: min_weight,
            parity: ParitySector::Even,
        })
    }

    /// The open-boundary code of a pattern on a lattice with dangling edges.
    pub fn open_boundary(name: impl Into<String>, g: &HoppingGraph, pattern: &MlscPattern, offset: Offset) -> Result<Self> {
        let (enc, fam) = build_open_boundary(g, pattern, offset)?;
        CodeDefinition::new(CodeTables {
            name: name.into(),
            graph: g.clone(),
            vertex_types: Some(lattice_types(g, offset)),
            vertex_ops: enc.vertex_ops().to_vec(),
            edge_ops: enc.edge_ops().to_vec(),
            boundary: Some(fam),
            min_generalized_weight: None,
            parity: ParitySector::Even,
        })
    }

    pub fn encoding(&self) -> &Encoding {
        &self.encoding
    }

    pub fn into_encoding(self) -> Encoding {
        self.encoding
    }

    pub fn graph(&self) -> &HoppingGraph {
        self.encoding.graph()
    }

    pub fn to_document(&self) -> CodeDocument {
        let enc = &self.encoding;
        CodeDocument {
            schema: CODE_SCHEMA.into(),
            name: self.name.clone(),
            graph: enc.graph().to_document(),
            parity_sector: enc.parity_sector(),
            vertex_types: self.vertex_types.clone(),
            min_generalized_weight: self.min_generalized_weight,
            vertex_ops: enc.vertex_ops().iter().map(|p| p.render()).collect(),
            edge_ops: enc.edge_ops().iter().map(|p| p.render()).collect(),
            boundary: self.boundary.as_ref().map(|f| BoundaryDocument {
                d: f.d.iter().map(|p| p.render()).collect(),
                a: f.a.iter().map(|p| p.render()).collect(),
                c: f.c.iter().map(|p| p.render()).collect(),
                b: f.b.iter().map(|p| p.render()).collect(),
            }),
        }
    }
}

fn lattice_types(g: &HoppingGraph, offset: Offset) -> Vec<usize> {
    (0..g.num_vertices())
        .map(|v| {
            let (r, c) = g.position(v).expect("lattice");
            vertex_type(r as isize, c as isize, offset)
        })
        .collect()
}

/// Parses and checks a code definition document.
pub fn load_code_definition(doc: &CodeDocument) -> Result<CodeDefinition> {
    if doc.schema != CODE_SCHEMA {
        return Err(Error::Parse(format!("unsupported code schema {:?}", doc.schema)));
    }
    let graph = HoppingGraph::from_document(&doc.graph)?;
    let n = graph.num_qubits();
    let parse = |s: &String| PauliString::parse(s, n);
    let parse_all = |v: &[String]| v.iter().map(parse).collect::<Result<Vec<_>>>();
    let boundary = match &doc.boundary {
        None => None,
        Some(b) => {
            let fam = BoundaryFamilies {
                d: parse_all(&b.d)?,
                a: parse_all(&b.a)?,
                c: parse_all(&b.c)?,
                b: parse_all(&b.b)?,
                c_source: vec![ConjugateSource::Solved; b.d.len()],
            };
            Some(fam)
        }
    };
    CodeDefinition::new(CodeTables {
        name: doc.name.clone(),
        vertex_types: doc.vertex_types.clone(),
        vertex_ops: parse_all(&doc.vertex_ops)?,
        edge_ops: parse_all(&doc.edge_ops)?,
        boundary,
        min_generalized_weight: doc.min_generalized_weight,
        parity: doc.parity_sector,
        graph,
    })
}

pub fn load_code_definition_json(text: &str) -> Result<CodeDefinition> {
    let doc: CodeDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    load_code_definition(&doc)
}

/// Runs [`derive_pattern`] for the torus `g` and returns the resulting definition.
pub fn derive_mlsc(g: &HoppingGraph, targets: &DeriveTargets) -> Result<(CodeDefinition, SearchStats)> {
    let dims = match (g.dims(), g.boundary()) {
        (Some(d), Boundary::Torus) => d,
        _ => return Err(Error::InvalidLattice("derive_mlsc needs a square-lattice torus".into())),
    };
    let (pattern, stats) = derive_pattern(dims.rows, dims.cols, targets)?;
    let name = format!("mlsc-{}x{}", dims.rows, dims.cols);
    let def = CodeDefinition::from_pattern(name, g, &pattern, Offset::default(), Some(targets.min_generalized_weight))?;
    Ok((def, stats))
}

fn images(g: &HoppingGraph, vertex_ops: &[PauliString], edge_ops: &[PauliString]) -> Vec<(QuadraticGenerator, PauliString)> {
    let mut out: Vec<(QuadraticGenerator, PauliString)> =
        vertex_ops.iter().enumerate().map(|(k, p)| (QuadraticGenerator::Vertex(k), p.clone())).collect();
    for (&(a, b), p) in g.edges().iter().zip(edge_ops) {
        let (gen, sign) = QuadraticGenerator::edge(a, b);
        out.push((gen, if sign < 0 { p.clone().negated() } else { p.clone() }));
    }
    out
}

fn check_algebra(g: &HoppingGraph, vertex_ops: &[PauliString], edge_ops: &[PauliString]) -> Result<()> {
    let n_modes = g.num_vertices();
    let all = images(g, vertex_ops, edge_ops);
    for (gen, p) in &all {
        let sq = p.multiply(p)?;
        if !p.is_hermitian() || sq.phase() != Phase::ONE {
            return Err(Error::Rejected(Violation::NotHermitian(Gen(*gen))));
        }
    }
    let abstracts: Vec<_> = all.iter().map(|(gen, _)| gen.operator(n_modes)).collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let anti = commutation_sign(&abstracts[i], &abstracts[j])? == -1;
            if all[i].1.symplectic(&all[j].1) != anti {
                return Err(Error::Rejected(Violation::Commutation { first: Gen(all[i].0), second: Gen(all[j].0) }));
            }
        }
    }
    Ok(())
}

fn check_locality(g: &HoppingGraph, vertex_ops: &[PauliString], edge_ops: &[PauliString]) -> Result<()> {
    for (k, p) in vertex_ops.iter().enumerate() {
        if let Some(q) = p.support().into_iter().find(|q| !g.incident(k).contains(q)) {
            return Err(Error::Rejected(Violation::Locality { generator: Gen(QuadraticGenerator::Vertex(k)), qubit: q }));
        }
    }
    for (&(a, b), p) in g.edges().iter().zip(edge_ops) {
        if let Some(q) = p.support().into_iter().find(|q| !g.incident(a).contains(q) && !g.incident(b).contains(q)) {
            let generator = Gen(QuadraticGenerator::edge(a, b).0);
            return Err(Error::Rejected(Violation::Locality { generator, qubit: q }));
        }
    }
    Ok(())
}

/// `ξ̃`, `ξ̃η̃_k`, `η̃_jξ̃` and `η̃_jξ̃η̃_k` on every edge whose endpoints both
/// have four real neighbours.
fn check_weights(g: &HoppingGraph, vertex_ops: &[PauliString], edge_ops: &[PauliString], min: usize) -> Result<()> {
    for (&(a, b), xi) in g.edges().iter().zip(edge_ops) {
        if g.degree(a) < 4 || g.degree(b) < 4 {
            continue;
        }
        let left = vertex_ops[a].multiply(xi)?;
        let forms = [
            ("xi", xi.clone()),
            ("xi eta_head", xi.multiply(&vertex_ops[b])?),
            ("eta_tail xi", left.clone()),
            ("eta_tail xi eta_head", left.multiply(&vertex_ops[b])?),
        ];
        for (form, p) in forms {
            if p.weight() < min {
                return Err(Error::Rejected(Violation::Weight { edge: (a, b), form, weight: p.weight(), min }));
            }
        }
    }
    Ok(())
}

fn boundary_err(family: char, index: usize, reason: impl Into<String>) -> Error {
    Error::Rejected(Violation::Boundary { family, index, reason: reason.into() })
}

fn check_boundary(g: &HoppingGraph, vertex_ops: &[PauliString], edge_ops: &[PauliString], fam: &BoundaryFamilies) -> Result<()> {
    let nd = g.dangling().len();
    let n = g.num_qubits();
    for (name, v) in [('D', &fam.d), ('A', &fam.a), ('C', &fam.c), ('B', &fam.b)] {
        if v.len() != nd {
            return Err(boundary_err(name, v.len(), format!("expected {nd} operators, one per dangling edge")));
        }
        if let Some(i) = v.iter().position(|p| p.num_qubits() != n) {
            return Err(boundary_err(name, i, "wrong qubit count"));
        }
    }
    for (i, d) in fam.d.iter().enumerate() {
        let v = g.dangling()[i].vertex;
        let q = g.num_edges() + i;
        if !d.support().contains(&q) || d.support().iter().any(|s| !g.incident(v).contains(s)) {
            return Err(boundary_err('D', i, "must act on its dangling edge and edges at its vertex only"));
        }
        for (u, eta) in vertex_ops.iter().enumerate() {
            if d.symplectic(eta) != (u == v) {
                return Err(boundary_err('D', i, format!("wrong commutation with eta_{u}")));
            }
        }
        for (e, xi) in edge_ops.iter().enumerate() {
            let (a, b) = g.edges()[e];
            if d.symplectic(xi) != (a == v || b == v) {
                return Err(boundary_err('D', i, format!("wrong commutation with edge {e}")));
            }
        }
    }
    for i in 0..nd {
        let prev = (i + nd - 1) % nd;
        let (u, v) = (g.dangling()[prev].vertex, g.dangling()[i].vertex);
        let mut a = fam.d[prev].clone();
        if u != v {
            let e = g.edge_index(u, v).ok_or_else(|| boundary_err('A', i, "dangling edges on non-adjacent vertices"))?;
            a.mul_assign_right(&edge_ops[e]);
        }
        a.mul_assign_right(&fam.d[i]);
        if hermitian(a).letters() != fam.a[i].letters() {
            return Err(boundary_err('A', i, "is not the product of edge operators around its boundary plaquette"));
        }
        if !is_conjugate(&fam.c[i], i, edge_ops, &fam.d) {
            return Err(boundary_err('C', i, "must anticommute with D_i only and commute with every edge operator"));
        }
        let b = hermitian(fam.a[i].clone().with_phase(fam.a[i].phase() * Phase::I).multiply(&fam.c[i])?);
        if b.letters() != fam.b[i].letters() || !fam.b[i].is_hermitian() {
            return Err(boundary_err('B', i, "is not i A_i C_i"));
        }
    }
    fam.check_ladder().map_err(|e| boundary_err('A', 0, e.to_string()))?;
    for (i, b) in fam.b.iter().enumerate() {
        if vertex_ops.iter().chain(edge_ops).any(|l| l.symplectic(b)) {
            return Err(boundary_err('B', i, "anticommutes with a logical operator"));
        }
        if let Some(j) = fam.b.iter().take(i).position(|o| o.symplectic(b)) {
            return Err(boundary_err('B', i, format!("anticommutes with B_{j}")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDocument {
    pub d: Vec<String>,
    pub a: Vec<String>,
    pub c: Vec<String>,
    pub b: Vec<String>,
}

/// JSON form of a [`CodeDefinition`]. Operators use `P_q` text with qubit
/// indices; edge operators follow the graph's edge order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeDocument {
    pub schema: String,
    pub name: String,
    pub graph: GraphDocument,
    #[serde(default = "even")]
    pub parity_sector: ParitySector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_types: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_generalized_weight: Option<usize>,
    pub vertex_ops: Vec<String>,
    pub edge_ops: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryDocument>,
}

fn even() -> ParitySector {
    ParitySector::Even
}
