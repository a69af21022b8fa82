//! The common output type of every fermion-to-qubit construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Membership, StabilizerGroup};
use crate::lattice::{GraphDocument, HoppingGraph};
use crate::majorana::{commutation_sign, QuadraticGenerator};
use crate::pauli::{Phase, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParitySector {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitRole {
    Edge,
    Dangling,
    Data,
    Auxiliary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Bksf,
    Mlsc,
    Bvc,
    Block,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Bksf => "bksf",
            Scheme::Mlsc => "mlsc",
            Scheme::Bvc => "bvc",
            Scheme::Block => "block",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilizerKind {
    /// Contractible loop (a plaquette on lattices).
    Loop,
    /// Non-contractible torus loop.
    Winding,
    /// Open-boundary stabilizer built on dangling edges.
    Boundary,
    /// Auxiliary-mode gauge operator.
    Gauge,
}

/// A named stabilizer generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stabilizer {
    pub label: String,
    pub pauli: PauliString,
    pub kind: StabilizerKind,
}

/// Pauli images of the vertex and edge operators of a hopping graph,
/// together with the stabilizer group fixing the code space.
///
/// Edge images are stored for the orientation in [`HoppingGraph::edges`];
/// [`Encoding::edge_op`] produces the reverse orientation by a sign flip.
#[derive(Debug, Clone)]
pub struct Encoding {
    scheme: Scheme,
    graph: HoppingGraph,
    labels: Vec<String>,
    roles: Vec<QubitRole>,
    vertex_ops: Vec<PauliString>,
    edge_ops: Vec<PauliString>,
    stabilizers: Vec<Stabilizer>,
    group: StabilizerGroup,
    parity: ParitySector,
}

/// The pieces an [`Encoding`] is assembled from.
#[derive(Debug, Clone)]
pub struct EncodingParts {
    pub scheme: Scheme,
    pub graph: HoppingGraph,
    pub labels: Vec<String>,
    pub roles: Vec<QubitRole>,
    pub vertex_ops: Vec<PauliString>,
    pub edge_ops: Vec<PauliString>,
    pub stabilizers: Vec<Stabilizer>,
    pub parity: ParitySector,
}

impl Encoding {
    /// Assembles an encoding and builds its stabilizer group. Only structural
    /// checks run here; [`Encoding::verify`] checks the operator algebra.
    pub fn from_parts(parts: EncodingParts) -> Result<Self> {
        let n = parts.labels.len();
        if parts.roles.len() != n {
            return Err(Error::size(n, parts.roles.len()));
        }
        if parts.vertex_ops.len() != parts.graph.num_vertices() {
            return Err(Error::Missing(format!(
                "vertex operators: {} given for {} vertices",
                parts.vertex_ops.len(),
                parts.graph.num_vertices()
            )));
        }
        if parts.edge_ops.len() != parts.graph.num_edges() {
            return Err(Error::Missing(format!(
                "edge operators: {} given for {} edges",
                parts.edge_ops.len(),
                parts.graph.num_edges()
            )));
        }
        for p in parts.vertex_ops.iter().chain(&parts.edge_ops) {
            if p.num_qubits() != n {
                return Err(Error::size(n, p.num_qubits()));
            }
        }
        let group = StabilizerGroup::new(n, parts.stabilizers.iter().map(|s| s.pauli.clone()).collect())?;
        Ok(Encoding {
            scheme: parts.scheme,
            graph: parts.graph,
            labels: parts.labels,
            roles: parts.roles,
            vertex_ops: parts.vertex_ops,
            edge_ops: parts.edge_ops,
            stabilizers: parts.stabilizers,
            group,
            parity: parts.parity,
        })
    }

    pub fn into_parts(self) -> EncodingParts {
        EncodingParts {
            scheme: self.scheme,
            graph: self.graph,
            labels: self.labels,
            roles: self.roles,
            vertex_ops: self.vertex_ops,
            edge_ops: self.edge_ops,
            stabilizers: self.stabilizers,
            parity: self.parity,
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn graph(&self) -> &HoppingGraph {
        &self.graph
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn roles(&self) -> &[QubitRole] {
        &self.roles
    }

    pub fn parity_sector(&self) -> ParitySector {
        self.parity
    }

    /// `η̃_k`.
    pub fn vertex_op(&self, k: usize) -> &PauliString {
        &self.vertex_ops[k]
    }

    pub fn vertex_ops(&self) -> &[PauliString] {
        &self.vertex_ops
    }

    /// Edge images in stored orientation, indexed like the graph's edges.
    pub fn edge_ops(&self) -> &[PauliString] {
        &self.edge_ops
    }

    /// `ξ̃_jk` for the oriented edge `j → k`.
    pub fn edge_op(&self, j: usize, k: usize) -> Result<PauliString> {
        let e = self.graph.edge_index(j, k).ok_or(Error::NotAdjacent(j, k))?;
        let op = self.edge_ops[e].clone();
        Ok(if self.graph.edges()[e].0 == j { op } else { op.negated() })
    }

    pub fn stabilizers(&self) -> &[Stabilizer] {
        &self.stabilizers
    }

    pub fn stabilizer_paulis(&self) -> Vec<PauliString> {
        self.stabilizers.iter().map(|s| s.pauli.clone()).collect()
    }

    pub fn group(&self) -> &StabilizerGroup {
        &self.group
    }

    /// Image of an abstract quadratic generator (`ξ_{jk}` with `j < k`).
    pub fn generator_image(&self, g: QuadraticGenerator) -> Result<PauliString> {
        match g {
            QuadraticGenerator::Vertex(k) => self
                .vertex_ops
                .get(k)
                .cloned()
                .ok_or_else(|| Error::Missing(format!("vertex {k}"))),
            QuadraticGenerator::Edge(j, k) => self.edge_op(j, k),
        }
    }

    /// All abstract generators: vertices first, then edges in graph order.
    pub fn generators(&self) -> Vec<QuadraticGenerator> {
        let mut out: Vec<QuadraticGenerator> = (0..self.graph.num_vertices()).map(QuadraticGenerator::Vertex).collect();
        out.extend(self.graph.edges().iter().map(|&(a, b)| QuadraticGenerator::edge(a, b).0));
        out
    }

    /// `(-i)^ℓ ξ̃_{k0 k1} ⋯ ξ̃_{k_{ℓ-1} k0}` along a closed walk.
    pub fn loop_stabilizer(&self, path: &[usize]) -> Result<PauliString> {
        loop_image(&self.graph, &self.edge_ops, path)
    }

    /// Renders a Pauli string with this encoding's qubit labels.
    pub fn render(&self, p: &PauliString) -> String {
        p.render_labeled(&self.labels)
    }

    pub fn parse(&self, text: &str) -> Result<PauliString> {
        PauliString::parse_labeled(text, &self.labels).or_else(|_| PauliString::parse(text, self.num_qubits()))
    }

    /// Checks the full operator algebra:
    /// images are Hermitian and self-inverse; every pair of generator images
    /// commutes exactly when the abstract Majorana generators do; every
    /// stabilizer commutes with every image; and every cycle-basis loop
    /// product is an element of the stabilizer group with sign `+1`.
    pub fn verify(&self) -> Result<()> {
        let gens = self.generators();
        let n_modes = 2 * self.graph.num_vertices();
        let images: Vec<PauliString> = gens.iter().map(|&g| self.generator_image(g)).collect::<Result<_>>()?;
        let abstracts: Vec<_> = gens.iter().map(|g| g.operator(n_modes)).collect();
        for (g, p) in gens.iter().zip(&images) {
            if !p.is_hermitian() {
                return Err(Error::invariant(format!("image of {g:?} is not Hermitian")));
            }
        }
        for a in 0..gens.len() {
            for b in a + 1..gens.len() {
                let anti = commutation_sign(&abstracts[a], &abstracts[b])? == -1;
                if images[a].symplectic(&images[b]) != anti {
                    return Err(Error::invariant(format!(
                        "commutation of {:?} and {:?} differs from the Majorana algebra",
                        gens[a], gens[b]
                    )));
                }
            }
        }
        for s in &self.stabilizers {
            if let Some(i) = images.iter().position(|p| p.symplectic(&s.pauli)) {
                return Err(Error::invariant(format!("stabilizer {} anticommutes with {:?}", s.label, gens[i])));
            }
        }
        for cycle in self.graph.cycle_basis().cycles {
            let s = self.loop_stabilizer(&cycle)?;
            if self.group.contains(&s) != Membership::Member {
                return Err(Error::invariant(format!("loop {cycle:?} is not a +1 stabilizer")));
            }
        }
        Ok(())
    }

    pub fn to_document(&self) -> EncodingDocument {
        EncodingDocument {
            schema: ENCODING_SCHEMA.to_string(),
            scheme: self.scheme,
            parity_sector: self.parity,
            graph: self.graph.to_document(),
            qubits: self
                .labels
                .iter()
                .zip(&self.roles)
                .map(|(l, &r)| QubitEntry { label: l.clone(), role: r })
                .collect(),
            vertex_ops: self.vertex_ops.iter().map(|p| p.render()).collect(),
            edge_ops: self
                .graph
                .edges()
                .iter()
                .zip(&self.edge_ops)
                .map(|(&edge, p)| EdgeEntry { edge, op: p.render() })
                .collect(),
            stabilizers: self
                .stabilizers
                .iter()
                .map(|s| StabilizerEntry { label: s.label.clone(), op: s.pauli.render(), kind: s.kind })
                .collect(),
        }
    }

    pub fn from_document(doc: &EncodingDocument) -> Result<Self> {
        if doc.schema != ENCODING_SCHEMA {
            return Err(Error::Parse(format!("unsupported encoding schema {:?}", doc.schema)));
        }
        let graph = HoppingGraph::from_document(&doc.graph)?;
        let n = doc.qubits.len();
        let parse = |s: &str| PauliString::parse(s, n);
        if doc.edge_ops.len() != graph.num_edges() {
            return Err(Error::Parse("edge operator table does not match the graph".into()));
        }
        let mut edge_ops = Vec::with_capacity(doc.edge_ops.len());
        for (e, entry) in doc.edge_ops.iter().enumerate() {
            if entry.edge != graph.edges()[e] {
                return Err(Error::Parse(format!("edge operator {e} is listed for {:?}", entry.edge)));
            }
            edge_ops.push(parse(&entry.op)?);
        }
        Encoding::from_parts(EncodingParts {
            scheme: doc.scheme,
            labels: doc.qubits.iter().map(|q| q.label.clone()).collect(),
            roles: doc.qubits.iter().map(|q| q.role).collect(),
            vertex_ops: doc.vertex_ops.iter().map(|s| parse(s)).collect::<Result<_>>()?,
            edge_ops,
            stabilizers: doc
                .stabilizers
                .iter()
                .map(|s| Ok(Stabilizer { label: s.label.clone(), pauli: parse(&s.op)?, kind: s.kind }))
                .collect::<Result<_>>()?,
            parity: doc.parity_sector,
            graph,
        })
    }
}

/// Loop product over explicit edge images (stored orientation).
pub(crate) fn loop_image(g: &HoppingGraph, edge_ops: &[PauliString], path: &[usize]) -> Result<PauliString> {
    g.check_closed_walk(path)?;
    let len = path.len() - 1;
    let n = edge_ops.first().map_or(g.num_qubits(), |p| p.num_qubits());
    let mut acc = PauliString::identity(n).with_phase(Phase::from_exponent(-(len as i64)));
    for w in path.windows(2) {
        let e = g.edge_index(w[0], w[1]).unwrap();
        acc.mul_assign_right(&edge_ops[e]);
        if g.edges()[e].0 != w[0] {
            acc = acc.negated();
        }
    }
    Ok(acc)
}

/// Loop stabilizers for the graph's cycle basis, labelled by their vertices.
pub(crate) fn cycle_stabilizers(g: &HoppingGraph, edge_ops: &[PauliString]) -> Result<Vec<Stabilizer>> {
    let basis = g.cycle_basis();
    let first_winding = basis.cycles.len() - basis.winding;
    basis
        .cycles
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let label = c[..c.len() - 1].iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".");
            Ok(Stabilizer {
                label: format!("S[{label}]"),
                pauli: loop_image(g, edge_ops, c)?,
                kind: if i < first_winding { StabilizerKind::Loop } else { StabilizerKind::Winding },
            })
        })
        .collect()
}

pub fn loop_stabilizer(enc: &Encoding, path: &[usize]) -> Result<PauliString> {
    enc.loop_stabilizer(path)
}

pub const ENCODING_SCHEMA: &str = "mlsc.encoding.v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitEntry {
    pub label: String,
    pub role: QubitRole,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub edge: (usize, usize),
    pub op: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizerEntry {
    pub label: String,
    pub op: String,
    pub kind: StabilizerKind,
}

/// JSON form of an [`Encoding`]; Pauli strings use the sparse text form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingDocument {
    pub schema: String,
    pub scheme: Scheme,
    pub parity_sector: ParitySector,
    pub graph: GraphDocument,
    pub qubits: Vec<QubitEntry>,
    pub vertex_ops: Vec<String>,
    pub edge_ops: Vec<EdgeEntry>,
    pub stabilizers: Vec<StabilizerEntry>,
}
