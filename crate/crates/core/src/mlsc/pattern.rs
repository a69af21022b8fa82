//! Translation-covariant local operator patterns for square lattices.
//!
//! Vertex `(r, c)` has type `(r + 2c) mod 4` (after an optional tiling
//! offset): the four types run down each column and shift by two from one
//! column to the next, so every type-0 vertex is the upper-left corner of a
//! plaquette whose corners carry all four types, and these plaquettes tile
//! the lattice like bricks. The layout repeats every 4 rows and 2 columns.
//!
//! Every edge is stored from its left/upper endpoint (tail) to its
//! right/lower endpoint (head), so an edge type is the tail's vertex type
//! plus the direction `Right` or `Down`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Direction, HoppingGraph};
use crate::pauli::{Pauli, PauliString};

/// Letters an edge operator puts on the four edges around each endpoint,
/// indexed by [`Direction::index`]. The slot of the edge itself holds `X`
/// on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgePattern {
    pub negative: bool,
    pub tail: [Pauli; 4],
    pub head: [Pauli; 4],
}

impl EdgePattern {
    /// Checks that the own-edge slots hold `X` and no other slot does.
    pub fn check(&self, dir: Direction) -> Result<()> {
        let own_tail = dir.index();
        let own_head = dir.opposite().index();
        if self.tail[own_tail] != Pauli::X || self.head[own_head] != Pauli::X {
            return Err(Error::invariant(format!("edge pattern lacks X on its own edge ({dir:?})")));
        }
        let stray = (0..4).any(|d| (d != own_tail && self.tail[d] == Pauli::X) || (d != own_head && self.head[d] == Pauli::X));
        if stray {
            return Err(Error::invariant("edge pattern has X away from its own edge"));
        }
        Ok(())
    }
}

/// A translation-covariant operator assignment with four vertex types.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MlscPattern {
    /// The incident edge left out of `η̃` for each vertex type.
    pub eta_omit: [Direction; 4],
    /// `edges[t][0]` for the `Right` edge of a type-`t` tail, `[1]` for `Down`.
    pub edges: [[EdgePattern; 2]; 4],
}

pub const EDGE_DIRS: [Direction; 2] = [Direction::Right, Direction::Down];

/// Tiling offset: vertex `(r, c)` takes the type of `(r + dr, c + dc)`.
/// Distinct layouts have `dr < 4` and `dc < 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Offset {
    pub dr: usize,
    pub dc: usize,
}

pub const ROW_PERIOD: usize = 4;
pub const COL_PERIOD: usize = 2;

pub fn vertex_type(row: isize, col: isize, offset: Offset) -> usize {
    ((row + offset.dr as isize) + 2 * (col + offset.dc as isize)).rem_euclid(4) as usize
}

fn letters(s: &str) -> Result<[Pauli; 4]> {
    let v: Vec<Pauli> = s.chars().map(|c| Pauli::from_char(c).ok_or_else(|| Error::Parse(format!("bad letter in {s:?}")))).collect::<Result<_>>()?;
    v.try_into().map_err(|_| Error::Parse(format!("{s:?} must have four letters (U, L, R, D)")))
}

fn render(p: &[Pauli; 4]) -> String {
    p.iter().map(|l| l.as_char()).collect()
}

impl MlscPattern {
    pub fn check(&self) -> Result<()> {
        for t in 0..4 {
            for (i, &d) in EDGE_DIRS.iter().enumerate() {
                self.edges[t][i].check(d)?;
            }
        }
        Ok(())
    }

    fn type_of(g: &HoppingGraph, v: usize, offset: Offset) -> usize {
        let (r, c) = g.position(v).expect("lattice");
        vertex_type(r as isize, c as isize, offset)
    }

    /// `η̃_v` on a lattice: `Z` on the incident qubits other than the omitted one.
    pub fn vertex_op(&self, g: &HoppingGraph, v: usize, offset: Offset) -> PauliString {
        let t = Self::type_of(g, v, offset);
        let entries = Direction::ALL
            .into_iter()
            .filter(|&d| d != self.eta_omit[t])
            .filter_map(|d| g.qubit_towards(v, d))
            .map(|q| (q, Pauli::Z));
        PauliString::from_sparse(g.num_qubits(), entries)
    }

    /// `ξ̃` for real edge `e`, in its stored orientation.
    pub fn edge_op(&self, g: &HoppingGraph, e: usize, offset: Offset) -> Result<PauliString> {
        let (a, b) = g.edges()[e];
        let dir = g
            .direction_of(a, e)
            .filter(|d| EDGE_DIRS.contains(d))
            .ok_or_else(|| Error::InvalidLattice(format!("edge {e} is not stored left-to-right or top-to-bottom")))?;
        let pat = &self.edges[Self::type_of(g, a, offset)][(dir == Direction::Down) as usize];
        let mut p = PauliString::identity(g.num_qubits());
        place(g, &mut p, a, &pat.tail);
        place(g, &mut p, b, &pat.head);
        Ok(if pat.negative { p.negated() } else { p })
    }

    /// Operator of the dangling edge `d`: the pattern of the edge it would be,
    /// with letters beyond the lattice dropped.
    pub fn dangling_op(&self, g: &HoppingGraph, d: usize, offset: Offset) -> PauliString {
        let de = g.dangling()[d];
        let (r, c) = g.position(de.vertex).expect("lattice");
        let mut p = PauliString::identity(g.num_qubits());
        let pat = match de.direction {
            Direction::Right | Direction::Down => {
                let pat = &self.edges[vertex_type(r as isize, c as isize, offset)][(de.direction == Direction::Down) as usize];
                place(g, &mut p, de.vertex, &pat.tail);
                pat
            }
            Direction::Up | Direction::Left => {
                let (dr, dc) = de.direction.offset();
                let t = vertex_type(r as isize + dr, c as isize + dc, offset);
                let pat = &self.edges[t][(de.direction == Direction::Up) as usize];
                place(g, &mut p, de.vertex, &pat.head);
                pat
            }
        };
        if pat.negative {
            p.negated()
        } else {
            p
        }
    }

    pub fn to_document(&self) -> PatternDocument {
        PatternDocument {
            schema: PATTERN_SCHEMA.into(),
            eta_omit: self.eta_omit.to_vec(),
            edges: (0..4)
                .flat_map(|t| {
                    EDGE_DIRS.iter().enumerate().map(move |(i, &d)| (t, i, d))
                })
                .map(|(t, i, d)| {
                    let e = &self.edges[t][i];
                    EdgePatternEntry { vertex_type: t, direction: d, negative: e.negative, tail: render(&e.tail), head: render(&e.head) }
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &PatternDocument) -> Result<Self> {
        if doc.schema != PATTERN_SCHEMA {
            return Err(Error::Parse(format!("unsupported pattern schema {:?}", doc.schema)));
        }
        let eta_omit: [Direction; 4] = doc
            .eta_omit
            .clone()
            .try_into()
            .map_err(|_| Error::Parse("eta_omit needs one direction per vertex type".into()))?;
        let blank = EdgePattern { negative: false, tail: [Pauli::I; 4], head: [Pauli::I; 4] };
        let mut edges = [[blank; 2]; 4];
        let mut seen = [[false; 2]; 4];
        for e in &doc.edges {
            let i = EDGE_DIRS
                .iter()
                .position(|&d| d == e.direction)
                .ok_or_else(|| Error::Parse(format!("edge direction must be right or down, got {:?}", e.direction)))?;
            if e.vertex_type >= 4 {
                return Err(Error::Parse(format!("vertex type {} out of range", e.vertex_type)));
            }
            edges[e.vertex_type][i] = EdgePattern { negative: e.negative, tail: letters(&e.tail)?, head: letters(&e.head)? };
            seen[e.vertex_type][i] = true;
        }
        if seen.iter().flatten().any(|s| !s) {
            return Err(Error::Parse("pattern must list all eight edge types".into()));
        }
        let p = MlscPattern { eta_omit, edges };
        p.check().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(p)
    }
}

fn place(g: &HoppingGraph, p: &mut PauliString, v: usize, letters: &[Pauli; 4]) {
    for d in Direction::ALL {
        let l = letters[d.index()];
        if l != Pauli::I {
            if let Some(q) = g.qubit_towards(v, d) {
                p.set(q, l);
            }
        }
    }
}

pub const PATTERN_SCHEMA: &str = "mlsc.pattern.v1";

const SHIPPED: &str = include_str!("../../data/mlsc_pattern.json");

/// The distance-three pattern found by [`derive_pattern`](super::derive_pattern)
/// with default targets, as shipped in `data/mlsc_pattern.json`.
pub fn shipped_pattern() -> MlscPattern {
    let doc: PatternDocument = serde_json::from_str(SHIPPED).expect("shipped pattern parses");
    MlscPattern::from_document(&doc).expect("shipped pattern is well formed")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgePatternEntry {
    pub vertex_type: usize,
    pub direction: Direction,
    #[serde(default)]
    pub negative: bool,
    /// Letters on the tail's edges in the order up, left, right, down.
    pub tail: String,
    pub head: String,
}

/// JSON form of an [`MlscPattern`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternDocument {
    pub schema: String,
    pub eta_omit: Vec<Direction>,
    pub edges: Vec<EdgePatternEntry>,
}
