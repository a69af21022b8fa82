//! Hopping graphs: square lattices, incident-edge orderings, antisymmetric
//! edge signs, spanning trees and cycle bases.
//!
//! One qubit lives on every edge. Real edges are numbered first; dangling
//! edges (boundary-only qubits with a single real endpoint) follow, so the
//! qubit index of dangling edge `d` is `num_edges() + d`.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Torus,
    Open,
    /// Not a lattice: an arbitrary connected graph.
    Free,
}

/// Lattice directions, in the fixed order used to index per-vertex slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Up,
    Left,
    Right,
    Down,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Up, Direction::Left, Direction::Right, Direction::Down];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }

    /// Quarter turn clockwise (screen coordinates, rows grow downwards).
    pub fn clockwise(self) -> Direction {
        match self {
            Direction::Up => Direction::Right,
            Direction::Right => Direction::Down,
            Direction::Down => Direction::Left,
            Direction::Left => Direction::Up,
        }
    }

    pub fn offset(self) -> (isize, isize) {
        match self {
            Direction::Up => (-1, 0),
            Direction::Down => (1, 0),
            Direction::Left => (0, -1),
            Direction::Right => (0, 1),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Direction::Up => 'U',
            Direction::Left => 'L',
            Direction::Right => 'R',
            Direction::Down => 'D',
        }
    }
}

/// Per-vertex incident-edge ordering used by the BKSF construction on square
/// lattices, listed from first to last. With this ordering every interior
/// plaquette `(m, n, q, p)` (top-left `m`, clockwise) has the stabilizer
/// `-X_mn Y_nq Y_qp X_pm Z_jm Z_lm`, where `j` is above `m` and `l` left of it.
pub const DEFAULT_BKSF_ORDER: [Direction; 4] = [Direction::Right, Direction::Up, Direction::Left, Direction::Down];

/// Boundary-only edge attached to `vertex`, pointing off the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DanglingEdge {
    pub vertex: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub rows: usize,
    pub cols: usize,
}

/// Undirected simple connected graph with the bookkeeping a superfast-type
/// encoding needs.
#[derive(Debug, Clone, PartialEq)]
pub struct HoppingGraph {
    n_vertices: usize,
    boundary: Boundary,
    dims: Option<Dims>,
    // (tail, head); epsilon[e] is ε_{tail,head}
    edges: Vec<(usize, usize)>,
    epsilon: Vec<i8>,
    dangling: Vec<DanglingEdge>,
    incident: Vec<Vec<usize>>,
    lookup: HashMap<(usize, usize), usize>,
}

impl HoppingGraph {
    /// Arbitrary connected simple graph; incident edges ordered by edge index
    /// and `ε = +1` on every edge as given.
    pub fn from_edges(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = HoppingGraph {
            n_vertices,
            boundary: Boundary::Free,
            dims: None,
            edges: Vec::new(),
            epsilon: Vec::new(),
            dangling: Vec::new(),
            incident: vec![Vec::new(); n_vertices],
            lookup: HashMap::new(),
        };
        for &(a, b) in edges {
            g.push_edge(a, b)?;
        }
        g.check_connected()?;
        Ok(g)
    }

    fn push_edge(&mut self, a: usize, b: usize) -> Result<usize> {
        if a >= self.n_vertices || b >= self.n_vertices {
            return Err(Error::InvalidLattice(format!("edge ({a},{b}) references a missing vertex")));
        }
        if a == b {
            return Err(Error::InvalidLattice(format!("self-loop at vertex {a}")));
        }
        let key = (a.min(b), a.max(b));
        if self.lookup.contains_key(&key) {
            return Err(Error::InvalidLattice(format!("duplicate edge ({a},{b})")));
        }
        let e = self.edges.len();
        self.edges.push((a, b));
        self.epsilon.push(1);
        self.lookup.insert(key, e);
        self.incident[a].push(e);
        self.incident[b].push(e);
        Ok(e)
    }

    fn check_connected(&self) -> Result<()> {
        if self.n_vertices == 0 {
            return Err(Error::InvalidLattice("graph has no vertices".into()));
        }
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Square lattice with vertices numbered row-major from the top-left.
    ///
    /// `ε_{jk} = +1` when `k` is right of or below `j`. Every vertex orders
    /// its incident edges by [`DEFAULT_BKSF_ORDER`]. With `with_dangling` an
    /// open lattice gets one dangling edge per missing direction, numbered
    /// clockwise from the upward edge of the top-left vertex.
    pub fn build_lattice(rows: usize, cols: usize, boundary: Boundary, with_dangling: bool) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::InvalidLattice(format!("{rows}x{cols}: need at least 2x2")));
        }
        match boundary {
            Boundary::Torus if rows < 3 || cols < 3 => {
                return Err(Error::InvalidLattice(format!("{rows}x{cols} torus would have repeated edges; need at least 3x3")))
            }
            Boundary::Torus if with_dangling => {
                return Err(Error::InvalidLattice("dangling edges require open boundaries".into()))
            }
            Boundary::Free => return Err(Error::InvalidLattice("a lattice needs a torus or open boundary".into())),
            _ => {}
        }
        let n = rows * cols;
        let mut g = HoppingGraph {
            n_vertices: n,
            boundary,
            dims: Some(Dims { rows, cols }),
            edges: Vec::new(),
            epsilon: Vec::new(),
            dangling: Vec::new(),
            incident: vec![Vec::new(); n],
            lookup: HashMap::new(),
        };
        let torus = boundary == Boundary::Torus;
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols || torus {
                    g.push_edge(v, r * cols + (c + 1) % cols)?;
                }
                if r + 1 < rows || torus {
                    g.push_edge(v, ((r + 1) % rows) * cols + c)?;
                }
            }
        }
        if with_dangling {
            let mut dangling = Vec::new();
            dangling.extend((0..cols).map(|c| DanglingEdge { vertex: c, direction: Direction::Up }));
            dangling.extend((0..rows).map(|r| DanglingEdge { vertex: r * cols + cols - 1, direction: Direction::Right }));
            dangling.extend((0..cols).rev().map(|c| DanglingEdge { vertex: (rows - 1) * cols + c, direction: Direction::Down }));
            dangling.extend((0..rows).rev().map(|r| DanglingEdge { vertex: r * cols, direction: Direction::Left }));
            let base = g.edges.len();
            for (d, de) in dangling.iter().enumerate() {
                g.incident[de.vertex].push(base + d);
            }
            g.dangling = dangling;
        }
        g.apply_direction_order(&DEFAULT_BKSF_ORDER)?;
        Ok(g)
    }

    /// Reorders every vertex's incident edges by a direction permutation.
    pub fn apply_direction_order(&mut self, order: &[Direction; 4]) -> Result<()> {
        self.apply_vertex_direction_orders(|_| *order)
    }

    /// Reorders incident edges with a per-vertex direction permutation.
    pub fn apply_vertex_direction_orders(&mut self, order: impl Fn(usize) -> [Direction; 4]) -> Result<()> {
        if self.dims.is_none() {
            return Err(Error::InvalidLattice("direction orderings need a lattice".into()));
        }
        for v in 0..self.n_vertices {
            let perm = order(v);
            let mut sorted = std::collections::BTreeSet::new();
            sorted.extend(perm.iter().copied());
            if sorted.len() != 4 {
                return Err(Error::InvalidLattice(format!("ordering for vertex {v} is not a permutation")));
            }
            let list: Vec<usize> = perm.iter().filter_map(|&d| self.qubit_towards(v, d)).collect();
            self.incident[v] = list;
        }
        Ok(())
    }

    /// Qubit on the edge leaving `v` in direction `d` (real or dangling).
    pub fn qubit_towards(&self, v: usize, d: Direction) -> Option<usize> {
        let Dims { rows, cols } = self.dims?;
        let (r, c) = (v / cols, v % cols);
        let (dr, dc) = d.offset();
        let (nr, nc) = (r as isize + dr, c as isize + dc);
        let inside = nr >= 0 && nc >= 0 && (nr as usize) < rows && (nc as usize) < cols;
        if inside || self.boundary == Boundary::Torus {
            let u = (nr.rem_euclid(rows as isize) as usize) * cols + nc.rem_euclid(cols as isize) as usize;
            return self.edge_index(v, u);
        }
        self.dangling
            .iter()
            .position(|de| de.vertex == v && de.direction == d)
            .map(|i| self.edges.len() + i)
    }

    /// Neighbor of `v` in direction `d` along a real edge.
    pub fn neighbor_towards(&self, v: usize, d: Direction) -> Option<usize> {
        let q = self.qubit_towards(v, d)?;
        if q >= self.edges.len() {
            return None;
        }
        let (a, b) = self.edges[q];
        Some(if a == v { b } else { a })
    }

    /// Direction from `v` along qubit `q`, for lattices.
    pub fn direction_of(&self, v: usize, q: usize) -> Option<Direction> {
        Direction::ALL.into_iter().find(|&d| self.qubit_towards(v, d) == Some(q))
    }

    pub fn num_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.edges.len() + self.dangling.len()
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn dims(&self) -> Option<Dims> {
        self.dims
    }

    pub fn position(&self, v: usize) -> Option<(usize, usize)> {
        self.dims.map(|d| (v / d.cols, v % d.cols))
    }

    pub fn vertex_at(&self, row: usize, col: usize) -> Option<usize> {
        let d = self.dims?;
        (row < d.rows && col < d.cols).then_some(row * d.cols + col)
    }

    /// Real edges as `(tail, head)`; `ε` is stored for this orientation.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn dangling(&self) -> &[DanglingEdge] {
        &self.dangling
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.lookup.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_index(a, b).is_some()
    }

    /// Other endpoint of real edge `e` seen from `v`.
    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Ordered incident qubits of `v`, dangling edges included.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].iter().filter(|&&q| q < self.edges.len()).count()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident[v].iter().filter(|&&q| q < self.edges.len()).map(move |&e| self.other_end(e, v))
    }

    /// Replaces the ordering at `v`; must be a permutation of its incident qubits.
    pub fn set_ordering(&mut self, v: usize, order: Vec<usize>) -> Result<()> {
        let mut a = order.clone();
        let mut b = self.incident[v].clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(Error::InvalidLattice(format!("ordering {order:?} is not a permutation of the edges at vertex {v}")));
        }
        self.incident[v] = order;
        Ok(())
    }

    /// Orders the edges on a cycle so each vertex lists its outgoing cycle
    /// edge before the incoming one.
    pub fn set_cycle_ordering(&mut self, cycle: &[usize]) -> Result<()> {
        self.check_closed_walk(cycle)?;
        let len = cycle.len() - 1;
        for i in 0..len {
            let v = cycle[i];
            let prev = cycle[(i + len - 1) % len];
            let next = cycle[i + 1];
            let out = self.edge_index(v, next).unwrap();
            let inc = self.edge_index(prev, v).unwrap();
            let mut order = vec![out, inc];
            order.extend(self.incident[v].iter().copied().filter(|&q| q != out && q != inc));
            self.set_ordering(v, order)?;
        }
        Ok(())
    }

    /// Position of qubit `q` in the ordering at `v`.
    pub fn rank_at(&self, v: usize, q: usize) -> Option<usize> {
        self.incident[v].iter().position(|&x| x == q)
    }

    /// `ε_{jk}` for the oriented edge `j → k`.
    pub fn epsilon(&self, j: usize, k: usize) -> Option<i8> {
        let e = self.edge_index(j, k)?;
        let (tail, _) = self.edges[e];
        Some(if tail == j { self.epsilon[e] } else { -self.epsilon[e] })
    }

    /// `ε` of edge `e` in its stored orientation.
    pub fn edge_epsilon(&self, e: usize) -> i8 {
        self.epsilon[e]
    }

    pub fn set_edge_epsilon(&mut self, e: usize, value: i8) {
        assert!(value == 1 || value == -1);
        self.epsilon[e] = value;
    }

    pub fn flip_epsilon(&mut self, e: usize) {
        self.epsilon[e] = -self.epsilon[e];
    }

    /// Checks that `path` is a closed walk `[k0, …, k0]` over real edges.
    pub fn check_closed_walk(&self, path: &[usize]) -> Result<()> {
        if path.len() < 2 || path.first() != path.last() {
            return Err(Error::OpenPath);
        }
        for w in path.windows(2) {
            if !self.has_edge(w[0], w[1]) {
                return Err(Error::NotAdjacent(w[0], w[1]));
            }
        }
        Ok(())
    }

    /// Real edge indices traversed by a closed walk.
    pub fn walk_edges(&self, path: &[usize]) -> Result<Vec<usize>> {
        self.check_closed_walk(path)?;
        Ok(path.windows(2).map(|w| self.edge_index(w[0], w[1]).unwrap()).collect())
    }

    /// Product of oriented `ε` along a closed walk.
    pub fn epsilon_loop_sign(&self, path: &[usize]) -> Result<i8> {
        self.check_closed_walk(path)?;
        Ok(path.windows(2).map(|w| self.epsilon(w[0], w[1]).unwrap()).product())
    }

    /// Breadth-first spanning tree rooted at `root`, exploring incident edges
    /// in ordering order.
    pub fn spanning_tree(&self, root: usize) -> SpanningTree {
        let mut parent = vec![None; self.n_vertices];
        let mut seen = vec![false; self.n_vertices];
        let mut order = vec![root];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            for &q in &self.incident[v] {
                if q >= self.edges.len() {
                    continue;
                }
                let u = self.other_end(q, v);
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some((v, q));
                    order.push(u);
                    queue.push_back(u);
                }
            }
        }
        let mut in_tree = vec![false; self.edges.len()];
        for &(_, e) in parent.iter().flatten() {
            in_tree[e] = true;
        }
        SpanningTree { root, parent, order, in_tree }
    }

    /// Fundamental cycles of the BFS tree at vertex 0, one per non-tree edge.
    pub fn fundamental_cycles(&self) -> Vec<Vec<usize>> {
        let tree = self.spanning_tree(0);
        (0..self.edges.len())
            .filter(|&e| !tree.in_tree[e])
            .map(|e| tree.fundamental_cycle(self, e))
            .collect()
    }

    /// A cycle basis of `N_E - N_V + 1` closed walks.
    ///
    /// Lattices use plaquettes, listed `(m, n, q, p, m)` from the top-left
    /// corner clockwise; on a torus the last plaquette is dropped and the two
    /// winding loops through vertex 0 are appended. Other graphs use the
    /// fundamental cycles of a spanning tree.
    pub fn cycle_basis(&self) -> CycleBasis {
        let mut winding = 0;
        let cycles = match (self.dims, self.boundary) {
            (Some(Dims { rows, cols }), Boundary::Torus) => {
                let mut cycles: Vec<Vec<usize>> = (0..rows)
                    .flat_map(|r| (0..cols).map(move |c| (r, c)))
                    .map(|(r, c)| self.plaquette(r, c))
                    .collect();
                cycles.pop();
                let mut row: Vec<usize> = (0..cols).collect();
                row.push(0);
                let mut col: Vec<usize> = (0..rows).map(|r| r * cols).collect();
                col.push(0);
                cycles.push(row);
                cycles.push(col);
                winding = 2;
                cycles
            }
            (Some(Dims { rows, cols }), Boundary::Open) => (0..rows - 1)
                .flat_map(|r| (0..cols - 1).map(move |c| (r, c)))
                .map(|(r, c)| self.plaquette(r, c))
                .collect(),
            _ => self.fundamental_cycles(),
        };
        CycleBasis { cycles, winding }
    }

    /// Plaquette with top-left corner `(r, c)` as a closed walk, clockwise.
    pub fn plaquette(&self, r: usize, c: usize) -> Vec<usize> {
        let Dims { rows, cols } = self.dims.expect("plaquettes need a lattice");
        let at = |r: usize, c: usize| (r % rows) * cols + c % cols;
        vec![at(r, c), at(r, c + 1), at(r + 1, c + 1), at(r + 1, c), at(r, c)]
    }

    /// Edge-incidence vector of a closed walk over GF(2).
    pub fn cycle_vector(&self, path: &[usize]) -> Result<Vec<bool>> {
        let mut v = vec![false; self.edges.len()];
        for e in self.walk_edges(path)? {
            v[e] ^= true;
        }
        Ok(v)
    }

    /// Default qubit labels: `a-b` for real edges, `a-U` style for dangling.
    pub fn qubit_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = self.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        labels.extend(self.dangling.iter().map(|d| format!("{}-{}", d.vertex, d.direction.letter())));
        labels
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            schema: GRAPH_SCHEMA.to_string(),
            boundary: self.boundary,
            dims: self.dims,
            num_vertices: self.n_vertices,
            edges: self.edges.clone(),
            epsilon: self.epsilon.clone(),
            dangling: self.dangling.clone(),
            ordering: self.incident.clone(),
        }
    }

    pub fn from_document(doc: &GraphDocument) -> Result<Self> {
        if doc.schema != GRAPH_SCHEMA {
            return Err(Error::Parse(format!("unsupported graph schema {:?}", doc.schema)));
        }
        if doc.epsilon.len() != doc.edges.len() || doc.ordering.len() != doc.num_vertices {
            return Err(Error::Parse("graph document arrays have inconsistent lengths".into()));
        }
        let mut g = HoppingGraph {
            n_vertices: doc.num_vertices,
            boundary: doc.boundary,
            dims: doc.dims,
            edges: Vec::new(),
            epsilon: Vec::new(),
            dangling: doc.dangling.clone(),
            incident: vec![Vec::new(); doc.num_vertices],
            lookup: HashMap::new(),
        };
        for &(a, b) in &doc.edges {
            g.push_edge(a, b).map_err(|e| Error::Parse(e.to_string()))?;
        }
        let base = g.edges.len();
        for (d, de) in doc.dangling.iter().enumerate() {
            if de.vertex >= g.n_vertices {
                return Err(Error::Parse(format!("dangling edge {d} references a missing vertex")));
            }
            g.incident[de.vertex].push(base + d);
        }
        for (e, &s) in doc.epsilon.iter().enumerate() {
            if s != 1 && s != -1 {
                return Err(Error::Parse(format!("epsilon of edge {e} must be +1 or -1")));
            }
            g.epsilon[e] = s;
        }
        for (v, order) in doc.ordering.iter().enumerate() {
            g.set_ordering(v, order.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        }
        g.check_connected()?;
        Ok(g)
    }
}

pub const GRAPH_SCHEMA: &str = "mlsc.graph.v1";

/// JSON form of a [`HoppingGraph`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub schema: String,
    pub boundary: Boundary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Dims>,
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub epsilon: Vec<i8>,
    #[serde(default)]
    pub dangling: Vec<DanglingEdge>,
    /// Per-vertex incident qubit indices, first to last.
    pub ordering: Vec<Vec<usize>>,
}

/// Rooted spanning tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: usize,
    /// `(parent vertex, edge)` for every non-root vertex.
    pub parent: Vec<Option<(usize, usize)>>,
    /// Vertices in discovery order (root first, parents before children).
    pub order: Vec<usize>,
    pub in_tree: Vec<bool>,
}

impl SpanningTree {
    pub fn tree_edges(&self) -> Vec<usize> {
        (0..self.in_tree.len()).filter(|&e| self.in_tree[e]).collect()
    }

    fn path_to_root(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while let Some((p, _)) = self.parent[v] {
            out.push(p);
            v = p;
        }
        out
    }

    /// Closed walk through non-tree edge `e = (a, b)`: `a → b`, then back to
    /// `a` along the tree.
    pub fn fundamental_cycle(&self, g: &HoppingGraph, e: usize) -> Vec<usize> {
        let (a, b) = g.edges[e];
        let pa = self.path_to_root(a);
        let pb = self.path_to_root(b);
        // strip the common ancestor chain
        let (mut i, mut j) = (pa.len(), pb.len());
        while i > 0 && j > 0 && pa[i - 1] == pb[j - 1] {
            i -= 1;
            j -= 1;
        }
        let mut walk = vec![a];
        walk.extend_from_slice(&pb[..=j]);
        // pb[..=j] ends at lca; now lca → a along pa reversed
        walk.extend(pa[..i].iter().rev().copied());
        walk
    }
}

/// Closed walks forming a basis of the cycle space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    pub cycles: Vec<Vec<usize>>,
    /// Number of trailing non-contractible (winding) loops.
    pub winding: usize,
}

impl CycleBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

pub fn build_lattice(rows: usize, cols: usize, boundary: Boundary, with_dangling: bool) -> Result<HoppingGraph> {
    HoppingGraph::build_lattice(rows, cols, boundary, with_dangling)
}

pub fn cycle_basis(g: &HoppingGraph) -> CycleBasis {
    g.cycle_basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_counts() {
        let g = build_lattice(2, 2, Boundary::Open, false).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (4, 4));
        assert_eq!(g.cycle_basis().len(), 1);

        let t = build_lattice(3, 3, Boundary::Torus, false).unwrap();
        assert_eq!((t.num_vertices(), t.num_edges()), (9, 18));
        assert_eq!(t.cycle_basis().len(), 10);
        assert!((0..9).all(|v| t.degree(v) == 4));

        let d = build_lattice(4, 4, Boundary::Open, true).unwrap();
        assert_eq!((d.num_vertices(), d.num_edges(), d.dangling().len()), (16, 24, 16));
        assert_eq!(d.dangling()[0], DanglingEdge { vertex: 0, direction: Direction::Up });
        assert_eq!(d.dangling()[15], DanglingEdge { vertex: 0, direction: Direction::Left });
        assert_eq!(d.dangling()[4], DanglingEdge { vertex: 3, direction: Direction::Right });
        assert!((0..16).all(|v| d.incident(v).len() == 4));

        assert_eq!(build_lattice(3, 3, Boundary::Open, false).unwrap().cycle_basis().len(), 4);
    }

    #[test]
    fn invalid_lattices() {
        assert!(build_lattice(1, 4, Boundary::Open, false).is_err());
        assert!(build_lattice(3, 3, Boundary::Torus, true).is_err());
        assert!(build_lattice(2, 3, Boundary::Torus, false).is_err());
    }

    #[test]
    fn single_plaquette_basis() {
        let g = build_lattice(2, 2, Boundary::Open, false).unwrap();
        assert_eq!(g.cycle_basis(), CycleBasis { cycles: vec![vec![0, 1, 3, 2, 0]], winding: 0 });
    }

    #[test]
    fn trees_have_no_cycles() {
        let g = HoppingGraph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        assert!(g.cycle_basis().is_empty());
        assert_eq!(g.spanning_tree(0).tree_edges().len(), 3);
    }

    #[test]
    fn disconnected_and_non_simple_graphs_rejected() {
        assert_eq!(HoppingGraph::from_edges(4, &[(0, 1), (2, 3)]), Err(Error::Disconnected));
        assert!(HoppingGraph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(HoppingGraph::from_edges(2, &[(0, 0)]).is_err());
    }

    #[test]
    fn epsilon_convention_on_plaquettes() {
        let mut g = build_lattice(4, 4, Boundary::Torus, false).unwrap();
        for cyc in g.cycle_basis().cycles {
            assert_eq!(g.epsilon_loop_sign(&cyc).unwrap(), 1);
            let rev: Vec<usize> = cyc.iter().rev().copied().collect();
            assert_eq!(g.epsilon_loop_sign(&rev).unwrap(), 1);
        }
        assert_eq!(g.epsilon(0, 1), Some(1));
        assert_eq!(g.epsilon(1, 0), Some(-1));
        let p = g.plaquette(1, 1);
        let e = g.edge_index(p[0], p[1]).unwrap();
        g.flip_epsilon(e);
        assert_eq!(g.epsilon_loop_sign(&p).unwrap(), -1);
        assert_eq!(g.epsilon_loop_sign(&[0, 5, 0]), Err(Error::NotAdjacent(0, 5)));
    }

    #[test]
    fn fundamental_cycles_are_closed() {
        let g = HoppingGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (4, 3), (0, 2)]).unwrap();
        let cycles = g.fundamental_cycles();
        assert_eq!(cycles.len(), 7 - 5 + 1);
        for c in &cycles {
            g.check_closed_walk(c).unwrap();
        }
    }

    #[test]
    fn document_round_trip() {
        let g = build_lattice(4, 4, Boundary::Open, true).unwrap();
        let json = serde_json::to_string(&g.to_document()).unwrap();
        let doc: GraphDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(HoppingGraph::from_document(&doc).unwrap(), g);
    }
}
