//! Initial computational-basis values `z_jk` for an encoded Slater
//! determinant, and the sign fix-up after the stabilizers are measured.
//!
//! Every vertex operator must be a product of `Z`s (up to a real sign), so
//! that on the product state `Z_q |ψ⟩ = z_q |ψ⟩` it takes the value
//! `sign · ∏ z_q` over its support. An assignment is valid when that value
//! equals the requested occupation `z_k` (`+1` empty, `-1` occupied).

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::encoding::{cycle_stabilizers, Encoding, StabilizerKind};
use crate::error::{Error, Result};
use crate::lattice::{HoppingGraph, SpanningTree};
use crate::mlsc::CodeDefinition;
use crate::pauli::{Pauli, PauliString};

/// `z_k` for every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccupationPattern {
    pub z: Vec<i8>,
}

impl OccupationPattern {
    pub fn new(z: Vec<i8>) -> Result<Self> {
        if z.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::Parse("occupation values must be +1 or -1".into()));
        }
        Ok(OccupationPattern { z })
    }

    pub fn empty(n: usize) -> Self {
        OccupationPattern { z: vec![1; n] }
    }

    /// `'1'` marks an occupied vertex, `'0'` an empty one, vertex 0 first.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let z = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(1),
                '1' => Ok(-1),
                _ => Err(Error::Parse(format!("occupation bit {c:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Ok(OccupationPattern { z })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn num_occupied(&self) -> usize {
        self.z.iter().filter(|&&v| v < 0).count()
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.z.len() != n {
            return Err(Error::size(n, self.z.len()));
        }
        Ok(())
    }
}

/// `z_q` for every qubit (real edges first, then dangling edges).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeAssignment {
    pub z: Vec<i8>,
}

impl EdgeAssignment {
    pub fn all_plus(n: usize) -> Self {
        EdgeAssignment { z: vec![1; n] }
    }
}

/// Value of a diagonal Pauli on the product state, or `None` when the
/// string has an `X`/`Y` or a non-real phase.
pub fn diagonal_value(p: &PauliString, z: &EdgeAssignment) -> Option<i8> {
    let mut v = p.phase().sign()?;
    for (q, l) in p.letters() {
        if l != Pauli::Z {
            return None;
        }
        v *= z.z[q];
    }
    Some(v)
}

/// Evaluates every vertex operator on the product state and compares it
/// with the occupation pattern.
pub fn check_assignment(enc: &Encoding, occ: &OccupationPattern, z: &EdgeAssignment) -> Result<()> {
    occ.check_len(enc.graph().num_vertices())?;
    if z.z.len() != enc.num_qubits() {
        return Err(Error::size(enc.num_qubits(), z.z.len()));
    }
    for (k, op) in enc.vertex_ops().iter().enumerate() {
        match diagonal_value(op, z) {
            None => return Err(Error::invariant(format!("vertex operator {k} is not diagonal"))),
            Some(v) if v != occ.z[k] => {
                return Err(Error::invariant(format!("vertex {k}: value {v}, wanted {}", occ.z[k])));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Plain `∏_{(j,k)∈E} z_jk = z_k` on a graph.
pub fn satisfies_vertex_parity(g: &HoppingGraph, occ: &OccupationPattern, z: &EdgeAssignment) -> bool {
    occ.z.len() == g.num_vertices()
        && (0..g.num_vertices()).all(|k| {
            g.incident(k).iter().filter(|&&q| q < g.num_edges()).map(|&q| z.z[q]).product::<i8>() == occ.z[k]
        })
}

/// Leaves-to-root pass: each vertex sets its parent edge to its residual
/// target times the values on its child edges. `target` is consumed.
fn fill_tree(tree: &SpanningTree, target: &mut [i8], z: &mut [i8]) -> Result<()> {
    for &v in tree.order.iter().rev() {
        match tree.parent[v] {
            Some((p, e)) => {
                z[e] = target[v];
                target[p] *= z[e];
                target[v] = 1;
            }
            None if target[v] != 1 => return Err(Error::OddParity),
            None => {}
        }
    }
    Ok(())
}

/// Assigns the tree edges of `tree` and sets every other qubit to `+1`.
pub fn assign_with_tree(g: &HoppingGraph, tree: &SpanningTree, occ: &OccupationPattern) -> Result<EdgeAssignment> {
    occ.check_len(g.num_vertices())?;
    if tree.order.len() != g.num_vertices() {
        return Err(Error::Disconnected);
    }
    let mut z = EdgeAssignment::all_plus(g.num_qubits());
    let mut target = occ.z.clone();
    fill_tree(tree, &mut target, &mut z.z)?;
    Ok(z)
}

/// The three-step spanning-tree procedure on the breadth-first tree at
/// vertex 0. Needs an even number of occupied vertices.
pub fn assign_spanning_tree(g: &HoppingGraph, occ: &OccupationPattern) -> Result<EdgeAssignment> {
    assign_with_tree(g, &g.spanning_tree(0), occ)
}

/// A Hamiltonian path as a rooted spanning tree (root `path[0]`).
pub fn path_tree(g: &HoppingGraph, path: &[usize]) -> Result<SpanningTree> {
    let n = g.num_vertices();
    let mut seen = vec![false; n];
    for &v in path {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::invariant("path repeats or leaves the graph"));
        }
    }
    if path.len() != n {
        return Err(Error::invariant(format!("path visits {} of {n} vertices", path.len())));
    }
    let mut parent = vec![None; n];
    let mut in_tree = vec![false; g.num_edges()];
    for w in path.windows(2) {
        let e = g.edge_index(w[0], w[1]).ok_or(Error::NotAdjacent(w[0], w[1]))?;
        parent[w[1]] = Some((w[0], e));
        in_tree[e] = true;
    }
    Ok(SpanningTree { root: path[0], parent, order: path.to_vec(), in_tree })
}

/// `z_{0,1} = z_0`, `z_{k,k+1} = z_k z_{k-1,k}` along the path, `+1` off it.
pub fn assign_hamiltonian_path(g: &HoppingGraph, path: &[usize], occ: &OccupationPattern) -> Result<EdgeAssignment> {
    occ.check_len(g.num_vertices())?;
    let tree = path_tree(g, path)?;
    let mut z = EdgeAssignment::all_plus(g.num_qubits());
    let mut prev = 1;
    for w in path.windows(2) {
        let e = tree.parent[w[1]].expect("on path").1;
        z.z[e] = occ.z[w[0]] * prev;
        prev = z.z[e];
    }
    if prev != occ.z[*path.last().expect("nonempty")] {
        return Err(Error::OddParity);
    }
    Ok(z)
}

/// Result of the leaf-removal procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafRemoval {
    pub assignment: EdgeAssignment,
    /// Edges picked at random and set to `+1`, in pick order.
    pub random_edges: Vec<usize>,
}

struct Legs<'a> {
    g: &'a HoppingGraph,
    alive: Vec<bool>,
    degree: Vec<usize>,
    target: Vec<i8>,
    z: Vec<i8>,
}

impl Legs<'_> {
    fn remaining_edge(&self, k: usize) -> usize {
        *self.g.incident(k).iter().find(|&&q| q < self.g.num_edges() && self.alive[q]).expect("degree one")
    }

    /// Whether `e` lies on a cycle of the edges still alive.
    fn on_cycle(&self, e: usize) -> bool {
        let (a, b) = self.g.edges()[e];
        let mut seen = vec![false; self.g.num_vertices()];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(v) = stack.pop() {
            for &q in self.g.incident(v) {
                if q == e || q >= self.g.num_edges() || !self.alive[q] {
                    continue;
                }
                let w = self.g.other_end(q, v);
                if w == b {
                    return true;
                }
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    fn remove(&mut self, e: usize) {
        let (a, b) = self.g.edges()[e];
        self.alive[e] = false;
        self.degree[a] -= 1;
        self.degree[b] -= 1;
    }

    /// Removes the leg at degree-one vertex `k`, following the chain while
    /// the far end becomes a leaf in turn.
    fn rm_leg(&mut self, mut k: usize) {
        while self.degree[k] == 1 {
            let e = self.remaining_edge(k);
            let j = self.g.other_end(e, k);
            self.z[e] = self.target[k];
            self.target[j] *= self.z[e];
            self.target[k] = 1;
            self.remove(e);
            k = j;
        }
    }
}

/// Assignment without a path or a tree: strip degree-one legs, and when
/// none remain set a random edge to `+1`. Only edges on a remaining cycle
/// are picked, so a pick never splits off a part with odd parity. Picks
/// come from a ChaCha8 stream seeded with `seed`. Odd parity shows up as a failed final check.
pub fn assign_leaf_removal(g: &HoppingGraph, occ: &OccupationPattern, seed: u64) -> Result<LeafRemoval> {
    occ.check_len(g.num_vertices())?;
    let n_e = g.num_edges();
    let mut legs = Legs {
        g,
        alive: vec![true; n_e],
        degree: (0..g.num_vertices()).map(|v| g.incident(v).iter().filter(|&&q| q < n_e).count()).collect(),
        target: occ.z.clone(),
        z: vec![1; g.num_qubits()],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_edges = Vec::new();
    for k in 0..g.num_vertices() {
        legs.rm_leg(k);
    }
    loop {
        let left: Vec<usize> = (0..n_e).filter(|&e| legs.alive[e] && legs.on_cycle(e)).collect();
        if left.is_empty() {
            break;
        }
        let e = left[rng.gen_range(0..left.len())];
        random_edges.push(e);
        legs.remove(e);
        let (j, k) = g.edges()[e];
        legs.rm_leg(k);
        legs.rm_leg(j);
    }
    let assignment = EdgeAssignment { z: legs.z };
    if !satisfies_vertex_parity(g, occ, &assignment) {
        return Err(Error::OddParity);
    }
    Ok(LeafRemoval { assignment, random_edges })
}

/// Which vertex operators act on each qubit, with the vertex signs.
fn owners(enc: &Encoding) -> Result<(Vec<Vec<usize>>, Vec<i8>)> {
    let mut own = vec![Vec::new(); enc.num_qubits()];
    let mut signs = Vec::new();
    for (k, op) in enc.vertex_ops().iter().enumerate() {
        let sign = op.phase().sign().ok_or_else(|| Error::invariant(format!("vertex operator {k} is not Hermitian")))?;
        for (q, l) in op.letters() {
            if l != Pauli::Z {
                return Err(Error::invariant(format!("vertex operator {k} is not diagonal")));
            }
            own[q].push(k);
        }
        signs.push(sign);
    }
    if let Some(q) = own.iter().position(|o| o.len() > 2) {
        return Err(Error::invariant(format!("qubit {q} is in more than two vertex operators")));
    }
    Ok((own, signs))
}

/// The four-step procedure for codes whose vertex operators skip some
/// incident edges: per connected part of `(V, E')`, an odd part is fixed by
/// setting the first one-sided qubit (in `η̃` of one vertex only) to `-1`,
/// then a breadth-first tree of the part is filled as in the spanning-tree
/// method. Everything else is `+1`.
pub fn assign_for_encoding(enc: &Encoding, occ: &OccupationPattern) -> Result<EdgeAssignment> {
    let g = enc.graph();
    let n_v = g.num_vertices();
    occ.check_len(n_v)?;
    let (own, signs) = owners(enc)?;
    let shared = |q: usize| own[q].len() == 2;
    let other = |q: usize, v: usize| if own[q][0] == v { own[q][1] } else { own[q][0] };
    // neighbours in (V, E'), in each vertex's ordering
    let adj: Vec<Vec<usize>> = (0..n_v)
        .map(|v| {
            let mut a: Vec<usize> = g.incident(v).iter().copied().filter(|&q| shared(q) && own[q].contains(&v)).collect();
            for q in 0..own.len() {
                if shared(q) && own[q].contains(&v) && !a.contains(&q) {
                    a.push(q);
                }
            }
            a
        })
        .collect();
    let mut z = EdgeAssignment::all_plus(enc.num_qubits());
    let mut target: Vec<i8> = (0..n_v).map(|k| occ.z[k] * signs[k]).collect();
    let mut seen = vec![false; n_v];
    for root in 0..n_v {
        if seen[root] {
            continue;
        }
        let mut parent = vec![None; n_v];
        let mut order = vec![root];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            for &q in &adj[v] {
                let u = other(q, v);
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some((v, q));
                    order.push(u);
                    queue.push_back(u);
                }
            }
        }
        let parity: i8 = order.iter().map(|&v| target[v]).product();
        if parity < 0 {
            let fix = (0..own.len()).find(|&q| own[q].len() == 1 && order.contains(&own[q][0]));
            let q = fix.ok_or(Error::NoParityFix(root))?;
            z.z[q] = -1;
            target[own[q][0]] *= -1;
        }
        let tree = SpanningTree { root, parent, order, in_tree: Vec::new() };
        fill_tree(&tree, &mut target, &mut z.z)?;
    }
    check_assignment(enc, occ, &z)?;
    Ok(z)
}

pub fn assign_mlsc(code: &CodeDefinition, occ: &OccupationPattern) -> Result<EdgeAssignment> {
    assign_for_encoding(code.encoding(), occ)
}

/// Result of [`reassign_epsilon`].
#[derive(Debug, Clone)]
pub struct Reassignment {
    pub encoding: Encoding,
    /// Non-tree edges whose `ε` was flipped.
    pub flipped: Vec<usize>,
}

/// Solves `A x = b` over GF(2) for square invertible `A`.
fn solve_gf2(mut a: Vec<Vec<bool>>, mut b: Vec<bool>) -> Option<Vec<bool>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col])?;
        a.swap(col, piv);
        b.swap(col, piv);
        let pivot = a[col].clone();
        for r in 0..n {
            if r != col && a[r][col] {
                for (d, s) in a[r].iter_mut().zip(&pivot) {
                    *d ^= s;
                }
                b[r] ^= b[col];
            }
        }
    }
    Some(b)
}

/// Re-signs the code after the loop stabilizers were measured with
/// outcomes `signs` (one per stabilizer generator, in order). `ε` stays on
/// the breadth-first tree at vertex 0; a non-tree edge is flipped exactly
/// when its fundamental loop measured `-1`, which is found by writing the
/// outcomes in the fundamental-loop basis. Afterwards every regenerated
/// stabilizer has value `+1` on the measured state.
pub fn reassign_epsilon(enc: &Encoding, signs: &[i8]) -> Result<Reassignment> {
    let stabs = enc.stabilizers();
    if signs.len() != stabs.len() {
        return Err(Error::size(stabs.len(), signs.len()));
    }
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::Parse("outcomes must be +1 or -1".into()));
    }
    if stabs.iter().any(|s| !matches!(s.kind, StabilizerKind::Loop | StabilizerKind::Winding)) {
        return Err(Error::invariant("epsilon reassignment covers loop stabilizers only"));
    }
    let g = enc.graph();
    let basis = g.cycle_basis();
    if basis.len() != stabs.len() {
        return Err(Error::invariant("stabilizers are not the graph's cycle basis"));
    }
    let tree = g.spanning_tree(0);
    let free: Vec<usize> = (0..g.num_edges()).filter(|&e| !tree.in_tree[e]).collect();
    let rows = basis
        .cycles
        .iter()
        .map(|c| g.cycle_vector(c).map(|v| free.iter().map(|&e| v[e]).collect()))
        .collect::<Result<Vec<Vec<bool>>>>()?;
    let b: Vec<bool> = signs.iter().map(|&s| s < 0).collect();
    let x = solve_gf2(rows, b).ok_or_else(|| Error::invariant("cycle basis is singular"))?;
    let flipped: Vec<usize> = free.iter().zip(&x).filter(|(_, &f)| f).map(|(&e, _)| e).collect();

    let mut parts = enc.clone().into_parts();
    for &e in &flipped {
        parts.graph.flip_epsilon(e);
        parts.edge_ops[e] = parts.edge_ops[e].clone().negated();
    }
    parts.stabilizers = cycle_stabilizers(&parts.graph, &parts.edge_ops)?;
    Ok(Reassignment { encoding: Encoding::from_parts(parts)?, flipped })
}
