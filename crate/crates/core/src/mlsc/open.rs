//! Open-boundary codes. Every boundary vertex gets dangling edges so that
//! all vertices have degree four; one extra stabilizer per dangling edge
//! removes the added degrees of freedom.
//!
//! Families are indexed clockwise from the upward dangling edge at the
//! top-left vertex, matching [`HoppingGraph::dangling`]:
//! `D_α` is the dangling-edge operator, `A_α` the product of edge operators
//! around the boundary plaquette between dangling edges `α - 1` and `α`,
//! `C_α` a `Z`-type conjugate of `D_α`, and `B_α = i A_α C_α`.

use crate::analysis::single_errors_distinct;
use crate::encoding::{cycle_stabilizers, Encoding, EncodingParts, ParitySector, QubitRole, Scheme, Stabilizer, StabilizerKind};
use crate::error::{Error, Result};
use crate::lattice::{Boundary, HoppingGraph};
use crate::mlsc::pattern::{MlscPattern, Offset};
use crate::pauli::{Pauli, PauliString, Phase};

/// Layout for open lattices: the plaquette above the top-left edge is red,
/// so the top row of boundary plaquettes reads green, red, green, ...
pub const OPEN_OFFSET: Offset = Offset { dr: 1, dc: 0 };

/// Largest conjugate the fallback solver looks for.
const MAX_CONJUGATE_WEIGHT: usize = 6;

/// How a conjugate operator was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjugateSource {
    /// `Z` on the dangling edge, on the edge carrying a `Y` there, and on the
    /// neighbouring dangling edge carrying a `Y` on that edge.
    Rule,
    /// Minimal-weight `Z` string from a direct solve.
    Solved,
}

#[derive(Debug, Clone)]
pub struct BoundaryFamilies {
    pub d: Vec<PauliString>,
    pub a: Vec<PauliString>,
    pub c: Vec<PauliString>,
    pub b: Vec<PauliString>,
    pub c_source: Vec<ConjugateSource>,
}

impl BoundaryFamilies {
    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// The boundary commutation ladder, for every `α` (indices mod N):
    /// `{A_α, A_α+1} = 0`, `{C_α, A_α+1} = 0`, `[A_α, C_α+1] = 0`,
    /// `[C_α, C_α+1] = 0`. Returns the first failing relation.
    pub fn check_ladder(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            let b = (a + 1) % n;
            let checks = [
                (self.a[a].symplectic(&self.a[b]), true, "{A_a, A_a+1} = 0"),
                (self.c[a].symplectic(&self.a[b]), true, "{C_a, A_a+1} = 0"),
                (self.a[a].symplectic(&self.c[b]), false, "[A_a, C_a+1] = 0"),
                (self.c[a].symplectic(&self.c[b]), false, "[C_a, C_a+1] = 0"),
            ];
            for (anti, want, name) in checks {
                if anti != want {
                    return Err(Error::invariant(format!("boundary ladder relation {name} fails at a = {a}")));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn hermitian(p: PauliString) -> PauliString {
    if p.is_hermitian() {
        p
    } else {
        let phase = Phase::from_exponent(p.phase().exponent() as i64 + 1);
        p.with_phase(phase)
    }
}

/// Builds an open-boundary code from a pattern on a lattice with dangling
/// edges. Fails if a conjugate cannot be found, if a commutation check
/// fails, or if the chosen layout leaves single-qubit errors with equal
/// syndromes (the corner vertex types matter).
pub fn build_open_boundary(g: &HoppingGraph, pattern: &MlscPattern, offset: Offset) -> Result<(Encoding, BoundaryFamilies)> {
    let (enc, fam) = assemble_open_boundary(g, pattern, offset)?;
    if !single_errors_distinct(&enc) {
        return Err(Error::invariant(format!(
            "layout offset ({}, {}) puts corner vertex types that leave single-qubit errors with equal syndromes",
            offset.dr, offset.dc
        )));
    }
    Ok((enc, fam))
}

/// [`build_open_boundary`] without the final syndrome check.
pub fn assemble_open_boundary(g: &HoppingGraph, pattern: &MlscPattern, offset: Offset) -> Result<(Encoding, BoundaryFamilies)> {
    if g.boundary() != Boundary::Open || g.dangling().is_empty() || g.dims().is_none() {
        return Err(Error::InvalidLattice("open-boundary codes need an open lattice with dangling edges".into()));
    }
    pattern.check()?;
    let n = g.num_qubits();
    let vertex_ops: Vec<PauliString> = (0..g.num_vertices()).map(|v| pattern.vertex_op(g, v, offset)).collect();
    let edge_ops: Vec<PauliString> = (0..g.num_edges()).map(|e| pattern.edge_op(g, e, offset)).collect::<Result<_>>()?;
    let nd = g.dangling().len();
    let d: Vec<PauliString> = (0..nd).map(|i| pattern.dangling_op(g, i, offset)).collect();

    let logicals: Vec<&PauliString> = vertex_ops.iter().chain(&edge_ops).collect();
    for (i, op) in d.iter().enumerate() {
        let v = g.dangling()[i].vertex;
        for (u, eta) in vertex_ops.iter().enumerate() {
            if op.symplectic(eta) != (u == v) {
                return Err(Error::invariant(format!("D_{i} and the vertex operator at {u} have the wrong commutation")));
            }
        }
        for (e, xi) in edge_ops.iter().enumerate() {
            let (a, b) = g.edges()[e];
            if op.symplectic(xi) != (a == v || b == v) {
                return Err(Error::invariant(format!("D_{i} and edge {e} have the wrong commutation")));
            }
        }
        for (j, other) in d.iter().enumerate().take(i) {
            if op.symplectic(other) != (g.dangling()[j].vertex == v) {
                return Err(Error::invariant(format!("D_{i} and D_{j} have the wrong commutation")));
            }
        }
    }

    let a: Vec<PauliString> = (0..nd)
        .map(|i| {
            let prev = (i + nd - 1) % nd;
            let (u, v) = (g.dangling()[prev].vertex, g.dangling()[i].vertex);
            let mut p = d[prev].clone();
            if u != v {
                let e = g.edge_index(u, v).ok_or_else(|| Error::InvalidLattice(format!("dangling edges {prev} and {i} are not on adjacent vertices")))?;
                p.mul_assign_right(&edge_ops[e]);
            }
            p.mul_assign_right(&d[i]);
            Ok(hermitian(p))
        })
        .collect::<Result<_>>()?;
    for (i, ai) in a.iter().enumerate() {
        if let Some(l) = logicals.iter().position(|l| l.symplectic(ai)) {
            return Err(Error::invariant(format!("A_{i} anticommutes with logical operator {l}")));
        }
    }

    let mut c = Vec::with_capacity(nd);
    let mut c_source = Vec::with_capacity(nd);
    for i in 0..nd {
        let q = g.num_edges() + i;
        let rule = conjugate_by_rule(g, &edge_ops, &d, q);
        if is_conjugate(&rule, i, &edge_ops, &d) {
            c.push(rule);
            c_source.push(ConjugateSource::Rule);
        } else {
            let solved = solve_conjugate(g, i, &edge_ops, &d)
                .ok_or_else(|| Error::invariant(format!("no Z-type conjugate for D_{i} up to weight {MAX_CONJUGATE_WEIGHT}")))?;
            c.push(solved);
            c_source.push(ConjugateSource::Solved);
        }
    }

    let b: Vec<PauliString> = (0..nd)
        .map(|i| {
            let mut p = a[i].clone().with_phase(a[i].phase() * Phase::I);
            p.mul_assign_right(&c[i]);
            hermitian(p)
        })
        .collect();

    let fam = BoundaryFamilies { d, a, c, b, c_source };
    fam.check_ladder()?;

    let mut stabilizers = cycle_stabilizers(g, &edge_ops)?;
    for (i, bi) in fam.b.iter().enumerate() {
        for (j, bj) in fam.b.iter().enumerate().take(i) {
            if bi.symplectic(bj) {
                return Err(Error::invariant(format!("B_{i} and B_{j} anticommute")));
            }
        }
        if let Some(s) = stabilizers.iter().find(|s| s.pauli.symplectic(bi)) {
            return Err(Error::invariant(format!("B_{i} anticommutes with {}", s.label)));
        }
    }
    stabilizers.extend(fam.b.iter().enumerate().map(|(i, p)| Stabilizer { label: format!("B{i}"), pauli: p.clone(), kind: StabilizerKind::Boundary }));

    let labels = g.qubit_labels();
    let roles = (0..n).map(|q| if q < g.num_edges() { QubitRole::Edge } else { QubitRole::Dangling }).collect();
    let enc = Encoding::from_parts(EncodingParts {
        scheme: Scheme::Mlsc,
        graph: g.clone(),
        labels,
        roles,
        vertex_ops,
        edge_ops,
        stabilizers,
        parity: ParitySector::Even,
    })?;
    enc.verify()?;
    let expected = g.num_edges() - g.num_vertices() + 1 + nd;
    if enc.group().rank() != expected {
        return Err(Error::invariant(format!("stabilizer rank {} instead of {expected}", enc.group().rank())));
    }
    Ok((enc, fam))
}

/// Whether `p` has an `X` or `Y` on qubit `q`.
fn flips(p: &PauliString, q: usize) -> bool {
    matches!(p.get(q), Pauli::X | Pauli::Y)
}

fn conjugate_by_rule(g: &HoppingGraph, edge_ops: &[PauliString], d: &[PauliString], q: usize) -> PauliString {
    let n = g.num_qubits();
    let mut support = vec![q];
    let owner_of_y = |target: usize, skip: usize| -> Option<usize> {
        (0..n).filter(|&s| s != skip).find(|&s| op_on(s, edge_ops, d, g.num_edges()).get(target) == Pauli::Y)
    };
    if let Some(second) = owner_of_y(q, q) {
        support.push(second);
        let third = (g.num_edges()..n).filter(|&s| s != q).find(|&s| op_on(s, edge_ops, d, g.num_edges()).get(second) == Pauli::Y);
        if let Some(t) = third {
            support.push(t);
        }
    }
    PauliString::from_sparse(n, support.into_iter().map(|s| (s, Pauli::Z)))
}

fn op_on<'a>(q: usize, edge_ops: &'a [PauliString], d: &'a [PauliString], ne: usize) -> &'a PauliString {
    if q < ne {
        &edge_ops[q]
    } else {
        &d[q - ne]
    }
}

pub(crate) fn is_conjugate(c: &PauliString, i: usize, edge_ops: &[PauliString], d: &[PauliString]) -> bool {
    edge_ops.iter().all(|e| !e.symplectic(c)) && d.iter().enumerate().all(|(j, dj)| dj.symplectic(c) == (i == j))
}

/// Smallest `Z` string (lexicographically first among equals) on qubits
/// near dangling edge `i` that conjugates `D_i`.
fn solve_conjugate(g: &HoppingGraph, i: usize, edge_ops: &[PauliString], d: &[PauliString]) -> Option<PauliString> {
    let q = g.num_edges() + i;
    let ne = g.num_edges();
    let mut cand: Vec<usize> = (0..g.num_qubits())
        .filter(|&s| s == q || op_on(s, edge_ops, d, ne).get(q) != Pauli::I || op_on(q, edge_ops, d, ne).get(s) != Pauli::I)
        .collect();
    cand.sort_unstable();
    // constraint rows: one per operator that flips a candidate qubit
    let ops: Vec<(&PauliString, bool)> = edge_ops
        .iter()
        .map(|e| (e, false))
        .chain(d.iter().enumerate().map(|(j, dj)| (dj, j == i)))
        .filter(|(p, _)| cand.iter().any(|&s| flips(p, s)))
        .collect();
    let n = g.num_qubits();
    for w in 1..=MAX_CONJUGATE_WEIGHT.min(cand.len()) {
        let mut idx: Vec<usize> = (0..w).collect();
        loop {
            let ok = ops.iter().all(|(p, want)| idx.iter().filter(|&&k| flips(p, cand[k])).count() % 2 == *want as usize);
            if ok {
                return Some(PauliString::from_sparse(n, idx.iter().map(|&k| (cand[k], Pauli::Z))));
            }
            // next combination
            let mut k = w;
            while k > 0 && idx[k - 1] == cand.len() - w + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..w {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    None
}
