//! The superfast encoding: one qubit per edge, vertex operators as
//! `Z` products over incident edges, edge operators as an `X` dressed by the
//! `Z`s of the edges ordered before it at both endpoints.

use crate::encoding::{cycle_stabilizers, Encoding, EncodingParts, ParitySector, QubitRole, Scheme};
use crate::error::{Error, Result};
use crate::lattice::{Boundary, Direction, HoppingGraph};
use crate::pauli::{Pauli, PauliString};

/// `η̃_k = ∏ Z` over the edges at `k`.
pub fn vertex_image(g: &HoppingGraph, k: usize) -> PauliString {
    let n = g.num_qubits();
    PauliString::from_sparse(n, g.incident(k).iter().filter(|&&q| q < g.num_edges()).map(|&q| (q, Pauli::Z)))
}

/// `ξ̃` of edge `e` in its stored orientation `j → k`.
pub fn edge_image(g: &HoppingGraph, e: usize) -> PauliString {
    let (j, k) = g.edges()[e];
    let mut p = PauliString::single(g.num_qubits(), e, Pauli::X);
    for v in [k, j] {
        for &q in g.incident(v).iter().take_while(|&&q| q != e) {
            if q < g.num_edges() {
                p.set(q, Pauli::Z);
            }
        }
    }
    if g.edge_epsilon(e) < 0 {
        p = p.negated();
    }
    p
}

/// Encodes `g` with its current orderings and `ε`. In the odd sector the
/// sign of `η̃_0` is flipped.
pub fn bksf_encode(g: &HoppingGraph, sector: ParitySector) -> Result<Encoding> {
    if !g.dangling().is_empty() {
        return Err(Error::InvalidLattice("the superfast encoding has no dangling edges".into()));
    }
    let mut vertex_ops: Vec<PauliString> = (0..g.num_vertices()).map(|k| vertex_image(g, k)).collect();
    if sector == ParitySector::Odd {
        vertex_ops[0] = vertex_ops[0].clone().negated();
    }
    let edge_ops: Vec<PauliString> = (0..g.num_edges()).map(|e| edge_image(g, e)).collect();
    let stabilizers = cycle_stabilizers(g, &edge_ops)?;
    Encoding::from_parts(EncodingParts {
        scheme: Scheme::Bksf,
        labels: g.qubit_labels(),
        roles: vec![QubitRole::Edge; g.num_qubits()],
        vertex_ops,
        edge_ops,
        stabilizers,
        parity: sector,
        graph: g.clone(),
    })
}

/// All 24 orders of the four directions, in lexicographic order.
pub fn direction_permutations() -> Vec<[Direction; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in Direction::ALL {
        for b in Direction::ALL {
            for c in Direction::ALL {
                for d in Direction::ALL {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j])) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Translation-invariant orderings whose interior plaquette stabilizer is
/// `-X_mn Y_nq Y_qp X_pm Z_jm Z_lm`.
pub fn orders_with_standard_plaquette() -> Vec<[Direction; 4]> {
    direction_permutations()
        .into_iter()
        .filter(|order| {
            let mut g = HoppingGraph::build_lattice(4, 4, Boundary::Torus, false).expect("valid lattice");
            g.apply_direction_order(order).expect("lattice");
            let enc = bksf_encode(&g, ParitySector::Even).expect("encodable");
            let s = enc.loop_stabilizer(&g.plaquette(1, 1)).expect("closed");
            s == standard_plaquette(&g, 1, 1)
        })
        .collect()
}

/// `-X_mn Y_nq Y_qp X_pm Z_jm Z_lm` for the plaquette with top-left `(r, c)`
/// on a torus, `j` above `m` and `l` left of `m`.
pub fn standard_plaquette(g: &HoppingGraph, r: usize, c: usize) -> PauliString {
    let cyc = g.plaquette(r, c);
    let (m, n, q, p) = (cyc[0], cyc[1], cyc[2], cyc[3]);
    let e = |a, b| g.edge_index(a, b).expect("plaquette edge");
    let mut entries = vec![(e(m, n), Pauli::X), (e(n, q), Pauli::Y), (e(q, p), Pauli::Y), (e(p, m), Pauli::X)];
    for d in [Direction::Up, Direction::Left] {
        if let Some(x) = g.qubit_towards(m, d) {
            entries.push((x, Pauli::Z));
        }
    }
    PauliString::from_sparse(g.num_qubits(), entries).negated()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Membership;
    use crate::lattice::DEFAULT_BKSF_ORDER;

    #[test]
    fn default_order_is_first_match() {
        let found = orders_with_standard_plaquette();
        // the reversed order gives the same plaquettes
        assert_eq!(found, vec![DEFAULT_BKSF_ORDER, [Direction::Down, Direction::Left, Direction::Up, Direction::Right]]);
    }

    #[test]
    fn single_plaquette_with_cycle_ordering() {
        let mut g = HoppingGraph::build_lattice(2, 2, Boundary::Open, false).unwrap();
        // i=0 j=1 k=3 l=2 clockwise
        g.set_cycle_ordering(&[0, 1, 3, 2, 0]).unwrap();
        let enc = bksf_encode(&g, ParitySector::Even).unwrap();
        let s = &enc.stabilizers()[0].pauli;
        let yyyy = PauliString::from_sparse(4, (0..4).map(|q| (q, Pauli::Y))).negated();
        assert_eq!(s, &yyyy);
        enc.verify().unwrap();
    }

    #[test]
    fn parity_relation() {
        let g = HoppingGraph::build_lattice(3, 4, Boundary::Torus, false).unwrap();
        for sector in [ParitySector::Even, ParitySector::Odd] {
            let enc = bksf_encode(&g, sector).unwrap();
            let mut acc = PauliString::identity(g.num_qubits());
            for v in enc.vertex_ops() {
                acc.mul_assign_right(v);
            }
            let expect = match sector {
                ParitySector::Even => PauliString::identity(g.num_qubits()),
                ParitySector::Odd => PauliString::identity(g.num_qubits()).negated(),
            };
            assert_eq!(acc, expect);
            enc.verify().unwrap();
        }
    }

    #[test]
    fn loop_invariant_under_rotation_and_composition() {
        let g = HoppingGraph::build_lattice(4, 4, Boundary::Torus, false).unwrap();
        let enc = bksf_encode(&g, ParitySector::Even).unwrap();
        let a = g.plaquette(1, 1);
        let rotated: Vec<usize> = a[1..].iter().chain(&a[1..2]).copied().collect();
        assert_eq!(enc.loop_stabilizer(&a).unwrap(), enc.loop_stabilizer(&rotated).unwrap());

        // (1,1)-(1,2)-(1,3)-(2,3)-(2,2)-(2,1)-(1,1) encloses two plaquettes
        let big = [5, 6, 7, 11, 10, 9, 5];
        let prod = &enc.loop_stabilizer(&a).unwrap() * &enc.loop_stabilizer(&g.plaquette(1, 2)).unwrap();
        assert_eq!(enc.loop_stabilizer(&big).unwrap(), prod);
        assert_eq!(enc.group().contains(&prod), Membership::Member);
    }
}
