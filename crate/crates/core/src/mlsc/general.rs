//! Two ways to turn one loop stabilizer code into another: a linear change
//! of Majorana basis (stabilizers unchanged) and a logical-operator
//! modification that also rewrites the stabilizers.

use crate::encoding::{cycle_stabilizers, loop_image, Encoding, StabilizerKind};
use crate::error::{Error, Result};
use crate::lattice::HoppingGraph;
use crate::majorana::{commutation_sign, MajoranaOperator, QuadraticGenerator};
use crate::mlsc::open::hermitian;
use crate::pauli::{PauliString, Phase};

/// New single-mode Majorana operators written in terms of the old ones.
/// Row `m` is `γ'_m`; its phase makes it Hermitian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajoranaTransform {
    rows: Vec<MajoranaOperator>,
}

/// Phase that makes `f_A` Hermitian.
fn hermitian_phase(weight: usize) -> Phase {
    if (weight * weight.saturating_sub(1) / 2) % 2 == 1 {
        Phase::I
    } else {
        Phase::ONE
    }
}

impl MajoranaTransform {
    /// From a 0/1 matrix over `2n` Majorana indices.
    pub fn from_matrix(m: &[Vec<u8>]) -> Result<Self> {
        let size = m.len();
        if !size.is_multiple_of(2) {
            return Err(Error::invariant("a Majorana transform needs an even number of rows"));
        }
        let n_modes = size / 2;
        let mut rows = Vec::with_capacity(size);
        for (i, row) in m.iter().enumerate() {
            if row.len() != size {
                return Err(Error::invariant(format!("row {i} has {} entries, expected {size}", row.len())));
            }
            let support: Vec<usize> = row.iter().enumerate().filter(|(_, &b)| b != 0).map(|(k, _)| k).collect();
            rows.push(MajoranaOperator::from_product(n_modes, hermitian_phase(support.len()), &support));
        }
        Ok(MajoranaTransform { rows })
    }

    pub fn identity(n_modes: usize) -> Self {
        MajoranaTransform { rows: (0..2 * n_modes).map(|k| MajoranaOperator::single(n_modes, k)).collect() }
    }

    /// Relabelling: `γ'_m = γ_{perm[m]}`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::invariant("not a permutation"));
            }
        }
        Self::from_matrix(&perm.iter().map(|&p| (0..perm.len()).map(|k| (k == p) as u8).collect()).collect::<Vec<_>>())
    }

    /// The four-Majorana transformation on two fermionic modes.
    pub fn four_majorana() -> Self {
        Self::from_matrix(&[vec![1, 1, 1, 0], vec![0, 1, 1, 1], vec![1, 0, 1, 1], vec![1, 1, 0, 1]]).expect("4x4")
    }

    /// Acts with `self` on the Majorana indices `targets` of a larger system
    /// and as the identity elsewhere.
    pub fn embed(&self, n_modes: usize, targets: &[usize]) -> Result<Self> {
        if targets.len() != self.rows.len() {
            return Err(Error::size(self.rows.len(), targets.len()));
        }
        if targets.iter().any(|&t| t >= 2 * n_modes) {
            return Err(Error::invariant("target index out of range"));
        }
        let mut m: Vec<Vec<u8>> = (0..2 * n_modes).map(|i| (0..2 * n_modes).map(|k| (i == k) as u8).collect()).collect();
        for (i, row) in self.matrix().iter().enumerate() {
            let mut full = vec![0u8; 2 * n_modes];
            for (k, &b) in row.iter().enumerate() {
                full[targets[k]] = b;
            }
            m[targets[i]] = full;
        }
        Self::from_matrix(&m)
    }

    pub fn n_modes(&self) -> usize {
        self.rows.len() / 2
    }

    pub fn rows(&self) -> &[MajoranaOperator] {
        &self.rows
    }

    pub fn matrix(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| {
                let s = r.support();
                (0..self.rows.len()).map(|k| s.contains(&k) as u8).collect()
            })
            .collect()
    }

    /// Rows are pairwise orthogonal over GF(2), share one weight parity,
    /// square to the identity and mutually anticommute.
    pub fn check(&self) -> Result<()> {
        let parity = self.rows.first().map_or(0, |r| r.weight() % 2);
        for (i, r) in self.rows.iter().enumerate() {
            if r.weight() % 2 != parity {
                return Err(Error::invariant(format!("row {i} has weight {} of the other parity", r.weight())));
            }
            let sq = r.product(r)?;
            if !sq.is_scalar() || sq.phase() != Phase::ONE {
                return Err(Error::invariant(format!("row {i} does not square to the identity")));
            }
        }
        let m = self.matrix();
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                let dot: u8 = m[i].iter().zip(&m[j]).map(|(a, b)| a & b).sum::<u8>() % 2;
                if dot != 0 {
                    return Err(Error::invariant(format!("rows {i} and {j} are not orthogonal")));
                }
                if commutation_sign(&self.rows[i], &self.rows[j])? != -1 {
                    return Err(Error::invariant(format!("rows {i} and {j} commute")));
                }
            }
        }
        Ok(())
    }
}

/// Pauli images of even Majorana monomials under an encoding, built from
/// `γ_{2r} γ_m` along a BFS tree at `r = 0`.
struct MonomialImages {
    n_modes: usize,
    /// Image of `γ_0 γ_m` for every Majorana index `m`.
    w: Vec<PauliString>,
}

impl MonomialImages {
    fn new(enc: &Encoding) -> Result<Self> {
        let g = enc.graph();
        let nv = g.num_vertices();
        let n = enc.num_qubits();
        let tree = g.spanning_tree(0);
        if tree.order.len() != nv {
            return Err(Error::Disconnected);
        }
        let mut w = vec![PauliString::identity(n); 2 * nv];
        for &v in &tree.order[1..] {
            let (p, _) = tree.parent[v].expect("tree vertex");
            // γ_0 γ_2v = γ_0 γ_2p · (-i) ξ_pv
            let xi = enc.edge_op(p, v)?;
            let ph = xi.phase() * Phase::MINUS_I;
            w[2 * v] = w[2 * p].multiply(&xi.with_phase(ph))?;
        }
        for v in 0..nv {
            // γ_2v γ_2v+1 = -i η_v
            let eta = enc.vertex_op(v);
            w[2 * v + 1] = w[2 * v].multiply(&eta.clone().with_phase(eta.phase() * Phase::MINUS_I))?;
        }
        Ok(MonomialImages { n_modes: nv, w })
    }

    fn image(&self, m: &MajoranaOperator) -> Result<PauliString> {
        if !m.weight().is_multiple_of(2) {
            return Err(Error::invariant("only even Majorana monomials have Pauli images"));
        }
        let mut abs = MajoranaOperator::identity(self.n_modes);
        let mut img = PauliString::identity(self.w[0].num_qubits());
        for k in m.support() {
            abs = abs.product(&MajoranaOperator::from_product(self.n_modes, Phase::ONE, &[0, k]))?;
            img.mul_assign_right(&self.w[k]);
        }
        // abs = a f_S and m = c f_S, so m = (c / a) abs
        let phase = img.phase() * m.phase() * abs.phase().conj();
        Ok(img.with_phase(phase))
    }
}

/// Rewrites the vertex and edge images in a new Majorana basis. Edge images
/// off the BFS tree are fixed by requiring each fundamental loop to keep its
/// old stabilizer, so the stabilizers are unchanged.
pub fn apply_majorana_transform(enc: &Encoding, m: &MajoranaTransform) -> Result<Encoding> {
    m.check()?;
    let g: &HoppingGraph = enc.graph();
    let nv = g.num_vertices();
    if m.n_modes() != nv {
        return Err(Error::size(nv, m.n_modes()));
    }
    let img = MonomialImages::new(enc)?;
    let rows = m.rows();
    let quad = |a: usize, b: usize| -> Result<PauliString> {
        let op = MajoranaOperator::identity(nv).with_phase(Phase::I).product(&rows[a])?.product(&rows[b])?;
        img.image(&op)
    };
    let vertex_ops: Vec<PauliString> = (0..nv).map(|v| quad(2 * v, 2 * v + 1)).collect::<Result<_>>()?;
    let mut edge_ops: Vec<PauliString> = g.edges().iter().map(|&(a, b)| quad(2 * a, 2 * b)).collect::<Result<_>>()?;
    let tree = g.spanning_tree(0);
    for e in (0..g.num_edges()).filter(|&e| !tree.in_tree[e]) {
        let cycle = tree.fundamental_cycle(g, e);
        let old = enc.loop_stabilizer(&cycle)?;
        let new = loop_image(g, &edge_ops, &cycle)?;
        let fix = old.multiply(&new.adjoint())?;
        edge_ops[e] = edge_ops[e].multiply(&fix)?;
    }
    let mut parts = enc.clone().into_parts();
    parts.vertex_ops = vertex_ops;
    parts.edge_ops = edge_ops;
    let out = Encoding::from_parts(parts)?;
    out.verify()?;
    Ok(out)
}

/// One step of logical modification: `target ↦ target·Δ`, every other
/// generator image anticommuting with `Δ` is multiplied by the first
/// stabilizer `S` anticommuting with `Δ`, and loop stabilizers are rebuilt
/// from the new edge images. Non-loop stabilizers are kept as they are.
pub fn modify_logical(enc: &Encoding, delta: &PauliString, target: QuadraticGenerator) -> Result<Encoding> {
    if delta.num_qubits() != enc.num_qubits() {
        return Err(Error::size(enc.num_qubits(), delta.num_qubits()));
    }
    let s = enc
        .stabilizers()
        .iter()
        .find(|s| s.pauli.symplectic(delta))
        .ok_or_else(|| Error::invariant("delta commutes with every stabilizer, so it is a logical operator"))?
        .pauli
        .clone();
    let g = enc.graph();
    let target_slot = match target {
        QuadraticGenerator::Vertex(k) if k < g.num_vertices() => Slot::Vertex(k),
        QuadraticGenerator::Edge(j, k) => Slot::Edge(g.edge_index(j, k).ok_or(Error::NotAdjacent(j, k))?),
        QuadraticGenerator::Vertex(k) => return Err(Error::Missing(format!("vertex {k}"))),
    };
    let update = |slot: Slot, p: &PauliString| -> Result<PauliString> {
        if slot == target_slot {
            Ok(hermitian(p.multiply(delta)?))
        } else if p.symplectic(delta) {
            p.multiply(&s)
        } else {
            Ok(p.clone())
        }
    };
    let vertex_ops: Vec<PauliString> =
        enc.vertex_ops().iter().enumerate().map(|(k, p)| update(Slot::Vertex(k), p)).collect::<Result<_>>()?;
    let edge_ops: Vec<PauliString> =
        enc.edge_ops().iter().enumerate().map(|(e, p)| update(Slot::Edge(e), p)).collect::<Result<_>>()?;

    let mut stabilizers = cycle_stabilizers(g, &edge_ops)?;
    stabilizers.extend(enc.stabilizers().iter().filter(|s| !matches!(s.kind, StabilizerKind::Loop | StabilizerKind::Winding)).cloned());
    let mut parts = enc.clone().into_parts();
    parts.vertex_ops = vertex_ops;
    parts.edge_ops = edge_ops;
    parts.stabilizers = stabilizers;
    let out = Encoding::from_parts(parts).map_err(|e| Error::invariant(format!("modified code is inconsistent: {e}")))?;
    out.verify().map_err(|e| Error::invariant(format!("modified code fails the algebra check: {e}")))?;
    if out.group().rank() != enc.group().rank() {
        return Err(Error::invariant(format!("stabilizer rank changed from {} to {}", enc.group().rank(), out.group().rank())));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Vertex(usize),
    Edge(usize),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bksf::bksf_encode;
    use crate::encoding::ParitySector;
    use crate::lattice::{build_lattice, Boundary};
    use crate::pauli::Pauli;

    fn bksf(n: usize) -> Encoding {
        bksf_encode(&build_lattice(n, n, Boundary::Torus, false).unwrap(), ParitySector::Even).unwrap()
    }

    #[test]
    fn m4_rows_are_majoranas() {
        let m = MajoranaTransform::four_majorana();
        m.check().unwrap();
        for (i, a) in m.rows().iter().enumerate() {
            assert!(a.is_hermitian());
            assert_eq!(a.product(a).unwrap(), MajoranaOperator::identity(2));
            for b in &m.rows()[i + 1..] {
                assert_eq!(commutation_sign(a, b).unwrap(), -1);
            }
        }
    }

    #[test]
    fn bad_matrices_are_rejected() {
        // mixed parity
        assert!(MajoranaTransform::from_matrix(&[vec![1, 1, 1, 0], vec![0, 1, 0, 0], vec![1, 0, 1, 1], vec![1, 1, 0, 1]]).unwrap().check().is_err());
        // even rows can be orthogonal but then they commute
        let even = MajoranaTransform::from_matrix(&[vec![1, 1, 0, 0], vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 1, 1]]).unwrap();
        assert!(even.check().is_err());
    }

    #[test]
    fn identity_transform_is_a_no_op() {
        let enc = bksf(4);
        let out = apply_majorana_transform(&enc, &MajoranaTransform::identity(16)).unwrap();
        assert_eq!(out.vertex_ops(), enc.vertex_ops());
        assert_eq!(out.edge_ops(), enc.edge_ops());
    }

    #[test]
    fn permutation_keeps_stabilizers() {
        let enc = bksf(4);
        let mut perm: Vec<usize> = (0..32).collect();
        perm.swap(0, 1);
        perm.swap(6, 7);
        let out = apply_majorana_transform(&enc, &MajoranaTransform::permutation(&perm).unwrap()).unwrap();
        assert_eq!(out.stabilizer_paulis(), enc.stabilizer_paulis());
        // swapping the two Majoranas of vertex 0 flips the sign of eta_0
        assert_eq!(out.vertex_op(0), &enc.vertex_op(0).clone().negated());
    }

    #[test]
    fn local_m4_keeps_stabilizers() {
        let enc = bksf(4);
        let m = MajoranaTransform::four_majorana().embed(16, &[0, 1, 2, 3]).unwrap();
        let out = apply_majorana_transform(&enc, &m).unwrap();
        assert_eq!(out.stabilizer_paulis(), enc.stabilizer_paulis());
        assert_ne!(out.vertex_ops(), enc.vertex_ops());
    }

    #[test]
    fn delta_in_centralizer_is_rejected() {
        let enc = bksf(4);
        let s = enc.stabilizers()[0].pauli.clone();
        assert!(modify_logical(&enc, &s, QuadraticGenerator::Vertex(0)).is_err());
    }

    #[test]
    fn z_on_an_edge_keeps_other_syndromes() {
        let enc = bksf(4);
        let g = enc.graph().clone();
        let e = 5;
        let (a, b) = g.edges()[e];
        let delta = PauliString::single(enc.num_qubits(), e, Pauli::Z);
        let out = modify_logical(&enc, &delta, QuadraticGenerator::edge(a, b).0).unwrap();
        assert_eq!(out.group().rank(), enc.group().rank());
        let syn = |en: &Encoding, p: &PauliString| -> Vec<bool> { en.stabilizers().iter().map(|s| s.pauli.symplectic(p)).collect() };
        for q in (0..enc.num_qubits()).filter(|&q| q != e) {
            for l in Pauli::NON_IDENTITY {
                let p = PauliString::single(enc.num_qubits(), q, l);
                assert_eq!(syn(&enc, &p), syn(&out, &p), "qubit {q} {l:?}");
            }
        }
    }
}
