//! Lowering fermionic terms to Pauli sums through an encoding, and the
//! nearest-neighbour gate-set check along a snake path.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::encoding::{Encoding, Scheme};
use crate::mlsc::{COL_PERIOD, ROW_PERIOD};
use crate::error::{Error, Result};
use crate::lattice::{Boundary, HoppingGraph};
use crate::majorana::{expand_term, Coeff, GeneratorTerm, QuadraticGenerator, QuadraticTerm};
use crate::pauli::{Phase, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TermKind {
    /// `n_p`
    Occupation { p: usize },
    /// `n_p n_q`
    PairOccupation { p: usize, q: usize },
    /// `a_j† a_k + a_k† a_j`
    Hopping { j: usize, k: usize },
}

/// A real multiple of a fermionic term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FermionTerm {
    pub kind: TermKind,
    pub coefficient: Rational64,
}

impl FermionTerm {
    pub fn new(kind: TermKind) -> Self {
        FermionTerm { kind, coefficient: Rational64::from_integer(1) }
    }
}

/// `Σ c_i P_i` with every `P_i` at phase `+1` and no repeated strings.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PauliSum {
    pub terms: Vec<(Coeff, PauliString)>,
}

impl PauliSum {
    fn push(&mut self, c: Coeff, p: PauliString) {
        let c = c * Coeff::from_phase(p.phase());
        let p = p.with_phase(Phase::ONE);
        match self.terms.iter_mut().find(|(_, q)| *q == p) {
            Some((acc, _)) => *acc = *acc + c,
            None => self.terms.push((c, p)),
        }
    }

    fn finish(mut self) -> Self {
        self.terms.retain(|(c, _)| !c.is_zero());
        self.terms.sort_by_key(|a| a.1.lex_key());
        self
    }

    /// Real coefficients on Hermitian strings.
    pub fn is_hermitian(&self) -> bool {
        self.terms.iter().all(|(c, _)| c.im == Rational64::from_integer(0))
    }

    /// Largest weight among the non-identity strings.
    pub fn max_weight(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.weight()).max().unwrap_or(0)
    }

    pub fn min_nontrivial_weight(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.weight()).filter(|&w| w > 0).min().unwrap_or(0)
    }

    /// Union of the supports of all strings.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.terms.iter().flat_map(|(_, p)| p.support()).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn render(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(c, p)| format!("({c}) {}", p.render_labeled(labels)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn image_of_product(enc: &Encoding, t: &GeneratorTerm) -> Result<PauliString> {
    let mut acc = PauliString::identity(enc.num_qubits());
    for &f in &t.factors {
        acc.mul_assign_right(&enc.generator_image(f)?);
    }
    Ok(acc)
}

/// Substitutes encoded images into the generator expansion of `term`.
pub fn lower(term: &FermionTerm, enc: &Encoding) -> Result<PauliSum> {
    let g = enc.graph();
    let check_vertex = |v: usize| {
        if v < g.num_vertices() {
            Ok(())
        } else {
            Err(Error::Missing(format!("vertex {v}")))
        }
    };
    let expansion: Vec<GeneratorTerm> = match term.kind {
        TermKind::Occupation { p } => {
            check_vertex(p)?;
            expand_term(QuadraticTerm::Occupation(p), |_, _| true)?
        }
        TermKind::PairOccupation { p, q } => {
            check_vertex(p)?;
            check_vertex(q)?;
            let a = expand_term(QuadraticTerm::Occupation(p), |_, _| true)?;
            let b = expand_term(QuadraticTerm::Occupation(q), |_, _| true)?;
            let mut out = Vec::new();
            for x in &a {
                for y in &b {
                    let mut factors = x.factors.clone();
                    factors.extend(y.factors.iter().copied());
                    out.push(GeneratorTerm { coeff: x.coeff * y.coeff, factors });
                }
            }
            out
        }
        TermKind::Hopping { j, k } => {
            check_vertex(j)?;
            check_vertex(k)?;
            expand_term(QuadraticTerm::Hopping(j, k), |a, b| g.has_edge(a, b))?
        }
    };
    let scale = Coeff { re: term.coefficient, im: Rational64::from_integer(0) };
    let mut sum = PauliSum::default();
    for t in &expansion {
        sum.push(scale * t.coeff, image_of_product(enc, t)?);
    }
    let sum = sum.finish();
    if !sum.is_hermitian() {
        return Err(Error::invariant(format!("lowered {:?} is not Hermitian", term.kind)));
    }
    Ok(sum)
}

/// Pauli image weight of the occupation term at `k` (weight of `η̃_k`).
pub fn occupation_weight(enc: &Encoding, k: usize) -> Result<usize> {
    Ok(lower(&FermionTerm::new(TermKind::Occupation { p: k }), enc)?.max_weight())
}

/// Largest Pauli weight in the lowered hopping term on edge `(j, k)`.
pub fn hopping_weight(enc: &Encoding, j: usize, k: usize) -> Result<usize> {
    Ok(lower(&FermionTerm::new(TermKind::Hopping { j, k }), enc)?.max_weight())
}

/// Generator image helper for callers that only need `ξ̃` or `η̃`.
pub fn generator_image(enc: &Encoding, g: QuadraticGenerator) -> Result<PauliString> {
    enc.generator_image(g)
}

/// Mode order along a Hamiltonian path: `order[p]` is the vertex of mode `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnakePath {
    pub order: Vec<usize>,
}

impl SnakePath {
    /// Checks the path visits every vertex once along graph edges.
    pub fn validate(&self, g: &HoppingGraph) -> Result<()> {
        let mut seen = vec![false; g.num_vertices()];
        if self.order.len() != g.num_vertices() {
            return Err(Error::InvalidLattice(format!(
                "path has {} vertices, graph has {}",
                self.order.len(),
                g.num_vertices()
            )));
        }
        for &v in &self.order {
            if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidLattice(format!("path repeats or leaves the graph at vertex {v}")));
            }
        }
        for w in self.order.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(Error::NotAdjacent(w[0], w[1]));
            }
        }
        Ok(())
    }
}

/// Boustrophedon path: row 0 left to right, row 1 right to left, and so on.
pub fn snake_path(g: &HoppingGraph) -> Result<SnakePath> {
    let d = g.dims().ok_or_else(|| Error::InvalidLattice("snake paths need a lattice".into()))?;
    let mut order = Vec::with_capacity(d.rows * d.cols);
    for r in 0..d.rows {
        if r % 2 == 0 {
            order.extend((0..d.cols).map(|c| r * d.cols + c));
        } else {
            order.extend((0..d.cols).rev().map(|c| r * d.cols + c));
        }
    }
    let path = SnakePath { order };
    path.validate(g)?;
    Ok(path)
}

/// Largest edge-to-edge distance among the qubits in `support`, measured in
/// the graph whose nodes are edges and where two edges are adjacent when they
/// share a vertex. Dangling edges touch their one real vertex.
pub fn edge_diameter(g: &HoppingGraph, support: &[usize]) -> usize {
    let endpoints = |q: usize| -> Vec<usize> {
        if q < g.num_edges() {
            let (a, b) = g.edges()[q];
            vec![a, b]
        } else {
            vec![g.dangling()[q - g.num_edges()].vertex]
        }
    };
    let mut best = 0;
    for (i, &s) in support.iter().enumerate() {
        // vertex BFS from the endpoints of s; edge distance = 1 + min vertex distance
        let mut dist = vec![usize::MAX; g.num_vertices()];
        let mut queue = VecDeque::new();
        for v in endpoints(s) {
            dist[v] = 0;
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            for u in g.neighbors(v) {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        for &t in &support[i + 1..] {
            let d = if t == s { 0 } else { 1 + endpoints(t).iter().map(|&v| dist[v]).min().unwrap() };
            best = best.max(d);
        }
    }
    best
}

/// Bound on the edge diameter of a geometrically local image.
pub const LOCALITY_BOUND: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    OccupationP,
    OccupationQ,
    PairOccupation,
    Hopping,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateStep {
    pub p: usize,
    pub vertices: (usize, usize),
    pub kind: GateKind,
    pub max_weight: usize,
    pub diameter: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GatesetReport {
    pub steps: Vec<GateStep>,
    pub max_weight: BTreeMap<GateKind, usize>,
    pub max_diameter: usize,
    /// Interior steps of the same kind, direction and sublattice share weights.
    pub translation_invariant: bool,
    pub local: bool,
}

impl GatesetReport {
    pub fn passed(&self) -> bool {
        self.local && self.translation_invariant
    }
}

/// Lowers `n_p`, `n_{p+1}`, `n_p n_{p+1}` and the hopping between consecutive
/// path modes, recording weights and edge diameters.
pub fn gateset_check(enc: &Encoding, path: &SnakePath) -> Result<GatesetReport> {
    let g = enc.graph();
    path.validate(g)?;
    let mut steps = Vec::new();
    for (p, w) in path.order.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let terms = [
            (GateKind::OccupationP, TermKind::Occupation { p: a }),
            (GateKind::OccupationQ, TermKind::Occupation { p: b }),
            (GateKind::PairOccupation, TermKind::PairOccupation { p: a, q: b }),
            (GateKind::Hopping, TermKind::Hopping { j: a, k: b }),
        ];
        for (kind, t) in terms {
            let sum = lower(&FermionTerm::new(t), enc)?;
            steps.push(GateStep {
                p,
                vertices: (a, b),
                kind,
                max_weight: sum.max_weight(),
                diameter: edge_diameter(g, &sum.support()),
            });
        }
    }
    let mut max_weight = BTreeMap::new();
    for s in &steps {
        let e = max_weight.entry(s.kind).or_insert(0);
        *e = (*e).max(s.max_weight);
    }
    let max_diameter = steps.iter().map(|s| s.diameter).max().unwrap_or(0);
    let cell = match enc.scheme() {
        Scheme::Mlsc => (ROW_PERIOD, COL_PERIOD),
        _ => (1, 1),
    };
    let translation_invariant = interior_weights_uniform(g, &steps, cell);
    Ok(GatesetReport { local: max_diameter <= LOCALITY_BOUND, steps, max_weight, max_diameter, translation_invariant })
}

/// Interior steps of one kind and direction, starting on the same site of
/// the `cell` unit cell, must share their weight.
fn interior_weights_uniform(g: &HoppingGraph, steps: &[GateStep], cell: (usize, usize)) -> bool {
    let Some(d) = g.dims() else { return true };
    let interior = |v: usize| {
        let (r, c) = (v / d.cols, v % d.cols);
        g.boundary() == Boundary::Torus || (r >= 2 && c >= 2 && r + 2 < d.rows && c + 2 < d.cols)
    };
    let mut seen: HashMap<(GateKind, usize, usize, usize), usize> = HashMap::new();
    for s in steps {
        let (a, b) = s.vertices;
        if !interior(a) || !interior(b) {
            continue;
        }
        let (ra, ca) = (a / d.cols, a % d.cols);
        let dir = g.direction_of(a, g.edge_index(a, b).unwrap()).map_or(0, |x| x.index());
        let key = (s.kind, ra % cell.0, ca % cell.1, dir);
        match seen.get(&key) {
            Some(&w) if w != s.max_weight => return false,
            _ => {
                seen.insert(key, s.max_weight);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bksf::bksf_encode;
    use crate::encoding::ParitySector;
    use crate::lattice::build_lattice;

    #[test]
    fn bksf_weights() {
        let g = build_lattice(4, 4, Boundary::Torus, false).unwrap();
        let enc = bksf_encode(&g, ParitySector::Even).unwrap();
        let occ = lower(&FermionTerm::new(TermKind::Occupation { p: 5 }), &enc).unwrap();
        assert_eq!(occ.terms.len(), 2);
        assert_eq!(occ.max_weight(), 4);
        for &(a, b) in g.edges() {
            let hop = lower(&FermionTerm::new(TermKind::Hopping { j: a, k: b }), &enc).unwrap();
            assert_eq!(hop.terms.len(), 2);
            // one string carries the dressing of both endpoints, the other only part of it
            assert_eq!(hop.max_weight(), 6, "{}", hop.render(enc.labels()));
        }
    }

    #[test]
    fn hopping_needs_an_edge() {
        let g = build_lattice(3, 3, Boundary::Open, false).unwrap();
        let enc = bksf_encode(&g, ParitySector::Even).unwrap();
        assert_eq!(lower(&FermionTerm::new(TermKind::Hopping { j: 0, k: 4 }), &enc), Err(Error::NotAdjacent(0, 4)));
    }

    #[test]
    fn snake_paths() {
        for (r, c, b) in [(2, 2, Boundary::Open), (4, 4, Boundary::Open), (3, 3, Boundary::Torus)] {
            let g = build_lattice(r, c, b, false).unwrap();
            let path = snake_path(&g).unwrap();
            assert_eq!(path.order.len(), r * c);
        }
    }

    #[test]
    fn bksf_gateset_is_local() {
        let g = build_lattice(4, 4, Boundary::Torus, false).unwrap();
        let enc = bksf_encode(&g, ParitySector::Even).unwrap();
        let report = gateset_check(&enc, &snake_path(&g).unwrap()).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.max_weight[&GateKind::Hopping], 6);
    }
}
