//! Auxiliary-fermion encodings on open square lattices.
//!
//! Every data mode gets an auxiliary mode. Modes are Jordan-Wigner ordered
//! along a row-major snake with data and auxiliary modes interleaved, so a
//! single Majorana is a parity prefix over earlier sites times a local
//! string. Vertical hops carry a gauge factor `i γ_{2j+1} γ_{2k}` whose
//! prefix cancels theirs; the code space is the `+1` eigenspace of the gauges.
//!
//! Sites are numbered along the snake; `f_{2s}, f_{2s+1}` are the data
//! Majoranas of site `s` and `γ_{2s}, γ_{2s+1}` its auxiliary ones.

use serde::{Deserialize, Serialize};

use crate::analysis::{syndrome_against, weight_report, Range, WeightRow};
use crate::encoding::{Encoding, EncodingParts, ParitySector, QubitRole, Scheme, Stabilizer, StabilizerKind};
use crate::error::{Error, Result};
use crate::lattice::{build_lattice, Boundary, HoppingGraph};
use crate::pauli::{Pauli, PauliString, Phase};

/// A single-mode Majorana by global index: `Data(m)` is `f_m`, `Aux(m)` is `γ_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Majorana {
    Data(usize),
    Aux(usize),
}

impl Majorana {
    pub fn site(self) -> usize {
        match self {
            Majorana::Data(m) | Majorana::Aux(m) => m / 2,
        }
    }
}

/// `P · local`, with `P` the product of the parities of the marked sites.
/// Site parities commute and square to one, so products only need the
/// marked set and a sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prefixed {
    pub parity: Vec<bool>,
    pub local: PauliString,
}

impl Prefixed {
    pub fn is_local(&self) -> bool {
        self.parity.iter().all(|&b| !b)
    }

    /// Marked sites as inclusive runs `(a, b)`, i.e. `P_a^b`.
    pub fn intervals(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start = None;
        for (s, &b) in self.parity.iter().chain([&false]).enumerate() {
            match (b, start) {
                (true, None) => start = Some(s),
                (false, Some(a)) => {
                    out.push((a, s - 1));
                    start = None;
                }
                _ => {}
            }
        }
        out
    }

    fn with_phase(mut self, p: Phase) -> Self {
        let ph = self.local.phase() * p;
        self.local.set_phase(ph);
        self
    }
}

/// Majorana images of an auxiliary-fermion code.
#[derive(Debug, Clone)]
pub struct MajoranaMap {
    n_qubits: usize,
    /// Image of `(i f_{2s} f_{2s+1})(i γ_{2s} γ_{2s+1})`.
    site_parity: Vec<PauliString>,
    data: Vec<PauliString>,
    aux: Vec<PauliString>,
    /// Sites `< prefix_end[s]` form the prefix of every Majorana of site `s`.
    prefix_end: Vec<usize>,
}

impl MajoranaMap {
    pub fn num_sites(&self) -> usize {
        self.site_parity.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn single(&self, m: Majorana) -> Prefixed {
        let s = m.site();
        let local = match m {
            Majorana::Data(i) => self.data[i].clone(),
            Majorana::Aux(i) => self.aux[i].clone(),
        };
        Prefixed { parity: (0..self.num_sites()).map(|t| t < self.prefix_end[s]).collect(), local }
    }

    /// `P_a^b` (inclusive).
    pub fn parity(&self, a: usize, b: usize) -> Prefixed {
        Prefixed {
            parity: (0..self.num_sites()).map(|t| a <= t && t <= b).collect(),
            local: PauliString::identity(self.n_qubits),
        }
    }

    pub fn expand_parity(&self, parity: &[bool]) -> PauliString {
        let mut acc = PauliString::identity(self.n_qubits);
        for (s, _) in parity.iter().enumerate().filter(|(_, &b)| b) {
            acc.mul_assign_right(&self.site_parity[s]);
        }
        acc
    }

    /// `(P1 A)(P2 B) = ± P1 P2 A B`, the sign from moving `A` past `P2`.
    pub fn mul(&self, x: &Prefixed, y: &Prefixed) -> Prefixed {
        let mut local = x.local.clone();
        if local.symplectic(&self.expand_parity(&y.parity)) {
            local = local.negated();
        }
        local.mul_assign_right(&y.local);
        Prefixed { parity: x.parity.iter().zip(&y.parity).map(|(a, b)| a ^ b).collect(), local }
    }

    /// `i^k m_1 m_2 ⋯`.
    pub fn product(&self, i_power: i64, ms: &[Majorana]) -> Prefixed {
        let mut acc = Prefixed { parity: vec![false; self.num_sites()], local: PauliString::identity(self.n_qubits) };
        for &m in ms {
            acc = self.mul(&acc, &self.single(m));
        }
        acc.with_phase(Phase::from_exponent(i_power))
    }

    pub fn expand(&self, x: &Prefixed) -> PauliString {
        let mut p = self.expand_parity(&x.parity);
        p.mul_assign_right(&x.local);
        p
    }

    /// `P_a^b ⋯ · local`, parity runs first.
    pub fn render(&self, x: &Prefixed, labels: &[String]) -> String {
        let mut parts: Vec<String> = x.intervals().into_iter().map(|(a, b)| format!("P_{a}^{b}")).collect();
        if !x.local.is_identity_up_to_phase() || parts.is_empty() {
            parts.push(x.local.render_labeled(labels));
        }
        parts.join(" ")
    }

    fn bvc(n_sites: usize) -> Self {
        let n = 2 * n_sites;
        let one = |q: usize, p: Pauli| PauliString::single(n, q, p);
        let two = |a: usize, p: Pauli, b: usize, r: Pauli| PauliString::from_sparse(n, [(a, p), (b, r)]);
        let mut data = Vec::with_capacity(n);
        let mut aux = Vec::with_capacity(n);
        for s in 0..n_sites {
            let (d, a) = (2 * s, 2 * s + 1);
            data.push(one(d, Pauli::X));
            data.push(one(d, Pauli::Y));
            aux.push(two(d, Pauli::Z, a, Pauli::X));
            aux.push(two(d, Pauli::Z, a, Pauli::Y));
        }
        let mut map = MajoranaMap { n_qubits: n, site_parity: vec![], data, aux, prefix_end: (0..n_sites).collect() };
        map.site_parity = (0..n_sites).map(|s| map.local_site_parity(s)).collect();
        map
    }

    fn block(n_sites: usize) -> Self {
        let n = 2 * n_sites;
        let table = |text: &str, q0: usize| -> PauliString {
            let p = PauliString::from_letters(text.trim_start_matches('-')).expect("letters");
            let p = PauliString::from_sparse(n, p.letters().into_iter().map(|(q, l)| (q0 + q, l)));
            if text.starts_with('-') {
                p.negated()
            } else {
                p
            }
        };
        const F: [&str; 4] = ["XYYZ", "-XXZY", "YXXZ", "-YYZX"];
        const G: [&str; 4] = ["YZYY", "-XZXX", "-ZYXY", "-ZXYX"];
        let mut data = Vec::with_capacity(n);
        let mut aux = Vec::with_capacity(n);
        for b in 0..n_sites / 2 {
            for l in 0..4 {
                data.push(table(F[l], 4 * b));
                aux.push(table(G[l], 4 * b));
            }
        }
        let mut map =
            MajoranaMap { n_qubits: n, site_parity: vec![], data, aux, prefix_end: (0..n_sites).map(|s| s - s % 2).collect() };
        map.site_parity = (0..n_sites).map(|s| map.local_site_parity(s)).collect();
        map
    }

    /// Qubits touched by the local parts of the site's Majoranas.
    pub fn site_support(&self, s: usize) -> Vec<usize> {
        let mut out: Vec<usize> =
            [&self.data[2 * s], &self.data[2 * s + 1], &self.aux[2 * s], &self.aux[2 * s + 1]].iter().flat_map(|p| p.support()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn local_site_parity(&self, s: usize) -> PauliString {
        let mut p = PauliString::identity(self.n_qubits).with_phase(Phase::MINUS_ONE);
        for l in [&self.data[2 * s], &self.data[2 * s + 1], &self.aux[2 * s], &self.aux[2 * s + 1]] {
            p.mul_assign_right(l);
        }
        p
    }
}

/// Lattice shape of an auxiliary-fermion code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BvcLayout {
    pub rows: usize,
    pub cols: usize,
}

impl BvcLayout {
    /// Lattice position of each site along the row-major snake.
    pub fn snake(&self) -> Vec<(usize, usize)> {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, if r % 2 == 0 { c } else { self.cols - 1 - c })))
            .collect()
    }

    fn check(&self, scheme: Scheme) -> Result<()> {
        if self.rows == 0 || self.cols == 0 || self.rows * self.cols < 2 {
            return Err(Error::InvalidLattice(format!("{}x{} layout is too small", self.rows, self.cols)));
        }
        if scheme == Scheme::Block && !self.cols.is_multiple_of(2) {
            return Err(Error::InvalidLattice("blocks pair horizontal neighbours, so columns must be even".into()));
        }
        Ok(())
    }
}

/// A built auxiliary-fermion code.
#[derive(Debug, Clone)]
pub struct AuxCode {
    pub layout: BvcLayout,
    pub map: MajoranaMap,
    /// `site_of[v]` for lattice vertex `v`.
    pub site_of: Vec<usize>,
    /// Vertical neighbour pairs `(j, k)`, `j` above `k`, in gauge order.
    pub gauges: Vec<(usize, usize)>,
    encoding: Encoding,
}

impl AuxCode {
    pub fn encoding(&self) -> &Encoding {
        &self.encoding
    }

    pub fn labels(&self) -> &[String] {
        self.encoding.labels()
    }

    /// `i γ_{2j+1} γ_{2k}`.
    pub fn gauge(&self, j: usize, k: usize) -> Prefixed {
        self.map.product(1, &[Majorana::Aux(2 * j + 1), Majorana::Aux(2 * k)])
    }

    /// `i f_{2j+1} f_{2j+2}` between consecutive sites.
    pub fn horizontal_hop(&self, j: usize) -> Prefixed {
        self.map.product(1, &[Majorana::Data(2 * j + 1), Majorana::Data(2 * j + 2)])
    }

    /// `i f_{2j+1} f_{2k}` between vertical neighbours, without its gauge.
    pub fn vertical_hop(&self, j: usize, k: usize) -> Prefixed {
        self.map.product(1, &[Majorana::Data(2 * j + 1), Majorana::Data(2 * k)])
    }

    /// The vertical hop times its gauge.
    pub fn gauged_vertical_hop(&self, j: usize, k: usize) -> Prefixed {
        self.map.mul(&self.vertical_hop(j, k), &self.gauge(j, k))
    }

    /// Products of horizontally adjacent gauges `(j, k)(j + 1, k - 1)`,
    /// whose parity strings cancel down to the two row pairs.
    pub fn gauge_pairs(&self) -> Vec<((usize, usize), (usize, usize), Prefixed)> {
        self.gauges
            .iter()
            .flat_map(|&(j, k)| {
                self.gauges
                    .iter()
                    .find(|&&(a, b)| a == j + 1 && b + 1 == k)
                    .map(|&(a, b)| ((j, k), (a, b), self.map.mul(&self.gauge(j, k), &self.gauge(a, b))))
            })
            .collect()
    }

    /// Comparison-table row. The stabilizer column quotes the local gauge
    /// pairs rather than the individual gauges.
    pub fn weight_row(&self, name: &str, max_weight: usize) -> Result<WeightRow> {
        let mut row = weight_report(&[(name, &self.encoding)], max_weight)?.remove(0);
        row.stabilizer = Range::of(self.gauge_pairs().iter().map(|(_, _, p)| self.map.expand(p).weight()));
        Ok(row)
    }

    /// Row of the lattice holding block `b` (block codes only).
    pub fn block_row(&self, b: usize) -> usize {
        self.layout.snake()[2 * b].0
    }

    pub fn render(&self, x: &Prefixed) -> String {
        self.map.render(x, self.encoding.labels())
    }
}

fn build(layout: BvcLayout, scheme: Scheme) -> Result<AuxCode> {
    layout.check(scheme)?;
    let g: HoppingGraph = build_lattice(layout.rows, layout.cols, Boundary::Open, false)?;
    let snake = layout.snake();
    let n_sites = snake.len();
    let mut site_of = vec![0; n_sites];
    for (s, &(r, c)) in snake.iter().enumerate() {
        site_of[g.vertex_at(r, c).expect("on lattice")] = s;
    }
    let map = if scheme == Scheme::Block { MajoranaMap::block(n_sites) } else { MajoranaMap::bvc(n_sites) };
    let labels: Vec<String> = match scheme {
        Scheme::Block => (0..2 * n_sites).map(|q| format!("q{q}")).collect(),
        _ => (0..n_sites).flat_map(|s| [format!("d{s}"), format!("a{s}")]).collect(),
    };
    let roles: Vec<QubitRole> = match scheme {
        // in a block every qubit mixes data and auxiliary Majoranas
        Scheme::Block => vec![QubitRole::Data; 2 * n_sites],
        _ => (0..n_sites).flat_map(|_| [QubitRole::Data, QubitRole::Auxiliary]).collect(),
    };

    let gauge = |j: usize, k: usize| map.product(1, &[Majorana::Aux(2 * j + 1), Majorana::Aux(2 * k)]);
    let mut gauges = Vec::new();
    let vertex_ops: Vec<PauliString> = (0..g.num_vertices())
        .map(|v| {
            let s = site_of[v];
            map.expand(&map.product(1, &[Majorana::Data(2 * s), Majorana::Data(2 * s + 1)]))
        })
        .collect();
    let mut edge_ops = Vec::with_capacity(g.num_edges());
    for &(a, b) in g.edges() {
        let (sa, sb) = (site_of[a], site_of[b]);
        let mut xi = map.product(1, &[Majorana::Data(2 * sa), Majorana::Data(2 * sb)]);
        let vertical = g.position(a).map(|p| p.1) == g.position(b).map(|p| p.1);
        if vertical {
            let (j, k) = (sa.min(sb), sa.max(sb));
            xi = map.mul(&xi, &gauge(j, k));
            gauges.push((j, k));
        }
        let img = map.expand(&xi);
        let near = [map.site_support(sa), map.site_support(sb)].concat();
        if img.support().iter().any(|q| !near.contains(q)) {
            return Err(Error::invariant(format!("edge ({a}, {b}) keeps a parity string {:?}", xi.intervals())));
        }
        edge_ops.push(img);
    }
    gauges.sort_unstable();
    let stabilizers = gauges
        .iter()
        .map(|&(j, k)| Stabilizer {
            label: format!("G[{j},{k}]"),
            pauli: map.expand(&gauge(j, k)),
            kind: StabilizerKind::Gauge,
        })
        .collect();
    let encoding = Encoding::from_parts(EncodingParts {
        scheme,
        graph: g,
        labels,
        roles,
        vertex_ops,
        edge_ops,
        stabilizers,
        parity: ParitySector::Even,
    })?;
    encoding.verify()?;
    Ok(AuxCode { layout, map, site_of, gauges, encoding })
}

/// The auxiliary-fermion encoding with one data and one auxiliary qubit per site.
pub fn bvc_encode(layout: BvcLayout) -> Result<AuxCode> {
    build(layout, Scheme::Bvc)
}

/// Two neighbouring sites share a block of four qubits.
pub fn block_encode(layout: BvcLayout) -> Result<AuxCode> {
    build(layout, Scheme::Block)
}

/// The defining operators of block `b`: `(qubit, X or Y, i P m1 m2 m3)`.
pub fn block_definitions() -> [(usize, Pauli, [Majorana; 3]); 8] {
    use Majorana::{Aux as G, Data as F};
    [
        (0, Pauli::X, [F(0), F(1), G(1)]),
        (0, Pauli::Y, [F(2), F(3), G(0)]),
        (1, Pauli::X, [F(1), F(2), G(3)]),
        (1, Pauli::Y, [F(0), F(3), G(2)]),
        (2, Pauli::X, [F(2), G(1), G(2)]),
        (2, Pauli::Y, [F(0), G(0), G(3)]),
        (3, Pauli::X, [F(3), G(1), G(3)]),
        (3, Pauli::Y, [F(1), G(0), G(2)]),
    ]
}

fn shift(m: Majorana, by: usize) -> Majorana {
    match m {
        Majorana::Data(i) => Majorana::Data(i + by),
        Majorana::Aux(i) => Majorana::Aux(i + by),
    }
}

/// Checks that the block definitions, evaluated through the inverse
/// relations, give back the block's single-qubit Paulis.
pub fn check_block_definitions(code: &AuxCode) -> Result<()> {
    if code.encoding.scheme() != Scheme::Block {
        return Err(Error::invariant("not a block code"));
    }
    let n = code.map.num_qubits();
    for b in 0..code.map.num_sites() / 2 {
        let prefix = if b == 0 { None } else { Some(code.map.parity(0, 2 * b - 1)) };
        for (q, letter, ms) in block_definitions() {
            let ms: Vec<Majorana> = ms.iter().map(|&m| shift(m, 4 * b)).collect();
            let mut x = code.map.product(1, &[]);
            if let Some(p) = &prefix {
                x = code.map.mul(&x, p);
            }
            x = code.map.mul(&x, &code.map.product(0, &ms));
            let want = PauliString::single(n, 4 * b + q, letter);
            if code.map.expand(&x) != want {
                return Err(Error::invariant(format!("block {b}: definition of {letter:?}_{q} does not invert")));
            }
        }
    }
    Ok(())
}

/// How a single-qubit error behaves in an auxiliary-fermion code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuxErrorClass {
    /// Commutes with every gauge and is not a gauge product.
    UndetectableLogical,
    /// Nontrivial syndrome shared with another single-qubit error.
    Detectable,
    /// Nontrivial syndrome no other single-qubit error has.
    Correctable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxErrorRow {
    pub error: PauliString,
    pub role: QubitRole,
    pub syndrome: Vec<i8>,
    pub class: AuxErrorClass,
}

fn classify(enc: &Encoding, errors: &[PauliString]) -> Result<Vec<AuxErrorRow>> {
    let gens = enc.stabilizer_paulis();
    let synd: Vec<Vec<i8>> = errors.iter().map(|e| syndrome_against(e, &gens)).collect::<Result<_>>()?;
    errors
        .iter()
        .zip(&synd)
        .enumerate()
        .map(|(i, (e, s))| {
            let class = if s.iter().all(|&x| x == 1) {
                if enc.group().contains(e).in_group_up_to_sign() {
                    AuxErrorClass::Correctable
                } else {
                    AuxErrorClass::UndetectableLogical
                }
            } else if synd.iter().enumerate().any(|(j, t)| j != i && t == s) {
                AuxErrorClass::Detectable
            } else {
                AuxErrorClass::Correctable
            };
            let q = e.support()[0];
            Ok(AuxErrorRow { error: e.clone(), role: enc.roles()[q], syndrome: s.clone(), class })
        })
        .collect()
}

/// Classifies every single-qubit Pauli against the gauge operators;
/// "correctable" means no other single-qubit error shares the syndrome.
pub fn bvc_detectability_report(code: &AuxCode) -> Result<Vec<AuxErrorRow>> {
    let n = code.map.num_qubits();
    let errors: Vec<PauliString> = (0..n).flat_map(|q| Pauli::NON_IDENTITY.map(|p| PauliString::single(n, q, p))).collect();
    classify(&code.encoding, &errors)
}

/// The twelve single-qubit errors of block `b`, classified among themselves.
/// The block needs gauge partners both above and below it.
pub fn block_syndrome_report(code: &AuxCode, b: usize) -> Result<Vec<AuxErrorRow>> {
    if code.encoding.scheme() != Scheme::Block || b >= code.map.num_sites() / 2 {
        return Err(Error::invariant(format!("no block {b}")));
    }
    let row = code.block_row(b);
    if row == 0 || row + 1 >= code.layout.rows {
        return Err(Error::InvalidLattice(format!("block {b} sits in boundary row {row}; syndromes need blocks above and below")));
    }
    let n = code.map.num_qubits();
    let errors: Vec<PauliString> =
        (4 * b..4 * b + 4).flat_map(|q| Pauli::NON_IDENTITY.map(|p| PauliString::single(n, q, p))).collect();
    classify(&code.encoding, &errors)
}
