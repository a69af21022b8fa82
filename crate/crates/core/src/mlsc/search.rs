//! Constrained search for period-2 patterns with distance three.
//!
//! Vertex operators are three `Z`s (one incident edge omitted per vertex
//! type); edge operators carry `X` on their own edge and letters from
//! `{I, Y, Z}` on the six other edges at their endpoints. Local checks run on
//! an 8×8 torus, which is large enough that no two supports wrap into each
//! other; complete candidates are then validated on the target torus.

use std::sync::Mutex;

use rayon::prelude::*;

use crate::analysis::{distance_up_to, single_errors_distinct, syndrome, DistanceVerdict};
use crate::error::{Error, Result};
use crate::lattice::{Boundary, Direction, HoppingGraph};
use crate::mlsc::open::{build_open_boundary, OPEN_OFFSET};
use crate::mlsc::pattern::{vertex_type, EdgePattern, MlscPattern, Offset, COL_PERIOD, EDGE_DIRS, ROW_PERIOD};
use crate::pauli::{Pauli, PauliString};

/// Goals for [`derive_pattern`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeriveTargets {
    /// Every generalized edge operator has at least this weight.
    pub min_generalized_weight: usize,
    /// Both strings of every lowered hopping term have at most this weight.
    pub max_hopping_weight: usize,
    /// Allowed plaquette stabilizer weights.
    pub stabilizer_weights: (usize, usize),
    /// The red plaquette stabilizer is `±Z Z Z Z` on its own edges.
    pub red_zzzz: bool,
    /// Some edge operator has the form `Z X Y Z`.
    pub zxyz_edge: bool,
    /// Number of plaquettes flagged by `X` and by `Z` on each edge at the
    /// red plaquette's upper-left corner, edges in [`Direction::ALL`] order.
    pub corner_profile: Option<[usize; 8]>,
    /// The pattern also yields a valid open-boundary code on a 4×4 lattice
    /// with dangling edges in the [`OPEN_OFFSET`] layout.
    pub open_4x4: bool,
}

impl Default for DeriveTargets {
    fn default() -> Self {
        DeriveTargets {
            min_generalized_weight: 3,
            max_hopping_weight: 4,
            stabilizer_weights: (4, 10),
            red_zzzz: true,
            zxyz_edge: true,
            corner_profile: Some([4, 2, 4, 2, 2, 2, 2, 2]),
            open_4x4: true,
        }
    }
}

/// Counters reported by the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub vertex_choices: usize,
    pub local_solutions: usize,
    pub validated: usize,
}

const LETTERS: [Pauli; 3] = [Pauli::I, Pauli::Y, Pauli::Z];
const WORK: usize = 8;

struct Workspace {
    g: HoppingGraph,
    /// Per edge type `k = 2t + i`: representative edge and all instances.
    rep: [usize; 8],
    instances: [Vec<usize>; 8],
}

fn edge_type(g: &HoppingGraph, e: usize) -> usize {
    let (a, _) = g.edges()[e];
    let (r, c) = g.position(a).unwrap();
    let t = vertex_type(r as isize, c as isize, Offset::default());
    let dir = g.direction_of(a, e).unwrap();
    2 * t + (dir == Direction::Down) as usize
}

impl Workspace {
    fn new() -> Self {
        let g = HoppingGraph::build_lattice(WORK, WORK, Boundary::Torus, false).expect("lattice");
        let mut instances: [Vec<usize>; 8] = Default::default();
        for e in 0..g.num_edges() {
            instances[edge_type(&g, e)].push(e);
        }
        let mut rep = [0; 8];
        for (k, r) in rep.iter_mut().enumerate() {
            let t = k / 2;
            let v = g.vertex_at(4 + t, 4).unwrap();
            *r = g.qubit_towards(v, EDGE_DIRS[k % 2]).unwrap();
        }
        Workspace { g, rep, instances }
    }

    fn share_one(&self, e: usize, f: usize) -> bool {
        let (a, b) = self.g.edges()[e];
        let (c, d) = self.g.edges()[f];
        e != f && ((a == c) as u8 + (a == d) as u8 + (b == c) as u8 + (b == d) as u8) == 1
    }
}

/// Edge pattern number `code` (base-3 digits over the six free slots).
fn edge_pattern(k: usize, code: usize) -> EdgePattern {
    let dir = EDGE_DIRS[k % 2];
    let mut tail = [Pauli::I; 4];
    let mut head = [Pauli::I; 4];
    tail[dir.index()] = Pauli::X;
    head[dir.opposite().index()] = Pauli::X;
    let mut code = code;
    for slot in Direction::ALL.iter().filter(|&&d| d != dir) {
        tail[slot.index()] = LETTERS[code % 3];
        code /= 3;
    }
    for slot in Direction::ALL.iter().filter(|&&d| d != dir.opposite()) {
        head[slot.index()] = LETTERS[code % 3];
        code /= 3;
    }
    EdgePattern { negative: false, tail, head }
}

fn pattern_string(g: &HoppingGraph, e: usize, pat: &EdgePattern) -> PauliString {
    let (a, b) = g.edges()[e];
    let mut p = PauliString::identity(g.num_qubits());
    for (v, letters) in [(a, &pat.tail), (b, &pat.head)] {
        for d in Direction::ALL {
            if letters[d.index()] != Pauli::I {
                p.set(g.qubit_towards(v, d).unwrap(), letters[d.index()]);
            }
        }
    }
    p
}

struct Candidate {
    code: usize,
    /// String at every instance of the type, in instance order.
    strings: Vec<PauliString>,
    at_rep: PauliString,
}

struct Level {
    candidates: Vec<Candidate>,
}

fn eta_choices() -> Vec<[Direction; 4]> {
    let mut out = Vec::with_capacity(256);
    for i in 0..256usize {
        out.push([0, 1, 2, 3].map(|t| Direction::ALL[(i >> (2 * (3 - t))) & 3]));
    }
    out
}

fn weight_ok(p: &PauliString, lo: usize, hi: usize) -> bool {
    (lo..=hi).contains(&p.weight())
}

/// Everything a single vertex choice needs; returns the first complete
/// candidate (in pattern order) that passes `accept`.
fn search_vertex_choice(
    ws: &Workspace,
    omit: [Direction; 4],
    targets: &DeriveTargets,
    accept: &(dyn Fn(&MlscPattern) -> bool + Sync),
) -> (Option<MlscPattern>, SearchStats) {
    let g = &ws.g;
    let mut stats = SearchStats { vertex_choices: 1, ..Default::default() };
    let skeleton = MlscPattern { eta_omit: omit, edges: [[edge_pattern(0, 0), edge_pattern(1, 0)]; 4] };
    let etas: Vec<PauliString> = (0..g.num_vertices()).map(|v| skeleton.vertex_op(g, v, Offset::default())).collect();

    let mut levels: Vec<Level> = Vec::with_capacity(8);
    for k in 0..8 {
        let rep = ws.rep[k];
        let (a, b) = g.edges()[rep];
        let mut candidates = Vec::new();
        for code in 0..729 {
            let pat = edge_pattern(k, code);
            let xi = pattern_string(g, rep, &pat);
            if (0..g.num_vertices()).any(|v| etas[v].symplectic(&xi) != (v == a || v == b)) {
                continue;
            }
            let lo = targets.min_generalized_weight;
            let xa = &etas[a] * &xi;
            let xb = &xi * &etas[b];
            let xab = &xa * &etas[b];
            if xi.weight() < lo || xab.weight() < lo {
                continue;
            }
            if !weight_ok(&xa, lo, targets.max_hopping_weight) || !weight_ok(&xb, lo, targets.max_hopping_weight) {
                continue;
            }
            let strings: Vec<PauliString> = ws.instances[k].iter().map(|&f| pattern_string(g, f, &pat)).collect();
            let self_ok = ws.instances[k]
                .iter()
                .zip(&strings)
                .all(|(&f, s)| f == rep || xi.symplectic(s) == ws.share_one(rep, f));
            if self_ok {
                candidates.push(Candidate { code, strings, at_rep: xi });
            }
        }
        if candidates.is_empty() {
            return (None, stats);
        }
        levels.push(Level { candidates });
    }

    // compat[a][b][i] = bitset over candidates of type b compatible with candidate i of type a
    let words = |n: usize| n.div_ceil(64);
    let mut compat: Vec<Vec<Vec<Vec<u64>>>> = vec![vec![Vec::new(); 8]; 8];
    for ka in 0..8 {
        for kb in 0..8 {
            if ka == kb {
                continue;
            }
            let rep = ws.rep[ka];
            let nb = levels[kb].candidates.len();
            compat[ka][kb] = levels[ka]
                .candidates
                .iter()
                .map(|ca| {
                    let mut bits = vec![0u64; words(nb)];
                    for (j, cb) in levels[kb].candidates.iter().enumerate() {
                        let ok = ws.instances[kb]
                            .iter()
                            .zip(&cb.strings)
                            .all(|(&f, s)| ca.at_rep.symplectic(s) == ws.share_one(rep, f));
                        if ok {
                            bits[j / 64] |= 1 << (j % 64);
                        }
                    }
                    bits
                })
                .collect();
        }
    }

    let red = red_plaquette(g);
    let mut chosen = [usize::MAX; 8];
    let mut result = None;
    backtrack(ws, &levels, &compat, &red, targets, accept, omit, 0, &mut chosen, &mut stats, &mut result);
    (result, stats)
}

struct RedPlaquette {
    // (edge type, instance index) for top, left, right, bottom; all on the plaquette at (2, 2)
    edges: [(usize, usize); 4],
    own: [usize; 4],
    /// Edge types in assignment order, the red plaquette's first.
    order: [usize; 8],
}

fn red_plaquette(g: &HoppingGraph) -> RedPlaquette {
    let cyc = g.plaquette(4, 4);
    let (m, n, q, p) = (cyc[0], cyc[1], cyc[2], cyc[3]);
    let e = |x, y| g.edge_index(x, y).unwrap();
    let own = [e(m, n), e(m, p), e(n, q), e(p, q)];
    let mut edges = [(0, 0); 4];
    for (i, &q) in own.iter().enumerate() {
        let k = edge_type(g, q);
        let ws_instances: Vec<usize> = (0..g.num_edges()).filter(|&f| edge_type(g, f) == k).collect();
        edges[i] = (k, ws_instances.iter().position(|&f| f == q).unwrap());
    }
    let mut order = [0; 8];
    let mut seen = [false; 8];
    let mut n = 0;
    for k in edges.iter().map(|e| e.0).chain(0..8) {
        if !seen[k] {
            seen[k] = true;
            order[n] = k;
            n += 1;
        }
    }
    RedPlaquette { edges, own, order }
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    ws: &Workspace,
    levels: &[Level],
    compat: &[Vec<Vec<Vec<u64>>>],
    red: &RedPlaquette,
    targets: &DeriveTargets,
    accept: &(dyn Fn(&MlscPattern) -> bool + Sync),
    omit: [Direction; 4],
    depth: usize,
    chosen: &mut [usize; 8],
    stats: &mut SearchStats,
    result: &mut Option<MlscPattern>,
) {
    if result.is_some() {
        return;
    }
    if depth == 4 && targets.red_zzzz && !red_is_zzzz(levels, red, chosen) {
        return;
    }
    if depth == 8 {
        let pattern = assemble(levels, omit, chosen);
        if !plaquettes_ok(ws, &pattern, targets) || (targets.zxyz_edge && !has_zxyz(&pattern)) {
            return;
        }
        stats.local_solutions += 1;
        if accept(&pattern) {
            stats.validated += 1;
            *result = Some(pattern);
        }
        return;
    }
    let k = red.order[depth];
    let n = levels[k].candidates.len();
    let mut allowed = vec![u64::MAX; n.div_ceil(64)];
    if !n.is_multiple_of(64) {
        *allowed.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
    }
    for &prev in &red.order[..depth] {
        let row = &compat[prev][k][chosen[prev]];
        for (a, r) in allowed.iter_mut().zip(row) {
            *a &= r;
        }
    }
    for (w, &word) in allowed.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let j = w * 64 + bits.trailing_zeros() as usize;
            bits &= bits - 1;
            chosen[k] = j;
            backtrack(ws, levels, compat, red, targets, accept, omit, depth + 1, chosen, stats, result);
            if result.is_some() {
                return;
            }
        }
    }
    chosen[k] = usize::MAX;
}

fn red_is_zzzz(levels: &[Level], red: &RedPlaquette, chosen: &[usize; 8]) -> bool {
    let s = |i: usize| {
        let (k, inst) = red.edges[i];
        &levels[k].candidates[chosen[k]].strings[inst]
    };
    // m→n→q→p→m, with the two reversed edges contributing two sign flips
    let prod = &(&(s(0) * s(2)) * s(3)) * s(1);
    let n = prod.num_qubits();
    let zzzz = PauliString::from_sparse(n, red.own.iter().map(|&q| (q, Pauli::Z)));
    prod.letters() == zzzz.letters()
}

fn assemble(levels: &[Level], omit: [Direction; 4], chosen: &[usize; 8]) -> MlscPattern {
    let mut edges = [[edge_pattern(0, 0), edge_pattern(1, 0)]; 4];
    for k in 0..8 {
        edges[k / 2][k % 2] = edge_pattern(k, levels[k].candidates[chosen[k]].code);
    }
    MlscPattern { eta_omit: omit, edges }
}

/// Plaquette stabilizers of all four colours on the work torus.
fn plaquette_strings(g: &HoppingGraph, pattern: &MlscPattern) -> Vec<PauliString> {
    let edge_ops: Vec<PauliString> =
        (0..g.num_edges()).map(|e| pattern.edge_op(g, e, Offset::default()).unwrap()).collect();
    [(4, 4), (5, 4), (6, 4), (7, 4)]
        .iter()
        .map(|&(r, c)| crate::encoding::loop_image(g, &edge_ops, &g.plaquette(r, c)).unwrap())
        .collect()
}

fn plaquettes_ok(ws: &Workspace, pattern: &MlscPattern, targets: &DeriveTargets) -> bool {
    let (lo, hi) = targets.stabilizer_weights;
    plaquette_strings(&ws.g, pattern).iter().all(|s| weight_ok(s, lo, hi))
}

/// Some edge operator reads `Z X Y Z`: weight four with one `Y` and two `Z`s.
fn has_zxyz(pattern: &MlscPattern) -> bool {
    pattern.edges.iter().flatten().any(|e| {
        let all: Vec<Pauli> = e.tail.iter().chain(e.head.iter()).copied().collect();
        let count = |p| all.iter().filter(|&&x| x == p).count();
        // the own-edge X appears in both halves
        count(Pauli::X) == 2 && count(Pauli::Y) == 1 && count(Pauli::Z) == 2
    })
}

/// Flips edge-type signs so the red plaquette (top-left type 0) reads
/// `-Z Z Z Z`.
pub fn normalize_red_sign(pattern: &mut MlscPattern) {
    let g = HoppingGraph::build_lattice(WORK, WORK, Boundary::Torus, false).expect("lattice");
    let red = &plaquette_strings(&g, pattern)[0];
    if red.phase().sign() == Some(1) {
        pattern.edges[0][0].negative = !pattern.edges[0][0].negative;
    }
}

/// Syndrome sizes of single `X` and `Z` errors around a red-plaquette
/// corner on an 8×8 torus (see [`DeriveTargets::corner_profile`]).
pub fn corner_profile(pattern: &MlscPattern) -> Result<[usize; 8]> {
    let g = HoppingGraph::build_lattice(8, 8, Boundary::Torus, false)?;
    let enc = crate::mlsc::encode_pattern(&g, pattern, Offset::default())?;
    let m = g.vertex_at(4, 4).expect("8x8");
    let mut out = [0; 8];
    for (i, d) in Direction::ALL.into_iter().enumerate() {
        let q = g.qubit_towards(m, d).expect("torus");
        for (j, p) in [Pauli::X, Pauli::Z].into_iter().enumerate() {
            let e = PauliString::from_sparse(g.num_qubits(), [(q, p)]);
            out[2 * i + j] = syndrome(&e, &enc)?.iter().filter(|&&s| s == -1).count();
        }
    }
    Ok(out)
}

fn validates(p: &MlscPattern, rows: usize, cols: usize, targets: &DeriveTargets) -> bool {
    let profile_ok = match targets.corner_profile {
        Some(want) => corner_profile(p).is_ok_and(|got| got == want),
        None => true,
    };
    profile_ok
        && validate_on_torus(p, 8, 8).is_ok()
        && validate_on_torus(p, rows, cols).is_ok()
        && (!targets.open_4x4 || validate_open_4x4(p).is_ok())
}

/// The open 4×4 code built from `pattern` has distinct single-qubit
/// syndromes and no undetectable logical of weight at most two.
pub fn validate_open_4x4(pattern: &MlscPattern) -> Result<()> {
    let g = HoppingGraph::build_lattice(4, 4, Boundary::Open, true)?;
    let (enc, _) = build_open_boundary(&g, pattern, OPEN_OFFSET)?;
    match distance_up_to(&enc, 2)?.verdict {
        DistanceVerdict::Above(_) => Ok(()),
        DistanceVerdict::Exact(d) => Err(Error::invariant(format!("open 4x4 code has a logical of weight {d}"))),
    }
}

/// Full validation of a pattern on an even torus: operator algebra, rank,
/// no undetectable logical of weight at most two, and distinct syndromes for
/// all single-qubit errors.
pub fn validate_on_torus(pattern: &MlscPattern, rows: usize, cols: usize) -> Result<()> {
    let g = HoppingGraph::build_lattice(rows, cols, Boundary::Torus, false)?;
    let enc = crate::mlsc::encode_pattern(&g, pattern, Offset::default())?;
    enc.verify()?;
    let expected = g.num_edges() - g.num_vertices() + 1;
    if enc.group().rank() != expected {
        return Err(Error::invariant(format!("stabilizer rank {} instead of {expected}", enc.group().rank())));
    }
    match distance_up_to(&enc, 2)?.verdict {
        DistanceVerdict::Above(_) => {}
        DistanceVerdict::Exact(d) => return Err(Error::invariant(format!("undetectable logical of weight {d}"))),
    }
    if !single_errors_distinct(&enc) {
        return Err(Error::invariant("single-qubit errors share syndromes"));
    }
    Ok(())
}

/// Searches vertex choices in order (in parallel) and returns the first
/// pattern meeting the targets and validating on a `rows × cols` torus and an
/// 8×8 torus.
pub fn derive_pattern(rows: usize, cols: usize, targets: &DeriveTargets) -> Result<(MlscPattern, SearchStats)> {
    check_dims(rows, cols)?;
    let ws = Workspace::new();
    let accept = move |p: &MlscPattern| {
        let mut p = p.clone();
        normalize_red_sign(&mut p);
        validates(&p, rows, cols, targets)
    };
    let results: Vec<(Option<MlscPattern>, SearchStats)> =
        eta_choices().into_par_iter().map(|omit| search_vertex_choice(&ws, omit, targets, &accept)).collect();
    let mut total = SearchStats::default();
    for (_, s) in &results {
        total.vertex_choices += s.vertex_choices;
        total.local_solutions += s.local_solutions;
        total.validated += s.validated;
    }
    match results.into_iter().find_map(|(p, _)| p) {
        Some(mut p) => {
            normalize_red_sign(&mut p);
            Ok((p, total))
        }
        None => Err(Error::SearchExhausted(format!(
            "{} vertex choices, {} local solutions, none validated",
            total.vertex_choices, total.local_solutions
        ))),
    }
}

/// Every pattern meeting the targets that validates on an 8×8 torus and a
/// `rows × cols` torus, in search order (red sign normalized).
pub fn enumerate_patterns(rows: usize, cols: usize, targets: &DeriveTargets) -> Result<Vec<MlscPattern>> {
    check_dims(rows, cols)?;
    let ws = Workspace::new();
    let per_choice: Vec<Vec<MlscPattern>> = eta_choices()
        .into_par_iter()
        .map(|omit| {
            let found = Mutex::new(Vec::new());
            let accept = |p: &MlscPattern| {
                let mut p = p.clone();
                normalize_red_sign(&mut p);
                if validates(&p, rows, cols, targets) {
                    found.lock().expect("no poisoning").push(p);
                }
                false
            };
            search_vertex_choice(&ws, omit, targets, &accept);
            found.into_inner().expect("no poisoning")
        })
        .collect();
    Ok(per_choice.into_iter().flatten().collect())
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows < 4 || cols < 4 || !rows.is_multiple_of(ROW_PERIOD) || !cols.is_multiple_of(COL_PERIOD) {
        return Err(Error::InvalidLattice(format!(
            "{rows}x{cols}: rows must be a multiple of {ROW_PERIOD} and columns of {COL_PERIOD}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlsc::shipped_pattern;

    #[test]
    fn derive_reproduces_shipped_pattern() {
        let (p, stats) = derive_pattern(8, 8, &DeriveTargets::default()).unwrap();
        assert_eq!(p, shipped_pattern());
        assert_eq!(stats.vertex_choices, 256);
        assert!(stats.validated >= 1);
    }

    #[test]
    fn rejects_tori_off_the_layout() {
        assert!(matches!(derive_pattern(6, 8, &DeriveTargets::default()), Err(Error::InvalidLattice(_))));
        assert!(matches!(derive_pattern(8, 5, &DeriveTargets::default()), Err(Error::InvalidLattice(_))));
    }

    #[test]
    fn shipped_red_plaquette_is_minus_zzzz() {
        let g = HoppingGraph::build_lattice(WORK, WORK, Boundary::Torus, false).unwrap();
        let red = &plaquette_strings(&g, &shipped_pattern())[0];
        assert_eq!(red.weight(), 4);
        assert_eq!(red.phase().sign(), Some(-1));
        assert!(has_zxyz(&shipped_pattern()));
    }
}
