//! Syndromes, error classification, bounded distance search and the
//! weight comparison report.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::{Encoding, StabilizerKind};
use crate::error::{Error, Result};
use crate::group::{Membership, StabilizerGroup};
use crate::lowering::hopping_weight;
use crate::pauli::{Pauli, PauliString};

/// Largest number of strings `distance_up_to` will enumerate.
pub const ENUMERATION_BUDGET: u128 = 1_000_000_000;

/// `-1` where the error anticommutes with the generator, `+1` elsewhere.
pub fn syndrome_against(error: &PauliString, generators: &[PauliString]) -> Result<Vec<i8>> {
    generators
        .iter()
        .map(|g| {
            if g.num_qubits() != error.num_qubits() {
                return Err(Error::size(g.num_qubits(), error.num_qubits()));
            }
            Ok(if g.symplectic(error) { -1 } else { 1 })
        })
        .collect()
}

/// Syndrome of `error` against the encoding's stabilizer generators, in order.
pub fn syndrome(error: &PauliString, enc: &Encoding) -> Result<Vec<i8>> {
    syndrome_against(error, &enc.stabilizer_paulis())
}

pub fn is_trivial(s: &[i8]) -> bool {
    s.iter().all(|&x| x == 1)
}

/// Errors with their syndromes against a fixed generator list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyndromeTable {
    pub stabilizer_labels: Vec<String>,
    pub rows: Vec<(PauliString, Vec<i8>)>,
}

pub fn syndrome_table(enc: &Encoding, errors: &[PauliString]) -> Result<SyndromeTable> {
    let gens = enc.stabilizer_paulis();
    Ok(SyndromeTable {
        stabilizer_labels: enc.stabilizers().iter().map(|s| s.label.clone()).collect(),
        rows: errors.iter().map(|e| Ok((e.clone(), syndrome_against(e, &gens)?))).collect::<Result<_>>()?,
    })
}

/// All `3n` single-qubit Paulis, qubit-major, letters `X, Y, Z`.
pub fn single_qubit_errors(n: usize) -> Vec<PauliString> {
    (0..n).flat_map(|q| Pauli::NON_IDENTITY.map(|p| PauliString::single(n, q, p))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// In the stabilizer group (up to sign): acts trivially on the code.
    Trivial,
    /// Nontrivial syndrome.
    Detectable,
    /// Commutes with every generator but is not in the group.
    UndetectableLogical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorClass {
    pub error: PauliString,
    pub syndrome: Vec<i8>,
    pub kind: ErrorKind,
}

impl ErrorClass {
    pub fn detectable(&self) -> bool {
        self.kind != ErrorKind::UndetectableLogical
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub errors: Vec<ErrorClass>,
    /// Index pairs `(a, b)` whose product `a† b` is an undetectable logical.
    pub confusable: Vec<(usize, usize)>,
}

impl Classification {
    pub fn all_detectable(&self) -> bool {
        self.errors.iter().all(|e| e.detectable())
    }

    pub fn correctable(&self) -> bool {
        self.confusable.is_empty() && self.all_detectable()
    }

    /// Errors that are detectable and not confusable with any other error.
    pub fn uniquely_identified(&self) -> Vec<usize> {
        (0..self.errors.len())
            .filter(|&i| {
                self.errors[i].kind == ErrorKind::Detectable && !self.confusable.iter().any(|&(a, b)| a == i || b == i)
            })
            .collect()
    }
}

fn kind_of(group: &StabilizerGroup, gens: &[PauliString], e: &PauliString) -> Result<(Vec<i8>, ErrorKind)> {
    let s = syndrome_against(e, gens)?;
    let kind = if !is_trivial(&s) {
        ErrorKind::Detectable
    } else if group.contains(e).in_group_up_to_sign() {
        ErrorKind::Trivial
    } else {
        ErrorKind::UndetectableLogical
    };
    Ok((s, kind))
}

/// Classifies each error and every pair `a† b` against a stabilizer group.
pub fn classify_against(group: &StabilizerGroup, gens: &[PauliString], errors: &[PauliString]) -> Result<Classification> {
    let classes: Vec<ErrorClass> = errors
        .iter()
        .map(|e| {
            let (syndrome, kind) = kind_of(group, gens, e)?;
            Ok(ErrorClass { error: e.clone(), syndrome, kind })
        })
        .collect::<Result<_>>()?;
    let mut confusable = Vec::new();
    for a in 0..errors.len() {
        for b in a + 1..errors.len() {
            // a†b has trivial syndrome exactly when the syndromes agree
            if classes[a].syndrome != classes[b].syndrome {
                continue;
            }
            let prod = errors[a].adjoint().multiply(&errors[b])?;
            if !group.contains(&prod).in_group_up_to_sign() {
                confusable.push((a, b));
            }
        }
    }
    Ok(Classification { errors: classes, confusable })
}

pub fn classify_errors(enc: &Encoding, errors: &[PauliString]) -> Result<Classification> {
    classify_against(enc.group(), &enc.stabilizer_paulis(), errors)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "weight", rename_all = "snake_case")]
pub enum DistanceVerdict {
    Exact(usize),
    /// No logical of weight up to the bound exists.
    Above(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceReport {
    pub bound: usize,
    pub verdict: DistanceVerdict,
    /// Lexicographically smallest undetectable logical of minimum weight.
    pub witness: Option<PauliString>,
    /// `undetectable[w - 1]` counts undetectable logicals of weight `w`, for
    /// every weight searched.
    pub undetectable: Vec<u64>,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of Pauli strings of weight `1..=w` on `n` qubits.
pub fn enumeration_size(n: usize, w: usize) -> u128 {
    (1..=w).map(|k| binomial(n, k).saturating_mul(3u128.pow(k as u32))).fold(0u128, u128::saturating_add)
}

/// Bit-packed syndromes of the 3n single-qubit Paulis.
struct SyndromeBank {
    words: usize,
    // [q * 3 + letter] -> words
    data: Vec<u64>,
}

impl SyndromeBank {
    fn new(n: usize, gens: &[PauliString]) -> Self {
        let words = gens.len().div_ceil(64).max(1);
        let mut data = vec![0u64; n * 3 * words];
        for (s, g) in gens.iter().enumerate() {
            for q in 0..n {
                for (l, p) in Pauli::NON_IDENTITY.into_iter().enumerate() {
                    let (x, z) = p.bits();
                    let (gx, gz) = g.get(q).bits();
                    if (x && gz) ^ (z && gx) {
                        data[(q * 3 + l) * words + s / 64] |= 1 << (s % 64);
                    }
                }
            }
        }
        SyndromeBank { words, data }
    }

    fn get(&self, q: usize, l: usize) -> &[u64] {
        let i = (q * 3 + l) * self.words;
        &self.data[i..i + self.words]
    }
}

struct Search<'a> {
    n: usize,
    bank: &'a SyndromeBank,
    /// Strings in this group are skipped; `None` counts every string with a
    /// trivial syndrome.
    group: Option<&'a StabilizerGroup>,
}

impl Search<'_> {
    /// Enumerates weight-`w` strings whose lowest qubit is `q0`; returns the
    /// number of undetectable logicals and the first one in lexicographic order.
    fn scan(&self, q0: usize, w: usize) -> (u64, Option<PauliString>) {
        let mut count = 0;
        let mut first = None;
        let mut qubits = vec![q0];
        let mut letters = Vec::with_capacity(w);
        let mut acc = vec![0u64; self.bank.words];
        for l0 in 0..3 {
            letters.push(l0);
            xor_into(&mut acc, self.bank.get(q0, l0));
            self.extend(w, &mut qubits, &mut letters, &mut acc, &mut count, &mut first);
            xor_into(&mut acc, self.bank.get(q0, l0));
            letters.pop();
        }
        (count, first)
    }

    fn extend(
        &self,
        w: usize,
        qubits: &mut Vec<usize>,
        letters: &mut Vec<usize>,
        acc: &mut [u64],
        count: &mut u64,
        first: &mut Option<PauliString>,
    ) {
        if qubits.len() == w {
            if acc.iter().all(|&x| x == 0) {
                let p = PauliString::from_sparse(
                    self.n,
                    qubits.iter().zip(letters.iter()).map(|(&q, &l)| (q, Pauli::NON_IDENTITY[l])),
                );
                if self.group.is_none_or(|g| g.contains(&p) == Membership::NonMember) {
                    *count += 1;
                    if first.is_none() {
                        *first = Some(p);
                    }
                }
            }
            return;
        }
        let start = qubits.last().unwrap() + 1;
        let remaining = w - qubits.len();
        for q in start..=self.n - remaining {
            qubits.push(q);
            for l in 0..3 {
                letters.push(l);
                xor_into(acc, self.bank.get(q, l));
                self.extend(w, qubits, letters, acc, count, first);
                xor_into(acc, self.bank.get(q, l));
                letters.pop();
            }
            qubits.pop();
        }
    }
}

fn xor_into(acc: &mut [u64], s: &[u64]) {
    for (a, b) in acc.iter_mut().zip(s) {
        *a ^= b;
    }
}

/// Searches all Pauli strings up to weight `w` for an undetectable logical:
/// one commuting with every generator that is not in the group.
pub fn distance_against(group: &StabilizerGroup, gens: &[PauliString], w: usize) -> Result<DistanceReport> {
    scan_weights(group.num_qubits(), Some(group), gens, w)
}

/// Like [`distance_up_to`] but counts every string of weight at most `w`
/// that commutes with all stabilizers, group elements included. `Above(w)`
/// means every such string anticommutes with at least one stabilizer.
pub fn undetected_up_to(enc: &Encoding, w: usize) -> Result<DistanceReport> {
    scan_weights(enc.num_qubits(), None, &enc.stabilizer_paulis(), w)
}

fn scan_weights(n: usize, group: Option<&StabilizerGroup>, gens: &[PauliString], w: usize) -> Result<DistanceReport> {
    if w == 0 {
        return Err(Error::invariant("weight bound must be at least 1"));
    }
    let requested = enumeration_size(n, w);
    if requested > ENUMERATION_BUDGET {
        let feasible = (0..w).rev().find(|&k| enumeration_size(n, k) <= ENUMERATION_BUDGET).unwrap_or(0);
        return Err(Error::Budget { requested, feasible });
    }
    let bank = SyndromeBank::new(n, gens);
    let search = Search { n, bank: &bank, group };
    let mut undetectable = Vec::new();
    for weight in 1..=w.min(n) {
        let per_q0: Vec<(u64, Option<PauliString>)> =
            (0..=n - weight).into_par_iter().map(|q0| search.scan(q0, weight)).collect();
        let count = per_q0.iter().map(|(c, _)| c).sum();
        undetectable.push(count);
        // lower q0 comes first in lexicographic order
        if let Some(witness) = per_q0.into_iter().find_map(|(_, f)| f) {
            return Ok(DistanceReport { bound: w, verdict: DistanceVerdict::Exact(weight), witness: Some(witness), undetectable });
        }
    }
    Ok(DistanceReport { bound: w, verdict: DistanceVerdict::Above(w), witness: None, undetectable })
}

pub fn distance_up_to(enc: &Encoding, w: usize) -> Result<DistanceReport> {
    distance_against(enc.group(), &enc.stabilizer_paulis(), w)
}

/// Single-qubit Paulis with pairwise distinct, nontrivial syndromes.
pub fn single_errors_distinct(enc: &Encoding) -> bool {
    let n = enc.num_qubits();
    let bank = SyndromeBank::new(n, &enc.stabilizer_paulis());
    let mut seen: Vec<&[u64]> = (0..n).flat_map(|q| (0..3).map(move |l| (q, l))).map(|(q, l)| bank.get(q, l)).collect();
    if seen.iter().any(|s| s.iter().all(|&x| x == 0)) {
        return false;
    }
    let before = seen.len();
    seen.sort_unstable();
    seen.dedup();
    seen.len() == before
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub min: usize,
    pub max: usize,
}

impl Range {
    pub fn of(values: impl IntoIterator<Item = usize>) -> Option<Range> {
        values.into_iter().fold(None, |acc, v| match acc {
            None => Some(Range { min: v, max: v }),
            Some(r) => Some(Range { min: r.min.min(v), max: r.max.max(v) }),
        })
    }
}

/// One row of the comparison table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRow {
    pub name: String,
    pub qubits: usize,
    pub distance: DistanceVerdict,
    pub occupation: Option<Range>,
    /// Per edge, the largest string weight of the lowered hopping term;
    /// `min`/`max` over edges.
    pub hopping: Option<Range>,
    /// Weights of the local stabilizer generators (torus winding loops excluded).
    pub stabilizer: Option<Range>,
}

/// Distance (searched up to `max_weight`) and operator weights per encoding.
pub fn weight_report(encodings: &[(&str, &Encoding)], max_weight: usize) -> Result<Vec<WeightRow>> {
    encodings
        .iter()
        .map(|&(name, enc)| {
            let g = enc.graph();
            let hopping = g
                .edges()
                .iter()
                .map(|&(a, b)| hopping_weight(enc, a, b))
                .collect::<Result<Vec<_>>>()?;
            Ok(WeightRow {
                name: name.to_string(),
                qubits: enc.num_qubits(),
                distance: distance_up_to(enc, max_weight)?.verdict,
                occupation: Range::of(enc.vertex_ops().iter().map(|p| p.weight())),
                hopping: Range::of(hopping),
                stabilizer: Range::of(
                    enc.stabilizers().iter().filter(|s| s.kind != StabilizerKind::Winding).map(|s| s.pauli.weight()),
                ),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bksf::bksf_encode;
    use crate::encoding::ParitySector;
    use crate::lattice::{build_lattice, Boundary};

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(enumeration_size(4, 1), 12);
        assert_eq!(enumeration_size(4, 2), 12 + 6 * 9);
    }

    #[test]
    fn bksf_torus_distance_two() {
        let g = build_lattice(4, 4, Boundary::Torus, false).unwrap();
        let enc = bksf_encode(&g, ParitySector::Even).unwrap();
        let r = distance_up_to(&enc, 2).unwrap();
        assert_eq!(r.verdict, DistanceVerdict::Exact(2));
        let w = r.witness.unwrap();
        assert!(enc.group().commutes_with_all(&w));
        assert_eq!(enc.group().contains(&w), Membership::NonMember);
        assert_eq!(r.undetectable[0], 0);
    }

    #[test]
    fn budget_guard() {
        let g = build_lattice(8, 8, Boundary::Torus, false).unwrap();
        let enc = bksf_encode(&g, ParitySector::Even).unwrap();
        match distance_up_to(&enc, 6) {
            Err(Error::Budget { feasible, .. }) => assert_eq!(feasible, 4),
            other => panic!("{other:?}"),
        }
    }
}
