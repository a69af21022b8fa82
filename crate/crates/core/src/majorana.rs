//! Abstract Majorana operator algebra on `2n` modes.
//!
//! An element of the Majorana group is `φ · f_A` with `f_A = ∏_{k∈A} f_k`
//! taken in increasing index order. Products are canonicalized by counting
//! the transpositions needed to sort the concatenated supports; repeated
//! indices cancel because `f_k² = 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::Phase;

/// `φ · f_A` over `2 · n_modes` Majorana indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MajoranaOperator {
    n_modes: usize,
    bits: Vec<u64>,
    phase: Phase,
}

impl MajoranaOperator {
    pub fn identity(n_modes: usize) -> Self {
        MajoranaOperator { n_modes, bits: vec![0; (2 * n_modes).div_ceil(64)], phase: Phase::ONE }
    }

    /// `phase · f_{i_1} f_{i_2} …` where the indices are given in the order
    /// they multiply; the result is canonicalized.
    pub fn from_product(n_modes: usize, phase: Phase, indices: &[usize]) -> Self {
        let mut acc = Self::identity(n_modes);
        acc.phase = phase;
        for &k in indices {
            assert!(k < 2 * n_modes, "Majorana index {k} out of range");
            let mut single = Self::identity(n_modes);
            single.bits[k / 64] |= 1 << (k % 64);
            acc = acc.product(&single).expect("same mode count");
        }
        acc
    }

    pub fn single(n_modes: usize, k: usize) -> Self {
        Self::from_product(n_modes, Phase::ONE, &[k])
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// Support in increasing order.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.bits.iter().enumerate() {
            let mut b = word;
            while b != 0 {
                out.push(w * 64 + b.trailing_zeros() as usize);
                b &= b - 1;
            }
        }
        out
    }

    pub fn contains(&self, k: usize) -> bool {
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0 && self.phase == Phase::ONE
    }

    pub fn is_scalar(&self) -> bool {
        self.weight() == 0
    }

    fn overlap(&self, other: &MajoranaOperator) -> usize {
        self.bits.iter().zip(&other.bits).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    /// Canonical product `self · other`.
    pub fn product(&self, other: &MajoranaOperator) -> Result<MajoranaOperator> {
        if self.n_modes != other.n_modes {
            return Err(Error::size(self.n_modes, other.n_modes));
        }
        // Each f_b of `other` moves left past every f_a of `self` with a > b.
        let mut swaps = 0usize;
        for b in other.support() {
            let (w, s) = (b / 64, b % 64);
            let above_in_word = if s == 63 { 0 } else { self.bits[w] & (!0u64 << (s + 1)) };
            swaps += above_in_word.count_ones() as usize;
            swaps += self.bits[w + 1..].iter().map(|x| x.count_ones() as usize).sum::<usize>();
        }
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect();
        let mut phase = self.phase * other.phase;
        if swaps % 2 == 1 {
            phase = phase.neg();
        }
        Ok(MajoranaOperator { n_modes: self.n_modes, bits, phase })
    }

    pub fn adjoint(&self) -> MajoranaOperator {
        // (f_A)† reverses the order: sign (-1)^{|A|(|A|-1)/2}
        let w = self.weight();
        let mut phase = self.phase.conj();
        if (w * w.saturating_sub(1) / 2) % 2 == 1 {
            phase = phase.neg();
        }
        MajoranaOperator { n_modes: self.n_modes, bits: self.bits.clone(), phase }
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint() == *self
    }
}

impl fmt::Debug for MajoranaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for MajoranaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.phase)?;
        let s = self.support();
        if s.is_empty() {
            write!(f, " 1")?;
        }
        for k in s {
            write!(f, " f{k}")?;
        }
        Ok(())
    }
}

/// `±1` as a small integer.
pub type Sign = i8;

/// `(-1)^{|A||B| + |A∩B|}`: `+1` when the operators commute.
pub fn commutation_sign(a: &MajoranaOperator, b: &MajoranaOperator) -> Result<Sign> {
    if a.n_modes != b.n_modes {
        return Err(Error::size(a.n_modes, b.n_modes));
    }
    let e = a.weight() * b.weight() + a.overlap(b);
    Ok(if e.is_multiple_of(2) { 1 } else { -1 })
}

pub fn majorana_product(a: &MajoranaOperator, b: &MajoranaOperator) -> Result<MajoranaOperator> {
    a.product(b)
}

/// A vertex operator `η_k = i f_{2k} f_{2k+1}` or an edge operator
/// `ξ_{jk} = i f_{2j} f_{2k}`. Edges are stored with `j < k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadraticGenerator {
    Vertex(usize),
    Edge(usize, usize),
}

impl QuadraticGenerator {
    /// Canonical edge generator together with the sign from `ξ_{jk} = -ξ_{kj}`.
    pub fn edge(j: usize, k: usize) -> (QuadraticGenerator, Sign) {
        if j < k {
            (QuadraticGenerator::Edge(j, k), 1)
        } else {
            (QuadraticGenerator::Edge(k, j), -1)
        }
    }

    pub fn operator(&self, n_modes: usize) -> MajoranaOperator {
        match *self {
            QuadraticGenerator::Vertex(k) => MajoranaOperator::from_product(n_modes, Phase::I, &[2 * k, 2 * k + 1]),
            QuadraticGenerator::Edge(j, k) => MajoranaOperator::from_product(n_modes, Phase::I, &[2 * j, 2 * k]),
        }
    }
}

/// `(-i)^ℓ ξ_{k0 k1} ξ_{k1 k2} ⋯ ξ_{k_{ℓ-1} k0}` for the closed walk
/// `path = [k0, k1, …, k_{ℓ-1}, k0]`.
pub fn loop_product(n_modes: usize, path: &[usize]) -> Result<MajoranaOperator> {
    if path.len() < 2 || path.first() != path.last() {
        return Err(Error::OpenPath);
    }
    let len = path.len() - 1;
    let mut acc = MajoranaOperator::identity(n_modes).with_phase(Phase::from_exponent(-(len as i64)));
    for w in path.windows(2) {
        let xi = MajoranaOperator::from_product(n_modes, Phase::I, &[2 * w[0], 2 * w[1]]);
        acc = acc.product(&xi)?;
    }
    Ok(acc)
}

/// Exact complex rational `re + i·im`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coeff {
    pub re: Rational64,
    pub im: Rational64,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff { re: Rational64::from_integer(0), im: Rational64::from_integer(0) }
    }

    pub fn real(n: i64, d: i64) -> Self {
        Coeff { re: Rational64::new(n, d), im: Rational64::from_integer(0) }
    }

    pub fn imag(n: i64, d: i64) -> Self {
        Coeff { re: Rational64::from_integer(0), im: Rational64::new(n, d) }
    }

    pub fn from_phase(p: Phase) -> Self {
        match p.exponent() {
            0 => Coeff::real(1, 1),
            1 => Coeff::imag(1, 1),
            2 => Coeff::real(-1, 1),
            _ => Coeff::imag(-1, 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re == Rational64::from_integer(0) && self.im == Rational64::from_integer(0)
    }

    pub fn conj(&self) -> Self {
        Coeff { re: self.re, im: -self.im }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
        (f(self.re), f(self.im))
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, o: Coeff) -> Coeff {
        Coeff { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, o: Coeff) -> Coeff {
        Coeff { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zero = Rational64::from_integer(0);
        match (self.re == zero, self.im == zero) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => write!(f, "{}{}{}i", self.re, if self.im > zero { "+" } else { "" }, self.im),
        }
    }
}

/// One summand: a coefficient times an ordered product of generators.
/// An empty product is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorTerm {
    pub coeff: Coeff,
    pub factors: Vec<QuadraticGenerator>,
}

/// The two fermionic terms that have a direct quadratic expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadraticTerm {
    /// `c_k† c_k`
    Occupation(usize),
    /// `c_j† c_k + c_k† c_j`
    Hopping(usize, usize),
}

/// Expands an occupation or hopping term into quadratic generators:
///
/// ```text
/// c_k† c_k              = ½ 𝟙 + ½ η_k
/// c_j† c_k + h.c.       = -(i/2) (ξ_jk η_k + η_j ξ_jk)
/// ```
///
/// Hoppings with `j > k` are rewritten through `ξ_jk = -ξ_kj` so every edge
/// factor is in canonical orientation. `has_edge` decides adjacency.
pub fn expand_term(term: QuadraticTerm, has_edge: impl Fn(usize, usize) -> bool) -> Result<Vec<GeneratorTerm>> {
    match term {
        QuadraticTerm::Occupation(k) => Ok(vec![
            GeneratorTerm { coeff: Coeff::real(1, 2), factors: vec![] },
            GeneratorTerm { coeff: Coeff::real(1, 2), factors: vec![QuadraticGenerator::Vertex(k)] },
        ]),
        QuadraticTerm::Hopping(j, k) => {
            if j == k || !has_edge(j, k) {
                return Err(Error::NotAdjacent(j, k));
            }
            let (xi, sign) = QuadraticGenerator::edge(j, k);
            let c = Coeff::imag(-(sign as i64), 2);
            Ok(vec![
                GeneratorTerm { coeff: c, factors: vec![xi, QuadraticGenerator::Vertex(k)] },
                GeneratorTerm { coeff: c, factors: vec![QuadraticGenerator::Vertex(j), xi] },
            ])
        }
    }
}

/// Sum of a generator expansion as an explicit Majorana polynomial: each
/// distinct monomial with its accumulated coefficient, zero entries dropped.
pub fn to_majorana_sum(terms: &[GeneratorTerm], n_modes: usize) -> Vec<(Coeff, MajoranaOperator)> {
    let mut out: Vec<(Coeff, MajoranaOperator)> = Vec::new();
    for t in terms {
        let mut m = MajoranaOperator::identity(n_modes);
        for f in &t.factors {
            m = m.product(&f.operator(n_modes)).expect("same mode count");
        }
        let c = t.coeff * Coeff::from_phase(m.phase());
        let m = m.with_phase(Phase::ONE);
        match out.iter_mut().find(|(_, x)| *x == m) {
            Some((acc, _)) => *acc = *acc + c,
            None => out.push((c, m)),
        }
    }
    out.retain(|(c, _)| !c.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(n: usize, idx: &[usize]) -> MajoranaOperator {
        MajoranaOperator::from_product(n, Phase::ONE, idx)
    }

    #[test]
    fn single_mode_squares_to_identity() {
        let f0 = op(2, &[0]);
        assert!(f0.product(&f0).unwrap().is_identity());
    }

    #[test]
    fn overlapping_pair_product() {
        let a = op(2, &[0, 1]);
        let b = op(2, &[1, 2]);
        assert_eq!(a.product(&b).unwrap(), op(2, &[0, 2]));
        // f_B f_A = -f_A f_B here
        let ba = b.product(&a).unwrap();
        assert_eq!(ba, op(2, &[0, 2]).with_phase(Phase::MINUS_ONE));
        assert_eq!(commutation_sign(&a, &b).unwrap(), -1);
    }

    #[test]
    fn reordering_sign() {
        // f3 f1 = -f1 f3
        assert_eq!(op(2, &[3, 1]), op(2, &[1, 3]).with_phase(Phase::MINUS_ONE));
        // f2 f1 f0 needs three swaps
        assert_eq!(op(2, &[2, 1, 0]), op(2, &[0, 1, 2]).with_phase(Phase::MINUS_ONE));
    }

    #[test]
    fn generator_commutation_pattern() {
        let n = 4;
        let eta = |k| QuadraticGenerator::Vertex(k).operator(n);
        let xi = |j, k| QuadraticGenerator::Edge(j, k).operator(n);
        assert_eq!(commutation_sign(&eta(1), &xi(0, 1)).unwrap(), -1);
        assert_eq!(commutation_sign(&eta(2), &xi(0, 1)).unwrap(), 1);
        assert_eq!(commutation_sign(&xi(1, 2), &xi(0, 1)).unwrap(), -1);
        assert_eq!(commutation_sign(&xi(2, 3), &xi(0, 1)).unwrap(), 1);
        assert_eq!(commutation_sign(&eta(0), &eta(3)).unwrap(), 1);
        assert!(eta(0).is_hermitian() && xi(1, 3).is_hermitian());
    }

    #[test]
    fn loops_close_to_identity() {
        assert!(loop_product(4, &[0, 1, 2, 3, 0]).unwrap().is_identity());
        assert!(loop_product(4, &[0, 3, 2, 1, 0]).unwrap().is_identity());
        assert!(loop_product(3, &[0, 1, 2, 0]).unwrap().is_identity());
        assert_eq!(loop_product(3, &[0, 1, 2]), Err(Error::OpenPath));
    }

    #[test]
    fn occupation_and_hopping_expansions() {
        let adj = |a: usize, b: usize| a.abs_diff(b) == 1;
        let occ = expand_term(QuadraticTerm::Occupation(3), adj).unwrap();
        assert_eq!(occ[0], GeneratorTerm { coeff: Coeff::real(1, 2), factors: vec![] });
        assert_eq!(occ[1].factors, vec![QuadraticGenerator::Vertex(3)]);

        let hop = expand_term(QuadraticTerm::Hopping(1, 2), adj).unwrap();
        assert_eq!(hop[0].coeff, Coeff::imag(-1, 2));
        assert_eq!(hop[0].factors, vec![QuadraticGenerator::Edge(1, 2), QuadraticGenerator::Vertex(2)]);
        assert_eq!(hop[1].factors, vec![QuadraticGenerator::Vertex(1), QuadraticGenerator::Edge(1, 2)]);

        // h.c. symmetry: hopping(2,1) is the same operator
        let n = 3;
        let fwd = to_majorana_sum(&hop, n);
        let rev = to_majorana_sum(&expand_term(QuadraticTerm::Hopping(2, 1), adj).unwrap(), n);
        assert_eq!(fwd.len(), 2);
        for t in &fwd {
            assert!(rev.contains(t));
        }
        // (i/2)(f2 f5 - f3 f4)
        assert!(fwd.contains(&(Coeff::imag(1, 2), op(n, &[2, 5]))));
        assert!(fwd.contains(&(Coeff::imag(-1, 2), op(n, &[3, 4]))));

        assert_eq!(expand_term(QuadraticTerm::Hopping(0, 2), adj), Err(Error::NotAdjacent(0, 2)));
    }
}
