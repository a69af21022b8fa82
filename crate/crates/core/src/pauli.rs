//! Bit-packed n-qubit Pauli strings with exact phase tracking.
//!
//! A [`PauliString`] stores an X-part and a Z-part as packed GF(2) vectors and
//! a global phase `i^k`. A qubit with both bits set is a literal `Y`, so the
//! stored triple determines the operator uniquely:
//!
//! ```text
//! P = i^phase · σ(x_0, z_0) ⊗ σ(x_1, z_1) ⊗ …,   σ(1,0)=X, σ(1,1)=Y, σ(0,1)=Z
//! ```
//!
//! Multiplication carries the `±i` produced by each single-qubit product
//! (`XY = iZ`, `YZ = iX`, `ZX = iY` and their reverses) so that signs such as
//! the `-` in `-Y_0 Y_1 Y_2 Y_3` come out bit-exact.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// An element of the cyclic group `{+1, +i, -1, -i}`, stored as the exponent of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i64) -> Phase {
        Phase(k.rem_euclid(4) as u8)
    }

    /// Exponent `k` in `i^k`, in `0..4`.
    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    pub fn neg(self) -> Phase {
        Phase((self.0 + 2) % 4)
    }

    /// `+1` or `-1` for real phases, `None` otherwise.
    pub fn sign(self) -> Option<i8> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// An n-qubit Pauli operator `i^k · P_0 ⊗ … ⊗ P_{n-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliString { n, x: vec![0; w], z: vec![0; w], phase: Phase::ONE }
    }

    /// A single non-trivial letter on qubit `q`.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.set(q, p);
        s
    }

    /// Builds a string from `(qubit, letter)` pairs with phase `+1`.
    /// Repeated qubits are overwritten, not multiplied.
    pub fn from_sparse(n: usize, entries: impl IntoIterator<Item = (usize, Pauli)>) -> Self {
        let mut s = Self::identity(n);
        for (q, p) in entries {
            s.set(q, p);
        }
        s
    }

    /// Parses a dense letter string such as `"XIZY"` (qubit 0 first), with
    /// an optional leading sign and `i`.
    pub fn from_letters(text: &str) -> Result<Self> {
        let (phase, body) = split_phase(text.trim());
        let letters: Vec<Pauli> = body
            .trim()
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::Parse(format!("bad Pauli letter {c:?}"))))
            .collect::<Result<_>>()?;
        let mut s = Self::from_sparse(letters.len(), letters.into_iter().enumerate());
        s.phase = phase;
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn set_phase(&mut self, phase: Phase) {
        self.phase = phase;
    }

    pub fn negated(mut self) -> Self {
        self.phase = self.phase.neg();
        self
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn get(&self, q: usize) -> Pauli {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / WORD, q % WORD);
        Pauli::from_bits(self.x[w] >> b & 1 == 1, self.z[w] >> b & 1 == 1)
    }

    /// Overwrites the letter on qubit `q`, leaving the phase untouched.
    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / WORD, q % WORD);
        let (xb, zb) = p.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(x, z)| (x | z).count_ones() as usize).sum()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Qubits acted on non-trivially, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, (x, z)) in self.x.iter().zip(&self.z).enumerate() {
            let mut bits = x | z;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(w * WORD + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Non-identity `(qubit, letter)` pairs in increasing qubit order.
    pub fn letters(&self) -> Vec<(usize, Pauli)> {
        self.support().into_iter().map(|q| (q, self.get(q))).collect()
    }

    /// Exact group product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.n != other.n {
            return Err(Error::size(self.n, other.n));
        }
        let mut out = self.clone();
        out.mul_assign_right(other);
        Ok(out)
    }

    /// `self ← self · other`. Panics on a size mismatch.
    pub fn mul_assign_right(&mut self, other: &PauliString) {
        assert_eq!(self.n, other.n, "Pauli strings of different lengths");
        let mut plus = 0u32;
        let mut minus = 0u32;
        for w in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[w], self.z[w], other.x[w], other.z[w]);
            let (px, py, pz) = (x1 & !z1, x1 & z1, !x1 & z1);
            let (qx, qy, qz) = (x2 & !z2, x2 & z2, !x2 & z2);
            plus += ((px & qy) | (py & qz) | (pz & qx)).count_ones();
            minus += ((py & qx) | (pz & qy) | (px & qz)).count_ones();
            self.x[w] = x1 ^ x2;
            self.z[w] = z1 ^ z2;
        }
        let k = self.phase.0 as i64 + other.phase.0 as i64 + plus as i64 - minus as i64;
        self.phase = Phase::from_exponent(k);
    }

    /// Symplectic inner product over GF(2): `false` when the strings commute.
    pub fn symplectic(&self, other: &PauliString) -> bool {
        debug_assert_eq!(self.n, other.n);
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones();
        }
        acc & 1 == 1
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::size(self.n, other.n));
        }
        Ok(!self.symplectic(other))
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> PauliString {
        let mut out = self.clone();
        out.phase = self.phase.conj();
        out
    }

    /// Same operator on a register of `n` qubits (`n` must cover the support).
    pub fn resized(&self, n: usize) -> PauliString {
        let mut out = PauliString::identity(n);
        for (q, p) in self.letters() {
            out.set(q, p);
        }
        out.phase = self.phase;
        out
    }

    /// Key for the deterministic total order used when reporting witnesses:
    /// compares the sorted `(qubit, letter)` lists, then the phase.
    pub fn lex_key(&self) -> (Vec<(usize, Pauli)>, Phase) {
        (self.letters(), self.phase)
    }

    /// Renders with numeric qubit labels: `-i X_0 Z_3`.
    pub fn render(&self) -> String {
        self.render_with(|q| q.to_string())
    }

    /// Renders as `[sign][i ]P_label P_label …`, or `I` for the identity.
    pub fn render_with<F: Fn(usize) -> String>(&self, label: F) -> String {
        let mut s = String::from(match self.phase.0 {
            0 => "",
            1 => "i ",
            2 => "-",
            _ => "-i ",
        });
        let letters = self.letters();
        if letters.is_empty() {
            s.push('I');
        }
        for (k, (q, p)) in letters.into_iter().enumerate() {
            if k > 0 {
                s.push(' ');
            }
            s.push(p.as_char());
            s.push('_');
            s.push_str(&label(q));
        }
        s
    }

    pub fn render_labeled(&self, labels: &[String]) -> String {
        self.render_with(|q| labels[q].clone())
    }

    /// Inverse of [`render`](Self::render) on an `n`-qubit register.
    pub fn parse(text: &str, n: usize) -> Result<PauliString> {
        Self::parse_with(text, n, |l| l.parse::<usize>().ok())
    }

    /// Inverse of [`render_labeled`](Self::render_labeled).
    pub fn parse_labeled(text: &str, labels: &[String]) -> Result<PauliString> {
        Self::parse_with(text, labels.len(), |l| labels.iter().position(|x| x == l))
    }

    fn parse_with<F: Fn(&str) -> Option<usize>>(text: &str, n: usize, lookup: F) -> Result<PauliString> {
        let (phase, body) = split_phase(text.trim());
        let mut out = PauliString::identity(n);
        let body = body.trim();
        if body != "I" {
            if body.is_empty() {
                return Err(Error::Parse(format!("empty Pauli string {text:?}")));
            }
            for tok in body.split_whitespace() {
                let (letter, label) = tok
                    .split_once('_')
                    .ok_or_else(|| Error::Parse(format!("token {tok:?} is not of the form P_label")))?;
                let p = match letter {
                    "X" => Pauli::X,
                    "Y" => Pauli::Y,
                    "Z" => Pauli::Z,
                    _ => return Err(Error::Parse(format!("bad Pauli letter in {tok:?}"))),
                };
                let q = lookup(label).ok_or_else(|| Error::Parse(format!("unknown qubit label {label:?}")))?;
                if q >= n {
                    return Err(Error::Parse(format!("qubit {q} out of range for {n} qubits")));
                }
                if out.get(q) != Pauli::I {
                    return Err(Error::Parse(format!("qubit label {label:?} repeated")));
                }
                out.set(q, p);
            }
        }
        out.phase = phase;
        Ok(out)
    }

    /// Dense letter rendering, qubit 0 first, with the phase prefix.
    pub fn to_letters(&self) -> String {
        let mut s = String::from(match self.phase.0 {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        });
        s.extend((0..self.n).map(|q| self.get(q).as_char()));
        s
    }
}

fn split_phase(text: &str) -> (Phase, &str) {
    let (neg, rest) = match text.as_bytes().first() {
        Some(b'-') => (true, &text[1..]),
        Some(b'+') => (false, &text[1..]),
        _ => (false, text),
    };
    let rest = rest.trim_start();
    let (imag, rest) = match rest.strip_prefix('i') {
        Some(r) => (true, r),
        None => (false, rest),
    };
    let k = (if neg { 2 } else { 0 }) + imag as i64;
    (Phase::from_exponent(k), rest)
}

impl Mul for &PauliString {
    type Output = PauliString;
    fn mul(self, rhs: &PauliString) -> PauliString {
        let mut out = self.clone();
        out.mul_assign_right(rhs);
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({})", self.render())
    }
}

/// Free-function form of [`PauliString::multiply`].
pub fn multiply(p: &PauliString, q: &PauliString) -> Result<PauliString> {
    p.multiply(q)
}

/// Free-function form of [`PauliString::commutes`].
pub fn commutes(p: &PauliString, q: &PauliString) -> Result<bool> {
    p.commutes(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        PauliString::from_letters(s).unwrap()
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        assert_eq!(&p("X") * &p("Z"), p("-iY"));
        assert_eq!(&p("Z") * &p("X"), p("iY"));
        assert_eq!(&p("X") * &p("Y"), p("iZ"));
        assert_eq!(&p("Y") * &p("Y"), p("I"));
    }

    #[test]
    fn identity_is_neutral() {
        let q = p("-iXYZIZ");
        assert_eq!(&p("IIIII") * &q, q);
        assert_eq!(&q * &p("IIIII"), q);
    }

    #[test]
    fn yyyy_from_xz_products() {
        // (X_0 Z_1)(X_1 Z_2)(X_2 Z_3)(X_3 Z_0) on a four-qubit ring
        let a = p("XZII");
        let b = p("IXZI");
        let c = p("IIXZ");
        let d = p("ZIIX");
        let s = &(&(&a * &b) * &c) * &d;
        assert_eq!(s, p("-YYYY"));
    }

    #[test]
    fn commutation_basics() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XI").commutes(&p("IZ")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(p("X").commutes(&p("XX")).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(p("IIII").weight(), 0);
        assert_eq!(p("XIYZ").weight(), 3);
    }

    #[test]
    fn render_and_parse() {
        let s = p("-iXIYZ");
        assert_eq!(s.render(), "-i X_0 Y_2 Z_3");
        assert_eq!(PauliString::parse(&s.render(), 4).unwrap(), s);
        let labels: Vec<String> = ["ij", "jk", "kl", "li"].iter().map(|s| s.to_string()).collect();
        let t = p("-YYYY");
        assert_eq!(t.render_labeled(&labels), "-Y_ij Y_jk Y_kl Y_li");
        assert_eq!(PauliString::parse_labeled("-Y_ij Y_jk Y_kl Y_li", &labels).unwrap(), t);
        assert_eq!(PauliString::parse("-I", 3).unwrap(), PauliString::identity(3).negated());
        assert!(PauliString::parse("Q_0", 2).is_err());
        assert!(PauliString::parse("X_0 X_0", 2).is_err());
        assert!(PauliString::parse("X_5", 2).is_err());
    }

    #[test]
    fn wide_strings_cross_word_boundaries() {
        let n = 130;
        let a = PauliString::from_sparse(n, [(0, Pauli::X), (64, Pauli::Y), (129, Pauli::Z)]);
        let b = PauliString::from_sparse(n, [(64, Pauli::Z), (129, Pauli::X)]);
        // Y·Z = iX on qubit 64, Z·X = iY on qubit 129
        let ab = &a * &b;
        assert_eq!(ab.phase(), Phase::MINUS_ONE);
        assert_eq!(ab.get(64), Pauli::X);
        assert_eq!(ab.get(129), Pauli::Y);
        assert!(a.commutes(&b).unwrap());
        assert_eq!(a.support(), vec![0, 64, 129]);
    }
}
