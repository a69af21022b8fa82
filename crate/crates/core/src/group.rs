//! Abelian Pauli subgroups and membership solving over GF(2).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Phase, PauliString};

/// Outcome of [`StabilizerGroup::contains`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    /// The string is an element of the group, phase included.
    Member,
    /// `-p` (or `±i·p`) is in the group but `p` is not.
    MemberUpToSign,
    NonMember,
}

impl Membership {
    /// Member with either sign.
    pub fn in_group_up_to_sign(self) -> bool {
        !matches!(self, Membership::NonMember)
    }
}

/// A stabilizer group: commuting generators plus a fully reduced row-echelon
/// basis whose rows are themselves group elements (so they carry exact phases).
#[derive(Debug, Clone)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliString>,
    // (pivot, row); pivot < n is an X bit, pivot >= n the Z bit of qubit pivot - n.
    basis: Vec<(usize, PauliString)>,
}

fn sym_bit(p: &PauliString, idx: usize) -> bool {
    let n = p.num_qubits();
    let (words, i) = if idx < n { (p.x_words(), idx) } else { (p.z_words(), idx - n) };
    words[i / 64] >> (i % 64) & 1 == 1
}

fn first_bit(p: &PauliString) -> Option<usize> {
    let n = p.num_qubits();
    for (w, &word) in p.x_words().iter().enumerate() {
        if word != 0 {
            return Some(w * 64 + word.trailing_zeros() as usize);
        }
    }
    for (w, &word) in p.z_words().iter().enumerate() {
        if word != 0 {
            return Some(n + w * 64 + word.trailing_zeros() as usize);
        }
    }
    None
}

impl StabilizerGroup {
    /// Builds the group generated by `generators`. Dependent generators are
    /// allowed as long as they are consistent; the group must be abelian and
    /// must not contain `-I`.
    pub fn new(n: usize, generators: Vec<PauliString>) -> Result<Self> {
        for g in &generators {
            if g.num_qubits() != n {
                return Err(Error::size(n, g.num_qubits()));
            }
            if !g.is_hermitian() {
                return Err(Error::invariant(format!("generator {g} is not Hermitian")));
            }
        }
        for (a, ga) in generators.iter().enumerate() {
            for (b, gb) in generators.iter().enumerate().skip(a + 1) {
                if ga.symplectic(gb) {
                    return Err(Error::invariant(format!("generators {a} and {b} anticommute")));
                }
            }
        }
        let mut group = StabilizerGroup { n, generators: Vec::new(), basis: Vec::new() };
        for g in generators {
            group.insert(g)?;
        }
        Ok(group)
    }

    fn insert(&mut self, g: PauliString) -> Result<()> {
        let r = self.reduce(&g);
        match first_bit(&r) {
            None => {
                if r.phase() != Phase::ONE {
                    return Err(Error::invariant(format!("generator {g} makes -I an element of the group")));
                }
            }
            Some(pivot) => {
                for (_, row) in self.basis.iter_mut() {
                    if sym_bit(row, pivot) {
                        row.mul_assign_right(&r);
                    }
                }
                self.basis.push((pivot, r));
            }
        }
        self.generators.push(g);
        Ok(())
    }

    /// Multiplies `p` by basis rows until no pivot bit of the basis remains.
    fn reduce(&self, p: &PauliString) -> PauliString {
        let mut r = p.clone();
        for (pivot, row) in &self.basis {
            if sym_bit(&r, *pivot) {
                r.mul_assign_right(row);
            }
        }
        r
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// Number of independent generators.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Rows of the reduced basis.
    pub fn basis(&self) -> impl Iterator<Item = &PauliString> {
        self.basis.iter().map(|(_, r)| r)
    }

    /// Decides membership of `p` by solving the GF(2) system against the
    /// reduced basis and comparing the accumulated phase.
    pub fn contains(&self, p: &PauliString) -> Membership {
        assert_eq!(p.num_qubits(), self.n, "Pauli string length differs from group");
        // r = p · (product of used rows); p is in the group up to phase iff r is ∝ I.
        let r = self.reduce(p);
        if !r.is_identity_up_to_phase() {
            return Membership::NonMember;
        }
        // rows commute and square to +I, so p = r · rows and p ∈ S iff r = +I
        if r.phase() == Phase::ONE {
            Membership::Member
        } else {
            Membership::MemberUpToSign
        }
    }

    pub fn commutes_with_all(&self, p: &PauliString) -> bool {
        self.generators.iter().all(|g| !g.symplectic(p))
    }

    /// The group element `∏_{i ∈ mask} basis_i` (test and enumeration helper).
    /// Only the first 64 basis rows can be selected.
    pub fn element(&self, mask: u64) -> PauliString {
        let mut acc = PauliString::identity(self.n);
        for (i, (_, row)) in self.basis.iter().take(64).enumerate() {
            if mask >> i & 1 == 1 {
                acc.mul_assign_right(row);
            }
        }
        acc
    }
}

/// Free-function form of [`StabilizerGroup::contains`].
pub fn group_contains(group: &StabilizerGroup, p: &PauliString) -> Membership {
    group.contains(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        PauliString::from_letters(s).unwrap()
    }

    #[test]
    fn generators_and_products_are_members() {
        let g = StabilizerGroup::new(4, vec![p("XXXX"), p("ZZZZ"), p("-ZZII")]).unwrap();
        assert_eq!(g.rank(), 3);
        for gen in g.generators() {
            assert_eq!(g.contains(gen), Membership::Member);
        }
        assert_eq!(g.contains(&p("-IIZZ")), Membership::Member);
        assert_eq!(g.contains(&p("IIZZ")), Membership::MemberUpToSign);
        assert_eq!(g.contains(&p("YYYY")), Membership::Member);
        assert_eq!(g.contains(&p("-YYYY")), Membership::MemberUpToSign);
        assert_eq!(g.contains(&p("XIII")), Membership::NonMember);
    }

    #[test]
    fn rejects_minus_identity_and_anticommuting_sets() {
        assert!(StabilizerGroup::new(2, vec![p("ZZ"), p("-ZZ")]).is_err());
        assert!(StabilizerGroup::new(2, vec![p("XI"), p("ZI")]).is_err());
        let g = StabilizerGroup::new(2, vec![p("ZZ"), p("ZZ")]).unwrap();
        assert_eq!(g.rank(), 1);
    }
}
