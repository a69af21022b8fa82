//! Dense-matrix oracle for small systems. Everything here is built from
//! explicit 2x2 matrices and Kronecker products, independently of the
//! bit-packed operators in the library.
#![allow(dead_code)]

use mlsc::encoding::Encoding;
use mlsc::majorana::{MajoranaOperator, QuadraticGenerator};
use mlsc::{Pauli, PauliString, Phase};
use num_complex::Complex64;

pub const TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub dim: usize,
    pub a: Vec<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Mat {
    pub fn zeros(dim: usize) -> Mat {
        Mat { dim, a: vec![c(0.0, 0.0); dim * dim] }
    }

    pub fn eye(dim: usize) -> Mat {
        let mut m = Mat::zeros(dim);
        for i in 0..dim {
            m.a[i * dim + i] = c(1.0, 0.0);
        }
        m
    }

    fn from2(v: [Complex64; 4]) -> Mat {
        Mat { dim: 2, a: v.to_vec() }
    }

    pub fn pauli(p: Pauli) -> Mat {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        match p {
            Pauli::I => Mat::from2([o, z, z, o]),
            Pauli::X => Mat::from2([z, o, o, z]),
            Pauli::Y => Mat::from2([z, c(0.0, -1.0), c(0.0, 1.0), z]),
            Pauli::Z => Mat::from2([o, z, z, -o]),
        }
    }

    pub fn kron(&self, o: &Mat) -> Mat {
        let d = self.dim * o.dim;
        let mut m = Mat::zeros(d);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let s = self.a[i * self.dim + j];
                if s == c(0.0, 0.0) {
                    continue;
                }
                for k in 0..o.dim {
                    for l in 0..o.dim {
                        m.a[(i * o.dim + k) * d + j * o.dim + l] = s * o.a[k * o.dim + l];
                    }
                }
            }
        }
        m
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let d = self.dim;
        assert_eq!(d, o.dim);
        let mut m = Mat::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let s = self.a[i * d + k];
                if s == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    m.a[i * d + j] += s * o.a[k * d + j];
                }
            }
        }
        m
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat { dim: self.dim, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Mat {
        Mat { dim: self.dim, a: self.a.iter().map(|x| x * s).collect() }
    }

    pub fn dagger(&self) -> Mat {
        let d = self.dim;
        let mut m = Mat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m.a[j * d + i] = self.a[i * d + j].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.a[i * self.dim + i]).sum()
    }

    pub fn close(&self, o: &Mat) -> bool {
        self.dim == o.dim && self.a.iter().zip(&o.a).all(|(x, y)| (x - y).norm() < TOL)
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.norm() < TOL)
    }
}

pub fn phase_value(p: Phase) -> Complex64 {
    [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.exponent() as usize]
}

/// Qubit 0 is the leftmost tensor factor.
pub fn pauli_matrix(p: &PauliString) -> Mat {
    let mut m = Mat::eye(1);
    for q in 0..p.num_qubits() {
        m = m.kron(&Mat::pauli(p.get(q)));
    }
    m.scale(phase_value(p.phase()))
}

/// Jordan-Wigner Majoranas `f_{2k} = Z..Z X_k`, `f_{2k+1} = Z..Z Y_k` on
/// `n_modes` qubits.
pub fn jw_majoranas(n_modes: usize) -> Vec<Mat> {
    let mut out = Vec::new();
    for k in 0..n_modes {
        for p in [Pauli::X, Pauli::Y] {
            let mut m = Mat::eye(1);
            for q in 0..n_modes {
                let l = if q < k {
                    Pauli::Z
                } else if q == k {
                    p
                } else {
                    Pauli::I
                };
                m = m.kron(&Mat::pauli(l));
            }
            out.push(m);
        }
    }
    out
}

pub fn majorana_matrix(m: &MajoranaOperator, jw: &[Mat]) -> Mat {
    let dim = jw[0].dim;
    let mut acc = Mat::eye(dim);
    for k in m.support() {
        acc = acc.mul(&jw[k]);
    }
    acc.scale(phase_value(m.phase()))
}

/// `c_k = (f_{2k} + i f_{2k+1}) / 2`.
pub fn annihilator(jw: &[Mat], k: usize) -> Mat {
    jw[2 * k].add(&jw[2 * k + 1].scale(c(0.0, 1.0))).scale(c(0.5, 0.0))
}

/// `∏ (1 + S) / 2` over the encoding's stabilizer generators.
pub fn code_projector(enc: &Encoding) -> Mat {
    let d = 1 << enc.num_qubits();
    let mut p = Mat::eye(d);
    for s in enc.stabilizer_paulis() {
        p = p.mul(&Mat::eye(d).add(&pauli_matrix(&s)).scale(c(0.5, 0.0)));
    }
    p
}

/// One nonzero per row: row `i` holds `val[i]` in column `col[i]`.
#[derive(Clone, Debug)]
pub struct Mono {
    pub col: Vec<usize>,
    pub val: Vec<Complex64>,
}

impl Mono {
    pub fn from_dense(m: &Mat) -> Mono {
        let d = m.dim;
        let mut col = vec![0; d];
        let mut val = vec![c(0.0, 0.0); d];
        for i in 0..d {
            let nz: Vec<usize> = (0..d).filter(|&j| m.a[i * d + j].norm() > TOL).collect();
            assert_eq!(nz.len(), 1, "not monomial");
            col[i] = nz[0];
            val[i] = m.a[i * d + nz[0]];
        }
        Mono { col, val }
    }

    pub fn eye(d: usize) -> Mono {
        Mono { col: (0..d).collect(), val: vec![c(1.0, 0.0); d] }
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let col = self.col.iter().map(|&k| o.col[k]).collect();
        let val = self.val.iter().zip(&self.col).map(|(v, &k)| v * o.val[k]).collect();
        Mono { col, val }
    }

    /// `Tr(P · self)` for a dense `P`.
    pub fn trace_against(&self, p: &Mat) -> Complex64 {
        let d = p.dim;
        (0..d).map(|k| p.a[self.col[k] * d + k] * self.val[k]).sum()
    }
}

/// Projector onto the fermionic parity sector the encoding lives in, or
/// the identity when the vertex images do not pin the parity.
pub fn parity_projector(enc: &Encoding, code: &Mat, jw: &[Mat]) -> Mat {
    let n = enc.num_qubits();
    let v = enc.graph().num_vertices();
    let mut prod = PauliString::identity(n);
    let mut ferm = Mat::eye(jw[0].dim);
    for k in 0..v {
        prod = prod.multiply(enc.vertex_op(k)).unwrap();
        ferm = ferm.mul(&majorana_matrix(&QuadraticGenerator::Vertex(k).operator(v), jw));
    }
    let t = code.mul(&pauli_matrix(&prod)).trace() / code.trace();
    if (t.norm() - 1.0).abs() > TOL {
        return Mat::eye(jw[0].dim);
    }
    Mat::eye(jw[0].dim).add(&ferm.scale(t)).scale(c(0.5, 0.0))
}

/// Compares the two representations of the generator algebra: for every
/// ordered subset word of generators, the trace of its qubit image over the
/// code space equals the trace of its fermionic image over the matching
/// parity sector. Equal characters on the whole group make the
/// representations equivalent, phases included. With `same_dim` false the
/// traces are compared per dimension, for codes that carry extra modes.
pub fn characters_agree(enc: &Encoding, same_dim: bool) -> Result<(), String> {
    let v = enc.graph().num_vertices();
    let jw = jw_majoranas(v);
    let code = code_projector(enc);
    let par = parity_projector(enc, &code, &jw);
    let gens = enc.generators();
    let qubit: Vec<Mono> = gens.iter().map(|&g| Mono::from_dense(&pauli_matrix(&enc.generator_image(g).unwrap()))).collect();
    let ferm: Vec<Mono> = gens.iter().map(|g| Mono::from_dense(&majorana_matrix(&g.operator(v), &jw))).collect();
    let (scale_q, scale_f) = if same_dim { (1.0, 1.0) } else { (code.trace().re, par.trace().re) };
    let mut words: Vec<(Mono, Mono)> = vec![(Mono::eye(code.dim), Mono::eye(par.dim))];
    for mask in 1usize..(1 << gens.len()) {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let (q, f) = &words[mask ^ (1 << top)];
        let (q, f) = (q.mul(&qubit[top]), f.mul(&ferm[top]));
        let (tq, tf) = (q.trace_against(&code) / scale_q, f.trace_against(&par) / scale_f);
        if (tq - tf).norm() > 1e-6 {
            return Err(format!("word {mask:b}: code trace {tq}, fermion trace {tf}"));
        }
        words.push((q, f));
    }
    let (tq, tf) = (code.trace(), par.trace());
    if same_dim && (tq - tf).norm() > 1e-6 {
        return Err(format!("code space dimension {tq} vs sector dimension {tf}"));
    }
    Ok(())
}

/// Whether `A x = b` has a solution over GF(2), by row reduction of the
/// augmented matrix.
pub fn gf2_consistent(rows: &[Vec<bool>], rhs: &[bool]) -> bool {
    let mut m: Vec<Vec<bool>> = rows.iter().zip(rhs).map(|(r, &b)| r.iter().copied().chain([b]).collect()).collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c]) else { continue };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    m[rank..].iter().all(|r| !r[cols])
}

/// Vertex-parity constraints of an encoding as a GF(2) system over the
/// qubits: row `k` marks the support of `η̃_k`, the right side is set when
/// `sign(η̃_k) · z_k = -1`.
pub fn vertex_parity_system(enc: &Encoding, occ: &[i8]) -> (Vec<Vec<bool>>, Vec<bool>) {
    let n = enc.num_qubits();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (k, op) in enc.vertex_ops().iter().enumerate() {
        let mut r = vec![false; n];
        for q in op.support() {
            assert_eq!(op.get(q), Pauli::Z);
            r[q] = true;
        }
        let sign = op.phase().sign().unwrap();
        rows.push(r);
        rhs.push(sign * occ[k] < 0);
    }
    (rows, rhs)
}

/// Direct evaluation of every vertex operator on the product state.
pub fn vertex_values(enc: &Encoding, z: &[i8]) -> Vec<i8> {
    enc.vertex_ops()
        .iter()
        .map(|op| op.phase().sign().unwrap() * op.support().iter().map(|&q| z[q]).product::<i8>())
        .collect()
}
