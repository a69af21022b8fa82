mod common;

use common::{annihilator, characters_agree, jw_majoranas, majorana_matrix, pauli_matrix, Mat};
use mlsc::bksf::bksf_encode;
use mlsc::encoding::ParitySector;
use mlsc::lattice::{build_lattice, Boundary, HoppingGraph};
use mlsc::majorana::{commutation_sign, loop_product, majorana_product, MajoranaOperator, QuadraticGenerator};
use mlsc::mlsc::{apply_majorana_transform, MajoranaTransform};
use mlsc::{Pauli, PauliString, Phase};
use num_complex::Complex64;
use proptest::prelude::*;

fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliString> {
    (proptest::collection::vec(0u8..4, n), 0i64..4).prop_map(move |(letters, ph)| {
        let entries = letters.iter().enumerate().map(|(q, &l)| (q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][l as usize]));
        PauliString::from_sparse(entries.len(), entries).with_phase(Phase::from_exponent(ph))
    })
}

fn majorana_strategy(n_modes: usize) -> impl Strategy<Value = MajoranaOperator> {
    (proptest::collection::vec(0..2 * n_modes, 0..7), 0i64..4)
        .prop_map(move |(idx, ph)| MajoranaOperator::from_product(n_modes, Phase::from_exponent(ph), &idx))
}

proptest! {
    #[test]
    fn pauli_products_match_matrices((p, q) in (1usize..=5).prop_flat_map(|n| (pauli_strategy(n), pauli_strategy(n)))) {
        let pq = p.multiply(&q).unwrap();
        prop_assert!(pauli_matrix(&pq).close(&pauli_matrix(&p).mul(&pauli_matrix(&q))));
        let commute = pauli_matrix(&p).mul(&pauli_matrix(&q)).close(&pauli_matrix(&q).mul(&pauli_matrix(&p)));
        prop_assert_eq!(p.commutes(&q).unwrap(), commute);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn majorana_products_match_jordan_wigner(
        (n, a, b) in (1usize..=5).prop_flat_map(|n| (Just(n), majorana_strategy(n), majorana_strategy(n)))
    ) {
        let jw = jw_majoranas(n);
        let (ma, mb) = (majorana_matrix(&a, &jw), majorana_matrix(&b, &jw));
        let ab = majorana_product(&a, &b).unwrap();
        prop_assert!(majorana_matrix(&ab, &jw).close(&ma.mul(&mb)));
        let commute = ma.mul(&mb).close(&mb.mul(&ma));
        prop_assert_eq!(commutation_sign(&a, &b).unwrap() == 1, commute);
    }
}

#[test]
fn triangle_loop_is_identity() {
    let jw = jw_majoranas(3);
    let l = loop_product(3, &[0, 1, 2, 0]).unwrap();
    assert!(majorana_matrix(&l, &jw).close(&Mat::eye(8)));
}

#[test]
fn occupation_is_a_projector() {
    let jw = jw_majoranas(2);
    let eta = majorana_matrix(&QuadraticGenerator::Vertex(0).operator(2), &jw);
    let n = Mat::eye(4).add(&eta).scale(Complex64::new(0.5, 0.0));
    let c = annihilator(&jw, 0);
    assert!(c.dagger().mul(&c).close(&n));
    assert!(n.mul(&n).close(&n));
    // a projector with trace 2 on a 4-dim space: eigenvalues {0, 0, 1, 1}
    assert!((n.trace() - Complex64::new(2.0, 0.0)).norm() < 1e-12);
}

#[test]
fn hopping_expansion_matches_creation_operators() {
    let jw = jw_majoranas(2);
    let (c0, c1) = (annihilator(&jw, 0), annihilator(&jw, 1));
    let hop = c0.dagger().mul(&c1).add(&c1.dagger().mul(&c0));
    let xi = majorana_matrix(&QuadraticGenerator::Edge(0, 1).operator(2), &jw);
    let eta = |k| majorana_matrix(&QuadraticGenerator::Vertex(k).operator(2), &jw);
    let expanded = xi.mul(&eta(1)).add(&eta(0).mul(&xi)).scale(Complex64::new(0.0, -0.5));
    assert!(hop.close(&expanded));
}

#[test]
fn bksf_2x2_is_faithful() {
    let g = build_lattice(2, 2, Boundary::Open, false).unwrap();
    assert_eq!(g.num_qubits(), 4);
    let enc = bksf_encode(&g, ParitySector::Even).unwrap();
    characters_agree(&enc, true).unwrap();
}

/// Connected simple graphs on `n` labelled vertices with at most
/// `max_edges` edges.
fn connected_graphs(n: usize, max_edges: usize) -> Vec<Vec<(usize, usize)>> {
    let all: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << all.len()) {
        let k = mask.count_ones() as usize;
        if k + 1 < n || k > max_edges {
            continue;
        }
        let edges: Vec<(usize, usize)> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
        let mut comp: Vec<usize> = (0..n).collect();
        fn root(c: &mut Vec<usize>, x: usize) -> usize {
            if c[x] != x {
                let r = root(c, c[x]);
                c[x] = r;
            }
            c[x]
        }
        for &(a, b) in &edges {
            let (ra, rb) = (root(&mut comp, a), root(&mut comp, b));
            comp[ra] = rb;
        }
        let r0 = root(&mut comp, 0);
        if (0..n).all(|v| root(&mut comp, v) == r0) {
            out.push(edges);
        }
    }
    out
}

#[test]
fn bksf_on_every_graph_with_at_most_five_edges() {
    let mut count = 0;
    for n in 2..=6 {
        for edges in connected_graphs(n, 5) {
            let g = HoppingGraph::from_edges(n, &edges).unwrap();
            for sector in [ParitySector::Even, ParitySector::Odd] {
                let enc = bksf_encode(&g, sector).unwrap();
                enc.verify().unwrap();
                if let Err(e) = characters_agree(&enc, true) {
                    panic!("{edges:?} {sector:?}: {e}");
                }
            }
            count += 1;
        }
    }
    // labelled connected graphs: 1 + 4 + 37 + (125 + 222) + 1296
    assert_eq!(count, 1685);
}

#[test]
fn transformed_encodings_stay_faithful() {
    for edges in connected_graphs(4, 5) {
        let g = HoppingGraph::from_edges(4, &edges).unwrap();
        let enc = bksf_encode(&g, ParitySector::Even).unwrap();
        for m in [MajoranaTransform::permutation(&[1, 0, 2, 3, 4, 5, 6, 7]).unwrap(), MajoranaTransform::four_majorana().embed(4, &[2, 3, 4, 5]).unwrap()]
        {
            let t = apply_majorana_transform(&enc, &m).unwrap();
            characters_agree(&t, true).unwrap();
        }
    }
}

fn proportional_to(m: &Mat, p: &Mat) -> bool {
    let lambda = m.trace() / p.trace();
    m.close(&p.scale(lambda))
}

#[test]
fn bksf_2x2_distance_matches_code_space_analysis() {
    use mlsc::analysis::{distance_up_to, DistanceVerdict};
    let g = build_lattice(2, 2, Boundary::Open, false).unwrap();
    let enc = bksf_encode(&g, ParitySector::Even).unwrap();
    let code = common::code_projector(&enc);
    assert!((code.trace() - Complex64::new(8.0, 0.0)).norm() < 1e-12);
    let mut counts = [0u64; 4];
    for word in 1u32..256 {
        let letters = (0..4).map(|q| (q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][(word >> (2 * q) & 3) as usize]));
        let e = PauliString::from_sparse(4, letters);
        let m = code.mul(&pauli_matrix(&e)).mul(&code);
        if !proportional_to(&m, &code) {
            counts[e.weight() - 1] += 1;
        }
    }
    let report = distance_up_to(&enc, 4).unwrap();
    // the search stops at the first weight with a logical
    assert_eq!(report.undetectable[..], counts[..report.undetectable.len()]);
    let d = counts.iter().position(|&c| c > 0).map(|i| i + 1).unwrap();
    assert_eq!(report.verdict, DistanceVerdict::Exact(d));
}

#[test]
fn lowered_occupation_is_a_projector_on_the_code_space() {
    use mlsc::lowering::{lower, FermionTerm, TermKind};
    let g = build_lattice(2, 2, Boundary::Open, false).unwrap();
    let enc = bksf_encode(&g, ParitySector::Even).unwrap();
    let code = common::code_projector(&enc);
    for p in 0..4 {
        let sum = lower(&FermionTerm::new(TermKind::Occupation { p }), &enc).unwrap();
        let mut n = Mat::zeros(16);
        for (c, s) in &sum.terms {
            let (re, im) = c.to_f64();
            n = n.add(&pauli_matrix(s).scale(Complex64::new(re, im)));
        }
        let restricted = code.mul(&n).mul(&code);
        assert!(restricted.mul(&restricted).close(&restricted));
        assert!(!restricted.is_zero());
    }
}
