use mlsc::analysis::{distance_up_to, single_errors_distinct, undetected_up_to, DistanceVerdict};
use mlsc::encoding::StabilizerKind;
use mlsc::lattice::{build_lattice, Boundary};
use mlsc::lowering::{hopping_weight, occupation_weight};
use mlsc::mlsc::{build_open_boundary, corner_profile, encode_pattern, shipped_pattern, ConjugateSource, Offset, OPEN_OFFSET};
use mlsc::{Pauli, PauliString};

#[test]
fn torus_8x8_weights_and_distance() {
    let g = build_lattice(8, 8, Boundary::Torus, false).unwrap();
    let enc = encode_pattern(&g, &shipped_pattern(), Offset::default()).unwrap();
    enc.verify().unwrap();
    assert_eq!(enc.num_qubits(), 128);
    assert!(single_errors_distinct(&enc));
    assert_eq!(distance_up_to(&enc, 3).unwrap().verdict, DistanceVerdict::Exact(3));

    for v in 0..g.num_vertices() {
        assert_eq!(enc.vertex_op(v).weight(), 3);
        assert_eq!(occupation_weight(&enc, v).unwrap(), 3);
    }
    let hops: Vec<usize> = g.edges().iter().map(|&(a, b)| hopping_weight(&enc, a, b).unwrap()).collect();
    assert_eq!(hops.iter().max(), Some(&4));
    assert_eq!(hops.iter().min(), Some(&3));

    let plaquettes: Vec<usize> =
        enc.stabilizers().iter().filter(|s| s.kind == StabilizerKind::Loop).map(|s| s.pauli.weight()).collect();
    assert_eq!(plaquettes.iter().min(), Some(&4));
    assert_eq!(plaquettes.iter().max(), Some(&10));
}

#[test]
fn red_plaquette_and_corner_syndromes() {
    let g = build_lattice(8, 8, Boundary::Torus, false).unwrap();
    let enc = encode_pattern(&g, &shipped_pattern(), Offset::default()).unwrap();
    // type-0 vertex at (4, 4) is the upper-left corner of a red plaquette
    let red = enc.loop_stabilizer(&g.plaquette(4, 4)).unwrap();
    let cyc = g.plaquette(4, 4);
    let own: Vec<(usize, Pauli)> = cyc.windows(2).map(|w| (g.edge_index(w[0], w[1]).unwrap(), Pauli::Z)).collect();
    assert_eq!(red, PauliString::from_sparse(g.num_qubits(), own).negated());
    // X and Z on the up, left, right, down edges at m
    assert_eq!(corner_profile(&shipped_pattern()).unwrap(), [4, 2, 4, 2, 2, 2, 2, 2]);
}

#[test]
fn open_4x4_boundary_code() {
    let g = build_lattice(4, 4, Boundary::Open, true).unwrap();
    let (enc, fam) = build_open_boundary(&g, &shipped_pattern(), OPEN_OFFSET).unwrap();
    assert_eq!(g.num_edges(), 24);
    assert_eq!(fam.len(), 16);
    assert_eq!(enc.num_qubits(), 40);
    let boundary = enc.stabilizers().iter().filter(|s| s.kind == StabilizerKind::Boundary).count();
    let bulk = enc.stabilizers().iter().filter(|s| s.kind == StabilizerKind::Loop).count();
    assert_eq!((bulk, boundary), (9, 16));
    assert_eq!(enc.group().rank(), 25);
    fam.check_ladder().unwrap();
    assert!(fam.c_source.iter().all(|&s| s == ConjugateSource::Rule));

    // A_0 is D_15 D_0 up to phase; C_15 is Z on the left dangling edge at the corner
    let a0 = fam.d[15].multiply(&fam.d[0]).unwrap();
    assert_eq!(a0.letters(), fam.a[0].letters());
    let left = g.num_edges() + 15;
    assert_eq!(fam.c[15], PauliString::single(g.num_qubits(), left, Pauli::Z));

    let report = undetected_up_to(&enc, 2).unwrap();
    assert_eq!(report.verdict, DistanceVerdict::Above(2), "{:?}", report.witness.map(|w| enc.render(&w)));
    assert!(single_errors_distinct(&enc));
}

#[test]
fn open_4x4_other_layouts_collide() {
    let g = build_lattice(4, 4, Boundary::Open, true).unwrap();
    for dr in [0, 2] {
        for dc in 0..2 {
            assert!(build_open_boundary(&g, &shipped_pattern(), Offset { dr, dc }).is_err());
        }
    }
}

#[test]
fn shipped_torus_definition_loads() {
    use mlsc::mlsc::{load_code_definition_json, CodeDefinition};
    let g = build_lattice(8, 8, Boundary::Torus, false).unwrap();
    let def = CodeDefinition::from_pattern("mlsc-8x8", &g, &shipped_pattern(), Offset::default(), Some(3)).unwrap();
    let text = serde_json::to_string(&def.to_document()).unwrap();
    let back = load_code_definition_json(&text).unwrap();
    let cyc = g.plaquette(4, 4);
    let own = cyc.windows(2).map(|w| (g.edge_index(w[0], w[1]).unwrap(), Pauli::Z));
    assert_eq!(back.encoding().loop_stabilizer(&cyc).unwrap(), PauliString::from_sparse(128, own).negated());
    assert_eq!(back.vertex_types.as_ref().unwrap()[g.vertex_at(4, 4).unwrap()], 0);
}

#[test]
fn open_definition_round_trips() {
    use mlsc::mlsc::{load_code_definition_json, CodeDefinition};
    let g = build_lattice(4, 4, Boundary::Open, true).unwrap();
    let def = CodeDefinition::open_boundary("open-4x4", &g, &shipped_pattern(), OPEN_OFFSET).unwrap();
    let mut doc = def.to_document();
    let back = load_code_definition_json(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(back.encoding().group().rank(), 25);
    // a C that no longer anticommutes with its D is caught
    doc.boundary.as_mut().unwrap().c[3] = "Z_0".into();
    assert!(matches!(
        mlsc::mlsc::load_code_definition(&doc),
        Err(mlsc::Error::Rejected(mlsc::Violation::Boundary { family: 'C', index: 3, .. }))
    ));
}
