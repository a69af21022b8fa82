//! Majorana loop stabilizer codes on square lattices.

pub mod definition;
pub mod general;
pub mod open;
pub mod pattern;
pub mod search;

use crate::encoding::{cycle_stabilizers, Encoding, EncodingParts, ParitySector, QubitRole, Scheme};
use crate::error::{Error, Result};
use crate::lattice::HoppingGraph;
use crate::pauli::PauliString;

pub use definition::{derive_mlsc, load_code_definition, load_code_definition_json, CodeDefinition, CodeDocument, CodeTables, CODE_SCHEMA};
pub use general::{apply_majorana_transform, modify_logical, MajoranaTransform};
pub use open::{assemble_open_boundary, build_open_boundary, BoundaryFamilies, ConjugateSource, OPEN_OFFSET};
pub use pattern::{shipped_pattern, EdgePattern, MlscPattern, Offset, PatternDocument, COL_PERIOD, ROW_PERIOD};
pub use search::{corner_profile, derive_pattern, enumerate_patterns, DeriveTargets, SearchStats};

/// Instantiates a pattern on a lattice without dangling edges; stabilizers
/// are the loop products over the graph's cycle basis.
pub fn encode_pattern(g: &HoppingGraph, pattern: &MlscPattern, offset: Offset) -> Result<Encoding> {
    let dims = g.dims().ok_or_else(|| Error::InvalidLattice("patterns need a lattice".into()))?;
    if g.boundary() == crate::lattice::Boundary::Torus && (dims.rows % ROW_PERIOD != 0 || dims.cols % COL_PERIOD != 0) {
        return Err(Error::InvalidLattice(format!(
            "{}x{} torus does not fit the {ROW_PERIOD}x{COL_PERIOD} vertex layout",
            dims.rows, dims.cols
        )));
    }
    if !g.dangling().is_empty() {
        return Err(Error::InvalidLattice("use the open-boundary construction for dangling edges".into()));
    }
    let vertex_ops: Vec<PauliString> = (0..g.num_vertices()).map(|v| pattern.vertex_op(g, v, offset)).collect();
    let edge_ops: Vec<PauliString> = (0..g.num_edges()).map(|e| pattern.edge_op(g, e, offset)).collect::<Result<_>>()?;
    let stabilizers = cycle_stabilizers(g, &edge_ops)?;
    Encoding::from_parts(EncodingParts {
        scheme: Scheme::Mlsc,
        labels: g.qubit_labels(),
        roles: vec![QubitRole::Edge; g.num_qubits()],
        vertex_ops,
        edge_ops,
        stabilizers,
        parity: ParitySector::Even,
        graph: g.clone(),
    })
}
