//! Lattice specs, encoding construction and document loading.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;
use mlsc::aux::{block_encode, bvc_encode, BvcLayout};
use mlsc::bksf::bksf_encode;
use mlsc::encoding::{Encoding, EncodingDocument, ParitySector, ENCODING_SCHEMA};
use mlsc::lattice::{build_lattice, Boundary, HoppingGraph};
use mlsc::mlsc::{
    load_code_definition, shipped_pattern, CodeDefinition, CodeDocument, MlscPattern, Offset, PatternDocument, CODE_SCHEMA,
    OPEN_OFFSET,
};
use mlsc::{Error, Result};
use serde::de::DeserializeOwned;

/// `RxC` or `RxC:open` / `RxC:torus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeSpec {
    pub rows: usize,
    pub cols: usize,
    pub boundary: Boundary,
}

impl FromStr for LatticeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (dims, bc) = s.split_once(':').unwrap_or((s, "open"));
        let (r, c) = dims.split_once(['x', 'X']).ok_or_else(|| format!("expected RxC[:open|:torus], got {s:?}"))?;
        let rows = r.trim().parse().map_err(|_| format!("bad row count {r:?}"))?;
        let cols = c.trim().parse().map_err(|_| format!("bad column count {c:?}"))?;
        let boundary = match bc {
            "open" => Boundary::Open,
            "torus" => Boundary::Torus,
            other => return Err(format!("unknown boundary {other:?} (open or torus)")),
        };
        Ok(LatticeSpec { rows, cols, boundary })
    }
}

impl std::fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let bc = if self.boundary == Boundary::Torus { "torus" } else { "open" };
        write!(f, "{}x{}:{bc}", self.rows, self.cols)
    }
}

impl LatticeSpec {
    pub fn build(&self, dangling: bool) -> Result<HoppingGraph> {
        build_lattice(self.rows, self.cols, self.boundary, dangling)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Bksf,
    Mlsc,
    Bvc,
    Block,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SectorArg {
    Even,
    Odd,
}

impl From<SectorArg> for ParitySector {
    fn from(s: SectorArg) -> Self {
        match s {
            SectorArg::Even => ParitySector::Even,
            SectorArg::Odd => ParitySector::Odd,
        }
    }
}

/// An encoding, with the checked definition behind it when there is one.
pub struct Loaded {
    pub name: String,
    pub encoding: Encoding,
    pub definition: Option<CodeDefinition>,
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn load_pattern(path: Option<&Path>) -> Result<MlscPattern> {
    match path {
        None => Ok(shipped_pattern()),
        Some(p) => MlscPattern::from_document(&parse_json::<PatternDocument>(&read_text(p)?, "pattern")?),
    }
}

/// Comma-separated closed vertex walk, e.g. `0,1,3,2,0`.
pub fn parse_walk(s: &str) -> Result<Vec<usize>> {
    s.split(',').map(|v| v.trim().parse().map_err(|_| Error::Parse(format!("bad vertex {v:?} in {s:?}")))).collect()
}

/// Builds an encoding in place. `cycle` reorders the BKSF qubits around the
/// vertices of one closed walk before encoding.
pub fn build(
    scheme: SchemeArg,
    lattice: LatticeSpec,
    sector: ParitySector,
    pattern: Option<&Path>,
    cycle: Option<&[usize]>,
) -> Result<Loaded> {
    let name = format!("{}-{}x{}", scheme_name(scheme), lattice.rows, lattice.cols);
    if cycle.is_some() && scheme != SchemeArg::Bksf {
        return Err(Error::Parse("--cycle-ordering applies to the bksf scheme".into()));
    }
    match scheme {
        SchemeArg::Bksf => {
            let mut g = lattice.build(false)?;
            if let Some(c) = cycle {
                g.set_cycle_ordering(c)?;
            }
            let encoding = bksf_encode(&g, sector)?;
            Ok(Loaded { name, encoding, definition: None })
        }
        SchemeArg::Mlsc => {
            let pattern = load_pattern(pattern)?;
            let def = match lattice.boundary {
                Boundary::Torus => CodeDefinition::from_pattern(&name, &lattice.build(false)?, &pattern, Offset::default(), Some(3))?,
                _ => CodeDefinition::open_boundary(&name, &lattice.build(true)?, &pattern, OPEN_OFFSET)?,
            };
            Ok(Loaded { name, encoding: def.encoding().clone(), definition: Some(def) })
        }
        SchemeArg::Bvc | SchemeArg::Block => {
            if lattice.boundary != Boundary::Open {
                return Err(Error::InvalidLattice("auxiliary-mode codes use an open snake layout".into()));
            }
            let layout = BvcLayout { rows: lattice.rows, cols: lattice.cols };
            let code = if scheme == SchemeArg::Bvc { bvc_encode(layout)? } else { block_encode(layout)? };
            Ok(Loaded { name, encoding: code.encoding().clone(), definition: None })
        }
    }
}

pub fn scheme_name(s: SchemeArg) -> &'static str {
    match s {
        SchemeArg::Bksf => "bksf",
        SchemeArg::Mlsc => "mlsc",
        SchemeArg::Bvc => "bvc",
        SchemeArg::Block => "block",
    }
}

/// Loads an encoding or code-definition document, chosen by its schema tag.
/// Loading runs the structural checks of either format.
pub fn load(path: &Path) -> Result<Loaded> {
    let text = read_text(path)?;
    let value: serde_json::Value = parse_json(&text, "document")?;
    let schema = value.get("schema").and_then(|s| s.as_str()).unwrap_or_default().to_string();
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    if schema == ENCODING_SCHEMA {
        let doc: EncodingDocument = parse_json(&text, "encoding")?;
        let encoding = Encoding::from_document(&doc)?;
        Ok(Loaded { name: stem, encoding, definition: None })
    } else if schema == CODE_SCHEMA {
        let doc: CodeDocument = parse_json(&text, "code definition")?;
        let def = load_code_definition(&doc)?;
        Ok(Loaded { name: doc.name.clone(), encoding: def.encoding().clone(), definition: Some(def) })
    } else {
        Err(Error::Parse(format!("unknown document schema {schema:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_specs() {
        let s: LatticeSpec = "8x8:torus".parse().unwrap();
        assert_eq!((s.rows, s.cols, s.boundary), (8, 8, Boundary::Torus));
        assert_eq!("2x3".parse::<LatticeSpec>().unwrap().boundary, Boundary::Open);
        assert!("2x".parse::<LatticeSpec>().is_err());
        assert!("2x2:mobius".parse::<LatticeSpec>().is_err());
        assert_eq!(s.to_string(), "8x8:torus");
    }
}
