//! Text rendering and JSON records for command output.

use mlsc::analysis::{DistanceReport, DistanceVerdict, Range, WeightRow};
use mlsc::encoding::Encoding;
use serde::Serialize;

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells.iter().zip(&width).map(|(c, &w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|s| s.to_string()).collect());
    for r in rows {
        out += &line(r.clone());
    }
    out
}

pub fn range(r: Option<Range>) -> String {
    match r {
        None => "-".into(),
        Some(r) if r.min == r.max => r.min.to_string(),
        Some(r) => format!("{}-{}", r.min, r.max),
    }
}

pub fn verdict(v: DistanceVerdict) -> String {
    match v {
        DistanceVerdict::Exact(d) => d.to_string(),
        DistanceVerdict::Above(w) => format!(">{w}"),
    }
}

pub fn weight_table(rows: &[WeightRow]) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.qubits.to_string(),
                verdict(r.distance),
                range(r.occupation),
                range(r.hopping),
                range(r.stabilizer),
            ]
        })
        .collect();
    table(&["code", "qubits", "distance", "occupation", "hopping", "stabilizer"], &body)
}

#[derive(Debug, Serialize)]
pub struct DistanceRecord {
    pub schema: &'static str,
    pub code: String,
    pub bound: usize,
    #[serde(flatten)]
    pub verdict: DistanceVerdict,
    pub witness: Option<String>,
    /// Undetectable logicals per weight, from weight 1.
    pub undetectable: Vec<u64>,
}

impl DistanceRecord {
    pub fn new(code: &str, enc: &Encoding, r: &DistanceReport) -> Self {
        DistanceRecord {
            schema: "mlsc.distance.v1",
            code: code.to_string(),
            bound: r.bound,
            verdict: r.verdict,
            witness: r.witness.as_ref().map(|w| enc.render(w)),
            undetectable: r.undetectable.clone(),
        }
    }

    pub fn text(&self) -> String {
        let mut out = format!("code       {}\n", self.code);
        out += &format!("bound      {}\n", self.bound);
        out += &format!("distance   {}\n", verdict(self.verdict));
        if let Some(w) = &self.witness {
            out += &format!("witness    {w}\n");
        }
        let counts: Vec<String> = self.undetectable.iter().map(|c| c.to_string()).collect();
        out += &format!("logicals   {}\n", counts.join(" "));
        out
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub schema: &'static str,
    pub exit_code: i32,
    pub kind: &'static str,
    pub message: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_align() {
        let t = table(&["a", "bb"], &[vec!["long".into(), "1".into()], vec!["x".into(), "22".into()]]);
        assert_eq!(t, "a     bb\nlong  1\nx     22\n");
    }

    #[test]
    fn ranges() {
        assert_eq!(range(Some(Range { min: 3, max: 4 })), "3-4");
        assert_eq!(range(Some(Range { min: 6, max: 6 })), "6");
        assert_eq!(range(None), "-");
    }
}
