//! Column layout of sweep output and the CSV / JSON-lines writers.
//!
//! Floats are written with 17 significant digits, so parsing a file gives
//! back the exact values. Missing values are empty CSV cells or JSON `null`;
//! a NaN is `NaN` in CSV and `null` in JSON.

use std::io::{self, Write};

use optomech::sweep::SweepRecord;

pub const SCHEMA_NAME: &str = "optomech-sweep";
pub const SCHEMA_VERSION: u32 = 1;

/// Output columns, in the field order of [`SweepRecord`].
pub const COLUMNS: [&str; 38] = [
    "curve",
    "point_index",
    "axis0",
    "axis1",
    "branch_index",
    "n_branches",
    "segment",
    "delta0",
    "delta_eff",
    "delta_eff_wm",
    "input_power",
    "opa_gain",
    "opa_phase",
    "kerr_coeff",
    "bath_temperature",
    "intensity",
    "g1",
    "g1_wm",
    "eta1",
    "eta2",
    "s1",
    "s2",
    "s3",
    "max_real_part",
    "stable",
    "rh_disagreement",
    "n_eff",
    "t_eff",
    "ground_state",
    "e_n",
    "photon_fluct",
    "linearization_ratio",
    "linearization_suspect",
    "lyapunov_residual",
    "min_symplectic",
    "n_eff_analytic",
    "analytic_valid",
    "error",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Str(String),
    Int(usize),
    Float(f64),
    Bool(bool),
    Null,
}

fn opt_f(v: Option<f64>) -> Cell {
    v.map_or(Cell::Null, Cell::Float)
}

pub fn cells(r: &SweepRecord) -> [Cell; 38] {
    use Cell::*;
    [
        Str(r.curve.clone()),
        Int(r.point_index),
        Float(r.axis0),
        opt_f(r.axis1),
        Int(r.branch_index),
        Int(r.n_branches),
        Str(r.segment.as_str().to_string()),
        Float(r.delta0),
        Float(r.delta_eff),
        Float(r.delta_eff_wm),
        Float(r.input_power),
        Float(r.opa_gain),
        Float(r.opa_phase),
        Float(r.kerr_coeff),
        Float(r.bath_temperature),
        Float(r.intensity),
        Float(r.g1),
        Float(r.g1_wm),
        opt_f(r.eta1),
        Float(r.eta2),
        Float(r.s1),
        Float(r.s2),
        Float(r.s3),
        Float(r.max_real_part),
        Bool(r.stable),
        Bool(r.rh_disagreement),
        opt_f(r.n_eff),
        opt_f(r.t_eff),
        r.ground_state.map_or(Null, Bool),
        opt_f(r.e_n),
        opt_f(r.photon_fluct),
        opt_f(r.linearization_ratio),
        Bool(r.linearization_suspect),
        opt_f(r.lyapunov_residual),
        opt_f(r.min_symplectic),
        opt_f(r.n_eff_analytic),
        Bool(r.analytic_valid),
        r.error.clone().map_or(Null, Str),
    ]
}

fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_text(c: &Cell) -> String {
    match c {
        Cell::Str(s) => s.clone(),
        Cell::Int(i) => i.to_string(),
        Cell::Float(x) => float17(*x),
        Cell::Bool(b) => b.to_string(),
        Cell::Null => String::new(),
    }
}

fn json_text(c: &Cell) -> String {
    match c {
        Cell::Str(s) => serde_json::to_string(s).expect("string serialization"),
        Cell::Int(i) => i.to_string(),
        Cell::Float(x) if x.is_finite() => float17(*x),
        Cell::Float(_) | Cell::Null => "null".into(),
        Cell::Bool(b) => b.to_string(),
    }
}

fn io_err(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

/// `# optomech-sweep schema 1` comment, optional gnuplot column index line,
/// then the header row and one row per record.
pub fn write_csv<W: Write>(mut w: W, records: &[SweepRecord], gnuplot_header: bool) -> io::Result<()> {
    writeln!(w, "# {SCHEMA_NAME} schema {SCHEMA_VERSION}")?;
    if gnuplot_header {
        let idx: Vec<String> = COLUMNS.iter().enumerate().map(|(k, c)| format!("{}:{c}", k + 1)).collect();
        writeln!(w, "# columns {}", idx.join(" "))?;
    }
    let mut out = csv::WriterBuilder::new().from_writer(w);
    out.write_record(COLUMNS).map_err(io_err)?;
    for r in records {
        out.write_record(cells(r).iter().map(csv_text)).map_err(io_err)?;
    }
    out.flush()
}

/// Header object with the schema and columns, then one object per line.
pub fn write_json_lines<W: Write>(mut w: W, records: &[SweepRecord]) -> io::Result<()> {
    let header = serde_json::json!({
        "schema": SCHEMA_NAME,
        "schema_version": SCHEMA_VERSION,
        "columns": &COLUMNS[..],
    });
    writeln!(w, "{header}")?;
    for r in records {
        let fields: Vec<String> = COLUMNS
            .iter()
            .zip(cells(r).iter())
            .map(|(k, c)| format!("\"{k}\":{}", json_text(c)))
            .collect();
        writeln!(w, "{{{}}}", fields.join(","))?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use optomech::sweep::{figure_preset, run_sweep};

    #[test]
    fn columns_follow_record_fields() {
        // the csv serializer emits the serde field names in declaration order
        let rec = run_sweep(&figure_preset("fig7").unwrap().curves[0]).unwrap().remove(0);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&rec).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(header, COLUMNS.join(","));
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(float17(0.1), "1.0000000000000001e-1");
        assert_eq!(float17(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(json_text(&Cell::Float(f64::NAN)), "null");
        assert_eq!(csv_text(&Cell::Float(f64::NAN)), "NaN");
    }
}
