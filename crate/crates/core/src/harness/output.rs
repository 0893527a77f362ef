use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::Result;
use crate::harness::ResultRow;

pub const CSV_HEADER: [&str; 14] = [
    "sweep_kind",
    "sweep_value",
    "trial",
    "seed",
    "algorithm",
    "realized_n",
    "total_cost",
    "facility_cost",
    "connection_cost",
    "opt_cost",
    "normalized_cost",
    "failed",
    "n_open_facilities",
    "runtime_ms",
];

/// 17 significant digits, enough to reproduce every double exactly.
fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a header and one line per row (UTF-8, LF endings).
pub fn emit_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.sweep_kind.name().to_string(),
            real(r.sweep_value),
            r.trial.to_string(),
            r.seed.to_string(),
            r.algorithm.name().to_string(),
            r.realized_n.to_string(),
            real(r.total_cost),
            real(r.facility_cost),
            real(r.connection_cost),
            real(r.opt_cost),
            r.normalized_cost.map(real).unwrap_or_default(),
            r.failed.to_string(),
            r.n_open_facilities.to_string(),
            r.runtime_ms.map(real).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    emit_csv(rows, file)
}
