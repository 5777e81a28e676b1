use std::io::Write;

use crate::{CliError, ResultRow, RunConfig};

pub const HEADER: [&str; 6] = [
    "sweep_param",
    "sweep_value",
    "p_out_analytic",
    "p_out_mc",
    "mc_ci95",
    "runtime_ms",
];

// shortest representation that parses back to the same f64
fn field(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Header plus one record per row; missing values are empty fields.
pub fn emit_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.sweep_param.unwrap_or("").to_string(),
            field(r.sweep_value),
            field(r.p_out_analytic),
            field(r.p_out_mc),
            field(r.mc_ci95),
            r.runtime_ms.map(|t| format!("{t:.3}")).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(|source| CliError::Io {
        context: "writing CSV".into(),
        source,
    })
}

/// `# key = value` lines for every effective setting; defaults the
/// reference system leaves open are tagged `(assumed)`.
pub fn write_metadata<W: Write>(cfg: &RunConfig, mut out: W) -> std::io::Result<()> {
    for (key, value, assumed) in &cfg.echo {
        if value.is_empty() {
            continue;
        }
        let tag = if *assumed { " (assumed)" } else { "" };
        writeln!(out, "# {key} = {value}{tag}")?;
    }
    Ok(())
}
