use std::io::Write;

use serde::Serialize;

use crate::config::OutputFormat;
use crate::error::CliResult;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// A record with a fixed CSV layout.
pub trait CsvRow {
    const HEADER: &'static str;
    fn csv(&self) -> String;
}

pub fn write_csv<W: Write, R: CsvRow>(out: &mut W, rows: &[R]) -> CliResult<()> {
    writeln!(out, "{}", R::HEADER)?;
    for r in rows {
        writeln!(out, "{}", r.csv())?;
    }
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(out: &mut W, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_rows<W: Write, R: CsvRow + Serialize>(
    out: &mut W,
    rows: &[R],
    format: OutputFormat,
) -> CliResult<()> {
    match format {
        OutputFormat::Csv => write_csv(out, rows),
        OutputFormat::Json => write_json(out, rows),
    }
}
