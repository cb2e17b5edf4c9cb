//! CSV writers for harness rows. Floats are written in scientific notation
//! with 17 significant digits, which round-trips every `f64`.

use std::io::Write;

use crate::harness::{CallRatioRow, ExperimentRow, PrecisionRow, RegionRow, SweepRow};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub trait CsvRow {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

impl CsvRow for SweepRow {
    const HEADER: &'static [&'static str] = &["a_true", "a_hat", "abs_err", "seed"];
    fn fields(&self) -> Vec<String> {
        vec![
            fmt_f64(self.a_true),
            fmt_f64(self.a_hat),
            fmt_f64(self.abs_err),
            self.seed.to_string(),
        ]
    }
}

impl CsvRow for PrecisionRow {
    const HEADER: &'static [&'static str] = &["a_true", "n_shot", "eps_achieved", "runs"];
    fn fields(&self) -> Vec<String> {
        vec![
            fmt_f64(self.a_true),
            self.n_shot.to_string(),
            fmt_f64(self.eps_achieved),
            self.runs.to_string(),
        ]
    }
}

impl CsvRow for RegionRow {
    const HEADER: &'static [&'static str] = &["a_true", "eps_achieved", "runs"];
    fn fields(&self) -> Vec<String> {
        vec![
            fmt_f64(self.a_true),
            fmt_f64(self.eps_achieved),
            self.runs.to_string(),
        ]
    }
}

impl CsvRow for CallRatioRow {
    const HEADER: &'static [&'static str] = &["d", "n_calls", "n_calls_jittered", "ratio"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.d.to_string(),
            self.n_calls.to_string(),
            self.n_calls_jittered.to_string(),
            fmt_f64(self.ratio),
        ]
    }
}

pub fn write_csv<R: CsvRow, W: Write>(rows: &[R], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(R::HEADER)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Writes rows of any mode. Rows must all be of one mode; exceptional lists
/// are written as a single `a_k` column.
pub fn write_rows<W: Write>(rows: &[ExperimentRow], out: W) -> csv::Result<()> {
    fn pick<R: Copy>(rows: &[ExperimentRow], f: impl Fn(&ExperimentRow) -> Option<R>) -> Vec<R> {
        rows.iter()
            .map(|r| f(r).expect("rows of a single mode"))
            .collect()
    }
    match rows.first() {
        None => Ok(()),
        Some(ExperimentRow::Sweep(_)) => write_csv(
            &pick(rows, |r| match r {
                ExperimentRow::Sweep(x) => Some(*x),
                _ => None,
            }),
            out,
        ),
        Some(ExperimentRow::PrecisionCurve(_)) => write_csv(
            &pick(rows, |r| match r {
                ExperimentRow::PrecisionCurve(x) => Some(*x),
                _ => None,
            }),
            out,
        ),
        Some(ExperimentRow::ExceptionalRegion(_)) => write_csv(
            &pick(rows, |r| match r {
                ExperimentRow::ExceptionalRegion(x) => Some(*x),
                _ => None,
            }),
            out,
        ),
        Some(ExperimentRow::CallRatio(_)) => write_csv(
            &pick(rows, |r| match r {
                ExperimentRow::CallRatio(x) => Some(*x),
                _ => None,
            }),
            out,
        ),
        Some(ExperimentRow::Exceptional(_)) => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["a_k"])?;
            for a in pick(rows, |r| match r {
                ExperimentRow::Exceptional(x) => Some(*x),
                _ => None,
            }) {
                w.write_record([fmt_f64(a)])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}
