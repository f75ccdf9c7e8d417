use super::benchmark::{ReportRow, Trajectory};
use crate::{Error, Result};

const HEADER: [&str; 8] = [
    "model",
    "ahead",
    "gamma_mape",
    "tr_MAPE",
    "te_MAPE",
    "gamma_smape",
    "tr_SMAPE",
    "te_SMAPE",
];

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::InvalidParameter(format!("report csv: {e}"))
}

fn cells(r: &ReportRow) -> [String; 8] {
    [
        r.model.to_string(),
        r.ahead.to_string(),
        format!("{:.4}", r.gamma_mape),
        format!("{:.4}", r.tr_mape),
        format!("{:.4}", r.te_mape),
        format!("{:.4}", r.gamma_smape),
        format!("{:.4}", r.tr_smape),
        format!("{:.4}", r.te_smape),
    ]
}

/// Report rows as CSV, numbers with four decimals.
pub fn report_csv(rows: &[ReportRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record(cells(r)).map_err(csv_err)?;
    }
    String::from_utf8(w.into_inner().map_err(csv_err)?).map_err(csv_err)
}

/// Inverse of [`report_csv`] (up to the four-decimal rounding).
pub fn parse_report_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().ne(HEADER) {
        return Err(csv_err(format!("unexpected header {header:?}")));
    }
    rdr.records()
        .map(|rec| {
            let rec = rec.map_err(csv_err)?;
            let num = |i: usize| -> Result<f64> { rec[i].trim().parse().map_err(csv_err) };
            Ok(ReportRow {
                model: rec[0].parse()?,
                ahead: rec[1].trim().parse().map_err(csv_err)?,
                gamma_mape: num(2)?,
                tr_mape: num(3)?,
                te_mape: num(4)?,
                gamma_smape: num(5)?,
                tr_smape: num(6)?,
                te_smape: num(7)?,
            })
        })
        .collect()
}

/// Right-aligned text table with the same columns as the CSV.
pub fn report_table(rows: &[ReportRow]) -> String {
    let body: Vec<[String; 8]> = rows.iter().map(cells).collect();
    let mut widths = HEADER.map(str::len);
    for line in &body {
        for (w, c) in widths.iter_mut().zip(line) {
            *w = (*w).max(c.len());
        }
    }
    let fmt_line = |items: &mut dyn Iterator<Item = &str>| -> String {
        items
            .zip(widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = fmt_line(&mut HEADER.iter().copied());
    out.push('\n');
    for line in &body {
        out.push_str(&fmt_line(&mut line.iter().map(String::as_str)));
        out.push('\n');
    }
    out
}

/// Test forecasts as CSV: `t, ahead, actual, predicted_mape, predicted_smape`,
/// one block of rows per trajectory.
pub fn trajectory_csv(trajectories: &[&Trajectory]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "ahead", "actual", "predicted_mape", "predicted_smape"])
        .map_err(csv_err)?;
    for traj in trajectories {
        for i in 0..traj.t.len() {
            w.write_record([
                traj.t[i].to_string(),
                traj.ahead.to_string(),
                traj.actual[i].to_string(),
                traj.predicted_mape[i].to_string(),
                traj.predicted_smape[i].to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    String::from_utf8(w.into_inner().map_err(csv_err)?).map_err(csv_err)
}
