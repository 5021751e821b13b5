//! CSV output row: fixed columns, scientific notation with nine
//! significant digits, and a parser that round-trips byte-identically.

use anyhow::{anyhow, bail, Result};

/// The fixed header; columns never move.
pub const CSV_HEADER: &str = "v_m_per_s,za_m,F_t_N,F_r_N,F_total_N,a_m_per_s2,\
Omega_rad_per_s,L_y_Js,mode,provenance,max_quad_err";

/// One evaluated sweep point.
///
/// `mode` is the spectral closure (`ness` | `lte`); `provenance` names the
/// pipeline that produced the numbers (`full` | `asymptotic`), with
/// `:unconverged` appended when a quadrature missed its tolerance and
/// `full:failed` (numbers NaN) when a point errored out — failed points are
/// kept so a sweep never silently drops rows.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRow {
    pub v: f64,
    pub za: f64,
    pub f_t: f64,
    pub f_r: f64,
    pub f_total: f64,
    pub a: f64,
    pub omega: f64,
    pub l_y: f64,
    pub mode: String,
    pub provenance: String,
    pub max_quad_err: f64,
}

fn fmt(x: f64) -> String {
    format!("{x:.8e}")
}

impl OutputRow {
    /// Serialize in column order; numbers carry nine significant digits.
    pub fn to_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            fmt(self.v),
            fmt(self.za),
            fmt(self.f_t),
            fmt(self.f_r),
            fmt(self.f_total),
            fmt(self.a),
            fmt(self.omega),
            fmt(self.l_y),
            self.mode,
            self.provenance,
            fmt(self.max_quad_err),
        )
    }

    /// Parse one emitted line back; `to_line` of the result is
    /// byte-identical to the input.
    pub fn parse(line: &str) -> Result<OutputRow> {
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 11 {
            bail!("expected 11 columns, found {}", parts.len());
        }
        let num = |i: usize| -> Result<f64> {
            parts[i]
                .parse::<f64>()
                .map_err(|_| anyhow!("column {}: '{}' is not a number", i + 1, parts[i]))
        };
        Ok(OutputRow {
            v: num(0)?,
            za: num(1)?,
            f_t: num(2)?,
            f_r: num(3)?,
            f_total: num(4)?,
            a: num(5)?,
            omega: num(6)?,
            l_y: num(7)?,
            mode: parts[8].to_string(),
            provenance: parts[9].to_string(),
            max_quad_err: num(10)?,
        })
    }
}

/// Render a whole table (header plus one line per row, trailing newline).
pub fn to_csv(rows: &[OutputRow]) -> String {
    let mut out = String::with_capacity(64 + rows.len() * 160);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_line());
        out.push('\n');
    }
    out
}

/// Parse a whole emitted table, header line included.
pub fn from_csv(text: &str) -> Result<Vec<OutputRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => bail!("bad or missing header: {other:?}"),
    }
    lines.map(OutputRow::parse).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OutputRow {
        OutputRow {
            v: 1.0e4,
            za: 5.0e-9,
            f_t: -6.118_4e-37,
            f_r: 4.370_3e-37,
            f_total: -1.748_1e-37,
            a: -1.211_5e-12,
            omega: -2.474_0e7,
            l_y: -1.320_9e-42,
            mode: "ness".into(),
            provenance: "full".into(),
            max_quad_err: 3.2e-7,
        }
    }

    #[test]
    fn line_round_trip_is_byte_identical() {
        let line = sample().to_line();
        let parsed = OutputRow::parse(&line).unwrap();
        assert_eq!(parsed.to_line(), line);
    }

    #[test]
    fn csv_round_trip_is_byte_identical() {
        let rows = vec![sample(), {
            let mut r = sample();
            r.v = 2.0e3;
            r.provenance = "full:unconverged".into();
            r
        }];
        let text = to_csv(&rows);
        let parsed = from_csv(&text).unwrap();
        assert_eq!(to_csv(&parsed), text);
    }

    #[test]
    fn failed_rows_round_trip_through_nan() {
        let mut r = sample();
        r.f_t = f64::NAN;
        r.provenance = "full:failed".into();
        let line = r.to_line();
        let parsed = OutputRow::parse(&line).unwrap();
        assert!(parsed.f_t.is_nan());
        assert_eq!(parsed.to_line(), line);
    }

    #[test]
    fn numbers_carry_nine_significant_digits() {
        let line = sample().to_line();
        assert!(line.starts_with("1.00000000e4,5.00000000e-9,"));
    }

    #[test]
    fn malformed_lines_are_rejected() {
        assert!(OutputRow::parse("1,2,3").is_err());
        assert!(OutputRow::parse(&"x,".repeat(10).trim_end_matches(',').to_string()).is_err());
        assert!(from_csv("wrong_header\n").is_err());
    }
}
