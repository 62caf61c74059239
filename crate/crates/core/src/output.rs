//! CSV emission: comma separated, header row, LF line endings, numbers with 15
//! significant digits.

use std::io::Write;

use crate::error::{Error, Result};
use crate::weight::figure1_curve;

/// `x` with 15 significant digits, in positional notation for `1e-5 ≤ |x| < 1e15`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.14e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..15).contains(&exp) {
        format!("{:.*}", (14 - exp) as usize, x)
    } else {
        sci
    }
}

/// Writes a header and rows of numbers.
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|&x| format_number(x)).collect()).collect();
    write_records(out, header, &rows)
}

/// Writes a header and rows of preformatted fields, quoting where needed.
pub fn write_records<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn csv_string(header: &[&str], rows: &[Vec<f64>]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows)?;
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}

/// The curve `p ↦ h_p(λ)` as CSV with header `p,h_p_lambda`.
pub fn figure1_csv(lambda: f64, p_grid: &[f64]) -> Result<String> {
    let rows: Vec<Vec<f64>> = figure1_curve(lambda, p_grid)?.into_iter().map(|(p, h)| vec![p, h]).collect();
    csv_string(&["p", "h_p_lambda"], &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(format_number(0.39182655203060725), "0.391826552030607");
        assert_eq!(format_number(2.25), "2.25000000000000");
        assert_eq!(format_number(-1234.5), "-1234.50000000000");
        assert_eq!(format_number(1e-7), "1.00000000000000e-7");
        assert_eq!(format_number(0.0), "0");
        for x in [0.1234567890123456, 98765.4321, 3.0e-5] {
            let s = format_number(x);
            let digits = s.trim_start_matches('-').replace('.', "").trim_start_matches('0').len();
            assert_eq!(digits, 15, "{s}");
        }
    }

    #[test]
    fn csv_layout() {
        let s = csv_string(&["a", "b"], &[vec![1.0, 0.5], vec![2.0, 0.25]]).unwrap();
        assert_eq!(s, "a,b\n1.00000000000000,0.500000000000000\n2.00000000000000,0.250000000000000\n");
        assert!(!s.contains('\r'));
    }

    #[test]
    fn figure1_rows() {
        let s = figure1_csv(0.5, &[0.25, 0.5, 0.75]).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "p,h_p_lambda");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("0.500000000000000,0.391826552030"));
        assert_eq!(lines[1].split(',').nth(1), lines[3].split(',').nth(1));
        assert!(figure1_csv(1.5, &[0.5]).is_err());
    }
}
