use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::hermite::ReprKind;

use super::sweep::{SweepResult, SweepRow};

pub const CSV_HEADER: [&str; 8] = ["example", "repr", "n", "rho", "nu", "mu", "max_abs_error", "clipped"];

/// Rows in their stored (sorted) order; floats in shortest round-trip
/// scientific notation.
pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &result.rows {
        w.write_record([
            r.example.to_string(),
            r.repr.tag().to_string(),
            r.n.to_string(),
            format!("{:e}", r.rho),
            format!("{:e}", r.nu),
            format!("{:e}", r.mu),
            format!("{:e}", r.max_abs_error),
            r.clipped.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    write_csv(result, std::fs::File::create(path)?)
}

pub fn read_csv<R: Read>(input: R) -> Result<SweepResult> {
    let mut reader = csv::Reader::from_reader(input);
    if reader.headers()?.iter().ne(CSV_HEADER) {
        return Err(Error::Parse { what: "sweep CSV header", input: reader.headers()?.iter().collect::<Vec<_>>().join(",") });
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let bad = || Error::Parse { what: "sweep CSV row", input: rec.iter().collect::<Vec<_>>().join(",") };
        let num = |i: usize| field(i).parse::<f64>().map_err(|_| bad());
        rows.push(SweepRow {
            example: field(0).parse().map_err(|_| bad())?,
            repr: ReprKind::from_tag(field(1))?,
            n: field(2).parse().map_err(|_| bad())?,
            rho: num(3)?,
            nu: num(4)?,
            mu: num(5)?,
            max_abs_error: num(6)?,
            clipped: field(7).parse().map_err(|_| bad())?,
        });
    }
    Ok(SweepResult { rows, diagnostics: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, err: f64) -> SweepRow {
        SweepRow {
            example: 2,
            repr: ReprKind::Parallel,
            n,
            rho: 0.1 + 0.2,
            nu: 1e-8,
            mu: 0.0,
            max_abs_error: err,
            clipped: !(err <= 1.0),
        }
    }

    fn to_string(result: &SweepResult) -> String {
        let mut buf = Vec::new();
        write_csv(result, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_result_is_header_only() {
        assert_eq!(to_string(&SweepResult::default()), "example,repr,n,rho,nu,mu,max_abs_error,clipped\n");
    }

    #[test]
    fn single_cell_is_two_lines() {
        let text = to_string(&SweepResult { rows: vec![row(4, 1.25e-13)], diagnostics: Vec::new() });
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().nth(1), Some("2,T,4,3.0000000000000004e-1,1e-8,0e0,1.25e-13,false"));
    }

    #[test]
    fn round_trip_is_exact() {
        let result = SweepResult {
            rows: vec![row(4, 1.0 / 3.0), row(8, 7.5e17), row(12, f64::NAN), row(16, 0.0)],
            diagnostics: Vec::new(),
        };
        let back = read_csv(to_string(&result).as_bytes()).unwrap();
        assert_eq!(back.rows.len(), 4);
        for (a, b) in result.rows.iter().zip(&back.rows) {
            assert_eq!(a.max_abs_error.to_bits(), b.max_abs_error.to_bits());
            assert_eq!((a.example, a.repr, a.n, a.clipped), (b.example, b.repr, b.n, b.clipped));
            assert_eq!((a.rho, a.nu, a.mu), (b.rho, b.nu, b.mu));
        }
    }

    #[test]
    fn foreign_header_is_rejected() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
