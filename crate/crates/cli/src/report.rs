//! Sweep report rows and their CSV form.
//!
//! Reals are written with 17 significant digits so a round trip through the
//! file is exact.

use std::io::{Read, Write};

use hlsext_core::{QuotientReport, Verdict};
use serde::Serialize;

use crate::{config_error, CliError};

pub const CSV_HEADER: [&str; 9] = ["n", "r", "a", "q", "quotient", "reference", "margin", "error_estimate", "verdict"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub n: usize,
    pub r: f64,
    pub a: f64,
    pub q: f64,
    pub quotient: f64,
    pub reference: f64,
    pub margin: f64,
    pub error_estimate: f64,
    pub verdict: Verdict,
}

impl ReportRow {
    pub fn from_quotient(n: usize, r: f64, a: f64, q: f64, rep: &QuotientReport) -> Self {
        Self {
            n,
            r,
            a,
            q,
            quotient: rep.quotient,
            reference: rep.reference,
            margin: rep.margin,
            error_estimate: rep.error_estimate,
            verdict: rep.verdict,
        }
    }

    pub fn to_record(&self) -> [String; 9] {
        [
            self.n.to_string(),
            fmt_real(self.r),
            fmt_real(self.a),
            fmt_real(self.q),
            fmt_real(self.quotient),
            fmt_real(self.reference),
            fmt_real(self.margin),
            fmt_real(self.error_estimate),
            self.verdict.as_str().to_string(),
        ]
    }

    pub fn from_record(rec: &csv::StringRecord) -> Result<Self, CliError> {
        if rec.len() != CSV_HEADER.len() {
            return Err(config_error(format!("expected {} columns, got {}", CSV_HEADER.len(), rec.len())));
        }
        let real = |k: usize| -> Result<f64, CliError> {
            rec[k].parse().map_err(|_| config_error(format!("bad {} value {:?}", CSV_HEADER[k], &rec[k])))
        };
        Ok(Self {
            n: rec[0].parse().map_err(|_| config_error(format!("bad n value {:?}", &rec[0])))?,
            r: real(1)?,
            a: real(2)?,
            q: real(3)?,
            quotient: real(4)?,
            reference: real(5)?,
            margin: real(6)?,
            error_estimate: real(7)?,
            verdict: rec[8].parse()?,
        })
    }
}

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(out: W, rows: &[ReportRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.to_record())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ReportRow>, CliError> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(CSV_HEADER) {
        return Err(config_error("unexpected CSV header"));
    }
    r.records().map(|rec| ReportRow::from_record(&rec?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn verdict() -> impl Strategy<Value = Verdict> {
        prop_oneof![Just(Verdict::ExceedsBall), Just(Verdict::BelowBall), Just(Verdict::WithinTolerance)]
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_exact(
            n in 3usize..12,
            vals in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 7),
            v in verdict(),
        ) {
            let row = ReportRow {
                n, r: vals[0], a: vals[1], q: vals[2], quotient: vals[3],
                reference: vals[4], margin: vals[5], error_estimate: vals[6], verdict: v,
            };
            let mut buf = Vec::new();
            write_csv(&mut buf, std::slice::from_ref(&row)).unwrap();
            let back = read_csv(buf.as_slice()).unwrap();
            prop_assert_eq!(back.len(), 1);
            prop_assert_eq!(&back[0], &row);
        }
    }

    #[test]
    fn nan_survives_the_round_trip() {
        let row = ReportRow {
            n: 3,
            r: 0.1,
            a: f64::NAN,
            q: 6.0,
            quotient: 1.0,
            reference: 1.0,
            margin: 0.0,
            error_estimate: 0.0,
            verdict: Verdict::WithinTolerance,
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, &[row]).unwrap();
        assert!(read_csv(buf.as_slice()).unwrap()[0].a.is_nan());
    }

    #[test]
    fn rejects_foreign_headers() {
        assert!(read_csv("x,y\n1,2\n".as_bytes()).is_err());
    }
}
