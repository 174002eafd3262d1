//! On-disk formats for states, matrices and reports.
//!
//! Every float is printed with 17 significant digits (`{:.16e}`), enough to
//! round-trip an `f64` bit for bit, in both JSON and CSV output.

use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, Serializer};

use crate::analysis::{BoundRow, RadixComparisonRow};
use crate::error::QftError;
use crate::numerics::{Complex, ComplexMatrix, StateVector};

pub const BOUNDS_CSV_HEADER: &str =
    "q,n,target_digit,L,m,measured_t1,measured_max_t,bound_new,bound_coppersmith";
pub const COMPARE_CSV_HEADER: &str =
    "radix,digits,state_space,gate_count,state_space_ratio,qudit_savings_factor";
pub const MATRIX_CSV_HEADER: &str = "row,col,re,im";
pub const STATE_CSV_HEADER: &str = "index,re,im";

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

struct ExactFloatFormatter;

impl Formatter for ExactFloatFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, ExactFloatFormatter);
    value
        .serialize(&mut ser)
        .expect("in-memory serialization cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

fn pairs(values: &[Complex]) -> Vec<[f64; 2]> {
    values.iter().map(|c| [c.re, c.im]).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub radix: usize,
    pub digits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &StateVector) -> Self {
        Self {
            radix: state.radix(),
            digits: state.digits(),
            amplitudes: pairs(state.amplitudes()),
        }
    }

    pub fn into_state(self) -> Result<StateVector, QftError> {
        let amps = self
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex::new(re, im))
            .collect();
        StateVector::new(self.radix, self.digits, amps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: pairs(m.entries()),
        }
    }

    pub fn into_matrix(self) -> Result<ComplexMatrix, QftError> {
        let entries = self
            .entries
            .into_iter()
            .map(|[re, im]| Complex::new(re, im))
            .collect();
        ComplexMatrix::new(self.rows, self.cols, entries)
    }
}

pub fn state_json(state: &StateVector) -> String {
    to_json(&StateFile::from_state(state))
}

pub fn parse_state_json(text: &str) -> Result<StateFile, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn state_csv(state: &StateVector) -> String {
    let mut out = String::from(STATE_CSV_HEADER);
    out.push('\n');
    for (i, a) in state.amplitudes().iter().enumerate() {
        let _ = writeln!(out, "{i},{},{}", fmt_f64(a.re), fmt_f64(a.im));
    }
    out
}

pub fn matrix_json(m: &ComplexMatrix) -> String {
    to_json(&MatrixFile::from_matrix(m))
}

pub fn matrix_csv(m: &ComplexMatrix) -> String {
    let mut out = String::from(MATRIX_CSV_HEADER);
    out.push('\n');
    for r in 0..m.rows() {
        for (c, v) in m.row(r).iter().enumerate() {
            let _ = writeln!(out, "{r},{c},{},{}", fmt_f64(v.re), fmt_f64(v.im));
        }
    }
    out
}

pub fn bounds_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from(BOUNDS_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.radix,
            r.digits,
            r.target_digit,
            r.fraction_length,
            r.dropped_count,
            fmt_f64(r.measured_phase_error),
            fmt_f64(r.measured_max_t),
            fmt_f64(r.bound_new),
            fmt_f64(r.bound_coppersmith),
        );
    }
    out
}

#[derive(Serialize)]
struct BoundRecord {
    q: usize,
    n: usize,
    target_digit: usize,
    #[serde(rename = "L")]
    fraction_length: usize,
    m: usize,
    measured_t1: f64,
    measured_max_t: f64,
    bound_new: f64,
    bound_coppersmith: f64,
}

pub fn bounds_json(rows: &[BoundRow]) -> String {
    let records: Vec<BoundRecord> = rows
        .iter()
        .map(|r| BoundRecord {
            q: r.radix,
            n: r.digits,
            target_digit: r.target_digit,
            fraction_length: r.fraction_length,
            m: r.dropped_count,
            measured_t1: r.measured_phase_error,
            measured_max_t: r.measured_max_t,
            bound_new: r.bound_new,
            bound_coppersmith: r.bound_coppersmith,
        })
        .collect();
    to_json(&records)
}

pub fn compare_csv(rows: &[RadixComparisonRow]) -> String {
    let mut out = String::from(COMPARE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.radix,
            r.digits,
            r.state_space,
            r.gate_count,
            fmt_f64(r.state_space_ratio),
            fmt_f64(r.qudit_savings_factor),
        );
    }
    out
}

#[derive(Serialize)]
struct CompareRecord {
    radix: usize,
    digits: usize,
    state_space: u128,
    gate_count: usize,
    state_space_ratio: f64,
    qudit_savings_factor: f64,
}

pub fn compare_json(rows: &[RadixComparisonRow]) -> String {
    let records: Vec<CompareRecord> = rows
        .iter()
        .map(|r| CompareRecord {
            radix: r.radix,
            digits: r.digits,
            state_space: r.state_space,
            gate_count: r.gate_count,
            state_space_ratio: r.state_space_ratio,
            qudit_savings_factor: r.qudit_savings_factor,
        })
        .collect();
    to_json(&records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(
            fmt_f64(std::f64::consts::FRAC_1_SQRT_2),
            "7.0710678118654757e-1"
        );
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn state_json_layout() {
        let s = StateVector::basis(2, 1, 1).unwrap();
        assert_eq!(
            state_json(&s),
            "{\"radix\":2,\"digits\":1,\"amplitudes\":[[0.0000000000000000e0,0.0000000000000000e0],\
             [1.0000000000000000e0,0.0000000000000000e0]]}\n"
        );
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"radix":2,"digits":1,"amplitudes":[[1,0],[0,0]],"extra":1}"#;
        assert!(parse_state_json(text).is_err());
    }

    #[test]
    fn csv_layouts() {
        let m = ComplexMatrix::identity(2);
        let csv = matrix_csv(&m);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], MATRIX_CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[4], "1,1,1.0000000000000000e0,0.0000000000000000e0");
        let s = state_csv(&StateVector::basis(3, 1, 2).unwrap());
        assert_eq!(
            s.lines().nth(3).unwrap(),
            "2,1.0000000000000000e0,0.0000000000000000e0"
        );
    }

    proptest! {
        #[test]
        fn printed_floats_round_trip(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let parsed: f64 = fmt_f64(v).parse().unwrap();
            prop_assert_eq!(parsed.to_bits(), v.to_bits());
        }

        #[test]
        fn matrix_json_round_trips(entries in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 9)) {
            let m = ComplexMatrix::new(3, 3, entries.iter().map(|&(re, im)| Complex::new(re, im)).collect()).unwrap();
            let text = matrix_json(&m);
            let back: MatrixFile = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back.into_matrix().unwrap(), m);
        }
    }
}
