//! The matrix document format: a JSON object with explicit shape and the
//! entries as `[re, im]` pairs in row-major order,
//!
//! ```json
//! {"rows": 2, "cols": 2, "data": [[1.0e0, 0.0e0], [0.0e0, 0.0e0], ...]}
//! ```
//!
//! Values are written with 17 significant digits, which round-trips every
//! finite double bit-exactly through a correctly-rounded parser.

use parisom::{ComplexMatrix, Complex64};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
pub struct MatrixDocument {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixDocument {
    pub fn into_matrix(self) -> Result<ComplexMatrix, CliError> {
        if self.data.len() != self.rows * self.cols {
            return Err(CliError::parse(format!(
                "matrix document claims {}x{} but carries {} entries",
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        if self.data.iter().any(|[re, im]| !re.is_finite() || !im.is_finite()) {
            return Err(CliError::parse("matrix document contains non-finite values".into()));
        }
        let data = self.data;
        let cols = self.cols;
        Ok(ComplexMatrix::from_fn(self.rows, cols, |i, j| {
            let [re, im] = data[i * cols + j];
            Complex64::new(re, im)
        }))
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, CliError> {
    let doc: MatrixDocument = serde_json::from_str(text)
        .map_err(|e| CliError::parse(format!("invalid matrix document: {e}")))?;
    doc.into_matrix()
}

pub fn read_matrix(path: &std::path::Path) -> Result<ComplexMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix(&text)
}

/// 17 significant digits: enough for a bit-exact round trip of any f64.
fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    out.push_str(&format!("{{\"rows\": {}, \"cols\": {}, \"data\": [\n", m.rows(), m.cols()));
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m[(i, j)];
            out.push_str(&format!("  [{}, {}]", format_value(z.re), format_value(z.im)));
            if i + 1 != m.rows() || j + 1 != m.cols() {
                out.push(',');
            }
            out.push('\n');
        }
    }
    out.push_str("]}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_rejects_bad_shape() {
        let text = r#"{"rows": 2, "cols": 2, "data": [[1.0, 0.0]]}"#;
        assert!(parse_matrix(text).is_err());
    }

    #[test]
    fn parse_rejects_non_finite() {
        // JSON itself has no Inf literal, so a huge exponent must overflow to
        // a parse-level rejection rather than a silent Inf.
        let text = r#"{"rows": 1, "cols": 1, "data": [[1.0e999, 0.0]]}"#;
        assert!(parse_matrix(text).is_err());
    }

    proptest! {
        #[test]
        fn roundtrip_bit_exact(values in proptest::collection::vec(
            prop_oneof![
                any::<f64>().prop_filter("finite", |x| x.is_finite()),
                Just(0.0),
                Just(-0.0),
                Just(1.0e-300),
                Just(std::f64::consts::PI),
            ],
            2..=18,
        )) {
            let pairs = values.len() / 2;
            prop_assume!(pairs >= 1);
            let m = ComplexMatrix::from_fn(pairs, 1, |i, _| {
                Complex64::new(values[2 * i], values[2 * i + 1])
            });
            let text = write_matrix(&m);
            let back = parse_matrix(&text).unwrap();
            for i in 0..pairs {
                prop_assert_eq!(m[(i, 0)].re.to_bits(), back[(i, 0)].re.to_bits());
                prop_assert_eq!(m[(i, 0)].im.to_bits(), back[(i, 0)].im.to_bits());
            }
        }
    }
}
