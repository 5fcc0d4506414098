//! JSON matrix files: `{"dim": d, "entries": [[{"re": .., "im": ..}, ..], ..]}`.

use std::path::Path;

use kspectral::{Complex64, ComplexMatrix};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Vec<Vec<Entry>>,
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("matrix file: {e}")))?;
        file.validate()?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.dim == 0 {
            return Err(CliError::Input("matrix file: dim must be positive".into()));
        }
        if self.entries.len() != self.dim {
            return Err(CliError::Input(format!(
                "matrix file: {} rows for dim {}",
                self.entries.len(),
                self.dim
            )));
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.dim {
                return Err(CliError::Input(format!("matrix file: row {i} has {} entries, expected {}", row.len(), self.dim)));
            }
            if row.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
                return Err(CliError::Input(format!("matrix file: non-finite entry in row {i}")));
            }
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, self.dim, |i, j| {
            let e = self.entries[i][j];
            Complex64::new(e.re, e.im)
        })
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let entries = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| Entry { re: m[(i, j)].re, im: m[(i, j)].im }).collect())
            .collect();
        Self { dim: m.nrows(), entries }
    }

    #[cfg(test)]
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix file serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_malformed_files() {
        let ragged = r#"{"dim": 2, "entries": [[{"re":0,"im":0},{"re":1,"im":0}],[{"re":0,"im":0}]]}"#;
        assert!(matches!(MatrixFile::parse(ragged), Err(CliError::Input(_))));
        let short = r#"{"dim": 2, "entries": [[{"re":0,"im":0},{"re":1,"im":0}]]}"#;
        assert!(MatrixFile::parse(short).is_err());
        assert!(MatrixFile::parse(r#"{"dim": 0, "entries": []}"#).is_err());
        assert!(MatrixFile::parse(r#"{"dim": 1, "entries": [[{"re":1}]]}"#).is_err());
        assert!(MatrixFile::parse("[1, 2]").is_err());
    }

    #[test]
    fn reads_row_major() {
        let text = r#"{"dim": 2, "entries": [[{"re":0,"im":0},{"re":2,"im":0}],[{"re":0,"im":0},{"re":0,"im":-1}]]}"#;
        let m = MatrixFile::parse(text).unwrap().to_matrix();
        assert_eq!(m[(0, 1)], Complex64::new(2.0, 0.0));
        assert_eq!(m[(1, 1)], Complex64::new(0.0, -1.0));
    }

    proptest! {
        #[test]
        fn json_round_trip(d in 1usize..6, values in prop::collection::vec(-1e6f64..1e6, 72)) {
            let m = ComplexMatrix::from_fn(d, d, |i, j| Complex64::new(values[2 * (i * d + j)], values[2 * (i * d + j) + 1]));
            let file = MatrixFile::from_matrix(&m);
            let once = MatrixFile::parse(&file.to_json()).unwrap();
            let twice = MatrixFile::parse(&once.to_json()).unwrap();
            prop_assert_eq!(&once, &file);
            prop_assert_eq!(&twice, &once);
            prop_assert_eq!(once.to_matrix(), m);
        }
    }
}
