//! Channel file format.
//!
//! ```json
//! { "name": "identity", "dim_in": 2, "dim_out": 2,
//!   "kraus": [ [ [[1,0],[0,0]], [[0,0],[1,0]] ] ] }
//! ```
//!
//! Each Kraus matrix is an array of rows; each entry is a `[re, im]` pair.

use serde::{Deserialize, Serialize};

use super::KrausChannel;
use crate::error::{Error, Result};
use crate::numerics::{c, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ChannelFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.check()?;
        Ok(file)
    }

    fn check(&self) -> Result<()> {
        if self.kraus.is_empty() {
            return Err(Error::Parse("\"kraus\" must hold at least one matrix".into()));
        }
        if self.dim_in == 0 || self.dim_out == 0 {
            return Err(Error::Parse("dimensions must be positive".into()));
        }
        for (k, m) in self.kraus.iter().enumerate() {
            if m.len() != self.dim_out {
                return Err(Error::Parse(format!(
                    "Kraus matrix {k} has {} rows, expected dim_out = {}",
                    m.len(),
                    self.dim_out
                )));
            }
            for (r, row) in m.iter().enumerate() {
                if row.len() != self.dim_in {
                    return Err(Error::Parse(format!(
                        "Kraus matrix {k} row {r} has {} entries, expected dim_in = {}",
                        row.len(),
                        self.dim_in
                    )));
                }
                if let Some(col) = row.iter().position(|z| !z[0].is_finite() || !z[1].is_finite()) {
                    return Err(Error::Parse(format!(
                        "Kraus matrix {k} entry ({r}, {col}) is not finite"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kraus_matrices(&self) -> Vec<ComplexMatrix> {
        self.kraus
            .iter()
            .map(|m| ComplexMatrix::from_fn(self.dim_out, self.dim_in, |i, j| c(m[i][j][0], m[i][j][1])))
            .collect()
    }

    pub fn from_kraus(name: Option<String>, kraus: &[ComplexMatrix]) -> Self {
        let (dim_out, dim_in) = kraus[0].shape();
        let kraus = kraus
            .iter()
            .map(|k| {
                (0..k.rows())
                    .map(|i| k.row(i).iter().map(|z| [z.re, z.im]).collect())
                    .collect()
            })
            .collect();
        Self {
            name,
            dim_in,
            dim_out,
            kraus,
        }
    }

    pub fn from_channel(name: Option<String>, ch: &KrausChannel) -> Self {
        Self::from_kraus(name, ch.kraus())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::random_channel;

    #[test]
    fn round_trip_is_exact() {
        let ch = random_channel(2, 2, 3, 5).unwrap();
        let text = ChannelFile::from_channel(Some("r".into()), &ch).to_json();
        let back = ChannelFile::parse(&text).unwrap();
        assert_eq!(back.kraus_matrices(), ch.kraus());
        assert_eq!(back.name.as_deref(), Some("r"));
    }

    #[test]
    fn rejects_ragged_and_malformed() {
        let ragged = r#"{"dim_in":2,"dim_out":2,"kraus":[[[[1,0],[0,0]],[[0,0]]]]}"#;
        assert!(matches!(ChannelFile::parse(ragged), Err(Error::Parse(_))));
        let bad_pair = r#"{"dim_in":1,"dim_out":1,"kraus":[[[[1,0,0]]]]}"#;
        assert!(ChannelFile::parse(bad_pair).is_err());
        let nan = r#"{"dim_in":1,"dim_out":1,"kraus":[[[[NaN,0]]]]}"#;
        assert!(ChannelFile::parse(nan).is_err());
        let huge = r#"{"dim_in":1,"dim_out":1,"kraus":[[[[1e999,0]]]]}"#;
        assert!(ChannelFile::parse(huge).is_err());
        assert!(ChannelFile::parse(r#"{"dim_in":2,"dim_out":2,"kraus":[[["#).is_err());
        let empty = r#"{"dim_in":2,"dim_out":2,"kraus":[]}"#;
        assert!(ChannelFile::parse(empty).is_err());
    }

    #[test]
    fn identity_literal() {
        let text = r#"{"name":"identity","dim_in":2,"dim_out":2,"kraus":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
        let f = ChannelFile::parse(text).unwrap();
        assert_eq!(f.kraus_matrices()[0], ComplexMatrix::identity(2));
    }
}
