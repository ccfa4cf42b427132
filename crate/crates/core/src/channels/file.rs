//! JSON channel files:
//!
//! ```json
//! { "n": 2, "d": 1, "kraus": [ [ [[1, 0], [0, 0]], [[0, 0], [1, 0]] ] ] }
//! ```
//!
//! `kraus` holds d matrices, each a list of n rows of n `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kraus::{completeness_residual, KrausChannel};
use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;

/// Completeness tolerance applied when reading channel files.
pub const FILE_COMPLETENESS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub n: usize,
    pub d: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

/// Structural problems in a file that parsed as JSON.
fn shape_error(msg: String) -> Error {
    Error::Parse(msg)
}

impl ChannelFile {
    pub fn from_channel(channel: &KrausChannel) -> Self {
        let n = channel.n();
        let kraus = channel
            .kraus()
            .iter()
            .map(|k| {
                (0..n)
                    .map(|i| k.row(i).iter().map(|z| [z.re, z.im]).collect())
                    .collect()
            })
            .collect();
        Self {
            n,
            d: channel.d(),
            kraus,
        }
    }

    /// Converts the raw lists into matrices, checking every declared size.
    pub fn matrices(&self) -> Result<Vec<ComplexMatrix>> {
        let (n, d) = (self.n, self.d);
        if self.kraus.len() != d {
            return Err(shape_error(format!(
                "field d = {d} but kraus lists {} operators",
                self.kraus.len()
            )));
        }
        self.kraus
            .iter()
            .enumerate()
            .map(|(j, rows)| {
                if rows.len() != n {
                    return Err(shape_error(format!(
                        "kraus[{j}] has {} rows, expected n = {n}",
                        rows.len()
                    )));
                }
                let mut data = Vec::with_capacity(n * n);
                for (i, row) in rows.iter().enumerate() {
                    if row.len() != n {
                        return Err(shape_error(format!(
                            "kraus[{j}] row {i} has {} entries, expected n = {n}",
                            row.len()
                        )));
                    }
                    data.extend(row.iter().map(|&[re, im]| Complex64::new(re, im)));
                }
                ComplexMatrix::new(n, n, data)
            })
            .collect()
    }
}

/// Parses a channel file, rejecting Kraus sets whose completeness residual
/// exceeds 1e-6 unless `allow_incomplete` is set.
pub fn parse_channel(text: &str, allow_incomplete: bool) -> Result<KrausChannel> {
    let file: ChannelFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mats = file.matrices()?;
    let tol = if allow_incomplete {
        f64::INFINITY
    } else {
        FILE_COMPLETENESS_TOL
    };
    KrausChannel::with_tolerance(mats, tol)
}

/// Parses without any completeness requirement and returns the residual,
/// for diagnostics.
pub fn parse_channel_lenient(text: &str) -> Result<(KrausChannel, f64)> {
    let channel = parse_channel(text, true)?;
    let residual = completeness_residual(channel.kraus());
    Ok((channel, residual))
}

pub fn write_channel(channel: &KrausChannel) -> String {
    serde_json::to_string_pretty(&ChannelFile::from_channel(channel)).expect("plain data serializes")
}
