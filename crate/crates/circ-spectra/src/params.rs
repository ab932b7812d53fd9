//! JSON parameter files.
//!
//! ```json
//! {"n": 3, "u": [0, 0, 0], "v": [0, 0, 0], "sigma2": [1, 12.25, 0.5625], "tau2": [1.7, 0.44, 20.25]}
//! ```
//!
//! `sigma2` and `tau2` are variances. Floats are written in shortest
//! round-trip form, so a file emitted by any subcommand re-parses to the
//! identical [`ModelParams`].

use std::path::Path;

use circ_spectra_core::ModelParams;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub fn params_json(p: &ModelParams) -> String {
    serde_json::to_string(p).expect("params serialize")
}

pub fn parse_params(text: &str) -> Result<ModelParams> {
    serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))
}

pub fn read_params(path: &Path) -> Result<ModelParams> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

/// SHA-256 of the canonical params JSON, hex encoded.
pub fn params_hash(p: &ModelParams) -> String {
    hex::encode(Sha256::digest(params_json(p).as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let p = ModelParams::from_std_devs(
            vec![2.0, 9.0, -7.0, -9.5, -5.0 / 3.0],
            vec![4.0, 8.0, -7.5, 3.0, 20.0 / 3.0],
            vec![1.0, 2.0, 0.5, 2.0 / 7.0, 0.8],
            vec![1.2, 2.0 / 3.0, 0.75, 4.0 / 7.0, 0.6],
        )
        .unwrap();
        let text = params_json(&p);
        assert!(text.starts_with(r#"{"n":5,"u":[2.0,9.0,"#), "{text}");
        assert_eq!(parse_params(&text).unwrap(), p);
        assert_eq!(params_hash(&p), params_hash(&parse_params(&text).unwrap()));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_params(r#"{"n":2,"u":[0],"v":[0,0],"sigma2":[1,1],"tau2":[1,1]}"#).is_err());
        assert!(parse_params(r#"{"n":2,"u":[0],"v":[0],"sigma2":[1],"tau2":[1]}"#).is_err());
        assert!(parse_params(r#"{"n":1,"u":[0],"v":[0],"sigma2":[-1],"tau2":[1]}"#).is_err());
        assert!(parse_params(r#"{"n":1,"u":[0],"v":[0],"sigma2":[1],"tau2":[1],"x":1}"#).is_err());
    }
}
