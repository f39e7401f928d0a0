//! Problem files and the effective run parameters.

use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use kernelmap::io::{parse_matrix, LatticeSpec, RawMatrix};
use kernelmap::lattice::{Nest, SubspaceLattice};
use kernelmap::{Error, Field, Matrix, Scalar};

use crate::CliError;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub field: Option<Field>,
    pub matrix: Option<RawMatrix>,
    pub nest: Option<LatticeSpec>,
    pub lattice: Option<LatticeSpec>,
    pub generators: Option<Vec<RawMatrix>>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

/// Settings after merging command-line flags over the problem file.
#[derive(Clone, Copy, Debug)]
pub struct Params {
    pub field: Field,
    pub seed: u64,
    pub samples: usize,
}

pub struct Loaded {
    pub problem: ProblemFile,
    pub params: Params,
    /// Hex SHA-256 of the file bytes followed by the effective parameters.
    pub digest: String,
}

pub fn load(
    path: Option<&Path>,
    command: &str,
    field: Option<Field>,
    seed: Option<u64>,
    samples: Option<usize>,
) -> Result<Loaded, CliError> {
    let bytes = match path {
        Some(p) => std::fs::read(p).map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))?,
        None => Vec::new(),
    };
    let problem: ProblemFile = if bytes.is_empty() {
        ProblemFile::default()
    } else {
        serde_json::from_slice(&bytes).map_err(|e| CliError::Input(format!("malformed problem file: {e}")))?
    };
    let field = match (field, problem.field) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::Input(format!(
                "--field {a} conflicts with field {b} in the problem file"
            )))
        }
        (a, b) => a.or(b).unwrap_or_default(),
    };
    let params = Params {
        field,
        seed: seed.or(problem.seed).unwrap_or(0),
        samples: samples.or(problem.samples).unwrap_or(kernelmap::liemod::DEFAULT_SAMPLES),
    };
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    hasher.update(format!(
        "\ncommand={command};field={};seed={};samples={}",
        params.field, params.seed, params.samples
    ));
    let digest = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    Ok(Loaded {
        problem,
        params,
        digest,
    })
}

impl ProblemFile {
    pub fn matrix<S: Scalar>(&self) -> Result<Matrix<S>, Error> {
        let raw = self
            .matrix
            .as_ref()
            .ok_or_else(|| Error::Malformed("the problem file needs a \"matrix\"".into()))?;
        parse_matrix(raw)
    }

    pub fn generators<S: Scalar>(&self) -> Result<Vec<Matrix<S>>, Error> {
        let raw = self
            .generators
            .as_ref()
            .ok_or_else(|| Error::Malformed("the problem file needs \"generators\"".into()))?;
        raw.iter().map(|m| parse_matrix(m)).collect()
    }

    fn spec(&self) -> Result<&LatticeSpec, Error> {
        match (&self.nest, &self.lattice) {
            (Some(s), None) | (None, Some(s)) => Ok(s),
            (Some(_), Some(_)) => Err(Error::Malformed("give either \"nest\" or \"lattice\", not both".into())),
            (None, None) => Err(Error::Malformed("the problem file needs a \"nest\" or \"lattice\"".into())),
        }
    }

    pub fn lattice<S: Scalar>(&self) -> Result<SubspaceLattice<S>, Error> {
        let spec = self.spec()?;
        if self.nest.is_some() {
            Ok(spec.to_nest()?.lattice().clone())
        } else {
            spec.to_lattice()
        }
    }

    pub fn nest<S: Scalar>(&self) -> Result<Nest<S>, Error> {
        self.spec()?.to_nest()
    }
}
