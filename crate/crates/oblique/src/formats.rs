//! JSON file formats. Every document carries `"v": 1`.

use serde::{Deserialize, Serialize};

use oblique_core::channels::ObliqueBasis;
use oblique_core::qmat::{ComplexMatrix, DensityMatrix, StateVector};
use oblique_core::Complex64;

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

fn version() -> u32 {
    FORMAT_VERSION
}

fn check_version(kind: &str, v: u32) -> Result<(), CliError> {
    if v != FORMAT_VERSION {
        return Err(CliError::Input(format!(
            "{kind} file has version {v}, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

/// Complex number as `[re, im]`.
pub type Pair = [f64; 2];

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn complex(p: &Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// `{"v":1,"dims":[…],"data":[[re,im],…]}`, matrix entries row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    #[serde(default = "version")]
    pub v: u32,
    pub dims: Vec<usize>,
    pub data: Vec<Pair>,
}

impl StateJson {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        Self {
            v: FORMAT_VERSION,
            dims: rho.dims().to_vec(),
            data: rho.matrix().as_slice().iter().map(|&z| pair(z)).collect(),
        }
    }

    pub fn to_state(&self) -> Result<DensityMatrix, CliError> {
        check_version("state", self.v)?;
        let order: usize = self.dims.iter().product();
        let expected = order * order;
        if self.data.len() != expected {
            return Err(CliError::Input(format!(
                "state data has {} entries, expected {expected} for dims {:?}",
                self.data.len(),
                self.dims
            )));
        }
        let m =
            ComplexMatrix::from_row_major(order, order, self.data.iter().map(complex).collect())?;
        Ok(DensityMatrix::new(self.dims.clone(), m)?)
    }
}

/// `{"v":1,"dim":n,"vectors":[[[re,im],…],…]}`. Vectors are normalized on
/// read.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisJson {
    #[serde(default = "version")]
    pub v: u32,
    pub dim: usize,
    pub vectors: Vec<Vec<Pair>>,
}

impl BasisJson {
    pub fn from_basis(basis: &ObliqueBasis) -> Self {
        Self {
            v: FORMAT_VERSION,
            dim: basis.dim(),
            vectors: vectors_json(basis.vectors()),
        }
    }

    pub fn to_basis(&self, condition_cap: f64) -> Result<ObliqueBasis, CliError> {
        check_version("basis", self.v)?;
        if self.vectors.len() != self.dim {
            return Err(CliError::Input(format!(
                "basis has {} vectors, expected {}",
                self.vectors.len(),
                self.dim
            )));
        }
        let vectors = self
            .vectors
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if v.len() != self.dim {
                    return Err(CliError::Input(format!(
                        "basis vector {k} has {} entries, expected {}",
                        v.len(),
                        self.dim
                    )));
                }
                Ok(StateVector::normalized(v.iter().map(complex).collect())?)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ObliqueBasis::with_condition_cap(vectors, condition_cap)?)
    }
}

pub fn vectors_json(vectors: &[StateVector]) -> Vec<Vec<Pair>> {
    vectors
        .iter()
        .map(|v| v.amplitudes().iter().map(|&z| pair(z)).collect())
        .collect()
}

pub fn matrix_json(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| pair(m[(r, c)])).collect())
        .collect()
}

pub fn parse<T: for<'de> Deserialize<'de>>(kind: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid {kind} JSON: {e}")))
}

pub fn read_file(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_state(path: &std::path::Path) -> Result<DensityMatrix, CliError> {
    parse::<StateJson>("state", &read_file(path)?)?.to_state()
}

pub fn read_basis(path: &std::path::Path, condition_cap: f64) -> Result<ObliqueBasis, CliError> {
    parse::<BasisJson>("basis", &read_file(path)?)?.to_basis(condition_cap)
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
