//! Model file: `DYNQNET\0`, u32 version, u64 header length, JSON header,
//! then every tensor as little-endian f64 in header order.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{NetError, Params, QNetwork, TENSOR_NAMES};
use crate::scalar::NetFloat;

const MAGIC: &[u8; 8] = b"DYNQNET\0";
const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorInfo {
    pub name: String,
    pub shape: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelHeader {
    pub table_hash: String,
    pub input: usize,
    pub width: usize,
    pub hyperparameters: BTreeMap<String, String>,
    pub tensors: Vec<TensorInfo>,
}

impl<F: NetFloat> QNetwork<F> {
    pub fn write_to<W: Write>(&self, mut w: W, hyperparameters: &BTreeMap<String, String>) -> Result<(), NetError> {
        let header = ModelHeader {
            table_hash: self.table_hash.clone(),
            input: self.input,
            width: self.width,
            hyperparameters: hyperparameters.clone(),
            tensors: TENSOR_NAMES
                .iter()
                .zip(self.tensor_shapes())
                .map(|(n, shape)| TensorInfo {
                    name: n.to_string(),
                    shape,
                })
                .collect(),
        };
        let json = serde_json::to_vec(&header).map_err(|e| NetError::Format(e.to_string()))?;
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(json.len() as u64).to_le_bytes())?;
        w.write_all(&json)?;
        for t in &self.params.tensors {
            for v in t {
                w.write_all(&v.to_f64().unwrap().to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path, hyperparameters: &BTreeMap<String, String>) -> Result<(), NetError> {
        let mut buf = Vec::new();
        self.write_to(&mut buf, hyperparameters)?;
        std::fs::write(path, buf)?;
        Ok(())
    }

    /// Reads a model; `expected_hash` must match the stored class-table hash
    /// when given.
    pub fn read_from<R: Read>(mut r: R, expected_hash: Option<&str>) -> Result<(Self, ModelHeader), NetError> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(NetError::Format("not a model file".into()));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        let version = u32::from_le_bytes(b4);
        if version != VERSION {
            return Err(NetError::Format(format!("unsupported version {version}")));
        }
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let len = u64::from_le_bytes(b8) as usize;
        if len > 1 << 24 {
            return Err(NetError::Format("header too large".into()));
        }
        let mut json = vec![0u8; len];
        r.read_exact(&mut json)?;
        let header: ModelHeader = serde_json::from_slice(&json).map_err(|e| NetError::Format(e.to_string()))?;
        if let Some(h) = expected_hash {
            if h != header.table_hash {
                return Err(NetError::HashMismatch {
                    expected: h.to_string(),
                    found: header.table_hash.clone(),
                });
            }
        }
        let mut net = QNetwork::<F>::zeros(header.input, header.width, &header.table_hash);
        let names: Vec<&str> = header.tensors.iter().map(|t| t.name.as_str()).collect();
        let shapes: Vec<Vec<usize>> = header.tensors.iter().map(|t| t.shape.clone()).collect();
        if names != TENSOR_NAMES || shapes != net.tensor_shapes() {
            return Err(NetError::Format("tensor layout does not match the architecture".into()));
        }
        let mut tensors = Vec::with_capacity(shapes.len());
        for shape in &shapes {
            let n: usize = shape.iter().product();
            let mut t = Vec::with_capacity(n);
            for _ in 0..n {
                r.read_exact(&mut b8)?;
                t.push(F::from_f64(f64::from_le_bytes(b8)).unwrap());
            }
            tensors.push(t);
        }
        let mut rest = Vec::new();
        r.read_to_end(&mut rest)?;
        if !rest.is_empty() {
            return Err(NetError::Format("trailing bytes".into()));
        }
        *net.params_mut() = Params { tensors };
        net.version = 0;
        net.check_finite()?;
        Ok((net, header))
    }

    pub fn load(path: &Path, expected_hash: Option<&str>) -> Result<(Self, ModelHeader), NetError> {
        let bytes = std::fs::read(path)?;
        Self::read_from(bytes.as_slice(), expected_hash)
    }
}
