use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use desc_autograd::Tensor;
use serde::{Deserialize, Serialize};

use super::{Architecture, InputSpec, ModelConfig, ModelParams};
use crate::error::{CoreError, Result};

pub const MODEL_FORMAT_VERSION: u32 = 1;
const FORMAT_NAME: &str = "desc-model";

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Serialize, Deserialize)]
struct Document {
    format: String,
    version: u32,
    architecture: Architecture,
    classes: usize,
    config: ModelConfig,
    input: InputSpec,
    tensors: Vec<NamedTensor>,
}

#[derive(Serialize, Deserialize)]
struct NamedTensor {
    name: String,
    shape: Vec<usize>,
    values: Vec<f64>,
}

impl ModelParams {
    /// Pretty-printed JSON with every value in shortest round-trip form.
    pub fn to_json(&self) -> Result<String> {
        let doc = Document {
            format: FORMAT_NAME.into(),
            version: MODEL_FORMAT_VERSION,
            architecture: self.architecture,
            classes: self.classes,
            config: self.config.clone(),
            input: self.input.clone(),
            tensors: self
                .tensors
                .iter()
                .map(|(name, t)| NamedTensor {
                    name: name.clone(),
                    shape: t.shape().to_vec(),
                    values: t.data().to_vec(),
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&doc)?;
        out.push('\n');
        Ok(out)
    }

    /// Parses a model document. The version is checked before anything else
    /// so an unknown layout is never half-read.
    pub fn from_json(text: &str) -> Result<Self> {
        let header: Header = serde_json::from_str(text)?;
        if header.format != FORMAT_NAME {
            return Err(CoreError::InvalidConfig(format!(
                "not a model document (format {:?})",
                header.format
            )));
        }
        if header.version != MODEL_FORMAT_VERSION {
            return Err(CoreError::UnsupportedVersion {
                kind: "model",
                found: header.version,
                expected: MODEL_FORMAT_VERSION,
            });
        }
        let doc: Document = serde_json::from_str(text)?;
        let mut tensors = BTreeMap::new();
        for t in doc.tensors {
            let tensor = Tensor::new(t.shape, t.values)?;
            if tensors.insert(t.name.clone(), tensor).is_some() {
                return Err(CoreError::InvalidConfig(format!("duplicate tensor {}", t.name)));
            }
        }
        let params = ModelParams {
            architecture: doc.architecture,
            config: doc.config,
            input: doc.input,
            classes: doc.classes,
            tensors,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let json = self.to_json()?;
        w.write_all(json.as_bytes())
            .map_err(|source| CoreError::Io { path: "<writer>".into(), source })
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut text = String::new();
        r.read_to_string(&mut text)
            .map_err(|source| CoreError::Io { path: "<reader>".into(), source })?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|source| CoreError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(CoreError::MissingFile(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path).map_err(|source| CoreError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }
}
