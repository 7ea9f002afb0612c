//! Model directory layout:
//!
//! ```text
//! manifest.json        task, labels, weights, and a sha256 for every file below
//! models/              dnn.json, bilstm.json, attlstm.json, featurizer.json
//! resources/           copies of the lexicons and embeddings used in training
//! reports/             weights.json, weights.txt, training.json
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use desc_core::ensemble::{EnsembleModel, EnsembleWeights, F1Flavor, MEMBERS};
use desc_core::models::{Architecture, ModelParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Decode, ResourcePaths, Task};
use crate::dataset::LabelMap;
use crate::error::{io_err, CliError, Result};
use crate::pipeline::{Featurizer, FEATURIZER_FORMAT_VERSION};

pub const MANIFEST_FORMAT_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileRef {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberRef {
    pub architecture: Architecture,
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub version: u32,
    pub task: Task,
    pub labels: LabelMap,
    pub decode: Decode,
    pub f1_flavor: F1Flavor,
    pub cv_folds: usize,
    pub weights: EnsembleWeights,
    pub members: Vec<MemberRef>,
    pub featurizer: FileRef,
    pub resources: BTreeMap<String, FileRef>,
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut file = fs::File::open(path).map_err(io_err(path))?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf).map_err(io_err(path))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(format!("{:x}", hasher.finalize()))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    fs::write(path, contents).map_err(io_err(path))
}

fn member_file(arch: Architecture) -> String {
    format!("models/{}.json", arch.id().to_lowercase())
}

/// Everything `cmd_train` persists.
pub struct Bundle<'a> {
    pub task: Task,
    pub labels: &'a LabelMap,
    pub decode: Decode,
    pub f1_flavor: F1Flavor,
    pub cv_folds: usize,
    pub featurizer: &'a Featurizer,
    pub ensemble: &'a EnsembleModel,
    pub resources: &'a ResourcePaths,
    pub reports: Vec<(String, String)>,
}

/// Writes the bundle into `dir`, which must exist and be empty.
pub fn write_bundle(dir: &Path, bundle: &Bundle<'_>) -> Result<Manifest> {
    let mut members = Vec::with_capacity(MEMBERS);
    for model in &bundle.ensemble.members {
        let file = member_file(model.architecture);
        let path = dir.join(&file);
        write_file(&path, &model.to_json()?)?;
        members.push(MemberRef { architecture: model.architecture, sha256: sha256_file(&path)?, file });
    }
    let feat_file = "models/featurizer.json".to_string();
    let feat_path = dir.join(&feat_file);
    write_file(&feat_path, &(serde_json::to_string_pretty(bundle.featurizer)? + "\n"))?;

    let mut resources = BTreeMap::new();
    for (name, src) in bundle.resources.entries() {
        let ext = src.extension().and_then(|e| e.to_str()).map(|e| format!(".{e}")).unwrap_or_default();
        let file = format!("resources/{name}{ext}");
        let dst = dir.join(&file);
        fs::create_dir_all(dst.parent().expect("resources dir")).map_err(io_err(dir))?;
        fs::copy(src, &dst).map_err(io_err(src))?;
        resources.insert(name.to_string(), FileRef { sha256: sha256_file(&dst)?, file });
    }
    for (name, text) in &bundle.reports {
        write_file(&dir.join("reports").join(name), text)?;
    }
    let manifest = Manifest {
        format: "desc-ensemble".into(),
        version: MANIFEST_FORMAT_VERSION,
        task: bundle.task,
        labels: bundle.labels.clone(),
        decode: bundle.decode,
        f1_flavor: bundle.f1_flavor,
        cv_folds: bundle.cv_folds,
        weights: bundle.ensemble.weights.clone(),
        members,
        featurizer: FileRef { sha256: sha256_file(&feat_path)?, file: feat_file },
        resources,
    };
    write_file(&dir.join(MANIFEST_FILE), &(serde_json::to_string_pretty(&manifest)? + "\n"))?;
    Ok(manifest)
}

/// Builds the bundle in a sibling staging directory and moves it into
/// `dir` only when every file has been written. On failure the staging
/// directory is removed and `dir` is left as it was.
pub fn commit_bundle(dir: &Path, bundle: &Bundle<'_>) -> Result<Manifest> {
    let name = dir.file_name().and_then(|n| n.to_str()).unwrap_or("model");
    let parent = dir.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(parent).map_err(io_err(parent))?;
    let staging = parent.join(format!(".{name}.staging-{}", std::process::id()));
    if staging.exists() {
        fs::remove_dir_all(&staging).map_err(io_err(&staging))?;
    }
    fs::create_dir_all(&staging).map_err(io_err(&staging))?;
    let result = write_bundle(&staging, bundle).and_then(|m| {
        if dir.exists() && !dir.join(MANIFEST_FILE).exists() && fs::read_dir(dir).map_err(io_err(dir))?.next().is_some() {
            return Err(CliError::InvalidConfig(format!(
                "{} exists and is not a model directory",
                dir.display()
            )));
        }
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        for entry in ["models", "resources", "reports", MANIFEST_FILE] {
            let target = dir.join(entry);
            if target.is_dir() {
                fs::remove_dir_all(&target).map_err(io_err(&target))?;
            } else if target.exists() {
                fs::remove_file(&target).map_err(io_err(&target))?;
            }
            let from = staging.join(entry);
            if from.exists() {
                fs::rename(&from, &target).map_err(io_err(&target))?;
            }
        }
        Ok(m)
    });
    let _ = fs::remove_dir_all(&staging);
    result
}

/// A verified, loaded model directory.
pub struct LoadedModel {
    pub dir: PathBuf,
    pub manifest: Manifest,
    pub featurizer: Featurizer,
    pub ensemble: EnsembleModel,
    pub resources: ResourcePaths,
}

fn verified(dir: &Path, file: &str, sha256: &str) -> Result<PathBuf> {
    let path = dir.join(file);
    if !path.is_file() {
        return Err(CliError::MissingArtifact(path));
    }
    let actual = sha256_file(&path)?;
    if actual != sha256 {
        return Err(CliError::VersionMismatch {
            path,
            reason: format!("sha256 {actual} differs from recorded {sha256}"),
        });
    }
    Ok(path)
}

pub fn load_model_dir(dir: &Path) -> Result<LoadedModel> {
    let manifest_path = dir.join(MANIFEST_FILE);
    if !manifest_path.is_file() {
        return Err(CliError::MissingArtifact(manifest_path));
    }
    let text = fs::read_to_string(&manifest_path).map_err(io_err(&manifest_path))?;
    let header: serde_json::Value = serde_json::from_str(&text)?;
    let version = header.get("version").and_then(serde_json::Value::as_u64);
    if header.get("format").and_then(serde_json::Value::as_str) != Some("desc-ensemble")
        || version != Some(u64::from(MANIFEST_FORMAT_VERSION))
    {
        return Err(CliError::VersionMismatch {
            path: manifest_path,
            reason: format!("unsupported manifest version {version:?}"),
        });
    }
    let manifest: Manifest = serde_json::from_str(&text)?;
    if manifest.members.len() != MEMBERS {
        return Err(CliError::VersionMismatch {
            path: manifest_path,
            reason: format!("expected {MEMBERS} members, found {}", manifest.members.len()),
        });
    }
    let mut members = Vec::with_capacity(MEMBERS);
    for (m, arch) in manifest.members.iter().zip(Architecture::ALL) {
        let path = verified(dir, &m.file, &m.sha256)?;
        let params = ModelParams::load(&path)?;
        if m.architecture != arch || params.architecture != arch {
            return Err(CliError::VersionMismatch { path, reason: format!("expected a {arch} model") });
        }
        members.push(params);
    }
    let feat_path = verified(dir, &manifest.featurizer.file, &manifest.featurizer.sha256)?;
    let featurizer: Featurizer =
        serde_json::from_str(&fs::read_to_string(&feat_path).map_err(io_err(&feat_path))?)?;
    if featurizer.version != FEATURIZER_FORMAT_VERSION {
        return Err(CliError::VersionMismatch { path: feat_path, reason: "unsupported featurizer version".into() });
    }
    let mut resources = ResourcePaths::default();
    for (name, r) in &manifest.resources {
        let path = Some(verified(dir, &r.file, &r.sha256)?);
        match name.as_str() {
            "sentiwordnet" => resources.sentiwordnet = path,
            "vader" => resources.vader = path,
            "afinn" => resources.afinn = path,
            "depechemood" => resources.depechemood = path,
            "dale_chall" => resources.dale_chall = path,
            "pos_lexicon" => resources.pos_lexicon = path,
            "embeddings" => resources.embeddings = path,
            other => {
                return Err(CliError::VersionMismatch {
                    path: manifest_path,
                    reason: format!("unknown resource {other:?}"),
                })
            }
        }
    }
    let members: [ModelParams; MEMBERS] = members.try_into().expect("three members");
    let ensemble = EnsembleModel::new(members, manifest.weights.clone())?;
    Ok(LoadedModel { dir: dir.to_path_buf(), manifest, featurizer, ensemble, resources })
}
