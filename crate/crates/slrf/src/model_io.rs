//! Versioned JSON model files. See `docs/model-format.md`.

use std::path::Path;

use anyhow::{ensure, Context, Result};
use serde::{Deserialize, Serialize};
use slrf_core::{FeatureSchema, Model};

pub const FORMAT: &str = "slrf-model";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub schema: FeatureSchema,
    pub model: Model,
}

impl ModelFile {
    pub fn new(schema: FeatureSchema, model: Model) -> Self {
        Self { format: FORMAT.to_owned(), version: VERSION, schema, model }
    }
}

pub fn to_json(schema: &FeatureSchema, model: &Model) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ModelFile::new(schema.clone(), model.clone()))?)
}

/// Parses and structurally checks a model file.
pub fn from_json(text: &str) -> Result<ModelFile> {
    let file: ModelFile = serde_json::from_str(text)?;
    ensure!(file.format == FORMAT, "not a model file: format is {:?}", file.format);
    ensure!(file.version == VERSION, "unsupported model format version {}", file.version);
    file.schema.validate()?;
    let n_classes = slrf_core::Classifier::n_classes(&file.model);
    ensure!(
        n_classes == file.schema.n_classes(),
        "model has {n_classes} classes, schema lists {}",
        file.schema.n_classes()
    );
    file.model.check(file.schema.n_features())?;
    Ok(file)
}

pub fn save(path: &Path, schema: &FeatureSchema, model: &Model) -> Result<()> {
    crate::output::write_atomic(path, to_json(schema, model)?.as_bytes())
}

pub fn load(path: &Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    from_json(&text).with_context(|| format!("loading model {}", path.display()))
}
