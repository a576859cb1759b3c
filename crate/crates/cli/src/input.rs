//! System sources: a spec file or a catalog id.

use std::path::PathBuf;

use anyhow::Context;
use isochron::algebra::{Poly, WeightedOrder};
use isochron::systems::{catalog, FamilyRecord, SystemSpec};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

pub fn input_error(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

#[derive(clap::Args, Debug)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// TOML system spec.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Catalog family id (see `catalog list`).
    #[arg(long)]
    pub family: Option<String>,
}

pub struct Source {
    pub record: FamilyRecord,
    /// Canonical TOML of the spec.
    pub text: String,
    pub origin: Value,
}

impl SourceArgs {
    pub fn load(&self) -> anyhow::Result<Source> {
        if let Some(id) = &self.family {
            let record = catalog().get(id)?.clone();
            let text = record.spec().to_toml();
            return Ok(Source { record, text, origin: json!({ "family": id }) });
        }
        let path = self.spec.as_ref().expect("clap requires one source");
        let raw = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let spec = SystemSpec::from_toml(&raw).with_context(|| format!("in {}", path.display()))?;
        let record = FamilyRecord::from_spec(spec).with_context(|| format!("in {}", path.display()))?;
        let text = record.spec().to_toml();
        Ok(Source { record, text, origin: json!({ "spec": path.display().to_string() }) })
    }
}

/// Canonical text of `p` under `order`, falling back to degrevlex.
pub fn poly_text(p: &Poly, order: &WeightedOrder) -> String {
    match order.bind(p.vars()) {
        Ok(mo) => p.to_text(&mo),
        Err(_) => p.to_string(),
    }
}

/// `name=value` pairs.
pub fn parse_assignment(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}
