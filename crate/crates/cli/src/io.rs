//! File formats, run manifests and output plumbing.

use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use coklab_core::linalg::{Matrix, MatrixJson};
use coklab_core::mc::{MeasureSpec, RNG_ID};
use coklab_core::module::{FiniteModule, ModuleJson, RingContext};
use coklab_core::ring::{Modulus, PolyText, RingSpec};

use crate::OutputArgs;

/// Provenance block embedded in every output document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub git_describe: String,
    pub rng: String,
    pub command: String,
    pub config: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunManifest {
    pub fn new<C: Serialize>(command: &str, config: &C) -> Result<Self> {
        Ok(RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            git_describe: env!("COKLAB_GIT_DESCRIBE").to_string(),
            rng: RNG_ID.to_string(),
            command: command.to_string(),
            config: serde_json::to_value(config)?,
            wall_time_s: None,
        })
    }
}

/// Output document: the manifest followed by the command's payload.
#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    manifest: &'a RunManifest,
    #[serde(flatten)]
    body: &'a T,
}

/// Serializes `body` with `manifest` (adding the wall time if requested)
/// to the chosen destination, newline-terminated.
pub fn emit<T: Serialize>(
    out: &OutputArgs,
    mut manifest: RunManifest,
    started: Instant,
    body: &T,
) -> Result<()> {
    if out.timing {
        manifest.wall_time_s = Some(started.elapsed().as_secs_f64());
    }
    let mut text = serde_json::to_string_pretty(&Document {
        manifest: &manifest,
        body,
    })?;
    text.push('\n');
    match &out.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn ring_context(p: u64, k: u32, poly: &str) -> Result<RingContext> {
    let md = Modulus::new(p, k)?;
    let text: PolyText = poly.parse()?;
    let spec = RingSpec::new(md, text.to_poly(&md))?;
    Ok(RingContext::new(spec))
}

pub fn read_matrix(path: &Path, md: Modulus) -> Result<Matrix> {
    let json: MatrixJson = read_json(path)?;
    Ok(json.to_matrix(md)?)
}

/// Reads a module file; its id is the file stem.
pub fn read_module(path: &Path, ctx: &RingContext) -> Result<(String, FiniteModule)> {
    let json: ModuleJson = read_json(path)?;
    let g = FiniteModule::from_json(ctx.spec().clone(), &json)
        .with_context(|| format!("module {}", path.display()))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok((id, g))
}

/// Custom measure file: either a bare array of probabilities or
/// `{"probabilities": [...]}` over residues `0..p^level`.
#[derive(Deserialize)]
#[serde(untagged)]
enum TableFile {
    Bare(Vec<f64>),
    Wrapped { probabilities: Vec<f64> },
}

pub fn parse_measure(text: &str, p: u64) -> Result<MeasureSpec> {
    match text {
        "haar" => Ok(MeasureSpec::haar()),
        "bernoulli01" => Ok(MeasureSpec::bernoulli01()),
        _ => match text.strip_prefix("custom:") {
            Some(path) => {
                let table = match read_json::<TableFile>(Path::new(path))? {
                    TableFile::Bare(t) | TableFile::Wrapped { probabilities: t } => t,
                };
                Ok(MeasureSpec::custom(p, table)?)
            }
            None => bail!("unknown measure {text:?}: expected haar, bernoulli01 or custom:<file>"),
        },
    }
}

/// Worker count from `COKLAB_THREADS` (unset: all available cores).
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("COKLAB_THREADS") {
        Ok(v) => {
            let t: usize = v
                .trim()
                .parse()
                .with_context(|| format!("COKLAB_THREADS={v:?} is not a positive integer"))?;
            if t == 0 {
                bail!("COKLAB_THREADS must be positive");
            }
            Ok(Some(t))
        }
        Err(_) => Ok(None),
    }
}
