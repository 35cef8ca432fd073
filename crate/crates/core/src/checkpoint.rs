//! JSON checkpoints. Floats are written in shortest round-trip form and parsed
//! exactly, so a save/load cycle is bit-exact.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::NetworkSpec;

pub const FORMAT: &str = "glif-checkpoint";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckpointFile {
    format: String,
    format_version: u32,
    network: NetworkSpec,
}

pub fn to_json(net: &NetworkSpec) -> Result<String> {
    net.validate()?;
    serde_json::to_string_pretty(&CheckpointFile {
        format: FORMAT.into(),
        format_version: FORMAT_VERSION,
        network: net.clone(),
    })
    .map_err(|e| Error::Checkpoint(e.to_string()))
}

pub fn from_json(text: &str) -> Result<NetworkSpec> {
    let file: CheckpointFile =
        serde_json::from_str(text).map_err(|e| Error::Checkpoint(e.to_string()))?;
    if file.format != FORMAT {
        return Err(Error::Checkpoint(format!("not a checkpoint: format {:?}", file.format)));
    }
    if file.format_version != FORMAT_VERSION {
        return Err(Error::Checkpoint(format!(
            "unsupported format version {} (this build reads {FORMAT_VERSION})",
            file.format_version
        )));
    }
    file.network.validate()?;
    Ok(file.network)
}

pub fn save_checkpoint(net: &NetworkSpec, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(net)?).map_err(|e| Error::io(path, e))
}

pub fn load_checkpoint(path: &Path) -> Result<NetworkSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json(&text)
}
