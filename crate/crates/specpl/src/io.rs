//! Loading programs and spec files.

use std::path::Path;

use anyhow::{Context, Result};
use specpl_core::ast::{parse_program, Program};
use specpl_core::spec_lang::{parse_specs, FormalSpec};

pub fn load_program(path: &Path) -> Result<Program> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_program(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

/// Reads and concatenates the specs of every file, in order.
pub fn load_specs(paths: &[impl AsRef<Path>]) -> Result<Vec<FormalSpec>> {
    let mut out = Vec::new();
    for p in paths {
        let p = p.as_ref();
        let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        let specs = parse_specs(&text).map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))?;
        out.extend(specs);
    }
    Ok(out)
}
