use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::error::{CliError, CliResult};

/// A fully rendered artifact and where it goes; `None` means standard output.
pub struct Artifact {
    pub path: Option<PathBuf>,
    pub bytes: Vec<u8>,
}

/// Writes every artifact, or none of the files if any staging step fails.
pub fn commit(artifacts: Vec<Artifact>) -> CliResult<()> {
    let mut staged = Vec::new();
    let mut stdout = Vec::new();
    for artifact in artifacts {
        match artifact.path {
            Some(path) => staged.push((stage(&path, &artifact.bytes)?, path)),
            None => stdout.push(artifact.bytes),
        }
    }
    for (tmp, path) in staged {
        tmp.persist(&path)
            .map_err(|e| CliError::Data(format!("cannot write {}: {}", path.display(), e.error)))?;
    }
    let mut out = std::io::stdout().lock();
    for bytes in stdout {
        out.write_all(&bytes)?;
    }
    out.flush()?;
    Ok(())
}

fn stage(path: &Path, bytes: &[u8]) -> CliResult<NamedTempFile> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| CliError::Data(format!("cannot write {}: {e}", path.display()));
    let mut tmp = NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    Ok(tmp)
}
