pub mod discrete;
pub mod gaussian;
pub mod simulate;
pub mod validate;

use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

/// Absolute form of an input path so that manifests replay from any
/// working directory.
pub(crate) fn absolute(path: &Path) -> CliResult<PathBuf> {
    std::fs::canonicalize(path).map_err(|e| CliError::io(path, e))
}

/// Attaches the file path to a core error raised while parsing that file.
pub(crate) fn in_file(path: &Path) -> impl FnOnce(wiretap_core::Error) -> CliError + '_ {
    move |e| CliError::input(path, e)
}
