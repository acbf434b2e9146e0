//! Flat `key = value` config files whose keys mirror the long flag names.
//!
//! Values from the file are spliced in right after the subcommand path, so
//! flags given on the command line (which come later) take precedence.

use std::ffi::OsString;
use std::path::Path;

use super::CliError;

pub const CONFIG_FLAG: &str = "--config";

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
        let key = k.trim().trim_start_matches("--");
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(CliError::Usage(format!("config line {}: bad key `{}`", lineno + 1, k.trim())));
        }
        entries.push((key.to_string(), v.trim().to_string()));
    }
    Ok(entries)
}

/// Removes `--config PATH` from `args` and splices the file's entries in as flags.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy();
        if s == CONFIG_FLAG {
            let p = iter
                .next()
                .ok_or_else(|| CliError::Usage("--config needs a file path".into()))?;
            path = Some(p);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", Path::new(&path).display())))?;
    let entries = parse_config(&text)?;

    // binary name, then the subcommand path (tokens before the first flag)
    let insert_at = rest
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, a)| a.to_string_lossy().starts_with('-'))
        .map_or(rest.len(), |(i, _)| i);
    let mut injected = Vec::new();
    for (k, v) in entries {
        match v.as_str() {
            "true" => injected.push(OsString::from(format!("--{k}"))),
            "false" => {}
            _ => {
                injected.push(OsString::from(format!("--{k}")));
                injected.push(OsString::from(v));
            }
        }
    }
    rest.splice(insert_at..insert_at, injected);
    Ok(rest)
}
