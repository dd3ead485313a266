//! Flat `key = value` config files merged under the command line.
//!
//! Each key names a long flag of the chosen subcommand (`cos-theta = 29/36`
//! stands for `--cos-theta 29/36`). Blank lines and lines starting with `#`
//! are skipped. A bare key switches a boolean flag on.

use std::ffi::OsString;
use std::path::Path;

use clap::CommandFactory;

use crate::{CliError, RunConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: Option<String>,
    pub line: usize,
}

pub fn parse_config(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), Some(v.trim().to_string())),
            None => (line, None),
        };
        let key = key.trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(CliError::Usage(format!(
                "config line {}: malformed key in `{raw}`",
                idx + 1
            )));
        }
        out.push(Entry {
            key,
            value,
            line: idx + 1,
        });
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<Vec<Entry>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// Removes `--config PATH` / `--config=PATH` from `args` and returns the path.
fn take_config_flag(args: &mut Vec<OsString>) -> Result<Option<OsString>, CliError> {
    let mut found = None;
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy().into_owned();
        if s == "--" {
            break;
        }
        if s == "--config" {
            if i + 1 >= args.len() {
                return Err(CliError::Usage("--config needs a path".into()));
            }
            found = Some(args.remove(i + 1));
            args.remove(i);
            continue;
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            found = Some(OsString::from(rest));
            args.remove(i);
            continue;
        }
        i += 1;
    }
    Ok(found)
}

/// Splices the config entries in right after the subcommand name, so that
/// the flags typed on the command line come later and win.
pub fn merge_args(raw: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut args = raw;
    let Some(path) = take_config_flag(&mut args)? else {
        return Ok(args);
    };
    let entries = read_config(Path::new(&path))?;
    let root = RunConfig::command();
    let Some(pos) = args
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, a)| root.find_subcommand(a.to_string_lossy().as_ref()).is_some())
        .map(|(i, _)| i)
    else {
        return Ok(args);
    };
    let name = args[pos].to_string_lossy().into_owned();
    let sub = root.find_subcommand(&name).unwrap();
    let mut injected = Vec::new();
    for e in entries {
        let Some(arg) = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(e.key.as_str()))
        else {
            let known = root.get_subcommands().any(|s| {
                s.get_arguments()
                    .any(|a| a.get_long() == Some(e.key.as_str()))
            });
            if known {
                continue;
            }
            return Err(CliError::Usage(format!(
                "config line {}: unknown key `{}`",
                e.line, e.key
            )));
        };
        let takes_value = arg.get_action().takes_values();
        match (e.value, takes_value) {
            (Some(v), true) => injected.push(OsString::from(format!("--{}={v}", e.key))),
            (None, false) => injected.push(OsString::from(format!("--{}", e.key))),
            (Some(v), false) if matches!(v.as_str(), "true" | "1" | "yes") => {
                injected.push(OsString::from(format!("--{}", e.key)))
            }
            (Some(v), false) if matches!(v.as_str(), "false" | "0" | "no") => {}
            _ => {
                return Err(CliError::Usage(format!(
                    "config line {}: bad value for `{}`",
                    e.line, e.key
                )))
            }
        }
    }
    args.splice(pos + 1..pos + 1, injected);
    Ok(args)
}
