//! The `key=value` configuration file.
//!
//! Each key names a long command line flag. Keys are turned into flags and
//! placed before the flags given on the command line, which therefore win.

use std::path::Path;

use clap::{ArgAction, Command};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("{path} line {line}: expected key=value")]
    Syntax { path: String, line: usize },
    #[error("{path} line {line}: unknown key {key:?}")]
    UnknownKey { path: String, line: usize, key: String },
    #[error("{path} line {line}: {key} must be true or false, got {value:?}")]
    NotABool { path: String, line: usize, key: String, value: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str, path: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { path: path.into(), line: i + 1 })?;
        let key = k.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax { path: path.into(), line: i + 1 });
        }
        out.push(Entry { line: i + 1, key: key.into(), value: v.trim().into() });
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<Vec<Entry>, ConfigError> {
    let shown = path.display().to_string();
    let text =
        std::fs::read_to_string(path).map_err(|e| ConfigError::Read { path: shown.clone(), message: e.to_string() })?;
    parse_config(&text, &shown)
}

/// Splices config entries into `args` right after the subcommand name.
///
/// Keys unknown to every subcommand are an error. Keys that only other
/// subcommands understand are ignored, so one file can serve the whole
/// pipeline.
pub fn merge(cli: &Command, args: Vec<String>, entries: &[Entry], path: &str) -> Result<Vec<String>, ConfigError> {
    let known = |cmd: &Command, key: &str| cmd.get_arguments().find(|a| a.get_long() == Some(key)).cloned();
    for e in entries {
        if e.key != "config" && !cli.get_subcommands().any(|c| known(c, &e.key).is_some()) {
            return Err(ConfigError::UnknownKey { path: path.into(), line: e.line, key: e.key.clone() });
        }
    }
    let names: Vec<&str> = cli.get_subcommands().map(Command::get_name).collect();
    let Some(pos) = args.iter().skip(1).position(|a| names.contains(&a.as_str())).map(|p| p + 1) else {
        return Ok(args);
    };
    let sub = cli.find_subcommand(&args[pos]).expect("name came from the command");
    let mut inserted = Vec::new();
    for e in entries {
        let Some(arg) = known(sub, &e.key) else { continue };
        match arg.get_action() {
            ArgAction::SetTrue => match e.value.as_str() {
                "true" => inserted.push(format!("--{}", e.key)),
                "false" => {}
                v => {
                    return Err(ConfigError::NotABool {
                        path: path.into(),
                        line: e.line,
                        key: e.key.clone(),
                        value: v.into(),
                    })
                }
            },
            _ => inserted.push(format!("--{}={}", e.key, e.value)),
        }
    }
    let mut out = args;
    out.splice(pos + 1..pos + 1, inserted);
    Ok(out)
}
