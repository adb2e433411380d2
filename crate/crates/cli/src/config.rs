//! Run configuration: command-line flags layered over an optional TOML file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Context;
use prepol_core::{CaseId, Family};
use serde::Deserialize;

/// Raised for anything that should exit with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// Contents of the configuration file. Every key is optional.
///
/// ```toml
/// cases = ["e6_1:3", "f4_1:4"]
/// serre_bound = 12
/// format = "text"
/// out = "report.json"
/// workers = 4
///
/// [smax]
/// default = 2
/// e6_1 = 3
/// ```
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub cases: Option<Vec<String>>,
    pub smax: Option<BTreeMap<String, i64>>,
    pub serre_bound: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

/// Flags of the `verify` subcommand before merging.
#[derive(Debug, Default)]
pub struct VerifyFlags {
    pub family: Option<String>,
    pub node: Option<usize>,
    pub cases: Vec<String>,
    pub smax: Option<i64>,
    pub serre_bound: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Selected cases with their maximal level, in table order.
    pub cases: Vec<(CaseId, i64)>,
    pub serre_bound: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn default_smax(family: Family) -> i64 {
    if family == Family::E6_1 {
        3
    } else {
        2
    }
}

fn parse_case(s: &str) -> anyhow::Result<CaseId> {
    s.parse().map_err(|e| usage(format!("{e}")))
}

fn parse_family(s: &str) -> anyhow::Result<Family> {
    s.parse().map_err(|e| usage(format!("{e}")))
}

impl RunConfig {
    pub fn resolve(flags: VerifyFlags, file: FileConfig) -> anyhow::Result<Self> {
        let mut selected: Vec<CaseId> = Vec::new();
        if let Some(fam) = &flags.family {
            let family = parse_family(fam)?;
            match flags.node {
                Some(n) => selected.push(CaseId::lookup(family, n).map_err(|e| usage(format!("{e}")))?),
                None => selected.extend(CaseId::cases_for(family)),
            }
        } else if flags.node.is_some() {
            return Err(usage("--node requires --family"));
        }
        for c in &flags.cases {
            selected.push(parse_case(c)?);
        }
        if selected.is_empty() {
            match &file.cases {
                Some(list) => {
                    for c in list {
                        selected.push(parse_case(c)?);
                    }
                }
                None => selected.extend(CaseId::ALL),
            }
        }
        selected.sort_by_key(|id| CaseId::ALL.iter().position(|x| x == id));
        selected.dedup();

        let mut per_family: BTreeMap<Family, i64> = BTreeMap::new();
        let mut file_default = None;
        for (key, v) in file.smax.iter().flatten() {
            if key == "default" {
                file_default = Some(*v);
            } else {
                per_family.insert(parse_family(key)?, *v);
            }
        }
        let cases: Vec<(CaseId, i64)> = selected
            .into_iter()
            .map(|id| {
                let f = id.family();
                let smax = flags
                    .smax
                    .or_else(|| per_family.get(&f).copied())
                    .or(file_default)
                    .unwrap_or_else(|| default_smax(f));
                (id, smax)
            })
            .collect();
        if let Some((id, _)) = cases.iter().find(|(_, s)| *s < 1) {
            return Err(usage(format!("smax must be at least 1 (case {id})")));
        }
        Ok(Self {
            cases,
            serre_bound: flags.serre_bound.or(file.serre_bound),
            format: flags.format.or(file.format).unwrap_or(Format::Json),
            out: flags.out.or(file.out),
        })
    }
}

/// Worker count from the flag (or environment), falling back to the file.
pub fn resolve_workers(flag: Option<usize>, file: &FileConfig) -> anyhow::Result<Option<usize>> {
    match flag.or(file.workers) {
        Some(0) => Err(usage("worker count must be at least 1")),
        w => Ok(w),
    }
}
