use std::path::{Path, PathBuf};
use std::str::FromStr;

use verma_ext_core::coxeter::{DescentPolicy, TypeDescriptor, DEFAULT_BUDGET};

use crate::error::CliError;

/// Environment variable consulted when no cache directory is given.
pub const CACHE_ENV: &str = "VERMA_EXT_CACHE";

pub const DEFAULT_CACHE_DIR: &str = ".verma-ext-cache";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Text,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            other => Err(CliError::Usage(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub type_descriptor: TypeDescriptor,
    /// `None` means the default family of subsets chosen per system.
    pub singular_subsets: Option<Vec<Vec<usize>>>,
    pub budget: u64,
    pub cache_dir: PathBuf,
    pub output_format: OutputFormat,
    pub descent_policy: DescentPolicy,
    /// 0 lets rayon decide.
    pub parallelism: usize,
}

impl RunConfig {
    pub fn new(type_descriptor: TypeDescriptor) -> RunConfig {
        RunConfig {
            type_descriptor,
            singular_subsets: None,
            budget: DEFAULT_BUDGET,
            cache_dir: PathBuf::from(DEFAULT_CACHE_DIR),
            output_format: OutputFormat::default(),
            descent_policy: DescentPolicy::default(),
            parallelism: 0,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.budget == 0 {
            return Err(CliError::Usage("budget must be positive".into()));
        }
        let rank = self.type_descriptor.rank();
        for subset in self.singular_subsets.iter().flatten() {
            if let Some(&bad) = subset.iter().find(|&&i| i >= rank) {
                return Err(CliError::Usage(format!(
                    "singular index {bad} out of range for rank {rank}"
                )));
            }
        }
        Ok(())
    }

    /// Bit masks of the configured singular subsets, or every subset up to
    /// rank 4 and otherwise the empty set, the singletons and `S`.
    pub fn singular_masks(&self) -> Vec<u64> {
        let rank = self.type_descriptor.rank();
        let full = if rank == 64 { u64::MAX } else { (1u64 << rank) - 1 };
        match &self.singular_subsets {
            Some(subsets) => subsets
                .iter()
                .map(|s| s.iter().fold(0u64, |m, &i| m | 1 << i))
                .collect(),
            None if rank <= 4 => (0..=full).collect(),
            None => std::iter::once(0)
                .chain((0..rank).map(|i| 1u64 << i))
                .chain(std::iter::once(full))
                .collect(),
        }
    }
}

/// Flag, then environment, then the working-directory default.
pub fn resolve_cache_dir(flag: Option<&Path>, env: Option<&str>) -> PathBuf {
    match (flag, env) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(e)) if !e.is_empty() => PathBuf::from(e),
        _ => PathBuf::from(DEFAULT_CACHE_DIR),
    }
}

/// `"0,2"` to `[0, 2]`; `""`, `"-"` and `"none"` give the empty set.
pub fn parse_subset(s: &str) -> Result<Vec<usize>, CliError> {
    let t = s.trim();
    if t.is_empty() || t == "-" || t.eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    let mut out = t
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad singular index {p:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets() {
        assert_eq!(parse_subset("").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_subset("2,0,2").unwrap(), vec![0, 2]);
        assert!(parse_subset("a").is_err());
    }

    #[test]
    fn default_masks() {
        let cfg = RunConfig::new("A2".parse().unwrap());
        assert_eq!(cfg.singular_masks(), vec![0, 1, 2, 3]);
        let cfg = RunConfig::new("A5".parse().unwrap());
        assert_eq!(cfg.singular_masks(), vec![0, 1, 2, 4, 8, 16, 31]);
    }

    #[test]
    fn validation() {
        let mut cfg = RunConfig::new("B3".parse().unwrap());
        cfg.singular_subsets = Some(vec![vec![3]]);
        assert!(cfg.validate().is_err());
        cfg.singular_subsets = Some(vec![vec![], vec![0], vec![0, 1, 2]]);
        assert!(cfg.validate().is_ok());
        cfg.budget = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn cache_precedence() {
        let flag = PathBuf::from("a");
        assert_eq!(resolve_cache_dir(Some(&flag), Some("b")), flag);
        assert_eq!(resolve_cache_dir(None, Some("b")), PathBuf::from("b"));
        assert_eq!(resolve_cache_dir(None, None), PathBuf::from(DEFAULT_CACHE_DIR));
    }
}
