//! The in-repo fixture corpus, embedded so `selftest` needs no files.

use std::path::Path;

use crate::problem::ProblemFile;
use crate::CliError;

macro_rules! fixtures {
    ($($name:literal),* $(,)?) => {
        pub const EMBEDDED: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../fixtures/", $name, ".json")))),*
        ];
    };
}

fixtures!(
    "convex",
    "pinch",
    "spike",
    "inverse_distance",
    "non_isc_domain",
    "regular_01",
    "regular_02",
    "regular_03",
    "regular_04",
    "regular_05",
    "regular_06",
    "regular_07",
    "regular_08",
    "regular_09",
    "regular_10",
);

/// A named fixture with the place it came from.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub origin: String,
    pub text: String,
}

impl Fixture {
    pub fn parse(&self) -> Result<ProblemFile, CliError> {
        ProblemFile::from_json(&self.text)
    }
}

pub fn embedded() -> Vec<Fixture> {
    EMBEDDED
        .iter()
        .map(|(name, text)| Fixture {
            name: name.to_string(),
            origin: format!("<embedded>/{name}.json"),
            text: text.to_string(),
        })
        .collect()
}

/// Every `*.json` in `dir`, sorted by file name.
pub fn from_dir(dir: &Path) -> Result<Vec<Fixture>, CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map_or(false, |x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).map_err(io)?;
            Ok(Fixture {
                name: p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                origin: p.display().to_string(),
                text,
            })
        })
        .collect()
}

pub fn is_regular(name: &str) -> bool {
    name.starts_with("regular_")
}
