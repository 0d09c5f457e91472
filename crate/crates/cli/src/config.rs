use std::path::Path;

use hfdlab::{ClassSubset, Error, FiniteAbelianGroup, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Setup file: `{"group": {"moduli": [6]}, "classes": ["2","3","4"], "s_generators": ["(3,3)"]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetupFile {
    group: FiniteAbelianGroup,
    classes: Vec<String>,
    #[serde(default)]
    s_generators: Vec<String>,
    #[serde(default)]
    r: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub moduli: Vec<u32>,
    pub classes: Vec<String>,
    pub r: Vec<u32>,
    pub generators: Vec<String>,
    pub ohfd_bound: Option<usize>,
    pub claim_bound: Option<usize>,
    pub cap: usize,
    pub format: Format,
    pub relations: bool,
}

impl RunConfig {
    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        let file: SetupFile =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        if self.moduli.is_empty() {
            self.moduli = file.group.moduli().to_vec();
        }
        if self.classes.is_empty() {
            self.classes = file.classes;
        }
        if self.generators.is_empty() {
            self.generators = file.s_generators;
        }
        if self.r.is_empty() {
            self.r = file.r;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.moduli.is_empty() {
            return Err(Error::InvalidParameter("--group is required".into()));
        }
        if let Some(r) = self.r.iter().find(|&&r| r < 2) {
            return Err(Error::InvalidParameter(format!("r = {r} must be at least 2")));
        }
        if self.ohfd_bound == Some(0) || self.claim_bound == Some(0) || self.cap == 0 {
            return Err(Error::InvalidParameter("bounds and cap must be positive".into()));
        }
        Ok(())
    }

    pub fn class_subset(&self) -> Result<ClassSubset> {
        let g = FiniteAbelianGroup::new(self.moduli.clone())?;
        let classes = self.classes.iter().map(|c| g.parse_element(c)).collect::<Result<Vec<_>>>()?;
        ClassSubset::new(g, classes)
    }
}

/// Splits `2,3,4` into classes; for rank ≥ 2 the tuples are written `a:b`.
pub fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(String::from).collect()
}

/// Splits `(3,3),(2,4)` into atom literals.
pub fn split_literals(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = None;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => {
                if depth == 0 {
                    start = Some(i);
                }
                depth += 1;
            }
            ')' => {
                depth = depth.checked_sub(1).ok_or_else(|| Error::Parse(format!("unbalanced {s:?}")))?;
                if depth == 0 {
                    out.push(s[start.take().unwrap()..=i].to_string());
                }
            }
            ',' | ' ' if depth == 0 => {}
            _ if depth == 0 => return Err(Error::Parse(format!("expected atom literals in {s:?}"))),
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced {s:?}")));
    }
    Ok(out)
}
