//! Where a game comes from: a bundled model or a pair of files.

use std::fmt;
use std::path::Path;

use bddl_core::bddl::{parse_domain, parse_problem, GameDomain, GameInstance, ParseError};
use bddl_core::models;

/// Everything that can go wrong in a command, with its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or a missing model: exit 1.
    Usage(String),
    /// Input that does not parse or validate: exit 2.
    Input(String),
    /// No external solver configured or runnable: exit 3.
    SolverMissing(String),
    /// Anything else: exit 4.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::SolverMissing(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::SolverMissing(m) | CliError::Internal(m) => {
                f.write_str(m)
            }
        }
    }
}

impl std::error::Error for CliError {}

/// A parsed domain and problem, plus a display name.
#[derive(Debug, Clone)]
pub struct Game {
    pub name: String,
    pub domain: GameDomain,
    pub instance: GameInstance,
}

impl Game {
    /// Parse domain and problem text; `origin` labels error messages.
    pub fn from_text(name: &str, domain: &str, problem: &str, origin: (&str, &str)) -> Result<Self, CliError> {
        let located = |file: &str, e: ParseError| CliError::Input(format!("{file}:{e}"));
        Ok(Game {
            name: name.to_string(),
            domain: parse_domain(domain).map_err(|e| located(origin.0, e))?,
            instance: parse_problem(problem).map_err(|e| located(origin.1, e))?,
        })
    }

    pub fn bundled(name: &str) -> Result<Self, CliError> {
        let m = models::find(name).ok_or_else(|| {
            let names: Vec<_> = models::all().iter().map(|m| m.name).collect();
            CliError::Usage(format!("unknown model '{name}'; bundled models: {}", names.join(", ")))
        })?;
        Self::from_text(m.name, m.domain, m.problem, ("domain", "problem"))
    }

    pub fn from_files(domain: &Path, problem: &Path) -> Result<Self, CliError> {
        let read = |p: &Path| {
            std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))
        };
        let name = problem
            .file_name()
            .and_then(|s| s.to_str())
            .map_or("problem", |s| s.trim_end_matches(".bddl").trim_end_matches(".problem"));
        Self::from_text(
            name,
            &read(domain)?,
            &read(problem)?,
            (&domain.display().to_string(), &problem.display().to_string()),
        )
    }

    /// Replace the problem's depth.
    pub fn with_depth(mut self, depth: Option<u32>) -> Self {
        if let Some(d) = depth {
            self.instance = self.instance.with_depth(d);
        }
        self
    }
}
