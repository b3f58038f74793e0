//! External QBF solvers: configuration, invocation and depth scans.
//!
//! A solver is any executable taking the formula path as an argument that
//! follows the DIMACS exit convention (10 true, 20 false) or prints an
//! `s cnf 1` / `s cnf 0` result line.

use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bddl::{GameDomain, GameInstance};
use crate::circuit::{qcir, qdimacs};
use crate::encoder::{encode, EncodeError, EncodedInstance};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

pub const ENV_CONFIG: &str = "BDDL_SOLVER_CONFIG";
pub const ENV_QCIR: &str = "BDDL_QCIR_SOLVER";
pub const ENV_QDIMACS: &str = "BDDL_QDIMACS_SOLVER";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Qcir,
    Qdimacs,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Qcir => "qcir",
            Format::Qdimacs => "qdimacs",
        }
    }

    /// Serialize an encoding in this format.
    pub fn render(self, enc: &EncodedInstance) -> String {
        match self {
            Format::Qcir => qcir::to_qcir_string(&enc.circuit),
            Format::Qdimacs => qdimacs::to_qdimacs_string(&enc.circuit),
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "qcir" => Ok(Format::Qcir),
            "qdimacs" => Ok(Format::Qdimacs),
            other => Err(format!("unknown format '{other}' (expected qcir or qdimacs)")),
        }
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.extension())
    }
}

/// How to call one solver. An argument equal to `{file}` is replaced by the
/// formula path; without one, the path is appended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolverSpec {
    pub executable: PathBuf,
    pub args: Vec<String>,
    pub format: Format,
    pub timeout: Duration,
    /// Recorded for reports; not enforced.
    pub memory_limit: Option<u64>,
}

impl SolverSpec {
    pub fn new(executable: impl Into<PathBuf>, format: Format) -> Self {
        SolverSpec {
            executable: executable.into(),
            args: Vec::new(),
            format,
            timeout: DEFAULT_TIMEOUT,
            memory_limit: None,
        }
    }

    /// Parse `"path arg1 arg2"` as written in a config file.
    pub fn from_command_line(line: &str, format: Format) -> Option<Self> {
        let mut words = line.split_whitespace();
        let exe = words.next()?;
        let mut spec = SolverSpec::new(exe, format);
        spec.args = words.map(str::to_string).collect();
        Some(spec)
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    fn arguments(&self, file: &Path) -> Vec<String> {
        let path = file.display().to_string();
        let mut args: Vec<String> = self
            .args
            .iter()
            .map(|a| if a == "{file}" { path.clone() } else { a.clone() })
            .collect();
        if !self.args.iter().any(|a| a == "{file}") {
            args.push(path);
        }
        args
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    True,
    False,
    Unknown,
    Timeout,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverVerdict {
    pub status: Status,
    #[serde(rename = "wall_time_secs", serialize_with = "secs")]
    pub wall_time: Duration,
    pub raw_output: String,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl SolverVerdict {
    pub fn new(status: Status, wall_time: Duration, raw_output: impl Into<String>) -> Self {
        SolverVerdict {
            status,
            wall_time,
            raw_output: raw_output.into(),
        }
    }
}

/// The result line a solver printed, if any.
fn scan_output(text: &str) -> Option<Status> {
    text.lines().find_map(|l| {
        let words: Vec<&str> = l.split_whitespace().collect();
        match words.as_slice() {
            ["s", "cnf", "1", ..] => Some(Status::True),
            ["s", "cnf", "0", ..] => Some(Status::False),
            _ => None,
        }
    })
}

fn drain(mut r: impl Read + Send + 'static) -> mpsc::Receiver<String> {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = r.read_to_end(&mut buf);
        let _ = tx.send(String::from_utf8_lossy(&buf).into_owned());
    });
    rx
}

/// Kill the solver and anything it started.
fn kill_tree(child: &mut Child) {
    #[cfg(unix)]
    // SAFETY: signalling a process group we created; no memory is shared.
    unsafe {
        libc::kill(-(child.id() as i32), libc::SIGKILL);
    }
    let _ = child.kill();
    let _ = child.wait();
}

pub fn run_solver(spec: &SolverSpec, formula: &Path) -> SolverVerdict {
    let start = Instant::now();
    let mut cmd = Command::new(&spec.executable);
    cmd.args(spec.arguments(formula))
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    #[cfg(unix)]
    std::os::unix::process::CommandExt::process_group(&mut cmd, 0);
    let spawned = cmd.spawn();
    let mut child = match spawned {
        Ok(c) => c,
        Err(e) => {
            let msg = format!("cannot start {}: {e}", spec.executable.display());
            return SolverVerdict::new(Status::Error, start.elapsed(), msg);
        }
    };
    let out = drain(child.stdout.take().expect("piped stdout"));
    let err = drain(child.stderr.take().expect("piped stderr"));
    let deadline = start + spec.timeout;
    let exit = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Ok(status),
            Ok(None) if Instant::now() >= deadline => {
                kill_tree(&mut child);
                break Err(None);
            }
            Ok(None) => thread::sleep(Duration::from_millis(5)),
            Err(e) => break Err(Some(e)),
        }
    };
    let wall = start.elapsed();
    // A grandchild may still hold the pipes open; don't wait for it long.
    let grace = Duration::from_millis(500);
    let mut raw = out.recv_timeout(grace).unwrap_or_default();
    let stderr = err.recv_timeout(grace).unwrap_or_default();
    if !stderr.is_empty() {
        raw.push_str(&stderr);
    }
    let status = match exit {
        Err(None) => Status::Timeout,
        Err(Some(e)) => {
            raw.push_str(&format!("wait failed: {e}"));
            Status::Error
        }
        Ok(code) => match code.code() {
            Some(10) => Status::True,
            Some(20) => Status::False,
            c => match scan_output(&raw) {
                Some(s) => s,
                None if c == Some(0) => Status::Unknown,
                None => Status::Error,
            },
        },
    };
    SolverVerdict::new(status, wall, raw)
}

/// Write `enc` in the solver's format to a temporary file and run it.
pub fn solve_encoding(spec: &SolverSpec, enc: &EncodedInstance) -> io::Result<SolverVerdict> {
    let mut file = tempfile::Builder::new()
        .prefix("bddl-")
        .suffix(&format!(".{}", spec.format.extension()))
        .tempfile()?;
    io::Write::write_all(&mut file, spec.format.render(enc).as_bytes())?;
    io::Write::flush(&mut file)?;
    Ok(run_solver(spec, file.path()))
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read solver config {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("solver config line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Solvers known to this process, from a `key = value` file:
///
/// ```text
/// qcir = /opt/qfun/qfun-enum
/// qdimacs = /usr/bin/depqbf --no-dynamic-nenofex
/// timeout = 60
/// prefer = qdimacs
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolverConfig {
    pub qcir: Option<SolverSpec>,
    pub qdimacs: Option<SolverSpec>,
    pub timeout: Option<Duration>,
    pub prefer: Option<Format>,
}

impl SolverConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = SolverConfig::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| ConfigError::Syntax { line: k + 1, message };
            let (key, value) = line
                .split_once('=')
                .map(|(a, b)| (a.trim(), b.trim()))
                .ok_or_else(|| err(format!("expected key = value, got '{line}'")))?;
            match key {
                "qcir" | "qdimacs" => {
                    let format: Format = key.parse().map_err(err)?;
                    let spec = SolverSpec::from_command_line(value, format)
                        .ok_or_else(|| err(format!("empty command for {key}")))?;
                    match format {
                        Format::Qcir => cfg.qcir = Some(spec),
                        Format::Qdimacs => cfg.qdimacs = Some(spec),
                    }
                }
                "timeout" => {
                    let s: f64 = value.parse().map_err(|_| err(format!("bad timeout '{value}'")))?;
                    if !(s > 0.0 && s.is_finite()) {
                        return Err(err(format!("timeout must be positive, got '{value}'")));
                    }
                    cfg.timeout = Some(Duration::from_secs_f64(s));
                }
                "memory_limit" => {
                    let bytes: u64 = value.parse().map_err(|_| err(format!("bad memory limit '{value}'")))?;
                    for spec in [&mut cfg.qcir, &mut cfg.qdimacs].into_iter().flatten() {
                        spec.memory_limit = Some(bytes);
                    }
                }
                "prefer" => cfg.prefer = Some(value.parse().map_err(err)?),
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// The config file named by `path` or `BDDL_SOLVER_CONFIG`, then the
    /// per-format environment overrides.
    pub fn discover(path: Option<&Path>) -> Result<Self, ConfigError> {
        Self::discover_with(path, |k| std::env::var(k).ok())
    }

    pub fn discover_with(
        path: Option<&Path>,
        env: impl Fn(&str) -> Option<String>,
    ) -> Result<Self, ConfigError> {
        let file = path.map(Path::to_path_buf).or_else(|| env(ENV_CONFIG).map(PathBuf::from));
        let mut cfg = match file {
            Some(p) => Self::load(&p)?,
            None => SolverConfig::default(),
        };
        for (var, format) in [(ENV_QCIR, Format::Qcir), (ENV_QDIMACS, Format::Qdimacs)] {
            if let Some(spec) = env(var).and_then(|v| SolverSpec::from_command_line(&v, format)) {
                match format {
                    Format::Qcir => cfg.qcir = Some(spec),
                    Format::Qdimacs => cfg.qdimacs = Some(spec),
                }
            }
        }
        Ok(cfg)
    }

    /// A solver for `format`, or for the preferred/any format when `None`.
    pub fn pick(&self, format: Option<Format>) -> Option<SolverSpec> {
        let get = |f: Format| match f {
            Format::Qcir => self.qcir.clone(),
            Format::Qdimacs => self.qdimacs.clone(),
        };
        let spec = match format.or(self.prefer) {
            Some(f) => get(f),
            None => get(Format::Qcir).or_else(|| get(Format::Qdimacs)),
        }?;
        Some(match self.timeout {
            Some(t) => spec.with_timeout(t),
            None => spec,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub depth: u32,
    pub verdict: SolverVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    /// Smallest depth found true.
    pub critical_depth: Option<u32>,
    /// Largest depth found false, when no depth was true.
    pub refuted_through: Option<u32>,
}

impl ScanReport {
    pub fn summary(&self) -> String {
        match (self.critical_depth, self.refuted_through) {
            (Some(d), _) => format!("critical depth {d}"),
            (None, Some(d)) => format!("no winning strategy up to depth {d}"),
            (None, None) => "undecided".to_string(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error("depth range {dmin}..{dmax} is empty")]
    EmptyRange { dmin: u32, dmax: u32 },
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

/// Depths `dmin, dmin+2, ...` up to `dmax`, stopping at the first true.
/// `solve` turns one encoding into a verdict.
pub fn depth_scan_with(
    dom: &GameDomain,
    inst: &GameInstance,
    dmin: u32,
    dmax: u32,
    mut solve: impl FnMut(&EncodedInstance) -> SolverVerdict,
) -> Result<ScanReport, ScanError> {
    if dmin == 0 || dmin > dmax {
        return Err(ScanError::EmptyRange { dmin, dmax });
    }
    let mut report = ScanReport {
        rows: Vec::new(),
        critical_depth: None,
        refuted_through: None,
    };
    for depth in (dmin..=dmax).step_by(2) {
        let enc = encode(dom, &inst.with_depth(depth))?;
        let verdict = solve(&enc);
        let status = verdict.status;
        report.rows.push(ScanRow { depth, verdict });
        match status {
            Status::True => {
                report.critical_depth = Some(depth);
                break;
            }
            Status::False => report.refuted_through = Some(depth),
            _ => {}
        }
    }
    Ok(report)
}

pub fn depth_scan(
    dom: &GameDomain,
    inst: &GameInstance,
    dmin: u32,
    dmax: u32,
    spec: &SolverSpec,
) -> Result<ScanReport, ScanError> {
    depth_scan_with(dom, inst, dmin, dmax, |enc| {
        solve_encoding(spec, enc).unwrap_or_else(|e| {
            SolverVerdict::new(Status::Error, Duration::ZERO, format!("cannot write formula: {e}"))
        })
    })
}
