use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::args::Command;
use crate::CliError;

pub const TOOL: &str = concat!("reqsel ", env!("CARGO_PKG_VERSION"));

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the arguments (output locations blanked) and the bytes of every input.
pub fn config_hash(cmd: &Command) -> Result<String, CliError> {
    let mut blanked = cmd.clone();
    let mut inputs = Vec::new();
    match &mut blanked {
        Command::Identify(a) => {
            a.out_dir = PathBuf::new();
            inputs.push(a.preferences.clone());
        }
        Command::Resample(a) => {
            a.out_dir = PathBuf::new();
            inputs.push(a.preferences.clone());
        }
        Command::Influence(a) => {
            a.out = None;
            inputs.push(a.vdg.clone());
            inputs.extend(a.requirements.clone());
        }
        Command::Select(a) => {
            a.out = None;
            inputs.extend(problem_inputs(&a.problem));
        }
        Command::Sweep(a) => {
            a.out = None;
            inputs.extend(problem_inputs(&a.problem));
        }
        Command::Simulate(a) => a.out_dir = PathBuf::new(),
        Command::Bench(a) => a.out = None,
        Command::ExportLp(a) => {
            a.out = None;
            inputs.extend(problem_inputs(&a.problem));
        }
    }
    let mut h = Sha256::new();
    h.update(format!("{blanked:?}").as_bytes());
    for path in inputs {
        let bytes = fs::read(&path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        h.update(Sha256::digest(&bytes));
    }
    Ok(hex(&h.finalize()))
}

fn problem_inputs(p: &crate::args::ProblemArgs) -> Vec<PathBuf> {
    [&p.requirements, &p.constraints, &p.vdg, &p.influence]
        .into_iter()
        .flatten()
        .cloned()
        .collect()
}

/// Where rendered output goes and how its provenance line is written.
pub struct Sink {
    hash: String,
}

#[derive(Clone, Copy)]
pub enum Comment {
    Hash,
    Backslash,
}

impl Sink {
    pub fn new(hash: String) -> Self {
        Sink { hash }
    }

    /// Writes `body` to `path` behind a provenance line, or to stdout without one.
    pub fn emit(&self, path: Option<&Path>, comment: Comment, body: &[u8]) -> Result<(), CliError> {
        match path {
            Some(p) => self.write_file(p, comment, body),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(body).and_then(|_| out.flush()).map_err(CliError::io)
            }
        }
    }

    pub fn write_file(&self, path: &Path, comment: Comment, body: &[u8]) -> Result<(), CliError> {
        let marker = match comment {
            Comment::Hash => "#",
            Comment::Backslash => "\\",
        };
        let mut bytes = format!("{marker} {TOOL} config=sha256:{}\n", self.hash).into_bytes();
        bytes.extend_from_slice(body);
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| CliError::io_at(dir, e))?;
        }
        fs::write(path, bytes).map_err(|e| CliError::io_at(path, e))
    }
}

pub fn json_bytes(v: &serde_json::Value) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("serializable");
    s.push(b'\n');
    s
}
