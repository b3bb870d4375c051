//! Output documents and their encodings.
//!
//! Every artifact embeds the full run configuration (the parsed command
//! line plus the subcommand name) so a file is reproducible from its own
//! header. JSON documents carry it as a `config` object; CSV tables carry
//! it as a leading `# config {...}` comment line that comment-aware CSV
//! readers skip.
//!
//! Floats in CSV cells are written as `{:.16e}` (17 significant digits),
//! which round-trips every finite `f64` exactly. JSON floats rely on
//! serde_json's shortest-round-trip encoding, which is lossless as well.

use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use fracwave::{ConvergenceTrace, VKSweep};

use crate::Failure;

/// Serialize the parsed flags of a subcommand into the embedded config
/// object, with the subcommand name added alongside the flags.
pub fn run_config<T: Serialize>(subcommand: &'static str, args: &T) -> Value {
    let mut v = serde_json::to_value(args).expect("flag structs serialize");
    v.as_object_mut()
        .expect("flag structs serialize to objects")
        .insert("subcommand".into(), subcommand.into());
    v
}

/// A computed wave with its provenance: what was asked for (`config`),
/// what came out (`profile` on the `n`-point uniform grid over [−π, π)),
/// and how the iteration went (`trace`, one entry per iteration).
///
/// This is the interchange format between `solve` and `spectrum --in`.
#[derive(Debug, Serialize, Deserialize)]
pub struct WaveDocument {
    pub config: Value,
    pub s: f64,
    pub omega: f64,
    pub n: usize,
    pub converged: bool,
    pub iterations: usize,
    pub final_res: f64,
    pub profile: Vec<f64>,
    pub trace: ConvergenceTrace,
}

pub fn to_pretty_json<T: Serialize>(doc: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(doc)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Failure::Compute(format!("cannot serialize output: {e}")))
}

/// Write `body` to the path, or to stdout when no path was given.
pub fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, body)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn push_config_line(out: &mut String, config: &Value) {
    out.push_str("# config ");
    out.push_str(&serde_json::to_string(config).expect("config serializes"));
    out.push('\n');
}

/// Two-column profile table: grid node, wave value.
pub fn profile_csv(config: &Value, nodes: &[f64], values: &[f64]) -> String {
    let mut out = String::new();
    push_config_line(&mut out, config);
    out.push_str("x,phi\n");
    for (x, v) in nodes.iter().zip(values) {
        out.push_str(&format!("{x:.16e},{v:.16e}\n"));
    }
    out
}

/// Sweep table: one row per frequency. The slope `q` is a forward
/// difference, so it is empty on the last row and wherever either endpoint
/// of the difference failed to converge; `converged` flags the point itself.
pub fn sweep_csv(config: &Value, sweep: &VKSweep) -> String {
    let mut out = String::new();
    push_config_line(&mut out, config);
    out.push_str("omega,mass,q,converged\n");
    for i in 0..sweep.omegas.len() {
        let q = match sweep.q_values.get(i) {
            Some(Some(q)) => format!("{q:.16e}"),
            _ => String::new(),
        };
        out.push_str(&format!(
            "{:.16e},{:.16e},{},{}\n",
            sweep.omegas[i], sweep.masses[i], q, sweep.convergence_flags[i]
        ));
    }
    out
}
