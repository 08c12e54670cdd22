//! Runner for the `zeropi` command: configuration, tasks and output files.

pub mod config;
pub mod output;
pub mod plot;
pub mod tasks;
pub mod validate;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

pub use config::{RunConfig, Task};
pub use tasks::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] zeropi_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for invalid input, 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use zeropi_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::Domain { .. } | E::Usage(_) | E::Resource { .. }) => 2,
            CliError::Core(
                E::NotConverged { .. } | E::SweepAborted { .. } | E::DuplicateLabel { .. } | E::Resonance { .. },
            ) => 3,
            CliError::Core(E::Internal(_)) | CliError::Io(_) => 1,
        }
    }
}

/// Outcome of [`run`].
#[derive(Debug)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub files: Vec<String>,
    pub lines: Vec<String>,
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

pub fn execute(task: Task, cfg: &RunConfig) -> Result<Report, CliError> {
    match task {
        Task::Spectrum => tasks::spectrum(cfg),
        Task::Sweep => tasks::sweep_task(cfg),
        Task::Dispersive => tasks::dispersive(cfg),
        Task::Coherence => tasks::coherence(cfg),
        Task::Purcell => tasks::purcell(cfg),
        Task::Validate => validate::validate(cfg),
    }
}

/// Validates, computes and writes every output plus `manifest.json`.
///
/// Nothing is written when the configuration is rejected.
pub fn run(task: Task, cfg: &RunConfig, out: Option<&Path>, workers: Option<usize>) -> Result<RunOutcome, CliError> {
    cfg.validate()?;
    let resolved = cfg.resolved()?;
    let workers = workers.unwrap_or(cfg.workers);
    let out_dir = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.output.directory.clone());

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    let threads = pool.current_num_threads();
    let started = Instant::now();
    log::info!("task {} with {threads} worker(s)", task.name());
    let result = pool.install(|| execute(task, &resolved));
    let total = started.elapsed().as_secs_f64();

    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let mut files = Vec::new();
    let (report, error) = match result {
        Ok(r) => (r, None),
        Err(e) => (Report::default(), Some(e)),
    };
    for (name, body) in &report.csv {
        if resolved.output.formats.contains(&config::Format::Csv) {
            output::write_atomic(&out_dir, name, body.as_bytes())?;
            files.push(name.clone());
        }
    }
    for (name, value) in &report.json {
        if resolved.output.formats.contains(&config::Format::Json) {
            let text = serde_json::to_string_pretty(value).expect("json serializes");
            output::write_atomic(&out_dir, name, text.as_bytes())?;
            files.push(name.clone());
        }
    }

    let exit_code = match (&error, &report.failure) {
        (Some(e), _) => e.exit_code(),
        (None, Some(_)) => 3,
        (None, None) => 0,
    };
    let status = match (&error, &report.failure) {
        (Some(e), _) => json!({"ok": false, "error": e.to_string()}),
        (None, Some(f)) => json!({"ok": false, "error": f}),
        (None, None) => json!({"ok": true}),
    };
    let stages: serde_json::Map<String, serde_json::Value> =
        report.stages.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let manifest = json!({
        "tool": "zeropi",
        "version": env!("CARGO_PKG_VERSION"),
        "core_version": zeropi_core::VERSION,
        "task": task.name(),
        "workers": threads,
        "config": resolved,
        "config_toml": resolved.to_toml(),
        "convergence": report.convergence,
        "wall_clock_s": {"stages": stages, "total": total},
        "warnings": report.warnings,
        "outputs": files,
        "status": status,
    });
    output::write_atomic(&out_dir, "manifest.json", serde_json::to_string_pretty(&manifest).expect("json").as_bytes())?;
    files.push("manifest.json".into());

    let mut lines = report.lines;
    if let Some(e) = &error {
        lines.push(format!("error: {e}"));
    }
    Ok(RunOutcome { out_dir, files, lines, warnings: report.warnings, exit_code })
}
