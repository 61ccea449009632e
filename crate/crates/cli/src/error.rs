use gridslam::env::EnvError;
use gridslam::floorplan::PlanError;
use gridslam::gridmap::GridError;
use gridslam::planner::PlannerError;
use gridslam::worldgen::WorldgenError;
use thiserror::Error;

use crate::Format;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Worldgen(#[from] WorldgenError),
    #[error(transparent)]
    Planner(#[from] PlannerError),
}

impl CliError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Env(EnvError::Config(_)) => "config",
            CliError::Io { .. } | CliError::Env(EnvError::Io(_)) => "io",
            CliError::Env(_) => "env",
            CliError::Plan(_) => "plan",
            CliError::Grid(_) => "grid",
            CliError::Worldgen(_) => "worldgen",
            CliError::Planner(_) => "usage",
        }
    }

    /// 2 for bad invocations and configs, 1 for everything that failed at run time.
    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            "usage" | "config" => 2,
            _ => 1,
        }
    }

    pub fn report(&self, format: Format) {
        match format {
            Format::Json => eprintln!("{}", serde_json::json!({ "error": self.kind(), "message": self.to_string() })),
            Format::Table => eprintln!("error[{}]: {self}", self.kind()),
        }
    }
}
