//! Pluggable solver backends. The embedded simplex/branch-and-bound is the
//! default; external solvers can be registered under a name and selected at
//! run time.

use crate::{Model, Solution, SolutionPool, SolveError};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug, thiserror::Error)]
pub enum BackendError {
    #[error("no backend registered under {0:?}")]
    BackendUnavailable(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("backend failure: {0}")]
    Other(String),
}

pub trait SolverBackend: Send + Sync {
    fn name(&self) -> &str;
    fn solve_lp(&self, model: &Model) -> Result<Solution, BackendError>;
    fn solve_mip(&self, model: &Model) -> Result<(Solution, SolutionPool), BackendError>;
}

/// The in-repo solver exposed through the backend interface.
pub struct EmbeddedBackend;

impl SolverBackend for EmbeddedBackend {
    fn name(&self) -> &str {
        "embedded"
    }
    fn solve_lp(&self, model: &Model) -> Result<Solution, BackendError> {
        Ok(crate::solve_lp(model)?)
    }
    fn solve_mip(&self, model: &Model) -> Result<(Solution, SolutionPool), BackendError> {
        Ok(crate::solve_mip(model)?)
    }
}

fn registry() -> &'static Mutex<HashMap<String, Arc<dyn SolverBackend>>> {
    static REGISTRY: OnceLock<Mutex<HashMap<String, Arc<dyn SolverBackend>>>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut map: HashMap<String, Arc<dyn SolverBackend>> = HashMap::new();
        map.insert("embedded".into(), Arc::new(EmbeddedBackend));
        Mutex::new(map)
    })
}

pub fn register_backend(backend: Arc<dyn SolverBackend>) {
    registry().lock().unwrap().insert(backend.name().to_string(), backend);
}

pub fn backend(name: &str) -> Result<Arc<dyn SolverBackend>, BackendError> {
    registry()
        .lock()
        .unwrap()
        .get(name)
        .cloned()
        .ok_or_else(|| BackendError::BackendUnavailable(name.to_string()))
}
