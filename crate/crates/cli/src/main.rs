//! `diaglab`: batch front end for the diaglab library.
//!
//! Results go to stdout as JSON (or text with `--pretty`), diagnostics to
//! stderr. Exit status: 0 success, 1 domain error (a JSON error object is
//! still printed), 2 usage error.

mod args;
mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Why a command did not produce a result.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain { kind: String, message: String },
}

impl From<diaglab_core::Error> for Failure {
    fn from(e: diaglab_core::Error) -> Self {
        Failure::Domain { kind: e.kind().to_string(), message: e.to_string() }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                diaglab_core::Error::from(e).into()
            }
        }
    )*};
}

domain_from!(
    diaglab_core::expr::ExprError,
    diaglab_core::series::SeriesError,
    diaglab_core::hypergeom::HypergeomError,
    diaglab_core::odelocal::OdeError,
    diaglab_core::grade::GradeError
);

/// A command's result: machine form and human form.
pub struct Output {
    pub json: serde_json::Value,
    pub text: Option<String>,
    /// Printed normally but exits 1: a check ran and did not pass.
    pub failed: bool,
}

impl Output {
    pub fn json(json: serde_json::Value) -> Self {
        Output { json, text: None, failed: false }
    }

    pub fn with_text(json: serde_json::Value, text: String) -> Self {
        Output { json, text: Some(text), failed: false }
    }

    pub fn failed_if(mut self, failed: bool) -> Self {
        self.failed = failed;
        self
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("DIAGLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Failure::Usage(format!("DIAGLAB_THREADS must be a positive integer, got {raw:?}")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    let result = configure_threads().and_then(|()| commands::run(cli.command));
    let mut out = std::io::stdout().lock();
    match result {
        Ok(o) => {
            let failed = o.failed;
            let body = match (pretty, o.text) {
                (true, Some(t)) => t,
                (true, None) => serde_json::to_string_pretty(&o.json).expect("serializable"),
                (false, _) => serde_json::to_string(&o.json).expect("serializable"),
            };
            let _ = writeln!(out, "{body}");
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("diaglab: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain { kind, message }) => {
            eprintln!("diaglab: {message}");
            let obj = serde_json::json!({ "error": { "kind": kind, "message": message } });
            let _ = writeln!(out, "{obj}");
            ExitCode::from(1)
        }
    }
}
