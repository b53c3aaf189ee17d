use std::io::Read;
use std::path::Path;

use diaglab_core::catalog;
use diaglab_core::expr::{parse_expr, RationalExpr, TruncatedMultiSeries};
use diaglab_core::hypergeom::{hg_operator, HypergeomParams};
use diaglab_core::odelocal::DiffOp;
use diaglab_core::UniSeries;

use crate::args::{OpSource, SeriesSource};
use crate::Failure;

pub fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {}: {e}", path.display())))
}

fn invalid(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Domain { kind: "InvalidInput".into(), message: format!("{}: {e}", path.display()) }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read_text(path)?).map_err(|e| invalid(path, e))
}

pub fn series_file(path: &Path) -> Result<UniSeries, Failure> {
    read_json(path)
}

pub fn multi_file(path: &Path) -> Result<TruncatedMultiSeries, Failure> {
    read_json(path)
}

pub fn series(src: &SeriesSource, order: Option<usize>) -> Result<UniSeries, Failure> {
    match (&src.series_file, &src.catalog) {
        (Some(p), _) => {
            let s = series_file(p)?;
            Ok(match order {
                Some(n) if n < s.trunc() => s.truncate(n),
                _ => s,
            })
        }
        (None, Some(name)) => {
            let e = catalog::entry(name).ok_or_else(|| Failure::Usage(format!("no catalog entry named {name:?}")))?;
            Ok(e.series(order.unwrap_or(e.window)))
        }
        (None, None) => Err(Failure::Usage("give --series-file or --catalog".into())),
    }
}

pub fn params(text: &str) -> Result<HypergeomParams, Failure> {
    Ok(text.parse::<HypergeomParams>()?)
}

pub fn operator(src: &OpSource) -> Result<DiffOp, Failure> {
    match (&src.op_file, &src.params) {
        (Some(p), _) => read_json(p),
        (None, Some(text)) => Ok(hg_operator(&params(text)?)),
        (None, None) => Err(Failure::Usage("give --op-file or --params".into())),
    }
}

/// Parses with the given arity, or the smallest arity the text needs.
pub fn expression(text: &str, arity: Option<usize>) -> Result<(RationalExpr, usize), Failure> {
    match arity {
        Some(a) => Ok((parse_expr(text, a)?, a)),
        None => {
            let e = parse_expr(text, usize::MAX)?;
            let a = e.min_arity();
            Ok((e, a))
        }
    }
}
