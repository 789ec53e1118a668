use std::fs;

use rho_core::matrix::{catalog_representative, paley_i, sylvester_matrix};
use rho_core::{Budget, NormSpec, Rational, SignMatrix};

/// Matrix named on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixSpec {
    Sylvester(u32),
    Catalog(usize),
    Paley(usize),
    File(String),
}

impl MatrixSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| format!("matrix {s:?}: expected sylvester:N, catalog:N, paley:Q or file:PATH"))?;
        let num = |what: &str| -> Result<usize, String> {
            arg.parse().map_err(|_| format!("matrix {s:?}: {what} must be a nonnegative integer"))
        };
        match kind {
            "sylvester" => Ok(MatrixSpec::Sylvester(num("exponent")? as u32)),
            "catalog" => Ok(MatrixSpec::Catalog(num("order")?)),
            "paley" => Ok(MatrixSpec::Paley(num("prime")?)),
            "file" => Ok(MatrixSpec::File(arg.to_string())),
            _ => Err(format!("matrix {s:?}: unknown kind {kind:?}")),
        }
    }

    pub fn build(&self, budget: &Budget) -> rho_core::Result<SignMatrix> {
        match self {
            MatrixSpec::Sylvester(n) => sylvester_matrix(*n, budget),
            MatrixSpec::Catalog(order) => catalog_representative(*order),
            MatrixSpec::Paley(q) => paley_i(*q),
            MatrixSpec::File(path) => SignMatrix::parse_text(&fs::read_to_string(path)?),
        }
    }

    pub fn label(&self) -> String {
        match self {
            MatrixSpec::Sylvester(n) => format!("sylvester:{n}"),
            MatrixSpec::Catalog(o) => format!("catalog:{o}"),
            MatrixSpec::Paley(q) => format!("paley:{q}"),
            MatrixSpec::File(p) => format!("file:{p}"),
        }
    }
}

/// A norm in the most precise arithmetic it supports.
#[derive(Debug, Clone)]
pub enum AnyNorm {
    Exact(NormSpec<Rational>),
    Float(NormSpec<f64>),
}

impl AnyNorm {
    pub fn parse(spec: &str) -> rho_core::Result<Self> {
        if let Ok(n) = NormSpec::<Rational>::parse(spec) {
            if n.is_exact() {
                return Ok(AnyNorm::Exact(n));
            }
        }
        NormSpec::<f64>::parse(spec).map(AnyNorm::Float)
    }

    pub fn float(spec: &str) -> rho_core::Result<NormSpec<f64>> {
        NormSpec::<f64>::parse(spec)
    }
}

/// Evaluates `$body` with `$n` bound to the concrete `NormSpec<T>`.
macro_rules! with_norm {
    ($norm:expr, |$n:ident| $body:expr) => {
        match $norm {
            $crate::inputs::AnyNorm::Exact($n) => $body,
            $crate::inputs::AnyNorm::Float($n) => $body,
        }
    };
}
pub(crate) use with_norm;
