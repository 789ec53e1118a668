//! Symmetric sequence norms and their λ-functions.
//!
//! Every norm here is symmetric with symmetric constant 1: invariant under
//! coordinate permutations and sign changes. The Marcinkiewicz-type norm
//! `‖x‖ = max_k λ_k · (sum of the k largest |x_i|) / k` reproduces a
//! prescribed concave non-decreasing λ exactly on indicator vectors.

use std::fmt;
use std::path::Path;

use crate::scalar::integral_exponent;
use crate::{Error, Result, Scalar};

/// `(√log₂5 / 5) · (n + 4) / √log₂(n + 4)`; concave, non-decreasing, `f(1) = 1`.
pub fn example39_lambda(n: u64) -> f64 {
    let t = n as f64 + 4.0;
    5f64.log2().sqrt() / 5.0 * t / t.log2().sqrt()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaViolation {
    Empty,
    /// λ₁ ≠ 1.
    Normalization { found: String },
    /// `λ_{index+1} < λ_index`.
    Monotonicity { index: usize },
    /// `λ_{index+2} − λ_{index+1} > λ_{index+1} − λ_index`.
    Concavity { index: usize },
    /// `λ₂ − λ₁ > λ₁`, i.e. concavity fails once `λ₀ = 0` is prepended.
    OriginSlope,
}

impl fmt::Display for LambdaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaViolation::Empty => write!(f, "sequence is empty"),
            LambdaViolation::Normalization { found } => write!(f, "lambda_1 = {found}, expected 1"),
            LambdaViolation::Monotonicity { index } => {
                write!(f, "decreases at k={index}")
            }
            LambdaViolation::Concavity { index } => {
                write!(f, "not concave at k={index}: increments grow")
            }
            LambdaViolation::OriginSlope => write!(f, "lambda_2 - lambda_1 exceeds lambda_1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LambdaVerdict {
    pub violations: Vec<LambdaViolation>,
}

impl LambdaVerdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Reports the first offending index of each violated invariant.
pub fn check_lambda_seq<T: Scalar>(values: &[T]) -> LambdaVerdict {
    let mut violations = Vec::new();
    let Some(first) = values.first() else {
        violations.push(LambdaViolation::Empty);
        return LambdaVerdict { violations };
    };
    if !T::approx_eq(first, &T::one()) {
        violations.push(LambdaViolation::Normalization {
            found: first.to_string(),
        });
    }
    if let Some(k) = values.windows(2).position(|w| !T::approx_le(&w[0], &w[1])) {
        violations.push(LambdaViolation::Monotonicity { index: k + 1 });
    }
    if values.len() >= 2 && !T::approx_le(&(values[1].clone() - first.clone()), first) {
        violations.push(LambdaViolation::OriginSlope);
    }
    let concave_fail = values.windows(3).position(|w| {
        let d1 = w[1].clone() - w[0].clone();
        let d2 = w[2].clone() - w[1].clone();
        !T::approx_le(&d2, &d1)
    });
    if let Some(k) = concave_fail {
        violations.push(LambdaViolation::Concavity { index: k + 1 });
    }
    LambdaVerdict { violations }
}

/// A validated finite λ prefix `λ₁..λ_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSeq<T> {
    values: Vec<T>,
    label: String,
}

impl<T: Scalar> LambdaSeq<T> {
    pub fn new(values: Vec<T>, label: impl Into<String>) -> Result<Self> {
        let verdict = check_lambda_seq(&values);
        if !verdict.is_valid() {
            let msgs: Vec<String> = verdict.violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::domain(format!("invalid lambda sequence: {}", msgs.join("; "))));
        }
        Ok(LambdaSeq {
            values,
            label: label.into(),
        })
    }

    /// `λ_k = f(k)` for `k = 1..=len`.
    pub fn from_fn(len: usize, label: impl Into<String>, f: impl Fn(usize) -> T) -> Result<Self> {
        Self::new((1..=len).map(f).collect(), label)
    }

    /// One number per line (`p/q`, integer or decimal); blank lines and `#` comments skipped.
    pub fn parse(text: &str, label: impl Into<String>) -> Result<Self> {
        let mut values = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            values.push(T::parse_number(line).ok_or_else(|| Error::Parse {
                line: no + 1,
                msg: format!("not a number: {line:?}"),
            })?);
        }
        Self::new(values, label)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `λ_k`, 1-based.
    pub fn get(&self, k: usize) -> Result<T> {
        k.checked_sub(1)
            .and_then(|i| self.values.get(i))
            .cloned()
            .ok_or_else(|| lambda_range_error(k, self.values.len()))
    }
}

fn lambda_range_error(k: usize, n: usize) -> Error {
    Error::domain(format!(
        "marcinkiewicz norm needs lambda_{k} but the sequence stops at N={n}"
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec<T> {
    /// `ℓ_p`, `1 ≤ p < ∞`.
    Lp(f64),
    /// `max |x_i|`, standing in for `c₀`.
    Sup,
    Marcinkiewicz(LambdaSeq<T>),
    /// Marcinkiewicz norm generated by [`example39_lambda`].
    Example39,
}

impl<T: Scalar> NormSpec<T> {
    pub fn l1() -> Self {
        NormSpec::Lp(1.0)
    }

    pub fn lp(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(NormSpec::Lp(p))
        } else {
            Err(Error::domain(format!(
                "lp needs 1 <= p < inf (use \"sup\" for p = inf); got {p}"
            )))
        }
    }

    /// Parses `l1`, `lp:<p>`, `sup`, `marcinkiewicz:<path>` or `example39`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        match spec {
            "l1" => return Ok(Self::l1()),
            "sup" => return Ok(NormSpec::Sup),
            "example39" => return Ok(NormSpec::Example39),
            _ => {}
        }
        if let Some(p) = spec.strip_prefix("lp:") {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::domain(format!("bad exponent in norm {spec:?}")))?;
            return Self::lp(p);
        }
        if let Some(path) = spec.strip_prefix("marcinkiewicz:") {
            let text = std::fs::read_to_string(Path::new(path))?;
            return Ok(NormSpec::Marcinkiewicz(LambdaSeq::parse(&text, path)?));
        }
        Err(Error::domain(format!(
            "unknown norm {spec:?} (expected l1, lp:<p>, sup, marcinkiewicz:<file>, example39)"
        )))
    }

    /// Every implemented norm is symmetric with constant 1.
    pub fn is_symmetric(&self) -> bool {
        true
    }

    /// Largest admissible vector length, if bounded.
    pub fn max_dim(&self) -> Option<usize> {
        match self {
            NormSpec::Marcinkiewicz(l) => Some(l.len()),
            _ => None,
        }
    }

    /// Whether results in `T` are exact for this norm (integer input).
    pub fn is_exact(&self) -> bool {
        T::EXACT
            && match self {
                NormSpec::Lp(p) => *p == 1.0,
                NormSpec::Sup | NormSpec::Marcinkiewicz(_) => true,
                NormSpec::Example39 => false,
            }
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if dim == 0 {
            return Err(Error::domain("norm of an empty vector"));
        }
        match self.max_dim() {
            Some(n) if dim > n => Err(lambda_range_error(dim, n)),
            _ => Ok(()),
        }
    }

    /// `λ(n) = ‖φ₁ + … + φ_n‖`.
    pub fn lambda(&self, n: usize) -> Result<T> {
        if n == 0 {
            return Err(Error::domain("lambda(n) needs n >= 1"));
        }
        match self {
            NormSpec::Lp(p) => T::from_int(n as i128)
                .root_real(*p)
                .ok_or_else(|| Error::Inexact(format!("lambda({n}) = {n}^(1/{p})"))),
            NormSpec::Sup => Ok(T::one()),
            NormSpec::Marcinkiewicz(l) => l.get(n),
            NormSpec::Example39 => T::from_real(example39_lambda(n as u64))
                .ok_or_else(|| Error::Inexact("the example39 lambda".into())),
        }
    }

    pub fn eval(&self, x: &[T]) -> Result<T> {
        self.check_dim(x.len())?;
        let abs: Vec<T> = x.iter().map(|v| v.abs()).collect();
        match self {
            NormSpec::Lp(p) if *p == 1.0 => Ok(abs.into_iter().fold(T::zero(), |a, b| a + b)),
            NormSpec::Lp(p) => {
                let mut sum = T::zero();
                for a in &abs {
                    sum = sum + a.pow_real(*p).ok_or_else(|| inexact_lp(*p))?;
                }
                sum.root_real(*p).ok_or_else(|| inexact_lp(*p))
            }
            NormSpec::Sup => Ok(max_of(abs)),
            NormSpec::Marcinkiewicz(_) | NormSpec::Example39 => {
                let mut sorted = abs;
                sorted.sort_by(|a, b| b.partial_cmp(a).expect("norm inputs must be comparable"));
                let lambda = self.lambda_prefix(sorted.len())?;
                let mut best = T::zero();
                let mut running = T::zero();
                for (k, v) in sorted.into_iter().enumerate() {
                    running = running + v;
                    let cand = lambda[k].clone() * (running.clone() / T::from_int(k as i128 + 1));
                    if cand > best {
                        best = cand;
                    }
                }
                Ok(best)
            }
        }
    }

    fn lambda_prefix(&self, dim: usize) -> Result<Vec<T>> {
        match self {
            NormSpec::Marcinkiewicz(l) => Ok(l.values()[..dim].to_vec()),
            _ => (1..=dim).map(|k| self.lambda(k)).collect(),
        }
    }

    /// Reusable evaluator for integer vectors of length `dim`.
    pub fn evaluator(&self, dim: usize) -> Result<NormEvaluator<'_, T>> {
        self.check_dim(dim)?;
        let lambda = match self {
            NormSpec::Marcinkiewicz(_) | NormSpec::Example39 => self.lambda_prefix(dim)?,
            _ => Vec::new(),
        };
        let lp_exponent = match self {
            NormSpec::Lp(p) if *p != 1.0 => integral_exponent(*p),
            _ => None,
        };
        Ok(NormEvaluator {
            spec: self,
            dim,
            lambda,
            lp_exponent,
            scratch: Vec::with_capacity(dim),
        })
    }
}

fn inexact_lp(p: f64) -> Error {
    Error::Inexact(format!("an l{p} norm"))
}

fn max_of<T: Scalar>(values: impl IntoIterator<Item = T>) -> T {
    values
        .into_iter()
        .fold(T::zero(), |a, b| if b > a { b } else { a })
}

impl<T: Scalar> fmt::Display for NormSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Lp(p) if *p == 1.0 => write!(f, "l1"),
            NormSpec::Lp(p) => write!(f, "lp:{p}"),
            NormSpec::Sup => write!(f, "sup"),
            NormSpec::Marcinkiewicz(l) => write!(f, "marcinkiewicz:{}", l.label()),
            NormSpec::Example39 => write!(f, "example39"),
        }
    }
}

/// Norm evaluation on integer vectors with integer-exact accumulation.
pub struct NormEvaluator<'a, T> {
    spec: &'a NormSpec<T>,
    dim: usize,
    lambda: Vec<T>,
    lp_exponent: Option<u32>,
    scratch: Vec<i64>,
}

impl<T: Scalar> NormEvaluator<'_, T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval_int(&mut self, x: &[i64]) -> Result<T> {
        if x.len() != self.dim {
            return Err(Error::domain(format!(
                "vector has length {}, evaluator expects {}",
                x.len(),
                self.dim
            )));
        }
        match self.spec {
            NormSpec::Lp(p) if *p == 1.0 => {
                Ok(T::from_int(x.iter().map(|&v| i128::from(v).abs()).sum()))
            }
            NormSpec::Sup => Ok(T::from_int(
                x.iter().map(|&v| i128::from(v).abs()).max().unwrap_or(0),
            )),
            NormSpec::Lp(p) => {
                let exact_sum = self.lp_exponent.and_then(|e| {
                    x.iter().try_fold(0i128, |acc, &v| {
                        acc.checked_add(i128::from(v).abs().checked_pow(e)?)
                    })
                });
                let sum = match exact_sum {
                    Some(s) => T::from_int(s),
                    None => {
                        let mut s = T::zero();
                        for &v in x {
                            let a = T::from_int(i128::from(v).abs());
                            s = s + a.pow_real(*p).ok_or_else(|| inexact_lp(*p))?;
                        }
                        s
                    }
                };
                sum.root_real(*p).ok_or_else(|| inexact_lp(*p))
            }
            NormSpec::Marcinkiewicz(_) | NormSpec::Example39 => {
                self.scratch.clear();
                self.scratch.extend(x.iter().map(|v| v.abs()));
                self.scratch.sort_unstable_by(|a, b| b.cmp(a));
                let mut best = T::zero();
                let mut running = 0i128;
                for (k, &v) in self.scratch.iter().enumerate() {
                    if v == 0 {
                        // weights λ_k / k are non-increasing, so the tail cannot win
                        break;
                    }
                    running += i128::from(v);
                    let mean = T::from_int(running) / T::from_int(k as i128 + 1);
                    let cand = self.lambda[k].clone() * mean;
                    if cand > best {
                        best = cand;
                    }
                }
                Ok(best)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i128) -> Rational {
        Rational::from_int(n)
    }

    fn halving() -> LambdaSeq<Rational> {
        // 1, 3/2, 7/4, 15/8, ...
        LambdaSeq::from_fn(12, "halving", |k| {
            Rational::new((1i128 << k) - 1, 1i128 << (k - 1))
        })
        .unwrap()
    }

    #[test]
    fn norm_eval_examples() {
        let x: Vec<Rational> = [3, 1, 1, -1].map(r).to_vec();
        assert_eq!(NormSpec::l1().eval(&x).unwrap(), r(6));
        let y: Vec<Rational> = [4, 0, 0, 0].map(r).to_vec();
        assert_eq!(NormSpec::Sup.eval(&y).unwrap(), r(4));
        let linear = LambdaSeq::from_fn(9, "linear", |k| r(k as i128)).unwrap();
        let spec = NormSpec::Marcinkiewicz(linear);
        for n in 1..=9 {
            assert_eq!(spec.eval(&vec![r(1); n]).unwrap(), r(n as i128));
        }
    }

    #[test]
    fn norm_eval_errors() {
        assert!(NormSpec::<Rational>::l1().eval(&[]).is_err());
        let spec = NormSpec::Marcinkiewicz(halving());
        let err = spec.eval(&vec![r(1); 13]).unwrap_err();
        assert!(err.to_string().contains("N=12"), "{err}");
        assert!(NormSpec::<f64>::lp(0.5).is_err());
        assert!(NormSpec::<f64>::lp(f64::INFINITY).is_err());
        assert!(matches!(
            NormSpec::<Rational>::lp(2.0).unwrap().eval(&[r(1), r(1)]),
            Err(Error::Inexact(_))
        ));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(NormSpec::<f64>::lp(2.0).unwrap().lambda(4).unwrap(), 2.0);
        assert_eq!(NormSpec::<Rational>::lp(2.0).unwrap().lambda(4).unwrap(), r(2));
        assert_eq!(NormSpec::<f64>::Sup.lambda(100).unwrap(), 1.0);
        let spec = NormSpec::Marcinkiewicz(halving());
        assert_eq!(spec.lambda(3).unwrap(), Rational::new(7, 4));
        assert_eq!(spec.eval(&vec![r(1); 3]).unwrap(), Rational::new(7, 4));
    }

    #[test]
    fn example39_values() {
        assert!((example39_lambda(1) - 1.0).abs() < 1e-15);
        let l5 = 5f64.log2().sqrt();
        assert!((example39_lambda(12) - 1.6 * l5).abs() < 1e-13);
        assert!((example39_lambda(12) - 2.43806).abs() < 1e-5);
        let two = l5 / 5.0 * 6.0 / 6f64.log2().sqrt();
        assert!((example39_lambda(2) - two).abs() < 1e-15);
        assert!((example39_lambda(2) - 1.13731).abs() < 1e-5);
    }

    #[test]
    fn lambda_checks() {
        let linear: Vec<Rational> = (1..=10).map(r).collect();
        assert!(check_lambda_seq(&linear).is_valid());
        let square: Vec<Rational> = (1..=10).map(|k| r(k * k)).collect();
        let verdict = check_lambda_seq(&square);
        assert!(verdict
            .violations
            .contains(&LambdaViolation::Concavity { index: 1 }));
        let ex39: Vec<f64> = (1..=1000).map(example39_lambda).collect();
        assert!(check_lambda_seq(&ex39).is_valid());
        let bad = [r(2), r(1)];
        let v = check_lambda_seq(&bad).violations;
        assert!(v.contains(&LambdaViolation::Monotonicity { index: 1 }));
        assert!(matches!(v[0], LambdaViolation::Normalization { .. }));
        assert_eq!(
            check_lambda_seq::<Rational>(&[]).violations,
            vec![LambdaViolation::Empty]
        );
        let steep = [r(1), r(3), r(5)];
        assert_eq!(
            check_lambda_seq(&steep).violations,
            vec![LambdaViolation::OriginSlope]
        );
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(NormSpec::<f64>::parse("l1").unwrap(), NormSpec::Lp(1.0));
        assert_eq!(NormSpec::<f64>::parse("lp:2.5").unwrap(), NormSpec::Lp(2.5));
        assert_eq!(NormSpec::<f64>::parse("sup").unwrap(), NormSpec::Sup);
        assert_eq!(
            NormSpec::<f64>::parse("example39").unwrap(),
            NormSpec::Example39
        );
        assert!(NormSpec::<f64>::parse("l7").is_err());
        assert!(NormSpec::<f64>::parse("lp:x").is_err());
        assert!(NormSpec::<f64>::parse("marcinkiewicz:/nonexistent/lambda.txt").is_err());
        assert_eq!(NormSpec::<f64>::parse("lp:2.5").unwrap().to_string(), "lp:2.5");
    }

    #[test]
    fn lambda_file_parse() {
        let seq = LambdaSeq::<Rational>::parse("# lambda\n1\n3/2\n1.75\n\n", "t").unwrap();
        assert_eq!(seq.values(), &[r(1), Rational::new(3, 2), Rational::new(7, 4)]);
        assert!(LambdaSeq::<Rational>::parse("1\nfoo\n", "t").is_err());
        assert!(LambdaSeq::<Rational>::parse("1\n4\n9\n", "t").is_err());
    }

    #[test]
    fn evaluator_matches_generic_eval() {
        let specs: Vec<NormSpec<f64>> = vec![
            NormSpec::l1(),
            NormSpec::lp(1.5).unwrap(),
            NormSpec::lp(3.0).unwrap(),
            NormSpec::Sup,
            NormSpec::Example39,
            NormSpec::Marcinkiewicz(
                LambdaSeq::from_fn(8, "sqrt", |k| (k as f64).sqrt()).unwrap(),
            ),
        ];
        let x = [3i64, -1, 0, 7, -7, 2, 2, 0];
        let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        for spec in &specs {
            let mut ev = spec.evaluator(8).unwrap();
            let a = ev.eval_int(&x).unwrap();
            let b = spec.eval(&xf).unwrap();
            assert!((a - b).abs() <= 1e-12 * b, "{spec}: {a} vs {b}");
        }
    }

    #[test]
    fn exact_lp_root_on_integer_vectors() {
        let spec = NormSpec::<f64>::lp(3.0).unwrap();
        let mut ev = spec.evaluator(4).unwrap();
        assert_eq!(ev.eval_int(&[16, 0, 0, 0]).unwrap(), 16.0);
        let spec = NormSpec::<Rational>::lp(2.0).unwrap();
        let mut ev = spec.evaluator(4).unwrap();
        assert_eq!(ev.eval_int(&[2, 2, 2, 2]).unwrap(), r(4));
    }
}
