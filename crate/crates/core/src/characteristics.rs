//! Prefix column sums and ρ-profiles.
//!
//! For a matrix with rows `a_k` the profile is `ρ(m) = ‖a_1 + … + a_m‖`,
//! `m = 1..=order`. Prefix vectors of sign matrices are integer, so they are
//! accumulated exactly and only the final norm is taken in the scalar type.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::matrix::sylvester_sign_0;
use crate::report::ReportValue;
use crate::{Budget, Error, NormSpec, Result, Scalar, SignMatrix};

/// `α_i(m) = Σ_{k≤m} s_ki` for `S^(n)`, stored column by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaTable {
    n: u32,
    order: usize,
    values: Vec<i32>,
}

impl AlphaTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `α_i(m)`, both 1-based.
    pub fn get(&self, i: usize, m: usize) -> Result<i32> {
        Ok(self.column(i)?[m_index(m, self.order)?])
    }

    /// `(α_i(1), …, α_i(2^n))`.
    pub fn column(&self, i: usize) -> Result<&[i32]> {
        let c = m_index(i, self.order)?;
        Ok(&self.values[c * self.order..(c + 1) * self.order])
    }

    pub fn column_max_abs(&self, i: usize) -> Result<i32> {
        Ok(self.column(i)?.iter().map(|v| v.abs()).max().unwrap_or(0))
    }
}

fn m_index(m: usize, order: usize) -> Result<usize> {
    if (1..=order).contains(&m) {
        Ok(m - 1)
    } else {
        Err(Error::IndexOutOfRange {
            what: "prefix/column",
            index: m,
            max: order,
        })
    }
}

fn sylvester_order(n: u32, limit: u32) -> Result<usize> {
    if n > limit {
        return Err(Error::domain(format!(
            "Sylvester exponent {n} exceeds the supported maximum {limit}"
        )));
    }
    Ok(1usize << n)
}

pub fn alpha_table(n: u32, budget: &Budget) -> Result<AlphaTable> {
    let order = sylvester_order(n, 30)?;
    budget.check_entries("alpha table", order as u128 * order as u128)?;
    let mut values = vec![0i32; order * order];
    for i in 0..order {
        let col = &mut values[i * order..(i + 1) * order];
        let mut acc = 0i32;
        for (k, slot) in col.iter_mut().enumerate() {
            acc += i32::from(sylvester_sign_0(k, i));
            *slot = acc;
        }
    }
    Ok(AlphaTable { n, order, values })
}

/// Exponent `f(i)` with `max_m |α_i(m)| = 2^f(i)`: `f(1) = n`, `f(i) = 0` for
/// even `i`, otherwise the position of the lowest set bit of `i − 1`.
pub fn f_exponent(n: u32, i: usize) -> Result<u32> {
    let order = sylvester_order(n, 62)?;
    m_index(i, order)?;
    Ok(if i == 1 {
        n
    } else if i % 2 == 0 {
        0
    } else {
        (i - 1).trailing_zeros()
    })
}

pub fn max_abs_alpha(n: u32, i: usize) -> Result<u64> {
    Ok(1u64 << f_exponent(n, i)?)
}

/// Number of columns `i` of `S^(n)` with `f(i) = j`, keyed by `j`.
pub fn f_distribution(n: u32) -> Result<BTreeMap<u32, u64>> {
    let order = sylvester_order(n, 30)?;
    let mut hist = BTreeMap::new();
    for i in 1..=order {
        *hist.entry(f_exponent(n, i)?).or_insert(0) += 1;
    }
    Ok(hist)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhoProfile<T> {
    /// `ρ(1), …, ρ(order)`.
    pub values: Vec<T>,
    pub rho_max: T,
    /// Every `m` (1-based, ascending) attaining `rho_max`.
    pub argmax: Vec<usize>,
    pub norm: String,
    pub source: String,
}

fn ties<T: Scalar>(a: &T, b: &T) -> bool {
    if T::EXACT {
        a == b
    } else {
        let (x, y) = (a.to_f64_lossy(), b.to_f64_lossy());
        (x - y).abs() <= 1e-12 * x.abs().max(y.abs())
    }
}

impl<T: Scalar> RhoProfile<T> {
    pub fn from_values(values: Vec<T>, norm: impl Into<String>, source: impl Into<String>) -> Self {
        let rho_max = values
            .iter()
            .cloned()
            .fold(T::zero(), |a, b| if b > a { b } else { a });
        let argmax = values
            .iter()
            .enumerate()
            .filter(|(_, v)| ties(*v, &rho_max))
            .map(|(m, _)| m + 1)
            .collect();
        RhoProfile {
            values,
            rho_max,
            argmax,
            norm: norm.into(),
            source: source.into(),
        }
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// `ρ(m)`, 1-based.
    pub fn at(&self, m: usize) -> Result<&T> {
        Ok(&self.values[m_index(m, self.values.len())?])
    }

    pub fn to_report(&self) -> ProfileReport {
        ProfileReport {
            source: self.source.clone(),
            norm: self.norm.clone(),
            values: self.values.iter().map(Scalar::to_report).collect(),
            rho_max: self.rho_max.to_report(),
            argmax: self.argmax.clone(),
            tolerance: tolerance_tag::<T>(),
        }
    }
}

pub(crate) fn tolerance_tag<T: Scalar>() -> String {
    if T::EXACT {
        "exact".into()
    } else {
        "float:rel 1e-9".into()
    }
}

/// JSON shape of a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub source: String,
    pub norm: String,
    pub values: Vec<ReportValue>,
    pub rho_max: ReportValue,
    pub argmax: Vec<usize>,
    pub tolerance: String,
}

fn profile_from_rows<T: Scalar>(
    order: usize,
    norm: &NormSpec<T>,
    source: String,
    mut add_row: impl FnMut(usize, &mut [i64]),
) -> Result<RhoProfile<T>> {
    let mut ev = norm.evaluator(order)?;
    let mut prefix = vec![0i64; order];
    let mut values = Vec::with_capacity(order);
    for m in 0..order {
        add_row(m, &mut prefix);
        values.push(ev.eval_int(&prefix)?);
    }
    Ok(RhoProfile::from_values(values, norm.to_string(), source))
}

/// Profile of an arbitrary sign matrix (Hadamard or not).
pub fn rho_profile<T: Scalar>(m: &SignMatrix, norm: &NormSpec<T>) -> Result<RhoProfile<T>> {
    profile_from_rows(m.order(), norm, format!("matrix:{}", m.order()), |k, acc| {
        m.add_row_into_0(k, 1, acc)
    })
}

/// Profile of `S^(n)` generated row by row, without materializing the matrix.
pub fn sylvester_rho_profile<T: Scalar>(n: u32, norm: &NormSpec<T>) -> Result<RhoProfile<T>> {
    let order = sylvester_order(n, 24)?;
    profile_from_rows(order, norm, format!("sylvester:{n}"), |k, acc| {
        for (i, a) in acc.iter_mut().enumerate() {
            *a += i64::from(sylvester_sign_0(k, i));
        }
    })
}

/// Profile of an arbitrary square integer matrix, `ρ(T) = max_m ‖Σ_{k≤m} t_k‖`.
pub fn rho_profile_int<T: Scalar>(rows: &[Vec<i64>], norm: &NormSpec<T>) -> Result<RhoProfile<T>> {
    let order = rows.len();
    if rows.iter().any(|r| r.len() != order) {
        return Err(Error::domain("matrix must be square"));
    }
    profile_from_rows(order, norm, format!("integer:{order}"), |k, acc| {
        for (a, v) in acc.iter_mut().zip(&rows[k]) {
            *a += v;
        }
    })
}

/// `ρ^(n)` in `ℓ₁` with both attainment points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub value: i128,
    pub m: i128,
    pub m_prime: i128,
}

/// `ρ^(n) = ((3n+7)·2^n + 2(−1)^n)/9`, `m_n = (2^(n+1) + (−1)^n)/3`,
/// `m_n' = (5·2^(n−1) + (−1)^(n−1))/3`.
pub fn rho_l1_closed_form(n: u32) -> Result<ClosedForm> {
    if !(1..=100).contains(&n) {
        return Err(Error::domain(format!(
            "closed form is evaluated for 1 <= n <= 100; got {n}"
        )));
    }
    let sign: i128 = if n % 2 == 0 { 1 } else { -1 };
    let pow = 1i128 << n;
    let exact_div = |num: i128, den: i128| {
        if num % den == 0 {
            Ok(num / den)
        } else {
            Err(Error::domain(format!("{num}/{den} is not integral")))
        }
    };
    Ok(ClosedForm {
        value: exact_div((3 * i128::from(n) + 7) * pow + 2 * sign, 9)?,
        m: exact_div(2 * pow + sign, 3)?,
        m_prime: exact_div(5 * (pow / 2) - sign, 3)?,
    })
}

/// `ρ̂(m) = ‖Σ_i α_i(m) x_i‖` for caller-supplied unit-ball vectors `x_i`.
pub fn hat_rho<T: Scalar>(
    vectors: &[Vec<T>],
    m: &SignMatrix,
    norm: &NormSpec<T>,
) -> Result<RhoProfile<T>> {
    let order = m.order();
    if vectors.len() != order {
        return Err(Error::domain(format!(
            "{} vectors supplied for a matrix of order {order}",
            vectors.len()
        )));
    }
    let dim = vectors[0].len();
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::domain("vectors must share one dimension"));
    }
    norm.check_dim(dim)?;
    let slack = T::from_real(1.0 + 1e-12).unwrap_or_else(T::one);
    for (i, x) in vectors.iter().enumerate() {
        let nx = norm.eval(x)?;
        if nx > slack {
            return Err(Error::OutsideUnitBall {
                index: i + 1,
                norm: nx.to_string(),
            });
        }
    }
    let mut alpha = vec![0i64; order];
    let mut values = Vec::with_capacity(order);
    for k in 0..order {
        m.add_row_into_0(k, 1, &mut alpha);
        let mut y = vec![T::zero(); dim];
        for (a, x) in alpha.iter().zip(vectors) {
            if *a == 0 {
                continue;
            }
            let a = T::from_int(i128::from(*a));
            for (yj, xj) in y.iter_mut().zip(x) {
                *yj = yj.clone() + a.clone() * xj.clone();
            }
        }
        values.push(norm.eval(&y)?);
    }
    Ok(RhoProfile::from_values(
        values,
        norm.to_string(),
        format!("hat:matrix:{order}"),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SylvesterDiagnostics {
    pub n: u32,
    pub norm: String,
    pub rho: ReportValue,
    /// `ρ^(n) / (n·2^n)`.
    pub rho_over_n2n: f64,
}

pub fn sylvester_diagnostics<T: Scalar>(n: u32, norm: &NormSpec<T>) -> Result<SylvesterDiagnostics> {
    if n == 0 {
        return Err(Error::domain("diagnostics need n >= 1"));
    }
    let profile = sylvester_rho_profile(n, norm)?;
    Ok(SylvesterDiagnostics {
        n,
        norm: norm.to_string(),
        rho: profile.rho_max.to_report(),
        rho_over_n2n: profile.rho_max.to_f64_lossy() / (f64::from(n) * (1u64 << n) as f64),
    })
}

/// `ρ_n / (n·√n)` for a Hadamard order `n`.
pub fn hadamard_ratio(order: usize, rho: f64) -> f64 {
    let n = order as f64;
    rho / (n * n.sqrt())
}
