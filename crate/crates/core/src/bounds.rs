//! Closed-form lower and upper estimates for `ρ^(n)` (Sylvester) and `ρ_n`
//! (Hadamard), plus sandwich verdicts against computed values.
//!
//! Bounds are total functions of `(n, norm)`; none of them checks that a
//! Hadamard matrix of the given order exists.

use serde::{Deserialize, Serialize};

use crate::report::ReportValue;
use crate::{Error, NormSpec, Result, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct BoundTerms<T> {
    pub term_a: T,
    pub term_b: T,
    /// `min` for upper bounds, `max` for lower bounds.
    pub combined: T,
}

fn min_of<T: Scalar>(a: T, b: T) -> BoundTerms<T> {
    let combined = if a <= b { a.clone() } else { b.clone() };
    BoundTerms {
        term_a: a,
        term_b: b,
        combined,
    }
}

fn max_of<T: Scalar>(a: T, b: T) -> BoundTerms<T> {
    let combined = if a >= b { a.clone() } else { b.clone() };
    BoundTerms {
        term_a: a,
        term_b: b,
        combined,
    }
}

fn pow2<T: Scalar>(n: u32) -> T {
    T::from_int(1i128 << n)
}

fn require_exponent(n: u32) -> Result<()> {
    if (1..=100).contains(&n) {
        Ok(())
    } else {
        Err(Error::domain(format!("Sylvester exponent must be in 1..=100; got {n}")))
    }
}

/// `min{(1 + Σ_{j=1}^n 2^{−j} λ(2^{j−1}))·2^n, λ(n)·2^n}`.
pub fn sylvester_upper<T: Scalar>(n: u32, norm: &NormSpec<T>) -> Result<BoundTerms<T>> {
    require_exponent(n)?;
    let mut factor = T::one();
    for j in 1..=n {
        factor = factor + norm.lambda(1usize << (j - 1))? / pow2::<T>(j);
    }
    let scale = pow2::<T>(n);
    Ok(min_of(
        factor * scale.clone(),
        norm.lambda(n as usize)? * scale,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisClass {
    /// Factor `(n+2)/6`.
    Subsymmetric,
    /// Factor `(n+2)/3`.
    Symmetric,
}

/// `max{c·(n+2)·λ(2^n), 2^n}` with `c = 1/6` (subsymmetric) or `1/3` (symmetric).
pub fn sylvester_lower<T: Scalar>(
    n: u32,
    norm: &NormSpec<T>,
    class: BasisClass,
) -> Result<BoundTerms<T>> {
    require_exponent(n)?;
    let den = match class {
        BasisClass::Subsymmetric => 6,
        BasisClass::Symmetric => 3,
    };
    let lambda = norm.lambda(1usize << n)?;
    let factor = T::from_int(i128::from(n) + 2) / T::from_int(den);
    Ok(max_of(factor * lambda, pow2::<T>(n)))
}

/// `c·2^n` with `c = 1 + T_p/(2 − 2^{1/p})` for a space of type `p > 1`.
pub fn type_p_upper(n: u32, p: f64, type_constant: f64) -> Result<f64> {
    require_exponent(n)?;
    if !(p > 1.0) {
        return Err(Error::domain(format!(
            "type-p bound needs p > 1 (2 - 2^(1/p) vanishes at p = 1); got {p}"
        )));
    }
    if !(type_constant > 0.0 && type_constant.is_finite()) {
        return Err(Error::domain("type constant T_p must be positive"));
    }
    let c = 1.0 + type_constant / (2.0 - 2f64.powf(1.0 / p));
    Ok(c * (1u128 << n) as f64)
}

/// `max{λ(n)·√n/√2, n}`; `1/√2` is the best Khintchine constant `A₁`.
pub fn hadamard_lower<T: Scalar>(order: usize, norm: &NormSpec<T>) -> Result<BoundTerms<f64>> {
    let n = order as f64;
    let lambda = norm.lambda(order)?.to_f64_lossy();
    Ok(max_of(lambda * n.sqrt() / 2f64.sqrt(), n))
}

/// `λ(⌊√n⌋ + 1)·n`.
pub fn hadamard_upper_subsym<T: Scalar>(order: usize, norm: &NormSpec<T>) -> Result<T> {
    Ok(norm.lambda(order.isqrt() + 1)? * T::from_int(order as i128))
}

/// Lower and upper bounds for `ρ_n` in `ℓ_p` with the natural basis.
pub fn lp_rho_n_bounds(order: usize, p: f64) -> Result<(f64, f64)> {
    if !(p >= 1.0) {
        return Err(Error::domain(format!("lp bounds need p >= 1; got {p}")));
    }
    let n = order as f64;
    if p >= 2.0 {
        return Ok((n, n));
    }
    let e = (p + 2.0) / (2.0 * p);
    let upper = n.powf(e).max(n);
    Ok((n.powf(e) / 2f64.sqrt(), upper))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HatKind {
    Sylvester,
    Hadamard,
}

/// Ceiling for `ρ̂`: `n·2^n` for `S^(n)`, `n·√n` for Hadamard order `n`.
pub fn hat_rho_bounds(kind: HatKind, n: usize) -> f64 {
    let x = n as f64;
    match kind {
        HatKind::Sylvester => x * 2f64.powi(n as i32),
        HatKind::Hadamard => x * x.sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermOrdering {
    ABelowB,
    Equal,
    AAboveB,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Remark32<T> {
    pub term_a: T,
    pub term_b: T,
    pub ordering: TermOrdering,
}

/// Which of the two upper-bound terms is smaller at this `n`.
pub fn remark32_comparison<T: Scalar>(n: u32, norm: &NormSpec<T>) -> Result<Remark32<T>> {
    let terms = sylvester_upper(n, norm)?;
    let ordering = if T::approx_eq(&terms.term_a, &terms.term_b) {
        TermOrdering::Equal
    } else if terms.term_a < terms.term_b {
        TermOrdering::ABelowB
    } else {
        TermOrdering::AAboveB
    };
    Ok(Remark32 {
        term_a: terms.term_a,
        term_b: terms.term_b,
        ordering,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub side: Side,
    pub value: ReportValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub name: String,
    pub ok: bool,
    /// Distance from the bound on the admissible side (negative on failure).
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub norm: String,
    pub bounds: Vec<BoundEntry>,
    pub rho: Option<ReportValue>,
    pub verdicts: Vec<BoundVerdict>,
}

const FLOAT_TOLERANCE: f64 = 1e-9;

/// `lower <= upper`, exactly if both are exact, else with relative tolerance `1e-9`.
pub fn report_le(lower: &ReportValue, upper: &ReportValue) -> bool {
    if let (Some(a), Some(b)) = (lower.as_rational(), upper.as_rational()) {
        return a <= b;
    }
    let (a, b) = (lower.as_f64(), upper.as_f64());
    a <= b + FLOAT_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

impl BoundReport {
    pub fn new(n: usize, norm: impl Into<String>) -> Self {
        BoundReport {
            n,
            norm: norm.into(),
            bounds: Vec::new(),
            rho: None,
            verdicts: Vec::new(),
        }
    }

    pub fn push(&mut self, name: &str, side: Side, value: ReportValue) {
        self.bounds.push(BoundEntry {
            name: name.into(),
            side,
            value,
        });
    }

    /// Attaches a computed value and renders one verdict per bound.
    pub fn with_rho(mut self, rho: ReportValue) -> Self {
        self.verdicts = self
            .bounds
            .iter()
            .map(|b| {
                let (ok, slack) = match b.side {
                    Side::Lower => (report_le(&b.value, &rho), rho.as_f64() - b.value.as_f64()),
                    Side::Upper => (report_le(&rho, &b.value), b.value.as_f64() - rho.as_f64()),
                };
                BoundVerdict {
                    name: b.name.clone(),
                    ok,
                    slack,
                }
            })
            .collect();
        self.rho = Some(rho);
        self
    }

    pub fn all_ok(&self) -> bool {
        self.verdicts.iter().all(|v| v.ok)
    }

    pub fn failures(&self) -> Vec<&BoundVerdict> {
        self.verdicts.iter().filter(|v| !v.ok).collect()
    }
}

/// Every Sylvester estimate for `(n, norm)`.
pub fn sylvester_report<T: Scalar>(n: u32, norm: &NormSpec<T>) -> Result<BoundReport> {
    let mut report = BoundReport::new(1usize << n, norm.to_string());
    let upper = sylvester_upper(n, norm)?;
    report.push("upper_geometric_lambda", Side::Upper, upper.term_a.to_report());
    report.push("upper_lambda_n", Side::Upper, upper.term_b.to_report());
    let sub = sylvester_lower(n, norm, BasisClass::Subsymmetric)?;
    report.push("lower_subsymmetric", Side::Lower, sub.term_a.to_report());
    report.push("lower_trivial", Side::Lower, sub.term_b.to_report());
    if norm.is_symmetric() {
        let sym = sylvester_lower(n, norm, BasisClass::Symmetric)?;
        report.push("lower_symmetric", Side::Lower, sym.term_a.to_report());
    }
    report.push(
        "hat_rho_ceiling",
        Side::Upper,
        ReportValue::Int(i128::from(n) << n),
    );
    Ok(report)
}

/// Every Hadamard estimate for `(order, norm)`.
pub fn hadamard_report<T: Scalar>(order: usize, norm: &NormSpec<T>) -> Result<BoundReport> {
    let mut report = BoundReport::new(order, norm.to_string());
    let lower = hadamard_lower(order, norm)?;
    report.push("lower_khintchine", Side::Lower, ReportValue::Float(lower.term_a));
    report.push("lower_trivial", Side::Lower, ReportValue::Int(order as i128));
    report.push(
        "upper_subsymmetric",
        Side::Upper,
        hadamard_upper_subsym(order, norm)?.to_report(),
    );
    if let NormSpec::Lp(p) = norm {
        let (lo, hi) = lp_rho_n_bounds(order, *p)?;
        let exact_n = |v: f64| {
            if *p >= 2.0 {
                ReportValue::Int(order as i128)
            } else {
                ReportValue::Float(v)
            }
        };
        report.push("lp_lower", Side::Lower, exact_n(lo));
        report.push("lp_upper", Side::Upper, exact_n(hi));
    }
    report.push(
        "hat_rho_ceiling",
        Side::Upper,
        ReportValue::Float(hat_rho_bounds(HatKind::Hadamard, order)),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(v: i128) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn sylvester_upper_examples() {
        let t = sylvester_upper(2, &NormSpec::<Rational>::l1()).unwrap();
        assert_eq!((t.term_a, t.term_b, t.combined), (r(8), r(8), r(8)));
        let t = sylvester_upper(2, &NormSpec::<Rational>::Sup).unwrap();
        assert_eq!((t.term_a, t.term_b, t.combined), (r(7), r(4), r(4)));
        for norm in [NormSpec::<Rational>::l1(), NormSpec::Sup] {
            let t = sylvester_upper(1, &norm).unwrap();
            assert!(t.combined <= r(3));
            assert!(r(2) <= t.combined);
        }
    }

    #[test]
    fn sylvester_lower_examples() {
        let l1 = NormSpec::<Rational>::l1();
        let sym = sylvester_lower(2, &l1, BasisClass::Symmetric).unwrap();
        assert_eq!(sym.combined, Rational::new(16, 3));
        let sub = sylvester_lower(2, &l1, BasisClass::Subsymmetric).unwrap();
        assert_eq!(sub.combined, r(4));
        let sup = sylvester_lower(5, &NormSpec::<Rational>::Sup, BasisClass::Subsymmetric).unwrap();
        assert_eq!((sup.term_a, sup.combined), (Rational::new(7, 6), r(32)));
    }

    #[test]
    fn type_p_examples() {
        let v = type_p_upper(3, 2.0, 1.0).unwrap();
        assert!((v - (1.0 + 1.0 / (2.0 - 2f64.sqrt())) * 8.0).abs() < 1e-12);
        assert!((v - 21.657).abs() < 1e-3);
        assert!(type_p_upper(3, 1.0, 1.0).is_err());
        assert!(type_p_upper(3, 0.5, 1.0).is_err());
        assert!(type_p_upper(3, 2.0, 0.0).is_err());
        assert!(v > 8.0);
    }

    #[test]
    fn hadamard_lower_examples() {
        let t = hadamard_lower(4, &NormSpec::<Rational>::l1()).unwrap();
        assert!((t.combined - 4.0 * 2f64.sqrt()).abs() < 1e-12);
        let t = hadamard_lower(4, &NormSpec::<f64>::lp(2.0).unwrap()).unwrap();
        assert!((t.combined - 4.0).abs() < 1e-12);
        for norm in [NormSpec::<Rational>::l1(), NormSpec::Sup] {
            assert_eq!(hadamard_lower(1, &norm).unwrap().combined, 1.0);
        }
    }

    #[test]
    fn hadamard_upper_examples() {
        assert_eq!(hadamard_upper_subsym(4, &NormSpec::<Rational>::l1()).unwrap(), r(12));
        assert_eq!(hadamard_upper_subsym(4, &NormSpec::<Rational>::Sup).unwrap(), r(4));
        assert_eq!(hadamard_upper_subsym(16, &NormSpec::<Rational>::l1()).unwrap(), r(80));
    }

    #[test]
    fn lp_bounds_examples() {
        let (lo, hi) = lp_rho_n_bounds(4, 1.0).unwrap();
        assert!((lo - 4.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((hi - 8.0).abs() < 1e-12);
        assert_eq!(lp_rho_n_bounds(9, 2.0).unwrap(), (9.0, 9.0));
        assert_eq!(lp_rho_n_bounds(4, 3.0).unwrap().1, 4.0);
        assert!(lp_rho_n_bounds(4, 0.5).is_err());
    }

    #[test]
    fn hat_bounds_examples() {
        assert_eq!(hat_rho_bounds(HatKind::Sylvester, 3), 24.0);
        assert_eq!(hat_rho_bounds(HatKind::Hadamard, 4), 8.0);
        assert_eq!(hat_rho_bounds(HatKind::Hadamard, 1), 1.0);
    }

    #[test]
    fn remark32_examples() {
        let c = remark32_comparison(5, &NormSpec::<Rational>::l1()).unwrap();
        assert_eq!((c.term_a, c.term_b), (r(112), r(160)));
        assert_eq!(c.ordering, TermOrdering::ABelowB);
        let c = remark32_comparison(5, &NormSpec::<Rational>::Sup).unwrap();
        assert_eq!((c.term_a, c.term_b), (r(63), r(32)));
        assert_eq!(c.ordering, TermOrdering::AAboveB);
        let c = remark32_comparison(1, &NormSpec::<Rational>::l1()).unwrap();
        assert_eq!((c.term_a, c.term_b), (r(3), r(2)));
        assert_eq!(c.ordering, TermOrdering::AAboveB);
    }

    #[test]
    fn report_verdicts() {
        let report = sylvester_report(3, &NormSpec::<Rational>::l1()).unwrap();
        let ok = report.clone().with_rho(r(14).to_report());
        assert!(ok.all_ok(), "{ok:?}");
        let bad = report.with_rho(r(100).to_report());
        assert!(!bad.all_ok());
        assert!(bad.failures().iter().any(|v| v.name == "upper_lambda_n"));

        let text = serde_json::to_string(&ok).unwrap();
        let back: BoundReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, ok);
    }

    #[test]
    fn hadamard_report_order_four() {
        let report = hadamard_report(4, &NormSpec::<Rational>::l1())
            .unwrap()
            .with_rho(ReportValue::Int(8));
        assert!(report.all_ok(), "{report:?}");
        let lp_upper = report.bounds.iter().find(|b| b.name == "lp_upper").unwrap();
        assert!((lp_upper.value.as_f64() - 8.0).abs() < 1e-12);
    }
}
