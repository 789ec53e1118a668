//! Maximizations over Hadamard matrices and the row-subset minimization.
//!
//! `ρ_n` maximizes `ρ_H` over every Hadamard matrix `H` of order `n`. Row
//! negations and permutations keep a matrix Hadamard, and a symmetric norm
//! ignores column permutations and sign changes, so over the row-operation
//! orbit of one representative the value at prefix `m` only depends on which
//! `m` rows are summed and with which signs. The orbit maximum is therefore
//! `max ‖Σ_{k∈S} θ_k a_k‖` over signed row subsets: `(3^n − 1)/2` evaluations
//! once the global sign is fixed.

mod conjecture;

pub use conjecture::{
    anneal_seeds, binomial, conjecture_min, subset_l1, Checkpoint, ConjectureConfig,
    ConjectureMode, ConjectureReport, ConjectureResult, ConjectureSearch, PrefixChoice, Verdict,
};

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characteristics::{rho_profile, tolerance_tag};
use crate::matrix::{enumerate_hadamard, transform, validate_hadamard, EnumerationMode, Transform};
use crate::report::{exact_string, ReportValue};
use crate::{Budget, Error, HadamardWitness, NormSpec, Result, Scalar, SignMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    SubsetSign,
    BranchAndBound,
    Anneal,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub pruned: u64,
    pub evaluations: u64,
    pub wall_ms: u64,
}

/// Where the optimum was found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A matrix and the prefix length attaining the objective.
    Matrix { matrix: String, m: usize },
    /// Rows (1-based, in summation order) and signs of the seed matrix,
    /// `transposed` when the seed was the transpose of the representative.
    SignedRows {
        transposed: bool,
        rows: Vec<usize>,
        signs: Vec<i8>,
    },
    /// Rows (1-based, ascending) of a Sylvester matrix.
    Subset { rows: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult<T> {
    pub objective: T,
    pub witness: Witness,
    pub mode: SearchMode,
    /// `true` only when the whole search space was enumerated.
    pub exact: bool,
    /// `"rho_n"` or `"class-restricted lower bound on rho_n"`.
    pub label: String,
    pub stats: SearchStats,
}

/// JSON shape of a [`SearchResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    #[serde(with = "exact_string")]
    pub objective: ReportValue,
    pub witness: Witness,
    pub mode: SearchMode,
    pub exact: bool,
    pub label: String,
    pub norm: String,
    pub order: usize,
    pub tolerance: String,
    pub stats: SearchStats,
}

impl<T: Scalar> SearchResult<T> {
    pub fn to_report(&self, norm: &NormSpec<T>, order: usize) -> SearchReport {
        SearchReport {
            objective: self.objective.to_report(),
            witness: self.witness.clone(),
            mode: self.mode,
            exact: self.exact,
            label: self.label.clone(),
            norm: norm.to_string(),
            order,
            tolerance: tolerance_tag::<T>(),
            stats: self.stats,
        }
    }
}

/// Largest order with a single Hadamard equivalence class.
const SINGLE_CLASS_MAX_ORDER: usize = 12;

fn orbit_label(order: usize) -> String {
    if order <= SINGLE_CLASS_MAX_ORDER {
        "rho_n".into()
    } else {
        "class-restricted lower bound on rho_n".into()
    }
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// `ρ_n` by enumerating every Hadamard matrix of order 1, 2 or 4.
pub fn rho_n_exhaustive<T: Scalar>(order: usize, norm: &NormSpec<T>) -> Result<SearchResult<T>> {
    let start = Instant::now();
    let mut best: Option<(T, SignMatrix, usize)> = None;
    let mut stats = SearchStats::default();
    for m in enumerate_hadamard(order, EnumerationMode::Exhaustive)? {
        let profile = rho_profile(&m, norm)?;
        stats.nodes += 1;
        stats.evaluations += order as u64;
        if best.as_ref().is_none_or(|(b, _, _)| profile.rho_max > *b) {
            best = Some((profile.rho_max.clone(), m, profile.argmax[0]));
        }
    }
    let (objective, matrix, m) = best.expect("orders 1, 2, 4 have Hadamard matrices");
    stats.wall_ms = elapsed_ms(start);
    let witness = Witness::Matrix {
        matrix: matrix.to_text(),
        m,
    };
    verify_witness(&objective, &witness, None, norm)?;
    Ok(SearchResult {
        objective,
        witness,
        mode: SearchMode::Exhaustive,
        exact: true,
        label: "rho_n".into(),
        stats,
    })
}

/// Materializes a signed-rows witness as a matrix whose first `m` rows are
/// the chosen ones, each multiplied by its sign.
pub fn witness_matrix(seed: &SignMatrix, rows: &[usize], signs: &[i8]) -> Result<SignMatrix> {
    let n = seed.order();
    let mut order: Vec<usize> = rows.to_vec();
    order.extend((1..=n).filter(|k| !rows.contains(k)));
    let mut m = transform(seed, &Transform::PermuteRows(order))?;
    for (pos, &s) in signs.iter().enumerate() {
        if s < 0 {
            m = transform(&m, &Transform::NegateRow(pos + 1))?;
        }
    }
    Ok(m)
}

/// Recomputes the objective from the witness along an independent path.
fn verify_witness<T: Scalar>(
    objective: &T,
    witness: &Witness,
    representative: Option<&SignMatrix>,
    norm: &NormSpec<T>,
) -> Result<()> {
    let (matrix, m) = match witness {
        Witness::Matrix { matrix, m } => (SignMatrix::parse_text(matrix)?, *m),
        Witness::SignedRows {
            transposed,
            rows,
            signs,
        } => {
            let rep = representative.expect("signed witnesses carry their representative");
            let seed = if *transposed { rep.transpose() } else { rep.clone() };
            (witness_matrix(&seed, rows, signs)?, rows.len())
        }
        Witness::Subset { .. } => {
            return Err(Error::domain("subset witnesses are checked by the conjecture search"))
        }
    };
    validate_hadamard(&matrix)?;
    let value = rho_profile(&matrix, norm)?.at(m)?.clone();
    if !T::approx_eq(&value, objective) {
        return Err(Error::domain(format!(
            "witness re-evaluates to {value}, search reported {objective}"
        )));
    }
    Ok(())
}

/// Best signed subset found in one branch of the orbit search.
#[derive(Debug, Clone)]
struct Best<T> {
    value: T,
    /// Per-row choice over (seed, rows): 0 skip, 1 plus, 2 minus.
    key: Vec<u8>,
}

impl<T: Scalar> Best<T> {
    fn better_than(&self, other: &Best<T>) -> bool {
        self.value > other.value || (self.value == other.value && self.key < other.key)
    }
}

fn merge<T: Scalar>(a: Option<Best<T>>, b: Option<Best<T>>) -> Option<Best<T>> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.better_than(&x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

struct OrbitTask<'a, T> {
    seed: &'a SignMatrix,
    seed_index: u8,
    norm: &'a NormSpec<T>,
}

impl<T: Scalar> OrbitTask<'_, T> {
    /// Enumerates signed subsets whose first `split` choices equal `prefix`,
    /// evaluating only at inclusions of rows `>= split` (plus the prefix
    /// itself when `evaluate_prefix`).
    fn run(&self, prefix: &[u8], split: usize, evaluate_prefix: bool) -> Result<(Option<Best<T>>, u64)> {
        let n = self.seed.order();
        let mut ev = self.norm.evaluator(n)?;
        let mut sum = vec![0i64; n];
        let mut key = vec![0u8; n + 1];
        key[0] = self.seed_index;
        let mut any = false;
        for (k, &c) in prefix.iter().enumerate() {
            key[k + 1] = c;
            if c != 0 {
                any = true;
                self.seed.add_row_into_0(k, if c == 1 { 1 } else { -1 }, &mut sum);
            }
        }
        let mut best = None;
        let mut evals = 0u64;
        if evaluate_prefix && any {
            evals += 1;
            best = Some(Best {
                value: ev.eval_int(&sum)?,
                key: key.clone(),
            });
        }
        self.descend(split, any, &mut sum, &mut key, &mut ev, &mut best, &mut evals)?;
        Ok((best, evals))
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        start: usize,
        any: bool,
        sum: &mut [i64],
        key: &mut [u8],
        ev: &mut crate::norms::NormEvaluator<'_, T>,
        best: &mut Option<Best<T>>,
        evals: &mut u64,
    ) -> Result<()> {
        let n = self.seed.order();
        for j in start..n {
            // the first included row is taken with sign +1: ‖−v‖ = ‖v‖
            let signs: &[i64] = if any { &[1, -1] } else { &[1] };
            for &s in signs {
                self.seed.add_row_into_0(j, s, sum);
                key[j + 1] = if s == 1 { 1 } else { 2 };
                *evals += 1;
                let value = ev.eval_int(sum)?;
                let improves = match best {
                    None => true,
                    Some(b) => value > b.value || (value == b.value && key[..] < b.key[..]),
                };
                if improves {
                    *best = Some(Best {
                        value,
                        key: key.to_vec(),
                    });
                }
                self.descend(j + 1, true, sum, key, ev, best, evals)?;
                self.seed.add_row_into_0(j, -s, sum);
                key[j + 1] = 0;
            }
        }
        Ok(())
    }
}

fn ternary_prefixes(len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..3u8).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// Exact maximum of `ρ` over the row-operation orbits of the representative
/// and its transpose.
pub fn rho_n_subset_sign<T: Scalar>(
    representative: &HadamardWitness,
    norm: &NormSpec<T>,
    budget: &Budget,
) -> Result<SearchResult<T>> {
    if !norm.is_symmetric() {
        return Err(Error::domain("subset-sign reduction needs a symmetric norm"));
    }
    let start = Instant::now();
    let rep = representative.matrix();
    let n = rep.order();
    let evaluations = 3u128.checked_pow(n as u32).unwrap_or(u128::MAX);
    budget.check_evaluations(
        "subset-sign search",
        evaluations,
        "; use a smaller order or a heuristic search",
    )?;
    let transposed = rep.transpose();
    let mut seeds = vec![rep];
    if transposed != *rep {
        seeds.push(&transposed);
    }

    let split = n.min(6);
    let prefixes = ternary_prefixes(split);
    let mut tasks = Vec::new();
    for (seed_index, seed) in seeds.iter().enumerate() {
        for p in &prefixes {
            // canonical sign: the first included row is +1
            if p.iter().find(|&&c| c != 0) == Some(&2) {
                continue;
            }
            tasks.push((seed_index, *seed, p.clone()));
        }
    }
    let results: Vec<(Option<Best<T>>, u64)> = tasks
        .par_iter()
        .map(|(seed_index, seed, prefix)| {
            OrbitTask {
                seed,
                seed_index: *seed_index as u8,
                norm,
            }
            .run(prefix, split, true)
        })
        .collect::<Result<_>>()?;
    let mut best = None;
    let mut evals = 0u64;
    for (b, e) in results {
        best = merge(best, b);
        evals += e;
    }
    let best = best.expect("order >= 1 has a nonempty subset");

    let transposed_seed = best.key[0] == 1;
    let mut rows = Vec::new();
    let mut signs = Vec::new();
    for (k, &c) in best.key[1..].iter().enumerate() {
        if c != 0 {
            rows.push(k + 1);
            signs.push(if c == 1 { 1 } else { -1 });
        }
    }
    let witness = Witness::SignedRows {
        transposed: transposed_seed,
        rows,
        signs,
    };
    verify_witness(&best.value, &witness, Some(rep), norm)?;
    Ok(SearchResult {
        objective: best.value,
        witness,
        mode: SearchMode::SubsetSign,
        exact: true,
        label: orbit_label(n),
        stats: SearchStats {
            nodes: evals,
            pruned: 0,
            evaluations: evals,
            wall_ms: elapsed_ms(start),
        },
    })
}

/// `max_m ‖Σ_{k≤m} θ_k a_k‖` for one sign vector. Fails if the value exceeds
/// the ceiling `λ(⌊√n⌋ + 1)·n`, which holds for every Hadamard matrix.
pub fn signed_prefix_max<T: Scalar>(
    m: &HadamardWitness,
    norm: &NormSpec<T>,
    signs: &[i8],
) -> Result<T> {
    let matrix = m.matrix();
    let n = matrix.order();
    if signs.len() != n {
        return Err(Error::domain(format!(
            "{} signs supplied for order {n}",
            signs.len()
        )));
    }
    if let Some(bad) = signs.iter().find(|s| s.abs() != 1) {
        return Err(Error::domain(format!("sign {bad} is not +1 or -1")));
    }
    let mut ev = norm.evaluator(n)?;
    let mut sum = vec![0i64; n];
    let mut best = T::zero();
    for (k, &s) in signs.iter().enumerate() {
        matrix.add_row_into_0(k, i64::from(s), &mut sum);
        let v = ev.eval_int(&sum)?;
        if v > best {
            best = v;
        }
    }
    let ceiling = crate::bounds::hadamard_upper_subsym(n, norm)?;
    if !T::approx_le(&best, &ceiling) {
        return Err(Error::domain(format!(
            "signed prefix maximum {best} exceeds the ceiling {ceiling}"
        )));
    }
    Ok(best)
}
