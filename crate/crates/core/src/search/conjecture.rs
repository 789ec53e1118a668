//! Minimum of `‖Σ_{k∈S} a_k‖₁` over `m`-row subsets `S` of `S^(n)`, compared
//! with the `ℓ₁` characteristic `ρ^(n)`.
//!
//! The sum does not depend on the order of the rows, so a minimum over row
//! permutations is a minimum over subsets of size `m_n` (or `m_n'`).

use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{SearchMode, SearchResult, SearchStats, Witness};
use crate::characteristics::rho_l1_closed_form;
use crate::matrix::{sylvester_entry, sylvester_matrix};
use crate::report::{exact_string, ReportValue};
use crate::{Budget, Error, NormSpec, Rational, Result, Scalar, SignMatrix};

const CHECKPOINT_FORMAT: u32 = 1;
/// Largest exponent searched; keeps the suffix count tables small.
const MAX_N: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjectureMode {
    ExhaustiveSubsets,
    BranchAndBound,
    Anneal,
}

impl ConjectureMode {
    fn search_mode(self) -> SearchMode {
        match self {
            ConjectureMode::ExhaustiveSubsets => SearchMode::Exhaustive,
            ConjectureMode::BranchAndBound => SearchMode::BranchAndBound,
            ConjectureMode::Anneal => SearchMode::Anneal,
        }
    }
}

/// Which maximizing prefix length fixes the subset size.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrefixChoice {
    #[default]
    M,
    MPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The whole space was searched and the minimum is at least the bound.
    Holds,
    /// A subset with a sum strictly below the bound.
    Counterexample,
    /// Incomplete search with nothing below the bound.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureConfig {
    pub n: u32,
    pub mode: ConjectureMode,
    pub prefix: PrefixChoice,
    pub seed: u64,
    pub anneal_iterations: u64,
    /// Stop branch-and-bound after this many nodes and report the incumbent.
    pub node_limit: Option<u64>,
    pub budget: Budget,
}

impl ConjectureConfig {
    pub fn new(n: u32, mode: ConjectureMode) -> Self {
        ConjectureConfig {
            n,
            mode,
            prefix: PrefixChoice::M,
            seed: 0,
            anneal_iterations: 100_000,
            node_limit: None,
            budget: Budget::default(),
        }
    }

    pub fn with_prefix(mut self, prefix: PrefixChoice) -> Self {
        self.prefix = prefix;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_iterations(mut self, iterations: u64) -> Self {
        self.anneal_iterations = iterations;
        self
    }

    pub fn with_node_limit(mut self, limit: u64) -> Self {
        self.node_limit = Some(limit);
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    fn describe(&self) -> String {
        let mut s = format!("n={} mode={:?} prefix={:?}", self.n, self.mode, self.prefix);
        if self.mode == ConjectureMode::Anneal {
            s += &format!(" seed={} iterations={}", self.seed, self.anneal_iterations);
        }
        s
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        let Some(next) = acc.checked_mul(u128::from(n - i)) else {
            return u128::MAX;
        };
        acc = next / u128::from(i + 1);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Incumbent {
    value: i64,
    /// 0-based, ascending.
    rows: Vec<usize>,
}

impl Incumbent {
    fn beats(&self, other: &Option<Incumbent>) -> bool {
        match other {
            None => true,
            Some(o) => self.value < o.value || (self.value == o.value && self.rows < o.rows),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct AnnealState {
    /// ChaCha stream position; fits in 64 bits for any feasible run.
    word_pos: u64,
    iteration: u64,
    /// Current subset in sampling order.
    inside: Vec<usize>,
    outside: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum Frontier {
    /// Depth-first cursor over combinations in lexicographic order: the rows
    /// chosen so far and the next candidate row.
    Cursor { chosen: Vec<usize>, next: usize },
    Anneal(AnnealState),
    Done,
}

/// Serializable search state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    format: u32,
    n: u32,
    m: usize,
    mode: ConjectureMode,
    prefix: PrefixChoice,
    seed: u64,
    anneal_iterations: u64,
    frontier: Frontier,
    best: Option<Incumbent>,
    stats: SearchStats,
}

impl Checkpoint {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mode(&self) -> ConjectureMode {
        self.mode
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            serde_json::to_writer(&mut f, self)?;
            f.write_all(b"\n")?;
            f.sync_all()?;
        }
        fs::rename(tmp, path)?;
        Ok(())
    }

    /// `Ok(None)` for a missing or empty file; unreadable content is an error.
    pub fn load(path: &Path) -> Result<Option<Checkpoint>> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Option<Checkpoint>> {
        if text.trim().is_empty() {
            return Ok(None);
        }
        let cp: Checkpoint = serde_json::from_str(text)
            .map_err(|e| Error::Checkpoint(format!("corrupt checkpoint: {e}")))?;
        if cp.format != CHECKPOINT_FORMAT {
            return Err(Error::Checkpoint(format!(
                "unsupported checkpoint format {}",
                cp.format
            )));
        }
        Ok(Some(cp))
    }

    fn describe(&self) -> String {
        let mut s = format!("n={} mode={:?} prefix={:?}", self.n, self.mode, self.prefix);
        if self.mode == ConjectureMode::Anneal {
            s += &format!(" seed={} iterations={}", self.seed, self.anneal_iterations);
        }
        s
    }
}

/// Outcome of a conjecture search.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureResult {
    pub n: u32,
    pub m: usize,
    pub prefix: PrefixChoice,
    /// `ρ^(n)` in `ℓ₁`.
    pub rhs: i128,
    pub verdict: Verdict,
    pub search: SearchResult<Rational>,
}

/// JSON shape of a [`ConjectureResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub n: u32,
    pub m: usize,
    pub prefix: PrefixChoice,
    #[serde(with = "exact_string")]
    pub min: ReportValue,
    #[serde(with = "exact_string")]
    pub rhs: ReportValue,
    pub verdict: Verdict,
    pub mode: SearchMode,
    pub exact: bool,
    pub witness: Witness,
    pub stats: SearchStats,
}

impl ConjectureResult {
    pub fn objective(&self) -> i128 {
        self.search.objective.to_integer()
    }

    pub fn to_report(&self) -> ConjectureReport {
        ConjectureReport {
            n: self.n,
            m: self.m,
            prefix: self.prefix,
            min: self.search.objective.to_report(),
            rhs: ReportValue::Int(self.rhs),
            verdict: self.verdict,
            mode: self.search.mode,
            exact: self.search.exact,
            witness: self.search.witness.clone(),
            stats: self.search.stats,
        }
    }
}

/// `‖Σ_{k∈rows} a_k‖₁` for 1-based rows of `S^(n)`, entry by entry from the
/// bit formula.
pub fn subset_l1(n: u32, rows: &[usize]) -> Result<Rational> {
    let order = 1usize << n;
    let mut sums = vec![Rational::from_int(0); order];
    for &k in rows {
        for (i, s) in sums.iter_mut().enumerate() {
            *s += Rational::from_int(i128::from(sylvester_entry(n, k, i + 1)?));
        }
    }
    NormSpec::<Rational>::l1().eval(&sums)
}

/// Resumable search for the minimum subset sum.
#[derive(Debug, Clone)]
pub struct ConjectureSearch {
    config: ConjectureConfig,
    m: usize,
    rhs: i128,
    matrix: SignMatrix,
    /// `pos[j * order + i]`: number of `+1` entries in column `i` among rows `j..`.
    pos: Vec<u32>,
    frontier: Frontier,
    best: Option<Incumbent>,
    stats: SearchStats,
    /// Current partial sum for the cursor or anneal subset.
    sum: Vec<i64>,
}

impl ConjectureSearch {
    pub fn new(config: ConjectureConfig) -> Result<Self> {
        let mut s = Self::prepare(config)?;
        s.frontier = match s.config.mode {
            ConjectureMode::ExhaustiveSubsets | ConjectureMode::BranchAndBound => Frontier::Cursor {
                chosen: Vec::new(),
                next: 0,
            },
            ConjectureMode::Anneal => {
                let order = s.matrix.order();
                let mut rng = ChaCha8Rng::seed_from_u64(s.config.seed);
                let mut rows: Vec<usize> = (0..order).collect();
                rows.shuffle(&mut rng);
                let outside = rows.split_off(s.m);
                Frontier::Anneal(AnnealState {
                    word_pos: rng.get_word_pos() as u64,
                    iteration: 0,
                    inside: rows,
                    outside,
                })
            }
        };
        s.rebuild_sum();
        if let Frontier::Anneal(state) = &s.frontier {
            let mut rows = state.inside.clone();
            rows.sort_unstable();
            s.best = Some(Incumbent {
                value: l1(&s.sum),
                rows,
            });
        } else {
            // the lex-first subset: an incumbent from the start, and no later
            // tie can displace it
            let mut sum = vec![0i64; s.matrix.order()];
            for row in 0..s.m {
                s.matrix.add_row_into_0(row, 1, &mut sum);
            }
            s.best = Some(Incumbent {
                value: l1(&sum),
                rows: (0..s.m).collect(),
            });
        }
        Ok(s)
    }

    /// Continues from a checkpoint taken under the same configuration.
    pub fn resume(config: ConjectureConfig, checkpoint: Checkpoint) -> Result<Self> {
        let mut s = Self::prepare(config)?;
        let same = checkpoint.n == s.config.n
            && checkpoint.mode == s.config.mode
            && checkpoint.prefix == s.config.prefix
            && checkpoint.m == s.m
            && (s.config.mode != ConjectureMode::Anneal
                || (checkpoint.seed == s.config.seed
                    && checkpoint.anneal_iterations == s.config.anneal_iterations));
        if !same {
            return Err(Error::ConfigMismatch {
                expected: s.config.describe(),
                found: checkpoint.describe(),
            });
        }
        s.check_frontier(&checkpoint.frontier, checkpoint.best.as_ref())?;
        s.frontier = checkpoint.frontier;
        s.best = checkpoint.best;
        s.stats = checkpoint.stats;
        s.rebuild_sum();
        Ok(s)
    }

    /// Resumes from `path` when it holds a checkpoint, else starts fresh.
    pub fn open(config: ConjectureConfig, path: &Path) -> Result<Self> {
        match Checkpoint::load(path)? {
            Some(cp) => Self::resume(config, cp),
            None => Self::new(config),
        }
    }

    fn prepare(config: ConjectureConfig) -> Result<Self> {
        let n = config.n;
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::domain(format!(
                "conjecture search needs 1 <= n <= {MAX_N}; got {n}"
            )));
        }
        let cf = rho_l1_closed_form(n)?;
        let m = match config.prefix {
            PrefixChoice::M => cf.m,
            PrefixChoice::MPrime => cf.m_prime,
        } as usize;
        let order = 1usize << n;
        match config.mode {
            ConjectureMode::ExhaustiveSubsets => config.budget.check_evaluations(
                "exhaustive subset search",
                binomial(order as u64, m as u64),
                "; use branch-and-bound or anneal mode",
            )?,
            ConjectureMode::Anneal => config.budget.check_evaluations(
                "annealing",
                u128::from(config.anneal_iterations),
                "; lower the iteration count",
            )?,
            ConjectureMode::BranchAndBound => {}
        }
        let matrix = sylvester_matrix(n, &config.budget)?;
        let pos = if config.mode == ConjectureMode::BranchAndBound {
            let mut pos = vec![0u32; (order + 1) * order];
            for j in (0..order).rev() {
                for i in 0..order {
                    pos[j * order + i] =
                        pos[(j + 1) * order + i] + u32::from(matrix.get_0(j, i) == 1);
                }
            }
            pos
        } else {
            Vec::new()
        };
        Ok(ConjectureSearch {
            config,
            m,
            rhs: cf.value,
            matrix,
            pos,
            frontier: Frontier::Done,
            best: None,
            stats: SearchStats::default(),
            sum: vec![0; order],
        })
    }

    fn check_frontier(&self, frontier: &Frontier, best: Option<&Incumbent>) -> Result<()> {
        let order = self.matrix.order();
        let corrupt = |what: &str| Err(Error::Checkpoint(format!("corrupt checkpoint: {what}")));
        if let Some(b) = best {
            if b.rows.len() != self.m
                || b.rows.windows(2).any(|w| w[0] >= w[1])
                || b.rows.iter().any(|&r| r >= order)
            {
                return corrupt("incumbent is not an m-subset");
            }
            let mut sum = vec![0i64; order];
            for &r in &b.rows {
                self.matrix.add_row_into_0(r, 1, &mut sum);
            }
            if l1(&sum) != b.value {
                return corrupt("incumbent value does not match its rows");
            }
        }
        match (frontier, self.config.mode) {
            (Frontier::Done, _) => Ok(()),
            (Frontier::Cursor { chosen, next }, ConjectureMode::ExhaustiveSubsets)
            | (Frontier::Cursor { chosen, next }, ConjectureMode::BranchAndBound) => {
                if chosen.len() > self.m
                    || chosen.windows(2).any(|w| w[0] >= w[1])
                    || chosen.iter().any(|&r| r >= order)
                    || *next > order
                    || chosen.last().is_some_and(|&l| l >= *next)
                {
                    return corrupt("cursor out of range");
                }
                Ok(())
            }
            (Frontier::Anneal(a), ConjectureMode::Anneal) => {
                let mut all: Vec<usize> = a.inside.iter().chain(&a.outside).copied().collect();
                all.sort_unstable();
                if a.inside.len() != self.m
                    || all != (0..order).collect::<Vec<_>>()
                    || a.iteration > self.config.anneal_iterations
                    || best.is_none()
                {
                    return corrupt("annealing state is not a partition of the rows");
                }
                Ok(())
            }
            _ => corrupt("frontier does not belong to this mode"),
        }
    }

    fn rebuild_sum(&mut self) {
        self.sum.iter_mut().for_each(|s| *s = 0);
        let rows: &[usize] = match &self.frontier {
            Frontier::Cursor { chosen, .. } => chosen,
            Frontier::Anneal(a) => &a.inside,
            Frontier::Done => &[],
        };
        for &r in rows {
            self.matrix.add_row_into_0(r, 1, &mut self.sum);
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rhs(&self) -> i128 {
        self.rhs
    }

    pub fn is_finished(&self) -> bool {
        matches!(self.frontier, Frontier::Done)
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    /// Best value found so far.
    pub fn best_value(&self) -> Option<i64> {
        self.best.as_ref().map(|b| b.value)
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            format: CHECKPOINT_FORMAT,
            n: self.config.n,
            m: self.m,
            mode: self.config.mode,
            prefix: self.config.prefix,
            seed: self.config.seed,
            anneal_iterations: self.config.anneal_iterations,
            frontier: self.frontier.clone(),
            best: self.best.clone(),
            stats: self.stats,
        }
    }

    /// Advances by at most `max_steps` nodes (or annealing moves). Returns
    /// `true` once the search is finished.
    pub fn step(&mut self, max_steps: u64) -> Result<bool> {
        let start = Instant::now();
        let frontier = std::mem::replace(&mut self.frontier, Frontier::Done);
        self.frontier = match frontier {
            Frontier::Cursor { mut chosen, mut next } => {
                if self.cursor_steps(&mut chosen, &mut next, max_steps) {
                    Frontier::Done
                } else {
                    Frontier::Cursor { chosen, next }
                }
            }
            Frontier::Anneal(mut a) => {
                if self.anneal_steps(&mut a, max_steps) {
                    Frontier::Done
                } else {
                    Frontier::Anneal(a)
                }
            }
            Frontier::Done => Frontier::Done,
        };
        self.stats.wall_ms += start.elapsed().as_millis() as u64;
        Ok(self.is_finished())
    }

    fn node_limit_hit(&self) -> bool {
        self.config
            .node_limit
            .is_some_and(|limit| self.stats.nodes >= limit)
    }

    /// Column-wise lower bound on `‖sum + x‖₁` where `x` adds `r` more rows
    /// drawn from rows `from..`.
    fn lower_bound(&self, r: usize, from: usize) -> i64 {
        let order = self.matrix.order();
        let avail = (order - from) as i64;
        let r = r as i64;
        let mut total = 0i64;
        for (i, &p) in self.sum.iter().enumerate() {
            let plus = i64::from(self.pos[from * order + i]);
            let minus = avail - plus;
            // x = 2t − r with t plus-entries among the r new rows
            let lo = (r - minus).max(0);
            let hi = r.min(plus);
            let t = (r - p).div_euclid(2).clamp(lo, hi);
            let t2 = (t + 1).min(hi);
            total += (p + 2 * t - r).abs().min((p + 2 * t2 - r).abs());
        }
        total
    }

    fn cursor_steps(&mut self, chosen: &mut Vec<usize>, next: &mut usize, max_steps: u64) -> bool {
        let order = self.matrix.order();
        let bnb = self.config.mode == ConjectureMode::BranchAndBound;
        let mut steps = 0u64;
        loop {
            if chosen.len() == self.m {
                let value = l1(&self.sum);
                self.stats.evaluations += 1;
                // lexicographic traversal: a tie never beats the incumbent
                if self.best.as_ref().is_none_or(|b| value < b.value) {
                    self.best = Some(Incumbent {
                        value,
                        rows: chosen.clone(),
                    });
                }
                let last = chosen.pop().expect("m >= 1");
                self.matrix.add_row_into_0(last, -1, &mut self.sum);
                *next = last + 1;
                continue;
            }
            // Row k ⊕ h of S^(n) is row k times row h entrywise, so translating a
            // subset by one of its rows keeps the norm: some minimizer contains
            // row 0, and every such subset precedes the others lexicographically.
            let exhausted = *next + (self.m - chosen.len()) > order
                || (bnb && chosen.is_empty() && *next > 0);
            if exhausted {
                match chosen.pop() {
                    None => return true,
                    Some(last) => {
                        self.matrix.add_row_into_0(last, -1, &mut self.sum);
                        *next = last + 1;
                    }
                }
                continue;
            }
            if steps >= max_steps || (bnb && self.node_limit_hit()) {
                return false;
            }
            steps += 1;
            self.stats.nodes += 1;
            let row = *next;
            self.matrix.add_row_into_0(row, 1, &mut self.sum);
            chosen.push(row);
            *next = row + 1;
            if bnb && chosen.len() < self.m {
                let bound = self.lower_bound(self.m - chosen.len(), row + 1);
                if self.best.as_ref().is_some_and(|b| bound >= b.value) {
                    self.stats.pruned += 1;
                    chosen.pop();
                    self.matrix.add_row_into_0(row, -1, &mut self.sum);
                }
            }
        }
    }

    fn temperature(&self, iteration: u64) -> f64 {
        let t0 = self.matrix.order() as f64 / 4.0;
        let t1 = 0.05f64;
        let frac = iteration as f64 / self.config.anneal_iterations.max(1) as f64;
        t0 * (t1 / t0).powf(frac)
    }

    fn anneal_steps(&mut self, a: &mut AnnealState, max_steps: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_word_pos(u128::from(a.word_pos));
        let mut current = l1(&self.sum);
        let mut steps = 0u64;
        let order = self.matrix.order();
        let mut trial = vec![0i64; order];
        while a.iteration < self.config.anneal_iterations && steps < max_steps {
            steps += 1;
            a.iteration += 1;
            self.stats.nodes += 1;
            if a.outside.is_empty() {
                break;
            }
            let pi = rng.gen_range(0..a.inside.len());
            let qi = rng.gen_range(0..a.outside.len());
            let u: f64 = rng.gen();
            let (p, q) = (a.inside[pi], a.outside[qi]);
            trial.copy_from_slice(&self.sum);
            self.matrix.add_row_into_0(p, -1, &mut trial);
            self.matrix.add_row_into_0(q, 1, &mut trial);
            let value = l1(&trial);
            self.stats.evaluations += 1;
            let delta = (value - current) as f64;
            if delta <= 0.0 || u < (-delta / self.temperature(a.iteration)).exp() {
                std::mem::swap(&mut self.sum, &mut trial);
                a.inside[pi] = q;
                a.outside[qi] = p;
                current = value;
                let mut rows = a.inside.clone();
                rows.sort_unstable();
                let cand = Incumbent { value, rows };
                if cand.beats(&self.best) {
                    self.best = Some(cand);
                }
            }
        }
        a.word_pos = rng.get_word_pos() as u64;
        a.iteration >= self.config.anneal_iterations
    }

    /// Runs to completion (or the node limit) and reports.
    pub fn run(mut self) -> Result<ConjectureResult> {
        while !self.step(1 << 20)? {
            if self.node_limit_hit() {
                break;
            }
        }
        self.result()
    }

    /// Reports the current incumbent. `exact` only after a finished
    /// exhaustive or branch-and-bound search.
    pub fn result(&self) -> Result<ConjectureResult> {
        let best = self
            .best
            .as_ref()
            .ok_or_else(|| Error::domain("no subset evaluated yet"))?;
        let rows: Vec<usize> = best.rows.iter().map(|r| r + 1).collect();
        let objective = Rational::from_int(i128::from(best.value));
        let recheck = subset_l1(self.config.n, &rows)?;
        if recheck != objective {
            return Err(Error::domain(format!(
                "witness re-evaluates to {recheck}, search reported {objective}"
            )));
        }
        let exact = self.is_finished() && self.config.mode != ConjectureMode::Anneal;
        let below = i128::from(best.value) < self.rhs;
        let verdict = match (below, exact) {
            (true, _) => Verdict::Counterexample,
            (false, true) => Verdict::Holds,
            (false, false) => Verdict::Inconclusive,
        };
        Ok(ConjectureResult {
            n: self.config.n,
            m: self.m,
            prefix: self.config.prefix,
            rhs: self.rhs,
            verdict,
            search: SearchResult {
                objective,
                witness: Witness::Subset { rows },
                mode: self.config.mode.search_mode(),
                exact,
                label: "minimum subset sum".into(),
                stats: self.stats,
            },
        })
    }
}

fn l1(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).sum()
}

/// One-shot search with default settings for the chosen mode.
pub fn conjecture_min(n: u32, mode: ConjectureMode, seed: Option<u64>) -> Result<ConjectureResult> {
    let config = ConjectureConfig::new(n, mode).with_seed(seed.unwrap_or(0));
    ConjectureSearch::new(config)?.run()
}

/// Independent annealing chains, one per seed, reduced to the smallest value
/// (ties: smallest subset, then smallest seed).
pub fn anneal_seeds(config: &ConjectureConfig, seeds: &[u64]) -> Result<ConjectureResult> {
    if seeds.is_empty() {
        return Err(Error::domain("no seeds given"));
    }
    let mut config = config.clone();
    config.mode = ConjectureMode::Anneal;
    let runs: Vec<ConjectureResult> = seeds
        .par_iter()
        .map(|&seed| ConjectureSearch::new(config.clone().with_seed(seed))?.run())
        .collect::<Result<_>>()?;
    let mut stats = SearchStats::default();
    for r in &runs {
        stats.nodes += r.search.stats.nodes;
        stats.evaluations += r.search.stats.evaluations;
        stats.wall_ms = stats.wall_ms.max(r.search.stats.wall_ms);
    }
    let key = |r: &ConjectureResult| {
        let Witness::Subset { rows } = &r.search.witness else {
            unreachable!("conjecture witnesses are subsets")
        };
        (r.search.objective, rows.clone())
    };
    let mut best = runs
        .into_iter()
        .reduce(|a, b| if key(&b) < key(&a) { b } else { a })
        .expect("seeds is nonempty");
    best.search.stats = stats;
    Ok(best)
}
