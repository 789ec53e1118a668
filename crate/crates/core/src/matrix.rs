//! ±1 matrices: Sylvester construction, Hadamard validation, enumeration,
//! a small catalog of representatives and the equivalence operations.
//!
//! Entries are packed one sign bit per column (set bit = −1), one row after
//! another, so row inner products reduce to `order - 2 * popcount(a ^ b)`.
//! Public indices are 1-based; the `*_0` helpers are 0-based.

use std::fmt;

use crate::{Budget, Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    order: usize,
    words: usize,
    bits: Vec<u64>,
}

impl SignMatrix {
    /// The all-`+1` matrix.
    pub fn ones(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::domain("matrix order must be at least 1"));
        }
        let words = order.div_ceil(WORD);
        Ok(SignMatrix {
            order,
            words,
            bits: vec![0; order * words],
        })
    }

    /// Builds a matrix from a 0-based entry function returning `+1` or `-1`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> i8) -> Result<Self> {
        let mut m = Self::ones(order)?;
        for k in 0..order {
            for i in 0..order {
                match f(k, i) {
                    1 => {}
                    -1 => m.flip_0(k, i),
                    v => {
                        return Err(Error::domain(format!(
                            "entry ({}, {}) is {v}, expected +1 or -1",
                            k + 1,
                            i + 1
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let order = rows.len();
        if let Some((k, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != order) {
            return Err(Error::domain(format!(
                "row {} has {} entries, expected {order}",
                k + 1,
                row.len()
            )));
        }
        Self::from_fn(order, |k, i| rows[k][i])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry `(k, i)`, both 1-based.
    pub fn entry(&self, k: usize, i: usize) -> Result<i8> {
        check_index("row", k, self.order)?;
        check_index("column", i, self.order)?;
        Ok(self.get_0(k - 1, i - 1))
    }

    #[inline]
    pub fn get_0(&self, k: usize, i: usize) -> i8 {
        if self.bits[k * self.words + i / WORD] >> (i % WORD) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    #[inline]
    fn flip_0(&mut self, k: usize, i: usize) {
        self.bits[k * self.words + i / WORD] ^= 1 << (i % WORD);
    }

    /// Packed sign bits of row `k` (0-based).
    #[inline]
    pub fn row_bits_0(&self, k: usize) -> &[u64] {
        &self.bits[k * self.words..(k + 1) * self.words]
    }

    pub fn row_0(&self, k: usize) -> Vec<i8> {
        (0..self.order).map(|i| self.get_0(k, i)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<i8>> {
        (0..self.order).map(|k| self.row_0(k)).collect()
    }

    /// Inner product of rows `a` and `b` (0-based).
    #[inline]
    pub fn row_dot_0(&self, a: usize, b: usize) -> i64 {
        let differ: u32 = self
            .row_bits_0(a)
            .iter()
            .zip(self.row_bits_0(b))
            .map(|(x, y)| (x ^ y).count_ones())
            .sum();
        self.order as i64 - 2 * i64::from(differ)
    }

    /// `acc[i] += sign * entry(k, i)` for every column (0-based row).
    #[inline]
    pub fn add_row_into_0(&self, k: usize, sign: i64, acc: &mut [i64]) {
        debug_assert_eq!(acc.len(), self.order);
        for (w, chunk) in self.row_bits_0(k).iter().zip(acc.chunks_mut(WORD)) {
            for (b, a) in chunk.iter_mut().enumerate() {
                *a += sign - 2 * sign * ((w >> b) & 1) as i64;
            }
        }
    }

    pub fn transpose(&self) -> SignMatrix {
        let mut t = self.clone();
        for k in 0..self.order {
            for i in 0..self.order {
                if self.get_0(k, i) != t.get_0(i, k) {
                    t.flip_0(i, k);
                }
            }
        }
        t
    }

    /// `[[M, M], [M, -M]]`.
    pub fn doubled(&self) -> SignMatrix {
        let n = self.order;
        Self::from_fn(2 * n, |k, i| {
            let v = self.get_0(k % n, i % n);
            if k >= n && i >= n {
                -v
            } else {
                v
            }
        })
        .expect("doubling preserves signs")
    }

    /// Writes the text format: an `order n` line then `n` rows of `+1`/`-1`.
    pub fn to_text(&self) -> String {
        let mut out = format!("order {}\n", self.order);
        for k in 0..self.order {
            let row: Vec<&str> = (0..self.order)
                .map(|i| if self.get_0(k, i) == 1 { "+1" } else { "-1" })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(no, l)| (no + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let order: usize = header
            .strip_prefix("order")
            .and_then(|rest| rest.trim().parse().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Parse {
                line,
                msg: format!("expected \"order <n>\", found {header:?}"),
            })?;
        let mut rows = Vec::with_capacity(order);
        for (line, text) in lines {
            if rows.len() == order {
                return Err(Error::Parse {
                    line,
                    msg: format!("more than {order} rows"),
                });
            }
            let row = text
                .split_whitespace()
                .map(|tok| match tok {
                    "+1" | "1" => Ok(1i8),
                    "-1" => Ok(-1),
                    _ => Err(Error::Parse {
                        line,
                        msg: format!("bad entry {tok:?}"),
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != order {
                return Err(Error::Parse {
                    line,
                    msg: format!("row has {} entries, expected {order}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != order {
            return Err(Error::Parse {
                line: text.lines().count(),
                msg: format!("found {} rows, expected {order}", rows.len()),
            });
        }
        Self::from_rows(&rows)
    }
}

impl fmt::Display for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignMatrix ")?;
        f.debug_list().entries(self.rows()).finish()
    }
}

fn check_index(what: &'static str, index: usize, max: usize) -> Result<()> {
    if (1..=max).contains(&index) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { what, index, max })
    }
}

fn sylvester_order(n: u32) -> Result<usize> {
    if n >= usize::BITS - 1 {
        return Err(Error::domain(format!("Sylvester exponent {n} is too large")));
    }
    Ok(1usize << n)
}

/// Entry `(k, i)` of `S^(n)` (1-based), from the bit form
/// `(-1)^popcount((k-1) & (i-1))`.
pub fn sylvester_entry(n: u32, k: usize, i: usize) -> Result<i8> {
    let order = sylvester_order(n)?;
    check_index("row", k, order)?;
    check_index("column", i, order)?;
    Ok(sylvester_sign_0(k - 1, i - 1))
}

#[inline]
pub(crate) fn sylvester_sign_0(k: usize, i: usize) -> i8 {
    if (k & i).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `S^(n)` of order `2^n`, built by repeated block doubling from `[+1]`.
pub fn sylvester_matrix(n: u32, budget: &Budget) -> Result<SignMatrix> {
    let order = sylvester_order(n)?;
    budget.check_entries("Sylvester matrix", order as u128 * order as u128)?;
    let mut m = SignMatrix::ones(1)?;
    for _ in 0..n {
        m = m.doubled();
    }
    Ok(m)
}

/// A matrix whose rows and columns have been checked pairwise orthogonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardWitness {
    matrix: SignMatrix,
}

impl HadamardWitness {
    pub fn matrix(&self) -> &SignMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> SignMatrix {
        self.matrix
    }

    pub fn order(&self) -> usize {
        self.matrix.order
    }

    /// Always `true`: a witness only exists after validation.
    pub fn verified(&self) -> bool {
        true
    }
}

fn first_non_orthogonal(m: &SignMatrix) -> Option<(usize, usize, i64)> {
    (0..m.order).find_map(|a| {
        (a + 1..m.order).find_map(|b| {
            let d = m.row_dot_0(a, b);
            (d != 0).then_some((a + 1, b + 1, d))
        })
    })
}

/// `sum_k (sum_i h_ki b_i)^2 == n * sum_i b_i^2` for integer `b`.
pub fn parseval_holds(m: &SignMatrix, beta: &[i64]) -> bool {
    let n = m.order;
    assert_eq!(beta.len(), n);
    let lhs: i128 = (0..n)
        .map(|k| {
            let s: i128 = (0..n)
                .map(|i| i128::from(m.get_0(k, i)) * i128::from(beta[i]))
                .sum();
            s * s
        })
        .sum();
    let rhs: i128 = n as i128 * beta.iter().map(|&b| i128::from(b) * i128::from(b)).sum::<i128>();
    lhs == rhs
}

pub fn validate_hadamard(m: &SignMatrix) -> Result<HadamardWitness> {
    if let Some((a, b, product)) = first_non_orthogonal(m) {
        return Err(Error::NotHadamard {
            kind: "row",
            a,
            b,
            product,
        });
    }
    if let Some((a, b, product)) = first_non_orthogonal(&m.transpose()) {
        return Err(Error::NotHadamard {
            kind: "column",
            a,
            b,
            product,
        });
    }
    let beta: Vec<i64> = (1..=m.order as i64).collect();
    if !parseval_holds(m, &beta) {
        return Err(Error::domain("Parseval identity failed on beta_i = i"));
    }
    Ok(HadamardWitness { matrix: m.clone() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    /// All `2^(n^2)` sign patterns; orders 1, 2 and 4.
    Exhaustive,
    /// Row-by-row search keeping each new row orthogonal to the previous ones; orders up to 16.
    Backtracking,
}

/// Every order-`n` matrix with pairwise orthogonal rows, once each, in
/// lexicographic row order (`+1` before `-1`, first column most significant).
pub fn enumerate_hadamard(order: usize, mode: EnumerationMode) -> Result<HadamardStream> {
    match mode {
        EnumerationMode::Exhaustive if ![1, 2, 4].contains(&order) => {
            return Err(Error::domain(format!(
                "exhaustive enumeration supports orders 1, 2, 4; got {order}"
            )))
        }
        EnumerationMode::Backtracking if !(1..=16).contains(&order) => {
            return Err(Error::domain(format!(
                "backtracking enumeration supports orders 1..=16; got {order}"
            )))
        }
        _ => {}
    }
    let possible = order <= 2 || order % 4 == 0;
    Ok(HadamardStream {
        order,
        mode,
        done: !possible,
        next_mask: 0,
        rows: Vec::with_capacity(order),
        cursor: vec![0; order + 1],
    })
}

/// Lazy single-consumer stream returned by [`enumerate_hadamard`].
#[derive(Debug, Clone)]
pub struct HadamardStream {
    order: usize,
    mode: EnumerationMode,
    done: bool,
    next_mask: u64,
    rows: Vec<u32>,
    cursor: Vec<u32>,
}

impl HadamardStream {
    fn row_mask(&self) -> u32 {
        ((1u64 << self.order) - 1) as u32
    }

    fn orthogonal(&self, a: u32, b: u32) -> bool {
        2 * ((a ^ b) & self.row_mask()).count_ones() as usize == self.order
    }

    fn build(&self, rows: &[u32]) -> SignMatrix {
        let n = self.order;
        SignMatrix::from_fn(n, |k, i| if rows[k] >> (n - 1 - i) & 1 == 1 { -1 } else { 1 })
            .expect("rows are sign patterns")
    }

    fn next_exhaustive(&mut self) -> Option<SignMatrix> {
        let n = self.order;
        let total = 1u64 << (n * n);
        while self.next_mask < total {
            let mask = self.next_mask;
            self.next_mask += 1;
            let rows: Vec<u32> = (0..n)
                .map(|k| ((mask >> (n * (n - 1 - k))) as u32) & self.row_mask())
                .collect();
            let ok = (0..n).all(|a| (a + 1..n).all(|b| self.orthogonal(rows[a], rows[b])));
            if ok {
                return Some(self.build(&rows));
            }
        }
        self.done = true;
        None
    }

    fn next_backtracking(&mut self) -> Option<SignMatrix> {
        let n = self.order;
        let limit = 1u64 << n;
        loop {
            let depth = self.rows.len();
            if depth == n {
                let out = self.build(&self.rows);
                self.rows.pop();
                return Some(out);
            }
            let start = u64::from(self.cursor[depth]);
            let found = (start..limit)
                .map(|c| c as u32)
                .find(|&c| self.rows.iter().all(|&r| self.orthogonal(r, c)));
            match found {
                Some(c) => {
                    self.rows.push(c);
                    self.cursor[depth] = c + 1;
                    self.cursor[depth + 1] = 0;
                }
                None => {
                    if depth == 0 {
                        self.done = true;
                        return None;
                    }
                    self.rows.pop();
                }
            }
        }
    }
}

impl Iterator for HadamardStream {
    type Item = SignMatrix;

    fn next(&mut self) -> Option<SignMatrix> {
        if self.done {
            return None;
        }
        match self.mode {
            EnumerationMode::Exhaustive => self.next_exhaustive(),
            EnumerationMode::Backtracking => self.next_backtracking(),
        }
    }
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Construction {
    Sylvester(u32),
    Paley(usize),
    Doubling(Box<Construction>),
}

fn plan(order: usize) -> Option<Construction> {
    if order == 0 {
        return None;
    }
    if order.is_power_of_two() {
        return Some(Construction::Sylvester(order.trailing_zeros()));
    }
    if order % 2 == 0 {
        if let Some(half) = plan(order / 2) {
            return Some(Construction::Doubling(Box::new(half)));
        }
    }
    let q = order - 1;
    (q % 4 == 3 && is_prime(q)).then_some(Construction::Paley(q))
}

/// Paley type I matrix of order `q + 1` for a prime `q ≡ 3 (mod 4)`.
pub fn paley_i(q: usize) -> Result<SignMatrix> {
    if q % 4 != 3 || !is_prime(q) {
        return Err(Error::domain(format!(
            "Paley I needs a prime q = 3 (mod 4); got {q}"
        )));
    }
    let mut residue = vec![false; q];
    for x in 1..q {
        residue[x * x % q] = true;
    }
    let chi = |d: usize| if residue[d % q] { 1i8 } else { -1 };
    SignMatrix::from_fn(q + 1, |k, i| match (k, i) {
        (0, _) => 1,
        (_, 0) => -1,
        _ if k == i => 1,
        _ => chi(i + q - k),
    })
}

const IMPLEMENTED_ORDERS: &str =
    "powers of two (Sylvester), q+1 for primes q = 3 mod 4 (Paley I), and doublings of these";

/// One validated Hadamard matrix of the requested order.
pub fn catalog_representative(order: usize) -> Result<SignMatrix> {
    fn build(c: &Construction) -> Result<SignMatrix> {
        match c {
            Construction::Sylvester(n) => sylvester_matrix(*n, &Budget::unlimited()),
            Construction::Paley(q) => paley_i(*q),
            Construction::Doubling(inner) => Ok(build(inner)?.doubled()),
        }
    }
    let c = plan(order).ok_or_else(|| Error::UnsupportedOrder {
        order,
        implemented: IMPLEMENTED_ORDERS.into(),
    })?;
    let m = build(&c)?;
    validate_hadamard(&m)?;
    Ok(m)
}

/// Orders up to `max` that [`catalog_representative`] can build.
pub fn catalog_orders(max: usize) -> Vec<usize> {
    (1..=max).filter(|&n| plan(n).is_some()).collect()
}

/// Equivalence operations. Indices and permutations are 1-based; a
/// permutation `p` places old row (column) `p[k]` at position `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transform {
    NegateRow(usize),
    NegateCol(usize),
    PermuteRows(Vec<usize>),
    PermuteCols(Vec<usize>),
    Transpose,
}

fn check_permutation(p: &[usize], order: usize) -> Result<()> {
    if p.len() != order {
        return Err(Error::domain(format!(
            "permutation has length {}, expected {order}",
            p.len()
        )));
    }
    let mut seen = vec![false; order];
    for &v in p {
        if !(1..=order).contains(&v) || std::mem::replace(&mut seen[v - 1], true) {
            return Err(Error::domain(format!(
                "{p:?} is not a permutation of 1..={order}"
            )));
        }
    }
    Ok(())
}

pub fn transform(m: &SignMatrix, op: &Transform) -> Result<SignMatrix> {
    let n = m.order;
    match op {
        Transform::NegateRow(k) => {
            check_index("row", *k, n)?;
            SignMatrix::from_fn(n, |r, i| if r == k - 1 { -m.get_0(r, i) } else { m.get_0(r, i) })
        }
        Transform::NegateCol(c) => {
            check_index("column", *c, n)?;
            SignMatrix::from_fn(n, |r, i| if i == c - 1 { -m.get_0(r, i) } else { m.get_0(r, i) })
        }
        Transform::PermuteRows(p) => {
            check_permutation(p, n)?;
            SignMatrix::from_fn(n, |r, i| m.get_0(p[r] - 1, i))
        }
        Transform::PermuteCols(p) => {
            check_permutation(p, n)?;
            SignMatrix::from_fn(n, |r, i| m.get_0(r, p[i] - 1))
        }
        Transform::Transpose => Ok(m.transpose()),
    }
}
