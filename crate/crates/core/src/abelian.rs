//! Integer matrices, Hermite and Smith normal forms, and finitely generated
//! abelian groups in invariant-factor form.
//!
//! Conventions, fixed once for determinism:
//! - `hnf` is row style: `U * A = H` with `U` unimodular and `H` upper
//!   echelon, positive pivots, entries above each pivot reduced into
//!   `[0, pivot)`.
//! - `snf` returns `U * A * V = S` diagonal with nonnegative entries and the
//!   divisibility chain `d1 | d2 | ...`.
//! - Pivots are chosen by smallest nonzero absolute value (ties broken by
//!   position), which keeps intermediate entries small at this scale.

use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};

/// A dense matrix of arbitrary-precision integers, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix from a list of columns inside `Z^dim` (an empty list
    /// yields a `dim x 0` matrix).
    pub fn from_columns(dim: usize, columns: &[Vec<BigInt>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == dim), "ragged columns");
        let mut m = Self::zero(dim, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(r, k) * other.get(k, c);
                }
                m.set(r, c, acc);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * &v[c]).sum())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c).clone()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[a] -= q * row[b]
    fn row_sub(&mut self, a: usize, q: &BigInt, b: usize) {
        for c in 0..self.cols {
            let t = q * self.get(b, c);
            let v = self.get(a, c) - t;
            self.set(a, c, v);
        }
    }

    /// col[a] -= q * col[b]
    fn col_sub(&mut self, a: usize, q: &BigInt, b: usize) {
        for r in 0..self.rows {
            let t = q * self.get(r, b);
            let v = self.get(r, a) - t;
            self.set(r, a, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }

    /// Row Hermite normal form: returns `(H, U)` with `U` unimodular and
    /// `U * self = H`.
    pub fn hnf(&self) -> (IntMatrix, IntMatrix) {
        let mut h = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row >= self.rows {
                break;
            }
            loop {
                // smallest nonzero |entry| in this column at or below pivot_row
                let mut best: Option<(usize, BigInt)> = None;
                for r in pivot_row..self.rows {
                    let v = h.get(r, col);
                    if v.is_zero() {
                        continue;
                    }
                    let a = v.abs();
                    if best.as_ref().is_none_or(|(_, b)| a < *b) {
                        best = Some((r, a));
                    }
                }
                let Some((r, _)) = best else { break };
                h.swap_rows(pivot_row, r);
                u.swap_rows(pivot_row, r);
                let pivot = h.get(pivot_row, col).clone();
                let mut cleared = true;
                for r in pivot_row + 1..self.rows {
                    if h.get(r, col).is_zero() {
                        continue;
                    }
                    let q = h.get(r, col).div_floor(&pivot);
                    h.row_sub(r, &q, pivot_row);
                    u.row_sub(r, &q, pivot_row);
                    if !h.get(r, col).is_zero() {
                        cleared = false;
                    }
                }
                if cleared {
                    break;
                }
            }
            if h.get(pivot_row, col).is_zero() {
                continue;
            }
            if h.get(pivot_row, col).is_negative() {
                h.negate_row(pivot_row);
                u.negate_row(pivot_row);
            }
            let pivot = h.get(pivot_row, col).clone();
            for r in 0..pivot_row {
                let q = h.get(r, col).div_floor(&pivot);
                if !q.is_zero() {
                    h.row_sub(r, &q, pivot_row);
                    u.row_sub(r, &q, pivot_row);
                }
            }
            pivot_row += 1;
        }
        (h, u)
    }

    /// Smith normal form: returns `(S, U, V)` with `U, V` unimodular and
    /// `U * self * V = S`.
    pub fn snf(&self) -> (IntMatrix, IntMatrix, IntMatrix) {
        let mut s = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let k = self.rows.min(self.cols);

        let mut t = 0;
        while t < k {
            if !diagonal_step(&mut s, &mut u, &mut v, t) {
                break;
            }
            t += 1;
        }
        let rank = t;

        // positive diagonal
        for i in 0..rank {
            if s.get(i, i).is_negative() {
                s.negate_row(i);
                u.negate_row(i);
            }
        }

        // enforce the divisibility chain
        loop {
            let mut fixed = true;
            for i in 0..rank.saturating_sub(1) {
                let a = s.get(i, i).clone();
                let b = s.get(i + 1, i + 1).clone();
                if !(&b % &a).is_zero() {
                    // bring b into column i and rediagonalize the tail
                    let one = BigInt::one();
                    s.col_sub(i, &-&one, i + 1);
                    v.col_sub(i, &-&one, i + 1);
                    let mut tt = i;
                    while tt < rank {
                        if !diagonal_step(&mut s, &mut u, &mut v, tt) {
                            break;
                        }
                        tt += 1;
                    }
                    for j in i..rank {
                        if s.get(j, j).is_negative() {
                            s.negate_row(j);
                            u.negate_row(j);
                        }
                    }
                    fixed = false;
                    break;
                }
            }
            if fixed {
                break;
            }
        }
        (s, u, v)
    }

    /// Invariant-factor decomposition of `Z^rows / (column span of self)`.
    pub fn cokernel(&self) -> FgAbelianGroup {
        let (s, _, _) = self.snf();
        let k = self.rows.min(self.cols);
        let mut torsion = Vec::new();
        let mut rank = 0;
        for i in 0..k {
            let d = s.get(i, i);
            if d.is_zero() {
                break;
            }
            rank += 1;
            if !d.is_one() {
                torsion.push(d.clone());
            }
        }
        FgAbelianGroup::new(self.rows - rank, torsion)
    }

    /// Solves `self * x = b` over the integers. The particular solution is
    /// `None` when no integer solution exists; the kernel basis (columns) is
    /// always returned.
    pub fn solve_integer(&self, b: &[BigInt]) -> IntegerSolution {
        assert_eq!(b.len(), self.rows, "dimension mismatch");
        let (s, u, v) = self.snf();
        let ub = u.mul_vec(b);
        let k = self.rows.min(self.cols);
        let mut rank = 0;
        for i in 0..k {
            if s.get(i, i).is_zero() {
                break;
            }
            rank += 1;
        }
        let mut y = vec![BigInt::zero(); self.cols];
        let mut ok = true;
        for (i, ub_i) in ub.iter().enumerate() {
            if i < rank {
                let d = s.get(i, i);
                let (q, r) = ub_i.div_rem(d);
                if r.is_zero() {
                    y[i] = q;
                } else {
                    ok = false;
                    break;
                }
            } else if !ub_i.is_zero() {
                ok = false;
                break;
            }
        }
        let particular = ok.then(|| v.mul_vec(&y));
        let kernel_cols: Vec<Vec<BigInt>> = (rank..self.cols).map(|c| v.column(c)).collect();
        IntegerSolution {
            particular,
            kernel: IntMatrix::from_columns(self.cols, &kernel_cols),
        }
    }

    /// Basis (columns) of the integer kernel `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> IntMatrix {
        self.solve_integer(&vec![BigInt::zero(); self.rows]).kernel
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let (s, _, _) = self.snf();
        let k = self.rows.min(self.cols);
        (0..k).take_while(|&i| !s.get(i, i).is_zero()).count()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }
}

/// Clears row `t` and column `t` of `s` with pivoting by smallest nonzero
/// absolute value; returns false when the remaining block is zero.
fn diagonal_step(s: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix, t: usize) -> bool {
    loop {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for r in t..s.rows() {
            for c in t..s.cols() {
                let x = s.get(r, c);
                if x.is_zero() {
                    continue;
                }
                let a = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                    best = Some((r, c, a));
                }
            }
        }
        let Some((r, c, _)) = best else { return false };
        s.swap_rows(t, r);
        u.swap_rows(t, r);
        s.swap_cols(t, c);
        v.swap_cols(t, c);
        let mut dirty = false;
        let pivot = s.get(t, t).clone();
        for r in t + 1..s.rows() {
            if s.get(r, t).is_zero() {
                continue;
            }
            let q = round_div(s.get(r, t), &pivot);
            s.row_sub(r, &q, t);
            u.row_sub(r, &q, t);
            if !s.get(r, t).is_zero() {
                dirty = true;
            }
        }
        let pivot = s.get(t, t).clone();
        for c in t + 1..s.cols() {
            if s.get(t, c).is_zero() {
                continue;
            }
            let q = round_div(s.get(t, c), &pivot);
            s.col_sub(c, &q, t);
            v.col_sub(c, &q, t);
            if !s.get(t, c).is_zero() {
                dirty = true;
            }
        }
        if !dirty {
            let row_clear = (t + 1..s.cols()).all(|c| s.get(t, c).is_zero());
            let col_clear = (t + 1..s.rows()).all(|r| s.get(r, t).is_zero());
            if row_clear && col_clear {
                return true;
            }
        }
    }
}

/// Quotient rounded to nearest (ties toward the floor side), so the
/// remainder magnitude is at most |b|/2.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let q = a.div_floor(b);
    let r = a - &q * b;
    if BigInt::from(2) * &r > b.abs() {
        q + 1
    } else {
        q
    }
}

/// An integral solve result: one witness (if any) plus a kernel basis.
#[derive(Debug, Clone)]
pub struct IntegerSolution {
    pub particular: Option<Vec<BigInt>>,
    pub kernel: IntMatrix,
}

/// A finitely generated abelian group in invariant-factor form:
/// `Z^free_rank + Z/d1 + ... + Z/dk` with `d1 | d2 | ... `, each `di >= 2`.
/// The representation is unique for the isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    /// Normalizes any list of moduli (entries `>= 1`) into invariant-factor
    /// form.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        let mut factors: Vec<BigInt> = torsion.into_iter().filter(|d| !d.is_one()).collect();
        assert!(
            factors.iter().all(|d| *d >= BigInt::from(2)),
            "torsion moduli must be >= 1"
        );
        // pairwise gcd/lcm passes until the divisibility chain holds
        loop {
            factors.sort();
            let mut changed = false;
            for i in 0..factors.len() {
                for j in i + 1..factors.len() {
                    if !(&factors[j] % &factors[i]).is_zero() {
                        let g = factors[i].gcd(&factors[j]);
                        let l = factors[i].lcm(&factors[j]);
                        factors[i] = g;
                        factors[j] = l;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        factors.retain(|d| !d.is_one());
        FgAbelianGroup {
            free_rank,
            torsion: factors,
        }
    }

    pub fn trivial() -> Self {
        FgAbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Group order, when finite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion.iter().product())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        FgAbelianGroup::new(self.free_rank + other.free_rank, torsion)
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::combinations;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn is_row_hnf(h: &IntMatrix) -> bool {
        // upper echelon with positive pivots and reduced entries above
        let mut last_col: i64 = -1;
        let mut pivots = Vec::new();
        for r in 0..h.rows() {
            let pivot_col = (0..h.cols()).find(|&c| !h.get(r, c).is_zero());
            match pivot_col {
                None => {
                    if (r + 1..h.rows()).any(|r2| (0..h.cols()).any(|c| !h.get(r2, c).is_zero())) {
                        return false;
                    }
                    break;
                }
                Some(c) => {
                    if (c as i64) <= last_col || h.get(r, c).is_negative() {
                        return false;
                    }
                    last_col = c as i64;
                    pivots.push((r, c));
                }
            }
        }
        for &(r, c) in &pivots {
            let p = h.get(r, c);
            for r2 in 0..r {
                let v = h.get(r2, c);
                if v.is_negative() || v >= p {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn hnf_examples() {
        let (h, u) = m(&[vec![0, 1], vec![1, 0]]).hnf();
        assert_eq!(h, IntMatrix::identity(2));
        assert!(u.is_unimodular());

        let a = m(&[vec![2, 0], vec![0, 3]]);
        let (h, _) = a.hnf();
        assert_eq!(h, a);

        let a = m(&[vec![2, 4], vec![1, 3]]);
        let (h, u) = a.hnf();
        assert_eq!(u.mul(&a), h);
        assert!(u.is_unimodular());
        // pivots 1 and 2; the entry above the second pivot reduces to 1
        assert_eq!(h, m(&[vec![1, 1], vec![0, 2]]));
    }

    #[test]
    fn hnf_example_matches_exhaustive_oracle() {
        // oracle: over all unimodular U with entries in [-3, 3], exactly one
        // U*A is in row HNF shape (echelon, positive pivots, reduced above)
        let a = m(&[vec![2, 4], vec![1, 3]]);
        let mut found = Vec::new();
        for p in -3i64..=3 {
            for q in -3i64..=3 {
                for r in -3i64..=3 {
                    for s in -3i64..=3 {
                        if (p * s - q * r).abs() != 1 {
                            continue;
                        }
                        let u = m(&[vec![p, q], vec![r, s]]);
                        let ua = u.mul(&a);
                        if is_row_hnf(&ua) && !found.contains(&ua) {
                            found.push(ua);
                        }
                    }
                }
            }
        }
        assert_eq!(found, vec![m(&[vec![1, 1], vec![0, 2]])]);
    }

    #[test]
    fn hnf_idempotent() {
        let a = m(&[vec![6, 2, 8], vec![3, 9, 1], vec![4, 4, 4]]);
        let (h, _) = a.hnf();
        let (h2, _) = h.hnf();
        assert_eq!(h, h2);
    }

    /// Coset enumeration for a diagonal generator matrix: quotient of
    /// `Z^n` by the span of `diag(d1..dn)` is the product of `Z/di`.
    fn diagonal_quotient_orders(diag: &[i64]) -> (usize, bool) {
        let order: i64 = diag.iter().product();
        let mut elements = Vec::new();
        let mut idx = vec![0i64; diag.len()];
        loop {
            elements.push(idx.clone());
            let mut i = 0;
            loop {
                if i == diag.len() {
                    let order_of = |e: &Vec<i64>| -> i64 {
                        (1..=order)
                            .find(|k| e.iter().zip(diag).all(|(x, d)| (k * x) % d == 0))
                            .unwrap()
                    };
                    let cyclic = elements.iter().any(|e| order_of(e) == order);
                    return (elements.len(), cyclic);
                }
                idx[i] += 1;
                if idx[i] < diag[i] {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn snf_diag_2_3() {
        // oracle: the 6 cosets of Z^2 / <(2,0),(0,3)> form a cyclic group
        let (count, cyclic) = diagonal_quotient_orders(&[2, 3]);
        assert_eq!(count, 6);
        assert!(cyclic);
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let (s, u, v) = a.snf();
        assert_eq!(u.mul(&a).mul(&v), s);
        assert_eq!(s, m(&[vec![1, 0], vec![0, 6]]));
    }

    #[test]
    fn snf_identity_fixed() {
        let a = IntMatrix::identity(3);
        let (s, _, _) = a.snf();
        assert_eq!(s, a);
    }

    #[test]
    fn snf_diag_2_2() {
        // oracle: Z^2 / <(2,0),(0,2)> has order 4 and exponent 2, so not cyclic
        let (count, cyclic) = diagonal_quotient_orders(&[2, 2]);
        assert_eq!(count, 4);
        assert!(!cyclic);
        let a = m(&[vec![2, 0], vec![0, 2]]);
        let (s, _, _) = a.snf();
        assert_eq!(s, m(&[vec![2, 0], vec![0, 2]]));
    }

    #[test]
    fn cokernel_examples() {
        // columns (2,0) and (0,3)
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let g = a.cokernel();
        assert_eq!(g.free_rank(), 0);
        assert_eq!(g.torsion(), &[BigInt::from(6)]);

        let a = m(&[vec![1], vec![0]]);
        let g = a.cokernel();
        assert_eq!(g.free_rank(), 1);
        assert!(g.torsion().is_empty());

        let a = IntMatrix::zero(2, 0);
        let g = a.cokernel();
        assert_eq!(g.free_rank(), 2);
        assert!(g.torsion().is_empty());
    }

    #[test]
    fn solve_integer_examples() {
        let a = m(&[vec![2]]);
        let sol = a.solve_integer(&[BigInt::from(4)]);
        assert_eq!(sol.particular, Some(vec![BigInt::from(2)]));
        assert_eq!(sol.kernel.cols(), 0);

        let sol = a.solve_integer(&[BigInt::from(3)]);
        assert!(sol.particular.is_none());

        let a = m(&[vec![1, 1]]);
        let sol = a.solve_integer(&[BigInt::zero()]);
        let x = sol.particular.unwrap();
        assert_eq!(&x[0] + &x[1], BigInt::zero());
        assert_eq!(sol.kernel.cols(), 1);
        let k = sol.kernel.column(0);
        assert_eq!(&k[0] + &k[1], BigInt::zero());
        assert!(!k[0].is_zero());
    }

    /// Independent oracle for invariant factors: `d_k = D_k / D_{k-1}` where
    /// `D_k` is the gcd of all k x k minors.
    fn minor_gcd_invariants(a: &IntMatrix) -> Vec<BigInt> {
        let maxk = a.rows().min(a.cols());
        let mut prev = BigInt::one();
        let mut out = Vec::new();
        for k in 1..=maxk {
            let mut g = BigInt::zero();
            for rows in combinations(a.rows(), k) {
                for cols in combinations(a.cols(), k) {
                    let mut sub = IntMatrix::zero(k, k);
                    for (i, &r) in rows.iter().enumerate() {
                        for (j, &c) in cols.iter().enumerate() {
                            sub.set(i, j, a.get(r, c).clone());
                        }
                    }
                    g = g.gcd(&sub.det());
                }
            }
            if g.is_zero() {
                break;
            }
            out.push(&g / &prev);
            prev = g;
        }
        out
    }

    #[test]
    fn snf_matches_minor_gcd_oracle() {
        let cases = [
            m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]),
            m(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]),
            m(&[vec![0, 0], vec![0, 0]]),
            m(&[vec![3, 1, -2], vec![5, -1, 4]]),
        ];
        for a in cases {
            let (s, u, v) = a.snf();
            assert_eq!(u.mul(&a).mul(&v), s);
            assert!(u.is_unimodular());
            assert!(v.is_unimodular());
            let oracle = minor_gcd_invariants(&a);
            let got: Vec<BigInt> = (0..a.rows().min(a.cols()))
                .map(|i| s.get(i, i).clone())
                .take_while(|d| !d.is_zero())
                .collect();
            assert_eq!(got, oracle);
        }
    }

    #[test]
    fn group_normalization_and_display() {
        let g = FgAbelianGroup::new(1, vec![BigInt::from(3), BigInt::from(2)]);
        assert_eq!(g.torsion(), &[BigInt::from(6)]);
        assert_eq!(g.to_string(), "Z + Z/6");
        assert_eq!(FgAbelianGroup::trivial().to_string(), "0");
        let h = FgAbelianGroup::new(0, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(h.to_string(), "Z/2 + Z/4");
        assert_eq!(h.order(), Some(BigInt::from(8)));
        // (Z + Z/6) + (Z/2 + Z/4): primary parts 2,2,4 and 3 regroup as 2 | 2 | 12
        let s = g.direct_sum(&h);
        assert_eq!(s.free_rank(), 1);
        assert_eq!(
            s.torsion(),
            &[BigInt::from(2), BigInt::from(2), BigInt::from(12)]
        );
    }
}
