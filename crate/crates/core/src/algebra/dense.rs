//! Dense integer matrices and Smith normal form with transform tracking.
//!
//! Dense storage is only used for the small residual matrices left after
//! sparse unit-pivot elimination, for presentation matrices of small abelian
//! groups, and for the public `snf` entry point.

use std::fmt;

use serde::Serialize;

use crate::integer::Int;

#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    /// Row-major.
    data: Vec<Int>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix {
            rows,
            cols,
            data: vec![Int::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Int>], cols: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            m.data[i * cols..(i + 1) * cols].clone_from_slice(r);
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> DenseMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Int>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Int::from(x)).collect())
            .collect();
        DenseMatrix::from_rows(&rows, cols)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(n_rows: usize, cols: &[Vec<Int>]) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(n_rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n_rows);
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x.clone());
                }
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Int::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cell = &mut out.data[i * other.cols + j];
                        *cell += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Int::ZERO;
                for (a, b) in self.row(i).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        s += &(a * b);
                    }
                }
                s
            })
            .collect()
    }

    /// Columns `range` as a new matrix.
    pub fn column_block(&self, from: usize, to: usize) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, to - from);
        for i in 0..self.rows {
            for j in from..to {
                out.set(i, j - from, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn row_block(&self, from: usize, to: usize) -> DenseMatrix {
        DenseMatrix {
            rows: to - from,
            cols: self.cols,
            data: self.data[from * self.cols..to * self.cols].to_vec(),
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut out = DenseMatrix::zeros(self.rows, cols);
        for i in 0..self.rows {
            out.data[i * cols..i * cols + self.cols].clone_from_slice(self.row(i));
            out.data[i * cols + self.cols..(i + 1) * cols].clone_from_slice(other.row(i));
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = s * c;
                self.data[dst * self.cols + j] += &v;
            }
        }
    }

    /// `col[dst] += c * col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let v = s * c;
                self.data[i * self.cols + dst] += &v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self.data[r * self.cols + j];
            self.data[r * self.cols + j] = v;
        }
    }
}

/// Smith form `U·A·V = diag(d_0, …, d_{r-1}, 0, …)` with `d_i | d_{i+1}`,
/// all `d_i > 0`. Transforms are present only when requested.
#[derive(Clone, Debug)]
pub struct DenseSnf {
    pub diag: Vec<Int>,
    pub u: Option<DenseMatrix>,
    pub u_inv: Option<DenseMatrix>,
    pub v: Option<DenseMatrix>,
    pub v_inv: Option<DenseMatrix>,
}

impl DenseSnf {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

struct Tracker {
    a: DenseMatrix,
    u: Option<(DenseMatrix, DenseMatrix)>,
    v: Option<(DenseMatrix, DenseMatrix)>,
}

impl Tracker {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some((u, ui)) = &mut self.u {
            u.swap_rows(i, j);
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some((v, vi)) = &mut self.v {
            v.swap_cols(i, j);
            vi.swap_rows(i, j);
        }
    }

    /// `row[dst] += c * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, c: &Int) {
        self.a.add_row(dst, src, c);
        if let Some((u, ui)) = &mut self.u {
            u.add_row(dst, src, c);
            ui.add_col(src, dst, &-c);
        }
    }

    /// `col[dst] += c * col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, c: &Int) {
        self.a.add_col(dst, src, c);
        if let Some((v, vi)) = &mut self.v {
            v.add_col(dst, src, c);
            vi.add_row(src, dst, &-c);
        }
    }

    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        if let Some((u, ui)) = &mut self.u {
            u.negate_row(r);
            for i in 0..ui.rows {
                let v = -ui.get(i, r);
                ui.set(i, r, v);
            }
        }
    }
}

pub fn smith_dense(a: &DenseMatrix, track_u: bool, track_v: bool) -> DenseSnf {
    let (m, n) = (a.rows, a.cols);
    let mut t = Tracker {
        a: a.clone(),
        u: track_u.then(|| (DenseMatrix::identity(m), DenseMatrix::identity(m))),
        v: track_v.then(|| (DenseMatrix::identity(n), DenseMatrix::identity(n))),
    };
    let mut diag = Vec::new();
    let mut p = 0;
    while p < m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        'search: for i in p..m {
            for j in p..n {
                let x = t.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.cmp_abs(t.a.get(bi, bj)).is_lt(),
                };
                if better {
                    best = Some((i, j));
                    if x.is_unit() {
                        break 'search;
                    }
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        t.swap_rows(p, bi);
        t.swap_cols(p, bj);
        loop {
            let piv = t.a.get(p, p).clone();
            let mut residue: Option<(usize, usize)> = None;
            for i in p + 1..m {
                let x = t.a.get(i, p);
                if x.is_zero() {
                    continue;
                }
                let q = x.div_round(&piv);
                t.add_row(i, p, &-q);
                let r = t.a.get(i, p);
                if !r.is_zero() && residue.is_none_or(|(ri, rj)| r.cmp_abs(t.a.get(ri, rj)).is_lt())
                {
                    residue = Some((i, p));
                }
            }
            for j in p + 1..n {
                let x = t.a.get(p, j);
                if x.is_zero() {
                    continue;
                }
                let q = x.div_round(&piv);
                t.add_col(j, p, &-q);
                let r = t.a.get(p, j);
                if !r.is_zero() && residue.is_none_or(|(ri, rj)| r.cmp_abs(t.a.get(ri, rj)).is_lt())
                {
                    residue = Some((p, j));
                }
            }
            if let Some((ri, rj)) = residue {
                // a smaller remainder appeared in the pivot row/column
                t.swap_rows(p, ri);
                t.swap_cols(p, rj);
                continue;
            }
            // row and column are clear; enforce divisibility of the rest
            let mut offending = None;
            'div: for i in p + 1..m {
                for j in p + 1..n {
                    if !t.a.get(i, j).is_divisible_by(&piv) {
                        offending = Some(i);
                        break 'div;
                    }
                }
            }
            match offending {
                Some(i) => t.add_row(p, i, &Int::ONE),
                None => break,
            }
        }
        if t.a.get(p, p).is_negative() {
            t.negate_row(p);
        }
        diag.push(t.a.get(p, p).clone());
        p += 1;
    }
    let (u, u_inv) = match t.u {
        Some((u, ui)) => (Some(u), Some(ui)),
        None => (None, None),
    };
    let (v, v_inv) = match t.v {
        Some((v, vi)) => (Some(v), Some(vi)),
        None => (None, None),
    };
    DenseSnf {
        diag,
        u,
        u_inv,
        v,
        v_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(a: &DenseMatrix) -> DenseSnf {
        let s = smith_dense(a, true, true);
        let (u, ui, v, vi) = (
            s.u.as_ref().unwrap(),
            s.u_inv.as_ref().unwrap(),
            s.v.as_ref().unwrap(),
            s.v_inv.as_ref().unwrap(),
        );
        assert!(u.mul(ui).is_identity());
        assert!(v.mul(vi).is_identity());
        let d = u.mul(a).mul(v);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j && i < s.diag.len() {
                    s.diag[i].clone()
                } else {
                    Int::ZERO
                };
                assert_eq!(d.get(i, j), &expect, "entry ({i},{j}) of U·A·V");
            }
        }
        for w in s.diag.windows(2) {
            assert!(w[1].is_divisible_by(&w[0]));
        }
        assert!(s.diag.iter().all(|x| !x.is_negative() && !x.is_zero()));
        s
    }

    #[test]
    fn small_cases() {
        let s = check(&DenseMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.diag, vec![Int::from(2), Int::from(4)]);
        let s = check(&DenseMatrix::zeros(3, 2));
        assert!(s.diag.is_empty());
        let s = check(&DenseMatrix::identity(3));
        assert_eq!(s.diag, vec![Int::ONE; 3]);
        let s = check(&DenseMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diag, vec![Int::ONE, Int::from(6)]);
    }

    proptest! {
        #[test]
        fn random_matrices(rows in 0usize..6, cols in 0usize..6, seed in proptest::collection::vec(-9i64..10, 36)) {
            let data: Vec<Vec<Int>> = (0..rows).map(|i| (0..cols).map(|j| Int::from(seed[i * 6 + j])).collect()).collect();
            let a = DenseMatrix::from_rows(&data, cols);
            let s = check(&a);
            let st = smith_dense(&a.transpose(), false, false);
            prop_assert_eq!(s.diag, st.diag);
        }
    }
}
