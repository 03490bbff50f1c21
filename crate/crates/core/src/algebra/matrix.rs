//! Sparse integer matrices stored by column.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::dense::{smith_dense, DenseMatrix};
use crate::integer::Int;

/// Column-compressed sparse matrix; each column is sorted by row and holds
/// no explicit zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: Vec<Vec<(u32, Int)>>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "IntMatrix {}x{} {:?}",
            self.rows,
            self.cols.len(),
            self.triplets()
        )
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        IntMatrix {
            rows: n,
            cols: (0..n).map(|i| vec![(i as u32, Int::ONE)]).collect(),
        }
    }

    /// Builds from unsorted columns; duplicate entries are summed and zeros dropped.
    pub fn from_columns(rows: usize, cols: Vec<Vec<(u32, Int)>>) -> IntMatrix {
        let cols = cols.into_iter().map(normalize_column).collect::<Vec<_>>();
        debug_assert!(cols
            .iter()
            .all(|c| c.iter().all(|(r, _)| (*r as usize) < rows)));
        IntMatrix { rows, cols }
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Int)>,
    ) -> IntMatrix {
        let mut cs = vec![Vec::new(); cols];
        for (i, j, v) in entries {
            assert!(i < rows && j < cols, "triplet ({i},{j}) out of range");
            cs[j].push((i as u32, v));
        }
        IntMatrix::from_columns(rows, cs)
    }

    pub fn from_dense(d: &DenseMatrix) -> IntMatrix {
        IntMatrix::from_triplets(
            d.rows(),
            d.cols(),
            (0..d.rows())
                .flat_map(|i| (0..d.cols()).map(move |j| (i, j)))
                .filter_map(|(i, j)| {
                    let v = d.get(i, j);
                    (!v.is_zero()).then(|| (i, j, v.clone()))
                }),
        )
    }

    pub fn from_i64(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_dense(&DenseMatrix::from_i64(rows))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols.len());
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                d.set(*i as usize, j, v.clone());
            }
        }
        d
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(u32, Int)] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[Vec<(u32, Int)>] {
        &self.cols
    }

    pub fn into_columns(self) -> Vec<Vec<(u32, Int)>> {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Int {
        match self.cols[j].binary_search_by_key(&(i as u32), |e| e.0) {
            Ok(k) => self.cols[j][k].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn triplets(&self) -> Vec<(usize, usize, Int)> {
        let mut t: Vec<(usize, usize, Int)> = self
            .cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, v)| (*i as usize, j, v.clone())))
            .collect();
        t.sort_by_key(|e| (e.0, e.1));
        t
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut cs = vec![Vec::new(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                cs[*i as usize].push((j as u32, v.clone()));
            }
        }
        // rows were visited in increasing column order, so entries are sorted
        IntMatrix {
            rows: self.cols.len(),
            cols: cs,
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols(), other.rows, "dimension mismatch in product");
        let cols = other
            .cols
            .iter()
            .map(|c| {
                let mut acc: Vec<(u32, Int)> = Vec::new();
                for (k, b) in c {
                    for (i, a) in &self.cols[*k as usize] {
                        acc.push((*i, a * b));
                    }
                }
                normalize_column(acc)
            })
            .collect();
        IntMatrix {
            rows: self.rows,
            cols,
        }
    }

    /// `self · x` for a dense vector.
    pub fn mul_vec(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.cols());
        let mut out = vec![Int::ZERO; self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for (i, v) in c {
                out[*i as usize] += &(v * &x[j]);
            }
        }
        out
    }

    /// `xᵀ · self` for a dense vector (evaluation of cochains).
    pub fn vec_mul(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.rows);
        self.cols
            .iter()
            .map(|c| {
                let mut s = Int::ZERO;
                for (i, v) in c {
                    let xi = &x[*i as usize];
                    if !xi.is_zero() {
                        s += &(v * xi);
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| normalize_column(a.iter().chain(b.iter()).cloned().collect()))
            .collect();
        IntMatrix {
            rows: self.rows,
            cols,
        }
    }

    pub fn scale(&self, c: &Int) -> IntMatrix {
        if c.is_zero() {
            return IntMatrix::zeros(self.rows, self.cols());
        }
        IntMatrix {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .map(|col| col.iter().map(|(i, v)| (*i, v * c)).collect())
                .collect(),
        }
    }

    pub fn neg(&self) -> IntMatrix {
        self.scale(&Int::from(-1))
    }

    /// Submatrix on the given row and column index lists (rows are renumbered
    /// by their position in `rows`).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut row_map = vec![u32::MAX; self.rows];
        for (k, &r) in rows.iter().enumerate() {
            row_map[r] = k as u32;
        }
        let cols = cols
            .iter()
            .map(|&j| {
                self.cols[j]
                    .iter()
                    .filter_map(|(i, v)| {
                        let r = row_map[*i as usize];
                        (r != u32::MAX).then(|| (r, v.clone()))
                    })
                    .collect::<Vec<_>>()
            })
            .map(normalize_column)
            .collect();
        IntMatrix {
            rows: rows.len(),
            cols,
        }
    }

    /// Block matrix `[[a, b], [c, d]]`; blocks must have consistent shapes.
    pub fn block(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix, d: &IntMatrix) -> IntMatrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols(), c.cols());
        assert_eq!(b.cols(), d.cols());
        let top = a.rows as u32;
        let mut cols = Vec::with_capacity(a.cols() + b.cols());
        for (x, y) in a.cols.iter().zip(&c.cols) {
            let mut col = x.clone();
            col.extend(y.iter().map(|(i, v)| (i + top, v.clone())));
            cols.push(col);
        }
        for (x, y) in b.cols.iter().zip(&d.cols) {
            let mut col = x.clone();
            col.extend(y.iter().map(|(i, v)| (i + top, v.clone())));
            cols.push(col);
        }
        IntMatrix {
            rows: a.rows + c.rows,
            cols,
        }
    }
}

fn normalize_column(mut c: Vec<(u32, Int)>) -> Vec<(u32, Int)> {
    c.sort_by_key(|e| e.0);
    let mut out: Vec<(u32, Int)> = Vec::with_capacity(c.len());
    for (i, v) in c {
        match out.last_mut() {
            Some((li, lv)) if *li == i => *lv += &v,
            _ => out.push((i, v)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

#[derive(Serialize, Deserialize)]
struct TripletDump {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Int)>,
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TripletDump {
            rows: self.rows,
            cols: self.cols(),
            entries: self.triplets(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = TripletDump::deserialize(d)?;
        if t.entries
            .iter()
            .any(|(i, j, _)| *i >= t.rows || *j >= t.cols)
        {
            return Err(serde::de::Error::custom("triplet out of range"));
        }
        Ok(IntMatrix::from_triplets(t.rows, t.cols, t.entries))
    }
}

/// `U·A·V = S` with `S` diagonal and its nonzero entries forming a divisibility chain.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries of `S`, in order.
    pub invariant_factors: Vec<Int>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Recomputes `U·A·V` and compares with `S`.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        self.u.mul(a).mul(&self.v) == self.s
            && self
                .invariant_factors
                .windows(2)
                .all(|w| w[1].is_divisible_by(&w[0]))
    }
}

pub fn snf(a: &IntMatrix) -> SnfResult {
    let d = smith_dense(&a.to_dense(), true, true);
    let s = IntMatrix::from_triplets(
        a.rows(),
        a.cols(),
        d.diag.iter().enumerate().map(|(i, x)| (i, i, x.clone())),
    );
    SnfResult {
        s,
        u: IntMatrix::from_dense(d.u.as_ref().expect("tracked")),
        v: IntMatrix::from_dense(d.v.as_ref().expect("tracked")),
        invariant_factors: d.diag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_examples() {
        let z = IntMatrix::zeros(2, 3);
        let r = snf(&z);
        assert!(r.verify(&z));
        assert_eq!(r.u, IntMatrix::identity(2));
        assert_eq!(r.v, IntMatrix::identity(3));

        let id = IntMatrix::identity(3);
        let r = snf(&id);
        assert_eq!(r.s, id);

        let a = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        let r = snf(&a);
        assert!(r.verify(&a));
        assert_eq!(r.invariant_factors, vec![Int::from(2), Int::from(4)]);
        // |det A| = 8 = 2·4
        assert_eq!(
            &r.invariant_factors[0] * &r.invariant_factors[1],
            Int::from(8)
        );
    }

    #[test]
    fn sparse_algebra() {
        let a = IntMatrix::from_i64(&[&[1, 0, 2], &[0, -1, 0]]);
        let b = IntMatrix::from_i64(&[&[1], &[1], &[1]]);
        assert_eq!(a.mul(&b), IntMatrix::from_i64(&[&[3], &[-1]]));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(
            a.mul_vec(&[Int::ONE, Int::ONE, Int::ONE]),
            vec![Int::from(3), Int::from(-1)]
        );
        assert_eq!(
            a.vec_mul(&[Int::ONE, Int::ONE]),
            vec![Int::ONE, Int::from(-1), Int::from(2)]
        );
        assert!(a.add(&a.neg()).is_zero());
        assert_eq!(a.select(&[1], &[1, 2]), IntMatrix::from_i64(&[&[-1, 0]]));
        let json = serde_json::to_string(&a).unwrap();
        let back: IntMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }
}
