//! Bounded chain complexes of free abelian groups.

use serde::Serialize;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};
use crate::integer::Int;

/// Degrees `0..=top`; `∂_d : C_d → C_{d-1}` for `d ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    /// `boundaries[d - 1]` is `∂_d`.
    boundaries: Vec<IntMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Vec<Vec<u32>>>>,
}

impl ChainComplex {
    /// Checks shapes and `∂∂ = 0`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<ChainComplex> {
        let c = ChainComplex::new_unchecked(ranks, boundaries)?;
        for d in 2..c.ranks.len() {
            if !c.boundary(d - 1).mul(&c.boundary(d)).is_zero() {
                return Err(Error::Precondition(format!(
                    "boundary squares to nonzero at degree {d}"
                )));
            }
        }
        Ok(c)
    }

    /// Checks shapes only; for complexes whose `∂∂ = 0` holds by construction.
    pub fn new_unchecked(ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<ChainComplex> {
        if boundaries.len() + 1 != ranks.len().max(1) {
            return Err(Error::DimensionMismatch(format!(
                "{} boundary maps for {} degrees",
                boundaries.len(),
                ranks.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            if b.cols() != ranks[i + 1] || b.rows() != ranks[i] {
                return Err(Error::DimensionMismatch(format!(
                    "boundary at degree {}",
                    i + 1
                )));
            }
        }
        Ok(ChainComplex {
            ranks,
            boundaries,
            labels: None,
        })
    }

    pub fn empty() -> ChainComplex {
        ChainComplex {
            ranks: vec![],
            boundaries: vec![],
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<Vec<Vec<u32>>>) -> ChainComplex {
        assert_eq!(labels.len(), self.ranks.len());
        for (l, r) in labels.iter().zip(&self.ranks) {
            assert_eq!(l.len(), *r);
        }
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[Vec<Vec<u32>>]> {
        self.labels.as_deref()
    }

    /// Number of stored degrees (`top + 1`).
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    pub fn rank(&self, d: usize) -> usize {
        self.ranks.get(d).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `∂_d`, with zero maps outside the stored range.
    pub fn boundary(&self, d: usize) -> IntMatrix {
        if d >= 1 && d < self.ranks.len() {
            self.boundaries[d - 1].clone()
        } else {
            IntMatrix::zeros(if d == 0 { 0 } else { self.rank(d - 1) }, self.rank(d))
        }
    }

    pub fn boundary_ref(&self, d: usize) -> Option<&IntMatrix> {
        (d >= 1 && d < self.ranks.len()).then(|| &self.boundaries[d - 1])
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(d, &r)| if d % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// The dual complex `D_j = Hom(C_{N-j}, ℤ)` with `∂^D_j = (∂_{N-j+1})ᵀ`,
    /// where `N` is the top degree. Homology of `D` in degree `j` is the
    /// cohomology of `C` in degree `N - j`.
    pub fn dual(&self) -> ChainComplex {
        let n = self.ranks.len();
        if n == 0 {
            return ChainComplex::empty();
        }
        let ranks: Vec<usize> = self.ranks.iter().rev().copied().collect();
        let boundaries = (1..n)
            .map(|j| self.boundaries[n - 1 - j].transpose())
            .collect();
        let mut d = ChainComplex {
            ranks,
            boundaries,
            labels: None,
        };
        if let Some(l) = &self.labels {
            d.labels = Some(l.iter().rev().cloned().collect());
        }
        d
    }

    /// Negates `∂_d` for every degree `d` where `flip(d)` holds.
    pub fn twist_signs(&self, flip: impl Fn(usize) -> bool) -> ChainComplex {
        let mut c = self.clone();
        for (i, b) in c.boundaries.iter_mut().enumerate() {
            if flip(i + 1) {
                *b = b.neg();
            }
        }
        c
    }

    /// Restricts to the basis elements flagged in `keep`, giving a sub- or
    /// quotient complex; fails if the result is not a complex.
    pub fn select(&self, keep: &[Vec<bool>]) -> Result<ChainComplex> {
        let idx: Vec<Vec<usize>> = (0..self.ranks.len())
            .map(|d| {
                let k = keep.get(d).map(Vec::as_slice).unwrap_or(&[]);
                (0..self.ranks[d])
                    .filter(|&i| k.get(i).copied().unwrap_or(false))
                    .collect()
            })
            .collect();
        let mut top = idx.len();
        while top > 0 && idx[top - 1].is_empty() {
            top -= 1;
        }
        let ranks: Vec<usize> = idx[..top].iter().map(Vec::len).collect();
        let boundaries = (1..top)
            .map(|d| self.boundaries[d - 1].select(&idx[d - 1], &idx[d]))
            .collect();
        let mut c = ChainComplex::new(ranks, boundaries)?;
        if let Some(l) = &self.labels {
            c.labels = Some(
                idx[..top]
                    .iter()
                    .enumerate()
                    .map(|(d, ix)| ix.iter().map(|&i| l[d][i].clone()).collect())
                    .collect(),
            );
        }
        Ok(c)
    }

    /// Mapping cone of `f : src → tgt`: `Cone_n = tgt_n ⊕ src_{n-1}`,
    /// `d(t, s) = (∂t + f(s), -∂s)`. Acyclic iff `f` is a quasi-isomorphism.
    pub fn cone(f: &ChainMap, src: &ChainComplex, tgt: &ChainComplex) -> ChainComplex {
        let top = tgt.len().max(src.len() + 1);
        let ranks: Vec<usize> = (0..top)
            .map(|n| tgt.rank(n) + if n >= 1 { src.rank(n - 1) } else { 0 })
            .collect();
        let boundaries = (1..top)
            .map(|n| {
                let a = tgt.boundary(n);
                let b = f.map(n - 1, src, tgt);
                let c = IntMatrix::zeros(if n >= 2 { src.rank(n - 2) } else { 0 }, tgt.rank(n));
                let d = if n >= 2 {
                    src.boundary(n - 1).neg()
                } else {
                    IntMatrix::zeros(0, src.rank(n - 1))
                };
                IntMatrix::block(&a, &b, &c, &d)
            })
            .collect();
        ChainComplex {
            ranks,
            boundaries,
            labels: None,
        }
    }
}

/// Degreewise matrices `f_d : src_d → tgt_d`; missing degrees are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainMap {
    maps: Vec<IntMatrix>,
}

impl ChainMap {
    pub fn new(maps: Vec<IntMatrix>) -> ChainMap {
        ChainMap { maps }
    }

    pub fn maps(&self) -> &[IntMatrix] {
        &self.maps
    }

    pub fn map(&self, d: usize, src: &ChainComplex, tgt: &ChainComplex) -> IntMatrix {
        match self.maps.get(d) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(tgt.rank(d), src.rank(d)),
        }
    }

    /// Checks shapes and `∂ f = f ∂`; returns the first failing degree.
    pub fn check(&self, src: &ChainComplex, tgt: &ChainComplex) -> std::result::Result<(), usize> {
        let top = src.len().max(tgt.len()).max(self.maps.len());
        for d in 0..top {
            let f = self.map(d, src, tgt);
            if f.rows() != tgt.rank(d) || f.cols() != src.rank(d) {
                return Err(d);
            }
        }
        for d in 1..top {
            let lhs = tgt.boundary(d).mul(&self.map(d, src, tgt));
            let rhs = self.map(d - 1, src, tgt).mul(&src.boundary(d));
            if lhs != rhs {
                return Err(d);
            }
        }
        Ok(())
    }

    pub fn apply(&self, d: usize, x: &[Int], src: &ChainComplex, tgt: &ChainComplex) -> Vec<Int> {
        self.map(d, src, tgt).mul_vec(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> ChainComplex {
        // vertices 0,1,2; edges 01, 02, 12
        let d1 = IntMatrix::from_i64(&[&[-1, -1, 0], &[1, 0, -1], &[0, 1, 1]]);
        ChainComplex::new(vec![3, 3], vec![d1]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ChainComplex::new(vec![1, 1], vec![IntMatrix::zeros(2, 1)]).is_err());
        let d1 = IntMatrix::from_i64(&[&[1]]);
        let d2 = IntMatrix::from_i64(&[&[1]]);
        assert!(ChainComplex::new(vec![1, 1, 1], vec![d1, d2]).is_err());
        assert_eq!(circle().euler_characteristic(), 0);
    }

    #[test]
    fn dual_and_cone() {
        let c = circle();
        let d = c.dual();
        assert_eq!(d.ranks(), &[3, 3]);
        assert_eq!(d.boundary(1), c.boundary(1).transpose());
        let id = ChainMap::new(vec![IntMatrix::identity(3), IntMatrix::identity(3)]);
        assert!(id.check(&c, &c).is_ok());
        let cone = ChainComplex::cone(&id, &c, &c);
        assert_eq!(cone.ranks(), &[3, 6, 3]);
        assert!(ChainComplex::new(
            cone.ranks().to_vec(),
            (1..3).map(|n| cone.boundary(n)).collect()
        )
        .is_ok());
    }

    #[test]
    fn select_subcomplex() {
        let c = circle();
        // the edge 01 with its vertices
        let sub = c
            .select(&[vec![true, true, false], vec![true, false, false]])
            .unwrap();
        assert_eq!(sub.ranks(), &[2, 1]);
        // quotient by that edge
        let q = c
            .select(&[vec![false, false, true], vec![false, true, true]])
            .unwrap();
        assert_eq!(q.ranks(), &[1, 2]);
    }
}
