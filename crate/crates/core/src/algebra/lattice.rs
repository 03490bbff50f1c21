//! Sublattices of `ℤⁿ` and their quotients.
//!
//! A [`Lattice`] is stored as a unimodular change of coordinates `W` together
//! with a support: `x` lies in the lattice iff `(W·x)_j` vanishes off the
//! support and is divisible by the scale `t_j` on it. Kernels and spans of
//! integer matrices both have this shape after one Smith normal form.

use super::abelian::FgAbGroup;
use super::dense::{smith_dense, DenseMatrix};
use crate::error::{Error, Result};
use crate::integer::Int;

#[derive(Clone, Debug)]
pub struct Lattice {
    n: usize,
    w: DenseMatrix,
    w_inv: DenseMatrix,
    support: Vec<(usize, Int)>,
}

impl Lattice {
    pub fn whole(n: usize) -> Lattice {
        Lattice {
            n,
            w: DenseMatrix::identity(n),
            w_inv: DenseMatrix::identity(n),
            support: (0..n).map(|i| (i, Int::ONE)).collect(),
        }
    }

    /// `ker(a) ⊆ ℤ^{cols(a)}`.
    pub fn kernel(a: &DenseMatrix) -> Lattice {
        let n = a.cols();
        let s = smith_dense(a, false, true);
        let r = s.rank();
        Lattice {
            n,
            w: s.v_inv.expect("tracked"),
            w_inv: s.v.expect("tracked"),
            support: (r..n).map(|i| (i, Int::ONE)).collect(),
        }
    }

    /// The lattice spanned by `gens` inside `ℤⁿ`.
    pub fn span(n: usize, gens: &[Vec<Int>]) -> Lattice {
        let g = DenseMatrix::from_columns(n, gens);
        let s = smith_dense(&g, true, false);
        Lattice {
            n,
            w: s.u.expect("tracked"),
            w_inv: s.u_inv.expect("tracked"),
            support: s.diag.iter().cloned().enumerate().collect(),
        }
    }

    /// `{x : (a·x)_i ≡ 0 mod moduli_i}`; a zero modulus demands equality.
    pub fn preimage(a: &DenseMatrix, moduli: &[Int]) -> Lattice {
        assert_eq!(a.rows(), moduli.len());
        let n = a.cols();
        let rel: Vec<Vec<Int>> = moduli
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, m)| {
                let mut v = vec![Int::ZERO; a.rows()];
                v[i] = m.clone();
                v
            })
            .collect();
        if rel.is_empty() {
            return Lattice::kernel(a);
        }
        let block = a.hstack(&DenseMatrix::from_columns(a.rows(), &rel));
        let gens: Vec<Vec<Int>> = Lattice::kernel(&block)
            .basis()
            .into_iter()
            .map(|b| b[..n].to_vec())
            .collect();
        Lattice::span(n, &gens)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.support.len()
    }

    pub fn basis(&self) -> Vec<Vec<Int>> {
        self.support
            .iter()
            .map(|(j, t)| self.w_inv.column(*j).into_iter().map(|x| &x * t).collect())
            .collect()
    }

    /// Coordinates of `x` in [`Lattice::basis`], or `None` if `x` is outside.
    pub fn coords(&self, x: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(x.len(), self.n);
        let y = self.w.mul_vec(x);
        let mut on_support = vec![false; self.n];
        let mut out = Vec::with_capacity(self.support.len());
        for (j, t) in &self.support {
            on_support[*j] = true;
            if !y[*j].is_divisible_by(t) {
                return None;
            }
            out.push(y[*j].exact_div(t));
        }
        if y.iter().zip(&on_support).any(|(v, s)| !s && !v.is_zero()) {
            return None;
        }
        Some(out)
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.coords(x).is_some()
    }
}

/// `A / B` for lattices `B ⊆ A ⊆ ℤⁿ`, with canonical generators and a
/// coordinate map into the invariant-factor form.
#[derive(Clone, Debug)]
pub struct Subquotient {
    group: FgAbGroup,
    a: Lattice,
    /// Change of basis on `A`-coordinates diagonalizing `B`.
    p: DenseMatrix,
    /// For each canonical generator, its diagonal position and order (`0` = free).
    canon: Vec<(usize, Int)>,
    generators: Vec<Vec<Int>>,
}

impl Subquotient {
    pub fn new(a: Lattice, b_gens: &[Vec<Int>]) -> Result<Subquotient> {
        let k = a.rank();
        let coords: Vec<Vec<Int>> = b_gens
            .iter()
            .map(|b| {
                a.coords(b)
                    .ok_or_else(|| Error::Precondition("relation outside the lattice".into()))
            })
            .collect::<Result<_>>()?;
        let c = DenseMatrix::from_columns(k, &coords);
        let s = smith_dense(&c, true, false);
        let r = s.rank();
        let p = s.u.expect("tracked");
        let p_inv = s.u_inv.expect("tracked");
        let mut canon: Vec<(usize, Int)> = Vec::new();
        let mut torsion = Vec::new();
        for (i, d) in s.diag.iter().enumerate() {
            if !d.is_one() {
                canon.push((i, d.clone()));
                torsion.push(d.clone());
            }
        }
        for i in r..k {
            canon.push((i, Int::ZERO));
        }
        let basis = a.basis();
        let generators = canon
            .iter()
            .map(|(i, _)| {
                let mut v = vec![Int::ZERO; a.ambient_dim()];
                for (l, b) in basis.iter().enumerate() {
                    let coef = p_inv.get(l, *i);
                    if coef.is_zero() {
                        continue;
                    }
                    for (vx, bx) in v.iter_mut().zip(b) {
                        if !bx.is_zero() {
                            *vx += &(bx * coef);
                        }
                    }
                }
                v
            })
            .collect();
        let group = FgAbGroup::new(k - r, torsion);
        Ok(Subquotient {
            group,
            a,
            p,
            canon,
            generators,
        })
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    /// Ambient vectors of the canonical generators (torsion first, then free).
    pub fn generators(&self) -> &[Vec<Int>] {
        &self.generators
    }

    pub fn ambient_dim(&self) -> usize {
        self.a.ambient_dim()
    }

    /// Canonical coordinates of the class of `x`, or `None` if `x ∉ A`.
    pub fn class_of(&self, x: &[Int]) -> Option<Vec<Int>> {
        let c = self.a.coords(x)?;
        let y = self.p.mul_vec(&c);
        Some(
            self.canon
                .iter()
                .map(|(i, d)| {
                    if d.is_zero() {
                        y[*i].clone()
                    } else {
                        y[*i].rem_euclid(d)
                    }
                })
                .collect(),
        )
    }
}
