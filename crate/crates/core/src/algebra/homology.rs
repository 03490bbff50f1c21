//! Integral homology of free chain complexes.
//!
//! The complex is first shrunk by algebraic Gaussian elimination: whenever
//! `∂a` has a coefficient `±1` on `b`, the pair `(a, b)` is cancelled and the
//! remaining boundary corrected. Each cancellation is a chain homotopy
//! equivalence whose projection `p` and inclusion `i` are replayed lazily on
//! vectors, so cycles of the original complex can be classified and homology
//! generators lifted back. What survives is usually tiny and is finished with
//! a dense Smith normal form.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use super::abelian::{AbMap, FgAbGroup};
use super::chain::ChainComplex;
use super::dense::{smith_dense, DenseMatrix};
use super::lattice::{Lattice, Subquotient};
use super::matrix::IntMatrix;
use crate::error::{Error, Result};
use crate::integer::Int;

#[derive(Clone, Debug)]
struct Step {
    a: u32,
    b: u32,
    eps: Int,
    /// `∂a` at cancellation time, without the `b` entry.
    col_a: Vec<(u32, Int)>,
    /// Row `b` at cancellation time, without the `a` entry.
    row_b: Vec<(u32, Int)>,
}

/// Result of eliminating unit pivots from a chain complex.
#[derive(Clone, Debug)]
pub struct Reduction {
    ranks: Vec<usize>,
    /// `steps[d]` are the cancellations of `∂_d`, in order.
    steps: Vec<Vec<Step>>,
    survivors: Vec<Vec<usize>>,
    /// `residual[d]` is the reduced `∂_d` on survivors (`residual[0]` unused).
    residual: Vec<DenseMatrix>,
    /// Original boundaries, kept for cycle checks when steps are recorded.
    original: Option<ChainComplex>,
}

struct Eliminator {
    cols: Vec<Vec<(u32, Int)>>,
    alive: Vec<bool>,
    rows_of: Vec<Vec<u32>>,
    row_alive: Vec<bool>,
}

fn entry(col: &[(u32, Int)], r: u32) -> Option<&Int> {
    col.binary_search_by_key(&r, |e| e.0)
        .ok()
        .map(|k| &col[k].1)
}

/// `x - f·y` for sorted sparse columns; reports rows that became nonzero.
fn axpy(x: &[(u32, Int)], f: &Int, y: &[(u32, Int)], fresh: &mut Vec<u32>) -> Vec<(u32, Int)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(f * &y[j].1)));
            fresh.push(y[j].0);
            j += 1;
        } else {
            let v = &x[i].1 - &(f * &y[j].1);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl Eliminator {
    fn new(m: &IntMatrix, dead_cols: &[bool]) -> Eliminator {
        let mut cols: Vec<Vec<(u32, Int)>> = m.columns().to_vec();
        let alive: Vec<bool> = (0..cols.len())
            .map(|j| !dead_cols.get(j).copied().unwrap_or(false))
            .collect();
        let mut rows_of = vec![Vec::new(); m.rows()];
        for (j, c) in cols.iter_mut().enumerate() {
            if !alive[j] {
                c.clear();
                continue;
            }
            for (i, _) in c.iter() {
                rows_of[*i as usize].push(j as u32);
            }
        }
        Eliminator {
            cols,
            alive,
            rows_of,
            row_alive: vec![true; m.rows()],
        }
    }

    fn run(&mut self, record: bool) -> Vec<Step> {
        let mut steps = Vec::new();
        let mut heap: BinaryHeap<Reverse<(usize, u32)>> = self
            .cols
            .iter()
            .enumerate()
            .filter(|(j, c)| self.alive[*j] && !c.is_empty())
            .map(|(j, c)| Reverse((c.len(), j as u32)))
            .collect();
        let mut fresh = Vec::new();
        while let Some(Reverse((len, a))) = heap.pop() {
            let au = a as usize;
            if !self.alive[au] || self.cols[au].len() != len || len == 0 {
                continue;
            }
            // unit entry in the sparsest row
            let mut pivot: Option<(u32, usize)> = None;
            for (r, v) in &self.cols[au] {
                if v.is_unit() {
                    let cost = self.rows_of[*r as usize].len();
                    if pivot.is_none_or(|(_, c)| cost < c) {
                        pivot = Some((*r, cost));
                    }
                }
            }
            let Some((b, _)) = pivot else { continue };
            let col_a = std::mem::take(&mut self.cols[au]);
            self.alive[au] = false;
            let eps = entry(&col_a, b).expect("pivot entry").clone();
            let mut users = std::mem::take(&mut self.rows_of[b as usize]);
            users.sort_unstable();
            users.dedup();
            let mut row_b = Vec::new();
            for &y in &users {
                let yu = y as usize;
                if y == a || !self.alive[yu] {
                    continue;
                }
                let Some(c) = entry(&self.cols[yu], b).cloned() else {
                    continue;
                };
                if record {
                    row_b.push((y, c.clone()));
                }
                fresh.clear();
                let f = &c * &eps;
                let new = axpy(&self.cols[yu], &f, &col_a, &mut fresh);
                self.cols[yu] = new;
                for &r in &fresh {
                    self.rows_of[r as usize].push(y);
                }
                heap.push(Reverse((self.cols[yu].len(), y)));
            }
            self.row_alive[b as usize] = false;
            if record {
                steps.push(Step {
                    a,
                    b,
                    eps,
                    col_a: col_a.into_iter().filter(|e| e.0 != b).collect(),
                    row_b,
                });
            } else {
                steps.push(Step {
                    a,
                    b,
                    eps,
                    col_a: Vec::new(),
                    row_b: Vec::new(),
                });
            }
        }
        steps
    }
}

impl Reduction {
    /// Eliminates unit pivots degree by degree from the top. With `record`,
    /// the cancellation data needed by [`HomologyBasis`] is kept.
    pub fn new(c: &ChainComplex, record: bool) -> Reduction {
        let n = c.len();
        let mut steps: Vec<Vec<Step>> = vec![Vec::new(); n];
        let mut elim: Vec<Option<Eliminator>> = (0..n).map(|_| None).collect();
        // b's cancelled at degree d + 1 are dead columns of ∂_d
        let mut dead_next: Vec<bool> = Vec::new();
        for d in (1..n).rev() {
            let m = c.boundary_ref(d).expect("stored degree");
            let mut e = Eliminator::new(m, &dead_next);
            let s = e.run(record);
            dead_next = vec![false; c.rank(d - 1)];
            for st in &s {
                dead_next[st.b as usize] = true;
            }
            steps[d] = s;
            elim[d] = Some(e);
        }
        // survivors: not a pivot column at d, not a pivot row at d + 1
        let survivors: Vec<Vec<usize>> = (0..n)
            .map(|d| {
                let mut gone = vec![false; c.rank(d)];
                for st in &steps[d] {
                    gone[st.a as usize] = true;
                }
                if d + 1 < n {
                    for st in &steps[d + 1] {
                        gone[st.b as usize] = true;
                    }
                }
                (0..c.rank(d)).filter(|&i| !gone[i]).collect()
            })
            .collect();
        let residual: Vec<DenseMatrix> = (0..n)
            .map(|d| {
                if d == 0 {
                    return DenseMatrix::zeros(0, survivors[0].len());
                }
                let e = elim[d].as_ref().expect("eliminated");
                let mut pos = vec![usize::MAX; c.rank(d - 1)];
                for (k, &i) in survivors[d - 1].iter().enumerate() {
                    pos[i] = k;
                }
                let mut m = DenseMatrix::zeros(survivors[d - 1].len(), survivors[d].len());
                for (k, &j) in survivors[d].iter().enumerate() {
                    for (r, v) in &e.cols[j] {
                        let p = pos[*r as usize];
                        if p != usize::MAX {
                            m.set(p, k, v.clone());
                        }
                    }
                }
                m
            })
            .collect();
        Reduction {
            ranks: c.ranks().to_vec(),
            steps,
            survivors,
            residual,
            original: record.then(|| c.clone()),
        }
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Sizes of the residual complex.
    pub fn residual_ranks(&self) -> Vec<usize> {
        self.survivors.iter().map(Vec::len).collect()
    }

    /// Integral homology in degrees `0..len`.
    pub fn homology_groups(&self) -> Vec<FgAbGroup> {
        let n = self.len();
        let diag: Vec<Vec<Int>> = (0..n)
            .map(|d| {
                if d == 0 {
                    Vec::new()
                } else {
                    smith_dense(&self.residual[d], false, false).diag
                }
            })
            .collect();
        (0..n)
            .map(|d| {
                let r_out = diag[d].len();
                let in_factors: &[Int] = if d + 1 < n { &diag[d + 1] } else { &[] };
                let free = self.survivors[d].len() - r_out - in_factors.len();
                FgAbGroup::new(free, in_factors.to_vec())
            })
            .collect()
    }

    /// Projection `p` of a degree-`e` chain onto the residual basis.
    fn project(&self, e: usize, x: &[Int]) -> Vec<Int> {
        let mut x = x.to_vec();
        if e + 1 < self.len() {
            for st in &self.steps[e + 1] {
                let xb = std::mem::take(&mut x[st.b as usize]);
                if xb.is_zero() {
                    continue;
                }
                let f = &xb * &st.eps;
                for (r, v) in &st.col_a {
                    x[*r as usize] -= &(&f * v);
                }
            }
        }
        self.survivors[e].iter().map(|&i| x[i].clone()).collect()
    }

    /// Inclusion `i` of a residual degree-`e` chain into the original basis.
    fn include(&self, e: usize, y: &[Int]) -> Vec<Int> {
        let mut x = vec![Int::ZERO; self.ranks[e]];
        for (k, &i) in self.survivors[e].iter().enumerate() {
            x[i] = y[k].clone();
        }
        for st in self.steps[e].iter().rev() {
            let mut s = Int::ZERO;
            for (col, c) in &st.row_b {
                let v = &x[*col as usize];
                if !v.is_zero() {
                    s += &(v * c);
                }
            }
            if !s.is_zero() {
                x[st.a as usize] -= &(&s * &st.eps);
            }
        }
        x
    }
}

/// Canonical generators of `H_n` and a classifier for cycles.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    degree: usize,
    reduction: Arc<Reduction>,
    sq: Subquotient,
    generators: Vec<Vec<Int>>,
}

impl HomologyBasis {
    pub fn new(reduction: &Arc<Reduction>, degree: usize) -> Result<HomologyBasis> {
        let r = reduction;
        if r.original.is_none() {
            return Err(Error::Precondition(
                "reduction was computed without recording steps".into(),
            ));
        }
        if degree >= r.len() {
            return Ok(HomologyBasis {
                degree,
                reduction: Arc::clone(r),
                sq: Subquotient::new(Lattice::whole(0), &[]).expect("trivial"),
                generators: Vec::new(),
            });
        }
        let kernel = Lattice::kernel(&r.residual[degree]);
        let image: Vec<Vec<Int>> = if degree + 1 < r.len() {
            let m = &r.residual[degree + 1];
            (0..m.cols()).map(|j| m.column(j)).collect()
        } else {
            Vec::new()
        };
        let sq = Subquotient::new(kernel, &image)?;
        let generators = sq
            .generators()
            .iter()
            .map(|g| r.include(degree, g))
            .collect();
        Ok(HomologyBasis {
            degree,
            reduction: Arc::clone(r),
            sq,
            generators,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self) -> &FgAbGroup {
        self.sq.group()
    }

    /// Cycles in the original basis representing the canonical generators.
    pub fn generators(&self) -> &[Vec<Int>] {
        &self.generators
    }

    /// Canonical coordinates of the class of `z`; `None` if `z` is not a cycle.
    pub fn class_of(&self, z: &[Int]) -> Option<Vec<Int>> {
        let r = &self.reduction;
        if self.degree >= r.len() {
            return Some(Vec::new());
        }
        if z.len() != r.ranks[self.degree] {
            return None;
        }
        let orig = r.original.as_ref().expect("recorded");
        if self.degree >= 1
            && !orig
                .boundary_ref(self.degree)
                .expect("stored")
                .mul_vec(z)
                .iter()
                .all(Int::is_zero)
        {
            return None;
        }
        self.sq.class_of(&r.project(self.degree, z))
    }

    /// The map on homology induced by a chain-level matrix `f` from this
    /// basis's degree to `target`'s.
    pub fn induced_map(&self, f: &IntMatrix, target: &HomologyBasis) -> Result<AbMap> {
        let cols: Vec<Vec<Int>> = self
            .generators
            .iter()
            .map(|g| {
                target.class_of(&f.mul_vec(g)).ok_or_else(|| {
                    Error::Precondition("chain map does not send cycles to cycles".into())
                })
            })
            .collect::<Result<_>>()?;
        AbMap::new(
            self.group().clone(),
            target.group().clone(),
            DenseMatrix::from_columns(target.group().num_generators(), &cols),
        )
    }
}

/// Integral homology, degrees `0..=top`.
pub fn integral_homology(c: &ChainComplex) -> Vec<FgAbGroup> {
    Reduction::new(c, false).homology_groups()
}

/// `H_n(C; M) = H_n ⊗ M ⊕ Tor(H_{n-1}, M)`, valid because `C` is free.
pub fn homology(c: &ChainComplex, coeff: &FgAbGroup) -> Vec<FgAbGroup> {
    let h = integral_homology(c);
    universal_coefficients(&h, coeff)
}

/// Applies the universal coefficient formula to integral homology.
pub fn universal_coefficients(h: &[FgAbGroup], coeff: &FgAbGroup) -> Vec<FgAbGroup> {
    (0..h.len())
        .map(|n| {
            let t = h[n].tensor(coeff);
            if n == 0 {
                t
            } else {
                t.direct_sum(&h[n - 1].tor(coeff))
            }
        })
        .collect()
}

/// Integral cohomology in degrees `0..=top`, computed as homology of the dual
/// complex: `H^n(C) = H_{N-n}(D)`.
pub fn integral_cohomology(c: &ChainComplex) -> Vec<FgAbGroup> {
    let mut h = integral_homology(&c.dual());
    h.reverse();
    h
}

/// `H^n(C; M) = H^n ⊗ M ⊕ Tor(H^{n+1}, M)` (homology of the free dual complex
/// with coefficients).
pub fn cohomology(c: &ChainComplex, coeff: &FgAbGroup) -> Vec<FgAbGroup> {
    let h = integral_cohomology(c);
    cohomology_from_integral(&h, coeff)
}

pub fn cohomology_from_integral(h: &[FgAbGroup], coeff: &FgAbGroup) -> Vec<FgAbGroup> {
    (0..h.len())
        .map(|n| {
            let t = h[n].tensor(coeff);
            match h.get(n + 1) {
                Some(next) => t.direct_sum(&next.tor(coeff)),
                None => t,
            }
        })
        .collect()
}

/// `H^n(C; M) = Hom(H_n, M) ⊕ Ext(H_{n-1}, M)` from integral homology; an
/// independent route used to cross-check [`cohomology`].
pub fn cohomology_via_hom_ext(c: &ChainComplex, coeff: &FgAbGroup) -> Vec<FgAbGroup> {
    let h = integral_homology(c);
    (0..h.len())
        .map(|n| {
            let a = h[n].hom(coeff);
            if n == 0 {
                a
            } else {
                a.direct_sum(&h[n - 1].ext(coeff))
            }
        })
        .collect()
}

/// A complex whose chain groups are direct sums of cyclic groups,
/// `C_d = ⊕ ℤ/o_{d,i}` (`o = 0` meaning `ℤ`); the differentials are integer
/// lifts, required to square to zero only modulo the relations.
#[derive(Clone, Debug)]
pub struct PresentedComplex {
    pub orders: Vec<Vec<Int>>,
    /// `boundaries[d - 1]` lifts `∂_d`.
    pub boundaries: Vec<IntMatrix>,
}

impl PresentedComplex {
    fn relations(&self, d: usize) -> Vec<Vec<Int>> {
        let o = &self.orders[d];
        o.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| {
                let mut v = vec![Int::ZERO; o.len()];
                v[i] = x.clone();
                v
            })
            .collect()
    }

    pub fn is_free(&self) -> bool {
        self.orders.iter().all(|o| o.iter().all(Int::is_zero))
    }

    /// Homology in degrees `0..len`, as subquotients `Z_d / B_d` with
    /// `Z_d = {x : ∂x ∈ R_{d-1}}` and `B_d = ∂(C_{d+1}) + R_d`.
    pub fn homology(&self) -> Result<Vec<FgAbGroup>> {
        let n = self.orders.len();
        if self.is_free() {
            let c = ChainComplex::new(
                self.orders.iter().map(Vec::len).collect(),
                self.boundaries.clone(),
            )?;
            return Ok(integral_homology(&c));
        }
        (0..n)
            .map(|d| {
                let g = self.orders[d].len();
                let z = if d == 0 {
                    Lattice::whole(g)
                } else {
                    Lattice::preimage(&self.boundaries[d - 1].to_dense(), &self.orders[d - 1])
                };
                let mut b = self.relations(d);
                if d + 1 < n {
                    let m = &self.boundaries[d];
                    b.extend((0..m.cols()).map(|j| {
                        let mut v = vec![Int::ZERO; g];
                        for (i, x) in m.column(j) {
                            v[*i as usize] = x.clone();
                        }
                        v
                    }));
                }
                Subquotient::new(z, &b)
                    .map(|q| q.group().clone())
                    .map_err(|_| {
                        Error::Precondition(format!(
                            "differential does not square to zero at degree {d}"
                        ))
                    })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    /// Boundary matrices of a simplicial complex given by its facets.
    fn simplicial(facets: &[&[u32]]) -> ChainComplex {
        let mut by_dim: Vec<std::collections::BTreeSet<Vec<u32>>> = Vec::new();
        for f in facets {
            let k = f.len();
            for mask in 1u32..(1 << k) {
                let s: Vec<u32> = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| f[i])
                    .collect();
                let d = s.len() - 1;
                while by_dim.len() <= d {
                    by_dim.push(Default::default());
                }
                by_dim[d].insert(s);
            }
        }
        let lists: Vec<Vec<Vec<u32>>> = by_dim
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect();
        let ranks = lists.iter().map(Vec::len).collect();
        let boundaries = (1..lists.len())
            .map(|d| {
                let mut t = Vec::new();
                for (j, s) in lists[d].iter().enumerate() {
                    for i in 0..s.len() {
                        let mut f = s.clone();
                        f.remove(i);
                        let r = lists[d - 1].binary_search(&f).unwrap();
                        t.push((r, j, Int::from(if i % 2 == 0 { 1 } else { -1 })));
                    }
                }
                IntMatrix::from_triplets(lists[d - 1].len(), lists[d].len(), t)
            })
            .collect();
        ChainComplex::new(ranks, boundaries).unwrap()
    }

    fn rp2() -> ChainComplex {
        simplicial(&[
            &[0, 1, 2],
            &[0, 2, 3],
            &[0, 3, 4],
            &[0, 4, 5],
            &[0, 1, 5],
            &[1, 2, 4],
            &[2, 3, 5],
            &[1, 3, 4],
            &[1, 3, 5],
            &[2, 4, 5],
        ])
    }

    #[test]
    fn spheres_and_projective_plane() {
        let circle = simplicial(&[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(integral_homology(&circle), vec![g("Z"), g("Z")]);
        assert_eq!(homology(&circle, &g("Z/2")), vec![g("Z/2"), g("Z/2")]);
        let octa = simplicial(&[
            &[0, 2, 4],
            &[0, 2, 5],
            &[0, 3, 4],
            &[0, 3, 5],
            &[1, 2, 4],
            &[1, 2, 5],
            &[1, 3, 4],
            &[1, 3, 5],
        ]);
        assert_eq!(octa.ranks(), &[6, 12, 8]);
        assert_eq!(integral_homology(&octa), vec![g("Z"), g("0"), g("Z")]);
        let p = rp2();
        assert_eq!(integral_homology(&p), vec![g("Z"), g("Z/2"), g("0")]);
        assert_eq!(integral_cohomology(&p), vec![g("Z"), g("0"), g("Z/2")]);
        for m in ["Z", "Z/2", "Z/3", "Z/4", "Z + Z/2"] {
            assert_eq!(
                cohomology(&p, &g(m)),
                cohomology_via_hom_ext(&p, &g(m)),
                "coefficients {m}"
            );
        }
        assert_eq!(homology(&p, &g("Z/2")), vec![g("Z/2"), g("Z/2"), g("Z/2")]);
    }

    #[test]
    fn bases_classify_cycles() {
        let p = rp2();
        let red = Arc::new(Reduction::new(&p, true));
        let b1 = HomologyBasis::new(&red, 1).unwrap();
        assert_eq!(b1.group(), &g("Z/2"));
        let gen = b1.generators()[0].clone();
        assert_eq!(b1.class_of(&gen).unwrap(), vec![Int::ONE]);
        let twice: Vec<Int> = gen.iter().map(|x| x * &Int::from(2)).collect();
        assert_eq!(b1.class_of(&twice).unwrap(), vec![Int::ZERO]);
        // a boundary classifies as zero
        let bd = p.boundary(2).mul_vec(&{
            let mut v = vec![Int::ZERO; p.rank(2)];
            v[3] = Int::ONE;
            v
        });
        assert_eq!(b1.class_of(&bd).unwrap(), vec![Int::ZERO]);
        // a non-cycle is rejected
        let mut e = vec![Int::ZERO; p.rank(1)];
        e[0] = Int::ONE;
        assert!(b1.class_of(&e).is_none());
        let b0 = HomologyBasis::new(&red, 0).unwrap();
        let id = IntMatrix::identity(p.rank(0));
        assert!(b0.induced_map(&id, &b0).unwrap().is_iso());
    }

    #[test]
    fn presented_matches_universal_coefficients() {
        let p = rp2();
        for m in [2i64, 3, 4] {
            let pc = PresentedComplex {
                orders: p.ranks().iter().map(|&r| vec![Int::from(m); r]).collect(),
                boundaries: (1..p.len()).map(|d| p.boundary(d)).collect(),
            };
            assert_eq!(pc.homology().unwrap(), homology(&p, &FgAbGroup::cyclic(m)));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn euler_characteristic_and_dense_agreement(facets in proptest::collection::vec(proptest::collection::btree_set(0u32..7, 1..4), 1..9)) {
            let f: Vec<Vec<u32>> = facets.into_iter().map(|s| s.into_iter().collect()).collect();
            let fr: Vec<&[u32]> = f.iter().map(Vec::as_slice).collect();
            let c = simplicial(&fr);
            let h = integral_homology(&c);
            let chi: i64 = h.iter().enumerate().map(|(d, x)| if d % 2 == 0 { x.rank() as i64 } else { -(x.rank() as i64) }).sum();
            prop_assert_eq!(chi, c.euler_characteristic());
            // against plain dense SNF of every boundary
            let diag: Vec<Vec<Int>> = (0..c.len()).map(|d| if d == 0 { vec![] } else { smith_dense(&c.boundary(d).to_dense(), false, false).diag }).collect();
            for d in 0..c.len() {
                let inc: &[Int] = if d + 1 < c.len() { &diag[d + 1] } else { &[] };
                let expect = FgAbGroup::new(c.rank(d) - diag[d].len() - inc.len(), inc.to_vec());
                prop_assert_eq!(&h[d], &expect);
            }
            // homology vs cohomology: equal ranks, torsion shifted up by one
            let co = integral_cohomology(&c);
            for d in 0..c.len() {
                prop_assert_eq!(co[d].rank(), h[d].rank());
                let t_co = FgAbGroup::new(0, co[d].torsion().to_vec());
                let t_h = if d == 0 { FgAbGroup::zero() } else { FgAbGroup::new(0, h[d - 1].torsion().to_vec()) };
                prop_assert_eq!(t_co, t_h);
            }
            // every recorded generator is a cycle classified as itself
            let red = Arc::new(Reduction::new(&c, true));
            for d in 0..c.len() {
                let b = HomologyBasis::new(&red, d).unwrap();
                prop_assert_eq!(b.group(), &h[d]);
                for (i, gen) in b.generators().iter().enumerate() {
                    let cls = b.class_of(gen).unwrap();
                    for (j, x) in cls.iter().enumerate() {
                        prop_assert_eq!(x.is_one(), i == j);
                    }
                }
            }
        }
    }
}
