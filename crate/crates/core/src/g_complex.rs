//! Finite simplicial complexes with simplicial group actions.
//!
//! Simplices are strictly increasing vertex tuples, stored per dimension in
//! lexicographic order; the orientation of a simplex is its sorted order.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{ChainComplex, IntMatrix};
use crate::error::{Error, Result};
use crate::integer::Int;
use crate::perm_group::{all_subgroups, FiniteGroup, Perm, Subgroup, WeylGroup};

pub const DEFAULT_SIMPLEX_CAP: usize = 2_000_000;

/// Fixed-width tuples in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SimplexList {
    width: usize,
    data: Vec<u32>,
}

impl SimplexList {
    pub fn new(width: usize) -> SimplexList {
        SimplexList {
            width,
            data: Vec::new(),
        }
    }

    /// Sorts and deduplicates tuples given back to back in `data`.
    pub fn from_unsorted(width: usize, data: Vec<u32>) -> SimplexList {
        assert!(width > 0 && data.len() % width == 0);
        let n = data.len() / width;
        let mut idx: Vec<u32> = (0..n as u32).collect();
        let key = |i: u32| &data[i as usize * width..(i as usize + 1) * width];
        idx.par_sort_unstable_by(|&a, &b| key(a).cmp(key(b)));
        idx.dedup_by(|a, b| key(*a) == key(*b));
        let mut out = Vec::with_capacity(idx.len() * width);
        for i in idx {
            out.extend_from_slice(key(i));
        }
        SimplexList { width, data: out }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        if self.width == 0 {
            0
        } else {
            self.data.len() / self.width
        }
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.data.chunks_exact(self.width.max(1))
    }

    pub fn position(&self, s: &[u32]) -> Option<usize> {
        if s.len() != self.width {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(s) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// Sorted image of a simplex under a vertex permutation, and the sign of the
/// permutation that sorts it.
pub fn permute_simplex(p: &Perm, s: &[u32]) -> (Vec<u32>, i8) {
    let mut img: Vec<u32> = s.iter().map(|&v| p.apply(v)).collect();
    let mut sign = 1i8;
    // insertion sort, counting transpositions
    for i in 1..img.len() {
        let mut j = i;
        while j > 0 && img[j - 1] > img[j] {
            img.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    (img, sign)
}

#[derive(Clone, Debug)]
pub struct GComplex {
    num_vertices: usize,
    simplices: Vec<SimplexList>,
    group: Arc<FiniteGroup>,
    /// Vertex permutation of every group element, indexed like the group.
    action: Vec<Perm>,
}

impl PartialEq for GComplex {
    fn eq(&self, other: &Self) -> bool {
        self.num_vertices == other.num_vertices
            && self.simplices == other.simplices
            && *self.group == *other.group
            && self.action == other.action
    }
}

impl Eq for GComplex {}

/// Which regularity conditions an action satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    /// Every fixed set `X^H` is a subcomplex.
    pub fixed_sets_full: bool,
    /// An element stabilizing a simplex fixes each of its vertices.
    pub pointwise_fixing: bool,
    /// Distinct faces of a simplex lie in distinct orbits, and distinct
    /// orbits of simplices have distinct vertex-orbit sets, so `X/G` is a
    /// simplicial complex whose simplices are the orbits.
    pub quotient_safe: bool,
}

fn face_count_for_facets(facets: &[Vec<u32>]) -> usize {
    facets
        .iter()
        .map(|f| (1usize << f.len().min(62)) - 1)
        .fold(0usize, usize::saturating_add)
}

impl GComplex {
    /// Closes `facets` (and every vertex `0..num_vertices`) under faces; the
    /// action is given by vertex permutations of the group's generators.
    pub fn from_facets(
        num_vertices: usize,
        facets: &[Vec<u32>],
        group: Arc<FiniteGroup>,
        generator_images: &[Perm],
    ) -> Result<GComplex> {
        Self::from_facets_capped(
            num_vertices,
            facets,
            group,
            generator_images,
            DEFAULT_SIMPLEX_CAP,
        )
    }

    pub fn from_facets_capped(
        num_vertices: usize,
        facets: &[Vec<u32>],
        group: Arc<FiniteGroup>,
        generator_images: &[Perm],
        cap: usize,
    ) -> Result<GComplex> {
        let bound = face_count_for_facets(facets);
        if bound > cap.saturating_mul(64) {
            return Err(Error::SimplexCapExceeded { cap, needed: bound });
        }
        let mut by_dim: Vec<Vec<u32>> = vec![(0..num_vertices as u32).collect()];
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                continue;
            }
            if let Some(&v) = f.iter().find(|&&v| v as usize >= num_vertices) {
                return Err(Error::Precondition(format!("vertex {v} out of range")));
            }
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                let d = mask.count_ones() as usize - 1;
                if d == 0 {
                    continue;
                }
                while by_dim.len() <= d {
                    by_dim.push(Vec::new());
                }
                by_dim[d].extend((0..k).filter(|i| mask >> i & 1 == 1).map(|i| f[i]));
            }
        }
        let simplices: Vec<SimplexList> = by_dim
            .into_iter()
            .enumerate()
            .map(|(d, data)| SimplexList::from_unsorted(d + 1, data))
            .collect();
        let total: usize = simplices.iter().map(SimplexList::len).sum();
        if total > cap {
            return Err(Error::SimplexCapExceeded { cap, needed: total });
        }
        Self::with_generator_action(num_vertices, simplices, group, generator_images)
    }

    /// A complex with the trivial group acting.
    pub fn trivial(num_vertices: usize, facets: &[Vec<u32>]) -> Result<GComplex> {
        Self::from_facets(num_vertices, facets, FiniteGroup::trivial(), &[])
    }

    pub fn empty(group: Arc<FiniteGroup>) -> GComplex {
        let action = vec![Perm::identity(0); group.order()];
        GComplex {
            num_vertices: 0,
            simplices: Vec::new(),
            group,
            action,
        }
    }

    fn with_generator_action(
        num_vertices: usize,
        mut simplices: Vec<SimplexList>,
        group: Arc<FiniteGroup>,
        generator_images: &[Perm],
    ) -> Result<GComplex> {
        if generator_images.len() != group.generators().len() {
            return Err(Error::ActionNotHomomorphism(format!(
                "{} generator images for {} generators",
                generator_images.len(),
                group.generators().len()
            )));
        }
        for p in generator_images {
            if p.degree() != num_vertices {
                return Err(Error::ActionNotSimplicial(format!(
                    "permutation of degree {} on {num_vertices} vertices",
                    p.degree()
                )));
            }
        }
        while simplices.last().is_some_and(SimplexList::is_empty) {
            simplices.pop();
        }
        let action =
            group.extend_from_generators(Perm::identity(num_vertices), generator_images, |a, b| {
                a.compose(b)
            });
        let x = GComplex {
            num_vertices,
            simplices,
            group,
            action,
        };
        x.check_face_closed()?;
        x.check_action()?;
        Ok(x)
    }

    /// Builds from per-element vertex permutations, checking every invariant.
    pub fn with_action(
        num_vertices: usize,
        simplices: Vec<SimplexList>,
        group: Arc<FiniteGroup>,
        action: Vec<Perm>,
    ) -> Result<GComplex> {
        if action.len() != group.order() {
            return Err(Error::ActionNotHomomorphism(
                "one permutation per group element required".into(),
            ));
        }
        let gens: Vec<Perm> = group
            .generators()
            .iter()
            .map(|&g| action[g].clone())
            .collect();
        let x = Self::with_generator_action(num_vertices, simplices, group, &gens)?;
        if x.action != action {
            return Err(Error::ActionNotHomomorphism(
                "element images disagree with generator images".into(),
            ));
        }
        Ok(x)
    }

    fn check_face_closed(&self) -> Result<()> {
        if let Some(v) = self.simplices.first() {
            if v.len() != self.num_vertices || v.iter().enumerate().any(|(i, s)| s[0] as usize != i)
            {
                return Err(Error::Precondition(
                    "vertex list must be 0..num_vertices".into(),
                ));
            }
        } else if self.num_vertices > 0 {
            return Err(Error::Precondition("missing vertex list".into()));
        }
        for d in 1..self.simplices.len() {
            let ok = self.simplices[d].iter().par_bridge().all(|s| {
                s.windows(2).all(|w| w[0] < w[1])
                    && (0..s.len()).all(|i| {
                        let mut f = s.to_vec();
                        f.remove(i);
                        self.simplices[d - 1].position(&f).is_some()
                    })
            });
            if !ok {
                return Err(Error::Precondition(format!(
                    "not face-closed in dimension {d}"
                )));
            }
        }
        Ok(())
    }

    fn check_action(&self) -> Result<()> {
        for &g in self.group.generators() {
            let p = &self.action[g];
            for d in 1..self.simplices.len() {
                let bad = self.simplices[d].iter().par_bridge().find_any(|s| {
                    let (img, _) = permute_simplex(p, s);
                    self.simplices[d].position(&img).is_none()
                });
                if let Some(s) = bad {
                    return Err(Error::ActionNotSimplicial(format!(
                        "image of {s:?} is not a simplex"
                    )));
                }
            }
            for b in 0..self.group.order() {
                if self.action[self.group.mul(g, b)] != p.compose(&self.action[b]) {
                    return Err(Error::ActionNotHomomorphism(format!(
                        "generator {g} times element {b}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.simplices.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self, d: usize) -> &SimplexList {
        static EMPTY: SimplexList = SimplexList {
            width: 0,
            data: Vec::new(),
        };
        self.simplices.get(d).unwrap_or(&EMPTY)
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices.get(d).map_or(0, SimplexList::len)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(SimplexList::len).collect()
    }

    pub fn total_simplices(&self) -> usize {
        self.f_vector().iter().sum()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn action(&self, g: usize) -> &Perm {
        &self.action[g]
    }

    /// Maximal simplices, in (dimension, lex) order.
    pub fn facets(&self) -> Vec<Vec<u32>> {
        let mut covered: Vec<Vec<bool>> = self
            .simplices
            .iter()
            .map(|l| vec![false; l.len()])
            .collect();
        for d in 1..self.simplices.len() {
            for s in self.simplices[d].iter() {
                for i in 0..s.len() {
                    let mut f = s.to_vec();
                    f.remove(i);
                    let k = self.simplices[d - 1].position(&f).expect("face");
                    covered[d - 1][k] = true;
                }
            }
        }
        let mut out = Vec::new();
        for (d, l) in self.simplices.iter().enumerate() {
            for (i, s) in l.iter().enumerate() {
                if !covered[d][i] {
                    out.push(s.to_vec());
                }
            }
        }
        out
    }

    /// Index of `g·σ` for the `i`-th `d`-simplex, with the orientation sign.
    pub fn act(&self, g: usize, d: usize, i: usize) -> (usize, i8) {
        let (img, sign) = permute_simplex(&self.action[g], self.simplices[d].get(i));
        (
            self.simplices[d].position(&img).expect("simplicial action"),
            sign,
        )
    }

    /// Simplicial chain complex; `∂[v_0..v_d] = Σ (-1)^i [.. v̂_i ..]`.
    pub fn chain_complex(&self) -> ChainComplex {
        let ranks = self.f_vector();
        let boundaries = (1..self.simplices.len())
            .map(|d| {
                let cols: Vec<Vec<(u32, Int)>> = self.simplices[d]
                    .iter()
                    .collect::<Vec<_>>()
                    .par_iter()
                    .map(|s| {
                        let mut col: Vec<(u32, Int)> = (0..s.len())
                            .map(|i| {
                                let mut f = s.to_vec();
                                f.remove(i);
                                let r = self.simplices[d - 1].position(&f).expect("face");
                                (r as u32, Int::from(if i % 2 == 0 { 1 } else { -1 }))
                            })
                            .collect();
                        col.sort_by_key(|e| e.0);
                        col
                    })
                    .collect();
                IntMatrix::from_columns(ranks[d - 1], cols)
            })
            .collect();
        ChainComplex::new_unchecked(ranks, boundaries).expect("shapes")
    }

    /// Chain complex with each basis element labelled by its vertex tuple.
    pub fn labeled_chain_complex(&self) -> ChainComplex {
        let labels = self
            .simplices
            .iter()
            .map(|l| l.iter().map(<[u32]>::to_vec).collect())
            .collect();
        self.chain_complex().with_labels(labels)
    }

    /// Orbit index of every vertex; orbits numbered by least member.
    pub fn vertex_orbits(&self) -> Vec<u32> {
        let mut orbit = vec![u32::MAX; self.num_vertices];
        let mut next = 0;
        for v in 0..self.num_vertices {
            if orbit[v] != u32::MAX {
                continue;
            }
            for p in &self.action {
                orbit[p.apply(v as u32) as usize] = next;
            }
            next += 1;
        }
        orbit
    }

    /// Whether the action is free on vertices.
    pub fn is_free(&self) -> bool {
        (0..self.group.order())
            .filter(|&g| g != self.group.identity())
            .all(|g| (0..self.num_vertices as u32).all(|v| self.action[g].apply(v) != v))
    }

    pub fn validate(&self) -> RegularityReport {
        let pointwise_fixing = (0..self.group.order()).all(|g| {
            let p = &self.action[g];
            self.simplices.iter().skip(1).all(|l| {
                l.iter().par_bridge().all(|s| {
                    let (img, _) = permute_simplex(p, s);
                    img.as_slice() != s || s.iter().all(|&v| p.apply(v) == v)
                })
            })
        });
        let fixed_sets_full = all_subgroups(&self.group).iter().all(|h| {
            self.simplices.iter().skip(1).all(|l| {
                l.iter().par_bridge().all(|s| {
                    let stable = h
                        .members()
                        .iter()
                        .all(|&g| permute_simplex(&self.action[g], s).0.as_slice() == s);
                    !stable
                        || h.members()
                            .iter()
                            .all(|&g| s.iter().all(|&v| self.action[g].apply(v) == v))
                })
            })
        });
        let quotient_safe = self.orbit_images_are_simplicial();
        RegularityReport {
            fixed_sets_full,
            pointwise_fixing,
            quotient_safe,
        }
    }

    fn orbit_images_are_simplicial(&self) -> bool {
        let orbit = self.vertex_orbits();
        // two faces of one simplex in the same orbit force two of its
        // vertices into the same orbit, so edges suffice for the first part
        if !self
            .simplices(1)
            .iter()
            .all(|e| orbit[e[0] as usize] != orbit[e[1] as usize])
        {
            return false;
        }
        self.simplices.iter().enumerate().all(|(d, l)| {
            let orbits = (0..l.len())
                .filter(|&i| (0..self.group.order()).all(|g| self.act(g, d, i).0 >= i))
                .count();
            let mut data = Vec::with_capacity(l.data.len());
            for s in l.iter() {
                let mut img: Vec<u32> = s.iter().map(|&v| orbit[v as usize]).collect();
                img.sort_unstable();
                data.extend(img);
            }
            SimplexList::from_unsorted(d + 1, data).len() == orbits
        })
    }

    /// Serializable form: maximal simplices plus generator permutations.
    pub fn to_spec(&self) -> ComplexSpec {
        ComplexSpec {
            vertices: self.num_vertices,
            simplices: self.facets(),
            group: Some(
                self.group
                    .generators()
                    .iter()
                    .map(|&g| self.group.element(g).images().to_vec())
                    .collect(),
            ),
            action: self
                .group
                .generators()
                .iter()
                .map(|&g| self.action[g].images().to_vec())
                .collect(),
        }
    }

    pub fn from_spec(spec: &ComplexSpec) -> Result<GComplex> {
        let group = match &spec.group {
            Some(gens) if !gens.is_empty() => {
                let degree = gens[0].len();
                let perms: Vec<Perm> = gens
                    .iter()
                    .map(|g| Perm::new(g.clone()))
                    .collect::<Result<_>>()?;
                crate::perm_group::group_from_generators(degree, &perms)?
            }
            _ => FiniteGroup::trivial(),
        };
        let mut images = Vec::new();
        for k in 0..group.generators().len() {
            let img = spec
                .action
                .get(k)
                .ok_or_else(|| Error::Scene("fewer action permutations than generators".into()))?;
            images.push(Perm::new(img.clone())?);
        }
        if group.generators().len() != spec.action.len() && spec.group.is_some() {
            return Err(Error::Scene(
                "action must list one vertex permutation per listed generator".into(),
            ));
        }
        GComplex::from_facets(spec.vertices, &spec.simplices, group, &images)
    }
}

/// JSON form of a complex with action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub vertices: usize,
    pub simplices: Vec<Vec<u32>>,
    /// Generators of the acting group as permutations; absent for trivial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<Vec<u32>>>,
    /// Vertex permutation for each generator, in order.
    #[serde(default)]
    pub action: Vec<Vec<u32>>,
}

fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Number of chains `σ_0 ⊊ … ⊊ σ_k` ending at a fixed `d`-simplex, for all `k`.
fn chain_counts(max_dim: usize) -> Vec<Vec<u128>> {
    let binom = |n: usize, k: usize| -> u128 {
        let mut r = 1u128;
        for i in 0..k {
            r = r * (n - i) as u128 / (i + 1) as u128;
        }
        r
    };
    // c[d][k]
    let mut c: Vec<Vec<u128>> = Vec::new();
    for d in 0..=max_dim {
        let mut row = vec![0u128; d + 1];
        row[0] = 1;
        for k in 1..=d {
            row[k] = (0..d)
                .map(|j| binom(d + 1, j + 1).saturating_mul(*c[j].get(k - 1).unwrap_or(&0)))
                .sum();
        }
        c.push(row);
    }
    c
}

/// Predicted f-vector of the barycentric subdivision.
pub fn sd_f_vector(f: &[usize]) -> Vec<u128> {
    if f.is_empty() {
        return Vec::new();
    }
    let c = chain_counts(f.len() - 1);
    (0..f.len())
        .map(|k| {
            (k..f.len())
                .map(|d| (f[d] as u128).saturating_mul(c[d][k]))
                .sum()
        })
        .collect()
}

/// Chains of nonempty submasks ending at `full`, as mask lists.
fn mask_chains(full: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![full]];
    let mut sub = (full - 1) & full;
    while sub > 0 {
        for mut c in mask_chains(sub) {
            c.push(full);
            out.push(c);
        }
        sub = (sub - 1) & full;
    }
    out
}

/// First flat index of each dimension in (dimension, lex) numbering.
pub fn flat_offsets(x: &GComplex) -> Vec<usize> {
    let mut off = vec![0];
    for l in &x.simplices {
        off.push(off.last().unwrap() + l.len());
    }
    off
}

/// Barycentric subdivision. The vertex of `sd X` for the `i`-th `d`-simplex
/// of `X` has index `offset[d] + i`, so the action on `sd X` preserves the
/// vertex order within every simplex.
pub fn sd(x: &GComplex) -> Result<GComplex> {
    sd_capped(x, DEFAULT_SIMPLEX_CAP)
}

pub fn sd_capped(x: &GComplex, cap: usize) -> Result<GComplex> {
    let predicted: u128 = sd_f_vector(&x.f_vector()).iter().sum();
    if predicted > cap as u128 {
        return Err(Error::SimplexCapExceeded {
            cap,
            needed: predicted.min(usize::MAX as u128) as usize,
        });
    }
    if x.is_empty() {
        return Ok(GComplex::empty(Arc::clone(&x.group)));
    }
    let off = flat_offsets(x);
    let top = x.simplices.len();
    let templates: Vec<Vec<Vec<u32>>> = (0..top)
        .map(|d| mask_chains((1u32 << (d + 1)) - 1))
        .collect();
    let mut data: Vec<Vec<u32>> = vec![Vec::new(); top];
    for d in 0..top {
        let parts: Vec<Vec<Vec<u32>>> = x.simplices[d]
            .iter()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|s| {
                let n_masks = 1usize << (d + 1);
                let mut face_index = vec![0u32; n_masks];
                for (m, slot) in face_index.iter_mut().enumerate().skip(1) {
                    let f: Vec<u32> = (0..=d).filter(|i| m >> i & 1 == 1).map(|i| s[i]).collect();
                    let e = f.len() - 1;
                    *slot = (off[e] + x.simplices[e].position(&f).expect("face")) as u32;
                }
                let mut local: Vec<Vec<u32>> = vec![Vec::new(); d + 1];
                for t in &templates[d] {
                    local[t.len() - 1].extend(t.iter().map(|&m| face_index[m as usize]));
                }
                local
            })
            .collect();
        for local in parts {
            for (k, v) in local.into_iter().enumerate() {
                data[k].extend(v);
            }
        }
    }
    let simplices: Vec<SimplexList> = data
        .into_iter()
        .enumerate()
        .map(|(k, v)| SimplexList::from_unsorted(k + 1, v))
        .collect();
    let n = off[top];
    let action: Vec<Perm> = (0..x.group.order())
        .into_par_iter()
        .map(|g| {
            let mut img = Vec::with_capacity(n);
            for d in 0..top {
                for i in 0..x.simplices[d].len() {
                    img.push((off[d] + x.act(g, d, i).0) as u32);
                }
            }
            Perm::new(img).expect("bijection")
        })
        .collect();
    let out = GComplex {
        num_vertices: n,
        simplices,
        group: Arc::clone(&x.group),
        action,
    };
    debug_assert!(out.check_action().is_ok());
    Ok(out)
}

/// Join with diagonal action; vertices of `y` are shifted past those of `x`.
pub fn join(x: &GComplex, y: &GComplex) -> Result<GComplex> {
    join_capped(x, y, DEFAULT_SIMPLEX_CAP)
}

pub fn join_capped(x: &GComplex, y: &GComplex, cap: usize) -> Result<GComplex> {
    if !same_group(&x.group, &y.group) {
        return Err(Error::MismatchedGroups);
    }
    let (fx, fy) = (x.f_vector(), y.f_vector());
    let needed: usize = fx.iter().sum::<usize>()
        + fy.iter().sum::<usize>()
        + fx.iter().sum::<usize>() * fy.iter().sum::<usize>();
    if needed > cap {
        return Err(Error::SimplexCapExceeded { cap, needed });
    }
    let nx = x.num_vertices as u32;
    let top = if x.is_empty() || y.is_empty() {
        fx.len().max(fy.len())
    } else {
        fx.len() + fy.len()
    };
    let mut data: Vec<Vec<u32>> = vec![Vec::new(); top];
    for (d, l) in x.simplices.iter().enumerate() {
        data[d].extend_from_slice(&l.data);
    }
    for (d, l) in y.simplices.iter().enumerate() {
        data[d].extend(l.data.iter().map(|v| v + nx));
    }
    for (i, lx) in x.simplices.iter().enumerate() {
        for (j, ly) in y.simplices.iter().enumerate() {
            let buf = &mut data[i + j + 1];
            for s in lx.iter() {
                for t in ly.iter() {
                    buf.extend_from_slice(s);
                    buf.extend(t.iter().map(|v| v + nx));
                }
            }
        }
    }
    let simplices = data
        .into_iter()
        .enumerate()
        .map(|(k, v)| SimplexList::from_unsorted(k + 1, v))
        .collect();
    let action = (0..x.group.order())
        .map(|g| {
            let mut img = x.action[g].images().to_vec();
            img.extend(y.action[g].images().iter().map(|v| v + nx));
            Perm::new(img).expect("bijection")
        })
        .collect();
    Ok(GComplex {
        num_vertices: x.num_vertices + y.num_vertices,
        simplices,
        group: Arc::clone(&x.group),
        action,
    })
}

/// `X * X * … * X` (`n` factors, left associated).
pub fn n_fold_join(x: &GComplex, n: usize) -> Result<GComplex> {
    n_fold_join_capped(x, n, DEFAULT_SIMPLEX_CAP)
}

pub fn n_fold_join_capped(x: &GComplex, n: usize, cap: usize) -> Result<GComplex> {
    if n == 0 {
        return Err(Error::Precondition("n-fold join needs n >= 1".into()));
    }
    let mut acc = x.clone();
    for _ in 1..n {
        acc = join_capped(&acc, x, cap)?;
    }
    Ok(acc)
}

/// Membership flags for simplices of a parent complex, closed under faces.
#[derive(Clone, Debug)]
pub struct Subcomplex {
    parent: Arc<GComplex>,
    flags: Vec<Vec<bool>>,
}

impl PartialEq for Subcomplex {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.flags == other.flags
    }
}

impl Subcomplex {
    pub fn new(parent: &Arc<GComplex>, flags: Vec<Vec<bool>>) -> Result<Subcomplex> {
        if flags.len() != parent.simplices.len()
            || flags
                .iter()
                .zip(&parent.simplices)
                .any(|(f, l)| f.len() != l.len())
        {
            return Err(Error::DimensionMismatch(
                "flags must match the parent's f-vector".into(),
            ));
        }
        let s = Subcomplex {
            parent: Arc::clone(parent),
            flags,
        };
        for d in 1..s.flags.len() {
            for (i, sim) in parent.simplices[d].iter().enumerate() {
                if !s.flags[d][i] {
                    continue;
                }
                for k in 0..sim.len() {
                    let mut f = sim.to_vec();
                    f.remove(k);
                    if !s.flags[d - 1][parent.simplices[d - 1].position(&f).expect("face")] {
                        return Err(Error::NotSubcomplex(format!(
                            "{sim:?} present without face {f:?}"
                        )));
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn empty(parent: &Arc<GComplex>) -> Subcomplex {
        Subcomplex {
            parent: Arc::clone(parent),
            flags: parent
                .simplices
                .iter()
                .map(|l| vec![false; l.len()])
                .collect(),
        }
    }

    pub fn full(parent: &Arc<GComplex>) -> Subcomplex {
        Subcomplex {
            parent: Arc::clone(parent),
            flags: parent
                .simplices
                .iter()
                .map(|l| vec![true; l.len()])
                .collect(),
        }
    }

    /// All simplices whose vertices satisfy `keep`.
    pub fn induced(parent: &Arc<GComplex>, keep: impl Fn(u32) -> bool + Sync) -> Subcomplex {
        let flags = parent
            .simplices
            .iter()
            .map(|l| {
                l.iter()
                    .collect::<Vec<_>>()
                    .par_iter()
                    .map(|s| s.iter().all(|&v| keep(v)))
                    .collect()
            })
            .collect();
        Subcomplex {
            parent: Arc::clone(parent),
            flags,
        }
    }

    /// Smallest subcomplex containing the given simplices.
    pub fn generated_by(parent: &Arc<GComplex>, simplices: &[Vec<u32>]) -> Result<Subcomplex> {
        let mut s = Subcomplex::empty(parent);
        for sim in simplices {
            let mut sim = sim.clone();
            sim.sort_unstable();
            let k = sim.len();
            if k == 0 || k > 63 {
                return Err(Error::NotSubcomplex(format!("{sim:?}")));
            }
            for mask in 1u64..(1u64 << k) {
                let f: Vec<u32> = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| sim[i])
                    .collect();
                let d = f.len() - 1;
                let i = parent.simplices(d).position(&f).ok_or_else(|| {
                    Error::NotSubcomplex(format!("{f:?} is not a simplex of the parent"))
                })?;
                s.flags[d][i] = true;
            }
        }
        Ok(s)
    }

    pub fn parent(&self) -> &Arc<GComplex> {
        &self.parent
    }

    pub fn flags(&self) -> &[Vec<bool>] {
        &self.flags
    }

    pub fn contains(&self, d: usize, i: usize) -> bool {
        self.flags
            .get(d)
            .and_then(|f| f.get(i))
            .copied()
            .unwrap_or(false)
    }

    pub fn contains_simplex(&self, s: &[u32]) -> bool {
        if s.is_empty() {
            return false;
        }
        let d = s.len() - 1;
        self.parent
            .simplices(d)
            .position(s)
            .is_some_and(|i| self.contains(d, i))
    }

    pub fn count(&self, d: usize) -> usize {
        self.flags
            .get(d)
            .map_or(0, |f| f.iter().filter(|&&b| b).count())
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f: Vec<usize> = (0..self.flags.len()).map(|d| self.count(d)).collect();
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn dim(&self) -> isize {
        self.f_vector().len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.flags.iter().all(|f| f.iter().all(|&b| !b))
    }

    /// Member simplices of dimension `d`, in lex order.
    pub fn simplices(&self, d: usize) -> Vec<Vec<u32>> {
        let l = self.parent.simplices(d);
        (0..l.len())
            .filter(|&i| self.contains(d, i))
            .map(|i| l.get(i).to_vec())
            .collect()
    }

    fn check_parent(&self, other: &Subcomplex) -> Result<()> {
        if Arc::ptr_eq(&self.parent, &other.parent) || *self.parent == *other.parent {
            Ok(())
        } else {
            Err(Error::NotSubcomplex(
                "subcomplexes of different complexes".into(),
            ))
        }
    }

    fn zip(&self, other: &Subcomplex, f: impl Fn(bool, bool) -> bool) -> Result<Subcomplex> {
        self.check_parent(other)?;
        let flags = self
            .flags
            .iter()
            .zip(&other.flags)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
            .collect();
        Ok(Subcomplex {
            parent: Arc::clone(&self.parent),
            flags,
        })
    }

    pub fn union(&self, other: &Subcomplex) -> Result<Subcomplex> {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Subcomplex) -> Result<Subcomplex> {
        self.zip(other, |a, b| a && b)
    }

    pub fn is_subset_of(&self, other: &Subcomplex) -> bool {
        self.check_parent(other).is_ok()
            && self
                .flags
                .iter()
                .zip(&other.flags)
                .all(|(a, b)| a.iter().zip(b).all(|(&x, &y)| !x || y))
    }

    pub fn same_simplices(&self, other: &Subcomplex) -> bool {
        self.check_parent(other).is_ok() && self.flags == other.flags
    }

    /// Whether each listed group element maps the subcomplex into itself.
    pub fn is_invariant_under(&self, elements: &[usize]) -> bool {
        elements.iter().all(|&g| {
            (0..self.flags.len()).all(|d| {
                (0..self.flags[d].len())
                    .all(|i| !self.flags[d][i] || self.flags[d][self.parent.act(g, d, i).0])
            })
        })
    }

    /// Vertices in the subcomplex, ascending.
    pub fn vertices(&self) -> Vec<u32> {
        (0..self.count_all_vertices())
            .filter(|&v| self.contains(0, v))
            .map(|v| v as u32)
            .collect()
    }

    fn count_all_vertices(&self) -> usize {
        self.flags.first().map_or(0, Vec::len)
    }

    /// The subcomplex as a complex on its own vertices (renumbered in
    /// increasing order), acted on by `group` where element `w` acts as the
    /// parent element `lifts[w]`.
    pub fn to_complex(&self, group: &Arc<FiniteGroup>, lifts: &[usize]) -> Result<GComplex> {
        let verts = self.vertices();
        let mut new_index = vec![u32::MAX; self.count_all_vertices()];
        for (k, &v) in verts.iter().enumerate() {
            new_index[v as usize] = k as u32;
        }
        let mut simplices: Vec<SimplexList> = Vec::new();
        for d in 0..self.flags.len() {
            let mut data = Vec::new();
            for s in self.simplices(d) {
                data.extend(s.iter().map(|&v| new_index[v as usize]));
            }
            if data.is_empty() {
                break;
            }
            simplices.push(SimplexList::from_unsorted(d + 1, data));
        }
        let mut action = Vec::with_capacity(group.order());
        for &g in lifts {
            let p = self.parent.action(g);
            let img: Vec<u32> = verts
                .iter()
                .map(|&v| {
                    let w = new_index[p.apply(v) as usize];
                    if w == u32::MAX {
                        Err(Error::NotInvariant("action leaves the subcomplex".into()))
                    } else {
                        Ok(w)
                    }
                })
                .collect::<Result<_>>()?;
            action.push(Perm::new(img)?);
        }
        GComplex::with_action(verts.len(), simplices, Arc::clone(group), action)
    }

    /// The subcomplex as a complex with the trivial group.
    pub fn to_plain_complex(&self) -> GComplex {
        self.to_complex(&FiniteGroup::trivial(), &[self.parent.group.identity()])
            .expect("trivial action")
    }

    /// Chain complex on the member simplices (a subcomplex of the parent's).
    pub fn chain_complex(&self) -> ChainComplex {
        self.parent
            .chain_complex()
            .select(&self.flags)
            .expect("subcomplex")
    }

    /// `C_*(self, sub)`: simplices of `self` not in `sub`.
    pub fn relative_chain_complex(&self, sub: &Subcomplex) -> Result<ChainComplex> {
        if !sub.is_subset_of(self) {
            return Err(Error::NotSubcomplex(
                "relative pair needs sub ⊆ self".into(),
            ));
        }
        let keep: Vec<Vec<bool>> = self
            .flags
            .iter()
            .zip(&sub.flags)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| x && !y).collect())
            .collect();
        self.parent.chain_complex().select(&keep)
    }

    /// Image under barycentric subdivision, as a subcomplex of `sdx = sd(parent)`.
    pub fn subdivide(&self, sdx: &Arc<GComplex>) -> Subcomplex {
        let mut member = Vec::new();
        for f in &self.flags {
            member.extend_from_slice(f);
        }
        assert_eq!(
            member.len(),
            sdx.num_vertices(),
            "sdx must be the subdivision of the parent"
        );
        Subcomplex::induced(sdx, |v| member[v as usize])
    }
}

/// `outer` as a complex on its own vertices (see [`Subcomplex::to_complex`])
/// together with `inner ⊆ outer` as a subcomplex of it, and the parent vertex
/// of each new vertex.
pub fn pair_complex(
    outer: &Subcomplex,
    inner: &Subcomplex,
    group: &Arc<FiniteGroup>,
    lifts: &[usize],
) -> Result<(Arc<GComplex>, Subcomplex, Vec<u32>)> {
    if !inner.is_subset_of(outer) {
        return Err(Error::NotSubcomplex(
            "inner is not contained in outer".into(),
        ));
    }
    let x = Arc::new(outer.to_complex(group, lifts)?);
    let vertices = outer.vertices();
    let mut simplices = Vec::new();
    for d in 0..(inner.dim() + 1) as usize {
        simplices.extend(inner.simplices(d).into_iter().map(|s| {
            s.iter()
                .map(|v| vertices.binary_search(v).expect("vertex of outer") as u32)
                .collect::<Vec<u32>>()
        }));
    }
    let sub = Subcomplex::generated_by(&x, &simplices)?;
    Ok((x, sub, vertices))
}

/// `C_*(X, A)`: simplices of `X` not in `A`, boundary followed by projection.
pub fn relative_complex(x: &Arc<GComplex>, a: &Subcomplex) -> Result<ChainComplex> {
    Subcomplex::full(x).relative_chain_complex(a)
}

fn require_fixed_sets_full(x: &GComplex) -> Result<()> {
    if x.validate().fixed_sets_full {
        Ok(())
    } else {
        Err(Error::Precondition(
            "fixed sets are not subcomplexes; subdivide first".into(),
        ))
    }
}

fn fixed_unchecked(x: &Arc<GComplex>, h: &Subgroup) -> Subcomplex {
    let fixed: Vec<bool> = (0..x.num_vertices as u32)
        .map(|v| h.members().iter().all(|&g| x.action[g].apply(v) == v))
        .collect();
    Subcomplex::induced(x, |v| fixed[v as usize])
}

/// `X^H`: all simplices whose vertices are fixed by every element of `H`.
pub fn fixed_subcomplex(x: &Arc<GComplex>, h: &Subgroup) -> Result<Subcomplex> {
    if !same_group(&x.group, h.group()) {
        return Err(Error::MismatchedGroups);
    }
    require_fixed_sets_full(x)?;
    Ok(fixed_unchecked(x, h))
}

/// `X^{>K}`: union of `X^H` over subgroups `H` strictly containing `K`.
pub fn singular_subcomplex(x: &Arc<GComplex>, k: &Subgroup) -> Result<Subcomplex> {
    if !same_group(&x.group, k.group()) {
        return Err(Error::MismatchedGroups);
    }
    require_fixed_sets_full(x)?;
    let mut acc = Subcomplex::empty(x);
    for h in all_subgroups(&x.group) {
        if h.order() > k.order() && k.is_subgroup_of(&h) {
            acc = acc.union(&fixed_unchecked(x, &h))?;
        }
    }
    let n = crate::perm_group::normalizer(&x.group, k)?;
    assert!(
        acc.is_invariant_under(n.members()),
        "singular set must be normalizer-invariant"
    );
    Ok(acc)
}

/// `X^K` as a complex acted on by the Weyl group `W = N(K)/K`.
pub fn weyl_restriction(x: &Arc<GComplex>, w: &WeylGroup) -> Result<(Subcomplex, GComplex)> {
    let fixed = fixed_subcomplex(x, &w.kernel)?;
    let y = fixed.to_complex(&w.group, &w.lifts)?;
    Ok((fixed, y))
}

/// Output of the star-neighborhood construction in `sd²(Y)`.
#[derive(Clone, Debug)]
pub struct StarNeighborhood {
    pub ysd2: Arc<GComplex>,
    /// `sd²(A)`.
    pub a: Subcomplex,
    /// Closed star of `sd²(A)`.
    pub ubar: Subcomplex,
    /// Simplices missing the open star.
    pub b: Subcomplex,
    /// `B ∩ Ubar`.
    pub d: Subcomplex,
}

/// Subdivides `Y` twice and splits it along the star of `A`. `A` must be
/// invariant and contain the singular set `Y^{>e}`.
pub fn star_neighborhood(y: &Arc<GComplex>, a: &Subcomplex) -> Result<StarNeighborhood> {
    star_neighborhood_capped(y, a, DEFAULT_SIMPLEX_CAP)
}

pub fn star_neighborhood_capped(
    y: &Arc<GComplex>,
    a: &Subcomplex,
    cap: usize,
) -> Result<StarNeighborhood> {
    if !Arc::ptr_eq(a.parent(), y) && **a.parent() != **y {
        return Err(Error::NotSubcomplex("A must be a subcomplex of Y".into()));
    }
    let all: Vec<usize> = (0..y.group.order()).collect();
    if !a.is_invariant_under(&all) {
        return Err(Error::NotInvariant(
            "A is not invariant under the group".into(),
        ));
    }
    let singular = singular_subcomplex(y, &Subgroup::trivial(&y.group))?;
    if !singular.is_subset_of(a) {
        return Err(Error::Precondition(
            "A does not contain the singular set".into(),
        ));
    }
    let y1 = Arc::new(sd_capped(y, cap)?);
    let a1 = a.subdivide(&y1);
    let y2 = Arc::new(sd_capped(&y1, cap)?);
    let a2 = a1.subdivide(&y2);
    let in_a = |v: u32| a2.contains(0, v as usize);
    let touches: Vec<Vec<bool>> = y2
        .simplices
        .iter()
        .map(|l| {
            l.iter()
                .collect::<Vec<_>>()
                .par_iter()
                .map(|s| s.iter().any(|&v| in_a(v)))
                .collect()
        })
        .collect();
    // closure of the open star: all faces of simplices meeting A
    let mut ubar_flags: Vec<Vec<bool>> = touches.clone();
    for d in (1..y2.simplices.len()).rev() {
        for i in 0..y2.simplices[d].len() {
            if !ubar_flags[d][i] {
                continue;
            }
            let s = y2.simplices[d].get(i).to_vec();
            for k in 0..s.len() {
                let mut f = s.clone();
                f.remove(k);
                let j = y2.simplices[d - 1].position(&f).expect("face");
                ubar_flags[d - 1][j] = true;
            }
        }
    }
    let ubar = Subcomplex {
        parent: Arc::clone(&y2),
        flags: ubar_flags,
    };
    let b = Subcomplex::induced(&y2, |v| !in_a(v));
    let d = b.intersection(&ubar)?;
    Ok(StarNeighborhood {
        ysd2: y2,
        a: a2,
        ubar,
        b,
        d,
    })
}

/// Orbit space of an action whose orbits of simplices form a simplicial complex.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub complex: GComplex,
    /// Quotient vertex of every vertex of the original complex.
    pub vertex_map: Vec<u32>,
}

/// `X/G` with trivial action. Requires `quotient_safe`; with `require_free`
/// the action must also be free on vertices.
pub fn quotient_complex(x: &GComplex, require_free: bool) -> Result<Quotient> {
    if !x.validate().quotient_safe {
        return Err(Error::Precondition(
            "action is not quotient-safe; subdivide first".into(),
        ));
    }
    if require_free && !x.is_free() {
        return Err(Error::Precondition("action is not free".into()));
    }
    let vertex_map = x.vertex_orbits();
    let n = vertex_map
        .iter()
        .map(|&o| o as usize + 1)
        .max()
        .unwrap_or(0);
    let mut simplices = Vec::new();
    for (d, l) in x.simplices.iter().enumerate() {
        let mut data = Vec::with_capacity(l.data.len());
        let mut orbits = 0usize;
        for (i, s) in l.iter().enumerate() {
            if (0..x.group.order()).all(|g| x.act(g, d, i).0 >= i) {
                orbits += 1;
            }
            let mut img: Vec<u32> = s.iter().map(|&v| vertex_map[v as usize]).collect();
            img.sort_unstable();
            data.extend(img);
        }
        let list = SimplexList::from_unsorted(d + 1, data);
        if list.len() != orbits {
            return Err(Error::Precondition(format!(
                "{orbits} orbits of {d}-simplices but {} image simplices; the action is not regular",
                list.len()
            )));
        }
        simplices.push(list);
    }
    let complex = GComplex {
        num_vertices: n,
        simplices,
        group: FiniteGroup::trivial(),
        action: vec![Perm::identity(n)],
    };
    complex.check_face_closed()?;
    Ok(Quotient {
        complex,
        vertex_map,
    })
}

/// Chain-level orbit projection `C_*(X) → C_*(X/G)`.
pub fn quotient_projection(x: &GComplex, q: &Quotient) -> Vec<IntMatrix> {
    (0..x.simplices.len())
        .map(|d| {
            let t: Vec<(usize, usize, Int)> = x.simplices[d]
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let mut img: Vec<u32> = s.iter().map(|&v| q.vertex_map[v as usize]).collect();
                    img.sort_unstable();
                    (
                        q.complex.simplices[d].position(&img).expect("image"),
                        i,
                        Int::ONE,
                    )
                })
                .collect();
            IntMatrix::from_triplets(q.complex.count(d), x.count(d), t)
        })
        .collect()
}

/// Index of a simplex in the flat (dimension, lex) numbering.
pub fn flat_index(x: &GComplex, s: &[u32]) -> Option<usize> {
    let d = s.len().checked_sub(1)?;
    let off = flat_offsets(x);
    x.simplices(d).position(s).map(|i| off[d] + i)
}

/// Vertex-orbit sizes, keyed by orbit index.
pub fn orbit_sizes(x: &GComplex) -> HashMap<u32, usize> {
    let mut m = HashMap::new();
    for o in x.vertex_orbits() {
        *m.entry(o).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{integral_homology, FgAbGroup};

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    fn cyc(m: u32, shift: u32) -> Perm {
        Perm::new((0..m).map(|v| (v + shift) % m).collect()).unwrap()
    }

    fn polygon(n: u32) -> Vec<Vec<u32>> {
        (0..n).map(|i| vec![i, (i + 1) % n]).collect()
    }

    fn antipodal_square() -> GComplex {
        GComplex::from_facets(4, &polygon(4), FiniteGroup::cyclic(2), &[cyc(4, 2)]).unwrap()
    }

    fn rotating_triangle() -> GComplex {
        GComplex::from_facets(3, &polygon(3), FiniteGroup::cyclic(3), &[cyc(3, 1)]).unwrap()
    }

    fn trivial_s0(group: &Arc<FiniteGroup>) -> GComplex {
        let gens = vec![Perm::identity(2); group.generators().len()];
        GComplex::from_facets(2, &[], Arc::clone(group), &gens).unwrap()
    }

    #[test]
    fn validation_examples() {
        let x = GComplex::trivial(3, &polygon(3)).unwrap();
        assert_eq!(
            x.validate(),
            RegularityReport {
                fixed_sets_full: true,
                pointwise_fixing: true,
                quotient_safe: true
            }
        );
        let flags = |r: RegularityReport| (r.fixed_sets_full, r.pointwise_fixing, r.quotient_safe);
        assert_eq!(flags(antipodal_square().validate()), (true, true, false));
        assert_eq!(flags(rotating_triangle().validate()), (true, true, false));
        // an edge flipped end to end
        let flip =
            GComplex::from_facets(2, &[vec![0, 1]], FiniteGroup::cyclic(2), &[cyc(2, 1)]).unwrap();
        assert_eq!(flags(flip.validate()), (false, false, false));
        assert_eq!(flags(sd(&flip).unwrap().validate()), (true, true, true));
    }

    #[test]
    fn structural_errors() {
        // rotation of a path is not simplicial
        let path = vec![vec![0, 1], vec![1, 2]];
        let e = GComplex::from_facets(3, &path, FiniteGroup::cyclic(3), &[cyc(3, 1)]);
        assert!(matches!(e, Err(Error::ActionNotSimplicial(_))));
        // a generator of order 2 cannot represent C_3
        let e = GComplex::from_facets(4, &polygon(4), FiniteGroup::cyclic(3), &[cyc(4, 2)]);
        assert!(matches!(e, Err(Error::ActionNotHomomorphism(_))));
    }

    #[test]
    fn subdivision() {
        let t = GComplex::trivial(3, &polygon(3)).unwrap();
        let s = sd(&t).unwrap();
        assert_eq!(s.f_vector(), vec![6, 6]);
        let tet = GComplex::trivial(4, &[vec![0, 1, 2, 3]]).unwrap();
        let s = sd(&tet).unwrap();
        let predicted: Vec<usize> = sd_f_vector(&tet.f_vector())
            .into_iter()
            .map(|c| c as usize)
            .collect();
        assert_eq!(s.f_vector(), predicted);
        assert_eq!(s.f_vector(), vec![15, 50, 60, 24]);
        assert_eq!(
            integral_homology(&s.chain_complex()),
            vec![g("Z"), g("0"), g("0"), g("0")]
        );
        let sq = sd(&antipodal_square()).unwrap();
        assert!(sq.validate().quotient_safe);
        let tri = sd(&rotating_triangle()).unwrap();
        assert!(!tri.validate().quotient_safe);
        assert!(sd(&tri).unwrap().validate().quotient_safe);
        assert!(matches!(
            sd_capped(&tet, 100),
            Err(Error::SimplexCapExceeded { .. })
        ));
    }

    #[test]
    fn joins() {
        let s0 = GComplex::trivial(2, &[]).unwrap();
        let c = join(&s0, &s0).unwrap();
        assert_eq!(c.f_vector(), vec![4, 4]);
        assert_eq!(integral_homology(&c.chain_complex()), vec![g("Z"), g("Z")]);
        let t = GComplex::trivial(3, &polygon(3)).unwrap();
        let s3 = join(&t, &t).unwrap();
        assert_eq!(
            integral_homology(&s3.chain_complex()),
            vec![g("Z"), g("0"), g("0"), g("Z")]
        );
        let e = GComplex::empty(FiniteGroup::trivial());
        assert_eq!(join(&t, &e).unwrap(), t);
        assert_eq!(n_fold_join(&t, 1).unwrap(), t);
        let sq = antipodal_square();
        let s3 = n_fold_join(&sq, 2).unwrap();
        assert!(s3.is_free());
        assert_eq!(
            integral_homology(&s3.chain_complex()),
            vec![g("Z"), g("0"), g("0"), g("Z")]
        );
        assert!(matches!(join(&sq, &t), Err(Error::MismatchedGroups)));
    }

    #[test]
    fn fixed_and_singular_sets() {
        let sq = antipodal_square();
        let grp = Arc::clone(sq.group());
        let s2 = Arc::new(join(&trivial_s0(&grp), &sq).unwrap());
        let whole = Subgroup::whole(&grp);
        let e = Subgroup::trivial(&grp);
        let fixed = fixed_subcomplex(&s2, &whole).unwrap();
        assert_eq!(fixed.simplices(0), vec![vec![0], vec![1]]);
        assert_eq!(fixed.f_vector(), vec![2]);
        let sing = singular_subcomplex(&s2, &e).unwrap();
        assert!(sing.same_simplices(&fixed));
        assert!(singular_subcomplex(&s2, &whole).unwrap().is_empty());
        let sqa = Arc::new(sq);
        assert!(fixed_subcomplex(&sqa, &whole).unwrap().is_empty());
        assert!(singular_subcomplex(&sqa, &e).unwrap().is_empty());
    }

    #[test]
    fn star_neighborhoods() {
        let hex = Arc::new(GComplex::trivial(6, &polygon(6)).unwrap());
        let none = Subcomplex::empty(&hex);
        let st = star_neighborhood(&hex, &none).unwrap();
        assert!(st.ubar.is_empty() && st.d.is_empty());
        assert!(st.b.same_simplices(&Subcomplex::full(&st.ysd2)));
        let v = Subcomplex::generated_by(&hex, &[vec![0]]).unwrap();
        let st = star_neighborhood(&hex, &v).unwrap();
        assert_eq!(
            integral_homology(&st.b.chain_complex()),
            vec![g("Z"), g("0")]
        );
        assert!(st
            .b
            .union(&st.ubar)
            .unwrap()
            .same_simplices(&Subcomplex::full(&st.ysd2)));
        assert!(st.b.intersection(&st.ubar).unwrap().same_simplices(&st.d));
        assert_eq!(
            integral_homology(&st.ubar.chain_complex()),
            vec![g("Z"), g("0")]
        );
    }

    #[test]
    fn quotients() {
        let t = GComplex::trivial(3, &polygon(3)).unwrap();
        let q = quotient_complex(&t, false).unwrap();
        assert_eq!(q.complex.f_vector(), t.f_vector());
        let sq = antipodal_square();
        assert!(quotient_complex(&sq, true).is_err());
        let sq2 = sd(&sd(&sq).unwrap()).unwrap();
        let q = quotient_complex(&sq2, true).unwrap();
        assert_eq!(
            integral_homology(&q.complex.chain_complex()),
            vec![g("Z"), g("Z")]
        );
        assert_eq!(
            sq2.chain_complex().euler_characteristic(),
            2 * q.complex.chain_complex().euler_characteristic()
        );
    }

    #[test]
    fn spec_round_trip() {
        let sq = antipodal_square();
        let spec = sq.to_spec();
        let json = serde_json::to_string(&spec).unwrap();
        let back = GComplex::from_spec(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.f_vector(), sq.f_vector());
        assert_eq!(back.action(1), sq.action(1));
    }
}
