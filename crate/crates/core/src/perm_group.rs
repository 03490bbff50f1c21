//! Finite permutation groups with full multiplication tables.
//!
//! Groups are small (the default order cap is 5040), so every group is
//! materialized: elements, a Cayley table and inverses. Subgroups are sorted
//! lists of element indices into their parent group.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 5040;

/// A bijection of `{0..d-1}`, stored by images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn new(images: Vec<u32>) -> Result<Perm> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            let i = i as usize;
            if i >= d || seen[i] {
                return Err(Error::NotAPermutation { degree: d, images });
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    pub fn identity(degree: usize) -> Perm {
        Perm((0..degree as u32).collect())
    }

    /// Builds a permutation from disjoint cycles, e.g. `[[0, 1, 2]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Perm> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if a as usize >= degree || b as usize >= degree {
                    return Err(Error::NotAPermutation {
                        degree,
                        images: cycle.to_vec(),
                    });
                }
                images[a as usize] = b;
            }
        }
        Perm::new(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Perm>,
    /// `mult[a * n + b]` is the index of `a ∘ b`.
    mult: Vec<u32>,
    inv: Vec<u32>,
    generators: Vec<usize>,
    /// For each element, how it was first reached: `(generator position, predecessor)`.
    words: Vec<Option<(usize, usize)>>,
    lookup: HashMap<Perm, usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for FiniteGroup {}

/// Closure of `gens` under composition, with the default order cap.
pub fn group_from_generators(degree: usize, gens: &[Perm]) -> Result<Arc<FiniteGroup>> {
    FiniteGroup::from_generators(degree, gens, DEFAULT_ORDER_CAP).map(Arc::new)
}

impl FiniteGroup {
    pub fn from_generators(degree: usize, gens: &[Perm], cap: usize) -> Result<FiniteGroup> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::NotAPermutation {
                    degree,
                    images: g.0.clone(),
                });
            }
            Perm::new(g.0.clone())?;
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut words = vec![None];
        let mut lookup = HashMap::new();
        lookup.insert(id, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (gi, g) in gens.iter().enumerate() {
                let p = g.compose(&elements[e]);
                if !lookup.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(Error::OrderCapExceeded { cap });
                    }
                    lookup.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                    words.push(Some((gi, e)));
                }
            }
        }
        let n = elements.len();
        let generators: Vec<usize> = gens.iter().map(|g| lookup[g]).collect();
        // Left multiplication by each generator, then rows of the Cayley table
        // follow the BFS words: if a = g ∘ a' then a ∘ b = g ∘ (a' ∘ b).
        let left: Vec<Vec<u32>> = gens
            .iter()
            .map(|g| {
                elements
                    .iter()
                    .map(|x| lookup[&g.compose(x)] as u32)
                    .collect()
            })
            .collect();
        let mut mult = vec![0u32; n * n];
        for b in 0..n {
            mult[b] = b as u32;
        }
        for a in 1..n {
            let (gi, prev) = words[a].expect("non-identity elements have words");
            for b in 0..n {
                let pb = mult[prev * n + b] as usize;
                mult[a * n + b] = left[gi][pb];
            }
        }
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if mult[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        Ok(FiniteGroup {
            degree,
            elements,
            mult,
            inv,
            generators,
            words,
            lookup,
        })
    }

    pub fn trivial() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::from_generators(1, &[], 1).expect("trivial group"))
    }

    /// The cyclic group of order `m` acting regularly on `{0..m-1}`.
    pub fn cyclic(m: usize) -> Arc<FiniteGroup> {
        assert!(m >= 1);
        let gen = Perm((0..m as u32).map(|i| (i + 1) % m as u32).collect());
        Arc::new(FiniteGroup::from_generators(m, &[gen], m.max(1)).expect("cyclic group"))
    }

    /// The symmetric group on `d` points.
    pub fn symmetric(d: usize) -> Result<Arc<FiniteGroup>> {
        let mut gens = Vec::new();
        if d >= 2 {
            gens.push(Perm::from_cycles(d, &[&[0, 1]])?);
            let cyc: Vec<u32> = (0..d as u32).collect();
            gens.push(Perm::from_cycles(d, &[&cyc])?);
        }
        FiniteGroup::from_generators(d.max(1), &gens, DEFAULT_ORDER_CAP).map(Arc::new)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.elements.len() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g a g⁻¹`.
    pub fn conj(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.lookup.get(p).copied()
    }

    /// BFS word for element `i`: the generator positions to apply, rightmost first.
    pub fn word(&self, i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        let mut cur = i;
        while let Some((g, prev)) = self.words[cur] {
            w.push(g);
            cur = prev;
        }
        w.reverse();
        w
    }

    /// Extends an assignment on generators to every element, following BFS
    /// words. `compose(x, y)` must be the composition `x ∘ y`.
    pub fn extend_from_generators<T: Clone>(
        &self,
        identity: T,
        gen_images: &[T],
        compose: impl Fn(&T, &T) -> T,
    ) -> Vec<T> {
        let mut out: Vec<T> = Vec::with_capacity(self.order());
        out.push(identity);
        for i in 1..self.order() {
            let (gi, prev) = self.words[i].expect("word");
            let v = compose(&gen_images[gi], &out[prev]);
            out.push(v);
        }
        out
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(a, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Full-scan check of the group axioms on the table.
    pub fn check_axioms(&self) -> bool {
        let n = self.order();
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a || self.mul(a, self.inv(a)) != 0 {
                return false;
            }
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Subgroup generated by the given elements.
    pub fn closure(self: &Arc<Self>, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut members = vec![0usize];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in gens {
                let y = self.mul(g, x);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        Subgroup {
            group: Arc::clone(self),
            members,
        }
    }
}

#[derive(Clone)]
pub struct Subgroup {
    group: Arc<FiniteGroup>,
    members: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && Arc::ptr_eq(&self.group, &other.group)
            || self.members == other.members && *self.group == *other.group
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, {:?})", self.order(), self.members)
    }
}

impl Subgroup {
    /// Validates closure and identity.
    pub fn from_members(group: &Arc<FiniteGroup>, mut members: Vec<usize>) -> Result<Subgroup> {
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        if members.iter().any(|&m| m >= group.order()) {
            return Err(Error::NotASubgroup("index out of range".into()));
        }
        let set: BTreeSet<usize> = members.iter().copied().collect();
        for &a in &members {
            for &b in &members {
                if !set.contains(&group.mul(a, b)) {
                    return Err(Error::NotASubgroup(format!("{a}*{b} escapes")));
                }
            }
        }
        Ok(Subgroup {
            group: Arc::clone(group),
            members,
        })
    }

    pub fn trivial(group: &Arc<FiniteGroup>) -> Subgroup {
        Subgroup {
            group: Arc::clone(group),
            members: vec![0],
        }
    }

    pub fn whole(group: &Arc<FiniteGroup>) -> Subgroup {
        Subgroup {
            group: Arc::clone(group),
            members: (0..group.order()).collect(),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.group.order()
    }

    /// `g H g⁻¹`.
    pub fn conjugate(&self, g: usize) -> Subgroup {
        let mut members: Vec<usize> = self
            .members
            .iter()
            .map(|&h| self.group.conj(g, h))
            .collect();
        members.sort_unstable();
        Subgroup {
            group: Arc::clone(&self.group),
            members,
        }
    }

    pub fn is_normal(&self) -> bool {
        (0..self.group.order()).all(|g| self.conjugate(g).members == self.members)
    }

    /// Canonical left-coset representatives of `self` in `within` (minimal
    /// element index of each coset), sorted.
    pub fn left_coset_reps(&self, within: &Subgroup) -> Vec<usize> {
        let mut reps = BTreeSet::new();
        for &n in within.members() {
            let rep = self
                .members
                .iter()
                .map(|&k| self.group.mul(n, k))
                .min()
                .expect("nonempty");
            reps.insert(rep);
        }
        reps.into_iter().collect()
    }
}

/// Every subgroup of `g`, sorted by member list.
pub fn all_subgroups(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let n = g.order();
    // cyclic subgroups, each with a single generator
    let mut cyclic: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for a in 0..n {
        let c = g.closure(&[a]);
        cyclic.entry(c.members).or_insert(a);
    }
    let cyc_list: Vec<(Vec<usize>, usize)> = cyclic.into_iter().collect();
    let mut found: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
    for (members, gen) in &cyc_list {
        found.insert(members.clone(), vec![*gen]);
        queue.push_back(members.clone());
    }
    while let Some(h) = queue.pop_front() {
        let gens = found[&h].clone();
        for (c, cg) in &cyc_list {
            if c.iter().all(|x| h.binary_search(x).is_ok()) {
                continue;
            }
            let mut jg = gens.clone();
            jg.push(*cg);
            let j = g.closure(&jg);
            if !found.contains_key(&j.members) {
                found.insert(j.members.clone(), jg);
                queue.push_back(j.members);
            }
        }
    }
    found
        .into_keys()
        .map(|members| {
            assert_eq!(n % members.len(), 0, "Lagrange violated");
            Subgroup {
                group: Arc::clone(g),
                members,
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub representative: Subgroup,
    pub conjugates: Vec<Subgroup>,
}

/// Conjugacy classes ordered by non-increasing order; ties broken by the
/// representative's member list. The last class is the trivial subgroup.
#[derive(Clone, Debug)]
pub struct SubgroupClassList {
    pub classes: Vec<SubgroupClass>,
}

impl SubgroupClassList {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class containing `h`.
    pub fn class_of(&self, h: &Subgroup) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.conjugates.iter().any(|x| x.members == h.members))
    }

    /// `H<i>(order)`, numbering classes from 1 in list order.
    pub fn label(&self, i: usize) -> String {
        format!("H{}({})", i + 1, self.classes[i].representative.order())
    }
}

pub fn conjugacy_classes_of_subgroups(g: &Arc<FiniteGroup>) -> SubgroupClassList {
    let subs = all_subgroups(g);
    let mut by_key: BTreeMap<Vec<usize>, Vec<Subgroup>> = BTreeMap::new();
    for h in subs {
        let key = (0..g.order())
            .map(|x| h.conjugate(x).members)
            .min()
            .expect("nonempty group");
        by_key.entry(key).or_default().push(h);
    }
    let mut classes: Vec<SubgroupClass> = by_key
        .into_iter()
        .map(|(key, conjugates)| SubgroupClass {
            representative: Subgroup {
                group: Arc::clone(g),
                members: key,
            },
            conjugates,
        })
        .collect();
    classes.sort_by(|a, b| {
        b.representative
            .order()
            .cmp(&a.representative.order())
            .then_with(|| a.representative.members.cmp(&b.representative.members))
    });
    SubgroupClassList { classes }
}

pub fn normalizer(g: &Arc<FiniteGroup>, k: &Subgroup) -> Result<Subgroup> {
    if !Arc::ptr_eq(k.group(), g) && **k.group() != **g {
        return Err(Error::NotASubgroup("subgroup of a different group".into()));
    }
    let members: Vec<usize> = (0..g.order())
        .filter(|&x| k.conjugate(x).members == k.members)
        .collect();
    Ok(Subgroup {
        group: Arc::clone(g),
        members,
    })
}

/// `W = N_G(K)/K`, realized as a permutation group on the left cosets of `K`
/// in `N_G(K)`.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub group: Arc<FiniteGroup>,
    pub normalizer: Subgroup,
    pub kernel: Subgroup,
    /// Indexed by elements of the ambient group; `None` outside the normalizer.
    pub projection: Vec<Option<usize>>,
    /// For each element of `W`, the least ambient element projecting to it.
    pub lifts: Vec<usize>,
}

pub fn weyl_group(g: &Arc<FiniteGroup>, k: &Subgroup) -> Result<WeylGroup> {
    let n = normalizer(g, k)?;
    let cosets = k.left_coset_reps(&n);
    let coset_index: HashMap<usize, usize> =
        cosets.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let rep_of = |x: usize| -> usize {
        k.members()
            .iter()
            .map(|&kk| g.mul(x, kk))
            .min()
            .expect("nonempty")
    };
    let degree = cosets.len();
    let perm_of = |x: usize| -> Perm {
        Perm(
            cosets
                .iter()
                .map(|&c| coset_index[&rep_of(g.mul(x, c))] as u32)
                .collect(),
        )
    };
    let mut gens: Vec<Perm> = Vec::new();
    let mut seen = BTreeSet::new();
    for &x in n.members() {
        let p = perm_of(x);
        if !p.is_identity() && seen.insert(p.clone()) {
            gens.push(p);
        }
    }
    let w = Arc::new(FiniteGroup::from_generators(
        degree,
        &gens,
        DEFAULT_ORDER_CAP,
    )?);
    let mut projection = vec![None; g.order()];
    let mut lifts = vec![usize::MAX; w.order()];
    for &x in n.members() {
        let idx = w.index_of(&perm_of(x)).expect("image lies in W");
        projection[x] = Some(idx);
        if lifts[idx] == usize::MAX {
            lifts[idx] = x;
        }
    }
    Ok(WeylGroup {
        group: w,
        normalizer: n,
        kernel: k.clone(),
        projection,
        lifts,
    })
}
