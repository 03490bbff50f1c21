//! Equivariant chains with trivial coefficients.
//!
//! For an action in which every simplex stabilizer fixes the simplex
//! pointwise, `C_n(X)` is a permutation module with one free summand per
//! orbit, so `M ⊗_{ZG} C_*(X)` and `Hom_{ZG}(C_*(X), M)` are computed from
//! integer orbit complexes followed by universal coefficients.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{
    cohomology, homology, integral_homology, AbMap, ChainComplex, DenseMatrix, FgAbGroup,
    HomologyBasis, IntMatrix, Lattice, Reduction, Subquotient,
};
use crate::error::{Error, Result};
use crate::g_complex::{GComplex, Subcomplex};
use crate::integer::Int;
use crate::perm_group::{conjugacy_classes_of_subgroups, FiniteGroup, Perm, Subgroup};

/// An abelian group with trivial group action.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TrivialModule {
    pub underlying: FgAbGroup,
}

impl TrivialModule {
    pub fn new(underlying: FgAbGroup) -> TrivialModule {
        TrivialModule { underlying }
    }

    pub fn z() -> TrivialModule {
        TrivialModule::new(FgAbGroup::z())
    }

    pub fn cyclic(m: i64) -> TrivialModule {
        TrivialModule::new(FgAbGroup::cyclic(m))
    }
}

impl std::fmt::Display for TrivialModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.underlying.fmt(f)
    }
}

impl std::str::FromStr for TrivialModule {
    type Err = Error;

    fn from_str(s: &str) -> Result<TrivialModule> {
        Ok(TrivialModule::new(s.parse()?))
    }
}

/// `g_#` on every chain group: column `i` of `[g][d]` is `±` the basis vector
/// of `g·σ_i`, the sign being that of the vertex permutation.
pub fn zg_chain_action(x: &GComplex) -> Vec<Vec<IntMatrix>> {
    (0..x.group().order())
        .map(|g| {
            (0..=x.dim().max(-1) as usize)
                .take(x.f_vector().len())
                .map(|d| {
                    let n = x.count(d);
                    let t = (0..n).map(|i| {
                        let (j, s) = x.act(g, d, i);
                        (j, i, Int::from(s as i64))
                    });
                    IntMatrix::from_triplets(n, n, t)
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Homological,
    Cohomological,
}

/// Orbits of simplices outside `A`, with a sign per simplex relating it to
/// its orbit representative.
#[derive(Clone, Debug)]
pub(crate) struct Orbits {
    /// Per degree and simplex: orbit index, or `u32::MAX` for simplices in `A`.
    pub(crate) orbit_of: Vec<Vec<u32>>,
    pub(crate) sign: Vec<Vec<i8>>,
    pub(crate) reps: Vec<Vec<usize>>,
}

impl Orbits {
    /// Orbits by simplices: `±1` where a simplex is `±` its orbit generator.
    pub(crate) fn collapse(&self, d: usize) -> IntMatrix {
        let n = self.orbit_of.get(d).map_or(0, Vec::len);
        IntMatrix::from_triplets(
            self.reps.get(d).map_or(0, Vec::len),
            n,
            (0..n)
                .filter(|&t| self.orbit_of[d][t] != u32::MAX)
                .map(|t| {
                    (
                        self.orbit_of[d][t] as usize,
                        t,
                        Int::from(self.sign[d][t] as i64),
                    )
                }),
        )
    }

    /// Simplices by orbits: the representative of each orbit.
    pub(crate) fn representatives(&self, d: usize) -> IntMatrix {
        let n = self.orbit_of.get(d).map_or(0, Vec::len);
        let reps = self.reps.get(d).map(Vec::as_slice).unwrap_or(&[]);
        IntMatrix::from_triplets(
            n,
            reps.len(),
            reps.iter().enumerate().map(|(o, &i)| (i, o, Int::ONE)),
        )
    }
}

pub(crate) fn orbits(x: &GComplex, a: Option<&Subcomplex>) -> Result<Orbits> {
    let top = x.f_vector().len();
    let mut out = Orbits {
        orbit_of: Vec::new(),
        sign: Vec::new(),
        reps: Vec::new(),
    };
    for d in 0..top {
        let n = x.count(d);
        let mut orbit_of = vec![u32::MAX; n];
        let mut sign = vec![0i8; n];
        let mut reps = Vec::new();
        for i in 0..n {
            if orbit_of[i] != u32::MAX || a.is_some_and(|a| a.contains(d, i)) {
                continue;
            }
            let o = reps.len() as u32;
            reps.push(i);
            for g in 0..x.group().order() {
                let (j, s) = x.act(g, d, i);
                if orbit_of[j] == u32::MAX {
                    orbit_of[j] = o;
                    sign[j] = s;
                } else if sign[j] != s {
                    return Err(Error::Precondition(format!(
                        "a stabilizer element reverses a {d}-simplex; subdivide first"
                    )));
                }
            }
        }
        out.orbit_of.push(orbit_of);
        out.sign.push(sign);
        out.reps.push(reps);
    }
    Ok(out)
}

/// Orbit chain or cochain complex with integer coefficients.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitChainComplex {
    pub variant: Variant,
    /// Representative simplex of each orbit, per degree.
    pub reps: Vec<Vec<Vec<u32>>>,
    pub orbit_sizes: Vec<Vec<usize>>,
    /// Conjugacy-class label of each orbit's stabilizer.
    pub stabilizers: Vec<Vec<String>>,
    /// Homological: `differentials[d - 1] = ∂_d`, orbits of degree `d - 1`
    /// by orbits of degree `d`. Cohomological: `differentials[d] = δ^d`,
    /// orbits of degree `d + 1` by orbits of degree `d`.
    pub differentials: Vec<IntMatrix>,
}

impl OrbitChainComplex {
    pub fn ranks(&self) -> Vec<usize> {
        self.reps.iter().map(Vec::len).collect()
    }

    /// The homological variant as a chain complex; the cohomological one
    /// reindexed as `D_j = C^{N-j}` so its homology in degree `j` is the
    /// cohomology in degree `N - j`.
    pub fn chain_complex(&self) -> ChainComplex {
        let ranks = self.ranks();
        match self.variant {
            Variant::Homological => {
                ChainComplex::new_unchecked(ranks, self.differentials.clone()).expect("shapes")
            }
            Variant::Cohomological => {
                let n = ranks.len();
                let r: Vec<usize> = ranks.iter().rev().copied().collect();
                let b = (1..n)
                    .map(|j| self.differentials[n - 1 - j].clone())
                    .collect();
                ChainComplex::new_unchecked(r, b).expect("shapes")
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

fn check_pair(x: &Arc<GComplex>, a: Option<&Subcomplex>) -> Result<()> {
    if !x.validate().pointwise_fixing {
        return Err(Error::Precondition(
            "stabilizers do not fix simplices pointwise; subdivide first".into(),
        ));
    }
    if let Some(a) = a {
        if !Arc::ptr_eq(a.parent(), x) && **a.parent() != **x {
            return Err(Error::NotSubcomplex("A must be a subcomplex of X".into()));
        }
        let all: Vec<usize> = (0..x.group().order()).collect();
        if !a.is_invariant_under(&all) {
            return Err(Error::NotInvariant("A is not invariant".into()));
        }
    }
    Ok(())
}

/// Orbit complex of the pair `(X, A)` (`A = None` for the absolute case).
pub fn bredon_complex(
    x: &Arc<GComplex>,
    a: Option<&Subcomplex>,
    variant: Variant,
) -> Result<OrbitChainComplex> {
    check_pair(x, a)?;
    let orb = orbits(x, a)?;
    let top = orb.reps.len();
    let classes = conjugacy_classes_of_subgroups(x.group());
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let mut stabs = Vec::new();
    for d in 0..top {
        reps.push(
            orb.reps[d]
                .iter()
                .map(|&i| x.simplices(d).get(i).to_vec())
                .collect(),
        );
        let mut sz = vec![0usize; orb.reps[d].len()];
        for &o in &orb.orbit_of[d] {
            if o != u32::MAX {
                sz[o as usize] += 1;
            }
        }
        sizes.push(sz);
        stabs.push(
            orb.reps[d]
                .iter()
                .map(|&i| {
                    let members: Vec<usize> = (0..x.group().order())
                        .filter(|&g| x.act(g, d, i).0 == i)
                        .collect();
                    let h = Subgroup::from_members(x.group(), members).expect("stabilizer");
                    classes.label(classes.class_of(&h).expect("classified"))
                })
                .collect(),
        );
    }
    let differentials = match variant {
        Variant::Homological => (1..top)
            .map(|d| homological_differential(x, &orb, d))
            .collect(),
        Variant::Cohomological => {
            let c = x.chain_complex();
            (0..top.saturating_sub(1))
                .map(|d| cohomological_differential(&c, &orb, d))
                .collect()
        }
    };
    Ok(OrbitChainComplex {
        variant,
        reps,
        orbit_sizes: sizes,
        stabilizers: stabs,
        differentials,
    })
}

/// `∂[rep] = Σ (-1)^i [face_i]`, each face rewritten as `±` its orbit generator.
fn homological_differential(x: &GComplex, orb: &Orbits, d: usize) -> IntMatrix {
    let mut t = Vec::new();
    for (o, &i) in orb.reps[d].iter().enumerate() {
        let s = x.simplices(d).get(i);
        for k in 0..s.len() {
            let mut f = s.to_vec();
            f.remove(k);
            let j = x.simplices(d - 1).position(&f).expect("face");
            let fo = orb.orbit_of[d - 1][j];
            if fo == u32::MAX {
                continue;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 } * orb.sign[d - 1][j] as i64;
            t.push((fo as usize, o, Int::from(sign)));
        }
    }
    IntMatrix::from_triplets(orb.reps[d - 1].len(), orb.reps[d].len(), t)
}

/// `δ^d` computed by applying the simplicial coboundary to orbit-indicator
/// cochains (`φ_O(τ) = ±1` on the orbit `O`) and reading values on
/// representatives.
fn cohomological_differential(c: &ChainComplex, orb: &Orbits, d: usize) -> IntMatrix {
    let indicators = orb.collapse(d).transpose();
    let evaluate = orb.representatives(d + 1).transpose();
    let coboundary = c.boundary(d + 1).transpose();
    evaluate.mul(&coboundary).mul(&indicators)
}

/// `H^G_*(X, A; M)`, degrees `0..=dim X`.
pub fn bredon_homology(
    x: &Arc<GComplex>,
    a: Option<&Subcomplex>,
    m: &TrivialModule,
) -> Result<Vec<FgAbGroup>> {
    let c = bredon_complex(x, a, Variant::Homological)?;
    Ok(homology(&c.chain_complex(), &m.underlying))
}

/// `H_G^*(X, A; M)`, degrees `0..=dim X`.
pub fn bredon_cohomology(
    x: &Arc<GComplex>,
    a: Option<&Subcomplex>,
    m: &TrivialModule,
) -> Result<Vec<FgAbGroup>> {
    let c = bredon_complex(x, a, Variant::Cohomological)?;
    let mut h = integral_homology(&c.chain_complex());
    h.reverse();
    Ok(crate::algebra::homology::cohomology_from_integral(
        &h,
        &m.underlying,
    ))
}

/// Bredon cohomology computed from the homological orbit complex by dualizing;
/// agrees with [`bredon_cohomology`] when the two orbit differentials are
/// mutual transposes.
pub fn bredon_cohomology_via_dual(
    x: &Arc<GComplex>,
    a: Option<&Subcomplex>,
    m: &TrivialModule,
) -> Result<Vec<FgAbGroup>> {
    let c = bredon_complex(x, a, Variant::Homological)?;
    Ok(cohomology(&c.chain_complex(), &m.underlying))
}

/// A finite set with a left action.
#[derive(Clone, Debug)]
pub struct GSet {
    group: Arc<FiniteGroup>,
    action: Vec<Perm>,
}

impl GSet {
    /// Action given by permutations of `0..size` for the group's generators.
    pub fn new(group: &Arc<FiniteGroup>, size: usize, generator_images: &[Perm]) -> Result<GSet> {
        if generator_images.len() != group.generators().len()
            || generator_images.iter().any(|p| p.degree() != size)
        {
            return Err(Error::ActionNotHomomorphism(
                "one permutation of the set per generator".into(),
            ));
        }
        let action =
            group.extend_from_generators(Perm::identity(size), generator_images, |a, b| {
                a.compose(b)
            });
        for (k, &g) in group.generators().iter().enumerate() {
            for b in 0..group.order() {
                if action[group.mul(g, b)] != generator_images[k].compose(&action[b]) {
                    return Err(Error::ActionNotHomomorphism(format!(
                        "generator {g} times element {b}"
                    )));
                }
            }
        }
        Ok(GSet {
            group: Arc::clone(group),
            action,
        })
    }

    /// Left cosets `G/H`, numbered by least element; `g·xH = (gx)H`.
    pub fn cosets(h: &Subgroup) -> GSet {
        let g = h.group();
        let reps = h.left_coset_reps(&Subgroup::whole(g));
        let coset_of = |x: usize| -> u32 {
            let m = h
                .members()
                .iter()
                .map(|&k| g.mul(x, k))
                .min()
                .expect("nonempty");
            reps.binary_search(&m).expect("coset representative") as u32
        };
        let action = (0..g.order())
            .map(|a| {
                Perm::new(reps.iter().map(|&r| coset_of(g.mul(a, r))).collect()).expect("bijection")
            })
            .collect();
        GSet {
            group: Arc::clone(g),
            action,
        }
    }

    pub fn empty(group: &Arc<FiniteGroup>) -> GSet {
        GSet {
            group: Arc::clone(group),
            action: vec![Perm::identity(0); group.order()],
        }
    }

    pub fn disjoint_union(&self, other: &GSet) -> GSet {
        let n = self.size() as u32;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(p, q)| {
                let mut img = p.images().to_vec();
                img.extend(q.images().iter().map(|v| v + n));
                Perm::new(img).expect("bijection")
            })
            .collect();
        GSet {
            group: Arc::clone(&self.group),
            action,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.action.first().map_or(0, Perm::degree)
    }

    pub fn act(&self, g: usize, w: u32) -> u32 {
        self.action[g].apply(w)
    }

    /// Orbits, each sorted, ordered by least member.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for w in 0..self.size() as u32 {
            if seen[w as usize] {
                continue;
            }
            let mut o: Vec<u32> = (0..self.group.order()).map(|g| self.act(g, w)).collect();
            o.sort_unstable();
            o.dedup();
            for &v in &o {
                seen[v as usize] = true;
            }
            out.push(o);
        }
        out
    }

    pub fn stabilizer(&self, w: u32) -> Subgroup {
        let members = (0..self.group.order())
            .filter(|&g| self.act(g, w) == w)
            .collect();
        Subgroup::from_members(&self.group, members).expect("stabilizer")
    }
}

/// An equivariant map of G-sets.
#[derive(Clone, Debug)]
pub struct GMap {
    pub source: GSet,
    pub target: GSet,
    pub images: Vec<u32>,
}

impl GMap {
    pub fn new(source: &GSet, target: &GSet, images: Vec<u32>) -> Result<GMap> {
        if images.len() != source.size() || images.iter().any(|&v| v as usize >= target.size()) {
            return Err(Error::DimensionMismatch(
                "map must send every point into the target".into(),
            ));
        }
        for g in 0..source.group.order() {
            for w in 0..source.size() as u32 {
                if images[source.act(g, w) as usize] != target.act(g, images[w as usize]) {
                    return Err(Error::Precondition("map is not equivariant".into()));
                }
            }
        }
        Ok(GMap {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    /// The unique G-map sending the least point of each source orbit to the
    /// chosen target point; requires stabilizer containment.
    pub fn from_orbit_images(source: &GSet, target: &GSet, rep_images: &[u32]) -> Result<GMap> {
        let orbits = source.orbits();
        if orbits.len() != rep_images.len() {
            return Err(Error::DimensionMismatch(
                "one image per source orbit".into(),
            ));
        }
        let mut images = vec![u32::MAX; source.size()];
        for (o, &t) in orbits.iter().zip(rep_images) {
            let w = o[0];
            if !source.stabilizer(w).is_subgroup_of(&target.stabilizer(t)) {
                return Err(Error::Precondition(format!(
                    "stabilizer of {w} does not fix {t}"
                )));
            }
            for g in 0..source.group.order() {
                images[source.act(g, w) as usize] = target.act(g, t);
            }
        }
        GMap::new(source, target, images)
    }

    /// Every point has the same stabilizer as its image.
    pub fn is_isotropy_preserving(&self) -> bool {
        (0..self.source.size() as u32).all(|w| {
            self.source.stabilizer(w).members()
                == self.target.stabilizer(self.images[w as usize]).members()
        })
    }

    /// Largest index `[G_{f(ω)} : G_ω]` over points.
    pub fn max_isotropy_index(&self) -> usize {
        (0..self.source.size() as u32)
            .map(|w| {
                self.target.stabilizer(self.images[w as usize]).order()
                    / self.source.stabilizer(w).order()
            })
            .max()
            .unwrap_or(1)
    }
}

/// `ℤ^{Ω × gens(M)}` modulo orders and a set of relation vectors, or the
/// corresponding invariant subgroup; points are indexed `ω·k + j`.
struct Side {
    k: usize,
    sq: Subquotient,
    relations: Vec<Vec<Int>>,
}

fn unit(n: usize, i: usize, c: Int) -> Vec<Int> {
    let mut v = vec![Int::ZERO; n];
    v[i] = c;
    v
}

fn order_relations(size: usize, m: &FgAbGroup) -> Vec<Vec<Int>> {
    let orders = m.generator_orders();
    let k = orders.len();
    let mut rel = Vec::new();
    for w in 0..size {
        for (j, o) in orders.iter().enumerate() {
            if !o.is_zero() {
                rel.push(unit(size * k, w * k + j, o.clone()));
            }
        }
    }
    rel
}

/// Coinvariants `(ℤ[Ω] ⊗ M)_G`: relations `e_{gω,j} = e_{ω,j}`.
fn coinvariants(omega: &GSet, m: &FgAbGroup) -> Result<Side> {
    let k = m.num_generators();
    let n = omega.size() * k;
    let mut rel = order_relations(omega.size(), m);
    for &g in omega.group.generators() {
        for w in 0..omega.size() {
            let gw = omega.act(g, w as u32) as usize;
            if gw == w {
                continue;
            }
            for j in 0..k {
                let mut v = vec![Int::ZERO; n];
                v[gw * k + j] = Int::ONE;
                v[w * k + j] = -Int::ONE;
                rel.push(v);
            }
        }
    }
    Ok(Side {
        k,
        sq: Subquotient::new(Lattice::whole(n), &rel)?,
        relations: rel,
    })
}

/// Invariants `(M^Ω)^G`: functions constant on orbits.
fn invariants(omega: &GSet, m: &FgAbGroup) -> Result<Side> {
    let orders = m.generator_orders();
    let k = orders.len();
    let n = omega.size() * k;
    let mut rows: Vec<Vec<Int>> = Vec::new();
    let mut moduli = Vec::new();
    for &g in omega.group.generators() {
        for w in 0..omega.size() {
            let gw = omega.act(g, w as u32) as usize;
            if gw == w {
                continue;
            }
            for (j, o) in orders.iter().enumerate() {
                let mut v = vec![Int::ZERO; n];
                v[gw * k + j] = Int::ONE;
                v[w * k + j] = -Int::ONE;
                rows.push(v);
                moduli.push(o.clone());
            }
        }
    }
    let a = if rows.is_empty() {
        Lattice::whole(n)
    } else {
        Lattice::preimage(&DenseMatrix::from_rows(&rows, n), &moduli)
    };
    let rel = order_relations(omega.size(), m);
    Ok(Side {
        k,
        sq: Subquotient::new(a, &rel)?,
        relations: rel,
    })
}

/// The homomorphism induced by an ambient linear formula; checks that the
/// formula respects the source relations.
fn induced(src: &Side, tgt: &Side, f: impl Fn(&[Int]) -> Vec<Int>) -> Result<AbMap> {
    for r in &src.relations {
        match tgt.sq.class_of(&f(r)) {
            Some(c)
                if c.iter()
                    .zip(tgt.sq.group().generator_orders())
                    .all(|(x, o)| reduced_zero(x, &o)) => {}
            _ => {
                return Err(Error::Precondition(
                    "formula does not respect the source relations".into(),
                ))
            }
        }
    }
    let cols: Vec<Vec<Int>> = src
        .sq
        .generators()
        .iter()
        .map(|g| {
            tgt.sq
                .class_of(&f(g))
                .ok_or_else(|| Error::Precondition("formula leaves the target".into()))
        })
        .collect::<Result<_>>()?;
    AbMap::new(
        src.sq.group().clone(),
        tgt.sq.group().clone(),
        DenseMatrix::from_columns(tgt.sq.group().num_generators(), &cols),
    )
}

fn reduced_zero(x: &Int, order: &Int) -> bool {
    if order.is_zero() {
        x.is_zero()
    } else {
        x.is_divisible_by(order)
    }
}

/// `Ψ: Hom(ℤ[Ω], ℤ) ⊗_{ZG} M → Hom_{ZG}(ℤ[Ω], M)`, `χ_ω ⊗ m ↦ Σ_{ω' ∈ Gω} χ^M_{ω'}(m)`.
pub fn psi(omega: &GSet, m: &TrivialModule) -> Result<AbMap> {
    let (src, tgt) = (
        coinvariants(omega, &m.underlying)?,
        invariants(omega, &m.underlying)?,
    );
    psi_between(omega, &src, &tgt)
}

fn psi_between(omega: &GSet, src: &Side, tgt: &Side) -> Result<AbMap> {
    let k = src.k;
    let orbits = omega.orbits();
    let mut orbit_of = vec![0usize; omega.size()];
    for (i, o) in orbits.iter().enumerate() {
        for &w in o {
            orbit_of[w as usize] = i;
        }
    }
    induced(src, tgt, |x| {
        let mut y = vec![Int::ZERO; x.len()];
        for w in 0..omega.size() {
            for j in 0..k {
                let c = &x[w * k + j];
                if c.is_zero() {
                    continue;
                }
                for &w2 in &orbits[orbit_of[w]] {
                    y[w2 as usize * k + j] += c;
                }
            }
        }
        y
    })
}

/// `Θ: Hom_{ZG}(Hom(ℤ[Ω], ℤ), M) → M ⊗_{ZG} ℤ[Ω]`, `φ ↦ Σ_i φ(χ_{ω_i}) ⊗ ω_i`
/// over orbit representatives `reps` (one per orbit, in orbit order).
pub fn theta_with_reps(omega: &GSet, m: &TrivialModule, reps: &[u32]) -> Result<AbMap> {
    let (src, tgt) = (
        invariants(omega, &m.underlying)?,
        coinvariants(omega, &m.underlying)?,
    );
    theta_between(omega, &src, &tgt, reps)
}

fn theta_between(omega: &GSet, src: &Side, tgt: &Side, reps: &[u32]) -> Result<AbMap> {
    let orbits = omega.orbits();
    if reps.len() != orbits.len()
        || reps
            .iter()
            .zip(&orbits)
            .any(|(r, o)| o.binary_search(r).is_err())
    {
        return Err(Error::Precondition(
            "one representative per orbit required".into(),
        ));
    }
    let k = src.k;
    induced(src, tgt, |x| {
        let mut y = vec![Int::ZERO; x.len()];
        for &r in reps {
            for j in 0..k {
                y[r as usize * k + j] = x[r as usize * k + j].clone();
            }
        }
        y
    })
}

/// `Θ` with least orbit members as representatives.
pub fn theta(omega: &GSet, m: &TrivialModule) -> Result<AbMap> {
    let reps: Vec<u32> = omega.orbits().iter().map(|o| o[0]).collect();
    theta_with_reps(omega, m, &reps)
}

/// Checks that `Θ` computed with least and with greatest orbit members agree.
pub fn theta_representative_independent(omega: &GSet, m: &TrivialModule) -> Result<bool> {
    let lo: Vec<u32> = omega.orbits().iter().map(|o| o[0]).collect();
    let hi: Vec<u32> = omega
        .orbits()
        .iter()
        .map(|o| *o.last().expect("nonempty"))
        .collect();
    Ok(theta_with_reps(omega, m, &lo)? == theta_with_reps(omega, m, &hi)?)
}

/// Outcome of checking both isomorphisms and both naturality squares for a
/// G-map `f: Ω → Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaturalityCheck {
    pub psi_iso: bool,
    pub theta_iso: bool,
    pub theta_rep_independent: bool,
    /// `Ψ_Ω ∘ f^* = f^* ∘ Ψ_Γ`.
    pub psi_square: bool,
    /// `Θ_Γ ∘ f_* = f_* ∘ Θ_Ω`.
    pub theta_square: bool,
    pub isotropy_preserving: bool,
    pub max_isotropy_index: usize,
}

impl NaturalityCheck {
    pub fn all_hold(&self) -> bool {
        self.psi_iso
            && self.theta_iso
            && self.theta_rep_independent
            && self.psi_square
            && self.theta_square
    }
}

pub fn check_naturality(f: &GMap, m: &TrivialModule) -> Result<NaturalityCheck> {
    let (omega, gamma) = (&f.source, &f.target);
    let mg = &m.underlying;
    let k = mg.num_generators();
    let (co_o, inv_o) = (coinvariants(omega, mg)?, invariants(omega, mg)?);
    let (co_g, inv_g) = (coinvariants(gamma, mg)?, invariants(gamma, mg)?);
    let psi_o = psi_between(omega, &co_o, &inv_o)?;
    let psi_g = psi_between(gamma, &co_g, &inv_g)?;
    let reps = |s: &GSet| -> Vec<u32> { s.orbits().iter().map(|o| o[0]).collect() };
    let theta_o = theta_between(omega, &inv_o, &co_o, &reps(omega))?;
    let theta_g = theta_between(gamma, &inv_g, &co_g, &reps(gamma))?;
    let (no, ng) = (omega.size(), gamma.size());
    // χ_γ ⊗ m ↦ Σ_{f(ω)=γ} χ_ω ⊗ m
    let pull_co = induced(&co_g, &co_o, |x| {
        let mut y = vec![Int::ZERO; no * k];
        for w in 0..no {
            for j in 0..k {
                y[w * k + j] = x[f.images[w] as usize * k + j].clone();
            }
        }
        y
    })?;
    // F ↦ F ∘ f
    let pull_inv = induced(&inv_g, &inv_o, |x| {
        let mut y = vec![Int::ZERO; no * k];
        for w in 0..no {
            for j in 0..k {
                y[w * k + j] = x[f.images[w] as usize * k + j].clone();
            }
        }
        y
    })?;
    // φ ↦ φ ∘ f^*: (φ ∘ f^*)(χ_γ) = Σ_{f(ω)=γ} φ(χ_ω)
    let push_inv = induced(&inv_o, &inv_g, |x| {
        let mut y = vec![Int::ZERO; ng * k];
        for w in 0..no {
            for j in 0..k {
                y[f.images[w] as usize * k + j] += &x[w * k + j];
            }
        }
        y
    })?;
    // m ⊗ ω ↦ m ⊗ f(ω)
    let push_co = induced(&co_o, &co_g, |x| {
        let mut y = vec![Int::ZERO; ng * k];
        for w in 0..no {
            for j in 0..k {
                y[f.images[w] as usize * k + j] += &x[w * k + j];
            }
        }
        y
    })?;
    let psi_square = psi_o.compose(&pull_co)? == pull_inv.compose(&psi_g)?;
    let theta_square = theta_g.compose(&push_inv)? == push_co.compose(&theta_o)?;
    Ok(NaturalityCheck {
        psi_iso: psi_o.is_iso() && psi_g.is_iso(),
        theta_iso: theta_o.is_iso() && theta_g.is_iso(),
        theta_rep_independent: theta_representative_independent(omega, m)?
            && theta_representative_independent(gamma, m)?,
        psi_square,
        theta_square,
        isotropy_preserving: f.is_isotropy_preserving(),
        max_isotropy_index: f.max_isotropy_index(),
    })
}

/// `H_G^i(X; ℤ) → H_G^i(S; ℤ)` induced by the inclusion of an invariant
/// subcomplex `S ⊆ X`.
pub fn bredon_restriction(x: &Arc<GComplex>, s: &Subcomplex, degree: usize) -> Result<AbMap> {
    check_pair(x, Some(s))?;
    let big = bredon_complex(x, None, Variant::Cohomological)?;
    let n = big.reps.len();
    if degree >= n {
        return Ok(AbMap::zero(&FgAbGroup::zero(), &FgAbGroup::zero()));
    }
    let orb = orbits(x, None)?;
    let keep: Vec<Vec<bool>> = (0..n)
        .rev()
        .map(|d| orb.reps[d].iter().map(|&i| s.contains(d, i)).collect())
        .collect();
    let c_big = big.chain_complex();
    let c_small = c_big.select(&keep)?;
    let j = n - 1 - degree;
    let kept: Vec<usize> = (0..c_big.rank(j)).filter(|&i| keep[j][i]).collect();
    let proj = IntMatrix::from_triplets(
        kept.len(),
        c_big.rank(j),
        kept.iter().enumerate().map(|(r, &c)| (r, c, Int::ONE)),
    );
    let hb = HomologyBasis::new(&Arc::new(Reduction::new(&c_big, true)), j)?;
    let hs = HomologyBasis::new(&Arc::new(Reduction::new(&c_small, true)), j)?;
    hb.induced_map(&proj, &hs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g_complex::{join, quotient_complex, sd};

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    fn cyc(m: u32, shift: u32) -> Perm {
        Perm::new((0..m).map(|v| (v + shift) % m).collect()).unwrap()
    }

    fn square() -> GComplex {
        let e: Vec<Vec<u32>> = (0..4).map(|i| vec![i, (i + 1) % 4]).collect();
        GComplex::from_facets(4, &e, FiniteGroup::cyclic(2), &[cyc(4, 2)]).unwrap()
    }

    #[test]
    fn chain_action_is_equivariant_and_multiplicative() {
        let x = square();
        let act = zg_chain_action(&x);
        let gen = x.group().generators()[0];
        assert!(act[gen][1].mul(&act[gen][1]) == IntMatrix::identity(4));
        let c = x.chain_complex();
        for gi in 0..x.group().order() {
            assert_eq!(
                c.boundary(1).mul(&act[gi][1]),
                act[gi][0].mul(&c.boundary(1))
            );
            for hi in 0..x.group().order() {
                let gh = x.group().mul(gi, hi);
                for d in 0..2 {
                    assert_eq!(act[gi][d].mul(&act[hi][d]), act[gh][d]);
                }
            }
        }
    }

    #[test]
    fn orbit_complexes_and_free_quotients() {
        let x = Arc::new(sd(&sd(&square()).unwrap()).unwrap());
        let h = bredon_homology(&x, None, &TrivialModule::z()).unwrap();
        assert_eq!(h, vec![g("Z"), g("Z")]);
        let hom = bredon_complex(&x, None, Variant::Homological).unwrap();
        let coh = bredon_complex(&x, None, Variant::Cohomological).unwrap();
        for (a, b) in hom.differentials.iter().zip(&coh.differentials) {
            assert_eq!(a.transpose(), *b);
        }
        let q = quotient_complex(&x, true).unwrap();
        assert_eq!(integral_homology(&q.complex.chain_complex()), h);
        // the pointwise-fixing precondition refuses a flipped edge
        let flip = Arc::new(
            GComplex::from_facets(2, &[vec![0, 1]], FiniteGroup::cyclic(2), &[cyc(2, 1)]).unwrap(),
        );
        assert!(bredon_complex(&flip, None, Variant::Homological).is_err());
    }

    #[test]
    fn restriction_to_a_projective_line() {
        let x = Arc::new(join(&square(), &square()).unwrap());
        let s = Subcomplex::induced(&x, |v| v < 4);
        let r0 = bredon_restriction(&x, &s, 0).unwrap();
        assert!(r0.is_iso());
        let r1 = bredon_restriction(&x, &s, 1).unwrap();
        assert_eq!(
            (r1.source().clone(), r1.cokernel().group().clone()),
            (g("0"), g("Z"))
        );
        let r2 = bredon_restriction(&x, &s, 2).unwrap();
        assert_eq!(
            (r2.kernel().group().clone(), r2.target().clone()),
            (g("Z/2"), g("0"))
        );
    }

    #[test]
    fn projective_three_space() {
        let s3 = join(&square(), &square()).unwrap();
        let x = Arc::new(sd(&sd(&s3).unwrap()).unwrap());
        let h = bredon_homology(&x, None, &TrivialModule::z()).unwrap();
        assert_eq!(h, vec![g("Z"), g("Z/2"), g("0"), g("Z")]);
        let c = bredon_cohomology(&x, None, &TrivialModule::z()).unwrap();
        assert_eq!(c, vec![g("Z"), g("0"), g("Z/2"), g("Z")]);
        assert_eq!(
            c,
            bredon_cohomology_via_dual(&x, None, &TrivialModule::z()).unwrap()
        );
    }

    #[test]
    fn points_and_free_orbits() {
        let grp = FiniteGroup::cyclic(3);
        let pt = Arc::new(
            GComplex::from_facets(1, &[], Arc::clone(&grp), &[Perm::identity(1)]).unwrap(),
        );
        assert_eq!(
            bredon_homology(&pt, None, &TrivialModule::cyclic(4)).unwrap(),
            vec![g("Z/4")]
        );
        let orbit =
            Arc::new(GComplex::from_facets(3, &[], Arc::clone(&grp), &[cyc(3, 1)]).unwrap());
        assert_eq!(
            bredon_homology(&orbit, None, &TrivialModule::z()).unwrap(),
            vec![g("Z")]
        );
        assert_eq!(
            bredon_cohomology(&orbit, None, &TrivialModule::z()).unwrap(),
            vec![g("Z")]
        );
    }

    #[test]
    fn psi_theta_fixed_point_and_free_orbit() {
        let c2 = FiniteGroup::cyclic(2);
        let pt = GSet::cosets(&Subgroup::whole(&c2));
        let m = TrivialModule::cyclic(4);
        let p = psi(&pt, &m).unwrap();
        assert!(p.is_iso());
        assert_eq!(p.matrix(), &DenseMatrix::identity(1));
        assert_eq!(theta(&pt, &m).unwrap().matrix(), &DenseMatrix::identity(1));
        let free = GSet::cosets(&Subgroup::trivial(&c2));
        assert_eq!(free.size(), 2);
        let p = psi(&free, &m).unwrap();
        assert_eq!(p.source(), &g("Z/4"));
        assert_eq!(p.target(), &g("Z/4"));
        assert!(p.is_iso());
        assert!(theta(&free, &m).unwrap().is_iso());
        assert!(theta_representative_independent(&free, &m).unwrap());
    }

    #[test]
    fn fold_map_is_natural() {
        let c2 = FiniteGroup::cyclic(2);
        let free = GSet::cosets(&Subgroup::trivial(&c2));
        let two = free.disjoint_union(&free);
        let fold = GMap::new(&two, &free, vec![0, 1, 0, 1]).unwrap();
        for m in ["Z", "Z/2", "Z/4", "Z + Z/2"] {
            let r = check_naturality(&fold, &m.parse().unwrap()).unwrap();
            assert!(r.all_hold(), "{m}: {r:?}");
            assert!(r.isotropy_preserving);
        }
    }

    /// `C_2/e → C_2/C_2` with `M = ℤ`: going `Γ → Ω` through coinvariants,
    /// `χ_pt ⊗ 1 ↦ (χ_a + χ_b) ⊗ 1 = 2·(χ_a ⊗ 1)`, and `Ψ` sends that to the
    /// constant function 2; the other way round gives the constant function 1.
    #[test]
    fn collapsing_a_free_orbit_breaks_the_psi_square() {
        let c2 = FiniteGroup::cyclic(2);
        let free = GSet::cosets(&Subgroup::trivial(&c2));
        let pt = GSet::cosets(&Subgroup::whole(&c2));
        let f = GMap::new(&free, &pt, vec![0, 0]).unwrap();
        let r = check_naturality(&f, &TrivialModule::z()).unwrap();
        assert!(r.psi_iso && r.theta_iso && r.theta_rep_independent);
        assert!(!r.psi_square);
        assert!(!r.theta_square);
        assert!(!r.isotropy_preserving);
        assert_eq!(r.max_isotropy_index, 2);
        // 2 ≠ 1 in every nonzero coefficient group
        let r = check_naturality(&f, &TrivialModule::cyclic(2)).unwrap();
        assert!(!r.psi_square && !r.theta_square);
    }

    #[test]
    fn relative_to_an_orbit_of_vertices() {
        let x = Arc::new(sd(&square()).unwrap());
        let empty = Subcomplex::induced(&x, |_| false);
        let z = TrivialModule::z();
        assert_eq!(
            bredon_homology(&x, Some(&empty), &z).unwrap(),
            bredon_homology(&x, None, &z).unwrap()
        );
        // A = the orbit {0, 2}: X/G is a circle and A/G a point
        let a = Subcomplex::induced(&x, |v| v == 0 || v == 2);
        assert_eq!(
            bredon_homology(&x, Some(&a), &z).unwrap(),
            vec![g("0"), g("Z")]
        );
        let not_invariant = Subcomplex::induced(&x, |v| v == 0);
        assert!(bredon_homology(&x, Some(&not_invariant), &z).is_err());
    }
}
