//! Functors from finite categories to abelian groups and their Tor.
//!
//! `Tor^C_*(F, G)` for `F: C^op → Ab` and `G: C → Ab` is the homology of the
//! two-sided bar complex with `n`-th group `⊕_{c_0 → … → c_n} G(c_0) ⊗ F(c_n)`
//! and faces
//!
//! - `d_0`: push `G(c_0)` along the first arrow and drop it,
//! - `d_i`: compose arrows `i` and `i + 1`,
//! - `d_n`: pull `F(c_n)` back along the last arrow and drop it.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{
    homology, AbMap, ChainComplex, DenseMatrix, FgAbGroup, HomologyBasis, IntMatrix,
    PresentedComplex, Reduction,
};
use crate::error::{Error, Result};
use crate::g_complex::{fixed_subcomplex, GComplex};
use crate::integer::Int;
use crate::perm_group::{conjugacy_classes_of_subgroups, FiniteGroup, Subgroup};

/// Generator cap for cobar and bar complexes.
pub const DEFAULT_GENERATOR_CAP: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Morphism {
    pub source: usize,
    pub target: usize,
    pub label: String,
}

/// A category with finitely many objects and morphisms.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    /// `compose[f][g] = f ∘ g` when `target(g) = source(f)`.
    compose: Vec<Vec<Option<usize>>>,
    identities: Vec<usize>,
}

impl FiniteCategory {
    /// Checks identities, domains and associativity on the full table.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        compose: Vec<Vec<Option<usize>>>,
        identities: Vec<usize>,
    ) -> Result<FiniteCategory> {
        let m = morphisms.len();
        let bad = |s: String| Err(Error::NotAFunctor(s));
        if identities.len() != objects.len()
            || compose.len() != m
            || compose.iter().any(|r| r.len() != m)
        {
            return bad("table shapes".into());
        }
        for (o, &id) in identities.iter().enumerate() {
            if morphisms[id].source != o || morphisms[id].target != o {
                return bad(format!("identity of object {o}"));
            }
        }
        for f in 0..m {
            for g in 0..m {
                let composable = morphisms[g].target == morphisms[f].source;
                match compose[f][g] {
                    Some(h) if composable => {
                        if morphisms[h].source != morphisms[g].source
                            || morphisms[h].target != morphisms[f].target
                        {
                            return bad(format!("composite of {f} and {g} has the wrong ends"));
                        }
                    }
                    None if !composable => {}
                    _ => return bad(format!("composability of {f} and {g}")),
                }
            }
            if compose[identities[morphisms[f].target]][f] != Some(f)
                || compose[f][identities[morphisms[f].source]] != Some(f)
            {
                return bad(format!("identity law at {f}"));
            }
        }
        for f in 0..m {
            for g in 0..m {
                let Some(fg) = compose[f][g] else { continue };
                for h in 0..m {
                    let Some(gh) = compose[g][h] else { continue };
                    if compose[fg][h] != compose[f][gh] {
                        return bad(format!("associativity at ({f}, {g}, {h})"));
                    }
                }
            }
        }
        Ok(FiniteCategory {
            objects,
            morphisms,
            compose,
            identities,
        })
    }

    /// One object; morphisms are the group elements, `g ∘ h = gh`.
    pub fn from_group(g: &FiniteGroup) -> FiniteCategory {
        let n = g.order();
        let morphisms = (0..n)
            .map(|i| Morphism {
                source: 0,
                target: 0,
                label: format!("g{i}"),
            })
            .collect();
        let compose = (0..n)
            .map(|a| (0..n).map(|b| Some(g.mul(a, b))).collect())
            .collect();
        FiniteCategory::new(vec!["*".into()], morphisms, compose, vec![g.identity()])
            .expect("group category")
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.morphisms[f].source] == f
    }

    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.compose[f][g]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&f| self.morphisms[f].source == a && self.morphisms[f].target == b)
            .collect()
    }

    /// Sequences of `k` composable morphisms (`k = 0`: the objects),
    /// optionally excluding identities.
    pub fn chains(&self, k: usize, normalized: bool, cap: usize) -> Result<Vec<Vec<usize>>> {
        if k == 0 {
            return Ok((0..self.objects.len())
                .map(|o| vec![self.identities[o]])
                .collect());
        }
        let usable: Vec<usize> = (0..self.morphisms.len())
            .filter(|&f| !(normalized && self.is_identity(f)))
            .collect();
        let mut out: Vec<Vec<usize>> = usable.iter().map(|&f| vec![f]).collect();
        for _ in 1..k {
            let mut next = Vec::new();
            for c in &out {
                let last = *c.last().expect("nonempty");
                for &f in &usable {
                    if self.morphisms[f].source == self.morphisms[last].target {
                        let mut e = c.clone();
                        e.push(f);
                        next.push(e);
                        if next.len() > cap {
                            return Err(Error::GeneratorCapExceeded {
                                cap,
                                needed: next.len(),
                            });
                        }
                    }
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Number of sequences of `k` composable morphisms, identities included.
    pub fn count_chains(&self, k: usize) -> Int {
        // paths[o] = number of length-j sequences ending at o
        let mut paths: Vec<Int> = vec![Int::ONE; self.objects.len()];
        if k == 0 {
            return Int::from(self.objects.len());
        }
        for _ in 0..k {
            let mut next = vec![Int::ZERO; self.objects.len()];
            for f in &self.morphisms {
                next[f.target] += &paths[f.source];
            }
            paths = next;
        }
        paths.into_iter().sum()
    }
}

/// Objects `G/H` for conjugacy-class representatives `H` and morphisms the
/// `G`-maps `xH ↦ xaK`, stored by the least element of the coset `aK`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitCategory {
    pub category: FiniteCategory,
    #[serde(skip)]
    pub subgroups: Vec<Subgroup>,
    /// The element `a` of each morphism.
    pub elements: Vec<usize>,
}

pub fn orbit_category(g: &Arc<FiniteGroup>) -> OrbitCategory {
    let classes = conjugacy_classes_of_subgroups(g);
    let subgroups: Vec<Subgroup> = classes
        .classes
        .iter()
        .map(|c| c.representative.clone())
        .collect();
    let objects: Vec<String> = (0..subgroups.len())
        .map(|i| format!("G/{}", classes.label(i)))
        .collect();
    let coset_min = |a: usize, k: &Subgroup| {
        k.members()
            .iter()
            .map(|&x| g.mul(a, x))
            .min()
            .expect("nonempty")
    };
    let mut morphisms = Vec::new();
    let mut elements = Vec::new();
    let mut index = std::collections::HashMap::new();
    for (i, h) in subgroups.iter().enumerate() {
        for (j, k) in subgroups.iter().enumerate() {
            let mut reps: Vec<usize> = (0..g.order())
                .filter(|&a| h.conjugate(g.inv(a)).is_subgroup_of(k))
                .map(|a| coset_min(a, k))
                .collect();
            reps.sort_unstable();
            reps.dedup();
            for a in reps {
                index.insert((i, j, a), morphisms.len());
                morphisms.push(Morphism {
                    source: i,
                    target: j,
                    label: format!("a{a}"),
                });
                elements.push(a);
            }
        }
    }
    let m = morphisms.len();
    let mut compose = vec![vec![None; m]; m];
    for f in 0..m {
        for h in 0..m {
            // h: G/H → G/K by a, f: G/K → G/L by b; f ∘ h is xH ↦ xabL
            if morphisms[h].target != morphisms[f].source {
                continue;
            }
            let l = morphisms[f].target;
            let ab = coset_min(g.mul(elements[h], elements[f]), &subgroups[l]);
            compose[f][h] = Some(index[&(morphisms[h].source, l, ab)]);
        }
    }
    let identities = (0..subgroups.len())
        .map(|i| index[&(i, i, coset_min(g.identity(), &subgroups[i]))])
        .collect();
    let category =
        FiniteCategory::new(objects, morphisms, compose, identities).expect("orbit category");
    OrbitCategory {
        category,
        subgroups,
        elements,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Co,
    Contra,
}

/// Values and induced maps in the generator coordinates of each value.
#[derive(Clone, Debug, Serialize)]
pub struct AbFunctor {
    pub variance: Variance,
    pub values: Vec<FgAbGroup>,
    /// Per morphism `f: a → b`: a matrix `F(a) → F(b)` (covariant) or
    /// `F(b) → F(a)` (contravariant).
    pub maps: Vec<DenseMatrix>,
}

impl AbFunctor {
    /// Checks well-definedness of every map, identities and composition.
    pub fn new(
        cat: &FiniteCategory,
        variance: Variance,
        values: Vec<FgAbGroup>,
        maps: Vec<DenseMatrix>,
    ) -> Result<AbFunctor> {
        if values.len() != cat.num_objects() || maps.len() != cat.num_morphisms() {
            return Err(Error::NotAFunctor(
                "one value per object and one map per morphism".into(),
            ));
        }
        let f = AbFunctor {
            variance,
            values,
            maps,
        };
        let homs: Vec<AbMap> = (0..cat.num_morphisms())
            .map(|m| {
                let (s, t) = f.ends(cat, m);
                AbMap::new(f.values[s].clone(), f.values[t].clone(), f.maps[m].clone())
                    .map_err(|e| Error::NotAFunctor(format!("morphism {m}: {e}")))
            })
            .collect::<Result<_>>()?;
        for o in 0..cat.num_objects() {
            if homs[cat.identity(o)] != AbMap::identity(&f.values[o]) {
                return Err(Error::NotAFunctor(format!("identity of object {o}")));
            }
        }
        for a in 0..cat.num_morphisms() {
            for b in 0..cat.num_morphisms() {
                let Some(ab) = cat.compose(a, b) else {
                    continue;
                };
                let composite = match variance {
                    Variance::Co => homs[a].compose(&homs[b])?,
                    Variance::Contra => homs[b].compose(&homs[a])?,
                };
                if composite != homs[ab] {
                    return Err(Error::NotAFunctor(format!("composition of {a} and {b}")));
                }
            }
        }
        Ok(f)
    }

    /// The same group everywhere, identity maps.
    pub fn constant(cat: &FiniteCategory, variance: Variance, value: &FgAbGroup) -> AbFunctor {
        let k = value.num_generators();
        AbFunctor::new(
            cat,
            variance,
            vec![value.clone(); cat.num_objects()],
            vec![DenseMatrix::identity(k); cat.num_morphisms()],
        )
        .expect("constant functor")
    }

    /// Source and target of `F(m)`.
    fn ends(&self, cat: &FiniteCategory, m: usize) -> (usize, usize) {
        let mo = &cat.morphisms[m];
        match self.variance {
            Variance::Co => (mo.source, mo.target),
            Variance::Contra => (mo.target, mo.source),
        }
    }
}

/// `G/H ↦ H_q(X^H; ℤ)` on the orbit category of `X`'s group, contravariant:
/// the morphism `xH ↦ xaK` induces `v ↦ a·v` from `X^K` to `X^H`.
pub fn fixed_point_functor(x: &Arc<GComplex>, q: usize) -> Result<(OrbitCategory, AbFunctor)> {
    if !x.validate().fixed_sets_full {
        return Err(Error::Precondition(
            "fixed sets are not subcomplexes; subdivide first".into(),
        ));
    }
    let oc = orbit_category(x.group());
    let fixed: Vec<_> = oc
        .subgroups
        .iter()
        .map(|h| fixed_subcomplex(x, h))
        .collect::<Result<_>>()?;
    let members: Vec<Vec<usize>> = fixed
        .iter()
        .map(|f| (0..x.count(q)).filter(|&i| f.contains(q, i)).collect())
        .collect();
    let bases: Vec<HomologyBasis> = fixed
        .iter()
        .map(|f| HomologyBasis::new(&Arc::new(Reduction::new(&f.chain_complex(), true)), q))
        .collect::<Result<_>>()?;
    let values: Vec<FgAbGroup> = bases.iter().map(|b| b.group().clone()).collect();
    let cat = &oc.category;
    let maps = (0..cat.num_morphisms())
        .map(|m| {
            let (h, k) = (cat.morphisms[m].source, cat.morphisms[m].target);
            let a = oc.elements[m];
            let t = members[k].iter().enumerate().map(|(col, &i)| {
                let (j, s) = x.act(a, q, i);
                let row = members[h].binary_search(&j).expect("a maps X^K into X^H");
                (row, col, Int::from(s as i64))
            });
            let chain = IntMatrix::from_triplets(members[h].len(), members[k].len(), t);
            Ok(bases[k].induced_map(&chain, &bases[h])?.matrix().clone())
        })
        .collect::<Result<Vec<_>>>()?;
    let f = AbFunctor::new(cat, Variance::Contra, values, maps)?;
    Ok((oc, f))
}

/// Generators of `G(c_0) ⊗ F(c_n)`: pairs of cyclic generators with
/// nontrivial `ℤ/gcd`.
fn tensor_generators(g: &FgAbGroup, f: &FgAbGroup) -> Vec<(usize, usize, Int)> {
    let (go, fo) = (g.generator_orders(), f.generator_orders());
    let mut out = Vec::new();
    for (i, a) in go.iter().enumerate() {
        for (j, b) in fo.iter().enumerate() {
            let o = a.gcd(b);
            if !o.is_one() {
                out.push((i, j, o));
            }
        }
    }
    out
}

/// The two-sided bar complex in degrees `0..=top`, with cyclic chain groups.
#[derive(Clone, Debug)]
pub struct CobarComplex {
    /// Per degree: the composable chain and the tensor generator `(i, j)`.
    pub generators: Vec<Vec<(usize, usize, usize)>>,
    pub chains: Vec<Vec<Vec<usize>>>,
    pub presented: PresentedComplex,
}

pub fn cobar_complex(
    cat: &FiniteCategory,
    f: &AbFunctor,
    g: &AbFunctor,
    top: usize,
    normalized: bool,
    cap: usize,
) -> Result<CobarComplex> {
    if f.variance != Variance::Contra || g.variance != Variance::Co {
        return Err(Error::NotAFunctor(
            "Tor needs a contravariant F and a covariant G".into(),
        ));
    }
    // degree-0 chains are objects, stored as their identities
    let start = |c: &[usize]| cat.morphisms[c[0]].source;
    let end = |c: &[usize]| cat.morphisms[*c.last().expect("nonempty")].target;
    let mut chains = Vec::new();
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    let mut index: Vec<std::collections::HashMap<(usize, usize, usize), usize>> = Vec::new();
    let mut total = 0usize;
    for n in 0..=top {
        let ch = cat.chains(n, normalized, cap)?;
        let mut gens = Vec::new();
        let mut ords = Vec::new();
        let mut idx = std::collections::HashMap::new();
        for (ci, c) in ch.iter().enumerate() {
            for (i, j, o) in tensor_generators(&g.values[start(c)], &f.values[end(c)]) {
                idx.insert((ci, i, j), gens.len());
                gens.push((ci, i, j));
                ords.push(o);
            }
        }
        total += gens.len();
        if total > cap {
            return Err(Error::GeneratorCapExceeded { cap, needed: total });
        }
        chains.push(ch);
        generators.push(gens);
        orders.push(ords);
        index.push(idx);
    }
    let chain_index: Vec<std::collections::HashMap<Vec<usize>, usize>> = chains
        .iter()
        .map(|ch| ch.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
        .collect();
    let mut boundaries = Vec::new();
    for n in 1..=top {
        let mut t: Vec<(usize, usize, Int)> = Vec::new();
        for (col, &(ci, i, j)) in generators[n].iter().enumerate() {
            let c = &chains[n][ci];
            let mut push =
                |face: Vec<usize>, gv: Vec<(usize, Int)>, fv: Vec<(usize, Int)>, sign: i64| {
                    let Some(&fi) = chain_index[n - 1].get(&face) else {
                        return;
                    };
                    for (i2, a) in &gv {
                        for (j2, b) in &fv {
                            if let Some(&row) = index[n - 1].get(&(fi, *i2, *j2)) {
                                t.push((row, col, Int::from(sign) * a.clone() * b.clone()));
                            }
                        }
                    }
                };
            let unit = |k: usize| vec![(k, Int::ONE)];
            let column = |m: &DenseMatrix, k: usize| -> Vec<(usize, Int)> {
                (0..m.rows())
                    .map(|r| (r, m.get(r, k).clone()))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            };
            let obj_face = |o: usize| vec![cat.identity(o)];
            // d_0
            let f0 = if n == 1 {
                obj_face(cat.morphisms[c[0]].target)
            } else {
                c[1..].to_vec()
            };
            push(f0, column(&g.maps[c[0]], i), unit(j), 1);
            // d_k, 0 < k < n
            for k in 1..n {
                let composed = cat.compose(c[k], c[k - 1]).expect("composable");
                if normalized && cat.is_identity(composed) {
                    continue;
                }
                let mut face = c[..k - 1].to_vec();
                face.push(composed);
                face.extend_from_slice(&c[k + 1..]);
                push(face, unit(i), unit(j), if k % 2 == 0 { 1 } else { -1 });
            }
            // d_n
            let last = c[n - 1];
            let fnf = if n == 1 {
                obj_face(cat.morphisms[c[0]].source)
            } else {
                c[..n - 1].to_vec()
            };
            push(
                fnf,
                unit(i),
                column(&f.maps[last], j),
                if n % 2 == 0 { 1 } else { -1 },
            );
        }
        boundaries.push(IntMatrix::from_triplets(
            generators[n - 1].len(),
            generators[n].len(),
            t,
        ));
    }
    Ok(CobarComplex {
        generators,
        chains,
        presented: PresentedComplex { orders, boundaries },
    })
}

/// `Tor_k` for `k = 0..=k_max` from the normalized (identity-free) complex.
pub fn tor_over_category(
    cat: &FiniteCategory,
    f: &AbFunctor,
    g: &AbFunctor,
    k_max: usize,
) -> Result<Vec<FgAbGroup>> {
    tor_over_category_with(cat, f, g, k_max, true, DEFAULT_GENERATOR_CAP)
}

pub fn tor_over_category_with(
    cat: &FiniteCategory,
    f: &AbFunctor,
    g: &AbFunctor,
    k_max: usize,
    normalized: bool,
    cap: usize,
) -> Result<Vec<FgAbGroup>> {
    let c = cobar_complex(cat, f, g, k_max + 1, normalized, cap)?;
    let mut h = c.presented.homology()?;
    h.truncate(k_max + 1);
    Ok(h)
}

/// `H_k(G; M)`, `k = 0..=k_max`, from the bar resolution
/// `∂[g_1|…|g_n] = g_1[g_2|…|g_n] + Σ (-1)^i […|g_i g_{i+1}|…] + (-1)^n [g_1|…|g_{n-1}]`
/// tensored with the trivial module.
pub fn group_homology(g: &FiniteGroup, m: &FgAbGroup, k_max: usize) -> Result<Vec<FgAbGroup>> {
    group_homology_capped(g, m, k_max, DEFAULT_GENERATOR_CAP)
}

pub fn group_homology_capped(
    g: &FiniteGroup,
    m: &FgAbGroup,
    k_max: usize,
    cap: usize,
) -> Result<Vec<FgAbGroup>> {
    let n = g.order();
    let top = k_max + 1;
    let needed = n.checked_pow(top as u32).unwrap_or(usize::MAX);
    if needed > cap {
        return Err(Error::GeneratorCapExceeded { cap, needed });
    }
    // tuples in base-n digits, g_1 most significant
    let ranks: Vec<usize> = (0..=top).map(|d| n.pow(d as u32)).collect();
    let boundaries = (1..=top)
        .map(|d| {
            let mut t = Vec::new();
            for col in 0..ranks[d] {
                let mut digits = vec![0usize; d];
                let mut x = col;
                for slot in digits.iter_mut().rev() {
                    *slot = x % n;
                    x /= n;
                }
                let encode = |v: &[usize]| v.iter().fold(0usize, |acc, &e| acc * n + e);
                t.push((encode(&digits[1..]), col, Int::ONE));
                for i in 1..d {
                    let mut v = digits[..i - 1].to_vec();
                    v.push(g.mul(digits[i - 1], digits[i]));
                    v.extend_from_slice(&digits[i + 1..]);
                    t.push((encode(&v), col, Int::from(if i % 2 == 0 { 1 } else { -1 })));
                }
                t.push((
                    encode(&digits[..d - 1]),
                    col,
                    Int::from(if d % 2 == 0 { 1 } else { -1 }),
                ));
            }
            IntMatrix::from_triplets(ranks[d - 1], ranks[d], t)
        })
        .collect();
    let c = ChainComplex::new(ranks, boundaries)?;
    let mut h = homology(&c, m);
    h.truncate(k_max + 1);
    Ok(h)
}

/// Outcome of the order and rank bounds for one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub degree: usize,
    pub value: FgAbGroup,
    /// `|Tor_k| ≤ M^{rα}` when every `G(c)` is finite (else `None`).
    pub order_bound: Option<bool>,
    /// Minimal generator count of `Tor_k` at most `α m r`.
    pub rank_bound: bool,
}

/// Checks the cobar bounds with `α` the number of `k`-chains (identities
/// included), `r` and `m` the largest minimal generator counts of `F` and
/// `G`, and `M` the largest order of a value of `G`.
pub fn check_cobar_bounds(
    cat: &FiniteCategory,
    f: &AbFunctor,
    g: &AbFunctor,
    tor: &[FgAbGroup],
) -> Vec<BoundCheck> {
    let r = f
        .values
        .iter()
        .map(FgAbGroup::num_generators)
        .max()
        .unwrap_or(0);
    let m = g
        .values
        .iter()
        .map(FgAbGroup::num_generators)
        .max()
        .unwrap_or(0);
    let max_order: Option<Int> = g
        .values
        .iter()
        .map(FgAbGroup::order)
        .collect::<Option<Vec<Int>>>()
        .map(|v| v.into_iter().max().unwrap_or(Int::ONE));
    tor.iter()
        .enumerate()
        .map(|(k, t)| {
            let alpha = cat.count_chains(k);
            let order_bound = max_order
                .as_ref()
                .map(|big_m| match (t.order(), alpha.to_i64()) {
                    (Some(o), Some(a)) => o <= big_m.pow((r as i64 * a) as u32),
                    _ => false,
                });
            let rank_bound = Int::from(t.num_generators()) <= alpha * Int::from(m * r);
            BoundCheck {
                degree: k,
                value: t.clone(),
                order_bound,
                rank_bound,
            }
        })
        .collect()
}

/// Group-homology bounds: `rk H_k(G;M) ≤ r|G|^k` (`r` the rank of `M`),
/// `|H_k(G;ℤ)| ≤ |G|^{|G|^k}` for `k ≥ 1`, and `|H_k(G;M)| ≤ |M|^{|G|^k}` for
/// finite `M`.
pub fn check_bounds(h: &[FgAbGroup], group_order: usize, m: &FgAbGroup) -> bool {
    let g = Int::from(group_order);
    h.iter().enumerate().all(|(k, hk)| {
        let gk = g.pow(k as u32);
        let rank_ok = Int::from(hk.rank()) <= Int::from(m.rank()) * gk.clone();
        let e = gk.to_i64().map(|x| x as u32);
        let order_ok = match (m.order(), m == &FgAbGroup::z() && k >= 1) {
            (_, true) => matches!((hk.order(), e), (Some(o), Some(e)) if o <= g.pow(e)),
            (Some(mo), false) => matches!((hk.order(), e), (Some(o), Some(e)) if o <= mo.pow(e)),
            (None, false) => true,
        };
        rank_ok && order_ok
    })
}
