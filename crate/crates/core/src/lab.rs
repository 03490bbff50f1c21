//! Sphere builders for cyclic actions, orbit-type filtrations, join
//! stabilization experiments and their tables, and the scene file format.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::FgAbGroup;
use crate::bredon::{bredon_cohomology, bredon_homology, bredon_restriction, TrivialModule};
use crate::duality::b_pair;
use crate::error::{Error, Result};
use crate::functor::group_homology_capped;
use crate::g_complex::{
    fixed_subcomplex, join_capped, n_fold_join_capped, pair_complex, sd_capped, sd_f_vector,
    singular_subcomplex, star_neighborhood_capped, ComplexSpec, GComplex, Subcomplex,
    DEFAULT_SIMPLEX_CAP,
};
use crate::perm_group::{
    all_subgroups, conjugacy_classes_of_subgroups, weyl_group, FiniteGroup, Perm, Subgroup,
};

/// A `v`-gon; generator `i` of `group` rotates it by `shifts[i]`.
pub fn polygon(group: &Arc<FiniteGroup>, vertices: usize, shifts: &[usize]) -> Result<GComplex> {
    if vertices < 3 {
        return Err(Error::Precondition(format!(
            "a simplicial circle needs at least 3 vertices, got {vertices}"
        )));
    }
    if shifts.len() != group.generators().len() {
        return Err(Error::Scene(format!(
            "polygon needs one shift per generator ({}), got {}",
            group.generators().len(),
            shifts.len()
        )));
    }
    let v = vertices as u32;
    let edges: Vec<Vec<u32>> = (0..v).map(|i| vec![i, (i + 1) % v]).collect();
    let images: Vec<Perm> = shifts
        .iter()
        .map(|&s| Perm::new((0..v).map(|i| (i + s as u32 % v) % v).collect()))
        .collect::<Result<_>>()?;
    GComplex::from_facets(vertices, &edges, Arc::clone(group), &images)
}

/// The boundary of the `(p+1)`-simplex, an `S^p`, with trivial action.
pub fn boundary_sphere(group: &Arc<FiniteGroup>, p: usize) -> Result<GComplex> {
    let n = p as u32 + 2;
    let facets: Vec<Vec<u32>> = (0..n)
        .map(|k| (0..n).filter(|&v| v != k).collect())
        .collect();
    let ids = vec![Perm::identity(n as usize); group.generators().len()];
    GComplex::from_facets(n as usize, &facets, Arc::clone(group), &ids)
}

/// Element of full order used as the generator `t` of a cyclic group, with
/// `t^a` for every `a`.
fn cyclic_generator(group: &Arc<FiniteGroup>) -> Result<(usize, Vec<usize>)> {
    let m = group.order();
    let gens = group.generators();
    let t = if gens.len() == 1 && group.element_order(gens[0]) == m {
        gens[0]
    } else {
        (0..m)
            .find(|&x| group.element_order(x) == m)
            .ok_or_else(|| Error::Precondition("linear spheres need a cyclic group".into()))?
    };
    let mut powers = vec![group.identity()];
    for _ in 1..m {
        powers.push(group.mul(*powers.last().unwrap(), t));
    }
    Ok((t, powers))
}

/// `S(V)` for the `C_m`-representation with characters `weights`, as a join
/// of one polygon per character, acted on by [`FiniteGroup::cyclic`].
pub fn linear_sphere(m: usize, weights: &[i64]) -> Result<GComplex> {
    linear_sphere_on(&FiniteGroup::cyclic(m), weights, DEFAULT_SIMPLEX_CAP)
}

/// [`linear_sphere`] over a given cyclic group; fixed sets are checked
/// against the join of the circles whose character vanishes on each subgroup.
pub fn linear_sphere_on(group: &Arc<FiniteGroup>, weights: &[i64], cap: usize) -> Result<GComplex> {
    if weights.is_empty() {
        return Err(Error::Precondition(
            "linear sphere needs at least one weight".into(),
        ));
    }
    let m = group.order();
    let (_, powers) = cyclic_generator(group)?;
    let exponent = |g: usize| powers.iter().position(|&p| p == g).expect("cyclic");
    let c = 3usize.div_ceil(m);
    let v = m * c;
    let ks: Vec<usize> = weights
        .iter()
        .map(|&k| k.rem_euclid(m as i64) as usize)
        .collect();
    let mut acc: Option<GComplex> = None;
    for &k in &ks {
        let shifts: Vec<usize> = group
            .generators()
            .iter()
            .map(|&g| (exponent(g) * k * c) % v)
            .collect();
        let circle = polygon(group, v, &shifts)?;
        acc = Some(match acc {
            None => circle,
            Some(a) => join_capped(&a, &circle, cap)?,
        });
    }
    let x = Arc::new(acc.expect("nonempty"));
    for d in (1..=m).filter(|d| m % d == 0) {
        let h = group.closure(&[powers[(m / d) % m]]);
        let fixed = fixed_subcomplex(&x, &h)?;
        let predicted: Vec<u32> = ks
            .iter()
            .enumerate()
            .filter(|(_, &k)| k % d == 0)
            .flat_map(|(j, _)| (j * v) as u32..((j + 1) * v) as u32)
            .collect();
        if fixed.vertices() != predicted {
            return Err(Error::Hypothesis(format!(
                "fixed set of the subgroup of order {d} differs from the prediction"
            )));
        }
    }
    Ok(Arc::try_unwrap(x).unwrap_or_else(|a| (*a).clone()))
}

/// `F_1 ⊆ … ⊆ F_m` for the conjugacy classes of subgroups `H_1, …, H_m` in
/// non-increasing order, with the two fixed-point identities per step.
#[derive(Clone, Debug)]
pub struct OrbitFiltration {
    pub labels: Vec<String>,
    pub layers: Vec<Subcomplex>,
    /// `F_s^{H_s} = X^{H_s}`.
    pub fixed_identity: Vec<bool>,
    /// `F_{s-1}^{H_s} = X^{>H_s}`.
    pub singular_identity: Vec<bool>,
}

impl OrbitFiltration {
    pub fn identities_hold(&self) -> bool {
        self.fixed_identity
            .iter()
            .chain(&self.singular_identity)
            .all(|&b| b)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let steps: Vec<serde_json::Value> = (0..self.layers.len())
            .map(|s| {
                serde_json::json!({
                    "s": s + 1,
                    "class": self.labels[s],
                    "f_vector": self.layers[s].f_vector(),
                    "fixed_identity": self.fixed_identity[s],
                    "singular_identity": self.singular_identity[s],
                })
            })
            .collect();
        serde_json::json!({ "steps": steps, "identities_hold": self.identities_hold() })
    }
}

pub fn orbit_filtration(x: &Arc<GComplex>) -> Result<OrbitFiltration> {
    if !x.validate().fixed_sets_full {
        return Err(Error::Precondition(
            "fixed sets are not subcomplexes; subdivide first".into(),
        ));
    }
    let g = x.group();
    let classes = conjugacy_classes_of_subgroups(g);
    let mut cache: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut by_class: Vec<Vec<Vec<u32>>> = vec![Vec::new(); classes.len()];
    for d in 0..x.f_vector().len() {
        for s in x.simplices(d).iter() {
            let members: Vec<usize> = (0..g.order())
                .filter(|&e| s.iter().all(|&v| x.action(e).apply(v) == v))
                .collect();
            let c = match cache.get(&members) {
                Some(&c) => c,
                None => {
                    let h = Subgroup::from_members(g, members.clone())?;
                    let c = classes.class_of(&h).expect("every subgroup is classified");
                    cache.insert(members, c);
                    c
                }
            };
            by_class[c].push(s.to_vec());
        }
    }
    let mut layers = Vec::new();
    let mut gens: Vec<Vec<u32>> = Vec::new();
    for sims in &by_class {
        gens.extend(sims.iter().cloned());
        layers.push(Subcomplex::generated_by(x, &gens)?);
    }
    let all: Vec<usize> = (0..g.order()).collect();
    assert!(
        layers.iter().all(|f| f.is_invariant_under(&all)),
        "filtration layers must be invariant"
    );
    let mut fixed_identity = Vec::new();
    let mut singular_identity = Vec::new();
    for (s, class) in classes.classes.iter().enumerate() {
        let k = &class.representative;
        let xk = fixed_subcomplex(x, k)?;
        fixed_identity.push(layers[s].intersection(&xk)?.same_simplices(&xk));
        let prev = if s == 0 {
            Subcomplex::empty(x)
        } else {
            layers[s - 1].clone()
        };
        singular_identity.push(
            prev.intersection(&xk)?
                .same_simplices(&singular_subcomplex(x, k)?),
        );
    }
    Ok(OrbitFiltration {
        labels: (0..classes.len()).map(|i| classes.label(i)).collect(),
        layers,
        fixed_identity,
        singular_identity,
    })
}

/// One `(n, H)` comparison of `(X^{*n})^H` with `(X^H)^{*n}`.
#[derive(Clone, Debug, Serialize)]
pub struct JoinLawRow {
    pub n: usize,
    pub subgroup: Vec<usize>,
    pub dim_fixed: isize,
    pub join_law: bool,
}

/// Codimension of `(X^{*n})^H` in `(X^{*n})^{H'}` for `H' ≤ H` with `X^H ≠ X^{H'}`.
#[derive(Clone, Debug, Serialize)]
pub struct CodimensionRow {
    pub n: usize,
    pub larger: Vec<usize>,
    pub smaller: Vec<usize>,
    pub codimension: isize,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct JoinStructure {
    pub join_law: Vec<JoinLawRow>,
    pub codimension: Vec<CodimensionRow>,
}

impl JoinStructure {
    pub fn holds(&self) -> bool {
        self.join_law.iter().all(|r| r.join_law) && self.codimension.iter().all(|r| r.holds)
    }
}

/// Checks the fixed-set join law and codimension growth for `n = 1..=n_max`
/// and every subgroup.
pub fn join_structure(x: &Arc<GComplex>, n_max: usize, cap: usize) -> Result<JoinStructure> {
    let subgroups = all_subgroups(x.group());
    let base: Vec<Subcomplex> = subgroups
        .iter()
        .map(|h| fixed_subcomplex(x, h))
        .collect::<Result<_>>()?;
    let nv = x.num_vertices() as u32;
    let mut join_law = Vec::new();
    let mut codimension = Vec::new();
    for n in 1..=n_max {
        let xn = Arc::new(n_fold_join_capped(x, n, cap)?);
        let mut dims = Vec::new();
        for (h, fixed) in subgroups.iter().zip(&base) {
            let fxn = fixed_subcomplex(&xn, h)?;
            let plain = fixed.to_plain_complex();
            let fv = fixed.vertices();
            let mut same = true;
            if plain.num_vertices() > 0 {
                let joined = n_fold_join_capped(&plain, n, cap)?;
                let np = plain.num_vertices() as u32;
                let mut count = 0;
                for d in 0..joined.f_vector().len() {
                    for s in joined.simplices(d).iter() {
                        let img: Vec<u32> = s
                            .iter()
                            .map(|&v| fv[(v % np) as usize] + (v / np) * nv)
                            .collect();
                        same &= fxn.contains_simplex(&img);
                        count += 1;
                    }
                }
                same &= count == fxn.f_vector().iter().sum::<usize>();
            } else {
                same = fxn.is_empty();
            }
            dims.push(fxn.dim());
            join_law.push(JoinLawRow {
                n,
                subgroup: h.members().to_vec(),
                dim_fixed: fxn.dim(),
                join_law: same,
            });
        }
        for (i, big) in subgroups.iter().enumerate() {
            for (j, small) in subgroups.iter().enumerate() {
                if i == j || !small.is_subgroup_of(big) || base[i].same_simplices(&base[j]) {
                    continue;
                }
                let c = dims[j] - dims[i];
                codimension.push(CodimensionRow {
                    n,
                    larger: big.members().to_vec(),
                    smaller: small.members().to_vec(),
                    codimension: c,
                    holds: c >= n as isize,
                });
            }
        }
    }
    Ok(JoinStructure {
        join_law,
        codimension,
    })
}

/// Parameters of a stabilization run.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    /// Inclusive range of join powers.
    pub n_range: (usize, usize),
    pub k_max: usize,
    pub coefficients: Vec<TrivialModule>,
    pub max_simplices: usize,
}

/// How `B_n` was obtained for one `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Star neighborhood of `A_n` in `sd²(Y_n)`.
    Sd2,
    /// `A_n = ∅` and `B_n = Y_n`.
    Direct,
    Skipped,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Sd2 => "sd2",
            Mode::Direct => "direct",
            Mode::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunInfo {
    pub n: usize,
    pub mode: Mode,
    pub dim_y: isize,
    pub dim_a: isize,
    /// Simplices of the complex the groups were computed on.
    pub simplices: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub mode: String,
    pub dim_y: isize,
    pub dim_a: isize,
    pub simplices: usize,
    pub part: String,
    pub quantity: String,
    pub coefficient: String,
    pub k: usize,
    /// Degree actually computed (`k`, or `N - k` for cohomology).
    pub degree: isize,
    pub value: String,
    pub reference: String,
    pub verdict: String,
}

impl TableRow {
    /// Values in [`CSV_HEADER`] order.
    pub fn fields(&self) -> [String; 13] {
        [
            self.n.to_string(),
            self.mode.clone(),
            self.dim_y.to_string(),
            self.dim_a.to_string(),
            self.simplices.to_string(),
            self.part.clone(),
            self.quantity.clone(),
            self.coefficient.clone(),
            self.k.to_string(),
            self.degree.to_string(),
            self.value.clone(),
            self.reference.clone(),
            self.verdict.clone(),
        ]
    }
}

pub const CSV_HEADER: [&str; 13] = [
    "n",
    "mode",
    "dim_y",
    "dim_a",
    "simplices",
    "part",
    "quantity",
    "coefficient",
    "k",
    "degree",
    "value",
    "reference",
    "verdict",
];

#[derive(Clone, Debug, Serialize)]
pub struct SummaryRow {
    pub part: String,
    pub quantity: String,
    pub coefficient: String,
    pub k: usize,
    /// `(n, value)` over the computed range.
    pub values: Vec<(usize, String)>,
    /// The last value is repeated over at least two consecutive `n`.
    pub stable_tail: bool,
    /// Part A: `pass` when the largest `n` matches group homology. Other
    /// parts: `stable`, `unstable` or `insufficient`.
    pub verdict: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum Status {
    Complete,
    HypothesisFailed { n: usize, reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizationTable {
    pub subgroup: Vec<usize>,
    pub weyl_order: usize,
    pub n_range: (usize, usize),
    pub k_max: usize,
    pub coefficients: Vec<String>,
    pub max_simplices: usize,
    pub status: Status,
    pub runs: Vec<RunInfo>,
    pub rows: Vec<TableRow>,
    pub summary: Vec<SummaryRow>,
}

impl StabilizationTable {
    /// Every part-A summary passes and the run was not gated.
    pub fn passes(&self) -> bool {
        matches!(self.status, Status::Complete)
            && self
                .summary
                .iter()
                .filter(|s| s.part == "A")
                .all(|s| s.verdict == "pass")
    }

    /// A hypothesis gate fired, or every `n` was skipped.
    pub fn gated(&self) -> bool {
        matches!(self.status, Status::HypothesisFailed { .. })
            || (!self.runs.is_empty() && self.runs.iter().all(|r| r.mode == Mode::Skipped))
    }
}

fn at(v: &[FgAbGroup], i: isize) -> FgAbGroup {
    if i < 0 {
        return FgAbGroup::zero();
    }
    v.get(i as usize).cloned().unwrap_or_else(FgAbGroup::zero)
}

fn order_string(g: &FgAbGroup) -> String {
    g.order()
        .map_or_else(|| "inf".to_string(), |o| o.to_string())
}

fn saturating_sd(f: &[usize]) -> Vec<usize> {
    sd_f_vector(f)
        .into_iter()
        .map(|c| usize::try_from(c).unwrap_or(usize::MAX))
        .collect()
}

struct Work {
    mode: Mode,
    y: Arc<GComplex>,
    a: Subcomplex,
    b: Arc<GComplex>,
    d: Subcomplex,
}

/// Runs the stabilization experiment for `X^{*n}` and `K`, one row per
/// computed group.
pub fn key_lemma_experiment(
    x: &Arc<GComplex>,
    k: &Subgroup,
    cfg: &ExperimentConfig,
) -> Result<StabilizationTable> {
    let (lo, hi) = cfg.n_range;
    if lo == 0 || lo > hi {
        return Err(Error::Precondition(format!("bad n range {lo}..={hi}")));
    }
    let w = weyl_group(x.group(), k)?;
    let cap = cfg.max_simplices;
    let reference: Vec<Vec<FgAbGroup>> = cfg
        .coefficients
        .iter()
        .map(|t| group_homology_capped(&w.group, &t.underlying, cfg.k_max, cap))
        .collect::<Result<_>>()?;
    let mut table = StabilizationTable {
        subgroup: k.members().to_vec(),
        weyl_order: w.group.order(),
        n_range: cfg.n_range,
        k_max: cfg.k_max,
        coefficients: cfg.coefficients.iter().map(ToString::to_string).collect(),
        max_simplices: cap,
        status: Status::Complete,
        runs: Vec::new(),
        rows: Vec::new(),
        summary: Vec::new(),
    };
    for n in lo..=hi {
        let skip = |table: &mut StabilizationTable, dim_y: isize, dim_a: isize, why: String| {
            table.runs.push(RunInfo {
                n,
                mode: Mode::Skipped,
                dim_y,
                dim_a,
                simplices: 0,
                note: Some(why),
            });
        };
        let xn = match n_fold_join_capped(x, n, cap) {
            Ok(c) => Arc::new(c),
            Err(e @ Error::SimplexCapExceeded { .. }) => {
                skip(&mut table, -1, -1, e.to_string());
                continue;
            }
            Err(e) => return Err(e),
        };
        let fixed = fixed_subcomplex(&xn, &w.kernel)?;
        let singular = singular_subcomplex(&xn, k)?;
        let (y, a, _) = pair_complex(&fixed, &singular, &w.group, &w.lifts)?;
        let (dim_y, dim_a) = (y.dim(), a.dim());
        if a.same_simplices(&Subcomplex::full(&y)) {
            table.status = Status::HypothesisFailed {
                n,
                reason: "lemma hypothesis A_n ⊊ Y_n fails".into(),
            };
            break;
        }
        let sd2_size: usize = saturating_sd(&saturating_sd(&y.f_vector()))
            .iter()
            .fold(0usize, |s, &c| s.saturating_add(c));
        let work = if sd2_size <= cap {
            let nb = star_neighborhood_capped(&y, &a, cap)?;
            let pair = b_pair(&nb)?;
            Work {
                mode: Mode::Sd2,
                y: Arc::clone(&nb.ysd2),
                a: nb.a.clone(),
                b: pair.b,
                d: pair.d,
            }
        } else if a.is_empty() {
            let y = if y.validate().pointwise_fixing {
                y
            } else {
                match sd_capped(&y, cap) {
                    Ok(s) => Arc::new(s),
                    Err(e @ Error::SimplexCapExceeded { .. }) => {
                        skip(&mut table, dim_y, dim_a, e.to_string());
                        continue;
                    }
                    Err(e) => return Err(e),
                }
            };
            let a = Subcomplex::empty(&y);
            Work {
                mode: Mode::Direct,
                y: Arc::clone(&y),
                a: a.clone(),
                b: y,
                d: a,
            }
        } else {
            skip(
                &mut table,
                dim_y,
                dim_a,
                format!("sd² needs {sd2_size} simplices and A_n is nonempty"),
            );
            continue;
        };
        let simplices = work.y.total_simplices();
        table.runs.push(RunInfo {
            n,
            mode: work.mode,
            dim_y,
            dim_a,
            simplices,
            note: None,
        });
        let big_n = dim_y;
        let lifts: Vec<usize> = (0..w.group.order()).collect();
        let a_complex = Arc::new(work.a.to_complex(&w.group, &lifts)?);
        let d_complex = Arc::new(work.d.to_complex(&w.group, &lifts)?);
        let mut push = |part: &str,
                        quantity: &str,
                        coeff: &str,
                        kk: usize,
                        degree: isize,
                        value: String,
                        reference: String| {
            let verdict = if reference.is_empty() {
                String::new()
            } else if value == reference {
                "match".into()
            } else {
                "mismatch".into()
            };
            table.rows.push(TableRow {
                n,
                mode: work.mode.to_string(),
                dim_y,
                dim_a,
                simplices,
                part: part.into(),
                quantity: quantity.into(),
                coefficient: coeff.into(),
                k: kk,
                degree,
                value,
                reference,
                verdict,
            });
        };
        for (ti, t) in cfg.coefficients.iter().enumerate() {
            let label = t.to_string();
            let hb = bredon_homology(&work.b, None, t)?;
            for kk in 0..=cfg.k_max {
                push(
                    "A",
                    "bredon_homology_B",
                    &label,
                    kk,
                    kk as isize,
                    at(&hb, kk as isize).to_string(),
                    at(&reference[ti], kk as isize).to_string(),
                );
            }
            if t.underlying.is_finite() {
                let hy = bredon_homology(&work.y, None, t)?;
                let ha = bredon_homology(&a_complex, None, t)?;
                for kk in 0..=cfg.k_max {
                    push(
                        "B",
                        "order_bredon_homology_Y",
                        &label,
                        kk,
                        kk as isize,
                        order_string(&at(&hy, kk as isize)),
                        String::new(),
                    );
                    push(
                        "B",
                        "order_bredon_homology_A",
                        &label,
                        kk,
                        kk as isize,
                        order_string(&at(&ha, kk as isize)),
                        String::new(),
                    );
                }
            }
            let cy = bredon_cohomology(&work.y, None, t)?;
            let cya = bredon_cohomology(&work.y, Some(&work.a), t)?;
            let cb = bredon_cohomology(&work.b, None, t)?;
            let cd = bredon_cohomology(&d_complex, None, t)?;
            for kk in 0..=cfg.k_max {
                let deg = big_n - kk as isize;
                push(
                    "C",
                    "bredon_cohomology_Y",
                    &label,
                    kk,
                    deg,
                    at(&cy, deg).to_string(),
                    String::new(),
                );
                push(
                    "C",
                    "bredon_cohomology_Y_rel_A",
                    &label,
                    kk,
                    deg,
                    at(&cya, deg).to_string(),
                    String::new(),
                );
                push(
                    "C",
                    "bredon_cohomology_B",
                    &label,
                    kk,
                    deg,
                    at(&cb, deg).to_string(),
                    String::new(),
                );
                push(
                    "C",
                    "bredon_cohomology_D",
                    &label,
                    kk,
                    deg,
                    at(&cd, deg).to_string(),
                    String::new(),
                );
            }
        }
        for kk in 0..=cfg.k_max {
            let deg = big_n - kk as isize;
            let (ker, coker) = if deg < 0 {
                (FgAbGroup::zero(), FgAbGroup::zero())
            } else {
                let lambda = bredon_restriction(&work.b, &work.d, deg as usize)?;
                (
                    lambda.kernel().group().clone(),
                    lambda.cokernel().group().clone(),
                )
            };
            push(
                "D",
                "ker_lambda",
                "Z",
                kk,
                deg,
                ker.to_string(),
                String::new(),
            );
            push(
                "D",
                "coker_lambda",
                "Z",
                kk,
                deg,
                coker.to_string(),
                String::new(),
            );
        }
    }
    table.summary = summarize(&table.rows);
    Ok(table)
}

fn summarize(rows: &[TableRow]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(String, String, String, usize), Vec<&TableRow>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((
                r.part.clone(),
                r.quantity.clone(),
                r.coefficient.clone(),
                r.k,
            ))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((part, quantity, coefficient, k), rs)| {
            let values: Vec<(usize, String)> = rs.iter().map(|r| (r.n, r.value.clone())).collect();
            let l = values.len();
            let stable_tail = l >= 2
                && values[l - 1].1 == values[l - 2].1
                && values[l - 1].0 == values[l - 2].0 + 1;
            let verdict = if part == "A" {
                if rs.last().is_some_and(|r| r.verdict == "match") {
                    "pass"
                } else {
                    "fail"
                }
            } else if l < 2 {
                "insufficient"
            } else if stable_tail {
                "stable"
            } else {
                "unstable"
            };
            SummaryRow {
                part,
                quantity,
                coefficient,
                k,
                values,
                stable_tail,
                verdict: verdict.into(),
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Scene(format!("unknown format {s:?} (csv or json)"))),
        }
    }
}

/// Serializes a table. CSV holds the rows; JSON holds everything, with keys
/// sorted.
pub fn emit(table: &StabilizationTable, format: Format) -> Result<String> {
    match format {
        Format::Csv => rows_to_csv(&table.rows),
        Format::Json => {
            let v = serde_json::to_value(table).map_err(|e| Error::Scene(e.to_string()))?;
            let mut s =
                serde_json::to_string_pretty(&v).map_err(|e| Error::Scene(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

pub fn rows_to_csv(rows: &[TableRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    let err = |e: csv::Error| Error::Scene(e.to_string());
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in rows {
        w.write_record(r.fields()).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Scene(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

/// Several named tables: CSV rows gain a leading `experiment` column, JSON
/// is an object keyed by name.
pub fn emit_many(tables: &[(String, StabilizationTable)], format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(Vec::new());
            let err = |e: csv::Error| Error::Scene(e.to_string());
            let mut header = vec!["experiment"];
            header.extend(CSV_HEADER);
            w.write_record(&header).map_err(err)?;
            for (name, t) in tables {
                for r in &t.rows {
                    let mut rec = vec![name.clone()];
                    rec.extend(r.fields());
                    w.write_record(&rec).map_err(err)?;
                }
            }
            let bytes = w.into_inner().map_err(|e| Error::Scene(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("utf-8"))
        }
        Format::Json => {
            let map: BTreeMap<&str, &StabilizationTable> =
                tables.iter().map(|(n, t)| (n.as_str(), t)).collect();
            let v = serde_json::to_value(map).map_err(|e| Error::Scene(e.to_string()))?;
            let mut s =
                serde_json::to_string_pretty(&v).map_err(|e| Error::Scene(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

pub fn rows_from_csv(s: &str) -> Result<Vec<TableRow>> {
    let mut r = csv::Reader::from_reader(s.as_bytes());
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Scene(e.to_string())))
        .collect()
}

pub const SCENE_SCHEMA: &str = "equirep/1";

/// The acting group of a scene.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupBlock {
    Cyclic {
        cyclic: usize,
    },
    Symmetric {
        symmetric: usize,
    },
    Permutations {
        degree: usize,
        generators: Vec<Vec<u32>>,
    },
}

impl GroupBlock {
    pub fn build(&self) -> Result<Arc<FiniteGroup>> {
        match self {
            GroupBlock::Cyclic { cyclic } if *cyclic >= 1 => Ok(FiniteGroup::cyclic(*cyclic)),
            GroupBlock::Cyclic { .. } => {
                Err(Error::Scene("cyclic group order must be at least 1".into()))
            }
            GroupBlock::Symmetric { symmetric } => FiniteGroup::symmetric(*symmetric),
            GroupBlock::Permutations { degree, generators } => {
                let perms: Vec<Perm> = generators
                    .iter()
                    .map(|g| Perm::new(g.clone()))
                    .collect::<Result<_>>()?;
                if perms.iter().any(|p| p.degree() != *degree) {
                    return Err(Error::Scene(
                        "generator degree differs from the declared degree".into(),
                    ));
                }
                crate::perm_group::group_from_generators(*degree, &perms)
            }
        }
    }
}

/// A named complex: explicit, or a builder applied to parameters and other
/// named complexes. Actions are given per generator of the scene group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case", deny_unknown_fields)]
pub enum ComplexBlock {
    Explicit {
        vertices: usize,
        simplices: Vec<Vec<u32>>,
        action: Vec<Vec<u32>>,
    },
    Polygon {
        vertices: usize,
        shifts: Vec<usize>,
    },
    Circle {
        vertices: usize,
    },
    Sphere {
        dim: usize,
    },
    LinearSphere {
        weights: Vec<i64>,
    },
    Join {
        left: String,
        right: String,
    },
    NFoldJoin {
        of: String,
        n: usize,
    },
    Sd {
        of: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubgroupSpec {
    /// `"trivial"` or `"whole"`.
    Named(String),
    GeneratedBy {
        generated_by: Vec<Vec<u32>>,
    },
}

/// What to use as `A` in a duality run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualitySubcomplex {
    Empty,
    /// The singular set `Y^{>e}`.
    Singular,
}

fn default_k_max() -> usize {
    2
}

fn default_coefficients() -> Vec<String> {
    vec!["Z".into()]
}

fn default_cap() -> usize {
    DEFAULT_SIMPLEX_CAP
}

fn default_trivial() -> SubgroupSpec {
    SubgroupSpec::Named("trivial".into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExperimentBlock {
    Stabilize {
        name: String,
        complex: String,
        #[serde(default = "default_trivial")]
        subgroup: SubgroupSpec,
        n_range: (usize, usize),
        #[serde(default = "default_k_max")]
        k_max: usize,
        #[serde(default = "default_coefficients")]
        coefficients: Vec<String>,
        #[serde(default = "default_cap")]
        max_simplices: usize,
    },
    Duality {
        name: String,
        complex: String,
        subcomplex: DualitySubcomplex,
        #[serde(default = "default_coefficients")]
        coefficients: Vec<String>,
        #[serde(default = "default_cap")]
        max_simplices: usize,
    },
}

impl ExperimentBlock {
    pub fn name(&self) -> &str {
        match self {
            ExperimentBlock::Stabilize { name, .. } | ExperimentBlock::Duality { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub schema: String,
    pub group: GroupBlock,
    pub complexes: BTreeMap<String, ComplexBlock>,
    #[serde(default)]
    pub experiments: Vec<ExperimentBlock>,
}

/// A scene with its group and every complex built.
#[derive(Clone, Debug)]
pub struct Scene {
    pub file: SceneFile,
    pub group: Arc<FiniteGroup>,
    pub complexes: BTreeMap<String, Arc<GComplex>>,
}

impl SceneFile {
    pub fn parse(text: &str) -> Result<SceneFile> {
        let f: SceneFile = serde_json::from_str(text).map_err(|e| Error::Scene(e.to_string()))?;
        if f.schema != SCENE_SCHEMA {
            return Err(Error::Scene(format!(
                "unsupported schema {:?}, expected {SCENE_SCHEMA:?}",
                f.schema
            )));
        }
        Ok(f)
    }

    pub fn load(&self) -> Result<Scene> {
        self.load_capped(DEFAULT_SIMPLEX_CAP)
    }

    pub fn load_capped(&self, cap: usize) -> Result<Scene> {
        let group = self.group.build()?;
        let mut built = BTreeMap::new();
        for name in self.complexes.keys() {
            self.resolve(name, &group, cap, &mut built, &mut Vec::new())?;
        }
        for e in &self.experiments {
            let c = match e {
                ExperimentBlock::Stabilize { complex, .. }
                | ExperimentBlock::Duality { complex, .. } => complex,
            };
            if !built.contains_key(c) {
                return Err(Error::Scene(format!(
                    "experiment {:?} names unknown complex {c:?}",
                    e.name()
                )));
            }
        }
        Ok(Scene {
            file: self.clone(),
            group,
            complexes: built,
        })
    }

    fn resolve(
        &self,
        name: &str,
        group: &Arc<FiniteGroup>,
        cap: usize,
        built: &mut BTreeMap<String, Arc<GComplex>>,
        stack: &mut Vec<String>,
    ) -> Result<Arc<GComplex>> {
        if let Some(x) = built.get(name) {
            return Ok(Arc::clone(x));
        }
        if stack.iter().any(|s| s == name) {
            return Err(Error::Scene(format!("complex {name:?} refers to itself")));
        }
        let block = self
            .complexes
            .get(name)
            .ok_or_else(|| Error::Scene(format!("unknown complex {name:?}")))?;
        stack.push(name.to_string());
        let x = match block {
            ComplexBlock::Explicit {
                vertices,
                simplices,
                action,
            } => {
                if action.len() != group.generators().len() {
                    return Err(Error::Scene(format!(
                        "complex {name:?} needs one action permutation per generator"
                    )));
                }
                let images: Vec<Perm> = action
                    .iter()
                    .map(|p| Perm::new(p.clone()))
                    .collect::<Result<_>>()?;
                GComplex::from_facets_capped(*vertices, simplices, Arc::clone(group), &images, cap)?
            }
            ComplexBlock::Polygon { vertices, shifts } => polygon(group, *vertices, shifts)?,
            ComplexBlock::Circle { vertices } => {
                polygon(group, *vertices, &vec![0; group.generators().len()])?
            }
            ComplexBlock::Sphere { dim } => boundary_sphere(group, *dim)?,
            ComplexBlock::LinearSphere { weights } => linear_sphere_on(group, weights, cap)?,
            ComplexBlock::Join { left, right } => {
                let l = self.resolve(left, group, cap, built, stack)?;
                let r = self.resolve(right, group, cap, built, stack)?;
                join_capped(&l, &r, cap)?
            }
            ComplexBlock::NFoldJoin { of, n } => {
                let x = self.resolve(of, group, cap, built, stack)?;
                n_fold_join_capped(&x, *n, cap)?
            }
            ComplexBlock::Sd { of } => {
                let x = self.resolve(of, group, cap, built, stack)?;
                sd_capped(&x, cap)?
            }
        };
        stack.pop();
        let x = Arc::new(x);
        built.insert(name.to_string(), Arc::clone(&x));
        Ok(x)
    }
}

impl Scene {
    pub fn complex(&self, name: &str) -> Result<&Arc<GComplex>> {
        self.complexes
            .get(name)
            .ok_or_else(|| Error::Scene(format!("unknown complex {name:?}")))
    }

    pub fn subgroup(&self, spec: &SubgroupSpec) -> Result<Subgroup> {
        match spec {
            SubgroupSpec::Named(s) if s == "trivial" => Ok(Subgroup::trivial(&self.group)),
            SubgroupSpec::Named(s) if s == "whole" => Ok(Subgroup::whole(&self.group)),
            SubgroupSpec::Named(s) => Err(Error::Scene(format!(
                "unknown subgroup {s:?} (trivial, whole or generated_by)"
            ))),
            SubgroupSpec::GeneratedBy { generated_by } => {
                let gens: Vec<usize> = generated_by
                    .iter()
                    .map(|p| {
                        let p = Perm::new(p.clone())?;
                        self.group
                            .index_of(&p)
                            .ok_or_else(|| Error::Scene(format!("{p:?} is not in the group")))
                    })
                    .collect::<Result<_>>()?;
                Ok(self.group.closure(&gens))
            }
        }
    }

    /// A complex of the scene in the interchange format.
    pub fn complex_spec(&self, name: &str) -> Result<ComplexSpec> {
        Ok(self.complex(name)?.to_spec())
    }
}

pub fn parse_coefficients(list: &[String]) -> Result<Vec<TrivialModule>> {
    list.iter().map(|s| s.parse()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::integral_homology;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    #[test]
    fn linear_sphere_fixed_sets() {
        let s = Arc::new(linear_sphere(2, &[1]).unwrap());
        assert_eq!(s.num_vertices(), 4);
        assert!(fixed_subcomplex(&s, &Subgroup::whole(s.group()))
            .unwrap()
            .is_empty());
        let s3 = Arc::new(linear_sphere(2, &[0, 1]).unwrap());
        assert_eq!(
            integral_homology(&s3.chain_complex()),
            vec![g("Z"), g("0"), g("0"), g("Z")]
        );
        let f = fixed_subcomplex(&s3, &Subgroup::whole(s3.group())).unwrap();
        assert_eq!(f.f_vector(), vec![4, 4]);
        let t = Arc::new(linear_sphere(4, &[1, 2]).unwrap());
        assert_eq!(t.dim(), 3);
        let c2 = t.group().closure(&[t
            .group()
            .mul(t.group().generators()[0], t.group().generators()[0])]);
        assert_eq!(
            fixed_subcomplex(&t, &c2).unwrap().vertices(),
            (4..8).collect::<Vec<u32>>()
        );
        assert!(fixed_subcomplex(&t, &Subgroup::whole(t.group()))
            .unwrap()
            .is_empty());
        // C3 rotating a triangle by 1 and the trivial character
        let u = linear_sphere(3, &[1, 3]).unwrap();
        assert_eq!(u.f_vector()[0], 6);
    }

    #[test]
    fn filtration_examples() {
        let x = Arc::new(boundary_sphere(&FiniteGroup::trivial(), 1).unwrap());
        let f = orbit_filtration(&x).unwrap();
        assert_eq!(f.layers.len(), 1);
        assert!(f.layers[0].same_simplices(&Subcomplex::full(&x)) && f.identities_hold());
        let free = Arc::new(linear_sphere(2, &[1]).unwrap());
        let f = orbit_filtration(&free).unwrap();
        assert!(f.layers[0].is_empty() && f.layers[1].same_simplices(&Subcomplex::full(&free)));
        let s3 = Arc::new(linear_sphere(2, &[0, 1]).unwrap());
        let f = orbit_filtration(&s3).unwrap();
        assert_eq!(f.layers[0].f_vector(), vec![4, 4]);
        assert!(f.identities_hold());
    }

    #[test]
    fn join_structure_of_small_spheres() {
        let x = Arc::new(linear_sphere(2, &[0, 1]).unwrap());
        let j = join_structure(&x, 2, DEFAULT_SIMPLEX_CAP).unwrap();
        assert!(j.holds());
        assert_eq!(
            j.codimension
                .iter()
                .map(|r| r.codimension)
                .collect::<Vec<_>>(),
            vec![2, 4]
        );
    }

    #[test]
    fn antipodal_family_matches_group_homology() {
        let x = Arc::new(linear_sphere(2, &[1]).unwrap());
        let cfg = ExperimentConfig {
            n_range: (1, 2),
            k_max: 2,
            coefficients: vec![TrivialModule::z()],
            max_simplices: DEFAULT_SIMPLEX_CAP,
        };
        let t = key_lemma_experiment(&x, &Subgroup::trivial(x.group()), &cfg).unwrap();
        let a: Vec<&TableRow> = t.rows.iter().filter(|r| r.part == "A").collect();
        assert_eq!(
            a.iter().map(|r| r.value.as_str()).collect::<Vec<_>>(),
            ["Z", "Z", "0", "Z", "Z/2", "0"]
        );
        assert!(t.passes());
        assert_eq!(
            t.runs.iter().map(|r| r.mode).collect::<Vec<_>>(),
            vec![Mode::Sd2, Mode::Sd2]
        );
    }

    #[test]
    fn whole_group_gate() {
        let x = Arc::new(linear_sphere(2, &[1]).unwrap());
        let cfg = ExperimentConfig {
            n_range: (1, 1),
            k_max: 1,
            coefficients: vec![TrivialModule::z()],
            max_simplices: DEFAULT_SIMPLEX_CAP,
        };
        let t = key_lemma_experiment(&x, &Subgroup::whole(x.group()), &cfg).unwrap();
        assert!(matches!(t.status, Status::HypothesisFailed { n: 1, .. }));
        assert!(t.gated() && !t.passes());
    }

    #[test]
    fn csv_round_trip() {
        assert_eq!(rows_to_csv(&[]).unwrap().lines().count(), 1);
        let row = TableRow {
            n: 1,
            mode: "direct".into(),
            dim_y: 1,
            dim_a: -1,
            simplices: 8,
            part: "A".into(),
            quantity: "bredon_homology_B".into(),
            coefficient: "Z + Z/2".into(),
            k: 0,
            degree: 0,
            value: "Z, odd".into(),
            reference: "Z".into(),
            verdict: "mismatch".into(),
        };
        let s = rows_to_csv(std::slice::from_ref(&row)).unwrap();
        assert_eq!(rows_from_csv(&s).unwrap(), vec![row]);
    }

    #[test]
    fn scene_parsing() {
        let text = r#"{
            "schema": "equirep/1",
            "group": {"cyclic": 2},
            "complexes": {
                "s": {"builder": "linear_sphere", "weights": [1]},
                "two": {"builder": "n_fold_join", "of": "s", "n": 2},
                "pts": {"builder": "explicit", "vertices": 2, "simplices": [[0], [1]], "action": [[0, 1]]},
                "s2": {"builder": "join", "left": "pts", "right": "s"}
            },
            "experiments": [
                {"kind": "stabilize", "name": "free", "complex": "s", "n_range": [1, 1]}
            ]
        }"#;
        let scene = SceneFile::parse(text).unwrap().load().unwrap();
        assert_eq!(scene.complex("two").unwrap().dim(), 3);
        assert_eq!(
            integral_homology(&scene.complex("s2").unwrap().chain_complex()),
            vec![g("Z"), g("0"), g("Z")]
        );
        assert!(scene
            .subgroup(&SubgroupSpec::Named("whole".into()))
            .unwrap()
            .is_whole());
        let bad = text.replace("\"of\": \"s\"", "\"of\": \"two\"");
        assert!(SceneFile::parse(&bad).unwrap().load().is_err());
        assert!(SceneFile::parse(&text.replace("equirep/1", "equirep/0")).is_err());
    }
}
