//! Equivariant Lefschetz duality checked at chain level.
//!
//! Given `Y` with an invariant subcomplex `A ⊇ Y^{>e}`, the pipeline splits
//! `sd²(Y)` into `B` and `Ubar` along the star of `A`, caps with a relative
//! orientation cycle `Γ_U ∈ C_N(B, D)` to get a map of free `ZG`-complexes
//! `Φ: C^{N-*}(B, D) → C_*(B)`, and compares Bredon (co)homology groups on
//! both sides.
//!
//! Sign conventions: `Φ_j = (-1)^j (c ∩ Γ_U)` on `R_j = C^{N-j}(B, D)`, with
//! the cap product of [`crate::algebra::cap`]. For this to commute with
//! boundaries, `R` carries the differential `(-1)^{j-1} δ` in degree `j`,
//! which changes neither its homology nor its `ZG`-structure.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::cap::cap_matrix;
use crate::algebra::{
    cohomology, homology, integral_homology, ChainComplex, ChainMap, FgAbGroup, HomologyBasis,
    IntMatrix, Reduction,
};
use crate::bredon::{bredon_cohomology, bredon_homology, orbits, Orbits, TrivialModule};
use crate::error::{Error, Result};
use crate::g_complex::{
    pair_complex, relative_complex, star_neighborhood_capped, GComplex, StarNeighborhood,
    Subcomplex, DEFAULT_SIMPLEX_CAP,
};
use crate::integer::Int;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrientationData {
    pub dimension: usize,
    /// Coefficients on the `N`-simplices of the complex it was computed on.
    pub gamma: Vec<Int>,
    /// Restriction of `Γ` to the `N`-simplices of `B` outside `D`, indexed by
    /// the `N`-simplices of `B` as a complex on its own.
    pub gamma_u: Option<Vec<Int>>,
}

fn normalize_sign(v: &mut [Int]) {
    if v.iter()
        .find(|x| !x.is_zero())
        .is_some_and(Int::is_negative)
    {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
}

/// Pushes an `N`-chain through `g_#`.
fn act_on_chain(x: &GComplex, g: usize, d: usize, z: &[Int]) -> Vec<Int> {
    let mut out = vec![Int::ZERO; z.len()];
    for (i, c) in z.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (j, s) = x.act(g, d, i);
        out[j] = if s > 0 { c.clone() } else { -c };
    }
    out
}

/// A generator `Γ` of `H_N(Y) = Z_N(Y) ≅ ℤ`, `N = dim Y`, with first nonzero
/// coefficient positive. Fails unless `H_N ≅ ℤ` and every group element
/// fixes `Γ`.
pub fn orientation_cycle(y: &GComplex) -> Result<OrientationData> {
    if y.dim() < 0 {
        return Err(Error::Hypothesis(
            "empty complex has no orientation cycle".into(),
        ));
    }
    let n = y.dim() as usize;
    if n == 0 {
        return Err(Error::Hypothesis(
            "orientation cycles need positive dimension".into(),
        ));
    }
    let red = Arc::new(Reduction::new(&y.chain_complex(), true));
    let basis = HomologyBasis::new(&red, n)?;
    if *basis.group() != FgAbGroup::z() {
        return Err(Error::Hypothesis(format!(
            "top homology is {}, not Z",
            basis.group()
        )));
    }
    let mut gamma = basis.generators()[0].clone();
    normalize_sign(&mut gamma);
    for g in 0..y.group().order() {
        let moved = act_on_chain(y, g, n, &gamma);
        if moved != gamma {
            let neg: Vec<Int> = gamma.iter().map(|x| -x).collect();
            let how = if moved == neg { "reverses" } else { "moves" };
            return Err(Error::Hypothesis(format!(
                "group element {g} {how} the orientation cycle"
            )));
        }
    }
    Ok(OrientationData {
        dimension: n,
        gamma,
        gamma_u: None,
    })
}

/// `B` as a complex on its own vertices, with `D` inside it.
#[derive(Clone, Debug)]
pub struct BPair {
    pub b: Arc<GComplex>,
    pub d: Subcomplex,
    /// Vertex of `sd²(Y)` for each vertex of `b`.
    pub vertices: Vec<u32>,
}

pub fn b_pair(nb: &StarNeighborhood) -> Result<BPair> {
    let group = nb.ysd2.group();
    let lifts: Vec<usize> = (0..group.order()).collect();
    let (b, d, vertices) = pair_complex(&nb.b, &nb.d, group, &lifts)?;
    Ok(BPair { b, d, vertices })
}

/// Checks that `H_N(Y) → H_N(Y, Ubar)` is an isomorphism and fills in `Γ_U`.
/// `od.gamma` must be an orientation cycle of `nb.ysd2`.
pub fn relative_class(
    nb: &StarNeighborhood,
    pair: &BPair,
    od: &OrientationData,
) -> Result<OrientationData> {
    let y = &nb.ysd2;
    let n = od.dimension;
    let abs = Arc::new(Reduction::new(&y.chain_complex(), true));
    let rel_c = relative_complex(y, &nb.ubar)?;
    let rel = Arc::new(Reduction::new(&rel_c, true));
    let h_abs = HomologyBasis::new(&abs, n)?;
    let h_rel = HomologyBasis::new(&rel, n)?;
    let outside: Vec<usize> = (0..y.count(n))
        .filter(|&i| !nb.ubar.contains(n, i))
        .collect();
    let proj = IntMatrix::from_triplets(
        rel_c.rank(n),
        y.count(n),
        outside.iter().enumerate().map(|(r, &i)| (r, i, Int::ONE)),
    );
    if !h_abs.induced_map(&proj, &h_rel)?.is_iso() {
        return Err(Error::Hypothesis(
            "H_N(Y) → H_N(Y, Ubar) is not an isomorphism".into(),
        ));
    }
    let b = &pair.b;
    let mut gamma_u = vec![Int::ZERO; b.count(n)];
    for &i in &outside {
        let s: Vec<u32> = y
            .simplices(n)
            .get(i)
            .iter()
            .map(|v| {
                pair.vertices
                    .binary_search(v)
                    .expect("simplex outside Ubar lies in B") as u32
            })
            .collect();
        gamma_u[b.simplices(n).position(&s).expect("simplex of B")] = od.gamma[i].clone();
    }
    // Γ_U is a relative cycle generating H_N(B, D) and is fixed by the group
    let bd = pair.d.parent().chain_complex();
    let boundary = bd.boundary(n).mul_vec(&gamma_u);
    if (0..boundary.len()).any(|i| !boundary[i].is_zero() && !pair.d.contains(n - 1, i)) {
        return Err(Error::Hypothesis(
            "restricted orientation cycle is not a relative cycle".into(),
        ));
    }
    for g in 0..b.group().order() {
        if act_on_chain(b, g, n, &gamma_u) != gamma_u {
            return Err(Error::Hypothesis(format!(
                "group element {g} moves the relative class"
            )));
        }
    }
    let bd_rel = relative_complex(b, &pair.d)?;
    let keep: Vec<Int> = (0..b.count(n))
        .filter(|&i| !pair.d.contains(n, i))
        .map(|i| gamma_u[i].clone())
        .collect();
    let hb = HomologyBasis::new(&Arc::new(Reduction::new(&bd_rel, true)), n)?;
    match hb.class_of(&keep) {
        Some(c) if *hb.group() == FgAbGroup::z() && c[0].abs() == Int::ONE => {}
        _ => {
            return Err(Error::Hypothesis(
                "relative class does not generate H_N(B, D)".into(),
            ))
        }
    }
    Ok(OrientationData {
        dimension: n,
        gamma: od.gamma.clone(),
        gamma_u: Some(gamma_u),
    })
}

/// `Φ: R → C_*(B)` with its three chain-level checks.
#[derive(Clone, Debug)]
pub struct DualityMap {
    pub r: ChainComplex,
    pub c: ChainComplex,
    pub phi: ChainMap,
    /// Simplex of `B` for each basis element of `R_j`.
    pub r_basis: Vec<Vec<usize>>,
    /// First degree where `∂Φ ≠ Φ∂`.
    pub chain_map_failure: Option<usize>,
    /// First `(degree, group element)` where `g Φ ≠ Φ g`.
    pub equivariance_failure: Option<(usize, usize)>,
    pub quasi_isomorphism: bool,
}

fn full_chain_complex(x: &GComplex, n: usize) -> ChainComplex {
    let c = x.chain_complex();
    let ranks: Vec<usize> = (0..=n).map(|d| c.rank(d)).collect();
    let b = (1..=n).map(|d| c.boundary(d)).collect();
    ChainComplex::new_unchecked(ranks, b).expect("shapes")
}

pub fn duality_map(pair: &BPair, od: &OrientationData) -> Result<DualityMap> {
    let gamma_u = od
        .gamma_u
        .as_ref()
        .ok_or_else(|| Error::Precondition("relative class not computed".into()))?;
    let (b, d, n) = (&pair.b, &pair.d, od.dimension);
    let c = full_chain_complex(b, n);
    let r_basis: Vec<Vec<usize>> = (0..=n)
        .map(|j| {
            (0..b.count(n - j))
                .filter(|&i| !d.contains(n - j, i))
                .collect()
        })
        .collect();
    // keeps the rows or columns of degree-p simplices outside D
    let restrict = |p: usize, m: &IntMatrix, rows: bool| -> IntMatrix {
        let all: Vec<usize> = (0..if rows { m.cols() } else { m.rows() }).collect();
        if rows {
            m.select(&r_basis[n - p], &all)
        } else {
            m.select(&all, &r_basis[n - p])
        }
    };
    // ∂^R_j = (-1)^{j-1} δ^{N-j} restricted to simplices outside D
    let r_boundaries: Vec<IntMatrix> = (1..=n)
        .map(|j| {
            let delta = c.boundary(n - j + 1).transpose();
            let m = restrict(n - j, &delta, false);
            let m = restrict(n - j + 1, &m, true);
            if j % 2 == 0 {
                m.neg()
            } else {
                m
            }
        })
        .collect();
    let r = ChainComplex::new(r_basis.iter().map(Vec::len).collect(), r_boundaries)?;
    let maps: Vec<IntMatrix> = (0..=n)
        .map(|j| {
            let cap = cap_matrix(b, n - j, n, gamma_u)?;
            let m = restrict(n - j, &cap, false);
            Ok(if j % 2 == 1 { m.neg() } else { m })
        })
        .collect::<Result<_>>()?;
    let phi = ChainMap::new(maps);
    let chain_map_failure = phi.check(&r, &c).err();
    let mut equivariance_failure = None;
    'outer: for j in 0..=n {
        for g in 0..b.group().order() {
            let pc = permutation(b, g, j, None);
            let pr = permutation(b, g, n - j, Some(&r_basis[j]));
            if pc.mul(&phi.maps()[j]) != phi.maps()[j].mul(&pr) {
                equivariance_failure = Some((j, g));
                break 'outer;
            }
        }
    }
    let quasi_isomorphism = chain_map_failure.is_none()
        && integral_homology(&ChainComplex::cone(&phi, &r, &c))
            .iter()
            .all(FgAbGroup::is_trivial);
    Ok(DualityMap {
        r,
        c,
        phi,
        r_basis,
        chain_map_failure,
        equivariance_failure,
        quasi_isomorphism,
    })
}

/// `g_#` in degree `d`, optionally restricted to an invariant set of simplices.
fn permutation(x: &GComplex, g: usize, d: usize, basis: Option<&[usize]>) -> IntMatrix {
    let all: Vec<usize>;
    let basis = match basis {
        Some(b) => b,
        None => {
            all = (0..x.count(d)).collect();
            &all
        }
    };
    let t = basis.iter().enumerate().map(|(k, &i)| {
        let (j, s) = x.act(g, d, i);
        let row = basis.binary_search(&j).expect("invariant basis");
        (row, k, Int::from(s as i64))
    });
    IntMatrix::from_triplets(basis.len(), basis.len(), t)
}

/// Orbit-level images of `Φ` and `R` under `M ⊗_{ZG} -` and `Hom_{ZG}(-, M)`,
/// as integer complexes (`M` applied afterwards).
#[derive(Clone, Debug)]
pub struct OrbitDuality {
    pub tensor_source: ChainComplex,
    pub tensor_target: ChainComplex,
    pub tensor_map: ChainMap,
    /// Chain complexes whose transposes are the two `Hom` cochain complexes,
    /// with the chain map whose transpose is `Hom_{ZG}(Φ, ℤ)`.
    pub hom_source: ChainComplex,
    pub hom_target: ChainComplex,
    pub hom_map: ChainMap,
}

pub fn orbit_duality(pair: &BPair, dm: &DualityMap, n: usize) -> Result<OrbitDuality> {
    let ob: Orbits = orbits(&pair.b, None)?;
    // R_j is spanned by the (N-j)-simplices outside D
    let obd: Orbits = orbits(&pair.b, Some(&pair.d))?;
    let r_collapse = |j: usize| -> IntMatrix {
        let all: Vec<usize> = (0..obd.reps[n - j].len()).collect();
        obd.collapse(n - j).select(&all, &dm.r_basis[j])
    };
    let r_reps = |j: usize| -> IntMatrix {
        let all: Vec<usize> = (0..obd.reps[n - j].len()).collect();
        obd.representatives(n - j).select(&dm.r_basis[j], &all)
    };
    let (r, c, phi) = (&dm.r, &dm.c, &dm.phi);
    // M ⊗_{ZG} -: push the image of each orbit generator to coinvariants
    let tensor_source = ChainComplex::new(
        (0..=n).map(|j| obd.reps[n - j].len()).collect(),
        (1..=n)
            .map(|j| r_collapse(j - 1).mul(&r.boundary(j)).mul(&r_reps(j)))
            .collect(),
    )?;
    let tensor_target = ChainComplex::new(
        (0..=n).map(|j| ob.reps[j].len()).collect(),
        (1..=n)
            .map(|j| {
                ob.collapse(j - 1)
                    .mul(&c.boundary(j))
                    .mul(&ob.representatives(j))
            })
            .collect(),
    )?;
    let tensor_map = ChainMap::new(
        (0..=n)
            .map(|j| ob.collapse(j).mul(&phi.maps()[j]).mul(&r_reps(j)))
            .collect(),
    );
    // Hom_{ZG}(-, ℤ): pull invariant cochains back and read them on representatives
    let hom_src_cob: Vec<IntMatrix> = (1..=n)
        .map(|j| {
            r_reps(j)
                .transpose()
                .mul(&r.boundary(j).transpose())
                .mul(&r_collapse(j - 1).transpose())
        })
        .collect();
    let hom_tgt_cob: Vec<IntMatrix> = (1..=n)
        .map(|j| {
            ob.representatives(j)
                .transpose()
                .mul(&c.boundary(j).transpose())
                .mul(&ob.collapse(j - 1).transpose())
        })
        .collect();
    let hom_phi: Vec<IntMatrix> = (0..=n)
        .map(|j| {
            r_reps(j)
                .transpose()
                .mul(&phi.maps()[j].transpose())
                .mul(&ob.collapse(j).transpose())
        })
        .collect();
    let hom_source = ChainComplex::new(
        tensor_source.ranks().to_vec(),
        hom_src_cob.iter().map(IntMatrix::transpose).collect(),
    )?;
    let hom_target = ChainComplex::new(
        tensor_target.ranks().to_vec(),
        hom_tgt_cob.iter().map(IntMatrix::transpose).collect(),
    )?;
    let hom_map = ChainMap::new(hom_phi.iter().map(IntMatrix::transpose).collect());
    Ok(OrbitDuality {
        tensor_source,
        tensor_target,
        tensor_map,
        hom_source,
        hom_target,
        hom_map,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub p: usize,
    /// `H^p_G(B; M)`.
    pub cohomology_b: FgAbGroup,
    /// `H^G_{N-p}(B, D; M)`.
    pub homology_b_d: FgAbGroup,
    /// `H^G_{N-p}(Y, Ubar; M)`.
    pub homology_y_ubar: FgAbGroup,
    /// `H^G_p(B; M)`.
    pub homology_b: FgAbGroup,
    /// `H_G^{N-p}(B, D; M)`.
    pub cohomology_b_d: FgAbGroup,
    /// `H_G^{N-p}(Y, Ubar; M)`.
    pub cohomology_y_ubar: FgAbGroup,
    pub duality: bool,
    pub excision: bool,
    pub dual_duality: bool,
    pub dual_excision: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientReport {
    pub coefficient: String,
    /// `M ⊗_{ZG} Φ` induces isomorphisms.
    pub tensor_route: bool,
    /// `Hom_{ZG}(Φ, M)` induces isomorphisms.
    pub hom_route: bool,
    pub rows: Vec<DegreeRow>,
}

impl CoefficientReport {
    pub fn holds(&self) -> bool {
        self.tensor_route
            && self.hom_route
            && self
                .rows
                .iter()
                .all(|r| r.duality && r.excision && r.dual_duality && r.dual_excision)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub dimension: usize,
    pub group_order: usize,
    pub ysd2_f_vector: Vec<usize>,
    pub b_f_vector: Vec<usize>,
    pub d_f_vector: Vec<usize>,
    pub chain_map: bool,
    pub equivariant: bool,
    pub quasi_isomorphism: bool,
    /// Offending degree for a failed chain-map check.
    pub chain_map_failure: Option<usize>,
    /// Offending degree and group element for a failed equivariance check.
    pub equivariance_failure: Option<(usize, usize)>,
    pub coefficients: Vec<CoefficientReport>,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.chain_map
            && self.equivariant
            && self.quasi_isomorphism
            && self.coefficients.iter().all(|c| c.holds())
    }
}

fn at(v: &[FgAbGroup], k: usize) -> FgAbGroup {
    v.get(k).cloned().unwrap_or_else(FgAbGroup::zero)
}

pub fn verify_lefschetz(
    y: &Arc<GComplex>,
    a: &Subcomplex,
    coeffs: &[TrivialModule],
) -> Result<DualityReport> {
    verify_lefschetz_capped(y, a, coeffs, DEFAULT_SIMPLEX_CAP)
}

pub fn verify_lefschetz_capped(
    y: &Arc<GComplex>,
    a: &Subcomplex,
    coeffs: &[TrivialModule],
    cap: usize,
) -> Result<DualityReport> {
    let nb = star_neighborhood_capped(y, a, cap)?;
    let od = orientation_cycle(&nb.ysd2)?;
    let pair = b_pair(&nb)?;
    let od = relative_class(&nb, &pair, &od)?;
    let n = od.dimension;
    let dm = duality_map(&pair, &od)?;
    let orb = orbit_duality(&pair, &dm, n)?;
    let tensor_cone = ChainComplex::cone(&orb.tensor_map, &orb.tensor_source, &orb.tensor_target);
    let hom_cone = ChainComplex::cone(&orb.hom_map, &orb.hom_source, &orb.hom_target);
    let tensor_ok = orb
        .tensor_map
        .check(&orb.tensor_source, &orb.tensor_target)
        .is_ok();
    let hom_ok = orb.hom_map.check(&orb.hom_source, &orb.hom_target).is_ok();
    let mut reports = Vec::new();
    for m in coeffs {
        let mg = &m.underlying;
        let co_b = bredon_cohomology(&pair.b, None, m)?;
        let h_bd = bredon_homology(&pair.b, Some(&pair.d), m)?;
        let h_yu = bredon_homology(&nb.ysd2, Some(&nb.ubar), m)?;
        let h_b = bredon_homology(&pair.b, None, m)?;
        let co_bd = bredon_cohomology(&pair.b, Some(&pair.d), m)?;
        let co_yu = bredon_cohomology(&nb.ysd2, Some(&nb.ubar), m)?;
        let rows = (0..=n)
            .map(|p| {
                let row = DegreeRow {
                    p,
                    cohomology_b: at(&co_b, p),
                    homology_b_d: at(&h_bd, n - p),
                    homology_y_ubar: at(&h_yu, n - p),
                    homology_b: at(&h_b, p),
                    cohomology_b_d: at(&co_bd, n - p),
                    cohomology_y_ubar: at(&co_yu, n - p),
                    duality: false,
                    excision: false,
                    dual_duality: false,
                    dual_excision: false,
                };
                DegreeRow {
                    duality: row.cohomology_b == row.homology_b_d,
                    excision: row.homology_b_d == row.homology_y_ubar,
                    dual_duality: row.homology_b == row.cohomology_b_d,
                    dual_excision: row.cohomology_b_d == row.cohomology_y_ubar,
                    ..row
                }
            })
            .collect();
        reports.push(CoefficientReport {
            coefficient: m.to_string(),
            tensor_route: tensor_ok && homology(&tensor_cone, mg).iter().all(FgAbGroup::is_trivial),
            hom_route: hom_ok && cohomology(&hom_cone, mg).iter().all(FgAbGroup::is_trivial),
            rows,
        });
    }
    Ok(DualityReport {
        dimension: n,
        group_order: y.group().order(),
        ysd2_f_vector: nb.ysd2.f_vector(),
        b_f_vector: pair.b.f_vector(),
        d_f_vector: pair.d.f_vector(),
        chain_map: dm.chain_map_failure.is_none(),
        equivariant: dm.equivariance_failure.is_none(),
        quasi_isomorphism: dm.quasi_isomorphism,
        chain_map_failure: dm.chain_map_failure,
        equivariance_failure: dm.equivariance_failure,
        coefficients: reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g_complex::{fixed_subcomplex, join};
    use crate::perm_group::{FiniteGroup, Perm, Subgroup};

    fn square(shift: &[u32]) -> GComplex {
        let e: Vec<Vec<u32>> = (0..4).map(|i| vec![i, (i + 1) % 4]).collect();
        let gens: Vec<Perm> = shift
            .iter()
            .map(|_| Perm::new(vec![2, 3, 0, 1]).unwrap())
            .collect();
        let group = if shift.is_empty() {
            FiniteGroup::trivial()
        } else {
            FiniteGroup::cyclic(2)
        };
        GComplex::from_facets(4, &e, group, &gens).unwrap()
    }

    fn coeffs() -> Vec<TrivialModule> {
        ["Z", "Z/2", "Z/4"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect()
    }

    #[test]
    fn orientation_cycles() {
        let tri = GComplex::trivial(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let od = orientation_cycle(&tri).unwrap();
        assert_eq!(
            od.gamma.iter().map(|x| x.abs()).collect::<Vec<_>>(),
            vec![Int::ONE; 3]
        );
        assert!(od.gamma[0] == Int::ONE);
        let sq = square(&[1]);
        assert_eq!(orientation_cycle(&sq).unwrap().gamma.len(), 4);
        let e: Vec<Vec<u32>> = (0..4).map(|i| vec![i, (i + 1) % 4]).collect();
        let reflection = GComplex::from_facets(
            4,
            &e,
            FiniteGroup::cyclic(2),
            &[Perm::new(vec![0, 3, 2, 1]).unwrap()],
        )
        .unwrap();
        assert!(matches!(
            orientation_cycle(&reflection),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn poincare_duality_on_a_circle() {
        let y = Arc::new(square(&[]));
        let a = Subcomplex::empty(&y);
        let r = verify_lefschetz(&y, &a, &coeffs()).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.coefficients[0].rows[0].cohomology_b, FgAbGroup::z());
    }

    #[test]
    fn free_antipodal_circle() {
        let y = Arc::new(square(&[1]));
        let a = Subcomplex::empty(&y);
        let r = verify_lefschetz(&y, &a, &coeffs()).unwrap();
        assert!(r.holds(), "{r:?}");
        let row0 = &r.coefficients[0].rows[0];
        assert_eq!(row0.cohomology_b, FgAbGroup::z());
        assert_eq!(row0.homology_b_d, FgAbGroup::z());
    }

    #[test]
    fn two_sphere_with_fixed_poles() {
        let poles =
            GComplex::from_facets(2, &[], FiniteGroup::cyclic(2), &[Perm::identity(2)]).unwrap();
        let y = Arc::new(join(&poles, &square(&[1])).unwrap());
        let a = fixed_subcomplex(&y, &Subgroup::whole(y.group())).unwrap();
        assert_eq!(a.vertices(), vec![0, 1]);
        let r = verify_lefschetz(&y, &a, &coeffs()).unwrap();
        assert!(r.holds(), "{r:?}");
        let nb = star_neighborhood_capped(&y, &a, DEFAULT_SIMPLEX_CAP).unwrap();
        let pair = b_pair(&nb).unwrap();
        let od = relative_class(&nb, &pair, &orientation_cycle(&nb.ysd2).unwrap()).unwrap();
        let bd = relative_complex(&pair.b, &pair.d).unwrap();
        assert_eq!(integral_homology(&bd)[2], FgAbGroup::z());
        assert!(od.gamma_u.is_some());
    }

    #[test]
    fn wrong_sign_convention_is_reported() {
        let y = Arc::new(square(&[1]));
        let nb = star_neighborhood_capped(&y, &Subcomplex::empty(&y), DEFAULT_SIMPLEX_CAP).unwrap();
        let pair = b_pair(&nb).unwrap();
        let od = relative_class(&nb, &pair, &orientation_cycle(&nb.ysd2).unwrap()).unwrap();
        let mut dm = duality_map(&pair, &od).unwrap();
        let flipped: Vec<IntMatrix> = dm
            .phi
            .maps()
            .iter()
            .enumerate()
            .map(|(j, m)| if j == 0 { m.neg() } else { m.clone() })
            .collect();
        dm.phi = ChainMap::new(flipped);
        assert_eq!(dm.phi.check(&dm.r, &dm.c), Err(1));
    }
}
