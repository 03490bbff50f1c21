use std::sync::Arc;

use equirep::algebra::{cohomology, homology, integral_homology};
use equirep::bredon::{
    bredon_cohomology, bredon_cohomology_via_dual, bredon_homology, TrivialModule,
};
use equirep::g_complex::{
    fixed_subcomplex, join, n_fold_join, quotient_complex, sd, star_neighborhood, GComplex,
    Subcomplex,
};
use equirep::lab::{boundary_sphere, linear_sphere, orbit_filtration, polygon};
use equirep::perm_group::all_subgroups;
use equirep::{FgAbGroup, FiniteGroup};
use proptest::prelude::*;

fn euler(x: &GComplex) -> i64 {
    x.f_vector()
        .iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

fn betti_euler(h: &[FgAbGroup]) -> i64 {
    h.iter()
        .enumerate()
        .map(|(d, g)| {
            if d % 2 == 0 {
                g.rank() as i64
            } else {
                -(g.rank() as i64)
            }
        })
        .sum()
}

#[test]
fn subdivision_preserves_homology() {
    let x = linear_sphere(3, &[1]).unwrap();
    let once = sd(&x).unwrap();
    let twice = sd(&once).unwrap();
    let h = integral_homology(&x.chain_complex());
    assert_eq!(integral_homology(&once.chain_complex()), h);
    assert_eq!(integral_homology(&twice.chain_complex()), h);
    assert_eq!(euler(&twice), 0);
}

#[test]
fn real_projective_plane_from_antipodal_s2() {
    let c2 = FiniteGroup::cyclic(2);
    let antipodal = GComplex::from_facets(
        2,
        &[vec![0], vec![1]],
        c2.clone(),
        &[equirep::Perm::new(vec![1, 0]).unwrap()],
    )
    .unwrap();
    let s2 = sd(&sd(&join(&polygon(&c2, 4, &[2]).unwrap(), &antipodal).unwrap()).unwrap()).unwrap();
    let q = quotient_complex(&s2, true).unwrap();
    let h = integral_homology(&q.complex.chain_complex());
    assert_eq!(h[0], FgAbGroup::z());
    assert_eq!(h[1], FgAbGroup::cyclic(2));
    assert!(h.get(2).map_or(true, FgAbGroup::is_trivial));
    let mod2 = homology(&q.complex.chain_complex(), &FgAbGroup::cyclic(2));
    assert_eq!(
        mod2.iter()
            .map(FgAbGroup::num_generators)
            .collect::<Vec<_>>(),
        vec![1, 1, 1]
    );
}

#[test]
fn cohomology_routes_agree_on_lens_space() {
    let x = Arc::new(sd(&sd(&linear_sphere(3, &[1, 1]).unwrap()).unwrap()).unwrap());
    for m in [
        TrivialModule::z(),
        TrivialModule::cyclic(3),
        TrivialModule::cyclic(2),
    ] {
        let direct = bredon_cohomology(&x, None, &m).unwrap();
        assert_eq!(direct, bredon_cohomology_via_dual(&x, None, &m).unwrap());
        let h = bredon_homology(&x, None, &m).unwrap();
        assert_eq!(h.len(), 4);
        assert_eq!(direct[3], h[0]);
    }
    let hz = bredon_homology(&x, None, &TrivialModule::z()).unwrap();
    assert_eq!(hz[1], FgAbGroup::cyclic(3));
}

#[test]
fn star_neighborhood_contains_the_subcomplex() {
    let x = Arc::new(linear_sphere(2, &[0, 1]).unwrap());
    let fixed = fixed_subcomplex(&x, &all_subgroups(x.group())[1]).unwrap();
    assert!(!fixed.is_empty());
    let nb = star_neighborhood(&x, &fixed).unwrap();
    assert!(nb.a.is_subset_of(&nb.ubar));
    assert!(nb
        .b
        .union(&nb.ubar)
        .unwrap()
        .same_simplices(&Subcomplex::full(&nb.ysd2)));
    assert!(nb.d.same_simplices(&nb.b.intersection(&nb.ubar).unwrap()));
    let trimmed = |mut h: Vec<FgAbGroup>| {
        while h.last().is_some_and(FgAbGroup::is_trivial) {
            h.pop();
        }
        h
    };
    assert_eq!(
        trimmed(integral_homology(&nb.ubar.chain_complex())),
        trimmed(integral_homology(&nb.a.chain_complex()))
    );
}

#[test]
fn fixed_sets_of_linear_spheres_are_spheres() {
    let x = Arc::new(linear_sphere(4, &[1, 2]).unwrap());
    for h in all_subgroups(x.group()) {
        let f = fixed_subcomplex(&x, &h).unwrap();
        if f.is_empty() {
            continue;
        }
        let hom = integral_homology(&f.chain_complex());
        let top = f.dim() as usize;
        assert_eq!(betti_euler(&hom), if top % 2 == 0 { 2 } else { 0 });
        assert_eq!(hom[top], FgAbGroup::z());
    }
    assert!(orbit_filtration(&x).unwrap().identities_hold());
}

#[test]
fn empty_subcomplex_is_neutral() {
    let x = Arc::new(polygon(&FiniteGroup::cyclic(2), 6, &[3]).unwrap());
    let e = Subcomplex::empty(&x);
    let m = TrivialModule::cyclic(2);
    assert_eq!(
        bredon_homology(&x, Some(&e), &m).unwrap(),
        bredon_homology(&x, None, &m).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn join_euler_characteristic(p in 0usize..3, q in 0usize..3, n in 1usize..3) {
        let t = FiniteGroup::trivial();
        let x = boundary_sphere(&t, p).unwrap();
        let y = boundary_sphere(&t, q).unwrap();
        let j = join(&x, &y).unwrap();
        // reduced Euler characteristics multiply up to sign
        let rx = euler(&x) - 1;
        let ry = euler(&y) - 1;
        prop_assert_eq!(euler(&j) - 1, -rx * ry);
        let jn = n_fold_join(&x, n).unwrap();
        prop_assert_eq!(betti_euler(&integral_homology(&jn.chain_complex())), euler(&jn));
    }

    #[test]
    fn universal_coefficients_on_polygons(v in 3usize..9, m in 2i64..7) {
        let x = polygon(&FiniteGroup::trivial(), v, &[]).unwrap();
        let c = x.chain_complex();
        let h = homology(&c, &FgAbGroup::cyclic(m));
        let hc = cohomology(&c, &FgAbGroup::cyclic(m));
        prop_assert_eq!(h.clone(), hc);
        prop_assert_eq!(h[1].clone(), FgAbGroup::cyclic(m));
    }
}
