//! Simplicial cap product.
//!
//! For an ordered `n`-simplex `σ = [v_0, …, v_n]` and a `p`-cochain `c`,
//!
//! `c ∩ σ = c([v_{n-p}, …, v_n]) · [v_0, …, v_{n-p}]`
//!
//! (back `p`-face evaluated, front `(n-p)`-face kept). With this convention
//! `∂(c ∩ z) = c ∩ ∂z + (-1)^{n-p} (δc ∩ z)`.

use crate::algebra::IntMatrix;
use crate::error::{Error, Result};
use crate::g_complex::GComplex;
use crate::integer::Int;

/// The matrix of `c ↦ c ∩ z` from `C^p` to `C_{n-p}` for an `n`-chain `z`.
pub fn cap_matrix(x: &GComplex, p: usize, n: usize, z: &[Int]) -> Result<IntMatrix> {
    if p > n {
        return Err(Error::DimensionMismatch(format!(
            "cannot cap a {p}-cochain with a {n}-chain"
        )));
    }
    if z.len() != x.count(n) {
        return Err(Error::DimensionMismatch(format!(
            "{n}-chain has {} entries, expected {}",
            z.len(),
            x.count(n)
        )));
    }
    let k = n - p;
    let mut t = Vec::new();
    for (i, c) in z.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let s = x.simplices(n).get(i);
        let front = x.simplices(k).position(&s[..=k]).expect("front face");
        let back = x.simplices(p).position(&s[k..]).expect("back face");
        t.push((front, back, c.clone()));
    }
    Ok(IntMatrix::from_triplets(x.count(k), x.count(p), t))
}

/// `c ∩ z` for a `p`-cochain `c` and an `n`-chain `z`.
pub fn cap_product(x: &GComplex, p: usize, c: &[Int], n: usize, z: &[Int]) -> Result<Vec<Int>> {
    if c.len() != x.count(p) {
        return Err(Error::DimensionMismatch(format!(
            "{p}-cochain has {} entries, expected {}",
            c.len(),
            x.count(p)
        )));
    }
    Ok(cap_matrix(x, p, n, z)?.mul_vec(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm_group::FiniteGroup;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| Int::from(x)).collect()
    }

    fn boundary_of_simplex(d: u32) -> GComplex {
        let facets: Vec<Vec<u32>> = (0..=d)
            .map(|k| (0..=d).filter(|&v| v != k).collect())
            .collect();
        GComplex::trivial(d as usize + 1, &facets).unwrap()
    }

    #[test]
    fn degree_extremes() {
        let x = GComplex::trivial(3, &[vec![0, 1, 2]]).unwrap();
        let z = v(&[2, -1, 3]);
        let one = vec![Int::ONE; 3];
        assert_eq!(cap_product(&x, 0, &one, 1, &z).unwrap(), z);
        // p = n: the leading vertex weighted by c(σ)
        let tri = v(&[1]);
        assert_eq!(
            cap_product(&x, 2, &v(&[5]), 2, &tri).unwrap(),
            v(&[5, 0, 0])
        );
        assert!(cap_product(&x, 3, &[], 2, &tri).is_err());
    }

    #[test]
    fn circle_pairing() {
        let x = boundary_of_simplex(2);
        let c = x.chain_complex();
        // edges 01, 02, 12; fundamental cycle 01 - 02 + 12
        let gamma = v(&[1, -1, 1]);
        assert!(c.boundary(1).mul_vec(&gamma).iter().all(Int::is_zero));
        let dual = v(&[1, 0, 0]);
        let pt = cap_product(&x, 1, &dual, 1, &gamma).unwrap();
        let aug: Int = pt.iter().fold(Int::ZERO, |a, b| a + b.clone());
        assert_eq!(aug.abs(), Int::ONE);
    }

    proptest! {
        #[test]
        fn boundary_formula(
            p in 0usize..3,
            zs in proptest::collection::vec(-3i64..4, 10),
            cs in proptest::collection::vec(-3i64..4, 10),
        ) {
            let x = GComplex::from_facets(5, &[vec![0, 1, 2, 3, 4]], FiniteGroup::trivial(), &[]).unwrap();
            let ch = x.chain_complex();
            let n = 3;
            let z: Vec<Int> = (0..x.count(n)).map(|i| Int::from(zs[i % zs.len()] * (i as i64 % 3 - 1))).collect();
            let c: Vec<Int> = (0..x.count(p)).map(|i| Int::from(cs[i % cs.len()] + i as i64 % 2)).collect();
            let lhs = ch.boundary(n - p).mul_vec(&cap_product(&x, p, &c, n, &z).unwrap());
            let dz = ch.boundary(n).mul_vec(&z);
            let cdz = cap_product(&x, p, &c, n - 1, &dz).unwrap();
            let dc = ch.boundary(p + 1).transpose().mul_vec(&c);
            let dcz = cap_product(&x, p + 1, &dc, n, &z).unwrap();
            let sign = if (n - p) % 2 == 0 { Int::ONE } else { -Int::ONE };
            let rhs: Vec<Int> = cdz.iter().zip(&dcz).map(|(a, b)| a.clone() + sign.clone() * b.clone()).collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
