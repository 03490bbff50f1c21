//! Finitely generated abelian groups in invariant-factor form, and
//! homomorphisms between them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dense::DenseMatrix;
use super::lattice::{Lattice, Subquotient};
use crate::error::{Error, Result};
use crate::integer::Int;

/// `ℤ^rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with `1 < d₁ | d₂ | … | d_k`.
///
/// Canonical generators are ordered torsion first (in chain order), then the
/// free summands; elements are coordinate vectors in that order with torsion
/// coordinates reduced into `[0, d_i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<Int>,
}

impl FgAbGroup {
    /// Normalizes arbitrary positive orders into a divisibility chain;
    /// entries equal to 1 are dropped.
    pub fn new(rank: usize, orders: Vec<Int>) -> FgAbGroup {
        let mut t: Vec<Int> = orders
            .into_iter()
            .map(|x| x.abs())
            .filter(|x| !x.is_one())
            .collect();
        assert!(
            t.iter().all(|x| !x.is_zero()),
            "torsion orders must be nonzero"
        );
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                let g = t[i].gcd(&t[j]);
                let l = t[i].lcm(&t[j]);
                t[i] = g;
                t[j] = l;
            }
        }
        t.retain(|x| !x.is_one());
        FgAbGroup { rank, torsion: t }
    }

    /// Direct sum of cyclic groups of the given orders (`0` meaning `ℤ`).
    pub fn from_cyclic_orders(orders: &[Int]) -> FgAbGroup {
        let rank = orders.iter().filter(|x| x.is_zero()).count();
        FgAbGroup::new(
            rank,
            orders.iter().filter(|x| !x.is_zero()).cloned().collect(),
        )
    }

    pub fn zero() -> FgAbGroup {
        FgAbGroup::default()
    }

    pub fn z() -> FgAbGroup {
        FgAbGroup {
            rank: 1,
            torsion: vec![],
        }
    }

    /// `ℤ/n`, with `n = 0` giving `ℤ`.
    pub fn cyclic(n: i64) -> FgAbGroup {
        FgAbGroup::from_cyclic_orders(&[Int::from(n)])
    }

    pub fn free(rank: usize) -> FgAbGroup {
        FgAbGroup {
            rank,
            torsion: vec![],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[Int] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn order(&self) -> Option<Int> {
        self.is_finite()
            .then(|| self.torsion.iter().cloned().product())
    }

    pub fn num_generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Orders of the canonical generators (`0` for free ones).
    pub fn generator_orders(&self) -> Vec<Int> {
        let mut o = self.torsion.clone();
        o.extend(std::iter::repeat_n(Int::ZERO, self.rank));
        o
    }

    /// Reduces a coordinate vector into canonical range.
    pub fn reduce(&self, x: &mut [Int]) {
        for (xi, d) in x.iter_mut().zip(&self.torsion) {
            *xi = xi.rem_euclid(d);
        }
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut t = self.torsion.clone();
        t.extend(other.torsion.iter().cloned());
        FgAbGroup::new(self.rank + other.rank, t)
    }

    fn pairwise(&self, other: &FgAbGroup, f: impl Fn(&Int, &Int) -> Int) -> FgAbGroup {
        let orders: Vec<Int> = self
            .generator_orders()
            .iter()
            .flat_map(|a| {
                other
                    .generator_orders()
                    .into_iter()
                    .map(move |b| (a.clone(), b))
            })
            .map(|(a, b)| f(&a, &b))
            .collect();
        FgAbGroup::from_cyclic_orders(&orders)
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &FgAbGroup) -> FgAbGroup {
        // ℤ/a ⊗ ℤ/b = ℤ/gcd(a,b), with ℤ = ℤ/0
        self.pairwise(other, |a, b| a.gcd(b))
    }

    /// `Tor(self, other)`.
    pub fn tor(&self, other: &FgAbGroup) -> FgAbGroup {
        self.pairwise(other, |a, b| {
            if a.is_zero() || b.is_zero() {
                Int::ONE
            } else {
                a.gcd(b)
            }
        })
    }

    /// `Hom(self, other)`.
    pub fn hom(&self, other: &FgAbGroup) -> FgAbGroup {
        self.pairwise(other, |a, b| match (a.is_zero(), b.is_zero()) {
            (true, _) => b.clone(),
            (false, true) => Int::ONE,
            (false, false) => a.gcd(b),
        })
    }

    /// `Ext(self, other)`.
    pub fn ext(&self, other: &FgAbGroup) -> FgAbGroup {
        self.pairwise(other, |a, b| match (a.is_zero(), b.is_zero()) {
            (true, _) => Int::ONE,
            (false, true) => a.clone(),
            (false, false) => a.gcd(b),
        })
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for FgAbGroup {
    type Err = Error;

    /// Parses sums such as `"Z"`, `"Z/4"`, `"Z^2 + Z/2"`, `"0"`.
    fn from_str(s: &str) -> Result<FgAbGroup> {
        let bad = || Error::Scene(format!("cannot parse abelian group {s:?}"));
        let mut orders = Vec::new();
        for part in s.split('+') {
            let p = part.trim();
            if p == "0" {
                continue;
            }
            if let Some(rest) = p.strip_prefix("Z/") {
                let n: Int = rest.trim().parse().map_err(|_| bad())?;
                if n.is_zero() || n.is_negative() {
                    return Err(bad());
                }
                orders.push(n);
            } else if let Some(rest) = p.strip_prefix("Z^") {
                let r: usize = rest.trim().parse().map_err(|_| bad())?;
                orders.extend(std::iter::repeat_n(Int::ZERO, r));
            } else if p == "Z" {
                orders.push(Int::ZERO);
            } else {
                return Err(bad());
            }
        }
        Ok(FgAbGroup::from_cyclic_orders(&orders))
    }
}

impl Serialize for FgAbGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FgAbGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A homomorphism between groups in canonical form; `matrix` has one column
/// per source generator, reduced modulo the target's torsion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbMap {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: DenseMatrix,
}

impl AbMap {
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: DenseMatrix) -> Result<AbMap> {
        if matrix.rows() != target.num_generators() || matrix.cols() != source.num_generators() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source,
                target
            )));
        }
        let mut m = matrix;
        let t_orders = target.generator_orders();
        for i in 0..m.rows() {
            if !t_orders[i].is_zero() {
                for j in 0..m.cols() {
                    let v = m.get(i, j).rem_euclid(&t_orders[i]);
                    m.set(i, j, v);
                }
            }
        }
        // a generator of order d must land on an element killed by d
        for (j, d) in source.generator_orders().iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            for (i, t) in t_orders.iter().enumerate() {
                let v = m.get(i, j) * d;
                let ok = if t.is_zero() {
                    v.is_zero()
                } else {
                    v.is_divisible_by(t)
                };
                if !ok {
                    return Err(Error::Precondition(format!(
                        "map {source} -> {target} is not well defined"
                    )));
                }
            }
        }
        Ok(AbMap {
            source,
            target,
            matrix: m,
        })
    }

    pub fn identity(g: &FgAbGroup) -> AbMap {
        AbMap {
            source: g.clone(),
            target: g.clone(),
            matrix: DenseMatrix::identity(g.num_generators()),
        }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> AbMap {
        AbMap {
            source: source.clone(),
            target: target.clone(),
            matrix: DenseMatrix::zeros(target.num_generators(), source.num_generators()),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        let mut y = self.matrix.mul_vec(x);
        self.target.reduce(&mut y);
        y
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AbMap) -> Result<AbMap> {
        if other.target != self.source {
            return Err(Error::DimensionMismatch(
                "composition of incompatible maps".into(),
            ));
        }
        AbMap::new(
            other.source.clone(),
            self.target.clone(),
            self.matrix.mul(&other.matrix),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    fn torsion_relations(g: &FgAbGroup) -> Vec<Vec<Int>> {
        let n = g.num_generators();
        g.torsion()
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut v = vec![Int::ZERO; n];
                v[i] = d.clone();
                v
            })
            .collect()
    }

    pub fn kernel(&self) -> Subquotient {
        let s = self.source.num_generators();
        let t_rel = Self::torsion_relations(&self.target);
        let block = self.matrix.hstack(&DenseMatrix::from_columns(
            self.target.num_generators(),
            &t_rel,
        ));
        let k = Lattice::kernel(&block);
        let gens: Vec<Vec<Int>> = k.basis().into_iter().map(|b| b[..s].to_vec()).collect();
        Subquotient::new(
            Lattice::span(s, &gens),
            &Self::torsion_relations(&self.source),
        )
        .expect("source relations lie in the kernel of a well-defined map")
    }

    pub fn cokernel(&self) -> Subquotient {
        let m = self.target.num_generators();
        let mut rel = Self::torsion_relations(&self.target);
        rel.extend((0..self.matrix.cols()).map(|j| self.matrix.column(j)));
        Subquotient::new(Lattice::whole(m), &rel).expect("whole lattice")
    }

    pub fn image(&self) -> Subquotient {
        let m = self.target.num_generators();
        let rel = Self::torsion_relations(&self.target);
        let mut gens = rel.clone();
        gens.extend((0..self.matrix.cols()).map(|j| self.matrix.column(j)));
        Subquotient::new(Lattice::span(m, &gens), &rel).expect("relations lie in the span")
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().group().is_trivial()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        let a = FgAbGroup::new(1, vec![Int::from(6), Int::from(4)]);
        assert_eq!(a.torsion(), &[Int::from(2), Int::from(12)]);
        assert_eq!(a.to_string(), "Z + Z/2 + Z/12");
        assert_eq!(
            FgAbGroup::new(0, vec![Int::from(2), Int::from(3)]),
            FgAbGroup::cyclic(6)
        );
        assert_eq!(FgAbGroup::zero().to_string(), "0");
        assert_eq!(g("Z^2 + Z/2"), FgAbGroup::new(2, vec![Int::from(2)]));
        assert_eq!(g("Z/2 + Z/3"), g("Z/6"));
        assert_eq!(g("0"), FgAbGroup::zero());
        assert!("Q".parse::<FgAbGroup>().is_err());
        assert_eq!(serde_json::to_string(&g("Z + Z/2")).unwrap(), "\"Z + Z/2\"");
    }

    #[test]
    fn functors_on_cyclics() {
        assert_eq!(g("Z/4").tensor(&g("Z/6")), g("Z/2"));
        assert_eq!(g("Z").tensor(&g("Z/3")), g("Z/3"));
        assert_eq!(g("Z/4").tor(&g("Z/6")), g("Z/2"));
        assert_eq!(g("Z").tor(&g("Z/6")), g("0"));
        assert_eq!(g("Z/4").hom(&g("Z")), g("0"));
        assert_eq!(g("Z").hom(&g("Z/5")), g("Z/5"));
        assert_eq!(g("Z/4").ext(&g("Z")), g("Z/4"));
        assert_eq!(g("Z").ext(&g("Z/4")), g("0"));
    }

    #[test]
    fn maps() {
        let z = g("Z");
        let z2 = g("Z/2");
        let two = AbMap::new(z.clone(), z.clone(), DenseMatrix::from_i64(&[&[2]])).unwrap();
        assert_eq!(two.kernel().group(), &g("0"));
        assert_eq!(two.cokernel().group(), &z2);
        assert!(!two.is_iso());
        let red = AbMap::new(z.clone(), z2.clone(), DenseMatrix::from_i64(&[&[3]])).unwrap();
        assert_eq!(red.matrix().get(0, 0), &Int::ONE);
        assert_eq!(red.kernel().group(), &z);
        assert!(red.is_surjective());
        assert!(AbMap::new(z2.clone(), z.clone(), DenseMatrix::from_i64(&[&[1]])).is_err());
        let z4 = g("Z/4");
        let inc = AbMap::new(z2.clone(), z4.clone(), DenseMatrix::from_i64(&[&[2]])).unwrap();
        assert!(inc.is_injective());
        assert_eq!(inc.cokernel().group(), &z2);
        assert_eq!(inc.image().group(), &z2);
        let three = AbMap::new(z4.clone(), z4.clone(), DenseMatrix::from_i64(&[&[3]])).unwrap();
        assert!(three.is_iso());
        assert_eq!(three.compose(&three).unwrap(), AbMap::identity(&z4));
    }

    fn arb_group() -> impl Strategy<Value = FgAbGroup> {
        (0usize..3, proptest::collection::vec(1i64..13, 0..3))
            .prop_map(|(r, t)| FgAbGroup::new(r, t.into_iter().map(Int::from).collect()))
    }

    proptest! {
        #[test]
        fn canonical_is_idempotent(a in arb_group(), b in arb_group()) {
            let s = a.direct_sum(&b);
            prop_assert_eq!(FgAbGroup::from_cyclic_orders(&s.generator_orders()), s.clone());
            prop_assert_eq!(s.to_string().parse::<FgAbGroup>().unwrap(), s);
            // |A ⊗ B| · |Tor(A,B)|⁻¹ symmetry
            prop_assert_eq!(a.tensor(&b), b.tensor(&a));
            prop_assert_eq!(a.tor(&b), b.tor(&a));
        }

        #[test]
        fn rank_nullity(a in arb_group(), b in arb_group(), seed in proptest::collection::vec(-5i64..6, 25)) {
            let m = DenseMatrix::from_rows(
                &(0..b.num_generators()).map(|i| (0..a.num_generators()).map(|j| Int::from(seed[i * 5 + j])).collect()).collect::<Vec<_>>(),
                a.num_generators(),
            );
            if let Ok(f) = AbMap::new(a.clone(), b.clone(), m) {
                let k = f.kernel();
                let i = f.image();
                let c = f.cokernel();
                prop_assert_eq!(k.group().rank() + i.group().rank(), a.rank());
                prop_assert_eq!(i.group().rank() + c.group().rank(), b.rank());
                if a.is_finite() {
                    let (ok, oi) = (k.group().order().unwrap(), i.group().order().unwrap());
                    prop_assert_eq!(ok * oi, a.order().unwrap());
                }
                for gen in k.generators() {
                    prop_assert!(f.apply(gen).iter().all(Int::is_zero));
                }
            }
        }
    }
}
