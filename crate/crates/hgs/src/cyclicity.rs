//! Cyclic monoids Z_x = H_{ι_x,π_x} and the cyclicity monoid Z = ⊕_x Z_x.

use crate::error::{Error, Result};
use crate::galois_ring::{Elem, GaloisRing};

/// The cyclic monoid of exponents of a single element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycMonoid {
    pub element: Elem,
    pub iota: u32,
    pub pi: u32,
}

impl CycMonoid {
    pub fn of(ring: &GaloisRing, x: Elem) -> Self {
        let (iota, pi) = ring.index_period(x);
        CycMonoid { element: x, iota, pi }
    }

    /// Number of elements ι + π.
    pub fn size(&self) -> u32 {
        self.iota + self.pi
    }
}

/// Index and period of x.
pub fn index_period(ring: &GaloisRing, x: Elem) -> (u32, u32) {
    ring.index_period(x)
}

/// Reduction h_x(u) of a natural exponent into Z_x.
pub fn h_x(ring: &GaloisRing, x: Elem, u: u64) -> u32 {
    let (iota, pi) = ring.index_period(x);
    let (iota, pi) = (iota as u64, pi as u64);
    if u < iota + pi {
        u as u32
    } else {
        (iota + (u - iota) % pi) as u32
    }
}

fn check_in(ring: &GaloisRing, x: Elem, u: u32) -> Result<()> {
    let (iota, pi) = ring.index_period(x);
    if u < iota + pi {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "exponent {u} not in Z_x of size {} for x = {}",
            iota + pi,
            ring.format_elem(x)
        )))
    }
}

/// u +_x v = h_x(u + v).
pub fn monoid_add(ring: &GaloisRing, x: Elem, u: u32, v: u32) -> Result<u32> {
    check_in(ring, x, u)?;
    check_in(ring, x, v)?;
    Ok(h_x(ring, x, u as u64 + v as u64))
}

/// The monomorphism Z_{x^k} → Z_x, u ↦ h_x(k u).
pub fn embed(ring: &GaloisRing, x: Elem, q_exp: u32, u: u32) -> Result<u32> {
    check_in(ring, ring.pow(x, q_exp as u64), u)?;
    Ok(h_x(ring, x, q_exp as u64 * u as u64))
}

/// A generalised exponent u = (u_x)_{x∈R}, stored sparsely by element index.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycExponent {
    comps: Vec<(Elem, u32)>,
}

impl CycExponent {
    pub fn zero() -> Self {
        CycExponent::default()
    }

    /// Builds an exponent from (element, value) pairs; duplicates are summed in Z_x.
    pub fn from_pairs(ring: &GaloisRing, pairs: &[(Elem, u32)]) -> Result<Self> {
        let mut u = CycExponent::zero();
        for &(x, v) in pairs {
            ring.check(x)?;
            check_in(ring, x, v)?;
            let cur = u.component(x);
            u.set(x, h_x(ring, x, cur as u64 + v as u64));
        }
        Ok(u)
    }

    /// Exponent with a single nonzero component.
    pub fn single(ring: &GaloisRing, x: Elem, v: u32) -> Result<Self> {
        Self::from_pairs(ring, &[(x, v)])
    }

    /// Dense form `(u_0, u_1, u_{x_0}, …)` in canonical element order.
    pub fn from_dense(ring: &GaloisRing, dense: &[u32]) -> Result<Self> {
        if dense.len() != ring.order() {
            return Err(Error::SizeMismatch { expected: ring.order(), got: dense.len() });
        }
        let mut u = CycExponent::zero();
        for (i, &v) in dense.iter().enumerate() {
            let x = Elem(i as u32);
            check_in(ring, x, v)?;
            u.set(x, v);
        }
        Ok(u)
    }

    pub fn to_dense(&self, ring: &GaloisRing) -> Vec<u32> {
        let mut out = vec![0; ring.order()];
        for &(x, v) in &self.comps {
            out[x.index()] = v;
        }
        out
    }

    pub fn component(&self, x: Elem) -> u32 {
        self.comps
            .binary_search_by_key(&x, |&(y, _)| y)
            .map(|i| self.comps[i].1)
            .unwrap_or(0)
    }

    fn set(&mut self, x: Elem, v: u32) {
        match self.comps.binary_search_by_key(&x, |&(y, _)| y) {
            Ok(i) if v == 0 => {
                self.comps.remove(i);
            }
            Ok(i) => self.comps[i].1 = v,
            Err(i) if v != 0 => self.comps.insert(i, (x, v)),
            Err(_) => {}
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Nonzero components in element order.
    pub fn iter(&self) -> impl Iterator<Item = (Elem, u32)> + '_ {
        self.comps.iter().copied()
    }
}

/// Componentwise sum in Z.
pub fn exp_add(ring: &GaloisRing, u: &CycExponent, v: &CycExponent) -> CycExponent {
    let mut out = u.clone();
    for (x, b) in v.iter() {
        let a = out.component(x);
        out.set(x, h_x(ring, x, a as u64 + b as u64));
    }
    out
}

/// x^u = x^{u_x}.
pub fn power(ring: &GaloisRing, x: Elem, u: &CycExponent) -> Elem {
    ring.pow(x, u.component(x) as u64)
}

/// The table y ↦ y^u over all ring elements.
pub fn power_map(ring: &GaloisRing, u: &CycExponent) -> Vec<Elem> {
    ring.elements().map(|x| power(ring, x, u)).collect()
}

/// The distinguished exponents s(y), s*, q and δ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialExponents {
    /// s(y) for each y in canonical order.
    pub s: Vec<CycExponent>,
    pub s_star: CycExponent,
    pub q_elem: CycExponent,
    /// max_x (ι_x + π_x).
    pub delta: u32,
}

pub fn special_exponents(ring: &GaloisRing) -> SpecialExponents {
    let s: Vec<CycExponent> = ring
        .elements()
        .map(|y| {
            if y == Elem::ONE {
                CycExponent::zero()
            } else {
                CycExponent { comps: vec![(y, 1)] }
            }
        })
        .collect();
    let s_star = s.iter().fold(CycExponent::zero(), |acc, u| exp_add(ring, &acc, u));
    let q_elem = CycExponent {
        comps: ring.elements().filter(|&x| x != Elem::ONE).map(|x| (x, 1)).collect(),
    };
    let delta = ring.elements().map(|x| CycMonoid::of(ring, x).size()).max().unwrap_or(1);
    SpecialExponents { s, s_star, q_elem, delta }
}

/// Σ_x (ι_x + π_x), the total size of the component monoids.
pub fn component_size_sum(ring: &GaloisRing) -> u64 {
    ring.elements().map(|x| CycMonoid::of(ring, x).size() as u64).sum()
}

/// |Z| = Π_x (ι_x + π_x) as a set; saturates at u128::MAX.
pub fn monoid_cardinality(ring: &GaloisRing) -> u128 {
    ring.elements()
        .map(|x| CycMonoid::of(ring, x).size() as u128)
        .fold(1u128, |a, b| a.saturating_mul(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois_ring::named_ring;

    #[test]
    fn universal_values() {
        for name in ["F2", "F3", "Z4", "GR(4,2)"] {
            let r = named_ring(name).unwrap();
            assert_eq!(index_period(&r, Elem::ZERO), (1, 1));
            assert_eq!(index_period(&r, Elem::ONE), (0, 1));
        }
    }

    #[test]
    fn z4_two() {
        let r = named_ring("Z4").unwrap();
        let two = r.from_scalar(2);
        assert_eq!(index_period(&r, two), (2, 1));
        assert_eq!(h_x(&r, two, 5), 2);
        assert_eq!(monoid_add(&r, two, 1, 1).unwrap(), 2);
        assert_eq!(embed(&r, two, 2, 1).unwrap(), 2);
        assert!(monoid_add(&r, two, 3, 0).is_err());
    }

    #[test]
    fn f4_theta() {
        let r = named_ring("F4").unwrap();
        let t = r.elem(&[0, 1]).unwrap();
        assert_eq!(index_period(&r, t), (0, 3));
        assert_eq!(h_x(&r, t, 7), 1);
        assert_eq!(monoid_add(&r, t, 2, 2).unwrap(), 1);
        assert_eq!(embed(&r, t, 2, 1).unwrap(), 2);
    }

    #[test]
    fn dense_round_trip() {
        let r = named_ring("F3").unwrap();
        let u = CycExponent::from_dense(&r, &[0, 0, 1]).unwrap();
        assert_eq!(u.to_dense(&r), vec![0, 0, 1]);
        assert_eq!(power(&r, Elem(2), &u), Elem(2));
        assert_eq!(power(&r, Elem(0), &u), Elem::ONE);
        assert_eq!(power(&r, Elem(1), &u), Elem::ONE);
        assert!(CycExponent::from_dense(&r, &[0, 1, 0]).is_err());
        assert!(CycExponent::from_dense(&r, &[2, 0, 0]).is_err());
    }

    #[test]
    fn specials() {
        let r = named_ring("F3").unwrap();
        let sp = special_exponents(&r);
        assert_eq!(sp.delta, 2);
        assert_eq!(sp.s_star, sp.q_elem);
        assert!(sp.s[1].is_zero());
        for x in r.elements() {
            assert_eq!(power(&r, x, &sp.s_star), x);
        }
        let f2 = named_ring("F2").unwrap();
        assert!(special_exponents(&f2).s[1].is_zero());
    }

    #[test]
    fn f4_s_theta_doubled() {
        let r = named_ring("F4").unwrap();
        let sp = special_exponents(&r);
        let t = r.elem(&[0, 1]).unwrap();
        let two = exp_add(&r, &sp.s[t.index()], &sp.s[t.index()]);
        assert_eq!(two.to_dense(&r), vec![0, 0, 2, 0]);
    }
}
