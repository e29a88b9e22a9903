//! Effective and primitive representatives, congruence, isotropy and conversions between
//! weighted, polynomial and calibrated descriptions.

use std::collections::BTreeMap;

use crate::cyclicity::{h_x, special_exponents, CycExponent};
use crate::error::{Error, Result};
use crate::galois_ring::{Elem, Scalar};
use crate::hypergraph::{
    CalibratedHypergraph, Calibration, ExpFn, Hyperedge, OrdinalMorphism, PolyHypergraph, WeightedHypergraph,
};

/// Largest l for permutation searches.
pub const MAX_PERMUTATION_L: usize = 6;

/// Every ϱ_X is nonzero and supported only on keys with supp w = X.
pub fn is_effective(hg: &CalibratedHypergraph) -> bool {
    hg.edges()
        .iter()
        .all(|(x, cal)| !cal.is_empty() && cal.keys().all(|w| w.support() == x.vertices()))
}

/// Splits σ_{(H,ϱ)} = a + σ_{(K,ς)} with (K,ς) effective.
///
/// φ_Z(u) collects ϱ_X(w) over all X ⊇ Z and keys with supp w = Z, w|_Z = u; supports with
/// φ_Z ≡ 0 are dropped and the empty support contributes the constant a.
pub fn effectivize(hg: &CalibratedHypergraph) -> (CalibratedHypergraph, Scalar) {
    let ring = hg.ring();
    let mut buckets: BTreeMap<Vec<usize>, Calibration> = BTreeMap::new();
    let mut constant: Scalar = 0;
    for cal in hg.edges().values() {
        for (w, &v) in cal {
            let supp = w.support();
            if supp.is_empty() {
                constant = ring.scalar_add(constant, ring.scalar_mul(v, ring.trace(Elem::ONE)));
                continue;
            }
            let slot = buckets.entry(supp).or_default();
            let e = slot.entry(w.clone()).or_insert(0);
            *e = ring.scalar_add(*e, v);
            if *e == 0 {
                slot.remove(w);
            }
        }
    }
    let mut out = CalibratedHypergraph::new(ring.clone(), hg.l());
    for (supp, cal) in buckets {
        if cal.is_empty() {
            continue;
        }
        let z = Hyperedge::new(supp).expect("nonempty support");
        for (w, v) in cal {
            out.add_value(&z, w, v).expect("support lies in [l]");
        }
    }
    (out, constant)
}

/// Support σH (union of edges) and index ιH = |σH|.
pub fn support_index(hg: &CalibratedHypergraph) -> (Vec<usize>, usize) {
    let mut seen = vec![false; hg.l()];
    for x in hg.edges().keys() {
        for &v in x.vertices() {
            seen[v] = true;
        }
    }
    let supp: Vec<usize> = (0..hg.l()).filter(|&v| seen[v]).collect();
    let n = supp.len();
    (supp, n)
}

pub fn is_primitive(hg: &CalibratedHypergraph) -> bool {
    support_index(hg).1 == hg.l()
}

/// The increasing injective chart z: [ιH] → [l] onto σH and the core with G_C z(core) = input.
pub fn primitive_core(hg: &CalibratedHypergraph) -> Result<(OrdinalMorphism, CalibratedHypergraph)> {
    if !is_effective(hg) {
        return Err(Error::NotEffective);
    }
    let (supp, _) = support_index(hg);
    let z = OrdinalMorphism::new(hg.l(), supp)?;
    let core = hg.pullback_injective(&z);
    Ok((z, core))
}

fn check_perm_size(l: usize) -> Result<()> {
    if l > MAX_PERMUTATION_L {
        return Err(Error::TooLarge(format!("permutation search over S({l})")));
    }
    Ok(())
}

/// The lexicographically least permutation f with G_C f(a) = b, if any.
pub fn congruent(a: &CalibratedHypergraph, b: &CalibratedHypergraph) -> Result<Option<OrdinalMorphism>> {
    if **a.ring() != **b.ring() {
        return Err(Error::RingMismatch);
    }
    if a.l() != b.l() {
        return Ok(None);
    }
    check_perm_size(a.l())?;
    if a.edges().len() != b.edges().len() || a.entry_count() != b.entry_count() {
        return Ok(None);
    }
    for f in OrdinalMorphism::permutations(a.l()) {
        if a.apply_morphism(&f)? == *b {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// All permutations fixing (H,ϱ), in lexicographic order.
pub fn isotropy_group(hg: &CalibratedHypergraph) -> Result<Vec<OrdinalMorphism>> {
    check_perm_size(hg.l())?;
    let mut out = Vec::new();
    for f in OrdinalMorphism::permutations(hg.l()) {
        if hg.apply_morphism(&f)? == *hg {
            out.push(f);
        }
    }
    Ok(out)
}

/// ϱ_X(w) = α_X δ_{w,w_X} with w_X(r) = q for r ∈ X.
pub fn weighted_to_calibrated(wh: &WeightedHypergraph) -> CalibratedHypergraph {
    let ring = wh.ring();
    let q_elem = special_exponents(ring).q_elem;
    let mut out = CalibratedHypergraph::new(ring.clone(), wh.l());
    for (x, &alpha) in wh.edges() {
        let w = ExpFn::new(ring, x.vertices().iter().map(|&r| (r, q_elem.clone())).collect());
        out.add_value(x, w, alpha).expect("edge already validated");
    }
    out
}

/// ϱ_X(w) = Σ_{a: h_δ∘a = w} τ_X(a), exponents in 0..=δ.
pub fn poly_to_calibrated(ph: &PolyHypergraph) -> Result<CalibratedHypergraph> {
    let ring = ph.ring();
    let delta = special_exponents(ring).delta;
    let mut out = CalibratedHypergraph::new(ring.clone(), ph.l());
    for (x, terms) in ph.edges() {
        out.add_edge(x.clone())?;
        for (key, &v) in terms {
            let mut pairs = Vec::with_capacity(key.len());
            for &(r, k) in key {
                if k > delta {
                    return Err(Error::ExponentOutOfRange { exp: k, delta });
                }
                let comps: Vec<(Elem, u32)> = ring.elements().map(|y| (y, h_x(ring, y, k as u64))).collect();
                pairs.push((r, CycExponent::from_pairs(ring, &comps)?));
            }
            out.add_value(x, ExpFn::new(ring, pairs), v)?;
        }
    }
    Ok(out)
}

/// Over F_2: (L,β) and a with |(H,ϱ)⟩ = ω^a |(L,β)⟩. Zero-weight edges are omitted.
pub fn qubit_to_weighted(hg: &CalibratedHypergraph) -> Result<(WeightedHypergraph, Scalar)> {
    let ring = hg.ring();
    if !(ring.is_prime_field() && ring.p() == 2) {
        return Err(Error::NotBinaryField);
    }
    let (k, a) = effectivize(hg);
    let u = CycExponent::single(ring, Elem::ZERO, 1)?;
    let mut out = WeightedHypergraph::new(ring.clone(), hg.l());
    for (z, cal) in k.edges() {
        let w = ExpFn::new(ring, z.vertices().iter().map(|&t| (t, u.clone())).collect());
        let beta = cal.get(&w).copied().unwrap_or(0);
        if beta != 0 {
            out.set_weight(z.clone(), beta)?;
        }
    }
    Ok((out, a))
}
