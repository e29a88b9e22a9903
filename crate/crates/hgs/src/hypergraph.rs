//! Hypergraphs on [l], calibrations, ordinal morphisms and their actions.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cyclicity::{exp_add, CycExponent};
use crate::error::{Error, Result};
use crate::galois_ring::{GaloisRing, Scalar};

/// A function f: [l] → [m].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrdinalMorphism {
    target: usize,
    values: Vec<usize>,
}

impl OrdinalMorphism {
    pub fn new(target: usize, values: Vec<usize>) -> Result<Self> {
        if let Some(&v) = values.iter().find(|&&v| v >= target) {
            return Err(Error::OutOfRange(format!("morphism value {v} not below {target}")));
        }
        Ok(OrdinalMorphism { target, values })
    }

    pub fn identity(l: usize) -> Self {
        OrdinalMorphism { target: l, values: (0..l).collect() }
    }

    pub fn source_size(&self) -> usize {
        self.values.len()
    }

    pub fn target_size(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, r: usize) -> usize {
        self.values[r]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target];
        self.values.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.target == self.values.len() && self.is_injective()
    }

    /// g ∘ self.
    pub fn then(&self, g: &OrdinalMorphism) -> Result<OrdinalMorphism> {
        if g.source_size() != self.target {
            return Err(Error::SizeMismatch { expected: self.target, got: g.source_size() });
        }
        Ok(OrdinalMorphism { target: g.target, values: self.values.iter().map(|&v| g.values[v]).collect() })
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Option<OrdinalMorphism> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.target];
        for (r, &v) in self.values.iter().enumerate() {
            inv[v] = r;
        }
        Some(OrdinalMorphism { target: self.values.len(), values: inv })
    }

    /// Block sum f ⌣ g : [l+l'] → [m+m'].
    pub fn block_sum(&self, g: &OrdinalMorphism) -> OrdinalMorphism {
        let mut values = self.values.clone();
        values.extend(g.values.iter().map(|&v| v + self.target));
        OrdinalMorphism { target: self.target + g.target, values }
    }

    /// All permutations of [l] in lexicographic order.
    pub fn permutations(l: usize) -> Permutations {
        Permutations { next: Some((0..l).collect()) }
    }

    /// All maps [l] → [m] in lexicographic order.
    pub fn all_maps(l: usize, m: usize) -> impl Iterator<Item = OrdinalMorphism> {
        let total = if l == 0 { 1 } else if m == 0 { 0 } else { m.pow(l as u32) };
        (0..total).map(move |mut code| {
            let mut values = vec![0; l];
            for r in (0..l).rev() {
                values[r] = code % m.max(1);
                code /= m.max(1);
            }
            OrdinalMorphism { target: m, values }
        })
    }
}

/// Lexicographic permutation iterator.
pub struct Permutations {
    next: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = OrdinalMorphism;

    fn next(&mut self) -> Option<OrdinalMorphism> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let n = succ.len();
        if n > 1 {
            if let Some(i) = (0..n - 1).rev().find(|&i| succ[i] < succ[i + 1]) {
                let j = (i + 1..n).rev().find(|&j| succ[j] > succ[i]).unwrap();
                succ.swap(i, j);
                succ[i + 1..].reverse();
                self.next = Some(succ);
            }
        }
        Some(OrdinalMorphism { target: n, values: cur })
    }
}

/// A nonempty sorted set of vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperedge(Vec<usize>);

impl Hyperedge {
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.is_empty() {
            return Err(Error::BadEdge("empty hyperedge".into()));
        }
        Ok(Hyperedge(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn image(&self, f: &OrdinalMorphism) -> Hyperedge {
        Hyperedge::new(self.0.iter().map(|&r| f.apply(r)).collect()).expect("image of nonempty set")
    }

    fn shifted(&self, by: usize) -> Hyperedge {
        Hyperedge(self.0.iter().map(|&v| v + by).collect())
    }
}

/// An exponent function w: X → Z; vertices with zero exponent are omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpFn(Vec<(usize, CycExponent)>);

impl ExpFn {
    pub fn zero() -> Self {
        ExpFn::default()
    }

    /// Builds from (vertex, exponent) pairs; repeated vertices are summed.
    pub fn new(ring: &GaloisRing, pairs: Vec<(usize, CycExponent)>) -> Self {
        let mut map: BTreeMap<usize, CycExponent> = BTreeMap::new();
        for (v, u) in pairs {
            let e = map.entry(v).or_default();
            *e = exp_add(ring, e, &u);
        }
        ExpFn(map.into_iter().filter(|(_, u)| !u.is_zero()).collect())
    }

    pub fn get(&self, v: usize) -> CycExponent {
        self.0
            .binary_search_by_key(&v, |(x, _)| *x)
            .map(|i| self.0[i].1.clone())
            .unwrap_or_default()
    }

    /// Vertices with nonzero exponent: supp w.
    pub fn support(&self) -> Vec<usize> {
        self.0.iter().map(|(v, _)| *v).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &CycExponent)> {
        self.0.iter().map(|(v, u)| (*v, u))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Relabels vertices by a map; caller guarantees injectivity on the support.
    fn relabel(&self, map: impl Fn(usize) -> usize) -> ExpFn {
        let mut v: Vec<_> = self.0.iter().map(|(r, u)| (map(*r), u.clone())).collect();
        v.sort();
        ExpFn(v)
    }
}

/// Sparse calibration ϱ_X: exponent functions → P; absent keys are zero.
pub type Calibration = BTreeMap<ExpFn, Scalar>;

/// f_⋆(w)(s) = Σ_{r∈X, f(r)=s} w(r).
pub fn exp_pushforward(ring: &GaloisRing, f: &OrdinalMorphism, x: &Hyperedge, w: &ExpFn) -> Result<ExpFn> {
    if w.iter().any(|(v, _)| !x.contains(v)) {
        return Err(Error::DomainMismatch);
    }
    Ok(ExpFn::new(ring, w.iter().map(|(r, u)| (f.apply(r), u.clone())).collect()))
}

fn add_value(ring: &GaloisRing, cal: &mut Calibration, key: ExpFn, value: Scalar) {
    let n = ring.characteristic();
    let entry = cal.entry(key.clone()).or_insert(0);
    *entry = (*entry + value % n) % n;
    if *entry == 0 {
        cal.remove(&key);
    }
}

/// A calibrated hypergraph (H, ϱ) on [l].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalibratedHypergraph {
    ring: Arc<GaloisRing>,
    l: usize,
    edges: BTreeMap<Hyperedge, Calibration>,
}

impl CalibratedHypergraph {
    /// The empty hypergraph on [l].
    pub fn new(ring: Arc<GaloisRing>, l: usize) -> Self {
        CalibratedHypergraph { ring, l, edges: BTreeMap::new() }
    }

    pub fn ring(&self) -> &Arc<GaloisRing> {
        &self.ring
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn edges(&self) -> &BTreeMap<Hyperedge, Calibration> {
        &self.edges
    }

    pub fn calibration(&self, x: &Hyperedge) -> Option<&Calibration> {
        self.edges.get(x)
    }

    fn check_edge(&self, x: &Hyperedge) -> Result<()> {
        match x.vertices().last() {
            Some(&v) if v >= self.l => Err(Error::BadEdge(format!("vertex {v} outside [{}]", self.l))),
            _ => Ok(()),
        }
    }

    /// Adds X to H with zero calibration if absent.
    pub fn add_edge(&mut self, x: Hyperedge) -> Result<()> {
        self.check_edge(&x)?;
        self.edges.entry(x).or_default();
        Ok(())
    }

    /// ϱ_X(w) += value, adding X to H if needed.
    pub fn add_value(&mut self, x: &Hyperedge, w: ExpFn, value: Scalar) -> Result<()> {
        self.check_edge(x)?;
        if w.iter().any(|(v, _)| !x.contains(v)) {
            return Err(Error::DomainMismatch);
        }
        let ring = self.ring.clone();
        let cal = self.edges.entry(x.clone()).or_default();
        add_value(&ring, cal, w, value);
        Ok(())
    }

    /// Convenience: ϱ_X(w) += value with w given as (vertex, dense exponent) pairs.
    pub fn add_dense(&mut self, vertices: &[usize], w: &[(usize, &[u32])], value: Scalar) -> Result<()> {
        let x = Hyperedge::new(vertices.to_vec())?;
        let pairs = w
            .iter()
            .map(|(v, dense)| Ok((*v, CycExponent::from_dense(&self.ring, dense)?)))
            .collect::<Result<Vec<_>>>()?;
        let w = ExpFn::new(&self.ring, pairs);
        self.add_value(&x, w, value)
    }

    /// G_C f(H,ϱ) = (Gf(H), f_{H*}(ϱ)).
    pub fn apply_morphism(&self, f: &OrdinalMorphism) -> Result<CalibratedHypergraph> {
        if f.source_size() != self.l {
            return Err(Error::SizeMismatch { expected: self.l, got: f.source_size() });
        }
        let mut out = CalibratedHypergraph::new(self.ring.clone(), f.target_size());
        for (x, cal) in &self.edges {
            let y = x.image(f);
            out.edges.entry(y.clone()).or_default();
            for (w, &v) in cal {
                let pushed = exp_pushforward(&self.ring, f, x, w)?;
                add_value(&self.ring, out.edges.get_mut(&y).unwrap(), pushed, v);
            }
        }
        Ok(out)
    }

    /// (H,ϱ) ⌣ (K,ς) on [l+m].
    pub fn monadic_product(&self, other: &CalibratedHypergraph) -> Result<CalibratedHypergraph> {
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch);
        }
        let mut out = self.clone();
        out.l = self.l + other.l;
        for (x, cal) in &other.edges {
            let shifted: Calibration = cal.iter().map(|(w, &v)| (w.relabel(|r| r + self.l), v)).collect();
            out.edges.insert(x.shifted(self.l), shifted);
        }
        Ok(out)
    }

    /// Pullback along an injective f whose image contains every vertex used by H.
    pub(crate) fn pullback_injective(&self, f: &OrdinalMorphism) -> CalibratedHypergraph {
        let mut inv = vec![usize::MAX; self.l];
        for (r, &v) in f.values().iter().enumerate() {
            inv[v] = r;
        }
        let mut out = CalibratedHypergraph::new(self.ring.clone(), f.source_size());
        for (x, cal) in &self.edges {
            let y = Hyperedge::new(x.vertices().iter().map(|&v| inv[v]).collect()).unwrap();
            let c: Calibration = cal.iter().map(|(w, &v)| (w.relabel(|r| inv[r]), v)).collect();
            out.edges.insert(y, c);
        }
        out
    }

    /// Total number of stored calibration entries.
    pub fn entry_count(&self) -> usize {
        self.edges.values().map(|c| c.len()).sum()
    }
}

/// A weighted hypergraph (H, α).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedHypergraph {
    ring: Arc<GaloisRing>,
    l: usize,
    edges: BTreeMap<Hyperedge, Scalar>,
}

impl WeightedHypergraph {
    pub fn new(ring: Arc<GaloisRing>, l: usize) -> Self {
        WeightedHypergraph { ring, l, edges: BTreeMap::new() }
    }

    pub fn ring(&self) -> &Arc<GaloisRing> {
        &self.ring
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn edges(&self) -> &BTreeMap<Hyperedge, Scalar> {
        &self.edges
    }

    /// Sets α_X (reduced mod p^r).
    pub fn set_weight(&mut self, x: Hyperedge, alpha: Scalar) -> Result<()> {
        if x.vertices().iter().any(|&v| v >= self.l) {
            return Err(Error::BadEdge(format!("edge {:?} outside [{}]", x.vertices(), self.l)));
        }
        self.edges.insert(x, alpha % self.ring.characteristic());
        Ok(())
    }
}

/// A marked hypergraph (H, r_·): each edge carries a target vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedHypergraph {
    ring: Arc<GaloisRing>,
    l: usize,
    edges: BTreeMap<Hyperedge, usize>,
}

impl MarkedHypergraph {
    pub fn new(ring: Arc<GaloisRing>, l: usize) -> Self {
        MarkedHypergraph { ring, l, edges: BTreeMap::new() }
    }

    pub fn ring(&self) -> &Arc<GaloisRing> {
        &self.ring
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn edges(&self) -> &BTreeMap<Hyperedge, usize> {
        &self.edges
    }

    pub fn add_edge(&mut self, x: Hyperedge, target: usize) -> Result<()> {
        if x.vertices().iter().any(|&v| v >= self.l) {
            return Err(Error::BadEdge(format!("edge {:?} outside [{}]", x.vertices(), self.l)));
        }
        if x.len() < 2 {
            return Err(Error::BadMark("marked hyperedges need at least two vertices".into()));
        }
        if !x.contains(target) {
            return Err(Error::BadMark(format!("target {target} not in edge")));
        }
        self.edges.insert(x, target);
        Ok(())
    }
}

/// Exponent assignment a: X → N for polynomial phases; zero exponents omitted.
pub type PolyKey = Vec<(usize, u32)>;

/// A hypergraph with polynomial phase data τ_X(a).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyHypergraph {
    ring: Arc<GaloisRing>,
    l: usize,
    edges: BTreeMap<Hyperedge, BTreeMap<PolyKey, Scalar>>,
}

impl PolyHypergraph {
    pub fn new(ring: Arc<GaloisRing>, l: usize) -> Self {
        PolyHypergraph { ring, l, edges: BTreeMap::new() }
    }

    pub fn ring(&self) -> &Arc<GaloisRing> {
        &self.ring
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn edges(&self) -> &BTreeMap<Hyperedge, BTreeMap<PolyKey, Scalar>> {
        &self.edges
    }

    /// τ_X(a) += value.
    pub fn add_term(&mut self, x: &Hyperedge, a: &[(usize, u32)], value: Scalar) -> Result<()> {
        if x.vertices().iter().any(|&v| v >= self.l) {
            return Err(Error::BadEdge(format!("edge {:?} outside [{}]", x.vertices(), self.l)));
        }
        let mut key: BTreeMap<usize, u32> = BTreeMap::new();
        for &(v, e) in a {
            if !x.contains(v) {
                return Err(Error::DomainMismatch);
            }
            let k = key.entry(v).or_insert(0);
            *k = k.checked_add(e).ok_or_else(|| Error::OutOfRange("exponent overflow".into()))?;
        }
        let key: PolyKey = key.into_iter().filter(|&(_, e)| e != 0).collect();
        let n = self.ring.characteristic();
        let terms = self.edges.entry(x.clone()).or_default();
        let entry = terms.entry(key.clone()).or_insert(0);
        *entry = (*entry + value % n) % n;
        if *entry == 0 {
            terms.remove(&key);
        }
        Ok(())
    }
}
