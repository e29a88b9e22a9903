//! JSON reading and writing of rings and hypergraphs, and plain-text state output.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclicity::CycExponent;
use crate::error::{Error, Result};
use crate::galois_ring::{make_ring, named_ring, standard_ring, Elem, GaloisRing, Scalar};
use crate::hypergraph::{CalibratedHypergraph, ExpFn, Hyperedge, MarkedHypergraph, PolyHypergraph, WeightedHypergraph};
use crate::qudit_space::{config_at, FlatState};

/// Largest number of qudits accepted from input files.
pub const MAX_INPUT_L: usize = 64;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalEntryJson {
    /// vertex → dense exponent in canonical element order
    pub w: BTreeMap<String, Vec<u32>>,
    pub value: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalEdgeJson {
    pub vertices: Vec<usize>,
    #[serde(default)]
    pub calibration: Vec<CalEntryJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedEdgeJson {
    pub vertices: Vec<usize>,
    pub weight: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedEdgeJson {
    pub vertices: Vec<usize>,
    pub target: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTermJson {
    /// vertex → ordinary exponent
    pub a: BTreeMap<String, u32>,
    pub value: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyEdgeJson {
    pub vertices: Vec<usize>,
    #[serde(default)]
    pub terms: Vec<PolyTermJson>,
}

/// Any of the four hypergraph file formats, tagged by `kind`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum HypergraphJson {
    Calibrated { ring: RingJson, l: usize, edges: Vec<CalEdgeJson> },
    Weighted { ring: RingJson, l: usize, edges: Vec<WeightedEdgeJson> },
    Marked {
        ring: RingJson,
        l: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        xstar: Option<u32>,
        edges: Vec<MarkedEdgeJson>,
    },
    Poly { ring: RingJson, l: usize, edges: Vec<PolyEdgeJson> },
}

/// A parsed hypergraph of any kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyHypergraph {
    Calibrated(CalibratedHypergraph),
    Weighted(WeightedHypergraph),
    /// With the marked value x* (defaults to p − 1).
    Marked(MarkedHypergraph, Elem),
    Poly(PolyHypergraph),
}

impl AnyHypergraph {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyHypergraph::Calibrated(_) => "calibrated",
            AnyHypergraph::Weighted(_) => "weighted",
            AnyHypergraph::Marked(..) => "marked",
            AnyHypergraph::Poly(_) => "poly",
        }
    }

    pub fn ring(&self) -> &Arc<GaloisRing> {
        match self {
            AnyHypergraph::Calibrated(h) => h.ring(),
            AnyHypergraph::Weighted(h) => h.ring(),
            AnyHypergraph::Marked(h, _) => h.ring(),
            AnyHypergraph::Poly(h) => h.ring(),
        }
    }

    pub fn l(&self) -> usize {
        match self {
            AnyHypergraph::Calibrated(h) => h.l(),
            AnyHypergraph::Weighted(h) => h.l(),
            AnyHypergraph::Marked(h, _) => h.l(),
            AnyHypergraph::Poly(h) => h.l(),
        }
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn ring_from_json(j: &RingJson) -> Result<Arc<GaloisRing>> {
    if let Some(name) = &j.name {
        if j.p.is_some() || j.r.is_some() || j.d.is_some() || j.modulus.is_some() {
            return Err(Error::Parse("give either a ring name or parameters, not both".into()));
        }
        return named_ring(name).ok_or_else(|| Error::Parse(format!("unknown ring name {name:?}")));
    }
    let p = j.p.ok_or_else(|| Error::Parse("ring needs a name or p".into()))?;
    let r = j.r.unwrap_or(1);
    match &j.modulus {
        Some(m) => {
            let d = m.len().checked_sub(1).ok_or_else(|| Error::Parse("empty modulus".into()))?;
            if j.d.is_some_and(|jd| jd != d) {
                return Err(Error::Parse(format!("d does not match modulus of degree {d}")));
            }
            make_ring(p, r, d, m)
        }
        None => standard_ring(p, r, j.d.unwrap_or(1)),
    }
}

pub fn ring_to_json(ring: &GaloisRing) -> RingJson {
    RingJson { name: None, p: Some(ring.p()), r: Some(ring.r()), d: Some(ring.d()), modulus: Some(ring.modulus().to_vec()) }
}

pub fn parse_ring(text: &str) -> Result<Arc<GaloisRing>> {
    ring_from_json(&serde_json::from_str(text).map_err(parse_err)?)
}

fn check_l(l: usize) -> Result<()> {
    if l > MAX_INPUT_L {
        return Err(Error::TooLarge(format!("l = {l} exceeds {MAX_INPUT_L}")));
    }
    Ok(())
}

fn scalar(ring: &GaloisRing, v: u64) -> Result<Scalar> {
    let n = ring.characteristic();
    if v >= n as u64 {
        return Err(Error::BadCoefficient { value: v, bound: n });
    }
    Ok(v as Scalar)
}

fn vertex(key: &str) -> Result<usize> {
    key.parse::<usize>().map_err(|_| Error::Parse(format!("vertex key {key:?} is not an integer")))
}

fn edge(vertices: &[usize], l: usize) -> Result<Hyperedge> {
    if let Some(&v) = vertices.iter().find(|&&v| v >= l) {
        return Err(Error::BadEdge(format!("vertex {v} outside [{l}]")));
    }
    Hyperedge::new(vertices.to_vec())
}

fn distinct_edges<'a>(edges: impl Iterator<Item = &'a Hyperedge>) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for x in edges {
        if !seen.insert(x.clone()) {
            return Err(Error::BadEdge(format!("hyperedge {:?} listed twice", x.vertices())));
        }
    }
    Ok(())
}

pub fn from_json(j: &HypergraphJson) -> Result<AnyHypergraph> {
    match j {
        HypergraphJson::Calibrated { ring, l, edges } => {
            check_l(*l)?;
            let ring = ring_from_json(ring)?;
            let mut hg = CalibratedHypergraph::new(ring.clone(), *l);
            let xs = edges.iter().map(|e| edge(&e.vertices, *l)).collect::<Result<Vec<_>>>()?;
            distinct_edges(xs.iter())?;
            for (x, e) in xs.iter().zip(edges) {
                hg.add_edge(x.clone())?;
                for entry in &e.calibration {
                    let mut pairs = Vec::with_capacity(entry.w.len());
                    for (k, dense) in &entry.w {
                        pairs.push((vertex(k)?, CycExponent::from_dense(&ring, dense)?));
                    }
                    hg.add_value(x, ExpFn::new(&ring, pairs), scalar(&ring, entry.value)?)?;
                }
            }
            Ok(AnyHypergraph::Calibrated(hg))
        }
        HypergraphJson::Weighted { ring, l, edges } => {
            check_l(*l)?;
            let ring = ring_from_json(ring)?;
            let mut wh = WeightedHypergraph::new(ring.clone(), *l);
            let xs = edges.iter().map(|e| edge(&e.vertices, *l)).collect::<Result<Vec<_>>>()?;
            distinct_edges(xs.iter())?;
            for (x, e) in xs.into_iter().zip(edges) {
                wh.set_weight(x, scalar(&ring, e.weight)?)?;
            }
            Ok(AnyHypergraph::Weighted(wh))
        }
        HypergraphJson::Marked { ring, l, xstar, edges } => {
            check_l(*l)?;
            let ring = ring_from_json(ring)?;
            if !ring.is_prime_field() {
                return Err(Error::NotPrimeField);
            }
            let xstar = match xstar {
                Some(v) if (*v as usize) < ring.order() => Elem(*v),
                Some(v) => return Err(Error::BadMark(format!("marked value {v} outside the field"))),
                None => ring.neg(Elem::ONE),
            };
            let mut mh = MarkedHypergraph::new(ring, *l);
            let xs = edges.iter().map(|e| edge(&e.vertices, *l)).collect::<Result<Vec<_>>>()?;
            distinct_edges(xs.iter())?;
            for (x, e) in xs.into_iter().zip(edges) {
                mh.add_edge(x, e.target)?;
            }
            Ok(AnyHypergraph::Marked(mh, xstar))
        }
        HypergraphJson::Poly { ring, l, edges } => {
            check_l(*l)?;
            let ring = ring_from_json(ring)?;
            let mut ph = PolyHypergraph::new(ring.clone(), *l);
            let xs = edges.iter().map(|e| edge(&e.vertices, *l)).collect::<Result<Vec<_>>>()?;
            distinct_edges(xs.iter())?;
            for (x, e) in xs.iter().zip(edges) {
                for t in &e.terms {
                    let a = t.a.iter().map(|(k, &v)| Ok((vertex(k)?, v))).collect::<Result<Vec<_>>>()?;
                    ph.add_term(x, &a, scalar(&ring, t.value)?)?;
                }
            }
            Ok(AnyHypergraph::Poly(ph))
        }
    }
}

pub fn parse_hypergraph(text: &str) -> Result<AnyHypergraph> {
    from_json(&serde_json::from_str(text).map_err(parse_err)?)
}

fn expect_kind(text: &str, kind: &'static str) -> Result<AnyHypergraph> {
    let hg = parse_hypergraph(text)?;
    if hg.kind() != kind {
        return Err(Error::Parse(format!("expected kind {kind:?}, found {:?}", hg.kind())));
    }
    Ok(hg)
}

pub fn parse_calibrated(text: &str) -> Result<CalibratedHypergraph> {
    match expect_kind(text, "calibrated")? {
        AnyHypergraph::Calibrated(h) => Ok(h),
        _ => unreachable!(),
    }
}

pub fn parse_weighted(text: &str) -> Result<WeightedHypergraph> {
    match expect_kind(text, "weighted")? {
        AnyHypergraph::Weighted(h) => Ok(h),
        _ => unreachable!(),
    }
}

pub fn parse_marked(text: &str) -> Result<(MarkedHypergraph, Elem)> {
    match expect_kind(text, "marked")? {
        AnyHypergraph::Marked(h, x) => Ok((h, x)),
        _ => unreachable!(),
    }
}

pub fn parse_poly(text: &str) -> Result<PolyHypergraph> {
    match expect_kind(text, "poly")? {
        AnyHypergraph::Poly(h) => Ok(h),
        _ => unreachable!(),
    }
}

pub fn calibrated_to_json(hg: &CalibratedHypergraph) -> HypergraphJson {
    let ring = hg.ring();
    let edges = hg
        .edges()
        .iter()
        .map(|(x, cal)| CalEdgeJson {
            vertices: x.vertices().to_vec(),
            calibration: cal
                .iter()
                .map(|(w, &v)| CalEntryJson {
                    w: w.iter().map(|(r, u)| (r.to_string(), u.to_dense(ring))).collect(),
                    value: v as u64,
                })
                .collect(),
        })
        .collect();
    HypergraphJson::Calibrated { ring: ring_to_json(ring), l: hg.l(), edges }
}

pub fn weighted_to_json(wh: &WeightedHypergraph) -> HypergraphJson {
    let edges = wh
        .edges()
        .iter()
        .map(|(x, &a)| WeightedEdgeJson { vertices: x.vertices().to_vec(), weight: a as u64 })
        .collect();
    HypergraphJson::Weighted { ring: ring_to_json(wh.ring()), l: wh.l(), edges }
}

pub fn to_json_string(j: &HypergraphJson) -> String {
    serde_json::to_string_pretty(j).expect("plain data serializes")
}

/// `(x_0,…,x_{l−1})` with ring elements in their display form.
pub fn format_config(ring: &GaloisRing, x: &[Elem]) -> String {
    let parts: Vec<String> = x.iter().map(|&e| ring.format_elem(e)).collect();
    format!("({})", parts.join(","))
}

/// One header line, then `x  phase` per configuration; with `amplitudes` the complex
/// amplitude follows at 12 significant digits.
pub fn format_state(psi: &FlatState, amplitudes: bool) -> String {
    let ring = psi.ring();
    let q = ring.order();
    let mut out = format!(
        "# ring {} l {} basis {} norm q^({}/2) phases mod {}\n",
        ring.name(),
        psi.l(),
        psi.basis().name(),
        psi.norm_exp(),
        ring.characteristic()
    );
    let scale = (q as f64).powf(psi.norm_exp() as f64 / 2.0);
    let n = ring.characteristic() as f64;
    for (idx, &ph) in psi.phases().iter().enumerate() {
        let x = config_at(q, psi.l(), idx);
        out.push_str(&format!("{}  {}", format_config(ring, &x), ph));
        if amplitudes {
            let arg = 2.0 * std::f64::consts::PI * ph as f64 / n;
            out.push_str(&format!("  {:.11e} {:.11e}", scale * arg.cos(), scale * arg.sin()));
        }
        out.push('\n');
    }
    out
}
