//! Friezes on the punctured n-gon: a non-zero ring element on every tagged
//! arc and boundary segment satisfying every exchange relation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{FriezeError, Result};
use crate::labeling::{is_admissible, negate_even_arcs, Sign, SignLabeling};
use crate::polygon::{Arc, Triangulation};
use crate::punctured::{all_variables, d_model, DModel, FlipCase, TaggedArc, TaggedTriangulation};
use crate::ring::{divisor_count, positive_divisors, Ring, RingElement};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DFrieze {
    n: usize,
    ring: Ring,
    /// Indexed like [`all_variables`].
    values: Vec<RingElement>,
}

impl DFrieze {
    /// Wraps a full value vector in [`all_variables`] order. No relation checks.
    pub fn from_values(n: usize, ring: Ring, values: Vec<RingElement>) -> Result<Self> {
        if n < 2 {
            return Err(FriezeError::InvalidInput(format!("punctured polygon needs n >= 2, got {n}")));
        }
        let expected = n + n * (n - 2) + 2 * n;
        if values.len() != expected {
            return Err(FriezeError::LengthMismatch { expected, got: values.len() });
        }
        if let Some(x) = values.iter().find(|x| x.ring() != ring) {
            return Err(FriezeError::RingMismatch(ring, x.ring()));
        }
        Ok(DFrieze { n, ring, values })
    }

    pub fn from_map(n: usize, ring: Ring, labels: &BTreeMap<TaggedArc, RingElement>) -> Result<Self> {
        let values = all_variables(n)
            .into_iter()
            .map(|a| {
                labels
                    .get(&a)
                    .cloned()
                    .ok_or_else(|| FriezeError::InvalidInput(format!("missing label on {a}")))
            })
            .collect::<Result<Vec<_>>>()?;
        DFrieze::from_values(n, ring, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn values(&self) -> &[RingElement] {
        &self.values
    }

    pub fn label(&self, arc: TaggedArc) -> &RingElement {
        &self.values[variable_index(arc, self.n)]
    }

    pub fn labels(&self) -> impl Iterator<Item = (TaggedArc, &RingElement)> {
        all_variables(self.n).into_iter().zip(self.values.iter())
    }

    pub fn is_positive(&self) -> bool {
        self.values.iter().all(RingElement::is_positive_integer)
    }

    pub fn has_unit_boundary(&self) -> bool {
        self.values[..self.n].iter().all(RingElement::is_one)
    }

    fn map_values(&self, f: impl Fn(TaggedArc, &RingElement) -> RingElement) -> DFrieze {
        let values = self.labels().map(|(a, x)| f(a, x)).collect();
        DFrieze { n: self.n, ring: self.ring, values }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "type": "D",
            "n": self.n,
            "ring": self.ring.name(),
            "labels": self.labels()
                .map(|(a, x)| serde_json::json!({"arc": a.to_json(self.n), "value": x.to_json()}))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Entry {
            arc: serde_json::Value,
            value: serde_json::Value,
        }
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "type")]
            kind: String,
            n: usize,
            ring: Ring,
            labels: Vec<Entry>,
        }
        let raw: Raw = serde_json::from_value(v.clone())
            .map_err(|e| FriezeError::InvalidInput(format!("frieze: {e}")))?;
        if raw.kind != "D" {
            return Err(FriezeError::InvalidInput(format!("expected a type D frieze, got {}", raw.kind)));
        }
        let mut map = BTreeMap::new();
        for e in raw.labels {
            map.insert(TaggedArc::from_json(&e.arc, raw.n)?, RingElement::from_json(raw.ring, &e.value)?);
        }
        DFrieze::from_map(raw.n, raw.ring, &map)
    }
}

/// Position of `arc` in [`all_variables`].
pub fn variable_index(arc: TaggedArc, n: usize) -> usize {
    match arc {
        TaggedArc::Boundary(i) => i,
        TaggedArc::PlainSpoke(i) => n + i,
        TaggedArc::TaggedSpoke(i) => 2 * n + i,
        TaggedArc::Chord { start, len } => 3 * n + start * (n - 2) + (len - 2),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DViolation {
    ZeroLabel(TaggedArc),
    Exchange { case: FlipCase, exchanged: (TaggedArc, TaggedArc) },
}

/// Zero labels and failing exchange relations, each tagged with its case.
pub fn exchange_check_d(f: &DFrieze) -> Result<Vec<DViolation>> {
    let model = d_model(f.n)?;
    let mut out: Vec<DViolation> =
        f.labels().filter(|(_, x)| x.is_zero()).map(|(a, _)| DViolation::ZeroLabel(a)).collect();
    for r in model.system().violations(&f.values) {
        let rel = &model.relations()[r];
        out.push(DViolation::Exchange { case: rel.case, exchanged: rel.exchanged });
    }
    Ok(out)
}

fn seed_vector(
    model: &DModel,
    t: &TaggedTriangulation,
    seed: &BTreeMap<TaggedArc, RingElement>,
) -> Result<Vec<Option<RingElement>>> {
    let n = model.n();
    let expected: Vec<TaggedArc> = (0..n).map(TaggedArc::Boundary).chain(t.arcs().iter().copied()).collect();
    if seed.len() != expected.len() || expected.iter().any(|a| !seed.contains_key(a)) {
        return Err(FriezeError::InvalidInput(
            "seed must label exactly the boundary and the triangulation's arcs".into(),
        ));
    }
    let mut values = vec![None; model.variables().len()];
    for (a, x) in seed {
        values[model.index_of(*a)] = Some(x.clone());
    }
    Ok(values)
}

/// Extends values on a tagged triangulation (and the boundary) to the unique
/// frieze, with exact division at every flip and every relation re-checked.
pub fn propagate_d(n: usize, t: &TaggedTriangulation, seed: &BTreeMap<TaggedArc, RingElement>) -> Result<DFrieze> {
    let order: Vec<usize> = (0..d_model(n)?.system().relations().len()).collect();
    propagate_d_in_order(n, t, seed, &order)
}

/// [`propagate_d`] with a caller-chosen order of exchange relations.
pub fn propagate_d_in_order(
    n: usize,
    t: &TaggedTriangulation,
    seed: &BTreeMap<TaggedArc, RingElement>,
    order: &[usize],
) -> Result<DFrieze> {
    if t.n() != n {
        return Err(FriezeError::LengthMismatch { expected: n, got: t.n() });
    }
    let model = d_model(n)?;
    let values = seed_vector(&model, t, seed)?;
    let ring = seed.values().next().map(RingElement::ring).unwrap_or(Ring::Z);
    let vars = model.variables();
    let solved = model.system().propagate_in_order(values, order, &|i| vars[i].to_string())?;
    DFrieze::from_values(n, ring, solved)
}

/// Negates every spoke, plain and tagged.
pub fn sigma1(f: &DFrieze) -> DFrieze {
    f.map_values(|a, x| if a.is_spoke() { -x } else { x.clone() })
}

/// With vertices counted from `anchor`: negates plain spokes at odd
/// positions, tagged spokes at even positions and chords of even length.
pub fn sigma2(f: &DFrieze, anchor: usize) -> Result<DFrieze> {
    let n = f.n;
    if n % 2 == 1 {
        return Err(FriezeError::ParityUndefined(n));
    }
    let odd = |v: usize| (v + n - anchor % n) % 2 == 1;
    Ok(f.map_values(|a, x| {
        let negate = match a {
            TaggedArc::PlainSpoke(v) => odd(v),
            TaggedArc::TaggedSpoke(v) => !odd(v),
            TaggedArc::Chord { len, .. } => len % 2 == 0,
            TaggedArc::Boundary(_) => false,
        };
        if negate {
            -x
        } else {
            x.clone()
        }
    }))
}

/// Element of the sign group generated by σ₁ and σ₂ (σ₂ anchored at vertex 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DTag {
    Identity,
    Sigma1,
    Sigma2,
    Sigma1Sigma2,
}

impl DTag {
    pub fn name(self) -> &'static str {
        match self {
            DTag::Identity => "id",
            DTag::Sigma1 => "sigma1",
            DTag::Sigma2 => "sigma2",
            DTag::Sigma1Sigma2 => "sigma1*sigma2",
        }
    }

    /// The group elements available for the punctured n-gon.
    pub fn group(n: usize) -> &'static [DTag] {
        if n.is_multiple_of(2) {
            &[DTag::Identity, DTag::Sigma1, DTag::Sigma2, DTag::Sigma1Sigma2]
        } else {
            &[DTag::Identity, DTag::Sigma1]
        }
    }

    fn compose_sigma1(self) -> DTag {
        match self {
            DTag::Identity => DTag::Sigma1,
            DTag::Sigma1 => DTag::Identity,
            DTag::Sigma2 => DTag::Sigma1Sigma2,
            DTag::Sigma1Sigma2 => DTag::Sigma2,
        }
    }
}

pub fn apply_d_tag(f: &DFrieze, tag: DTag) -> Result<DFrieze> {
    match tag {
        DTag::Identity => Ok(f.clone()),
        DTag::Sigma1 => Ok(sigma1(f)),
        DTag::Sigma2 => sigma2(f, 0),
        DTag::Sigma1Sigma2 => Ok(sigma1(&sigma2(f, 0)?)),
    }
}

/// Positive type-D frieze count `Σ_{m=1}^{n} d(m)·C(2n−m−1, n−m)`.
pub fn positive_d_count(n: usize) -> u64 {
    (1..=n as u64)
        .map(|m| divisor_count(m) * crate::polygon::binomial(2 * n as u64 - m - 1, n as u64 - m))
        .sum()
}

/// Total non-zero type-D frieze count.
pub fn nonzero_d_count(n: usize) -> u64 {
    positive_d_count(n) * if n.is_multiple_of(2) { 4 } else { 2 }
}

/// All non-zero type-D friezes over ℤ on the punctured n-gon, sorted.
///
/// Positive friezes come from triangulations whose chords are labeled 1 and
/// whose m plain spokes share a label dividing m (a lone plain spoke comes
/// with its tagged partner, labeled so the loop they form is 1); the sign
/// group then produces the rest.
pub fn enumerate_nonzero_d(n: usize) -> Result<Vec<DFrieze>> {
    let positive = enumerate_positive_d(n)?;
    let mut out: Vec<DFrieze> = positive
        .par_iter()
        .map(|f| DTag::group(n).iter().map(|&g| apply_d_tag(f, g)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for f in &out {
        if !exchange_check_d(f)?.is_empty() {
            return Err(FriezeError::Contract("sign-group image fails an exchange relation".into()));
        }
    }
    out.par_sort();
    out.dedup();
    Ok(out)
}

/// The positive type-D friezes, sorted.
pub fn enumerate_positive_d(n: usize) -> Result<Vec<DFrieze>> {
    let model = d_model(n)?;
    let seeds: Vec<(TaggedTriangulation, u64)> = model
        .triangulations()
        .iter()
        .filter_map(|t| {
            let plain = t.plain_spokes().len();
            let tagged = t.tagged_spokes();
            let canonical = match tagged.len() {
                0 => plain >= 2,
                1 => plain == 1 && t.plain_spokes() == tagged,
                _ => false,
            };
            canonical.then(|| (t.clone(), plain as u64))
        })
        .flat_map(|(t, m)| positive_divisors(m).into_iter().map(move |d| (t.clone(), d)))
        .collect();
    let mut out: Vec<DFrieze> = seeds
        .par_iter()
        .map(|(t, d)| {
            let mut seed = BTreeMap::new();
            for i in 0..n {
                seed.insert(TaggedArc::Boundary(i), RingElement::integer(1));
            }
            for &a in t.arcs() {
                let v = match a {
                    TaggedArc::PlainSpoke(_) => *d as i64,
                    _ => 1,
                };
                seed.insert(a, RingElement::integer(v));
            }
            let f = propagate_d(n, t, &seed)
                .map_err(|e| FriezeError::Contract(format!("canonical seed failed to propagate: {e}")))?;
            if !f.is_positive() {
                return Err(FriezeError::Contract("canonical seed produced a non-positive frieze".into()));
            }
            Ok(f)
        })
        .collect::<Result<Vec<_>>>()?;
    out.par_sort();
    out.dedup();
    Ok(out)
}

/// Result of peeling a type-D frieze down to spokes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpokeTriangulation {
    pub triangulation: TaggedTriangulation,
    /// Common absolute value of the plain spokes.
    pub d: BigInt,
    /// The vertex of a plain/tagged pair read as spoke plus loop, if any.
    pub self_folded: Option<usize>,
}

/// Cuts ears over unit length-2 chords while possible, then reads off the
/// spokes of what remains.
pub fn find_spoke_triangulation(f: &DFrieze) -> Result<SpokeTriangulation> {
    if f.ring != Ring::Z {
        return Err(FriezeError::InvalidInput("spoke triangulations are read off integer friezes".into()));
    }
    let n = f.n;
    if !f.values[..n].iter().all(RingElement::is_unit) {
        return Err(FriezeError::InvalidInput("boundary must be ±1".into()));
    }
    let abs = |a: TaggedArc| f.label(a).abs_squared();
    let mut vs: Vec<usize> = (0..n).collect();
    let mut chords = Vec::new();
    'peel: while vs.len() > 2 {
        let m = vs.len();
        for k in 0..m {
            let (u, w) = (vs[(k + m - 1) % m], vs[(k + 1) % m]);
            let chord = TaggedArc::Chord { start: u, len: (w + n - u) % n };
            if f.label(chord).is_unit() {
                chords.push(chord);
                vs.remove(k);
                continue 'peel;
            }
        }
        break;
    }
    let sqrt = |x: BigInt| x.sqrt();
    if vs.len() > 2 {
        let first = abs(TaggedArc::PlainSpoke(vs[0]));
        if vs.iter().any(|&v| abs(TaggedArc::PlainSpoke(v)) != first) {
            return Err(FriezeError::Contract("irreducible spoke fan has unequal |labels|".into()));
        }
        let t = TaggedTriangulation::new(n, chords.into_iter().chain(vs.iter().map(|&v| TaggedArc::PlainSpoke(v))))?;
        return Ok(SpokeTriangulation { triangulation: t, d: sqrt(first), self_folded: None });
    }
    let (p, q) = (vs[0], vs[1]);
    let (sp, sq) = (abs(TaggedArc::PlainSpoke(p)), abs(TaggedArc::PlainSpoke(q)));
    if sp == sq {
        let t = TaggedTriangulation::new(n, chords.into_iter().chain([TaggedArc::PlainSpoke(p), TaggedArc::PlainSpoke(q)]))?;
        return Ok(SpokeTriangulation { triangulation: t, d: sqrt(sp), self_folded: None });
    }
    let one = BigInt::from(1);
    let u = if sp == one { p } else { q };
    if abs(TaggedArc::PlainSpoke(u)) != one || abs(TaggedArc::TaggedSpoke(u)) != one {
        return Err(FriezeError::Contract("punctured digon has no unit spoke pair".into()));
    }
    let t = TaggedTriangulation::new(n, chords.into_iter().chain([TaggedArc::PlainSpoke(u), TaggedArc::TaggedSpoke(u)]))?;
    Ok(SpokeTriangulation { triangulation: t, d: one, self_folded: Some(u) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignConfiguration {
    pub spokes: SpokeTriangulation,
    /// Signs of the spoke triangulation's arcs.
    pub signs: BTreeMap<TaggedArc, Sign>,
    /// The plain spoke cut open.
    pub cut: usize,
    /// The labeling of the (n+2)-gon obtained by cutting (after negating all
    /// spokes if no plain spoke was positive).
    pub cut_labeling: SignLabeling,
    pub category: u8,
}

fn sign_of(x: &RingElement) -> Result<Sign> {
    match x.integer_sign() {
        Some(1) => Ok(Sign::Plus),
        Some(-1) => Ok(Sign::Minus),
        _ => Err(FriezeError::InvalidInput(format!("{x} has no sign"))),
    }
}

/// Reads the sign pattern on the spoke triangulation, cuts it open along a
/// positive plain spoke (negating all spokes first if there is none) and
/// sorts it into one of the four categories.
pub fn classify_sign_configuration(f: &DFrieze) -> Result<SignConfiguration> {
    let n = f.n;
    let spokes = find_spoke_triangulation(f)?;
    let t = &spokes.triangulation;
    let mut signs = BTreeMap::new();
    for &a in t.arcs() {
        signs.insert(a, sign_of(f.label(a))?);
    }
    let positive_plain = t.plain_spokes().into_iter().find(|&v| signs[&TaggedArc::PlainSpoke(v)] == Sign::Plus);
    let (cut, flipped) = match positive_plain {
        Some(v) => (v, false),
        None => (t.plain_spokes()[0], true),
    };
    let adjusted = |a: TaggedArc| -> Result<Sign> {
        let s = match signs.get(&a) {
            Some(s) => *s,
            None => sign_of(f.label(a))?,
        };
        Ok(if flipped && a.is_spoke() { -s } else { s })
    };

    // the (n+2)-gon: vertex j is boundary vertex cut+j for j in 0..=n, vertex n+1 the puncture
    let lift = |v: usize| (v + n - cut) % n;
    let mut arcs = BTreeMap::new();
    for j in 0..n {
        arcs.insert(Arc::new(j, j + 1), adjusted(TaggedArc::Boundary((cut + j) % n))?);
    }
    let cut_sign = adjusted(TaggedArc::PlainSpoke(cut))?;
    arcs.insert(Arc::new(n, n + 1), cut_sign);
    arcs.insert(Arc::new(0, n + 1), cut_sign);
    for &a in t.arcs() {
        match a {
            TaggedArc::PlainSpoke(v) if v != cut => {
                arcs.insert(Arc::new(lift(v), n + 1), adjusted(a)?);
            }
            TaggedArc::TaggedSpoke(v) => {
                debug_assert_eq!(v, cut);
                // the self-folded pair reads as the cut spoke plus a loop
                arcs.insert(Arc::new(0, n), adjusted(a)? * cut_sign);
            }
            TaggedArc::Chord { start, len } => {
                let s = lift(start);
                arcs.insert(Arc::new(s, s + len), adjusted(a)?);
            }
            _ => {}
        }
    }
    let internal: Vec<Arc> = arcs.keys().copied().filter(|a| !a.is_boundary(n + 2)).collect();
    let tri = Triangulation::new(n + 2, internal)?;
    let labeling = SignLabeling::new(tri.clone(), arcs)?;
    if !is_admissible(&labeling) {
        return Err(FriezeError::Contract("cut-open sign configuration is not admissible".into()));
    }
    let all_plus = SignLabeling::all_plus(tri);
    let base = if labeling == all_plus {
        1
    } else if n.is_multiple_of(2) && labeling == negate_even_arcs(&all_plus)? {
        3
    } else {
        return Err(FriezeError::Contract("sign configuration fits no category".into()));
    };
    Ok(SignConfiguration {
        spokes,
        signs,
        cut,
        cut_labeling: labeling,
        category: base + u8::from(flipped),
    })
}

/// The positive frieze in the sign-group orbit of `f`, and the tag mapping
/// it back to `f`.
pub fn normalize_d(f: &DFrieze) -> Result<(DFrieze, DTag)> {
    if f.ring != Ring::Z || !f.has_unit_boundary() {
        return Err(FriezeError::InvalidInput("normalisation applies to integer type D friezes".into()));
    }
    let config = classify_sign_configuration(f)?;
    let mut tag = match config.category {
        1 | 2 => DTag::Identity,
        // σ₂ anchored at the cut vertex
        _ if config.cut % 2 == 0 => DTag::Sigma2,
        _ => DTag::Sigma1Sigma2,
    };
    if config.category % 2 == 0 {
        tag = tag.compose_sigma1();
    }
    let positive = apply_d_tag(f, tag)?;
    if !positive.is_positive() {
        return Err(FriezeError::Contract(format!("category {} frieze did not normalise", config.category)));
    }
    Ok((positive, tag))
}

/// The D₃ ≅ A₃ dictionary: tagged arcs of the punctured triangle to arcs of the hexagon.
pub fn d3_to_a3(arc: TaggedArc) -> Arc {
    match arc {
        TaggedArc::Boundary(i) => Arc::wrapping(2 * i + 1, 2 * i + 2, 6),
        TaggedArc::PlainSpoke(v) => Arc::wrapping(2 * v, 2 * v + 2, 6),
        TaggedArc::TaggedSpoke(v) => Arc::wrapping(2 * v + 3, 2 * v + 5, 6),
        TaggedArc::Chord { start, .. } => Arc::wrapping(2 * start, 2 * start + 3, 6),
    }
}
