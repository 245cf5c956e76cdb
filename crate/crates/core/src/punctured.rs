//! Tagged arcs and tagged triangulations of the once-punctured n-gon, and
//! the exchange relations between them.
//!
//! Vertices are 0..n counter-clockwise, boundary segment `i` joins vertex i
//! to i+1 and `P` is the puncture. A chord is stored as its start vertex and
//! the number of boundary segments on its puncture-free side, so
//! `Chord { start, len }` runs from `start` to `start + len` (mod n) with the
//! segments `start..start+len` cut off from the puncture.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc as Shared, Mutex, OnceLock};

use serde::Deserialize;

use crate::error::{FriezeError, Result};
use crate::relations::{Relation, RelationSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TaggedArc {
    Boundary(usize),
    PlainSpoke(usize),
    TaggedSpoke(usize),
    Chord { start: usize, len: usize },
}

impl TaggedArc {
    pub fn is_boundary(&self) -> bool {
        matches!(self, TaggedArc::Boundary(_))
    }

    pub fn is_spoke(&self) -> bool {
        matches!(self, TaggedArc::PlainSpoke(_) | TaggedArc::TaggedSpoke(_))
    }

    pub fn is_valid(&self, n: usize) -> bool {
        match *self {
            TaggedArc::Boundary(i) | TaggedArc::PlainSpoke(i) | TaggedArc::TaggedSpoke(i) => i < n,
            TaggedArc::Chord { start, len } => start < n && len >= 2 && len < n,
        }
    }

    /// Endpoints on the boundary, smaller first (chords and boundary segments only).
    pub fn endpoints(&self, n: usize) -> Option<(usize, usize)> {
        let (a, b) = match *self {
            TaggedArc::Boundary(i) => (i, (i + 1) % n),
            TaggedArc::Chord { start, len } => (start, (start + len) % n),
            _ => return None,
        };
        Some((a.min(b), a.max(b)))
    }

    /// Number of boundary segments on the puncture-free side; boundary
    /// segments have length 1 and spokes have none.
    pub fn length(&self) -> Option<usize> {
        match *self {
            TaggedArc::Boundary(_) => Some(1),
            TaggedArc::Chord { len, .. } => Some(len),
            _ => None,
        }
    }

    /// Bitmask of the boundary segments cut off from the puncture.
    fn segments(&self, n: usize) -> u64 {
        match *self {
            TaggedArc::Boundary(i) => 1 << i,
            TaggedArc::Chord { start, len } => (start..start + len).fold(0, |m, s| m | 1 << (s % n)),
            _ => 0,
        }
    }

    /// Whether vertex `v` lies strictly inside the puncture-free side.
    fn encloses_vertex(&self, v: usize, n: usize) -> bool {
        match *self {
            TaggedArc::Chord { start, len } => {
                let offset = (v + n - start) % n;
                offset > 0 && offset < len
            }
            _ => false,
        }
    }

    /// The arc after rotating all vertex labels by `shift`.
    pub fn rotated(&self, shift: usize, n: usize) -> Self {
        let r = |i: usize| (i + shift) % n;
        match *self {
            TaggedArc::Boundary(i) => TaggedArc::Boundary(r(i)),
            TaggedArc::PlainSpoke(i) => TaggedArc::PlainSpoke(r(i)),
            TaggedArc::TaggedSpoke(i) => TaggedArc::TaggedSpoke(r(i)),
            TaggedArc::Chord { start, len } => TaggedArc::Chord { start: r(start), len },
        }
    }

    /// Swaps plain and tagged spokes; chords and boundary are fixed.
    pub fn tag_swapped(&self) -> Self {
        match *self {
            TaggedArc::PlainSpoke(i) => TaggedArc::TaggedSpoke(i),
            TaggedArc::TaggedSpoke(i) => TaggedArc::PlainSpoke(i),
            other => other,
        }
    }

    pub fn to_json(&self, n: usize) -> serde_json::Value {
        match *self {
            TaggedArc::Boundary(i) => serde_json::json!({"kind": "boundary", "at": i}),
            TaggedArc::PlainSpoke(i) => serde_json::json!({"kind": "spoke", "at": i}),
            TaggedArc::TaggedSpoke(i) => serde_json::json!({"kind": "tagged-spoke", "at": i}),
            TaggedArc::Chord { start, len } => {
                let end = (start + len) % n;
                let side = if start < end { "ccw" } else { "cw" };
                serde_json::json!({"kind": "chord", "from": start.min(end), "to": start.max(end), "side": side})
            }
        }
    }

    pub fn from_json(v: &serde_json::Value, n: usize) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            kind: String,
            at: Option<usize>,
            from: Option<usize>,
            to: Option<usize>,
            side: Option<String>,
        }
        let raw: Raw = serde_json::from_value(v.clone())
            .map_err(|e| FriezeError::InvalidInput(format!("tagged arc: {e}")))?;
        let need = |x: Option<usize>, what: &str| {
            x.ok_or_else(|| FriezeError::InvalidInput(format!("tagged arc of kind {} needs '{what}'", raw.kind)))
        };
        let arc = match raw.kind.as_str() {
            "boundary" => TaggedArc::Boundary(need(raw.at, "at")?),
            "spoke" => TaggedArc::PlainSpoke(need(raw.at, "at")?),
            "tagged-spoke" => TaggedArc::TaggedSpoke(need(raw.at, "at")?),
            "chord" => {
                let (from, to) = (need(raw.from, "from")?, need(raw.to, "to")?);
                if from >= to || to >= n {
                    return Err(FriezeError::InvalidInput(format!("chord ({from},{to}) invalid for n={n}")));
                }
                match raw.side.as_deref() {
                    Some("ccw") => TaggedArc::Chord { start: from, len: to - from },
                    Some("cw") => TaggedArc::Chord { start: to, len: n - (to - from) },
                    other => return Err(FriezeError::InvalidInput(format!("chord side {other:?}"))),
                }
            }
            other => return Err(FriezeError::InvalidInput(format!("unknown tagged arc kind '{other}'"))),
        };
        if !arc.is_valid(n) {
            return Err(FriezeError::InvalidInput(format!("{arc} is not an arc of the punctured {n}-gon")));
        }
        Ok(arc)
    }
}

impl fmt::Display for TaggedArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TaggedArc::Boundary(i) => write!(f, "b{i}"),
            TaggedArc::PlainSpoke(i) => write!(f, "s{i}"),
            TaggedArc::TaggedSpoke(i) => write!(f, "t{i}"),
            TaggedArc::Chord { start, len } => write!(f, "c{start}+{len}"),
        }
    }
}

/// Whether two tagged arcs can coexist in a tagged triangulation.
pub fn compatible(a: TaggedArc, b: TaggedArc, n: usize) -> bool {
    use TaggedArc::*;
    if a == b || a.is_boundary() || b.is_boundary() {
        return true;
    }
    match (a, b) {
        (PlainSpoke(_), PlainSpoke(_)) | (TaggedSpoke(_), TaggedSpoke(_)) => true,
        (PlainSpoke(u), TaggedSpoke(v)) | (TaggedSpoke(u), PlainSpoke(v)) => u == v,
        (PlainSpoke(v) | TaggedSpoke(v), c @ Chord { .. }) | (c @ Chord { .. }, PlainSpoke(v) | TaggedSpoke(v)) => {
            !c.encloses_vertex(v, n)
        }
        _ => {
            let (x, y) = (a.segments(n), b.segments(n));
            x & y == 0 || x & y == x || x & y == y
        }
    }
}

/// The non-boundary tagged arcs in canonical order; n(n−2) + 2n of them.
pub fn tagged_arcs(n: usize) -> Vec<TaggedArc> {
    let mut out: Vec<TaggedArc> = (0..n).map(TaggedArc::PlainSpoke).collect();
    out.extend((0..n).map(TaggedArc::TaggedSpoke));
    for start in 0..n {
        for len in 2..n {
            out.push(TaggedArc::Chord { start, len });
        }
    }
    out
}

/// Boundary segments followed by [`tagged_arcs`]: the variable order of a
/// type-D frieze.
pub fn all_variables(n: usize) -> Vec<TaggedArc> {
    let mut out: Vec<TaggedArc> = (0..n).map(TaggedArc::Boundary).collect();
    out.extend(tagged_arcs(n));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedTriangulation {
    n: usize,
    arcs: Vec<TaggedArc>,
}

impl TaggedTriangulation {
    /// Validates pairwise compatibility and size n.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = TaggedArc>) -> Result<Self> {
        if n < 2 {
            return Err(FriezeError::InvalidInput(format!("punctured polygon needs n >= 2, got {n}")));
        }
        let arcs: BTreeSet<TaggedArc> = arcs.into_iter().collect();
        let arcs: Vec<TaggedArc> = arcs.into_iter().collect();
        if let Some(a) = arcs.iter().find(|a| a.is_boundary() || !a.is_valid(n)) {
            return Err(FriezeError::InvalidInput(format!("{a} is not an internal tagged arc for n={n}")));
        }
        if arcs.len() != n {
            return Err(FriezeError::LengthMismatch { expected: n, got: arcs.len() });
        }
        for (i, &a) in arcs.iter().enumerate() {
            if let Some(&b) = arcs[i + 1..].iter().find(|&&b| !compatible(a, b, n)) {
                return Err(FriezeError::InvalidInput(format!("{a} and {b} are not compatible")));
            }
        }
        Ok(TaggedTriangulation { n, arcs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[TaggedArc] {
        &self.arcs
    }

    pub fn contains(&self, arc: TaggedArc) -> bool {
        self.arcs.binary_search(&arc).is_ok()
    }

    /// All plain spokes.
    pub fn spoke_fan(n: usize) -> Result<Self> {
        TaggedTriangulation::new(n, (0..n).map(TaggedArc::PlainSpoke))
    }

    pub fn plain_spokes(&self) -> Vec<usize> {
        self.arcs
            .iter()
            .filter_map(|a| if let TaggedArc::PlainSpoke(v) = a { Some(*v) } else { None })
            .collect()
    }

    pub fn tagged_spokes(&self) -> Vec<usize> {
        self.arcs
            .iter()
            .filter_map(|a| if let TaggedArc::TaggedSpoke(v) = a { Some(*v) } else { None })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "punctured": true,
            "arcs": self.arcs.iter().map(|a| a.to_json(self.n)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let n = v["n"]
            .as_u64()
            .ok_or_else(|| FriezeError::InvalidInput("tagged triangulation needs 'n'".into()))? as usize;
        let arcs = v["arcs"]
            .as_array()
            .ok_or_else(|| FriezeError::InvalidInput("tagged triangulation needs 'arcs'".into()))?
            .iter()
            .map(|a| TaggedArc::from_json(a, n))
            .collect::<Result<Vec<_>>>()?;
        TaggedTriangulation::new(n, arcs)
    }
}

/// Replaces `arc` by the unique other arc compatible with the rest.
pub fn flip_tagged(t: &TaggedTriangulation, arc: TaggedArc) -> Result<(TaggedTriangulation, TaggedArc)> {
    if !t.contains(arc) {
        return Err(FriezeError::NotFlippable(arc.to_string()));
    }
    let n = t.n;
    let rest: Vec<TaggedArc> = t.arcs.iter().copied().filter(|&a| a != arc).collect();
    let partners: Vec<TaggedArc> = tagged_arcs(n)
        .into_iter()
        .filter(|&c| c != arc && !rest.contains(&c) && rest.iter().all(|&r| compatible(r, c, n)))
        .collect();
    match partners.as_slice() {
        [other] => Ok((TaggedTriangulation::new(n, rest.into_iter().chain([*other]))?, *other)),
        _ => Err(FriezeError::Contract(format!("{arc} has {} flip partners", partners.len()))),
    }
}

/// All tagged triangulations, sorted.
pub fn enumerate_tagged_triangulations(n: usize) -> Result<Vec<TaggedTriangulation>> {
    if n < 2 {
        return Err(FriezeError::InvalidInput(format!("punctured polygon needs n >= 2, got {n}")));
    }
    let arcs = tagged_arcs(n);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn extend(arcs: &[TaggedArc], from: usize, n: usize, chosen: &mut Vec<TaggedArc>, out: &mut Vec<Vec<TaggedArc>>) {
        if chosen.len() == n {
            out.push(chosen.clone());
            return;
        }
        for k in from..arcs.len() {
            if chosen.iter().all(|&c| compatible(c, arcs[k], n)) {
                chosen.push(arcs[k]);
                extend(arcs, k + 1, n, chosen, out);
                chosen.pop();
            }
        }
    }
    extend(&arcs, 0, n, &mut chosen, &mut out);
    let mut ts: Vec<TaggedTriangulation> = out
        .into_iter()
        .map(|mut a| {
            a.sort();
            TaggedTriangulation { n, arcs: a }
        })
        .collect();
    ts.sort();
    Ok(ts)
}

/// Shape of an exchange relation `x·x' = M₁ + M₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlipCase {
    /// Ptolemy form without tagged spokes.
    A,
    /// Ptolemy form involving tagged spokes.
    B,
    /// Both monomials of degree one (the punctured digon).
    C,
    /// A degree-three monomial (flip across a self-folded triangle).
    D,
}

impl FlipCase {
    pub fn letter(self) -> char {
        match self {
            FlipCase::A => 'a',
            FlipCase::B => 'b',
            FlipCase::C => 'c',
            FlipCase::D => 'd',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeRelation {
    pub exchanged: (TaggedArc, TaggedArc),
    pub monomials: [Vec<TaggedArc>; 2],
    pub case: FlipCase,
}

/// The punctured n-gon model, built once per n.
#[derive(Debug)]
pub struct DModel {
    n: usize,
    variables: Vec<TaggedArc>,
    index: HashMap<TaggedArc, usize>,
    triangulations: Vec<TaggedTriangulation>,
    system: RelationSystem,
    relations: Vec<ExchangeRelation>,
}

impl DModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variables(&self) -> &[TaggedArc] {
        &self.variables
    }

    pub fn index_of(&self, arc: TaggedArc) -> usize {
        self.index[&arc]
    }

    pub fn triangulations(&self) -> &[TaggedTriangulation] {
        &self.triangulations
    }

    pub fn system(&self) -> &RelationSystem {
        &self.system
    }

    /// One entry per relation of [`system`](Self::system), same order.
    pub fn relations(&self) -> &[ExchangeRelation] {
        &self.relations
    }
}

/// Cached model for the punctured n-gon.
pub fn d_model(n: usize) -> Result<Shared<DModel>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Shared<DModel>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(m) = cache.lock().unwrap().get(&n) {
        return Ok(m.clone());
    }
    let model = Shared::new(build_model(n)?);
    cache.lock().unwrap().insert(n, model.clone());
    Ok(model)
}

/// Exchange matrix of the spoke fan, boundary segments as frozen rows: each
/// fan triangle (s_i, b_i, s_{i+1}) contributes the 3-cycle s_i → s_{i+1} → b_i → s_i.
fn fan_matrix(n: usize, index: &HashMap<TaggedArc, usize>) -> Vec<i32> {
    let size = index.len();
    let mut b = vec![0i32; size * size];
    let mut arrow = |x: TaggedArc, y: TaggedArc| {
        let (i, j) = (index[&x], index[&y]);
        b[i * size + j] += 1;
        b[j * size + i] -= 1;
    };
    for i in 0..n {
        let (s, b_i, s_next) =
            (TaggedArc::PlainSpoke(i), TaggedArc::Boundary(i), TaggedArc::PlainSpoke((i + 1) % n));
        arrow(s, s_next);
        arrow(s_next, b_i);
        arrow(b_i, s);
    }
    for i in 0..n {
        for j in 0..n {
            b[i * size + j] = 0;
        }
    }
    b
}

fn classify(lhs: (TaggedArc, TaggedArc), monomials: &[Vec<TaggedArc>; 2]) -> FlipCase {
    let degrees = [monomials[0].len(), monomials[1].len()];
    if degrees.contains(&3) {
        FlipCase::D
    } else if degrees == [1, 1] {
        FlipCase::C
    } else if [lhs.0, lhs.1]
        .iter()
        .chain(monomials.iter().flatten())
        .any(|a| matches!(a, TaggedArc::TaggedSpoke(_)))
    {
        FlipCase::B
    } else {
        FlipCase::A
    }
}

fn build_model(n: usize) -> Result<DModel> {
    let variables = all_variables(n);
    let index: HashMap<TaggedArc, usize> = variables.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    let size = variables.len();
    let frozen = |i: usize| i < n;
    let triangulations = enumerate_tagged_triangulations(n)?;
    let tri_index: HashMap<&TaggedTriangulation, usize> =
        triangulations.iter().enumerate().map(|(i, t)| (t, i)).collect();

    let mut matrices: Vec<Option<Vec<i32>>> = vec![None; triangulations.len()];
    let start = tri_index[&TaggedTriangulation::spoke_fan(n)?];
    matrices[start] = Some(fan_matrix(n, &index));
    let mut queue = VecDeque::from([start]);
    let mut relations: Vec<(Relation, ExchangeRelation)> = Vec::new();

    while let Some(ti) = queue.pop_front() {
        let t = &triangulations[ti];
        let b = matrices[ti].clone().unwrap();
        for &x in t.arcs() {
            let (t2, y) = flip_tagged(t, x)?;
            let k = index[&x];
            let k2 = index[&y];
            let (mut plus, mut minus) = (Vec::new(), Vec::new());
            for i in 0..size {
                let e = b[i * size + k];
                for _ in 0..e.max(0) {
                    plus.push(i);
                }
                for _ in 0..(-e).max(0) {
                    minus.push(i);
                }
            }
            let to_arcs = |m: &Vec<usize>| m.iter().map(|&i| variables[i]).collect::<Vec<_>>();
            let monomials = [to_arcs(&plus), to_arcs(&minus)];
            let case = classify((x, y), &monomials);
            let rel = Relation::new([k, k2], [plus, minus]);
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            let mut monomials = monomials;
            monomials.sort();
            relations.push((rel, ExchangeRelation { exchanged: (lo, hi), monomials, case }));

            // mutate at k, then move row/column k to k2
            let mut m = b.clone();
            for i in 0..size {
                for j in 0..size {
                    if i == k || j == k {
                        m[i * size + j] = -b[i * size + j];
                    } else {
                        let (bik, bkj) = (b[i * size + k], b[k * size + j]);
                        m[i * size + j] = b[i * size + j] + (bik.abs() * bkj + bik * bkj.abs()) / 2;
                    }
                }
            }
            let mut moved = vec![0i32; size * size];
            let relabel = |i: usize| if i == k { k2 } else { i };
            for i in 0..size {
                for j in 0..size {
                    if i != k2 && j != k2 && !(frozen(i) && frozen(j)) {
                        moved[relabel(i) * size + relabel(j)] = m[i * size + j];
                    }
                }
            }
            let tj = tri_index[&t2];
            match &matrices[tj] {
                None => {
                    matrices[tj] = Some(moved);
                    queue.push_back(tj);
                }
                Some(existing) if *existing != moved => {
                    return Err(FriezeError::Contract(format!(
                        "exchange matrix of a tagged triangulation depends on the flip route (n={n})"
                    )));
                }
                Some(_) => {}
            }
        }
    }
    if matrices.iter().any(Option::is_none) {
        return Err(FriezeError::Contract(format!("tagged flip graph is disconnected for n={n}")));
    }
    relations.sort_by(|a, b| a.0.cmp(&b.0));
    relations.dedup_by(|a, b| a.0 == b.0);
    let system = RelationSystem::new(size, relations.iter().map(|(r, _)| r.clone()).collect());
    debug_assert_eq!(system.relations().len(), relations.len());
    Ok(DModel {
        n,
        variables,
        index,
        triangulations,
        system,
        relations: relations.into_iter().map(|(_, e)| e).collect(),
    })
}
