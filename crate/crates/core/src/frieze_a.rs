//! Friezes on the n-gon: a non-zero ring element on every arc, boundary
//! included, satisfying the Ptolemy relation on every quadrilateral.
//!
//! With all boundary labels equal to 1 these are the type-A friezes of rank
//! n − 3; with arbitrary boundary labels they are the boundary-extended
//! ("FA") friezes.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc as Shared, Mutex, OnceLock};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{FriezeError, Result};
use crate::labeling::{extend_boundary, is_admissible, BoundaryState, Sign, SignLabeling};
use crate::polygon::{
    all_arcs, all_quadrilaterals, arc_index, enumerate_triangulations, Arc, Quadrilateral, Triangulation,
};
use crate::relations::{Relation, RelationSystem};
use crate::ring::{Ring, RingElement};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AFrieze {
    n: usize,
    ring: Ring,
    /// Indexed by [`arc_index`].
    values: Vec<RingElement>,
}

impl AFrieze {
    /// Wraps a full value vector in [`all_arcs`] order. No relation checks.
    pub fn from_values(n: usize, ring: Ring, values: Vec<RingElement>) -> Result<Self> {
        if n < 3 {
            return Err(FriezeError::InvalidInput(format!("polygon needs n >= 3, got {n}")));
        }
        let expected = n * (n - 1) / 2;
        if values.len() != expected {
            return Err(FriezeError::LengthMismatch { expected, got: values.len() });
        }
        if let Some(x) = values.iter().find(|x| x.ring() != ring) {
            return Err(FriezeError::RingMismatch(ring, x.ring()));
        }
        Ok(AFrieze { n, ring, values })
    }

    /// Builds from an arc → value map covering every arc.
    pub fn from_map(n: usize, ring: Ring, labels: &BTreeMap<Arc, RingElement>) -> Result<Self> {
        let values = all_arcs(n)
            .into_iter()
            .map(|a| {
                labels
                    .get(&a)
                    .cloned()
                    .ok_or_else(|| FriezeError::InvalidInput(format!("missing label on {a}")))
            })
            .collect::<Result<Vec<_>>>()?;
        AFrieze::from_values(n, ring, values)
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

    pub fn label(&self, arc: Arc) -> &RingElement {
        &self.values[arc_index(arc, self.n)]
    }

    pub fn labels(&self) -> impl Iterator<Item = (Arc, &RingElement)> {
        all_arcs(self.n).into_iter().zip(self.values.iter())
    }

    pub fn is_positive(&self) -> bool {
        self.values.iter().all(RingElement::is_positive_integer)
    }

    pub fn has_unit_boundary(&self) -> bool {
        (0..self.n).all(|k| self.label(Arc::wrapping(k, k + 1, self.n)).is_one())
    }

    /// Labels of the boundary arcs `(k, k+1)`, k = 0..n.
    pub fn boundary_labels(&self) -> Vec<RingElement> {
        (0..self.n).map(|k| self.label(Arc::wrapping(k, k + 1, self.n)).clone()).collect()
    }

    /// `q[v]` is the label of the span-2 arc cutting off vertex v.
    pub fn quiddity(&self) -> Vec<RingElement> {
        let n = self.n;
        (0..n).map(|v| self.label(Arc::wrapping(v + n - 1, v + 1, n)).clone()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "type": "A",
            "n": self.n,
            "ring": self.ring.name(),
            "labels": self.labels()
                .map(|(a, x)| serde_json::json!({"arc": a.to_json(), "value": x.to_json()}))
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
        if raw.kind != "A" {
            return Err(FriezeError::InvalidInput(format!("expected a type A frieze, got {}", raw.kind)));
        }
        let mut map = BTreeMap::new();
        for e in raw.labels {
            let arc = Arc::from_json(&e.arc)?;
            if !arc.is_valid(raw.n) {
                return Err(FriezeError::InvalidInput(format!("{arc} outside the {}-gon", raw.n)));
            }
            map.insert(arc, RingElement::from_json(raw.ring, &e.value)?);
        }
        AFrieze::from_map(raw.n, raw.ring, &map)
    }
}

/// Ptolemy relations of the n-gon, one per quadrilateral, over [`arc_index`] variables.
pub fn ptolemy_system(n: usize) -> Shared<RelationSystem> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Shared<RelationSystem>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap().get(&n) {
        return s.clone();
    }
    let idx = |a: Arc| arc_index(a, n);
    let relations = all_quadrilaterals(n)
        .into_iter()
        .map(|q| {
            let [d1, d2] = q.diagonals();
            let [s0, s1, s2, s3] = q.sides();
            Relation::new([idx(d1), idx(d2)], [vec![idx(s0), idx(s2)], vec![idx(s1), idx(s3)]])
        })
        .collect();
    let system = Shared::new(RelationSystem::new(n * (n - 1) / 2, relations));
    cache.lock().unwrap().insert(n, system.clone());
    system
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AViolation {
    ZeroLabel(Arc),
    Ptolemy(Quadrilateral),
}

/// Zero labels and quadrilaterals whose Ptolemy relation fails.
pub fn ptolemy_check(f: &AFrieze) -> Vec<AViolation> {
    let mut out: Vec<AViolation> =
        f.labels().filter(|(_, x)| x.is_zero()).map(|(a, _)| AViolation::ZeroLabel(a)).collect();
    for q in all_quadrilaterals(f.n) {
        let [d1, d2] = q.diagonals();
        let [s0, s1, s2, s3] = q.sides();
        let l = |a| f.label(a);
        if (l(d1) * l(d2)) != (&(l(s0) * l(s2)) + &(l(s1) * l(s3))) {
            out.push(AViolation::Ptolemy(q));
        }
    }
    out
}

/// Quadrilaterals `(i, i+1, j, j+1)` where `m(i,j)·m(i+1,j+1) ≠ 1 + m(i+1,j)·m(i,j+1)`.
pub fn diamond_violations(f: &AFrieze) -> Vec<(usize, usize)> {
    let n = f.n;
    let one = f.ring.one();
    let m = |a: usize, b: usize| f.label(Arc::wrapping(a, b, n));
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 2..i + n - 1 {
            if (j + 1) % n == i {
                continue;
            }
            let lhs = m(i, j) * m(i + 1, j + 1);
            let rhs = &one + &(m(i + 1, j) * m(i, j + 1));
            if lhs != rhs {
                out.push((i, j % n));
            }
        }
    }
    out
}

fn seed_vector(n: usize, t: &Triangulation, seed: &BTreeMap<Arc, RingElement>) -> Result<Vec<Option<RingElement>>> {
    let mut values = vec![None; n * (n - 1) / 2];
    let allowed = t.all_edges();
    if seed.len() != allowed.len() || allowed.iter().any(|a| !seed.contains_key(a)) {
        return Err(FriezeError::InvalidInput(
            "seed must label exactly the boundary and the triangulation's arcs".into(),
        ));
    }
    for (a, x) in seed {
        values[arc_index(*a, n)] = Some(x.clone());
    }
    Ok(values)
}

/// Extends values on a triangulation (and the boundary) to the unique frieze,
/// flip by flip, with exact division at every step.
pub fn propagate(n: usize, t: &Triangulation, seed: &BTreeMap<Arc, RingElement>) -> Result<AFrieze> {
    if t.n() != n {
        return Err(FriezeError::LengthMismatch { expected: n, got: t.n() });
    }
    let values = seed_vector(n, t, seed)?;
    let ring = seed.values().next().map(RingElement::ring).unwrap_or(Ring::Z);
    let arcs = all_arcs(n);
    let solved = ptolemy_system(n).propagate(values, &|i| arcs[i].to_string())?;
    AFrieze::from_values(n, ring, solved)
}

/// [`propagate`] with a caller-chosen order of quadrilateral relations.
pub fn propagate_in_order(
    n: usize,
    t: &Triangulation,
    seed: &BTreeMap<Arc, RingElement>,
    order: &[usize],
) -> Result<AFrieze> {
    let values = seed_vector(n, t, seed)?;
    let ring = seed.values().next().map(RingElement::ring).unwrap_or(Ring::Z);
    let arcs = all_arcs(n);
    let solved = ptolemy_system(n).propagate_in_order(values, order, &|i| arcs[i].to_string())?;
    AFrieze::from_values(n, ring, solved)
}

/// Negates every label on an arc of even span. Requires even n.
pub fn sigma(f: &AFrieze) -> Result<AFrieze> {
    if f.n % 2 == 1 {
        return Err(FriezeError::ParityUndefined(f.n));
    }
    let values = f
        .labels()
        .map(|(a, x)| if a.span() % 2 == 0 { -x } else { x.clone() })
        .collect();
    Ok(AFrieze { n: f.n, ring: f.ring, values })
}

/// Non-zero type-A frieze count on the n-gon: `C(n−2)`, doubled for even n.
pub fn nonzero_a_count(n: usize) -> u64 {
    crate::polygon::catalan(n as u64 - 2) * if n.is_multiple_of(2) { 2 } else { 1 }
}

/// All non-zero type-A friezes on the n-gon over ℤ, canonically sorted.
///
/// For each triangulation the all-plus boundary is extended to its admissible
/// sign labelings and each is propagated; every result is re-validated.
pub fn enumerate_nonzero_a(n: usize, ring: Ring) -> Result<Vec<AFrieze>> {
    if ring != Ring::Z {
        return Err(FriezeError::InvalidInput(format!(
            "structural enumeration is over Z; use the bounded oracle for {ring}"
        )));
    }
    if n < 4 {
        return Err(FriezeError::InvalidInput(format!("type A enumeration needs n >= 4, got {n}")));
    }
    let triangulations = enumerate_triangulations(n)?;
    let mut out: Vec<AFrieze> = triangulations
        .par_iter()
        .map(|t| -> Result<Vec<AFrieze>> {
            extend_boundary(t, &BoundaryState::all_plus(n))?
                .into_iter()
                .map(|labeling| {
                    let seed = labeling.signs().iter().map(|(a, s)| (*a, RingElement::integer(s.value()))).collect();
                    let f = propagate(n, t, &seed).map_err(|e| {
                        FriezeError::Contract(format!("admissible unit seed failed to propagate: {e}"))
                    })?;
                    if !ptolemy_check(&f).is_empty() {
                        return Err(FriezeError::Contract("propagated frieze fails Ptolemy".into()));
                    }
                    Ok(f)
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<AFrieze>>>>()?
        .into_iter()
        .flatten()
        .collect();
    out.par_sort();
    out.dedup();
    Ok(out)
}

/// One ear removal while peeling a frieze down to a triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub ear_vertex: usize,
    pub arc: Arc,
    pub label: RingElement,
    /// Boundary labels of the polygon before this cut, in cyclic order.
    pub boundary: Vec<(Arc, RingElement)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

/// `|a| < |b| + |c|` in complex absolute value, decided exactly.
fn strictly_shorter(a: &RingElement, b: &RingElement, c: &RingElement) -> bool {
    let (x, y, z) = (a.abs_squared(), b.abs_squared(), c.abs_squared());
    // √x < √y + √z  ⇔  x − y − z < 2√(yz)
    let d: BigInt = &x - &y - &z;
    d < BigInt::from(0) || &d * &d < BigInt::from(4) * &y * &z
}

/// Peels ears whose length-2 arc is strictly shorter than the sum of its two
/// boundary neighbours; for a ±1 boundary the peeled arcs carry ±1 and form
/// a triangulation whose sign labeling is admissible.
pub fn find_unit_triangulation(f: &AFrieze) -> Result<(Triangulation, SignLabeling, ReductionTrace)> {
    if f.ring != Ring::Z {
        return Err(FriezeError::InvalidInput("unit triangulations are read off integer friezes".into()));
    }
    if !f.boundary_labels().iter().all(RingElement::is_unit) {
        return Err(FriezeError::InvalidInput("boundary must be ±1".into()));
    }
    let n = f.n;
    let mut vs: Vec<usize> = (0..n).collect();
    let mut trace = ReductionTrace::default();
    let mut chosen = Vec::new();
    while vs.len() > 3 {
        let m = vs.len();
        let step = (0..m).find_map(|k| {
            let (u, v, w) = (vs[(k + m - 1) % m], vs[k], vs[(k + 1) % m]);
            let a = f.label(Arc::new(u, w));
            let ok = strictly_shorter(a, f.label(Arc::new(u, v)), f.label(Arc::new(v, w)));
            ok.then(|| (k, v, Arc::new(u, w), a.clone()))
        });
        let (k, v, arc, label) = step.ok_or(FriezeError::NoEar)?;
        let boundary = (0..m)
            .map(|j| {
                let a = Arc::new(vs[j], vs[(j + 1) % m]);
                (a, f.label(a).clone())
            })
            .collect();
        trace.steps.push(ReductionStep { ear_vertex: v, arc, label, boundary });
        chosen.push(arc);
        vs.remove(k);
    }
    let t = Triangulation::new(n, chosen)?;
    let mut signs = BTreeMap::new();
    for a in t.all_edges() {
        let x = f.label(a);
        if !x.is_unit() {
            return Err(FriezeError::Contract(format!("peeled arc {a} carries {x}, not ±1")));
        }
        signs.insert(a, if x.is_one() { Sign::Plus } else { Sign::Minus });
    }
    let labeling = SignLabeling::new(t.clone(), signs)?;
    if !is_admissible(&labeling) {
        return Err(FriezeError::Contract("unit triangulation signs are not admissible".into()));
    }
    Ok((t, labeling, trace))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ATag {
    Identity,
    Sigma,
}

pub fn apply_a_tag(f: &AFrieze, tag: ATag) -> Result<AFrieze> {
    match tag {
        ATag::Identity => Ok(f.clone()),
        ATag::Sigma => sigma(f),
    }
}

/// The positive frieze in the σ-orbit of `f`, and the tag mapping it back to `f`.
pub fn normalize_a(f: &AFrieze) -> Result<(AFrieze, ATag)> {
    if f.ring != Ring::Z || !f.has_unit_boundary() {
        return Err(FriezeError::InvalidInput("normalisation applies to integer type A friezes".into()));
    }
    if f.is_positive() {
        return Ok((f.clone(), ATag::Identity));
    }
    if f.n.is_multiple_of(2) {
        let g = sigma(f)?;
        if g.is_positive() {
            return Ok((g, ATag::Sigma));
        }
    }
    Err(FriezeError::Contract(format!("no positive frieze in the sign orbit on the {}-gon", f.n)))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::polygon::boundary_arcs;
    use proptest::prelude::*;

    fn z(v: i64) -> RingElement {
        RingElement::integer(v)
    }

    fn unit_seed(t: &Triangulation) -> BTreeMap<Arc, RingElement> {
        t.all_edges().into_iter().map(|a| (a, z(1))).collect()
    }

    /// The height-3 frieze: row r entry k is the arc (k−⌊(r−1)/2⌋, … + r + 1).
    pub(crate) fn hexagon_from_rows() -> AFrieze {
        let rows: [&[i64]; 3] = [&[4, 1, 2, 2, 2, 1], &[3, 1, 3, 3, 1, 3], &[2, 2, 1, 4, 1, 2]];
        let n = 6;
        let mut map = BTreeMap::new();
        for a in boundary_arcs(n) {
            map.insert(a, z(1));
        }
        for (r, row) in rows.iter().enumerate() {
            let r = r + 1;
            for (k, &v) in row.iter().enumerate() {
                let start = (k + n - (r - 1) / 2) % n;
                let arc = Arc::wrapping(start, start + r + 1, n);
                if let Some(old) = map.insert(arc, z(v)) {
                    assert_eq!(old, z(v), "rows disagree on {arc}");
                }
            }
        }
        AFrieze::from_map(n, Ring::Z, &map).unwrap()
    }

    #[test]
    fn hexagon_figure_is_a_frieze() {
        let f = hexagon_from_rows();
        assert!(ptolemy_check(&f).is_empty());
        assert!(diamond_violations(&f).is_empty());

        let mut bad: BTreeMap<Arc, RingElement> = f.labels().map(|(a, x)| (a, x.clone())).collect();
        bad.insert(Arc::new(0, 2), z(5));
        let bad = AFrieze::from_map(6, Ring::Z, &bad).unwrap();
        assert!(!ptolemy_check(&bad).is_empty());
    }

    #[test]
    fn square_frieze() {
        let mut map: BTreeMap<Arc, RingElement> = boundary_arcs(4).into_iter().map(|a| (a, z(1))).collect();
        map.insert(Arc::new(0, 2), z(1));
        map.insert(Arc::new(1, 3), z(2));
        let f = AFrieze::from_map(4, Ring::Z, &map).unwrap();
        assert!(ptolemy_check(&f).is_empty());

        let t = Triangulation::new(4, [Arc::new(0, 2)]).unwrap();
        let g = propagate(4, &t, &unit_seed(&t)).unwrap();
        assert_eq!(g, f);

        let s = sigma(&f).unwrap();
        assert_eq!(s.label(Arc::new(0, 2)), &z(-1));
        assert_eq!(s.label(Arc::new(1, 3)), &z(-2));
    }

    #[test]
    fn zero_label_is_reported() {
        let mut map: BTreeMap<Arc, RingElement> = boundary_arcs(4).into_iter().map(|a| (a, z(1))).collect();
        map.insert(Arc::new(0, 2), z(0));
        map.insert(Arc::new(1, 3), z(2));
        let f = AFrieze::from_map(4, Ring::Z, &map).unwrap();
        assert!(ptolemy_check(&f).contains(&AViolation::ZeroLabel(Arc::new(0, 2))));
    }

    #[test]
    fn propagation_quiddity_counts_triangles() {
        let t = Triangulation::new(6, [Arc::new(0, 2), Arc::new(2, 5), Arc::new(3, 5)]).unwrap();
        let f = propagate(6, &t, &unit_seed(&t)).unwrap();
        let q: Vec<i64> = f.quiddity().iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(q, vec![2, 1, 3, 2, 1, 3]);
        assert_eq!(q.iter().sum::<i64>(), 12);
        let counts: Vec<i64> = t.triangle_counts().into_iter().map(|c| c as i64).collect();
        assert_eq!(q, counts);
    }

    #[test]
    fn propagation_rejects_non_integral_seed() {
        let t = Triangulation::fan(5).unwrap();
        let mut seed = unit_seed(&t);
        seed.insert(Arc::new(0, 3), z(3));
        assert!(matches!(propagate(5, &t, &seed), Err(FriezeError::NotIntegral { .. })));
    }

    #[test]
    fn propagation_rejects_zero_seed_and_partial_seed() {
        let t = Triangulation::fan(5).unwrap();
        let mut seed = unit_seed(&t);
        seed.insert(Arc::new(0, 3), z(0));
        assert!(matches!(propagate(5, &t, &seed), Err(FriezeError::ZeroLabel { .. })));
        let mut seed = unit_seed(&t);
        seed.remove(&Arc::new(0, 3));
        assert!(matches!(propagate(5, &t, &seed), Err(FriezeError::InvalidInput(_))));
    }

    #[test]
    fn sigma_on_hexagon() {
        let f = hexagon_from_rows();
        let s = sigma(&f).unwrap();
        let row1: Vec<i64> = (0..6).map(|k| s.label(Arc::wrapping(k, k + 2, 6)).to_i64().unwrap()).collect();
        assert_eq!(row1, vec![-4, -1, -2, -2, -2, -1]);
        let row2: Vec<i64> = (0..6).map(|k| s.label(Arc::wrapping(k, k + 3, 6)).to_i64().unwrap()).collect();
        assert_eq!(row2, vec![3, 1, 3, 3, 1, 3]);
        assert!(ptolemy_check(&s).is_empty());
        assert_eq!(sigma(&s).unwrap(), f);
        let odd = enumerate_nonzero_a(5, Ring::Z).unwrap();
        assert!(matches!(sigma(&odd[0]), Err(FriezeError::ParityUndefined(5))));
    }

    #[test]
    fn small_enumerations() {
        let five = enumerate_nonzero_a(5, Ring::Z).unwrap();
        assert_eq!(five.len(), 5);
        assert!(five.iter().all(AFrieze::is_positive));

        let six = enumerate_nonzero_a(6, Ring::Z).unwrap();
        assert_eq!(six.len(), 28);
        assert_eq!(six.iter().filter(|f| f.is_positive()).count(), 14);

        let four = enumerate_nonzero_a(4, Ring::Z).unwrap();
        let mut diagonals: Vec<(i64, i64)> = four
            .iter()
            .map(|f| (f.label(Arc::new(0, 2)).to_i64().unwrap(), f.label(Arc::new(1, 3)).to_i64().unwrap()))
            .collect();
        diagonals.sort();
        assert_eq!(diagonals, vec![(-2, -1), (-1, -2), (1, 2), (2, 1)]);

        assert!(enumerate_nonzero_a(3, Ring::Z).is_err());
        assert!(enumerate_nonzero_a(5, Ring::Zi).is_err());
    }

    #[test]
    fn unit_triangulation_of_hexagon() {
        let f = hexagon_from_rows();
        let (t, l, trace) = find_unit_triangulation(&f).unwrap();
        let ears: Vec<usize> = trace.steps.iter().map(|s| s.ear_vertex).collect();
        assert!(ears.contains(&0) && ears.contains(&2));
        assert!(l.signs().values().all(|s| *s == Sign::Plus));
        for a in t.internal() {
            assert!(f.label(*a).is_one());
        }

        let (t2, l2, _) = find_unit_triangulation(&sigma(&f).unwrap()).unwrap();
        assert_eq!(t2, t);
        for (a, s) in l2.signs() {
            let expect = if a.span() % 2 == 0 { Sign::Minus } else { Sign::Plus };
            assert_eq!(*s, expect);
        }
    }

    #[test]
    fn positive_friezes_peel_to_their_ones() {
        for f in enumerate_nonzero_a(7, Ring::Z).unwrap() {
            let (t, _, trace) = find_unit_triangulation(&f).unwrap();
            let ones: Vec<Arc> = f.labels().filter(|(a, x)| !a.is_boundary(7) && x.is_one()).map(|(a, _)| a).collect();
            assert_eq!(t.internal(), ones.as_slice());
            assert_eq!(trace.steps.len(), 4);
        }
    }

    #[test]
    fn no_ear_on_corrupted_input() {
        // all arcs 5: not a frieze and no length-2 arc is short
        let f = AFrieze::from_values(
            5,
            Ring::Z,
            all_arcs(5).into_iter().map(|a| if a.is_boundary(5) { z(1) } else { z(5) }).collect(),
        )
        .unwrap();
        assert!(matches!(find_unit_triangulation(&f), Err(FriezeError::NoEar)));
    }

    #[test]
    fn pentagon_with_forced_negative_boundary() {
        // the negated pentagon figure: boundary (1,1,1,1) on the drawn sides
        let mut map = BTreeMap::new();
        for k in 0..4 {
            map.insert(Arc::new(k, k + 1), z(1));
        }
        map.insert(Arc::new(0, 2), z(-1));
        map.insert(Arc::new(2, 4), z(-2));
        map.insert(Arc::new(1, 3), z(-2));
        map.insert(Arc::new(0, 3), z(1));
        map.insert(Arc::new(1, 4), z(3));
        // Ptolemy on (0,2,3,4): (0,3)(2,4) = (0,2)(3,4) + (2,3)(0,4)
        let forced = (z(1) * z(-2) - z(-1) * z(1)).to_i64().unwrap();
        assert_eq!(forced, -1);
        map.insert(Arc::new(0, 4), z(forced));
        let f = AFrieze::from_map(5, Ring::Z, &map).unwrap();
        assert!(ptolemy_check(&f).is_empty());
        let b: Vec<i64> = f.boundary_labels().iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(b, vec![1, 1, 1, 1, -1]);
        let (_, l, _) = find_unit_triangulation(&f).unwrap();
        assert!(is_admissible(&l));
    }

    #[test]
    fn normalisation() {
        let six = enumerate_nonzero_a(6, Ring::Z).unwrap();
        for f in &six {
            let (p, tag) = normalize_a(f).unwrap();
            assert!(p.is_positive());
            assert_eq!(&apply_a_tag(&p, tag).unwrap(), f);
            assert_eq!(tag == ATag::Identity, f.is_positive());
        }
        let five = &enumerate_nonzero_a(5, Ring::Z).unwrap()[0];
        let mut bad: BTreeMap<Arc, RingElement> = five.labels().map(|(a, x)| (a, x.clone())).collect();
        bad.insert(Arc::new(0, 2), -five.label(Arc::new(0, 2)));
        let bad = AFrieze::from_map(5, Ring::Z, &bad).unwrap();
        assert!(matches!(normalize_a(&bad), Err(FriezeError::Contract(_))));
    }

    #[test]
    fn json_round_trip() {
        for f in enumerate_nonzero_a(6, Ring::Z).unwrap() {
            assert_eq!(AFrieze::from_json(&f.to_json()).unwrap(), f);
        }
    }

    proptest! {
        #[test]
        fn propagation_is_route_independent(n in 4usize..9, pick in any::<prop::sample::Index>(), key in any::<u64>()) {
            let ts = enumerate_triangulations(n).unwrap();
            let t = &ts[pick.index(ts.len())];
            let seed = unit_seed(t);
            let base = propagate(n, t, &seed).unwrap();
            let len = ptolemy_system(n).relations().len();
            let mut order: Vec<usize> = (0..len).collect();
            // deterministic shuffle keyed by `key`
            let mut state = key | 1;
            for i in (1..len).rev() {
                state ^= state << 13; state ^= state >> 7; state ^= state << 17;
                order.swap(i, (state % (i as u64 + 1)) as usize);
            }
            prop_assert_eq!(propagate_in_order(n, t, &seed, &order).unwrap(), base);
        }
    }
}
