//! ±1 labelings of polygon triangulations and their admissibility.
//!
//! A labeling assigns a sign to every boundary and internal arc of a
//! triangulation. It is admissible when every simple 4-cycle of arcs has
//! sign product +1. For a fixed boundary state the admissible extensions are
//! built by cutting ears, and their number is 1 (n odd), 2 (n even with
//! boundary product +1) or 0 (n even with boundary product −1).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Neg};

use serde::Deserialize;

use crate::error::{FriezeError, Result};
use crate::polygon::{boundary_arcs, four_cycles, Arc, Triangulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

fn product(signs: impl IntoIterator<Item = Sign>) -> Sign {
    signs.into_iter().fold(Sign::Plus, |a, b| a * b)
}

/// Boundary labels; entry `k` sits on the boundary arc joining `k` and `k+1 (mod n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryState(pub Vec<Sign>);

impl BoundaryState {
    pub fn all_plus(n: usize) -> Self {
        BoundaryState(vec![Sign::Plus; n])
    }

    /// The `bits`-th state in binary order: bit `k` set means `Minus` on arc k.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        BoundaryState((0..n).map(|k| if bits >> k & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn product(&self) -> Sign {
        product(self.0.iter().copied())
    }

    pub fn arc_sign(&self, arc: Arc) -> Option<Sign> {
        let n = self.0.len();
        if !arc.is_boundary(n) {
            return None;
        }
        let k = if arc.from == 0 && arc.to == n - 1 { n - 1 } else { arc.from };
        Some(self.0[k])
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(self.0.iter().map(|s| s.value()).collect::<Vec<_>>())
    }
}

/// A ±1 label on every arc (boundary and internal) of a triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignLabeling {
    triangulation: Triangulation,
    signs: BTreeMap<Arc, Sign>,
}

impl SignLabeling {
    pub fn new(triangulation: Triangulation, signs: BTreeMap<Arc, Sign>) -> Result<Self> {
        let edges = triangulation.all_edges();
        if signs.len() != edges.len() || edges.iter().any(|a| !signs.contains_key(a)) {
            return Err(FriezeError::InvalidInput(
                "sign labeling must cover exactly the boundary and internal arcs".into(),
            ));
        }
        Ok(SignLabeling { triangulation, signs })
    }

    pub fn all_plus(triangulation: Triangulation) -> Self {
        let signs = triangulation.all_edges().into_iter().map(|a| (a, Sign::Plus)).collect();
        SignLabeling { triangulation, signs }
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.triangulation
    }

    pub fn signs(&self) -> &BTreeMap<Arc, Sign> {
        &self.signs
    }

    pub fn sign(&self, arc: Arc) -> Option<Sign> {
        self.signs.get(&arc).copied()
    }

    pub fn boundary_state(&self) -> BoundaryState {
        let n = self.triangulation.n();
        BoundaryState((0..n).map(|k| self.signs[&Arc::wrapping(k, k + 1, n)]).collect())
    }

    /// Signs on internal arcs in sorted arc order.
    pub fn internal_signs(&self) -> Vec<Sign> {
        self.triangulation.internal().iter().map(|a| self.signs[a]).collect()
    }

    /// Same labeling with every vertex index shifted by `shift (mod n)`.
    pub fn rotated(&self, shift: usize) -> Self {
        let n = self.triangulation.n();
        SignLabeling {
            triangulation: self.triangulation.rotated(shift),
            signs: self.signs.iter().map(|(a, s)| (a.rotated(shift, n), *s)).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "triangulation": self.triangulation.to_json(),
            "signs": self.signs.iter()
                .map(|(a, s)| serde_json::json!({"arc": a.to_json(), "sign": s.value()}))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Entry {
            arc: serde_json::Value,
            sign: i64,
        }
        #[derive(Deserialize)]
        struct Raw {
            triangulation: serde_json::Value,
            signs: Vec<Entry>,
        }
        let raw: Raw = serde_json::from_value(v.clone())
            .map_err(|e| FriezeError::InvalidInput(format!("sign labeling: {e}")))?;
        let t = Triangulation::from_json(&raw.triangulation)?;
        let mut signs = BTreeMap::new();
        for e in raw.signs {
            let s = Sign::from_i64(e.sign)
                .ok_or_else(|| FriezeError::InvalidInput(format!("sign must be ±1, got {}", e.sign)))?;
            signs.insert(Arc::from_json(&e.arc)?, s);
        }
        SignLabeling::new(t, signs)
    }
}

/// Every 4-cycle has sign product +1.
pub fn is_admissible(l: &SignLabeling) -> bool {
    four_cycles(&l.triangulation)
        .iter()
        .all(|cycle| product(cycle.iter().map(|a| l.signs[a])) == Sign::Plus)
}

/// Negates every arc of even span. Requires even n.
pub fn negate_even_arcs(l: &SignLabeling) -> Result<SignLabeling> {
    let n = l.triangulation.n();
    let mut signs = BTreeMap::new();
    for (&a, &s) in &l.signs {
        signs.insert(a, if a.is_even(n)? { -s } else { s });
    }
    Ok(SignLabeling { triangulation: l.triangulation.clone(), signs })
}

/// All admissible labelings of `t` restricting to the boundary state `b`.
///
/// Built by cutting the lexicographically smallest ear and recursing; the
/// result count is checked against the 0/1/2 law and every result is
/// re-checked for admissibility. For even n the two extensions are ordered
/// with `Plus` before `Minus` on the first internal arc where they differ.
pub fn extend_boundary(t: &Triangulation, b: &BoundaryState) -> Result<Vec<SignLabeling>> {
    let n = t.n();
    if b.len() != n {
        return Err(FriezeError::LengthMismatch { expected: n, got: b.len() });
    }
    let mut known: BTreeMap<Arc, Sign> = BTreeMap::new();
    for a in boundary_arcs(n) {
        known.insert(a, b.arc_sign(a).expect("boundary arc"));
    }
    let vertices: Vec<usize> = (0..n).collect();
    let internal: Vec<Arc> = t.internal().to_vec();
    let mut out = Vec::new();
    for assignment in extend_polygon(&vertices, &internal, &mut known) {
        let mut signs = known.clone();
        signs.extend(assignment);
        out.push(SignLabeling { triangulation: t.clone(), signs });
    }
    out.sort_by_key(|l| l.internal_signs());

    let expected = match (n % 2, b.product()) {
        (1, _) => 1,
        (_, Sign::Plus) => 2,
        (_, Sign::Minus) => 0,
    };
    if out.len() != expected || !out.iter().all(is_admissible) {
        return Err(FriezeError::Contract(format!(
            "boundary extension on the {n}-gon produced {} labelings, expected {expected} admissible",
            out.len()
        )));
    }
    if expected == 2 && negate_even_arcs(&out[0])? != out[1] {
        return Err(FriezeError::Contract("the two extensions are not related by even-arc negation".into()));
    }
    Ok(out)
}

/// Extensions of the sign data in `known` (which holds at least the boundary of
/// the polygon on `vs`) to `internal`, the internal arcs of that polygon.
fn extend_polygon(vs: &[usize], internal: &[Arc], known: &mut BTreeMap<Arc, Sign>) -> Vec<Vec<(Arc, Sign)>> {
    let m = vs.len();
    let side = |k: usize| Arc::new(vs[k % m], vs[(k + 1) % m]);
    match m {
        3 => return vec![Vec::new()],
        4 => {
            let diag = internal[0];
            if product((0..4).map(|k| known[&side(k)])) == Sign::Plus {
                return vec![vec![(diag, Sign::Plus)], vec![(diag, Sign::Minus)]];
            }
            return Vec::new();
        }
        _ => {}
    }

    // smallest ear: an internal arc joining vs[k-1] and vs[k+1]
    let (ear_arc, k) = internal
        .iter()
        .filter_map(|&a| {
            (0..m)
                .find(|&k| a == Arc::new(vs[(k + m - 1) % m], vs[(k + 1) % m]))
                .map(|k| (a, k))
        })
        .min()
        .expect("a triangulated polygon with more than 3 sides has an ear");
    let b1 = known[&side(k + m - 1)];
    let b2 = known[&side(k)];

    let sub_vs: Vec<usize> = vs.iter().copied().filter(|&v| v != vs[k]).collect();
    let sub_internal: Vec<Arc> = internal.iter().copied().filter(|&a| a != ear_arc).collect();

    // d, e: the other two sides of the triangle across the ear arc
    let is_edge = |a: Arc| {
        sub_internal.contains(&a) || {
            let pos = |v| sub_vs.iter().position(|&x| x == v).expect("vertex in sub-polygon");
            let (i, j) = (pos(a.from), pos(a.to));
            (i + 1) % (m - 1) == j || (j + 1) % (m - 1) == i
        }
    };
    let apex = sub_vs
        .iter()
        .copied()
        .find(|&w| !ear_arc.has_endpoint(w) && is_edge(Arc::new(ear_arc.from, w)) && is_edge(Arc::new(w, ear_arc.to)))
        .expect("the ear arc borders a triangle on its other side");
    let (d, e) = (Arc::new(ear_arc.from, apex), Arc::new(apex, ear_arc.to));

    let candidates: Vec<Sign> = if m % 2 == 1 {
        // the even sub-polygon needs boundary product +1
        let others = (0..m).filter(|&j| j != k && j != (k + m - 1) % m).map(|j| known[&side(j)]);
        vec![product(others)]
    } else {
        vec![Sign::Plus, Sign::Minus]
    };

    let mut out = Vec::new();
    for c in candidates {
        known.insert(ear_arc, c);
        for mut sub in extend_polygon(&sub_vs, &sub_internal, known) {
            let lookup = |a: Arc| sub.iter().find(|(x, _)| *x == a).map(|p| p.1).or_else(|| known.get(&a).copied());
            let (sd, se) = (lookup(d).expect("d labelled"), lookup(e).expect("e labelled"));
            if sd * se == b1 * b2 {
                sub.push((ear_arc, c));
                out.push(sub);
            }
        }
        known.remove(&ear_arc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::enumerate_triangulations;
    use proptest::prelude::*;

    fn figure_one() -> SignLabeling {
        let t = Triangulation::new(6, [Arc::new(0, 2), Arc::new(2, 5), Arc::new(3, 5)]).unwrap();
        let b = [-1, 1, 1, -1, 1, 1];
        let mut signs = BTreeMap::new();
        for (k, s) in b.iter().enumerate() {
            signs.insert(Arc::wrapping(k, k + 1, 6), Sign::from_i64(*s).unwrap());
        }
        signs.insert(Arc::new(0, 2), Sign::Plus);
        signs.insert(Arc::new(2, 5), Sign::Minus);
        signs.insert(Arc::new(3, 5), Sign::Plus);
        SignLabeling::new(t, signs).unwrap()
    }

    /// Counts admissible internal sign choices directly.
    fn brute_force_count(t: &Triangulation, b: &BoundaryState) -> usize {
        let k = t.internal().len();
        (0u64..1 << k)
            .filter(|bits| {
                let mut signs = BTreeMap::new();
                for a in boundary_arcs(t.n()) {
                    signs.insert(a, b.arc_sign(a).unwrap());
                }
                for (i, &a) in t.internal().iter().enumerate() {
                    signs.insert(a, if bits >> i & 1 == 1 { Sign::Minus } else { Sign::Plus });
                }
                is_admissible(&SignLabeling::new(t.clone(), signs).unwrap())
            })
            .count()
    }

    #[test]
    fn figure_one_is_admissible() {
        let l = figure_one();
        assert!(is_admissible(&l));
        assert_eq!(l.boundary_state().0.iter().map(|s| s.value()).collect::<Vec<_>>(), vec![-1, 1, 1, -1, 1, 1]);

        let mut broken = l.signs().clone();
        broken.insert(Arc::new(0, 2), Sign::Minus);
        let broken = SignLabeling::new(l.triangulation().clone(), broken).unwrap();
        assert!(!is_admissible(&broken));
    }

    #[test]
    fn all_plus_is_admissible() {
        for t in enumerate_triangulations(7).unwrap() {
            assert!(is_admissible(&SignLabeling::all_plus(t)));
        }
    }

    #[test]
    fn negation_examples() {
        let l = figure_one();
        let m = negate_even_arcs(&l).unwrap();
        assert_eq!(m.boundary_state(), l.boundary_state());
        assert_eq!(m.sign(Arc::new(0, 2)), Some(Sign::Minus));
        assert_eq!(m.sign(Arc::new(2, 5)), Some(Sign::Minus));
        assert_eq!(m.sign(Arc::new(3, 5)), Some(Sign::Minus));
        assert!(is_admissible(&m));
        assert_eq!(negate_even_arcs(&m).unwrap(), l);

        let fan = Triangulation::fan(6).unwrap();
        let f = negate_even_arcs(&SignLabeling::all_plus(fan)).unwrap();
        assert_eq!(f.sign(Arc::new(0, 2)), Some(Sign::Minus));
        assert_eq!(f.sign(Arc::new(0, 3)), Some(Sign::Plus));
        assert_eq!(f.sign(Arc::new(0, 4)), Some(Sign::Minus));

        let odd = SignLabeling::all_plus(Triangulation::fan(5).unwrap());
        assert!(matches!(negate_even_arcs(&odd), Err(FriezeError::ParityUndefined(5))));
    }

    #[test]
    fn extension_examples() {
        for t in enumerate_triangulations(5).unwrap() {
            for bits in 0..32 {
                assert_eq!(extend_boundary(&t, &BoundaryState::from_bits(5, bits)).unwrap().len(), 1);
            }
        }
        let t = figure_one().triangulation().clone();
        let odd_product = BoundaryState::from_bits(6, 0b000001);
        assert!(extend_boundary(&t, &odd_product).unwrap().is_empty());

        let ext = extend_boundary(&t, &BoundaryState::all_plus(6)).unwrap();
        assert_eq!(ext.len(), 2);
        assert_eq!(ext[0], SignLabeling::all_plus(t.clone()));
        assert_eq!(ext[1], negate_even_arcs(&ext[0]).unwrap());

        let fig = figure_one();
        let ext = extend_boundary(&t, &fig.boundary_state()).unwrap();
        assert!(ext.contains(&fig));

        assert!(matches!(
            extend_boundary(&t, &BoundaryState::all_plus(5)),
            Err(FriezeError::LengthMismatch { expected: 6, got: 5 })
        ));
    }

    #[test]
    fn extension_matches_brute_force() {
        for n in 3..=8 {
            for t in enumerate_triangulations(n).unwrap() {
                for bits in 0..1u64 << n {
                    let b = BoundaryState::from_bits(n, bits);
                    let ext = extend_boundary(&t, &b).unwrap();
                    assert_eq!(ext.len(), brute_force_count(&t, &b), "n={n} t={t:?} b={bits:b}");
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let l = figure_one();
        assert_eq!(SignLabeling::from_json(&l.to_json()).unwrap(), l);
    }

    proptest! {
        #[test]
        fn admissibility_is_rotation_invariant(n in 4usize..10, pick in any::<prop::sample::Index>(), bits in any::<u64>(), shift in 0usize..10) {
            let ts = enumerate_triangulations(n).unwrap();
            let t = ts[pick.index(ts.len())].clone();
            let mut signs = BTreeMap::new();
            for (i, a) in t.all_edges().into_iter().enumerate() {
                signs.insert(a, if bits >> (i % 64) & 1 == 1 { Sign::Minus } else { Sign::Plus });
            }
            let l = SignLabeling::new(t, signs).unwrap();
            prop_assert_eq!(is_admissible(&l), is_admissible(&l.rotated(shift)));
        }

        #[test]
        fn even_negation_is_fixed_point_free(n in (2usize..5).prop_map(|h| 2 * h), pick in any::<prop::sample::Index>(), bits in any::<u64>()) {
            let ts = enumerate_triangulations(n).unwrap();
            let t = ts[pick.index(ts.len())].clone();
            prop_assume!(t.internal().iter().any(|a| a.span() % 2 == 0));
            let b = BoundaryState::from_bits(n, bits & ((1 << n) - 1));
            for l in extend_boundary(&t, &b).unwrap() {
                let m = negate_even_arcs(&l).unwrap();
                prop_assert!(is_admissible(&m));
                prop_assert_ne!(m, l);
            }
        }
    }
}
