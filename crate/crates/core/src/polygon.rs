//! Arcs, triangulations, flips and 4-cycles of a convex n-gon with vertices
//! `0..n` in cyclic order.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FriezeError, Result};

/// A chord or boundary segment of the n-gon, normalised so `from < to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
}

impl Arc {
    /// Normalises the endpoint order. Panics on a degenerate arc.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "arc endpoints must differ");
        if a < b {
            Arc { from: a, to: b }
        } else {
            Arc { from: b, to: a }
        }
    }

    /// Arc between two vertex indices taken mod n.
    pub fn wrapping(a: usize, b: usize, n: usize) -> Self {
        Arc::new(a % n, b % n)
    }

    pub fn is_valid(&self, n: usize) -> bool {
        self.from < self.to && self.to < n
    }

    pub fn is_boundary(&self, n: usize) -> bool {
        self.to - self.from == 1 || (self.from == 0 && self.to == n - 1)
    }

    pub fn span(&self) -> usize {
        self.to - self.from
    }

    /// Length parity of the arc; well defined only for even n.
    pub fn is_even(&self, n: usize) -> Result<bool> {
        if n % 2 == 1 {
            return Err(FriezeError::ParityUndefined(n));
        }
        Ok(self.span().is_multiple_of(2))
    }

    pub fn has_endpoint(&self, v: usize) -> bool {
        self.from == v || self.to == v
    }

    /// Image under the rotation `v ↦ v + shift (mod n)`.
    pub fn rotated(&self, shift: usize, n: usize) -> Self {
        Arc::wrapping(self.from + shift, self.to + shift, n)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"kind": "chord", "from": self.from, "to": self.to})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            kind: String,
            from: usize,
            to: usize,
        }
        let raw: Raw = serde_json::from_value(v.clone())
            .map_err(|e| FriezeError::InvalidInput(format!("arc: {e}")))?;
        if raw.kind != "chord" || raw.from == raw.to {
            return Err(FriezeError::InvalidInput(format!("bad polygon arc {v}")));
        }
        Ok(Arc::new(raw.from, raw.to))
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.from, self.to)
    }
}

pub fn span(arc: Arc, n: usize) -> usize {
    debug_assert!(arc.is_valid(n));
    arc.span()
}

/// True iff the endpoints strictly interleave around the circle.
pub fn arcs_cross(a: Arc, b: Arc) -> bool {
    let inside = |v: usize| a.from < v && v < a.to;
    if a.has_endpoint(b.from) || a.has_endpoint(b.to) {
        return false;
    }
    inside(b.from) != inside(b.to)
}

/// All arcs of the n-gon (boundary included) in lexicographic order.
pub fn all_arcs(n: usize) -> Vec<Arc> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(Arc { from: i, to: j });
        }
    }
    out
}

pub fn boundary_arcs(n: usize) -> Vec<Arc> {
    all_arcs(n).into_iter().filter(|a| a.is_boundary(n)).collect()
}

pub fn internal_arcs(n: usize) -> Vec<Arc> {
    all_arcs(n).into_iter().filter(|a| !a.is_boundary(n)).collect()
}

/// Position of an arc in [`all_arcs`] order.
pub fn arc_index(arc: Arc, n: usize) -> usize {
    // arcs starting before `from`: sum_{i<from} (n-1-i)
    let f = arc.from;
    f * (2 * n - f - 1) / 2 + (arc.to - f - 1)
}

/// Four vertices `i<j<k<l` with their sides and diagonals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quadrilateral {
    pub vertices: [usize; 4],
}

impl Quadrilateral {
    pub fn new(mut vertices: [usize; 4]) -> Self {
        vertices.sort_unstable();
        assert!(vertices.windows(2).all(|w| w[0] < w[1]), "quadrilateral vertices must differ");
        Quadrilateral { vertices }
    }

    /// Sides in cyclic order `(i,j), (j,k), (k,l), (i,l)`.
    pub fn sides(&self) -> [Arc; 4] {
        let [i, j, k, l] = self.vertices;
        [Arc::new(i, j), Arc::new(j, k), Arc::new(k, l), Arc::new(i, l)]
    }

    /// Diagonals `(i,k), (j,l)`.
    pub fn diagonals(&self) -> [Arc; 2] {
        let [i, j, k, l] = self.vertices;
        [Arc::new(i, k), Arc::new(j, l)]
    }
}

impl fmt::Display for Quadrilateral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k, l] = self.vertices;
        write!(f, "({i},{j},{k},{l})")
    }
}

/// Every quadrilateral of the n-gon in lexicographic vertex order.
pub fn all_quadrilaterals(n: usize) -> Vec<Quadrilateral> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    out.push(Quadrilateral { vertices: [i, j, k, l] });
                }
            }
        }
    }
    out
}

/// A maximal set of pairwise non-crossing internal arcs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangulation {
    n: usize,
    internal: Vec<Arc>,
}

impl Triangulation {
    /// Validates and canonicalises (sorts) the arc list.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        if n < 3 {
            return Err(FriezeError::InvalidInput(format!("polygon needs n >= 3, got {n}")));
        }
        let set: BTreeSet<Arc> = arcs.into_iter().collect();
        let internal: Vec<Arc> = set.into_iter().collect();
        for a in &internal {
            if !a.is_valid(n) || a.is_boundary(n) {
                return Err(FriezeError::InvalidInput(format!("{a} is not an internal arc of the {n}-gon")));
            }
        }
        if internal.len() != n - 3 {
            return Err(FriezeError::InvalidInput(format!(
                "triangulation of the {n}-gon needs {} arcs, got {}",
                n - 3,
                internal.len()
            )));
        }
        for (x, a) in internal.iter().enumerate() {
            for b in &internal[x + 1..] {
                if arcs_cross(*a, *b) {
                    return Err(FriezeError::InvalidInput(format!("{a} crosses {b}")));
                }
            }
        }
        Ok(Triangulation { n, internal })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn internal(&self) -> &[Arc] {
        &self.internal
    }

    pub fn contains(&self, arc: Arc) -> bool {
        self.internal.binary_search(&arc).is_ok()
    }

    /// Boundary arcs followed by internal arcs, each sorted.
    pub fn all_edges(&self) -> Vec<Arc> {
        let mut out = boundary_arcs(self.n);
        out.extend_from_slice(&self.internal);
        out
    }

    fn has_edge(&self, a: usize, b: usize) -> bool {
        let arc = Arc::new(a, b);
        arc.is_boundary(self.n) || self.contains(arc)
    }

    /// The `n − 2` triangles as sorted vertex triples.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !self.has_edge(i, j) {
                    continue;
                }
                for k in j + 1..n {
                    if self.has_edge(j, k) && self.has_edge(i, k) {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    /// Number of triangles incident to each vertex.
    pub fn triangle_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n];
        for t in self.triangles() {
            for v in t {
                counts[v] += 1;
            }
        }
        counts
    }

    /// Relabels vertices by `v ↦ v + shift (mod n)`.
    pub fn rotated(&self, shift: usize) -> Self {
        let arcs = self.internal.iter().map(|a| a.rotated(shift, self.n));
        Triangulation::new(self.n, arcs).expect("rotation preserves triangulations")
    }

    /// The fan of all internal arcs at vertex 0.
    pub fn fan(n: usize) -> Result<Self> {
        Triangulation::new(n, (2..n.saturating_sub(1)).map(|j| Arc::new(0, j)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "arcs": self.internal.iter().map(Arc::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize, Serialize)]
        struct Raw {
            n: usize,
            arcs: Vec<serde_json::Value>,
        }
        let raw: Raw = serde_json::from_value(v.clone())
            .map_err(|e| FriezeError::InvalidInput(format!("triangulation: {e}")))?;
        let arcs = raw.arcs.iter().map(Arc::from_json).collect::<Result<Vec<_>>>()?;
        Triangulation::new(raw.n, arcs)
    }
}

/// All triangulations of the n-gon in canonical (sorted arc list) order.
pub fn enumerate_triangulations(n: usize) -> Result<Vec<Triangulation>> {
    if n < 3 {
        return Err(FriezeError::InvalidInput(format!("polygon needs n >= 3, got {n}")));
    }
    let vertices: Vec<usize> = (0..n).collect();
    let mut out: Vec<Triangulation> = triangulate(&vertices)
        .into_iter()
        .map(|mut arcs| {
            arcs.sort_unstable();
            Triangulation { n, internal: arcs }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Triangulations of the convex polygon on `vs` (in cyclic order), as lists of
/// internal arcs. The edge `vs[0]–vs[last]` is treated as a side.
fn triangulate(vs: &[usize]) -> Vec<Vec<Arc>> {
    let m = vs.len();
    if m < 3 {
        return vec![Vec::new()];
    }
    let (first, last) = (vs[0], vs[m - 1]);
    let mut out = Vec::new();
    for apex in 1..m - 1 {
        let left = &vs[..=apex];
        let right = &vs[apex..];
        let lefts = triangulate(left);
        let rights = triangulate(right);
        for l in &lefts {
            for r in &rights {
                let mut arcs = Vec::with_capacity(m - 3);
                if apex > 1 {
                    arcs.push(Arc::new(first, vs[apex]));
                }
                if apex < m - 2 {
                    arcs.push(Arc::new(vs[apex], last));
                }
                arcs.extend_from_slice(l);
                arcs.extend_from_slice(r);
                out.push(arcs);
            }
        }
    }
    out
}

/// Replaces `arc` by the other diagonal of its surrounding quadrilateral.
pub fn flip(t: &Triangulation, arc: Arc) -> Result<(Triangulation, Quadrilateral)> {
    if !t.contains(arc) {
        return Err(FriezeError::NotFlippable(arc.to_string()));
    }
    let n = t.n;
    let apex = |mut range: Box<dyn Iterator<Item = usize>>| {
        range
            .find(|&k| t.has_edge(arc.from, k) && t.has_edge(k, arc.to))
            .expect("every internal arc borders two triangles")
    };
    let inner = apex(Box::new(arc.from + 1..arc.to));
    let outer = apex(Box::new((0..arc.from).chain(arc.to + 1..n)));
    let quad = Quadrilateral::new([arc.from, arc.to, inner, outer]);
    let new_arc = Arc::new(inner, outer);
    let arcs = t.internal.iter().map(|&a| if a == arc { new_arc } else { a });
    let flipped = Triangulation::new(n, arcs).expect("a flip yields a triangulation");
    Ok((flipped, quad))
}

/// All simple 4-cycles of the graph `boundary ∪ internal`, each as four arcs
/// in cyclic order starting from the smallest vertex.
pub fn four_cycles(t: &Triangulation) -> Vec<[Arc; 4]> {
    let n = t.n;
    let edges: HashSet<Arc> = t.all_edges().into_iter().collect();
    let has = |a: usize, b: usize| edges.contains(&Arc::new(a, b));
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    // the three cyclic orders of {a,b,c,d}
                    for [p, q, r, s] in [[a, b, c, d], [a, b, d, c], [a, c, b, d]] {
                        if has(p, q) && has(q, r) && has(r, s) && has(s, p) {
                            out.push([Arc::new(p, q), Arc::new(q, r), Arc::new(r, s), Arc::new(s, p)]);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Breadth-first connectivity of the flip graph; returns the number of
/// triangulations reached from the first one.
pub fn flip_graph_reach(triangulations: &[Triangulation]) -> usize {
    let Some(start) = triangulations.first() else {
        return 0;
    };
    let mut seen: HashSet<Triangulation> = HashSet::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start.clone());
    while let Some(t) = queue.pop_front() {
        for &a in t.internal() {
            let (u, _) = flip(&t, a).expect("internal arcs flip");
            if seen.insert(u.clone()) {
                queue.push_back(u);
            }
        }
    }
    seen.len()
}

pub fn catalan(k: u64) -> u64 {
    // C(k) = binom(2k, k) / (k + 1)
    binomial(2 * k, k) / (k + 1)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn catalan_by_recursion(k: usize) -> u64 {
        let mut c = vec![1u64; k + 1];
        for m in 1..=k {
            c[m] = (0..m).map(|i| c[i] * c[m - 1 - i]).sum();
        }
        c[k]
    }

    #[test]
    fn spans() {
        assert_eq!(span(Arc::new(0, 2), 6), 2);
        assert_eq!(span(Arc::new(0, 3), 6), 3);
        assert_eq!(span(Arc::new(1, 4), 5), 3);
        assert!(Arc::new(1, 4).is_even(5).is_err());
        assert!(!Arc::new(0, 3).is_even(6).unwrap());
    }

    #[test]
    fn crossing_examples() {
        assert!(arcs_cross(Arc::new(0, 2), Arc::new(1, 3)));
        assert!(!arcs_cross(Arc::new(0, 2), Arc::new(2, 4)));
        assert!(!arcs_cross(Arc::new(0, 3), Arc::new(1, 2)));
    }

    #[test]
    fn triangulation_counts() {
        assert_eq!(enumerate_triangulations(4).unwrap().len(), 2);
        assert_eq!(enumerate_triangulations(5).unwrap().len(), 5);
        assert_eq!(enumerate_triangulations(6).unwrap().len(), catalan_by_recursion(4) as usize);
        assert_eq!(catalan_by_recursion(4), 14);
        for n in 3..=12 {
            let ts = enumerate_triangulations(n).unwrap();
            assert_eq!(ts.len() as u64, catalan_by_recursion(n - 2), "n = {n}");
            assert_eq!(catalan(n as u64 - 2), catalan_by_recursion(n - 2));
            let unique: HashSet<_> = ts.iter().collect();
            assert_eq!(unique.len(), ts.len());
            assert!(ts.windows(2).all(|w| w[0] < w[1]));
        }
        assert!(enumerate_triangulations(2).is_err());
    }

    #[test]
    fn flip_examples() {
        let square = Triangulation::new(4, [Arc::new(0, 2)]).unwrap();
        let (t, q) = flip(&square, Arc::new(0, 2)).unwrap();
        assert_eq!(t.internal(), &[Arc::new(1, 3)]);
        assert_eq!(q.vertices, [0, 1, 2, 3]);

        let fan = Triangulation::new(5, [Arc::new(0, 2), Arc::new(0, 3)]).unwrap();
        let (t, q) = flip(&fan, Arc::new(0, 2)).unwrap();
        assert_eq!(t.internal(), &[Arc::new(0, 3), Arc::new(1, 3)]);
        assert_eq!(q.vertices, [0, 1, 2, 3]);

        assert!(matches!(flip(&fan, Arc::new(0, 1)), Err(FriezeError::NotFlippable(_))));
    }

    #[test]
    fn four_cycle_examples() {
        let hex = Triangulation::new(6, [Arc::new(0, 2), Arc::new(2, 5), Arc::new(3, 5)]).unwrap();
        let cycles = four_cycles(&hex);
        let vertex_sets: Vec<BTreeSet<usize>> = cycles
            .iter()
            .map(|c| c.iter().flat_map(|a| [a.from, a.to]).collect())
            .collect();
        let expect: Vec<BTreeSet<usize>> = [[0, 1, 2, 5], [0, 2, 3, 5], [2, 3, 4, 5]]
            .iter()
            .map(|v| v.iter().copied().collect())
            .collect();
        assert_eq!(vertex_sets, expect);

        let square = Triangulation::new(4, [Arc::new(0, 2)]).unwrap();
        assert_eq!(four_cycles(&square).len(), 1);
        let tri = Triangulation::new(3, []).unwrap();
        assert!(four_cycles(&tri).is_empty());
    }

    #[test]
    fn flip_graph_connected() {
        for n in 3..=10 {
            let ts = enumerate_triangulations(n).unwrap();
            assert_eq!(flip_graph_reach(&ts), ts.len());
        }
    }

    #[test]
    fn arc_index_matches_order() {
        for n in 3..10 {
            for (i, a) in all_arcs(n).into_iter().enumerate() {
                assert_eq!(arc_index(a, n), i);
            }
        }
    }

    #[test]
    fn triangle_structure() {
        for n in 3..=9 {
            for t in enumerate_triangulations(n).unwrap() {
                assert_eq!(t.triangles().len(), n - 2);
                assert_eq!(four_cycles(&t).len(), n - 3);
            }
        }
    }

    proptest! {
        #[test]
        fn flip_is_an_involution(n in 4usize..11, pick in any::<prop::sample::Index>(), arc_pick in any::<prop::sample::Index>()) {
            let ts = enumerate_triangulations(n).unwrap();
            let t = &ts[pick.index(ts.len())];
            let a = t.internal()[arc_pick.index(t.internal().len())];
            let (u, q) = flip(t, a).unwrap();
            let new_arc = *u.internal().iter().find(|x| !t.contains(**x)).unwrap();
            prop_assert!(q.diagonals().contains(&a) && q.diagonals().contains(&new_arc));
            let (back, q2) = flip(&u, new_arc).unwrap();
            prop_assert_eq!(&back, t);
            prop_assert_eq!(q, q2);
        }

        #[test]
        fn crossing_is_symmetric(n in 4usize..12, i in 0usize..64, j in 0usize..64) {
            let arcs = all_arcs(n);
            let (a, b) = (arcs[i % arcs.len()], arcs[j % arcs.len()]);
            prop_assert_eq!(arcs_cross(a, b), arcs_cross(b, a));
        }
    }
}
