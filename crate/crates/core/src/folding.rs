//! Arc permutations induced by diagram automorphisms, invariant friezes, and
//! the folded types B, C and G₂.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::{FriezeError, Result};
use crate::frieze::Frieze;
use crate::frieze_a::enumerate_nonzero_a;
use crate::frieze_d::enumerate_nonzero_d;
use crate::polygon::{all_arcs, arc_index, binomial, Arc};
use crate::punctured::{all_variables, compatible, tagged_arcs, TaggedArc};
use crate::ring::{Ring, RingElement};

/// The geometric model an [`ArcSymmetry`] acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryModel {
    /// All arcs of the m-gon, boundary included, in [`all_arcs`] order.
    Polygon(usize),
    /// Boundary and tagged arcs of the punctured m-gon, in [`all_variables`] order.
    Punctured(usize),
}

impl SymmetryModel {
    pub fn size(self) -> usize {
        match self {
            SymmetryModel::Polygon(m) => m * (m - 1) / 2,
            SymmetryModel::Punctured(m) => all_variables(m).len(),
        }
    }

    fn arc_json(self, i: usize) -> serde_json::Value {
        match self {
            SymmetryModel::Polygon(m) => all_arcs(m)[i].to_json(),
            SymmetryModel::Punctured(m) => all_variables(m)[i].to_json(m),
        }
    }

    fn matches(self, f: &Frieze) -> bool {
        matches!(
            (self, f),
            (SymmetryModel::Polygon(m), Frieze::A(g)) if g.n() == m
        ) || matches!((self, f), (SymmetryModel::Punctured(m), Frieze::D(g)) if g.n() == m)
    }
}

/// A permutation of a model's arcs; `perm[i]` is the image of arc `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcSymmetry {
    model: SymmetryModel,
    perm: Vec<usize>,
}

impl ArcSymmetry {
    pub fn new(model: SymmetryModel, perm: Vec<usize>) -> Result<Self> {
        let size = model.size();
        let mut seen = vec![false; size];
        if perm.len() != size || perm.iter().any(|&p| p >= size || std::mem::replace(&mut seen[p], true)) {
            return Err(FriezeError::InvalidInput("not a permutation of the model's arcs".into()));
        }
        Ok(ArcSymmetry { model, perm })
    }

    pub fn model(&self) -> SymmetryModel {
        self.model
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut current = self.perm.clone();
        while current.iter().enumerate().any(|(i, &p)| i != p) {
            current = current.iter().map(|&p| self.perm[p]).collect();
            k += 1;
        }
        k
    }

    /// Orbits as sorted index lists, ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.perm.len()];
        let mut out = Vec::new();
        for i in 0..self.perm.len() {
            if seen[i] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                orbit.push(j);
                j = self.perm[j];
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// The frieze `x ↦ f(s⁻¹(x))`.
    pub fn act(&self, f: &Frieze) -> Result<Frieze> {
        if !self.model.matches(f) {
            return Err(FriezeError::InvalidInput("frieze does not live on the symmetry's model".into()));
        }
        let mut values = f.values().to_vec();
        for (i, &p) in self.perm.iter().enumerate() {
            values[p] = f.values()[i].clone();
        }
        f.with_values(values)
    }

    pub fn is_invariant(&self, f: &Frieze) -> bool {
        self.model.matches(f) && self.perm.iter().enumerate().all(|(i, &p)| f.values()[i] == f.values()[p])
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "model": match self.model {
                SymmetryModel::Polygon(m) => serde_json::json!({"type": "A", "n": m}),
                SymmetryModel::Punctured(m) => serde_json::json!({"type": "D", "n": m}),
            },
            "map": self.perm.iter().enumerate()
                .map(|(i, &p)| serde_json::json!({"from": self.model.arc_json(i), "to": self.model.arc_json(p)}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Half-turn of the (2n+2)-gon.
pub fn rotation_action(n: usize) -> Result<ArcSymmetry> {
    if n < 1 {
        return Err(FriezeError::InvalidInput("rotation needs n >= 1".into()));
    }
    let m = 2 * n + 2;
    let perm = all_arcs(m).into_iter().map(|a| arc_index(a.rotated(n + 1, m), m)).collect();
    ArcSymmetry::new(SymmetryModel::Polygon(m), perm)
}

/// Exchange of plain and tagged spokes on the punctured m-gon.
pub fn tag_swap_action(m: usize) -> Result<ArcSymmetry> {
    if m < 2 {
        return Err(FriezeError::InvalidInput("punctured polygon needs m >= 2".into()));
    }
    let vars = all_variables(m);
    let index: BTreeMap<TaggedArc, usize> = vars.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    let perm = vars.iter().map(|a| index[&a.tag_swapped()]).collect();
    ArcSymmetry::new(SymmetryModel::Punctured(m), perm)
}

/// All compatibility-preserving permutations of the punctured 4-gon's
/// tagged arcs of order 3 sending `s0 → t0 → c(1,3) → s0`.
pub fn triality_candidates() -> Vec<ArcSymmetry> {
    const N: usize = 4;
    let arcs = tagged_arcs(N);
    let k = arcs.len();
    let pos = |a: TaggedArc| arcs.iter().position(|&b| b == a).unwrap();
    let compat: Vec<Vec<bool>> = arcs.iter().map(|&a| arcs.iter().map(|&b| compatible(a, b, N)).collect()).collect();
    let orbit = [TaggedArc::PlainSpoke(0), TaggedArc::TaggedSpoke(0), TaggedArc::Chord { start: 1, len: 2 }];
    let mut image: Vec<Option<usize>> = vec![None; k];
    for i in 0..3 {
        image[pos(orbit[i])] = Some(pos(orbit[(i + 1) % 3]));
    }

    fn search(
        i: usize,
        image: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        compat: &[Vec<bool>],
        out: &mut Vec<Vec<usize>>,
    ) {
        let k = compat.len();
        if i == k {
            out.push(image.iter().map(|x| x.unwrap()).collect());
            return;
        }
        let fits = |cand: usize, image: &Vec<Option<usize>>| {
            (0..k).all(|j| match image[j] {
                Some(pj) if j != i => compat[i][j] == compat[cand][pj],
                _ => true,
            })
        };
        if let Some(fixed) = image[i] {
            if fits(fixed, image) {
                search(i + 1, image, used, compat, out);
            }
            return;
        }
        for cand in 0..k {
            if !used[cand] && fits(cand, image) {
                image[i] = Some(cand);
                used[cand] = true;
                search(i + 1, image, used, compat, out);
                used[cand] = false;
                image[i] = None;
            }
        }
    }

    let mut used = vec![false; k];
    for x in image.iter().flatten() {
        used[*x] = true;
    }
    let mut found = Vec::new();
    search(0, &mut image, &mut used, &compat, &mut found);

    found
        .into_iter()
        .filter_map(|p| {
            // boundary segments come first in the full variable order and stay fixed
            let perm: Vec<usize> = (0..N).chain(p.iter().map(|&x| x + N)).collect();
            let s = ArcSymmetry::new(SymmetryModel::Punctured(N), perm).ok()?;
            (s.order() == 3).then_some(s)
        })
        .collect()
}

/// The order-3 symmetry of the punctured 4-gon through which D₄ folds to G₂.
pub fn triality_action() -> Result<ArcSymmetry> {
    let mut found = triality_candidates();
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        k => Err(FriezeError::Contract(format!("triality search found {k} candidates; expected exactly one"))),
    }
}

/// The friezes constant on every orbit of `s`.
pub fn invariant_friezes(friezes: &[Frieze], s: &ArcSymmetry) -> Vec<Frieze> {
    friezes.iter().filter(|f| s.is_invariant(f)).cloned().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FoldedType {
    B,
    C,
    G2,
}

impl FoldedType {
    pub fn name(self) -> &'static str {
        match self {
            FoldedType::B => "B",
            FoldedType::C => "C",
            FoldedType::G2 => "G2",
        }
    }
}

impl std::str::FromStr for FoldedType {
    type Err = FriezeError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" => Ok(FoldedType::B),
            "C" => Ok(FoldedType::C),
            "G2" => Ok(FoldedType::G2),
            _ => Err(FriezeError::InvalidInput(format!("unknown folded type '{s}'"))),
        }
    }
}

/// The unfolded model and symmetry for a folded type: C_n from the
/// (2n+2)-gon, B_n from the punctured (n+1)-gon, G₂ from the punctured 4-gon.
pub fn unfolding(kind: FoldedType, rank: usize) -> Result<ArcSymmetry> {
    match kind {
        FoldedType::C if rank >= 2 => rotation_action(rank),
        FoldedType::B if rank >= 2 => tag_swap_action(rank + 1),
        FoldedType::G2 if rank == 2 => triality_action(),
        _ => Err(FriezeError::InvalidInput(format!("no folding for {}{rank}", kind.name()))),
    }
}

/// One value per orbit of the folding symmetry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FoldedFrieze {
    pub kind: FoldedType,
    pub rank: usize,
    pub ring: Ring,
    /// Orbits of the unfolded model's arcs, in [`ArcSymmetry::orbits`] order.
    pub orbits: Vec<Vec<usize>>,
    pub values: Vec<RingElement>,
}

impl FoldedFrieze {
    pub fn is_positive(&self) -> bool {
        self.values.iter().all(RingElement::is_positive_integer)
    }

    pub fn to_json(&self, s: &ArcSymmetry) -> serde_json::Value {
        serde_json::json!({
            "type": self.kind.name(),
            "rank": self.rank,
            "ring": self.ring.name(),
            "orbits": self.orbits.iter().zip(&self.values)
                .map(|(o, v)| serde_json::json!({
                    "arcs": o.iter().map(|&i| s.model().arc_json(i)).collect::<Vec<_>>(),
                    "value": v.to_json(),
                }))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Orbit {
            arcs: Vec<serde_json::Value>,
            value: serde_json::Value,
        }
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "type")]
            kind: String,
            rank: usize,
            ring: Ring,
            orbits: Vec<Orbit>,
        }
        let raw: Raw = serde_json::from_value(v.clone())
            .map_err(|e| FriezeError::InvalidInput(format!("folded frieze: {e}")))?;
        let kind: FoldedType = raw.kind.parse()?;
        let s = unfolding(kind, raw.rank)?;
        let index = |a: &serde_json::Value| -> Result<usize> {
            match s.model() {
                SymmetryModel::Polygon(m) => Ok(arc_index(Arc::from_json(a)?, m)),
                SymmetryModel::Punctured(m) => {
                    let arc = TaggedArc::from_json(a, m)?;
                    Ok(all_variables(m).iter().position(|&b| b == arc).unwrap())
                }
            }
        };
        let mut orbits = Vec::new();
        let mut values = Vec::new();
        for o in raw.orbits {
            let mut idx = o.arcs.iter().map(index).collect::<Result<Vec<_>>>()?;
            idx.sort_unstable();
            orbits.push(idx);
            values.push(RingElement::from_json(raw.ring, &o.value)?);
        }
        let g = FoldedFrieze { kind, rank: raw.rank, ring: raw.ring, orbits, values };
        if g.orbits != s.orbits() {
            return Err(FriezeError::InvalidInput("orbits do not match the folding symmetry".into()));
        }
        Ok(g)
    }
}

/// Collapses an invariant frieze to its orbit values.
pub fn fold(f: &Frieze, s: &ArcSymmetry, kind: FoldedType, rank: usize) -> Result<FoldedFrieze> {
    if !s.is_invariant(f) {
        return Err(FriezeError::InvalidInput("frieze is not invariant under the symmetry".into()));
    }
    let orbits = s.orbits();
    let values = orbits.iter().map(|o| f.values()[o[0]].clone()).collect();
    Ok(FoldedFrieze { kind, rank, ring: f.ring(), orbits, values })
}

/// Spreads orbit values back over the unfolded model.
pub fn lift(g: &FoldedFrieze, s: &ArcSymmetry) -> Result<Frieze> {
    if g.orbits != s.orbits() {
        return Err(FriezeError::InvalidInput("orbits do not match the symmetry".into()));
    }
    let mut values = vec![g.ring.zero(); s.model().size()];
    for (o, v) in g.orbits.iter().zip(&g.values) {
        for &i in o {
            values[i] = v.clone();
        }
    }
    Ok(match s.model() {
        SymmetryModel::Polygon(m) => Frieze::A(crate::frieze_a::AFrieze::from_values(m, g.ring, values)?),
        SymmetryModel::Punctured(m) => Frieze::D(crate::frieze_d::DFrieze::from_values(m, g.ring, values)?),
    })
}

/// Unfolded frieze set for a folded type.
pub fn unfolded_friezes(kind: FoldedType, rank: usize) -> Result<Vec<Frieze>> {
    Ok(match kind {
        FoldedType::C => enumerate_nonzero_a(2 * rank + 2, Ring::Z)?.into_iter().map(Frieze::A).collect(),
        FoldedType::B => enumerate_nonzero_d(rank + 1)?.into_iter().map(Frieze::D).collect(),
        FoldedType::G2 => enumerate_nonzero_d(4)?.into_iter().map(Frieze::D).collect(),
    })
}

/// All non-zero integral friezes of a folded type, via invariant friezes upstairs.
pub fn enumerate_folded(kind: FoldedType, rank: usize) -> Result<(ArcSymmetry, Vec<FoldedFrieze>)> {
    let s = unfolding(kind, rank)?;
    let upstairs = unfolded_friezes(kind, rank)?;
    let mut out = invariant_friezes(&upstairs, &s)
        .iter()
        .map(|f| fold(f, &s, kind, rank))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok((s, out))
}

/// `2·C(2n, n)` for C_n, `2·Σ_{m ≥ 1, m² ≤ n+1} C(2n − m² + 1, n)` for B_n, 9 for G₂.
pub fn folded_count_formula(kind: FoldedType, rank: usize) -> Result<u64> {
    let n = rank as u64;
    match kind {
        FoldedType::C if rank >= 2 => Ok(2 * binomial(2 * n, n)),
        FoldedType::B if rank >= 2 => {
            Ok(2 * (1..).take_while(|m| m * m <= n + 1).map(|m| binomial(2 * n - m * m + 1, n)).sum::<u64>())
        }
        FoldedType::G2 if rank == 2 => Ok(9),
        _ => Err(FriezeError::InvalidInput(format!("no count formula for {}{rank}", kind.name()))),
    }
}
