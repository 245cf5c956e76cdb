//! Independent cross-checks: bounded seed searches on fixed triangulations,
//! and friezes read directly off exchange-matrix mutation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{FriezeError, Result};
use crate::frieze::Frieze;
use crate::frieze_a::{propagate, AFrieze};
use crate::frieze_d::{propagate_d, DFrieze};
use crate::polygon::{Arc, Triangulation};
use crate::punctured::{TaggedArc, TaggedTriangulation};
use crate::ring::{elements_with_norm_at_most, Ring, RingElement};

fn nonzero_box(ring: Ring, bound: &BigInt) -> Vec<RingElement> {
    elements_with_norm_at_most(ring, bound).into_iter().filter(|x| !x.is_zero()).collect()
}

/// Every tuple over `choices` of length `len`, split by first coordinate for
/// parallel consumption.
fn for_each_tuple<T: Send>(
    choices: &[RingElement],
    len: usize,
    f: impl Fn(&[RingElement]) -> Option<T> + Sync,
) -> Vec<T> {
    if len == 0 {
        return f(&[]).into_iter().collect();
    }
    choices
        .par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            let mut idx = vec![0usize; len - 1];
            let mut tuple: Vec<RingElement> = std::iter::once(first.clone())
                .chain(std::iter::repeat_n(choices[0].clone(), len - 1))
                .collect();
            loop {
                if let Some(t) = f(&tuple) {
                    out.push(t);
                }
                let mut k = 0;
                loop {
                    if k == len - 1 {
                        return out;
                    }
                    idx[k] += 1;
                    if idx[k] < choices.len() {
                        tuple[k + 1] = choices[idx[k]].clone();
                        break;
                    }
                    idx[k] = 0;
                    tuple[k + 1] = choices[0].clone();
                    k += 1;
                }
            }
        })
        .collect()
}

/// Type-A friezes whose fan arcs `(0, j)` all carry non-zero values of norm ≤ `bound`.
pub fn bruteforce_a(n: usize, bound: &BigInt, ring: Ring) -> Result<Vec<AFrieze>> {
    let fan = Triangulation::fan(n)?;
    let choices = nonzero_box(ring, bound);
    let mut out = for_each_tuple(&choices, fan.internal().len(), |values| {
        let mut seed: BTreeMap<Arc, RingElement> =
            (0..n).map(|k| (Arc::wrapping(k, k + 1, n), ring.one())).collect();
        seed.extend(fan.internal().iter().copied().zip(values.iter().cloned()));
        propagate(n, &fan, &seed).ok()
    });
    out.par_sort();
    out.dedup();
    Ok(out)
}

/// Type-D friezes whose plain spokes all carry non-zero integers of absolute value ≤ `bound`.
pub fn bruteforce_d(n: usize, bound: &BigInt) -> Result<Vec<DFrieze>> {
    let fan = TaggedTriangulation::spoke_fan(n)?;
    let choices = nonzero_box(Ring::Z, bound);
    let mut out = for_each_tuple(&choices, n, |values| {
        let mut seed: BTreeMap<TaggedArc, RingElement> =
            (0..n).map(|i| (TaggedArc::Boundary(i), RingElement::integer(1))).collect();
        seed.extend((0..n).map(TaggedArc::PlainSpoke).zip(values.iter().cloned()));
        propagate_d(n, &fan, &seed).ok()
    });
    out.par_sort();
    out.dedup();
    Ok(out)
}

/// Largest norm on the fan arcs over a set of type-A friezes.
pub fn fan_bound_a(friezes: &[AFrieze]) -> BigInt {
    friezes
        .iter()
        .flat_map(|f| (2..f.n() - 1).map(move |j| f.label(Arc::new(0, j)).norm()))
        .max()
        .unwrap_or_else(|| BigInt::from(1))
}

/// Largest absolute value on the plain spokes over a set of type-D friezes.
pub fn fan_bound_d(friezes: &[DFrieze]) -> BigInt {
    friezes
        .iter()
        .flat_map(|f| (0..f.n()).map(move |v| f.label(TaggedArc::PlainSpoke(v)).norm()))
        .max()
        .unwrap_or_else(|| BigInt::from(1))
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DiffReport {
    pub pass: bool,
    /// Structural friezes the oracle did not find.
    pub missing: Vec<serde_json::Value>,
    /// Oracle friezes absent from the structural set.
    pub extra: Vec<serde_json::Value>,
    pub bound: String,
    /// Set when friezes are missing: the search box was too small to reach them.
    pub bound_too_small: bool,
}

pub fn diff_sets(structural: &[Frieze], oracle: &[Frieze], bound: &BigInt) -> DiffReport {
    let s: BTreeSet<&Frieze> = structural.iter().collect();
    let o: BTreeSet<&Frieze> = oracle.iter().collect();
    let missing: Vec<_> = s.difference(&o).map(|f| f.to_json()).collect();
    let extra: Vec<_> = o.difference(&s).map(|f| f.to_json()).collect();
    DiffReport {
        pass: missing.is_empty() && extra.is_empty(),
        bound_too_small: !missing.is_empty(),
        missing,
        extra,
        bound: bound.to_string(),
    }
}

pub type Matrix = Vec<Vec<i64>>;

/// An exchange matrix with one value per cluster variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExchangeSeed {
    pub b: Matrix,
    pub values: Vec<RingElement>,
}

impl ExchangeSeed {
    pub fn new(b: Matrix, values: Vec<RingElement>) -> Result<Self> {
        let r = b.len();
        if b.iter().any(|row| row.len() != r) || values.len() != r {
            return Err(FriezeError::LengthMismatch { expected: r, got: values.len() });
        }
        for i in 0..r {
            for j in 0..r {
                if b[i][j].signum() != -b[j][i].signum() {
                    return Err(FriezeError::InvalidInput("exchange matrix is not sign-skew-symmetric".into()));
                }
            }
        }
        if values.iter().any(RingElement::is_zero) {
            return Err(FriezeError::ZeroLabel { arc: "initial value".into() });
        }
        Ok(ExchangeSeed { b, values })
    }

    pub fn rank(&self) -> usize {
        self.b.len()
    }

    /// Mutation in direction `k`.
    pub fn mutate(&self, k: usize) -> Result<ExchangeSeed> {
        let r = self.rank();
        let ring = self.values[k].ring();
        let mut plus = ring.one();
        let mut minus = ring.one();
        for i in 0..r {
            let e = self.b[i][k];
            if e > 0 {
                plus = &plus * &self.values[i].pow(e as u32);
            } else if e < 0 {
                minus = &minus * &self.values[i].pow((-e) as u32);
            }
        }
        let new = (&plus + &minus)
            .exact_div(&self.values[k])?
            .ok_or_else(|| FriezeError::NotIntegral { arc: format!("x{k}") })?;
        if new.is_zero() {
            return Err(FriezeError::ZeroLabel { arc: format!("x{k}") });
        }
        let mut b = self.b.clone();
        for i in 0..r {
            for j in 0..r {
                b[i][j] = if i == k || j == k {
                    -self.b[i][j]
                } else {
                    let (bik, bkj) = (self.b[i][k], self.b[k][j]);
                    self.b[i][j] + (bik.abs() * bkj + bik * bkj.abs()) / 2
                };
            }
        }
        let mut values = self.values.clone();
        values[k] = new;
        Ok(ExchangeSeed { b, values })
    }

    /// Relabels variables: position `i` of the result is variable `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> ExchangeSeed {
        ExchangeSeed {
            b: perm.iter().map(|&i| perm.iter().map(|&j| self.b[i][j]).collect()).collect(),
            values: perm.iter().map(|&i| self.values[i].clone()).collect(),
        }
    }

    /// Least relabeling.
    pub fn canonical(&self) -> ExchangeSeed {
        permutations(self.rank()).iter().map(|p| self.permuted(p)).min().unwrap()
    }
}

fn permutations(r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(r - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, r - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// The canonical seeds reachable by mutation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClosureFingerprint {
    pub seeds: BTreeSet<ExchangeSeed>,
}

const CLOSURE_CAP: usize = 20_000;

/// Breadth-first closure under all mutations. Fails if any mutation leaves
/// the ring or hits zero, or if the matrix is not of finite type.
pub fn mutation_closure(seed: &ExchangeSeed) -> Result<ClosureFingerprint> {
    let start = seed.canonical();
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for k in 0..s.rank() {
            let next = s.mutate(k)?;
            let r = next.rank();
            if (0..r).any(|i| (0..r).any(|j| next.b[i][j] * next.b[j][i] < -3)) {
                return Err(FriezeError::NotFiniteType);
            }
            let c = next.canonical();
            if seen.insert(c.clone()) {
                if seen.len() > CLOSURE_CAP {
                    return Err(FriezeError::NotFiniteType);
                }
                queue.push_back(c);
            }
        }
    }
    Ok(ClosureFingerprint { seeds: seen })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    G2,
}

impl std::str::FromStr for CartanType {
    type Err = FriezeError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A" => CartanType::A,
            "B" => CartanType::B,
            "C" => CartanType::C,
            "D" => CartanType::D,
            "G2" => CartanType::G2,
            _ => return Err(FriezeError::InvalidInput(format!("unknown Dynkin type '{s}'"))),
        })
    }
}

/// Cartan matrix; for B_n the last row carries the −2, for C_n its transpose.
pub fn cartan_matrix(kind: CartanType, rank: usize) -> Result<Matrix> {
    let bad = || FriezeError::InvalidInput(format!("no Dynkin diagram {kind:?}{rank}"));
    let r = rank;
    let valid = match kind {
        CartanType::A => r >= 1,
        CartanType::B | CartanType::C => r >= 2,
        CartanType::D => r >= 4,
        CartanType::G2 => r == 2,
    };
    if !valid {
        return Err(bad());
    }
    let mut a = vec![vec![0i64; r]; r];
    for i in 0..r {
        a[i][i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match kind {
        CartanType::D => {
            for i in 0..r - 2 {
                link(i, i + 1);
            }
            link(r - 3, r - 1);
        }
        _ => {
            for i in 0..r - 1 {
                link(i, i + 1);
            }
        }
    }
    match kind {
        CartanType::B => a[r - 1][r - 2] = -2,
        CartanType::C => a[r - 2][r - 1] = -2,
        CartanType::G2 => a[1][0] = -3,
        _ => {}
    }
    Ok(a)
}

/// Bipartite exchange matrix of a Cartan matrix: `b_ij = ±|a_ij|`, sign by
/// the colour of `i` in the (bipartite) Dynkin diagram.
pub fn exchange_matrix(kind: CartanType, rank: usize) -> Result<Matrix> {
    let a = cartan_matrix(kind, rank)?;
    let r = a.len();
    // colour vertices by BFS distance from 0 (all diagrams here are trees)
    let mut colour = vec![None; r];
    colour[0] = Some(1i64);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..r {
            if i != j && a[i][j] != 0 && colour[j].is_none() {
                colour[j] = Some(-colour[i].unwrap());
                queue.push_back(j);
            }
        }
    }
    Ok((0..r)
        .map(|i| (0..r).map(|j| if i == j { 0 } else { -a[i][j] * colour[i].unwrap() }).collect())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedCount {
    pub b: Matrix,
    /// Initial-cluster values of every frieze found, sorted.
    pub friezes: Vec<Vec<RingElement>>,
}

impl SeedCount {
    pub fn count(&self) -> usize {
        self.friezes.len()
    }
}

/// Friezes of a Dynkin type read off mutation closures.
///
/// A frieze is recorded by its values on the initial cluster. Every tuple in
/// the search box that survives mutation is one; so is every value tuple met
/// in its closure at a seed whose matrix is a relabeling of ±B, since a
/// cluster automorphism carries the initial cluster there.
pub fn enumerate_by_seeds(kind: CartanType, rank: usize, bound: &BigInt, ring: Ring) -> Result<SeedCount> {
    let b = exchange_matrix(kind, rank)?;
    let neg: Matrix = b.iter().map(|row| row.iter().map(|x| -x).collect()).collect();
    let perms = permutations(rank);
    let choices = nonzero_box(ring, bound);
    let found: Vec<BTreeSet<Vec<RingElement>>> = for_each_tuple(&choices, rank, |values| {
        let seed = ExchangeSeed::new(b.clone(), values.to_vec()).ok()?;
        let closure = mutation_closure(&seed).ok()?;
        let mut tuples = BTreeSet::new();
        for s in &closure.seeds {
            for p in &perms {
                let q = s.permuted(p);
                if q.b == b || q.b == neg {
                    tuples.insert(q.values);
                }
            }
        }
        Some(tuples)
    });
    let all: BTreeSet<Vec<RingElement>> = found.into_iter().flatten().collect();
    Ok(SeedCount { b, friezes: all.into_iter().collect() })
}

/// Period of the exchange sequence `x_{k+1} x_{k-1} = x_k^e + 1` with the
/// exponent `e` alternating between `|b12|` and `|b21|`, from `x_0 = x_1 = 1`.
pub fn rank2_period(b12: i64, b21: i64) -> Result<usize> {
    let exps = [b21.unsigned_abs() as u32, b12.unsigned_abs() as u32];
    if b12.signum() != -b21.signum() || b12 == 0 || exps[0] * exps[1] > 3 {
        return Err(FriezeError::NotFiniteType);
    }
    let one = RingElement::integer(1);
    let mut seq = vec![one.clone(), one];
    for k in 1..64 {
        let next = (&seq[k].pow(exps[k % 2]) + &RingElement::integer(1))
            .exact_div(&seq[k - 1])?
            .ok_or_else(|| FriezeError::NotIntegral { arc: format!("x{}", k + 1) })?;
        seq.push(next);
        let p = k;
        if p >= 2 && (exps[0] == exps[1] || p % 2 == 0) && seq[p] == seq[0] && seq[p + 1] == seq[1] {
            return Ok(p);
        }
    }
    Err(FriezeError::NotFiniteType)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frieze_a::enumerate_nonzero_a;
    use crate::frieze_d::enumerate_nonzero_d;

    fn z(v: i64) -> RingElement {
        RingElement::integer(v)
    }

    #[test]
    fn small_bruteforce() {
        assert_eq!(bruteforce_a(4, &BigInt::from(2), Ring::Z).unwrap().len(), 4);
        assert_eq!(bruteforce_a(5, &BigInt::from(3), Ring::Z).unwrap().len(), 5);
        assert_eq!(bruteforce_d(2, &BigInt::from(2)).unwrap().len(), 16);
    }

    #[test]
    fn oracle_agrees_with_structure() {
        for n in 4..=6 {
            let s = enumerate_nonzero_a(n, Ring::Z).unwrap();
            let m = fan_bound_a(&s);
            let o = bruteforce_a(n, &m, Ring::Z).unwrap();
            let r = diff_sets(
                &s.into_iter().map(Frieze::A).collect::<Vec<_>>(),
                &o.into_iter().map(Frieze::A).collect::<Vec<_>>(),
                &m,
            );
            assert!(r.pass, "n={n}");
        }
        let s = enumerate_nonzero_d(3).unwrap();
        let m = fan_bound_d(&s);
        let o = bruteforce_d(3, &m).unwrap();
        assert_eq!(o, s);
    }

    #[test]
    fn diff_reports() {
        let s: Vec<Frieze> = enumerate_nonzero_a(5, Ring::Z).unwrap().into_iter().map(Frieze::A).collect();
        let r = diff_sets(&s[1..], &s, &BigInt::from(5));
        assert!(!r.pass && r.missing.is_empty() && r.extra.len() == 1);
        let small: Vec<Frieze> =
            bruteforce_a(5, &BigInt::from(1), Ring::Z).unwrap().into_iter().map(Frieze::A).collect();
        let r = diff_sets(&s, &small, &BigInt::from(1));
        assert!(!r.pass && r.bound_too_small && !r.missing.is_empty());
    }

    #[test]
    fn closures() {
        let a1 = ExchangeSeed::new(vec![vec![0]], vec![z(1)]).unwrap();
        let c = mutation_closure(&a1).unwrap();
        let values: Vec<_> = c.seeds.iter().map(|s| s.values.clone()).collect();
        assert_eq!(values, vec![vec![z(1)], vec![z(2)]]);

        let gi = ExchangeSeed::new(vec![vec![0]], vec![RingElement::new(Ring::Zi, 1, 1)]).unwrap();
        let c = mutation_closure(&gi).unwrap();
        assert!(c.seeds.iter().any(|s| s.values == vec![RingElement::new(Ring::Zi, 1, -1)]));

        let a2 = ExchangeSeed::new(exchange_matrix(CartanType::A, 2).unwrap(), vec![z(1), z(1)]).unwrap();
        assert_eq!(mutation_closure(&a2).unwrap().seeds.len(), 5);

        let bad = ExchangeSeed::new(vec![vec![0, 1], vec![-1, 0]], vec![z(3), z(1)]).unwrap();
        assert!(matches!(mutation_closure(&bad), Err(FriezeError::NotIntegral { .. })));

        let wild = ExchangeSeed::new(vec![vec![0, 2], vec![-2, 0]], vec![z(1), z(1)]).unwrap();
        assert!(matches!(mutation_closure(&wild), Err(FriezeError::NotFiniteType)));
    }

    #[test]
    fn closure_is_order_independent() {
        let b = exchange_matrix(CartanType::A, 3).unwrap();
        let seed = ExchangeSeed::new(b, vec![z(1), z(2), z(1)]).unwrap();
        let c1 = mutation_closure(&seed).unwrap();
        let c2 = mutation_closure(&seed.permuted(&[2, 0, 1])).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn rank_two_periods() {
        assert_eq!(rank2_period(1, -1).unwrap(), 5);
        assert_eq!(rank2_period(1, -2).unwrap(), 6);
        assert_eq!(rank2_period(1, -3).unwrap(), 8);
    }

    #[test]
    fn seed_counts() {
        let two = BigInt::from(2);
        assert_eq!(enumerate_by_seeds(CartanType::A, 1, &two, Ring::Z).unwrap().count(), 4);
        assert_eq!(enumerate_by_seeds(CartanType::A, 2, &BigInt::from(3), Ring::Z).unwrap().count(), 5);
        let zi = enumerate_by_seeds(CartanType::A, 1, &two, Ring::Zi).unwrap();
        assert_eq!(zi.count(), 12);
    }

    #[test]
    fn valued_types_match_folding() {
        use crate::folding::{enumerate_folded, FoldedType};
        for (folded, cartan, expected) in [
            (FoldedType::C, CartanType::C, 12),
            (FoldedType::B, CartanType::B, 12),
            (FoldedType::G2, CartanType::G2, 9),
        ] {
            let (_, fs) = enumerate_folded(folded, 2).unwrap();
            let m = fs.iter().flat_map(|f| f.values.iter().map(RingElement::norm)).max().unwrap();
            let seeds = enumerate_by_seeds(cartan, 2, &m, Ring::Z).unwrap();
            assert_eq!(seeds.count(), expected, "{cartan:?}");
        }
    }

    #[test]
    fn gaussian_a1_closed_under_units() {
        let s = enumerate_by_seeds(CartanType::A, 1, &BigInt::from(2), Ring::Zi).unwrap();
        let set: BTreeSet<_> = s.friezes.iter().cloned().collect();
        for u in Ring::Zi.units() {
            for f in &s.friezes {
                assert!(set.contains(&vec![&f[0] * &u]));
            }
        }
    }
}
