//! Verification suites: each check compares a computed quantity with the
//! value it must take and records both.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{FriezeError, Result};
use crate::folding::{
    enumerate_folded, fold, folded_count_formula, invariant_friezes, lift, rotation_action, tag_swap_action,
    unfolded_friezes, FoldedType,
};
use crate::frieze::Frieze;
use crate::frieze_a::{apply_a_tag, enumerate_nonzero_a, nonzero_a_count, normalize_a, ptolemy_check, sigma};
use crate::frieze_d::{
    apply_d_tag, d3_to_a3, enumerate_nonzero_d, exchange_check_d, nonzero_d_count, normalize_d, positive_d_count,
    sigma1, sigma2,
};
use crate::labeling::{extend_boundary, BoundaryState, Sign};
use crate::oracle::{
    bruteforce_a, bruteforce_d, diff_sets, enumerate_by_seeds, fan_bound_a, fan_bound_d, rank2_period, CartanType,
};
use crate::polygon::{enumerate_triangulations, four_cycles, Arc};
use crate::ring::{Ring, RingElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Counts,
    Oracle,
    Involutions,
    Admissible,
    Folding,
    Determinism,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Counts, Suite::Oracle, Suite::Involutions, Suite::Admissible, Suite::Folding, Suite::Determinism];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Counts => "counts",
            Suite::Oracle => "oracle",
            Suite::Involutions => "involutions",
            Suite::Admissible => "admissible",
            Suite::Folding => "folding",
            Suite::Determinism => "determinism",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = FriezeError;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| FriezeError::InvalidInput(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub pass: bool,
    pub expected: Value,
    pub got: Value,
}

fn check(suite: Suite, name: impl Into<String>, expected: impl Serialize, got: impl Serialize) -> Check {
    let expected = serde_json::to_value(expected).expect("serialisable");
    let got = serde_json::to_value(got).expect("serialisable");
    Check { suite, name: name.into(), pass: expected == got, expected, got }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({ "pass": self.pass(), "checks": self.checks })
    }
}

/// Size knobs. `quick` trims the largest instances; `max_n` caps the polygon
/// size for the admissible-labeling suite; `only` restricts the involution
/// suite to a single model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub struct Options {
    pub quick: bool,
    pub max_n: Option<usize>,
    pub only: Option<(char, usize)>,
}


pub fn run(suites: &[Suite], opts: Options) -> Result<Report> {
    let mut report = Report::default();
    for &s in suites {
        report.checks.extend(match s {
            Suite::Counts => counts(opts)?,
            Suite::Oracle => oracle(opts)?,
            Suite::Involutions => involutions(opts)?,
            Suite::Admissible => admissible(opts)?,
            Suite::Folding => folding(opts)?,
            Suite::Determinism => determinism(opts)?,
        });
    }
    Ok(report)
}

pub fn counts(opts: Options) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let a_max = if opts.quick { 10 } else { 11 };
    for n in 4..=a_max {
        let got = enumerate_nonzero_a(n, Ring::Z)?.len() as u64;
        out.push(check(Suite::Counts, format!("A n={n} total"), nonzero_a_count(n), got));
    }
    let d_max = if opts.quick { 5 } else { 6 };
    for n in 2..=d_max {
        let all = enumerate_nonzero_d(n)?;
        let pos = all.iter().filter(|f| f.is_positive()).count() as u64;
        out.push(check(Suite::Counts, format!("D n={n} total"), nonzero_d_count(n), all.len() as u64));
        out.push(check(Suite::Counts, format!("D n={n} positive"), positive_d_count(n), pos));
    }
    for (kind, rank) in folded_cases(opts) {
        let (_, fs) = enumerate_folded(kind, rank)?;
        out.push(check(
            Suite::Counts,
            format!("{}{rank} total", kind.name()),
            folded_count_formula(kind, rank)?,
            fs.len() as u64,
        ));
    }
    Ok(out)
}

fn folded_cases(opts: Options) -> Vec<(FoldedType, usize)> {
    let mut v = vec![(FoldedType::C, 2), (FoldedType::C, 3), (FoldedType::B, 2), (FoldedType::B, 3), (FoldedType::G2, 2)];
    if !opts.quick {
        v.push((FoldedType::C, 4));
    }
    v
}

fn max_norm<'a>(values: impl IntoIterator<Item = &'a RingElement>) -> BigInt {
    values.into_iter().map(RingElement::norm).max().unwrap_or_else(|| BigInt::from(1))
}

pub fn oracle(_opts: Options) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 4..=7 {
        let s = enumerate_nonzero_a(n, Ring::Z)?;
        let m = fan_bound_a(&s);
        let o = bruteforce_a(n, &m, Ring::Z)?;
        let r = diff_sets(
            &s.into_iter().map(Frieze::A).collect::<Vec<_>>(),
            &o.into_iter().map(Frieze::A).collect::<Vec<_>>(),
            &m,
        );
        out.push(check(Suite::Oracle, format!("A n={n} bruteforce diff (M={m})"), json!({"missing": 0, "extra": 0}),
            json!({"missing": r.missing.len(), "extra": r.extra.len()})));
    }
    for n in 2..=4 {
        let s = enumerate_nonzero_d(n)?;
        let m = fan_bound_d(&s);
        let o = bruteforce_d(n, &m)?;
        let r = diff_sets(
            &s.into_iter().map(Frieze::D).collect::<Vec<_>>(),
            &o.into_iter().map(Frieze::D).collect::<Vec<_>>(),
            &m,
        );
        out.push(check(Suite::Oracle, format!("D n={n} bruteforce diff (M={m})"), json!({"missing": 0, "extra": 0}),
            json!({"missing": r.missing.len(), "extra": r.extra.len()})));
    }

    // D₃ and A₃ friezes agree through the arc dictionary
    let from_d: BTreeSet<Vec<(Arc, RingElement)>> = enumerate_nonzero_d(3)?
        .iter()
        .map(|f| {
            let mut v: Vec<_> =
                f.labels().filter(|(a, _)| !a.is_boundary()).map(|(a, x)| (d3_to_a3(a), x.clone())).collect();
            v.sort();
            v
        })
        .collect();
    let from_a: BTreeSet<Vec<(Arc, RingElement)>> = enumerate_nonzero_a(6, Ring::Z)?
        .iter()
        .map(|f| f.labels().filter(|(a, _)| !a.is_boundary(6)).map(|(a, x)| (a, x.clone())).collect())
        .collect();
    out.push(check(Suite::Oracle, "D3 = A3 under the arc dictionary", true, from_d == from_a && from_d.len() == 28));

    let mut seed_cases: Vec<(CartanType, usize, BigInt, u64)> = Vec::new();
    for rank in 1..=3 {
        let bound = if rank == 1 {
            BigInt::from(2)
        } else {
            max_norm(enumerate_nonzero_a(rank + 3, Ring::Z)?.iter().flat_map(|f| f.values().to_vec()).collect::<Vec<_>>().iter())
        };
        seed_cases.push((CartanType::A, rank, bound, nonzero_a_count(rank + 3)));
    }
    for (folded, cartan) in [(FoldedType::B, CartanType::B), (FoldedType::C, CartanType::C), (FoldedType::G2, CartanType::G2)] {
        let (_, fs) = enumerate_folded(folded, 2)?;
        let bound = max_norm(fs.iter().flat_map(|f| f.values.iter()));
        seed_cases.push((cartan, 2, bound, fs.len() as u64));
    }
    for (cartan, rank, bound, expected) in seed_cases {
        let got = enumerate_by_seeds(cartan, rank, &bound, Ring::Z)?.count() as u64;
        out.push(check(Suite::Oracle, format!("{cartan:?}{rank} by seed mutation (M={bound})"), expected, got));
    }

    let zi = enumerate_by_seeds(CartanType::A, 1, &BigInt::from(2), Ring::Zi)?;
    let set: BTreeSet<_> = zi.friezes.iter().cloned().collect();
    let closed = Ring::Zi.units().iter().all(|u| zi.friezes.iter().all(|f| set.contains(&vec![&f[0] * u])));
    out.push(check(Suite::Oracle, "A1 over Zi", json!({"count": 12, "unit_closed": true}),
        json!({"count": zi.count(), "unit_closed": closed})));

    for (name, b12, b21, expected) in [("A2", 1, -1, 5), ("B2", 1, -2, 6), ("G2", 1, -3, 8)] {
        out.push(check(Suite::Oracle, format!("{name} exchange period"), expected, rank2_period(b12, b21)?));
    }
    Ok(out)
}

pub fn involutions(opts: Options) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let a_range: Vec<usize> = match opts.only {
        Some(('A', rank)) => vec![rank + 3],
        Some(_) => vec![],
        None => (4..=if opts.quick { 8 } else { 9 }).collect(),
    };
    let d_range: Vec<usize> = match opts.only {
        Some(('D', rank)) => vec![rank],
        Some(_) => vec![],
        None => (2..=5).collect(),
    };
    for n in a_range {
        let all = enumerate_nonzero_a(n, Ring::Z)?;
        let set: BTreeSet<_> = all.iter().collect();
        let mut ok = [true; 4];
        for f in &all {
            if n % 2 == 0 {
                let s = sigma(f)?;
                ok[0] &= sigma(&s)? == *f;
                ok[1] &= ptolemy_check(&s).is_empty() && set.contains(&s);
                ok[2] &= s != *f;
            }
            let (p, tag) = normalize_a(f)?;
            ok[3] &= p.is_positive() && apply_a_tag(&p, tag)? == *f;
        }
        for (name, v) in ["sigma involution", "sigma preserves friezes", "sigma fixed-point-free", "normalize round-trip"]
            .iter()
            .zip(ok)
            .skip(if n % 2 == 0 { 0 } else { 3 })
        {
            out.push(check(Suite::Involutions, format!("A n={n} {name}"), true, v));
        }
    }
    for n in d_range {
        let all = enumerate_nonzero_d(n)?;
        let set: BTreeSet<_> = all.iter().collect();
        let mut ok = [true; 5];
        for f in &all {
            let s = sigma1(f);
            ok[0] &= sigma1(&s) == *f;
            ok[1] &= exchange_check_d(&s)?.is_empty() && set.contains(&s) && s != *f;
            if n % 2 == 0 {
                for anchor in 0..n {
                    let t = sigma2(f, anchor)?;
                    ok[2] &= sigma2(&t, anchor)? == *f;
                    ok[3] &= exchange_check_d(&t)?.is_empty() && set.contains(&t);
                }
            }
            let (p, tag) = normalize_d(f)?;
            ok[4] &= p.is_positive() && apply_d_tag(&p, tag)? == *f;
        }
        let names = ["sigma1 involution", "sigma1 preserves friezes, fixed-point-free", "sigma2 involution",
            "sigma2 preserves friezes", "normalize round-trip"];
        for (i, (name, v)) in names.iter().zip(ok).enumerate() {
            if n % 2 == 1 && (i == 2 || i == 3) {
                continue;
            }
            out.push(check(Suite::Involutions, format!("D n={n} {name}"), true, v));
        }
    }
    Ok(out)
}

/// Number of admissible labelings for each boundary bit pattern, counted by
/// brute force over internal signs. Bit `k` of a mask is arc `k` of
/// `boundary ++ internal`, set meaning minus.
fn brute_force_extensions(t: &crate::polygon::Triangulation) -> Vec<usize> {
    let n = t.n();
    let arcs: Vec<Arc> = crate::polygon::boundary_arcs(n).into_iter().chain(t.internal().iter().copied()).collect();
    let pos = |a: &Arc| arcs.iter().position(|b| b == a).expect("edge of t");
    // BoundaryState bit k sits on the arc joining k and k+1
    let boundary_bit: Vec<usize> = (0..n).map(|k| pos(&Arc::wrapping(k, k + 1, n))).collect();
    let cycles: Vec<u64> =
        four_cycles(t).iter().map(|c| c.iter().fold(0u64, |m, a| m | 1 << pos(a))).collect();
    let internal = t.internal().len();
    let mut counts = vec![0usize; 1 << n];
    for b in 0..1u64 << n {
        let mut mask = 0u64;
        for k in 0..n {
            if b >> k & 1 == 1 {
                mask |= 1 << boundary_bit[k];
            }
        }
        for i in 0..1u64 << internal {
            let full = mask | i << n;
            if cycles.iter().all(|c| (full & c).count_ones().is_multiple_of(2)) {
                counts[b as usize] += 1;
            }
        }
    }
    counts
}

pub fn admissible(opts: Options) -> Result<Vec<Check>> {
    let max_n = opts.max_n.unwrap_or(if opts.quick { 8 } else { 9 });
    let mut out = Vec::new();
    for n in 3..=max_n {
        let mut agree = true;
        let mut law = true;
        for t in enumerate_triangulations(n)? {
            let brute = brute_force_extensions(&t);
            for (bits, &count) in brute.iter().enumerate() {
                let b = BoundaryState::from_bits(n, bits as u64);
                let expected = match (n % 2, b.product()) {
                    (1, _) => 1,
                    (_, Sign::Plus) => 2,
                    (_, Sign::Minus) => 0,
                };
                law &= count == expected;
                agree &= match extend_boundary(&t, &b) {
                    Ok(ls) => ls.len() == count,
                    Err(_) => false,
                };
            }
        }
        out.push(check(Suite::Admissible, format!("n={n} extension law"), true, law));
        out.push(check(Suite::Admissible, format!("n={n} extension matches brute force"), true, agree));
    }
    Ok(out)
}

pub fn folding(opts: Options) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (kind, rank) in folded_cases(opts) {
        let (s, fs) = enumerate_folded(kind, rank)?;
        let upstairs = unfolded_friezes(kind, rank)?;
        let inv = invariant_friezes(&upstairs, &s);
        let mut round = inv.len() == fs.len();
        for g in &fs {
            let f = lift(g, &s)?;
            round &= f.is_valid()? && fold(&f, &s, kind, rank)? == *g;
        }
        out.push(check(Suite::Folding, format!("{}{rank} count", kind.name()), folded_count_formula(kind, rank)?, fs.len() as u64));
        out.push(check(Suite::Folding, format!("{}{rank} fold/lift round-trip", kind.name()), true, round));
        if kind == FoldedType::G2 {
            out.push(check(Suite::Folding, "G2 all positive", true, fs.iter().all(|g| g.is_positive())));
        }
    }
    let b2 = enumerate_folded(FoldedType::B, 2)?.1.len();
    let c2 = enumerate_folded(FoldedType::C, 2)?.1.len();
    out.push(check(Suite::Folding, "B2 from D3 equals C2 from A3", json!([12, 12]), json!([b2, c2])));

    // the sign involutions against the folding symmetries
    let rot = rotation_action(2)?;
    let a6: Vec<Frieze> = enumerate_nonzero_a(6, Ring::Z)?.into_iter().map(Frieze::A).collect();
    let mut commutes = true;
    for f in &a6 {
        let Frieze::A(a) = f else { unreachable!() };
        let lhs = rot.act(&Frieze::A(sigma(a)?))?;
        let Frieze::A(ra) = rot.act(f)? else { unreachable!() };
        commutes &= lhs == Frieze::A(sigma(&ra)?);
    }
    out.push(check(Suite::Folding, "sigma commutes with rotation", true, commutes));

    let swap = tag_swap_action(4)?;
    let d4: Vec<Frieze> = enumerate_nonzero_d(4)?.into_iter().map(Frieze::D).collect();
    let (mut commutes, mut breaks) = (true, true);
    for f in &d4 {
        let Frieze::D(d) = f else { unreachable!() };
        let Frieze::D(sd) = swap.act(f)? else { unreachable!() };
        commutes &= swap.act(&Frieze::D(sigma1(d)))? == Frieze::D(sigma1(&sd));
        if swap.is_invariant(f) {
            breaks &= !swap.is_invariant(&Frieze::D(sigma2(d, 0)?));
        }
    }
    out.push(check(Suite::Folding, "sigma1 commutes with tag swap", true, commutes));
    out.push(check(Suite::Folding, "sigma2 breaks tag-swap invariance", true, breaks));
    Ok(out)
}

/// Canonical JSON of an enumeration, as the CLI writes it.
pub fn enumeration_bytes(friezes: &[Frieze]) -> Vec<u8> {
    let v: Vec<Value> = friezes.iter().map(Frieze::to_json).collect();
    serde_json::to_vec(&v).expect("serialisable")
}

pub fn determinism(_opts: Options) -> Result<Vec<Check>> {
    let run = |threads: usize| -> Result<Vec<u8>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| FriezeError::InvalidInput(e.to_string()))?;
        pool.install(|| {
            let mut all: Vec<Frieze> = enumerate_nonzero_a(8, Ring::Z)?.into_iter().map(Frieze::A).collect();
            all.extend(enumerate_nonzero_d(4)?.into_iter().map(Frieze::D));
            Ok(enumeration_bytes(&all))
        })
    };
    let base = run(1)?;
    let mut same = true;
    for threads in [1, 2, 4, 8] {
        same &= run(threads)? == base;
    }
    Ok(vec![check(Suite::Determinism, "enumeration bytes across thread counts", true, same)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_small() {
        let checks = admissible(Options { max_n: Some(7), ..Options::default() }).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:#?}");
    }

    #[test]
    fn failing_check_is_reported() {
        let c = check(Suite::Counts, "x", 3, 4);
        assert!(!c.pass);
        assert!(!Report { checks: vec![c] }.pass());
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
