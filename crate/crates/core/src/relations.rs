//! Exchange relations `x·x' = M₁ + M₂` over indexed variables, and
//! propagation of a seed through them.
//!
//! Both geometric models compile their flips into a [`RelationSystem`]: for
//! the polygon every quadrilateral contributes its Ptolemy relation, for the
//! punctured polygon every flip of every tagged triangulation contributes its
//! exchange relation. Propagation repeatedly solves a relation whose only
//! unknown is one of its two exchanged variables, then re-checks every
//! relation, so a frieze is accepted only if all flip routes agree.

use std::collections::VecDeque;

use crate::error::{FriezeError, Result};
use crate::ring::RingElement;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    /// The exchanged pair.
    pub lhs: [usize; 2],
    /// The two monomials; an empty monomial is 1.
    pub rhs: [Vec<usize>; 2],
}

impl Relation {
    pub fn new(lhs: [usize; 2], mut rhs: [Vec<usize>; 2]) -> Self {
        let mut lhs = lhs;
        lhs.sort_unstable();
        rhs[0].sort_unstable();
        rhs[1].sort_unstable();
        rhs.sort();
        Relation { lhs, rhs }
    }

    fn monomial(&self, k: usize, values: &[RingElement], one: &RingElement) -> RingElement {
        self.rhs[k].iter().fold(one.clone(), |acc, &v| &acc * &values[v])
    }

    pub fn holds(&self, values: &[RingElement]) -> bool {
        let one = values[self.lhs[0]].ring().one();
        let left = &values[self.lhs[0]] * &values[self.lhs[1]];
        let right = &self.monomial(0, values, &one) + &self.monomial(1, values, &one);
        left == right
    }

    pub fn variables(&self) -> impl Iterator<Item = usize> + '_ {
        self.lhs.iter().chain(self.rhs[0].iter()).chain(self.rhs[1].iter()).copied()
    }
}

#[derive(Clone, Debug)]
pub struct RelationSystem {
    num_vars: usize,
    relations: Vec<Relation>,
    touching: Vec<Vec<usize>>,
}

impl RelationSystem {
    pub fn new(num_vars: usize, mut relations: Vec<Relation>) -> Self {
        relations.sort();
        relations.dedup();
        let mut touching = vec![Vec::new(); num_vars];
        for (r, rel) in relations.iter().enumerate() {
            for v in rel.variables() {
                if touching[v].last() != Some(&r) {
                    touching[v].push(r);
                }
            }
        }
        RelationSystem { num_vars, relations, touching }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Indices of relations that fail (zero-valued variables are reported by
    /// the caller, not here).
    pub fn violations(&self, values: &[RingElement]) -> Vec<usize> {
        (0..self.relations.len()).filter(|&r| !self.relations[r].holds(values)).collect()
    }

    /// Solves for every variable starting from `seed`, processing relations in
    /// index order.
    pub fn propagate(
        &self,
        seed: Vec<Option<RingElement>>,
        name: &dyn Fn(usize) -> String,
    ) -> Result<Vec<RingElement>> {
        let order: Vec<usize> = (0..self.relations.len()).collect();
        self.propagate_in_order(seed, &order, name)
    }

    /// As [`propagate`](Self::propagate) with an explicit initial processing
    /// order of relations (a permutation of their indices).
    pub fn propagate_in_order(
        &self,
        mut values: Vec<Option<RingElement>>,
        order: &[usize],
        name: &dyn Fn(usize) -> String,
    ) -> Result<Vec<RingElement>> {
        assert_eq!(values.len(), self.num_vars, "seed has wrong length");
        for (v, x) in values.iter().enumerate() {
            if x.as_ref().is_some_and(RingElement::is_zero) {
                return Err(FriezeError::ZeroLabel { arc: name(v) });
            }
        }
        let ring = values
            .iter()
            .flatten()
            .next()
            .map(RingElement::ring)
            .ok_or_else(|| FriezeError::InvalidInput("empty seed".into()))?;
        if let Some(bad) = values.iter().flatten().find(|x| x.ring() != ring) {
            return Err(FriezeError::RingMismatch(ring, bad.ring()));
        }
        let one = ring.one();

        let mut queued = vec![false; self.relations.len()];
        let mut queue: VecDeque<usize> = VecDeque::with_capacity(self.relations.len());
        for &r in order {
            if !queued[r] {
                queued[r] = true;
                queue.push_back(r);
            }
        }
        while let Some(r) = queue.pop_front() {
            queued[r] = false;
            let rel = &self.relations[r];
            let [x, y] = rel.lhs;
            let (unknown, known) = match (&values[x], &values[y]) {
                (None, Some(_)) => (x, y),
                (Some(_), None) => (y, x),
                _ => continue,
            };
            if rel.rhs.iter().flatten().any(|&v| values[v].is_none()) {
                continue;
            }
            let mut total = one.clone();
            for k in 0..2 {
                let m = rel.rhs[k].iter().fold(one.clone(), |acc, &v| &acc * values[v].as_ref().unwrap());
                total = if k == 0 { m } else { &total + &m };
            }
            let divisor = values[known].as_ref().unwrap();
            let value = total
                .exact_div(divisor)?
                .ok_or_else(|| FriezeError::NotIntegral { arc: name(unknown) })?;
            if value.is_zero() {
                return Err(FriezeError::ZeroLabel { arc: name(unknown) });
            }
            values[unknown] = Some(value);
            for &next in &self.touching[unknown] {
                if !queued[next] {
                    queued[next] = true;
                    queue.push_back(next);
                }
            }
        }

        let values: Vec<RingElement> = values
            .into_iter()
            .enumerate()
            .map(|(v, x)| x.ok_or_else(|| FriezeError::Underdetermined { arc: name(v) }))
            .collect::<Result<_>>()?;
        if let Some(&r) = self.violations(&values).first() {
            let [x, y] = self.relations[r].lhs;
            return Err(FriezeError::Inconsistent { arc: format!("{} / {}", name(x), name(y)) });
        }
        Ok(values)
    }
}
