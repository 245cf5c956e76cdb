//! A frieze of either geometric model, for code that handles both.

use crate::error::{FriezeError, Result};
use crate::frieze_a::{ptolemy_check, AFrieze};
use crate::frieze_d::{exchange_check_d, DFrieze};
use crate::ring::{Ring, RingElement};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Frieze {
    A(AFrieze),
    D(DFrieze),
}

impl Frieze {
    pub fn kind(&self) -> &'static str {
        match self {
            Frieze::A(_) => "A",
            Frieze::D(_) => "D",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Frieze::A(f) => f.n(),
            Frieze::D(f) => f.n(),
        }
    }

    pub fn ring(&self) -> Ring {
        match self {
            Frieze::A(f) => f.ring(),
            Frieze::D(f) => f.ring(),
        }
    }

    /// Labels in the model's canonical variable order.
    pub fn values(&self) -> &[RingElement] {
        match self {
            Frieze::A(f) => f.values(),
            Frieze::D(f) => f.values(),
        }
    }

    /// Same model, new values in canonical order.
    pub fn with_values(&self, values: Vec<RingElement>) -> Result<Frieze> {
        Ok(match self {
            Frieze::A(f) => Frieze::A(AFrieze::from_values(f.n(), f.ring(), values)?),
            Frieze::D(f) => Frieze::D(DFrieze::from_values(f.n(), f.ring(), values)?),
        })
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Frieze::A(f) => f.is_positive(),
            Frieze::D(f) => f.is_positive(),
        }
    }

    /// Whether every relation of the model holds and no label is zero.
    pub fn is_valid(&self) -> Result<bool> {
        Ok(match self {
            Frieze::A(f) => ptolemy_check(f).is_empty(),
            Frieze::D(f) => exchange_check_d(f)?.is_empty(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Frieze::A(f) => f.to_json(),
            Frieze::D(f) => f.to_json(),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v.get("type").and_then(|t| t.as_str()) {
            Some("A") => Ok(Frieze::A(AFrieze::from_json(v)?)),
            Some("D") => Ok(Frieze::D(DFrieze::from_json(v)?)),
            other => Err(FriezeError::InvalidInput(format!("unsupported frieze type {other:?}"))),
        }
    }
}
