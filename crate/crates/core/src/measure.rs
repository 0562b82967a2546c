//! Finite atomic measure spaces and the lattice-ordered ring `L0(X)`.
//!
//! Every measurable function on an atomic space is determined by its value on
//! each atom, so `L0(X)` is stored as one rational per atom. Suprema and infima
//! of finite families are per-atom max/min; countable suprema never need to be
//! materialized here.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{one, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub id: String,
    pub weight: Rational,
}

/// A nonempty ordered list of atoms with strictly positive masses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureSpace {
    atoms: Vec<Atom>,
}

impl MeasureSpace {
    pub fn new<S: Into<String>>(atoms: impl IntoIterator<Item = (S, Rational)>) -> Result<Self> {
        let atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|(id, weight)| Atom {
                id: id.into(),
                weight,
            })
            .collect();
        if atoms.is_empty() {
            return Err(Error::InvalidSpace("no atoms".into()));
        }
        let mut seen = BTreeSet::new();
        for atom in &atoms {
            if !atom.weight.is_positive() {
                return Err(Error::InvalidSpace(format!(
                    "atom `{}` has non-positive weight",
                    atom.id
                )));
            }
            if !seen.insert(atom.id.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate atom `{}`", atom.id)));
            }
        }
        Ok(Self { atoms })
    }

    /// `n` atoms named `x0, x1, ...` with unit mass.
    pub fn uniform(n: usize) -> Self {
        Self::new((0..n).map(|i| (format!("x{i}"), one()))).expect("n > 0")
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom_id(&self, index: usize) -> &str {
        &self.atoms[index].id
    }

    pub fn atom_index(&self, id: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a.id == id)
    }

    pub fn total_mass(&self) -> Rational {
        self.atoms.iter().map(|a| &a.weight).sum()
    }

    /// Weights of the normalized probability measure; they sum to exactly 1.
    pub fn probability_weights(&self) -> Vec<Rational> {
        let total = self.total_mass();
        self.atoms.iter().map(|a| &a.weight / &total).collect()
    }

    /// The restricted measure `m|_E` as a space on its own.
    pub fn restriction(&self, subset: &[&str]) -> Result<Self> {
        let indices = self.resolve_subset(subset)?;
        Self::new(
            self.atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| indices.contains(i))
                .map(|(_, a)| (a.id.clone(), a.weight.clone())),
        )
    }

    pub(crate) fn resolve_subset<S: AsRef<str>>(&self, subset: &[S]) -> Result<BTreeSet<usize>> {
        subset
            .iter()
            .map(|id| {
                self.atom_index(id.as_ref())
                    .ok_or_else(|| Error::UnknownAtom(id.as_ref().to_string()))
            })
            .collect()
    }
}

pub(crate) fn same_space(a: &Arc<MeasureSpace>, b: &Arc<MeasureSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L0Op {
    Add,
    Sub,
    Mul,
    Min,
    Max,
}

/// An element of `L0(X)`: one rational value per atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L0Function {
    space: Arc<MeasureSpace>,
    values: Vec<Rational>,
}

impl L0Function {
    pub fn new(space: Arc<MeasureSpace>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: values.len(),
            });
        }
        Ok(Self { space, values })
    }

    pub fn constant(space: Arc<MeasureSpace>, value: Rational) -> Self {
        let values = vec![value; space.len()];
        Self { space, values }
    }

    pub fn zero(space: Arc<MeasureSpace>) -> Self {
        Self::constant(space, Rational::zero())
    }

    /// The characteristic function of a set of atoms.
    pub fn indicator<S: AsRef<str>>(space: Arc<MeasureSpace>, subset: &[S]) -> Result<Self> {
        let members = space.resolve_subset(subset)?;
        let values = (0..space.len())
            .map(|i| {
                if members.contains(&i) {
                    one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Ok(Self { space, values })
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, atom: usize) -> &Rational {
        &self.values[atom]
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn combine(&self, other: &Self, op: L0Op) -> Result<Self> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(f, g)| match op {
                L0Op::Add => f + g,
                L0Op::Sub => f - g,
                L0Op::Mul => f * g,
                L0Op::Min => f.min(g).clone(),
                L0Op::Max => f.max(g).clone(),
            })
            .collect();
        Ok(Self {
            space: self.space.clone(),
            values,
        })
    }

    pub fn abs(&self) -> Self {
        self.map(|v| v.abs())
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    /// `∫ |f - g| ∧ 1` against the normalized measure.
    pub fn distance(&self, other: &Self) -> Result<Rational> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        let weights = self.space.probability_weights();
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(&weights)
            .map(|((f, g), w)| w * (f - g).abs().min(one()))
            .sum())
    }

    /// Per-atom `f <= g`.
    pub fn le(&self, other: &Self) -> Result<bool> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.values.iter().zip(&other.values).all(|(f, g)| f <= g))
    }

    /// Atoms where the function is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| !self.values[i].is_zero())
            .collect()
    }
}
