//! Finite discrete laws, possibly sub-normalized.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::MASS_TOLERANCE;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub value: f64,
    pub mass: f64,
}

/// A finite list of `(value, mass)` atoms.
///
/// Proper laws carry total mass 1 (within `1e-12`). Sub-normalized laws may
/// carry less; they describe the part of a transition law that survives
/// restriction to non-absorbing successors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionFile", into = "DistributionFile")]
pub struct DiscreteDistribution {
    atoms: Vec<Atom>,
    total_mass: f64,
    sub_normalized: bool,
}

/// On-disk shape: `atoms = [[value, mass], ...]`, `sub_normalized = false`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionFile {
    pub atoms: Vec<(f64, f64)>,
    #[serde(default)]
    pub sub_normalized: bool,
}

impl TryFrom<DistributionFile> for DiscreteDistribution {
    type Error = Error;

    fn try_from(file: DistributionFile) -> Result<Self> {
        if file.sub_normalized {
            DiscreteDistribution::sub_normalized(file.atoms)
        } else {
            DiscreteDistribution::new(file.atoms)
        }
    }
}

impl From<DiscreteDistribution> for DistributionFile {
    fn from(d: DiscreteDistribution) -> Self {
        DistributionFile {
            atoms: d.atoms.iter().map(|a| (a.value, a.mass)).collect(),
            sub_normalized: d.sub_normalized,
        }
    }
}

impl DiscreteDistribution {
    /// A proper law; masses must sum to one.
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let d = Self::build(atoms, false)?;
        if (d.total_mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {}, expected 1",
                d.total_mass
            )));
        }
        Ok(d)
    }

    /// A law whose total mass may be anywhere in `[0, 1]`.
    pub fn sub_normalized(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let d = Self::build(atoms, true)?;
        if d.total_mass > 1.0 + MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {}, exceeding 1",
                d.total_mass
            )));
        }
        Ok(d)
    }

    pub fn point_mass(value: f64) -> Result<Self> {
        Self::new(vec![(value, 1.0)])
    }

    fn build(atoms: Vec<(f64, f64)>, sub_normalized: bool) -> Result<Self> {
        for (i, &(value, mass)) in atoms.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::InvalidDistribution(format!(
                    "atom {i} has non-finite value {value}"
                )));
            }
            if !(mass.is_finite() && mass >= 0.0) {
                return Err(Error::InvalidDistribution(format!("atom {i} has invalid mass {mass}")));
            }
        }
        let atoms: Vec<Atom> = atoms.into_iter().map(|(value, mass)| Atom { value, mass }).collect();
        let total_mass = atoms.iter().map(|a| a.mass).sum();
        Ok(DiscreteDistribution {
            atoms,
            total_mass,
            sub_normalized,
        })
    }

    /// Assembles a law from atoms already known to be finite with
    /// non-negative mass.
    pub(crate) fn from_atoms_unchecked(atoms: Vec<Atom>, sub_normalized: bool) -> Self {
        let total_mass = atoms.iter().map(|a| a.mass).sum();
        DiscreteDistribution {
            atoms,
            total_mass,
            sub_normalized,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn is_sub_normalized(&self) -> bool {
        self.sub_normalized
    }

    pub fn is_proper(&self) -> bool {
        (self.total_mass - 1.0).abs() <= MASS_TOLERANCE
    }

    /// `sum(value * mass)`; for sub-normalized laws this is the defective mean.
    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.value * a.mass).sum()
    }

    pub fn min_value(&self) -> Option<f64> {
        self.atoms.iter().map(|a| a.value).reduce(f64::min)
    }

    pub fn max_value(&self) -> Option<f64> {
        self.atoms.iter().map(|a| a.value).reduce(f64::max)
    }

    /// Sorted by value, duplicate values merged, zero-mass atoms dropped.
    pub fn merged(&self) -> DiscreteDistribution {
        let mut atoms: Vec<Atom> = self.atoms.iter().copied().filter(|a| a.mass > 0.0).collect();
        atoms.sort_by(|a, b| a.value.total_cmp(&b.value));
        let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match out.last_mut() {
                Some(last) if last.value == a.value => last.mass += a.mass,
                _ => out.push(a),
            }
        }
        DiscreteDistribution {
            atoms: out,
            total_mass: self.total_mass,
            sub_normalized: self.sub_normalized,
        }
    }
}
