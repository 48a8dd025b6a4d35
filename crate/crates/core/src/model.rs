//! Domain model of a chemical reaction network and its sign structure.
//!
//! The two matrices derived here drive everything else: the stoichiometric
//! matrix `gamma` (species x reactions, net change per firing) and the sign
//! pattern `dr_sign` of the rate Jacobian (reactions x species). Both are
//! integer-valued and independent of rate constants.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

/// A chemical species. Ids are dense indices into [`Network::species`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Species {
    pub id: usize,
    pub name: String,
}

/// A single reaction, possibly reversible, with mass-action rate constants.
///
/// Promoters (catalysts) affect the rate with unit exponent but have zero net
/// stoichiometry. A species may appear on both sides with unequal
/// coefficients, in which case only the difference enters `gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    pub id: usize,
    pub name: String,
    /// species id -> stoichiometric coefficient (strictly positive)
    pub reactants: BTreeMap<usize, u32>,
    /// species id -> stoichiometric coefficient (strictly positive)
    pub products: BTreeMap<usize, u32>,
    pub promoters: BTreeSet<usize>,
    pub reversible: bool,
    pub k_fwd: f64,
    /// present iff `reversible`
    pub k_bwd: Option<f64>,
}

/// An immutable reaction network with initial concentrations.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub species: Vec<Species>,
    pub reactions: Vec<Reaction>,
    /// indexed by species id, one entry per species, all non-negative
    pub initial: Vec<f64>,
}

/// Integer sign data of a network: `gamma[j][i]` is the net coefficient of
/// species `j` in reaction `i`; `dr_sign[i][j]` is the constant sign of
/// d(rate_i)/d(conc_j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignStructure {
    /// species x reactions
    pub gamma: Vec<Vec<i64>>,
    /// reactions x species, entries in {-1, 0, +1}
    pub dr_sign: Vec<Vec<i8>>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("duplicate species name `{0}`")]
    DuplicateSpeciesName(String),
    #[error("species ids must be contiguous from 0")]
    NonContiguousIds,
    #[error("reaction `{reaction}` references unknown species id {species}")]
    UnknownSpecies { reaction: String, species: usize },
    #[error("species `{species}` of reaction `{reaction}` cannot be both a promoter and a reactant/product")]
    PromoterOverlap { reaction: String, species: String },
    #[error("stoichiometric coefficients must be strictly positive (reaction `{0}`)")]
    ZeroCoefficient(String),
    #[error("species `{species}` appears with equal coefficients on both sides of reaction `{reaction}`; declare it a promoter (bracket syntax) instead")]
    CatalystBothSides { reaction: String, species: String },
    #[error("species `{species}` appears on both sides of reversible reaction `{reaction}`; the rate sign with respect to it would not be constant")]
    ReversibleBothSides { reaction: String, species: String },
    #[error("reaction `{reaction}` produces more `{species}` than it consumes while `{species}` drives its rate; such autocatalysis is outside the supported rate-law family")]
    RateSignAssumption { reaction: String, species: String },
    #[error("rate constant of reaction `{0}` must be positive and finite")]
    NonPositiveRate(String),
    #[error("reaction `{0}` is irreversible but has a backward rate constant")]
    UnexpectedBackwardRate(String),
    #[error("reaction `{0}` is reversible but has no backward rate constant")]
    MissingBackwardRate(String),
    #[error("initial concentrations must be non-negative and cover every species")]
    BadInitial,
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl Network {
    /// Build a network, checking every structural invariant.
    pub fn new(
        species: Vec<Species>,
        reactions: Vec<Reaction>,
        initial: Vec<f64>,
    ) -> Result<Self, ModelError> {
        let net = Network {
            species,
            reactions,
            initial,
        };
        net.validate()?;
        Ok(net)
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn species_id(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    fn validate(&self) -> Result<(), ModelError> {
        let s = self.species.len();
        let mut names = BTreeSet::new();
        for (i, sp) in self.species.iter().enumerate() {
            if sp.id != i {
                return Err(ModelError::NonContiguousIds);
            }
            if !names.insert(sp.name.as_str()) {
                return Err(ModelError::DuplicateSpeciesName(sp.name.clone()));
            }
        }
        if self.initial.len() != s || self.initial.iter().any(|&c| c < 0.0 || !c.is_finite()) {
            return Err(ModelError::BadInitial);
        }
        for (i, rx) in self.reactions.iter().enumerate() {
            if rx.id != i {
                return Err(ModelError::NonContiguousIds);
            }
            let name = || rx.name.clone();
            for &j in rx
                .reactants
                .keys()
                .chain(rx.products.keys())
                .chain(rx.promoters.iter())
            {
                if j >= s {
                    return Err(ModelError::UnknownSpecies {
                        reaction: name(),
                        species: j,
                    });
                }
            }
            if rx.reactants.values().chain(rx.products.values()).any(|&c| c == 0) {
                return Err(ModelError::ZeroCoefficient(name()));
            }
            for &j in &rx.promoters {
                if rx.reactants.contains_key(&j) || rx.products.contains_key(&j) {
                    return Err(ModelError::PromoterOverlap {
                        reaction: name(),
                        species: self.species[j].name.clone(),
                    });
                }
            }
            for (&j, &alpha) in &rx.reactants {
                if let Some(&beta) = rx.products.get(&j) {
                    if alpha == beta {
                        return Err(ModelError::CatalystBothSides {
                            reaction: name(),
                            species: self.species[j].name.clone(),
                        });
                    }
                    if rx.reversible {
                        return Err(ModelError::ReversibleBothSides {
                            reaction: name(),
                            species: self.species[j].name.clone(),
                        });
                    }
                    if beta > alpha {
                        // dr_sign would be +1 while gamma is positive,
                        // breaking the constant-sign rate assumption.
                        return Err(ModelError::RateSignAssumption {
                            reaction: name(),
                            species: self.species[j].name.clone(),
                        });
                    }
                }
            }
            if rx.k_fwd <= 0.0 || !rx.k_fwd.is_finite() {
                return Err(ModelError::NonPositiveRate(name()));
            }
            match (rx.reversible, rx.k_bwd) {
                (false, Some(_)) => return Err(ModelError::UnexpectedBackwardRate(name())),
                (true, None) => return Err(ModelError::MissingBackwardRate(name())),
                (true, Some(k)) if k <= 0.0 || !k.is_finite() => {
                    return Err(ModelError::NonPositiveRate(name()))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Derive the stoichiometric matrix and the rate-Jacobian sign pattern.
pub fn build_sign_structure(network: &Network) -> SignStructure {
    let s = network.num_species();
    let r = network.num_reactions();
    let mut gamma = vec![vec![0i64; r]; s];
    let mut dr_sign = vec![vec![0i8; s]; r];
    for (i, rx) in network.reactions.iter().enumerate() {
        for (&j, &alpha) in &rx.reactants {
            gamma[j][i] -= alpha as i64;
            dr_sign[i][j] = 1;
        }
        for (&j, &beta) in &rx.products {
            gamma[j][i] += beta as i64;
            if rx.reversible && !rx.reactants.contains_key(&j) {
                dr_sign[i][j] = -1;
            }
        }
        for &j in &rx.promoters {
            dr_sign[i][j] = 1;
        }
    }
    // Validation guarantees the rate-sign assumption; keep it checked.
    for i in 0..r {
        for j in 0..s {
            debug_assert!(i64::from(dr_sign[i][j]) * gamma[j][i] <= 0);
        }
    }
    SignStructure { gamma, dr_sign }
}

/// Net mass-action rate of every reaction at the given concentrations.
pub fn rate_vector(network: &Network, conc: &[f64]) -> Result<Vec<f64>, ModelError> {
    let s = network.num_species();
    if conc.len() != s {
        return Err(ModelError::DimensionMismatch {
            expected: s,
            got: conc.len(),
        });
    }
    let mut rates = Vec::with_capacity(network.num_reactions());
    for rx in &network.reactions {
        let mut fwd = rx.k_fwd;
        for (&j, &alpha) in &rx.reactants {
            fwd *= conc[j].powi(alpha as i32);
        }
        for &j in &rx.promoters {
            fwd *= conc[j];
        }
        let mut rate = fwd;
        if let Some(k_bwd) = rx.k_bwd {
            let mut bwd = k_bwd;
            for (&j, &beta) in &rx.products {
                bwd *= conc[j].powi(beta as i32);
            }
            rate -= bwd;
        }
        rates.push(rate);
    }
    Ok(rates)
}

/// Time derivative of every species: `gamma * rate_vector`.
pub fn species_derivatives(network: &Network, conc: &[f64]) -> Result<Vec<f64>, ModelError> {
    let rates = rate_vector(network, conc)?;
    let mut deriv = vec![0.0; network.num_species()];
    for (i, rx) in network.reactions.iter().enumerate() {
        for (&j, &alpha) in &rx.reactants {
            deriv[j] -= alpha as f64 * rates[i];
        }
        for (&j, &beta) in &rx.products {
            deriv[j] += beta as f64 * rates[i];
        }
    }
    Ok(deriv)
}

/// Basis of integer left null vectors of `gamma` (conservation laws).
///
/// Exact elimination over rationals, results scaled to coprime integers.
pub fn left_null_vectors(gamma: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let s = gamma.len();
    if s == 0 {
        return Vec::new();
    }
    let r = gamma[0].len();
    // Row-reduce the s x r matrix; null space of the row space action,
    // i.e. vectors w with w^T gamma = 0, tracked through an identity block.
    let mut m: Vec<Vec<Ratio<i64>>> = (0..s)
        .map(|j| {
            (0..r)
                .map(|i| Ratio::from_integer(gamma[j][i]))
                .chain((0..s).map(|k| Ratio::from_integer(i64::from(k == j))))
                .collect()
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..r {
        let Some(p) = (pivot_row..s).find(|&row| m[row][col] != Ratio::from_integer(0)) else {
            continue;
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][col];
        for x in m[pivot_row].iter_mut() {
            *x /= inv;
        }
        let pivot = m[pivot_row].clone();
        for (row, entries) in m.iter_mut().enumerate() {
            if row != pivot_row && entries[col] != Ratio::from_integer(0) {
                let f = entries[col];
                for (x, p) in entries.iter_mut().zip(&pivot) {
                    *x -= f * *p;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == s {
            break;
        }
    }
    let mut basis = Vec::new();
    for row in m.iter().take(s).skip(pivot_row) {
        let w: Vec<Ratio<i64>> = row[r..].to_vec();
        let lcm = w
            .iter()
            .fold(1i64, |acc, x| acc.lcm(x.denom()));
        let mut v: Vec<i64> = w.iter().map(|x| (*x * lcm).to_integer()).collect();
        let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g > 1 {
            v.iter_mut().for_each(|x| *x /= g);
        }
        basis.push(v);
    }
    basis
}
