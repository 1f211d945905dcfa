//! Scalars of the form `c + Σ aᵢ·vᵢ` over named decision variables.

use std::collections::BTreeMap;
use std::fmt;

use super::{Result, SymbolicError};

/// Identifier of a scalar decision variable issued by a [`VarSpace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

/// Registry of decision-variable names. Ids are dense and issued in order,
/// which fixes the variable ordering everywhere downstream (SDP columns,
/// exports).
#[derive(Debug, Clone, Default)]
pub struct VarSpace {
    names: Vec<String>,
}

impl VarSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self, name: impl Into<String>) -> VarId {
        let id = VarId(self.names.len() as u32);
        self.names.push(name.into());
        id
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.names[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> {
        (0..self.names.len() as u32).map(VarId)
    }
}

/// Relative tolerance for dropping negligible coefficients; scaled by the
/// largest coefficient magnitude of the scalar it is applied to.
pub const COEF_TOL: f64 = 1e-12;

/// A real constant plus a linear combination of decision variables.
///
/// Canonical form: no stored term has a coefficient below `COEF_TOL` relative
/// to the scalar's largest coefficient.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AffineScalar {
    pub constant: f64,
    pub terms: BTreeMap<VarId, f64>,
}

impl AffineScalar {
    pub fn zero() -> Self {
        AffineScalar::default()
    }

    pub fn constant(c: f64) -> Self {
        AffineScalar { constant: c, terms: BTreeMap::new() }
    }

    pub fn var(id: VarId) -> Self {
        Self::term(id, 1.0)
    }

    pub fn term(id: VarId, coef: f64) -> Self {
        let mut terms = BTreeMap::new();
        if coef != 0.0 {
            terms.insert(id, coef);
        }
        AffineScalar { constant: 0.0, terms }
    }

    /// Largest coefficient magnitude (constant included).
    pub fn magnitude(&self) -> f64 {
        self.terms
            .values()
            .fold(self.constant.abs(), |m, c| m.max(c.abs()))
    }

    pub fn has_terms(&self) -> bool {
        !self.terms.is_empty()
    }

    /// Drop coefficients that are negligible relative to the scalar itself.
    pub fn canonicalize(&mut self) {
        let tol = COEF_TOL * self.magnitude().max(1.0);
        self.terms.retain(|_, c| c.abs() > tol);
        if self.constant.abs() <= tol && self.terms.is_empty() {
            self.constant = 0.0;
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.constant.abs() <= tol && self.terms.values().all(|c| c.abs() <= tol)
    }

    pub fn add(&self, other: &AffineScalar) -> AffineScalar {
        let mut out = self.clone();
        out.constant += other.constant;
        for (&id, &c) in &other.terms {
            *out.terms.entry(id).or_insert(0.0) += c;
        }
        out.canonicalize();
        out
    }

    pub fn sub(&self, other: &AffineScalar) -> AffineScalar {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, k: f64) -> AffineScalar {
        let mut out = AffineScalar {
            constant: self.constant * k,
            terms: self.terms.iter().map(|(&id, &c)| (id, c * k)).collect(),
        };
        out.canonicalize();
        out
    }

    /// Product; affine only when at most one factor carries variables.
    pub fn mul(&self, other: &AffineScalar) -> Result<AffineScalar> {
        if self.has_terms() && other.has_terms() {
            return Err(SymbolicError::BilinearProduct);
        }
        if self.has_terms() {
            Ok(self.scale(other.constant))
        } else {
            Ok(other.scale(self.constant))
        }
    }

    /// Evaluate with a full assignment vector indexed by `VarId`.
    pub fn eval(&self, assignment: &[f64]) -> Result<f64> {
        let mut v = self.constant;
        for (&id, &c) in &self.terms {
            let x = assignment
                .get(id.0 as usize)
                .ok_or_else(|| SymbolicError::UnassignedVariable(format!("#{}", id.0)))?;
            v += c * x;
        }
        Ok(v)
    }

    /// Numeric value of a pure-data scalar.
    pub fn eval_data(&self) -> Result<f64> {
        if self.has_terms() {
            let id = *self.terms.keys().next().unwrap();
            return Err(SymbolicError::UnassignedVariable(format!("#{}", id.0)));
        }
        Ok(self.constant)
    }

    pub fn approx_eq(&self, other: &AffineScalar, tol: f64) -> bool {
        self.sub(other).is_zero(tol)
    }
}

impl fmt::Display for AffineScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (id, c) in &self.terms {
            write!(f, " + {}*v{}", c, id.0)?;
        }
        Ok(())
    }
}
