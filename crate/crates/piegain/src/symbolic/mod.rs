//! Matrix-valued polynomials in the spatial variables (s, θ, η) with
//! coefficients affine in scalar decision variables.
//!
//! Everything here is exact up to f64 arithmetic: products distribute
//! symbolically, definite integrals are antiderivatives evaluated at the
//! bounds, and variable renaming permutes exponents. Coefficients live in
//! [`AffineScalar`] so that an entire operator inequality stays affine in the
//! unknowns of the eventual semidefinite program; a product of two objects
//! that both carry decision variables is rejected as [`SymbolicError::BilinearProduct`].

mod affine;
mod matpoly;
mod poly;

pub use affine::{AffineScalar, VarId, VarSpace};
pub use matpoly::MatPoly;
pub use poly::{Monomial, Poly};

use thiserror::Error;

/// The three spatial variables, ordered s < θ < η.
///
/// Kernels are stored in (s, θ); η is the scratch variable that composition
/// and the positivity construction integrate over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    S = 0,
    Theta = 1,
    Eta = 2,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::S, Var::Theta, Var::Eta];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::S => "s",
            Var::Theta => "theta",
            Var::Eta => "eta",
        }
    }
}

/// Closed interval [a, b] shared by every polynomial of one system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Self {
        assert!(a < b, "interval requires a < b, got [{a}, {b}]");
        Interval { a, b }
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }
}

/// Bound of a definite integral: a domain endpoint or one of the other
/// spatial variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// Lower endpoint `a` of the domain.
    DomainA,
    /// Upper endpoint `b` of the domain.
    DomainB,
    Var(Var),
}

/// A spatial evaluation point; variables a polynomial does not mention may be
/// left unset.
#[derive(Debug, Clone, Copy, Default)]
pub struct Point {
    pub s: Option<f64>,
    pub theta: Option<f64>,
    pub eta: Option<f64>,
}

impl Point {
    pub fn s(v: f64) -> Self {
        Point { s: Some(v), ..Default::default() }
    }

    pub fn st(s: f64, theta: f64) -> Self {
        Point { s: Some(s), theta: Some(theta), eta: None }
    }

    pub fn get(&self, var: Var) -> Option<f64> {
        match var {
            Var::S => self.s,
            Var::Theta => self.theta,
            Var::Eta => self.eta,
        }
    }
}

/// A bijective relabeling of the three spatial variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Permutation {
    /// `image[v]` is the variable that `v` maps to.
    image: [Var; 3],
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation { image: Var::ALL }
    }

    /// Swap two variables, fixing the third.
    pub fn swap(x: Var, y: Var) -> Self {
        let mut image = Var::ALL;
        image[x.index()] = y;
        image[y.index()] = x;
        Permutation { image }
    }

    /// Build from an explicit image list; panics unless it is a bijection.
    pub fn new(image: [Var; 3]) -> Self {
        let mut seen = [false; 3];
        for v in image {
            seen[v.index()] = true;
        }
        assert!(seen.iter().all(|&s| s), "variable mapping must be a bijection");
        Permutation { image }
    }

    pub fn apply(&self, v: Var) -> Var {
        self.image[v.index()]
    }

    pub fn inverse(&self) -> Self {
        let mut image = Var::ALL;
        for v in Var::ALL {
            image[self.apply(v).index()] = v;
        }
        Permutation { image }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolicError {
    #[error("domain mismatch: [{0}, {1}] vs [{2}, {3}]")]
    DomainMismatch(f64, f64, f64, f64),
    #[error("product of two decision-variable-carrying factors is not affine")]
    BilinearProduct,
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("integration bound references the integration variable {0}")]
    InvalidBound(&'static str),
    #[error("unassigned variable: {0}")]
    UnassignedVariable(String),
}

pub type Result<T> = std::result::Result<T, SymbolicError>;
