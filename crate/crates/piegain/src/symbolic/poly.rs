//! Scalar polynomials in (s, θ, η) over [`AffineScalar`] coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::affine::COEF_TOL;
use super::{AffineScalar, Bound, Interval, Permutation, Point, Result, SymbolicError, Var};

/// Exponent triple (deg s, deg θ, deg η), ordered graded-lex with s < θ < η.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exps: [u8; 3],
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0, 0, 0] };

    pub fn var(v: Var) -> Self {
        let mut exps = [0u8; 3];
        exps[v.index()] = 1;
        Monomial { exps }
    }

    pub fn new(s: u8, theta: u8, eta: u8) -> Self {
        Monomial { exps: [s, theta, eta] }
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn degree(&self, v: Var) -> u8 {
        self.exps[v.index()]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u8; 3];
        for i in 0..3 {
            exps[i] = self.exps[i]
                .checked_add(other.exps[i])
                .expect("monomial degree overflow");
        }
        Monomial { exps }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // Graded: lower total degree first. Ties: higher s-power first, so
        // that degree-d monomials list as s^d, s^{d-1}θ, ..., θ^d, ...
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps).reverse())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.total_degree() == 0 {
            return write!(f, "1");
        }
        for v in Var::ALL {
            let e = self.degree(v);
            if e == 1 {
                write!(f, "{}", v.name())?;
            } else if e > 1 {
                write!(f, "{}^{}", v.name(), e)?;
            }
        }
        Ok(())
    }
}

/// Polynomial over a fixed domain, stored as monomial → coefficient with no
/// zero coefficients retained.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub coeffs: BTreeMap<Monomial, AffineScalar>,
    pub domain: Interval,
}

impl Poly {
    pub fn zero(domain: Interval) -> Self {
        Poly { coeffs: BTreeMap::new(), domain }
    }

    pub fn constant(c: f64, domain: Interval) -> Self {
        Poly::from_affine(AffineScalar::constant(c), domain)
    }

    pub fn from_affine(c: AffineScalar, domain: Interval) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero(0.0) {
            coeffs.insert(Monomial::ONE, c);
        }
        Poly { coeffs, domain }
    }

    pub fn var(v: Var, domain: Interval) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Monomial::var(v), AffineScalar::constant(1.0));
        Poly { coeffs, domain }
    }

    /// Monomial `m` with coefficient `c`.
    pub fn monomial(m: Monomial, c: AffineScalar, domain: Interval) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero(0.0) {
            coeffs.insert(m, c);
        }
        Poly { coeffs, domain }
    }

    /// Univariate polynomial in `v` from ascending coefficients `[c0, c1, ..]`.
    pub fn from_coeffs(v: Var, cs: &[f64], domain: Interval) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, &c) in cs.iter().enumerate() {
            if c != 0.0 {
                let mut exps = [0u8; 3];
                exps[v.index()] = u8::try_from(k).expect("degree too large");
                coeffs.insert(Monomial { exps }, AffineScalar::constant(c));
            }
        }
        Poly { coeffs, domain }
    }

    fn check_domain(&self, other: &Poly) -> Result<()> {
        if self.domain != other.domain {
            return Err(SymbolicError::DomainMismatch(
                self.domain.a,
                self.domain.b,
                other.domain.a,
                other.domain.b,
            ));
        }
        Ok(())
    }

    fn insert(&mut self, m: Monomial, c: AffineScalar) {
        if c.is_zero(0.0) {
            return;
        }
        match self.coeffs.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero(0.0) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_domain(other)?;
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.insert(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(-1.0)
    }

    pub fn scale(&self, k: f64) -> Poly {
        if k == 0.0 {
            return Poly::zero(self.domain);
        }
        let mut out = Poly::zero(self.domain);
        for (m, c) in &self.coeffs {
            out.insert(*m, c.scale(k));
        }
        out
    }

    pub fn scale_affine(&self, k: &AffineScalar) -> Result<Poly> {
        let mut out = Poly::zero(self.domain);
        for (m, c) in &self.coeffs {
            out.insert(*m, c.mul(k)?);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_domain(other)?;
        if self.has_terms() && other.has_terms() {
            return Err(SymbolicError::BilinearProduct);
        }
        let mut out = Poly::zero(self.domain);
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &other.coeffs {
                out.insert(ma.mul(mb), ca.mul(cb)?);
            }
        }
        Ok(out)
    }

    pub fn has_terms(&self) -> bool {
        self.coeffs.values().any(|c| c.has_terms())
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.values().all(|c| c.is_zero(tol))
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.coeffs
            .keys()
            .map(|m| m.degree(v) as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.coeffs.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn max_abs_coef(&self) -> f64 {
        self.coeffs.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Substitute `v := value`, folding powers of `v` into the coefficients.
    pub fn substitute_value(&self, v: Var, value: f64) -> Poly {
        let mut out = Poly::zero(self.domain);
        for (m, c) in &self.coeffs {
            let e = m.degree(v);
            let mut m2 = *m;
            m2.exps[v.index()] = 0;
            out.insert(m2, c.scale(value.powi(e as i32)));
        }
        out
    }

    /// Substitute `v := w` for another variable, merging exponents.
    pub fn substitute_var(&self, v: Var, w: Var) -> Poly {
        assert_ne!(v, w);
        let mut out = Poly::zero(self.domain);
        for (m, c) in &self.coeffs {
            let e = m.degree(v);
            let mut m2 = *m;
            m2.exps[v.index()] = 0;
            m2.exps[w.index()] = m2.exps[w.index()].checked_add(e).expect("degree overflow");
            out.insert(m2, c.clone());
        }
        out
    }

    fn bound_value(&self, bound: Bound, var: Var) -> Result<()> {
        if bound == Bound::Var(var) {
            return Err(SymbolicError::InvalidBound(var.name()));
        }
        Ok(())
    }

    fn eval_bound(&self, anti: &Poly, var: Var, bound: Bound) -> Poly {
        match bound {
            Bound::DomainA => anti.substitute_value(var, self.domain.a),
            Bound::DomainB => anti.substitute_value(var, self.domain.b),
            Bound::Var(w) => anti.substitute_var(var, w),
        }
    }

    /// Definite integral over `var` between `lower` and `upper`; the result
    /// no longer references `var`.
    pub fn integrate(&self, var: Var, lower: Bound, upper: Bound) -> Result<Poly> {
        self.bound_value(lower, var)?;
        self.bound_value(upper, var)?;
        // Antiderivative in var.
        let mut anti = Poly::zero(self.domain);
        for (m, c) in &self.coeffs {
            let e = m.degree(var);
            let mut m2 = *m;
            m2.exps[var.index()] = e + 1;
            anti.insert(m2, c.scale(1.0 / (e as f64 + 1.0)));
        }
        let hi = self.eval_bound(&anti, var, upper);
        let lo = self.eval_bound(&anti, var, lower);
        hi.sub(&lo)
    }

    /// Partial derivative; used by the round-trip checks on reconstructions.
    pub fn differentiate(&self, var: Var) -> Poly {
        let mut out = Poly::zero(self.domain);
        for (m, c) in &self.coeffs {
            let e = m.degree(var);
            if e == 0 {
                continue;
            }
            let mut m2 = *m;
            m2.exps[var.index()] = e - 1;
            out.insert(m2, c.scale(e as f64));
        }
        out
    }

    /// Relabel variables by a bijection.
    pub fn rename(&self, perm: &Permutation) -> Poly {
        let mut out = Poly::zero(self.domain);
        for (m, c) in &self.coeffs {
            let mut exps = [0u8; 3];
            for v in Var::ALL {
                exps[perm.apply(v).index()] = m.degree(v);
            }
            out.insert(Monomial { exps }, c.clone());
        }
        out
    }

    /// Evaluate at a spatial point with decision variables assigned.
    pub fn eval(&self, point: &Point, assignment: &[f64]) -> Result<f64> {
        let mut total = 0.0;
        for (m, c) in &self.coeffs {
            let mut x = c.eval(assignment)?;
            for v in Var::ALL {
                let e = m.degree(v);
                if e > 0 {
                    let val = point
                        .get(v)
                        .ok_or_else(|| SymbolicError::UnassignedVariable(v.name().into()))?;
                    x *= val.powi(e as i32);
                }
            }
            total += x;
        }
        Ok(total)
    }

    /// Evaluate a pure-data polynomial at a spatial point.
    pub fn eval_data(&self, point: &Point) -> Result<f64> {
        let mut total = 0.0;
        for (m, c) in &self.coeffs {
            let mut x = c.eval_data()?;
            for v in Var::ALL {
                let e = m.degree(v);
                if e > 0 {
                    let val = point
                        .get(v)
                        .ok_or_else(|| SymbolicError::UnassignedVariable(v.name().into()))?;
                    x *= val.powi(e as i32);
                }
            }
            total += x;
        }
        Ok(total)
    }

    /// Replace decision variables by their assigned values.
    pub fn assign(&self, assignment: &[f64]) -> Result<Poly> {
        let mut out = Poly::zero(self.domain);
        for (m, c) in &self.coeffs {
            out.insert(*m, AffineScalar::constant(c.eval(assignment)?));
        }
        Ok(out)
    }

    pub fn approx_eq(&self, other: &Poly, tol: f64) -> bool {
        if self.domain != other.domain {
            return false;
        }
        let keys: std::collections::BTreeSet<_> =
            self.coeffs.keys().chain(other.coeffs.keys()).collect();
        let zero = AffineScalar::zero();
        keys.into_iter().all(|m| {
            let a = self.coeffs.get(m).unwrap_or(&zero);
            let b = other.coeffs.get(m).unwrap_or(&zero);
            a.approx_eq(b, tol)
        })
    }

    /// Drop coefficients negligible relative to the polynomial's largest.
    pub fn canonicalize(&mut self) {
        let tol = COEF_TOL * self.max_abs_coef().max(1.0);
        self.coeffs.retain(|_, c| !c.is_zero(tol));
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.has_terms() {
                write!(f, "({})*{}", c, m)?;
            } else {
                write!(f, "{}*{}", c.constant, m)?;
            }
        }
        Ok(())
    }
}
