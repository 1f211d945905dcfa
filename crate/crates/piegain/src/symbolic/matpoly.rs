//! Dense matrices of [`Poly`] entries sharing one domain.

use nalgebra::DMatrix;

use super::{AffineScalar, Bound, Interval, Permutation, Point, Poly, Result, SymbolicError, Var};

/// Matrix-valued polynomial. The shape is fixed at construction; rows or
/// columns may be zero so that empty blocks flow through block formulas.
#[derive(Debug, Clone, PartialEq)]
pub struct MatPoly {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
    domain: Interval,
}

impl MatPoly {
    pub fn zeros(rows: usize, cols: usize, domain: Interval) -> Self {
        MatPoly {
            rows,
            cols,
            entries: vec![Poly::zero(domain); rows * cols],
            domain,
        }
    }

    pub fn identity(n: usize, domain: Interval) -> Self {
        let mut m = MatPoly::zeros(n, n, domain);
        for i in 0..n {
            m.set(i, i, Poly::constant(1.0, domain));
        }
        m
    }

    pub fn identity_scaled(n: usize, k: f64, domain: Interval) -> Self {
        let mut m = MatPoly::zeros(n, n, domain);
        for i in 0..n {
            m.set(i, i, Poly::constant(k, domain));
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        domain: Interval,
        mut f: impl FnMut(usize, usize) -> Poly,
    ) -> Self {
        let mut m = MatPoly::zeros(rows, cols, domain);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_matrix(mat: &DMatrix<f64>, domain: Interval) -> Self {
        MatPoly::from_fn(mat.nrows(), mat.ncols(), domain, |i, j| {
            Poly::constant(mat[(i, j)], domain)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert_eq!(p.domain, self.domain, "entry domain must match matrix domain");
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Poly> {
        self.entries.iter()
    }

    fn check_same_shape(&self, other: &MatPoly) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(SymbolicError::ShapeMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                got: format!("{}x{}", other.rows, other.cols),
            });
        }
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

    pub fn add(&self, other: &MatPoly) -> Result<MatPoly> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            *e = e.add(o)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MatPoly) -> Result<MatPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MatPoly {
        self.scale(-1.0)
    }

    pub fn scale(&self, k: f64) -> MatPoly {
        self.map(|p| p.scale(k))
    }

    pub fn scale_affine(&self, k: &AffineScalar) -> Result<MatPoly> {
        self.try_map(|p| p.scale_affine(k))
    }

    pub fn mul(&self, other: &MatPoly) -> Result<MatPoly> {
        if self.cols != other.rows {
            return Err(SymbolicError::ShapeMismatch {
                expected: format!("lhs cols {} == rhs rows", self.cols),
                got: format!("{}", other.rows),
            });
        }
        if self.domain != other.domain {
            return Err(SymbolicError::DomainMismatch(
                self.domain.a,
                self.domain.b,
                other.domain.a,
                other.domain.b,
            ));
        }
        let mut out = MatPoly::zeros(self.rows, other.cols, self.domain);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(self.domain);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> MatPoly {
        MatPoly::from_fn(self.cols, self.rows, self.domain, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, mut f: impl FnMut(&Poly) -> Poly) -> MatPoly {
        MatPoly {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| f(p)).collect(),
            domain: self.domain,
        }
    }

    pub fn try_map(&self, mut f: impl FnMut(&Poly) -> Result<Poly>) -> Result<MatPoly> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for p in &self.entries {
            entries.push(f(p)?);
        }
        Ok(MatPoly {
            rows: self.rows,
            cols: self.cols,
            entries,
            domain: self.domain,
        })
    }

    pub fn rename(&self, perm: &Permutation) -> MatPoly {
        self.map(|p| p.rename(perm))
    }

    pub fn integrate(&self, var: Var, lower: Bound, upper: Bound) -> Result<MatPoly> {
        self.try_map(|p| p.integrate(var, lower, upper))
    }

    /// Horizontal stack of same-height blocks.
    pub fn hstack(blocks: &[&MatPoly]) -> MatPoly {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        let domain = blocks[0].domain;
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = MatPoly::zeros(rows, cols, domain);
        let mut c0 = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            assert_eq!(b.domain, domain);
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, c0 + j, b.get(i, j).clone());
                }
            }
            c0 += b.cols;
        }
        out
    }

    /// Vertical stack of same-width blocks.
    pub fn vstack(blocks: &[&MatPoly]) -> MatPoly {
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols;
        let domain = blocks[0].domain;
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = MatPoly::zeros(rows, cols, domain);
        let mut r0 = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            assert_eq!(b.domain, domain);
            for i in 0..b.rows {
                for j in 0..cols {
                    out.set(r0 + i, j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
        }
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> MatPoly {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        MatPoly::from_fn(rows, cols, self.domain, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn has_terms(&self) -> bool {
        self.entries.iter().any(|p| p.has_terms())
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.entries.iter().all(|p| p.is_zero(tol))
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.entries.iter().map(|p| p.degree(v)).max().unwrap_or(0)
    }

    pub fn max_abs_coef(&self) -> f64 {
        self.entries.iter().map(|p| p.max_abs_coef()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &MatPoly, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Evaluate a pure-data matrix polynomial at a spatial point.
    pub fn eval_data(&self, point: &Point) -> Result<DMatrix<f64>> {
        let mut out = DMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self.get(i, j).eval_data(point)?;
            }
        }
        Ok(out)
    }

    /// Replace decision variables by assigned values in every entry.
    pub fn assign(&self, assignment: &[f64]) -> Result<MatPoly> {
        self.try_map(|p| p.assign(assignment))
    }
}
