//! Integral operators on ℝ^m × L₂^q[a,b] with polynomial kernels.
//!
//! An operator is the 6-tuple {P, Q1, Q2; S, R1, R2} acting as
//!
//! ```text
//! (x, z) ↦ ( P x + ∫_a^b Q1(s) z(s) ds,
//!            s ↦ Q2(s) x + S(s) z(s) + ∫_a^s R1(s,θ) z(θ) dθ + ∫_s^b R2(s,θ) z(θ) dθ )
//! ```
//!
//! Composition and adjoint are closed on this class. The composition
//! formulas below are derived by applying the two operators in sequence and
//! swapping integration order; the test suite pins them to the sequential
//! application on randomized operators, which is the defining property.

use nalgebra::DVector;

use crate::quad;
use crate::symbolic::{
    AffineScalar, Bound, Interval, MatPoly, Permutation, Point, Result, SymbolicError, Var,
};

/// Input dimensions (m, q) and output dimensions (n, r) of an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpDims {
    /// Finite input size.
    pub m: usize,
    /// Distributed input size.
    pub q: usize,
    /// Finite output size.
    pub n: usize,
    /// Distributed output size.
    pub r: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PqrsOperator {
    pub dims: OpDims,
    /// n×m, constant.
    pub p: MatPoly,
    /// n×q, function of s.
    pub q1: MatPoly,
    /// r×m, function of s.
    pub q2: MatPoly,
    /// r×q, function of s.
    pub s: MatPoly,
    /// r×q, function of (s, θ); acts on z(θ) for θ < s.
    pub r1: MatPoly,
    /// r×q, function of (s, θ); acts on z(θ) for θ > s.
    pub r2: MatPoly,
}

fn expect_degree_zero(mp: &MatPoly, vars: &[Var], part: &str) -> Result<()> {
    for &v in vars {
        if mp.degree(v) > 0 {
            return Err(SymbolicError::ShapeMismatch {
                expected: format!("{part} independent of {}", v.name()),
                got: format!("degree {}", mp.degree(v)),
            });
        }
    }
    Ok(())
}

impl PqrsOperator {
    pub fn new(
        p: MatPoly,
        q1: MatPoly,
        q2: MatPoly,
        s: MatPoly,
        r1: MatPoly,
        r2: MatPoly,
    ) -> Result<Self> {
        let (n, m) = (p.rows(), p.cols());
        let (r, q) = (s.rows(), s.cols());
        let shape_ok = q1.rows() == n
            && q1.cols() == q
            && q2.rows() == r
            && q2.cols() == m
            && r1.rows() == r
            && r1.cols() == q
            && r2.rows() == r
            && r2.cols() == q;
        if !shape_ok {
            return Err(SymbolicError::ShapeMismatch {
                expected: format!("parts conforming to (m={m}, q={q}) -> (n={n}, r={r})"),
                got: format!(
                    "q1 {}x{}, q2 {}x{}, r1 {}x{}, r2 {}x{}",
                    q1.rows(),
                    q1.cols(),
                    q2.rows(),
                    q2.cols(),
                    r1.rows(),
                    r1.cols(),
                    r2.rows(),
                    r2.cols()
                ),
            });
        }
        let domain = p.domain();
        for part in [&q1, &q2, &s, &r1, &r2] {
            if part.domain() != domain {
                return Err(SymbolicError::DomainMismatch(
                    domain.a,
                    domain.b,
                    part.domain().a,
                    part.domain().b,
                ));
            }
        }
        expect_degree_zero(&p, &Var::ALL, "P")?;
        for (mp, name) in [(&q1, "Q1"), (&q2, "Q2"), (&s, "S")] {
            expect_degree_zero(mp, &[Var::Theta, Var::Eta], name)?;
        }
        expect_degree_zero(&r1, &[Var::Eta], "R1")?;
        expect_degree_zero(&r2, &[Var::Eta], "R2")?;
        Ok(PqrsOperator { dims: OpDims { m, q, n, r }, p, q1, q2, s, r1, r2 })
    }

    pub fn zero(dims: OpDims, domain: Interval) -> Self {
        PqrsOperator {
            dims,
            p: MatPoly::zeros(dims.n, dims.m, domain),
            q1: MatPoly::zeros(dims.n, dims.q, domain),
            q2: MatPoly::zeros(dims.r, dims.m, domain),
            s: MatPoly::zeros(dims.r, dims.q, domain),
            r1: MatPoly::zeros(dims.r, dims.q, domain),
            r2: MatPoly::zeros(dims.r, dims.q, domain),
        }
    }

    /// Identity on ℝ^m × L₂^q.
    pub fn identity(m: usize, q: usize, domain: Interval) -> Self {
        let mut op = Self::zero(OpDims { m, q, n: m, r: q }, domain);
        op.p = MatPoly::identity(m, domain);
        op.s = MatPoly::identity(q, domain);
        op
    }

    /// ε·identity added in place on the P and S parts (square operators).
    pub fn add_identity(&self, eps: f64) -> Result<PqrsOperator> {
        if self.dims.m != self.dims.n || self.dims.q != self.dims.r {
            return Err(SymbolicError::ShapeMismatch {
                expected: "square operator".into(),
                got: format!("{:?}", self.dims),
            });
        }
        let domain = self.domain();
        let mut out = self.clone();
        out.p = out.p.add(&MatPoly::identity_scaled(self.dims.n, eps, domain))?;
        out.s = out.s.add(&MatPoly::identity_scaled(self.dims.r, eps, domain))?;
        Ok(out)
    }

    pub fn domain(&self) -> Interval {
        self.p.domain()
    }

    pub fn has_terms(&self) -> bool {
        self.parts().iter().any(|mp| mp.has_terms())
    }

    pub fn parts(&self) -> [&MatPoly; 6] {
        [&self.p, &self.q1, &self.q2, &self.s, &self.r1, &self.r2]
    }

    pub fn add(&self, other: &PqrsOperator) -> Result<PqrsOperator> {
        if self.dims != other.dims {
            return Err(SymbolicError::ShapeMismatch {
                expected: format!("{:?}", self.dims),
                got: format!("{:?}", other.dims),
            });
        }
        Ok(PqrsOperator {
            dims: self.dims,
            p: self.p.add(&other.p)?,
            q1: self.q1.add(&other.q1)?,
            q2: self.q2.add(&other.q2)?,
            s: self.s.add(&other.s)?,
            r1: self.r1.add(&other.r1)?,
            r2: self.r2.add(&other.r2)?,
        })
    }

    pub fn neg(&self) -> PqrsOperator {
        self.scale(-1.0)
    }

    pub fn scale(&self, k: f64) -> PqrsOperator {
        PqrsOperator {
            dims: self.dims,
            p: self.p.scale(k),
            q1: self.q1.scale(k),
            q2: self.q2.scale(k),
            s: self.s.scale(k),
            r1: self.r1.scale(k),
            r2: self.r2.scale(k),
        }
    }

    /// Scale by an affine scalar (for the γ²-weighted term); the operator
    /// itself must then be pure data.
    pub fn scale_affine(&self, k: &AffineScalar) -> Result<PqrsOperator> {
        Ok(PqrsOperator {
            dims: self.dims,
            p: self.p.scale_affine(k)?,
            q1: self.q1.scale_affine(k)?,
            q2: self.q2.scale_affine(k)?,
            s: self.s.scale_affine(k)?,
            r1: self.r1.scale_affine(k)?,
            r2: self.r2.scale_affine(k)?,
        })
    }

    pub fn approx_eq(&self, other: &PqrsOperator, tol: f64) -> bool {
        self.dims == other.dims
            && self
                .parts()
                .iter()
                .zip(other.parts().iter())
                .all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn max_abs_coef(&self) -> f64 {
        self.parts().iter().map(|mp| mp.max_abs_coef()).fold(0.0, f64::max)
    }

    /// Replace decision variables by solved values.
    pub fn assign(&self, assignment: &[f64]) -> Result<PqrsOperator> {
        Ok(PqrsOperator {
            dims: self.dims,
            p: self.p.assign(assignment)?,
            q1: self.q1.assign(assignment)?,
            q2: self.q2.assign(assignment)?,
            s: self.s.assign(assignment)?,
            r1: self.r1.assign(assignment)?,
            r2: self.r2.assign(assignment)?,
        })
    }

    /// Apply a pure-data operator to (x, z) with z a q×1 polynomial in s.
    /// Exact: every integral is done symbolically.
    pub fn apply(&self, x: &DVector<f64>, z: &MatPoly) -> Result<(DVector<f64>, MatPoly)> {
        if x.len() != self.dims.m || z.rows() != self.dims.q || z.cols() != 1 {
            return Err(SymbolicError::ShapeMismatch {
                expected: format!("x len {}, z {}x1", self.dims.m, self.dims.q),
                got: format!("x len {}, z {}x{}", x.len(), z.rows(), z.cols()),
            });
        }
        let domain = self.domain();
        let x_mat = MatPoly::from_fn(self.dims.m, 1, domain, |i, _| {
            crate::symbolic::Poly::constant(x[i], domain)
        });

        // Finite part: P x + ∫ Q1 z ds.
        let mut fin_mp = self.p.mul(&x_mat)?;
        if self.dims.q > 0 {
            let q1z = self
                .q1
                .mul(z)?
                .integrate(Var::S, Bound::DomainA, Bound::DomainB)?;
            fin_mp = fin_mp.add(&q1z)?;
        }
        let fin_num = fin_mp.eval_data(&Point::default())?;
        let finite = DVector::from_fn(self.dims.n, |i, _| fin_num[(i, 0)]);

        // Distributed part.
        let mut dist = self.q2.mul(&x_mat)?;
        if self.dims.q > 0 {
            dist = dist.add(&self.s.mul(z)?)?;
            let z_theta = z.rename(&Permutation::swap(Var::S, Var::Theta));
            let lower = self
                .r1
                .mul(&z_theta)?
                .integrate(Var::Theta, Bound::DomainA, Bound::Var(Var::S))?;
            let upper = self
                .r2
                .mul(&z_theta)?
                .integrate(Var::Theta, Bound::Var(Var::S), Bound::DomainB)?;
            dist = dist.add(&lower)?.add(&upper)?;
        }
        Ok((finite, dist))
    }

    /// Adjoint with respect to ⟨(x,z),(u,v)⟩ = xᵀu + ∫ zᵀv.
    pub fn adjoint(&self) -> PqrsOperator {
        let swap_st = Permutation::swap(Var::S, Var::Theta);
        PqrsOperator {
            dims: OpDims {
                m: self.dims.n,
                q: self.dims.r,
                n: self.dims.m,
                r: self.dims.q,
            },
            p: self.p.transpose(),
            q1: self.q2.transpose(),
            q2: self.q1.transpose(),
            s: self.s.transpose(),
            r1: self.r2.rename(&swap_st).transpose(),
            r2: self.r1.rename(&swap_st).transpose(),
        }
    }

    /// Operator composition `self ∘ other` (other acts first).
    ///
    /// At most one operand may carry decision variables.
    pub fn compose(&self, other: &PqrsOperator) -> Result<PqrsOperator> {
        if self.dims.m != other.dims.n || self.dims.q != other.dims.r {
            return Err(SymbolicError::ShapeMismatch {
                expected: format!("inner dims ({}, {})", self.dims.m, self.dims.q),
                got: format!("({}, {})", other.dims.n, other.dims.r),
            });
        }
        if self.has_terms() && other.has_terms() {
            return Err(SymbolicError::BilinearProduct);
        }
        // Naming: self = {A, B1, B2; D, C1, C2}, other = {P, Q1, Q2; S, R1, R2}.
        let (a, b1, b2, d, c1, c2) =
            (&self.p, &self.q1, &self.q2, &self.s, &self.r1, &self.r2);
        let (p, q1, q2, s, r1, r2) =
            (&other.p, &other.q1, &other.q2, &other.s, &other.r1, &other.r2);

        let swap_se = Permutation::swap(Var::S, Var::Eta);
        let swap_st = Permutation::swap(Var::S, Var::Theta);
        let swap_te = Permutation::swap(Var::Theta, Var::Eta);
        // s→η, θ→s (kernel second argument becomes the output variable).
        let cycle_ste = Permutation::new([Var::Eta, Var::S, Var::Theta]);

        let int = |mp: MatPoly, lo: Bound, hi: Bound| mp.integrate(Var::Eta, lo, hi);
        let bs = Bound::Var(Var::S);
        let bt = Bound::Var(Var::Theta);
        let ba = Bound::DomainA;
        let bb = Bound::DomainB;

        // P̂ = A P + ∫_a^b B1(s) Q2(s) ds
        let p_hat = a.mul(p)?.add(
            &b1.mul(q2)?
                .integrate(Var::S, Bound::DomainA, Bound::DomainB)?,
        )?;

        // Q̂1(s) = A Q1(s) + B1(s) S(s)
        //        + ∫_s^b B1(η) R1(η,s) dη + ∫_a^s B1(η) R2(η,s) dη
        let b1_eta = b1.rename(&swap_se);
        let q1_hat = a
            .mul(q1)?
            .add(&b1.mul(s)?)?
            .add(&int(b1_eta.mul(&r1.rename(&cycle_ste))?, bs, bb)?)?
            .add(&int(b1_eta.mul(&r2.rename(&cycle_ste))?, ba, bs)?)?;

        // Q̂2(s) = B2(s) P + D(s) Q2(s)
        //        + ∫_a^s C1(s,η) Q2(η) dη + ∫_s^b C2(s,η) Q2(η) dη
        let q2_eta = q2.rename(&swap_se);
        let q2_hat = b2
            .mul(p)?
            .add(&d.mul(q2)?)?
            .add(&int(c1.rename(&swap_te).mul(&q2_eta)?, ba, bs)?)?
            .add(&int(c2.rename(&swap_te).mul(&q2_eta)?, bs, bb)?)?;

        // Ŝ(s) = D(s) S(s)
        let s_hat = d.mul(s)?;

        // Shared pieces for the kernels.
        let b2q1 = b2.mul(&q1.rename(&swap_st))?; // B2(s) Q1(θ)
        let c1_se = c1.rename(&swap_te); // C1(s,η)
        let c2_se = c2.rename(&swap_te); // C2(s,η)
        let r1_et = r1.rename(&swap_se); // R1(η,θ)
        let r2_et = r2.rename(&swap_se); // R2(η,θ)

        // R̂1(s,θ) = B2(s)Q1(θ) + D(s)R1(s,θ) + C1(s,θ)S(θ)
        //          + ∫_θ^s C1(s,η)R1(η,θ) dη + ∫_a^θ C1(s,η)R2(η,θ) dη
        //          + ∫_s^b C2(s,η)R1(η,θ) dη
        let r1_hat = b2q1
            .add(&d.mul(r1)?)?
            .add(&c1.mul(&s.rename(&swap_st))?)?
            .add(&int(c1_se.mul(&r1_et)?, bt, bs)?)?
            .add(&int(c1_se.mul(&r2_et)?, ba, bt)?)?
            .add(&int(c2_se.mul(&r1_et)?, bs, bb)?)?;

        // R̂2(s,θ) = B2(s)Q1(θ) + D(s)R2(s,θ) + C2(s,θ)S(θ)
        //          + ∫_a^s C1(s,η)R2(η,θ) dη + ∫_s^θ C2(s,η)R2(η,θ) dη
        //          + ∫_θ^b C2(s,η)R1(η,θ) dη
        let r2_hat = b2q1
            .add(&d.mul(r2)?)?
            .add(&c2.mul(&s.rename(&swap_st))?)?
            .add(&int(c1_se.mul(&r2_et)?, ba, bs)?)?
            .add(&int(c2_se.mul(&r2_et)?, bs, bt)?)?
            .add(&int(c2_se.mul(&r1_et)?, bt, bb)?)?;

        PqrsOperator::new(p_hat, q1_hat, q2_hat, s_hat, r1_hat, r2_hat)
    }
}

/// ⟨(x1,z1), (x2,z2)⟩_X = x1ᵀx2 + ∫ z1ᵀz2 by adaptive quadrature.
///
/// The distributed parts are pure-data column matrix polynomials in s.
pub fn inner_product_x(
    x1: &DVector<f64>,
    z1: &MatPoly,
    x2: &DVector<f64>,
    z2: &MatPoly,
) -> Result<f64> {
    if z1.rows() != z2.rows() {
        return Err(SymbolicError::ShapeMismatch {
            expected: format!("{} distributed rows", z1.rows()),
            got: format!("{}", z2.rows()),
        });
    }
    let dom = z1.domain();
    let mut total = x1.dot(x2);
    if z1.rows() > 0 {
        total += quad::integrate_adaptive(
            |sv| {
                let a = z1.eval_data(&Point::s(sv)).expect("pure-data z1");
                let b = z2.eval_data(&Point::s(sv)).expect("pure-data z2");
                a.dot(&b)
            },
            dom.a,
            dom.b,
        );
    }
    Ok(total)
}

/// ‖(x, z)‖²_X.
pub fn norm_sq_x(x: &DVector<f64>, z: &MatPoly) -> Result<f64> {
    inner_product_x(x, z, x, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{Monomial, Poly};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn dom() -> Interval {
        Interval::new(0.0, 1.0)
    }

    pub fn random_poly(rng: &mut StdRng, deg: u8, kernel: bool, domain: Interval) -> Poly {
        let mut p = Poly::zero(domain);
        for _ in 0..3 {
            let es = rng.gen_range(0..=deg);
            let et = if kernel { rng.gen_range(0..=deg) } else { 0 };
            p = p
                .add(&Poly::monomial(
                    Monomial::new(es, et, 0),
                    AffineScalar::constant(rng.gen_range(-1.0..1.0)),
                    domain,
                ))
                .unwrap();
        }
        p
    }

    pub fn random_op(rng: &mut StdRng, dims: OpDims, deg: u8, domain: Interval) -> PqrsOperator {
        let mk = |rng: &mut StdRng, rows, cols, kernel| {
            MatPoly::from_fn(rows, cols, domain, |_, _| random_poly(rng, deg, kernel, domain))
        };
        let mk_const = |rng: &mut StdRng, rows, cols| {
            MatPoly::from_fn(rows, cols, domain, |_, _| {
                Poly::constant(rng.gen_range(-1.0..1.0), domain)
            })
        };
        PqrsOperator::new(
            mk_const(rng, dims.n, dims.m),
            mk(rng, dims.n, dims.q, false),
            mk(rng, dims.r, dims.m, false),
            mk(rng, dims.r, dims.q, false),
            mk(rng, dims.r, dims.q, true),
            mk(rng, dims.r, dims.q, true),
        )
        .unwrap()
    }

    pub fn random_z(rng: &mut StdRng, q: usize, deg: u8, domain: Interval) -> MatPoly {
        MatPoly::from_fn(q, 1, domain, |_, _| random_poly(rng, deg, false, domain))
    }

    #[test]
    fn identity_and_zero_apply() {
        let mut rng = StdRng::seed_from_u64(1);
        let id = PqrsOperator::identity(2, 2, dom());
        let x = DVector::from_vec(vec![1.5, -0.5]);
        let z = random_z(&mut rng, 2, 3, dom());
        let (fx, fz) = id.apply(&x, &z).unwrap();
        assert!((fx - &x).abs().max() < 1e-14);
        assert!(fz.approx_eq(&z, 1e-14));

        let zero = PqrsOperator::zero(OpDims { m: 2, q: 2, n: 2, r: 2 }, dom());
        let (fx, fz) = zero.apply(&x, &z).unwrap();
        assert!(fx.abs().max() == 0.0);
        assert!(fz.is_zero(0.0));
    }

    #[test]
    fn q1_only_integrates() {
        // P=0, Q1=[1]: finite part is ∫₀¹ z ds; with z ≡ 1 the answer is 1.
        let op = PqrsOperator::new(
            MatPoly::zeros(1, 1, dom()),
            MatPoly::identity(1, dom()),
            MatPoly::zeros(0, 1, dom()),
            MatPoly::zeros(0, 1, dom()),
            MatPoly::zeros(0, 1, dom()),
            MatPoly::zeros(0, 1, dom()),
        )
        .unwrap();
        let z = MatPoly::identity(1, dom());
        let (fx, _) = op.apply(&DVector::from_vec(vec![0.3]), &z).unwrap();
        assert!((fx[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn compose_identity_is_exact() {
        let mut rng = StdRng::seed_from_u64(2);
        let dims = OpDims { m: 2, q: 2, n: 2, r: 2 };
        let op = random_op(&mut rng, dims, 2, dom());
        let id = PqrsOperator::identity(2, 2, dom());
        assert!(id.compose(&op).unwrap().approx_eq(&op, 1e-13));
        assert!(op.compose(&id).unwrap().approx_eq(&op, 1e-13));
    }

    #[test]
    fn compose_multipliers() {
        // Only S nonzero on both sides: Ŝ(s) = D(s) S(s), kernels stay zero.
        let mut rng = StdRng::seed_from_u64(3);
        let mk = |rng: &mut StdRng| {
            let mut op = PqrsOperator::zero(OpDims { m: 0, q: 2, n: 0, r: 2 }, dom());
            op.s = MatPoly::from_fn(2, 2, dom(), |_, _| random_poly(rng, 2, false, dom()));
            op
        };
        let a = mk(&mut rng);
        let b = mk(&mut rng);
        let c = a.compose(&b).unwrap();
        assert!(c.s.approx_eq(&a.s.mul(&b.s).unwrap(), 1e-13));
        assert!(c.r1.is_zero(0.0) && c.r2.is_zero(0.0));
    }

    #[test]
    fn compose_matches_sequential_apply() {
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..20 {
            let inner = OpDims { m: 2, q: 2, n: 3, r: 2 };
            let outer = OpDims { m: 3, q: 2, n: 2, r: 3 };
            let op_b = random_op(&mut rng, inner, 2, dom());
            let op_a = random_op(&mut rng, outer, 2, dom());
            let composed = op_a.compose(&op_b).unwrap();
            let x = DVector::from_fn(2, |_, _| rng.gen_range(-1.0..1.0));
            let z = random_z(&mut rng, 2, 2, dom());
            let (u, v) = op_b.apply(&x, &z).unwrap();
            let (fx_seq, fz_seq) = op_a.apply(&u, &v).unwrap();
            let (fx_c, fz_c) = composed.apply(&x, &z).unwrap();
            assert!((fx_seq - fx_c).abs().max() < 1e-10);
            assert!(fz_seq.approx_eq(&fz_c, 1e-10));
        }
    }

    #[test]
    fn adjoint_is_involution_and_matches_inner_products() {
        let mut rng = StdRng::seed_from_u64(5);
        let dims = OpDims { m: 2, q: 2, n: 3, r: 2 };
        let op = random_op(&mut rng, dims, 2, dom());
        assert!(op.adjoint().adjoint().approx_eq(&op, 1e-14));
        for _ in 0..20 {
            let x = DVector::from_fn(2, |_, _| rng.gen_range(-1.0..1.0));
            let z = random_z(&mut rng, 2, 2, dom());
            let y = DVector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
            let w = random_z(&mut rng, 2, 2, dom());
            let (ox, oz) = op.apply(&x, &z).unwrap();
            let lhs = inner_product_x(&ox, &oz, &y, &w).unwrap();
            let (ax, az) = op.adjoint().apply(&y, &w).unwrap();
            let rhs = inner_product_x(&x, &z, &ax, &az).unwrap();
            assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn self_adjoint_form_is_fixed() {
        let mut rng = StdRng::seed_from_u64(6);
        let dims = OpDims { m: 2, q: 2, n: 2, r: 2 };
        let raw = random_op(&mut rng, dims, 2, dom());
        let sym = raw.add(&raw.adjoint()).unwrap();
        assert!(sym.adjoint().approx_eq(&sym, 1e-13));
    }

    #[test]
    fn op_add_scale_examples() {
        let mut rng = StdRng::seed_from_u64(7);
        let dims = OpDims { m: 2, q: 1, n: 2, r: 1 };
        let op = random_op(&mut rng, dims, 2, dom());
        let zero = op.add(&op.scale(-1.0)).unwrap();
        assert!(zero.approx_eq(&PqrsOperator::zero(dims, dom()), 0.0));
        assert!(op.approx_eq(&op, 0.0));

        // op_add then apply equals sum of applies.
        let other = random_op(&mut rng, dims, 2, dom());
        let x = DVector::from_fn(2, |_, _| rng.gen_range(-1.0..1.0));
        let z = random_z(&mut rng, 1, 2, dom());
        let (fx1, fz1) = op.apply(&x, &z).unwrap();
        let (fx2, fz2) = other.apply(&x, &z).unwrap();
        let (fxs, fzs) = op.add(&other).unwrap().apply(&x, &z).unwrap();
        assert!((&fxs - (fx1 + fx2)).abs().max() < 1e-10);
        assert!(fzs.approx_eq(&fz1.add(&fz2).unwrap(), 1e-10));
    }

    #[test]
    fn composition_associativity_sampled() {
        let mut rng = StdRng::seed_from_u64(8);
        let d = OpDims { m: 2, q: 2, n: 2, r: 2 };
        for _ in 0..5 {
            let a = random_op(&mut rng, d, 2, dom());
            let b = random_op(&mut rng, d, 2, dom());
            let c = random_op(&mut rng, d, 2, dom());
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            let x = DVector::from_fn(2, |_, _| rng.gen_range(-1.0..1.0));
            let z = random_z(&mut rng, 2, 2, dom());
            let (lx, lz) = left.apply(&x, &z).unwrap();
            let (rx, rz) = right.apply(&x, &z).unwrap();
            assert!((lx - rx).abs().max() < 1e-8);
            assert!(lz.approx_eq(&rz, 1e-8));
        }
    }

    #[test]
    fn adjoint_of_composition_reverses() {
        let mut rng = StdRng::seed_from_u64(9);
        let inner = OpDims { m: 2, q: 2, n: 2, r: 2 };
        let a = random_op(&mut rng, inner, 2, dom());
        let b = random_op(&mut rng, inner, 2, dom());
        let lhs = a.compose(&b).unwrap().adjoint();
        let rhs = b.adjoint().compose(&a.adjoint()).unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-9));
    }
}
