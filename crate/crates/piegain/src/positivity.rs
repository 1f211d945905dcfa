//! Positive-operator parameterization.
//!
//! A weighted square of stacked monomials
//! `∫ g(s) F(s)ᵀ T F(s) ds` with `F(s) = col(x, Z1(s)z(s), ∫_a^s Z2(s,θ)z(θ)dθ,
//! ∫_s^b Z2(s,θ)z(θ)dθ)` expands, after swapping integration order, into a
//! PQRS operator whose parts are affine in the entries of `T`. Whenever
//! `T ⪰ 0` and `g ≥ 0` on the domain the operator is positive semidefinite.
//!
//! The exported cone uses two independent summands with weights `g = 1` and
//! `g = (s-a)(b-s)`, sharing one monomial basis of degree `d`.

use crate::pqrs::PqrsOperator;
use crate::symbolic::{
    AffineScalar, Bound, Interval, MatPoly, Monomial, Permutation, Poly, Result, Var, VarId,
    VarSpace,
};

/// Stacked monomial bases: `Z1(s)` of shape n(d+1) × n and `Z2(s,θ)` of
/// shape n·(d+1)(d+2)/2 × n, both in graded-lex order.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub d: usize,
    pub n: usize,
    pub z1: MatPoly,
    pub z2: MatPoly,
}

/// Number of (s,θ)-monomials of total degree ≤ d.
pub fn n2_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

pub fn make_basis(d: usize, n: usize, domain: Interval) -> MonomialBasis {
    let blocks_z1: Vec<MatPoly> = (0..=d)
        .map(|k| {
            let m = Monomial::new(k as u8, 0, 0);
            monomial_block(m, n, domain)
        })
        .collect();
    let mut kernel_monomials: Vec<Monomial> = (0..=d)
        .flat_map(|t| (0..=t).map(move |j| Monomial::new((t - j) as u8, j as u8, 0)))
        .collect();
    kernel_monomials.sort();
    let blocks_z2: Vec<MatPoly> = kernel_monomials
        .into_iter()
        .map(|m| monomial_block(m, n, domain))
        .collect();
    let z1 = stack_or_empty(&blocks_z1, n, domain);
    let z2 = stack_or_empty(&blocks_z2, n, domain);
    MonomialBasis { d, n, z1, z2 }
}

fn monomial_block(m: Monomial, n: usize, domain: Interval) -> MatPoly {
    let mut blk = MatPoly::zeros(n, n, domain);
    for i in 0..n {
        blk.set(i, i, Poly::monomial(m, AffineScalar::constant(1.0), domain));
    }
    blk
}

fn stack_or_empty(blocks: &[MatPoly], n: usize, domain: Interval) -> MatPoly {
    if n == 0 || blocks.is_empty() {
        return MatPoly::zeros(0, n, domain);
    }
    let refs: Vec<&MatPoly> = blocks.iter().collect();
    MatPoly::vstack(&refs)
}

/// The PSD matrix variable behind one positive summand: its decision
/// variables (upper triangle, row-major), size, and 4×4 block partition.
#[derive(Debug, Clone)]
pub struct PositivityCertificate {
    pub name: String,
    pub var_ids: Vec<VarId>,
    pub size: usize,
    pub partition: [usize; 4],
    pub d: usize,
    pub g: Poly,
}

impl PositivityCertificate {
    /// Variable id of entry (i, j), i ≤ j or j ≤ i.
    pub fn var_at(&self, i: usize, j: usize) -> VarId {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        // Row-major upper triangle offset.
        let offset = i * self.size - i * (i + 1) / 2 + j;
        self.var_ids[offset]
    }
}

fn mul_poly(mp: &MatPoly, p: &Poly) -> Result<MatPoly> {
    mp.try_map(|e| e.mul(p))
}

/// Symmetric matrix of fresh decision variables.
fn symmetric_variable(
    size: usize,
    name: &str,
    space: &mut VarSpace,
    domain: Interval,
) -> (MatPoly, Vec<VarId>) {
    let mut ids = Vec::with_capacity(size * (size + 1) / 2);
    let mut mat = MatPoly::zeros(size, size, domain);
    for i in 0..size {
        for j in i..size {
            let id = space.fresh(format!("{name}[{i},{j}]"));
            ids.push(id);
            let p = Poly::from_affine(AffineScalar::var(id), domain);
            mat.set(i, j, p.clone());
            if i != j {
                mat.set(j, i, p);
            }
        }
    }
    (mat, ids)
}

/// One positive summand: the operator of the weighted-square construction
/// with weight `g`, returned with its PSD certificate.
///
/// The caller guarantees `g(s) ≥ 0` on the domain.
pub fn param_positive(
    m: usize,
    n: usize,
    d: usize,
    g: &Poly,
    name: &str,
    space: &mut VarSpace,
) -> Result<(PqrsOperator, PositivityCertificate)> {
    let domain = g.domain;
    let basis = make_basis(d, n, domain);
    let d1 = n * (d + 1);
    let d2 = n * n2_count(d);
    let size = m + d1 + 2 * d2;
    let (t, var_ids) = symmetric_variable(size, name, space, domain);
    let part = [m, d1, d2, d2];
    let off = [0, m, m + d1, m + d1 + d2];
    let blk = |bi: usize, bj: usize| t.submatrix(off[bi], off[bj], part[bi], part[bj]);

    let ig = g
        .integrate(Var::S, Bound::DomainA, Bound::DomainB)?
        .eval_data(&crate::symbolic::Point::default())?;

    let swap_st = Permutation::swap(Var::S, Var::Theta);
    let swap_se = Permutation::swap(Var::S, Var::Eta);
    // s→η, θ→s: evaluates a kernel at (η, s).
    let cycle = Permutation::new([Var::Eta, Var::S, Var::Theta]);

    let g_theta = g.rename(&swap_st);
    let g_eta = g.rename(&swap_se);
    let z1 = &basis.z1;
    let z2 = &basis.z2;
    let z1_theta = z1.rename(&swap_st);
    let z2_eta_s = z2.rename(&cycle); // Z2(η, s)
    let z2_eta_theta = z2.rename(&swap_se); // Z2(η, θ)
    let z2_theta_s = z2.rename(&swap_st); // Z2(θ, s)

    let bs = Bound::Var(Var::S);
    let bt = Bound::Var(Var::Theta);
    let ba = Bound::DomainA;
    let bb = Bound::DomainB;
    let int_eta = |mp: MatPoly, lo, hi| mp.integrate(Var::Eta, lo, hi);

    // P = T11 ∫ g
    let p = blk(0, 0).scale(ig);

    // Q1(s) = g(s) T12 Z1(s) + ∫_s^b g(η) T13 Z2(η,s) dη + ∫_a^s g(η) T14 Z2(η,s) dη
    let q1 = mul_poly(&blk(0, 1).mul(z1)?, g)?
        .add(&int_eta(mul_poly(&blk(0, 2).mul(&z2_eta_s)?, &g_eta)?, bs, bb)?)?
        .add(&int_eta(mul_poly(&blk(0, 3).mul(&z2_eta_s)?, &g_eta)?, ba, bs)?)?;

    // Q2 = Q1ᵀ entry-for-entry: the transposed T-blocks share variables.
    let q2 = q1.transpose();

    // S(s) = g(s) Z1(s)ᵀ T22 Z1(s)
    let s_part = mul_poly(&z1.transpose().mul(&blk(1, 1))?.mul(z1)?, g)?;

    // R1(s,θ) = g(s) Z1(s)ᵀ T23 Z2(s,θ) + g(θ) Z2(θ,s)ᵀ T42 Z1(θ)
    //         + ∫_s^b g(η) Z2(η,s)ᵀ T33 Z2(η,θ) dη
    //         + ∫_θ^s g(η) Z2(η,s)ᵀ T43 Z2(η,θ) dη
    //         + ∫_a^θ g(η) Z2(η,s)ᵀ T44 Z2(η,θ) dη
    let z2s_t = z2_eta_s.transpose();
    let r1 = mul_poly(&z1.transpose().mul(&blk(1, 2))?.mul(z2)?, g)?
        .add(&mul_poly(&z2_theta_s.transpose().mul(&blk(3, 1))?.mul(&z1_theta)?, &g_theta)?)?
        .add(&int_eta(
            mul_poly(&z2s_t.mul(&blk(2, 2))?.mul(&z2_eta_theta)?, &g_eta)?,
            bs,
            bb,
        )?)?
        .add(&int_eta(
            mul_poly(&z2s_t.mul(&blk(3, 2))?.mul(&z2_eta_theta)?, &g_eta)?,
            bt,
            bs,
        )?)?
        .add(&int_eta(
            mul_poly(&z2s_t.mul(&blk(3, 3))?.mul(&z2_eta_theta)?, &g_eta)?,
            ba,
            bt,
        )?)?;

    // Self-adjointness of the construction gives R2(s,θ) = R1(θ,s)ᵀ.
    let r2 = r1.rename(&swap_st).transpose();

    let op = PqrsOperator::new(p, q1, q2, s_part, r1, r2)?;
    let cert = PositivityCertificate {
        name: name.to_string(),
        var_ids,
        size,
        partition: part,
        d,
        g: g.clone(),
    };
    Ok((op, cert))
}

/// Member of the two-weight positive cone: the sum of a `g = 1` summand and a
/// `g = (s-a)(b-s)` summand with independent PSD matrices.
pub fn phi_d(
    m: usize,
    n: usize,
    d: usize,
    name: &str,
    domain: Interval,
    space: &mut VarSpace,
) -> Result<(PqrsOperator, [PositivityCertificate; 2])> {
    let g1 = Poly::constant(1.0, domain);
    let s = Poly::var(Var::S, domain);
    let a = Poly::constant(domain.a, domain);
    let b = Poly::constant(domain.b, domain);
    let g2 = s.sub(&a)?.mul(&b.sub(&s)?)?;
    let (op1, cert1) = param_positive(m, n, d, &g1, &format!("{name}a"), space)?;
    let (op2, cert2) = param_positive(m, n, d, &g2, &format!("{name}b"), space)?;
    Ok((op1.add(&op2)?, [cert1, cert2]))
}

/// Shift the diagonal parts: P := P - εI, S := S - εI. Applied to a storage
/// candidate this expresses that the decision operator is a cone member plus
/// ε·identity, which makes it coercive.
pub fn coerce_shift(op: &PqrsOperator, eps: f64) -> Result<PqrsOperator> {
    op.add_identity(-eps)
}

/// Assemble the dense symmetric matrix assigned to a certificate.
pub fn certificate_matrix(
    cert: &PositivityCertificate,
    assignment: &[f64],
) -> nalgebra::DMatrix<f64> {
    let n = cert.size;
    let mut mat = nalgebra::DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = assignment[cert.var_at(i, j).0 as usize];
            mat[(i, j)] = v;
            mat[(j, i)] = v;
        }
    }
    mat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pqrs::{inner_product_x, norm_sq_x, OpDims};
    use nalgebra::{DMatrix, DVector};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn dom() -> Interval {
        Interval::new(0.0, 1.0)
    }

    #[test]
    fn basis_examples() {
        let b = make_basis(0, 1, dom());
        assert!(b.z1.approx_eq(&MatPoly::identity(1, dom()), 0.0));
        assert!(b.z2.approx_eq(&MatPoly::identity(1, dom()), 0.0));

        let b = make_basis(1, 1, dom());
        assert_eq!(b.z1.rows(), 2);
        assert!(b.z1.get(1, 0).approx_eq(&Poly::var(Var::S, dom()), 0.0));
        assert_eq!(b.z2.rows(), 3);
        assert!(b.z2.get(1, 0).approx_eq(&Poly::var(Var::S, dom()), 0.0));
        assert!(b.z2.get(2, 0).approx_eq(&Poly::var(Var::Theta, dom()), 0.0));

        let b = make_basis(2, 2, dom());
        assert_eq!(b.z1.rows(), 6);
        assert_eq!(b.z2.rows(), 12);
    }

    fn assign_matrix(cert: &PositivityCertificate, t: &DMatrix<f64>, space_len: usize) -> Vec<f64> {
        let mut assignment = vec![0.0; space_len];
        for i in 0..cert.size {
            for j in i..cert.size {
                assignment[cert.var_at(i, j).0 as usize] = t[(i, j)];
            }
        }
        assignment
    }

    fn sampled_quadratic_form(
        op: &PqrsOperator,
        rng: &mut StdRng,
        samples: usize,
    ) -> impl Iterator<Item = (f64, f64)> {
        let mut out = Vec::new();
        for _ in 0..samples {
            let x = DVector::from_fn(op.dims.m, |_, _| rng.gen_range(-1.0..1.0));
            let z = MatPoly::from_fn(op.dims.q, 1, op.domain(), |_, _| {
                Poly::from_coeffs(
                    Var::S,
                    &[
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    ],
                    op.domain(),
                )
            });
            let (ox, oz) = op.apply(&x, &z).unwrap();
            let qf = inner_product_x(&x, &z, &ox, &oz).unwrap();
            let nrm = norm_sq_x(&x, &z).unwrap();
            out.push((qf, nrm));
        }
        out.into_iter()
    }

    #[test]
    fn identity_t_small_case() {
        let mut space = VarSpace::new();
        let g = Poly::constant(1.0, dom());
        let (op, cert) = param_positive(1, 1, 0, &g, "T", &mut space).unwrap();
        assert_eq!(cert.size, 4);
        let assignment = assign_matrix(&cert, &DMatrix::identity(4, 4), space.len());
        let num = op.assign(&assignment).unwrap();
        // P = T11 ∫g = 1, S = g Z1ᵀ T22 Z1 = 1.
        assert!((num.p.get(0, 0).eval_data(&Default::default()).unwrap() - 1.0).abs() < 1e-12);
        assert!(num.s.approx_eq(&MatPoly::identity(1, dom()), 1e-12));
        let mut rng = StdRng::seed_from_u64(11);
        for (qf, nrm) in sampled_quadratic_form(&num, &mut rng, 100) {
            assert!(qf >= -1e-8 * nrm.max(1.0), "qf = {qf}");
        }
    }

    #[test]
    fn zero_t_gives_zero_operator() {
        let mut space = VarSpace::new();
        let (op, _) = phi_d(2, 1, 1, "T", dom(), &mut space).unwrap();
        let assignment = vec![0.0; space.len()];
        let num = op.assign(&assignment).unwrap();
        assert!(num.approx_eq(
            &PqrsOperator::zero(OpDims { m: 2, q: 1, n: 2, r: 1 }, dom()),
            0.0
        ));
    }

    #[test]
    fn finite_dimensional_only() {
        // n = 0: P = T11 (b - a), everything else empty.
        let mut space = VarSpace::new();
        let g = Poly::constant(1.0, Interval::new(0.0, 2.0));
        let (op, cert) = param_positive(2, 0, 1, &g, "T", &mut space).unwrap();
        assert_eq!(cert.size, 2);
        let assignment = assign_matrix(&cert, &DMatrix::identity(2, 2), space.len());
        let num = op.assign(&assignment).unwrap();
        let p = num.p.eval_data(&Default::default()).unwrap();
        assert!((p - DMatrix::identity(2, 2).scale(2.0)).abs().max() < 1e-12);
        assert_eq!(num.dims.q, 0);
    }

    #[test]
    fn random_psd_assignments_are_positive() {
        let mut rng = StdRng::seed_from_u64(12);
        for trial in 0..10 {
            let m = rng.gen_range(1..=2);
            let n = rng.gen_range(1..=2);
            let d = rng.gen_range(0..=2);
            let mut space = VarSpace::new();
            let (op, certs) = phi_d(m, n, d, "T", dom(), &mut space).unwrap();
            let mut assignment = vec![0.0; space.len()];
            for cert in &certs {
                let gmat = DMatrix::from_fn(cert.size, cert.size, |_, _| rng.gen_range(-1.0..1.0));
                let t = &gmat * gmat.transpose();
                for i in 0..cert.size {
                    for j in i..cert.size {
                        assignment[cert.var_at(i, j).0 as usize] = t[(i, j)];
                    }
                }
            }
            let num = op.assign(&assignment).unwrap();
            // Self-adjoint by construction.
            assert!(num.adjoint().approx_eq(&num, 1e-10), "trial {trial}");
            for (qf, nrm) in sampled_quadratic_form(&num, &mut rng, 25) {
                assert!(qf >= -1e-8 * nrm.max(1.0), "trial {trial}: qf = {qf}");
            }
        }
    }

    #[test]
    fn degree_bookkeeping() {
        let mut space = VarSpace::new();
        let d = 2;
        let (op, _) = phi_d(1, 1, d, "T", dom(), &mut space).unwrap();
        // Weight degree ≤ 2, so S ≤ 2d+2 and kernels ≤ 2d+3 per variable.
        assert!(op.s.degree(Var::S) <= 2 * d as u32 + 2);
        assert!(op.r1.degree(Var::S) <= 2 * d as u32 + 3);
        assert!(op.r1.degree(Var::Theta) <= 2 * d as u32 + 3);
    }

    #[test]
    fn coerce_shift_examples() {
        let id = PqrsOperator::identity(2, 2, dom());
        let shifted = coerce_shift(&id, 1.0).unwrap();
        assert!(shifted.p.is_zero(0.0));
        assert!(shifted.s.is_zero(0.0));
        assert!(coerce_shift(&id, 0.0).unwrap().approx_eq(&id, 0.0));
    }
}
