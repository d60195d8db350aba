//! Homogeneous ideals as graded objects: per-degree component bases by
//! numerical rank, quotient bases, ideal algebra and membership.
//!
//! Two quotient constructions coexist and cross-check each other. The dense
//! path assembles generator multiples and orthocomplements them; it works for
//! any ideal but scales with the ambient dimension. For powers of a line
//! ideal J_θ the quotient at degree k is spanned by the Riesz vectors of the
//! functionals h ↦ r_{w^α}h (|α| < N, α₁ = 0), which costs only the quotient
//! dimension per degree and reaches truncation degrees the dense path cannot.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as Cx;

use crate::bergman::binom_f64;
use crate::error::{QmodError, Result};
use crate::linalg::{mgs_with_labels, orthonormal_complement, orthonormal_nullspace, orthonormal_range};
use crate::poly::{
    homogeneous_dim, mono_rank, monomials, multiply, rotate, w_basis, HPoly, ThetaDirection,
    EPS_NUM,
};

/// Relative singular-value cutoff for rank decisions.
pub const EPS_RANK: f64 = 1e-10;
/// Relative residual below which a polynomial counts as an ideal member.
pub const EPS_MEMBER: f64 = 1e-8;

/// Orthonormal basis of one graded piece, columns over the graded-lex
/// monomial basis. `labels` identifies, when known, which summand (n, j)
/// of the quotient decomposition each column realizes.
#[derive(Debug, Clone)]
pub struct DegreeBasis {
    pub degree: u32,
    pub ambient: usize,
    pub basis: DMatrix<Cx>,
    pub labels: Option<Vec<(u32, usize)>>,
}

impl DegreeBasis {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// Marker that an ideal is J_θ^N for a known direction θ.
#[derive(Debug, Clone)]
pub struct LinePower {
    pub theta: ThetaDirection,
    pub power: u32,
}

type BasisCache = Arc<RwLock<HashMap<u32, Arc<DegreeBasis>>>>;

/// Homogeneous ideal with per-degree cached component and quotient bases.
#[derive(Debug, Clone)]
pub struct GradedIdeal {
    dim: usize,
    generators: Vec<HPoly>,
    structure: Option<LinePower>,
    comp_cache: BasisCache,
    quot_cache: BasisCache,
}

impl GradedIdeal {
    /// Ideal from an explicit generator list (possibly empty for the zero
    /// ideal). Every generator must be non-zero and homogeneous.
    pub fn new(dim: usize, generators: Vec<HPoly>) -> Result<Self> {
        for g in &generators {
            if g.dim() != dim {
                return Err(QmodError::DimensionMismatch(g.dim(), dim));
            }
            if g.is_zero() {
                return Err(QmodError::ZeroPolynomial);
            }
        }
        Ok(GradedIdeal {
            dim,
            generators,
            structure: None,
            comp_cache: Arc::new(RwLock::new(HashMap::new())),
            quot_cache: Arc::new(RwLock::new(HashMap::new())),
        })
    }

    fn with_structure(mut self, s: LinePower) -> Self {
        self.structure = Some(s);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[HPoly] {
        &self.generators
    }

    pub fn structure(&self) -> Option<&LinePower> {
        self.structure.as_ref()
    }

    /// A copy that forgets the J_θ^N structure, forcing the dense path.
    /// Used by tests as the independent oracle for the Riesz-vector path.
    pub fn without_structure(&self) -> GradedIdeal {
        GradedIdeal::new(self.dim, self.generators.clone()).expect("already validated")
    }

    /// Orthonormal basis of I_n = span{ g·z^β : deg g + |β| = n }.
    pub fn degree_component(&self, n: u32) -> Result<Arc<DegreeBasis>> {
        if let Some(b) = self.comp_cache.read().unwrap().get(&n) {
            return Ok(b.clone());
        }
        let amb = homogeneous_dim(self.dim, n);
        let mut cols: Vec<DVector<Cx>> = Vec::new();
        for g in &self.generators {
            let dg = g.degree().expect("generators are non-zero");
            if dg > n {
                continue;
            }
            for beta in monomials(self.dim, n - dg) {
                let zb = HPoly::monomial(self.dim, beta, Cx::new(1.0, 0.0))?;
                cols.push(multiply(g, &zb)?.to_vec(n));
            }
        }
        let m = if cols.is_empty() {
            DMatrix::zeros(amb, 0)
        } else {
            DMatrix::from_columns(&cols)
        };
        let basis = orthonormal_range(&m, EPS_RANK);
        let db = Arc::new(DegreeBasis {
            degree: n,
            ambient: amb,
            basis,
            labels: None,
        });
        // write-once: a concurrent computation of the same key wins ties
        let mut cache = self.comp_cache.write().unwrap();
        Ok(cache.entry(n).or_insert(db).clone())
    }

    /// Orthonormal basis of the orthocomplement of I_n in the full degree-n
    /// space. For J_θ^N this is built directly from Riesz vectors and carries
    /// summand labels; otherwise it is the complement of `degree_component`.
    pub fn quotient_component(&self, n: u32) -> Result<Arc<DegreeBasis>> {
        if let Some(b) = self.quot_cache.read().unwrap().get(&n) {
            return Ok(b.clone());
        }
        let db = match &self.structure {
            Some(lp) => Arc::new(structured_quotient(self.dim, lp, n)?),
            None => {
                let comp = self.degree_component(n)?;
                Arc::new(DegreeBasis {
                    degree: n,
                    ambient: comp.ambient,
                    basis: orthonormal_complement(&comp.basis, comp.ambient),
                    labels: None,
                })
            }
        };
        let mut cache = self.quot_cache.write().unwrap();
        Ok(cache.entry(n).or_insert(db).clone())
    }

    /// Distance-based membership test: true iff the residual of h against
    /// span(I_{deg h}) is at most EPS_MEMBER·‖h‖. Returns (member, residual).
    pub fn membership(&self, h: &HPoly) -> Result<(bool, f64)> {
        let n = match h.degree() {
            None => return Ok((true, 0.0)),
            Some(n) => n,
        };
        if h.dim() != self.dim {
            return Err(QmodError::DimensionMismatch(h.dim(), self.dim));
        }
        let comp = self.degree_component(n)?;
        let v = h.to_vec(n);
        let proj = &comp.basis * (comp.basis.adjoint() * &v);
        let residual = (v - proj).norm();
        Ok((residual <= EPS_MEMBER * h.norm(), residual))
    }

    /// Table degree → (dim I_n, dim quotient_n) for n = 0..=D.
    pub fn hilbert_dims(&self, max_degree: u32) -> Result<Vec<(u32, usize, usize)>> {
        let mut out = Vec::with_capacity(max_degree as usize + 1);
        for n in 0..=max_degree {
            let amb = homogeneous_dim(self.dim, n);
            let (id, qd) = if self.structure.is_some() {
                let q = self.quotient_component(n)?.dim();
                (amb - q, q)
            } else {
                let i = self.degree_component(n)?.dim();
                (i, amb - i)
            };
            out.push((n, id, qd));
        }
        Ok(out)
    }
}

/// The prime ideal of the line {(θ₁t,…,θ_dt)}: generated by the d−1 linear
/// forms L_θ̄ w_i, i ≥ 2, each vanishing identically on the line.
pub fn j_theta(theta: &ThetaDirection) -> Result<GradedIdeal> {
    let d = theta.dim();
    let ws = w_basis(d)?;
    let conj = theta.conj();
    let gens = ws[1..]
        .iter()
        .map(|w| rotate(w, &conj))
        .collect::<Result<Vec<_>>>()?;
    Ok(GradedIdeal::new(d, gens)?.with_structure(LinePower {
        theta: theta.clone(),
        power: 1,
    }))
}

/// Generator list of I₁·I₂: all pairwise products.
pub fn ideal_product(i1: &GradedIdeal, i2: &GradedIdeal) -> Result<GradedIdeal> {
    if i1.dim != i2.dim {
        return Err(QmodError::DimensionMismatch(i1.dim, i2.dim));
    }
    let mut gens = Vec::with_capacity(i1.generators.len() * i2.generators.len());
    for a in &i1.generators {
        for b in &i2.generators {
            gens.push(multiply(a, b)?);
        }
    }
    let ideal = GradedIdeal::new(i1.dim, gens)?;
    match (&i1.structure, &i2.structure) {
        (Some(a), Some(b)) if same_theta(&a.theta, &b.theta) => {
            Ok(ideal.with_structure(LinePower {
                theta: a.theta.clone(),
                power: a.power + b.power,
            }))
        }
        _ => Ok(ideal),
    }
}

/// I^N by N-fold multiset products of the generators. N = 0 is rejected
/// (the unit ideal is not homogeneous-proper here).
pub fn ideal_power(ideal: &GradedIdeal, n: u32) -> Result<GradedIdeal> {
    if n == 0 {
        return Err(QmodError::InvalidArgument(
            "ideal_power needs N >= 1 (unit ideal unsupported)".into(),
        ));
    }
    let mut gens = Vec::new();
    let one = HPoly::constant(ideal.dim, Cx::new(1.0, 0.0));
    multiset_products(&ideal.generators, n, 0, &one, &mut gens)?;
    let out = GradedIdeal::new(ideal.dim, gens)?;
    match &ideal.structure {
        Some(lp) => Ok(out.with_structure(LinePower {
            theta: lp.theta.clone(),
            power: lp.power * n,
        })),
        None => Ok(out),
    }
}

fn multiset_products(
    gens: &[HPoly],
    remaining: u32,
    from: usize,
    acc: &HPoly,
    out: &mut Vec<HPoly>,
) -> Result<()> {
    if remaining == 0 {
        out.push(acc.clone());
        return Ok(());
    }
    for (i, g) in gens.iter().enumerate().skip(from) {
        let next = multiply(acc, g)?;
        multiset_products(gens, remaining - 1, i, &next, out)?;
    }
    Ok(())
}

/// Orthonormal basis of I₁,n ∩ I₂,n via the nullspace of the stacked
/// complement projectors.
pub fn ideal_intersection_per_degree(
    i1: &GradedIdeal,
    i2: &GradedIdeal,
    n: u32,
) -> Result<DegreeBasis> {
    if i1.dim != i2.dim {
        return Err(QmodError::DimensionMismatch(i1.dim, i2.dim));
    }
    let amb = homogeneous_dim(i1.dim, n);
    let b1 = i1.degree_component(n)?;
    let b2 = i2.degree_component(n)?;
    let p1 = DMatrix::identity(amb, amb) - &b1.basis * b1.basis.adjoint();
    let p2 = DMatrix::identity(amb, amb) - &b2.basis * b2.basis.adjoint();
    let mut stacked = DMatrix::zeros(2 * amb, amb);
    stacked.view_mut((0, 0), (amb, amb)).copy_from(&p1);
    stacked.view_mut((amb, 0), (amb, amb)).copy_from(&p2);
    Ok(DegreeBasis {
        degree: n,
        ambient: amb,
        basis: orthonormal_nullspace(&stacked, EPS_RANK),
        labels: None,
    })
}

/// Orthonormal basis of span{ w^α : |α| = n, α₁ = 0 }, orthonormalized in
/// graded-lex order of the exponents on (w₂,…,w_d). For n = 0 this is the
/// constant 1.
pub fn b_basis(d: usize, n: u32) -> Result<Vec<HPoly>> {
    if n == 0 {
        return Ok(vec![HPoly::constant(d, Cx::new(1.0, 0.0))]);
    }
    let ws = w_basis(d)?;
    let mut raw = Vec::new();
    for alpha in monomials(d - 1, n) {
        let mut p = HPoly::constant(d, Cx::new(1.0, 0.0));
        for (i, &e) in alpha.0.iter().enumerate() {
            for _ in 0..e {
                p = multiply(&p, &ws[i + 1])?;
            }
        }
        raw.push(p);
    }
    let cols: Vec<DVector<Cx>> = raw.iter().map(|p| p.to_vec(n)).collect();
    let (q, kept) = mgs_with_labels(&cols, EPS_RANK);
    debug_assert_eq!(kept.len(), raw.len(), "w^α span should be independent");
    Ok((0..q.ncols())
        .map(|j| HPoly::from_vec(d, n, &q.column(j).into_owned()))
        .collect())
}

/// Riesz vector of the functional h ↦ (coefficient of r_g h) on degree-k
/// polynomials: u_α = Σ_{γ≤α} g_γ · Π_i C(α_i, γ_i).
pub fn riesz_vector(g: &HPoly, k: u32) -> DVector<Cx> {
    let d = g.dim();
    let n = g.degree().expect("g non-zero");
    assert!(n <= k);
    let mut u = DVector::from_element(homogeneous_dim(d, k), Cx::new(0.0, 0.0));
    for (gamma, c) in g.terms() {
        for beta in monomials(d, k - n) {
            let alpha = beta.add(gamma);
            let w: f64 = alpha
                .0
                .iter()
                .zip(&gamma.0)
                .map(|(&a, &g_)| binom_f64(a as i64, g_ as i64))
                .product();
            u[mono_rank(&alpha)] += c * w;
        }
    }
    u
}

/// Quotient of J_θ^N at degree k from Riesz vectors: one column per (n, j)
/// with n < N, n ≤ k and g = b_basis(d, n)[j], computed in the θ = 1 frame
/// and carried to θ by the unitary coefficient rotation.
fn structured_quotient(d: usize, lp: &LinePower, k: u32) -> Result<DegreeBasis> {
    let amb = homogeneous_dim(d, k);
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    for n in 0..lp.power.min(k + 1) {
        for (j, g) in b_basis(d, n)?.iter().enumerate() {
            cols.push(riesz_vector(g, k));
            labels.push((n, j));
        }
    }
    let (mut q, kept) = mgs_with_labels(&cols, EPS_RANK);
    let labels: Vec<(u32, usize)> = kept.into_iter().map(|i| labels[i]).collect();
    // phase convention: summand n carries the sign (−1)^n, which makes the
    // compressed-shift matrix elements match the off-diagonal coefficient
    // formula including its leading minus sign
    for (c, &(n, _)) in labels.iter().enumerate() {
        if n % 2 == 1 {
            for r in 0..q.nrows() {
                q[(r, c)] = -q[(r, c)];
            }
        }
    }
    let conj = lp.theta.conj();
    if lp.theta.components().iter().any(|t| (t - Cx::new(1.0, 0.0)).norm() > 0.0) {
        for (r, alpha) in monomials(d, k).iter().enumerate() {
            let ph = conj.power(alpha);
            for c in 0..q.ncols() {
                q[(r, c)] *= ph;
            }
        }
    }
    Ok(DegreeBasis {
        degree: k,
        ambient: amb,
        basis: q,
        labels: Some(labels),
    })
}

fn same_theta(a: &ThetaDirection, b: &ThetaDirection) -> bool {
    a.dim() == b.dim()
        && a.components()
            .iter()
            .zip(b.components())
            .all(|(x, y)| (x - y).norm() <= EPS_NUM)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::subspace_distance;
    use crate::poly::{hardy_inner, restrict_g, MultiIndex};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn j_ones(d: usize) -> GradedIdeal {
        j_theta(&ThetaDirection::ones(d)).unwrap()
    }

    fn random_hpoly(rng: &mut ChaCha8Rng, d: usize, n: u32) -> HPoly {
        HPoly::from_terms(
            d,
            monomials(d, n).into_iter().map(|a| {
                (a, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            }),
        )
        .unwrap()
    }

    #[test]
    fn j_theta_generators_vanish_on_line() {
        let theta =
            ThetaDirection::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(-0.6, 0.8)]).unwrap();
        let ideal = j_theta(&theta).unwrap();
        assert_eq!(ideal.generators().len(), 2);
        for t in [c(0.3, 0.0), c(0.0, 0.7)] {
            let point: Vec<Cx> = theta.components().iter().map(|th| th * t).collect();
            for g in ideal.generators() {
                assert!(g.eval(&point).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn j_theta_d2_antidiagonal() {
        let theta = ThetaDirection::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let ideal = j_theta(&theta).unwrap();
        // single generator proportional to z1 + z2
        let g = &ideal.generators()[0];
        let a = g.coeff(&MultiIndex(vec![1, 0]));
        let b = g.coeff(&MultiIndex(vec![0, 1]));
        assert!((a - b).norm() < 1e-12, "a={a} b={b}");
    }

    #[test]
    fn j_component_dims() {
        let j = j_ones(3);
        assert_eq!(j.degree_component(0).unwrap().dim(), 0);
        assert_eq!(j.degree_component(1).unwrap().dim(), 2);
        for n in 0..8 {
            assert_eq!(j.quotient_component(n).unwrap().dim(), 1, "n={n}");
        }
    }

    #[test]
    fn j_squared_degree_two() {
        let j2 = ideal_power(&j_ones(3), 2).unwrap();
        let comp = j2.degree_component(2).unwrap();
        assert_eq!(comp.ambient, 6);
        assert_eq!(comp.dim(), 3);
        assert_eq!(j2.quotient_component(2).unwrap().dim(), 3);
        // J·J agrees
        let jj = ideal_product(&j_ones(3), &j_ones(3)).unwrap();
        assert_eq!(jj.degree_component(2).unwrap().dim(), 3);
    }

    #[test]
    fn power_one_is_identity_and_zero_rejected() {
        let j = j_ones(3);
        let p1 = ideal_power(&j, 1).unwrap();
        for n in 0..6 {
            assert_eq!(
                p1.degree_component(n).unwrap().dim(),
                j.degree_component(n).unwrap().dim()
            );
        }
        assert!(ideal_power(&j, 0).is_err());
    }

    #[test]
    fn hilbert_dims_tables() {
        let j2 = ideal_power(&j_ones(3), 2).unwrap();
        let dims: Vec<usize> = j2.hilbert_dims(6).unwrap().iter().map(|r| r.2).collect();
        assert_eq!(dims, vec![1, 3, 3, 3, 3, 3, 3]);

        let j = j_ones(4);
        let dims: Vec<usize> = j.hilbert_dims(6).unwrap().iter().map(|r| r.2).collect();
        assert!(dims.iter().all(|&q| q == 1));

        // maximal ideal power m^2 in d=3: quotient dims C(n+2,2) below 2, then 0
        let m = GradedIdeal::new(
            3,
            (0..3).map(|i| HPoly::coordinate(3, i)).collect(),
        )
        .unwrap();
        let m2 = ideal_power(&m, 2).unwrap();
        let dims: Vec<usize> = m2.hilbert_dims(4).unwrap().iter().map(|r| r.2).collect();
        assert_eq!(dims, vec![1, 3, 0, 0, 0]);
    }

    #[test]
    fn quotient_stabilizes_at_binomial() {
        for d in 2..=5usize {
            for n_pow in 1..=4u32 {
                let jn = ideal_power(&j_ones(d), n_pow).unwrap();
                let expect = crate::poly::homogeneous_dim(d, n_pow - 1);
                for k in n_pow - 1..n_pow + 2 {
                    assert_eq!(
                        jn.quotient_component(k).unwrap().dim(),
                        expect,
                        "d={d} N={n_pow} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn structured_matches_dense_quotient() {
        let theta =
            ThetaDirection::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]).unwrap();
        for n_pow in 1..=3u32 {
            let jn = ideal_power(&j_theta(&theta).unwrap(), n_pow).unwrap();
            let dense = jn.without_structure();
            for k in 0..8u32 {
                let fast = jn.quotient_component(k).unwrap();
                let slow = dense.quotient_component(k).unwrap();
                assert_eq!(fast.dim(), slow.dim(), "N={n_pow} k={k}");
                if fast.dim() > 0 {
                    let dist = subspace_distance(&fast.basis, &slow.basis);
                    assert!(dist < 1e-8, "N={n_pow} k={k} dist={dist}");
                }
            }
        }
    }

    #[test]
    fn riesz_vectors_pairwise_orthogonal() {
        // the summands H_n and the per-g lines within each are orthogonal,
        // so the raw Riesz vectors should come out orthogonal before MGS
        let d = 3;
        let k = 6;
        let mut cols = Vec::new();
        for n in 0..3u32 {
            for g in b_basis(d, n).unwrap() {
                cols.push(riesz_vector(&g, k));
            }
        }
        for i in 0..cols.len() {
            for j in 0..i {
                let ip = cols[i].dotc(&cols[j]).norm();
                let scale = cols[i].norm() * cols[j].norm();
                assert!(ip < 1e-10 * scale, "i={i} j={j} ip={ip}");
            }
        }
    }

    #[test]
    fn membership_examples() {
        let j = j_ones(3);
        let j2 = ideal_power(&j, 2).unwrap();
        let w2 = &j.generators()[0];
        let w2sq = multiply(w2, w2).unwrap();
        let (member, _) = j2.membership(&w2sq).unwrap();
        assert!(member);
        let (member, residual) = j2.membership(w2).unwrap();
        assert!(!member);
        assert!((residual - w2.norm()).abs() < 1e-9);
    }

    #[test]
    fn membership_dual_oracle() {
        // projection-distance membership in J^N agrees with the functional
        // criterion r_{w^α} h = 0 for |α| < N, α₁ = 0
        let d = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n_pow in 1..=3u32 {
            let jn = ideal_power(&j_ones(d), n_pow).unwrap().without_structure();
            let mut w_alphas = Vec::new();
            for n in 0..n_pow {
                w_alphas.extend(b_basis(d, n).unwrap());
            }
            let mut checked = 0;
            for trial in 0..100 {
                let deg = 1 + (trial % 5) as u32;
                let h = if trial % 3 == 0 {
                    // seed some true members: generator times random cofactor
                    let g = &jn.generators()[trial % jn.generators().len()];
                    let gd = g.degree().unwrap();
                    if gd > deg {
                        continue;
                    }
                    multiply(g, &random_hpoly(&mut rng, d, deg - gd)).unwrap()
                } else {
                    random_hpoly(&mut rng, d, deg)
                };
                let (member, _) = jn.membership(&h).unwrap();
                let functional = w_alphas.iter().all(|g| {
                    g.degree().map_or(true, |gd| gd > h.degree().unwrap())
                        || restrict_g(g, &h).unwrap().max_coeff() < 1e-8 * h.norm()
                });
                assert_eq!(member, functional, "N={n_pow} trial={trial}");
                checked += 1;
            }
            assert!(checked >= 80);
        }
    }

    #[test]
    fn graded_containment_and_complementarity() {
        let j2 = ideal_power(&j_ones(3), 2).unwrap().without_structure();
        for n in 0..6u32 {
            let comp = j2.degree_component(n).unwrap();
            let quot = j2.quotient_component(n).unwrap();
            assert_eq!(comp.dim() + quot.dim(), comp.ambient);
            // [I_n | Q_n] unitary
            let mut full = DMatrix::zeros(comp.ambient, comp.ambient);
            full.view_mut((0, 0), (comp.ambient, comp.dim()))
                .copy_from(&comp.basis);
            full.view_mut((0, comp.dim()), (comp.ambient, quot.dim()))
                .copy_from(&quot.basis);
            let gram = full.adjoint() * &full;
            assert!((gram - DMatrix::identity(comp.ambient, comp.ambient)).norm() < 1e-9);
            // z_i · I_n ⊆ I_{n+1}
            let next = j2.degree_component(n + 1).unwrap();
            for col in 0..comp.dim() {
                let p = HPoly::from_vec(3, n, &comp.basis.column(col).into_owned());
                for i in 0..3 {
                    let shifted = multiply(&p, &HPoly::coordinate(3, i)).unwrap().to_vec(n + 1);
                    let proj = &next.basis * (next.basis.adjoint() * &shifted);
                    assert!((shifted - proj).norm() < 1e-9, "n={n} col={col} i={i}");
                }
            }
        }
    }

    #[test]
    fn rotation_equivariance() {
        let theta =
            ThetaDirection::new(vec![c(1.0, 0.0), c(0.6, 0.8), c(0.0, -1.0)]).unwrap();
        let j1 = j_ones(3).without_structure();
        let jt = j_theta(&theta).unwrap().without_structure();
        let conj = theta.conj();
        for n in 1..5u32 {
            let base = j1.degree_component(n).unwrap();
            let rotated_cols: Vec<DVector<Cx>> = (0..base.dim())
                .map(|j| {
                    let p = HPoly::from_vec(3, n, &base.basis.column(j).into_owned());
                    rotate(&p, &conj).unwrap().to_vec(n)
                })
                .collect();
            let rotated = DMatrix::from_columns(&rotated_cols);
            let target = jt.degree_component(n).unwrap();
            assert!(subspace_distance(&rotated, &target.basis) < 1e-9, "n={n}");
        }
    }

    #[test]
    fn two_line_product_quotient_dims() {
        let t1 = ThetaDirection::ones(3);
        let t2 = ThetaDirection::new(vec![c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let prod = ideal_product(&j_theta(&t1).unwrap(), &j_theta(&t2).unwrap()).unwrap();
        assert!(prod.structure().is_none(), "distinct lines carry no power structure");
        for k in 2..7u32 {
            assert_eq!(prod.quotient_component(k).unwrap().dim(), 2, "k={k}");
        }
    }

    #[test]
    fn intersection_cases() {
        let j = j_ones(3).without_structure();
        // I ∩ I = I per degree
        for n in 0..5u32 {
            let cap = ideal_intersection_per_degree(&j, &j, n).unwrap();
            assert_eq!(cap.dim(), j.degree_component(n).unwrap().dim());
        }
        // two distinct lines at degree 1: 2-dim spans in 3-dim ambient meet in 1
        let t2 = ThetaDirection::new(vec![c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let jt = j_theta(&t2).unwrap();
        let cap = ideal_intersection_per_degree(&j, &jt, 1).unwrap();
        assert_eq!(cap.dim(), 1);
        // disjoint-support monomial ideals: (z1) ∩ (z2) = (z1 z2) per degree
        let i1 = GradedIdeal::new(2, vec![HPoly::coordinate(2, 0)]).unwrap();
        let i2 = GradedIdeal::new(2, vec![HPoly::coordinate(2, 1)]).unwrap();
        let prod = ideal_product(&i1, &i2).unwrap();
        for n in 0..6u32 {
            let cap = ideal_intersection_per_degree(&i1, &i2, n).unwrap();
            let p = prod.degree_component(n).unwrap();
            assert_eq!(cap.dim(), p.dim(), "n={n}");
            if cap.dim() > 0 {
                assert!(subspace_distance(&cap.basis, &p.basis) < 1e-9);
            }
        }
    }

    #[test]
    fn empty_ideal_full_quotient() {
        let zero = GradedIdeal::new(3, vec![]).unwrap();
        for n in 0..4u32 {
            let q = zero.quotient_component(n).unwrap();
            assert_eq!(q.dim(), homogeneous_dim(3, n));
        }
    }

    #[test]
    fn b_basis_orthonormal() {
        for d in 2..=4usize {
            for n in 0..=3u32 {
                let b = b_basis(d, n).unwrap();
                assert_eq!(b.len(), homogeneous_dim(d - 1, n.max(0)));
                for (i, p) in b.iter().enumerate() {
                    for (j, q) in b.iter().enumerate() {
                        let ip = hardy_inner(p, q).unwrap();
                        let expect = if i == j { 1.0 } else { 0.0 };
                        assert!((ip - c(expect, 0.0)).norm() < 1e-9, "d={d} n={n}");
                    }
                }
            }
        }
    }
}
