//! Sparse homogeneous polynomials over ℂ with the H²(𝔻ᵈ) pairing.
//!
//! Monomials `z^α` are an orthonormal set for the Hardy inner product, so a
//! polynomial is just a map from exponent vectors to coefficients. Everything
//! downstream (graded bases, compressed multipliers) works in these
//! coordinates, ordered graded-lexicographically.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as Cx;

use crate::error::{QmodError, Result};

/// Relative prune tolerance for coefficients left over by cancellation.
pub const EPS_COEFF: f64 = 1e-12;
/// Absolute comparison tolerance for desk-scale degrees.
pub const EPS_NUM: f64 = 1e-9;
/// Unimodularity tolerance for theta directions.
pub const EPS_UNIT: f64 = 1e-9;

/// Exponent vector α ∈ ℤ₊^d.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut e = vec![0; d];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise α ≥ γ.
    pub fn dominates(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// α! as f64 (degrees here are small enough that this is exact).
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| fact(a)).product()
    }
}

fn fact(n: u32) -> f64 {
    (1..=n as u64).map(|k| k as f64).product()
}

/// Graded-lex: degree first, then lexicographic with z₁ heaviest.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Number of monomials of degree `n` in `d` variables: C(n+d−1, d−1).
pub fn homogeneous_dim(d: usize, n: u32) -> usize {
    binom_usize(n as usize + d - 1, d - 1)
}

pub(crate) fn binom_usize(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All monomials of degree `n` in `d` variables, in graded-lex order
/// (z₁^n first). The position of α in this list equals [`mono_rank`].
pub fn monomials(d: usize, n: u32) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(homogeneous_dim(d, n));
    let mut cur = vec![0u32; d];
    gen_monomials(d, n, 0, &mut cur, &mut out);
    out
}

fn gen_monomials(d: usize, rem: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if pos == d - 1 {
        cur[pos] = rem;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for e in (0..=rem).rev() {
        cur[pos] = e;
        gen_monomials(d, rem - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// Rank of α within `monomials(d, |α|)`.
pub fn mono_rank(alpha: &MultiIndex) -> usize {
    let d = alpha.dim();
    let mut rank = 0usize;
    let mut rem = alpha.degree();
    for (pos, &a) in alpha.0.iter().enumerate() {
        if pos == d - 1 {
            break;
        }
        let vars_left = d - pos - 1;
        // monomials whose exponent at `pos` exceeds a
        for e in (a + 1..=rem).rev() {
            rank += binom_usize((rem - e) as usize + vars_left - 1, vars_left - 1);
        }
        rem -= a;
    }
    rank
}

/// Homogeneous polynomial as a sparse map MultiIndex → coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct HPoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, Cx>,
}

impl HPoly {
    pub fn zero(dim: usize) -> Self {
        HPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Cx) -> Self {
        let mut p = HPoly::zero(dim);
        if c.norm() > 0.0 {
            p.terms.insert(MultiIndex::zero(dim), c);
        }
        p
    }

    pub fn monomial(dim: usize, alpha: MultiIndex, c: Cx) -> Result<Self> {
        if alpha.dim() != dim {
            return Err(QmodError::DimensionMismatch(alpha.dim(), dim));
        }
        let mut p = HPoly::zero(dim);
        if c.norm() > 0.0 {
            p.terms.insert(alpha, c);
        }
        Ok(p)
    }

    /// The coordinate function z_i (0-based index).
    pub fn coordinate(dim: usize, i: usize) -> Self {
        HPoly::monomial(dim, MultiIndex::unit(dim, i), Cx::new(1.0, 0.0)).unwrap()
    }

    /// Build from (α, c) pairs; rejects mixed degrees, prunes tiny coefficients.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, Cx)>) -> Result<Self> {
        let mut map: BTreeMap<MultiIndex, Cx> = BTreeMap::new();
        for (alpha, c) in terms {
            if alpha.dim() != dim {
                return Err(QmodError::DimensionMismatch(alpha.dim(), dim));
            }
            *map.entry(alpha).or_insert(Cx::new(0.0, 0.0)) += c;
        }
        let mut p = HPoly { dim, terms: map };
        p.check_homogeneous()?;
        p.prune();
        Ok(p)
    }

    fn check_homogeneous(&self) -> Result<()> {
        let mut deg = None;
        for alpha in self.terms.keys() {
            match deg {
                None => deg = Some(alpha.degree()),
                Some(n) if n != alpha.degree() => {
                    return Err(QmodError::NonHomogeneous(n, alpha.degree()))
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn prune(&mut self) {
        let max = self
            .terms
            .values()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
        if max == 0.0 {
            self.terms.clear();
            return;
        }
        let cut = EPS_COEFF * max;
        self.terms.retain(|_, c| c.norm() > cut);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of all terms; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|a| a.degree())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Cx)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Cx {
        self.terms.get(alpha).copied().unwrap_or(Cx::new(0.0, 0.0))
    }

    pub fn scale(&self, c: Cx) -> HPoly {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out.prune();
        out
    }

    /// Sum of two homogeneous polynomials of the same degree.
    pub fn add(&self, other: &HPoly) -> Result<HPoly> {
        if self.dim != other.dim {
            return Err(QmodError::DimensionMismatch(self.dim, other.dim));
        }
        HPoly::from_terms(
            self.dim,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(a, c)| (a.clone(), *c)),
        )
    }

    pub fn norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, point: &[Cx]) -> Cx {
        assert_eq!(point.len(), self.dim);
        let mut acc = Cx::new(0.0, 0.0);
        for (alpha, c) in &self.terms {
            let mut m = *c;
            for (i, &e) in alpha.0.iter().enumerate() {
                m *= point[i].powu(e);
            }
            acc += m;
        }
        acc
    }

    /// Coefficient vector over `monomials(d, n)`; `n` must be the degree.
    pub fn to_vec(&self, n: u32) -> nalgebra::DVector<Cx> {
        let mut v = nalgebra::DVector::from_element(homogeneous_dim(self.dim, n), Cx::new(0.0, 0.0));
        for (alpha, c) in &self.terms {
            debug_assert_eq!(alpha.degree(), n);
            v[mono_rank(alpha)] = *c;
        }
        v
    }

    pub fn from_vec(dim: usize, n: u32, v: &nalgebra::DVector<Cx>) -> HPoly {
        let mons = monomials(dim, n);
        HPoly::from_terms(
            dim,
            mons.into_iter()
                .zip(v.iter())
                .filter(|(_, c)| c.norm() > 0.0)
                .map(|(a, c)| (a, *c)),
        )
        .expect("monomial list is homogeneous")
    }
}

/// One-variable polynomial, coefficients by ascending power.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    pub coeffs: Vec<Cx>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn from_coeffs(mut coeffs: Vec<Cx>) -> Self {
        while coeffs
            .last()
            .map(|c| c.norm() <= EPS_COEFF)
            .unwrap_or(false)
        {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Cx {
        self.coeffs.get(k).copied().unwrap_or(Cx::new(0.0, 0.0))
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Cx::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Cx::new(0.0, 0.0); len];
        for (k, c) in out.iter_mut().enumerate() {
            *c = self.coeff(k) - other.coeff(k);
        }
        UniPoly::from_coeffs(out)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Cx::new((i + 1) as f64, 0.0))
                .collect(),
        )
    }
}

/// Direction θ ∈ 𝕋ᵈ defining the line variety {(θ₁t,…,θ_d t)}.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaDirection {
    theta: Vec<Cx>,
}

impl ThetaDirection {
    pub fn new(theta: Vec<Cx>) -> Result<Self> {
        for (i, t) in theta.iter().enumerate() {
            if (t.norm() - 1.0).abs() > EPS_UNIT {
                return Err(QmodError::NonUnimodular {
                    index: i,
                    modulus: t.norm(),
                });
            }
        }
        Ok(ThetaDirection { theta })
    }

    pub fn ones(d: usize) -> Self {
        ThetaDirection {
            theta: vec![Cx::new(1.0, 0.0); d],
        }
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn components(&self) -> &[Cx] {
        &self.theta
    }

    pub fn conj(&self) -> ThetaDirection {
        ThetaDirection {
            theta: self.theta.iter().map(|t| t.conj()).collect(),
        }
    }

    /// θ^α.
    pub fn power(&self, alpha: &MultiIndex) -> Cx {
        alpha
            .0
            .iter()
            .enumerate()
            .map(|(i, &e)| self.theta[i].powu(e))
            .product()
    }

    /// ⟨θ', θ⟩ = Σ θ'_j conj(θ_j).
    pub fn pairing(&self, other: &ThetaDirection) -> Cx {
        self.theta
            .iter()
            .zip(&other.theta)
            .map(|(a, b)| a * b.conj())
            .sum()
    }
}

/// H²(𝔻ᵈ) pairing Σ_α p_α conj(q_α). Zero when the degrees differ.
pub fn hardy_inner(p: &HPoly, q: &HPoly) -> Result<Cx> {
    if p.dim() != q.dim() {
        return Err(QmodError::DimensionMismatch(p.dim(), q.dim()));
    }
    let mut acc = Cx::new(0.0, 0.0);
    // iterate over the sparser side
    let (small, large) = if p.terms.len() <= q.terms.len() {
        (p, q)
    } else {
        (q, p)
    };
    for (alpha, c) in &small.terms {
        let other = large.coeff(alpha);
        if std::ptr::eq(small, p) {
            acc += c * other.conj();
        } else {
            acc += other * c.conj();
        }
    }
    Ok(acc)
}

pub fn multiply(p: &HPoly, q: &HPoly) -> Result<HPoly> {
    if p.dim() != q.dim() {
        return Err(QmodError::DimensionMismatch(p.dim(), q.dim()));
    }
    let mut out: BTreeMap<MultiIndex, Cx> = BTreeMap::new();
    for (a, ca) in &p.terms {
        for (b, cb) in &q.terms {
            *out.entry(a.add(b)).or_insert(Cx::new(0.0, 0.0)) += ca * cb;
        }
    }
    let mut r = HPoly {
        dim: p.dim(),
        terms: out,
    };
    r.prune();
    Ok(r)
}

/// p(∂)f with ∂^γ z^α = α!/(α−γ)! z^{α−γ} for α ≥ γ, else 0.
pub fn apply_diff(p: &HPoly, f: &HPoly) -> Result<HPoly> {
    if p.dim() != f.dim() {
        return Err(QmodError::DimensionMismatch(p.dim(), f.dim()));
    }
    let mut out: BTreeMap<MultiIndex, Cx> = BTreeMap::new();
    for (gamma, cg) in &p.terms {
        for (alpha, ca) in &f.terms {
            if alpha.dominates(gamma) {
                let res = alpha.sub(gamma);
                // α!/(α−γ)! = Π α_i!/(α_i−γ_i)!
                let fall: f64 = alpha
                    .0
                    .iter()
                    .zip(&gamma.0)
                    .map(|(&a, &g)| ((a - g + 1)..=a).map(|x| x as f64).product::<f64>())
                    .product();
                *out.entry(res).or_insert(Cx::new(0.0, 0.0)) += cg * ca * fall;
            }
        }
    }
    let mut r = HPoly {
        dim: p.dim(),
        terms: out,
    };
    r.prune();
    Ok(r)
}

/// The unique p_g with f(∂)p_g = ⟨f, g⟩ for all f of the same degree:
/// coefficient conj(c_γ)/γ! at γ.
pub fn make_pg(g: &HPoly) -> Result<HPoly> {
    if g.is_zero() {
        return Err(QmodError::ZeroPolynomial);
    }
    let terms = g
        .terms
        .iter()
        .map(|(gamma, c)| (gamma.clone(), c.conj() / gamma.factorial()));
    HPoly::from_terms(g.dim(), terms)
}

/// Restriction to the diagonal, f ↦ f(z,…,z).
pub fn restrict(f: &HPoly) -> UniPoly {
    if f.is_zero() {
        return UniPoly::zero();
    }
    let top = f.terms.keys().map(|a| a.degree()).max().unwrap() as usize;
    let mut coeffs = vec![Cx::new(0.0, 0.0); top + 1];
    for (alpha, c) in &f.terms {
        coeffs[alpha.degree() as usize] += c;
    }
    UniPoly::from_coeffs(coeffs)
}

/// The functional r_g = r ∘ p_g(∂).
pub fn restrict_g(g: &HPoly, h: &HPoly) -> Result<UniPoly> {
    let pg = make_pg(g)?;
    Ok(restrict(&apply_diff(&pg, h)?))
}

/// The rotated linear forms w_i = Σ_j ω^{(i−1)(j−1)} z_j, ω = e^{2πi/d}.
/// Pairwise Hardy-orthogonal with ‖w_i‖² = d.
pub fn w_basis(d: usize) -> Result<Vec<HPoly>> {
    if d < 2 {
        return Err(QmodError::InvalidArgument(format!(
            "w_basis needs d >= 2, got {d}"
        )));
    }
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let terms = (0..d).map(|j| {
            // exact angle per index, avoids phase drift from repeated products
            let ang = 2.0 * PI * ((i * j) % d) as f64 / d as f64;
            (MultiIndex::unit(d, j), Cx::new(ang.cos(), ang.sin()))
        });
        out.push(HPoly::from_terms(d, terms)?);
    }
    Ok(out)
}

/// Coefficient at α multiplied by θ^α; unitary on the Hardy pairing.
pub fn rotate(f: &HPoly, theta: &ThetaDirection) -> Result<HPoly> {
    if f.dim() != theta.dim() {
        return Err(QmodError::DimensionMismatch(f.dim(), theta.dim()));
    }
    HPoly::from_terms(
        f.dim(),
        f.terms
            .iter()
            .map(|(a, c)| (a.clone(), c * theta.power(a))),
    )
}
