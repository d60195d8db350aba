//! Truncated quotient-module frames and compressed multipliers.
//!
//! A frame holds orthonormal bases of the quotient [I]^⊥ per degree up to D.
//! Multiplication by a homogeneous p maps degree n into n + deg p with no
//! leakage, so every compressed block with n + deg p ≤ D is exact; nothing
//! below the truncation edge is approximated.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as Cx;

use crate::error::{QmodError, Result};
use crate::ideal::{DegreeBasis, GradedIdeal, EPS_RANK};
use crate::linalg::orthonormal_range;
use crate::poly::{homogeneous_dim, mono_rank, monomials, HPoly};

static FRAME_IDS: AtomicU64 = AtomicU64::new(1);

/// Per-degree orthonormal bases of a quotient module, degrees 0..=D.
#[derive(Debug, Clone)]
pub struct QuotientFrame {
    id: u64,
    dim: usize,
    max_degree: u32,
    bases: Vec<std::sync::Arc<DegreeBasis>>,
}

impl QuotientFrame {
    /// Frame of [I]^⊥ up to degree D.
    pub fn build(ideal: &GradedIdeal, max_degree: u32) -> Result<Self> {
        if max_degree < 1 {
            return Err(QmodError::InvalidArgument(
                "frame needs truncation degree >= 1".into(),
            ));
        }
        let bases = (0..=max_degree)
            .map(|n| ideal.quotient_component(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(QuotientFrame {
            id: FRAME_IDS.fetch_add(1, Ordering::Relaxed),
            dim: ideal.dim(),
            max_degree,
            bases,
        })
    }

    /// Frame of [I₁ ∩ … ∩ I_m]^⊥ assembled per degree from the component
    /// ideals (the intersection is taken degreewise, never as a generator
    /// list).
    pub fn build_intersection(components: &[GradedIdeal], max_degree: u32) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| QmodError::InvalidArgument("no ideal components given".into()))?;
        if components.len() == 1 {
            return Self::build(first, max_degree);
        }
        if max_degree < 1 {
            return Err(QmodError::InvalidArgument(
                "frame needs truncation degree >= 1".into(),
            ));
        }
        let d = first.dim();
        for c in components {
            if c.dim() != d {
                return Err(QmodError::DimensionMismatch(c.dim(), d));
            }
        }
        let mut bases = Vec::with_capacity(max_degree as usize + 1);
        for n in 0..=max_degree {
            let amb = homogeneous_dim(d, n);
            // [∩ I_i]^⊥ = Σ [I_i]^⊥ per degree: range of the concatenated
            // component quotient bases
            let mut cat = DMatrix::zeros(amb, 0);
            for c in components {
                let q = c.quotient_component(n)?;
                let cols = q.dim();
                let mut grown = DMatrix::zeros(amb, cat.ncols() + cols);
                grown.view_mut((0, 0), (amb, cat.ncols())).copy_from(&cat);
                grown
                    .view_mut((0, cat.ncols()), (amb, cols))
                    .copy_from(&q.basis);
                cat = grown;
            }
            let basis = orthonormal_range(&cat, EPS_RANK);
            bases.push(std::sync::Arc::new(DegreeBasis {
                degree: n,
                ambient: amb,
                basis,
                labels: None,
            }));
        }
        Ok(QuotientFrame {
            id: FRAME_IDS.fetch_add(1, Ordering::Relaxed),
            dim: d,
            max_degree,
            bases,
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn basis(&self, n: u32) -> &DegreeBasis {
        &self.bases[n as usize]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.dim()).collect()
    }

    /// Column of the degree-n basis carrying the summand label (m, j),
    /// when the frame was built with labels.
    pub fn labeled_column(&self, n: u32, label: (u32, usize)) -> Option<DVector<Cx>> {
        let b = self.basis(n);
        let labels = b.labels.as_ref()?;
        let idx = labels.iter().position(|&l| l == label)?;
        Some(b.basis.column(idx).into_owned())
    }
}

/// Graded block matrix of an operator between frames: block n maps the
/// degree-n component of the source into degree n + shift of the target.
/// Only trusted blocks are stored; anything beyond the truncation edge is
/// absent rather than approximated.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    pub source_frame: u64,
    pub target_frame: u64,
    pub shift: u32,
    /// Truncation degree of the underlying frame; degrees ≤ frame_max with
    /// no stored block are untrusted, not zero.
    pub frame_max: u32,
    blocks: BTreeMap<u32, DMatrix<Cx>>,
}

impl BlockOperator {
    pub fn block(&self, n: u32) -> Option<&DMatrix<Cx>> {
        self.blocks.get(&n)
    }

    pub fn is_trusted(&self, n: u32) -> bool {
        self.blocks.contains_key(&n)
    }

    pub fn trusted_degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.blocks.keys().copied()
    }

    pub fn max_trusted(&self) -> Option<u32> {
        self.blocks.keys().next_back().copied()
    }

    /// Blockwise sum; frames and shifts must match.
    pub fn add(&self, other: &BlockOperator) -> Result<BlockOperator> {
        if self.source_frame != other.source_frame || self.target_frame != other.target_frame {
            return Err(QmodError::FrameMismatch);
        }
        if self.shift != other.shift {
            return Err(QmodError::InvalidArgument(
                "cannot add block operators of different degree shifts".into(),
            ));
        }
        let mut blocks = BTreeMap::new();
        for (n, a) in &self.blocks {
            if let Some(b) = other.blocks.get(n) {
                blocks.insert(*n, a + b);
            }
        }
        Ok(BlockOperator {
            source_frame: self.source_frame,
            target_frame: self.target_frame,
            shift: self.shift,
            frame_max: self.frame_max.min(other.frame_max),
            blocks,
        })
    }
}

/// Matrix of multiplication by p from degree n, applied to the columns of
/// `cols` (coefficient vectors of degree n), returning degree n + deg p
/// coefficient vectors.
fn multiply_columns(p: &HPoly, n: u32, cols: &DMatrix<Cx>) -> DMatrix<Cx> {
    let d = p.dim();
    let s = p.degree().expect("p non-zero");
    let mons = monomials(d, n);
    let mut out = DMatrix::zeros(homogeneous_dim(d, n + s), cols.ncols());
    for (gamma, pc) in p.terms() {
        // target row of each source row under multiplication by z^gamma
        let targets: Vec<usize> = mons.iter().map(|a| mono_rank(&a.add(gamma))).collect();
        for c in 0..cols.ncols() {
            for (r, &t) in targets.iter().enumerate() {
                let v = cols[(r, c)];
                if v.norm_sqr() > 0.0 {
                    out[(t, c)] += pc * v;
                }
            }
        }
    }
    out
}

/// S_p = P M_p | on the frame: block n = basis_{n+deg p}ᴴ · M_p · basis_n,
/// exact for every n with n + deg p ≤ D.
pub fn compress_multiplier(p: &HPoly, frame: &QuotientFrame) -> Result<BlockOperator> {
    if p.dim() != frame.dim {
        return Err(QmodError::DimensionMismatch(p.dim(), frame.dim));
    }
    let s = p.degree().ok_or(QmodError::ZeroPolynomial)?;
    if s > frame.max_degree {
        return Err(QmodError::DegreeBudget(format!(
            "multiplier degree {s} exceeds truncation {}",
            frame.max_degree
        )));
    }
    let mut blocks = BTreeMap::new();
    for n in 0..=frame.max_degree - s {
        let src = frame.basis(n);
        let tgt = frame.basis(n + s);
        let lifted = multiply_columns(p, n, &src.basis);
        blocks.insert(n, tgt.basis.adjoint() * lifted);
    }
    Ok(BlockOperator {
        source_frame: frame.id,
        target_frame: frame.id,
        shift: s,
        frame_max: frame.max_degree,
        blocks,
    })
}

/// [S_{f₁}*, S_{f₂}] for homogeneous f₁, f₂ of equal degree s:
/// block n = A₁(n)ᴴ A₂(n) − A₂(n−s) A₁(n−s)ᴴ (second term absent for n < s).
/// Trusted for n ≤ D − s.
pub fn commutator_of(f1: &HPoly, f2: &HPoly, frame: &QuotientFrame) -> Result<BlockOperator> {
    let s1 = f1.degree().ok_or(QmodError::ZeroPolynomial)?;
    let s2 = f2.degree().ok_or(QmodError::ZeroPolynomial)?;
    if s1 != s2 {
        return Err(QmodError::InvalidArgument(format!(
            "commutator trace needs equal degrees, got {s1} and {s2}"
        )));
    }
    let a1 = compress_multiplier(f1, frame)?;
    let a2 = compress_multiplier(f2, frame)?;
    let mut blocks = BTreeMap::new();
    for n in 0..=frame.max_degree - s1 {
        let mut block = a1.block(n).unwrap().adjoint() * a2.block(n).unwrap();
        if n >= s1 {
            block -= a2.block(n - s1).unwrap() * a1.block(n - s1).unwrap().adjoint();
        }
        blocks.insert(n, block);
    }
    Ok(BlockOperator {
        source_frame: frame.id,
        target_frame: frame.id,
        shift: 0,
        frame_max: frame.max_degree,
        blocks,
    })
}

/// [S_{z_i}*, S_{z_j}] (0-based coordinates).
pub fn commutator_blocks(i: usize, j: usize, frame: &QuotientFrame) -> Result<BlockOperator> {
    commutator_of(
        &HPoly::coordinate(frame.dim, i),
        &HPoly::coordinate(frame.dim, j),
        frame,
    )
}

/// Compression of a sum of homogeneous parts: one block operator per part.
/// Parts beyond the degree budget are reported together in one error.
pub fn compress_general(parts: &[HPoly], frame: &QuotientFrame) -> Result<Vec<BlockOperator>> {
    let offending: Vec<u32> = parts
        .iter()
        .filter_map(|p| p.degree())
        .filter(|&s| s > frame.max_degree)
        .collect();
    if !offending.is_empty() {
        return Err(QmodError::DegreeBudget(format!(
            "part degrees {offending:?} exceed truncation {}",
            frame.max_degree
        )));
    }
    parts
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| compress_multiplier(p, frame))
        .collect()
}

/// The label-preserving unilateral shift v_{g,k} ↦ v_{g,k+1} on a labeled
/// frame: the exact multishift that S_{z_i} approaches, used to measure the
/// isometry defect K_i = S − S_{z_i}.
pub fn frame_shift(frame: &QuotientFrame) -> Result<BlockOperator> {
    let mut blocks = BTreeMap::new();
    for n in 0..frame.max_degree {
        let src = frame.basis(n);
        let tgt = frame.basis(n + 1);
        let (sl, tl) = match (&src.labels, &tgt.labels) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(QmodError::InvalidArgument(
                    "frame shift needs a labeled frame (structured ideal)".into(),
                ))
            }
        };
        let mut block = DMatrix::zeros(tl.len(), sl.len());
        for (col, lab) in sl.iter().enumerate() {
            if let Some(row) = tl.iter().position(|t| t == lab) {
                block[(row, col)] = Cx::new(1.0, 0.0);
            }
        }
        blocks.insert(n, block);
    }
    Ok(BlockOperator {
        source_frame: frame.id,
        target_frame: frame.id,
        shift: 1,
        frame_max: frame.max_degree,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bergman::diagonal_weight;
    use crate::ideal::{ideal_power, j_theta};
    use crate::linalg::{operator_norm, singular_values};
    use crate::poly::{multiply, ThetaDirection};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn j_power(d: usize, n: u32) -> GradedIdeal {
        ideal_power(&j_theta(&ThetaDirection::ones(d)).unwrap(), n).unwrap()
    }

    #[test]
    fn frame_dims() {
        let f = QuotientFrame::build(&j_power(3, 1), 10).unwrap();
        assert_eq!(f.dims(), vec![1; 11]);
        let f2 = QuotientFrame::build(&j_power(3, 2), 10).unwrap();
        let mut expect = vec![3; 11];
        expect[0] = 1;
        assert_eq!(f2.dims(), expect);
        let full = QuotientFrame::build(&GradedIdeal::new(3, vec![]).unwrap(), 5).unwrap();
        let dims: Vec<usize> = (0..=5).map(|n| homogeneous_dim(3, n)).collect();
        assert_eq!(full.dims(), dims);
    }

    #[test]
    fn shift_weights_on_line_quotient() {
        // I = J, d = 3: S_{z1} blocks are 1×1 with weight sqrt((k+1)/(d+k))
        let d = 3;
        let f = QuotientFrame::build(&j_power(d, 1), 12).unwrap();
        let op = compress_multiplier(&HPoly::coordinate(d, 0), &f).unwrap();
        for k in 0..12u32 {
            let b = op.block(k).unwrap();
            assert_eq!(b.shape(), (1, 1));
            let expect = diagonal_weight(d as u32, 0, k);
            assert!((b[(0, 0)] - c(expect, 0.0)).norm() < 1e-9, "k={k}");
        }
        assert!(!op.is_trusted(12));
    }

    #[test]
    fn constant_compresses_to_identity() {
        let f = QuotientFrame::build(&j_power(3, 2), 6).unwrap();
        let op =
            compress_multiplier(&HPoly::constant(3, c(2.0, -1.0)), &f).unwrap();
        for n in 0..=6u32 {
            let b = op.block(n).unwrap();
            let q = f.basis(n).dim();
            let expect = DMatrix::from_diagonal_element(q, q, c(2.0, -1.0));
            assert!((b - expect).norm() < 1e-9);
        }
    }

    #[test]
    fn line_commutator_closed_form() {
        // I = J, d=3: [S₁*,S₁] block k = (k+1)/(d+k) − k/(d+k−1); 1/3 at k=0
        let d = 3u32;
        let f = QuotientFrame::build(&j_power(3, 1), 15).unwrap();
        let op = commutator_blocks(0, 0, &f).unwrap();
        for k in 0..=14u32 {
            let kf = k as f64;
            let df = d as f64;
            let expect =
                (kf + 1.0) / (df + kf) - if k > 0 { kf / (df + kf - 1.0) } else { 0.0 };
            let got = op.block(k).unwrap()[(0, 0)];
            assert!((got - c(expect, 0.0)).norm() < 1e-10, "k={k} got {got}");
        }
        assert!((op.block(0).unwrap()[(0, 0)].re - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn full_space_shifts_doubly_commute() {
        let f = QuotientFrame::build(&GradedIdeal::new(3, vec![]).unwrap(), 8).unwrap();
        let op = commutator_blocks(0, 1, &f).unwrap();
        for n in op.trusted_degrees() {
            assert!(operator_norm(op.block(n).unwrap()) < 1e-10, "n={n}");
        }
    }

    #[test]
    fn truncation_exactness() {
        let ideal = j_power(3, 2);
        let f1 = QuotientFrame::build(&ideal, 9).unwrap();
        let f2 = QuotientFrame::build(&ideal, 12).unwrap();
        let p = multiply(&HPoly::coordinate(3, 0), &HPoly::coordinate(3, 1)).unwrap();
        let a = compress_multiplier(&p, &f1).unwrap();
        let b = compress_multiplier(&p, &f2).unwrap();
        for n in 0..=7u32 {
            let diff = a.block(n).unwrap() - b.block(n).unwrap();
            assert!(diff.norm() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn compressed_shifts_are_contractions() {
        let f = QuotientFrame::build(&j_power(3, 2), 12).unwrap();
        for i in 0..3 {
            let op = compress_multiplier(&HPoly::coordinate(3, i), &f).unwrap();
            for n in op.trusted_degrees() {
                let top = singular_values(op.block(n).unwrap())[0];
                assert!(top <= 1.0 + 1e-9, "i={i} n={n} sigma={top}");
            }
        }
    }

    #[test]
    fn ideal_members_compress_to_zero() {
        let ideal = j_power(3, 2);
        let f = QuotientFrame::build(&ideal, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in ideal.generators().iter().take(3) {
            // random cofactor h of degree 1
            let h = HPoly::from_terms(
                3,
                (0..3).map(|i| {
                    (
                        crate::poly::MultiIndex::unit(3, i),
                        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    )
                }),
            )
            .unwrap();
            for p in [g.clone(), multiply(g, &h).unwrap()] {
                let op = compress_multiplier(&p, &f).unwrap();
                for n in op.trusted_degrees() {
                    assert!(operator_norm(op.block(n).unwrap()) < 1e-9);
                }
            }
        }
    }

    #[test]
    fn compress_general_budget_error() {
        let f = QuotientFrame::build(&j_power(3, 1), 4).unwrap();
        let too_big = HPoly::monomial(
            3,
            crate::poly::MultiIndex(vec![5, 0, 0]),
            c(1.0, 0.0),
        )
        .unwrap();
        let err = compress_general(&[HPoly::coordinate(3, 0), too_big], &f).unwrap_err();
        assert!(matches!(err, QmodError::DegreeBudget(_)));
    }

    #[test]
    fn frame_shift_isometry_and_defect_decay() {
        let f = QuotientFrame::build(&j_power(3, 2), 20).unwrap();
        let s = frame_shift(&f).unwrap();
        for n in 1..20u32 {
            let b = s.block(n).unwrap();
            // partial isometry with full column rank: SᴴS = I
            let g = b.adjoint() * b;
            assert!((g - DMatrix::identity(3, 3)).norm() < 1e-12);
        }
        let sz = compress_multiplier(&HPoly::coordinate(3, 0), &f).unwrap();
        let defect = |k: u32| {
            operator_norm(&(s.block(k).unwrap() - sz.block(k).unwrap()))
        };
        // K_i block norms decay like 1/k: compare k=5 vs k=15
        let d5 = defect(5);
        let d15 = defect(15);
        assert!(d15 < d5, "d5={d5} d15={d15}");
        assert!(d15 * 15.0 < d5 * 5.0 * 2.5, "not O(1/k)-consistent");
    }

    #[test]
    fn intersection_frame_of_two_lines() {
        let t1 = ThetaDirection::ones(3);
        let t2 = ThetaDirection::new(vec![c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let f = QuotientFrame::build_intersection(
            &[j_theta(&t1).unwrap(), j_theta(&t2).unwrap()],
            8,
        )
        .unwrap();
        // [J_θ ∩ J_θ']^⊥ dims: 1, then 2 from degree 1 on
        let mut expect = vec![2usize; 9];
        expect[0] = 1;
        assert_eq!(f.dims(), expect);
    }

    #[test]
    fn cross_frame_arithmetic_rejected() {
        let f1 = QuotientFrame::build(&j_power(3, 1), 6).unwrap();
        let f2 = QuotientFrame::build(&j_power(3, 1), 6).unwrap();
        let a = compress_multiplier(&HPoly::coordinate(3, 0), &f1).unwrap();
        let b = compress_multiplier(&HPoly::coordinate(3, 0), &f2).unwrap();
        assert!(matches!(a.add(&b), Err(QmodError::FrameMismatch)));
    }
}
