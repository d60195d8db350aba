//! Spectral diagnostics over block operators: per-degree singular values,
//! cumulative traces, power-law decay fits, a Schatten-(1,∞) indicator and a
//! finite-truncation essential-spectrum probe.

use nalgebra::DMatrix;
use num_complex::Complex64 as Cx;

use crate::error::{QmodError, Result};
use crate::frame::{compress_multiplier, BlockOperator, QuotientFrame};
use crate::linalg::{hermitian_eigh, singular_values};
use crate::poly::HPoly;

/// One degree of a spectral profile. `trace` is present for square blocks of
/// degree-preserving operators; for Hermitian blocks it is the (real) sum of
/// eigenvalues from a Hermitian eigensolve.
#[derive(Debug, Clone)]
pub struct DegreeRow {
    pub degree: u32,
    pub singulars: Vec<f64>,
    pub trace: Option<Cx>,
    pub trusted: bool,
}

#[derive(Debug, Clone)]
pub struct SpectralProfile {
    pub shift: u32,
    pub rows: Vec<DegreeRow>,
}

impl SpectralProfile {
    /// Running Σ Re(trace) over trusted square blocks, by degree.
    pub fn cumulative_trace(&self) -> Vec<(u32, f64)> {
        let mut acc = 0.0;
        self.rows
            .iter()
            .filter(|r| r.trusted)
            .filter_map(|r| {
                r.trace.map(|t| {
                    acc += t.re;
                    (r.degree, acc)
                })
            })
            .collect()
    }

    /// Running Σ of all singular values over trusted degrees.
    pub fn cumulative_abs(&self) -> Vec<(u32, f64)> {
        let mut acc = 0.0;
        self.rows
            .iter()
            .filter(|r| r.trusted)
            .map(|r| {
                acc += r.singulars.iter().sum::<f64>();
                (r.degree, acc)
            })
            .collect()
    }

    /// Largest singular value per trusted degree.
    pub fn block_norms(&self) -> Vec<(u32, f64)> {
        self.rows
            .iter()
            .filter(|r| r.trusted)
            .map(|r| (r.degree, r.singulars.first().copied().unwrap_or(0.0)))
            .collect()
    }
}

fn is_hermitian(m: &DMatrix<Cx>) -> bool {
    if !m.is_square() {
        return false;
    }
    let scale = m.norm().max(1e-300);
    (m - m.adjoint()).norm() <= 1e-12 * scale
}

/// Per-degree singular values and traces of a block operator. Hermitian
/// blocks go through a Hermitian eigensolve so traces keep their sign
/// structure exactly; other square blocks use the diagonal sum.
pub fn profile(op: &BlockOperator) -> SpectralProfile {
    let mut rows = Vec::new();
    for n in 0..=op.frame_max {
        match op.block(n) {
            Some(b) => {
                let (singulars, trace) = if is_hermitian(b) {
                    let (vals, _) = hermitian_eigh(b);
                    let mut s: Vec<f64> = vals.iter().map(|v| v.abs()).collect();
                    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
                    let tr: f64 = vals.iter().sum();
                    (s, Some(Cx::new(tr, 0.0)))
                } else {
                    let s = singular_values(b);
                    let tr = if op.shift == 0 && b.is_square() {
                        Some(b.diagonal().iter().sum())
                    } else {
                        None
                    };
                    (s, tr)
                };
                rows.push(DegreeRow {
                    degree: n,
                    singulars,
                    trace,
                    trusted: true,
                });
            }
            None => rows.push(DegreeRow {
                degree: n,
                singulars: vec![],
                trace: None,
                trusted: false,
            }),
        }
    }
    SpectralProfile {
        shift: op.shift,
        rows,
    }
}

/// Power-law fit of a positive sequence over a degree window.
#[derive(Debug, Clone, Copy)]
pub struct DecayFit {
    /// p in value ≈ C·k^{−p}.
    pub exponent: f64,
    /// Coefficient of determination of the log-log least squares.
    pub r_squared: f64,
    pub k_min: f64,
    pub k_max: f64,
}

/// Least-squares slope of log(value) against log(k) over k ∈ [k_min, k_max];
/// the decay exponent is minus the slope. The window must start at k ≥ 5 and
/// contain only positive values.
pub fn fit_decay(points: &[(f64, f64)], k_min: f64, k_max: f64) -> Result<DecayFit> {
    if k_min < 5.0 {
        return Err(QmodError::InvalidArgument(format!(
            "decay window must start at k >= 5, got {k_min}"
        )));
    }
    let window: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(k, _)| k >= k_min && k <= k_max)
        .collect();
    if window.len() < 3 {
        return Err(QmodError::InvalidArgument(format!(
            "decay window [{k_min}, {k_max}] holds {} points, need >= 3",
            window.len()
        )));
    }
    if let Some(&(k, v)) = window.iter().find(|&&(_, v)| v <= 0.0) {
        return Err(QmodError::InvalidArgument(format!(
            "non-positive value {v} at k={k} in decay window"
        )));
    }
    let logs: Vec<(f64, f64)> = window.iter().map(|&(k, v)| (k.ln(), v.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(DecayFit {
        exponent: -slope,
        r_squared,
        k_min,
        k_max,
    })
}

/// Default fit window for a truncation degree D: [max(5, D/4), D−2].
pub fn default_decay_window(max_degree: u32) -> (f64, f64) {
    ((5.0f64).max(max_degree as f64 / 4.0), max_degree as f64 - 2.0)
}

/// Weak-trace-class surrogate: table K ↦ (Σ singular values over trusted
/// degrees ≤ K) / log(2 + number of values counted), and its maximum.
/// Boundedness of the table across growing D is the (1,∞) evidence; the
/// verdict wording must stay "consistent with (1,∞) at D = …".
pub fn schatten_1inf_indicator(profile: &SpectralProfile) -> (f64, Vec<(u32, f64)>) {
    let mut sum = 0.0;
    let mut count = 0usize;
    let mut table = Vec::new();
    for row in profile.rows.iter().filter(|r| r.trusted) {
        sum += row.singulars.iter().sum::<f64>();
        count += row.singulars.len();
        table.push((row.degree, sum / (2.0 + count as f64).ln()));
    }
    let max = table.iter().map(|&(_, v)| v).fold(0.0f64, f64::max);
    (max, table)
}

/// Smallest eigenvalue of the compression of
/// T = Σ_i (λ_i − S_{z_i})(λ_i − S_{z_i})* to the degree window
/// [tail_start, D−1]. Small values flag λ as near the essential-spectrum
/// surrogate at this truncation.
pub fn essential_spectrum_probe(
    lambda: &[Cx],
    frame: &QuotientFrame,
    tail_start: u32,
) -> Result<f64> {
    let d = frame.dim();
    if lambda.len() != d {
        return Err(QmodError::DimensionMismatch(lambda.len(), d));
    }
    let top = frame.max_degree() - 1;
    if tail_start + 2 > frame.max_degree() {
        return Err(QmodError::InvalidArgument(format!(
            "tail_start {tail_start} too close to truncation {}",
            frame.max_degree()
        )));
    }
    let shifts: Vec<BlockOperator> = (0..d)
        .map(|i| compress_multiplier(&HPoly::coordinate(d, i), frame))
        .collect::<Result<Vec<_>>>()?;
    // window offsets
    let degrees: Vec<u32> = (tail_start..=top).collect();
    let dims: Vec<usize> = degrees.iter().map(|&n| frame.basis(n).dim()).collect();
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0usize, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    let total: usize = dims.iter().sum();
    let abs2: f64 = lambda.iter().map(|l| l.norm_sqr()).sum();
    let mut t = DMatrix::zeros(total, total);
    for (w, &n) in degrees.iter().enumerate() {
        // diagonal block: Σ|λ_i|² I + Σ S_i(n−1) S_i(n−1)ᴴ
        let mut diag = DMatrix::from_diagonal_element(dims[w], dims[w], Cx::new(abs2, 0.0));
        if n >= 1 {
            for s in &shifts {
                let b = s.block(n - 1).expect("block below top is trusted");
                diag += b * b.adjoint();
            }
        }
        t.view_mut((offsets[w], offsets[w]), (dims[w], dims[w]))
            .copy_from(&diag);
        // sub-diagonal block (n+1, n): −Σ conj(λ_i) S_i(n)
        if w + 1 < degrees.len() {
            let mut sub = DMatrix::zeros(dims[w + 1], dims[w]);
            for (i, s) in shifts.iter().enumerate() {
                sub += s.block(n).expect("trusted") * (-lambda[i].conj());
            }
            t.view_mut((offsets[w + 1], offsets[w]), (dims[w + 1], dims[w]))
                .copy_from(&sub);
            t.view_mut((offsets[w], offsets[w + 1]), (dims[w], dims[w + 1]))
                .copy_from(&sub.adjoint());
        }
    }
    let (vals, _) = hermitian_eigh(&t);
    Ok(vals[0])
}
