//! Exact-binomial quantities for the one-variable weighted Bergman spaces
//! 𝒜_s (reproducing kernel (1−λ̄μ)^{−(s+2)}) and the shift coefficients of
//! the compressed coordinate multipliers in the Bergman model.

use num_bigint::BigInt;
use num_complex::Complex64 as Cx;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{QmodError, Result};
use crate::poly::UniPoly;

/// C(n, k) as a big integer; zero when k > n or either is negative.
pub fn binom_big(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn binom_f64(n: i64, k: i64) -> f64 {
    binom_big(n, k).to_f64().unwrap()
}

/// ‖z^k‖²_s = C(s+k+1, s+1)⁻¹ in 𝒜_s, exactly.
pub fn bergman_norm_sq(k: u32, s: u32) -> BigRational {
    BigRational::new(BigInt::one(), binom_big(s as i64 + k as i64 + 1, s as i64 + 1))
}

pub fn bergman_norm_sq_f64(k: u32, s: u32) -> f64 {
    let r = bergman_norm_sq(k, s);
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}

/// ⟨u′, v′⟩ under the normalized Bergman pairing ⟨z^m, z^n⟩ = δ_mn/(m+1):
/// reduces to Σ_{m≥1} m·u_m·conj(v_m).
pub fn bergman_derivative_pairing(u: &UniPoly, v: &UniPoly) -> Cx {
    let len = u.coeffs.len().min(v.coeffs.len());
    (1..len)
        .map(|m| u.coeffs[m] * v.coeffs[m].conj() * m as f64)
        .sum()
}

/// The off-diagonal shift coefficient
/// a_{m,n}(k) = −C(d+2n+k−1, d+m+n−2)·C(d+2n+k−1, d+2n−1)^{−1/2}·C(d+n+m+k, d+2m−1)^{−1/2},
/// evaluated through exact rationals before the final square root.
pub fn shift_coefficient(d: u32, m: u32, n: u32, k: u32) -> Result<f64> {
    if m <= n {
        return Err(QmodError::InvalidArgument(format!(
            "shift coefficient needs m > n, got m={m} n={n}"
        )));
    }
    let (d, m, n, k) = (d as i64, m as i64, n as i64, k as i64);
    let c1 = binom_big(d + 2 * n + k - 1, d + m + n - 2);
    if c1.is_zero() {
        return Ok(0.0);
    }
    let c2 = binom_big(d + 2 * n + k - 1, d + 2 * n - 1);
    let c3 = binom_big(d + n + m + k, d + 2 * m - 1);
    let ratio = BigRational::new(&c1 * &c1, c2 * c3);
    let v = ratio.numer().to_f64().unwrap() / ratio.denom().to_f64().unwrap();
    Ok(-v.sqrt())
}

/// b_{m,n}(k) = a_{m,n}(k)·√((k−m+n+1)/(d+m+n+k)) − a_{m,n}(k−1)·√(k/(d+2n+k−1)),
/// the residual commutator coefficient; O(k⁻²).
pub fn commutator_coefficient(d: u32, m: u32, n: u32, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(QmodError::InvalidArgument("k must be >= 1".into()));
    }
    let a_k = shift_coefficient(d, m, n, k)?;
    let a_km1 = shift_coefficient(d, m, n, k - 1)?;
    let (df, mf, nf, kf) = (d as f64, m as f64, n as f64, k as f64);
    let first = if kf - mf + nf + 1.0 >= 0.0 {
        a_k * ((kf - mf + nf + 1.0) / (df + mf + nf + kf)).sqrt()
    } else {
        0.0
    };
    let second = a_km1 * (kf / (df + 2.0 * nf + kf - 1.0)).sqrt();
    Ok(first - second)
}

/// Diagonal weight √((k+1)/(d+2m+k)) of the compressed shift on 𝒜_{d+2m−2}.
pub fn diagonal_weight(d: u32, m: u32, k: u32) -> f64 {
    ((k as f64 + 1.0) / (d as f64 + 2.0 * m as f64 + k as f64)).sqrt()
}

/// Check the norm-ratio identity
/// ‖z^{n−m+k+1}‖²_{d+2m−2} / ‖z^k‖²_{d+2n−2} = C(d+2n+k−1, d+2n−1)·C(d+n+m+k, d+2m−1)⁻¹
/// exactly in rational arithmetic.
pub fn ratio_identity_holds(d: u32, m: u32, n: u32, k: u32) -> bool {
    if n + k + 1 < m {
        return true; // left side not defined for a negative power
    }
    let lhs = bergman_norm_sq(n + k + 1 - m, d + 2 * m - 2)
        / bergman_norm_sq(k, d + 2 * n - 2);
    let rhs = BigRational::new(
        binom_big((d + 2 * n + k) as i64 - 1, (d + 2 * n) as i64 - 1),
        binom_big((d + n + m + k) as i64, (d + 2 * m) as i64 - 1),
    );
    lhs == rhs
}
