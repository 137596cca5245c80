//! Closed forms for the indirect scores of path graphs `L_n` and cycle
//! graphs `Z_n`.
//!
//! These serve both as a fast path and as ground truth for the series engine:
//! every formula here is evaluated term by term from the known power sums,
//! never through a matrix product. Vertex indices in this module are 1-based,
//! matching the usual labeling `1 -> 2 -> ... -> n`.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::pwp::eplus;
use crate::rankings::{ScoreKind, ScoreSource, ScoreVector};

/// A λ value at which two importance curves intersect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingPoint {
    /// Lower vertex number of the pair (1-based).
    pub i: usize,
    /// Higher vertex number of the pair.
    pub j: usize,
    pub lambda_star: f64,
    pub method: CrossingMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossingMethod {
    Analytic,
    Bisection,
}

/// `Σ_{t=a}^{b} w_t · λ^t / t!` with per-term weights supplied by `weight`.
fn weighted_power_sum(lambda: f64, hi: usize, weight: impl Fn(usize) -> f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for t in 1..=hi {
        term *= lambda / t as f64;
        sum += weight(t) * term;
    }
    sum
}

fn check_vertex(n: usize, v: usize, what: &str) -> Result<(), Error> {
    if n < 2 {
        return Err(Error::Index(format!(
            "graph needs at least 2 vertices, got {n}"
        )));
    }
    if v < 1 || v > n {
        return Err(Error::Index(format!(
            "{what} {v} out of range for {n} vertices"
        )));
    }
    Ok(())
}

/// Indirect importance `I_j(λ)` of vertex `j` in the path graph `L_n`,
/// including the `1/e_+^λ` normalization.
///
/// Uses the case-split polynomial forms: the endpoint form for `j ∈ {1, n}`,
/// and the doubled-head forms for interior vertices on either side of the
/// center of mass.
pub fn linear_importance(n: usize, j: usize, lambda: f64) -> Result<f64, Error> {
    check_vertex(n, j, "vertex")?;
    let sum = if j == 1 || j == n {
        weighted_power_sum(lambda, n - 1, |_| 1.0)
    } else if 2 * j <= n + 1 {
        // 2λ + ... + 2λ^{j-1}/(j-1)! + λ^j/j! + ... + λ^{n-j}/(n-j)!
        weighted_power_sum(lambda, n - j, |t| if t < j { 2.0 } else { 1.0 })
    } else {
        // mirror image: doubled terms up to n-j, single up to j-1
        weighted_power_sum(lambda, j - 1, |t| if t <= n - j { 2.0 } else { 1.0 })
    };
    Ok(sum / eplus(lambda))
}

/// Indirect influence `F_i(λ)` of vertex `i` in `L_n`; `F_n = 0` exactly.
pub fn linear_influence(n: usize, i: usize, lambda: f64) -> Result<f64, Error> {
    check_vertex(n, i, "vertex")?;
    if i == n {
        return Ok(0.0);
    }
    Ok(weighted_power_sum(lambda, n - i, |_| 1.0) / eplus(lambda))
}

/// `ln(m!)` by direct summation; exact enough for the factorial ratios used
/// here and immune to the overflow of `m!` itself.
fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|t| (t as f64).ln()).sum()
}

/// The unique intersection of the consecutive importance curves `I_i` and
/// `I_{i+1}` of `L_n`: `c_{i,i+1} = ((n−i)!/i!)^{1/(n−2i)}`, evaluated in the
/// log domain so large `n` cannot overflow.
///
/// Valid for `1 ≤ i ≤ k−1` where `n = 2k` or `n = 2k−1`.
pub fn crossing_consecutive(n: usize, i: usize) -> Result<CrossingPoint, Error> {
    if n < 3 {
        return Err(Error::Index(format!(
            "no consecutive crossings exist for n = {n}"
        )));
    }
    let k = n.div_ceil(2);
    if i < 1 || i > k - 1 {
        return Err(Error::Index(format!(
            "crossing index {i} out of range 1..={} for n = {n}",
            k - 1
        )));
    }
    let exponent = 1.0 / (n as f64 - 2.0 * i as f64);
    let lambda_star = (exponent * (ln_factorial(n - i) - ln_factorial(i))).exp();
    Ok(CrossingPoint {
        i,
        j: i + 1,
        lambda_star,
        method: CrossingMethod::Analytic,
    })
}

/// Indirect influence `T_k(λ)` exerted along `k` steps of the cycle `Z_n`:
/// `(Σ_{l≥0} λ^{k+ln}/(k+ln)!) / e_+^λ`. Independent of the starting vertex.
///
/// Terms decay super-geometrically once `k + ln > λ`; summation stops when a
/// term falls below `tol × max(partial sum, first term)`.
pub fn circuit_indirect(n: usize, k: usize, lambda: f64, tol: f64) -> Result<f64, Error> {
    check_vertex(n, k, "step offset")?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "tol must be positive, got {tol}"
        )));
    }
    // first term λ^k / k!
    let mut term = 1.0;
    for m in 1..=k {
        term *= lambda / m as f64;
    }
    let first = term;
    let mut sum = term;
    let mut highest = k;
    loop {
        for m in highest + 1..=highest + n {
            term *= lambda / m as f64;
        }
        highest += n;
        sum += term;
        if term < tol * sum.max(first) {
            break;
        }
    }
    Ok(sum / eplus(lambda))
}

/// Importance and influence score vectors of `Z_n`, constant across vertices:
/// influence `Σ_k T_k(λ)` and importance twice that.
pub fn circuit_scores(
    n: usize,
    lambda: f64,
    tol: f64,
) -> Result<(ScoreVector, ScoreVector), Error> {
    if n < 2 {
        return Err(Error::Index(format!(
            "circuit needs at least 2 vertices, got {n}"
        )));
    }
    let total: f64 = (1..=n)
        .map(|k| circuit_indirect(n, k, lambda, tol))
        .sum::<Result<f64, Error>>()?;
    let source = ScoreSource::Indirect { lambda };
    Ok((
        ScoreVector {
            kind: ScoreKind::Importance,
            values: vec![2.0 * total; n],
            source,
        },
        ScoreVector {
            kind: ScoreKind::Influence,
            values: vec![total; n],
            source,
        },
    ))
}
