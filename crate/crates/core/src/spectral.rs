//! Spectral fast path for ℝ-diagonalizable matrices and the finiteness
//! machinery built on it.
//!
//! When `D = A·diag(d)·A⁻¹` with real eigenvalues, the transform evaluates in
//! closed form as `A·diag(e_+^{d_i λ}/e_+^λ)·A⁻¹`, and every score difference
//! becomes a finite exponential sum `Σ_r a_r e_+^{d_r λ}` over the distinct
//! eigenvalues. Such a sum has finitely many roots; a dominance bound on the
//! largest positive rate yields an explicit λ beyond which no ranking change
//! can occur.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::evd;
use crate::matrix::Matrix;
use crate::pwp::{eplus, InfluenceMatrix};
use crate::rankings::ScoreKind;
use crate::sweep::find_crossing;

/// A real eigendecomposition `D = basis · diag(eigenvalues) · basis_inverse`.
#[derive(Debug, Clone)]
pub struct RealSpectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub basis: Matrix,
    pub basis_inverse: Matrix,
    /// `‖A‖_∞ · ‖A⁻¹‖_∞`.
    pub condition_estimate: f64,
}

/// Decompose `d` over the reals, verifying the reconstruction to
/// `reconstruction_tol` relative Frobenius distance.
///
/// Fails with `NotRealDiagonalizable` when eigenvalues carry imaginary parts
/// beyond tolerance, and with `IllConditionedBasis` when the eigenbasis is
/// numerically singular or too skewed to reproduce the input (defective
/// matrices land here).
pub fn real_eigendecomposition(d: &Matrix, reconstruction_tol: f64) -> Result<RealSpectrum, Error> {
    let n = d.square_size()?;
    if reconstruction_tol.is_nan() || reconstruction_tol <= 0.0 {
        return Err(Error::InvalidParams(
            "reconstruction_tol must be positive".into(),
        ));
    }
    let decomp = evd::decompose(d);

    let imag_tol = reconstruction_tol.max(1e-12) * d.inf_norm().max(1.0);
    let max_imag = decomp.im.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    if max_imag > imag_tol {
        return Err(Error::NotRealDiagonalizable { max_imag });
    }

    // sort ascending, carrying eigenvector columns along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| decomp.re[a].total_cmp(&decomp.re[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&c| decomp.re[c]).collect();
    let basis = Matrix::from_fn(n, n, |i, j| decomp.v[(i, order[j])]);

    let (basis_inverse, condition_estimate) = basis.invert()?;

    let diag = Matrix::from_fn(n, n, |i, j| if i == j { eigenvalues[i] } else { 0.0 });
    let reconstructed = basis.mul(&diag).mul(&basis_inverse);
    if reconstructed.relative_frobenius_distance(d) > reconstruction_tol {
        return Err(Error::IllConditionedBasis {
            condition: condition_estimate,
        });
    }

    Ok(RealSpectrum {
        eigenvalues,
        basis,
        basis_inverse,
        condition_estimate,
    })
}

/// Closed-form transform through the spectrum:
/// `T(D, λ) = A · diag(e_+^{d_i λ}/e_+^λ) · A⁻¹`.
pub fn pwp_transform_spectral(spec: &RealSpectrum, lambda: f64) -> Result<InfluenceMatrix, Error> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "lambda must be a positive real, got {lambda}"
        )));
    }
    let n = spec.eigenvalues.len();
    let scale = eplus(lambda);
    let diag = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            eplus(spec.eigenvalues[i] * lambda) / scale
        } else {
            0.0
        }
    });
    Ok(InfluenceMatrix {
        t: spec.basis.mul(&diag).mul(&spec.basis_inverse),
        lambda,
        truncation_terms: 0,
    })
}

/// One term of an exponential sum: `coefficient · e_+^{rate · λ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpTerm {
    pub coefficient: f64,
    pub rate: f64,
}

/// `Σ_r a_r e_+^{d_r λ}` with strictly increasing deduplicated rates and no
/// stored zero coefficients. `constant` is `Σ_r a_r`, the right-hand side of
/// the equivalent plain-exponential equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpSum {
    pub terms: Vec<ExpTerm>,
    pub constant: f64,
}

impl ExpSum {
    pub fn eval(&self, lambda: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient * eplus(t.rate * lambda))
            .sum()
    }

    /// All coefficients vanished during assembly: the two score curves the
    /// sum came from are identically equal.
    pub fn is_degenerate(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Exact coefficients of `e_+^λ · (score_i(λ) − score_j(λ))` as an
/// exponential sum over the distinct eigenvalues.
///
/// Rates closer together than `1e−9 · max|d|` merge by coefficient addition;
/// coefficients below `1e−12` on the basis scale are dropped as zero.
pub fn score_difference_expsum(
    spec: &RealSpectrum,
    kind: ScoreKind,
    i: usize,
    j: usize,
) -> Result<ExpSum, Error> {
    let n = spec.eigenvalues.len();
    if i >= n || j >= n {
        return Err(Error::Index(format!(
            "vertex pair ({i}, {j}) outside matrix of size {n}"
        )));
    }

    // e_+^λ T = A · diag(e_+^{d_r λ}) · A⁻¹, so the coefficient of e_+^{d_r λ}
    // in row-sum_p is A[p][r]·Σ_q A⁻¹[r][q], and in col-sum_p is
    // (Σ_q A[q][r])·A⁻¹[r][p].
    let inv_row_sums = spec.basis_inverse.row_sums();
    let basis_col_sums = spec.basis.col_sums();
    let coeff_at = |p: usize, r: usize| -> f64 {
        let dependence = spec.basis[(p, r)] * inv_row_sums[r];
        let influence = basis_col_sums[r] * spec.basis_inverse[(r, p)];
        match kind {
            ScoreKind::Dependence => dependence,
            ScoreKind::Influence => influence,
            ScoreKind::Importance => dependence + influence,
        }
    };

    let max_rate = spec.eigenvalues.iter().fold(0.0f64, |m, &d| m.max(d.abs()));
    let dedup_tol = 1e-9 * max_rate;
    let drop_tol = 1e-12 * spec.condition_estimate.max(1.0);

    // eigenvalues are ascending: chain-merge nearly equal rates
    let mut terms: Vec<ExpTerm> = Vec::new();
    for r in 0..n {
        let coefficient = coeff_at(i, r) - coeff_at(j, r);
        let rate = spec.eigenvalues[r];
        match terms.last_mut() {
            Some(last) if rate - last.rate <= dedup_tol => {
                // merged rate: weighted toward the first representative
                last.coefficient += coefficient;
            }
            _ => terms.push(ExpTerm { coefficient, rate }),
        }
    }
    terms.retain(|t| t.coefficient.abs() > drop_tol);
    let constant = terms.iter().map(|t| t.coefficient).sum();

    Ok(ExpSum { terms, constant })
}

/// Result of root isolation on an exponential sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootIsolation {
    /// Sign-change roots found on the scanned interval, ascending, each
    /// refined to the requested tolerance.
    pub roots: Vec<f64>,
    /// When the top rate is positive, a λ beyond which the dominant term
    /// outweighs everything else and no root can exist.
    pub no_root_beyond: Option<f64>,
}

/// Scan `[lo, hi]` on `grid` points for sign changes of the sum and refine
/// each to `tol`. Degenerate sums are rejected: identically-zero differences
/// mean identical scores, not infinitely many roots.
pub fn isolate_roots(
    e: &ExpSum,
    lo: f64,
    hi: f64,
    grid: usize,
    tol: f64,
) -> Result<RootIsolation, Error> {
    if e.is_degenerate() {
        return Err(Error::DegenerateExpSum);
    }
    if !lo.is_finite() || !hi.is_finite() || lo <= 0.0 || hi <= lo {
        return Err(Error::InvalidParams(format!(
            "need 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    if grid < 2 || tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParams("need grid >= 2 and tol > 0".into()));
    }

    let mut roots = Vec::new();
    let mut prev_x = lo;
    let mut prev_f = e.eval(lo);
    if prev_f == 0.0 {
        roots.push(prev_x);
    }
    for m in 1..grid {
        let x = lo + (hi - lo) * m as f64 / (grid - 1) as f64;
        let fx = e.eval(x);
        if fx == 0.0 {
            roots.push(x);
        } else if prev_f != 0.0 && prev_f.signum() * fx.signum() < 0.0 {
            roots.push(find_crossing(|t| e.eval(t), (prev_x, x), tol)?);
        }
        prev_x = x;
        prev_f = fx;
    }

    Ok(RootIsolation {
        roots,
        no_root_beyond: dominance_bound(e),
    })
}

/// Smallest λ beyond which `|a_m| e^{d_m λ} > Σ_{r<m} |a_r| e^{d_r λ} + |a|`
/// is guaranteed, using the crude bound `e^{d_r λ} ≤ e^{max(d_{m−1},0) λ}`.
/// `None` when the top rate is not positive.
fn dominance_bound(e: &ExpSum) -> Option<f64> {
    let top = e.terms.last()?;
    if top.rate <= 0.0 {
        return None;
    }
    let lower_sum: f64 = e.terms[..e.terms.len() - 1]
        .iter()
        .map(|t| t.coefficient.abs())
        .sum();
    let lower_rate = e
        .terms
        .len()
        .checked_sub(2)
        .map_or(0.0, |idx| e.terms[idx].rate.max(0.0));
    let gap = top.rate - lower_rate;
    let numerator = (lower_sum + e.constant.abs()) / top.coefficient.abs();
    Some((numerator.ln() / gap).max(0.0))
}
