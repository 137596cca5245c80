//! The indirect-influence transform `T(D, λ) = e_+^{λD} / e_+^λ`.
//!
//! `e_+^x = e^x − 1` drops the identity term of the exponential series, so
//! with no direct influences there are no indirect ones. The matrix series
//! `Σ_{k≥1} D^k λ^k / k!` is summed directly, in increasing `k`, with
//! compensated accumulation; scaling-and-squaring identities do not hold for
//! `e_+` and are not used.

use crate::error::Error;
use crate::matrix::Matrix;

/// Default relative truncation tolerance for the series.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default cap on series terms. The factorial tail makes this enough for
/// `‖D‖_∞ · λ` up to roughly 100.
pub const DEFAULT_MAX_TERMS: usize = 512;

/// `e_+^x = e^x − 1`, with full relative accuracy near zero.
pub fn eplus(x: f64) -> f64 {
    x.exp_m1()
}

/// Parameters of the transform: the method parameter λ and the series
/// truncation controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PwpParams {
    pub lambda: f64,
    pub tol: f64,
    pub max_terms: usize,
}

impl PwpParams {
    /// Parameters at the given λ with default truncation controls.
    pub fn new(lambda: f64) -> Self {
        PwpParams {
            lambda,
            tol: DEFAULT_TOL,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !self.lambda.is_finite() || self.lambda <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "lambda must be a positive real, got {}",
                self.lambda
            )));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_terms == 0 {
            return Err(Error::InvalidParams("max_terms must be at least 1".into()));
        }
        Ok(())
    }
}

/// The matrix of indirect influences together with the λ that produced it
/// and the number of series terms actually summed.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceMatrix {
    pub t: Matrix,
    pub lambda: f64,
    pub truncation_terms: usize,
}

/// Evaluate `T(D, λ) = (1/e_+^λ) Σ_{k=1}^{K} D^k λ^k / k!`.
///
/// `K` is the first `k` at which the a-priori tail bound
/// `(‖D‖_∞ λ)^k / k!` drops below `tol · (‖partial sum‖_∞ + 1)`. For a
/// nilpotent `D` of index `m` the powers vanish exactly and the sum
/// terminates with `K ≤ m − 1`, making the result exact.
pub fn pwp_transform(d: &Matrix, params: &PwpParams) -> Result<InfluenceMatrix, Error> {
    params.validate()?;
    let n = d.square_size()?;
    let lambda = params.lambda;
    let norm_scale = d.inf_norm() * lambda;

    // term = D^k λ^k / k!; sum accumulates with Kahan compensation so the
    // result is independent of platform-specific reassociation.
    let mut sum = Matrix::zeros(n, n);
    let mut compensation = Matrix::zeros(n, n);
    let mut term = d.scale(lambda);
    let mut bound = norm_scale;
    let mut k = 1usize;
    let terms_summed = loop {
        if term.is_zero() {
            // D^k = 0: the series has terminated exactly.
            break k - 1;
        }
        kahan_add(&mut sum, &mut compensation, &term);
        if bound <= params.tol * (sum.inf_norm() + 1.0) {
            break k;
        }
        if k >= params.max_terms {
            return Err(Error::TruncationNotConverged {
                lambda,
                terms: k,
                achieved_bound: bound,
                partial: Box::new(sum.scale(1.0 / eplus(lambda))),
            });
        }
        k += 1;
        term = term.mul(d).scale(lambda / k as f64);
        bound *= norm_scale / k as f64;
    };

    Ok(InfluenceMatrix {
        t: sum.scale(1.0 / eplus(lambda)),
        lambda,
        truncation_terms: terms_summed,
    })
}

/// Transform of the rescaled data `c·D`. A named entry point so the scaling
/// identity `T(cD, λ) = (e_+^{cλ}/e_+^λ) · T(D, cλ)` is directly testable.
pub fn pwp_rescaled(d: &Matrix, c: f64, params: &PwpParams) -> Result<InfluenceMatrix, Error> {
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "scale factor must be a positive real, got {c}"
        )));
    }
    pwp_transform(&d.scale(c), params)
}

fn kahan_add(sum: &mut Matrix, compensation: &mut Matrix, term: &Matrix) {
    for i in 0..sum.n_rows() {
        for j in 0..sum.n_cols() {
            let y = term[(i, j)] - compensation[(i, j)];
            let t = sum[(i, j)] + y;
            compensation[(i, j)] = (t - sum[(i, j)]) - y;
            sum[(i, j)] = t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::linear_graph;

    #[test]
    fn eplus_at_zero_and_one() {
        assert_eq!(eplus(0.0), 0.0);
        assert!((eplus(1.0) - 1.718281828459045).abs() < 1e-15);
    }

    #[test]
    fn eplus_tiny_argument_keeps_relative_accuracy() {
        // e^x − 1 = x + x²/2 + O(x³); at x = 1e−12 the 50-digit value rounds
        // to 1.0000000000005e−12. Literal subtraction would lose half the
        // digits here.
        let expected = 1.0000000000005e-12;
        let got = eplus(1e-12);
        assert!(((got - expected) / expected).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_maps_to_zero() {
        let d = Matrix::zeros(4, 4);
        let t = pwp_transform(&d, &PwpParams::new(3.7)).unwrap();
        assert!(t.t.is_zero());
        assert_eq!(t.truncation_terms, 0);
    }

    #[test]
    fn l3_at_lambda_one_matches_closed_form() {
        // e_+^λ T for the 3-path is [[0,0,0],[λ,0,0],[λ²/2,λ,0]].
        let d = linear_graph(3).unwrap().matrix().clone();
        let t = pwp_transform(&d, &PwpParams::new(1.0)).unwrap();
        let e1 = eplus(1.0);
        assert!((t.t[(1, 0)] - 1.0 / e1).abs() < 1e-15);
        assert!((t.t[(2, 1)] - 1.0 / e1).abs() < 1e-15);
        assert!((t.t[(2, 0)] - 0.5 / e1).abs() < 1e-15);
        assert_eq!(t.t[(0, 0)], 0.0);
        assert_eq!(t.t[(0, 2)], 0.0);
        assert_eq!(t.truncation_terms, 2);
    }

    #[test]
    fn l6_at_lambda_two_is_exact() {
        // Oracle: the closed-form entries λ^{i−j}/(i−j)! for the 6-path,
        // evaluated independently of the series path.
        let lambda = 2.0;
        let d = linear_graph(6).unwrap().matrix().clone();
        let t = pwp_transform(&d, &PwpParams::new(lambda)).unwrap();
        let scale = eplus(lambda);
        let factorial = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0];
        for i in 0..6 {
            for j in 0..6 {
                let expected = if i > j {
                    lambda.powi((i - j) as i32) / factorial[i - j] / scale
                } else {
                    0.0
                };
                assert_eq!(t.t[(i, j)], expected, "entry ({i}, {j})");
            }
        }
        assert_eq!(t.truncation_terms, 5);
    }

    #[test]
    fn rescale_with_unit_factor_is_identity() {
        let d = linear_graph(4).unwrap().matrix().clone();
        let params = PwpParams::new(1.5);
        let a = pwp_transform(&d, &params).unwrap();
        let b = pwp_rescaled(&d, 1.0, &params).unwrap();
        assert_eq!(a.t, b.t);
    }

    #[test]
    fn rescale_matches_scaling_identity_on_l3() {
        // T(cD, λ) = (e_+^{cλ}/e_+^λ) T(D, cλ) with c = 2, λ = 1.
        let d = linear_graph(3).unwrap().matrix().clone();
        let lhs = pwp_rescaled(&d, 2.0, &PwpParams::new(1.0)).unwrap();
        let rhs = pwp_transform(&d, &PwpParams::new(2.0)).unwrap();
        let factor = eplus(2.0) / eplus(1.0);
        for i in 0..3 {
            for j in 0..3 {
                assert!((lhs.t[(i, j)] - factor * rhs.t[(i, j)]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn non_convergence_reports_partial_result() {
        let d = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let params = PwpParams::new(5.0).with_max_terms(3);
        match pwp_transform(&d, &params) {
            Err(Error::TruncationNotConverged {
                lambda,
                terms,
                achieved_bound,
                partial,
            }) => {
                assert_eq!(lambda, 5.0);
                assert_eq!(terms, 3);
                assert!(achieved_bound > 0.0);
                assert!(!partial.is_zero());
            }
            other => panic!("expected TruncationNotConverged, got {other:?}"),
        }
    }

    #[test]
    fn invalid_lambda_is_rejected() {
        let d = Matrix::zeros(2, 2);
        assert!(pwp_transform(&d, &PwpParams::new(0.0)).is_err());
        assert!(pwp_transform(&d, &PwpParams::new(-1.0)).is_err());
    }
}
