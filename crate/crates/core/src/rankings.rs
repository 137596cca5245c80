//! Vertex scores and the rankings they induce.
//!
//! Three score maps are defined on any square influence matrix: dependence
//! (row sums), influence (column sums), and importance (their total). Applied
//! to the matrix of direct influences they give the degree-based orders;
//! applied to the transformed matrix they give the indirect orders.
//!
//! A ranking is a pre-order realized as an ordered partition of the vertices
//! into tie groups, highest score first. Ties are detected with a relative
//! tolerance because series-evaluated scores that are equal in exact
//! arithmetic match only to rounding.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::Matrix;
use crate::pwp::InfluenceMatrix;

/// Default relative tie tolerance, tight enough to keep genuinely distinct
/// scores apart and loose enough to recover exact symmetric ties.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreKind {
    /// Row sums: how much a vertex is influenced.
    Dependence,
    /// Column sums: how much a vertex influences others.
    Influence,
    /// Row plus column sums.
    Importance,
}

impl std::fmt::Display for ScoreKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ScoreKind::Dependence => "dependence",
            ScoreKind::Influence => "influence",
            ScoreKind::Importance => "importance",
        };
        f.write_str(s)
    }
}

/// Whether a score vector was computed on direct influences or on the
/// transformed matrix at some λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ScoreSource {
    Direct,
    Indirect { lambda: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    pub kind: ScoreKind,
    pub values: Vec<f64>,
    pub source: ScoreSource,
}

fn scores_of(m: &Matrix, kind: ScoreKind) -> Vec<f64> {
    match kind {
        ScoreKind::Dependence => m.row_sums(),
        ScoreKind::Influence => m.col_sums(),
        ScoreKind::Importance => m
            .row_sums()
            .iter()
            .zip(m.col_sums())
            .map(|(r, c)| r + c)
            .collect(),
    }
}

/// Degree-style scores on the matrix of direct influences.
pub fn direct_scores(d: &Matrix, kind: ScoreKind) -> Result<ScoreVector, Error> {
    d.square_size()?;
    Ok(ScoreVector {
        kind,
        values: scores_of(d, kind),
        source: ScoreSource::Direct,
    })
}

/// The same sum formulas applied to a matrix of indirect influences.
pub fn indirect_scores(t: &InfluenceMatrix, kind: ScoreKind) -> ScoreVector {
    ScoreVector {
        kind,
        values: scores_of(&t.t, kind),
        source: ScoreSource::Indirect { lambda: t.lambda },
    }
}

/// An ordered partition of vertex indices into tie groups, highest score
/// first. Within a group indices are ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub groups: Vec<Vec<usize>>,
    pub tie_tol: f64,
}

/// Sort vertices by score descending and merge any maximal run whose
/// consecutive gaps stay within `tie_tol · scale`, where
/// `scale = max(1, max|score|)`.
pub fn ranking_from_scores(s: &ScoreVector, tie_tol: f64) -> Result<Ranking, Error> {
    if !tie_tol.is_finite() || tie_tol < 0.0 {
        return Err(Error::InvalidParams(format!(
            "tie tolerance must be nonnegative, got {tie_tol}"
        )));
    }
    let n = s.values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        s.values[b]
            .partial_cmp(&s.values[a])
            .expect("scores are finite")
            .then(a.cmp(&b))
    });

    let scale = s.values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let threshold = tie_tol * scale;

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (pos, &v) in order.iter().enumerate() {
        let start_new = pos == 0 || {
            let prev = order[pos - 1];
            s.values[prev] - s.values[v] > threshold
        };
        if start_new {
            groups.push(vec![v]);
        } else {
            groups.last_mut().expect("nonempty").push(v);
        }
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    Ok(Ranking { groups, tie_tol })
}

/// True iff the two ordered partitions are identical.
pub fn ranking_equal(a: &Ranking, b: &Ranking) -> bool {
    a.groups == b.groups
}

impl Ranking {
    pub fn n_vertices(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    /// Render as `3,4 > 2,5 > 1,6` using the given vertex labels.
    pub fn display_with(&self, labels: &[String]) -> String {
        self.groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|&i| labels[i].as_str())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(" > ")
    }

    /// JSON form: a list of lists of vertex labels.
    pub fn to_json_groups(&self, labels: &[String]) -> serde_json::Value {
        serde_json::Value::Array(
            self.groups
                .iter()
                .map(|g| {
                    serde_json::Value::Array(
                        g.iter()
                            .map(|&i| serde_json::Value::String(labels[i].clone()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

impl std::fmt::Display for Ranking {
    /// Label-free rendering with 1-based vertex numbers.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let labels: Vec<String> = (1..=self.n_vertices()).map(|i| i.to_string()).collect();
        f.write_str(&self.display_with(&labels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::linear_graph;
    use crate::pwp::{pwp_transform, PwpParams};

    fn plain(values: Vec<f64>) -> ScoreVector {
        ScoreVector {
            kind: ScoreKind::Importance,
            values,
            source: ScoreSource::Direct,
        }
    }

    #[test]
    fn l3_direct_scores() {
        let d = linear_graph(3).unwrap().matrix().clone();
        let g = direct_scores(&d, ScoreKind::Importance).unwrap();
        assert_eq!(g.values, vec![1.0, 2.0, 1.0]);
        let f = direct_scores(&d, ScoreKind::Influence).unwrap();
        assert_eq!(f.values, vec![1.0, 1.0, 0.0]);
        let e = direct_scores(&d, ScoreKind::Dependence).unwrap();
        assert_eq!(e.values, vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn zero_matrix_gives_zero_scores() {
        let d = Matrix::zeros(3, 3);
        let s = direct_scores(&d, ScoreKind::Importance).unwrap();
        assert_eq!(s.values, vec![0.0; 3]);
    }

    #[test]
    fn exact_tie_groups_together() {
        let r = ranking_from_scores(&plain(vec![1.0, 1.0, 2.0]), 1e-9).unwrap();
        assert_eq!(r.groups, vec![vec![2], vec![0, 1]]);
        assert_eq!(r.to_string(), "3 > 1,2");
    }

    #[test]
    fn l6_direct_importance_ranking() {
        let d = linear_graph(6).unwrap().matrix().clone();
        let s = direct_scores(&d, ScoreKind::Importance).unwrap();
        assert_eq!(s.values, vec![1.0, 2.0, 2.0, 2.0, 2.0, 1.0]);
        let r = ranking_from_scores(&s, 1e-9).unwrap();
        assert_eq!(r.to_string(), "2,3,4,5 > 1,6");
    }

    #[test]
    fn l6_indirect_importance_at_unit_lambda() {
        let d = linear_graph(6).unwrap().matrix().clone();
        let t = pwp_transform(&d, &PwpParams::new(1.0)).unwrap();
        let s = indirect_scores(&t, ScoreKind::Importance);
        let r = ranking_from_scores(&s, DEFAULT_TIE_TOL).unwrap();
        assert_eq!(r.to_string(), "3,4 > 2,5 > 1,6");
    }

    #[test]
    fn ranking_equal_distinguishes_order_and_grouping() {
        let a = Ranking {
            groups: vec![vec![0], vec![1]],
            tie_tol: 0.0,
        };
        let b = Ranking {
            groups: vec![vec![1], vec![0]],
            tie_tol: 0.0,
        };
        let c = Ranking {
            groups: vec![vec![0, 1]],
            tie_tol: 0.0,
        };
        assert!(ranking_equal(&a, &a.clone()));
        assert!(!ranking_equal(&a, &b));
        assert!(!ranking_equal(&a, &c));
    }

    #[test]
    fn importance_is_dependence_plus_influence() {
        let d = Matrix::from_rows(&[
            vec![0.0, 0.3, 0.0],
            vec![1.2, 0.0, 0.7],
            vec![0.0, 2.0, 0.0],
        ])
        .unwrap();
        let g = direct_scores(&d, ScoreKind::Importance).unwrap();
        let e = direct_scores(&d, ScoreKind::Dependence).unwrap();
        let f = direct_scores(&d, ScoreKind::Influence).unwrap();
        for i in 0..3 {
            assert_eq!(g.values[i], e.values[i] + f.values[i]);
        }
    }

    #[test]
    fn display_with_labels() {
        let r = Ranking {
            groups: vec![vec![2], vec![0, 1]],
            tie_tol: 0.0,
        };
        let labels = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        assert_eq!(r.display_with(&labels), "c > a,b");
        assert_eq!(
            r.to_json_groups(&labels).to_string(),
            r#"[["c"],["a","b"]]"#
        );
    }
}
