//! Reproduction of the published stability tables for the two reference
//! examples: the 6-path with one added edge of weight ε, and the 6-cycle
//! with one added edge of weight ε.
//!
//! The published figures fix where the extra edge sits, but only the ranking
//! sequences and transition thresholds are available as data, so the edge is
//! recovered by exhaustive search over every candidate (i → j, i ≠ j, not
//! already present): a candidate matches when its rankings at the published
//! ε values equal the published rows. The matched candidate's sweep is then
//! checked threshold by threshold, each against one unit in the last printed
//! digit of the published value.

use pwp_core::error::Error;
use pwp_core::graph::{circuit_graph, linear_graph};
use pwp_core::pwp::{pwp_transform, PwpParams};
use pwp_core::rankings::{indirect_scores, ranking_from_scores, ScoreKind, DEFAULT_TIE_TOL};
use pwp_core::sweep::{epsilon_sweep, SweepSpec};
use pwp_core::WeightedDigraph;

/// Published rankings of the perturbed 6-path at λ = 1, by ε.
const L6_ROWS: [(f64, &str); 8] = [
    (0.0, "3,4 > 2,5 > 1,6"),
    (0.01, "4 > 3 > 2 > 5 > 1 > 6"),
    (0.28, "4 > 2 > 3 > 5 > 1 > 6"),
    (0.69, "4 > 2 > 5 > 3 > 1 > 6"),
    (2.1, "4 > 2 > 5 > 1 > 3 > 6"),
    (2.8, "2 > 4 > 5 > 1 > 3 > 6"),
    (7.0, "2 > 4 > 5 > 1 > 6 > 3"),
    (23.9, "2 > 4 > 1 > 5 > 6 > 3"),
];

/// Published transition thresholds and their one-unit-in-the-last-digit
/// tolerances.
const L6_THRESHOLDS: [(f64, f64); 7] = [
    (0.01, 0.01),
    (0.28, 0.01),
    (0.69, 0.01),
    (2.1, 0.1),
    (2.8, 0.1),
    (7.0, 1.0),
    (23.9, 0.1),
];

const C6_RANKING: &str = "3,6 > 1,2 > 4,5";

fn ranking_at(
    g: &WeightedDigraph,
    edge: (usize, usize),
    eps: f64,
    lambda: f64,
) -> Result<String, Error> {
    let perturbed = g.with_added_weight(edge.0, edge.1, eps)?;
    let t = pwp_transform(perturbed.matrix(), &PwpParams::new(lambda))?;
    let scores = indirect_scores(&t, ScoreKind::Importance);
    Ok(ranking_from_scores(&scores, DEFAULT_TIE_TOL)?.display_with(g.labels()))
}

fn candidate_edges(g: &WeightedDigraph) -> Vec<(usize, usize)> {
    let n = g.n_vertices();
    let mut out = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if s != t && g.matrix()[(t, s)] == 0.0 {
                out.push((s, t));
            }
        }
    }
    out
}

pub struct RowCheck {
    pub eps: f64,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

pub struct ThresholdCheck {
    pub published: f64,
    pub unit: f64,
    pub detected: f64,
    pub pass: bool,
}

pub struct L6Reproduction {
    /// 1-based (source, target) of the matched edge, if any candidate matched.
    pub edge: Option<(usize, usize)>,
    pub rows: Vec<RowCheck>,
    pub thresholds: Vec<ThresholdCheck>,
    /// Best row-match count over all candidates, for the failure diagnostic.
    pub best_candidates: Vec<((usize, usize), usize)>,
    pub pass: bool,
}

pub fn reproduce_l6() -> Result<L6Reproduction, Error> {
    let base = linear_graph(6)?;

    // search: rankings at the eight published ε values must match the rows
    let mut matched = None;
    let mut best: Vec<((usize, usize), usize)> = Vec::new();
    for edge in candidate_edges(&base) {
        let mut hits = 0;
        for (eps, expected) in &L6_ROWS {
            if ranking_at(&base, edge, *eps, 1.0)? == *expected {
                hits += 1;
            } else {
                break;
            }
        }
        best.push((edge, hits));
        if hits == L6_ROWS.len() {
            matched = Some(edge);
            break;
        }
    }
    best.sort_by_key(|b| std::cmp::Reverse(b.1));
    best.truncate(3);

    let Some(edge) = matched else {
        return Ok(L6Reproduction {
            edge: None,
            rows: Vec::new(),
            thresholds: Vec::new(),
            best_candidates: best,
            pass: false,
        });
    };

    let rows: Vec<RowCheck> = L6_ROWS
        .iter()
        .map(|(eps, expected)| {
            let got = ranking_at(&base, edge, *eps, 1.0)?;
            Ok(RowCheck {
                eps: *eps,
                expected: (*expected).to_string(),
                got: got.clone(),
                pass: got == *expected,
            })
        })
        .collect::<Result<_, Error>>()?;

    // transitions from a fine sweep; the tie-splitting events right above
    // ε = 0 arrive as a cluster of near-coincident boundaries, so events
    // within 1e-6 of each other collapse to one band located at its end
    let spec = SweepSpec::epsilon(edge, 1.0, 0.0, 30.0)
        .with_grid_points(600)
        .with_refine_tol(1e-9);
    let report = epsilon_sweep(&base, &spec)?;
    let mut bands: Vec<f64> = Vec::new();
    for c in &report.crossings {
        match bands.last_mut() {
            Some(last) if c.param - *last <= 1e-6 => *last = c.param,
            _ => bands.push(c.param),
        }
    }

    let mut thresholds = Vec::new();
    let mut pass = rows.iter().all(|r| r.pass) && bands.len() == L6_THRESHOLDS.len();
    for (idx, (published, unit)) in L6_THRESHOLDS.iter().enumerate() {
        let detected = bands.get(idx).copied().unwrap_or(f64::NAN);
        let ok = (detected - published).abs() <= unit + 1e-9;
        pass &= ok;
        thresholds.push(ThresholdCheck {
            published: *published,
            unit: *unit,
            detected,
            pass: ok,
        });
    }

    Ok(L6Reproduction {
        edge: Some((edge.0 + 1, edge.1 + 1)),
        rows,
        thresholds,
        best_candidates: best,
        pass,
    })
}

impl L6Reproduction {
    pub fn render(&self) -> String {
        let mut out = String::new();
        match self.edge {
            Some((s, t)) => out.push_str(&format!(
                "perturbed 6-path: matched extra edge {s} -> {t}\n"
            )),
            None => {
                out.push_str("perturbed 6-path: NO candidate edge reproduces the table\n");
                out.push_str("closest candidates (edge, matching rows):\n");
                for ((s, t), hits) in &self.best_candidates {
                    out.push_str(&format!("  {} -> {}: {hits} rows\n", s + 1, t + 1));
                }
                return out;
            }
        }
        out.push_str(
            "  eps     published                    computed                     status\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "  {:<7} {:<28} {:<28} {}\n",
                r.eps,
                r.expected,
                r.got,
                if r.pass { "PASS" } else { "FAIL" }
            ));
        }
        out.push_str("  transition thresholds (published vs detected):\n");
        for t in &self.thresholds {
            out.push_str(&format!(
                "  {:<7} +-{:<5} {:<22.12} {}\n",
                t.published,
                t.unit,
                t.detected,
                if t.pass { "PASS" } else { "FAIL" }
            ));
        }
        out
    }
}

pub struct C6Reproduction {
    pub edge: Option<(usize, usize)>,
    pub ranking: String,
    pub stable: bool,
    pub pass: bool,
}

pub fn reproduce_c6() -> Result<C6Reproduction, Error> {
    let base = circuit_graph(6)?;

    for edge in candidate_edges(&base) {
        if ranking_at(&base, edge, 0.0001, 1.0)? != C6_RANKING {
            continue;
        }
        // stability claim: the ranking persists from 1e-4 through 10
        let spec = SweepSpec::epsilon(edge, 1.0, 0.0001, 10.0).with_grid_points(200);
        let report = epsilon_sweep(&base, &spec)?;
        let stable = report.segments.len() == 1;
        return Ok(C6Reproduction {
            edge: Some((edge.0 + 1, edge.1 + 1)),
            ranking: report.segments[0].ranking.display_with(base.labels()),
            stable,
            pass: stable,
        });
    }

    Ok(C6Reproduction {
        edge: None,
        ranking: String::new(),
        stable: false,
        pass: false,
    })
}

impl C6Reproduction {
    pub fn render(&self) -> String {
        match self.edge {
            Some((s, t)) => format!(
                "perturbed 6-cycle: matched extra edge {s} -> {t}\n  ranking at eps=1e-4: {}  (expected {C6_RANKING})\n  stable through eps=10: {}\n",
                self.ranking,
                if self.stable { "PASS" } else { "FAIL" }
            ),
            None => format!(
                "perturbed 6-cycle: NO candidate edge yields {C6_RANKING} at eps=1e-4\n"
            ),
        }
    }
}
