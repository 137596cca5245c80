//! Cross-module invariants: closed forms against the series engine, the
//! documented behavior of path and cycle graphs across the λ axis, and the
//! spectral machinery against both.

use pwp_core::analytic::{
    circuit_scores, crossing_consecutive, linear_importance, linear_influence,
};
use pwp_core::graph::{circuit_graph, linear_graph};
use pwp_core::matrix::Matrix;
use pwp_core::pwp::{eplus, pwp_transform, PwpParams};
use pwp_core::rankings::{direct_scores, indirect_scores, ranking_from_scores, Ranking, ScoreKind};
use pwp_core::spectral::{
    isolate_roots, pwp_transform_spectral, real_eigendecomposition, score_difference_expsum,
};
use pwp_core::sweep::{lambda_sweep, verify_unique_crossings, SweepSpec};

const LAMBDA_GRID: [f64; 6] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn linear_closed_forms_match_series_engine() {
    for n in 2..=12 {
        let d = linear_graph(n).unwrap().matrix().clone();
        for &lambda in &LAMBDA_GRID {
            let t = pwp_transform(&d, &PwpParams::new(lambda)).unwrap();
            let imp = indirect_scores(&t, ScoreKind::Importance);
            let inf = indirect_scores(&t, ScoreKind::Influence);
            for j in 1..=n {
                assert!(
                    rel_close(
                        imp.values[j - 1],
                        linear_importance(n, j, lambda).unwrap(),
                        1e-10
                    ),
                    "importance n={n} j={j} lambda={lambda}"
                );
                assert!(
                    rel_close(
                        inf.values[j - 1],
                        linear_influence(n, j, lambda).unwrap(),
                        1e-10
                    ),
                    "influence n={n} j={j} lambda={lambda}"
                );
            }
        }
    }
}

#[test]
fn circuit_closed_forms_match_series_engine() {
    for n in 2..=12 {
        let d = circuit_graph(n).unwrap().matrix().clone();
        for &lambda in &LAMBDA_GRID {
            let t = pwp_transform(&d, &PwpParams::new(lambda)).unwrap();
            let imp = indirect_scores(&t, ScoreKind::Importance);
            let inf = indirect_scores(&t, ScoreKind::Influence);
            let (imp_cf, inf_cf) = circuit_scores(n, lambda, 1e-14).unwrap();
            for v in 0..n {
                assert!(rel_close(imp.values[v], imp_cf.values[v], 1e-9));
                assert!(rel_close(inf.values[v], inf_cf.values[v], 1e-9));
            }
        }
    }
}

/// Path-counting oracle: enumerate directed paths explicitly and rebuild T
/// entry by entry as Σ_k (#paths of length k from j to i) λ^k/k! / e_+^λ.
fn count_paths(adj: &Matrix, from: usize, to: usize, len: usize) -> f64 {
    if len == 0 {
        return if from == to { 1.0 } else { 0.0 };
    }
    let n = adj.n_rows();
    (0..n)
        .map(|mid| {
            if adj[(mid, from)] != 0.0 {
                adj[(mid, from)] * count_paths(adj, mid, to, len - 1)
            } else {
                0.0
            }
        })
        .sum()
}

#[test]
fn nilpotent_series_equals_path_enumeration() {
    // the 6-path and a 5-vertex diamond DAG with a weighted tail
    let mut diamond = Matrix::zeros(5, 5);
    diamond[(1, 0)] = 1.0;
    diamond[(2, 0)] = 2.0;
    diamond[(3, 1)] = 1.0;
    diamond[(3, 2)] = 0.5;
    diamond[(4, 3)] = 1.0;
    let cases = vec![linear_graph(6).unwrap().matrix().clone(), diamond];
    for d in cases {
        let n = d.n_rows();
        let lambda = 1.7;
        let t = pwp_transform(&d, &PwpParams::new(lambda)).unwrap();
        for i in 0..n {
            for j in 0..n {
                let mut expected = 0.0;
                let mut weight = 1.0;
                for len in 1..=n {
                    weight *= lambda / len as f64;
                    expected += count_paths(&d, j, i, len) * weight;
                }
                expected /= eplus(lambda);
                assert!(
                    (t.t[(i, j)] - expected).abs() < 1e-14,
                    "entry ({i},{j}): {} vs {expected}",
                    t.t[(i, j)]
                );
            }
        }
    }
}

#[test]
fn linear_importance_symmetric_around_center() {
    for n in 2..=12 {
        for &lambda in &LAMBDA_GRID {
            for j in 1..=n {
                let a = linear_importance(n, j, lambda).unwrap();
                let b = linear_importance(n, n + 1 - j, lambda).unwrap();
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }
    }
}

#[test]
fn series_importance_symmetric_around_center() {
    for n in 2..=12usize {
        let d = linear_graph(n).unwrap().matrix().clone();
        for &lambda in &LAMBDA_GRID {
            let t = pwp_transform(&d, &PwpParams::new(lambda)).unwrap();
            let values = indirect_scores(&t, ScoreKind::Importance).values;
            for j in 0..n {
                let (a, b) = (values[j], values[n - 1 - j]);
                assert!(
                    (a - b).abs() <= 1e-12 * a.abs().max(1.0),
                    "n={n} j={} lambda={lambda}",
                    j + 1
                );
            }
        }
    }
}

#[test]
fn linear_influence_ranking_is_stable_for_all_lambda() {
    // tie_tol = 0: influences all decay toward zero, so any absolute
    // tolerance would eventually merge them even though the strict order
    // 1 > 2 > ... > n never breaks
    for n in [4usize, 6, 11] {
        let d = linear_graph(n).unwrap().matrix().clone();
        for m in 1..=50 {
            let lambda = 30.0 * m as f64 / 50.0;
            let t = pwp_transform(&d, &PwpParams::new(lambda)).unwrap();
            let r = ranking_from_scores(&indirect_scores(&t, ScoreKind::Influence), 0.0).unwrap();
            let expected: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
            assert_eq!(r.groups, expected, "n={n} lambda={lambda}");
        }
    }
}

#[test]
fn small_and_large_lambda_order_reversal() {
    for n in 3usize..=12 {
        let k = n.div_ceil(2);
        // small λ: importance increases toward the center
        for j in 1..k {
            let a = linear_importance(n, j, 0.01).unwrap();
            let b = linear_importance(n, j + 1, 0.01).unwrap();
            assert!(a < b, "small lambda: n={n} j={j}");
        }
        // large λ: the order is reversed
        for j in 1..k {
            let a = linear_importance(n, j, 100.0).unwrap();
            let b = linear_importance(n, j + 1, 100.0).unwrap();
            assert!(a > b, "large lambda: n={n} j={j}");
        }
    }
}

#[test]
fn importance_decays_to_zero() {
    for n in 2..=12 {
        for j in 1..=n {
            let mid = linear_importance(n, j, 100.0).unwrap();
            let far = linear_importance(n, j, 200.0).unwrap();
            assert!(far < mid, "not decreasing: n={n} j={j}");
            assert!(mid < 1e-10, "not small at lambda=100: n={n} j={j}: {mid}");
        }
    }
}

#[test]
fn sweep_event_count_matches_pair_census() {
    // k(k-1)/2 distinct crossing events among the head vertices; the
    // 11-path packs c_{2,6} and c_{3,4} only 7.3e-5 apart, so this also
    // exercises event separation well below the grid resolution
    for (n, expected) in [(6usize, 3usize), (11, 15)] {
        let d = linear_graph(n).unwrap().matrix().clone();
        let report = lambda_sweep(&d, &SweepSpec::lambda(0.5, 9.0)).unwrap();
        assert_eq!(report.crossings.len(), expected, "n={n}");
        let census = verify_unique_crossings(n, 9.0, 1000).unwrap();
        assert_eq!(census.total_crossings(), expected, "census n={n}");
    }
}

#[test]
fn crossing_formula_matches_curve_intersections_up_to_20() {
    for n in 3usize..=20 {
        let k = n.div_ceil(2);
        for i in 1..k {
            let c = crossing_consecutive(n, i).unwrap().lambda_star;
            let a = linear_importance(n, i, c).unwrap();
            let b = linear_importance(n, i + 1, c).unwrap();
            assert!((a - b).abs() < 1e-10, "n={n} i={i}");
        }
    }
}

#[test]
fn consecutive_crossings_are_ordered_up_to_60() {
    for n in 4usize..=60 {
        let k = n.div_ceil(2);
        let mut prev = 0.0;
        for i in 1..k {
            let c = crossing_consecutive(n, i).unwrap().lambda_star;
            assert!(c > prev, "n={n} i={i}: {c} <= {prev}");
            prev = c;
        }
    }
}

/// `fine` refines `coarse` iff every strict comparison of `coarse` is kept.
fn refines(fine: &Ranking, coarse: &Ranking) -> bool {
    let position = |r: &Ranking| {
        let mut pos = vec![0usize; r.n_vertices()];
        for (g, group) in r.groups.iter().enumerate() {
            for &v in group {
                pos[v] = g;
            }
        }
        pos
    };
    let pf = position(fine);
    let pc = position(coarse);
    for u in 0..pf.len() {
        for v in 0..pf.len() {
            if pc[u] < pc[v] && pf[u] >= pf[v] {
                return false;
            }
        }
    }
    true
}

#[test]
fn sweep_end_segments_bracket_the_reordering_window() {
    for n in [6usize, 8] {
        let k = n.div_ceil(2);
        let d = linear_graph(n).unwrap().matrix().clone();
        let first_crossing = crossing_consecutive(n, 1).unwrap().lambda_star;
        let last_crossing = crossing_consecutive(n, k - 1).unwrap().lambda_star;
        let spec = SweepSpec::lambda(first_crossing * 0.2, last_crossing * 2.0);
        let report = lambda_sweep(&d, &spec).unwrap();

        // below the first crossing the indirect ranking refines the direct one
        let direct =
            ranking_from_scores(&direct_scores(&d, ScoreKind::Importance).unwrap(), 1e-9).unwrap();
        let first = &report.segments.first().unwrap().ranking;
        assert!(refines(first, &direct), "n={n}: {first} vs {direct}");

        // above the last crossing the order among vertices 1..k reverses
        let last = &report.segments.last().unwrap().ranking;
        let head_order = |r: &Ranking| -> Vec<usize> {
            r.groups
                .iter()
                .flatten()
                .copied()
                .filter(|&v| v < k)
                .collect()
        };
        let mut reversed = head_order(first);
        reversed.reverse();
        assert_eq!(head_order(last), reversed, "n={n}");
    }
}

#[test]
fn spectral_and_series_transforms_agree_on_symmetric_input() {
    let d = Matrix::from_rows(&[
        vec![0.3, 0.8, 0.2, 0.5, 0.1, 0.9],
        vec![0.8, 0.0, 0.7, 0.3, 0.6, 0.2],
        vec![0.2, 0.7, 0.5, 0.1, 0.4, 0.3],
        vec![0.5, 0.3, 0.1, 0.8, 0.2, 0.6],
        vec![0.1, 0.6, 0.4, 0.2, 0.0, 0.7],
        vec![0.9, 0.2, 0.3, 0.6, 0.7, 0.4],
    ])
    .unwrap();
    let spectrum = real_eigendecomposition(&d, 1e-8).unwrap();
    for &lambda in &[0.5, 1.0, 2.0, 5.0] {
        let spectral = pwp_transform_spectral(&spectrum, lambda).unwrap();
        let series = pwp_transform(&d, &PwpParams::new(lambda)).unwrap();
        assert!(spectral.t.relative_frobenius_distance(&series.t) < 1e-8);
    }
}

#[test]
fn expsum_roots_match_sweep_crossings() {
    // random-looking fixed symmetric matrix; the score-difference roots and
    // the series-based sweep transitions must agree pair by pair
    let d = Matrix::from_rows(&[
        vec![0.31, 0.74, 0.58, 0.21, 0.93],
        vec![0.74, 0.12, 0.45, 0.67, 0.29],
        vec![0.58, 0.45, 0.88, 0.34, 0.51],
        vec![0.21, 0.67, 0.34, 0.76, 0.42],
        vec![0.93, 0.29, 0.51, 0.42, 0.05],
    ])
    .unwrap();
    let spectrum = real_eigendecomposition(&d, 1e-8).unwrap();
    let (lo, hi) = (0.05, 20.0);
    for i in 0..5 {
        for j in i + 1..5 {
            let e = score_difference_expsum(&spectrum, ScoreKind::Importance, i, j).unwrap();
            if e.is_degenerate() {
                continue;
            }
            let iso = isolate_roots(&e, lo, hi, 4000, 1e-9).unwrap();

            // sign changes of the series-computed score difference on the
            // same grid, as the independent route
            let diff = |lambda: f64| {
                let t = pwp_transform(&d, &PwpParams::new(lambda)).unwrap();
                let s = indirect_scores(&t, ScoreKind::Importance);
                s.values[i] - s.values[j]
            };
            let mut series_roots = 0;
            let mut prev = diff(lo);
            for m in 1..400 {
                let x = lo + (hi - lo) * m as f64 / 399.0;
                let f = diff(x);
                if prev.signum() * f.signum() < 0.0 {
                    series_roots += 1;
                }
                prev = f;
            }
            assert_eq!(
                iso.roots.len(),
                series_roots,
                "pair ({i},{j}): {:?}",
                iso.roots
            );
        }
    }
}

#[test]
fn conjugated_labels_transfer_score_differences() {
    let d = Matrix::from_rows(&[
        vec![0.2, 0.7, 0.4],
        vec![0.7, 0.1, 0.5],
        vec![0.4, 0.5, 0.6],
    ])
    .unwrap();
    // cyclic permutation 0 -> 1 -> 2 -> 0
    let perm = [1usize, 2, 0];
    let p = Matrix::from_fn(3, 3, |i, j| if perm[i] == j { 1.0 } else { 0.0 });
    let conj = p.mul(&d).mul(&p.transpose());

    let s1 = real_eigendecomposition(&d, 1e-8).unwrap();
    let s2 = real_eigendecomposition(&conj, 1e-8).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let e1 = score_difference_expsum(&s1, ScoreKind::Importance, i, j).unwrap();
            // conj[(a, b)] = d[(perm[a], perm[b])], so old vertex v lives at
            // the new index where perm hits v
            let pi = perm.iter().position(|&x| x == i).unwrap();
            let pj = perm.iter().position(|&x| x == j).unwrap();
            let e2 = score_difference_expsum(&s2, ScoreKind::Importance, pi, pj).unwrap();
            for &lambda in &[0.3, 1.0, 3.0] {
                assert!(
                    (e1.eval(lambda) - e2.eval(lambda)).abs() < 1e-9,
                    "({i},{j}) lambda={lambda}"
                );
            }
        }
    }
}
