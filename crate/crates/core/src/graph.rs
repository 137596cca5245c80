//! Weighted digraphs, file ingestion, and the process-matter block fold.
//!
//! A graph is identified with its adjacency matrix of direct influences `D`,
//! with the convention `D[i][j]` = weight of the influence of vertex `j` on
//! vertex `i`. An edge `source -> target` therefore populates
//! `D[target][source]`.

use crate::error::Error;
use crate::matrix::Matrix;

/// A vertex-labeled weighted directed graph, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    labels: Vec<String>,
    d: Matrix,
}

impl WeightedDigraph {
    /// Wrap a square matrix of direct influences with explicit labels.
    pub fn new(labels: Vec<String>, d: Matrix) -> Result<Self, Error> {
        let n = d.square_size()?;
        if labels.len() != n {
            return Err(Error::Shape(format!(
                "{} labels for a {}x{} matrix",
                labels.len(),
                n,
                n
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("label {} is empty", i + 1),
                });
            }
            if labels[..i].contains(a) {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("duplicate label {a:?}"),
                });
            }
        }
        Ok(WeightedDigraph { labels, d })
    }

    /// Wrap a square matrix with default labels `"1".."n"`.
    pub fn from_matrix(d: Matrix) -> Result<Self, Error> {
        let n = d.square_size()?;
        let labels = (1..=n).map(|i| i.to_string()).collect();
        WeightedDigraph::new(labels, d)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &Matrix {
        &self.d
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Copy of the graph with `weight` added on the edge `source -> target`
    /// (vertex indices). Used by the ε-perturbation sweeps.
    pub fn with_added_weight(
        &self,
        source: usize,
        target: usize,
        weight: f64,
    ) -> Result<WeightedDigraph, Error> {
        let n = self.n_vertices();
        if source >= n || target >= n {
            return Err(Error::Index(format!(
                "edge ({source}, {target}) outside graph of {n} vertices"
            )));
        }
        if !weight.is_finite() {
            return Err(Error::BadWeight(weight));
        }
        let mut d = self.d.clone();
        d[(target, source)] += weight;
        Ok(WeightedDigraph {
            labels: self.labels.clone(),
            d,
        })
    }
}

/// Build a graph from `(source, target, weight)` triples. Labels are taken in
/// order of first appearance; a repeated (source, target) pair is an error.
pub fn from_edge_list(edges: &[(String, String, f64)]) -> Result<WeightedDigraph, Error> {
    let mut labels: Vec<String> = Vec::new();
    let index = |labels: &mut Vec<String>, name: &str| -> Result<usize, Error> {
        if name.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "empty vertex label".into(),
            });
        }
        Ok(match labels.iter().position(|l| l == name) {
            Some(i) => i,
            None => {
                labels.push(name.to_string());
                labels.len() - 1
            }
        })
    };

    let mut triples = Vec::with_capacity(edges.len());
    for (source, target, weight) in edges {
        if !weight.is_finite() {
            return Err(Error::BadWeight(*weight));
        }
        let s = index(&mut labels, source)?;
        let t = index(&mut labels, target)?;
        triples.push((s, t, *weight));
    }

    let n = labels.len();
    let mut d = Matrix::zeros(n, n);
    let mut seen = vec![false; n * n];
    for (s, t, w) in triples {
        if seen[t * n + s] {
            return Err(Error::DuplicateEdge {
                from: labels[s].clone(),
                to: labels[t].clone(),
            });
        }
        seen[t * n + s] = true;
        d[(t, s)] = w;
    }
    WeightedDigraph::new(labels, d)
}

/// Parse the tab-separated edge-list format: `source<TAB>target<TAB>weight`,
/// with `#` comment lines and blank lines ignored.
pub fn from_edge_list_text(text: &str) -> Result<WeightedDigraph, Error> {
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!(
                    "expected `source\\ttarget\\tweight`, got {} fields",
                    fields.len()
                ),
            });
        }
        let weight: f64 = fields[2].parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            message: format!("bad weight {:?}", fields[2]),
        })?;
        edges.push((fields[0].to_string(), fields[1].to_string(), weight));
    }
    if edges.is_empty() {
        return Err(Error::Shape("edge list is empty".into()));
    }
    from_edge_list(&edges)
}

/// Parse the matrix CSV format: n lines of n comma-separated decimals, with an
/// optional leading `#labels:a,b,c` header.
pub fn from_matrix_csv(text: &str) -> Result<WeightedDigraph, Error> {
    let mut labels: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#labels:") {
            if labels.is_some() || !rows.is_empty() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: "label header must be the first line".into(),
                });
            }
            labels = Some(rest.split(',').map(|s| s.trim().to_string()).collect());
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for tok in line.split(',') {
            let v: f64 = tok.trim().parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("bad number {:?}", tok.trim()),
            })?;
            row.push(v);
        }
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(Error::Shape("matrix CSV has no data rows".into()));
    }
    let d = Matrix::from_rows(&rows)?;
    if !d.is_square() {
        return Err(Error::Shape(format!(
            "matrix CSV is {}x{}, expected square",
            d.n_rows(),
            d.n_cols()
        )));
    }
    match labels {
        Some(labels) => WeightedDigraph::new(labels, d),
        None => WeightedDigraph::from_matrix(d),
    }
}

/// Render a graph in the matrix CSV format accepted by [`from_matrix_csv`].
/// Weights print via `{}` so finite decimal inputs round-trip bit-exactly.
pub fn to_matrix_csv(g: &WeightedDigraph) -> String {
    let mut out = String::new();
    out.push_str("#labels:");
    out.push_str(&g.labels().join(","));
    out.push('\n');
    let n = g.n_vertices();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{}", g.matrix()[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Fold a process-matter block matrix `[[0, M], [P, 0]]` into the two
/// one-species influence nets: `(M·P, P·M)`.
///
/// The first `n_processes` indices are processes, the rest are materials.
/// `M` (top right) holds influences of materials on processes, `P` (bottom
/// left) influences of processes on materials. Entry `(q, p)` of `M·P`
/// aggregates the two-step paths process `p` → material → process `q`, and
/// symmetrically for `P·M` on materials.
pub fn process_matter_fold(block: &Matrix, n_processes: usize) -> Result<(Matrix, Matrix), Error> {
    let n = block.square_size()?;
    if n_processes == 0 || n_processes >= n {
        return Err(Error::Shape(format!(
            "n_processes = {n_processes} out of range for a {n}x{n} block matrix"
        )));
    }
    let n_materials = n - n_processes;

    for i in 0..n {
        for j in 0..n {
            let same_block = (i < n_processes) == (j < n_processes);
            if same_block && block[(i, j)] != 0.0 {
                return Err(Error::BlockStructure { row: i, col: j });
            }
        }
    }

    let m = Matrix::from_fn(n_processes, n_materials, |p, mat| {
        block[(p, n_processes + mat)]
    });
    let p = Matrix::from_fn(n_materials, n_processes, |mat, proc_| {
        block[(n_processes + mat, proc_)]
    });

    Ok((m.mul(&p), p.mul(&m)))
}

/// The directed path `1 -> 2 -> ... -> n`: `D[i][j] = 1` iff `i = j + 1`.
pub fn linear_graph(n: usize) -> Result<WeightedDigraph, Error> {
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "linear graph needs at least 2 vertices, got {n}"
        )));
    }
    let mut d = Matrix::zeros(n, n);
    for j in 0..n - 1 {
        d[(j + 1, j)] = 1.0;
    }
    WeightedDigraph::from_matrix(d)
}

/// The directed cycle `1 -> 2 -> ... -> n -> 1`.
pub fn circuit_graph(n: usize) -> Result<WeightedDigraph, Error> {
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "circuit graph needs at least 2 vertices, got {n}"
        )));
    }
    let mut d = Matrix::zeros(n, n);
    for j in 0..n {
        d[((j + 1) % n, j)] = 1.0;
    }
    WeightedDigraph::from_matrix(d)
}

/// A small process-matter demonstration block: two processes, two materials,
/// each process consuming one material and producing the other.
pub fn process_matter_example() -> WeightedDigraph {
    // Vertices: p1, p2, m1, m2. m1 feeds p1, which produces m2; m2 feeds p2,
    // which produces m1.
    let mut d = Matrix::zeros(4, 4);
    d[(0, 2)] = 1.0; // m1 -> p1
    d[(1, 3)] = 1.0; // m2 -> p2
    d[(3, 0)] = 1.0; // p1 -> m2
    d[(2, 1)] = 1.0; // p2 -> m1
    WeightedDigraph::new(vec!["p1".into(), "p2".into(), "m1".into(), "m2".into()], d)
        .expect("example block is well formed")
}
