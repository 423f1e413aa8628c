//! Graph representation, named family generators, incidence/line-graph/Q-graph
//! constructions and edge-list file I/O.
//!
//! Vertices are labeled `0..n-1`. The edge list is kept lexicographically
//! sorted; this ordering defines the labels of the edge-vertices of the
//! Q-graph, which are appended after the original vertices.

use nalgebra::DMatrix;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex index {0} out of range for {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameter for family `{family}`: {reason}")]
    InvalidParameter { family: String, reason: String },
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A simple undirected graph with a sorted, duplicate-free edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from an edge list. Edges are normalized to `(i, j)`
    /// with `i < j` and sorted lexicographically; self-loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a >= n {
                return Err(GraphError::VertexOutOfRange(a, n));
            }
            if b >= n {
                return Err(GraphError::VertexOutOfRange(b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        for w in list.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        Ok(Graph { n, edges: list })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order; index `j` here is the label of the
    /// corresponding edge-vertex `n + j` of the Q-graph.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Adjacency matrix with integer entries.
    pub fn adjacency_int(&self) -> DMatrix<i64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            a[(i, j)] = 1;
            a[(j, i)] = 1;
        }
        a
    }

    pub fn adjacency(&self) -> DMatrix<f64> {
        self.adjacency_int().map(|x| x as f64)
    }
}

/// Vertex-edge incidence matrix; column `j` corresponds to edge `j` in the
/// graph's sorted edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    matrix: DMatrix<i64>,
}

impl IncidenceMatrix {
    pub fn matrix(&self) -> &DMatrix<i64> {
        &self.matrix
    }

    pub fn as_f64(&self) -> DMatrix<f64> {
        self.matrix.map(|x| x as f64)
    }

    pub fn vertex_count(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn edge_count(&self) -> usize {
        self.matrix.ncols()
    }
}

/// `R[i][j] = 1` iff vertex `i` lies on edge `j`.
pub fn incidence(g: &Graph) -> IncidenceMatrix {
    let mut r = DMatrix::zeros(g.vertex_count(), g.edge_count());
    for (j, &(a, b)) in g.edges().iter().enumerate() {
        r[(a, j)] = 1;
        r[(b, j)] = 1;
    }
    IncidenceMatrix { matrix: r }
}

/// Connectivity, bipartiteness (with a witness 2-coloring) and regularity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphClassification {
    pub is_connected: bool,
    pub is_bipartite: bool,
    /// 2-coloring with colors 0/1 when bipartite.
    pub bipartition: Option<Vec<u8>>,
    /// Common degree when the graph is regular.
    pub regularity: Option<usize>,
}

/// BFS connectivity and 2-coloring plus a degree scan.
pub fn classify(g: &Graph) -> GraphClassification {
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in g.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }

    let mut color = vec![u8::MAX; n];
    let mut bipartite = true;
    let mut components = 0usize;
    for start in 0..n {
        if color[start] != u8::MAX {
            continue;
        }
        components += 1;
        color[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    bipartite = false;
                }
            }
        }
    }

    let degrees: Vec<usize> = (0..n).map(|v| adj[v].len()).collect();
    let regularity = match degrees.first() {
        Some(&d) if degrees.iter().all(|&x| x == d) => Some(d),
        _ => None,
    };

    GraphClassification {
        is_connected: components <= 1,
        is_bipartite: bipartite,
        bipartition: if bipartite { Some(color) } else { None },
        regularity,
    }
}

/// Line graph: vertex `j` corresponds to edge `j` of `g`; adjacency equals
/// `R^T R - 2I` in integer arithmetic.
pub fn line_graph(g: &Graph) -> Graph {
    let m = g.edge_count();
    let mut edges = Vec::new();
    let es = g.edges();
    for j in 0..m {
        for k in (j + 1)..m {
            let (a, b) = es[j];
            let (c, d) = es[k];
            if a == c || a == d || b == c || b == d {
                edges.push((j, k));
            }
        }
    }
    Graph::from_edges(m, edges).expect("line graph edges are valid by construction")
}

/// Q-graph: vertices `0..n-1` are the original vertices, `n..n+m-1` are the
/// edge-vertices in sorted edge order. Adjacency is the block matrix
/// `[[0, R], [R^T, A(l(G))]]`.
pub fn q_graph(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut edges = Vec::new();
    for (j, &(a, b)) in g.edges().iter().enumerate() {
        edges.push((a, n + j));
        edges.push((b, n + j));
    }
    for &(j, k) in line_graph(g).edges() {
        edges.push((n + j, n + k));
    }
    Graph::from_edges(n + m, edges).expect("q-graph edges are valid by construction")
}

/// Named graph families with canonical vertex labelings.
pub fn make_family(name: &str, params: &[usize]) -> Result<Graph, GraphError> {
    let one_param = |family: &str| -> Result<usize, GraphError> {
        match params {
            [p] => Ok(*p),
            _ => Err(GraphError::InvalidParameter {
                family: family.to_string(),
                reason: format!("expected exactly one parameter, got {}", params.len()),
            }),
        }
    };
    match name {
        "hypercube" => {
            let d = one_param(name)?;
            if d < 1 {
                return Err(GraphError::InvalidParameter {
                    family: name.into(),
                    reason: "dimension must be at least 1".into(),
                });
            }
            hypercube(d)
        }
        "cocktail" => {
            let m = one_param(name)?;
            if m < 2 {
                return Err(GraphError::InvalidParameter {
                    family: name.into(),
                    reason: "need at least 2 antipodal pairs".into(),
                });
            }
            cocktail_party(m)
        }
        "halved_hypercube" => {
            let d = one_param(name)?;
            if d < 1 {
                return Err(GraphError::InvalidParameter {
                    family: name.into(),
                    reason: "dimension parameter must be at least 1".into(),
                });
            }
            halved_hypercube(d)
        }
        "cycle" => {
            let n = one_param(name)?;
            if n < 3 {
                return Err(GraphError::InvalidParameter {
                    family: name.into(),
                    reason: "cycle needs at least 3 vertices".into(),
                });
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        "complete" => {
            let n = one_param(name)?;
            if n < 1 {
                return Err(GraphError::InvalidParameter {
                    family: name.into(),
                    reason: "complete graph needs at least 1 vertex".into(),
                });
            }
            Graph::from_edges(n, (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))))
        }
        "path" => {
            let n = one_param(name)?;
            if n < 1 {
                return Err(GraphError::InvalidParameter {
                    family: name.into(),
                    reason: "path needs at least 1 vertex".into(),
                });
            }
            Graph::from_edges(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)))
        }
        "petersen" => {
            if !params.is_empty() {
                return Err(GraphError::InvalidParameter {
                    family: name.into(),
                    reason: "petersen takes no parameters".into(),
                });
            }
            petersen()
        }
        other => Err(GraphError::UnknownFamily(other.to_string())),
    }
}

/// `d`-dimensional hypercube; vertex labels are binary-counting order.
fn hypercube(d: usize) -> Result<Graph, GraphError> {
    let n = 1usize << d;
    let edges = (0..n).flat_map(|u| (0..d).filter_map(move |b| {
        let v = u ^ (1 << b);
        (u < v).then_some((u, v))
    }));
    Graph::from_edges(n, edges)
}

/// Cocktail party graph `\bar{mK_2}`: `K_{2m}` minus the perfect matching on
/// antipodal pairs `(2k, 2k+1)`.
fn cocktail_party(m: usize) -> Result<Graph, GraphError> {
    let n = 2 * m;
    let edges = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).filter(|&(i, j)| !(j == i + 1 && i % 2 == 0));
    Graph::from_edges(n, edges)
}

/// Halved hypercube `1/2 Q_{2d}`: even-weight binary strings of length `2d`
/// in binary-counting order, adjacent when the Hamming distance is exactly 2.
fn halved_hypercube(d: usize) -> Result<Graph, GraphError> {
    let len = 2 * d;
    let verts: Vec<usize> = (0..(1usize << len)).filter(|x| x.count_ones() % 2 == 0).collect();
    let n = verts.len();
    let edges = (0..n).flat_map(|i| {
        let verts = &verts;
        ((i + 1)..n).filter_map(move |j| ((verts[i] ^ verts[j]).count_ones() == 2).then_some((i, j)))
    });
    Graph::from_edges(n, edges)
}

/// Petersen graph: outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5.
fn petersen() -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    Graph::from_edges(10, edges)
}

/// Parses the edge-list format: first non-comment line `n`, then `i j` pairs
/// with `0 <= i < j < n`. Lines starting with `#` are comments.
pub fn read_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        if n.is_none() {
            n = Some(s.parse().map_err(|_| GraphError::Parse {
                line,
                reason: format!("expected vertex count, got `{s}`"),
            })?);
            continue;
        }
        let mut parts = s.split_whitespace();
        let (a, b) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(GraphError::Parse {
                    line,
                    reason: format!("expected `i j`, got `{s}`"),
                })
            }
        };
        let a: usize = a.parse().map_err(|_| GraphError::Parse {
            line,
            reason: format!("bad vertex index `{a}`"),
        })?;
        let b: usize = b.parse().map_err(|_| GraphError::Parse {
            line,
            reason: format!("bad vertex index `{b}`"),
        })?;
        edges.push((a, b));
    }
    let n = n.ok_or(GraphError::Parse {
        line: 0,
        reason: "missing vertex count".into(),
    })?;
    Graph::from_edges(n, edges)
}

/// Writes the edge-list format; edges come out lexicographically sorted, so
/// `read_edge_list(write_edge_list(g)) == g` including edge order.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{}", g.vertex_count()).unwrap();
    for &(i, j) in g.edges() {
        writeln!(out, "{i} {j}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypercube_q3_counts() {
        let g = make_family("hypercube", &[3]).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 12);
        let c = classify(&g);
        assert!(c.is_connected);
        assert!(c.is_bipartite);
        assert_eq!(c.regularity, Some(3));
    }

    #[test]
    fn cocktail_3_is_octahedron() {
        let g = make_family("cocktail", &[3]).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 12);
        let c = classify(&g);
        assert!(c.is_connected);
        assert!(!c.is_bipartite);
        assert_eq!(c.regularity, Some(4));
        // antipodal pairs are the non-adjacent ones
        let a = g.adjacency_int();
        for k in 0..3 {
            assert_eq!(a[(2 * k, 2 * k + 1)], 0);
        }
    }

    #[test]
    fn halved_hypercube_tiny() {
        // 1/2 Q_2: even-weight strings of length 2 are {00, 11}, one edge.
        let g = make_family("halved_hypercube", &[1]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn halved_hypercube_q4_is_cocktail_4() {
        let g = make_family("halved_hypercube", &[2]).unwrap();
        assert_eq!(g.vertex_count(), 8);
        let c = classify(&g);
        assert_eq!(c.regularity, Some(6));
        assert!(!c.is_bipartite);
    }

    #[test]
    fn path_p2_classification() {
        let g = make_family("path", &[2]).unwrap();
        let c = classify(&g);
        assert!(c.is_connected);
        assert!(c.is_bipartite);
        assert_eq!(c.regularity, Some(1));
    }

    #[test]
    fn unknown_family_rejected() {
        assert!(matches!(make_family("unknown", &[1]), Err(GraphError::UnknownFamily(_))));
        assert!(matches!(make_family("cycle", &[2]), Err(GraphError::InvalidParameter { .. })));
    }

    #[test]
    fn incidence_basics() {
        let p2 = make_family("path", &[2]).unwrap();
        let r = incidence(&p2);
        assert_eq!(r.matrix(), &DMatrix::from_element(2, 1, 1));

        let c3 = make_family("cycle", &[3]).unwrap();
        let r = incidence(&c3);
        for i in 0..3 {
            assert_eq!(r.matrix().row(i).iter().sum::<i64>(), 2);
            assert_eq!(r.matrix().column(i).iter().sum::<i64>(), 2);
        }
    }

    #[test]
    fn incidence_identity_petersen() {
        // R R^T = rI + A for r-regular graphs.
        let g = make_family("petersen", &[]).unwrap();
        let r = incidence(&g).matrix().clone();
        let lhs = &r * r.transpose();
        let rhs = DMatrix::identity(10, 10) * 3 + g.adjacency_int();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn line_graph_examples() {
        let c3 = make_family("cycle", &[3]).unwrap();
        assert_eq!(line_graph(&c3), c3);

        let p3 = make_family("path", &[3]).unwrap();
        let p2 = make_family("path", &[2]).unwrap();
        assert_eq!(line_graph(&p3), p2);

        let pet = make_family("petersen", &[]).unwrap();
        let lg = line_graph(&pet);
        assert_eq!(lg.vertex_count(), 15);
        assert_eq!(classify(&lg).regularity, Some(4));

        // adjacency equals R^T R - 2I
        let r = incidence(&pet).matrix().clone();
        let expect = r.transpose() * &r - DMatrix::identity(15, 15) * 2;
        assert_eq!(lg.adjacency_int(), expect);
    }

    #[test]
    fn q_graph_examples() {
        let p2 = make_family("path", &[2]).unwrap();
        let p3 = make_family("path", &[3]).unwrap();
        // Q(P_2) = P_3 up to labels: here 0-2, 1-2 which is P_3 centered at 2.
        let q = q_graph(&p2);
        assert_eq!(q.vertex_count(), 3);
        assert_eq!(q.edge_count(), 2);
        assert_eq!(q.degree(2), 2);
        assert_eq!(p3.edge_count(), 2);

        let c3 = make_family("cycle", &[3]).unwrap();
        let q = q_graph(&c3);
        assert_eq!(q.vertex_count(), 6);
        assert_eq!(q.edge_count(), 9);
        // the three new vertices form a triangle
        for j in 3..6 {
            for k in (j + 1)..6 {
                assert_eq!(q.adjacency_int()[(j, k)], 1);
            }
        }

        let q3 = make_family("hypercube", &[3]).unwrap();
        assert_eq!(q_graph(&q3).vertex_count(), 20);
    }

    #[test]
    fn q_graph_block_structure() {
        let g = make_family("cocktail", &[3]).unwrap();
        let q = q_graph(&g);
        let n = g.vertex_count();
        let a = q.adjacency_int();
        // original vertices are pairwise non-adjacent in Q(G)
        for i in 0..n {
            for j in 0..n {
                assert_eq!(a[(i, j)], 0);
            }
        }
        // top-right block is the incidence matrix
        let r = incidence(&g);
        for i in 0..n {
            for j in 0..g.edge_count() {
                assert_eq!(a[(i, n + j)], r.matrix()[(i, j)]);
            }
        }
    }

    #[test]
    fn handshake_on_families() {
        for g in [
            make_family("hypercube", &[3]).unwrap(),
            make_family("cocktail", &[4]).unwrap(),
            make_family("halved_hypercube", &[2]).unwrap(),
            make_family("cycle", &[5]).unwrap(),
            make_family("complete", &[4]).unwrap(),
            make_family("petersen", &[]).unwrap(),
        ] {
            let degsum: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
            assert_eq!(degsum, 2 * g.edge_count());
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let g = read_edge_list("3\n0 1\n1 2\n").unwrap();
        assert_eq!(g, make_family("path", &[3]).unwrap());

        let c3 = make_family("cycle", &[3]).unwrap();
        assert_eq!(write_edge_list(&c3), "3\n0 1\n0 2\n1 2\n");
        assert_eq!(read_edge_list(&write_edge_list(&c3)).unwrap(), c3);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(read_edge_list("2\n0 0\n"), Err(GraphError::SelfLoop(0))));
        assert!(matches!(read_edge_list("2\n0 3\n"), Err(GraphError::VertexOutOfRange(3, 2))));
        assert!(matches!(read_edge_list("2\n0 1\n1 0\n"), Err(GraphError::DuplicateEdge(0, 1))));
        assert!(matches!(read_edge_list("2\nx y\n"), Err(GraphError::Parse { line: 2, .. })));
    }
}
