//! Simple undirected graphs over qubit vertices, the canonical families used
//! throughout the crate, neighbourhood partitioning and bundling.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};

/// A simple undirected graph on vertices `0..n`.
///
/// Adjacency lists are kept sorted and symmetric, with no self-loops.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph { adjacency: vec![Vec::new(); n] }
    }

    /// Build from an edge list. Duplicate edges collapse; out-of-range
    /// vertices and self-loops are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut sets = vec![BTreeSet::new(); n];
        for (i, j) in edges {
            for v in [i, j] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, i, j, n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            sets[i].insert(j);
            sets[j].insert(i);
        }
        Ok(Graph { adjacency: sets.into_iter().map(|s| s.into_iter().collect()).collect() })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Open neighbourhood N(i), sorted.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, nb) in self.adjacency.iter().enumerate() {
            out.extend(nb.iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Open neighbourhood as a bit vector.
    pub fn neighbor_bits(&self, i: usize) -> Bits {
        Bits::from_indices(self.n(), self.adjacency[i].iter().copied())
    }

    /// First vertex with no neighbours, if any.
    pub fn isolated_vertex(&self) -> Option<usize> {
        self.adjacency.iter().position(Vec::is_empty)
    }

    /// Error naming the first isolated vertex, if there is one.
    pub fn require_no_isolated(&self) -> Result<()> {
        match self.isolated_vertex() {
            Some(v) => Err(Error::IsolatedVertex(v)),
            None => Ok(()),
        }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Copy of this graph with one extra vertex `n` joined to `targets`.
    pub fn with_appended_vertex(&self, targets: &[usize]) -> Result<Graph> {
        let n = self.n();
        let edges = self.edges().into_iter().chain(targets.iter().map(|&t| (t, n)));
        Graph::from_edges(n + 1, edges)
    }

    /// Parse the `{"n": int, "edges": [[i, j], ...]}` document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(text).map_err(|e| Error::GraphParse(e.to_string()))?;
        if doc.n == 0 {
            return Err(Error::GraphParse("field \"n\" must be at least 1".into()));
        }
        Graph::from_edges(doc.n, doc.edges.into_iter().map(|[i, j]| (i, j)))
    }

    /// Serialize with edges sorted lexicographically.
    pub fn to_json(&self) -> String {
        let doc = GraphDoc { n: self.n(), edges: self.edges().into_iter().map(|(i, j)| [i, j]).collect() };
        serde_json::to_string(&doc).expect("graph document serializes")
    }

    /// Random connected graph: a random spanning tree plus each remaining
    /// edge independently with probability `extra_edge_prob`.
    pub fn random_connected<R: Rng + ?Sized>(n: usize, extra_edge_prob: f64, rng: &mut R) -> Graph {
        let mut edges = Vec::new();
        for v in 1..n {
            edges.push((rng.gen_range(0..v), v));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(extra_edge_prob) {
                    edges.push((i, j));
                }
            }
        }
        // Relabel so the tree is not always rooted at 0.
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        Graph::from_edges(n, edges.into_iter().map(|(a, b)| (perm[a], perm[b]))).expect("valid edges")
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

/// Parse a graph document.
pub fn parse_graph(text: &str) -> Result<Graph> {
    Graph::from_json(text)
}

/// Named graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Star,
    Cycle,
    Path,
    Complete,
    Grid,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "star" => Ok(Family::Star),
            "cycle" => Ok(Family::Cycle),
            "path" => Ok(Family::Path),
            "complete" => Ok(Family::Complete),
            "grid" => Ok(Family::Grid),
            other => Err(Error::InvalidFamily(format!("unknown family {other:?}"))),
        }
    }
}

/// Build a named family. `grid` takes `[rows, cols]`, every other family a
/// single vertex count. `star(n)` has vertex 0 as its centre.
pub fn make_family(family: Family, params: &[usize]) -> Result<Graph> {
    let single = |min: usize| -> Result<usize> {
        match params {
            [n] if *n >= min => Ok(*n),
            [n] => Err(Error::InvalidFamily(format!("{family:?} needs n >= {min}, got {n}"))),
            _ => Err(Error::InvalidFamily(format!("{family:?} takes one size parameter, got {params:?}"))),
        }
    };
    match family {
        Family::Star => star(single(2)?),
        Family::Cycle => cycle(single(2)?),
        Family::Complete => complete(single(2)?),
        Family::Path => path(single(1)?),
        Family::Grid => match params {
            [r, c] if *r >= 1 && *c >= 1 => grid(*r, *c),
            _ => Err(Error::InvalidFamily(format!("grid takes rows >= 1 and cols >= 1, got {params:?}"))),
        },
    }
}

pub fn star(n: usize) -> Result<Graph> {
    Graph::from_edges(n, (1..n).map(|i| (0, i)))
}

pub fn cycle(n: usize) -> Result<Graph> {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn path(n: usize) -> Result<Graph> {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
}

pub fn complete(n: usize) -> Result<Graph> {
    Graph::from_edges(n, (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))))
}

/// Rows × cols lattice with 4-neighbour adjacency, row-major numbering.
pub fn grid(rows: usize, cols: usize) -> Result<Graph> {
    let idx = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((idx(r, c), idx(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((idx(r, c), idx(r + 1, c)));
            }
        }
    }
    Graph::from_edges(rows * cols, edges)
}

/// A set of vertices sharing one (open or closed) neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionClass {
    pub members: Vec<usize>,
    /// N_l for open classes, N(i) ∪ {i} for closed classes.
    pub shared_neighborhood: Vec<usize>,
}

impl PartitionClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Open-neighbourhood classes (sizes v_l) and closed-neighbourhood classes
/// (true twins, sizes u_m), each sorted by smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionReport {
    pub n: usize,
    pub open_classes: Vec<PartitionClass>,
    pub closed_classes: Vec<PartitionClass>,
}

impl PartitionReport {
    pub fn open_sizes(&self) -> Vec<usize> {
        self.open_classes.iter().map(PartitionClass::size).collect()
    }

    pub fn closed_sizes(&self) -> Vec<usize> {
        self.closed_classes.iter().map(PartitionClass::size).collect()
    }

    /// Σ v_l².
    pub fn open_square_sum(&self) -> usize {
        self.open_classes.iter().map(|c| c.size() * c.size()).sum()
    }

    /// Σ u_m².
    pub fn closed_square_sum(&self) -> usize {
        self.closed_classes.iter().map(|c| c.size() * c.size()).sum()
    }

    /// Index of the open class containing `v`.
    pub fn open_class_of(&self, v: usize) -> usize {
        self.open_classes.iter().position(|c| c.members.contains(&v)).expect("classes cover all vertices")
    }
}

fn group_by_neighborhood(g: &Graph, closed: bool) -> Vec<PartitionClass> {
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut classes: Vec<PartitionClass> = Vec::new();
    for v in 0..g.n() {
        let mut key = g.neighbors(v).to_vec();
        if closed {
            let pos = key.binary_search(&v).unwrap_err();
            key.insert(pos, v);
        }
        match index.get(&key) {
            Some(&c) => classes[c].members.push(v),
            None => {
                index.insert(key.clone(), classes.len());
                classes.push(PartitionClass { members: vec![v], shared_neighborhood: key });
            }
        }
    }
    // Vertices are visited in increasing order, so classes are already
    // ordered by their smallest member.
    classes
}

/// Group vertices by identical open and by identical closed neighbourhoods.
pub fn partition(g: &Graph) -> PartitionReport {
    PartitionReport { n: g.n(), open_classes: group_by_neighborhood(g, false), closed_classes: group_by_neighborhood(g, true) }
}

/// A bundled graph together with the vertex range of each bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundledGraph {
    pub graph: Graph,
    pub bundles: Vec<Range<usize>>,
}

/// Replace base vertex `i` by `sizes[i]` vertices and join bundles `i`, `j`
/// completely whenever `(i, j)` is a base edge. Vertices are numbered bundle
/// by bundle in base-vertex order.
pub fn build_bundle(base: &Graph, sizes: &[usize]) -> Result<BundledGraph> {
    if sizes.len() != base.n() {
        return Err(Error::InvalidBundle(format!("{} sizes for a base graph on {} vertices", sizes.len(), base.n())));
    }
    if let Some(i) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::InvalidBundle(format!("bundle {i} has size 0")));
    }
    base.require_no_isolated()?;
    let mut bundles = Vec::with_capacity(sizes.len());
    let mut offset = 0;
    for &s in sizes {
        bundles.push(offset..offset + s);
        offset += s;
    }
    let mut edges = Vec::new();
    for (i, j) in base.edges() {
        for a in bundles[i].clone() {
            for b in bundles[j].clone() {
                edges.push((a, b));
            }
        }
    }
    Ok(BundledGraph { graph: Graph::from_edges(offset, edges)?, bundles })
}

/// Star base on `k` vertices, `j` qubits per bundle.
pub fn bundled_star(k: usize, j: usize) -> Result<BundledGraph> {
    build_bundle(&make_family(Family::Star, &[k])?, &vec![j; k])
}

/// Cycle base on `k` vertices, `j` qubits per bundle.
pub fn bundled_cycle(k: usize, j: usize) -> Result<BundledGraph> {
    build_bundle(&make_family(Family::Cycle, &[k])?, &vec![j; k])
}

/// The ten-qubit example: a triangle bundled as 3, 4, 3.
pub fn triangle_bundle_example() -> BundledGraph {
    build_bundle(&complete(3).expect("triangle"), &[3, 4, 3]).expect("valid bundle")
}

/// Labelled graphs of every standard family with `n <= max_n` and no
/// isolated vertices: paths, cycles, stars, complete graphs, grids, bundled
/// stars and bundled cycles. Duplicate shapes across families are kept.
pub fn family_set(max_n: usize) -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        out.push((format!("path{n}"), path(n).unwrap()));
        if n >= 3 {
            out.push((format!("cycle{n}"), cycle(n).unwrap()));
        }
        out.push((format!("star{n}"), star(n).unwrap()));
        out.push((format!("complete{n}"), complete(n).unwrap()));
    }
    for r in 2..=max_n {
        for c in r..=max_n {
            if r * c <= max_n {
                out.push((format!("grid{r}x{c}"), grid(r, c).unwrap()));
            }
        }
    }
    for k in 2..=max_n {
        for j in 2..=max_n {
            if k * j <= max_n {
                out.push((format!("bstar{k}x{j}"), bundled_star(k, j).unwrap().graph));
            }
        }
    }
    for k in 3..=max_n {
        for j in 2..=max_n {
            if k * j <= max_n {
                out.push((format!("bcycle{k}x{j}"), bundled_cycle(k, j).unwrap().graph));
            }
        }
    }
    out
}
