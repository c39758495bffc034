use crate::{GraphError, Result, MAX_EDGES, MAX_VERTICES};

pub type EdgeList = Vec<(u8, u8)>;

/// A vertex- and edge-labelled graph.  Vertices are `0..n_vertices`; the edge
/// list order is the edge labelling.  Undirected edges are kept normalized as
/// `(min, max)` so that only the list order, never the orientation of a pair,
/// carries sign information.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RawGraph {
    n_vertices: usize,
    directed: bool,
    edges: EdgeList,
}

impl RawGraph {
    pub fn new(n_vertices: usize, directed: bool, mut edges: EdgeList) -> Result<Self> {
        if n_vertices > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n_vertices));
        }
        if edges.len() > MAX_EDGES {
            return Err(GraphError::TooManyEdges(edges.len()));
        }
        for e in &mut edges {
            if (e.0 as usize) >= n_vertices || (e.1 as usize) >= n_vertices {
                return Err(GraphError::BadEndpoint(e.0, e.1, n_vertices));
            }
            if !directed && e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        Ok(RawGraph { n_vertices, directed, edges })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Total valence of `v` (a tadpole at `v` counts twice).
    pub fn valence(&self, v: u8) -> usize {
        self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
    }

    pub fn in_valence(&self, v: u8) -> usize {
        debug_assert!(self.directed);
        self.edges.iter().filter(|&&(_, b)| b == v).count()
    }

    pub fn out_valence(&self, v: u8) -> usize {
        debug_assert!(self.directed);
        self.edges.iter().filter(|&&(a, _)| a == v).count()
    }

    /// Relabels vertices by `perm` (old index -> new index), keeping edge order.
    pub fn relabel(&self, perm: &[u8]) -> RawGraph {
        assert_eq!(perm.len(), self.n_vertices);
        let mut edges: EdgeList = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a as usize], perm[b as usize]))
            .collect();
        if !self.directed {
            for e in &mut edges {
                if e.0 > e.1 {
                    *e = (e.1, e.0);
                }
            }
        }
        RawGraph { n_vertices: self.n_vertices, directed: self.directed, edges }
    }

    /// Connectivity of the graph spanned by all vertices in `vertex_range`
    /// and the edges whose endpoints both lie in it.  Vertices outside the
    /// range are ignored entirely.
    pub fn is_connected_on(&self, vertex_range: std::ops::Range<u8>) -> bool {
        let verts: Vec<u8> = vertex_range.collect();
        if verts.is_empty() {
            return true;
        }
        let n = self.n_vertices;
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            if verts.contains(&a) && verts.contains(&b) {
                adj[a as usize].push(b);
                adj[b as usize].push(a);
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![verts[0]];
        seen[verts[0] as usize] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        verts.iter().all(|&v| seen[v as usize])
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_on(0..self.n_vertices as u8)
    }

    pub fn has_tadpole(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }
}

/// A `RawGraph` known to be in canonical form.  Constructed only by the
/// canonicalization engine, so `Ord`/`Eq` compare whole isomorphism classes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalGraph(pub(crate) RawGraph);

impl CanonicalGraph {
    pub fn raw(&self) -> &RawGraph {
        &self.0
    }

    pub fn into_raw(self) -> RawGraph {
        self.0
    }
}

impl std::ops::Deref for CanonicalGraph {
    type Target = RawGraph;
    fn deref(&self) -> &RawGraph {
        &self.0
    }
}

/// Result of canonicalizing a graph: the class representative, the Koszul sign
/// relating the input edge order to the representative's, and whether the
/// class vanishes because some automorphism permutes the edges oddly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    pub graph: CanonicalGraph,
    pub sign: i8,
    pub zero: bool,
}
