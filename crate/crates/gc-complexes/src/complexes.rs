use std::fmt;

use graph_core::RawGraph;
use gra_operads::xgraph_degree;

/// The graph complexes the workbench knows how to build.
///
/// Plain kinds span graphs on vertices `0..n`; external kinds span directed
/// graphs whose vertex `0` is the distinguished external vertex and whose
/// inputs are `1..=n`.  "Full" kinds impose no connectivity or valence
/// conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[allow(clippy::upper_case_acronyms)]
pub enum ComplexKind {
    /// Undirected graphs, unrestricted.
    FGC,
    /// Undirected, connected, no tadpoles, every vertex at least trivalent.
    GC,
    /// Directed, connected, every vertex at least two-valent in total.
    DGC,
    /// External graphs, unrestricted.
    FXGC,
    /// External graphs that stay connected and non-empty when the external
    /// vertex is deleted.
    XGC,
    /// `XGC` with the lone-external-tadpole span removed.
    XGCNoTadpole,
    /// `FXGC` without external tadpoles.
    FXGCNoTadpole,
}

impl ComplexKind {
    pub fn is_external(self) -> bool {
        matches!(
            self,
            ComplexKind::FXGC
                | ComplexKind::XGC
                | ComplexKind::XGCNoTadpole
                | ComplexKind::FXGCNoTadpole
        )
    }

    pub fn is_directed(self) -> bool {
        self.is_external() || self == ComplexKind::DGC
    }

    pub fn name(self) -> &'static str {
        match self {
            ComplexKind::FGC => "fGC",
            ComplexKind::GC => "GC",
            ComplexKind::DGC => "dGC",
            ComplexKind::FXGC => "fXGC",
            ComplexKind::XGC => "XGC",
            ComplexKind::XGCNoTadpole => "XGC-nt",
            ComplexKind::FXGCNoTadpole => "fXGC-nt",
        }
    }

    pub fn from_name(s: &str) -> Option<ComplexKind> {
        Some(match s {
            "fGC" => ComplexKind::FGC,
            "GC" => ComplexKind::GC,
            "dGC" => ComplexKind::DGC,
            "fXGC" => ComplexKind::FXGC,
            "XGC" => ComplexKind::XGC,
            "XGC-nt" => ComplexKind::XGCNoTadpole,
            "fXGC-nt" => ComplexKind::FXGCNoTadpole,
            _ => return None,
        })
    }
}

/// A complex kind together with the one convention toggle that changes its
/// span: whether `XGC` keeps the graph consisting of a single external
/// tadpole and nothing else.  Both readings of the source material are
/// coherent; including it is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComplexId {
    pub kind: ComplexKind,
    pub include_pure_tadpole: bool,
}

impl ComplexId {
    pub fn new(kind: ComplexKind) -> ComplexId {
        ComplexId { kind, include_pure_tadpole: true }
    }

    pub fn with_pure_tadpole(kind: ComplexKind, include: bool) -> ComplexId {
        ComplexId { kind, include_pure_tadpole: include }
    }

    /// Stable identifier used in cache file names and headers.
    pub fn slug(&self) -> String {
        if self.kind == ComplexKind::XGC && !self.include_pure_tadpole {
            format!("{}-nopt", self.kind.name())
        } else {
            self.kind.name().to_string()
        }
    }
}

impl fmt::Display for ComplexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.slug())
    }
}

/// Position of a graded piece of a complex: vertex count (input count for
/// external kinds) and edge count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bigrade {
    pub n_vertices: usize,
    pub n_edges: usize,
}

impl Bigrade {
    pub fn new(n_vertices: usize, n_edges: usize) -> Bigrade {
        Bigrade { n_vertices, n_edges }
    }

    /// The bigrade the differential maps into.
    pub fn next(self) -> Bigrade {
        Bigrade { n_vertices: self.n_vertices + 1, n_edges: self.n_edges + 1 }
    }

    /// The bigrade the differential maps from, when there is one.
    pub fn prev(self) -> Option<Bigrade> {
        if self.n_vertices == 0 || self.n_edges == 0 {
            None
        } else {
            Some(Bigrade { n_vertices: self.n_vertices - 1, n_edges: self.n_edges - 1 })
        }
    }
}

impl fmt::Display for Bigrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n_vertices, self.n_edges)
    }
}

/// Cohomological degree of a basis graph.  Plain kinds: `2(n−1) − k`.
/// External kinds: `2(n−1)` minus the internal edge count plus the external
/// tadpole count, so that plain edges lower, external tadpoles raise, and
/// other external edges do not move the degree.
pub fn graph_degree(kind: ComplexKind, g: &RawGraph) -> i64 {
    if kind.is_external() {
        xgraph_degree(g)
    } else {
        2 * (g.n_vertices() as i64 - 1) - g.n_edges() as i64
    }
}

/// Number of connected components an external graph has once the external
/// vertex is deleted: input components joined by internal edges, plus one
/// component per external tadpole.  Edges running between an input and the
/// external vertex connect nothing.
pub fn xgraph_component_count(g: &RawGraph) -> usize {
    let n = g.n_vertices() - 1;
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut tadpoles = 0usize;
    for &(a, b) in g.edges() {
        if a == 0 && b == 0 {
            tadpoles += 1;
        } else if a > 0 && b > 0 {
            let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
            parent[ra] = rb;
        }
    }
    let mut roots: Vec<usize> = (1..=n).map(|v| find(&mut parent, v)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len() + tadpoles
}

fn input_connected(g: &RawGraph) -> bool {
    g.is_connected_on(1..g.n_vertices() as u8)
}

/// Whether a raw graph spans part of the given complex.  The graph must
/// already have the right shape for the kind (directedness; for external
/// kinds, vertex `0` present), which the basis enumerator guarantees.
pub fn is_member(id: &ComplexId, g: &RawGraph) -> bool {
    if !id.kind.is_external() && g.n_vertices() == 0 {
        // The empty graph belongs to no plain complex: connected graphs are
        // nonempty, and reconnection-insertion of a vertexless factor is
        // undefined.
        return false;
    }
    match id.kind {
        ComplexKind::FGC => !g.directed(),
        ComplexKind::GC => {
            !g.directed()
                && !g.has_tadpole()
                && g.is_connected()
                && (0..g.n_vertices() as u8).all(|v| g.valence(v) >= 3)
        }
        ComplexKind::DGC => {
            g.directed()
                && g.is_connected()
                && (0..g.n_vertices() as u8).all(|v| g.valence(v) >= 2)
        }
        ComplexKind::FXGC => g.directed() && g.n_vertices() >= 1,
        ComplexKind::FXGCNoTadpole => {
            g.directed() && g.n_vertices() >= 1 && g.edges().iter().all(|&e| e != (0, 0))
        }
        ComplexKind::XGC | ComplexKind::XGCNoTadpole => {
            if !g.directed() || g.n_vertices() == 0 {
                return false;
            }
            let n = g.n_vertices() - 1;
            if n == 0 {
                // The only connected non-empty graph without inputs is one
                // external tadpole; keeping it is an explicit convention.
                id.kind == ComplexKind::XGC
                    && id.include_pure_tadpole
                    && g.edges() == [(0, 0)]
            } else {
                g.edges().iter().all(|&e| e != (0, 0)) && input_connected(g)
            }
        }
    }
}
