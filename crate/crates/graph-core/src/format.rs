use crate::graph::RawGraph;
use crate::{GraphError, Result};

/// Which family a serialized graph belongs to.
///
/// * `Undirected` / `Directed`: plain graphs, text vertices are 1-based.
/// * `External`: directed graphs with a distinguished external vertex `0`
///   and inputs `1..=n`; text vertices match the internal numbering.  The
///   role of an edge is determined by its endpoints: both positive — an
///   ordinary edge between inputs; exactly one zero — an edge tying an input
///   to the external vertex; `(0,0)` — a loop on the external vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKindTag {
    Undirected,
    Directed,
    External,
}

impl GraphKindTag {
    pub fn letter(self) -> char {
        match self {
            GraphKindTag::Undirected => 'u',
            GraphKindTag::Directed => 'd',
            GraphKindTag::External => 'x',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'u' => Some(GraphKindTag::Undirected),
            'd' => Some(GraphKindTag::Directed),
            'x' => Some(GraphKindTag::External),
            _ => None,
        }
    }
}

/// Renders a graph as a single line, e.g. `u n=3 e=(1,2)(2,3)`.
///
/// For plain graphs `n` counts all vertices and edge endpoints are 1-based;
/// for `x` graphs `n` counts the inputs and endpoints are written as stored,
/// with `0` the external vertex.
pub fn print_graph_line(tag: GraphKindTag, g: &RawGraph) -> String {
    let (n, base) = match tag {
        GraphKindTag::External => (g.n_vertices() - 1, 0u8),
        _ => (g.n_vertices(), 1u8),
    };
    let mut out = format!("{} n={} e=", tag.letter(), n);
    for &(a, b) in g.edges() {
        out.push_str(&format!("({},{})", a + base, b + base));
    }
    out
}

/// Parses the output of [`print_graph_line`].  Whitespace between fields is
/// flexible; the edge list may be empty (`e=`).
pub fn parse_graph_line(line: &str) -> Result<(GraphKindTag, RawGraph)> {
    let bad = |why: String| GraphError::Parse(format!("{why} in graph line {line:?}"));
    let mut fields = line.split_whitespace();
    let tag_str = fields.next().ok_or_else(|| bad("missing kind tag".into()))?;
    let tag = match tag_str {
        s if s.len() == 1 => GraphKindTag::from_letter(s.chars().next().unwrap()),
        _ => None,
    }
    .ok_or_else(|| bad(format!("unknown kind tag {tag_str:?}")))?;

    let n_field = fields.next().ok_or_else(|| bad("missing n= field".into()))?;
    let n: usize = n_field
        .strip_prefix("n=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad(format!("bad vertex count field {n_field:?}")))?;

    let rest: String = fields.collect::<Vec<_>>().join("");
    let e_body = rest
        .strip_prefix("e=")
        .ok_or_else(|| bad("missing e= field".into()))?;

    let (n_vertices, base) = match tag {
        GraphKindTag::External => (n + 1, 0u8),
        _ => (n, 1u8),
    };

    let mut edges = Vec::new();
    let mut cursor = e_body;
    while !cursor.is_empty() {
        let inner = cursor
            .strip_prefix('(')
            .ok_or_else(|| bad(format!("expected '(' at {cursor:?}")))?;
        let close = inner
            .find(')')
            .ok_or_else(|| bad("unclosed parenthesis".into()))?;
        let pair = &inner[..close];
        let (a_str, b_str) = pair
            .split_once(',')
            .ok_or_else(|| bad(format!("expected 'a,b' in {pair:?}")))?;
        let a: u8 = a_str.trim().parse().map_err(|_| bad(format!("bad endpoint {a_str:?}")))?;
        let b: u8 = b_str.trim().parse().map_err(|_| bad(format!("bad endpoint {b_str:?}")))?;
        if base == 1 && (a == 0 || b == 0) {
            return Err(bad("plain-graph endpoints are 1-based".into()));
        }
        edges.push((a - base, b - base));
        cursor = &inner[close + 1..];
    }

    let directed = tag != GraphKindTag::Undirected;
    let raw = RawGraph::new(n_vertices, directed, edges)?;
    Ok((tag, raw))
}
