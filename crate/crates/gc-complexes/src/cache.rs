use std::fs;
use std::path::{Path, PathBuf};

use exact_linalg::SparseRationalMatrix;
use graph_core::{
    canonicalize_with, parse_graph_line, print_graph_line, CanonOptions, CanonicalGraph,
    GraphKindTag,
};
use gra_operads::xgraph_options;

use crate::diff::differential_between;
use crate::{enumerate_basis, Bigrade, ComplexError, ComplexId, GradedBasis, Result};

/// Version stamp of every convention a cached artifact depends on: edge
/// parities, canonical-form order, basis membership rules, differential
/// normalization, and the file formats themselves.  Bump it whenever any of
/// those change; stale files are then recomputed, never reinterpreted.
pub const CONVENTIONS_VERSION: u32 = 1;

/// On-disk cache holding one file per basis and one per differential,
/// keyed by complex and bigrade.  Files carry a conventions header; a file
/// whose header does not match the running conventions is recomputed and
/// replaced.  Writes are atomic (write-then-rename), and a recomputation
/// produces byte-identical files, so repeated runs never churn.
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Cache> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn header(kind: &str, id: &ComplexId, b: Bigrade) -> String {
        format!(
            "# graph-complex-cache v{CONVENTIONS_VERSION} kind={kind} complex={} \
             bigrade={},{}\n",
            id.slug(),
            b.n_vertices,
            b.n_edges
        )
    }

    fn file(&self, kind: &str, id: &ComplexId, b: Bigrade) -> PathBuf {
        self.dir.join(format!("{kind}-{}-{}-{}.txt", id.slug(), b.n_vertices, b.n_edges))
    }

    /// The basis at one bigrade, from disk when a fresh file exists.
    pub fn basis(&self, id: &ComplexId, b: Bigrade) -> Result<GradedBasis> {
        let path = self.file("basis", id, b);
        let want = Self::header("basis", id, b);
        if let Some(body) = read_if_fresh(&path, &want)? {
            return parse_basis(&path, id, b, &body);
        }
        let basis = enumerate_basis(id, b)?;
        let tag = if id.kind.is_external() {
            GraphKindTag::External
        } else if id.kind.is_directed() {
            GraphKindTag::Directed
        } else {
            GraphKindTag::Undirected
        };
        let mut text = want;
        for g in basis.graphs() {
            text.push_str(&print_graph_line(tag, g.raw()));
            text.push('\n');
        }
        write_atomic(&path, &text)?;
        Ok(basis)
    }

    /// The differential matrix out of one bigrade, from disk when fresh.
    pub fn differential(&self, id: &ComplexId, b: Bigrade) -> Result<SparseRationalMatrix> {
        let path = self.file("differential", id, b);
        let want = Self::header("differential", id, b);
        if let Some(body) = read_if_fresh(&path, &want)? {
            return SparseRationalMatrix::from_text(&body).map_err(|e| {
                ComplexError::BadCache {
                    path: path.display().to_string(),
                    reason: e.to_string(),
                }
            });
        }
        let source = self.basis(id, b)?;
        let target = self.basis(id, b.next())?;
        let m = differential_between(id, &source, &target)?;
        let text = format!("{want}{}", m.to_text());
        write_atomic(&path, &text)?;
        Ok(m)
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let tmp = path.with_extension("txt.tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn read_if_fresh(path: &Path, want_header: &str) -> Result<Option<String>> {
    match fs::read_to_string(path) {
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
        Ok(s) => Ok(s.strip_prefix(want_header).map(str::to_string)),
    }
}

fn parse_basis(path: &Path, id: &ComplexId, b: Bigrade, body: &str) -> Result<GradedBasis> {
    let bad = |reason: String| ComplexError::BadCache {
        path: path.display().to_string(),
        reason,
    };
    let plain = CanonOptions::plain();
    let external = xgraph_options();
    let opts = if id.kind.is_external() { &external } else { &plain };
    let mut graphs: Vec<CanonicalGraph> = Vec::new();
    for line in body.lines().filter(|l| !l.trim().is_empty()) {
        let (_, raw) = parse_graph_line(line).map_err(|e| bad(e.to_string()))?;
        let sg = canonicalize_with(&raw, opts)?;
        if sg.zero || sg.sign != 1 || sg.graph.raw() != &raw {
            return Err(bad(format!("line {line:?} is not a canonical representative")));
        }
        graphs.push(sg.graph);
    }
    if !graphs.windows(2).all(|w| w[0] < w[1]) {
        return Err(bad("basis file out of order".into()));
    }
    Ok(GradedBasis::from_sorted(*id, b, graphs))
}
