use crate::graph::{CanonicalGraph, RawGraph, SignedGraph};
use crate::{GraphError, Result, MAX_CANON_ORDERINGS};

/// Parameters of the canonical-form search.
///
/// `fixed_prefix` pins the first vertices: relabellings permute only the
/// vertices `fixed_prefix..n`.  `edge_is_odd` assigns a Koszul parity to each
/// edge from its endpoints alone; transposing two odd edges flips the sign of
/// a term, even edges commute with everything.
pub struct CanonOptions<'a> {
    pub fixed_prefix: usize,
    pub edge_is_odd: &'a dyn Fn(u8, u8) -> bool,
}

fn always_odd(_: u8, _: u8) -> bool {
    true
}

impl<'a> CanonOptions<'a> {
    pub fn plain() -> CanonOptions<'static> {
        CanonOptions { fixed_prefix: 0, edge_is_odd: &always_odd }
    }
}

/// Canonical form for plain graphs: every edge odd, all vertices free.
pub fn canonicalize(g: &RawGraph) -> Result<SignedGraph> {
    canonicalize_with(g, &CanonOptions::plain())
}

pub fn canonicalize_with(g: &RawGraph, opts: &CanonOptions) -> Result<SignedGraph> {
    let out = search(g, opts, false)?;
    Ok(out.signed(g))
}

/// All automorphisms of `g` (as vertex permutations respecting
/// `opts.fixed_prefix`) together with the Koszul sign of the edge permutation
/// each one induces.  The identity is always included.
pub fn automorphism_signs(g: &RawGraph, opts: &CanonOptions) -> Result<Vec<(Vec<u8>, i8)>> {
    let out = search(g, opts, true)?;
    let inv_star = invert(&out.sigma_star);
    let mut auts: Vec<(Vec<u8>, i8)> = out
        .achievers
        .iter()
        .map(|(sigma, parity)| {
            let tau: Vec<u8> = (0..g.n_vertices())
                .map(|v| inv_star[sigma[v] as usize])
                .collect();
            (tau, parity * out.parity_star)
        })
        .collect();
    auts.sort();
    Ok(auts)
}

fn invert(perm: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; perm.len()];
    for (v, &p) in perm.iter().enumerate() {
        inv[p as usize] = v as u8;
    }
    inv
}

struct SearchOutcome {
    best: Vec<u16>,
    sigma_star: Vec<u8>,
    parity_star: i8,
    zero: bool,
    /// All permutations achieving the best edge list (only when requested).
    achievers: Vec<(Vec<u8>, i8)>,
}

impl SearchOutcome {
    fn signed(&self, g: &RawGraph) -> SignedGraph {
        let edges = self.best.iter().map(|&c| (c >> 4, c & 0xf)).map(|(a, b)| (a as u8, b as u8));
        let raw = RawGraph::new(g.n_vertices(), g.directed(), edges.collect())
            .expect("canonical representative is a valid graph");
        SignedGraph {
            graph: CanonicalGraph(raw),
            sign: if self.zero { 1 } else { self.parity_star },
            zero: self.zero,
        }
    }
}

fn search(g: &RawGraph, opts: &CanonOptions, collect_auts: bool) -> Result<SearchOutcome> {
    let n = g.n_vertices();
    assert!(opts.fixed_prefix <= n);
    let odd: Vec<bool> = g.edges().iter().map(|&(a, b)| (opts.edge_is_odd)(a, b)).collect();

    let blocks = refine_classes(g, opts.fixed_prefix);
    let mut count: u64 = 1;
    for b in &blocks {
        count = count.saturating_mul(factorial(b.len()));
        if count > MAX_CANON_ORDERINGS {
            return Err(GraphError::ResourceLimit(format!(
                "canonical-form search would examine more than {MAX_CANON_ORDERINGS} orderings"
            )));
        }
    }

    let block_perms: Vec<Vec<Vec<u8>>> = blocks.iter().map(|b| permutations(b)).collect();
    let mut indices = vec![0usize; blocks.len()];
    let mut sigma = vec![0u8; n];
    for v in 0..opts.fixed_prefix {
        sigma[v] = v as u8;
    }

    let mut best: Option<Vec<u16>> = None;
    let mut sigma_star = Vec::new();
    let mut parity_star = 1i8;
    let mut zero = false;
    let mut achievers: Vec<(Vec<u8>, i8)> = Vec::new();

    let mut scratch: Vec<(u16, u8)> = Vec::with_capacity(g.n_edges());
    loop {
        // Assemble sigma for the current odometer state.
        let mut pos = opts.fixed_prefix as u8;
        for (bi, perm_set) in block_perms.iter().enumerate() {
            for &v in &perm_set[indices[bi]] {
                sigma[v as usize] = pos;
                pos += 1;
            }
        }

        scratch.clear();
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            let (mut x, mut y) = (sigma[a as usize], sigma[b as usize]);
            if !g.directed() && x > y {
                std::mem::swap(&mut x, &mut y);
            }
            scratch.push((((x as u16) << 4) | y as u16, i as u8));
        }
        scratch.sort_unstable();
        let candidate: Vec<u16> = scratch.iter().map(|&(c, _)| c).collect();

        let cmp = match &best {
            None => std::cmp::Ordering::Less,
            Some(b) => candidate.cmp(b),
        };
        if cmp != std::cmp::Ordering::Greater {
            let parity = sort_parity(&scratch, &odd);
            if cmp == std::cmp::Ordering::Less {
                best = Some(candidate);
                sigma_star = sigma.clone();
                parity_star = parity;
                zero = false;
                achievers.clear();
            } else if parity != parity_star {
                zero = true;
            }
            if collect_auts {
                achievers.push((sigma.clone(), parity));
            }
        }

        // Advance the odometer.
        let mut bi = 0;
        loop {
            if bi == indices.len() {
                let mut out = SearchOutcome {
                    best: best.expect("at least one ordering is examined"),
                    sigma_star,
                    parity_star,
                    zero,
                    achievers,
                };
                // A repeated odd edge is an odd symmetry all by itself: the two
                // copies trade places under the identity relabelling.
                for w in out.best.windows(2) {
                    if w[0] == w[1] {
                        let (a, b) = ((w[0] >> 4) as u8, (w[0] & 0xf) as u8);
                        if (opts.edge_is_odd)(a, b) {
                            out.zero = true;
                        }
                    }
                }
                return Ok(out);
            }
            indices[bi] += 1;
            if indices[bi] < block_perms[bi].len() {
                break;
            }
            indices[bi] = 0;
            bi += 1;
        }
    }
}

/// Koszul parity of the sort that produced `sorted`: the parity of the
/// permutation of odd-edge original positions, read off in sorted order.
fn sort_parity(sorted: &[(u16, u8)], odd: &[bool]) -> i8 {
    let seq: Vec<u8> = sorted.iter().filter(|&&(_, i)| odd[i as usize]).map(|&(_, i)| i).collect();
    let mut inv = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

fn permutations(items: &[u8]) -> Vec<Vec<u8>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest: Vec<u8> = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Splits the free vertices into blocks that any admissible relabelling must
/// preserve, ordered by an isomorphism-invariant key.  Iterated neighbourhood
/// refinement in the style of Weisfeiler–Leman, coarse but cheap; the
/// permutation search only runs inside the resulting blocks.
fn refine_classes(g: &RawGraph, fixed: usize) -> Vec<Vec<u8>> {
    let n = g.n_vertices();
    let free: Vec<u8> = (fixed as u8..n as u8).collect();
    if free.is_empty() {
        return Vec::new();
    }

    // class id per vertex; fixed vertices get distinct immutable classes.
    let mut class = vec![0u64; n];
    for v in 0..fixed {
        class[v] = v as u64 + 1;
    }

    let key_of = |v: u8, class: &[u64]| -> Vec<u64> {
        let mut tags: Vec<u64> = Vec::new();
        for &(a, b) in g.edges() {
            if a == v && b == v {
                tags.push(2 << 32);
            } else if a == v {
                tags.push(class[b as usize]);
            } else if b == v {
                let d = if g.directed() { 1u64 } else { 0u64 };
                tags.push((d << 32) | class[a as usize]);
            }
        }
        tags.sort_unstable();
        let mut key = vec![class[v as usize]];
        key.extend(tags);
        key
    };

    let mut n_classes = 0usize;
    loop {
        let mut keyed: Vec<(Vec<u64>, u8)> = free.iter().map(|&v| (key_of(v, &class), v)).collect();
        keyed.sort();
        let mut next = class.clone();
        let mut cid = fixed as u64 + 1;
        for i in 0..keyed.len() {
            if i > 0 && keyed[i].0 != keyed[i - 1].0 {
                cid += 1;
            }
            next[keyed[i].1 as usize] = cid;
        }
        let classes_now = (cid - fixed as u64) as usize;
        class = next;
        if classes_now == n_classes {
            break;
        }
        n_classes = classes_now;
    }

    let mut keyed: Vec<(Vec<u64>, u8)> = free.iter().map(|&v| (key_of(v, &class), v)).collect();
    keyed.sort();
    let mut blocks: Vec<Vec<u8>> = Vec::new();
    for i in 0..keyed.len() {
        if i == 0 || keyed[i].0 != keyed[i - 1].0 {
            blocks.push(Vec::new());
        }
        blocks.last_mut().unwrap().push(keyed[i].1);
    }
    blocks
}
