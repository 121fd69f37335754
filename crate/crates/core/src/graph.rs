//! Minimum distance graphs and their DIMACS-style text form.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::word::{min_distance, Code};

/// Graphs up to this many vertices also keep bit-row adjacency.
pub const BIT_ROW_LIMIT: usize = 4096;

/// Undirected loop-free graph on vertices `0..vcount`.
#[derive(Clone)]
pub struct MdGraph {
    adj: Vec<Vec<usize>>,
    rows: Option<BitRows>,
    provenance: Vec<String>,
}

#[derive(Clone)]
struct BitRows {
    stride: usize,
    bits: Vec<u64>,
}

impl BitRows {
    fn build(adj: &[Vec<usize>]) -> Self {
        let stride = adj.len().div_ceil(64);
        let mut bits = vec![0u64; stride * adj.len()];
        for (u, nbrs) in adj.iter().enumerate() {
            for &v in nbrs {
                bits[u * stride + v / 64] |= 1 << (v % 64);
            }
        }
        BitRows { stride, bits }
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.stride..(u + 1) * self.stride]
    }
}

impl MdGraph {
    /// Builds a graph from an edge list; rejects loops, out-of-range ids
    /// and repeated edges.
    pub fn from_edges(vcount: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); vcount];
        for (u, v) in edges {
            if u >= vcount || v >= vcount {
                return Err(Error::graph(format!("edge ({u}, {v}) out of range for {vcount} vertices")));
            }
            if u == v {
                return Err(Error::graph(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, nbrs) in adj.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if let Some(w) = nbrs.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::graph(format!("repeated edge ({u}, {})", w[0])));
            }
        }
        Ok(Self::from_sorted_adjacency(adj))
    }

    fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        let rows = (adj.len() <= BIT_ROW_LIMIT).then(|| BitRows::build(&adj));
        MdGraph {
            adj,
            rows,
            provenance: Vec::new(),
        }
    }

    pub fn vcount(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.rows {
            Some(r) => r.row(u)[v / 64] >> (v % 64) & 1 == 1,
            None => self.adj[u].binary_search(&v).is_ok(),
        }
    }

    /// Number of common neighbours of `u` and `v`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        match &self.rows {
            Some(r) => r
                .row(u)
                .iter()
                .zip(r.row(v))
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum(),
            None => {
                let (a, b) = (&self.adj[u], &self.adj[v]);
                let (mut i, mut j, mut n) = (0, 0, 0);
                while i < a.len() && j < b.len() {
                    match a[i].cmp(&b[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            n += 1;
                            i += 1;
                            j += 1;
                        }
                    }
                }
                n
            }
        }
    }

    /// Common degree when the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|n| n.len() == d).then_some(d)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, n)| n.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn set_provenance(&mut self, lines: Vec<String>) {
        self.provenance = lines;
    }

    /// Same edges, vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<MdGraph> {
        if perm.len() != self.vcount() {
            return Err(Error::InvalidParameter(format!(
                "permutation has {} entries for {} vertices",
                perm.len(),
                self.vcount()
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter("vertex map is not a permutation".into()));
            }
        }
        let mut adj = vec![Vec::new(); self.vcount()];
        for (u, nbrs) in self.adj.iter().enumerate() {
            let mut mapped: Vec<usize> = nbrs.iter().map(|&v| perm[v]).collect();
            mapped.sort_unstable();
            adj[perm[u]] = mapped;
        }
        Ok(Self::from_sorted_adjacency(adj))
    }

    /// True when `perm` maps the edge set onto itself.
    pub fn preserves_edges(&self, perm: &[usize]) -> bool {
        perm.len() == self.vcount()
            && self
                .adj
                .iter()
                .enumerate()
                .all(|(u, n)| n.iter().all(|&v| self.has_edge(perm[u], perm[v])))
    }
}

impl PartialEq for MdGraph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for MdGraph {}

impl std::fmt::Debug for MdGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MdGraph(v={}, e={})", self.vcount(), self.edge_count())
    }
}

/// Vertex `i` is the `i`-th word of `code`; edges join words at the
/// code's minimum distance.
pub fn build_mdg(code: &Code) -> Result<MdGraph> {
    let d = min_distance(code)?;
    let words = code.words();
    let adj: Vec<Vec<usize>> = (0..words.len())
        .into_par_iter()
        .map(|i| {
            let x = words[i];
            (0..words.len())
                .filter(|&j| j != i && x.distance(&words[j]) == d)
                .collect()
        })
        .collect();
    let mut g = MdGraph::from_sorted_adjacency(adj);
    g.provenance = vec![format!(
        "minimum distance graph: length {} size {} distance {d}",
        code.length(),
        code.len()
    )];
    Ok(g)
}

/// Relabels vertices by a seeded random permutation; `perm[old] = new`.
pub fn shuffle(g: &MdGraph, seed: u64) -> (MdGraph, Vec<usize>) {
    let mut perm: Vec<usize> = (0..g.vcount()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut out = g.relabel(&perm).expect("shuffle produces a permutation");
    out.provenance = vec![format!("shuffled with seed {seed}")];
    (out, perm)
}

/// DIMACS-style text: leading `c ` provenance lines, `p edge V E`, then
/// `e u v` with 1-based ids, `u < v`, sorted.
pub fn format_dimacs(g: &MdGraph) -> String {
    let mut out = String::with_capacity(g.edge_count() * 12 + 64);
    for line in &g.provenance {
        writeln!(out, "c {line}").unwrap();
    }
    writeln!(out, "p edge {} {}", g.vcount(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Parses the format written by [`format_dimacs`]. Comment lines before
/// the header are kept as provenance; later ones are ignored.
pub fn parse_dimacs(text: &str) -> Result<MdGraph> {
    let mut provenance = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line == "c" || line.starts_with("c ") {
            if header.is_none() {
                provenance.push(line.get(2..).unwrap_or("").to_owned());
            }
            continue;
        }
        let mut parts = line.split_ascii_whitespace();
        match parts.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(Error::format(lineno, "second problem line"));
                }
                if parts.next() != Some("edge") {
                    return Err(Error::format(lineno, "expected `p edge <V> <E>`"));
                }
                let v = parse_num(parts.next(), lineno)?;
                let e = parse_num(parts.next(), lineno)?;
                if parts.next().is_some() {
                    return Err(Error::format(lineno, "trailing tokens"));
                }
                header = Some((v, e));
            }
            Some("e") => {
                let Some((vcount, _)) = header else {
                    return Err(Error::format(lineno, "edge before problem line"));
                };
                let u = parse_num(parts.next(), lineno)?;
                let v = parse_num(parts.next(), lineno)?;
                if parts.next().is_some() {
                    return Err(Error::format(lineno, "trailing tokens"));
                }
                if u == 0 || v > vcount {
                    return Err(Error::format(lineno, format!("vertex id out of range 1..={vcount}")));
                }
                if u >= v {
                    return Err(Error::format(lineno, format!("edge {u} {v} must have u < v")));
                }
                if !seen.insert((u, v)) {
                    return Err(Error::format(lineno, format!("duplicate edge {u} {v}")));
                }
                edges.push((u - 1, v - 1));
            }
            _ => return Err(Error::format(lineno, format!("unrecognized line {line:?}"))),
        }
    }

    let (vcount, ecount) = header.ok_or_else(|| Error::format(0, "missing problem line"))?;
    if edges.len() != ecount {
        return Err(Error::format(
            0,
            format!("header declares {ecount} edges, found {}", edges.len()),
        ));
    }
    let mut g = MdGraph::from_edges(vcount, edges)?;
    g.provenance = provenance;
    Ok(g)
}

fn parse_num(tok: Option<&str>, lineno: usize) -> Result<usize> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::format(lineno, "expected a nonnegative integer"))
}
