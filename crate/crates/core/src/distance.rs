//! Hamming distances recovered from graph topology alone.
//!
//! For an extended 1-perfect code every pairwise distance is recovered by
//! induction from each source vertex. Let `x` be the source and suppose
//! every `z` with `d(x, z) <= i` is known. An unresolved `z` is at distance
//! `i + 2` iff it has a neighbour at distance `i - 2`, or it has exactly
//! `C(i+2, 3)` neighbours at distance `i`. A `z` at distance `i + 4` has at
//! most `C(i+4, 3) / 4` such neighbours, which is strictly less for `i >= 4`.
//!
//! For a 1-perfect code, non-adjacent pairs at distance 4 share exactly 6
//! neighbours, pairs at distance 6 share at most 4, and all others share none.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::MdGraph;

/// Marker for a pair whose distance is not known.
pub const UNRESOLVED: u8 = u8::MAX;

fn binom3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Symmetric table of recovered distances, diagonal zero.
#[derive(Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    vcount: usize,
    entries: Vec<u8>,
}

impl DistanceMatrix {
    pub fn vcount(&self) -> usize {
        self.vcount
    }

    /// `None` when unresolved.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<usize> {
        match self.entries[i * self.vcount + j] {
            UNRESOLVED => None,
            d => Some(d as usize),
        }
    }

    /// Distance of an entry the caller knows is resolved.
    #[inline]
    pub(crate) fn at(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.vcount + j] as usize
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.entries[i * self.vcount..(i + 1) * self.vcount]
    }

    /// Pairs `(u, v, d)` with `u < v`, lexicographic.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, Option<usize>)> + '_ {
        (0..self.vcount).flat_map(move |u| (u + 1..self.vcount).map(move |v| (u, v, self.get(u, v))))
    }
}

impl std::fmt::Debug for DistanceMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DistanceMatrix({} vertices)", self.vcount)
    }
}

/// One application of the counting rule, reported to an observer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountEvent {
    pub source: usize,
    /// Induction level: `z`'s neighbours at distance `level` were counted.
    pub level: usize,
    pub vertex: usize,
    pub count: usize,
    /// Whether the count resolved `z` to distance `level + 2`.
    pub resolved: bool,
}

/// Distances from `source` to every vertex.
pub fn recover_distances_from(g: &MdGraph, source: usize) -> Result<Vec<u8>> {
    recover_row(g, source, &mut |_| {})
}

/// [`recover_distances_from`], reporting every counted vertex to `observe`.
pub fn recover_distances_traced(
    g: &MdGraph,
    source: usize,
    observe: &mut dyn FnMut(CountEvent),
) -> Result<Vec<u8>> {
    recover_row(g, source, observe)
}

fn recover_row(g: &MdGraph, source: usize, observe: &mut dyn FnMut(CountEvent)) -> Result<Vec<u8>> {
    let n = g.vcount();
    if source >= n {
        return Err(Error::InvalidParameter(format!("source {source} out of range")));
    }
    let invalid = |msg: String| Error::graph(format!("not a valid extended-perfect MDG (source {source}): {msg}"));

    let mut row = vec![UNRESOLVED; n];
    // classes[d] lists the vertices at distance d from the source.
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); 5];
    row[source] = 0;
    classes[0].push(source);
    for &v in g.neighbors(source) {
        row[v] = 4;
        classes[4].push(v);
    }
    let mut unresolved = n - 1 - classes[4].len();
    let mut counts = vec![0u32; n];
    let mut marked = vec![false; n];
    let mut level = 4usize;
    let mut empty_levels = 0;

    while unresolved > 0 {
        if level + 2 >= UNRESOLVED as usize {
            return Err(invalid(format!("distances exceed {}", UNRESOLVED - 1)));
        }
        classes.resize(level + 3, Vec::new());
        let mut next = Vec::new();

        for &v in &classes[level - 2] {
            for &z in g.neighbors(v) {
                if row[z] == UNRESOLVED && !marked[z] {
                    marked[z] = true;
                    next.push(z);
                }
            }
        }

        let mut touched = Vec::new();
        for &v in &classes[level] {
            for &z in g.neighbors(v) {
                if row[z] == UNRESOLVED && !marked[z] {
                    if counts[z] == 0 {
                        touched.push(z);
                    }
                    counts[z] += 1;
                }
            }
        }
        let exact = binom3(level + 2);
        let ceiling = binom3(level + 4) / 4;
        touched.sort_unstable();
        for &z in &touched {
            let c = counts[z] as usize;
            counts[z] = 0;
            let resolved = c >= exact;
            observe(CountEvent {
                source,
                level,
                vertex: z,
                count: c,
                resolved,
            });
            if c > exact {
                return Err(invalid(format!(
                    "vertex {z} has {c} neighbours at distance {level}, more than C({},3) = {exact}",
                    level + 2
                )));
            }
            if resolved {
                next.push(z);
            } else if c > ceiling {
                return Err(invalid(format!(
                    "vertex {z} has {c} neighbours at distance {level}, between {ceiling} and {exact}"
                )));
            }
        }

        for &z in &next {
            marked[z] = false;
            row[z] = (level + 2) as u8;
        }
        unresolved -= next.len();
        if next.is_empty() {
            // An empty class is legitimate (no weight n-2 words), two in a
            // row means the remaining vertices are unreachable.
            empty_levels += 1;
            if empty_levels >= 2 {
                return Err(invalid(format!(
                    "{unresolved} vertices unresolved after level {level}"
                )));
            }
        } else {
            empty_levels = 0;
        }
        next.sort_unstable();
        classes[level + 2] = next;
        level += 2;
    }
    Ok(row)
}

/// Full distance matrix of a (purported) extended 1-perfect code's MDG.
///
/// Unlike the per-source functions, which only apply the counting rules,
/// this rejects graphs whose vertex count and degree fit no extended code.
pub fn recover_all_distances(g: &MdGraph) -> Result<DistanceMatrix> {
    let n = g.vcount();
    if extended_length(g).is_none() {
        return Err(Error::graph(format!(
            "not a valid extended-perfect MDG: {n} vertices with degrees {:?}",
            g.regular_degree()
        )));
    }
    let rows: Vec<Vec<u8>> = (0..n)
        .into_par_iter()
        .map(|x| recover_distances_from(g, x))
        .collect::<Result<_>>()?;
    let mut entries = Vec::with_capacity(n * n);
    for r in &rows {
        entries.extend_from_slice(r);
    }
    let m = DistanceMatrix { vcount: n, entries };
    for u in 0..n {
        for v in u + 1..n {
            if m.entries[u * n + v] != m.entries[v * n + u] {
                return Err(Error::graph(format!(
                    "asymmetric recovered distance between {u} and {v}: {} vs {}",
                    m.entries[u * n + v],
                    m.entries[v * n + u]
                )));
            }
        }
    }
    Ok(m)
}

/// Non-adjacent pairs `(u, v)`, `u < v`, sharing six neighbours: exactly the
/// pairs at Hamming distance 4 in a 1-perfect code.
pub fn recognize_distance4_pairs(g: &MdGraph) -> Result<Vec<(usize, usize)>> {
    let n = g.vcount();
    if perfect_length(g).is_none() {
        return Err(Error::graph(format!(
            "not a valid 1-perfect MDG: {n} vertices with degrees {:?}",
            g.regular_degree()
        )));
    }
    let per_vertex: Vec<Vec<(usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut counts = vec![0u32; n];
            let mut touched = Vec::new();
            for &y in g.neighbors(u) {
                for &z in g.neighbors(y) {
                    if z > u {
                        if counts[z] == 0 {
                            touched.push(z);
                        }
                        counts[z] += 1;
                    }
                }
            }
            touched.sort_unstable();
            let mut out = Vec::new();
            for z in touched {
                if g.has_edge(u, z) {
                    continue;
                }
                match counts[z] {
                    6 => out.push((u, z)),
                    0..=4 => {}
                    c => {
                        return Err(Error::graph(format!(
                            "not a valid 1-perfect MDG: vertices {u} and {z} share {c} neighbours"
                        )))
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(per_vertex.into_iter().flatten().collect())
}

/// Length `n` of the 1-perfect code whose MDG has this vertex count and
/// degree, if any.
pub fn perfect_length(g: &MdGraph) -> Option<usize> {
    let deg = g.regular_degree()?;
    (3..=62usize).find(|&n| {
        (1u128 << n).is_multiple_of(n as u128 + 1)
            && (1u128 << n) / (n as u128 + 1) == g.vcount() as u128
            && n * (n - 1) / 6 == deg
    })
}

/// Length `n` of the extended 1-perfect code whose MDG has this vertex
/// count and degree, if any.
pub fn extended_length(g: &MdGraph) -> Option<usize> {
    let deg = g.regular_degree()?;
    (4..=62usize).step_by(2).find(|&n| {
        let size = 2 * n as u128;
        (1u128 << n).is_multiple_of(size)
            && (1u128 << n) / size == g.vcount() as u128
            && n * (n - 1) * (n - 2) / 24 == deg
    })
}

/// The MDG of the parity-extended code, with original and added edges.
#[derive(Clone, Debug)]
pub struct GraphExtension {
    pub graph: MdGraph,
    /// Edges of the input graph (distance-3 pairs).
    pub old_edges: Vec<(usize, usize)>,
    /// Recognized distance-4 pairs.
    pub new_edges: Vec<(usize, usize)>,
}

/// Adds an edge between every recognized distance-4 pair.
pub fn extend_graph(g: &MdGraph) -> Result<GraphExtension> {
    if perfect_length(g).is_none() {
        return Err(Error::graph(format!(
            "{} vertices with degrees {:?} do not match any 1-perfect code",
            g.vcount(),
            g.regular_degree()
        )));
    }
    let new_edges = recognize_distance4_pairs(g)?;
    let old_edges: Vec<(usize, usize)> = g.edges().collect();
    let mut graph = MdGraph::from_edges(g.vcount(), old_edges.iter().chain(&new_edges).copied())?;
    graph.set_provenance(vec!["extended with recognized distance-4 pairs".into()]);
    Ok(GraphExtension {
        graph,
        old_edges,
        new_edges,
    })
}
