//! Steiner quadruple systems, block graphs and point cliques.
//!
//! In the block graph of an SQS(v) the blocks through a fixed point form a
//! clique of size `(v-1)(v-2)/6`. For `v >= 16` every clique without a
//! common point is strictly smaller, so the maximum cliques are exactly the
//! point cliques and the design can be read back from the graph.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::graph::MdGraph;
use crate::word::Code;

/// Smallest point count for which point cliques are recognizable by size.
pub const MIN_POINTS: usize = 16;

/// Size of a point clique in the block graph of an SQS(v).
pub fn point_clique_size(v: usize) -> usize {
    (v - 1) * (v - 2) / 6
}

/// An S(3, 4, v); points are `1..=v`, each block sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sqs {
    pub v: usize,
    pub blocks: Vec<[usize; 4]>,
}

impl Sqs {
    pub fn new(v: usize, blocks: Vec<[usize; 4]>) -> Result<Self> {
        let mut sorted = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            b.sort_unstable();
            if b[0] == 0 || b[3] > v || b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!("bad block {b:?} for v = {v}")));
            }
            sorted.push(b);
        }
        Ok(Sqs { v, blocks: sorted })
    }

    /// Checks that every triple of points lies in exactly one block.
    pub fn validate(&self) -> Result<()> {
        let v = self.v;
        let idx = |a: usize, b: usize, c: usize| ((a - 1) * v + (b - 1)) * v + (c - 1);
        let mut hits = vec![0u8; v * v * v];
        for b in &self.blocks {
            for skip in 0..4 {
                let t: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| b[k]).collect();
                let h = &mut hits[idx(t[0], t[1], t[2])];
                *h = h.saturating_add(1);
            }
        }
        for a in 1..=v {
            for b in a + 1..=v {
                for c in b + 1..=v {
                    let h = hits[idx(a, b, c)];
                    if h != 1 {
                        return Err(Error::graph(format!(
                            "triple {{{a}, {b}, {c}}} lies in {h} blocks"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// One line per block: four sorted 1-based points.
    pub fn format(&self) -> String {
        let mut out = String::new();
        for b in &self.blocks {
            writeln!(out, "{} {} {} {}", b[0], b[1], b[2], b[3]).unwrap();
        }
        out
    }
}

/// Neighbourhood SQS of codeword `x` in an extended 1-perfect code:
/// supports of `x + y` over codewords `y` at distance 4.
pub fn neighborhood_sqs(code: &Code, x: usize) -> Result<Sqs> {
    let w = code.word(x);
    let blocks = code
        .words()
        .iter()
        .filter(|y| w.distance(y) == 4)
        .map(|y| {
            let s = w.xor(y).support();
            [s[0], s[1], s[2], s[3]]
        })
        .collect();
    Sqs::new(code.length(), blocks)
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Self::empty(n);
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_count(&self, other: &Bits) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn and_not(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * 64 + w.trailing_zeros() as usize)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let i = w.trailing_zeros() as usize;
                    w &= w - 1;
                    k * 64 + i
                })
            })
        })
    }
}

/// Graph on the blocks of a design; `block_of[i]` names the origin of
/// block-vertex `i` (a graph vertex, or a block index).
#[derive(Clone, Debug)]
pub struct BlockGraph {
    pub graph: MdGraph,
    pub block_of: Vec<usize>,
    rows: Vec<Bits>,
}

impl BlockGraph {
    fn from_edges(block_of: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = block_of.len();
        let mut rows = vec![Bits::empty(n); n];
        for &(a, b) in &edges {
            rows[a].insert(b);
            rows[b].insert(a);
        }
        Ok(BlockGraph {
            graph: MdGraph::from_edges(n, edges)?,
            block_of,
            rows,
        })
    }

    /// Block graph of a design given explicitly.
    pub fn from_sqs(sqs: &Sqs) -> Result<Self> {
        let b = &sqs.blocks;
        let mut edges = Vec::new();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                if b[i].iter().any(|p| b[j].contains(p)) {
                    edges.push((i, j));
                }
            }
        }
        Self::from_edges((0..b.len()).collect(), edges)
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &a)| set[k + 1..].iter().all(|&b| self.rows[a].contains(b)))
    }
}

/// Block graph of the neighbourhood SQS of `x`: vertices are the neighbours
/// of `x` in ascending order, adjacent iff their recovered distance is 4
/// or 6 (blocks sharing two points or one point); distance 8 means
/// disjoint blocks.
pub fn neighborhood_block_graph(g: &MdGraph, d: &DistanceMatrix, x: usize) -> Result<BlockGraph> {
    let nbrs = g.neighbors(x).to_vec();
    let mut edges = Vec::new();
    for (i, &a) in nbrs.iter().enumerate() {
        for (j, &b) in nbrs.iter().enumerate().skip(i + 1) {
            match d.get(a, b) {
                Some(4 | 6) => edges.push((i, j)),
                Some(8) => {}
                Some(other) => {
                    return Err(Error::graph(format!(
                        "neighbours {a} and {b} of {x} at distance {other}"
                    )))
                }
                None => {
                    return Err(Error::graph(format!(
                        "distance between neighbours {a} and {b} of {x} unresolved"
                    )))
                }
            }
        }
    }
    BlockGraph::from_edges(nbrs, edges)
}

struct CliqueSearch<'a> {
    rows: &'a [Bits],
    target: usize,
    found: Vec<Vec<usize>>,
}

impl CliqueSearch<'_> {
    /// Colours used by a greedy colouring of `p`, an upper bound on the
    /// largest clique inside it. Stops early once `enough` is reached.
    fn color_bound(&self, p: &Bits, enough: usize) -> usize {
        let mut left = p.clone();
        let mut colors = 0;
        while !left.is_empty() && colors < enough {
            colors += 1;
            let mut q = left.clone();
            while let Some(v) = q.first() {
                left.remove(v);
                q.remove(v);
                q = q.and_not(&self.rows[v]);
            }
        }
        colors
    }

    /// Bron–Kerbosch with Tomita pivoting, cutting branches that cannot
    /// reach `target` vertices.
    fn expand(&mut self, r: &mut Vec<usize>, mut p: Bits, mut x: Bits) {
        let mut room = p.count();
        if r.len() + room < self.target {
            return;
        }
        if room == 0 {
            if x.is_empty() {
                self.found.push(r.clone());
            }
            return;
        }
        let need = self.target.saturating_sub(r.len());
        if self.color_bound(&p, need) < need {
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| (p.and_count(&self.rows[u]), std::cmp::Reverse(u)))
            .expect("candidate set is nonempty");
        let branch: Vec<usize> = p.and_not(&self.rows[pivot]).iter().collect();
        for v in branch {
            r.push(v);
            self.expand(r, p.and(&self.rows[v]), x.and(&self.rows[v]));
            r.pop();
            p.remove(v);
            x.insert(v);
            room -= 1;
            if r.len() + room < self.target {
                break;
            }
        }
    }
}

/// Maximal cliques of at least `min_size` vertices, each sorted, in
/// lexicographic order.
pub fn maximal_cliques_at_least(b: &BlockGraph, min_size: usize) -> Vec<Vec<usize>> {
    let n = b.len();
    let mut search = CliqueSearch {
        rows: &b.rows,
        target: min_size.max(1),
        found: Vec::new(),
    };
    search.expand(&mut Vec::new(), Bits::full(n), Bits::empty(n));
    let mut found = search.found;
    for c in &mut found {
        c.sort_unstable();
    }
    found.sort();
    found
}

/// The `v` point cliques of the block graph of an SQS(v), `v >= 16`.
///
/// Fails unless there are exactly `v` maximal cliques of size at least
/// `(v-1)(v-2)/6`, each of exactly that size, covering every block-vertex
/// exactly four times.
pub fn enumerate_point_cliques(b: &BlockGraph, v: usize) -> Result<Vec<Vec<usize>>> {
    if v < MIN_POINTS {
        return Err(Error::Unsupported(format!(
            "point cliques are recognizable only for v >= {MIN_POINTS}, got v = {v}"
        )));
    }
    let size = point_clique_size(v);
    let cliques = maximal_cliques_at_least(b, size);
    let bad = |msg: String| Error::graph(format!("not a valid SQS({v}) block graph: {msg}"));
    if cliques.len() != v {
        return Err(bad(format!("{} maximal cliques of size >= {size}", cliques.len())));
    }
    if let Some(c) = cliques.iter().find(|c| c.len() != size) {
        return Err(bad(format!("clique of size {} (expected {size})", c.len())));
    }
    let mut cover = vec![0usize; b.len()];
    for c in &cliques {
        for &i in c {
            cover[i] += 1;
        }
    }
    if let Some(i) = cover.iter().position(|&k| k != 4) {
        return Err(bad(format!("block-vertex {i} lies in {} point cliques", cover[i])));
    }
    Ok(cliques)
}

/// For each block-vertex, the indices (into `cliques`) of the four point
/// cliques containing it, ascending.
pub fn clique_membership(n: usize, cliques: &[Vec<usize>]) -> Vec<[usize; 4]> {
    let mut fill = vec![0usize; n];
    let mut out = vec![[0usize; 4]; n];
    for (k, c) in cliques.iter().enumerate() {
        for &i in c {
            out[i][fill[i]] = k;
            fill[i] += 1;
        }
    }
    out
}

/// Design read back from point cliques: clique `k` becomes point `k + 1`.
pub fn sqs_from_point_cliques(b: &BlockGraph, v: usize, cliques: &[Vec<usize>]) -> Result<Sqs> {
    let blocks = clique_membership(b.len(), cliques)
        .into_iter()
        .map(|m| [m[0] + 1, m[1] + 1, m[2] + 1, m[3] + 1])
        .collect();
    Sqs::new(v, blocks)
}

/// Evidence gathered by [`check_clique_bound`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueBoundReport {
    pub v: usize,
    /// `(v-1)(v-2)/6`.
    pub point_clique_size: usize,
    /// `max(2v-3, 3v/2+5, 31)`, the largest possible clique with no common point.
    pub envelope: usize,
    /// Blocks through a pair of points, `(v-2)/2`.
    pub pair_blocks: usize,
    pub sampled: usize,
    /// Sampled maximal cliques whose blocks share a point.
    pub point_type: usize,
    /// Largest sampled maximal clique without a common point.
    pub largest_pointless: usize,
    pub violations: Vec<String>,
}

impl CliqueBoundReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples random maximal cliques of the block graph of `sqs` and checks
/// that those without a common point stay below the point-clique size.
/// Every point clique itself is also sampled and must be maximal.
pub fn check_clique_bound(sqs: &Sqs, samples: usize, seed: u64) -> Result<CliqueBoundReport> {
    let v = sqs.v;
    if v < MIN_POINTS || v % 6 != 2 && v % 6 != 4 {
        return Err(Error::Unsupported(format!("clique bound needs an SQS(v) with v >= 16, got {v}")));
    }
    let b = BlockGraph::from_sqs(sqs)?;
    let size = point_clique_size(v);
    let envelope = (2 * v - 3).max(3 * v / 2 + 5).max(31);
    let mut report = CliqueBoundReport {
        v,
        point_clique_size: size,
        envelope,
        pair_blocks: (v - 2) / 2,
        sampled: 0,
        point_type: 0,
        largest_pointless: 0,
        violations: Vec::new(),
    };
    if envelope >= size {
        report.violations.push(format!("envelope {envelope} >= {size}"));
    }
    for x in 1..=v {
        for y in x + 1..=v {
            let k = sqs.blocks.iter().filter(|bl| bl.contains(&x) && bl.contains(&y)).count();
            if k != report.pair_blocks {
                report.violations.push(format!("pair {{{x}, {y}}} in {k} blocks"));
            }
        }
    }

    let common_point = |c: &[usize]| (1..=v).find(|p| c.iter().all(|&i| sqs.blocks[i].contains(p)));
    let classify = |c: Vec<usize>, report: &mut CliqueBoundReport| {
        report.sampled += 1;
        if !b.is_clique(&c) {
            report.violations.push(format!("sample {c:?} is not a clique"));
            return;
        }
        match common_point(&c) {
            Some(p) => {
                report.point_type += 1;
                if c.len() != size {
                    report.violations.push(format!("point clique of {p} has size {}", c.len()));
                }
            }
            None => {
                report.largest_pointless = report.largest_pointless.max(c.len());
                if c.len() >= size || c.len() > envelope {
                    report.violations.push(format!("pointless clique of size {}", c.len()));
                }
            }
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..b.len()).collect();
    for _ in 0..samples {
        order.shuffle(&mut rng);
        let mut clique: Vec<usize> = Vec::new();
        for &i in &order {
            if clique.iter().all(|&j| b.rows[i].contains(j)) {
                clique.push(i);
            }
        }
        clique.sort_unstable();
        classify(clique, &mut report);
    }
    for p in 1..=v {
        let clique: Vec<usize> = (0..b.len()).filter(|&i| sqs.blocks[i].contains(&p)).collect();
        let maximal = (0..b.len())
            .filter(|i| !clique.contains(i))
            .all(|i| clique.iter().any(|&j| !b.rows[i].contains(j)));
        if !maximal {
            report.violations.push(format!("point clique of {p} is not maximal"));
        }
        classify(clique, &mut report);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::recover_all_distances;
    use crate::generators::{gen_extended, Family};
    use crate::graph::build_mdg;

    #[test]
    fn bits_ops() {
        let mut a = Bits::empty(130);
        a.insert(0);
        a.insert(129);
        a.insert(64);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(a.count(), 3);
        a.remove(64);
        assert!(!a.contains(64));
        assert_eq!(Bits::full(130).count(), 130);
    }

    #[test]
    fn small_designs() {
        // SQS(8): the affine planes of AG(3, 2).
        let code = gen_extended(Family::Hamming { m: 3 }).unwrap();
        let sqs = neighborhood_sqs(&code, 0).unwrap();
        assert_eq!(sqs.blocks.len(), 14);
        sqs.validate().unwrap();
        let b = BlockGraph::from_sqs(&sqs).unwrap();
        assert!(matches!(enumerate_point_cliques(&b, 8), Err(Error::Unsupported(_))));
        let mut broken = sqs.clone();
        broken.blocks.pop();
        assert!(broken.validate().is_err());
        assert!(Sqs::new(8, vec![[1, 1, 2, 3]]).is_err());
    }

    #[test]
    fn point_cliques_of_sqs16() {
        let code = gen_extended(Family::Hamming { m: 4 }).unwrap();
        let sqs = neighborhood_sqs(&code, 0).unwrap();
        sqs.validate().unwrap();
        let b = BlockGraph::from_sqs(&sqs).unwrap();
        let cliques = enumerate_point_cliques(&b, 16).unwrap();
        // Oracle: group the known blocks by contained point.
        let mut by_point: Vec<Vec<usize>> = (1..=16)
            .map(|p| (0..sqs.blocks.len()).filter(|&i| sqs.blocks[i].contains(&p)).collect())
            .collect();
        by_point.sort();
        assert_eq!(cliques, by_point);
        let rebuilt = sqs_from_point_cliques(&b, 16, &cliques).unwrap();
        rebuilt.validate().unwrap();
    }

    #[test]
    fn block_graph_from_distances() {
        let code = gen_extended(Family::Hamming { m: 4 }).unwrap();
        let g = build_mdg(&code).unwrap();
        let d = recover_all_distances(&g).unwrap();
        let b = neighborhood_block_graph(&g, &d, 17).unwrap();
        assert_eq!(b.len(), 140);
        let sqs = neighborhood_sqs(&code, 17).unwrap();
        let direct = BlockGraph::from_sqs(&sqs).unwrap();
        assert_eq!(b.graph.edge_count(), direct.graph.edge_count());
        assert_eq!(b.graph.regular_degree(), Some(100));
    }

    #[test]
    fn clique_bound_report() {
        let code = gen_extended(Family::Hamming { m: 4 }).unwrap();
        let sqs = neighborhood_sqs(&code, 0).unwrap();
        let r = check_clique_bound(&sqs, 200, 1).unwrap();
        assert!(r.ok(), "{:?}", r.violations);
        assert_eq!(r.point_clique_size, 35);
        assert_eq!(r.envelope, 31);
        assert_eq!(r.pair_blocks, 7);
        assert!(r.point_type >= 16);
    }

    #[test]
    fn wrong_census_is_rejected() {
        // A complete graph on 140 vertices has one maximal clique.
        let edges = (0..140).flat_map(|a| (a + 1..140).map(move |b| (a, b))).collect();
        let b = BlockGraph::from_edges((0..140).collect(), edges).unwrap();
        assert!(matches!(enumerate_point_cliques(&b, 16), Err(Error::InvalidGraph(_))));
    }
}
