//! Reconstruction of codes from their minimum distance graphs.
//!
//! Extended 1-perfect codes (length `n >= 16`):
//!
//! 1. recover all pairwise distances ([`recover_all_distances`]);
//! 2. label the base vertex `0` and its neighbours by the point cliques of
//!    its neighbourhood block graph (this fixes the coordinate system);
//! 3. label the weight-6 vertices by counting, per coordinate, the
//!    weight-4 neighbours having that coordinate set (10 inside the
//!    support, at most 4 outside);
//! 4. for `w = 6, 8, ...`, for each vertex `x` of weight `w`, identify the
//!    coordinate of every point clique of `x`'s block graph as the unique
//!    coordinate shared by all its already labelled members, then label
//!    all neighbours of `x`.
//!
//! 1-perfect codes are handled by adding the recognized distance-4 edges,
//! reconstructing the extension, locating the parity coordinate and
//! puncturing there.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::distance::{extend_graph, extended_length, perfect_length, recover_all_distances, DistanceMatrix, GraphExtension};
use crate::error::{Error, Result};
use crate::generators::{gen_extended, gen_hamming, Family};
use crate::graph::{build_mdg, MdGraph};
use crate::steiner::{clique_membership, enumerate_point_cliques, neighborhood_block_graph};
use crate::word::{puncture, validate_extended_perfect, validate_perfect, Code, Word};

/// Partial assignment of words to graph vertices.
#[derive(Clone, Debug)]
pub struct Labeling {
    assignment: Vec<Option<Word>>,
    owner: HashMap<u64, usize>,
    base: usize,
    coord_count: usize,
}

impl Labeling {
    /// Labeling with only `base -> 0`.
    pub fn new(vcount: usize, base: usize, coord_count: usize) -> Result<Self> {
        if base >= vcount {
            return Err(Error::InvalidParameter(format!(
                "base vertex {base} out of range for {vcount} vertices"
            )));
        }
        let mut l = Labeling {
            assignment: vec![None; vcount],
            owner: HashMap::new(),
            base,
            coord_count,
        };
        l.assign(base, Word::zero(coord_count)?)?;
        Ok(l)
    }

    /// Labeling from a complete vertex → word table.
    pub fn from_words(words: &[Word], base: usize) -> Result<Self> {
        let n = words.first().map(Word::len).ok_or(Error::TooFewWords(0))?;
        let mut l = Labeling {
            assignment: vec![None; words.len()],
            owner: HashMap::new(),
            base,
            coord_count: n,
        };
        for (v, &w) in words.iter().enumerate() {
            l.assign(v, w)?;
        }
        Ok(l)
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn coord_count(&self) -> usize {
        self.coord_count
    }

    pub fn vcount(&self) -> usize {
        self.assignment.len()
    }

    pub fn get(&self, v: usize) -> Option<Word> {
        self.assignment[v]
    }

    /// Vertex carrying `w`, if any.
    pub fn vertex_of(&self, w: &Word) -> Option<usize> {
        self.owner.get(&w.bits()).copied()
    }

    pub fn assigned(&self) -> usize {
        self.owner.len()
    }

    pub fn is_total(&self) -> bool {
        self.assigned() == self.vcount()
    }

    /// Assigns `w` to `v`. Re-assigning the same word is a no-op; a
    /// different word, or a word owned by another vertex, is an error.
    pub fn assign(&mut self, v: usize, w: Word) -> Result<()> {
        if w.len() != self.coord_count {
            return Err(Error::LengthMismatch(self.coord_count, w.len()));
        }
        match self.assignment[v] {
            Some(old) if old == w => return Ok(()),
            Some(old) => {
                return Err(Error::graph(format!(
                    "vertex {v} derived as {w} but already labelled {old}"
                )))
            }
            None => {}
        }
        if let Some(&u) = self.owner.get(&w.bits()) {
            return Err(Error::graph(format!("word {w} derived for both {u} and {v}")));
        }
        self.owner.insert(w.bits(), v);
        self.assignment[v] = Some(w);
        Ok(())
    }

    /// All words in vertex order; fails if any vertex is unlabelled.
    pub fn words(&self) -> Result<Vec<Word>> {
        self.assignment
            .iter()
            .enumerate()
            .map(|(v, w)| w.ok_or_else(|| Error::graph(format!("vertex {v} left unlabelled"))))
            .collect()
    }

    fn expect(&self, v: usize) -> Result<Word> {
        self.assignment[v].ok_or_else(|| Error::graph(format!("vertex {v} expected to be labelled")))
    }
}

fn base_distance(d: &DistanceMatrix, l: &Labeling, v: usize) -> usize {
    d.at(l.base, v)
}

/// Labels the neighbours of the base vertex with weight-4 words whose
/// supports are the point cliques containing them. Clique `k` in
/// lexicographic order becomes coordinate `k + 1`.
pub fn assign_weight4(g: &MdGraph, d: &DistanceMatrix, l: &mut Labeling) -> Result<()> {
    if l.assigned() != 1 {
        return Err(Error::InvalidParameter("labeling must hold only the base vertex".into()));
    }
    let n = l.coord_count;
    let b = neighborhood_block_graph(g, d, l.base)?;
    let cliques = enumerate_point_cliques(&b, n)?;
    for (i, m) in clique_membership(b.len(), &cliques).into_iter().enumerate() {
        let w = Word::from_support(n, m.iter().map(|k| k + 1))?;
        l.assign(b.block_of[i], w)?;
    }
    Ok(())
}

/// Per-coordinate count of weight-4 labelled neighbours of `x` having that
/// coordinate set; index `i` holds coordinate `i + 1`.
pub fn weight6_counts(g: &MdGraph, d: &DistanceMatrix, l: &Labeling, x: usize) -> Result<Vec<usize>> {
    let mut counts = vec![0usize; l.coord_count];
    for &y in g.neighbors(x) {
        if base_distance(d, l, y) == 4 {
            for c in l.expect(y)?.support() {
                counts[c - 1] += 1;
            }
        }
    }
    Ok(counts)
}

/// Labels every vertex at distance 6 from the base.
///
/// A coordinate inside the support is covered by `C(5,2) = 10` weight-4
/// neighbours; one outside by at most 4 (the largest constant-weight code
/// of length 6, weight 3 and distance 4).
pub fn assign_weight6(g: &MdGraph, d: &DistanceMatrix, l: &mut Labeling) -> Result<()> {
    let n = l.coord_count;
    let class: Vec<usize> = (0..g.vcount()).filter(|&v| base_distance(d, l, v) == 6).collect();
    for x in class {
        let counts = weight6_counts(g, d, l, x)?;
        if let Some(i) = counts.iter().position(|&c| c > 4 && c != 10) {
            return Err(Error::graph(format!(
                "weight-6 vertex {x}: coordinate {} covered by {} weight-4 neighbours",
                i + 1,
                counts[i]
            )));
        }
        let support: Vec<usize> = (1..=n).filter(|&c| counts[c - 1] == 10).collect();
        if support.len() != 6 {
            return Err(Error::graph(format!(
                "weight-6 vertex {x}: {} coordinates with 10 weight-4 neighbours",
                support.len()
            )));
        }
        l.assign(x, Word::from_support(n, support)?)?;
    }
    Ok(())
}

/// Labels for every neighbour of the labelled vertex `x`, derived from
/// `x`'s block graph and the current labels. Does not modify `l`.
pub fn propose_neighbor_labels(
    g: &MdGraph,
    d: &DistanceMatrix,
    l: &Labeling,
    x: usize,
) -> Result<Vec<(usize, Word)>> {
    let n = l.coord_count;
    let lx = l.expect(x)?;
    let b = neighborhood_block_graph(g, d, x)?;
    let cliques = enumerate_point_cliques(&b, n)?;
    let full = Word::zero(n)?.complement().bits();

    let mut coords = Vec::with_capacity(cliques.len());
    let mut used = 0u64;
    for (k, clique) in cliques.iter().enumerate() {
        let mut common = full;
        let mut witnesses = 0;
        for &i in clique {
            if let Some(ly) = l.get(b.block_of[i]) {
                common &= lx.xor(&ly).bits();
                witnesses += 1;
            }
        }
        if witnesses == 0 || common.count_ones() != 1 {
            return Err(Error::graph(format!(
                "vertex {x}: point clique {k} has {witnesses} labelled members sharing coordinates {:?}",
                Word::from_bits_unchecked(n, common).support()
            )));
        }
        if used & common != 0 {
            return Err(Error::graph(format!(
                "vertex {x}: coordinate {} identified by two point cliques",
                common.trailing_zeros() + 1
            )));
        }
        used |= common;
        coords.push(common);
    }

    Ok(clique_membership(b.len(), &cliques)
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let diff = m.iter().fold(0u64, |acc, &k| acc | coords[k]);
            (b.block_of[i], lx.xor(&Word::from_bits_unchecked(n, diff)))
        })
        .collect())
}

/// Labels every neighbour of `x`; labels already present must agree.
pub fn extend_labeling_step(g: &MdGraph, d: &DistanceMatrix, l: &mut Labeling, x: usize) -> Result<()> {
    for (v, w) in propose_neighbor_labels(g, d, l, x)? {
        l.assign(v, w)?;
    }
    Ok(())
}

/// A reconstructed code with its vertex correspondence: vertex `v` of the
/// input graph carries `code.word(v)`.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub code: Code,
    pub labeling: Labeling,
    /// Recovered distances; `None` on the small-length path.
    pub distances: Option<DistanceMatrix>,
}

/// Reconstructs an extended 1-perfect code from its MDG, with `base`
/// labelled as the zero word.
pub fn reconstruct_extended(g: &MdGraph, base: usize) -> Result<Reconstruction> {
    let n = extended_length(g).ok_or_else(|| {
        Error::graph(format!(
            "{} vertices with degrees {:?} do not match any extended 1-perfect code",
            g.vcount(),
            g.regular_degree()
        ))
    })?;
    if base >= g.vcount() {
        return Err(Error::InvalidParameter(format!("base vertex {base} out of range")));
    }
    if n <= 8 {
        let canonical = match n {
            4 => Code::from_words(4, [Word::zero(4)?, Word::zero(4)?.complement()])?,
            8 => gen_extended(Family::Hamming { m: 3 })?,
            _ => unreachable!("extended lengths below 16 are 4 and 8"),
        };
        return reconstruct_small(g, base, &canonical);
    }

    let d = recover_all_distances(g)?;
    let mut l = Labeling::new(g.vcount(), base, n)?;
    assign_weight4(g, &d, &mut l)?;
    assign_weight6(g, &d, &mut l)?;

    // A weight-8 word whose support carries a sub-system of blocks has no
    // weight-6 neighbour, so class 4 is processed too. Any word of weight
    // u >= 4 has a neighbour of weight u - 2 or u - 4, hence all words of
    // weight <= w are labelled when class w starts. Proposals read a snapshot
    // taken at the start of the class.
    for w in (4..=n).step_by(2) {
        let class: Vec<usize> = (0..g.vcount()).filter(|&v| d.at(base, v) == w).collect();
        let proposals: Vec<Vec<(usize, Word)>> = class
            .par_iter()
            .map(|&x| propose_neighbor_labels(g, &d, &l, x))
            .collect::<Result<_>>()?;
        for (v, word) in proposals.into_iter().flatten() {
            l.assign(v, word)?;
        }
    }
    if !l.is_total() {
        return Err(Error::graph(format!(
            "{} of {} vertices labelled after all weight classes",
            l.assigned(),
            l.vcount()
        )));
    }
    for v in 0..g.vcount() {
        let w = l.expect(v)?.weight();
        if w != d.at(base, v) {
            return Err(Error::graph(format!(
                "vertex {v} labelled with weight {w}, recovered distance {}",
                d.at(base, v)
            )));
        }
    }

    let code = Code::from_words(n, l.words()?)?;
    let check = validate_extended_perfect(&code);
    if !check.ok {
        return Err(Error::graph(format!(
            "reconstructed code is not extended perfect: {}",
            check.reason.unwrap_or_default()
        )));
    }
    verify_vertex_consistency(g, &code)?;
    Ok(Reconstruction {
        code,
        labeling: l,
        distances: Some(d),
    })
}

/// Fails unless the MDG of `code` (vertex `i` = word `i`) is exactly `g`.
pub fn verify_vertex_consistency(g: &MdGraph, code: &Code) -> Result<()> {
    if build_mdg(code)? != *g {
        return Err(Error::graph("MDG of the reconstructed code differs from the input graph"));
    }
    Ok(())
}

/// Lengths where the code is unique: label by an isomorphism to the MDG of
/// the stored code, then translate so that `base` carries zero.
fn reconstruct_small(g: &MdGraph, base: usize, canonical: &Code) -> Result<Reconstruction> {
    let h = build_mdg(canonical)?;
    let iso = small_isomorphism(g, &h)
        .ok_or_else(|| Error::graph("graph is not the MDG of the unique code of its length"))?;
    let shift = canonical.word(iso[base]);
    let words: Vec<Word> = iso.iter().map(|&j| canonical.word(j).xor(&shift)).collect();
    let code = Code::from_words(canonical.length(), words.iter().copied())?;
    verify_vertex_consistency(g, &code)?;
    Ok(Reconstruction {
        labeling: Labeling::from_words(&words, base)?,
        code,
        distances: None,
    })
}

/// Backtracking isomorphism search for graphs of a few dozen vertices;
/// `iso[v]` is the image of `v`.
fn small_isomorphism(a: &MdGraph, b: &MdGraph) -> Option<Vec<usize>> {
    fn extend(a: &MdGraph, b: &MdGraph, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let v = map.len();
        if v == a.vcount() {
            return true;
        }
        for t in 0..b.vcount() {
            if used[t] || a.degree(v) != b.degree(t) {
                continue;
            }
            if (0..v).all(|u| a.has_edge(u, v) == b.has_edge(map[u], t)) {
                used[t] = true;
                map.push(t);
                if extend(a, b, map, used) {
                    return true;
                }
                map.pop();
                used[t] = false;
            }
        }
        false
    }
    if a.vcount() != b.vcount() || a.edge_count() != b.edge_count() || a.vcount() > 64 {
        return None;
    }
    let mut map = Vec::with_capacity(a.vcount());
    let mut used = vec![false; b.vcount()];
    extend(a, b, &mut map, &mut used).then_some(map)
}

/// Coordinates lying in the difference of every old edge and of no new
/// edge, as a word.
pub fn parity_candidates(
    l: &Labeling,
    old_edges: &[(usize, usize)],
    new_edges: &[(usize, usize)],
) -> Result<Word> {
    let n = l.coord_count;
    let mut cand = Word::zero(n)?.complement().bits();
    for &(u, v) in old_edges {
        cand &= l.expect(u)?.xor(&l.expect(v)?).bits();
    }
    for &(u, v) in new_edges {
        cand &= !l.expect(u)?.xor(&l.expect(v)?).bits();
    }
    Ok(Word::from_bits_unchecked(n, cand))
}

/// The parity coordinate of a reconstructed extension: original
/// (distance-3) edges differ there, added (distance-4) edges do not.
pub fn detect_parity_coordinate(
    ext_code: &Code,
    l: &Labeling,
    old_edges: &[(usize, usize)],
    new_edges: &[(usize, usize)],
) -> Result<usize> {
    if l.coord_count != ext_code.length() {
        return Err(Error::LengthMismatch(l.coord_count, ext_code.length()));
    }
    let cand = parity_candidates(l, old_edges, new_edges)?;
    match cand.support()[..] {
        [p] => Ok(p),
        ref other => Err(Error::graph(format!("parity coordinate candidates {other:?}"))),
    }
}

/// A reconstructed 1-perfect code: vertex `v` of the input carries
/// `code.word(v)`.
#[derive(Clone, Debug)]
pub struct PerfectReconstruction {
    pub code: Code,
    /// Reconstruction of the parity extension (absent for lengths <= 7).
    pub extended: Option<Reconstruction>,
    pub extension: Option<GraphExtension>,
    pub parity_coordinate: Option<usize>,
}

/// Reconstructs a 1-perfect code from its MDG, with `base` labelled zero.
pub fn reconstruct_perfect(g: &MdGraph, base: usize) -> Result<PerfectReconstruction> {
    let n = perfect_length(g).ok_or_else(|| {
        Error::graph(format!(
            "{} vertices with degrees {:?} do not match any 1-perfect code",
            g.vcount(),
            g.regular_degree()
        ))
    })?;
    if base >= g.vcount() {
        return Err(Error::InvalidParameter(format!("base vertex {base} out of range")));
    }
    if n <= 7 {
        let canonical = match n {
            3 => Code::from_words(3, [Word::zero(3)?, Word::zero(3)?.complement()])?,
            7 => gen_hamming(3)?,
            _ => unreachable!("perfect lengths below 15 are 3 and 7"),
        };
        let r = reconstruct_small(g, base, &canonical)?;
        return Ok(PerfectReconstruction {
            code: r.code,
            extended: None,
            extension: None,
            parity_coordinate: None,
        });
    }

    let ext = extend_graph(g)?;
    let r = reconstruct_extended(&ext.graph, base)?;
    let p = detect_parity_coordinate(&r.code, &r.labeling, &ext.old_edges, &ext.new_edges)?;
    let code = puncture(&r.code, p)?;
    let check = validate_perfect(&code);
    if !check.ok {
        return Err(Error::graph(format!(
            "punctured code is not perfect: {}",
            check.reason.unwrap_or_default()
        )));
    }
    verify_vertex_consistency(g, &code)?;
    Ok(PerfectReconstruction {
        code,
        extended: Some(r),
        extension: Some(ext),
        parity_coordinate: Some(p),
    })
}
