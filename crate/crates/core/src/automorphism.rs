//! Moving automorphisms between a code and its minimum distance graph.
//!
//! A code automorphism permutes the codewords and therefore the vertices.
//! Conversely a graph automorphism `α` induces the codeword map
//! `M(w) = L(α(L⁻¹(w)))`; its coordinate permutation is read off by
//! matching bit columns of `{M(w) + M(w0)}` against those of `{w + w0}`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distance::{extend_graph, GraphExtension};
use crate::equivalence::{find_equivalence, EquivOptions, Status};
use crate::error::{Error, Result};
use crate::graph::{build_mdg, MdGraph};
use crate::reconstruct::Labeling;
use crate::word::{apply_codemap, extend_parity, Code, CodeMap, Word};

/// A vertex permutation preserving the edges of the graph it was checked
/// against; `perm[v]` is the image of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphAut {
    perm: Vec<usize>,
}

impl GraphAut {
    pub fn new(perm: Vec<usize>, g: &MdGraph) -> Result<Self> {
        if perm.len() != g.vcount() {
            return Err(Error::LengthMismatch(perm.len(), g.vcount()));
        }
        if !g.preserves_edges(&perm) {
            return Err(Error::NotAutomorphism("vertex permutation does not preserve edges".into()));
        }
        Ok(GraphAut { perm })
    }

    pub fn identity(g: &MdGraph) -> Self {
        GraphAut {
            perm: (0..g.vcount()).collect(),
        }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn image(&self, v: usize) -> usize {
        self.perm[v]
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// "Apply `self`, then `next`".
    pub fn then(&self, next: &GraphAut) -> GraphAut {
        GraphAut {
            perm: self.perm.iter().map(|&v| next.perm[v]).collect(),
        }
    }

    pub fn inverse(&self) -> GraphAut {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        GraphAut { perm: inv }
    }
}

/// Whether `m` maps `code` onto itself.
pub fn is_automorphism(m: &CodeMap, code: &Code) -> bool {
    m.length() == code.length() && code.words().iter().all(|w| code.contains(&m.apply(w)))
}

/// Vertex `i` (word `i` of `code`) goes to the vertex of `m(word_i)`.
pub fn code_aut_to_graph_aut(m: &CodeMap, code: &Code, g: &MdGraph) -> Result<GraphAut> {
    if g.vcount() != code.len() {
        return Err(Error::LengthMismatch(g.vcount(), code.len()));
    }
    if m.length() != code.length() {
        return Err(Error::LengthMismatch(m.length(), code.length()));
    }
    let perm = code
        .words()
        .iter()
        .map(|w| {
            code.position(&m.apply(w))
                .ok_or_else(|| Error::NotAutomorphism(format!("{w} is mapped outside the code")))
        })
        .collect::<Result<Vec<_>>>()?;
    GraphAut::new(perm, g)
}

/// The code automorphism inducing `alpha`, where vertex `v` carries `l(v)`.
pub fn graph_aut_to_code_aut(alpha: &GraphAut, code: &Code, g: &MdGraph, l: &Labeling) -> Result<CodeMap> {
    let n = code.length();
    if alpha.perm.len() != g.vcount() || l.vcount() != g.vcount() || code.len() != g.vcount() {
        return Err(Error::LengthMismatch(alpha.perm.len(), g.vcount()));
    }
    if l.coord_count() != n {
        return Err(Error::LengthMismatch(l.coord_count(), n));
    }
    let labels = l.words()?;
    let not_aut = |why: String| Error::NotAutomorphism(format!("graph automorphism has no code counterpart: {why}"));

    let w0 = labels[l.base()];
    let m0 = labels[alpha.perm[l.base()]];
    let stride = labels.len().div_ceil(64);
    let columns = |diff: &dyn Fn(usize) -> u64| -> Vec<Vec<u64>> {
        let mut cols = vec![vec![0u64; stride]; n];
        for v in 0..labels.len() {
            let d = diff(v);
            for (i, col) in cols.iter_mut().enumerate() {
                if d >> i & 1 == 1 {
                    col[v / 64] |= 1 << (v % 64);
                }
            }
        }
        cols
    };
    let source = columns(&|v| labels[v].xor(&w0).bits());
    let image = columns(&|v| labels[alpha.perm[v]].xor(&m0).bits());

    let mut index: HashMap<&[u64], usize> = HashMap::with_capacity(n);
    for (i, c) in source.iter().enumerate() {
        if index.insert(c, i).is_some() {
            return Err(not_aut(format!("coordinate {} has a duplicate column", i + 1)));
        }
    }
    let mut perm = vec![0usize; n];
    let mut hit = vec![false; n];
    for (j, c) in image.iter().enumerate() {
        let i = *index
            .get(c.as_slice())
            .ok_or_else(|| not_aut(format!("column {} matches no source column", j + 1)))?;
        if std::mem::replace(&mut hit[i], true) {
            return Err(not_aut(format!("coordinate {} matched twice", i + 1)));
        }
        perm[i] = j + 1;
    }
    let pi = CodeMap::permutation(perm)?;
    let z = m0.xor(&pi.apply(&w0));
    let m = CodeMap::new(pi.perm().to_vec(), z)?;
    for v in 0..labels.len() {
        if m.apply(&labels[v]) != labels[alpha.perm[v]] {
            return Err(not_aut(format!("vertex {v} is not mapped as the code map predicts")));
        }
    }
    Ok(m)
}

/// Precomputed data for moving graph automorphisms of a 1-perfect code's
/// MDG to code automorphisms through the parity extension.
#[derive(Clone, Debug)]
pub struct PerfectAutContext {
    pub code: Code,
    pub extended: Code,
    pub extension: GraphExtension,
    labeling: Labeling,
}

impl PerfectAutContext {
    /// `g` must be the MDG of `code` with vertex `i` carrying word `i`.
    pub fn new(code: &Code, g: &MdGraph) -> Result<Self> {
        if build_mdg(code)? != *g {
            return Err(Error::graph("graph is not the MDG of the code"));
        }
        let extended = extend_parity(code)?;
        let extension = extend_graph(g)?;
        if build_mdg(&extended)? != extension.graph {
            return Err(Error::graph("extended graph is not the MDG of the extended code"));
        }
        let labeling = Labeling::from_words(extended.words(), 0)?;
        Ok(PerfectAutContext {
            code: code.clone(),
            extended,
            extension,
            labeling,
        })
    }

    /// Lifts `alpha` to the extended graph, transfers it there and drops the
    /// parity coordinate, which must be fixed.
    pub fn transfer(&self, alpha: &GraphAut) -> Result<CodeMap> {
        let lifted = GraphAut::new(alpha.perm.clone(), &self.extension.graph)?;
        let m = graph_aut_to_code_aut(&lifted, &self.extended, &self.extension.graph, &self.labeling)?;
        let p = self.extended.length();
        if m.perm()[p - 1] != p {
            return Err(Error::NotAutomorphism(format!(
                "parity coordinate {p} is moved to {}",
                m.perm()[p - 1]
            )));
        }
        let restricted = CodeMap::new(m.perm()[..p - 1].to_vec(), m.trans().delete(p)?)?;
        if !is_automorphism(&restricted, &self.code) {
            return Err(Error::NotAutomorphism("restriction is not an automorphism of the code".into()));
        }
        Ok(restricted)
    }
}

/// One-shot form of [`PerfectAutContext::transfer`].
pub fn perfect_aut_transfer(alpha: &GraphAut, code: &Code, g: &MdGraph) -> Result<CodeMap> {
    PerfectAutContext::new(code, g)?.transfer(alpha)
}

/// Codewords `t` with `t + C = C`.
pub fn kernel(code: &Code) -> Vec<Word> {
    code.words()
        .par_iter()
        .filter(|t| code.words().iter().all(|w| code.contains(&w.xor(t))))
        .copied()
        .collect()
}

/// Number of equivalence-derived generators used by [`sample_automorphisms`].
pub const SAMPLE_GENERATORS: usize = 6;

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=n).collect();
    p.shuffle(rng);
    p
}

/// `count` automorphisms of `code`, deterministic in `seed`.
///
/// Generators come from equivalences between `code` and randomly permuted
/// copies of it. Each sample is a random product of generators followed by
/// a translation by a random kernel word. Codes must contain zero.
pub fn sample_automorphisms(code: &Code, count: usize, seed: u64) -> Result<Vec<CodeMap>> {
    let n = code.length();
    if !code.contains(&Word::zero(n)?) {
        return Err(Error::InvalidParameter("automorphism sampling needs a code containing zero".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigmas: Vec<CodeMap> = (0..SAMPLE_GENERATORS)
        .map(|_| CodeMap::permutation(random_perm(n, &mut rng)))
        .collect::<Result<_>>()?;
    let gens: Vec<CodeMap> = sigmas
        .par_iter()
        .map(|s| {
            let image = apply_codemap(s, code)?;
            let r = find_equivalence(code, &image, &EquivOptions::default())?;
            match (r.status, r.witness) {
                (Status::Equivalent, Some(w)) => Ok(w.then(&s.inverse())),
                (status, _) => Err(Error::Unsupported(format!(
                    "no equivalence to a permuted copy ({status:?})"
                ))),
            }
        })
        .collect::<Result<_>>()?;
    let ker = kernel(code);

    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut m = CodeMap::identity(n)?;
        for _ in 0..rng.gen_range(1..=4) {
            m = m.then(&gens[rng.gen_range(0..gens.len())]);
        }
        m = m.then(&CodeMap::translation(ker[rng.gen_range(0..ker.len())]));
        debug_assert!(is_automorphism(&m, code));
        out.push(m);
    }
    Ok(out)
}

/// Outcome of [`roundtrip_report`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundTripReport {
    pub samples: usize,
    /// code -> graph -> code reproduced the action on every codeword.
    pub code_roundtrips: usize,
    /// graph -> code -> graph reproduced the vertex permutation.
    pub graph_roundtrips: usize,
    pub pairs: usize,
    /// Image of a product equals the product of images, code -> graph.
    pub code_homomorphism: usize,
    /// Same for graph -> code.
    pub graph_homomorphism: usize,
    /// Pairs with different actions that gave different vertex permutations,
    /// out of `distinct_pairs`.
    pub injective: usize,
    pub distinct_pairs: usize,
    pub failures: Vec<String>,
}

impl RoundTripReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
            && self.code_roundtrips == self.samples
            && self.graph_roundtrips == self.samples
            && self.code_homomorphism == self.pairs
            && self.graph_homomorphism == self.pairs
            && self.injective == self.distinct_pairs
    }
}

fn same_action(a: &CodeMap, b: &CodeMap, code: &Code) -> bool {
    code.words().iter().all(|w| a.apply(w) == b.apply(w))
}

/// Round-trips `samples` sampled automorphisms of `code` through its MDG
/// `g` (vertex `i` carries word `i`) and checks composition on as many
/// consecutive pairs. Extended codes use direct column matching; 1-perfect
/// codes go through the parity extension.
pub fn roundtrip_report(code: &Code, g: &MdGraph, samples: usize, seed: u64) -> Result<RoundTripReport> {
    if build_mdg(code)? != *g {
        return Err(Error::graph("graph is not the MDG of the code"));
    }
    let perfect = crate::word::validate_perfect(code).ok;
    let ctx = if perfect { Some(PerfectAutContext::new(code, g)?) } else { None };
    let labeling = Labeling::from_words(code.words(), 0)?;
    let back = |a: &GraphAut| match &ctx {
        Some(c) => c.transfer(a),
        None => graph_aut_to_code_aut(a, code, g, &labeling),
    };

    let maps = sample_automorphisms(code, samples, seed)?;
    let mut r = RoundTripReport {
        samples: maps.len(),
        ..Default::default()
    };
    let mut auts = Vec::with_capacity(maps.len());
    for (k, m) in maps.iter().enumerate() {
        let a = code_aut_to_graph_aut(m, code, g)?;
        match back(&a) {
            Ok(m2) => {
                if same_action(m, &m2, code) {
                    r.code_roundtrips += 1;
                } else {
                    r.failures.push(format!("sample {k}: recovered map acts differently"));
                }
                match code_aut_to_graph_aut(&m2, code, g) {
                    Ok(a2) if a2 == a => r.graph_roundtrips += 1,
                    _ => r.failures.push(format!("sample {k}: graph round trip changed the permutation")),
                }
            }
            Err(e) => r.failures.push(format!("sample {k}: {e}")),
        }
        auts.push(a);
    }

    for k in 0..maps.len() {
        let j = (k + 1) % maps.len();
        let (m1, m2) = (&maps[k], &maps[j]);
        let (a1, a2) = (&auts[k], &auts[j]);
        r.pairs += 1;
        if code_aut_to_graph_aut(&m1.then(m2), code, g)? == a1.then(a2) {
            r.code_homomorphism += 1;
        } else {
            r.failures.push(format!("pair ({k}, {j}): code -> graph is not multiplicative"));
        }
        let composed = a1.then(a2);
        match (back(&composed), back(a1), back(a2)) {
            (Ok(c), Ok(b1), Ok(b2)) if same_action(&c, &b1.then(&b2), code) => r.graph_homomorphism += 1,
            _ => r.failures.push(format!("pair ({k}, {j}): graph -> code is not multiplicative")),
        }
        if !same_action(m1, m2, code) {
            r.distinct_pairs += 1;
            if a1 != a2 {
                r.injective += 1;
            } else {
                r.failures.push(format!("pair ({k}, {j}): distinct maps induce one permutation"));
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_extended, gen_hamming, Family};

    #[test]
    fn identity_transfers_to_identity() {
        let code = gen_extended(Family::Hamming { m: 3 }).unwrap();
        let g = build_mdg(&code).unwrap();
        let id = CodeMap::identity(8).unwrap();
        let a = code_aut_to_graph_aut(&id, &code, &g).unwrap();
        assert!(a.is_identity());
        let l = Labeling::from_words(code.words(), 0).unwrap();
        assert!(graph_aut_to_code_aut(&a, &code, &g, &l).unwrap().is_identity());
    }

    #[test]
    fn translation_is_fixed_point_free() {
        let code = gen_extended(Family::Hamming { m: 4 }).unwrap();
        let g = build_mdg(&code).unwrap();
        let t = code.word(5);
        let a = code_aut_to_graph_aut(&CodeMap::translation(t), &code, &g).unwrap();
        assert!((0..g.vcount()).all(|v| a.image(v) != v));
        assert_eq!(g.edge_count(), 140 * 1024);
    }

    #[test]
    fn non_automorphism_rejected() {
        let code = gen_hamming(3).unwrap();
        let g = build_mdg(&code).unwrap();
        let w = Word::parse("1000000").unwrap();
        assert!(matches!(
            code_aut_to_graph_aut(&CodeMap::translation(w), &code, &g),
            Err(Error::NotAutomorphism(_))
        ));
        let mut swap: Vec<usize> = (0..g.vcount()).collect();
        let nb = g.neighbors(0)[0];
        let far = (0..g.vcount()).find(|&v| v != 0 && !g.has_edge(0, v)).unwrap();
        swap.swap(nb, far);
        assert!(GraphAut::new(swap, &g).is_err());
    }

    #[test]
    fn column_matching_inverts_sampled_maps() {
        let code = gen_extended(Family::Hamming { m: 3 }).unwrap();
        let g = build_mdg(&code).unwrap();
        let l = Labeling::from_words(code.words(), 3).unwrap();
        for m in sample_automorphisms(&code, 20, 1).unwrap() {
            assert!(is_automorphism(&m, &code));
            let a = code_aut_to_graph_aut(&m, &code, &g).unwrap();
            let back = graph_aut_to_code_aut(&a, &code, &g, &l).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn hamming_7_report() {
        let code = gen_hamming(3).unwrap();
        let g = build_mdg(&code).unwrap();
        let r = roundtrip_report(&code, &g, 10, 4).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.samples, 10);
    }

    #[test]
    fn kernel_of_linear_code_is_everything() {
        let code = gen_hamming(3).unwrap();
        assert_eq!(kernel(&code).len(), 16);
    }
}
