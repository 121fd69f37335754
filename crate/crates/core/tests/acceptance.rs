//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Built with `harness = false` so the lines are always
//! shown.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use mdg_reconstruct::automorphism::roundtrip_report;
use mdg_reconstruct::distance::{
    recognize_distance4_pairs, recover_all_distances, recover_distances_traced, CountEvent, DistanceMatrix,
};
use mdg_reconstruct::equivalence::{find_equivalence, EquivOptions, Status};
use mdg_reconstruct::generators::{gen_extended, gen_family, gen_hamming, Family};
use mdg_reconstruct::graph::shuffle;
use mdg_reconstruct::reconstruct::{
    assign_weight4, parity_candidates, reconstruct_extended, reconstruct_perfect, weight6_counts, Labeling,
};
use mdg_reconstruct::steiner::{maximal_cliques_at_least, neighborhood_block_graph, sqs_from_point_cliques};
use mdg_reconstruct::word::apply_codemap;
use mdg_reconstruct::{build_mdg, Code, Error, MdGraph};

const SHUFFLE_SEEDS: [u64; 3] = [101, 202, 303];
const VASILEV_SEEDS: [u64; 2] = [1, 2];
const RUN_LIMIT: Duration = Duration::from_secs(300);

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn hamming15() -> Code {
    gen_family(Family::Hamming { m: 4 }).unwrap()
}

fn vasilev15(seed: u64) -> Code {
    gen_family(Family::Vasilev { m: 4, seed: Some(seed) }).unwrap()
}

/// Checks that `rebuilt` is equivalent to `source` with a witness that
/// really maps one onto the other.
fn verified_equivalence(source: &Code, rebuilt: &Code) -> Result<u64, String> {
    let r = find_equivalence(source, rebuilt, &EquivOptions::default()).map_err(err)?;
    ensure(r.status == Status::Equivalent, || format!("equivalence status {:?}", r.status))?;
    let w = r.witness.ok_or("no witness")?;
    let image = apply_codemap(&w, source).map_err(err)?;
    ensure(image == *rebuilt, || "witness does not map the source onto the reconstruction".into())?;
    Ok(r.certificate.nodes)
}

#[derive(Default)]
struct Kept {
    /// (source, reconstruction) pairs from the perfect runs.
    perfect: Vec<(String, Code, Code)>,
    distances_ok: bool,
    automorphisms_ok: bool,
}

fn criterion1() -> Outcome {
    let source = gen_extended(Family::Hamming { m: 4 }).unwrap();
    let g = build_mdg(&source).map_err(err)?;
    ensure(g.vcount() == 2048 && g.regular_degree() == Some(140), || {
        format!("graph has {} vertices, degree {:?}", g.vcount(), g.regular_degree())
    })?;
    let mut times = Vec::new();
    for seed in SHUFFLE_SEEDS {
        let start = Instant::now();
        let (h, _) = shuffle(&g, seed);
        let r = reconstruct_extended(&h, 0).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(build_mdg(&r.code).map_err(err)? == h, || format!("seed {seed}: induced MDG differs"))?;
        ensure(r.code.word(0).is_zero(), || format!("seed {seed}: base not zero"))?;
        verified_equivalence(&source, &r.code).map_err(|e| format!("seed {seed}: {e}"))?;
        let t = start.elapsed();
        ensure(t <= RUN_LIMIT, || format!("seed {seed}: run took {t:.1?}"))?;
        times.push(format!("{:.1}s", t.as_secs_f64()));
    }
    Ok(format!("3 shuffles of extended Hamming(16) reconstructed, runs {}", times.join(", ")))
}

fn perfect_runs(name: &str, source: &Code, kept: &mut Kept) -> Result<Vec<String>, String> {
    let g = build_mdg(source).map_err(err)?;
    ensure(g.vcount() == 2048 && g.regular_degree() == Some(35), || {
        format!("{name}: {} vertices, degree {:?}", g.vcount(), g.regular_degree())
    })?;
    let mut times = Vec::new();
    for seed in SHUFFLE_SEEDS {
        let start = Instant::now();
        let (h, _) = shuffle(&g, seed);
        let ctx = |e: String| format!("{name} seed {seed}: {e}");
        let r = reconstruct_perfect(&h, 0).map_err(|e| ctx(e.to_string()))?;
        let ext = r.extension.as_ref().ok_or_else(|| ctx("no extension".into()))?;
        let er = r.extended.as_ref().ok_or_else(|| ctx("no extended reconstruction".into()))?;
        let cand = parity_candidates(&er.labeling, &ext.old_edges, &ext.new_edges).map_err(|e| ctx(e.to_string()))?;
        ensure(cand.weight() == 1, || ctx(format!("parity candidates {:?}", cand.support())))?;
        ensure(r.parity_coordinate == Some(cand.support()[0]), || ctx("parity mismatch".into()))?;
        ensure(r.code.length() == 15 && r.code.len() == 2048, || ctx("wrong size".into()))?;
        ensure(build_mdg(&r.code).map_err(err)? == h, || ctx("induced MDG differs".into()))?;
        verified_equivalence(source, &r.code).map_err(ctx)?;
        let t = start.elapsed();
        ensure(t <= RUN_LIMIT, || ctx(format!("run took {t:.1?}")))?;
        times.push(format!("{:.1}s", t.as_secs_f64()));
        if seed == SHUFFLE_SEEDS[0] {
            kept.perfect.push((name.to_owned(), source.clone(), r.code.clone()));
        }
    }
    Ok(times)
}

fn criterion2(kept: &mut Kept) -> Outcome {
    let v1 = vasilev15(VASILEV_SEEDS[0]);
    let v2 = vasilev15(VASILEV_SEEDS[1]);
    ensure(v1 != v2, || "the two Vasil'ev seeds give the same code".into())?;
    let mut parts = Vec::new();
    for (name, code) in [
        ("Hamming(15)".to_string(), hamming15()),
        (format!("Vasil'ev(15) seed {}", VASILEV_SEEDS[0]), v1),
        (format!("Vasil'ev(15) seed {}", VASILEV_SEEDS[1]), v2),
    ] {
        let times = perfect_runs(&name, &code, kept)?;
        parts.push(format!("{name} [{}]", times.join(", ")));
    }
    Ok(format!("9 runs, singleton parity coordinate in each: {}", parts.join("; ")))
}

fn brute_force_equal(code: &Code, d: &DistanceMatrix) -> Result<usize, String> {
    let n = code.len();
    let bad = (0..n)
        .into_par_iter()
        .map(|u| {
            (u + 1..n)
                .filter(|&v| d.get(u, v) != Some(code.word(u).distance(&code.word(v))))
                .count()
        })
        .sum::<usize>();
    ensure(bad == 0, || format!("{bad} pairs differ from brute force"))?;
    Ok(n * (n - 1) / 2)
}

fn level4_census(code: &Code, g: &MdGraph) -> Result<(usize, usize), String> {
    let per_source: Vec<Result<(usize, usize), String>> = (0..g.vcount())
        .into_par_iter()
        .map(|x| {
            let mut events: Vec<CountEvent> = Vec::new();
            recover_distances_traced(g, x, &mut |e| events.push(e)).map_err(err)?;
            let (mut exact, mut low) = (0, 0);
            for e in events.iter().filter(|e| e.level == 4) {
                let truth = code.word(x).distance(&code.word(e.vertex));
                match (e.count, truth) {
                    (20, 6) => exact += 1,
                    (c, 8) if c <= 14 => low += 1,
                    (c, t) => return Err(format!("source {x}, vertex {}: count {c} at distance {t}", e.vertex)),
                }
                ensure(e.resolved == (truth == 6), || format!("source {x}: wrong resolution"))?;
            }
            Ok((exact, low))
        })
        .collect();
    let mut total = (0, 0);
    for r in per_source {
        let (a, b) = r?;
        total.0 += a;
        total.1 += b;
    }
    Ok(total)
}

fn criterion3(kept: &mut Kept) -> Outcome {
    let mut parts = Vec::new();
    for (name, code) in [
        ("extended Hamming(16)", gen_extended(Family::Hamming { m: 4 }).unwrap()),
        ("extended Vasil'ev(16)", gen_extended(Family::Vasilev { m: 4, seed: Some(VASILEV_SEEDS[0]) }).unwrap()),
    ] {
        let g = build_mdg(&code).map_err(err)?;
        let d = recover_all_distances(&g).map_err(err)?;
        let pairs = brute_force_equal(&code, &d).map_err(|e| format!("{name}: {e}"))?;
        let (exact, low) = level4_census(&code, &g).map_err(|e| format!("{name}: {e}"))?;
        parts.push(format!("{name}: {pairs}/{pairs} pairs, level-4 counts {exact}x20 and {low}x<=14"));
    }
    kept.distances_ok = true;
    Ok(parts.join("; "))
}

fn criterion4() -> Outcome {
    let mut parts = Vec::new();
    for (name, code) in [("Hamming(15)", hamming15()), ("Vasil'ev(15)", vasilev15(VASILEV_SEEDS[0]))] {
        let g = build_mdg(&code).map_err(err)?;
        let n = g.vcount();
        let census: Vec<Result<[usize; 3], String>> = (0..n)
            .into_par_iter()
            .map(|u| {
                let mut c = [0usize; 3];
                for v in u + 1..n {
                    if g.has_edge(u, v) {
                        continue;
                    }
                    let k = g.common_neighbors(u, v);
                    let d = code.word(u).distance(&code.word(v));
                    match (d, k) {
                        (4, 6) => c[0] += 1,
                        (6, 0..=4) => c[1] += 1,
                        (d, 0) if d != 4 && d != 6 => c[2] += 1,
                        _ => return Err(format!("{name}: pair ({u}, {v}) at distance {d} shares {k}")),
                    }
                }
                Ok(c)
            })
            .collect();
        let mut total = [0usize; 3];
        for c in census {
            let c = c?;
            for k in 0..3 {
                total[k] += c[k];
            }
        }
        let found = recognize_distance4_pairs(&g).map_err(err)?;
        ensure(found.len() == total[0], || format!("{name}: recognized {} distance-4 pairs", found.len()))?;
        ensure(
            found.iter().all(|&(u, v)| code.word(u).distance(&code.word(v)) == 4),
            || format!("{name}: recognized a pair not at distance 4"),
        )?;
        parts.push(format!(
            "{name}: {} pairs with 6, {} with <=4 at distance 6, {} with 0",
            total[0], total[1], total[2]
        ));
    }
    Ok(parts.join("; "))
}

fn criterion5() -> Outcome {
    let code = gen_extended(Family::Hamming { m: 4 }).unwrap();
    let g = build_mdg(&code).map_err(err)?;
    let d = recover_all_distances(&g).map_err(err)?;
    let failures: Vec<String> = (0..g.vcount())
        .into_par_iter()
        .filter_map(|x| {
            let check = || -> Result<(), String> {
                let b = neighborhood_block_graph(&g, &d, x).map_err(err)?;
                let cliques = maximal_cliques_at_least(&b, 35);
                ensure(cliques.len() == 16, || format!("{} cliques", cliques.len()))?;
                ensure(cliques.iter().all(|c| c.len() == 35), || "clique size not 35".into())?;
                let mut cover = vec![0; b.len()];
                cliques.iter().flatten().for_each(|&i| cover[i] += 1);
                ensure(cover.iter().all(|&k| k == 4), || "block not in exactly 4 cliques".into())?;
                let sqs = sqs_from_point_cliques(&b, 16, &cliques).map_err(err)?;
                sqs.validate().map_err(err)
            };
            check().err().map(|e| format!("vertex {x}: {e}"))
        })
        .collect();
    ensure(failures.is_empty(), || failures[0].clone())?;
    Ok(format!("{} vertices: 16 cliques of size 35, cover 4, valid SQS(16)", g.vcount()))
}

fn criterion6() -> Outcome {
    let code = gen_extended(Family::Hamming { m: 4 }).unwrap();
    let g = build_mdg(&code).map_err(err)?;
    let d = recover_all_distances(&g).map_err(err)?;
    let mut l = Labeling::new(g.vcount(), 0, 16).map_err(err)?;
    assign_weight4(&g, &d, &mut l).map_err(err)?;
    let mut pipeline = 0;
    for x in (0..g.vcount()).filter(|&x| d.get(0, x) == Some(6)) {
        let counts = weight6_counts(&g, &d, &l, x).map_err(err)?;
        let tens = counts.iter().filter(|&&c| c == 10).count();
        ensure(tens == 6 && counts.iter().all(|&c| c == 10 || c <= 4), || {
            format!("vertex {x}: counts {counts:?}")
        })?;
        pipeline += 1;
    }
    // Oracle in the code's own coordinates.
    let mut oracle = 0;
    for x in code.words().iter().filter(|w| w.weight() == 6) {
        for i in 1..=16 {
            let c = code
                .words()
                .iter()
                .filter(|y| y.weight() == 4 && x.distance(y) == 4 && y.get(i))
                .count();
            let ok = if x.get(i) { c == 10 } else { c <= 4 };
            ensure(ok, || format!("word {x}, coordinate {i}: count {c}"))?;
        }
        oracle += 1;
    }
    ensure(pipeline == 448 && oracle == 448, || format!("{pipeline} / {oracle} weight-6 words"))?;
    Ok("448 weight-6 words x 16 coordinates: 10 inside the support, <=4 outside (pipeline and brute force)".into())
}

fn criterion7(kept: &Kept) -> Outcome {
    let h = hamming15();
    let v = vasilev15(VASILEV_SEEDS[0]);
    let r = find_equivalence(&h, &v, &EquivOptions::default()).map_err(err)?;
    ensure(r.status == Status::Inequivalent, || format!("status {:?}", r.status))?;
    let (rh, rv) = r.certificate.ranks;
    ensure(rh == 11 && rv >= 12, || format!("ranks {rh} and {rv}"))?;
    ensure(kept.perfect.len() == 3, || "perfect reconstructions from criterion 2 missing".into())?;
    for (name, source, rebuilt) in &kept.perfect {
        verified_equivalence(source, rebuilt).map_err(|e| format!("{name}: {e}"))?;
        let cross = find_equivalence(if source == &h { &v } else { &h }, rebuilt, &EquivOptions::default())
            .map_err(err)?;
        ensure(cross.status == Status::Inequivalent, || format!("{name}: reconstruction matches the other family"))?;
    }
    Ok(format!("Hamming(15) vs Vasil'ev(15): inequivalent, ranks {rh} vs {rv}; each reconstruction equivalent to its source only"))
}

fn criterion8(kept: &mut Kept) -> Outcome {
    let mut parts = Vec::new();
    for (name, code) in [
        ("extended Hamming(16)", gen_extended(Family::Hamming { m: 4 }).unwrap()),
        ("Hamming(15)", hamming15()),
        ("Vasil'ev(15)", vasilev15(VASILEV_SEEDS[0])),
        ("extended Vasil'ev(16)", gen_extended(Family::Vasilev { m: 4, seed: Some(VASILEV_SEEDS[0]) }).unwrap()),
    ] {
        let g = build_mdg(&code).map_err(err)?;
        let r = roundtrip_report(&code, &g, 100, 8).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.ok(), || format!("{name}: {:?}", r.failures.first()))?;
        ensure(r.samples >= 100 && r.pairs >= 100, || format!("{name}: only {} samples", r.samples))?;
        parts.push(format!(
            "{name}: {}/{} round trips, {}/{} products, {}/{} distinct pairs separated",
            r.code_roundtrips, r.samples, r.graph_homomorphism, r.pairs, r.injective, r.distinct_pairs
        ));
    }
    kept.automorphisms_ok = true;
    Ok(parts.join("; "))
}

fn criterion9(kept: &Kept) -> Outcome {
    ensure(kept.distances_ok, || "distance exactness evidence (criterion 3) failed".into())?;
    ensure(kept.automorphisms_ok, || "automorphism evidence (criterion 8) failed".into())?;
    ensure(matches!(gen_hamming(5), Err(Error::Unsupported(_))), || "length 31 Hamming not refused".into())?;
    ensure(
        matches!(gen_family(Family::Vasilev { m: 5, seed: Some(1) }), Err(Error::Unsupported(_))),
        || "length 31 Vasil'ev not refused".into(),
    )?;
    Ok("substituted: large-length claim and full group isomorphism evidenced by criteria 3 and 8; lengths >= 31 refused".into())
}

fn main() {
    let start = Instant::now();
    let mut kept = Kept::default();
    let mut failed = 0;
    let mut report = |n: usize, what: &str, f: &mut dyn FnMut(&mut Kept) -> Outcome, kept: &mut Kept| {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| f(kept)))
            .unwrap_or_else(|p| Err(format!("panic: {:?}", p.downcast_ref::<String>())));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {n} ({what}, {secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n} ({what}, {secs:.1}s): {why}");
            }
        }
    };
    report(1, "extended reconstruction", &mut |_| criterion1(), &mut kept);
    report(2, "perfect reconstruction", &mut criterion2, &mut kept);
    report(3, "distance recovery", &mut criterion3, &mut kept);
    report(4, "common-neighbour census", &mut |_| criterion4(), &mut kept);
    report(5, "point-clique census", &mut |_| criterion5(), &mut kept);
    report(6, "weight-6 rule", &mut |_| criterion6(), &mut kept);
    report(7, "inequivalence", &mut |k| criterion7(k), &mut kept);
    report(8, "automorphism transfer", &mut criterion8, &mut kept);
    report(9, "desk-scale substitutes", &mut |k| criterion9(k), &mut kept);
    println!("acceptance: {} of 9 criteria passed in {:.1}s", 9 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
