//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use prelab::enumerate::{
    evaluate, fixture_family, fixture_monoid, select_plug, subjects, CatalogConfig, Evaluation, Limits, Mode,
    COMPLETE_LATTICE,
};
use prelab::grammar::{oracle_recognize, oracle_reduces, recognize, reduce, validate_trace, Lexicon, SimpleType};
use prelab::monoid::{check_frobenius, cone, order_from_cone, pregroup_adjoints, AdjointFailure, DEFAULT_PLUG};
use prelab::order::{bit, enumerate_preorders, members};
use prelab::spider::{check_consistency, is_spider, pregroup_cover, round_trip, union_monoid, Consistency};
use prelab::{PrelMonoid, Preorder, Prelation};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if took > budget {
        o.passed = false;
        o.detail = format!("{}; took {took:.2?}, over the {budget:?} budget", o.detail);
    } else {
        o.detail = format!("{}; {took:.2?}", o.detail);
    }
    o
}

/// Every general monoid on preorders of size at most 2 and every
/// representable monoid on preorders of size 3.
fn standard_subjects() -> Vec<PrelMonoid> {
    let mut out: Vec<PrelMonoid> = subjects(&CatalogConfig::new(2, Mode::General))
        .expect("size 2 general is within limits")
        .records
        .into_iter()
        .map(|r| r.monoid)
        .collect();
    let rep3 = CatalogConfig { min_size: 3, ..CatalogConfig::new(3, Mode::Representable) };
    out.extend(subjects(&rep3).expect("size 3 representable is within limits").records.into_iter().map(|r| r.monoid));
    out
}

fn reflexive_transitive_filter(n: usize) -> usize {
    let off: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    (0u64..1 << off.len())
        .filter(|code| {
            let rel = |i: usize, j: usize| i == j || off.iter().position(|&p| p == (i, j)).is_some_and(|k| code >> k & 1 == 1);
            (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(rel(i, j) && rel(j, k)) || rel(i, k))))
        })
        .count()
}

fn criterion_1() -> Outcome {
    timed(Duration::from_secs(5), || {
        let counts: Vec<usize> = (1..=4).map(|n| enumerate_preorders(n).unwrap().len()).collect();
        let oracle: Vec<usize> = (1..=4).map(reflexive_transitive_filter).collect();
        outcome(counts == [1, 4, 29, 355] && counts == oracle, format!("counts {counts:?}, filter {oracle:?}"))
    })
}

fn random_preorder(rng: &mut ChaCha8Rng) -> Preorder {
    let n = rng.gen_range(1..=4);
    let gens: Vec<(usize, usize)> = (0..rng.gen_range(0..=2 * n)).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    Preorder::close(n, &gens).unwrap()
}

fn criterion_2() -> Outcome {
    timed(Duration::from_secs(30), || {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let trials = 10_000;
        let mut failures = 0;
        for _ in 0..trials {
            let (a, b) = (random_preorder(&mut rng), random_preorder(&mut rng));
            let gens: Vec<(usize, usize)> =
                (0..rng.gen_range(0..=4)).map(|_| (rng.gen_range(0..a.size()), rng.gen_range(0..b.size()))).collect();
            let phi = Prelation::close(a, b, &gens).unwrap();
            let d = phi.ddag();
            let dd = d.ddag();
            if !phi.is_subset(&dd) || d != dd.ddag() || phi.op_dual().op_dual() != phi {
                failures += 1;
            }
        }
        outcome(failures == 0, format!("{trials} random prelations, {failures} failure(s)"))
    })
}

fn evaluate_all(subjects: &[PrelMonoid]) -> Vec<Evaluation> {
    subjects.par_iter().enumerate().map(|(i, m)| evaluate(i, m, DEFAULT_PLUG)).collect()
}

fn criterion_3(evs: &[Evaluation]) -> Outcome {
    let bad: Vec<usize> = evs
        .iter()
        .filter(|e| e.properties.pregroup != (e.properties.pointed && e.properties.frobenius && e.properties.special))
        .map(|e| e.subject)
        .collect();
    let clauses = evs.iter().filter(|e| !e.theorems[0].passed).count();
    let pregroups = evs.iter().filter(|e| e.properties.pregroup).count();
    outcome(
        bad.is_empty() && clauses == 0,
        format!("{} subjects, {pregroups} pregroups, {} counterexample(s)", evs.len(), bad.len() + clauses),
    )
}

fn criterion_4(subjects: &[PrelMonoid], evs: &[Evaluation]) -> Outcome {
    let bad = evs
        .iter()
        .filter(|e| {
            let p = &e.properties;
            p.frobenius != p.left_residuated || p.frobenius != p.right_residuated || !e.theorems[1].passed
        })
        .count();
    let small: Vec<PrelMonoid> = subjects.iter().filter(|m| m.size() <= 2).cloned().collect();
    let sel = select_plug(&small);
    let votes: Vec<String> = sel.candidates.iter().map(|c| format!("{}={}", c.plug, c.violations)).collect();
    outcome(
        bad == 0 && sel.selected.as_deref() == Some(DEFAULT_PLUG.name()),
        format!(
            "{bad} counterexample(s) under {}; selection on {} size<=2 subjects: {} -> {:?}",
            DEFAULT_PLUG.name(),
            small.len(),
            votes.join(", "),
            sel.selected
        ),
    )
}

fn component_is_pregroup(c: &prelab::spider::Component) -> bool {
    let Ok(g) = pregroup_adjoints(c.monoid()) else { return false };
    let Ok(h) = cone(&g) else { return false };
    order_from_cone(&g, h).is_ok_and(|p| p.rows() == c.monoid().carrier().rows())
}

fn criterion_5(subjects: &[PrelMonoid]) -> Outcome {
    let spiders: Vec<&PrelMonoid> = subjects.iter().filter(|m| is_spider(m)).collect();
    let failures = spiders
        .par_iter()
        .filter(|m| match pregroup_cover(m) {
            Ok(c) => {
                !c.components.iter().all(component_is_pregroup)
                    || !check_consistency(m.carrier(), &c.components, Consistency::Restricted)
                    || !round_trip(&c).unwrap_or(false)
            }
            Err(_) => true,
        })
        .count();
    let mut families = Vec::new();
    for name in ["G21", "two-Z2-disjoint"] {
        let (ambient, family) = fixture_family(name).unwrap();
        let ok = union_monoid(&ambient, &family, Consistency::Restricted).is_ok_and(|u| is_spider(&u));
        families.push(format!("{name} {}", if ok { "spider" } else { "NOT spider" }));
    }
    let fam_ok = families.iter().all(|f| f.ends_with(" spider") && !f.contains("NOT"));
    outcome(
        failures == 0 && fam_ok,
        format!("{} spiders, {failures} round-trip failure(s); families: {}", spiders.len(), families.join(", ")),
    )
}

fn criterion_6() -> Outcome {
    let limits = Limits::overridden(3);
    let mut spiders = 0;
    let mut commutative = 0;
    let mut problems = Vec::new();
    for n in 1..=3 {
        let p = Preorder::discrete(n);
        for m in prelab::enumerate::enumerate_monoids_with(&p, Mode::General, &limits).unwrap() {
            if !is_spider(&m) {
                continue;
            }
            spiders += 1;
            let cover = match pregroup_cover(&m) {
                Ok(c) => c,
                Err(e) => {
                    problems.push(format!("no cover: {e}"));
                    continue;
                }
            };
            let mut seen = 0;
            for c in &cover.components {
                let s = c.carrier.iter().fold(0, |s, &a| s | bit(a));
                if s & seen != 0 {
                    problems.push("overlapping carriers".into());
                }
                seen |= s;
                let g = &c.pregroup;
                let k = g.size();
                let group = (0..k).all(|x| g.ell[x] == g.arr[x] && g.m(x, g.ell[x]) == g.unit_elem && g.m(g.ell[x], x) == g.unit_elem);
                if !group {
                    problems.push(format!("component at {} is not a group", c.base));
                }
            }
            let n = m.size();
            if (0..n).all(|x| (0..n).all(|y| m.fiber(x, y) == m.fiber(y, x))) {
                commutative += 1;
                let abelian = cover.components.iter().all(|c| {
                    let k = c.pregroup.size();
                    (0..k).all(|x| (0..k).all(|y| c.pregroup.m(x, y) == c.pregroup.m(y, x)))
                });
                if !abelian {
                    problems.push("commutative spider with a non-abelian component".into());
                }
            }
            let classes = members(m.unit()).count();
            if cover.components.len() != classes {
                problems.push(format!("{} components for {classes} unit classes", cover.components.len()));
            }
        }
    }
    outcome(
        problems.is_empty(),
        format!("{spiders} spiders on discrete carriers of size <= 3 ({commutative} commutative); problems: {problems:?}"),
    )
}

fn toy() -> Lexicon {
    let mut l = Lexicon::new(vec!["n".into(), "s".into()], vec![], 1).unwrap();
    l.add_entry_text("John", "n").unwrap();
    l.add_entry_text("Mary", "n").unwrap();
    l.add_entry_text("likes", "n^r s n^l").unwrap();
    l
}

fn criterion_7() -> Outcome {
    timed(Duration::from_secs(60), || {
        let lex = toy();
        let golden = [
            "John likes Mary",
            "Mary likes John",
            "likes John",
            "John Mary",
            "John likes",
            "likes Mary",
            "John",
            "John likes Mary Mary",
        ];
        let mut disagreements = Vec::new();
        let mut table = Vec::new();
        for s in golden {
            let words: Vec<&str> = s.split_whitespace().collect();
            let fast = recognize(&lex, &words).unwrap();
            if let Some(t) = &fast {
                if validate_trace(&lex, t).is_err() {
                    disagreements.push(format!("invalid trace for {s:?}"));
                }
            }
            let slow = oracle_recognize(&lex, &words).unwrap();
            if fast.is_some() != slow {
                disagreements.push(s.to_string());
            }
            table.push(slow);
        }
        let expected_named = table[0] && !table[2] && !table[3] && !table[4];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let trials = 2_000;
        let mut random_bad = 0;
        for _ in 0..trials {
            let basics = rng.gen_range(1..=3);
            let leq: Vec<(usize, usize)> =
                (0..rng.gen_range(0..=3)).map(|_| (rng.gen_range(0..basics), rng.gen_range(0..basics))).collect();
            let lex = Lexicon::new((0..basics).map(|i| format!("b{i}")).collect(), leq, rng.gen_range(0..basics)).unwrap();
            let s: Vec<SimpleType> =
                (0..rng.gen_range(1..=6)).map(|_| SimpleType::new(rng.gen_range(0..basics), rng.gen_range(-2..=2))).collect();
            if reduce(&lex, &s).is_some() != oracle_reduces(&lex, &s).unwrap() {
                random_bad += 1;
            }
        }
        outcome(
            disagreements.is_empty() && expected_named && random_bad == 0,
            format!(
                "golden {:?}; {} golden disagreement(s), {random_bad}/{trials} random disagreement(s)",
                golden.iter().zip(&table).map(|(s, a)| format!("{s}={a}")).collect::<Vec<_>>(),
                disagreements.len()
            ),
        )
    })
}

fn criterion_8() -> Outcome {
    let m = fixture_monoid("MIN2").unwrap();
    let e = evaluate(0, &m, DEFAULT_PLUG);
    let no_adjoint = matches!(pregroup_adjoints(&m), Err(AdjointFailure::NoLeftAdjoint { x: 0 }));
    let recorded = e.discrepancies.iter().any(|d| d.kind == COMPLETE_LATTICE);
    let facts = m.is_representable() && m.is_pointed() && !check_frobenius(&m).holds && no_adjoint;
    let catalog = prelab::enumerate::catalog(&CatalogConfig::new(2, Mode::General)).unwrap();
    let in_sweep = catalog.discrepancies.iter().any(|d| d.kind == COMPLETE_LATTICE);
    outcome(
        facts && recorded && e.passed() && in_sweep && catalog.passed,
        format!(
            "representable={} pointed={} frobenius={} no adjoint for 0={no_adjoint}; recorded as discrepancy={recorded}, suite still passes={}",
            m.is_representable(),
            m.is_pointed(),
            check_frobenius(&m).holds,
            e.passed() && catalog.passed
        ),
    )
}

fn run_verify(args: &[&str]) -> Result<(String, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_prelab")).arg("verify").args(args).output().map_err(|e| e.to_string())?;
    let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    v.as_object_mut().ok_or("report is not an object")?.remove("timing");
    Ok((serde_json::to_string_pretty(&v).unwrap(), out.status.code().unwrap_or(-1)))
}

fn criterion_9() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for args in [&["--size", "2", "--mode", "general"][..], &["--min-size", "3", "--size", "3", "--mode", "representable"][..]] {
        let one = run_verify(&[args, &["--jobs", "1"]].concat());
        let eight = run_verify(&[args, &["--jobs", "8"]].concat());
        match (one, eight) {
            (Ok((a, ca)), Ok((b, cb))) => {
                let same = a == b && ca == cb;
                ok &= same && ca == 0;
                details.push(format!("{}: {} bytes, identical={same}, exit {ca}", args.join(" "), a.len()));
            }
            (a, b) => {
                ok = false;
                details.push(format!("{}: run failed {:?} {:?}", args.join(" "), a.err(), b.err()));
            }
        }
    }
    outcome(ok, details.join("; "))
}

/// Charge the shared enumeration and evaluation time to a sweep criterion.
fn with_sweep(sweep: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let budget = Duration::from_secs(300);
    let mut o = timed(budget.saturating_sub(sweep), f);
    o.detail = format!("{}; shared sweep {sweep:.2?}", o.detail);
    o
}

fn main() {
    let start = Instant::now();
    let subjects = standard_subjects();
    let evs = evaluate_all(&subjects);
    let sweep = start.elapsed();
    let results = [
        ("preorder counts", criterion_1()),
        ("duality laws", criterion_2()),
        ("pregroup characterization sweep", with_sweep(sweep, || criterion_3(&evs))),
        ("residuation sweep and plug selection", with_sweep(sweep, || criterion_4(&subjects, &evs))),
        ("pregroup cover round trip", criterion_5(&subjects)),
        ("discrete carriers decompose into groups", criterion_6()),
        ("grammar differential test", criterion_7()),
        ("complete-lattice discrepancy", criterion_8()),
        ("determinism across worker counts", criterion_9()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("criterion {} {}: {} ({})", i + 1, if o.passed { "PASS" } else { "FAIL" }, name, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
