use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use prelab::enumerate::{assemble, evaluate, fixture_monoid, select_plug, subjects, CatalogConfig, Evaluation, Limits, Mode};
use prelab::format::{parse_lexicon, parse_structure, write_monoid};
use prelab::grammar::{recognize, recognize_all, render_trace, Lexicon, ReductionTrace};
use prelab::monoid::{classify_with, pregroup_adjoints, OutputPlug};
use prelab::spider::{pregroup_cover, verify_theorem, Subject};
use prelab::PrelMonoid;

use crate::{ModeArg, Outcome, ParseArgs, Source, Sweep};

type Res<T> = Result<T, String>;

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn plug(name: &str) -> Res<OutputPlug> {
    OutputPlug::parse(name).ok_or_else(|| {
        let names: Vec<&str> = OutputPlug::ALL.iter().map(|p| p.name()).collect();
        format!("unknown plug `{name}` (expected one of {})", names.join(", "))
    })
}

fn load(src: &Source) -> Res<(PrelMonoid, String)> {
    match (&src.file, &src.fixture) {
        (Some(path), _) => {
            let text = read(path)?;
            let file = parse_structure(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            let m = file.single_monoid().map_err(|e| format!("{}: {e}", path.display()))?.clone();
            Ok((m, digest(text.as_bytes())))
        }
        (None, Some(name)) => {
            let m = fixture_monoid(name).map_err(|e| e.to_string())?;
            Ok((m, digest(format!("fixture:{name}").as_bytes())))
        }
        (None, None) => Err("no input given".into()),
    }
}

fn labels(m: &PrelMonoid) -> Vec<String> {
    (0..m.size()).map(|x| m.carrier().label(x)).collect()
}

fn table(m: &PrelMonoid) -> Value {
    let l = labels(m);
    let n = m.size();
    match m.mult_table() {
        Some(t) => json!((0..n).map(|x| (0..n).map(|y| l[t[x * n + y]].clone()).collect::<Vec<_>>()).collect::<Vec<_>>()),
        None => Value::Null,
    }
}

pub fn check(src: &Source) -> Res<Outcome> {
    let (m, input_digest) = load(src)?;
    let plug = plug(&src.plug)?;
    let props = classify_with(&m, plug);
    let subject = Subject::Monoid(m.clone());
    let theorems: Vec<_> = (1..=3).map(|k| verify_theorem(k, &subject, plug).expect("monoid subject")).collect();
    let l = labels(&m);
    let mut text = format!("class {}\n", props.class_key());
    for (k, v) in [
        ("strict", props.strict),
        ("pointed", props.pointed),
        ("representable", props.representable),
        ("frobenius", props.frobenius),
        ("special", props.special),
        ("spider", props.spider),
        ("pregroup", props.pregroup),
        ("left residuated", props.left_residuated),
        ("right residuated", props.right_residuated),
    ] {
        let _ = writeln!(text, "{k:>17}: {v}");
    }
    if let Some(c) = &props.counterexample {
        let _ = writeln!(text, "first failure: {} at {:?}", c.condition, c.instance);
    }
    for t in &theorems {
        let _ = writeln!(text, "theorem {}: {}", t.theorem, if t.passed { "consistent" } else { "VIOLATED" });
    }
    Ok(Outcome {
        report: json!({
            "input_digest": input_digest,
            "elements": l,
            "unit": prelab::order::members(m.unit()).map(|t| l[t].clone()).collect::<Vec<_>>(),
            "mult_table": table(&m),
            "plug": plug.name(),
            "properties": props,
            "theorems": theorems,
        }),
        text,
        code: 0,
    })
}

pub fn adjoints(src: &Source) -> Res<Outcome> {
    let (m, input_digest) = load(src)?;
    let l = labels(&m);
    match pregroup_adjoints(&m) {
        Ok(g) => {
            let mut text = format!("pregroup with unit {}\n", l[g.unit_elem]);
            for x in 0..m.size() {
                let _ = writeln!(text, "{}: ell = {}, r = {}", l[x], l[g.ell[x]], l[g.arr[x]]);
            }
            Ok(Outcome {
                report: json!({
                    "input_digest": input_digest,
                    "pregroup": true,
                    "elements": l,
                    "unit": l[g.unit_elem],
                    "ell": g.ell.iter().map(|&i| l[i].clone()).collect::<Vec<_>>(),
                    "arr": g.arr.iter().map(|&i| l[i].clone()).collect::<Vec<_>>(),
                    "mult_table": table(&m),
                }),
                text,
                code: 0,
            })
        }
        Err(f) => Ok(Outcome {
            report: json!({
                "input_digest": input_digest,
                "pregroup": false,
                "elements": l,
                "failure": f.describe(),
            }),
            text: format!("not a pregroup: {}\n", f.describe()),
            code: 1,
        }),
    }
}

pub fn decompose(src: &Source) -> Res<Outcome> {
    let (m, input_digest) = load(src)?;
    let l = labels(&m);
    match pregroup_cover(&m) {
        Ok(cover) => {
            let mut text = format!("{} component(s)\n", cover.components.len());
            let comps: Vec<Value> = cover
                .components
                .iter()
                .map(|c| {
                    let name = |i: usize| l[i].clone();
                    let tab: Vec<Vec<String>> = c.ambient_table().into_iter().map(|r| r.into_iter().map(name).collect()).collect();
                    let carrier: Vec<String> = c.carrier.iter().map(|&a| name(a)).collect();
                    let _ = writeln!(text, "basepoint {}: {{{}}}", name(c.base), carrier.join(", "));
                    json!({
                        "basepoint": name(c.base),
                        "carrier": carrier,
                        "mult_table": tab,
                        "ell": c.ambient_ell().into_iter().map(name).collect::<Vec<_>>(),
                        "arr": c.ambient_arr().into_iter().map(name).collect::<Vec<_>>(),
                        "structure": write_monoid(Some(&format!("component_{}", name(c.base))), c.monoid()),
                    })
                })
                .collect();
            Ok(Outcome { report: json!({ "input_digest": input_digest, "spider": true, "components": comps }), text, code: 0 })
        }
        Err(e) => Ok(Outcome {
            report: json!({ "input_digest": input_digest, "spider": false, "reason": e.to_string() }),
            text: format!("no pregroup cover: {e}\n"),
            code: 1,
        }),
    }
}

fn mode(s: &Sweep) -> Mode {
    match s.mode {
        ModeArg::General => Mode::General,
        ModeArg::Representable => Mode::Representable,
        ModeArg::Sampled => Mode::Sampled { seed: s.seed, count: s.count },
    }
}

pub fn sweep(s: &Sweep, verify: bool) -> Res<Outcome> {
    if s.jobs == 0 {
        return Err("--jobs must be at least 1".into());
    }
    let plug = plug(&s.plug)?;
    let cfg = CatalogConfig { min_size: s.min_size, max_size: s.size, mode: mode(s), limits: Limits::from_env(), plug };
    let list = subjects(&cfg).map_err(|e| e.to_string())?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(s.jobs).build().map_err(|e| e.to_string())?;
    let evs: Vec<Evaluation> =
        pool.install(|| list.records.par_iter().map(|r| evaluate(r.index, &r.monoid, plug)).collect());
    let report = assemble(&cfg, &list, &evs);
    let mut text = format!(
        "{} subjects ({}), {} violation(s), {} discrepancy record(s), {}\n",
        report.subjects,
        report.scope,
        report.violations.len(),
        report.discrepancies.len(),
        if report.passed { "passed" } else { "FAILED" }
    );
    for v in report.violations.iter().take(20) {
        let _ = writeln!(text, "  subject {} theorem {}: {} ({})", v.subject, v.theorem, v.clause, v.detail);
    }
    let code = if report.passed { 0 } else { 1 };
    let config = json!({
        "mode": cfg.mode.name(),
        "min_size": cfg.min_size,
        "max_size": cfg.max_size,
        "seed": s.seed,
        "count": s.count,
        "plug": plug.name(),
        "limits": cfg.limits,
    });
    let mut body = serde_json::to_value(&report).expect("reports serialize");
    body["input_digest"] = json!(digest(config.to_string().as_bytes()));
    if verify {
        let monoids: Vec<PrelMonoid> = list.records.iter().map(|r| r.monoid.clone()).collect();
        let sel = pool.install(|| select_plug(&monoids));
        let _ = writeln!(text, "plug selection: {:?}", sel.selected);
        body["plug_selection"] = serde_json::to_value(sel).expect("serializes");
    }
    Ok(Outcome { report: body, text, code })
}

fn trace_json(lex: &Lexicon, t: &ReductionTrace, with_render: bool) -> Value {
    let mut v = json!({
        "choice": t.choice,
        "types": lex.show_string(&t.types),
        "links": t.links.iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
        "residual": t.residual + 1,
    });
    if with_render {
        v["rendering"] = json!(render_trace(lex, t).expect("recognizer traces are valid"));
    }
    v
}

pub fn parse(p: &ParseArgs) -> Res<Outcome> {
    let text = read(&p.lexicon)?;
    let lex = parse_lexicon(&text).map_err(|e| format!("{}: {e}", p.lexicon.display()))?;
    let joined = p.sentence.join(" ");
    let words: Vec<&str> = joined.split_whitespace().collect();
    let input_digest = digest(format!("{text}\n{joined}").as_bytes());
    let mut out = String::new();
    let mut report = json!({ "input_digest": input_digest, "sentence": words });
    let accepted = if p.all {
        let all = recognize_all(&lex, &words).map_err(|e| e.to_string())?;
        for t in &all {
            let _ = writeln!(out, "{}", render_trace(&lex, t).expect("valid"));
        }
        report["traces"] = json!(all.iter().map(|t| trace_json(&lex, t, p.trace)).collect::<Vec<_>>());
        !all.is_empty()
    } else {
        match recognize(&lex, &words).map_err(|e| e.to_string())? {
            Some(t) => {
                if p.trace {
                    let _ = writeln!(out, "{}", render_trace(&lex, &t).expect("valid"));
                }
                report["trace"] = trace_json(&lex, &t, p.trace);
                true
            }
            None => false,
        }
    };
    report["accepted"] = json!(accepted);
    let text = format!("{}\n{out}", if accepted { "accepted" } else { "rejected" });
    Ok(Outcome { report, text, code: if accepted { 0 } else { 1 } })
}
