//! Exhaustive and sampled generation of prelational monoids, named fixtures and
//! the classification catalog.
//!
//! The catalog is split into three pure steps so callers can parallelize the
//! middle one: [`subjects`] lists what to check, [`evaluate`] checks one
//! subject, [`assemble`] merges evaluations in subject order.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::monoid::{check_laws, classify_with, pregroup_adjoints, Counterexample, OutputPlug, PrelMonoid, PropertyVector};
use crate::order::{enumerate_preorders, members, Preorder, Set, Side};
use crate::spider::{cover_valid, verify_theorem, Component, Subject, TheoremReport};

pub const SIZE_LIMIT_VAR: &str = "PRELAB_SIZE_LIMIT";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    General,
    Representable,
    Sampled { seed: u64, count: usize },
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::General => "general",
            Mode::Representable => "representable",
            Mode::Sampled { .. } => "sampled",
        }
    }
}

/// Largest carrier each mode accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub general: usize,
    pub representable: usize,
    pub sampled: usize,
    /// Random-walk attempts allowed per requested sample.
    pub attempts_per_sample: usize,
    /// Search nodes one random walk may visit before it restarts.
    pub walk_budget: usize,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits { general: 2, representable: 3, sampled: 3, attempts_per_sample: 64, walk_budget: 4096 }
    }
}

impl Limits {
    /// Every size guard raised to `limit`.
    pub fn overridden(limit: usize) -> Limits {
        let l = limit.min(crate::monoid::MAX_MONOID);
        Limits { general: l, representable: l, sampled: l, ..Limits::default() }
    }

    /// Defaults, unless `PRELAB_SIZE_LIMIT` holds a number.
    pub fn from_env() -> Limits {
        match std::env::var(SIZE_LIMIT_VAR).ok().and_then(|v| v.trim().parse().ok()) {
            Some(l) => Limits::overridden(l),
            None => Limits::default(),
        }
    }

    pub fn check(&self, n: usize, mode: Mode) -> Result<()> {
        let limit = match mode {
            Mode::General => self.general,
            Mode::Representable => self.representable,
            Mode::Sampled { .. } => self.sampled,
        };
        if n > limit {
            return Err(Error::Limit(format!(
                "{} mode refuses carriers above {limit} (got {n}); set {SIZE_LIMIT_VAR} to override",
                mode.name()
            )));
        }
        Ok(())
    }
}

/// Law-passing monoids on `p`, in a deterministic order.
pub fn enumerate_monoids(p: &Preorder, mode: Mode) -> Result<Vec<PrelMonoid>> {
    enumerate_monoids_with(p, mode, &Limits::default())
}

pub fn enumerate_monoids_with(p: &Preorder, mode: Mode, limits: &Limits) -> Result<Vec<PrelMonoid>> {
    limits.check(p.size(), mode)?;
    Ok(match mode {
        Mode::General => general(p),
        Mode::Representable => representable(p),
        Mode::Sampled { seed, count } => sample(p, seed, 0, count, limits).monoids,
    })
}

fn units(p: &Preorder) -> Vec<Set> {
    p.completion_with_limit(Side::Lower, crate::monoid::MAX_MONOID)
        .expect("monoid carriers are small")
        .into_iter()
        .map(|c| c.members)
        .filter(|&s| s != 0)
        .collect()
}

fn general(p: &Preorder) -> Vec<PrelMonoid> {
    let mut out = Vec::new();
    for unit in units(p) {
        let mut s = Search::new(p, unit);
        s.exhaust(&mut |cells| {
            if let Ok(m) = PrelMonoid::from_parts(p.clone(), cells.to_vec(), unit) {
                out.push(m);
            }
        });
    }
    out
}

fn representable(p: &Preorder) -> Vec<PrelMonoid> {
    let n = p.size();
    let cells = n * n;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut table = vec![0usize; cells];
    loop {
        for u in 0..n {
            if let Ok(m) = PrelMonoid::representable(p.clone(), &table, u) {
                if seen.insert((m.fibers().to_vec(), m.unit())) {
                    out.push(m);
                }
            }
        }
        // Odometer over all n^(n²) tables, last cell fastest.
        let mut i = cells;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            table[i] += 1;
            if table[i] < n {
                break;
            }
            table[i] = 0;
        }
    }
}

/// Outcome of a seeded sampling run.
#[derive(Clone, Debug)]
pub struct Sample {
    pub monoids: Vec<PrelMonoid>,
    pub attempts: usize,
    /// False when the attempt budget ran out before `count` samples.
    pub complete: bool,
}

/// `count` law-passing monoids from randomized walks of the cell search.
///
/// `stream` separates independent runs under one seed.
pub fn sample(p: &Preorder, seed: u64, stream: u64, count: usize, limits: &Limits) -> Sample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let us = units(p);
    let max_attempts = limits.attempts_per_sample.saturating_mul(count.max(1));
    let mut monoids = Vec::with_capacity(count);
    let mut attempts = 0;
    while monoids.len() < count && attempts < max_attempts {
        attempts += 1;
        let unit = *us.choose(&mut rng).expect("a nonempty carrier has a nonempty lower set");
        let mut s = Search::new(p, unit);
        if let Some(cells) = s.walk(&mut rng, limits.walk_budget) {
            if let Ok(m) = PrelMonoid::from_parts(p.clone(), cells, unit) {
                monoids.push(m);
            }
        }
    }
    Sample { complete: monoids.len() == count, monoids, attempts }
}

/// Cell-by-cell assignment of `∇` fibers for a fixed unit, row-major, with
/// closure, unit and associativity pruning on the assigned prefix.
struct Search<'a> {
    p: &'a Preorder,
    n: usize,
    unit: Set,
    lowers: Vec<Set>,
    cells: Vec<Set>,
}

impl<'a> Search<'a> {
    fn new(p: &'a Preorder, unit: Set) -> Search<'a> {
        let lowers = p
            .completion_with_limit(Side::Lower, crate::monoid::MAX_MONOID)
            .expect("monoid carriers are small")
            .into_iter()
            .map(|c| c.members)
            .collect();
        let n = p.size();
        Search { p, n, unit, lowers, cells: vec![0; n * n] }
    }

    fn candidates(&self, k: usize) -> Vec<Set> {
        let (n, p) = (self.n, self.p);
        let (x, y) = (k / n, k % n);
        let mut lo = 0;
        let mut hi = p.all();
        for j in 0..k {
            let (a, b) = (j / n, j % n);
            if p.derr(x, a) && p.derr(y, b) {
                lo |= self.cells[j];
            }
            if p.derr(a, x) && p.derr(b, y) {
                hi &= self.cells[j];
            }
        }
        if self.unit & crate::order::bit(x) != 0 {
            hi &= p.down(y);
        }
        if self.unit & crate::order::bit(y) != 0 {
            hi &= p.down(x);
        }
        self.lowers.iter().copied().filter(|&l| l & lo == lo && l & !hi == 0).collect()
    }

    /// Unit and associativity constraints decidable from the first `k` cells.
    fn consistent(&self, k: usize) -> bool {
        let n = self.n;
        let done = |i: usize| i < k;
        for z in 0..n {
            let left: Vec<usize> = members(self.unit).map(|t| t * n + z).collect();
            if left.iter().all(|&i| done(i)) && left.iter().fold(0, |s, &i| s | self.cells[i]) != self.p.down(z) {
                return false;
            }
            let right: Vec<usize> = members(self.unit).map(|t| z * n + t).collect();
            if right.iter().all(|&i| done(i)) && right.iter().fold(0, |s, &i| s | self.cells[i]) != self.p.down(z) {
                return false;
            }
        }
        for x in 0..n {
            for y in 0..n {
                if !done(x * n + y) {
                    continue;
                }
                for z in 0..n {
                    if !done(y * n + z) {
                        continue;
                    }
                    let xy = self.cells[x * n + y];
                    let yz = self.cells[y * n + z];
                    if members(xy).any(|u| !done(u * n + z)) || members(yz).any(|v| !done(x * n + v)) {
                        continue;
                    }
                    let l = members(xy).fold(0, |s, u| s | self.cells[u * n + z]);
                    let r = members(yz).fold(0, |s, v| s | self.cells[x * n + v]);
                    if l != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn exhaust(&mut self, emit: &mut dyn FnMut(&[Set])) {
        self.dfs(0, emit);
    }

    fn dfs(&mut self, k: usize, emit: &mut dyn FnMut(&[Set])) {
        if k == self.cells.len() {
            if check_laws(self.p, &self.cells, self.unit).is_ok() {
                emit(&self.cells);
            }
            return;
        }
        for c in self.candidates(k) {
            self.cells[k] = c;
            if self.consistent(k + 1) {
                self.dfs(k + 1, emit);
            }
        }
        self.cells[k] = 0;
    }

    /// Randomized depth-first search; the first complete assignment wins.
    fn walk(&mut self, rng: &mut ChaCha8Rng, budget: usize) -> Option<Vec<Set>> {
        let mut left = budget;
        if self.walk_from(0, rng, &mut left) {
            Some(self.cells.clone())
        } else {
            None
        }
    }

    fn walk_from(&mut self, k: usize, rng: &mut ChaCha8Rng, left: &mut usize) -> bool {
        if k == self.cells.len() {
            return check_laws(self.p, &self.cells, self.unit).is_ok();
        }
        let mut cs = self.candidates(k);
        cs.shuffle(rng);
        for c in cs {
            if *left == 0 {
                return false;
            }
            *left -= 1;
            self.cells[k] = c;
            if self.consistent(k + 1) && self.walk_from(k + 1, rng, left) {
                return true;
            }
        }
        self.cells[k] = 0;
        false
    }
}

pub const FIXTURE_NAMES: [&str; 6] = ["Z2", "Z3", "G21", "MIN2", "D2-idempotent", "two-Z2-disjoint"];

/// A named fixture: one monoid, or a family of pregroups on an ambient order.
#[derive(Clone, Debug)]
pub enum Fixture {
    Monoid(PrelMonoid),
    Family { ambient: Preorder, family: Vec<Component> },
}

fn cyclic(n: usize) -> PrelMonoid {
    let t: Vec<usize> = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    PrelMonoid::representable(Preorder::discrete(n), &t, 0).expect("cyclic group")
}

fn z2_on(carrier: Vec<usize>) -> Component {
    Component::from_pregroup(carrier, pregroup_adjoints(&cyclic(2)).expect("Z2 is a pregroup")).expect("two elements")
}

fn trivial_on(a: usize) -> Component {
    Component::from_pregroup(vec![a], pregroup_adjoints(&cyclic(1)).expect("trivial group")).expect("one element")
}

pub fn fixture(name: &str) -> Result<Fixture> {
    Ok(match name {
        "Z2" => Fixture::Monoid(cyclic(2)),
        "Z3" => Fixture::Monoid(cyclic(3)),
        "MIN2" => Fixture::Monoid(PrelMonoid::representable(Preorder::chain(2), &[0, 0, 0, 1], 1)?),
        "D2-idempotent" => Fixture::Monoid(PrelMonoid::representable(Preorder::discrete(2), &[0, 1, 1, 1], 0)?),
        "G21" => Fixture::Monoid(PrelMonoid::build(
            Preorder::discrete(3),
            &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0), (2, 2, 2)],
            &[0, 2],
        )?),
        "two-Z2-disjoint" => {
            Fixture::Family { ambient: Preorder::discrete(4), family: vec![z2_on(vec![0, 1]), z2_on(vec![2, 3])] }
        }
        _ => return Err(Error::UnknownFixture(name.to_string())),
    })
}

/// The fixture as a single monoid; families are united.
pub fn fixture_monoid(name: &str) -> Result<PrelMonoid> {
    match fixture(name)? {
        Fixture::Monoid(m) => Ok(m),
        Fixture::Family { ambient, family } => {
            crate::spider::union_monoid(&ambient, &family, crate::spider::Consistency::Restricted)
        }
    }
}

/// The fixture as a family of pregroups, for the fixtures that are built as one.
pub fn fixture_family(name: &str) -> Result<(Preorder, Vec<Component>)> {
    match name {
        "G21" => Ok((Preorder::discrete(3), vec![z2_on(vec![0, 1]), trivial_on(2)])),
        "two-Z2-disjoint" => Ok((Preorder::discrete(4), vec![z2_on(vec![0, 1]), z2_on(vec![2, 3])])),
        _ if FIXTURE_NAMES.contains(&name) => Err(Error::Precondition(format!("fixture `{name}` is not a family"))),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

/// What to sweep.
#[derive(Clone, Copy, Debug)]
pub struct CatalogConfig {
    pub min_size: usize,
    pub max_size: usize,
    pub mode: Mode,
    pub limits: Limits,
    pub plug: OutputPlug,
}

impl CatalogConfig {
    pub fn new(max_size: usize, mode: Mode) -> CatalogConfig {
        CatalogConfig { min_size: 1, max_size, mode, limits: Limits::default(), plug: crate::monoid::DEFAULT_PLUG }
    }
}

/// One monoid to classify, with where it came from.
#[derive(Clone, Debug)]
pub struct SubjectRecord {
    pub index: usize,
    pub size: usize,
    /// Position of the carrier in the labeled preorder enumeration of its size.
    pub preorder: usize,
    pub monoid: PrelMonoid,
}

#[derive(Clone, Debug)]
pub struct SubjectList {
    pub records: Vec<SubjectRecord>,
    pub preorders: Vec<(usize, usize, Preorder)>,
    pub complete: bool,
}

pub fn subjects(cfg: &CatalogConfig) -> Result<SubjectList> {
    let mut records = Vec::new();
    let mut preorders = Vec::new();
    let mut complete = true;
    for size in cfg.min_size.max(1)..=cfg.max_size {
        cfg.limits.check(size, cfg.mode)?;
        for (pi, p) in enumerate_preorders(size)?.into_iter().enumerate() {
            let ms = match cfg.mode {
                Mode::Sampled { seed, count } => {
                    let s = sample(&p, seed, ((size as u64) << 32) | pi as u64, count, &cfg.limits);
                    complete &= s.complete;
                    s.monoids
                }
                mode => enumerate_monoids_with(&p, mode, &cfg.limits)?,
            };
            for m in ms {
                records.push(SubjectRecord { index: records.len(), size, preorder: pi, monoid: m });
            }
            preorders.push((size, pi, p));
        }
    }
    Ok(SubjectList { records, preorders, complete })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub subject: usize,
    pub kind: String,
    pub detail: String,
}

pub const COMPLETE_LATTICE: &str = "complete-lattice monoid is not a pregroup";
pub const POINTED_NOT_SPECIAL: &str = "pointed monoid is not special";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub subject: usize,
    pub class: String,
    pub properties: PropertyVector,
    pub theorems: Vec<TheoremReport>,
    pub cover_components: Option<usize>,
    pub discrepancies: Vec<Discrepancy>,
}

impl Evaluation {
    pub fn passed(&self) -> bool {
        self.theorems.iter().all(|t| t.passed)
    }
}

pub fn evaluate(index: usize, m: &PrelMonoid, plug: OutputPlug) -> Evaluation {
    let properties = classify_with(m, plug);
    let subject = Subject::Monoid(m.clone());
    let theorems = (1..=3).map(|k| verify_theorem(k, &subject, plug).expect("monoid subjects are accepted")).collect();
    let cover_components = if properties.spider { cover_valid(m).ok() } else { None };
    let mut discrepancies = Vec::new();
    if properties.representable && m.carrier().is_complete_lattice() && !properties.pregroup {
        let why = pregroup_adjoints(m).err().map(|e| e.describe()).unwrap_or_default();
        let frob = crate::monoid::check_frobenius(m).counterexample;
        discrepancies.push(Discrepancy {
            subject: index,
            kind: COMPLETE_LATTICE.into(),
            detail: format!("{why}; frobenius counterexample {:?}", frob.map(|c| c.instance)),
        });
    }
    if properties.pointed && !properties.special {
        let c = crate::monoid::check_special(m).counterexample.map(|c| c.instance);
        discrepancies.push(Discrepancy {
            subject: index,
            kind: POINTED_NOT_SPECIAL.into(),
            detail: format!("special counterexample {c:?}"),
        });
    }
    Evaluation { subject: index, class: properties.class_key(), properties, theorems, cover_components, discrepancies }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreorderCounts {
    pub size: usize,
    pub preorder: usize,
    /// Related pairs `(x, y)` with `derr(x, y)`, `x ≠ y`.
    pub relations: Vec<(usize, usize)>,
    pub total: usize,
    pub classes: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogEntry {
    pub subject: usize,
    pub size: usize,
    pub preorder: usize,
    pub class: String,
    pub counterexample: Counterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub subject: usize,
    pub theorem: u8,
    pub clause: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogReport {
    pub mode: String,
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub min_size: usize,
    pub max_size: usize,
    pub plug: String,
    pub scope: String,
    pub complete: bool,
    pub subjects: usize,
    pub preorders: Vec<PreorderCounts>,
    pub counterexamples: Vec<LogEntry>,
    pub discrepancies: Vec<Discrepancy>,
    pub violations: Vec<Violation>,
    pub passed: bool,
}

fn scope(cfg: &CatalogConfig) -> String {
    match cfg.mode {
        Mode::General => format!(
            "every law-passing monoid on every labeled preorder of size {}..={}",
            cfg.min_size, cfg.max_size
        ),
        Mode::Representable => format!(
            "every lifted multiplication table with a unit on every labeled preorder of size {}..={}; non-representable monoids not covered",
            cfg.min_size, cfg.max_size
        ),
        Mode::Sampled { seed, count } => format!(
            "{count} seeded random-walk samples (seed {seed}) per labeled preorder of size {}..={}; not exhaustive",
            cfg.min_size, cfg.max_size
        ),
    }
}

/// Merge evaluations (any order) into a report ordered by subject index.
pub fn assemble(cfg: &CatalogConfig, list: &SubjectList, evaluations: &[Evaluation]) -> CatalogReport {
    let mut evs: Vec<&Evaluation> = evaluations.iter().collect();
    evs.sort_by_key(|e| e.subject);
    let mut counts: BTreeMap<(usize, usize), PreorderCounts> = list
        .preorders
        .iter()
        .map(|(size, pi, p)| {
            let relations =
                (0..p.size()).flat_map(|x| (0..p.size()).map(move |y| (x, y))).filter(|&(x, y)| x != y && p.derr(x, y)).collect();
            ((*size, *pi), PreorderCounts { size: *size, preorder: *pi, relations, total: 0, classes: BTreeMap::new() })
        })
        .collect();
    let mut counterexamples = Vec::new();
    let mut discrepancies = Vec::new();
    let mut violations = Vec::new();
    for e in evs {
        let r = &list.records[e.subject];
        let c = counts.get_mut(&(r.size, r.preorder)).expect("subject preorder listed");
        c.total += 1;
        *c.classes.entry(e.class.clone()).or_insert(0) += 1;
        if let Some(cx) = &e.properties.counterexample {
            counterexamples.push(LogEntry {
                subject: e.subject,
                size: r.size,
                preorder: r.preorder,
                class: e.class.clone(),
                counterexample: cx.clone(),
            });
        }
        discrepancies.extend(e.discrepancies.iter().cloned());
        for t in &e.theorems {
            for cl in t.clauses.iter().filter(|c| !c.holds) {
                violations.push(Violation {
                    subject: e.subject,
                    theorem: t.theorem,
                    clause: cl.name.clone(),
                    detail: cl.detail.clone(),
                });
            }
        }
    }
    let (seed, count) = match cfg.mode {
        Mode::Sampled { seed, count } => (Some(seed), Some(count)),
        _ => (None, None),
    };
    let complete = list.complete && evaluations.len() == list.records.len();
    CatalogReport {
        mode: cfg.mode.name().into(),
        seed,
        count,
        min_size: cfg.min_size,
        max_size: cfg.max_size,
        plug: cfg.plug.name().into(),
        scope: scope(cfg),
        complete,
        subjects: list.records.len(),
        preorders: counts.into_values().collect(),
        counterexamples,
        discrepancies,
        passed: violations.is_empty() && complete,
        violations,
    }
}

/// Sequential catalog; see the module docs for the parallel split.
pub fn catalog(cfg: &CatalogConfig) -> Result<CatalogReport> {
    let list = subjects(cfg)?;
    let evs: Vec<Evaluation> = list.records.iter().map(|r| evaluate(r.index, &r.monoid, cfg.plug)).collect();
    Ok(assemble(cfg, &list, &evs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlugCandidate {
    pub plug: String,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlugSelection {
    pub candidates: Vec<PlugCandidate>,
    /// The unique reading with zero violations, if exactly one exists.
    pub selected: Option<String>,
}

/// Run the residuation theorem under every output-plug reading.
pub fn select_plug(monoids: &[PrelMonoid]) -> PlugSelection {
    let candidates: Vec<PlugCandidate> = OutputPlug::ALL
        .iter()
        .map(|&plug| PlugCandidate {
            plug: plug.name().into(),
            violations: monoids
                .iter()
                .filter(|m| !verify_theorem(2, &Subject::Monoid((*m).clone()), plug).expect("monoid subject").passed)
                .count(),
        })
        .collect();
    let ok: Vec<&PlugCandidate> = candidates.iter().filter(|c| c.violations == 0).collect();
    let selected = if ok.len() == 1 { Some(ok[0].plug.clone()) } else { None };
    PlugSelection { candidates, selected }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::bit;

    #[test]
    fn singleton_has_one_monoid() {
        let p = Preorder::discrete(1);
        assert_eq!(enumerate_monoids(&p, Mode::General).unwrap().len(), 1);
        assert_eq!(enumerate_monoids(&p, Mode::Representable).unwrap().len(), 1);
    }

    /// Every fiber assignment and unit on D2 filtered by the laws.
    fn d2_brute() -> HashSet<(Vec<Set>, Set)> {
        let p = Preorder::discrete(2);
        let mut out = HashSet::new();
        for code in 0u32..256 {
            let cells: Vec<Set> = (0..4).map(|i| ((code >> (2 * i)) & 3) as Set).collect();
            for unit in 0..4 {
                if check_laws(&p, &cells, unit).is_ok() {
                    out.insert((cells.clone(), unit));
                }
            }
        }
        out
    }

    #[test]
    fn d2_counts() {
        let p = Preorder::discrete(2);
        let rep = enumerate_monoids(&p, Mode::Representable).unwrap();
        assert_eq!(rep.len(), 4);
        let gen = enumerate_monoids(&p, Mode::General).unwrap();
        let g: HashSet<(Vec<Set>, Set)> = gen.iter().map(|m| (m.fibers().to_vec(), m.unit())).collect();
        assert_eq!(g.len(), gen.len());
        assert_eq!(g, d2_brute());
        for m in &rep {
            assert!(g.contains(&(m.fibers().to_vec(), m.unit())));
        }
    }

    /// Discrete 3: cells touching the unit range over subsets of the diagonal
    /// target, the rest over all subsets; filter by the laws.
    fn d3_brute() -> HashSet<(Vec<Set>, Set)> {
        let p = Preorder::discrete(3);
        let mut out = HashSet::new();
        for unit in 1..8 {
            let opts: Vec<Vec<Set>> = (0..9)
                .map(|i| {
                    let (x, y) = (i / 3, i % 3);
                    let mut hi = 7;
                    if unit & bit(x) != 0 {
                        hi &= bit(y);
                    }
                    if unit & bit(y) != 0 {
                        hi &= bit(x);
                    }
                    (0..8).filter(|s| s & !hi == 0).collect()
                })
                .collect();
            let mut idx = [0usize; 9];
            'outer: loop {
                let cells: Vec<Set> = (0..9).map(|i| opts[i][idx[i]]).collect();
                if check_laws(&p, &cells, unit).is_ok() {
                    out.insert((cells, unit));
                }
                for i in (0..9).rev() {
                    idx[i] += 1;
                    if idx[i] < opts[i].len() {
                        continue 'outer;
                    }
                    idx[i] = 0;
                }
                break;
            }
        }
        out
    }

    #[test]
    fn d3_general_matches_filter() {
        let p = Preorder::discrete(3);
        let gen = enumerate_monoids_with(&p, Mode::General, &Limits::overridden(3)).unwrap();
        let g: HashSet<(Vec<Set>, Set)> = gen.iter().map(|m| (m.fibers().to_vec(), m.unit())).collect();
        assert_eq!(g.len(), gen.len());
        assert_eq!(g, d3_brute());
    }

    #[test]
    fn representable_within_general_up_to_two() {
        for n in 1..=2 {
            for p in enumerate_preorders(n).unwrap() {
                let g: HashSet<(Vec<Set>, Set)> = enumerate_monoids(&p, Mode::General)
                    .unwrap()
                    .iter()
                    .map(|m| (m.fibers().to_vec(), m.unit()))
                    .collect();
                for m in enumerate_monoids(&p, Mode::Representable).unwrap() {
                    assert!(g.contains(&(m.fibers().to_vec(), m.unit())));
                }
            }
        }
    }

    #[test]
    fn size_guards() {
        let p = Preorder::discrete(3);
        assert!(matches!(enumerate_monoids(&p, Mode::General), Err(Error::Limit(_))));
        assert!(enumerate_monoids(&Preorder::discrete(4), Mode::Representable).is_err());
        let big = Limits::overridden(3);
        assert!(!enumerate_monoids_with(&p, Mode::General, &big).unwrap().is_empty());
    }

    #[test]
    fn sampling_is_reproducible() {
        let p = Preorder::discrete(3);
        let a = enumerate_monoids(&p, Mode::Sampled { seed: 7, count: 20 }).unwrap();
        let b = enumerate_monoids(&p, Mode::Sampled { seed: 7, count: 20 }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
    }

    #[test]
    fn fixtures_load() {
        for name in FIXTURE_NAMES {
            let m = fixture_monoid(name).unwrap();
            assert!(check_laws(m.carrier(), m.fibers(), m.unit()).is_ok());
        }
        assert!(matches!(fixture("Z4"), Err(Error::UnknownFixture(_))));
        let z2 = fixture_monoid("Z2").unwrap();
        assert!(crate::monoid::classify(&z2).pregroup);
        let min2 = fixture_monoid("MIN2").unwrap();
        assert!(!crate::monoid::check_frobenius(&min2).holds);
        let g21 = fixture_monoid("G21").unwrap();
        assert_eq!(cover_valid(&g21), Ok(2));
        let (amb, fam) = fixture_family("G21").unwrap();
        let u = crate::spider::union_monoid(&amb, &fam, crate::spider::Consistency::Restricted).unwrap();
        assert_eq!(u, g21);
        assert_eq!(fixture_monoid("two-Z2-disjoint").unwrap().unit(), bit(0) | bit(2));
    }

    #[test]
    fn small_catalog_passes() {
        let cfg = CatalogConfig::new(2, Mode::General);
        let r = catalog(&cfg).unwrap();
        assert!(r.passed, "{:?}", r.violations);
        assert_eq!(r.subjects, r.preorders.iter().map(|c| c.total).sum::<usize>());
        assert_eq!(r.preorders.len(), 1 + 4);
        for c in &r.preorders {
            assert_eq!(c.total, c.classes.values().sum::<usize>());
        }
        assert!(r.discrepancies.iter().any(|d| d.kind == COMPLETE_LATTICE));
    }
}
