//! Prelational monoids `(A, ∇, ⊥)` and the predicates the theorems talk about.
//!
//! `∇(x, y, z)` is stored as one fiber per cell: `fiber(x, y) = {z | ∇(x, y, z)}`.
//! The comonoid `(Δ, ⊤)` is never stored; it is the converse dual of `(∇, ⊥)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::{bit, members, ClosedSet, Preorder, Set, Side};
use crate::prelation::Prelation;

/// Largest carrier a monoid may have (pairs must fit one bitmask).
pub const MAX_MONOID: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrelMonoid {
    carrier: Preorder,
    nabla: Vec<Set>,
    unit: Set,
}

/// `Δ = ∇†` and `⊤ = ⊥†`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comonoid {
    n: usize,
    /// `delta[z]` holds pair index `u * n + v` when `Δ(z, (u, v))`.
    delta: Vec<Set>,
    /// `col[u * n + v] = {z | Δ(z, (u, v))}`.
    col: Vec<Set>,
    pub top: Set,
}

impl Comonoid {
    #[inline]
    pub fn delta(&self, z: usize, u: usize, v: usize) -> bool {
        self.delta[z] & bit(u * self.n + v) != 0
    }

    /// `{z | Δ(z, (u, v))}`.
    #[inline]
    pub fn sources(&self, u: usize, v: usize) -> Set {
        self.col[u * self.n + v]
    }

    pub fn pairs(&self, z: usize) -> Set {
        self.delta[z]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub condition: String,
    pub instance: Vec<usize>,
}

impl Counterexample {
    fn new(condition: &str, instance: Vec<usize>) -> Counterexample {
        Counterexample { condition: condition.to_string(), instance }
    }
}

/// A yes/no answer with the first failing instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    fn pass() -> Verdict {
        Verdict { holds: true, counterexample: None }
    }

    fn fail(condition: &str, instance: Vec<usize>) -> Verdict {
        Verdict { holds: false, counterexample: Some(Counterexample::new(condition, instance)) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyVector {
    pub strict: bool,
    pub pointed: bool,
    pub representable: bool,
    pub frobenius: bool,
    pub special: bool,
    pub spider: bool,
    pub pregroup: bool,
    pub left_residuated: bool,
    pub right_residuated: bool,
    pub counterexample: Option<Counterexample>,
}

impl PropertyVector {
    /// Compact class label such as `SPR-FS-G-LR` for catalog bucketing.
    pub fn class_key(&self) -> String {
        let f = |b: bool, c: char| if b { c } else { '.' };
        format!(
            "{}{}{}{}{}{}{}{}",
            f(self.strict, 'S'),
            f(self.pointed, 'P'),
            f(self.representable, 'R'),
            f(self.frobenius, 'F'),
            f(self.special, 'I'),
            f(self.pregroup, 'G'),
            f(self.left_residuated, 'L'),
            f(self.right_residuated, 'Q'),
        )
    }
}

impl PrelMonoid {
    /// Validate an already closed `∇` and `⊥`.
    pub fn from_parts(carrier: Preorder, nabla: Vec<Set>, unit: Set) -> Result<PrelMonoid> {
        let n = carrier.size();
        if n > MAX_MONOID {
            return Err(Error::Limit(format!("monoid carrier of {n} exceeds {MAX_MONOID}")));
        }
        if nabla.len() != n * n {
            return Err(Error::Mismatch(format!("{} cells for a carrier of {n}", nabla.len())));
        }
        check_laws(&carrier, &nabla, unit)?;
        Ok(PrelMonoid { carrier, nabla, unit })
    }

    /// Close generators and check the monoid laws.
    pub fn build(carrier: Preorder, nabla_gens: &[(usize, usize, usize)], unit_gens: &[usize]) -> Result<PrelMonoid> {
        let n = carrier.size();
        if n > MAX_MONOID {
            return Err(Error::Limit(format!("monoid carrier of {n} exceeds {MAX_MONOID}")));
        }
        let mut g = vec![0; n * n];
        for &(x, y, z) in nabla_gens {
            if x >= n || y >= n || z >= n {
                return Err(Error::Index(format!("triple ({x},{y},{z}) out of range")));
            }
            g[x * n + y] |= bit(z);
        }
        let mut u = 0;
        for &t in unit_gens {
            if t >= n {
                return Err(Error::Index(format!("unit element {t} out of range")));
            }
            u |= bit(t);
        }
        let nabla = close_nabla(&carrier, &g);
        let unit = carrier.lower_closure(u);
        PrelMonoid::from_parts(carrier, nabla, unit)
    }

    /// Lift a multiplication table: `∇(x, y, z) ⟺ derr(mult(x, y), z)`, `⊥ = ↓ι`.
    pub fn representable(carrier: Preorder, mult: &[usize], unit: usize) -> Result<PrelMonoid> {
        let n = carrier.size();
        if mult.len() != n * n || mult.iter().any(|&m| m >= n) || unit >= n {
            return Err(Error::Index("multiplication table does not fit the carrier".into()));
        }
        let nabla = mult.iter().map(|&m| carrier.down(m)).collect();
        let u = carrier.down(unit);
        PrelMonoid::from_parts(carrier, nabla, u)
    }

    pub fn carrier(&self) -> &Preorder {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    #[inline]
    pub fn nabla(&self, x: usize, y: usize, z: usize) -> bool {
        self.nabla[x * self.size() + y] & bit(z) != 0
    }

    #[inline]
    pub fn fiber(&self, x: usize, y: usize) -> Set {
        self.nabla[x * self.size() + y]
    }

    pub fn fibers(&self) -> &[Set] {
        &self.nabla
    }

    /// `⊥` as a lower set.
    pub fn unit(&self) -> Set {
        self.unit
    }

    pub fn unit_set(&self) -> ClosedSet {
        ClosedSet { side: Side::Lower, members: self.unit }
    }

    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.size();
        (0..n * n).flat_map(|i| members(self.nabla[i]).map(move |z| (i / n, i % n, z))).collect()
    }

    /// `∇` as a prelation `A×A ↘ A`.
    pub fn nabla_prelation(&self) -> Prelation {
        let pp = Preorder::product(&self.carrier, &self.carrier).expect("carrier within limits");
        Prelation::from_rows_unchecked(pp, self.carrier.clone(), self.nabla.clone())
    }

    pub fn unit_prelation(&self) -> Prelation {
        Prelation::from_rows_unchecked(Preorder::unit(), self.carrier.clone(), vec![self.unit])
    }

    pub fn comonoid(&self) -> Comonoid {
        comonoid_of(self)
    }

    /// Lowest-index representative table when every fiber is principal.
    pub fn mult_table(&self) -> Option<Vec<usize>> {
        self.nabla.iter().map(|&f| self.carrier.principal_generator(f)).collect()
    }

    pub fn unit_elem(&self) -> Option<usize> {
        self.carrier.principal_generator(self.unit)
    }

    pub fn is_strict(&self) -> bool {
        self.strict_verdict().holds
    }

    fn strict_verdict(&self) -> Verdict {
        let n = self.size();
        match (0..n * n).find(|&i| self.carrier.principal_generator(self.nabla[i]).is_none()) {
            Some(i) => Verdict::fail("strict", vec![i / n, i % n]),
            None => Verdict::pass(),
        }
    }

    pub fn is_pointed(&self) -> bool {
        self.unit_elem().is_some()
    }

    pub fn is_representable(&self) -> bool {
        self.is_strict() && self.is_pointed()
    }

    /// Restriction to `elems` with unit `(↓t) ∩ elems`, unchecked.
    pub fn restrict(&self, elems: &[usize], t: usize) -> PrelMonoid {
        let k = elems.len();
        let carrier = self.carrier.restrict(elems);
        let sub = |s: Set| elems.iter().enumerate().filter(|&(_, &a)| s & bit(a) != 0).fold(0, |acc, (i, _)| acc | bit(i));
        let mut nabla = vec![0; k * k];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                nabla[i * k + j] = sub(self.fiber(a, b));
            }
        }
        let unit = sub(self.carrier.down(t));
        PrelMonoid { carrier, nabla, unit }
    }
}

pub(crate) fn close_nabla(p: &Preorder, gens: &[Set]) -> Vec<Set> {
    let pp = Preorder::product(p, p).expect("carrier within limits");
    Prelation::close_rows(pp, p.clone(), gens).rows().to_vec()
}

fn law(name: &'static str, instance: Vec<usize>) -> Error {
    Error::Law { law: name, instance }
}

/// Closure, unit laws and associativity, reporting the first failure.
pub fn check_laws(p: &Preorder, nabla: &[Set], unit: Set) -> Result<()> {
    let n = p.size();
    for x in 0..n {
        for y in 0..n {
            let f = nabla[x * n + y];
            if f & !p.all() != 0 {
                return Err(Error::Index(format!("fiber ({x},{y}) leaves the carrier")));
            }
            if !p.is_lower(f) {
                let z = members(f).find(|&z| p.down(z) & !f != 0).expect("witness");
                let z2 = (p.down(z) & !f).trailing_zeros() as usize;
                return Err(law("closure", vec![x, y, z, z2]));
            }
            for x2 in members(p.down(x)) {
                for y2 in members(p.down(y)) {
                    let g = nabla[x2 * n + y2];
                    if g & !f != 0 {
                        return Err(law("closure", vec![x, y, x2, y2, (g & !f).trailing_zeros() as usize]));
                    }
                }
            }
        }
    }
    if !p.is_lower(unit) {
        return Err(law("unit closure", members(unit).collect()));
    }
    for x in 0..n {
        let left = members(unit).fold(0, |acc, t| acc | nabla[t * n + x]);
        if left != p.down(x) {
            return Err(law("left unit", vec![x, (left ^ p.down(x)).trailing_zeros() as usize]));
        }
        let right = members(unit).fold(0, |acc, t| acc | nabla[x * n + t]);
        if right != p.down(x) {
            return Err(law("right unit", vec![x, (right ^ p.down(x)).trailing_zeros() as usize]));
        }
    }
    if let Some(inst) = associativity_failure(n, nabla) {
        return Err(law("associativity", inst));
    }
    Ok(())
}

pub(crate) fn associativity_failure(n: usize, nabla: &[Set]) -> Option<Vec<usize>> {
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let l = members(nabla[x * n + y]).fold(0, |acc, u| acc | nabla[u * n + z]);
                let r = members(nabla[y * n + z]).fold(0, |acc, v| acc | nabla[x * n + v]);
                if l != r {
                    return Some(vec![x, y, z, (l ^ r).trailing_zeros() as usize]);
                }
            }
        }
    }
    None
}

/// `Δ = ∇†` and `⊤ = ⊥†`, both through [`Prelation::converse`].
pub fn comonoid_of(m: &PrelMonoid) -> Comonoid {
    let n = m.size();
    let d = m.nabla_prelation().converse();
    let delta = d.rows().to_vec();
    let col = (0..n * n).map(|i| d.column(i)).collect();
    let top = m.unit_prelation().converse().as_upper();
    Comonoid { n, delta, col, top }
}

/// Both Frobenius sequents, in the direction that can fail.
pub fn check_frobenius(m: &PrelMonoid) -> Verdict {
    check_frobenius_with(m, &m.comonoid())
}

pub fn check_frobenius_with(m: &PrelMonoid, c: &Comonoid) -> Verdict {
    let n = m.size();
    for x in 0..n {
        for y in 0..n {
            for u in 0..n {
                for v in 0..n {
                    if m.fiber(x, y) & c.sources(u, v) == 0 {
                        continue;
                    }
                    if !(0..n).any(|s| m.nabla(x, s, u) && c.delta(y, s, v)) {
                        return Verdict::fail("frobenius-left", vec![x, y, u, v]);
                    }
                    if !(0..n).any(|t| c.delta(x, u, t) && m.nabla(t, y, v)) {
                        return Verdict::fail("frobenius-right", vec![x, y, u, v]);
                    }
                }
            }
        }
    }
    Verdict::pass()
}

/// Does the Frobenius premise hold at `(x, y, u, v)` without a conclusion?
pub fn frobenius_fails_at(m: &PrelMonoid, c: &Comonoid, x: usize, y: usize, u: usize, v: usize) -> bool {
    let n = m.size();
    m.fiber(x, y) & c.sources(u, v) != 0
        && (!(0..n).any(|s| m.nabla(x, s, u) && c.delta(y, s, v)) || !(0..n).any(|t| c.delta(x, u, t) && m.nabla(t, y, v)))
}

/// `[∃u,v. Δ(x,(u,v)) ∧ ∇(u,v,y)] ⇒ derr(x, y)`.
pub fn check_special(m: &PrelMonoid) -> Verdict {
    check_special_with(m, &m.comonoid())
}

pub fn check_special_with(m: &PrelMonoid, c: &Comonoid) -> Verdict {
    let n = m.size();
    for x in 0..n {
        let reach = members(c.pairs(x)).fold(0, |acc, i| acc | m.fibers()[i]);
        if reach & !m.carrier().down(x) != 0 {
            return Verdict::fail("special", vec![x, (reach & !m.carrier().down(x)).trailing_zeros() as usize]);
        }
    }
    Verdict::pass()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PregroupStructure {
    pub base: PrelMonoid,
    pub mult: Vec<usize>,
    pub unit_elem: usize,
    pub ell: Vec<usize>,
    pub arr: Vec<usize>,
}

impl PregroupStructure {
    #[inline]
    pub fn m(&self, x: usize, y: usize) -> usize {
        self.mult[x * self.base.size() + y]
    }

    pub fn derr(&self, x: usize, y: usize) -> bool {
        self.base.carrier().derr(x, y)
    }

    pub fn size(&self) -> usize {
        self.base.size()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AdjointFailure {
    NotStrict { x: usize, y: usize },
    NotPointed,
    NoLeftAdjoint { x: usize },
    NoRightAdjoint { x: usize },
    Correspondence { x: usize, a: usize, b: usize },
}

impl AdjointFailure {
    pub fn describe(&self) -> String {
        match self {
            AdjointFailure::NotStrict { x, y } => format!("fiber ({x},{y}) is not principal"),
            AdjointFailure::NotPointed => "unit is not principal".into(),
            AdjointFailure::NoLeftAdjoint { x } => format!("element {x} has no left adjoint"),
            AdjointFailure::NoRightAdjoint { x } => format!("element {x} has no right adjoint"),
            AdjointFailure::Correspondence { x, a, b } => format!("adjunction correspondence fails at x={x}, a={a}, b={b}"),
        }
    }
}

/// Exhaustive search for `x^ℓ`, `x^r` satisfying the four adjunction sequents
/// `derr(x·x^ℓ, ι)`, `derr(ι, x^ℓ·x)`, `derr(x^r·x, ι)`, `derr(ι, x·x^r)`.
pub fn pregroup_adjoints(m: &PrelMonoid) -> Result<PregroupStructure, AdjointFailure> {
    let n = m.size();
    let mult = match m.mult_table() {
        Some(t) => t,
        None => {
            let v = m.strict_verdict().counterexample.expect("non-strict");
            return Err(AdjointFailure::NotStrict { x: v.instance[0], y: v.instance[1] });
        }
    };
    let i = m.unit_elem().ok_or(AdjointFailure::NotPointed)?;
    let p = m.carrier();
    let mu = |x: usize, y: usize| mult[x * n + y];
    let mut ell = Vec::with_capacity(n);
    let mut arr = Vec::with_capacity(n);
    for x in 0..n {
        let l = (0..n)
            .find(|&l| p.derr(mu(x, l), i) && p.derr(i, mu(l, x)))
            .ok_or(AdjointFailure::NoLeftAdjoint { x })?;
        let r = (0..n)
            .find(|&r| p.derr(mu(r, x), i) && p.derr(i, mu(x, r)))
            .ok_or(AdjointFailure::NoRightAdjoint { x })?;
        ell.push(l);
        arr.push(r);
    }
    // derr(xa, b) ⟺ derr(a, x^ℓ b) and derr(x^r a, b) ⟺ derr(a, xb)
    for x in 0..n {
        for a in 0..n {
            for b in 0..n {
                if p.derr(mu(x, a), b) != p.derr(a, mu(ell[x], b)) || p.derr(mu(arr[x], a), b) != p.derr(a, mu(x, b)) {
                    return Err(AdjointFailure::Correspondence { x, a, b });
                }
            }
        }
    }
    Ok(PregroupStructure { base: m.clone(), mult, unit_elem: i, ell, arr })
}

/// Candidate sets for the side witnesses `s` and `t` of a Frobenius instance.
///
/// `s` must satisfy `derr(x·s, u)` and `derr(y, s·v)`; `t` must satisfy
/// `derr(x, u·t)` and `derr(t·y, v)`. The canonical `x^ℓ·u` and `v·y^r` are
/// required to be among them.
pub fn frobenius_witnesses(g: &PregroupStructure, x: usize, y: usize, u: usize, v: usize) -> Result<(Set, Set)> {
    let n = g.size();
    if [x, y, u, v].iter().any(|&a| a >= n) {
        return Err(Error::Index("witness query out of range".into()));
    }
    if !g.derr(g.m(x, y), g.m(u, v)) {
        return Err(Error::Precondition(format!("derr({x}·{y}, {u}·{v}) does not hold")));
    }
    let s_set = (0..n).filter(|&s| g.derr(g.m(x, s), u) && g.derr(y, g.m(s, v))).fold(0, |a, s| a | bit(s));
    let t_set = (0..n).filter(|&t| g.derr(x, g.m(u, t)) && g.derr(g.m(t, y), v)).fold(0, |a, t| a | bit(t));
    let s0 = g.m(g.ell[x], u);
    let t0 = g.m(v, g.arr[y]);
    if s_set & bit(s0) == 0 || t_set & bit(t0) == 0 {
        return Err(Error::Structural(format!("canonical witnesses fail at ({x},{y},{u},{v})")));
    }
    Ok((s_set, t_set))
}

/// `H = {h | derr(h, ι)}`, after checking the cone axioms.
pub fn cone(g: &PregroupStructure) -> Result<Set> {
    let n = g.size();
    let i = g.unit_elem;
    let h: Set = (0..n).filter(|&x| g.derr(x, i)).fold(0, |a, x| a | bit(x));
    let inh = |x: usize| h & bit(x) != 0;
    if !inh(i) {
        return Err(Error::Structural("ι ∉ H".into()));
    }
    for a in members(h) {
        for b in members(h) {
            if !inh(g.m(a, b)) {
                return Err(Error::Structural(format!("H not closed: {a}·{b}")));
            }
        }
    }
    for hh in members(h) {
        for x in 0..n {
            if !inh(g.m(g.arr[x], g.m(hh, x))) {
                return Err(Error::Structural(format!("x^r h x ∉ H for h={hh}, x={x}")));
            }
        }
    }
    for x in 0..n {
        if inh(x) && inh(g.arr[x]) && !g.base.carrier().equiv(x, i) {
            return Err(Error::Structural(format!("{x} and {x}^r in H but {x} ≢ ι")));
        }
    }
    Ok(h)
}

/// `derr(x, y) ⟺ y^r·x ∈ H`, checked against the carrier.
pub fn order_from_cone(g: &PregroupStructure, h: Set) -> Result<Preorder> {
    let n = g.size();
    let rows = (0..n)
        .map(|x| (0..n).filter(|&y| h & bit(g.m(g.arr[y], x)) != 0).fold(0, |a, y| a | bit(y)))
        .collect();
    let p = Preorder::from_rows(rows)?;
    if p.rows() != g.base.carrier().rows() {
        return Err(Error::Structural("cone order differs from the carrier order".into()));
    }
    Ok(p)
}

/// How a lower set is plugged into an output wire of `Δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OutputPlug {
    /// `∃a ∈ L`.
    OverSet,
    /// `∃a ∈ L‡`, with `L‡` the upper bounds of `L`.
    OverDualExists,
    /// `∀a ∈ L‡`.
    OverDualForall,
}

impl OutputPlug {
    pub const ALL: [OutputPlug; 3] = [OutputPlug::OverSet, OutputPlug::OverDualExists, OutputPlug::OverDualForall];

    pub fn name(self) -> &'static str {
        match self {
            OutputPlug::OverSet => "over-set",
            OutputPlug::OverDualExists => "over-dual-exists",
            OutputPlug::OverDualForall => "over-dual-forall",
        }
    }

    pub fn parse(s: &str) -> Option<OutputPlug> {
        OutputPlug::ALL.into_iter().find(|p| p.name() == s)
    }
}

/// The reading selected by the Thm 2 sweep.
pub const DEFAULT_PLUG: OutputPlug = OutputPlug::OverDualExists;

/// The four residuals, by their symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Residual {
    /// `r▷ : Up A → Do A`.
    RTri,
    /// `◁r : Up A → Do A`.
    TriR,
    /// `◁ℓ : Do A → Up A`.
    TriL,
    /// `ℓ▷ : Do A → Up A`.
    LTri,
}

impl Residual {
    pub fn input_side(self) -> Side {
        match self {
            Residual::RTri | Residual::TriR => Side::Upper,
            Residual::TriL | Residual::LTri => Side::Lower,
        }
    }
}

fn in_plug(p: &Preorder, up: Set, pred: impl Fn(usize) -> bool) -> bool {
    members(p.lower_bounds(up)).any(pred)
}

fn out_plug(p: &Preorder, low: Set, plug: OutputPlug, pred: impl Fn(usize) -> bool) -> bool {
    match plug {
        OutputPlug::OverSet => members(low).any(pred),
        OutputPlug::OverDualExists => members(p.upper_bounds(low)).any(pred),
        OutputPlug::OverDualForall => members(p.upper_bounds(low)).all(pred),
    }
}

pub fn residual(m: &PrelMonoid, arg: ClosedSet, which: Residual, plug: OutputPlug) -> Result<ClosedSet> {
    if arg.side != which.input_side() {
        return Err(Error::Mismatch(format!("{which:?} takes a {:?} set", which.input_side())));
    }
    ClosedSet::new(m.carrier(), arg.side, arg.members)?;
    Ok(residual_with(m, &m.comonoid(), arg.members, which, plug))
}

fn residual_with(m: &PrelMonoid, c: &Comonoid, arg: Set, which: Residual, plug: OutputPlug) -> ClosedSet {
    let p = m.carrier();
    let n = m.size();
    let cand = |f: &dyn Fn(usize) -> bool| (0..n).filter(|&a| f(a)).fold(0, |s, a| s | bit(a));
    match which {
        Residual::RTri => {
            let s = cand(&|a| in_plug(p, arg, |x| m.fiber(x, a) & c.top != 0));
            ClosedSet { side: Side::Lower, members: p.lower_bounds(s) }
        }
        Residual::TriR => {
            let s = cand(&|a| in_plug(p, arg, |x| m.fiber(a, x) & c.top != 0));
            ClosedSet { side: Side::Lower, members: p.lower_bounds(s) }
        }
        Residual::TriL => {
            let s = cand(&|u| out_plug(p, arg, plug, |w| members(m.unit()).any(|t| c.delta(t, u, w))));
            ClosedSet { side: Side::Upper, members: p.upper_bounds(s) }
        }
        Residual::LTri => {
            let s = cand(&|u| out_plug(p, arg, plug, |w| members(m.unit()).any(|t| c.delta(t, w, u))));
            ClosedSet { side: Side::Upper, members: p.upper_bounds(s) }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ResidSide {
    Left,
    Right,
}

/// Exhaustive check of the residuation equivalences on one side.
///
/// Right: `∇(ξ, y, z) ⟺ Δ(y, (r▷ξ, z))` and `∇(y, ξ, z) ⟺ Δ(y, (z, ◁rξ))`
/// for every upper set `ξ`. Left: `Δ(x, (y, ζ)) ⟺ ∇(x, ◁ℓζ, y)` and
/// `Δ(x, (ζ, y)) ⟺ ∇(ℓ▷ζ, x, y)` for every lower set `ζ`.
pub fn check_residuated(m: &PrelMonoid, side: ResidSide, plug: OutputPlug) -> Verdict {
    check_residuated_with(m, &m.comonoid(), side, plug)
}

pub fn check_residuated_with(m: &PrelMonoid, c: &Comonoid, side: ResidSide, plug: OutputPlug) -> Verdict {
    let p = m.carrier();
    let n = m.size();
    match side {
        ResidSide::Right => {
            for xi in p.completion(Side::Upper).expect("monoid carrier within limits") {
                let xi = xi.members;
                let r1 = residual_with(m, c, xi, Residual::RTri, plug).members;
                let r2 = residual_with(m, c, xi, Residual::TriR, plug).members;
                for y in 0..n {
                    for z in 0..n {
                        let lhs = in_plug(p, xi, |x| m.nabla(x, y, z));
                        let rhs = out_plug(p, r1, plug, |a| c.delta(y, a, z));
                        if lhs != rhs {
                            return Verdict::fail("r▷", vec![xi as usize, y, z]);
                        }
                        let lhs = in_plug(p, xi, |x| m.nabla(y, x, z));
                        let rhs = out_plug(p, r2, plug, |a| c.delta(y, z, a));
                        if lhs != rhs {
                            return Verdict::fail("◁r", vec![xi as usize, y, z]);
                        }
                    }
                }
            }
        }
        ResidSide::Left => {
            for ze in p.completion(Side::Lower).expect("monoid carrier within limits") {
                let ze = ze.members;
                let u1 = residual_with(m, c, ze, Residual::TriL, plug).members;
                let u2 = residual_with(m, c, ze, Residual::LTri, plug).members;
                for x in 0..n {
                    for y in 0..n {
                        let lhs = out_plug(p, ze, plug, |w| c.delta(x, y, w));
                        let rhs = in_plug(p, u1, |u| m.nabla(x, u, y));
                        if lhs != rhs {
                            return Verdict::fail("◁ℓ", vec![ze as usize, x, y]);
                        }
                        let lhs = out_plug(p, ze, plug, |w| c.delta(x, w, y));
                        let rhs = in_plug(p, u2, |u| m.nabla(u, x, y));
                        if lhs != rhs {
                            return Verdict::fail("ℓ▷", vec![ze as usize, x, y]);
                        }
                    }
                }
            }
        }
    }
    Verdict::pass()
}

pub fn classify(m: &PrelMonoid) -> PropertyVector {
    classify_with(m, DEFAULT_PLUG)
}

pub fn classify_with(m: &PrelMonoid, plug: OutputPlug) -> PropertyVector {
    let c = m.comonoid();
    let strict = m.strict_verdict();
    let pointed = m.is_pointed();
    let frob = check_frobenius_with(m, &c);
    let special = check_special_with(m, &c);
    let adj = pregroup_adjoints(m);
    let left = check_residuated_with(m, &c, ResidSide::Left, plug);
    let right = check_residuated_with(m, &c, ResidSide::Right, plug);
    let adj_ce = adj.as_ref().err().map(|e| {
        let inst = match *e {
            AdjointFailure::NotStrict { x, y } => vec![x, y],
            AdjointFailure::NotPointed => vec![],
            AdjointFailure::NoLeftAdjoint { x } | AdjointFailure::NoRightAdjoint { x } => vec![x],
            AdjointFailure::Correspondence { x, a, b } => vec![x, a, b],
        };
        Counterexample::new("pregroup", inst)
    });
    let counterexample = strict
        .counterexample
        .clone()
        .or_else(|| (!pointed).then(|| Counterexample::new("pointed", vec![])))
        .or_else(|| frob.counterexample.clone())
        .or_else(|| special.counterexample.clone())
        .or(adj_ce)
        .or_else(|| left.counterexample.clone())
        .or_else(|| right.counterexample.clone());
    PropertyVector {
        strict: strict.holds,
        pointed,
        representable: strict.holds && pointed,
        frobenius: frob.holds,
        special: special.holds,
        spider: frob.holds && special.holds,
        pregroup: adj.is_ok(),
        left_residuated: left.holds,
        right_residuated: right.holds,
        counterexample,
    }
}

/// Pointwise families that are too big to carry as finite monoids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleFamily {
    /// Finite multisets of naturals, `derr(x, y) ⟺ Σx ≤ Σy`.
    Multiset,
    /// Words under subsequence occurrence; `∇` admits shuffles.
    Shuffle,
    /// Finitely supported `ℕ → ℤ`, same preorder as multisets.
    SignedMultiset,
}

/// Exponent vectors for the multiset families, words for shuffles.
#[derive(Clone, Copy, Debug)]
pub enum Encoded<'a> {
    Counts(&'a [i64]),
    Word(&'a str),
}

fn weight(e: Encoded, signed: bool) -> Result<i64> {
    match e {
        Encoded::Counts(c) => {
            if !signed && c.iter().any(|&k| k < 0) {
                return Err(Error::Encoding("negative multiplicity in a multiset".into()));
            }
            Ok(c.iter().enumerate().map(|(i, &k)| i as i64 * k).sum())
        }
        Encoded::Word(_) => Err(Error::Encoding("expected an exponent vector".into())),
    }
}

/// `Σ_n n·(x+y)_n`; addition of exponent vectors is pointwise.
fn weight_sum(x: Encoded, y: Encoded, signed: bool) -> Result<i64> {
    Ok(weight(x, signed)? + weight(y, signed)?)
}

pub fn example_nabla(family: ExampleFamily, x: Encoded, y: Encoded, z: Encoded) -> Result<bool> {
    match family {
        ExampleFamily::Multiset | ExampleFamily::SignedMultiset => {
            let signed = family == ExampleFamily::SignedMultiset;
            Ok(weight_sum(x, y, signed)? <= weight(z, signed)?)
        }
        ExampleFamily::Shuffle => match (x, y, z) {
            (Encoded::Word(a), Encoded::Word(b), Encoded::Word(c)) => Ok(contains_shuffle(a, b, c)),
            _ => Err(Error::Encoding("shuffle arguments must be words".into())),
        },
    }
}

/// Does `z` contain, as a subsequence, some interleaving of `x` and `y`?
///
/// `best[i][j]` is the shortest prefix of `z` embedding an interleaving of
/// `x[..i]` and `y[..j]`; greedy leftmost matching is optimal.
fn contains_shuffle(x: &str, y: &str, z: &str) -> bool {
    let (x, y, z): (Vec<char>, Vec<char>, Vec<char>) = (x.chars().collect(), y.chars().collect(), z.chars().collect());
    let next = |from: usize, ch: char| z[from..].iter().position(|&c| c == ch).map(|k| from + k + 1);
    let inf = usize::MAX;
    let mut best = vec![vec![inf; y.len() + 1]; x.len() + 1];
    best[0][0] = 0;
    for i in 0..=x.len() {
        for j in 0..=y.len() {
            let cur = best[i][j];
            if cur == inf {
                continue;
            }
            if i < x.len() {
                if let Some(k) = next(cur, x[i]) {
                    best[i + 1][j] = best[i + 1][j].min(k);
                }
            }
            if j < y.len() {
                if let Some(k) = next(cur, y[j]) {
                    best[i][j + 1] = best[i][j + 1].min(k);
                }
            }
        }
    }
    best[x.len()][y.len()] != inf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> PrelMonoid {
        PrelMonoid::representable(Preorder::discrete(2), &[0, 1, 1, 0], 0).unwrap()
    }

    fn z3() -> PrelMonoid {
        let t: Vec<usize> = (0..9).map(|i| (i / 3 + i % 3) % 3).collect();
        PrelMonoid::representable(Preorder::discrete(3), &t, 0).unwrap()
    }

    fn min2() -> PrelMonoid {
        PrelMonoid::representable(Preorder::chain(2), &[0, 0, 0, 1], 1).unwrap()
    }

    #[test]
    fn build_examples() {
        let m = PrelMonoid::build(Preorder::discrete(2), &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)], &[0]).unwrap();
        assert_eq!(m, z2());
        let m = PrelMonoid::build(Preorder::chain(2), &[(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 1)], &[1]).unwrap();
        assert_eq!(m, min2());
        let err = PrelMonoid::build(Preorder::discrete(2), &[(0, 0, 0)], &[]).unwrap_err();
        assert!(matches!(err, Error::Law { law: "left unit", .. }));
    }

    #[test]
    fn comonoid_examples() {
        let m = z2();
        let c = m.comonoid();
        for z in 0..2 {
            for x in 0..2 {
                for y in 0..2 {
                    assert_eq!(c.delta(z, x, y), (x + y) % 2 == z);
                }
            }
        }
        assert_eq!(c.top, 0b01);
        assert_eq!(min2().comonoid().top, 0b11);
    }

    #[test]
    fn classify_examples() {
        let v = classify(&z2());
        assert!(v.strict && v.pointed && v.representable && v.frobenius && v.special && v.spider && v.pregroup);
        assert!(v.left_residuated && v.right_residuated && v.counterexample.is_none());
        let v = classify(&min2());
        assert!(v.strict && v.pointed && v.representable);
        assert!(!v.frobenius && !v.pregroup);
        let one = PrelMonoid::representable(Preorder::unit(), &[0], 0).unwrap();
        let v = classify(&one);
        assert!(v.spider && v.pregroup && v.left_residuated && v.right_residuated);
    }

    #[test]
    fn frobenius_examples() {
        assert!(check_frobenius(&z2()).holds);
        let m = min2();
        let v = check_frobenius(&m);
        assert!(!v.holds);
        let c = m.comonoid();
        let inst = v.counterexample.unwrap().instance;
        assert!(frobenius_fails_at(&m, &c, inst[0], inst[1], inst[2], inst[3]));
        assert!(frobenius_fails_at(&m, &c, 0, 1, 1, 0));
    }

    #[test]
    fn witness_examples() {
        let g = pregroup_adjoints(&z2()).unwrap();
        let (s, _) = frobenius_witnesses(&g, 1, 1, 0, 0).unwrap();
        assert!(s & bit(1) != 0);
        assert!(frobenius_witnesses(&g, 0, 0, 0, 0).unwrap().0 & bit(0) != 0);
        let g = pregroup_adjoints(&z3()).unwrap();
        let (s, _) = frobenius_witnesses(&g, 1, 2, 0, 0).unwrap();
        assert!(s & bit(2) != 0);
        assert!(frobenius_witnesses(&g, 1, 1, 0, 0).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let g = pregroup_adjoints(&z2()).unwrap();
        assert_eq!((g.ell[1], g.arr[1]), (1, 1));
        let g = pregroup_adjoints(&z3()).unwrap();
        assert_eq!((g.ell[1], g.arr[1]), (2, 2));
        assert_eq!(pregroup_adjoints(&min2()).unwrap_err(), AdjointFailure::NoLeftAdjoint { x: 0 });
    }

    #[test]
    fn cone_examples() {
        let g = pregroup_adjoints(&z2()).unwrap();
        let h = cone(&g).unwrap();
        assert_eq!(h, 0b01);
        assert!(order_from_cone(&g, h).unwrap().is_discrete());
        let g = pregroup_adjoints(&z3()).unwrap();
        assert_eq!(cone(&g).unwrap(), 0b001);
        let one = pregroup_adjoints(&PrelMonoid::representable(Preorder::unit(), &[0], 0).unwrap()).unwrap();
        assert_eq!(cone(&one).unwrap(), 0b1);
    }

    #[test]
    fn residual_examples() {
        let m = z2();
        let g = ClosedSet { side: Side::Upper, members: 0b10 };
        assert_eq!(residual(&m, g, Residual::RTri, DEFAULT_PLUG).unwrap().members, 0b10);
        let empty = ClosedSet { side: Side::Upper, members: 0 };
        let r = residual(&m, empty, Residual::RTri, DEFAULT_PLUG).unwrap().members;
        assert!(r == 0 || r == 0b11);
        let wrong = ClosedSet { side: Side::Lower, members: 0b10 };
        assert!(residual(&m, wrong, Residual::RTri, DEFAULT_PLUG).is_err());
        assert!(check_residuated(&m, ResidSide::Left, DEFAULT_PLUG).holds);
        assert!(check_residuated(&m, ResidSide::Right, DEFAULT_PLUG).holds);
        assert!(!check_residuated(&min2(), ResidSide::Left, DEFAULT_PLUG).holds);
        assert!(!check_residuated(&min2(), ResidSide::Right, DEFAULT_PLUG).holds);
    }

    #[test]
    fn example_families() {
        let (a, b, c) = ([0i64, 1], [0i64, 0, 1], [0i64, 0, 0, 1]);
        assert!(example_nabla(ExampleFamily::Multiset, Encoded::Counts(&a), Encoded::Counts(&b), Encoded::Counts(&c)).unwrap());
        let w = |s| Encoded::Word(s);
        assert!(example_nabla(ExampleFamily::Shuffle, w("ab"), w("cd"), w("acbd")).unwrap());
        assert!(!example_nabla(ExampleFamily::Shuffle, w("ab"), w(""), w("a")).unwrap());
        assert!(example_nabla(ExampleFamily::Shuffle, w("a"), w("a"), w("xaya")).unwrap());
        assert!(example_nabla(ExampleFamily::Multiset, Encoded::Counts(&[-1]), Encoded::Counts(&a), Encoded::Counts(&c)).is_err());
        let s = [0i64, -2];
        assert!(example_nabla(ExampleFamily::SignedMultiset, Encoded::Counts(&s), Encoded::Counts(&b), Encoded::Counts(&[0])).unwrap());
    }
}
