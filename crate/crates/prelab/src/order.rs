//! Finite preorders stored as bitmask rows.
//!
//! `derr(x, y)` is kept exactly as written in the relation matrix. Lower sets
//! are closed under derr-successors (`x ∈ L ∧ derr(x, y) ⇒ y ∈ L`), upper sets
//! under derr-predecessors. No translation to a conventional `≤` happens here.

use serde::Serialize;

use crate::error::{Error, Result};

/// Subsets of a carrier, one bit per element.
pub type Set = u64;

/// Largest carrier a [`Preorder`] can hold.
pub const MAX_SIZE: usize = 64;

/// Default guard for exhaustive preorder enumeration.
pub const DEFAULT_PREORDER_LIMIT: usize = 4;

/// Default guard for `2^n` completion enumeration.
pub const DEFAULT_COMPLETION_LIMIT: usize = 16;

#[inline]
pub fn bit(x: usize) -> Set {
    1u64 << x
}

#[inline]
pub fn full(n: usize) -> Set {
    if n == MAX_SIZE {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterate the members of a set in increasing order.
pub fn members(mut s: Set) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let i = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(i)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Preorder {
    rows: Vec<Set>,
    names: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Lower => Side::Upper,
            Side::Upper => Side::Lower,
        }
    }
}

/// A lower (`Do`) or upper (`Up`) set of some preorder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClosedSet {
    pub side: Side,
    pub members: Set,
}

impl ClosedSet {
    pub fn new(p: &Preorder, side: Side, members: Set) -> Result<ClosedSet> {
        if members & !full(p.size()) != 0 {
            return Err(Error::Index(format!("set {members:#b} exceeds carrier of size {}", p.size())));
        }
        let ok = match side {
            Side::Lower => p.is_lower(members),
            Side::Upper => p.is_upper(members),
        };
        if !ok {
            return Err(Error::NotClosed(format!("{members:#b} is not a {side:?} set")));
        }
        Ok(ClosedSet { side, members })
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members & bit(x) != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        members(self.members)
    }
}

impl Preorder {
    /// Wrap rows that are already known to be reflexive and transitive.
    pub(crate) fn from_rows_unchecked(rows: Vec<Set>) -> Preorder {
        Preorder { rows, names: None }
    }

    /// Build from rows, rejecting anything that is not a preorder.
    pub fn from_rows(rows: Vec<Set>) -> Result<Preorder> {
        let n = rows.len();
        if n > MAX_SIZE {
            return Err(Error::Limit(format!("carrier of size {n} exceeds {MAX_SIZE}")));
        }
        for (x, &r) in rows.iter().enumerate() {
            if r & !full(n) != 0 {
                return Err(Error::Index(format!("row {x} mentions elements outside 0..{n}")));
            }
            if r & bit(x) == 0 {
                return Err(Error::NotPreorder(format!("derr({x},{x}) fails")));
            }
            for y in members(r) {
                if rows[y] & !r != 0 {
                    let z = (rows[y] & !r).trailing_zeros();
                    return Err(Error::NotPreorder(format!("derr({x},{y}) and derr({y},{z}) but not derr({x},{z})")));
                }
            }
        }
        Ok(Preorder { rows, names: None })
    }

    /// Reflexive-transitive closure of `gens` on `n` elements.
    pub fn close(n: usize, gens: &[(usize, usize)]) -> Result<Preorder> {
        if n > MAX_SIZE {
            return Err(Error::Limit(format!("carrier of size {n} exceeds {MAX_SIZE}")));
        }
        let mut rows: Vec<Set> = (0..n).map(bit).collect();
        for &(x, y) in gens {
            if x >= n || y >= n {
                return Err(Error::Index(format!("pair ({x},{y}) out of range for {n} elements")));
            }
            rows[x] |= bit(y);
        }
        // Warshall over bit rows.
        for k in 0..n {
            for x in 0..n {
                if rows[x] & bit(k) != 0 {
                    rows[x] |= rows[k];
                }
            }
        }
        Ok(Preorder { rows, names: None })
    }

    pub fn discrete(n: usize) -> Preorder {
        Preorder::close(n, &[]).expect("discrete preorder within limits")
    }

    /// The chain with `derr(i, j)` for `i ≤ j`.
    pub fn chain(n: usize) -> Preorder {
        let gens: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Preorder::close(n, &gens).expect("chain within limits")
    }

    /// The one-element preorder `𝟙`.
    pub fn unit() -> Preorder {
        Preorder::discrete(1)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Preorder> {
        if names.len() != self.size() {
            return Err(Error::Index(format!("{} names for {} elements", names.len(), self.size())));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display label of an element.
    pub fn label(&self, x: usize) -> String {
        match &self.names {
            Some(ns) => ns[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Set] {
        &self.rows
    }

    pub fn all(&self) -> Set {
        full(self.size())
    }

    #[inline]
    pub fn derr(&self, x: usize, y: usize) -> bool {
        self.rows[x] & bit(y) != 0
    }

    pub fn equiv(&self, x: usize, y: usize) -> bool {
        self.derr(x, y) && self.derr(y, x)
    }

    /// `↓x = {y | derr(x, y)}`.
    #[inline]
    pub fn down(&self, x: usize) -> Set {
        self.rows[x]
    }

    /// `↑x = {y | derr(y, x)}`.
    pub fn up(&self, x: usize) -> Set {
        (0..self.size()).filter(|&y| self.derr(y, x)).fold(0, |s, y| s | bit(y))
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_lower(&self, s: Set) -> bool {
        members(s).all(|x| self.rows[x] & !s == 0)
    }

    pub fn is_upper(&self, s: Set) -> bool {
        (0..self.size()).all(|x| s & bit(x) != 0 || self.rows[x] & s == 0)
    }

    /// Smallest lower set containing `s`.
    pub fn lower_closure(&self, s: Set) -> Set {
        members(s).fold(0, |acc, x| acc | self.rows[x])
    }

    /// Smallest upper set containing `s`.
    pub fn upper_closure(&self, s: Set) -> Set {
        (0..self.size())
            .filter(|&x| self.rows[x] & s != 0)
            .fold(0, |acc, x| acc | bit(x))
    }

    /// `{x | ∀u ∈ s. derr(u, x)}`, a lower set.
    pub fn lower_bounds(&self, s: Set) -> Set {
        members(s).fold(self.all(), |acc, u| acc & self.rows[u])
    }

    /// `{y | ∀v ∈ s. derr(y, v)}`, an upper set.
    pub fn upper_bounds(&self, s: Set) -> Set {
        (0..self.size())
            .filter(|&y| self.rows[y] & s == s)
            .fold(0, |acc, y| acc | bit(y))
    }

    /// Members of `s` with nothing strictly derr-before them inside `s`.
    ///
    /// For a lower set these generate it: `s = lower_closure(maximal(s))`.
    pub fn maximal(&self, s: Set) -> Set {
        members(s)
            .filter(|&w| members(s).all(|w2| !self.derr(w2, w) || self.derr(w, w2)))
            .fold(0, |acc, w| acc | bit(w))
    }

    /// Members of `s` with nothing strictly derr-after them inside `s`.
    pub fn minimal(&self, s: Set) -> Set {
        members(s)
            .filter(|&w| members(s).all(|w2| !self.derr(w, w2) || self.derr(w2, w)))
            .fold(0, |acc, w| acc | bit(w))
    }

    /// Lowest-index `g` with `↓g = s`, if `s` is a principal lower set.
    pub fn principal_generator(&self, s: Set) -> Option<usize> {
        members(s).find(|&g| self.rows[g] == s)
    }

    pub fn principal(&self, x: usize, side: Side) -> ClosedSet {
        let members = match side {
            Side::Lower => self.down(x),
            Side::Upper => self.up(x),
        };
        ClosedSet { side, members }
    }

    /// All lower or upper sets, in increasing bitmask order.
    pub fn completion(&self, side: Side) -> Result<Vec<ClosedSet>> {
        self.completion_with_limit(side, DEFAULT_COMPLETION_LIMIT)
    }

    pub fn completion_with_limit(&self, side: Side, limit: usize) -> Result<Vec<ClosedSet>> {
        let n = self.size();
        if n > limit {
            return Err(Error::Limit(format!("completion of {n} elements refused (limit {limit})")));
        }
        let mut out = Vec::new();
        for s in 0..=full(n) {
            let ok = match side {
                Side::Lower => self.is_lower(s),
                Side::Upper => self.is_upper(s),
            };
            if ok {
                out.push(ClosedSet { side, members: s });
            }
        }
        Ok(out)
    }

    /// Quotient by the symmetric part. Classes are numbered by first member.
    pub fn quotient(&self) -> (Preorder, Vec<usize>) {
        let n = self.size();
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if class[x] == usize::MAX {
                let c = reps.len();
                reps.push(x);
                for y in x..n {
                    if self.equiv(x, y) {
                        class[y] = c;
                    }
                }
            }
        }
        let rows = reps
            .iter()
            .map(|&r| (0..reps.len()).filter(|&c| self.derr(r, reps[c])).fold(0, |s, c| s | bit(c)))
            .collect();
        (Preorder::from_rows_unchecked(rows), class)
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.size()).all(|x| (0..x).all(|y| !self.equiv(x, y)))
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.size()).all(|x| self.rows[x] == bit(x))
    }

    /// Every subset has a least derr-bound (finite complete lattice).
    pub fn is_complete_lattice(&self) -> bool {
        if !self.is_antisymmetric() || self.size() > DEFAULT_COMPLETION_LIMIT {
            return false;
        }
        (0..=self.all()).all(|s| {
            let bounds = self.upper_bounds(s);
            members(bounds).any(|b| bounds & !self.up(b) == 0)
        })
    }

    pub fn opposite(&self) -> Preorder {
        let rows = (0..self.size()).map(|x| self.up(x)).collect();
        Preorder { rows, names: self.names.clone() }
    }

    /// Disjoint sum: `P` first, then `Q` shifted by `|P|`.
    pub fn sum(p: &Preorder, q: &Preorder) -> Result<Preorder> {
        let (m, n) = (p.size(), q.size());
        if m + n > MAX_SIZE {
            return Err(Error::Limit(format!("sum of size {} exceeds {MAX_SIZE}", m + n)));
        }
        let rows = p.rows.iter().copied().chain(q.rows.iter().map(|r| r << m)).collect();
        Ok(Preorder::from_rows_unchecked(rows))
    }

    /// Product with pair `(x, y)` at index `x * |Q| + y`.
    pub fn product(p: &Preorder, q: &Preorder) -> Result<Preorder> {
        let (m, n) = (p.size(), q.size());
        if m * n > MAX_SIZE {
            return Err(Error::Limit(format!("product of size {} exceeds {MAX_SIZE}", m * n)));
        }
        let mut rows = vec![0; m * n];
        for x in 0..m {
            for y in 0..n {
                let mut r = 0;
                for x2 in members(p.rows[x]) {
                    r |= q.rows[y] << (x2 * n);
                }
                rows[x * n + y] = r;
            }
        }
        Ok(Preorder::from_rows_unchecked(rows))
    }

    /// Restriction to the given elements, in the given order.
    pub fn restrict(&self, elems: &[usize]) -> Preorder {
        let rows = elems
            .iter()
            .map(|&a| {
                elems
                    .iter()
                    .enumerate()
                    .filter(|&(_, &b)| self.derr(a, b))
                    .fold(0, |s, (i, _)| s | bit(i))
            })
            .collect();
        let names = self.names.as_ref().map(|ns| elems.iter().map(|&a| ns[a].clone()).collect());
        Preorder { rows, names }
    }

    /// Same relation, labels dropped.
    pub fn unlabeled(&self) -> Preorder {
        Preorder { rows: self.rows.clone(), names: None }
    }
}

/// Every labeled preorder on `n` elements, each exactly once.
///
/// Built by extending preorders on `k` elements with a new element's row and
/// column, keeping only transitive extensions.
pub fn enumerate_preorders(n: usize) -> Result<Vec<Preorder>> {
    enumerate_preorders_with_limit(n, DEFAULT_PREORDER_LIMIT)
}

pub fn enumerate_preorders_with_limit(n: usize, limit: usize) -> Result<Vec<Preorder>> {
    if n > limit {
        return Err(Error::Limit(format!("preorder enumeration for n={n} refused (limit {limit})")));
    }
    let mut level: Vec<Vec<Set>> = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for rows in &level {
            for down in 0..=full(k) {
                for up in 0..=full(k) {
                    if let Some(ext) = extend(rows, k, down, up) {
                        next.push(ext);
                    }
                }
            }
        }
        level = next;
    }
    Ok(level.into_iter().map(Preorder::from_rows_unchecked).collect())
}

/// Add element `k` with `derr(k, y)` for `y ∈ down` and `derr(x, k)` for `x ∈ up`.
fn extend(rows: &[Set], k: usize, down: Set, up: Set) -> Option<Vec<Set>> {
    // New row must be closed forward, new column closed backward.
    if members(down).any(|y| rows[y] & !down != 0) {
        return None;
    }
    if members(up).any(|x| (0..k).any(|w| rows[w] & bit(x) != 0 && up & bit(w) == 0)) {
        return None;
    }
    // A path x → k → y needs derr(x, y) already.
    for x in members(up) {
        if rows[x] & down != down {
            return None;
        }
    }
    let mut out: Vec<Set> = rows.iter().enumerate().map(|(x, &r)| if up & bit(x) != 0 { r | bit(k) } else { r }).collect();
    out.push(down | bit(k));
    Some(out)
}
