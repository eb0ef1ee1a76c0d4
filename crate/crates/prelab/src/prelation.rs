//! Prelations `Φ: A ↘ B`: relations upper-closed in `A` and lower-closed in `B`.
//!
//! Row `x` of a prelation is the fiber `Φ_•(x) = {y | Φ(x, y)}`, a lower set of
//! the codomain.
//!
//! Two dualities from the domain to the codomain are provided. [`Prelation::ddag`]
//! is the joint-bounds formula: `Φ‡(y, x)` iff every pair of `Φ` sits
//! derr-after `y` and derr-before `x`. It satisfies `Φ ⊆ Φ‡‡` and
//! `Φ‡ = Φ‡‡‡`. [`Prelation::converse`] reads each fiber backwards from its
//! maximal generators. It agrees with `derr(b, Φ(a))` on maps, is plain
//! transposition on discrete orders, and is the dual used for comonoids.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::{bit, members, Preorder, Set};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Prelation {
    dom: Preorder,
    cod: Preorder,
    rows: Vec<Set>,
}

/// Outcome of [`Prelation::is_map`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapVerdict {
    pub total: bool,
    pub single_valued: bool,
    /// Lowest-index representative `Φ(a)` with `Φ(a, b) ⟺ derr(Φ(a), b)`.
    pub representative: Option<Vec<usize>>,
}

impl MapVerdict {
    pub fn is_map(&self) -> bool {
        self.representative.is_some()
    }
}

impl Prelation {
    pub(crate) fn from_rows_unchecked(dom: Preorder, cod: Preorder, rows: Vec<Set>) -> Prelation {
        debug_assert_eq!(rows.len(), dom.size());
        Prelation { dom, cod, rows }
    }

    /// Accept rows only if they already satisfy the closure law.
    pub fn from_rows(dom: Preorder, cod: Preorder, rows: Vec<Set>) -> Result<Prelation> {
        if rows.len() != dom.size() {
            return Err(Error::Mismatch(format!("{} rows for a domain of {}", rows.len(), dom.size())));
        }
        for (x, &r) in rows.iter().enumerate() {
            if r & !cod.all() != 0 {
                return Err(Error::Index(format!("row {x} leaves the codomain")));
            }
            if !cod.is_lower(r) {
                return Err(Error::NotPrelation(format!("row {x} is not lower-closed in the codomain")));
            }
            for x2 in members(dom.down(x)) {
                if rows[x2] & !r != 0 {
                    return Err(Error::NotPrelation(format!("derr({x},{x2}) but row {x2} ⊄ row {x}")));
                }
            }
        }
        Ok(Prelation { dom, cod, rows })
    }

    /// Close generator rows: `Φ(x, y)` iff some generator `(x′, y′)` has
    /// `derr(x, x′)` and `derr(y′, y)`.
    pub fn close_rows(dom: Preorder, cod: Preorder, gens: &[Set]) -> Prelation {
        let low: Vec<Set> = gens.iter().map(|&g| cod.lower_closure(g)).collect();
        let rows = (0..dom.size())
            .map(|x| members(dom.down(x)).fold(0, |acc, x2| acc | low[x2]))
            .collect();
        Prelation { dom, cod, rows }
    }

    /// Smallest prelation containing the given pairs.
    pub fn close(dom: Preorder, cod: Preorder, gens: &[(usize, usize)]) -> Result<Prelation> {
        let mut g = vec![0; dom.size()];
        for &(x, y) in gens {
            if x >= dom.size() || y >= cod.size() {
                return Err(Error::Index(format!("pair ({x},{y}) out of range")));
            }
            g[x] |= bit(y);
        }
        Ok(Prelation::close_rows(dom, cod, &g))
    }

    pub fn empty(dom: Preorder, cod: Preorder) -> Prelation {
        let rows = vec![0; dom.size()];
        Prelation { dom, cod, rows }
    }

    pub fn full(dom: Preorder, cod: Preorder) -> Prelation {
        let rows = vec![cod.all(); dom.size()];
        Prelation { dom, cod, rows }
    }

    /// The preorder itself, as the identity prelation.
    pub fn identity(p: &Preorder) -> Prelation {
        Prelation { dom: p.clone(), cod: p.clone(), rows: p.rows().to_vec() }
    }

    /// `Φ(x, y) ⟺ derr(f(x), y)` for a monotone `f`.
    pub fn from_map(dom: Preorder, cod: Preorder, f: &[usize]) -> Result<Prelation> {
        if f.len() != dom.size() || f.iter().any(|&y| y >= cod.size()) {
            return Err(Error::Index("map table does not fit the preorders".into()));
        }
        let rows = f.iter().map(|&y| cod.down(y)).collect();
        Prelation::from_rows(dom, cod, rows)
    }

    /// A lower set of `B` as a prelation `𝟙 ↘ B`.
    pub fn from_lower(cod: &Preorder, s: Set) -> Result<Prelation> {
        Prelation::from_rows(Preorder::unit(), cod.clone(), vec![s])
    }

    /// An upper set of `A` as a prelation `A ↘ 𝟙`.
    pub fn from_upper(dom: &Preorder, s: Set) -> Result<Prelation> {
        let rows = (0..dom.size()).map(|x| (s >> x) & 1).collect();
        Prelation::from_rows(dom.clone(), Preorder::unit(), rows)
    }

    pub fn dom(&self) -> &Preorder {
        &self.dom
    }

    pub fn cod(&self) -> &Preorder {
        &self.cod
    }

    pub fn rows(&self) -> &[Set] {
        &self.rows
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.rows[x] & bit(y) != 0
    }

    /// `Φ_•(x)`.
    pub fn row(&self, x: usize) -> Set {
        self.rows[x]
    }

    /// `Φ^•(y) = {x | Φ(x, y)}`.
    pub fn column(&self, y: usize) -> Set {
        (0..self.dom.size()).filter(|&x| self.get(x, y)).fold(0, |s, x| s | bit(x))
    }

    /// For prelations out of `𝟙`: the lower set they name.
    pub fn as_lower(&self) -> Set {
        self.rows[0]
    }

    /// For prelations into `𝟙`: the upper set they name.
    pub fn as_upper(&self) -> Set {
        self.column(0)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.dom.size()).flat_map(|x| members(self.rows[x]).map(move |y| (x, y))).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn is_subset(&self, other: &Prelation) -> bool {
        self.rows.len() == other.rows.len() && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Prelation) -> Result<Prelation> {
        self.same_type(other)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect();
        Ok(Prelation { dom: self.dom.clone(), cod: self.cod.clone(), rows })
    }

    fn same_type(&self, other: &Prelation) -> Result<()> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::Mismatch("prelations between different preorders".into()));
        }
        Ok(())
    }

    /// `Φ;Ψ (x, z) ⟺ ∃y. Φ(x, y) ∧ Ψ(y, z)`.
    pub fn compose(&self, psi: &Prelation) -> Result<Prelation> {
        if self.cod.rows() != psi.dom.rows() {
            return Err(Error::Mismatch("codomain of the first differs from domain of the second".into()));
        }
        let rows = self
            .rows
            .iter()
            .map(|&r| members(r).fold(0, |acc, y| acc | psi.rows[y]))
            .collect();
        Ok(Prelation { dom: self.dom.clone(), cod: psi.cod.clone(), rows })
    }

    /// `Φ × Ψ` between product preorders.
    pub fn tensor(phi: &Prelation, psi: &Prelation) -> Result<Prelation> {
        let dom = Preorder::product(&phi.dom, &psi.dom)?;
        let cod = Preorder::product(&phi.cod, &psi.cod)?;
        let (n, n2) = (psi.dom.size(), psi.cod.size());
        let mut rows = vec![0; dom.size()];
        for x in 0..phi.dom.size() {
            for y in 0..n {
                let mut r = 0;
                for x2 in members(phi.rows[x]) {
                    r |= psi.rows[y] << (x2 * n2);
                }
                rows[x * n + y] = r;
            }
        }
        Ok(Prelation { dom, cod, rows })
    }

    /// `Φ^o : B^o ↘ A^o`, the transpose.
    pub fn op_dual(&self) -> Prelation {
        let rows = (0..self.cod.size()).map(|y| self.column(y)).collect();
        Prelation { dom: self.cod.opposite(), cod: self.dom.opposite(), rows }
    }

    /// `Φ‡(y, x) ⟺ ∀u, v. Φ(u, v) ⇒ derr_B(y, v) ∧ derr_A(u, x)`.
    pub fn ddag(&self) -> Prelation {
        let pairs = self.pairs();
        let rows = (0..self.cod.size())
            .map(|y| {
                (0..self.dom.size())
                    .filter(|&x| pairs.iter().all(|&(u, v)| self.cod.derr(y, v) && self.dom.derr(u, x)))
                    .fold(0, |s, x| s | bit(x))
            })
            .collect();
        Prelation { dom: self.cod.clone(), cod: self.dom.clone(), rows }
    }

    /// Converse through maximal generators, then closed as `B ↘ A`.
    ///
    /// `Φ†(y, x)` is seeded when `derr(y, w)` for a maximal `w ∈ Φ_•(x)`.
    pub fn converse(&self) -> Prelation {
        let mut seeds = vec![0; self.cod.size()];
        for x in 0..self.dom.size() {
            for w in members(self.cod.maximal(self.rows[x])) {
                for y in members(self.cod.up(w)) {
                    seeds[y] |= bit(x);
                }
            }
        }
        Prelation::close_rows(self.cod.clone(), self.dom.clone(), &seeds)
    }

    /// Totality, single-valuedness up to equivalence, and a representative.
    ///
    /// A nonempty fiber is single-valued when it is a principal lower set.
    pub fn is_map(&self) -> MapVerdict {
        let total = self.rows.iter().all(|&r| r != 0);
        let gens: Vec<Option<usize>> = self.rows.iter().map(|&r| self.cod.principal_generator(r)).collect();
        let single_valued = self.rows.iter().zip(&gens).all(|(&r, g)| r == 0 || g.is_some());
        let representative = if total && single_valued {
            Some(gens.into_iter().map(|g| g.expect("principal fiber")).collect())
        } else {
            None
        };
        MapVerdict { total, single_valued, representative }
    }
}

/// `δ: A↘A×A`, `!: A↘𝟙`, `ϱ: A×A↘A` and `¡: 𝟙↘A`.
#[derive(Clone, Debug)]
pub struct Diagonals {
    pub delta: Prelation,
    pub bang: Prelation,
    pub rho: Prelation,
    pub inv_bang: Prelation,
}

pub fn diagonal_structure(p: &Preorder) -> Result<Diagonals> {
    let n = p.size();
    let pp = Preorder::product(p, p)?;
    let delta_rows = (0..n)
        .map(|x| {
            let d = p.down(x);
            members(d).fold(0, |s, y| s | d << (y * n))
        })
        .collect();
    let delta = Prelation::from_rows(p.clone(), pp.clone(), delta_rows)?;
    let bang = Prelation::full(p.clone(), Preorder::unit());
    let rho_rows = (0..n * n).map(|i| p.down(i / n) & p.down(i % n)).collect();
    let rho = Prelation::from_rows(pp, p.clone(), rho_rows)?;
    let bottom = (0..n).filter(|&x| (0..n).all(|u| p.derr(u, x))).fold(0, |s, x| s | bit(x));
    let inv_bang = Prelation::from_lower(p, bottom)?;
    Ok(Diagonals { delta, bang, rho, inv_bang })
}

/// The four extensions `Φ_*`, `Φ^*`, `Φ_#`, `Φ^#` over subsets.
pub struct Galois<'a> {
    phi: &'a Prelation,
    dag: Prelation,
}

impl<'a> Galois<'a> {
    pub fn new(phi: &'a Prelation) -> Galois<'a> {
        Galois { phi, dag: phi.ddag() }
    }

    /// `Φ_*(V) = ⋂_{a∈V} Φ_•(a)`.
    pub fn lower_star(&self, v: Set) -> Set {
        members(v).fold(self.phi.cod.all(), |acc, a| acc & self.phi.row(a))
    }

    /// `Φ^*(L) = ⋂_{b∈L} Φ^•(b)`.
    pub fn upper_star(&self, l: Set) -> Set {
        members(l).fold(self.phi.dom.all(), |acc, b| acc & self.phi.column(b))
    }

    /// `Φ_#(W) = ⋂_{b∈W} {x | Φ‡(b, x)}`.
    pub fn lower_sharp(&self, w: Set) -> Set {
        members(w).fold(self.phi.dom.all(), |acc, b| acc & self.dag.row(b))
    }

    /// `Φ^#(K) = ⋂_{a∈K} {y | Φ‡(y, a)}`.
    pub fn upper_sharp(&self, k: Set) -> Set {
        members(k).fold(self.phi.cod.all(), |acc, a| acc & self.dag.column(a))
    }
}

/// Cup `η: 𝟙 ↘ P^o×P` and cap `ε: P×P^o ↘ 𝟙`.
#[derive(Clone, Debug)]
pub struct Compact {
    pub eta: Prelation,
    pub eps: Prelation,
}

pub fn compact_cups(p: &Preorder) -> Result<Compact> {
    let n = p.size();
    let op = p.opposite();
    let pairs = |a: &Preorder, b: &Preorder| Preorder::product(a, b);
    let rel: Set = (0..n * n).filter(|&i| p.derr(i / n, i % n)).fold(0, |s, i| s | bit(i));
    let eta = Prelation::from_lower(&pairs(&op, p)?, rel)?;
    let eps = Prelation::from_upper(&pairs(p, &op)?, rel)?;
    Ok(Compact { eta, eps })
}

fn iso(dom: &Preorder, cod: &Preorder, f: impl Fn(usize) -> usize) -> Result<Prelation> {
    let table: Vec<usize> = (0..dom.size()).map(f).collect();
    Prelation::from_map(dom.clone(), cod.clone(), &table)
}

/// `P ≅ P×𝟙 → P×(P^o×P) ≅ (P×P^o)×P → 𝟙×P ≅ P`.
pub fn snake_left(p: &Preorder, c: &Compact) -> Result<Prelation> {
    let n = p.size();
    let op = p.opposite();
    let one = Preorder::unit();
    let p1 = Preorder::product(p, &one)?;
    let opp = Preorder::product(&op, p)?;
    let p_opp = Preorder::product(p, &opp)?;
    let pop = Preorder::product(p, &op)?;
    let pop_p = Preorder::product(&pop, p)?;
    let one_p = Preorder::product(&one, p)?;
    let s1 = iso(p, &p1, |x| x)?;
    let s2 = Prelation::tensor(&Prelation::identity(p), &c.eta)?;
    // (a, (b, c)) ↦ ((a, b), c)
    let s3 = iso(&p_opp, &pop_p, |i| i)?;
    let s4 = Prelation::tensor(&c.eps, &Prelation::identity(p))?;
    let s5 = iso(&one_p, p, |x| x)?;
    debug_assert_eq!(p_opp.size(), n * n * n);
    s1.compose(&s2)?.compose(&s3)?.compose(&s4)?.compose(&s5)
}

/// `P^o ≅ 𝟙×P^o → (P^o×P)×P^o ≅ P^o×(P×P^o) → P^o×𝟙 ≅ P^o`.
pub fn snake_right(p: &Preorder, c: &Compact) -> Result<Prelation> {
    let op = p.opposite();
    let one = Preorder::unit();
    let one_op = Preorder::product(&one, &op)?;
    let opp = Preorder::product(&op, p)?;
    let opp_op = Preorder::product(&opp, &op)?;
    let pop = Preorder::product(p, &op)?;
    let op_pop = Preorder::product(&op, &pop)?;
    let op_one = Preorder::product(&op, &one)?;
    let s1 = iso(&op, &one_op, |x| x)?;
    let s2 = Prelation::tensor(&c.eta, &Prelation::identity(&op))?;
    let s3 = iso(&opp_op, &op_pop, |i| i)?;
    let s4 = Prelation::tensor(&Prelation::identity(&op), &c.eps)?;
    let s5 = iso(&op_one, &op, |x| x)?;
    s1.compose(&s2)?.compose(&s3)?.compose(&s4)?.compose(&s5)
}
