//! Free-pregroup recognition with contraction-only derivations.
//!
//! A simple type `p^(k)` is a basic type with an integer adjoint exponent:
//! `-1` is `p^l`, `+1` is `p^r`. Two adjacent types `a b` contract when
//! `b.exp = a.exp + 1` and the bases are ordered according to the parity of
//! `a.exp`. The grammar-side order `p ≤ q` is stored as `derr(q, p)` in the
//! underlying [`Preorder`].

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::Preorder;

pub const DEFAULT_WINDOW: i32 = 3;

/// Longest concatenated string the rewriting oracle accepts.
pub const ORACLE_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SimpleType {
    pub base: usize,
    pub exp: i32,
}

impl SimpleType {
    pub fn new(base: usize, exp: i32) -> SimpleType {
        SimpleType { base, exp }
    }
}

pub type TypeString = Vec<SimpleType>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexicon {
    basics: Vec<String>,
    leq: Vec<(usize, usize)>,
    order: Preorder,
    entries: Vec<(String, Vec<TypeString>)>,
    target: usize,
    window: i32,
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

impl Lexicon {
    /// `leq` holds generating pairs `(p, q)` read as `p ≤ q`.
    pub fn new(basics: Vec<String>, leq: Vec<(usize, usize)>, target: usize) -> Result<Lexicon> {
        if basics.is_empty() {
            return Err(Error::Grammar("no basic types declared".into()));
        }
        for (i, b) in basics.iter().enumerate() {
            if !is_ident(b) {
                return Err(Error::Grammar(format!("`{b}` is not a valid basic type name")));
            }
            if basics[..i].contains(b) {
                return Err(Error::Grammar(format!("basic type `{b}` declared twice")));
            }
        }
        let n = basics.len();
        if target >= n {
            return Err(Error::Grammar(format!("target {target} is not a basic type")));
        }
        let gens: Vec<(usize, usize)> = leq.iter().map(|&(p, q)| (q, p)).collect();
        let order = Preorder::close(n, &gens).map_err(|e| Error::Grammar(e.to_string()))?;
        Ok(Lexicon { basics, leq, order, entries: Vec::new(), target, window: DEFAULT_WINDOW })
    }

    pub fn with_window(mut self, window: i32) -> Result<Lexicon> {
        if let Some(t) = self.entries.iter().flat_map(|(_, ts)| ts.iter().flatten()).find(|t| t.exp.abs() > window) {
            return Err(Error::Grammar(format!("{} exceeds window {window}", self.show(t))));
        }
        self.window = window;
        Ok(self)
    }

    pub fn basics(&self) -> &[String] {
        &self.basics
    }

    pub fn leq_generators(&self) -> &[(usize, usize)] {
        &self.leq
    }

    /// The base order in the core convention.
    pub fn order(&self) -> &Preorder {
        &self.order
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn window(&self) -> i32 {
        self.window
    }

    pub fn entries(&self) -> &[(String, Vec<TypeString>)] {
        &self.entries
    }

    pub fn entry(&self, word: &str) -> Option<&[TypeString]> {
        self.entries.iter().find(|(w, _)| w == word).map(|(_, ts)| ts.as_slice())
    }

    pub fn base_id(&self, name: &str) -> Option<usize> {
        self.basics.iter().position(|b| b == name)
    }

    /// `p ≤ q` in the grammar order.
    pub fn base_leq(&self, p: usize, q: usize) -> bool {
        self.order.derr(q, p)
    }

    pub fn add_entry(&mut self, word: &str, t: TypeString) -> Result<()> {
        if word.is_empty() || word.chars().any(|c| c.is_whitespace() || c == ':') {
            return Err(Error::Grammar(format!("`{word}` is not a valid word")));
        }
        if t.is_empty() {
            return Err(Error::Grammar(format!("empty type for `{word}`")));
        }
        if let Some(s) = t.iter().find(|s| s.base >= self.basics.len()) {
            return Err(Error::Grammar(format!("undeclared basic {}", s.base)));
        }
        if let Some(s) = t.iter().find(|s| s.exp.abs() > self.window) {
            return Err(Error::Grammar(format!("{} exceeds window {}", self.show(s), self.window)));
        }
        match self.entries.iter_mut().find(|(w, _)| w == word) {
            Some((_, ts)) => ts.push(t),
            None => self.entries.push((word.to_string(), vec![t])),
        }
        Ok(())
    }

    pub fn add_entry_text(&mut self, word: &str, text: &str) -> Result<()> {
        let t = self.parse_type(text)?;
        self.add_entry(word, t)
    }

    /// Tokens `n`, `n^l`, `n^rr`, `n^l^l`, `n^(-2)` separated by whitespace.
    pub fn parse_type(&self, text: &str) -> Result<TypeString> {
        let out = text.split_whitespace().map(|tok| self.parse_token(tok)).collect::<Result<TypeString>>()?;
        if out.is_empty() {
            return Err(Error::Grammar("empty type string".into()));
        }
        Ok(out)
    }

    fn parse_token(&self, tok: &str) -> Result<SimpleType> {
        let mut parts = tok.split('^');
        let name = parts.next().unwrap_or_default();
        let base = self.base_id(name).ok_or_else(|| Error::Grammar(format!("undeclared basic `{name}` in `{tok}`")))?;
        let mut exp: i32 = 0;
        for suffix in parts {
            if let Some(inner) = suffix.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                let lit = inner.replace('−', "-");
                exp += lit.parse::<i32>().map_err(|_| Error::Grammar(format!("bad exponent `{inner}` in `{tok}`")))?;
            } else if !suffix.is_empty() && suffix.chars().all(|c| c == 'l' || c == 'r') {
                exp += suffix.chars().map(|c| if c == 'l' { -1 } else { 1 }).sum::<i32>();
            } else {
                return Err(Error::Grammar(format!("malformed suffix `^{suffix}` in `{tok}`")));
            }
        }
        if exp.abs() > self.window {
            return Err(Error::Grammar(format!("exponent {exp} of `{tok}` exceeds window {}", self.window)));
        }
        Ok(SimpleType { base, exp })
    }

    pub fn show(&self, t: &SimpleType) -> String {
        let b = &self.basics[t.base];
        match t.exp {
            0 => b.clone(),
            -2 => format!("{b}^ll"),
            -1 => format!("{b}^l"),
            1 => format!("{b}^r"),
            2 => format!("{b}^rr"),
            k => format!("{b}^({k})"),
        }
    }

    pub fn show_string(&self, s: &[SimpleType]) -> String {
        s.iter().map(|t| self.show(t)).collect::<Vec<_>>().join(" ")
    }
}

pub fn contracts(a: SimpleType, b: SimpleType, lex: &Lexicon) -> bool {
    b.exp == a.exp + 1
        && if a.exp.rem_euclid(2) == 0 { lex.base_leq(a.base, b.base) } else { lex.base_leq(b.base, a.base) }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    /// Chosen entry index per word.
    pub choice: Vec<usize>,
    pub types: TypeString,
    /// Contracted positions `(i, j)`, `i < j`, zero-based.
    pub links: Vec<(usize, usize)>,
    pub residual: usize,
}

/// `null[i][j]`: positions `i..j` (half open) contract away entirely.
struct Nullable<'a> {
    s: &'a [SimpleType],
    lex: &'a Lexicon,
    table: Vec<Vec<bool>>,
}

impl<'a> Nullable<'a> {
    fn new(s: &'a [SimpleType], lex: &'a Lexicon) -> Nullable<'a> {
        let n = s.len();
        let mut table = vec![vec![false; n + 1]; n + 1];
        for (i, row) in table.iter_mut().enumerate() {
            row[i] = true;
        }
        for len in (2..=n).step_by(2) {
            for i in 0..=n - len {
                let j = i + len;
                table[i][j] = (i + 1..j)
                    .step_by(2)
                    .any(|k| contracts(s[i], s[k], lex) && table[i + 1][k] && table[k + 1][j]);
            }
        }
        Nullable { s, lex, table }
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.table[i][j]
    }

    /// Leftmost-partner matching of a nullable interval.
    fn first(&self, i: usize, j: usize, out: &mut Vec<(usize, usize)>) {
        if i >= j {
            return;
        }
        let k = (i + 1..j)
            .step_by(2)
            .find(|&k| contracts(self.s[i], self.s[k], self.lex) && self.table[i + 1][k] && self.table[k + 1][j])
            .expect("interval is nullable");
        out.push((i, k));
        self.first(i + 1, k, out);
        self.first(k + 1, j, out);
    }

    /// Every matching of a nullable interval.
    fn all(&self, i: usize, j: usize) -> Vec<Vec<(usize, usize)>> {
        if i >= j {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for k in (i + 1..j).step_by(2) {
            if contracts(self.s[i], self.s[k], self.lex) && self.table[i + 1][k] && self.table[k + 1][j] {
                for inner in self.all(i + 1, k) {
                    for outer in self.all(k + 1, j) {
                        let mut m = vec![(i, k)];
                        m.extend(inner.iter().copied());
                        m.extend(outer.iter().copied());
                        out.push(m);
                    }
                }
            }
        }
        out
    }
}

fn accepting_residuals<'a>(lex: &'a Lexicon, s: &'a [SimpleType], nl: &'a Nullable) -> impl Iterator<Item = usize> + 'a {
    (0..s.len()).filter(move |&r| {
        s[r].exp == 0 && lex.base_leq(s[r].base, lex.target) && nl.get(0, r) && nl.get(r + 1, s.len())
    })
}

/// Matching and residual for one type string, leftmost choices first.
pub fn reduce(lex: &Lexicon, s: &[SimpleType]) -> Option<(Vec<(usize, usize)>, usize)> {
    let nl = Nullable::new(s, lex);
    let r = accepting_residuals(lex, s, &nl).next()?;
    let mut links = Vec::new();
    nl.first(0, r, &mut links);
    nl.first(r + 1, s.len(), &mut links);
    links.sort_unstable();
    Some((links, r))
}

fn lookup<'a>(lex: &'a Lexicon, sentence: &[&str]) -> Result<Vec<&'a [TypeString]>> {
    if sentence.is_empty() {
        return Err(Error::Grammar("empty sentence".into()));
    }
    if lex.entries.is_empty() {
        return Err(Error::Grammar("empty lexicon".into()));
    }
    sentence
        .iter()
        .map(|w| lex.entry(w).ok_or_else(|| Error::Grammar(format!("unknown word `{w}`"))))
        .collect()
}

/// Per-word entry choices in lexicographic order, first word slowest.
fn choices(options: &[&[TypeString]]) -> impl Iterator<Item = Vec<usize>> {
    let sizes: Vec<usize> = options.iter().map(|o| o.len()).collect();
    let total: usize = sizes.iter().product();
    (0..total).map(move |mut code| {
        let mut c = vec![0; sizes.len()];
        for i in (0..sizes.len()).rev() {
            c[i] = code % sizes[i];
            code /= sizes[i];
        }
        c
    })
}

fn concat(options: &[&[TypeString]], choice: &[usize]) -> TypeString {
    options.iter().zip(choice).flat_map(|(o, &c)| o[c].iter().copied()).collect()
}

/// First accepting lexical choice, with its leftmost matching.
pub fn recognize(lex: &Lexicon, sentence: &[&str]) -> Result<Option<ReductionTrace>> {
    let options = lookup(lex, sentence)?;
    for choice in choices(&options) {
        let types = concat(&options, &choice);
        if let Some((links, residual)) = reduce(lex, &types) {
            return Ok(Some(ReductionTrace { choice, types, links, residual }));
        }
    }
    Ok(None)
}

/// Every accepting trace: all lexical choices, residuals and matchings.
pub fn recognize_all(lex: &Lexicon, sentence: &[&str]) -> Result<Vec<ReductionTrace>> {
    let options = lookup(lex, sentence)?;
    let mut out = Vec::new();
    for choice in choices(&options) {
        let types = concat(&options, &choice);
        let nl = Nullable::new(&types, lex);
        for r in accepting_residuals(lex, &types, &nl).collect::<Vec<_>>() {
            for left in nl.all(0, r) {
                for right in nl.all(r + 1, types.len()) {
                    let mut links: Vec<(usize, usize)> = left.iter().chain(&right).copied().collect();
                    links.sort_unstable();
                    out.push(ReductionTrace { choice: choice.clone(), types: types.clone(), links, residual: r });
                }
            }
        }
    }
    Ok(out)
}

/// Check every trace invariant against the lexicon.
pub fn validate_trace(lex: &Lexicon, trace: &ReductionTrace) -> Result<()> {
    let s = &trace.types;
    let bad = |m: String| Err(Error::Grammar(format!("inconsistent trace: {m}")));
    if trace.residual >= s.len() {
        return bad("residual out of range".into());
    }
    let mut seen = vec![false; s.len()];
    seen[trace.residual] = true;
    for &(i, j) in &trace.links {
        if i >= j || j >= s.len() {
            return bad(format!("link ({i},{j}) malformed"));
        }
        if seen[i] || seen[j] {
            return bad(format!("position reused by link ({i},{j})"));
        }
        seen[i] = true;
        seen[j] = true;
        if !contracts(s[i], s[j], lex) {
            return bad(format!("({i},{j}) does not contract"));
        }
    }
    if seen.iter().any(|&b| !b) {
        return bad("unmatched position".into());
    }
    for &(i, j) in &trace.links {
        for &(k, l) in &trace.links {
            if i < k && k < j && j < l {
                return bad(format!("links ({i},{j}) and ({k},{l}) cross"));
            }
        }
        if i < trace.residual && trace.residual < j {
            return bad(format!("residual sits under link ({i},{j})"));
        }
    }
    let r = s[trace.residual];
    if r.exp != 0 || !lex.base_leq(r.base, lex.target) {
        return bad("residual does not reach the target".into());
    }
    Ok(())
}

/// Breadth-first search over adjacent cancellations `p^(k) p^(k+1) → ε` and
/// single-type steps `p^(k) → q^(k)` (`k` even and `p ≤ q`, or `k` odd and
/// `q ≤ p`) using only the declared order generators, until `target^(0)`.
pub fn oracle_reduces(lex: &Lexicon, s: &[SimpleType]) -> Result<bool> {
    oracle_reaches(lex, s, &[SimpleType::new(lex.target, 0)])
}

/// The same search with an arbitrary goal string.
pub fn oracle_reaches(lex: &Lexicon, s: &[SimpleType], goal: &[SimpleType]) -> Result<bool> {
    if s.len() > ORACLE_LIMIT {
        return Err(Error::Limit(format!("oracle refuses strings longer than {ORACLE_LIMIT}")));
    }
    let mut seen: HashSet<TypeString> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(s.to_vec());
    queue.push_back(s.to_vec());
    while let Some(cur) = queue.pop_front() {
        if cur == goal {
            return Ok(true);
        }
        let mut next = Vec::new();
        for i in 0..cur.len().saturating_sub(1) {
            if cur[i].base == cur[i + 1].base && cur[i + 1].exp == cur[i].exp + 1 {
                let mut t = cur.clone();
                t.drain(i..i + 2);
                next.push(t);
            }
        }
        for i in 0..cur.len() {
            for &(p, q) in &lex.leq {
                let t = cur[i];
                let even = t.exp.rem_euclid(2) == 0;
                let to = if even && t.base == p {
                    q
                } else if !even && t.base == q {
                    p
                } else {
                    continue;
                };
                let mut u = cur.clone();
                u[i].base = to;
                next.push(u);
            }
        }
        for t in next {
            if seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
    }
    Ok(false)
}

pub fn oracle_recognize(lex: &Lexicon, sentence: &[&str]) -> Result<bool> {
    let options = lookup(lex, sentence)?;
    for choice in choices(&options) {
        if oracle_reduces(lex, &concat(&options, &choice))? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn columns(tokens: &[String]) -> Vec<usize> {
    let mut col = 0;
    tokens
        .iter()
        .map(|t| {
            let w = t.chars().count();
            let c = col + (w - 1) / 2;
            col += w + 1;
            c
        })
        .collect()
}

/// Types on one line, arcs `\__/` under contracted pairs and `|` under the
/// residual on the next. A trace without links renders the types only.
pub fn render_trace(lex: &Lexicon, trace: &ReductionTrace) -> Result<String> {
    validate_trace(lex, trace)?;
    let tokens: Vec<String> = trace.types.iter().map(|t| lex.show(t)).collect();
    let mut out = tokens.join(" ");
    if trace.links.is_empty() {
        return Ok(out);
    }
    let cols = columns(&tokens);
    let width = out.chars().count();
    let mut line = vec![' '; width];
    let mut links = trace.links.clone();
    // Outer arcs first so nested ones overwrite their filler.
    links.sort_by_key(|&(i, j)| (i, std::cmp::Reverse(j)));
    for (i, j) in links {
        for c in line.iter_mut().take(cols[j]).skip(cols[i] + 1) {
            *c = '_';
        }
        line[cols[i]] = '\\';
        line[cols[j]] = '/';
    }
    line[cols[trace.residual]] = '|';
    let _ = write!(out, "\n{}", line.into_iter().collect::<String>().trim_end());
    Ok(out)
}

/// Recover links and residual from a rendering.
pub fn parse_rendering(text: &str) -> Result<(Vec<(usize, usize)>, Option<usize>)> {
    let mut lines = text.lines();
    let types = lines.next().ok_or_else(|| Error::Grammar("empty rendering".into()))?;
    let tokens: Vec<String> = types.split(' ').map(str::to_string).collect();
    let cols = columns(&tokens);
    let Some(arcs) = lines.next() else { return Ok((Vec::new(), None)) };
    let at = |c: usize| cols.iter().position(|&k| k == c).ok_or_else(|| Error::Grammar(format!("glyph at column {c} not under a type")));
    let mut stack = Vec::new();
    let mut links = Vec::new();
    let mut residual = None;
    for (c, g) in arcs.chars().enumerate() {
        match g {
            '\\' => stack.push(at(c)?),
            '/' => {
                let i = stack.pop().ok_or_else(|| Error::Grammar(format!("unopened arc at column {c}")))?;
                links.push((i, at(c)?));
            }
            '|' => residual = Some(at(c)?),
            '_' | ' ' => {}
            other => return Err(Error::Grammar(format!("unexpected glyph `{other}`"))),
        }
    }
    if !stack.is_empty() {
        return Err(Error::Grammar("unclosed arc".into()));
    }
    links.sort_unstable();
    Ok((links, residual))
}
