//! Line-oriented text formats for structures and lexicons.
//!
//! Structure files:
//!
//! ```text
//! # comment
//! @preorder C2
//! elements: a b
//! le a b            # derr(a, b)
//! @monoid           # attaches to the preceding preorder
//! mul a a a         # ∇ generator
//! unit b            # ⊥ generator
//! @prelation C2 C2
//! rel a b
//! ```
//!
//! Lexicon files:
//!
//! ```text
//! @types n s
//! @order
//! n <= s
//! @lex
//! John : n
//! likes : n^r s n^l
//! @target s
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grammar::Lexicon;
use crate::monoid::PrelMonoid;
use crate::order::{members, Preorder};
use crate::prelation::Prelation;

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Strip a trailing comment and surrounding whitespace.
fn content(raw: &str) -> &str {
    raw.split('#').next().unwrap_or_default().trim()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedPreorder {
    pub name: Option<String>,
    pub order: Preorder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedMonoid {
    /// Index into [`StructureFile::preorders`].
    pub preorder: usize,
    pub monoid: PrelMonoid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedPrelation {
    pub dom: String,
    pub cod: String,
    pub prelation: Prelation,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureFile {
    pub preorders: Vec<NamedPreorder>,
    pub monoids: Vec<NamedMonoid>,
    pub prelations: Vec<NamedPrelation>,
}

impl StructureFile {
    /// The only monoid in the file.
    pub fn single_monoid(&self) -> Result<&PrelMonoid> {
        match self.monoids.as_slice() {
            [m] => Ok(&m.monoid),
            [] => Err(err(0, "no @monoid block")),
            _ => Err(err(0, "more than one @monoid block")),
        }
    }

    fn preorder_named(&self, name: &str) -> Option<&Preorder> {
        self.preorders.iter().rev().find(|p| p.name.as_deref() == Some(name)).map(|p| &p.order)
    }
}

enum Block {
    None,
    Preorder { line: usize, name: Option<String>, elements: Option<Vec<String>>, le: Vec<(usize, usize)> },
    Monoid { line: usize, mul: Vec<(usize, usize, usize)>, unit: Vec<usize> },
    Prelation { line: usize, dom: String, cod: String, rel: Vec<(usize, usize)> },
}

fn lookup(names: &[String], token: &str, line: usize) -> Result<usize> {
    names.iter().position(|n| n == token).ok_or_else(|| err(line, format!("unknown element `{token}`")))
}

fn args<'a>(line: usize, rest: &'a str, k: usize, what: &str) -> Result<Vec<&'a str>> {
    let v: Vec<&str> = rest.split_whitespace().collect();
    if v.len() != k {
        return Err(err(line, format!("`{what}` takes {k} arguments, got {}", v.len())));
    }
    Ok(v)
}

pub fn parse_structure(text: &str) -> Result<StructureFile> {
    let mut file = StructureFile::default();
    let mut block = Block::None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = content(raw);
        if body.is_empty() {
            continue;
        }
        let (head, rest) = body.split_once(char::is_whitespace).map(|(h, r)| (h, r.trim())).unwrap_or((body, ""));
        if head.starts_with('@') {
            finish(&mut file, std::mem::replace(&mut block, Block::None))?;
            block = match head {
                "@preorder" => {
                    let name = match rest.split_whitespace().collect::<Vec<_>>().as_slice() {
                        [] => None,
                        [n] => Some(n.to_string()),
                        _ => return Err(err(line, "`@preorder` takes at most one name")),
                    };
                    Block::Preorder { line, name, elements: None, le: Vec::new() }
                }
                "@monoid" => {
                    if !rest.is_empty() {
                        return Err(err(line, "`@monoid` takes no arguments"));
                    }
                    if file.preorders.is_empty() {
                        return Err(err(line, "`@monoid` before any `@preorder`"));
                    }
                    Block::Monoid { line, mul: Vec::new(), unit: Vec::new() }
                }
                "@prelation" => {
                    let v = args(line, rest, 2, "@prelation")?;
                    for n in &v {
                        if file.preorder_named(n).is_none() {
                            return Err(err(line, format!("unknown preorder `{n}`")));
                        }
                    }
                    Block::Prelation { line, dom: v[0].into(), cod: v[1].into(), rel: Vec::new() }
                }
                other => return Err(err(line, format!("unknown directive `{other}`"))),
            };
            continue;
        }
        match &mut block {
            Block::Preorder { elements, le, .. } => {
                if let Some(list) = body.strip_prefix("elements:") {
                    if elements.is_some() {
                        return Err(err(line, "`elements:` given twice"));
                    }
                    let names: Vec<String> = list.split_whitespace().map(str::to_string).collect();
                    if names.is_empty() {
                        return Err(err(line, "empty element list"));
                    }
                    if names.len() > crate::order::MAX_SIZE {
                        return Err(err(line, format!("more than {} elements", crate::order::MAX_SIZE)));
                    }
                    for (k, n) in names.iter().enumerate() {
                        if names[..k].contains(n) {
                            return Err(err(line, format!("element `{n}` listed twice")));
                        }
                    }
                    *elements = Some(names);
                } else if head == "le" {
                    let names = elements.as_ref().ok_or_else(|| err(line, "`le` before `elements:`"))?;
                    let v = args(line, rest, 2, "le")?;
                    le.push((lookup(names, v[0], line)?, lookup(names, v[1], line)?));
                } else {
                    return Err(err(line, format!("unexpected `{head}` in @preorder block")));
                }
            }
            Block::Monoid { mul, unit, .. } => {
                let p = &file.preorders.last().expect("checked at block start").order;
                let names: Vec<String> = (0..p.size()).map(|x| p.label(x)).collect();
                match head {
                    "mul" => {
                        let v = args(line, rest, 3, "mul")?;
                        mul.push((lookup(&names, v[0], line)?, lookup(&names, v[1], line)?, lookup(&names, v[2], line)?));
                    }
                    "unit" => {
                        let v = args(line, rest, 1, "unit")?;
                        unit.push(lookup(&names, v[0], line)?);
                    }
                    _ => return Err(err(line, format!("unexpected `{head}` in @monoid block"))),
                }
            }
            Block::Prelation { dom, cod, rel, .. } => {
                if head != "rel" {
                    return Err(err(line, format!("unexpected `{head}` in @prelation block")));
                }
                let (d, c) = (file.preorder_named(dom).expect("checked"), file.preorder_named(cod).expect("checked"));
                let v = args(line, rest, 2, "rel")?;
                let dn: Vec<String> = (0..d.size()).map(|x| d.label(x)).collect();
                let cn: Vec<String> = (0..c.size()).map(|x| c.label(x)).collect();
                rel.push((lookup(&dn, v[0], line)?, lookup(&cn, v[1], line)?));
            }
            Block::None => return Err(err(line, format!("`{head}` outside any block"))),
        }
    }
    finish(&mut file, block)?;
    Ok(file)
}

fn finish(file: &mut StructureFile, block: Block) -> Result<()> {
    match block {
        Block::None => {}
        Block::Preorder { line, name, elements, le } => {
            let names = elements.ok_or_else(|| err(line, "@preorder block without `elements:`"))?;
            let order = Preorder::close(names.len(), &le)
                .and_then(|p| p.with_names(names))
                .map_err(|e| err(line, e.to_string()))?;
            file.preorders.push(NamedPreorder { name, order });
        }
        Block::Monoid { line, mul, unit } => {
            let idx = file.preorders.len() - 1;
            let p = file.preorders[idx].order.clone();
            let monoid = PrelMonoid::build(p, &mul, &unit).map_err(|e| err(line, e.to_string()))?;
            file.monoids.push(NamedMonoid { preorder: idx, monoid });
        }
        Block::Prelation { line, dom, cod, rel } => {
            let d = file.preorder_named(&dom).expect("checked").clone();
            let c = file.preorder_named(&cod).expect("checked").clone();
            let prelation = Prelation::close(d, c, &rel).map_err(|e| err(line, e.to_string()))?;
            file.prelations.push(NamedPrelation { dom, cod, prelation });
        }
    }
    Ok(())
}

pub fn write_preorder(name: Option<&str>, p: &Preorder) -> String {
    let mut out = String::new();
    match name {
        Some(n) => writeln!(out, "@preorder {n}"),
        None => writeln!(out, "@preorder"),
    }
    .expect("writing to a string");
    let names: Vec<String> = (0..p.size()).map(|x| p.label(x)).collect();
    let _ = writeln!(out, "elements: {}", names.join(" "));
    for x in 0..p.size() {
        for y in members(p.down(x)) {
            if x != y {
                let _ = writeln!(out, "le {} {}", names[x], names[y]);
            }
        }
    }
    out
}

/// A preorder block followed by a monoid block with maximal generators only.
pub fn write_monoid(name: Option<&str>, m: &PrelMonoid) -> String {
    let p = m.carrier();
    let mut out = write_preorder(name, p);
    out.push_str("@monoid\n");
    let n = m.size();
    for x in 0..n {
        for y in 0..n {
            for z in members(p.maximal(m.fiber(x, y))) {
                let _ = writeln!(out, "mul {} {} {}", p.label(x), p.label(y), p.label(z));
            }
        }
    }
    for t in members(p.maximal(m.unit())) {
        let _ = writeln!(out, "unit {}", p.label(t));
    }
    out
}

/// A `@prelation` block; both preorders must be declared earlier under these names.
pub fn write_prelation(dom: &str, cod: &str, phi: &Prelation) -> String {
    let mut out = format!("@prelation {dom} {cod}\n");
    for x in 0..phi.dom().size() {
        for y in members(phi.cod().maximal(phi.row(x))) {
            let _ = writeln!(out, "rel {} {}", phi.dom().label(x), phi.cod().label(y));
        }
    }
    out
}

pub fn parse_lexicon(text: &str) -> Result<Lexicon> {
    #[derive(PartialEq)]
    enum Section {
        Top,
        Order,
        Lex,
    }
    let mut section = Section::Top;
    let mut types: Option<(usize, Vec<String>)> = None;
    let mut target: Option<(usize, String)> = None;
    let mut window: Option<(usize, i32)> = None;
    let mut order: Vec<(usize, String, String)> = Vec::new();
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = content(raw);
        if body.is_empty() {
            continue;
        }
        let (head, rest) = body.split_once(char::is_whitespace).map(|(h, r)| (h, r.trim())).unwrap_or((body, ""));
        if head.starts_with('@') {
            section = Section::Top;
            match head {
                "@types" => {
                    if types.is_some() {
                        return Err(err(line, "`@types` given twice"));
                    }
                    let v: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                    if v.is_empty() {
                        return Err(err(line, "`@types` needs at least one basic type"));
                    }
                    types = Some((line, v));
                }
                "@order" => section = Section::Order,
                "@lex" => section = Section::Lex,
                "@target" => {
                    let v = args(line, rest, 1, "@target")?;
                    target = Some((line, v[0].to_string()));
                }
                "@window" => {
                    let v = args(line, rest, 1, "@window")?;
                    let w = v[0].parse().map_err(|_| err(line, format!("bad window `{}`", v[0])))?;
                    window = Some((line, w));
                }
                other => return Err(err(line, format!("unknown directive `{other}`"))),
            }
            if !rest.is_empty() && matches!(section, Section::Order | Section::Lex) {
                return Err(err(line, format!("`{head}` takes no arguments")));
            }
            continue;
        }
        match section {
            Section::Order => {
                let (p, q) = body.split_once("<=").ok_or_else(|| err(line, "expected `p <= q`"))?;
                let (p, q) = (p.trim(), q.trim());
                if p.is_empty() || q.is_empty() || p.contains(char::is_whitespace) || q.contains(char::is_whitespace) {
                    return Err(err(line, "expected `p <= q`"));
                }
                order.push((line, p.to_string(), q.to_string()));
            }
            Section::Lex => {
                let (w, t) = body.split_once(':').ok_or_else(|| err(line, "expected `word : types`"))?;
                entries.push((line, w.trim().to_string(), t.trim().to_string()));
            }
            Section::Top => return Err(err(line, format!("`{head}` outside any block"))),
        }
    }
    let (tline, basics) = types.ok_or_else(|| err(0, "missing `@types`"))?;
    let (gline, gname) = target.ok_or_else(|| err(0, "missing `@target`"))?;
    let id = |name: &str, line: usize| -> Result<usize> {
        basics.iter().position(|b| b == name).ok_or_else(|| err(line, format!("undeclared basic `{name}`")))
    };
    let leq = order.iter().map(|(l, p, q)| Ok((id(p, *l)?, id(q, *l)?))).collect::<Result<Vec<_>>>()?;
    let t = id(&gname, gline)?;
    let mut lex = Lexicon::new(basics.clone(), leq, t).map_err(|e| err(tline, e.to_string()))?;
    if let Some((wl, w)) = window {
        lex = lex.with_window(w).map_err(|e| err(wl, e.to_string()))?;
    }
    for (line, w, t) in entries {
        lex.add_entry_text(&w, &t).map_err(|e| err(line, e.to_string()))?;
    }
    Ok(lex)
}

pub fn write_lexicon(lex: &Lexicon) -> String {
    let b = lex.basics();
    let mut out = format!("@types {}\n", b.join(" "));
    if lex.window() != crate::grammar::DEFAULT_WINDOW {
        let _ = writeln!(out, "@window {}", lex.window());
    }
    if !lex.leq_generators().is_empty() {
        out.push_str("@order\n");
        for &(p, q) in lex.leq_generators() {
            let _ = writeln!(out, "{} <= {}", b[p], b[q]);
        }
    }
    out.push_str("@lex\n");
    for (w, ts) in lex.entries() {
        for t in ts {
            let _ = writeln!(out, "{w} : {}", lex.show_string(t));
        }
    }
    let _ = writeln!(out, "@target {}", b[lex.target()]);
    out
}
