//! Line-oriented structure documents.
//!
//! ```text
//! space Y2
//! signature: f+ g-
//! points: u1 u2
//! order: u1<u2
//! map f: u1->u2 u2->u2
//! map g: u1->u2 u2->u1
//! ```
//!
//! The header keyword is `space`, `algebra`, `poset` or `ddp`. Algebras and
//! ddp-algebras list `elements:` (a synonym of `points:`) and their order
//! must be a distributive lattice; a ddp-algebra derives its two operations
//! from the lattice. `#` starts a comment. Names match `[A-Za-z0-9_]+`.

use std::fmt::Write as _;

use crate::birkhoff::DistLattice;
use crate::cornish::{CornishAlgebra, CornishSpace, Polarity, Signature};
use crate::ddp::{ddp_from_lattice, DdpAlgebra};
use crate::error::{Error, Result};
use crate::order::Poset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureKind {
    Space,
    Algebra,
    Poset,
    Ddp,
}

impl StructureKind {
    pub fn keyword(self) -> &'static str {
        match self {
            StructureKind::Space => "space",
            StructureKind::Algebra => "algebra",
            StructureKind::Poset => "poset",
            StructureKind::Ddp => "ddp",
        }
    }

    fn carrier_keyword(self) -> &'static str {
        match self {
            StructureKind::Space | StructureKind::Poset => "points",
            StructureKind::Algebra | StructureKind::Ddp => "elements",
        }
    }

    fn has_maps(self) -> bool {
        matches!(self, StructureKind::Space | StructureKind::Algebra)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Space(CornishSpace),
    Algebra(CornishAlgebra),
    Poset(Poset),
    Ddp(DdpAlgebra),
}

impl Structure {
    pub fn kind(&self) -> StructureKind {
        match self {
            Structure::Space(_) => StructureKind::Space,
            Structure::Algebra(_) => StructureKind::Algebra,
            Structure::Poset(_) => StructureKind::Poset,
            Structure::Ddp(_) => StructureKind::Ddp,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Structure::Space(x) => x.len(),
            Structure::Algebra(a) => a.len(),
            Structure::Poset(p) => p.len(),
            Structure::Ddp(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn order(&self) -> &Poset {
        match self {
            Structure::Space(x) => x.poset(),
            Structure::Algebra(a) => a.lattice().order(),
            Structure::Poset(p) => p,
            Structure::Ddp(a) => a.lattice().order(),
        }
    }
}

/// A structure together with the names of its elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub name: String,
    pub names: Vec<String>,
    /// Full-line comments, without the leading `#`.
    pub comments: Vec<String>,
    pub structure: Structure,
}

impl Document {
    pub fn new(name: impl Into<String>, names: Vec<String>, structure: Structure) -> Result<Self> {
        let name = name.into();
        check_name(&name, 0)?;
        if names.len() != structure.len() {
            return Err(Error::InvalidArgument(format!(
                "{} names for {} elements",
                names.len(),
                structure.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            check_name(n, 0)?;
            if names[..i].contains(n) {
                return Err(Error::InvalidArgument(format!("duplicate name `{n}`")));
            }
        }
        Ok(Document {
            name,
            names,
            comments: Vec::new(),
            structure,
        })
    }

    /// Names `0..n` as `prefix0, prefix1, ...`.
    pub fn numbered(name: impl Into<String>, prefix: &str, structure: Structure) -> Result<Self> {
        let names = (0..structure.len()).map(|i| format!("{prefix}{i}")).collect();
        Document::new(name, names, structure)
    }

    pub fn kind(&self) -> StructureKind {
        self.structure.kind()
    }

    pub fn with_comment(mut self, comment: impl Into<String>) -> Self {
        self.comments.push(comment.into());
        self
    }

    pub fn name_of(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn space(&self) -> Option<&CornishSpace> {
        match &self.structure {
            Structure::Space(x) => Some(x),
            _ => None,
        }
    }

    pub fn algebra(&self) -> Option<&CornishAlgebra> {
        match &self.structure {
            Structure::Algebra(a) => Some(a),
            _ => None,
        }
    }

    pub fn signature(&self) -> Option<&Signature> {
        match &self.structure {
            Structure::Space(x) => Some(x.sig()),
            Structure::Algebra(a) => Some(a.sig()),
            _ => None,
        }
    }

    fn maps(&self) -> &[Vec<usize>] {
        match &self.structure {
            Structure::Space(x) => x.maps(),
            Structure::Algebra(a) => a.ops(),
            _ => &[],
        }
    }
}

fn check_name(name: &str, line: usize) -> Result<()> {
    if !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
        Ok(())
    } else {
        Err(parse_err(line, format!("invalid name `{name}`")))
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct Draft {
    kind: StructureKind,
    name: String,
    header_line: usize,
    signature: Option<(usize, Signature)>,
    names: Option<(usize, Vec<String>)>,
    order: Option<(usize, Vec<(usize, usize)>)>,
    maps: Vec<(usize, String, Vec<(String, String)>)>,
    comments: Vec<String>,
}

impl Draft {
    fn index(&self, name: &str, line: usize) -> Result<usize> {
        let (_, names) = self
            .names
            .as_ref()
            .ok_or_else(|| parse_err(line, "points must be listed before they are used"))?;
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| parse_err(line, format!("unknown point `{name}`")))
    }
}

/// Parses one document. LF and CRLF line endings are accepted.
pub fn parse(text: &str) -> Result<Document> {
    let mut draft: Option<Draft> = None;
    let mut leading_comments = Vec::new();
    for (i, raw) in text.split('\n').enumerate() {
        let line_no = i + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = raw.trim();
        if let Some(c) = trimmed.strip_prefix('#') {
            let c = c.strip_prefix(' ').unwrap_or(c).to_string();
            match draft.as_mut() {
                Some(d) => d.comments.push(c),
                None => leading_comments.push(c),
            }
            continue;
        }
        let line = match trimmed.find('#') {
            Some(p) => trimmed[..p].trim(),
            None => trimmed,
        };
        if line.is_empty() {
            continue;
        }
        let Some(d) = draft.as_mut() else {
            let mut words = line.split_whitespace();
            let kind = match words.next() {
                Some("space") => StructureKind::Space,
                Some("algebra") => StructureKind::Algebra,
                Some("poset") => StructureKind::Poset,
                Some("ddp") => StructureKind::Ddp,
                _ => {
                    return Err(parse_err(
                        line_no,
                        "expected `space NAME`, `algebra NAME`, `poset NAME` or `ddp NAME`",
                    ))
                }
            };
            let name = words
                .next()
                .ok_or_else(|| parse_err(line_no, "missing structure name"))?;
            check_name(name, line_no)?;
            if words.next().is_some() {
                return Err(parse_err(line_no, "unexpected text after the structure name"));
            }
            draft = Some(Draft {
                kind,
                name: name.to_string(),
                header_line: line_no,
                signature: None,
                names: None,
                order: None,
                maps: Vec::new(),
                comments: std::mem::take(&mut leading_comments),
            });
            continue;
        };
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| parse_err(line_no, format!("expected `key: value`, found `{line}`")))?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "signature" => {
                if d.signature.is_some() {
                    return Err(parse_err(line_no, "duplicate signature line"));
                }
                if !d.kind.has_maps() && !value.is_empty() {
                    return Err(parse_err(line_no, format!("a {} has no signature", d.kind.keyword())));
                }
                let sig = Signature::parse(value).map_err(|e| parse_err(line_no, e.to_string()))?;
                d.signature = Some((line_no, sig));
            }
            "points" | "elements" => {
                if d.names.is_some() {
                    return Err(parse_err(line_no, "duplicate points line"));
                }
                let names: Vec<String> = value.split_whitespace().map(str::to_string).collect();
                for (j, n) in names.iter().enumerate() {
                    check_name(n, line_no)?;
                    if names[..j].contains(n) {
                        return Err(parse_err(line_no, format!("duplicate point `{n}`")));
                    }
                }
                d.names = Some((line_no, names));
            }
            "order" => {
                if d.order.is_some() {
                    return Err(parse_err(line_no, "duplicate order line"));
                }
                let mut pairs = Vec::new();
                for chain in value.split(',').map(str::trim).filter(|c| !c.is_empty()) {
                    let items: Vec<&str> = chain.split('<').map(str::trim).collect();
                    if items.len() < 2 {
                        return Err(parse_err(line_no, format!("expected `a<b`, found `{chain}`")));
                    }
                    for w in items.windows(2) {
                        pairs.push((d.index(w[0], line_no)?, d.index(w[1], line_no)?));
                    }
                }
                d.order = Some((line_no, pairs));
            }
            _ if key.starts_with("map ") || key.starts_with("map\t") => {
                if !d.kind.has_maps() {
                    return Err(parse_err(line_no, format!("a {} has no maps", d.kind.keyword())));
                }
                let symbol = key[4..].trim().to_string();
                check_name(&symbol, line_no)?;
                if d.maps.iter().any(|m| m.1 == symbol) {
                    return Err(parse_err(line_no, format!("duplicate map for `{symbol}`")));
                }
                let mut entries = Vec::new();
                for tok in value.split_whitespace() {
                    let (a, b) = tok
                        .split_once("->")
                        .ok_or_else(|| parse_err(line_no, format!("expected `a->b`, found `{tok}`")))?;
                    entries.push((a.to_string(), b.to_string()));
                }
                d.maps.push((line_no, symbol, entries));
            }
            _ => return Err(parse_err(line_no, format!("unknown key `{key}`"))),
        }
    }
    let d = draft.ok_or_else(|| parse_err(1, "empty document"))?;
    build(d)
}

fn build(d: Draft) -> Result<Document> {
    let (names_line, names) = d
        .names
        .clone()
        .ok_or_else(|| parse_err(d.header_line, format!("missing `{}:` line", d.kind.carrier_keyword())))?;
    let n = names.len();
    let (order_line, pairs) = d.order.clone().unwrap_or((names_line, Vec::new()));
    let poset = Poset::from_pairs(n, &pairs).map_err(|e| parse_err(order_line, e.to_string()))?;
    let sig = match &d.signature {
        Some((_, s)) => s.clone(),
        None if d.kind.has_maps() => {
            return Err(parse_err(d.header_line, "missing `signature:` line"));
        }
        None => Signature::default(),
    };
    let sig_line = d.signature.as_ref().map_or(d.header_line, |s| s.0);
    let mut maps = Vec::new();
    for (s, name, _) in sig.symbols() {
        let Some((line, _, entries)) = d.maps.iter().find(|m| m.1 == name) else {
            return Err(parse_err(sig_line, format!("missing map for `{name}`")));
        };
        let mut table: Vec<Option<usize>> = vec![None; n];
        for (a, b) in entries {
            let (ia, ib) = (d.index(a, *line)?, d.index(b, *line)?);
            if table[ia].is_some() {
                return Err(parse_err(*line, format!("`{name}` assigns `{a}` twice")));
            }
            table[ia] = Some(ib);
        }
        if let Some(missing) = table.iter().position(Option::is_none) {
            return Err(parse_err(*line, format!("`{name}` does not assign `{}`", names[missing])));
        }
        maps.push((s, *line, table.into_iter().map(Option::unwrap).collect::<Vec<_>>()));
    }
    if let Some((line, sym, _)) = d.maps.iter().find(|m| sig.index_of(&m.1).is_none()) {
        return Err(Error::UnknownSymbol(format!("{sym} (line {line})")));
    }
    let tables: Vec<Vec<usize>> = maps.iter().map(|m| m.2.clone()).collect();
    let structure = match d.kind {
        StructureKind::Space => {
            for (s, line, table) in &maps {
                check_space_polarity(&poset, &sig, *s, table, &names, *line)?;
            }
            Structure::Space(CornishSpace::new(sig, poset, tables)?)
        }
        StructureKind::Algebra => {
            let lat = DistLattice::from_poset(poset).map_err(|e| parse_err(order_line, e.to_string()))?;
            for (s, line, table) in &maps {
                check_algebra_polarity(&lat, &sig, *s, table, &names, *line)?;
            }
            Structure::Algebra(CornishAlgebra::new(sig, lat, tables)?)
        }
        StructureKind::Poset => Structure::Poset(poset),
        StructureKind::Ddp => {
            let lat = DistLattice::from_poset(poset).map_err(|e| parse_err(order_line, e.to_string()))?;
            Structure::Ddp(ddp_from_lattice(lat)?)
        }
    };
    Ok(Document {
        name: d.name,
        names,
        comments: d.comments,
        structure,
    })
}

fn check_space_polarity(
    poset: &Poset,
    sig: &Signature,
    s: usize,
    map: &[usize],
    names: &[String],
    line: usize,
) -> Result<()> {
    let (name, pol) = (sig.name(s), sig.polarity(s));
    for (a, b) in poset.strict_pairs() {
        let ok = match pol {
            Polarity::Plus => poset.leq(map[a], map[b]),
            Polarity::Minus => poset.leq(map[b], map[a]),
        };
        if !ok {
            let verb = if pol == Polarity::Plus { "preserve" } else { "reverse" };
            return Err(Error::Polarity {
                symbol: name.to_string(),
                detail: format!(
                    "line {line}: {} < {} but {name}({}) = {} and {name}({}) = {} do not {verb} the order",
                    names[a], names[b], names[a], names[map[a]], names[b], names[map[b]]
                ),
            });
        }
    }
    Ok(())
}

fn check_algebra_polarity(
    lat: &DistLattice,
    sig: &Signature,
    s: usize,
    op: &[usize],
    names: &[String],
    line: usize,
) -> Result<()> {
    let (name, pol) = (sig.name(s), sig.polarity(s));
    let n = lat.len();
    let (bot, top) = (lat.bot(), lat.top());
    let bounds_ok = match pol {
        Polarity::Plus => op[bot] == bot && op[top] == top,
        Polarity::Minus => op[bot] == top && op[top] == bot,
    };
    if !bounds_ok {
        return Err(Error::Polarity {
            symbol: name.to_string(),
            detail: format!("line {line}: `{name}` does not send the bounds to the required bounds"),
        });
    }
    for a in 0..n {
        for b in 0..n {
            let (j, m) = (lat.join(a, b), lat.meet(a, b));
            let ok = match pol {
                Polarity::Plus => op[j] == lat.join(op[a], op[b]) && op[m] == lat.meet(op[a], op[b]),
                Polarity::Minus => op[j] == lat.meet(op[a], op[b]) && op[m] == lat.join(op[a], op[b]),
            };
            if !ok {
                let kind = if pol == Polarity::Plus { "an endomorphism" } else { "a dual endomorphism" };
                return Err(Error::Polarity {
                    symbol: name.to_string(),
                    detail: format!(
                        "line {line}: `{name}` is not {kind} at the pair ({}, {})",
                        names[a], names[b]
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Canonical text: header, comments, signature, points, covering pairs of
/// the order, then one map line per symbol in signature order.
pub fn render(doc: &Document) -> String {
    let kind = doc.kind();
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", kind.keyword(), doc.name);
    for c in &doc.comments {
        if c.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {c}");
        }
    }
    if let Some(sig) = doc.signature() {
        let syms: Vec<String> = sig
            .symbols()
            .map(|(_, name, pol)| format!("{name}{}", pol.sign()))
            .collect();
        let _ = writeln!(out, "signature: {}", syms.join(" "));
    }
    let _ = writeln!(out, "{}: {}", kind.carrier_keyword(), doc.names.join(" "));
    let covers: Vec<String> = doc
        .structure
        .order()
        .covers()
        .into_iter()
        .map(|(a, b)| format!("{}<{}", doc.names[a], doc.names[b]))
        .collect();
    let _ = writeln!(out, "order: {}", covers.join(", "));
    if let Some(sig) = doc.signature() {
        for (s, name, _) in sig.symbols() {
            let entries: Vec<String> = doc.maps()[s]
                .iter()
                .enumerate()
                .map(|(a, &b)| format!("{}->{}", doc.names[a], doc.names[b]))
                .collect();
            let _ = writeln!(out, "map {name}: {}", entries.join(" "));
        }
    }
    out.lines()
        .map(str::trim_end)
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    const Y2: &str = "space Y2\nsignature: f+ g-\npoints: u1 u2\norder: u1<u2\nmap f: u1->u2 u2->u2\nmap g: u1->u2 u2->u1\n";

    #[test]
    fn minimal_space() {
        let d = parse("space P\nsignature:\npoints: x\norder:\n").unwrap();
        assert_eq!(d.kind(), StructureKind::Space);
        let x = d.space().unwrap();
        assert_eq!(x.len(), 1);
        assert!(x.sig().is_empty());
    }

    #[test]
    fn y2_round_trip() {
        let d = parse(Y2).unwrap();
        let x = d.space().unwrap();
        assert_eq!(x.map(0), &[1, 1]);
        assert_eq!(x.map(1), &[1, 0]);
        assert_eq!(render(&d), Y2);
        let crlf = Y2.replace('\n', "\r\n");
        assert_eq!(parse(&crlf).unwrap(), d);
    }

    #[test]
    fn errors_carry_lines() {
        let cyc = "space P\nsignature:\npoints: a b\norder: a<b, b<a\n";
        assert!(matches!(parse(cyc), Err(Error::Parse { line: 4, .. })));
        let partial = "space P\nsignature: f+\npoints: a b\norder:\nmap f: a->b\n";
        assert!(matches!(parse(partial), Err(Error::Parse { line: 5, .. })));
        let twice = "space P\nsignature: f+\npoints: a b\norder:\nmap f: a->b a->a b->b\n";
        assert!(matches!(parse(twice), Err(Error::Parse { line: 5, .. })));
        let unknown = "space P\nsignature: f+\npoints: a\norder:\nmap f: a->a\nmap h: a->a\n";
        assert!(matches!(parse(unknown), Err(Error::UnknownSymbol(_))));
        let missing = "space P\nsignature: f+\npoints: a\norder:\n";
        assert!(matches!(parse(missing), Err(Error::Parse { line: 2, .. })));
        let pol = "space P\nsignature: g+\npoints: a b\norder: a<b\nmap g: a->b b->a\n";
        match parse(pol) {
            Err(Error::Polarity { symbol, detail }) => {
                assert_eq!(symbol, "g");
                assert!(detail.contains("a < b"), "{detail}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn algebra_and_ddp_documents() {
        let a = parse("algebra A2\nsignature: f+ g-\nelements: 0 a1 1\norder: 0<a1<1\nmap f: 0->0 a1->1 1->1\nmap g: 0->1 a1->a1 1->0\n")
            .unwrap();
        assert_eq!(a.algebra().unwrap().len(), 3);
        let d = parse("ddp B\nelements: 0 a b 1\norder: 0<a, 0<b, a<1, b<1\n").unwrap();
        match &d.structure {
            Structure::Ddp(x) => assert_eq!(x.star(1), 2),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse(&render(&d)).unwrap(), d);
        assert!(parse("ddp B\nelements: a b\norder:\n").is_err());
    }
}
