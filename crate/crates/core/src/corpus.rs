//! Built-in structures, addressed as `corpus:NAME`.
//!
//! Spaces and algebras are stored as documents. `C<m>` is the Ockham cycle
//! space for any `m ≥ 1`, and `NAME-algebra` is the dual algebra of the
//! space `NAME`.

use crate::birkhoff::UpSetLattice;
use crate::cornish::{d_functor, e_functor};
use crate::error::{Error, Result};
use crate::guards::Guards;
use crate::ockham::build_cm;
use crate::order::Poset;
use crate::text::{parse, Document, Structure};

const DOCUMENTS: &[&str] = &[
    "space chain_f_plus
# Two-element chain with f sending both points to the top.
signature: f+
points: lo hi
order: lo<hi
map f: lo->hi hi->hi
",
    "space chain_f_minus
signature: f-
points: lo hi
order: lo<hi
map f: lo->hi hi->hi
",
    "space swap_f_plus
# Two-element antichain with f swapping the points.
signature: f+
points: p q
order:
map f: p->q q->p
",
    "space swap_f_minus
signature: f-
points: p q
order:
map f: p->q q->p
",
    "space fixed_f_plus
# Two-element antichain with f the identity.
signature: f+
points: p q
order:
map f: p->p q->q
",
    "space fixed_f_minus
signature: f-
points: p q
order:
map f: p->p q->q
",
    "algebra chain_f_plus_E
# Expected dual of chain_f_plus, elements in up-set order.
signature: f+
elements: 0 m 1
order: 0<m, m<1
map f: 0->0 m->1 1->1
",
    "algebra chain_f_minus_E
signature: f-
elements: 0 m 1
order: 0<m, m<1
map f: 0->1 m->0 1->0
",
    "algebra swap_f_plus_E
signature: f+
elements: 0 a b 1
order: 0<a, 0<b, a<1, b<1
map f: 0->0 a->b b->a 1->1
",
    "algebra swap_f_minus_E
signature: f-
elements: 0 a b 1
order: 0<a, 0<b, a<1, b<1
map f: 0->1 a->a b->b 1->0
",
    "algebra fixed_f_plus_E
signature: f+
elements: 0 a b 1
order: 0<a, 0<b, a<1, b<1
map f: 0->0 a->a b->b 1->1
",
    "algebra fixed_f_minus_E
signature: f-
elements: 0 a b 1
order: 0<a, 0<b, a<1, b<1
map f: 0->1 a->b b->a 1->0
",
    "space X1
# Seven points x0 x1 x2 x3 (top row) and x5 x6 x7 (bottom row).
# No order relations are given, so the order is an antichain.
# f swaps x0 and x5, sends x3 to x7 and fixes the rest.
# g cycles x0 x1 x2 x3 and x5 x6 x7. Term: f^2 g.
signature: f+ g-
points: x0 x1 x2 x3 x5 x6 x7
order:
map f: x0->x5 x1->x1 x2->x2 x3->x7 x5->x0 x6->x6 x7->x7
map g: x0->x1 x1->x2 x2->x3 x3->x0 x5->x6 x6->x7 x7->x5
",
    "space X2
# Chain u<v<w; f climbs to w, g swaps u and w. Term: f^2 g.
signature: f+ g-
points: u v w
order: u<v, v<w
map f: u->v v->w w->w
map g: u->w v->v w->u
",
    "space X3
# Nine-point antichain in a 3x3 grid; g cycles each row, f each column.
# Term: g (f^2 g also works).
signature: f+ g-
points: x0 x1 x2 x3 x4 x5 x6 x7 x8
order:
map f: x0->x3 x1->x4 x2->x5 x3->x6 x4->x7 x5->x8 x6->x0 x7->x1 x8->x2
map g: x0->x1 x1->x2 x2->x0 x3->x4 x4->x5 x5->x3 x6->x7 x7->x8 x8->x6
",
    "space Y2
signature: f+ g-
points: u1 u2
order: u1<u2
map f: u1->u2 u2->u2
map g: u1->u2 u2->u1
",
    "space Y3
signature: f+ g-
points: u1 u2 u3
order: u1<u2, u2<u3
map f: u1->u2 u2->u3 u3->u3
map g: u1->u3 u2->u2 u3->u1
",
    "space Y4
signature: f+ g-
points: u1 u2 u3 u4
order: u1<u2, u2<u3, u3<u4
map f: u1->u2 u2->u3 u3->u4 u4->u4
map g: u1->u4 u2->u3 u3->u2 u4->u1
",
    "algebra A2
signature: f+ g-
elements: 0 a1 1
order: 0<a1, a1<1
map f: 0->0 a1->1 1->1
map g: 0->1 a1->a1 1->0
",
    "algebra A3
signature: f+ g-
elements: 0 a1 a2 1
order: 0<a1, a1<a2, a2<1
map f: 0->0 a1->a2 a2->1 1->1
map g: 0->1 a1->a2 a2->a1 1->0
",
    "algebra A4
signature: f+ g-
elements: 0 a1 a2 a3 1
order: 0<a1, a1<a2, a2<a3, a3<1
map f: 0->0 a1->a2 a2->a3 a3->1 1->1
map g: 0->1 a1->a3 a2->a2 a3->a1 1->0
",
    "poset chain2
points: a b
order: a<b
",
    "poset chain3
points: a b c
order: a<b, b<c
",
    "poset antichain2
points: a b
order:
",
    "poset crown4
# Two minimal points each below two maximal points.
points: a b c d
order: a<c, a<d, b<c, b<d
",
];

/// Largest `m` listed by [`names`]; any `m ≥ 1` resolves.
pub const LISTED_CYCLES: usize = 6;

fn stored() -> impl Iterator<Item = Document> {
    DOCUMENTS
        .iter()
        .map(|text| parse(text).expect("corpus documents are valid"))
}

/// Every listed name: stored documents, `C1..C6`, and `NAME-algebra` for
/// every space.
pub fn names() -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut spaces = Vec::new();
    for d in stored() {
        if d.space().is_some() {
            spaces.push(d.name.clone());
        }
        out.push(d.name);
    }
    for m in 1..=LISTED_CYCLES {
        spaces.push(format!("C{m}"));
        out.push(format!("C{m}"));
    }
    out.extend(spaces.into_iter().map(|s| format!("{s}-algebra")));
    out
}

fn cycle_document(m: usize) -> Result<Document> {
    let x = build_cm(m)?;
    Ok(Document::numbered(format!("C{m}"), "c", Structure::Space(x))?
        .with_comment(format!("{m}-element antichain; g(ci) = c(i+1 mod {m})")))
}

/// Looks up a built-in structure by name.
pub fn get(name: &str, guards: &Guards) -> Result<Document> {
    if let Some(space) = name.strip_suffix("-algebra") {
        let doc = get(space, guards)?;
        if doc.space().is_none() {
            return Err(Error::InvalidArgument(format!("`{space}` is not a space")));
        }
        return dual_document(&doc, guards);
    }
    if let Some(m) = name.strip_prefix('C').and_then(|s| s.parse::<usize>().ok()) {
        return cycle_document(m);
    }
    stored()
        .find(|d| d.name == name)
        .ok_or_else(|| Error::InvalidArgument(format!("no corpus entry `{name}`")))
}

/// All listed documents, in [`names`] order.
pub fn all(guards: &Guards) -> Result<Vec<Document>> {
    names().iter().map(|n| get(n, guards)).collect()
}

/// Reads `corpus:NAME` from the corpus and anything else as a file path.
pub fn resolve(reference: &str, guards: &Guards) -> Result<Document> {
    match reference.strip_prefix("corpus:") {
        Some(name) => get(name, guards),
        None => {
            let text = std::fs::read_to_string(reference)
                .map_err(|e| Error::InvalidArgument(format!("cannot read `{reference}`: {e}")))?;
            parse(&text)
        }
    }
}

fn unique_or_numbered(names: Vec<String>, prefix: &str) -> Vec<String> {
    let valid = names
        .iter()
        .all(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_'));
    let distinct = names.iter().enumerate().all(|(i, n)| !names[..i].contains(n));
    if valid && distinct {
        names
    } else {
        (0..names.len()).map(|i| format!("{prefix}{i}")).collect()
    }
}

fn up_set_names(point_names: &[String], up_sets: &[crate::BitSet]) -> Vec<String> {
    let names = up_sets
        .iter()
        .map(|u| {
            if u.is_empty() {
                "bot".to_string()
            } else if u.is_full() {
                "top".to_string()
            } else {
                u.iter().map(|p| point_names[p].as_str()).collect::<Vec<_>>().join("_")
            }
        })
        .collect();
    unique_or_numbered(names, "e")
}

/// The dual document: spaces go to algebras of up-sets, algebras to spaces
/// of prime filters, posets to the lattice of up-sets as a ddp-algebra.
/// An up-set is named by its members and a prime filter `↑j` by `up_j`.
pub fn dual_document(doc: &Document, guards: &Guards) -> Result<Document> {
    match &doc.structure {
        Structure::Space(x) => {
            let e = e_functor(x, guards)?;
            let names = up_set_names(&doc.names, &e.carrier.up_sets);
            Ok(Document::new(format!("E_{}", doc.name), names, Structure::Algebra(e.algebra))?
                .with_comment(format!("dual algebra of {}; elements are up-sets", doc.name)))
        }
        Structure::Algebra(a) => {
            let d = d_functor(a)?;
            let names = d
                .filters
                .filters
                .iter()
                .map(|f| {
                    let gen = (0..a.len())
                        .find(|&j| f.contains(j) && f.iter().all(|y| a.lattice().leq(j, y)))
                        .expect("finite prime filters are principal");
                    format!("up_{}", doc.names[gen])
                })
                .collect();
            let names = unique_or_numbered(names, "p");
            Ok(Document::new(format!("D_{}", doc.name), names, Structure::Space(d.space))?
                .with_comment(format!("dual space of {}; points are prime filters", doc.name)))
        }
        Structure::Poset(p) => {
            let k = UpSetLattice::new(p, guards)?;
            let names = up_set_names(&doc.names, &k.up_sets);
            let a = crate::ddp::ddp_from_lattice(k.lattice)?;
            Ok(Document::new(format!("K_{}", doc.name), names, Structure::Ddp(a))?
                .with_comment(format!("up-set lattice of {}", doc.name)))
        }
        Structure::Ddp(a) => {
            let d = crate::birkhoff::PrimeFilterSpace::new(a.lattice());
            let names = d
                .filters
                .iter()
                .map(|f| {
                    let gen = (0..a.len())
                        .find(|&j| f.contains(j) && f.iter().all(|y| a.lattice().leq(j, y)))
                        .expect("finite prime filters are principal");
                    format!("up_{}", doc.names[gen])
                })
                .collect();
            let names = unique_or_numbered(names, "p");
            Ok(Document::new(format!("H_{}", doc.name), names, Structure::Poset(d.poset))?
                .with_comment(format!("prime filters of {}", doc.name)))
        }
    }
}

/// The underlying poset of a space or poset document.
pub fn poset_of(doc: &Document) -> Result<Poset> {
    match &doc.structure {
        Structure::Space(x) => Ok(x.poset().clone()),
        Structure::Poset(p) => Ok(p.clone()),
        _ => Err(Error::InvalidArgument(format!("`{}` is not a space or poset", doc.name))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::render;

    #[test]
    fn corpus_parses_and_round_trips() {
        let g = Guards::default();
        for d in all(&g).unwrap() {
            assert_eq!(parse(&render(&d)).unwrap(), d, "{}", d.name);
        }
    }

    #[test]
    fn stored_entries() {
        let g = Guards::default();
        let x2 = get("X2", &g).unwrap();
        assert_eq!(x2.names, ["u", "v", "w"]);
        let x = x2.space().unwrap();
        assert_eq!(x.map(0), &[1, 2, 2]);
        assert_eq!(x.map(1), &[2, 1, 0]);
        let a4 = get("A4", &g).unwrap();
        assert_eq!(a4.names, ["0", "a1", "a2", "a3", "1"]);
        assert!(a4.algebra().unwrap().lattice().order().leq(1, 3));
        for m in 1..=6 {
            assert_eq!(get(&format!("C{m}-algebra"), &g).unwrap().structure.len(), 1 << m);
        }
        assert!(get("nope", &g).is_err());
        assert!(get("A2-algebra", &g).is_err());
    }

    #[test]
    fn dual_names() {
        let g = Guards::default();
        let e = get("Y2-algebra", &g).unwrap();
        assert_eq!(e.names, ["bot", "u2", "top"]);
        let d = dual_document(&get("A2", &g).unwrap(), &g).unwrap();
        assert_eq!(d.names, ["up_1", "up_a1"]);
    }
}
