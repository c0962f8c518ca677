//! Quasi-primality and semi-primality of finite families of Cornish
//! algebras.
//!
//! The exact procedure inspects every subuniverse of `A1 × A2`: a family
//! whose members have a majority term (every lattice-based algebra has the
//! median) is quasi-primal with a common discriminator term iff each such
//! subuniverse is a product of subuniverses or the graph of a partial
//! isomorphism. Beyond the size guards, the procedure falls back to the
//! sufficient orbit conditions on the dual spaces and to cheap refutations.

use std::collections::HashMap;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::birkhoff::DistLattice;
use crate::cornish::{
    d_functor, e_functor, eval_e_cornish, orbit_of, CornishAlgebra, CornishSpace, Polarity,
    Signature, Word,
};
use crate::duality_theorems::{b_of, canonical_pair, JointPair};
use crate::engine::{
    all_subuniverses, classify_sub_of_product, partial_isomorphisms, FiniteAlgebra, Product,
    SubClassification, SubKind,
};
use crate::error::{ensure, Error, Result};
use crate::guards::Guards;
use crate::ockham::{build_cm, NotCycleReason};
use crate::order::Poset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Yes,
    No,
    /// A size guard stopped the exact check and no sufficient condition or
    /// refutation applied.
    UnknownGuard,
    /// A sufficient-only condition does not hold. This says nothing about
    /// the property itself.
    ConditionNotMet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Every subuniverse of the product was classified.
    BruteForce,
    /// The orbit conditions on the dual spaces hold for the whole family.
    Internal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairResult {
    pub left: usize,
    pub right: usize,
    pub route: Route,
    /// Counts by classification, present for the brute-force route.
    pub subuniverses: Option<usize>,
    pub products: Option<usize>,
    pub graphs: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSummary {
    pub member: usize,
    /// Points lying on odd cycles of the term.
    pub odd_cycle_points: Vec<usize>,
    /// Longest distance from a point to its cycle.
    pub max_tail: usize,
    pub cycle_lengths: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Pairs {
        pairs: Vec<PairResult>,
        /// The word used for pairs certified by the internal route.
        term: Option<String>,
    },
    Orbits {
        term: String,
        spaces: Vec<OrbitSummary>,
    },
    ConstantTerm {
        term: String,
        /// Minus-polarity word actually used (`term` itself, or `term`
        /// followed by a minus symbol).
        used: String,
        values: Vec<usize>,
    },
    OddCycles {
        cycles: Vec<usize>,
    },
    Simple {
        congruences: usize,
    },
    Ddp {
        members: usize,
    },
}

/// Plain data for a jointly surjective pair, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairData {
    pub y_points: usize,
    pub y_order: Vec<(usize, usize)>,
    pub y_maps: Vec<Vec<usize>>,
    pub phi1: Vec<usize>,
    pub phi2: Vec<usize>,
}

impl From<&JointPair> for PairData {
    fn from(p: &JointPair) -> Self {
        PairData {
            y_points: p.y.len(),
            y_order: p.y.poset().covers(),
            y_maps: p.y.maps().to_vec(),
            phi1: p.phi1.table().to_vec(),
            phi2: p.phi2.table().to_vec(),
        }
    }
}

/// Every term operation of an algebra with only order-preserving
/// operations is monotone, yet `τ(lo, lo, hi) = hi` and `τ(lo, hi, hi) = lo`
/// with `(lo, lo, hi) ≤ (lo, hi, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderRefutation {
    pub low: usize,
    pub high: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    BadSubuniverse {
        left: usize,
        right: usize,
        /// Members as `(left element, right element)`.
        members: Vec<(usize, usize)>,
        classification: SubClassification,
        pair: Option<PairData>,
    },
    Monotone {
        member: usize,
        refutation: OrderRefutation,
    },
    NotSimple {
        member: usize,
        /// A non-empty proper closed subset of the dual space.
        substructure: Vec<usize>,
    },
    NotCycleSpace {
        member: usize,
        reason: NotCycleReason,
    },
    EvenCycle {
        member: usize,
        m: usize,
        base: usize,
        pair: PairData,
        subuniverse: Vec<usize>,
        subuniverse_kind: SubKind,
    },
    Unmet {
        reason: String,
    },
    /// A congruence other than the two trivial ones, as block labels.
    Congruence {
        blocks: Vec<usize>,
    },
    DdpCondition {
        member: usize,
        connected: bool,
        all_extremal: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub certificate: Option<Certificate>,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn yes(certificate: Certificate) -> Self {
        Verdict {
            outcome: Outcome::Yes,
            certificate: Some(certificate),
            witness: None,
            notes: Vec::new(),
        }
    }

    pub fn no(witness: Witness) -> Self {
        Verdict {
            outcome: Outcome::No,
            certificate: None,
            witness: Some(witness),
            notes: Vec::new(),
        }
    }

    fn unmet(reason: String) -> Self {
        Verdict {
            outcome: Outcome::ConditionNotMet,
            certificate: None,
            witness: Some(Witness::Unmet { reason }),
            notes: Vec::new(),
        }
    }

    fn unknown(notes: Vec<String>) -> Self {
        Verdict {
            outcome: Outcome::UnknownGuard,
            certificate: None,
            witness: None,
            notes,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.outcome == Outcome::Yes
    }
}

/// A ternary operation on `0..n` as a table indexed by `x·n² + y·n + z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryOp {
    n: usize,
    table: Vec<usize>,
}

impl TernaryOp {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> usize) -> Self {
        let mut table = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    table.push(f(x, y, z));
                }
            }
        }
        TernaryOp { n, table }
    }

    /// `τ(x, y, z) = x` if `x ≠ y`, else `z`.
    pub fn discriminator(n: usize) -> Self {
        Self::from_fn(n, |x, y, z| if x != y { x } else { z })
    }

    pub fn projection(n: usize, i: usize) -> Self {
        Self::from_fn(n, |x, y, z| [x, y, z][i])
    }

    /// `(x∧y) ∨ (y∧z) ∨ (z∧x)`, checked to be a majority operation.
    pub fn median(lat: &DistLattice) -> Result<Self> {
        let op = Self::from_fn(lat.len(), |x, y, z| {
            lat.join(lat.join(lat.meet(x, y), lat.meet(y, z)), lat.meet(z, x))
        });
        for x in 0..lat.len() {
            for y in 0..lat.len() {
                ensure!(
                    op.apply(x, x, y) == x && op.apply(x, y, x) == x && op.apply(y, x, x) == x,
                    "median is not a majority operation at ({x}, {y})"
                );
            }
        }
        Ok(op)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn apply(&self, x: usize, y: usize, z: usize) -> usize {
        self.table[(x * self.n + y) * self.n + z]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }
}

/// Outcome of classifying every subuniverse of a product of two algebras.
pub enum PairCheck {
    Passed {
        subuniverses: usize,
        products: usize,
        graphs: usize,
    },
    Failed {
        members: BitSet,
        classification: SubClassification,
    },
    Guard(String),
}

fn check_product(
    a1: &CornishAlgebra,
    a2: &CornishAlgebra,
    same_factor: bool,
    identity_only: bool,
    guards: &Guards,
) -> Result<PairCheck> {
    // The majority hypothesis is discharged by the median.
    TernaryOp::median(a1.lattice())?;
    TernaryOp::median(a2.lattice())?;
    classify_product_subuniverses(a1, a2, same_factor, identity_only, guards)
}

/// Classifies every subuniverse of `a1 × a2` as a product or the graph of a
/// partial isomorphism (of the identity map when `identity_only`), stopping
/// at the first that is neither. The caller supplies the majority term.
pub fn classify_product_subuniverses<A: FiniteAlgebra>(
    a1: &A,
    a2: &A,
    same_factor: bool,
    identity_only: bool,
    guards: &Guards,
) -> Result<PairCheck> {
    let size = a1.size() * a2.size();
    if size > guards.product {
        return Ok(PairCheck::Guard(format!(
            "product has {size} elements, guard is {}",
            guards.product
        )));
    }
    let prod = Product::new(a1, a2)?;
    let subs = match all_subuniverses(&prod, guards.product, guards.subuniverses) {
        Ok(s) => s,
        Err(e) if e.is_guard() => return Ok(PairCheck::Guard(e.to_string())),
        Err(e) => return Err(e),
    };
    let (mut products, mut graphs) = (0, 0);
    for s in &subs {
        let c = classify_sub_of_product(&prod, s, same_factor)?;
        let ok = if identity_only {
            c.is_product || c.is_identity
        } else {
            c.is_product || c.is_partial_iso
        };
        if !ok {
            return Ok(PairCheck::Failed {
                members: s.clone(),
                classification: c,
            });
        }
        if c.is_product {
            products += 1;
        } else {
            graphs += 1;
        }
    }
    Ok(PairCheck::Passed {
        subuniverses: subs.len(),
        products,
        graphs,
    })
}

/// The jointly surjective pair corresponding to a subuniverse of
/// `a1 × a2`, computed on `ED(a1) × ED(a2)` through the evaluation
/// isomorphisms.
fn pair_for_subuniverse(
    a1: &CornishAlgebra,
    a2: &CornishAlgebra,
    members: &BitSet,
    guards: &Guards,
) -> Result<JointPair> {
    let (d1, ed1, e1) = eval_e_cornish(a1, guards)?;
    let (d2, ed2, e2) = eval_e_cornish(a2, guards)?;
    let n2 = a2.len();
    let m2 = ed2.algebra.len();
    let moved = BitSet::from_indices(
        ed1.algebra.len() * m2,
        members.iter().map(|x| e1.apply(x / n2) * m2 + e2.apply(x % n2)),
    );
    canonical_pair(&d1.space, &d2.space, &ed1, &ed2, &moved, guards)
}

fn bad_subuniverse(
    a1: &CornishAlgebra,
    a2: &CornishAlgebra,
    left: usize,
    right: usize,
    members: &BitSet,
    classification: SubClassification,
    guards: &Guards,
) -> Result<Witness> {
    let n2 = a2.len();
    let pair = pair_for_subuniverse(a1, a2, members, guards)?;
    Ok(Witness::BadSubuniverse {
        left,
        right,
        members: members.iter().map(|x| (x / n2, x % n2)).collect(),
        classification,
        pair: Some((&pair).into()),
    })
}

/// Exact check that `a1` and `a2` share a discriminator term, by
/// classifying every subuniverse of `a1 × a2`.
pub fn quasi_primal_pair(a1: &CornishAlgebra, a2: &CornishAlgebra, guards: &Guards) -> Result<Verdict> {
    a1.sig().require_same(a2.sig())?;
    match check_product(a1, a2, a1 == a2, false, guards)? {
        PairCheck::Passed {
            subuniverses,
            products,
            graphs,
        } => Ok(Verdict::yes(Certificate::Pairs {
            pairs: vec![PairResult {
                left: 0,
                right: 1,
                route: Route::BruteForce,
                subuniverses: Some(subuniverses),
                products: Some(products),
                graphs: Some(graphs),
            }],
            term: None,
        })),
        PairCheck::Failed {
            members,
            classification,
        } => Ok(Verdict::no(bad_subuniverse(a1, a2, 0, 1, &members, classification, guards)?)),
        PairCheck::Guard(note) => Ok(Verdict::unknown(vec![note])),
    }
}

/// Minus-polarity words up to length 4 in enumeration order, for the
/// automatic internal route.
fn candidate_words(sig: &Signature) -> Vec<Word> {
    Word::all_up_to(sig, 4)
        .into_iter()
        .filter(|w| w.polarity(sig) == Polarity::Minus)
        .collect()
}

/// Pairwise check over a family (including each member with itself).
/// Pairs within the product guard are decided exactly; larger pairs use the
/// internal orbit route with `term` (or the first working word of length at
/// most 4), or else the refutations for `F⁻ = ∅` and non-simple members.
pub fn quasi_primal_family(algs: &[CornishAlgebra], term: Option<&Word>, guards: &Guards) -> Result<Verdict> {
    let Some(first) = algs.first() else {
        return Err(Error::InvalidArgument("empty family".into()));
    };
    for a in algs {
        first.sig().require_same(a.sig())?;
    }
    let spaces: Vec<CornishSpace> = algs
        .iter()
        .map(|a| d_functor(a).map(|d| d.space))
        .collect::<Result<_>>()?;
    let internal_term = match term {
        Some(t) => internal_sufficient(&spaces, t)?.is_yes().then(|| t.clone()),
        None => {
            let mut found = None;
            for w in candidate_words(first.sig()) {
                if internal_sufficient(&spaces, &w)?.is_yes() {
                    found = Some(w);
                    break;
                }
            }
            found
        }
    };
    let term_name = internal_term
        .as_ref()
        .map(|t| t.display(first.sig()).to_string());

    let mut pairs = Vec::new();
    let mut notes = Vec::new();
    let mut unknown = false;
    for i in 0..algs.len() {
        for j in i..algs.len() {
            let (a1, a2) = (&algs[i], &algs[j]);
            let guard_note = match check_product(a1, a2, i == j, false, guards)? {
                PairCheck::Passed {
                    subuniverses,
                    products,
                    graphs,
                } => {
                    pairs.push(PairResult {
                        left: i,
                        right: j,
                        route: Route::BruteForce,
                        subuniverses: Some(subuniverses),
                        products: Some(products),
                        graphs: Some(graphs),
                    });
                    continue;
                }
                PairCheck::Failed {
                    members,
                    classification,
                } => {
                    ensure!(
                        internal_term.is_none(),
                        "orbit conditions hold but the subuniverse check fails for pair ({i}, {j})"
                    );
                    let mut v = Verdict::no(bad_subuniverse(a1, a2, i, j, &members, classification, guards)?);
                    v.notes = notes;
                    return Ok(v);
                }
                PairCheck::Guard(note) => note,
            };
            if internal_term.is_some() {
                pairs.push(PairResult {
                    left: i,
                    right: j,
                    route: Route::Internal,
                    subuniverses: None,
                    products: None,
                    graphs: None,
                });
                continue;
            }
            for (member, a, x) in [(i, a1, &spaces[i]), (j, a2, &spaces[j])] {
                if let Some(refutation) = order_preserving_refutation(a) {
                    let mut v = Verdict::no(Witness::Monotone { member, refutation });
                    v.notes = notes;
                    return Ok(v);
                }
                if let Some(sub) = proper_substructure(x) {
                    let mut v = Verdict::no(Witness::NotSimple {
                        member,
                        substructure: sub.to_vec(),
                    });
                    v.notes = notes;
                    return Ok(v);
                }
            }
            notes.push(format!("pair ({i}, {j}): {guard_note}"));
            unknown = true;
        }
    }
    if unknown {
        return Ok(Verdict::unknown(notes));
    }
    let mut v = Verdict::yes(Certificate::Pairs {
        pairs,
        term: term_name,
    });
    v.notes = notes;
    Ok(v)
}

fn proper_substructure(x: &CornishSpace) -> Option<BitSet> {
    (0..x.len())
        .map(|p| x.generated_substructure(p))
        .find(|s| !s.is_full())
}

/// Exact semi-primality check on `a × a` within the guard; above it, the
/// constant-term condition with `term` (or the first constant word of
/// length at most 4) or the `F⁻ = ∅` refutation.
pub fn semi_primal(a: &CornishAlgebra, term: Option<&Word>, guards: &Guards) -> Result<Verdict> {
    let x = d_functor(a)?.space;
    let internal = match term {
        Some(t) => internal_sufficient_semiprimal(std::slice::from_ref(&x), t)?,
        None => {
            let mut best = Verdict::unmet("no constant word of length at most 4".into());
            for w in Word::all_up_to(a.sig(), 4) {
                let v = internal_sufficient_semiprimal(std::slice::from_ref(&x), &w)?;
                if v.is_yes() {
                    best = v;
                    break;
                }
            }
            best
        }
    };
    match check_product(a, a, true, true, guards)? {
        PairCheck::Passed {
            subuniverses,
            products,
            graphs,
        } => Ok(Verdict::yes(Certificate::Pairs {
            pairs: vec![PairResult {
                left: 0,
                right: 0,
                route: Route::BruteForce,
                subuniverses: Some(subuniverses),
                products: Some(products),
                graphs: Some(graphs),
            }],
            term: None,
        })),
        PairCheck::Failed {
            members,
            classification,
        } => {
            ensure!(
                !internal.is_yes(),
                "constant-term condition holds but the square has a bad subuniverse"
            );
            Ok(Verdict::no(bad_subuniverse(a, a, 0, 0, &members, classification, guards)?))
        }
        PairCheck::Guard(note) => {
            if internal.is_yes() {
                let mut v = internal;
                v.notes.push(note);
                return Ok(v);
            }
            if let Some(refutation) = order_preserving_refutation(a) {
                return Ok(Verdict::no(Witness::Monotone {
                    member: 0,
                    refutation,
                }));
            }
            if let Some(sub) = proper_substructure(&x) {
                return Ok(Verdict::no(Witness::NotSimple {
                    member: 0,
                    substructure: sub.to_vec(),
                }));
            }
            Ok(Verdict::unknown(vec![note]))
        }
    }
}

fn same_signature(xs: &[CornishSpace]) -> Result<Option<&Signature>> {
    let Some(first) = xs.first() else {
        return Ok(None);
    };
    for x in xs {
        first.sig().require_same(x.sig())?;
    }
    Ok(Some(first.sig()))
}

/// Sufficient condition for a family to be quasi-primal with a common
/// discriminator term: `t` has minus polarity, no space has a non-empty
/// proper closed subset, and every orbit under `t` ends in an odd cycle.
/// A negative answer is `ConditionNotMet`, not a refutation.
pub fn internal_sufficient(xs: &[CornishSpace], t: &Word) -> Result<Verdict> {
    let Some(sig) = same_signature(xs)? else {
        return Err(Error::InvalidArgument("empty family".into()));
    };
    if t.letters().iter().any(|&l| l >= sig.len()) {
        return Err(Error::UnknownSymbol(format!("{t:?}")));
    }
    let name = t.display(sig).to_string();
    if t.polarity(sig) != Polarity::Minus {
        return Ok(Verdict::unmet(format!("`{name}` has plus polarity")));
    }
    let mut summaries = Vec::new();
    for (member, x) in xs.iter().enumerate() {
        if let Some(sub) = proper_substructure(x) {
            return Ok(Verdict::unmet(format!(
                "space {member} has the proper closed subset {:?}",
                sub.to_vec()
            )));
        }
        let act = x.word_action(t);
        let mut odd = BitSet::new(x.len());
        let mut max_tail = 0;
        let mut lengths = Vec::new();
        for p in 0..x.len() {
            let o = orbit_of(&act, p);
            if !o.is_odd() {
                return Ok(Verdict::unmet(format!(
                    "in space {member} the orbit of point {p} under `{name}` ends in a cycle of length {}",
                    o.cycle_length()
                )));
            }
            max_tail = max_tail.max(o.tail_length());
            for &c in &o.cycle {
                odd.insert(c);
            }
            lengths.push(o.cycle_length());
        }
        lengths.sort_unstable();
        lengths.dedup();
        summaries.push(OrbitSummary {
            member,
            odd_cycle_points: odd.to_vec(),
            max_tail,
            cycle_lengths: lengths,
        });
    }
    Ok(Verdict::yes(Certificate::Orbits {
        term: name,
        spaces: summaries,
    }))
}

/// Sufficient condition for semi-primality: no space has a non-empty
/// proper closed subset and `t` acts as a constant on every space, where `t`
/// has minus polarity or can be made so by appending a minus symbol.
pub fn internal_sufficient_semiprimal(xs: &[CornishSpace], t: &Word) -> Result<Verdict> {
    let Some(sig) = same_signature(xs)? else {
        return Err(Error::InvalidArgument("empty family".into()));
    };
    let name = t.display(sig).to_string();
    let used = match t.polarity(sig) {
        Polarity::Minus => t.clone(),
        Polarity::Plus => match sig.minus_symbols().first() {
            Some(&g) => t.concat(&Word::letter(g)),
            None => {
                return Ok(Verdict::unmet(format!(
                    "`{name}` has plus polarity and there is no minus symbol"
                )))
            }
        },
    };
    ensure!(used.polarity(sig) == Polarity::Minus, "rewritten term has plus polarity");
    let mut values = Vec::new();
    for (member, x) in xs.iter().enumerate() {
        if let Some(sub) = proper_substructure(x) {
            return Ok(Verdict::unmet(format!(
                "space {member} has the proper closed subset {:?}",
                sub.to_vec()
            )));
        }
        let act = x.word_action(&used);
        match act.first() {
            Some(&v) if act.iter().all(|&y| y == v) => values.push(v),
            Some(_) => {
                return Ok(Verdict::unmet(format!(
                    "`{name}` is not constant on space {member}"
                )))
            }
            None => return Ok(Verdict::unmet(format!("space {member} is empty"))),
        }
    }
    Ok(Verdict::yes(Certificate::ConstantTerm {
        term: name,
        used: used.display(sig).to_string(),
        values,
    }))
}

/// For a non-trivial algebra without minus symbols, the pair showing that
/// no discriminator term exists.
pub fn order_preserving_refutation(a: &CornishAlgebra) -> Option<OrderRefutation> {
    if a.sig().has_minus() || a.is_trivial() {
        return None;
    }
    Some(OrderRefutation {
        low: a.lattice().bot(),
        high: a.lattice().top(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreservationViolation {
    pub left: usize,
    pub right: usize,
    pub relation: Vec<(usize, usize)>,
    pub arguments: [(usize, usize); 3],
    pub image: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub holds: bool,
    pub relations_checked: usize,
    pub violation: Option<PreservationViolation>,
}

fn preserves(
    op1: &TernaryOp,
    op2: &TernaryOp,
    relation: &[(usize, usize)],
    set: &BitSet,
    n2: usize,
) -> Option<([(usize, usize); 3], (usize, usize))> {
    for &p in relation {
        for &q in relation {
            for &r in relation {
                let image = (op1.apply(p.0, q.0, r.0), op2.apply(p.1, q.1, r.1));
                if !set.contains(image.0 * n2 + image.1) {
                    return Some(([p, q, r], image));
                }
            }
        }
    }
    None
}

fn preservation<F>(
    family: &[CornishAlgebra],
    ops: &[TernaryOp],
    guards: &Guards,
    relations: F,
) -> Result<PreservationReport>
where
    F: Fn(&CornishAlgebra, &CornishAlgebra) -> Result<Vec<BitSet>>,
{
    if family.len() != ops.len() {
        return Err(Error::InvalidArgument("one operation per member is required".into()));
    }
    for (a, op) in family.iter().zip(ops) {
        if a.len() != op.len() {
            return Err(Error::InvalidArgument("operation size does not match its algebra".into()));
        }
    }
    let _ = guards;
    let mut checked = 0;
    for i in 0..family.len() {
        for j in 0..family.len() {
            let n2 = family[j].len();
            for set in relations(&family[i], &family[j])? {
                checked += 1;
                let rel: Vec<(usize, usize)> = set.iter().map(|x| (x / n2, x % n2)).collect();
                if let Some((arguments, image)) = preserves(&ops[i], &ops[j], &rel, &set, n2) {
                    return Ok(PreservationReport {
                        holds: false,
                        relations_checked: checked,
                        violation: Some(PreservationViolation {
                            left: i,
                            right: j,
                            relation: rel,
                            arguments,
                            image,
                        }),
                    });
                }
            }
        }
    }
    Ok(PreservationReport {
        holds: true,
        relations_checked: checked,
        violation: None,
    })
}

/// Whether the operations (one per member) jointly preserve the graph of
/// every isomorphism between subalgebras of any two members.
pub fn pixley_preservation_check(
    family: &[CornishAlgebra],
    ops: &[TernaryOp],
    guards: &Guards,
) -> Result<PreservationReport> {
    preservation(family, ops, guards, |a, b| partial_isomorphisms(a, b, guards))
}

/// Whether the operations jointly preserve every subuniverse of every
/// product of two members. For the discriminator this holds exactly when
/// the family is quasi-primal with a common discriminator term.
pub fn subuniverse_preservation_check(
    family: &[CornishAlgebra],
    ops: &[TernaryOp],
    guards: &Guards,
) -> Result<PreservationReport> {
    preservation(family, ops, guards, |a, b| {
        let prod = Product::new(a, b)?;
        all_subuniverses(&prod, guards.product, guards.subuniverses)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TermSearch {
    Found {
        term: String,
        /// Nodes of the term tree.
        tree_size: usize,
        /// Distinct subterms, variables included.
        dag_size: usize,
    },
    /// No term up to the budget, or the search stopped at its work limit.
    /// Not a refutation.
    BudgetExhausted {
        tree_size_reached: usize,
        functions: usize,
    },
}

#[derive(Clone, Copy)]
enum Node {
    Var(usize),
    Const(bool),
    Unary(usize, usize),
    Join(usize, usize),
    Meet(usize, usize),
}

struct TermArena<'a> {
    algs: &'a [CornishAlgebra],
    nodes: Vec<Node>,
    values: Vec<Vec<u32>>,
    tree_size: Vec<usize>,
    seen: HashMap<Vec<u32>, usize>,
}

impl TermArena<'_> {
    fn render(&self, id: usize, sig: &Signature) -> String {
        match self.nodes[id] {
            Node::Var(i) => ["x", "y", "z"][i].to_string(),
            Node::Const(b) => if b { "1" } else { "0" }.to_string(),
            Node::Unary(s, a) => format!("{}({})", sig.name(s), self.render(a, sig)),
            Node::Join(a, b) => format!("({} ∨ {})", self.render(a, sig), self.render(b, sig)),
            Node::Meet(a, b) => format!("({} ∧ {})", self.render(a, sig), self.render(b, sig)),
        }
    }

    fn collect(&self, id: usize, out: &mut std::collections::HashSet<usize>) {
        if !out.insert(id) {
            return;
        }
        match self.nodes[id] {
            Node::Unary(_, a) => self.collect(a, out),
            Node::Join(a, b) | Node::Meet(a, b) => {
                self.collect(a, out);
                self.collect(b, out);
            }
            _ => {}
        }
    }

    /// Evaluates a node over every member on every triple.
    fn eval(&self, node: Node) -> Vec<u32> {
        let mut out = Vec::new();
        let mut offset = 0;
        for a in self.algs {
            let n = a.len();
            let cells = n * n * n;
            let lat = a.lattice();
            for t in 0..cells {
                let v = match node {
                    Node::Var(i) => {
                        let (x, y, z) = (t / (n * n), t / n % n, t % n);
                        [x, y, z][i]
                    }
                    Node::Const(b) => {
                        if b {
                            lat.top()
                        } else {
                            lat.bot()
                        }
                    }
                    Node::Unary(s, c) => a.op(s)[self.values[c][offset + t] as usize],
                    Node::Join(c, d) => lat.join(
                        self.values[c][offset + t] as usize,
                        self.values[d][offset + t] as usize,
                    ),
                    Node::Meet(c, d) => lat.meet(
                        self.values[c][offset + t] as usize,
                        self.values[d][offset + t] as usize,
                    ),
                };
                out.push(v as u32);
            }
            offset += cells;
        }
        out
    }

    fn add(&mut self, node: Node, size: usize) -> Option<usize> {
        let v = self.eval(node);
        if self.seen.contains_key(&v) {
            return None;
        }
        let id = self.nodes.len();
        self.nodes.push(node);
        self.seen.insert(v.clone(), id);
        self.values.push(v);
        self.tree_size.push(size);
        Some(id)
    }
}

/// Largest number of distinct term functions kept by the search.
const TERM_FUNCTION_CAP: usize = 1 << 16;
/// Largest number of table cells evaluated by one search.
const TERM_WORK_CAP: usize = 1 << 31;

/// Enumerates ternary terms over `∨, ∧, 0, 1` and the unary symbols by
/// increasing tree size up to `budget` nodes, keeping one term per
/// distinct function on the whole family, until one realises `targets` on
/// every member.
pub fn bounded_term_search(
    family: &[CornishAlgebra],
    targets: &[TernaryOp],
    budget: usize,
) -> Result<TermSearch> {
    let Some(first) = family.first() else {
        return Err(Error::InvalidArgument("empty family".into()));
    };
    if family.len() != targets.len() {
        return Err(Error::InvalidArgument("one target per member is required".into()));
    }
    for (a, t) in family.iter().zip(targets) {
        first.sig().require_same(a.sig())?;
        if a.len() != t.len() {
            return Err(Error::InvalidArgument("target size does not match its algebra".into()));
        }
    }
    let sig = first.sig().clone();
    let cells: usize = family.iter().map(|a| a.len().pow(3)).sum();
    if cells > 1 << 20 {
        return Err(Error::guard("term_table", 1 << 20, cells));
    }
    let target: Vec<u32> = targets
        .iter()
        .flat_map(|t| t.table().iter().map(|&v| v as u32))
        .collect();
    let mut arena = TermArena {
        algs: family,
        nodes: Vec::new(),
        values: Vec::new(),
        tree_size: Vec::new(),
        seen: HashMap::new(),
    };
    let found = |arena: &TermArena, id: usize| -> TermSearch {
        let mut sub = std::collections::HashSet::new();
        arena.collect(id, &mut sub);
        TermSearch::Found {
            term: arena.render(id, &sig),
            tree_size: arena.tree_size[id],
            dag_size: sub.len(),
        }
    };
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); budget + 1];
    if budget == 0 {
        return Ok(TermSearch::BudgetExhausted {
            tree_size_reached: 0,
            functions: 0,
        });
    }
    for node in [Node::Var(0), Node::Var(1), Node::Var(2), Node::Const(false), Node::Const(true)] {
        if let Some(id) = arena.add(node, 1) {
            by_size[1].push(id);
            if arena.values[id] == target {
                return Ok(found(&arena, id));
            }
        }
    }
    let mut work = 0usize;
    for size in 2..=budget {
        let mut candidates: Vec<Node> = Vec::new();
        for s in 0..sig.len() {
            for &c in &by_size[size - 1] {
                candidates.push(Node::Unary(s, c));
            }
        }
        for left in 1..size - 1 {
            let right = size - 1 - left;
            if left > right {
                break;
            }
            for (li, &c) in by_size[left].iter().enumerate() {
                let start = if left == right { li + 1 } else { 0 };
                for &d in &by_size[right][start..] {
                    candidates.push(Node::Join(c, d));
                    candidates.push(Node::Meet(c, d));
                }
            }
        }
        for node in candidates {
            work += cells;
            if work > TERM_WORK_CAP || arena.nodes.len() >= TERM_FUNCTION_CAP {
                return Ok(TermSearch::BudgetExhausted {
                    tree_size_reached: size,
                    functions: arena.nodes.len(),
                });
            }
            if let Some(id) = arena.add(node, size) {
                by_size[size].push(id);
                if arena.values[id] == target {
                    return Ok(found(&arena, id));
                }
            }
        }
    }
    Ok(TermSearch::BudgetExhausted {
        tree_size_reached: budget,
        functions: arena.nodes.len(),
    })
}

/// The refuting pair for `C_m` with `m` even: `Y` is `u < v < w` with `g`
/// swapping `u` and `w` and fixing `v`; `φ1` sends the points an even
/// number of steps from the base point to `u` and the others to `w`;
/// `φ2` is constant at `v`.
#[derive(Clone, Debug)]
pub struct EvenCycleWitness {
    pub m: usize,
    /// The base point. Of the two possible base points (`0` and `1`; the
    /// others repeat them) the one whose subuniverse comes first in
    /// canonical order is used.
    pub base: usize,
    pub pair: JointPair,
    pub members: BitSet,
    pub classification: SubClassification,
}

pub fn even_cycle_witness(m: usize, guards: &Guards) -> Result<EvenCycleWitness> {
    if m < 2 || m % 2 == 1 {
        return Err(Error::InvalidArgument(format!("m must be even and at least 2, got {m}")));
    }
    let x = build_cm(m)?;
    let y = CornishSpace::new(Signature::ockham(), Poset::chain(3), vec![vec![2, 1, 0]])?;
    let e = e_functor(&x, guards)?;
    let mut best: Option<EvenCycleWitness> = None;
    for base in 0..2 {
        let phi1: Vec<usize> = (0..m).map(|i| if (i + m - base).is_multiple_of(2) { 0 } else { 2 }).collect();
        let pair = JointPair::new(x.clone(), x.clone(), y.clone(), phi1, vec![1; m])
            .map_err(|err| Error::Assertion(format!("even-cycle pair is invalid: {err}")))?;
        ensure!(
            !pair.partial_map_criterion() && !pair.product_criterion(),
            "even-cycle pair satisfies a product or graph criterion"
        );
        let members = b_of(&pair, &e, &e, guards)?;
        let prod = Product::new(&e.algebra, &e.algebra)?;
        let classification = classify_sub_of_product(&prod, &members, true)?;
        ensure!(
            classification.kind == SubKind::Neither,
            "even-cycle subuniverse is classified as {:?}",
            classification.kind
        );
        if best.as_ref().is_none_or(|b| members < b.members) {
            best = Some(EvenCycleWitness {
                m,
                base,
                pair,
                members,
                classification,
            });
        }
    }
    Ok(best.expect("two candidates"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cornish::e_functor;
    use crate::ockham::build_cm;

    fn cm_algebra(m: usize) -> CornishAlgebra {
        e_functor(&build_cm(m).unwrap(), &Guards::default()).unwrap().algebra
    }

    #[test]
    fn discriminator_and_median() {
        let t = TernaryOp::discriminator(2);
        assert_eq!(t.apply(0, 0, 1), 1);
        assert_eq!(t.apply(0, 1, 0), 0);
        assert_eq!(t.apply(0, 1, 1), 0);
        let lat = DistLattice::chain(3).unwrap();
        assert_eq!(TernaryOp::median(&lat).unwrap().apply(0, 1, 2), 1);
    }

    #[test]
    fn small_cycles() {
        let g = Guards::default();
        let c1 = cm_algebra(1);
        assert!(quasi_primal_pair(&c1, &c1, &g).unwrap().is_yes());
        let c2 = cm_algebra(2);
        let v = quasi_primal_pair(&c2, &c2, &g).unwrap();
        assert_eq!(v.outcome, Outcome::No);
        assert!(matches!(v.witness, Some(Witness::BadSubuniverse { .. })));
        let fam = quasi_primal_family(&[c1.clone(), cm_algebra(3)], None, &g).unwrap();
        assert!(fam.is_yes());
        let fam = quasi_primal_family(&[c1, c2], None, &g).unwrap();
        assert_eq!(fam.outcome, Outcome::No);
    }

    #[test]
    fn internal_route() {
        let g_word = Word::letter(0);
        for m in 1..=5 {
            let v = internal_sufficient(&[build_cm(m).unwrap()], &g_word).unwrap();
            assert_eq!(v.is_yes(), m % 2 == 1, "m = {m}");
            if m % 2 == 0 {
                assert_eq!(v.outcome, Outcome::ConditionNotMet);
            }
        }
        let v = internal_sufficient(&[build_cm(3).unwrap()], &Word::empty()).unwrap();
        assert_eq!(v.outcome, Outcome::ConditionNotMet);
    }

    #[test]
    fn monotone_refutation() {
        let x = CornishSpace::new(Signature::parse("f+").unwrap(), Poset::chain(2), vec![vec![1, 1]])
            .unwrap();
        let a = e_functor(&x, &Guards::default()).unwrap().algebra;
        assert_eq!(
            order_preserving_refutation(&a),
            Some(OrderRefutation { low: 0, high: 2 })
        );
        assert_eq!(quasi_primal_pair(&a, &a, &Guards::default()).unwrap().outcome, Outcome::No);
        let trivial = CornishAlgebra::new(Signature::default(), DistLattice::chain(1).unwrap(), vec![]).unwrap();
        assert!(order_preserving_refutation(&trivial).is_none());
    }

    #[test]
    fn term_search() {
        let c1 = cm_algebra(1);
        let median = TernaryOp::median(c1.lattice()).unwrap();
        match bounded_term_search(std::slice::from_ref(&c1), &[median], 12).unwrap() {
            TermSearch::Found { dag_size, .. } => assert!(dag_size <= 8),
            other => panic!("median not found: {other:?}"),
        }
        let disc = TernaryOp::discriminator(2);
        assert!(matches!(
            bounded_term_search(std::slice::from_ref(&c1), &[disc], 12).unwrap(),
            TermSearch::Found { .. }
        ));
        let c3 = cm_algebra(3);
        assert!(matches!(
            bounded_term_search(std::slice::from_ref(&c3), &[TernaryOp::discriminator(8)], 3).unwrap(),
            TermSearch::BudgetExhausted { .. }
        ));
    }

    #[test]
    fn pixley_projections_pass() {
        let c2 = cm_algebra(2);
        let g = Guards::default();
        for i in 0..3 {
            let rep = pixley_preservation_check(std::slice::from_ref(&c2), &[TernaryOp::projection(4, i)], &g)
                .unwrap();
            assert!(rep.holds);
        }
        let disc = [TernaryOp::discriminator(4)];
        let subs = subuniverse_preservation_check(std::slice::from_ref(&c2), &disc, &g).unwrap();
        assert!(!subs.holds);
    }

    #[test]
    fn even_cycle_witness_matches_engine() {
        let g = Guards::default();
        for m in [2, 4] {
            let a = cm_algebra(m);
            let n = a.len();
            let w = even_cycle_witness(m, &g).unwrap();
            let expected: Vec<(usize, usize)> = w.members.iter().map(|x| (x / n, x % n)).collect();
            match quasi_primal_pair(&a, &a, &g).unwrap().witness {
                Some(Witness::BadSubuniverse { members, .. }) => assert_eq!(members, expected, "m = {m}"),
                other => panic!("unexpected witness {other:?}"),
            }
        }
    }

    #[test]
    fn even_cycle_witness_shape() {
        let g = Guards::default();
        assert!(even_cycle_witness(3, &g).is_err());
        let w = even_cycle_witness(2, &g).unwrap();
        assert_eq!(w.pair.phi1.image(3), BitSet::from_indices(3, [0, 2]));
        assert_eq!(w.pair.phi2.image(3), BitSet::from_indices(3, [1]));
    }
}
