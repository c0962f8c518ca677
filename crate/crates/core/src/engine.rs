//! Subuniverses, products, partial isomorphisms and congruences of finite
//! algebras given by operation tables.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::bitset::BitSet;
use crate::cornish::{d_functor, CornishAlgebra};
use crate::error::{ensure, Error, Result};
use crate::guards::Guards;

/// How subuniverses are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureKind {
    /// Binary operations 0 and 1 are the join and meet of a distributive
    /// lattice and every unary operation is an endomorphism or a dual
    /// endomorphism. Then the generated subuniverse is the join-closure of
    /// the meet-closure of the unary orbit of the seed.
    Lattice,
    /// Plain fixpoint iteration over all operations.
    Generic,
}

/// A finite algebra with constants, binary and unary operations over
/// elements `0..size()`.
pub trait FiniteAlgebra {
    fn size(&self) -> usize;
    /// Elements named by nullary operations.
    fn constants(&self) -> Vec<usize>;
    fn binary_count(&self) -> usize;
    fn binary(&self, op: usize, a: usize, b: usize) -> usize;
    fn unary_count(&self) -> usize;
    fn unary(&self, op: usize, a: usize) -> usize;
    fn closure_kind(&self) -> ClosureKind;
    /// Height in the lattice order; only used by [`ClosureKind::Lattice`].
    fn rank(&self, _a: usize) -> usize {
        0
    }
}

impl FiniteAlgebra for CornishAlgebra {
    fn size(&self) -> usize {
        self.len()
    }

    fn constants(&self) -> Vec<usize> {
        vec![self.lattice().bot(), self.lattice().top()]
    }

    fn binary_count(&self) -> usize {
        2
    }

    fn binary(&self, op: usize, a: usize, b: usize) -> usize {
        if op == 0 {
            self.lattice().join(a, b)
        } else {
            self.lattice().meet(a, b)
        }
    }

    fn unary_count(&self) -> usize {
        self.ops().len()
    }

    fn unary(&self, op: usize, a: usize) -> usize {
        self.op(op)[a]
    }

    fn closure_kind(&self) -> ClosureKind {
        ClosureKind::Lattice
    }

    fn rank(&self, a: usize) -> usize {
        self.lattice().rank(a)
    }
}

/// `left × right`, with the pair `(a, b)` at index `a·|right| + b`.
pub struct Product<'a, A: FiniteAlgebra> {
    pub left: &'a A,
    pub right: &'a A,
}

impl<'a, A: FiniteAlgebra> Product<'a, A> {
    pub fn new(left: &'a A, right: &'a A) -> Result<Self> {
        if left.binary_count() != right.binary_count()
            || left.unary_count() != right.unary_count()
            || left.constants().len() != right.constants().len()
        {
            return Err(Error::SignatureMismatch("factors have different types".into()));
        }
        Ok(Product { left, right })
    }

    #[inline]
    pub fn pair(&self, x: usize) -> (usize, usize) {
        let n2 = self.right.size();
        (x / n2, x % n2)
    }

    #[inline]
    pub fn index(&self, a: usize, b: usize) -> usize {
        a * self.right.size() + b
    }
}

impl<A: FiniteAlgebra> FiniteAlgebra for Product<'_, A> {
    fn size(&self) -> usize {
        self.left.size() * self.right.size()
    }

    fn constants(&self) -> Vec<usize> {
        self.left
            .constants()
            .into_iter()
            .zip(self.right.constants())
            .map(|(a, b)| self.index(a, b))
            .collect()
    }

    fn binary_count(&self) -> usize {
        self.left.binary_count()
    }

    fn binary(&self, op: usize, x: usize, y: usize) -> usize {
        let ((a, b), (c, d)) = (self.pair(x), self.pair(y));
        self.index(self.left.binary(op, a, c), self.right.binary(op, b, d))
    }

    fn unary_count(&self) -> usize {
        self.left.unary_count()
    }

    fn unary(&self, op: usize, x: usize) -> usize {
        let (a, b) = self.pair(x);
        self.index(self.left.unary(op, a), self.right.unary(op, b))
    }

    fn closure_kind(&self) -> ClosureKind {
        if self.left.closure_kind() == ClosureKind::Lattice
            && self.right.closure_kind() == ClosureKind::Lattice
        {
            ClosureKind::Lattice
        } else {
            ClosureKind::Generic
        }
    }

    fn rank(&self, x: usize) -> usize {
        let (a, b) = self.pair(x);
        self.left.rank(a) + self.right.rank(b)
    }
}

/// A growing set that remembers insertion order.
struct Members {
    set: BitSet,
    list: Vec<usize>,
}

impl Members {
    fn from_set(set: &BitSet) -> Self {
        Members {
            list: set.to_vec(),
            set: set.clone(),
        }
    }

    fn push(&mut self, x: usize) -> bool {
        if self.set.insert(x) {
            self.list.push(x);
            true
        } else {
            false
        }
    }
}

fn unary_orbit<A: FiniteAlgebra + ?Sized>(alg: &A, closed: &BitSet, extra: &BitSet) -> Vec<usize> {
    let mut seen = closed.clone();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = extra.iter().filter(|&x| !closed.contains(x)).collect();
    for &x in &stack {
        seen.insert(x);
    }
    while let Some(x) = stack.pop() {
        out.push(x);
        for u in 0..alg.unary_count() {
            let y = alg.unary(u, x);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    out
}

/// Adds generators one at a time to a set already closed under `op`.
/// Adding `g` to an `op`-closed `M` (for an associative, commutative,
/// idempotent `op`) needs only `g` and `g op m`, `m ∈ M`.
fn close_incrementally<A: FiniteAlgebra + ?Sized>(alg: &A, op: usize, members: &mut Members, gens: &[usize]) {
    for &g in gens {
        if members.set.contains(g) {
            continue;
        }
        let before = members.list.len();
        members.push(g);
        for i in 0..before {
            let y = alg.binary(op, g, members.list[i]);
            members.push(y);
        }
    }
}

/// The least subuniverse containing `closed ∪ extra`, where `closed` is
/// already a subuniverse.
pub fn extend_subuniverse<A: FiniteAlgebra + ?Sized>(alg: &A, closed: &BitSet, extra: &BitSet) -> BitSet {
    match alg.closure_kind() {
        ClosureKind::Lattice => {
            let mut gens = unary_orbit(alg, closed, extra);
            if gens.is_empty() {
                return closed.clone();
            }
            gens.sort_by_key(|&x| std::cmp::Reverse(alg.rank(x)));
            let mut meets = Members::from_set(closed);
            close_incrementally(alg, 1, &mut meets, &gens);
            let mut added: Vec<usize> = meets.list[closed.len()..].to_vec();
            added.sort_by_key(|&x| alg.rank(x));
            let mut joins = Members::from_set(closed);
            close_incrementally(alg, 0, &mut joins, &added);
            joins.set
        }
        ClosureKind::Generic => {
            let mut members = Members::from_set(closed);
            let first_new = members.list.len();
            for x in extra.iter() {
                members.push(x);
            }
            let mut i = first_new;
            while i < members.list.len() {
                let x = members.list[i];
                for u in 0..alg.unary_count() {
                    members.push(alg.unary(u, x));
                }
                for op in 0..alg.binary_count() {
                    for j in 0..=i {
                        let y = members.list[j];
                        members.push(alg.binary(op, x, y));
                        members.push(alg.binary(op, y, x));
                    }
                }
                i += 1;
            }
            members.set
        }
    }
}

/// The subuniverse generated by `seed` and the constants.
pub fn sg<A: FiniteAlgebra + ?Sized>(alg: &A, seed: &BitSet) -> BitSet {
    let n = alg.size();
    let mut extra = seed.clone();
    for c in alg.constants() {
        extra.insert(c);
    }
    if alg.closure_kind() == ClosureKind::Lattice && alg.binary_count() < 2 {
        // No meet to close under: fall back to plain iteration.
        return generic_closure(alg, &extra);
    }
    extend_subuniverse(alg, &BitSet::new(n), &extra)
}

fn generic_closure<A: FiniteAlgebra + ?Sized>(alg: &A, seed: &BitSet) -> BitSet {
    let mut members = Members::from_set(&BitSet::new(alg.size()));
    for x in seed.iter() {
        members.push(x);
    }
    let mut i = 0;
    while i < members.list.len() {
        let x = members.list[i];
        for u in 0..alg.unary_count() {
            members.push(alg.unary(u, x));
        }
        for op in 0..alg.binary_count() {
            for j in 0..=i {
                let y = members.list[j];
                members.push(alg.binary(op, x, y));
                members.push(alg.binary(op, y, x));
            }
        }
        i += 1;
    }
    members.set
}

pub fn is_subuniverse<A: FiniteAlgebra + ?Sized>(alg: &A, s: &BitSet) -> bool {
    alg.constants().iter().all(|&c| s.contains(c))
        && s.iter().all(|x| {
            (0..alg.unary_count()).all(|u| s.contains(alg.unary(u, x)))
                && s.iter().all(|y| {
                    (0..alg.binary_count()).all(|op| s.contains(alg.binary(op, x, y)))
                })
        })
}

/// Every subuniverse exactly once, sorted as membership sets.
///
/// Each subuniverse other than the least one is `sg(S ∪ P)` for a smaller
/// subuniverse `S` and a singly generated `P ⊄ S`, so expanding from the
/// least subuniverse reaches all of them.
pub fn all_subuniverses<A: FiniteAlgebra + ?Sized>(
    alg: &A,
    size_limit: usize,
    count_cap: usize,
) -> Result<Vec<BitSet>> {
    let n = alg.size();
    if n > size_limit {
        return Err(Error::guard("subuniverse_parent", size_limit, n));
    }
    let bottom = sg(alg, &BitSet::new(n));
    let principals = principal_subuniverses(alg, &bottom);
    let mut seen: HashSet<BitSet> = HashSet::from([bottom.clone()]);
    let mut stack = vec![bottom];
    while let Some(s) = stack.pop() {
        for p in &principals {
            if p.is_subset(&s) {
                continue;
            }
            let t = extend_subuniverse(alg, &s, p);
            if !seen.contains(&t) {
                if seen.len() >= count_cap {
                    return Err(Error::guard("subuniverses", count_cap, seen.len() + 1));
                }
                seen.insert(t.clone());
                stack.push(t);
            }
        }
    }
    let mut out: Vec<BitSet> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Distinct subuniverses `sg({x})` for `x` outside `bottom`, sorted.
fn principal_subuniverses<A: FiniteAlgebra + ?Sized>(alg: &A, bottom: &BitSet) -> Vec<BitSet> {
    let n = alg.size();
    let mut by_orbit: HashMap<Vec<usize>, BitSet> = HashMap::new();
    let mut out: HashSet<BitSet> = HashSet::new();
    for x in 0..n {
        if bottom.contains(x) {
            continue;
        }
        let single = BitSet::from_indices(n, [x]);
        let p = if alg.closure_kind() == ClosureKind::Lattice {
            // Elements with the same unary orbit generate the same subuniverse.
            let mut orbit = unary_orbit(alg, bottom, &single);
            orbit.sort_unstable();
            by_orbit
                .entry(orbit)
                .or_insert_with(|| extend_subuniverse(alg, bottom, &single))
                .clone()
        } else {
            extend_subuniverse(alg, bottom, &single)
        };
        out.insert(p);
    }
    let mut v: Vec<BitSet> = out.into_iter().collect();
    v.sort();
    v
}

/// All subsets closed under the operations, by filtering every subset.
/// Test oracle for small algebras.
pub fn subuniverses_brute_force<A: FiniteAlgebra + ?Sized>(alg: &A) -> Result<Vec<BitSet>> {
    let n = alg.size();
    if n > 20 {
        return Err(Error::guard("subuniverse_brute_force", 20, n));
    }
    Ok((0u64..1 << n)
        .map(|bits| BitSet::from_bits(n, bits))
        .filter(|s| is_subuniverse(alg, s))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubKind {
    Product,
    IdentityGraph,
    PartialIsoGraph,
    Neither,
}

/// Why a subuniverse of a product is neither a product nor a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubViolation {
    /// A pair of projections that is missing from the subuniverse.
    pub missing: (usize, usize),
    /// Two members sharing one coordinate but not the other.
    pub clash: ((usize, usize), (usize, usize)),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubClassification {
    pub kind: SubKind,
    pub is_product: bool,
    pub is_partial_iso: bool,
    pub is_identity: bool,
    pub violation: Option<SubViolation>,
}

/// Classifies a subuniverse of `left × right`. `same_factor` says whether
/// both factors are the same algebra, which is needed for identity graphs.
/// A graph that is a bijection between the projections is checked to be an
/// isomorphism of the projection subalgebras.
pub fn classify_sub_of_product<A: FiniteAlgebra>(
    prod: &Product<'_, A>,
    members: &BitSet,
    same_factor: bool,
) -> Result<SubClassification> {
    let (n1, n2) = (prod.left.size(), prod.right.size());
    let pairs: Vec<(usize, usize)> = members.iter().map(|x| prod.pair(x)).collect();
    let proj1 = BitSet::from_indices(n1, pairs.iter().map(|p| p.0));
    let proj2 = BitSet::from_indices(n2, pairs.iter().map(|p| p.1));
    let is_product = pairs.len() == proj1.len() * proj2.len();

    let mut forward: Vec<Option<usize>> = vec![None; n1];
    let mut backward: Vec<Option<usize>> = vec![None; n2];
    let mut clash = None;
    for &(a, b) in &pairs {
        if let Some(b0) = forward[a] {
            if b0 != b && clash.is_none() {
                clash = Some(((a, b0), (a, b)));
            }
        } else {
            forward[a] = Some(b);
        }
        if let Some(a0) = backward[b] {
            if a0 != a && clash.is_none() {
                clash = Some(((a0, b), (a, b)));
            }
        } else {
            backward[b] = Some(a);
        }
    }
    let is_partial_iso = clash.is_none();
    if is_partial_iso {
        check_graph_is_isomorphism(prod, &forward, &proj1)?;
    }
    let is_identity = is_partial_iso && same_factor && pairs.iter().all(|&(a, b)| a == b);
    let kind = if is_product {
        SubKind::Product
    } else if is_identity {
        SubKind::IdentityGraph
    } else if is_partial_iso {
        SubKind::PartialIsoGraph
    } else {
        SubKind::Neither
    };
    let violation = if kind == SubKind::Neither {
        let missing = proj1
            .iter()
            .flat_map(|a| proj2.iter().map(move |b| (a, b)))
            .find(|&(a, b)| !members.contains(prod.index(a, b)))
            .expect("not a product, so some pair is missing");
        Some(SubViolation {
            missing,
            clash: clash.expect("not a graph, so some pair clashes"),
        })
    } else {
        None
    };
    Ok(SubClassification {
        kind,
        is_product,
        is_partial_iso,
        is_identity,
        violation,
    })
}

fn check_graph_is_isomorphism<A: FiniteAlgebra>(
    prod: &Product<'_, A>,
    forward: &[Option<usize>],
    dom: &BitSet,
) -> Result<()> {
    let map = |a: usize| forward[a].expect("in domain");
    for a in dom.iter() {
        for u in 0..prod.left.unary_count() {
            ensure!(
                map(prod.left.unary(u, a)) == prod.right.unary(u, map(a)),
                "graph bijection does not commute with unary operation {u}"
            );
        }
        for c in dom.iter() {
            for op in 0..prod.left.binary_count() {
                ensure!(
                    map(prod.left.binary(op, a, c)) == prod.right.binary(op, map(a), map(c)),
                    "graph bijection does not preserve binary operation {op}"
                );
            }
        }
    }
    Ok(())
}

/// Graphs of isomorphisms between subalgebras of `a1` and of `a2`.
pub fn partial_isomorphisms<A: FiniteAlgebra>(a1: &A, a2: &A, guards: &Guards) -> Result<Vec<BitSet>> {
    let prod = Product::new(a1, a2)?;
    let subs = all_subuniverses(&prod, guards.product, guards.subuniverses)?;
    let mut out = Vec::new();
    for s in subs {
        if classify_sub_of_product(&prod, &s, false)?.is_partial_iso {
            out.push(s);
        }
    }
    Ok(out)
}

/// An equivalence relation stored as block labels numbered in order of
/// first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Congruence {
    blocks: Vec<usize>,
}

impl Congruence {
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map: HashMap<usize, usize> = HashMap::new();
        let blocks = labels
            .iter()
            .map(|&l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Congruence { blocks }
    }

    pub fn identity(n: usize) -> Self {
        Congruence {
            blocks: (0..n).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        Congruence { blocks: vec![0; n] }
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.iter().max().map_or(0, |&m| m + 1)
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.blocks[a] == self.blocks[b]
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Congruence) -> bool {
        let n = self.blocks.len();
        (0..n).all(|a| (0..n).all(|b| !self.related(a, b) || other.related(a, b)))
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let pairs: Vec<(usize, usize)> = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(&a, &b)| (a, b))
            .collect();
        let mut map: HashMap<(usize, usize), usize> = HashMap::new();
        let labels: Vec<usize> = pairs
            .iter()
            .map(|p| {
                let next = map.len();
                *map.entry(*p).or_insert(next)
            })
            .collect();
        Congruence { blocks: labels }
    }

    /// Equivalence join (for congruences this is the congruence join).
    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.blocks.len());
        for c in [self, other] {
            let mut first: HashMap<usize, usize> = HashMap::new();
            for (x, &b) in c.blocks.iter().enumerate() {
                let r = *first.entry(b).or_insert(x);
                uf.union(r, x);
            }
        }
        uf.to_congruence()
    }

    /// Relational composition `self ∘ other` equals `other ∘ self`.
    pub fn permutes_with(&self, other: &Congruence) -> bool {
        let n = self.blocks.len();
        let compose = |p: &Congruence, q: &Congruence, a: usize, c: usize| {
            (0..n).any(|b| p.related(a, b) && q.related(b, c))
        };
        (0..n).all(|a| (0..n).all(|c| compose(self, other, a, c) == compose(other, self, a, c)))
    }

    pub fn is_compatible<A: FiniteAlgebra + ?Sized>(&self, alg: &A) -> bool {
        let n = alg.size();
        (0..n).all(|a| {
            (0..n).all(|b| {
                !self.related(a, b)
                    || ((0..alg.unary_count())
                        .all(|u| self.related(alg.unary(u, a), alg.unary(u, b)))
                        && (0..n).all(|c| {
                            (0..alg.binary_count()).all(|op| {
                                self.related(alg.binary(op, a, c), alg.binary(op, b, c))
                                    && self.related(alg.binary(op, c, a), alg.binary(op, c, b))
                            })
                        }))
            })
        })
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }

    fn to_congruence(&mut self) -> Congruence {
        let labels: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Congruence::from_labels(&labels)
    }
}

/// The least congruence relating `a` and `b`.
pub fn principal_congruence<A: FiniteAlgebra + ?Sized>(alg: &A, a: usize, b: usize) -> Congruence {
    let n = alg.size();
    let mut uf = UnionFind::new(n);
    uf.union(a, b);
    loop {
        let mut changed = false;
        for x in 0..n {
            let r = uf.find(x);
            if r == x {
                continue;
            }
            for u in 0..alg.unary_count() {
                changed |= uf.union(alg.unary(u, x), alg.unary(u, r));
            }
            for op in 0..alg.binary_count() {
                for c in 0..n {
                    changed |= uf.union(alg.binary(op, x, c), alg.binary(op, r, c));
                    changed |= uf.union(alg.binary(op, c, x), alg.binary(op, c, r));
                }
            }
        }
        if !changed {
            return uf.to_congruence();
        }
    }
}

/// Every congruence, finest first (by block count, then labels).
pub fn all_congruences<A: FiniteAlgebra + ?Sized>(alg: &A, size_limit: usize) -> Result<Vec<Congruence>> {
    let n = alg.size();
    if n > size_limit {
        return Err(Error::guard("congruence_parent", size_limit, n));
    }
    let mut principals: Vec<Congruence> = Vec::new();
    let mut seen_p: HashSet<Congruence> = HashSet::new();
    for a in 0..n {
        for b in a + 1..n {
            let c = principal_congruence(alg, a, b);
            if seen_p.insert(c.clone()) {
                principals.push(c);
            }
        }
    }
    let delta = Congruence::identity(n);
    let mut seen: HashSet<Congruence> = HashSet::from([delta.clone()]);
    let mut stack = vec![delta];
    while let Some(c) = stack.pop() {
        for p in &principals {
            let j = c.join(p);
            if seen.insert(j.clone()) {
                stack.push(j);
            }
        }
    }
    let mut out: Vec<Congruence> = seen.into_iter().collect();
    out.sort_by(|x, y| y.block_count().cmp(&x.block_count()).then_with(|| x.cmp(y)));
    Ok(out)
}

/// At least two elements and only the two trivial congruences.
pub fn is_simple<A: FiniteAlgebra + ?Sized>(alg: &A) -> bool {
    let n = alg.size();
    n >= 2
        && (0..n).all(|a| (a + 1..n).all(|b| principal_congruence(alg, a, b).block_count() == 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConSubReport {
    pub congruences: usize,
    pub substructures: usize,
    /// `θ ↦ u(θ)` is a bijection onto the closed substructures.
    pub bijective: bool,
    /// `θ ⊆ ψ ⟺ u(ψ) ⊆ u(θ)`.
    pub order_reversing: bool,
    /// `u(θ)` equals the image of the dual of the quotient map.
    pub matches_quotient_image: bool,
}

impl ConSubReport {
    pub fn holds(&self) -> bool {
        self.bijective && self.order_reversing && self.matches_quotient_image
    }
}

/// Checks that `θ ↦ { P ∈ D(A) : θ ⊆ ker P }` is an order-reversing
/// bijection from congruences of `a` onto closed substructures of `D(a)`,
/// and that each set equals the image of `D(A/θ) → D(A)`. Any failure is an
/// assertion error.
pub fn con_sub_duality_check(a: &CornishAlgebra, guards: &Guards) -> Result<ConSubReport> {
    let cons = all_congruences(a, guards.congruence_parent)?;
    let d = d_functor(a)?;
    let subs = d.space.substructures(guards.substructures)?;
    let k = d.space.len();
    let kernel_contains = |theta: &Congruence| {
        BitSet::from_indices(
            k,
            (0..k).filter(|&p| {
                let f = d.filter(p);
                (0..a.len()).all(|x| (0..a.len()).all(|y| !theta.related(x, y) || f.contains(x) == f.contains(y)))
            }),
        )
    };
    let images: Vec<BitSet> = cons.iter().map(kernel_contains).collect();
    let distinct: HashSet<&BitSet> = images.iter().collect();
    let bijective = distinct.len() == images.len()
        && images.len() == subs.len()
        && images.iter().all(|s| subs.binary_search(s).is_ok());
    let order_reversing = (0..cons.len()).all(|i| {
        (0..cons.len()).all(|j| cons[i].refines(&cons[j]) == images[j].is_subset(&images[i]))
    });
    let mut matches_quotient_image = true;
    for (theta, img) in cons.iter().zip(&images) {
        let (q, eta) = a.quotient(theta.blocks())?;
        let dq = d_functor(&q)?;
        let literal = BitSet::from_indices(
            k,
            dq.filters.filters.iter().map(|f| {
                d.filters
                    .point_of(&f.preimage(&eta))
                    .expect("preimage of a prime filter is prime")
            }),
        );
        matches_quotient_image &= literal == *img;
    }
    let report = ConSubReport {
        congruences: cons.len(),
        substructures: subs.len(),
        bijective,
        order_reversing,
        matches_quotient_image,
    };
    ensure!(report.holds(), "congruence/substructure correspondence fails: {report:?}");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birkhoff::DistLattice;
    use crate::cornish::{e_functor, CornishSpace, Signature};
    use crate::order::Poset;
    use proptest::prelude::*;

    fn a2() -> CornishAlgebra {
        // 0 < a1 < 1 ; f: 0->0 a1->1 1->1 ; g: a1 fixed, 0<->1
        CornishAlgebra::new(
            Signature::parse("f+ g-").unwrap(),
            DistLattice::chain(3).unwrap(),
            vec![vec![0, 2, 2], vec![2, 1, 0]],
        )
        .unwrap()
    }

    fn cycle_algebra(m: usize) -> CornishAlgebra {
        let x = CornishSpace::new(
            Signature::ockham(),
            Poset::antichain(m),
            vec![(0..m).map(|i| (i + 1) % m).collect()],
        )
        .unwrap();
        e_functor(&x, &Guards::default()).unwrap().algebra
    }

    #[test]
    fn generation_in_a2() {
        let a = a2();
        assert_eq!(sg(&a, &BitSet::new(3)), BitSet::from_indices(3, [0, 2]));
        assert_eq!(sg(&a, &BitSet::from_indices(3, [1])), BitSet::full(3));
        assert_eq!(sg(&a, &BitSet::full(3)), BitSet::full(3));
        assert_eq!(
            all_subuniverses(&a, 64, 1000).unwrap(),
            subuniverses_brute_force(&a).unwrap()
        );
    }

    #[test]
    fn two_element_algebra_has_one_subuniverse() {
        let two = CornishAlgebra::new(Signature::default(), DistLattice::chain(2).unwrap(), vec![])
            .unwrap();
        assert_eq!(all_subuniverses(&two, 64, 10).unwrap().len(), 1);
        assert!(is_simple(&two));
        assert_eq!(all_congruences(&two, 32).unwrap().len(), 2);
    }

    #[test]
    fn products_match_brute_force() {
        let c2 = cycle_algebra(2);
        let prod = Product::new(&c2, &c2).unwrap();
        let fast = all_subuniverses(&prod, 4096, 1000).unwrap();
        assert_eq!(fast, subuniverses_brute_force(&prod).unwrap());
        let diag = BitSet::from_indices(16, (0..4).map(|i| i * 4 + i));
        assert!(fast.contains(&diag));
        assert!(fast.contains(&BitSet::full(16)));
        let a = a2();
        let pa = Product::new(&a, &a).unwrap();
        assert_eq!(
            all_subuniverses(&pa, 4096, 1000).unwrap(),
            subuniverses_brute_force(&pa).unwrap()
        );
    }

    #[test]
    fn classification() {
        let a = a2();
        let p = Product::new(&a, &a).unwrap();
        let full = classify_sub_of_product(&p, &BitSet::full(9), true).unwrap();
        assert_eq!(full.kind, SubKind::Product);
        let diag = BitSet::from_indices(9, [0, 4, 8]);
        let d = classify_sub_of_product(&p, &diag, true).unwrap();
        assert_eq!(d.kind, SubKind::IdentityGraph);
        let c2 = cycle_algebra(2);
        let pc = Product::new(&c2, &c2).unwrap();
        let swap = BitSet::from_indices(16, [0, 4 + 2, 8 + 1, 15]);
        let s = classify_sub_of_product(&pc, &swap, true).unwrap();
        assert_eq!(s.kind, SubKind::PartialIsoGraph);
        let neither = BitSet::from_indices(16, [0, 4 + 1, 4 + 2, 15]);
        let n = classify_sub_of_product(&pc, &neither, true).unwrap();
        assert_eq!(n.kind, SubKind::Neither);
        assert!(n.violation.is_some());
    }

    #[test]
    fn partial_isomorphisms_of_a2() {
        let a = a2();
        let graphs = partial_isomorphisms(&a, &a, &Guards::default()).unwrap();
        let p = Product::new(&a, &a).unwrap();
        for g in &graphs {
            let c = classify_sub_of_product(&p, g, true).unwrap();
            assert!(c.is_identity);
        }
        // {0,1} and the whole algebra, each with its identity map
        assert_eq!(graphs.len(), 2);
    }

    #[test]
    fn congruences() {
        let a = a2();
        assert!(is_simple(&a));
        let cons = all_congruences(&a, 32).unwrap();
        assert_eq!(cons, vec![Congruence::identity(3), Congruence::total(3)]);
        let b = CornishAlgebra::new(
            Signature::parse("f+").unwrap(),
            DistLattice::from_poset(Poset::from_pairs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap())
                .unwrap(),
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap();
        let cons = all_congruences(&b, 32).unwrap();
        assert_eq!(cons.len(), 4);
        for c in &cons {
            assert!(c.is_compatible(&b));
            for d in &cons {
                assert!(cons.contains(&c.meet(d)));
            }
        }
        assert!(all_congruences(&cycle_algebra(6), 32).unwrap_err().is_guard());
    }

    #[test]
    fn con_sub() {
        let g = Guards::default();
        let rep = con_sub_duality_check(&a2(), &g).unwrap();
        assert_eq!((rep.congruences, rep.substructures), (2, 2));
        let x = CornishSpace::new(Signature::parse("f+").unwrap(), Poset::antichain(2), vec![vec![0, 1]])
            .unwrap();
        let e = e_functor(&x, &g).unwrap();
        let rep = con_sub_duality_check(&e.algebra, &g).unwrap();
        assert_eq!((rep.congruences, rep.substructures), (4, 4));
    }

    proptest! {
        #[test]
        fn sg_is_a_closure_operator(a in 0u64..1 << 16, b in 0u64..1 << 16) {
            let c4 = cycle_algebra(4);
            let s = BitSet::from_bits(16, a);
            let t = BitSet::from_bits(16, a | b);
            let gs = sg(&c4, &s);
            prop_assert!(s.is_subset(&gs));
            prop_assert!(gs.is_subset(&sg(&c4, &t)));
            prop_assert_eq!(sg(&c4, &gs), gs.clone());
            prop_assert!(is_subuniverse(&c4, &gs));
        }
    }
}
