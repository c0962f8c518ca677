//! Distributive double p-algebras: a bounded distributive lattice with its
//! pseudocomplement `*` and dual pseudocomplement `⁺`.

use serde::Serialize;

use crate::birkhoff::{DistLattice, UpSetLattice};
use crate::engine::{all_congruences, ClosureKind, Congruence, FiniteAlgebra};
use crate::error::{ensure, Error, Result};
use crate::guards::Guards;
use crate::order::{extremal_profile, is_connected, max_above, min_below, MonotoneMap, Poset};
use crate::primality::{classify_product_subuniverses, Certificate, PairCheck, TernaryOp, Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdpAlgebra {
    lat: DistLattice,
    star: Vec<usize>,
    plus: Vec<usize>,
}

/// `x*` is the largest `y` with `x ∧ y = 0` and `x⁺` the least `y` with
/// `x ∨ y = 1`; both exist in every finite distributive lattice.
pub fn ddp_from_lattice(lat: DistLattice) -> Result<DdpAlgebra> {
    let n = lat.len();
    let (bot, top) = (lat.bot(), lat.top());
    let star: Vec<usize> = (0..n)
        .map(|x| (0..n).filter(|&y| lat.meet(x, y) == bot).fold(bot, |acc, y| lat.join(acc, y)))
        .collect();
    let plus: Vec<usize> = (0..n)
        .map(|x| (0..n).filter(|&y| lat.join(x, y) == top).fold(top, |acc, y| lat.meet(acc, y)))
        .collect();
    for x in 0..n {
        for y in 0..n {
            ensure!(
                (lat.meet(x, y) == bot) == lat.leq(y, star[x]),
                "pseudocomplement law fails at ({x}, {y})"
            );
            ensure!(
                (lat.join(x, y) == top) == lat.leq(plus[x], y),
                "dual pseudocomplement law fails at ({x}, {y})"
            );
        }
    }
    Ok(DdpAlgebra { lat, star, plus })
}

impl DdpAlgebra {
    /// The ddp-algebra on the up-set lattice of `p`.
    pub fn of_poset(p: &Poset, guards: &Guards) -> Result<Self> {
        ddp_from_lattice(UpSetLattice::new(p, guards)?.lattice)
    }

    pub fn lattice(&self) -> &DistLattice {
        &self.lat
    }

    pub fn len(&self) -> usize {
        self.lat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lat.is_empty()
    }

    pub fn star(&self, x: usize) -> usize {
        self.star[x]
    }

    pub fn plus(&self, x: usize) -> usize {
        self.plus[x]
    }

    /// `a* = b*` and `a⁺ = b⁺` imply `a = b`.
    pub fn is_regular(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (a + 1..n).all(|b| self.star[a] != self.star[b] || self.plus[a] != self.plus[b]))
    }
}

impl FiniteAlgebra for DdpAlgebra {
    fn size(&self) -> usize {
        self.lat.len()
    }

    fn constants(&self) -> Vec<usize> {
        vec![self.lat.bot(), self.lat.top()]
    }

    fn binary_count(&self) -> usize {
        2
    }

    fn binary(&self, op: usize, a: usize, b: usize) -> usize {
        if op == 0 {
            self.lat.join(a, b)
        } else {
            self.lat.meet(a, b)
        }
    }

    fn unary_count(&self) -> usize {
        2
    }

    fn unary(&self, op: usize, a: usize) -> usize {
        if op == 0 {
            self.star[a]
        } else {
            self.plus[a]
        }
    }

    fn closure_kind(&self) -> ClosureKind {
        ClosureKind::Generic
    }
}

/// `φ(max(x)) = max(φ(x))` and `φ(min(x)) = min(φ(x))` for every `x`, where
/// `max(x)` is the set of maximal elements above `x`.
pub fn is_ddp_morphism(phi: &MonotoneMap, dom: &Poset, cod: &Poset) -> bool {
    (0..dom.len()).all(|x| {
        let y = phi.apply(x);
        max_above(dom, x).image(phi.table(), cod.len()) == max_above(cod, y)
            && min_below(dom, x).image(phi.table(), cod.len()) == min_below(cod, y)
    })
}

/// The three equivalent conditions on the ddp-algebra of a poset, each
/// computed independently.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicityTriple {
    pub congruences: usize,
    /// Exactly two congruences.
    pub simple: bool,
    pub regular: bool,
    pub directly_indecomposable: bool,
    pub connected: bool,
    pub all_extremal: bool,
    /// The common value of the three conditions.
    pub value: bool,
}

impl SimplicityTriple {
    pub fn regular_and_indecomposable(&self) -> bool {
        self.regular && self.directly_indecomposable
    }

    pub fn connected_all_extremal(&self) -> bool {
        self.connected && self.all_extremal
    }
}

/// Non-trivial, and the only complementary pairs of permuting congruences
/// are the trivial ones.
fn directly_indecomposable(cons: &[Congruence], n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let (delta, nabla) = (Congruence::identity(n), Congruence::total(n));
    !cons.iter().any(|theta| {
        *theta != delta
            && *theta != nabla
            && cons.iter().any(|psi| {
                theta.meet(psi) == delta && theta.join(psi) == nabla && theta.permutes_with(psi)
            })
    })
}

/// Computes the triple for the ddp-algebra on the up-set lattice of a
/// non-empty poset and asserts that the three conditions agree.
pub fn ddp_simplicity_triple(p: &Poset, guards: &Guards) -> Result<SimplicityTriple> {
    if p.is_empty() {
        return Err(Error::InvalidArgument("the poset must be non-empty".into()));
    }
    let a = DdpAlgebra::of_poset(p, guards)?;
    let cons = all_congruences(&a, guards.congruence_parent)?;
    let simple = cons.len() == 2;
    let regular = a.is_regular();
    let indecomposable = directly_indecomposable(&cons, a.len());
    let connected = is_connected(p);
    let all_extremal = extremal_profile(p).all_extremal;
    let t = SimplicityTriple {
        congruences: cons.len(),
        simple,
        regular,
        directly_indecomposable: indecomposable,
        connected,
        all_extremal,
        value: simple,
    };
    ensure!(
        t.simple == t.regular_and_indecomposable() && t.simple == t.connected_all_extremal(),
        "ddp simplicity conditions disagree: {t:?}"
    );
    Ok(t)
}

/// Whether the ddp-algebras of `posets` are quasi-primal with a common
/// discriminator term: yes exactly when every poset is connected with
/// every element maximal or minimal. Pairs within the product guard are
/// cross-checked by classifying the subuniverses of the product.
pub fn ddp_quasi_primal_family(posets: &[Poset], guards: &Guards) -> Result<Verdict> {
    if posets.is_empty() {
        return Err(Error::InvalidArgument("empty family".into()));
    }
    let mut failing = None;
    for (member, p) in posets.iter().enumerate() {
        if p.is_empty() {
            return Err(Error::InvalidArgument(format!("poset {member} is empty")));
        }
        let connected = is_connected(p);
        let all_extremal = extremal_profile(p).all_extremal;
        if failing.is_none() && !(connected && all_extremal) {
            failing = Some(Witness::DdpCondition {
                member,
                connected,
                all_extremal,
            });
        }
    }
    let algebras: Vec<Option<DdpAlgebra>> = posets
        .iter()
        .map(|p| match DdpAlgebra::of_poset(p, guards) {
            Ok(a) => Ok(Some(a)),
            Err(e) if e.is_guard() => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let mut notes = Vec::new();
    let mut checked = 0;
    for i in 0..algebras.len() {
        for j in i..algebras.len() {
            let (Some(a1), Some(a2)) = (&algebras[i], &algebras[j]) else {
                continue;
            };
            TernaryOp::median(a1.lattice())?;
            TernaryOp::median(a2.lattice())?;
            let passes = match classify_product_subuniverses(a1, a2, i == j, false, guards)? {
                PairCheck::Passed { .. } => true,
                PairCheck::Failed { .. } => false,
                PairCheck::Guard(_) => continue,
            };
            checked += 1;
            if failing.is_none() {
                ensure!(passes, "condition holds but pair ({i}, {j}) has a bad subuniverse");
            } else if i == j {
                let member_ok = is_connected(&posets[i]) && extremal_profile(&posets[i]).all_extremal;
                ensure!(
                    passes == member_ok,
                    "condition and subuniverse check disagree on member {i}"
                );
            }
        }
    }
    notes.push(format!("{checked} pairs cross-checked by subuniverse classification"));
    let mut v = match failing {
        Some(w) => Verdict::no(w),
        None => Verdict::yes(Certificate::Ddp {
            members: posets.len(),
        }),
    };
    v.notes = notes;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ddp(n: usize) -> DdpAlgebra {
        ddp_from_lattice(DistLattice::chain(n).unwrap()).unwrap()
    }

    #[test]
    fn pseudocomplements() {
        let two = ddp(2);
        assert_eq!((two.star(0), two.star(1), two.plus(0), two.plus(1)), (1, 0, 1, 0));
        let three = ddp(3);
        assert_eq!((three.star(1), three.plus(1), three.star(0), three.star(2)), (0, 2, 2, 0));
        let b4 = DdpAlgebra::of_poset(&Poset::antichain(2), &Guards::default()).unwrap();
        for x in 0..4 {
            assert_eq!(b4.star(x), 3 - x);
            assert_eq!(b4.plus(x), 3 - x);
        }
    }

    #[test]
    fn morphisms() {
        let c2 = Poset::chain(2);
        let c3 = Poset::chain(3);
        assert!(is_ddp_morphism(&MonotoneMap::identity(&c3), &c3, &c3));
        let to_point = MonotoneMap::new(&c2, &Poset::chain(1), vec![0, 0]).unwrap();
        assert!(is_ddp_morphism(&to_point, &c2, &Poset::chain(1)));
        let collapse = MonotoneMap::new(&c3, &c2, vec![0, 1, 1]).unwrap();
        assert!(is_ddp_morphism(&collapse, &c3, &c2));
        let into = MonotoneMap::new(&c2, &c3, vec![0, 1]).unwrap();
        assert!(!is_ddp_morphism(&into, &c2, &c3));
    }

    #[test]
    fn triples() {
        let g = Guards::default();
        let t = ddp_simplicity_triple(&Poset::chain(2), &g).unwrap();
        assert!(t.simple && t.regular_and_indecomposable() && t.connected_all_extremal());
        let t = ddp_simplicity_triple(&Poset::chain(3), &g).unwrap();
        assert!(!t.simple && !t.regular_and_indecomposable() && !t.all_extremal);
        let t = ddp_simplicity_triple(&Poset::antichain(2), &g).unwrap();
        assert!(!t.simple && !t.directly_indecomposable && !t.connected);
        assert!(ddp_simplicity_triple(&Poset::antichain(0), &g).is_err());
    }

    #[test]
    fn families() {
        let g = Guards::default();
        let crown = Poset::from_pairs(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert!(ddp_quasi_primal_family(&[Poset::chain(2)], &g).unwrap().is_yes());
        assert!(!ddp_quasi_primal_family(&[Poset::chain(3)], &g).unwrap().is_yes());
        assert!(ddp_quasi_primal_family(&[Poset::chain(2), crown], &g).unwrap().is_yes());
    }
}
