//! Subalgebras of `E(X1) × E(X2)` versus jointly surjective pairs of
//! morphisms `X1 → Y ← X2`.
//!
//! A pair `(φ1, φ2)` gives the subalgebra `B(φ1, φ2) = {(α∘φ1, α∘φ2)}` with
//! `α` ranging over up-sets of `Y`; conversely every subalgebra arises this
//! way from the pair obtained by dualising its two projections.

use serde::Serialize;

use crate::bitset::BitSet;
use crate::cornish::{
    d_functor, d_mor, eval_eps_cornish, AlgebraHom, CornishAlgebra, CornishSpace, DualAlgebra,
    SpaceMorphism,
};
use crate::engine::{classify_sub_of_product, is_subuniverse, FiniteAlgebra, Product, SubClassification};
use crate::error::{ensure, Error, Result};
use crate::guards::Guards;
use crate::order::all_up_sets;

/// Two morphisms into a common space whose images cover it.
#[derive(Clone, Debug)]
pub struct JointPair {
    pub x1: CornishSpace,
    pub x2: CornishSpace,
    pub y: CornishSpace,
    pub phi1: SpaceMorphism,
    pub phi2: SpaceMorphism,
}

impl JointPair {
    pub fn new(
        x1: CornishSpace,
        x2: CornishSpace,
        y: CornishSpace,
        phi1: Vec<usize>,
        phi2: Vec<usize>,
    ) -> Result<Self> {
        let phi1 = SpaceMorphism::new(&x1, &y, phi1)?;
        let phi2 = SpaceMorphism::new(&x2, &y, phi2)?;
        let cover = phi1.image(y.len()).union(&phi2.image(y.len()));
        if !cover.is_full() {
            return Err(Error::InvalidArgument(format!(
                "morphisms are not jointly surjective: points {:?} are missed",
                cover.complement()
            )));
        }
        Ok(JointPair {
            x1,
            x2,
            y,
            phi1,
            phi2,
        })
    }

    fn images(&self) -> (BitSet, BitSet) {
        (self.phi1.image(self.y.len()), self.phi2.image(self.y.len()))
    }

    /// `Y` is the disjoint union of the two images with no order relations
    /// between them.
    pub fn product_criterion(&self) -> bool {
        let (i1, i2) = self.images();
        i1.is_disjoint(&i2)
            && i1
                .iter()
                .all(|a| i2.iter().all(|b| !self.y.poset().comparable(a, b)))
    }

    /// Both morphisms are surjective.
    pub fn partial_map_criterion(&self) -> bool {
        let (i1, i2) = self.images();
        i1.is_full() && i2.is_full()
    }

    /// Whether `other` is the same pair up to an isomorphism of `Y` that
    /// commutes with both morphisms. Joint surjectivity forces the
    /// isomorphism, so no search is needed.
    pub fn equivalent_to(&self, other: &JointPair) -> bool {
        if self.y.len() != other.y.len()
            || self.x1 != other.x1
            || self.x2 != other.x2
        {
            return false;
        }
        let mut psi = vec![usize::MAX; self.y.len()];
        let assignments = (0..self.x1.len())
            .map(|x| (self.phi1.apply(x), other.phi1.apply(x)))
            .chain((0..self.x2.len()).map(|x| (self.phi2.apply(x), other.phi2.apply(x))));
        for (from, to) in assignments {
            if psi[from] != usize::MAX && psi[from] != to {
                return false;
            }
            psi[from] = to;
        }
        if SpaceMorphism::new(&self.y, &other.y, psi.clone()).is_err() {
            return false;
        }
        let mut inverse = vec![usize::MAX; psi.len()];
        for (a, &b) in psi.iter().enumerate() {
            if inverse[b] != usize::MAX {
                return false;
            }
            inverse[b] = a;
        }
        SpaceMorphism::new(&other.y, &self.y, inverse).is_ok()
    }
}

/// `B(φ1, φ2)` as a set of indices into `E(X1) × E(X2)`. Checked to be a
/// subuniverse onto which `α ↦ (α∘φ1, α∘φ2)` is injective.
pub fn b_of(pair: &JointPair, e1: &DualAlgebra, e2: &DualAlgebra, guards: &Guards) -> Result<BitSet> {
    let prod = Product::new(&e1.algebra, &e2.algebra)?;
    let n = prod.size();
    if n > guards.product {
        return Err(Error::guard("product", guards.product, n));
    }
    let alphas = all_up_sets(pair.y.poset(), guards.up_sets)?;
    let mut members = BitSet::new(n);
    for alpha in &alphas {
        let u1 = e1
            .carrier
            .element_of(&alpha.preimage(pair.phi1.table()))
            .ok_or_else(|| Error::Assertion("α∘φ1 is not an up-set".into()))?;
        let u2 = e2
            .carrier
            .element_of(&alpha.preimage(pair.phi2.table()))
            .ok_or_else(|| Error::Assertion("α∘φ2 is not an up-set".into()))?;
        members.insert(prod.index(u1, u2));
    }
    ensure!(
        members.len() == alphas.len(),
        "α ↦ (α∘φ1, α∘φ2) is not injective for a jointly surjective pair"
    );
    ensure!(is_subuniverse(&prod, &members), "B(φ1, φ2) is not a subuniverse");
    Ok(members)
}

/// The subalgebra of `a1 × a2` on `members`, with its elements listed in
/// increasing product index.
pub fn product_subalgebra(
    a1: &CornishAlgebra,
    a2: &CornishAlgebra,
    members: &BitSet,
) -> Result<(CornishAlgebra, Vec<usize>)> {
    let prod = Product::new(a1, a2)?;
    let incl = members.to_vec();
    let m = incl.len();
    let mut pos = std::collections::HashMap::new();
    for (i, &x) in incl.iter().enumerate() {
        pos.insert(x, i);
    }
    let lookup = |x: usize| {
        pos.get(&x)
            .copied()
            .ok_or_else(|| Error::InvalidArgument("subset is not a subuniverse".into()))
    };
    let order = crate::order::Poset::from_relation(m, |i, j| {
        let ((a, b), (c, d)) = (prod.pair(incl[i]), prod.pair(incl[j]));
        a1.lattice().leq(a, c) && a2.lattice().leq(b, d)
    })?;
    let mut join = vec![0; m * m];
    let mut meet = vec![0; m * m];
    for i in 0..m {
        for j in 0..m {
            join[i * m + j] = lookup(prod.binary(0, incl[i], incl[j]))?;
            meet[i * m + j] = lookup(prod.binary(1, incl[i], incl[j]))?;
        }
    }
    let lat = crate::birkhoff::DistLattice::from_parts(order, join, meet);
    let ops = (0..prod.unary_count())
        .map(|u| incl.iter().map(|&x| lookup(prod.unary(u, x))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok((CornishAlgebra::new(a1.sig().clone(), lat, ops)?, incl))
}

/// The pair `φi = D(ρi) ∘ ε_Xi` for a subuniverse `b` of `E(X1) × E(X2)`,
/// where `ρi` are the projections of `b`. Checked to be jointly surjective
/// with `B(φ1, φ2) = b`.
pub fn canonical_pair(
    x1: &CornishSpace,
    x2: &CornishSpace,
    e1: &DualAlgebra,
    e2: &DualAlgebra,
    b: &BitSet,
    guards: &Guards,
) -> Result<JointPair> {
    let (sub, incl) = product_subalgebra(&e1.algebra, &e2.algebra, b)?;
    let n2 = e2.algebra.len();
    let rho1 = AlgebraHom::new(&sub, &e1.algebra, incl.iter().map(|&x| x / n2).collect())?;
    let rho2 = AlgebraHom::new(&sub, &e2.algebra, incl.iter().map(|&x| x % n2).collect())?;
    let y = d_functor(&sub)?;
    let (ex1, dex1, eps1) = eval_eps_cornish(x1, guards)?;
    let (ex2, dex2, eps2) = eval_eps_cornish(x2, guards)?;
    ensure!(
        ex1.carrier.up_sets == e1.carrier.up_sets && ex2.carrier.up_sets == e2.carrier.up_sets,
        "E(Xi) was not built in canonical order"
    );
    let d1 = d_mor(&rho1, &y, &dex1)?;
    let d2 = d_mor(&rho2, &y, &dex2)?;
    let phi1 = eps1.then(&d1);
    let phi2 = eps2.then(&d2);
    let pair = JointPair::new(
        x1.clone(),
        x2.clone(),
        y.space,
        phi1.table().to_vec(),
        phi2.table().to_vec(),
    )
    .map_err(|e| Error::Assertion(format!("canonical pair is invalid: {e}")))?;
    let back = b_of(&pair, e1, e2, guards)?;
    ensure!(back == *b, "B of the canonical pair differs from the subuniverse");
    Ok(pair)
}

#[derive(Clone, Debug, Serialize)]
pub struct CriteriaReport {
    pub classification: SubClassification,
    pub product_criterion: bool,
    pub partial_map_criterion: bool,
}

/// Classifies `B(φ1, φ2)` and checks that the space-side criteria agree
/// with the algebra-side classification.
pub fn check_pair_criteria(
    pair: &JointPair,
    e1: &DualAlgebra,
    e2: &DualAlgebra,
    guards: &Guards,
) -> Result<CriteriaReport> {
    let b = b_of(pair, e1, e2, guards)?;
    let prod = Product::new(&e1.algebra, &e2.algebra)?;
    let same = pair.x1 == pair.x2;
    let classification = classify_sub_of_product(&prod, &b, same)?;
    let report = CriteriaReport {
        product_criterion: pair.product_criterion(),
        partial_map_criterion: pair.partial_map_criterion(),
        classification,
    };
    ensure!(
        report.product_criterion == report.classification.is_product,
        "product criterion disagrees with the classification"
    );
    ensure!(
        report.partial_map_criterion == report.classification.is_partial_iso,
        "partial-map criterion disagrees with the classification"
    );
    if same {
        let equal_maps = pair.phi1 == pair.phi2;
        let diagonal = b.iter().all(|x| prod.pair(x).0 == prod.pair(x).1);
        ensure!(equal_maps == diagonal, "φ1 = φ2 should hold exactly for diagonal subalgebras");
    }
    Ok(report)
}

/// For `u = (u1, u2): A → B1 × B2`, checks that `u` is injective exactly
/// when `D(u1)` and `D(u2)` are jointly surjective onto `D(A)`.
pub fn joint_embedding_transfer(
    a: &CornishAlgebra,
    b1: &CornishAlgebra,
    b2: &CornishAlgebra,
    u1: &AlgebraHom,
    u2: &AlgebraHom,
) -> Result<bool> {
    let injective = {
        let mut seen = std::collections::HashSet::new();
        (0..a.len()).all(|x| seen.insert((u1.apply(x), u2.apply(x))))
    };
    let da = d_functor(a)?;
    let db1 = d_functor(b1)?;
    let db2 = d_functor(b2)?;
    let v1 = d_mor(u1, &da, &db1)?;
    let v2 = d_mor(u2, &da, &db2)?;
    let jointly_surjective = v1
        .image(da.space.len())
        .union(&v2.image(da.space.len()))
        .is_full();
    ensure!(
        injective == jointly_surjective,
        "embedding into a product without jointly surjective duals (injective = {injective})"
    );
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cornish::{e_functor, Signature};
    use crate::engine::{all_subuniverses, SubKind};
    use crate::order::Poset;

    fn cycle(m: usize) -> CornishSpace {
        CornishSpace::new(
            Signature::ockham(),
            Poset::antichain(m),
            vec![(0..m).map(|i| (i + 1) % m).collect()],
        )
        .unwrap()
    }

    #[test]
    fn identity_pair_gives_diagonal() {
        let g = Guards::default();
        let c2 = cycle(2);
        let e = e_functor(&c2, &g).unwrap();
        let pair = JointPair::new(c2.clone(), c2.clone(), c2.clone(), vec![0, 1], vec![0, 1]).unwrap();
        let b = b_of(&pair, &e, &e, &g).unwrap();
        assert_eq!(b, BitSet::from_indices(16, [0, 5, 10, 15]));
        let rep = check_pair_criteria(&pair, &e, &e, &g).unwrap();
        assert_eq!(rep.classification.kind, SubKind::IdentityGraph);
        assert!(rep.partial_map_criterion && !rep.product_criterion);
    }

    #[test]
    fn disjoint_union_gives_full_product() {
        let g = Guards::default();
        let c1 = cycle(1);
        let c2 = cycle(2);
        let (y, i1, i2) = c1.disjoint_union(&c2).unwrap();
        let e1 = e_functor(&c1, &g).unwrap();
        let e2 = e_functor(&c2, &g).unwrap();
        let pair = JointPair::new(c1, c2, y, i1, i2).unwrap();
        assert_eq!(b_of(&pair, &e1, &e2, &g).unwrap(), BitSet::full(8));
        assert!(check_pair_criteria(&pair, &e1, &e2, &g).unwrap().product_criterion);
    }

    #[test]
    fn canonical_pairs_invert_b() {
        let g = Guards::default();
        let c2 = cycle(2);
        let e = e_functor(&c2, &g).unwrap();
        let prod = Product::new(&e.algebra, &e.algebra).unwrap();
        for b in all_subuniverses(&prod, 4096, 1000).unwrap() {
            let pair = canonical_pair(&c2, &c2, &e, &e, &b, &g).unwrap();
            let again = canonical_pair(&c2, &c2, &e, &e, &b_of(&pair, &e, &e, &g).unwrap(), &g).unwrap();
            assert!(pair.equivalent_to(&again));
            check_pair_criteria(&pair, &e, &e, &g).unwrap();
        }
    }

    #[test]
    fn diagonal_has_equal_maps() {
        let g = Guards::default();
        let c2 = cycle(2);
        let e = e_functor(&c2, &g).unwrap();
        let diag = BitSet::from_indices(16, [0, 5, 10, 15]);
        let pair = canonical_pair(&c2, &c2, &e, &e, &diag, &g).unwrap();
        assert_eq!(pair.phi1, pair.phi2);
        let full = canonical_pair(&c2, &c2, &e, &e, &BitSet::full(16), &g).unwrap();
        assert_eq!(full.y.len(), 4);
        assert!(full.product_criterion());
    }

    #[test]
    fn embedding_transfer() {
        let g = Guards::default();
        let e = e_functor(&cycle(2), &g).unwrap().algebra;
        let id = AlgebraHom::new(&e, &e, vec![0, 1, 2, 3]).unwrap();
        assert!(joint_embedding_transfer(&e, &e, &e, &id, &id).unwrap());
        // E(C2) is simple, so its only non-injective image is trivial
        let trivial = e_functor(
            &CornishSpace::new(Signature::ockham(), Poset::antichain(0), vec![vec![]]).unwrap(),
            &g,
        )
        .unwrap()
        .algebra;
        let collapse = AlgebraHom::new(&e, &trivial, vec![0; 4]).unwrap();
        assert!(joint_embedding_transfer(&e, &trivial, &trivial, &collapse, &collapse).unwrap());
    }
}
