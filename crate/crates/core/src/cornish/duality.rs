//! The functors `D` (algebras to spaces) and `E` (spaces to algebras).
//!
//! A plus-symbol acts by preimage on both sides; a minus-symbol acts by
//! complement of the preimage, which turns an order-reversing map into a
//! dual endomorphism and back.

use super::algebra::{AlgebraHom, CornishAlgebra};
use super::signature::Polarity;
use super::space::{CornishSpace, SpaceMorphism};
use crate::birkhoff::{PrimeFilterSpace, UpSetLattice};
use crate::bitset::BitSet;
use crate::error::{ensure, Error, Result};
use crate::guards::Guards;

/// `E(X)` with the up-set each element stands for.
#[derive(Clone, Debug)]
pub struct DualAlgebra {
    pub algebra: CornishAlgebra,
    pub carrier: UpSetLattice,
}

impl DualAlgebra {
    pub fn up_set(&self, element: usize) -> &BitSet {
        &self.carrier.up_sets[element]
    }
}

/// `D(A)` with the prime filter each point stands for.
#[derive(Clone, Debug)]
pub struct DualSpace {
    pub space: CornishSpace,
    pub filters: PrimeFilterSpace,
}

impl DualSpace {
    pub fn filter(&self, point: usize) -> &BitSet {
        &self.filters.filters[point]
    }
}

fn act(set: &BitSet, map: &[usize], pol: Polarity) -> BitSet {
    let pre = set.preimage(map);
    match pol {
        Polarity::Plus => pre,
        Polarity::Minus => pre.complement(),
    }
}

pub fn e_functor(x: &CornishSpace, guards: &Guards) -> Result<DualAlgebra> {
    let carrier = UpSetLattice::new(x.poset(), guards)?;
    let ops = x
        .sig()
        .symbols()
        .map(|(s, name, pol)| {
            carrier
                .up_sets
                .iter()
                .map(|u| {
                    carrier.element_of(&act(u, x.map(s), pol)).ok_or_else(|| {
                        Error::Assertion(format!("`{name}` does not send up-sets to up-sets"))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let algebra = CornishAlgebra::new(x.sig().clone(), carrier.lattice.clone(), ops)?;
    Ok(DualAlgebra { algebra, carrier })
}

pub fn d_functor(a: &CornishAlgebra) -> Result<DualSpace> {
    let filters = PrimeFilterSpace::new(a.lattice());
    let maps = a
        .sig()
        .symbols()
        .map(|(s, name, pol)| {
            filters
                .filters
                .iter()
                .map(|p| {
                    filters.point_of(&act(p, a.op(s), pol)).ok_or_else(|| {
                        Error::Assertion(format!("`{name}` does not send prime filters to prime filters"))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let space = CornishSpace::new(a.sig().clone(), filters.poset.clone(), maps)?;
    Ok(DualSpace { space, filters })
}

/// `e_A: A → ED(A)`, asserted to be an isomorphism.
pub fn eval_e_cornish(
    a: &CornishAlgebra,
    guards: &Guards,
) -> Result<(DualSpace, DualAlgebra, AlgebraHom)> {
    let d = d_functor(a)?;
    let ed = e_functor(&d.space, guards)?;
    let k = d.filters.filters.len();
    let img = (0..a.len())
        .map(|x| {
            let u = BitSet::from_indices(k, (0..k).filter(|&p| d.filter(p).contains(x)));
            ed.carrier
                .element_of(&u)
                .ok_or_else(|| Error::Assertion("e_A(a) is not an up-set".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let e = AlgebraHom::new(a, &ed.algebra, img)
        .map_err(|err| Error::Assertion(format!("e_A is not a homomorphism: {err}")))?;
    ensure!(e.is_isomorphism(), "e_A is not an isomorphism");
    Ok((d, ed, e))
}

/// `ε_X: X → DE(X)`, asserted to be an isomorphism.
pub fn eval_eps_cornish(
    x: &CornishSpace,
    guards: &Guards,
) -> Result<(DualAlgebra, DualSpace, SpaceMorphism)> {
    let e = e_functor(x, guards)?;
    let de = d_functor(&e.algebra)?;
    let m = e.carrier.up_sets.len();
    let img = (0..x.len())
        .map(|p| {
            let f = BitSet::from_indices(m, (0..m).filter(|&u| e.up_set(u).contains(p)));
            de.filters
                .point_of(&f)
                .ok_or_else(|| Error::Assertion("ε_X(x) is not a prime filter".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let eps = SpaceMorphism::new(x, &de.space, img)
        .map_err(|err| Error::Assertion(format!("ε_X is not a morphism: {err}")))?;
    let bijective = eps.image(de.space.len()).is_full() && de.space.len() == x.len();
    let reflects = (0..x.len()).all(|p| {
        (0..x.len()).all(|q| x.poset().leq(p, q) == de.space.poset().leq(eps.apply(p), eps.apply(q)))
    });
    ensure!(bijective && reflects, "ε_X is not an isomorphism");
    Ok((e, de, eps))
}

/// `E(φ)`: for `φ: X → Y`, the homomorphism `E(Y) → E(X)` taking preimages.
pub fn e_mor(phi: &SpaceMorphism, ex: &DualAlgebra, ey: &DualAlgebra) -> Result<AlgebraHom> {
    let img = ey
        .carrier
        .up_sets
        .iter()
        .map(|u| {
            ex.carrier
                .element_of(&u.preimage(phi.table()))
                .ok_or_else(|| Error::Assertion("preimage of an up-set is not an up-set".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    AlgebraHom::new(&ey.algebra, &ex.algebra, img)
}

/// `D(u)`: for `u: A → B`, the morphism `D(B) → D(A)` taking preimages.
pub fn d_mor(u: &AlgebraHom, da: &DualSpace, db: &DualSpace) -> Result<SpaceMorphism> {
    let img = db
        .filters
        .filters
        .iter()
        .map(|p| {
            da.filters
                .point_of(&p.preimage(u.table()))
                .ok_or_else(|| Error::Assertion("preimage of a prime filter is not prime".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    SpaceMorphism::new(&db.space, &da.space, img)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birkhoff::DistLattice;
    use crate::cornish::Signature;
    use crate::order::Poset;

    fn chain_space(pol: &str) -> CornishSpace {
        CornishSpace::new(Signature::parse(pol).unwrap(), Poset::chain(2), vec![vec![1, 1]])
            .unwrap()
    }

    #[test]
    fn plus_map_on_two_chain() {
        // up-sets: ∅, {1}, {0,1} = 0 < a < 1
        let e = e_functor(&chain_space("f+"), &Guards::default()).unwrap();
        assert_eq!(e.algebra.op(0), &[0, 2, 2]);
    }

    #[test]
    fn minus_map_on_two_chain() {
        let space = CornishSpace::new(Signature::parse("f-").unwrap(), Poset::chain(2), vec![vec![1, 1]]);
        // constant maps reverse the order too
        let e = e_functor(&space.unwrap(), &Guards::default()).unwrap();
        assert_eq!(e.algebra.op(0), &[2, 0, 0]);
    }

    #[test]
    fn identity_minus_on_antichain() {
        let x = CornishSpace::new(Signature::parse("f-").unwrap(), Poset::antichain(2), vec![vec![0, 1]])
            .unwrap();
        let e = e_functor(&x, &Guards::default()).unwrap();
        // ∅, {0}, {1}, {0,1}
        assert_eq!(e.algebra.op(0), &[3, 2, 1, 0]);
    }

    #[test]
    fn de_morgan_dual_is_swapped_pair() {
        let lat = DistLattice::from_poset(
            Poset::from_pairs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap(),
        )
        .unwrap();
        let a = CornishAlgebra::new(Signature::ockham(), lat, vec![vec![3, 1, 2, 0]]).unwrap();
        let d = d_functor(&a).unwrap();
        assert_eq!(d.space.len(), 2);
        assert!(!d.space.poset().comparable(0, 1));
        assert_eq!(d.space.map(0), &[1, 0]);
        eval_e_cornish(&a, &Guards::default()).unwrap();
    }

    #[test]
    fn round_trips() {
        let g = Guards::default();
        let y2 = CornishSpace::new(
            Signature::parse("f+ g-").unwrap(),
            Poset::chain(2),
            vec![vec![1, 1], vec![1, 0]],
        )
        .unwrap();
        let (e, _, _) = eval_eps_cornish(&y2, &g).unwrap();
        let (d, _, _) = eval_e_cornish(&e.algebra, &g).unwrap();
        assert!(d.space.isomorphism_to(&y2, 12).unwrap().is_some());
        let trivial = CornishSpace::new(Signature::default(), Poset::antichain(0), vec![]).unwrap();
        let (e0, _, _) = eval_eps_cornish(&trivial, &g).unwrap();
        assert!(e0.algebra.is_trivial());
        eval_e_cornish(&e0.algebra, &g).unwrap();
    }

    #[test]
    fn morphism_actions() {
        let g = Guards::default();
        let c2 = CornishSpace::new(Signature::ockham(), Poset::antichain(2), vec![vec![1, 0]]).unwrap();
        let y3 = CornishSpace::new(Signature::ockham(), Poset::chain(3), vec![vec![2, 1, 0]]).unwrap();
        let phi = SpaceMorphism::new(&c2, &y3, vec![0, 2]).unwrap();
        let ec2 = e_functor(&c2, &g).unwrap();
        let ey3 = e_functor(&y3, &g).unwrap();
        let u = e_mor(&phi, &ec2, &ey3).unwrap();
        let dc = d_functor(&ec2.algebra).unwrap();
        let dy = d_functor(&ey3.algebra).unwrap();
        let back = d_mor(&u, &dy, &dc).unwrap();
        assert!(back.image(dy.space.len()).len() == 2);
    }
}
