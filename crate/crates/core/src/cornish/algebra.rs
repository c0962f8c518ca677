use super::signature::{Polarity, Signature, Word};
use crate::birkhoff::DistLattice;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::guards::Guards;
use crate::order::Poset;

/// A bounded distributive lattice with one unary operation per symbol;
/// plus-operations are endomorphisms and minus-operations are dual
/// endomorphisms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CornishAlgebra {
    sig: Signature,
    lat: DistLattice,
    ops: Vec<Vec<usize>>,
}

impl CornishAlgebra {
    pub fn new(sig: Signature, lat: DistLattice, ops: Vec<Vec<usize>>) -> Result<Self> {
        let n = lat.len();
        if ops.len() != sig.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} operations for {} symbols",
                ops.len(),
                sig.len()
            )));
        }
        for (s, name, pol) in sig.symbols() {
            let op = &ops[s];
            if op.len() != n || op.iter().any(|&y| y >= n) {
                return Err(Error::InvalidMap(format!("`{name}` is not a total operation")));
            }
            check_polarity_law(&lat, op, name, pol)?;
        }
        Ok(CornishAlgebra { sig, lat, ops })
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
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

    /// The one-element algebra, where `0 = 1` makes every law hold.
    pub fn is_trivial(&self) -> bool {
        self.len() == 1
    }

    pub fn ops(&self) -> &[Vec<usize>] {
        &self.ops
    }

    pub fn op(&self, sym: usize) -> &[usize] {
        &self.ops[sym]
    }

    pub fn word_action(&self, w: &Word) -> Vec<usize> {
        w.action_table(&self.ops, self.len())
    }

    /// The direct product with pair `(a, b)` stored at index `a·|other| + b`.
    pub fn product(&self, other: &CornishAlgebra, guards: &Guards) -> Result<CornishAlgebra> {
        self.sig.require_same(&other.sig)?;
        let (n1, n2) = (self.len(), other.len());
        let n = n1 * n2;
        if n > guards.lattice_elements {
            return Err(Error::guard("lattice_elements", guards.lattice_elements, n));
        }
        let pair = |i: usize| (i / n2, i % n2);
        let order = Poset::from_relation(n, |x, y| {
            let ((a, b), (c, d)) = (pair(x), pair(y));
            self.lat.leq(a, c) && other.lat.leq(b, d)
        })?;
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let ((a, b), (c, d)) = (pair(x), pair(y));
                join[x * n + y] = self.lat.join(a, c) * n2 + other.lat.join(b, d);
                meet[x * n + y] = self.lat.meet(a, c) * n2 + other.lat.meet(b, d);
            }
        }
        let lat = DistLattice::from_parts(order, join, meet);
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(o1, o2)| (0..n).map(|x| o1[x / n2] * n2 + o2[x % n2]).collect())
            .collect();
        Ok(CornishAlgebra {
            sig: self.sig.clone(),
            lat,
            ops,
        })
    }

    /// The subalgebra on `members` (which must be a subuniverse) with the
    /// inclusion map in increasing order.
    pub fn subalgebra(&self, members: &BitSet) -> Result<(CornishAlgebra, Vec<usize>)> {
        let (lat, incl) = sublattice(&self.lat, members)?;
        let pos = positions(&incl, self.len());
        let ops = self
            .ops
            .iter()
            .map(|op| {
                incl.iter()
                    .map(|&x| {
                        let y = pos[op[x]];
                        if y == usize::MAX {
                            Err(Error::InvalidArgument("subset is not closed under the operations".into()))
                        } else {
                            Ok(y)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((
            CornishAlgebra {
                sig: self.sig.clone(),
                lat,
                ops,
            },
            incl,
        ))
    }

    /// The quotient by a congruence given as block labels `0..k` (labels in
    /// order of first occurrence), with the natural map.
    pub fn quotient(&self, blocks: &[usize]) -> Result<(CornishAlgebra, Vec<usize>)> {
        let k = blocks.iter().max().map_or(0, |&m| m + 1);
        let mut rep = vec![usize::MAX; k];
        for (x, &b) in blocks.iter().enumerate() {
            if rep[b] == usize::MAX {
                rep[b] = x;
            }
        }
        let n = self.len();
        let order = Poset::from_relation(k, |p, q| {
            blocks[self.lat.join(rep[p], rep[q])] == q
        })
        .map_err(|e| Error::InvalidArgument(format!("not a congruence: {e}")))?;
        let mut join = vec![0; k * k];
        let mut meet = vec![0; k * k];
        for p in 0..k {
            for q in 0..k {
                join[p * k + q] = blocks[self.lat.join(rep[p], rep[q])];
                meet[p * k + q] = blocks[self.lat.meet(rep[p], rep[q])];
            }
        }
        for x in 0..n {
            for y in 0..n {
                if blocks[self.lat.join(x, y)] != join[blocks[x] * k + blocks[y]]
                    || blocks[self.lat.meet(x, y)] != meet[blocks[x] * k + blocks[y]]
                {
                    return Err(Error::InvalidArgument("partition is not a congruence".into()));
                }
            }
        }
        let ops = self
            .ops
            .iter()
            .map(|op| {
                for x in 0..n {
                    if blocks[op[x]] != blocks[op[rep[blocks[x]]]] {
                        return Err(Error::InvalidArgument("partition is not a congruence".into()));
                    }
                }
                Ok((0..k).map(|p| blocks[op[rep[p]]]).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        let lat = DistLattice::from_parts(order, join, meet);
        Ok((
            CornishAlgebra {
                sig: self.sig.clone(),
                lat,
                ops,
            },
            blocks.to_vec(),
        ))
    }
}

pub(crate) fn positions(incl: &[usize], n: usize) -> Vec<usize> {
    let mut pos = vec![usize::MAX; n];
    for (i, &x) in incl.iter().enumerate() {
        pos[x] = i;
    }
    pos
}

/// The bounded sublattice on `members`, with tables inherited from `lat`.
pub(crate) fn sublattice(lat: &DistLattice, members: &BitSet) -> Result<(DistLattice, Vec<usize>)> {
    if !members.contains(lat.bot()) || !members.contains(lat.top()) {
        return Err(Error::InvalidArgument("subset misses a bound".into()));
    }
    let (order, incl) = lat.order().restrict(members);
    let pos = positions(&incl, lat.len());
    let m = incl.len();
    let mut join = vec![0; m * m];
    let mut meet = vec![0; m * m];
    for (i, &a) in incl.iter().enumerate() {
        for (j, &b) in incl.iter().enumerate() {
            let (jn, mt) = (pos[lat.join(a, b)], pos[lat.meet(a, b)]);
            if jn == usize::MAX || mt == usize::MAX {
                return Err(Error::InvalidArgument("subset is not a sublattice".into()));
            }
            join[i * m + j] = jn;
            meet[i * m + j] = mt;
        }
    }
    Ok((DistLattice::from_parts(order, join, meet), incl))
}

fn check_polarity_law(lat: &DistLattice, op: &[usize], name: &str, pol: Polarity) -> Result<()> {
    let violation = |detail: String| Error::Polarity {
        symbol: name.to_string(),
        detail,
    };
    let (bot, top) = (lat.bot(), lat.top());
    let (want_bot, want_top) = match pol {
        Polarity::Plus => (bot, top),
        Polarity::Minus => (top, bot),
    };
    if op[bot] != want_bot || op[top] != want_top {
        return Err(violation("bounds are not sent where the polarity requires".into()));
    }
    let n = lat.len();
    for a in 0..n {
        for b in a + 1..n {
            let (j, m) = (lat.join(a, b), lat.meet(a, b));
            let (ej, em) = match pol {
                Polarity::Plus => (lat.join(op[a], op[b]), lat.meet(op[a], op[b])),
                Polarity::Minus => (lat.meet(op[a], op[b]), lat.join(op[a], op[b])),
            };
            if op[j] != ej || op[m] != em {
                return Err(violation(format!(
                    "law fails on the pair ({a}, {b})"
                )));
            }
        }
    }
    Ok(())
}

/// A lattice homomorphism commuting with every operation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraHom {
    img: Vec<usize>,
    cod_len: usize,
}

impl AlgebraHom {
    pub fn new(dom: &CornishAlgebra, cod: &CornishAlgebra, img: Vec<usize>) -> Result<Self> {
        dom.sig.require_same(&cod.sig)?;
        crate::birkhoff::LatticeHom::new(&dom.lat, &cod.lat, img.clone())?;
        for (s, name, _) in dom.sig.symbols() {
            for x in 0..dom.len() {
                if img[dom.ops[s][x]] != cod.ops[s][img[x]] {
                    return Err(Error::InvalidMap(format!(
                        "does not commute with `{name}` at element {x}"
                    )));
                }
            }
        }
        Ok(AlgebraHom {
            img,
            cod_len: cod.len(),
        })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.img[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.img
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BitSet::new(self.cod_len);
        self.img.iter().all(|&y| seen.insert(y))
    }

    pub fn is_surjective(&self) -> bool {
        BitSet::from_indices(self.cod_len, self.img.iter().copied()).is_full()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.img.len() == self.cod_len && self.is_injective()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn de_morgan4() -> CornishAlgebra {
        // 0 < a, b < 1 ; g fixes a and b and swaps the bounds
        let lat = DistLattice::from_poset(
            Poset::from_pairs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap(),
        )
        .unwrap();
        CornishAlgebra::new(Signature::ockham(), lat, vec![vec![3, 1, 2, 0]]).unwrap()
    }

    #[test]
    fn laws_are_checked() {
        let lat = DistLattice::chain(3).unwrap();
        let sig = Signature::parse("f+").unwrap();
        assert!(CornishAlgebra::new(sig.clone(), lat.clone(), vec![vec![0, 2, 2]]).is_ok());
        assert!(matches!(
            CornishAlgebra::new(sig, lat.clone(), vec![vec![2, 1, 0]]),
            Err(Error::Polarity { .. })
        ));
        assert!(CornishAlgebra::new(Signature::ockham(), lat, vec![vec![2, 1, 0]]).is_ok());
        de_morgan4();
    }

    #[test]
    fn trivial_algebra_is_admitted() {
        let lat = DistLattice::chain(1).unwrap();
        let a = CornishAlgebra::new(Signature::ockham(), lat, vec![vec![0]]).unwrap();
        assert!(a.is_trivial());
    }

    #[test]
    fn products_subalgebras_quotients() {
        let a = de_morgan4();
        let p = a.product(&a, &Guards::default()).unwrap();
        assert_eq!(p.len(), 16);
        let diag = BitSet::from_indices(16, (0..4).map(|i| i * 4 + i));
        let (d, incl) = p.subalgebra(&diag).unwrap();
        assert_eq!(d, a);
        assert_eq!(incl, vec![0, 5, 10, 15]);
        // first projection kernel
        let blocks: Vec<usize> = (0..16).map(|x| x / 4).collect();
        let (q, _) = p.quotient(&blocks).unwrap();
        assert_eq!(q, a);
        assert!(p.quotient(&(0..16).map(|x| usize::from(x == 5)).collect::<Vec<_>>()).is_err());
    }

    #[test]
    fn homomorphisms() {
        let a = de_morgan4();
        assert!(AlgebraHom::new(&a, &a, vec![0, 2, 1, 3]).unwrap().is_isomorphism());
        let lat2 = DistLattice::chain(2).unwrap();
        let two = CornishAlgebra::new(Signature::ockham(), lat2, vec![vec![1, 0]]).unwrap();
        // a and b are fixed by g, so no homomorphism can send them to 0 or 1
        assert!(AlgebraHom::new(&a, &two, vec![0, 0, 1, 1]).is_err());
    }
}
