//! Ockham spaces: one order-reversing map `g`. The cycle spaces `C_m`
//! (an `m`-element antichain with `g` an `m`-cycle) are exactly the duals of
//! quasi-primal Ockham algebras when `m` is odd.

use serde::Serialize;

use crate::cornish::{CornishSpace, Signature};
use crate::error::{Error, Result};
use crate::order::{is_antichain, Poset};
use crate::primality::{even_cycle_witness, Certificate, Outcome, Verdict, Witness};
use crate::guards::Guards;
use crate::bitset::BitSet;

/// `C_m`: points `0..m`, no order relations, `g(i) = i + 1 mod m`.
pub fn build_cm(m: usize) -> Result<CornishSpace> {
    if m < 1 {
        return Err(Error::InvalidArgument("C_m needs m ≥ 1".into()));
    }
    CornishSpace::new(
        Signature::ockham(),
        Poset::antichain(m),
        vec![(0..m).map(|i| (i + 1) % m).collect()],
    )
}

/// Why a space is not isomorphic to any `C_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotCycleReason {
    Empty,
    NotAntichain,
    NotSingleCycle,
}

/// `Ok(m)` if the space is isomorphic to `C_m`. Decided without a search:
/// a space is some `C_m` exactly when its order is an antichain and `g` is a
/// single cycle through every point.
pub fn cycle_length(x: &CornishSpace) -> Result<std::result::Result<usize, NotCycleReason>> {
    x.sig().require_same(&Signature::ockham())?;
    let n = x.len();
    if n == 0 {
        return Ok(Err(NotCycleReason::Empty));
    }
    if !is_antichain(x.poset(), &BitSet::full(n)) {
        return Ok(Err(NotCycleReason::NotAntichain));
    }
    let g = x.map(0);
    let mut p = g[0];
    let mut steps = 1;
    while p != 0 && steps <= n {
        p = g[p];
        steps += 1;
    }
    if p == 0 && steps == n {
        Ok(Ok(n))
    } else {
        Ok(Err(NotCycleReason::NotSingleCycle))
    }
}

/// Whether the Ockham algebras dual to `spaces` are quasi-primal with a
/// common discriminator term: yes exactly when every space is some `C_m`
/// with `m` odd. A space `C_m` with `m` even is refuted by the explicit
/// jointly surjective pair.
pub fn ockham_discriminator_classification(spaces: &[CornishSpace], guards: &Guards) -> Result<Verdict> {
    let mut cycles = Vec::new();
    for (member, x) in spaces.iter().enumerate() {
        match cycle_length(x)? {
            Err(reason) => {
                return Ok(Verdict::no(Witness::NotCycleSpace { member, reason }));
            }
            Ok(m) if m % 2 == 0 => {
                let w = even_cycle_witness(m, guards)?;
                return Ok(Verdict::no(Witness::EvenCycle {
                    member,
                    m,
                    base: w.base,
                    pair: (&w.pair).into(),
                    subuniverse: w.members.to_vec(),
                    subuniverse_kind: w.classification.kind,
                }));
            }
            Ok(m) => cycles.push(m),
        }
    }
    Ok(Verdict {
        outcome: Outcome::Yes,
        certificate: Some(Certificate::OddCycles { cycles }),
        witness: None,
        notes: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_spaces() {
        assert!(build_cm(0).is_err());
        let c1 = build_cm(1).unwrap();
        assert_eq!(c1.map(0), &[0]);
        let c3 = build_cm(3).unwrap();
        assert_eq!(c3.map(0), &[1, 2, 0]);
        assert_eq!(cycle_length(&c3).unwrap(), Ok(3));
        let two_loops =
            CornishSpace::new(Signature::ockham(), Poset::antichain(2), vec![vec![0, 1]]).unwrap();
        assert_eq!(cycle_length(&two_loops).unwrap(), Err(NotCycleReason::NotSingleCycle));
        let chain = CornishSpace::new(Signature::ockham(), Poset::chain(3), vec![vec![2, 1, 0]]).unwrap();
        assert_eq!(cycle_length(&chain).unwrap(), Err(NotCycleReason::NotAntichain));
    }

    #[test]
    fn classification() {
        let g = Guards::default();
        let yes = ockham_discriminator_classification(&[build_cm(1).unwrap(), build_cm(3).unwrap()], &g)
            .unwrap();
        assert_eq!(yes.outcome, Outcome::Yes);
        let no = ockham_discriminator_classification(&[build_cm(2).unwrap()], &g).unwrap();
        assert_eq!(no.outcome, Outcome::No);
        assert!(matches!(no.witness, Some(Witness::EvenCycle { m: 2, .. })));
        let chain = CornishSpace::new(Signature::ockham(), Poset::chain(3), vec![vec![2, 1, 0]]).unwrap();
        let no = ockham_discriminator_classification(&[chain], &g).unwrap();
        assert!(matches!(
            no.witness,
            Some(Witness::NotCycleSpace {
                reason: NotCycleReason::NotAntichain,
                ..
            })
        ));
    }
}
