//! Finite views of the word algebra `C`.
//!
//! `C` has one coordinate per word over the signature and is infinite as soon
//! as the signature is non-empty, so only the coordinates of words up to a
//! fixed length are materialised. Each point `x` of a space `X` and each
//! up-set `α` give the coordinate vector `φ_x(α)(w) = α(w(x))`.

use serde::Serialize;

use super::duality::e_functor;
use super::signature::{Polarity, Signature, Word};
use super::space::CornishSpace;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::guards::Guards;

/// The coordinate words of `C` up to `depth`, shortest first.
pub fn truncated_c(sig: &Signature, depth: usize, guards: &Guards) -> Result<Vec<Word>> {
    if depth > guards.word_depth {
        return Err(Error::guard("word_depth", guards.word_depth, depth));
    }
    Ok(Word::all_up_to(sig, depth))
}

/// `φ_x(α)` restricted to `words`.
pub fn phi_x(x: &CornishSpace, point: usize, alpha: &BitSet, words: &[Word]) -> Vec<bool> {
    words
        .iter()
        .map(|w| alpha.contains(w.act(x.maps(), point)))
        .collect()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TruncationReport {
    pub depth: usize,
    pub words: usize,
    pub points: usize,
    pub elements: usize,
    /// Distinct elements differ at the empty-word coordinate of some point.
    pub separates: bool,
    /// `φ_x(f(α))(w)` equals `φ_x(α)(f·w)` (complemented for minus `f`) for
    /// every word shorter than `depth`.
    pub shift_compatible: bool,
}

/// Checks separation and shift-compatibility of the maps `φ_x` for every
/// point and every element of `E(X)`.
pub fn check_truncated_c(x: &CornishSpace, depth: usize, guards: &Guards) -> Result<TruncationReport> {
    if x.sig().is_empty() {
        return Err(Error::InvalidArgument("the word algebra needs at least one symbol".into()));
    }
    let words = truncated_c(x.sig(), depth, guards)?;
    let index_of = |w: &Word| words.iter().position(|v| v == w).expect("word in range");
    let e = e_functor(x, guards)?;
    let m = e.carrier.up_sets.len();
    let phis: Vec<Vec<Vec<bool>>> = (0..m)
        .map(|a| {
            (0..x.len())
                .map(|p| phi_x(x, p, e.up_set(a), &words))
                .collect()
        })
        .collect();

    let eps = index_of(&Word::empty());
    let mut separates = true;
    for a in 0..m {
        for b in a + 1..m {
            if !(0..x.len()).any(|p| phis[a][p][eps] != phis[b][p][eps]) {
                separates = false;
            }
        }
    }

    let mut shift_compatible = true;
    for (s, _, pol) in x.sig().symbols() {
        let shifted: Vec<(usize, usize)> = words
            .iter()
            .enumerate()
            .filter(|(_, w)| w.len() < depth)
            .map(|(i, w)| (i, index_of(&Word::letter(s).concat(w))))
            .collect();
        for a in 0..m {
            let fa = e.algebra.op(s)[a];
            for p in 0..x.len() {
                for &(i, j) in &shifted {
                    let expected = match pol {
                        Polarity::Plus => phis[a][p][j],
                        Polarity::Minus => !phis[a][p][j],
                    };
                    if phis[fa][p][i] != expected {
                        shift_compatible = false;
                    }
                }
            }
        }
    }
    Ok(TruncationReport {
        depth,
        words: words.len(),
        points: x.len(),
        elements: m,
        separates,
        shift_compatible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::Poset;

    fn y2() -> CornishSpace {
        CornishSpace::new(
            Signature::parse("f+ g-").unwrap(),
            Poset::chain(2),
            vec![vec![1, 1], vec![1, 0]],
        )
        .unwrap()
    }

    #[test]
    fn empty_word_reads_membership() {
        let y = y2();
        let words = truncated_c(y.sig(), 1, &Guards::default()).unwrap();
        let alpha = BitSet::from_indices(2, [1]);
        let v = phi_x(&y, 0, &alpha, &words);
        // words: eps, f, g
        assert_eq!(v, vec![false, true, true]);
    }

    #[test]
    fn depth_guard() {
        let g = Guards {
            word_depth: 2,
            ..Guards::default()
        };
        assert!(truncated_c(&Signature::ockham(), 3, &g).unwrap_err().is_guard());
    }

    #[test]
    fn y2_passes() {
        let rep = check_truncated_c(&y2(), 4, &Guards::default()).unwrap();
        assert!(rep.separates && rep.shift_compatible);
        assert_eq!(rep.words, 1 + 2 + 4 + 8 + 16);
    }
}
