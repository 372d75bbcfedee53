//! Monomials with free-module position indices and weighted monomial orders.
//!
//! A monomial carries an exponent vector (one entry per ring variable) and a
//! position index into a free module; ring elements always use position 0 of
//! a rank-1 ambient. The active order is weighted graded-reverse-lexicographic
//! with a documented, deterministic tie-break so that reduced Groebner bases
//! are reproducible bit-for-bit.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Exponent vector plus free-module position.
///
/// The derived `Ord` is a structural order (position, then exponents) used
/// only for canonical storage and dedup; all algebra goes through
/// [`MonomialOrder::cmp_mono`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub pos: u32,
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            pos: 0,
            exps: vec![0; nvars],
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { pos: 0, exps }
    }

    pub fn is_one(&self) -> bool {
        self.pos == 0 && self.exps.iter().all(|&e| e == 0)
    }

    /// Product, with 32-bit overflow detection.
    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        debug_assert!(
            self.pos == 0 || other.pos == 0,
            "cannot multiply two module monomials"
        );
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_add(*b).ok_or(Error::ExponentOverflow)?);
        }
        Ok(Monomial {
            pos: self.pos + other.pos,
            exps,
        })
    }

    /// Whether `self` divides `other` (requires equal positions).
    pub fn divides(&self, other: &Monomial) -> bool {
        self.pos == other.pos
            && self
                .exps
                .iter()
                .zip(&other.exps)
                .all(|(a, b)| a <= b)
    }

    /// Quotient `other / self`; caller must ensure divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial {
            pos: 0,
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(b, a)| b - a)
                .collect(),
        }
    }

    /// Componentwise lcm (requires equal positions).
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.pos, other.pos);
        Monomial {
            pos: self.pos,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Weighted degree of the term part (positions carry no weight).
    pub fn weighted_degree(&self, weights: &[u32]) -> u64 {
        self.exps
            .iter()
            .zip(weights)
            .map(|(e, w)| *e as u64 * *w as u64)
            .sum()
    }

    pub fn total_degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }
}

/// How module positions interact with the term order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModuleCmp {
    /// Compare term parts first; break ties by lower position first.
    TermOverPosition,
    /// Compare positions first (lower position greater), then terms.
    PositionOverTerm,
}

/// Weighted graded-reverse-lexicographic order with optional elimination
/// blocks for variables and positions.
///
/// Monomials are compared by weighted degree first; ties break
/// reverse-lexicographically with the first variable least significant
/// (at the first differing exponent, the smaller entry wins). Both rules
/// are translation-invariant, so the order is multiplicative, and the
/// positive weights make it well-founded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    /// Positive weight per variable.
    pub weights: Vec<u32>,
    /// Leading variables forming an elimination block: monomials are compared
    /// by their weighted degree in these variables first.
    pub n_elim_vars: usize,
    /// Positions below the split dominate positions at or above it,
    /// regardless of term parts. `u32::MAX` disables the split.
    pub pos_split: u32,
    pub module_cmp: ModuleCmp,
}

impl MonomialOrder {
    pub fn weighted_grevlex(weights: Vec<u32>) -> Self {
        assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
        MonomialOrder {
            weights,
            n_elim_vars: 0,
            pos_split: u32::MAX,
            module_cmp: ModuleCmp::TermOverPosition,
        }
    }

    pub fn with_elim_vars(mut self, n: usize) -> Self {
        self.n_elim_vars = n;
        self
    }

    pub fn with_pos_split(mut self, split: u32) -> Self {
        self.pos_split = split;
        self
    }

    fn cmp_term(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let da = a.weighted_degree(&self.weights);
        let db = b.weighted_degree(&self.weights);
        match da.cmp(&db) {
            Ordering::Equal => {}
            o => return o,
        }
        // reverse-lexicographic tie-break with the first variable least
        // significant: at the first differing exponent, the smaller entry
        // wins. With weights (3,4,5) this makes z^2 > x^2*y.
        for i in 0..a.exps.len() {
            match a.exps[i].cmp(&b.exps[i]) {
                Ordering::Equal => {}
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }

    /// Total order on monomials; `Greater` means "larger leading term".
    pub fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        if self.pos_split != u32::MAX {
            let ba = a.pos >= self.pos_split;
            let bb = b.pos >= self.pos_split;
            // the block of small positions dominates
            match (ba, bb) {
                (false, true) => return Ordering::Greater,
                (true, false) => return Ordering::Less,
                _ => {}
            }
        }
        if self.n_elim_vars > 0 {
            let da: u64 = a.exps[..self.n_elim_vars]
                .iter()
                .zip(&self.weights)
                .map(|(e, w)| *e as u64 * *w as u64)
                .sum();
            let db: u64 = b.exps[..self.n_elim_vars]
                .iter()
                .zip(&self.weights)
                .map(|(e, w)| *e as u64 * *w as u64)
                .sum();
            match da.cmp(&db) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        match self.module_cmp {
            ModuleCmp::TermOverPosition => match self.cmp_term(a, b) {
                // lower position is the larger monomial on term ties
                Ordering::Equal => b.pos.cmp(&a.pos),
                o => o,
            },
            ModuleCmp::PositionOverTerm => match b.pos.cmp(&a.pos) {
                Ordering::Equal => self.cmp_term(a, b),
                o => o,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[u32]) -> Monomial {
        Monomial {
            pos: 0,
            exps: exps.to_vec(),
        }
    }

    #[test]
    fn grevlex_classic() {
        // unit weights: x*y^5*z^2 > x^4*y*z^3 (degree tie, smaller first
        // exponent wins)
        let o = MonomialOrder::weighted_grevlex(vec![1, 1, 1]);
        assert_eq!(o.cmp_mono(&m(&[1, 5, 2]), &m(&[4, 1, 3])), Ordering::Greater);
        // degree dominates
        assert_eq!(o.cmp_mono(&m(&[4, 4, 7]), &m(&[4, 2, 3])), Ordering::Greater);
    }

    #[test]
    fn weighted_degree_first() {
        // weights (3,4,5): wdeg(z)=5 > wdeg(x)=3
        let o = MonomialOrder::weighted_grevlex(vec![3, 4, 5]);
        assert_eq!(o.cmp_mono(&m(&[0, 0, 1]), &m(&[1, 0, 0])), Ordering::Greater);
        // y^2 and x*z both have wdeg 8; first difference at x: y^2 wins
        assert_eq!(o.cmp_mono(&m(&[0, 2, 0]), &m(&[1, 0, 1])), Ordering::Greater);
        // z^2 and x^2*y both have wdeg 10; z^2 wins
        assert_eq!(o.cmp_mono(&m(&[0, 0, 2]), &m(&[2, 1, 0])), Ordering::Greater);
    }

    #[test]
    fn multiplicative() {
        let o = MonomialOrder::weighted_grevlex(vec![3, 4, 5]);
        let a = m(&[0, 2, 0]);
        let b = m(&[1, 0, 1]);
        let c = m(&[2, 1, 3]);
        let ord = o.cmp_mono(&a, &b);
        assert_eq!(
            o.cmp_mono(&a.mul(&c).unwrap(), &b.mul(&c).unwrap()),
            ord
        );
    }

    #[test]
    fn position_split_dominates() {
        let o = MonomialOrder::weighted_grevlex(vec![1]).with_pos_split(2);
        let low = Monomial { pos: 1, exps: vec![0] };
        let high = Monomial { pos: 2, exps: vec![9] };
        assert_eq!(o.cmp_mono(&low, &high), Ordering::Greater);
    }

    #[test]
    fn top_breaks_ties_by_lower_position() {
        let o = MonomialOrder::weighted_grevlex(vec![1]);
        let a = Monomial { pos: 0, exps: vec![2] };
        let b = Monomial { pos: 1, exps: vec![2] };
        assert_eq!(o.cmp_mono(&a, &b), Ordering::Greater);
    }

    #[test]
    fn overflow_detected() {
        let a = Monomial { pos: 0, exps: vec![u32::MAX] };
        let b = Monomial { pos: 0, exps: vec![1] };
        assert_eq!(a.mul(&b).unwrap_err(), Error::ExponentOverflow);
    }
}
