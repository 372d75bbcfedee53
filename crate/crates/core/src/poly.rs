//! Sparse multivariate polynomials and free-module elements over an exact
//! coefficient field.
//!
//! A [`Poly`] stores its terms sorted descending under the owning ring's
//! monomial order, with no zero coefficients, so equal values have identical
//! term lists. Free-module elements reuse the same representation through the
//! position index on each monomial; plain ring elements keep position 0.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldTag};
use crate::monomial::{Monomial, MonomialOrder};

/// The ambient polynomial ring: variable names, weights, field, and order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    pub field: FieldTag,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
}

/// Result of a weighted-degree query on a nonzero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightedDegree {
    Homogeneous(u64),
    Inhomogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    /// Terms sorted descending by the active order; no zero coefficients.
    pub terms: Vec<(Monomial, FieldElem)>,
}

impl PolyRing {
    pub fn new(field: FieldTag, vars: Vec<String>, weights: Vec<u32>) -> Self {
        assert_eq!(vars.len(), weights.len());
        PolyRing {
            field,
            vars,
            order: MonomialOrder::weighted_grevlex(weights),
        }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.order.weights
    }

    pub fn zero(&self) -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one(&self) -> Poly {
        self.constant(FieldElem::one(self.field))
    }

    pub fn constant(&self, c: FieldElem) -> Poly {
        if c.is_zero() {
            return self.zero();
        }
        Poly {
            terms: vec![(Monomial::one(self.nvars()), c)],
        }
    }

    pub fn int(&self, n: i64) -> Poly {
        self.constant(FieldElem::from_i64(self.field, n))
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly {
            terms: vec![(Monomial::var(self.nvars(), i), FieldElem::one(self.field))],
        }
    }

    /// Basis vector `e_pos` of a free module.
    pub fn unit_vector(&self, pos: u32) -> Poly {
        Poly {
            terms: vec![(
                Monomial {
                    pos,
                    exps: vec![0; self.nvars()],
                },
                FieldElem::one(self.field),
            )],
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Canonicalize an arbitrary term list: merge duplicates, drop zeros,
    /// sort descending under this ring's order.
    pub fn from_terms(&self, terms: Vec<(Monomial, FieldElem)>) -> Poly {
        self.from_terms_with(&self.order, terms)
    }

    pub fn from_terms_with(
        &self,
        order: &MonomialOrder,
        mut terms: Vec<(Monomial, FieldElem)>,
    ) -> Poly {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Monomial, FieldElem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = merged.last_mut() {
                if last.0 == m {
                    last.1 = last.1.add(&c);
                    continue;
                }
            }
            merged.push((m, c));
        }
        merged.retain(|(_, c)| !c.is_zero());
        merged.sort_by(|a, b| order.cmp_mono(&b.0, &a.0));
        Poly { terms: merged }
    }

    /// Re-sort a polynomial whose terms were canonical under another order.
    pub fn resort(&self, order: &MonomialOrder, p: &Poly) -> Poly {
        let mut terms = p.terms.clone();
        terms.sort_by(|a, b| order.cmp_mono(&b.0, &a.0));
        Poly { terms }
    }

    pub fn add(&self, f: &Poly, g: &Poly) -> Poly {
        self.add_with(&self.order, f, g)
    }

    pub fn add_with(&self, order: &MonomialOrder, f: &Poly, g: &Poly) -> Poly {
        let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < f.terms.len() && j < g.terms.len() {
            match order.cmp_mono(&f.terms[i].0, &g.terms[j].0) {
                Ordering::Greater => {
                    out.push(f.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(g.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.terms[i].1.add(&g.terms[j].1);
                    if !c.is_zero() {
                        out.push((f.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&f.terms[i..]);
        out.extend_from_slice(&g.terms[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self, f: &Poly) -> Poly {
        Poly {
            terms: f.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, f: &Poly, g: &Poly) -> Poly {
        self.add(f, &self.neg(g))
    }

    pub fn sub_with(&self, order: &MonomialOrder, f: &Poly, g: &Poly) -> Poly {
        self.add_with(order, f, &self.neg(g))
    }

    /// Multiply by a single term.
    pub fn mul_term(&self, f: &Poly, m: &Monomial, c: &FieldElem) -> Result<Poly> {
        self.mul_term_with(&self.order, f, m, c)
    }

    pub fn mul_term_with(
        &self,
        order: &MonomialOrder,
        f: &Poly,
        m: &Monomial,
        c: &FieldElem,
    ) -> Result<Poly> {
        if c.is_zero() {
            return Ok(self.zero());
        }
        let mut terms = Vec::with_capacity(f.terms.len());
        for (fm, fc) in &f.terms {
            terms.push((m.mul(fm)?, c.mul(fc)));
        }
        // multiplying by a fixed monomial preserves the descending order
        let _ = order;
        Ok(Poly { terms })
    }

    pub fn mul(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        self.mul_with(&self.order, f, g)
    }

    pub fn mul_with(&self, order: &MonomialOrder, f: &Poly, g: &Poly) -> Result<Poly> {
        let mut acc = self.zero();
        for (m, c) in &g.terms {
            let part = self.mul_term_with(order, f, m, c)?;
            acc = self.add_with(order, &acc, &part);
        }
        Ok(acc)
    }

    pub fn scale(&self, f: &Poly, c: &FieldElem) -> Poly {
        if c.is_zero() {
            return self.zero();
        }
        Poly {
            terms: f.terms.iter().map(|(m, fc)| (m.clone(), c.mul(fc))).collect(),
        }
    }

    /// Checked arithmetic entry point used by the expression surface.
    pub fn arith(&self, f: &Poly, g: &Poly, op: ArithOp) -> Result<Poly> {
        for p in [f, g] {
            for (_, c) in &p.terms {
                if c.tag() != self.field {
                    return Err(Error::FieldMismatch);
                }
            }
        }
        match op {
            ArithOp::Add => Ok(self.add(f, g)),
            ArithOp::Sub => Ok(self.sub(f, g)),
            ArithOp::Mul => self.mul(f, g),
        }
    }

    pub fn pow(&self, f: &Poly, n: u32) -> Result<Poly> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn leading<'a>(&self, f: &'a Poly) -> Option<(&'a Monomial, &'a FieldElem)> {
        f.terms.first().map(|(m, c)| (m, c))
    }

    pub fn make_monic(&self, f: &Poly) -> Poly {
        match f.terms.first() {
            None => self.zero(),
            Some((_, c)) => {
                let inv = c.inv().expect("leading coefficient is nonzero");
                self.scale(f, &inv)
            }
        }
    }

    /// Common weighted degree of all terms of a nonzero input.
    pub fn weighted_degree(&self, f: &Poly) -> Result<WeightedDegree> {
        if f.terms.is_empty() {
            return Err(Error::ZeroInput);
        }
        let w = self.weights();
        let d0 = f.terms[0].0.weighted_degree(w);
        for (m, _) in &f.terms[1..] {
            if m.weighted_degree(w) != d0 {
                return Ok(WeightedDegree::Inhomogeneous);
            }
        }
        Ok(WeightedDegree::Homogeneous(d0))
    }

    /// Weighted degree of the term part ignoring positions, for graded
    /// bookkeeping of module elements; `None` if mixed.
    pub fn homogeneous_degree(&self, f: &Poly) -> Option<u64> {
        match self.weighted_degree(f) {
            Ok(WeightedDegree::Homogeneous(d)) => Some(d),
            _ => None,
        }
    }

    /// Substitute `vars[i] -> t^{powers[i]}` into a ring polynomial, landing
    /// in a univariate ring in `t`.
    pub fn substitute_powers(&self, f: &Poly, powers: &[u32]) -> Result<Poly> {
        assert_eq!(powers.len(), self.nvars());
        let target = PolyRing::new(self.field, vec!["t".into()], vec![1]);
        let mut terms = Vec::with_capacity(f.terms.len());
        for (m, c) in &f.terms {
            debug_assert_eq!(m.pos, 0);
            let mut e: u64 = 0;
            for (exp, pw) in m.exps.iter().zip(powers) {
                e += *exp as u64 * *pw as u64;
            }
            let e32: u32 = e.try_into().map_err(|_| Error::ExponentOverflow)?;
            terms.push((
                Monomial {
                    pos: 0,
                    exps: vec![e32],
                },
                c.clone(),
            ));
        }
        Ok(target.from_terms(terms))
    }

    /// Component of a free-module element at a position, as a ring polynomial.
    pub fn component(&self, v: &Poly, pos: u32) -> Poly {
        Poly {
            terms: v
                .terms
                .iter()
                .filter(|(m, _)| m.pos == pos)
                .map(|(m, c)| {
                    (
                        Monomial {
                            pos: 0,
                            exps: m.exps.clone(),
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Assemble a free-module element from ring-polynomial components.
    pub fn from_components(&self, comps: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (pos, comp) in comps.iter().enumerate() {
            for (m, c) in &comp.terms {
                debug_assert_eq!(m.pos, 0);
                terms.push((
                    Monomial {
                        pos: pos as u32,
                        exps: m.exps.clone(),
                    },
                    c.clone(),
                ));
            }
        }
        self.from_terms(terms)
    }

    /// Shift all positions by a constant offset.
    pub fn shift_positions(&self, v: &Poly, offset: u32) -> Poly {
        let mut terms: Vec<_> = v
            .terms
            .iter()
            .map(|(m, c)| {
                (
                    Monomial {
                        pos: m.pos + offset,
                        exps: m.exps.clone(),
                    },
                    c.clone(),
                )
            })
            .collect();
        terms.sort_by(|a, b| self.order.cmp_mono(&b.0, &a.0));
        Poly { terms }
    }

    /// Render a ring polynomial; terms in descending order, e.g. `y^2 - x*z`.
    pub fn display(&self, f: &Poly) -> String {
        if f.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in f.terms.iter().enumerate() {
            let neg = c.is_display_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.abs_display();
            let mono = self.display_monomial(m);
            if mono.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{}*{}", mag, mono);
            }
        }
        out
    }

    fn display_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps.iter().enumerate() {
            if e == 1 {
                parts.push(self.vars[i].clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", self.vars[i], e));
            }
        }
        parts.join("*")
    }

    /// Render a module element as a component list `(f_0, ..., f_{r-1})`.
    pub fn display_vector(&self, v: &Poly, rank: u32) -> String {
        let comps: Vec<String> = (0..rank)
            .map(|p| self.display(&self.component(v, p)))
            .collect();
        format!("({})", comps.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl Poly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum position occurring in the element (0 for ring polynomials).
    pub fn max_pos(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.pos).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PolyRing {
        PolyRing::new(
            FieldTag::Q,
            vec!["x".into(), "y".into(), "z".into()],
            vec![3, 4, 5],
        )
    }

    #[test]
    fn add_cancels() {
        let r = ring();
        let f = r.sub(&r.pow(&r.var(1), 2).unwrap(), &r.mul(&r.var(0), &r.var(2)).unwrap());
        let g = r.neg(&f);
        assert!(r.add(&f, &g).is_zero());
    }

    #[test]
    fn product_expands() {
        let r = ring();
        let x = r.var(0);
        let y = r.var(1);
        let lhs = r.mul(&r.add(&x, &y), &r.sub(&x, &y)).unwrap();
        let rhs = r.sub(&r.pow(&x, 2).unwrap(), &r.pow(&y, 2).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn weighted_degrees() {
        let r = ring();
        let f = r.sub(&r.pow(&r.var(1), 2).unwrap(), &r.mul(&r.var(0), &r.var(2)).unwrap());
        assert_eq!(
            r.weighted_degree(&f).unwrap(),
            WeightedDegree::Homogeneous(8)
        );
        assert_eq!(
            r.weighted_degree(&r.var(0)).unwrap(),
            WeightedDegree::Homogeneous(3)
        );
        let mixed = r.add(&r.var(0), &r.var(1));
        assert_eq!(
            r.weighted_degree(&mixed).unwrap(),
            WeightedDegree::Inhomogeneous
        );
        assert_eq!(r.weighted_degree(&r.zero()).unwrap_err(), Error::ZeroInput);
    }

    #[test]
    fn display_descending() {
        let r = ring();
        let f = r.sub(&r.pow(&r.var(1), 2).unwrap(), &r.mul(&r.var(0), &r.var(2)).unwrap());
        assert_eq!(r.display(&f), "y^2 - x*z");
    }

    #[test]
    fn components_round_trip() {
        let r = ring();
        let v = r.from_components(&[r.var(0), r.zero(), r.one()]);
        assert_eq!(r.component(&v, 0), r.var(0));
        assert!(r.component(&v, 1).is_zero());
        assert_eq!(r.component(&v, 2), r.one());
        assert_eq!(v.max_pos(), 2);
    }
}
