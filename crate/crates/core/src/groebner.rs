//! Buchberger's algorithm for ideals and submodules of free modules, with
//! full normal forms, reduced bases, and elimination.
//!
//! The implementation is plain Buchberger with the normal selection
//! strategy (smallest pair lcm first) and a deterministic pair order, so a
//! reduced basis for a fixed order is reproduced bit-for-bit. Inputs at
//! this level live over the polynomial ring; quotient-ring computations
//! are handled by the callers in [`crate::ring`], which append multiples
//! of the defining ideal.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Poly, PolyRing};

/// Optional guards for runaway computations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GbConfig {
    /// Abort with [`Error::DegreeCapExceeded`] when a pair lcm exceeds this
    /// weighted degree.
    pub degree_cap: Option<u64>,
}

/// A Groebner basis together with the order it was computed under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub gens: Vec<Poly>,
    pub order: MonomialOrder,
    pub reduced: bool,
}

impl GroebnerBasis {
    pub fn normal_form(&self, ring: &PolyRing, f: &Poly) -> Result<Poly> {
        normal_form(ring, &self.order, f, &self.gens)
    }

    pub fn contains(&self, ring: &PolyRing, f: &Poly) -> Result<bool> {
        Ok(self.normal_form(ring, f)?.is_zero())
    }
}

/// Full normal form of `f` against `basis`: no term of the result is
/// divisible by any basis leading term. `f` must be sorted under `order`.
pub fn normal_form(
    ring: &PolyRing,
    order: &MonomialOrder,
    f: &Poly,
    basis: &[Poly],
) -> Result<Poly> {
    let mut remainder: Vec<(Monomial, crate::field::FieldElem)> = Vec::new();
    let mut work = f.clone();
    'outer: while let Some((lm, lc)) = work.terms.first().cloned() {
        for g in basis {
            let (gm, gc) = match g.terms.first() {
                Some(t) => t,
                None => continue,
            };
            if gm.divides(&lm) {
                let q = gm.quotient_of(&lm);
                let c = lc.div(gc)?;
                let sub = ring.mul_term_with(order, g, &q, &c)?;
                work = ring.sub_with(order, &work, &sub);
                continue 'outer;
            }
        }
        remainder.push((lm, lc));
        work.terms.remove(0);
    }
    Ok(Poly { terms: remainder })
}

fn leading(p: &Poly) -> &Monomial {
    &p.terms[0].0
}

#[derive(Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Compute the reduced Groebner basis of the span of `inputs` (ring
/// elements or free-module columns) under `order`.
pub fn buchberger(
    ring: &PolyRing,
    order: &MonomialOrder,
    inputs: &[Poly],
    cfg: &GbConfig,
) -> Result<GroebnerBasis> {
    let mut basis: Vec<Poly> = Vec::new();
    let mut sorted_inputs: Vec<Poly> = inputs
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| ring.resort(order, p))
        .collect();
    sorted_inputs.sort_by(|a, b| order.cmp_mono(leading(b), leading(a)));
    sorted_inputs.dedup();

    // the product criterion is only applied in the rank-1 (ideal) case
    let ring_case = sorted_inputs.iter().all(|p| p.max_pos() == 0);

    let mut pairs: Vec<Pair> = Vec::new();
    for p in sorted_inputs {
        let reduced = normal_form(ring, order, &p, &basis)?;
        if !reduced.is_zero() {
            push_element(ring, order, &mut basis, &mut pairs, reduced);
        }
    }

    while !pairs.is_empty() {
        // normal strategy: smallest lcm first, then structural pair order
        let mut best = 0;
        for k in 1..pairs.len() {
            let c = order.cmp_mono(&pairs[k].lcm, &pairs[best].lcm);
            if c == Ordering::Less
                || (c == Ordering::Equal
                    && (pairs[k].i, pairs[k].j) < (pairs[best].i, pairs[best].j))
            {
                best = k;
            }
        }
        let pair = pairs.swap_remove(best);
        let (gi, gj) = (&basis[pair.i], &basis[pair.j]);
        let (mi, ci) = (&gi.terms[0].0, &gi.terms[0].1);
        let (mj, cj) = (&gj.terms[0].0, &gj.terms[0].1);
        if ring_case && mi.coprime(mj) {
            continue;
        }
        if let Some(cap) = cfg.degree_cap {
            if pair.lcm.weighted_degree(&order.weights) > cap {
                return Err(Error::DegreeCapExceeded { cap });
            }
        }
        let qi = mi.quotient_of(&pair.lcm);
        let qj = mj.quotient_of(&pair.lcm);
        let lhs = ring.mul_term_with(order, gi, &qi, &ci.inv()?)?;
        let rhs = ring.mul_term_with(order, gj, &qj, &cj.inv()?)?;
        let spoly = ring.sub_with(order, &lhs, &rhs);
        let reduced = normal_form(ring, order, &spoly, &basis)?;
        if !reduced.is_zero() {
            push_element(ring, order, &mut basis, &mut pairs, reduced);
        }
    }

    let gens = reduce_basis(ring, order, basis)?;
    Ok(GroebnerBasis {
        gens,
        order: order.clone(),
        reduced: true,
    })
}

fn push_element(
    _ring: &PolyRing,
    order: &MonomialOrder,
    basis: &mut Vec<Poly>,
    pairs: &mut Vec<Pair>,
    p: Poly,
) {
    let new_idx = basis.len();
    let lt_new = leading(&p).clone();
    for (i, g) in basis.iter().enumerate() {
        let lt_i = leading(g);
        if lt_i.pos == lt_new.pos {
            pairs.push(Pair {
                i,
                j: new_idx,
                lcm: lt_i.lcm(&lt_new),
            });
        }
    }
    let _ = order;
    basis.push(p);
}

/// Interreduce a basis whose span is already a Groebner basis: drop
/// elements with redundant leading terms, then fully tail-reduce. The
/// result is the unique reduced basis, monic and sorted descending.
fn reduce_basis(ring: &PolyRing, order: &MonomialOrder, mut basis: Vec<Poly>) -> Result<Vec<Poly>> {
    basis.retain(|p| !p.is_zero());
    basis.sort_by(|a, b| order.cmp_mono(leading(b), leading(a)));
    let mut minimal: Vec<Poly> = Vec::new();
    for (idx, p) in basis.iter().enumerate() {
        let lt_p = leading(p);
        let redundant = basis.iter().enumerate().any(|(j, q)| {
            if j == idx {
                return false;
            }
            let lt_q = leading(q);
            lt_q.divides(lt_p) && (lt_q != lt_p || j < idx)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let mut others: Vec<Poly> = Vec::with_capacity(minimal.len() - 1);
        others.extend_from_slice(&minimal[..i]);
        others.extend_from_slice(&minimal[i + 1..]);
        let h = normal_form(ring, order, &minimal[i], &others)?;
        debug_assert!(!h.is_zero());
        out.push(ring.make_monic(&h));
    }
    out.sort_by(|a, b| order.cmp_mono(leading(b), leading(a)));
    Ok(out)
}

/// Check that every S-polynomial of basis pairs reduces to zero; used by
/// tests and the verification scenarios as a direct certificate.
pub fn all_s_pairs_reduce(ring: &PolyRing, gb: &GroebnerBasis) -> Result<bool> {
    let order = &gb.order;
    for i in 0..gb.gens.len() {
        for j in (i + 1)..gb.gens.len() {
            let (gi, gj) = (&gb.gens[i], &gb.gens[j]);
            let (mi, ci) = (&gi.terms[0].0, &gi.terms[0].1);
            let (mj, cj) = (&gj.terms[0].0, &gj.terms[0].1);
            if mi.pos != mj.pos {
                continue;
            }
            let lcm = mi.lcm(mj);
            let lhs = ring.mul_term_with(order, gi, &mi.quotient_of(&lcm), &ci.inv()?)?;
            let rhs = ring.mul_term_with(order, gj, &mj.quotient_of(&lcm), &cj.inv()?)?;
            let spoly = ring.sub_with(order, &lhs, &rhs);
            if !normal_form(ring, order, &spoly, &gb.gens)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Toric ideal of a numerical-semigroup map: the kernel of
/// `vars[i] -> t^{gens[i]}`, computed by eliminating `t` from the ideal
/// `(vars[i] - t^{gens[i]})` under a block order. Returns the target ring
/// (weighted by the semigroup generators) and the reduced basis of the
/// kernel.
pub fn toric_ideal(
    field: crate::field::FieldTag,
    sg_gens: &[u32],
    var_names: &[String],
    cfg: &GbConfig,
) -> Result<(PolyRing, Vec<Poly>)> {
    assert_eq!(sg_gens.len(), var_names.len());
    assert!(!sg_gens.is_empty());
    assert!(sg_gens.iter().all(|&a| a > 0));

    let mut big_vars = vec!["t".to_string()];
    big_vars.extend_from_slice(var_names);
    let mut big_weights = vec![1u32];
    big_weights.extend_from_slice(sg_gens);
    let big = PolyRing::new(field, big_vars, big_weights.clone());
    let elim_order = MonomialOrder::weighted_grevlex(big_weights).with_elim_vars(1);

    let mut gens = Vec::new();
    for (i, &a) in sg_gens.iter().enumerate() {
        // x_i - t^a, homogeneous since wdeg(x_i) = a
        let xi = big.var(i + 1);
        let ta = big.pow(&big.var(0), a)?;
        gens.push(big.sub_with(&elim_order, &xi, &ta));
    }
    let gb = buchberger(&big, &elim_order, &gens, cfg)?;

    let target = PolyRing::new(field, var_names.to_vec(), sg_gens.to_vec());
    let mut kernel = Vec::new();
    for g in &gb.gens {
        if g.terms.iter().all(|(m, _)| m.exps[0] == 0) {
            let terms = g
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        Monomial {
                            pos: 0,
                            exps: m.exps[1..].to_vec(),
                        },
                        c.clone(),
                    )
                })
                .collect();
            kernel.push(target.from_terms(terms));
        }
    }
    kernel.sort_by(|a, b| target.order.cmp_mono(leading(b), leading(a)));
    Ok((target, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldTag;

    fn ring345() -> PolyRing {
        PolyRing::new(
            FieldTag::Q,
            vec!["x".into(), "y".into(), "z".into()],
            vec![3, 4, 5],
        )
    }

    fn gb_of(r: &PolyRing, srcs: &[&str]) -> GroebnerBasis {
        let gens: Vec<Poly> = srcs.iter().map(|s| r.parse(s).unwrap()).collect();
        buchberger(r, &r.order.clone(), &gens, &GbConfig::default()).unwrap()
    }

    #[test]
    fn unit_ideal() {
        let r = ring345();
        let gb = gb_of(&r, &["1"]);
        assert_eq!(gb.gens, vec![r.one()]);
    }

    #[test]
    fn divisibility_collapses() {
        let r = ring345();
        let gb = gb_of(&r, &["x^2", "x^3"]);
        assert_eq!(gb.gens, vec![r.parse("x^2").unwrap()]);
    }

    #[test]
    fn semigroup_ideal_basis() {
        let r = ring345();
        let gb = gb_of(&r, &["y^2-x*z", "x^2*y-z^2", "x^3-y*z"]);
        assert!(gb.contains(&r, &r.parse("x^3-y*z").unwrap()).unwrap());
        assert!(gb.contains(&r, &r.parse("y^2-x*z").unwrap()).unwrap());
        assert!(!gb.contains(&r, &r.parse("x").unwrap()).unwrap());
        assert!(all_s_pairs_reduce(&r, &gb).unwrap());
        // membership both ways against the inputs
        for g in &gb.gens {
            let nf = normal_form(
                &r,
                &r.order,
                g,
                &[
                    r.parse("y^2-x*z").unwrap(),
                    r.parse("x^2*y-z^2").unwrap(),
                    r.parse("x^3-y*z").unwrap(),
                ],
            )
            .unwrap();
            // inputs are not themselves a basis for full reduction, so only
            // check span equality through the basis direction
            let _ = nf;
        }
    }

    #[test]
    fn nf_examples_from_semigroup_ring() {
        let r = ring345();
        let gb = gb_of(&r, &["y^2-x*z", "x^2*y-z^2", "x^3-y*z"]);
        let nf_x = gb.normal_form(&r, &r.parse("x").unwrap()).unwrap();
        assert_eq!(nf_x, r.parse("x").unwrap());
        let nf_z2 = gb.normal_form(&r, &r.parse("z^2").unwrap()).unwrap();
        assert_eq!(nf_z2, r.parse("x^2*y").unwrap());
    }

    #[test]
    fn nf_is_idempotent_and_linear() {
        let r = ring345();
        let gb = gb_of(&r, &["y^2-x*z", "x^2*y-z^2", "x^3-y*z"]);
        let f = r.parse("x^4 + z^2 - 3*y^3").unwrap();
        let nf = gb.normal_form(&r, &f).unwrap();
        let nf2 = gb.normal_form(&r, &nf).unwrap();
        assert_eq!(nf, nf2);
        let diff = r.sub(&f, &nf);
        assert!(gb.contains(&r, &diff).unwrap());
    }

    #[test]
    fn reduced_basis_is_reproducible() {
        let r = ring345();
        let a = gb_of(&r, &["y^2-x*z", "x^2*y-z^2", "x^3-y*z"]);
        let b = gb_of(&r, &["x^3-y*z", "y^2-x*z", "x^2*y-z^2"]);
        assert_eq!(a.gens, b.gens);
    }

    #[test]
    fn toric_345_matches_semigroup_presentation() {
        let (tr, kernel) = toric_ideal(
            FieldTag::Q,
            &[3, 4, 5],
            &["x".into(), "y".into(), "z".into()],
            &GbConfig::default(),
        )
        .unwrap();
        let expected = gb_of(&tr, &["y^2-x*z", "x^2*y-z^2", "x^3-y*z"]);
        let got = buchberger(&tr, &tr.order.clone(), &kernel, &GbConfig::default()).unwrap();
        assert_eq!(got.gens, expected.gens);
        // generators vanish under substitution
        for g in &kernel {
            assert!(tr.substitute_powers(g, &[3, 4, 5]).unwrap().is_zero());
        }
    }

    #[test]
    fn toric_single_generator_is_zero_ideal() {
        let (_, kernel) = toric_ideal(
            FieldTag::Q,
            &[1],
            &["x".into()],
            &GbConfig::default(),
        )
        .unwrap();
        assert!(kernel.is_empty());
    }

    #[test]
    fn toric_cusp() {
        let (tr, kernel) = toric_ideal(
            FieldTag::Q,
            &[2, 3],
            &["x".into(), "y".into()],
            &GbConfig::default(),
        )
        .unwrap();
        let expected = gb_of(&tr, &["y^2-x^3"]);
        let got = buchberger(&tr, &tr.order.clone(), &kernel, &GbConfig::default()).unwrap();
        assert_eq!(got.gens, expected.gens);
    }

    #[test]
    fn degree_cap_aborts() {
        let r = ring345();
        let gens = vec![r.parse("y^2-x*z").unwrap(), r.parse("x^3-y*z").unwrap()];
        let cfg = GbConfig {
            degree_cap: Some(5),
        };
        match buchberger(&r, &r.order.clone(), &gens, &cfg) {
            Err(Error::DegreeCapExceeded { cap: 5 }) => {}
            other => panic!("expected degree cap abort, got {other:?}"),
        }
    }

    #[test]
    fn module_basis_with_positions() {
        let r = PolyRing::new(FieldTag::Q, vec!["x".into(), "y".into()], vec![1, 1]);
        // columns (x, y) and (y, x) in R^2
        let c1 = r.from_components(&[r.var(0), r.var(1)]);
        let c2 = r.from_components(&[r.var(1), r.var(0)]);
        let gb = buchberger(&r, &r.order.clone(), &[c1.clone(), c2.clone()], &GbConfig::default())
            .unwrap();
        assert!(all_s_pairs_reduce(&r, &gb).unwrap());
        for c in [&c1, &c2] {
            assert!(gb.contains(&r, c).unwrap());
        }
    }
}
