//! The canonical odd bracket on multivector charts: symmetry of the raw
//! derived bracket, the antisymmetric conversion, shifted-grading Leibniz
//! and Jacobi, the closed form, and the classical pairings with functions
//! and vector fields.

use super::{engine, randomized, shrunk_failure};
use crate::gen;
use crate::{Ctx, IdentityCase, Verdict};
use koszul_core::bracket::{raw_derived, schouten_with};
use koszul_core::{qi, Parity, Poly, SpaceRef, VarId, VectorField};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn mv_charts() -> Vec<SpaceRef> {
    vec![
        koszul_core::Space::anticotangent(&gen::base_2_1()).unwrap(),
        koszul_core::Space::anticotangent(&gen::base_1_1()).unwrap(),
    ]
}

fn pick_chart(rng: &mut ChaCha8Rng) -> SpaceRef {
    let cs = mv_charts();
    cs[rng.gen_range(0..cs.len())].clone()
}

fn rand_parity(rng: &mut ChaCha8Rng) -> Parity {
    if rng.gen_bool(0.5) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// The degree-one multivector of a vector field: `sum_a (-1)^{|a|} X^a x*_a`.
pub fn multivector_of_field(x: &VectorField) -> koszul_core::Result<Poly> {
    let base = x.space();
    let mv = koszul_core::Space::anticotangent(base)?;
    let mut acc = Poly::zero(&mv);
    for (&v, c) in x.coeffs() {
        let anti = mv
            .momentum_of(v)
            .ok_or_else(|| koszul_core::Error::invalid("field targets a momentum-free variable"))?;
        let sign = if base.var(v).parity.is_odd() { -1 } else { 1 };
        let term = c.lift_to(&mv)?.try_mul(&Poly::var(&mv, anti))?;
        acc = acc.try_add(&term.scale(&qi(sign)))?;
    }
    Ok(acc)
}

fn raw_symmetry(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let s = pick_chart(rng);
        let pp = rand_parity(rng);
        let pq = rand_parity(rng);
        let p = gen::random_homogeneous(rng, &s, 3, 3, pp);
        let q = gen::random_homogeneous(rng, &s, 3, 3, pq);
        let sign = pp.koszul_sign(pq);
        shrunk_failure(&["P", "Q"], vec![p, q], move |ps| {
            match (
                raw_derived(&ps[0], &ps[1], &conv),
                raw_derived(&ps[1], &ps[0], &conv),
            ) {
                (Ok(a), Ok(b)) => a != b.scale(&qi(sign as i64)),
                _ => true,
            }
        })
    })
}

fn antisymmetry(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let s = pick_chart(rng);
        let pp = rand_parity(rng);
        let pq = rand_parity(rng);
        let p = gen::random_homogeneous(rng, &s, 3, 3, pp);
        let q = gen::random_homogeneous(rng, &s, 3, 3, pq);
        // Shifted parities: the odd bracket is antisymmetric in |P|+1, |Q|+1.
        let sign = pp.flip().koszul_sign(pq.flip());
        shrunk_failure(&["P", "Q"], vec![p, q], move |ps| {
            match (
                schouten_with(&ps[0], &ps[1], &conv),
                schouten_with(&ps[1], &ps[0], &conv),
            ) {
                (Ok(a), Ok(b)) => a != b.scale(&qi(-(sign as i64))),
                _ => true,
            }
        })
    })
}

fn leibniz(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let s = pick_chart(rng);
        let pp = rand_parity(rng);
        let pq = rand_parity(rng);
        let p = gen::random_homogeneous(rng, &s, 3, 2, pp);
        let q = gen::random_homogeneous(rng, &s, 3, 2, pq);
        let r = gen::random_poly(rng, &s, 3, 2);
        // ⟦P,QR⟧ = ⟦P,Q⟧R + (-1)^{(|P|+1)|Q|} Q ⟦P,R⟧.
        let sign = pp.flip().koszul_sign(pq);
        shrunk_failure(&["P", "Q", "R"], vec![p, q, r], move |ps| {
            let lhs = schouten_with(&ps[0], &(&ps[1] * &ps[2]), &conv);
            let a = schouten_with(&ps[0], &ps[1], &conv);
            let b = schouten_with(&ps[0], &ps[2], &conv);
            match (lhs, a, b) {
                (Ok(l), Ok(a), Ok(b)) => {
                    l != &(&a * &ps[2]) + &(&ps[1] * &b).scale(&qi(sign as i64))
                }
                _ => true,
            }
        })
    })
}

fn jacobi(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let s = pick_chart(rng);
        let pp = rand_parity(rng);
        let pq = rand_parity(rng);
        let p = gen::random_homogeneous(rng, &s, 3, 2, pp);
        let q = gen::random_homogeneous(rng, &s, 3, 2, pq);
        let r = gen::random_poly(rng, &s, 3, 2);
        let sign = pp.flip().koszul_sign(pq.flip());
        shrunk_failure(&["P", "Q", "R"], vec![p, q, r], move |ps| {
            let inner = match schouten_with(&ps[1], &ps[2], &conv) {
                Ok(x) => x,
                Err(_) => return true,
            };
            let lhs = schouten_with(&ps[0], &inner, &conv);
            let pq_b = match schouten_with(&ps[0], &ps[1], &conv) {
                Ok(x) => x,
                Err(_) => return true,
            };
            let a = schouten_with(&pq_b, &ps[2], &conv);
            let pr = match schouten_with(&ps[0], &ps[2], &conv) {
                Ok(x) => x,
                Err(_) => return true,
            };
            let b = schouten_with(&ps[1], &pr, &conv);
            match (lhs, a, b) {
                (Ok(l), Ok(a), Ok(b)) => l != &a + &b.scale(&qi(sign as i64)),
                _ => true,
            }
        })
    })
}

fn conversion(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let s = pick_chart(rng);
        let pp = rand_parity(rng);
        let p = gen::random_homogeneous(rng, &s, 3, 3, pp);
        let q = gen::random_poly(rng, &s, 3, 3);
        let sign: i64 = if pp.is_odd() { 1 } else { -1 };
        shrunk_failure(&["P", "Q"], vec![p, q], move |ps| {
            match (
                schouten_with(&ps[0], &ps[1], &conv),
                raw_derived(&ps[0], &ps[1], &conv),
            ) {
                (Ok(a), Ok(b)) => a != b.scale(&qi(sign)),
                _ => true,
            }
        })
    })
}

fn closed_form(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let s = pick_chart(rng);
        let pp = rand_parity(rng);
        let p = gen::random_homogeneous(rng, &s, 3, 3, pp);
        let q = gen::random_poly(rng, &s, 3, 3);
        shrunk_failure(&["P", "Q"], vec![p, q], move |ps| {
            let lhs = match raw_derived(&ps[0], &ps[1], &conv) {
                Ok(x) => x,
                Err(_) => return true,
            };
            let rhs = closed_form_value(&ps[0], &ps[1], pp);
            lhs != rhs
        })
    })
}

/// `s(P,Q) = sum_a (-1)^{|P||a|} [ dP/dx*_a dQ/dx^a + (-1)^{|P|} dP/dx^a dQ/dx*_a ]`.
fn closed_form_value(p: &Poly, q: &Poly, pp: Parity) -> Poly {
    let s = p.space().clone();
    let mut acc = Poly::zero(&s);
    for pair in s.pairs() {
        let a = pair.coord;
        let anti = pair.momentum;
        let sa = s.var(a).parity.koszul_sign(pp) as i64;
        let sp = if pp.is_odd() { -1i64 } else { 1 };
        let t1 = &p.partial_left(anti) * &q.partial_left(a);
        let t2 = (&p.partial_left(a) * &q.partial_left(anti)).scale(&qi(sp));
        acc = &acc + &(&t1 + &t2).scale(&qi(sa));
    }
    acc
}

fn classical_pairings(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let base = if rng.gen_bool(0.5) {
            gen::base_2_1()
        } else {
            gen::base_1_1()
        };
        let mv = engine(koszul_core::Space::anticotangent(&base))?;
        let f = gen::random_poly(rng, &base, 3, 3);
        let g = gen::random_poly(rng, &base, 3, 3);
        let fh = engine(f.lift_to(&mv))?;
        let gh = engine(g.lift_to(&mv))?;
        // Functions bracket to zero.
        let zz = engine(schouten_with(&fh, &gh, &conv))?;
        if !zz.is_zero() {
            return Err(format!("  [[f,g]] != 0 for functions f = {f}, g = {g}: {zz}"));
        }
        // Antimomentum generators act as signed partials.
        let vars: Vec<VarId> = base.var_ids().collect();
        for &a in &vars {
            let anti = mv.momentum_of(a).expect("anticotangent pairs all base vars");
            let lhs = engine(schouten_with(&Poly::var(&mv, anti), &fh, &conv))?;
            let sign = if base.var(a).parity.is_odd() { -1 } else { 1 };
            let rhs = engine(f.partial_left(a).lift_to(&mv))?.scale(&qi(sign));
            if lhs != rhs {
                return Err(format!(
                    "  [[x*_a, f]] != (-1)^{{|a|}} d_a f at a = {}, f = {f}: got {lhs}, want {rhs}",
                    base.var(a).name
                ));
            }
        }
        // Degree-one multivectors reproduce the field action and commutator.
        let px = rand_parity(rng);
        let py = rand_parity(rng);
        let x = gen::random_field(rng, &base, 2, 2, px);
        let y = gen::random_field(rng, &base, 2, 2, py);
        let xm = engine(multivector_of_field(&x))?;
        let ym = engine(multivector_of_field(&y))?;
        let act = engine(schouten_with(&xm, &fh, &conv))?;
        let want = engine(engine(x.apply(&f))?.lift_to(&mv))?;
        if act != want {
            return Err(format!(
                "  [[mv(X), f]] != X(f) for X = {x}, f = {f}: got {act}, want {want}"
            ));
        }
        let bracket = engine(schouten_with(&xm, &ym, &conv))?;
        let comm = engine(koszul_core::commutator(&x, &y))?;
        let want = engine(multivector_of_field(&comm))?;
        if bracket != want {
            return Err(format!(
                "  [[mv(X), mv(Y)]] != mv([X,Y]) for X = {x}, Y = {y}: got {bracket}, want {want}"
            ));
        }
        Ok(())
    })
}

pub fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "schouten-raw-symmetry",
            anchor: "the raw derived odd bracket is graded symmetric",
            tags: &["schouten"],
            run: raw_symmetry,
        },
        IdentityCase {
            id: "schouten-antisymmetry",
            anchor: "the odd bracket is antisymmetric in the shifted grading",
            tags: &["schouten"],
            run: antisymmetry,
        },
        IdentityCase {
            id: "schouten-leibniz",
            anchor: "[[P,QR]] = [[P,Q]]R + (-1)^{(|P|+1)|Q|} Q [[P,R]]",
            tags: &["schouten", "leibniz"],
            run: leibniz,
        },
        IdentityCase {
            id: "schouten-jacobi",
            anchor: "the odd bracket satisfies the shifted graded Jacobi identity",
            tags: &["schouten", "jacobi"],
            run: jacobi,
        },
        IdentityCase {
            id: "schouten-conversion",
            anchor: "the odd bracket is the sign conversion (-1)^{|P|+1} of the raw \
                     derived bracket",
            tags: &["schouten"],
            run: conversion,
        },
        IdentityCase {
            id: "schouten-closed-form",
            anchor: "the raw derived bracket matches its first-order closed form",
            tags: &["schouten"],
            run: closed_form,
        },
        IdentityCase {
            id: "schouten-classical-pairings",
            anchor: "functions commute, antimomenta act as signed partials, and \
                     degree-one multivectors close on the field commutator",
            tags: &["schouten", "initial"],
            run: classical_pairings,
        },
    ]
}
