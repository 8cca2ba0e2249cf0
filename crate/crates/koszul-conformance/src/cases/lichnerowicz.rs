//! The twisted differential on multivectors: its displayed coordinate form
//! for quadratic structures, squaring to zero for self-commuting structures,
//! and the index-raising morphism intertwining it with the exterior
//! differential and carrying form brackets to the odd bracket.

use std::collections::BTreeMap;

use super::{engine, randomized};
use crate::gen;
use crate::{Ctx, IdentityCase, Verdict};
use koszul_core::bracket::schouten_with;
use koszul_core::koszul::{higher_koszul_with, lichnerowicz_with, raise_indices_with};
use koszul_core::{de_rham_with, Parity, Poly, Space, SpaceRef, VarId, VectorField};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A random self-commuting even structure together with its charts:
/// constant-coefficient on a 3-dimensional base, polynomial-coefficient on a
/// 2-dimensional base, or the rotation-invariant linear structure.
fn random_poisson(
    rng: &mut ChaCha8Rng,
) -> koszul_core::Result<(SpaceRef, SpaceRef, SpaceRef, Poly)> {
    let kind = rng.gen_range(0..3u32);
    let base = if kind == 1 {
        Space::base(&[("x1", Parity::Even), ("x2", Parity::Even)])?
    } else {
        gen::base_3_0()
    };
    let mv = Space::anticotangent(&base)?;
    let forms = Space::antitangent(&base)?;
    let coords: Vec<VarId> = base.var_ids().collect();
    let st = |i: usize| Poly::var(&mv, mv.momentum_of(coords[i]).unwrap());
    let x = |i: usize| Poly::var(&mv, mv.var_id(&base.var(coords[i]).name).unwrap());
    let p = match kind {
        0 => {
            // Constant antisymmetric structure on three coordinates.
            let mut p = Poly::zero(&mv);
            for i in 0..3 {
                for j in (i + 1)..3 {
                    p = &p + &(&st(j) * &st(i)).scale(&gen::random_coeff(rng));
                }
            }
            p
        }
        1 => {
            // One polynomial entry on two coordinates: always self-commuting.
            let c = gen::random_poly(rng, &base, 2, 2).lift_to(&mv)?;
            &c * &(&st(1) * &st(0))
        }
        _ => {
            // The rotation-invariant linear structure on three coordinates.
            let c = gen::random_coeff(rng);
            (&(&x(2) * &(&st(1) * &st(0)))
                + &(&(&x(0) * &(&st(2) * &st(1))) + &(&x(1) * &(&st(0) * &st(2)))))
                .scale(&c)
        }
    };
    Ok((base, mv, forms, p))
}

fn display(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let (base, mv, _, p) = engine(random_poisson(rng))?;
        // The displayed first-order operator for an even quadratic structure
        // on an even base: P^{ab} st_b on d/dx^a and -d_aP (the derivative of
        // the full tensor) on d/d(st_a).  Both coefficients are sign-flipped
        // left derivatives of the structure itself.
        let mut coeffs: BTreeMap<VarId, Poly> = BTreeMap::new();
        for v in base.var_ids() {
            let xv = engine(mv.var_id(&base.var(v).name))?;
            let anti = mv.momentum_of(xv).unwrap();
            coeffs.insert(xv, p.partial_left(anti).neg_ref());
            coeffs.insert(anti, p.partial_left(xv).neg_ref());
        }
        let field = engine(VectorField::new(&mv, Parity::Odd, coeffs))?;
        let w = gen::random_poly(rng, &mv, 3, 3);
        let lhs = engine(lichnerowicz_with(&p, &w, &conv))?;
        let rhs = engine(field.apply(&w))?;
        if lhs != rhs {
            return Err(format!(
                "  [[P,-]] differs from its displayed first-order operator on \
                 w = {w} for P = {p}:\n  lhs = {lhs}\n  rhs = {rhs}\n  \
                 operator = {field}"
            ));
        }
        Ok(())
    })
}

fn squares_to_zero(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let (_, mv, _, p) = engine(random_poisson(rng))?;
        let pp = engine(schouten_with(&p, &p, &conv))?;
        if !pp.is_zero() {
            return Err(format!("  structure fails to self-commute: [[P,P]] = {pp}"));
        }
        let w = gen::random_poly(rng, &mv, 3, 3);
        let once = engine(lichnerowicz_with(&p, &w, &conv))?;
        let twice = engine(lichnerowicz_with(&p, &once, &conv))?;
        if !twice.is_zero() {
            return Err(format!(
                "  d_P^2 != 0 on w = {w} for P = {p}: got {twice}"
            ));
        }
        Ok(())
    })
}

fn raise_indices_diagram(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let (_, _mv, forms, p) = engine(random_poisson(rng))?;
        let d = engine(de_rham_with(&forms, &conv))?;
        let w = gen::random_poly(rng, &forms, 3, 3);
        let lhs = engine(raise_indices_with(&p, &engine(d.apply(&w))?, &conv))?;
        let rhs = engine(lichnerowicz_with(
            &p,
            &engine(raise_indices_with(&p, &w, &conv))?,
            &conv,
        ))?;
        if lhs != rhs {
            return Err(format!(
                "  raising indices fails to intertwine d with d_P on w = {w} \
                 for P = {p}:\n  lhs = {lhs}\n  rhs = {rhs}"
            ));
        }
        Ok(())
    })
}

fn bracket_intertwining(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let (base, _mv, forms, p) = engine(random_poisson(rng))?;
        // One-forms: function coefficients times differentials.
        let one_form = |rng: &mut ChaCha8Rng| -> koszul_core::Result<Poly> {
            let mut w = Poly::zero(&forms);
            for v in base.var_ids() {
                if rng.gen_bool(0.4) {
                    continue;
                }
                let xv = forms.var_id(&base.var(v).name)?;
                let dv = forms.differential_of(xv).unwrap();
                let c = gen::random_poly(rng, &base, 2, 2).lift_to(&forms)?;
                w = w.try_add(&c.try_mul(&Poly::var(&forms, dv))?)?;
            }
            Ok(w)
        };
        let a = engine(one_form(rng))?;
        let b = engine(one_form(rng))?;
        let bracket = engine(higher_koszul_with(&p, &[&a, &b], &conv))?;
        let lhs = engine(raise_indices_with(&p, &bracket, &conv))?;
        let rhs = engine(schouten_with(
            &engine(raise_indices_with(&p, &a, &conv))?,
            &engine(raise_indices_with(&p, &b, &conv))?,
            &conv,
        ))?;
        if lhs != rhs {
            return Err(format!(
                "  raising indices fails to carry the binary form bracket to \
                 the odd bracket for P = {p}:\n  a = {a}\n  b = {b}\n  \
                 lhs = {lhs}\n  rhs = {rhs}"
            ));
        }
        Ok(())
    })
}

pub fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "lichnerowicz-display",
            anchor: "the twisted differential is the displayed first-order \
                     operator for quadratic structures",
            tags: &["lichnerowicz"],
            run: display,
        },
        IdentityCase {
            id: "lichnerowicz-squares",
            anchor: "the twisted differential squares to zero for self-commuting \
                     structures",
            tags: &["lichnerowicz"],
            run: squares_to_zero,
        },
        IdentityCase {
            id: "lichnerowicz-raise-indices",
            anchor: "raising indices intertwines the exterior differential with \
                     the twisted differential",
            tags: &["lichnerowicz"],
            run: raise_indices_diagram,
        },
        IdentityCase {
            id: "lichnerowicz-bracket-intertwining",
            anchor: "raising indices carries the binary form bracket of one-forms \
                     to the odd bracket",
            tags: &["lichnerowicz"],
            run: bracket_intertwining,
        },
    ]
}
