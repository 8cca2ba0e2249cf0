//! The odd anchor map from multivectors to fiberwise-linear Hamiltonians and
//! the higher form brackets it generates: route/display agreement, bracket
//! intertwining, classical binary values, the parity-sign display for
//! function/differential argument lists, and the by-name correspondence that
//! reproduces the master-Hamiltonian derived bracket.

use std::collections::BTreeMap;

use super::{engine, randomized};
use crate::gen;
use crate::{Ctx, IdentityCase, Verdict};
use koszul_core::bracket::{odd_master, poisson_with, schouten_with};
use koszul_core::homotopy::higher_poisson_with;
use koszul_core::koszul::{
    alpha_display_with, alpha_with, higher_koszul_with, unary_koszul_closed_form,
};
use koszul_core::{de_rham_with, Parity, Poly, Role, Space, SpaceRef, VarId};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn pick_base(rng: &mut ChaCha8Rng) -> SpaceRef {
    if rng.gen_bool(0.5) {
        gen::base_2_1()
    } else {
        gen::base_1_1()
    }
}

fn rand_parity(rng: &mut ChaCha8Rng) -> Parity {
    if rng.gen_bool(0.5) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

fn alpha_display(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let base = pick_base(rng);
        let mv = engine(Space::anticotangent(&base))?;
        let p = gen::random_poly(rng, &mv, 4, 4);
        let route = engine(alpha_with(&p, &conv))?;
        let display = engine(alpha_display_with(&p, &conv))?;
        if route != display {
            return Err(format!(
                "  anchor route and coefficient display disagree for P = {p}:\n  \
                 route = {route}\n  display = {display}"
            ));
        }
        Ok(())
    })
}

fn alpha_intertwining(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let base = pick_base(rng);
        let mv = engine(Space::anticotangent(&base))?;
        let p = gen::random_poly(rng, &mv, 3, 3);
        let q = gen::random_poly(rng, &mv, 3, 3);
        let lhs = engine(alpha_with(&engine(schouten_with(&p, &q, &conv))?, &conv))?;
        let rhs = engine(poisson_with(
            &engine(alpha_with(&p, &conv))?,
            &engine(alpha_with(&q, &conv))?,
            &conv,
        ))?;
        if lhs != rhs {
            return Err(format!(
                "  alpha([[P,Q]]) != (alpha P, alpha Q) for P = {p}, Q = {q}:\n  \
                 lhs = {lhs}\n  rhs = {rhs}"
            ));
        }
        Ok(())
    })
}

/// A random antisymmetric structure tensor on an all-even base: the pair
/// `(P, entries)` with `P = sum_{a<b} c_ab st_b st_a` and `entries[(a,b)]`
/// holding the polynomial coefficient `P^{ab}` (constant or x-dependent).
fn random_bivector(
    rng: &mut ChaCha8Rng,
    base: &SpaceRef,
    mv: &SpaceRef,
    x_dependent: bool,
) -> (Poly, BTreeMap<(VarId, VarId), Poly>) {
    let coords: Vec<VarId> = base.var_ids().collect();
    let mut p = Poly::zero(mv);
    let mut entries = BTreeMap::new();
    for i in 0..coords.len() {
        for j in (i + 1)..coords.len() {
            let c = if x_dependent {
                gen::random_poly(rng, base, 2, 2)
            } else {
                Poly::constant(base, gen::random_coeff(rng))
            };
            let st_i = Poly::var(mv, mv.momentum_of(coords[i]).unwrap());
            let st_j = Poly::var(mv, mv.momentum_of(coords[j]).unwrap());
            let c_mv = c.lift_to(mv).unwrap();
            p = &p + &(&c_mv * &(&st_j * &st_i));
            entries.insert((coords[i], coords[j]), c);
        }
    }
    (p, entries)
}

fn koszul_classical(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        // Constant structures on a 3-dimensional base, x-dependent ones on a
        // 2-dimensional base (where the compatibility bracket always closes).
        let x_dep = rng.gen_bool(0.5);
        let base = if x_dep {
            engine(Space::base(&[("x1", Parity::Even), ("x2", Parity::Even)]))?
        } else {
            gen::base_3_0()
        };
        let mv = engine(Space::anticotangent(&base))?;
        let forms = engine(Space::antitangent(&base))?;
        let (p, entries) = random_bivector(rng, &base, &mv, x_dep);
        if x_dep {
            let pp = engine(schouten_with(&p, &p, &conv))?;
            if !pp.is_zero() {
                return Err(format!(
                    "  a bivector on a 2-dimensional base must self-commute; \
                     [[P,P]] = {pp} for P = {p}"
                ));
            }
        }
        let d = engine(de_rham_with(&forms, &conv))?;
        let lift = |c: &Poly| c.lift_to(&forms);
        for (&(a, b), c) in &entries {
            let xa = Poly::var(&forms, engine(forms.var_id(&base.var(a).name))?);
            let xb = Poly::var(&forms, engine(forms.var_id(&base.var(b).name))?);
            let da = Poly::var(
                &forms,
                forms.differential_of(engine(forms.var_id(&base.var(a).name))?).unwrap(),
            );
            let db = Poly::var(
                &forms,
                forms.differential_of(engine(forms.var_id(&base.var(b).name))?).unwrap(),
            );
            let c_forms = engine(lift(c))?;
            // Plain coordinates commute.
            let z = engine(higher_koszul_with(&p, &[&xa, &xb], &conv))?;
            if !z.is_zero() {
                return Err(format!("  [x^a, x^b]_P = {z} != 0 for P = {p}"));
            }
            // Mixed bracket reads the structure tensor off with a minus sign.
            let m = engine(higher_koszul_with(&p, &[&xa, &db], &conv))?;
            if m != c_forms.neg_ref() {
                return Err(format!(
                    "  [x^a, dx^b]_P = {m}, want {} for P = {p}",
                    c_forms.neg_ref()
                ));
            }
            // Differentials bracket to the differential of the entry.
            let dd = engine(higher_koszul_with(&p, &[&da, &db], &conv))?;
            let want = engine(d.apply(&c_forms))?;
            if dd != want {
                return Err(format!(
                    "  [dx^a, dx^b]_P = {dd}, want {want} for P = {p}"
                ));
            }
        }
        Ok(())
    })
}

fn koszul_unary(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let base = pick_base(rng);
        let mv = engine(Space::anticotangent(&base))?;
        let forms = engine(Space::antitangent(&base))?;
        let p = gen::random_homogeneous(rng, &mv, 4, 4, Parity::Even);
        let f = engine(gen::random_poly(rng, &base, 3, 3).lift_to(&forms))?;
        let route = engine(higher_koszul_with(&p, &[&f], &conv))?;
        let closed = engine(unary_koszul_closed_form(&p, &f))?;
        if route != closed {
            return Err(format!(
                "  unary bracket route {route} != closed form {closed} for \
                 P = {p}, f = {f}"
            ));
        }
        Ok(())
    })
}

fn koszul_function_display(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let base = gen::base_2_1();
        let mv = engine(Space::anticotangent(&base))?;
        let forms = engine(Space::antitangent(&base))?;
        let d = engine(de_rham_with(&forms, &conv))?;
        // Ballast guarantees the random structure has components in every
        // antimomentum degree up to four.
        let st = |n: &str| Poly::var_named(&mv, n).unwrap();
        let ballast = &(&st("st_th").pow(2)
            + &(&st("st_th") * &(&st("st_x2") * &st("st_x1"))))
            + &(&st("st_th").pow(4) + &(&st("st_th").pow(2) * &(&st("st_x2") * &st("st_x1"))));
        let p = engine(
            gen::random_homogeneous(rng, &mv, 4, 3, Parity::Even).try_add(&ballast),
        )?;
        let l = rng.gen_range(1..=4usize);
        let mut fs = Vec::new();
        for _ in 0..l {
            let pf = rand_parity(rng);
            fs.push(gen::random_homogeneous(rng, &base, 2, 2, pf));
        }
        let braces = engine(higher_poisson_with(
            &p,
            &fs.iter().collect::<Vec<_>>(),
            &conv,
        ))?;
        let braces_forms = engine(braces.lift_to(&forms))?;
        let fs_forms: Vec<Poly> = fs
            .iter()
            .map(|f| f.lift_to(&forms))
            .collect::<koszul_core::Result<_>>()
            .map_err(|e| e.to_string())?;
        // One plain function followed by differentials: minus the braces.
        let mut args: Vec<Poly> = vec![fs_forms[0].clone()];
        for f in fs_forms.iter().skip(1) {
            args.push(engine(d.apply(f))?);
        }
        let arg_refs: Vec<&Poly> = args.iter().collect();
        let lhs = engine(higher_koszul_with(&p, &arg_refs, &conv))?;
        if lhs != braces_forms.neg_ref() {
            return Err(format!(
                "  [f1, df2, ..., dfl]_P != -{{f1,...,fl}}_P at l = {l}\n  \
                 P = {p}\n  lhs = {lhs}\n  braces = {braces_forms}"
            ));
        }
        // All arguments differentiated: the differential of the braces.
        let dargs: Vec<Poly> = fs_forms
            .iter()
            .map(|f| d.apply(f))
            .collect::<koszul_core::Result<_>>()
            .map_err(|e| e.to_string())?;
        let darg_refs: Vec<&Poly> = dargs.iter().collect();
        let lhs = engine(higher_koszul_with(&p, &darg_refs, &conv))?;
        let rhs = engine(d.apply(&braces_forms))?;
        if lhs != rhs {
            return Err(format!(
                "  [df1, ..., dfl]_P != d{{f1,...,fl}}_P at l = {l}\n  \
                 P = {p}\n  lhs = {lhs}\n  rhs = {rhs}"
            ));
        }
        // Two or more plain functions annihilate the bracket.
        if l >= 2 {
            let mut args: Vec<Poly> = vec![fs_forms[0].clone(), fs_forms[1].clone()];
            for f in fs_forms.iter().skip(2) {
                args.push(engine(d.apply(f))?);
            }
            let arg_refs: Vec<&Poly> = args.iter().collect();
            let z = engine(higher_koszul_with(&p, &arg_refs, &conv))?;
            if !z.is_zero() {
                return Err(format!(
                    "  a bracket with two plain function arguments must vanish; \
                     got {z} at l = {l} for P = {p}"
                ));
            }
        }
        Ok(())
    })
}

/// Builds the by-name symplectic correspondence from the cotangent of the
/// differential chart to the cotangent of the antimomentum chart:
/// `x -> x`, `dx^a -> pi_a`, `p_a -> p_a`, `pi_a -> (-1)^{a~} st_a`.
fn phase_correspondence(
    base: &SpaceRef,
    phase: &SpaceRef,
    t: &SpaceRef,
) -> koszul_core::Result<BTreeMap<VarId, Poly>> {
    let mut images = BTreeMap::new();
    for v in phase.var_ids() {
        let var = phase.var(v);
        let image = match var.role {
            Role::Differential(_) | Role::Momentum(_) | Role::Base | Role::Parameter => {
                let name = &var.name;
                if let Some(stripped) = name.strip_prefix('d') {
                    if base.by_name(stripped).is_some() {
                        // A differential dx^a maps to the momentum of st_a.
                        Poly::var_named(t, &format!("pi_{stripped}"))?
                    } else {
                        Poly::var_named(t, name)?
                    }
                } else if let Some(stripped) = name.strip_prefix("pi_") {
                    // The momentum of dx^a maps to the signed antimomentum.
                    let bv = base.var_id(stripped)?;
                    let st = Poly::var_named(t, &format!("st_{stripped}"))?;
                    if base.var(bv).parity.is_odd() {
                        st.neg_ref()
                    } else {
                        st
                    }
                } else {
                    Poly::var_named(t, name)?
                }
            }
            _ => Poly::var_named(t, &var.name)?,
        };
        images.insert(v, image);
    }
    Ok(images)
}

fn koszul_data_reproduction(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let base = pick_base(rng);
        let mv = engine(Space::anticotangent(&base))?;
        let forms = engine(Space::antitangent(&base))?;
        let phase = engine(Space::cotangent(&forms))?;
        let (t, d1) = engine(odd_master(&mv, &conv))?;
        let images = engine(phase_correspondence(&base, &phase, &t))?;
        // The correspondence sends the de Rham master to the odd-chart master.
        let d = engine(de_rham_with(&forms, &conv))?;
        let (_, d2) = engine(koszul_core::linear_hamiltonian(&d))?;
        let d2_img = engine(d2.morphism_to(&t, &images))?;
        if d2_img != d1 {
            return Err(format!(
                "  the correspondence must send the de Rham master to the \
                 antimomentum master: got {d2_img}, want {d1}"
            ));
        }
        // It is a symplectomorphism on random arguments.
        let f = gen::random_poly(rng, &phase, 3, 3);
        let g = gen::random_poly(rng, &phase, 3, 3);
        let lhs = engine(engine(poisson_with(&f, &g, &conv))?.morphism_to(&t, &images))?;
        let rhs = engine(poisson_with(
            &engine(f.morphism_to(&t, &images))?,
            &engine(g.morphism_to(&t, &images))?,
            &conv,
        ))?;
        if lhs != rhs {
            return Err(format!(
                "  the correspondence must preserve the even bracket:\n  \
                 f = {f}\n  g = {g}\n  lhs = {lhs}\n  rhs = {rhs}"
            ));
        }
        // Anchor images correspond to the derived-bracket Hamiltonians.
        let p = gen::random_poly(rng, &mv, 4, 4);
        let a = engine(alpha_with(&p, &conv))?;
        let lhs = engine(a.morphism_to(&t, &images))?;
        let rhs = engine(poisson_with(&d1, &engine(p.lift_to(&t))?, &conv))?;
        if lhs != rhs {
            return Err(format!(
                "  transported anchor image != (D, P) for P = {p}:\n  \
                 lhs = {lhs}\n  rhs = {rhs}"
            ));
        }
        Ok(())
    })
}

pub fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "anchor-alpha-display",
            anchor: "the anchor route through the de Rham master equals its \
                     coefficient display",
            tags: &["anchor", "alpha"],
            run: alpha_display,
        },
        IdentityCase {
            id: "anchor-alpha-intertwining",
            anchor: "the anchor maps the odd bracket to the even bracket of the \
                     images",
            tags: &["anchor", "alpha"],
            run: alpha_intertwining,
        },
        IdentityCase {
            id: "anchor-koszul-classical",
            anchor: "binary form brackets read the structure tensor off: \
                     [x,x] = 0, [x^a, dx^b] = -P^{ab}, [dx^a, dx^b] = dP^{ab}",
            tags: &["anchor", "koszul"],
            run: koszul_classical,
        },
        IdentityCase {
            id: "anchor-koszul-unary",
            anchor: "the unary form bracket equals its truncated-coefficient \
                     closed form",
            tags: &["anchor", "koszul"],
            run: koszul_unary,
        },
        IdentityCase {
            id: "anchor-koszul-function-display",
            anchor: "form brackets of function/differential argument lists are \
                     minus the brace brackets, their differentials, or zero",
            tags: &["anchor", "koszul"],
            run: koszul_function_display,
        },
        IdentityCase {
            id: "anchor-koszul-data-reproduction",
            anchor: "a by-name symplectic correspondence carries the anchor \
                     image of P to the derived-bracket Hamiltonian (D, P)",
            tags: &["anchor", "alpha"],
            run: koszul_data_reproduction,
        },
    ]
}
