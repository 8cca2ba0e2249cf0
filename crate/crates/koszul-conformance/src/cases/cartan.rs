//! The differential-calculus package on charts with differentials: graded
//! commutators of fields, the coordinate exterior differential, interior
//! products, and the bracket-to-interior compatibility identity.

use super::{engine, randomized};
use crate::gen;
use crate::{Ctx, IdentityCase, Verdict};
use koszul_core::{commutator, de_rham_with, interior_with, Parity, SpaceRef, VectorField};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn bases() -> Vec<SpaceRef> {
    vec![gen::base_2_1(), gen::base_1_1()]
}

fn pick_base(rng: &mut ChaCha8Rng) -> SpaceRef {
    let cs = bases();
    cs[rng.gen_range(0..cs.len())].clone()
}

fn rand_parity(rng: &mut ChaCha8Rng) -> Parity {
    if rng.gen_bool(0.5) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

fn field_jacobi(ctx: &Ctx) -> Verdict {
    randomized(ctx, move |rng| {
        let s = pick_base(rng);
        let px = rand_parity(rng);
        let py = rand_parity(rng);
        let pz = rand_parity(rng);
        let x = gen::random_field(rng, &s, 2, 2, px);
        let y = gen::random_field(rng, &s, 2, 2, py);
        let z = gen::random_field(rng, &s, 2, 2, pz);
        let lhs = engine(commutator(&x, &engine(commutator(&y, &z))?))?;
        let a = engine(commutator(&engine(commutator(&x, &y))?, &z))?;
        let mut b = engine(commutator(&y, &engine(commutator(&x, &z))?))?;
        if px.is_odd() && py.is_odd() {
            b = b.neg();
        }
        let rhs = engine(a.try_add(&b))?;
        if lhs != rhs {
            return Err(format!(
                "  graded Jacobi fails for\n  X = {x}\n  Y = {y}\n  Z = {z}\n  \
                 lhs = {lhs}\n  rhs = {rhs}"
            ));
        }
        Ok(())
    })
}

fn derham_square(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let mut failures = Vec::new();
    for base in bases() {
        let t = match koszul_core::Space::antitangent(&base) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("  chart construction failed: {e}"));
                continue;
            }
        };
        match de_rham_with(&t, &conv) {
            Ok(d) => match commutator(&d, &d) {
                Ok(sq) if sq.is_zero() => {}
                Ok(sq) => failures.push(format!("  [d,d] != 0 on {t}: {sq}")),
                Err(e) => failures.push(format!("  [d,d] errored on {t}: {e}")),
            },
            Err(e) => failures.push(format!("  d undefined on {t}: {e}")),
        }
    }
    if failures.is_empty() {
        Verdict::Pass {
            trials: bases().len(),
        }
    } else {
        Verdict::Fail {
            trials: bases().len(),
            counterexample: failures.join("\n"),
        }
    }
}

fn interior_commute(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let s = pick_base(rng);
        let t = engine(koszul_core::Space::antitangent(&s))?;
        let px = rand_parity(rng);
        let py = rand_parity(rng);
        let x = gen::random_field(rng, &s, 2, 2, px);
        let y = gen::random_field(rng, &s, 2, 2, py);
        let ix = engine(interior_with(&t, &x, &conv))?;
        let iy = engine(interior_with(&t, &y, &conv))?;
        let c = engine(commutator(&ix, &iy))?;
        if !c.is_zero() {
            return Err(format!(
                "  [i_X, i_Y] != 0 for X = {x}, Y = {y}: {c}"
            ));
        }
        Ok(())
    })
}

fn interior_normalization(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for base in bases() {
        let t = match koszul_core::Space::antitangent(&base) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("  chart construction failed: {e}"));
                continue;
            }
        };
        for v in base.var_ids() {
            checked += 1;
            let coord = match VectorField::coordinate(&base, v) {
                Ok(c) => c,
                Err(e) => {
                    failures.push(format!("  d/d{} invalid: {e}", base.var(v).name));
                    continue;
                }
            };
            let res = (|| -> koszul_core::Result<koszul_core::Poly> {
                let i = interior_with(&t, &coord, &conv)?;
                let dv = t
                    .differential_of(v)
                    .ok_or_else(|| koszul_core::Error::invalid("missing differential"))?;
                i.apply(&koszul_core::Poly::var(&t, dv))
            })();
            // The defining prefactor (-1)^{|X|} makes the pairing of an odd
            // coordinate field with its own differential equal -1.
            let sign = if base.var(v).parity.is_odd() { -1 } else { 1 };
            let want = koszul_core::Poly::one(&t).scale(&koszul_core::qi(sign));
            match res {
                Ok(p) if p == want => {}
                Ok(p) => failures.push(format!(
                    "  i_{{d/d{}}}(d{}) = {p}, want {want}",
                    base.var(v).name,
                    base.var(v).name
                )),
                Err(e) => failures.push(format!("  evaluation failed: {e}")),
            }
        }
    }
    if failures.is_empty() {
        Verdict::Pass { trials: checked }
    } else {
        Verdict::Fail {
            trials: checked,
            counterexample: failures.join("\n"),
        }
    }
}

fn cartan_identity(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let s = pick_base(rng);
        let t = engine(koszul_core::Space::antitangent(&s))?;
        let px = rand_parity(rng);
        let py = rand_parity(rng);
        let x = gen::random_field(rng, &s, 2, 2, px);
        let y = gen::random_field(rng, &s, 2, 2, py);
        let d = engine(de_rham_with(&t, &conv))?;
        let ix = engine(interior_with(&t, &x, &conv))?;
        let iy = engine(interior_with(&t, &y, &conv))?;
        let comm = engine(commutator(&x, &y))?;
        let lhs = engine(interior_with(&t, &comm, &conv))?;
        let mut rhs = engine(commutator(&engine(commutator(&d, &ix))?, &iy))?;
        if px.is_odd() {
            rhs = rhs.neg();
        }
        if lhs != rhs {
            return Err(format!(
                "  i_[X,Y] != (-1)^{{|X|}} [[d,i_X],i_Y] for\n  X = {x}\n  Y = {y}\n  \
                 lhs = {lhs}\n  rhs = {rhs}"
            ));
        }
        Ok(())
    })
}

fn lie_derivative_chain(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let s = pick_base(rng);
        let t = engine(koszul_core::Space::antitangent(&s))?;
        let px = rand_parity(rng);
        let x = gen::random_field(rng, &s, 2, 2, px);
        let d = engine(de_rham_with(&t, &conv))?;
        let ix = engine(interior_with(&t, &x, &conv))?;
        let lie = engine(commutator(&d, &ix))?;
        let c = engine(commutator(&lie, &d))?;
        if !c.is_zero() {
            return Err(format!("  [[d,i_X],d] != 0 for X = {x}: {c}"));
        }
        Ok(())
    })
}

pub fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "cartan-field-jacobi",
            anchor: "graded commutators of vector fields satisfy the graded Jacobi \
                     identity",
            tags: &["cartan", "jacobi"],
            run: field_jacobi,
        },
        IdentityCase {
            id: "cartan-derham-square",
            anchor: "the coordinate exterior differential squares to zero",
            tags: &["cartan"],
            run: derham_square,
        },
        IdentityCase {
            id: "cartan-interior-commute",
            anchor: "interior products pairwise graded-commute",
            tags: &["cartan"],
            run: interior_commute,
        },
        IdentityCase {
            id: "cartan-interior-normalization",
            anchor: "the interior product of a coordinate field pairs its own \
                     differential to the parity sign",
            tags: &["cartan"],
            run: interior_normalization,
        },
        IdentityCase {
            id: "cartan-identity",
            anchor: "the interior product of a commutator is the signed double \
                     commutator with the differential",
            tags: &["cartan"],
            run: cartan_identity,
        },
        IdentityCase {
            id: "cartan-lie-derivative-chain",
            anchor: "the Lie derivative [d, i_X] commutes with the differential",
            tags: &["cartan"],
            run: lie_derivative_chain,
        },
    ]
}
