//! Graded-commutative ring laws: associativity, sign-commutativity,
//! distributivity, vanishing odd squares, the graded Leibniz rule for left
//! partial derivatives, and multiplicativity of parity-correct substitution.

use super::{engine, randomized, shrunk_failure};
use crate::gen;
use crate::{Ctx, IdentityCase, Verdict};
use koszul_core::{Parity, SpaceRef, VarId};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn charts() -> Vec<SpaceRef> {
    vec![gen::base_2_2(), gen::base_1_1()]
}

fn pick_chart(rng: &mut ChaCha8Rng) -> SpaceRef {
    let cs = charts();
    cs[rng.gen_range(0..cs.len())].clone()
}

fn associativity(ctx: &Ctx) -> Verdict {
    randomized(ctx, |rng| {
        let s = pick_chart(rng);
        let f = gen::random_poly(rng, &s, 4, 3);
        let g = gen::random_poly(rng, &s, 4, 3);
        let h = gen::random_poly(rng, &s, 4, 3);
        shrunk_failure(&["f", "g", "h"], vec![f, g, h], |ps| {
            (&(&ps[0] * &ps[1]) * &ps[2]) != (&ps[0] * &(&ps[1] * &ps[2]))
        })
    })
}

fn commutativity(ctx: &Ctx) -> Verdict {
    randomized(ctx, |rng| {
        let s = pick_chart(rng);
        let pf = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
        let pg = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
        let f = gen::random_homogeneous(rng, &s, 4, 3, pf);
        let g = gen::random_homogeneous(rng, &s, 4, 3, pg);
        let sign = pf.koszul_sign(pg);
        shrunk_failure(&["f", "g"], vec![f, g], move |ps| {
            let fg = &ps[0] * &ps[1];
            let gf = (&ps[1] * &ps[0]).scale(&koszul_core::qi(sign as i64));
            fg != gf
        })
    })
}

fn distributivity(ctx: &Ctx) -> Verdict {
    randomized(ctx, |rng| {
        let s = pick_chart(rng);
        let f = gen::random_poly(rng, &s, 4, 3);
        let g = gen::random_poly(rng, &s, 4, 3);
        let h = gen::random_poly(rng, &s, 4, 3);
        shrunk_failure(&["f", "g", "h"], vec![f, g, h], |ps| {
            &ps[0] * &(&ps[1] + &ps[2]) != &(&ps[0] * &ps[1]) + &(&ps[0] * &ps[2])
        })
    })
}

fn odd_squares(ctx: &Ctx) -> Verdict {
    randomized(ctx, |rng| {
        let s = pick_chart(rng);
        let f = gen::random_homogeneous(rng, &s, 4, 4, Parity::Odd);
        shrunk_failure(&["f"], vec![f], |ps| !(&ps[0] * &ps[0]).is_zero())
    })
}

fn leibniz(ctx: &Ctx) -> Verdict {
    randomized(ctx, |rng| {
        let s = pick_chart(rng);
        let vars: Vec<VarId> = s.var_ids().collect();
        let z = vars[rng.gen_range(0..vars.len())];
        let zp = s.var(z).parity;
        let pf = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
        let f = gen::random_homogeneous(rng, &s, 4, 3, pf);
        let g = gen::random_poly(rng, &s, 4, 3);
        let sign = zp.koszul_sign(pf);
        shrunk_failure(&["f", "g"], vec![f, g], move |ps| {
            let lhs = (&ps[0] * &ps[1]).partial_left(z);
            let rhs = &(&ps[0].partial_left(z) * &ps[1])
                + &(&ps[0] * &ps[1].partial_left(z)).scale(&koszul_core::qi(sign as i64));
            lhs != rhs
        })
    })
}

fn partials_commute(ctx: &Ctx) -> Verdict {
    randomized(ctx, |rng| {
        let s = pick_chart(rng);
        let vars: Vec<VarId> = s.var_ids().collect();
        let z = vars[rng.gen_range(0..vars.len())];
        let w = vars[rng.gen_range(0..vars.len())];
        let sign = s.var(z).parity.koszul_sign(s.var(w).parity);
        let f = gen::random_poly(rng, &s, 4, 4);
        shrunk_failure(&["f"], vec![f], move |ps| {
            let lhs = ps[0].partial_left(z).partial_left(w);
            let rhs = ps[0]
                .partial_left(w)
                .partial_left(z)
                .scale(&koszul_core::qi(sign as i64));
            lhs != rhs
        })
    })
}

fn substitution_multiplicative(ctx: &Ctx) -> Verdict {
    randomized(ctx, |rng| {
        let s = gen::base_2_2();
        // Parity-correct images for x1 and th1.
        let x1 = engine(s.var_id("x1"))?;
        let th1 = engine(s.var_id("th1"))?;
        let ex = gen::random_homogeneous(rng, &s, 3, 2, Parity::Even);
        let ot = gen::random_homogeneous(rng, &s, 3, 2, Parity::Odd);
        let f = gen::random_poly(rng, &s, 3, 3);
        let g = gen::random_poly(rng, &s, 3, 3);
        shrunk_failure(
            &["f", "g", "image of x1", "image of th1"],
            vec![f, g, ex, ot],
            move |ps| {
                let mut im = BTreeMap::new();
                im.insert(x1, ps[2].clone());
                im.insert(th1, ps[3].clone());
                match (
                    (&ps[0] * &ps[1]).substitute(&im),
                    ps[0].substitute(&im),
                    ps[1].substitute(&im),
                ) {
                    (Ok(l), Ok(a), Ok(b)) => l != &a * &b,
                    _ => true,
                }
            },
        )
    })
}

pub fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "ring-associativity",
            anchor: "polynomial multiplication is associative",
            tags: &["ring"],
            run: associativity,
        },
        IdentityCase {
            id: "ring-commutativity",
            anchor: "f g = (-1)^{|f||g|} g f for parity-homogeneous factors",
            tags: &["ring"],
            run: commutativity,
        },
        IdentityCase {
            id: "ring-distributivity",
            anchor: "multiplication distributes over addition",
            tags: &["ring"],
            run: distributivity,
        },
        IdentityCase {
            id: "ring-odd-squares",
            anchor: "the square of any odd element vanishes",
            tags: &["ring"],
            run: odd_squares,
        },
        IdentityCase {
            id: "ring-leibniz",
            anchor: "d_z(f g) = (d_z f) g + (-1)^{|z||f|} f (d_z g) for left partials",
            tags: &["ring", "leibniz"],
            run: leibniz,
        },
        IdentityCase {
            id: "ring-partials-commute",
            anchor: "left partials graded-commute: d_z d_w = (-1)^{|z||w|} d_w d_z",
            tags: &["ring"],
            run: partials_commute,
        },
        IdentityCase {
            id: "ring-substitution-multiplicative",
            anchor: "parity-correct substitution is a ring morphism",
            tags: &["ring"],
            run: substitution_multiplicative,
        },
    ]
}
