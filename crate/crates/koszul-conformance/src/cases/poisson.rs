//! The canonical even bracket: grading, graded antisymmetry, Leibniz,
//! Jacobi, the initial conditions on momentum-linear Hamiltonians, the odd
//! self-bracket closed form, and the Hamiltonian vector field.

use super::{engine, randomized, shrunk_failure};
use crate::gen;
use crate::{Ctx, IdentityCase, Verdict};
use koszul_core::bracket::{
    hamiltonian_field_with, odd_square_closed_form, poisson_with,
};
use koszul_core::{linear_hamiltonian, qi, Parity, ParityReport, SpaceRef};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn phase_charts() -> Vec<SpaceRef> {
    vec![
        koszul_core::Space::cotangent(&gen::base_2_1()).unwrap(),
        koszul_core::Space::cotangent(&gen::base_1_1()).unwrap(),
    ]
}

fn pick_phase(rng: &mut ChaCha8Rng) -> SpaceRef {
    let cs = phase_charts();
    cs[rng.gen_range(0..cs.len())].clone()
}

fn rand_parity(rng: &mut ChaCha8Rng) -> Parity {
    if rng.gen_bool(0.5) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

fn grading(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let s = pick_phase(rng);
        let pf = rand_parity(rng);
        let pg = rand_parity(rng);
        let f = gen::random_homogeneous(rng, &s, 3, 3, pf);
        let g = gen::random_homogeneous(rng, &s, 3, 3, pg);
        shrunk_failure(&["F", "G"], vec![f, g], move |ps| {
            match poisson_with(&ps[0], &ps[1], &conv) {
                Err(_) => true,
                Ok(b) => match b.parity_report() {
                    ParityReport::Zero => false,
                    ParityReport::Homogeneous(p) => p != pf + pg,
                    ParityReport::Mixed => true,
                },
            }
        })
    })
}

fn antisymmetry(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let s = pick_phase(rng);
        let pf = rand_parity(rng);
        let pg = rand_parity(rng);
        let f = gen::random_homogeneous(rng, &s, 3, 3, pf);
        let g = gen::random_homogeneous(rng, &s, 3, 3, pg);
        let sign = pf.koszul_sign(pg);
        shrunk_failure(&["F", "G"], vec![f, g], move |ps| {
            match (
                poisson_with(&ps[0], &ps[1], &conv),
                poisson_with(&ps[1], &ps[0], &conv),
            ) {
                (Ok(fg), Ok(gf)) => fg != gf.scale(&qi(-(sign as i64))),
                _ => true,
            }
        })
    })
}

fn leibniz(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let s = pick_phase(rng);
        let pf = rand_parity(rng);
        let pg = rand_parity(rng);
        let f = gen::random_homogeneous(rng, &s, 3, 2, pf);
        let g = gen::random_homogeneous(rng, &s, 3, 2, pg);
        let h = gen::random_poly(rng, &s, 3, 2);
        let sign = pf.koszul_sign(pg);
        shrunk_failure(&["F", "G", "H"], vec![f, g, h], move |ps| {
            let lhs = poisson_with(&ps[0], &(&ps[1] * &ps[2]), &conv);
            let a = poisson_with(&ps[0], &ps[1], &conv);
            let b = poisson_with(&ps[0], &ps[2], &conv);
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
        let s = pick_phase(rng);
        let pf = rand_parity(rng);
        let pg = rand_parity(rng);
        let f = gen::random_homogeneous(rng, &s, 3, 2, pf);
        let g = gen::random_homogeneous(rng, &s, 3, 2, pg);
        let h = gen::random_poly(rng, &s, 3, 2);
        let sign = pf.koszul_sign(pg);
        shrunk_failure(&["F", "G", "H"], vec![f, g, h], move |ps| {
            let inner = match poisson_with(&ps[1], &ps[2], &conv) {
                Ok(x) => x,
                Err(_) => return true,
            };
            let lhs = poisson_with(&ps[0], &inner, &conv);
            let fg = match poisson_with(&ps[0], &ps[1], &conv) {
                Ok(x) => x,
                Err(_) => return true,
            };
            let a = poisson_with(&fg, &ps[2], &conv);
            let fh = match poisson_with(&ps[0], &ps[2], &conv) {
                Ok(x) => x,
                Err(_) => return true,
            };
            let b = poisson_with(&ps[1], &fh, &conv);
            match (lhs, a, b) {
                (Ok(l), Ok(a), Ok(b)) => l != a.try_add(&b.scale(&qi(sign as i64))).unwrap(),
                _ => true,
            }
        })
    })
}

fn initial_conditions(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let base = if rng.gen_bool(0.5) {
            gen::base_2_1()
        } else {
            gen::base_1_1()
        };
        let px = rand_parity(rng);
        let py = rand_parity(rng);
        let x = gen::random_field(rng, &base, 2, 2, px);
        let y = gen::random_field(rng, &base, 2, 2, py);
        let f = gen::random_poly(rng, &base, 3, 3);
        let g = gen::random_poly(rng, &base, 3, 3);
        let (phase, hx) = engine(linear_hamiltonian(&x))?;
        let (_, hy) = engine(linear_hamiltonian(&y))?;
        let fh = engine(f.lift_to(&phase))?;
        let gh = engine(g.lift_to(&phase))?;
        // Momentum-free functions bracket to zero.
        let ff = engine(poisson_with(&fh, &gh, &conv))?;
        if !ff.is_zero() {
            return Err(format!(
                "  (f,g) != 0 for momentum-free f = {f}, g = {g}: got {ff}"
            ));
        }
        // Momentum-linear Hamiltonians act as the field.
        let hf = engine(poisson_with(&hx, &fh, &conv))?;
        let xf = engine(x.apply(&f))?;
        if hf != engine(xf.lift_to(&phase))? {
            return Err(format!(
                "  (X^,f^) != X(f)^ for X = {x:?}, f = {f}: got {hf}, want {xf}"
            ));
        }
        // The bracket of two momentum-linear Hamiltonians is the commutator's.
        let hh = engine(poisson_with(&hx, &hy, &conv))?;
        let comm = engine(koszul_core::commutator(&x, &y))?;
        let (_, hcomm) = engine(linear_hamiltonian(&comm))?;
        if hh != hcomm {
            return Err(format!(
                "  (X^,Y^) != [X,Y]^ for X = {x:?}, Y = {y:?}: got {hh}, want {hcomm}"
            ));
        }
        Ok(())
    })
}

fn odd_square(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let s = pick_phase(rng);
        let f = gen::random_homogeneous(rng, &s, 3, 4, Parity::Odd);
        shrunk_failure(&["F"], vec![f], move |ps| {
            match (
                poisson_with(&ps[0], &ps[0], &conv),
                odd_square_closed_form(&ps[0]),
            ) {
                (Ok(sq), Ok(closed)) => sq != closed,
                _ => true,
            }
        })
    })
}

fn hamiltonian_field(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let s = pick_phase(rng);
        let ph = rand_parity(rng);
        let h = gen::random_homogeneous(rng, &s, 3, 3, ph);
        let g = gen::random_poly(rng, &s, 3, 3);
        shrunk_failure(&["H", "G"], vec![h, g], move |ps| {
            let field = match hamiltonian_field_with(&ps[0], &conv) {
                Ok(x) => x,
                Err(_) => return true,
            };
            match (field.apply(&ps[1]), poisson_with(&ps[0], &ps[1], &conv)) {
                (Ok(a), Ok(b)) => a != b,
                _ => true,
            }
        })
    })
}

pub fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "poisson-grading",
            anchor: "the even bracket of homogeneous arguments has parity |F|+|G|",
            tags: &["poisson"],
            run: grading,
        },
        IdentityCase {
            id: "poisson-antisymmetry",
            anchor: "(F,G) = -(-1)^{|F||G|} (G,F)",
            tags: &["poisson"],
            run: antisymmetry,
        },
        IdentityCase {
            id: "poisson-leibniz",
            anchor: "(F,GH) = (F,G)H + (-1)^{|F||G|} G (F,H)",
            tags: &["poisson", "leibniz"],
            run: leibniz,
        },
        IdentityCase {
            id: "poisson-jacobi",
            anchor: "(F,(G,H)) = ((F,G),H) + (-1)^{|F||G|} (G,(F,H))",
            tags: &["poisson", "jacobi"],
            run: jacobi,
        },
        IdentityCase {
            id: "poisson-initial-conditions",
            anchor: "functions bracket to zero; momentum-linear Hamiltonians act as \
                     their fields and close on the commutator",
            tags: &["poisson", "initial"],
            run: initial_conditions,
        },
        IdentityCase {
            id: "poisson-odd-square",
            anchor: "(F,F) of an odd F equals twice the momentum/coordinate pairing \
                     of its own derivatives",
            tags: &["poisson"],
            run: odd_square,
        },
        IdentityCase {
            id: "poisson-hamiltonian-field",
            anchor: "the Hamiltonian field of H reproduces (H,-) on every argument",
            tags: &["poisson"],
            run: hamiltonian_field,
        },
    ]
}
