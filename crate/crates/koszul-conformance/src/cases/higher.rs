//! The higher bracket families generated by a master function on a phase
//! chart, and the homotopy-structure layer built on homological fields:
//! argument symmetry, the multiderivation property, the higher Jacobi
//! identities and their controlling self-commutator, restriction
//! normalizations, frozen coefficient readoffs, structure extraction and
//! encoding round trips, generalized Jacobi residuals, adjoint shifts,
//! chain-map residuals, and anchored-algebra operations.

use std::collections::BTreeMap;

use super::{engine, fixtures, randomized, shrunk_failure};
use crate::gen;
use crate::{Ctx, IdentityCase, Verdict};
use koszul_core::bracket::{odd_master, poisson_with, raw_derived, schouten_with};
use koszul_core::homotopy::{
    adjoint_difference, anchor_apply, encode_structure, extract_structure,
    generalized_jacobi_residual, higher_poisson_with, higher_schouten_with, morphism_residuals,
    section_bracket, Section,
};
use koszul_core::{
    commutator, linear_hamiltonian, q, qi, Parity, ParityReport, Poly, SignConventions, Space,
    SpaceRef, VarId, VectorField,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------
// The two master-function families.
// ---------------------------------------------------------------------

/// One of the two higher-bracket families: an odd master on the cotangent
/// chart iterating the even bracket, or an even master on the anticotangent
/// chart iterating the odd bracket. Arguments live on the base.
#[derive(Clone)]
struct Family {
    odd_master: bool,
    base: SpaceRef,
    phase: SpaceRef,
}

fn odd_family() -> Family {
    let base = gen::base_2_1();
    let phase = Space::cotangent(&base).unwrap();
    Family {
        odd_master: true,
        base,
        phase,
    }
}

fn even_family() -> Family {
    let base = gen::base_2_1();
    let phase = Space::anticotangent(&base).unwrap();
    Family {
        odd_master: false,
        base,
        phase,
    }
}

impl Family {
    fn bracket(
        &self,
        master: &Poly,
        args: &[&Poly],
        conv: &SignConventions,
    ) -> koszul_core::Result<Poly> {
        if self.odd_master {
            higher_schouten_with(master, args, conv)
        } else {
            higher_poisson_with(master, args, conv)
        }
    }

    fn self_commutator(
        &self,
        master: &Poly,
        conv: &SignConventions,
    ) -> koszul_core::Result<Poly> {
        if self.odd_master {
            poisson_with(master, master, conv)
        } else {
            schouten_with(master, master, conv)
        }
    }

    /// A random master of the family's parity, boosted with fiber-rich terms
    /// so that brackets of plain coordinates are generically nonzero and the
    /// self-commutator is generically nonzero up to fiber degree four.
    fn master(&self, rng: &mut ChaCha8Rng) -> Poly {
        let want = if self.odd_master {
            Parity::Odd
        } else {
            Parity::Even
        };
        let r = gen::random_homogeneous(rng, &self.phase, 3, 3, want);
        let v = |name: &str| Poly::var(&self.phase, self.phase.var_id(name).unwrap());
        let boost = if self.odd_master {
            &(&(&v("p_th") * &(&v("p_x1") * &v("x1")))
                + &(&v("p_x1") * &(&v("p_x2") * &v("p_th"))).scale(&gen::random_coeff(rng)))
                + &(&v("p_x1") * &(&v("p_x2") * &v("th"))).scale(&gen::random_coeff(rng))
        } else {
            &(&(&(&v("st_x1") * &(&v("st_x2") * &v("x1")))
                + &(&v("st_th") * &(&v("st_th") * &v("x2"))).scale(&gen::random_coeff(rng)))
                + &(&(&v("st_th") * &(&v("st_th") * &v("st_th"))).scale(&gen::random_coeff(rng))
                    + &(&v("st_x1") * &(&v("st_th") * &v("th"))).scale(&gen::random_coeff(rng))))
                + &(&(&v("st_x1") * &v("st_x2")) * &(&v("st_th") * &v("st_th")))
                    .scale(&gen::random_coeff(rng))
        };
        &r + &boost
    }

    /// Removes the fiber-free background so the nullary bracket vanishes.
    fn strip_background(&self, m: &Poly) -> Poly {
        let free = m.set_zero(&self.phase.momenta());
        m.try_sub(&free).expect("same chart")
    }
}

fn arg_parity(a: &Poly) -> Parity {
    match a.parity_report() {
        ParityReport::Homogeneous(p) => p,
        _ => Parity::Even,
    }
}

/// A non-constant parity-homogeneous argument: a coordinate of the requested
/// parity times a low-degree even factor, plus a linear tail for even ones.
fn rich_arg(rng: &mut ChaCha8Rng, base: &SpaceRef, parity: Parity) -> Poly {
    let evens: Vec<VarId> = base
        .var_ids()
        .filter(|v| !base.var(*v).parity.is_odd())
        .collect();
    let odds: Vec<VarId> = base
        .var_ids()
        .filter(|v| base.var(*v).parity.is_odd())
        .collect();
    let mut factor = Poly::constant(base, gen::random_coeff(rng));
    if rng.gen_bool(0.6) {
        let v = evens[rng.gen_range(0..evens.len())];
        factor = &factor * &Poly::var(base, v);
    }
    if parity.is_odd() {
        let v = odds[rng.gen_range(0..odds.len())];
        &Poly::var(base, v) * &factor
    } else {
        let v = evens[rng.gen_range(0..evens.len())];
        let head = &Poly::var(base, v) * &factor;
        let w = evens[rng.gen_range(0..evens.len())];
        &head + &Poly::var(base, w).scale(&gen::random_coeff(rng))
    }
}

fn rich_args(rng: &mut ChaCha8Rng, base: &SpaceRef, n: usize) -> Vec<Poly> {
    (0..n)
        .map(|_| {
            let parity = if rng.gen_bool(0.5) {
                Parity::Odd
            } else {
                Parity::Even
            };
            rich_arg(rng, base, parity)
        })
        .collect()
}

// ---------------------------------------------------------------------
// Shuffle machinery for the higher Jacobi identities.
// ---------------------------------------------------------------------

/// All splittings of `0..n` into an ascending head of size `k` and the
/// ascending complement.
fn subsets(n: usize, k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    fn rec(
        start: usize,
        n: usize,
        k: usize,
        head: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        if head.len() == k {
            let tail: Vec<usize> = (0..n).filter(|i| !head.contains(i)).collect();
            out.push((head.clone(), tail));
            return;
        }
        for i in start..n {
            head.push(i);
            rec(i + 1, n, k, head, out);
            head.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The Koszul sign of the shuffle moving `head` in front of `tail`: one
/// factor of -1 per crossing pair whose entries both count, where an entry
/// counts by its parity for the odd-master family and by its flipped parity
/// (shifted grading) for the even-master family.
fn shuffle_sign(head: &[usize], tail: &[usize], par: &[Parity], shifted: bool) -> i64 {
    let counts = |i: usize| -> bool {
        if shifted {
            !par[i].is_odd()
        } else {
            par[i].is_odd()
        }
    };
    let mut sign = 1i64;
    for &j in head {
        for &i in tail {
            if i < j && counts(i) && counts(j) {
                sign = -sign;
            }
        }
    }
    sign
}

/// The arity-N Jacobi combination: over every splitting into a nonempty
/// ascending head and ascending tail, the signed bracket of the head's
/// bracket with the tail, summed with the family's shuffle signs.
fn jacobiator(
    fam: &Family,
    master: &Poly,
    args: &[Poly],
    conv: &SignConventions,
) -> koszul_core::Result<Poly> {
    let n = args.len();
    let par: Vec<Parity> = args.iter().map(arg_parity).collect();
    let shifted = !fam.odd_master;
    let mut total = Poly::zero(&fam.base);
    for k in 1..=n {
        for (head, tail) in subsets(n, k) {
            let sign = shuffle_sign(&head, &tail, &par, shifted);
            let inner_args: Vec<&Poly> = head.iter().map(|&i| &args[i]).collect();
            let inner = fam.bracket(master, &inner_args, conv)?;
            let mut outer_args: Vec<&Poly> = vec![&inner];
            for &i in &tail {
                outer_args.push(&args[i]);
            }
            let outer = fam.bracket(master, &outer_args, conv)?;
            total = total.try_add(&outer.scale(&qi(sign)))?;
        }
    }
    Ok(total)
}

// ---------------------------------------------------------------------
// Bracket-family cases.
// ---------------------------------------------------------------------

fn swap_symmetry(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let fams = [odd_family(), even_family()];
    randomized(ctx, move |rng| {
        let fam = &fams[rng.gen_range(0..2)];
        let n = rng.gen_range(2..=3usize);
        let i = rng.gen_range(0..n - 1);
        let master = fam.master(rng);
        let args = rich_args(rng, &fam.base, n);
        let law = |ps: &[Poly]| -> Option<bool> {
            let m = &ps[0];
            let fs = &ps[1..];
            let mut sw: Vec<Poly> = fs.to_vec();
            sw.swap(i, i + 1);
            let pa = arg_parity(&fs[i]);
            let pb = arg_parity(&fs[i + 1]);
            let both = if fam.odd_master {
                pa.is_odd() && pb.is_odd()
            } else {
                !pa.is_odd() && !pb.is_odd()
            };
            let sign = if both { -1 } else { 1 };
            let refs: Vec<&Poly> = fs.iter().collect();
            let srefs: Vec<&Poly> = sw.iter().collect();
            let lhs = fam.bracket(m, &refs, &conv).ok()?;
            let rhs = fam.bracket(m, &srefs, &conv).ok()?.scale(&qi(sign));
            Some(lhs != rhs)
        };
        let mut polys = vec![master];
        polys.extend(args);
        let names: Vec<&str> = ["master", "f1", "f2", "f3"][..n + 1].to_vec();
        shrunk_failure(&names, polys, |ps| law(ps).unwrap_or(false))
    })
}

fn multiderivation(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let fams = [odd_family(), even_family()];
    randomized(ctx, move |rng| {
        let fam = &fams[rng.gen_range(0..2)];
        let n = rng.gen_range(1..=3usize);
        let master = fam.master(rng);
        let fixed = rich_args(rng, &fam.base, n - 1);
        let h = gen::random_poly(rng, &fam.base, 3, 3);
        // The final slot expands over the coordinates with left coefficients:
        // B(f.., h) = sum_v B(f.., v) d^L_v h. Combined with the swap
        // symmetry this is the multiderivation property in every slot.
        let law = |ps: &[Poly]| -> Option<bool> {
            let m = &ps[0];
            let fs = &ps[1..ps.len() - 1];
            let h = &ps[ps.len() - 1];
            let bracket = |v: &Poly| -> Option<Poly> {
                let mut xs: Vec<&Poly> = fs.iter().collect();
                xs.push(v);
                fam.bracket(m, &xs, &conv).ok()
            };
            let lhs = bracket(h)?;
            let mut rhs = Poly::zero(&fam.base);
            for v in fam.base.var_ids() {
                let c = bracket(&Poly::var(&fam.base, v))?;
                rhs = rhs.try_add(&c.try_mul(&h.partial_left(v)).ok()?).ok()?;
            }
            Some(lhs != rhs)
        };
        let mut polys = vec![master];
        polys.extend(fixed);
        polys.push(h);
        let names: Vec<&str> = match n {
            1 => vec!["master", "h"],
            2 => vec!["master", "f1", "h"],
            _ => vec!["master", "f1", "f2", "h"],
        };
        shrunk_failure(&names, polys, |ps| law(ps).unwrap_or(false))
    })
}

fn jacobi_family(ctx: &Ctx, fam: Family) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let master = fam.strip_background(&fam.master(rng));
        let n = if rng.gen_bool(0.15) {
            4
        } else {
            rng.gen_range(2..=3usize)
        };
        let args = rich_args(rng, &fam.base, n);
        // The Jacobi combination equals the N-ary bracket generated by half
        // the master's self-commutator; for a self-commuting master this is
        // the vanishing of all higher Jacobi residuals.
        let law = |ps: &[Poly]| -> Option<bool> {
            let m = &ps[0];
            let args = &ps[1..];
            let half = fam.self_commutator(m, &conv).ok()?.scale(&q(1, 2));
            let j = jacobiator(&fam, m, args, &conv).ok()?;
            let refs: Vec<&Poly> = args.iter().collect();
            let rhs = fam.bracket(&half, &refs, &conv).ok()?;
            Some(j != rhs)
        };
        let mut polys = vec![master];
        polys.extend(args);
        let names: Vec<&str> = ["master", "f1", "f2", "f3", "f4"][..n + 1].to_vec();
        shrunk_failure(&names, polys, |ps| law(ps).unwrap_or(false))
    })
}

fn jacobi_odd_master(ctx: &Ctx) -> Verdict {
    jacobi_family(ctx, odd_family())
}

fn jacobi_even_master(ctx: &Ctx) -> Verdict {
    jacobi_family(ctx, even_family())
}

fn jacobi_vanishing(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let of = odd_family();
    let ef = even_family();
    let ov = |name: &str| Poly::var(&of.phase, of.phase.var_id(name).unwrap());
    let ev = |name: &str| Poly::var(&ef.phase, ef.phase.var_id(name).unwrap());
    // Hand-built masters whose self-commutator is zero by disjoint pairing;
    // the vanishing is machine-checked below, not assumed.
    let masters: Vec<(Family, Poly)> = vec![
        (of.clone(), (&ov("p_th") * &(&ov("p_x1") * &ov("p_x1"))).scale(&qi(3))),
        (
            of.clone(),
            &(&ov("p_th") * &ov("p_x1"))
                + &(&ov("p_th") * &(&ov("p_x2") * &ov("p_x2"))).scale(&q(1, 2)),
        ),
        (ef.clone(), (&ev("st_th") * &(&ev("st_th") * &ev("st_th"))).scale(&qi(2))),
        (
            ef.clone(),
            &(&ev("x2") * &ev("x2")) * &(&ev("st_x1") * &(&ev("st_th") * &ev("st_th"))),
        ),
        (
            ef.clone(),
            &(&ev("x1") * &(&ev("x1") * &ev("x1")))
                * &(&(&ev("st_th") * &ev("st_th")) * &(&ev("st_th") * &ev("st_th"))),
        ),
    ];
    for (i, (fam, m)) in masters.iter().enumerate() {
        match fam.self_commutator(m, &conv) {
            Ok(c) if c.is_zero() => {}
            Ok(c) => {
                return Verdict::Fail {
                    trials: 1,
                    counterexample: format!(
                        "  fixture master {i} does not self-commute: {c}"
                    ),
                }
            }
            Err(e) => {
                return Verdict::Fail {
                    trials: 1,
                    counterexample: format!("  engine error on fixture master {i}: {e}"),
                }
            }
        }
    }
    randomized(ctx, move |rng| {
        let (fam, master) = &masters[rng.gen_range(0..masters.len())];
        let n = rng.gen_range(1..=4usize);
        let args = rich_args(rng, &fam.base, n);
        let law = |ps: &[Poly]| -> Option<bool> {
            let j = jacobiator(fam, master, ps, &conv).ok()?;
            Some(!j.is_zero())
        };
        let names: Vec<&str> = ["f1", "f2", "f3", "f4"][..n].to_vec();
        shrunk_failure(&names, args, |ps| law(ps).unwrap_or(false))
    })
}

fn restriction(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let fams = [odd_family(), even_family()];
    randomized(ctx, move |rng| {
        let fam = &fams[rng.gen_range(0..2)];
        let master = fam.master(rng);
        // Nullary bracket = the master restricted to zero fiber variables,
        // lowered to the base.
        let nullary = engine(fam.bracket(&master, &[], &conv))?;
        let expected = engine(
            master
                .set_zero(&fam.phase.momenta())
                .lower_to(&fam.base),
        )?;
        if nullary != expected {
            return Err(format!(
                "  nullary bracket disagrees with the restriction\n  master = {master}\n  \
                 nullary = {nullary}\n  restriction = {expected}"
            ));
        }
        // Unary bracket = one canonical bracket with the lifted argument,
        // then the same restriction.
        let f = gen::random_poly(rng, &fam.base, 3, 3);
        let lifted = engine(f.lift_to(&fam.phase))?;
        let one = engine(if fam.odd_master {
            poisson_with(&master, &lifted, &conv)
        } else {
            schouten_with(&master, &lifted, &conv)
        })?;
        let direct = engine(one.set_zero(&fam.phase.momenta()).lower_to(&fam.base))?;
        let unary = engine(fam.bracket(&master, &[&f], &conv))?;
        if unary != direct {
            return Err(format!(
                "  unary bracket disagrees with the restricted canonical bracket\n  \
                 master = {master}\n  f = {f}\n  unary = {unary}\n  direct = {direct}"
            ));
        }
        Ok(())
    })
}

fn coefficient_readoff(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let ef = even_family();
    let of = odd_family();
    let sv = |name: &str| Poly::var(&ef.phase, ef.phase.var_id(name).unwrap());
    let cv = |name: &str| Poly::var(&ef.base, ef.base.var_id(name).unwrap());
    let pv = |name: &str| Poly::var(&of.phase, of.phase.var_id(name).unwrap());
    let bv = |name: &str| Poly::var(&of.base, of.base.var_id(name).unwrap());
    let even = |master: &Poly, args: &[&Poly]| higher_poisson_with(master, args, &conv);
    let odd = |master: &Poly, args: &[&Poly]| higher_schouten_with(master, args, &conv);
    let check = |got: koszul_core::Result<Poly>, want: Poly| -> Result<(), String> {
        match got {
            Ok(g) if g == want => Ok(()),
            Ok(g) => Err(format!("got {g}, want {want}")),
            Err(e) => Err(format!("engine error: {e}")),
        }
    };
    let p1 = (&sv("st_x2") * &sv("st_x1")).scale(&qi(3));
    let p2 = (&sv("st_th") * &sv("st_th")).scale(&qi(5));
    let p3 = (&sv("x2") * &(&sv("st_th") * &sv("st_th"))).scale(&qi(7));
    let p4 = (&sv("st_x1") * &(&sv("st_x2") * &(&sv("st_th") * &sv("st_th")))).scale(&qi(2));
    let p5 = (&sv("st_th") * &(&sv("st_th") * &sv("st_th"))).scale(&qi(11));
    let h1 = (&pv("p_x1") * &pv("p_x1")).scale(&q(1, 2));
    let czero = Poly::zero(&ef.base);
    let konst = |n: i64| Poly::constant(&ef.base, qi(n));
    let checks: Vec<(&'static str, Result<(), String>)> = vec![
        (
            "constant bivector, coordinates in order",
            check(even(&p1, &[&cv("x1"), &cv("x2")]), konst(3)),
        ),
        (
            "constant bivector, coordinates exchanged",
            check(even(&p1, &[&cv("x2"), &cv("x1")]), konst(-3)),
        ),
        (
            "constant bivector, odd pair",
            check(even(&p1, &[&cv("th"), &cv("th")]), czero.clone()),
        ),
        (
            "constant bivector, mixed pair",
            check(even(&p1, &[&cv("x1"), &cv("th")]), czero.clone()),
        ),
        (
            "odd-square master, odd pair",
            check(even(&p2, &[&cv("th"), &cv("th")]), konst(10)),
        ),
        (
            "odd-square master, even pair",
            check(even(&p2, &[&cv("x1"), &cv("x2")]), czero.clone()),
        ),
        (
            "coefficient function survives the readoff",
            check(even(&p3, &[&cv("th"), &cv("th")]), cv("x2").scale(&qi(14))),
        ),
        (
            "quartic master, even-even-odd-odd",
            check(
                even(&p4, &[&cv("x1"), &cv("x2"), &cv("th"), &cv("th")]),
                konst(-4),
            ),
        ),
        (
            "quartic master, exchanged even pair",
            check(
                even(&p4, &[&cv("x2"), &cv("x1"), &cv("th"), &cv("th")]),
                konst(4),
            ),
        ),
        (
            "quartic master, odd pair first",
            check(
                even(&p4, &[&cv("th"), &cv("th"), &cv("x1"), &cv("x2")]),
                konst(-4),
            ),
        ),
        (
            "cubic odd-square master",
            check(even(&p5, &[&cv("th"), &cv("th"), &cv("th")]), konst(-66)),
        ),
        (
            "momentum-square master pairs the coordinate with itself",
            check(odd(&h1, &[&bv("x1"), &bv("x1")]), Poly::one(&of.base)),
        ),
        (
            "momentum-square master, unrelated pair",
            check(odd(&h1, &[&bv("x1"), &bv("th")]), Poly::zero(&of.base)),
        ),
    ];
    fixtures(checks)
}

fn canonical_master_binary(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let base = gen::base_2_1();
    let mv = Space::anticotangent(&base).unwrap();
    let d = match odd_master(&mv, &conv) {
        Ok((_, d)) => d,
        Err(e) => {
            return Verdict::Fail {
                trials: 1,
                counterexample: format!("  engine error building the canonical master: {e}"),
            }
        }
    };
    randomized(ctx, move |rng| {
        let pa = if rng.gen_bool(0.5) {
            Parity::Even
        } else {
            Parity::Odd
        };
        let a = gen::random_homogeneous(rng, &mv, 3, 3, pa);
        let b = gen::random_poly(rng, &mv, 3, 3);
        // The binary bracket generated by the canonical quadratic master is
        // the raw double bracket of multivectors.
        let raw = engine(raw_derived(&a, &b, &conv))?;
        let binary = engine(higher_schouten_with(&d, &[&a, &b], &conv))?;
        if binary != raw {
            return Err(format!(
                "  binary bracket of the canonical master disagrees with the raw \
                 double bracket\n  A = {a}\n  B = {b}\n  binary = {binary}\n  raw = {raw}"
            ));
        }
        // The antisymmetric odd bracket is the same up to the parity sign.
        let sb = engine(schouten_with(&a, &b, &conv))?;
        let sign = if pa.is_odd() { 1 } else { -1 };
        if sb != binary.scale(&qi(sign)) {
            return Err(format!(
                "  antisymmetric bracket does not match the signed binary bracket\n  \
                 A = {a}\n  B = {b}\n  antisymmetric = {sb}\n  binary = {binary}"
            ));
        }
        // A quadratic master generates no unary or ternary brackets.
        let unary = engine(higher_schouten_with(&d, &[&a], &conv))?;
        let c = gen::random_poly(rng, &mv, 2, 2);
        let ternary = engine(higher_schouten_with(&d, &[&a, &b, &c], &conv))?;
        if !unary.is_zero() || !ternary.is_zero() {
            return Err(format!(
                "  quadratic master leaks outside arity two\n  A = {a}\n  B = {b}\n  \
                 C = {c}\n  unary = {unary}\n  ternary = {ternary}"
            ));
        }
        Ok(())
    })
}

fn linear_master_unary(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    randomized(ctx, move |rng| {
        let base = if rng.gen_bool(0.5) {
            gen::base_2_1()
        } else {
            gen::base_1_1()
        };
        let parity = if rng.gen_bool(0.5) {
            Parity::Even
        } else {
            Parity::Odd
        };
        let x = gen::random_field(rng, &base, 2, 2, parity);
        let (_, h) = engine(linear_hamiltonian(&x))?;
        let f = gen::random_poly(rng, &base, 3, 3);
        // A master linear in the momenta generates exactly the field: the
        // unary bracket is its action, and all higher brackets vanish.
        let unary = engine(higher_schouten_with(&h, &[&f], &conv))?;
        let expected = engine(x.apply(&f))?;
        if unary != expected {
            return Err(format!(
                "  unary bracket of a momentum-linear master is not the field action\n  \
                 X = {x}\n  f = {f}\n  unary = {unary}\n  X(f) = {expected}"
            ));
        }
        let g = gen::random_poly(rng, &base, 2, 2);
        let binary = engine(higher_schouten_with(&h, &[&f, &g], &conv))?;
        if !binary.is_zero() {
            return Err(format!(
                "  momentum-linear master generates a binary bracket\n  X = {x}\n  \
                 f = {f}\n  g = {g}\n  binary = {binary}"
            ));
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------
// Homotopy-structure cases.
// ---------------------------------------------------------------------

fn odd_generators(n: usize) -> (SpaceRef, Vec<VarId>) {
    let point = Space::base(&[]).unwrap();
    let names: Vec<String> = (1..=n).map(|i| format!("xi{i}")).collect();
    let spec: Vec<(&str, Parity)> = names.iter().map(|s| (s.as_str(), Parity::Odd)).collect();
    let g = Space::vector_bundle(&point, &spec).unwrap();
    let xi = names.iter().map(|s| g.var_id(s).unwrap()).collect();
    (g, xi)
}

fn extract_roundtrip(ctx: &Ctx) -> Verdict {
    let (g, xi) = odd_generators(3);
    randomized(ctx, move |rng| {
        let qf = gen::random_field(rng, &g, 2, 3, Parity::Odd);
        let s = engine(extract_structure(&qf, &xi, 3))?;
        // Encoding the extracted tower reproduces the field exactly.
        let back = engine(encode_structure(&s))?;
        if back != qf {
            return Err(format!(
                "  extraction does not round-trip through encoding\n  field = {qf}\n  \
                 re-encoded = {back}"
            ));
        }
        // The tower matches the Taylor readoff of the coefficients: the
        // nullary bracket is the constant part, unary parts cannot occur on
        // an all-odd chart, the binary brackets are the second left
        // derivatives at zero, and repeating an odd generator kills the
        // bracket.
        let null = engine(s.bracket(&[]))?;
        for k in 0..3 {
            let want = qf.coeff(xi[k]).set_zero(&xi);
            if null.coeff(xi[k]) != want {
                return Err(format!(
                    "  nullary bracket disagrees with the constant part\n  field = {qf}\n  \
                     got = {}\n  want = {want}",
                    null.coeff(xi[k])
                ));
            }
        }
        for i in 0..3 {
            let un = engine(s.bracket(&[i]))?;
            if !un.is_zero() {
                return Err(format!(
                    "  unexpected unary bracket on an all-odd chart\n  field = {qf}"
                ));
            }
            let rep = engine(s.bracket(&[i, i]))?;
            if !rep.is_zero() {
                return Err(format!(
                    "  repeated odd generator does not kill the bracket\n  field = {qf}"
                ));
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let b = engine(s.bracket(&[i, j]))?;
                for k in 0..3 {
                    let want = qf.coeff(xi[k]).partial_left(xi[j]).partial_left(xi[i]);
                    if b.coeff(xi[k]) != want {
                        return Err(format!(
                            "  binary bracket ({i},{j}) disagrees with the Taylor \
                             coefficient\n  field = {qf}\n  got = {}\n  want = {want}",
                            b.coeff(xi[k])
                        ));
                    }
                }
            }
        }
        Ok(())
    })
}

/// The four-generator nilpotent fixture: two nonzero brackets chaining the
/// first generator through the tower.
fn filiform() -> (SpaceRef, Vec<VarId>, VectorField) {
    let (g, xi) = odd_generators(4);
    let p = |v: VarId| Poly::var(&g, v);
    let coeffs = vec![
        (xi[2], &p(xi[1]) * &p(xi[0])),
        (xi[3], &p(xi[2]) * &p(xi[0])),
    ];
    let qf = VectorField::new(&g, Parity::Odd, coeffs).unwrap();
    (g, xi, qf)
}

fn generalized_jacobi_cases(ctx: &Ctx) -> Verdict {
    let _ = ctx;
    let (_, xi4, q_fil) = filiform();
    let mut checks: Vec<(&'static str, Result<(), String>)> = Vec::new();
    // The fixture field must square to zero before its residuals can be
    // asserted; this is machine-checked, not assumed.
    let sq = commutator(&q_fil, &q_fil)
        .map_err(|e| format!("engine error: {e}"))
        .map(|c| c.is_zero());
    checks.push((
        "nilpotent fixture squares to zero",
        match &sq {
            Ok(true) => Ok(()),
            Ok(false) => Err("the fixture field does not square to zero".into()),
            Err(e) => Err(e.clone()),
        },
    ));
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    for len in 1..=4usize {
        for (head, _) in subsets(4, len) {
            tuples.push(head);
        }
    }
    let all_zero = tuples.iter().try_for_each(|t| {
        match generalized_jacobi_residual(&q_fil, &xi4, t) {
            Ok(r) if r.is_zero() => Ok(()),
            Ok(_) => Err(format!("nonzero residual at tuple {t:?}")),
            Err(e) => Err(format!("engine error at tuple {t:?}: {e}")),
        }
    });
    checks.push((
        "all residuals vanish for the nilpotent fixture up to arity four",
        all_zero,
    ));
    // A mixed-parity chart with a pure differential.
    let point = Space::base(&[]).unwrap();
    let gm = Space::vector_bundle(&point, &[("xi", Parity::Odd), ("u", Parity::Even)]).unwrap();
    let xiv = gm.var_id("xi").unwrap();
    let uv = gm.var_id("u").unwrap();
    let q_mix = VectorField::new(&gm, Parity::Odd, vec![(uv, Poly::var(&gm, xiv))]).unwrap();
    let gens_mix = vec![xiv, uv];
    let mix_sq = commutator(&q_mix, &q_mix)
        .map(|c| c.is_zero())
        .unwrap_or(false);
    checks.push((
        "differential fixture squares to zero",
        if mix_sq {
            Ok(())
        } else {
            Err("the differential fixture does not square to zero".into())
        },
    ));
    let mix_tuples: Vec<Vec<usize>> = vec![
        vec![0],
        vec![1],
        vec![0, 1],
        vec![1, 1],
        vec![0, 1, 1],
    ];
    let mix_zero = mix_tuples.iter().try_for_each(|t| {
        match generalized_jacobi_residual(&q_mix, &gens_mix, t) {
            Ok(r) if r.is_zero() => Ok(()),
            Ok(_) => Err(format!("nonzero residual at tuple {t:?}")),
            Err(e) => Err(format!("engine error at tuple {t:?}: {e}")),
        }
    });
    checks.push((
        "residuals vanish for the differential fixture, repeats included",
        mix_zero,
    ));
    // A perturbed field that does not square to zero must leave a residual.
    let (g3, xi3) = odd_generators(3);
    let p3 = |v: VarId| Poly::var(&g3, v);
    let bad = VectorField::new(
        &g3,
        Parity::Odd,
        vec![
            (xi3[2], &(&p3(xi3[1]) * &p3(xi3[0])) + &(&p3(xi3[2]) * &p3(xi3[0]))),
            (xi3[0], &p3(xi3[2]) * &p3(xi3[1])),
        ],
    )
    .unwrap();
    let bad_sq = commutator(&bad, &bad).map(|c| !c.is_zero()).unwrap_or(false);
    checks.push((
        "perturbed fixture does not square to zero",
        if bad_sq {
            Ok(())
        } else {
            Err("expected a nonzero square".into())
        },
    ));
    let bad_res = generalized_jacobi_residual(&bad, &xi3, &[0, 1, 2])
        .map(|r| !r.is_zero())
        .unwrap_or(false);
    checks.push((
        "perturbed fixture leaves a nonzero ternary residual",
        if bad_res {
            Ok(())
        } else {
            Err("expected a nonzero residual".into())
        },
    ));
    fixtures(checks)
}

fn adjoint_shift(ctx: &Ctx) -> Verdict {
    let point = Space::base(&[]).unwrap();
    let g0 = Space::vector_bundle(
        &point,
        &[("xi1", Parity::Odd), ("xi2", Parity::Odd), ("xi3", Parity::Odd)],
    )
    .unwrap();
    let g = Space::with_parameters(
        &g0,
        &[("h1", Parity::Odd), ("h2", Parity::Odd), ("h3", Parity::Odd)],
    )
    .unwrap();
    let xi: Vec<VarId> = (1..=3)
        .map(|i| g.var_id(&format!("xi{i}")).unwrap())
        .collect();
    let hp: Vec<VarId> = (1..=3)
        .map(|i| g.var_id(&format!("h{i}")).unwrap())
        .collect();
    randomized(ctx, move |rng| {
        // A purely quadratic odd field in the generators.
        let mut coeffs = Vec::new();
        for &k in &xi {
            let mut c = Poly::zero(&g);
            for i in 0..3 {
                for j in (i + 1)..3 {
                    if rng.gen_bool(0.7) {
                        let term = (&Poly::var(&g, xi[j]) * &Poly::var(&g, xi[i]))
                            .scale(&gen::random_coeff(rng));
                        c = engine(c.try_add(&term))?;
                    }
                }
            }
            coeffs.push((k, c));
        }
        let qf = engine(VectorField::new(&g, Parity::Odd, coeffs))?;
        // An odd displacement of the generators built from the parameters.
        let mut disp = BTreeMap::new();
        for i in 0..3 {
            let mut eta = Poly::zero(&g);
            for &h in &hp {
                if rng.gen_bool(0.6) {
                    eta = engine(
                        eta.try_add(&Poly::var(&g, h).scale(&gen::random_coeff(rng))),
                    )?;
                }
            }
            disp.insert(xi[i], eta);
        }
        let ad = engine(adjoint_difference(&qf, &disp))?;
        // For a quadratic field the shift difference is the bilinearization:
        // each coefficient becomes sum_m eta_m (d^L_m coefficient).
        let mut expected_coeffs = Vec::new();
        for &k in &xi {
            let mut e = Poly::zero(&g);
            for i in 0..3 {
                let eta = disp.get(&xi[i]).unwrap();
                e = engine(e.try_add(&engine(
                    eta.try_mul(&qf.coeff(k).partial_left(xi[i])),
                )?))?;
            }
            expected_coeffs.push((k, e));
        }
        let expected = engine(VectorField::new(&g, Parity::Odd, expected_coeffs))?;
        if ad != expected {
            return Err(format!(
                "  adjoint shift of a quadratic field is not its bilinearization\n  \
                 field = {qf}\n  got = {ad}\n  want = {expected}"
            ));
        }
        Ok(())
    })
}

fn morphism_cases(ctx: &Ctx) -> Verdict {
    let _ = ctx;
    let (g4, xi4, q_fil) = filiform();
    let p4 = |v: VarId| Poly::var(&g4, v);
    let mut checks: Vec<(&'static str, Result<(), String>)> = Vec::new();
    // A graded rescaling compatible with the two structure equations is a
    // chain map: residuals vanish identically.
    let mut auto = BTreeMap::new();
    auto.insert(xi4[0], p4(xi4[0]).scale(&qi(2)));
    auto.insert(xi4[1], p4(xi4[1]).scale(&qi(3)));
    auto.insert(xi4[2], p4(xi4[2]).scale(&qi(6)));
    auto.insert(xi4[3], p4(xi4[3]).scale(&qi(12)));
    let res = morphism_residuals(&q_fil, &q_fil, &auto);
    checks.push((
        "compatible rescaling has zero residuals",
        match res {
            Ok(rs) => {
                if rs.iter().all(|(_, p)| p.is_zero()) {
                    Ok(())
                } else {
                    Err(format!(
                        "nonzero residuals: {:?}",
                        rs.iter()
                            .filter(|(_, p)| !p.is_zero())
                            .map(|(v, p)| format!("{}: {p}", g4.var(*v).name))
                            .collect::<Vec<_>>()
                    ))
                }
            }
            Err(e) => Err(format!("engine error: {e}")),
        },
    ));
    // Detuning one scale breaks the chain condition in exactly that slot.
    let mut broken = auto.clone();
    broken.insert(xi4[3], p4(xi4[3]).scale(&qi(11)));
    let want = (&p4(xi4[2]) * &p4(xi4[0])).scale(&qi(-1));
    let res = morphism_residuals(&q_fil, &q_fil, &broken);
    checks.push((
        "detuned rescaling leaves the predicted residual",
        match res {
            Ok(rs) => {
                let bad: Vec<_> = rs.iter().filter(|(_, p)| !p.is_zero()).collect();
                match bad.as_slice() {
                    [(v, p)] if *v == xi4[3] && *p == want => Ok(()),
                    _ => Err(format!(
                        "unexpected residuals: {:?}",
                        rs.iter()
                            .map(|(v, p)| format!("{}: {p}", g4.var(*v).name))
                            .collect::<Vec<_>>()
                    )),
                }
            }
            Err(e) => Err(format!("engine error: {e}")),
        },
    ));
    // Cross-chart maps into the nilpotent fixture from a two-generator
    // abelian chart: pairing the generators with the two closed slots is a
    // chain map, pairing them with the two bracketing slots is not.
    let (g2, eta) = odd_generators(2);
    let q_ab = VectorField::zero(&g2, Parity::Odd);
    let zero4 = Poly::zero(&g2);
    let mut good = BTreeMap::new();
    good.insert(xi4[0], zero4.clone());
    good.insert(xi4[1], zero4.clone());
    good.insert(xi4[2], Poly::var(&g2, eta[0]));
    good.insert(xi4[3], Poly::var(&g2, eta[1]));
    let res = morphism_residuals(&q_ab, &q_fil, &good);
    checks.push((
        "abelian map onto the closed slots has zero residuals",
        match res {
            Ok(rs) if rs.iter().all(|(_, p)| p.is_zero()) => Ok(()),
            Ok(_) => Err("expected zero residuals".into()),
            Err(e) => Err(format!("engine error: {e}")),
        },
    ));
    let mut bad = BTreeMap::new();
    bad.insert(xi4[0], Poly::var(&g2, eta[0]));
    bad.insert(xi4[1], Poly::var(&g2, eta[1]));
    bad.insert(xi4[2], zero4.clone());
    bad.insert(xi4[3], zero4);
    let want = &Poly::var(&g2, eta[0]) * &Poly::var(&g2, eta[1]);
    let res = morphism_residuals(&q_ab, &q_fil, &bad);
    checks.push((
        "abelian map onto the bracketing slots leaves the product residual",
        match res {
            Ok(rs) => {
                let nz: Vec<_> = rs.iter().filter(|(_, p)| !p.is_zero()).collect();
                match nz.as_slice() {
                    [(v, p)] if *v == xi4[2] && *p == want => Ok(()),
                    _ => Err(format!(
                        "unexpected residuals: {:?}",
                        rs.iter()
                            .map(|(v, p)| format!("{}: {p}", g4.var(*v).name))
                            .collect::<Vec<_>>()
                    )),
                }
            }
            Err(e) => Err(format!("engine error: {e}")),
        },
    ));
    fixtures(checks)
}

fn anchored_algebra(ctx: &Ctx) -> Verdict {
    let m = gen::base_3_0();
    let tm = Space::vector_bundle(
        &m,
        &[("dx1", Parity::Odd), ("dx2", Parity::Odd), ("dx3", Parity::Odd)],
    )
    .unwrap();
    let dx: Vec<VarId> = (1..=3)
        .map(|i| tm.var_id(&format!("dx{i}")).unwrap())
        .collect();
    let xv: Vec<VarId> = (1..=3)
        .map(|i| tm.var_id(&format!("x{i}")).unwrap())
        .collect();
    let coeffs: Vec<(VarId, Poly)> = (0..3).map(|i| (xv[i], Poly::var(&tm, dx[i]))).collect();
    let qf = VectorField::new(&tm, Parity::Odd, coeffs).unwrap();
    match commutator(&qf, &qf) {
        Ok(c) if c.is_zero() => {}
        Ok(_) => {
            return Verdict::Fail {
                trials: 1,
                counterexample: "  the coordinate differential does not square to zero".into(),
            }
        }
        Err(e) => {
            return Verdict::Fail {
                trials: 1,
                counterexample: format!("  engine error: {e}"),
            }
        }
    }
    randomized(ctx, move |rng| {
        let comp = |rng: &mut ChaCha8Rng| -> Result<Vec<(VarId, Poly)>, String> {
            (0..3)
                .map(|i| {
                    Ok((
                        dx[i],
                        engine(gen::random_poly(rng, &m, 2, 2).lift_to(&tm))?,
                    ))
                })
                .collect()
        };
        let u = engine(Section::new(&tm, Parity::Even, comp(rng)?))?;
        let v = engine(Section::new(&tm, Parity::Even, comp(rng)?))?;
        let f = engine(gen::random_poly(rng, &m, 3, 3).lift_to(&tm))?;
        // The anchor acts as the directional derivative of the components.
        let af = engine(anchor_apply(&qf, &u, &f))?;
        let mut want = Poly::zero(&tm);
        for i in 0..3 {
            if let Some(c) = u.comps.get(&dx[i]) {
                want = engine(want.try_add(&engine(c.try_mul(&f.partial_left(xv[i])))?))?;
            }
        }
        if af != want {
            return Err(format!(
                "  anchor is not the directional derivative\n  f = {f}\n  got = {af}\n  \
                 want = {want}"
            ));
        }
        // The anchor is a bracket morphism onto commutators of derivations.
        let w = engine(section_bracket(&qf, &u, &v))?;
        let lhs = engine(anchor_apply(&qf, &w, &f))?;
        let uvf = engine(anchor_apply(&qf, &u, &engine(anchor_apply(&qf, &v, &f))?))?;
        let vuf = engine(anchor_apply(&qf, &v, &engine(anchor_apply(&qf, &u, &f))?))?;
        let rhs = engine(uvf.try_sub(&vuf))?;
        if lhs != rhs {
            return Err(format!(
                "  anchor does not intertwine the section bracket with the \
                 commutator\n  f = {f}\n  got = {lhs}\n  want = {rhs}"
            ));
        }
        // Leibniz in the second argument over multiplication by a function.
        let mut fv_comps = Vec::new();
        for i in 0..3 {
            if let Some(c) = v.comps.get(&dx[i]) {
                fv_comps.push((dx[i], engine(f.try_mul(c))?));
            }
        }
        let fv = engine(Section::new(&tm, Parity::Even, fv_comps))?;
        let lhs = engine(section_bracket(&qf, &u, &fv))?;
        let auf = engine(anchor_apply(&qf, &u, &f))?;
        for i in 0..3 {
            let zero = Poly::zero(&tm);
            let vi = v.comps.get(&dx[i]).unwrap_or(&zero);
            let wi = w.comps.get(&dx[i]).unwrap_or(&zero);
            let want = engine(
                engine(auf.try_mul(vi))?.try_add(&engine(f.try_mul(wi))?),
            )?;
            let got = lhs.comps.get(&dx[i]).unwrap_or(&zero).clone();
            if got != want {
                return Err(format!(
                    "  Leibniz fails in component {i}\n  f = {f}\n  got = {got}\n  \
                     want = {want}"
                ));
            }
        }
        Ok(())
    })
}

pub fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "higher-swap-symmetry",
            anchor: "adjacent arguments of the higher bracket families exchange with the \
                     raw Koszul sign (odd master) or the parity-shifted sign (even master)",
            tags: &["higher", "symmetry"],
            run: swap_symmetry,
        },
        IdentityCase {
            id: "higher-multiderivation",
            anchor: "higher brackets expand the final argument over coordinates with left \
                     coefficients, which with the swap symmetry is the multiderivation \
                     property in every slot",
            tags: &["higher", "leibniz"],
            run: multiderivation,
        },
        IdentityCase {
            id: "higher-jacobi-odd-master",
            anchor: "the arity-N Jacobi combination of the odd-master family equals the \
                     N-ary bracket generated by half the master's self-commutator",
            tags: &["higher", "jacobi"],
            run: jacobi_odd_master,
        },
        IdentityCase {
            id: "higher-jacobi-even-master",
            anchor: "the arity-N Jacobi combination of the even-master family equals the \
                     N-ary bracket generated by half the master's self-commutator",
            tags: &["higher", "jacobi"],
            run: jacobi_even_master,
        },
        IdentityCase {
            id: "higher-jacobi-vanishing",
            anchor: "self-commuting masters satisfy the higher Jacobi identities up to \
                     arity four",
            tags: &["higher", "jacobi"],
            run: jacobi_vanishing,
        },
        IdentityCase {
            id: "higher-restriction",
            anchor: "the nullary bracket is the master's fiber restriction and the unary \
                     bracket is one canonical bracket followed by that restriction",
            tags: &["higher"],
            run: restriction,
        },
        IdentityCase {
            id: "higher-coefficient-readoff",
            anchor: "frozen coefficient fixtures: brackets of plain coordinates read off \
                     the master's coefficients with their combinatorial multiplicities",
            tags: &["higher", "fixture"],
            run: coefficient_readoff,
        },
        IdentityCase {
            id: "higher-canonical-master-binary",
            anchor: "the canonical quadratic master generates exactly the binary \
                     multivector bracket and nothing in other arities",
            tags: &["higher", "master"],
            run: canonical_master_binary,
        },
        IdentityCase {
            id: "higher-linear-master-unary",
            anchor: "a master linear in the momenta generates exactly the action of its \
                     vector field",
            tags: &["higher", "master"],
            run: linear_master_unary,
        },
        IdentityCase {
            id: "linfty-extract-roundtrip",
            anchor: "structure extraction from a homological-candidate field matches the \
                     Taylor readoff and round-trips through encoding",
            tags: &["linfty"],
            run: extract_roundtrip,
        },
        IdentityCase {
            id: "linfty-generalized-jacobi",
            anchor: "generalized Jacobi residuals vanish for fields squaring to zero and \
                     detect fields that do not",
            tags: &["linfty", "jacobi"],
            run: generalized_jacobi_cases,
        },
        IdentityCase {
            id: "linfty-adjoint",
            anchor: "the adjoint shift of a quadratic field along a generator \
                     displacement is its bilinearization",
            tags: &["linfty"],
            run: adjoint_shift,
        },
        IdentityCase {
            id: "linfty-morphism",
            anchor: "chain-map residuals vanish exactly for pullbacks intertwining the \
                     two fields and localize the failure otherwise",
            tags: &["linfty"],
            run: morphism_cases,
        },
        IdentityCase {
            id: "linfty-anchored-algebra",
            anchor: "the coordinate differential induces the tangent-space anchored \
                     algebra: derivative anchor, commutator bracket, and the Leibniz rule",
            tags: &["linfty", "leibniz"],
            run: anchored_algebra,
        },
    ]
}
