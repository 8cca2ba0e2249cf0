//! The fiber/momentum exchange between double phase charts: bracket
//! preservation in both the even and odd versions, the involution property
//! with its fiber-sector sign, the weight bookkeeping, and the structural
//! identification carrying the momentum-linear de Rham generator to the
//! canonical quadratic master.

use std::collections::BTreeMap;

use super::{engine, fixtures, randomized, shrunk_failure};
use crate::gen;
use crate::{Ctx, IdentityCase, Verdict};
use koszul_core::bracket::{odd_master, poisson_with, schouten_with};
use koszul_core::{
    de_rham_with, linear_hamiltonian, qi, Poly, Role, Space, SpaceRef, VarId,
};
use rand::Rng;

/// The three even-exchange source charts: the cotangent of a mixed-parity
/// bundle, of a differential chart, and of an antimomentum chart.
fn even_charts() -> Vec<SpaceRef> {
    let m = gen::base_2_1();
    let e = Space::vector_bundle(&m, &[("xi1", koszul_core::Parity::Odd), ("u1", koszul_core::Parity::Even)]).unwrap();
    vec![
        Space::cotangent(&e).unwrap(),
        Space::cotangent(&Space::antitangent(&m).unwrap()).unwrap(),
        Space::cotangent(&Space::anticotangent(&m).unwrap()).unwrap(),
    ]
}

fn odd_chart() -> SpaceRef {
    let m = gen::base_2_1();
    let e = Space::vector_bundle(&m, &[("xi1", koszul_core::Parity::Odd), ("u1", koszul_core::Parity::Even)]).unwrap();
    Space::anticotangent(&e).unwrap()
}

/// The exchanged fiber sector of an even-exchange source chart: the
/// weight-(1,0) coordinates over the base and their momenta, keyed by the
/// coordinate carrying the parity that decides the exchange sign.
fn fiber_of(t: &SpaceRef, v: VarId) -> Option<VarId> {
    match t.var(v).role {
        Role::Fiber | Role::Differential(_) | Role::Antimomentum(_) => Some(v),
        Role::Momentum(of) => match t.var(of).role {
            Role::Fiber | Role::Differential(_) | Role::Antimomentum(_) => Some(of),
            _ => None,
        },
        _ => None,
    }
}

fn even_bracket_preservation(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let charts = even_charts();
    let rels: Result<Vec<_>, _> = charts
        .iter()
        .map(|t| Space::mx_transform_with(t, &conv))
        .collect();
    let rels = match rels {
        Ok(r) => r,
        Err(e) => {
            return Verdict::Fail {
                trials: 1,
                counterexample: format!("  engine error building the exchange: {e}"),
            }
        }
    };
    randomized(ctx, move |rng| {
        let k = rng.gen_range(0..rels.len());
        let t = &charts[k];
        let r = &rels[k];
        let f = gen::random_poly(rng, t, 3, 3);
        let g = gen::random_poly(rng, t, 3, 3);
        // Transporting the even bracket equals the even bracket of the
        // transports: the exchange is a symplectomorphism.
        let law = |ps: &[Poly]| -> Option<bool> {
            let lhs = poisson_with(&ps[0], &ps[1], &conv)
                .ok()?
                .apply_relabeling(r)
                .ok()?;
            let rhs = poisson_with(
                &ps[0].apply_relabeling(r).ok()?,
                &ps[1].apply_relabeling(r).ok()?,
                &conv,
            )
            .ok()?;
            Some(lhs != rhs)
        };
        shrunk_failure(&["F", "G"], vec![f, g], |ps| law(ps).unwrap_or(false))
    })
}

fn odd_bracket_preservation(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let t = odd_chart();
    let r = match Space::mx_transform_with(&t, &conv) {
        Ok(r) => r,
        Err(e) => {
            return Verdict::Fail {
                trials: 1,
                counterexample: format!("  engine error building the exchange: {e}"),
            }
        }
    };
    randomized(ctx, move |rng| {
        let f = gen::random_poly(rng, &t, 3, 3);
        let g = gen::random_poly(rng, &t, 3, 3);
        // The odd exchange preserves the odd bracket.
        let law = |ps: &[Poly]| -> Option<bool> {
            let lhs = schouten_with(&ps[0], &ps[1], &conv)
                .ok()?
                .apply_relabeling(&r)
                .ok()?;
            let rhs = schouten_with(
                &ps[0].apply_relabeling(&r).ok()?,
                &ps[1].apply_relabeling(&r).ok()?,
                &conv,
            )
            .ok()?;
            Some(lhs != rhs)
        };
        shrunk_failure(&["F", "G"], vec![f, g], |ps| law(ps).unwrap_or(false))
    })
}

fn involution(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let mut setups: Vec<(SpaceRef, bool)> =
        even_charts().into_iter().map(|t| (t, true)).collect();
    setups.push((odd_chart(), false));
    // Structural gate: applying the exchange twice returns the original
    // chart exactly.
    for (t, _) in &setups {
        let r1 = match Space::mx_transform_with(t, &conv) {
            Ok(r) => r,
            Err(e) => {
                return Verdict::Fail {
                    trials: 1,
                    counterexample: format!("  engine error building the exchange: {e}"),
                }
            }
        };
        let r2 = match Space::mx_transform_with(&r1.dst, &conv) {
            Ok(r) => r,
            Err(e) => {
                return Verdict::Fail {
                    trials: 1,
                    counterexample: format!("  engine error on the second exchange: {e}"),
                }
            }
        };
        if **t != *r2.dst {
            return Verdict::Fail {
                trials: 1,
                counterexample: format!(
                    "  double exchange does not return the original chart\n  start:\n{}\n  \
                     end:\n{}",
                    t.describe(),
                    r2.dst.describe()
                ),
            };
        }
    }
    randomized(ctx, move |rng| {
        let (t, even) = &setups[rng.gen_range(0..setups.len())];
        let r1 = engine(Space::mx_transform_with(t, &conv))?;
        let r2 = engine(Space::mx_transform_with(&r1.dst, &conv))?;
        let f = gen::random_poly(rng, t, 3, 3);
        let back = engine(engine(f.apply_relabeling(&r1))?.apply_relabeling(&r2))?;
        // Even version: the double transport multiplies each fiber-sector
        // variable by the opposite of the coordinate's parity sign; odd
        // version: the double transport is the identity.
        let expected = if *even {
            let mut images = BTreeMap::new();
            for v in t.var_ids() {
                if let Some(c) = fiber_of(t, v) {
                    let s = if t.var(c).parity.is_odd() { 1 } else { -1 };
                    images.insert(v, Poly::var(t, v).scale(&qi(s)));
                }
            }
            engine(f.substitute(&images))?
        } else {
            f.clone()
        };
        if back != expected {
            return Err(format!(
                "  double transport disagrees with the fiber-sector sign\n  F = {f}\n  \
                 transported = {back}\n  expected = {expected}"
            ));
        }
        Ok(())
    })
}

fn weight_bookkeeping(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let mut checks: Vec<(&'static str, Result<(), String>)> = Vec::new();
    let labels = [
        "cotangent of a bundle",
        "cotangent of a differential chart",
        "cotangent of an antimomentum chart",
    ];
    for (t, label) in even_charts().into_iter().zip(labels) {
        let res = (|| -> Result<(), String> {
            let r = engine(Space::mx_transform_with(&t, &conv))?;
            for v in t.var_ids() {
                let (_, w) = r.images[v.idx()];
                let src = t.var(v);
                let dst = r.dst.var(w);
                if src.parity != dst.parity {
                    return Err(format!("image of {} changes parity", src.name));
                }
                let (a, b) = src.weight;
                if dst.weight != (b, a) {
                    return Err(format!(
                        "image of {} has weight ({},{}), want the swap of ({a},{b})",
                        src.name, dst.weight.0, dst.weight.1
                    ));
                }
            }
            Ok(())
        })();
        checks.push((label, res));
    }
    let odd_res = (|| -> Result<(), String> {
        let t = odd_chart();
        let r = engine(Space::mx_transform_with(&t, &conv))?;
        for v in t.var_ids() {
            let (_, w) = r.images[v.idx()];
            let src = t.var(v);
            let dst = r.dst.var(w);
            if src.parity != dst.parity {
                return Err(format!("image of {} changes parity", src.name));
            }
            if src.weight != dst.weight {
                return Err(format!(
                    "image of {} has weight ({},{}), want ({},{})",
                    src.name, dst.weight.0, dst.weight.1, src.weight.0, src.weight.1
                ));
            }
        }
        Ok(())
    })();
    checks.push(("anticotangent of a bundle", odd_res));
    let _ = ctx;
    fixtures(checks)
}

fn canonical_master_identification(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let run = || -> Result<(), String> {
        let m = gen::base_2_1();
        let ptm = engine(Space::antitangent(&m))?;
        let qd = engine(de_rham_with(&ptm, &conv))?;
        let (t, d2) = engine(linear_hamiltonian(&qd))?;
        let r = engine(Space::mx_transform_with(&t, &conv))?;
        let pt = engine(Space::anticotangent(&m))?;
        let (_, d1) = engine(odd_master(&pt, &conv))?;
        // The exchange carries the momentum-linear generator of the
        // coordinate differential to the canonical quadratic master of the
        // odd bracket, and back.
        let image = engine(d2.apply_relabeling(&r))?;
        if image != d1 {
            return Err(format!(
                "forward identification fails: got {image}, want {d1}"
            ));
        }
        let back = engine(d1.apply_relabeling(&r.inverse()))?;
        if back != d2 {
            return Err(format!("inverse identification fails: got {back}, want {d2}"));
        }
        Ok(())
    };
    let _ = ctx;
    fixtures(vec![("de Rham generator maps to the odd-bracket master", run())])
}

pub fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "mx-even-bracket",
            anchor: "the even fiber/momentum exchange preserves the canonical even bracket \
                     on all three double-phase chart types",
            tags: &["mx", "bracket"],
            run: even_bracket_preservation,
        },
        IdentityCase {
            id: "mx-odd-bracket",
            anchor: "the odd fiber/momentum exchange preserves the canonical odd bracket",
            tags: &["mx", "bracket"],
            run: odd_bracket_preservation,
        },
        IdentityCase {
            id: "mx-involution",
            anchor: "the exchange applied twice returns the original chart, acting on \
                     functions by the fiber-sector parity sign (even) or the identity (odd)",
            tags: &["mx"],
            run: involution,
        },
        IdentityCase {
            id: "mx-weights",
            anchor: "the even exchange swaps the two weight components of every variable \
                     and the odd exchange preserves them; parities are preserved",
            tags: &["mx", "fixture"],
            run: weight_bookkeeping,
        },
        IdentityCase {
            id: "mx-canonical-master",
            anchor: "the exchange identifies the momentum-linear generator of the \
                     coordinate differential with the canonical quadratic master",
            tags: &["mx", "fixture"],
            run: canonical_master_identification,
        },
    ]
}
