//! Argument shifts of Hamiltonians along even momentum-free generators and
//! the coboundary construction they drive: the flow laws of the shift, the
//! quadratic pencil expansion, the twist of the canonical quadratic master
//! with its anomaly equal to minus half the odd self-bracket, full internal
//! consistency of the coboundary builder, the frozen Lie-algebra fixtures
//! covering all three residual classes, and the input-validation rejections.

use super::{engine, fixtures, randomized};
use crate::gen;
use crate::{Ctx, IdentityCase, Verdict};
use koszul_core::bracket::{odd_master, poisson_with, schouten_with};
use koszul_core::shift::{
    classify, generalized_ybe_residual_with, master_equation_residual, shift_scaled,
};
use koszul_core::{
    build_coboundary, linear_hamiltonian, q, qi, shift, Coeff, Parity, Poly, RMatrixClass,
    Space, SpaceRef, VectorField, WeightReport,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn flow_laws(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let m = gen::base_2_1();
    let t = Space::cotangent(&m).unwrap();
    randomized(ctx, move |rng| {
        let h = gen::random_poly(rng, &t, 3, 3);
        let f = gen::random_poly(rng, &t, 3, 3);
        let g = gen::random_poly(rng, &t, 3, 3);
        let r1 = gen::random_homogeneous(rng, &m, 3, 3, Parity::Even);
        let r2 = gen::random_homogeneous(rng, &m, 3, 3, Parity::Even);
        // The shift is the flow of a complete vector field: additive in the
        // generator, undone by the opposite generator, trivial at zero.
        let twice = engine(shift(&engine(shift(&h, &r1))?, &r2))?;
        let once = engine(shift(&h, &engine(r1.try_add(&r2))?))?;
        if twice != once {
            return Err(format!(
                "  shifts do not compose additively\n  H = {h}\n  r1 = {r1}\n  r2 = {r2}\n  \
                 stepwise = {twice}\n  combined = {once}"
            ));
        }
        let back = engine(shift(&engine(shift(&h, &r1))?, &r1.scale(&qi(-1))))?;
        if back != h {
            return Err(format!(
                "  the opposite generator does not undo the shift\n  H = {h}\n  r1 = {r1}\n  \
                 back = {back}"
            ));
        }
        let still = engine(shift(&h, &Poly::zero(&m)))?;
        if still != h {
            return Err(format!("  the zero generator moves H = {h} to {still}"));
        }
        // The shift preserves the even bracket.
        let lhs = engine(shift(&engine(poisson_with(&f, &g, &conv))?, &r1))?;
        let rhs = engine(poisson_with(
            &engine(shift(&f, &r1))?,
            &engine(shift(&g, &r1))?,
            &conv,
        ))?;
        if lhs != rhs {
            return Err(format!(
                "  the shift is not a bracket automorphism\n  F = {f}\n  G = {g}\n  \
                 r = {r1}\n  shifted bracket = {lhs}\n  bracket of shifts = {rhs}"
            ));
        }
        Ok(())
    })
}

fn pencil_expansion(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let m = gen::base_2_1();
    let tm = Space::cotangent(&m).unwrap();
    let ext = Space::with_parameters(&tm, &[("t", Parity::Even)]).unwrap();
    let tpar = Poly::var_named(&ext, "t").unwrap();
    let momenta: Vec<Poly> = ["p_x1", "p_x2", "p_th"]
        .iter()
        .map(|n| Poly::var_named(&ext, n).unwrap())
        .collect();
    randomized(ctx, move |rng| {
        // A Hamiltonian with momentum-free, momentum-linear, and purely
        // momentum-quadratic parts, each with random momentum-free
        // coefficients.
        let h0 = engine(gen::random_poly(rng, &m, 2, 2).lift_to(&ext))?;
        let mut h1 = Poly::zero(&ext);
        let mut h2 = Poly::zero(&ext);
        for (i, p) in momenta.iter().enumerate() {
            let c = engine(gen::random_poly(rng, &m, 2, 2).lift_to(&ext))?;
            h1 = engine(h1.try_add(&engine(c.try_mul(p))?))?;
            for pj in momenta.iter().skip(i) {
                if rng.gen_bool(0.5) {
                    let c = engine(gen::random_poly(rng, &m, 1, 2).lift_to(&ext))?;
                    h2 = engine(h2.try_add(&engine(engine(c.try_mul(p))?.try_mul(pj))?))?;
                }
            }
        }
        let h = engine(engine(h0.try_add(&h1))?.try_add(&h2))?;
        let r = gen::random_homogeneous(rng, &m, 3, 3, Parity::Even);
        let r_ext = engine(r.lift_to(&ext))?;
        // The flow pencil of an at-most-quadratic Hamiltonian terminates at
        // order two with half the iterated bracket as the top coefficient.
        let pencil = engine(shift_scaled(&h, &r, &tpar))?;
        let linear = engine(poisson_with(&h, &r_ext, &conv))?;
        let iterated = engine(poisson_with(&linear, &r_ext, &conv))?;
        let expect = engine(
            engine(h.try_add(&engine(tpar.try_mul(&linear))?))?
                .try_add(&engine(tpar.pow(2).try_mul(&iterated.scale(&q(1, 2))))?),
        )?;
        if pencil != expect {
            return Err(format!(
                "  the pencil is not quadratic with half the iterated bracket on top\n  \
                 H = {h}\n  r = {r}\n  pencil = {pencil}\n  expected = {expect}"
            ));
        }
        // For the purely quadratic part the top coefficient is exactly the
        // master-equation residual (the value of the Hamiltonian on the
        // graph of the gradient).
        let pencil2 = engine(shift_scaled(&h2, &r, &tpar))?;
        let linear2 = engine(poisson_with(&h2, &r_ext, &conv))?;
        let master2 = engine(master_equation_residual(&h2, &r))?;
        let expect2 = engine(
            engine(h2.try_add(&engine(tpar.try_mul(&linear2))?))?
                .try_add(&engine(tpar.pow(2).try_mul(&master2))?),
        )?;
        if pencil2 != expect2 {
            return Err(format!(
                "  the quadratic pencil top is not the master residual\n  H2 = {h2}\n  \
                 r = {r}\n  pencil = {pencil2}\n  expected = {expect2}"
            ));
        }
        let iterated2 = engine(poisson_with(&linear2, &r_ext, &conv))?;
        if master2.scale(&qi(2)) != iterated2 {
            return Err(format!(
                "  the residual of the quadratic part is not half the iterated bracket\n  \
                 H2 = {h2}\n  r = {r}\n  2 * residual = {}\n  ((H2,r),r) = {iterated2}",
                master2.scale(&qi(2))
            ));
        }
        Ok(())
    })
}

fn derived_twist(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let m = gen::base_2_1();
    let am = Space::anticotangent(&m).unwrap();
    let built = odd_master(&am, &conv);
    let (phase, d) = match built {
        Ok(pair) => pair,
        Err(e) => {
            return Verdict::Fail {
                trials: 1,
                counterexample: format!("  engine error building the canonical master: {e}"),
            }
        }
    };
    randomized(ctx, move |rng| {
        let p = gen::random_homogeneous(rng, &am, 3, 4, Parity::Even);
        let p_hat = engine(p.lift_to(&phase))?;
        // Shifting the canonical quadratic master along an even multivector
        // produces the twisted master plus its anomaly.
        let shifted = engine(shift(&d, &p))?;
        let cobracket = engine(poisson_with(&d, &p_hat, &conv))?;
        let master = engine(master_equation_residual(&d, &p))?;
        let expect = engine(engine(d.try_add(&cobracket))?.try_add(&master))?;
        if shifted != expect {
            return Err(format!(
                "  twist decomposition fails\n  P = {p}\n  shifted = {shifted}\n  \
                 expected = {expect}"
            ));
        }
        // The anomaly is minus half the odd self-bracket of the multivector.
        let sb = engine(schouten_with(&p, &p, &conv))?;
        let half = engine(sb.scale(&q(-1, 2)).lift_to(&phase))?;
        if master != half {
            return Err(format!(
                "  the anomaly is not minus half the self-bracket\n  P = {p}\n  \
                 anomaly = {master}\n  -1/2 self-bracket = {half}"
            ));
        }
        Ok(())
    })
}

/// A random purely quadratic odd field on three odd generators, with the
/// coefficient list also returned for reuse.
fn random_quadratic_field(
    rng: &mut ChaCha8Rng,
    g: &SpaceRef,
    names: &[&str; 3],
) -> VectorField {
    let vars: Vec<_> = names.iter().map(|n| g.var_id(n).unwrap()).collect();
    let mut coeffs = Vec::new();
    for &k in &vars {
        let mut c = Poly::zero(g);
        for i in 0..3 {
            for j in (i + 1)..3 {
                if rng.gen_bool(0.7) {
                    let term = (&Poly::var(g, vars[j]) * &Poly::var(g, vars[i]))
                        .scale(&gen::random_coeff(rng));
                    c = c.try_add(&term).unwrap();
                }
            }
        }
        coeffs.push((k, c));
    }
    VectorField::new(g, Parity::Odd, coeffs).unwrap()
}

fn builder_consistency(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let point = Space::base(&[]).unwrap();
    let g = Space::vector_bundle(
        &point,
        &[("xi1", Parity::Odd), ("xi2", Parity::Odd), ("xi3", Parity::Odd)],
    )
    .unwrap();
    randomized(ctx, move |rng| {
        let q_e = random_quadratic_field(rng, &g, &["xi1", "xi2", "xi3"]);
        let mut r_coeffs: Vec<(usize, usize, Coeff)> = Vec::new();
        for i in 0..3 {
            for j in (i + 1)..3 {
                if rng.gen_bool(0.7) {
                    r_coeffs.push((i, j, gen::random_coeff(rng)));
                }
            }
        }
        let build = engine(build_coboundary(
            &q_e,
            |dual| {
                let eta: Vec<Poly> = (1..=3)
                    .map(|k| Poly::var_named(dual, &format!("eta{k}")))
                    .collect::<koszul_core::Result<_>>()?;
                let mut r = Poly::zero(dual);
                for (i, j, c) in &r_coeffs {
                    r = r.try_add(&(&eta[*j] * &eta[*i]).scale(c))?;
                }
                Ok(r)
            },
            &conv,
        ))?;
        let r_hat = engine(build.r.lift_to(&build.phase))?;
        // Every field of the build satisfies its defining formula.
        let mut problems = Vec::new();
        if build.shifted != engine(shift(&build.h_master, &build.r))? {
            problems.push("shifted Hamiltonian");
        }
        if build.cobracket != engine(poisson_with(&build.h_master, &r_hat, &conv))? {
            problems.push("cobracket Hamiltonian");
        }
        if build.compatibility
            != engine(poisson_with(&build.h_master, &build.cobracket, &conv))?
        {
            problems.push("compatibility residual");
        }
        // The compatibility residual is controlled by the homological one:
        // (H,(H,r)) = (1/2 (H,H), r).
        if build.compatibility
            != engine(poisson_with(&build.homological_residual, &r_hat, &conv))?
        {
            problems.push("compatibility vs homological residual");
        }
        if build.homological_residual
            != engine(poisson_with(&build.h_master, &build.h_master, &conv))?.scale(&q(1, 2))
        {
            problems.push("homological residual");
        }
        let master_on_phase = engine(master_equation_residual(&build.h_master, &r_hat))?;
        if build.master_residual != engine(master_on_phase.lower_to(&build.dual_chart))? {
            problems.push("master residual");
        }
        if build.ybe_residual
            != engine(generalized_ybe_residual_with(&build.h_master, &r_hat, &conv))?
        {
            problems.push("Yang-Baxter residual");
        }
        if build.class != classify(&build.master_residual, &build.ybe_residual) {
            problems.push("classification");
        }
        // Quadratic pencil at unit flow time.
        let unit = engine(
            engine(build.h_master.try_add(&build.cobracket))?.try_add(&master_on_phase),
        )?;
        if build.shifted != unit {
            problems.push("unit-time pencil decomposition");
        }
        // The identification is invertible on the master.
        let back = engine(build.h_master.apply_relabeling(&build.relabeling.inverse()))?;
        let (_, h_primal) = engine(linear_hamiltonian(&q_e))?;
        if back != h_primal {
            problems.push("relabeling round trip");
        }
        // Weight triple, allowing zero ingredients.
        let weight_ok = |rep: &WeightReport, expect: (i32, i32)| -> bool {
            matches!(rep, WeightReport::Zero) || *rep == WeightReport::Homogeneous(expect)
        };
        if !weight_ok(&build.weights.master, (1, 2))
            || !weight_ok(&build.weights.generator, (2, 0))
            || !weight_ok(&build.weights.cobracket, (2, 1))
        {
            problems.push("weight triple");
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(format!(
                "  builder output disagrees with the defining formulas: {}\n  field = {}\n  \
                 r = {}",
                problems.join(", "),
                q_e,
                build.r
            ))
        }
    })
}

fn algebra_fixtures(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let point = Space::base(&[]).unwrap();
    let g = Space::vector_bundle(
        &point,
        &[("xi1", Parity::Odd), ("xi2", Parity::Odd), ("xi3", Parity::Odd)],
    )
    .unwrap();
    let v = |name: &str| Poly::var_named(&g, name).unwrap();
    let id = |name: &str| g.var_id(name).unwrap();
    // Simple algebra: brackets (1,2)->2*2, (1,3)->-2*3, (2,3)->1.
    let q_simple = VectorField::new(
        &g,
        Parity::Odd,
        vec![
            (id("xi1"), &v("xi3") * &v("xi2")),
            (id("xi2"), (&v("xi2") * &v("xi1")).scale(&qi(2))),
            (id("xi3"), (&v("xi3") * &v("xi1")).scale(&qi(-2))),
        ],
    )
    .unwrap();
    // Solvable algebra with a central third generator: (1,2)->2.
    let q_solv = VectorField::new(
        &g,
        Parity::Odd,
        vec![(id("xi2"), &v("xi2") * &v("xi1"))],
    )
    .unwrap();
    // Diagonal non-unimodular action: (1,2)->2, (1,3)->-2*3.
    let q_diag = VectorField::new(
        &g,
        Parity::Odd,
        vec![
            (id("xi2"), &v("xi2") * &v("xi1")),
            (id("xi3"), (&v("xi3") * &v("xi1")).scale(&qi(-2))),
        ],
    )
    .unwrap();
    let pair = |a: &'static str, b: &'static str| {
        move |dual: &SpaceRef| -> koszul_core::Result<Poly> {
            Ok(&Poly::var_named(dual, a)? * &Poly::var_named(dual, b)?)
        }
    };
    let top = |dual: &SpaceRef| -> Poly {
        &(&Poly::var_named(dual, "eta1").unwrap() * &Poly::var_named(dual, "eta2").unwrap())
            * &Poly::var_named(dual, "eta3").unwrap()
    };
    let mut checks: Vec<(&'static str, Result<(), String>)> = Vec::new();

    // Invariant-anomaly element on the simple algebra.
    let res = (|| -> Result<(), String> {
        let b = engine(build_coboundary(&q_simple, pair("eta2", "eta3"), &conv))?;
        if !b.homological_residual.is_zero() {
            return Err("the input field is not homological".into());
        }
        if b.class != RMatrixClass::QuasiTriangular {
            return Err(format!("class {} instead of quasi-triangular", b.class));
        }
        if b.master_residual != top(&b.dual_chart).scale(&qi(-1)) {
            return Err(format!(
                "anomaly {} is not minus the top element",
                b.master_residual
            ));
        }
        if !b.ybe_residual.is_zero() {
            return Err(format!("nonzero invariance residual {}", b.ybe_residual));
        }
        if !b.compatibility.is_zero() {
            return Err("the two structures are not compatible".into());
        }
        // The first generator stays primitive; the other two do not.
        let pi1 = engine(b.phase.var_id("pi_eta1"))?;
        let pi2 = engine(b.phase.var_id("pi_eta2"))?;
        if !b.cobracket.partial_left(pi1).is_zero() {
            return Err("the diagonal generator acquires a cobracket".into());
        }
        if b.cobracket.partial_left(pi2).is_zero() {
            return Err("the raising generator keeps a zero cobracket".into());
        }
        Ok(())
    })();
    checks.push(("simple algebra with the skew Casimir pair", res));

    // Borel-type element on the simple algebra: flat shift, nonzero
    // cobracket on the diagonal generator.
    let res = (|| -> Result<(), String> {
        let b = engine(build_coboundary(&q_simple, pair("eta1", "eta2"), &conv))?;
        if b.class != RMatrixClass::Triangular {
            return Err(format!("class {} instead of triangular", b.class));
        }
        if !b.master_residual.is_zero() || !b.ybe_residual.is_zero() {
            return Err("triangular element leaves residuals".into());
        }
        let pi1 = engine(b.phase.var_id("pi_eta1"))?;
        let eta1 = Poly::var_named(&b.phase, "eta1").map_err(|e| e.to_string())?;
        let eta2 = Poly::var_named(&b.phase, "eta2").map_err(|e| e.to_string())?;
        let expect = (&eta1 * &eta2).scale(&qi(2));
        if b.cobracket.partial_left(pi1) != expect {
            return Err(format!(
                "diagonal cobracket is {}, want {expect}",
                b.cobracket.partial_left(pi1)
            ));
        }
        Ok(())
    })();
    checks.push(("simple algebra with the Borel pair", res));

    // Solvable algebra: triangular with the central generator pairing.
    let res = (|| -> Result<(), String> {
        let b = engine(build_coboundary(&q_solv, pair("eta2", "eta3"), &conv))?;
        if !b.homological_residual.is_zero() {
            return Err("the input field is not homological".into());
        }
        if b.class != RMatrixClass::Triangular {
            return Err(format!("class {} instead of triangular", b.class));
        }
        let pi1 = engine(b.phase.var_id("pi_eta1"))?;
        let eta2 = Poly::var_named(&b.phase, "eta2").map_err(|e| e.to_string())?;
        let eta3 = Poly::var_named(&b.phase, "eta3").map_err(|e| e.to_string())?;
        if b.cobracket.partial_left(pi1) != &eta2 * &eta3 {
            return Err(format!(
                "cobracket of the acting generator is {}",
                b.cobracket.partial_left(pi1)
            ));
        }
        Ok(())
    })();
    checks.push(("solvable algebra with a central pairing", res));

    // Non-unimodular diagonal algebra: curved element.
    let res = (|| -> Result<(), String> {
        let b = engine(build_coboundary(
            &q_diag,
            |dual| {
                let e1 = Poly::var_named(dual, "eta1")?;
                let e2 = Poly::var_named(dual, "eta2")?;
                let e3 = Poly::var_named(dual, "eta3")?;
                Ok(&(&e1 * &e2) + &(&e1 * &e3))
            },
            &conv,
        ))?;
        if !b.homological_residual.is_zero() {
            return Err("the input field is not homological".into());
        }
        if b.class != RMatrixClass::Curved {
            return Err(format!("class {} instead of curved", b.class));
        }
        if b.master_residual != top(&b.dual_chart).scale(&qi(3)) {
            return Err(format!(
                "anomaly {} is not three times the top element",
                b.master_residual
            ));
        }
        if b.ybe_residual.is_zero() {
            return Err("curved element has an invariant anomaly".into());
        }
        Ok(())
    })();
    checks.push(("non-unimodular diagonal algebra with a curved element", res));

    // Weight triple on a fixture with all three ingredients nonzero.
    let res = (|| -> Result<(), String> {
        let b = engine(build_coboundary(&q_simple, pair("eta2", "eta3"), &conv))?;
        if b.weights.master != WeightReport::Homogeneous((1, 2))
            || b.weights.generator != WeightReport::Homogeneous((2, 0))
            || b.weights.cobracket != WeightReport::Homogeneous((2, 1))
        {
            return Err(format!(
                "weight triple ({:?}, {:?}, {:?})",
                b.weights.master, b.weights.generator, b.weights.cobracket
            ));
        }
        Ok(())
    })();
    checks.push(("bigrading of the Hamiltonian triple", res));

    let _ = ctx;
    fixtures(checks)
}

fn rejections(ctx: &Ctx) -> Verdict {
    let conv = ctx.conv;
    let m = gen::base_2_1();
    let t = Space::cotangent(&m).unwrap();
    let am = Space::anticotangent(&m).unwrap();
    let h = Poly::var_named(&t, "p_x1").unwrap().pow(2);
    let mut checks: Vec<(&'static str, Result<(), String>)> = Vec::new();
    let expect_err = |label: &'static str, r: koszul_core::Result<Poly>| {
        (
            label,
            match r {
                Err(_) => Ok(()),
                Ok(p) => Err(format!("accepted, producing {p}")),
            },
        )
    };
    checks.push(expect_err(
        "odd generators are rejected",
        shift(&h, &Poly::var_named(&m, "th").unwrap()),
    ));
    checks.push(expect_err(
        "momentum-dependent generators are rejected",
        shift(&h, &Poly::var_named(&t, "p_x1").unwrap()),
    ));
    checks.push(expect_err(
        "charts without even pairs are rejected",
        shift(
            &Poly::var_named(&am, "st_x1").unwrap(),
            &Poly::var_named(&m, "x1").unwrap(),
        ),
    ));
    let point = Space::base(&[]).unwrap();
    let g = Space::vector_bundle(&point, &[("xi1", Parity::Odd)]).unwrap();
    let q_e = VectorField::zero(&g, Parity::Odd);
    let stray = Poly::var_named(&m, "x1").unwrap();
    let build = build_coboundary(&q_e, move |_| Ok(stray), &conv);
    checks.push((
        "r-elements on a foreign chart are rejected",
        match build {
            Err(_) => Ok(()),
            Ok(_) => Err("accepted a generator from an unrelated chart".into()),
        },
    ));
    let _ = ctx;
    fixtures(checks)
}

pub fn cases() -> Vec<IdentityCase> {
    vec![
        IdentityCase {
            id: "shift-flow",
            anchor: "argument shifts compose additively, invert by the opposite generator, \
                     fix everything at zero, and preserve the even bracket",
            tags: &["shift"],
            run: flow_laws,
        },
        IdentityCase {
            id: "shift-pencil",
            anchor: "flow pencils of at-most-quadratic Hamiltonians are quadratic in the \
                     parameter, topped by half the iterated bracket, and by the \
                     master-equation residual for the purely quadratic part",
            tags: &["shift"],
            run: pencil_expansion,
        },
        IdentityCase {
            id: "shift-derived-twist",
            anchor: "shifting the canonical quadratic master along a multivector gives the \
                     twisted master whose anomaly is minus half the odd self-bracket",
            tags: &["shift", "bracket"],
            run: derived_twist,
        },
        IdentityCase {
            id: "coboundary-consistency",
            anchor: "every field of the coboundary build satisfies its defining formula, \
                     including the pencil decomposition and the compatibility control by \
                     the homological residual",
            tags: &["coboundary"],
            run: builder_consistency,
        },
        IdentityCase {
            id: "coboundary-fixtures",
            anchor: "frozen three-dimensional Lie algebra fixtures realize the triangular, \
                     quasi-triangular, and curved classes with the expected cobrackets, \
                     anomalies, and weight triple",
            tags: &["coboundary", "fixture"],
            run: algebra_fixtures,
        },
        IdentityCase {
            id: "shift-rejections",
            anchor: "the shift and the coboundary builder reject odd generators, \
                     momentum-dependent generators, charts without even pairs, and \
                     r-elements on foreign charts",
            tags: &["shift", "coboundary", "fixture"],
            run: rejections,
        },
    ]
}
