//! The odd anchor map from multivectors to fiberwise-linear Hamiltonians on
//! the cotangent of the differential chart, higher Koszul brackets on forms,
//! the twisted differential on multivectors, and the raising-indices map.
//!
//! Conventions (all verified against the derived-bracket route by the test
//! and conformance suites):
//!
//! * the anchor `alpha` sends `P` on the antimomentum chart of `M` to
//!   `(D2, mu(P))` on the cotangent of the differential chart of `M`, where
//!   `D2 = sum_a dx^a p_a` is the Hamiltonian lift of the de Rham field and
//!   `mu` is the algebra morphism fixing base coordinates and sending
//!   `st_a -> (-1)^{a~} pi_a` (the momentum of `dx^a`);
//! * equivalently (the "display" route, valid for every parity of `P`):
//!   `alpha(P) = sum_a [ dx^a * mu(dP/dx^a) + p_a * mu(dP/dst_a) ]`;
//! * `alpha` intertwines brackets: `alpha(s(P,Q)) = (-1)^{P~+1}
//!   (alpha(P), alpha(Q))` for the symmetric derived bracket `s`, i.e.
//!   `alpha([[P,Q]]) = (alpha(P), alpha(Q))` for the antisymmetric odd
//!   bracket;
//! * the higher form brackets are raw derived brackets of the anchor image:
//!   `[w1,...,wn]_P = (...(alpha(P), w1), ..., wn)` restricted to the zero
//!   momentum section;
//! * the twisted differential is `d_P = [[P, -]]`; for an even quadratic
//!   `P = 1/2 P^{ab} st_b st_a` on an even base it acts as
//!   `P^{ab} st_b d/dx^a - 1/2 dP^{bc}/dx^a st_c st_b d/dst_a`;
//! * raising indices is the algebra morphism from forms to multivectors
//!   fixing base coordinates and sending `dx^a -> [[P, x^a]]`; it intertwines
//!   the de Rham differential with `d_P`.

use std::collections::BTreeMap;

use crate::bracket::{poisson_with, schouten_with};
use crate::conventions::SignConventions;
use crate::error::{Error, Result};
use crate::field::{de_rham_with, linear_hamiltonian};
use crate::poly::Poly;
use crate::space::{Provenance, Role, Space, SpaceRef};

/// The charts involved in the anchor map for one base chart: the antimomentum
/// chart (source of multivectors), the differential chart (home of forms) and
/// its cotangent (home of anchor images).
#[derive(Debug, Clone)]
pub struct AnchorCharts {
    pub base: SpaceRef,
    pub multivectors: SpaceRef,
    pub forms: SpaceRef,
    pub phase: SpaceRef,
}

/// Resolves the charts for a multivector argument, which must live on the
/// antimomentum chart of some base.
pub fn anchor_charts(multivectors: &SpaceRef) -> Result<AnchorCharts> {
    let base = match multivectors.provenance() {
        Provenance::Anticotangent(m) => m.clone(),
        _ => {
            return Err(Error::WrongProvenance(
                "multivectors must live on the antimomentum chart of a base".into(),
            ))
        }
    };
    let forms = Space::antitangent(&base)?;
    let phase = Space::cotangent(&forms)?;
    Ok(AnchorCharts {
        base,
        multivectors: multivectors.clone(),
        forms,
        phase,
    })
}

/// The scaling morphism `mu`: base coordinates map to themselves, the
/// antimomentum `st_a` maps to `(-1)^{a~}` times the momentum of `dx^a`.
fn mu_images(charts: &AnchorCharts) -> Result<BTreeMap<crate::space::VarId, Poly>> {
    let mv = &charts.multivectors;
    let phase = &charts.phase;
    let mut images = BTreeMap::new();
    for v in mv.var_ids() {
        let var = mv.var(v);
        match var.role {
            Role::Antimomentum(of) => {
                let base_name = &mv.var(of).name;
                let dx = charts.forms.var_id(&format!("d{base_name}"))?;
                let pi = phase
                    .momentum_of(phase.var_id(&charts.forms.var(dx).name)?)
                    .ok_or_else(|| Error::internal("phase chart lost a momentum"))?;
                let mut img = Poly::var(phase, pi);
                if mv.var(of).parity.is_odd() {
                    img = -img;
                }
                images.insert(v, img);
            }
            _ => {
                images.insert(v, Poly::var_named(phase, &var.name)?);
            }
        }
    }
    Ok(images)
}

/// The anchor image of a multivector via the derived route
/// `alpha(P) = (D2, mu(P))`.
pub fn alpha(p: &Poly) -> Result<Poly> {
    alpha_with(p, &SignConventions::default())
}

pub fn alpha_with(p: &Poly, conv: &SignConventions) -> Result<Poly> {
    let charts = anchor_charts(p.space())?;
    let d2 = de_rham_master(&charts, conv)?;
    let mu = mu_images(&charts)?;
    let p_img = p.morphism_to(&charts.phase, &mu)?;
    poisson_with(&d2, &p_img, conv)
}

/// The anchor image via the coefficient display
/// `sum_a [ dx^a mu(dP/dx^a) + p_a mu(dP/dst_a) ]`; equal to [`alpha`] for
/// every parity of `P`.
pub fn alpha_display(p: &Poly) -> Result<Poly> {
    alpha_display_with(p, &SignConventions::default())
}

pub fn alpha_display_with(p: &Poly, conv: &SignConventions) -> Result<Poly> {
    let charts = anchor_charts(p.space())?;
    let mv = &charts.multivectors;
    let phase = &charts.phase;
    let mu = mu_images(&charts)?;
    let mut out = Poly::zero(phase);
    let master_sign = crate::scalar::Coeff::from_integer(i64::from(conv.master_sign()).into());
    for v in mv.var_ids() {
        match mv.var(v).role {
            Role::Antimomentum(of) => {
                // p_a * mu(dP/dst_a).
                let base_name = &mv.var(of).name;
                let p_mom = phase
                    .momentum_of(phase.var_id(base_name)?)
                    .ok_or_else(|| Error::internal("phase chart lost a base momentum"))?;
                let d = p.partial_with(v, conv).morphism_to(phase, &mu)?;
                out = out.try_add(&Poly::var(phase, p_mom).try_mul(&d)?)?;
            }
            Role::Base => {
                // dx^a * mu(dP/dx^a).
                let dx = phase.var_id(&format!("d{}", mv.var(v).name))?;
                let d = p.partial_with(v, conv).morphism_to(phase, &mu)?;
                out = out.try_add(&Poly::var(phase, dx).try_mul(&d)?)?;
            }
            _ => {}
        }
    }
    Ok(out.scale(&master_sign))
}

/// `D2`: the Hamiltonian lift of the de Rham field onto the phase chart.
fn de_rham_master(charts: &AnchorCharts, conv: &SignConventions) -> Result<Poly> {
    let d = de_rham_with(&charts.forms, conv)?;
    let (t, h) = linear_hamiltonian(&d)?;
    if *t != *charts.phase {
        return Err(Error::internal(
            "phase chart mismatch while lifting the de Rham field",
        ));
    }
    h.lift_to(&charts.phase).or(Ok(h))
}

/// The higher form bracket generated by a multivector `P`:
/// `[w1,...,wn]_P = (...(alpha(P), w1), ..., wn)` restricted to zero momenta,
/// returned on the form chart. The `w_i` must live on the differential chart
/// of the same base as `P`.
pub fn higher_koszul(p: &Poly, forms: &[&Poly]) -> Result<Poly> {
    higher_koszul_with(p, forms, &SignConventions::default())
}

pub fn higher_koszul_with(p: &Poly, forms: &[&Poly], conv: &SignConventions) -> Result<Poly> {
    let charts = anchor_charts(p.space())?;
    let mut acc = alpha_with(p, conv)?;
    for w in forms {
        if !crate::poly::same_space(w.space(), &charts.forms) {
            return Err(Error::ChartMismatch(format!(
                "form argument lives on {}, expected {}",
                w.space(),
                charts.forms
            )));
        }
        acc = poisson_with(&acc, &w.lift_to(&charts.phase)?, conv)?;
        if acc.is_zero() {
            break;
        }
    }
    acc.set_zero(&charts.phase.momenta()).lower_to(&charts.forms)
}

/// The differential on multivectors twisted by an even multivector:
/// `d_P(w) = [[P, w]]`.
pub fn lichnerowicz(p: &Poly, w: &Poly) -> Result<Poly> {
    lichnerowicz_with(p, w, &SignConventions::default())
}

pub fn lichnerowicz_with(p: &Poly, w: &Poly, conv: &SignConventions) -> Result<Poly> {
    schouten_with(p, w, conv)
}

/// The raising-indices morphism generated by an even multivector `P`: the
/// algebra morphism from the form chart to the multivector chart fixing base
/// coordinates and sending `dx^a -> [[P, x^a]]`. Returns the image of `w`.
pub fn raise_indices(p: &Poly, w: &Poly) -> Result<Poly> {
    raise_indices_with(p, w, &SignConventions::default())
}

pub fn raise_indices_with(p: &Poly, w: &Poly, conv: &SignConventions) -> Result<Poly> {
    let charts = anchor_charts(p.space())?;
    if !crate::poly::same_space(w.space(), &charts.forms) {
        return Err(Error::ChartMismatch(format!(
            "form argument lives on {}, expected {}",
            w.space(),
            charts.forms
        )));
    }
    match p.parity_report() {
        crate::poly::ParityReport::Zero | crate::poly::ParityReport::Homogeneous(crate::parity::Parity::Even) => {}
        _ => {
            return Err(Error::ParityMismatch {
                context: "raising indices",
                expected: crate::parity::Parity::Even,
                found: "the generating multivector must be even".into(),
            })
        }
    }
    let mv = &charts.multivectors;
    let mut images = BTreeMap::new();
    for v in charts.forms.var_ids() {
        let var = charts.forms.var(v);
        match var.role {
            Role::Differential(of) => {
                let x = Poly::var_named(mv, &charts.forms.var(of).name)?;
                images.insert(v, schouten_with(p, &x, conv)?);
            }
            _ => {
                images.insert(v, Poly::var_named(mv, &var.name)?);
            }
        }
    }
    w.morphism_to(mv, &images)
}

/// The derived unary operation of the higher form brackets applied to a base
/// function: `[f]_P = sum_a (dP/dst_a)|_{st=0} * df/dx^a`, the closed form the
/// route definition must reproduce. Exposed for cross-checks.
pub fn unary_koszul_closed_form(p: &Poly, f: &Poly) -> Result<Poly> {
    let charts = anchor_charts(p.space())?;
    if !crate::poly::same_space(f.space(), &charts.forms) {
        return Err(Error::ChartMismatch(format!(
            "argument lives on {}, expected {}",
            f.space(),
            charts.forms
        )));
    }
    let mv = &charts.multivectors;
    let anti: Vec<_> = mv
        .var_ids()
        .filter(|&v| matches!(mv.var(v).role, Role::Antimomentum(_)))
        .collect();
    // Images of base coordinates on the form chart for transporting the
    // truncated coefficients.
    let mut base_images = BTreeMap::new();
    for v in mv.var_ids() {
        if let Role::Antimomentum(_) = mv.var(v).role {
            continue;
        }
        base_images.insert(v, Poly::var_named(&charts.forms, &mv.var(v).name)?);
    }
    let mut out = Poly::zero(&charts.forms);
    for v in &anti {
        let of = match mv.var(*v).role {
            Role::Antimomentum(of) => of,
            _ => unreachable!(),
        };
        let coeff = p.partial_left(*v).set_zero(&anti);
        let coeff = coeff.morphism_to(&charts.forms, &base_images)?;
        let x_form = charts.forms.var_id(&mv.var(of).name)?;
        out = out.try_add(&coeff.try_mul(&f.partial_left(x_form))?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parity::Parity;
    use crate::scalar::{q, qi};

    /// One even coordinate: alpha of a vector multivector, hand expansion
    /// alpha(X st_x) = X p_x + dX/dx dx pi_x.
    #[test]
    fn alpha_of_a_vector_multivector() {
        let m = Space::base(&[("x", Parity::Even)]).unwrap();
        let mv = Space::anticotangent(&m).unwrap();
        // P = x^2 st_x: the multivector of the field x^2 d/dx.
        let x = Poly::var_named(&mv, "x").unwrap();
        let st = Poly::var_named(&mv, "st_x").unwrap();
        let p = &x.pow(2) * &st;
        let a = alpha(&p).unwrap();
        // Expected: x^2 p_x + 2x dx pi_x on the phase chart.
        let phase = a.space().clone();
        let g = |n: &str| Poly::var_named(&phase, n).unwrap();
        let expect = &(&g("x").pow(2) * &g("p_x"))
            + &(&g("x") * &(&g("dx") * &g("pi_x"))).scale(&qi(2));
        assert_eq!(a, expect);
        // Display route agrees.
        assert_eq!(alpha_display(&p).unwrap(), a);
    }

    /// Hand-verified super instance: P = th st_x on base (x even, th odd)
    /// maps to dth pi_x - th p_x.
    #[test]
    fn alpha_super_instance() {
        let m = Space::base(&[("x", Parity::Even), ("th", Parity::Odd)]).unwrap();
        let mv = Space::anticotangent(&m).unwrap();
        let th = Poly::var_named(&mv, "th").unwrap();
        let st_x = Poly::var_named(&mv, "st_x").unwrap();
        let p = &th * &st_x; // even multivector
        let a = alpha(&p).unwrap();
        let phase = a.space().clone();
        let g = |n: &str| Poly::var_named(&phase, n).unwrap();
        let expect = &(&g("dth") * &g("pi_x")) - &(&g("th") * &g("p_x"));
        assert_eq!(a, expect);
        assert_eq!(alpha_display(&p).unwrap(), a);
    }

    /// The intertwining law on a hand-verified instance pair.
    #[test]
    fn alpha_intertwines_brackets() {
        let m = Space::base(&[("x", Parity::Even), ("th", Parity::Odd)]).unwrap();
        let mv = Space::anticotangent(&m).unwrap();
        let g = |n: &str| Poly::var_named(&mv, n).unwrap();
        let cases: Vec<(Poly, Poly)> = vec![
            (g("x").pow(2), g("st_x")),
            (&g("th") * &g("st_x"), &g("th") * &g("st_th")),
            (&g("x") * &g("st_x"), &g("x") * &g("th")),
            (&g("st_x") * &g("st_th"), &g("x") * &g("st_x")),
        ];
        let conv = SignConventions::default();
        for (p, qq) in cases {
            let lhs = alpha(&crate::bracket::schouten(&p, &qq).unwrap()).unwrap();
            let rhs = poisson_with(&alpha(&p).unwrap(), &alpha(&qq).unwrap(), &conv).unwrap();
            assert_eq!(lhs, rhs, "failed for P = {p}, Q = {qq}");
        }
    }

    /// Classical limits of the binary form bracket for a constant structure.
    #[test]
    fn classical_form_brackets() {
        // Two even coordinates, P = c st_2 st_1 encodes P^{12} = c (so that
        // the bivector is 1/2 P^{ab} st_b st_a with P antisymmetric).
        let m = Space::base(&[("x1", Parity::Even), ("x2", Parity::Even)]).unwrap();
        let mv = Space::anticotangent(&m).unwrap();
        let forms = Space::antitangent(&m).unwrap();
        let st1 = Poly::var_named(&mv, "st_x1").unwrap();
        let st2 = Poly::var_named(&mv, "st_x2").unwrap();
        let c = q(3, 1);
        let p = (&st2 * &st1).scale(&c); // P^{12} = 3
        let f = |n: &str| Poly::var_named(&forms, n).unwrap();
        // [x^a, x^b]_P = 0.
        assert!(higher_koszul(&p, &[&f("x1"), &f("x2")]).unwrap().is_zero());
        // [x^1, dx^2]_P = -P^{12} = -3.
        assert_eq!(
            higher_koszul(&p, &[&f("x1"), &f("dx2")]).unwrap(),
            Poly::constant(&forms, qi(-3))
        );
        // [dx^1, dx^2]_P = d(P^{12}) = 0 for constant P.
        assert!(higher_koszul(&p, &[&f("dx1"), &f("dx2")]).unwrap().is_zero());
    }

    /// x-dependent structure: [dx^a, dx^b]_P = d(P^{ab}).
    #[test]
    fn koszul_bracket_differential_of_structure() {
        let m = Space::base(&[("x1", Parity::Even), ("x2", Parity::Even)]).unwrap();
        let mv = Space::anticotangent(&m).unwrap();
        let forms = Space::antitangent(&m).unwrap();
        let x1 = Poly::var_named(&mv, "x1").unwrap();
        let st1 = Poly::var_named(&mv, "st_x1").unwrap();
        let st2 = Poly::var_named(&mv, "st_x2").unwrap();
        // P^{12} = x1, so P = x1 st_2 st_1; on a 2-dimensional base any
        // bivector satisfies [[P,P]] = 0 here (checked below).
        let p = &x1 * &(&st2 * &st1);
        assert!(crate::bracket::schouten(&p, &p).unwrap().is_zero());
        let f = |n: &str| Poly::var_named(&forms, n).unwrap();
        let dx1 = f("dx1");
        let dx2 = f("dx2");
        let got = higher_koszul(&p, &[&dx1, &dx2]).unwrap();
        assert_eq!(got, dx1);
        // [x^1, dx^2]_P = -P^{12} = -x1.
        assert_eq!(higher_koszul(&p, &[&f("x1"), &dx2]).unwrap(), -f("x1"));
    }

    /// The twisted differential on functions: d_P f = P^{ab} st_b df/dx^a.
    #[test]
    fn twisted_differential_on_functions() {
        let m = Space::base(&[("x1", Parity::Even), ("x2", Parity::Even)]).unwrap();
        let mv = Space::anticotangent(&m).unwrap();
        let x1 = Poly::var_named(&mv, "x1").unwrap();
        let x2 = Poly::var_named(&mv, "x2").unwrap();
        let st1 = Poly::var_named(&mv, "st_x1").unwrap();
        let st2 = Poly::var_named(&mv, "st_x2").unwrap();
        let p = (&st2 * &st1).scale(&q(5, 1)); // P^{12} = 5, P^{21} = -5
        let f = &x1 * &x2;
        let got = lichnerowicz(&p, &f).unwrap();
        // d_P f = P^{12} st_2 df/dx1 + P^{21} st_1 df/dx2 = 5 st_2 x2 - 5 st_1 x1.
        let expect = &(&st2 * &x2).scale(&q(5, 1)) - &(&st1 * &x1).scale(&q(5, 1));
        assert_eq!(got, expect);
        // d_P^2 = 0 on this instance ([[P,P]] = 0 for constant P).
        assert!(lichnerowicz(&p, &got).unwrap().is_zero());
    }

    /// Raising indices intertwines the differentials on functions.
    #[test]
    fn raise_indices_diagram_on_functions() {
        let m = Space::base(&[("x1", Parity::Even), ("x2", Parity::Even)]).unwrap();
        let mv = Space::anticotangent(&m).unwrap();
        let forms = Space::antitangent(&m).unwrap();
        let x1m = Poly::var_named(&mv, "x1").unwrap();
        let st1 = Poly::var_named(&mv, "st_x1").unwrap();
        let st2 = Poly::var_named(&mv, "st_x2").unwrap();
        let p = &x1m * &(&st2 * &st1);
        let d = de_rham_with(&forms, &SignConventions::default()).unwrap();
        let f = {
            let x1 = Poly::var_named(&forms, "x1").unwrap();
            let x2 = Poly::var_named(&forms, "x2").unwrap();
            &x1.pow(2) * &x2
        };
        // phi*(d f) = d_P(phi* f); phi* fixes base functions.
        let lhs = raise_indices(&p, &d.apply(&f).unwrap()).unwrap();
        let mut images = BTreeMap::new();
        for v in forms.var_ids() {
            if matches!(forms.var(v).role, Role::Differential(_)) {
                continue;
            }
            images.insert(v, Poly::var_named(&mv, &forms.var(v).name).unwrap());
        }
        let f_mv = f.morphism_to(&mv, &images).unwrap();
        let rhs = lichnerowicz(&p, &f_mv).unwrap();
        assert_eq!(lhs, rhs);
    }

    /// The unary closed form matches the route definition.
    #[test]
    fn unary_bracket_closed_form() {
        let m = Space::base(&[("x1", Parity::Even), ("th", Parity::Odd)]).unwrap();
        let mv = Space::anticotangent(&m).unwrap();
        let forms = Space::antitangent(&m).unwrap();
        let x1 = Poly::var_named(&mv, "x1").unwrap();
        let st1 = Poly::var_named(&mv, "st_x1").unwrap();
        let st_th = Poly::var_named(&mv, "st_th").unwrap(); // even
        // Even P with a linear piece: P = st_th + x1 st_th^2 + th-free terms.
        let p = &st_th + &(&x1 * &st_th.pow(2));
        let f = {
            let x1 = Poly::var_named(&forms, "x1").unwrap();
            let th = Poly::var_named(&forms, "th").unwrap();
            &x1.pow(2) + &(&x1 * &th)
        };
        let route = higher_koszul(&p, &[&f]).unwrap();
        let closed = unary_koszul_closed_form(&p, &f).unwrap();
        assert_eq!(route, closed);
        let _ = st1;
    }
}
