//! Canonical brackets on phase-space charts.
//!
//! Even bracket (on a chart whose pairs are all even, momenta `A` over
//! coordinates `a`):
//!
//! ```text
//! (F,G) = sum_a (-1)^{F~ a~} [ (-1)^{a~} dF/dA * dG/da - dF/da * dG/dA ]
//! ```
//!
//! with left partial derivatives. It is even-antisymmetric, satisfies the
//! graded Leibniz rule and Jacobi identity, and on Hamiltonians linear in
//! momenta reproduces vector-field calculus: `(X^v p_v, f) = X(f)` and
//! `(X^v p_v, Y^w p_w) = [X,Y]^v p_v`.
//!
//! Odd bracket (on a chart whose pairs are all odd): implemented as a derived
//! bracket. The engine builds the cotangent of the odd chart with its master
//! Hamiltonian `D = sum_u pi_u p_u` (the momentum of the antimomentum times
//! the momentum of the coordinate, in that order) and computes
//!
//! ```text
//! s(P,Q) = ((D, P), Q) restricted to the zero section.
//! ```
//!
//! `s` is the symmetric normalization (`s(P,Q) = (-1)^{P~ Q~} s(Q,P)`,
//! `s(u, st_u) = 1`). The public odd bracket is the antisymmetric
//! normalization `[[P,Q]] = (-1)^{P~ + 1} s(P,Q)`, which satisfies the odd
//! antisymmetry/Jacobi/Leibniz laws and acts on coordinates by
//! `[[st_a, f]] = (-1)^{a~} df/da`.

use crate::conventions::SignConventions;
use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::parity::Parity;
use crate::poly::{same_space, Poly};
use crate::scalar::{q, Coeff};
use crate::space::{Space, SpaceRef};

fn require_even_pairs(space: &SpaceRef, what: &str) -> Result<()> {
    if space.has_even_pairs() {
        Ok(())
    } else {
        Err(Error::MissingPairs(format!(
            "{what} needs a chart whose conjugate pairs are all even: {space}"
        )))
    }
}

fn require_odd_pairs(space: &SpaceRef, what: &str) -> Result<()> {
    if space.has_odd_pairs() {
        Ok(())
    } else {
        Err(Error::MissingPairs(format!(
            "{what} needs a chart whose conjugate pairs are all odd: {space}"
        )))
    }
}

/// Canonical even bracket with the pinned conventions.
pub fn poisson(f: &Poly, g: &Poly) -> Result<Poly> {
    poisson_with(f, g, &SignConventions::default())
}

/// Canonical even bracket; the arguments may be parity-inhomogeneous (the
/// bracket is extended bilinearly over the parity splits).
pub fn poisson_with(f: &Poly, g: &Poly, conv: &SignConventions) -> Result<Poly> {
    if !same_space(f.space(), g.space()) {
        return Err(Error::ChartMismatch(format!(
            "{} vs {}",
            f.space(),
            g.space()
        )));
    }
    require_even_pairs(f.space(), "the even bracket")?;
    let (fe, fo) = f.parity_split();
    let mut out = Poly::zero(f.space());
    for (part, parity) in [(fe, Parity::Even), (fo, Parity::Odd)] {
        if part.is_zero() {
            continue;
        }
        out = out.try_add(&poisson_homogeneous(&part, parity, g, conv)?)?;
    }
    Ok(out)
}

fn poisson_homogeneous(
    f: &Poly,
    f_parity: Parity,
    g: &Poly,
    conv: &SignConventions,
) -> Result<Poly> {
    let space = f.space();
    let mut out = Poly::zero(space);
    for pair in space.pairs() {
        let a = pair.coord;
        let cap = pair.momentum;
        let a_odd = space.var(a).parity.is_odd();
        let df_dp = f.partial_with(cap, conv);
        let df_da = f.partial_with(a, conv);
        if df_dp.is_zero() && df_da.is_zero() {
            continue;
        }
        let dg_da = g.partial_with(a, conv);
        let dg_dp = g.partial_with(cap, conv);
        // (-1)^{a~} dF/dA dG/da - dF/da dG/dA
        let mut term = Poly::zero(space);
        if !df_dp.is_zero() && !dg_da.is_zero() {
            let mut t = df_dp.try_mul(&dg_da)?;
            if a_odd {
                t = -t;
            }
            term = term.try_add(&t)?;
        }
        if !df_da.is_zero() && !dg_dp.is_zero() {
            term = term.try_sub(&df_da.try_mul(&dg_dp)?)?;
        }
        // Global factor (-1)^{F~ a~}.
        if f_parity.is_odd() && a_odd {
            term = -term;
        }
        out = out.try_add(&term)?;
    }
    Ok(out)
}

/// Hamiltonian vector field of a parity-homogeneous Hamiltonian `H` on an
/// even phase space: the derivation `(H, -)`, with coefficients
/// `(-1)^{(H~+1) a~} dH/dA` along `d/da` and `-(-1)^{H~ a~} dH/da` along
/// `d/dA`.
pub fn hamiltonian_field(h: &Poly) -> Result<VectorField> {
    hamiltonian_field_with(h, &SignConventions::default())
}

pub fn hamiltonian_field_with(h: &Poly, conv: &SignConventions) -> Result<VectorField> {
    require_even_pairs(h.space(), "a Hamiltonian field")?;
    let parity = h.require_parity("hamiltonian_field")?;
    let space = h.space();
    let mut coeffs = Vec::new();
    for pair in space.pairs() {
        let a = pair.coord;
        let cap = pair.momentum;
        let a_odd = space.var(a).parity.is_odd();
        // Coefficient along d/da: (-1)^{(H~+1) a~} dH/dA, negative iff H is
        // even and a is odd.
        let mut ca = h.partial_with(cap, conv);
        if a_odd && !parity.is_odd() {
            ca = -ca;
        }
        // Coefficient along d/dA.
        let mut cp = h.partial_with(a, conv);
        if !(parity.is_odd() && a_odd) {
            // -(-1)^{H~ a~}: the minus sign survives unless H and a both odd.
            cp = -cp;
        }
        if !ca.is_zero() {
            coeffs.push((a, ca));
        }
        if !cp.is_zero() {
            coeffs.push((cap, cp));
        }
    }
    VectorField::new(space, parity, coeffs)
}

/// The odd chart's master Hamiltonian: on the cotangent of a chart with odd
/// pairs `(u, st_u)`, `D = sum_u pi_u * p_u` (momentum of the antimomentum
/// first). Returns the cotangent chart and `D`.
pub fn odd_master(space: &SpaceRef, conv: &SignConventions) -> Result<(SpaceRef, Poly)> {
    require_odd_pairs(space, "the odd master Hamiltonian")?;
    let t = Space::cotangent(space)?;
    let mut d = Poly::zero(&t);
    for pair in space.pairs() {
        let coord_name = &space.var(pair.coord).name;
        let anti_name = &space.var(pair.momentum).name;
        let p_coord = t
            .momentum_of(t.var_id(coord_name)?)
            .ok_or_else(|| Error::internal("cotangent chart lost a momentum".to_string()))?;
        let p_anti = t
            .momentum_of(t.var_id(anti_name)?)
            .ok_or_else(|| Error::internal("cotangent chart lost a momentum".to_string()))?;
        let sign = if conv.master_sign() < 0 { q(-1, 1) } else { q(1, 1) };
        d = d.try_add(&Poly::from_factor_sequence(&t, sign, &[p_anti, p_coord]))?;
    }
    Ok((t, d))
}

/// The symmetric derived odd bracket
/// `s(P,Q) = ((D,P),Q)` restricted to the zero section of the cotangent of
/// the odd chart. Both arguments must live on a chart with odd pairs; `Q`
/// may be inhomogeneous, `P` must be parity-homogeneous (split it first
/// otherwise).
pub fn raw_derived(p: &Poly, qq: &Poly, conv: &SignConventions) -> Result<Poly> {
    if !same_space(p.space(), qq.space()) {
        return Err(Error::ChartMismatch(format!(
            "{} vs {}",
            p.space(),
            qq.space()
        )));
    }
    let space = p.space();
    let (t, d) = odd_master(space, conv)?;
    let p_lift = p.lift_to(&t)?;
    let q_lift = qq.lift_to(&t)?;
    let inner = poisson_with(&d, &p_lift, conv)?;
    let outer = poisson_with(&inner, &q_lift, conv)?;
    outer.set_zero(&t.momenta()).lower_to(space)
}

/// The antisymmetric odd bracket `[[P,Q]] = (-1)^{P~+1} s(P,Q)`, extended
/// bilinearly over the parity split of `P`.
pub fn schouten(p: &Poly, qq: &Poly) -> Result<Poly> {
    schouten_with(p, qq, &SignConventions::default())
}

pub fn schouten_with(p: &Poly, qq: &Poly, conv: &SignConventions) -> Result<Poly> {
    let (pe, po) = p.parity_split();
    let mut out = Poly::zero(p.space());
    if !pe.is_zero() {
        // (-1)^{0+1} = -1.
        out = out.try_sub(&raw_derived(&pe, qq, conv)?)?;
    }
    if !po.is_zero() {
        // (-1)^{1+1} = +1.
        out = out.try_add(&raw_derived(&po, qq, conv)?)?;
    }
    Ok(out)
}

/// Iterates the even bracket: `(((h, a_1), a_2), ..., a_n)`.
pub fn iterated_poisson(h: &Poly, args: &[&Poly], conv: &SignConventions) -> Result<Poly> {
    let mut acc = h.clone();
    for a in args {
        acc = poisson_with(&acc, a, conv)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// Splits a bracket value over the parity decomposition of both arguments and
/// applies `f` to each pair of homogeneous parts, summing the results. Useful
/// for extending parity-restricted identities bilinearly.
pub fn bilinear_split(
    a: &Poly,
    b: &Poly,
    mut f: impl FnMut(&Poly, &Poly) -> Result<Poly>,
) -> Result<Poly> {
    let (ae, ao) = a.parity_split();
    let (be, bo) = b.parity_split();
    let mut out = Poly::zero(a.space());
    for x in [&ae, &ao] {
        if x.is_zero() {
            continue;
        }
        for y in [&be, &bo] {
            if y.is_zero() {
                continue;
            }
            out = out.try_add(&f(x, y)?)?;
        }
    }
    Ok(out)
}

/// `(F,F)` convenience (used by the odd-squared identities).
pub fn poisson_square(f: &Poly) -> Result<Poly> {
    poisson(f, f)
}

/// Coefficient helper: `2 * sum_a dF/dA * dF/da` over the chart's pairs, the
/// closed form that `(F,F)` must equal for odd `F` on an even phase space.
pub fn odd_square_closed_form(f: &Poly) -> Result<Poly> {
    require_even_pairs(f.space(), "the odd-square closed form")?;
    let space = f.space();
    let mut out = Poly::zero(space);
    for pair in space.pairs() {
        let t = f
            .partial_left(pair.momentum)
            .try_mul(&f.partial_left(pair.coord))?;
        out = out.try_add(&t)?;
    }
    Ok(out.scale(&Coeff::from_integer(2.into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;
    use crate::space::Space;

    fn cot_chart() -> SpaceRef {
        let m = Space::base(&[("x", Parity::Even), ("th", Parity::Odd)]).unwrap();
        Space::cotangent(&m).unwrap()
    }

    #[test]
    fn momentum_acts_as_derivative() {
        let t = cot_chart();
        let x = Poly::var_named(&t, "x").unwrap();
        let th = Poly::var_named(&t, "th").unwrap();
        let px = Poly::var_named(&t, "p_x").unwrap();
        let pth = Poly::var_named(&t, "p_th").unwrap();
        let f = &x.pow(2) * &th;
        // (p_x, f) = df/dx.
        assert_eq!(poisson(&px, &f).unwrap(), f.partial_left(t.var_id("x").unwrap()));
        // (p_th, f) = df/dth.
        assert_eq!(
            poisson(&pth, &f).unwrap(),
            f.partial_left(t.var_id("th").unwrap())
        );
        // Functions of coordinates alone commute.
        assert!(poisson(&f, &(&x * &th)).unwrap().is_zero());
    }

    #[test]
    fn hamiltonian_field_matches_bracket() {
        let t = cot_chart();
        let th = Poly::var_named(&t, "th").unwrap();
        let px = Poly::var_named(&t, "p_x").unwrap();
        let pth = Poly::var_named(&t, "p_th").unwrap();
        let x = Poly::var_named(&t, "x").unwrap();
        let h = &(&x * &pth) + &(&th * &px); // odd Hamiltonian
        let xh = hamiltonian_field(&h).unwrap();
        for g in [&(&x * &th) * &px, pth.pow(1), &x.pow(3) + &(&th * &pth)] {
            assert_eq!(xh.apply(&g).unwrap(), poisson(&h, &g).unwrap());
        }
    }

    #[test]
    fn odd_square_identity_instance() {
        let t = cot_chart();
        let th = Poly::var_named(&t, "th").unwrap();
        let px = Poly::var_named(&t, "p_x").unwrap();
        let pth = Poly::var_named(&t, "p_th").unwrap();
        let x = Poly::var_named(&t, "x").unwrap();
        let f = &(&x.pow(2) * &pth) + &(&th * &px); // odd
        assert_eq!(
            poisson_square(&f).unwrap(),
            odd_square_closed_form(&f).unwrap()
        );
    }

    #[test]
    fn derived_bracket_normalizations() {
        let m = Space::base(&[("x", Parity::Even)]).unwrap();
        let pt = Space::anticotangent(&m).unwrap();
        let x = Poly::var_named(&pt, "x").unwrap();
        let st = Poly::var_named(&pt, "st_x").unwrap();
        let conv = SignConventions::default();
        // s(x, st_x) = s(st_x, x) = 1 (symmetric normalization).
        assert_eq!(raw_derived(&x, &st, &conv).unwrap(), Poly::one(&pt));
        assert_eq!(raw_derived(&st, &x, &conv).unwrap(), Poly::one(&pt));
        // Antisymmetric normalization: [[st_x, f]] = (+1) df/dx for even x.
        let f = x.pow(3);
        assert_eq!(
            schouten(&st, &f).unwrap(),
            f.partial_left(pt.var_id("x").unwrap())
        );
        // [[x, st_x]] = -[[st_x, x]].
        assert_eq!(
            schouten(&x, &st).unwrap(),
            -schouten(&st, &x).unwrap()
        );
    }

    #[test]
    fn derived_bracket_on_odd_coordinates() {
        let m = Space::base(&[("th", Parity::Odd)]).unwrap();
        let pt = Space::anticotangent(&m).unwrap();
        let th = Poly::var_named(&pt, "th").unwrap();
        let st = Poly::var_named(&pt, "st_th").unwrap(); // even
        let conv = SignConventions::default();
        assert_eq!(raw_derived(&th, &st, &conv).unwrap(), Poly::one(&pt));
        assert_eq!(raw_derived(&st, &th, &conv).unwrap(), Poly::one(&pt));
        // [[st_th, f]] = (-1)^{th~} df/dth = -df/dth.
        let f = &th * &st.pow(2);
        assert_eq!(
            schouten(&st, &f).unwrap(),
            -f.partial_left(pt.var_id("th").unwrap())
        );
        let _ = qi(0);
    }
}
