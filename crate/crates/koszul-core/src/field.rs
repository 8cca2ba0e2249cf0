//! Parity-homogeneous vector fields (graded derivations) on a chart.
//!
//! A field is written `X = sum_v X^v d/dv` with the coefficient on the left;
//! it acts on functions by `X(f) = sum_v X^v * (df/dv)` with left partial
//! derivatives. The coefficient of `d/dv` must have parity
//! `parity(X) + parity(v)`.

use std::collections::BTreeMap;

use crate::conventions::SignConventions;
use crate::error::{Error, Result};
use crate::parity::Parity;
use crate::poly::{same_space, ParityReport, Poly};
use crate::space::{Role, SpaceRef, VarId};

/// A parity-homogeneous vector field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    space: SpaceRef,
    parity: Parity,
    coeffs: BTreeMap<VarId, Poly>,
}

impl VectorField {
    /// Builds a field from its coefficients, validating chart, parity and
    /// that no derivative targets an inert parameter.
    pub fn new(
        space: &SpaceRef,
        parity: Parity,
        coeffs: impl IntoIterator<Item = (VarId, Poly)>,
    ) -> Result<VectorField> {
        let mut map = BTreeMap::new();
        for (v, c) in coeffs {
            if matches!(space.var(v).role, Role::Parameter) {
                return Err(Error::invalid(format!(
                    "vector fields may not differentiate along the parameter {}",
                    space.var(v).name
                )));
            }
            if !same_space(c.space(), space) {
                return Err(Error::ChartMismatch(format!(
                    "coefficient of d/d{} lives on {}",
                    space.var(v).name,
                    c.space()
                )));
            }
            let want = parity + space.var(v).parity;
            match c.parity_report() {
                ParityReport::Zero => continue,
                ParityReport::Homogeneous(p) if p == want => {}
                _ => {
                    return Err(Error::ParityMismatch {
                        context: "vector field coefficient",
                        expected: want,
                        found: format!(
                            "coefficient of d/d{} is not homogeneous of that parity",
                            space.var(v).name
                        ),
                    })
                }
            }
            if !c.is_zero() {
                map.insert(v, c);
            }
        }
        Ok(VectorField {
            space: space.clone(),
            parity,
            coeffs: map,
        })
    }

    pub fn zero(space: &SpaceRef, parity: Parity) -> VectorField {
        VectorField {
            space: space.clone(),
            parity,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant coordinate field `d/dv`.
    pub fn coordinate(space: &SpaceRef, v: VarId) -> Result<VectorField> {
        VectorField::new(
            space,
            space.var(v).parity,
            [(v, Poly::one(space))],
        )
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `d/dv` (zero if absent).
    pub fn coeff(&self, v: VarId) -> Poly {
        self.coeffs
            .get(&v)
            .cloned()
            .unwrap_or_else(|| Poly::zero(&self.space))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&VarId, &Poly)> {
        self.coeffs.iter()
    }

    /// Applies the derivation to a function.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        if !same_space(f.space(), &self.space) {
            return Err(Error::ChartMismatch(format!(
                "field on {} applied to function on {}",
                self.space,
                f.space()
            )));
        }
        let mut out = Poly::zero(&self.space);
        for (&v, c) in &self.coeffs {
            out = out.try_add(&c.try_mul(&f.partial_left(v))?)?;
        }
        Ok(out)
    }

    /// Sum of two fields of equal parity.
    pub fn try_add(&self, other: &VectorField) -> Result<VectorField> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::ChartMismatch(format!(
                "{} vs {}",
                self.space, other.space
            )));
        }
        if self.parity != other.parity && !self.is_zero() && !other.is_zero() {
            return Err(Error::ParityMismatch {
                context: "vector field sum",
                expected: self.parity,
                found: other.parity.to_string(),
            });
        }
        let parity = if self.is_zero() { other.parity } else { self.parity };
        let mut coeffs = self.coeffs.clone();
        for (&v, c) in &other.coeffs {
            let merged = match coeffs.get(&v) {
                Some(old) => old.try_add(c)?,
                None => c.clone(),
            };
            if merged.is_zero() {
                coeffs.remove(&v);
            } else {
                coeffs.insert(v, merged);
            }
        }
        Ok(VectorField {
            space: self.space.clone(),
            parity,
            coeffs,
        })
    }

    pub fn scale(&self, c: &crate::scalar::Coeff) -> VectorField {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&v, p)| (v, p.scale(c)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        VectorField {
            space: self.space.clone(),
            parity: self.parity,
            coeffs,
        }
    }

    pub fn neg(&self) -> VectorField {
        self.scale(&-crate::scalar::Coeff::from_integer(1.into()))
    }

    /// Sets the listed variables to zero in every coefficient.
    pub fn set_zero(&self, vars: &[VarId]) -> VectorField {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&v, p)| (v, p.set_zero(vars)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        VectorField {
            space: self.space.clone(),
            parity: self.parity,
            coeffs,
        }
    }
}

impl std::fmt::Display for VectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&v, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}) d/d{}", c, self.space.var(v).name)?;
        }
        Ok(())
    }
}

/// Graded commutator `[X, Y]`; its coefficient along `d/dv` is
/// `X(Y^v) - (-1)^{parity(X) parity(Y)} Y(X^v)`.
pub fn commutator(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    if !same_space(x.space(), y.space()) {
        return Err(Error::ChartMismatch(format!(
            "{} vs {}",
            x.space(),
            y.space()
        )));
    }
    let sign_flip = x.parity().is_odd() && y.parity().is_odd();
    let mut coeffs: BTreeMap<VarId, Poly> = BTreeMap::new();
    let mut add = |v: VarId, p: Poly| {
        if p.is_zero() {
            return;
        }
        match coeffs.get(&v) {
            Some(old) => {
                let s = old + &p;
                if s.is_zero() {
                    coeffs.remove(&v);
                } else {
                    coeffs.insert(v, s);
                }
            }
            None => {
                coeffs.insert(v, p);
            }
        }
    };
    for (&v, c) in y.coeffs() {
        add(v, x.apply(c)?);
    }
    for (&v, c) in x.coeffs() {
        let mut t = y.apply(c)?;
        if !sign_flip {
            t = -t;
        }
        add(v, t);
    }
    Ok(VectorField {
        space: x.space().clone(),
        parity: x.parity() + y.parity(),
        coeffs,
    })
}

/// The coordinate de Rham field `sum_a dv^a d/dv^a` on a chart carrying
/// differential variables. It is odd and squares to zero.
pub fn de_rham(space: &SpaceRef) -> Result<VectorField> {
    de_rham_with(space, &SignConventions::default())
}

/// De Rham field with an explicit sign convention (the master-sign switch
/// flips it).
pub fn de_rham_with(space: &SpaceRef, conv: &SignConventions) -> Result<VectorField> {
    let mut coeffs = Vec::new();
    for v in space.var_ids() {
        if let Role::Differential(of) = space.var(v).role {
            let mut dv = Poly::var(space, v);
            if conv.master_sign() < 0 {
                dv = -dv;
            }
            coeffs.push((of, dv));
        }
    }
    if coeffs.is_empty() {
        return Err(Error::WrongProvenance(
            "the de Rham field needs a chart with differential variables".into(),
        ));
    }
    VectorField::new(space, Parity::Odd, coeffs)
}

/// Interior product along a field on the underlying chart: for
/// `X = sum X^a d/dx^a` of parity `p` on the base of a differential chart,
/// `i_X = (-1)^p sum X^a d/d(dx^a)` (coefficients lifted). It satisfies
/// `i_{d/dx}(dx) = +1` and `[i_X, i_Y] = 0`.
pub fn interior(space: &SpaceRef, x: &VectorField) -> Result<VectorField> {
    interior_with(space, x, &SignConventions::default())
}

/// Interior product with an explicit sign convention (the interior-sign
/// switch flips it).
pub fn interior_with(
    space: &SpaceRef,
    x: &VectorField,
    conv: &SignConventions,
) -> Result<VectorField> {
    let mut sign = if x.parity().is_odd() { -1i8 } else { 1 };
    sign *= conv.interior_sign();
    let mut coeffs = Vec::new();
    for v in space.var_ids() {
        if let Role::Differential(of) = space.var(v).role {
            // `of` must name a variable of the underlying chart of `x`.
            let name = &space.var(of).name;
            let src = match x.space().by_name(name) {
                Some(id) => id,
                None => {
                    return Err(Error::ChartMismatch(format!(
                        "interior product: base variable {name} missing from the field's chart"
                    )))
                }
            };
            let mut c = x.coeff(src).lift_to(space)?;
            if sign < 0 {
                c = -c;
            }
            coeffs.push((v, c));
        }
    }
    if coeffs.is_empty() {
        return Err(Error::WrongProvenance(
            "the interior product needs a chart with differential variables".into(),
        ));
    }
    VectorField::new(space, x.parity().flip(), coeffs)
}

/// The Hamiltonian linear in momenta generating a given field: builds the
/// cotangent chart of the field's chart and returns `sum X^v p_v` (the
/// coefficient on the left). Its parity equals the field's parity.
pub fn linear_hamiltonian(x: &VectorField) -> Result<(SpaceRef, Poly)> {
    let t = crate::space::Space::cotangent(x.space())?;
    let mut h = Poly::zero(&t);
    for (&v, c) in x.coeffs() {
        let p = t.momentum_of(t.var_id(&x.space().var(v).name)?).ok_or_else(|| {
            Error::internal(format!(
                "cotangent chart lacks a momentum for {}",
                x.space().var(v).name
            ))
        })?;
        h = h.try_add(&c.lift_to(&t)?.try_mul(&Poly::var(&t, p))?)?;
    }
    Ok((t, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Space;

    #[test]
    fn de_rham_squares_to_zero() {
        let m = Space::base(&[("x1", Parity::Even), ("th", Parity::Odd)]).unwrap();
        let ptm = Space::antitangent(&m).unwrap();
        let d = de_rham(&ptm).unwrap();
        assert_eq!(d.parity(), Parity::Odd);
        let dd = commutator(&d, &d).unwrap();
        assert!(dd.is_zero());
        // d(x1) = dx1, d(th) = dth, d(x1*th) = dx1 th + x1 dth.
        let x1 = Poly::var_named(&ptm, "x1").unwrap();
        let th = Poly::var_named(&ptm, "th").unwrap();
        let dx1 = Poly::var_named(&ptm, "dx1").unwrap();
        let dth = Poly::var_named(&ptm, "dth").unwrap();
        assert_eq!(d.apply(&x1).unwrap(), dx1);
        assert_eq!(d.apply(&(&x1 * &th)).unwrap(), &(&dx1 * &th) + &(&x1 * &dth));
    }

    #[test]
    fn interior_product_normalization() {
        let m = Space::base(&[("x", Parity::Even)]).unwrap();
        let ptm = Space::antitangent(&m).unwrap();
        // X = d/dx on the base.
        let x_field = VectorField::coordinate(&m, m.var_id("x").unwrap()).unwrap();
        let ix = interior(&ptm, &x_field).unwrap();
        let dx = Poly::var_named(&ptm, "dx").unwrap();
        assert_eq!(ix.apply(&dx).unwrap(), Poly::one(&ptm));
        // Flipped convention changes the sign.
        let conv = SignConventions {
            interior_sign_flipped: true,
            ..SignConventions::default()
        };
        let ix2 = interior_with(&ptm, &x_field, &conv).unwrap();
        assert_eq!(ix2.apply(&dx).unwrap(), -Poly::one(&ptm));
    }

    #[test]
    fn linear_hamiltonian_of_de_rham() {
        let m = Space::base(&[("x", Parity::Even)]).unwrap();
        let ptm = Space::antitangent(&m).unwrap();
        let d = de_rham(&ptm).unwrap();
        let (t, h) = linear_hamiltonian(&d).unwrap();
        // H = dx * p_x.
        let dx = t.var_id("dx").unwrap();
        let px = t.var_id("p_x").unwrap();
        assert_eq!(h, Poly::from_factor_sequence(&t, crate::scalar::qi(1), &[dx, px]));
    }
}
