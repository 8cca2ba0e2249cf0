//! Graded-commutative polynomials with exact rational coefficients.
//!
//! A [`Poly`] is a finite sum of canonical monomials over a fixed chart.
//! Multiplication follows the Koszul rule (odd variables anticommute, odd
//! squares vanish), derivatives are left derivatives by default (the
//! differentiation variable is commuted to the front of each monomial and
//! removed), and substitution is an algebra morphism: each monomial is the
//! ordered product of the images of its factors, so images must match the
//! parity of the variable they replace.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::conventions::SignConventions;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::parity::Parity;
use crate::scalar::{coeff_string, Coeff};
use crate::space::{Relabeling, SpaceRef, VarId};

/// Parity classification of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityReport {
    /// The zero polynomial (homogeneous of every parity).
    Zero,
    /// All terms share this parity.
    Homogeneous(Parity),
    /// Both parities occur.
    Mixed,
}

/// Bi-weight classification of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightReport {
    Zero,
    Homogeneous((i32, i32)),
    Mixed,
}

/// A graded-commutative polynomial over a fixed chart.
#[derive(Debug, Clone)]
pub struct Poly {
    space: SpaceRef,
    terms: BTreeMap<Monomial, Coeff>,
}

pub(crate) fn same_space(a: &SpaceRef, b: &SpaceRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Poly {
    // ------------------------------------------------------------------
    // Constructors.
    // ------------------------------------------------------------------

    pub fn zero(space: &SpaceRef) -> Poly {
        Poly {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: &SpaceRef) -> Poly {
        Poly::constant(space, Coeff::one())
    }

    pub fn constant(space: &SpaceRef, c: Coeff) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(space.n_vars()), c);
        }
        Poly {
            space: space.clone(),
            terms,
        }
    }

    pub fn var(space: &SpaceRef, v: VarId) -> Poly {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::of_var(space.n_vars(), v), Coeff::one());
        Poly {
            space: space.clone(),
            terms,
        }
    }

    /// The variable with the given name.
    pub fn var_named(space: &SpaceRef, name: &str) -> Result<Poly> {
        Ok(Poly::var(space, space.var_id(name)?))
    }

    /// `coeff * v1^e1 * ... * vk^ek` with the factors in the listed order
    /// interpreted canonically (variables must be distinct). Odd variables
    /// must not carry an exponent above 1.
    pub fn monomial(space: &SpaceRef, coeff: Coeff, powers: &[(VarId, u16)]) -> Result<Poly> {
        let mut exps = vec![0u16; space.n_vars()];
        for &(v, e) in powers {
            if exps[v.idx()] != 0 {
                return Err(Error::invalid(format!(
                    "variable {} listed twice in monomial",
                    space.var(v).name
                )));
            }
            if space.var(v).parity.is_odd() && e > 1 {
                return Ok(Poly::zero(space));
            }
            exps[v.idx()] = e;
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(Monomial::from_exps(exps), coeff);
        }
        Ok(Poly {
            space: space.clone(),
            terms,
        })
    }

    fn pipe_ok(self) -> Result<Poly> {
        Ok(self)
    }

    /// `coeff * f1 * f2 * ...` with the factors multiplied in the given
    /// order; Koszul reordering signs are applied, repeated odd factors give
    /// zero.
    pub fn from_factor_sequence(space: &SpaceRef, coeff: Coeff, factors: &[VarId]) -> Poly {
        let parities = space.parities();
        match Monomial::from_factor_sequence(space.n_vars(), factors, &parities) {
            None => Poly::zero(space),
            Some((m, s)) => {
                let mut terms = BTreeMap::new();
                let c = if s < 0 { -coeff } else { coeff };
                if !c.is_zero() {
                    terms.insert(m, c);
                }
                Poly {
                    space: space.clone(),
                    terms,
                }
            }
        }
    }

    /// Builds a polynomial from raw (monomial, coefficient) pairs, combining
    /// duplicates and dropping zeros.
    pub fn from_terms(
        space: &SpaceRef,
        pairs: impl IntoIterator<Item = (Monomial, Coeff)>,
    ) -> Poly {
        let mut p = Poly::zero(space);
        for (m, c) in pairs {
            p.insert_term(m, c);
        }
        p
    }

    fn insert_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    // ------------------------------------------------------------------
    // Accessors.
    // ------------------------------------------------------------------

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    /// Terms in display order: total degree descending, then reverse
    /// lexicographic (higher power of an earlier variable first).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Coefficient of the canonical monomial `v1^e1*...*vk^ek`.
    pub fn coeff_of(&self, powers: &[(VarId, u16)]) -> Coeff {
        let mut exps = vec![0u16; self.space.n_vars()];
        for &(v, e) in powers {
            exps[v.idx()] += e;
        }
        self.coeff(&Monomial::from_exps(exps))
    }

    /// Highest total degree among terms (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Variables occurring in at least one term.
    pub fn support(&self) -> Vec<VarId> {
        let mut seen = vec![false; self.space.n_vars()];
        for m in self.terms.keys() {
            for v in m.support() {
                seen[v.idx()] = true;
            }
        }
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| VarId::new(i))
            .collect()
    }

    pub fn parity_report(&self) -> ParityReport {
        let parities = self.space.parities();
        let mut found: Option<Parity> = None;
        for m in self.terms.keys() {
            let p = m.parity(&parities);
            match found {
                None => found = Some(p),
                Some(q) if q == p => {}
                Some(_) => return ParityReport::Mixed,
            }
        }
        match found {
            None => ParityReport::Zero,
            Some(p) => ParityReport::Homogeneous(p),
        }
    }

    /// The parity of a homogeneous polynomial. Zero counts as even (any
    /// parity-dependent formula applied to zero yields zero anyway); mixed
    /// polynomials are an error.
    pub fn require_parity(&self, context: &'static str) -> Result<Parity> {
        match self.parity_report() {
            ParityReport::Zero => Ok(Parity::Even),
            ParityReport::Homogeneous(p) => Ok(p),
            ParityReport::Mixed => Err(Error::Inhomogeneous { context }),
        }
    }

    /// Splits into (even part, odd part).
    pub fn parity_split(&self) -> (Poly, Poly) {
        let parities = self.space.parities();
        let mut even = Poly::zero(&self.space);
        let mut odd = Poly::zero(&self.space);
        for (m, c) in &self.terms {
            if m.parity(&parities).is_odd() {
                odd.insert_term(m.clone(), c.clone());
            } else {
                even.insert_term(m.clone(), c.clone());
            }
        }
        (even, odd)
    }

    pub fn weight_report(&self) -> WeightReport {
        let mut found: Option<(i32, i32)> = None;
        for m in self.terms.keys() {
            let mut w = (0i32, 0i32);
            for v in m.support() {
                let e = m.exp(v) as i32;
                let vw = self.space.var(v).weight;
                w.0 += e * vw.0;
                w.1 += e * vw.1;
            }
            match found {
                None => found = Some(w),
                Some(q) if q == w => {}
                Some(_) => return WeightReport::Mixed,
            }
        }
        match found {
            None => WeightReport::Zero,
            Some(w) => WeightReport::Homogeneous(w),
        }
    }

    // ------------------------------------------------------------------
    // Arithmetic.
    // ------------------------------------------------------------------

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::ChartMismatch(format!(
                "{} vs {}",
                self.space, other.space
            )));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.try_add(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Poly {
        Poly {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.space);
        }
        Poly {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::ChartMismatch(format!(
                "{} vs {}",
                self.space, other.space
            )));
        }
        let parities = self.space.parities();
        let mut out = Poly::zero(&self.space);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, s)) = m1.mul(m2, &parities) {
                    let mut c = c1.clone() * c2.clone();
                    if s < 0 {
                        c = -c;
                    }
                    out.insert_term(m, c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one(&self.space);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    // ------------------------------------------------------------------
    // Derivatives.
    // ------------------------------------------------------------------

    /// Left partial derivative: in each term the variable is commuted to the
    /// leftmost position (collecting a sign past preceding odd factors) and
    /// removed.
    pub fn partial_left(&self, v: VarId) -> Poly {
        let parities = self.space.parities();
        let mut out = Poly::zero(&self.space);
        for (m, c) in &self.terms {
            if let Some((red, f)) = m.partial_left(v, &parities) {
                out.insert_term(red, c.clone() * Coeff::from_integer(f.into()));
            }
        }
        out
    }

    /// Right partial derivative: the variable is commuted to the rightmost
    /// position instead.
    pub fn partial_right(&self, v: VarId) -> Poly {
        let parities = self.space.parities();
        let mut out = Poly::zero(&self.space);
        for (m, c) in &self.terms {
            if let Some((red, f)) = m.partial_right(v, &parities) {
                out.insert_term(red, c.clone() * Coeff::from_integer(f.into()));
            }
        }
        out
    }

    /// Left or right derivative according to the convention switch.
    pub fn partial_with(&self, v: VarId, conv: &SignConventions) -> Poly {
        if conv.right_derivative {
            self.partial_right(v)
        } else {
            self.partial_left(v)
        }
    }

    // ------------------------------------------------------------------
    // Substitution and transport.
    // ------------------------------------------------------------------

    /// Substitutes images for some variables within the same chart; unmapped
    /// variables stay fixed. Every image must be parity-homogeneous of the
    /// replaced variable's parity (or zero), so the result is the value of
    /// the unique algebra morphism extending the assignment.
    pub fn substitute(&self, images: &BTreeMap<VarId, Poly>) -> Result<Poly> {
        let space = self.space.clone();
        self.apply_morphism(&space, |v| {
            images
                .get(&v)
                .cloned()
                .map_or_else(|| Ok(Poly::var(&space, v)), Ok)
        })
    }

    /// Convenience for a single-variable substitution.
    pub fn substitute_var(&self, v: VarId, image: &Poly) -> Result<Poly> {
        let mut images = BTreeMap::new();
        images.insert(v, image.clone());
        self.substitute(&images)
    }

    /// Applies the algebra morphism into `dst` defined by `images`; every
    /// variable occurring in the polynomial must have an image.
    pub fn morphism_to(&self, dst: &SpaceRef, images: &BTreeMap<VarId, Poly>) -> Result<Poly> {
        self.apply_morphism(dst, |v| {
            images.get(&v).cloned().ok_or_else(|| {
                Error::invalid(format!(
                    "morphism lacks an image for variable {}",
                    self.space.var(v).name
                ))
            })
        })
    }

    fn apply_morphism(
        &self,
        dst: &SpaceRef,
        image: impl Fn(VarId) -> Result<Poly>,
    ) -> Result<Poly> {
        // Validate parity of each needed image once.
        let mut cache: BTreeMap<VarId, Poly> = BTreeMap::new();
        for v in self.support() {
            let img = image(v)?;
            if !same_space(&img.space, dst) {
                return Err(Error::ChartMismatch(format!(
                    "image of {} lives on {}, expected {}",
                    self.space.var(v).name,
                    img.space,
                    dst
                )));
            }
            match img.parity_report() {
                ParityReport::Zero => {}
                ParityReport::Homogeneous(p) if p == self.space.var(v).parity => {}
                _ => {
                    return Err(Error::ParityMismatch {
                        context: "substitution image",
                        expected: self.space.var(v).parity,
                        found: format!(
                            "image of {} is not homogeneous of that parity",
                            self.space.var(v).name
                        ),
                    })
                }
            }
            cache.insert(v, img);
        }
        let mut out = Poly::zero(dst);
        for (m, c) in &self.terms {
            // The monomial is the ordered product of its factors in canonical
            // (ascending index) order; its image is the ordered product of the
            // factor images, with all Koszul signs arising inside `try_mul`.
            let mut acc = Poly::constant(dst, c.clone());
            for v in m.support() {
                let img = &cache[&v];
                for _ in 0..m.exp(v) {
                    acc = acc.try_mul(img)?;
                    if acc.is_zero() {
                        break;
                    }
                }
                if acc.is_zero() {
                    break;
                }
            }
            out = out.try_add(&acc)?;
        }
        Ok(out)
    }

    /// Transports the polynomial along a signed variable relabeling.
    pub fn apply_relabeling(&self, r: &Relabeling) -> Result<Poly> {
        if !same_space(&self.space, &r.src) {
            return Err(Error::ChartMismatch(format!(
                "relabeling source {} does not match {}",
                r.src, self.space
            )));
        }
        let dst_parities = r.dst.parities();
        let mut out = Poly::zero(&r.dst);
        for (m, c) in &self.terms {
            let mut sign = 1i8;
            let mut factors: Vec<VarId> = Vec::with_capacity(m.degree() as usize);
            for v in m.support() {
                let (s, w) = r.images[v.idx()];
                for _ in 0..m.exp(v) {
                    if s < 0 {
                        sign = -sign;
                    }
                    factors.push(w);
                }
            }
            if let Some((dm, s2)) =
                Monomial::from_factor_sequence(r.dst.n_vars(), &factors, &dst_parities)
            {
                let mut coeff = c.clone();
                if sign * s2 < 0 {
                    coeff = -coeff;
                }
                out.insert_term(dm, coeff);
            }
        }
        Ok(out)
    }

    /// Embeds into a chart built from this one by appending variables.
    pub fn lift_to(&self, child: &SpaceRef) -> Result<Poly> {
        let n = self.space.n_vars();
        if child.n_vars() < n || child.vars()[..n] != self.space.vars()[..] {
            return Err(Error::ChartMismatch(format!(
                "{} is not an extension of {}",
                child, self.space
            )));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.pad_to(child.n_vars()), c.clone()))
            .collect();
        Poly {
            space: child.clone(),
            terms,
        }
        .pipe_ok()
    }

    /// Restricts to a prefix chart; fails if any appended variable occurs.
    pub fn lower_to(&self, parent: &SpaceRef) -> Result<Poly> {
        let n = parent.n_vars();
        if self.space.n_vars() < n || self.space.vars()[..n] != parent.vars()[..] {
            return Err(Error::ChartMismatch(format!(
                "{} is not an extension of {}",
                self.space, parent
            )));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            match m.truncate_to(n) {
                Some(t) => {
                    terms.insert(t, c.clone());
                }
                None => {
                    return Err(Error::invalid(format!(
                        "polynomial does not descend to {parent}: a truncated variable occurs"
                    )))
                }
            }
        }
        Poly {
            space: parent.clone(),
            terms,
        }
        .pipe_ok()
    }

    /// This polynomial with the given monomial's term removed (identity when
    /// the monomial is absent).
    pub fn without_term(&self, m: &Monomial) -> Poly {
        let mut terms = self.terms.clone();
        terms.remove(m);
        Poly {
            space: self.space.clone(),
            terms,
        }
    }

    /// Sets the listed variables to zero (drops every term containing one).
    pub fn set_zero(&self, vars: &[VarId]) -> Poly {
        let mut mask = vec![false; self.space.n_vars()];
        for v in vars {
            mask[v.idx()] = true;
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| !m.support().any(|v| mask[v.idx()]))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly {
            space: self.space.clone(),
            terms,
        }
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.terms == other.terms
    }
}

impl Eq for Poly {}

macro_rules! binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$imp(rhs)
                    .expect("operands live on different charts; use the try_* APIs to handle this")
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_ref()
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.neg_ref()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms_desc() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = monomial_string(m, &self.space);
            if m.is_unit() {
                write!(f, "{}", coeff_string(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", coeff_string(&abs))?;
            }
        }
        Ok(())
    }
}

/// Canonical text form of a monomial over its chart (`"1"` for the unit).
pub fn monomial_string(m: &Monomial, space: &SpaceRef) -> String {
    if m.is_unit() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    for v in m.support() {
        let e = m.exp(v);
        let name = &space.var(v).name;
        if e == 1 {
            parts.push(name.clone());
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};
    use crate::space::Space;

    fn chart() -> SpaceRef {
        Space::base(&[
            ("x", Parity::Even),
            ("th1", Parity::Odd),
            ("th2", Parity::Odd),
        ])
        .unwrap()
    }

    fn v(s: &SpaceRef, name: &str) -> Poly {
        Poly::var_named(s, name).unwrap()
    }

    #[test]
    fn odd_squares_vanish_in_products() {
        let s = chart();
        let x = v(&s, "x");
        let th1 = v(&s, "th1");
        // (x + th1)(x - th1) = x^2 (cross terms cancel, th1^2 = 0).
        let lhs = (&x + &th1) * (&x - &th1);
        assert_eq!(lhs, x.pow(2));
        assert_eq!(lhs.to_string(), "x^2");
    }

    #[test]
    fn anticommutativity() {
        let s = chart();
        let th1 = v(&s, "th1");
        let th2 = v(&s, "th2");
        assert_eq!(&th1 * &th2, -(&th2 * &th1));
        assert!((&th1 * &th1).is_zero());
    }

    #[test]
    fn left_derivative_sign() {
        let s = chart();
        let th1 = v(&s, "th1");
        let th2 = v(&s, "th2");
        let m = &th1 * &th2;
        // d/dth2 (th1 th2) = -th1 with left derivatives.
        assert_eq!(m.partial_left(s.var_id("th2").unwrap()), -th1.clone());
        // Right derivative gives +th1.
        assert_eq!(m.partial_right(s.var_id("th2").unwrap()), th1.clone());
    }

    #[test]
    fn leibniz_left_derivative() {
        // d(fg) = df g + (-1)^{z f} f dg for z the derivative variable.
        let s = chart();
        let x = v(&s, "x");
        let th1 = v(&s, "th1");
        let th2 = v(&s, "th2");
        let z = s.var_id("th1").unwrap();
        let f = &th1 * &x; // odd
        let g = &th2 * &x; // odd
        let prod = &f * &g;
        let lhs = prod.partial_left(z);
        // sign (-1)^{z~ f~} = -1 since both odd.
        let rhs = &f.partial_left(z) * &g - &f * &g.partial_left(z);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_a_morphism() {
        let s = chart();
        let x = v(&s, "x");
        let th1 = v(&s, "th1");
        let th2 = v(&s, "th2");
        // th1 -> th1 + x*th2 (odd image), x -> x^2.
        let mut images = BTreeMap::new();
        images.insert(s.var_id("th1").unwrap(), &th1 + &(&x * &th2));
        images.insert(s.var_id("x").unwrap(), x.pow(2));
        let f = &(&x * &th1) * &th2; // x th1 th2
        let g = f.substitute(&images).unwrap();
        // x^2 (th1 + x th2) th2 = x^2 th1 th2.
        let expect = &x.pow(2) * &(&th1 * &th2);
        assert_eq!(g, expect);
        // Parity-violating image is rejected.
        let mut bad = BTreeMap::new();
        bad.insert(s.var_id("th1").unwrap(), x.clone());
        assert!(f.substitute(&bad).is_err());
    }

    #[test]
    fn display_ordering_and_signs() {
        let s = chart();
        let x = v(&s, "x");
        let th1 = v(&s, "th1");
        let p = &x.pow(2).scale(&qi(2)) + &(&x * &th1).scale(&q(-1, 2));
        // Degree 2 both; x^2 before x*th1 (reverse lex), th1 printed after x.
        assert_eq!(p.to_string(), "2*x^2 - 1/2*x*th1");
        assert_eq!(Poly::zero(&s).to_string(), "0");
        assert_eq!((-Poly::one(&s)).to_string(), "-1");
    }

    #[test]
    fn lift_and_lower() {
        let s = chart();
        let t = Space::cotangent(&s).unwrap();
        let f = v(&s, "x") * v(&s, "th1");
        let lifted = f.lift_to(&t).unwrap();
        assert_eq!(lifted.space().n_vars(), 6);
        let back = lifted.lower_to(&s).unwrap();
        assert_eq!(back, f);
        let p = Poly::var_named(&t, "p_x").unwrap();
        assert!(p.lower_to(&s).is_err());
    }
}
