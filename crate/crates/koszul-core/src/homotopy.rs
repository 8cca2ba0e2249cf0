//! Higher derived bracket families, homotopy structure extraction and
//! encoding, generalized Jacobi residuals, odd-map morphisms and adjoints,
//! and anchored algebra (algebroid) operations.
//!
//! Higher bracket family conventions:
//!
//! * from an odd master Hamiltonian `H` on an even phase space:
//!   `{f1,...,fk}_H = (...(H,f1),...,fk)` restricted to zero momenta — no
//!   extra sign;
//! * from an even master function `P` on an odd phase space:
//!   `{f1,...,fk}_P = [[...[[P,f1]],...,fk]]` restricted to zero
//!   antimomenta, iterating the antisymmetric odd bracket. Under this
//!   normalization the binary bracket of a bivector is the classical one
//!   (`{x^a,x^b}_P = P^{ab}`) and the form brackets of the anchor image
//!   satisfy, uniformly in arities and argument parities,
//!   `[f1, df2, ..., dfl]_P = -{f1,...,fl}_P` and
//!   `[df1, ..., dfl]_P = d{f1,...,fl}_P`.

use std::collections::BTreeMap;

use crate::bracket::{poisson_with, schouten_with};
use crate::conventions::SignConventions;
use crate::error::{Error, Result};
use crate::field::{commutator, VectorField};
use crate::parity::Parity;
use crate::poly::{same_space, ParityReport, Poly};
use crate::scalar::Coeff;
use crate::space::{Role, SpaceRef, VarId};

// ---------------------------------------------------------------------
// Higher bracket families from master Hamiltonians.
// ---------------------------------------------------------------------

/// Transports base-chart functions onto a phase chart built over the base.
fn lift_args<'a>(args: &'a [&'a Poly], phase: &SpaceRef) -> Result<Vec<Poly>> {
    args.iter().map(|f| f.lift_to(phase)).collect()
}

/// Lowers a momentum-free phase-chart function back to the base chart by
/// dropping the momentum variables.
fn drop_momenta(p: &Poly, base: &SpaceRef) -> Result<Poly> {
    p.set_zero(&p.space().momenta()).lower_to(base)
}

/// Higher bracket of base functions generated by an odd master Hamiltonian
/// on an even phase space: iterate the even bracket and restrict to zero
/// momenta. The `args` live on the phase chart's parent.
pub fn higher_schouten(h: &Poly, args: &[&Poly]) -> Result<Poly> {
    higher_schouten_with(h, args, &SignConventions::default())
}

pub fn higher_schouten_with(h: &Poly, args: &[&Poly], conv: &SignConventions) -> Result<Poly> {
    let phase = h.space();
    if !phase.has_even_pairs() {
        return Err(Error::MissingPairs(
            "higher brackets from an odd master need an even phase space".into(),
        ));
    }
    let base = argument_chart(phase, args)?;
    let lifted = lift_args(args, phase)?;
    let mut acc = h.clone();
    for a in &lifted {
        acc = poisson_with(&acc, a, conv)?;
        if acc.is_zero() {
            break;
        }
    }
    drop_momenta(&acc, &base)
}

/// Higher bracket of base functions generated by an even master function on
/// an odd phase space: iterate the antisymmetric odd bracket and restrict to
/// zero antimomenta.
pub fn higher_poisson(p: &Poly, args: &[&Poly]) -> Result<Poly> {
    higher_poisson_with(p, args, &SignConventions::default())
}

pub fn higher_poisson_with(p: &Poly, args: &[&Poly], conv: &SignConventions) -> Result<Poly> {
    let phase = p.space();
    if !phase.has_odd_pairs() {
        return Err(Error::MissingPairs(
            "higher brackets from an even master need an odd phase space".into(),
        ));
    }
    let base = argument_chart(phase, args)?;
    let lifted = lift_args(args, phase)?;
    let mut acc = p.clone();
    for a in &lifted {
        acc = schouten_with(&acc, a, conv)?;
        if acc.is_zero() {
            break;
        }
    }
    let anti: Vec<VarId> = phase.momenta();
    acc.set_zero(&anti).lower_to(&base)
}

/// Dispatches on the chart's pair kind: odd master on an even phase space or
/// even master on an odd phase space. The master's parity is validated.
pub fn higher_derived(master: &Poly, args: &[&Poly]) -> Result<Poly> {
    higher_derived_with(master, args, &SignConventions::default())
}

pub fn higher_derived_with(master: &Poly, args: &[&Poly], conv: &SignConventions) -> Result<Poly> {
    let space = master.space();
    if space.has_even_pairs() {
        match master.parity_report() {
            ParityReport::Zero | ParityReport::Homogeneous(Parity::Odd) => {}
            _ => {
                return Err(Error::ParityMismatch {
                    context: "higher derived brackets",
                    expected: Parity::Odd,
                    found: "the master on an even phase space must be odd".into(),
                })
            }
        }
        higher_schouten_with(master, args, conv)
    } else if space.has_odd_pairs() {
        match master.parity_report() {
            ParityReport::Zero | ParityReport::Homogeneous(Parity::Even) => {}
            _ => {
                return Err(Error::ParityMismatch {
                    context: "higher derived brackets",
                    expected: Parity::Even,
                    found: "the master on an odd phase space must be even".into(),
                })
            }
        }
        higher_poisson_with(master, args, conv)
    } else {
        Err(Error::MissingPairs(
            "higher derived brackets need a phase-space chart".into(),
        ))
    }
}

/// The chart the bracket arguments live on and the result is returned on:
/// the first argument's chart (each argument is transported to the phase
/// chart by prefix extension, which validates compatibility), or the phase
/// chart's parent for the nullary bracket.
fn argument_chart(phase: &SpaceRef, args: &[&Poly]) -> Result<SpaceRef> {
    if let Some(first) = args.first() {
        return Ok(first.space().clone());
    }
    match phase.provenance() {
        crate::space::Provenance::Cotangent(p)
        | crate::space::Provenance::Anticotangent(p) => Ok(p.clone()),
        _ => Err(Error::WrongProvenance(
            "nullary higher brackets need a chart built by a phase-space construction".into(),
        )),
    }
}

// ---------------------------------------------------------------------
// Homotopy structure extraction from a homological field.
// ---------------------------------------------------------------------

/// The tower of multibrackets read off from an odd vector field on a chart
/// of generators: for generator indices `t = (i1,...,iN)`,
/// `bracket(t) = [[...[Q, d/dxi_{i1}], ...], d/dxi_{iN}]` with all
/// generators set to zero in the coefficients. The arity-0 entry is the
/// curvature `Q(0)`.
#[derive(Debug, Clone)]
pub struct HomotopyStructure {
    space: SpaceRef,
    gens: Vec<VarId>,
    max_arity: usize,
    /// Keyed by ascending-sorted generator-position tuples.
    brackets: BTreeMap<Vec<usize>, VectorField>,
}

/// Iterates `[[Q, E_{i1}], ...]` for the generator positions in `tuple`
/// (order as given) and sets the generators to zero at the end.
fn iterated_insertion(
    q: &VectorField,
    gens: &[VarId],
    tuple: &[usize],
) -> Result<VectorField> {
    let space = q.space().clone();
    let mut acc = q.clone();
    for &pos in tuple {
        let e = VectorField::coordinate(&space, gens[pos])?;
        acc = commutator(&acc, &e)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc.set_zero(gens))
}

/// Same but the first inserted object is an arbitrary field, not a basis
/// generator (needed by the generalized Jacobi residual).
fn iterated_insertion_after(
    q: &VectorField,
    first: &VectorField,
    gens: &[VarId],
    rest: &[usize],
) -> Result<VectorField> {
    let space = q.space().clone();
    let mut acc = commutator(q, first)?;
    for &pos in rest {
        let e = VectorField::coordinate(&space, gens[pos])?;
        acc = commutator(&acc, &e)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc.set_zero(gens))
}

impl HomotopyStructure {
    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn gens(&self) -> &[VarId] {
        &self.gens
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    /// All stored multibrackets (sorted tuples only).
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &VectorField)> {
        self.brackets.iter()
    }

    /// The multibracket on an arbitrary tuple of generator positions: the
    /// tuple is sorted with the Koszul sign of the permutation (repeated odd
    /// generators give zero).
    pub fn bracket(&self, tuple: &[usize]) -> Result<VectorField> {
        let (sorted, sign) = match sort_with_koszul_sign(tuple, |pos| {
            self.space.var(self.gens[pos]).parity
        }) {
            Some(x) => x,
            None => return Ok(VectorField::zero(&self.space, Parity::Even)),
        };
        let field = self
            .brackets
            .get(&sorted)
            .cloned()
            .unwrap_or_else(|| VectorField::zero(&self.space, Parity::Odd));
        Ok(if sign < 0 { field.neg() } else { field })
    }
}

/// Sorts generator positions ascending, returning the Koszul sign of the
/// reordering (`None` when two equal positions with odd parity collide).
fn sort_with_koszul_sign(
    tuple: &[usize],
    parity_of: impl Fn(usize) -> Parity,
) -> Option<(Vec<usize>, i8)> {
    let mut v: Vec<usize> = tuple.to_vec();
    let mut sign = 1i8;
    // Insertion sort, counting odd-odd transpositions.
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            if parity_of(v[j - 1]).is_odd() && parity_of(v[j]).is_odd() {
                sign = -sign;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] && parity_of(w[0]).is_odd() {
            return None;
        }
    }
    Some((v, sign))
}

/// Reads the multibracket tower of an odd field off by iterated insertions,
/// for all arities `0..=max_arity` over the listed generators.
pub fn extract_structure(
    q: &VectorField,
    gens: &[VarId],
    max_arity: usize,
) -> Result<HomotopyStructure> {
    if q.parity() != Parity::Odd {
        return Err(Error::ParityMismatch {
            context: "homotopy structure extraction",
            expected: Parity::Odd,
            found: q.parity().to_string(),
        });
    }
    let mut brackets = BTreeMap::new();
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(tuple) = stack.pop() {
        let val = iterated_insertion(q, gens, &tuple)?;
        if !val.is_zero() {
            brackets.insert(tuple.clone(), val);
        }
        if tuple.len() < max_arity {
            let start = tuple.last().copied().unwrap_or(0);
            for next in start..gens.len() {
                if tuple.last() == Some(&next)
                    && q.space().var(gens[next]).parity.is_odd()
                {
                    continue; // repeated odd generator: identically zero
                }
                let mut t = tuple.clone();
                t.push(next);
                stack.push(t);
            }
        }
    }
    Ok(HomotopyStructure {
        space: q.space().clone(),
        gens: gens.to_vec(),
        max_arity,
        brackets,
    })
}

/// Rebuilds an odd field whose extracted tower matches the given one. The
/// coefficient of each monomial block is fixed by self-calibration: for every
/// sorted tuple the field term built from that tuple extracts to a nonzero
/// rational multiple of the target, and distinct sorted tuples extract to
/// disjoint monomial blocks.
pub fn encode_structure(structure: &HomotopyStructure) -> Result<VectorField> {
    let space = &structure.space;
    let gens = &structure.gens;
    let mut q = VectorField::zero(space, Parity::Odd);
    for (tuple, target) in structure.entries() {
        // Candidate term: xi_{iN} * ... * xi_{i1} * target-coefficient.
        let mut prefix = Poly::one(space);
        for &pos in tuple.iter().rev() {
            prefix = prefix.try_mul(&Poly::var(space, gens[pos]))?;
        }
        let mut coeffs = Vec::new();
        for (&v, c) in target.coeffs() {
            coeffs.push((v, prefix.try_mul(c)?));
        }
        let candidate = VectorField::new(space, Parity::Odd, coeffs)?;
        // Calibrate: extraction of this tuple from the candidate is a
        // rational multiple lambda of the target.
        let extracted = iterated_insertion(&candidate, gens, tuple)?;
        let lambda = calibration_ratio(&extracted, target)?;
        q = q.try_add(&candidate.scale(&(Coeff::from_integer(1.into()) / lambda)))?;
    }
    Ok(q)
}

/// The scalar `lambda` with `extracted = lambda * target` (both nonzero).
fn calibration_ratio(extracted: &VectorField, target: &VectorField) -> Result<Coeff> {
    for (&v, c) in target.coeffs() {
        let e = extracted.coeff(v);
        let (m, tc) = match c.terms().next() {
            Some(x) => x,
            None => continue,
        };
        let ec = e.coeff(m);
        if num::Zero::is_zero(&ec) {
            return Err(Error::internal(
                "homotopy encoding calibration found a vanishing ratio".to_string(),
            ));
        }
        let lambda = ec / tc.clone();
        // Validate proportionality exactly.
        if extracted != &target.scale(&lambda) {
            return Err(Error::internal(
                "homotopy encoding calibration is not proportional".to_string(),
            ));
        }
        return Ok(lambda);
    }
    Err(Error::internal(
        "homotopy encoding calibration with a zero target".to_string(),
    ))
}

/// The `N`-th generalized Jacobi residual of an odd field at a tuple of
/// generator positions:
///
/// ```text
/// J(v_1..v_N) = sum_{k=0..N} sum_{(k,N-k)-shuffles s} eps(s)
///               {{v_{s1}..v_{sk}}, v_{s(k+1)}..v_{sN}}
/// ```
///
/// where the inner bracket value is re-inserted as the first argument of the
/// outer bracket and `eps` is the Koszul sign of the shuffle. All residuals
/// up to the structure's arity vanish exactly when `[Q,Q] = 0` contributes no
/// terms of these arities.
pub fn generalized_jacobi_residual(
    q: &VectorField,
    gens: &[VarId],
    tuple: &[usize],
) -> Result<VectorField> {
    let n = tuple.len();
    let parities: Vec<Parity> = tuple
        .iter()
        .map(|&pos| q.space().var(gens[pos]).parity)
        .collect();
    let mut residual = VectorField::zero(q.space(), Parity::Even);
    for k in 0..=n {
        for (head, tail, sign) in shuffles(n, k, &parities) {
            let head_tuple: Vec<usize> = head.iter().map(|&i| tuple[i]).collect();
            let tail_tuple: Vec<usize> = tail.iter().map(|&i| tuple[i]).collect();
            let inner = iterated_insertion(q, gens, &head_tuple)?;
            if inner.is_zero() {
                continue;
            }
            let outer = iterated_insertion_after(q, &inner, gens, &tail_tuple)?;
            let term = if sign < 0 { outer.neg() } else { outer };
            if residual.is_zero() {
                residual = term;
            } else if !term.is_zero() {
                residual = residual.try_add(&term)?;
            }
        }
    }
    Ok(residual)
}

/// All `(k, n-k)` shuffles of `0..n` with their Koszul signs for the given
/// argument parities: index sets `head` (ascending, size k) and `tail`
/// (ascending), and the sign of reordering `(v_0..v_{n-1})` into
/// `(v_head.., v_tail..)`.
fn shuffles(n: usize, k: usize, parities: &[Parity]) -> Vec<(Vec<usize>, Vec<usize>, i8)> {
    let mut out = Vec::new();
    let mut head = Vec::new();
    fn rec(
        start: usize,
        n: usize,
        k: usize,
        head: &mut Vec<usize>,
        parities: &[Parity],
        out: &mut Vec<(Vec<usize>, Vec<usize>, i8)>,
    ) {
        if head.len() == k {
            let tail: Vec<usize> = (0..n).filter(|i| !head.contains(i)).collect();
            // Koszul sign: for each pair (i in tail, j in head) with i < j,
            // v_j crosses v_i; count odd-odd crossings.
            let mut sign = 1i8;
            for &j in head.iter() {
                if !parities[j].is_odd() {
                    continue;
                }
                for &i in tail.iter() {
                    if i < j && parities[i].is_odd() {
                        sign = -sign;
                    }
                }
            }
            out.push((head.clone(), tail, sign));
            return;
        }
        let remaining = k - head.len();
        for i in start..=(n - remaining) {
            head.push(i);
            rec(i + 1, n, k, head, parities, out);
            head.pop();
        }
    }
    if k == 0 {
        out.push((Vec::new(), (0..n).collect(), 1));
        return out;
    }
    rec(0, n, k, &mut head, parities, &mut out);
    out
}

// ---------------------------------------------------------------------
// Morphisms and adjoints of odd fields.
// ---------------------------------------------------------------------

/// Residuals of the chain condition for a map of charts carrying odd fields:
/// for the pullback assignment `target generator mu -> expression in source
/// generators`, the residual per target generator is
/// `Q1(expr_mu) - Q2^mu(expr)`. All residuals vanish exactly when the map
/// intertwines the two fields.
pub fn morphism_residuals(
    q1: &VectorField,
    q2: &VectorField,
    pullback: &BTreeMap<VarId, Poly>,
) -> Result<Vec<(VarId, Poly)>> {
    let src = q1.space();
    let dst = q2.space();
    // Build the morphism images for transporting Q2's coefficients.
    let mut images = BTreeMap::new();
    for v in dst.var_ids() {
        match pullback.get(&v) {
            Some(p) => {
                if !same_space(p.space(), src) {
                    return Err(Error::ChartMismatch(format!(
                        "pullback image of {} lives on {}",
                        dst.var(v).name,
                        p.space()
                    )));
                }
                images.insert(v, p.clone());
            }
            None => {
                // Unmapped target variables must not occur in Q2.
                if !q2.coeff(v).is_zero() {
                    return Err(Error::invalid(format!(
                        "pullback lacks an image for {} which the target field uses",
                        dst.var(v).name
                    )));
                }
            }
        }
    }
    let mut out = Vec::new();
    for (&v, expr) in pullback {
        let lhs = q1.apply(expr)?;
        let rhs = q2.coeff(v).morphism_to(src, &images)?;
        out.push((v, lhs.try_sub(&rhs)?));
    }
    Ok(out)
}

/// The adjoint-shift difference of an odd field along a formal displacement
/// of the generators: for images `xi^k -> xi^k + eta^k` (the `eta` built from
/// parameters on the same chart), returns `Q_eta - Q - Q(eta)` where `Q_eta`
/// substitutes the displacement into every coefficient and `Q(eta)` is the
/// generator-free part of `Q_eta`. For a quadratic field the result is the
/// linear field of the adjoint action of `eta`.
pub fn adjoint_difference(
    q: &VectorField,
    displacement: &BTreeMap<VarId, Poly>,
) -> Result<VectorField> {
    let space = q.space();
    let mut images = BTreeMap::new();
    for (&v, eta) in displacement {
        if !same_space(eta.space(), space) {
            return Err(Error::ChartMismatch(format!(
                "displacement of {} lives on {}",
                space.var(v).name,
                eta.space()
            )));
        }
        images.insert(v, Poly::var(space, v).try_add(eta)?);
    }
    let gens: Vec<VarId> = displacement.keys().copied().collect();
    let mut shifted_coeffs = Vec::new();
    let mut constant_coeffs = Vec::new();
    let mut minus_q = Vec::new();
    for (&v, c) in q.coeffs() {
        let shifted = c.substitute(&images)?;
        let constant = shifted.set_zero(&gens);
        shifted_coeffs.push((v, shifted));
        constant_coeffs.push((v, -constant));
        minus_q.push((v, -c.clone()));
    }
    let q_shifted = VectorField::new(space, q.parity(), shifted_coeffs)?;
    let q_neg = VectorField::new(space, q.parity(), minus_q)?;
    let q_const_neg = VectorField::new(space, q.parity(), constant_coeffs)?;
    q_shifted.try_add(&q_neg)?.try_add(&q_const_neg)
}

// ---------------------------------------------------------------------
// Anchored algebra operations from a homological field on a bundle chart.
// ---------------------------------------------------------------------

/// A section of the underlying bundle, given by its components along the
/// fiber coordinates (component of `xi^i` has parity
/// `parity(section) + parity(xi^i) + 1`).
#[derive(Debug, Clone)]
pub struct Section {
    pub parity: Parity,
    pub comps: BTreeMap<VarId, Poly>,
}

impl Section {
    pub fn new(
        space: &SpaceRef,
        parity: Parity,
        comps: impl IntoIterator<Item = (VarId, Poly)>,
    ) -> Result<Section> {
        let mut map = BTreeMap::new();
        for (v, c) in comps {
            if !matches!(space.var(v).role, Role::Fiber) {
                return Err(Error::invalid(format!(
                    "section components must target fiber coordinates; {} is not one",
                    space.var(v).name
                )));
            }
            let want = parity + space.var(v).parity + Parity::Odd;
            match c.parity_report() {
                ParityReport::Zero => continue,
                ParityReport::Homogeneous(p) if p == want => {}
                _ => {
                    return Err(Error::ParityMismatch {
                        context: "section component",
                        expected: want,
                        found: format!("component along {}", space.var(v).name),
                    })
                }
            }
            if !c.is_zero() {
                map.insert(v, c);
            }
        }
        Ok(Section {
            parity,
            comps: map,
        })
    }

    /// The interior field of the section: `(-1)^{parity} sum u^i d/dxi^i`.
    pub fn interior(&self, space: &SpaceRef) -> Result<VectorField> {
        let mut coeffs = Vec::new();
        for (&v, c) in &self.comps {
            let mut cc = c.clone();
            if self.parity.is_odd() {
                cc = -cc;
            }
            coeffs.push((v, cc));
        }
        // Field parity: component parity + fiber parity = parity + 1.
        VectorField::new(space, self.parity + Parity::Odd, coeffs)
    }
}

/// The anchor of a homological field applied to a section and a function:
/// `a(u) f = [[Q, i_u]](f)`.
pub fn anchor_apply(q: &VectorField, u: &Section, f: &Poly) -> Result<Poly> {
    let field = commutator(q, &u.interior(q.space())?)?;
    field.apply(f)
}

/// The induced bracket of two sections:
/// `i_{[u,v]} = (-1)^{parity(u)} [[Q, i_u], i_v]`, unwrapped back into
/// components (the bracket of sections has parity
/// `parity(u) + parity(v)`).
pub fn section_bracket(q: &VectorField, u: &Section, v: &Section) -> Result<Section> {
    let space = q.space();
    let iu = u.interior(space)?;
    let iv = v.interior(space)?;
    let mut field = commutator(&commutator(q, &iu)?, &iv)?;
    if u.parity.is_odd() {
        field = field.neg();
    }
    let parity = u.parity + v.parity;
    let mut comps = BTreeMap::new();
    for (&w, c) in field.coeffs() {
        if !matches!(space.var(w).role, Role::Fiber) {
            return Err(Error::invalid(format!(
                "the induced section bracket leaks outside the fibers (component along {}); \
                 the field is not an anchored-algebra structure",
                space.var(w).name
            )));
        }
        let mut cc = c.clone();
        if parity.is_odd() {
            cc = -cc;
        }
        comps.insert(w, cc);
    }
    Section::new(space, parity, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;
    use crate::space::Space;

    /// A 3-generator odd chart with the rotation-algebra field reproduces its
    /// structure constants.
    #[test]
    fn extract_rotation_algebra() {
        let point = Space::base(&[]).unwrap();
        let g = Space::vector_bundle(
            &point,
            &[("xi1", Parity::Odd), ("xi2", Parity::Odd), ("xi3", Parity::Odd)],
        )
        .unwrap();
        let xi: Vec<VarId> = (1..=3).map(|i| g.var_id(&format!("xi{i}")).unwrap()).collect();
        let gp = |i: usize| Poly::var(&g, xi[i]);
        // [e_i, e_j] = eps_{ijk} e_k encoded as
        // Q = -1/2 xi^j xi^i eps_{ij}^k d/dxi^k... built directly from the
        // Taylor normal form: Q^k = 1/2 xi^j xi^i c^k_{ij} with c^3_{12}=1,
        // c^1_{23}=1, c^2_{31}=1 (and antisymmetry).
        let q123 = |a: usize, b: usize| {
            let p = gp(b).try_mul(&gp(a)).unwrap();
            p
        };
        // Q^3 = 1/2 (xi2 xi1 c^3_{12} + xi1 xi2 c^3_{21}) = xi2 xi1.
        let coeffs = vec![
            (xi[2], q123(0, 1)),
            (xi[0], q123(1, 2)),
            (xi[1], q123(2, 0)),
        ];
        let qf = VectorField::new(&g, Parity::Odd, coeffs).unwrap();
        let s = extract_structure(&qf, &xi, 3).unwrap();
        // {e_1, e_2} = e_3 etc.
        let b12 = s.bracket(&[0, 1]).unwrap();
        assert_eq!(b12.coeff(xi[2]), Poly::one(&g));
        assert!(b12.coeff(xi[0]).is_zero());
        let b23 = s.bracket(&[1, 2]).unwrap();
        assert_eq!(b23.coeff(xi[0]), Poly::one(&g));
        let b21 = s.bracket(&[1, 0]).unwrap();
        assert_eq!(b21.coeff(xi[2]), -Poly::one(&g));
        // No curvature, no unary part, no ternary part.
        assert!(s.bracket(&[]).unwrap().is_zero());
        assert!(s.bracket(&[0]).unwrap().is_zero());
        assert!(s.bracket(&[0, 1, 2]).unwrap().is_zero());
        // All generalized Jacobi residuals vanish (it is a Lie algebra).
        for t in [vec![0, 1, 2], vec![0, 1], vec![0]] {
            assert!(generalized_jacobi_residual(&qf, &xi, &t).unwrap().is_zero());
        }
        // Round trip through encoding.
        let q2 = encode_structure(&s).unwrap();
        assert_eq!(q2, qf);
    }

    /// Binary higher brackets from quadratic masters on both kinds of phase
    /// space: the odd-master bracket `{f,g}_H` restricted from the even
    /// bracket, and the even-master bracket `{f,g}_P = P^{ab} d_a f d_b g`.
    #[test]
    fn binary_higher_brackets() {
        use crate::bracket::odd_master;
        use crate::space::{Provenance, SpaceRef};
        let conv = SignConventions::pinned();

        // Odd master H = 1/2 p^2 on the line: {x,x}_H = 1.
        let m = Space::base(&[("x", Parity::Even)]).unwrap();
        let tm = Space::cotangent(&m).unwrap();
        let p = Poly::var_named(&tm, "p_x").unwrap();
        let h = p.pow(2).scale(&crate::scalar::q(1, 2));
        let x = Poly::var_named(&m, "x").unwrap();
        let b = higher_schouten_with(&h, &[&x, &x], &conv).unwrap();
        assert_eq!(b, Poly::one(&m));
        // Unary: {x}_H = (H,x)|_{p=0} = p|_{p=0} = 0.
        assert!(higher_schouten_with(&h, &[&x], &conv).unwrap().is_zero());

        // Even master P = 3 st2 st1 on the plane encodes P^{12} = 3; the
        // classical bracket values are {x1,x2}_P = +3, {x2,x1}_P = -3, and
        // the dispatcher agrees.
        let m2 = Space::base(&[("x1", Parity::Even), ("x2", Parity::Even)]).unwrap();
        let am = Space::anticotangent(&m2).unwrap();
        let st1 = Poly::var_named(&am, "st_x1").unwrap();
        let st2 = Poly::var_named(&am, "st_x2").unwrap();
        let pp = (st2 * st1).scale(&qi(3));
        let x1 = Poly::var_named(&m2, "x1").unwrap();
        let x2 = Poly::var_named(&m2, "x2").unwrap();
        let b12 = higher_poisson_with(&pp, &[&x1, &x2], &conv).unwrap();
        assert_eq!(b12, Poly::constant(&m2, qi(3)));
        let b21 = higher_poisson_with(&pp, &[&x2, &x1], &conv).unwrap();
        assert_eq!(b21, Poly::constant(&m2, qi(-3)));
        assert_eq!(higher_derived_with(&pp, &[&x1, &x2], &conv).unwrap(), b12);

        // The nullary bracket of a momentum-free master is its restriction.
        let d_check: (SpaceRef, Poly) = odd_master(&am, &conv).unwrap();
        assert!(matches!(
            d_check.0.provenance(),
            Provenance::Cotangent(_)
        ));
        let nullary = higher_poisson_with(&pp, &[], &conv).unwrap();
        assert!(nullary.is_zero());
    }

    /// A perturbed non-homological field leaves a nonzero residual.
    #[test]
    fn jacobi_residual_detects_non_homological_fields() {
        let point = Space::base(&[]).unwrap();
        let g = Space::vector_bundle(
            &point,
            &[("xi1", Parity::Odd), ("xi2", Parity::Odd), ("xi3", Parity::Odd)],
        )
        .unwrap();
        let xi: Vec<VarId> = (1..=3).map(|i| g.var_id(&format!("xi{i}")).unwrap()).collect();
        // Brackets {e1,e2}=e3, {e1,e3}=e3, {e2,e3}=e1: the (1,2,3)
        // Jacobiator is [[e3,e1],e2] = e1 != 0.
        let c3 = Poly::var(&g, xi[1]) * Poly::var(&g, xi[0])
            + Poly::var(&g, xi[2]) * Poly::var(&g, xi[0]);
        let c1 = Poly::var(&g, xi[2]) * Poly::var(&g, xi[1]);
        let qf = VectorField::new(&g, Parity::Odd, vec![(xi[2], c3), (xi[0], c1)]).unwrap();
        let qq = commutator(&qf, &qf).unwrap();
        assert!(!qq.is_zero());
        let res = generalized_jacobi_residual(&qf, &xi, &[0, 1, 2]).unwrap();
        assert!(!res.is_zero(), "expected a nonzero Jacobi residual");
        assert!(!res.coeff(xi[0]).is_zero());
    }

    /// Morphism residuals on a minimal fixture.
    #[test]
    fn morphism_residuals_fixture() {
        let point = Space::base(&[]).unwrap();
        let s1 = Space::vector_bundle(&point, &[("xi1", Parity::Odd), ("xi2", Parity::Odd)])
            .unwrap();
        let s2 = Space::vector_bundle(&point, &[("eta", Parity::Odd)]).unwrap();
        let xi1 = s1.var_id("xi1").unwrap();
        let xi2 = s1.var_id("xi2").unwrap();
        let eta = s2.var_id("eta").unwrap();
        // Q1 = xi2 xi1 d/dxi1 (the structure of {e1,e2} = e1), Q2 = 0.
        let c = Poly::var(&s1, xi2) * Poly::var(&s1, xi1);
        let q1 = VectorField::new(&s1, Parity::Odd, vec![(xi1, c.clone())]).unwrap();
        let q2 = VectorField::zero(&s2, Parity::Odd);
        // eta -> xi2 is a chain map: Q1(xi2) = 0 = Q2(eta) pulled back.
        let mut pb = BTreeMap::new();
        pb.insert(eta, Poly::var(&s1, xi2));
        let res = morphism_residuals(&q1, &q2, &pb).unwrap();
        assert!(res.iter().all(|(_, p)| p.is_zero()));
        // eta -> xi1 is not: Q1(xi1) = xi2 xi1 != 0.
        let mut pb = BTreeMap::new();
        pb.insert(eta, Poly::var(&s1, xi1));
        let res = morphism_residuals(&q1, &q2, &pb).unwrap();
        assert_eq!(res[0].1, c);
    }

    /// The adjoint difference of a quadratic Lie field is the adjoint action.
    #[test]
    fn adjoint_difference_of_quadratic_field() {
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
        let xi: Vec<VarId> = (1..=3).map(|i| g.var_id(&format!("xi{i}")).unwrap()).collect();
        let h: Vec<VarId> = (1..=3).map(|i| g.var_id(&format!("h{i}")).unwrap()).collect();
        let pv = |v: VarId| Poly::var(&g, v);
        let coeffs = vec![
            (xi[2], pv(xi[1]) * pv(xi[0])),
            (xi[0], pv(xi[2]) * pv(xi[1])),
            (xi[1], pv(xi[0]) * pv(xi[2])),
        ];
        let qf = VectorField::new(&g, Parity::Odd, coeffs).unwrap();
        let mut disp = BTreeMap::new();
        for i in 0..3 {
            disp.insert(xi[i], pv(h[i]));
        }
        let ad = adjoint_difference(&qf, &disp).unwrap();
        // Component along d/dxi3 of ad: from Q^3 = xi2 xi1:
        // (xi2+h2)(xi1+h1) - xi2 xi1 - h2 h1 = xi2 h1 + h2 xi1.
        let expect = pv(xi[1]) * pv(h[0]) + pv(h[1]) * pv(xi[0]);
        assert_eq!(ad.coeff(xi[2]), expect);
    }

    /// Anchored-algebra operations for the de Rham field of a line: sections
    /// of the tangent bundle with anchor the identity and the commutator
    /// bracket.
    #[test]
    fn tangent_algebroid_from_de_rham() {
        let m = Space::base(&[("x", Parity::Even)]).unwrap();
        // Model the shifted tangent chart as a bundle chart so sections can
        // target its fiber.
        let ptm = Space::vector_bundle(&m, &[("dx", Parity::Odd)]).unwrap();
        let x = Poly::var_named(&ptm, "x").unwrap();
        let dx = ptm.var_id("dx").unwrap();
        let xv = ptm.var_id("x").unwrap();
        let qf = VectorField::new(&ptm, Parity::Odd, vec![(xv, Poly::var(&ptm, dx))]).unwrap();
        // u = x d/dx (even section), v = d/dx.
        let u = Section::new(&ptm, Parity::Even, vec![(dx, x.clone())]).unwrap();
        let v = Section::new(&ptm, Parity::Even, vec![(dx, Poly::one(&ptm))]).unwrap();
        // Anchor: a(u) f = x df/dx.
        let f = x.pow(2);
        assert_eq!(anchor_apply(&qf, &u, &f).unwrap(), x.pow(2).scale(&qi(2)));
        // [u, v] = -d/dx (commutator of x d/dx with d/dx).
        let w = section_bracket(&qf, &u, &v).unwrap();
        assert_eq!(w.comps.get(&dx).unwrap(), &-Poly::one(&ptm));
        // Leibniz: [u, f v] = a(u)f * v + (-1)^{u~ f~} f [u, v].
        let fv = Section::new(&ptm, Parity::Even, vec![(dx, f.clone())]).unwrap();
        let lhs = section_bracket(&qf, &u, &fv).unwrap();
        let rhs = &anchor_apply(&qf, &u, &f).unwrap() + &(&f * &-Poly::one(&ptm));
        assert_eq!(lhs.comps.get(&dx).unwrap(), &rhs);
    }
}
