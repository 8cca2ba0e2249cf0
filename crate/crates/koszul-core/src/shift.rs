//! Argument shifts of master Hamiltonians along a quadratic element, master
//! and Yang–Baxter residuals, and the full coboundary construction that turns
//! a homological field on a bundle chart plus an r-element on the dual chart
//! into the Hamiltonian pair of a homotopy bialgebroid.
//!
//! The shift along an even momentum-free generator `r` is the canonical flow
//! substitution `p_a -> p_a + t * d_a r` on every conjugate momentum of the
//! even pairs; it preserves the even bracket exactly, so all identities of
//! the unshifted master transport to the shifted one.

use crate::bracket::poisson_with;
use crate::conventions::SignConventions;
use crate::error::{Error, Result};
use crate::field::{linear_hamiltonian, VectorField};
use crate::parity::Parity;
use crate::poly::{Poly, WeightReport};
use crate::scalar::q;
use crate::space::{PairKind, Provenance, Relabeling, Space, SpaceRef, VarId};
use std::collections::BTreeMap;

/// The conjugate momenta of the even pairs of a chart.
fn even_momenta(space: &SpaceRef) -> Vec<VarId> {
    space
        .pairs()
        .iter()
        .filter(|p| p.kind == PairKind::Even)
        .map(|p| p.momentum)
        .collect()
}

/// Validates and transports the shift generator onto the phase chart:
/// it must be even and free of the even-pair momenta.
fn prepare_generator(phase: &SpaceRef, r: &Poly) -> Result<Poly> {
    let r_hat = if crate::poly::same_space(r.space(), phase) {
        r.clone()
    } else {
        r.lift_to(phase)?
    };
    if r_hat.require_parity("argument-shift generator")? != Parity::Even {
        return Err(Error::ParityMismatch {
            context: "argument-shift generator",
            expected: Parity::Even,
            found: "odd".into(),
        });
    }
    let momenta = even_momenta(phase);
    if r_hat.set_zero(&momenta) != r_hat {
        return Err(Error::invalid(
            "the argument-shift generator must not depend on the conjugate momenta",
        ));
    }
    Ok(r_hat)
}

/// The momentum images of the shift: `p_a -> p_a + scale * d_a r`.
fn shift_images(phase: &SpaceRef, r_hat: &Poly, scale: &Poly) -> Result<BTreeMap<VarId, Poly>> {
    let mut images = BTreeMap::new();
    for pair in phase.pairs() {
        if pair.kind != PairKind::Even {
            continue;
        }
        let dr = r_hat.partial_left(pair.coord);
        let image = Poly::var(phase, pair.momentum).try_add(&scale.try_mul(&dr)?)?;
        images.insert(pair.momentum, image);
    }
    Ok(images)
}

/// Shifts a Hamiltonian along an even momentum-free generator at unit flow
/// time: every even-pair momentum `p_a` is replaced by `p_a + d_a r`. The
/// generator may live on the phase chart or on any prefix chart of it.
pub fn shift(h: &Poly, r: &Poly) -> Result<Poly> {
    let phase = h.space();
    let one = Poly::one(phase);
    shift_scaled(h, r, &one)
}

/// Shifts a Hamiltonian along `scale * r` where `scale` is an even
/// polynomial (typically a formal parameter of the chart), giving the whole
/// flow pencil at once: `p_a -> p_a + scale * d_a r`.
pub fn shift_scaled(h: &Poly, r: &Poly, scale: &Poly) -> Result<Poly> {
    let phase = h.space();
    if !phase.has_even_pairs() {
        return Err(Error::MissingPairs(
            "argument shifts act on even phase-space charts".into(),
        ));
    }
    let r_hat = prepare_generator(phase, r)?;
    let scale_hat = if crate::poly::same_space(scale.space(), phase) {
        scale.clone()
    } else {
        scale.lift_to(phase)?
    };
    if scale_hat.require_parity("argument-shift scale")? != Parity::Even {
        return Err(Error::ParityMismatch {
            context: "argument-shift scale",
            expected: Parity::Even,
            found: "odd".into(),
        });
    }
    let images = shift_images(phase, &r_hat, &scale_hat)?;
    h.substitute(&images)
}

/// The master-equation residual of a Hamiltonian at a generator: the full
/// substitution `p_a -> d_a r` (the value of `H` on the graph of `dr`),
/// returned momentum-free on the phase chart. For a Hamiltonian quadratic in
/// the momenta this equals half the iterated self-bracket `1/2 ((H,r),r)`;
/// it vanishes exactly when the shifted zero section stays Lagrangian for
/// `H`.
pub fn master_equation_residual(h: &Poly, r: &Poly) -> Result<Poly> {
    let phase = h.space();
    if !phase.has_even_pairs() {
        return Err(Error::MissingPairs(
            "master-equation residuals need an even phase-space chart".into(),
        ));
    }
    let r_hat = prepare_generator(phase, r)?;
    let mut images = BTreeMap::new();
    for pair in phase.pairs() {
        if pair.kind != PairKind::Even {
            continue;
        }
        images.insert(pair.momentum, r_hat.partial_left(pair.coord));
    }
    h.substitute(&images)
}

/// The generalized Yang–Baxter residual: the even bracket of the Hamiltonian
/// with its own master-equation residual, `(H, H(dr))`, on the phase chart.
/// Vanishing of this residual (with a nonzero master residual) is the
/// quasi-triangularity condition: the master anomaly is then invariant and
/// the shifted structure still squares to zero.
pub fn generalized_ybe_residual(h: &Poly, r: &Poly) -> Result<Poly> {
    generalized_ybe_residual_with(h, r, &SignConventions::default())
}

pub fn generalized_ybe_residual_with(
    h: &Poly,
    r: &Poly,
    conv: &SignConventions,
) -> Result<Poly> {
    let master = master_equation_residual(h, r)?;
    poisson_with(h, &master, conv)
}

/// How an r-element sits relative to the master and Yang–Baxter equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RMatrixClass {
    /// The master residual vanishes: the shift preserves the zero section.
    Triangular,
    /// The master residual is nonzero but invariant (zero Yang–Baxter
    /// residual): the shifted pair is still a compatible structure.
    QuasiTriangular,
    /// Both residuals are nonzero: the shift leaves a curved structure.
    Curved,
}

impl std::fmt::Display for RMatrixClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RMatrixClass::Triangular => "triangular",
            RMatrixClass::QuasiTriangular => "quasi-triangular",
            RMatrixClass::Curved => "curved",
        };
        f.write_str(s)
    }
}

pub fn classify(master_residual: &Poly, ybe_residual: &Poly) -> RMatrixClass {
    if master_residual.is_zero() {
        RMatrixClass::Triangular
    } else if ybe_residual.is_zero() {
        RMatrixClass::QuasiTriangular
    } else {
        RMatrixClass::Curved
    }
}

/// Weight homogeneity of the three Hamiltonian ingredients of the coboundary
/// construction, measured in the bigrading of the dual-side phase chart
/// (base/dual-fiber degree, momentum degree).
#[derive(Debug, Clone)]
pub struct CoboundaryWeights {
    pub master: WeightReport,
    pub generator: WeightReport,
    pub cobracket: WeightReport,
}

/// Everything the coboundary (argument-shift) construction produces from a
/// homological field on a bundle chart and an r-element on the dual chart.
#[derive(Debug, Clone)]
pub struct CoboundaryBuild {
    /// The dual-side phase chart (cotangent of the dual fibered chart).
    pub phase: SpaceRef,
    /// The dual fibered chart the r-element lives on.
    pub dual_chart: SpaceRef,
    /// The fiber/momentum exchange identifying the two phase charts.
    pub relabeling: Relabeling,
    /// The master Hamiltonian of the input field, transported to `phase`.
    pub h_master: Poly,
    /// The r-element on `dual_chart`.
    pub r: Poly,
    /// The shifted master Hamiltonian at unit flow time.
    pub shifted: Poly,
    /// The cobracket Hamiltonian `(H, r)` — the second structure of the pair.
    pub cobracket: Poly,
    /// `(H, (H, r))`: obstruction to the two structures being compatible.
    pub compatibility: Poly,
    /// `1/2 (H, H)`: obstruction to the input field being homological.
    pub homological_residual: Poly,
    /// `H(dr)`, lowered to `dual_chart`.
    pub master_residual: Poly,
    /// `(H, H(dr))` on `phase`.
    pub ybe_residual: Poly,
    pub class: RMatrixClass,
    pub weights: CoboundaryWeights,
}

/// Runs the coboundary construction: lifts the field to its master
/// Hamiltonian, transports it through the fiber/momentum exchange to the
/// dual-side phase chart, builds the r-element there via the callback, and
/// assembles the shifted Hamiltonian, the cobracket Hamiltonian, and all
/// residuals.
pub fn build_coboundary(
    q_e: &VectorField,
    r_builder: impl FnOnce(&SpaceRef) -> Result<Poly>,
    conv: &SignConventions,
) -> Result<CoboundaryBuild> {
    let (primal_phase, h_primal) = linear_hamiltonian(q_e)?;
    let relabeling = Space::mx_transform_with(&primal_phase, conv)?;
    let phase = relabeling.dst.clone();
    let dual_chart = match phase.provenance() {
        Provenance::Cotangent(p) => p.clone(),
        _ => {
            return Err(Error::internal(
                "the fiber/momentum exchange of a cotangent chart must be a cotangent chart",
            ))
        }
    };
    let h_master = h_primal.apply_relabeling(&relabeling)?;
    let r = r_builder(&dual_chart)?;
    if !crate::poly::same_space(r.space(), &dual_chart) {
        return Err(Error::ChartMismatch(format!(
            "the r-element must live on the dual chart {}",
            dual_chart
        )));
    }
    let r_hat = prepare_generator(&phase, &r)?;
    let shifted = shift(&h_master, &r_hat)?;
    let cobracket = poisson_with(&h_master, &r_hat, conv)?;
    let compatibility = poisson_with(&h_master, &cobracket, conv)?;
    let homological_residual = poisson_with(&h_master, &h_master, conv)?.scale(&q(1, 2));
    let master_on_phase = master_equation_residual(&h_master, &r_hat)?;
    let ybe_residual = poisson_with(&h_master, &master_on_phase, conv)?;
    let master_residual = master_on_phase.lower_to(&dual_chart)?;
    let class = classify(&master_residual, &ybe_residual);
    let weights = CoboundaryWeights {
        master: h_master.weight_report(),
        generator: r.weight_report(),
        cobracket: cobracket.weight_report(),
    };
    Ok(CoboundaryBuild {
        phase,
        dual_chart,
        relabeling,
        h_master,
        r,
        shifted,
        cobracket,
        compatibility,
        homological_residual,
        master_residual,
        ybe_residual,
        class,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::poisson;
    use crate::scalar::qi;

    fn plane_phase() -> (SpaceRef, SpaceRef) {
        let m = Space::base(&[("x1", Parity::Even), ("x2", Parity::Even)]).unwrap();
        let tm = Space::cotangent(&m).unwrap();
        (m, tm)
    }

    /// Shift flows compose additively: shifting by `r1` then `r2` equals
    /// shifting by `r1 + r2`, and the shift preserves the even bracket.
    #[test]
    fn shift_is_an_additive_bracket_preserving_flow() {
        let (m, tm) = plane_phase();
        let x1 = Poly::var_named(&m, "x1").unwrap();
        let x2 = Poly::var_named(&m, "x2").unwrap();
        let p1 = Poly::var_named(&tm, "p_x1").unwrap();
        let p2 = Poly::var_named(&tm, "p_x2").unwrap();
        let h = &p1 * &p2 + Poly::var_named(&tm, "x1").unwrap().pow(2) * &p1;
        let r1 = x1.pow(2).try_mul(&x2).unwrap();
        let r2 = x2.pow(3);
        let once = shift(&shift(&h, &r1).unwrap(), &r2).unwrap();
        let both = shift(&h, &(&r1 + &r2)).unwrap();
        assert_eq!(once, both);

        // Bracket preservation on an instance pair.
        let f = &p1 * &Poly::var_named(&tm, "x2").unwrap() + p2.pow(2);
        let g = &p2 * &Poly::var_named(&tm, "x1").unwrap();
        let lhs = shift(&poisson(&f, &g).unwrap(), &r1).unwrap();
        let rhs = poisson(&shift(&f, &r1).unwrap(), &shift(&g, &r1).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    /// The pencil of a momentum-quadratic Hamiltonian terminates at order
    /// two: `H_t = H + t (H,r) + t^2 H(dr)` with a formal parameter `t`.
    #[test]
    fn quadratic_pencil_expansion() {
        let (m, tm) = plane_phase();
        let ext = Space::with_parameters(&tm, &[("t", Parity::Even)]).unwrap();
        let t = Poly::var_named(&ext, "t").unwrap();
        let p1 = Poly::var_named(&ext, "p_x1").unwrap();
        let p2 = Poly::var_named(&ext, "p_x2").unwrap();
        let h = &p1 * &p2;
        let r = Poly::var_named(&m, "x1")
            .unwrap()
            .pow(2)
            .try_mul(&Poly::var_named(&m, "x2").unwrap())
            .unwrap();
        let pencil = shift_scaled(&h, &r, &t).unwrap();
        let linear = poisson(&h, &r.lift_to(&ext).unwrap()).unwrap();
        let master = master_equation_residual(&h, &r).unwrap();
        let expect = &(&h + &t.try_mul(&linear).unwrap()) + &t.pow(2).try_mul(&master).unwrap();
        assert_eq!(pencil, expect);
        // For a momentum-quadratic Hamiltonian the master residual is half
        // the iterated bracket.
        let iterated = poisson(&linear, &r.lift_to(&ext).unwrap()).unwrap();
        assert_eq!(master.scale(&qi(2)), iterated);
    }

    /// Shifting the odd-pair master Hamiltonian by a multivector reproduces
    /// the twisted master `D + (D, P)` exactly (the master is linear in the
    /// momenta, so the flow terminates at first order).
    #[test]
    fn shifting_the_canonical_master_adds_the_derived_term() {
        let conv = SignConventions::pinned();
        let m = Space::base(&[("x1", Parity::Even), ("x2", Parity::Even)]).unwrap();
        let am = Space::anticotangent(&m).unwrap();
        let (phase, d) = crate::bracket::odd_master(&am, &conv).unwrap();
        let st1 = Poly::var_named(&am, "st_x1").unwrap();
        let st2 = Poly::var_named(&am, "st_x2").unwrap();
        let x1 = Poly::var_named(&am, "x1").unwrap();
        let p = (st2 * st1).try_mul(&x1).unwrap();
        let shifted = shift(&d, &p).unwrap();
        let derived = poisson_with(&d, &p.lift_to(&phase).unwrap(), &conv).unwrap();
        assert_eq!(shifted, d.try_add(&derived).unwrap());
        assert!(!derived.is_zero());
    }

    /// The full coboundary construction on the two-dimensional nonabelian
    /// Lie algebra `{e1,e2} = e2` with `r = e1 ^ e2`: the cobracket
    /// Hamiltonian encodes `delta(e1) = e1 ^ e2`, `delta(e2) = 0`, the
    /// element is triangular (no room for a cubic anomaly in two
    /// dimensions), and the three weight gradings come out as expected.
    #[test]
    fn coboundary_construction_on_the_nonabelian_plane() {
        let conv = SignConventions::pinned();
        let point = Space::base(&[]).unwrap();
        let pg = Space::vector_bundle(
            &point,
            &[("xi1", Parity::Odd), ("xi2", Parity::Odd)],
        )
        .unwrap();
        let xi1 = pg.var_id("xi1").unwrap();
        let xi2 = pg.var_id("xi2").unwrap();
        let c = Poly::var(&pg, xi2) * Poly::var(&pg, xi1);
        let q_e = VectorField::new(&pg, Parity::Odd, vec![(xi2, c)]).unwrap();

        let build = build_coboundary(
            &q_e,
            |dual| {
                let eta1 = Poly::var_named(dual, "eta1")?;
                let eta2 = Poly::var_named(dual, "eta2")?;
                Ok(eta2 * eta1)
            },
            &conv,
        )
        .unwrap();

        // The transported master is quadratic in the dual momenta.
        let pi1 = Poly::var_named(&build.phase, "pi_eta1").unwrap();
        let pi2 = Poly::var_named(&build.phase, "pi_eta2").unwrap();
        let eta2 = Poly::var_named(&build.phase, "eta2").unwrap();
        let expect_h = (&pi2 * &pi1) * &eta2;
        assert_eq!(build.h_master, expect_h);

        // Cobracket Hamiltonian: delta(e1) = e1 ^ e2, delta(e2) = 0.
        let eta1 = Poly::var_named(&build.phase, "eta1").unwrap();
        let expect_cb = (&eta2 * &eta1) * &pi1;
        assert_eq!(build.cobracket, expect_cb);

        // The input field is homological and the two structures are
        // automatically compatible.
        assert!(build.homological_residual.is_zero());
        assert!(build.compatibility.is_zero());

        // Triangular: the master residual has nowhere to live.
        assert!(build.master_residual.is_zero());
        assert!(build.ybe_residual.is_zero());
        assert_eq!(build.class, RMatrixClass::Triangular);

        // Decomposition of the shifted Hamiltonian (quadratic master).
        let expect_shifted = build.h_master.try_add(&build.cobracket).unwrap();
        assert_eq!(build.shifted, expect_shifted);

        // Weight triple.
        assert_eq!(build.weights.master, WeightReport::Homogeneous((1, 2)));
        assert_eq!(build.weights.generator, WeightReport::Homogeneous((2, 0)));
        assert_eq!(build.weights.cobracket, WeightReport::Homogeneous((2, 1)));

        // Round trip of the identification.
        let back = build
            .h_master
            .apply_relabeling(&build.relabeling.inverse())
            .unwrap();
        let (_, h_primal) = linear_hamiltonian(&q_e).unwrap();
        assert_eq!(back, h_primal);
    }

    /// Odd generators are rejected as shift directions.
    #[test]
    fn odd_generators_are_rejected() {
        let m = Space::base(&[("x", Parity::Even), ("th", Parity::Odd)]).unwrap();
        let tm = Space::cotangent(&m).unwrap();
        let h = Poly::var_named(&tm, "p_x").unwrap().pow(2);
        let th = Poly::var_named(&m, "th").unwrap();
        let err = shift(&h, &th).unwrap_err();
        assert!(matches!(err, Error::ParityMismatch { .. }));
    }
}
