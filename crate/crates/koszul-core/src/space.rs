//! Coordinate charts ("spaces") and the constructions that derive new charts
//! from old ones.
//!
//! A [`Space`] is an ordered list of named, parity-graded variables together
//! with the conjugate-pair structure introduced by the most recent phase-space
//! construction and a provenance record of how the chart was built. The
//! provided constructions are:
//!
//! * [`Space::base`] — a bare chart of base coordinates;
//! * [`Space::vector_bundle`] — append fiber coordinates (a vector bundle
//!   total space; odd fibers model a parity-shifted bundle);
//! * [`Space::cotangent`] — append an even-conjugate momentum for every
//!   existing non-parameter coordinate;
//! * [`Space::anticotangent`] — append an odd-conjugate antimomentum (parity
//!   reversed) for every existing non-parameter coordinate;
//! * [`Space::antitangent`] — append a parity-reversed differential for every
//!   existing non-parameter coordinate (no pairing);
//! * [`Space::with_parameters`] — append inert formal parameters that all
//!   later constructions and brackets skip;
//! * [`Space::mx_transform`] — the fiber/momentum exchange between the
//!   (anti)cotangent of a bundle and the (anti)cotangent of its dual,
//!   returning a signed relabeling of variables.
//!
//! Bi-weights: base coordinates and parameters weigh `(0,0)`; fiber-type
//! coordinates (bundle fibers, differentials, antimomenta) weigh `(1,0)`; a
//! momentum created by [`Space::cotangent`] over a coordinate of weight
//! `(a,b)` weighs `(1-a, 1-b)`, so every even conjugate pair sums to `(1,1)`.

use std::fmt;
use std::sync::Arc;

use crate::conventions::SignConventions;
use crate::error::{Error, Result};
use crate::parity::Parity;

/// Index of a variable within its chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(u32);

impl VarId {
    pub fn new(idx: usize) -> Self {
        VarId(idx as u32)
    }

    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// What kind of coordinate a variable is and, for derived coordinates, which
/// variable it was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// A coordinate of the original base chart.
    Base,
    /// An inert formal parameter: never paired, never differentiated over by
    /// chart-level operators, skipped by all constructions.
    Parameter,
    /// A vector-bundle fiber coordinate.
    Fiber,
    /// The parity-reversed differential of the referenced coordinate.
    Differential(VarId),
    /// The odd-conjugate antimomentum of the referenced coordinate.
    Antimomentum(VarId),
    /// The even-conjugate momentum of the referenced coordinate.
    Momentum(VarId),
}

/// A chart variable: display name, parity, bi-weight and role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub parity: Parity,
    pub weight: (i32, i32),
    pub role: Role,
}

/// Whether a conjugate pair belongs to an even or an odd symplectic structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Even,
    Odd,
}

/// A conjugate coordinate/momentum pair introduced by the most recent
/// phase-space construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pair {
    pub coord: VarId,
    pub momentum: VarId,
    pub kind: PairKind,
}

/// How a chart was built. Parents are shared immutably.
#[derive(Debug, Clone)]
pub enum Provenance {
    Base,
    Cotangent(SpaceRef),
    Anticotangent(SpaceRef),
    Antitangent(SpaceRef),
    Bundle {
        parent: SpaceRef,
        /// When this bundle chart was created as the dual of another bundle
        /// chart, a link back to the original (used to undo the duality).
        dual_of: Option<SpaceRef>,
    },
    Extended(SpaceRef),
}

/// Shared handle to an immutable chart.
pub type SpaceRef = Arc<Space>;

/// An immutable coordinate chart. See the module documentation.
#[derive(Debug)]
pub struct Space {
    vars: Vec<Variable>,
    pairs: Vec<Pair>,
    provenance: Provenance,
}

/// A parity-preserving signed renaming of one chart's variables into
/// another's: variable `i` of `src` maps to `sign * dst-variable`.
#[derive(Debug, Clone)]
pub struct Relabeling {
    pub src: SpaceRef,
    pub dst: SpaceRef,
    /// Indexed by source variable index.
    pub images: Vec<(i8, VarId)>,
}

fn validate_name(name: &str) -> Result<()> {
    let mut chars = name.chars();
    let ok = match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "variable name {name:?} must match [A-Za-z_][A-Za-z0-9_]*"
        )))
    }
}

fn momentum_name(v: &Variable) -> String {
    match v.role {
        Role::Differential(_) => {
            format!("pi_{}", v.name.strip_prefix('d').unwrap_or(&v.name))
        }
        Role::Antimomentum(_) => {
            format!("pi_{}", v.name.strip_prefix("st_").unwrap_or(&v.name))
        }
        Role::Fiber => format!("pi_{}", v.name),
        _ => format!("p_{}", v.name),
    }
}

impl Space {
    fn build(vars: Vec<Variable>, pairs: Vec<Pair>, provenance: Provenance) -> Result<SpaceRef> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &vars {
            validate_name(&v.name)?;
            if !seen.insert(v.name.as_str()) {
                return Err(Error::invalid(format!(
                    "duplicate variable name {:?} in chart",
                    v.name
                )));
            }
        }
        Ok(Arc::new(Space {
            vars,
            pairs,
            provenance,
        }))
    }

    /// A bare chart of base coordinates.
    pub fn base(coords: &[(&str, Parity)]) -> Result<SpaceRef> {
        let vars = coords
            .iter()
            .map(|&(name, parity)| Variable {
                name: name.to_string(),
                parity,
                weight: (0, 0),
                role: Role::Base,
            })
            .collect();
        Space::build(vars, Vec::new(), Provenance::Base)
    }

    /// Appends inert formal parameters. Conjugate pairs of the parent chart
    /// are kept, so brackets still work on the extended chart; the parameters
    /// themselves are invisible to every construction and differential
    /// operator.
    pub fn with_parameters(parent: &SpaceRef, params: &[(&str, Parity)]) -> Result<SpaceRef> {
        let mut vars = parent.vars.clone();
        for &(name, parity) in params {
            vars.push(Variable {
                name: name.to_string(),
                parity,
                weight: (0, 0),
                role: Role::Parameter,
            });
        }
        Space::build(
            vars,
            parent.pairs.clone(),
            Provenance::Extended(parent.clone()),
        )
    }

    /// Appends vector-bundle fiber coordinates (weight `(1,0)`, no pairing).
    /// Odd fibers model the parity-shifted bundle.
    pub fn vector_bundle(parent: &SpaceRef, fibers: &[(&str, Parity)]) -> Result<SpaceRef> {
        Space::vector_bundle_impl(parent, fibers, None)
    }

    fn vector_bundle_impl(
        parent: &SpaceRef,
        fibers: &[(&str, Parity)],
        dual_of: Option<SpaceRef>,
    ) -> Result<SpaceRef> {
        let mut vars = parent.vars.clone();
        for &(name, parity) in fibers {
            vars.push(Variable {
                name: name.to_string(),
                parity,
                weight: (1, 0),
                role: Role::Fiber,
            });
        }
        Space::build(
            vars,
            Vec::new(),
            Provenance::Bundle {
                parent: parent.clone(),
                dual_of,
            },
        )
    }

    /// Appends an even-conjugate momentum for every non-parameter variable.
    /// The new pairs (all even) replace the parent's pair list.
    pub fn cotangent(parent: &SpaceRef) -> Result<SpaceRef> {
        let mut vars = parent.vars.clone();
        let mut pairs = Vec::new();
        for (i, v) in parent.vars.iter().enumerate() {
            if matches!(v.role, Role::Parameter) {
                continue;
            }
            let momentum = VarId::new(vars.len());
            vars.push(Variable {
                name: momentum_name(v),
                parity: v.parity,
                weight: (1 - v.weight.0, 1 - v.weight.1),
                role: Role::Momentum(VarId::new(i)),
            });
            pairs.push(Pair {
                coord: VarId::new(i),
                momentum,
                kind: PairKind::Even,
            });
        }
        Space::build(vars, pairs, Provenance::Cotangent(parent.clone()))
    }

    /// Appends an odd-conjugate antimomentum (parity reversed, weight `(1,0)`)
    /// for every non-parameter variable. The new pairs (all odd) replace the
    /// parent's pair list.
    pub fn anticotangent(parent: &SpaceRef) -> Result<SpaceRef> {
        let mut vars = parent.vars.clone();
        let mut pairs = Vec::new();
        for (i, v) in parent.vars.iter().enumerate() {
            if matches!(v.role, Role::Parameter) {
                continue;
            }
            let momentum = VarId::new(vars.len());
            vars.push(Variable {
                name: format!("st_{}", v.name),
                parity: v.parity.flip(),
                weight: (1, 0),
                role: Role::Antimomentum(VarId::new(i)),
            });
            pairs.push(Pair {
                coord: VarId::new(i),
                momentum,
                kind: PairKind::Odd,
            });
        }
        Space::build(vars, pairs, Provenance::Anticotangent(parent.clone()))
    }

    /// Appends a parity-reversed differential (weight `(1,0)`) for every
    /// non-parameter variable. No pairs are created.
    pub fn antitangent(parent: &SpaceRef) -> Result<SpaceRef> {
        let mut vars = parent.vars.clone();
        for (i, v) in parent.vars.iter().enumerate() {
            if matches!(v.role, Role::Parameter) {
                continue;
            }
            vars.push(Variable {
                name: format!("d{}", v.name),
                parity: v.parity.flip(),
                weight: (1, 0),
                role: Role::Differential(VarId::new(i)),
            });
        }
        Space::build(vars, Vec::new(), Provenance::Antitangent(parent.clone()))
    }

    // ------------------------------------------------------------------
    // Accessors.
    // ------------------------------------------------------------------

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, v: VarId) -> &Variable {
        &self.vars[v.idx()]
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Parities of all variables in index order.
    pub fn parities(&self) -> Vec<Parity> {
        self.vars.iter().map(|v| v.parity).collect()
    }

    pub fn var_ids(&self) -> impl Iterator<Item = VarId> {
        (0..self.vars.len()).map(VarId::new)
    }

    pub fn by_name(&self, name: &str) -> Option<VarId> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .map(VarId::new)
    }

    /// Looks a variable up by name, with an error naming the chart contents
    /// on failure.
    pub fn var_id(&self, name: &str) -> Result<VarId> {
        self.by_name(name).ok_or_else(|| {
            let names: Vec<&str> = self.vars.iter().map(|v| v.name.as_str()).collect();
            Error::invalid(format!(
                "unknown variable {name:?}; chart has: {}",
                names.join(", ")
            ))
        })
    }

    /// The momentum paired with `coord` by the last construction, if any.
    pub fn momentum_of(&self, coord: VarId) -> Option<VarId> {
        self.pairs
            .iter()
            .find(|p| p.coord == coord)
            .map(|p| p.momentum)
    }

    /// The parity-reversed differential created over `coord`, if any.
    pub fn differential_of(&self, coord: VarId) -> Option<VarId> {
        self.vars
            .iter()
            .position(|v| v.role == Role::Differential(coord))
            .map(VarId::new)
    }

    /// The coordinate paired with `momentum` by the last construction, if any.
    pub fn coord_of(&self, momentum: VarId) -> Option<VarId> {
        self.pairs
            .iter()
            .find(|p| p.momentum == momentum)
            .map(|p| p.coord)
    }

    /// True when every conjugate pair is even (an even phase space).
    pub fn has_even_pairs(&self) -> bool {
        !self.pairs.is_empty() && self.pairs.iter().all(|p| p.kind == PairKind::Even)
    }

    /// True when every conjugate pair is odd (an odd phase space).
    pub fn has_odd_pairs(&self) -> bool {
        !self.pairs.is_empty() && self.pairs.iter().all(|p| p.kind == PairKind::Odd)
    }

    /// All momenta of the current pair list.
    pub fn momenta(&self) -> Vec<VarId> {
        self.pairs.iter().map(|p| p.momentum).collect()
    }

    /// Human-readable chart description, one line per variable.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for v in &self.vars {
            let role = match v.role {
                Role::Base => "base".to_string(),
                Role::Parameter => "parameter".to_string(),
                Role::Fiber => "fiber".to_string(),
                Role::Differential(of) => format!("differential of {}", self.var(of).name),
                Role::Antimomentum(of) => format!("antimomentum of {}", self.var(of).name),
                Role::Momentum(of) => format!("momentum of {}", self.var(of).name),
            };
            out.push_str(&format!(
                "{} {} weight ({},{}) {}\n",
                v.name, v.parity, v.weight.0, v.weight.1, role
            ));
        }
        out
    }

    // ------------------------------------------------------------------
    // Fiber/momentum exchange.
    // ------------------------------------------------------------------

    /// The fiber/momentum exchange with default sign conventions.
    pub fn mx_transform(space: &SpaceRef) -> Result<Relabeling> {
        Space::mx_transform_with(space, &SignConventions::default())
    }

    /// The fiber/momentum exchange between the cotangent of a fibered chart
    /// and the cotangent of the dual fibered chart (even version), or between
    /// the anticotangent of a bundle and the anticotangent of the
    /// parity-shifted dual bundle (odd version).
    ///
    /// Even version on the cotangent of a bundle with fibers `xi_i` and fiber
    /// momenta `pi_i`: base coordinates and their momenta are fixed,
    /// `xi_i -> pi'_i` (the new fiber momentum) and
    /// `pi_i -> -(-1)^{parity(xi_i)} eta_i` (the new fiber). The signs make
    /// the relabeling a symplectomorphism of the canonical even brackets.
    /// Applying the exchange to the resulting chart returns a chart
    /// structurally equal to the original; on functions the double transport
    /// is `-(-1)^{parity(xi_i)}` on the fiber sector.
    ///
    /// Odd version on the anticotangent of a bundle with fibers `u_i` and
    /// antimomenta `st_u_i`: `u_i -> st_eta_i` and `st_u_i -> eta_i`, both
    /// with sign `+1`; the dual fibers carry the opposite parity. This
    /// preserves the canonical odd bracket, and the double transport is the
    /// identity.
    pub fn mx_transform_with(space: &SpaceRef, conv: &SignConventions) -> Result<Relabeling> {
        match &space.provenance {
            Provenance::Cotangent(fibered) => mx_even(space, fibered, conv),
            Provenance::Anticotangent(fibered) => mx_odd(space, fibered, conv),
            _ => Err(Error::WrongProvenance(
                "fiber/momentum exchange needs the (anti)cotangent of a fibered chart".into(),
            )),
        }
    }
}

/// The dual fibered chart for the even exchange: bundle fibers keep their
/// parity; a differential chart dualizes to the antimomentum chart and vice
/// versa. `dual_of` backlinks undo a previous dualization.
fn dual_fibered_even(fibered: &SpaceRef) -> Result<(SpaceRef, Vec<VarId>, Vec<VarId>)> {
    // Returns (dual chart, fiber ids in src fibered chart, fiber ids in dual).
    match &fibered.provenance {
        Provenance::Bundle { parent, dual_of } => {
            let src_fibers: Vec<VarId> = fibered
                .var_ids()
                .filter(|&v| matches!(fibered.var(v).role, Role::Fiber))
                .collect();
            let dual = if let Some(orig) = dual_of {
                let orig_fibers: Vec<VarId> = orig
                    .var_ids()
                    .filter(|&v| matches!(orig.var(v).role, Role::Fiber))
                    .collect();
                let parity_ok = orig_fibers.len() == src_fibers.len()
                    && orig_fibers
                        .iter()
                        .zip(&src_fibers)
                        .all(|(&o, &s)| orig.var(o).parity == fibered.var(s).parity);
                if parity_ok {
                    orig.clone()
                } else {
                    fresh_dual_bundle(parent, fibered, &src_fibers, false)?
                }
            } else {
                fresh_dual_bundle(parent, fibered, &src_fibers, false)?
            };
            let dual_fibers: Vec<VarId> = dual
                .var_ids()
                .filter(|&v| matches!(dual.var(v).role, Role::Fiber))
                .collect();
            Ok((dual, src_fibers, dual_fibers))
        }
        Provenance::Antitangent(m) => {
            let dual = Space::anticotangent(m)?;
            let src_fibers: Vec<VarId> = fibered
                .var_ids()
                .filter(|&v| matches!(fibered.var(v).role, Role::Differential(_)))
                .collect();
            let dual_fibers: Vec<VarId> = dual
                .var_ids()
                .filter(|&v| matches!(dual.var(v).role, Role::Antimomentum(_)))
                .collect();
            Ok((dual, src_fibers, dual_fibers))
        }
        Provenance::Anticotangent(m) => {
            let dual = Space::antitangent(m)?;
            let src_fibers: Vec<VarId> = fibered
                .var_ids()
                .filter(|&v| matches!(fibered.var(v).role, Role::Antimomentum(_)))
                .collect();
            let dual_fibers: Vec<VarId> = dual
                .var_ids()
                .filter(|&v| matches!(dual.var(v).role, Role::Differential(_)))
                .collect();
            Ok((dual, src_fibers, dual_fibers))
        }
        _ => Err(Error::WrongProvenance(
            "fiber/momentum exchange needs fibers: a bundle, differential or antimomentum chart"
                .into(),
        )),
    }
}

fn fresh_dual_bundle(
    parent: &SpaceRef,
    fibered: &SpaceRef,
    src_fibers: &[VarId],
    flip_parity: bool,
) -> Result<SpaceRef> {
    let names: Vec<String> = (1..=src_fibers.len()).map(|k| format!("eta{k}")).collect();
    let fibers: Vec<(&str, Parity)> = names
        .iter()
        .zip(src_fibers)
        .map(|(n, &v)| {
            let p = fibered.var(v).parity;
            (n.as_str(), if flip_parity { p.flip() } else { p })
        })
        .collect();
    Space::vector_bundle_impl(parent, &fibers, Some(fibered.clone()))
}

fn mx_even(space: &SpaceRef, fibered: &SpaceRef, conv: &SignConventions) -> Result<Relabeling> {
    let (dual, src_fibers, dual_fibers) = dual_fibered_even(fibered)?;
    let dst = Space::cotangent(&dual)?;
    let mut images: Vec<(i8, VarId)> = Vec::with_capacity(space.n_vars());
    // The fibered charts share the parent prefix, so indices below
    // `fibered.n_vars()` line up except on the fiber block.
    for v in space.var_ids() {
        let var = space.var(v);
        let image = match var.role {
            Role::Momentum(of) => {
                if let Some(pos) = src_fibers.iter().position(|&f| f == of) {
                    // Fiber momentum -> -(-1)^{fiber parity} * dual fiber.
                    let base_sign: i8 = if space.var(of).parity.is_odd() { 1 } else { -1 };
                    let sign = if conv.mx_fiber_sign_flipped {
                        -base_sign
                    } else {
                        base_sign
                    };
                    (sign, dual_fibers[pos])
                } else {
                    // Base momentum -> same-named momentum of the dual chart.
                    let coord = dst.var_id(&space.var(of).name)?;
                    let m = dst.momentum_of(coord).ok_or_else(|| {
                        Error::internal("dual chart lost a base momentum".to_string())
                    })?;
                    (1, m)
                }
            }
            _ => {
                if let Some(pos) = src_fibers.iter().position(|&f| f == v) {
                    // Fiber -> +1 * momentum of the dual fiber.
                    let m = dst.momentum_of(dual_fibers[pos]).ok_or_else(|| {
                        Error::internal("dual chart lost a fiber momentum".to_string())
                    })?;
                    (1, m)
                } else {
                    // Base coordinate or parameter: fixed by name.
                    (1, dst.var_id(&var.name)?)
                }
            }
        };
        let (s, w) = image;
        if dst.var(w).parity != var.parity {
            return Err(Error::internal(format!(
                "exchange image of {} changes parity",
                var.name
            )));
        }
        images.push((s, w));
    }
    Ok(Relabeling {
        src: space.clone(),
        dst,
        images,
    })
}

fn mx_odd(space: &SpaceRef, fibered: &SpaceRef, conv: &SignConventions) -> Result<Relabeling> {
    let _ = conv;
    let (parent, src_fibers) = match &fibered.provenance {
        Provenance::Bundle { parent, .. } => {
            let fibers: Vec<VarId> = fibered
                .var_ids()
                .filter(|&v| matches!(fibered.var(v).role, Role::Fiber))
                .collect();
            (parent.clone(), fibers)
        }
        _ => {
            return Err(Error::WrongProvenance(
                "the odd fiber/momentum exchange needs the anticotangent of a bundle".into(),
            ))
        }
    };
    // Dual bundle with flipped fiber parity (or the recorded original).
    let dual = match &fibered.provenance {
        Provenance::Bundle {
            dual_of: Some(orig),
            ..
        } => {
            let orig_fibers: Vec<VarId> = orig
                .var_ids()
                .filter(|&v| matches!(orig.var(v).role, Role::Fiber))
                .collect();
            let parity_ok = orig_fibers.len() == src_fibers.len()
                && orig_fibers
                    .iter()
                    .zip(&src_fibers)
                    .all(|(&o, &s)| orig.var(o).parity == fibered.var(s).parity.flip());
            if parity_ok {
                orig.clone()
            } else {
                fresh_dual_bundle(&parent, fibered, &src_fibers, true)?
            }
        }
        _ => fresh_dual_bundle(&parent, fibered, &src_fibers, true)?,
    };
    let dual_fibers: Vec<VarId> = dual
        .var_ids()
        .filter(|&v| matches!(dual.var(v).role, Role::Fiber))
        .collect();
    let dst = Space::anticotangent(&dual)?;
    let mut images: Vec<(i8, VarId)> = Vec::with_capacity(space.n_vars());
    for v in space.var_ids() {
        let var = space.var(v);
        let image = match var.role {
            Role::Antimomentum(of) => {
                if let Some(pos) = src_fibers.iter().position(|&f| f == of) {
                    // Fiber antimomentum -> dual fiber, sign +1.
                    (1, dual_fibers[pos])
                } else {
                    // Base antimomentum -> same-named antimomentum.
                    let coord = dst.var_id(&space.var(of).name)?;
                    let m = dst.momentum_of(coord).ok_or_else(|| {
                        Error::internal("dual chart lost a base antimomentum".to_string())
                    })?;
                    (1, m)
                }
            }
            _ => {
                if let Some(pos) = src_fibers.iter().position(|&f| f == v) {
                    // Fiber -> antimomentum of the dual fiber, sign +1.
                    let m = dst.momentum_of(dual_fibers[pos]).ok_or_else(|| {
                        Error::internal("dual chart lost a fiber antimomentum".to_string())
                    })?;
                    (1, m)
                } else {
                    (1, dst.var_id(&var.name)?)
                }
            }
        };
        let (s, w) = image;
        if dst.var(w).parity != var.parity {
            return Err(Error::internal(format!(
                "exchange image of {} changes parity",
                var.name
            )));
        }
        images.push((s, w));
    }
    Ok(Relabeling {
        src: space.clone(),
        dst,
        images,
    })
}

impl Relabeling {
    /// The inverse signed renaming (signs carry over unchanged since applying
    /// a renaming and its inverse must compose to the identity).
    pub fn inverse(&self) -> Relabeling {
        let mut images = vec![(0i8, VarId::new(0)); self.dst.n_vars()];
        for (i, &(s, w)) in self.images.iter().enumerate() {
            images[w.idx()] = (s, VarId::new(i));
        }
        Relabeling {
            src: self.dst.clone(),
            dst: self.src.clone(),
            images,
        }
    }
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.pairs == other.pairs && provenance_eq(&self.provenance, &other.provenance)
    }
}

impl Eq for Space {}

fn provenance_eq(a: &Provenance, b: &Provenance) -> bool {
    match (a, b) {
        (Provenance::Base, Provenance::Base) => true,
        (Provenance::Cotangent(x), Provenance::Cotangent(y))
        | (Provenance::Anticotangent(x), Provenance::Anticotangent(y))
        | (Provenance::Antitangent(x), Provenance::Antitangent(y))
        | (Provenance::Extended(x), Provenance::Extended(y)) => space_ref_eq(x, y),
        (
            Provenance::Bundle {
                parent: px,
                dual_of: dx,
            },
            Provenance::Bundle {
                parent: py,
                dual_of: dy,
            },
        ) => {
            space_ref_eq(px, py)
                && match (dx, dy) {
                    (None, None) => true,
                    (Some(x), Some(y)) => space_ref_eq(x, y),
                    _ => false,
                }
        }
        _ => false,
    }
}

fn space_ref_eq(a: &SpaceRef, b: &SpaceRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.vars.iter().map(|v| v.name.as_str()).collect();
        write!(f, "chart[{}]", names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn even_base() -> SpaceRef {
        Space::base(&[("x1", Parity::Even), ("x2", Parity::Even)]).unwrap()
    }

    #[test]
    fn cotangent_pairs_and_weights() {
        let m = even_base();
        let t = Space::cotangent(&m).unwrap();
        assert_eq!(t.n_vars(), 4);
        assert!(t.has_even_pairs());
        let p1 = t.var_id("p_x1").unwrap();
        assert_eq!(t.var(p1).parity, Parity::Even);
        assert_eq!(t.var(p1).weight, (1, 1));
        assert_eq!(t.momentum_of(t.var_id("x1").unwrap()), Some(p1));
    }

    #[test]
    fn anticotangent_flips_parity() {
        let m = even_base();
        let pt = Space::anticotangent(&m).unwrap();
        assert!(pt.has_odd_pairs());
        let st = pt.var_id("st_x1").unwrap();
        assert_eq!(pt.var(st).parity, Parity::Odd);
        assert_eq!(pt.var(st).weight, (1, 0));
    }

    #[test]
    fn iterated_construction_names() {
        let m = even_base();
        let ptm = Space::antitangent(&m).unwrap(); // x, dx
        let t = Space::cotangent(&ptm).unwrap(); // x, dx, p_x, pi_x
        assert!(t.by_name("dx1").is_some());
        assert!(t.by_name("pi_x1").is_some());
        assert!(t.by_name("p_x1").is_some());
        // Momentum of dx1 is pi_x1 and both are even again.
        let dx1 = t.var_id("dx1").unwrap();
        let pi = t.momentum_of(dx1).unwrap();
        assert_eq!(t.var(pi).name, "pi_x1");
        assert_eq!(t.var(pi).parity, Parity::Odd);
        assert_eq!(t.var(pi).weight, (0, 1));
    }

    #[test]
    fn parameters_are_skipped_by_constructions() {
        let m = even_base();
        let me = Space::with_parameters(&m, &[("t", Parity::Even)]).unwrap();
        let t = Space::cotangent(&me).unwrap();
        assert!(t.by_name("p_t").is_none());
        assert!(t.by_name("p_x1").is_some());
        // Extending after the construction keeps the pairs.
        let te = Space::with_parameters(&t, &[("s", Parity::Even)]).unwrap();
        assert!(te.has_even_pairs());
    }

    #[test]
    fn even_exchange_round_trip() {
        let m = even_base();
        let pe = Space::vector_bundle(&m, &[("xi1", Parity::Odd), ("xi2", Parity::Odd)]).unwrap();
        let tpe = Space::cotangent(&pe).unwrap();
        let r1 = Space::mx_transform(&tpe).unwrap();
        assert!(r1.dst.by_name("eta1").is_some());
        assert!(r1.dst.by_name("pi_eta1").is_some());
        // Fiber xi1 maps to the dual fiber momentum with sign +1.
        let xi1 = tpe.var_id("xi1").unwrap();
        let (s, w) = r1.images[xi1.idx()];
        assert_eq!(s, 1);
        assert_eq!(r1.dst.var(w).name, "pi_eta1");
        // Odd fiber momentum maps to +eta (sign -(-1)^odd = +1).
        let pi1 = tpe.var_id("pi_xi1").unwrap();
        let (s, w) = r1.images[pi1.idx()];
        assert_eq!(s, 1);
        assert_eq!(r1.dst.var(w).name, "eta1");
        // Double application returns a chart structurally equal to the start.
        let r2 = Space::mx_transform(&r1.dst).unwrap();
        assert_eq!(*r2.dst, *tpe);
    }

    #[test]
    fn even_exchange_of_differential_chart_is_antimomentum_chart() {
        let m = even_base();
        let ptm = Space::antitangent(&m).unwrap();
        let t = Space::cotangent(&ptm).unwrap();
        let r = Space::mx_transform(&t).unwrap();
        assert!(r.dst.by_name("st_x1").is_some());
        assert!(r.dst.by_name("pi_x1").is_some());
        // dx1 -> +pi_x1; pi_x1 -> +st_x1 (sign -(-1)^{odd dx} = +1).
        let dx1 = t.var_id("dx1").unwrap();
        let (s, w) = r.images[dx1.idx()];
        assert_eq!((s, r.dst.var(w).name.as_str()), (1, "pi_x1"));
        let pi1 = t.var_id("pi_x1").unwrap();
        let (s, w) = r.images[pi1.idx()];
        assert_eq!((s, r.dst.var(w).name.as_str()), (1, "st_x1"));
        let r2 = Space::mx_transform(&r.dst).unwrap();
        assert_eq!(*r2.dst, *t);
    }

    #[test]
    fn odd_exchange_flips_fiber_parity() {
        let m = even_base();
        let e = Space::vector_bundle(&m, &[("u1", Parity::Even)]).unwrap();
        let pte = Space::anticotangent(&e).unwrap();
        let r = Space::mx_transform(&pte).unwrap();
        let eta = r.dst.var_id("eta1").unwrap();
        assert_eq!(r.dst.var(eta).parity, Parity::Odd);
        // u1 -> st_eta1, st_u1 -> eta1, both +1.
        let u1 = pte.var_id("u1").unwrap();
        let (s, w) = r.images[u1.idx()];
        assert_eq!((s, r.dst.var(w).name.as_str()), (1, "st_eta1"));
        let su1 = pte.var_id("st_u1").unwrap();
        let (s, w) = r.images[su1.idx()];
        assert_eq!((s, r.dst.var(w).name.as_str()), (1, "eta1"));
        let r2 = Space::mx_transform(&r.dst).unwrap();
        assert_eq!(*r2.dst, *pte);
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(Space::base(&[("x", Parity::Even), ("x", Parity::Odd)]).is_err());
        let m = even_base();
        assert!(Space::vector_bundle(&m, &[("x1", Parity::Odd)]).is_err());
    }
}
