//! The identity-case registry.

pub mod anchor;
pub mod cartan;
pub mod coboundary;
pub mod higher;
pub mod lichnerowicz;
pub mod mutation;
pub mod mx;
pub mod poisson;
pub mod ring;
pub mod schouten;

use crate::{IdentityCase, Verdict};
use koszul_core::Poly;

/// Every registered case, in reporting order.
pub fn registry() -> Vec<IdentityCase> {
    let mut all = Vec::new();
    all.extend(ring::cases());
    all.extend(poisson::cases());
    all.extend(schouten::cases());
    all.extend(cartan::cases());
    all.extend(anchor::cases());
    all.extend(lichnerowicz::cases());
    all.extend(higher::cases());
    all.extend(mx::cases());
    all.extend(coboundary::cases());
    all.extend(mutation::cases());
    all
}

/// Runs `ctx.trials` randomized instances; the closure returns `Ok(())` on a
/// passing instance and `Err(counterexample)` on a failing one (already
/// shrunk and rendered).
pub(crate) fn randomized<F>(ctx: &crate::Ctx, mut instance: F) -> Verdict
where
    F: FnMut(&mut rand_chacha::ChaCha8Rng) -> Result<(), String>,
{
    let mut rng = ctx.rng();
    for i in 0..ctx.trials {
        if let Err(counterexample) = instance(&mut rng) {
            return Verdict::Fail {
                trials: i + 1,
                counterexample,
            };
        }
    }
    Verdict::Pass { trials: ctx.trials }
}

/// Runs a fixed list of named checks (fixture cases); each closure returns
/// `Ok(())` or an error description.
pub(crate) fn fixtures(checks: Vec<(&'static str, Result<(), String>)>) -> Verdict {
    let n = checks.len();
    for (name, r) in checks {
        if let Err(e) = r {
            return Verdict::Fail {
                trials: n,
                counterexample: format!("  fixture '{name}': {e}"),
            };
        }
    }
    Verdict::Pass { trials: n }
}

/// Shrinks-and-renders helper for instance failures over a list of
/// polynomials with a recomputable failure predicate.
pub(crate) fn shrunk_failure<F>(names: &[&str], polys: Vec<Poly>, fails: F) -> Result<(), String>
where
    F: Fn(&[Poly]) -> bool,
{
    if fails(&polys) {
        Err(crate::gen::shrunk(names, polys, fails))
    } else {
        Ok(())
    }
}

/// Converts an engine error into a rendered failure (engine errors inside a
/// case are defects, not identity failures, but they must surface the same
/// way so the suite never panics).
pub(crate) fn engine<T>(r: koszul_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("  engine error: {e}"))
}
