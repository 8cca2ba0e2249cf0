//! Seeded random instance generators and deterministic shrinking.

use koszul_core::{q, Coeff, Parity, Poly, Space, SpaceRef, VarId};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// The plane with two odd directions: x1, x2 even; th1, th2 odd.
pub fn base_2_2() -> SpaceRef {
    Space::base(&[
        ("x1", Parity::Even),
        ("x2", Parity::Even),
        ("th1", Parity::Odd),
        ("th2", Parity::Odd),
    ])
    .unwrap()
}

/// The plane with one odd direction: x1, x2 even; th odd.
pub fn base_2_1() -> SpaceRef {
    Space::base(&[
        ("x1", Parity::Even),
        ("x2", Parity::Even),
        ("th", Parity::Odd),
    ])
    .unwrap()
}

/// A line with one odd direction.
pub fn base_1_1() -> SpaceRef {
    Space::base(&[("x", Parity::Even), ("th", Parity::Odd)]).unwrap()
}

/// Purely even three-space.
pub fn base_3_0() -> SpaceRef {
    Space::base(&[
        ("x1", Parity::Even),
        ("x2", Parity::Even),
        ("x3", Parity::Even),
    ])
    .unwrap()
}

/// A small nonzero rational with numerator in ±1..=4 and denominator 1..=3.
pub fn random_coeff(rng: &mut ChaCha8Rng) -> Coeff {
    let num = *[1i64, 2, 3, 4, -1, -2, -3, -4]
        .get(rng.gen_range(0..8))
        .unwrap();
    let den = *[1i64, 2, 3].get(rng.gen_range(0..3)).unwrap();
    q(num, den)
}

/// A random polynomial: up to `terms` monomials of total degree at most
/// `max_deg` (odd variables capped at exponent one), with small rational
/// coefficients. May be zero (rarely) if all drawn monomials collide.
pub fn random_poly(rng: &mut ChaCha8Rng, space: &SpaceRef, max_deg: usize, terms: usize) -> Poly {
    let vars: Vec<VarId> = space.var_ids().collect();
    let mut acc = Poly::zero(space);
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_deg);
        let mut mono = Poly::constant(space, random_coeff(rng));
        let mut used_odd: Vec<VarId> = Vec::new();
        for _ in 0..deg {
            // Draw a variable with remaining exponent capacity.
            for _attempt in 0..8 {
                let v = vars[rng.gen_range(0..vars.len())];
                if space.var(v).parity.is_odd() && used_odd.contains(&v) {
                    continue;
                }
                if space.var(v).parity.is_odd() {
                    used_odd.push(v);
                }
                mono = mono.try_mul(&Poly::var(space, v)).expect("same chart");
                break;
            }
        }
        acc = acc.try_add(&mono).expect("same chart");
    }
    acc
}

/// A random parity-homogeneous polynomial (zero only if unlucky across all
/// retries, which the fixed retry count makes effectively impossible for the
/// charts used here).
pub fn random_homogeneous(
    rng: &mut ChaCha8Rng,
    space: &SpaceRef,
    max_deg: usize,
    terms: usize,
    parity: Parity,
) -> Poly {
    for _ in 0..16 {
        let p = random_poly(rng, space, max_deg, terms);
        let (even, odd) = p.parity_split();
        let part = if parity.is_odd() { odd } else { even };
        if !part.is_zero() {
            return part;
        }
    }
    // Deterministic fallback: a single homogeneous variable or constant.
    match space
        .var_ids()
        .find(|v| space.var(*v).parity == parity)
    {
        Some(v) => Poly::var(space, v),
        None => Poly::one(space),
    }
}

/// A random parity-homogeneous vector field: each eligible coordinate gets a
/// small random coefficient of the matching parity (some zero).
pub fn random_field(
    rng: &mut ChaCha8Rng,
    space: &SpaceRef,
    max_deg: usize,
    terms: usize,
    parity: Parity,
) -> koszul_core::VectorField {
    let mut coeffs = Vec::new();
    for v in space.var_ids() {
        if matches!(space.var(v).role, koszul_core::Role::Parameter) {
            continue;
        }
        if rng.gen_bool(0.3) {
            continue;
        }
        let want = parity + space.var(v).parity;
        coeffs.push((v, random_homogeneous(rng, space, max_deg, terms, want)));
    }
    koszul_core::VectorField::new(space, parity, coeffs).expect("parity-matched by construction")
}

/// Deterministically shrinks a failing instance: first drops monomial terms
/// one at a time (highest degree first), then zeroes out whole variables,
/// as long as the predicate keeps failing. `fails` must return true on the
/// instance passed in.
pub fn shrink<F>(mut polys: Vec<Poly>, fails: F) -> Vec<Poly>
where
    F: Fn(&[Poly]) -> bool,
{
    loop {
        let mut improved = false;
        // Term removal, one term at a time.
        'term_removal: for i in 0..polys.len() {
            let monos: Vec<_> = polys[i].terms_desc().map(|(m, _)| m.clone()).collect();
            for m in monos {
                let mut candidate = polys.clone();
                candidate[i] = candidate[i].without_term(&m);
                if fails(&candidate) {
                    polys = candidate;
                    improved = true;
                    break 'term_removal;
                }
            }
        }
        if improved {
            continue;
        }
        // Variable elimination across the whole instance.
        if let Some(space) = polys.first().map(|p| p.space().clone()) {
            for v in space.var_ids() {
                if polys.iter().all(|p| p.set_zero(&[v]) == *p) {
                    continue;
                }
                let candidate: Vec<Poly> = polys.iter().map(|p| p.set_zero(&[v])).collect();
                if fails(&candidate) {
                    polys = candidate;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            return polys;
        }
    }
}

/// Renders a shrunk instance for the report: one `name = poly` line per
/// entry plus the chart description.
pub fn render_instance(names: &[&str], polys: &[Poly]) -> String {
    let mut out = String::new();
    if let Some(p) = polys.first() {
        out.push_str(&format!("  chart: {}\n", p.space()));
    }
    for (n, p) in names.iter().zip(polys) {
        out.push_str(&format!("  {n} = {p}\n"));
    }
    out
}

/// Shrinks a failing instance and renders it.
pub fn shrunk<F>(names: &[&str], polys: Vec<Poly>, fails: F) -> String
where
    F: Fn(&[Poly]) -> bool,
{
    let minimal = shrink(polys, fails);
    render_instance(names, &minimal)
}
