//! Monomials over a fixed variable list, stored as dense exponent vectors.
//!
//! A monomial is the canonically ordered product of variable powers, factors
//! sorted by variable index ascending. Odd variables never carry an exponent
//! above 1 (their squares vanish); arithmetic that would produce one yields
//! "zero" (`None`). All Koszul reordering signs are computed here.

use std::cmp::Ordering;

use crate::parity::Parity;
use crate::space::VarId;

/// Dense exponent vector; index `i` is the exponent of variable `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u16>,
}

impl Monomial {
    /// The empty monomial (constant 1) on `n_vars` variables.
    pub fn unit(n_vars: usize) -> Self {
        Monomial {
            exps: vec![0; n_vars],
        }
    }

    /// The monomial consisting of a single variable to the first power.
    pub fn of_var(n_vars: usize, v: VarId) -> Self {
        let mut exps = vec![0; n_vars];
        exps[v.idx()] = 1;
        Monomial { exps }
    }

    /// Builds a monomial directly from an exponent vector.
    pub fn from_exps(exps: Vec<u16>) -> Self {
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, v: VarId) -> u16 {
        self.exps[v.idx()]
    }

    pub fn n_vars(&self) -> usize {
        self.exps.len()
    }

    /// Total degree (sum of exponents).
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    /// `true` for the constant monomial.
    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Variables occurring in this monomial, ascending.
    pub fn support(&self) -> impl Iterator<Item = VarId> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| VarId::new(i))
    }

    /// Parity of the monomial given per-variable parities: sum of parities of
    /// odd variables occurring (odd exponents are always 1).
    pub fn parity(&self, parities: &[Parity]) -> Parity {
        let odd_count = self
            .exps
            .iter()
            .zip(parities)
            .filter(|(&e, p)| e % 2 == 1 && p.is_odd())
            .count();
        Parity::from_usize(odd_count)
    }

    /// Graded product `self * other` in canonical order.
    ///
    /// Returns `None` when an odd variable would acquire exponent 2 (the
    /// product is zero). Otherwise returns the combined monomial and the
    /// Koszul sign picked up by moving every odd factor of `other` leftward
    /// past the odd factors of `self` with larger index.
    pub fn mul(&self, other: &Monomial, parities: &[Parity]) -> Option<(Monomial, i8)> {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let n = self.exps.len();
        let mut exps = vec![0u16; n];
        let mut swaps: usize = 0;
        // Odd factors of `self` with index > i, counted incrementally from the top.
        let mut odd_above = 0usize;
        for i in (0..n).rev() {
            let a = self.exps[i];
            let b = other.exps[i];
            if parities[i].is_odd() {
                if a + b > 1 {
                    return None;
                }
                if b == 1 {
                    swaps += odd_above;
                }
                if a == 1 {
                    odd_above += 1;
                }
            }
            exps[i] = a + b;
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        Some((Monomial { exps }, sign))
    }

    /// Left partial derivative data with respect to variable `v`.
    ///
    /// Returns `None` when `v` does not occur. Otherwise returns the reduced
    /// monomial together with the integer factor `exponent * sign`, where the
    /// sign is `(-1)^{number of odd variables occurring before v}` when `v`
    /// is odd (the factor is moved to the leftmost position before deletion)
    /// and `+1` when `v` is even.
    pub fn partial_left(&self, v: VarId, parities: &[Parity]) -> Option<(Monomial, i64)> {
        let i = v.idx();
        let e = self.exps[i];
        if e == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[i] = e - 1;
        let mut factor = e as i64;
        if parities[i].is_odd() {
            let odd_before = self
                .exps
                .iter()
                .zip(parities)
                .take(i)
                .filter(|(&x, p)| x % 2 == 1 && p.is_odd())
                .count();
            if odd_before % 2 == 1 {
                factor = -factor;
            }
        }
        Some((Monomial { exps }, factor))
    }

    /// Right partial derivative data with respect to variable `v`.
    ///
    /// Same as [`Monomial::partial_left`] but the odd factor is moved to the
    /// rightmost position, so the sign counts odd variables occurring after
    /// `v` instead.
    pub fn partial_right(&self, v: VarId, parities: &[Parity]) -> Option<(Monomial, i64)> {
        let i = v.idx();
        let e = self.exps[i];
        if e == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[i] = e - 1;
        let mut factor = e as i64;
        if parities[i].is_odd() {
            let odd_after = self
                .exps
                .iter()
                .zip(parities)
                .skip(i + 1)
                .filter(|(&x, p)| x % 2 == 1 && p.is_odd())
                .count();
            if odd_after % 2 == 1 {
                factor = -factor;
            }
        }
        Some((Monomial { exps }, factor))
    }

    /// Normalizes an arbitrary factor sequence into a canonical monomial.
    ///
    /// Returns `None` when an odd variable repeats. The sign is
    /// `(-1)^{inversions among odd factors}`, the Koszul sign of sorting the
    /// sequence into ascending variable order.
    pub fn from_factor_sequence(
        n_vars: usize,
        factors: &[VarId],
        parities: &[Parity],
    ) -> Option<(Monomial, i8)> {
        let mut exps = vec![0u16; n_vars];
        let mut odd_positions: Vec<usize> = Vec::new();
        for &f in factors {
            let i = f.idx();
            if parities[i].is_odd() {
                if exps[i] == 1 {
                    return None;
                }
                odd_positions.push(i);
            }
            exps[i] += 1;
        }
        let mut inversions = 0usize;
        for a in 0..odd_positions.len() {
            for b in (a + 1)..odd_positions.len() {
                if odd_positions[a] > odd_positions[b] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((Monomial { exps }, sign))
    }

    /// Pads the exponent vector with zeros up to `n_vars` (embedding into a
    /// chart that appends variables).
    pub fn pad_to(&self, n_vars: usize) -> Monomial {
        debug_assert!(n_vars >= self.exps.len());
        let mut exps = self.exps.clone();
        exps.resize(n_vars, 0);
        Monomial { exps }
    }

    /// Truncates the exponent vector to `n_vars`; returns `None` when a
    /// discarded entry is nonzero.
    pub fn truncate_to(&self, n_vars: usize) -> Option<Monomial> {
        if self.exps[n_vars..].iter().any(|&e| e != 0) {
            return None;
        }
        Some(Monomial {
            exps: self.exps[..n_vars].to_vec(),
        })
    }
}

/// Order: total degree ascending, then exponent vectors lexicographically
/// ascending. Display code iterates maps in reverse to print highest-degree
/// terms first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parities(spec: &[u8]) -> Vec<Parity> {
        spec.iter()
            .map(|&b| if b == 1 { Parity::Odd } else { Parity::Even })
            .collect()
    }

    #[test]
    fn product_signs() {
        // Variables: x (even, idx 0), th1 (odd, idx 1), th2 (odd, idx 2).
        let ps = parities(&[0, 1, 1]);
        let th1 = Monomial::of_var(3, VarId::new(1));
        let th2 = Monomial::of_var(3, VarId::new(2));
        // th1 * th2: factors already in order, no sign.
        let (m, s) = th1.mul(&th2, &ps).unwrap();
        assert_eq!(m.exps(), &[0, 1, 1]);
        assert_eq!(s, 1);
        // th2 * th1: one odd swap.
        let (m, s) = th2.mul(&th1, &ps).unwrap();
        assert_eq!(m.exps(), &[0, 1, 1]);
        assert_eq!(s, -1);
        // th1 * th1 = 0.
        assert!(th1.mul(&th1, &ps).is_none());
    }

    #[test]
    fn left_and_right_partials() {
        // d/dth2 (th1 th2): move th2 left past th1 -> -(th1), so factor -1.
        let ps = parities(&[0, 1, 1]);
        let m = Monomial::from_exps(vec![0, 1, 1]);
        let (red, f) = m.partial_left(VarId::new(2), &ps).unwrap();
        assert_eq!(red.exps(), &[0, 1, 0]);
        assert_eq!(f, -1);
        // Right derivative: th2 is already rightmost, factor +1.
        let (red, f) = m.partial_right(VarId::new(2), &ps).unwrap();
        assert_eq!(red.exps(), &[0, 1, 0]);
        assert_eq!(f, 1);
        // Even variable: plain exponent rule.
        let m = Monomial::from_exps(vec![3, 0, 0]);
        let (red, f) = m.partial_left(VarId::new(0), &ps).unwrap();
        assert_eq!(red.exps(), &[2, 0, 0]);
        assert_eq!(f, 3);
    }

    #[test]
    fn factor_sequence_normalization() {
        let ps = parities(&[0, 1, 1]);
        // th2 * x * th1 -> x th1 th2 with one odd inversion.
        let seq = [VarId::new(2), VarId::new(0), VarId::new(1)];
        let (m, s) = Monomial::from_factor_sequence(3, &seq, &ps).unwrap();
        assert_eq!(m.exps(), &[1, 1, 1]);
        assert_eq!(s, -1);
        // Repeated odd factor vanishes.
        let seq = [VarId::new(1), VarId::new(0), VarId::new(1)];
        assert!(Monomial::from_factor_sequence(3, &seq, &ps).is_none());
    }

    #[test]
    fn ordering_is_degree_then_lex() {
        let a = Monomial::from_exps(vec![1, 1, 0]); // degree 2
        let b = Monomial::from_exps(vec![2, 0, 0]); // degree 2, lex larger
        let c = Monomial::from_exps(vec![0, 0, 1]); // degree 1
        assert!(c < a);
        assert!(a < b);
    }
}
