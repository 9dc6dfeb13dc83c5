//! Exact arithmetic in the subring of the equivariant Grothendieck ring
//! spanned over `Z[L]` by the root-of-unity classes `[mu_n]`.
//!
//! Elements are finite sums `sum c * [mu_n] * L^k` with nonzero integer
//! coefficients. `[mu_1]` is the unit, so trivially acted classes are plain
//! integer polynomials in `L`. Products of root-of-unity classes follow the
//! orbit decomposition of the diagonal action:
//!
//! ```text
//! [mu_a] * [mu_b] = gcd(a, b) * [mu_lcm(a, b)]
//! ```

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use parse::ParseRingError;

/// A basis element `[mu_order] * L^lpow`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub order: u64,
    pub lpow: u32,
}

impl Monomial {
    pub fn new(order: u64, lpow: u32) -> Self {
        assert!(order >= 1, "root-of-unity order must be positive");
        Monomial { order, lpow }
    }

    /// Basis product: returns the multiplicity and the resulting monomial.
    pub fn product(self, other: Monomial) -> (u64, Monomial) {
        let g = self.order.gcd(&other.order);
        let l = self.order / g * other.order;
        (g, Monomial::new(l, self.lpow + other.lpow))
    }
}

/// Element of the ring `R = Z[L]<[mu_n] : n >= 1>`, always in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RingElement {
    terms: BTreeMap<Monomial, BigInt>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement::default()
    }

    pub fn one() -> Self {
        RingElement::monomial(1, 1, 0)
    }

    /// The Lefschetz class `L`.
    pub fn lefschetz() -> Self {
        RingElement::monomial(1, 1, 1)
    }

    /// `[mu_n]`.
    pub fn mu(n: u64) -> Self {
        RingElement::monomial(1, n, 0)
    }

    pub fn integer(c: impl Into<BigInt>) -> Self {
        let mut r = RingElement::zero();
        r.add_term(Monomial::new(1, 0), c.into());
        r
    }

    pub fn monomial(coeff: impl Into<BigInt>, order: u64, lpow: u32) -> Self {
        let mut r = RingElement::zero();
        r.add_term(Monomial::new(order, lpow), coeff.into());
        r
    }

    /// Integer polynomial in `L` with trivial action, coefficients listed by power.
    pub fn l_poly<C: Into<BigInt>>(coeffs: impl IntoIterator<Item = (u32, C)>) -> Self {
        let mut r = RingElement::zero();
        for (k, c) in coeffs {
            r.add_term(Monomial::new(1, k), c.into());
        }
        r
    }

    /// `(L - 1)^e`.
    pub fn torus(e: u32) -> Self {
        (RingElement::lefschetz() - RingElement::one()).pow(e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, order: u64, lpow: u32) -> BigInt {
        self.terms
            .get(&Monomial::new(order, lpow))
            .cloned()
            .unwrap_or_default()
    }

    /// True when every term has `[mu_1]`, i.e. the class carries the trivial action.
    pub fn has_trivial_action(&self) -> bool {
        self.terms.keys().all(|m| m.order == 1)
    }

    /// Highest power of `L`, or `None` for zero.
    pub fn l_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.lpow).max()
    }

    /// Evaluation `[mu_n] -> n`, `L -> 1`.
    pub fn euler_characteristic(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(m, c)| c * BigInt::from(m.order))
            .sum()
    }

    /// Evaluation at `L = 1` ignoring the action (`[mu_n] -> 1`). For classes
    /// with trivial action this equals the Euler characteristic.
    pub fn eval_l_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return RingElement::zero();
        }
        RingElement {
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    /// Rewrites every root-of-unity order through `f` and re-canonicalizes.
    pub fn map_orders(&self, f: impl Fn(u64) -> u64) -> Self {
        let mut r = RingElement::zero();
        for (m, c) in &self.terms {
            r.add_term(Monomial::new(f(m.order), m.lpow), c.clone());
        }
        r
    }

    /// Drops the root-of-unity part, `[mu_n] -> 1`.
    pub fn forget_action(&self) -> Self {
        self.map_orders(|_| 1)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = RingElement::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

/// Class of projective space `P^r`, i.e. `L^r + ... + L + 1`.
pub fn projective_class(r: u32) -> RingElement {
    RingElement::l_poly((0..=r).map(|k| (k, 1)))
}

impl From<i64> for RingElement {
    fn from(c: i64) -> Self {
        RingElement::integer(c)
    }
}

impl Add<&RingElement> for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        let mut r = self.clone();
        r += rhs;
        r
    }
}

impl Add for RingElement {
    type Output = RingElement;
    fn add(mut self, rhs: RingElement) -> RingElement {
        self += &rhs;
        self
    }
}

impl AddAssign<&RingElement> for RingElement {
    fn add_assign(&mut self, rhs: &RingElement) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl AddAssign for RingElement {
    fn add_assign(&mut self, rhs: RingElement) {
        *self += &rhs;
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(mut self) -> RingElement {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -self.clone()
    }
}

impl Sub<&RingElement> for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        let mut r = self.clone();
        r -= rhs;
        r
    }
}

impl Sub for RingElement {
    type Output = RingElement;
    fn sub(mut self, rhs: RingElement) -> RingElement {
        self -= &rhs;
        self
    }
}

impl SubAssign<&RingElement> for RingElement {
    fn sub_assign(&mut self, rhs: &RingElement) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c);
        }
    }
}

impl Mul<&RingElement> for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        let mut r = RingElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let (mult, m) = a.product(*b);
                r.add_term(m, x * y * BigInt::from(mult));
            }
        }
        r
    }
}

impl Mul for RingElement {
    type Output = RingElement;
    fn mul(self, rhs: RingElement) -> RingElement {
        &self * &rhs
    }
}

impl std::iter::Sum for RingElement {
    fn sum<I: Iterator<Item = RingElement>>(iter: I) -> Self {
        iter.fold(RingElement::zero(), |acc, x| acc + x)
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, coeff: &BigInt, m: Monomial) -> fmt::Result {
    let mut factors = Vec::new();
    if m.order != 1 {
        factors.push(format!("[mu_{}]", m.order));
    }
    match m.lpow {
        0 => {}
        1 => factors.push("L".to_string()),
        k => factors.push(format!("L^{k}")),
    }
    let abs = coeff.abs();
    if factors.is_empty() {
        write!(f, "{abs}")
    } else if abs.is_one() {
        write!(f, "{}", factors.join("*"))
    } else {
        write!(f, "{abs}*{}", factors.join("*"))
    }
}

impl fmt::Display for RingElement {
    /// Terms are grouped by root-of-unity order, highest power of `L` first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| a.order.cmp(&b.order).then(b.lpow.cmp(&a.lpow)));
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            fmt_monomial(f, c, *m)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for RingElement {
    type Err = ParseRingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_ring_element(s)
    }
}

/// Renders `sign * cover * (L-1)^lpow` without expanding, e.g. `-[mu_2]*(L-1)`.
/// A cover whose terms share one root-of-unity order is shown as `[mu_n]*(...)`.
pub fn render_factored(sign: i32, cover: &RingElement, torus_pow: u32) -> String {
    let orders: std::collections::BTreeSet<u64> = cover.terms.keys().map(|m| m.order).collect();
    let mut body = match orders.iter().next() {
        Some(&n) if orders.len() == 1 && n > 1 && cover.len() > 1 => {
            format!("[mu_{n}]*({})", cover.forget_action().to_string().replace(' ', ""))
        }
        _ if cover.len() == 1 || cover.is_zero() || (torus_pow == 0 && sign > 0) => cover.to_string(),
        _ => format!("({cover})"),
    };
    let torus = match torus_pow {
        0 => None,
        1 => Some("(L-1)".to_string()),
        p => Some(format!("(L-1)^{p}")),
    };
    if let Some(t) = torus {
        body = if body == "1" { t } else { format!("{body}*{t}") };
    }
    if sign < 0 {
        if let Some(rest) = body.strip_prefix('-') {
            rest.to_string()
        } else {
            format!("-{body}")
        }
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l() -> RingElement {
        RingElement::lefschetz()
    }

    #[test]
    fn add_examples() {
        let one = RingElement::one();
        assert_eq!(&(&l() - &one) + &one, l());
        let mu2 = RingElement::mu(2);
        let lhs = &(&mu2 * &(&l() - &one)) + &mu2;
        assert_eq!(lhs, &mu2 * &l());
        let x: RingElement = "3*[mu_4]*L^2 - 7 + [mu_3]".parse().unwrap();
        assert!((&x + &(-&x)).is_zero());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&RingElement::mu(2) * &RingElement::mu(3), RingElement::mu(6));
        assert_eq!(
            &RingElement::mu(4) * &RingElement::mu(6),
            RingElement::monomial(2, 12, 0)
        );
        let x: RingElement = "2*[mu_5]*L - L^3".parse().unwrap();
        assert_eq!(&x * &RingElement::mu(1), x);
    }

    #[test]
    fn pow_examples() {
        let expected = RingElement::l_poly([(2, 1), (1, -2), (0, 1)]);
        assert_eq!(RingElement::torus(2), expected);
        assert_eq!(RingElement::mu(2).pow(2), RingElement::monomial(2, 2, 0));
        let x: RingElement = "[mu_6]*L - 4".parse().unwrap();
        assert_eq!(x.pow(1), x);
        assert_eq!(x.pow(0), RingElement::one());
    }

    #[test]
    fn projective_classes() {
        assert_eq!(projective_class(0), RingElement::one());
        assert_eq!(projective_class(1), &l() + &RingElement::one());
        assert_eq!(projective_class(2), RingElement::l_poly([(2, 1), (1, 1), (0, 1)]));
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let x = &RingElement::mu(3) - &RingElement::mu(3);
        assert!(x.is_zero());
        assert_eq!(x, RingElement::zero());
        assert_eq!(x.to_string(), "0");
    }

    #[test]
    fn render() {
        let x: RingElement = "-[mu_2]*(L-1) + 3*L^2".parse().unwrap();
        assert_eq!(x.to_string(), "3*L^2 - [mu_2]*L + [mu_2]");
        assert_eq!(render_factored(-1, &RingElement::mu(2), 1), "-[mu_2]*(L-1)");
        assert_eq!(render_factored(1, &RingElement::one(), 2), "(L-1)^2");
        assert_eq!(render_factored(-1, &RingElement::integer(-3), 0), "3");
    }

    #[test]
    fn euler_and_forget() {
        let x: RingElement = "[mu_6] + 2*[mu_3]*L - L".parse().unwrap();
        assert_eq!(x.euler_characteristic(), BigInt::from(6 + 6 - 1));
        assert_eq!(x.forget_action(), "1 + L".parse().unwrap());
        assert_eq!(x.l_degree(), Some(1));
        assert!(!x.has_trivial_action());
    }
}
