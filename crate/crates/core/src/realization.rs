//! Betti realizations: Euler characteristic and monodromy zeta function.
//!
//! The zeta function of `[mu_n] * L^k` is `(1 - t^n)^-1`, so every element of
//! the ring realizes to a product of cyclotomic-type factors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::config::{ComponentSet, Configuration};
use crate::error::{Error, Result};
use crate::motive::MotiveExpansion;
use crate::ring::RingElement;

/// `prod_n (1 - t^n)^{e_n}` with no zero exponents stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CyclotomicRational {
    exponents: BTreeMap<u64, BigInt>,
}

impl CyclotomicRational {
    pub fn one() -> Self {
        CyclotomicRational::default()
    }

    /// `(1 - t^n)^e`.
    pub fn factor(n: u64, e: impl Into<BigInt>) -> Self {
        assert!(n >= 1, "factor order must be positive");
        let mut r = CyclotomicRational::one();
        r.add_exponent(n, e.into());
        r
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent(&self, n: u64) -> BigInt {
        self.exponents.get(&n).cloned().unwrap_or_default()
    }

    pub fn exponents(&self) -> impl Iterator<Item = (u64, &BigInt)> + '_ {
        self.exponents.iter().map(|(n, e)| (*n, e))
    }

    fn add_exponent(&mut self, n: u64, e: BigInt) {
        if e.is_zero() {
            return;
        }
        let slot = self.exponents.entry(n).or_default();
        *slot += e;
        if slot.is_zero() {
            self.exponents.remove(&n);
        }
    }

    pub fn inv(&self) -> Self {
        CyclotomicRational {
            exponents: self.exponents.iter().map(|(n, e)| (*n, -e)).collect(),
        }
    }

    pub fn pow(&self, k: &BigInt) -> Self {
        let mut r = CyclotomicRational::one();
        for (n, e) in &self.exponents {
            r.add_exponent(*n, e * k);
        }
        r
    }

    /// Degree of the rational function, `sum n * e_n`. Realizations of ring
    /// elements satisfy `degree = -euler`.
    pub fn degree(&self) -> BigInt {
        self.exponents.iter().map(|(n, e)| BigInt::from(*n) * e).sum()
    }

    /// Expands into `numerator / denominator` integer polynomials (coefficient
    /// of `t^i` at index `i`). Fails when either exceeds `max_degree`.
    pub fn to_ratio(&self, max_degree: u64) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
        let mut num_deg = 0u64;
        let mut den_deg = 0u64;
        for (n, e) in &self.exponents {
            let mag = e.abs().to_u64().ok_or(Error::DegreeBound { needed: u64::MAX, bound: max_degree })?;
            let d = n.saturating_mul(mag);
            if e.is_positive() {
                num_deg = num_deg.saturating_add(d);
            } else {
                den_deg = den_deg.saturating_add(d);
            }
        }
        let needed = num_deg.max(den_deg);
        if needed > max_degree {
            return Err(Error::DegreeBound { needed, bound: max_degree });
        }
        let mut num = vec![BigInt::from(1)];
        let mut den = vec![BigInt::from(1)];
        for (n, e) in &self.exponents {
            let target = if e.is_positive() { &mut num } else { &mut den };
            for _ in 0..e.abs().to_u64().unwrap() {
                *target = times_one_minus(target, *n as usize);
            }
        }
        Ok((num, den))
    }
}

fn times_one_minus(p: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + n];
    for (i, c) in p.iter().enumerate() {
        out[i] += c;
        out[i + n] -= c;
    }
    out
}

impl Mul for &CyclotomicRational {
    type Output = CyclotomicRational;
    fn mul(self, rhs: &CyclotomicRational) -> CyclotomicRational {
        let mut r = self.clone();
        for (n, e) in &rhs.exponents {
            r.add_exponent(*n, e.clone());
        }
        r
    }
}

impl Mul for CyclotomicRational {
    type Output = CyclotomicRational;
    fn mul(self, rhs: CyclotomicRational) -> CyclotomicRational {
        &self * &rhs
    }
}

impl std::iter::Product for CyclotomicRational {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(CyclotomicRational::one(), |a, b| a * b)
    }
}

impl fmt::Display for CyclotomicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> =
            self.exponents.iter().map(|(n, e)| format!("(1-t^{n})^{e}")).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("zeta parse error: {0}")]
pub struct ParseZetaError(String);

impl FromStr for CyclotomicRational {
    type Err = ParseZetaError;

    /// Accepts the rendered form, e.g. `(1-t^2)^-1 (1-t^6)^1`, or `1`.
    /// `t` may stand for `t^1`, a missing exponent means 1.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        let mut r = CyclotomicRational::one();
        if s == "1" {
            return Ok(r);
        }
        let mut rest = s;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix("(1-t")
                .ok_or_else(|| ParseZetaError(format!("expected '(1-t' at '{rest}'")))?;
            let close = body.find(')').ok_or_else(|| ParseZetaError("missing ')'".into()))?;
            let n_str = &body[..close];
            let n: u64 = if n_str.is_empty() {
                1
            } else {
                n_str
                    .strip_prefix('^')
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| ParseZetaError(format!("bad power '{n_str}'")))?
            };
            if n == 0 {
                return Err(ParseZetaError("factor order must be positive".into()));
            }
            let after = &body[close + 1..];
            let (e, tail) = match after.strip_prefix('^') {
                Some(x) => {
                    let end = x.find(char::is_whitespace).unwrap_or(x.len());
                    let e: BigInt =
                        x[..end].parse().map_err(|_| ParseZetaError(format!("bad exponent '{}'", &x[..end])))?;
                    (e, &x[end..])
                }
                None => (BigInt::from(1), after),
            };
            r.add_exponent(n, e);
            rest = tail.trim_start();
        }
        Ok(r)
    }
}

/// Euler characteristic: `[mu_n] -> n`, `L -> 1`.
pub fn euler(x: &RingElement) -> BigInt {
    x.euler_characteristic()
}

/// Zeta function of the realization of `x`.
pub fn zeta(x: &RingElement) -> CyclotomicRational {
    let mut r = CyclotomicRational::one();
    for (m, c) in x.terms() {
        r.add_exponent(m.order, -c);
    }
    r
}

/// Zeta function of a motive expansion; residual strata of dimension zero
/// contribute `(1 - t^M)^{-sign * chi}` through the free `Z/M` action.
pub fn zeta_expansion(x: &MotiveExpansion) -> CyclotomicRational {
    let mut r = zeta(&x.known);
    for t in x.residual.iter().filter(|t| t.torus_pow == 0) {
        if t.degree > 0 {
            r.add_exponent(t.degree, -BigInt::from(t.sign) * BigInt::from(t.base_euler));
        }
    }
    r
}

/// `prod_{i in A} (1 - t^{|m_i|})^{-chi(E°_i)}` over singleton strata.
pub fn zeta_closed_form(config: &Configuration, a: &ComponentSet) -> Result<CyclotomicRational> {
    config.ensure_valid()?;
    if a.is_empty() {
        return Err(Error::EmptySelection);
    }
    let mut r = CyclotomicRational::one();
    for id in a {
        let m = config.multiplicity(id).ok_or_else(|| Error::UnknownComponent(id.clone()))?;
        let single: ComponentSet = [id.clone()].into();
        let Some(s) = config.stratum(&single) else { continue };
        if s.euler == 0 {
            continue;
        }
        if m == 0 {
            return Err(Error::Unrepresentable {
                stratum: single,
                reason: "zero holonomy with nonzero Euler characteristic".into(),
            });
        }
        r.add_exponent(m.unsigned_abs(), BigInt::from(-s.euler));
    }
    Ok(r)
}

/// `sum_{i in A} |m_i| * chi(E°_i)`.
pub fn euler_closed_form(config: &Configuration, a: &ComponentSet) -> Result<BigInt> {
    config.ensure_valid()?;
    if a.is_empty() {
        return Err(Error::EmptySelection);
    }
    let mut total = BigInt::zero();
    for id in a {
        let m = config.multiplicity(id).ok_or_else(|| Error::UnknownComponent(id.clone()))?;
        let single: ComponentSet = [id.clone()].into();
        if let Some(s) = config.stratum(&single) {
            total += BigInt::from(m.unsigned_abs()) * BigInt::from(s.euler);
        }
    }
    Ok(total)
}
