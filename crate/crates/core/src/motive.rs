//! The motivic infinite cyclic cover
//!
//! ```text
//! S^A = sum_{I : I meets A} (-1)^{|I|-1} [cover of E°_I] (L-1)^{|I|-1}
//! ```
//!
//! Strata whose cover has no representable class are either reported as an
//! error ([`motive`]) or carried along as numeric data ([`motive_expansion`]),
//! which is enough for the Euler characteristic and the zeta function.

use std::fmt;

use num_bigint::BigInt;

use crate::config::{gcd_over, render_set, stratum_cover, ComponentSet, Configuration, Stratum};
use crate::error::{Error, Result};
use crate::ring::{render_factored, RingElement};

/// Signed contribution of one stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumTerm {
    pub stratum: ComponentSet,
    pub sign: i32,
    pub cover: RingElement,
    /// Exponent of `(L-1)`, i.e. `|I| - 1`.
    pub torus_pow: u32,
    pub term: RingElement,
}

impl fmt::Display for StratumTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} = {}",
            render_set(&self.stratum),
            render_factored(self.sign, &self.cover, self.torus_pow),
            self.term
        )
    }
}

/// A stratum whose cover class is not available, kept as numeric data.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ResidualTerm {
    pub stratum: ComponentSet,
    pub sign: i32,
    pub torus_pow: u32,
    /// Number of connected components of the cover.
    pub cover_components: u64,
    /// Degree of the cover, `m_I`.
    pub degree: u64,
    /// Euler characteristic of the base stratum.
    pub base_euler: i64,
}

impl ResidualTerm {
    /// Everything except the stratum label.
    pub fn signature(&self) -> (i32, u32, u64, u64, i64) {
        (self.sign, self.torus_pow, self.cover_components, self.degree, self.base_euler)
    }
}

/// Known part of the motive plus residual strata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotiveExpansion {
    pub known: RingElement,
    pub residual: Vec<ResidualTerm>,
}

impl MotiveExpansion {
    pub fn is_complete(&self) -> bool {
        self.residual.is_empty()
    }

    /// Sorted residual signatures; two expansions describe the same motive
    /// when known parts and these agree.
    pub fn residual_signature(&self) -> Vec<(i32, u32, u64, u64, i64)> {
        let mut v: Vec<_> = self.residual.iter().map(ResidualTerm::signature).collect();
        v.sort();
        v
    }

    pub fn equivalent(&self, other: &MotiveExpansion) -> bool {
        self.known == other.known && self.residual_signature() == other.residual_signature()
    }
}

fn sign_of(set: &ComponentSet) -> i32 {
    if set.len() % 2 == 1 {
        1
    } else {
        -1
    }
}

fn term_for(config: &Configuration, s: &Stratum) -> Result<StratumTerm> {
    let cover = stratum_cover(config, s)?;
    let torus_pow = (s.components.len() - 1) as u32;
    let sign = sign_of(&s.components);
    let mut term = &cover * &RingElement::torus(torus_pow);
    if sign < 0 {
        term = -term;
    }
    Ok(StratumTerm { stratum: s.components.clone(), sign, cover, torus_pow, term })
}

fn check_selection(config: &Configuration, a: &ComponentSet) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptySelection);
    }
    for id in a {
        if config.component(id).is_none() {
            return Err(Error::UnknownComponent(id.clone()));
        }
    }
    Ok(())
}

fn meets(s: &Stratum, a: &ComponentSet) -> bool {
    !s.components.is_disjoint(a)
}

/// Per-stratum terms of the strata accepted by `filter`, in stratum order.
/// Strata with zero class are skipped.
pub fn breakdown_restricted(
    config: &Configuration,
    filter: impl Fn(&Stratum) -> bool,
) -> Result<Vec<StratumTerm>> {
    config.ensure_valid()?;
    breakdown_unchecked(config, filter)
}

pub(crate) fn breakdown_unchecked(
    config: &Configuration,
    filter: impl Fn(&Stratum) -> bool,
) -> Result<Vec<StratumTerm>> {
    config
        .strata()
        .filter(|s| filter(s) && !s.is_null())
        .map(|s| term_for(config, s))
        .collect()
}

pub fn breakdown(config: &Configuration, a: &ComponentSet) -> Result<Vec<StratumTerm>> {
    check_selection(config, a)?;
    breakdown_restricted(config, |s| meets(s, a))
}

/// Partial sum over the strata accepted by `filter`.
pub fn motive_restricted(config: &Configuration, filter: impl Fn(&Stratum) -> bool) -> Result<RingElement> {
    Ok(breakdown_restricted(config, filter)?.into_iter().map(|t| t.term).sum())
}

/// `S^A` for the selection `A`.
pub fn motive(config: &Configuration, a: &ComponentSet) -> Result<RingElement> {
    check_selection(config, a)?;
    motive_restricted(config, |s| meets(s, a))
}

/// `S^J`, the motive with every component selected.
pub fn full_motive(config: &Configuration) -> Result<RingElement> {
    motive(config, &config.component_ids())
}

/// Like [`motive`] but unrepresentable strata land in the residual list.
pub fn motive_expansion(config: &Configuration, a: &ComponentSet) -> Result<MotiveExpansion> {
    config.ensure_valid()?;
    check_selection(config, a)?;
    expansion_unchecked(config, a)
}

pub(crate) fn expansion_unchecked(config: &Configuration, a: &ComponentSet) -> Result<MotiveExpansion> {
    let mut known = RingElement::zero();
    let mut residual = Vec::new();
    for s in config.strata().filter(|s| meets(s, a) && !s.is_null()) {
        match term_for(config, s) {
            Ok(t) => known += t.term,
            Err(Error::Unrepresentable { .. }) => {
                let mult = |id: &_| config.multiplicity(id);
                residual.push(ResidualTerm {
                    stratum: s.components.clone(),
                    sign: sign_of(&s.components),
                    torus_pow: (s.components.len() - 1) as u32,
                    cover_components: gcd_over(&s.adjacency, mult)?,
                    degree: gcd_over(&s.components, mult)?,
                    base_euler: s.euler,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(MotiveExpansion { known, residual })
}

impl MotiveExpansion {
    /// Euler characteristic of the realized cover.
    pub fn euler(&self) -> BigInt {
        let mut e = self.known.euler_characteristic();
        for r in self.residual.iter().filter(|r| r.torus_pow == 0) {
            e += BigInt::from(r.sign) * BigInt::from(r.degree) * BigInt::from(r.base_euler);
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{set, Component};

    fn example_a(m1: i64, m2: i64) -> Configuration {
        let both = set([1u32, 2]);
        Configuration::checked(
            2,
            [Component::new(1u32, m1), Component::new(2u32, m2)],
            [
                Stratum::torus(set([1u32]), RingElement::torus(1)).with_adjacency(both.clone()),
                Stratum::torus(set([2u32]), RingElement::torus(1)).with_adjacency(both.clone()),
                Stratum::torus(both.clone(), RingElement::one()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn point_term_of_example_a() {
        let c = example_a(4, 6);
        let t = motive_restricted(&c, |s| s.components.len() == 2).unwrap();
        assert_eq!(t, "-[mu_2]*(L-1)".parse().unwrap());
        let b = breakdown(&c, &set([1u32, 2])).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b[1].to_string(), "{1,2}: -[mu_2]*(L-1) = -[mu_2]*L + [mu_2]");
    }

    #[test]
    fn empty_filter_and_empty_selection() {
        let c = example_a(2, 3);
        assert!(motive_restricted(&c, |_| false).unwrap().is_zero());
        assert!(matches!(motive(&c, &ComponentSet::new()), Err(Error::EmptySelection)));
        assert!(matches!(motive(&c, &set([9u32])), Err(Error::UnknownComponent(_))));
    }

    #[test]
    fn single_component() {
        let c = Configuration::checked(
            3,
            [Component::new(1u32, 5)],
            [Stratum::torus(set([1u32]), "L^2+L+1".parse().unwrap())],
        )
        .unwrap();
        assert_eq!(full_motive(&c).unwrap(), "[mu_5]*(L^2+L+1)".parse().unwrap());
    }

    #[test]
    fn residual_strata() {
        let mut s = Stratum::torus(set([1u32]), "L-2".parse().unwrap());
        s.torus_cell = false;
        let c = Configuration::checked(2, [Component::new(1u32, 3)], [s]).unwrap();
        assert!(matches!(full_motive(&c), Err(Error::Unrepresentable { .. })));
        let x = motive_expansion(&c, &set([1u32])).unwrap();
        assert!(x.known.is_zero());
        assert_eq!(x.residual.len(), 1);
        assert_eq!(x.residual[0].degree, 3);
        assert_eq!(x.euler(), BigInt::from(-3));
    }
}
