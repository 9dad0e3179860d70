//! Evaluable finite colourings.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rado::{is_prime, rado_colour, rado_colour_big};
use crate::witness::nu;

pub type Colour = u64;

/// Colour given to `1` by colourings that are only defined on `N \ {1}`.
/// No real colour of any supported spec equals it.
pub const SENTINEL: Colour = u64::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ColouringSpec {
    Constant { colour: Colour },
    /// `x mod m`.
    Mod { m: u64 },
    /// `c_p`.
    RadoP { p: u64 },
    /// `c_p ∘ ν`.
    RadoPNu { p: u64 },
    /// `inner ∘ ν`.
    Nu { inner: Box<ColouringSpec> },
    /// `colours[x - 1]` for `x <= colours.len()`, `default` beyond.
    Table { colours: Vec<Colour>, default: Colour },
}

impl ColouringSpec {
    pub fn constant(colour: Colour) -> Self {
        Self::Constant { colour }
    }

    pub fn modulo(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("modulus must be at least 1".into()));
        }
        Ok(Self::Mod { m })
    }

    pub fn rado(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self::RadoP { p })
    }

    pub fn rado_nu(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self::RadoPNu { p })
    }

    pub fn compose_nu(inner: ColouringSpec) -> Self {
        Self::Nu { inner: Box::new(inner) }
    }

    pub fn table(colours: Vec<Colour>, default: Colour) -> Self {
        Self::Table { colours, default }
    }

    /// Colour of `x`. `0` and, for ν-based specs, `1` get [`SENTINEL`].
    pub fn colour(&self, x: u64) -> Colour {
        if x == 0 {
            return SENTINEL;
        }
        match self {
            Self::Constant { colour } => *colour,
            Self::Mod { m } => x % m,
            Self::RadoP { p } => rado_colour(*p, x).unwrap_or(SENTINEL),
            Self::RadoPNu { p } => match nu(x) {
                Ok(v) => rado_colour(*p, v).unwrap_or(SENTINEL),
                Err(_) => SENTINEL,
            },
            Self::Nu { inner } => match nu(x) {
                Ok(v) => inner.colour(v),
                Err(_) => SENTINEL,
            },
            Self::Table { colours, default } => {
                colours.get((x - 1) as usize).copied().unwrap_or(*default)
            }
        }
    }

    /// Colour of a value too large for `u64`, where it can be computed
    /// without factoring.
    pub fn colour_big(&self, x: &BigUint) -> Option<Colour> {
        if let Some(small) = x.to_u64() {
            return Some(self.colour(small));
        }
        match self {
            Self::Constant { colour } => Some(*colour),
            Self::Mod { m } => (x % m).to_u64(),
            Self::RadoP { p } => rado_colour_big(*p, x).ok(),
            Self::Table { default, .. } => Some(*default),
            Self::RadoPNu { .. } | Self::Nu { .. } => None,
        }
    }

    /// `colour(x)` for `x` in `1..=bound`, indexed by `x`; slot 0 unused.
    pub fn table_upto(&self, bound: u64) -> Vec<Colour> {
        std::iter::once(SENTINEL).chain((1..=bound).map(|x| self.colour(x))).collect()
    }

    /// Whether a table spec is being read past its explicit range.
    pub fn beyond_range(&self, x: u64) -> bool {
        matches!(self, Self::Table { colours, .. } if x as usize > colours.len())
    }

    /// Number of distinct colours on the spec's domain (ν-based specs on
    /// `x >= 2`), not counting the sentinel.
    pub fn colour_count(&self) -> u64 {
        match self {
            Self::Constant { .. } => 1,
            Self::Mod { m } => *m,
            Self::RadoP { p } | Self::RadoPNu { p } => p - 1,
            Self::Nu { inner } => inner.colour_count(),
            Self::Table { colours, default } => {
                let mut set: BTreeSet<Colour> = colours.iter().copied().collect();
                set.insert(*default);
                set.len() as u64
            }
        }
    }
}

/// Largest `x` accepted by [`d_restrict`].
pub const MAX_RESTRICT_INDEX: u64 = 64;

/// `f_d(x) = f(2^(d·2^x))`, computed without building the power of two.
pub fn d_restrict(col: &ColouringSpec, d: u64, x: u64) -> Result<Colour> {
    if d == 0 {
        return Err(Error::Domain("d must be positive".into()));
    }
    if x > MAX_RESTRICT_INDEX {
        return Err(Error::RestrictionUnsupported(format!(
            "index {x} exceeds {MAX_RESTRICT_INDEX}"
        )));
    }
    // 2^exponent is the sequence element; ν of it is the exponent itself.
    let exponent = BigUint::from(d) << x;
    let two = BigUint::from(2u32);
    match col {
        ColouringSpec::Constant { colour } => Ok(*colour),
        ColouringSpec::Mod { m } => {
            let r = two.modpow(&exponent, &BigUint::from(*m));
            Ok(r.to_u64().expect("residue below modulus"))
        }
        ColouringSpec::RadoP { p } => {
            if *p == 2 {
                return Ok(1);
            }
            let r = two.modpow(&exponent, &BigUint::from(*p));
            Ok(r.to_u64().expect("residue below modulus"))
        }
        ColouringSpec::RadoPNu { p } => rado_colour_big(*p, &exponent),
        ColouringSpec::Nu { inner } => inner.colour_big(&exponent).ok_or_else(|| {
            Error::RestrictionUnsupported(format!("cannot evaluate the inner colouring at {exponent}"))
        }),
        ColouringSpec::Table { colours, .. } => {
            let len = BigUint::from(colours.len());
            match exponent.to_u32() {
                Some(e) if (BigUint::one() << e) <= len => {
                    Ok(colours[(1usize << e) - 1])
                }
                _ => Err(Error::RestrictionUnsupported(format!(
                    "2^{exponent} lies beyond the table's {} entries",
                    colours.len()
                ))),
            }
        }
    }
}
