//! Coefficient rings: the integers and residue rings `Z/m`.
//!
//! All arithmetic is exact over arbitrary-precision integers. Residue
//! classes are kept as canonical representatives in `[0, m)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A coefficient ring: either `Z` or `Z/m` with `m >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Integers,
    Residue(BigInt),
}

impl CoeffRing {
    /// The residue ring `Z/m`.
    pub fn residue(m: impl Into<BigInt>) -> Result<Self> {
        let m = m.into();
        if m < BigInt::from(2) {
            return Err(Error::InvalidModulus);
        }
        Ok(CoeffRing::Residue(m))
    }

    /// The residue ring `Z/2^n`.
    pub fn residue_pow2(n: u32) -> Self {
        CoeffRing::Residue(BigInt::one() << n)
    }

    pub fn is_integers(&self) -> bool {
        matches!(self, CoeffRing::Integers)
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        match self {
            CoeffRing::Integers => None,
            CoeffRing::Residue(m) => Some(m),
        }
    }

    /// Exponent `n` when the ring is `Z/2^n`.
    pub fn two_exponent(&self) -> Option<u32> {
        let m = self.modulus()?;
        let (sign, digits) = m.to_u32_digits();
        if sign != num_bigint::Sign::Plus {
            return None;
        }
        let bits = m.bits();
        // m is a power of two exactly when it has a single set bit
        let mut ones = 0u64;
        for d in &digits {
            ones += d.count_ones() as u64;
        }
        if ones == 1 {
            Some((bits - 1) as u32)
        } else {
            None
        }
    }

    /// Canonical representative of `e` in this ring.
    pub fn reduce(&self, e: &BigInt) -> BigInt {
        match self {
            CoeffRing::Integers => e.clone(),
            CoeffRing::Residue(m) => e.mod_floor(m),
        }
    }

    /// Representative of smallest absolute value, breaking the tie at
    /// `m/2` towards the positive side.
    pub fn balanced_lift(&self, e: &BigInt) -> BigInt {
        match self {
            CoeffRing::Integers => e.clone(),
            CoeffRing::Residue(m) => {
                let r = e.mod_floor(m);
                if &r * 2 > *m {
                    r - m
                } else {
                    r
                }
            }
        }
    }

    pub fn is_zero(&self, e: &BigInt) -> bool {
        self.reduce(e).is_zero()
    }

    pub fn is_unit(&self, e: &BigInt) -> bool {
        match self {
            CoeffRing::Integers => e.abs().is_one(),
            CoeffRing::Residue(m) => self.reduce(e).gcd(m).is_one(),
        }
    }

    /// Multiplicative inverse, when `e` is a unit.
    pub fn inverse(&self, e: &BigInt) -> Result<BigInt> {
        match self {
            CoeffRing::Integers => {
                if e.abs().is_one() {
                    Ok(e.clone())
                } else {
                    Err(Error::NotAUnit(e.to_string()))
                }
            }
            CoeffRing::Residue(m) => {
                let r = self.reduce(e);
                let ext = r.extended_gcd(m);
                if !ext.gcd.is_one() {
                    return Err(Error::NotAUnit(r.to_string()));
                }
                Ok(ext.x.mod_floor(m))
            }
        }
    }

    /// 2-adic valuation of `e` in `Z/2^n`, with `val(0) = n`.
    pub fn two_valuation(&self, e: &BigInt) -> Result<u32> {
        let n = self.two_exponent().ok_or(Error::ExpectedTwoPowerResidue)?;
        let r = self.reduce(e);
        if r.is_zero() {
            return Ok(n);
        }
        Ok(r.trailing_zeros().unwrap_or(0) as u32)
    }

    /// Human-readable ring tag, also used by the JSON schema.
    pub fn tag(&self) -> String {
        match self {
            CoeffRing::Integers => "Z".to_string(),
            CoeffRing::Residue(m) => format!("Z/{m}"),
        }
    }

    /// Parses a ring tag of the shape `"Z"` or `"Z/m"`.
    pub fn from_tag(tag: &str) -> Result<Self> {
        if tag == "Z" {
            return Ok(CoeffRing::Integers);
        }
        let rest = tag
            .strip_prefix("Z/")
            .ok_or_else(|| Error::InvalidInput(format!("unknown ring tag {tag:?}")))?;
        let m: BigInt = rest
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad modulus in ring tag {tag:?}")))?;
        CoeffRing::residue(m)
    }
}

impl std::fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.tag())
    }
}

/// The inverse of an odd unit written as `u^{-1} = 2k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitDecomposition {
    pub inverse: BigInt,
    pub k: BigInt,
}

/// For an odd `u` in `Z/2^n`, computes `u^{-1}` and the canonical `k`
/// with `u^{-1} = 2k + 1`.
pub fn unit_decompose(ring: &CoeffRing, u: &BigInt) -> Result<UnitDecomposition> {
    ring.two_exponent().ok_or(Error::ExpectedTwoPowerResidue)?;
    let r = ring.reduce(u);
    if r.is_even() {
        return Err(Error::NotAUnit(r.to_string()));
    }
    let inverse = ring.inverse(&r)?;
    let k = (&inverse - BigInt::one()) / BigInt::from(2);
    Ok(UnitDecomposition { inverse, k })
}
