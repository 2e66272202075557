//! Coefficient rings: the integers and prime fields.
//!
//! Everything above this module is generic over [`Scalar`], which extends the
//! `num-traits` ring vocabulary with the gcd-domain operations that exact
//! polynomial linear algebra needs (exact division, gcd, unit normalization).

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Ring tag used in reports and configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingTag {
    Integers,
    Fp(u32),
}

impl Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Integers => write!(f, "Z"),
            RingTag::Fp(p) => write!(f, "F_{p}"),
        }
    }
}

/// A commutative ring with gcds in which every nonzero element has a
/// canonical associate.
pub trait GcdRing:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// `Some(q)` with `q * d == self`, or `None` when `d` does not divide `self`.
    fn exact_div(&self, d: &Self) -> Option<Self>;

    /// A canonical gcd (zero only when both inputs are zero).
    fn gcd(&self, other: &Self) -> Self;

    /// A unit `u` such that `self * u` is the canonical associate of `self`.
    /// Returns one for zero.
    fn unit_normal(&self) -> Self;

    fn is_unit(&self) -> bool;

    /// Whether every nonzero element is a unit.
    fn is_field() -> bool;
}

/// Coefficient scalars of Laurent polynomials.
pub trait Scalar: GcdRing + Eq + Ord + Hash + Display + Send + Sync + 'static {
    fn from_i64(v: i64) -> Self;

    fn ring() -> RingTag;

    /// Multiplicative inverse when it exists.
    fn try_inv(&self) -> Option<Self>;

    /// Sign used when choosing a canonical representative: positive
    /// integers and every nonzero field element count as positive.
    fn is_positive(&self) -> bool;
}

/// Scalars forming a field.
pub trait FieldScalar: Scalar + Copy {
    fn inv(&self) -> Self;
    fn characteristic() -> u32;
}

/// Arbitrary-precision integers.
pub type Integer = BigInt;

impl GcdRing for BigInt {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return if self.is_zero() { Some(BigInt::zero()) } else { None };
        }
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    fn gcd(&self, other: &Self) -> Self {
        num_integer::Integer::gcd(self, other)
    }

    fn unit_normal(&self) -> Self {
        if self.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }

    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }

    fn is_field() -> bool {
        false
    }
}

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn ring() -> RingTag {
        RingTag::Integers
    }

    fn try_inv(&self) -> Option<Self> {
        self.is_unit().then(|| self.clone())
    }

    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

/// Element of the prime field `Z/PZ`, stored in `[0, P)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    pub const fn new(v: u32) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u32> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 as u64 + rhs.0 as u64;
        Fp((s % P as u64) as u32)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let s = self.0 as u64 + P as u64 - rhs.0 as u64;
        Fp((s % P as u64) as u32)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u32> GcdRing for Fp<P> {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return self.is_zero().then_some(*self);
        }
        Some(*self * d.inv())
    }

    fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() && other.is_zero() {
            Fp(0)
        } else {
            Fp::one()
        }
    }

    fn unit_normal(&self) -> Self {
        if self.is_zero() {
            Fp::one()
        } else {
            self.inv()
        }
    }

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn is_field() -> bool {
        true
    }
}

impl<const P: u32> Scalar for Fp<P> {
    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }

    fn ring() -> RingTag {
        RingTag::Fp(P)
    }

    fn try_inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.inv())
    }

    fn is_positive(&self) -> bool {
        !self.is_zero()
    }
}

impl<const P: u32> FieldScalar for Fp<P> {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero in F_{P}");
        self.pow(P as u64 - 2)
    }

    fn characteristic() -> u32 {
        P
    }
}

/// Reduce an integer modulo `P`.
pub fn reduce_mod<const P: u32>(v: &BigInt) -> Fp<P> {
    let r = v.mod_floor(&BigInt::from(P));
    Fp(u32::try_from(&r).expect("residue fits in u32"))
}

/// Small trial-division primality test used to validate configured moduli.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
