//! Twisted Alexander polynomials of knots and links from permutation
//! representations of the link group.
//!
//! The pipeline: a braid word or PD code becomes a group presentation
//! ([`knot_codec`], [`fpgroup`]); homomorphisms into `S_k` are enumerated up
//! to conjugation ([`perm`]); each one twists the Fox-calculus chain complex
//! ([`twisted`]) whose first homology has an order in `R[t^{±1}]`
//! ([`laurent`]); [`invariants`] multiplies these into `Δ^k` and derives
//! verdicts, and [`covers`] checks the twisted side against finite covers.
//!
//! Arithmetic is generic over [`scalar::Scalar`]; the integer and prime-field
//! instances are [`Integer`] and [`Fp`].

pub mod covers;
pub mod fpgroup;
pub mod invariants;
pub mod knot_codec;
pub mod laurent;
pub mod perm;
pub mod scalar;
pub mod twisted;

pub use laurent::{LaurentPoly, NormalizedPoly, PolyMatrix};
pub use scalar::{Fp, Integer};

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F13 = Fp<13>;
pub type F31 = Fp<31>;

/// Primes accepted by [`with_prime!`].
pub const SUPPORTED_PRIMES: &[u32] = &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61];

/// Run `$body` with `$P` bound to the runtime prime `$p` as a const
/// generic, or evaluate `$none` when `$p` is not in [`SUPPORTED_PRIMES`].
#[macro_export]
macro_rules! with_prime {
    ($p:expr, $P:ident => $body:expr, _ => $none:expr) => {
        $crate::with_prime!(@arms $p, $P, $body, $none; 2 3 5 7 11 13 17 19 23 29 31 37 41 43 47 53 59 61)
    };
    (@arms $p:expr, $P:ident, $body:expr, $none:expr; $($q:literal)*) => {
        match $p {
            $($q => {
                const $P: u32 = $q;
                $body
            })*
            _ => $none,
        }
    };
}

#[cfg(test)]
mod tests {
    #[test]
    fn prime_dispatch() {
        for &p in crate::SUPPORTED_PRIMES {
            let got = with_prime!(p, P => <crate::Fp<P> as crate::scalar::FieldScalar>::characteristic(), _ => 0);
            assert_eq!(got, p);
        }
        assert_eq!(with_prime!(4u32, P => P, _ => 0), 0);
    }
}
