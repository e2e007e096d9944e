//! Exact coefficient arithmetic.
//!
//! Scalars are rationals or elements of cyclotomic fields `Q(zeta_d)`; both
//! implement [`Field`], over which [`UniPoly`] provides dense univariate
//! polynomial arithmetic. [`negligible`] splits rational polynomials into
//! their `x`-power, cyclotomic and residual parts.

mod cyclo;
mod negligible;
mod poly;
mod rational;

use std::fmt;

pub use cyclo::{cyclotomic_poly, euler_phi, twist_poly, CycloElem};
pub use negligible::{
    factor_negligible, is_negligible, negligible_part, roots_of_unity_order_is_negligible,
    NegligibilityCertificate,
};
pub use poly::UniPoly;
pub use rational::{frac, rat, ParseRationalError, Rational};

/// A field of characteristic zero containing the rationals.
///
/// Methods take references so generic code does not have to clone operands.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_rational(r: &Rational) -> Self;

    /// Product of all Galois conjugates of `p`; a polynomial with rational
    /// coefficients whose roots are exactly the conjugates of the roots of `p`.
    fn norm_poly(p: &UniPoly<Self>) -> UniPoly<Rational>;

    /// The value as a rational, when it lies in `Q`.
    fn as_rational(&self) -> Option<Rational>;

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from(n))
    }

    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("zero input")]
    ZeroInput,
}
