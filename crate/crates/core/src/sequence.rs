//! Descriptions of sequences that can produce any prefix `f(0..=N)`.

use serde::{Deserialize, Serialize};

use crate::exactalg::{Rational, UniPoly};
use crate::lrs::LRSSpec;
use crate::multdecomp::{is_prime, synthesize, MultiplicativeDecomposition};
use crate::regular::LinRep;
use crate::series::{rational_to_series, SeriesError, TruncSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("sequence has values up to n = {have}, {needed} requested")]
    NotEnoughValues { needed: usize, have: usize },
    #[error("offset must be 0 or 1, got {0}")]
    BadOffset(usize),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("modulus must be positive")]
    BadModulus,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn default_offset() -> usize {
    1
}

/// A sequence `f(0), f(1), ...`. Multiplicative built-ins have `f(0) = 0`;
/// the constant sequence has `f(0) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SequenceSpec {
    /// Explicit values starting at index `offset`; with offset 1, `f(0) = 0`.
    Values {
        values: Vec<Rational>,
        #[serde(default = "default_offset")]
        offset: usize,
    },
    /// Coefficients of `num / den`.
    Rational {
        num: UniPoly<Rational>,
        den: UniPoly<Rational>,
    },
    Linrep {
        rep: LinRep,
    },
    Lrs {
        lrs: LRSSpec,
    },
    Decomposition {
        decomposition: MultiplicativeDecomposition,
    },
    /// `f(n) = n`.
    Identity,
    /// `f(n) = 1`.
    Constant,
    /// `2^(val_2(n))`.
    TwoAdicPower,
    /// `n / 2^(val_2(n))`.
    OddPart,
    /// `[gcd(n, d) = 1]`.
    PrincipalChar {
        modulus: u64,
    },
    /// Legendre symbol `(n / p)`.
    QuadraticChar {
        prime: u64,
    },
}

fn val2(n: u64) -> u32 {
    n.trailing_zeros()
}

pub(crate) fn legendre(n: u64, p: u64) -> i64 {
    let r = n % p;
    if r == 0 {
        return 0;
    }
    let mut acc = 1u64;
    let mut base = r;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::Integer::gcd(&a, &b)
}

impl SequenceSpec {
    /// `f(0..=n)`.
    pub fn values(&self, n: usize) -> Result<Vec<Rational>, SpecError> {
        let ints = |f: &dyn Fn(u64) -> i64| -> Vec<Rational> {
            (0..=n as u64)
                .map(|i| {
                    if i == 0 {
                        <Rational as crate::exactalg::Field>::zero()
                    } else {
                        Rational::from(f(i))
                    }
                })
                .collect()
        };
        Ok(match self {
            SequenceSpec::Values { values, offset } => {
                if *offset > 1 {
                    return Err(SpecError::BadOffset(*offset));
                }
                let have = (values.len() + offset).saturating_sub(1);
                if values.is_empty() || have < n {
                    return Err(SpecError::NotEnoughValues { needed: n, have });
                }
                let mut out = vec![<Rational as crate::exactalg::Field>::zero(); *offset];
                out.extend(values.iter().take(n + 1 - offset).cloned());
                out
            }
            SequenceSpec::Rational { num, den } => {
                rational_to_series(num, den, n)?.coeffs().to_vec()
            }
            SequenceSpec::Linrep { rep } => rep.values(n),
            SequenceSpec::Lrs { lrs } => lrs.values(n + 1),
            SequenceSpec::Decomposition { decomposition } => synthesize(decomposition, n),
            SequenceSpec::Identity => ints(&|i| i as i64),
            SequenceSpec::Constant => vec![<Rational as crate::exactalg::Field>::one(); n + 1],
            SequenceSpec::TwoAdicPower => ints(&|i| 1i64 << val2(i)),
            SequenceSpec::OddPart => ints(&|i| (i >> val2(i)) as i64),
            SequenceSpec::PrincipalChar { modulus } => {
                if *modulus == 0 {
                    return Err(SpecError::BadModulus);
                }
                ints(&|i| (gcd(i, *modulus) == 1) as i64)
            }
            SequenceSpec::QuadraticChar { prime } => {
                if *prime < 3 || !is_prime(*prime) {
                    return Err(SpecError::NotOddPrime(*prime));
                }
                ints(&|i| legendre(i, *prime))
            }
        })
    }

    /// Whether the sequence is multiplicative by construction.
    pub fn is_multiplicative_builtin(&self) -> bool {
        matches!(
            self,
            SequenceSpec::Identity
                | SequenceSpec::TwoAdicPower
                | SequenceSpec::OddPart
                | SequenceSpec::PrincipalChar { .. }
                | SequenceSpec::QuadraticChar { .. }
                | SequenceSpec::Decomposition { .. }
        )
    }
}

/// `sum_{n <= N} f(n) x^n`.
pub fn spec_to_series(
    spec: &SequenceSpec,
    order: usize,
) -> Result<TruncSeries<Rational>, SpecError> {
    Ok(TruncSeries::new(spec.values(order)?).expect("nonempty"))
}
