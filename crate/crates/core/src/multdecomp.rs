//! Multiplicative sequences in the form `f(p^i m) = g(i) m^r chi(m)` (`p` not
//! dividing `m`), and the cyclotomic identities behind them.
//!
//! Sequences are value vectors indexed by `n`, so `values[n] = f(n)`; `f(0)`
//! is carried along but ignored by everything multiplicative.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::exactalg::{CycloElem, Field, Rational, UniPoly};
use crate::lrs::{
    berlekamp_massey, power_periodic_decompose, EventuallyPeriodic, LRSSpec, LrsError,
};
use crate::series::TruncSeries;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecompError {
    #[error("not multiplicative: f({m}*{n}) != f({m}) f({n})")]
    NotMultiplicative { m: u64, n: u64 },
    #[error("need values up to at least n = {needed}, got {have}")]
    TooShort { needed: usize, have: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("no linear recurrence fits the data (the generating series does not look rational)")]
    NotRational,
    #[error("decomposition does not reproduce the data at n = {n}")]
    VerificationFailed { n: u64 },
    #[error("q must be an odd prime, got {0}")]
    BadQ(u64),
    #[error("H identity failed at exponent {0}")]
    HIdentityFailed(usize),
    #[error(transparent)]
    Lrs(#[from] LrsError),
}

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&q| is_prime(q)).collect()
}

/// `Some(p)` when `k = p^e` with `e >= 1`.
pub fn prime_power_base(k: u64) -> Option<u64> {
    let p = (2..=k).find(|d| k.is_multiple_of(*d))?;
    let mut m = k;
    while m.is_multiple_of(p) {
        m /= p;
    }
    (m == 1).then_some(p)
}

/// `(i, m)` with `n = p^i m` and `p` not dividing `m`.
pub fn split_p(mut n: u64, p: u64) -> (u32, u64) {
    let mut i = 0;
    while n.is_multiple_of(p) {
        n /= p;
        i += 1;
    }
    (i, n)
}

/// `f(p^i m) = g(i) m^r chi(m)` for `p` not dividing `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicativeDecomposition {
    pub p: u64,
    pub g: LRSSpec,
    pub r: u32,
    pub chi: EventuallyPeriodic,
}

impl MultiplicativeDecomposition {
    pub fn eval(&self, n: u64) -> Rational {
        if n == 0 {
            return Rational::zero();
        }
        let (i, m) = split_p(n, self.p);
        self.g
            .eval(i as usize)
            .mul(&Rational::from(m).pow(self.r as i32))
            .mul(&self.chi.chi(m))
    }

    /// `f` is determined by the data exactly when `chi` is not eventually zero.
    pub fn is_uniquely_determined(&self) -> bool {
        !self.chi.is_eventually_zero()
    }
}

/// `f(0..=n)` with `f(0) = 0`.
pub fn synthesize(dec: &MultiplicativeDecomposition, n: usize) -> Vec<Rational> {
    let ladder = dec.g.values(64);
    let mut out = Vec::with_capacity(n + 1);
    out.push(Rational::zero());
    for v in 1..=n as u64 {
        let (i, m) = split_p(v, dec.p);
        let gi = ladder
            .get(i as usize)
            .cloned()
            .unwrap_or_else(|| dec.g.eval(i as usize));
        out.push(
            gi.mul(&Rational::from(m).pow(dec.r as i32))
                .mul(&dec.chi.chi(m)),
        );
    }
    out
}

/// `chi * [p does not divide n]`, in minimal form.
pub fn vanish_on_multiples(chi: &EventuallyPeriodic, p: u64) -> EventuallyPeriodic {
    let s = chi.pre.len();
    let t = chi.per.len().lcm(&(p as usize));
    let at = |n: usize| {
        if (n as u64).is_multiple_of(p) {
            Rational::zero()
        } else {
            chi.chi(n as u64)
        }
    };
    let pre = (1..=s).map(at).collect();
    let per = (s + 1..=s + t).map(at).collect();
    EventuallyPeriodic { pre, per }.minimize()
}

fn zero_decomposition(p: u64) -> MultiplicativeDecomposition {
    MultiplicativeDecomposition {
        p,
        g: LRSSpec::constant(Rational::one()),
        r: 0,
        chi: EventuallyPeriodic::constant(Rational::zero()),
    }
}

/// Canonical representative:
/// * `g(0) = 1` with `g` given by its minimal recurrence,
/// * `chi` vanishing on multiples of `p`, in minimal form,
/// * for eventually zero `chi`, `r = 0` with `m^r` absorbed into `chi`
///   (such decompositions are not unique, see [`MultiplicativeDecomposition::is_uniquely_determined`]).
pub fn canonicalize(dec: &MultiplicativeDecomposition) -> MultiplicativeDecomposition {
    let g0 = dec.g.eval(0);
    let chi = vanish_on_multiples(&dec.chi, dec.p);
    if g0.is_zero() || (chi.pre.iter().chain(&chi.per)).all(Rational::is_zero) {
        return zero_decomposition(dec.p);
    }
    let chi = chi.scale(&g0);
    let inv = g0.inv().expect("nonzero");
    let gvals: Vec<Rational> = dec
        .g
        .values(2 * dec.g.order().max(1))
        .iter()
        .map(|v| v.mul(&inv))
        .collect();
    let g = berlekamp_massey(&gvals).lrs;
    if chi.is_eventually_zero() {
        let pre = chi
            .pre
            .iter()
            .enumerate()
            .map(|(i, c)| c.mul(&Rational::from((i + 1) as u64).pow(dec.r as i32)))
            .collect();
        let chi = EventuallyPeriodic {
            pre,
            per: chi.per.clone(),
        }
        .minimize();
        return MultiplicativeDecomposition {
            p: dec.p,
            g,
            r: 0,
            chi,
        };
    }
    MultiplicativeDecomposition {
        p: dec.p,
        g,
        r: dec.r,
        chi,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum MultStatus {
    Multiplicative,
    CounterexampleAt { m: u64, n: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicativityReport {
    pub verified_to: u64,
    pub status: MultStatus,
    /// Primes `q` with some `f(q^i) != f(q) f(q^(i-1))`, `q^i <= N`.
    pub bad_primes: Vec<u64>,
    /// The other primes up to `N`.
    pub completely_multiplicative_primes: Vec<u64>,
}

/// Checks `f(mn) = f(m) f(n)` on all coprime pairs with `mn <= N`, and the
/// prime-power ladders `f(q^i) = f(q) f(q^(i-1))`.
pub fn check_multiplicative(values: &[Rational]) -> MultiplicativityReport {
    let n_max = values.len().saturating_sub(1) as u64;
    let f = |n: u64| &values[n as usize];
    let mut status = MultStatus::Multiplicative;
    'outer: for m in 1..=n_max {
        for n in m..=n_max / m {
            if m.gcd(&n) == 1 && *f(m * n) != f(m).mul(f(n)) {
                status = MultStatus::CounterexampleAt { m, n };
                break 'outer;
            }
        }
    }
    let mut bad = Vec::new();
    let mut good = Vec::new();
    for q in primes_up_to(n_max) {
        let mut prev = q;
        let mut ok = true;
        while let Some(next) = prev.checked_mul(q).filter(|&v| v <= n_max) {
            if *f(next) != f(q).mul(f(prev)) {
                ok = false;
                break;
            }
            prev = next;
        }
        if ok {
            good.push(q)
        } else {
            bad.push(q)
        }
    }
    MultiplicativityReport {
        verified_to: n_max,
        status,
        bad_primes: bad,
        completely_multiplicative_primes: good,
    }
}

/// `f(qn) = f(q) f(n)` for every `n` with `qn <= N`.
pub fn completely_multiplicative_at(values: &[Rational], q: u64) -> bool {
    let n_max = values.len().saturating_sub(1) as u64;
    (1..=n_max / q).all(|n| values[(q * n) as usize] == values[q as usize].mul(&values[n as usize]))
}

/// Decomposition with the range it was verified on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposed {
    pub decomposition: MultiplicativeDecomposition,
    pub verified_to: u64,
    /// False when `chi` is eventually zero and other decompositions fit too.
    pub unique: bool,
}

/// Options for [`decompose`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecomposeOptions {
    pub r_max: u32,
    /// Prime used when `k` is not a prime power.
    pub p_override: Option<u64>,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            r_max: 8,
            p_override: None,
        }
    }
}

/// `p^e mod t` for positions of `chi(p^i)` inside its period.
fn pow_mod(p: u64, e: u32, t: u64) -> u64 {
    let mut acc = 1 % t;
    for _ in 0..e {
        acc = (acc as u128 * p as u128 % t as u128) as u64;
    }
    acc
}

/// `chi(p^i)` without forming `p^i`.
fn chi_at_power(chi: &EventuallyPeriodic, p: u64, i: u32) -> Rational {
    let s = chi.pre.len() as u64;
    if let Some(v) = p.checked_pow(i).filter(|&v| v <= s + 1) {
        return chi.chi(v);
    }
    let t = chi.per.len() as u64;
    // position p^i - 1 - s inside the period
    let pos = (pow_mod(p, i, t) + 2 * t - 1 - s % t) % t;
    chi.per[pos as usize].clone()
}

/// Decomposes `f` given as `values = f(0..=N)` (`f(0)` ignored).
///
/// For `k = p^e` the ladder `g(i) = f(p^i)` and the part `h` of `f` off multiples of
/// `p` are analysed separately. Otherwise `f` itself must satisfy a linear recurrence;
/// then `f(n) = n^r chi(n)` and `g(i) = p^(ri) chi(p^i)` for `p = 2` or the override.
pub fn decompose(
    values: &[Rational],
    k: u64,
    opts: DecomposeOptions,
) -> Result<Decomposed, DecompError> {
    const MIN_N: usize = 8;
    if values.len() <= MIN_N {
        return Err(DecompError::TooShort {
            needed: MIN_N,
            have: values.len().saturating_sub(1),
        });
    }
    let n_max = (values.len() - 1) as u64;
    let report = check_multiplicative(values);
    if let MultStatus::CounterexampleAt { m, n } = report.status {
        return Err(DecompError::NotMultiplicative { m, n });
    }
    let pp = prime_power_base(k);
    let p = match (pp, opts.p_override) {
        (_, Some(p)) | (Some(p), None) => p,
        (None, None) => 2,
    };
    if !is_prime(p) {
        return Err(DecompError::NotPrime(p));
    }
    if values[1].is_zero() {
        // Multiplicative with f(1) = 0 means f vanishes.
        let dec = zero_decomposition(p);
        return Ok(Decomposed {
            decomposition: dec,
            verified_to: n_max,
            unique: false,
        });
    }
    let dec = if pp.is_some() {
        let mut ladder = Vec::new();
        let mut q = 1u64;
        while q <= n_max {
            ladder.push(values[q as usize].clone());
            q = match q.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
        let g = berlekamp_massey(&ladder).lrs;
        let h: Vec<Rational> = (1..=n_max)
            .map(|n| {
                if n % p == 0 {
                    Rational::zero()
                } else {
                    values[n as usize].clone()
                }
            })
            .collect();
        let (r, chi) = power_periodic_decompose(&h, opts.r_max)?;
        MultiplicativeDecomposition { p, g, r, chi }
    } else {
        let bm = berlekamp_massey(values);
        if !bm.unique {
            return Err(DecompError::NotRational);
        }
        let (r, chi) = power_periodic_decompose(&values[1..], opts.r_max)?;
        let len = 2 * (chi.pre.len() + chi.per.len()) as u32 + 4;
        let gvals: Vec<Rational> = (0..len)
            .map(|i| {
                Rational::from(p)
                    .pow((r * i) as i32)
                    .mul(&chi_at_power(&chi, p, i))
            })
            .collect();
        let g = berlekamp_massey(&gvals).lrs;
        MultiplicativeDecomposition { p, g, r, chi }
    };
    let dec = canonicalize(&dec);
    let synth = synthesize(&dec, n_max as usize);
    if let Some(n) = (1..=n_max).find(|&n| synth[n as usize] != values[n as usize]) {
        return Err(DecompError::VerificationFailed { n });
    }
    let unique = dec.is_uniquely_determined();
    Ok(Decomposed {
        decomposition: dec,
        verified_to: n_max,
        unique,
    })
}

fn check_q(q: u64) -> Result<(), DecompError> {
    if q < 3 || !is_prime(q) {
        return Err(DecompError::BadQ(q));
    }
    Ok(())
}

fn cyclo_series(values: &[Rational]) -> TruncSeries<CycloElem> {
    TruncSeries::new(values.iter().map(CycloElem::from_rational).collect()).expect("nonempty")
}

/// `sum_{j=0}^{q-1} F(w^j x)` with `w = zeta_q`.
fn twist_sum(
    f: &TruncSeries<CycloElem>,
    q: u64,
    weight: impl Fn(u64) -> CycloElem,
) -> TruncSeries<CycloElem> {
    let w = CycloElem::zeta(q);
    (0..q).fold(TruncSeries::zero(f.order()), |acc, j| {
        acc.add(&f.twist(&w, j).scalar_mul(&weight(j)))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GqReport {
    pub q: u64,
    pub series: TruncSeries<CycloElem>,
    /// Every nonzero coefficient sits at an exponent divisible by `q^2`.
    pub supported_on_q2: bool,
    pub first_offending_exponent: Option<usize>,
}

/// `G_q(x) = sum_{j=0}^{q-1} F(w^j x) - q f(q) F(x^q)`, computed in `Q(zeta_q)`.
pub fn gq_series(values: &[Rational], q: u64) -> Result<GqReport, DecompError> {
    check_q(q)?;
    if values.len() <= q as usize {
        return Err(DecompError::TooShort {
            needed: q as usize,
            have: values.len().saturating_sub(1),
        });
    }
    let f = cyclo_series(values);
    let n = f.order();
    let avg = twist_sum(&f, q, |_| CycloElem::one());
    let c = CycloElem::from_rational(&Rational::from(q).mul(&values[q as usize]));
    let sub = f.mahler_subst(q as usize).truncate(n).scalar_mul(&c);
    let series = avg.sub(&sub);
    let q2 = (q * q) as usize;
    let first = series
        .coeffs()
        .iter()
        .enumerate()
        .find(|(i, c)| !c.is_zero() && i % q2 != 0)
        .map(|(i, _)| i);
    Ok(GqReport {
        q,
        series,
        supported_on_q2: first.is_none(),
        first_offending_exponent: first,
    })
}

/// `H(x) = sum_j w^(-j) F(w^j x)`, checked against `sum_m q f(qm+1) x^(qm+1)`.
pub fn h_series(values: &[Rational], q: u64) -> Result<TruncSeries<CycloElem>, DecompError> {
    check_q(q)?;
    let f = cyclo_series(values);
    let w = CycloElem::zeta(q);
    let h = twist_sum(&f, q, |j| w.pow((q - j) % q));
    let qc = Rational::from(q);
    let direct: Vec<CycloElem> = (0..values.len())
        .map(|n| {
            if n as u64 % q == 1 % q {
                CycloElem::from_rational(&qc.mul(&values[n]))
            } else {
                CycloElem::zero()
            }
        })
        .collect();
    if let Some(i) = (0..values.len()).find(|&i| *h.coeff(i) != direct[i]) {
        return Err(DecompError::HIdentityFailed(i));
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum AvgCheck {
    HoldsTo { order: usize },
    FailsAt { exponent: usize },
}

/// `sum_{j=0}^{q-1} F(w^j x) = q f(q) F(x^q)` to the order of the data.
pub fn unit_root_avg_check(values: &[Rational], q: u64) -> Result<AvgCheck, DecompError> {
    check_q(q)?;
    if values.len() <= q as usize {
        return Err(DecompError::TooShort {
            needed: q as usize,
            have: values.len().saturating_sub(1),
        });
    }
    let report = gq_series(values, q)?;
    Ok(match report.series.first_nonzero() {
        None => AvgCheck::HoldsTo {
            order: report.series.order(),
        },
        Some((exponent, _)) => AvgCheck::FailsAt { exponent },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoprimalityViolation {
    pub i: u32,
    pub n: u32,
    pub j: u64,
    pub gcd: UniPoly<CycloElem>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoprimalityReport {
    pub checks: usize,
    pub violations: Vec<CoprimalityViolation>,
}

/// For `0 <= i <= i_max`, `1 <= n <= n_max`, `1 <= j < q`: is
/// `gcd(P(x^(k^i)), P(w^j x^n))` over `Q(zeta_q)` a power of `x`?
pub fn coprimality_probe(
    p: &UniPoly<Rational>,
    q: u64,
    k: u64,
    i_max: u32,
    n_max: u32,
) -> Result<CoprimalityReport, DecompError> {
    check_q(q)?;
    let w = CycloElem::zeta(q);
    let pc: UniPoly<CycloElem> = p.map(CycloElem::from_rational);
    let mut checks = 0;
    let mut violations = Vec::new();
    for i in 0..=i_max {
        let a = pc.compose_power(k.pow(i) as usize);
        for n in 1..=n_max {
            for j in 1..q {
                let b = pc.twist(&w, j).compose_power(n as usize);
                let g = a.gcd(&b);
                checks += 1;
                let is_x_power =
                    g.is_zero() || g.coeffs().iter().rev().skip(1).all(|c| c.is_zero());
                if !is_x_power {
                    violations.push(CoprimalityViolation { i, n, j, gcd: g });
                }
            }
        }
    }
    Ok(CoprimalityReport { checks, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn seq(f: impl Fn(u64) -> i64, n: u64) -> Vec<Rational> {
        (0..=n)
            .map(|i| if i == 0 { rat(0) } else { rat(f(i)) })
            .collect()
    }

    fn val2(n: u64) -> u32 {
        n.trailing_zeros()
    }

    fn odd_indicator() -> EventuallyPeriodic {
        EventuallyPeriodic::periodic(vec![rat(1), rat(0)])
    }

    #[test]
    fn multiplicativity_examples() {
        let id = seq(|n| n as i64, 200);
        let rep = check_multiplicative(&id);
        assert_eq!(rep.status, MultStatus::Multiplicative);
        assert!(rep.bad_primes.is_empty());
        let odd = seq(|n| (n >> val2(n)) as i64, 200);
        let rep = check_multiplicative(&odd);
        assert_eq!(rep.status, MultStatus::Multiplicative);
        assert!(!rep.bad_primes.contains(&2));
        let two = seq(|n| 1 << val2(n), 200);
        assert_eq!(
            check_multiplicative(&two).status,
            MultStatus::Multiplicative
        );
        assert!(check_multiplicative(&two)
            .completely_multiplicative_primes
            .contains(&2));
        // divisor count: multiplicative, 2 has a broken ladder (d(4) = 3 != 4)
        let d = seq(|n| (1..=n).filter(|x| n % x == 0).count() as i64, 200);
        let rep = check_multiplicative(&d);
        assert_eq!(rep.status, MultStatus::Multiplicative);
        assert!(rep.bad_primes.contains(&2));
        let bad = seq(|n| n as i64 + 1, 50);
        assert!(matches!(
            check_multiplicative(&bad).status,
            MultStatus::CounterexampleAt { .. }
        ));
    }

    #[test]
    fn canonical_examples() {
        let odd = seq(|n| (n >> val2(n)) as i64, 512);
        let d = decompose(&odd, 2, DecomposeOptions::default()).unwrap();
        assert_eq!(
            d.decomposition,
            MultiplicativeDecomposition {
                p: 2,
                g: LRSSpec::constant(rat(1)),
                r: 1,
                chi: odd_indicator()
            }
        );
        assert!(d.unique);
        let two = seq(|n| 1 << val2(n), 512);
        let d = decompose(&two, 2, DecomposeOptions::default()).unwrap();
        assert_eq!(
            d.decomposition,
            MultiplicativeDecomposition {
                p: 2,
                g: LRSSpec::geometric(rat(2)),
                r: 0,
                chi: odd_indicator()
            }
        );
        let id = seq(|n| n as i64, 300);
        let d = decompose(&id, 6, DecomposeOptions::default()).unwrap();
        assert_eq!(
            d.decomposition,
            MultiplicativeDecomposition {
                p: 2,
                g: LRSSpec::geometric(rat(2)),
                r: 1,
                chi: odd_indicator()
            }
        );
        let d = decompose(
            &id,
            6,
            DecomposeOptions {
                p_override: Some(3),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(d.decomposition.p, 3);
        assert_eq!(d.decomposition.g, LRSSpec::geometric(rat(3)));
        assert!(matches!(
            decompose(&seq(|n| n as i64 + 1, 100), 2, DecomposeOptions::default()),
            Err(DecompError::NotMultiplicative { .. })
        ));
    }

    #[test]
    fn synthesize_examples() {
        let one = MultiplicativeDecomposition {
            p: 2,
            g: LRSSpec::constant(rat(1)),
            r: 0,
            chi: EventuallyPeriodic::constant(rat(1)),
        };
        assert!(synthesize(&one, 50)[1..].iter().all(|v| *v == rat(1)));
        let g = LRSSpec::new(vec![rat(2), rat(-1)], vec![rat(1), rat(2)]);
        let dec = MultiplicativeDecomposition {
            p: 2,
            g,
            r: 0,
            chi: odd_indicator(),
        };
        let v = synthesize(&dec, 100);
        for n in 1..=100u64 {
            assert_eq!(v[n as usize], rat(val2(n) as i64 + 1));
        }
        // p = 3, r = 2, chi = Legendre symbol mod 5 with multiples of 3 removed.
        let leg = EventuallyPeriodic::periodic(vec![rat(1), rat(-1), rat(-1), rat(1), rat(0)]);
        let dec = MultiplicativeDecomposition {
            p: 3,
            g: LRSSpec::constant(rat(1)),
            r: 2,
            chi: vanish_on_multiples(&leg, 3),
        };
        let v = synthesize(&dec, 30);
        assert_eq!(v[1], rat(1));
        assert_eq!(v[2], rat(-4));
        assert_eq!(v[3], rat(1));
        assert_eq!(v[6], rat(-4));
        assert_eq!(check_multiplicative(&v).status, MultStatus::Multiplicative);
    }

    #[test]
    fn canonicalize_examples() {
        let dec = MultiplicativeDecomposition {
            p: 2,
            g: LRSSpec::constant(rat(1)),
            r: 1,
            chi: odd_indicator(),
        };
        assert_eq!(canonicalize(&dec), dec);
        let raw = MultiplicativeDecomposition {
            p: 2,
            g: LRSSpec::constant(rat(1)),
            r: 1,
            chi: EventuallyPeriodic::constant(rat(1)),
        };
        let c = canonicalize(&raw);
        assert_eq!(c.chi, odd_indicator());
        assert_eq!(synthesize(&c, 200), synthesize(&raw, 200));
        // g(0) = 3 is moved into chi.
        let scaled = MultiplicativeDecomposition {
            p: 2,
            g: LRSSpec::new(vec![rat(2)], vec![rat(3)]),
            r: 0,
            chi: EventuallyPeriodic::periodic(vec![rat(1), rat(0)]).scale(&frac_third()),
        };
        let c = canonicalize(&scaled);
        assert_eq!(c.g, LRSSpec::geometric(rat(2)));
        assert_eq!(synthesize(&c, 100), synthesize(&scaled, 100));
        // Eventually zero chi: r is absorbed and the result is flagged.
        let ez = MultiplicativeDecomposition {
            p: 2,
            g: LRSSpec::constant(rat(1)),
            r: 2,
            chi: EventuallyPeriodic::new(vec![rat(1), rat(0), rat(1)], vec![rat(0)]).unwrap(),
        };
        let c = canonicalize(&ez);
        assert_eq!(c.r, 0);
        assert!(!c.is_uniquely_determined());
        assert_eq!(synthesize(&c, 100), synthesize(&ez, 100));
    }

    fn frac_third() -> Rational {
        crate::exactalg::frac(1, 3)
    }

    #[test]
    fn gq_examples() {
        let ones = seq(|_| 1, 200);
        let rep = gq_series(&ones, 3).unwrap();
        // Brute force: the coefficient at 3m is q (f(3m) - f(3) f(m)), all others vanish.
        for (i, c) in rep.series.coeffs().iter().enumerate() {
            let expected = if i % 3 == 0 {
                rat(3) * (&ones[i] - &(&ones[3] * &ones[i / 3]))
            } else {
                rat(0)
            };
            assert_eq!(*c, CycloElem::from_rational(&expected));
        }
        assert!(rep.supported_on_q2);
        let id = seq(|n| n as i64, 200);
        assert!(gq_series(&id, 5).unwrap().series.is_zero());
        let odd = seq(|n| (n >> val2(n)) as i64, 200);
        assert!(gq_series(&odd, 3).unwrap().supported_on_q2);
        // divisor count: f(9) != f(3)^2, so the coefficient at 9 is nonzero but allowed.
        let d = seq(|n| (1..=n).filter(|x| n % x == 0).count() as i64, 200);
        let rep = gq_series(&d, 3).unwrap();
        assert!(rep.supported_on_q2);
        assert!(!rep.series.coeff(9).is_zero());
        assert_eq!(gq_series(&id, 2).unwrap_err(), DecompError::BadQ(2));
    }

    #[test]
    fn h_examples() {
        let id = seq(|n| n as i64, 100);
        assert!(h_series(&id, 3).is_ok());
        let z = seq(|_| 0, 100);
        assert!(h_series(&z, 3).unwrap().is_zero());
        let ones = seq(|_| 1, 30);
        let h = h_series(&ones, 3).unwrap();
        for i in 1..=30 {
            let e = if i % 3 == 1 { rat(3) } else { rat(0) };
            assert_eq!(*h.coeff(i), CycloElem::from_rational(&e));
        }
    }

    #[test]
    fn avg_examples() {
        let id = seq(|n| n as i64, 300);
        assert_eq!(
            unit_root_avg_check(&id, 3).unwrap(),
            AvgCheck::HoldsTo { order: 300 }
        );
        let ones = seq(|_| 1, 300);
        assert!(matches!(
            unit_root_avg_check(&ones, 5).unwrap(),
            AvgCheck::HoldsTo { .. }
        ));
        let two = seq(|n| 1 << val2(n), 300);
        assert!(completely_multiplicative_at(&two, 3));
        assert!(matches!(
            unit_root_avg_check(&two, 3).unwrap(),
            AvgCheck::HoldsTo { .. }
        ));
        assert_eq!(
            unit_root_avg_check(&two, 2).unwrap_err(),
            DecompError::BadQ(2)
        );
        let d = seq(|n| (1..=n).filter(|x| n % x == 0).count() as i64, 100);
        assert_eq!(
            unit_root_avg_check(&d, 3).unwrap(),
            AvgCheck::FailsAt { exponent: 9 }
        );
    }

    #[test]
    fn coprimality_examples() {
        let p = UniPoly::from_ints(&[1, -1]);
        let rep = coprimality_probe(&p, 5, 2, 3, 3).unwrap();
        assert_eq!(rep.checks, 4 * 3 * 4);
        assert!(rep.violations.is_empty());
        let x = UniPoly::from_ints(&[0, 1]);
        assert!(coprimality_probe(&x, 5, 2, 2, 2)
            .unwrap()
            .violations
            .is_empty());
        let p2 = UniPoly::from_ints(&[1, -1]).mul(&UniPoly::from_ints(&[2, -1]));
        assert!(coprimality_probe(&p2, 5, 3, 2, 2)
            .unwrap()
            .violations
            .is_empty());
        // A q-th root of unity among the roots breaks the hypothesis.
        let phi5 = crate::exactalg::cyclotomic_poly(5);
        assert!(!coprimality_probe(&phi5, 5, 2, 0, 1)
            .unwrap()
            .violations
            .is_empty());
    }

    #[test]
    fn helpers() {
        assert_eq!(prime_power_base(8), Some(2));
        assert_eq!(prime_power_base(6), None);
        assert_eq!(prime_power_base(25), Some(5));
        assert_eq!(split_p(48, 2), (4, 3));
        let chi = EventuallyPeriodic::new(vec![rat(7)], vec![rat(1), rat(2), rat(3)]).unwrap();
        for i in 0..20 {
            let n = 2u64.pow(i);
            assert_eq!(chi_at_power(&chi, 2, i), chi.chi(n));
        }
    }
}
