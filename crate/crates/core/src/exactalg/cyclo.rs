use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{Field, Rational, UniPoly};

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|e| n.is_multiple_of(*e)).collect()
}

fn cyclotomic_uncached(d: u64) -> UniPoly<Rational> {
    // Phi_d = prod_{e | d} (x^e - 1)^{mu(d/e)}
    let mut num = UniPoly::<Rational>::one();
    let mut den = UniPoly::<Rational>::one();
    for e in divisors(d) {
        let f = UniPoly::monomial(Rational::one(), e as usize).sub(&UniPoly::one());
        match mobius(d / e) {
            1 => num = num.mul(&f),
            -1 => den = den.mul(&f),
            _ => {}
        }
    }
    num.div_exact(&den).expect("Mobius product is exact")
}

/// The `d`-th cyclotomic polynomial over `Q`, monic of degree `phi(d)`.
pub fn cyclotomic_poly(d: u64) -> UniPoly<Rational> {
    assert!(d >= 1, "cyclotomic order must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u64, UniPoly<Rational>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&d) {
        return p.clone();
    }
    let p = cyclotomic_uncached(d);
    cache.lock().unwrap().insert(d, p.clone());
    p
}

/// Element of the cyclotomic field `Q(zeta_d)`, stored in the power basis
/// `1, zeta_d, ..., zeta_d^(phi(d)-1)`.
///
/// Elements with different conductors combine in `Q(zeta_L)` with
/// `L = lcm`; equality compares after lifting, so `1` in `Q` equals `1` in
/// `Q(zeta_5)`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "RawCyclo")]
pub struct CycloElem {
    conductor: u64,
    coeffs: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawCyclo {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl TryFrom<RawCyclo> for CycloElem {
    type Error = String;

    fn try_from(raw: RawCyclo) -> Result<Self, String> {
        if raw.conductor == 0 {
            return Err("conductor must be positive".into());
        }
        Ok(CycloElem::from_poly(
            raw.conductor,
            &UniPoly::new(raw.coeffs),
        ))
    }
}

impl CycloElem {
    /// Reduces a polynomial in `zeta_d` modulo `Phi_d`.
    pub fn from_poly(d: u64, p: &UniPoly<Rational>) -> Self {
        let phi = cyclotomic_poly(d);
        let r = p.rem(&phi).unwrap();
        let n = euler_phi(d) as usize;
        let mut coeffs = r.into_coeffs();
        coeffs.resize(n, Rational::zero());
        CycloElem {
            conductor: d,
            coeffs,
        }
    }

    /// `zeta_d^e` for any integer exponent.
    pub fn zeta_pow(d: u64, e: i64) -> Self {
        let e = e.rem_euclid(d as i64) as usize;
        Self::from_poly(d, &UniPoly::monomial(Rational::one(), e))
    }

    /// The canonical primitive `d`-th root of unity.
    pub fn zeta(d: u64) -> Self {
        Self::zeta_pow(d, 1)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn as_poly(&self) -> UniPoly<Rational> {
        UniPoly::new(self.coeffs.clone())
    }

    /// Same element viewed in `Q(zeta_l)`; `l` must be a multiple of the conductor.
    pub fn lift(&self, l: u64) -> Self {
        assert!(
            l.is_multiple_of(self.conductor),
            "lift target must be a multiple"
        );
        if l == self.conductor {
            return self.clone();
        }
        let step = (l / self.conductor) as usize;
        Self::from_poly(l, &self.as_poly().compose_power(step))
    }

    fn common(&self, o: &Self) -> (Self, Self, u64) {
        let l = self.conductor.lcm(&o.conductor);
        (self.lift(l), o.lift(l), l)
    }

    /// Galois automorphism `zeta_d -> zeta_d^a`, `gcd(a, d) = 1`.
    pub fn galois(&self, a: u64) -> Self {
        let d = self.conductor;
        assert!(a.gcd(&d) == 1, "not a unit modulo the conductor");
        let mut p = vec![Rational::zero(); d as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let idx = ((i as u64 * a) % d) as usize;
            p[idx] = p[idx].add(c);
        }
        Self::from_poly(d, &UniPoly::new(p))
    }
}

impl PartialEq for CycloElem {
    fn eq(&self, o: &Self) -> bool {
        let (a, b, _) = self.common(o);
        a.coeffs == b.coeffs
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                _ => write!(f, "{c}*z{}^{i}", self.conductor)?,
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Field for CycloElem {
    fn zero() -> Self {
        CycloElem {
            conductor: 1,
            coeffs: vec![Rational::zero()],
        }
    }

    fn one() -> Self {
        CycloElem {
            conductor: 1,
            coeffs: vec![Rational::one()],
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    fn add(&self, o: &Self) -> Self {
        let (a, b, l) = self.common(o);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x.add(y))
            .collect();
        CycloElem {
            conductor: l,
            coeffs,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        let (a, b, l) = self.common(o);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x.sub(y))
            .collect();
        CycloElem {
            conductor: l,
            coeffs,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        if self.conductor == 1 {
            return o.scale_rational(&self.coeffs[0]);
        }
        if o.conductor == 1 {
            return self.scale_rational(&o.coeffs[0]);
        }
        let (a, b, l) = self.common(o);
        Self::from_poly(l, &a.as_poly().mul(&b.as_poly()))
    }

    fn neg(&self) -> Self {
        CycloElem {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(Field::neg).collect(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.conductor == 1 {
            return Some(Self::from_rational(&self.coeffs[0].inv()?));
        }
        let phi = cyclotomic_poly(self.conductor);
        let (g, s, _) = self.as_poly().xgcd(&phi);
        debug_assert!(g.is_constant());
        Some(Self::from_poly(self.conductor, &s))
    }

    fn from_rational(r: &Rational) -> Self {
        CycloElem {
            conductor: 1,
            coeffs: vec![r.clone()],
        }
    }

    fn norm_poly(p: &UniPoly<Self>) -> UniPoly<Rational> {
        let l = p.coeffs().iter().fold(1u64, |acc, c| acc.lcm(&c.conductor));
        let lifted = p.map(|c| c.lift(l));
        let mut acc = UniPoly::<CycloElem>::one();
        for a in (1..=l).filter(|a| a.gcd(&l) == 1) {
            acc = acc.mul(&lifted.map(|c| c.galois(a)));
        }
        acc.to_rational().expect("norm has rational coefficients")
    }

    fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Rational::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }
}

impl CycloElem {
    fn scale_rational(&self, r: &Rational) -> Self {
        CycloElem {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c.mul(r)).collect(),
        }
    }
}

/// `P(w^j x)` for a rational polynomial, as a polynomial over `Q(zeta)`.
pub fn twist_poly(p: &UniPoly<Rational>, w: &CycloElem, j: u64) -> UniPoly<CycloElem> {
    UniPoly::<CycloElem>::from_rational(p).twist(w, j)
}
