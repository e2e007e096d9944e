use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AlgError, Field, Rational};

/// Dense univariate polynomial; `coeffs[i]` is the coefficient of `x^i`.
///
/// Trailing zeros are always stripped, so the zero polynomial has no
/// coefficients and `degree()` is `None`.
#[derive(Clone, PartialEq)]
pub struct UniPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: F, n: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![F::zero(); n + 1];
        coeffs[n] = c;
        UniPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| F::from_i64(c)).collect())
    }

    /// Embeds a rational polynomial.
    pub fn from_rational(p: &UniPoly<Rational>) -> Self {
        Self::new(p.coeffs.iter().map(F::from_rational).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    /// Exponent of the lowest nonzero term.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn lowest_coeff(&self) -> Option<&F> {
        self.valuation().map(|v| &self.coeffs[v])
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(F::neg).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by `x^a`.
    pub fn shift(&self, a: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![F::zero(); a];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }

    /// Drops the `a` lowest coefficients, i.e. divides by `x^a` when exact.
    pub fn unshift(&self, a: usize) -> Self {
        Self::new(self.coeffs.iter().skip(a).cloned().collect())
    }

    /// Polynomial long division: `self = q * d + r` with `deg r < deg d`.
    pub fn divmod(&self, d: &Self) -> Result<(Self, Self), AlgError> {
        let dl = d.leading().ok_or(AlgError::DivisionByZero)?;
        let dl_inv = dl.inv().expect("leading coefficient is nonzero");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].mul(&dl_inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                r[i + j] = r[i + j].sub(&c.mul(b));
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self, AlgError> {
        self.divmod(d).map(|(_, r)| r)
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        match self.divmod(d) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Scales so that the lowest nonzero coefficient is 1.
    pub fn normalize_lowest(&self) -> Self {
        match self.lowest_coeff() {
            None => Self::zero(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).unwrap();
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().and_then(F::inv) {
            Some(li) => (r0.scale(&li), s0.scale(&li), t0.scale(&li)),
            None => (r0, s0, t0),
        }
    }

    pub fn lcm(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(o);
        self.div_exact(&g).unwrap().mul(o).monic()
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc.mul(x).add(c))
    }

    /// `P(x^m)`. For `m = 0` this is the constant `P(1)`.
    pub fn compose_power(&self, m: usize) -> Self {
        if m == 0 {
            return Self::constant(self.eval(&F::one()));
        }
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![F::zero(); (self.coeffs.len() - 1) * m + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * m] = c.clone();
        }
        UniPoly { coeffs }
    }

    /// Cartier operator on polynomials: keeps the coefficients at exponents
    /// `l*n + r` and re-indexes them to `n`.
    pub fn cartier(&self, l: usize, r: usize) -> Self {
        assert!(l >= 1 && r < l, "residue out of range");
        Self::new(self.coeffs.iter().skip(r).step_by(l).cloned().collect())
    }

    /// `P(w^j x)`: the coefficient of `x^m` is multiplied by `w^(j*m)`.
    pub fn twist(&self, w: &F, j: u64) -> Self {
        let step = w.pow(j);
        let mut f = F::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.mul(&f));
            f = f.mul(&step);
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&F::from_i64(i as i64)))
                .collect(),
        )
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> UniPoly<G> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Rational coefficients, if every coefficient lies in `Q`.
    pub fn to_rational(&self) -> Option<UniPoly<Rational>> {
        self.coeffs
            .iter()
            .map(F::as_rational)
            .collect::<Option<Vec<_>>>()
            .map(UniPoly::new)
    }
}

impl<F: Field> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
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
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly[{self}]")
    }
}

impl<F: Field + Serialize> Serialize for UniPoly<F> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de, F: Field + Deserialize<'de>> Deserialize<'de> for UniPoly<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Vec::<F>::deserialize(d).map(UniPoly::new)
    }
}
