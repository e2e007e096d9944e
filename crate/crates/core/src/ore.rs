//! Skew polynomials in the Mahler operator `M_k` over `K(x)`, with
//! `M_k r(x) = r(x^k) M_k`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactalg::{Field, UniPoly};
use crate::linalg::nullspace;
use crate::mahler::MahlerEquation;
use crate::series::TruncSeries;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OreError {
    #[error("operators have different bases ({0} and {1})")]
    BaseMismatch(u64, u64),
    #[error("division by the zero operator")]
    DivisionByZero,
    #[error("operator has non-polynomial coefficients")]
    FractionalCoefficients,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("base must be at least 2, got {0}")]
    BadBase(u64),
    #[error("truncation order {order} too short for {unknowns} unknowns")]
    InsufficientTruncation { order: usize, unknowns: usize },
    #[error("no operator within the degree bounds")]
    NoCandidate,
}

/// A reduced rational function with monic denominator.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFrac<F>", into = "RawFrac<F>")]
#[serde(bound(
    serialize = "F: Field + Serialize",
    deserialize = "F: Field + Deserialize<'de>"
))]
pub struct FracPoly<F: Field> {
    num: UniPoly<F>,
    den: UniPoly<F>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(
    serialize = "F: Field + Serialize",
    deserialize = "F: Field + Deserialize<'de>"
))]
struct RawFrac<F: Field> {
    num: UniPoly<F>,
    den: UniPoly<F>,
}

impl<F: Field> TryFrom<RawFrac<F>> for FracPoly<F> {
    type Error = OreError;
    fn try_from(r: RawFrac<F>) -> Result<Self, OreError> {
        FracPoly::new(r.num, r.den)
    }
}

impl<F: Field> From<FracPoly<F>> for RawFrac<F> {
    fn from(f: FracPoly<F>) -> Self {
        RawFrac {
            num: f.num,
            den: f.den,
        }
    }
}

impl<F: Field> FracPoly<F> {
    pub fn new(num: UniPoly<F>, den: UniPoly<F>) -> Result<Self, OreError> {
        if den.is_zero() {
            return Err(OreError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        let lc = den.leading().expect("nonzero").inv().expect("nonzero");
        Ok(FracPoly {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn from_poly(p: UniPoly<F>) -> Self {
        FracPoly {
            num: p,
            den: UniPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(UniPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(UniPoly::one())
    }

    pub fn num(&self) -> &UniPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &UniPoly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .expect("nonzero")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        FracPoly {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero")
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::new(self.den.clone(), self.num.clone()).expect("nonzero"))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    /// `r(x^m)`; stays reduced because `gcd(P(x^m), Q(x^m)) = gcd(P, Q)(x^m)`.
    pub fn compose_power(&self, m: usize) -> Self {
        FracPoly {
            num: self.num.compose_power(m),
            den: self.den.compose_power(m),
        }
    }
}

impl<F: Field> fmt::Display for FracPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl<F: Field> fmt::Debug for FracPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `sum_i coeffs[i] M_k^i`, coefficients written on the left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOre<F>", into = "RawOre<F>")]
#[serde(bound(
    serialize = "F: Field + Serialize",
    deserialize = "F: Field + Deserialize<'de>"
))]
pub struct OrePoly<F: Field> {
    k: u64,
    coeffs: Vec<FracPoly<F>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(
    serialize = "F: Field + Serialize",
    deserialize = "F: Field + Deserialize<'de>"
))]
struct RawOre<F: Field> {
    k: u64,
    coeffs: Vec<FracPoly<F>>,
}

impl<F: Field> TryFrom<RawOre<F>> for OrePoly<F> {
    type Error = OreError;
    fn try_from(r: RawOre<F>) -> Result<Self, OreError> {
        OrePoly::new(r.k, r.coeffs)
    }
}

impl<F: Field> From<OrePoly<F>> for RawOre<F> {
    fn from(o: OrePoly<F>) -> Self {
        RawOre {
            k: o.k,
            coeffs: o.coeffs,
        }
    }
}

impl<F: Field> OrePoly<F> {
    pub fn new(k: u64, mut coeffs: Vec<FracPoly<F>>) -> Result<Self, OreError> {
        if k < 2 {
            return Err(OreError::BadBase(k));
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(OrePoly { k, coeffs })
    }

    pub fn from_polys(k: u64, coeffs: Vec<UniPoly<F>>) -> Result<Self, OreError> {
        Self::new(k, coeffs.into_iter().map(FracPoly::from_poly).collect())
    }

    pub fn zero(k: u64) -> Self {
        OrePoly {
            k,
            coeffs: Vec::new(),
        }
    }

    pub fn one(k: u64) -> Self {
        OrePoly {
            k,
            coeffs: vec![FracPoly::one()],
        }
    }

    /// `M_k` itself.
    pub fn y(k: u64) -> Self {
        OrePoly {
            k,
            coeffs: vec![FracPoly::zero(), FracPoly::one()],
        }
    }

    /// The scalar `r` as an operator of degree 0.
    pub fn scalar(k: u64, r: FracPoly<F>) -> Self {
        Self::new(k, vec![r]).expect("valid base")
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn coeffs(&self) -> &[FracPoly<F>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the degree of the zero operator, minus infinity.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn sigma_pow(&self, i: usize) -> usize {
        (self.k as usize).pow(i as u32)
    }

    fn check(&self, o: &Self) -> Result<(), OreError> {
        if self.k != o.k {
            return Err(OreError::BaseMismatch(self.k, o.k));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, OreError> {
        self.check(o)?;
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = FracPoly::zero();
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs
                    .get(i)
                    .unwrap_or(&z)
                    .add(o.coeffs.get(i).unwrap_or(&z))
            })
            .collect();
        Self::new(self.k, coeffs)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, OreError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        OrePoly {
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    /// `(a_i y^i)(b_j y^j) = a_i sigma^i(b_j) y^(i+j)`.
    pub fn mul(&self, o: &Self) -> Result<Self, OreError> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.k));
        }
        let mut out = vec![FracPoly::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let si = self.sigma_pow(i);
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(&b.compose_power(si)));
                }
            }
        }
        Self::new(self.k, out)
    }

    /// `c y^m`.
    fn monomial(k: u64, c: FracPoly<F>, m: usize) -> Self {
        let mut coeffs = vec![FracPoly::zero(); m];
        coeffs.push(c);
        Self::new(k, coeffs).expect("valid base")
    }

    /// `(q, r)` with `self = q g + r` and `deg r < deg g`.
    pub fn divmod(&self, g: &Self) -> Result<(Self, Self), OreError> {
        self.check(g)?;
        let n = g.degree().ok_or(OreError::DivisionByZero)?;
        let lead_g = g.coeffs[n].clone();
        let mut q = Self::zero(self.k);
        let mut r = self.clone();
        while let Some(m) = r.degree().filter(|&m| m >= n) {
            let shift = m - n;
            let c = r.coeffs[m]
                .div(&lead_g.compose_power(self.sigma_pow(shift)))
                .expect("nonzero leading");
            let t = Self::monomial(self.k, c, shift);
            r = r.sub(&t.mul(g)?)?;
            q = q.add(&t)?;
        }
        Ok((q, r))
    }

    /// The lcm `c` of the denominators and `c * self`, which has polynomial coefficients.
    pub fn clear_denominators(&self) -> (UniPoly<F>, Self) {
        let c = self
            .coeffs
            .iter()
            .fold(UniPoly::one(), |acc, x| acc.lcm(x.den()));
        let cf = FracPoly::from_poly(c.clone());
        let coeffs = self.coeffs.iter().map(|x| cf.mul(x)).collect();
        (c, OrePoly { k: self.k, coeffs })
    }

    /// The polynomial coefficients, if there are no denominators.
    pub fn polynomial_coeffs(&self) -> Option<Vec<UniPoly<F>>> {
        self.coeffs
            .iter()
            .map(|c| {
                c.is_polynomial()
                    .then(|| c.num().scale(&c.den().coeff(0).inv().expect("nonzero")))
            })
            .collect()
    }

    /// `sum_i P_i(x) F(x^(k^i))`, to the order of `f`.
    pub fn apply(&self, f: &TruncSeries<F>) -> Result<TruncSeries<F>, OreError> {
        let coeffs = self
            .polynomial_coeffs()
            .ok_or(OreError::FractionalCoefficients)?;
        let eq = MahlerEquation {
            k: self.k,
            coeffs,
            inhom: UniPoly::zero(),
            provenance: Vec::new(),
        };
        Ok(eq.residual(f))
    }
}

impl<F: Field> fmt::Display for OrePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c}) M"),
                _ => format!("({c}) M^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

pub fn ore_mul<F: Field>(f: &OrePoly<F>, g: &OrePoly<F>) -> Result<OrePoly<F>, OreError> {
    f.mul(g)
}

pub fn ore_divmod<F: Field>(
    f: &OrePoly<F>,
    g: &OrePoly<F>,
) -> Result<(OrePoly<F>, OrePoly<F>), OreError> {
    f.divmod(g)
}

pub fn clear_denominators<F: Field>(f: &OrePoly<F>) -> (UniPoly<F>, OrePoly<F>) {
    f.clear_denominators()
}

pub fn apply_operator<F: Field>(
    f: &OrePoly<F>,
    s: &TruncSeries<F>,
) -> Result<TruncSeries<F>, OreError> {
    f.apply(s)
}

/// Outcome of applying all monomials `x^a M_k^b` (`a <= max_a`, `b <= max_b`) to `x^l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaithfulnessProbe {
    pub k: u64,
    pub l: usize,
    pub monomials: usize,
    /// Two monomials with the same image, if any.
    pub collision: Option<((usize, usize), (usize, usize))>,
}

impl FaithfulnessProbe {
    pub fn passed(&self) -> bool {
        self.collision.is_none()
    }
}

/// Applies every monomial operator to the series `x^l` and checks that the
/// images are pairwise distinct monomials.
pub fn faithfulness_probe(k: u64, max_a: usize, max_b: usize, l: usize) -> FaithfulnessProbe {
    use crate::exactalg::Rational;
    let top = max_a + l * (k as usize).pow(max_b as u32);
    let xl = TruncSeries::from_poly(&UniPoly::<Rational>::monomial(Rational::one(), l), top);
    let mut seen: std::collections::HashMap<usize, (usize, usize)> = Default::default();
    let mut collision = None;
    let mut count = 0;
    'outer: for b in 0..=max_b {
        for a in 0..=max_a {
            let mut coeffs = vec![UniPoly::zero(); b];
            coeffs.push(UniPoly::monomial(Rational::one(), a));
            let op = OrePoly::from_polys(k, coeffs).expect("valid base");
            let img = op.apply(&xl).expect("polynomial");
            let support: Vec<usize> = img
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, _)| i)
                .collect();
            count += 1;
            assert_eq!(support.len(), 1, "image of a monomial is a monomial");
            if let Some(prev) = seen.insert(support[0], (a, b)) {
                collision = Some((prev, (a, b)));
                break 'outer;
            }
        }
    }
    FaithfulnessProbe {
        k,
        l,
        monomials: count,
        collision,
    }
}

/// Minimal operator found by [`minimal_inhomogeneous_operator`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "F: Field + Serialize",
    deserialize = "F: Field + Deserialize<'de>"
))]
pub struct MinimalOperator<F: Field> {
    /// Polynomial coefficients, coprime together with `rhs`; the first
    /// nonzero coefficient has lowest coefficient 1.
    pub operator: OrePoly<F>,
    /// `operator(F) = rhs`, a polynomial.
    pub rhs: FracPoly<F>,
    pub verified_order: usize,
}

/// Degree bounds for the operator search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorBounds {
    /// Largest `M_k`-degree.
    pub d_m: usize,
    /// Largest coefficient degree.
    pub d_x: usize,
    /// Largest degree of the polynomial right-hand side before content removal.
    pub d_r: usize,
}

/// Rows beyond the unknown count used when fitting.
const FIT_MARGIN: usize = 10;

fn try_fit<F: Field>(
    f: &TruncSeries<F>,
    k: u64,
    m: usize,
    delta: usize,
    d_r: usize,
    rows: usize,
) -> Option<(Vec<UniPoly<F>>, UniPoly<F>)> {
    let per = delta + 1;
    let unknowns = (m + 1) * per + d_r + 1;
    // Column (i, j) holds x^j F(x^(k^i)); the last d_r + 1 columns hold -x^t.
    let subs: Vec<TruncSeries<F>> = (0..=m)
        .map(|i| {
            let p = OrePoly::monomial(k, FracPoly::one(), i);
            p.apply(f).expect("polynomial")
        })
        .collect();
    let mut mat = vec![vec![F::zero(); unknowns]; rows];
    for (n, row) in mat.iter_mut().enumerate() {
        for (i, s) in subs.iter().enumerate() {
            for j in 0..per.min(n + 1) {
                row[i * per + j] = s.coeff(n - j).clone();
            }
        }
        if n <= d_r {
            row[(m + 1) * per + n] = F::one().neg();
        }
    }
    let ns = nullspace(&mat, unknowns);
    let v = ns
        .into_iter()
        .find(|v| v[..(m + 1) * per].iter().any(|c| !c.is_zero()))?;
    let coeffs = (0..=m)
        .map(|i| UniPoly::new(v[i * per..(i + 1) * per].to_vec()))
        .collect();
    let rhs = UniPoly::new(v[(m + 1) * per..].to_vec());
    Some((coeffs, rhs))
}

/// Searches for an operator `M` of least `M_k`-degree, then least coefficient
/// degree, with `M F` rational. The answer is a guess verified to the order of `f`.
pub fn minimal_inhomogeneous_operator<F: Field>(
    f: &TruncSeries<F>,
    k: u64,
    bounds: OperatorBounds,
) -> Result<MinimalOperator<F>, OreError> {
    if k < 2 {
        return Err(OreError::BadBase(k));
    }
    let order = f.order();
    if f.is_zero() {
        return Ok(MinimalOperator {
            operator: OrePoly::one(k),
            rhs: FracPoly::zero(),
            verified_order: order,
        });
    }
    let max_unknowns = (bounds.d_m + 1) * (bounds.d_x + 1) + bounds.d_r + 1;
    if order + 1 < max_unknowns + FIT_MARGIN {
        return Err(OreError::InsufficientTruncation {
            order,
            unknowns: max_unknowns,
        });
    }
    for m in 0..=bounds.d_m {
        for delta in 0..=bounds.d_x {
            let unknowns = (m + 1) * (delta + 1) + bounds.d_r + 1;
            let mut rows = (2 * unknowns + FIT_MARGIN).min(order + 1);
            loop {
                let Some((coeffs, rhs)) = try_fit(f, k, m, delta, bounds.d_r, rows) else {
                    break;
                };
                let op = OrePoly::from_polys(k, coeffs.clone())?;
                let residual = op.apply(f)?.sub(&TruncSeries::from_poly(&rhs, order));
                if residual.is_zero() {
                    return Ok(normalize_operator(k, coeffs, rhs, order));
                }
                if rows == order + 1 {
                    break;
                }
                rows = (rows * 2).min(order + 1);
            }
        }
    }
    Err(OreError::NoCandidate)
}

fn normalize_operator<F: Field>(
    k: u64,
    coeffs: Vec<UniPoly<F>>,
    rhs: UniPoly<F>,
    order: usize,
) -> MinimalOperator<F> {
    // The content is taken jointly with the right-hand side so that the
    // equation `M F = R` is primitive and `R` stays a polynomial.
    let content = coeffs.iter().fold(rhs.clone(), |g, c| g.gcd(c));
    let mut coeffs: Vec<UniPoly<F>> = coeffs
        .iter()
        .map(|c| c.div_exact(&content).expect("content divides"))
        .collect();
    let lead = coeffs
        .iter()
        .find_map(|c| c.lowest_coeff().cloned())
        .expect("nonzero operator");
    let s = lead.inv().expect("nonzero");
    coeffs = coeffs.iter().map(|c| c.scale(&s)).collect();
    let rhs = FracPoly::from_poly(rhs.div_exact(&content).expect("content divides").scale(&s));
    MinimalOperator {
        operator: OrePoly::from_polys(k, coeffs).expect("valid base"),
        rhs,
        verified_order: order,
    }
}
