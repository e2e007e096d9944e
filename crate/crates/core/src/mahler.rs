//! Mahler equations `sum_i P_i(x) F(x^(k^i)) = A(x)`, their transformations,
//! and denominator certificates.

use serde::{Deserialize, Serialize};

use crate::exactalg::{is_negligible, negligible_part, AlgError, Field, Rational, UniPoly};
use crate::series::TruncSeries;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MahlerError {
    #[error("base must be at least 2, got {0}")]
    BadBase(u64),
    #[error("all equation coefficients are zero")]
    AllCoefficientsZero,
    #[error("equation has P_0 = 0")]
    LeadingCoefficientZero,
    #[error("no equations supplied")]
    NoEquations,
    #[error("equations have different bases ({0} and {1})")]
    BaseMismatch(u64, u64),
    #[error("denominator vanishes at 0")]
    DenominatorVanishesAtZero,
    #[error("numerator and denominator are not coprime")]
    NotCoprime,
    #[error("twist root does not satisfy w^k = w")]
    TwistNotFixed,
    #[error("truncation order {order} too short (need at least {needed})")]
    TruncationTooShort { order: usize, needed: usize },
    #[error("substitution factor must be at least 1")]
    BadSubstitution,
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// `sum_i coeffs[i](x) F(x^(k^i)) = inhom(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "F: Field + Serialize",
    deserialize = "F: Field + Deserialize<'de>"
))]
pub struct MahlerEquation<F: Field> {
    pub k: u64,
    pub coeffs: Vec<UniPoly<F>>,
    #[serde(default = "UniPoly::zero")]
    pub inhom: UniPoly<F>,
    /// Transformations that produced this equation, oldest first.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<String>,
}

/// Outcome of checking an equation against a truncated series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
#[serde(bound(
    serialize = "F: Field + Serialize",
    deserialize = "F: Field + Deserialize<'de>"
))]
pub enum Verification<F: Field> {
    /// The residual vanishes through `x^order`.
    Verified { order: usize },
    /// First nonzero coefficient of the residual.
    Mismatch { exponent: usize, value: F },
}

impl<F: Field> Verification<F> {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verification::Verified { .. })
    }

    /// Largest `N'` with the residual zero through `x^N'`.
    pub fn verified_order(&self) -> Option<usize> {
        match self {
            Verification::Verified { order } => Some(*order),
            Verification::Mismatch { exponent, .. } => exponent.checked_sub(1),
        }
    }
}

fn check_base(k: u64) -> Result<(), MahlerError> {
    if k < 2 {
        return Err(MahlerError::BadBase(k));
    }
    Ok(())
}

/// `F(x^m)` truncated at the order of `f`.
fn subst_to_order<F: Field>(f: &TruncSeries<F>, m: Option<usize>) -> TruncSeries<F> {
    let n = f.order();
    let mut out = vec![F::zero(); n + 1];
    out[0] = f.coeff(0).clone();
    if let Some(m) = m {
        for (i, slot) in (1..=n / m).map(|i| (i, i * m)) {
            out[slot] = f.coeff(i).clone();
        }
    }
    TruncSeries::new(out).expect("nonempty")
}

impl<F: Field> MahlerEquation<F> {
    pub fn new(k: u64, coeffs: Vec<UniPoly<F>>, inhom: UniPoly<F>) -> Result<Self, MahlerError> {
        check_base(k)?;
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|p| p.is_zero()) {
            coeffs.pop();
        }
        if coeffs.iter().all(|p| p.is_zero()) {
            return Err(MahlerError::AllCoefficientsZero);
        }
        Ok(MahlerEquation {
            k,
            coeffs,
            inhom,
            provenance: Vec::new(),
        })
    }

    pub fn homogeneous(k: u64, coeffs: Vec<UniPoly<F>>) -> Result<Self, MahlerError> {
        Self::new(k, coeffs, UniPoly::zero())
    }

    /// Index of the last coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.inhom.is_zero()
    }

    pub fn p0(&self) -> &UniPoly<F> {
        &self.coeffs[0]
    }

    /// `k^i`, or `None` when it does not fit in a `usize`.
    fn power(&self, i: usize) -> Option<usize> {
        (self.k as usize).checked_pow(i as u32)
    }

    /// The residual `sum_i P_i(x) F(x^(k^i)) - A(x)` to the order of `f`.
    pub fn residual(&self, f: &TruncSeries<F>) -> TruncSeries<F> {
        let mut acc = TruncSeries::from_poly(&self.inhom.neg(), f.order());
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let term = subst_to_order(f, self.power(i)).mul_poly(p);
            acc = acc.add(&term);
        }
        acc
    }

    /// Checks the equation against `f`. Requires the order of `f` to be at
    /// least `k^n` so that every Mahler term is exercised.
    pub fn verify(&self, f: &TruncSeries<F>) -> Result<Verification<F>, MahlerError> {
        let needed = self.power(self.order()).unwrap_or(usize::MAX);
        if f.order() < needed {
            return Err(MahlerError::TruncationTooShort {
                order: f.order(),
                needed,
            });
        }
        Ok(match self.residual(f).first_nonzero() {
            None => Verification::Verified { order: f.order() },
            Some((exponent, value)) => Verification::Mismatch {
                exponent,
                value: value.clone(),
            },
        })
    }

    /// The equation satisfied by `F(w x)`, valid when `w^k = w`.
    pub fn twist(&self, w: &F) -> Result<Self, MahlerError> {
        if w.pow(self.k) != *w {
            return Err(MahlerError::TwistNotFixed);
        }
        let mut out = MahlerEquation {
            k: self.k,
            coeffs: self.coeffs.iter().map(|p| p.twist(w, 1)).collect(),
            inhom: self.inhom.twist(w, 1),
            provenance: self.provenance.clone(),
        };
        out.provenance.push(format!("twist({w})"));
        Ok(out)
    }

    /// Divides every coefficient (and `A`) by the lowest nonzero coefficient of `P_0`,
    /// or of the first nonzero `P_i` when `P_0 = 0`.
    pub fn normalize(&self) -> Self {
        let lead = self
            .coeffs
            .iter()
            .find_map(|p| p.lowest_coeff().cloned())
            .expect("equation has a nonzero coefficient");
        let inv = lead.inv().expect("nonzero");
        MahlerEquation {
            k: self.k,
            coeffs: self.coeffs.iter().map(|p| p.scale(&inv)).collect(),
            inhom: self.inhom.scale(&inv),
            provenance: self.provenance.clone(),
        }
    }
}

/// Convenience wrapper for [`MahlerEquation::verify`].
pub fn verify_equation<F: Field>(
    eq: &MahlerEquation<F>,
    f: &TruncSeries<F>,
) -> Result<Verification<F>, MahlerError> {
    eq.verify(f)
}

/// The order-1 equation `P(x^k)Q(x) F(x) - P(x)Q(x^k) F(x^k) = 0` for
/// `F = P/Q`. For `P = 0` the trivial equation `F(x) - F(x^k) = 0` is returned.
pub fn rational_equation(
    p: &UniPoly<Rational>,
    q: &UniPoly<Rational>,
    k: u64,
) -> Result<MahlerEquation<Rational>, MahlerError> {
    check_base(k)?;
    if q.coeff(0).is_zero() {
        return Err(MahlerError::DenominatorVanishesAtZero);
    }
    if p.is_zero() {
        return MahlerEquation::homogeneous(k, vec![UniPoly::one(), UniPoly::one().neg()]);
    }
    let ku = k as usize;
    let p0 = p.compose_power(ku).mul(q);
    let p1 = p.mul(&q.compose_power(ku)).neg();
    let mut eq = MahlerEquation::homogeneous(k, vec![p0, p1])?;
    eq.provenance.push(format!("rational(k={k})"));
    Ok(eq)
}

/// The order-1 equation for `P/Q` at base `k^n`, with both sides divided by
/// `gcd(P(x^(k^n)) Q(x), P(x) Q(x^(k^n)))` and `P_0` scaled to have lowest
/// coefficient 1.
pub fn reduce_rational_equation(
    p: &UniPoly<Rational>,
    q: &UniPoly<Rational>,
    k: u64,
    n: u32,
) -> Result<MahlerEquation<Rational>, MahlerError> {
    check_base(k)?;
    if n == 0 {
        return Err(MahlerError::BadBase(1));
    }
    if q.coeff(0).is_zero() {
        return Err(MahlerError::DenominatorVanishesAtZero);
    }
    let big = k.checked_pow(n).ok_or(MahlerError::BadBase(k))?;
    if p.is_zero() {
        return MahlerEquation::homogeneous(big, vec![UniPoly::one(), UniPoly::one().neg()]);
    }
    if !p.gcd(q).is_constant() {
        return Err(MahlerError::NotCoprime);
    }
    let bu = big as usize;
    let lhs = p.compose_power(bu).mul(q);
    let rhs = p.mul(&q.compose_power(bu));
    let g = lhs.gcd(&rhs);
    let lhs = lhs.div_exact(&g).expect("gcd divides");
    let rhs = rhs.div_exact(&g).expect("gcd divides");
    let mut eq = MahlerEquation::homogeneous(big, vec![lhs, rhs.neg()])?.normalize();
    eq.provenance
        .push(format!("reduced-rational(k={k}, n={n})"));
    Ok(eq)
}

/// Result of the Cartier descent behind [`substitute_equation`].
#[derive(Debug, Clone, PartialEq)]
pub struct Substitution<F: Field> {
    /// Equation for `F` whose coefficients are polynomials in `x^l`.
    pub equation: MahlerEquation<F>,
    /// The same equation with `x^l` replaced by `x`: it holds for `G` where `F(x) = G(x^l)`.
    pub compressed: MahlerEquation<F>,
    /// `(modulus, residue)` of every Cartier step, in order.
    pub residues: Vec<(usize, usize)>,
}

fn first_nonzero_residue<F: Field>(p: &UniPoly<F>, l: usize) -> usize {
    (0..l)
        .find(|&r| !p.cartier(l, r).is_zero())
        .expect("nonzero polynomial has a nonzero residue")
}

/// Moves the first nonzero coefficient to index 0 by Cartier steps of
/// modulus `k`, then applies a Cartier step of modulus `l` that keeps the new
/// `P_0` nonzero. Requires `F` to be a power series in `x^l`.
fn descend<F: Field>(eq: &MahlerEquation<F>, l: usize) -> Result<Substitution<F>, MahlerError> {
    if l == 0 {
        return Err(MahlerError::BadSubstitution);
    }
    let m = eq
        .coeffs
        .iter()
        .position(|p| !p.is_zero())
        .ok_or(MahlerError::AllCoefficientsZero)?;
    let k = eq.k as usize;
    let mut coeffs: Vec<UniPoly<F>> = eq.coeffs[m..].to_vec();
    let mut inhom = eq.inhom.clone();
    let mut residues = Vec::new();
    let mut prov = eq.provenance.clone();
    for _ in 0..m {
        // coeffs[0] multiplies F(x^(k^j)) with j >= 1 here, so the Mahler
        // argument is a series in x^k and one Cartier step lowers every index.
        let s = first_nonzero_residue(&coeffs[0], k);
        coeffs = coeffs.iter().map(|p| p.cartier(k, s)).collect();
        inhom = inhom.cartier(k, s);
        residues.push((k, s));
        prov.push(format!("cartier({k},{s})"));
    }
    // After the loop coeffs[i] multiplies F(x^(k^i)).
    let r = first_nonzero_residue(&coeffs[0], l);
    let compressed_coeffs: Vec<UniPoly<F>> = coeffs.iter().map(|p| p.cartier(l, r)).collect();
    let compressed_inhom = inhom.cartier(l, r);
    residues.push((l, r));
    prov.push(format!("cartier({l},{r})"));
    let compressed = MahlerEquation {
        k: eq.k,
        coeffs: compressed_coeffs.clone(),
        inhom: compressed_inhom.clone(),
        provenance: prov.clone(),
    };
    let mut equation = MahlerEquation {
        k: eq.k,
        coeffs: compressed_coeffs
            .iter()
            .map(|p| p.compose_power(l))
            .collect(),
        inhom: compressed_inhom.compose_power(l),
        provenance: prov,
    };
    equation.provenance.push(format!("substitute(x^{l})"));
    Ok(Substitution {
        equation,
        compressed,
        residues,
    })
}

/// Substitution lemma: for `F` in `K[[x^l]]`, an equation whose coefficients
/// are polynomials in `x^l` and whose `P_0` is nonzero.
///
/// Membership of `F` in `K[[x^l]]` is the caller's assertion; verify the
/// result against `F` to catch violations.
pub fn substitute_equation<F: Field>(
    eq: &MahlerEquation<F>,
    l: usize,
) -> Result<Substitution<F>, MahlerError> {
    descend(eq, l)
}

/// Clears fractional exponents. `eq.coeffs` and `eq.inhom` are read as
/// polynomials in `y = x^(1/l)`; the result is a polynomial equation in `x`
/// for the same `F`, with nonzero `P_0`.
pub fn clear_fractional<F: Field>(
    eq: &MahlerEquation<F>,
    l: usize,
) -> Result<MahlerEquation<F>, MahlerError> {
    // In the variable y the unknown is F(y^l), a series in y^l.
    let mut out = descend(eq, l)?.compressed;
    out.provenance.push(format!("clear-fractional(1/{l})"));
    Ok(out)
}

/// Three-valued regularity verdict attached to a denominator bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DenominatorVerdict {
    /// The bound is negligible, so the true denominator is too.
    RegularCertified,
    /// The bound is not negligible and the caller asserted it is exact.
    NotRegularGivenCandidateExact,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "F: Field + Serialize"))]
pub struct DenominatorCertificate<F: Field> {
    /// A multiple of the Mahler denominator; lowest nonzero coefficient 1.
    pub candidate: UniPoly<F>,
    pub provenance: Vec<String>,
    pub verdict: DenominatorVerdict,
}

/// Upper bound on the Mahler denominator: the gcd of the `P_0` of the supplied
/// equations, which must all hold for the same series.
pub fn denominator_upper_bound<F: Field>(
    eqs: &[MahlerEquation<F>],
    assert_exact: bool,
) -> Result<DenominatorCertificate<F>, MahlerError> {
    let first = eqs.first().ok_or(MahlerError::NoEquations)?;
    let mut g = UniPoly::zero();
    let mut provenance = Vec::new();
    for (i, eq) in eqs.iter().enumerate() {
        if eq.k != first.k {
            return Err(MahlerError::BaseMismatch(first.k, eq.k));
        }
        if eq.p0().is_zero() {
            return Err(MahlerError::LeadingCoefficientZero);
        }
        g = g.gcd(eq.p0());
        let steps = if eq.provenance.is_empty() {
            "given".to_string()
        } else {
            eq.provenance.join(" > ")
        };
        provenance.push(format!("eq[{i}]: {steps}"));
    }
    let candidate = g.normalize_lowest();
    let verdict = if is_negligible(&candidate, first.k)? {
        DenominatorVerdict::RegularCertified
    } else if assert_exact {
        DenominatorVerdict::NotRegularGivenCandidateExact
    } else {
        DenominatorVerdict::Unknown
    };
    Ok(DenominatorCertificate {
        candidate,
        provenance,
        verdict,
    })
}

/// Bounded answer to `P <= Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Preceq {
    /// `P` divides `a * prod_{i=0}^{s} Q(x^(k^i))` with `a` negligible.
    HoldsWithWitness { a: UniPoly<Rational>, s: u32 },
    /// No witness with exponent at most `s_max`.
    FailsWithinBound { s_max: u32 },
    /// The product grew past the degree cap before `s_max` was reached.
    Unknown { reached: u32 },
}

/// Largest product degree `preceq` will build.
pub const PRECEQ_DEGREE_CAP: usize = 20_000;

/// Default witness bound `1 + ceil(log_k(1 + deg P))`.
pub fn default_s_max(p: &UniPoly<Rational>, k: u64) -> u32 {
    let target = 1 + p.deg0() as u64;
    let mut s = 0u32;
    let mut pw = 1u64;
    while pw < target {
        pw = pw.saturating_mul(k);
        s += 1;
    }
    1 + s
}

/// Searches `s = 0..=s_max` for a witness of `P <= Q`.
///
/// The non-negligible part of `P` has to divide the product outright, since a
/// negligible multiplier cannot supply its roots; the witness is then
/// `P / gcd(P, product)`, scaled to have lowest coefficient 1.
pub fn preceq(
    p: &UniPoly<Rational>,
    q: &UniPoly<Rational>,
    k: u64,
    s_max: u32,
) -> Result<Preceq, MahlerError> {
    check_base(k)?;
    if p.is_zero() || q.is_zero() {
        return Err(AlgError::ZeroInput.into());
    }
    let (_, rest) = negligible_part(p, k)?;
    let mut prod = UniPoly::one();
    let mut kp = 1usize;
    for s in 0..=s_max {
        let qs = q.compose_power(kp);
        if prod.deg0() + qs.deg0() > PRECEQ_DEGREE_CAP {
            return Ok(Preceq::Unknown { reached: s });
        }
        prod = prod.mul(&qs);
        if rest.divides(&prod) {
            let a = p
                .div_exact(&p.gcd(&prod))
                .expect("gcd divides")
                .normalize_lowest();
            return Ok(Preceq::HoldsWithWitness { a, s });
        }
        kp = match kp.checked_mul(k as usize) {
            Some(v) => v,
            None => return Ok(Preceq::Unknown { reached: s + 1 }),
        };
    }
    Ok(Preceq::FailsWithinBound { s_max })
}

/// Independent check of a `preceq` witness.
pub fn check_preceq_witness(
    p: &UniPoly<Rational>,
    q: &UniPoly<Rational>,
    k: u64,
    a: &UniPoly<Rational>,
    s: u32,
) -> bool {
    if !is_negligible(a, k).unwrap_or(false) {
        return false;
    }
    let mut prod = a.clone();
    let mut kp = 1usize;
    for _ in 0..=s {
        prod = prod.mul(&q.compose_power(kp));
        kp *= k as usize;
    }
    p.divides(&prod)
}

/// [`MahlerEquation::twist`] as a free function.
pub fn twist_equation<F: Field>(
    eq: &MahlerEquation<F>,
    w: &F,
) -> Result<MahlerEquation<F>, MahlerError> {
    eq.twist(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{cyclotomic_poly, rat, CycloElem};
    use crate::series::rational_to_series;

    type P = UniPoly<Rational>;

    fn ints(c: &[i64]) -> P {
        P::from_ints(c)
    }

    fn eq(k: u64, cs: &[&[i64]]) -> MahlerEquation<Rational> {
        MahlerEquation::homogeneous(k, cs.iter().map(|c| ints(c)).collect()).unwrap()
    }

    #[test]
    fn verify_examples() {
        let f = rational_to_series(&P::one(), &ints(&[1, -1]), 10).unwrap();
        let e = eq(2, &[&[1, -1], &[-1, 0, 1]]);
        assert_eq!(e.verify(&f).unwrap(), Verification::Verified { order: 10 });
        let z = TruncSeries::zero(10);
        assert!(e.verify(&z).unwrap().is_verified());
        let bad = eq(2, &[&[1, -1], &[-1, 0, 0, 1]]);
        match bad.verify(&f).unwrap() {
            Verification::Mismatch { exponent, .. } => assert_eq!(exponent, 2),
            v => panic!("{v:?}"),
        }
        assert!(matches!(
            e.verify(&f.truncate(1)),
            Err(MahlerError::TruncationTooShort { .. })
        ));
    }

    #[test]
    fn rational_equation_examples() {
        let e = rational_equation(&P::one(), &ints(&[1, -1]), 2).unwrap();
        assert_eq!(e.coeffs, vec![ints(&[1, -1]), ints(&[-1, 0, 1])]);
        let e = rational_equation(&P::one(), &P::one(), 3).unwrap();
        assert_eq!(e.coeffs, vec![P::one(), ints(&[-1])]);
        let fib = rational_equation(&ints(&[0, 1]), &ints(&[1, -1, -1]), 2).unwrap();
        let mut vals = vec![0i64, 1];
        for n in 2..=30 {
            vals.push(vals[n - 1] + vals[n - 2]);
        }
        let f = crate::series::series_from_ints(&vals);
        assert_eq!(
            fib.verify(&f).unwrap(),
            Verification::Verified { order: 30 }
        );
        assert_eq!(
            rational_equation(&P::one(), &ints(&[0, 1]), 2),
            Err(MahlerError::DenominatorVanishesAtZero)
        );
    }

    #[test]
    fn reduce_examples() {
        let e = reduce_rational_equation(&P::one(), &ints(&[1, -1]), 2, 1).unwrap();
        assert_eq!(e.coeffs, vec![P::one(), ints(&[-1, -1])]);
        let e = reduce_rational_equation(&P::one(), &P::one(), 5, 1).unwrap();
        assert_eq!(e.coeffs, vec![P::one(), ints(&[-1])]);
        let e = reduce_rational_equation(&P::one(), &ints(&[1, 1, 1]), 2, 2).unwrap();
        assert_eq!(e.k, 4);
        assert!(cyclotomic_poly(3).gcd(e.p0()).is_constant());
        let f = rational_to_series(&P::one(), &ints(&[1, 1, 1]), 40).unwrap();
        assert!(e.verify(&f).unwrap().is_verified());
        assert_eq!(
            reduce_rational_equation(&ints(&[1, -1]), &ints(&[1, -1]), 2, 1),
            Err(MahlerError::NotCoprime)
        );
    }

    #[test]
    fn substitution_examples() {
        // F = 1/(1-x^2) in K[[x^2]].
        let q = ints(&[1, 0, -1]);
        let f = rational_to_series(&P::one(), &q, 20).unwrap();
        let e = rational_equation(&P::one(), &q, 2).unwrap();
        let sub = substitute_equation(&e, 2).unwrap();
        assert!(!sub.equation.p0().is_zero());
        for c in &sub.equation.coeffs {
            assert!(c
                .coeffs()
                .iter()
                .enumerate()
                .all(|(i, v)| i % 2 == 0 || v.is_zero()));
        }
        assert_eq!(
            sub.equation.verify(&f).unwrap(),
            Verification::Verified { order: 20 }
        );
        let g = rational_to_series(&P::one(), &ints(&[1, -1]), 20).unwrap();
        assert!(sub.compressed.verify(&g).unwrap().is_verified());

        // l = 1 with P_0 = 0: F(x^2) - (1+x^2) F(x^4) = 0, i.e. the reduced
        // equation for 1/(1-x) pushed up one Mahler step.
        let e = eq(2, &[&[], &[1], &[-1, 0, -1]]);
        let sub = substitute_equation(&e, 1).unwrap();
        assert_eq!(sub.equation.coeffs, vec![P::one(), ints(&[-1, -1])]);
        assert_eq!(sub.residues, vec![(2, 0), (1, 0)]);
        assert!(sub.equation.is_homogeneous());
        let zero = MahlerEquation {
            k: 2,
            coeffs: vec![P::zero(); 2],
            inhom: P::zero(),
            provenance: vec![],
        };
        assert_eq!(
            substitute_equation(&zero, 1).unwrap_err(),
            MahlerError::AllCoefficientsZero
        );
        assert_eq!(
            MahlerEquation::homogeneous(2, vec![P::zero()]).unwrap_err(),
            MahlerError::AllCoefficientsZero
        );
    }

    #[test]
    fn clear_fractional_examples() {
        let e = eq(2, &[&[1, -1], &[-1, 0, 1]]);
        let out = clear_fractional(&e, 1).unwrap();
        assert_eq!(out.coeffs, e.coeffs);
        // y F(x) - y F(x^2) = y^3 - y^5 with y = x^(1/2), witness F = x.
        let e = MahlerEquation::new(
            2,
            vec![ints(&[0, 1]), ints(&[0, -1])],
            ints(&[0, 0, 0, 1, 0, -1]),
        )
        .unwrap();
        let out = clear_fractional(&e, 2).unwrap();
        assert_eq!(out.coeffs, vec![P::one(), ints(&[-1])]);
        assert_eq!(out.inhom, ints(&[0, 1, -1]));
        let f = crate::series::series_from_ints(&[0, 1, 0, 0, 0, 0, 0, 0, 0]);
        assert!(out.verify(&f).unwrap().is_verified());
    }

    #[test]
    fn denominator_examples() {
        let e = eq(2, &[&[1, -1], &[-1, 0, 1]]);
        let c = denominator_upper_bound(std::slice::from_ref(&e), false).unwrap();
        assert_eq!(c.candidate, ints(&[1, -1]));
        assert_eq!(c.verdict, DenominatorVerdict::Unknown);
        let c = denominator_upper_bound(std::slice::from_ref(&e), true).unwrap();
        assert_eq!(c.verdict, DenominatorVerdict::NotRegularGivenCandidateExact);
        let e2 = eq(2, &[&[1, 1], &[-1]]);
        let c = denominator_upper_bound(&[e.clone(), e2], false).unwrap();
        assert_eq!(c.candidate, P::one());
        assert_eq!(c.verdict, DenominatorVerdict::RegularCertified);
        let red = reduce_rational_equation(&P::one(), &ints(&[1, -1]), 2, 1).unwrap();
        let c = denominator_upper_bound(&[red], false).unwrap();
        assert_eq!(c.verdict, DenominatorVerdict::RegularCertified);
        assert_eq!(
            denominator_upper_bound::<Rational>(&[], false).unwrap_err(),
            MahlerError::NoEquations
        );
        assert_eq!(
            denominator_upper_bound(&[e, eq(3, &[&[1], &[-1]])], false).unwrap_err(),
            MahlerError::BaseMismatch(2, 3)
        );
    }

    #[test]
    fn preceq_examples() {
        let neg = ints(&[1, 1]).mul(&ints(&[0, 1]));
        let q = ints(&[1, -3]);
        assert_eq!(
            preceq(&neg, &q, 2, 0).unwrap(),
            Preceq::HoldsWithWitness {
                a: neg.clone(),
                s: 0
            }
        );
        let p = ints(&[1, -2, 5]);
        assert_eq!(
            preceq(&p, &p, 2, 0).unwrap(),
            Preceq::HoldsWithWitness { a: P::one(), s: 0 }
        );
        let p = ints(&[1, -1]).mul(&ints(&[1, 0, -1]));
        let q = ints(&[1, -1]);
        assert_eq!(
            preceq(&p, &q, 2, 1).unwrap(),
            Preceq::HoldsWithWitness { a: P::one(), s: 1 }
        );
        assert_eq!(
            preceq(&p, &q, 2, 0).unwrap(),
            Preceq::FailsWithinBound { s_max: 0 }
        );
        // (1-x)(1-x^2) = -(x-1)^2 (x+1): x+1 is negligible for k=2 but (x-1)^2
        // needs two factors vanishing at 1.
        assert!(matches!(
            preceq(&ints(&[1, -2]), &ints(&[1, -1]), 2, 5).unwrap(),
            Preceq::FailsWithinBound { .. }
        ));
        assert!(preceq(&P::zero(), &q, 2, 1).is_err());
        assert_eq!(default_s_max(&ints(&[1, 0, 0, 1]), 2), 3);
    }

    #[test]
    fn twist_examples() {
        let e = eq(3, &[&[1, -1], &[-1, 0, 0, 1]]);
        assert_eq!(e.twist(&rat(1)).unwrap().coeffs, e.coeffs);
        let t = e.twist(&rat(-1)).unwrap();
        assert_eq!(t.coeffs, vec![ints(&[1, 1]), ints(&[-1, 0, 0, -1])]);
        let g = rational_to_series(&P::one(), &ints(&[1, 1]), 30).unwrap();
        assert!(t.verify(&g).unwrap().is_verified());
        assert_eq!(
            eq(2, &[&[1], &[-1]]).twist(&rat(-1)).unwrap_err(),
            MahlerError::TwistNotFixed
        );
        // Over Q(zeta_3) with k = 4: zeta_3^4 = zeta_3.
        let z = CycloElem::zeta(3);
        let ec = MahlerEquation::homogeneous(
            4,
            vec![
                P::one().map(CycloElem::from_rational),
                UniPoly::constant(CycloElem::one().neg()),
            ],
        )
        .unwrap();
        assert!(ec.twist(&z).is_ok());
    }

    #[test]
    fn serde_shape() {
        let e = eq(2, &[&[1, -1], &[-1, 0, 1]]);
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(
            s,
            r#"{"k":2,"coeffs":[["1/1","-1/1"],["-1/1","0/1","1/1"]],"inhom":[]}"#
        );
        let back: MahlerEquation<Rational> =
            serde_json::from_str(r#"{"k":2,"coeffs":[[1,-1],["-1",0,1]]}"#).unwrap();
        assert_eq!(back, e);
    }
}
