//! Truncated formal power series with explicit truncation order.
//!
//! A [`TruncSeries`] of order `N` knows the coefficients of `x^0..=x^N`;
//! everything above is unknown (not zero). Every operation returns the
//! largest order it can prove.

use serde::{Deserialize, Serialize};

use crate::exactalg::{Field, Rational, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("residue {r} out of range for modulus {l}")]
    ResidueOutOfRange { l: usize, r: usize },
    #[error("truncation order {order} too short (need at least {needed})")]
    TruncationTooShort { order: usize, needed: usize },
    #[error("denominator vanishes at 0")]
    DenominatorVanishesAtZero,
    #[error("constant term must be 1")]
    ConstantTermNotOne,
    #[error("series must have at least one coefficient")]
    Empty,
}

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries<F>", into = "RawSeries<F>")]
#[serde(bound(
    serialize = "F: Field + Serialize",
    deserialize = "F: Field + Deserialize<'de>"
))]
pub struct TruncSeries<F: Field> {
    coeffs: Vec<F>,
}

#[derive(Serialize, Deserialize)]
struct RawSeries<F> {
    order: usize,
    coeffs: Vec<F>,
}

impl<F: Field> TryFrom<RawSeries<F>> for TruncSeries<F> {
    type Error = String;

    fn try_from(raw: RawSeries<F>) -> Result<Self, String> {
        if raw.coeffs.len() != raw.order + 1 {
            return Err(format!(
                "expected {} coefficients, found {}",
                raw.order + 1,
                raw.coeffs.len()
            ));
        }
        Ok(TruncSeries { coeffs: raw.coeffs })
    }
}

impl<F: Field> From<TruncSeries<F>> for RawSeries<F> {
    fn from(s: TruncSeries<F>) -> Self {
        RawSeries {
            order: s.order(),
            coeffs: s.coeffs,
        }
    }
}

impl<F: Field> std::fmt::Debug for TruncSeries<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TruncSeries(order {}, {:?})", self.order(), self.coeffs)
    }
}

impl<F: Field> TruncSeries<F> {
    pub fn new(coeffs: Vec<F>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(TruncSeries { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        TruncSeries {
            coeffs: vec![F::zero(); order + 1],
        }
    }

    /// An exactly known polynomial, viewed to order `order`.
    pub fn from_poly(p: &UniPoly<F>, order: usize) -> Self {
        TruncSeries {
            coeffs: (0..=order).map(|i| p.coeff(i)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &F {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        TruncSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// First coefficient that is not zero.
    pub fn first_nonzero(&self) -> Option<(usize, &F)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.first_nonzero().is_none()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        TruncSeries {
            coeffs: (0..n).map(|i| self.coeffs[i].add(&o.coeffs[i])).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        TruncSeries {
            coeffs: (0..n).map(|i| self.coeffs[i].sub(&o.coeffs[i])).collect(),
        }
    }

    pub fn scalar_mul(&self, c: &F) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut out = vec![F::zero(); n];
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        TruncSeries { coeffs: out }
    }

    /// Product with an exactly known polynomial; the order is unchanged.
    pub fn mul_poly(&self, p: &UniPoly<F>) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![F::zero(); n];
        for (i, a) in p.coeffs().iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in self.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        TruncSeries { coeffs: out }
    }

    /// Cartier operator: coefficient `n` of the result is `g(l*n + r)`.
    pub fn cartier(&self, l: usize, r: usize) -> Result<Self, SeriesError> {
        if l == 0 || r >= l {
            return Err(SeriesError::ResidueOutOfRange { l, r });
        }
        if r > self.order() {
            return Err(SeriesError::TruncationTooShort {
                order: self.order(),
                needed: r,
            });
        }
        Ok(TruncSeries {
            coeffs: self.coeffs.iter().skip(r).step_by(l).cloned().collect(),
        })
    }

    /// `G(x^m)`. Known up to `x^(m(N+1)-1)`: the first unknown coefficient
    /// of `G` lands at `x^(m(N+1))`.
    pub fn mahler_subst(&self, m: usize) -> Self {
        assert!(m >= 1, "Mahler substitution needs m >= 1");
        let len = self.coeffs.len() * m;
        let mut out = vec![F::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * m] = c.clone();
        }
        TruncSeries { coeffs: out }
    }

    /// `G(w^j x)`: coefficient `n` is multiplied by `w^(j n)`.
    pub fn twist(&self, w: &F, j: u64) -> Self {
        let step = w.pow(j);
        let mut f = F::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.mul(&f));
            f = f.mul(&step);
        }
        TruncSeries { coeffs: out }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> TruncSeries<G> {
        TruncSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// The known coefficients as a polynomial.
    pub fn to_poly(&self) -> UniPoly<F> {
        UniPoly::new(self.coeffs.clone())
    }
}

/// Expansion of `P/Q` to order `order`; requires `Q(0) != 0`.
pub fn rational_to_series<F: Field>(
    p: &UniPoly<F>,
    q: &UniPoly<F>,
    order: usize,
) -> Result<TruncSeries<F>, SeriesError> {
    let q0_inv = q
        .coeff(0)
        .inv()
        .ok_or(SeriesError::DenominatorVanishesAtZero)?;
    let mut out: Vec<F> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut acc = p.coeff(n);
        for i in 1..=n.min(q.deg0()) {
            let qi = q.coeff(i);
            if !qi.is_zero() {
                acc = acc.sub(&qi.mul(&out[n - i]));
            }
        }
        out.push(acc.mul(&q0_inv));
    }
    Ok(TruncSeries { coeffs: out })
}

/// `prod_{j >= 0} P0(x^(k^j))` to order `order`; factors with `k^j > order`
/// are `1 mod x^(order+1)`.
pub fn infinite_product_truncated<F: Field>(
    p0: &UniPoly<F>,
    k: usize,
    order: usize,
) -> Result<TruncSeries<F>, SeriesError> {
    assert!(k >= 2, "base must be at least 2");
    if !p0.coeff(0).is_one() {
        return Err(SeriesError::ConstantTermNotOne);
    }
    let mut acc = TruncSeries::from_poly(&UniPoly::one(), order);
    let mut kj = 1usize;
    while kj <= order {
        acc = acc.mul_poly(&p0.compose_power(kj));
        kj = match kj.checked_mul(k) {
            Some(v) => v,
            None => break,
        };
    }
    Ok(acc)
}

/// Convenience: a rational series from integer value lists.
pub fn series_from_ints(values: &[i64]) -> TruncSeries<Rational> {
    TruncSeries::new(values.iter().map(|&v| Rational::from(v)).collect()).expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::CycloElem;
    use proptest::prelude::*;

    type S = TruncSeries<Rational>;
    type P = UniPoly<Rational>;

    #[test]
    fn cartier_examples() {
        let g = series_from_ints(&[0, 1, 1, 1]);
        let c = g.cartier(2, 1).unwrap();
        assert_eq!(c, series_from_ints(&[1, 1]));
        assert_eq!(g.cartier(1, 0).unwrap(), g);
        assert_eq!(
            g.cartier(2, 2),
            Err(SeriesError::ResidueOutOfRange { l: 2, r: 2 })
        );
    }

    #[test]
    fn mahler_subst_examples() {
        let g = series_from_ints(&[1, 1]);
        let m = g.mahler_subst(2);
        assert_eq!(m.coeffs()[..3], series_from_ints(&[1, 0, 1]).coeffs()[..]);
        assert_eq!(m.order(), 3);
        assert_eq!(g.mahler_subst(1), g);
        let h = series_from_ints(&[3, 1, 4, 1, 5]);
        assert_eq!(h.mahler_subst(3).cartier(3, 0).unwrap(), h);
    }

    #[test]
    fn twist_examples() {
        let f = series_from_ints(&[0, 1, 1]).map(CycloElem::from_rational);
        let z = CycloElem::zeta(3);
        assert_eq!(f.twist(&z, 0), f);
        let t = f.twist(&z, 1);
        assert_eq!(t.coeffs(), &[CycloElem::zero(), z.clone(), z.pow(2)]);
        let g = series_from_ints(&[0, 1, 1, 1]).map(CycloElem::from_rational);
        let sum = (0..3)
            .map(|j| g.twist(&z, j))
            .reduce(|a, b| a.add(&b))
            .unwrap();
        assert_eq!(
            sum,
            series_from_ints(&[0, 0, 0, 3]).map(CycloElem::from_rational)
        );
    }

    #[test]
    fn infinite_product_examples() {
        assert_eq!(
            infinite_product_truncated(&P::one(), 3, 5).unwrap(),
            S::from_poly(&P::one(), 5)
        );
        let p0 = P::from_ints(&[1, -1]);
        let d = infinite_product_truncated(&p0, 2, 7).unwrap();
        // brute-force expansion of (1-x)(1-x^2)(1-x^4)
        let oracle = P::from_ints(&[1, -1])
            .mul(&P::from_ints(&[1, 0, -1]))
            .mul(&P::from_ints(&[1, 0, 0, 0, -1]));
        assert_eq!(d, S::from_poly(&oracle, 7));
        assert_eq!(d, series_from_ints(&[1, -1, -1, 1, -1, 1, 1, -1]));
        // D(x) = P0(x) D(x^2)
        let d = infinite_product_truncated(&P::from_ints(&[1, 2, -1]), 2, 40).unwrap();
        assert_eq!(
            d,
            d.mahler_subst(2)
                .mul_poly(&P::from_ints(&[1, 2, -1]))
                .truncate(40)
        );
        assert_eq!(
            infinite_product_truncated(&P::from_ints(&[2, 1]), 2, 4),
            Err(SeriesError::ConstantTermNotOne)
        );
    }

    #[test]
    fn rational_series() {
        let s = rational_to_series(&P::one(), &P::from_ints(&[1, -1]), 5).unwrap();
        assert_eq!(s, series_from_ints(&[1; 6]));
        let fib =
            rational_to_series(&P::from_ints(&[0, 1]), &P::from_ints(&[1, -1, -1]), 8).unwrap();
        assert_eq!(fib, series_from_ints(&[0, 1, 1, 2, 3, 5, 8, 13, 21]));
        assert_eq!(
            rational_to_series(&P::one(), &P::from_ints(&[0, 1]), 3),
            Err(SeriesError::DenominatorVanishesAtZero)
        );
    }

    fn poly_strategy(max_deg: usize) -> impl Strategy<Value = P> {
        prop::collection::vec(-5i64..=5, 1..=max_deg + 1).prop_map(|v| P::from_ints(&v))
    }

    proptest! {
        #[test]
        fn cartier_product_rule(p in poly_strategy(30), g in prop::collection::vec(-5i64..=5, 1..40),
                                l in 1usize..5, r_seed in 0usize..5) {
            let r = r_seed % l;
            let g = series_from_ints(&g);
            let lhs = g.mahler_subst(l).mul_poly(&p);
            if r <= lhs.order() {
                let lhs = lhs.cartier(l, r).unwrap();
                let rhs = g.mul_poly(&p.cartier(l, r));
                let n = lhs.order().min(rhs.order());
                prop_assert_eq!(lhs.truncate(n), rhs.truncate(n));
            }
            let dp = p.cartier(l, r);
            prop_assert!(dp.deg0() * l <= p.deg0());
            if !p.is_zero() {
                prop_assert!((0..l).any(|s| !p.cartier(l, s).is_zero()));
            }
        }

        #[test]
        fn cartier_composition(g in prop::collection::vec(-9i64..=9, 30..80), l in 1usize..4, lp in 1usize..4,
                               r in 0usize..4, rp in 0usize..4) {
            let (r, rp) = (r % l, rp % lp);
            let g = series_from_ints(&g);
            let a = g.cartier(lp, rp).unwrap().cartier(l, r).unwrap();
            let b = g.cartier(l * lp, lp * r + rp).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn truncation_soundness(v in prop::collection::vec(-9i64..=9, 20..60), cut in 1usize..19, l in 1usize..4, m in 1usize..4) {
            let long = series_from_ints(&v);
            let short = long.truncate(cut);
            let a = short.mul(&short.mahler_subst(m)).cartier(l, 0).unwrap();
            let b = long.mul(&long.mahler_subst(m)).cartier(l, 0).unwrap();
            prop_assert!(a.order() <= b.order());
            prop_assert_eq!(a.coeffs(), &b.coeffs()[..=a.order()]);
        }
    }

    #[test]
    fn serde_shape() {
        let s = series_from_ints(&[1, 2]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"order":1,"coeffs":["1/1","2/1"]}"#);
        let back: S = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<S>(r#"{"order":3,"coeffs":[1]}"#).is_err());
    }
}
