use num_integer::Integer;
use serde::Serialize;

use super::{cyclotomic_poly, euler_phi, AlgError, Field, Rational, UniPoly};

/// Decomposition `P = x^a * prod Phi_d^m * residual`.
///
/// The residual carries the scalar unit and has no root at 0 and no
/// cyclotomic factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegligibilityCertificate {
    pub k: u64,
    pub x_power: usize,
    /// `(order d, multiplicity)`, ascending in `d`.
    pub cyclotomic_factors: Vec<(u64, u32)>,
    pub residual: UniPoly<Rational>,
    pub negligible: bool,
}

impl NegligibilityCertificate {
    /// Multiplies the pieces back together.
    pub fn reassemble(&self) -> UniPoly<Rational> {
        let mut acc = self.residual.shift(self.x_power);
        for &(d, m) in &self.cyclotomic_factors {
            acc = acc.mul(&cyclotomic_poly(d).pow(m));
        }
        acc
    }

    /// Orders of cyclotomic factors that keep the polynomial from being negligible.
    pub fn offending_orders(&self) -> Vec<u64> {
        self.cyclotomic_factors
            .iter()
            .map(|&(d, _)| d)
            .filter(|&d| !roots_of_unity_order_is_negligible(d, self.k))
            .collect()
    }
}

/// A primitive `d`-th root of unity `z` satisfies `z^(k^i) != z` for every
/// `i >= 1` exactly when `gcd(d, k) > 1`.
pub fn roots_of_unity_order_is_negligible(d: u64, k: u64) -> bool {
    d.gcd(&k) > 1
}

/// Upper bound on `d` with `phi(d) <= n`, from `phi(d) > d / (e^gamma lnln d + 3 / lnln d)`.
fn phi_preimage_bound(n: u64) -> u64 {
    let f = |d: f64| {
        let ll = d.ln().ln();
        d / (1.782 * ll + 3.0 / ll)
    };
    let mut d = 16u64;
    while f(d as f64) <= n as f64 {
        d *= 2;
    }
    d
}

/// Floating-point screen: `false` only when `|p(e^(2 pi i / d))|` exceeds the
/// evaluation error bound `(n + 1) eps sum |c_i|` by a wide margin.
fn near_root(p: &UniPoly<Rational>, d: u64) -> bool {
    let (mut re, mut im, mut norm) = (0.0f64, 0.0f64, 0.0f64);
    for (i, c) in p.coeffs().iter().enumerate() {
        let c = c.to_f64();
        let t = std::f64::consts::TAU * ((i as u64 % d) as f64) / d as f64;
        re += c * t.cos();
        im += c * t.sin();
        norm += c.abs();
    }
    if !norm.is_finite() || !re.is_finite() || !im.is_finite() {
        return true;
    }
    re.hypot(im) <= 1e-6 * (p.coeffs().len() as f64) * norm
}

/// Cheap necessary test for `Phi_d | p`: reduce modulo `x^d - 1` first,
/// which `Phi_d` divides.
fn divisible_mod_xd(p: &UniPoly<Rational>, d: u64) -> bool {
    if !near_root(p, d) {
        return false;
    }
    let d = d as usize;
    let mut folded = vec![Rational::zero(); d.min(p.coeffs().len())];
    for (i, c) in p.coeffs().iter().enumerate() {
        let slot = &mut folded[i % d];
        *slot = slot.add(c);
    }
    let folded = UniPoly::new(folded);
    folded.is_zero() || cyclotomic_poly(d as u64).divides(&folded)
}

/// Splits `p` into its `x`-power, its cyclotomic factors and a residual,
/// and decides `k`-negligibility: every nonzero root must be a root of unity
/// whose order shares a factor with `k`.
pub fn factor_negligible(
    p: &UniPoly<Rational>,
    k: u64,
) -> Result<NegligibilityCertificate, AlgError> {
    let a = p.valuation().ok_or(AlgError::ZeroInput)?;
    let mut rest = p.unshift(a);
    let mut factors = Vec::new();
    let bound = phi_preimage_bound(rest.deg0() as u64);
    for d in 1..=bound {
        let deg = rest.deg0() as u64;
        if deg == 0 {
            break;
        }
        let phi = euler_phi(d);
        if phi > deg {
            continue;
        }
        if !divisible_mod_xd(&rest, d) {
            continue;
        }
        let cd = cyclotomic_poly(d);
        let mut mult = 0;
        while let Some(q) = rest.div_exact(&cd) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            factors.push((d, mult));
        }
    }
    let negligible = rest.is_constant()
        && factors
            .iter()
            .all(|&(d, _)| roots_of_unity_order_is_negligible(d, k));
    Ok(NegligibilityCertificate {
        k,
        x_power: a,
        cyclotomic_factors: factors,
        residual: rest,
        negligible,
    })
}

/// Negligibility over any supported field, decided on the rational norm
/// (Galois conjugation preserves both "root of unity" and its order).
pub fn is_negligible<F: Field>(p: &UniPoly<F>, k: u64) -> Result<bool, AlgError> {
    if p.is_zero() {
        return Err(AlgError::ZeroInput);
    }
    factor_negligible(&F::norm_poly(p), k).map(|c| c.negligible)
}

/// `p = negligible * rest`, with `negligible = x^a * prod_{gcd(d,k)>1} Phi_d^m`
/// and `rest` free of negligible roots.
pub fn negligible_part(
    p: &UniPoly<Rational>,
    k: u64,
) -> Result<(UniPoly<Rational>, UniPoly<Rational>), AlgError> {
    let cert = factor_negligible(p, k)?;
    let mut neg = UniPoly::monomial(Rational::one(), cert.x_power);
    let mut rest = cert.residual.clone();
    for &(d, m) in &cert.cyclotomic_factors {
        let f = cyclotomic_poly(d).pow(m);
        if roots_of_unity_order_is_negligible(d, k) {
            neg = neg.mul(&f);
        } else {
            rest = rest.mul(&f);
        }
    }
    Ok((neg, rest))
}
