//! Base-`k` linear representations and guessing them from data through the `k`-kernel.

use serde::{Deserialize, Serialize};

use crate::exactalg::{Field, Rational};
use num_traits::ToPrimitive;

use crate::linalg::solve_many;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegularError {
    #[error("base must be at least 2, got {0}")]
    BadBase(u64),
    #[error("need at least {needed} values, got {have}")]
    TooShort { needed: usize, have: usize },
    #[error("no representation of dimension at most {max_dim} fits the data")]
    NoRepWithinBounds { max_dim: usize },
    #[error("malformed representation: {0}")]
    Malformed(String),
    #[error("progression needs 0 <= b < a, got a = {a}, b = {b}")]
    BadProgression { a: usize, b: usize },
}

/// `f(n) = u A(n_l) ... A(n_0) v` with `n = (n_l ... n_0)` in base `k`,
/// most significant digit first; `f(0) = u v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinRep {
    pub k: u64,
    pub u: Vec<Rational>,
    pub mats: Vec<Vec<Vec<Rational>>>,
    pub v: Vec<Rational>,
}

fn row_times(w: &[Rational], a: &[Vec<Rational>]) -> Vec<Rational> {
    let d = w.len();
    (0..d)
        .map(|j| {
            w.iter().zip(a).fold(Rational::zero(), |acc, (wi, row)| {
                if wi.is_zero() || row[j].is_zero() {
                    acc
                } else {
                    acc.add(&wi.mul(&row[j]))
                }
            })
        })
        .collect()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

/// Base-`k` digits of `n`, most significant first; empty for `0`.
pub fn digits_msb(mut n: u64, k: u64) -> Vec<usize> {
    let mut d = Vec::new();
    while n > 0 {
        d.push((n % k) as usize);
        n /= k;
    }
    d.reverse();
    d
}

impl LinRep {
    pub fn new(
        k: u64,
        u: Vec<Rational>,
        mats: Vec<Vec<Vec<Rational>>>,
        v: Vec<Rational>,
    ) -> Result<Self, RegularError> {
        let rep = LinRep { k, u, mats, v };
        rep.validate()?;
        Ok(rep)
    }

    pub fn validate(&self) -> Result<(), RegularError> {
        if self.k < 2 {
            return Err(RegularError::BadBase(self.k));
        }
        let d = self.u.len();
        if d == 0 {
            return Err(RegularError::Malformed("dimension 0".into()));
        }
        if self.v.len() != d {
            return Err(RegularError::Malformed("u and v differ in length".into()));
        }
        if self.mats.len() != self.k as usize {
            return Err(RegularError::Malformed(format!(
                "expected {} matrices",
                self.k
            )));
        }
        if self
            .mats
            .iter()
            .any(|m| m.len() != d || m.iter().any(|r| r.len() != d))
        {
            return Err(RegularError::Malformed("matrix shape".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    pub fn eval(&self, n: u64) -> Rational {
        let w = digits_msb(n, self.k)
            .into_iter()
            .fold(self.u.clone(), |w, d| row_times(&w, &self.mats[d]));
        dot(&w, &self.v)
    }

    /// `f(0..=n_max)`, sharing prefixes: the row vector for `m` is the one for
    /// `m / k` times `A(m mod k)`.
    pub fn values(&self, n_max: usize) -> Vec<Rational> {
        if let Some(v) = self.values_i128(n_max) {
            return v;
        }
        let k = self.k as usize;
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n_max + 1);
        rows.push(self.u.clone());
        for m in 1..=n_max {
            let w = row_times(&rows[m / k], &self.mats[m % k]);
            rows.push(w);
        }
        rows.iter().map(|w| dot(w, &self.v)).collect()
    }

    /// Same as [`LinRep::values`] in checked `i128` arithmetic, for integer
    /// representations whose values stay in range.
    fn values_i128(&self, n_max: usize) -> Option<Vec<Rational>> {
        let int = |x: &Rational| {
            if x.is_integer() {
                x.numer().to_i128()
            } else {
                None
            }
        };
        let u: Vec<i128> = self.u.iter().map(int).collect::<Option<_>>()?;
        let v: Vec<i128> = self.v.iter().map(int).collect::<Option<_>>()?;
        let mats: Vec<Vec<Vec<i128>>> = self
            .mats
            .iter()
            .map(|a| {
                a.iter()
                    .map(|row| row.iter().map(int).collect::<Option<Vec<_>>>())
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<_>>()?;
        let d = u.len();
        let k = self.k as usize;
        let mut rows: Vec<i128> = Vec::with_capacity((n_max + 1) * d);
        rows.extend(&u);
        for m in 1..=n_max {
            let (base, a) = ((m / k) * d, &mats[m % k]);
            for j in 0..d {
                let mut acc = 0i128;
                for (i, row) in a.iter().enumerate() {
                    if row[j] != 0 && rows[base + i] != 0 {
                        acc = acc.checked_add(rows[base + i].checked_mul(row[j])?)?;
                    }
                }
                rows.push(acc);
            }
        }
        rows.chunks(d)
            .map(|w| {
                w.iter()
                    .zip(&v)
                    .try_fold(0i128, |acc, (x, y)| acc.checked_add(x.checked_mul(*y)?))
                    .map(Rational::from_integer)
            })
            .collect()
    }
}

pub fn linrep_eval(rep: &LinRep, n: u64) -> Rational {
    rep.eval(n)
}

/// A guessed representation with the kernel sequences that span it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelGuess {
    pub rep: LinRep,
    /// `(e, r)`: the basis sequence `n -> f(k^e n + r)`.
    pub basis: Vec<(u32, u64)>,
    /// Number of leading values compared when testing independence.
    pub window: usize,
    /// The representation reproduces `f(n)` for all `n <= verified_to`.
    pub verified_to: usize,
}

/// Kernel sequence `(e, r)` on `0..window`.
fn kernel_vec(values: &[Rational], k: u64, e: u32, r: u64, window: usize) -> Vec<Rational> {
    let ke = k.pow(e) as usize;
    (0..window)
        .map(|n| values[ke * n + r as usize].clone())
        .collect()
}

/// Incremental row echelon basis for independence tests.
struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x = x.sub(&f.mul(y));
                    }
                }
            }
        }
        v
    }

    /// Adds `v` if it is independent; reports whether it was.
    fn insert(&mut self, v: &[Rational]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero");
        let r: Vec<Rational> = r.iter().map(|x| x.mul(&inv)).collect();
        self.rows.push((p, r));
        true
    }
}

enum Attempt {
    Found(KernelGuess),
    TooManyGenerators,
    NeedsMoreData,
    Mismatch,
}

fn attempt(values: &[Rational], k: u64, max_dim: usize, window: usize) -> Attempt {
    let n = values.len();
    // Depth e sequences are available on the window when k^e (window - 1) + k^e - 1 < n.
    let depth_ok = |e: u32| {
        k.checked_pow(e)
            .is_some_and(|ke| (ke as usize).saturating_mul(window) <= n)
    };
    let mut basis: Vec<(u32, u64)> = Vec::new();
    let mut vecs: Vec<Vec<Rational>> = Vec::new();
    let mut ech = Echelon { rows: Vec::new() };
    let mut queue = std::collections::VecDeque::from([(0u32, 0u64)]);
    while let Some((e, r)) = queue.pop_front() {
        let v = kernel_vec(values, k, e, r, window);
        if !ech.insert(&v) {
            continue;
        }
        if basis.len() == max_dim {
            return Attempt::TooManyGenerators;
        }
        basis.push((e, r));
        vecs.push(v);
        if !depth_ok(e + 1) {
            return Attempt::NeedsMoreData;
        }
        let ke = k.pow(e);
        for i in 0..k {
            queue.push_back((e + 1, r + i * ke));
        }
    }
    if basis.is_empty() {
        // f vanishes on the window.
        let rep = LinRep {
            k,
            u: vec![Rational::zero()],
            mats: vec![vec![vec![Rational::one()]]; k as usize],
            v: vec![Rational::one()],
        };
        if values.iter().any(|x| !x.is_zero()) {
            return Attempt::Mismatch;
        }
        return Attempt::Found(KernelGuess {
            rep,
            basis,
            window,
            verified_to: n - 1,
        });
    }
    let d = basis.len();
    // Column-wise basis matrix: window rows, d columns.
    let bmat: Vec<Vec<Rational>> = (0..window)
        .map(|row| vecs.iter().map(|v| v[row].clone()).collect())
        .collect();
    let mut children = Vec::with_capacity(d * k as usize);
    for &(e, r) in &basis {
        let ke = k.pow(e);
        for i in 0..k {
            children.push(kernel_vec(values, k, e + 1, r + i * ke, window));
        }
    }
    let Some(coords) = solve_many(&bmat, &children) else {
        return Attempt::Mismatch;
    };
    // b_j(k n + i) = sum_l B_i[j][l] b_l(n); the MSB-first matrices are the transposes.
    let mut mats = vec![vec![vec![Rational::zero(); d]; d]; k as usize];
    for (idx, c) in coords.into_iter().enumerate() {
        let (j, i) = (idx / k as usize, idx % k as usize);
        for (l, cl) in c.into_iter().enumerate() {
            mats[i][l][j] = cl;
        }
    }
    let mut u = vec![Rational::zero(); d];
    for (j, slot) in u.iter_mut().enumerate() {
        *slot = vecs[j][0].clone();
    }
    let mut v = vec![Rational::zero(); d];
    v[0] = Rational::one();
    let rep = LinRep { k, u, mats, v };
    let predicted = rep.values(n - 1);
    if predicted != values {
        return Attempt::Mismatch;
    }
    Attempt::Found(KernelGuess {
        rep,
        basis,
        window,
        verified_to: n - 1,
    })
}

/// Guesses a linear representation of `f` from `values = f(0..=N)`.
///
/// Kernel sequences are compared on a window of leading values, starting at
/// `2 * max_dim + 2` and doubling while the self-check on all `n <= N` fails.
pub fn kernel_guess(
    values: &[Rational],
    k: u64,
    max_dim: usize,
) -> Result<KernelGuess, RegularError> {
    if k < 2 {
        return Err(RegularError::BadBase(k));
    }
    let max_dim = max_dim.max(1);
    let mut window = 2 * max_dim + 2;
    let needed = window * k as usize;
    if values.len() < needed {
        return Err(RegularError::TooShort {
            needed,
            have: values.len(),
        });
    }
    loop {
        match attempt(values, k, max_dim, window) {
            Attempt::Found(g) => return Ok(g),
            Attempt::TooManyGenerators => return Err(RegularError::NoRepWithinBounds { max_dim }),
            Attempt::NeedsMoreData | Attempt::Mismatch => {
                let next = window * 2;
                if next * k as usize > values.len() {
                    return Err(RegularError::NoRepWithinBounds { max_dim });
                }
                window = next;
            }
        }
    }
}

/// Values `f(a n + b)` for all `n` with `a n + b < values.len()`.
pub fn progression_values(
    values: &[Rational],
    a: usize,
    b: usize,
) -> Result<Vec<Rational>, RegularError> {
    if a == 0 || b >= a {
        return Err(RegularError::BadProgression { a, b });
    }
    Ok(values.iter().skip(b).step_by(a).cloned().collect())
}

/// Representation of `n -> f(a n + b)`, obtained by re-guessing from values.
pub fn subsequence_ap(
    values: &[Rational],
    a: usize,
    b: usize,
    k: u64,
    max_dim: usize,
) -> Result<KernelGuess, RegularError> {
    kernel_guess(&progression_values(values, a, b)?, k, max_dim)
}

/// Largest horizon tried by [`subsequence_ap_rep`].
pub const AP_HORIZON_CAP: usize = 1 << 18;

/// Representation of `n -> f(a n + b)` for `f` given by `rep`.
///
/// Values are generated from `rep` and re-guessed with `max_dim = a * dim`,
/// which bounds the rank: `f(a(k^e n + r) + b)` is `f(k^e (a n + c) + s)` with
/// `c < a`. The horizon grows by factors of `k` until the guess closes.
pub fn subsequence_ap_rep(rep: &LinRep, a: usize, b: usize) -> Result<KernelGuess, RegularError> {
    if a == 0 || b >= a {
        return Err(RegularError::BadProgression { a, b });
    }
    let max_dim = a * rep.dim();
    let k = rep.k as usize;
    let mut horizon = 2 * (2 * max_dim + 2) * k;
    loop {
        let values = progression_values(&rep.values(a * horizon + b), a, b)?;
        match kernel_guess(&values, rep.k, max_dim) {
            Ok(g) => return Ok(g),
            Err(e) if horizon * k > AP_HORIZON_CAP => return Err(e),
            Err(_) => horizon *= k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum AutomaticProbe {
    /// The kernel closed with this many distinct sequences.
    AutomaticWithKernelSize {
        size: usize,
    },
    ExceedsHorizon,
}

/// Counts distinct kernel sequences breadth-first, comparing them on a
/// shared window of `window` leading values. Gives up past `horizon`
/// sequences or when the data does not reach the next kernel level.
pub fn is_automatic_probe(
    values: &[Rational],
    k: u64,
    horizon: usize,
    window: usize,
) -> AutomaticProbe {
    let n = values.len();
    let depth_ok = |e: u32| {
        k.checked_pow(e)
            .is_some_and(|ke| (ke as usize).saturating_mul(window) <= n)
    };
    if window == 0 || !depth_ok(1) {
        return AutomaticProbe::ExceedsHorizon;
    }
    let mut seen: Vec<Vec<Rational>> = Vec::new();
    let mut queue = std::collections::VecDeque::from([(0u32, 0u64)]);
    while let Some((e, r)) = queue.pop_front() {
        let v = kernel_vec(values, k, e, r, window);
        if seen.contains(&v) {
            continue;
        }
        if seen.len() == horizon || !depth_ok(e + 1) {
            return AutomaticProbe::ExceedsHorizon;
        }
        seen.push(v);
        let ke = k.pow(e);
        for i in 0..k {
            queue.push_back((e + 1, r + i * ke));
        }
    }
    AutomaticProbe::AutomaticWithKernelSize { size: seen.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::linalg::solve;
    use proptest::prelude::*;

    fn vals(f: impl Fn(u64) -> i64, n: u64) -> Vec<Rational> {
        (0..=n).map(|i| rat(f(i))).collect()
    }

    fn val2(n: u64) -> u32 {
        if n == 0 {
            0
        } else {
            n.trailing_zeros()
        }
    }

    #[test]
    fn eval_examples() {
        let one = LinRep::new(2, vec![rat(1)], vec![vec![vec![rat(1)]]; 2], vec![rat(1)]).unwrap();
        assert!((0..20).all(|n| one.eval(n) == rat(1)));
        // Sum of binary digits: state (s, 1).
        let r = |v: &[i64]| v.iter().map(|&x| rat(x)).collect::<Vec<_>>();
        let sod = LinRep::new(
            2,
            r(&[0, 1]),
            vec![vec![r(&[1, 0]), r(&[0, 1])], vec![r(&[1, 0]), r(&[1, 1])]],
            r(&[1, 0]),
        )
        .unwrap();
        assert_eq!(sod.eval(5), rat(2));
        for n in 0..300u64 {
            assert_eq!(sod.eval(n), rat(n.count_ones() as i64));
        }
        assert_eq!(
            sod.values(299),
            (0..300u64)
                .map(|n| rat(n.count_ones() as i64))
                .collect::<Vec<_>>()
        );
        let f = vals(|n| if n == 0 { 0 } else { 1 << val2(n) }, 64);
        let g = kernel_guess(&f, 2, 4).unwrap();
        assert_eq!(g.rep.dim(), 2);
        assert_eq!(g.rep.eval(12), rat(4));
    }

    #[test]
    fn guess_examples() {
        let c = vals(|_| 7, 40);
        assert_eq!(kernel_guess(&c, 3, 4).unwrap().rep.dim(), 1);
        let id = vals(|n| n as i64, 512);
        let g = kernel_guess(&id, 2, 4).unwrap();
        assert_eq!(g.rep.dim(), 2);
        let far = g.rep.values(10_000);
        assert!(far.iter().enumerate().all(|(n, v)| *v == rat(n as i64)));
        let mut state = 12345u64;
        let random: Vec<Rational> = (0..600)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                rat((state >> 63) as i64)
            })
            .collect();
        assert_eq!(
            kernel_guess(&random, 2, 4).unwrap_err(),
            RegularError::NoRepWithinBounds { max_dim: 4 }
        );
        assert!(matches!(
            kernel_guess(&id[..5], 2, 4),
            Err(RegularError::TooShort { .. })
        ));
    }

    #[test]
    fn serde_shape() {
        let one = LinRep::new(2, vec![rat(1)], vec![vec![vec![rat(1)]]; 2], vec![rat(1)]).unwrap();
        let s = serde_json::to_string(&one).unwrap();
        assert_eq!(
            s,
            r#"{"k":2,"u":["1/1"],"mats":[[["1/1"]],[["1/1"]]],"v":["1/1"]}"#
        );
        let back: LinRep = serde_json::from_str(&s).unwrap();
        assert_eq!(back, one);
    }

    #[test]
    fn progression_examples() {
        let f = vals(|n| if n == 0 { 0 } else { 1 << val2(n) }, 400);
        let g = subsequence_ap(&f, 2, 1, 2, 4).unwrap();
        assert_eq!(g.rep.dim(), 1);
        assert!(g.rep.values(100).iter().all(|v| *v == rat(1)));
        let id = vals(|n| n as i64, 400);
        let g = subsequence_ap(&id, 3, 2, 2, 4).unwrap();
        assert!(g
            .rep
            .values(1000)
            .iter()
            .enumerate()
            .all(|(n, v)| *v == rat(3 * n as i64 + 2)));
        let g = subsequence_ap(&id, 1, 0, 2, 4).unwrap();
        assert_eq!(g.rep.values(400), id);
        assert!(progression_values(&id, 2, 2).is_err());
    }

    /// Distinct kernel sequences of a purely periodic sequence, computed on
    /// whole periods.
    fn periodic_kernel_size(pattern: &[i64], k: u64) -> usize {
        let p = pattern.len() as u64;
        let mut seen: Vec<Vec<i64>> = Vec::new();
        let mut frontier = vec![(1u64, 0u64)];
        while let Some((m, r)) = frontier.pop() {
            let s: Vec<i64> = (0..p)
                .map(|n| pattern[((m * n + r) % p) as usize])
                .collect();
            if seen.contains(&s) {
                continue;
            }
            seen.push(s);
            for i in 0..k {
                frontier.push(((m * k) % p, (r + i * m) % p));
            }
        }
        seen.len()
    }

    #[test]
    fn automatic_examples() {
        let c = vals(|_| 3, 200);
        assert_eq!(
            is_automatic_probe(&c, 2, 16, 16),
            AutomaticProbe::AutomaticWithKernelSize { size: 1 }
        );
        let alt = vals(|n| (n % 2) as i64, 200);
        let expected = periodic_kernel_size(&[0, 1], 2);
        assert_eq!(expected, 3);
        assert_eq!(
            is_automatic_probe(&alt, 2, 16, 16),
            AutomaticProbe::AutomaticWithKernelSize { size: expected }
        );
        let id = vals(|n| n as i64, 4096);
        assert_eq!(
            is_automatic_probe(&id, 2, 16, 16),
            AutomaticProbe::ExceedsHorizon
        );
        let p3 = vals(|n| [1, 5, 2][(n % 3) as usize], 2000);
        assert_eq!(
            is_automatic_probe(&p3, 2, 32, 16),
            AutomaticProbe::AutomaticWithKernelSize {
                size: periodic_kernel_size(&[1, 5, 2], 2)
            }
        );
    }

    #[test]
    fn kernel_closure() {
        let f = vals(
            |n| {
                if n == 0 {
                    0
                } else {
                    (n >> val2(n)) as i64 * (val2(n) as i64 + 1)
                }
            },
            600,
        );
        let g = kernel_guess(&f, 2, 8).unwrap();
        let w = g.window;
        let bmat: Vec<Vec<Rational>> = (0..w)
            .map(|row| {
                g.basis
                    .iter()
                    .map(|&(e, r)| kernel_vec(&f, 2, e, r, w)[row].clone())
                    .collect()
            })
            .collect();
        for &(e, r) in &g.basis {
            for i in 0..2 {
                let child = kernel_vec(&f, 2, e + 1, r + i * 2u64.pow(e), w);
                assert!(solve(&bmat, &child).is_some());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn sum_closure(a in 0i64..4, b in -3i64..4, c in 1i64..4) {
            let f = vals(|n| a * n as i64 + b, 1024);
            let g = vals(|n| if n == 0 { 0 } else { c << val2(n) }, 1024);
            let df = kernel_guess(&f, 2, 6).unwrap().rep.dim();
            let dg = kernel_guess(&g, 2, 6).unwrap().rep.dim();
            let s: Vec<Rational> = f.iter().zip(&g).map(|(x, y)| x.add(y)).collect();
            let gs = kernel_guess(&s, 2, 6).unwrap();
            prop_assert!(gs.rep.dim() <= df + dg);
            prop_assert_eq!(gs.rep.values(1024), s);
        }

        #[test]
        fn held_out_round_trip(r in 0u32..3, m in 1i64..4) {
            let f = vals(|n| if n == 0 { 0 } else { m * ((n >> val2(n)) as i64).pow(r) }, 2048);
            let g = kernel_guess(&f[..=1024], 2, 8).unwrap();
            prop_assert_eq!(g.rep.values(2048), f);
        }
    }
}
