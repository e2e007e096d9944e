//! Linear recurrence sequences and eventually periodic sequences.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::exactalg::{Field, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LrsError {
    #[error("empty input")]
    Empty,
    #[error("no r <= {r_max} makes h(n)/n^r eventually periodic on the data")]
    NoPowerPeriodicSplit { r_max: u32 },
    #[error("classification dichotomy violated: multiplicative but neither periodic nor eventually zero")]
    DichotomyViolated,
    #[error("period must be nonempty")]
    EmptyPeriod,
}

/// `f(n) = sum_{i=1}^d rec[i-1] * f(n-i)` for `n >= d`, with `f(0..d) = init`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LRSSpec {
    pub rec: Vec<Rational>,
    pub init: Vec<Rational>,
}

impl LRSSpec {
    pub fn new(rec: Vec<Rational>, init: Vec<Rational>) -> Self {
        assert_eq!(
            rec.len(),
            init.len(),
            "recurrence order and initial values disagree"
        );
        LRSSpec { rec, init }
    }

    /// Constant sequence `c`.
    pub fn constant(c: Rational) -> Self {
        LRSSpec {
            rec: vec![Rational::one()],
            init: vec![c],
        }
    }

    /// Geometric sequence `a^i`.
    pub fn geometric(a: Rational) -> Self {
        LRSSpec {
            rec: vec![a],
            init: vec![Rational::one()],
        }
    }

    pub fn order(&self) -> usize {
        self.rec.len()
    }

    /// `f(0..count)`.
    pub fn values(&self, count: usize) -> Vec<Rational> {
        let d = self.order();
        let mut out: Vec<Rational> = self.init.iter().take(count).cloned().collect();
        while out.len() < count {
            let n = out.len();
            let v = (1..=d).fold(Rational::zero(), |acc, i| {
                acc.add(&self.rec[i - 1].mul(&out[n - i]))
            });
            out.push(v);
        }
        out
    }

    pub fn eval(&self, n: usize) -> Rational {
        self.values(n + 1).pop().unwrap()
    }
}

/// Output of Berlekamp–Massey: the shortest recurrence generating the data,
/// and whether the data length (at least twice the order) pins it down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalRecurrence {
    pub lrs: LRSSpec,
    pub unique: bool,
}

/// Shortest linear recurrence consistent with every supplied value.
pub fn berlekamp_massey(values: &[Rational]) -> MinimalRecurrence {
    // connection polynomial c(x) = 1 + c_1 x + ... ; s[n] = -sum c_i s[n-i]
    let mut c = vec![Rational::one()];
    let mut b = vec![Rational::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = Rational::one();
    for n in 0..values.len() {
        let mut d = values[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d = d.add(&c[i].mul(&values[n - i]));
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = d.div(&bd).unwrap();
        let t = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, Rational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] = c[i + m].sub(&coef.mul(bi));
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = t;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, Rational::zero());
    let rec = c[1..].iter().map(Field::neg).collect();
    let init = values[..l].to_vec();
    MinimalRecurrence {
        lrs: LRSSpec { rec, init },
        unique: 2 * l <= values.len(),
    }
}

/// `pre` followed by `per` repeated forever. Positions are 0-based; for
/// a function on `n >= 1` (such as a character) position `n - 1` holds `chi(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventuallyPeriodic {
    pub pre: Vec<Rational>,
    pub per: Vec<Rational>,
}

impl EventuallyPeriodic {
    pub fn new(pre: Vec<Rational>, per: Vec<Rational>) -> Result<Self, LrsError> {
        if per.is_empty() {
            return Err(LrsError::EmptyPeriod);
        }
        Ok(EventuallyPeriodic { pre, per })
    }

    pub fn periodic(per: Vec<Rational>) -> Self {
        Self::new(Vec::new(), per).expect("nonempty period")
    }

    pub fn constant(c: Rational) -> Self {
        Self::periodic(vec![c])
    }

    pub fn value_at(&self, i: usize) -> Rational {
        if i < self.pre.len() {
            self.pre[i].clone()
        } else {
            self.per[(i - self.pre.len()) % self.per.len()].clone()
        }
    }

    /// `chi(n)` for the 1-based convention.
    pub fn chi(&self, n: u64) -> Rational {
        assert!(n >= 1, "characters are indexed from 1");
        self.value_at((n - 1) as usize)
    }

    pub fn values(&self, count: usize) -> Vec<Rational> {
        (0..count).map(|i| self.value_at(i)).collect()
    }

    pub fn is_eventually_zero(&self) -> bool {
        self.per.iter().all(Rational::is_zero)
    }

    /// Canonical form: shortest period, then shortest preperiod.
    pub fn minimize(&self) -> Self {
        let n = self.per.len();
        let p = (1..=n)
            .filter(|p| n.is_multiple_of(*p))
            .find(|&p| (0..n).all(|i| self.per[i] == self.per[(i + p) % n]))
            .unwrap_or(n);
        let mut per: Vec<Rational> = self.per[..p].to_vec();
        let mut pre = self.pre.clone();
        while let Some(last) = pre.last() {
            if *last != per[p - 1] {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        EventuallyPeriodic { pre, per }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        EventuallyPeriodic {
            pre: self.pre.iter().map(|v| v.mul(c)).collect(),
            per: self.per.iter().map(|v| v.mul(c)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeriodicityVerdict {
    /// Consistent with every value; `evidence` is the number of values checked.
    Periodic {
        pattern: EventuallyPeriodic,
        evidence: usize,
    },
    NotWithinRange,
}

impl PeriodicityVerdict {
    pub fn pattern(&self) -> Option<&EventuallyPeriodic> {
        match self {
            PeriodicityVerdict::Periodic { pattern, .. } => Some(pattern),
            PeriodicityVerdict::NotWithinRange => None,
        }
    }
}

/// Eventually periodic pattern with the shortest `preperiod + period`
/// (ties to the shorter period) such that the data after the preperiod
/// contains at least two full periods.
pub fn detect_eventually_periodic(values: &[Rational]) -> Result<PeriodicityVerdict, LrsError> {
    let len = values.len();
    if len == 0 {
        return Err(LrsError::Empty);
    }
    let mut best: Option<(usize, usize)> = None;
    for p in 1..=len / 2 {
        if best.is_some_and(|(s, bp)| p >= s + bp) {
            break;
        }
        let start = (0..len - p)
            .rev()
            .find(|&n| values[n] != values[n + p])
            .map_or(0, |n| n + 1);
        if len - start >= 2 * p && best.is_none_or(|(s, bp)| start + p < s + bp) {
            best = Some((start, p));
        }
    }
    Ok(match best {
        Some((start, p)) => PeriodicityVerdict::Periodic {
            pattern: EventuallyPeriodic {
                pre: values[..start].to_vec(),
                per: values[start..start + p].to_vec(),
            },
            evidence: len,
        },
        None => PeriodicityVerdict::NotWithinRange,
    })
}

/// Finds the least `r <= r_max` with `n -> h(n) / n^r` eventually periodic,
/// with the periodic part covering at least half of the data. `h[0]` is `h(1)`.
pub fn power_periodic_decompose(
    h: &[Rational],
    r_max: u32,
) -> Result<(u32, EventuallyPeriodic), LrsError> {
    if h.is_empty() {
        return Err(LrsError::Empty);
    }
    for r in 0..=r_max {
        let scaled: Vec<Rational> = h
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.div(&Rational::from((i + 1) as u64).pow(r as i32))
                    .unwrap()
            })
            .collect();
        // A preperiod covering most of the data is a coincidence in the tail,
        // not evidence.
        if let PeriodicityVerdict::Periodic { pattern, .. } = detect_eventually_periodic(&scaled)? {
            if 2 * pattern.pre.len() <= h.len() {
                return Ok((r, pattern));
            }
        }
    }
    Err(LrsError::NoPowerPeriodicSplit { r_max })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum ChiClass {
    Periodic,
    EventuallyZero,
    NotMultiplicative { m: u64, n: u64 },
}

/// First coprime pair `(m, n)` with `m * n <= range` and `chi(mn) != chi(m) chi(n)`.
pub fn multiplicativity_witness(chi: impl Fn(u64) -> Rational, range: u64) -> Option<(u64, u64)> {
    for m in 1..=range {
        for n in m..=range / m {
            if m.gcd(&n) == 1 && chi(m * n) != chi(m).mul(&chi(n)) {
                return Some((m, n));
            }
        }
    }
    None
}

/// A multiplicative eventually periodic function is periodic or eventually
/// zero; anything else means the input was not what it claimed to be.
pub fn classify_mult_ev_periodic(
    chi: &EventuallyPeriodic,
    range: u64,
) -> Result<ChiClass, LrsError> {
    if let Some((m, n)) = multiplicativity_witness(|n| chi.chi(n), range) {
        return Ok(ChiClass::NotMultiplicative { m, n });
    }
    let canon = chi.minimize();
    if canon.is_eventually_zero() {
        Ok(ChiClass::EventuallyZero)
    } else if canon.pre.is_empty() {
        Ok(ChiClass::Periodic)
    } else {
        Err(LrsError::DichotomyViolated)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{frac, rat};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn bm_examples() {
        let g = berlekamp_massey(&ints(&[1, 2, 4, 8, 16]));
        assert_eq!(g.lrs, LRSSpec::new(ints(&[2]), ints(&[1])));
        assert!(g.unique);
        let fib = berlekamp_massey(&ints(&[0, 1, 1, 2, 3, 5, 8]));
        assert_eq!(fib.lrs.rec, ints(&[1, 1]));
        assert_eq!(fib.lrs.values(7), ints(&[0, 1, 1, 2, 3, 5, 8]));
        let z = berlekamp_massey(&ints(&[0, 0, 0]));
        assert_eq!(z.lrs.order(), 0);
        assert_eq!(z.lrs.values(4), ints(&[0, 0, 0, 0]));
    }

    #[test]
    fn bm_zero_prefix() {
        // 0,0,1,0,0,... needs order 3
        let v = ints(&[0, 0, 1, 0, 0, 0, 0, 0]);
        let g = berlekamp_massey(&v);
        assert_eq!(g.lrs.values(8), v);
        assert_eq!(g.lrs.order(), 3);
    }

    #[test]
    fn periodic_examples() {
        let v = detect_eventually_periodic(&ints(&[1; 10])).unwrap();
        assert_eq!(v.pattern().unwrap(), &EventuallyPeriodic::constant(rat(1)));
        let v = detect_eventually_periodic(&ints(&[7, 0, 1, 0, 1, 0, 1, 0])).unwrap();
        assert_eq!(
            v.pattern().unwrap(),
            &EventuallyPeriodic::new(ints(&[7]), ints(&[0, 1])).unwrap()
        );
        let up: Vec<_> = (1..40).map(rat).collect();
        assert_eq!(
            detect_eventually_periodic(&up).unwrap(),
            PeriodicityVerdict::NotWithinRange
        );
        assert_eq!(detect_eventually_periodic(&[]), Err(LrsError::Empty));
    }

    #[test]
    fn power_periodic_examples() {
        let h: Vec<_> = (1..=60).map(rat).collect();
        assert_eq!(
            power_periodic_decompose(&h, 8).unwrap(),
            (1, EventuallyPeriodic::constant(rat(1)))
        );
        let h: Vec<_> = (1..=60i64)
            .map(|n| rat(n * n * if n % 2 == 1 { 1 } else { -1 }))
            .collect();
        assert_eq!(
            power_periodic_decompose(&h, 8).unwrap(),
            (2, EventuallyPeriodic::periodic(ints(&[1, -1])))
        );
        let h = ints(&[0; 30]);
        assert_eq!(
            power_periodic_decompose(&h, 8).unwrap(),
            (0, EventuallyPeriodic::constant(rat(0)))
        );
    }

    #[test]
    fn classification_examples() {
        let principal4 = EventuallyPeriodic::periodic(ints(&[1, 0]));
        assert_eq!(
            classify_mult_ev_periodic(&principal4, 200).unwrap(),
            ChiClass::Periodic
        );
        let ez = EventuallyPeriodic::new(ints(&[1]), ints(&[0])).unwrap();
        assert_eq!(
            classify_mult_ev_periodic(&ez, 200).unwrap(),
            ChiClass::EventuallyZero
        );
        let bad = EventuallyPeriodic::periodic(ints(&[1, 2, 3]));
        assert!(matches!(
            classify_mult_ev_periodic(&bad, 200).unwrap(),
            ChiClass::NotMultiplicative { .. }
        ));
        // Claims to be multiplicative only on a tiny range, but is neither class.
        let fake = EventuallyPeriodic::new(ints(&[1, 5]), ints(&[1])).unwrap();
        assert_eq!(
            classify_mult_ev_periodic(&fake, 1),
            Err(LrsError::DichotomyViolated)
        );
    }

    #[test]
    fn minimize_rotates_period() {
        let e = EventuallyPeriodic::new(ints(&[3, 1, 2]), ints(&[1, 2, 1, 2])).unwrap();
        assert_eq!(
            e.minimize(),
            EventuallyPeriodic::new(ints(&[3]), ints(&[1, 2])).unwrap()
        );
        for i in 0..20 {
            assert_eq!(e.value_at(i), e.minimize().value_at(i));
        }
    }

    proptest! {
        #[test]
        fn bm_recovers_random_recurrences(rec in prop::collection::vec((-4i64..=4, 1i64..=3), 1..=6),
                                          init in prop::collection::vec(-5i64..=5, 6)) {
            let d = rec.len();
            let spec = LRSSpec::new(rec.iter().map(|&(a, b)| frac(a, b)).collect(), ints(&init[..d]));
            let vals = spec.values(4 * d + 4);
            let g = berlekamp_massey(&vals);
            prop_assert!(g.lrs.order() <= d);
            prop_assert_eq!(g.lrs.values(vals.len()), vals);
        }

        #[test]
        fn detection_idempotent(pre in prop::collection::vec(-2i64..=2, 0..5), per in prop::collection::vec(-2i64..=2, 1..6)) {
            let e = EventuallyPeriodic::new(ints(&pre), ints(&per)).unwrap();
            let vals = e.values(pre.len() + 3 * per.len());
            let found = detect_eventually_periodic(&vals).unwrap().pattern().cloned().unwrap();
            prop_assert_eq!(&found, &e.minimize());
            let again = detect_eventually_periodic(&found.values(found.pre.len() + 3 * found.per.len())).unwrap();
            prop_assert_eq!(again.pattern().unwrap(), &found);
        }
    }
}
