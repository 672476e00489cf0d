//! The surfaces `S(d1,d2,n1,n2,r)`, their Picard group, intersection
//! pairing and canonical class.
//!
//! Pic(S) is generated by `Z, F, E_X, E_Y` subject to `F = d1·E_X = d2·E_Y`.
//! `Z` is the section of self-intersection `-r`. Every class has a unique
//! representative with `0 ≤ α < d1` and `0 ≤ β < d2`; [`DivisorClass`] always
//! holds that representative.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::arith::{gcd, Rational};
use crate::cohomology::chi;
use crate::error::{Error, Result};

/// A Picard element in canonical coordinates `aZ + bF + αE_X + βE_Y`.
///
/// Arithmetic on `DivisorClass` acts on the raw coordinates; pass the result
/// through [`RuledToricSurface::canonical_form`] to get back to the unique
/// representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    pub a: i64,
    pub b: i64,
    pub alpha: i64,
    pub beta: i64,
}

impl DivisorClass {
    pub const ZERO: DivisorClass = DivisorClass { a: 0, b: 0, alpha: 0, beta: 0 };

    /// Raw coordinates without canonicalization.
    pub const fn raw(a: i64, b: i64, alpha: i64, beta: i64) -> Self {
        DivisorClass { a, b, alpha, beta }
    }

    pub fn to_array(self) -> [i64; 4] {
        [self.a, self.b, self.alpha, self.beta]
    }
}

impl From<[i64; 4]> for DivisorClass {
    fn from(x: [i64; 4]) -> Self {
        DivisorClass::raw(x[0], x[1], x[2], x[3])
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{}]", self.a, self.b, self.alpha, self.beta)
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::raw(self.a + o.a, self.b + o.b, self.alpha + o.alpha, self.beta + o.beta)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: DivisorClass) -> DivisorClass {
        self + (-o)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::raw(-self.a, -self.b, -self.alpha, -self.beta)
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::raw(self * o.a, self * o.b, self * o.alpha, self * o.beta)
    }
}

/// A Q-divisor on the ordered basis `(Z, F, E_X, E_Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QDivisor(pub [Rational; 4]);

impl From<DivisorClass> for QDivisor {
    fn from(d: DivisorClass) -> Self {
        QDivisor(d.to_array().map(Rational::from))
    }
}

impl Add for QDivisor {
    type Output = QDivisor;
    fn add(self, o: QDivisor) -> QDivisor {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        QDivisor([a + e, b + f, c + g, d + h])
    }
}

/// A rational ruled toric surface with two marked singular fibers.
#[derive(Debug, Clone)]
pub struct RuledToricSurface {
    pub d1: i64,
    pub d2: i64,
    pub n1: i64,
    pub n2: i64,
    pub r: Rational,
    /// The integer with `n1/d1 + n2/d2 - r = 1 - k`.
    pub k: i64,
    pub p1: i64,
    pub q1: i64,
    pub p2: i64,
    pub q2: i64,
    /// `gcd(d1, d2)`, the order of the torsion subgroup.
    pub d: i64,
    /// `r·d1·d2`, always an integer.
    pub rd1d2: i64,
    canonical: OnceLock<Result<DivisorClass>>,
}

impl PartialEq for RuledToricSurface {
    fn eq(&self, o: &Self) -> bool {
        (self.d1, self.d2, self.n1, self.n2) == (o.d1, o.d2, o.n1, o.n2) && self.r == o.r
    }
}

impl Eq for RuledToricSurface {}

impl fmt::Display for RuledToricSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({},{},{},{},{})", self.d1, self.d2, self.n1, self.n2, self.r)
    }
}

impl RuledToricSurface {
    pub fn new(d1: i64, d2: i64, n1: i64, n2: i64, r: Rational) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidSurface(m));
        if d1 < 1 || d2 < 1 {
            return bad(format!("fiber orders must be positive (got d1={d1}, d2={d2})"));
        }
        if !(0..d1).contains(&n1) || !(0..d2).contains(&n2) {
            return bad(format!("need 0 ≤ n1 < d1 and 0 ≤ n2 < d2 (got n1={n1}, n2={n2})"));
        }
        if gcd(n1, d1) != 1 || gcd(n2, d2) != 1 {
            return bad(format!("need gcd(n1,d1) = gcd(n2,d2) = 1 (got n1={n1}, n2={n2})"));
        }
        if r.is_negative() {
            return bad(format!("r must be nonnegative (got {r})"));
        }
        let x = Rational::new(n1, d1)? + Rational::new(n2, d2)? - &r;
        if !x.is_integer() {
            return bad(format!("n1/d1 + n2/d2 - r = {x} is not an integer"));
        }
        let k = x
            .to_i64()
            .map(|x| 1 - x)
            .ok_or_else(|| Error::InvalidSurface("r out of range".into()))?;
        if k < 0 {
            return bad(format!("n1/d1 + n2/d2 - r = {x} exceeds 1"));
        }
        let rd1d2 = (&r * (d1 * d2))
            .to_i64()
            .ok_or_else(|| Error::InvalidSurface("r·d1·d2 out of range".into()))?;
        let p1 = n1 + k * d1;
        let q2 = n2;
        Ok(RuledToricSurface {
            d1,
            d2,
            n1,
            n2,
            r,
            k,
            p1,
            q1: d1 - n1,
            p2: d2 - q2,
            q2,
            d: gcd(d1, d2),
            rd1d2,
            canonical: OnceLock::new(),
        })
    }

    /// Convenience constructor for an integer `r`.
    pub fn with_int_r(d1: i64, d2: i64, n1: i64, n2: i64, r: i64) -> Result<Self> {
        Self::new(d1, d2, n1, n2, Rational::from(r))
    }

    /// The two fibers carry opposite quotient singularities and `r = 0`.
    pub fn is_biruled(&self) -> bool {
        self.r.is_zero()
    }

    /// Reduces `α` into `[0,d1)` and `β` into `[0,d2)`, moving the overflow
    /// into the `F` coefficient.
    pub fn canonical_form(&self, raw: DivisorClass) -> DivisorClass {
        let DivisorClass { a, b, alpha, beta } = raw;
        DivisorClass {
            a,
            b: b + alpha.div_euclid(self.d1) + beta.div_euclid(self.d2),
            alpha: alpha.rem_euclid(self.d1),
            beta: beta.rem_euclid(self.d2),
        }
    }

    pub fn class(&self, a: i64, b: i64, alpha: i64, beta: i64) -> DivisorClass {
        self.canonical_form(DivisorClass::raw(a, b, alpha, beta))
    }

    /// Entries of the intersection matrix on `(Z, F, E_X, E_Y)`.
    pub fn intersection_matrix(&self) -> [[Rational; 4]; 4] {
        let z = Rational::zero;
        let ex = Rational::new(1, self.d1).expect("d1 > 0");
        let ey = Rational::new(1, self.d2).expect("d2 > 0");
        [
            [-&self.r, Rational::one(), ex.clone(), ey.clone()],
            [Rational::one(), z(), z(), z()],
            [ex, z(), z(), z()],
            [ey, z(), z(), z()],
        ]
    }

    pub fn intersect(&self, x: &QDivisor, y: &QDivisor) -> Rational {
        let m = self.intersection_matrix();
        let mut acc = Rational::zero();
        for i in 0..4 {
            if x.0[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if !y.0[j].is_zero() && !m[i][j].is_zero() {
                    acc += &(&x.0[i] * &y.0[j]) * &m[i][j];
                }
            }
        }
        acc
    }

    pub fn intersect_classes(&self, x: DivisorClass, y: DivisorClass) -> Rational {
        self.intersect(&x.into(), &y.into())
    }

    /// `Z_K = 2Z + rF + E_X + E_Y`, numerically equal to `-K`.
    pub fn canonical_cycle(&self) -> QDivisor {
        QDivisor([Rational::from(2), self.r.clone(), Rational::one(), Rational::one()])
    }

    /// The generator `T = (d1/d)E_X - (d2/d)E_Y` of the torsion subgroup.
    pub fn torsion_generator(&self) -> DivisorClass {
        self.class(0, 0, self.d1 / self.d, -(self.d2 / self.d))
    }

    pub fn generators() -> [DivisorClass; 4] {
        [
            DivisorClass::raw(1, 0, 0, 0),
            DivisorClass::raw(0, 1, 0, 0),
            DivisorClass::raw(0, 0, 1, 0),
            DivisorClass::raw(0, 0, 0, 1),
        ]
    }

    pub fn linearly_equivalent(&self, x: DivisorClass, y: DivisorClass) -> bool {
        self.canonical_form(x) == self.canonical_form(y)
    }

    pub fn numerically_equivalent(&self, x: DivisorClass, y: DivisorClass) -> bool {
        let diff = x - y;
        Self::generators()
            .iter()
            .all(|&g| self.intersect_classes(diff, g).is_zero())
    }

    /// The `t ∈ [0,d)` with `D ∼ t·T`, if `D` is numerically trivial.
    pub fn torsion_index(&self, x: DivisorClass) -> Option<i64> {
        if !self.numerically_equivalent(x, DivisorClass::ZERO) {
            return None;
        }
        let target = self.canonical_form(x);
        let t = self.torsion_generator();
        (0..self.d).find(|&i| self.canonical_form(i * t) == target)
    }

    /// Writes `D ∼ aZ + xE_X + t·T` with `t ∈ [0,d)`.
    pub fn decompose(&self, x: DivisorClass) -> Option<(i64, i64, i64)> {
        let c = self.canonical_form(x);
        let free = self.intersect_classes(c - DivisorClass::raw(c.a, 0, 0, 0), DivisorClass::raw(1, 0, 0, 0));
        let e = (free * self.d1).to_i64()?;
        let rest = c - DivisorClass::raw(c.a, 0, e, 0);
        self.torsion_index(rest).map(|t| (c.a, e, t))
    }

    /// The seed `(-2, -(1+k), d1-n1-1, d2-q2-1)`, before any torsion check.
    pub fn canonical_seed(&self) -> DivisorClass {
        self.class(-2, -(1 + self.k), self.d1 - self.n1 - 1, self.d2 - self.q2 - 1)
    }

    /// Divisors used to pin the torsion part of `K` through `χ(K-D) = χ(D)`.
    pub fn validation_sample(&self) -> Vec<DivisorClass> {
        let mut offs1 = vec![0, 1, 2, self.d1 - 1, self.d1 / 2];
        let mut offs2 = vec![0, 1, 2, self.d2 - 1, self.d2 / 2];
        for v in [&mut offs1, &mut offs2] {
            v.sort_unstable();
            v.dedup();
        }
        let mut out = Vec::new();
        for a in -3..=3 {
            for b in -3..=4 {
                out.push(self.class(a, b, 0, 0));
            }
        }
        for a in [-2, 0, 1] {
            for b in [-1, 0] {
                for &al in offs1.iter().filter(|&&x| x < self.d1) {
                    for &be in offs2.iter().filter(|&&x| x < self.d2) {
                        out.push(self.class(a, b, al, be));
                    }
                }
            }
        }
        let t = self.torsion_generator();
        for i in 0..self.d {
            for a in [-1, 0, 1] {
                out.push(self.canonical_form(i * t + DivisorClass::raw(a, 0, 0, 0)));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn passes_duality(&self, k: DivisorClass, sample: &[DivisorClass]) -> bool {
        let zk = self.canonical_cycle();
        let numerical = Self::generators().iter().all(|&g| {
            let s = self.intersect(&(QDivisor::from(k) + zk.clone()), &g.into());
            s.is_zero()
        });
        numerical
            && sample
                .iter()
                .all(|&x| chi(self, self.canonical_form(k - x)) == chi(self, x))
    }

    /// The canonical class `K`, validated once and cached.
    ///
    /// The numerical class of `K` is forced by `K ≡ -Z_K`; the torsion part is
    /// pinned by requiring `χ(K-D) = χ(D)` on [`Self::validation_sample`].
    /// The seed is tried first, then every torsion offset.
    pub fn canonical_divisor(&self) -> Result<DivisorClass> {
        self.canonical
            .get_or_init(|| {
                let sample = self.validation_sample();
                let seed = self.canonical_seed();
                if self.passes_duality(seed, &sample) {
                    return Ok(seed);
                }
                let t = self.torsion_generator();
                let survivors: Vec<_> = (1..self.d)
                    .map(|i| self.canonical_form(seed + i * t))
                    .filter(|&k| self.passes_duality(k, &sample))
                    .collect();
                match survivors.as_slice() {
                    [k] => Ok(*k),
                    [] => Err(Error::InternalInconsistency(format!(
                        "no canonical class candidate on {self} satisfies duality"
                    ))),
                    _ => Err(Error::InternalInconsistency(format!(
                        "several canonical class candidates on {self} satisfy duality"
                    ))),
                }
            })
            .clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(d1: i64, d2: i64, n1: i64, n2: i64, r: &str) -> RuledToricSurface {
        RuledToricSurface::new(d1, d2, n1, n2, r.parse().unwrap()).unwrap()
    }

    fn q(x: &str) -> Rational {
        x.parse().unwrap()
    }

    #[test]
    fn construction() {
        let x = s(12, 12, 1, 11, "0");
        assert!(x.is_biruled());
        assert_eq!((x.d, x.p1, x.q2, x.k), (12, 1, 11, 0));
        let y = s(5, 5, 3, 2, "0");
        assert_eq!((y.p1, y.q2), (3, 2));
        let z = s(1, 1, 0, 0, "1");
        assert_eq!((z.k, z.p1, z.q2), (2, 2, 0));
        let p = s(1, 1, 0, 0, "0");
        assert_eq!((p.k, p.p1, p.q2), (1, 1, 0));
        let u = s(2, 3, 1, 2, "1/6");
        assert_eq!((u.k, u.rd1d2), (0, 1));
    }

    #[test]
    fn construction_errors() {
        let e = |d1, d2, n1, n2, r: &str| RuledToricSurface::new(d1, d2, n1, n2, r.parse().unwrap());
        assert!(e(5, 5, 3, 3, "0").is_err());
        assert!(e(0, 5, 0, 3, "0").is_err());
        assert!(e(6, 5, 2, 3, "0").is_err());
        assert!(e(5, 5, 3, 2, "-1").is_err());
        assert!(e(5, 5, 3, 2, "1/2").is_err());
        assert!(e(1, 1, 0, 0, "-1").is_err());
        // k < 0 would need r < n1/d1 + n2/d2 - 1
        assert!(e(2, 3, 1, 2, "0").is_err());
    }

    #[test]
    fn canonical_form_examples() {
        let x = s(5, 5, 3, 2, "0");
        assert_eq!(x.class(0, 0, 7, 0), DivisorClass::raw(0, 1, 2, 0));
        assert_eq!(x.class(0, -1, -1, 0), DivisorClass::raw(0, -2, 4, 0));
        let c = x.class(3, -2, 4, 1);
        assert_eq!(x.canonical_form(c), c);
        let y = s(1, 1, 0, 0, "1");
        assert_eq!(y.class(0, 0, 3, -2), DivisorClass::raw(0, 1, 0, 0));
    }

    #[test]
    fn pairing() {
        let x = s(2, 3, 1, 2, "1/6");
        let g = RuledToricSurface::generators();
        assert_eq!(x.intersect_classes(g[0], g[1]), Rational::one());
        assert_eq!(x.intersect_classes(g[2], g[3]), Rational::zero());
        assert_eq!(x.intersect_classes(g[0], g[0]), q("-1/6"));
        assert_eq!(x.intersect_classes(g[1], g[1]), Rational::zero());
        let zk = x.canonical_cycle();
        assert_eq!(x.intersect(&zk, &g[1].into()), Rational::from(2));
        let expect = q("-1/6") + q("1/2") + q("1/3");
        assert_eq!(x.intersect(&zk, &g[0].into()), expect);
    }

    #[test]
    fn canonical_divisor_examples() {
        assert_eq!(s(5, 5, 3, 2, "0").canonical_divisor().unwrap(), DivisorClass::raw(-2, -1, 1, 2));
        assert_eq!(s(1, 1, 0, 0, "1").canonical_divisor().unwrap(), DivisorClass::raw(-2, -3, 0, 0));
        assert_eq!(s(12, 12, 1, 11, "0").canonical_divisor().unwrap(), DivisorClass::raw(-2, -1, 10, 0));
        assert_eq!(s(1, 1, 0, 0, "0").canonical_divisor().unwrap(), DivisorClass::raw(-2, -2, 0, 0));
        let x = s(7, 7, 3, 4, "0");
        assert!(x.validation_sample().len() >= 50);
        assert!(s(1, 1, 0, 0, "2").validation_sample().len() >= 50);
    }

    #[test]
    fn equivalences_and_torsion() {
        let x = s(5, 5, 3, 2, "0");
        let ex = DivisorClass::raw(0, 0, 1, 0);
        let ey = DivisorClass::raw(0, 0, 0, 1);
        let f = DivisorClass::raw(0, 1, 0, 0);
        assert!(x.linearly_equivalent(5 * ex, f));
        assert!(!x.linearly_equivalent(ex, ey));
        assert!(x.numerically_equivalent(ex, ey));
        assert!(!x.numerically_equivalent(DivisorClass::raw(1, 0, 0, 0), DivisorClass::raw(1, 1, 0, 0)));
        assert_eq!(x.torsion_index(DivisorClass::ZERO), Some(0));
        assert_eq!(x.torsion_index(x.torsion_generator()), Some(1));
        assert_eq!(x.torsion_index(ex - ey), Some(1));
        assert_eq!(x.torsion_index(ex), None);
        let order = (1..=x.d).find(|&t| x.canonical_form(t * x.torsion_generator()) == DivisorClass::ZERO);
        assert_eq!(order, Some(5));
        let y = s(4, 6, 1, 5, "1/12");
        let t = y.torsion_generator();
        assert_eq!((1..=y.d).find(|&i| y.canonical_form(i * t) == DivisorClass::ZERO), Some(2));
        assert!(y.numerically_equivalent(t, DivisorClass::ZERO));
    }

    #[test]
    fn decomposition() {
        let x = s(12, 12, 1, 11, "0");
        let h = DivisorClass::raw(0, 0, 3, -2);
        let (a, e, t) = x.decompose(h).unwrap();
        assert_eq!(a, 0);
        assert!(x.linearly_equivalent(h, DivisorClass::raw(0, 0, e, 0) + t * x.torsion_generator()));
    }
}
