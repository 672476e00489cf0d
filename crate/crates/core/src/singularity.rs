//! Cyclic quotient singularities, their Riemann-Roch correction term Δ,
//! and lattice counts on weighted projective planes.

use num_bigint::BigInt;

use crate::arith::{gcd, mod_inverse, Rational};
use crate::error::{Error, Result};

/// The germ `1/d(a,b)`: C² modulo the cyclic group of order `d` acting by
/// `(ζ^a, ζ^b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicQuotientType {
    pub d: i64,
    pub a: i64,
    pub b: i64,
}

impl CyclicQuotientType {
    pub fn new(d: i64, a: i64, b: i64) -> Result<Self> {
        if d <= 0 {
            return Err(Error::InvalidOrder(d));
        }
        Ok(CyclicQuotientType { d, a, b })
    }

    pub fn is_smooth(&self) -> bool {
        self.d == 1
    }
}

/// Brings a germ into the form where the group acts without
/// pseudo-reflections and `gcd(d,a) = gcd(d,b) = gcd(a,b) = 1`.
///
/// A pseudo-reflection subgroup of order `g = gcd(d,a)` is absorbed by
/// `y ↦ y^g`, which leaves `1/(d/g)(a/g, b)`. A smooth result has `d = 1`
/// and is reported as `1/1(1,1)`.
pub fn normalize_type(t: CyclicQuotientType) -> Result<CyclicQuotientType> {
    let CyclicQuotientType { mut d, mut a, mut b } = t;
    if d <= 0 {
        return Err(Error::InvalidOrder(d));
    }
    loop {
        if d == 1 {
            return Ok(CyclicQuotientType { d: 1, a: 1, b: 1 });
        }
        a = a.rem_euclid(d);
        b = b.rem_euclid(d);
        let g = gcd(gcd(d, a), b);
        if g > 1 {
            d /= g;
            a /= g;
            b /= g;
            continue;
        }
        let g = gcd(a, b);
        if g > 1 {
            a /= g;
            b /= g;
            continue;
        }
        let g = gcd(d, a);
        if g > 1 {
            d /= g;
            a /= g;
            continue;
        }
        let g = gcd(d, b);
        if g > 1 {
            d /= g;
            b /= g;
            continue;
        }
        return Ok(CyclicQuotientType { d, a, b });
    }
}

fn big_frac(num: i128, den: i128) -> Rational {
    Rational::from_big(BigInt::from(num), BigInt::from(den)).expect("nonzero denominator")
}

/// `Δ_{1/d(1,p)}(k)`.
///
/// Uses the descent `Δ_{1/d(1,p)}(m) = 1 + (m-1-d-p)m/(2dp) - Δ_{1/p(1,d)}(m)`
/// for `0 < m < d`, which follows from the Euler characteristic identity on
/// `P(1,d,p)`. Each step replaces `(d,p)` by `(p, d mod p)`, so the cost is
/// logarithmic in `d`.
pub fn delta(d: i64, p: i64, k: i64) -> Result<Rational> {
    if d <= 0 {
        return Err(Error::InvalidOrder(d));
    }
    if gcd(d, p.rem_euclid(d)) != 1 && d != 1 {
        return Err(Error::InvalidType { d, a: 1, b: p });
    }
    match delta_small(d as i128, p as i128, k as i128) {
        Some((num, den)) => Rational::from_big(num.into(), den.into()),
        None => Ok(delta_big(d as i128, p as i128, k as i128)),
    }
}

fn delta_big(d: i128, p: i128, k: i128) -> Rational {
    let mut acc = Rational::zero();
    let (mut d, mut p, mut k) = (d, p, k);
    let mut positive = true;
    loop {
        if d == 1 {
            break;
        }
        p = p.rem_euclid(d);
        let m = k.rem_euclid(d);
        if m == 0 {
            break;
        }
        let num = BigInt::from(m - 1 - d - p) * BigInt::from(m);
        let den = BigInt::from(2) * BigInt::from(d) * BigInt::from(p);
        let term = Rational::one() + Rational::from_big(num, den).expect("nonzero denominator");
        if positive {
            acc += term;
        } else {
            acc -= term;
        }
        (d, p, k) = (p, d, m);
        positive = !positive;
    }
    acc
}

/// The same descent on a reduced `i128` fraction; `None` on overflow.
fn delta_small(mut d: i128, mut p: i128, mut k: i128) -> Option<(i128, i128)> {
    let (mut num, mut den) = (0i128, 1i128);
    let mut sign = 1;
    while d != 1 {
        p = p.rem_euclid(d);
        let m = k.rem_euclid(d);
        if m == 0 {
            break;
        }
        // sign · (2dp + (m-1-d-p)m) / (2dp)
        let tden = d.checked_mul(p)?.checked_mul(2)?;
        let tnum = sign * tden.checked_add((m - 1 - d - p).checked_mul(m)?)?;
        let g = gcd_i128(den, tden);
        let l = den.checked_mul(tden / g)?;
        num = num.checked_mul(l / den)?.checked_add(tnum.checked_mul(l / tden)?)?;
        den = l;
        let g = gcd_i128(num, den);
        (num, den) = (num / g, den / g);
        (d, p, k) = (p, d, m);
        sign = -sign;
    }
    Some((num, den))
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

/// `Δ_{1/d(a,b)}(k)`, obtained by rescaling the group generator so that the
/// first weight becomes 1.
///
/// Both weights must be units modulo `d`; the type is not normalized here
/// because normalizing changes the meaning of `k`.
pub fn delta_general(t: CyclicQuotientType, k: i64) -> Result<Rational> {
    let CyclicQuotientType { d, a, b } = t;
    if d <= 0 {
        return Err(Error::InvalidOrder(d));
    }
    if d == 1 {
        return Ok(Rational::zero());
    }
    if gcd(a.rem_euclid(d), d) != 1 || gcd(b.rem_euclid(d), d) != 1 {
        return Err(Error::InvalidType { d, a, b });
    }
    let inv = mod_inverse(a, d)? as i128;
    let dd = d as i128;
    let p = (inv * b as i128).rem_euclid(dd) as i64;
    let m = (inv * k as i128).rem_euclid(dd) as i64;
    delta(d, p, m)
}

/// Weights of a weighted projective plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightTriple(pub [i64; 3]);

impl WeightTriple {
    /// Rejects zero weights. Negative weights are representable but refused
    /// by every counting function.
    pub fn new(w0: i64, w1: i64, w2: i64) -> Result<Self> {
        let w = [w0, w1, w2];
        if w.contains(&0) {
            return Err(Error::InvalidWeights(w));
        }
        Ok(WeightTriple(w))
    }

    /// `|w| = w0 + w1 + w2`
    pub fn norm(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `w̄ = w0·w1·w2`
    pub fn product(&self) -> i64 {
        self.0.iter().product()
    }

    fn require_positive(&self) -> Result<()> {
        if self.0.iter().all(|&x| x > 0) {
            Ok(())
        } else {
            Err(Error::InvalidWeights(self.0))
        }
    }

    pub fn pairwise_coprime(&self) -> bool {
        let [a, b, c] = self.0;
        gcd(a, b) == 1 && gcd(b, c) == 1 && gcd(a, c) == 1
    }
}

/// `g_{w,k} = 1 + k(k+|w|)/(2w̄)`
pub fn g_w(w: &WeightTriple, k: i64) -> Result<Rational> {
    w.require_positive()?;
    let k = k as i128;
    Ok(Rational::one() + big_frac(k * (k + w.norm() as i128), 2 * w.product() as i128))
}

/// Number of solutions of `w0·i + w1·j + w2·l = m` with `i, j, l ≥ 0`.
pub fn wp2_lattice_count(w: &WeightTriple, m: i64) -> Result<u64> {
    w.require_positive()?;
    if m < 0 {
        return Ok(0);
    }
    let mut ws = w.0;
    ws.sort_unstable_by(|x, y| y.cmp(x));
    let [big, w1, w2] = ws.map(|x| x as i128);
    let m = m as i128;
    let g = gcd(w1 as i64, w2 as i64) as i128;
    let step = w2 / g;
    // j ≡ j0 (mod step) solves w1·j ≡ rest (mod w2)
    let inv = if step == 1 {
        0
    } else {
        mod_inverse(((w1 / g) % step) as i64, step as i64)? as i128
    };
    let mut total: u64 = 0;
    let mut i = 0i128;
    while big * i <= m {
        let rest = m - big * i;
        i += 1;
        if rest % g != 0 {
            continue;
        }
        let jmax = rest / w1;
        let j0 = ((rest / g) % step * inv).rem_euclid(step);
        if j0 <= jmax {
            total += ((jmax - j0) / step + 1) as u64;
        }
    }
    Ok(total)
}

/// Riemann-Roch side of the lattice count: `g_{w,m}` minus the Δ term of
/// each vertex `1/w_i(w_j, w_l)` with `w_i > 1`, evaluated at `m + |w|`.
///
/// Agrees with [`wp2_lattice_count`] for `m ≥ 0` and vanishes for
/// `-|w| < m < 0`.
pub fn wp2_chi(w: &WeightTriple, m: i64) -> Result<Rational> {
    w.require_positive()?;
    if !w.pairwise_coprime() {
        return Err(Error::NonCoprimeWeights(w.0));
    }
    let s = w.norm();
    let mut out = g_w(w, m)?;
    for i in 0..3 {
        let wi = w.0[i];
        if wi == 1 {
            continue;
        }
        let t = CyclicQuotientType { d: wi, a: w.0[(i + 1) % 3], b: w.0[(i + 2) % 3] };
        out -= delta_general(t, m + s)?;
    }
    Ok(out)
}
