//! Euler characteristics and cohomology dimensions of `O_S(D)`.
//!
//! The universal method counts monomials for `h⁰`, gets `h²` from `h⁰(K-D)`
//! and `h¹` from Riemann-Roch. Biruled surfaces and part of the uniruled
//! range have closed forms, which are cross-checked against the universal
//! method when [`Checks::Strict`] is on.

use std::fmt;

use crate::arith::{binomial2, Rational};
use crate::error::{Error, Result};
use crate::singularity::{delta, wp2_chi, wp2_lattice_count, WeightTriple};
use crate::surface::{DivisorClass, RuledToricSurface};

fn dl(d: i64, p: i64, k: i64) -> Rational {
    delta(d, p, k).expect("surface invariants give valid singularity types")
}

/// `χ(O_S(D))` from the Riemann-Roch formula with its four Δ corrections.
pub fn chi(s: &RuledToricSurface, d: DivisorClass) -> Rational {
    let DivisorClass { a, b, alpha, beta } = s.canonical_form(d);
    let (d1, d2) = (s.d1, s.d2);
    let half = Rational::new(1, 2).expect("nonzero");
    let q = |n: i64, m: i64| Rational::new(n, m).expect("positive denominator");

    let mut x = Rational::one();
    x += &(&Rational::from(a) * &(&s.r + &Rational::from(b))) * &half;
    let slope = Rational::from(b) + q(alpha, d1) + q(beta, d2) - &s.r * a;
    x += &(slope * (a + 2)) * &half;
    x += q(a * (alpha + 1), 2 * d1);
    x += q(a * (beta + 1), 2 * d2);
    x -= dl(d1, s.q1, -alpha - a * s.q1);
    x -= dl(d2, s.p2, -beta - a * s.p2);
    x -= dl(d1, s.p1, -alpha);
    x -= dl(d2, s.q2, -beta);
    x
}

fn chi_int(s: &RuledToricSurface, d: DivisorClass) -> Result<i64> {
    let c = chi(s, d);
    c.to_i64()
        .ok_or_else(|| Error::InternalInconsistency(format!("χ({d}) = {c} on {s} is not an integer")))
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Counts monomials `X^u Y^v` spanning `H⁰(O_S(D))`.
///
/// The conditions are `u, v ≥ 0`, `b ≤ u+v ≤ a+b`,
/// `(d1-p1)u - p1·v ≥ -p1·b - α` and `q2·u - p2·v ≤ q2·b + β`. For each
/// total degree `s = u+v` the admissible `u` form an interval, so the cost
/// is linear in `a+b`.
pub fn h0_enum(s: &RuledToricSurface, d: DivisorClass) -> i64 {
    let DivisorClass { a, b, alpha, beta } = s.canonical_form(d);
    if a + b < 0 {
        return 0;
    }
    let mut total = 0;
    for deg in b.max(0)..=a + b {
        // d1·u ≥ p1(deg - b) - α  and  d2·u ≤ q2·b + β + p2·deg
        let lo = ceil_div(s.p1 * (deg - b) - alpha, s.d1).max(0);
        let hi = (s.q2 * b + beta + s.p2 * deg).div_euclid(s.d2).min(deg);
        total += (hi - lo + 1).max(0);
    }
    total
}

/// `h²(O_S(D)) = h⁰(O_S(K-D))`.
pub fn h2_via_duality(s: &RuledToricSurface, d: DivisorClass) -> Result<i64> {
    let k = s.canonical_divisor()?;
    Ok(h0_enum(s, s.canonical_form(k - d)))
}

/// Which formula produced an [`HVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Monomial count, duality and Riemann-Roch.
    Enumeration,
    /// The one-degree concentration table for biruled surfaces.
    Table1,
    /// Closed form for uniruled surfaces with `k = 0`.
    Main2Closed,
    /// A closed form was requested but none applies; the universal method
    /// filled in.
    Mixed,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Enumeration => "enumeration",
            Method::Table1 => "table1",
            Method::Main2Closed => "main2-closed",
            Method::Mixed => "mixed",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Requested method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    /// Closed forms where available, enumeration elsewhere.
    #[default]
    Auto,
    Enum,
    Closed,
}

/// Whether closed forms are compared against the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Checks {
    Strict,
    Off,
}

impl Default for Checks {
    fn default() -> Self {
        if cfg!(debug_assertions) {
            Checks::Strict
        } else {
            Checks::Off
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HOptions {
    pub method: MethodChoice,
    pub checks: Checks,
}

/// Dimensions `h⁰, h¹, h²` of `O_S(D)` together with `χ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HVector {
    pub h0: i64,
    pub h1: i64,
    pub h2: i64,
    pub chi: i64,
    pub method: Method,
    /// `true` when a closed form was compared against the enumeration.
    pub cross_checked: bool,
    /// Free-form markers such as `extrapolated`.
    pub flags: Vec<String>,
}

impl HVector {
    pub fn triple(&self) -> [i64; 3] {
        [self.h0, self.h1, self.h2]
    }
}

fn oracle(s: &RuledToricSurface, d: DivisorClass) -> Result<[i64; 4]> {
    let c = chi_int(s, d)?;
    let h0 = h0_enum(s, d);
    let h2 = h2_via_duality(s, d)?;
    let h1 = h0 + h2 - c;
    if h1 < 0 {
        return Err(Error::InternalInconsistency(format!(
            "negative h1 = {h1} for {d} on {s} (h0 = {h0}, h2 = {h2}, χ = {c})"
        )));
    }
    Ok([h0, h1, h2, c])
}

/// Degree carrying all cohomology of `D` on a biruled surface, or `None`
/// when `O_S(D)` is acyclic.
pub fn biruled_degree(s: &RuledToricSurface, d: DivisorClass) -> Option<usize> {
    let DivisorClass { a, b, alpha, beta } = s.canonical_form(d);
    if a == -1 {
        return None;
    }
    let upper_row = b > -1 || (b == -1 && alpha + beta >= s.d);
    Some(match (a > -1, upper_row) {
        (true, true) => 0,
        (true, false) => 1,
        (false, true) => 1,
        (false, false) => 2,
    })
}

fn table1(s: &RuledToricSurface, d: DivisorClass) -> Result<[i64; 4]> {
    let c = chi_int(s, d)?;
    let mut h = [0, 0, 0, c];
    match biruled_degree(s, d) {
        None if c != 0 => {
            return Err(Error::InternalInconsistency(format!(
                "acyclic class {d} on {s} has χ = {c}"
            )))
        }
        None => {}
        Some(k) => {
            let v = if k == 1 { -c } else { c };
            if v < 0 {
                return Err(Error::InternalInconsistency(format!(
                    "degree {k} for {d} on {s} contradicts χ = {c}"
                )));
            }
            h[k] = v;
        }
    }
    Ok(h)
}

fn mismatch(what: &str, s: &RuledToricSurface, d: DivisorClass, fast: [i64; 4], slow: [i64; 4]) -> Error {
    Error::InternalInconsistency(format!(
        "{what} gives (h0,h1,h2,χ) = {fast:?} for {d} on {s}, enumeration gives {slow:?}"
    ))
}

/// The h-vector with default options.
pub fn h_vector(s: &RuledToricSurface, d: DivisorClass) -> Result<HVector> {
    h_vector_with(s, d, HOptions::default())
}

pub fn h_vector_with(s: &RuledToricSurface, d: DivisorClass, opts: HOptions) -> Result<HVector> {
    let d = s.canonical_form(d);
    let strict = opts.checks == Checks::Strict;
    let build = |h: [i64; 4], method, cross_checked, flags| HVector {
        h0: h[0],
        h1: h[1],
        h2: h[2],
        chi: h[3],
        method,
        cross_checked,
        flags,
    };

    if opts.method != MethodChoice::Enum {
        if s.is_biruled() {
            let fast = table1(s, d)?;
            if strict {
                let slow = oracle(s, d)?;
                if fast != slow {
                    return Err(mismatch("concentration table", s, d, fast, slow));
                }
            }
            return Ok(build(fast, Method::Table1, strict, vec![]));
        }
        if let Some(m) = main2_closed(s, d) {
            let fast = [m.h0, m.h1, m.h2, chi_int(s, d)?];
            if strict {
                let slow = oracle(s, d)?;
                if fast != slow {
                    return Err(mismatch("uniruled closed form", s, d, fast, slow));
                }
            }
            return Ok(build(fast, Method::Main2Closed, strict, vec![]));
        }
    }

    let h = oracle(s, d)?;
    let mut flags = Vec::new();
    if !s.is_biruled() && main2_closed(s, d).is_none() && h02_diagnostic(s, d).is_none() {
        flags.push("extrapolated".to_string());
    }
    let method = if opts.method == MethodChoice::Closed {
        flags.push("closed-form-unavailable".to_string());
        Method::Mixed
    } else {
        Method::Enumeration
    };
    Ok(build(h, method, false, flags))
}

/// The two triangle counts `(#T_β, #T_α)` of the biruled closed form, each
/// read off a weighted projective plane.
pub fn biruled_triangles(s: &RuledToricSurface, d: DivisorClass) -> Result<(i64, i64)> {
    let DivisorClass { a, alpha, beta, .. } = s.canonical_form(d);
    let (dd, p, q) = (s.d, s.p1, s.q2);
    let count = |x: i64, m: i64| -> Result<i64> {
        if x == 0 {
            return Ok(0);
        }
        let c = wp2_chi(&WeightTriple::new(dd, 1, x)?, m)?;
        c.to_i64()
            .ok_or_else(|| Error::InternalInconsistency(format!("fractional triangle count {c}")))
    };
    Ok((count(q, q * a - beta - 1)?, count(p, p * a - alpha - 1)?))
}

/// Closed form of `h⁰(O_S(D))` on a biruled surface.
pub fn h0_closed_biruled(s: &RuledToricSurface, d: DivisorClass) -> Result<i64> {
    if !s.is_biruled() {
        return Err(Error::InvalidSurface(format!("{s} is not biruled")));
    }
    let c = s.canonical_form(d);
    let DivisorClass { a, b, alpha, beta } = c;
    if a < 0 || b < -1 || (b == -1 && alpha + beta < s.d) {
        return Ok(0);
    }
    let (tb, ta) = biruled_triangles(s, c)?;
    let base = if b >= 0 {
        binomial2(a + b + 2) - binomial2(b + 1)
    } else {
        binomial2(a + 1)
    };
    Ok(base - tb - ta)
}

/// Result of the uniruled closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Main2 {
    /// 1 when `r·a < b + α/d1 + β/d2`, else 2.
    pub region: u8,
    pub h0: i64,
    pub h1: i64,
    pub h2: i64,
}

/// `ρ = r·d1·d2·a - d1·d2·b - d1·β - d2·α`.
pub fn main2_rho(s: &RuledToricSurface, d: DivisorClass) -> i64 {
    let DivisorClass { a, b, alpha, beta } = s.canonical_form(d);
    s.rd1d2 * a - s.d1 * s.d2 * b - s.d1 * beta - s.d2 * alpha
}

/// Lattice points strictly beyond both boundary lines of the monomial
/// polygon, with `u + v ≤ a + b`. This is `h¹` in region 2.
pub fn beyond_both_lines(s: &RuledToricSurface, d: DivisorClass) -> i64 {
    let DivisorClass { a, b, alpha, beta } = s.canonical_form(d);
    let mut total = 0;
    for deg in 0..=a + b {
        // d1·u < p1(deg - b) - α  and  d2·u > q2·b + β + p2·deg
        let below = ceil_div(s.p1 * (deg - b) - alpha, s.d1) - 1;
        let above = (s.q2 * b + beta + s.p2 * deg).div_euclid(s.d2) + 1;
        total += (below.min(deg) - above.max(0) + 1).max(0);
    }
    total
}

/// Closed form for `r > 0`, `k = 0`, `a ≥ 0`, `b ≥ -1`.
///
/// Region 1 has `h⁰ = χ` and no higher cohomology. In region 2, `h² = 0`
/// and `h¹` counts the lattice triangle beyond both boundary lines. For
/// `b ≥ 0` and coprime `d1, d2` that triangle is the weighted-plane count
/// `h⁰(P(d1,d2,r·d1·d2), O(ρ - d1 - d2))`. Otherwise it is counted row by
/// row: at `b = -1` the coordinate axes clip it.
pub fn main2_closed(s: &RuledToricSurface, d: DivisorClass) -> Option<Main2> {
    let c = s.canonical_form(d);
    let DivisorClass { a, b, alpha, beta } = c;
    if s.is_biruled() || s.k != 0 || a < 0 || b < -1 {
        return None;
    }
    let x = chi(s, c).to_i64()?;
    // r·a < b + α/d1 + β/d2, scaled by d1·d2
    if s.rd1d2 * a < s.d1 * s.d2 * b + s.d2 * alpha + s.d1 * beta {
        return Some(Main2 { region: 1, h0: x, h1: 0, h2: 0 });
    }
    let h1 = if b >= 0 && s.d == 1 {
        let w = WeightTriple::new(s.d1, s.d2, s.rd1d2).ok()?;
        wp2_lattice_count(&w, main2_rho(s, c) - s.d1 - s.d2).ok()? as i64
    } else {
        beyond_both_lines(s, c)
    };
    Some(Main2 { region: 2, h0: x + h1, h1, h2: 0 })
}

/// Outcome of [`h02_diagnostic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct H02Report {
    pub predicted: i64,
    pub h0: i64,
    pub matched: bool,
}

fn bounded_count(w: [i64; 3], m: i64, bound: i64) -> i64 {
    let mut c = 0;
    for i in 0..=bound {
        for j in 0..=bound {
            let rest = m - w[0] * i - w[1] * j;
            if w[2] == 0 {
                if rest == 0 {
                    c += bound + 1;
                }
            } else if rest % w[2] == 0 && (0..=bound).contains(&(rest / w[2])) {
                c += 1;
            }
        }
    }
    c
}

/// Compares a two-cone lattice count against `h0_enum` in the `k > 0`
/// range where `a ≥ (b + α/d1 + β/d2)/r`.
///
/// The lower boundary coefficient there is `d1 - p1 < 0`, so its negative
/// `p1 - d1` is used as the third weight of the first cone. Zero or negative
/// weights make the raw count infinite; every exponent is therefore bounded
/// by `a + b + 1`. The report is informational and never raises.
pub fn h02_diagnostic(s: &RuledToricSurface, d: DivisorClass) -> Option<H02Report> {
    let c = s.canonical_form(d);
    let DivisorClass { a, b, alpha, beta } = c;
    if s.is_biruled() || s.k == 0 || b < -1 {
        return None;
    }
    let lhs = s.rd1d2 * a;
    let rhs = s.d1 * s.d2 * b + s.d2 * alpha + s.d1 * beta;
    if lhs < rhs || rhs < 0 {
        return None;
    }
    let m1 = s.p1 - s.d1;
    if m1 * a < s.d1 * b + alpha {
        return None;
    }
    let bound = (a + b + 1).max(0);
    let first = bounded_count([1, s.p1, m1], b * s.p1 + alpha, bound);
    let second = bounded_count([m1, s.q2, s.rd1d2], s.q2 * s.d1 * b + alpha * s.q2 + beta * m1, bound);
    let predicted = first - second - binomial2(b + 1);
    let h0 = h0_enum(s, c);
    Some(H02Report { predicted, h0, matched: predicted == h0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(d1: i64, d2: i64, n1: i64, n2: i64, r: &str) -> RuledToricSurface {
        RuledToricSurface::new(d1, d2, n1, n2, r.parse().unwrap()).unwrap()
    }

    fn c(a: i64, b: i64, al: i64, be: i64) -> DivisorClass {
        DivisorClass::raw(a, b, al, be)
    }

    #[test]
    fn chi_examples() {
        let x = s(5, 5, 3, 2, "0");
        assert_eq!(chi(&x, DivisorClass::ZERO), Rational::one());
        assert_eq!(chi(&x, c(1, -1, 2, 1)), Rational::from(-1));
        assert_eq!(chi(&x, c(0, -1, 1, 4)), Rational::zero());
        let y = s(12, 12, 1, 11, "0");
        assert_eq!(chi(&y, c(0, 0, -14, 7)), Rational::from(-1));
    }

    #[test]
    fn h0_examples() {
        assert_eq!(h0_enum(&s(9, 9, 5, 4, "0"), c(6, 3, 2, 6)), 28);
        let x = s(5, 5, 3, 2, "0");
        assert_eq!(h0_enum(&x, DivisorClass::ZERO), 1);
        assert_eq!(h0_enum(&x, c(1, -1, 3, 2)), 1);
        for b in 0..6 {
            assert_eq!(h0_enum(&x, c(0, b, 0, 0)), b + 1);
        }
        assert_eq!(h0_enum(&x, c(-1, 5, 0, 0)), 0);
    }

    #[test]
    fn h2_examples() {
        let x = s(5, 5, 3, 2, "0");
        let k = x.canonical_divisor().unwrap();
        assert_eq!(h2_via_duality(&x, k).unwrap(), 1);
        assert_eq!(h2_via_duality(&x, c(1, -1, 3, 2)).unwrap(), 0);
        assert_eq!(h2_via_duality(&x, DivisorClass::ZERO).unwrap(), 0);
    }

    #[test]
    fn h_vector_examples() {
        let x = s(5, 5, 3, 2, "0");
        let strict = HOptions { method: MethodChoice::Auto, checks: Checks::Strict };
        let h = |d| h_vector_with(&x, d, strict).unwrap();
        assert_eq!((h(c(1, -1, 3, 2)).triple(), h(c(1, -1, 3, 2)).chi), ([1, 0, 0], 1));
        assert_eq!((h(c(1, -1, 3, 1)).triple(), h(c(1, -1, 3, 1)).chi), ([0, 0, 0], 0));
        assert_eq!((h(c(1, -1, 2, 1)).triple(), h(c(1, -1, 2, 1)).chi), ([0, 1, 0], -1));
        assert_eq!(h(DivisorClass::ZERO).triple(), [1, 0, 0]);
        assert_eq!(h(DivisorClass::ZERO).method, Method::Table1);
        let y = s(12, 12, 1, 11, "0");
        let v = h_vector_with(&y, c(0, 0, -14, 7), strict).unwrap();
        assert_eq!((v.triple(), v.chi), ([0, 1, 0], -1));
        let e = h_vector_with(&y, c(0, 0, -14, 7), HOptions { method: MethodChoice::Enum, checks: Checks::Off }).unwrap();
        assert_eq!(e.method, Method::Enumeration);
        assert_eq!(e.triple(), [0, 1, 0]);
    }

    #[test]
    fn uniruled_flags() {
        let x = s(1, 1, 0, 0, "1");
        let h = h_vector(&x, c(1, 0, 0, 0)).unwrap();
        assert_eq!(h.triple(), [1, 0, 0]);
        let closed = HOptions { method: MethodChoice::Closed, checks: Checks::Strict };
        let h = h_vector_with(&x, c(-3, 0, 0, 0), closed).unwrap();
        assert_eq!(h.method, Method::Mixed);
        assert!(h.flags.iter().any(|f| f == "extrapolated"));
    }

    #[test]
    fn closed_biruled_examples() {
        assert_eq!(h0_closed_biruled(&s(9, 9, 5, 4, "0"), c(6, 3, 2, 6)).unwrap(), 28);
        assert_eq!(h0_closed_biruled(&s(9, 9, 5, 4, "0"), c(6, -2, 2, 6)).unwrap(), 0);
        assert_eq!(h0_closed_biruled(&s(9, 9, 5, 4, "0"), DivisorClass::ZERO).unwrap(), 1);
        assert!(h0_closed_biruled(&s(1, 1, 0, 0, "1"), DivisorClass::ZERO).is_err());
    }

    #[test]
    fn main2_counterexample_to_uncorrected_count() {
        // D = -F on S(2,3,1,2,1/6): h1 = 0, but the count at ρ itself is 7
        let x = s(2, 3, 1, 2, "1/6");
        let d = c(0, -1, 0, 0);
        let m = main2_closed(&x, d).unwrap();
        assert_eq!((m.region, m.h1), (2, 0));
        let w = WeightTriple::new(2, 3, 1).unwrap();
        assert_eq!(wp2_lattice_count(&w, main2_rho(&x, d)).unwrap(), 7);
        let v = h_vector_with(&x, d, HOptions { method: MethodChoice::Auto, checks: Checks::Strict }).unwrap();
        assert_eq!(v.method, Method::Main2Closed);
    }

    #[test]
    fn main2_preconditions() {
        assert!(main2_closed(&s(5, 5, 3, 2, "0"), DivisorClass::ZERO).is_none());
        assert!(main2_closed(&s(1, 1, 0, 0, "1"), DivisorClass::ZERO).is_none());
        let x = s(2, 3, 1, 2, "1/6");
        assert!(main2_closed(&x, c(-1, 0, 0, 0)).is_none());
        assert!(main2_closed(&x, c(0, -2, 0, 0)).is_none());
        assert_eq!(main2_closed(&x, c(0, 1, 0, 0)).unwrap().region, 1);
    }

    #[test]
    fn h02_preconditions() {
        assert!(h02_diagnostic(&s(2, 3, 1, 2, "1/6"), DivisorClass::ZERO).is_none());
        let x = s(1, 1, 0, 0, "1");
        let r = h02_diagnostic(&x, c(3, 0, 0, 0)).unwrap();
        assert_eq!(r.h0, h0_enum(&x, c(3, 0, 0, 0)));
        assert_eq!(r.matched, r.predicted == r.h0);
        assert!(h02_diagnostic(&x, c(0, 2, 0, 0)).is_none());
    }
}
