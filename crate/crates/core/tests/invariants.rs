use proptest::prelude::*;
use toricoh::cohomology::{biruled_degree, biruled_triangles};
use toricoh::*;

fn gcd(a: i64, b: i64) -> i64 {
    gcd_list(&[a, b])
}

fn biruled(d: i64, n1: i64) -> RuledToricSurface {
    RuledToricSurface::with_int_r(d, d, n1, (d - n1).rem_euclid(d), 0).unwrap()
}

fn biruled_family(max_d: i64) -> Vec<RuledToricSurface> {
    let mut out = Vec::new();
    for d in 1..=max_d {
        for n1 in 0..d {
            if gcd(n1, d) == 1 {
                out.push(biruled(d, n1));
            }
        }
    }
    out
}

/// Surfaces with `r > 0` over a few fiber pairs and `k ∈ {0,1,2}`.
fn uniruled_family() -> Vec<RuledToricSurface> {
    let mut out = Vec::new();
    for (d1, d2) in [(1, 1), (2, 3), (3, 4), (2, 2), (4, 6), (1, 3), (3, 3)] {
        for n1 in 0..d1 {
            for n2 in 0..d2 {
                if gcd(n1, d1) != 1 || gcd(n2, d2) != 1 {
                    continue;
                }
                for k in 0..3 {
                    let r = Rational::new(n1, d1).unwrap() + Rational::new(n2, d2).unwrap() - 1 + k;
                    if r > 0 {
                        out.push(RuledToricSurface::new(d1, d2, n1, n2, r).unwrap());
                    }
                }
            }
        }
    }
    out
}

fn strict() -> HOptions {
    HOptions { method: MethodChoice::Auto, checks: Checks::Strict }
}

#[test]
fn delta_relations_small_orders() {
    for d in 2..=40 {
        for p in 1..d {
            if gcd(d, p) != 1 {
                continue;
            }
            let q = d - p;
            let half = Rational::new(d - 1, 2 * d).unwrap();
            for k in 0..d {
                let frac = frac_part(&Rational::new(-k, d).unwrap());
                assert_eq!(delta(d, p, k).unwrap() + delta(d, q, k + q).unwrap(), half);
                assert_eq!(delta(d, p, k).unwrap() + delta(d, q, k).unwrap(), frac);
            }
        }
    }
}

#[test]
fn biruled_concentration_and_closed_forms() {
    for s in biruled_family(7) {
        let dd = s.d;
        for a in -5..=5 {
            for b in -5..=5 {
                for al in 0..dd {
                    for be in 0..dd {
                        let d = s.class(a, b, al, be);
                        let h = h_vector_with(&s, d, strict()).unwrap();
                        let nz = h.triple().iter().filter(|&&x| x != 0).count();
                        assert!(nz <= 1, "{s} {d} {:?}", h.triple());
                        if nz == 1 {
                            assert_eq!(h.triple().iter().sum::<i64>(), h.chi.abs());
                        }
                        assert_eq!(h0_closed_biruled(&s, d).unwrap(), h0_enum(&s, d), "{s} {d}");
                        if a <= -1 || b <= -2 || (b == -1 && a >= 0 && al + be < dd) {
                            assert_eq!(h0_enum(&s, d), 0);
                        }
                        assert_eq!(biruled_degree(&s, d).is_none(), a == -1);
                    }
                }
            }
        }
    }
}

fn triangle_beta(s: &RuledToricSurface, d: DivisorClass) -> i64 {
    let (p, q) = (s.p1, s.q2);
    let mut c = 0;
    for u in 0..=(d.a + d.b).max(-1) {
        for v in 0..=(d.a + d.b - u) {
            if q * u - p * v > q * d.b + d.beta {
                c += 1;
            }
        }
    }
    c
}

#[test]
fn triangle_is_weighted_plane_count() {
    for s in biruled_family(9).into_iter().filter(|s| s.q2 > 0) {
        for a in 0..=6 {
            for b in -1..=6 {
                for be in 0..s.d {
                    let d = s.class(a, b, 0, be);
                    let w = WeightTriple::new(s.d, 1, s.q2).unwrap();
                    let count = wp2_lattice_count(&w, s.q2 * a - be - 1).unwrap() as i64;
                    assert_eq!(triangle_beta(&s, d), count, "{s} {d}");
                    assert_eq!(biruled_triangles(&s, d).unwrap().0, count);
                }
            }
        }
    }
}

#[test]
fn serre_symmetry_of_chi() {
    let mut surfaces = biruled_family(8);
    surfaces.extend(uniruled_family());
    for s in surfaces {
        let k = s.canonical_divisor().unwrap();
        for a in -4..=4 {
            for b in -4..=4 {
                for al in 0..s.d1 {
                    for be in 0..s.d2 {
                        let d = s.class(a, b, al, be);
                        let x = chi(&s, d);
                        assert!(x.is_integer(), "{s} {d}");
                        assert_eq!(chi(&s, s.canonical_form(k - d)), x, "{s} {d}");
                    }
                }
            }
        }
    }
}

#[test]
fn canonical_class_is_numerically_minus_zk() {
    let mut surfaces = biruled_family(8);
    surfaces.extend(uniruled_family());
    for s in surfaces {
        let k: QDivisor = s.canonical_divisor().unwrap().into();
        let sum = k + s.canonical_cycle();
        for g in RuledToricSurface::generators() {
            assert!(s.intersect(&sum, &g.into()).is_zero(), "{s}");
        }
    }
}

#[test]
fn uniruled_h1_nonnegative_and_euler() {
    for s in uniruled_family() {
        for a in -3..=4 {
            for b in -3..=4 {
                for al in 0..s.d1 {
                    for be in 0..s.d2 {
                        let d = s.class(a, b, al, be);
                        let h = h_vector_with(&s, d, strict()).unwrap();
                        assert!(h.h0 >= 0 && h.h1 >= 0 && h.h2 >= 0);
                        assert_eq!(h.h0 - h.h1 + h.h2, h.chi);
                    }
                }
            }
        }
    }
}

#[test]
fn uniruled_region_one_with_half_integral_r() {
    // 3/4 + 3/4 - 1/2 = 1, so k = 0
    let s = RuledToricSurface::new(4, 4, 3, 3, Rational::new(1, 2).unwrap()).unwrap();
    assert_eq!(s.k, 0);
    for a in 0..=8 {
        for b in -1..=8 {
            for al in 0..4 {
                for be in 0..4 {
                    let d = s.class(a, b, al, be);
                    let m = main2_closed(&s, d).unwrap();
                    if m.region == 1 {
                        assert_eq!(Rational::from(h0_enum(&s, d)), chi(&s, d));
                        assert_eq!(h_vector_with(&s, d, strict()).unwrap().triple()[1..], [0, 0]);
                    }
                }
            }
        }
    }
}

#[test]
fn chi_of_fiber_classes() {
    for s in biruled_family(9) {
        let d = s.d;
        let pp = if d >= 2 { mod_inverse(s.p1, d).unwrap() } else { 0 };
        for v in -5 * d..=5 * d {
            for w in -5 * d..=5 * d {
                let want = 1 + floor_div(v, d).unwrap() + floor_div(w, d).unwrap();
                assert_eq!(chi(&s, s.class(0, 0, v, w)), Rational::from(want), "{s} {v} {w}");
            }
            for u in -6..=0 {
                let want = 1 + floor_div(u - v * pp, d).unwrap() + floor_div(v * pp, d).unwrap();
                assert_eq!(chi(&s, s.class(u, 0, v, -v)), Rational::from(want), "{s} {u} {v}");
            }
        }
    }
}

#[test]
fn torsion_order_is_gcd() {
    let mut surfaces = biruled_family(9);
    surfaces.extend(uniruled_family());
    for s in surfaces {
        let t = s.torsion_generator();
        let order = (1..=s.d).find(|&i| s.canonical_form(i * t) == DivisorClass::ZERO);
        assert_eq!(order, Some(s.d), "{s}");
        assert!(s.numerically_equivalent(t, DivisorClass::ZERO));
    }
}

fn brute_h0(s: &RuledToricSurface, d: DivisorClass) -> i64 {
    let mut c = 0;
    let top = d.a + d.b;
    for u in 0..=top.max(-1) {
        for v in 0..=(top - u) {
            let ok = u + v >= d.b
                && (s.d1 - s.p1) * u - s.p1 * v >= -s.p1 * d.b - d.alpha
                && s.q2 * u - (s.d2 - s.q2) * v <= s.q2 * d.b + d.beta;
            if ok {
                c += 1;
            }
        }
    }
    c
}

fn any_surface() -> impl Strategy<Value = RuledToricSurface> {
    (1i64..9, 1i64..9, 0i64..9, 0i64..9, 0i64..3).prop_filter_map("valid invariants", |(d1, d2, n1, n2, k)| {
        if n1 >= d1 || n2 >= d2 {
            return None;
        }
        let r = Rational::new(n1, d1).ok()? + Rational::new(n2, d2).ok()? - 1 + k;
        RuledToricSurface::new(d1, d2, n1, n2, r).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn h0_matches_brute_force(s in any_surface(), a in -4i64..10, b in -4i64..10, al in 0i64..9, be in 0i64..9) {
        let d = s.class(a, b, al % s.d1, be % s.d2);
        prop_assert_eq!(h0_enum(&s, d), brute_h0(&s, d));
    }

    #[test]
    fn canonical_form_idempotent_and_class_invariant(s in any_surface(), a in -9i64..9, b in -9i64..9, al in -40i64..40, be in -40i64..40, t in -5i64..5) {
        let d = s.class(a, b, al, be);
        prop_assert_eq!(s.canonical_form(d), d);
        let moved = DivisorClass::raw(a, b - t, al + t * s.d1, be);
        prop_assert_eq!(s.canonical_form(moved), d);
        let moved = DivisorClass::raw(a, b - t, al, be + t * s.d2);
        prop_assert_eq!(s.canonical_form(moved), d);
    }

    #[test]
    fn pairing_bilinear_symmetric(s in any_surface(), x in proptest::array::uniform4(-6i64..6), y in proptest::array::uniform4(-6i64..6), z in proptest::array::uniform4(-6i64..6)) {
        let (x, y, z) = (DivisorClass::from(x), DivisorClass::from(y), DivisorClass::from(z));
        prop_assert_eq!(s.intersect_classes(x, y), s.intersect_classes(y, x));
        prop_assert_eq!(s.intersect_classes(x + y, z), s.intersect_classes(x, z) + s.intersect_classes(y, z));
        let f = DivisorClass::raw(0, 1, 0, 0);
        prop_assert_eq!(s.intersect_classes(f, f), Rational::zero());
    }

    #[test]
    fn euler_characteristic_is_integral_and_self_dual(s in any_surface(), a in -8i64..8, b in -8i64..8, al in 0i64..9, be in 0i64..9) {
        let d = s.class(a, b, al % s.d1, be % s.d2);
        let k = s.canonical_divisor().unwrap();
        let x = chi(&s, d);
        prop_assert!(x.is_integer());
        prop_assert_eq!(chi(&s, s.canonical_form(k - d)), x);
    }

    #[test]
    fn h_vector_euler_consistent(s in any_surface(), a in -6i64..8, b in -6i64..8, al in 0i64..9, be in 0i64..9) {
        let d = s.class(a, b, al % s.d1, be % s.d2);
        let h = h_vector_with(&s, d, strict()).unwrap();
        prop_assert!(h.h1 >= 0);
        prop_assert_eq!(h.h0 - h.h1 + h.h2, h.chi);
    }
}
