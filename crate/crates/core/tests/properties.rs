//! Property tests; each compares against an oracle written independently here.

use exop::certified::{exp_rational, Interval};
use exop::conjecture::{even_segments, family_polys, wronskian, RecurrenceFamily};
use exop::exceptional::{charlier_omega, CharlierSystem};
use exop::families::{charlier, hermite, Family};
use exop::fsets::FiniteSet;
use exop::operators::verify_eigen;
use exop::polycore::{determinant, format_rational, parse_rational, real_root_count, Poly, Rational, RootInterval};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly<Rational>> {
    prop::collection::vec(rational(), 0..=max_deg + 1).prop_map(Poly::new)
}

fn small_set(max_fk: u32, max_k: usize) -> impl Strategy<Value = FiniteSet> {
    prop::collection::btree_set(1..=max_fk, 1..=max_k)
        .prop_map(|s| FiniteSet::new(s.into_iter().collect()).expect("sorted positive"))
}

/// Leibniz expansion over all permutations.
fn leibniz(m: &[Vec<Rational>]) -> Rational {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..=p.len() {
                let mut r = p.clone();
                r.insert(i, n - 1);
                out.push(r);
            }
        }
        out
    }
    let n = m.len();
    perms(n)
        .into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let prod: Rational = (0..n).map(|i| m[i][p[i]].clone()).product();
            if inversions % 2 == 0 {
                prod
            } else {
                -prod
            }
        })
        .sum()
}

fn binom_q(x: i64, j: u64) -> Rational {
    (0..j).map(|i| q(x - i as i64) / q(i as i64 + 1)).product()
}

fn fact_q(n: u64) -> Rational {
    (1..=n).map(|i| q(i as i64)).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in poly(5), b in poly(5), c in poly(3)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        let x = q(3) / q(7);
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
    }

    #[test]
    fn division_reconstructs(a in poly(7), b in poly(4)) {
        prop_assume!(!b.is_zero());
        let (quo, rem) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&quo * &b) + &rem, a);
        prop_assert!(rem.is_zero() || rem.degree() < b.degree());
        prop_assert_eq!((&quo * &b).exact_div(&b).unwrap(), quo);
    }

    #[test]
    fn determinant_matches_leibniz(entries in prop::collection::vec(-9i64..=9, 16), n in 1usize..=4) {
        let m: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| q(entries[i * 4 + j])).collect()).collect();
        prop_assert_eq!(determinant(&m).unwrap(), leibniz(&m));
    }

    #[test]
    fn sturm_counts_distinct_roots(roots in prop::collection::vec(rational(), 1..=5), c in 1i64..=9, mult in 1u32..=2) {
        // ∏(x − r)^mult · (x² + c): the quadratic has no real root.
        let mut p = Poly::new(vec![q(c), q(0), q(1)]);
        for r in &roots {
            p = &p * &Poly::linear(Rational::one(), -r.clone()).pow(mult);
        }
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(real_root_count(&p, &RootInterval::Whole).unwrap(), distinct.len());
    }

    #[test]
    fn rational_text_roundtrip(r in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn interval_arithmetic_encloses(x in rational(), y in nonzero_rational(), prec in 24u32..=256) {
        let (ix, iy) = (Interval::point(&x, prec), Interval::point(&y, prec));
        prop_assert!((&ix + &iy).contains(&(&x + &y)));
        prop_assert!((&ix - &iy).contains(&(&x - &y)));
        prop_assert!((&ix * &iy).contains(&(&x * &y)));
        prop_assert!(ix.div(&iy).unwrap().contains(&(&x / &y)));
        let s = Interval::point(&y.abs(), prec).sqrt().unwrap();
        prop_assert!(s.lo() * s.lo() <= y.abs() && y.abs() <= s.hi() * s.hi());
    }

    #[test]
    fn exp_enclosure_is_tight(n in -40i64..=40, d in 1i64..=8) {
        let x = q(n) / q(d);
        let e = exp_rational(&x, 128);
        let f = (n as f64 / d as f64).exp();
        prop_assert!((e.to_f64() - f).abs() <= 1e-12 * f);
        prop_assert!(e.radius() * exp_rational(&-x, 64).hi() < Rational::new(1.into(), BigInt::one() << 100));
    }

    #[test]
    fn charlier_matches_generating_function(n in 0u64..=9, x in 0i64..=12, a in nonzero_rational()) {
        // Coefficient of t^n in e^{−at}(1+t)^x.
        let oracle: Rational = (0..=n)
            .map(|j| binom_q(x, j) * num_traits::pow(-a.clone(), (n - j) as usize) / fact_q(n - j))
            .sum();
        prop_assert_eq!(charlier(n as i64, &a).eval(&q(x)), oracle);
    }

    #[test]
    fn hermite_matches_recurrence(n in 0usize..=14, x in rational()) {
        let mut vals = vec![q(1), q(2) * &x];
        for m in 1..n {
            let next = q(2) * &x * &vals[m] - q(2 * m as i64) * &vals[m - 1];
            vals.push(next);
        }
        prop_assert_eq!(hermite::<Rational>(n as i64).eval(&x), vals[n].clone());
    }

    #[test]
    fn involution_is_self_inverse(set in small_set(12, 6)) {
        let g = set.involution().unwrap();
        prop_assert_eq!(g.largest(), set.largest());
        prop_assert_eq!(g.involution().unwrap(), set);
    }

    #[test]
    fn admissible_iff_product_nonnegative(set in small_set(12, 6)) {
        let top = set.largest().unwrap() as i64 + 1;
        let nonneg = (0..=top).all(|n| set.elements().iter().map(|&f| n - f as i64).product::<i64>() >= 0);
        prop_assert_eq!(set.is_admissible(), nonneg);
    }

    #[test]
    fn sigma_skips_exactly_k_degrees(set in small_set(10, 5)) {
        let (u, top) = (set.u(), set.u() + set.largest().unwrap() as u64);
        prop_assert_eq!(set.sigma_range(u, top).len() as u64, top - u + 1 - set.k() as u64);
        prop_assert!(set.elements().iter().all(|&f| !set.in_sigma(u + f as u64)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn charlier_omega_invariance(set in small_set(7, 4), a in nonzero_rational()) {
        let g = set.involution().unwrap();
        let lhs = charlier_omega(&set, &a);
        let minus_x = lhs.compose_linear(&q(-1), &q(0));
        let rhs = charlier_omega(&g, &-a.clone());
        let sign = if (set.k() as u64 + set.u()).is_multiple_of(2) { q(1) } else { q(-1) };
        prop_assert_eq!(minus_x.scale(&sign), rhs);
    }

    #[test]
    fn exceptional_eigen_equation(set in small_set(5, 3), a in nonzero_rational()) {
        let ns: Vec<u64> = (0..=set.v() + 2).collect();
        for fam in [Family::Charlier(a.clone()), Family::Hermite] {
            let r = verify_eigen(&set, &fam, &ns).unwrap();
            prop_assert!(r.passed, "{}", r);
        }
    }

    #[test]
    fn exceptional_degrees(set in small_set(5, 3), a in nonzero_rational()) {
        let sys = CharlierSystem::new(&set, a).unwrap();
        for n in set.sigma_range(0, set.v() + 3) {
            prop_assert_eq!(sys.poly(n).degree(), Some(n as usize));
        }
    }

    #[test]
    fn recurrence_polys_satisfy_recurrence(
        data in prop::collection::vec((nonzero_rational(), rational(), nonzero_rational()), 8),
        x in rational(),
    ) {
        let fam = RecurrenceFamily::new(
            "random",
            data.iter().map(|d| d.0.clone()).collect(),
            data.iter().map(|d| d.1.clone()).collect(),
            data.iter().map(|d| d.2.clone()).collect(),
        );
        let p = family_polys(&fam, 7).unwrap();
        for n in 0..7 {
            let prev = if n == 0 { Rational::zero() } else { &fam.c[n] * p[n - 1].eval(&x) };
            let rhs = &fam.a[n] * p[n + 1].eval(&x) + &fam.b[n] * p[n].eval(&x) + prev;
            prop_assert_eq!(&x * p[n].eval(&x), rhs);
            prop_assert_eq!(p[n].degree(), Some(n));
        }
    }

    #[test]
    fn karlin_szego_even_runs(
        data in prop::collection::vec((1i64..=9, -9i64..=9, 1i64..=9), 8),
        flip in prop::collection::vec(any::<bool>(), 8),
    ) {
        // a_{n−1} c_n > 0 with arbitrary signs: a positive-measure family.
        let sgn = |b: bool| if b { q(-1) } else { q(1) };
        let fam = RecurrenceFamily::new(
            "random-positive",
            data.iter().zip(&flip).map(|(d, &f)| q(d.0) * sgn(f)).collect(),
            data.iter().map(|d| q(d.1) / q(2)).collect(),
            (0..8).map(|n| q(data[n].2) * sgn(n > 0 && flip[n - 1])).collect(),
        );
        prop_assert!(fam.is_positive());
        let polys = family_polys(&fam, 6).unwrap();
        for set in even_segments(6) {
            let w = wronskian(&polys, &set).unwrap();
            prop_assert!(!w.is_zero());
            prop_assert_eq!(real_root_count(&w, &RootInterval::Whole).unwrap(), 0, "F={}", set);
        }
    }
}

#[test]
fn exp_bound_sanity() {
    let e = exp_rational(&q(1), 200);
    assert!((e.to_f64() - std::f64::consts::E).abs() < 1e-15);
    assert!(e.radius().to_f64().unwrap() < 1e-55);
    assert!(!e.contains_zero());
    assert!(e.lo().is_positive());
}
