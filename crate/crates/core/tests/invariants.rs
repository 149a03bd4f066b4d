use abyss::algorithms::{inf_usco, jordan_nbv, osc_point, sup_qc, total_variation_nbv};
use abyss::reductions::{cantor_diagonal, realiser_from_sup, SupOracle};
use abyss::universe::{Affine, Breakpoint, Piecewise, Policy};
use abyss::{
    ClassSet, CountableSet, DyadicInterval, Precision, Rational, Region, Surd, SymbolicFn, View,
};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| Rational::new(n, d))
}

fn unit_rat() -> impl Strategy<Value = Rational> {
    (1i64..64).prop_flat_map(|d| (0..=d).prop_map(move |n| Rational::new(n, d)))
}

fn surd() -> impl Strategy<Value = Surd> {
    (rat(), rat()).prop_map(|(a, b)| Surd::new(a, b))
}

/// `r + s sqrt2` in (0, 1) with `s != 0`.
fn unit_irrational() -> impl Strategy<Value = Surd> {
    (1i64..6, any::<bool>(), 0i64..256).prop_filter_map("inside (0,1)", |(e, neg, m)| {
        let s = Rational::new(if neg { -1 } else { 1 }, 1 << e);
        let x = Surd::new(Rational::new(m - 64, 256), s);
        (x.is_positive() && x < Surd::one()).then_some(x)
    })
}

/// `c x + sum of jumps h_i at b_i <= x`, right-continuous.
fn staircase() -> impl Strategy<Value = (Rational, Vec<(Rational, Rational)>)> {
    let jumps = prop::collection::btree_map(
        1i64..32,
        (-8i64..=8).prop_filter("nonzero", |h| *h != 0),
        0..4,
    );
    (-16i64..16, jumps).prop_map(|(c, js)| {
        let js = js
            .into_iter()
            .map(|(b, h)| (Rational::new(b, 32), Rational::new(h, 4)))
            .collect();
        (Rational::new(c, 4), js)
    })
}

fn stair_fn(c: &Rational, jumps: &[(Rational, Rational)]) -> SymbolicFn {
    let mut level = Rational::zero();
    let mut pieces = vec![Affine::new(c.clone(), Surd::zero())];
    for (_, h) in jumps {
        level = level + h;
        pieces.push(Affine::new(c.clone(), Surd::from(&level)));
    }
    let bps = jumps
        .iter()
        .map(|(b, _)| Breakpoint {
            at: Surd::from(b),
            policy: Policy::Right,
        })
        .collect();
    SymbolicFn::Piecewise(Piecewise::new(bps, pieces).unwrap())
}

fn stair_eval(c: &Rational, jumps: &[(Rational, Rational)], x: &Rational) -> Rational {
    jumps
        .iter()
        .filter(|(b, _)| b <= x)
        .fold(c * x, |acc, (_, h)| acc + h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trip(q in rat()) {
        prop_assert_eq!(q.to_string().parse::<Rational>().unwrap(), q);
    }

    #[test]
    fn surd_text_round_trip(x in surd()) {
        prop_assert_eq!(x.to_string().parse::<Surd>().unwrap(), x);
    }

    #[test]
    fn surd_order_matches_floats(x in surd(), y in surd()) {
        let (a, b) = (x.to_f64(), y.to_f64());
        if (a - b).abs() > 1e-9 {
            prop_assert_eq!(x < y, a < b);
        }
    }

    #[test]
    fn surd_field_laws(x in surd(), y in surd()) {
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) / &y, x);
        }
    }

    #[test]
    fn enclosures_contain_and_are_narrow(x in surd(), k in 0u32..40) {
        let i = DyadicInterval::enclose(&x, k);
        prop_assert!(i.contains(&x));
        prop_assert!(i.width() <= Rational::pow2_neg(k));
    }

    #[test]
    fn affine_sup_and_inf(a in rat(), c in rat(), p in unit_rat(), q in unit_rat()) {
        prop_assume!(p < q);
        let f = SymbolicFn::sum(SymbolicFn::scaled(a.clone(), SymbolicFn::identity()), SymbolicFn::constant(c.clone()));
        let (fp, fq) = (&(&a * &p) + &c, &(&a * &q) + &c);
        let hi = fp.clone().max(fq.clone());
        let lo = fp.min(fq);
        let s = sup_qc(&f, &p, &q, Precision(12), 256).unwrap();
        prop_assert!(s.contains_rational(&hi) && s.width() <= Rational::pow2_neg(12));
        let i = inf_usco(&f, &p, &q, Precision(12), 256).unwrap();
        prop_assert!(i.contains_rational(&lo) && i.width() <= Rational::pow2_neg(12));
    }

    #[test]
    fn thomae_oscillation_is_one_over_the_denominator(x in unit_rat()) {
        let d = Rational::from_bigint(x.denom().clone());
        let o = osc_point(&SymbolicFn::Thomae, &Surd::from(&x), Precision(10), 128).unwrap();
        prop_assert!(o.contains_rational(&d.recip()));
    }

    #[test]
    fn views_widen_monotonically(members in prop::collection::btree_set(0u32..10, 1..5), p in unit_rat(), q in unit_rat()) {
        prop_assume!(p < q);
        let pts: Vec<Surd> = members.iter().map(|&n| Surd::sqrt_half_scaled(n)).collect();
        let f = SymbolicFn::Penny { set: CountableSet::finite(pts).unwrap() };
        let r = Region::closed_q(&p, &q);
        let sup = |v| f.sup(&r, v).unwrap().unwrap();
        let (rq, probed, full) = (sup(View::Rational), sup(View::Probed(4)), sup(View::Full));
        prop_assert!(rq.is_zero());
        prop_assert!(rq <= probed && probed <= full);
    }

    #[test]
    fn diagonal_avoids_its_inputs(xs in prop::collection::vec(unit_irrational(), 0..12), k in 4u32..24) {
        let d = cantor_diagonal(&xs, k);
        let x = Surd::from(&d.point);
        prop_assert!(d.interval.contains(&x));
        prop_assert!(d.interval.width() <= Rational::pow2_neg(k));
        for a in &xs {
            prop_assert_ne!(&x, a);
        }
    }

    #[test]
    fn jordan_parts_are_monotone((c, jumps) in staircase(), mut xs in prop::collection::vec(unit_rat(), 2..24)) {
        let f = stair_fn(&c, &jumps);
        let pair = jordan_nbv(&f).unwrap();
        xs.sort();
        let mut prev: Option<(Surd, Surd)> = None;
        for x in &xs {
            let xs = Surd::from(x);
            let (g, h) = (pair.g(&xs).unwrap(), pair.h(&xs).unwrap());
            prop_assert_eq!(&g - &h, Surd::from(stair_eval(&c, &jumps, x)));
            if let Some((pg, ph)) = &prev {
                prop_assert!(&g >= pg && &h >= ph);
            }
            prev = Some((g, h));
        }
        let total = jumps.iter().fold(c.abs(), |acc, (_, h)| acc + h.abs());
        let v = total_variation_nbv(&f, &Surd::one(), 10).unwrap();
        prop_assert!(v.contains_rational(&total));
    }

    #[test]
    fn function_json_round_trip((c, jumps) in staircase(), n in 0u64..8) {
        for f in [stair_fn(&c, &jumps), SymbolicFn::PennyK { set: CountableSet::canonical(), k: n }] {
            prop_assert_eq!(SymbolicFn::from_json(&f.to_json()).unwrap(), f);
        }
    }

    #[test]
    fn saturation_is_a_closure(bits in 0u16..(1 << 13)) {
        let t = ClassSet::from_bits_truncate(bits);
        let s = t.saturate();
        prop_assert!(s.contains(t));
        prop_assert_eq!(s.saturate(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sup_realiser_avoids_a_random_finite_set(xs in prop::collection::btree_set(0u32..16, 1..6)) {
        let pts: Vec<Surd> = xs.iter().map(|&n| Surd::sqrt_half_scaled(n).shift(&Rational::new(1, 7))).collect();
        let set = CountableSet::finite(pts.clone()).unwrap();
        let r = realiser_from_sup(&SupOracle::exact(), &set, 10, 8).unwrap();
        prop_assert!(r.verify());
        let x = Surd::from(&r.point);
        for a in &pts {
            prop_assert_ne!(&x, a);
        }
    }
}
