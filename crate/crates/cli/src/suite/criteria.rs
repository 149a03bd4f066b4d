use std::collections::BTreeMap;

use abyss::algorithms::{
    cousin_subcover, inf_usco, jordan_nbv, jump_enum, osc_point, point_of_continuity_qc,
    sup_baire1, sup_qc, total_variation_nbv, CousinClass,
};
use abyss::oracle::{admit, evaluate, rule_for, Mode, QuantQuery, Shape, ShapeKind};
use abyss::reductions::{
    cover_measure_check, demo_abyss, naive_rational_sup, realiser_from_cliq_modulus,
    realiser_from_regulation_modulus, realiser_from_sup, CliqModulusOracle, Realiser,
    RegulationOracle, SupOracle,
};
use abyss::universe::{build_cover_psi, Baire1Seq, OpenUnion};
use abyss::{
    AbyssError, ClassSet, CountableSet, DyadicInterval, Precision, Rational, Region, Surd,
    SymbolicFn, View,
};
use rand::Rng;
use serde_json::json;

use super::brute::*;
use super::gen::*;
use super::{CriterionReport, Tally};

const FUEL: u64 = 64;

fn s(r: &Rational) -> Surd {
    Surd::from(r)
}

fn brief(e: &AbyssError) -> String {
    e.to_string()
}

fn interval_ok(i: &DyadicInterval, truth: &Surd, k: u32) -> bool {
    i.contains(truth) && i.width() <= Rational::pow2_neg(k)
}

pub fn sup_inf_bisection(rng: &mut Rng8) -> CriterionReport {
    let k = 10;
    let mut t = Tally::default();
    let mut families: BTreeMap<&str, u64> = BTreeMap::new();
    for i in 0..200 {
        let (p, q) = unit_interval(rng, 16);
        let (family, result, truth) = match i % 8 {
            0 | 1 => {
                let pw = pw(rng, Knot::Qc, false);
                let truth = pw_extremes(&pw, &s(&p), false, &s(&q), false).0;
                (
                    "sup_qc/piecewise",
                    sup_qc(&pw.to_fn(), &p, &q, Precision(k), FUEL),
                    truth,
                )
            }
            2 => {
                let pw = pw(rng, Knot::Usco, false);
                let truth = pw_extremes(&pw, &s(&p), false, &s(&q), false).1;
                (
                    "inf_usco/piecewise",
                    inf_usco(&pw.to_fn(), &p, &q, Precision(k), FUEL),
                    truth,
                )
            }
            3 => (
                "sup_qc/thomae",
                sup_qc(&SymbolicFn::Thomae, &p, &q, Precision(k), FUEL),
                s(&thomae_sup(&p, &q)),
            ),
            4 => {
                let ps = penny_set(rng, 12);
                let f = SymbolicFn::Penny { set: ps.set };
                (
                    "inf_usco/penny",
                    inf_usco(&f, &p, &q, Precision(k), FUEL),
                    Surd::zero(),
                )
            }
            5 => {
                let ps = penny_set(rng, 12);
                let kk = rng.gen_range(0..ps.members.len() as u64);
                let f = SymbolicFn::PennyK { set: ps.set, k: kk };
                (
                    "inf_usco/penny_k",
                    inf_usco(&f, &p, &q, Precision(k), FUEL),
                    Surd::zero(),
                )
            }
            6 => {
                let ps = penny_set(rng, 12);
                let inside = |a: &Surd| *a >= s(&p) && *a <= s(&q);
                let truth = penny_sup(&ps.members, inside);
                let f = SymbolicFn::Baire1 {
                    seq: Baire1Seq::Spikes { set: ps.set },
                    with_modulus: true,
                };
                (
                    "sup_baire1/spikes",
                    sup_baire1(&f, &p, &q, Precision(k), FUEL),
                    truth,
                )
            }
            _ => {
                let spans = random_spans(rng);
                let meets = spans.iter().any(|(a, b)| p < *b && *a < q);
                let truth = if meets { Surd::one() } else { Surd::zero() };
                let open = OpenUnion::new(spans).expect("valid spans");
                let f = SymbolicFn::Baire1 {
                    seq: Baire1Seq::Ramps { open },
                    with_modulus: true,
                };
                (
                    "sup_baire1/ramps",
                    sup_baire1(&f, &p, &q, Precision(k), FUEL),
                    truth,
                )
            }
        };
        *families.entry(family).or_default() += 1;
        match result {
            Ok(iv) => t.check(interval_ok(&iv, &truth, k), || {
                format!("#{i} {family} on [{p},{q}]: {iv:?} vs {truth}")
            }),
            Err(e) => t.check(false, || {
                format!("#{i} {family} on [{p},{q}]: {}", brief(&e))
            }),
        }
    }
    t.finish(
        1,
        "sup/inf by bisection within 2^-10 on 200 instances",
        json!({ "precision": k, "families": families }),
    )
}

fn random_spans(rng: &mut Rng8) -> Vec<(Rational, Rational)> {
    (0..rng.gen_range(1..=2))
        .map(|_| unit_interval(rng, 12))
        .collect()
}

pub fn penny_oscillation(rng: &mut Rng8) -> CriterionReport {
    let k = 8;
    let f = SymbolicFn::Penny {
        set: CountableSet::canonical(),
    };
    let mut t = Tally::default();
    let mut points: Vec<(String, Surd, Surd)> = (0..25u32)
        .map(|n| {
            (
                format!("member {n}"),
                Surd::sqrt_half_scaled(n),
                s(&Rational::pow2_neg(n + 1)),
            )
        })
        .collect();
    for _ in 0..25 {
        let x = unit_rational(rng, 64);
        points.push((format!("rational {x}"), s(&x), Surd::zero()));
    }
    for (label, x, truth) in &points {
        match osc_point(&f, x, Precision(k), FUEL) {
            Ok(iv) => t.check(interval_ok(&iv, truth, k), || {
                format!("{label}: {iv:?} vs {truth}")
            }),
            Err(e) => t.check(false, || format!("{label}: {}", brief(&e))),
        }
    }
    t.finish(
        2,
        "penny oscillation at members and rationals",
        json!({ "precision": k, "points": points.len() }),
    )
}

pub fn continuity_points(rng: &mut Rng8) -> CriterionReport {
    let k = 8;
    let bound = s(&Rational::pow2_neg(k));
    let mut t = Tally::default();
    let mut found = Vec::new();
    let mut cases: Vec<(String, SymbolicFn, Option<Pw>)> =
        vec![("thomae".into(), SymbolicFn::Thomae, None)];
    for i in 0..20 {
        let pw = pw(rng, Knot::Qc, false);
        cases.push((format!("piecewise #{i}"), pw.to_fn(), Some(pw)));
    }
    for (label, f, pw) in &cases {
        match point_of_continuity_qc(f, k, FUEL) {
            Ok(cp) => {
                let x = s(&cp.point);
                t.check(cp.certified, || {
                    format!("{label}: point {} not certified", cp.point)
                });
                let osc = match pw {
                    Some(pw) => pw_osc(pw, &x),
                    None => thomae_eval(&x),
                };
                t.check(osc < bound, || {
                    format!("{label}: true oscillation {osc} at {}", cp.point)
                });
                match osc_point(f, &x, Precision(k), 2 * FUEL) {
                    Ok(iv) => t.check(iv.upper() <= &Rational::pow2_neg(k), || {
                        format!("{label}: osc {iv:?}")
                    }),
                    Err(e) => t.check(false, || format!("{label}: {}", brief(&e))),
                }
                found.push(json!({ "case": label, "point": cp.point.to_string() }));
            }
            Err(e) => t.check(false, || format!("{label}: {}", brief(&e))),
        }
    }
    t.finish(
        3,
        "points of continuity for quasi-continuous functions",
        json!({ "precision": k, "found": found }),
    )
}

pub fn cousin_covers(rng: &mut Rng8) -> CriterionReport {
    let mut t = Tally::default();
    let mut sizes = Vec::new();
    for i in 0..20 {
        let (kind, class) = if i % 2 == 0 {
            (Knot::Qc, CousinClass::QuasiContinuous)
        } else {
            (Knot::Lsco, CousinClass::Lsco)
        };
        let pw = pw(rng, kind, true);
        match cousin_subcover(&pw.to_fn(), class, 4 * FUEL) {
            Ok(cover) => {
                let balls: Vec<(Surd, Surd)> = cover
                    .balls
                    .iter()
                    .map(|b| (s(&b.center), s(&b.radius)))
                    .collect();
                t.check(sweep_covers(&balls), || {
                    format!("#{i}: {} balls leave a gap", balls.len())
                });
                t.check(cover.n0 + 1 == balls.len(), || {
                    format!("#{i}: n0 {} with {} balls", cover.n0, balls.len())
                });
                if balls.len() > 1 {
                    let short = &balls[..balls.len() - 1];
                    t.check(!sweep_covers(short), || {
                        format!("#{i}: a shorter prefix already covers")
                    });
                }
                for (c, r) in &balls {
                    let v = pw_eval(&pw, c);
                    t.check(r.is_positive() && *r <= v, || {
                        format!("#{i}: radius {r} at {c} exceeds {v}")
                    });
                }
                sizes.push(balls.len());
            }
            Err(e) => t.check(false, || format!("#{i}: {}", brief(&e))),
        }
    }
    let mut refusals = Vec::new();
    for usco in [false, true] {
        let psi = build_cover_psi(CountableSet::canonical(), usco).expect("canonical set");
        for class in [CousinClass::QuasiContinuous, CousinClass::Lsco] {
            let r = cousin_subcover(&psi, class, FUEL);
            t.check(matches!(r, Err(AbyssError::Refused { .. })), || {
                format!("cover psi (usco {usco}) with {class:?} was not refused")
            });
            refusals.push(json!({ "usco": usco, "class": class }));
        }
    }
    // 2Ψ(0) = 1/4 and the n-th companion ball has length 2^-(n+4); the best
    // twelve of thirteen drop the smallest
    let expect = (0..11).fold(Rational::new(1, 4), |acc, n| {
        acc + Rational::pow2_neg(n + 4)
    });
    match cover_measure_check(&CountableSet::canonical(), 12, 12) {
        Ok(m) => {
            t.check(m.holds && m.max_total < Rational::one(), || {
                format!("twelve balls reach {}", m.max_total)
            });
            t.check(m.max_total == expect, || {
                format!("max total {} vs {expect}", m.max_total)
            });
        }
        Err(e) => t.check(false, || format!("measure check: {}", brief(&e))),
    }
    t.finish(
        4,
        "finite subcovers, refusal without the class, and the measure obstruction",
        json!({ "cover_sizes": sizes, "refused": refusals, "max_twelve_ball_length": expect.to_string() }),
    )
}

pub fn jordan_split(rng: &mut Rng8) -> CriterionReport {
    let depth = 10;
    let tol = s(&Rational::pow2_neg(9));
    let mut t = Tally::default();
    let mut variations = Vec::new();
    let grid: Vec<Rational> = (0..=1i64 << depth)
        .map(|j| Rational::dyadic(j, depth))
        .collect();
    for i in 0..20 {
        let st = stair(rng);
        let f = st.to_fn();
        let pair = match jordan_nbv(&f) {
            Ok(p) => p,
            Err(e) => {
                t.check(false, || format!("#{i}: {}", brief(&e)));
                continue;
            }
        };
        let mut prev: Option<(Surd, Surd)> = None;
        let (mut mono, mut close) = (true, true);
        for x in &grid {
            let (g, h) = match (pair.g(&s(x)), pair.h(&s(x))) {
                (Ok(g), Ok(h)) => (g, h),
                _ => {
                    mono = false;
                    break;
                }
            };
            if let Some((pg, ph)) = &prev {
                mono &= g >= *pg && h >= *ph;
            }
            close &= (&(&g - &h) - &s(&st.eval(x))).abs() <= tol;
            prev = Some((g, h));
        }
        t.check(mono, || format!("#{i}: g or h decreases on the grid"));
        t.check(close, || format!("#{i}: g - h misses f by more than 2^-9"));

        let exact = st.variation();
        // grid values scaled to integers; the jumps are grid points already
        let scale = Rational::integer(4096);
        let scaled: Option<Vec<i128>> = grid
            .iter()
            .map(|x| {
                let v = &st.eval(x) * &scale;
                v.is_integer().then(|| v.numer().try_into().ok()).flatten()
            })
            .collect();
        let Some(scaled) = scaled else {
            t.check(false, || {
                format!("#{i}: grid values are not multiples of 1/4096")
            });
            continue;
        };
        let dp = Rational::from_bigint(partition_variation(&scaled, 10).into()) / scale;
        match total_variation_nbv(&f, &Surd::one(), 8) {
            Ok(iv) => {
                t.check(iv.contains(&s(&exact)), || {
                    format!("#{i}: {iv:?} misses variation {exact}")
                });
                // distance from the best partition sum to the enclosure
                let gap = (iv.lower() - &dp)
                    .max(&dp - iv.upper())
                    .max(Rational::zero());
                t.check(gap <= Rational::pow2_neg(8), || {
                    format!("#{i}: {iv:?} vs partition sum {dp}")
                });
                t.check(dp <= exact, || {
                    format!("#{i}: partition sum {dp} above the variation {exact}")
                });
            }
            Err(e) => t.check(false, || format!("#{i}: {}", brief(&e))),
        }
        let mut want: Vec<Surd> = st.jumps.iter().map(|(b, _)| s(b)).collect();
        want.sort();
        match jump_enum(&f, FUEL) {
            Ok(mut got) => {
                got.sort();
                t.check(got == want, || format!("#{i}: jumps {got:?} vs {want:?}"));
            }
            Err(e) => t.check(false, || format!("#{i}: {}", brief(&e))),
        }
        variations.push(exact.to_string());
    }
    t.finish(
        5,
        "Jordan decomposition and variation of normalised BV functions",
        json!({ "grid_depth": depth, "variations": variations }),
    )
}

pub fn naive_baseline() -> CriterionReport {
    let mut t = Tally::default();
    let f = SymbolicFn::Penny {
        set: CountableSet::canonical(),
    };
    let (zero, one) = (Rational::zero(), Rational::one());
    let mut grid = BTreeMap::new();
    for depth in [8, 16, 24] {
        match naive_rational_sup(&f, &zero, &one, depth) {
            Ok(v) => {
                t.check(v.is_zero(), || format!("depth {depth}: grid sup {v}"));
                grid.insert(depth.to_string(), v.to_string());
            }
            Err(e) => t.check(false, || format!("depth {depth}: {}", brief(&e))),
        }
    }
    // the first member sits at sqrt2/2 with value 1/2
    let truth = penny_eval(
        &[(0, Surd::sqrt_half_scaled(0))],
        &Surd::sqrt_half_scaled(0),
    );
    let oracle = SupOracle::exact().sup(&f, &zero, &one);
    match &oracle {
        Ok(v) => t.check(s(v) == truth, || format!("oracle sup {v} vs {truth}")),
        Err(e) => t.check(false, || format!("oracle: {}", brief(e))),
    }
    let demo = demo_abyss("penny", 20);
    match &demo {
        Ok(d) => t.check(d.gap >= Rational::new(1, 2), || {
            format!("demo gap {}", d.gap)
        }),
        Err(e) => t.check(false, || format!("demo: {}", brief(e))),
    }
    t.finish(
        6,
        "rational grids miss the penny supremum that the oracle finds",
        json!({
            "grid": grid,
            "oracle": oracle.map(|v| v.to_string()).unwrap_or_default(),
            "demo_gap": demo.map(|d| d.gap.to_string()).unwrap_or_default(),
        }),
    )
}

fn check_realiser(
    t: &mut Tally,
    label: &str,
    r: Result<Realiser, AbyssError>,
    members: &[(u64, Surd)],
    cert: u64,
) {
    let r = match r {
        Ok(r) => r,
        Err(e) => return t.check(false, || format!("{label}: {}", brief(&e))),
    };
    let x = s(&r.point);
    t.check(r.verify(), || {
        format!("{label}: certificate does not verify")
    });
    t.check(x >= Surd::zero() && x <= Surd::one(), || {
        format!("{label}: point {} outside [0,1]", r.point)
    });
    for (n, a) in members.iter().filter(|(n, _)| *n <= cert) {
        t.check(x != *a, || format!("{label}: point equals member {n}"));
        let shown = r.checks.iter().find(|c| c.index == *n);
        t.check(
            shown.is_some_and(|c| !c.excluded_by.contains(a) && c.excluded_by.contains(&x)),
            || format!("{label}: member {n} has no valid exclusion"),
        );
    }
}

pub fn realisers(rng: &mut Rng8) -> CriterionReport {
    let (k, cert) = (16, 16);
    let mut t = Tally::default();
    for i in 0..10 {
        let ps = random_finite_set(rng, cert as usize + 1);
        let set = &ps.set;
        check_realiser(
            &mut t,
            &format!("sup #{i}"),
            realiser_from_sup(&SupOracle::exact(), set, k, cert),
            &ps.members,
            cert,
        );
        let cliq = CliqModulusOracle::canonical(set.clone());
        check_realiser(
            &mut t,
            &format!("cliq #{i}"),
            realiser_from_cliq_modulus(&cliq, set, k, cert),
            &ps.members,
            cert,
        );
        let reg = RegulationOracle::canonical(set.clone(), FUEL)
            .and_then(|o| realiser_from_regulation_modulus(&o, set, k, cert, FUEL));
        check_realiser(&mut t, &format!("regulation #{i}"), reg, &ps.members, cert);
    }
    let want = sqrt_half_bits(16);
    let mut got = String::new();
    match realiser_from_sup(&SupOracle::exact(), &CountableSet::canonical(), k, cert) {
        Ok(r) => {
            got = r
                .extracted
                .first()
                .map(|e| e.bits.chars().take(16).collect())
                .unwrap_or_default();
            t.check(got == want, || {
                format!("first extracted bits {got} vs {want}")
            });
        }
        Err(e) => t.check(false, || format!("canonical: {}", brief(&e))),
    }
    t.finish(
        7,
        "realisers avoid every certified member",
        json!({ "sets": 10, "certified_upto": cert, "sqrt_half_bits": got }),
    )
}

/// Queries are drawn per rule until each has seen `PER_RULE` of them.
const PER_RULE: u64 = 100;

struct Probe {
    f: SymbolicFn,
    shape: ShapeSpec,
    truth: bool,
}

enum ShapeSpec {
    Osc(Surd, Rational),
    Ball(Surd, Rational),
    Above(Rational, Rational, Rational),
    Below(Rational, Rational, Rational),
    Baire1(Rational, Rational, Rational),
}

impl Probe {
    fn shape(&self) -> Shape<'_> {
        let f = &self.f;
        match &self.shape {
            ShapeSpec::Osc(x, b) => Shape::OscBelow {
                f,
                x: x.clone(),
                bound: b.clone(),
            },
            ShapeSpec::Ball(x, q) => Shape::ValueBelowOnBall {
                f,
                x: x.clone(),
                q: q.clone(),
            },
            ShapeSpec::Above(p, q, t) => Shape::ExistsValueAbove {
                f,
                region: Region::closed_q(p, q),
                t: t.clone(),
            },
            ShapeSpec::Below(p, q, t) => Shape::ExistsValueBelow {
                f,
                region: Region::closed_q(p, q),
                t: t.clone(),
            },
            ShapeSpec::Baire1(p, q, t) => Shape::Baire1Above {
                f,
                region: Region::closed_q(p, q),
                t: t.clone(),
            },
        }
    }
}

fn pick(rng: &mut Rng8, xs: &[Rational]) -> Rational {
    xs[rng.gen_range(0..xs.len())].clone()
}

fn thresholds(rng: &mut Rng8, around: &Surd) -> Rational {
    let mut c: Vec<Rational> = [0i64, 1, -1, 2, 4]
        .iter()
        .map(|&n| Rational::new(n, 8))
        .collect();
    if let Some(v) = around.to_rational() {
        c.extend([
            v.clone(),
            &v + &Rational::new(1, 64),
            &v - &Rational::new(1, 64),
        ]);
    }
    pick(rng, &c)
}

fn pw_points(rng: &mut Rng8, pw: &Pw) -> Surd {
    let knots: Vec<Surd> = pw.all_knots().iter().map(s).collect();
    probe_point(rng, &knots)
}

fn osc_probe(rng: &mut Rng8, usco: bool) -> Probe {
    let bounds: Vec<Rational> = [1i64, 4, 8, 16, 32]
        .iter()
        .map(|&d| Rational::new(1, d))
        .collect();
    let mut bound = pick(rng, &bounds);
    let (f, x, osc) = match (usco, rng.gen_bool(0.5)) {
        (false, true) => {
            let x = probe_point(rng, &[]);
            (SymbolicFn::Thomae, x.clone(), thomae_eval(&x))
        }
        (true, true) => {
            let ps = penny_set(rng, 12);
            let pts: Vec<Surd> = ps.members.iter().map(|(_, a)| a.clone()).collect();
            let x = probe_point(rng, &pts);
            let v = penny_eval(&ps.members, &x);
            (SymbolicFn::Penny { set: ps.set }, x, v)
        }
        (_, false) => {
            let pw = pw(rng, if usco { Knot::Usco } else { Knot::Qc }, false);
            let x = pw_points(rng, &pw);
            let o = pw_osc(&pw, &x);
            (pw.to_fn(), x, o)
        }
    };
    if let Some(o) = osc
        .to_rational()
        .filter(|o| o.is_positive() && rng.gen_bool(0.3))
    {
        bound = o;
    }
    Probe {
        f,
        truth: osc < s(&bound),
        shape: ShapeSpec::Osc(x, bound),
    }
}

fn ball_probe(rng: &mut Rng8) -> Probe {
    if rng.gen_bool(0.4) {
        let ps = penny_set(rng, 12);
        let pts: Vec<Surd> = ps.members.iter().map(|(_, a)| a.clone()).collect();
        let x = probe_point(rng, &pts);
        let level = pick(
            rng,
            &[
                Rational::zero(),
                Rational::new(-1, 8),
                Rational::new(1, 8),
                Rational::new(1, 2),
            ],
        );
        // rationals near x are 0, so the ball stays at or above the level iff it is not positive
        let truth = !level.is_positive();
        return Probe {
            f: SymbolicFn::Penny { set: ps.set },
            truth,
            shape: ShapeSpec::Ball(x, level),
        };
    }
    let pw = pw(rng, Knot::Usco, false);
    let x = pw_points(rng, &pw);
    let mut levels: Vec<Rational> = pw.at.clone();
    levels.extend(pw.ends.iter().flat_map(|(a, b)| [a.clone(), b.clone()]));
    let base = pick(rng, &levels);
    let level = match rng.gen_range(0..3) {
        0 => base,
        1 => &base + &Rational::new(1, 16),
        _ => &base - &Rational::new(1, 16),
    };
    let truth = pw_stays_above(&pw, &x, &s(&level));
    Probe {
        f: pw.to_fn(),
        truth,
        shape: ShapeSpec::Ball(x, level),
    }
}

/// Exists-above on quasi-continuous instances, exists-below on usco or
/// quasi-continuous ones.
fn exists_probe(rng: &mut Rng8, above: bool, usco: bool) -> Probe {
    let (p, q) = unit_interval(rng, 16);
    let (f, sup, inf) = if rng.gen_bool(0.35) && !(usco && !above) {
        (SymbolicFn::Thomae, s(&thomae_sup(&p, &q)), Surd::zero())
    } else if usco && rng.gen_bool(0.5) {
        let ps = penny_set(rng, 12);
        let sup = penny_sup(&ps.members, |a| *a >= s(&p) && *a <= s(&q));
        (SymbolicFn::Penny { set: ps.set }, sup, Surd::zero())
    } else {
        let pw = pw(rng, if usco { Knot::Usco } else { Knot::Qc }, false);
        let (hi, lo) = pw_extremes(&pw, &s(&p), false, &s(&q), false);
        (pw.to_fn(), hi, lo)
    };
    if above {
        let t = thresholds(rng, &sup);
        Probe {
            f,
            truth: sup > s(&t),
            shape: ShapeSpec::Above(p, q, t),
        }
    } else {
        let t = thresholds(rng, &inf);
        Probe {
            f,
            truth: inf < s(&t),
            shape: ShapeSpec::Below(p, q, t),
        }
    }
}

fn baire1_probe(rng: &mut Rng8) -> Probe {
    let (p, q) = unit_interval(rng, 16);
    let (seq, sup) = if rng.gen_bool(0.6) {
        let ps = penny_set(rng, 12);
        let sup = penny_sup(&ps.members, |a| *a >= s(&p) && *a <= s(&q));
        (Baire1Seq::Spikes { set: ps.set }, sup)
    } else {
        let spans = random_spans(rng);
        let meets = spans.iter().any(|(a, b)| p < *b && *a < q);
        let open = OpenUnion::new(spans).expect("valid spans");
        (
            Baire1Seq::Ramps { open },
            if meets { Surd::one() } else { Surd::zero() },
        )
    };
    let t = thresholds(rng, &sup);
    let f = SymbolicFn::Baire1 {
        seq,
        with_modulus: true,
    };
    Probe {
        f,
        truth: sup > s(&t),
        shape: ShapeSpec::Baire1(p, q, t),
    }
}

fn rule_key(shape: ShapeKind, needs: ClassSet) -> String {
    format!("{}/{}", shape.name(), needs.names().join("|"))
}

pub fn collapse_soundness(rng: &mut Rng8) -> CriterionReport {
    let mut t = Tally::default();
    let mut seen: BTreeMap<String, u64> = BTreeMap::new();
    let targets: [(ShapeKind, ClassSet); 7] = [
        (ShapeKind::OscBelow, ClassSet::RATIONAL_EXTREMA),
        (ShapeKind::OscBelow, ClassSet::USCO),
        (ShapeKind::ValueBelowOnBall, ClassSet::USCO),
        (ShapeKind::ExistsValueAbove, ClassSet::RATIONAL_EXTREMA),
        (ShapeKind::ExistsValueBelow, ClassSet::USCO),
        (ShapeKind::ExistsValueBelow, ClassSet::RATIONAL_EXTREMA),
        (ShapeKind::Baire1Above, ClassSet::BAIRE1),
    ];
    for (gi, (shape, needs)) in targets.iter().enumerate() {
        let key = rule_key(*shape, *needs);
        let mut attempts = 0;
        while seen.get(&key).copied().unwrap_or(0) < PER_RULE && attempts < 20 * PER_RULE {
            attempts += 1;
            let probe = match gi {
                0 => osc_probe(rng, false),
                1 => osc_probe(rng, true),
                2 => ball_probe(rng),
                3 => exists_probe(rng, true, false),
                4 => exists_probe(rng, false, true),
                5 => exists_probe(rng, false, false),
                _ => baire1_probe(rng),
            };
            let shape = probe.shape();
            let rule = match admit(&shape) {
                Ok(r) => r,
                Err(e) => {
                    t.check(false, || {
                        format!("{key}: {} on {}", brief(&e), probe.f.to_json())
                    });
                    continue;
                }
            };
            let got_key = rule_key(rule.shape, rule.needs);
            *seen.entry(got_key.clone()).or_default() += 1;
            let q = QuantQuery::new(shape, FUEL);
            match evaluate(&q, Mode::Collapsed, &mut Vec::new()) {
                Ok(ans) => t.check(ans.as_bool() == Some(probe.truth), || {
                    format!(
                        "{got_key}: collapsed {:?}, truth {} for {:?} on {}",
                        ans.value,
                        probe.truth,
                        q.shape,
                        probe.f.to_json()
                    )
                }),
                Err(e) => t.check(false, || format!("{got_key}: {}", brief(&e))),
            }
        }
        let n = seen.get(&key).copied().unwrap_or(0);
        t.check(n >= PER_RULE, || {
            format!("{key}: only {n} queries landed on this rule")
        });
    }

    // every (shape, class) pair either has a rule the class satisfies or is refused
    let classes = [
        ClassSet::CONTINUOUS,
        ClassSet::QUASI_CONTINUOUS,
        ClassSet::CLIQUISH,
        ClassSet::SIMPLY_CONTINUOUS,
        ClassSet::USCO,
        ClassSet::LSCO,
        ClassSet::BV,
        ClassSet::NORMALISED_BV,
        ClassSet::REGULATED,
        ClassSet::BAIRE1,
    ];
    let mut refused = Vec::new();
    for shape in ShapeKind::ALL {
        for class in classes {
            let tags = class.saturate();
            let licensed = abyss::oracle::RULES
                .iter()
                .any(|r| r.shape == shape && tags.contains(r.needs));
            match rule_for(shape, tags) {
                Ok(r) => t.check(licensed && tags.contains(r.needs), || {
                    format!("{shape} admitted for {:?}", class.names())
                }),
                Err(AbyssError::Refused { .. }) => {
                    t.check(!licensed, || {
                        format!("{shape} refused for {:?} despite a rule", class.names())
                    });
                    refused.push(format!("{shape}/{}", class.names().join("|")));
                }
                Err(e) => t.check(false, || format!("{shape}: {}", brief(&e))),
            }
        }
    }

    // counterexamples behind the two refusals
    let penny = SymbolicFn::Penny {
        set: CountableSet::canonical(),
    };
    let a0 = Surd::sqrt_half_scaled(0);
    let psi = build_cover_psi(CountableSet::canonical(), false).expect("canonical set");
    let osc_q = QuantQuery::new(
        Shape::OscBelow {
            f: &psi,
            x: a0.clone(),
            bound: Rational::new(1, 4),
        },
        FUEL,
    );
    t.check(
        matches!(admit(&osc_q.shape), Err(AbyssError::Refused { .. })),
        || "oscillation on a cliquish cover function was admitted".into(),
    );
    let above = Shape::ExistsValueAbove {
        f: &penny,
        region: Region::unit(),
        t: Rational::new(1, 4),
    };
    t.check(
        matches!(admit(&above), Err(AbyssError::Refused { .. })),
        || "exists-above on the penny function was admitted".into(),
    );
    let true_osc = penny_eval(&[(0, a0.clone())], &a0);
    let mut rational_osc = Vec::new();
    for n in 1..=20 {
        let seen = penny
            .extremes(&Region::ball(&a0, n), View::Rational)
            .ok()
            .flatten();
        let o = seen.map(|(hi, lo)| &hi - &lo);
        t.check(o.as_ref().is_some_and(|o| o.is_zero()), || {
            format!("rational oscillation on ball {n}: {o:?}")
        });
        rational_osc.push(o.map(|o| o.to_string()).unwrap_or_default());
    }
    t.check(true_osc == s(&Rational::new(1, 2)), || {
        format!("true oscillation {true_osc}")
    });
    let rational_sup = penny.sup(&Region::unit(), View::Rational).ok().flatten();
    t.check(rational_sup.as_ref().is_some_and(|v| v.is_zero()), || {
        format!("rational sup {rational_sup:?}")
    });

    t.finish(
        8,
        "collapsed forms agree with exhaustive truth; unlicensed pairs are refused",
        json!({
            "queries_per_rule": seen,
            "refused_pairs": refused,
            "penny_rational_osc_at_a0": rational_osc.first().cloned().unwrap_or_default(),
            "penny_true_osc_at_a0": true_osc.to_string(),
        }),
    )
}
