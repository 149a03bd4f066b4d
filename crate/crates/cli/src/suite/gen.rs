//! Seeded random instances that keep their defining parameters, so the
//! brute-force side never has to look inside a `SymbolicFn`.

use abyss::universe::{Affine, Breakpoint, Piecewise, Policy};
use abyss::{CountableSet, Rational, Surd, SymbolicFn};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// A rational in `[0, 1]` with denominator at most `max_den`.
pub fn unit_rational(rng: &mut Rng8, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    q(rng.gen_range(0..=d), d)
}

/// `p < q` in `[0, 1]`.
pub fn unit_interval(rng: &mut Rng8, max_den: i64) -> (Rational, Rational) {
    loop {
        let (a, b) = (unit_rational(rng, max_den), unit_rational(rng, max_den));
        if a != b {
            return if a < b { (a, b) } else { (b, a) };
        }
    }
}

/// `r + s sqrt2` strictly inside `(0, 1)`, irrational.
pub fn unit_irrational(rng: &mut Rng8) -> Surd {
    loop {
        let s = q(
            if rng.gen_bool(0.5) { 1 } else { -1 },
            1 << rng.gen_range(2..7),
        );
        let r = q(rng.gen_range(-64..=128), 128);
        let x = Surd::new(r, s);
        if x > Surd::from(q(1, 64)) && x < Surd::from(q(63, 64)) {
            return x;
        }
    }
}

/// Piecewise affine data: `ends[j]` are the one-sided limits of piece `j` at
/// its left and right knot, `at[i]` the value at interior knot `i`.
#[derive(Clone, Debug)]
pub struct Pw {
    pub knots: Vec<Rational>,
    pub ends: Vec<(Rational, Rational)>,
    pub at: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Knot {
    /// Value is one of the two limits.
    Qc,
    /// Value at least both limits.
    Usco,
    /// Value at most both limits.
    Lsco,
}

impl Pw {
    /// Knots including 0 and 1.
    pub fn all_knots(&self) -> Vec<Rational> {
        let mut k = vec![Rational::zero()];
        k.extend(self.knots.iter().cloned());
        k.push(Rational::one());
        k
    }

    pub fn to_fn(&self) -> SymbolicFn {
        let ks = self.all_knots();
        let pieces = self
            .ends
            .iter()
            .enumerate()
            .map(|(j, (a, b))| {
                let slope = (b - a) / (&ks[j + 1] - &ks[j]);
                let intercept = a - &(&slope * &ks[j]);
                Affine::new(slope, Surd::from(intercept))
            })
            .collect();
        let bps = self
            .knots
            .iter()
            .zip(&self.at)
            .map(|(k, v)| Breakpoint {
                at: Surd::from(k),
                policy: Policy::Value(Surd::from(v)),
            })
            .collect();
        SymbolicFn::Piecewise(Piecewise::new(bps, pieces).expect("sorted knots"))
    }
}

fn distinct_knots(rng: &mut Rng8, n: usize) -> Vec<Rational> {
    let mut ks: Vec<Rational> = Vec::new();
    while ks.len() < n {
        let d = rng.gen_range(2..=12);
        let x = q(rng.gen_range(1..d), d);
        if !ks.contains(&x) {
            ks.push(x);
        }
    }
    ks.sort();
    ks
}

fn value(rng: &mut Rng8, lo: i64, hi: i64, den: i64) -> Rational {
    q(rng.gen_range(lo..=hi), den)
}

/// Values in `[-1, 1]`, or in `[1/16, 1/2]` when `positive`.
pub fn pw(rng: &mut Rng8, kind: Knot, positive: bool) -> Pw {
    let n = rng.gen_range(0..=3);
    let knots = distinct_knots(rng, n);
    let draw = |rng: &mut Rng8| {
        if positive {
            value(rng, 2, 16, 32)
        } else {
            value(rng, -8, 8, 8)
        }
    };
    let ends: Vec<(Rational, Rational)> = (0..=n).map(|_| (draw(rng), draw(rng))).collect();
    let at = (0..n)
        .map(|i| {
            let (l, r) = (ends[i].1.clone(), ends[i + 1].0.clone());
            match kind {
                Knot::Qc => {
                    if rng.gen_bool(0.5) {
                        l
                    } else {
                        r
                    }
                }
                Knot::Usco => l.max(r) + q(rng.gen_range(0..=2), 8),
                Knot::Lsco => {
                    let m = l.min(r);
                    let drop = if positive {
                        q(rng.gen_range(0..=1), 64)
                    } else {
                        q(rng.gen_range(0..=2), 8)
                    };
                    m - drop
                }
            }
        })
        .collect();
    Pw { knots, ends, at }
}

/// A penny set: a canonical prefix or up to `max` random irrationals.
#[derive(Clone, Debug)]
pub struct PennySet {
    pub set: CountableSet,
    pub members: Vec<(u64, Surd)>,
}

pub fn penny_set(rng: &mut Rng8, max: usize) -> PennySet {
    let len = rng.gen_range(1..=max);
    if rng.gen_bool(0.5) {
        let members = (0..len as u32)
            .map(|n| (u64::from(n), Surd::sqrt_half_scaled(n)))
            .collect();
        PennySet {
            set: CountableSet::canonical_prefix(len as u64),
            members,
        }
    } else {
        random_finite_set(rng, len)
    }
}

pub fn random_finite_set(rng: &mut Rng8, len: usize) -> PennySet {
    let mut pts: Vec<Surd> = Vec::new();
    while pts.len() < len {
        let x = unit_irrational(rng);
        if !pts.contains(&x) {
            pts.push(x);
        }
    }
    let members = pts
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (i as u64, p))
        .collect();
    PennySet {
        set: CountableSet::finite(pts).expect("distinct points in [0,1]"),
        members,
    }
}

/// `f(x) = c x + sum of h_i over jumps b_i <= x`.
#[derive(Clone, Debug)]
pub struct Stair {
    pub slope: Rational,
    pub jumps: Vec<(Rational, Rational)>,
}

/// Jumps sit on multiples of 1/32 and the slope is at most 1/2, so every
/// value on the depth-10 grid is a multiple of 1/4096.
pub fn stair(rng: &mut Rng8) -> Stair {
    let n = rng.gen_range(1..=3);
    let mut at: Vec<Rational> = Vec::new();
    while at.len() < n {
        let b = q(rng.gen_range(1..32), 32);
        if !at.contains(&b) {
            at.push(b);
        }
    }
    at.sort();
    let jumps = at
        .into_iter()
        .map(|b| {
            let mut h = 0;
            while h == 0 {
                h = rng.gen_range(-4..=4);
            }
            (b, q(h, 4))
        })
        .collect();
    Stair {
        slope: value(rng, -2, 2, 4),
        jumps,
    }
}

impl Stair {
    pub fn to_fn(&self) -> SymbolicFn {
        let ks: Vec<Rational> = self.jumps.iter().map(|(b, _)| b.clone()).collect();
        let mut level = Rational::zero();
        let mut pieces = vec![Affine::new(self.slope.clone(), Surd::zero())];
        for (_, h) in &self.jumps {
            level = level + h;
            pieces.push(Affine::new(self.slope.clone(), Surd::from(&level)));
        }
        let bps = ks
            .into_iter()
            .map(|b| Breakpoint {
                at: Surd::from(b),
                policy: Policy::Right,
            })
            .collect();
        SymbolicFn::Piecewise(Piecewise::new(bps, pieces).expect("sorted jumps"))
    }
}

/// A random point for probing: rational, irrational, or one of `extra`.
pub fn probe_point(rng: &mut Rng8, extra: &[Surd]) -> Surd {
    match rng.gen_range(0..3) {
        0 => Surd::from(unit_rational(rng, 24)),
        1 if !extra.is_empty() => extra.choose(rng).expect("nonempty").clone(),
        _ => unit_irrational(rng),
    }
}
