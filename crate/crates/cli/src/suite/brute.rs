//! Reference values computed straight from instance parameters by
//! exhaustive case analysis, sharing nothing with the algorithms.

use abyss::{Rational, Surd};
use num_bigint::BigInt;

use super::gen::{Pw, Stair};

fn s(r: &Rational) -> Surd {
    Surd::from(r)
}

fn piece_at(p: &Pw, j: usize, x: &Surd) -> Surd {
    let ks = p.all_knots();
    let (a, b) = &p.ends[j];
    let t = (x - &s(&ks[j])).scale(&(Rational::one() / (&ks[j + 1] - &ks[j])));
    &s(a) + &t.scale(&(b - a))
}

pub fn pw_eval(p: &Pw, x: &Surd) -> Surd {
    let ks = p.all_knots();
    if let Some(i) = p.knots.iter().position(|k| s(k) == *x) {
        return s(&p.at[i]);
    }
    let j = (0..p.ends.len())
        .find(|&j| *x <= s(&ks[j + 1]))
        .expect("x in [0,1]");
    piece_at(p, j, x)
}

/// `(f(x-), f(x+))`, absent at the ends of [0,1].
pub fn pw_limits(p: &Pw, x: &Surd) -> (Option<Surd>, Option<Surd>) {
    let ks = p.all_knots();
    let n = p.ends.len();
    let left = (x.is_positive()).then(|| {
        let j = (0..n).find(|&j| *x <= s(&ks[j + 1])).expect("x in [0,1]");
        piece_at(p, j, x)
    });
    let right = (*x < Surd::one()).then(|| {
        let j = (0..n).rev().find(|&j| *x >= s(&ks[j])).expect("x in [0,1]");
        piece_at(p, j, x)
    });
    (left, right)
}

pub fn pw_osc(p: &Pw, x: &Surd) -> Surd {
    let (l, r) = pw_limits(p, x);
    let mut vals = vec![pw_eval(p, x)];
    vals.extend(l);
    vals.extend(r);
    let hi = vals.iter().max().expect("nonempty").clone();
    let lo = vals.iter().min().expect("nonempty").clone();
    &hi - &lo
}

/// Exact `(sup, inf)` over the interval from `lo` to `hi` with the given
/// open ends, which must meet [0,1].
pub fn pw_extremes(p: &Pw, lo: &Surd, lo_open: bool, hi: &Surd, hi_open: bool) -> (Surd, Surd) {
    let ks = p.all_knots();
    let lo_c = lo.clone().max(Surd::zero());
    let hi_c = hi.clone().min(Surd::one());
    let lo_open = lo_open && *lo >= Surd::zero();
    let hi_open = hi_open && *hi <= Surd::one();
    let inside = |x: &Surd| {
        (if lo_open { *x > lo_c } else { *x >= lo_c })
            && (if hi_open { *x < hi_c } else { *x <= hi_c })
    };
    let mut vals = Vec::new();
    for j in 0..p.ends.len() {
        let a = lo_c.clone().max(s(&ks[j]));
        let b = hi_c.clone().min(s(&ks[j + 1]));
        if a < b {
            vals.push(piece_at(p, j, &a));
            vals.push(piece_at(p, j, &b));
        }
    }
    for k in &ks {
        if inside(&s(k)) {
            vals.push(pw_eval(p, &s(k)));
        }
    }
    for e in [&lo_c, &hi_c] {
        if inside(e) {
            vals.push(pw_eval(p, e));
        }
    }
    let hi = vals.iter().max().expect("region meets [0,1]").clone();
    let lo = vals.iter().min().expect("region meets [0,1]").clone();
    (hi, lo)
}

/// Whether `f >= level` on some ball around `x`.
pub fn pw_stays_above(p: &Pw, x: &Surd, level: &Surd) -> bool {
    if pw_eval(p, x) < *level {
        return false;
    }
    let ks = p.all_knots();
    let n = p.ends.len();
    let (l, r) = pw_limits(p, x);
    let slope = |j: usize| {
        let (a, b) = &p.ends[j];
        (b - a).signum()
    };
    use std::cmp::Ordering::*;
    let left_ok = match l {
        None => true,
        Some(v) => {
            let j = (0..n).find(|&j| *x <= s(&ks[j + 1])).expect("x in [0,1]");
            v > *level || (v == *level && slope(j) != Greater)
        }
    };
    let right_ok = match r {
        None => true,
        Some(v) => {
            let j = (0..n).rev().find(|&j| *x >= s(&ks[j])).expect("x in [0,1]");
            v > *level || (v == *level && slope(j) != Less)
        }
    };
    left_ok && right_ok
}

/// `1/d` for the least `d` with some `n/d` in `[p, q]`.
pub fn thomae_sup(p: &Rational, q: &Rational) -> Rational {
    let mut d = 1i64;
    loop {
        let dd = Rational::integer(d);
        if (p * &dd).ceil() <= (q * &dd).floor() {
            return Rational::new(1, d);
        }
        d += 1;
    }
}

pub fn thomae_eval(x: &Surd) -> Surd {
    match x.to_rational() {
        Some(r) => Surd::from(Rational::new(1, 1) / Rational::from_bigint(r.denom().clone())),
        None => Surd::zero(),
    }
}

/// Largest `2^-(n+1)` over the listed members inside the region, else 0.
pub fn penny_sup(members: &[(u64, Surd)], inside: impl Fn(&Surd) -> bool) -> Surd {
    members
        .iter()
        .filter(|(_, a)| inside(a))
        .map(|(n, _)| Surd::from(Rational::pow2_neg(*n as u32 + 1)))
        .max()
        .unwrap_or_else(Surd::zero)
}

pub fn penny_eval(members: &[(u64, Surd)], x: &Surd) -> Surd {
    penny_sup(members, |a| a == x)
}

/// Do the open intervals `(c - r, c + r)` cover [0,1]?
pub fn sweep_covers(balls: &[(Surd, Surd)]) -> bool {
    let mut reach = Surd::zero();
    loop {
        let best = balls
            .iter()
            .filter(|(c, r)| (c - r) < reach && reach < (c + r))
            .map(|(c, r)| c + r)
            .max();
        match best {
            None => return false,
            Some(b) if b > Surd::one() => return true,
            Some(b) => reach = b,
        }
    }
}

impl Stair {
    pub fn eval(&self, x: &Rational) -> Rational {
        self.jumps
            .iter()
            .filter(|(b, _)| b <= x)
            .fold(&self.slope * x, |acc, (_, h)| acc + h)
    }

    pub fn variation(&self) -> Rational {
        self.jumps
            .iter()
            .fold(self.slope.abs(), |acc, (_, h)| acc + h.abs())
    }
}

/// Largest `sum |v[i_{t+1}] - v[i_t]|` over chains of at most `max_points`
/// indices running from the first to the last, by dynamic programming.
pub fn partition_variation(vals: &[i128], max_points: usize) -> i128 {
    let n = vals.len();
    // best[j]: chains with the current number of points ending at j
    let mut best: Vec<Option<i128>> = vec![None; n];
    best[0] = Some(0);
    let mut top = if n == 1 { 0 } else { i128::MIN };
    for _ in 1..max_points {
        let mut next: Vec<Option<i128>> = vec![None; n];
        for j in 1..n {
            next[j] = (0..j)
                .filter_map(|i| best[i].map(|b| b + (vals[j] - vals[i]).abs()))
                .max();
        }
        best = next;
        if let Some(v) = best[n - 1] {
            top = top.max(v);
        }
    }
    top
}

/// The first `n` binary digits of `sqrt2 / 2`, from the integer square root
/// of `2^(2n-1)`.
pub fn sqrt_half_bits(n: u32) -> String {
    let r = (BigInt::from(1) << (2 * n as usize - 1)).sqrt();
    format!("{:0width$b}", r, width = n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_of_sqrt_half() {
        // 0.70710678 = 0.10110101000001001111...
        assert_eq!(sqrt_half_bits(20), "10110101000001001111");
    }

    #[test]
    fn sweep() {
        let b = |c: (i64, i64), r: (i64, i64)| {
            (
                Surd::from(Rational::new(c.0, c.1)),
                Surd::from(Rational::new(r.0, r.1)),
            )
        };
        assert!(sweep_covers(&[
            b((0, 1), (1, 2)),
            b((1, 2), (1, 4)),
            b((1, 1), (1, 3))
        ]));
        assert!(!sweep_covers(&[b((0, 1), (1, 2)), b((1, 1), (1, 2))]));
    }

    #[test]
    fn partitions() {
        // |x - 1/2| sampled at quarters
        let vals = [2, 1, 0, 1, 2];
        assert_eq!(partition_variation(&vals, 3), 4);
        assert_eq!(partition_variation(&vals, 2), 0);
        assert_eq!(partition_variation(&[0, 3, -1, 2], 10), 3 + 4 + 3);
    }
}
