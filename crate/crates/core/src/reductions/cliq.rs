use super::{certify, Realiser};
use crate::error::AbyssError;
use crate::exact::{log2_ceil_inv, DyadicInterval, Rational, Surd};
use crate::universe::{CountableSet, Region, SymbolicFn, View};

type CliqFn = dyn Fn(&Surd, u32, u32) -> Result<(Rational, Rational), AbyssError>;

/// `F(x, k, N) = (c, d)` with `(c, d)` inside `B(x, 2^-N)` and every pair of
/// values on `(c, d)` closer than `2^-k`.
pub struct CliqModulusOracle {
    name: String,
    inner: Box<CliqFn>,
}

impl std::fmt::Debug for CliqModulusOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CliqModulusOracle({})", self.name)
    }
}

impl CliqModulusOracle {
    pub fn from_fn(
        name: &str,
        f: impl Fn(&Surd, u32, u32) -> Result<(Rational, Rational), AbyssError> + 'static,
    ) -> Self {
        CliqModulusOracle {
            name: name.into(),
            inner: Box::new(f),
        }
    }

    /// For the penny function of `set`: a dyadic interval in the widest gap
    /// between the members of index below `k` near `x`.
    pub fn canonical(set: CountableSet) -> Self {
        Self::from_fn("canonical", move |x, k, n| {
            let r = Rational::pow2_neg(n);
            let fd = x.floor_dyadic(n + 2);
            let half = &r * &Rational::new(1, 2);
            let (lo, hi) = (Surd::from(&fd - &half), Surd::from(&fd + &half));
            let mut cuts = vec![lo.clone()];
            if k > 0 {
                let inside = set.members_in(
                    &Region::open(lo.clone(), hi.clone()),
                    Some(u64::from(k) - 1),
                );
                cuts.extend(inside.into_iter().map(|(_, p)| p));
            }
            cuts.push(hi);
            cuts.sort();
            let (a, b) = cuts
                .windows(2)
                .map(|w| (w[0].clone(), w[1].clone()))
                .max_by(|p, q| (&p.1 - &p.0).cmp(&(&q.1 - &q.0)).then(q.0.cmp(&p.0)))
                .expect("two cuts");
            let depth = log2_ceil_inv(&(&b - &a)) + 2;
            let w = Rational::pow2_neg(depth);
            let c = a.floor_dyadic(depth) + &w;
            let d = &c + &w;
            Ok((c, d))
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn query(&self, x: &Surd, k: u32, n: u32) -> Result<(Rational, Rational), AbyssError> {
        (self.inner)(x, k, n)
    }
}

/// Least `m` with `2^-m < d`.
fn least_below(d: &Rational) -> u32 {
    let m = log2_ceil_inv(&Surd::from(d));
    if Rational::pow2_neg(m) == *d {
        m + 1
    } else {
        m
    }
}

/// Checks one answer of the modulus against the penny function, seeing
/// members up to index `cap`.
fn spot_check(
    f: &SymbolicFn,
    x: &Surd,
    k: u32,
    n: u32,
    c: &Rational,
    d: &Rational,
    cap: u64,
) -> Result<(), AbyssError> {
    let r = Surd::from(Rational::pow2_neg(n));
    let (cs, ds) = (Surd::from(c), Surd::from(d));
    if c >= d || cs < x - &r || ds > x + &r {
        return Err(AbyssError::InvalidModulus(format!(
            "F({x}, {k}, {n}) = ({c}, {d}) is not inside B({x}, 2^-{n})"
        )));
    }
    if let Some((sup, inf)) = f.extremes(&Region::open(cs, ds), View::Probed(cap))? {
        if &sup - &inf >= Surd::from(Rational::pow2_neg(k)) {
            return Err(AbyssError::InvalidModulus(format!(
                "F({x}, {k}, {n}) = ({c}, {d}) carries values {inf} and {sup}, at least 2^-{k} apart"
            )));
        }
    }
    Ok(())
}

/// Nested closed intervals `C_0 = [0,1] ⊃ C_1 ⊃ ...`: `C_{j+1}` has the
/// midpoint of `F(mid C_j, j+1, N_j)` and half its length, `N_j` least with
/// `2^-N_j < |C_j| / 2`. A member of index `j` is outside `C_{j+1}`.
pub fn realiser_from_cliq_modulus(
    oracle: &CliqModulusOracle,
    set: &CountableSet,
    k: u32,
    cert: u64,
) -> Result<Realiser, AbyssError> {
    set.validate()?;
    let f = SymbolicFn::Penny { set: set.clone() };
    let levels = u64::from(k).max(cert + 1);
    let mut stages = vec![DyadicInterval::unit()];
    let mut transcript = vec![format!("modulus {}", oracle.name())];
    for j in 0..levels {
        let cur = stages.last().expect("nonempty");
        let half = cur.width() * Rational::new(1, 2);
        let n = least_below(&half);
        let mid = Surd::from(cur.midpoint());
        let level =
            u32::try_from(j + 1).map_err(|_| AbyssError::Domain("too many levels".into()))?;
        let (c, d) = oracle.query(&mid, level, n)?;
        spot_check(&f, &mid, level, n, &c, &d, cert.max(j))?;
        let centre = c.midpoint(&d);
        let quarter = (&d - &c) * Rational::new(1, 4);
        let next = DyadicInterval::new(&centre - &quarter, &centre + &quarter)?;
        transcript.push(format!(
            "C_{} = {next:?} from F({mid}, {level}, {n}) = ({c}, {d})",
            j + 1
        ));
        stages.push(next);
    }
    let last = stages.last().expect("nonempty").clone();
    let point = last.midpoint();
    let checks = certify(set, cert, &point, |n| stages[n as usize + 1].clone())?;
    Ok(Realiser {
        method: "cliquishness",
        point,
        interval: last,
        certified_upto: cert,
        checks,
        extracted: Vec::new(),
        transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_modulus_realises() {
        let set = CountableSet::canonical();
        let r =
            realiser_from_cliq_modulus(&CliqModulusOracle::canonical(set.clone()), &set, 16, 16)
                .unwrap();
        assert!(r.verify());
        assert_eq!(r.checks.len(), 17);
        assert!(r.interval.width() <= Rational::pow2_neg(16));
    }

    #[test]
    fn singleton_is_gone_by_c2() {
        let a = Surd::sqrt_half_scaled(0);
        let set = CountableSet::finite(vec![a.clone()]).unwrap();
        let r = realiser_from_cliq_modulus(&CliqModulusOracle::canonical(set.clone()), &set, 4, 0)
            .unwrap();
        assert!(r.checks[0].excluded_by.contains(&Surd::from(&r.point)));
        assert!(!r.checks[0].excluded_by.contains(&a));
    }

    #[test]
    fn whole_interval_is_not_a_modulus() {
        let set = CountableSet::canonical();
        let bad =
            CliqModulusOracle::from_fn("unit", |_, _, _| Ok((Rational::zero(), Rational::one())));
        match realiser_from_cliq_modulus(&bad, &set, 4, 4) {
            Err(AbyssError::InvalidModulus(msg)) => assert!(msg.contains("not inside"), "{msg}"),
            other => panic!("expected invalid modulus, got {other:?}"),
        }
        let whole_ball = CliqModulusOracle::from_fn("ball", |x, _, n| {
            let c = x.to_rational().expect("rational midpoints");
            Ok((&c - &Rational::pow2_neg(n), &c + &Rational::pow2_neg(n)))
        });
        match realiser_from_cliq_modulus(&whole_ball, &set, 4, 4) {
            Err(AbyssError::InvalidModulus(msg)) => assert!(msg.contains("apart"), "{msg}"),
            other => panic!("expected invalid modulus, got {other:?}"),
        }
    }
}
