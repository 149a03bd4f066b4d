//! Open sets: from a radius representation plus a Baire-1 indicator to an
//! enumeration of rational balls; and separating disjoint closed sets.

use serde::Serialize;

use crate::error::AbyssError;
use crate::exact::{dyadic_interval_enum, Rational, Surd, Truth};
use crate::oracle::{admit, decide, QuantQuery, Shape};
use crate::universe::{Baire1Seq, ClosedSetRep, OpenUnion, Region, SymbolicFn};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RmBall {
    pub center: Rational,
    pub radius: Rational,
}

impl RmBall {
    fn from_ends(p: &Rational, q: &Rational) -> Self {
        RmBall {
            center: p.midpoint(q),
            radius: (q - p) * Rational::new(1, 2),
        }
    }

    pub fn contains(&self, x: &Surd) -> bool {
        (x - &Surd::from(&self.center)).abs() < Surd::from(&self.radius)
    }
}

/// A finite prefix of an enumeration of rational balls whose union is the
/// open set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RmCode {
    pub balls: Vec<RmBall>,
    pub seed: Option<RmBall>,
    pub depth: u32,
    pub prefix_of_infinite: bool,
}

impl RmCode {
    pub fn covers(&self, x: &Surd) -> bool {
        self.balls.iter().any(|b| b.contains(x))
    }
}

/// Grid depth used to look for a first point of the open set and to check
/// the representation against it.
const SEED_DEPTH: u32 = 12;

/// Walks the overlapping dyadic intervals `(p_n, q_n)` of depth at most
/// `depth`, emitting `(p_n, q_n)` when `[p_n, q_n]` lies in `O` and the seed
/// ball otherwise. Containment is `¬(∃x ∈ [p_n, q_n]) 1 - 1_O(x) > 1/2`,
/// answered through the sequence representation of `1_O`.
pub fn rm_code_from_r2_baire1(
    open: &OpenUnion,
    rep: &SymbolicFn,
    depth: u32,
    fuel: u64,
) -> Result<RmCode, AbyssError> {
    admit(&Shape::Baire1Above {
        f: rep,
        region: Region::unit(),
        t: Rational::zero(),
    })?;
    let SymbolicFn::Baire1 { seq, .. } = rep else {
        unreachable!("admitted")
    };
    let one = Surd::one();
    let mut seed = None;
    for d in 0..=SEED_DEPTH.min(fuel as u32) {
        for j in 0..=(1u64 << d) {
            let x = Surd::from(Rational::dyadic(j, d));
            let inside = rep.eval(&x)? == one;
            if inside != open.contains(&x) {
                return Err(AbyssError::Constructor(format!(
                    "the representation disagrees with the open set at {x}"
                )));
            }
            if inside && seed.is_none() {
                let r = open.radius(&x).expect("x lies in the open set");
                seed = Some(RmBall {
                    center: x.to_rational().expect("grid point"),
                    radius: r,
                });
            }
        }
    }
    let Some(seed) = seed else {
        return Ok(RmCode {
            balls: Vec::new(),
            seed: None,
            depth,
            prefix_of_infinite: false,
        });
    };
    let complement = SymbolicFn::Baire1 {
        seq: Baire1Seq::Affine {
            scale: Rational::integer(-1),
            shift: Rational::one(),
            inner: Box::new(seq.clone()),
        },
        with_modulus: true,
    };
    let count: usize = (1..=depth).map(|d| (1usize << d) - 1).sum();
    let mut balls = Vec::with_capacity(count);
    for (p, q) in dyadic_interval_enum().take(count) {
        let region = Region::closed_q(&p, &q);
        let r = decide(&QuantQuery::new(
            Shape::Baire1Above {
                f: &complement,
                region,
                t: Rational::new(1, 2),
            },
            fuel,
        ))?;
        match r.value {
            Truth::No => balls.push(RmBall::from_ends(&p, &q)),
            Truth::Yes => balls.push(seed.clone()),
            Truth::Unknown => return Err(AbyssError::fuel(r.fuel_spent, None)),
        }
    }
    Ok(RmCode {
        balls,
        seed: Some(seed),
        depth,
        prefix_of_infinite: true,
    })
}

/// The sequence representation of `1_O` used by default: ramps
/// `min(1, 2^n d(x, complement))` with their settling stage.
pub fn indicator_rep(open: &OpenUnion) -> SymbolicFn {
    SymbolicFn::Baire1 {
        seq: Baire1Seq::Ramps { open: open.clone() },
        with_modulus: true,
    }
}

/// `1_{C1}`, which is usco and takes the value `i` exactly on `C_i`, for
/// disjoint closed `C0`, `C1`.
pub fn usco_separator(c0: &ClosedSetRep, c1: &ClosedSetRep) -> Result<SymbolicFn, AbyssError> {
    c0.validate()?;
    c1.validate()?;
    if let Some(x) = c0.common_point(c1) {
        return Err(AbyssError::Intersecting(format!(
            "both closed sets contain {x}"
        )));
    }
    Ok(SymbolicFn::Indicator { closed: c1.clone() })
}
