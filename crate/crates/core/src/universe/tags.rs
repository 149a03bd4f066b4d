use bitflags::bitflags;
use serde::{Deserialize, Serialize};

bitflags! {
    /// Function classes a universe member is known to belong to.
    #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
    pub struct ClassSet: u16 {
        const CONTINUOUS = 1 << 0;
        const QUASI_CONTINUOUS = 1 << 1;
        const CLIQUISH = 1 << 2;
        const SIMPLY_CONTINUOUS = 1 << 3;
        const USCO = 1 << 4;
        const LSCO = 1 << 5;
        const BV = 1 << 6;
        const NORMALISED_BV = 1 << 7;
        const REGULATED = 1 << 8;
        const BAIRE1 = 1 << 9;
        /// Sup and inf over every open ball and every interval with rational
        /// endpoints equal those over its rationals.
        const RATIONAL_EXTREMA = 1 << 10;
        /// Every value is strictly positive.
        const POSITIVE = 1 << 11;
        const BOUNDED_BELOW = 1 << 12;
    }
}

impl ClassSet {
    pub fn names(self) -> Vec<&'static str> {
        self.iter_names().map(|(n, _)| n).collect()
    }

    /// Closure under the implications every function satisfies.
    pub fn saturate(self) -> ClassSet {
        let mut t = self;
        if t.contains(ClassSet::CONTINUOUS) {
            t |= ClassSet::QUASI_CONTINUOUS
                | ClassSet::USCO
                | ClassSet::LSCO
                | ClassSet::BAIRE1
                | ClassSet::RATIONAL_EXTREMA
                | ClassSet::REGULATED;
        }
        if t.contains(ClassSet::QUASI_CONTINUOUS) {
            t |= ClassSet::CLIQUISH | ClassSet::SIMPLY_CONTINUOUS | ClassSet::RATIONAL_EXTREMA;
        }
        if t.contains(ClassSet::NORMALISED_BV) {
            t |= ClassSet::BV;
        }
        if t.contains(ClassSet::BV) {
            t |= ClassSet::REGULATED;
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continuity_implies_the_rest() {
        let t = ClassSet::CONTINUOUS.saturate();
        assert!(t.contains(
            ClassSet::QUASI_CONTINUOUS | ClassSet::CLIQUISH | ClassSet::USCO | ClassSet::LSCO
        ));
        assert!(ClassSet::USCO.names() == vec!["USCO"]);
    }
}
