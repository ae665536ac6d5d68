use num_traits::{Signed, Zero};

use super::{CallMeter, HidingOracle, OracleToken, Predicate};
use crate::error::Result;
use crate::exact::partial::partial_fractions;
use crate::exact::rational::{format_rat, Rat};

/// Hides the subgroup of ℚ generated by 1 and {1/p : p accepted}: drops the
/// integer part and every exponent-one term r/p with p accepted from the
/// per-pair partial fraction form.
#[derive(Clone, Debug)]
pub struct RationalOracle {
    accepted: Predicate,
    meter: CallMeter,
}

impl RationalOracle {
    pub fn new(accepted: Predicate) -> Self {
        RationalOracle { accepted, meter: CallMeter::default() }
    }

    pub fn canonical(&self, x: &Rat) -> Result<Rat> {
        let pf = partial_fractions(x)?;
        Ok(pf
            .terms
            .iter()
            .filter(|t| !(t.k == 1 && self.accepted.accepts(&t.p)))
            .fold(Rat::zero(), |acc, t| acc + t.value()))
    }
}

impl HidingOracle for RationalOracle {
    type Elem = Rat;

    fn eval(&self, x: &Rat) -> Result<OracleToken> {
        self.meter.record(&(x.numer().abs() + x.denom()));
        Ok(OracleToken::from_text(format_rat(&self.canonical(x)?)))
    }

    fn meter(&self) -> &CallMeter {
        &self.meter
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn examples() {
        let none = RationalOracle::new(Predicate::Empty);
        assert_eq!(none.eval(&rat(1, 360)).unwrap().to_string(), "721/360");
        let five = RationalOracle::new(Predicate::set([5]));
        assert_eq!(five.eval(&rat(1, 360)).unwrap().to_string(), "101/72");
        assert_eq!(five.eval(&rat(1, 360)).unwrap(), five.eval(&(rat(1, 360) + rat(1, 5))).unwrap());
        assert_eq!(five.eval(&rat(1, 5)).unwrap(), five.eval(&rat(0, 1)).unwrap());
        assert_eq!(five.eval(&rat(1, 5)).unwrap().to_string(), "0");
    }

    #[test]
    fn canonical_map_is_idempotent() {
        let o = RationalOracle::new(Predicate::set([2, 7]));
        for (p, q) in [(1, 360), (-13, 98), (5, 1), (22, 7)] {
            let c = o.canonical(&rat(p, q)).unwrap();
            assert_eq!(o.canonical(&c).unwrap(), c);
        }
    }
}
