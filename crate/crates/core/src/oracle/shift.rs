use num_bigint::BigInt;

use super::{CallMeter, HidingOracle, OracleToken};
use crate::error::{Error, Result};

/// Joint oracle on ℤᵏ × {0, 1}: f(x, 0) = base(x) and f(x, 1) = base(x − s).
#[derive(Clone, Debug)]
pub struct ShiftPairOracle<O> {
    base: O,
    shift: Vec<BigInt>,
    meter: CallMeter,
}

impl<O: HidingOracle<Elem = [BigInt]>> ShiftPairOracle<O> {
    pub fn new(base: O, shift: Vec<BigInt>) -> Self {
        ShiftPairOracle { base, shift, meter: CallMeter::default() }
    }

    pub fn base(&self) -> &O {
        &self.base
    }
}

impl<O: HidingOracle<Elem = [BigInt]>> HidingOracle for ShiftPairOracle<O> {
    type Elem = (Vec<BigInt>, u8);

    fn eval(&self, (x, a): &(Vec<BigInt>, u8)) -> Result<OracleToken> {
        if x.len() != self.shift.len() {
            return Err(Error::Dimension(format!("expected {} coordinates, got {}", self.shift.len(), x.len())));
        }
        self.meter.record(&x.iter().map(num_traits::Signed::abs).sum());
        match a {
            0 => self.base.eval(x),
            1 => {
                let y: Vec<BigInt> = x.iter().zip(&self.shift).map(|(a, b)| a - b).collect();
                self.base.eval(&y)
            }
            _ => Err(Error::InvalidArgument(format!("shift selector must be 0 or 1, got {a}"))),
        }
    }

    fn meter(&self) -> &CallMeter {
        &self.meter
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::oracle::{integer_box, BrickOracle};

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn zero_shift_and_full_lattice() {
        let o = ShiftPairOracle::new(BrickOracle::new(Lattice::from_columns(2, &[vec![2, 1]])), v(&[0, 0]));
        for x in integer_box(2, -2, 2) {
            assert_eq!(o.eval(&(x.clone(), 0)).unwrap(), o.eval(&(x, 1)).unwrap());
        }
        let c = ShiftPairOracle::new(BrickOracle::new(Lattice::full(2)), v(&[1, 5]));
        let t = c.eval(&(v(&[0, 0]), 0)).unwrap();
        assert!(integer_box(2, -2, 2).into_iter().all(|x| c.eval(&(x, 1)).unwrap() == t));
    }

    #[test]
    fn shift_relation_on_box() {
        let l = Lattice::from_columns(2, &[vec![3, 0], vec![0, 3]]);
        let s = v(&[1, 2]);
        let o = ShiftPairOracle::new(BrickOracle::new(l), s.clone());
        for x in integer_box(2, -4, 4) {
            let xs: Vec<BigInt> = x.iter().zip(&s).map(|(a, b)| a - b).collect();
            assert_eq!(o.eval(&(x, 1)).unwrap(), o.eval(&(xs, 0)).unwrap());
        }
        assert!(o.eval(&(v(&[1, 1]), 2)).is_err());
    }
}
