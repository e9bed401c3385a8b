use std::collections::BTreeMap;

use super::{Poly, RatExpr, Symbol};
use crate::scalar::Field;

/// A derivation on the rational-expression ring, fixed by its value on
/// each symbol. Symbols without an entry differentiate to zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Derivation<C> {
    entries: BTreeMap<Symbol, RatExpr<C>>,
}

impl<C: Field> Derivation<C> {
    pub fn new() -> Self {
        Derivation { entries: BTreeMap::new() }
    }

    pub fn with(mut self, s: Symbol, value: RatExpr<C>) -> Self {
        self.set(s, value);
        self
    }

    pub fn set(&mut self, s: Symbol, value: RatExpr<C>) {
        if value.is_zero() {
            self.entries.remove(&s);
        } else {
            self.entries.insert(s, value);
        }
    }

    pub fn get(&self, s: Symbol) -> Option<&RatExpr<C>> {
        self.entries.get(&s)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Symbol, &RatExpr<C>)> {
        self.entries.iter().map(|(s, e)| (*s, e))
    }

    pub fn apply_poly(&self, p: &Poly<C>) -> RatExpr<C> {
        let mut acc = RatExpr::zero();
        for (&s, ds) in &self.entries {
            if !p.contains(s) {
                continue;
            }
            let dp: RatExpr<C> = p.partial(s).into();
            acc = &acc + &(&dp * ds);
        }
        acc
    }

    pub fn apply(&self, e: &RatExpr<C>) -> RatExpr<C> {
        e.differentiate(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::QExpr;

    #[test]
    fn power_rule() {
        let x = Symbol(0);
        let d = Derivation::new().with(x, QExpr::one());
        assert_eq!(d.apply(&QExpr::var(x).pow(2)), QExpr::var(x).scale(&int(2)));
    }

    #[test]
    fn exponential_generator_rule() {
        let e = Symbol(3);
        let a2 = Symbol(5);
        let rate = QExpr::var(a2);
        let d = Derivation::new().with(e, &rate * &QExpr::var(e));
        assert_eq!(d.apply(&QExpr::var(e)), &QExpr::var(a2) * &QExpr::var(e));
    }

    #[test]
    fn quotient_rule() {
        let x = Symbol(0);
        let d = Derivation::new().with(x, QExpr::one());
        let inv = QExpr::var(x).recip().unwrap();
        let want = -&QExpr::var(x).pow(2).recip().unwrap();
        assert!(d.apply(&inv).equiv(&want));
    }
}
