use super::{ratexpr::substitute_poly, Bindings, Poly, RatExpr, SymError, Symbol};
use crate::scalar::Field;

/// A linear parameter relation applied by eliminating one symbol, e.g.
/// `alpha1 := 1 - alpha0 - alpha2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterRelation<C> {
    pub eliminated: Symbol,
    pub replacement: Poly<C>,
}

impl<C: Field> ParameterRelation<C> {
    /// `sum(params) = 1`, eliminating `params[eliminate]`.
    pub fn unit_sum(params: &[Symbol], eliminate: usize) -> Self {
        let mut replacement = Poly::one();
        for (i, &p) in params.iter().enumerate() {
            if i != eliminate {
                replacement = &replacement - &Poly::var(p);
            }
        }
        ParameterRelation { eliminated: params[eliminate], replacement }
    }

    fn bindings(&self) -> Bindings<C> {
        [(self.eliminated, self.replacement.clone().into())].into()
    }

    pub fn apply_poly(&self, p: &Poly<C>) -> Poly<C> {
        if !p.contains(self.eliminated) {
            return p.clone();
        }
        // Polynomial replacement: the substituted value is again a polynomial.
        let r = substitute_poly(p, &self.bindings());
        debug_assert!(r.is_polynomial());
        r.num().clone()
    }

    /// Applies the relation to numerator and denominator. Fails if the
    /// denominator vanishes on the relation hyperplane.
    pub fn apply(&self, e: &RatExpr<C>) -> Result<RatExpr<C>, SymError> {
        let d = self.apply_poly(e.den());
        if d.is_zero() {
            return Err(SymError::SingularSubstitution { symbols: vec![self.eliminated] });
        }
        RatExpr::new(self.apply_poly(e.num()), d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::QPoly;

    #[test]
    fn unit_sum_relation() {
        let ps = [Symbol(0), Symbol(1), Symbol(2)];
        let rel = ParameterRelation::unit_sum(&ps, 1);
        let e: RatExpr<_> = (QPoly::var(ps[0]) + QPoly::var(ps[1]) + QPoly::var(ps[2]) - QPoly::one()).into();
        assert!(e.is_identically_zero(Some(&rel)));
        assert!(!e.is_identically_zero(None));
    }
}
