use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use super::{Derivation, Monomial, ParameterRelation, Poly, SymError, Symbol};
use crate::scalar::{Embed, Field};

/// Quotient of two polynomials.
///
/// No multivariate GCD is ever taken. Construction only cancels common
/// monomial factors, folds constant denominators into the numerator and
/// makes the denominator monic. Equality of values is decided by
/// cross-multiplication ([`RatExpr::equiv`]); `==` is structural.
#[derive(Clone, Debug, PartialEq)]
pub struct RatExpr<C> {
    num: Poly<C>,
    den: Poly<C>,
}

/// Symbol → expression map for simultaneous substitution.
pub type Bindings<C> = BTreeMap<Symbol, RatExpr<C>>;

/// The four ring operations exposed as data, for callers that pick the
/// operation at runtime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn ring_op<C: Field>(a: &RatExpr<C>, b: &RatExpr<C>, op: RingOp) -> Result<RatExpr<C>, SymError> {
    Ok(match op {
        RingOp::Add => a + b,
        RingOp::Sub => a - b,
        RingOp::Mul => a * b,
        RingOp::Div => a.try_div(b)?,
    })
}

impl<C: Field> From<Poly<C>> for RatExpr<C> {
    fn from(p: Poly<C>) -> Self {
        RatExpr { num: p, den: Poly::one() }
    }
}

impl<C: Field> RatExpr<C> {
    pub fn new(num: Poly<C>, den: Poly<C>) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(mut num: Poly<C>, mut den: Poly<C>) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatExpr { num, den: Poly::one() };
        }
        if let Some(c) = den.as_constant() {
            return RatExpr { num: num.scale(&(C::one() / c)), den: Poly::one() };
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        if !g.is_one() {
            num = num.div_monomial(&g);
            den = den.div_monomial(&g);
        }
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap_or_else(C::one);
        if !lc.is_one() {
            let inv = C::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if let Some(c) = den.as_constant() {
            num = num.scale(&(C::one() / c));
            den = Poly::one();
        }
        RatExpr { num, den }
    }

    pub fn zero() -> Self {
        Poly::zero().into()
    }

    pub fn one() -> Self {
        Poly::one().into()
    }

    pub fn constant(c: C) -> Self {
        Poly::constant(c).into()
    }

    pub fn var(s: Symbol) -> Self {
        Poly::var(s).into()
    }

    pub fn num(&self) -> &Poly<C> {
        &self.num
    }

    pub fn den(&self) -> &Poly<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<C> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// The value as a polynomial, if the denominator divides the numerator.
    pub fn as_poly(&self) -> Option<Poly<C>> {
        if self.den.is_one() {
            Some(self.num.clone())
        } else {
            self.num.exact_quotient(&self.den)
        }
    }

    /// Rewrites to `num/1` when the division is exact; otherwise unchanged.
    pub fn simplify(&self) -> Self {
        match self.as_poly() {
            Some(p) => p.into(),
            None => self.clone(),
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.num.contains(s) || self.den.contains(s)
    }

    /// Value equality by cross-multiplication.
    pub fn equiv(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        (&self.num * &other.den - &other.num * &self.den).is_zero()
    }

    /// True iff the numerator vanishes, after applying `relation` to it.
    pub fn is_identically_zero(&self, relation: Option<&ParameterRelation<C>>) -> bool {
        match relation {
            None => self.num.is_zero(),
            Some(r) => r.apply_poly(&self.num).is_zero(),
        }
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, SymError> {
        if rhs.num.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn recip(&self) -> Result<Self, SymError> {
        Self::one().try_div(self)
    }

    pub fn scale(&self, c: &C) -> Self {
        RatExpr { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: u32) -> Self {
        RatExpr { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn partial(&self, s: Symbol) -> Self {
        let dn = self.num.partial(s);
        if self.den.is_one() {
            return dn.into();
        }
        let dd = self.den.partial(s);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        Self::normalized(&dn * &self.den - &self.num * &dd, self.den.pow(2))
    }

    /// Applies the derivation `d` (linearity, Leibniz and quotient rules).
    pub fn differentiate(&self, d: &Derivation<C>) -> Self {
        let dn = d.apply_poly(&self.num);
        if self.den.is_one() {
            return dn;
        }
        let dd = d.apply_poly(&self.den);
        if dd.is_zero() {
            return &dn * &RatExpr { num: Poly::one(), den: self.den.clone() };
        }
        let den: RatExpr<C> = self.den.clone().into();
        let num: RatExpr<C> = self.num.clone().into();
        let top = &(&dn * &den) - &(&num * &dd);
        Self::normalized(top.num, &top.den * &self.den.pow(2))
    }

    /// Simultaneous substitution. Symbols without a binding pass through.
    pub fn substitute(&self, bindings: &Bindings<C>) -> Result<Self, SymError> {
        let n = substitute_poly(&self.num, bindings);
        let d = substitute_poly(&self.den, bindings);
        if d.is_zero() {
            let offending = self.den.symbols().into_iter().filter(|s| bindings.contains_key(s)).collect();
            return Err(SymError::SingularSubstitution { symbols: offending });
        }
        n.try_div(&d).map_err(|_| SymError::DivisionByZero)
    }

    pub fn eval<T: Field>(&self, point: &[Option<T>]) -> Result<T, SymError>
    where
        C: Embed<T>,
    {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(SymError::ZeroDenominator);
        }
        Ok(self.num.eval(point)? / d)
    }

    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> RatExpr<D> {
        RatExpr::normalized(self.num.map_coeffs(&f), self.den.map_coeffs(&f))
    }

    fn sum(&self, rhs: &Self, negate: bool) -> Self {
        let rn = if negate { -&rhs.num } else { rhs.num.clone() };
        if self.den == rhs.den {
            return Self::normalized(&self.num + &rn, self.den.clone());
        }
        if rhs.den.is_one() {
            return Self::normalized(&self.num + &(&rn * &self.den), self.den.clone());
        }
        if self.den.is_one() {
            return Self::normalized(&(&self.num * &rhs.den) + &rn, rhs.den.clone());
        }
        // Monomial denominators (the common case: z, x^2, s, ...) combine over their lcm.
        if let (Some(ma), Some(mb)) = (single_monomial(&self.den), single_monomial(&rhs.den)) {
            let l = ma.lcm(mb);
            let num = &self.num.mul_monomial(&ma.quotient_of(&l)) + &rn.mul_monomial(&mb.quotient_of(&l));
            return Self::normalized(num, Poly::term(l, C::one()));
        }
        Self::normalized(&(&self.num * &rhs.den) + &(&rn * &self.den), &self.den * &rhs.den)
    }
}

fn single_monomial<C: Field>(p: &Poly<C>) -> Option<&Monomial> {
    match p.terms() {
        [(m, c)] if c.is_one() => Some(m),
        _ => None,
    }
}

/// Substitutes into a polynomial over a shared denominator
/// `prod d_s^{max e_s}`, which keeps denominators from multiplying out.
pub(crate) fn substitute_poly<C: Field>(p: &Poly<C>, bindings: &Bindings<C>) -> RatExpr<C> {
    if bindings.is_empty() || p.is_zero() {
        return p.clone().into();
    }
    let mut max_exp: BTreeMap<Symbol, u16> = BTreeMap::new();
    for (m, _) in p.terms() {
        for (s, e) in m.factors() {
            if bindings.contains_key(&s) {
                let slot = max_exp.entry(s).or_insert(0);
                *slot = (*slot).max(e);
            }
        }
    }
    if max_exp.is_empty() {
        return p.clone().into();
    }
    let mut cache: HashMap<(Symbol, bool, u16), Poly<C>> = HashMap::new();
    let mut power = |s: Symbol, den: bool, e: u16| -> Poly<C> {
        cache
            .entry((s, den, e))
            .or_insert_with(|| {
                let b = &bindings[&s];
                if den { b.den.pow(e as u32) } else { b.num.pow(e as u32) }
            })
            .clone()
    };
    let mut total_den = Poly::one();
    for (&s, &e) in &max_exp {
        total_den = &total_den * &power(s, true, e);
    }
    let bound: Vec<Symbol> = max_exp.keys().copied().collect();
    let mut num = Poly::zero();
    for (m, c) in p.terms() {
        let mut t = Poly::term(m.without(&bound), c.clone());
        for (&s, &emax) in &max_exp {
            let e = m.exp(s);
            if e > 0 {
                t = &t * &power(s, false, e);
            }
            if emax > e {
                t = &t * &power(s, true, emax - e);
            }
        }
        num = &num + &t;
    }
    RatExpr::normalized(num, total_den)
}

impl<C: Field> Add for &RatExpr<C> {
    type Output = RatExpr<C>;
    fn add(self, rhs: &RatExpr<C>) -> RatExpr<C> {
        self.sum(rhs, false)
    }
}

impl<C: Field> Sub for &RatExpr<C> {
    type Output = RatExpr<C>;
    fn sub(self, rhs: &RatExpr<C>) -> RatExpr<C> {
        self.sum(rhs, true)
    }
}

impl<C: Field> Mul for &RatExpr<C> {
    type Output = RatExpr<C>;
    fn mul(self, rhs: &RatExpr<C>) -> RatExpr<C> {
        if self.den.is_one() && rhs.den.is_one() {
            return (&self.num * &rhs.num).into();
        }
        RatExpr::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<C: Field> Neg for &RatExpr<C> {
    type Output = RatExpr<C>;
    fn neg(self) -> RatExpr<C> {
        RatExpr { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl<C: Field> $tr for RatExpr<C> {
            type Output = RatExpr<C>;
            fn $f(self, rhs: RatExpr<C>) -> RatExpr<C> {
                (&self).$f(&rhs)
            }
        }
        impl<C: Field> $tr<&RatExpr<C>> for RatExpr<C> {
            type Output = RatExpr<C>;
            fn $f(self, rhs: &RatExpr<C>) -> RatExpr<C> {
                (&self).$f(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<C: Field> Neg for RatExpr<C> {
    type Output = RatExpr<C>;
    fn neg(self) -> RatExpr<C> {
        -&self
    }
}
