use super::{Float, Params};
use crate::models::{registry, VectorFieldSystem};
use crate::symcore::Symbol;
use crate::{QExpr, QPoly};

/// Polynomial flattened for repeated float evaluation over a dense point
/// indexed by symbol.
#[derive(Clone, Debug)]
struct CompiledPoly<T> {
    terms: Vec<(T, Vec<(usize, i32)>)>,
}

impl<T: Float> CompiledPoly<T> {
    fn new(p: &QPoly) -> Self {
        CompiledPoly {
            terms: p
                .terms()
                .iter()
                .map(|(m, c)| (T::from_rational(c), m.factors().map(|(s, e)| (s.index(), i32::from(e))).collect()))
                .collect(),
        }
    }

    fn eval(&self, x: &[T]) -> T {
        let mut acc = T::zero();
        for (c, fs) in &self.terms {
            let mut v = *c;
            for &(i, e) in fs {
                v = v * x[i].powi(e);
            }
            acc = acc + v;
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub struct CompiledExpr<T> {
    num: CompiledPoly<T>,
    den: Option<CompiledPoly<T>>,
}

impl<T: Float> CompiledExpr<T> {
    pub fn new(e: &QExpr) -> Self {
        CompiledExpr {
            num: CompiledPoly::new(e.num()),
            den: (!e.den().is_one()).then(|| CompiledPoly::new(e.den())),
        }
    }

    /// `(numerator, denominator)` at `x`.
    pub fn eval_parts(&self, x: &[T]) -> (T, T) {
        (self.num.eval(x), self.den.as_ref().map_or(T::one(), |d| d.eval(x)))
    }

    pub fn eval(&self, x: &[T]) -> T {
        let (n, d) = self.eval_parts(x);
        n / d
    }
}

/// Dense evaluation point over the whole symbol table with the parameters
/// filled in.
pub(crate) fn base_point<T: Float>(params: &Params<T>) -> Vec<T> {
    let reg = registry();
    let mut x = vec![T::zero(); reg.table.len()];
    for (s, a) in reg.alphas().iter().zip(params.alpha) {
        x[s.index()] = a;
    }
    x[reg.sym("eta").index()] = params.eta;
    x
}

/// A vector field with parameters fixed, ready for the integrator.
#[derive(Clone, Debug)]
pub struct CompiledSystem<T> {
    state: Vec<Symbol>,
    indep: Symbol,
    rhs: Vec<CompiledExpr<T>>,
    point: Vec<T>,
}

impl<T: Float> CompiledSystem<T> {
    pub fn new(sys: &VectorFieldSystem, params: &Params<T>) -> Self {
        CompiledSystem {
            state: sys.state.clone(),
            indep: sys.indep,
            rhs: sys.rhs.iter().map(CompiledExpr::new).collect(),
            point: base_point(params),
        }
    }

    pub fn dim(&self) -> usize {
        self.state.len()
    }

    /// Writes `f(u, y)` into `out`.
    pub fn eval(&mut self, u: T, y: &[T], out: &mut [T]) {
        self.point[self.indep.index()] = u;
        for (s, v) in self.state.iter().zip(y) {
            self.point[s.index()] = *v;
        }
        for (o, f) in out.iter_mut().zip(&self.rhs) {
            *o = f.eval(&self.point);
        }
    }
}
