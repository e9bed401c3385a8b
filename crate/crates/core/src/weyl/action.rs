use serde::{Deserialize, Serialize};

use crate::scalar::Field;
use crate::symcore::{Bindings, Poly, Symbol};
use crate::{QExpr, Rational};

/// Integer affine action `alpha -> M alpha + v` on `(alpha0, alpha1, alpha2)`
/// together with the signs applied to `eta` and to the independent variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParameterAction {
    pub matrix: [[i64; 3]; 3],
    pub offset: [i64; 3],
    pub eta_sign: i8,
    pub indep_sign: i8,
}

impl Default for ParameterAction {
    fn default() -> Self {
        Self::identity()
    }
}

impl ParameterAction {
    pub fn identity() -> Self {
        ParameterAction { matrix: [[1, 0, 0], [0, 1, 0], [0, 0, 1]], offset: [0; 3], eta_sign: 1, indep_sign: 1 }
    }

    pub fn linear(matrix: [[i64; 3]; 3], eta_sign: i8, indep_sign: i8) -> Self {
        ParameterAction { matrix, offset: [0; 3], eta_sign, indep_sign }
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &ParameterAction) -> ParameterAction {
        let mut matrix = [[0i64; 3]; 3];
        let mut offset = next.offset;
        for i in 0..3 {
            for j in 0..3 {
                matrix[i][j] = (0..3).map(|k| next.matrix[i][k] * self.matrix[k][j]).sum();
            }
            offset[i] += (0..3).map(|k| next.matrix[i][k] * self.offset[k]).sum::<i64>();
        }
        ParameterAction {
            matrix,
            offset,
            eta_sign: self.eta_sign * next.eta_sign,
            indep_sign: self.indep_sign * next.indep_sign,
        }
    }

    pub fn apply<T: Field>(&self, alpha: &[T; 3]) -> [T; 3] {
        std::array::from_fn(|i| {
            let mut acc = from_i64::<T>(self.offset[i]);
            for (j, a) in alpha.iter().enumerate() {
                acc = acc + from_i64::<T>(self.matrix[i][j]) * a.clone();
            }
            acc
        })
    }

    /// Maps the plane `alpha0 + alpha1 + alpha2 = 1` into itself: the column
    /// sums of `M` share one value `c` and `c + sum(v) = 1`.
    pub fn preserves_normalization(&self) -> bool {
        let col = |j: usize| (0..3).map(|i| self.matrix[i][j]).sum::<i64>();
        let c = col(0);
        col(1) == c && col(2) == c && c + self.offset.iter().sum::<i64>() == 1
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Shift `d` such that the action equals `alpha -> alpha + d` on the
    /// normalization plane (signs ignored). Rows of `M - I` must be
    /// multiples of `(1, 1, 1)`; each such multiple folds into the shift.
    pub fn translation_mod_normalization(&self) -> Option<[i64; 3]> {
        let mut shift = [0; 3];
        for (i, slot) in shift.iter_mut().enumerate() {
            let row: [i64; 3] = std::array::from_fn(|j| self.matrix[i][j] - i64::from(i == j));
            if row[0] != row[1] || row[1] != row[2] {
                return None;
            }
            *slot = self.offset[i] + row[0];
        }
        Some(shift)
    }

    /// Agreement on the normalization plane, signs included.
    pub fn equals_mod_normalization(&self, other: &ParameterAction) -> bool {
        if self.eta_sign != other.eta_sign || self.indep_sign != other.indep_sign {
            return false;
        }
        (0..3).all(|i| {
            let d: [i64; 3] = std::array::from_fn(|j| self.matrix[i][j] - other.matrix[i][j]);
            d[0] == d[1] && d[1] == d[2] && self.offset[i] - other.offset[i] + d[0] == 0
        })
    }

    /// Substitution `alpha_i -> (M alpha + v)_i`, `eta -> eta_sign * eta`.
    pub fn bindings(&self, alphas: [Symbol; 3], eta: Symbol) -> Bindings<Rational> {
        let mut b: Bindings<Rational> = Bindings::new();
        for (i, &s) in alphas.iter().enumerate() {
            let mut p = Poly::constant(crate::scalar::int(self.offset[i]));
            for (j, &a) in alphas.iter().enumerate() {
                p = p + Poly::var(a).scale(&crate::scalar::int(self.matrix[i][j]));
            }
            b.insert(s, QExpr::from(p));
        }
        if self.eta_sign < 0 {
            b.insert(eta, -QExpr::var(eta));
        }
        b
    }
}

fn from_i64<T: Field>(n: i64) -> T {
    let mut acc = T::zero();
    let step = if n >= 0 { T::one() } else { -T::one() };
    for _ in 0..n.unsigned_abs() {
        acc = acc + step.clone();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn composition_order() {
        let a = ParameterAction { offset: [1, 0, 0], ..ParameterAction::identity() };
        let swap = ParameterAction::linear([[0, 0, 1], [0, 1, 0], [1, 0, 0]], 1, 1);
        // a then swap: alpha -> swap(alpha + e0)
        let c = a.then(&swap);
        assert_eq!(c.apply(&[int(0), int(0), int(0)]), [int(0), int(0), int(1)]);
    }

    #[test]
    fn translation_detection() {
        let t = ParameterAction::linear([[-1, -2, -2], [2, 3, 2], [0, 0, 1]], 1, 1);
        assert_eq!(t.translation_mod_normalization(), Some([-2, 2, 0]));
        let s0 = ParameterAction::linear([[-1, 0, 0], [2, 1, 0], [0, 0, 1]], -1, 1);
        assert_eq!(s0.translation_mod_normalization(), None);
        assert!(s0.preserves_normalization());
    }
}
