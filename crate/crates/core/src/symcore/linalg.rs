use std::collections::HashMap;

use super::{RatExpr, SymError, Symbol};
use crate::scalar::Field;

/// Matrix of partial derivatives `d map[i] / d vars[j]`.
pub fn jacobian<C: Field>(map: &[RatExpr<C>], vars: &[Symbol]) -> Vec<Vec<RatExpr<C>>> {
    map.iter().map(|f| vars.iter().map(|&v| f.partial(v)).collect()).collect()
}

pub fn jacobian_determinant<C: Field>(map: &[RatExpr<C>], vars: &[Symbol]) -> Result<RatExpr<C>, SymError> {
    if map.len() != vars.len() {
        return Err(SymError::DimensionMismatch { expected: vars.len(), found: map.len() });
    }
    Ok(determinant(&jacobian(map, vars)))
}

/// Cofactor expansion along rows, memoized on the set of columns still
/// available. Exact and division-free; fine for the 4x4 and 5x5 cases here.
pub fn determinant<C: Field>(m: &[Vec<RatExpr<C>>]) -> RatExpr<C> {
    let n = m.len();
    assert!(n < 32 && m.iter().all(|r| r.len() == n), "square matrix of modest size expected");
    let mut memo: HashMap<u32, RatExpr<C>> = HashMap::new();
    minor(m, 0, (1u32 << n) - 1, &mut memo)
}

fn minor<C: Field>(m: &[Vec<RatExpr<C>>], row: usize, cols: u32, memo: &mut HashMap<u32, RatExpr<C>>) -> RatExpr<C> {
    if row == m.len() {
        return RatExpr::one();
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut acc = RatExpr::zero();
    let mut sign_neg = false;
    for j in 0..m.len() {
        if cols & (1 << j) == 0 {
            continue;
        }
        let a = &m[row][j];
        if !a.is_zero() {
            let sub = minor(m, row + 1, cols & !(1 << j), memo);
            let term = a * &sub;
            acc = if sign_neg { &acc - &term } else { &acc + &term };
        }
        sign_neg = !sign_neg;
    }
    memo.insert(cols, acc.clone());
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::QExpr;

    #[test]
    fn identity_map_has_unit_jacobian() {
        let vars: Vec<Symbol> = (0..5).map(Symbol).collect();
        let map: Vec<QExpr> = vars.iter().map(|&v| QExpr::var(v)).collect();
        assert_eq!(jacobian_determinant(&map, &vars).unwrap(), QExpr::one());
    }

    #[test]
    fn numeric_determinant() {
        let c = |n| QExpr::constant(int(n));
        let m = vec![vec![c(2), c(1), c(0)], vec![c(1), c(3), c(1)], vec![c(0), c(1), c(4)]];
        // 2(12-1) - 1(4-0) + 0 = 18
        assert_eq!(determinant(&m), c(18));
    }

    #[test]
    fn length_mismatch_errors() {
        let vars = [Symbol(0), Symbol(1)];
        assert!(jacobian_determinant(&[QExpr::var(Symbol(0))], &vars).is_err());
    }
}
