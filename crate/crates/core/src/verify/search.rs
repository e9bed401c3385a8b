//! Search for polynomial first integrals `D(P) = lambda * P` by exact
//! linear algebra over the field of rational functions in the parameters.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::VerifyError;
use crate::models::{registry, FirstIntegral};
use crate::symcore::{Monomial, Symbol};
use crate::{QExpr, QPoly, Rational};

pub const DEFAULT_MONOMIAL_CAP: usize = 4000;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub state_degree: u32,
    pub indep_degree: u32,
    pub lambdas: Vec<Rational>,
    /// Largest admissible number of unknown coefficients.
    pub monomial_cap: usize,
}

impl SearchConfig {
    pub fn new(state_degree: u32, indep_degree: u32, lambdas: Vec<Rational>) -> Self {
        SearchConfig { state_degree, indep_degree, lambdas, monomial_cap: DEFAULT_MONOMIAL_CAP }
    }
}

/// All monomials in `vars` of total degree `1..=deg` (and `1` itself when
/// `with_one`), in increasing grlex order.
fn monomials(vars: &[Symbol], deg: u32, with_one: bool) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut layer = vec![Monomial::one()];
    for _ in 0..deg {
        let mut next = Vec::new();
        for m in &layer {
            // Multiply only by variables at or after the last one used, so
            // each monomial is produced once.
            let last = vars.iter().rposition(|&v| m.exp(v) > 0).unwrap_or(0);
            for &v in &vars[last..] {
                next.push(m.mul(&Monomial::var(v)));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    if !with_one {
        out.remove(0);
    }
    out.sort();
    out
}

/// Returns a basis (up to constants) of the polynomial solutions of
/// `D(P) = lambda * P` for each candidate `lambda`, with `P` of degree at
/// most `state_degree` in the state and `indep_degree` in the independent
/// variable. Coefficients may depend on the parameters; `alpha1` is
/// eliminated through the unit-sum relation.
pub fn first_integral_search(system_id: &str, config: &SearchConfig) -> Result<Vec<FirstIntegral>, VerifyError> {
    let check = format!("search/{system_id}");
    if config.state_degree == 0 {
        return Err(VerifyError::structural(&check, "state degree bound must be at least 1"));
    }
    let reg = registry();
    let sys = reg.system(system_id)?;
    let relation = reg.relation();
    let u = sys.indep;

    // L * rhs, with L the lcm of the (monomial) denominators.
    let mut lcm = Monomial::one();
    for f in &sys.rhs {
        match f.den().terms() {
            [(m, _)] => lcm = lcm.lcm(m),
            _ => return Err(VerifyError::structural(&check, "rhs denominators must be monomials")),
        }
    }
    let l_rhs: Vec<QPoly> =
        sys.rhs.iter().map(|f| relation.apply_poly(&f.num().mul_monomial(&f.den().terms()[0].0.quotient_of(&lcm)))).collect();
    let l_poly = QPoly::term(lcm, crate::scalar::int(1));

    let mut keys = sys.state.clone();
    keys.push(u);
    let mut found = Vec::new();
    for lambda in &config.lambdas {
        let with_one = !lambda.is_zero();
        let state_monos = monomials(&sys.state, config.state_degree, true);
        let mut cols = Vec::new();
        for k in 0..=config.indep_degree {
            for m in &state_monos {
                let c = m.mul(&Monomial::var_pow(u, k as u16));
                if c.is_one() && !with_one {
                    continue;
                }
                cols.push(c);
            }
        }
        if cols.len() > config.monomial_cap {
            return Err(VerifyError::Capacity { unknowns: cols.len(), cap: config.monomial_cap });
        }
        cols.sort();

        // Column j holds the coefficients of L * (D(m_j) - lambda m_j),
        // grouped by monomial in state and independent variable.
        let mut rows: BTreeMap<Monomial, Vec<(usize, QPoly)>> = BTreeMap::new();
        for (j, m) in cols.iter().enumerate() {
            let mp = QPoly::term(m.clone(), crate::scalar::int(1));
            let mut e = -(&mp * &l_poly).scale(lambda);
            for (v, lf) in sys.state.iter().zip(&l_rhs) {
                let dm = mp.partial(*v);
                if !dm.is_zero() {
                    e = &e + &(&dm * lf);
                }
            }
            let du = mp.partial(u);
            if !du.is_zero() {
                e = &e + &(&du * &l_poly);
            }
            for (key, coef) in e.split_by(&keys) {
                rows.entry(key).or_default().push((j, coef));
            }
        }
        let matrix: Vec<Vec<QPoly>> = rows
            .into_values()
            .map(|entries| {
                let mut row = vec![QPoly::zero(); cols.len()];
                for (j, c) in entries {
                    row[j] = c;
                }
                row
            })
            .collect();

        if full_rank_mod_p(&matrix, cols.len()) {
            continue;
        }
        for v in nullspace(matrix, cols.len()) {
            let p = cols.iter().zip(&v).fold(QPoly::zero(), |acc, (m, c)| {
                &acc + &c.mul_monomial(m)
            });
            let p = normalize(&p, &keys);
            let expr = QExpr::from(p);
            let r = &sys.derivation().apply(&expr) - &expr.scale(lambda);
            if !r.is_identically_zero(Some(&relation)) {
                return Err(VerifyError::structural(&check, "search produced a non-integral"));
            }
            found.push(FirstIntegral {
                id: format!("{system_id}_search_{}", found.len()),
                expr,
                lambda: lambda.clone(),
                system_id: system_id.to_string(),
            });
        }
    }
    Ok(found)
}

/// Scales so that the coefficient of the grlex-largest monomial in `keys`
/// is 1, when that coefficient is a constant.
fn normalize(p: &QPoly, keys: &[Symbol]) -> QPoly {
    let groups = p.split_by(keys);
    match groups.iter().next_back().and_then(|(_, c)| c.as_constant()) {
        Some(c) if !c.is_zero() => p.scale(&(Rational::from_integer(1.into()) / c)),
        _ => p.clone(),
    }
}

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    acc
}

fn to_mod(q: &Rational) -> Option<u64> {
    let p = num_bigint::BigInt::from(P);
    let n = q.numer().mod_floor(&p).to_u64()?;
    let d = q.denom().mod_floor(&p).to_u64()?;
    (d != 0).then(|| mulmod(n, powmod(d, P - 2)))
}

/// Rank test after specializing the parameters to random integers and
/// reducing modulo a prime. Specialization and reduction can only lower
/// the rank, so full rank here proves full rank over the parameter field.
fn full_rank_mod_p(matrix: &[Vec<QPoly>], ncols: usize) -> bool {
    if matrix.len() < ncols {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a7e);
    let n_syms = registry().table.len();
    let point: Vec<Option<Rational>> =
        (0..n_syms).map(|_| Some(Rational::from_integer(rng.gen_range(-50i64..=50).into()))).collect();
    let mut m: Vec<Vec<u64>> = Vec::with_capacity(matrix.len());
    for row in matrix {
        let mut r = Vec::with_capacity(ncols);
        for e in row {
            let Ok(v) = e.eval(&point) else { return false };
            let Some(v) = to_mod(&v) else { return false };
            r.push(v);
        }
        m.push(r);
    }
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][col] != 0) else { return false };
        m.swap(rank, piv);
        let inv = powmod(m[rank][col], P - 2);
        for i in rank + 1..m.len() {
            if m[i][col] == 0 {
                continue;
            }
            let f = mulmod(m[i][col], inv);
            for j in col..ncols {
                let sub = mulmod(f, m[rank][j]);
                m[i][j] = (m[i][j] + P - sub) % P;
            }
        }
        rank += 1;
    }
    rank == ncols
}

/// Nullspace over the field of fractions of the parameter polynomials,
/// by fraction-free Gauss-Jordan elimination. Basis vectors have
/// polynomial entries.
fn nullspace(mut m: Vec<Vec<QPoly>>, ncols: usize) -> Vec<Vec<QPoly>> {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        // Prefer constant pivots, then short ones.
        let Some(piv) = (r..m.len())
            .filter(|&i| !m[i][col].is_zero())
            .min_by_key(|&i| (m[i][col].as_constant().is_none(), m[i][col].len()))
        else {
            continue;
        };
        m.swap(r, piv);
        let p = m[r][col].clone();
        if let Some(c) = p.as_constant() {
            let inv = Rational::from_integer(1.into()) / c;
            for e in m[r].iter_mut() {
                *e = e.scale(&inv);
            }
        }
        let prow = m[r].clone();
        let pc = prow[col].clone();
        let constant_pivot = pc.is_one();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let a = row[col].clone();
            for j in 0..ncols {
                if prow[j].is_zero() && constant_pivot {
                    continue;
                }
                row[j] = if constant_pivot {
                    &row[j] - &(&a * &prow[j])
                } else {
                    &(&pc * &row[j]) - &(&a * &prow[j])
                };
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![QPoly::zero(); ncols];
        // v_f = product of pivots; v_c = -a_{r,f} * product of the others.
        let pivs: Vec<QPoly> = pivots.iter().map(|&(row, c)| m[row][c].clone()).collect();
        let prod = |skip: Option<usize>| {
            pivs.iter().enumerate().filter(|(k, _)| Some(*k) != skip).fold(QPoly::one(), |acc, (_, p)| &acc * p)
        };
        v[f] = prod(None);
        for (k, &(row, c)) in pivots.iter().enumerate() {
            if !m[row][f].is_zero() {
                v[c] = -&(&m[row][f] * &prod(Some(k)));
            }
        }
        basis.push(v);
    }
    basis
}
