use std::cmp::Ordering;

use super::Symbol;

/// Exponent vector over a symbol table, trailing zeros trimmed so that
/// monomials built against tables of different length still compare.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<u16>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(s: Symbol) -> Self {
        Self::var_pow(s, 1)
    }

    pub fn var_pow(s: Symbol, e: u16) -> Self {
        let mut exps = vec![0; s.index() + 1];
        exps[s.index()] = e;
        Monomial::from_exps(exps)
    }

    pub fn from_exps(mut exps: Vec<u16>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial { exps }
    }

    pub fn exp(&self, s: Symbol) -> u16 {
        self.exps.get(s.index()).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    /// Total degree counting only the listed symbols.
    pub fn degree_in(&self, syms: &[Symbol]) -> u32 {
        syms.iter().map(|&s| self.exp(s) as u32).sum()
    }

    /// Nonzero `(symbol, exponent)` pairs.
    pub fn factors(&self) -> impl Iterator<Item = (Symbol, u16)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (Symbol(i as u16), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let exps = (0..n)
            .map(|i| {
                self.exps.get(i).copied().unwrap_or(0) + other.exps.get(i).copied().unwrap_or(0)
            })
            .collect();
        Monomial { exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .enumerate()
            .all(|(i, &e)| e <= other.exps.get(i).copied().unwrap_or(0))
    }

    /// `other / self`, assuming [`divides`](Self::divides) holds.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps = other
            .exps
            .iter()
            .enumerate()
            .map(|(i, &e)| e - self.exps.get(i).copied().unwrap_or(0))
            .collect();
        Monomial::from_exps(exps)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().min(other.exps.len());
        Monomial::from_exps((0..n).map(|i| self.exps[i].min(other.exps[i])).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let exps = (0..n)
            .map(|i| {
                self.exps.get(i).copied().unwrap_or(0).max(other.exps.get(i).copied().unwrap_or(0))
            })
            .collect();
        Monomial { exps }
    }

    /// Drops the listed symbols (sets their exponent to zero).
    pub fn without(&self, syms: &[Symbol]) -> Monomial {
        let mut exps = self.exps.clone();
        for s in syms {
            if let Some(e) = exps.get_mut(s.index()) {
                *e = 0;
            }
        }
        Monomial::from_exps(exps)
    }

    /// Keeps only the listed symbols.
    pub fn restrict(&self, syms: &[Symbol]) -> Monomial {
        let mut exps = vec![0; self.exps.len()];
        for s in syms {
            if let Some(&e) = self.exps.get(s.index()) {
                exps[s.index()] = e;
            }
        }
        Monomial::from_exps(exps)
    }
}

/// Graded lexicographic: total degree first, then the exponent of the
/// earliest symbol in table order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.exps.len().max(other.exps.len());
            for i in 0..n {
                let a = self.exps.get(i).copied().unwrap_or(0);
                let b = other.exps.get(i).copied().unwrap_or(0);
                match a.cmp(&b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_orders_by_degree_then_table_position() {
        let x = Monomial::var(Symbol(0));
        let y = Monomial::var(Symbol(1));
        let xy = x.mul(&y);
        let y2 = y.mul(&y);
        assert!(xy > x);
        assert!(x > y);
        assert!(xy > y2);
        assert!(Monomial::one() < y);
    }

    #[test]
    fn trailing_zeros_do_not_affect_equality() {
        assert_eq!(Monomial::from_exps(vec![1, 0, 0]), Monomial::var(Symbol(0)));
    }

    #[test]
    fn division_helpers() {
        let x2y = Monomial::from_exps(vec![2, 1]);
        let x = Monomial::var(Symbol(0));
        assert!(x.divides(&x2y));
        assert_eq!(x.quotient_of(&x2y), Monomial::from_exps(vec![1, 1]));
        assert!(!x2y.divides(&x));
        assert_eq!(x2y.gcd(&Monomial::from_exps(vec![1, 3])), Monomial::from_exps(vec![1, 1]));
    }
}
