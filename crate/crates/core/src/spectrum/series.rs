//! Truncated generating-function arithmetic.
//!
//! A [`SeriesPolynomial`] stores a polynomial in the distance variable whose
//! coefficients are themselves first-order expansions in the input-weight
//! variable: `count` is the coefficient at `N = 1` and `weight` its
//! derivative. Multiplying two such coefficients follows the product rule,
//! which lets one pass produce both `alpha_d` and `beta_d`.

use std::collections::BTreeMap;
use std::ops::{AddAssign, Mul};

use num_bigint::BigUint;
use num_traits::Zero;

/// `(count, weight)` pair with product-rule multiplication.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SeriesTerm {
    pub count: BigUint,
    pub weight: BigUint,
}

impl SeriesTerm {
    pub fn new(count: impl Into<BigUint>, weight: impl Into<BigUint>) -> Self {
        SeriesTerm {
            count: count.into(),
            weight: weight.into(),
        }
    }

    /// The label of a single branch with input bit `input`: `(1, input)`.
    pub fn branch(input: u8) -> Self {
        SeriesTerm::new(1u32, (input & 1) as u32)
    }

    pub fn is_zero(&self) -> bool {
        self.count.is_zero()
    }
}

impl AddAssign<&SeriesTerm> for SeriesTerm {
    fn add_assign(&mut self, rhs: &SeriesTerm) {
        self.count += &rhs.count;
        self.weight += &rhs.weight;
    }
}

impl Mul<&SeriesTerm> for &SeriesTerm {
    type Output = SeriesTerm;

    fn mul(self, rhs: &SeriesTerm) -> SeriesTerm {
        SeriesTerm {
            count: &self.count * &rhs.count,
            weight: &self.weight * &rhs.count + &rhs.weight * &self.count,
        }
    }
}

/// Sparse polynomial `d -> SeriesTerm`, truncated above `d_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPolynomial {
    terms: BTreeMap<u32, SeriesTerm>,
    d_max: u32,
}

impl SeriesPolynomial {
    pub fn zero(d_max: u32) -> Self {
        SeriesPolynomial {
            terms: BTreeMap::new(),
            d_max,
        }
    }

    /// `{d -> (1, input)}`, or zero when `d` exceeds the truncation.
    pub fn monomial(d: u32, input: u8, d_max: u32) -> Self {
        let mut p = SeriesPolynomial::zero(d_max);
        p.add_term(d, SeriesTerm::branch(input));
        p
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, d: u32) -> Option<&SeriesTerm> {
        self.terms.get(&d)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &SeriesTerm)> {
        self.terms.iter().map(|(&d, t)| (d, t))
    }

    /// Adds `term` at degree `d`; dropped if beyond `d_max` or zero.
    pub fn add_term(&mut self, d: u32, term: SeriesTerm) {
        if d > self.d_max || term.is_zero() {
            return;
        }
        *self.terms.entry(d).or_default() += &term;
    }

    pub fn remove(&mut self, d: u32) -> Option<SeriesTerm> {
        self.terms.remove(&d)
    }

    pub fn into_terms(self) -> BTreeMap<u32, SeriesTerm> {
        self.terms
    }
}

impl AddAssign<&SeriesPolynomial> for SeriesPolynomial {
    fn add_assign(&mut self, rhs: &SeriesPolynomial) {
        for (d, t) in rhs.iter() {
            if d > self.d_max {
                break;
            }
            *self.terms.entry(d).or_default() += t;
        }
    }
}

impl Mul<&SeriesPolynomial> for &SeriesPolynomial {
    type Output = SeriesPolynomial;

    /// Truncated product; the result keeps the smaller of the two bounds.
    fn mul(self, rhs: &SeriesPolynomial) -> SeriesPolynomial {
        let d_max = self.d_max.min(rhs.d_max);
        let mut out = SeriesPolynomial::zero(d_max);
        for (da, ta) in self.iter() {
            for (db, tb) in rhs.iter() {
                let d = da + db;
                if d > d_max {
                    break;
                }
                out.add_term(d, ta * tb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let a = SeriesTerm::new(3u32, 5u32);
        let b = SeriesTerm::new(7u32, 2u32);
        assert_eq!(&a * &b, SeriesTerm::new(21u32, 5u32 * 7 + 2 * 3));
        let mut c = a.clone();
        c += &b;
        assert_eq!(c, SeriesTerm::new(10u32, 7u32));
    }

    #[test]
    fn truncated_multiply() {
        let mut p = SeriesPolynomial::monomial(2, 1, 6);
        p.add_term(3, SeriesTerm::new(2u32, 0u32));
        let q = SeriesPolynomial::monomial(3, 1, 6);
        let pq = &p * &q;
        assert_eq!(pq.get(5), Some(&SeriesTerm::new(1u32, 2u32)));
        assert_eq!(pq.get(6), Some(&SeriesTerm::new(2u32, 2u32)));
        assert_eq!(pq.len(), 2);
        let big = SeriesPolynomial::monomial(5, 0, 6);
        assert!((&big * &big).is_zero());
    }

    #[test]
    fn zero_terms_not_stored() {
        let mut p = SeriesPolynomial::zero(10);
        p.add_term(4, SeriesTerm::default());
        p.add_term(11, SeriesTerm::branch(1));
        assert!(p.is_zero());
        assert!(SeriesPolynomial::monomial(11, 0, 10).is_zero());
    }
}
