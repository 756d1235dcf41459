use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{format_rational, Rational};

/// Selector for coefficient-wise x-part extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum XPart {
    Pos,
    Zero,
    Neg,
    Geq,
    Leq,
}

impl XPart {
    pub fn keeps(self, e: i64) -> bool {
        match self {
            XPart::Pos => e > 0,
            XPart::Zero => e == 0,
            XPart::Neg => e < 0,
            XPart::Geq => e >= 0,
            XPart::Leq => e <= 0,
        }
    }
}

/// Finite Laurent polynomial in x. Terms sorted by exponent, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i64, Rational)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(e: i64, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(e, c)] }
        }
    }

    pub fn x_pow(e: i64) -> Self {
        Self::monomial(e, Rational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(it: I) -> Self {
        let mut map: BTreeMap<i64, Rational> = BTreeMap::new();
        for (e, c) in it {
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        Self {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Caller guarantees sorted, distinct, nonzero.
    fn from_sorted(terms: Vec<(i64, Rational)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(i64, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(i64, Rational)> {
        self.terms
    }

    pub fn coeff(&self, e: i64) -> Rational {
        match self.terms.binary_search_by_key(&e, |(k, _)| *k) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn as_monomial(&self) -> Option<(i64, &Rational)> {
        match self.terms.as_slice() {
            [(e, c)] => Some((*e, c)),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_sorted(self.terms.iter().map(|(e, v)| (*e, v * c)).collect())
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: i64) -> Self {
        Self::from_sorted(self.terms.iter().map(|(e, v)| (e + k, v.clone())).collect())
    }

    /// x -> x̄.
    pub fn invert_x(&self) -> Self {
        Self::from_sorted(self.terms.iter().rev().map(|(e, v)| (-e, v.clone())).collect())
    }

    pub fn part(&self, sel: XPart) -> Self {
        Self::from_sorted(self.terms.iter().filter(|(e, _)| sel.keeps(*e)).cloned().collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut s = Rational::zero();
        for (e, c) in &self.terms {
            s += c * pow_rat(x, *e);
        }
        s
    }

    pub fn derivative(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (e - 1, c * Rational::from_integer((*e).into()))))
    }

    /// Add c·x^k·other into self.
    pub fn add_scaled(&mut self, other: &LaurentPoly, c: &Rational, k: i64) {
        if other.is_zero() || c.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let ea = a.get(i).map(|t| t.0);
            let eb = b.get(j).map(|t| t.0 + k);
            match (ea, eb) {
                (Some(x), Some(y)) if x == y => {
                    let v = &a[i].1 + &b[j].1 * c;
                    if !v.is_zero() {
                        out.push((x, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(a[i].clone());
                    i += 1;
                }
                (Some(_), None) => {
                    out.push(a[i].clone());
                    i += 1;
                }
                (_, Some(y)) => {
                    out.push((y, &b[j].1 * c));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        self.terms = out;
    }

    /// Exact quotient self / d, or None when d does not divide self.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dlo, dhi) = (d.min_exp().unwrap(), d.max_exp().unwrap());
        let dlead = d.terms.last().unwrap().1.clone();
        let qlo = self.min_exp().unwrap() - dlo;
        let mut rem = self.clone();
        let mut quo = Vec::new();
        // Long division from the top; remainder must vanish exactly.
        while let Some(rhi) = rem.max_exp() {
            if rhi - dhi < qlo {
                return None;
            }
            let c = rem.terms.last().unwrap().1.clone() / &dlead;
            let k = rhi - dhi;
            rem.add_scaled(d, &(-c.clone()), k);
            quo.push((k, c));
        }
        quo.reverse();
        Some(Self::from_sorted(quo))
    }
}

pub fn pow_rat(x: &Rational, e: i64) -> Rational {
    let mut base = if e < 0 { x.recip() } else { x.clone() };
    let mut n = e.unsigned_abs();
    let mut acc = Rational::one();
    while n > 0 {
        if n & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        n >>= 1;
    }
    acc
}

/// Dense accumulator used by products.
pub(crate) struct DenseAcc {
    lo: i64,
    vals: Vec<Rational>,
}

impl DenseAcc {
    pub(crate) fn new() -> Self {
        Self { lo: 0, vals: Vec::new() }
    }

    fn reserve_span(&mut self, lo: i64, hi: i64) {
        if self.vals.is_empty() {
            self.lo = lo;
            self.vals = vec![Rational::zero(); (hi - lo + 1) as usize];
            return;
        }
        let cur_hi = self.lo + self.vals.len() as i64 - 1;
        if lo < self.lo {
            let pad = (self.lo - lo) as usize;
            let mut v = vec![Rational::zero(); pad];
            v.append(&mut self.vals);
            self.vals = v;
            self.lo = lo;
        }
        if hi > cur_hi {
            let new_len = (hi - self.lo + 1) as usize;
            self.vals.resize(new_len, Rational::zero());
        }
    }

    pub(crate) fn add_product(&mut self, a: &LaurentPoly, b: &LaurentPoly) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let lo = a.min_exp().unwrap() + b.min_exp().unwrap();
        let hi = a.max_exp().unwrap() + b.max_exp().unwrap();
        self.reserve_span(lo, hi);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let idx = (ea + eb - self.lo) as usize;
                self.vals[idx] += ca * cb;
            }
        }
    }

    pub(crate) fn finish(self) -> LaurentPoly {
        let lo = self.lo;
        LaurentPoly::from_sorted(
            self.vals
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as i64, c))
                .collect(),
        )
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one(), 0);
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one(), 0);
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::from_sorted(self.terms.iter().map(|(e, c)| (*e, -c)).collect())
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if let Some((e, c)) = self.as_monomial() {
            return rhs.scale(c).shift(e);
        }
        if let Some((e, c)) = rhs.as_monomial() {
            return self.scale(c).shift(e);
        }
        let mut acc = DenseAcc::new();
        acc.add_product(self, rhs);
        acc.finish()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| match e {
                0 => format_rational(c),
                _ => format!("{}*x^{}", format_rational(c), e),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::rational::{int, rat};

    fn lp(ts: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(ts.iter().map(|&(e, c)| (e, int(c))))
    }

    #[test]
    fn product_and_parts() {
        let p = lp(&[(-1, 1), (1, 1)]);
        let sq = &p * &p;
        assert_eq!(sq, lp(&[(-2, 1), (0, 2), (2, 1)]));
        assert_eq!(sq.part(XPart::Pos), lp(&[(2, 1)]));
        assert_eq!(sq.part(XPart::Leq), lp(&[(-2, 1), (0, 2)]));
        assert_eq!(&(&sq - &sq), &LaurentPoly::zero());
    }

    #[test]
    fn exact_division() {
        let a = lp(&[(0, 1), (1, -1)]);
        let b = lp(&[(-1, 2), (0, 1), (3, 5)]);
        let ab = &a * &b;
        assert_eq!(ab.div_exact(&a), Some(b.clone()));
        assert_eq!(ab.div_exact(&b), Some(a));
        assert_eq!(lp(&[(0, 1), (1, 1)]).div_exact(&lp(&[(0, 1), (1, -1)])), None);
        assert_eq!(lp(&[(3, 2)]).div_exact(&lp(&[(1, 4)])), Some(LaurentPoly::monomial(2, rat(1, 2))));
    }

    #[test]
    fn flip_and_eval() {
        let p = lp(&[(-1, 3), (2, 1)]);
        assert_eq!(p.invert_x(), lp(&[(-2, 1), (1, 3)]));
        assert_eq!(p.eval(&int(2)), rat(3, 2) + int(4));
    }
}
