use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::laurent::LaurentPoly;
use super::puiseux::PuiseuxSeries;
use super::rational::{format_rational, Rational};

/// Sparse Laurent polynomial in x, y, t. Keys are (x, y, t) exponents.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TriLaurent {
    terms: BTreeMap<(i64, i64, i64), Rational>,
}

/// Birational monomial substitution x ↦ x^a y^b, y ↦ x^c y^d.
pub type MonomialMap = ((i64, i64), (i64, i64));

impl TriLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, 0, Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, 0, c)
    }

    pub fn monomial(x: i64, y: i64, t: i64, c: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(x, y, t, c);
        s
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, 0, Rational::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, 0, Rational::one())
    }

    pub fn t() -> Self {
        Self::monomial(0, 0, 1, Rational::one())
    }

    pub fn add_term(&mut self, x: i64, y: i64, t: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((x, y, t)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(x, y, t));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64, i64), &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(x, y, t), v) in &self.terms {
            out.add_term(x, y, t, v * c);
        }
        out
    }

    pub fn apply(&self, g: MonomialMap) -> Self {
        let ((a, b), (c, d)) = g;
        let mut out = Self::zero();
        for (&(x, y, t), v) in &self.terms {
            out.add_term(a * x + c * y, b * x + d * y, t, v.clone());
        }
        out
    }

    /// Coefficients of y^j as exact series in (x, t).
    pub fn by_y(&self) -> BTreeMap<i64, PuiseuxSeries> {
        let mut raw: BTreeMap<i64, Vec<(i64, i64, Rational)>> = BTreeMap::new();
        for (&(x, y, t), v) in &self.terms {
            raw.entry(y).or_default().push((t, x, v.clone()));
        }
        raw.into_iter()
            .map(|(j, ts)| {
                let s = ts
                    .into_iter()
                    .fold(PuiseuxSeries::exact_zero(), |acc, (t, x, c)| &acc + &PuiseuxSeries::term(t, x, c));
                (j, s)
            })
            .collect()
    }

    pub fn y_coeff(&self, j: i64) -> PuiseuxSeries {
        self.by_y().remove(&j).unwrap_or_else(PuiseuxSeries::exact_zero)
    }

    /// Embed an exact (x, t) series.
    pub fn from_series(s: &PuiseuxSeries) -> Self {
        assert!(s.is_exact() && s.ram() == 1, "exact integral series expected");
        let mut out = Self::zero();
        for (k, e, c) in s.triples() {
            out.add_term(e, 0, k, c.clone());
        }
        out
    }

    pub fn from_laurent_x(p: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        for (e, c) in p.terms() {
            out.add_term(*e, 0, 0, c.clone());
        }
        out
    }
}

impl Add for &TriLaurent {
    type Output = TriLaurent;
    fn add(self, rhs: &TriLaurent) -> TriLaurent {
        let mut out = self.clone();
        for (&(x, y, t), v) in &rhs.terms {
            out.add_term(x, y, t, v.clone());
        }
        out
    }
}

impl Sub for &TriLaurent {
    type Output = TriLaurent;
    fn sub(self, rhs: &TriLaurent) -> TriLaurent {
        let mut out = self.clone();
        for (&(x, y, t), v) in &rhs.terms {
            out.add_term(x, y, t, -v.clone());
        }
        out
    }
}

impl Neg for &TriLaurent {
    type Output = TriLaurent;
    fn neg(self) -> TriLaurent {
        self.scale(&-Rational::one())
    }
}

impl Mul for &TriLaurent {
    type Output = TriLaurent;
    fn mul(self, rhs: &TriLaurent) -> TriLaurent {
        let mut out = TriLaurent::zero();
        for (&(x1, y1, t1), v1) in &self.terms {
            for (&(x2, y2, t2), v2) in &rhs.terms {
                out.add_term(x1 + x2, y1 + y2, t1 + t2, v1 * v2);
            }
        }
        out
    }
}

impl Add for TriLaurent {
    type Output = TriLaurent;
    fn add(self, rhs: TriLaurent) -> TriLaurent {
        &self + &rhs
    }
}

impl Sub for TriLaurent {
    type Output = TriLaurent;
    fn sub(self, rhs: TriLaurent) -> TriLaurent {
        &self - &rhs
    }
}

impl Mul for TriLaurent {
    type Output = TriLaurent;
    fn mul(self, rhs: TriLaurent) -> TriLaurent {
        &self * &rhs
    }
}

impl fmt::Display for TriLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(x, y, t), c)| format!("{}*x^{}*y^{}*t^{}", format_rational(c), x, y, t))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TriLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
