use std::fmt;
use std::sync::Arc;

use crate::exact_series::poly2;
use crate::exact_series::{PuiseuxSeries, Rational};

/// Coefficient ring of a linear form.
pub trait Coef: Clone + fmt::Debug + fmt::Display + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    /// Exact monomial c·t^k·x^e, if the coefficient is one.
    fn as_monomial(&self) -> Option<(i64, i64, Rational)>;
    /// Divide by the monomial c·t^k·x^e.
    fn div_monomial(&self, k: i64, e: i64, c: &Rational) -> Self;
    /// Exact polynomial pieces, for content removal. None for truncated values.
    fn exact_parts(&self) -> Option<Vec<&PuiseuxSeries>>;
    /// Exact division by a polynomial g (all pieces).
    fn div_poly(&self, g: &PuiseuxSeries) -> Option<Self>;
}

impl Coef for PuiseuxSeries {
    fn zero() -> Self {
        PuiseuxSeries::exact_zero()
    }
    fn is_zero(&self) -> bool {
        PuiseuxSeries::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rational) -> Self {
        PuiseuxSeries::scale(self, c)
    }
    fn as_monomial(&self) -> Option<(i64, i64, Rational)> {
        if self.ram() != 1 {
            return None;
        }
        PuiseuxSeries::as_monomial(self)
    }
    fn div_monomial(&self, k: i64, e: i64, c: &Rational) -> Self {
        PuiseuxSeries::scale(self, &c.recip()).shift_x(-e).shift_t_whole(-k)
    }
    fn exact_parts(&self) -> Option<Vec<&PuiseuxSeries>> {
        (self.is_exact() && self.ram() == 1).then(|| vec![self])
    }
    fn div_poly(&self, g: &PuiseuxSeries) -> Option<Self> {
        poly2::div_exact(self, g)
    }
}

/// p + q·s with s² = Δ for a fixed Δ.
#[derive(Clone, PartialEq)]
pub struct Surd {
    pub p: PuiseuxSeries,
    pub q: PuiseuxSeries,
    delta: Option<Arc<PuiseuxSeries>>,
}

impl Surd {
    pub fn new(p: PuiseuxSeries, q: PuiseuxSeries, delta: &Arc<PuiseuxSeries>) -> Self {
        Self { p, q, delta: Some(delta.clone()) }
    }

    pub fn rational(p: PuiseuxSeries, delta: &Arc<PuiseuxSeries>) -> Self {
        Self::new(p, PuiseuxSeries::exact_zero(), delta)
    }

    /// q·s.
    pub fn surd(q: PuiseuxSeries, delta: &Arc<PuiseuxSeries>) -> Self {
        Self::new(PuiseuxSeries::exact_zero(), q, delta)
    }

    pub fn delta(&self) -> Option<&Arc<PuiseuxSeries>> {
        self.delta.as_ref()
    }

    fn pick(&self, o: &Self) -> Option<Arc<PuiseuxSeries>> {
        match (&self.delta, &o.delta) {
            (Some(a), Some(b)) => {
                debug_assert!(Arc::ptr_eq(a, b) || a == b, "mixed square roots");
                Some(a.clone())
            }
            (a, b) => a.clone().or_else(|| b.clone()),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Surd { p: PuiseuxSeries::one(), q: PuiseuxSeries::exact_zero(), delta: self.delta.clone() };
        for _ in 0..n {
            acc = Coef::mul(&acc, self);
        }
        acc
    }

    /// Value with s replaced by a series.
    pub fn eval(&self, s: &PuiseuxSeries) -> PuiseuxSeries {
        &self.p + &(&self.q * s)
    }
}

impl Coef for Surd {
    fn zero() -> Self {
        Surd { p: PuiseuxSeries::exact_zero(), q: PuiseuxSeries::exact_zero(), delta: None }
    }
    fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Surd { p: &self.p + &o.p, q: &self.q + &o.q, delta: self.pick(o) }
    }
    fn sub(&self, o: &Self) -> Self {
        Surd { p: &self.p - &o.p, q: &self.q - &o.q, delta: self.pick(o) }
    }
    fn mul(&self, o: &Self) -> Self {
        let delta = self.pick(o);
        let qq = &self.q * &o.q;
        let p = if qq.is_zero() {
            &self.p * &o.p
        } else {
            let d = delta.as_ref().expect("s² needs Δ");
            &(&self.p * &o.p) + &(&qq * d.as_ref())
        };
        let q = &(&self.p * &o.q) + &(&self.q * &o.p);
        Surd { p, q, delta }
    }
    fn neg(&self) -> Self {
        Surd { p: -&self.p, q: -&self.q, delta: self.delta.clone() }
    }
    fn scale(&self, c: &Rational) -> Self {
        Surd { p: self.p.scale(c), q: self.q.scale(c), delta: self.delta.clone() }
    }
    fn as_monomial(&self) -> Option<(i64, i64, Rational)> {
        if !self.q.is_zero() {
            return None;
        }
        Coef::as_monomial(&self.p)
    }
    fn div_monomial(&self, k: i64, e: i64, c: &Rational) -> Self {
        Surd { p: self.p.div_monomial(k, e, c), q: self.q.div_monomial(k, e, c), delta: self.delta.clone() }
    }
    fn exact_parts(&self) -> Option<Vec<&PuiseuxSeries>> {
        let mut v = self.p.exact_parts()?;
        v.extend(self.q.exact_parts()?);
        Some(v)
    }
    fn div_poly(&self, g: &PuiseuxSeries) -> Option<Self> {
        Some(Surd { p: self.p.div_poly(g)?, q: self.q.div_poly(g)?, delta: self.delta.clone() })
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + [{}]·s", self.p, self.q)
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::rational::int;

    #[test]
    fn surd_square_reduces() {
        let delta = Arc::new(&PuiseuxSeries::one() - &PuiseuxSeries::term(1, 1, int(4)));
        let s = Surd::surd(PuiseuxSeries::one(), &delta);
        let sq = Coef::mul(&s, &s);
        assert_eq!(sq.p, *delta);
        assert!(sq.q.is_zero());
        let y = Surd::new(PuiseuxSeries::one(), PuiseuxSeries::constant(int(-1)), &delta);
        let cube = y.pow(3);
        let approx = delta.sqrt(6).unwrap();
        assert!(cube.eval(&approx).agrees_with(&y.eval(&approx).pow(3)));
    }
}
