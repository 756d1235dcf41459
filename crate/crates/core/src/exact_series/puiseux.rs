use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::laurent::{DenseAcc, LaurentPoly, XPart};
use super::rational::{format_rational, lcm_u32, Rational};

/// Truncated series Σ_k t^{k/ram} p_k(x).
///
/// `acc = Some(A)`: every coefficient with k ≤ A is exact and nothing above A is stored.
/// `acc = None`: the series is an exact finite sum.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PuiseuxSeries {
    ram: u32,
    start: i64,
    coeffs: Vec<LaurentPoly>,
    acc: Option<i64>,
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl PuiseuxSeries {
    pub fn new(ram: u32, start: i64, coeffs: Vec<LaurentPoly>, acc: Option<i64>) -> Self {
        assert!(ram > 0, "ramification must be positive");
        let mut s = Self { ram, start, coeffs, acc };
        s.normalize();
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, LaurentPoly)>>(ram: u32, it: I, acc: Option<i64>) -> Self {
        let mut items: Vec<(i64, LaurentPoly)> = it.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        if items.is_empty() {
            return Self::new(ram, 0, Vec::new(), acc);
        }
        items.sort_by_key(|(k, _)| *k);
        let lo = items[0].0;
        let hi = items.last().unwrap().0;
        let mut coeffs = vec![LaurentPoly::zero(); (hi - lo + 1) as usize];
        for (k, p) in items {
            let slot = &mut coeffs[(k - lo) as usize];
            *slot = &*slot + &p;
        }
        Self::new(ram, lo, coeffs, acc)
    }

    fn normalize(&mut self) {
        if let Some(a) = self.acc {
            let keep = (a - self.start + 1).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|p| p.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|p| p.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.start = 0;
        }
    }

    pub fn exact_zero() -> Self {
        Self::new(1, 0, Vec::new(), None)
    }

    /// Zero known through t^{acc/ram}.
    pub fn zero_through(ram: u32, acc: i64) -> Self {
        Self::new(ram, 0, Vec::new(), Some(acc))
    }

    pub fn one() -> Self {
        Self::from_laurent(LaurentPoly::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_laurent(LaurentPoly::constant(c))
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        Self::new(1, 0, vec![p], None)
    }

    pub fn monomial(ram: u32, k: i64, p: LaurentPoly) -> Self {
        Self::new(ram, k, vec![p], None)
    }

    /// c·t^k·x^e with integer k.
    pub fn term(k: i64, e: i64, c: Rational) -> Self {
        Self::monomial(1, k, LaurentPoly::monomial(e, c))
    }

    pub fn t() -> Self {
        Self::term(1, 0, Rational::one())
    }

    pub fn x() -> Self {
        Self::term(0, 1, Rational::one())
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn acc(&self) -> Option<i64> {
        self.acc
    }

    pub fn is_exact(&self) -> bool {
        self.acc.is_none()
    }

    /// Accurate order in whole t units, rounded down. None when exact.
    pub fn acc_t(&self) -> Option<i64> {
        self.acc.map(|a| a.div_euclid(self.ram as i64))
    }

    /// True when no nonzero coefficient is stored.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.acc.is_none()
    }

    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start)
        }
    }

    /// Lower bound for the valuation; None means exactly zero.
    pub fn val_bound(&self) -> Option<i64> {
        match (self.valuation(), self.acc) {
            (Some(v), _) => Some(v),
            (None, Some(a)) => Some(a + 1),
            (None, None) => None,
        }
    }

    pub fn valuation_rational(&self) -> Option<Rational> {
        self.valuation().map(|v| Rational::new(v.into(), (self.ram as i64).into()))
    }

    pub fn leading(&self) -> Option<(i64, &LaurentPoly)> {
        self.coeffs.first().map(|p| (self.start, p))
    }

    /// Highest stored exponent.
    pub fn top(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, k: i64) -> LaurentPoly {
        self.coeff_ref(k).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, k: i64) -> Option<&LaurentPoly> {
        if k < self.start {
            return None;
        }
        self.coeffs.get((k - self.start) as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &LaurentPoly)> {
        let s = self.start;
        self.coeffs.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(move |(i, p)| (s + i as i64, p))
    }

    /// All (k, e, c) triples.
    pub fn triples(&self) -> impl Iterator<Item = (i64, i64, &Rational)> {
        self.iter().flat_map(|(k, p)| p.terms().iter().map(move |(e, c)| (k, *e, c)))
    }

    pub fn x_range(&self) -> Option<(i64, i64)> {
        let mut r: Option<(i64, i64)> = None;
        for (_, p) in self.iter() {
            let (lo, hi) = (p.min_exp().unwrap(), p.max_exp().unwrap());
            r = Some(match r {
                None => (lo, hi),
                Some((a, b)) => (a.min(lo), b.max(hi)),
            });
        }
        r
    }

    /// True when every coefficient is a constant in x.
    pub fn is_x_free(&self) -> bool {
        self.iter().all(|(_, p)| p.as_constant().is_some())
    }

    /// Keep terms with k ≤ a (ram units); accurate order becomes min(acc, a).
    pub fn truncate(&self, a: i64) -> Self {
        Self::new(self.ram, self.start, self.coeffs.clone(), min_opt(self.acc, Some(a)))
    }

    /// Truncate through t^order (whole t units).
    pub fn truncate_t(&self, order: i64) -> Self {
        self.truncate(order * self.ram as i64 + self.ram as i64 - 1)
    }

    pub fn with_acc(&self, acc: Option<i64>) -> Self {
        match acc {
            Some(a) => self.truncate(a),
            None => self.clone(),
        }
    }

    /// The stored terms as an exact series, dropping the error term.
    pub fn stored_terms(&self) -> Self {
        Self::new(self.ram, self.start, self.coeffs.clone(), None)
    }

    /// Rewrite on the grid t^{1/(ram·m)}.
    pub fn reramify(&self, m: u32) -> Self {
        if m == 1 {
            return self.clone();
        }
        let mi = m as i64;
        let terms = self.iter().map(|(k, p)| (k * mi, p.clone()));
        let acc = self.acc.map(|a| (a + 1) * mi - 1);
        Self::from_terms(self.ram * m, terms, acc)
    }

    pub fn to_ram(&self, r: u32) -> Self {
        assert!(r.is_multiple_of(self.ram), "target ramification must be a multiple");
        self.reramify(r / self.ram)
    }

    /// Smallest ramification representing the same stored data.
    pub fn simplify_ram(&self) -> Self {
        let mut g = self.ram as i64;
        for (k, _) in self.iter() {
            g = num_integer::gcd(g, k);
        }
        if g <= 1 {
            return self.clone();
        }
        let terms = self.iter().map(|(k, p)| (k / g, p.clone()));
        let acc = self.acc.map(|a| a.div_euclid(g));
        Self::from_terms(self.ram / g as u32, terms, acc)
    }

    pub fn unify(a: &Self, b: &Self) -> (Self, Self) {
        if a.ram == b.ram {
            return (a.clone(), b.clone());
        }
        let r = lcm_u32(a.ram, b.ram);
        (a.to_ram(r), b.to_ram(r))
    }

    pub fn map_coeffs<F: Fn(&LaurentPoly) -> LaurentPoly>(&self, f: F) -> Self {
        Self::new(self.ram, self.start, self.coeffs.iter().map(f).collect(), self.acc)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::new(self.ram, 0, Vec::new(), self.acc);
        }
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn mul_laurent(&self, q: &LaurentPoly) -> Self {
        self.map_coeffs(|p| p * q)
    }

    /// Multiply by x^e.
    pub fn shift_x(&self, e: i64) -> Self {
        self.map_coeffs(|p| p.shift(e))
    }

    /// Multiply by t^{k/ram}.
    pub fn shift_t(&self, k: i64) -> Self {
        Self::new(self.ram, self.start + k, self.coeffs.clone(), self.acc.map(|a| a + k))
    }

    /// Multiply by t^k for integer k.
    pub fn shift_t_whole(&self, k: i64) -> Self {
        self.shift_t(k * self.ram as i64)
    }

    pub fn invert_x(&self) -> Self {
        self.map_coeffs(|p| p.invert_x())
    }

    pub fn x_part(&self, sel: XPart) -> Self {
        self.map_coeffs(|p| p.part(sel))
    }

    /// The series of [x^e] coefficients.
    pub fn x_coeff(&self, e: i64) -> Self {
        self.map_coeffs(|p| LaurentPoly::constant(p.coeff(e)))
    }

    /// Constant value when the series is an exact x-free constant.
    pub fn as_rational(&self) -> Option<Rational> {
        if !self.is_exact() {
            return None;
        }
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 if self.start == 0 => self.coeffs[0].as_constant(),
            _ => None,
        }
    }

    /// Exact monomial c·t^k·x^e.
    pub fn as_monomial(&self) -> Option<(i64, i64, Rational)> {
        if !self.is_exact() || self.coeffs.len() != 1 {
            return None;
        }
        self.coeffs[0].as_monomial().map(|(e, c)| (self.start, e, c.clone()))
    }

    /// First order (ram units of the unified grid) where the two disagree, within the
    /// smaller accurate order. None means agreement.
    pub fn first_difference(&self, other: &Self) -> Option<Rational> {
        let (a, b) = Self::unify(self, other);
        let limit = min_opt(a.acc, b.acc);
        let d = &a - &b;
        let r = a.ram as i64;
        let first = d.iter().map(|(k, _)| k).find(|k| limit.is_none_or(|l| *k <= l));
        first.map(|k| Rational::new(k.into(), r.into()))
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    /// Accurate order as a rational t-exponent; None when exact.
    pub fn acc_rational(&self) -> Option<Rational> {
        self.acc.map(|a| Rational::new(a.into(), (self.ram as i64).into()))
    }

    fn add_impl(&self, other: &Self, sign: &Rational) -> Self {
        let (a, b) = Self::unify(self, other);
        let acc = min_opt(a.acc, b.acc);
        let lo = match (a.valuation(), b.valuation()) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) => x,
            (None, Some(y)) => y,
            (None, None) => return Self::new(a.ram, 0, Vec::new(), acc),
        };
        let hi = a.top().unwrap_or(i64::MIN).max(b.top().unwrap_or(i64::MIN));
        let hi = acc.map_or(hi, |x| hi.min(x));
        if hi < lo {
            return Self::new(a.ram, 0, Vec::new(), acc);
        }
        let mut coeffs = Vec::with_capacity((hi - lo + 1) as usize);
        for k in lo..=hi {
            let mut p = a.coeff(k);
            if let Some(q) = b.coeff_ref(k) {
                p.add_scaled(q, sign, 0);
            }
            coeffs.push(p);
        }
        Self::new(a.ram, lo, coeffs, acc)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        let acc = match (a.val_bound(), b.val_bound()) {
            (None, _) | (_, None) => return Self::new(a.ram, 0, Vec::new(), None),
            (Some(va), Some(vb)) => min_opt(a.acc.map(|x| x + vb), b.acc.map(|x| x + va)),
        };
        let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) else {
            return Self::new(a.ram, 0, Vec::new(), acc);
        };
        let hi = a.top().unwrap() + b.top().unwrap();
        let hi = acc.map_or(hi, |x| hi.min(x));
        let lo = va + vb;
        if hi < lo {
            return Self::new(a.ram, 0, Vec::new(), acc);
        }
        let mut coeffs = Vec::with_capacity((hi - lo + 1) as usize);
        let (atop, btop) = (a.top().unwrap(), b.top().unwrap());
        for n in lo..=hi {
            let mut d = DenseAcc::new();
            let i_lo = va.max(n - btop);
            let i_hi = atop.min(n - vb);
            for i in i_lo..=i_hi {
                if let (Some(p), Some(q)) = (a.coeff_ref(i), b.coeff_ref(n - i)) {
                    d.add_product(p, q);
                }
            }
            coeffs.push(d.finish());
        }
        Self::new(a.ram, lo, coeffs, acc)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn add(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.add_impl(rhs, &Rational::one())
    }
}

impl Sub for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn sub(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.add_impl(rhs, &-Rational::one())
    }
}

impl Mul for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn mul(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.mul_impl(rhs)
    }
}

impl Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        self.map_coeffs(|p| -p)
    }
}

impl Add for PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn add(self, rhs: PuiseuxSeries) -> PuiseuxSeries {
        &self + &rhs
    }
}

impl Sub for PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn sub(self, rhs: PuiseuxSeries) -> PuiseuxSeries {
        &self - &rhs
    }
}

impl Mul for PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn mul(self, rhs: PuiseuxSeries) -> PuiseuxSeries {
        &self * &rhs
    }
}

impl Neg for PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        -&self
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, p) in self.iter() {
            let texp = if self.ram == 1 { format!("{}", k) } else { format!("{}/{}", k, self.ram) };
            for (e, c) in p.terms() {
                let mut s = format_rational(c);
                if k != 0 {
                    s.push_str(&format!("*t^{}", texp));
                }
                if *e != 0 {
                    s.push_str(&format!("*x^{}", e));
                }
                parts.push(s);
            }
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))?;
        match self.acc {
            Some(a) if self.ram == 1 => write!(f, " + O(t^{})", a + 1),
            Some(a) => write!(f, " + O(t^{}/{})", a + 1, self.ram),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::rational::int;

    fn s(terms: &[(i64, i64, i64)]) -> PuiseuxSeries {
        terms.iter().fold(PuiseuxSeries::exact_zero(), |acc, &(k, e, c)| &acc + &PuiseuxSeries::term(k, e, int(c)))
    }

    #[test]
    fn difference_of_squares() {
        let a = s(&[(0, 0, 1), (1, 1, 1)]);
        let b = s(&[(0, 0, 1), (1, 1, -1)]);
        assert_eq!(&a * &b, s(&[(0, 0, 1), (2, 2, -1)]));
        assert_eq!(&a + &PuiseuxSeries::exact_zero(), a);
    }

    #[test]
    fn half_integer_difference_of_squares() {
        let h = PuiseuxSeries::monomial(2, 1, LaurentPoly::one());
        let a = &PuiseuxSeries::one() + &h;
        let b = &PuiseuxSeries::one() - &h;
        let p = &a * &b;
        assert_eq!(p.ram(), 2);
        assert_eq!(p.simplify_ram(), s(&[(0, 0, 1), (1, 0, -1)]));
    }

    #[test]
    fn accuracy_of_products() {
        let f = s(&[(0, 0, 1), (1, 0, 1)]).truncate(3);
        let g = s(&[(2, 0, 1)]);
        assert_eq!((&f * &g).acc(), Some(5));
        let h = s(&[(1, 0, 1)]).truncate(4);
        assert_eq!((&f * &h).acc(), Some(4));
        assert_eq!((&f + &h).acc(), Some(3));
    }

    #[test]
    fn reramify_accuracy() {
        let f = s(&[(0, 0, 1), (1, 0, 2)]).truncate(2);
        let g = f.reramify(3);
        assert_eq!(g.acc(), Some(8));
        assert_eq!(g.simplify_ram(), f);
    }
}
