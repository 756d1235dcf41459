//! Polynomials in Q[t][x] for content removal of exact coefficients.

use num_traits::{One, Zero};

use super::laurent::LaurentPoly;
use super::puiseux::PuiseuxSeries;
use super::rational::Rational;

type UPoly = Vec<Rational>;

fn utrim(p: &mut UPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn usub_scaled(a: &mut UPoly, b: &UPoly, c: &Rational, shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, Rational::zero());
    }
    for (i, v) in b.iter().enumerate() {
        a[i + shift] -= v * c;
    }
    utrim(a);
}

fn umul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    utrim(&mut out);
    out
}

fn udivrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let mut r = a.clone();
    utrim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lb;
        usub_scaled(&mut r, b, &c, shift);
        q[shift] = c;
    }
    utrim(&mut q);
    (q, r)
}

fn umonic(mut p: UPoly) -> UPoly {
    if let Some(l) = p.last().cloned() {
        for c in p.iter_mut() {
            *c = &*c / &l;
        }
    }
    p
}

fn ugcd(a: &UPoly, b: &UPoly) -> UPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    utrim(&mut x);
    utrim(&mut y);
    while !y.is_empty() {
        let (_, r) = udivrem(&x, &y);
        x = y;
        y = r;
    }
    umonic(x)
}

/// Dense bivariate: outer index = x power, inner = t power.
#[derive(Clone, Debug, PartialEq)]
struct BiPoly(Vec<UPoly>);

impl BiPoly {
    fn trim(&mut self) {
        for c in self.0.iter_mut() {
            utrim(c);
        }
        while self.0.last().is_some_and(|c| c.is_empty()) {
            self.0.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn content(&self) -> UPoly {
        self.0.iter().fold(Vec::new(), |g, c| if c.is_empty() { g } else if g.is_empty() { umonic(c.clone()) } else { ugcd(&g, c) })
    }

    fn div_u(&self, d: &UPoly) -> BiPoly {
        let mut out = BiPoly(self.0.iter().map(|c| udivrem(c, d).0).collect());
        out.trim();
        out
    }

    fn primitive(&self) -> BiPoly {
        let c = self.content();
        if c.is_empty() {
            return self.clone();
        }
        self.div_u(&c)
    }

    fn prem(&self, b: &BiPoly) -> BiPoly {
        let mut a = self.clone();
        let lb = b.0.last().unwrap().clone();
        while !a.is_zero() && a.0.len() >= b.0.len() {
            let shift = a.0.len() - b.0.len();
            let la = a.0.last().unwrap().clone();
            let mut next: Vec<UPoly> = a.0.iter().map(|c| umul(c, &lb)).collect();
            for (i, bc) in b.0.iter().enumerate() {
                let prod = umul(bc, &la);
                let slot = &mut next[i + shift];
                usub_scaled(slot, &prod, &Rational::one(), 0);
            }
            a = BiPoly(next);
            a.trim();
        }
        a
    }

    fn gcd(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let cont = ugcd(&self.content(), &other.content());
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.0.len() < b.0.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive() };
        }
        let mut g = BiPoly(a.0.iter().map(|c| umul(c, &cont)).collect());
        g.trim();
        g.normalized()
    }

    fn normalized(&self) -> BiPoly {
        let lead = self.0.last().and_then(|c| c.last()).cloned().unwrap_or_else(Rational::one);
        let mut out = BiPoly(self.0.iter().map(|c| c.iter().map(|v| v / &lead).collect()).collect());
        out.trim();
        out
    }

    fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        let mut a = self.clone();
        if d.is_zero() {
            return None;
        }
        let ld = d.0.last().unwrap().clone();
        let mut q: Vec<UPoly> = vec![Vec::new(); a.0.len().saturating_sub(d.0.len()) + 1];
        while !a.is_zero() {
            if a.0.len() < d.0.len() {
                return None;
            }
            let shift = a.0.len() - d.0.len();
            let (qc, r) = udivrem(a.0.last().unwrap(), &ld);
            if !r.is_empty() {
                return None;
            }
            for (i, dc) in d.0.iter().enumerate() {
                let prod = umul(dc, &qc);
                usub_scaled(&mut a.0[i + shift], &prod, &Rational::one(), 0);
            }
            q[shift] = qc;
            a.trim();
        }
        let mut q = BiPoly(q);
        q.trim();
        Some(q)
    }
}

/// Exact integral series → (polynomial, x shift, t shift) with s = x^sx t^st · poly.
fn to_bi(s: &PuiseuxSeries) -> (BiPoly, i64, i64) {
    assert!(s.is_exact() && s.ram() == 1, "exact integral series expected");
    let (xlo, xhi) = s.x_range().unwrap_or((0, 0));
    let tlo = s.valuation().unwrap_or(0);
    let mut rows: Vec<UPoly> = vec![Vec::new(); (xhi - xlo + 1) as usize];
    for (k, e, c) in s.triples() {
        let row = &mut rows[(e - xlo) as usize];
        let idx = (k - tlo) as usize;
        if row.len() <= idx {
            row.resize(idx + 1, Rational::zero());
        }
        row[idx] = c.clone();
    }
    let mut b = BiPoly(rows);
    b.trim();
    (b, xlo, tlo)
}

fn from_bi(b: &BiPoly, sx: i64, st: i64) -> PuiseuxSeries {
    let mut terms: Vec<(i64, LaurentPoly)> = Vec::new();
    let tmax = b.0.iter().map(|c| c.len()).max().unwrap_or(0);
    for k in 0..tmax {
        let p = LaurentPoly::from_terms(
            b.0.iter()
                .enumerate()
                .filter_map(|(i, c)| c.get(k).filter(|v| !v.is_zero()).map(|v| (i as i64 + sx, v.clone()))),
        );
        terms.push((k as i64 + st, p));
    }
    PuiseuxSeries::from_terms(1, terms, None)
}

/// Greatest common divisor of exact (x, t) Laurent polynomials, ignoring monomial factors.
/// Normalized to leading coefficient 1; returns 1 when there is no common factor.
pub fn content_gcd(items: &[PuiseuxSeries]) -> PuiseuxSeries {
    let mut g: Option<BiPoly> = None;
    for it in items {
        if it.is_zero() {
            continue;
        }
        let (b, _, _) = to_bi(it);
        g = Some(match g {
            None => b.normalized(),
            Some(prev) => prev.gcd(&b),
        });
    }
    match g {
        None => PuiseuxSeries::one(),
        Some(b) => {
            // Strip remaining monomial content.
            let s = from_bi(&b, 0, 0);
            let (bb, _, _) = to_bi(&s);
            from_bi(&bb.normalized(), 0, 0)
        }
    }
}

/// Exact quotient a / d of exact (x, t) Laurent polynomials.
pub fn div_exact(a: &PuiseuxSeries, d: &PuiseuxSeries) -> Option<PuiseuxSeries> {
    if a.is_zero() {
        return Some(PuiseuxSeries::exact_zero());
    }
    let (ab, ax, at) = to_bi(a);
    let (db, dx, dt) = to_bi(d);
    ab.div_exact(&db).map(|q| from_bi(&q, ax - dx, at - dt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::rational::int;

    fn s(terms: &[(i64, i64, i64)]) -> PuiseuxSeries {
        terms.iter().fold(PuiseuxSeries::exact_zero(), |acc, &(k, e, c)| &acc + &PuiseuxSeries::term(k, e, int(c)))
    }

    #[test]
    fn common_factor_recovered() {
        let f = s(&[(0, 1, 1), (1, 0, -2), (2, 2, 1)]);
        let a = &f * &s(&[(0, 0, 1), (1, 1, 3)]);
        let b = &(&f * &s(&[(2, -1, 5), (0, 3, 1)])).shift_t(3);
        let g = content_gcd(&[a.clone(), b.clone()]);
        let q = div_exact(&f, &g).unwrap();
        assert!(q.as_rational().is_some(), "gcd differs from f by a constant: {}", q);
        assert!(div_exact(&a, &g).is_some());
        assert_eq!(content_gcd(&[s(&[(0, 1, 1), (0, 0, 1)]), s(&[(0, 1, 1), (0, 0, -1)])]), PuiseuxSeries::one());
    }
}
