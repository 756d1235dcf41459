use num_traits::{One, Zero};

use super::error::{SeriesError, SeriesResult};
use super::laurent::{DenseAcc, LaurentPoly};
use super::puiseux::PuiseuxSeries;
use super::rational::{rational_sqrt, Rational};

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// f^α for α ∈ {-1, 1/2, -1/2, ...} via the power recurrence
/// n·g_n = Σ_{j=1..n} ((α+1)j − n)·h_j·g_{n−j} on f = lead·(1 + h).
///
/// `cap` bounds the result's accurate order (whole t units) when f is exact.
fn power(f: &PuiseuxSeries, alpha: &Rational, cap: i64) -> SeriesResult<PuiseuxSeries> {
    let Some((v, lead)) = f.leading() else {
        return Err(SeriesError::ZeroSeries(f.acc()));
    };
    let Some((e, u)) = lead.as_monomial() else {
        return Err(SeriesError::NonMonomialLeadingTerm(lead.to_string()));
    };
    let ram = f.ram() as i64;
    // Result leading term u^α x^{αe} t^{αv}.
    let (ue, ve, uc) = if alpha.is_integer() {
        let a = alpha.to_integer();
        let a: i64 = a.try_into().expect("small exponent");
        let uc = super::laurent::pow_rat(u, a);
        (e * a, v * a, uc)
    } else {
        assert!(*alpha.denom() == 2.into());
        let root = rational_sqrt(u).filter(|_| e % 2 == 0 && v % 2 == 0);
        let Some(root) = root else {
            return Err(SeriesError::NonSquareLeadingTerm(format!("{}*t^({}/{})*x^{}", u, v, ram, e)));
        };
        let a = alpha.numer();
        let a: i64 = a.try_into().expect("small exponent");
        let uc = super::laurent::pow_rat(&root, a);
        (e / 2 * a, v / 2 * a, uc)
    };
    let inv_lead = LaurentPoly::monomial(-e, u.recip());
    // Relative precision available.
    let rel_from_input = f.acc().map(|a| a - v);
    let rel_from_cap = cap * ram + ram - 1 - ve;
    let h_is_zero = f.is_exact() && f.iter().count() == 1;
    if h_is_zero {
        return Ok(PuiseuxSeries::monomial(f.ram(), ve, LaurentPoly::monomial(ue, uc)));
    }
    let rel = min_opt(rel_from_input, Some(rel_from_cap)).unwrap();
    if rel < 0 {
        return Ok(PuiseuxSeries::zero_through(f.ram(), ve + rel));
    }
    let n_max = rel as usize;
    let h: Vec<LaurentPoly> = (0..=n_max).map(|j| &f.coeff(v + j as i64) * &inv_lead).collect();
    let mut g: Vec<LaurentPoly> = Vec::with_capacity(n_max + 1);
    g.push(LaurentPoly::one());
    let ap1 = alpha + Rational::one();
    for n in 1..=n_max {
        let mut acc = DenseAcc::new();
        let nn = Rational::from_integer((n as i64).into());
        for j in 1..=n {
            if h[j].is_zero() || g[n - j].is_zero() {
                continue;
            }
            let w = &ap1 * Rational::from_integer((j as i64).into()) - &nn;
            if w.is_zero() {
                continue;
            }
            acc.add_product(&h[j].scale(&w), &g[n - j]);
        }
        g.push(acc.finish().scale(&nn.recip()));
    }
    let lead_out = LaurentPoly::monomial(ue, uc);
    let coeffs: Vec<LaurentPoly> = g.iter().map(|p| p * &lead_out).collect();
    Ok(PuiseuxSeries::new(f.ram(), ve, coeffs, Some(ve + rel)))
}

impl PuiseuxSeries {
    /// 1/f; exact inputs are expanded through t^cap.
    pub fn invert(&self, cap: i64) -> SeriesResult<PuiseuxSeries> {
        power(self, &-Rational::one(), cap)
    }

    pub fn sqrt(&self, cap: i64) -> SeriesResult<PuiseuxSeries> {
        power(self, &Rational::new(1.into(), 2.into()), cap)
    }

    pub fn inv_sqrt(&self, cap: i64) -> SeriesResult<PuiseuxSeries> {
        power(self, &Rational::new((-1).into(), 2.into()), cap)
    }

    pub fn div(&self, d: &PuiseuxSeries, cap: i64) -> SeriesResult<PuiseuxSeries> {
        if self.is_exact_zero() {
            return Ok(PuiseuxSeries::exact_zero());
        }
        let vs = self.val_bound().unwrap_or(0).div_euclid(self.ram() as i64);
        let inv = d.invert(cap - vs + 1)?;
        Ok((self * &inv).truncate_t(cap))
    }

    /// Compose x := X where X is x-free with positive valuation.
    ///
    /// Accuracy: min(A_f − v·D, min over terms (k + A_X + (e−1)v), cap), where D bounds the
    /// x-pole order of f.
    pub fn substitute_x(&self, x: &PuiseuxSeries, cap: Option<i64>) -> SeriesResult<PuiseuxSeries> {
        assert!(x.is_x_free(), "substituted series must be x-free");
        let (f, xs) = PuiseuxSeries::unify(self, x);
        let r = f.ram() as i64;
        let Some(v) = xs.valuation() else {
            return Err(SeriesError::NonPositiveValuation("0".into()));
        };
        if v <= 0 {
            return Err(SeriesError::NonPositiveValuation(format!("{}/{}", v, r)));
        }
        let (emin, emax) = f.x_range().unwrap_or((0, 0));
        let pole = (-emin).max(0);
        let mut acc: Option<i64> = cap.map(|c| c * r + r - 1);
        if let Some(af) = f.acc() {
            acc = min_opt(acc, Some(af - v * pole));
        }
        if let Some(ax) = xs.acc() {
            for (k, p) in f.iter() {
                for (e, _) in p.terms() {
                    if *e != 0 {
                        acc = min_opt(acc, Some(k + ax + (e - 1) * v));
                    }
                }
            }
        }
        if emin < 0 && acc.is_none() {
            return Err(SeriesError::PrecisionExhausted { needed: i64::MAX, available: 0 });
        }
        if let Some(a) = acc {
            if a < 0 {
                return Err(SeriesError::PrecisionExhausted { needed: 0, available: a });
            }
        }
        let kmin = f.valuation().unwrap_or(0);
        // Powers only need accuracy up to acc − kmin.
        let pcap = acc.map(|a| a - kmin);
        let clip = |s: PuiseuxSeries| match pcap {
            Some(c) => s.truncate(c),
            None => s,
        };
        let mut pos_pows: Vec<PuiseuxSeries> = vec![PuiseuxSeries::one().to_ram(xs.ram())];
        for _ in 1..=emax.max(0) {
            let next = clip(&pos_pows[pos_pows.len() - 1] * &xs);
            pos_pows.push(next);
        }
        let mut neg_pows: Vec<PuiseuxSeries> = vec![PuiseuxSeries::one().to_ram(xs.ram())];
        if emin < 0 {
            // Negative valuations: keep pole·v extra orders in the intermediate powers.
            let ncap = pcap.unwrap() + pole * v;
            let inv = xs.invert((ncap + pole * v).div_euclid(r) + 1)?;
            for _ in 1..=pole {
                let next = (&neg_pows[neg_pows.len() - 1] * &inv).truncate(ncap);
                neg_pows.push(next);
            }
            for p in neg_pows.iter_mut() {
                *p = clip(p.clone());
            }
        }
        let mut out = match acc {
            Some(a) => PuiseuxSeries::zero_through(f.ram(), a),
            None => PuiseuxSeries::exact_zero(),
        };
        for (k, p) in f.iter() {
            let mut block = PuiseuxSeries::exact_zero();
            for (e, c) in p.terms() {
                let pw = if *e >= 0 { &pos_pows[*e as usize] } else { &neg_pows[(-e) as usize] };
                block = &block + &pw.scale(c);
            }
            out = &out + &block.shift_t(k);
        }
        Ok(match acc {
            Some(a) => out.truncate(a),
            None => out,
        })
    }

    /// Solve d·q = self order by order in t, dividing Laurent polynomials exactly at each
    /// step. Needed when the lowest coefficient of d is not a monomial.
    pub fn div_orderwise(&self, d: &PuiseuxSeries) -> SeriesResult<PuiseuxSeries> {
        let (n, d) = PuiseuxSeries::unify(self, d);
        let Some((dv, dlead)) = d.leading() else {
            return Err(SeriesError::ZeroSeries(d.acc()));
        };
        let dlead = dlead.clone();
        let acc = min_opt(n.acc().map(|a| a - dv), d.acc().map(|a| a - 2 * dv + n.val_bound().unwrap_or(dv)));
        let Some(acc) = acc else {
            return Err(SeriesError::PrecisionExhausted { needed: i64::MAX, available: 0 });
        };
        let Some(nv) = n.valuation() else {
            return Ok(PuiseuxSeries::zero_through(n.ram(), acc));
        };
        let q0 = nv - dv;
        let mut q: Vec<LaurentPoly> = Vec::new();
        let mut k = q0;
        while k <= acc {
            let mut rhs = n.coeff(k + dv);
            for (i, qi) in q.iter().enumerate() {
                let qk = q0 + i as i64;
                if let Some(dc) = d.coeff_ref(k - qk + dv) {
                    if k - qk > 0 {
                        rhs = &rhs - &(dc * qi);
                    }
                }
            }
            let Some(quo) = rhs.div_exact(&dlead) else {
                return Err(SeriesError::DivisibilityFailure {
                    order: k,
                    detail: format!("({}) / ({})", rhs, dlead),
                });
            };
            q.push(quo);
            k += 1;
        }
        Ok(PuiseuxSeries::new(n.ram(), q0, q, Some(acc)))
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
    fn geometric_inverse() {
        let f = s(&[(0, 0, 1), (1, 1, -1)]);
        let g = f.invert(6).unwrap();
        assert_eq!(g.acc(), Some(6));
        for k in 0..=6 {
            assert_eq!(g.coeff(k), LaurentPoly::x_pow(k));
        }
        assert_eq!(s(&[(1, 0, 1)]).invert(3).unwrap(), s(&[(-1, 0, 1)]));
    }

    #[test]
    fn sqrt_of_one_minus_four_t() {
        let f = s(&[(0, 0, 1), (1, 0, -4)]);
        let r = f.sqrt(5).unwrap();
        let expect = s(&[(0, 0, 1), (1, 0, -2), (2, 0, -2), (3, 0, -4), (4, 0, -10), (5, 0, -28)]);
        assert!(r.agrees_with(&expect));
        assert_eq!(s(&[(0, 0, 1), (1, 0, 2), (2, 0, 1)]).sqrt(4).unwrap().truncate(4), s(&[(0, 0, 1), (1, 0, 1)]).truncate(4));
        assert!(matches!(s(&[(0, 0, 2)]).sqrt(3), Err(SeriesError::NonSquareLeadingTerm(_))));
        assert!(matches!(s(&[(1, 0, 1)]).sqrt(3), Err(SeriesError::NonSquareLeadingTerm(_))));
    }

    #[test]
    fn substitution_of_monomials() {
        let f = s(&[(0, 1, 1), (0, -1, 1)]);
        let g = f.substitute_x(&PuiseuxSeries::t(), Some(5)).unwrap();
        assert!(g.agrees_with(&s(&[(1, 0, 1), (-1, 0, 1)])));
        let p = s(&[(0, 2, 1), (0, 0, 3), (0, -1, 1)]);
        assert_eq!(p.invert_x(), s(&[(0, -2, 1), (0, 0, 3), (0, 1, 1)]));
    }

    #[test]
    fn orderwise_division() {
        // d = (x + t x^2) has non-monomial lowest coefficient after shifting by (1 + x).
        let d = s(&[(0, 1, 1), (0, 2, 1), (1, 3, 2)]);
        let q = s(&[(0, 0, 1), (1, 1, 3), (2, 0, -1)]);
        let n = &d * &q;
        let back = n.truncate(6).div_orderwise(&d).unwrap();
        assert!(back.agrees_with(&q));
        assert_eq!(back.acc(), Some(6));
    }
}
