use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::error::{SeriesError, SeriesResult};
use super::laurent::LaurentPoly;
use super::puiseux::PuiseuxSeries;
use super::rational::{lcm_u32, rational_roots, Rational};

/// A root of a polynomial in x with series coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSeries {
    pub value: PuiseuxSeries,
    pub valuation: Rational,
}

impl RootSeries {
    pub fn new(value: PuiseuxSeries) -> Self {
        let valuation = value.valuation_rational().expect("roots are nonzero");
        Self { value, valuation }
    }

    /// Finite at t = 0.
    pub fn is_finite(&self) -> bool {
        !self.valuation.is_negative()
    }
}

/// Polynomial in x whose coefficients are x-free series: coeffs[i] multiplies x^i.
pub fn coefficients_in_x(p: &PuiseuxSeries) -> Vec<PuiseuxSeries> {
    let (lo, hi) = p.x_range().unwrap_or((0, 0));
    assert!(lo >= 0, "polynomial in x expected");
    (0..=hi).map(|i| p.x_coeff(i)).collect()
}

fn lc(s: &PuiseuxSeries) -> Rational {
    s.leading().and_then(|(_, p)| p.as_constant()).expect("x-free nonzero series")
}

/// Horner evaluation at an x-free series, keeping terms through `limit` (ram units of s).
fn eval_at(p: &[PuiseuxSeries], s: &PuiseuxSeries, limit: i64) -> PuiseuxSeries {
    let mut acc = PuiseuxSeries::exact_zero();
    for c in p.iter().rev() {
        acc = (&(&acc * s) + c).truncate(limit);
    }
    acc
}

fn derivative(p: &[PuiseuxSeries]) -> Vec<PuiseuxSeries> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&Rational::from_integer((i as i64).into())))
        .collect()
}

/// Lower convex hull of the Newton polygon; returns consecutive vertex indices.
fn lower_hull(pts: &[(i64, Rational)]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::new();
    for (idx, _) in pts.iter().enumerate() {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let (xo, yo) = (Rational::from_integer(pts[o].0.into()), &pts[o].1);
            let (xa, ya) = (Rational::from_integer(pts[a].0.into()), &pts[a].1);
            let (xb, yb) = (Rational::from_integer(pts[idx].0.into()), &pts[idx].1);
            let cross = (&xa - &xo) * (yb - yo) - (ya - yo) * (&xb - &xo);
            if cross <= Rational::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(idx);
    }
    hull
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut r = Rational::one();
    for i in 0..k {
        r = r * Rational::from_integer(((n - i) as i64).into()) / Rational::from_integer(((i + 1) as i64).into());
    }
    r
}

/// Term-by-term refinement of a simple root starting from c·t^γ.
fn refine_simple(p: &[PuiseuxSeries], ram: u32, gamma: i64, c: Rational, target: i64) -> SeriesResult<PuiseuxSeries> {
    let p: Vec<PuiseuxSeries> = p.iter().map(|c| c.to_ram(ram)).collect();
    let deg = p.len() as i64 - 1;
    let mut s = PuiseuxSeries::monomial(ram, gamma, LaurentPoly::constant(c));
    let neg_slack = if gamma < 0 { -gamma * deg } else { 0 };
    let dp = derivative(&p);
    let a1 = eval_at(&dp, &s, i64::MAX / 4);
    let Some(v1) = a1.valuation() else {
        return Err(SeriesError::IndistinctLeadingTerms(s.to_string()));
    };
    let l1 = lc(&a1);
    let mut last = gamma;
    loop {
        let limit = target + v1 + 1 + neg_slack;
        let a0 = eval_at(&p, &s, limit);
        if a0.is_exact_zero() {
            return Ok(s);
        }
        let Some(v0) = a0.valuation() else {
            let acc = a0.acc().unwrap() - v1;
            return Ok(s.truncate(acc.min(target.max(acc))));
        };
        let g = v0 - v1;
        if g <= last {
            return Err(SeriesError::IndistinctLeadingTerms(s.to_string()));
        }
        if g > target {
            return Ok(s.truncate(g - 1));
        }
        let c = -lc(&a0) / &l1;
        s = &s + &PuiseuxSeries::monomial(ram, g, LaurentPoly::constant(c));
        last = g;
    }
}

/// Roots with valuation > `min_val` (None: all roots), accurate through t^target.
fn roots_rec(p: &[PuiseuxSeries], target: &Rational, min_val: Option<&Rational>) -> SeriesResult<Vec<PuiseuxSeries>> {
    let mut p: Vec<PuiseuxSeries> = p.to_vec();
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    let pts: Vec<(i64, Rational)> = p
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.valuation_rational().map(|v| (i as i64, v)))
        .collect();
    if pts.len() < 2 {
        return Ok(Vec::new());
    }
    let hull = lower_hull(&pts);
    let mut out = Vec::new();
    for w in hull.windows(2) {
        let (i0, v0) = (&pts[w[0]].0, &pts[w[0]].1);
        let (i1, v1) = (&pts[w[1]].0, &pts[w[1]].1);
        let gamma = -(v1 - v0) / Rational::from_integer((i1 - i0).into());
        if let Some(m) = min_val {
            if &gamma <= m {
                continue;
            }
        }
        // Characteristic polynomial from the points on this edge.
        let base = v0 + &gamma * Rational::from_integer((*i0).into());
        let mut chi = vec![Rational::zero(); (i1 - i0 + 1) as usize];
        for (i, v) in &pts {
            if i >= i0 && i <= i1 && v + &gamma * Rational::from_integer((*i).into()) == base {
                chi[(i - i0) as usize] = lc(&p[*i as usize]);
            }
        }
        let (found, rest) = rational_roots(&chi);
        if rest > 0 {
            let shown: Vec<String> = chi.iter().map(|c| c.to_string()).collect();
            return Err(SeriesError::NonRationalLeadingCoefficient(shown.join(",")));
        }
        let gden: u32 = gamma.denom().try_into().expect("small ramification");
        let ram = lcm_u32(p.iter().map(|c| c.ram()).fold(1, lcm_u32), gden);
        let g_units: i64 = (&gamma * Rational::from_integer((ram as i64).into())).to_integer().try_into().unwrap();
        for (c, mult) in found {
            if mult == 1 {
                let tgt: i64 = (target * Rational::from_integer((ram as i64).into())).ceil().to_integer().try_into().unwrap();
                out.push(refine_simple(&p, ram, g_units, c, tgt)?);
                continue;
            }
            // x = t^γ (c + y); recurse for the y → 0 roots.
            let n = p.len();
            let mut q = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = PuiseuxSeries::exact_zero();
                for (i, pi) in p.iter().enumerate().skip(j) {
                    let coef = binomial(i, j) * super::laurent::pow_rat(&c, (i - j) as i64);
                    if coef.is_zero() {
                        continue;
                    }
                    acc = &acc + &pi.to_ram(ram).shift_t(g_units * i as i64).scale(&coef);
                }
                q.push(acc);
            }
            let sub = roots_rec(&q, &(target - &gamma), Some(&Rational::zero()))?;
            if sub.len() != mult {
                return Err(SeriesError::IndistinctLeadingTerms(format!("{}*t^({})", c, gamma)));
            }
            for y in sub {
                let lead = PuiseuxSeries::monomial(ram, 0, LaurentPoly::constant(c.clone()));
                let r = (&lead + &y).to_ram(lcm_u32(ram, y.ram()));
                let shift = PuiseuxSeries::monomial(ram, g_units, LaurentPoly::one());
                out.push((&r * &shift).simplify_ram());
            }
        }
    }
    Ok(out)
}

fn cmp_roots(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Ordering {
    let (va, vb) = (a.valuation_rational(), b.valuation_rational());
    match vb.cmp(&va) {
        Ordering::Equal => {}
        o => return o,
    }
    let (x, y) = PuiseuxSeries::unify(a, b);
    let d = &x - &y;
    match d.leading().and_then(|(_, p)| p.as_constant()) {
        Some(c) if c.is_positive() => Ordering::Less,
        Some(c) if c.is_negative() => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// All Puiseux roots of Σ coeffs[i]·x^i through t^target (whole t units).
///
/// Ordered finite roots first (larger valuation first); conjugates with a common leading
/// part are ordered by their first differing coefficient, larger first.
pub fn puiseux_roots(coeffs: &[PuiseuxSeries], target: i64) -> SeriesResult<Vec<RootSeries>> {
    for c in coeffs {
        assert!(c.is_x_free(), "root finding needs x-free coefficients");
    }
    let tgt = Rational::from_integer(target.into());
    let mut roots = roots_rec(coeffs, &tgt, None)?;
    roots = roots.into_iter().map(|r| r.simplify_ram()).collect();
    roots.sort_by(cmp_roots);
    Ok(roots.into_iter().map(RootSeries::new).collect())
}

/// Quadratic formula root (n ∓ √disc)/den, with √disc taken with positive leading coefficient.
/// `minus` selects the upper sign.
pub fn quadratic_branch(n: &PuiseuxSeries, den: &PuiseuxSeries, disc: &PuiseuxSeries, minus: bool, cap: i64) -> SeriesResult<PuiseuxSeries> {
    let mut d = disc.clone();
    if let Some(v) = d.valuation() {
        if v.is_odd() {
            d = d.reramify(2);
        }
    }
    let mut root = d.sqrt(cap + 2)?;
    if lc(&root).is_negative() {
        root = -&root;
    }
    let num = if minus { n - &root } else { n + &root };
    num.div(den, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::rational::int;

    fn c(k: i64, v: i64) -> PuiseuxSeries {
        PuiseuxSeries::term(k, 0, int(v))
    }

    #[test]
    fn square_root_of_t() {
        let p = vec![c(1, -1), PuiseuxSeries::exact_zero(), c(0, 1)];
        let r = puiseux_roots(&p, 5).unwrap();
        assert_eq!(r.len(), 2);
        let half = PuiseuxSeries::monomial(2, 1, LaurentPoly::one());
        assert!(r[0].value.agrees_with(&half));
        assert!(r[1].value.agrees_with(&-&half));
        assert!(r[0].value.acc_t().unwrap() >= 5);
        assert_eq!(r[0].valuation, Rational::new(1.into(), 2.into()));
    }

    #[test]
    fn simple_roots_refine() {
        // x^2 - x + t: roots t + t^2 + 2t^3 + 5t^4 + ... and 1 - t - ...
        let p = vec![c(1, 1), c(0, -1), c(0, 1)];
        let r = puiseux_roots(&p, 6).unwrap();
        assert_eq!(r.len(), 2);
        let small = &r[0].value;
        assert_eq!(small.coeff(4), LaurentPoly::constant(int(5)));
        for root in &r {
            let val = eval_at(&p, &root.value, 6);
            assert!(val.iter().all(|(k, _)| k > 6));
        }
    }
}
