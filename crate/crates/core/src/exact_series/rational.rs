use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Always "p/q", including q = 1.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt(r.numer())?;
    let d = int_sqrt(r.denom())?;
    Some(Rational::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Rational roots of a polynomial (coefficients low to high), with multiplicities.
/// Roots at zero are not reported. Returns the roots and the degree left unresolved.
pub fn rational_roots(coeffs: &[Rational]) -> (Vec<(Rational, usize)>, usize) {
    let mut p: Vec<Rational> = coeffs.to_vec();
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    let lead_zeros = p.iter().take_while(|c| c.is_zero()).count();
    p.drain(..lead_zeros);
    if p.len() <= 1 {
        return (Vec::new(), 0);
    }
    let mut den = BigInt::one();
    for c in &p {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let c0 = ints[0].abs();
    let cn = ints[ints.len() - 1].abs();
    let mut cands = Vec::new();
    for q in divisors(&cn) {
        for pn in divisors(&c0) {
            let r = Rational::new(pn.clone(), q.clone());
            cands.push(r.clone());
            cands.push(-r);
        }
    }
    cands.sort();
    cands.dedup();
    let mut found = Vec::new();
    for r in cands {
        let mut m = 0;
        while p.len() > 1 {
            let (q, rem) = synthetic_div(&p, &r);
            if !rem.is_zero() {
                break;
            }
            p = q;
            m += 1;
        }
        if m > 0 {
            found.push((r, m));
        }
    }
    (found, p.len() - 1)
}

fn synthetic_div(p: &[Rational], r: &Rational) -> (Vec<Rational>, Rational) {
    let n = p.len();
    let mut q = vec![Rational::zero(); n - 1];
    let mut acc = Rational::zero();
    for i in (0..n).rev() {
        acc = &acc * r + &p[i];
        if i > 0 {
            q[i - 1] = acc.clone();
        }
    }
    (q, acc)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let e = &n / &d;
            if e != d {
                large.push(e);
            }
            small.push(d.clone());
        }
        d += 1;
        if d > BigInt::from(2_000_000u32) {
            break;
        }
    }
    large.reverse();
    small.extend(large);
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-4"), Some(int(-4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(&int(5)), "5/1");
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
    }

    #[test]
    fn square_roots() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        assert_eq!(rational_sqrt(&rat(-1, 1)), None);
    }

    #[test]
    fn roots_with_multiplicity() {
        // (c - 1)^2 (c + 1/2) c
        let p = vec![int(0), rat(1, 2), rat(0, 1), rat(-3, 2), int(1)];
        let (roots, rest) = rational_roots(&p);
        assert_eq!(rest, 0);
        assert_eq!(roots, vec![(rat(-1, 2), 1), (int(1), 2)]);
        let (roots, rest) = rational_roots(&[int(-2), int(0), int(1)]);
        assert!(roots.is_empty());
        assert_eq!(rest, 2);
    }
}
