use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::OracleError;
use crate::exact_series::tri::{MonomialMap, TriLaurent};
use crate::exact_series::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelName {
    Kreweras,
    ReverseKreweras,
}

impl ModelName {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::Kreweras => "kreweras",
            ModelName::ReverseKreweras => "reverse-kreweras",
        }
    }

    pub fn steps(self) -> &'static [(i64, i64)] {
        match self {
            ModelName::ReverseKreweras => &[(1, 0), (0, 1), (-1, -1)],
            ModelName::Kreweras => &[(1, 1), (0, -1), (-1, 0)],
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelName {
    type Err = OracleError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "kreweras" => Ok(ModelName::Kreweras),
            "reverse-kreweras" => Ok(ModelName::ReverseKreweras),
            _ => Err(OracleError::UnknownModel(s.to_string())),
        }
    }
}

/// Boundary weights: a on the x-axis, b on the y-axis, c at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weights {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Weights {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self, OracleError> {
        for (name, w) in [("a", &a), ("b", &b), ("c", &c)] {
            if w.is_zero() {
                return Err(OracleError::InvalidWeight(format!("{name} must be nonzero")));
            }
        }
        Ok(Self { a, b, c })
    }

    pub fn parse(a: &str, b: &str, c: &str) -> Result<Self, OracleError> {
        let p = |s: &str| parse_rational(s).ok_or_else(|| OracleError::InvalidWeight(s.to_string()));
        Self::new(p(a)?, p(b)?, p(c)?)
    }

    pub fn unit() -> Self {
        Self { a: Rational::one(), b: Rational::one(), c: Rational::one() }
    }

    /// (b, a, c): the weights seen after reflecting in the diagonal.
    pub fn swapped(&self) -> Self {
        Self { a: self.b.clone(), b: self.a.clone(), c: self.c.clone() }
    }

    /// (ac + bc − ab − abc)/(abc), the extra origin coefficient.
    pub fn kappa(&self) -> Rational {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        (a * c + b * c - a * b - a * b * c) / (a * b * c)
    }

    pub fn strings(&self) -> [String; 3] {
        [format_rational(&self.a), format_rational(&self.b), format_rational(&self.c)]
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.strings();
        write!(f, "({a}, {b}, {c})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    pub name: ModelName,
    pub weights: Weights,
}

/// The six substitutions fixing the kernel, in a fixed order.
pub const GROUP: [MonomialMap; 6] = [
    ((1, 0), (0, 1)),
    ((-1, -1), (0, 1)),
    ((0, 1), (-1, -1)),
    ((0, 1), (1, 0)),
    ((-1, -1), (1, 0)),
    ((1, 0), (-1, -1)),
];

impl ModelSpec {
    pub fn new(name: ModelName, weights: Weights) -> Self {
        Self { name, weights }
    }

    pub fn steps(&self) -> &'static [(i64, i64)] {
        self.name.steps()
    }

    fn step_sum<F: Fn(i64, i64) -> bool>(&self, keep: F) -> TriLaurent {
        let mut s = TriLaurent::zero();
        for &(dx, dy) in self.steps() {
            if keep(dx, dy) {
                s.add_term(dx, dy, 0, Rational::one());
            }
        }
        s
    }

    /// Step generator S(x, y).
    pub fn s(&self) -> TriLaurent {
        self.step_sum(|_, _| true)
    }

    /// Steps leaving through the x-axis.
    pub fn a_marker(&self) -> TriLaurent {
        self.step_sum(|_, dy| dy == -1)
    }

    /// Steps leaving through the y-axis.
    pub fn b_marker(&self) -> TriLaurent {
        self.step_sum(|dx, _| dx == -1)
    }

    /// Steps leaving through the corner.
    pub fn g_marker(&self) -> TriLaurent {
        self.step_sum(|dx, dy| dx == -1 && dy == -1)
    }

    /// K = 1 − tS.
    pub fn kernel(&self) -> TriLaurent {
        &TriLaurent::one() - &(&TriLaurent::t() * &self.s())
    }

    /// (a − 1)/a − tA: coefficient of Q(x, 0) on the right.
    pub fn a_prime(&self) -> TriLaurent {
        let a = &self.weights.a;
        &TriLaurent::constant((a - Rational::one()) / a) - &(&TriLaurent::t() * &self.a_marker())
    }

    /// (b − 1)/b − tB: coefficient of Q(0, y) on the right.
    pub fn b_prime(&self) -> TriLaurent {
        let b = &self.weights.b;
        &TriLaurent::constant((b - Rational::one()) / b) - &(&TriLaurent::t() * &self.b_marker())
    }

    /// κ + tG: coefficient of Q(0, 0) on the right.
    pub fn origin_coeff(&self) -> TriLaurent {
        &TriLaurent::constant(self.weights.kappa()) + &(&TriLaurent::t() * &self.g_marker())
    }

    /// Weight of the vertex (k, l) when a walk arrives there.
    pub fn vertex_weight(&self, k: i64, l: i64) -> &Rational {
        match (k, l) {
            (0, 0) => &self.weights.c,
            (_, 0) => &self.weights.a,
            (0, _) => &self.weights.b,
            _ => &ONE,
        }
    }
}

static ONE: std::sync::LazyLock<Rational> = std::sync::LazyLock::new(Rational::one);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_fixes_kernel() {
        for name in [ModelName::Kreweras, ModelName::ReverseKreweras] {
            let m = ModelSpec::new(name, Weights::parse("2", "3", "5").unwrap());
            let k = m.kernel();
            for g in GROUP {
                assert_eq!(k.apply(g), k, "{name} {g:?}");
            }
        }
    }

    #[test]
    fn markers() {
        let rk = ModelSpec::new(ModelName::ReverseKreweras, Weights::unit());
        let xbyb = TriLaurent::monomial(-1, -1, 0, Rational::one());
        assert_eq!(rk.a_marker(), xbyb);
        assert_eq!(rk.b_marker(), xbyb);
        assert_eq!(rk.g_marker(), xbyb);
        let kr = ModelSpec::new(ModelName::Kreweras, Weights::unit());
        assert_eq!(kr.a_marker(), TriLaurent::monomial(0, -1, 0, Rational::one()));
        assert_eq!(kr.b_marker(), TriLaurent::monomial(-1, 0, 0, Rational::one()));
        assert!(kr.g_marker().is_zero());
    }

    #[test]
    fn constant_term_identity() {
        let w = Weights::parse("2/3", "7", "-5/2").unwrap();
        let (a, b, c) = (&w.a, &w.b, &w.c);
        let one = Rational::one();
        let total = &one / c + (a - &one) / a + (b - &one) / b + w.kappa();
        assert_eq!(total, one);
    }

    #[test]
    fn parse_names() {
        assert_eq!("reverse_kreweras".parse::<ModelName>().unwrap(), ModelName::ReverseKreweras);
        assert!("gessel".parse::<ModelName>().is_err());
        assert!(Weights::parse("0", "1", "1").is_err());
    }
}
