use num_traits::{One, Zero};

use super::model::ModelSpec;
use super::OracleError;
use crate::exact_series::tri::TriLaurent;
use crate::exact_series::{LaurentPoly, PuiseuxSeries, Rational};

/// Which generating series to read off a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Selector {
    /// Walks ending on y = i, x marking the x-coordinate.
    LineY(i64),
    /// Walks ending on x = i, x marking the y-coordinate.
    LineX(i64),
    /// Walks ending on y − x = j, x marking the x-coordinate.
    Diag(i64),
    Point(i64, i64),
}

/// Weighted walk counts by length and endpoint.
#[derive(Debug, Clone)]
pub struct WalkTable {
    model: ModelSpec,
    order: usize,
    // layers[n][k * (n + 1) + l]
    layers: Vec<Vec<Rational>>,
}

impl WalkTable {
    pub fn enumerate(model: &ModelSpec, order: usize) -> Self {
        let mut layers = Vec::with_capacity(order + 1);
        layers.push(vec![Rational::one()]);
        for n in 1..=order {
            let prev: &Vec<Rational> = &layers[n - 1];
            let w = n + 1;
            let mut next = vec![Rational::zero(); w * w];
            for k in 0..n {
                for l in 0..n {
                    let v = &prev[k * n + l];
                    if v.is_zero() {
                        continue;
                    }
                    for &(dx, dy) in model.steps() {
                        let (nk, nl) = (k as i64 + dx, l as i64 + dy);
                        if nk < 0 || nl < 0 {
                            continue;
                        }
                        next[nk as usize * w + nl as usize] += v * model.vertex_weight(nk, nl);
                    }
                }
            }
            layers.push(next);
        }
        Self { model: model.clone(), order, layers }
    }

    pub fn model(&self) -> &ModelSpec {
        &self.model
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Weighted count of length-n walks ending at (k, l).
    pub fn count(&self, n: usize, k: i64, l: i64) -> Rational {
        if n > self.order || k < 0 || l < 0 || k as usize > n || l as usize > n {
            return Rational::zero();
        }
        self.layers[n][k as usize * (n + 1) + l as usize].clone()
    }

    /// Nonzero (k, l, count) at length n.
    pub fn layer(&self, n: usize) -> impl Iterator<Item = (i64, i64, &Rational)> {
        let w = n + 1;
        self.layers[n].iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(i, v)| ((i / w) as i64, (i % w) as i64, v))
    }

    pub fn boundary_series(&self, sel: Selector) -> Result<PuiseuxSeries, OracleError> {
        let bad = match sel {
            Selector::LineY(i) | Selector::LineX(i) => i < 0,
            Selector::Point(i, j) => i < 0 || j < 0,
            Selector::Diag(_) => false,
        };
        if bad {
            return Err(OracleError::SelectorOutOfRange(format!("{sel:?}")));
        }
        let mut terms = Vec::with_capacity(self.order + 1);
        for n in 0..=self.order {
            let mut p: Vec<(i64, Rational)> = Vec::new();
            for (k, l, v) in self.layer(n) {
                let e = match sel {
                    Selector::LineY(i) if l == i => Some(k),
                    Selector::LineX(i) if k == i => Some(l),
                    Selector::Diag(j) if l - k == j => Some(k),
                    Selector::Point(i, j) if (k, l) == (i, j) => Some(0),
                    _ => None,
                };
                if let Some(e) = e {
                    p.push((e, v.clone()));
                }
            }
            terms.push((n as i64, LaurentPoly::from_terms(p)));
        }
        Ok(PuiseuxSeries::from_terms(1, terms, Some(self.order as i64)))
    }

    /// Q(x, y) truncated at t^order.
    pub fn full(&self) -> TriLaurent {
        let mut q = TriLaurent::zero();
        for n in 0..=self.order {
            for (k, l, v) in self.layer(n) {
                q.add_term(k, l, n as i64, v.clone());
            }
        }
        q
    }
}

fn truncate_tri(f: &TriLaurent, order: i64) -> TriLaurent {
    let mut out = TriLaurent::zero();
    for (&(x, y, t), v) in f.terms() {
        if t <= order {
            out.add_term(x, y, t, v.clone());
        }
    }
    out
}

fn embed_x(s: &PuiseuxSeries, as_y: bool) -> TriLaurent {
    let mut out = TriLaurent::zero();
    for (k, e, c) in s.triples() {
        if as_y {
            out.add_term(0, e, k, c.clone());
        } else {
            out.add_term(e, 0, k, c.clone());
        }
    }
    out
}

/// K·Q − (1/c + A′Q(x,0) + B′Q(0,y) + (κ + tG)Q(0,0)) through t^order; zero for a correct table.
pub fn functional_equation_residual(table: &WalkTable) -> TriLaurent {
    let m = table.model();
    let n = table.order() as i64;
    let q = table.full();
    let qx0 = embed_x(&table.boundary_series(Selector::LineY(0)).unwrap(), false);
    let q0y = embed_x(&table.boundary_series(Selector::LineX(0)).unwrap(), true);
    let q00 = embed_x(&table.boundary_series(Selector::Point(0, 0)).unwrap(), false);
    let rhs = &(&(&TriLaurent::constant(Rational::one() / &m.weights.c) + &(&m.a_prime() * &qx0)) + &(&m.b_prime() * &q0y))
        + &(&m.origin_coeff() * &q00);
    truncate_tri(&(&(&m.kernel() * &q) - &rhs), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::rational::int;
    use crate::walk_oracle::{ModelName, Weights};

    fn table(name: ModelName, w: (&str, &str, &str), n: usize) -> WalkTable {
        WalkTable::enumerate(&ModelSpec::new(name, Weights::parse(w.0, w.1, w.2).unwrap()), n)
    }

    #[test]
    fn first_step() {
        let t = table(ModelName::ReverseKreweras, ("2", "3", "5"), 3);
        let got: Vec<_> = t.layer(1).map(|(k, l, v)| (k, l, v.clone())).collect();
        assert_eq!(got, vec![(0, 1, int(3)), (1, 0, int(2))]);
        assert_eq!(t.count(0, 0, 0), int(1));
        assert_eq!(t.count(3, 0, 0), int(25));
    }

    #[test]
    fn kreweras_excursions() {
        let t = table(ModelName::Kreweras, ("1", "1", "1"), 9);
        let got: Vec<_> = (0..=9).map(|n| t.count(n, 0, 0)).collect();
        let want: Vec<_> = [1, 0, 0, 2, 0, 0, 16, 0, 0, 192].iter().map(|&v| int(v)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn selectors() {
        let t = table(ModelName::ReverseKreweras, ("2", "3", "5"), 4);
        let qx0 = t.boundary_series(Selector::LineY(0)).unwrap();
        assert_eq!(qx0.coeff(1), LaurentPoly::monomial(1, int(2)));
        assert_eq!(t.boundary_series(Selector::Diag(0)).unwrap().coeff(0), LaurentPoly::one());
        assert!(t.boundary_series(Selector::LineY(-1)).is_err());
        let d3 = t.boundary_series(Selector::Diag(-3)).unwrap();
        assert_eq!(d3.valuation(), Some(3));
        assert_eq!(d3.coeff(3), LaurentPoly::monomial(3, int(8)));
    }

    #[test]
    fn residual_vanishes() {
        for name in [ModelName::Kreweras, ModelName::ReverseKreweras] {
            for w in [("2", "3", "5"), ("1", "1", "1"), ("1/2", "3", "2")] {
                assert!(functional_equation_residual(&table(name, w, 12)).is_zero(), "{name} {w:?}");
            }
        }
    }
}
