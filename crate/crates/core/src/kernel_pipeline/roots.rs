use num_traits::Signed;

use super::{PipelineError, PipelineResult};
use crate::exact_series::{quadratic_branch, PuiseuxSeries, Rational};
use crate::walk_oracle::{ModelName, ModelSpec};

/// Which kernel a root cancels: P_{x,0} in the [x^>] equation or P^d_0 in the [x^<] one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootFamily {
    Pos,
    Neg,
}

#[derive(Debug, Clone)]
pub struct KernelRoot {
    /// 1-based label; odd labels take the minus sign.
    pub label: usize,
    pub family: RootFamily,
    pub value: PuiseuxSeries,
    /// The quadratic factor it annihilates.
    pub factor: PuiseuxSeries,
}

/// (n ∓ √disc)/den together with its quadratic factor.
struct ClosedForm {
    family: RootFamily,
    n: PuiseuxSeries,
    den: PuiseuxSeries,
    disc: PuiseuxSeries,
    factor: PuiseuxSeries,
}

fn r(v: Rational) -> PuiseuxSeries {
    PuiseuxSeries::constant(v)
}

fn tx(k: i64, e: i64, c: Rational) -> PuiseuxSeries {
    PuiseuxSeries::term(k, e, c)
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// c0 + c1·x + c2·x² with c_i = coefficient·t^k.
fn quad(c0: (Rational, i64), c1: (Rational, i64), c2: (Rational, i64)) -> PuiseuxSeries {
    &(&tx(c0.1, 0, c0.0) + &tx(c1.1, 1, c1.0)) + &tx(c2.1, 2, c2.0)
}

/// The pair for factor w(w−1)t·x² − (w−1)x + w²t², n = w−1, den = 2wt(w−1).
fn single_small(w: &Rational, family: RootFamily) -> ClosedForm {
    let one = int(1);
    ClosedForm {
        family,
        n: r(w - &one),
        den: tx(1, 0, int(2) * w * (w - &one)),
        disc: &r((w - &one) * (w - &one)) - &tx(3, 0, int(4) * w * w * w * (w - &one)),
        factor: quad((w * w, 2), (&one - w, 0), (w * (w - &one), 1)),
    }
}

/// The pair for factor w²t²x² − (w−1)x + w(w−1)t, n = w−1, den = 2w²t².
fn single_large(w: &Rational, family: RootFamily) -> ClosedForm {
    let one = int(1);
    ClosedForm {
        family,
        n: r(w - &one),
        den: tx(2, 0, int(2) * w * w),
        disc: &r((w - &one) * (w - &one)) - &tx(3, 0, int(4) * w * w * w * (w - &one)),
        factor: quad((w * (w - &one), 1), (&one - w, 0), (w * w, 2)),
    }
}

fn closed_forms(model: &ModelSpec) -> Vec<ClosedForm> {
    let (a, b) = (&model.weights.a, &model.weights.b);
    let two = int(2);
    let s = a + b - &two;
    let m = int(2) * a * b - a - b;
    match model.name {
        ModelName::ReverseKreweras => vec![
            single_small(a, RootFamily::Pos),
            ClosedForm {
                family: RootFamily::Pos,
                n: r(s.clone()),
                den: tx(1, 0, &two * &m),
                disc: &r(&s * &s) - &tx(3, 0, int(8) * a * b * &m),
                factor: quad((int(2) * a * b, 2), (-s.clone(), 0), (m.clone(), 1)),
            },
            single_large(a, RootFamily::Neg),
            single_large(b, RootFamily::Neg),
        ],
        ModelName::Kreweras => vec![
            single_large(a, RootFamily::Pos),
            single_large(b, RootFamily::Pos),
            ClosedForm {
                family: RootFamily::Pos,
                n: r(s.clone()),
                den: tx(2, 0, int(4) * a * b),
                disc: &r(&s * &s) - &tx(3, 0, int(8) * a * b * &m),
                factor: quad((-m.clone(), 1), (s.clone(), 0), (-(int(2) * a * b), 2)),
            },
            single_small(a, RootFamily::Neg),
            single_small(b, RootFamily::Neg),
        ],
    }
}

/// The kernel roots that are power series in t (positive valuation), through t^order.
/// Roots whose closed form degenerates at these weights are absent.
pub fn kernel_roots(model: &ModelSpec, order: i64) -> PipelineResult<Vec<KernelRoot>> {
    let mut out = Vec::new();
    for (i, cf) in closed_forms(model).into_iter().enumerate() {
        if cf.den.is_zero() || cf.n.is_zero() {
            continue;
        }
        for (j, minus) in [true, false].into_iter().enumerate() {
            let label = 2 * i + j + 1;
            let Ok(value) = quadratic_branch(&cf.n, &cf.den, &cf.disc, minus, order) else {
                continue;
            };
            let value = value.simplify_ram();
            if !value.valuation_rational().is_some_and(|v| v.is_positive()) {
                continue;
            }
            let check = cf.factor.substitute_x(&value, Some(order))?;
            if !check.is_zero() {
                return Err(PipelineError::RootCheckFailed { label: format!("x{label}") });
            }
            out.push(KernelRoot { label, family: cf.family, value, factor: cf.factor.clone() });
        }
    }
    Ok(out)
}

/// The printed kernel polynomial of a family, as the product of its factors.
pub fn printed_kernel(model: &ModelSpec, family: RootFamily) -> PuiseuxSeries {
    closed_forms(model)
        .into_iter()
        .filter(|c| c.family == family)
        .fold(PuiseuxSeries::one(), |acc, c| &acc * &c.factor)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk_oracle::Weights;

    #[test]
    fn generic_weights_give_one_root_per_pair() {
        let m = ModelSpec::new(ModelName::ReverseKreweras, Weights::parse("3", "2", "5").unwrap());
        let labels: Vec<usize> = kernel_roots(&m, 8).unwrap().iter().map(|r| r.label).collect();
        assert_eq!(labels, vec![1, 3, 5, 7]);
        let k = ModelSpec::new(ModelName::Kreweras, Weights::parse("1/2", "3", "2").unwrap());
        let labels: Vec<usize> = kernel_roots(&k, 8).unwrap().iter().map(|r| r.label).collect();
        assert_eq!(labels, vec![2, 3, 5, 8, 9]);
    }

    #[test]
    fn unit_weights_lose_every_pair() {
        let m = ModelSpec::new(ModelName::ReverseKreweras, Weights::unit());
        assert!(kernel_roots(&m, 8).unwrap().is_empty());
    }
}
