use std::collections::BTreeMap;



use super::form::LinearForm;
use super::tag::UnknownTag;
use super::{FormError, FormResult};
use crate::exact_series::{PuiseuxSeries, Rational};

/// Solution of a square scalar system.
#[derive(Clone, Debug)]
pub struct Solved {
    pub values: BTreeMap<UnknownTag, PuiseuxSeries>,
    pub determinant: PuiseuxSeries,
}

/// Determinant of a square matrix of series by cofactor expansion (no division).
pub fn determinant(m: &[Vec<PuiseuxSeries>]) -> PuiseuxSeries {
    let n = m.len();
    if n == 0 {
        return PuiseuxSeries::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = PuiseuxSeries::exact_zero();
    for (col, entry) in m[0].iter().enumerate() {
        if entry.is_exact_zero() {
            continue;
        }
        let minor: Vec<Vec<PuiseuxSeries>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = entry * &determinant(&minor);
        acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Coefficient matrix of forms over the given unknowns (rows follow `eqs`).
pub fn matrix(eqs: &[LinearForm<PuiseuxSeries>], unknowns: &[UnknownTag]) -> Vec<Vec<PuiseuxSeries>> {
    eqs.iter()
        .map(|e| unknowns.iter().map(|u| e.coeff(u).cloned().unwrap_or_else(PuiseuxSeries::exact_zero)).collect())
        .collect()
}

/// Gaussian elimination with minimal-valuation pivoting. Every unknown must be listed;
/// a system whose determinant vanishes to working order is reported as singular.
pub fn solve_system(eqs: &[LinearForm<PuiseuxSeries>], unknowns: &[UnknownTag], cap: i64) -> FormResult<Solved> {
    let n = unknowns.len();
    if eqs.len() != n {
        return Err(FormError::Unsupported(format!("{} equations for {} unknowns", eqs.len(), n)));
    }
    for e in eqs {
        if let Some(t) = e.tags().find(|t| !unknowns.contains(t)) {
            return Err(FormError::Unsupported(format!("unlisted unknown {t}")));
        }
    }
    let mut a = matrix(eqs, unknowns);
    let mut rhs: Vec<PuiseuxSeries> = eqs.iter().map(|e| -&e.known).collect();
    let determinant = determinant(&a);
    if determinant.is_zero() {
        let through = determinant.acc_rational().map(|r| r.to_string()).unwrap_or_else(|| "∞".into());
        return Err(FormError::SingularSystem(through));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        // Pivot: smallest valuation in this column among remaining rows (ties: first row).
        let mut best: Option<(usize, Rational)> = None;
        for (r, row) in a.iter().enumerate().skip(col) {
            if let Some(v) = row[col].valuation_rational() {
                if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                    best = Some((r, v));
                }
            }
        }
        let Some((pr, _)) = best else {
            return Err(FormError::SingularSystem(format!("column {}", unknowns[col])));
        };
        a.swap(col, pr);
        rhs.swap(col, pr);
        perm.swap(col, pr);
        let pivot = a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].div(&pivot, cap)?;
            for c in col..n {
                let v = &a[r][c] - &(&f * &a[col][c]);
                a[r][c] = v;
            }
            rhs[r] = &rhs[r] - &(&f * &rhs[col]);
        }
    }
    let mut sol: Vec<PuiseuxSeries> = vec![PuiseuxSeries::exact_zero(); n];
    for r in (0..n).rev() {
        let mut acc = rhs[r].clone();
        for c in r + 1..n {
            acc = &acc - &(&a[r][c] * &sol[c]);
        }
        sol[r] = acc.div(&a[r][r], cap)?;
    }
    let values = unknowns.iter().copied().zip(sol).collect();
    Ok(Solved { values, determinant })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::rational::int;

    #[test]
    fn two_by_two() {
        // x + t·y = 1, x − y = t  →  y = (1 − t)/(1 + t), x = t + y
        let (x, y) = (UnknownTag::Point(0, 0), UnknownTag::Point(1, 0));
        let mut e1 = LinearForm::from_known(PuiseuxSeries::constant(int(-1)));
        e1.add_term(x, PuiseuxSeries::one());
        e1.add_term(y, PuiseuxSeries::t());
        let mut e2 = LinearForm::from_known(-&PuiseuxSeries::t());
        e2.add_term(x, PuiseuxSeries::one());
        e2.add_term(y, PuiseuxSeries::constant(int(-1)));
        let s = solve_system(&[e1.clone(), e2.clone()], &[x, y], 8).unwrap();
        for e in [&e1, &e2] {
            let r = e.evaluate(|t| s.values.get(t).cloned());
            assert!(r.is_zero(), "{r}");
        }
        assert_eq!(s.determinant, &PuiseuxSeries::constant(int(-1)) - &PuiseuxSeries::t());
    }

    #[test]
    fn singular_detected() {
        let x = UnknownTag::Point(0, 0);
        let y = UnknownTag::Point(0, 1);
        let mut e1 = LinearForm::from_known(PuiseuxSeries::one());
        e1.add_term(x, PuiseuxSeries::one());
        e1.add_term(y, PuiseuxSeries::t());
        let e2 = e1.scale(&int(2));
        assert!(matches!(solve_system(&[e1, e2], &[x, y], 8), Err(FormError::SingularSystem(_))));
    }
}
