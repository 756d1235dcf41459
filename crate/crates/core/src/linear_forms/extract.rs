use num_traits::One;

use super::form::LinearForm;
use super::tag::UnknownTag;
use super::{FormError, FormResult};
use crate::exact_series::tri::{MonomialMap, TriLaurent};
use crate::exact_series::{PuiseuxSeries, Rational};
use crate::walk_oracle::{ModelSpec, GROUP};

/// The function multiplied by a coefficient before extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FnKind {
    /// Q(X, Y).
    Q,
    /// Q(X, 0).
    QX0,
    /// Q(0, Y).
    Q0Y,
    Q00,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

fn put(form: &mut LinearForm<PuiseuxSeries>, tag: Option<UnknownTag>, t: i64, x: i64, c: &Rational) {
    let s = PuiseuxSeries::term(t, x, c.clone());
    match tag {
        Some(tag) => form.add_term(tag, s),
        None => form.add_known(&s),
    }
}

fn unsupported(kind: FnKind, g: MonomialMap) -> FormError {
    FormError::Unsupported(format!("{kind:?} at argument {g:?}"))
}

/// [y^j] of coef(x, y, t) · F(X, Y) with (X, Y) = g(x, y), added to `form`.
pub fn extract(coef: &TriLaurent, kind: FnKind, g: MonomialMap, j: i64, form: &mut LinearForm<PuiseuxSeries>) -> FormResult<()> {
    let ((x0, x1), (y0, y1)) = g;
    for (&(px, py, pt), cc) in coef.terms() {
        let s = j - py;
        match kind {
            FnKind::One => {
                if s == 0 {
                    put(form, None, pt, px, cc);
                }
            }
            FnKind::Q00 => {
                if s == 0 {
                    put(form, Some(UnknownTag::Point(0, 0)), pt, px, cc);
                }
            }
            FnKind::QX0 | FnKind::Q0Y => {
                let (e0, e1) = if kind == FnKind::QX0 { (x0, x1) } else { (y0, y1) };
                if e1 == 0 {
                    if s == 0 {
                        if e0 != 1 {
                            return Err(unsupported(kind, g));
                        }
                        let tag = if kind == FnKind::QX0 { UnknownTag::LineY(0) } else { UnknownTag::LineX(0) };
                        put(form, Some(tag), pt, px, cc);
                    }
                } else if s % e1 == 0 && s / e1 >= 0 {
                    let k = s / e1;
                    let tag = if kind == FnKind::QX0 { UnknownTag::Point(k, 0) } else { UnknownTag::Point(0, k) };
                    put(form, Some(tag), pt, px + e0 * k, cc);
                }
            }
            FnKind::Q => {
                if x1 == 0 && y1 != 0 {
                    if x0 != 1 {
                        return Err(unsupported(kind, g));
                    }
                    if s % y1 == 0 && s / y1 >= 0 {
                        let l = s / y1;
                        put(form, Some(UnknownTag::LineY(l)), pt, px + y0 * l, cc);
                    }
                } else if y1 == 0 && x1 != 0 {
                    if y0 != 1 {
                        return Err(unsupported(kind, g));
                    }
                    if s % x1 == 0 && s / x1 >= 0 {
                        let k = s / x1;
                        put(form, Some(UnknownTag::LineX(k)), pt, px + x0 * k, cc);
                    }
                } else if x1 == -1 && y1 == 1 && x0 + y0 == -1 {
                    put(form, Some(UnknownTag::Diag(s)), pt, px + y0 * s, cc);
                } else if x1 == 1 && y1 == -1 && x0 + y0 == -1 {
                    put(form, Some(UnknownTag::Diag(-s)), pt, px - y0 * s, cc);
                } else {
                    return Err(unsupported(kind, g));
                }
            }
        }
    }
    Ok(())
}

/// [y^j] of the functional equation with (x, y) replaced by g(x, y):
/// K·Q(g) − 1/c − A′(g)Q(X,0) − B′(g)Q(0,Y) − (κ + tG(g))Q(0,0).
pub fn fe_form(model: &ModelSpec, g: MonomialMap, j: i64) -> FormResult<LinearForm<PuiseuxSeries>> {
    let mut f = LinearForm::zero();
    extract(&model.kernel(), FnKind::Q, g, j, &mut f)?;
    extract(&TriLaurent::constant(-Rational::one() / &model.weights.c), FnKind::One, g, j, &mut f)?;
    extract(&-&model.a_prime().apply(g), FnKind::QX0, g, j, &mut f)?;
    extract(&-&model.b_prime().apply(g), FnKind::Q0Y, g, j, &mut f)?;
    extract(&-&model.origin_coeff().apply(g), FnKind::Q00, g, j, &mut f)?;
    Ok(f)
}

/// [y^k] (axis Y) or [x^k] (axis X, written in the variable x) of the functional equation.
pub fn section_identity(model: &ModelSpec, axis: Axis, k: i64) -> FormResult<LinearForm<PuiseuxSeries>> {
    let g = match axis {
        Axis::Y => GROUP[0],
        Axis::X => GROUP[3],
    };
    fe_form(model, g, k)
}

/// [x^i y^j] of the functional equation, a relation among points only.
pub fn point_identity(model: &ModelSpec, i: i64, j: i64) -> FormResult<LinearForm<PuiseuxSeries>> {
    let f = fe_form(model, GROUP[0], j)?;
    let mut out = LinearForm::from_known(f.known.x_coeff(i));
    for (tag, c) in f.terms() {
        match *tag {
            UnknownTag::Point(..) => out.add_term(*tag, c.x_coeff(i)),
            UnknownTag::LineY(l) => {
                for (k, e, ce) in c.triples() {
                    if i - e >= 0 {
                        out.add_term(UnknownTag::Point(i - e, l), PuiseuxSeries::term(k, 0, ce.clone()));
                    }
                }
            }
            other => return Err(FormError::Unsupported(format!("{other} in a point identity"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk_oracle::{ModelName, Selector, WalkTable, Weights};

    fn oracle(table: &WalkTable) -> impl Fn(&UnknownTag) -> Option<PuiseuxSeries> + '_ {
        move |tag| {
            let sel = match *tag {
                UnknownTag::Point(i, j) => Selector::Point(i, j),
                UnknownTag::LineY(i) => Selector::LineY(i),
                UnknownTag::LineX(i) => Selector::LineX(i),
                UnknownTag::Diag(j) => return Some(table.boundary_series(Selector::Diag(j)).unwrap().invert_x()),
                _ => return None,
            };
            Some(table.boundary_series(sel).unwrap())
        }
    }

    #[test]
    fn reverse_kreweras_y0_section() {
        let m = ModelSpec::new(ModelName::ReverseKreweras, Weights::parse("2", "3", "5").unwrap());
        let f = section_identity(&m, Axis::Y, 0).unwrap();
        let tags: Vec<_> = f.tags().copied().collect();
        assert_eq!(tags, vec![UnknownTag::Point(0, 0), UnknownTag::Point(0, 1), UnknownTag::LineY(0), UnknownTag::LineY(1)]);
    }

    #[test]
    fn identities_hold_on_the_oracle() {
        for name in [ModelName::ReverseKreweras, ModelName::Kreweras] {
            let m = ModelSpec::new(name, Weights::parse("2", "3", "5").unwrap());
            let table = WalkTable::enumerate(&m, 14);
            let vals = oracle(&table);
            for (gi, g) in GROUP.iter().enumerate() {
                for j in -2..=2 {
                    let Ok(f) = fe_form(&m, *g, j) else { continue };
                    let r = f.evaluate(&vals);
                    assert!(r.valuation().is_none_or(|v| v > 10), "{name} g{gi} j={j}: {r}");
                }
            }
            for (i, j) in [(0, 0), (1, 1), (2, 0), (1, 2)] {
                let r = point_identity(&m, i, j).unwrap().evaluate(&vals);
                assert!(r.valuation().is_none_or(|v| v > 10), "{name} point ({i},{j}): {r}");
            }
        }
    }
}
