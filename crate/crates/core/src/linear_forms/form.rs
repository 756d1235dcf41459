use std::collections::BTreeMap;
use std::fmt;

use super::coef::Coef;
use super::tag::UnknownTag;
use super::{FormError, FormResult};
use crate::exact_series::poly2::content_gcd;
use crate::exact_series::{LaurentPoly, PuiseuxSeries, Rational, XPart};

/// known + Σ coefficient·tag = 0.
#[derive(Clone, PartialEq)]
pub struct LinearForm<C> {
    pub known: C,
    terms: BTreeMap<UnknownTag, C>,
}

/// Positive, constant and negative x parts of a form.
#[derive(Clone)]
pub struct Split<C> {
    pub pos: LinearForm<C>,
    pub zero: LinearForm<C>,
    pub neg: LinearForm<C>,
}

impl<C: Coef> Default for LinearForm<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coef> LinearForm<C> {
    pub fn zero() -> Self {
        Self { known: C::zero(), terms: BTreeMap::new() }
    }

    pub fn from_known(known: C) -> Self {
        Self { known, terms: BTreeMap::new() }
    }

    pub fn unknown(tag: UnknownTag, c: C) -> Self {
        let mut f = Self::zero();
        f.add_term(tag, c);
        f
    }

    pub fn add_term(&mut self, tag: UnknownTag, c: C) {
        if tag.is_trivially_zero() || c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&tag) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(tag, merged);
        }
    }

    pub fn add_known(&mut self, c: &C) {
        self.known = self.known.add(c);
    }

    pub fn coeff(&self, tag: &UnknownTag) -> Option<&C> {
        self.terms.get(tag)
    }

    pub fn tags(&self) -> impl Iterator<Item = &UnknownTag> {
        self.terms.keys()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UnknownTag, &C)> {
        self.terms.iter()
    }

    pub fn has(&self, tag: &UnknownTag) -> bool {
        self.terms.contains_key(tag)
    }

    pub fn function_tags(&self) -> Vec<UnknownTag> {
        self.terms.keys().filter(|t| t.is_function()).copied().collect()
    }

    pub fn point_tags(&self) -> Vec<UnknownTag> {
        self.terms.keys().filter(|t| t.is_point()).copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.known.is_zero() && self.terms.is_empty()
    }

    pub fn remove(&mut self, tag: &UnknownTag) -> Option<C> {
        self.terms.remove(tag)
    }

    pub fn map<D: Coef, F: Fn(&C) -> D>(&self, f: F) -> LinearForm<D> {
        let mut out = LinearForm::from_known(f(&self.known));
        for (t, c) in &self.terms {
            out.add_term(*t, f(c));
        }
        out
    }

    pub fn try_map<D: Coef, E, F: Fn(&C) -> Result<D, E>>(&self, f: F) -> Result<LinearForm<D>, E> {
        let mut out = LinearForm::from_known(f(&self.known)?);
        for (t, c) in &self.terms {
            out.add_term(*t, f(c)?);
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.known = out.known.add(&o.known);
        for (t, c) in &o.terms {
            out.add_term(*t, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn mul_coef(&self, k: &C) -> Self {
        self.map(|c| c.mul(k))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        self.map(|c| c.scale(k))
    }

    /// target − (target[tag]/using[tag])·using, for a monomial pivot.
    pub fn eliminate(&self, using: &Self, tag: UnknownTag) -> FormResult<Self> {
        let Some(ct) = self.coeff(&tag) else {
            return Ok(self.clone());
        };
        let pivot = using.coeff(&tag).ok_or_else(|| FormError::NotEliminable(tag, "absent from the identity".into()))?;
        let (k, e, c) = pivot
            .as_monomial()
            .ok_or_else(|| FormError::NotEliminable(tag, format!("pivot {pivot} is not a monomial")))?;
        let factor = ct.div_monomial(k, e, &c);
        let mut out = self.sub(&using.mul_coef(&factor));
        out.terms.remove(&tag);
        Ok(out)
    }

    /// using[tag]·target − target[tag]·using with common polynomial content removed.
    pub fn eliminate_cross(&self, using: &Self, tag: UnknownTag) -> FormResult<Self> {
        let Some(ct) = self.coeff(&tag).cloned() else {
            return Ok(self.clone());
        };
        let cu = using.coeff(&tag).cloned().ok_or_else(|| FormError::NotEliminable(tag, "absent from the identity".into()))?;
        let mut out = self.mul_coef(&cu).sub(&using.mul_coef(&ct));
        out.terms.remove(&tag);
        Ok(out.without_content())
    }

    /// Divide every coefficient by the gcd of all exact coefficient pieces.
    pub fn without_content(&self) -> Self {
        let mut parts: Vec<PuiseuxSeries> = Vec::new();
        for c in std::iter::once(&self.known).chain(self.terms.values()) {
            match c.exact_parts() {
                Some(ps) => parts.extend(ps.into_iter().filter(|p| !p.is_zero()).cloned()),
                None => return self.clone(),
            }
        }
        let g = content_gcd(&parts);
        if g == PuiseuxSeries::one() {
            return self.clone();
        }
        self.map(|c| c.div_poly(&g).expect("content divides every coefficient"))
    }
}

impl LinearForm<PuiseuxSeries> {
    /// Value of the form with every tag replaced; None leaves a tag out.
    pub fn evaluate<F: Fn(&UnknownTag) -> Option<PuiseuxSeries>>(&self, values: F) -> PuiseuxSeries {
        let mut acc = self.known.clone();
        for (t, c) in &self.terms {
            if let Some(v) = values(t) {
                acc = &acc + &(c * &v);
            }
        }
        acc
    }

    pub fn invert_x(&self) -> Self {
        self.map(|c| c.invert_x())
    }

    pub fn truncate(&self, a: i64) -> Self {
        self.map(|c| c.truncate(a))
    }

    pub fn shift_x(&self, e: i64) -> Self {
        self.map(|c| c.shift_x(e))
    }

    /// Split into positive, constant and negative x parts, moving the finitely many
    /// crossing coefficients of function tags into point tags.
    pub fn x_split(&self) -> FormResult<Split<PuiseuxSeries>> {
        let mut parts = [LinearForm::zero(), LinearForm::zero(), LinearForm::zero()];
        let bin = |e: i64| -> usize {
            match e.signum() {
                1 => 0,
                0 => 1,
                _ => 2,
            }
        };
        for (i, sel) in [XPart::Pos, XPart::Zero, XPart::Neg].into_iter().enumerate() {
            parts[i].known = self.known.x_part(sel);
        }
        for (tag, c) in &self.terms {
            let s = tag.support();
            if s == 0 {
                if matches!(tag, UnknownTag::Theta | UnknownTag::Theta00) {
                    return Err(FormError::Unsupported(format!("splitting a form containing {tag}")));
                }
                for (i, sel) in [XPart::Pos, XPart::Zero, XPart::Neg].into_iter().enumerate() {
                    parts[i].add_term(*tag, c.x_part(sel));
                }
                continue;
            }
            let home = if s > 0 { 0 } else { 2 };
            parts[home].add_term(*tag, c.clone());
            // Crossing terms: exponent e with e·s ≤ 0 meets x^{s·m} for m = 0..=|e|.
            let mut moved: BTreeMap<(UnknownTag, usize), Vec<(i64, LaurentPoly)>> = BTreeMap::new();
            for (k, p) in c.iter() {
                let mut per: BTreeMap<(UnknownTag, usize), Vec<(i64, Rational)>> = BTreeMap::new();
                for (e, ce) in p.terms() {
                    if e * s > 0 {
                        continue;
                    }
                    for m in 0..=e.abs() {
                        let pt = tag.point_at(m).expect("function tag");
                        let ex = e + s * m;
                        per.entry((pt, bin(ex))).or_default().push((ex, ce.clone()));
                    }
                }
                for (key, terms) in per {
                    moved.entry(key).or_default().push((k, LaurentPoly::from_terms(terms)));
                }
            }
            for ((pt, b), terms) in moved {
                let series = PuiseuxSeries::from_terms(c.ram(), terms, c.acc());
                parts[home].add_term(pt, -&series);
                parts[b].add_term(pt, series);
            }
        }
        let [pos, zero, neg] = parts;
        Ok(Split { pos, zero, neg })
    }

    /// Substitute x = root. Function-tag coefficients must vanish to their accurate order
    /// and are dropped; what remains is a form over point tags.
    pub fn substitute_root(&self, root: &PuiseuxSeries, cap: i64) -> FormResult<Self> {
        let mut out = LinearForm::from_known(self.known.substitute_x(root, Some(cap))?);
        for (tag, c) in &self.terms {
            let v = c.substitute_x(root, Some(cap))?;
            if tag.is_function() {
                if !v.is_zero() {
                    let val = v.valuation_rational().map(|r| r.to_string()).unwrap_or_default();
                    return Err(FormError::KernelNotCancelled { tag: *tag, valuation: val });
                }
                continue;
            }
            if !tag.is_point() {
                return Err(FormError::Unsupported(format!("{tag} at a root")));
            }
            out.add_term(*tag, v);
        }
        Ok(out)
    }

    /// Smallest accurate order (ram units of `ram`) over all coefficients.
    pub fn acc_rational(&self) -> Option<Rational> {
        std::iter::once(&self.known)
            .chain(self.terms.values())
            .filter_map(|c| c.acc_rational())
            .min()
    }

    /// Lowest t-exponent present anywhere, as a rational.
    pub fn min_valuation(&self) -> Option<Rational> {
        std::iter::once(&self.known)
            .chain(self.terms.values())
            .filter_map(|c| c.valuation_rational())
            .min()
    }

    pub fn is_x_free(&self) -> bool {
        self.known.is_x_free() && self.terms.values().all(|c| c.is_x_free())
    }
}

impl<C: Coef> fmt::Display for LinearForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.known)?;
        for (t, c) in &self.terms {
            write!(f, "\n  + ({}) · {}", c, t)?;
        }
        Ok(())
    }
}

impl<C: Coef> fmt::Debug for LinearForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
