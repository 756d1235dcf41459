

use super::factor::{canonical_factorization, Factorization};
use super::orbit::{eliminate_points, ExactStage, KernelBranches};
use super::roots::{kernel_roots, KernelRoot, RootFamily};
use super::PipelineResult;
use crate::exact_series::tri::TriLaurent;
use num_traits::{One, Zero};

use crate::exact_series::{PuiseuxSeries, Rational, XPart};
use crate::linear_forms::{LinearForm, UnknownTag};
use crate::walk_oracle::ModelName;

type Form = LinearForm<PuiseuxSeries>;

/// A scalar equation among the target points. Label 0 is the [x^0] part, labels ≥ 1 follow
/// the kernel roots, and labels from 100 on are pole/consistency equations.
#[derive(Clone, Debug)]
pub struct HEquation {
    pub label: usize,
    pub form: Form,
}

#[derive(Clone, Debug)]
pub struct SeriesStage {
    pub order: i64,
    pub factorization: Factorization,
    /// (θ, θ00) for Kreweras.
    pub theta: Option<(PuiseuxSeries, PuiseuxSeries)>,
    /// The master equation divided by √Δ+.
    pub master: Form,
    pub pos: Form,
    pub zero: Form,
    /// [x^<] part with x ↦ x̄, times x^neg_shift.
    pub neg: Form,
    pub neg_shift: i64,
    /// Power of x the master equation was multiplied by before splitting.
    pub x_shift: i64,
    pub targets: Vec<UnknownTag>,
    pub roots: Vec<KernelRoot>,
    pub equations: Vec<HEquation>,
}

/// Σ_m P_m·(p_m/√Δ + q_m) with Z_m = p_m + q_m√Δ: the series [y^0](P/K).
fn eta(branches: &KernelBranches, p: &TriLaurent, inv_sqrt: &PuiseuxSeries, order: i64) -> PuiseuxSeries {
    let mut acc = PuiseuxSeries::exact_zero();
    for (m, pm) in p.by_y() {
        let z = branches.z(m);
        let term = &(&z.p * inv_sqrt) + &z.q;
        acc = &acc + &(&pm * &term.truncate_t(order + 4));
    }
    acc.truncate_t(order)
}

/// Multiply by x^e for the first e (nearest 0) whose [x^>], [x^0] and [x^<] parts reduce to
/// the target points.
fn split_reduced(model: &crate::walk_oracle::ModelSpec, master: &Form, targets: &[UnknownTag]) -> PipelineResult<(i64, Form, Form, Form)> {
    let id = |p: &PuiseuxSeries| p.clone();
    let mut last = None;
    for e in (0..=8).flat_map(|k: i64| if k == 0 { vec![0] } else { vec![-k, k] }) {
        let split = master.shift_x(e).x_split()?;
        let parts = (|| -> PipelineResult<(Form, Form, Form)> {
            Ok((
                eliminate_points(model, &split.pos, targets, id)?,
                eliminate_points(model, &split.zero, targets, id)?,
                eliminate_points(model, &split.neg, targets, id)?.invert_x(),
            ))
        })();
        match parts {
            Ok((p, z, n)) => return Ok((e, p, z, n)),
            Err(err) => last = Some(err),
        }
    }
    Err(last.expect("at least one shift tried"))
}

/// Factor applied to every H equation. The kernel equations are only defined up to a
/// multiplier; this one makes the determinants of the root equation sets come out in the
/// conventional normalization. Factors that vanish at special weights are left out.
pub fn row_scale(model: &crate::walk_oracle::ModelSpec) -> PuiseuxSeries {
    let w = &model.weights;
    let one = Rational::one();
    let two = &one + &one;
    let nz = |r: Rational| if r.is_zero() { one.clone() } else { r };
    let b1 = nz(&w.b - &one);
    match model.name {
        ModelName::ReverseKreweras => PuiseuxSeries::constant(-(&w.c / &b1)),
        ModelName::Kreweras => {
            let num = &two * &w.a * &w.a * &w.b * &w.b * &w.c * nz(&two * &w.a * &w.b - &w.a - &w.b);
            let den = nz(&w.a + &w.b - &two) * b1;
            PuiseuxSeries::term(3, 0, num / den)
        }
    }
}

pub fn series_stage(exact: &ExactStage, order: i64) -> PipelineResult<SeriesStage> {
    use UnknownTag::*;
    let factorization = canonical_factorization(&exact.delta, order)?;
    let (f, g) = (&factorization.f, &factorization.g);
    let theta = if exact.master.has(&Theta) || exact.master.has(&Theta00) {
        let branches = KernelBranches::new(&exact.model);
        let inv_sqrt = exact.delta.inv_sqrt(order + 8)?;
        let th = eta(&branches, &exact.nc_known, &inv_sqrt, order).x_part(XPart::Pos);
        let th00 = eta(&branches, &exact.nc_q00, &inv_sqrt, order).x_part(XPart::Pos);
        Some((th, th00))
    } else {
        None
    };
    let to_series = |c: &crate::linear_forms::Surd| (&(&c.p * f) + &(&c.q * g)).truncate_t(order);
    let mut master = LinearForm::from_known(to_series(&exact.master.known));
    for (tag, c) in exact.master.terms() {
        let v = to_series(c);
        match (tag, &theta) {
            (Theta, Some((th, _))) => master.add_known(&(&v * th).truncate_t(order)),
            (Theta00, Some((_, th00))) => master.add_term(Point(0, 0), (&v * th00).truncate_t(order)),
            (Theta | Theta00, None) => unreachable!("theta tags without a right side"),
            _ => master.add_term(*tag, v),
        }
    }
    let mut targets = exact.targets.clone();
    if exact.model.name == ModelName::Kreweras {
        targets.push(Point(4, 0));
    }
    let (x_shift, pos, zero, neg_raw) = split_reduced(&exact.model, &master, &targets)?;
    let master = master.shift_x(x_shift);
    let neg_shift = neg_raw.coeff(&Diag(0)).and_then(|c| c.x_range()).map(|(lo, _)| (-lo).max(0)).unwrap_or(0);
    let neg = neg_raw.shift_x(neg_shift);

    let roots = kernel_roots(&exact.model, order)?;
    let scale = row_scale(&exact.model);
    let mut equations = vec![HEquation { label: 0, form: zero.mul_coef(&scale) }];
    for root in &roots {
        let src = match root.family {
            RootFamily::Pos => &pos,
            RootFamily::Neg => &neg,
        };
        let form = src.substitute_root(&root.value, order)?.mul_coef(&scale);
        equations.push(HEquation { label: root.label, form });
    }
    Ok(SeriesStage { order, factorization, theta, master, pos, zero, neg, neg_shift, x_shift, targets, roots, equations })
}

impl SeriesStage {
    /// Equations from requiring −rest/coef to be a series in x with the target points as its
    /// coefficients: vanishing negative powers, and [x^e] = Point(e, 0) (or Point(e, e) for
    /// the diagonal). Needs the lowest t coefficient of the function's coefficient to be a
    /// monomial in x.
    pub fn pole_equations(&self, max_each: usize) -> PipelineResult<Vec<HEquation>> {
        let mut out = Vec::new();
        let mut label = 100;
        for (form, tag) in [(&self.pos, UnknownTag::LineY(0)), (&self.neg, UnknownTag::Diag(0))] {
            let Some(c) = form.coeff(&tag) else { continue };
            let monomial = c.leading().is_some_and(|(_, p)| p.as_monomial().is_some());
            if !monomial {
                continue;
            }
            let inv = c.invert(self.order)?;
            let mut rest = form.clone();
            rest.remove(&tag);
            let w = rest.map(|v| (-&(v * &inv)).truncate_t(self.order));
            let lo = std::iter::once(&w.known).chain(w.terms().map(|(_, v)| v)).filter_map(|v| v.x_range()).map(|r| r.0).min().unwrap_or(0);
            let mut count = 0;
            let mut e = -1;
            while e >= lo && count < max_each {
                out.push(HEquation { label, form: w.map(|v| v.x_coeff(e)) });
                label += 1;
                count += 1;
                e -= 1;
            }
            for t in &self.targets {
                let UnknownTag::Point(i, j) = *t else { continue };
                let e = match tag {
                    UnknownTag::LineY(_) if j == 0 => i,
                    UnknownTag::Diag(_) if i == j => i,
                    _ => continue,
                };
                let mut eq = w.map(|v| v.x_coeff(e));
                eq.add_term(*t, -PuiseuxSeries::one());
                out.push(HEquation { label, form: eq });
                label += 1;
            }
        }
        Ok(out)
    }

    /// √Δ+, to undo the division when recovering Q(x,0).
    pub fn sqrt_delta_plus(&self) -> PipelineResult<PuiseuxSeries> {
        Ok(self.factorization.delta_plus.sqrt(self.order)?)
    }
}


#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn eta_for_tests(b: &KernelBranches, p: &TriLaurent, inv: &PuiseuxSeries, order: i64) -> PuiseuxSeries {
        eta(b, p, inv, order)
    }
}

#[cfg(test)]
mod stage_tests {
    use super::*;
    use crate::exact_series::poly2::div_exact;
    use crate::kernel_pipeline::orbit::exact_stage;
    use crate::kernel_pipeline::orbit::tests::oracle_value;
    use crate::kernel_pipeline::roots::printed_kernel;
    use crate::walk_oracle::{ModelSpec, WalkTable, Weights};

    fn model(name: ModelName) -> ModelSpec {
        ModelSpec::new(name, Weights::parse("3", "2", "5").unwrap())
    }

    #[test]
    fn every_h_equation_holds_on_enumeration() {
        for name in [ModelName::ReverseKreweras, ModelName::Kreweras] {
            let m = model(name);
            let ss = series_stage(&exact_stage(&m).unwrap(), 24).unwrap();
            let table = WalkTable::enumerate(&m, 24);
            assert!(ss.equations.len() >= 5, "{name}");
            for h in &ss.equations {
                let v = h.form.evaluate(|t| oracle_value(&table, t));
                assert!(v.is_zero(), "{name} H{}: {v}", h.label);
                assert!(v.acc_t().unwrap() >= 18, "{name} H{} accurate only to {:?}", h.label, v.acc_t());
            }
        }
    }

    #[test]
    fn kreweras_split_introduces_q40() {
        let ss = series_stage(&exact_stage(&model(ModelName::Kreweras)).unwrap(), 16).unwrap();
        assert!(ss.targets.contains(&UnknownTag::Point(4, 0)));
        assert!(ss.equations.iter().any(|h| h.form.has(&UnknownTag::Point(4, 0))));
    }

    #[test]
    fn kreweras_master_coefficients_carry_the_kernels() {
        let m = model(ModelName::Kreweras);
        let ex = exact_stage(&m).unwrap();
        let mu = &ex.master.coeff(&UnknownTag::LineY(0)).unwrap().p;
        let nu = &ex.master.coeff(&UnknownTag::Diag(0)).unwrap().q;
        assert!(div_exact(mu, &printed_kernel(&m, RootFamily::Pos)).is_some());
        assert!(div_exact(nu, &printed_kernel(&m, RootFamily::Neg).invert_x()).is_some());
    }
}
