use serde::{Deserialize, Serialize};
use walks_core::exact_series::{PuiseuxSeries, Rational, TriLaurent};
use walks_core::kernel_pipeline::{solve, DeterminantReport, PipelineError, Solution, SolveOptions, StageReport};
use walks_core::linear_forms::UnknownTag;
use walks_core::walk_oracle::{ModelSpec, Selector, WalkTable};

use crate::document::{format_coeff, SeriesDocument, WeightStrings};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leading {
    pub t_exp: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterminantRow {
    pub set: Vec<usize>,
    pub leading: Option<Leading>,
    /// When the determinant vanished: the order through which it is known to be 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vanishes_through: Option<String>,
}

impl From<&DeterminantReport> for DeterminantRow {
    fn from(d: &DeterminantReport) -> Self {
        Self {
            set: d.labels.clone(),
            leading: d.leading.as_ref().map(|(e, c)| Leading { t_exp: format_coeff(e), coeff: format_coeff(c) }),
            vanishes_through: d.vanishes_through.as_ref().map(format_coeff),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub weights: String,
    pub working_order: i64,
    pub x_shift: i64,
    pub roots: Vec<usize>,
    pub unknowns: Vec<String>,
    pub pruned: Vec<String>,
    pub merged: bool,
    pub chosen: Vec<usize>,
    pub chosen_determinant: DeterminantRow,
    pub determinants: Vec<DeterminantRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub before_injection: Vec<DeterminantRow>,
}

fn tags(t: &[UnknownTag]) -> Vec<String> {
    t.iter().map(|t| t.to_string()).collect()
}

impl From<&StageReport> for Diagnostics {
    fn from(r: &StageReport) -> Self {
        Self {
            weights: r.weights.clone(),
            working_order: r.working_order,
            x_shift: r.x_shift,
            roots: r.roots.clone(),
            unknowns: tags(&r.unknowns),
            pruned: tags(&r.pruned),
            merged: r.merged,
            chosen: r.chosen.clone(),
            chosen_determinant: (&r.chosen_determinant).into(),
            determinants: r.determinants.iter().map(Into::into).collect(),
            before_injection: r.before_injection.iter().map(Into::into).collect(),
        }
    }
}

/// Output of `solve` and `expand`: several series plus optional solver diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveBundle {
    pub model: String,
    pub weights: WeightStrings,
    pub command: String,
    pub order: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accurate_order: Option<i64>,
    pub series: Vec<SeriesDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
    /// Diagnostics of the run at swapped weights that gives Q(0,y).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reflected: Option<Diagnostics>,
}

pub fn weight_strings(m: &ModelSpec) -> WeightStrings {
    let w = &m.weights;
    WeightStrings { a: format_coeff(&w.a), b: format_coeff(&w.b), c: format_coeff(&w.c) }
}

impl SolveBundle {
    pub fn new(model: &ModelSpec, command: &str, order: i64, series: Vec<SeriesDocument>) -> Self {
        Self {
            model: model.name.as_str().to_string(),
            weights: weight_strings(model),
            command: command.to_string(),
            order,
            accurate_order: None,
            series,
            diagnostics: None,
            reflected: None,
        }
    }

    pub fn from_solution(sol: &Solution) -> Self {
        let m = &sol.model;
        let mut series: Vec<SeriesDocument> = sol.points.iter().map(|(t, s)| SeriesDocument::from_series(m, &t.to_string(), s)).collect();
        series.push(SeriesDocument::from_series(m, "Q(x,0)", &sol.q_x0));
        series.push(SeriesDocument::from_series(m, "Q(0,y)", &sol.q_0y));
        series.push(SeriesDocument::from_series(m, "Q^d_0(x)", &sol.q_diag));
        series.push(SeriesDocument::from_tri(m, "Q(x,y)", &sol.full, sol.order));
        Self {
            accurate_order: Some(sol.accurate_order),
            diagnostics: Some((&sol.report).into()),
            reflected: sol.reflected.as_ref().map(Into::into),
            ..Self::new(m, "solve", sol.order, series)
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub quantity: String,
    pub orders_checked: String,
    pub first_mismatch: String,
    /// Coefficients of t^0..t^N for scalar quantities.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumeration: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub model: String,
    pub weights: WeightStrings,
    pub order: i64,
    pub status: String,
    pub rows: Vec<VerifyRow>,
    pub chosen: Vec<usize>,
    pub determinants: Vec<DeterminantRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub before_injection: Vec<DeterminantRow>,
}

fn scalar_coeffs(s: &PuiseuxSeries, n: i64) -> Vec<String> {
    (0..=n).map(|k| format_coeff(&s.coeff(k * s.ram() as i64).coeff(0))).collect()
}

fn series_mismatch(got: &PuiseuxSeries, want: &PuiseuxSeries, n: i64) -> String {
    let (g, w) = (got.truncate_t(n), want.truncate_t(n));
    match (&g - &w).iter().next() {
        None => "none".into(),
        Some((k, p)) => {
            let (e, _) = p.terms()[0].clone();
            let r = g.ram().max(w.ram()) as i64;
            let at = |s: &PuiseuxSeries| format_coeff(&s.to_ram(r as u32).coeff(k).coeff(e));
            format!("t^{} x^{e}: solver {}, enumeration {}", format_coeff(&Rational::new(k.into(), r.into())), at(&g), at(&w))
        }
    }
}

fn tri_mismatch(got: &TriLaurent, want: &TriLaurent) -> String {
    let d = got - want;
    let first = d.terms().min_by_key(|(&(x, y, t), _)| (t, x, y));
    match first {
        None => "none".into(),
        Some((&(x, y, t), _)) => {
            let at = |s: &TriLaurent| format_coeff(&s.terms().find(|(k, _)| **k == (x, y, t)).map_or(Rational::from_integer(0.into()), |(_, c)| c.clone()));
            format!("t^{t} x^{x} y^{y}: solver {}, enumeration {}", at(got), at(want))
        }
    }
}

/// Solve and compare every reported quantity with enumeration through t^order.
pub fn verify(model: &ModelSpec, opts: &SolveOptions) -> Result<VerifyReport, PipelineError> {
    let sol = solve(model, opts)?;
    let n = opts.order;
    let table = WalkTable::enumerate(model, n as usize);
    let checked = format!("t^0..t^{n}");
    let mut rows = Vec::new();
    for (tag, s) in &sol.points {
        let UnknownTag::Point(i, j) = *tag else { continue };
        let want = table.boundary_series(Selector::Point(i, j)).expect("points are in range");
        rows.push(VerifyRow {
            quantity: tag.to_string(),
            orders_checked: checked.clone(),
            first_mismatch: series_mismatch(s, &want, n),
            solver: Some(scalar_coeffs(s, n)),
            enumeration: Some(scalar_coeffs(&want, n)),
        });
    }
    for (label, got, sel) in [("Q(x,0)", &sol.q_x0, Selector::LineY(0)), ("Q(0,y)", &sol.q_0y, Selector::LineX(0)), ("Q^d_0(x)", &sol.q_diag, Selector::Diag(0))] {
        let want = table.boundary_series(sel).expect("selector in range");
        rows.push(VerifyRow { quantity: label.into(), orders_checked: checked.clone(), first_mismatch: series_mismatch(got, &want, n), solver: None, enumeration: None });
    }
    rows.push(VerifyRow {
        quantity: "Q(x,y)".into(),
        orders_checked: checked,
        first_mismatch: tri_mismatch(&sol.full, &table.full()),
        solver: None,
        enumeration: None,
    });
    let pass = rows.iter().all(|r| r.first_mismatch == "none");
    Ok(VerifyReport {
        model: model.name.as_str().to_string(),
        weights: weight_strings(model),
        order: n,
        status: if pass { "pass" } else { "fail" }.into(),
        rows,
        chosen: sol.report.chosen.clone(),
        determinants: sol.report.determinants.iter().map(Into::into).collect(),
        before_injection: sol.report.before_injection.iter().map(Into::into).collect(),
    })
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// quantity,orders_checked,first_mismatch rows.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["quantity", "orders_checked", "first_mismatch"]).expect("in-memory write");
        for r in &self.rows {
            w.write_record([&r.quantity, &r.orders_checked, &r.first_mismatch]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use walks_core::exact_series::rat;
    use walks_core::walk_oracle::{ModelName, Weights};

    #[test]
    fn mismatch_locates_first_difference() {
        let a = &PuiseuxSeries::term(1, 2, rat(3, 1)) + &PuiseuxSeries::term(4, 0, rat(1, 2));
        let b = &PuiseuxSeries::term(1, 2, rat(3, 1)) + &PuiseuxSeries::term(4, 0, rat(1, 3));
        assert_eq!(series_mismatch(&a, &a, 6), "none");
        assert_eq!(series_mismatch(&a, &b, 6), "t^4 x^0: solver 1/2, enumeration 1/3");
        assert_eq!(series_mismatch(&a, &b, 3), "none");
        let p = TriLaurent::monomial(1, 2, 3, rat(5, 1));
        assert_eq!(tri_mismatch(&p, &TriLaurent::zero()), "t^3 x^1 y^2: solver 5, enumeration 0");
    }

    #[test]
    fn report_passes_on_a_correct_solution() {
        let m = ModelSpec::new(ModelName::ReverseKreweras, Weights::parse("2", "3", "5").unwrap());
        let rep = verify(&m, &SolveOptions::new(6)).unwrap();
        assert!(rep.passed());
        assert!(rep.rows.iter().any(|r| r.quantity == "Q(x,y)"));
        assert!(rep.to_csv().starts_with("quantity,orders_checked,first_mismatch\n"));
    }
}
