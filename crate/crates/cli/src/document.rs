use serde::{Deserialize, Serialize};
use walks_core::exact_series::{parse_rational, LaurentPoly, PuiseuxSeries, Rational, TriLaurent};
use walks_core::walk_oracle::ModelSpec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed document at {location}: {message}")]
pub struct DocumentError {
    pub location: String,
    pub message: String,
}

impl DocumentError {
    fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self { location: location.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightStrings {
    pub a: String,
    pub b: String,
    pub c: String,
}

/// Coefficient of t^(t_num/r)·x^x_exp·y^y_exp.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub t_num: i64,
    pub x_exp: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_exp: Option<i64>,
    pub coeff: String,
}

/// One series with exact coefficients. `accurate_order` counts in units of 1/r like `t_num`;
/// null means every coefficient is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDocument {
    pub model: String,
    pub quantity: String,
    pub weights: WeightStrings,
    pub ramification: u32,
    pub variables: String,
    pub terms: Vec<Term>,
    pub accurate_order: Option<i64>,
}

/// "p/q" in lowest terms, or "p" for integers.
pub fn format_coeff(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn parse_coeff(s: &str, at: &str) -> Result<Rational, DocumentError> {
    let c = parse_rational(s).ok_or_else(|| DocumentError::new(at, format!("not a rational: {s:?}")))?;
    if s.trim() != s || format_coeff(&c) != s {
        return Err(DocumentError::new(at, format!("{s:?} is not in lowest terms")));
    }
    if c == Rational::from_integer(0.into()) {
        return Err(DocumentError::new(at, "zero coefficient"));
    }
    Ok(c)
}

fn weights(m: &ModelSpec) -> WeightStrings {
    let w = &m.weights;
    WeightStrings { a: format_coeff(&w.a), b: format_coeff(&w.b), c: format_coeff(&w.c) }
}

const X_ONLY: &str = "coeff * t^(t_num/ramification) * x^x_exp";
const XY: &str = "coeff * t^(t_num/ramification) * x^x_exp * y^y_exp";

impl SeriesDocument {
    pub fn from_series(model: &ModelSpec, quantity: &str, s: &PuiseuxSeries) -> Self {
        let mut terms: Vec<Term> = s.triples().map(|(k, e, c)| Term { t_num: k, x_exp: e, y_exp: None, coeff: format_coeff(c) }).collect();
        terms.sort_by_key(|t| (t.t_num, t.x_exp));
        Self {
            model: model.name.as_str().to_string(),
            quantity: quantity.to_string(),
            weights: weights(model),
            ramification: s.ram(),
            variables: X_ONLY.to_string(),
            terms,
            accurate_order: s.acc(),
        }
    }

    /// A trivariate polynomial known through t^order.
    pub fn from_tri(model: &ModelSpec, quantity: &str, s: &TriLaurent, order: i64) -> Self {
        let mut terms: Vec<Term> = s.terms().map(|(&(x, y, t), c)| Term { t_num: t, x_exp: x, y_exp: Some(y), coeff: format_coeff(c) }).collect();
        terms.sort_by_key(|t| (t.t_num, t.x_exp, t.y_exp));
        Self {
            model: model.name.as_str().to_string(),
            quantity: quantity.to_string(),
            weights: weights(model),
            ramification: 1,
            variables: XY.to_string(),
            terms,
            accurate_order: Some(order),
        }
    }

    pub fn has_y(&self) -> bool {
        self.variables == XY
    }

    /// Structural checks shared by both formats.
    pub fn validate(&self) -> Result<(), DocumentError> {
        if self.ramification == 0 {
            return Err(DocumentError::new("ramification", "must be positive"));
        }
        if self.variables != X_ONLY && self.variables != XY {
            return Err(DocumentError::new("variables", format!("unknown convention {:?}", self.variables)));
        }
        for (name, v) in [("weights.a", &self.weights.a), ("weights.b", &self.weights.b), ("weights.c", &self.weights.c)] {
            parse_coeff(v, name)?;
        }
        let mut prev: Option<(i64, i64, Option<i64>)> = None;
        for (i, t) in self.terms.iter().enumerate() {
            let at = format!("terms[{i}]");
            if t.y_exp.is_some() != self.has_y() {
                return Err(DocumentError::new(&at, "y_exp presence disagrees with the variable convention"));
            }
            parse_coeff(&t.coeff, &format!("{at}.coeff"))?;
            let key = (t.t_num, t.x_exp, t.y_exp);
            if prev.is_some_and(|p| p >= key) {
                return Err(DocumentError::new(&at, "terms not strictly sorted by (t_num, x_exp, y_exp)"));
            }
            if self.accurate_order.is_some_and(|a| t.t_num > a) {
                return Err(DocumentError::new(&at, "term beyond accurate_order"));
            }
            prev = Some(key);
        }
        Ok(())
    }

    pub fn to_series(&self) -> Result<PuiseuxSeries, DocumentError> {
        if self.has_y() {
            return Err(DocumentError::new("variables", "document has a y variable"));
        }
        let mut by_t: Vec<(i64, LaurentPoly)> = Vec::new();
        for (i, t) in self.terms.iter().enumerate() {
            let c = parse_coeff(&t.coeff, &format!("terms[{i}].coeff"))?;
            match by_t.last_mut() {
                Some((k, p)) if *k == t.t_num => *p = &*p + &LaurentPoly::monomial(t.x_exp, c),
                _ => by_t.push((t.t_num, LaurentPoly::monomial(t.x_exp, c))),
            }
        }
        Ok(PuiseuxSeries::from_terms(self.ramification, by_t, self.accurate_order))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: Self = serde_json::from_str(text).map_err(|e| DocumentError::new(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    /// Metadata as `# key: value` comment lines, then one row per term.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let acc = self.accurate_order.map_or("exact".to_string(), |a| a.to_string());
        for (k, v) in [
            ("model", self.model.as_str()),
            ("quantity", self.quantity.as_str()),
            ("a", self.weights.a.as_str()),
            ("b", self.weights.b.as_str()),
            ("c", self.weights.c.as_str()),
            ("ramification", &self.ramification.to_string()),
            ("variables", self.variables.as_str()),
            ("accurate_order", &acc),
        ] {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["t_num", "x_exp", "y_exp", "coeff"]).expect("in-memory write");
        for t in &self.terms {
            let y = t.y_exp.map_or(String::new(), |y| y.to_string());
            w.write_record([t.t_num.to_string(), t.x_exp.to_string(), y, t.coeff.clone()]).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii"));
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, DocumentError> {
        let mut meta: Vec<(String, String)> = Vec::new();
        let mut body_start = 0;
        for (i, line) in text.lines().enumerate() {
            let Some(rest) = line.strip_prefix("# ") else {
                body_start = i;
                break;
            };
            let (k, v) = rest.split_once(": ").ok_or_else(|| DocumentError::new(format!("line {}", i + 1), "expected `# key: value`"))?;
            meta.push((k.to_string(), v.to_string()));
            body_start = i + 1;
        }
        let get = |k: &str| {
            meta.iter().find(|(mk, _)| mk == k).map(|(_, v)| v.clone()).ok_or_else(|| DocumentError::new("header", format!("missing `{k}`")))
        };
        let ramification = get("ramification")?.parse().map_err(|_| DocumentError::new("header", "bad ramification"))?;
        let acc = get("accurate_order")?;
        let accurate_order = if acc == "exact" { None } else { Some(acc.parse().map_err(|_| DocumentError::new("header", "bad accurate_order"))?) };
        let body: String = text.lines().skip(body_start).map(|l| format!("{l}\n")).collect();
        let mut r = csv::Reader::from_reader(body.as_bytes());
        let header = r.headers().map_err(|e| DocumentError::new(format!("line {}", body_start + 1), e.to_string()))?;
        if header.iter().collect::<Vec<_>>() != ["t_num", "x_exp", "y_exp", "coeff"] {
            return Err(DocumentError::new(format!("line {}", body_start + 1), "expected columns t_num,x_exp,y_exp,coeff"));
        }
        let mut terms = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| DocumentError::new(format!("line {}", body_start + 1 + e.position().map_or(0, |p| p.line() as usize)), e.to_string()))?;
            let line = body_start + rec.position().map_or(0, |p| p.line() as usize);
            let field = |i: usize, name: &str| -> Result<i64, DocumentError> {
                rec.get(i).unwrap_or("").parse().map_err(|_| DocumentError::new(format!("line {line} field {name}"), format!("not an integer: {:?}", rec.get(i).unwrap_or(""))))
            };
            let y = rec.get(2).unwrap_or("");
            terms.push(Term {
                t_num: field(0, "t_num")?,
                x_exp: field(1, "x_exp")?,
                y_exp: if y.is_empty() { None } else { Some(field(2, "y_exp")?) },
                coeff: rec.get(3).unwrap_or("").to_string(),
            });
        }
        let doc = Self {
            model: get("model")?,
            quantity: get("quantity")?,
            weights: WeightStrings { a: get("a")?, b: get("b")?, c: get("c")? },
            ramification,
            variables: get("variables")?,
            terms,
            accurate_order,
        };
        doc.validate()?;
        Ok(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use walks_core::exact_series::rat;
    use walks_core::walk_oracle::{ModelName, WalkTable, Weights};

    fn rk(a: &str, b: &str, c: &str) -> ModelSpec {
        ModelSpec::new(ModelName::ReverseKreweras, Weights::parse(a, b, c).unwrap())
    }

    #[test]
    fn first_step_terms() {
        let m = rk("2", "3", "5");
        let doc = SeriesDocument::from_tri(&m, "Q(x,y)", &WalkTable::enumerate(&m, 1).full(), 1);
        let step1: Vec<&Term> = doc.terms.iter().filter(|t| t.t_num == 1).collect();
        assert_eq!(
            step1,
            [
                &Term { t_num: 1, x_exp: 0, y_exp: Some(1), coeff: "3".into() },
                &Term { t_num: 1, x_exp: 1, y_exp: Some(0), coeff: "2".into() },
            ]
        );
    }

    #[test]
    fn zero_series_keeps_its_order() {
        let m = rk("1", "1", "1");
        let doc = SeriesDocument::from_series(&m, "zero", &PuiseuxSeries::zero_through(2, 7));
        assert!(doc.terms.is_empty());
        assert_eq!(doc.accurate_order, Some(7));
        assert_eq!(SeriesDocument::from_csv(&doc.to_csv()).unwrap(), doc);
        assert_eq!(SeriesDocument::from_json(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn malformed_input_is_located() {
        let m = rk("2", "3", "5");
        let doc = SeriesDocument::from_series(&m, "s", &PuiseuxSeries::term(1, 2, rat(3, 4)));
        let bad = doc.to_csv().replace("3/4", "6/8");
        let e = SeriesDocument::from_csv(&bad).unwrap_err();
        assert!(e.location.contains("coeff"), "{e}");
        let bad = doc.to_csv().replace(",2,", ",two,");
        assert_eq!(SeriesDocument::from_csv(&bad).unwrap_err().location, "line 10 field x_exp");
        let e = SeriesDocument::from_json("{\"model\": 3}").unwrap_err();
        assert!(e.location.starts_with("line 1"), "{e}");
    }

    fn series() -> impl Strategy<Value = PuiseuxSeries> {
        let term = (-4i64..=12, -3i64..=3, -20i64..=20, 1i64..=6);
        (1u32..=3, prop::collection::vec(term, 0..12), prop::option::of(12i64..=20)).prop_map(|(ram, ts, acc)| {
            let s = ts.into_iter().filter(|t| t.2 != 0).fold(PuiseuxSeries::exact_zero(), |s, (k, e, n, d)| {
                &s + &PuiseuxSeries::from_terms(ram, [(k, LaurentPoly::monomial(e, rat(n, d)))], None)
            });
            if s.is_exact_zero() {
                s
            } else {
                s.with_acc(acc)
            }
        })
    }

    proptest! {
        #[test]
        fn round_trips(s in series()) {
            let m = rk("1/2", "3", "2");
            let doc = SeriesDocument::from_series(&m, "s", &s);
            prop_assert_eq!(SeriesDocument::from_json(&doc.to_json()).unwrap(), doc.clone());
            prop_assert_eq!(SeriesDocument::from_csv(&doc.to_csv()).unwrap(), doc.clone());
            let back = doc.to_series().unwrap();
            prop_assert_eq!(SeriesDocument::from_series(&m, "s", &back), doc);
        }
    }
}
