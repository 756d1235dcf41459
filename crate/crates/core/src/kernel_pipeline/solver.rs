use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use super::orbit::{exact_stage, ExactStage};
use super::series_stage::{series_stage, HEquation};
use super::{PipelineError, PipelineResult};
use crate::exact_series::tri::TriLaurent;
use crate::exact_series::{PuiseuxSeries, Rational, SeriesError};
use crate::linear_forms::solve::{determinant, matrix};
use crate::linear_forms::{solve_system, FormError, LinearForm, UnknownTag};
use crate::walk_oracle::{ModelName, ModelSpec};

type Form = LinearForm<PuiseuxSeries>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Coefficients are reported through t^order.
    pub order: i64,
    /// Truncation order of the series stage; 2·order when unset.
    pub working_order: Option<i64>,
    /// How many times the working order may be raised by 10 when precision runs out.
    pub max_raises: u32,
}

impl SolveOptions {
    pub fn new(order: i64) -> Self {
        Self { order, working_order: None, max_raises: 4 }
    }

    pub fn with_working_order(mut self, w: i64) -> Self {
        self.working_order = Some(w);
        self
    }

    pub fn initial_working_order(&self) -> i64 {
        self.working_order.unwrap_or(2 * self.order).max(self.order + 4)
    }
}

/// Leading monomial of a determinant, or the order through which it vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminantReport {
    pub labels: Vec<usize>,
    /// (t exponent, coefficient).
    pub leading: Option<(Rational, Rational)>,
    pub vanishes_through: Option<Rational>,
}

impl DeterminantReport {
    fn new(labels: &[usize], det: &PuiseuxSeries) -> Self {
        let leading = det.leading().and_then(|(_, p)| p.as_constant()).zip(det.valuation_rational()).map(|(c, v)| (v, c));
        let vanishes_through = if leading.is_none() { det.acc_rational() } else { None };
        Self { labels: labels.to_vec(), leading, vanishes_through }
    }

    pub fn is_singular(&self) -> bool {
        self.leading.is_none()
    }

    pub fn label_string(&self) -> String {
        let l: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        format!("D[{}]", l.join(","))
    }
}

/// Diagnostics of one run of the series stage and linear solve.
#[derive(Clone, Debug)]
pub struct StageReport {
    pub weights: String,
    pub working_order: i64,
    pub x_shift: i64,
    pub roots: Vec<usize>,
    pub unknowns: Vec<UnknownTag>,
    /// Unknowns absent from every equation; read back from the boundary series.
    pub pruned: Vec<UnknownTag>,
    /// Q_{0,1} identified with Q_{1,0} (equal weights).
    pub merged: bool,
    pub chosen: Vec<usize>,
    pub chosen_determinant: DeterminantReport,
    /// Every equation set of the chosen size built from H_0 and the root equations.
    pub determinants: Vec<DeterminantReport>,
    /// Kreweras: the sets over all five points before Q(0,0) is injected.
    pub before_injection: Vec<DeterminantReport>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub model: ModelSpec,
    pub order: i64,
    /// Every reported series is exact through t^accurate_order (≥ order).
    pub accurate_order: i64,
    pub working_order: i64,
    pub points: BTreeMap<UnknownTag, PuiseuxSeries>,
    /// Q(x, 0).
    pub q_x0: PuiseuxSeries,
    /// Q(0, y), with x standing for y.
    pub q_0y: PuiseuxSeries,
    /// Q^d_0(x) = Σ Q_{k,k} x^k.
    pub q_diag: PuiseuxSeries,
    /// Q(x, y) through t^order.
    pub full: TriLaurent,
    pub report: StageReport,
    /// The run at swapped weights that gives Q(0, y); None when a = b.
    pub reflected: Option<StageReport>,
    pub elapsed: Duration,
}

impl Solution {
    pub fn point(&self, i: i64, j: i64) -> Option<&PuiseuxSeries> {
        self.points.get(&UnknownTag::Point(i, j))
    }
}

#[derive(Clone, Debug)]
struct LineSolve {
    points: BTreeMap<UnknownTag, PuiseuxSeries>,
    q_x0: PuiseuxSeries,
    q_diag: PuiseuxSeries,
    report: StageReport,
}

fn retryable(e: &PipelineError) -> bool {
    matches!(
        e,
        PipelineError::PrecisionExhausted { .. }
            | PipelineError::NoSolvableSubset(_)
            | PipelineError::Series(SeriesError::PrecisionExhausted { .. } | SeriesError::ZeroSeries(_))
            | PipelineError::Form(FormError::SingularSystem(_))
    )
}

/// Solve a model through t^order, raising the working order by 10 while precision runs out.
pub fn solve(model: &ModelSpec, opts: &SolveOptions) -> PipelineResult<Solution> {
    let start = Instant::now();
    let stages = Stages::build(model)?;
    let mut w = opts.initial_working_order();
    let mut last = None;
    for _ in 0..=opts.max_raises {
        match solve_at(&stages, opts.order, w) {
            Ok(mut s) if s.accurate_order >= opts.order => {
                s.elapsed = start.elapsed();
                return Ok(s);
            }
            Ok(s) => last = Some(PipelineError::PrecisionExhausted { needed: opts.order, reached: s.accurate_order, working: w }),
            Err(e) if retryable(&e) => last = Some(e),
            Err(e) => return Err(e),
        }
        w += 10;
    }
    Err(last.expect("at least one attempt"))
}

/// Exact stages needed for one model: the model itself, its reflection, and for Kreweras
/// the reverse Kreweras model supplying Q(0,0).
struct Stages {
    model: ModelSpec,
    main: ExactStage,
    reflected: Option<ExactStage>,
    origin: Option<ExactStage>,
}

impl Stages {
    fn build(model: &ModelSpec) -> PipelineResult<Self> {
        let w = &model.weights;
        let main = exact_stage(model)?;
        let reflected = if w.a == w.b { None } else { Some(exact_stage(&ModelSpec::new(model.name, w.swapped()))?) };
        let origin = match model.name {
            ModelName::Kreweras => Some(exact_stage(&ModelSpec::new(ModelName::ReverseKreweras, w.clone()))?),
            ModelName::ReverseKreweras => None,
        };
        Ok(Self { model: model.clone(), main, reflected, origin })
    }
}

fn solve_at(st: &Stages, order: i64, w: i64) -> PipelineResult<Solution> {
    use UnknownTag::Point;
    let q00 = match &st.origin {
        Some(rk) => Some(solve_line(rk, w, None)?.points[&Point(0, 0)].clone()),
        None => None,
    };
    let (main, refl) = std::thread::scope(|s| {
        let h = st.reflected.as_ref().map(|r| s.spawn(|| solve_line(r, w, q00.as_ref())));
        let main = solve_line(&st.main, w, q00.as_ref());
        (main, h.map(|h| h.join().expect("reflected solve panicked")))
    });
    let main = main?;
    let refl = refl.transpose()?;
    let (q_0y, reflected) = match &refl {
        Some(r) => (r.q_x0.clone(), Some(r.report.clone())),
        None => (main.q_x0.clone(), None),
    };

    let mut points = main.points.clone();
    for k in 0..=4 {
        let from_line = main.q_x0.x_coeff(k);
        points.entry(Point(k, 0)).or_insert(from_line);
    }
    let p01 = q_0y.x_coeff(1);
    if let Some(v) = points.get(&Point(0, 1)) {
        if !v.agrees_with(&p01) {
            return Err(PipelineError::Inconsistent(format!("Q_{{0,1}} = {v} but [y]Q(0,y) = {p01}")));
        }
    }
    if st.model.name == ModelName::ReverseKreweras {
        points.entry(Point(0, 1)).or_insert(p01);
    } else {
        points.retain(|t, _| matches!(t, Point(_, 0)));
    }

    let accurate_order = points.values().chain([&main.q_x0, &q_0y]).filter_map(|s| s.acc_t()).min().unwrap_or(i64::MAX);
    let cut = |s: &PuiseuxSeries| s.truncate_t(order);
    let points: BTreeMap<_, _> = points.iter().map(|(t, s)| (*t, cut(s))).collect();
    let (q_x0, q_0y) = (cut(&main.q_x0), cut(&q_0y));
    let q_diag = cut(&main.q_diag);
    let full = if accurate_order >= order { assemble_full(&st.model, &q_x0, &q_0y, &points[&Point(0, 0)], order)? } else { TriLaurent::zero() };
    Ok(Solution {
        model: st.model.clone(),
        order,
        accurate_order,
        working_order: w,
        points,
        q_x0,
        q_0y,
        q_diag,
        full,
        report: main.report,
        reflected,
        elapsed: Duration::ZERO,
    })
}

/// Q(x,y) from K·Q = 1/c + A′Q(x,0) + B′Q(0,y) + (κ + tG)Q(0,0), one power of t at a time.
fn assemble_full(model: &ModelSpec, q_x0: &PuiseuxSeries, q_0y: &PuiseuxSeries, q00: &PuiseuxSeries, order: i64) -> PipelineResult<TriLaurent> {
    let swap = ((0, 1), (1, 0));
    let poly = |s: &PuiseuxSeries| TriLaurent::from_series(&s.truncate_t(order).simplify_ram().stored_terms());
    let rhs = &(&(&TriLaurent::constant(Rational::from_integer(1.into()) / &model.weights.c) + &(&model.a_prime() * &poly(q_x0)))
        + &(&model.b_prime() * &poly(q_0y).apply(swap)))
        + &(&model.origin_coeff() * &poly(q00));
    let mut layers: BTreeMap<i64, TriLaurent> = BTreeMap::new();
    for (&(x, y, t), c) in rhs.terms() {
        if t <= order {
            layers.entry(t).or_default().add_term(x, y, 0, c.clone());
        }
    }
    let s = model.s();
    let mut full = TriLaurent::zero();
    let mut prev = TriLaurent::zero();
    for n in 0..=order {
        let mut cur = layers.remove(&n).unwrap_or_default();
        cur = &cur + &(&s * &prev);
        if let Some((&(x, y, _), _)) = cur.terms().find(|((x, y, _), _)| *x < 0 || *y < 0) {
            return Err(PipelineError::Inconsistent(format!("Q(x,y) has x^{x} y^{y} at t^{n}")));
        }
        for (&(x, y, _), c) in cur.terms() {
            full.add_term(x, y, n, c.clone());
        }
        prev = cur;
    }
    Ok(full)
}

/// Paired root of the other regime.
fn partner(l: usize) -> usize {
    if l % 2 == 1 {
        l + 1
    } else {
        l - 1
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, items[i]);
            out.push(rest);
        }
    }
    out
}

/// Candidate equation sets in order of preference: the documented sets, their regime
/// swapped versions, then every set in lexicographic order.
fn preference(name: ModelName, labels: &[usize], n: usize) -> Vec<Vec<usize>> {
    let documented: Vec<Vec<usize>> = match name {
        ModelName::ReverseKreweras => vec![vec![1, 3, 7], vec![1, 5, 7], vec![3, 5, 7], vec![0, 1, 7], vec![0, 5, 7]],
        ModelName::Kreweras => vec![vec![1, 3, 5, 7]],
    };
    let mut swapped = Vec::new();
    for set in &documented {
        let movable = set.iter().filter(|l| **l > 0).count();
        for mask in 1..(1usize << movable) {
            let mut bit = 0;
            let v: Vec<usize> = set
                .iter()
                .map(|&l| {
                    if l == 0 {
                        return l;
                    }
                    let flip = mask >> bit & 1 == 1;
                    bit += 1;
                    if flip {
                        partner(l)
                    } else {
                        l
                    }
                })
                .collect();
            swapped.push(v);
        }
    }
    let have: BTreeSet<usize> = labels.iter().copied().collect();
    let mut seen = BTreeSet::new();
    documented
        .into_iter()
        .chain(swapped)
        .chain(combinations(labels, n))
        .filter(|s| s.len() == n && s.iter().all(|l| have.contains(l)))
        .filter(|s| seen.insert(s.clone()))
        .collect()
}

fn pick(eqs: &[HEquation], labels: &[usize]) -> Vec<Form> {
    labels.iter().map(|l| eqs.iter().find(|h| h.label == *l).expect("known label").form.clone()).collect()
}

fn report_all(eqs: &[HEquation], unknowns: &[UnknownTag], labels: &[usize]) -> Vec<DeterminantReport> {
    combinations(labels, unknowns.len())
        .into_iter()
        .map(|set| DeterminantReport::new(&set, &determinant(&matrix(&pick(eqs, &set), unknowns))))
        .collect()
}

/// Move Q_{0,1} onto Q_{1,0} (valid when the weights are symmetric).
fn merge_01(eqs: &[HEquation]) -> Vec<HEquation> {
    use UnknownTag::Point;
    eqs.iter()
        .map(|h| {
            let mut f = h.form.clone();
            if let Some(c) = f.remove(&Point(0, 1)) {
                f.add_term(Point(1, 0), c);
            }
            HEquation { label: h.label, form: f }
        })
        .collect()
}

fn first_nonsingular(name: ModelName, eqs: &[HEquation], unknowns: &[UnknownTag], w: i64) -> Option<(Vec<usize>, BTreeMap<UnknownTag, PuiseuxSeries>, DeterminantReport)> {
    let labels: Vec<usize> = eqs.iter().map(|h| h.label).collect();
    for set in preference(name, &labels, unknowns.len()) {
        let forms = pick(eqs, &set);
        if let Ok(s) = solve_system(&forms, unknowns, w) {
            let rep = DeterminantReport::new(&set, &s.determinant);
            return Some((set, s.values, rep));
        }
    }
    None
}

fn solve_line(exact: &ExactStage, w: i64, q00: Option<&PuiseuxSeries>) -> PipelineResult<LineSolve> {
    use UnknownTag::Point;
    let ss = series_stage(exact, w)?;
    let name = exact.model.name;
    let h_labels: Vec<usize> = ss.equations.iter().map(|h| h.label).collect();
    let before_injection = if q00.is_some() { report_all(&ss.equations, &ss.targets, &h_labels) } else { Vec::new() };

    let mut eqs = ss.equations.clone();
    let mut unknowns = ss.targets.clone();
    let mut fixed: BTreeMap<UnknownTag, PuiseuxSeries> = BTreeMap::new();
    if let Some(q) = q00 {
        fixed.insert(Point(0, 0), q.clone());
        unknowns.retain(|t| *t != Point(0, 0));
        eqs = eqs.iter().map(|h| HEquation { label: h.label, form: inject(&h.form, &fixed) }).collect();
    }
    let present = |eqs: &[HEquation], t: &UnknownTag| eqs.iter().any(|h| h.form.has(t));
    let pruned: Vec<UnknownTag> = unknowns.iter().filter(|t| !present(&eqs, t)).copied().collect();
    unknowns.retain(|t| !pruned.contains(t));

    let mut merged = false;
    let mut found = first_nonsingular(name, &eqs, &unknowns, w);
    let w8 = &exact.model.weights;
    if found.is_none() && w8.a == w8.b && unknowns.contains(&Point(0, 1)) && unknowns.contains(&Point(1, 0)) {
        let m = merge_01(&eqs);
        let u: Vec<UnknownTag> = unknowns.iter().filter(|t| **t != Point(0, 1)).copied().collect();
        if let Some((set, mut vals, rep)) = first_nonsingular(name, &m, &u, w) {
            vals.insert(Point(0, 1), vals[&Point(1, 0)].clone());
            found = Some((set, vals, rep));
            merged = true;
            eqs = m;
        }
    }
    if found.is_none() {
        let mut all = eqs.clone();
        for h in ss.pole_equations(4)? {
            all.push(HEquation { label: h.label, form: inject(&h.form, &fixed) });
        }
        found = first_nonsingular(name, &all, &unknowns, w);
        eqs = all;
    }
    let Some((chosen, values, chosen_determinant)) = found else {
        let reps = report_all(&ss.equations, &unknowns, &h_labels);
        let shown: Vec<String> = reps.iter().map(|r| format!("{} through t^{}", r.label_string(), r.vanishes_through.as_ref().map(|v| v.to_string()).unwrap_or_default())).collect();
        return Err(PipelineError::NoSolvableSubset(shown.join(", ")));
    };
    let root_labels: Vec<usize> = h_labels.clone();
    let determinants = report_all(&eqs, &unknowns, &root_labels);
    fixed.extend(values);

    let q_x0 = back_substitute(&ss.pos, UnknownTag::LineY(0), &fixed)?;
    let q_diag = back_substitute(&ss.neg, UnknownTag::Diag(0), &fixed)?;
    for t in &pruned {
        if let Point(k, 0) = *t {
            fixed.insert(*t, q_x0.x_coeff(k));
        }
    }
    let report = StageReport {
        weights: exact.model.weights.to_string(),
        working_order: w,
        x_shift: ss.x_shift,
        roots: ss.roots.iter().map(|r| r.label).collect(),
        unknowns,
        pruned,
        merged,
        chosen,
        chosen_determinant,
        determinants,
        before_injection,
    };
    Ok(LineSolve { points: fixed, q_x0, q_diag, report })
}

fn inject(form: &Form, fixed: &BTreeMap<UnknownTag, PuiseuxSeries>) -> Form {
    let mut f = form.clone();
    for (t, v) in fixed {
        if let Some(c) = f.remove(t) {
            f.add_known(&(&c * v));
        }
    }
    f
}

/// Solve coef·F = −rest for the function tag F, dividing order by order in t.
fn back_substitute(form: &Form, tag: UnknownTag, values: &BTreeMap<UnknownTag, PuiseuxSeries>) -> PipelineResult<PuiseuxSeries> {
    let mut rest = form.clone();
    let Some(coef) = rest.remove(&tag) else {
        return Err(PipelineError::UnexpectedUnknowns { stage: "back-substitution", found: format!("no {tag}") });
    };
    if let Some(t) = rest.tags().find(|t| !values.contains_key(t)) {
        return Err(PipelineError::UnexpectedUnknowns { stage: "back-substitution", found: t.to_string() });
    }
    let r = rest.evaluate(|t| values.get(t).cloned());
    Ok((-&r).div_orderwise(&coef)?)
}
