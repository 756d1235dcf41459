use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use super::orbit_system::OrbitSystem;
use super::{PipelineError, PipelineResult};
use crate::exact_series::tri::TriLaurent;
use crate::exact_series::{PuiseuxSeries, Rational};
use crate::linear_forms::{extract, fe_form, point_identity, Coef, FnKind, LinearForm, Surd, UnknownTag};
use crate::walk_oracle::{ModelName, ModelSpec, GROUP};

type Form = LinearForm<PuiseuxSeries>;

/// Exact forms produced before any series is truncated.
#[derive(Clone, Debug)]
pub struct ExactStage {
    pub model: ModelSpec,
    pub system: OrbitSystem,
    /// Full-orbit sum [y^0] after the section eliminations, left side only.
    pub fos: Form,
    /// Its [x^>] and [x^<] parts reduced to the target points. For Kreweras the positive
    /// part also carries the Theta tags standing for the right side.
    pub fos_pos: Form,
    pub fos_neg: Form,
    /// N·C = nc_known + nc_q00·Q(0,0).
    pub nc_known: TriLaurent,
    pub nc_q00: TriLaurent,
    /// Half-orbit sum [y^0] times √Δ, with s standing for √Δ.
    pub half: LinearForm<Surd>,
    /// The equation in Q(x,0) and Q^d_0(x̄) left after eliminating the other functions.
    pub master: LinearForm<Surd>,
    pub delta: Arc<PuiseuxSeries>,
    pub targets: Vec<UnknownTag>,
}

/// Points kept as unknowns through the exact stage.
pub fn exact_targets(name: ModelName) -> Vec<UnknownTag> {
    use UnknownTag::Point;
    match name {
        ModelName::ReverseKreweras => vec![Point(0, 0), Point(0, 1), Point(1, 0)],
        ModelName::Kreweras => vec![Point(0, 0), Point(1, 0), Point(2, 0), Point(3, 0)],
    }
}

/// Section identity whose monomial pivot removes `tag`, and the size of the index removed.
fn section_for(tag: &UnknownTag) -> Option<(usize, i64, i64)> {
    match *tag {
        UnknownTag::LineY(i) if i >= 1 => Some((0, i - 1, i)),
        UnknownTag::LineX(i) if i >= 1 => Some((3, i - 1, i)),
        UnknownTag::Diag(j) if j >= 2 => Some((1, j - 1, j)),
        UnknownTag::Diag(j) if j <= -1 => Some((1, j + 1, -j)),
        _ => None,
    }
}

/// Remove every line and diagonal except Q(x,0), Q(0,x), Q^d_0 and Q^d_1, largest index first.
pub fn reduce_sections(model: &ModelSpec, form: &Form) -> PipelineResult<Form> {
    let mut f = form.clone();
    for _ in 0..64 {
        let next = f.function_tags().into_iter().filter_map(|t| section_for(&t).map(|s| (s.2, t, s))).max_by_key(|(size, t, _)| (*size, *t));
        let Some((_, tag, (g, j, _))) = next else {
            return Ok(f);
        };
        let id = fe_form(model, GROUP[g], j)?;
        f = f.eliminate(&id, tag)?;
    }
    Err(PipelineError::UnexpectedUnknowns { stage: "section elimination", found: format!("{:?}", f.function_tags()) })
}

/// The step entering a point from below; its point identity has a monomial pivot there.
fn entering_step(model: &ModelSpec) -> (i64, i64) {
    *model.steps().iter().find(|s| s.1 == -1).expect("a step lowers y")
}

/// Replace points outside `targets` using point identities, highest row first.
pub fn eliminate_points<C: Coef>(
    model: &ModelSpec,
    form: &LinearForm<C>,
    targets: &[UnknownTag],
    lift: impl Fn(&PuiseuxSeries) -> C,
) -> PipelineResult<LinearForm<C>> {
    let (dx, dy) = entering_step(model);
    let mut f = form.clone();
    for _ in 0..256 {
        let next = f
            .point_tags()
            .into_iter()
            .filter(|t| !targets.contains(t))
            .max_by_key(|t| match t {
                UnknownTag::Point(i, j) => (*j, *i),
                _ => unreachable!(),
            });
        let Some(tag) = next else {
            return Ok(f);
        };
        let UnknownTag::Point(i, j) = tag else { unreachable!() };
        let (pi, pj) = (i + dx, j + dy);
        if pi < 0 || pj < 0 {
            return Err(PipelineError::UnexpectedUnknowns { stage: "point elimination", found: tag.to_string() });
        }
        let id = point_identity(model, pi, pj)?.map(&lift);
        f = f.eliminate(&id, tag)?;
    }
    Err(PipelineError::UnexpectedUnknowns { stage: "point elimination", found: format!("{:?}", f.point_tags()) })
}

fn check_tags<C: Coef>(stage: &'static str, f: &LinearForm<C>, allowed_functions: &[UnknownTag], targets: &[UnknownTag]) -> PipelineResult<()> {
    let bad: Vec<String> = f
        .tags()
        .filter(|t| if t.is_point() { !targets.contains(t) } else { !allowed_functions.contains(t) })
        .map(|t| t.to_string())
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(PipelineError::UnexpectedUnknowns { stage, found: bad.join(", ") })
    }
}

/// The two roots of the kernel in y.
pub struct KernelBranches {
    pub delta: Arc<PuiseuxSeries>,
    /// Y0 = (1 − tA0 − s)/(2tA1), the small root.
    pub y0: Surd,
    /// 1/Y1 = Y0·A1/A_{-1}.
    pub y1_inv: Surd,
}

impl KernelBranches {
    pub fn new(model: &ModelSpec) -> Self {
        let by = model.s().by_y();
        let get = |m: i64| by.get(&m).cloned().unwrap_or_else(PuiseuxSeries::exact_zero);
        let (am, a0, a1) = (get(-1), get(0), get(1));
        let t = PuiseuxSeries::t();
        let one = PuiseuxSeries::one();
        let lin = &one - &(&t * &a0);
        let cross = (&(&t * &t) * &(&am * &a1)).scale(&Rational::from_integer(4.into()));
        let delta = &lin.pow(2) - &cross;
        let delta = Arc::new(delta);
        let (k, e, c) = a1.as_monomial().expect("A1 is a monomial");
        let inv2ta1 = PuiseuxSeries::term(-1 - k, -e, (Rational::one() / Rational::from_integer(2.into())) / &c);
        let p = &(&one - &(&t * &a0)) * &inv2ta1;
        let q = -&inv2ta1;
        let y0 = Surd::new(p, q, &delta);
        let (km, em, cm) = am.as_monomial().expect("A_{-1} is a monomial");
        let ratio = PuiseuxSeries::term(k - km, e - em, c / cm);
        let y1_inv = Coef::mul(&y0, &Surd::rational(ratio, &delta));
        Self { delta, y0, y1_inv }
    }

    /// Z_m = √Δ·[y^{-m}](1/K): Y0^m for m ≥ 0 and Y1^{m} for m < 0.
    pub fn z(&self, m: i64) -> Surd {
        if m >= 0 {
            self.y0.pow(m as u32)
        } else {
            self.y1_inv.pow((-m) as u32)
        }
    }

    /// Σ_m R_m Z_m for a Laurent polynomial R in y, i.e. √Δ·[y^0](R/K).
    pub fn y0_part(&self, r: &TriLaurent) -> Surd {
        let mut acc = Surd::zero();
        for (m, rm) in r.by_y() {
            acc = acc.add(&Coef::mul(&Surd::rational(rm, &self.delta), &self.z(m)));
        }
        acc
    }
}

fn orbit_sum(n: &[TriLaurent]) -> PipelineResult<Form> {
    let mut f = Form::zero();
    for (ni, g) in n.iter().zip(GROUP) {
        if !ni.is_zero() {
            extract(ni, FnKind::Q, g, 0, &mut f)?;
        }
    }
    Ok(f)
}

pub fn exact_stage(model: &ModelSpec) -> PipelineResult<ExactStage> {
    use UnknownTag::*;
    let system = OrbitSystem::build(model);
    system.check()?;
    let targets = exact_targets(model.name);
    let (nc_known, nc_q00) = system.n_times_c();

    // Full-orbit sum.
    let fos = reduce_sections(model, &orbit_sum(&system.n)?)?;
    let split = fos.x_split()?;
    let mut fos_pos = eliminate_points(model, &split.pos, &targets, |p| p.clone())?;
    let fos_neg = eliminate_points(model, &split.neg, &targets, |p| p.clone())?;
    check_tags("full-orbit [x^>]", &fos_pos, &[LineY(0), LineX(0)], &targets)?;
    check_tags("full-orbit [x^<]", &fos_neg, &[Diag(0), Diag(1)], &targets)?;
    if !(nc_known.is_zero() && nc_q00.is_zero()) {
        fos_pos.add_term(Theta, -PuiseuxSeries::one());
        fos_pos.add_term(Theta00, -PuiseuxSeries::one());
    }

    // Half-orbit sum: s·[y^0](N₂Q) = Σ_m R_m Z_m.
    let branches = KernelBranches::new(model);
    let delta = branches.delta.clone();
    let lhs = reduce_sections(model, &orbit_sum(&system.n2)?)?;
    let mut rhs: BTreeMap<Option<UnknownTag>, TriLaurent> = BTreeMap::new();
    let one_over_c = TriLaurent::constant(Rational::one() / &model.weights.c);
    for (i, g) in GROUP.iter().enumerate() {
        let ni = &system.n2[i];
        if ni.is_zero() {
            continue;
        }
        let mut put = |tag: Option<UnknownTag>, v: TriLaurent| {
            let e = rhs.entry(tag).or_default();
            *e = &*e + &(ni * &v);
        };
        put(None, one_over_c.clone());
        put(Some(Point(0, 0)), model.origin_coeff().apply(*g));
        if g.0 == (1, 0) {
            put(Some(LineY(0)), model.a_prime().apply(*g));
        }
        if g.1 == (1, 0) {
            put(Some(LineX(0)), model.b_prime().apply(*g));
        }
    }
    let mut half = lhs.map(|c| Surd::surd(c.clone(), &delta));
    for (tag, r) in &rhs {
        let v = branches.y0_part(r).neg();
        match tag {
            Some(t) => half.add_term(*t, v),
            None => half.add_known(&v),
        }
    }
    let lift = |p: &PuiseuxSeries| Surd::rational(p.clone(), &delta);
    let half = eliminate_points(model, &half, &targets, lift)?;

    // Master equation: remove Q(0,x), and Q^d_1 where present.
    let mut master = half.clone();
    let pos_s = fos_pos.map(lift);
    master = cross(&master, &pos_s, LineX(0))?;
    if master.has(&Diag(1)) {
        master = cross(&master, &fos_neg.map(lift), Diag(1))?;
    }
    let master = monic_shift(&eliminate_points(model, &master, &targets, lift)?);
    check_tags("master equation", &master, &[LineY(0), Diag(0), Theta, Theta00], &targets)?;
    Ok(ExactStage { model: model.clone(), system, fos, fos_pos, fos_neg, nc_known, nc_q00, half, master, delta, targets })
}

/// Multiply by a monomial so that every coefficient is a polynomial in x and t with some
/// coefficient reaching x^0 and some reaching t^0.
fn monic_shift(f: &LinearForm<Surd>) -> LinearForm<Surd> {
    let parts: Vec<&PuiseuxSeries> = std::iter::once(&f.known).chain(f.terms().map(|(_, c)| c)).flat_map(|c| [&c.p, &c.q]).filter(|p| !p.is_zero()).collect();
    let xlo = parts.iter().filter_map(|p| p.x_range()).map(|r| r.0).min().unwrap_or(0);
    let tlo = parts.iter().filter_map(|p| p.valuation()).min().unwrap_or(0);
    f.map(|c| Surd::new(c.p.shift_x(-xlo).shift_t_whole(-tlo), c.q.shift_x(-xlo).shift_t_whole(-tlo), c.delta().expect("surd coefficients")))
}

fn cross(target: &LinearForm<Surd>, using: &LinearForm<Surd>, tag: UnknownTag) -> PipelineResult<LinearForm<Surd>> {
    if target.has(&tag) && !using.has(&tag) {
        return Err(PipelineError::UnexpectedUnknowns { stage: "master elimination", found: tag.to_string() });
    }
    Ok(target.eliminate_cross(using, tag)?)
}
