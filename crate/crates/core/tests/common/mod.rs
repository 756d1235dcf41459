//! Shared by the integration tests and the acceptance binary.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use walks_core::exact_series::{parse_rational, rat, LaurentPoly, PuiseuxSeries, Rational, TriLaurent, XPart};
use walks_core::kernel_pipeline::{canonical_factorization, exact_stage, kreweras_nc_closed_form, Factorization, OrbitSystem, Solution};
use walks_core::walk_oracle::{functional_equation_residual, ModelName, ModelSpec, Selector, WalkTable, Weights, GROUP};

pub const WEIGHTS: [(&str, &str, &str); 8] =
    [("2", "3", "5"), ("1/2", "3", "2"), ("3", "2", "5"), ("2", "2", "7"), ("3", "1", "2"), ("1", "3", "2"), ("3/2", "1/2", "1"), ("1", "1", "1")];

pub const MODELS: [ModelName; 2] = [ModelName::ReverseKreweras, ModelName::Kreweras];

pub fn model_at(name: ModelName, w: (&str, &str, &str)) -> ModelSpec {
    ModelSpec::new(name, Weights::parse(w.0, w.1, w.2).unwrap())
}

// ---- oracle comparison

/// Every mismatch between a solution and enumeration through t^order.
pub fn oracle_mismatches(sol: &Solution, order: i64) -> Vec<String> {
    let table = WalkTable::enumerate(&sol.model, order as usize);
    let mut out = Vec::new();
    let mut cmp = |label: String, got: &PuiseuxSeries, want: PuiseuxSeries| {
        if got.truncate_t(order) != want.truncate_t(order) {
            out.push(label);
        }
    };
    for (tag, s) in &sol.points {
        let walks_core::linear_forms::UnknownTag::Point(i, j) = *tag else { unreachable!() };
        cmp(tag.to_string(), s, table.boundary_series(Selector::Point(i, j)).unwrap());
    }
    cmp("Q(x,0)".into(), &sol.q_x0, table.boundary_series(Selector::LineY(0)).unwrap());
    cmp("Q(0,y)".into(), &sol.q_0y, table.boundary_series(Selector::LineX(0)).unwrap());
    cmp("Q^d_0".into(), &sol.q_diag, table.boundary_series(Selector::Diag(0)).unwrap());
    if truncate_tri(&sol.full, order) != table.full() {
        out.push("Q(x,y)".into());
    }
    out
}

pub fn truncate_tri(s: &TriLaurent, n: i64) -> TriLaurent {
    let mut out = TriLaurent::zero();
    for (&(x, y, t), c) in s.terms() {
        if t <= n {
            out.add_term(x, y, t, c.clone());
        }
    }
    out
}

/// K·Q − (1/c + A′Q(x,0) + B′Q(0,y) + (κ + tG)Q(0,0)) on solved series, through t^n.
pub fn solution_residual(sol: &Solution, n: i64) -> TriLaurent {
    let m = &sol.model;
    let embed = |s: &PuiseuxSeries| TriLaurent::from_series(&s.truncate_t(n).simplify_ram().stored_terms());
    let qx0 = embed(&sol.q_x0);
    let q0y = embed(&sol.q_0y).apply(((0, 1), (0, 1)));
    let q00 = embed(&sol.q_x0.x_coeff(0));
    let rhs = &(&(&TriLaurent::constant(Rational::from_integer(1.into()) / &m.weights.c) + &(&m.a_prime() * &qx0)) + &(&m.b_prime() * &q0y))
        + &(&m.origin_coeff() * &q00);
    truncate_tri(&(&(&m.kernel() * &truncate_tri(&sol.full, n)) - &rhs), n)
}

// ---- printed series

/// Σ c·x^e·t^(k/ram), known through t^(acc/ram).
pub fn printed(ram: u32, terms: &[(i64, i64, &str)], acc: i64) -> PuiseuxSeries {
    let mut s = PuiseuxSeries::zero_through(ram, acc);
    for &(k, e, c) in terms {
        s = &s + &PuiseuxSeries::from_terms(ram, [(k, LaurentPoly::monomial(e, parse_rational(c).unwrap()))], None);
    }
    s
}

pub fn unit_factorization(name: ModelName) -> Factorization {
    let m = ModelSpec::new(name, Weights::unit());
    canonical_factorization(&exact_stage(&m).unwrap().delta, 12).unwrap()
}

/// (label, computed, printed) for the roots of Δ and the two square roots.
pub fn printed_series(name: ModelName) -> Vec<(&'static str, PuiseuxSeries, PuiseuxSeries)> {
    let f = unit_factorization(name);
    match name {
        ModelName::ReverseKreweras => vec![
            ("X1", f.small_roots[0].clone(), printed(1, &[(2, 0, "4"), (5, 0, "32"), (8, 0, "448")], 10)),
            (
                "X2",
                f.large_roots[0].clone(),
                printed(2, &[(-2, 0, "1"), (1, 0, "2"), (4, 0, "-2"), (7, 0, "5"), (10, 0, "-16"), (13, 0, "231/4"), (16, 0, "-224"), (19, 0, "7293/8")], 21),
            ),
            (
                "X3",
                f.large_roots[1].clone(),
                printed(2, &[(-2, 0, "1"), (1, 0, "-2"), (4, 0, "-2"), (7, 0, "-5"), (10, 0, "-16"), (13, 0, "-231/4"), (16, 0, "-224"), (19, 0, "-7293/8")], 21),
            ),
            ("1/sqrt(D+)", f.f.clone(), printed(1, &[(0, 0, "1"), (1, 1, "1"), (2, 2, "1"), (3, 3, "1"), (4, 1, "6"), (4, 4, "1")], 4)),
            ("sqrt(D0 D-)", f.g.clone(), printed(1, &[(0, 0, "1"), (2, -1, "-2"), (3, 0, "-4"), (4, -2, "-2")], 4)),
        ],
        ModelName::Kreweras => vec![
            (
                "X1",
                f.small_roots[0].clone(),
                printed(2, &[(2, 0, "1"), (5, 0, "2"), (8, 0, "6"), (11, 0, "21"), (14, 0, "80"), (17, 0, "1287/4"), (20, 0, "1344")], 20),
            ),
            (
                "X2",
                f.small_roots[1].clone(),
                printed(2, &[(2, 0, "1"), (5, 0, "-2"), (8, 0, "6"), (11, 0, "-21"), (14, 0, "80"), (17, 0, "-1287/4"), (20, 0, "1344")], 20),
            ),
            ("X3", f.large_roots[0].clone(), printed(1, &[(-2, 0, "1/4"), (1, 0, "-2"), (4, 0, "-12"), (7, 0, "-160"), (10, 0, "-2688")], 10)),
            ("1/sqrt(D+)", f.f.clone(), printed(1, &[(0, 0, "1"), (2, 1, "2"), (4, 2, "6"), (5, 1, "16")], 5)),
            ("sqrt(D0 D-)", f.g.clone(), printed(1, &[(0, 0, "1"), (1, -1, "-1"), (3, 0, "-4"), (4, -1, "-2"), (5, -2, "-2")], 5)),
        ],
    }
}

/// None when `got` carries every printed term at the printed precision.
pub fn series_mismatch(got: &PuiseuxSeries, want: &PuiseuxSeries) -> Option<String> {
    if got.acc_rational().is_some_and(|a| Some(a) < want.acc_rational()) {
        return Some(format!("accurate only to t^{}", got.acc_rational().unwrap()));
    }
    got.first_difference(want).map(|k| format!("differs at t^{k}"))
}

// ---- determinant closed forms

pub fn pow(x: &Rational, n: i32) -> Rational {
    (0..n).fold(rat(1, 1), |acc, _| acc * x)
}

/// Leading t^10 coefficients of D[1,3,7], D[1,5,7], D[3,5,7] from the printed closed forms.
pub fn reverse_kreweras_triples(a: &Rational, b: &Rational, c: &Rational) -> [(Vec<usize>, Rational); 3] {
    let one = rat(1, 1);
    let two = rat(2, 1);
    let s = a + b - &two;
    let common = |p: i32, q: i32| pow(a, p) * pow(b, q) * c * c * pow(&(a - b), 2);
    [
        (vec![1, 3, 7], rat(16, 1) * common(6, 4) * (a - &one) * (a - &two) * (a * b - &one) / &s),
        (vec![1, 5, 7], rat(-8, 1) * common(8, 3) * pow(&(a - &one), 2) * pow(&(b - &one), 2) * (a * b - a + &one)),
        (vec![3, 5, 7], rat(-16, 1) * common(7, 4) * pow(&(a - &one), 2) * pow(&(b - &one), 2) * (a * b - &one) / &s),
    ]
}

/// Leading t^26 coefficient of D[1,3,5,7] from the printed closed form.
pub fn kreweras_quadruple(a: &Rational, b: &Rational, c: &Rational) -> Rational {
    let one = rat(1, 1);
    let two = rat(2, 1);
    rat(16, 1)
        * pow(a, 12)
        * pow(b, 5)
        * pow(c, 4)
        * pow(&(a - &one), 3)
        * (a - &two)
        * pow(&(b - &one), 5)
        * pow(&(a - b), 4)
        * (a * b - a - b)
        * pow(&(&two * a * b - a - b), 5)
        / pow(&(a + b - &two), 4)
}

// ---- random inputs

pub const CAP: i64 = 6;

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    ((1i64..=9), prop::bool::ANY, 1i64..=4).prop_map(|(n, neg, d)| rat(if neg { -n } else { n }, d))
}

pub fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i64..=3, small_rational()), 0..4).prop_map(LaurentPoly::from_terms)
}

/// Exact series with a monomial leading term.
pub fn unit_led() -> impl Strategy<Value = PuiseuxSeries> {
    (1u32..=3, -3i64..=3, -2i64..=2, nonzero_rational(), prop::collection::vec(laurent(), 0..5)).prop_map(|(ram, start, e, c, tail)| {
        let lead = LaurentPoly::monomial(e, c);
        let terms = std::iter::once((start, lead)).chain(tail.into_iter().enumerate().map(|(i, p)| (start + 1 + i as i64, p)));
        PuiseuxSeries::from_terms(ram, terms, None)
    })
}

pub fn any_series() -> impl Strategy<Value = PuiseuxSeries> {
    (1u32..=3, -3i64..=3, prop::collection::vec(laurent(), 0..6), prop::option::of(4i64..=12))
        .prop_map(|(ram, start, coeffs, acc)| PuiseuxSeries::new(ram, start, coeffs, acc.map(|a| start + a)))
}

pub fn model() -> impl Strategy<Value = ModelSpec> {
    (prop::bool::ANY, nonzero_rational(), nonzero_rational(), nonzero_rational()).prop_map(|(k, a, b, c)| {
        ModelSpec::new(if k { ModelName::Kreweras } else { ModelName::ReverseKreweras }, Weights::new(a, b, c).unwrap())
    })
}

// ---- laws

pub fn invert_law(f: &PuiseuxSeries) -> Result<(), TestCaseError> {
    let g = f.invert(CAP).unwrap();
    prop_assert!(g.acc_t().is_none_or(|a| a >= CAP));
    prop_assert!((f * &g).agrees_with(&PuiseuxSeries::one()));
    prop_assert!(g.invert(CAP + 10).unwrap().agrees_with(f));
    Ok(())
}

pub fn sqrt_law(g: &PuiseuxSeries) -> Result<(), TestCaseError> {
    let f = g * g;
    let s = f.sqrt(CAP).unwrap();
    prop_assert!(s.agrees_with(g) || s.agrees_with(&-g));
    prop_assert!((&s * &s).agrees_with(&f));
    let r = f.inv_sqrt(CAP).unwrap();
    prop_assert!((&r * &s).agrees_with(&PuiseuxSeries::one()));
    Ok(())
}

pub fn x_part_law(f: &PuiseuxSeries) -> Result<(), TestCaseError> {
    let (p, z, n) = (f.x_part(XPart::Pos), f.x_part(XPart::Zero), f.x_part(XPart::Neg));
    prop_assert_eq!(&(&p + &z) + &n, f.clone());
    prop_assert_eq!(f.x_part(XPart::Geq), &p + &z);
    prop_assert_eq!(f.x_part(XPart::Leq), &n + &z);
    prop_assert_eq!(f.invert_x().x_part(XPart::Pos), n.invert_x());
    prop_assert!(p.iter().all(|(_, c)| c.min_exp().unwrap() > 0));
    Ok(())
}

pub fn ramification_law(a: &PuiseuxSeries, b: &PuiseuxSeries, m: u32) -> Result<(), TestCaseError> {
    let (ua, ub) = PuiseuxSeries::unify(a, b);
    prop_assert_eq!(ua.ram(), ub.ram());
    prop_assert!(ua.agrees_with(a) && ub.agrees_with(b));
    // A finer grid keeps every known term.
    prop_assert!(ua.acc_rational() >= a.acc_rational());
    prop_assert_eq!((a + b).reramify(m), &a.reramify(m) + &b.reramify(m));
    prop_assert_eq!(a.reramify(m).simplify_ram(), a.simplify_ram());
    prop_assert_eq!((a * b).reramify(m), &a.reramify(m) * &b.reramify(m));
    Ok(())
}

pub fn group_law(m: &ModelSpec) -> Result<(), TestCaseError> {
    let k = m.kernel();
    for g in GROUP {
        prop_assert_eq!(k.apply(g), k.clone());
    }
    Ok(())
}

pub fn null_vector_law(m: &ModelSpec) -> Result<(), TestCaseError> {
    let sys = OrbitSystem::build(m);
    prop_assert!(sys.n_times_m().iter().all(|e| e.is_zero()));
    prop_assert!(sys.n2_times_m2().iter().all(|e| e.is_zero()));
    let (known, q00) = sys.n_times_c();
    match m.name {
        ModelName::ReverseKreweras => prop_assert!(known.is_zero() && q00.is_zero()),
        ModelName::Kreweras => {
            // Opposite overall sign to the printed closed form.
            let (k, q) = kreweras_nc_closed_form(m);
            prop_assert_eq!(known, -&k);
            prop_assert_eq!(q00, -&q);
        }
    }
    Ok(())
}

pub fn enumeration_residual_law(m: &ModelSpec) -> Result<(), TestCaseError> {
    prop_assert!(functional_equation_residual(&WalkTable::enumerate(m, 12)).is_zero());
    Ok(())
}
