use num_traits::One;

use super::{PipelineError, PipelineResult};
use crate::exact_series::tri::TriLaurent;
use crate::exact_series::Rational;
use crate::walk_oracle::{ModelName, ModelSpec, GROUP};

/// Arguments of the six boundary unknowns: (is first slot, exponent vector).
const V_ARGS: [(bool, (i64, i64)); 6] = [(true, (1, 0)), (false, (0, 1)), (true, (-1, -1)), (false, (-1, -1)), (false, (1, 0)), (true, (0, 1))];

/// Columns of M kept in the half-orbit system (the others move to C₂).
pub const HALF_COLUMNS: [usize; 4] = [1, 2, 3, 5];

/// The group orbit of the functional equation in matrix form.
#[derive(Clone, Debug)]
pub struct OrbitSystem {
    pub m: Vec<Vec<TriLaurent>>,
    /// C_i = known_i + q00_i · Q(0,0).
    pub c_known: Vec<TriLaurent>,
    pub c_q00: Vec<TriLaurent>,
    pub n: Vec<TriLaurent>,
    pub n2: Vec<TriLaurent>,
}

/// Σ c·x^i y^j t^k.
fn poly(terms: &[(Rational, i64, i64, i64)]) -> TriLaurent {
    let mut p = TriLaurent::zero();
    for (c, x, y, t) in terms {
        p.add_term(*x, *y, *t, c.clone());
    }
    p
}

fn prod(fs: &[TriLaurent]) -> TriLaurent {
    fs.iter().fold(TriLaurent::one(), |acc, f| &acc * f)
}

fn mono(c: i64, x: i64, y: i64) -> TriLaurent {
    TriLaurent::monomial(x, y, 0, Rational::from_integer(c.into()))
}

/// The null vectors N and N₂ as printed for each model.
fn null_vectors(model: &ModelSpec) -> (Vec<TriLaurent>, Vec<TriLaurent>) {
    let (a, b) = (&model.weights.a, &model.weights.b);
    let one = Rational::one();
    let zero = TriLaurent::zero();
    match model.name {
        ModelName::ReverseKreweras => {
            // 1 − w + t·w·m, and t·w + xy − w·xy
            let lo = |w: &Rational, mx: i64, my: i64| poly(&[(&one - w, 0, 0, 0), (w.clone(), mx, my, 1)]);
            let hi = |w: &Rational| poly(&[(w.clone(), 0, 0, 1), (one.clone(), 1, 1, 0), (-w.clone(), 1, 1, 0)]);
            let n = vec![
                prod(&[mono(-1, 0, 1), lo(b, 1, 0), lo(a, 0, 1)]),
                prod(&[mono(1, -1, 0), lo(a, 0, 1), hi(b)]),
                prod(&[mono(-1, -1, 0), lo(b, 0, 1), hi(a)]),
                prod(&[mono(1, 0, 1), lo(a, 1, 0), lo(b, 0, 1)]),
                prod(&[mono(-1, -1, 0), lo(a, 1, 0), hi(b)]),
                prod(&[mono(1, -1, 0), lo(b, 1, 0), hi(a)]),
            ];
            let n2 = vec![
                prod(&[mono(-1, 1, 0), lo(b, 1, 0), lo(a, 0, 1)]),
                prod(&[mono(1, 0, -1), lo(a, 0, 1), hi(b)]),
                zero.clone(),
                zero.clone(),
                prod(&[mono(-1, 0, -1), lo(a, 1, 0), hi(b)]),
                zero,
            ];
            (n, n2)
        }
        ModelName::Kreweras => {
            // w·t + v − w·v for v ∈ {x, y}, and 1 − w + w·t·xy
            let lin = |w: &Rational, vx: i64, vy: i64| poly(&[(w.clone(), 0, 0, 1), (&one - w, vx, vy, 0)]);
            let diag = |w: &Rational| poly(&[(&one - w, 0, 0, 0), (w.clone(), 1, 1, 1)]);
            let (ax, ay, bx, by) = (lin(a, 1, 0), lin(a, 0, 1), lin(b, 1, 0), lin(b, 0, 1));
            let (da, db) = (diag(a), diag(b));
            let n = vec![
                prod(&[ax.clone(), by.clone(), da.clone(), db.clone()]),
                prod(&[mono(-1, -1, 0), ax.clone(), bx.clone(), by.clone(), da.clone()]),
                prod(&[mono(1, -1, 0), ax.clone(), bx.clone(), ay.clone(), db.clone()]),
                prod(&[mono(-1, 0, 0), bx.clone(), ay.clone(), da.clone(), db.clone()]),
                prod(&[mono(1, 0, -1), bx.clone(), ay.clone(), by.clone(), da.clone()]),
                prod(&[mono(-1, 0, -1), ax.clone(), ay.clone(), by.clone(), db.clone()]),
            ];
            let n2 = vec![
                prod(&[ax.clone(), db]),
                prod(&[mono(-1, -1, 0), ax, bx.clone()]),
                zero.clone(),
                zero.clone(),
                prod(&[mono(1, 0, -1), bx, ay]),
                zero,
            ];
            (n, n2)
        }
    }
}

fn dot(n: &[TriLaurent], col: impl Fn(usize) -> TriLaurent) -> TriLaurent {
    n.iter().enumerate().fold(TriLaurent::zero(), |acc, (i, ni)| &acc + &(ni * &col(i)))
}

impl OrbitSystem {
    pub fn build(model: &ModelSpec) -> Self {
        let ap = model.a_prime();
        let bp = model.b_prime();
        let mut m = vec![vec![TriLaurent::zero(); 6]; 6];
        for (i, g) in GROUP.iter().enumerate() {
            let ia = V_ARGS.iter().position(|v| *v == (true, g.0)).expect("first argument listed");
            let ib = V_ARGS.iter().position(|v| *v == (false, g.1)).expect("second argument listed");
            m[i][ia] = &m[i][ia] + &ap.apply(*g);
            m[i][ib] = &m[i][ib] + &bp.apply(*g);
        }
        let known = TriLaurent::constant(Rational::one() / &model.weights.c);
        let c_known = vec![known; 6];
        let c_q00 = GROUP.iter().map(|g| model.origin_coeff().apply(*g)).collect();
        let (n, n2) = null_vectors(model);
        Self { m, c_known, c_q00, n, n2 }
    }

    /// N·M, one entry per column.
    pub fn n_times_m(&self) -> Vec<TriLaurent> {
        (0..6).map(|j| dot(&self.n, |i| self.m[i][j].clone())).collect()
    }

    /// N₂·M₂ on the half-orbit columns.
    pub fn n2_times_m2(&self) -> Vec<TriLaurent> {
        HALF_COLUMNS.iter().map(|&j| dot(&self.n2, |i| self.m[i][j].clone())).collect()
    }

    /// N·C as (known part, Q(0,0) coefficient).
    pub fn n_times_c(&self) -> (TriLaurent, TriLaurent) {
        (dot(&self.n, |i| self.c_known[i].clone()), dot(&self.n, |i| self.c_q00[i].clone()))
    }

    /// Aborts on a construction error: both null-vector identities must hold exactly.
    pub fn check(&self) -> PipelineResult<()> {
        if let Some(j) = self.n_times_m().iter().position(|e| !e.is_zero()) {
            return Err(PipelineError::NullvectorCheckFailed(format!("N·M column {j}")));
        }
        if let Some(j) = self.n2_times_m2().iter().position(|e| !e.is_zero()) {
            return Err(PipelineError::NullvectorCheckFailed(format!("N₂·M₂ column {}", HALF_COLUMNS[j])));
        }
        Ok(())
    }
}

/// t³x̄ȳ(a−b)(x−y)(x²y−1)(xy²−1)·[ab − (ab−ac−bc+abc)Q(0,0)]/c as (known, Q(0,0) coefficient).
pub fn kreweras_nc_closed_form(model: &ModelSpec) -> (TriLaurent, TriLaurent) {
    let (a, b, c) = (&model.weights.a, &model.weights.b, &model.weights.c);
    let one = Rational::one();
    let base = prod(&[
        TriLaurent::monomial(-1, -1, 3, (a - b) / c),
        poly(&[(one.clone(), 1, 0, 0), (-one.clone(), 0, 1, 0)]),
        poly(&[(one.clone(), 2, 1, 0), (-one.clone(), 0, 0, 0)]),
        poly(&[(one.clone(), 1, 2, 0), (-one, 0, 0, 0)]),
    ]);
    let k = a * b;
    let q = -(a * b - a * c - b * c + a * b * c);
    (base.scale(&k), base.scale(&q))
}

