use std::sync::Arc;

use num_traits::{One, Signed};

use super::PipelineResult;
use crate::exact_series::{puiseux_roots, PuiseuxSeries};

/// Δ = Δ0·Δ−(x̄)·Δ+(x), with its roots and the two square roots the kernel method uses.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub delta: Arc<PuiseuxSeries>,
    /// Roots vanishing at t = 0 (X1, ...), then the divergent ones.
    pub small_roots: Vec<PuiseuxSeries>,
    pub large_roots: Vec<PuiseuxSeries>,
    pub delta0: PuiseuxSeries,
    pub delta_plus: PuiseuxSeries,
    pub delta_minus: PuiseuxSeries,
    /// 1/√Δ+.
    pub f: PuiseuxSeries,
    /// √(Δ0Δ−).
    pub g: PuiseuxSeries,
    pub order: i64,
}

/// Factor Δ through t^order.
pub fn canonical_factorization(delta: &Arc<PuiseuxSeries>, order: i64) -> PipelineResult<Factorization> {
    let (lo, hi) = delta.x_range().expect("Δ is nonzero");
    let shift = (-lo).max(0);
    let poly = delta.shift_x(shift);
    let coeffs: Vec<PuiseuxSeries> = (0..=(hi + shift)).map(|i| poly.x_coeff(i)).collect();
    // 1/X for a divergent root loses nothing, but products with t^{-1} factors need slack.
    let roots = puiseux_roots(&coeffs, order + 4)?;
    let (small, large): (Vec<_>, Vec<_>) = roots.into_iter().partition(|r| r.valuation.is_positive());
    let small_roots: Vec<PuiseuxSeries> = small.into_iter().map(|r| r.value).collect();
    let large_roots: Vec<PuiseuxSeries> = large.into_iter().map(|r| r.value).collect();
    let one = PuiseuxSeries::one();
    let x = PuiseuxSeries::x();
    let xbar = PuiseuxSeries::term(0, -1, crate::exact_series::Rational::one());
    let mut delta_minus = one.clone();
    for r in &small_roots {
        delta_minus = (&delta_minus * &(&one - &(r * &xbar))).truncate_t(order + 2);
    }
    let mut delta_plus = one.clone();
    let mut prod_large = one.clone();
    for r in &large_roots {
        let inv = r.invert(order + 4)?;
        delta_plus = (&delta_plus * &(&one - &(&inv * &x))).truncate_t(order + 2);
        prod_large = &prod_large * r;
    }
    let d = large_roots.len() as i64;
    let mut lead = delta.x_coeff(hi);
    if d % 2 == 1 {
        lead = -&lead;
    }
    let delta0 = (&lead * &prod_large).truncate_t(order + 2);
    let delta_minus = delta_minus.simplify_ram();
    let delta_plus = delta_plus.simplify_ram();
    let delta0 = delta0.simplify_ram();
    let f = delta_plus.inv_sqrt(order)?.truncate_t(order).simplify_ram();
    let g = (&delta0 * &delta_minus).sqrt(order)?.truncate_t(order).simplify_ram();
    Ok(Factorization {
        delta: delta.clone(),
        small_roots,
        large_roots,
        delta0: delta0.truncate_t(order),
        delta_plus: delta_plus.truncate_t(order),
        delta_minus: delta_minus.truncate_t(order),
        f,
        g,
        order,
    })
}

impl Factorization {
    /// Δ0·Δ+·Δ− − Δ, which vanishes through the working order.
    pub fn residual(&self) -> PuiseuxSeries {
        let prod = &(&self.delta0 * &self.delta_plus) * &self.delta_minus;
        (&prod - self.delta.as_ref()).truncate_t(self.order)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::rational::{int, rat};
    use crate::exact_series::LaurentPoly;
    use crate::kernel_pipeline::orbit::KernelBranches;
    use crate::walk_oracle::{ModelName, ModelSpec, Weights};

    fn fact(name: ModelName, order: i64) -> Factorization {
        let m = ModelSpec::new(name, Weights::unit());
        canonical_factorization(&KernelBranches::new(&m).delta, order).unwrap()
    }

    #[test]
    fn reverse_kreweras_roots() {
        let f = fact(ModelName::ReverseKreweras, 10);
        assert!(f.residual().is_zero());
        assert_eq!((f.small_roots.len(), f.large_roots.len()), (1, 2));
        let x1 = &f.small_roots[0];
        for (k, c) in [(2, 4), (5, 32), (8, 448)] {
            assert_eq!(x1.coeff(k), LaurentPoly::constant(int(c)));
        }
        let x2 = f.large_roots[0].to_ram(2);
        assert_eq!(x2.coeff(13), LaurentPoly::constant(rat(231, 4)));
        assert_eq!(x2.coeff(19), LaurentPoly::constant(rat(7293, 8)));
    }
}
