//! The one-parameter abelian family ρ_α in SL(7), its unordered cross ratio,
//! orbit dimensions, and the non-flat abelian subgroup of SL(5).

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{echelonize, Ambient, PMatrix, Subspace};
use crate::padic::{PadicNumber, PrimeContext};

/// Unordered cross ratio of {0, 1, 2, α}, kept with multiplicity.
#[derive(Clone, Debug)]
pub struct CrossRatioSet {
    pub values: Vec<PadicNumber>,
}

impl CrossRatioSet {
    pub fn contains(&self, x: &PadicNumber) -> Result<bool> {
        for v in &self.values {
            if v.agrees(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn intersects(&self, other: &CrossRatioSet) -> Result<bool> {
        for v in &other.values {
            if self.contains(v)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Equality as unordered sets.
    pub fn same_set(&self, other: &CrossRatioSet) -> Result<bool> {
        for v in &self.values {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        for v in &other.values {
            if !self.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn check_parameter(alpha: &PadicNumber) -> Result<()> {
    let ctx = alpha.ctx();
    for bad in [0, 1, 2] {
        if (alpha - &ctx.integer(bad)).zero_test()? {
            return Err(Error::DegenerateParameter(format!("α = {bad} collapses two of the points 0, 1, 2, α")));
        }
    }
    Ok(())
}

/// 2(α−1)/α, α/(2(α−1)), α/(2−α), (2−α)/α, 2(α−1)/(α−2), (α−2)/(2(α−1)).
pub fn cross_ratio_set(alpha: &PadicNumber) -> Result<CrossRatioSet> {
    check_parameter(alpha)?;
    let ctx = alpha.ctx();
    let two = ctx.integer(2);
    let a1 = &two * &(alpha - &ctx.one());
    let a2 = &two - alpha;
    let values = vec![
        a1.checked_div(alpha)?,
        alpha.checked_div(&a1)?,
        alpha.checked_div(&a2)?,
        a2.checked_div(alpha)?,
        a1.checked_div(&(alpha - &two))?,
        (alpha - &two).checked_div(&a1)?,
    ];
    Ok(CrossRatioSet { values })
}

/// Parameters β whose point set {0, 1, 2, β} has the same unordered cross
/// ratio as {0, 1, 2, α}: β = 2 / (2 − μ) for μ in the set, skipping μ = 2.
pub fn equivalent_parameters(alpha: &PadicNumber) -> Result<Vec<PadicNumber>> {
    let ctx = alpha.ctx();
    let two = ctx.integer(2);
    let mut out: Vec<PadicNumber> = Vec::new();
    for mu in cross_ratio_set(alpha)?.values {
        let d = &two - &mu;
        if d.zero_test()? {
            continue;
        }
        let beta = two.checked_div(&d)?;
        let mut dup = false;
        for b in &out {
            dup |= b.agrees(&beta)?;
        }
        if !dup {
            out.push(beta);
        }
    }
    Ok(out)
}

/// Basis of the tangent algebra of ρ_α: E16, E26+E27, E36+2E37, E46+αE47, E56, E57.
pub fn rho_generators(alpha: &PadicNumber) -> Vec<PMatrix> {
    let ctx = alpha.ctx();
    let mk = |terms: &[(usize, usize, PadicNumber)]| {
        let mut m = PMatrix::zero(ctx, 7);
        for (i, j, c) in terms {
            m.set(*i, *j, c.clone());
        }
        m
    };
    let one = ctx.one();
    vec![
        mk(&[(0, 5, one.clone())]),
        mk(&[(1, 5, one.clone()), (1, 6, one.clone())]),
        mk(&[(2, 5, one.clone()), (2, 6, ctx.integer(2))]),
        mk(&[(3, 5, one.clone()), (3, 6, alpha.clone())]),
        mk(&[(4, 5, one.clone())]),
        mk(&[(4, 6, one)]),
    ]
}

/// ρ_α(v) = Id + sum v_i B_i.
pub fn rho_alpha(alpha: &PadicNumber, v: &[PadicNumber]) -> Result<PMatrix> {
    if v.len() != 6 {
        return Err(Error::InvalidInput(format!("ρ_α takes 6 coordinates, got {}", v.len())));
    }
    let ctx = alpha.ctx();
    let mut g = PMatrix::identity(ctx, 7);
    for (b, c) in rho_generators(alpha).iter().zip(v) {
        g = &g + &b.scale(c);
    }
    Ok(g)
}

/// Rank of v -> ρ_α(v)x − x.
pub fn orbit_dimension(alpha: &PadicNumber, x: &[PadicNumber]) -> Result<usize> {
    if x.len() != 7 {
        return Err(Error::InvalidInput(format!("expected a point of P^6, got {} coordinates", x.len())));
    }
    let ctx = alpha.ctx();
    let images: Vec<Vec<PadicNumber>> = rho_generators(alpha)
        .iter()
        .map(|b| {
            (0..7)
                .map(|i| (0..7).fold(ctx.zero(), |acc, j| &acc + &(b.get(i, j) * &x[j])))
                .collect()
        })
        .collect();
    Ok(echelonize(ctx, Ambient::Plain(7), &images)?.dim())
}

/// The abelian subgroup of SL(5): Id + a(E12+E24) + a²/2 E14 + b E15 + c E34 + d E35.
pub fn sl5_rho(a: &PadicNumber, b: &PadicNumber, c: &PadicNumber, d: &PadicNumber) -> PMatrix {
    let ctx = a.ctx();
    let mut g = PMatrix::identity(ctx, 5);
    g.set(0, 1, a.clone());
    g.set(1, 3, a.clone());
    g.set(0, 3, &a.pow(2) * &ctx.rational(1, 2));
    g.set(0, 4, b.clone());
    g.set(2, 3, c.clone());
    g.set(2, 4, d.clone());
    g
}

/// Tangent algebra of the SL(5) subgroup: ⟨E12+E24, E15, E34, E35⟩.
pub fn sl5_tangent_algebra(ctx: PrimeContext) -> Result<Subspace> {
    let z = ctx.zero();
    let one = ctx.one();
    let gens = [
        sl5_rho(&one, &z, &z, &z),
        sl5_rho(&z, &one, &z, &z),
        sl5_rho(&z, &z, &one, &z),
        sl5_rho(&z, &z, &z, &one),
    ];
    let id = PMatrix::identity(ctx, 5);
    let mut mats: Vec<PMatrix> = gens.iter().map(|g| g - &id).collect();
    // drop the quadratic term of the first generator
    mats[0].set(0, 3, ctx.zero());
    Subspace::from_matrices(ctx, Ambient::TraceZero(5), &mats)
}

/// Random elements of the SL(5) subgroup with integer parameters in [-bound, bound].
pub fn sl5_samples<R: Rng>(ctx: PrimeContext, count: usize, bound: i64, rng: &mut R) -> Vec<PMatrix> {
    (0..count)
        .map(|_| {
            let mut r = || ctx.integer(rng.gen_range(-bound..=bound));
            let (a, b, c, d) = (r(), r(), r(), r());
            sl5_rho(&a, &b, &c, &d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::gr::flatness_defect;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> PrimeContext {
        PrimeContext::new(7, 32).unwrap()
    }

    #[test]
    fn alpha_three() {
        let c = ctx();
        let s = cross_ratio_set(&c.integer(3)).unwrap();
        let expect = [c.rational(4, 3), c.rational(3, 4), c.integer(-3), c.rational(-1, 3), c.integer(4), c.rational(1, 4)];
        for (x, y) in s.values.iter().zip(&expect) {
            assert!(x.agrees(y).unwrap());
        }
        assert!(matches!(cross_ratio_set(&c.one()), Err(Error::DegenerateParameter(_))));
    }

    #[test]
    fn equivalent_parameters_share_the_set() {
        let c = ctx();
        let alpha = c.integer(5);
        let eq = equivalent_parameters(&alpha).unwrap();
        assert!(eq.iter().any(|b| b.agrees(&alpha).unwrap()));
        let base = cross_ratio_set(&alpha).unwrap();
        for b in &eq {
            assert!(base.same_set(&cross_ratio_set(b).unwrap()).unwrap());
        }
    }

    #[test]
    fn orbit_cases() {
        let c = ctx();
        let alpha = c.integer(5);
        let point = |t: PadicNumber| vec![c.one(), c.integer(2), c.integer(4), c.integer(3), c.integer(-1), t, c.integer(-1)];
        let mut e1 = vec![c.zero(); 7];
        e1[0] = c.one();
        assert_eq!(orbit_dimension(&alpha, &e1).unwrap(), 0);
        assert_eq!(orbit_dimension(&alpha, &point(c.rational(1, 3))).unwrap(), 5);
        for t in [0, 1, 2, 5] {
            assert_eq!(orbit_dimension(&alpha, &point(c.integer(t))).unwrap(), 4);
        }
    }

    #[test]
    fn rho_is_a_homomorphism() {
        let c = ctx();
        let alpha = c.integer(5);
        let v: Vec<_> = (1..=6).map(|i| c.integer(i)).collect();
        let w: Vec<_> = (1..=6).map(|i| c.integer(10 - i)).collect();
        let vw: Vec<_> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
        let lhs = &rho_alpha(&alpha, &v).unwrap() * &rho_alpha(&alpha, &w).unwrap();
        assert!(lhs.agrees(&rho_alpha(&alpha, &vw).unwrap()).unwrap());
    }

    #[test]
    fn sl5_example_is_not_flat() {
        let c = PrimeContext::new(5, 32).unwrap();
        let a = sl5_tangent_algebra(c).unwrap();
        assert_eq!(a.dim(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = sl5_samples(c, 50, 6, &mut rng);
        assert_eq!(flatness_defect(&s, &a).unwrap(), 1);
    }
}
