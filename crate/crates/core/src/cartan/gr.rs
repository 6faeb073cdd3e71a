//! The correspondence A -> Gr(A) = <A, Id> ∩ SL(n), matrix exponentials and
//! span-based flatness.

use rand::Rng;

use crate::error::{Error, Result};
use crate::laurent::normalize_into_group;
use crate::linalg::{check_product_closure, span_with_identity, Ambient, PMatrix, Subspace};
use crate::padic::{PadicNumber, Valuation};

/// Gr(A) for an algebra A of trace-zero matrices.
#[derive(Clone, Debug)]
pub struct GrGroup {
    algebra: Subspace,
    span_with_id: Subspace,
}

impl GrGroup {
    /// Fails with NotSubalgebra unless <A, Id> is closed under products.
    pub fn new(algebra: &Subspace) -> Result<Self> {
        let span = span_with_identity(algebra)?;
        if span.dim() != algebra.dim() + 1 {
            return Err(Error::InvalidInput("algebra contains the identity".into()));
        }
        check_product_closure(&span)?;
        Ok(GrGroup {
            algebra: algebra.clone(),
            span_with_id: span,
        })
    }

    pub fn algebra(&self) -> &Subspace {
        &self.algebra
    }

    pub fn span_with_id(&self) -> &Subspace {
        &self.span_with_id
    }

    pub fn n(&self) -> usize {
        self.algebra.ambient().matrix_size().expect("matrix ambient")
    }
}

/// det(g) = 1 and g ∈ <A, Id>.
pub fn gr_membership(group: &GrGroup, g: &PMatrix) -> Result<bool> {
    if g.n() != group.n() {
        return Err(Error::InvalidInput(format!("expected a {0}x{0} matrix", group.n())));
    }
    if !g.det().agrees(&g.ctx().one())? {
        return Ok(false);
    }
    group.span_with_id.contains_matrix(g)
}

fn is_nilpotent(x: &PMatrix) -> bool {
    x.pow(x.n() as u32).entries().iter().all(|e| e.is_exact_zero())
}

/// exp(X) as a power series. Nilpotent exact X gives an exact finite sum;
/// otherwise X must satisfy v(X) >= 1 (>= 2 for p = 2).
pub fn matrix_exp(x: &PMatrix) -> Result<PMatrix> {
    let ctx = x.ctx();
    let n = x.n();
    let id = PMatrix::identity(ctx, n);
    if x.is_exact() && is_nilpotent(x) {
        let mut acc = id.clone();
        let mut term = id;
        for k in 1..n as i64 {
            term = (&term * x).scale(&ctx.rational(1, k));
            acc = &acc + &term;
        }
        return Ok(acc);
    }
    let floor = if ctx.p() == 2 { 2 } else { 1 };
    let v = match x.min_valuation() {
        None => return Ok(id),
        Some(v) => v,
    };
    if v < floor {
        return Err(Error::OutOfDomain(format!(
            "exp needs entries of valuation >= {floor}, got {v}"
        )));
    }
    let target = ctx.precision() as i64;
    let p = ctx.p() as i64;
    // v(X^k / k!) >= k v - (k - 1)/(p - 1)
    let mut acc = id.clone();
    let mut term = id;
    let mut k: i64 = 1;
    while k * v - (k - 1) / (p - 1) < target + 1 {
        term = (&term * x).scale(&ctx.rational(1, k));
        acc = &acc + &term;
        k += 1;
    }
    Ok(PMatrix::new(
        ctx,
        n,
        acc.entries().iter().map(|e| e.truncate_absolute(target)).collect(),
    ))
}

/// exp(X) for X in the algebra, checked to land in Gr(A).
pub fn exp_into_group(group: &GrGroup, x: &PMatrix) -> Result<PMatrix> {
    if !group.algebra.contains_matrix(x)? {
        return Err(Error::InvalidInput(format!("{x} is not in the algebra")));
    }
    let h = matrix_exp(x)?;
    if !gr_membership(group, &h)? {
        return Err(Error::NotSubalgebra(format!("exp({x}) left Gr(A)")));
    }
    Ok(h)
}

/// Random element sum c_i b_i with integer c_i in [-bound, bound].
pub fn random_algebra_element<R: Rng>(a: &Subspace, bound: i64, rng: &mut R) -> Result<PMatrix> {
    let ctx = a.ctx();
    let n = a.ambient().matrix_size().expect("matrix ambient");
    let mut x = PMatrix::zero(ctx, n);
    for b in a.basis_matrices()? {
        let c: i64 = rng.gen_range(-bound..=bound);
        if c != 0 {
            x = &x + &b.scale(&ctx.integer(c));
        }
    }
    Ok(x)
}

/// Exact elements of Gr(A): Y^n / det(Y) for Y = Id + X, X random in A,
/// with alternating signs -Id when n is even.
pub fn group_samples<R: Rng>(a: &Subspace, count: usize, rng: &mut R) -> Result<Vec<PMatrix>> {
    let ctx = a.ctx();
    let n = a.ambient().matrix_size().expect("matrix ambient");
    let id = PMatrix::identity(ctx, n);
    let minus = id.scale(&ctx.integer(-1));
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 20 * count + 20 {
            return Err(Error::InsufficientSamples(out.len()));
        }
        let x = random_algebra_element(a, 6, rng)?;
        let h = match normalize_into_group(&(&id + &x)) {
            Ok(h) => h,
            Err(Error::Singular) => continue,
            Err(e) => return Err(e),
        };
        out.push(if n.is_multiple_of(2) && out.len() % 2 == 1 { &minus * &h } else { h });
    }
    Ok(out)
}

/// dim span(samples ∪ {Id}) - (dim A + 1). Requires the span to saturate:
/// the last fifth of the samples must not enlarge it.
pub fn flatness_defect(samples: &[PMatrix], a: &Subspace) -> Result<i64> {
    let n = a
        .ambient()
        .matrix_size()
        .ok_or_else(|| Error::InvalidInput("algebra must live in matrix space".into()))?;
    let ctx = a.ctx();
    let id = PMatrix::identity(ctx, n);
    let head = samples.len() - samples.len() / 5;
    let mut mats = vec![id];
    mats.extend_from_slice(&samples[..head]);
    let early = Subspace::from_matrices(ctx, Ambient::Matrix(n), &mats)?;
    mats.extend_from_slice(&samples[head..]);
    let full = Subspace::from_matrices(ctx, Ambient::Matrix(n), &mats)?;
    if samples.len() < 5 || full.dim() != early.dim() {
        return Err(Error::InsufficientSamples(samples.len()));
    }
    Ok(full.dim() as i64 - (a.dim() as i64 + 1))
}

/// g lies in U·mu_n: upper triangular with a constant diagonal z, z^n = 1.
pub fn in_unipotent_times_roots(g: &PMatrix) -> Result<bool> {
    let n = g.n();
    for i in 0..n {
        for j in 0..i {
            if !g.get(i, j).zero_test()? {
                return Ok(false);
            }
        }
    }
    let z = g.get(0, 0);
    for i in 1..n {
        if !(g.get(i, i) - z).zero_test()? {
            return Ok(false);
        }
    }
    z.pow(n as u32).agrees(&g.ctx().one())
}

/// Smallest valuation of a diagonal entry, when all are certified nonzero.
pub fn min_diagonal_valuation(g: &PMatrix) -> Option<i64> {
    (0..g.n())
        .map(|i| match g.get(i, i).valuation() {
            Valuation::Finite(v) => Some(v),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()
        .and_then(|v| v.into_iter().min())
}

/// λ·Id as a matrix.
pub fn scalar(lambda: &PadicNumber, n: usize) -> PMatrix {
    PMatrix::identity(lambda.ctx(), n).scale(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{padic_exp, roots_of_unity, PrimeContext};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> PrimeContext {
        PrimeContext::new(5, 32).unwrap()
    }

    fn nil(c: PrimeContext) -> Subspace {
        Subspace::from_matrices(c, Ambient::TraceZero(2), &[PMatrix::unit(c, 2, 0, 1)]).unwrap()
    }

    #[test]
    fn membership_basics() {
        let c = ctx();
        let gc = GrGroup::new(&Subspace::cartan(c, 2)).unwrap();
        let gn = GrGroup::new(&nil(c)).unwrap();
        let d = PMatrix::diagonal(c, &[c.integer(5), c.rational(1, 5)]);
        assert!(gr_membership(&gc, &PMatrix::identity(c, 2)).unwrap());
        assert!(gr_membership(&gc, &d).unwrap());
        assert!(!gr_membership(&gn, &d).unwrap());
        let u = PMatrix::from_ints(c, &[vec![-1, 7], vec![0, -1]]);
        assert!(gr_membership(&gn, &u).unwrap());
        assert!(!gr_membership(&gn, &PMatrix::from_ints(c, &[vec![1, 0], vec![1, 1]])).unwrap());
        for z in roots_of_unity(c, 2) {
            assert!(gr_membership(&gn, &(&scalar(&z, 2) * &u)).unwrap());
        }
    }

    #[test]
    fn exponentials() {
        let c = ctx();
        let gn = GrGroup::new(&nil(c)).unwrap();
        let x = PMatrix::unit(c, 2, 0, 1).scale(&c.integer(5));
        let h = exp_into_group(&gn, &x).unwrap();
        assert!(h.agrees(&PMatrix::from_ints(c, &[vec![1, 5], vec![0, 1]])).unwrap());

        let gc = GrGroup::new(&Subspace::cartan(c, 2)).unwrap();
        let x = PMatrix::diagonal(c, &[c.integer(5), c.integer(-5)]);
        let h = exp_into_group(&gc, &x).unwrap();
        assert!(h.get(0, 0).agrees(&padic_exp(&c.integer(5)).unwrap()).unwrap());
        assert!(exp_into_group(&gc, &PMatrix::zero(c, 2)).unwrap().is_identity().unwrap());
        assert!(matches!(
            matrix_exp(&PMatrix::diagonal(c, &[c.one(), c.integer(-1)])),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn flat_groups_have_zero_defect() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for a in [Subspace::cartan(c, 3), nil(c)] {
            let s = group_samples(&a, 50, &mut rng).unwrap();
            assert_eq!(flatness_defect(&s, &a).unwrap(), 0);
        }
    }

    #[test]
    fn unipotent_times_roots() {
        let c = ctx();
        let u = PMatrix::from_ints(c, &[vec![-1, 3], vec![0, -1]]);
        assert!(in_unipotent_times_roots(&u).unwrap());
        assert!(!in_unipotent_times_roots(&PMatrix::from_ints(c, &[vec![2, 0], vec![0, 2]])).unwrap());
    }
}
