//! Subalgebra checks and Cayley-Hamilton inverses.

use super::charpoly::char_poly;
use super::matrix::PMatrix;
use super::subspace::{Ambient, Subspace};
use crate::error::{Error, Result};

/// Every product of two basis matrices lies in the span (associative closure).
pub fn check_product_closure(span: &Subspace) -> Result<()> {
    let mats = span.basis_matrices()?;
    for (i, a) in mats.iter().enumerate() {
        for (j, b) in mats.iter().enumerate() {
            if !span.contains_matrix(&(a * b))? {
                return Err(Error::NotSubalgebra(format!(
                    "product of basis elements {i} and {j} leaves the span"
                )));
            }
        }
    }
    Ok(())
}

/// Inverse of `a` as a polynomial in `a`, asserted to stay inside `within`
/// (a product-closed subspace of M(n) containing the identity).
pub fn ch_inverse(a: &PMatrix, within: &Subspace) -> Result<PMatrix> {
    let n = a.n();
    if within.ambient() != Ambient::Matrix(n) {
        return Err(Error::InvalidInput("ch_inverse works in M(n) coordinates".into()));
    }
    check_product_closure(within)?;
    if !within.contains_matrix(a)? {
        return Err(Error::InvalidInput(format!("{a} is not in the given subalgebra")));
    }
    let c = char_poly(a);
    if c[0].zero_test()? {
        return Err(Error::Singular);
    }
    let ctx = a.ctx();
    let id = PMatrix::identity(ctx, n);
    // Q(a) = a^(n-1) + c_{n-1} a^(n-2) + ... + c_1, by Horner
    let mut q = id.clone();
    for k in (1..n).rev() {
        q = &(&q * a) + &id.scale(&c[k]);
    }
    let inv = q.scale(&(-&c[0].inv()?));
    if !within.contains_matrix(&inv)? {
        return Err(Error::NotSubalgebra("Cayley-Hamilton inverse left the span".into()));
    }
    Ok(inv)
}

/// All brackets of basis pairs vanish.
pub fn is_abelian_algebra(a: &Subspace) -> bool {
    let Ok(mats) = a.basis_matrices() else {
        return false;
    };
    for (i, x) in mats.iter().enumerate() {
        for y in &mats[i + 1..] {
            let c = x.commutator(y);
            if !c.entries().iter().all(|e| e.is_indistinguishable_from_zero()) {
                return false;
            }
        }
    }
    true
}

/// The span of `A` and the identity inside M(n).
pub fn span_with_identity(a: &Subspace) -> Result<Subspace> {
    let n = a
        .ambient()
        .matrix_size()
        .ok_or_else(|| Error::InvalidInput("algebra must live in matrix space".into()))?;
    let ctx = a.ctx();
    let mut mats = a.basis_matrices()?;
    mats.push(PMatrix::identity(ctx, n));
    Subspace::from_matrices(ctx, Ambient::Matrix(n), &mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PrimeContext;

    fn ctx() -> PrimeContext {
        PrimeContext::new(5, 32).unwrap()
    }

    #[test]
    fn identity_inverse() {
        let c = ctx();
        let span = span_with_identity(&Subspace::cartan(c, 3)).unwrap();
        let id = PMatrix::identity(c, 3);
        assert!(ch_inverse(&id, &span).unwrap().is_identity().unwrap());
    }

    #[test]
    fn diagonal_inverse_stays_diagonal() {
        let c = ctx();
        let span = span_with_identity(&Subspace::cartan(c, 2)).unwrap();
        let a = PMatrix::diagonal(c, &[c.integer(7), c.rational(1, 7)]);
        let inv = ch_inverse(&a, &span).unwrap();
        assert!(inv.agrees(&PMatrix::diagonal(c, &[c.rational(1, 7), c.integer(7)])).unwrap());
    }

    #[test]
    fn unipotent_inverse_is_two_minus_u() {
        let c = ctx();
        let nil = Subspace::from_matrices(c, Ambient::TraceZero(2), &[PMatrix::unit(c, 2, 0, 1)]).unwrap();
        let span = span_with_identity(&nil).unwrap();
        let u = PMatrix::from_ints(c, &[vec![1, 3], vec![0, 1]]);
        let inv = ch_inverse(&u, &span).unwrap();
        let expect = &PMatrix::identity(c, 2).scale(&c.integer(2)) - &u;
        assert!(inv.agrees(&expect).unwrap());
    }

    #[test]
    fn non_closed_span_rejected() {
        let c = ctx();
        let mats = [PMatrix::unit(c, 2, 0, 1), PMatrix::unit(c, 2, 1, 0)];
        let span = span_with_identity(&Subspace::from_matrices(c, Ambient::TraceZero(2), &mats).unwrap()).unwrap();
        let a = &PMatrix::identity(c, 2) + &mats[0];
        assert!(matches!(ch_inverse(&a, &span), Err(Error::NotSubalgebra(_))));
    }

    #[test]
    fn sl2_is_not_abelian() {
        let c = ctx();
        assert!(is_abelian_algebra(&Subspace::cartan(c, 4)));
        assert!(!is_abelian_algebra(&Subspace::full(c, Ambient::TraceZero(2))));
    }
}
