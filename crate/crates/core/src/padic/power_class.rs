//! Power classes Q_p^* / (Q_p^*)^k, general k-th roots and roots of unity.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::context::PrimeContext;
use super::number::{PadicNumber, Valuation};
use crate::error::{exhausted, Error, Result};

/// Largest modulus we are willing to enumerate.
const MAX_MODULUS: u64 = 50_000_000;

/// Label of a coset of the k-th powers: valuation class and the smallest
/// positive integer in the unit coset modulo p^e, e = 2 v_p(k) + 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PowerClassLabel {
    pub exponent: u64,
    pub valuation_class: u64,
    pub unit: u64,
}

impl PowerClassLabel {
    /// The canonical representative p^a * u.
    pub fn representative(&self, ctx: PrimeContext) -> PadicNumber {
        &ctx.p_power(self.valuation_class as i64) * &ctx.integer(self.unit as i64)
    }

    pub fn representative_string(&self) -> String {
        match self.valuation_class {
            0 => format!("{}", self.unit),
            a if self.unit == 1 => format!("p^{a}"),
            a => format!("p^{a}*{}", self.unit),
        }
    }
}

/// Result of a power-class decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerClassDecision {
    pub is_kth_power: bool,
    pub label: PowerClassLabel,
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Finite data deciding k-th power classes for one prime.
#[derive(Debug, Clone)]
pub struct PowerClassTable {
    ctx: PrimeContext,
    k: u64,
    depth: u32,
    modulus: u64,
    image: Vec<u64>,
    transversal: Vec<u64>,
}

impl PowerClassTable {
    pub fn new(ctx: PrimeContext, k: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidInput(format!("power classes need k >= 2, got {k}")));
        }
        let p = ctx.p();
        let depth = 2 * ctx.small_valuation(k) + 1;
        let modulus = p
            .checked_pow(depth)
            .filter(|m| *m <= MAX_MODULUS)
            .ok_or_else(|| Error::InvalidInput(format!("p^{depth} too large to enumerate")))?;
        let units = || (1..modulus).filter(move |u| u % p != 0);
        let image: BTreeSet<u64> = units().map(|y| powmod(y, k, modulus)).collect();
        let image: Vec<u64> = image.into_iter().collect();
        let mut table = PowerClassTable {
            ctx,
            k,
            depth,
            modulus,
            image,
            transversal: Vec::new(),
        };
        table.transversal = units().filter(|&u| table.coset_min(u) == u).collect();
        Ok(table)
    }

    fn coset_min(&self, u: u64) -> u64 {
        self.image
            .iter()
            .map(|&w| mulmod(u, w, self.modulus))
            .min()
            .expect("image contains 1")
    }

    pub fn exponent(&self) -> u64 {
        self.k
    }

    /// Depth e of the congruence that decides the class.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Number of unit classes |Z_p^* / (Z_p^*)^k|.
    pub fn unit_class_count(&self) -> u64 {
        self.transversal.len() as u64
    }

    /// Q_k = |Q_p^* / (Q_p^*)^k|.
    pub fn count(&self) -> u64 {
        self.k * self.unit_class_count()
    }

    /// All labels, ordered lexicographically by (valuation class, unit).
    pub fn labels(&self) -> Vec<PowerClassLabel> {
        let mut out = Vec::new();
        for a in 0..self.k {
            for &u in &self.transversal {
                out.push(PowerClassLabel {
                    exponent: self.k,
                    valuation_class: a,
                    unit: u,
                });
            }
        }
        out
    }

    pub fn label(&self, x: &PadicNumber) -> Result<PowerClassLabel> {
        let v = x.nonzero_valuation()?;
        if x.ctx().precision() < self.depth || x.known_precision() < self.depth {
            return Err(exhausted(format!(
                "deciding {}-th power classes needs {} digits",
                self.k, self.depth
            )));
        }
        let u = x
            .unit_residue(self.depth)?
            .to_u64()
            .expect("residue below modulus");
        Ok(PowerClassLabel {
            exponent: self.k,
            valuation_class: v.rem_euclid(self.k as i64) as u64,
            unit: self.coset_min(u),
        })
    }

    pub fn decide(&self, x: &PadicNumber) -> Result<PowerClassDecision> {
        let label = self.label(x)?;
        Ok(PowerClassDecision {
            is_kth_power: label.valuation_class == 0 && label.unit == 1,
            label,
        })
    }

    /// Smallest y in [1, p^e) with y^k = u mod p^e, if any.
    fn root_seed(&self, u: u64) -> Option<u64> {
        (1..self.modulus)
            .filter(|y| y % self.ctx.p() != 0)
            .find(|&y| powmod(y, self.k, self.modulus) == u)
    }
}

/// Decide whether x is a k-th power and return its class label.
pub fn power_class_decide(x: &PadicNumber, k: u64) -> Result<PowerClassDecision> {
    PowerClassTable::new(x.ctx(), k)?.decide(x)
}

/// |Q_p^* / (Q_p^*)^k|.
pub fn count_power_classes(ctx: PrimeContext, k: u64) -> Result<u64> {
    Ok(PowerClassTable::new(ctx, k)?.count())
}

/// A k-th root of x: finite search modulo p^(2 v_p(k) + 1), then Newton lifting.
pub fn kth_root(x: &PadicNumber, k: u64) -> Result<PadicNumber> {
    let ctx = x.ctx();
    if x.is_exact_zero() {
        return Ok(ctx.zero());
    }
    let table = PowerClassTable::new(ctx, k)?;
    let v = x.nonzero_valuation()?;
    if v.rem_euclid(k as i64) != 0 {
        return Err(Error::RootOutOfDomain(format!(
            "valuation {v} is not divisible by {k}"
        )));
    }
    let shift = ctx.p_power(v);
    let u = x.checked_div(&shift)?;
    let residue = u
        .unit_residue(table.depth)?
        .to_u64()
        .expect("residue below modulus");
    let seed = table.root_seed(residue).ok_or_else(|| {
        Error::RootOutOfDomain(format!("{x} is not a {k}-th power"))
    })?;

    let vk = ctx.small_valuation(k) as i64;
    let work = ctx.with_precision(ctx.precision() + 4 * vk as u32 + 16);
    let u = u.with_context(work);
    let kk = work.integer(k as i64);
    let mut y = work.integer(seed as i64).to_approx();
    for _ in 0..64 {
        let f = &y.pow(k as u32) - &u;
        match f.valuation() {
            Valuation::Finite(vf) if vf < work.precision() as i64 + vk => {}
            // Residual is zero to the working precision; the error in y is
            // at most |f / f'| and f' has valuation v_p(k).
            other => {
                let bound = match other {
                    Valuation::Finite(a) | Valuation::AtLeast(a) => a - vk,
                    Valuation::Infinite => i64::MAX,
                };
                let y = y.truncate_absolute(bound.min(y.absolute_precision().unwrap_or(bound)));
                return Ok((&y * &ctx.p_power(v / k as i64)).with_context(ctx));
            }
        }
        let fp = &kk * &y.pow(k as u32 - 1);
        y = &y - &f.checked_div(&fp)?;
    }
    Err(exhausted(format!("Newton lifting of a {k}-th root did not converge")))
}

/// All n-th roots of unity in Q_p.
pub fn roots_of_unity(ctx: PrimeContext, n: u64) -> Vec<PadicNumber> {
    assert!(n >= 1, "roots of unity of order 0");
    let p = ctx.p();
    if p == 2 {
        // Only +-1 lie in Q_2.
        return if n.is_multiple_of(2) {
            vec![ctx.one(), ctx.integer(-1)]
        } else {
            vec![ctx.one()]
        };
    }
    let g = n.gcd(&(p - 1));
    let big_n = ctx.precision();
    let modulus = ctx.p_pow(big_n);
    let pb = BigInt::from(p);
    let mut out = Vec::new();
    for x in 1..p {
        if powmod(x, g, p) != 1 {
            continue;
        }
        if x == 1 {
            out.push(ctx.one());
        } else if x == p - 1 {
            out.push(ctx.integer(-1));
        } else {
            // Teichmueller lift: x^(p^j) converges to the root congruent to x.
            let mut t = BigInt::from(x);
            for _ in 0..big_n {
                t = t.modpow(&pb, &modulus);
            }
            out.push(PadicNumber::approx(ctx, 0, t, big_n));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p, 32).unwrap()
    }

    #[test]
    fn closed_form_counts() {
        let q = |p, k| count_power_classes(ctx(p), k).unwrap();
        assert_eq!(q(5, 2), 4);
        assert_eq!(q(2, 2), 8);
        assert_eq!(q(7, 3), 9);
        assert_eq!(q(3, 3), 9);
        assert_eq!(q(5, 3), 3);
        assert_eq!(q(2, 4), 32);
        assert_eq!(q(3, 4), 8);
        assert_eq!(q(5, 4), 16);
        assert_eq!(q(3, 8), 16);
        assert_eq!(q(5, 8), 32);
        assert_eq!(q(17, 8), 64);
        assert_eq!(q(2, 8), 128);
    }

    #[test]
    fn simple_decisions() {
        let c = ctx(7);
        assert!(!power_class_decide(&c.integer(7), 2).unwrap().is_kth_power);
        assert!(power_class_decide(&c.integer(343), 3).unwrap().is_kth_power);
        // cubes mod 7 are {1, 6}, so 2 is not a cube and lands in another class
        let one = power_class_decide(&c.one(), 3).unwrap();
        let two = power_class_decide(&c.integer(2), 3).unwrap();
        assert!(!two.is_kth_power);
        assert_ne!(one.label, two.label);
    }

    #[test]
    fn labels_are_canonical_and_complete() {
        let t = PowerClassTable::new(ctx(2), 2).unwrap();
        let labels = t.labels();
        assert_eq!(labels.len(), 8);
        assert_eq!(labels[0].representative_string(), "1");
        assert!(labels.windows(2).all(|w| w[0] < w[1]));
        for l in &labels {
            let r = l.representative(ctx(2));
            assert_eq!(t.label(&r).unwrap(), *l);
        }
    }

    #[test]
    fn kth_root_lifts() {
        let c = ctx(5);
        let r = kth_root(&c.integer(6), 2).unwrap();
        assert!(r.pow(2).agrees(&c.integer(6)).unwrap());
        let c2 = ctx(2);
        let r = kth_root(&c2.integer(17 * 64), 2).unwrap();
        assert!(r.pow(2).agrees(&c2.integer(17 * 64)).unwrap());
        assert!(kth_root(&c2.integer(3), 2).is_err());
        let c3 = ctx(3);
        let r = kth_root(&c3.integer(-26), 3).unwrap();
        assert!(r.pow(3).agrees(&c3.integer(-26)).unwrap());
    }

    #[test]
    fn roots_of_unity_counts() {
        assert_eq!(roots_of_unity(ctx(5), 4).len(), 4);
        assert_eq!(roots_of_unity(ctx(5), 3).len(), 1);
        assert_eq!(roots_of_unity(ctx(2), 4).len(), 2);
        assert_eq!(roots_of_unity(ctx(13), 12).len(), 12);
        for z in roots_of_unity(ctx(13), 12) {
            assert!(z.pow(12).agrees(&ctx(13).one()).unwrap());
        }
    }
}
