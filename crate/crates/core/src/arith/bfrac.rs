//! Fractions of multivariate Laurent polynomials.
//!
//! Commutation past a wall operator introduces denominators `1 - X^-1` (or
//! `1 - X^-2` at the short wall), and while those cancel for coefficients
//! supported on the parameter sublattice, products of general coefficients
//! live in the fraction field.  Fractions are kept unreduced except for an
//! opportunistic exact division after every operation, so "denominator is 1"
//! is exactly "the value is a Laurent polynomial".  Equality is decided by
//! cross-multiplication, which needs no gcd.

use super::bpoly::{BMonomial, BPoly};
use super::cyclotomic::CycScalar;
use super::vlaurent::VLaurent;
use std::fmt;

#[derive(Clone, Debug)]
pub struct BFrac {
    num: BPoly,
    den: BPoly,
}

impl BFrac {
    /// Build `num/den`, normalizing opportunistically.  Panics on a zero
    /// denominator: denominators produced by the rewriting engine are nonzero
    /// by construction.
    pub fn new(num: BPoly, den: BPoly) -> BFrac {
        assert!(!den.is_zero(), "fraction with zero denominator");
        let mut f = BFrac { num, den };
        f.normalize();
        f
    }

    pub fn from_poly(num: BPoly) -> BFrac {
        let rank = num.rank();
        BFrac {
            num,
            den: BPoly::one(rank),
        }
    }

    pub fn zero(rank: usize) -> BFrac {
        BFrac::from_poly(BPoly::zero(rank))
    }

    pub fn one(rank: usize) -> BFrac {
        BFrac::from_poly(BPoly::one(rank))
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn num(&self) -> &BPoly {
        &self.num
    }

    pub fn den(&self) -> &BPoly {
        &self.den
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = BPoly::one(self.num.rank());
            return;
        }
        if self.den.is_one() {
            return;
        }
        if let Some(q) = self.num.exact_div(&self.den) {
            self.num = q;
            self.den = BPoly::one(self.num.rank());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// `Some(p)` when the fraction is a Laurent polynomial.  Normalization
    /// divides eagerly, so this is a denominator check.
    pub fn as_polynomial(&self) -> Option<&BPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn add(&self, other: &BFrac) -> BFrac {
        if self.den == other.den {
            return BFrac::new(self.num.add(&other.num), self.den.clone());
        }
        BFrac::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &BFrac) -> BFrac {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BFrac {
        BFrac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &BFrac) -> BFrac {
        if self.den.is_one() && other.den.is_one() {
            return BFrac::from_poly(self.num.mul(&other.num));
        }
        BFrac::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: &VLaurent) -> BFrac {
        BFrac::new(self.num.scale(c), self.den.clone())
    }

    pub fn scale_scalar(&self, c: &CycScalar) -> BFrac {
        self.scale(&VLaurent::from_scalar(c.clone()))
    }

    /// Apply a lattice map (signed permutation) to numerator and denominator.
    pub fn map_monomials<F: Fn(&BMonomial) -> BMonomial>(&self, f: F) -> BFrac {
        BFrac::new(self.num.map_monomials(&f), self.den.map_monomials(&f))
    }

    /// Rescale every monomial by a character value, on both numerator and
    /// denominator.
    pub fn twist<F: Fn(&BMonomial) -> CycScalar>(&self, f: F) -> BFrac {
        BFrac::new(self.num.twist(&f), self.den.twist(&f))
    }
}

impl PartialEq for BFrac {
    fn eq(&self, other: &BFrac) -> bool {
        // Cross-multiplication equality in the fraction field of a domain.
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for BFrac {}

impl fmt::Display for BFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(rank: usize, k: usize, e: i32) -> BPoly {
        let mut exps = vec![0; rank];
        exps[k] = e;
        BPoly::monomial(BMonomial::from_exps(exps))
    }

    #[test]
    fn difference_of_squares_reduces() {
        // (y1^2 - y2^2)/(y1 - y2) normalizes to the polynomial y1 + y2.
        let num = var(2, 0, 2).sub(&var(2, 1, 2));
        let den = var(2, 0, 1).sub(&var(2, 1, 1));
        let f = BFrac::new(num, den);
        let p = f.as_polynomial().expect("polynomial");
        assert_eq!(*p, var(2, 0, 1).add(&var(2, 1, 1)));
    }

    #[test]
    fn self_quotient_is_one() {
        let p = BPoly::constant(1, VLaurent::q_pow(1).sub(&VLaurent::one()));
        let f = BFrac::new(p.clone(), p);
        assert!(f.is_one());
    }

    #[test]
    fn genuine_fraction_detected() {
        // y1/(y1 + y2) is not a Laurent polynomial.
        let f = BFrac::new(var(2, 0, 1), var(2, 0, 1).add(&var(2, 1, 1)));
        assert!(f.as_polynomial().is_none());
        assert_eq!(f.to_string(), "(y[1])/(y[1] + y[2])");
    }

    #[test]
    fn cross_multiplication_equality() {
        // y1/(y1+y2) equals y1*(y1-y2) / ((y1+y2)(y1-y2)) without reduction.
        let a = BFrac::new(var(2, 0, 1), var(2, 0, 1).add(&var(2, 1, 1)));
        let scale = var(2, 0, 1).sub(&var(2, 1, 1));
        let b = BFrac::new(
            var(2, 0, 1).mul(&scale),
            var(2, 0, 1).add(&var(2, 1, 1)).mul(&scale),
        );
        assert_eq!(a, b);
        let c = BFrac::new(var(2, 1, 1), var(2, 0, 1).add(&var(2, 1, 1)));
        assert_ne!(a, c);
    }

    #[test]
    fn arithmetic_in_the_fraction_field() {
        let half = BFrac::new(BPoly::one(1), BPoly::one(1).add(&BPoly::one(1)));
        let sum = half.add(&half);
        assert!(sum.is_one());
        let x = BFrac::new(var(1, 0, 1), BPoly::one(1).sub(&var(1, 0, 1)));
        let expr = x.mul(&x).sub(&x.mul(&x));
        assert!(expr.is_zero());
    }

    use proptest::prelude::*;

    fn arb_poly(rank: usize) -> impl Strategy<Value = BPoly> {
        proptest::collection::vec(
            (
                proptest::collection::vec(-2i32..=2, rank),
                (-3i64..=3).prop_map(VLaurent::from_int),
            ),
            0..3,
        )
        .prop_map(move |terms| {
            let mut p = BPoly::zero(rank);
            for (exps, c) in terms {
                p.insert(BMonomial::from_exps(exps), c);
            }
            p
        })
    }

    fn arb_frac(rank: usize) -> impl Strategy<Value = BFrac> {
        (arb_poly(rank), arb_poly(rank))
            .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| BFrac::new(n, d))
    }

    proptest! {
        #[test]
        fn field_addition_commutes(a in arb_frac(2), b in arb_frac(2)) {
            prop_assert_eq!(a.add(&b), b.add(&a));
        }

        #[test]
        fn field_multiplication_distributes(
            a in arb_frac(2),
            b in arb_frac(2),
            c in arb_frac(2),
        ) {
            prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        }

        #[test]
        fn normalization_recognizes_products(f in arb_poly(2), g in arb_poly(2)) {
            prop_assume!(!g.is_zero());
            let frac = BFrac::new(f.mul(&g), g);
            prop_assert_eq!(frac.as_polynomial(), Some(&f));
        }
    }
}
