//! Exact scalars in cyclotomic fields `Q(zeta_N)`.
//!
//! A scalar is stored on the power basis `1, zeta, ..., zeta^{phi(N)-1}` of
//! its conductor `N`, always reduced modulo the `N`-th cyclotomic polynomial.
//! Reduction makes the representation canonical at a fixed conductor, and
//! operations on scalars of different conductors lift both operands into the
//! field of the least common multiple first.  Conductors stay small in this
//! crate (the lcm of the orbit orders `t_i`), so the dense representation is
//! cheap and equality is a coefficient comparison.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Rational `num/den`; panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Euler's totient, by trial-division factorization (arguments here are tiny).
pub fn euler_phi(n: u32) -> u32 {
    assert!(n > 0, "euler_phi(0) is undefined");
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

// --- dense univariate polynomials over Q, coefficient k = coefficient of x^k ---

fn poly_trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_trim(&mut out);
    out
}

/// Division with remainder in Q[x]; `b` must be nonzero.
fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem: Vec<Rational> = a.to_vec();
    poly_trim(&mut rem);
    let db = b.len() - 1;
    let lead = &b[db];
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() > db {
        let dr = rem.len() - 1;
        let c = &rem[dr] / lead;
        quot[dr - db] = c.clone();
        for (k, cb) in b.iter().enumerate() {
            let t = &c * cb;
            rem[dr - db + k] -= t;
        }
        poly_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    poly_trim(&mut quot);
    (quot, rem)
}

/// Extended gcd in Q[x]: returns `(g, s, t)` with `s*a + t*b = g`, `g` monic
/// unless zero.
fn poly_ext_gcd(
    a: &[Rational],
    b: &[Rational],
) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let mut r0: Vec<Rational> = a.to_vec();
    let mut r1: Vec<Rational> = b.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let mut s0 = vec![Rational::one()];
    let mut s1: Vec<Rational> = Vec::new();
    let mut t0: Vec<Rational> = Vec::new();
    let mut t1 = vec![Rational::one()];
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        let t = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    if let Some(lead) = r0.last().cloned() {
        let inv = Rational::one() / lead;
        for c in r0.iter_mut().chain(s0.iter_mut()).chain(t0.iter_mut()) {
            *c *= &inv;
        }
    }
    (r0, s0, t0)
}

/// The `n`-th cyclotomic polynomial as a dense coefficient vector of length
/// `phi(n) + 1` (monic).  Computed by exact division of `x^n - 1` by the
/// cyclotomic polynomials of the proper divisors of `n`.
pub fn cyclotomic_poly(n: u32) -> Vec<Rational> {
    assert!(n > 0, "cyclotomic_poly(0) is undefined");
    let mut table: Vec<(u32, Vec<Rational>)> = Vec::new();
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        // x^d - 1
        let mut p = vec![Rational::zero(); d as usize + 1];
        p[0] = -Rational::one();
        p[d as usize] = Rational::one();
        for (e, phi_e) in &table {
            if d % e == 0 {
                let (q, r) = poly_divmod(&p, phi_e);
                debug_assert!(r.is_empty(), "cyclotomic division left a remainder");
                p = q;
            }
        }
        table.push((d, p));
    }
    let result = table.pop().expect("n divides n").1;
    debug_assert_eq!(result.len() as u32, euler_phi(n) + 1);
    result
}

/// An element of `Q(zeta_N)` in the reduced power-basis representation.
#[derive(Clone, Debug)]
pub struct CycScalar {
    conductor: u32,
    /// Coefficients on `1, zeta, ..., zeta^{phi(N)-1}`; length exactly `phi(N)`.
    coeffs: Vec<Rational>,
}

impl CycScalar {
    fn reduced(conductor: u32, poly: Vec<Rational>) -> CycScalar {
        let modulus = cyclotomic_poly(conductor);
        let (_, mut rem) = poly_divmod(&poly, &modulus);
        rem.resize(euler_phi(conductor) as usize, Rational::zero());
        CycScalar {
            conductor,
            coeffs: rem,
        }
    }

    pub fn zero() -> CycScalar {
        CycScalar::from_rational(Rational::zero())
    }

    pub fn one() -> CycScalar {
        CycScalar::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> CycScalar {
        CycScalar {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> CycScalar {
        CycScalar::from_rational(rat_int(n))
    }

    /// The primitive `n`-th root of unity `zeta_n`.
    pub fn zeta(n: u32) -> CycScalar {
        CycScalar::zeta_pow(n, 1)
    }

    /// `zeta_n^k`, for any integer `k` (reduced mod `n`).
    pub fn zeta_pow(n: u32, k: i64) -> CycScalar {
        assert!(n > 0, "root of unity needs a positive order");
        let e = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        CycScalar::reduced(n, poly)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// `Some(r)` when the scalar lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Lift into `Q(zeta_m)`; requires `conductor | m`.
    pub fn embed(&self, m: u32) -> CycScalar {
        assert!(
            m.is_multiple_of(self.conductor),
            "embedding requires the target conductor to be a multiple"
        );
        if m == self.conductor {
            return self.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        CycScalar::reduced(m, poly)
    }

    fn lifted(&self, other: &CycScalar) -> (CycScalar, CycScalar) {
        let m = self.conductor.lcm(&other.conductor);
        (self.embed(m), other.embed(m))
    }

    pub fn add(&self, other: &CycScalar) -> CycScalar {
        let (mut a, b) = self.lifted(other);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &CycScalar) -> CycScalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycScalar {
        CycScalar {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &CycScalar) -> CycScalar {
        let (a, b) = self.lifted(other);
        CycScalar::reduced(a.conductor, poly_mul(&a.coeffs, &b.coeffs))
    }

    pub fn scale(&self, r: &Rational) -> CycScalar {
        CycScalar {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<CycScalar> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(CycScalar {
                conductor: self.conductor,
                coeffs: {
                    let mut v = vec![Rational::zero(); self.coeffs.len()];
                    v[0] = Rational::one() / r;
                    v
                },
            });
        }
        // The cyclotomic polynomial is irreducible over Q, so any nonzero
        // residue is coprime to it and the extended gcd yields the inverse.
        let modulus = cyclotomic_poly(self.conductor);
        let (g, s, _) = poly_ext_gcd(&self.coeffs, &modulus);
        debug_assert!(g.len() == 1 && g[0].is_one(), "gcd with an irreducible");
        Some(CycScalar::reduced(self.conductor, s))
    }

    pub fn pow(&self, k: i64) -> Option<CycScalar> {
        if k < 0 {
            return self.inv().map(|i| i.pow(-k).expect("nonneg"));
        }
        let mut acc = CycScalar::one();
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Some(acc)
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &CycScalar) -> bool {
        let (a, b) = self.lifted(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycScalar {}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_mag = mag.is_one();
            if k == 0 || !unit_mag {
                write!(f, "{}", mag)?;
            }
            if k > 0 {
                if !unit_mag {
                    write!(f, " ")?;
                }
                write!(f, "zeta")?;
                if k > 1 {
                    write!(f, "^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

/// True when the scalar needs more than one printed term (used by renderers
/// to decide on parentheses).
pub fn cyc_is_composite(c: &CycScalar) -> bool {
    c.coeffs.iter().filter(|x| !x.is_zero()).count() > 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_small_values() {
        let expected = [1u32, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(euler_phi(i as u32 + 1), *e);
        }
    }

    #[test]
    fn cyclotomic_poly_pinned() {
        // Phi_1 = x - 1
        assert_eq!(cyclotomic_poly(1), vec![rat_int(-1), rat_int(1)]);
        // Phi_4 = x^2 + 1
        assert_eq!(cyclotomic_poly(4), vec![rat_int(1), rat_int(0), rat_int(1)]);
        // Phi_6 = x^2 - x + 1
        assert_eq!(
            cyclotomic_poly(6),
            vec![rat_int(1), rat_int(-1), rat_int(1)]
        );
        // Phi_12 = x^4 - x^2 + 1
        assert_eq!(
            cyclotomic_poly(12),
            vec![rat_int(1), rat_int(0), rat_int(-1), rat_int(0), rat_int(1)]
        );
    }

    #[test]
    fn roots_of_unity_multiply() {
        assert_eq!(CycScalar::zeta(2).mul(&CycScalar::zeta(2)), CycScalar::one());
        assert_eq!(
            CycScalar::zeta(4).mul(&CycScalar::zeta(4)),
            CycScalar::from_int(-1)
        );
        // zeta_6^2 = zeta_3 across conductors.
        assert_eq!(CycScalar::zeta_pow(6, 2), CycScalar::zeta(3));
        // zeta_3^3 = 1.
        assert_eq!(CycScalar::zeta_pow(3, 3), CycScalar::one());
    }

    #[test]
    fn inverse_of_one_plus_zeta3() {
        // In Q(zeta_3), 1 + zeta_3 = -zeta_3^2, whose inverse is -zeta_3.
        let x = CycScalar::one().add(&CycScalar::zeta(3));
        let inv = x.inv().expect("nonzero");
        assert_eq!(inv, CycScalar::zeta(3).neg());
        assert_eq!(x.mul(&inv), CycScalar::one());
    }

    #[test]
    fn inverse_of_zero_is_none() {
        assert!(CycScalar::zero().inv().is_none());
        let z = CycScalar::zeta(3).sub(&CycScalar::zeta(3));
        assert!(z.inv().is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(CycScalar::from_rational(rat(3, 2)).to_string(), "3/2");
        assert_eq!(CycScalar::zeta(4).neg().to_string(), "-zeta");
        let mixed = CycScalar::one().sub(&CycScalar::zeta_pow(12, 2));
        assert_eq!(mixed.to_string(), "1 - zeta^2");
    }
}
