//! Laurent polynomials in `v`, the formal square root of the residue-field
//! cardinality `q`.
//!
//! Half-integral powers of `q` occur in the quadratic and commutation
//! parameters whenever `t(a+1)/2` is a half-integer, so everything is written
//! in `v` with `q = v^2`.  Coefficients are exact cyclotomic scalars.

use super::cyclotomic::{CycScalar, Rational};
use std::collections::BTreeMap;
use std::fmt;

/// A Laurent polynomial `sum c_k v^k` with `c_k` in a cyclotomic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VLaurent {
    /// Exponent -> coefficient; no zero coefficients are stored.
    terms: BTreeMap<i64, CycScalar>,
}

impl VLaurent {
    pub fn zero() -> VLaurent {
        VLaurent {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> VLaurent {
        VLaurent::v_pow(0)
    }

    /// The monomial `v^k`.
    pub fn v_pow(k: i64) -> VLaurent {
        let mut terms = BTreeMap::new();
        terms.insert(k, CycScalar::one());
        VLaurent { terms }
    }

    /// The monomial `q^k = v^{2k}`.
    pub fn q_pow(k: i64) -> VLaurent {
        VLaurent::v_pow(2 * k)
    }

    pub fn from_scalar(c: CycScalar) -> VLaurent {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        VLaurent { terms }
    }

    pub fn from_rational(r: Rational) -> VLaurent {
        VLaurent::from_scalar(CycScalar::from_rational(r))
    }

    pub fn from_int(n: i64) -> VLaurent {
        VLaurent::from_scalar(CycScalar::from_int(n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&0)
                .is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &CycScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, k: i64, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&k) {
            None => {
                self.terms.insert(k, c);
            }
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(k, s);
                }
            }
        }
    }

    pub fn add(&self, other: &VLaurent) -> VLaurent {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &VLaurent) -> VLaurent {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> VLaurent {
        VLaurent {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &VLaurent) -> VLaurent {
        let mut out = VLaurent::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                out.insert(k1 + k2, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &CycScalar) -> VLaurent {
        if c.is_zero() {
            return VLaurent::zero();
        }
        VLaurent {
            terms: self
                .terms
                .iter()
                .map(|(k, x)| (*k, x.mul(c)))
                .collect(),
        }
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// True when only even powers of `v` occur, i.e. the value is a Laurent
    /// polynomial in `q` itself.
    pub fn all_v_exponents_even(&self) -> bool {
        self.terms.keys().all(|k| k % 2 == 0)
    }

    /// Exact division; `None` when `other` does not divide `self` (or is zero).
    pub fn exact_div(&self, other: &VLaurent) -> Option<VLaurent> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(VLaurent::zero());
        }
        let sa = self.min_exp().expect("nonzero");
        let sb = other.min_exp().expect("nonzero");
        // Shift both to ordinary polynomials in v and long-divide over the
        // coefficient field.
        let da = (self.max_exp().unwrap() - sa) as usize;
        let db = (other.max_exp().unwrap() - sb) as usize;
        if da < db {
            return None;
        }
        let mut rem = vec![CycScalar::zero(); da + 1];
        for (k, c) in &self.terms {
            rem[(k - sa) as usize] = c.clone();
        }
        let mut div = vec![CycScalar::zero(); db + 1];
        for (k, c) in &other.terms {
            div[(k - sb) as usize] = c.clone();
        }
        let lead_inv = div[db].inv().expect("leading coefficient nonzero");
        let mut quot = vec![CycScalar::zero(); da - db + 1];
        for i in (db..=da).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let c = rem[i].mul(&lead_inv);
            quot[i - db] = c.clone();
            for (j, d) in div.iter().enumerate() {
                rem[i - db + j] = rem[i - db + j].sub(&c.mul(d));
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut out = VLaurent::zero();
        for (i, c) in quot.into_iter().enumerate() {
            out.insert(i as i64 + sa - sb, c);
        }
        Some(out)
    }

    /// Evaluate at `v = v0`; `None` when `v0 = 0` but a negative power occurs.
    pub fn eval(&self, v0: &CycScalar) -> Option<CycScalar> {
        let mut acc = CycScalar::zero();
        for (k, c) in &self.terms {
            let p = if *k >= 0 {
                v0.pow(*k).expect("nonneg power")
            } else {
                v0.inv()?.pow(-k).expect("nonneg power")
            };
            acc = acc.add(&c.mul(&p));
        }
        Some(acc)
    }
}

impl fmt::Display for VLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use super::cyclotomic::cyc_is_composite;
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            let (lead, body) = split_sign(c);
            if first {
                if lead {
                    write!(f, "-")?;
                }
                first = false;
            } else if lead {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let composite = cyc_is_composite(&body);
            let unit = body.is_one();
            if *k == 0 {
                if composite {
                    write!(f, "({})", body)?;
                } else {
                    write!(f, "{}", body)?;
                }
            } else {
                if composite {
                    write!(f, "({}) ", body)?;
                } else if !unit {
                    write!(f, "{} ", body)?;
                }
                // Even powers of v are powers of q.
                if k % 2 == 0 {
                    write!(f, "q")?;
                    if *k != 2 {
                        write!(f, "^{}", k / 2)?;
                    }
                } else {
                    write!(f, "v")?;
                    if *k != 1 {
                        write!(f, "^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Splits a leading minus sign off a scalar for rendering: returns
/// `(true, -c)` when `c` prints with a leading `-`, else `(false, c)`.
fn split_sign(c: &CycScalar) -> (bool, CycScalar) {
    let s = c.to_string();
    if s.starts_with('-') {
        (true, c.neg())
    } else {
        (false, c.clone())
    }
}
