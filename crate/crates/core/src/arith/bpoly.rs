//! Multivariate Laurent polynomials over the `v`-scalars.
//!
//! The variables `y_1, ..., y_n` are the coordinates of the cocharacter
//! lattice of the inducing Levi (one coordinate per general-linear factor), so
//! a monomial is an exponent vector in `Z^n` and the polynomials form the
//! group algebra of that lattice.  Exact division is decided by single-divisor
//! multivariate division: Laurent normalization shifts both operands into the
//! polynomial cone, and the graded-lexicographic leading terms then force the
//! quotient term by term, so a failed leading-term division certifies
//! indivisibility.

use super::cyclotomic::CycScalar;
use super::vlaurent::VLaurent;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// An exponent vector in `Z^n`, i.e. a point of the lattice `M/M^1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BMonomial {
    exps: Vec<i32>,
}

impl BMonomial {
    pub fn unit(rank: usize) -> BMonomial {
        BMonomial {
            exps: vec![0; rank],
        }
    }

    pub fn from_exps(exps: Vec<i32>) -> BMonomial {
        BMonomial { exps }
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[i32] {
        &self.exps
    }

    pub fn exp(&self, k: usize) -> i32 {
        self.exps[k]
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|e| *e == 0)
    }

    /// Componentwise sum (product of the monomials).
    pub fn combine(&self, other: &BMonomial) -> BMonomial {
        debug_assert_eq!(self.rank(), other.rank());
        BMonomial {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// The inverse monomial (negated exponents).
    pub fn inverse(&self) -> BMonomial {
        BMonomial {
            exps: self.exps.iter().map(|e| -e).collect(),
        }
    }

    pub fn pow(&self, k: i32) -> BMonomial {
        BMonomial {
            exps: self.exps.iter().map(|e| e * k).collect(),
        }
    }

    pub fn total_degree(&self) -> i64 {
        self.exps.iter().map(|e| *e as i64).sum()
    }

    /// True when every coordinate is divisible by the matching modulus
    /// (membership in the sublattice generated by the `t`-th powers).
    pub fn in_sublattice(&self, moduli: &[u32]) -> bool {
        debug_assert_eq!(self.rank(), moduli.len());
        self.exps
            .iter()
            .zip(moduli.iter())
            .all(|(e, t)| *t != 0 && e.rem_euclid(*t as i32) == 0)
    }

    /// Graded-lexicographic comparison (total degree first, then lex).
    pub fn cmp_grlex(&self, other: &BMonomial) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }

    /// True when `other` divides `self` coordinatewise in the polynomial cone.
    fn divisible_by(&self, other: &BMonomial) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(a, b)| a >= b)
    }

    fn sub(&self, other: &BMonomial) -> BMonomial {
        BMonomial {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// A Laurent polynomial in `y_1, ..., y_n` with `VLaurent` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPoly {
    rank: usize,
    terms: BTreeMap<BMonomial, VLaurent>,
}

impl BPoly {
    pub fn zero(rank: usize) -> BPoly {
        BPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> BPoly {
        BPoly::constant(rank, VLaurent::one())
    }

    pub fn constant(rank: usize, c: VLaurent) -> BPoly {
        let mut p = BPoly::zero(rank);
        p.insert(BMonomial::unit(rank), c);
        p
    }

    pub fn scalar(rank: usize, c: CycScalar) -> BPoly {
        BPoly::constant(rank, VLaurent::from_scalar(c))
    }

    pub fn monomial(m: BMonomial) -> BPoly {
        let rank = m.rank();
        let mut p = BPoly::zero(rank);
        p.insert(m, VLaurent::one());
        p
    }

    pub fn term(m: BMonomial, c: VLaurent) -> BPoly {
        let rank = m.rank();
        let mut p = BPoly::zero(rank);
        p.insert(m, c);
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&BMonomial::unit(self.rank))
                .is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BMonomial, &VLaurent)> {
        self.terms.iter()
    }

    /// Merge one term in, dropping it if the coefficient cancels to zero.
    pub fn insert(&mut self, m: BMonomial, c: VLaurent) {
        debug_assert_eq!(m.rank(), self.rank);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    pub fn add(&self, other: &BPoly) -> BPoly {
        debug_assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BPoly) -> BPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BPoly {
        BPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &BPoly) -> BPoly {
        debug_assert_eq!(self.rank, other.rank);
        let mut out = BPoly::zero(self.rank);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert(m1.combine(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &VLaurent) -> BPoly {
        if c.is_zero() {
            return BPoly::zero(self.rank);
        }
        BPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.mul(c)))
                .collect(),
        }
    }

    pub fn mul_mono(&self, m: &BMonomial) -> BPoly {
        BPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.combine(m), c.clone()))
                .collect(),
        }
    }

    /// Apply a lattice map to every monomial (e.g. a signed permutation);
    /// coefficients are untouched.  Colliding images are merged.
    pub fn map_monomials<F: Fn(&BMonomial) -> BMonomial>(&self, f: F) -> BPoly {
        let mut out = BPoly::zero(self.rank);
        for (m, c) in &self.terms {
            out.insert(f(m), c.clone());
        }
        out
    }

    /// Rescale each term by a scalar depending on its monomial (e.g. the value
    /// of a character of the lattice).
    pub fn twist<F: Fn(&BMonomial) -> CycScalar>(&self, f: F) -> BPoly {
        let mut out = BPoly::zero(self.rank);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.scale(&f(m)));
        }
        out
    }

    /// True when every monomial lies in the sublattice with the given moduli.
    pub fn supported_in_sublattice(&self, moduli: &[u32]) -> bool {
        self.terms.keys().all(|m| m.in_sublattice(moduli))
    }

    /// Coordinatewise minimum of the exponent vectors over the support.
    fn min_exponents(&self) -> BMonomial {
        let mut min = vec![i32::MAX; self.rank];
        for m in self.terms.keys() {
            for (lo, e) in min.iter_mut().zip(m.exps().iter()) {
                *lo = (*lo).min(*e);
            }
        }
        BMonomial::from_exps(min)
    }

    fn lead_grlex(&self) -> (&BMonomial, &VLaurent) {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| a.cmp_grlex(b))
            .expect("nonzero polynomial")
    }

    /// Exact division of Laurent polynomials: `Some(q)` with `q * other ==
    /// self`, or `None` when no such Laurent polynomial exists.  Division by
    /// zero is `None`.
    pub fn exact_div(&self, other: &BPoly) -> Option<BPoly> {
        debug_assert_eq!(self.rank, other.rank);
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BPoly::zero(self.rank));
        }
        let shift_a = self.min_exponents();
        let shift_b = other.min_exponents();
        let mut rem = self.mul_mono(&shift_a.inverse());
        let div = other.mul_mono(&shift_b.inverse());
        let mut quot = BPoly::zero(self.rank);
        let (lead_m, lead_c) = {
            let (m, c) = div.lead_grlex();
            (m.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (m, c) = {
                let (m, c) = rem.lead_grlex();
                (m.clone(), c.clone())
            };
            if !m.divisible_by(&lead_m) {
                return None;
            }
            let qc = c.exact_div(&lead_c)?;
            let qm = m.sub(&lead_m);
            rem = rem.sub(&div.mul(&BPoly::term(qm.clone(), qc.clone())));
            quot.insert(qm, qc);
        }
        Some(quot.mul_mono(&shift_a.sub(&shift_b)))
    }

    /// Evaluate completely: `v -> v0` and `y_k -> units[k]`.  `None` when a
    /// negative power meets a zero value.
    pub fn specialize(&self, v0: &CycScalar, units: &[CycScalar]) -> Option<CycScalar> {
        debug_assert_eq!(units.len(), self.rank);
        let mut acc = CycScalar::zero();
        for (m, c) in &self.terms {
            let mut val = c.eval(v0)?;
            for (u, e) in units.iter().zip(m.exps().iter()) {
                let p = if *e >= 0 {
                    u.pow(*e as i64).expect("nonneg power")
                } else {
                    u.inv()?.pow(-(*e as i64)).expect("nonneg power")
                };
                val = val.mul(&p);
            }
            acc = acc.add(&val);
        }
        Some(acc)
    }

    /// Send `v -> 1` on every coefficient, keeping the monomials: the image in
    /// the plain group algebra of the lattice.  Always defined on polynomials.
    pub fn specialize_v_one(&self) -> BTreeMap<BMonomial, CycScalar> {
        let one = CycScalar::one();
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let val = c.eval(&one).expect("v = 1 is a unit");
            if !val.is_zero() {
                out.insert(m.clone(), val);
            }
        }
        out
    }

    /// Canonical rendering with `y[i,j]^e` variables; `dims` gives the block
    /// sizes that turn a flat coordinate into the pair `(i, j)` (1-indexed).
    pub fn render_y(&self, dims: &[usize]) -> String {
        self.render_with(|k| {
            let (i, j) = split_coord(dims, k);
            format!("y[{},{}]", i, j)
        })
    }

    /// Rendering used by the expression evaluator: each monomial appears as a
    /// single `b[e_1,...,e_n]` factor, matching the input language.
    pub fn render_b(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut pieces = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let coeff = coeff_string(c);
            if m.is_unit() {
                pieces.push(coeff);
            } else {
                let mono = format!(
                    "b[{}]",
                    m.exps()
                        .iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                );
                if c.is_one() {
                    pieces.push(mono);
                } else if c.neg().is_one() {
                    pieces.push(format!("-{}", mono));
                } else {
                    pieces.push(format!("{} · {}", coeff, mono));
                }
            }
        }
        join_signed(pieces)
    }

    fn render_with<F: Fn(usize) -> String>(&self, var: F) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut pieces = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (k, e) in m.exps().iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                if *e == 1 {
                    factors.push(var(k));
                } else {
                    factors.push(format!("{}^{}", var(k), e));
                }
            }
            if factors.is_empty() {
                pieces.push(coeff_string(c));
            } else {
                let mono = factors.join("*");
                if c.is_one() {
                    pieces.push(mono);
                } else if c.neg().is_one() {
                    pieces.push(format!("-{}", mono));
                } else {
                    pieces.push(format!("{} {}", coeff_string(c), mono));
                }
            }
        }
        join_signed(pieces)
    }
}

/// Flat coordinate -> 1-indexed `(block, position)` under the given block sizes.
pub fn split_coord(dims: &[usize], k: usize) -> (usize, usize) {
    let mut k = k;
    for (i, d) in dims.iter().enumerate() {
        if k < *d {
            return (i + 1, k + 1);
        }
        k -= d;
    }
    panic!("coordinate out of range for the given block sizes");
}

fn coeff_string(c: &VLaurent) -> String {
    let s = c.to_string();
    if c.num_terms() > 1 {
        format!("({})", s)
    } else {
        s
    }
}

/// Joins rendered terms with ` + `/` - `, folding a leading minus of the next
/// term into the separator.
fn join_signed(pieces: Vec<String>) -> String {
    let mut out = String::new();
    for (i, p) in pieces.iter().enumerate() {
        if i == 0 {
            out.push_str(p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

impl fmt::Display for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_with(|k| format!("y[{}]", k + 1)))
    }
}
