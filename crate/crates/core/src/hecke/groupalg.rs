//! The specialization of the algebra at `q = 1`: a twisted group algebra of
//! the lattice extended by the finite acting group.
//!
//! At `q = 1` the quadratic relations collapse to `T_s^2 = 1` and the
//! correction terms vanish, so the basis symbols multiply by a plain
//! semidirect-product law with two twists: the stabilizer character picks up
//! a root-of-unity scalar when it crosses a lattice element, and overlapping
//! sign symbols square to their scalar.  The law here is written directly —
//! no reduced words, no length comparisons, no rewriting — so it serves as
//! an independent cross-check of the full multiplication.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::arith::{BMonomial, CycScalar};
use crate::weyl::{BlockSignedPerm, RElem, WeylElem};

use super::StabChar;

/// Shared data of the specialized algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerationCtx {
    /// Multiplicities of the blocks.
    pub dims: Vec<usize>,
    /// Block order of every flat lattice coordinate.
    pub ts_flat: Vec<u32>,
    /// Least common multiple of the block orders.
    pub conductor: u32,
    /// Square scalar of each block's sign symbol, evaluated at `q = 1`.
    pub j_square: Vec<CycScalar>,
}

impl DegenerationCtx {
    pub fn rank(&self) -> usize {
        self.ts_flat.len()
    }

    /// The ambient signed permutation of a sign-part element: the last
    /// coordinate of every active block changes sign.
    pub fn r_ambient(&self, r: &RElem) -> WeylElem {
        WeylElem {
            blocks: self
                .dims
                .iter()
                .enumerate()
                .map(|(i, &d)| {
                    if r.contains(i) {
                        BlockSignedPerm::last_flip(d)
                    } else {
                        BlockSignedPerm::identity(d)
                    }
                })
                .collect(),
        }
    }
}

/// One basis symbol of the specialized algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupKey {
    pub monomial: BMonomial,
    pub chi: StabChar,
    pub r: RElem,
    pub w: WeylElem,
}

/// An element of the specialized algebra: a finite linear combination of
/// basis symbols with cyclotomic scalars.
#[derive(Clone, Debug)]
pub struct GroupAlgElem {
    ctx: Arc<DegenerationCtx>,
    terms: BTreeMap<GroupKey, CycScalar>,
}

impl PartialEq for GroupAlgElem {
    fn eq(&self, other: &GroupAlgElem) -> bool {
        self.ctx == other.ctx && self.terms == other.terms
    }
}

impl GroupAlgElem {
    pub fn zero(ctx: &Arc<DegenerationCtx>) -> GroupAlgElem {
        GroupAlgElem {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn term(ctx: &Arc<DegenerationCtx>, key: GroupKey, c: CycScalar) -> GroupAlgElem {
        let mut out = GroupAlgElem::zero(ctx);
        out.insert(key, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupKey, &CycScalar)> {
        self.terms.iter()
    }

    pub fn insert(&mut self, key: GroupKey, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &GroupAlgElem) -> GroupAlgElem {
        debug_assert_eq!(self.ctx, other.ctx);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    /// The semidirect-product law, term by term:
    ///
    /// `(b_{m1} phi_1 J_{r1} w1) (b_{m2} phi_2 J_{r2} w2)` moves the second
    /// lattice monomial left through `w1` and `r1`, pays the character value
    /// on the moved monomial, merges the sign symbols with the square scalar
    /// on their overlap, and conjugates `w1` by the incoming sign element.
    pub fn mul(&self, other: &GroupAlgElem) -> GroupAlgElem {
        debug_assert_eq!(self.ctx, other.ctx);
        let ctx = &self.ctx;
        let mut out = GroupAlgElem::zero(ctx);
        for (k1, c1) in &self.terms {
            let u = ctx.r_ambient(&k1.r).mul(&k1.w);
            for (k2, c2) in &other.terms {
                let moved = u.act_monomial(&k2.monomial);
                let mut scalar = c1
                    .mul(c2)
                    .mul(&k1.chi.value(&moved, &ctx.ts_flat, ctx.conductor));
                for b in k1.r.intersection(&k2.r) {
                    scalar = scalar.mul(&ctx.j_square[b]);
                }
                let amb2 = ctx.r_ambient(&k2.r);
                let w = amb2.mul(&k1.w).mul(&amb2).mul(&k2.w);
                out.insert(
                    GroupKey {
                        monomial: k1.monomial.combine(&moved),
                        chi: k1.chi.add(&k2.chi, &ctx.ts_flat),
                        r: k1.r.symm_diff(&k2.r),
                        w,
                    },
                    scalar,
                );
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn ctx() -> Arc<DegenerationCtx> {
        // Two blocks of multiplicity 2 and 1, orders 2 and 1.
        Arc::new(DegenerationCtx {
            dims: vec![2, 1],
            ts_flat: vec![2, 2, 1],
            conductor: 2,
            j_square: vec![CycScalar::one(), CycScalar::one()],
        })
    }

    fn key(
        c: &Arc<DegenerationCtx>,
        exps: Vec<i32>,
        residues: &[i64],
        r: RElem,
        w: WeylElem,
    ) -> GroupKey {
        GroupKey {
            monomial: BMonomial::from_exps(exps),
            chi: StabChar::new(residues, &c.ts_flat),
            r,
            w,
        }
    }

    fn identity(c: &Arc<DegenerationCtx>) -> WeylElem {
        WeylElem {
            blocks: c.dims.iter().map(|&d| BlockSignedPerm::identity(d)).collect(),
        }
    }

    #[test]
    fn lattice_elements_translate() {
        let c = ctx();
        let id = identity(&c);
        let x = GroupAlgElem::term(
            &c,
            key(&c, vec![1, 0, 0], &[0, 0, 0], RElem::empty(), id.clone()),
            CycScalar::one(),
        );
        let y = GroupAlgElem::term(
            &c,
            key(&c, vec![0, 2, -1], &[0, 0, 0], RElem::empty(), id.clone()),
            CycScalar::one(),
        );
        let xy = x.mul(&y);
        let expected = GroupAlgElem::term(
            &c,
            key(&c, vec![1, 2, -1], &[0, 0, 0], RElem::empty(), id),
            CycScalar::one(),
        );
        assert_eq!(xy, expected);
    }

    #[test]
    fn character_picks_up_scalar() {
        let c = ctx();
        let id = identity(&c);
        // phi with residue 1 at the first coordinate, times b_{e1}.
        let phi = GroupAlgElem::term(
            &c,
            key(&c, vec![0, 0, 0], &[1, 0, 0], RElem::empty(), id.clone()),
            CycScalar::one(),
        );
        let b = GroupAlgElem::term(
            &c,
            key(&c, vec![1, 0, 0], &[0, 0, 0], RElem::empty(), id.clone()),
            CycScalar::one(),
        );
        let lhs = phi.mul(&b);
        // = chi(e1) b_{e1} phi = -1 * b_{e1} phi.
        let expected = GroupAlgElem::term(
            &c,
            key(&c, vec![1, 0, 0], &[1, 0, 0], RElem::empty(), id),
            CycScalar::from_rational(rat(-1, 1)),
        );
        assert_eq!(lhs, expected);
    }

    #[test]
    fn sign_symbols_merge_with_square() {
        let c = Arc::new(DegenerationCtx {
            dims: vec![1],
            ts_flat: vec![1],
            conductor: 1,
            j_square: vec![CycScalar::from_rational(rat(3, 1))],
        });
        let id = identity(&c);
        let r = RElem::from_blocks([0]);
        let j = GroupAlgElem::term(
            &c,
            key(&c, vec![0], &[0], r, id.clone()),
            CycScalar::one(),
        );
        let jj = j.mul(&j);
        let expected = GroupAlgElem::term(
            &c,
            key(&c, vec![0], &[0], RElem::empty(), id),
            CycScalar::from_rational(rat(3, 1)),
        );
        assert_eq!(jj, expected);
    }

    #[test]
    fn sign_conjugates_lattice() {
        let c = ctx();
        let id = identity(&c);
        let r = RElem::from_blocks([0]);
        let j = GroupAlgElem::term(
            &c,
            key(&c, vec![0, 0, 0], &[0, 0, 0], r.clone(), id.clone()),
            CycScalar::one(),
        );
        let b = GroupAlgElem::term(
            &c,
            key(&c, vec![0, 2, 0], &[0, 0, 0], RElem::empty(), id.clone()),
            CycScalar::one(),
        );
        // J b_{2 e2} = b_{-2 e2} J: the last coordinate of block 1 flips.
        let lhs = j.mul(&b);
        let expected = GroupAlgElem::term(
            &c,
            key(&c, vec![0, -2, 0], &[0, 0, 0], r, id),
            CycScalar::one(),
        );
        assert_eq!(lhs, expected);
    }

    #[test]
    fn associativity_on_sample_triples() {
        let c = ctx();
        let id = identity(&c);
        let r = RElem::from_blocks([0]);
        let swap = WeylElem {
            blocks: vec![BlockSignedPerm::transposition(2, 0), BlockSignedPerm::identity(1)],
        };
        let x = GroupAlgElem::term(
            &c,
            key(&c, vec![2, 0, 0], &[1, 0, 0], RElem::empty(), swap.clone()),
            CycScalar::one(),
        );
        let y = GroupAlgElem::term(
            &c,
            key(&c, vec![0, -2, 1], &[0, 1, 0], r.clone(), id.clone()),
            CycScalar::from_rational(rat(2, 1)),
        );
        let z = GroupAlgElem::term(
            &c,
            key(&c, vec![2, 2, 0], &[1, 1, 0], r, swap),
            CycScalar::one(),
        );
        assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }
}
