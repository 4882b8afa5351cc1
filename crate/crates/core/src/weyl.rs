//! Signed-permutation model of the finite group acting on the support.
//!
//! The lattice of unramified twists splits into one `Z^d` factor per block,
//! and every symmetry acts block by block as a signed permutation.  The group
//! attached to a classified support is a semidirect product `R ⋉ W°` inside
//! the full product of hyperoctahedral groups:
//!
//! * a case-I block of multiplicity `d` contributes the plain symmetric group
//!   `S_d` (no sign changes are available);
//! * a case-II or case-IIb block contributes the even-sign-count group `D_d`;
//! * a case-III block contributes the full signed-permutation group `B_d`.
//!
//! Each case-II block additionally contributes an involution `r` — the sign
//! change at its last coordinate — which lies outside `W°` but normalizes it;
//! the subsets of case-II blocks form the elementary abelian group `R`.  A
//! case-IIb block has no such companion: a signed permutation with an odd
//! sign count on such a block does not belong to the group at all.

use crate::arith::BMonomial;
use crate::langlands::{Case, ClassifiedBlock};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// A signed permutation of `{0, .., d-1}`: coordinate `j` is sent to
/// coordinate `perm[j]` with a sign flip when `sign[j]` is set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockSignedPerm {
    perm: Vec<usize>,
    sign: Vec<bool>,
}

impl BlockSignedPerm {
    pub fn identity(d: usize) -> BlockSignedPerm {
        BlockSignedPerm {
            perm: (0..d).collect(),
            sign: vec![false; d],
        }
    }

    /// Build from images: coordinate `j` goes to `images[j].0` with a flip
    /// when `images[j].1` is set.  Panics unless `perm` is a permutation.
    pub fn from_images(images: &[(usize, bool)]) -> BlockSignedPerm {
        let d = images.len();
        let mut seen = vec![false; d];
        for &(p, _) in images {
            assert!(p < d && !seen[p], "not a permutation");
            seen[p] = true;
        }
        BlockSignedPerm {
            perm: images.iter().map(|&(p, _)| p).collect(),
            sign: images.iter().map(|&(_, s)| s).collect(),
        }
    }

    /// The transposition of coordinates `j` and `j + 1` (0-indexed).
    pub fn transposition(d: usize, j: usize) -> BlockSignedPerm {
        assert!(j + 1 < d);
        let mut e = BlockSignedPerm::identity(d);
        e.perm.swap(j, j + 1);
        e
    }

    /// The transposition of the last two coordinates combined with sign flips
    /// on both: the extra generator of the even-sign-count group.
    pub fn neg_transposition(d: usize) -> BlockSignedPerm {
        assert!(d >= 2);
        let mut e = BlockSignedPerm::transposition(d, d - 2);
        e.sign[d - 2] = true;
        e.sign[d - 1] = true;
        e
    }

    /// The sign flip at the last coordinate.
    pub fn last_flip(d: usize) -> BlockSignedPerm {
        assert!(d >= 1);
        let mut e = BlockSignedPerm::identity(d);
        e.sign[d - 1] = true;
        e
    }

    pub fn degree(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &p)| p == j) && self.sign.iter().all(|&s| !s)
    }

    /// Image of coordinate `j`: `(target, flipped)`.
    pub fn image(&self, j: usize) -> (usize, bool) {
        (self.perm[j], self.sign[j])
    }

    pub fn flip_count(&self) -> usize {
        self.sign.iter().filter(|&&s| s).count()
    }

    /// Composition acting on the left: `(self * other)(x) = self(other(x))`.
    pub fn mul(&self, other: &BlockSignedPerm) -> BlockSignedPerm {
        let d = self.degree();
        assert_eq!(d, other.degree());
        let mut perm = vec![0; d];
        let mut sign = vec![false; d];
        for j in 0..d {
            let (p1, s1) = other.image(j);
            let (p2, s2) = self.image(p1);
            perm[j] = p2;
            sign[j] = s1 ^ s2;
        }
        BlockSignedPerm { perm, sign }
    }

    pub fn inv(&self) -> BlockSignedPerm {
        let d = self.degree();
        let mut perm = vec![0; d];
        let mut sign = vec![false; d];
        for j in 0..d {
            perm[self.perm[j]] = j;
            sign[self.perm[j]] = self.sign[j];
        }
        BlockSignedPerm { perm, sign }
    }

    /// Push exponents forward: the image of the monomial with exponents
    /// `exps` has `±exps[j]` in coordinate `perm[j]`.
    pub fn act_exps(&self, exps: &[i32]) -> Vec<i32> {
        let d = self.degree();
        assert_eq!(d, exps.len());
        let mut out = vec![0; d];
        for j in 0..d {
            out[self.perm[j]] = if self.sign[j] { -exps[j] } else { exps[j] };
        }
        out
    }
}

/// An element of the ambient product of signed-permutation groups, one
/// factor per block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylElem {
    pub blocks: Vec<BlockSignedPerm>,
}

impl WeylElem {
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.degree()).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(|b| b.is_identity())
    }

    pub fn mul(&self, other: &WeylElem) -> WeylElem {
        assert_eq!(self.blocks.len(), other.blocks.len());
        WeylElem {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    pub fn inv(&self) -> WeylElem {
        WeylElem {
            blocks: self.blocks.iter().map(|b| b.inv()).collect(),
        }
    }

    /// Act on a monomial over the full lattice (coordinates grouped block by
    /// block, in order).
    pub fn act_monomial(&self, m: &BMonomial) -> BMonomial {
        assert_eq!(self.rank(), m.rank());
        let mut out = Vec::with_capacity(m.rank());
        let mut offset = 0;
        for b in &self.blocks {
            let d = b.degree();
            out.extend(b.act_exps(&m.exps()[offset..offset + d]));
            offset += d;
        }
        BMonomial::from_exps(out)
    }

    /// Push a flat exponent vector forward.
    pub fn act_flat(&self, exps: &[i32]) -> Vec<i32> {
        assert_eq!(self.rank(), exps.len());
        let mut out = Vec::with_capacity(exps.len());
        let mut offset = 0;
        for b in &self.blocks {
            let d = b.degree();
            out.extend(b.act_exps(&exps[offset..offset + d]));
            offset += d;
        }
        out
    }
}

/// Identifies a simple generator: `j` is 1-indexed within the block, with
/// `j < d` the adjacent transpositions and `j = d` the block-specific wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleGen {
    pub block: usize,
    pub j: usize,
}

impl fmt::Display for SimpleGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}.{}", self.block + 1, self.j)
    }
}

/// An element of the elementary abelian group `R`: the set of case-II blocks
/// whose last-coordinate sign change participates.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RElem {
    active: BTreeSet<usize>,
}

impl RElem {
    pub fn empty() -> RElem {
        RElem::default()
    }

    pub fn from_blocks<I: IntoIterator<Item = usize>>(blocks: I) -> RElem {
        RElem {
            active: blocks.into_iter().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    pub fn contains(&self, block: usize) -> bool {
        self.active.contains(&block)
    }

    pub fn blocks(&self) -> impl Iterator<Item = usize> + '_ {
        self.active.iter().copied()
    }

    /// The group law: each block's involution squares to a sign that is
    /// tracked separately by the algebra, so on indices this is the
    /// symmetric difference.
    pub fn symm_diff(&self, other: &RElem) -> RElem {
        RElem {
            active: self
                .active
                .symmetric_difference(&other.active)
                .copied()
                .collect(),
        }
    }

    /// Blocks active in both operands (their squares contribute scalars).
    pub fn intersection(&self, other: &RElem) -> Vec<usize> {
        self.active.intersection(&other.active).copied().collect()
    }
}

impl fmt::Display for RElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.active.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.active.iter().map(|b| (b + 1).to_string()).collect();
        write!(f, "r[{}]", parts.join(","))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeylError {
    #[error("signed permutation lies outside the group (block {block}: {reason})")]
    NotInGroup { block: usize, reason: String },
    #[error("element has {found} blocks, the group has {expected}")]
    BlockMismatch { expected: usize, found: usize },
}

/// Shape of one block of the group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockShape {
    pub d: usize,
    pub case: Case,
}

/// The finite group attached to a classified support, presented through its
/// ambient signed permutations.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    shapes: Vec<BlockShape>,
}

impl WeylGroup {
    pub fn new(blocks: &[ClassifiedBlock]) -> WeylGroup {
        WeylGroup {
            shapes: blocks
                .iter()
                .map(|b| BlockShape {
                    d: b.d as usize,
                    case: b.case,
                })
                .collect(),
        }
    }

    pub fn from_shapes(shapes: Vec<BlockShape>) -> WeylGroup {
        WeylGroup { shapes }
    }

    pub fn shapes(&self) -> &[BlockShape] {
        &self.shapes
    }

    pub fn dims(&self) -> Vec<usize> {
        self.shapes.iter().map(|s| s.d).collect()
    }

    pub fn rank(&self) -> usize {
        self.shapes.iter().map(|s| s.d).sum()
    }

    pub fn identity(&self) -> WeylElem {
        WeylElem {
            blocks: self.shapes.iter().map(|s| BlockSignedPerm::identity(s.d)).collect(),
        }
    }

    /// Indices of the case-II blocks — the blocks that contribute to `R`.
    pub fn r_blocks(&self) -> Vec<usize> {
        self.shapes
            .iter()
            .enumerate()
            .filter(|(_, s)| s.case == Case::II)
            .map(|(i, _)| i)
            .collect()
    }

    /// All elements of `R`: subsets of the case-II blocks.
    pub fn r_elements(&self) -> Vec<RElem> {
        let blocks = self.r_blocks();
        let mut out = Vec::with_capacity(1 << blocks.len());
        for mask in 0u32..(1 << blocks.len()) {
            out.push(RElem::from_blocks(
                blocks
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &b)| b),
            ));
        }
        out
    }

    /// Number of simple generators carried by block `i`.
    pub fn gen_count(&self, i: usize) -> usize {
        let s = self.shapes[i];
        match s.case {
            Case::I => s.d - 1,
            Case::II | Case::IIb => {
                if s.d >= 2 {
                    s.d
                } else {
                    0
                }
            }
            Case::III => s.d,
        }
    }

    pub fn simple_gens(&self) -> Vec<SimpleGen> {
        let mut out = Vec::new();
        for i in 0..self.shapes.len() {
            for j in 1..=self.gen_count(i) {
                out.push(SimpleGen { block: i, j });
            }
        }
        out
    }

    /// The signed permutation realizing a simple generator.
    pub fn gen_elem(&self, s: &SimpleGen) -> WeylElem {
        let mut blocks: Vec<BlockSignedPerm> =
            self.shapes.iter().map(|sh| BlockSignedPerm::identity(sh.d)).collect();
        let sh = self.shapes[s.block];
        assert!(s.j >= 1 && s.j <= self.gen_count(s.block), "no such generator");
        blocks[s.block] = if s.j < sh.d {
            BlockSignedPerm::transposition(sh.d, s.j - 1)
        } else {
            match sh.case {
                Case::I => unreachable!("case I stops at d - 1"),
                Case::II | Case::IIb => BlockSignedPerm::neg_transposition(sh.d),
                Case::III => BlockSignedPerm::last_flip(sh.d),
            }
        };
        WeylElem { blocks }
    }

    /// The ambient element of an `R`-member: sign changes at the last
    /// coordinates of its active blocks.
    pub fn r_elem_ambient(&self, r: &RElem) -> WeylElem {
        let mut blocks: Vec<BlockSignedPerm> =
            self.shapes.iter().map(|sh| BlockSignedPerm::identity(sh.d)).collect();
        for b in r.blocks() {
            blocks[b] = BlockSignedPerm::last_flip(self.shapes[b].d);
        }
        WeylElem { blocks }
    }

    /// Membership of an ambient element in the Coxeter part `W°`.
    pub fn contains(&self, w: &WeylElem) -> bool {
        w.blocks.len() == self.shapes.len()
            && w.blocks.iter().zip(&self.shapes).all(|(b, sh)| match sh.case {
                Case::I => b.flip_count() == 0,
                Case::II | Case::IIb => b.flip_count() % 2 == 0,
                Case::III => true,
            })
    }

    /// Split an ambient element as `u = r * w` with `r` in `R` and `w` in
    /// `W°`, when possible.
    pub fn decompose(&self, u: &WeylElem) -> Result<(RElem, WeylElem), WeylError> {
        if u.blocks.len() != self.shapes.len() {
            return Err(WeylError::BlockMismatch {
                expected: self.shapes.len(),
                found: u.blocks.len(),
            });
        }
        let mut active = Vec::new();
        let mut blocks = Vec::with_capacity(u.blocks.len());
        for (i, (b, sh)) in u.blocks.iter().zip(&self.shapes).enumerate() {
            let odd = b.flip_count() % 2 == 1;
            match sh.case {
                Case::I => {
                    if b.flip_count() != 0 {
                        return Err(WeylError::NotInGroup {
                            block: i,
                            reason: "sign changes are not available".into(),
                        });
                    }
                    blocks.push(b.clone());
                }
                Case::II => {
                    if odd {
                        active.push(i);
                        blocks.push(BlockSignedPerm::last_flip(sh.d).mul(b));
                    } else {
                        blocks.push(b.clone());
                    }
                }
                Case::IIb => {
                    if odd {
                        return Err(WeylError::NotInGroup {
                            block: i,
                            reason: "odd sign count with no companion involution".into(),
                        });
                    }
                    blocks.push(b.clone());
                }
                Case::III => blocks.push(b.clone()),
            }
        }
        Ok((RElem::from_blocks(active), WeylElem { blocks }))
    }

    /// Conjugate a Coxeter element by an `R`-member: `r w r`.
    pub fn conjugate_by_r(&self, r: &RElem, w: &WeylElem) -> WeylElem {
        let a = self.r_elem_ambient(r);
        a.mul(w).mul(&a)
    }

    /// Conjugating a simple generator by an `R`-member permutes the simple
    /// generators: in an active block the two wall generators `s_{d-1}` and
    /// `s_d` trade places, everything else is fixed.
    pub fn conjugate_gen(&self, r: &RElem, s: &SimpleGen) -> SimpleGen {
        if !r.contains(s.block) {
            return *s;
        }
        let d = self.shapes[s.block].d;
        debug_assert_eq!(self.shapes[s.block].case, Case::II);
        if d >= 2 && s.j == d - 1 {
            SimpleGen { block: s.block, j: d }
        } else if s.j == d {
            SimpleGen {
                block: s.block,
                j: d - 1,
            }
        } else {
            *s
        }
    }

    /// Order of `s * s'` — the Coxeter matrix entry.  Caps at 24 to stay
    /// total on malformed input.
    pub fn coxeter_order(&self, a: &SimpleGen, b: &SimpleGen) -> usize {
        let p = self.gen_elem(a).mul(&self.gen_elem(b));
        let mut acc = p.clone();
        for order in 1..=24 {
            if acc.is_identity() {
                return order;
            }
            acc = acc.mul(&p);
        }
        panic!("generator product of unexpected order");
    }

    /// Every element of `W°`, found by closing the generators under right
    /// multiplication.  Intended for small ranks.
    pub fn enumerate(&self) -> Vec<WeylElem> {
        let gens: Vec<WeylElem> = self.simple_gens().iter().map(|s| self.gen_elem(s)).collect();
        let mut seen: BTreeSet<WeylElem> = BTreeSet::new();
        let mut frontier = vec![self.identity()];
        seen.insert(self.identity());
        while let Some(w) = frontier.pop() {
            for g in &gens {
                let next = w.mul(g);
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        seen.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn shapes(spec: &[(usize, Case)]) -> WeylGroup {
        WeylGroup::from_shapes(spec.iter().map(|&(d, case)| BlockShape { d, case }).collect())
    }

    #[test]
    fn signed_perm_composition_convention() {
        // s = (1 2) then flip the image of coordinate 0.
        let s = BlockSignedPerm::transposition(2, 0);
        let f = BlockSignedPerm::last_flip(2);
        // (f * s)(e1) = f(e2) = -e2.
        let fs = f.mul(&s);
        assert_eq!(fs.image(0), (1, true));
        assert_eq!(fs.image(1), (0, false));
        // (s * f)(e1) = s(e1) = e2.
        let sf = s.mul(&f);
        assert_eq!(sf.image(0), (1, false));
        assert_eq!(sf.image(1), (0, true));
    }

    #[test]
    fn exponent_action_matches_images() {
        let w = BlockSignedPerm::from_images(&[(2, true), (0, false), (1, true)]);
        // e1 -> -e3, e2 -> e1, e3 -> -e2.
        assert_eq!(w.act_exps(&[1, 0, 0]), vec![0, 0, -1]);
        assert_eq!(w.act_exps(&[0, 1, 0]), vec![1, 0, 0]);
        assert_eq!(w.act_exps(&[1, 2, 3]), vec![2, -3, -1]);
        // Round trip through the inverse.
        assert_eq!(w.inv().act_exps(&w.act_exps(&[5, -7, 2])), vec![5, -7, 2]);
    }

    #[test]
    fn generator_orders_match_the_diagrams() {
        // One case-II block of multiplicity 3: a fork.
        let g = shapes(&[(3, Case::II)]);
        let s: Vec<SimpleGen> = g.simple_gens();
        assert_eq!(s.len(), 3);
        for gen in &s {
            assert_eq!(g.coxeter_order(gen, gen), 1);
        }
        assert_eq!(g.coxeter_order(&s[0], &s[1]), 3);
        assert_eq!(g.coxeter_order(&s[0], &s[2]), 3);
        // The two wall generators commute: the fork is at s1, not s2.
        assert_eq!(g.coxeter_order(&s[1], &s[2]), 2);

        // One case-III block of multiplicity 2: a double bond.
        let g = shapes(&[(2, Case::III)]);
        let s = g.simple_gens();
        assert_eq!(g.coxeter_order(&s[0], &s[1]), 4);

        // Case I of multiplicity 3: a path with two generators.
        let g = shapes(&[(3, Case::I)]);
        let s = g.simple_gens();
        assert_eq!(s.len(), 2);
        assert_eq!(g.coxeter_order(&s[0], &s[1]), 3);

        // Generators in different blocks commute.
        let g = shapes(&[(2, Case::I), (1, Case::III)]);
        let s = g.simple_gens();
        assert_eq!(s.len(), 2);
        assert_eq!(g.coxeter_order(&s[0], &s[1]), 2);
    }

    #[test]
    fn group_orders_by_enumeration() {
        assert_eq!(shapes(&[(3, Case::I)]).enumerate().len(), 6);
        assert_eq!(shapes(&[(2, Case::II)]).enumerate().len(), 4);
        assert_eq!(shapes(&[(3, Case::II)]).enumerate().len(), 24);
        assert_eq!(shapes(&[(3, Case::IIb)]).enumerate().len(), 24);
        assert_eq!(shapes(&[(2, Case::III)]).enumerate().len(), 8);
        assert_eq!(shapes(&[(1, Case::III)]).enumerate().len(), 2);
        assert_eq!(shapes(&[(1, Case::II)]).enumerate().len(), 1);
        assert_eq!(shapes(&[(2, Case::I), (1, Case::III)]).enumerate().len(), 4);
    }

    #[test]
    fn membership_per_case() {
        let g = shapes(&[(2, Case::I), (2, Case::II), (2, Case::III)]);
        let mut w = g.identity();
        assert!(g.contains(&w));
        // A flip in the case-I block leaves the group.
        w.blocks[0] = BlockSignedPerm::last_flip(2);
        assert!(!g.contains(&w));
        // A single flip in the case-II block leaves W° (but not the group).
        let mut w = g.identity();
        w.blocks[1] = BlockSignedPerm::last_flip(2);
        assert!(!g.contains(&w));
        // A double flip is inside.
        w.blocks[1] = BlockSignedPerm::neg_transposition(2);
        assert!(g.contains(&w));
        // Case III takes anything.
        let mut w = g.identity();
        w.blocks[2] = BlockSignedPerm::last_flip(2);
        assert!(g.contains(&w));
    }

    #[test]
    fn decomposition_splits_off_r() {
        let g = shapes(&[(2, Case::II)]);
        // A flip at the second coordinate is exactly r.
        let mut u = g.identity();
        u.blocks[0] = BlockSignedPerm::last_flip(2);
        let (r, w) = g.decompose(&u).unwrap();
        assert!(r.contains(0));
        assert!(w.is_identity());

        // A flip at the first coordinate: r times the double flip.
        let mut u = g.identity();
        u.blocks[0] = BlockSignedPerm::from_images(&[(0, true), (1, false)]);
        let (r, w) = g.decompose(&u).unwrap();
        assert!(r.contains(0));
        assert_eq!(w.blocks[0], BlockSignedPerm::from_images(&[(0, true), (1, true)]));
        // Consistency: u = r_ambient * w.
        assert_eq!(g.r_elem_ambient(&r).mul(&w), u);

        // Case IIb rejects odd sign counts.
        let g = shapes(&[(2, Case::IIb)]);
        let mut u = g.identity();
        u.blocks[0] = BlockSignedPerm::last_flip(2);
        assert!(matches!(g.decompose(&u), Err(WeylError::NotInGroup { .. })));

        // Case I rejects any sign.
        let g = shapes(&[(1, Case::I)]);
        let mut u = g.identity();
        u.blocks[0] = BlockSignedPerm::last_flip(1);
        assert!(g.decompose(&u).is_err());
    }

    #[test]
    fn r_group_enumeration() {
        let g = shapes(&[(2, Case::II), (1, Case::III), (2, Case::II), (2, Case::IIb)]);
        assert_eq!(g.r_blocks(), vec![0, 2]);
        assert_eq!(g.r_elements().len(), 4);
    }

    #[test]
    fn conjugation_swaps_the_wall_generators()
    {
        let g = shapes(&[(2, Case::II), (3, Case::II)]);
        let r = RElem::from_blocks([0]);
        let s11 = SimpleGen { block: 0, j: 1 };
        let s12 = SimpleGen { block: 0, j: 2 };
        let s21 = SimpleGen { block: 1, j: 1 };
        assert_eq!(g.conjugate_gen(&r, &s11), s12);
        assert_eq!(g.conjugate_gen(&r, &s12), s11);
        assert_eq!(g.conjugate_gen(&r, &s21), s21);

        // The index-level swap agrees with ambient conjugation.
        for s in g.simple_gens() {
            for r in g.r_elements() {
                let lhs = g.gen_elem(&g.conjugate_gen(&r, &s));
                let rhs = g.conjugate_by_r(&r, &g.gen_elem(&s));
                assert_eq!(lhs, rhs, "r = {}, s = {}", r, s);
            }
        }
    }

    #[test]
    fn r_law_is_symmetric_difference() {
        let a = RElem::from_blocks([0, 2]);
        let b = RElem::from_blocks([2, 5]);
        assert_eq!(a.symm_diff(&b), RElem::from_blocks([0, 5]));
        assert_eq!(a.intersection(&b), vec![2]);
        assert!(a.symm_diff(&a).is_empty());
    }

    fn arb_signed_perm(d: usize) -> impl Strategy<Value = BlockSignedPerm> {
        (
            Just((0..d).collect::<Vec<usize>>()).prop_shuffle(),
            proptest::collection::vec(any::<bool>(), d),
        )
            .prop_map(|(perm, sign)| BlockSignedPerm {
                perm,
                sign,
            })
    }

    proptest! {
        #[test]
        fn composition_is_associative(
            a in arb_signed_perm(4),
            b in arb_signed_perm(4),
            c in arb_signed_perm(4),
        ) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn inverse_law(a in arb_signed_perm(5)) {
            prop_assert!(a.mul(&a.inv()).is_identity());
            prop_assert!(a.inv().mul(&a).is_identity());
        }

        #[test]
        fn action_is_a_homomorphism(
            a in arb_signed_perm(4),
            b in arb_signed_perm(4),
            exps in proptest::collection::vec(-4i32..5, 4),
        ) {
            let via_product = a.mul(&b).act_exps(&exps);
            let stepwise = a.act_exps(&b.act_exps(&exps));
            prop_assert_eq!(via_product, stepwise);
        }
    }
}
