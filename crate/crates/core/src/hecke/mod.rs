//! The intertwining algebra of an induced cuspidal family, presented as an
//! affine Hecke algebra with explicitly computed parameters.
//!
//! Basis symbols have the shape `phi_chi * J_r * T_w`:
//!
//! * `phi_chi` ranges over the characters of the finite stabilizer attached
//!   to the support ([`StabChar`]),
//! * `J_r` over the elementary abelian sign part ([`RElem`]),
//! * `T_w` over the Coxeter part of the finite acting group ([`WeylElem`]).
//!
//! Coefficients live in the fraction field of the lattice algebra `B`: Laurent
//! polynomials in one invertible variable per lattice coordinate, with
//! coefficients that are themselves Laurent polynomials in the square root `v`
//! of the residue cardinality `q` over a cyclotomic field ([`BFrac`]).
//!
//! A product of two normal forms is rewritten back to a normal form by moving
//! everything leftward across the basis symbols:
//!
//! 1. lattice coefficients cross `T_w` one simple reflection at a time, each
//!    step paying a Bernstein–Lusztig correction attached to the wall;
//! 2. they cross `J_r` by the sign action on the lattice, and `phi_chi` by a
//!    root-of-unity scalar per monomial;
//! 3. `phi` symbols merge by the character group law and commute with `J` and
//!    `T`;
//! 4. `J` symbols merge by symmetric difference, producing the square scalar
//!    on the overlap and conjugating the simple reflections they cross;
//! 5. `T_w * T_s` merges by the length-sensitive Iwahori rule.
//!
//! All arithmetic is exact.  Inputs whose coefficients are supported on the
//! sublattice of block-order multiples keep Laurent-polynomial coefficients
//! under every operation; general lattice monomials can force genuine rational
//! functions, which the algebra carries faithfully and reports through
//! [`HeckeElem::coefficients_mode`] rather than clearing denominators.

pub mod groupalg;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{rat, BFrac, BMonomial, BPoly, CycScalar, VLaurent};
use crate::langlands::ClassifiedBlock;
use crate::rootdatum::{build_root_datum, BasedRootDatum, DenominatorKind};
use crate::weyl::{RElem, SimpleGen, WeylElem};

/// Largest stabilizer order for which full character sums (projections,
/// character enumeration) are attempted.
const MAX_STABILIZER_ORDER: usize = 4096;

/// A character of the finite stabilizer of the support.
///
/// The stabilizer is a product of cyclic groups, one of order `t_c` per
/// lattice coordinate `c` (coordinates of one block share the block's order).
/// A character is stored as one residue modulo `t_c` per coordinate; its
/// value on a lattice monomial is a root of unity of order dividing the
/// least common multiple of the `t_c`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StabChar {
    residues: Vec<u32>,
}

impl StabChar {
    /// The trivial character.
    pub fn trivial(rank: usize) -> StabChar {
        StabChar {
            residues: vec![0; rank],
        }
    }

    /// Build a character from integer residues, reducing each one modulo the
    /// order of its coordinate.
    pub fn new(residues: &[i64], moduli: &[u32]) -> StabChar {
        assert_eq!(residues.len(), moduli.len());
        StabChar {
            residues: residues
                .iter()
                .zip(moduli)
                .map(|(r, t)| r.rem_euclid(i64::from(*t)) as u32)
                .collect(),
        }
    }

    pub fn residues(&self) -> &[u32] {
        &self.residues
    }

    pub fn is_trivial(&self) -> bool {
        self.residues.iter().all(|r| *r == 0)
    }

    /// Pointwise product of characters.
    pub fn add(&self, other: &StabChar, moduli: &[u32]) -> StabChar {
        assert_eq!(self.residues.len(), other.residues.len());
        StabChar {
            residues: self
                .residues
                .iter()
                .zip(&other.residues)
                .zip(moduli)
                .map(|((a, b), t)| (a + b) % t.max(&1))
                .collect(),
        }
    }

    /// The inverse character.
    pub fn neg(&self, moduli: &[u32]) -> StabChar {
        StabChar {
            residues: self
                .residues
                .iter()
                .zip(moduli)
                .map(|(a, t)| if *a == 0 { 0 } else { t - a })
                .collect(),
        }
    }

    /// Value on an exponent vector, as a root of unity of order dividing the
    /// conductor.
    pub fn value_exps(&self, exps: &[i32], moduli: &[u32], conductor: u32) -> CycScalar {
        assert_eq!(exps.len(), self.residues.len());
        let n = i64::from(conductor);
        let mut total: i64 = 0;
        for ((r, t), e) in self.residues.iter().zip(moduli).zip(exps) {
            let weight = n / i64::from(*t);
            total = (total + weight * i64::from(*r) % n * i64::from(*e)) % n;
        }
        CycScalar::zeta_pow(conductor, total)
    }

    /// Value on a lattice monomial.
    pub fn value(&self, m: &BMonomial, moduli: &[u32], conductor: u32) -> CycScalar {
        self.value_exps(m.exps(), moduli, conductor)
    }
}

impl fmt::Display for StabChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
        write!(f, "phi[{}]", parts.join(","))
    }
}

/// One basis symbol `phi_chi * J_r * T_w`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BasisKey {
    pub chi: StabChar,
    pub r: RElem,
    pub w: WeylElem,
}

/// How tame the coefficients of an element are.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientsMode {
    /// Every coefficient is a Laurent polynomial supported on the sublattice
    /// of block-order multiples.  All operations between such elements stay
    /// in this class.
    SublatticePolynomial,
    /// Every coefficient is a Laurent polynomial, but some monomial leaves
    /// the sublattice.
    LaurentPolynomial,
    /// Some coefficient is a genuine ratio of Laurent polynomials.
    Rational,
}

impl fmt::Display for CoefficientsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CoefficientsMode::SublatticePolynomial => "sublattice-polynomial",
            CoefficientsMode::LaurentPolynomial => "polynomial",
            CoefficientsMode::Rational => "rational",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum HeckeError {
    #[error("expected {expected} lattice coordinates, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("block-index entry {value} at coordinate {coordinate} must lie in 1..={order}")]
    BadBlockIndex {
        coordinate: usize,
        value: u32,
        order: u32,
    },
    #[error("block {block} carries no sign-part involution")]
    NoSignPart { block: usize },
    #[error("unknown simple generator {gen}")]
    UnknownGenerator { gen: String },
    #[error("the element lies outside the Coxeter part of the finite group")]
    NotInCoxeterPart,
    #[error("coefficient of {term} is not a Laurent polynomial; the element cannot be specialized")]
    NotSpecializable { term: String },
    #[error("the stabilizer has order {order}, too large for a full character sum")]
    StabilizerTooLarge { order: usize },
    #[error("j-square list has {found} entries for {expected} blocks")]
    JSquareLength { expected: usize, found: usize },
    #[error("the j-square scalar of block {block} must be nonzero")]
    JSquareZero { block: usize },
}

/// Everything one wall (simple generator) contributes to the rewriting:
/// its parameter, its reflection, and the pieces of the correction function.
#[derive(Clone, Debug)]
struct WallData {
    gen: SimpleGen,
    elem: WeylElem,
    /// The parameter `q_s`.
    q: VLaurent,
    q_minus_one: VLaurent,
    kind: DenominatorKind,
    /// The monomial `X` of the wall: the scaled wall vector.
    x_mono: BMonomial,
    /// The primitive (unscaled) wall vector.
    primitive: Vec<i32>,
    /// Order of the block owning the wall.
    t: u32,
    /// `A - B` for the split numerator.
    split_diff: Option<VLaurent>,
    /// Numerator of the correction function `f_s`.
    f_num: BPoly,
    /// Denominator of the correction function `f_s`.
    f_den: BPoly,
}

/// Shared immutable data of one algebra: the based root datum, the block
/// orders, the square scalars of the sign part, and per-wall caches.
#[derive(Clone, Debug)]
pub struct AlgebraCtx {
    datum: BasedRootDatum,
    /// Block order of every flat lattice coordinate.
    ts_flat: Vec<u32>,
    /// Least common multiple of the block orders.
    conductor: u32,
    /// Square scalar of each block's sign-part generator (meaningful for the
    /// blocks that have one; `1` by default).
    j_square: Vec<VLaurent>,
    walls: Vec<WallData>,
}

impl AlgebraCtx {
    /// Build the algebra of a classified support with all square scalars `1`.
    pub fn new(blocks: &[ClassifiedBlock]) -> Arc<AlgebraCtx> {
        let ones = vec![VLaurent::one(); blocks.len()];
        AlgebraCtx::with_j_square(blocks, ones).expect("unit scalars are valid")
    }

    /// Build the algebra with explicit square scalars for the sign-part
    /// generators, one per block.
    pub fn with_j_square(
        blocks: &[ClassifiedBlock],
        j_square: Vec<VLaurent>,
    ) -> Result<Arc<AlgebraCtx>, HeckeError> {
        if j_square.len() != blocks.len() {
            return Err(HeckeError::JSquareLength {
                expected: blocks.len(),
                found: j_square.len(),
            });
        }
        if let Some(block) = j_square.iter().position(VLaurent::is_zero) {
            return Err(HeckeError::JSquareZero { block });
        }
        let datum = build_root_datum(blocks);
        let mut ts_flat = Vec::new();
        for b in blocks {
            ts_flat.extend(std::iter::repeat_n(b.t, b.d as usize));
        }
        let conductor = blocks.iter().fold(1u32, |n, b| n.lcm(&b.t));
        let rank = ts_flat.len();
        let walls = datum
            .walls
            .iter()
            .zip(&datum.simple_roots)
            .map(|(wall, root)| {
                let q = VLaurent::v_pow(wall.quad_v_exponent);
                let q_minus_one = q.sub(&VLaurent::one());
                let x_mono = BMonomial::from_exps(root.clone());
                let split_diff = wall
                    .split_v_exponents
                    .map(|(a, b)| VLaurent::v_pow(a).sub(&VLaurent::v_pow(b)));
                let (f_num, f_den) = match wall.kind {
                    DenominatorKind::Simple => (
                        BPoly::constant(rank, q_minus_one.clone()),
                        BPoly::one(rank).sub(&BPoly::monomial(x_mono.inverse())),
                    ),
                    DenominatorKind::SplitQuadratic => (
                        BPoly::constant(rank, q_minus_one.clone()).add(&BPoly::term(
                            x_mono.inverse(),
                            split_diff.clone().expect("split walls carry (A, B)"),
                        )),
                        BPoly::one(rank).sub(&BPoly::monomial(x_mono.pow(-2))),
                    ),
                };
                WallData {
                    gen: wall.gen,
                    elem: datum.group.gen_elem(&wall.gen),
                    q,
                    q_minus_one,
                    kind: wall.kind,
                    x_mono,
                    primitive: wall.wall_vector.clone(),
                    t: datum.ts[wall.gen.block],
                    split_diff,
                    f_num,
                    f_den,
                }
            })
            .collect();
        Ok(Arc::new(AlgebraCtx {
            datum,
            ts_flat,
            conductor,
            j_square,
            walls,
        }))
    }

    pub fn rank(&self) -> usize {
        self.ts_flat.len()
    }

    pub fn datum(&self) -> &BasedRootDatum {
        &self.datum
    }

    pub fn ts_flat(&self) -> &[u32] {
        &self.ts_flat
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn j_square(&self) -> &[VLaurent] {
        &self.j_square
    }

    pub fn wall_count(&self) -> usize {
        self.walls.len()
    }

    pub fn wall_gen(&self, wall: usize) -> SimpleGen {
        self.walls[wall].gen
    }

    /// The parameter `q_s` of a wall.
    pub fn wall_q(&self, wall: usize) -> &VLaurent {
        &self.walls[wall].q
    }

    /// Index of a simple generator among the walls.
    pub fn gen_index(&self, s: &SimpleGen) -> Option<usize> {
        self.walls.iter().position(|w| w.gen == *s)
    }

    /// Whether a monomial lies on the sublattice of block-order multiples.
    pub fn in_sublattice(&self, m: &BMonomial) -> bool {
        m.in_sublattice(&self.ts_flat)
    }

    /// Build a character from integer residues (reduced per coordinate).
    pub fn character(&self, residues: &[i64]) -> Result<StabChar, HeckeError> {
        if residues.len() != self.rank() {
            return Err(HeckeError::RankMismatch {
                expected: self.rank(),
                found: residues.len(),
            });
        }
        Ok(StabChar::new(residues, &self.ts_flat))
    }

    /// The order of the stabilizer, if it fits in a `usize`.
    pub fn stabilizer_order(&self) -> Option<usize> {
        self.ts_flat
            .iter()
            .try_fold(1usize, |n, t| n.checked_mul(*t as usize))
    }

    /// Enumerate all characters of the stabilizer.
    pub fn characters(&self) -> Result<Vec<StabChar>, HeckeError> {
        let order = self
            .stabilizer_order()
            .filter(|o| *o <= MAX_STABILIZER_ORDER)
            .ok_or_else(|| HeckeError::StabilizerTooLarge {
                order: self.stabilizer_order().unwrap_or(usize::MAX),
            })?;
        let mut out = Vec::with_capacity(order);
        let mut counter = vec![0u32; self.rank()];
        loop {
            out.push(StabChar {
                residues: counter.clone(),
            });
            let mut k = 0;
            loop {
                if k == counter.len() {
                    return Ok(out);
                }
                counter[k] += 1;
                if counter[k] < self.ts_flat[k].max(1) {
                    break;
                }
                counter[k] = 0;
                k += 1;
            }
        }
    }

    /// The correction picked up when a single lattice monomial crosses the
    /// generator of a wall:
    ///
    /// `b_m T_s - T_s b_{s(m)} = f_s (b_m - b_{s(m)})`.
    ///
    /// Whenever the exponent of the wall monomial `X` in `b_m / b_{s(m)}` is
    /// integral (always the case on the sublattice of block-order multiples),
    /// the quotient by the denominator is carried out in closed form as a
    /// geometric sum and the result is a Laurent polynomial; otherwise the
    /// correction is returned as an explicit fraction.
    pub fn wall_correction(&self, wall: usize, m: &BMonomial) -> BFrac {
        let wd = &self.walls[wall];
        let rank = self.rank();
        let sm = wd.elem.act_monomial(m);
        if sm == *m {
            return BFrac::zero(rank);
        }
        let k = wd
            .primitive
            .iter()
            .position(|&c| c != 0)
            .expect("wall vectors are nonzero");
        let t = i64::from(wd.t);
        match wd.kind {
            DenominatorKind::Simple => {
                let gamma = i64::from(m.exp(k) - sm.exp(k)) / i64::from(wd.primitive[k]);
                debug_assert!((0..rank).all(|c| {
                    i64::from(m.exp(c) - sm.exp(c)) == gamma * i64::from(wd.primitive[c])
                }));
                if gamma % t == 0 {
                    let series = geometric_sum(&wd.x_mono, gamma / t);
                    BFrac::from_poly(series.mul_mono(&sm).scale(&wd.q_minus_one))
                } else {
                    let diff = BPoly::monomial(m.clone()).sub(&BPoly::monomial(sm));
                    BFrac::new(diff.scale(&wd.q_minus_one), wd.f_den.clone())
                }
            }
            DenominatorKind::SplitQuadratic => {
                let lambda = i64::from(m.exp(k));
                if lambda % t == 0 {
                    let series = geometric_sum(&wd.x_mono.pow(2), lambda / t);
                    let shifted = series.mul_mono(&wd.x_mono.inverse());
                    let num = series.scale(&wd.q_minus_one).add(
                        &shifted.scale(wd.split_diff.as_ref().expect("split walls carry (A, B)")),
                    );
                    BFrac::from_poly(num.mul_mono(&sm))
                } else {
                    let diff = BPoly::monomial(m.clone()).sub(&BPoly::monomial(sm));
                    BFrac::new(wd.f_num.mul(&diff), wd.f_den.clone())
                }
            }
        }
    }

    /// The correction function `f_s` of a wall, as an explicit fraction.
    pub fn correction_function(&self, wall: usize) -> BFrac {
        let wd = &self.walls[wall];
        BFrac::new(wd.f_num.clone(), wd.f_den.clone())
    }

    /// The correction picked up by a whole coefficient crossing a wall:
    /// `f_s (c - s(c))`, computed monomial by monomial when `c` is a Laurent
    /// polynomial and by fraction arithmetic otherwise.
    fn coefficient_correction(&self, wall: usize, c: &BFrac) -> BFrac {
        if let Some(p) = c.as_polynomial() {
            let mut acc = BFrac::zero(self.rank());
            for (m, coeff) in p.terms() {
                let corr = self.wall_correction(wall, m);
                if !corr.is_zero() {
                    acc = acc.add(&corr.scale(coeff));
                }
            }
            acc
        } else {
            let wd = &self.walls[wall];
            let f = self.correction_function(wall);
            let sc = c.map_monomials(|m| wd.elem.act_monomial(m));
            f.mul(&c.sub(&sc))
        }
    }

    /// The data of the specialized algebra at `q = 1`.
    pub fn degeneration(&self) -> Arc<groupalg::DegenerationCtx> {
        let one = CycScalar::one();
        Arc::new(groupalg::DegenerationCtx {
            dims: self.datum.dims.clone(),
            ts_flat: self.ts_flat.clone(),
            conductor: self.conductor,
            j_square: self
                .j_square
                .iter()
                .map(|c| c.eval(&one).expect("evaluation at 1 always converges"))
                .collect(),
        })
    }
}

/// `(X^tau - 1) / (1 - X^{-1})` as a Laurent polynomial, for a monomial `X`.
fn geometric_sum(step: &BMonomial, tau: i64) -> BPoly {
    let mut out = BPoly::zero(step.rank());
    if tau >= 0 {
        for i in 1..=tau {
            out = out.add(&BPoly::monomial(step.pow(i as i32)));
        }
    } else {
        for i in 0..-tau {
            out = out.sub(&BPoly::monomial(step.pow(-(i as i32))));
        }
    }
    out
}

/// An element of the algebra: a finite sum of basis symbols with coefficients
/// in the fraction field of the lattice algebra.  Zero coefficients are never
/// stored.
#[derive(Clone, Debug)]
pub struct HeckeElem {
    ctx: Arc<AlgebraCtx>,
    terms: BTreeMap<BasisKey, BFrac>,
}

impl PartialEq for HeckeElem {
    fn eq(&self, other: &HeckeElem) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl HeckeElem {
    pub fn zero(ctx: &Arc<AlgebraCtx>) -> HeckeElem {
        HeckeElem {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<AlgebraCtx>) -> HeckeElem {
        HeckeElem::from_coefficient(ctx, BFrac::one(ctx.rank())).expect("rank matches")
    }

    fn trivial_key(ctx: &AlgebraCtx) -> BasisKey {
        BasisKey {
            chi: StabChar::trivial(ctx.rank()),
            r: RElem::empty(),
            w: ctx.datum.group.identity(),
        }
    }

    /// A pure coefficient (multiple of the identity).
    pub fn from_coefficient(ctx: &Arc<AlgebraCtx>, c: BFrac) -> Result<HeckeElem, HeckeError> {
        if c.rank() != ctx.rank() {
            return Err(HeckeError::RankMismatch {
                expected: ctx.rank(),
                found: c.rank(),
            });
        }
        let mut out = HeckeElem::zero(ctx);
        out.add_term(HeckeElem::trivial_key(ctx), c);
        Ok(out)
    }

    /// The invertible lattice element with the given exponents.
    pub fn b_monomial(ctx: &Arc<AlgebraCtx>, exps: &[i32]) -> Result<HeckeElem, HeckeError> {
        if exps.len() != ctx.rank() {
            return Err(HeckeError::RankMismatch {
                expected: ctx.rank(),
                found: exps.len(),
            });
        }
        let m = BMonomial::from_exps(exps.to_vec());
        HeckeElem::from_coefficient(ctx, BFrac::from_poly(BPoly::monomial(m)))
    }

    /// The basis symbol of a stabilizer character.
    pub fn phi(ctx: &Arc<AlgebraCtx>, chi: &StabChar) -> Result<HeckeElem, HeckeError> {
        if chi.residues().len() != ctx.rank() {
            return Err(HeckeError::RankMismatch {
                expected: ctx.rank(),
                found: chi.residues().len(),
            });
        }
        let mut out = HeckeElem::zero(ctx);
        out.add_term(
            BasisKey {
                chi: chi.clone(),
                r: RElem::empty(),
                w: ctx.datum.group.identity(),
            },
            BFrac::one(ctx.rank()),
        );
        Ok(out)
    }

    /// The basis symbol of a sign-part element.
    pub fn j_elem(ctx: &Arc<AlgebraCtx>, r: &RElem) -> Result<HeckeElem, HeckeError> {
        let allowed = ctx.datum.group.r_blocks();
        for b in r.blocks() {
            if !allowed.contains(&b) {
                return Err(HeckeError::NoSignPart { block: b });
            }
        }
        let mut out = HeckeElem::zero(ctx);
        out.add_term(
            BasisKey {
                chi: StabChar::trivial(ctx.rank()),
                r: r.clone(),
                w: ctx.datum.group.identity(),
            },
            BFrac::one(ctx.rank()),
        );
        Ok(out)
    }

    /// The standard generator attached to a simple reflection.
    pub fn t_gen(ctx: &Arc<AlgebraCtx>, s: &SimpleGen) -> Result<HeckeElem, HeckeError> {
        let wall = ctx
            .gen_index(s)
            .ok_or_else(|| HeckeError::UnknownGenerator { gen: s.to_string() })?;
        let mut out = HeckeElem::zero(ctx);
        out.add_term(
            BasisKey {
                chi: StabChar::trivial(ctx.rank()),
                r: RElem::empty(),
                w: ctx.walls[wall].elem.clone(),
            },
            BFrac::one(ctx.rank()),
        );
        Ok(out)
    }

    /// The basis symbol `T_w` of an element of the Coxeter part.
    pub fn t_word(ctx: &Arc<AlgebraCtx>, w: &WeylElem) -> Result<HeckeElem, HeckeError> {
        if w.rank() != ctx.rank() {
            return Err(HeckeError::RankMismatch {
                expected: ctx.rank(),
                found: w.rank(),
            });
        }
        if ctx.datum.reduced_word(w).is_err() {
            return Err(HeckeError::NotInCoxeterPart);
        }
        let mut out = HeckeElem::zero(ctx);
        out.add_term(
            BasisKey {
                chi: StabChar::trivial(ctx.rank()),
                r: RElem::empty(),
                w: w.clone(),
            },
            BFrac::one(ctx.rank()),
        );
        Ok(out)
    }

    /// The central idempotent cutting out one graded piece of the induced
    /// family.  `index` picks a residue in `1..=t_c` for every coordinate;
    /// the projection is the normalized character sum over the stabilizer.
    pub fn block_projection(ctx: &Arc<AlgebraCtx>, index: &[u32]) -> Result<HeckeElem, HeckeError> {
        if index.len() != ctx.rank() {
            return Err(HeckeError::RankMismatch {
                expected: ctx.rank(),
                found: index.len(),
            });
        }
        for (c, (j, t)) in index.iter().zip(&ctx.ts_flat).enumerate() {
            if *j < 1 || j > t {
                return Err(HeckeError::BadBlockIndex {
                    coordinate: c,
                    value: *j,
                    order: *t,
                });
            }
        }
        let chars = ctx.characters()?;
        let inv_order = CycScalar::from_rational(rat(1, chars.len() as i64));
        let exps: Vec<i32> = index.iter().map(|j| *j as i32).collect();
        let mut out = HeckeElem::zero(ctx);
        for chi in chars {
            let val = chi
                .value_exps(&exps, &ctx.ts_flat, ctx.conductor)
                .inv()
                .expect("roots of unity are invertible");
            let coeff = BFrac::from_poly(BPoly::scalar(ctx.rank(), val.mul(&inv_order)));
            out.add_term(
                BasisKey {
                    chi,
                    r: RElem::empty(),
                    w: ctx.datum.group.identity(),
                },
                coeff,
            );
        }
        Ok(out)
    }

    pub fn ctx(&self) -> &Arc<AlgebraCtx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKey, &BFrac)> {
        self.terms.iter()
    }

    pub fn coefficient_of(&self, key: &BasisKey) -> Option<&BFrac> {
        self.terms.get(key)
    }

    fn add_term(&mut self, key: BasisKey, c: BFrac) {
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

    pub fn add(&self, other: &HeckeElem) -> HeckeElem {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx),
            "operands belong to different algebra contexts"
        );
        let mut out = self.clone();
        for (key, c) in &other.terms {
            out.add_term(key.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &HeckeElem) -> HeckeElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HeckeElem {
        HeckeElem {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }

    /// Multiply every coefficient by a fixed fraction.
    pub fn scale(&self, c: &BFrac) -> HeckeElem {
        let mut out = HeckeElem::zero(&self.ctx);
        for (key, coeff) in &self.terms {
            out.add_term(key.clone(), coeff.mul(c));
        }
        out
    }

    pub fn scale_laurent(&self, c: &VLaurent) -> HeckeElem {
        self.scale(&BFrac::from_poly(BPoly::constant(self.ctx.rank(), c.clone())))
    }

    pub fn scale_scalar(&self, c: &CycScalar) -> HeckeElem {
        self.scale(&BFrac::from_poly(BPoly::scalar(self.ctx.rank(), c.clone())))
    }

    /// Left multiplication by the generator of a wall: distributes the
    /// Bernstein–Lusztig move over every stored term.
    fn lmul_gen(&self, wall: usize) -> HeckeElem {
        let ctx = &self.ctx;
        let wd = &ctx.walls[wall];
        let mut out = HeckeElem::zero(ctx);
        for (key, c) in &self.terms {
            let corr = ctx.coefficient_correction(wall, c);
            if !corr.is_zero() {
                out.add_term(key.clone(), corr);
            }
            let twisted = c.map_monomials(|m| wd.elem.act_monomial(m));
            let s2 = ctx.datum.group.conjugate_gen(&key.r, &wd.gen);
            let wall2 = ctx.gen_index(&s2).expect("conjugated generators are walls");
            let wd2 = &ctx.walls[wall2];
            let sw = wd2.elem.mul(&key.w);
            if ctx.datum.length(&sw) > ctx.datum.length(&key.w) {
                out.add_term(
                    BasisKey {
                        chi: key.chi.clone(),
                        r: key.r.clone(),
                        w: sw,
                    },
                    twisted,
                );
            } else {
                out.add_term(
                    BasisKey {
                        chi: key.chi.clone(),
                        r: key.r.clone(),
                        w: sw,
                    },
                    twisted.scale(&wd2.q),
                );
                out.add_term(key.clone(), twisted.scale(&wd2.q_minus_one));
            }
        }
        out
    }

    /// Left multiplication by a sign-part symbol.
    fn lmul_j(&self, r1: &RElem) -> HeckeElem {
        let ctx = &self.ctx;
        let amb = ctx.datum.group.r_elem_ambient(r1);
        let mut out = HeckeElem::zero(ctx);
        for (key, c) in &self.terms {
            let mut coeff = c.map_monomials(|m| amb.act_monomial(m));
            for b in r1.intersection(&key.r) {
                coeff = coeff.scale(&ctx.j_square[b]);
            }
            out.add_term(
                BasisKey {
                    chi: key.chi.clone(),
                    r: r1.symm_diff(&key.r),
                    w: key.w.clone(),
                },
                coeff,
            );
        }
        out
    }

    /// Left multiplication by a character symbol.
    fn lmul_phi(&self, chi1: &StabChar) -> HeckeElem {
        let ctx = &self.ctx;
        let mut out = HeckeElem::zero(ctx);
        for (key, c) in &self.terms {
            let coeff = c.twist(|m| chi1.value(m, &ctx.ts_flat, ctx.conductor));
            out.add_term(
                BasisKey {
                    chi: chi1.add(&key.chi, &ctx.ts_flat),
                    r: key.r.clone(),
                    w: key.w.clone(),
                },
                coeff,
            );
        }
        out
    }

    /// The product, rewritten to normal form.
    pub fn mul(&self, other: &HeckeElem) -> HeckeElem {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx),
            "operands belong to different algebra contexts"
        );
        let ctx = &self.ctx;
        let mut acc = HeckeElem::zero(ctx);
        for (key, c) in &self.terms {
            let word = ctx
                .datum
                .reduced_word(&key.w)
                .expect("basis keys lie in the Coxeter part");
            let mut z = other.clone();
            for s in word.iter().rev() {
                let wall = ctx.gen_index(s).expect("reduced words use the walls");
                z = z.lmul_gen(wall);
            }
            if !key.r.is_empty() {
                z = z.lmul_j(&key.r);
            }
            if !key.chi.is_trivial() {
                z = z.lmul_phi(&key.chi);
            }
            acc = acc.add(&z.scale(c));
        }
        acc
    }

    /// Classify the coefficients of the element.
    pub fn coefficients_mode(&self) -> CoefficientsMode {
        let mut sublattice = true;
        for c in self.terms.values() {
            match c.as_polynomial() {
                Some(p) => {
                    if !p.supported_in_sublattice(&self.ctx.ts_flat) {
                        sublattice = false;
                    }
                }
                None => return CoefficientsMode::Rational,
            }
        }
        if sublattice {
            CoefficientsMode::SublatticePolynomial
        } else {
            CoefficientsMode::LaurentPolynomial
        }
    }

    /// Specialize `q -> 1`, landing in the twisted group algebra of the
    /// lattice extended by the finite group.  Fails if any coefficient is a
    /// genuine fraction.
    pub fn specialize_q1(&self) -> Result<groupalg::GroupAlgElem, HeckeError> {
        let dctx = self.ctx.degeneration();
        let mut out = groupalg::GroupAlgElem::zero(&dctx);
        for (key, c) in &self.terms {
            let p = c
                .as_polynomial()
                .ok_or_else(|| HeckeError::NotSpecializable {
                    term: self.render_term(key, c),
                })?;
            for (m, scalar) in p.specialize_v_one() {
                out.insert(
                    groupalg::GroupKey {
                        monomial: m,
                        chi: key.chi.clone(),
                        r: key.r.clone(),
                        w: key.w.clone(),
                    },
                    scalar,
                );
            }
        }
        Ok(out)
    }

    /// The terms in display order: by character, then sign part, then length
    /// and reduced word of the Coxeter part.
    pub fn sorted_terms(&self) -> Vec<(&BasisKey, &BFrac)> {
        let mut items: Vec<(&BasisKey, &BFrac)> = self.terms.iter().collect();
        items.sort_by_cached_key(|(key, _)| {
            let word = self
                .ctx
                .datum
                .reduced_word(&key.w)
                .expect("basis keys lie in the Coxeter part");
            (
                key.chi.residues().to_vec(),
                key.r.clone(),
                word.len(),
                word.iter().map(|s| (s.block, s.j)).collect::<Vec<_>>(),
            )
        });
        items
    }

    fn render_term(&self, key: &BasisKey, c: &BFrac) -> String {
        let mut basis = Vec::new();
        if !key.chi.is_trivial() {
            basis.push(key.chi.to_string());
        }
        if !key.r.is_empty() {
            let blocks: Vec<String> = key.r.blocks().map(|b| (b + 1).to_string()).collect();
            basis.push(format!("J[{}]", blocks.join(",")));
        }
        if !key.w.is_identity() {
            let word = self
                .ctx
                .datum
                .reduced_word(&key.w)
                .expect("basis keys lie in the Coxeter part");
            let gens: Vec<String> = word.iter().map(|s| s.to_string()).collect();
            basis.push(format!("T[{}]", gens.join(" ")));
        }
        let basis_str = if basis.is_empty() {
            "1".to_string()
        } else {
            basis.join("*")
        };
        if c.is_one() {
            return basis_str;
        }
        let coeff = match c.as_polynomial() {
            Some(p) if p.num_terms() > 1 => format!("({})", p.render_b()),
            Some(p) => p.render_b(),
            None => format!("({})/({})", c.num().render_b(), c.den().render_b()),
        };
        if basis_str == "1" {
            coeff
        } else {
            format!("{} * {}", coeff, basis_str)
        }
    }

    /// One rendered line per basis term, in display order.
    pub fn rendered_terms(&self) -> Vec<String> {
        self.sorted_terms()
            .into_iter()
            .map(|(k, c)| self.render_term(k, c))
            .collect()
    }

    /// The whole element on one line.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.rendered_terms().join(" + ")
    }
}

impl fmt::Display for HeckeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Outcome of one family of relation checks.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// A rendering of the first failing instance, if any.
    pub witness: Option<String>,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// The full relation suite of one algebra, run with a seeded generator.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub seed: u64,
    pub sample_count: usize,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(RelationCheck::passed)
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "ok  " } else { "FAIL" };
            write!(f, "{} {:<22} {} cases", status, c.name, c.cases)?;
            if let Some(w) = &c.witness {
                write!(f, "  [{}]", w)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

struct Verifier<'a> {
    ctx: &'a Arc<AlgebraCtx>,
    rng: ChaCha8Rng,
    samples: usize,
}

impl<'a> Verifier<'a> {
    fn random_sublattice_monomial(&mut self) -> BMonomial {
        let exps = self
            .ctx
            .ts_flat()
            .iter()
            .map(|t| *t as i32 * self.rng.random_range(-3..=3))
            .collect();
        BMonomial::from_exps(exps)
    }

    fn random_lattice_monomial(&mut self) -> BMonomial {
        let exps = (0..self.ctx.rank())
            .map(|_| self.rng.random_range(-4..=4))
            .collect();
        BMonomial::from_exps(exps)
    }

    fn random_character(&mut self) -> StabChar {
        let residues: Vec<i64> = self
            .ctx
            .ts_flat()
            .iter()
            .map(|t| i64::from(self.rng.random_range(0..t.max(&1).to_owned())))
            .collect();
        StabChar::new(&residues, self.ctx.ts_flat())
    }

    fn random_sign(&mut self) -> RElem {
        let blocks: Vec<usize> = self
            .ctx
            .datum()
            .group
            .r_blocks()
            .into_iter()
            .filter(|_| self.rng.random_bool(0.5))
            .collect();
        RElem::from_blocks(blocks)
    }

    /// A random element of the Coxeter part, as a product of random walls.
    fn random_coxeter(&mut self) -> WeylElem {
        let mut w = self.ctx.datum().group.identity();
        if self.ctx.wall_count() == 0 {
            return w;
        }
        let len = self.rng.random_range(0..=(2 * self.ctx.wall_count()));
        for _ in 0..len {
            let i = self.rng.random_range(0..self.ctx.wall_count());
            w = self.ctx.walls[i].elem.mul(&w);
        }
        w
    }

    fn random_basis_elem(&mut self) -> HeckeElem {
        let chi = self.random_character();
        let r = self.random_sign();
        let w = self.random_coxeter();
        let m = self.random_sublattice_monomial();
        let coeff = BFrac::from_poly(BPoly::term(
            m,
            VLaurent::v_pow(2 * self.rng.random_range(-1..=1)),
        ));
        let mut out = HeckeElem::zero(self.ctx);
        out.add_term(BasisKey { chi, r, w }, coeff);
        out
    }

    fn check<F>(&mut self, name: &'static str, body: F) -> RelationCheck
    where
        F: FnOnce(&mut Self, &mut Tally),
    {
        let mut tally = Tally {
            cases: 0,
            failures: 0,
            witness: None,
        };
        body(self, &mut tally);
        RelationCheck {
            name,
            cases: tally.cases,
            failures: tally.failures,
            witness: tally.witness,
        }
    }
}

struct Tally {
    cases: usize,
    failures: usize,
    witness: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                let mut w = witness();
                if w.len() > 240 {
                    w.truncate(240);
                    w.push_str("...");
                }
                self.witness = Some(w);
            }
        }
    }
}

/// Check every defining relation of the presentation by exact computation.
///
/// Deterministic for a fixed `(sample_count, seed)` pair: random lattice
/// monomials, characters and group elements are drawn from a seeded stream.
pub fn verify_relations(
    ctx: &Arc<AlgebraCtx>,
    sample_count: usize,
    seed: u64,
) -> RelationReport {
    let mut v = Verifier {
        ctx,
        rng: ChaCha8Rng::seed_from_u64(seed),
        samples: sample_count,
    };
    let one = HeckeElem::one(ctx);
    let gens: Vec<HeckeElem> = (0..ctx.wall_count())
        .map(|i| HeckeElem::t_gen(ctx, &ctx.wall_gen(i)).expect("walls are generators"))
        .collect();
    let signs: Vec<RElem> = ctx.datum().group.r_elements();

    let mut checks = Vec::new();

    // (T_s + 1)(T_s - q_s) = 0 for every generator.
    checks.push(v.check("quadratic", |v, t| {
        for (i, ts) in gens.iter().enumerate() {
            let q = v.ctx.wall_q(i).clone();
            let lhs = ts.mul(ts);
            let rhs = ts
                .scale_laurent(&q.sub(&VLaurent::one()))
                .add(&one.scale_laurent(&q));
            t.record(lhs == rhs, || {
                format!("{}: {} != {}", v.ctx.wall_gen(i), lhs.render(), rhs.render())
            });
        }
    }));

    // The quadratic relation applied after a lattice element: exercises the
    // identity f_s + s(f_s) = q_s - 1 satisfied by the correction function.
    checks.push(v.check("quadratic-on-lattice", |v, t| {
        let per_wall = (v.samples / v.ctx.wall_count().max(1)).clamp(3, 25);
        for (i, ts) in gens.iter().enumerate() {
            let q = v.ctx.wall_q(i).clone();
            for _ in 0..per_wall {
                let m = v.random_sublattice_monomial();
                let bm = HeckeElem::b_monomial(v.ctx, m.exps()).expect("rank matches");
                let tb = ts.mul(&bm);
                let lhs = ts.mul(&tb);
                let rhs = tb
                    .scale_laurent(&q.sub(&VLaurent::one()))
                    .add(&bm.scale_laurent(&q));
                t.record(lhs == rhs, || {
                    format!("{} on b{:?}", v.ctx.wall_gen(i), m.exps())
                });
            }
        }
    }));

    // Braid relations, including the order-4 relation of the split walls and
    // the order-2 relations across blocks.
    checks.push(v.check("braid", |v, t| {
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                let a = v.ctx.wall_gen(i);
                let b = v.ctx.wall_gen(j);
                let m = v.ctx.datum().group.coxeter_order(&a, &b);
                let lhs = alternating_product(&gens[i], &gens[j], m);
                let rhs = alternating_product(&gens[j], &gens[i], m);
                t.record(lhs == rhs, || {
                    format!("{} {} (order {}): {} != {}", a, b, m, lhs.render(), rhs.render())
                });
            }
        }
    }));

    // The action of T_w on a lattice element does not depend on the chosen
    // reduced word of w.
    checks.push(v.check("word-independence", |v, t| {
        let group = v.ctx.datum().group.clone();
        let mut elements = group.enumerate();
        if elements.len() > 30 {
            let picks: Vec<WeylElem> = (0..12).map(|_| v.random_coxeter()).collect();
            elements = picks;
        }
        for w in &elements {
            let words = reduced_words(v.ctx, w, 24);
            if words.len() < 2 {
                continue;
            }
            let m = v.random_sublattice_monomial();
            let bm = HeckeElem::b_monomial(v.ctx, m.exps()).expect("rank matches");
            let first = fold_word(&words[0], &bm);
            for word in &words[1..] {
                let other = fold_word(word, &bm);
                t.record(first == other, || {
                    format!("two reduced words of length {} disagree", word.len())
                });
            }
        }
    }));

    // b_m T_s - T_s b_{s(m)} equals the wall correction, and stays on the
    // sublattice for sublattice monomials.
    checks.push(v.check("bernstein", |v, t| {
        for (i, ts) in gens.iter().enumerate() {
            for _ in 0..v.samples {
                let m = v.random_sublattice_monomial();
                let sm = v.ctx.walls[i].elem.act_monomial(&m);
                let bm = HeckeElem::b_monomial(v.ctx, m.exps()).expect("rank matches");
                let bsm = HeckeElem::b_monomial(v.ctx, sm.exps()).expect("rank matches");
                let lhs = bm.mul(ts).sub(&ts.mul(&bsm));
                let corr = v.ctx.wall_correction(i, &m);
                let rhs = HeckeElem::from_coefficient(v.ctx, corr).expect("rank matches");
                let ok = lhs == rhs
                    && rhs.coefficients_mode() == CoefficientsMode::SublatticePolynomial;
                t.record(ok, || {
                    format!(
                        "{} on b{:?}: {} != {}",
                        v.ctx.wall_gen(i),
                        m.exps(),
                        lhs.render(),
                        rhs.render()
                    )
                });
            }
        }
    }));

    // T_s J_r = J_r T_{r s r}.
    checks.push(v.check("sign-conjugation", |v, t| {
        for r in &signs {
            let jr = HeckeElem::j_elem(v.ctx, r).expect("sign blocks are valid");
            for (i, ts) in gens.iter().enumerate() {
                let s2 = v.ctx.datum().group.conjugate_gen(r, &v.ctx.wall_gen(i));
                let ts2 = HeckeElem::t_gen(v.ctx, &s2).expect("conjugated generators are walls");
                let lhs = ts.mul(&jr);
                let rhs = jr.mul(&ts2);
                t.record(lhs == rhs, || {
                    format!("{} vs {}: {} != {}", v.ctx.wall_gen(i), r, lhs.render(), rhs.render())
                });
            }
        }
    }));

    // J_r^2 is the product of the square scalars of the active blocks.
    checks.push(v.check("sign-square", |v, t| {
        for r in &signs {
            let jr = HeckeElem::j_elem(v.ctx, r).expect("sign blocks are valid");
            let mut scalar = VLaurent::one();
            for b in r.blocks() {
                scalar = scalar.mul(&v.ctx.j_square()[b]);
            }
            let lhs = jr.mul(&jr);
            let rhs = one.scale_laurent(&scalar);
            t.record(lhs == rhs, || format!("{}: {} != {}", r, lhs.render(), rhs.render()));
        }
    }));

    // J_r b_m = b_{r(m)} J_r on the sublattice.
    checks.push(v.check("sign-lattice", |v, t| {
        let per_sign = (v.samples / signs.len().max(1)).clamp(2, 25);
        for r in &signs {
            let jr = HeckeElem::j_elem(v.ctx, r).expect("sign blocks are valid");
            let amb = v.ctx.datum().group.r_elem_ambient(r);
            for _ in 0..per_sign {
                let m = v.random_sublattice_monomial();
                let rm = amb.act_monomial(&m);
                let bm = HeckeElem::b_monomial(v.ctx, m.exps()).expect("rank matches");
                let brm = HeckeElem::b_monomial(v.ctx, rm.exps()).expect("rank matches");
                let lhs = jr.mul(&bm);
                let rhs = brm.mul(&jr);
                t.record(lhs == rhs, || format!("{} on b{:?}", r, m.exps()));
            }
        }
    }));

    // phi_chi b_m = chi(m) b_m phi_chi on the full lattice.
    checks.push(v.check("character-lattice", |v, t| {
        for _ in 0..v.samples {
            let chi = v.random_character();
            let m = v.random_lattice_monomial();
            let phi = HeckeElem::phi(v.ctx, &chi).expect("rank matches");
            let bm = HeckeElem::b_monomial(v.ctx, m.exps()).expect("rank matches");
            let val = chi.value(&m, v.ctx.ts_flat(), v.ctx.conductor());
            let lhs = phi.mul(&bm);
            let rhs = bm.mul(&phi).scale_scalar(&val);
            t.record(lhs == rhs, || format!("{} on b{:?}", chi, m.exps()));
        }
    }));

    // phi symbols commute with the T and J symbols and multiply by the
    // character group law.
    checks.push(v.check("character-product", |v, t| {
        for _ in 0..3.max(v.samples / 20) {
            let chi = v.random_character();
            let phi = HeckeElem::phi(v.ctx, &chi).expect("rank matches");
            for ts in &gens {
                let lhs = phi.mul(ts);
                let rhs = ts.mul(&phi);
                t.record(lhs == rhs, || format!("{} vs T", chi));
            }
            for r in &signs {
                let jr = HeckeElem::j_elem(v.ctx, r).expect("sign blocks are valid");
                let lhs = phi.mul(&jr);
                let rhs = jr.mul(&phi);
                t.record(lhs == rhs, || format!("{} vs {}", chi, r));
            }
            let chi2 = v.random_character();
            let phi2 = HeckeElem::phi(v.ctx, &chi2).expect("rank matches");
            let merged = HeckeElem::phi(v.ctx, &chi.add(&chi2, v.ctx.ts_flat()))
                .expect("rank matches");
            t.record(phi.mul(&phi2) == merged, || format!("{} * {}", chi, chi2));
            t.record(phi2.mul(&phi) == merged, || format!("{} * {}", chi2, chi));
        }
    }));

    // Generators and sign symbols of distinct blocks commute.
    checks.push(v.check("cross-block", |v, t| {
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                if v.ctx.wall_gen(i).block == v.ctx.wall_gen(j).block {
                    continue;
                }
                let lhs = gens[i].mul(&gens[j]);
                let rhs = gens[j].mul(&gens[i]);
                t.record(lhs == rhs, || {
                    format!("{} vs {}", v.ctx.wall_gen(i), v.ctx.wall_gen(j))
                });
            }
        }
        for r in &signs {
            if r.is_empty() {
                continue;
            }
            let jr = HeckeElem::j_elem(v.ctx, r).expect("sign blocks are valid");
            for (i, ts) in gens.iter().enumerate() {
                if r.contains(v.ctx.wall_gen(i).block) {
                    continue;
                }
                let lhs = jr.mul(ts);
                let rhs = ts.mul(&jr);
                t.record(lhs == rhs, || format!("{} vs {}", r, v.ctx.wall_gen(i)));
            }
        }
    }));

    // Associativity on random triples with sublattice coefficients.
    checks.push(v.check("associativity", |v, t| {
        for _ in 0..v.samples {
            let x = v.random_basis_elem();
            let y = v.random_basis_elem();
            let z = v.random_basis_elem();
            let lhs = x.mul(&y).mul(&z);
            let rhs = x.mul(&y.mul(&z));
            t.record(lhs == rhs, || {
                format!("({})({})({})", x.render(), y.render(), z.render())
            });
        }
    }));

    RelationReport {
        seed,
        sample_count,
        checks,
    }
}

/// `T_a T_b T_a ...` with `m` factors, evaluated right to left.
fn alternating_product(a: &HeckeElem, b: &HeckeElem, m: usize) -> HeckeElem {
    let mut acc = HeckeElem::one(a.ctx());
    for k in (0..m).rev() {
        let factor = if k % 2 == 0 { a } else { b };
        acc = factor.mul(&acc);
    }
    acc
}

/// All reduced words of `w` over the walls, capped in number.
fn reduced_words(ctx: &Arc<AlgebraCtx>, w: &WeylElem, cap: usize) -> Vec<Vec<usize>> {
    if w.is_identity() {
        return vec![Vec::new()];
    }
    let lw = ctx.datum().length(w);
    let mut out = Vec::new();
    for i in 0..ctx.wall_count() {
        let sw = ctx.walls[i].elem.mul(w);
        if ctx.datum().length(&sw) < lw {
            for rest in reduced_words(ctx, &sw, cap - out.len()) {
                let mut word = Vec::with_capacity(rest.len() + 1);
                word.push(i);
                word.extend(rest);
                out.push(word);
                if out.len() >= cap {
                    return out;
                }
            }
        }
    }
    out
}

/// Apply `T_{s_{i_1}} ... T_{s_{i_l}}` to an element, rightmost factor first.
fn fold_word(word: &[usize], z: &HeckeElem) -> HeckeElem {
    let mut acc = z.clone();
    for i in word.iter().rev() {
        acc = acc.lmul_gen(*i);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langlands::{Case, SelfDuality};
    use proptest::prelude::*;

    fn classified(case: Case, d: u32, t: u32, a: Option<(i64, i64)>) -> ClassifiedBlock {
        ClassifiedBlock {
            label: format!("b{}{}", case, d),
            k: 1,
            t,
            d,
            case,
            d_prime: if case == Case::I { d - 1 } else { d },
            self_dual: if case == Case::I {
                SelfDuality::NotSelfDual
            } else {
                SelfDuality::Orthogonal
            },
            a: a.map(|p| p.0),
            a_minus: a.map(|p| p.1),
            swapped: false,
        }
    }

    fn simple_ctx() -> Arc<AlgebraCtx> {
        // One case-I block of multiplicity 2 and order 2: a single scaled
        // transposition wall.
        AlgebraCtx::new(&[classified(Case::I, 2, 2, None)])
    }

    fn split_ctx(t: u32, a: i64, a_minus: i64) -> Arc<AlgebraCtx> {
        AlgebraCtx::new(&[classified(Case::III, 1, t, Some((a, a_minus)))])
    }

    #[test]
    fn wall_correction_simple_geometric() {
        let ctx = simple_ctx();
        // b = X = b_{2e1 - 2e2}: correction (q^2 - 1)(1 + X).
        let m = BMonomial::from_exps(vec![2, -2]);
        let corr = ctx.wall_correction(0, &m);
        let x = BPoly::monomial(m.clone());
        let expected = BPoly::one(2)
            .add(&x)
            .scale(&VLaurent::q_pow(2).sub(&VLaurent::one()));
        assert_eq!(corr, BFrac::from_poly(expected));

        // It agrees with the explicit fraction (q_s - 1)(b_m - b_sm)/(1 - X^{-1}).
        let f = ctx.correction_function(0);
        let sm = BMonomial::from_exps(vec![-2, 2]);
        let diff = BFrac::from_poly(BPoly::monomial(m).sub(&BPoly::monomial(sm)));
        assert_eq!(corr, f.mul(&diff));
    }

    #[test]
    fn wall_correction_fraction_off_sublattice() {
        let ctx = simple_ctx();
        // b_{e1} has gamma = 1, not divisible by t = 2: a genuine fraction.
        let m = BMonomial::from_exps(vec![1, 0]);
        let corr = ctx.wall_correction(0, &m);
        assert!(corr.as_polynomial().is_none());
        // Cross-check against the defining fraction.
        let f = ctx.correction_function(0);
        let diff = BFrac::from_poly(
            BPoly::monomial(m).sub(&BPoly::monomial(BMonomial::from_exps(vec![0, 1]))),
        );
        assert_eq!(corr, f.mul(&diff));
    }

    #[test]
    fn wall_correction_split_pinned() {
        // t = 1, (a, a_minus) = (3, 1): Q = v^6, A = v^4, B = v^2.
        let ctx = split_ctx(1, 3, 1);
        let m = BMonomial::from_exps(vec![1]);
        let corr = ctx.wall_correction(0, &m);
        let q_minus = VLaurent::v_pow(6).sub(&VLaurent::one());
        let a_minus_b = VLaurent::v_pow(4).sub(&VLaurent::v_pow(2));
        let expected = BPoly::term(BMonomial::from_exps(vec![1]), q_minus)
            .add(&BPoly::constant(1, a_minus_b));
        assert_eq!(corr, BFrac::from_poly(expected));

        // And against the explicit fraction.
        let f = ctx.correction_function(0);
        let diff = BFrac::from_poly(
            BPoly::monomial(m).sub(&BPoly::monomial(BMonomial::from_exps(vec![-1]))),
        );
        assert_eq!(corr, f.mul(&diff));
    }

    #[test]
    fn correction_function_reflection_identity() {
        // f_s + s(f_s) = q_s - 1 for both denominator kinds.
        let contexts = [simple_ctx(), split_ctx(2, 2, 0), split_ctx(1, 3, 1)];
        for ctx in &contexts {
            for i in 0..ctx.wall_count() {
                let f = ctx.correction_function(i);
                let sf = f.map_monomials(|m| ctx.walls[i].elem.act_monomial(m));
                let total = f.add(&sf);
                let expected = BFrac::from_poly(BPoly::constant(
                    ctx.rank(),
                    ctx.wall_q(i).sub(&VLaurent::one()),
                ));
                assert_eq!(total, expected, "wall {i}");
            }
        }
    }

    #[test]
    fn quadratic_and_braid_relations() {
        let ctx = AlgebraCtx::new(&[classified(Case::II, 3, 1, Some((-1, -1)))]);
        let report = verify_relations(&ctx, 6, 7);
        assert!(report.all_passed(), "\n{report}");
    }

    #[test]
    fn split_block_relations() {
        let ctx = AlgebraCtx::new(&[classified(Case::III, 2, 2, Some((2, 0)))]);
        let report = verify_relations(&ctx, 6, 11);
        assert!(report.all_passed(), "\n{report}");
    }

    #[test]
    fn mixture_relations() {
        let ctx = AlgebraCtx::new(&[
            classified(Case::I, 2, 2, None),
            classified(Case::II, 2, 1, Some((-1, -1))),
        ]);
        let report = verify_relations(&ctx, 5, 3);
        assert!(report.all_passed(), "\n{report}");
    }

    #[test]
    fn sign_conjugation_swaps_fork_generators() {
        let ctx = AlgebraCtx::new(&[classified(Case::II, 2, 1, Some((-1, -1)))]);
        let r = RElem::from_blocks([0]);
        let j = HeckeElem::j_elem(&ctx, &r).unwrap();
        let s1 = HeckeElem::t_gen(&ctx, &SimpleGen { block: 0, j: 1 }).unwrap();
        let s2 = HeckeElem::t_gen(&ctx, &SimpleGen { block: 0, j: 2 }).unwrap();
        assert_eq!(s1.mul(&j), j.mul(&s2));
        assert_eq!(s2.mul(&j), j.mul(&s1));
    }

    #[test]
    fn custom_j_square_scalar() {
        let blocks = [classified(Case::II, 1, 1, Some((-1, -1)))];
        let ctx = AlgebraCtx::with_j_square(&blocks, vec![VLaurent::q_pow(1)]).unwrap();
        let r = RElem::from_blocks([0]);
        let j = HeckeElem::j_elem(&ctx, &r).unwrap();
        let expected = HeckeElem::one(&ctx).scale_laurent(&VLaurent::q_pow(1));
        assert_eq!(j.mul(&j), expected);
    }

    #[test]
    fn j_square_validation() {
        let blocks = [classified(Case::II, 1, 1, Some((-1, -1)))];
        assert!(matches!(
            AlgebraCtx::with_j_square(&blocks, vec![]),
            Err(HeckeError::JSquareLength { .. })
        ));
        assert!(matches!(
            AlgebraCtx::with_j_square(&blocks, vec![VLaurent::zero()]),
            Err(HeckeError::JSquareZero { block: 0 })
        ));
    }

    #[test]
    fn projections_are_orthogonal_idempotents() {
        // One coordinate of order 2: two projections.
        let ctx = AlgebraCtx::new(&[classified(Case::I, 1, 2, None)]);
        let p1 = HeckeElem::block_projection(&ctx, &[1]).unwrap();
        let p2 = HeckeElem::block_projection(&ctx, &[2]).unwrap();
        assert_eq!(p1.mul(&p1), p1);
        assert_eq!(p2.mul(&p2), p2);
        assert!(p1.mul(&p2).is_zero());
        assert_eq!(p1.add(&p2), HeckeElem::one(&ctx));

        // p^(1) = (phi_0 - phi_1) / 2.
        let half = CycScalar::from_rational(rat(1, 2));
        let phi0 = HeckeElem::phi(&ctx, &ctx.character(&[0]).unwrap()).unwrap();
        let phi1 = HeckeElem::phi(&ctx, &ctx.character(&[1]).unwrap()).unwrap();
        assert_eq!(p1, phi0.sub(&phi1).scale_scalar(&half));
    }

    #[test]
    fn projection_shifts_under_lattice_translation() {
        let ctx = AlgebraCtx::new(&[classified(Case::I, 1, 2, None)]);
        let p1 = HeckeElem::block_projection(&ctx, &[1]).unwrap();
        let p2 = HeckeElem::block_projection(&ctx, &[2]).unwrap();
        let b = HeckeElem::b_monomial(&ctx, &[1]).unwrap();
        // p^(1) b = b p^(1 - 1 mod 2) = b p^(2).
        assert_eq!(p1.mul(&b), b.mul(&p2));
        assert_eq!(p2.mul(&b), b.mul(&p1));
    }

    #[test]
    fn coefficients_mode_classification() {
        let ctx = simple_ctx();
        let sub = HeckeElem::b_monomial(&ctx, &[2, 0]).unwrap();
        assert_eq!(
            sub.coefficients_mode(),
            CoefficientsMode::SublatticePolynomial
        );
        let off = HeckeElem::b_monomial(&ctx, &[1, 0]).unwrap();
        assert_eq!(off.coefficients_mode(), CoefficientsMode::LaurentPolynomial);
        // Crossing the wall with an off-sublattice monomial forces a fraction.
        let ts = HeckeElem::t_gen(&ctx, &SimpleGen { block: 0, j: 1 }).unwrap();
        let prod = ts.mul(&off);
        assert_eq!(prod.coefficients_mode(), CoefficientsMode::Rational);
        // The fraction is carried exactly: multiplying back by the denominator
        // recovers a polynomial statement.
        let back = prod.sub(&off.mul(&ts));
        assert!(!back.is_zero());
    }

    #[test]
    fn sublattice_products_stay_polynomial() {
        let ctx = AlgebraCtx::new(&[classified(Case::III, 2, 2, Some((2, 0)))]);
        let ts: Vec<HeckeElem> = (0..ctx.wall_count())
            .map(|i| HeckeElem::t_gen(&ctx, &ctx.wall_gen(i)).unwrap())
            .collect();
        let b = HeckeElem::b_monomial(&ctx, &[2, -4]).unwrap();
        let mut acc = b;
        for t in &ts {
            acc = t.mul(&acc);
        }
        assert_eq!(
            acc.coefficients_mode(),
            CoefficientsMode::SublatticePolynomial
        );
    }

    #[test]
    fn t_word_rejects_sign_part() {
        use crate::weyl::BlockSignedPerm;
        let ctx = AlgebraCtx::new(&[classified(Case::IIb, 3, 1, Some((-1, -1)))]);
        let odd = WeylElem {
            blocks: vec![BlockSignedPerm::last_flip(3)],
        };
        assert!(matches!(
            HeckeElem::t_word(&ctx, &odd),
            Err(HeckeError::NotInCoxeterPart)
        ));
    }

    #[test]
    fn specialization_matches_group_algebra() {
        let ctx = AlgebraCtx::new(&[classified(Case::II, 2, 2, Some((-1, -1)))]);
        let chi = ctx.character(&[1, 0]).unwrap();
        let r = RElem::from_blocks([0]);
        let s1 = SimpleGen { block: 0, j: 1 };
        let x = HeckeElem::phi(&ctx, &chi)
            .unwrap()
            .mul(&HeckeElem::j_elem(&ctx, &r).unwrap())
            .mul(&HeckeElem::t_gen(&ctx, &s1).unwrap());
        let y = HeckeElem::b_monomial(&ctx, &[2, -2])
            .unwrap()
            .mul(&HeckeElem::t_gen(&ctx, &SimpleGen { block: 0, j: 2 }).unwrap());
        let lhs = x.mul(&y).specialize_q1().unwrap();
        let rhs = x.specialize_q1().unwrap().mul(&y.specialize_q1().unwrap());
        assert_eq!(lhs, rhs);
        assert!(!lhs.is_zero());
    }

    #[test]
    fn specialization_rejects_fractions() {
        let ctx = simple_ctx();
        let off = HeckeElem::b_monomial(&ctx, &[1, 0]).unwrap();
        let ts = HeckeElem::t_gen(&ctx, &SimpleGen { block: 0, j: 1 }).unwrap();
        let prod = ts.mul(&off);
        assert!(matches!(
            prod.specialize_q1(),
            Err(HeckeError::NotSpecializable { .. })
        ));
    }

    #[test]
    fn rendering_is_ordered_and_tagged() {
        let ctx = AlgebraCtx::new(&[classified(Case::II, 2, 1, Some((-1, -1)))]);
        let s1 = HeckeElem::t_gen(&ctx, &SimpleGen { block: 0, j: 1 }).unwrap();
        let s2 = HeckeElem::t_gen(&ctx, &SimpleGen { block: 0, j: 2 }).unwrap();
        let r = HeckeElem::j_elem(&ctx, &RElem::from_blocks([0])).unwrap();
        let elem = s1.mul(&s2).add(&r).add(&HeckeElem::one(&ctx));
        let lines = elem.rendered_terms();
        assert_eq!(lines, vec!["1", "T[s1.1 s1.2]", "J[1]"]);
        assert_eq!(elem.render(), "1 + T[s1.1 s1.2] + J[1]");
    }

    #[test]
    fn quadratic_rendering_pinned() {
        let ctx = AlgebraCtx::new(&[classified(Case::II, 2, 1, Some((-1, -1)))]);
        let s1 = HeckeElem::t_gen(&ctx, &SimpleGen { block: 0, j: 1 }).unwrap();
        let sq = s1.mul(&s1);
        assert_eq!(sq.render(), "q + (q - 1) * T[s1.1]");
    }

    #[test]
    fn character_values_are_roots_of_unity() {
        let ctx = AlgebraCtx::new(&[
            classified(Case::I, 1, 2, None),
            classified(Case::I, 1, 3, None),
        ]);
        assert_eq!(ctx.conductor(), 6);
        let chi = ctx.character(&[1, 1]).unwrap();
        let m = BMonomial::from_exps(vec![1, 1]);
        // zeta_6^{3 + 2} = zeta_6^5.
        let val = chi.value(&m, ctx.ts_flat(), ctx.conductor());
        assert_eq!(val, CycScalar::zeta_pow(6, 5));
        // Trivial on the sublattice of block-order multiples.
        let sub = BMonomial::from_exps(vec![2, 3]);
        assert!(chi.value(&sub, ctx.ts_flat(), ctx.conductor()).is_one());
    }

    #[test]
    fn stabilizer_enumeration() {
        let ctx = AlgebraCtx::new(&[
            classified(Case::I, 1, 2, None),
            classified(Case::I, 1, 3, None),
        ]);
        let chars = ctx.characters().unwrap();
        assert_eq!(chars.len(), 6);
        assert_eq!(ctx.stabilizer_order(), Some(6));
    }

    proptest! {
        // The geometric fast path and the generic fraction agree wherever
        // both apply.
        #[test]
        fn correction_paths_agree(e1 in -4i32..=4, e2 in -4i32..=4) {
            let ctx = simple_ctx();
            let m = BMonomial::from_exps(vec![2 * e1, 2 * e2]);
            let corr = ctx.wall_correction(0, &m);
            prop_assert!(corr.as_polynomial().is_some());
            let sm = ctx.walls[0].elem.act_monomial(&m);
            let f = ctx.correction_function(0);
            let diff = BFrac::from_poly(
                BPoly::monomial(m).sub(&BPoly::monomial(sm)),
            );
            prop_assert_eq!(corr, f.mul(&diff));
        }

        // Products of sublattice elements never leave the polynomial class.
        #[test]
        fn sublattice_closure(e1 in -2i32..=2, e2 in -2i32..=2, word in proptest::collection::vec(0usize..2, 0..4)) {
            let ctx = AlgebraCtx::new(&[classified(Case::III, 2, 1, Some((1, -1)))]);
            let b = HeckeElem::b_monomial(&ctx, &[e1, e2]).unwrap();
            let mut acc = b;
            for i in word {
                let t = HeckeElem::t_gen(&ctx, &ctx.wall_gen(i)).unwrap();
                acc = t.mul(&acc);
            }
            prop_assert_eq!(acc.coefficients_mode(), CoefficientsMode::SublatticePolynomial);
        }
    }
}
