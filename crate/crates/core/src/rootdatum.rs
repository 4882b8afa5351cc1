//! The based root datum underlying the intertwining algebra.
//!
//! The lattice is the group `Z^n` of unramified-twist exponents, coordinates
//! grouped block by block.  A block of multiplicity `d` and stabilizer order
//! `t` contributes roots scaled by `t`:
//!
//! * `t (e_j - e_{j+1})` for `j < d` in every case;
//! * `t (e_{d-1} + e_d)` as the last simple root in cases II and IIb
//!   (when `d >= 2`);
//! * `t e_d` as the last simple root in case III.
//!
//! Case I contributes nothing beyond the type-A wall roots, so its span is a
//! root system of type `A_{d-1}`; cases II/IIb give `D_d` and case III gives
//! `B_d`.  Coroots are `2 α / ⟨α, α⟩`, hence rational vectors `(e_j -
//! e_{j+1})/t`, `(e_{d-1} + e_d)/t` and `2 e_d / t`.
//!
//! A root is positive when its first nonzero coordinate is positive.  The
//! length of a group element is the number of positive roots it makes
//! negative, and reduced words are extracted by repeatedly stripping the
//! smallest left descent.
//!
//! Each simple generator also carries its *wall data* — the quadratic
//! parameter `q_s` (a power of `q = v²`) and the shape of the rational
//! function entering the commutation of `T_s` past the lattice part.  For a
//! case-III end wall the parameter is built from the pair `(a, a_minus)` and
//! the function has the split numerator `(Q - 1) + X^{-1}(A - B)` over
//! `1 - X^{-2}`; every other wall carries `(q^t - 1)` over `1 - X^{-1}`.
//! There `X` is the monomial of the *primitive* wall vector (unscaled), so
//! that the corrections land back in the lattice algebra for every exponent.

use crate::arith::{rat, Rational};
use crate::langlands::{Case, ClassifiedBlock};
use crate::weyl::{SimpleGen, WeylElem, WeylGroup};
use std::collections::BTreeSet;
use thiserror::Error;

/// A root, as integer coordinates on the full lattice.
pub type RootVec = Vec<i32>;

/// Shape of the rational function attached to a wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DenominatorKind {
    /// `(q_s - 1) / (1 - X^{-1})`.
    Simple,
    /// `((Q - 1) + X^{-1}(A - B)) / (1 - X^{-2})` with `Q = A B`.
    SplitQuadratic,
}

/// Everything the algebra needs to know about one simple generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallParams {
    pub gen: SimpleGen,
    /// `q_s = v^{quad_v_exponent}`; the exponent is always even.
    pub quad_v_exponent: i64,
    pub kind: DenominatorKind,
    /// Primitive lattice vector whose monomial is the `X` of the wall.
    pub wall_vector: Vec<i32>,
    /// `(A, B)` as v-exponents, for the split numerator only.
    pub split_v_exponents: Option<(i64, i64)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootDatumError {
    #[error("root system closure produced {found} roots, expected {expected}")]
    CountMismatch { expected: usize, found: usize },
    #[error("root system is not stable under a simple reflection")]
    NotClosed,
    #[error("simple root {index} fails its reflection law")]
    BadReflection { index: usize },
    #[error("pairing of roots with a coroot left the integers")]
    NonIntegralPairing,
    #[error("element does not lie in the Coxeter part of the group")]
    NotInCoxeterPart,
}

/// The based root datum of a classified support, together with the wall
/// parameters and the acting group.
#[derive(Clone, Debug)]
pub struct BasedRootDatum {
    pub group: WeylGroup,
    /// Multiplicities of the blocks.
    pub dims: Vec<usize>,
    /// Stabilizer orders of the blocks.
    pub ts: Vec<u32>,
    pub cases: Vec<Case>,
    /// `(a, a_minus)` for the self-dual blocks.
    pub a_pairs: Vec<Option<(i64, i64)>>,
    /// Simple generators, aligned with `simple_roots`, `simple_coroots` and
    /// `walls`.
    pub gens: Vec<SimpleGen>,
    pub simple_roots: Vec<RootVec>,
    pub simple_coroots: Vec<Vec<Rational>>,
    pub walls: Vec<WallParams>,
    /// The full root system, sorted.
    pub all_roots: Vec<RootVec>,
}

/// Offsets of each block's coordinates inside the flat lattice.
pub fn block_offsets(dims: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(dims.len());
    let mut acc = 0;
    for &d in dims {
        out.push(acc);
        acc += d;
    }
    out
}

/// A root is positive when its first nonzero coordinate is.
pub fn is_positive(root: &[i32]) -> bool {
    for &c in root {
        if c != 0 {
            return c > 0;
        }
    }
    false
}

fn neg(root: &[i32]) -> RootVec {
    root.iter().map(|&c| -c).collect()
}

/// Build the datum from classified blocks.
pub fn build_root_datum(blocks: &[ClassifiedBlock]) -> BasedRootDatum {
    let group = WeylGroup::new(blocks);
    let dims = group.dims();
    let n = group.rank();
    let offsets = block_offsets(&dims);
    let ts: Vec<u32> = blocks.iter().map(|b| b.t).collect();
    let cases: Vec<Case> = blocks.iter().map(|b| b.case).collect();
    let a_pairs: Vec<Option<(i64, i64)>> = blocks
        .iter()
        .map(|b| match (b.a, b.a_minus) {
            (Some(a), Some(am)) => Some((a, am)),
            _ => None,
        })
        .collect();

    let gens = group.simple_gens();
    let mut simple_roots = Vec::with_capacity(gens.len());
    let mut simple_coroots = Vec::with_capacity(gens.len());
    let mut walls = Vec::with_capacity(gens.len());

    for gen in &gens {
        let i = gen.block;
        let d = dims[i];
        let off = offsets[i];
        let t = ts[i] as i32;
        let case = cases[i];

        let mut root = vec![0i32; n];
        let mut coroot = vec![Rational::from_integer(0.into()); n];
        let mut wall = vec![0i32; n];
        let (kind, quad, split) = if gen.j < d {
            // Adjacent transposition wall.
            root[off + gen.j - 1] = t;
            root[off + gen.j] = -t;
            coroot[off + gen.j - 1] = rat(1, t as i64);
            coroot[off + gen.j] = rat(-1, t as i64);
            wall[off + gen.j - 1] = 1;
            wall[off + gen.j] = -1;
            (DenominatorKind::Simple, 2 * t as i64, None)
        } else {
            match case {
                Case::I => unreachable!("case I has no end wall"),
                Case::II | Case::IIb => {
                    root[off + d - 2] = t;
                    root[off + d - 1] = t;
                    coroot[off + d - 2] = rat(1, t as i64);
                    coroot[off + d - 1] = rat(1, t as i64);
                    wall[off + d - 2] = 1;
                    wall[off + d - 1] = 1;
                    (DenominatorKind::Simple, 2 * t as i64, None)
                }
                Case::III => {
                    root[off + d - 1] = t;
                    coroot[off + d - 1] = rat(2, t as i64);
                    wall[off + d - 1] = 1;
                    let (a, am) = a_pairs[i].expect("case III blocks are self-dual");
                    let t64 = t as i64;
                    let quad = t64 * (a + am) + 2 * t64;
                    let split = (t64 * (a + 1), t64 * (am + 1));
                    (DenominatorKind::SplitQuadratic, quad, Some(split))
                }
            }
        };
        simple_roots.push(root);
        simple_coroots.push(coroot);
        walls.push(WallParams {
            gen: *gen,
            quad_v_exponent: quad,
            kind,
            wall_vector: wall,
            split_v_exponents: split,
        });
    }

    // Close the simple roots (and their negatives) under the simple
    // reflections.
    let gen_elems: Vec<WeylElem> = gens.iter().map(|g| group.gen_elem(g)).collect();
    let mut roots: BTreeSet<RootVec> = BTreeSet::new();
    for r in &simple_roots {
        roots.insert(r.clone());
        roots.insert(neg(r));
    }
    loop {
        let mut fresh = Vec::new();
        for r in &roots {
            for g in &gen_elems {
                let image = g.act_flat(r);
                if !roots.contains(&image) {
                    fresh.push(image);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        roots.extend(fresh);
    }

    BasedRootDatum {
        group,
        dims,
        ts,
        cases,
        a_pairs,
        gens,
        simple_roots,
        simple_coroots,
        walls,
        all_roots: roots.into_iter().collect(),
    }
}

impl BasedRootDatum {
    pub fn rank(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn positive_roots(&self) -> Vec<RootVec> {
        self.all_roots
            .iter()
            .filter(|r| is_positive(r))
            .cloned()
            .collect()
    }

    /// Expected size of the root system: `d(d-1)`, `2d(d-1)` or `2d²` per
    /// block according to the case.
    pub fn expected_root_count(&self) -> usize {
        self.dims
            .iter()
            .zip(&self.cases)
            .map(|(&d, case)| match case {
                Case::I => d * (d - 1),
                Case::II | Case::IIb => 2 * d * (d - 1),
                Case::III => 2 * d * d,
            })
            .sum()
    }

    /// Rational pairing of a lattice vector with a coroot.
    pub fn pair(vector: &[i32], coroot: &[Rational]) -> Rational {
        vector
            .iter()
            .zip(coroot)
            .map(|(&v, c)| c * Rational::from_integer(v.into()))
            .sum()
    }

    /// Structural checks: counts, symmetry, stability, reflection laws and
    /// integrality of pairings between roots and coroots.
    pub fn verify_root_system(&self) -> Result<(), RootDatumError> {
        let expected = self.expected_root_count();
        if self.all_roots.len() != expected {
            return Err(RootDatumError::CountMismatch {
                expected,
                found: self.all_roots.len(),
            });
        }
        let set: BTreeSet<&RootVec> = self.all_roots.iter().collect();
        for r in &self.all_roots {
            if !set.contains(&neg(r)) {
                return Err(RootDatumError::NotClosed);
            }
        }
        for (idx, gen) in self.gens.iter().enumerate() {
            let g = self.group.gen_elem(gen);
            let alpha = &self.simple_roots[idx];
            let coroot = &self.simple_coroots[idx];
            if Self::pair(alpha, coroot) != rat(2, 1) {
                return Err(RootDatumError::BadReflection { index: idx });
            }
            if g.act_flat(alpha) != neg(alpha) {
                return Err(RootDatumError::BadReflection { index: idx });
            }
            let mut negated = 0usize;
            for r in &self.all_roots {
                let image = g.act_flat(r);
                if !set.contains(&image) {
                    return Err(RootDatumError::NotClosed);
                }
                // The reflection formula x - ⟨x, α∨⟩ α must reproduce the
                // group action, with an integral pairing.
                let c = Self::pair(r, coroot);
                if !c.is_integer() {
                    return Err(RootDatumError::NonIntegralPairing);
                }
                let c: i64 = c.to_integer().try_into().map_err(|_| RootDatumError::NonIntegralPairing)?;
                let formula: Vec<i32> = r
                    .iter()
                    .zip(alpha)
                    .map(|(&x, &a)| x - (c as i32) * a)
                    .collect();
                if formula != image {
                    return Err(RootDatumError::BadReflection { index: idx });
                }
                if is_positive(r) && !is_positive(&image) {
                    negated += 1;
                }
            }
            // A simple reflection makes exactly one positive root negative.
            if negated != 1 {
                return Err(RootDatumError::BadReflection { index: idx });
            }
        }
        Ok(())
    }

    /// Length: positive roots sent negative.
    pub fn length(&self, w: &WeylElem) -> usize {
        self.all_roots
            .iter()
            .filter(|r| is_positive(r) && !is_positive(&w.act_flat(r)))
            .count()
    }

    /// The lexicographically smallest reduced word for an element of the
    /// Coxeter part, by repeatedly stripping the smallest left descent.
    pub fn reduced_word(&self, w: &WeylElem) -> Result<Vec<SimpleGen>, RootDatumError> {
        if !self.group.contains(w) {
            return Err(RootDatumError::NotInCoxeterPart);
        }
        let total = self.length(w);
        let mut word = Vec::new();
        let mut cur = w.clone();
        while !cur.is_identity() {
            let inv = cur.inv();
            let mut found = false;
            for (idx, gen) in self.gens.iter().enumerate() {
                if !is_positive(&inv.act_flat(&self.simple_roots[idx])) {
                    word.push(*gen);
                    cur = self.group.gen_elem(gen).mul(&cur);
                    found = true;
                    break;
                }
            }
            if !found || word.len() > total {
                // Unreachable on well-formed data; avoid looping forever.
                return Err(RootDatumError::NotInCoxeterPart);
            }
        }
        Ok(word)
    }

    /// Human-readable Cartan type, block by block.
    pub fn cartan_summary(&self) -> String {
        let parts: Vec<String> = self
            .dims
            .iter()
            .zip(&self.cases)
            .map(|(&d, case)| match case {
                Case::I => {
                    if d >= 2 {
                        format!("A{}", d - 1)
                    } else {
                        "trivial".to_string()
                    }
                }
                Case::II | Case::IIb => match d {
                    1 => "trivial".to_string(),
                    2 => "D2 (= A1 x A1)".to_string(),
                    3 => "D3 (= A3)".to_string(),
                    _ => format!("D{}", d),
                },
                Case::III => format!("B{}", d),
            })
            .collect();
        parts.join(" x ")
    }
}
