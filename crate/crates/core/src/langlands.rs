//! Combinatorial descriptors of a cuspidal support and their classification.
//!
//! A descriptor records the data that determines the intertwining algebra: the
//! classical group's type, one block per inertial orbit of cuspidals on the
//! general-linear part of the Levi (label, dimension `k`, multiplicity `d`,
//! order `t` of the unramified stabilizer, self-duality type), and the anchor
//! part `H` of the support with the Jordan-block multiset of its parameter.
//!
//! Classification sorts each block into one of four cases:
//!
//! * **I** — the orbit is not self-dual (or, on a split even-orthogonal
//!   group, the odd-`k` configurations that behave the same way); the block
//!   contributes a type `A_{d-1}` factor and no short wall.
//! * **II** — self-dual, absent from the anchor's Jordan blocks, and of the
//!   same nature (orthogonal/symplectic) as the dual group; type `D_d`, with
//!   an extra diagram automorphism generating the non-Coxeter part.
//! * **IIb** — the degenerate split even-orthogonal configuration (trivial
//!   anchor, `k = 1`); type `D_d` without the diagram automorphism.
//! * **III** — self-dual and either present in the anchor's Jordan blocks or
//!   of the opposite nature; type `B_d`, whose short wall carries the unequal
//!   parameter built from the pair `(a, a_minus)`.
//!
//! The integers `a` and `a_minus` are the largest Jordan-block sizes attached
//! to the orbit and to its companion twist; when absent they default to `-1`
//! or `0` according to whether the orbit's nature matches the dual group's.

use crate::arith::{rat, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// The type of classical group the support lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupType {
    #[serde(rename = "Sp")]
    Symplectic,
    #[serde(rename = "SO_odd")]
    OddOrthogonal,
    #[serde(rename = "SO_even_split")]
    EvenOrthogonalSplit,
    #[serde(rename = "SO_even_nonsplit")]
    EvenOrthogonalNonSplit,
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupType::Symplectic => "Sp",
            GroupType::OddOrthogonal => "SO_odd",
            GroupType::EvenOrthogonalSplit => "SO_even_split",
            GroupType::EvenOrthogonalNonSplit => "SO_even_nonsplit",
        };
        write!(f, "{}", s)
    }
}

/// Self-duality type of a cuspidal orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelfDuality {
    #[serde(rename = "orthogonal")]
    Orthogonal,
    #[serde(rename = "symplectic")]
    Symplectic,
    #[serde(rename = "none")]
    NotSelfDual,
}

/// Nature of the dual group, which drives the default `a`-values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualNature {
    Symplectic,
    OrthogonalOdd,
    OrthogonalEven,
}

impl DualNature {
    pub fn is_orthogonal(self) -> bool {
        !matches!(self, DualNature::Symplectic)
    }
}

/// The dual group's nature for each group type: even-orthogonal groups are
/// self-dual in nature, odd-orthogonal and symplectic groups swap.
pub fn dual_nature(group: GroupType) -> DualNature {
    match group {
        GroupType::Symplectic => DualNature::OrthogonalOdd,
        GroupType::OddOrthogonal => DualNature::Symplectic,
        GroupType::EvenOrthogonalSplit | GroupType::EvenOrthogonalNonSplit => {
            DualNature::OrthogonalEven
        }
    }
}

/// One general-linear block of the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoDescriptor {
    pub label: String,
    /// Dimension of the general-linear factor carrying the orbit.
    pub k: u32,
    /// Order of the group of unramified characters stabilizing the orbit.
    pub t: u32,
    pub self_dual: SelfDuality,
}

/// An entry `(label, a)` of a Jordan-block multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordEntry {
    pub label: String,
    pub a: i64,
}

/// The anchor part of the support: the smaller group of the same type with
/// its parameter's Jordan blocks and the outer-invariance flag of its
/// cuspidal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HDescriptor {
    pub trivial: bool,
    pub jord: Vec<JordEntry>,
    pub tau_outer_invariant: bool,
}

impl HDescriptor {
    pub fn contains_label(&self, label: &str) -> bool {
        self.jord.iter().any(|e| e.label == label)
    }

    /// A non-invariance of the anchor cuspidal is only meaningful on a
    /// nontrivial anchor.
    fn tau_not_invariant(&self) -> bool {
        !self.trivial && !self.tau_outer_invariant
    }
}

/// A block together with its multiplicity and optional explicit `a`-values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockInput {
    pub rho: RhoDescriptor,
    /// Number of copies of the block in the Levi.
    pub d: u32,
    pub a_override: Option<i64>,
    pub a_minus_override: Option<i64>,
}

/// A full descriptor: group, blocks, anchor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanglandsDescriptor {
    pub group: GroupType,
    pub blocks: Vec<BlockInput>,
    pub h: HDescriptor,
}

/// The case a block falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Case {
    I,
    II,
    IIb,
    III,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case::I => "I",
            Case::II => "II",
            Case::IIb => "IIb",
            Case::III => "III",
        };
        write!(f, "{}", s)
    }
}

/// A classified block: everything later stages need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifiedBlock {
    pub label: String,
    pub k: u32,
    pub t: u32,
    pub d: u32,
    pub case: Case,
    /// Number of defined simple reflections indexed by the block (`d - 1` in
    /// case I, `d` otherwise).
    pub d_prime: u32,
    pub self_dual: SelfDuality,
    /// Largest Jordan-block size for the orbit (self-dual blocks only).
    pub a: Option<i64>,
    /// Largest Jordan-block size for the companion twist.
    pub a_minus: Option<i64>,
    /// True when the roles of the orbit and its companion were exchanged to
    /// enforce `a >= a_minus`.
    pub swapped: bool,
}

/// Outcome of the reducibility-point computation for one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reducibility {
    /// The unique non-negative reducibility exponent `(a + 1) / 2`.
    Point(Rational),
    /// Split even-orthogonal configurations where the induced representation
    /// is irreducible for every twist.
    AlwaysIrreducible,
    /// No self-duality, hence no reducibility point attached.
    NotApplicable,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LanglandsError {
    /// Structural problems in the descriptor (ill-formed input).
    #[error("malformed descriptor: {0}")]
    Malformed(String),
    /// The Jordan multiset skips a predecessor block.
    #[error("jordan multiset is not gap-free: ('{label}', {a}) present without ('{label}', {missing})")]
    Gap { label: String, a: i64, missing: i64 },
    /// `t*a` and `t*a_minus` of different parities.
    #[error("parity violation on '{label}': {t}*{a} and {t}*{a_minus} differ mod 2")]
    Parity {
        label: String,
        t: u32,
        a: i64,
        a_minus: i64,
    },
    /// An `a`-value was requested for a non-self-dual orbit.
    #[error("orbit '{label}' is not self-dual, so it has no jordan-block value")]
    NotSelfDual { label: String },
}

impl LanglandsError {
    /// Structural errors are input errors (CLI exit 2); the rest are
    /// mathematical rejections (exit 1).
    pub fn is_schema_error(&self) -> bool {
        matches!(self, LanglandsError::Malformed(_))
    }
}

/// Check gap-freeness: an entry of size `a >= 3` needs `(label, a - 2)`.
pub fn validate_jord(jord: &[JordEntry]) -> Result<(), LanglandsError> {
    let present: BTreeSet<(&str, i64)> =
        jord.iter().map(|e| (e.label.as_str(), e.a)).collect();
    for e in jord {
        if e.a >= 3 && !present.contains(&(e.label.as_str(), e.a - 2)) {
            return Err(LanglandsError::Gap {
                label: e.label.clone(),
                a: e.a,
                missing: e.a - 2,
            });
        }
    }
    Ok(())
}

fn a_value_for(label: &str, orthogonal: bool, jord: &[JordEntry], dual: DualNature) -> i64 {
    let max = jord
        .iter()
        .filter(|e| e.label == label)
        .map(|e| e.a)
        .max();
    match max {
        Some(a) => a,
        // Same nature as the dual group: -1; opposite nature: 0.
        None if orthogonal == dual.is_orthogonal() => -1,
        None => 0,
    }
}

/// Largest Jordan-block size attached to a self-dual orbit, with the
/// nature-dependent default when the orbit is absent from the multiset.
pub fn a_value(
    rho: &RhoDescriptor,
    jord: &[JordEntry],
    dual: DualNature,
) -> Result<i64, LanglandsError> {
    let orthogonal = match rho.self_dual {
        SelfDuality::Orthogonal => true,
        SelfDuality::Symplectic => false,
        SelfDuality::NotSelfDual => {
            return Err(LanglandsError::NotSelfDual {
                label: rho.label.clone(),
            })
        }
    };
    Ok(a_value_for(&rho.label, orthogonal, jord, dual))
}

/// `t*a` and `t*a_minus` must agree mod 2.
pub fn parity_check(label: &str, t: u32, a: i64, a_minus: i64) -> Result<(), LanglandsError> {
    if (t as i64 * a).rem_euclid(2) != (t as i64 * a_minus).rem_euclid(2) {
        return Err(LanglandsError::Parity {
            label: label.to_string(),
            t,
            a,
            a_minus,
        });
    }
    Ok(())
}

/// Default label under which the companion twist's Jordan entries are listed.
pub fn companion_label(label: &str) -> String {
    format!("{}-", label)
}

/// Sort a block into its case and resolve its `a`-values.
pub fn classify_block(
    group: GroupType,
    block: &BlockInput,
    h: &HDescriptor,
) -> Result<ClassifiedBlock, LanglandsError> {
    let rho = &block.rho;
    let self_dual = rho.self_dual != SelfDuality::NotSelfDual;
    let dual = dual_nature(group);
    let in_jord = h.contains_label(&rho.label);

    // On a split even-orthogonal group, odd-k blocks whose wall element cannot
    // be realized in the group are pushed into case I, except for the
    // degenerate k = 1 configuration on a trivial anchor, which is case IIb.
    let split_even = group == GroupType::EvenOrthogonalSplit;
    let odd_k_exception = split_even
        && rho.k % 2 == 1
        && ((h.trivial && rho.k != 1) || h.tau_not_invariant());

    let case = if !self_dual || odd_k_exception {
        Case::I
    } else if split_even && h.trivial && rho.k == 1 {
        Case::IIb
    } else {
        let orthogonal = rho.self_dual == SelfDuality::Orthogonal;
        if in_jord || orthogonal != dual.is_orthogonal() {
            Case::III
        } else {
            Case::II
        }
    };

    let (a, a_minus, swapped) = if self_dual {
        let orthogonal = rho.self_dual == SelfDuality::Orthogonal;
        let a0 = match block.a_override {
            Some(v) => v,
            None => a_value_for(&rho.label, orthogonal, &h.jord, dual),
        };
        let a1 = match block.a_minus_override {
            Some(v) => v,
            // The companion's entries are recorded under `label-`; when absent
            // its nature is taken to be the orbit's own, so the default
            // matches.
            None => a_value_for(&companion_label(&rho.label), orthogonal, &h.jord, dual),
        };
        parity_check(&rho.label, rho.t, a0, a1)?;
        if a0 < a1 {
            (Some(a1), Some(a0), true)
        } else {
            (Some(a0), Some(a1), false)
        }
    } else {
        (None, None, false)
    };

    let d_prime = if case == Case::I { block.d - 1 } else { block.d };

    Ok(ClassifiedBlock {
        label: rho.label.clone(),
        k: rho.k,
        t: rho.t,
        d: block.d,
        case,
        d_prime,
        self_dual: rho.self_dual,
        a,
        a_minus,
        swapped,
    })
}

/// The reducibility point of the block, when the theory attaches one.
pub fn reducibility_point(
    group: GroupType,
    block: &ClassifiedBlock,
    h: &HDescriptor,
) -> Reducibility {
    if block.self_dual == SelfDuality::NotSelfDual {
        return Reducibility::NotApplicable;
    }
    let split_even = group == GroupType::EvenOrthogonalSplit;
    if split_even
        && block.k % 2 == 1
        && ((h.trivial && block.k != 1) || h.tau_not_invariant())
    {
        return Reducibility::AlwaysIrreducible;
    }
    let a = block.a.expect("self-dual blocks carry a");
    Reducibility::Point(rat(a + 1, 2))
}

/// A validated descriptor: parsing and all structural and arithmetic gates
/// passed, and every block is classified.
#[derive(Clone, Debug)]
pub struct ValidatedDescriptor {
    pub descriptor: LanglandsDescriptor,
    pub blocks: Vec<ClassifiedBlock>,
}

impl LanglandsDescriptor {
    /// Parse the JSON wire format.  Unknown fields anywhere are rejected.
    pub fn from_json(text: &str) -> Result<LanglandsDescriptor, serde_json::Error> {
        let wire: DescriptorWire = serde_json::from_str(text)?;
        Ok(wire.into())
    }

    /// Run every gate: structural checks, gap-freeness, classification with
    /// the parity condition.
    pub fn validate(&self) -> Result<ValidatedDescriptor, LanglandsError> {
        let mut seen = BTreeSet::new();
        for b in &self.blocks {
            if b.rho.label.is_empty() {
                return Err(LanglandsError::Malformed("empty block label".into()));
            }
            if !seen.insert(b.rho.label.clone()) {
                return Err(LanglandsError::Malformed(format!(
                    "duplicate block label '{}'",
                    b.rho.label
                )));
            }
            if b.rho.k == 0 || b.rho.t == 0 || b.d == 0 {
                return Err(LanglandsError::Malformed(format!(
                    "block '{}': k, t and d must be positive",
                    b.rho.label
                )));
            }
            if b.rho.self_dual == SelfDuality::NotSelfDual
                && (self.h.contains_label(&b.rho.label)
                    || self.h.contains_label(&companion_label(&b.rho.label)))
            {
                return Err(LanglandsError::Malformed(format!(
                    "jordan entries attached to the non-self-dual label '{}'",
                    b.rho.label
                )));
            }
        }
        if self.h.trivial && !self.h.jord.is_empty() {
            return Err(LanglandsError::Malformed(
                "a trivial anchor has no jordan blocks".into(),
            ));
        }
        for e in &self.h.jord {
            if e.a < 1 {
                return Err(LanglandsError::Malformed(format!(
                    "jordan entry ('{}', {}): sizes start at 1",
                    e.label, e.a
                )));
            }
        }
        validate_jord(&self.h.jord)?;
        let blocks = self
            .blocks
            .iter()
            .map(|b| classify_block(self.group, b, &self.h))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ValidatedDescriptor {
            descriptor: self.clone(),
            blocks,
        })
    }
}

// --- JSON wire format ---

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DescriptorWire {
    group: GroupType,
    blocks: Vec<BlockWire>,
    h: HWire,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockWire {
    label: String,
    k: u32,
    d: u32,
    t: u32,
    self_dual: SelfDuality,
    #[serde(default)]
    a: Option<i64>,
    #[serde(default)]
    a_minus: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HWire {
    trivial: bool,
    jord: Vec<(String, i64)>,
    tau_outer_invariant: bool,
}

impl From<DescriptorWire> for LanglandsDescriptor {
    fn from(w: DescriptorWire) -> LanglandsDescriptor {
        LanglandsDescriptor {
            group: w.group,
            blocks: w
                .blocks
                .into_iter()
                .map(|b| BlockInput {
                    rho: RhoDescriptor {
                        label: b.label,
                        k: b.k,
                        t: b.t,
                        self_dual: b.self_dual,
                    },
                    d: b.d,
                    a_override: b.a,
                    a_minus_override: b.a_minus,
                })
                .collect(),
            h: HWire_into(w.h),
        }
    }
}

#[allow(non_snake_case)]
fn HWire_into(h: HWire) -> HDescriptor {
    HDescriptor {
        trivial: h.trivial,
        jord: h
            .jord
            .into_iter()
            .map(|(label, a)| JordEntry { label, a })
            .collect(),
        tau_outer_invariant: h.tau_outer_invariant,
    }
}
