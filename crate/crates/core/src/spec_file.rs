//! The `liyorke/v1` JSON system description: parsing, validation and export.
//!
//! Numbers are exact `"num/den"` (or integer) strings, measures may also be
//! `"inf"`. Decimal literals are rejected so every file denotes one exact
//! system.

use std::fmt;
use std::marker::PhantomData;

use num_bigint::BigUint;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::atom::Atom;
use crate::oracle::{
    DeclaredFact, Direction, Envelope, FamilyRule, IndexRule, PartEnvelope, RefutedCriterion, Refutation, SeqFact, SetCriterion,
    SystemOracle, Thm2Claim,
};
use crate::profile::ZProfile;
use crate::scalar::{ratio_string, Scalar};
use crate::sequence::{Lim, SeqRule, Sequence};
use crate::system::{AbsorbingFamily, AtomicSystem, ColumnFamily, Flags, Space, Table, TeethRule};
use crate::weight::ExtendedWeight;

pub const SCHEMA: &str = "liyorke/v1";

/// A schema violation, anchored to a line of the input when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for SpecError {}

/// `"a"` or `"a/b"` with `b ≠ 0`.
pub fn parse_exact<S: Scalar>(s: &str) -> Option<S> {
    if s.contains('.') {
        return None;
    }
    S::parse_str(s)
}

/// Exact scalar written as a string.
#[derive(Debug, Clone, PartialEq)]
pub struct Num<S>(pub S);

/// Extended measure value written as a string.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure<S>(pub ExtendedWeight<S>);

struct StrVisitor<T>(PhantomData<T>, &'static str);

impl<'de, T> Visitor<'de> for StrVisitor<T>
where
    T: TryFrom<String, Error = String>,
{
    type Value = T;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.1)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<T, E> {
        T::try_from(v.to_string()).map_err(E::custom)
    }
}

impl<S: Scalar> TryFrom<String> for Num<S> {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        parse_exact(&s).map(Num).ok_or_else(|| format!("invalid rational \"{s}\""))
    }
}

impl<S: Scalar> TryFrom<String> for Measure<S> {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        if s == "inf" {
            return Ok(Measure(ExtendedWeight::Infinite));
        }
        match parse_exact::<S>(&s) {
            Some(v) if !v.is_negative() => Ok(Measure(ExtendedWeight::Finite(v))),
            _ => Err(format!("invalid measure \"{s}\"")),
        }
    }
}

impl<S: Scalar> Serialize for Num<S> {
    fn serialize<Z: Serializer>(&self, z: Z) -> Result<Z::Ok, Z::Error> {
        z.serialize_str(&ratio_string(&self.0))
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Num<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_str(StrVisitor(PhantomData, "a \"num/den\" string"))
    }
}

impl<S: Scalar> Serialize for Measure<S> {
    fn serialize<Z: Serializer>(&self, z: Z) -> Result<Z::Ok, Z::Error> {
        z.serialize_str(&self.0.to_ratio_string())
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Measure<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_str(StrVisitor(PhantomData, "a \"num/den\" or \"inf\" string"))
    }
}

/// Atom written as `"3"` or `"(1,2)"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomStr(pub Atom);

impl TryFrom<String> for AtomStr {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse().map(AtomStr)
    }
}

impl Serialize for AtomStr {
    fn serialize<Z: Serializer>(&self, z: Z) -> Result<Z::Ok, Z::Error> {
        z.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for AtomStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_str(StrVisitor(PhantomData, "an atom string"))
    }
}

fn atoms_out(v: &[Atom]) -> Vec<AtomStr> {
    v.iter().copied().map(AtomStr).collect()
}

fn atoms_in(v: &[AtomStr]) -> Vec<Atom> {
    v.iter().map(|a| a.0).collect()
}

// ---------------------------------------------------------------------------
// wire types

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    TwoSidedShift,
    OneSidedShift,
    Grid,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields, bound = "S: Scalar")]
pub enum RuleSpec<S> {
    Quasi {
        pattern: Vec<Num<S>>,
        growth: Num<S>,
    },
    Blocks {
        base: Num<S>,
        factor: Num<S>,
        #[serde(default)]
        offset: u64,
    },
    Zigzag {
        up: Num<S>,
        down: Num<S>,
        #[serde(default)]
        offset: u64,
    },
    Products {
        weights: Box<RuleSpec<S>>,
        power: u32,
        scale: Num<S>,
        inclusive: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "S: Scalar")]
pub struct SeqSpec<S> {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prefix: Vec<Measure<S>>,
    pub tail: RuleSpec<S>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "S: Scalar")]
pub struct ProfileSpec<S> {
    pub left: SeqSpec<S>,
    pub right: SeqSpec<S>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields, bound = "S: Scalar")]
pub enum TeethSpec<S> {
    Ramp { ratio: Num<S> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields, bound = "S: Scalar")]
pub enum GridSpec<S> {
    ColumnsUniform(ProfileSpec<S>),
    ColumnsBands,
    Comb { line: ProfileSpec<S>, teeth: TeethSpec<S> },
    AbsorbingFdg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "S: Scalar")]
pub struct TableRow<S> {
    pub atom: AtomStr,
    pub measure: Measure<S>,
    pub image: AtomStr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagsSpec {
    pub injective: bool,
    pub surjective: bool,
    pub finite_measure: bool,
    #[serde(default)]
    pub constants_exact_from: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields, bound = "S: Scalar")]
pub enum LimSpec<S> {
    Exact(Num<S>),
    AtLeast(Num<S>),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields, bound = "S: Scalar")]
pub enum EnvelopeSpec<S> {
    DecayFrom { from: u64, scale: Num<S>, ratio: Num<S>, period: u64 },
    GrowthFrom { from: u64, scale: Num<S>, ratio: Num<S>, period: u64 },
    PeriodicFrom { from: u64, values: Vec<Measure<S>> },
    DipsAlong { times: IndexRule, scale: Num<S>, ratio: Num<S> },
    PeaksAlong { times: IndexRule, scale: Num<S>, ratio: Num<S> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "S: Scalar")]
pub struct PartEnvelopeSpec<S> {
    pub part: Vec<AtomStr>,
    pub envelope: EnvelopeSpec<S>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "S: Scalar")]
pub struct FactSpec<S> {
    pub set: Vec<AtomStr>,
    pub direction: Direction,
    pub liminf: LimSpec<S>,
    pub limsup: LimSpec<S>,
    pub rule: String,
    #[serde(default)]
    pub envelopes: Vec<PartEnvelopeSpec<S>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSpec {
    pub criterion: SetCriterion,
    pub set: Vec<AtomStr>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "S: Scalar")]
pub struct RefutationSpec<S> {
    pub criterion: RefutedCriterion,
    pub rule: String,
    #[serde(default)]
    pub bound: Option<Num<S>>,
    #[serde(default)]
    pub samples: Vec<Vec<AtomStr>>,
    #[serde(default)]
    pub caps: Vec<Option<Num<S>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields, bound = "S: Scalar")]
pub enum Thm2Spec<S> {
    Holds {
        family: FamilyRule,
        peak_time: (i64, i64),
        peak_scale: Num<S>,
        peak_ratio: Num<S>,
        rule: String,
    },
    Fails {
        sup: Num<S>,
        admissible: String,
        samples: Vec<Vec<AtomStr>>,
        rule: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "S: Scalar")]
pub struct OracleSpec<S> {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub facts: Vec<FactSpec<S>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub refutations: Vec<RefutationSpec<S>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thm2: Option<Thm2Spec<S>>,
}

/// Top-level document. Fields not used by `kind` must be absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "S: Scalar")]
pub struct SystemSpecFile<S> {
    pub schema: String,
    pub name: String,
    pub kind: Kind,
    /// `two_sided_shift`: `f(i) = i + step`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<SeqSpec<S>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<SeqSpec<S>>,
    /// `one_sided_shift`: `t ↦ μ({t + 1})`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<SeqSpec<S>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_atom: Option<Measure<S>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec<S>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TableRow<S>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinite_fibers: Option<Vec<AtomStr>>,
    /// Defaults are derived from the generator when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flags: Option<FlagsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSpec<S>>,
    /// Set evaluated by the sufficient conditions (i) and (ii).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cor1_set: Option<Vec<AtomStr>>,
}

/// An ingested system together with its analysis options.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec<S> {
    pub system: AtomicSystem<S>,
    pub cor1_set: Option<Vec<Atom>>,
}

// ---------------------------------------------------------------------------
// system → wire

fn rule_out<S: Scalar>(r: &SeqRule<S>) -> RuleSpec<S> {
    match r {
        SeqRule::Quasi { pattern, growth } => RuleSpec::Quasi {
            pattern: pattern.iter().cloned().map(Num).collect(),
            growth: Num(growth.clone()),
        },
        SeqRule::Blocks { base, factor, offset } => RuleSpec::Blocks {
            base: Num(base.clone()),
            factor: Num(factor.clone()),
            offset: *offset,
        },
        SeqRule::Zigzag { up, down, offset } => RuleSpec::Zigzag {
            up: Num(up.clone()),
            down: Num(down.clone()),
            offset: *offset,
        },
        SeqRule::Products {
            weights,
            power,
            scale,
            inclusive,
        } => RuleSpec::Products {
            weights: Box::new(rule_out(weights)),
            power: *power,
            scale: Num(scale.clone()),
            inclusive: *inclusive,
        },
    }
}

fn seq_out<S: Scalar>(s: &Sequence<S>) -> SeqSpec<S> {
    SeqSpec {
        prefix: s.prefix.iter().cloned().map(Measure).collect(),
        tail: rule_out(&s.tail),
    }
}

fn profile_out<S: Scalar>(p: &ZProfile<S>) -> ProfileSpec<S> {
    ProfileSpec {
        left: seq_out(&p.left),
        right: seq_out(&p.right),
    }
}

fn lim_out<S: Scalar>(l: &Lim<S>) -> LimSpec<S> {
    match l {
        Lim::Exact(v) => LimSpec::Exact(Num(v.clone())),
        Lim::AtLeast(v) => LimSpec::AtLeast(Num(v.clone())),
        Lim::Infinite => LimSpec::Infinite,
    }
}

fn envelope_out<S: Scalar>(e: &Envelope<S>) -> EnvelopeSpec<S> {
    match e {
        Envelope::DecayFrom { from, scale, ratio, period } => EnvelopeSpec::DecayFrom {
            from: *from,
            scale: Num(scale.clone()),
            ratio: Num(ratio.clone()),
            period: *period,
        },
        Envelope::GrowthFrom { from, scale, ratio, period } => EnvelopeSpec::GrowthFrom {
            from: *from,
            scale: Num(scale.clone()),
            ratio: Num(ratio.clone()),
            period: *period,
        },
        Envelope::PeriodicFrom { from, values } => EnvelopeSpec::PeriodicFrom {
            from: *from,
            values: values.iter().cloned().map(Measure).collect(),
        },
        Envelope::DipsAlong { times, scale, ratio } => EnvelopeSpec::DipsAlong {
            times: *times,
            scale: Num(scale.clone()),
            ratio: Num(ratio.clone()),
        },
        Envelope::PeaksAlong { times, scale, ratio } => EnvelopeSpec::PeaksAlong {
            times: *times,
            scale: Num(scale.clone()),
            ratio: Num(ratio.clone()),
        },
    }
}

fn oracle_out<S: Scalar>(o: &SystemOracle<S>) -> OracleSpec<S> {
    OracleSpec {
        facts: o
            .facts
            .iter()
            .map(|f| FactSpec {
                set: atoms_out(&f.set),
                direction: f.direction,
                liminf: lim_out(&f.fact.liminf),
                limsup: lim_out(&f.fact.limsup),
                rule: f.fact.rule.clone(),
                envelopes: f
                    .fact
                    .envelopes
                    .iter()
                    .map(|pe| PartEnvelopeSpec {
                        part: atoms_out(&pe.part),
                        envelope: envelope_out(&pe.envelope),
                    })
                    .collect(),
            })
            .collect(),
        witnesses: o
            .witnesses
            .iter()
            .map(|(c, s)| WitnessSpec {
                criterion: *c,
                set: atoms_out(s),
            })
            .collect(),
        refutations: o
            .refutations
            .iter()
            .map(|r| RefutationSpec {
                criterion: r.criterion,
                rule: r.rule.clone(),
                bound: r.bound.clone().map(Num),
                samples: r.samples.iter().map(|s| atoms_out(s)).collect(),
                caps: r.caps.iter().map(|c| c.clone().map(Num)).collect(),
            })
            .collect(),
        thm2: o.thm2.as_ref().map(|t| match t {
            Thm2Claim::Holds {
                family,
                peak_time,
                peak_scale,
                peak_ratio,
                rule,
            } => Thm2Spec::Holds {
                family: *family,
                peak_time: *peak_time,
                peak_scale: Num(peak_scale.clone()),
                peak_ratio: Num(peak_ratio.clone()),
                rule: rule.clone(),
            },
            Thm2Claim::Fails {
                sup,
                admissible,
                samples,
                rule,
            } => Thm2Spec::Fails {
                sup: Num(sup.clone()),
                admissible: admissible.clone(),
                samples: samples.iter().map(|s| atoms_out(s)).collect(),
                rule: rule.clone(),
            },
        }),
    }
}

impl<S: Scalar> SystemSpecFile<S> {
    fn empty(name: &str, kind: Kind) -> Self {
        SystemSpecFile {
            schema: SCHEMA.to_string(),
            name: name.to_string(),
            kind,
            step: None,
            left: None,
            right: None,
            measure: None,
            zero_atom: None,
            grid: None,
            table: None,
            infinite_fibers: None,
            flags: None,
            oracle: None,
            cor1_set: None,
        }
    }

    /// Full description of `sys`, flags and oracle included.
    pub fn from_system(sys: &AtomicSystem<S>, cor1_set: Option<&[Atom]>) -> Self {
        let mut out = match &sys.space {
            Space::Line { profile, step } => {
                let mut s = Self::empty(&sys.name, Kind::TwoSidedShift);
                s.step = Some(*step);
                s.left = Some(seq_out(&profile.left));
                s.right = Some(seq_out(&profile.right));
                s
            }
            Space::Chain { measure, zero_atom } => {
                let mut s = Self::empty(&sys.name, Kind::OneSidedShift);
                s.measure = Some(seq_out(measure));
                s.zero_atom = zero_atom.clone().map(Measure);
                s
            }
            Space::Table(t) => {
                let mut s = Self::empty(&sys.name, Kind::Table);
                s.table = Some(
                    t.entries()
                        .iter()
                        .map(|(a, (m, y))| TableRow {
                            atom: AtomStr(*a),
                            measure: Measure(m.clone()),
                            image: AtomStr(*y),
                        })
                        .collect(),
                );
                if !t.infinite_fibers().is_empty() {
                    s.infinite_fibers = Some(t.infinite_fibers().iter().copied().map(AtomStr).collect());
                }
                s
            }
            Space::Columns(family) => {
                let mut s = Self::empty(&sys.name, Kind::Grid);
                s.grid = Some(match family {
                    ColumnFamily::Uniform(p) => GridSpec::ColumnsUniform(profile_out(p)),
                    ColumnFamily::Bands => GridSpec::ColumnsBands,
                });
                s
            }
            Space::Comb { line, teeth } => {
                let mut s = Self::empty(&sys.name, Kind::Grid);
                let TeethRule::Ramp { ratio } = teeth;
                s.grid = Some(GridSpec::Comb {
                    line: profile_out(line),
                    teeth: TeethSpec::Ramp { ratio: Num(ratio.clone()) },
                });
                s
            }
            Space::Absorbing(AbsorbingFamily::Fdg) => {
                let mut s = Self::empty(&sys.name, Kind::Grid);
                s.grid = Some(GridSpec::AbsorbingFdg);
                s
            }
        };
        out.flags = Some(FlagsSpec {
            injective: sys.flags.injective,
            surjective: sys.flags.surjective,
            finite_measure: sys.flags.finite_measure,
            constants_exact_from: sys.flags.constants_exact_from,
        });
        if !sys.oracle.is_empty() {
            out.oracle = Some(oracle_out(&sys.oracle));
        }
        out.cor1_set = cor1_set.map(atoms_out);
        out
    }
}

// ---------------------------------------------------------------------------
// wire → system

fn is_dyadic<S: Scalar>(v: &S) -> bool {
    let (_, den) = v.ratio_parts();
    match den.parse::<BigUint>() {
        Ok(d) => d.count_ones() == 1,
        Err(_) => false,
    }
}

fn rule_in<S: Scalar>(r: &RuleSpec<S>) -> Result<SeqRule<S>, String> {
    let dyadic = |field: &str, v: &Num<S>| -> Result<S, String> {
        if v.0.is_positive() && is_dyadic(&v.0) {
            Ok(v.0.clone())
        } else {
            Err(format!("block rule value `{field}` = {} must be a positive dyadic rational", v.0))
        }
    };
    Ok(match r {
        RuleSpec::Quasi { pattern, growth } => {
            if pattern.is_empty() {
                return Err("quasi rule needs a nonempty pattern".into());
            }
            if pattern.iter().any(|v| v.0.is_negative()) || !growth.0.is_positive() {
                return Err("quasi rule needs a nonnegative pattern and positive growth".into());
            }
            SeqRule::Quasi {
                pattern: pattern.iter().map(|v| v.0.clone()).collect(),
                growth: growth.0.clone(),
            }
        }
        RuleSpec::Blocks { base, factor, offset } => SeqRule::Blocks {
            base: dyadic("base", base)?,
            factor: dyadic("factor", factor)?,
            offset: *offset,
        },
        RuleSpec::Zigzag { up, down, offset } => SeqRule::Zigzag {
            up: dyadic("up", up)?,
            down: dyadic("down", down)?,
            offset: *offset,
        },
        RuleSpec::Products {
            weights,
            power,
            scale,
            inclusive,
        } => {
            if !scale.0.is_positive() {
                return Err("products rule needs a positive scale".into());
            }
            SeqRule::Products {
                weights: Box::new(rule_in(weights)?),
                power: *power,
                scale: scale.0.clone(),
                inclusive: *inclusive,
            }
        }
    })
}

fn seq_in<S: Scalar>(s: &SeqSpec<S>) -> Result<Sequence<S>, String> {
    Ok(Sequence::new(s.prefix.iter().map(|m| m.0.clone()).collect(), rule_in(&s.tail)?))
}

fn profile_in<S: Scalar>(p: &ProfileSpec<S>) -> Result<ZProfile<S>, String> {
    Ok(ZProfile::new(seq_in(&p.left)?, seq_in(&p.right)?))
}

fn lim_in<S: Scalar>(l: &LimSpec<S>) -> Lim<S> {
    match l {
        LimSpec::Exact(v) => Lim::Exact(v.0.clone()),
        LimSpec::AtLeast(v) => Lim::AtLeast(v.0.clone()),
        LimSpec::Infinite => Lim::Infinite,
    }
}

fn envelope_in<S: Scalar>(e: &EnvelopeSpec<S>) -> Result<Envelope<S>, String> {
    Ok(match e {
        EnvelopeSpec::DecayFrom { from, scale, ratio, period } | EnvelopeSpec::GrowthFrom { from, scale, ratio, period } => {
            if *period == 0 {
                return Err("envelope period must be positive".into());
            }
            let (from, scale, ratio, period) = (*from, scale.0.clone(), ratio.0.clone(), *period);
            if matches!(e, EnvelopeSpec::DecayFrom { .. }) {
                Envelope::DecayFrom { from, scale, ratio, period }
            } else {
                Envelope::GrowthFrom { from, scale, ratio, period }
            }
        }
        EnvelopeSpec::PeriodicFrom { from, values } => {
            if values.is_empty() {
                return Err("periodic envelope needs values".into());
            }
            Envelope::PeriodicFrom {
                from: *from,
                values: values.iter().map(|m| m.0.clone()).collect(),
            }
        }
        EnvelopeSpec::DipsAlong { times, scale, ratio } => Envelope::DipsAlong {
            times: *times,
            scale: scale.0.clone(),
            ratio: ratio.0.clone(),
        },
        EnvelopeSpec::PeaksAlong { times, scale, ratio } => Envelope::PeaksAlong {
            times: *times,
            scale: scale.0.clone(),
            ratio: ratio.0.clone(),
        },
    })
}

fn oracle_in<S: Scalar>(o: &OracleSpec<S>) -> Result<SystemOracle<S>, String> {
    let mut facts = Vec::new();
    for f in &o.facts {
        let mut envelopes = Vec::new();
        for pe in &f.envelopes {
            envelopes.push(PartEnvelope {
                part: atoms_in(&pe.part),
                envelope: envelope_in(&pe.envelope)?,
            });
        }
        facts.push(DeclaredFact {
            set: atoms_in(&f.set),
            direction: f.direction,
            fact: SeqFact {
                liminf: lim_in(&f.liminf),
                limsup: lim_in(&f.limsup),
                rule: f.rule.clone(),
                envelopes,
            },
        });
    }
    let refutations = o
        .refutations
        .iter()
        .map(|r| Refutation {
            criterion: r.criterion,
            rule: r.rule.clone(),
            bound: r.bound.as_ref().map(|b| b.0.clone()),
            samples: r.samples.iter().map(|s| atoms_in(s)).collect(),
            caps: r.caps.iter().map(|c| c.as_ref().map(|v| v.0.clone())).collect(),
        })
        .collect();
    let thm2 = o.thm2.as_ref().map(|t| match t {
        Thm2Spec::Holds {
            family,
            peak_time,
            peak_scale,
            peak_ratio,
            rule,
        } => Thm2Claim::Holds {
            family: *family,
            peak_time: *peak_time,
            peak_scale: peak_scale.0.clone(),
            peak_ratio: peak_ratio.0.clone(),
            rule: rule.clone(),
        },
        Thm2Spec::Fails {
            sup,
            admissible,
            samples,
            rule,
        } => Thm2Claim::Fails {
            sup: sup.0.clone(),
            admissible: admissible.clone(),
            samples: samples.iter().map(|s| atoms_in(s)).collect(),
            rule: rule.clone(),
        },
    });
    Ok(SystemOracle {
        facts,
        witnesses: o.witnesses.iter().map(|w| (w.criterion, atoms_in(&w.set))).collect(),
        refutations,
        thm2,
    })
}

/// A semantic error blamed on the first occurrence of `"key"` in `text`.
fn at_key(text: &str, key: &str, message: impl Into<String>) -> SpecError {
    let needle = format!("\"{key}\"");
    let line = text
        .lines()
        .position(|l| l.contains(&needle))
        .map(|i| i + 1);
    SpecError {
        line,
        column: None,
        message: message.into(),
    }
}

impl<S: Scalar> SystemSpecFile<S> {
    /// Builds the system; `text` is only used to anchor error messages.
    pub fn to_system(&self, text: &str) -> Result<SystemSpec<S>, SpecError> {
        if self.schema != SCHEMA {
            return Err(at_key(text, "schema", format!("unsupported schema \"{}\", expected \"{SCHEMA}\"", self.schema)));
        }
        let present: [(&str, bool); 8] = [
            ("step", self.step.is_some()),
            ("left", self.left.is_some()),
            ("right", self.right.is_some()),
            ("measure", self.measure.is_some()),
            ("zero_atom", self.zero_atom.is_some()),
            ("grid", self.grid.is_some()),
            ("table", self.table.is_some()),
            ("infinite_fibers", self.infinite_fibers.is_some()),
        ];
        let allowed: &[&str] = match self.kind {
            Kind::TwoSidedShift => &["step", "left", "right"],
            Kind::OneSidedShift => &["measure", "zero_atom"],
            Kind::Grid => &["grid"],
            Kind::Table => &["table", "infinite_fibers"],
        };
        for (key, set) in present {
            if set && !allowed.contains(&key) {
                return Err(at_key(text, key, format!("field \"{key}\" is not used by kind {:?}", self.kind)));
            }
        }
        let missing = |key: &str| at_key(text, "kind", format!("kind {:?} needs field \"{key}\"", self.kind));
        let bad = |key: &str, e: String| at_key(text, key, e);
        let space = match self.kind {
            Kind::TwoSidedShift => {
                let step = self.step.unwrap_or(1);
                if step != 1 && step != -1 {
                    return Err(at_key(text, "step", "step must be 1 or -1"));
                }
                let left = seq_in(self.left.as_ref().ok_or_else(|| missing("left"))?).map_err(|e| bad("left", e))?;
                let right = seq_in(self.right.as_ref().ok_or_else(|| missing("right"))?).map_err(|e| bad("right", e))?;
                Space::Line {
                    profile: ZProfile::new(left, right),
                    step,
                }
            }
            Kind::OneSidedShift => Space::Chain {
                measure: seq_in(self.measure.as_ref().ok_or_else(|| missing("measure"))?).map_err(|e| bad("measure", e))?,
                zero_atom: self.zero_atom.as_ref().map(|m| m.0.clone()),
            },
            Kind::Grid => match self.grid.as_ref().ok_or_else(|| missing("grid"))? {
                GridSpec::ColumnsUniform(p) => Space::Columns(ColumnFamily::Uniform(profile_in(p).map_err(|e| bad("grid", e))?)),
                GridSpec::ColumnsBands => Space::Columns(ColumnFamily::Bands),
                GridSpec::Comb { line, teeth } => {
                    let TeethSpec::Ramp { ratio } = teeth;
                    if !ratio.0.is_positive() {
                        return Err(at_key(text, "ratio", "tooth ratio must be positive"));
                    }
                    Space::Comb {
                        line: profile_in(line).map_err(|e| bad("grid", e))?,
                        teeth: TeethRule::Ramp { ratio: ratio.0.clone() },
                    }
                }
                GridSpec::AbsorbingFdg => Space::Absorbing(AbsorbingFamily::Fdg),
            },
            Kind::Table => {
                let rows = self.table.as_ref().ok_or_else(|| missing("table"))?;
                let mut entries = std::collections::BTreeMap::new();
                for r in rows {
                    if entries.insert(r.atom.0, (r.measure.0.clone(), r.image.0)).is_some() {
                        return Err(at_key(text, "table", format!("atom {} listed twice", r.atom.0)));
                    }
                }
                let inf = self.infinite_fibers.iter().flatten().map(|a| a.0).collect();
                Space::Table(Table::new(entries, inf).map_err(|e| bad("table", e.to_string()))?)
            }
        };
        let mut system = AtomicSystem::new(self.name.clone(), space);
        if let Some(f) = &self.flags {
            system.flags = Flags {
                injective: f.injective,
                surjective: f.surjective,
                finite_measure: f.finite_measure,
                constants_exact_from: f.constants_exact_from,
            };
        }
        if let Some(o) = &self.oracle {
            system.oracle = oracle_in(o).map_err(|e| bad("oracle", e))?;
        }
        let cor1_set = self.cor1_set.as_ref().map(|s| atoms_in(s));
        if let Some(set) = &cor1_set {
            if let Some(a) = set.iter().find(|a| !system.contains(a)) {
                return Err(at_key(text, "cor1_set", format!("{a} is not an atom of the system")));
            }
        }
        Ok(SystemSpec { system, cor1_set })
    }
}

/// Parses and validates a `liyorke/v1` document.
pub fn parse_spec<S: Scalar>(text: &str) -> Result<SystemSpec<S>, SpecError> {
    let file: SystemSpecFile<S> = serde_json::from_str(text).map_err(|e| SpecError {
        line: Some(e.line()),
        column: Some(e.column()),
        message: strip_position(&e.to_string()),
    })?;
    file.to_system(text)
}

/// serde_json appends " at line L column C"; the position is kept separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Pretty-printed document with a trailing newline.
pub fn export_spec<S: Scalar>(sys: &AtomicSystem<S>, cor1_set: Option<&[Atom]>) -> String {
    let file = SystemSpecFile::from_system(sys, cor1_set);
    let mut out = serde_json::to_string_pretty(&file).expect("spec serialization is infallible");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::scalar::Rational;

    #[test]
    fn gallery_round_trip() {
        for e in gallery::entries() {
            let sys = (e.build)();
            let cor1: Option<Vec<Atom>> = e.cor1_set.map(|v| v.iter().map(|&(i, j)| Atom::Cell(i, j)).collect());
            let text = export_spec(&sys, cor1.as_deref());
            let back = parse_spec::<Rational>(&text).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert_eq!(back.system, sys, "{}", e.name);
            assert_eq!(back.cor1_set, cor1, "{}", e.name);
            assert_eq!(export_spec(&back.system, back.cor1_set.as_deref()), text);
        }
    }

    const NOTFINITE: &str = r#"{
  "schema": "liyorke/v1",
  "name": "nf",
  "kind": "two_sided_shift",
  "left": { "tail": { "quasi": { "pattern": ["1/2"], "growth": "1/2" } } },
  "right": { "tail": { "quasi": { "pattern": ["1"], "growth": "1" } } }
}"#;

    #[test]
    fn minimal_line_gets_default_flags() {
        let s = parse_spec::<Rational>(NOTFINITE).unwrap();
        let g = gallery::notfinite::<Rational>();
        assert_eq!(s.system.space, g.space);
        assert_eq!(s.system.flags, g.flags);
    }

    #[test]
    fn zero_denominator_is_line_anchored() {
        let text = NOTFINITE.replace("[\"1/2\"]", "[\"1/0\"]");
        let err = parse_spec::<Rational>(&text).unwrap_err();
        assert_eq!(err.line, Some(5));
        assert!(err.message.contains("1/0"), "{err}");
    }

    #[test]
    fn decimals_rejected() {
        let text = NOTFINITE.replace("\"growth\": \"1/2\"", "\"growth\": \"0.5\"");
        assert!(parse_spec::<Rational>(&text).is_err());
    }

    #[test]
    fn wrong_schema_and_stray_fields() {
        let err = parse_spec::<Rational>(&NOTFINITE.replace("liyorke/v1", "liyorke/v0")).unwrap_err();
        assert_eq!(err.line, Some(2));
        let text = NOTFINITE.replace("\"kind\": \"two_sided_shift\",", "\"kind\": \"two_sided_shift\", \"measure\": { \"tail\": { \"quasi\": { \"pattern\": [\"1\"], \"growth\": \"1\" } } },");
        let err = parse_spec::<Rational>(&text).unwrap_err();
        assert!(err.message.contains("measure"), "{err}");
        let text = NOTFINITE.replace("\"name\"", "\"nmae\"");
        assert!(parse_spec::<Rational>(&text).is_err());
    }

    #[test]
    fn blocks_must_be_dyadic() {
        let text = NOTFINITE.replace(
            "{ \"quasi\": { \"pattern\": [\"1/2\"], \"growth\": \"1/2\" } }",
            "{ \"blocks\": { \"base\": \"1\", \"factor\": \"1/3\" } }",
        );
        let err = parse_spec::<Rational>(&text).unwrap_err();
        assert!(err.message.contains("dyadic"), "{err}");
        assert_eq!(err.line, Some(5));
    }

    #[test]
    fn table_kind() {
        let text = r#"{
  "schema": "liyorke/v1",
  "name": "swap",
  "kind": "table",
  "table": [
    { "atom": "0", "measure": "1", "image": "1" },
    { "atom": "1", "measure": "1/2", "image": "0" }
  ]
}"#;
        let s = parse_spec::<Rational>(text).unwrap();
        assert!(s.system.flags.injective && s.system.flags.finite_measure);
        assert_eq!(s.system.image(&Atom::Point(1)).unwrap(), Atom::Point(0));
        let bad = text.replace("\"image\": \"0\"", "\"image\": \"7\"");
        assert!(parse_spec::<Rational>(&bad).is_err());
    }
}
