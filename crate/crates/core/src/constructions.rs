//! Constructive proofs run as algorithms: weakly wandering sets, the set of
//! the (LY5) ⇒ (LY6) implication, irregular vectors and Li-Yorke pairs.
//!
//! Every builder returns a certificate that its `verify` function rechecks
//! from the measure primitives alone.

use std::collections::{BTreeMap, BTreeSet};

use crate::atom::{Atom, AtomSet};
use crate::error::{Error, Result};
use crate::lp::{abs_pow, orbit_norms, OrbitTrace, SimpleFunction};
use crate::measure::{backward_trace, expansion_constants, forward_trace, image_set, preimage_set, set_measure};
use crate::oracle::Direction;
use crate::scalar::{Exponent, Scalar};
use crate::system::{AbsorbingFamily, AtomicSystem, Space};
use crate::verdict::fmt_set;
use crate::weight::ExtendedWeight;

/// Default bound on the indices a builder may scan.
pub const DEFAULT_MAX_INDEX: u64 = 1 << 14;

/// How the next index of a construction is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexSearch {
    /// The measure inequalities the mass and disjointness bounds rest on,
    /// evaluated exactly at every earlier index.
    Exact,
    /// The sufficient condition through `max{c^{-r} : r ≤ k}`, with `c` the
    /// lower expansion constant.
    Expansion,
}

impl IndexSearch {
    pub fn as_str(&self) -> &'static str {
        match self {
            IndexSearch::Exact => "exact",
            IndexSearch::Expansion => "expansion",
        }
    }
}

fn finite_mass<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom]) -> Result<S> {
    match set_measure(sys, &set_of(b))? {
        ExtendedWeight::Infinite => Err(Error::InfiniteMeasureSet),
        ExtendedWeight::Finite(m) if m.is_zero() => Err(Error::ZeroMeasureSet),
        ExtendedWeight::Finite(m) => Ok(m),
    }
}

fn set_of(b: &[Atom]) -> AtomSet {
    b.iter().copied().collect()
}

fn atoms(s: &AtomSet) -> Vec<Atom> {
    s.atoms().map(|a| a.iter().copied().collect()).unwrap_or_default()
}

fn measure_of<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom]) -> Result<ExtendedWeight<S>> {
    set_measure(sys, &set_of(b))
}

fn below<S: Scalar>(v: &ExtendedWeight<S>, bound: &S) -> bool {
    matches!(v, ExtendedWeight::Finite(x) if x < bound)
}

/// `k ↦ max{c^{-r} : 0 ≤ r ≤ k}` for the lower expansion constant `c`.
struct Growth<S> {
    inv_c: S,
}

impl<S: Scalar> Growth<S> {
    fn new(sys: &AtomicSystem<S>) -> Result<Self> {
        let radius = sys.flags.constants_exact_from.unwrap_or(8).max(2);
        match expansion_constants(sys, radius)?.c_lower {
            ExtendedWeight::Finite(c) if c.is_positive() => Ok(Growth { inv_c: S::one() / c }),
            _ => Err(Error::InvalidSystem("lower expansion constant is not positive and finite".into())),
        }
    }

    fn max_upto(&self, k: u64) -> S {
        if self.inv_c > S::one() {
            self.inv_c.powi(k as i64)
        } else {
            S::one()
        }
    }
}

/// `t ↦ μ(f^t(B))` for `|t| ≤ reach`, negative `t` meaning preimages.
struct SignedTrace<S> {
    forward: Vec<ExtendedWeight<S>>,
    backward: Vec<ExtendedWeight<S>>,
}

impl<S: Scalar> SignedTrace<S> {
    fn new(sys: &AtomicSystem<S>, b: &[Atom], forward: u64, backward: u64) -> Result<Self> {
        let set = set_of(b);
        Ok(SignedTrace {
            forward: if forward > 0 { forward_trace(sys, &set, forward)? } else { Vec::new() },
            backward: if backward > 0 { backward_trace(sys, &set, backward)? } else { Vec::new() },
        })
    }

    fn at(&self, t: i64) -> &ExtendedWeight<S> {
        if t >= 0 {
            &self.forward[t as usize]
        } else {
            &self.backward[t.unsigned_abs() as usize]
        }
    }
}

// ---------------------------------------------------------------------------
// weakly wandering sets

/// A subset `W ⊂ B` whose translates along `0 = k_0 < k_1 < … < k_J` are
/// pairwise disjoint: preimages `f^{-k_i}(W)` for a backward certificate,
/// images `f^{k_i}(W)` for a forward one.
#[derive(Debug, Clone, PartialEq)]
pub struct WanderingCertificate<S> {
    pub direction: Direction,
    pub source: Vec<Atom>,
    pub wandering: Vec<Atom>,
    /// `k_1 < … < k_J`.
    pub ks: Vec<u64>,
    pub epsilon: S,
    /// `ε_i = ε/(i·2^i)`.
    pub epsilons: Vec<S>,
    pub delta: Option<S>,
    pub search: IndexSearch,
    pub source_mass: S,
    pub wandering_mass: S,
}

/// `ε = μ(B)/2`, or `μ(B)/n` with the least `n` giving `ε < δ`.
fn epsilon_for<S: Scalar>(mass: &S, delta: Option<&S>) -> Result<S> {
    match delta {
        None => Ok(mass.clone() / S::from_int(2)),
        Some(d) if !d.is_positive() => Err(Error::InvalidSystem("delta must be positive".into())),
        Some(d) => {
            let mut n = 2i64;
            while mass.clone() / S::from_int(n) >= *d {
                n = n.checked_mul(2).ok_or(Error::InvalidSystem("delta too small".into()))?;
            }
            // the least n, by bisection on (n/2, n]
            let (mut lo, mut hi) = (n / 2, n);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if mass.clone() / S::from_int(mid) < *d {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok(mass.clone() / S::from_int(hi))
        }
    }
}

fn epsilons<S: Scalar>(eps: &S, j: usize) -> Vec<S> {
    (1..=j as i64).map(|i| eps.clone() / (S::from_int(i) * S::pow2(i))).collect()
}

/// `g^{k_i − k_j}(B)` for all `0 ≤ j < i ≤ J`, with `g = f` for a backward
/// certificate and `g = f^{-1}` for a forward one.
fn removed<S: Scalar>(sys: &AtomicSystem<S>, direction: Direction, b: &[Atom], ks: &[u64]) -> Result<BTreeSet<Atom>> {
    let all: Vec<u64> = std::iter::once(0).chain(ks.iter().copied()).collect();
    let mut diffs = BTreeSet::new();
    for i in 1..all.len() {
        diffs.extend(all[..i].iter().map(|kj| all[i] - kj));
    }
    let set = set_of(b);
    let mut out = BTreeSet::new();
    for d in diffs {
        let moved = match direction {
            Direction::Backward => image_set(sys, &set, d)?,
            Direction::Forward => preimage_set(sys, &set, d)?,
        };
        out.extend(atoms(&moved));
    }
    Ok(out)
}

/// Runs the wandering-set construction. A backward certificate needs
/// `liminf μ(f^k(B)) = 0`; a forward one needs `f` injective and
/// `liminf μ(f^{-k}(B)) = 0`. Indices are the least admissible ones.
pub fn build_wandering<S: Scalar>(
    sys: &AtomicSystem<S>,
    direction: Direction,
    b: &[Atom],
    j: usize,
    delta: Option<S>,
    search: IndexSearch,
    max_index: u64,
) -> Result<WanderingCertificate<S>> {
    if direction == Direction::Forward && !sys.flags.injective {
        return Err(Error::NotInjective);
    }
    let mass = finite_mass(sys, b)?;
    let epsilon = epsilon_for(&mass, delta.as_ref())?;
    let eps = epsilons(&epsilon, j);
    let growth = match search {
        IndexSearch::Expansion => Some(Growth::new(sys)?),
        IndexSearch::Exact => None,
    };
    // μ of g^k(B): images for the backward builder, preimages for the forward one
    let trace = if j == 0 {
        Vec::new()
    } else {
        match direction {
            Direction::Backward => forward_trace(sys, &set_of(b), max_index)?,
            Direction::Forward => backward_trace(sys, &set_of(b), max_index)?,
        }
    };
    let mut ks: Vec<u64> = Vec::with_capacity(j);
    for e in &eps {
        let prev = ks.last().copied().unwrap_or(0);
        let found = (prev + 1..=max_index).find(|&k| match &growth {
            None => std::iter::once(0)
                .chain(ks.iter().copied())
                .all(|kj| below(&trace[(k - kj) as usize], e)),
            Some(g) => {
                let at = match direction {
                    Direction::Backward => k,
                    Direction::Forward => k - prev,
                };
                match &trace[at as usize] {
                    ExtendedWeight::Finite(v) => g.max_upto(prev) * v.clone() < *e,
                    ExtendedWeight::Infinite => false,
                }
            }
        });
        ks.push(found.ok_or(Error::NoWitnessTimes { horizon: max_index })?);
    }
    let cut = removed(sys, direction, b, &ks)?;
    let wandering: Vec<Atom> = b
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .filter(|a| !cut.contains(a))
        .collect();
    let wandering_mass = measure_of(sys, &wandering)?
        .into_finite()
        .ok_or(Error::InfiniteMeasureSet)?;
    let cert = WanderingCertificate {
        direction,
        source: b.iter().copied().collect::<BTreeSet<_>>().into_iter().collect(),
        wandering,
        ks,
        epsilon,
        epsilons: eps,
        delta,
        search,
        source_mass: mass,
        wandering_mass,
    };
    verify_wandering(sys, &cert).map_err(Error::InvalidSystem)?;
    Ok(cert)
}

pub fn build_backward_wandering<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom], j: usize, delta: Option<S>) -> Result<WanderingCertificate<S>> {
    build_wandering(sys, Direction::Backward, b, j, delta, IndexSearch::Exact, DEFAULT_MAX_INDEX)
}

pub fn build_forward_wandering<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom], j: usize, delta: Option<S>) -> Result<WanderingCertificate<S>> {
    build_wandering(sys, Direction::Forward, b, j, delta, IndexSearch::Exact, DEFAULT_MAX_INDEX)
}

/// The translates `W, g^{k_1}(W), …` whose pairwise disjointness is claimed.
pub fn wandering_translates<S: Scalar>(sys: &AtomicSystem<S>, cert: &WanderingCertificate<S>) -> Result<Vec<BTreeSet<Atom>>> {
    let w = set_of(&cert.wandering);
    std::iter::once(0)
        .chain(cert.ks.iter().copied())
        .map(|k| {
            let t = match cert.direction {
                Direction::Backward => preimage_set(sys, &w, k)?,
                Direction::Forward => image_set(sys, &w, k)?,
            };
            Ok(atoms(&t).into_iter().collect())
        })
        .collect()
}

/// Rechecks a wandering certificate from scratch.
pub fn verify_wandering<S: Scalar>(sys: &AtomicSystem<S>, cert: &WanderingCertificate<S>) -> std::result::Result<(), String> {
    let err = |e: Error| e.to_string();
    if cert.ks.windows(2).any(|w| w[0] >= w[1]) || cert.ks.first() == Some(&0) {
        return Err("indices must be positive and strictly increasing".into());
    }
    let mass = finite_mass(sys, &cert.source).map_err(err)?;
    if mass != cert.source_mass {
        return Err(format!("μ(B) = {mass}, certificate says {}", cert.source_mass));
    }
    let eps = epsilon_for(&mass, cert.delta.as_ref()).map_err(err)?;
    if eps != cert.epsilon || epsilons(&eps, cert.ks.len()) != cert.epsilons {
        return Err("ε budget does not match ε_i = ε/(i·2^i)".into());
    }
    let cut = removed(sys, cert.direction, &cert.source, &cert.ks).map_err(err)?;
    let expect: Vec<Atom> = cert.source.iter().copied().filter(|a| !cut.contains(a)).collect();
    if expect != cert.wandering {
        return Err(format!("W should be {}", fmt_set(&expect)));
    }
    let wm = measure_of(sys, &cert.wandering).map_err(err)?;
    if wm != ExtendedWeight::Finite(cert.wandering_mass.clone()) {
        return Err("μ(W) does not re-derive".into());
    }
    let budget = cert
        .epsilons
        .iter()
        .enumerate()
        .fold(S::zero(), |acc, (i, e)| acc + S::from_int(i as i64 + 1) * e.clone());
    if cert.wandering_mass < mass.clone() - budget {
        return Err(format!("μ(W) = {} below μ(B) − Σ iε_i", cert.wandering_mass));
    }
    match &cert.delta {
        None if cert.wandering_mass.clone() * S::from_int(2) < mass => return Err("μ(W) < μ(B)/2".into()),
        Some(d) if !(mass.clone() - cert.wandering_mass.clone() < *d) => return Err("μ(B∖W) ≥ δ".into()),
        _ => {}
    }
    let translates = wandering_translates(sys, cert).map_err(err)?;
    for i in 0..translates.len() {
        for j in i + 1..translates.len() {
            if let Some(a) = translates[i].intersection(&translates[j]).next() {
                return Err(format!("translates {i} and {j} share {a}"));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// the set of the (LY5) ⇒ (LY6) implication

/// How the set `A` is obtained from `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ly6Route {
    /// `A = ⋃_{i ≤ K} f^{n_i}(B)`, the construction for sets with both
    /// liminfs 0.
    Union,
    /// `A = B`, for a `B` whose preimages already dip and return.
    Direct,
}

impl Ly6Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Ly6Route::Union => "union",
            Ly6Route::Direct => "direct",
        }
    }
}

/// A set `A` with `n_1 < m_1 < … < n_K < m_K`, `μ(f^{-m_j}(A)) ≤ 2^{1−j}`
/// and `μ(f^{-n_k}(A)) ≥ μ(B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ly6SetCertificate<S> {
    pub route: Ly6Route,
    pub source: Vec<Atom>,
    pub set: Vec<Atom>,
    pub ns: Vec<u64>,
    pub ms: Vec<u64>,
    /// `μ(f^{-m_j}(A))`.
    pub valleys: Vec<S>,
    /// `μ(f^{-n_k}(A))`.
    pub peaks: Vec<S>,
    pub search: IndexSearch,
    pub source_mass: S,
}

/// The union route, falling back to the direct route when no interleaved
/// indices exist within `max_index`.
pub fn build_ly6_set<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom], k: usize, search: IndexSearch, max_index: u64) -> Result<Ly6SetCertificate<S>> {
    match build_ly6_union(sys, b, k, search, max_index) {
        Err(Error::NoWitnessTimes { .. }) => build_ly6_direct(sys, b, k, max_index),
        other => other,
    }
}

/// `A = B`: `n_k` are returns to `μ(f^{-n}(B)) ≥ μ(B)` and `m_j` are dips to
/// `2^{−j}`.
pub fn build_ly6_direct<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom], k: usize, max_index: u64) -> Result<Ly6SetCertificate<S>> {
    if !sys.flags.injective {
        return Err(Error::NotInjective);
    }
    let mass = finite_mass(sys, b)?;
    if k == 0 {
        return Err(Error::InvalidSystem("K must be positive".into()));
    }
    let trace = backward_trace(sys, &set_of(b), max_index)?;
    let none = || Error::NoWitnessTimes { horizon: max_index };
    let (mut ns, mut ms) = (Vec::new(), Vec::new());
    let mut last = 0;
    for j in 1..=k as i64 {
        let n = (last + 1..=max_index)
            .find(|&n| trace[n as usize] >= ExtendedWeight::Finite(mass.clone()))
            .ok_or_else(none)?;
        let m = (n + 1..=max_index)
            .find(|&m| trace[m as usize] <= ExtendedWeight::Finite(S::pow2(-j)))
            .ok_or_else(none)?;
        ns.push(n);
        ms.push(m);
        last = m;
    }
    let finite = |t: u64| trace[t as usize].clone().into_finite().ok_or(Error::InfiniteMeasureSet);
    let cert = Ly6SetCertificate {
        route: Ly6Route::Direct,
        source: b.iter().copied().collect::<BTreeSet<_>>().into_iter().collect(),
        set: b.iter().copied().collect::<BTreeSet<_>>().into_iter().collect(),
        valleys: ms.iter().map(|&m| finite(m)).collect::<Result<Vec<_>>>()?,
        peaks: ns.iter().map(|&n| finite(n)).collect::<Result<Vec<_>>>()?,
        ns,
        ms,
        search: IndexSearch::Exact,
        source_mass: mass,
    };
    verify_ly6_set(sys, &cert).map_err(Error::InvalidSystem)?;
    Ok(cert)
}

/// Interleaved indices for an injective `f` and a set with both liminfs 0.
pub fn build_ly6_union<S: Scalar>(sys: &AtomicSystem<S>, b: &[Atom], k: usize, search: IndexSearch, max_index: u64) -> Result<Ly6SetCertificate<S>> {
    if !sys.flags.injective {
        return Err(Error::NotInjective);
    }
    let mass = finite_mass(sys, b)?;
    if k == 0 {
        return Err(Error::InvalidSystem("K must be positive".into()));
    }
    let growth = match search {
        IndexSearch::Expansion => Some(Growth::new(sys)?),
        IndexSearch::Exact => None,
    };
    let st = SignedTrace::new(sys, b, max_index, max_index)?;
    let half = S::from_ratio(1, 2);
    let none = || Error::NoWitnessTimes { horizon: max_index };
    let lt = |t: i64, factor: &S, bound: &S| match st.at(t) {
        ExtendedWeight::Finite(v) => factor.clone() * v.clone() < *bound,
        ExtendedWeight::Infinite => false,
    };
    let mut ns: Vec<u64> = vec![1];
    let m1 = (2..=max_index).find(|&m| lt(1 - m as i64, &S::one(), &half)).ok_or_else(none)?;
    let mut ms: Vec<u64> = vec![m1];
    for step in 2..=k as i64 {
        let m_prev = *ms.last().unwrap();
        let bound = S::pow2(-step);
        let n = (m_prev + 1..=max_index)
            .find(|&n| match &growth {
                Some(g) => lt(n as i64 - m1 as i64, &g.max_upto(m_prev), &bound),
                None => ms.iter().all(|&mj| lt(n as i64 - mj as i64, &S::one(), &bound)),
            })
            .ok_or_else(none)?;
        ns.push(n);
        let bound = S::one() / (S::from_int(step) * S::pow2(step));
        let m = (n + 1..=max_index)
            .find(|&m| match &growth {
                Some(g) => lt(n as i64 - m as i64, &g.max_upto(n), &bound),
                None => ns.iter().all(|&ni| lt(ni as i64 - m as i64, &S::one(), &bound)),
            })
            .ok_or_else(none)?;
        ms.push(m);
    }
    let mut a = BTreeSet::new();
    for &n in &ns {
        a.extend(atoms(&image_set(sys, &set_of(b), n)?));
    }
    let set: Vec<Atom> = a.into_iter().collect();
    let at = |t: u64| -> Result<S> {
        set_measure(sys, &preimage_set(sys, &set_of(&set), t)?)?
            .into_finite()
            .ok_or(Error::InfiniteMeasureSet)
    };
    let valleys = ms.iter().map(|&m| at(m)).collect::<Result<Vec<_>>>()?;
    let peaks = ns.iter().map(|&n| at(n)).collect::<Result<Vec<_>>>()?;
    let cert = Ly6SetCertificate {
        route: Ly6Route::Union,
        source: b.iter().copied().collect::<BTreeSet<_>>().into_iter().collect(),
        set,
        ns,
        ms,
        valleys,
        peaks,
        search,
        source_mass: mass,
    };
    verify_ly6_set(sys, &cert).map_err(Error::InvalidSystem)?;
    Ok(cert)
}

pub fn verify_ly6_set<S: Scalar>(sys: &AtomicSystem<S>, cert: &Ly6SetCertificate<S>) -> std::result::Result<(), String> {
    let err = |e: Error| e.to_string();
    if cert.ns.len() != cert.ms.len() || cert.ns.is_empty() {
        return Err("need K pairs of indices".into());
    }
    let mut last = 0;
    for (n, m) in cert.ns.iter().zip(&cert.ms) {
        if !(last < *n && n < m) {
            return Err("indices must interleave n_1 < m_1 < n_2 < …".into());
        }
        last = *m;
    }
    let mass = finite_mass(sys, &cert.source).map_err(err)?;
    let mut a = BTreeSet::new();
    match cert.route {
        Ly6Route::Union => {
            for &n in &cert.ns {
                a.extend(atoms(&image_set(sys, &set_of(&cert.source), n).map_err(err)?));
            }
        }
        Ly6Route::Direct => a.extend(cert.source.iter().copied()),
    }
    if a.into_iter().collect::<Vec<_>>() != cert.set {
        return Err("A does not re-derive".into());
    }
    let a = set_of(&cert.set);
    let at = |t: u64| set_measure(sys, &preimage_set(sys, &a, t)?);
    for (j, (m, v)) in cert.ms.iter().zip(&cert.valleys).enumerate() {
        let got = at(*m).map_err(err)?;
        if got != ExtendedWeight::Finite(v.clone()) {
            return Err(format!("μ(f^-{m}(A)) = {got}, recorded {v}"));
        }
        if *v > S::pow2(-(j as i64)) {
            return Err(format!("μ(f^-{m}(A)) = {v} exceeds 2^{}", -(j as i64)));
        }
    }
    for (n, v) in cert.ns.iter().zip(&cert.peaks) {
        let got = at(*n).map_err(err)?;
        if got != ExtendedWeight::Finite(v.clone()) {
            return Err(format!("μ(f^-{n}(A)) = {got}, recorded {v}"));
        }
        if *v < mass {
            return Err(format!("μ(f^-{n}(A)) = {v} below μ(B)"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// irregular vectors

/// A finite combination `φ = Σ c_s χ_{B_{i_s}}` whose orbit norms reach
/// `bound_up` and fall to `tol_down` alternately within the horizon. This is
/// a finite-horizon witness, not a proof of irregularity.
#[derive(Debug, Clone, PartialEq)]
pub struct IrregularVectorCertificate<S> {
    pub vector: SimpleFunction<S>,
    /// `(index into the family, coefficient)` in the order chosen.
    pub terms: Vec<(usize, S)>,
    pub up_times: Vec<u64>,
    pub down_times: Vec<u64>,
    pub tol_down: S,
    pub bound_up: S,
    pub horizon: u64,
    pub trace: OrbitTrace<S>,
    pub heuristic: bool,
}

impl<S: Scalar> IrregularVectorCertificate<S> {
    /// Alternations in the merged sequence `u_1 < d_1 < u_2 < d_2 < …`.
    pub fn interleavings(&self) -> usize {
        (self.up_times.len() + self.down_times.len()).saturating_sub(1)
    }
}

/// Widest coefficient exponent tried: `c = 2^{-e·den(p)}` for `|e| ≤ 64`.
const COEFF_RANGE: i64 = 64;

/// Greedy combination of the family members: each new term is the earliest
/// `(n, i)`, `B_i` disjoint from the terms so far, with the smallest
/// coefficient lifting `‖T^nφ‖^p` to `bound_up`
/// while every recorded dip stays at most `tol_down`; its own dip is the
/// first time the norm is at most `tol_down/2`, which leaves room for later
/// terms. Fails with `BudgetExhausted` below `min_interleavings`.
pub fn build_irregular_vector<S: Scalar>(
    sys: &AtomicSystem<S>,
    family: &[Vec<Atom>],
    h: u64,
    tol_down: S,
    bound_up: S,
    p: Exponent,
    min_interleavings: usize,
) -> Result<IrregularVectorCertificate<S>> {
    let mut traces: BTreeMap<Atom, Vec<ExtendedWeight<S>>> = BTreeMap::new();
    for b in family {
        finite_mass(sys, b)?;
        for a in b {
            if !traces.contains_key(a) {
                traces.insert(*a, backward_trace(sys, &AtomSet::singleton(*a), h)?);
            }
        }
    }
    let norm = |values: &BTreeMap<Atom, S>, n: u64| -> Result<ExtendedWeight<S>> {
        let mut acc = ExtendedWeight::zero();
        for (a, v) in values {
            acc = acc + traces[a][n as usize].scale(&abs_pow(v, &p)?);
        }
        Ok(acc)
    };
    // n ↦ μ(f^{-n}(B_i)); a member disjoint from the current support adds
    // |c|^p times this to the orbit norms
    let member_mass: Vec<Vec<ExtendedWeight<S>>> = family
        .iter()
        .map(|b| (0..=h).map(|n| ExtendedWeight::sum(b.iter().map(|a| traces[a][n as usize].clone()))).collect())
        .collect();
    let half_tol = tol_down.clone() / S::from_int(2);
    let tol = ExtendedWeight::Finite(tol_down.clone());
    let half = ExtendedWeight::Finite(half_tol);
    let up = ExtendedWeight::Finite(bound_up.clone());
    // |c|^p for c = 2^{-e·den(p)}, smallest coefficient first
    let coeffs: Vec<(S, S)> = (-COEFF_RANGE..=COEFF_RANGE)
        .rev()
        .map(|e| {
            let c = S::pow2(-e * p.den() as i64);
            (c, S::pow2(-e * p.num() as i64))
        })
        .collect();

    let mut values: BTreeMap<Atom, S> = BTreeMap::new();
    let mut terms = Vec::new();
    let (mut ups, mut downs): (Vec<u64>, Vec<u64>) = (Vec::new(), Vec::new());
    'grow: loop {
        let base: Vec<ExtendedWeight<S>> = (0..=h).map(|n| norm(&values, n)).collect::<Result<_>>()?;
        let start = downs.last().map_or(1, |d| d + 1);
        for n in start..=h {
            for (idx, b) in family.iter().enumerate() {
                if b.iter().any(|a| values.contains_key(a)) {
                    continue;
                }
                let m = &member_mass[idx];
                let at = |t: u64, cp: &S| base[t as usize].clone() + m[t as usize].scale(cp);
                let Some((c, cp)) = coeffs.iter().find(|(_, cp)| at(n, cp) >= up) else {
                    continue;
                };
                if downs.iter().any(|&d| at(d, cp) > tol) {
                    continue;
                }
                let Some(d) = (n + 1..=h).find(|&d| at(d, cp) <= half) else {
                    continue;
                };
                for a in b {
                    values.insert(*a, c.clone());
                }
                terms.push((idx, c.clone()));
                ups.push(n);
                downs.push(d);
                continue 'grow;
            }
        }
        break;
    }
    let reached = (ups.len() + downs.len()).saturating_sub(1);
    if reached < min_interleavings || ups.is_empty() {
        return Err(Error::BudgetExhausted {
            reached,
            requested: min_interleavings,
        });
    }
    let vector = SimpleFunction::new(sys, values, p)?;
    let trace = orbit_norms(sys, &vector, h)?;
    let cert = IrregularVectorCertificate {
        vector,
        terms,
        up_times: ups,
        down_times: downs,
        tol_down,
        bound_up,
        horizon: h,
        trace,
        heuristic: true,
    };
    verify_irregular(sys, &cert).map_err(Error::InvalidSystem)?;
    Ok(cert)
}

fn check_times<S: Scalar>(trace: &OrbitTrace<S>, ups: &[u64], downs: &[u64], up: &S, down: &S) -> std::result::Result<(), String> {
    if ups.len() != downs.len() {
        return Err("up and down times must pair up".into());
    }
    let mut last = None;
    for (u, d) in ups.iter().zip(downs) {
        if last.is_some_and(|l| l >= *u) || u >= d {
            return Err("times must alternate u_1 < d_1 < u_2 < …".into());
        }
        last = Some(*d);
        let at = |t: u64| trace.values.get(t as usize).cloned().ok_or(format!("time {t} beyond the trace"));
        if at(*u)? < ExtendedWeight::Finite(up.clone()) {
            return Err(format!("‖T^{u}φ‖^p = {} below {up}", at(*u)?));
        }
        if at(*d)? > ExtendedWeight::Finite(down.clone()) {
            return Err(format!("‖T^{d}φ‖^p = {} above {down}", at(*d)?));
        }
    }
    Ok(())
}

/// Replays the certificate through [`orbit_norms`].
pub fn verify_irregular<S: Scalar>(sys: &AtomicSystem<S>, cert: &IrregularVectorCertificate<S>) -> std::result::Result<(), String> {
    let trace = orbit_norms(sys, &cert.vector, cert.horizon).map_err(|e| e.to_string())?;
    if trace != cert.trace {
        return Err("orbit norms do not re-derive".into());
    }
    check_times(&trace, &cert.up_times, &cert.down_times, &cert.bound_up, &cert.tol_down)
}

/// The pair `(λ_a z, λ_b z)`; its difference orbit is `|λ_a − λ_b|^p` times
/// the orbit of `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiYorkePair<S> {
    pub a: S,
    pub b: S,
    /// `|λ_a − λ_b|^p`.
    pub factor: S,
    /// Times where the difference norm is at most `factor · tol_down`.
    pub proximal_times: Vec<u64>,
    /// Times where it is at least `factor · bound_up`.
    pub distal_times: Vec<u64>,
    pub trace: OrbitTrace<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiYorkePairFamily<S> {
    pub pairs: Vec<LiYorkePair<S>>,
    pub tol_down: S,
    pub bound_up: S,
}

/// All pairs of distinct multiples of `z`, each replayed through
/// [`orbit_norms`].
pub fn scrambled_pairs<S: Scalar>(sys: &AtomicSystem<S>, z: &IrregularVectorCertificate<S>, scalars: &[S]) -> Result<LiYorkePairFamily<S>> {
    for i in 0..scalars.len() {
        if scalars[..i].contains(&scalars[i]) {
            return Err(Error::DuplicateScalars);
        }
    }
    let p = z.vector.p();
    let mut pairs = Vec::new();
    for i in 0..scalars.len() {
        for j in i + 1..scalars.len() {
            let (a, b) = (scalars[i].clone(), scalars[j].clone());
            let factor = abs_pow(&(a.clone() - b.clone()), &p)?;
            let diff = z.vector.scale(&a).sub(&z.vector.scale(&b))?;
            let trace = orbit_norms(sys, &diff, z.horizon)?;
            let pair = LiYorkePair {
                a,
                b,
                factor,
                proximal_times: z.down_times.clone(),
                distal_times: z.up_times.clone(),
                trace,
            };
            verify_pair(z, &pair).map_err(Error::InvalidSystem)?;
            pairs.push(pair);
        }
    }
    Ok(LiYorkePairFamily {
        pairs,
        tol_down: z.tol_down.clone(),
        bound_up: z.bound_up.clone(),
    })
}

/// Entrywise transfer `trace = factor · trace(z)` and the thresholds at the
/// recorded times.
pub fn verify_pair<S: Scalar>(z: &IrregularVectorCertificate<S>, pair: &LiYorkePair<S>) -> std::result::Result<(), String> {
    if pair.trace.values.len() != z.trace.values.len() {
        return Err("trace lengths differ".into());
    }
    for (n, (d, v)) in pair.trace.values.iter().zip(&z.trace.values).enumerate() {
        if *d != v.scale(&pair.factor) {
            return Err(format!("difference norm at {n} is not |λ_a − λ_b|^p times the orbit of z"));
        }
    }
    check_times(
        &pair.trace,
        &pair.distal_times,
        &pair.proximal_times,
        &(pair.factor.clone() * z.bound_up.clone()),
        &(pair.factor.clone() * z.tol_down.clone()),
    )
}

// ---------------------------------------------------------------------------
// obstruction to generic Li-Yorke chaos

/// `χ_X` for a finite total measure never approaches 0: `f^{-n}(X) = X`, so
/// `‖T_f^n χ_X‖^p = μ(X) > 0`. The window check confirms that `f` maps every
/// window atom into the space, so no mass of `X` is lost under preimages.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstruction<S> {
    /// `μ(X)` when known exactly, otherwise an upper bound.
    pub total: S,
    pub exact_total: bool,
    pub radius: u64,
}

pub fn generic_ly_obstruction<S: Scalar>(sys: &AtomicSystem<S>, radius: u64) -> Result<Obstruction<S>> {
    let (total, exact_total) = match (sys.total_measure(), &sys.space) {
        (Some(ExtendedWeight::Finite(t)), _) => (t, true),
        (Some(ExtendedWeight::Infinite), _) => return Err(Error::InfiniteTotalMeasure),
        (None, Space::Absorbing(AbsorbingFamily::Fdg)) => {
            // column i ≥ 2 carries δ_i(3·2^i − 1) < 2^{1−3i}, summing below 1/28
            let fam = AbsorbingFamily::Fdg;
            (fam.column_total::<S>(1) + S::from_ratio(1, 28), false)
        }
        (None, _) => return Err(Error::SymbolicSetUnsupported("total measure".into())),
    };
    if !total.is_positive() {
        return Err(Error::ZeroMeasureSet);
    }
    for a in sys.window_atoms(radius) {
        let y = sys.image(&a)?;
        if !sys.contains(&y) {
            return Err(Error::AtomOutsideSpace(y));
        }
    }
    Ok(Obstruction { total, exact_total, radius })
}
