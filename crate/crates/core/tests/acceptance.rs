//! The ten acceptance criteria. Runs as a plain binary so that every
//! criterion prints one `PASS`/`FAIL` line; exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_traits::Signed;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use liyorke::atom::AtomSet;
use liyorke::audit::audit_implications;
use liyorke::conjugacy::{verify_conjugacy, CoordinateMap, ForwardShift};
use liyorke::constructions::{
    build_irregular_vector, build_ly6_set, build_wandering, scrambled_pairs, verify_irregular, verify_ly6_set, verify_pair,
    verify_wandering, IndexSearch, DEFAULT_MAX_INDEX,
};
use liyorke::decide::decide;
use liyorke::lp::{apply_tf, finite_window_atoms, orbit_norms, orbit_norms_oracle, SimpleFunction};
use liyorke::measure::{expansion_constants, image_set, preimage_set, set_measure};
use liyorke::oracle::{Direction, Thm2Claim};
use liyorke::profile::ZProfile;
use liyorke::sequence::{SeqRule, Sequence};
use liyorke::shift::{check_weighted_shift, window_max_product, window_max_product_oracle, ShiftRule, WeightedShift};
use liyorke::system::{AtomicSystem, Space, Table};
use liyorke::verdict::{CriterionId, Status, Witness};
use liyorke::{gallery, Atom, Exponent, ExtendedWeight, Rational, Scalar};

// Pinned parameters. Every comparison below is exact (zero tolerance).
const C1_SYSTEMS: usize = 50;
const C1_MAX_ATOMS: usize = 12;
const C2_VECTORS: usize = 10;
const HORIZON: u64 = 64;
const C3_TRIPLES: usize = 100;
const C5_CORRUPTED: usize = 10;
const C6_J: usize = 5;
const C7_K: usize = 4;
const C8_N: i64 = 200;
const C8_INSTANCES: usize = 30;
const C9_TRIALS: usize = 25;
const C10_MIN_INTERLEAVINGS: usize = 3;

type Q = Rational;
type Check = Result<String, String>;

fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn finite(w: ExtendedWeight<Q>) -> Result<Q, String> {
    w.into_finite().ok_or_else(|| "unexpected infinite measure".to_string())
}

fn random_rational(rng: &mut StdRng) -> Q {
    q(rng.gen_range(1..=8), rng.gen_range(1..=4))
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Check {
    let mut rng = StdRng::seed_from_u64(1);
    for trial in 0..C1_SYSTEMS {
        let n = rng.gen_range(1..=C1_MAX_ATOMS);
        let mu: Vec<Q> = (0..n).map(|_| random_rational(&mut rng)).collect();
        let f: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let entries = (0..n)
            .map(|i| (Atom::Point(i as i64), (ExtendedWeight::Finite(mu[i].clone()), Atom::Point(f[i] as i64))))
            .collect();
        let sys = AtomicSystem::new("random", Space::Table(Table::new(entries, BTreeSet::new()).map_err(|e| e.to_string())?));
        let got = expansion_constants(&sys, 0).map_err(|e| e.to_string())?.c_lower;
        // brute force over all 2^n − 1 nonempty subsets
        let mut best: Option<Q> = None;
        for mask in 1u32..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let image: BTreeSet<usize> = members.iter().map(|&i| f[i]).collect();
            let mb: Q = members.iter().map(|&i| mu[i].clone()).fold(q(0, 1), |a, b| a + b);
            let mfb: Q = image.iter().map(|&i| mu[i].clone()).fold(q(0, 1), |a, b| a + b);
            let r = mfb / mb;
            best = Some(match best {
                Some(b) if b <= r => b,
                _ => r,
            });
        }
        let want = ExtendedWeight::Finite(best.unwrap());
        ensure(got == want, || format!("system {trial} ({n} atoms): c_lower {got} but brute force {want}"))?;
    }
    Ok(format!("{C1_SYSTEMS} random systems with ≤ {C1_MAX_ATOMS} atoms match the subset brute force"))
}

fn random_vector(sys: &AtomicSystem<Q>, rng: &mut StdRng, p: Exponent) -> Result<SimpleFunction<Q>, String> {
    let pool = finite_window_atoms(sys, 6);
    let len = rng.gen_range(1..=5.min(pool.len()));
    let values: Vec<(Atom, Q)> = pool
        .choose_multiple(rng, len)
        .map(|&a| {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            (a, q(sign * rng.gen_range(1..=9), rng.gen_range(1..=4)))
        })
        .collect();
    SimpleFunction::new(sys, values, p).map_err(|e| e.to_string())
}

fn criterion_2() -> Check {
    let mut rng = StdRng::seed_from_u64(2);
    let mut count = 0;
    for e in gallery::entries() {
        let sys = (e.build)();
        for i in 0..C2_VECTORS {
            let p = if i % 2 == 0 { Exponent::ONE } else { Exponent::TWO };
            let phi = random_vector(&sys, &mut rng, p)?;
            let a = orbit_norms(&sys, &phi, HORIZON).map_err(|e| e.to_string())?;
            let b = orbit_norms_oracle(&sys, &phi, HORIZON).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("{}: orbit norms differ for {phi:?}", e.name))?;
            count += 1;
        }
    }
    Ok(format!("{count} vectors agree entrywise at H = {HORIZON}"))
}

fn criterion_3() -> Check {
    let mut rng = StdRng::seed_from_u64(3);
    let entries = gallery::entries();
    for t in 0..C3_TRIPLES {
        let e = &entries[rng.gen_range(0..entries.len())];
        let sys = (e.build)();
        let pool = finite_window_atoms(&sys, 5);
        let len = rng.gen_range(1..=4.min(pool.len()));
        let b: Vec<Atom> = pool.choose_multiple(&mut rng, len).copied().collect();
        let k = rng.gen_range(0..=HORIZON);
        let p = if t % 2 == 0 { Exponent::ONE } else { Exponent::TWO };
        let mut phi = SimpleFunction::indicator(&sys, &b, p).map_err(|e| e.to_string())?;
        for _ in 0..k {
            phi = apply_tf(&sys, &phi).map_err(|e| e.to_string())?;
        }
        let lhs = phi.norm_p(&sys).map_err(|e| e.to_string())?;
        let set: AtomSet = b.iter().copied().collect();
        let rhs = set_measure(&sys, &preimage_set(&sys, &set, k).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("{} B={b:?} k={k}: ‖T^k χ_B‖^p = {lhs}, μ(f^-k(B)) = {rhs}", e.name))?;
    }
    Ok(format!("{C3_TRIPLES} random (system, B, k ≤ {HORIZON}) triples"))
}

fn ly_statuses(report: &gallery::EntryReport) -> BTreeMap<CriterionId, Status> {
    report
        .statuses()
        .into_iter()
        .filter(|(c, _)| CriterionId::LY.contains(c))
        .collect()
}

fn criterion_4() -> Check {
    use CriterionId::*;
    use Status::*;
    let mut unknown = 0;
    let mut reports = BTreeMap::new();
    for e in gallery::entries() {
        let r = gallery::run_entry(e.name, HORIZON).map_err(|err| err.to_string())?;
        ensure(r.mismatches.is_empty(), || format!("{}: mismatches {:?}", e.name, r.mismatches))?;
        ensure(r.replay_failures.is_empty(), || format!("{}: replay {:?}", e.name, r.replay_failures))?;
        for (c, _) in e.expected() {
            if r.verdicts.get(&c).map(|v| v.status) == Some(UnknownAtHorizon) {
                unknown += 1;
            }
        }
        reports.insert(e.name, r);
    }
    ensure(unknown == 0, || format!("{unknown} Unknown cells"))?;

    let only = |name: &str, proved: &[CriterionId]| -> Result<(), String> {
        let st = ly_statuses(&reports[name]);
        for c in CriterionId::LY {
            let want = if proved.contains(&c) { Proved } else { Refuted };
            ensure(st.get(&c) == Some(&want), || format!("{name}: {c} is {:?}, expected {want}", st.get(&c)))?;
        }
        Ok(())
    };
    only("notfinite", &[Ly2, Ly3])?;
    only("ly4-only", &[Ly4])?;

    let inli = ly_statuses(&reports["inli"]);
    for c in [Ly6, Ly7, Ly1] {
        ensure(inli[&c] == Proved, || format!("inli: {c} not Proved"))?;
    }
    let inverse = gallery::inli::<Q>().inverse().ok_or("inli has no inverse")?;
    let inv = decide(&inverse, HORIZON).map_err(|e| e.to_string())?;
    ensure(inv[&Ly1].status == Refuted, || "inli inverse is Li-Yorke chaotic".into())?;

    let nj = ly_statuses(&reports["ninjective"]);
    ensure(nj[&Ly2] == Proved && nj[&Ly3] == Proved && nj[&Ly1] == Refuted, || format!("ninjective: {nj:?}"))?;

    let ex = &reports["exinjcor2"];
    ensure(ly_statuses(ex)[&Ly1] == Refuted, || "exinjcor2: LY1 not Refuted".into())?;
    match &ex.verdicts[&Thm2B].witness {
        Witness::Family(Thm2Claim::Fails { sup, .. }) => ensure(*sup == q(1, 2), || format!("exinjcor2: THM2_B sup {sup}"))?,
        w => return Err(format!("exinjcor2: THM2_B witness {w:?}")),
    }
    Ok(format!("{} entries reproduce their tables, 0 Unknown cells", reports.len()))
}

/// Reachability read straight off the implication diagram, by DFS.
fn diagram_implies(flags: &liyorke::system::Flags, a: CriterionId, b: CriterionId) -> bool {
    use CriterionId::*;
    let mut arrows = vec![(Ly6, Ly7), (Ly7, Ly6), (Ly7, Ly1), (Ly1, Ly2), (Ly2, Ly3), (Ly3, Ly2), (Ly5, Ly3), (Ly5, Ly4)];
    if flags.finite_measure {
        arrows.push((Ly4, Ly5));
    }
    if flags.injective {
        arrows.push((Ly5, Ly6));
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![a];
    while let Some(x) = stack.pop() {
        if x == b {
            return true;
        }
        if seen.insert(x) {
            stack.extend(arrows.iter().filter(|(s, _)| *s == x).map(|(_, t)| *t));
        }
    }
    false
}

fn consistent(flags: &liyorke::system::Flags, st: &BTreeMap<CriterionId, Status>) -> bool {
    st.iter().all(|(a, sa)| {
        st.iter()
            .all(|(b, sb)| !(*sa == Status::Proved && *sb == Status::Refuted && diagram_implies(flags, *a, *b)))
    })
}

fn criterion_5() -> Check {
    let mut flagged = 0;
    let mut corrupted = 0;
    let mut flips = Vec::new();
    for e in gallery::entries() {
        let r = gallery::run_entry(e.name, HORIZON).map_err(|err| err.to_string())?;
        let sys = (e.build)();
        let st = ly_statuses(&r);
        ensure(audit_implications(&st, &sys.flags).is_empty(), || format!("{}: violations in the real report", e.name))?;
        for c in CriterionId::LY {
            let mut bad = st.clone();
            bad.insert(c, st[&c].negate());
            flips.push((e.name, sys.flags, c, bad));
        }
    }
    // every single flip: the audit must agree with the diagram
    for (name, flags, c, bad) in &flips {
        let audited = !audit_implications(bad, flags).is_empty();
        let inconsistent = !consistent(flags, bad);
        ensure(audited == inconsistent, || format!("{name} with {c} flipped: audit {audited}, diagram {inconsistent}"))?;
    }
    // ten corrupted reports, round-robin over the entries
    let mut by_entry: BTreeMap<&str, Vec<_>> = BTreeMap::new();
    for f in flips.iter().filter(|(_, flags, _, bad)| !consistent(flags, bad)) {
        by_entry.entry(f.0).or_default().push(f);
    }
    let mut round = 0;
    while corrupted < C5_CORRUPTED {
        let mut progressed = false;
        for list in by_entry.values() {
            if corrupted < C5_CORRUPTED {
                if let Some((_, flags, _, bad)) = list.get(round) {
                    corrupted += 1;
                    progressed = true;
                    if !audit_implications(bad, flags).is_empty() {
                        flagged += 1;
                    }
                }
            }
        }
        ensure(progressed, || format!("only {corrupted} inconsistent flips available"))?;
        round += 1;
    }
    ensure(flagged == C5_CORRUPTED, || format!("{flagged} of {C5_CORRUPTED} corrupted reports flagged"))?;
    Ok(format!(
        "0 violations in 9 reports; {flagged}/{C5_CORRUPTED} corrupted reports flagged; audit matches the diagram on all {} flips",
        flips.len()
    ))
}

fn translates(sys: &AtomicSystem<Q>, dir: Direction, w: &[Atom], ks: &[u64]) -> Result<Vec<BTreeSet<Atom>>, String> {
    let set: AtomSet = w.iter().copied().collect();
    std::iter::once(0)
        .chain(ks.iter().copied())
        .map(|k| {
            let s = match dir {
                Direction::Backward => preimage_set(sys, &set, k),
                Direction::Forward => image_set(sys, &set, k),
            }
            .map_err(|e| e.to_string())?;
            s.atoms().cloned().ok_or_else(|| "symbolic translate".to_string())
        })
        .collect()
}

fn criterion_6() -> Check {
    let b = [Atom::Point(0)];
    let mut out = Vec::new();
    for (name, dir) in [
        ("ly4-only", Direction::Backward),
        ("notfinite", Direction::Forward),
        ("inli", Direction::Forward),
    ] {
        let sys = gallery::build(name).map_err(|e| e.to_string())?;
        let mb = finite(set_measure(&sys, &b.iter().copied().collect()).map_err(|e| e.to_string())?)?;
        for delta in [None, Some(mb.clone() / q(100, 1))] {
            let c = build_wandering(&sys, dir, &b, C6_J, delta.clone(), IndexSearch::Exact, DEFAULT_MAX_INDEX)
                .map_err(|e| format!("{name}: {e}"))?;
            verify_wandering(&sys, &c).map_err(|e| format!("{name}: {e}"))?;
            ensure(c.ks.len() == C6_J, || format!("{name}: J = {}", c.ks.len()))?;
            let ts = translates(&sys, dir, &c.wandering, &c.ks)?;
            for i in 0..ts.len() {
                for j in i + 1..ts.len() {
                    ensure(ts[i].is_disjoint(&ts[j]), || format!("{name}: translates {i} and {j} meet"))?;
                }
            }
            let mw = finite(set_measure(&sys, &c.wandering.iter().copied().collect()).map_err(|e| e.to_string())?)?;
            ensure(mw.clone() * q(2, 1) >= mb, || format!("{name}: μ(W) = {mw} < μ(B)/2"))?;
            if let Some(d) = &delta {
                ensure(mb.clone() - mw.clone() < d.clone(), || format!("{name}: μ(B∖W) ≥ {d}"))?;
            }
            out.push(format!("{name} {dir} ks {:?}", c.ks));
        }
    }
    Ok(out.join("; "))
}

fn criterion_7() -> Check {
    let sys = gallery::inli::<Q>();
    let b = [Atom::Point(0)];
    let c = build_ly6_set(&sys, &b, C7_K, IndexSearch::Exact, 1 << 12).map_err(|e| e.to_string())?;
    verify_ly6_set(&sys, &c)?;
    let a: AtomSet = c.set.iter().copied().collect();
    let mb = finite(set_measure(&sys, &b.iter().copied().collect()).map_err(|e| e.to_string())?)?;
    for (j, &m) in c.ms.iter().enumerate() {
        let v = finite(set_measure(&sys, &preimage_set(&sys, &a, m).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?)?;
        let bound = Q::pow2(-(j as i64));
        ensure(v <= bound, || format!("μ(f^-{m}(A)) = {v} > {bound}"))?;
    }
    for &n in &c.ns {
        let v = finite(set_measure(&sys, &preimage_set(&sys, &a, n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?)?;
        ensure(v >= mb, || format!("μ(f^-{n}(A)) = {v} < μ(B)"))?;
    }
    Ok(format!("{} route, ns {:?}, ms {:?}", c.route.as_str(), c.ns, c.ms))
}

fn shift_instances(rng: &mut StdRng) -> Vec<(String, WeightedShift<Q>)> {
    let pick = |rng: &mut StdRng| [q(1, 2), q(2, 3), q(1, 1), q(3, 2), q(2, 1)][rng.gen_range(0..5)].clone();
    let period = |rng: &mut StdRng| -> Vec<Q> { (0..rng.gen_range(1..=4)).map(|_| pick(rng)).collect() };
    let mut out = Vec::new();
    for i in 0..C8_INSTANCES / 3 {
        let rule = ShiftRule::Periodic {
            left: period(rng),
            window: period(rng),
            start: rng.gen_range(-5..=5),
            right: period(rng),
        };
        out.push((format!("periodic #{i}"), WeightedShift::new(rule, Exponent::ONE).unwrap()));
    }
    for i in 0..C8_INSTANCES / 3 {
        let rule = ShiftRule::LogLinear {
            left: pick(rng),
            right: pick(rng),
        };
        out.push((format!("log-linear #{i}"), WeightedShift::new(rule, Exponent::ONE).unwrap()));
    }
    for i in 0..C8_INSTANCES / 3 {
        let side = |rng: &mut StdRng| -> Sequence<Q> {
            match rng.gen_range(0..3) {
                0 => Sequence::from_rule(SeqRule::Blocks {
                    base: q(1, 1),
                    factor: [q(1, 2), q(2, 1)][rng.gen_range(0..2)].clone(),
                    offset: rng.gen_range(0..6),
                }),
                1 => Sequence::from_rule(SeqRule::constant(q(1, 1))),
                _ => Sequence::from_rule(SeqRule::geometric(q(1, 2), q(1, 2))),
            }
        };
        let profile = ZProfile::new(side(rng), side(rng));
        out.push((format!("block #{i}"), WeightedShift::new(ShiftRule::FromProfile(profile), Exponent::ONE).unwrap()));
    }
    out
}

fn criterion_8() -> Check {
    let mut rng = StdRng::seed_from_u64(8);
    let mut tally = BTreeMap::new();
    for (name, shift) in shift_instances(&mut rng) {
        let full = window_max_product_oracle(&shift, C8_N);
        let half = window_max_product_oracle(&shift, C8_N / 2);
        ensure(window_max_product(&shift, C8_N) == full, || format!("{name}: linear scan differs from the oracle"))?;
        let v = check_weighted_shift(&shift, HORIZON).map_err(|e| e.to_string())?;
        let grows = full > half;
        match (&v.status, &v.witness) {
            (Status::Proved, _) => ensure(grows, || format!("{name}: Proved but the window max is stable at {full}"))?,
            (Status::Refuted, Witness::Ratio { sup: Some(s), .. }) => {
                ensure(!grows && *s == full, || format!("{name}: Refuted with sup {s}, oracle {half} → {full}"))?
            }
            (s, w) => return Err(format!("{name}: {s} with {w:?}")),
        }
        *tally.entry(v.status.to_string()).or_insert(0) += 1;
    }
    let status = |s: WeightedShift<Q>| check_weighted_shift(&s, HORIZON).map(|v| v.status).map_err(|e| e.to_string());
    ensure(status(WeightedShift::constant(q(1, 1)).unwrap())? == Status::Refuted, || "w ≡ 1 not Refuted".into())?;
    ensure(status(WeightedShift::constant(q(2, 1)).unwrap())? == Status::Proved, || "w ≡ 2 not Proved".into())?;
    let ly1 = gallery::ly1_not_ly4ly7::<Q>();
    let (profile, _) = ly1.line_profile().ok_or("ly1-not-ly4ly7 is not a line")?;
    let derived = WeightedShift::new(ShiftRule::FromProfile(profile.clone()), Exponent::ONE).map_err(|e| e.to_string())?;
    ensure(status(derived)? == Status::Proved, || "ly1-not-ly4ly7 weights not Proved".into())?;
    Ok(format!("{C8_INSTANCES} instances agree at N = {C8_N} ({tally:?}); w≡1 R, w≡2 P, ly1-not-ly4ly7 weights P"))
}

fn criterion_9() -> Check {
    let sys = gallery::se4::<Q>();
    let shift = ForwardShift {
        weights: Sequence::from_rule(gallery::se4_weights()),
    };
    let ok = verify_conjugacy(&shift, &sys, CoordinateMap::CHAIN, Exponent::TWO, C9_TRIALS, gallery::SE4_CONJUGACY_SEED)
        .map_err(|e| e.to_string())?;
    ensure(ok, || "conjugacy check failed".into())?;
    let radius = sys.flags.constants_exact_from.unwrap_or(8);
    let c = expansion_constants(&sys, radius).map_err(|e| e.to_string())?;
    ensure(c.exact && c.c_lower == ExtendedWeight::Finite(q(1, 4)), || format!("c = {} (exact: {})", c.c_lower, c.exact))?;
    Ok(format!("{C9_TRIALS} vectors isometric and intertwined; c = 1/4"))
}

fn criterion_10() -> Check {
    let sys = gallery::infmeasconvcor2::<Q>();
    let family: Vec<Vec<Atom>> = (1..=64).map(|i| vec![Atom::Cell(i, 0)]).collect();
    let (tol, up) = (q(1, 16), q(4, 1));
    let z = build_irregular_vector(&sys, &family, HORIZON, tol.clone(), up.clone(), Exponent::ONE, C10_MIN_INTERLEAVINGS)
        .map_err(|e| e.to_string())?;
    verify_irregular(&sys, &z)?;
    ensure(z.interleavings() >= C10_MIN_INTERLEAVINGS, || format!("{} interleavings", z.interleavings()))?;
    let fam = scrambled_pairs(&sys, &z, &[q(1, 1), q(2, 1), q(3, 1)]).map_err(|e| e.to_string())?;
    ensure(fam.pairs.len() == 3, || format!("{} pairs", fam.pairs.len()))?;
    for pair in &fam.pairs {
        verify_pair(&z, pair)?;
        // independent replay of ‖T^n (aφ − bφ)‖ by iterating T_f
        let diff = z.vector.scale(&(pair.a.clone() - pair.b.clone()));
        let norms = orbit_norms_oracle(&sys, &diff, HORIZON).map_err(|e| e.to_string())?;
        let k = (pair.a.clone() - pair.b.clone()).abs();
        for &n in &pair.proximal_times {
            ensure(norms.values[n as usize] <= ExtendedWeight::Finite(k.clone() * tol.clone()), || format!("pair not close at {n}"))?;
        }
        for &n in &pair.distal_times {
            ensure(norms.values[n as usize] >= ExtendedWeight::Finite(k.clone() * up.clone()), || format!("pair not apart at {n}"))?;
        }
    }
    Ok(format!(
        "{} interleavings (ups {:?}, downs {:?}); 3 pairs replayed",
        z.interleavings(),
        z.up_times,
        z.down_times
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("expansion-constant oracle", criterion_1),
        ("orbit-norm dual path", criterion_2),
        ("characteristic-function identity", criterion_3),
        ("gallery truth tables", criterion_4),
        ("implication audit", criterion_5),
        ("wandering certificates", criterion_6),
        ("LY6-set certificate", criterion_7),
        ("weighted-shift decision", criterion_8),
        ("se4 conjugacy", criterion_9),
        ("irregular vector and pairs", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = run();
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.2}s): {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
