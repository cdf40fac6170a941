//! Built-in examples: a sequence (when there is one), a formal portrait and
//! the facts expected of them.

use std::f64::consts::TAU;

use crate::angle::{Angle, AngleSet, Arc};
use crate::error::{Error, Result};
use crate::lamination::{face_groups, parse_chords, Chord};
use crate::poly::{Generator, Polynomial, PolynomialSequence, SequenceBounds, C64};
use crate::portrait::{DegreeSequence, FormalPortrait};
use crate::rays::{coland_clusters, landing_point, measure_matching, RayConfig};
use crate::verify::sectors::sector_theorem_check;
use crate::verify::words::{word_angle, word_portrait, word_sequence};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Stated in the literature the example is drawn from.
    Literature,
    /// Derived here by an independent computation (closed form or enumeration).
    Computed,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expectation {
    Valid,
    Extend { time: usize, set: AngleSet },
    Preperiodicity { preperiod: usize, period: usize },
    CriticalStructure { time: usize, arc: Arc, value: Arc, k: u64 },
    /// Lamination produced by `matching` at `time`, in display form.
    Lamination { time: usize, matching: Vec<Chord>, display: String },
    /// Rotation taking the other constant-degree portrait onto this one.
    Equivalent { other: AngleSet, degree: u64, theta: Angle },
    Landing { time: usize, angle: Angle, point: C64, tol: f64 },
    Cluster { time: usize, angles: Vec<Angle>, point: C64, tol: f64 },
    /// Chords realized by co-landing at `time`.
    Matching { time: usize, chords: Vec<Chord> },
    /// Sector check passes at `time`.
    Sectors { time: usize },
    /// Critical orbits stay in `points` (to 10⁻¹⁰) up to time `horizon`.
    Postcritical { points: Vec<C64>, horizon: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fact {
    pub label: String,
    pub provenance: Provenance,
    pub expect: Expectation,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub title: String,
    /// None for combinatorial-only entries.
    pub sequence: Option<PolynomialSequence>,
    pub portrait: FormalPortrait,
    pub facts: Vec<Fact>,
}

pub const IDS: [&str; 6] = ["cubic_fixed", "cubic_portrait12", "rabbit_rotation", "word_seq(<word>)", "e5_quadratic", "degree6_lamination"];

/// The rabbit parameter, at the precision it is usually quoted.
pub const RABBIT_C: (f64, f64) = (-0.122561, 0.744862);

fn a(s: &str) -> Angle {
    s.parse().expect("catalog angle literal")
}

fn set(s: &str) -> AngleSet {
    AngleSet::parse_list(s).expect("catalog set literal")
}

fn arc(s: &str, e: &str) -> Arc {
    Arc::new(a(s), a(e)).expect("catalog arc literal")
}

fn fact(label: &str, provenance: Provenance, expect: Expectation) -> Fact {
    Fact { label: label.to_string(), provenance, expect }
}

pub fn cubic_sequence() -> PolynomialSequence {
    PolynomialSequence::constant(
        Polynomial::from_real(&[0.0, 1.5, 0.0, 1.0]).expect("cubic"),
        SequenceBounds::new(3, 1.0, 1.5).expect("bounds"),
    )
    .expect("cubic within bounds")
}

/// z² + ω²c at odd times and z² + ωc at even times, ω = e^{2πi/3}.
pub fn rabbit_rotation_sequence() -> PolynomialSequence {
    let w = C64::from_polar(1.0, TAU / 3.0);
    let c = C64::new(RABBIT_C.0, RABBIT_C.1);
    PolynomialSequence::new(
        Generator::Periodic { pre: vec![], per: vec![Polynomial::unicritical(2, w * w * c), Polynomial::unicritical(2, w * c)] },
        SequenceBounds::new(2, 1.0, 1.0).expect("bounds"),
    )
    .expect("rabbit within bounds")
}

/// Fixed point (1 − √(1−4c))/2 of z² + c where the rabbit's three rays land.
pub fn rabbit_alpha() -> C64 {
    let c = C64::new(RABBIT_C.0, RABBIT_C.1);
    let one = C64::new(1.0, 0.0);
    (one - (one - c * 4.0).sqrt()) / 2.0
}

pub fn get_example(id: &str) -> Result<CatalogEntry> {
    use Expectation::*;
    use Provenance::*;
    let id = id.trim();
    if let Some(rest) = id.strip_prefix("word_seq(").and_then(|r| r.strip_suffix(')')) {
        let word = rest.trim_matches('"');
        return word_entry(word);
    }
    let entry = match id {
        "cubic_fixed" => {
            let s15 = 1.5f64.sqrt();
            CatalogEntry {
                id: id.into(),
                title: "z³ + 3z/2: rays 0 and 1/2 land at the repelling fixed point 0".into(),
                sequence: Some(cubic_sequence()),
                portrait: FormalPortrait::constant(set("0, 1/2"), 3)?,
                facts: vec![
                    fact("portrait valid", Literature, Valid),
                    fact("ray 0 lands at 0", Literature, Landing { time: 0, angle: a("0"), point: C64::new(0.0, 0.0), tol: 1e-6 }),
                    fact("ray 1/2 lands at 0", Literature, Landing { time: 0, angle: a("1/2"), point: C64::new(0.0, 0.0), tol: 1e-6 }),
                    fact(
                        "rays 0 and 1/2 co-land",
                        Literature,
                        Cluster { time: 0, angles: vec![a("0"), a("1/2")], point: C64::new(0.0, 0.0), tol: 1e-6 },
                    ),
                    fact(
                        "ray 1/6 lands at i√(3/2)",
                        Literature,
                        Landing { time: 0, angle: a("1/6"), point: C64::new(0.0, s15), tol: 1e-6 },
                    ),
                ],
            }
        }
        "cubic_portrait12" => {
            let s15 = 1.5f64.sqrt();
            CatalogEntry {
                id: id.into(),
                title: "z³ + 3z/2: portrait {1/6, 1/3} ↦ {0, 1/2} ↦ {0, 1/2} …".into(),
                sequence: Some(cubic_sequence()),
                portrait: FormalPortrait::constant(set("1/6, 1/3"), 3)?,
                facts: vec![
                    fact("portrait valid", Literature, Valid),
                    fact("A_1 = {0, 1/2}", Literature, Extend { time: 1, set: set("0, 1/2") }),
                    fact("preperiod 1, period 1", Literature, Preperiodicity { preperiod: 1, period: 1 }),
                    fact(
                        "critical arc (1/3,1/6) covers (0,1/2) three times",
                        Literature,
                        CriticalStructure { time: 0, arc: arc("1/3", "1/6"), value: arc("0", "1/2"), k: 3 },
                    ),
                    fact(
                        "rays 1/6 and 1/3 land at i√(3/2)",
                        Literature,
                        Cluster { time: 0, angles: vec![a("1/6"), a("1/3")], point: C64::new(0.0, s15), tol: 1e-6 },
                    ),
                    fact(
                        "rays 2/3 and 5/6 land at −i√(3/2)",
                        Literature,
                        Cluster { time: 0, angles: vec![a("2/3"), a("5/6")], point: C64::new(0.0, -s15), tol: 1e-6 },
                    ),
                    fact(
                        "measured matching at time 0",
                        Computed,
                        Matching { time: 0, chords: parse_chords("{1/6,1/3},{2/3,5/6},{0,1/2}").expect("chords") },
                    ),
                    fact("sector structure at time 0", Literature, Sectors { time: 0 }),
                ],
            }
        }
        "rabbit_rotation" => {
            let w = C64::from_polar(1.0, TAU / 3.0);
            let al = rabbit_alpha();
            CatalogEntry {
                id: id.into(),
                title: "rabbit conjugated by rotation: z² + ω²c, z² + ωc alternating".into(),
                sequence: Some(rabbit_rotation_sequence()),
                portrait: FormalPortrait::constant(set("10/21, 13/21, 19/21"), 2)?,
                facts: vec![
                    fact("portrait valid", Literature, Valid),
                    fact("A_1 = {5/21, 17/21, 20/21}", Literature, Extend { time: 1, set: set("5/21, 17/21, 20/21") }),
                    fact("period 2", Computed, Preperiodicity { preperiod: 0, period: 2 }),
                    fact(
                        "equivalent to the rabbit portrait rotated by 1/3",
                        Literature,
                        Equivalent { other: set("1/7, 2/7, 4/7"), degree: 2, theta: a("1/3") },
                    ),
                    fact(
                        "rays 10/21, 13/21, 19/21 co-land at ω·α",
                        Literature,
                        Cluster { time: 0, angles: vec![a("10/21"), a("13/21"), a("19/21")], point: w * al, tol: 1e-4 },
                    ),
                    fact(
                        "rays 5/21, 17/21, 20/21 co-land at ω²·α",
                        Computed,
                        Cluster { time: 1, angles: vec![a("5/21"), a("17/21"), a("20/21")], point: w * w * al, tol: 1e-4 },
                    ),
                    fact(
                        "measured matching at time 0",
                        Computed,
                        Matching { time: 0, chords: parse_chords("{19/21,10/21},{17/42,41/42}").expect("chords") },
                    ),
                    fact("sector structure at time 0", Computed, Sectors { time: 0 }),
                ],
            }
        }
        "e5_quadratic" => CatalogEntry {
            id: id.into(),
            title: "quadratic portrait {1/14, 1/7, 2/7}".into(),
            sequence: None,
            portrait: FormalPortrait::constant(set("1/14, 1/7, 2/7"), 2)?,
            facts: vec![
                fact("portrait valid", Literature, Valid),
                fact("A_1 = {1/7, 2/7, 4/7}", Literature, Extend { time: 1, set: set("1/7, 2/7, 4/7") }),
                fact("preperiod 1, period 1", Literature, Preperiodicity { preperiod: 1, period: 1 }),
            ],
        },
        "degree6_lamination" => CatalogEntry {
            id: id.into(),
            title: "degree-6 critical arc (11/36, 7/36) and its lamination".into(),
            sequence: None,
            portrait: FormalPortrait::new(set("7/36, 11/36"), DegreeSequence::preperiodic(vec![6], vec![2])?),
            facts: vec![
                fact("portrait valid", Computed, Valid),
                fact(
                    "critical arc (11/36,7/36) covers (5/6,1/6) six times",
                    Literature,
                    CriticalStructure { time: 0, arc: arc("11/36", "7/36"), value: arc("5/6", "1/6"), k: 6 },
                ),
                fact(
                    "lamination groups of degrees 3, 2, 1",
                    Literature,
                    Lamination {
                        time: 0,
                        matching: parse_chords("{7/36,11/36},{13/36,17/36},{19/36,5/36},{23/36,31/36},{25/36,29/36},{35/36,1/36}")
                            .expect("chords"),
                        display: "{ { {7/36,11/36}*, {13/36,17/36}, {19/36,5/36} }, { {25/36,29/36}, {31/36,23/36} }, { {1/36,35/36} } }"
                            .into(),
                    },
                ),
            ],
        },
        _ => return Err(Error::UnknownId(id.to_string())),
    };
    Ok(entry)
}

fn word_entry(word: &str) -> Result<CatalogEntry> {
    let seq = word_sequence(word)?;
    let p = word_portrait(word)?;
    let t = word_angle(word)?;
    Ok(CatalogEntry {
        id: format!("word_seq({word})"),
        title: format!("z²−1 at odd times, z²−1 / z³ at even times by the word {word}"),
        sequence: Some(seq),
        portrait: p,
        facts: vec![
            fact("portrait valid", Provenance::Computed, Expectation::Valid),
            fact(
                &format!("A_0 = {{{t}, {}}}", t.neg()),
                Provenance::Computed,
                Expectation::Extend { time: 0, set: AngleSet::new(vec![t.clone(), t.neg()])? },
            ),
            fact(
                "critical orbits stay in {0, −1}",
                Provenance::Literature,
                Expectation::Postcritical { points: vec![C64::new(0.0, 0.0), C64::new(-1.0, 0.0)], horizon: 4 * word.len() + 4 },
            ),
        ],
    })
}

/// Outcome of one fact check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub label: String,
    pub provenance: Provenance,
    pub passed: bool,
    pub detail: String,
}

fn need_seq(e: &CatalogEntry) -> Result<&PolynomialSequence> {
    e.sequence
        .as_ref()
        .ok_or_else(|| Error::Config(format!("{} has no polynomial sequence", e.id)))
}

fn check(e: &CatalogEntry, f: &Fact, cfg: &RayConfig) -> Result<(bool, String)> {
    use Expectation::*;
    let p = &e.portrait;
    Ok(match &f.expect {
        Valid => {
            let r = p.validate();
            (r.valid, format!("{r:?}"))
        }
        Extend { time, set } => {
            let got = p.extend(*time);
            (&got == set, format!("A_{time} = {got}"))
        }
        Preperiodicity { preperiod, period } => {
            let c = p.detect_preperiodicity();
            ((c.preperiod, c.period) == (*preperiod, *period), format!("preperiod {} period {}", c.preperiod, c.period))
        }
        CriticalStructure { time, arc, value, k } => {
            let cs = p.critical_structure(*time)?;
            let ok = cs.unicritical
                && cs.critical_arcs.len() == 1
                && &cs.critical_arcs[0].0 == arc
                && &cs.critical_value_arcs[0].0 == value
                && cs.critical_arcs[0].1 == *k;
            (ok, format!("{cs:?}"))
        }
        Lamination { time, matching, display } => {
            let cs = p.critical_structure(*time)?;
            let d = p.degree_after(*time);
            let lam = face_groups(matching, d, &cs.critical_arcs[0].0, &cs.critical_value_arcs[0].0)?;
            let shown = lam.to_string();
            (&shown == display, shown)
        }
        Equivalent { other, degree, theta } => {
            let q = FormalPortrait::constant(other.clone(), *degree)?;
            match p.equivalent(&q, 8) {
                Some((t, m1, m2)) => (&t == theta, format!("θ = {t} at shifts ({m1}, {m2})")),
                None => (false, "not equivalent within shift bound 8".into()),
            }
        }
        Landing { time, angle, point, tol } => {
            let l = landing_point(need_seq(e)?, *time, angle, cfg)?;
            let dist = (l.point - point).norm();
            (dist < *tol, format!("landing {} (distance {dist:.2e})", l.point))
        }
        Cluster { time, angles, point, tol } => {
            let cl = coland_clusters(need_seq(e)?, *time, angles, cfg)?;
            let ok = cl.len() == 1 && (cl[0].point - point).norm() < *tol;
            let desc: Vec<String> = cl.iter().map(|c| format!("{} rays at {}", c.multiplicity(), c.point)).collect();
            (ok, desc.join("; "))
        }
        Matching { time, chords } => {
            let got = measure_matching(need_seq(e)?, p, *time, cfg)?;
            let flat: Vec<Chord> = got.into_iter().flatten().collect();
            let mut want = chords.clone();
            let mut have = flat.clone();
            let key = |c: &Chord| {
                let (x, y) = c.endpoints();
                (x.min(y).clone(), x.max(y).clone())
            };
            want.sort_by_key(key);
            have.sort_by_key(key);
            let shown: Vec<String> = flat.iter().map(|c| c.to_string()).collect();
            (want == have, shown.join(", "))
        }
        Sectors { time } => {
            let r = sector_theorem_check(need_seq(e)?, p, *time, cfg)?;
            let counts: Vec<String> = r.probes.iter().map(|q| format!("{:?}", q.counts)).collect();
            (r.passed(), format!("critical sectors {:?}, probe counts {}", r.critical_arcs, counts.join(" ")))
        }
        Postcritical { points, horizon } => {
            let s = need_seq(e)?;
            let mut worst: f64 = 0.0;
            for n in 1..=*horizon {
                for v in crate::verify::julia::critical_values(s, 0, n)? {
                    worst = worst.max(points.iter().map(|q| (q - v).norm()).fold(f64::INFINITY, f64::min));
                }
            }
            (worst < 1e-10, format!("largest distance to the expected set {worst:.2e}"))
        }
    })
}

/// Check every fact of the entry; errors count as failures.
pub fn run_checks(e: &CatalogEntry, cfg: &RayConfig) -> Vec<CheckOutcome> {
    e.facts
        .iter()
        .map(|f| {
            let (passed, detail) = match check(e, f, cfg) {
                Ok(r) => r,
                Err(err) => (false, format!("error: {err}")),
            };
            CheckOutcome { label: f.label.clone(), provenance: f.provenance, passed, detail }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXED: [&str; 5] = ["cubic_fixed", "cubic_portrait12", "rabbit_rotation", "e5_quadratic", "degree6_lamination"];

    #[test]
    fn entries_build_and_validate() {
        for id in FIXED.iter().copied().chain(["word_seq(0110)", "word_seq(\"1\")"]) {
            let e = get_example(id).unwrap();
            assert!(e.portrait.is_valid(), "{id}");
        }
    }

    #[test]
    fn unknown_and_empty() {
        assert!(matches!(get_example("nope"), Err(Error::UnknownId(_))));
        assert!(get_example("word_seq(\"\")").is_err());
    }

    #[test]
    fn combinatorial_entries_check_out() {
        for id in ["e5_quadratic", "degree6_lamination", "word_seq(01)"] {
            let e = get_example(id).unwrap();
            for o in run_checks(&e, &RayConfig::default()) {
                assert!(o.passed, "{id}: {} -> {}", o.label, o.detail);
            }
        }
    }

    #[test]
    fn numerical_entries_check_out() {
        for id in ["cubic_fixed", "cubic_portrait12", "rabbit_rotation"] {
            let e = get_example(id).unwrap();
            for o in run_checks(&e, &RayConfig::default()) {
                assert!(o.passed, "{id}: {} -> {}", o.label, o.detail);
            }
        }
    }
}
