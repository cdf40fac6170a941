//! Formal orbit portraits: a set of angles A₀ pushed forward by a
//! finitely presented degree sequence.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::ops::{Mul, Rem};
use std::sync::RwLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::angle::{covering_count, Angle, AngleSet, Arc};
use crate::error::{Error, Result};

/// Letter-to-degree rule for sequences built from a binary word.
///
/// Without `odd`, d_m is the degree of letter `w[(m-1) mod |w|]`. With
/// `odd`, odd times use that degree and time 2k uses letter `w[(k-1) mod |w|]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordRule {
    pub word: String,
    pub zero: u64,
    pub one: u64,
    pub odd: Option<u64>,
}

/// The degrees d₁, d₂, … of a portrait, eventually periodic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    pre: Vec<u64>,
    per: Vec<u64>,
    word: Option<WordRule>,
    // minimal presentation, so equal phases mean equal tails
    cpre: Vec<u64>,
    cper: Vec<u64>,
}

fn check_degrees(ds: &[u64]) -> Result<()> {
    match ds.iter().find(|&&d| d < 2) {
        Some(&d) => Err(Error::InvalidDegree(d)),
        None => Ok(()),
    }
}

fn canonical(pre: &[u64], per: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let n = per.len();
    let p = (1..=n)
        .find(|&p| n % p == 0 && (0..n).all(|i| per[i] == per[i % p]))
        .unwrap_or(n);
    let mut per: Vec<u64> = per[..p].to_vec();
    let mut pre = pre.to_vec();
    while let Some(&last) = pre.last() {
        if last != per[p - 1] {
            break;
        }
        pre.pop();
        per.rotate_right(1);
    }
    (pre, per)
}

impl DegreeSequence {
    pub fn constant(d: u64) -> Result<Self> {
        Self::preperiodic(vec![], vec![d])
    }

    pub fn periodic(per: Vec<u64>) -> Result<Self> {
        Self::preperiodic(vec![], per)
    }

    pub fn preperiodic(pre: Vec<u64>, per: Vec<u64>) -> Result<Self> {
        if per.is_empty() {
            return Err(Error::Config("periodic part of a degree sequence is empty".into()));
        }
        check_degrees(&pre)?;
        check_degrees(&per)?;
        let (cpre, cper) = canonical(&pre, &per);
        Ok(DegreeSequence { pre, per, word: None, cpre, cper })
    }

    pub fn word(rule: WordRule) -> Result<Self> {
        if rule.word.is_empty() {
            return Err(Error::Config("empty binary word".into()));
        }
        check_degrees(&[rule.zero, rule.one])?;
        if let Some(o) = rule.odd {
            check_degrees(&[o])?;
        }
        let letter = |c: char| -> Result<u64> {
            match c {
                '0' => Ok(rule.zero),
                '1' => Ok(rule.one),
                _ => Err(Error::Parse(format!("'{c}' is not a binary letter"))),
            }
        };
        let mut per = Vec::new();
        for c in rule.word.chars() {
            if let Some(o) = rule.odd {
                per.push(o);
            }
            per.push(letter(c)?);
        }
        let (cpre, cper) = canonical(&[], &per);
        Ok(DegreeSequence { pre: vec![], per: per.clone(), word: Some(rule), cpre, cper })
    }

    /// d_m for m ≥ 1.
    pub fn degree(&self, m: usize) -> u64 {
        assert!(m >= 1, "degrees are indexed from 1");
        let i = m - 1;
        if i < self.cpre.len() {
            self.cpre[i]
        } else {
            self.cper[(i - self.cpre.len()) % self.cper.len()]
        }
    }

    /// Phase of the tail d_{m+1}, d_{m+2}, …; equal phases mean equal tails.
    pub fn phase(&self, m: usize) -> usize {
        if m < self.cpre.len() {
            m
        } else {
            self.cpre.len() + (m - self.cpre.len()) % self.cper.len()
        }
    }

    pub fn bound(&self) -> u64 {
        self.cpre.iter().chain(&self.cper).copied().max().unwrap_or(2)
    }

    pub fn is_constant(&self) -> bool {
        self.cpre.is_empty() && self.cper.len() == 1
    }

    pub fn preperiodic_part(&self) -> &[u64] {
        &self.pre
    }

    pub fn periodic_part(&self) -> &[u64] {
        &self.per
    }

    pub fn word_rule(&self) -> Option<&WordRule> {
        self.word.as_ref()
    }

    /// Minimal (preperiod, period) of the degree sequence itself.
    pub fn minimal_shape(&self) -> (usize, usize) {
        (self.cpre.len(), self.cper.len())
    }

    /// Whether d_{m1+j} = d_{m2+j} for all j ≥ 1 (compared against `other`).
    pub fn tails_agree(&self, m1: usize, other: &DegreeSequence, m2: usize) -> bool {
        let horizon = self.cpre.len()
            + other.cpre.len()
            + self.cper.len().lcm(&other.cper.len());
        (1..=horizon).all(|j| self.degree(m1 + j) == other.degree(m2 + j))
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u64]| {
            let s: Vec<String> = v.iter().map(|d| d.to_string()).collect();
            format!("[{}]", s.join(","))
        };
        if let Some(w) = &self.word {
            write!(f, "word {} map 0->{},1->{}", w.word, w.zero, w.one)?;
            if let Some(o) = w.odd {
                write!(f, ",odd->{o}")?;
            }
            Ok(())
        } else if self.pre.is_empty() {
            write!(f, "periodic {}", list(&self.per))
        } else {
            write!(f, "preperiodic {};{}", list(&self.pre), list(&self.per))
        }
    }
}

/// Outcome of [`FormalPortrait::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub failing_time: Option<usize>,
    pub reason: String,
}

/// The least (preperiod, period) after which the portrait state repeats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreperiodicityCertificate {
    pub preperiod: usize,
    pub period: usize,
    /// A_{preperiod} together with the degree phase at that time.
    pub witness: (AngleSet, usize),
}

/// Critical and critical value arcs at one time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalStructure {
    pub time: usize,
    pub critical_arcs: Vec<(Arc, u64)>,
    pub critical_value_arcs: Vec<(Arc, u64)>,
    pub unicritical: bool,
}

/// Critical arcs of `set` under θ ↦ dθ.
///
/// An arc is critical when longer than 1/d; its critical value arc runs
/// between the images of its endpoints and is covered one time more than
/// every other complementary arc of the image set. Fails when two angles of
/// `set` share an image, since the image set is then not an N-tuple.
pub fn critical_structure_of(set: &AngleSet, d: u64, time: usize) -> Result<CriticalStructure> {
    let image: Vec<Angle> = set.angles().iter().map(|a| a.dmap(d)).collect();
    let image_set = AngleSet::new(image).map_err(|_| Error::InvalidPortrait {
        time,
        reason: "two angles share an image".into(),
    })?;
    let inv_d = BigRational::new(1.into(), d.into());
    let mut critical_arcs = Vec::new();
    let mut critical_value_arcs = Vec::new();
    for arc in set.complementary_arcs() {
        if arc.length() <= inv_d {
            continue;
        }
        let value = Arc::new(arc.start().dmap(d), arc.end().dmap(d))?;
        let k = covering_count(&arc, d, &value)?;
        debug_assert!(image_set
            .complementary_arcs()
            .iter()
            .all(|j| covering_count(&arc, d, j).map_or(false, |c| c <= k)));
        critical_arcs.push((arc, k));
        critical_value_arcs.push((value, k));
    }
    let unicritical = critical_arcs.len() == 1;
    Ok(CriticalStructure { time, critical_arcs, critical_value_arcs, unicritical })
}

/// An orbit portrait given by A₀ and its degrees; later sets are derived.
pub struct FormalPortrait {
    a0: Vec<Angle>,
    degrees: DegreeSequence,
    // labelled tuples A_m, image of a0[i] at index i
    cache: RwLock<Vec<Vec<Angle>>>,
}

impl Clone for FormalPortrait {
    fn clone(&self) -> Self {
        FormalPortrait::new(self.initial_set(), self.degrees.clone())
    }
}

impl fmt::Debug for FormalPortrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormalPortrait")
            .field("a0", &self.a0)
            .field("degrees", &self.degrees)
            .finish()
    }
}

impl PartialEq for FormalPortrait {
    fn eq(&self, other: &Self) -> bool {
        self.a0 == other.a0 && self.degrees == other.degrees
    }
}

/// Common-denominator numerators, the working form for exact orbit scans.
trait Residue: Clone + Eq + Hash + Ord + From<u64> + Mul<Output = Self> + Rem<Output = Self> {}
impl Residue for u128 {}
impl Residue for BigUint {}

struct Scan {
    failure: Option<(usize, String)>,
    first: usize,
    repeat: usize,
}

fn scan_orbit<T: Residue>(nums: Vec<T>, q: T, degrees: &DegreeSequence, stop_on_failure: bool) -> Scan {
    let mut seen: HashMap<(Vec<T>, usize), usize> = HashMap::new();
    let mut cur = nums;
    let mut failure = None;
    let mut m = 0usize;
    loop {
        let mut sorted = cur.clone();
        sorted.sort();
        let key = (sorted, degrees.phase(m));
        if let Some(&first) = seen.get(&key) {
            return Scan { failure, first, repeat: m };
        }
        let d = T::from(degrees.degree(m + 1));
        let next: Vec<T> = cur.iter().map(|x| (x.clone() * d.clone()) % q.clone()).collect();
        if failure.is_none() {
            if let Some(reason) = check_step(&key.0, &cur, &next) {
                failure = Some((m, reason));
                if stop_on_failure {
                    return Scan { failure, first: 0, repeat: m };
                }
            }
        }
        seen.insert(key, m);
        cur = next;
        m += 1;
    }
}

fn check_step<T: Residue>(sorted: &[T], cur: &[T], next: &[T]) -> Option<String> {
    let mut imgs: Vec<(T, T)> = cur.iter().cloned().zip(next.iter().cloned()).collect();
    imgs.sort();
    let images: Vec<&T> = imgs.iter().map(|(_, y)| y).collect();
    let mut distinct: Vec<&T> = images.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != images.len() {
        return Some("two angles share an image".into());
    }
    let n = sorted.len();
    if n >= 3 {
        let descents = (0..n).filter(|&i| images[(i + 1) % n] < images[i]).count();
        if descents != 1 {
            return Some("cyclic order is not preserved".into());
        }
    }
    None
}

fn common_denominator(angles: &[Angle]) -> BigUint {
    angles.iter().fold(BigUint::one(), |acc, a| acc.lcm(&a.denom()))
}

impl FormalPortrait {
    pub fn new(a0: AngleSet, degrees: DegreeSequence) -> Self {
        let a0 = a0.angles().to_vec();
        FormalPortrait { cache: RwLock::new(vec![a0.clone()]), a0, degrees }
    }

    pub fn constant(a0: AngleSet, d: u64) -> Result<Self> {
        Ok(Self::new(a0, DegreeSequence::constant(d)?))
    }

    pub fn valence(&self) -> usize {
        self.a0.len()
    }

    pub fn degrees(&self) -> &DegreeSequence {
        &self.degrees
    }

    pub fn initial_set(&self) -> AngleSet {
        AngleSet::new(self.a0.clone()).expect("A0 is a valid angle set")
    }

    /// d_{m+1}, the degree of the map from time m to time m+1.
    pub fn degree_after(&self, m: usize) -> u64 {
        self.degrees.degree(m + 1)
    }

    /// The images of the A₀ angles at time m, in the order of A₀.
    pub fn labelled(&self, m: usize) -> Vec<Angle> {
        if let Some(v) = self.cache.read().expect("cache lock").get(m) {
            return v.clone();
        }
        let mut cache = self.cache.write().expect("cache lock");
        while cache.len() <= m {
            let t = cache.len() - 1;
            let d = self.degrees.degree(t + 1);
            let next = cache[t].iter().map(|a| a.dmap(d)).collect();
            cache.push(next);
        }
        cache[m].clone()
    }

    /// A_m. For an invalid portrait, colliding images are kept as repeats.
    pub fn extend(&self, m: usize) -> AngleSet {
        let mut v = self.labelled(m);
        v.sort();
        AngleSet::new(v.clone()).unwrap_or_else(|_| AngleSet::from_sorted_unchecked(v))
    }

    fn scan(&self, stop_on_failure: bool) -> Scan {
        let q = common_denominator(&self.a0);
        let nums: Vec<BigUint> = self
            .a0
            .iter()
            .map(|a| a.numer() * (&q / a.denom()))
            .collect();
        let bound = self.degrees.bound() as u128;
        match q.to_u128() {
            Some(qs) if qs.checked_mul(bound).is_some() => {
                let small = nums.iter().map(|x| x.to_u128().expect("below q")).collect();
                scan_orbit::<u128>(small, qs, &self.degrees, stop_on_failure)
            }
            _ => scan_orbit(nums, q, &self.degrees, stop_on_failure),
        }
    }

    /// Exact check that every step is a cyclic-order-preserving bijection.
    ///
    /// Denominators never grow, so (A_m, degree phase) eventually repeats and
    /// checking up to the first repeat covers every time.
    pub fn validate(&self) -> ValidationReport {
        match self.scan(true).failure {
            Some((m, reason)) => ValidationReport { valid: false, failing_time: Some(m), reason },
            None => ValidationReport { valid: true, failing_time: None, reason: "valid".into() },
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().valid
    }

    fn require_valid(&self) -> Result<()> {
        let r = self.validate();
        match r.failing_time {
            Some(time) => Err(Error::InvalidPortrait { time, reason: r.reason }),
            None => Ok(()),
        }
    }

    pub fn critical_structure(&self, m: usize) -> Result<CriticalStructure> {
        self.require_valid()?;
        critical_structure_of(&self.extend(m), self.degree_after(m), m)
    }

    /// Least (preperiod, period) with A_p = A_{p+q} and matching degree tails.
    pub fn detect_preperiodicity(&self) -> PreperiodicityCertificate {
        let s = self.scan(false);
        PreperiodicityCertificate {
            preperiod: s.first,
            period: s.repeat - s.first,
            witness: (self.extend(s.first), self.degrees.phase(s.first)),
        }
    }

    /// A rotation θ and shifts with A²_{m2} + θ = A¹_{m1} and equal degree tails.
    ///
    /// Of the witnesses with the smallest m1, then m2, the smallest θ is
    /// returned. The rotation carries the second portrait onto the first.
    pub fn equivalent(&self, other: &FormalPortrait, shift_bound: usize) -> Option<(Angle, usize, usize)> {
        if self.valence() != other.valence() {
            return None;
        }
        for m1 in 0..=shift_bound {
            for m2 in 0..=shift_bound {
                if !self.degrees.tails_agree(m1, &other.degrees, m2) {
                    continue;
                }
                let a = self.extend(m1);
                let b = other.extend(m2);
                let pivot = &a.angles()[0];
                let theta = b
                    .angles()
                    .iter()
                    .map(|x| pivot.sub(x))
                    .filter(|t| b.rotate(t) == a)
                    .min();
                if let Some(t) = theta {
                    return Some((t, m1, m2));
                }
            }
        }
        None
    }
}

/// True iff some circular interval contains all of `a` and none of `b`.
pub fn unlinked(a: &AngleSet, b: &AngleSet) -> Result<bool> {
    let mut all: Vec<(&Angle, bool)> = a
        .angles()
        .iter()
        .map(|x| (x, true))
        .chain(b.angles().iter().map(|x| (x, false)))
        .collect();
    all.sort();
    if let Some(w) = all.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::SharedAngle(w[0].0.to_string()));
    }
    let n = all.len();
    let changes = (0..n).filter(|&i| all[i].1 != all[(i + 1) % n].1).count();
    Ok(changes == 2)
}

/// Random valid constant-degree portraits for property checks.
///
/// Mixes three families: rejection-sampled random sets, subsets of the fixed
/// points k/(d−1), and lifts of a valid set into a window of length 1/d
/// (where θ ↦ dθ is injective and order preserving), repeated to add a
/// preperiod. All denominators stay at most `max_denom`.
pub fn random_valid_portrait<R: Rng>(rng: &mut R, max_valence: usize, max_denom: u64, max_degree: u64) -> FormalPortrait {
    let max_valence = max_valence.max(2);
    loop {
        let d = rng.gen_range(2..=max_degree.max(2));
        let family = rng.gen_range(0..3);
        let set = match family {
            0 => {
                let n = rng.gen_range(2..=max_valence);
                let q = rng.gen_range(2..=max_denom.clamp(2, 60));
                let angles: Vec<Angle> = (0..n)
                    .map(|_| Angle::new(rng.gen_range(0..q), q).expect("q > 0"))
                    .collect();
                AngleSet::new(angles).ok()
            }
            1 => fixed_subset(rng, d, max_valence),
            _ => fixed_subset(rng, d, max_valence).and_then(|base| {
                let lifts = rng.gen_range(1..=3);
                lift_into_windows(rng, base, d, lifts, max_denom)
            }),
        };
        if let Some(set) = set {
            if set.angles().iter().all(|a| a.denom() <= BigUint::from(max_denom)) {
                let p = FormalPortrait::constant(set, d).expect("d >= 2");
                if p.is_valid() {
                    return p;
                }
            }
        }
    }
}

fn fixed_subset<R: Rng>(rng: &mut R, d: u64, max_valence: usize) -> Option<AngleSet> {
    let fixed: Vec<u64> = (0..d - 1).collect();
    if fixed.len() < 2 {
        // degree 2 has the single fixed point 0; use the period-2 cycle of 3
        return AngleSet::new(vec![Angle::new(1, 3).ok()?, Angle::new(2, 3).ok()?]).ok();
    }
    let n = rng.gen_range(2..=fixed.len().min(max_valence));
    let mut picked: Vec<u64> = fixed;
    for i in (1..picked.len()).rev() {
        picked.swap(i, rng.gen_range(0..=i));
    }
    picked.truncate(n);
    AngleSet::new(picked.into_iter().map(|k| Angle::new(k, d - 1).expect("d > 1")).collect()).ok()
}

fn lift_into_windows<R: Rng>(rng: &mut R, base: AngleSet, d: u64, lifts: usize, max_denom: u64) -> Option<AngleSet> {
    let mut set = base;
    for _ in 0..lifts {
        let steps = 64u64;
        let t = Angle::new(rng.gen_range(0..steps), steps * d).ok()?;
        let lifted: Vec<Angle> = set
            .angles()
            .iter()
            .map(|a| {
                a.preimages(d)
                    .into_iter()
                    .find(|x| t.ccw_distance_to(x) < BigRational::new(1.into(), (d as i64).into()))
                    .expect("exactly one preimage per window")
            })
            .collect();
        if lifted.iter().any(|a| a.denom() > BigUint::from(max_denom)) {
            break;
        }
        set = AngleSet::new(lifted).ok()?;
    }
    Some(set)
}


#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(s: &str) -> AngleSet {
        AngleSet::parse_list(s).unwrap()
    }

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn e5() -> FormalPortrait {
        FormalPortrait::constant(set("1/14 1/7 2/7"), 2).unwrap()
    }

    fn rabbit_rotation() -> FormalPortrait {
        FormalPortrait::constant(set("10/21 13/21 19/21"), 2).unwrap()
    }

    #[test]
    fn extend_examples() {
        assert_eq!(e5().extend(1), set("1/7 2/7 4/7"));
        assert_eq!(e5().extend(0), set("1/14 1/7 2/7"));
        assert_eq!(rabbit_rotation().extend(1), set("17/21 20/21 5/21"));
        assert_eq!(rabbit_rotation().extend(7), set("17/21 20/21 5/21"));
    }

    #[test]
    fn validate_examples() {
        assert!(rabbit_rotation().validate().valid);
        let bad = FormalPortrait::constant(set("1/6 2/3"), 2).unwrap().validate();
        assert!(!bad.valid);
        assert_eq!(bad.failing_time, Some(0));
        let p12 = FormalPortrait::constant(set("1/6 1/3"), 3).unwrap();
        assert!(p12.validate().valid);
        assert_eq!(p12.extend(1), set("0 1/2"));
        // doubling swaps 1/3 and 2/3 and fixes 0, reversing the cyclic order
        let swap = FormalPortrait::constant(set("0 1/3 2/3"), 2).unwrap().validate();
        assert!(!swap.valid);
        assert!(swap.reason.contains("cyclic order"));
    }

    #[test]
    fn critical_structure_examples() {
        let p12 = FormalPortrait::constant(set("1/6 1/3"), 3).unwrap();
        let cs = p12.critical_structure(0).unwrap();
        assert!(cs.unicritical);
        assert_eq!(cs.critical_arcs, vec![(Arc::new(a("1/3"), a("1/6")).unwrap(), 3)]);
        assert_eq!(cs.critical_value_arcs, vec![(Arc::new(a("0"), a("1/2")).unwrap(), 3)]);

        let cs = critical_structure_of(&set("7/36 11/36"), 6, 0).unwrap();
        assert_eq!(cs.critical_arcs, vec![(Arc::new(a("11/36"), a("7/36")).unwrap(), 6)]);
        assert_eq!(cs.critical_value_arcs, vec![(Arc::new(a("5/6"), a("1/6")).unwrap(), 6)]);

        let cs = rabbit_rotation().critical_structure(0).unwrap();
        assert_eq!(cs.critical_arcs, vec![(Arc::new(a("19/21"), a("10/21")).unwrap(), 2)]);
        assert_eq!(cs.critical_value_arcs, vec![(Arc::new(a("17/21"), a("20/21")).unwrap(), 2)]);

        let bad = FormalPortrait::constant(set("1/6 2/3"), 2).unwrap();
        assert!(matches!(bad.critical_structure(0), Err(Error::InvalidPortrait { time: 0, .. })));
    }

    #[test]
    fn preperiodicity_examples() {
        let c = e5().detect_preperiodicity();
        assert_eq!((c.preperiod, c.period), (1, 1));
        assert_eq!(c.witness.0, set("1/7 2/7 4/7"));
        let c = FormalPortrait::constant(set("0 1/2"), 3).unwrap().detect_preperiodicity();
        assert_eq!((c.preperiod, c.period), (0, 1));
        let c = rabbit_rotation().detect_preperiodicity();
        assert_eq!((c.preperiod, c.period), (0, 2));
        // a non-minimal degree presentation does not inflate the certificate
        let p = FormalPortrait::new(
            set("0 1/2"),
            DegreeSequence::preperiodic(vec![3, 3], vec![3, 3]).unwrap(),
        );
        let c = p.detect_preperiodicity();
        assert_eq!((c.preperiod, c.period), (0, 1));
    }

    #[test]
    fn equivalence_examples() {
        let std = FormalPortrait::constant(set("1/7 2/7 4/7"), 2).unwrap();
        assert_eq!(rabbit_rotation().equivalent(&std, 3), Some((a("1/3"), 0, 0)));
        assert_eq!(std.equivalent(&std, 3), Some((Angle::zero(), 0, 0)));
        let two = FormalPortrait::constant(set("0 1/2"), 3).unwrap();
        assert_eq!(std.equivalent(&two, 3), None);
        // rotation inverts when the roles swap
        assert_eq!(std.equivalent(&rabbit_rotation(), 3), Some((a("2/3"), 0, 0)));
        // different degree tails never match
        let std3 = FormalPortrait::constant(set("1/7 2/7 4/7"), 3).unwrap();
        assert_eq!(std.equivalent(&std3, 3), None);
    }

    #[test]
    fn equivalence_composes_on_catalog_portraits() {
        let p = rabbit_rotation();
        let q = FormalPortrait::constant(set("1/7 2/7 4/7"), 2).unwrap();
        let r = e5();
        let (t1, a1, b1) = p.equivalent(&q, 3).unwrap();
        let (t2, a2, b2) = q.equivalent(&r, 3).unwrap();
        let (t3, _, _) = p.equivalent(&r, 3).unwrap();
        assert!(p.extend(a1) == q.extend(b1).rotate(&t1));
        assert!(q.extend(a2) == r.extend(b2).rotate(&t2));
        let via = r.extend(b2).rotate(&t2).rotate(&t1);
        assert_eq!(p.extend(a1), via);
        assert_eq!(p.extend(a1), r.extend(b2).rotate(&t3));
    }

    #[test]
    fn unlinked_examples() {
        assert!(!unlinked(&set("10/21 13/21 19/21"), &set("17/21 20/21 5/21")).unwrap());
        assert!(unlinked(&set("1/10 2/10"), &set("3/10 4/10")).unwrap());
        assert!(unlinked(&set("1/6 1/3"), &set("0 1/2")).unwrap());
        assert!(matches!(unlinked(&set("1/6 1/3"), &set("1/3 1/2")), Err(Error::SharedAngle(_))));
    }

    #[test]
    fn degree_sequences() {
        let w = DegreeSequence::word(WordRule { word: "01".into(), zero: 2, one: 3, odd: Some(2) }).unwrap();
        let ds: Vec<u64> = (1..=8).map(|m| w.degree(m)).collect();
        assert_eq!(ds, [2, 2, 2, 3, 2, 2, 2, 3]);
        assert!(DegreeSequence::word(WordRule { word: "".into(), zero: 2, one: 3, odd: None }).is_err());
        assert!(DegreeSequence::constant(1).is_err());
        let p = DegreeSequence::preperiodic(vec![2, 3, 2], vec![3, 2]).unwrap();
        assert_eq!(p.minimal_shape(), (0, 2));
        let ds: Vec<u64> = (1..=7).map(|m| p.degree(m)).collect();
        assert_eq!(ds, [2, 3, 2, 3, 2, 3, 2]);
    }

    #[test]
    fn big_denominators_take_the_exact_slow_path() {
        let q = BigUint::one() << 130u32;
        let x = Angle::from_big(BigUint::one(), q.clone()).unwrap();
        let y = Angle::from_big(BigUint::from(2u32), q).unwrap();
        let p = FormalPortrait::constant(AngleSet::new(vec![x, y]).unwrap(), 2).unwrap();
        let r = p.validate();
        assert_eq!(r.failing_time, Some(129));
        assert_eq!(p.labelled(130), vec![Angle::zero(), Angle::zero()]);
        assert_ne!(p.labelled(129)[0], p.labelled(129)[1]);
    }

    fn arbitrary_valid() -> impl Strategy<Value = FormalPortrait> {
        any::<u64>().prop_map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_valid_portrait(&mut rng, 6, 10_000, 6)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn critical_arcs_are_long_and_cover(p in arbitrary_valid(), m in 0usize..4) {
            let d = p.degree_after(m);
            let cs = p.critical_structure(m).unwrap();
            prop_assert!(!cs.critical_arcs.is_empty());
            let inv = BigRational::new(1.into(), (d as i64).into());
            let noncritical: BigRational = p
                .extend(m)
                .complementary_arcs()
                .iter()
                .map(|arc| arc.length())
                .filter(|l| *l <= inv)
                .fold(BigRational::zero(), |s, l| s + l);
            prop_assert!(noncritical < inv);
            if cs.unicritical {
                prop_assert!(cs.critical_arcs[0].0.length() > BigRational::one() - inv);
            }
            for (_, k) in &cs.critical_arcs {
                prop_assert!(*k >= 2 && *k <= d);
            }
        }

        #[test]
        fn weighted_lengths_balance(p in arbitrary_valid(), m in 0usize..4) {
            let d = p.degree_after(m);
            let src = p.extend(m).complementary_arcs();
            let dst = p.extend(m + 1).complementary_arcs();
            let mut total = BigRational::zero();
            for j in &dst {
                let k: u64 = src.iter().map(|i| covering_count(i, d, j).unwrap()).sum();
                total += j.length() * BigRational::from_integer(k.into());
            }
            prop_assert_eq!(total, BigRational::from_integer(d.into()));
        }

        #[test]
        fn certificate_is_a_real_repeat(p in arbitrary_valid()) {
            let c = p.detect_preperiodicity();
            prop_assert!(c.period >= 1);
            prop_assert_eq!(p.extend(c.preperiod), p.extend(c.preperiod + c.period));
            prop_assert_eq!(&c.witness.0, &p.extend(c.preperiod));
            // leastness: no earlier repeat inside the found window
            let window: std::collections::HashSet<AngleSet> =
                (0..c.preperiod + c.period).map(|i| p.extend(i)).collect();
            prop_assert_eq!(window.len(), c.preperiod + c.period);
        }

        #[test]
        fn self_equivalence_is_identity(p in arbitrary_valid()) {
            prop_assert_eq!(p.equivalent(&p, 2), Some((Angle::zero(), 0, 0)));
        }
    }
}
