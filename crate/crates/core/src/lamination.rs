//! Critical lamination sequences: chords joining preimages of the two
//! endpoints of a critical value arc, grouped by the face of the disk they
//! bound.

use std::fmt;

use num_rational::BigRational;

use crate::angle::{Angle, Arc};
use crate::error::{Error, Result};
use crate::portrait::FormalPortrait;

/// Unordered pair of distinct angles, kept as (from, to) for display.
#[derive(Clone)]
pub struct Chord {
    from: Angle,
    to: Angle,
}

impl Chord {
    pub fn new(a: Angle, b: Angle) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidArc(format!("chord with a single endpoint {a}")));
        }
        Ok(Chord { from: a, to: b })
    }

    pub fn endpoints(&self) -> (&Angle, &Angle) {
        (&self.from, &self.to)
    }

    fn sorted(&self) -> (&Angle, &Angle) {
        if self.from < self.to {
            (&self.from, &self.to)
        } else {
            (&self.to, &self.from)
        }
    }

    pub fn has_endpoint(&self, x: &Angle) -> bool {
        &self.from == x || &self.to == x
    }

    /// Whether the two chords cross inside the disk (endpoints interleave).
    pub fn crosses(&self, other: &Chord) -> bool {
        let (a, b) = self.sorted();
        let inside = |x: &Angle| a < x && x < b;
        let (c, e) = other.sorted();
        if [a, b].contains(&c) || [a, b].contains(&e) {
            return false;
        }
        inside(c) != inside(e)
    }
}

impl PartialEq for Chord {
    fn eq(&self, other: &Self) -> bool {
        self.sorted() == other.sorted()
    }
}

impl Eq for Chord {}

impl std::hash::Hash for Chord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.sorted().hash(state)
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.from, self.to)
    }
}

impl fmt::Debug for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Chords bounding one preimage component of the critical value sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaminationGroup {
    pub chords: Vec<Chord>,
    pub degree: usize,
}

/// The grouped chords at one time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalLamination {
    pub time: usize,
    pub groups: Vec<LaminationGroup>,
    pub boundary_chord: Chord,
}

impl CriticalLamination {
    pub fn chord_count(&self) -> usize {
        self.groups.iter().map(|g| g.chords.len()).sum()
    }

    pub fn total_degree(&self) -> usize {
        self.groups.iter().map(|g| g.degree).sum()
    }

    /// Groups containing the boundary chord (one, for a realized lamination).
    pub fn critical_groups(&self) -> usize {
        self.groups
            .iter()
            .filter(|g| g.chords.contains(&self.boundary_chord))
            .count()
    }
}

impl fmt::Display for CriticalLamination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{ ")?;
        for (i, g) in self.groups.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{{ ")?;
            for (j, c) in g.chords.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}")?;
                if *c == self.boundary_chord {
                    write!(f, "*")?;
                }
            }
            write!(f, " }}")?;
        }
        write!(f, " }}")
    }
}

fn require_critical(i_m: &Arc, d: u64, i_m1: &Arc) -> Result<()> {
    let ok = i_m.length() > BigRational::new(1.into(), (d as i64).into())
        && &i_m.start().dmap(d) == i_m1.start()
        && &i_m.end().dmap(d) == i_m1.end();
    if ok {
        Ok(())
    } else {
        Err(Error::NotCriticalArc(format!("{i_m} does not map onto {i_m1} under degree {d}")))
    }
}

/// Preimages of the endpoints α, β of `i_m1` in the closure of `i_m`.
pub fn pullback_endpoints(i_m: &Arc, d: u64, i_m1: &Arc) -> Result<(Vec<Angle>, Vec<Angle>)> {
    if d < 2 {
        return Err(Error::InvalidDegree(d));
    }
    require_critical(i_m, d, i_m1)?;
    let pick = |x: &Angle| -> Vec<Angle> {
        x.preimages(d)
            .into_iter()
            .filter(|p| i_m.closure_contains(p))
            .collect()
    };
    Ok((pick(i_m1.start()), pick(i_m1.end())))
}

/// All noncrossing perfect matchings pairing each α with a β.
pub fn enumerate_matchings(alphas: &[Angle], betas: &[Angle]) -> Result<Vec<Vec<Chord>>> {
    if alphas.len() != betas.len() {
        return Err(Error::SizeMismatch { alphas: alphas.len(), betas: betas.len() });
    }
    let mut points: Vec<(Angle, bool)> = alphas
        .iter()
        .map(|a| (a.clone(), true))
        .chain(betas.iter().map(|b| (b.clone(), false)))
        .collect();
    points.sort();
    if points.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::InconsistentLamination("an angle is both an α and a β preimage".into()));
    }
    let idx: Vec<usize> = (0..points.len()).collect();
    let pairs = match_range(&points, &idx);
    Ok(pairs
        .into_iter()
        .map(|m| {
            m.into_iter()
                .map(|(i, j)| Chord { from: points[i].0.clone(), to: points[j].0.clone() })
                .collect()
        })
        .collect())
}

// Noncrossing matchings of a circularly ordered run: the first point pairs
// with an opposite-label point that leaves an even run on each side.
fn match_range(points: &[(Angle, bool)], idx: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if idx.is_empty() {
        return vec![vec![]];
    }
    let first = idx[0];
    let mut out = Vec::new();
    for j in (1..idx.len()).step_by(2) {
        if points[idx[j]].1 == points[first].1 {
            continue;
        }
        let inner = match_range(points, &idx[1..j]);
        let outer = match_range(points, &idx[j + 1..]);
        for a in &inner {
            for b in &outer {
                let mut m = Vec::with_capacity(idx.len() / 2);
                m.push((first, idx[j]));
                m.extend_from_slice(a);
                m.extend_from_slice(b);
                out.push(m);
            }
        }
    }
    out
}

pub fn check_noncrossing(chords: &[Chord]) -> Result<()> {
    for (i, c) in chords.iter().enumerate() {
        for e in &chords[i + 1..] {
            if c.crosses(e) {
                return Err(Error::CrossingChords(c.to_string(), e.to_string()));
            }
        }
    }
    Ok(())
}

/// Group the chords of `matching` by the faces they bound.
///
/// A boundary circle-arc between consecutive endpoints is an S-arc when its
/// exact image is `i_m1` covered once. Faces whose arcs are all S-arcs are
/// the preimage components of the critical value sector; each gives one
/// group with degree equal to its number of S-arcs. The arc outside the
/// critical arc `i_m` is never an S-arc. Groups come out with the one
/// holding the boundary chord first, then by decreasing degree, each listed
/// in counterclockwise order around its face.
pub fn face_groups(matching: &[Chord], d: u64, i_m: &Arc, i_m1: &Arc) -> Result<CriticalLamination> {
    check_noncrossing(matching)?;
    let boundary_chord = Chord::new(i_m.start().clone(), i_m.end().clone())?;
    let mut pts: Vec<Angle> = matching
        .iter()
        .flat_map(|c| [c.from.clone(), c.to.clone()])
        .collect();
    pts.sort();
    let n = pts.len();
    if pts.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InconsistentLamination("an angle lies on two chords".into()));
    }
    let pos = |x: &Angle| pts.binary_search(x).expect("endpoint of a chord");
    let mut partner = vec![0usize; n];
    for c in matching {
        let (i, j) = (pos(&c.from), pos(&c.to));
        partner[i] = j;
        partner[j] = i;
    }
    let dd = BigRational::from_integer((d as i64).into());
    let exterior = i_m.complement();
    let is_s_arc = |i: usize| -> bool {
        let a = Arc::new(pts[i].clone(), pts[(i + 1) % n].clone()).expect("distinct endpoints");
        !exterior.contains(&a.midpoint())
            && &a.start().dmap(d) == i_m1.start()
            && &a.end().dmap(d) == i_m1.end()
            && a.length() * &dd == i_m1.length()
    };
    let mut seen = vec![false; n];
    let mut groups = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut arcs = Vec::new();
        let mut chords = Vec::new();
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            arcs.push(i);
            let at = (i + 1) % n;
            chords.push(Chord { from: pts[at].clone(), to: pts[partner[at]].clone() });
            i = partner[at];
        }
        let s_count = arcs.iter().filter(|&&i| is_s_arc(i)).count();
        if s_count == 0 {
            continue;
        }
        if s_count != arcs.len() {
            return Err(Error::InconsistentLamination(format!(
                "face bounded by {} mixes arcs inside and outside the critical value preimage",
                chords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
            )));
        }
        if let Some(k) = chords.iter().position(|c| *c == boundary_chord) {
            chords.rotate_left(k);
        } else if let Some(k) = (0..chords.len()).min_by(|&a, &b| chords[a].from.cmp(&chords[b].from)) {
            chords.rotate_left(k);
        }
        groups.push(LaminationGroup { degree: chords.len(), chords });
    }
    groups.sort_by(|a, b| {
        let ca = a.chords.contains(&boundary_chord);
        let cb = b.chords.contains(&boundary_chord);
        cb.cmp(&ca)
            .then(b.degree.cmp(&a.degree))
            .then_with(|| a.chords[0].from.cmp(&b.chords[0].from))
    });
    Ok(CriticalLamination { time: 0, groups, boundary_chord })
}

/// Check the invariants a realized critical lamination must satisfy.
pub fn check_lamination(l: &CriticalLamination, d: u64, k: u64) -> Result<()> {
    let all: Vec<Chord> = l.groups.iter().flat_map(|g| g.chords.clone()).collect();
    check_noncrossing(&all)?;
    let fail = |msg: String| Err(Error::InconsistentLamination(msg));
    if l.total_degree() as u64 != k || all.len() as u64 != k {
        return fail(format!("degrees sum to {} over {} chords, expected {k}", l.total_degree(), all.len()));
    }
    let hurwitz: usize = l.groups.iter().map(|g| g.degree - 1).sum();
    if hurwitz as u64 > d - 1 {
        return fail(format!("{hurwitz} critical points needed, degree {d} allows {}", d - 1));
    }
    if l.critical_groups() != 1 {
        return fail(format!("boundary chord {} lies in {} groups", l.boundary_chord, l.critical_groups()));
    }
    Ok(())
}

/// Assemble and check the lamination of `p` at each supplied time.
///
/// Each matching is attached to the critical arc whose pullback endpoints
/// it uses.
pub fn lamination_sequence(p: &FormalPortrait, matchings: &[(usize, Vec<Chord>)]) -> Result<Vec<CriticalLamination>> {
    let mut out = Vec::new();
    for (m, matching) in matchings {
        let cs = p.critical_structure(*m)?;
        let d = p.degree_after(*m);
        let mut used: Vec<Angle> = matching.iter().flat_map(|c| [c.from.clone(), c.to.clone()]).collect();
        used.sort();
        let mut found = None;
        for ((arc, k), (value, _)) in cs.critical_arcs.iter().zip(&cs.critical_value_arcs) {
            let (al, be) = pullback_endpoints(arc, d, value)?;
            let mut ends: Vec<Angle> = al.into_iter().chain(be).collect();
            ends.sort();
            if ends == used {
                found = Some((arc.clone(), value.clone(), *k));
                break;
            }
        }
        let (arc, value, k) = found.ok_or_else(|| {
            Error::NotCriticalArc(format!("no critical arc at time {m} has these chord endpoints"))
        })?;
        let mut lam = face_groups(matching, d, &arc, &value)?;
        lam.time = *m;
        check_lamination(&lam, d, k)?;
        out.push(lam);
    }
    Ok(out)
}

/// Parse chords written as `{a,b}, {c,d}, …`; stars and outer braces are ignored.
pub fn parse_chords(s: &str) -> Result<Vec<Chord>> {
    let mut out = Vec::new();
    let mut open = None;
    for (i, c) in s.char_indices() {
        match c {
            '{' => open = Some(i),
            '}' => {
                if let Some(o) = open.take() {
                    let inner = &s[o + 1..i];
                    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
                    if parts.len() != 2 {
                        return Err(Error::Parse(format!("chord needs two endpoints: {{{inner}}}")));
                    }
                    out.push(Chord::new(parts[0].parse()?, parts[1].parse()?)?);
                }
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Catalan number C_n.
pub fn catalan(n: u64) -> u64 {
    (0..n).fold(1u64, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}
