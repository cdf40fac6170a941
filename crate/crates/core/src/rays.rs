//! External rays of monic polynomial sequences.
//!
//! A point of the ray R_{θ;m} at potential h solves
//! log φ_n(Q_{m,n}(z)) = D_{m,n}·(h + 2πiθ) (mod 2πi) for any n; picking n
//! with D_{m,n}·h ≥ H_big keeps Q_{m,n}(z) far out where φ_n is given by a
//! fast series. Potentials run down a geometric grid and each point seeds
//! Newton's method for the next.

use std::f64::consts::PI;

use num_complex::ComplexFloat;
use rayon::prelude::*;

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::poly::{wrap_pi, PolynomialSequence, C64};

/// Tuning knobs for ray tracing and landing detection.
#[derive(Clone, Debug, PartialEq)]
pub struct RayConfig {
    /// Starting potential; large enough that φ_m is the identity to double precision.
    pub h_max: f64,
    /// Deepest potential traced by [`landing_point`].
    pub h_min: f64,
    /// Grid ratio between successive potentials.
    pub ratio: f64,
    /// Target log-modulus at the solve level.
    pub h_big: f64,
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Halvings of the log-step allowed before giving up.
    pub max_refine: usize,
    pub land_tol: f64,
    pub cluster_eps: f64,
}

impl Default for RayConfig {
    fn default() -> Self {
        RayConfig {
            h_max: 27.0,
            h_min: 1e-60,
            ratio: 0.75,
            h_big: 27.0,
            newton_tol: 1e-11,
            max_newton: 40,
            max_refine: 8,
            land_tol: 1e-6,
            cluster_eps: 1e-4,
        }
    }
}

/// A traced ray: points from high to low potential.
#[derive(Clone, Debug)]
pub struct RayTrace {
    pub time: usize,
    pub angle: Angle,
    /// (potential, point); potentials strictly decrease.
    pub points: Vec<(f64, C64)>,
    /// Indices into `points` that sit on the base grid h_max·ratio^j.
    pub grid: Vec<usize>,
    pub landing: Option<C64>,
    pub converged: bool,
    pub steps: usize,
    /// Stopped above h_min because successive points agreed to rounding level.
    pub resolved: bool,
}

impl RayTrace {
    pub fn last(&self) -> (f64, C64) {
        *self.points.last().expect("a trace holds at least one point")
    }

    /// Point on the base grid at index j (potential h_max·ratio^j).
    pub fn grid_point(&self, j: usize) -> Option<(f64, C64)> {
        self.grid.get(j).map(|&i| self.points[i])
    }

    /// Arclength of the polyline below potential h.
    pub fn tail_length(&self, h: f64) -> f64 {
        self.points
            .windows(2)
            .filter(|w| w[0].0 <= h * (1.0 + 1e-12))
            .map(|w| (w[1].1 - w[0].1).norm())
            .sum()
    }

    /// Point closest in potential to h.
    pub fn point_at(&self, h: f64) -> (f64, C64) {
        *self
            .points
            .iter()
            .min_by(|a, b| (a.0.ln() - h.ln()).abs().total_cmp(&(b.0.ln() - h.ln()).abs()))
            .expect("non-empty trace")
    }
}

/// Per-trace state: orbit angles θ_j and degrees D_{m,j} by level.
struct Levels<'a> {
    seq: &'a PolynomialSequence,
    m: usize,
    // turns in (−1/2, 1/2] of θ at time m + j
    turns: Vec<f64>,
    angles: Vec<Angle>,
    degree: Vec<f64>,
}

impl<'a> Levels<'a> {
    fn new(seq: &'a PolynomialSequence, m: usize, theta: &Angle) -> Self {
        Levels {
            seq,
            m,
            turns: vec![theta.centered_f64()],
            angles: vec![theta.clone()],
            degree: vec![1.0],
        }
    }

    fn grow(&mut self, j: usize) {
        while self.angles.len() <= j {
            let k = self.angles.len();
            let d = self.seq.degree(self.m + k) as u64;
            let next = self.angles[k - 1].dmap(d);
            self.turns.push(next.centered_f64());
            self.angles.push(next);
            self.degree.push(self.degree[k - 1] * d as f64);
        }
    }

    /// Least level j with D_{m,m+j}·h ≥ h_big.
    fn level_for(&mut self, h: f64, h_big: f64) -> usize {
        let mut j = 0;
        loop {
            self.grow(j);
            if self.degree[j] * h >= h_big {
                return j;
            }
            j += 1;
            if j > 4000 {
                return j;
            }
        }
    }
}

enum StepFailure {
    Newton,
    Precritical,
    Branch,
}

/// Residual of the ray equation at level j and its z-derivative.
fn residual(lv: &mut Levels, j: usize, h: f64, z: C64) -> Option<(C64, C64)> {
    lv.grow(j);
    let e = lv.seq.evaluate(lv.m, lv.m + j, z).ok()?;
    if e.value.norm() == 0.0 {
        return None;
    }
    let logphi = lv.seq.bottcher_log(lv.m + j, e.value, 1e-17).ok()?;
    let target = C64::new(lv.degree[j] * h, 2.0 * PI * lv.turns[j]);
    let f = logphi - target;
    let f = C64::new(f.re, wrap_pi(f.im));
    Some((f, e.derivative / e.value))
}

/// Every level where the orbit is far enough out for a direct Böttcher
/// evaluation must show the expected angle.
fn branch_ok(lv: &mut Levels, j_max: usize, h: f64, z: C64) -> bool {
    let r = 2.0 * lv.seq.escape_radius();
    let mut w = z;
    for j in 0..=j_max {
        if j > 0 {
            w = lv.seq.poly(lv.m + j).eval(w);
        }
        if w.norm() < r || !w.is_finite() {
            continue;
        }
        let Ok(l) = lv.seq.bottcher_log(lv.m + j, w, 1e-14) else { continue };
        let expected = 2.0 * PI * lv.turns[j];
        if wrap_pi(l.im - expected).abs() > 0.05 * PI {
            return false;
        }
        if (l.re - lv.degree[j] * h).abs() > 1e-3 * (lv.degree[j] * h).max(1.0) {
            return false;
        }
    }
    true
}

// `scale` is the expected move of this step; corrections far below it are noise.
fn newton(lv: &mut Levels, cfg: &RayConfig, h: f64, seed: C64, scale: f64) -> std::result::Result<C64, StepFailure> {
    let j = lv.level_for(h, cfg.h_big);
    let mut z = seed;
    let Some((mut f, mut df)) = residual(lv, j, h, z) else { return Err(StepFailure::Newton) };
    for _ in 0..cfg.max_newton {
        if df.norm() * z.norm().max(1e-300) < 1e-14 || !df.is_finite() || df.norm() == 0.0 {
            return Err(StepFailure::Precritical);
        }
        let dz = f / df;
        let floor = (4.0 * f64::EPSILON * z.norm()).max(1e-9 * scale);
        if f.norm() < cfg.newton_tol || dz.norm() <= floor {
            z -= dz;
            return if branch_ok(lv, j, h, z) { Ok(z) } else { Err(StepFailure::Branch) };
        }
        // damped step: never accept a residual increase
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let trial = z - dz * t;
            if let Some((f2, df2)) = residual(lv, j, h, trial) {
                if f2.norm() < f.norm() {
                    z = trial;
                    f = f2;
                    df = df2;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            if f.norm() < 1e3 * cfg.newton_tol || dz.norm() <= 1e3 * floor {
                return if branch_ok(lv, j, h, z) { Ok(z) } else { Err(StepFailure::Branch) };
            }
            return Err(StepFailure::Newton);
        }
    }
    if f.norm() < 1e3 * cfg.newton_tol && branch_ok(lv, j, h, z) {
        Ok(z)
    } else {
        Err(StepFailure::Newton)
    }
}

/// Trace R_{θ;m} from `cfg.h_max` down to `h_min`, or until successive
/// points agree to about 12 digits, whichever comes first.
pub fn trace_ray(seq: &PolynomialSequence, m: usize, theta: &Angle, h_min: f64, cfg: &RayConfig) -> Result<RayTrace> {
    if !seq.is_monic() {
        return Err(Error::MonicRequired);
    }
    if !(h_min > 0.0 && h_min < cfg.h_max) {
        return Err(Error::Config(format!("need 0 < h_min < h_max, got {h_min}, {}", cfg.h_max)));
    }
    let mut lv = Levels::new(seq, m, theta);
    let h0 = cfg.h_max;
    let seed = C64::from_polar(h0.exp(), 2.0 * PI * theta.to_f64());
    let z0 = newton(&mut lv, cfg, h0, seed, seed.norm()).map_err(|_| Error::NewtonDiverged { h: h0 })?;
    let mut points = vec![(h0, z0)];
    let mut grid = vec![0usize];
    let mut h = h0;
    let mut resolved = false;
    while h > h_min {
        let target = (h * cfg.ratio).max(h_min);
        advance(&mut lv, cfg, &mut points, target, 0)?;
        h = target;
        grid.push(points.len() - 1);
        if at_resolution_floor(&points) {
            resolved = true;
            break;
        }
    }
    let steps = points.len();
    Ok(RayTrace { time: m, angle: theta.clone(), points, grid, landing: None, converged: false, steps, resolved })
}

// Below this the ray equation is dominated by rounding: the remaining
// points would only repeat the landing point.
fn at_resolution_floor(points: &[(f64, C64)]) -> bool {
    let n = points.len();
    n >= 4
        && points[n - 4..].windows(2).all(|w| {
            let z = w[1].1;
            (z - w[0].1).norm() < 1e-12 * z.norm().max(1e-3)
        })
}

// Move from the last point to potential `target`, halving the log-step on failure.
fn advance(lv: &mut Levels, cfg: &RayConfig, points: &mut Vec<(f64, C64)>, target: f64, depth: usize) -> Result<()> {
    let n = points.len();
    let (h, z) = points[n - 1];
    // far out the ray is nearly radial; deeper in, extrapolate in log h
    let pred = if n >= 2 && h < 1.0 {
        let (hp, zp) = points[n - 2];
        let s = (target.ln() - h.ln()) / (h.ln() - hp.ln());
        z + (z - zp) * s
    } else {
        z * (target - h).exp()
    };
    let last_move = if n >= 2 { (z - points[n - 2].1).norm() } else { f64::INFINITY };
    let attempt = newton(lv, cfg, target, pred, (pred - z).norm()).and_then(|znew| {
        let jump = (znew - z).norm();
        if jump <= 10.0 * last_move + 1e-12 * z.norm().max(1.0) {
            Ok(znew)
        } else {
            Err(StepFailure::Branch)
        }
    });
    match attempt {
        Ok(znew) => {
            points.push((target, znew));
            Ok(())
        }
        Err(why) => {
            if depth >= cfg.max_refine {
                return Err(match why {
                    StepFailure::Newton => Error::NewtonDiverged { h: target },
                    StepFailure::Precritical => Error::PrecriticalHit { h: target },
                    StepFailure::Branch => Error::StepTooLarge { h: target },
                });
            }
            let mid = (h * target).sqrt();
            advance(lv, cfg, points, mid, depth + 1)?;
            advance(lv, cfg, points, target, depth + 1)
        }
    }
}

/// Landing estimate: the deepest traced point, accepted when checkpoints
/// at h·10⁸, h·10⁴ and h agree within `land_tol` (h the deepest potential),
/// or when the trace already stopped at the rounding floor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Landing {
    pub point: C64,
    pub converged: bool,
    pub h_final: f64,
    pub spread: f64,
}

pub fn landing_of(trace: &RayTrace, cfg: &RayConfig) -> Landing {
    let (h_final, z) = trace.last();
    if trace.resolved {
        let n = trace.points.len();
        let spread = trace.points[n - 4..].iter().map(|p| (p.1 - z).norm()).fold(0.0, f64::max);
        return Landing { point: z, converged: spread < cfg.land_tol, h_final, spread };
    }
    let a = trace.point_at(h_final * 1e8).1;
    let b = trace.point_at(h_final * 1e4).1;
    let spread = (a - b).norm().max((a - z).norm()).max((b - z).norm());
    Landing { point: z, converged: spread < cfg.land_tol, h_final, spread }
}

/// Trace to `cfg.h_min` and return the landing point.
pub fn landing_point(seq: &PolynomialSequence, m: usize, theta: &Angle, cfg: &RayConfig) -> Result<Landing> {
    let mut t = trace_ray(seq, m, theta, cfg.h_min, cfg)?;
    let l = landing_of(&t, cfg);
    t.landing = Some(l.point);
    t.converged = l.converged;
    if !l.converged {
        return Err(Error::NonConvergent { h: l.h_final, spread: l.spread });
    }
    Ok(l)
}

/// Trace and land several rays in parallel; output order matches input.
pub fn trace_many(seq: &PolynomialSequence, m: usize, angles: &[Angle], cfg: &RayConfig) -> Vec<Result<(RayTrace, Landing)>> {
    angles
        .par_iter()
        .map(|a| {
            let mut t = trace_ray(seq, m, a, cfg.h_min, cfg)?;
            let l = landing_of(&t, cfg);
            t.landing = Some(l.point);
            t.converged = l.converged;
            Ok((t, l))
        })
        .collect()
}

/// Angles whose rays land together, with their common landing point.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub point: C64,
    pub angles: Vec<Angle>,
}

impl Cluster {
    pub fn multiplicity(&self) -> usize {
        self.angles.len()
    }
}

/// Single-linkage clustering of landing points at threshold `eps`.
///
/// Distances in [eps, 3·eps) are neither clearly together nor clearly
/// apart and raise `AmbiguousClustering`.
pub fn cluster_points(points: &[(Angle, C64)], eps: f64) -> Result<Vec<Cluster>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut i = i;
        while p[i] != r {
            let next = p[i];
            p[i] = r;
            i = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let dist = (points[i].1 - points[j].1).norm();
            if dist < eps {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            } else if dist < 3.0 * eps {
                return Err(Error::AmbiguousClustering { distance: dist });
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, v)) => v.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    let mut out: Vec<Cluster> = groups
        .into_iter()
        .map(|(_, idx)| {
            let point = idx.iter().map(|&i| points[i].1).sum::<C64>() / idx.len() as f64;
            let mut angles: Vec<Angle> = idx.iter().map(|&i| points[i].0.clone()).collect();
            angles.sort();
            Cluster { point, angles }
        })
        .collect();
    out.sort_by(|a, b| a.angles[0].cmp(&b.angles[0]));
    Ok(out)
}

/// Landing clusters of the given angles at time m.
pub fn coland_clusters(seq: &PolynomialSequence, m: usize, angles: &[Angle], cfg: &RayConfig) -> Result<Vec<Cluster>> {
    let mut pts = Vec::with_capacity(angles.len());
    for (a, r) in angles.iter().zip(trace_many(seq, m, angles, cfg)) {
        let (_, l) = r?;
        if !l.converged {
            return Err(Error::NonConvergent { h: l.h_final, spread: l.spread });
        }
        pts.push((a.clone(), l.point));
    }
    cluster_points(&pts, cfg.cluster_eps)
}

/// Which side of a co-landing ray pair a point lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// The sector of angles in (θ1, θ2).
    Between,
    /// The sector of angles in (θ2, θ1).
    Complement,
}

/// Sector of z relative to the co-landing rays θ1, θ2 at time m.
///
/// The two traced rays, joined at their landing ends and closed by a large
/// counterclockwise arc from θ1 to θ2, bound the (θ1, θ2) sector; the
/// winding number of that loop about z decides the side.
pub fn sector_membership(seq: &PolynomialSequence, m: usize, pair: (&Angle, &Angle), z: C64, cfg: &RayConfig) -> Result<Side> {
    let r1 = trace_ray(seq, m, pair.0, cfg.h_min, cfg)?;
    let r2 = trace_ray(seq, m, pair.1, cfg.h_min, cfg)?;
    sector_side(&r1, &r2, z, cfg)
}

/// As [`sector_membership`], reusing traces.
pub fn sector_side(r1: &RayTrace, r2: &RayTrace, z: C64, cfg: &RayConfig) -> Result<Side> {
    let (l1, l2) = (landing_of(r1, cfg), landing_of(r2, cfg));
    if (l1.point - l2.point).norm() >= cfg.cluster_eps {
        return Err(Error::RealizationFailure(format!(
            "rays {} and {} land {:.3e} apart",
            r1.angle,
            r2.angle,
            (l1.point - l2.point).norm()
        )));
    }
    // loop: out along r1, arc ccw to r2's far end, in along r2
    let mut path: Vec<C64> = r1.points.iter().rev().map(|p| p.1).collect();
    let a = r1.points[0].1;
    let b = r2.points[0].1;
    let (ra, rb) = (a.norm().ln(), b.norm().ln());
    let ta = a.arg();
    let mut span = (b.arg() - ta).rem_euclid(2.0 * PI);
    if span == 0.0 {
        span = 2.0 * PI;
    }
    for k in 1..256 {
        let s = k as f64 / 256.0;
        path.push(C64::from_polar((ra + (rb - ra) * s).exp(), ta + span * s));
    }
    path.extend(r2.points.iter().map(|p| p.1));
    let mut winding = 0.0;
    for i in 0..path.len() {
        let p = path[i];
        let q = path[(i + 1) % path.len()];
        if segment_distance(p, q, z) < cfg.land_tol {
            return Err(Error::OnBoundary);
        }
        winding += ((q - z) / (p - z)).arg();
    }
    let turns = (winding / (2.0 * PI)).round();
    Ok(if turns.abs() >= 1.0 { Side::Between } else { Side::Complement })
}

fn segment_distance(p: C64, q: C64, z: C64) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - p).norm();
    }
    let t = (((z - p) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p + d * t - z).norm()
}

/// Clusters per time plus forward links between them.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasuredPortrait {
    pub times: Vec<usize>,
    pub clusters: Vec<Vec<Cluster>>,
    /// (time index, cluster, next-time cluster) when P maps one landing point onto the other.
    pub links: Vec<(usize, usize, usize)>,
    pub cluster_eps: f64,
    /// Largest denominator of the angle grid, the bound on "no other rays".
    pub grid_bound: u64,
}

impl MeasuredPortrait {
    /// Chains of linked clusters starting at the first time.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let Some(first) = self.clusters.first() else { return vec![] };
        let mut out = Vec::new();
        for start in 0..first.len() {
            let mut chain = vec![start];
            for t in 0..self.times.len() - 1 {
                let cur = *chain.last().expect("non-empty");
                match self.links.iter().find(|(ti, a, _)| *ti == t && *a == cur) {
                    Some((_, _, b)) => chain.push(*b),
                    None => break,
                }
            }
            if chain.len() == self.times.len() {
                out.push(chain);
            }
        }
        out
    }

    pub fn max_multiplicity(&self) -> usize {
        self.clusters.iter().flatten().map(|c| c.multiplicity()).max().unwrap_or(0)
    }
}

/// All angles p/q with q in `denoms` (reduced, deduplicated).
pub fn angle_grid(denoms: &[u64]) -> Vec<Angle> {
    let mut v: Vec<Angle> = denoms
        .iter()
        .filter(|&&q| q > 0)
        .flat_map(|&q| (0..q).map(move |p| Angle::new(p, q).expect("q > 0")))
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Trace the grid at consecutive times, cluster, and link clusters forward.
pub fn measured_portrait(seq: &PolynomialSequence, times: &[usize], grid: &[Angle], cfg: &RayConfig) -> Result<MeasuredPortrait> {
    let mut clusters = Vec::with_capacity(times.len());
    for &t in times {
        clusters.push(if grid.is_empty() { vec![] } else { coland_clusters(seq, t, grid, cfg)? });
    }
    let mut links = Vec::new();
    for (ti, w) in times.windows(2).enumerate() {
        if w[1] != w[0] + 1 {
            continue;
        }
        let p = seq.poly(w[1]);
        for (a, c) in clusters[ti].iter().enumerate() {
            let image = p.eval(c.point);
            if let Some(b) = clusters[ti + 1]
                .iter()
                .position(|c2| (c2.point - image).norm() < cfg.cluster_eps)
            {
                links.push((ti, a, b));
            }
        }
    }
    let grid_bound = grid.iter().map(|a| a.denom().try_into().unwrap_or(u64::MAX)).max().unwrap_or(0);
    Ok(MeasuredPortrait { times: times.to_vec(), clusters, links, cluster_eps: cfg.cluster_eps, grid_bound })
}

/// Realized matching at time m: pullback endpoints paired by co-landing,
/// one chord set per critical arc.
pub fn measure_matching(
    seq: &PolynomialSequence,
    p: &crate::portrait::FormalPortrait,
    m: usize,
    cfg: &RayConfig,
) -> Result<Vec<Vec<crate::lamination::Chord>>> {
    let cs = p.critical_structure(m)?;
    let d = p.degree_after(m);
    if seq.degree(m + 1) as u64 != d {
        return Err(Error::RealizationFailure(format!(
            "sequence degree {} at time {} differs from portrait degree {d}",
            seq.degree(m + 1),
            m + 1
        )));
    }
    let mut out = Vec::new();
    for ((arc, _), (value, _)) in cs.critical_arcs.iter().zip(&cs.critical_value_arcs) {
        let (al, be) = crate::lamination::pullback_endpoints(arc, d, value)?;
        let ends: Vec<Angle> = al.iter().chain(&be).cloned().collect();
        let clusters = coland_clusters(seq, m, &ends, cfg)
            .map_err(|e| Error::RealizationFailure(format!("endpoint rays: {e}")))?;
        let mut chords = Vec::new();
        for c in &clusters {
            if c.angles.len() != 2 {
                return Err(Error::RealizationFailure(format!(
                    "{} pullback endpoint rays land together at {}",
                    c.angles.len(),
                    c.point
                )));
            }
            chords.push(crate::lamination::Chord::new(c.angles[0].clone(), c.angles[1].clone())?);
        }
        out.push(chords);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Polynomial, SequenceBounds};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn cubic() -> PolynomialSequence {
        PolynomialSequence::constant(
            Polynomial::from_real(&[0.0, 1.5, 0.0, 1.0]).unwrap(),
            SequenceBounds::new(3, 1.0, 1.5).unwrap(),
        )
        .unwrap()
    }

    fn z2() -> PolynomialSequence {
        PolynomialSequence::constant(Polynomial::unicritical(2, c(0.0, 0.0)), SequenceBounds::new(2, 1.0, 0.0).unwrap()).unwrap()
    }

    fn basilica() -> PolynomialSequence {
        PolynomialSequence::constant(Polynomial::unicritical(2, c(-1.0, 0.0)), SequenceBounds::new(2, 1.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn zero_ray_of_the_cubic_is_real() {
        let cfg = RayConfig::default();
        let t = trace_ray(&cubic(), 0, &Angle::zero(), 1e-20, &cfg).unwrap();
        assert!(t.points.iter().all(|(_, z)| z.im.abs() < 1e-12 && z.re > 0.0));
    }

    #[test]
    fn rays_of_z_squared_are_radial() {
        let cfg = RayConfig::default();
        let t = trace_ray(&z2(), 0, &a("1/3"), 1e-10, &cfg).unwrap();
        for (h, z) in &t.points {
            let want = C64::new(*h, 2.0 * PI / 3.0).exp();
            assert!((z - want).norm() < 1e-12 * want.norm().max(1.0), "{h}: {z} vs {want}");
        }
    }

    #[test]
    fn conjugate_rays_mirror() {
        let cfg = RayConfig::default();
        for s in ["1/3", "2/7", "5/12"] {
            let t1 = trace_ray(&basilica(), 0, &a(s), 1e-30, &cfg).unwrap();
            let t2 = trace_ray(&basilica(), 0, &a(s).neg(), 1e-30, &cfg).unwrap();
            for j in 0..t1.grid.len().min(t2.grid.len()) {
                let (p, q) = (t1.grid_point(j).unwrap().1, t2.grid_point(j).unwrap().1);
                assert!((p - q.conj()).norm() < 1e-9 * p.norm().max(1.0));
            }
        }
    }

    #[test]
    fn cubic_landings() {
        let cfg = RayConfig::default();
        let l = landing_point(&cubic(), 0, &Angle::zero(), &cfg).unwrap();
        assert!(l.point.norm() < 1e-6);
        let l = landing_point(&cubic(), 0, &a("1/6"), &cfg).unwrap();
        assert!((l.point - c(0.0, 1.5f64.sqrt())).norm() < 1e-6);
    }

    #[test]
    fn cubic_clusters() {
        let cfg = RayConfig::default();
        let cl = coland_clusters(&cubic(), 0, &[a("0"), a("1/2"), a("1/6"), a("1/3")], &cfg).unwrap();
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].angles, vec![a("0"), a("1/2")]);
        assert!(cl[0].point.norm() < 1e-6);
        assert_eq!(cl[1].angles, vec![a("1/6"), a("1/3")]);
        let one = coland_clusters(&cubic(), 0, &[a("1/6")], &cfg).unwrap();
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn ray_equivariance() {
        let cfg = RayConfig::default();
        let s = cubic();
        let theta = a("1/6");
        let t0 = trace_ray(&s, 0, &theta, 1e-12, &cfg).unwrap();
        let cfg1 = RayConfig { h_max: 3.0 * cfg.h_max, ..cfg.clone() };
        let t1 = trace_ray(&s, 1, &theta.dmap(3), 3e-12, &cfg1).unwrap();
        let p = s.poly(1);
        for j in 0..t0.grid.len().min(t1.grid.len()) {
            let (h0, z0) = t0.grid_point(j).unwrap();
            let (h1, z1) = t1.grid_point(j).unwrap();
            assert!((h1 - 3.0 * h0).abs() < 1e-9 * h1);
            let img = p.eval(z0);
            assert!((img - z1).norm() < 1e-8 * img.norm().max(1.0), "{j}: {img} vs {z1}");
        }
    }

    #[test]
    fn sector_examples() {
        let cfg = RayConfig::default();
        let s = cubic();
        assert_eq!(
            sector_membership(&s, 0, (&a("1/6"), &a("1/3")), c(10.0, 0.0), &cfg).unwrap(),
            Side::Complement
        );
        assert_eq!(
            sector_membership(&s, 1, (&a("0"), &a("1/2")), c(0.0, -0.5f64.sqrt()), &cfg).unwrap(),
            Side::Complement
        );
        assert_eq!(
            sector_membership(&s, 1, (&a("0"), &a("1/2")), c(0.0, 0.5f64.sqrt()), &cfg).unwrap(),
            Side::Between
        );
        assert_eq!(
            sector_membership(&s, 1, (&a("0"), &a("1/2")), c(3.0, 0.0), &cfg),
            Err(Error::OnBoundary)
        );
    }

    #[test]
    fn ambiguous_band_is_an_error() {
        let pts = vec![(a("0"), c(0.0, 0.0)), (a("1/2"), c(2e-4, 0.0))];
        assert!(matches!(cluster_points(&pts, 1e-4), Err(Error::AmbiguousClustering { .. })));
        let pts = vec![(a("0"), c(0.0, 0.0)), (a("1/2"), c(5e-5, 0.0)), (a("1/3"), c(1.0, 0.0))];
        assert_eq!(cluster_points(&pts, 1e-4).unwrap().len(), 2);
    }

    #[test]
    fn empty_grid_gives_empty_portrait() {
        let mp = measured_portrait(&cubic(), &[0, 1], &[], &RayConfig::default()).unwrap();
        assert!(mp.clusters.iter().all(|c| c.is_empty()));
    }

    #[test]
    fn nonmonic_rays_are_refused() {
        let s = PolynomialSequence::constant(
            Polynomial::from_real(&[0.0, 0.0, 2.0]).unwrap(),
            SequenceBounds::new(2, 2.0, 0.0).unwrap(),
        )
        .unwrap();
        assert!(matches!(trace_ray(&s, 0, &Angle::zero(), 1e-3, &RayConfig::default()), Err(Error::MonicRequired)));
    }
}
