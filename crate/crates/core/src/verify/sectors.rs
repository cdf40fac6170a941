//! Numerical check of the sector structure cut out by a realized portrait.
//!
//! At time m the rays of A_m cut the plane into one sector per
//! complementary arc. Critical points of P_{m+1} must lie exactly in the
//! sectors of critical arcs, and a probe in the sector of an arc J of
//! A_{m+1} must have, in the sector of each arc I of A_m, as many
//! preimages as P_{m+1} covers J by I.

use crate::angle::{covering_count, Angle, Arc};
use crate::error::{Error, Result};
use crate::poly::{PolynomialSequence, C64};
use crate::portrait::FormalPortrait;
use crate::rays::{cluster_points, sector_side, trace_ray, RayConfig, RayTrace, Side};

/// Preimage counts for one probe.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeCount {
    /// Index of the time-(m+1) sector probed.
    pub target: usize,
    pub point: C64,
    /// Measured preimages per time-m sector.
    pub counts: Vec<usize>,
    /// Covering numbers per time-m sector.
    pub expected: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectorReport {
    pub time: usize,
    pub degree: u64,
    /// Complementary arcs of A_m (sector i is bounded by the rays at arcs[i]'s ends).
    pub arcs: Vec<Arc>,
    pub image_arcs: Vec<Arc>,
    /// Critical points of P_{m+1} and the sector containing each.
    pub critical_points: Vec<(C64, usize)>,
    /// Sectors of critical arcs according to the combinatorics.
    pub critical_arcs: Vec<usize>,
    pub probes: Vec<ProbeCount>,
}

impl SectorReport {
    /// Sectors containing a critical point are exactly the critical sectors.
    pub fn critical_points_ok(&self) -> bool {
        let mut seen: Vec<usize> = self.critical_points.iter().map(|c| c.1).collect();
        seen.sort();
        seen.dedup();
        seen == self.critical_arcs
    }

    pub fn counts_ok(&self) -> bool {
        self.probes
            .iter()
            .all(|p| p.counts.iter().zip(&p.expected).all(|(&c, &e)| c as u64 == e))
    }

    pub fn degree_conserved(&self) -> bool {
        self.probes.iter().all(|p| p.counts.iter().sum::<usize>() as u64 == self.degree)
    }

    pub fn passed(&self) -> bool {
        self.critical_points_ok() && self.counts_ok() && self.degree_conserved()
    }
}

fn traces_for(seq: &PolynomialSequence, m: usize, angles: &[Angle], cfg: &RayConfig) -> Result<Vec<RayTrace>> {
    angles.iter().map(|a| trace_ray(seq, m, a, cfg.h_min, cfg)).collect()
}

/// Which sector (index into `arcs`) contains z.
fn sector_of(traces: &[RayTrace], z: C64, cfg: &RayConfig) -> Result<usize> {
    let n = traces.len();
    let mut hits = Vec::new();
    for i in 0..n {
        if sector_side(&traces[i], &traces[(i + 1) % n], z, cfg)? == Side::Between {
            hits.push(i);
        }
    }
    match hits.as_slice() {
        [i] => Ok(*i),
        _ => Err(Error::RealizationFailure(format!("point {z} lies in {} sectors", hits.len()))),
    }
}

pub fn sector_theorem_check(seq: &PolynomialSequence, p: &FormalPortrait, m: usize, cfg: &RayConfig) -> Result<SectorReport> {
    let d = p.degree_after(m);
    if seq.degree(m + 1) as u64 != d {
        return Err(Error::RealizationFailure(format!("degree of P_{} is not {d}", m + 1)));
    }
    let cs = p.critical_structure(m)?;
    let a_m = p.extend(m);
    let a_next = p.extend(m + 1);
    let arcs = a_m.complementary_arcs();
    let image_arcs = a_next.complementary_arcs();

    let traces = traces_for(seq, m, a_m.angles(), cfg)?;
    let landings: Vec<(Angle, C64)> = traces.iter().map(|t| (t.angle.clone(), t.last().1)).collect();
    if cluster_points(&landings, cfg.cluster_eps)?.len() != 1 {
        return Err(Error::RealizationFailure(format!("rays of {a_m} do not land together at time {m}")));
    }

    let critical_points = seq
        .poly(m + 1)
        .critical_points()?
        .into_iter()
        .map(|c| Ok((c, sector_of(&traces, c, cfg)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut critical_arcs: Vec<usize> = cs
        .critical_arcs
        .iter()
        .filter_map(|(a, _)| arcs.iter().position(|b| b == a))
        .collect();
    critical_arcs.sort();

    let mut probes = Vec::new();
    for (j, target) in image_arcs.iter().enumerate() {
        let mid = target.midpoint();
        let ray = trace_ray(seq, m + 1, &mid, 0.05, cfg)?;
        let mut done = None;
        // probe potentials tried in turn when a preimage sits on a ray
        for h in [0.5, 0.25, 1.0, 0.1] {
            let z0 = ray.point_at(h).1;
            let roots = seq.poly(m + 1).preimages(z0)?;
            let mut counts = vec![0usize; arcs.len()];
            let mut ok = true;
            for r in roots {
                match sector_of(&traces, r, cfg) {
                    Ok(i) => counts[i] += 1,
                    Err(Error::OnBoundary) => {
                        ok = false;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if ok {
                done = Some((z0, counts));
                break;
            }
        }
        let (point, counts) = done.ok_or(Error::OnBoundary)?;
        let expected = arcs.iter().map(|i| covering_count(i, d, target)).collect::<Result<Vec<_>>>()?;
        probes.push(ProbeCount { target: j, point, counts, expected });
    }
    Ok(SectorReport { time: m, degree: d, arcs, image_arcs, critical_points, critical_arcs, probes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::AngleSet;
    use crate::poly::{Polynomial, SequenceBounds};

    #[test]
    fn cubic_portrait_sectors() {
        let s = PolynomialSequence::constant(
            Polynomial::from_real(&[0.0, 1.5, 0.0, 1.0]).unwrap(),
            SequenceBounds::new(3, 1.0, 1.5).unwrap(),
        )
        .unwrap();
        let p = FormalPortrait::constant(AngleSet::parse_list("1/6, 1/3").unwrap(), 3).unwrap();
        let r = sector_theorem_check(&s, &p, 0, &RayConfig::default()).unwrap();
        // arcs of {1/6,1/3}: (1/6,1/3) and (1/3,1/6); the second is critical
        assert_eq!(r.critical_arcs, vec![1]);
        assert_eq!(r.critical_points.len(), 2);
        assert!(r.critical_points.iter().all(|c| c.1 == 1));
        assert!(r.passed(), "{r:?}");
        // value arc (0,1/2) is image arc 0
        let by_target: Vec<Vec<usize>> = r.probes.iter().map(|p| p.counts.clone()).collect();
        assert_eq!(by_target, vec![vec![0, 3], vec![1, 2]]);
    }
}
