//! The acceptance suite: twelve end-to-end checks with time budgets.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::angle::{Angle, AngleSet, Arc};
use crate::catalog::{cubic_sequence, rabbit_rotation_sequence};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::lamination::{enumerate_matchings, face_groups, parse_chords, pullback_endpoints, Chord};
use crate::poly::{escape_radius, Polynomial, PolynomialSequence, SequenceBounds, C64};
use crate::portrait::{random_valid_portrait, unlinked, FormalPortrait};
use crate::rays::{angle_grid, coland_clusters, landing_point};
use crate::render::{render_escape, render_semigroup, ImageSpec, INTERIOR};
use crate::verify::julia::{critical_values, hyperbolicity_estimate, postcritical_distance};
use crate::verify::sectors::sector_theorem_check;
use crate::verify::words::{measure_word, word_angle, word_experiment, word_sequence};

pub const NAMES: [&str; 12] = [
    "portrait {1/14,1/7,2/7}",
    "cubic critical structure",
    "degree-6 lamination and matching counts",
    "eventual periodicity of random portraits",
    "cubic landing points",
    "rotated rabbit",
    "word sequences",
    "functional equations",
    "sector covering counts",
    "hyperbolicity and postcritical distance",
    "escape radius",
    "render determinism",
];

const BUDGETS_S: [u64; 12] = [1, 1, 10, 10, 30, 30, 300, 10, 30, 60, 5, 30];

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2} {} ({:.2}s of {}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

/// Run criterion `id` (1-based). Errors and blown budgets count as failures.
pub fn run_criterion(id: usize, cfg: &Config) -> CriterionResult {
    assert!((1..=12).contains(&id), "criteria are numbered 1 to 12");
    let start = Instant::now();
    let out = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(cfg),
        4 => c4(cfg),
        5 => c5(cfg),
        6 => c6(cfg),
        7 => c7(cfg),
        8 => c8(cfg),
        9 => c9(cfg),
        10 => c10(cfg),
        11 => c11(cfg),
        _ => c12(cfg),
    };
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(BUDGETS_S[id - 1]);
    let (mut passed, mut detail) = match out {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > budget {
        passed = false;
        detail.push_str("; over time budget");
    }
    CriterionResult { id, name: NAMES[id - 1], passed, detail, elapsed, budget }
}

pub fn run_all(cfg: &Config) -> Vec<CriterionResult> {
    (1..=12).map(|i| run_criterion(i, cfg)).collect()
}

type Outcome = Result<(bool, String)>;

fn a(s: &str) -> Angle {
    s.parse().expect("angle literal")
}

fn set(s: &str) -> AngleSet {
    AngleSet::parse_list(s).expect("set literal")
}

fn c1() -> Outcome {
    let p = FormalPortrait::constant(set("1/14 1/7 2/7"), 2)?;
    let valid = p.is_valid();
    let a1 = p.extend(1);
    let c = p.detect_preperiodicity();
    let ok = valid && a1 == set("1/7 2/7 4/7") && (c.preperiod, c.period) == (1, 1);
    Ok((ok, format!("valid {valid}, A_1 = {a1}, (preperiod, period) = ({}, {})", c.preperiod, c.period)))
}

fn c2() -> Outcome {
    let p = FormalPortrait::constant(set("1/6 1/3"), 3)?;
    let cs = p.critical_structure(0)?;
    let ok = cs.unicritical
        && cs.critical_arcs.len() == 1
        && cs.critical_arcs[0] == (Arc::new(a("1/3"), a("1/6"))?, 3)
        && cs.critical_value_arcs.len() == 1
        && cs.critical_value_arcs[0].0 == Arc::new(a("0"), a("1/2"))?;
    let (arc, k) = &cs.critical_arcs[0];
    Ok((ok, format!("critical arc {arc} covers {} {k} times, unicritical {}", cs.critical_value_arcs[0].0, cs.unicritical)))
}

fn canonical(m: &[Chord]) -> Vec<(Angle, Angle)> {
    let mut v: Vec<(Angle, Angle)> = m
        .iter()
        .map(|c| {
            let (x, y) = c.endpoints();
            (x.min(y).clone(), x.max(y).clone())
        })
        .collect();
    v.sort();
    v
}

// Every bijection α → β, kept when no two chords interleave.
fn brute_force_matchings(alphas: &[Angle], betas: &[Angle]) -> BTreeSet<Vec<(Angle, Angle)>> {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    let mut out = BTreeSet::new();
    for p in perms(alphas.len()) {
        let chords: Vec<(Angle, Angle)> = (0..alphas.len())
            .map(|i| {
                let (x, y) = (alphas[i].clone(), betas[p[i]].clone());
                if x < y { (x, y) } else { (y, x) }
            })
            .collect();
        let inside = |c: &(Angle, Angle), t: &Angle| &c.0 < t && t < &c.1;
        let crossing = chords.iter().enumerate().any(|(i, c)| {
            chords[i + 1..].iter().any(|e| inside(c, &e.0) != inside(c, &e.1))
        });
        if !crossing {
            let mut s = chords;
            s.sort();
            out.insert(s);
        }
    }
    out
}

fn c3(cfg: &Config) -> Outcome {
    let im = Arc::new(a("11/36"), a("7/36"))?;
    let im1 = Arc::new(a("5/6"), a("1/6"))?;
    let matching = parse_chords("{7/36,11/36},{13/36,17/36},{19/36,5/36},{23/36,31/36},{25/36,29/36},{35/36,1/36}")?;
    let lam = face_groups(&matching, 6, &im, &im1)?;
    let degrees: Vec<usize> = lam.groups.iter().map(|g| g.degree).collect();
    let want = [
        parse_chords("{7/36,11/36},{13/36,17/36},{19/36,5/36}")?,
        parse_chords("{25/36,29/36},{31/36,23/36}")?,
        parse_chords("{1/36,35/36}")?,
    ];
    let groups_ok = lam.groups.len() == 3
        && lam.groups.iter().zip(&want).all(|(g, w)| canonical(&g.chords) == canonical(w))
        && degrees == [3, 2, 1]
        && lam.boundary_chord == Chord::new(a("7/36"), a("11/36"))?;

    let (al, be) = pullback_endpoints(&im, 6, &im1)?;
    let n6 = enumerate_matchings(&al, &be)?.len();

    // random labelled point sets, n ≤ 7
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut agree = true;
    for n in 1..=7usize {
        for _ in 0..3 {
            let mut pts: BTreeSet<Angle> = BTreeSet::new();
            while pts.len() < 2 * n {
                let q = rng.gen_range(2..200u64);
                pts.insert(Angle::new(rng.gen_range(0..q), q)?);
            }
            let mut pts: Vec<Angle> = pts.into_iter().collect();
            pts.shuffle(&mut rng);
            let (xs, ys) = pts.split_at(n);
            let fast: BTreeSet<_> = enumerate_matchings(xs, ys)?.iter().map(|m| canonical(m)).collect();
            agree &= fast == brute_force_matchings(xs, ys);
        }
    }
    let ok = groups_ok && n6 == 132 && agree;
    Ok((ok, format!("groups {lam} degrees {degrees:?}; {n6} matchings for n = 6; brute force agrees {agree}")))
}

fn c4(cfg: &Config) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bad = 0;
    let mut longest = (0, 0);
    for _ in 0..1000 {
        let p = random_valid_portrait(&mut rng, 6, 10_000, 6);
        let c = p.detect_preperiodicity();
        let ok = p.is_valid()
            && p.degrees().is_constant()
            && c.period >= 1
            && p.extend(c.preperiod) == p.extend(c.preperiod + c.period)
            && c.witness.0 == p.extend(c.preperiod);
        if !ok {
            bad += 1;
        }
        longest = longest.max((c.preperiod + c.period, c.period));
    }
    Ok((bad == 0, format!("{bad} of 1000 without a certificate; longest preperiod+period {}", longest.0)))
}

fn c5(cfg: &Config) -> Outcome {
    let rc = cfg.ray_config();
    let seq = cubic_sequence();
    let s15 = 1.5f64.sqrt();
    let l0 = landing_point(&seq, 0, &a("0"), &rc)?;
    let l6 = landing_point(&seq, 0, &a("1/6"), &rc)?;
    let e0 = l0.point.norm();
    let e6 = (l6.point - C64::new(0.0, 1.2247448)).norm();
    let grid = angle_grid(&[1, 2, 3, 6]);
    let clusters = coland_clusters(&seq, 0, &grid, &rc)?;
    let has = |angles: &[Angle], z: C64| {
        clusters.iter().any(|c| c.angles.as_slice() == angles && (c.point - z).norm() < 1e-6)
    };
    let ok = e0 < 1e-6 && e6 < 1e-6 && has(&[a("0"), a("1/2")], C64::new(0.0, 0.0)) && has(&[a("1/6"), a("1/3")], C64::new(0.0, s15));
    let shown: Vec<String> = clusters
        .iter()
        .filter(|c| c.multiplicity() > 1)
        .map(|c| format!("{{{}}}@{:.7}", c.angles.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","), c.point))
        .collect();
    Ok((ok, format!("|z(0)| = {e0:.1e}, |z(1/6) − 1.2247448i| = {e6:.1e}; clusters {}", shown.join(" "))))
}

fn diameter(pts: &[C64]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            d = d.max((p - q).norm());
        }
    }
    d
}

fn c6(cfg: &Config) -> Outcome {
    let rc = cfg.ray_config();
    let seq = rabbit_rotation_sequence();
    let land = |m: usize, s: &str| -> Result<Vec<C64>> {
        AngleSet::parse_list(s)?.angles().iter().map(|t| Ok(landing_point(&seq, m, t, &rc)?.point)).collect()
    };
    let z0 = land(0, "10/21 13/21 19/21")?;
    let z1 = land(1, "17/21 20/21 5/21")?;
    let (d0, d1) = (diameter(&z0), diameter(&z1));
    let image = seq.poly(1).eval(z0[0]);
    let moved = z1.iter().map(|z| (z - image).norm()).fold(0.0, f64::max);
    let clusters = coland_clusters(&seq, 0, &[a("10/21"), a("13/21"), a("19/21")], &rc)?;
    let p = FormalPortrait::constant(set("10/21 13/21 19/21"), 2)?;
    let linked = !unlinked(&p.extend(0), &p.extend(1))?;
    let rabbit = FormalPortrait::constant(set("1/7 2/7 4/7"), 2)?;
    let eq = p.equivalent(&rabbit, 8);
    let ok = d0 < 1e-4
        && d1 < 1e-4
        && moved < 1e-4
        && clusters.len() == 1
        && linked
        && eq.as_ref().is_some_and(|e| e.0 == a("1/3"));
    let theta = eq.map_or("none".to_string(), |e| e.0.to_string());
    Ok((ok, format!("diameters {d0:.1e}, {d1:.1e}; |landing₁ − P₁(landing₀)| ≤ {moved:.1e}; linked {linked}; rotation {theta}")))
}

/// Eight words: every 3-letter prefix followed by a seeded 5-letter tail.
pub fn sample_words(seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..8u32)
        .map(|i| {
            let head: String = (0..3).map(|b| if (i >> (2 - b)) & 1 == 1 { '1' } else { '0' }).collect();
            let tail: String = (0..5).map(|_| if rng.gen::<bool>() { '1' } else { '0' }).collect();
            head + &tail
        })
        .collect()
}

fn c7(cfg: &Config) -> Outcome {
    let rc = cfg.ray_config();
    let opts = cfg.search_options();
    let mut ok = true;
    let mut detail = Vec::new();
    for (w1, w2) in [("0", "1"), ("0110", "1001")] {
        let r = word_experiment(w1, w2, cfg.arc_tol, &opts, &rc)?;
        ok &= r.first_difference == Some(1) && r.passed();
        detail.push(format!(
            "{w1}/{w2}: arcs {:.6}, {:.6}, value arcs {:.6}, {:.6}",
            r.first.critical_arc, r.second.critical_arc, r.first.value_arc, r.second.value_arc
        ));
    }
    let words = sample_words(cfg.seed);
    let mut lengths = Vec::new();
    let mut worst: f64 = 0.0;
    for w in &words {
        let m = measure_word(w, 0, &opts, &rc)?;
        worst = worst.max((m.critical_arc - 2.0 * word_angle(w)?.to_f64()).abs());
        lengths.push(m.critical_arc);
    }
    let mut sorted = lengths.clone();
    sorted.sort_by(f64::total_cmp);
    let gap = sorted.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    ok &= gap > 1e-6;
    detail.push(format!("8 words, smallest gap {gap:.2e}, largest deviation from the exact arc {worst:.1e}"));
    Ok((ok, detail.join("; ")))
}

fn c8(cfg: &Config) -> Outcome {
    let seqs = [cubic_sequence(), rabbit_rotation_sequence(), word_sequence("0110")?];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut g_worst, mut b_worst): (f64, f64) = (0.0, 0.0);
    for seq in &seqs {
        let r = seq.escape_radius();
        let mut kept = 0;
        let mut tries = 0;
        while kept < 100 {
            tries += 1;
            if tries > 100_000 {
                return Err(Error::Config("could not sample 100 escaping points".into()));
            }
            let m = rng.gen_range(0..4usize);
            let z = C64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
            let g0 = seq.green(m, z, 1e-15);
            if !g0.escaped || g0.value < 1e-3 {
                continue;
            }
            let (Ok(b0), Ok(b1)) = (seq.bottcher(m, z, 1e-15), seq.bottcher(m + 1, seq.poly(m + 1).eval(z), 1e-15)) else {
                continue;
            };
            let d = seq.degree(m + 1) as f64;
            let g1 = seq.green(m + 1, seq.poly(m + 1).eval(z), 1e-15);
            g_worst = g_worst.max((g1.value - d * g0.value).abs() / (d * g0.value));
            let bd = b0.powf(d);
            b_worst = b_worst.max((b1 - bd).norm() / bd.norm());
            kept += 1;
        }
    }
    let ok = g_worst < 1e-9 && b_worst < 1e-9;
    Ok((ok, format!("largest relative residual: Green {g_worst:.1e}, Böttcher {b_worst:.1e}")))
}

fn c9(cfg: &Config) -> Outcome {
    let p = FormalPortrait::constant(set("1/6 1/3"), 3)?;
    let r = sector_theorem_check(&cubic_sequence(), &p, 0, &cfg.ray_config())?;
    let sums_ok = r.probes.iter().all(|q| q.counts.iter().sum::<usize>() == 3);
    let in_critical: BTreeSet<usize> = r
        .probes
        .iter()
        .flat_map(|q| r.critical_arcs.iter().map(move |&s| q.counts[s]))
        .collect();
    let crit_ok = r.critical_points_ok() && r.critical_points.iter().all(|(_, s)| r.critical_arcs.contains(s));
    let ok = r.passed() && sums_ok && crit_ok && in_critical == BTreeSet::from([2, 3]);
    let counts: Vec<String> = r.probes.iter().map(|q| format!("{:?}", q.counts)).collect();
    Ok((ok, format!("critical points in sectors {:?}, critical sectors {:?}, probe counts {}", r.critical_points.iter().map(|c| c.1).collect::<Vec<_>>(), r.critical_arcs, counts.join(" "))))
}

fn c10(cfg: &Config) -> Outcome {
    let square = PolynomialSequence::constant(Polynomial::unicritical(2, C64::new(0.0, 0.0)), SequenceBounds::new(2, 1.0, 1.0)?)?;
    let h = hyperbolicity_estimate(&square, 0, 12, 200, cfg.seed)?;
    let mut ok = (h.mu_est - 2.0).abs() <= 0.02;
    let mut mu_min = f64::INFINITY;
    let mut pd_min = f64::INFINITY;
    let mut post_worst: f64 = 0.0;
    let targets = [C64::new(0.0, 0.0), C64::new(-1.0, 0.0)];
    for w in sample_words(cfg.seed) {
        let seq = word_sequence(&w)?;
        let e = hyperbolicity_estimate(&seq, 0, 2 * w.len(), 100, cfg.seed)?;
        mu_min = mu_min.min(e.mu_est);
        let pd = postcritical_distance(&seq, 2 * w.len(), 2 * w.len() + 4, 200, cfg.seed)?;
        pd_min = pd_min.min(pd.value);
        for m in 0..4 {
            for n in m + 1..=m + 2 * w.len() + 2 {
                for v in critical_values(&seq, m, n)? {
                    post_worst = post_worst.max(targets.iter().map(|t| (v - t).norm()).fold(f64::INFINITY, f64::min));
                }
            }
        }
    }
    ok &= mu_min > 1.0 && pd_min > 0.0 && post_worst < 1e-10;
    Ok((ok, format!("μ(z²) = {:.4}; over 8 words min μ = {mu_min:.3}, min PD = {pd_min:.3}, postcritical deviation {post_worst:.1e}", h.mu_est)))
}

fn random_poly<R: Rng>(rng: &mut R, b: &SequenceBounds) -> Result<Polynomial> {
    let deg = rng.gen_range(2..=b.d);
    let phase = |rng: &mut R| C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let mut c: Vec<C64> = (0..deg).map(|_| phase(rng) * b.m * rng.gen::<f64>().powf(0.25)).collect();
    c.push(phase(rng) * b.k.powf(rng.gen_range(-1.0..=1.0)));
    Polynomial::new(c)
}

fn c11(cfg: &Config) -> Outcome {
    let profiles = [(2, 1.0, 1.0), (3, 1.0, 1.5), (3, 2.0, 1.0), (4, 1.0, 0.5), (6, 1.5, 2.0), (2, 3.0, 0.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    for (d, k, m) in profiles {
        let b = SequenceBounds::new(d, k, m)?;
        let r = escape_radius(&b);
        for _ in 0..1000 {
            let p = random_poly(&mut rng, &b)?;
            if b.check(&p).is_err() {
                failures += 1;
                continue;
            }
            for j in 0..256 {
                let z = C64::from_polar(r, std::f64::consts::TAU * j as f64 / 256.0);
                let ratio = p.eval(z).norm() / (2.0 * r);
                worst = worst.min(ratio);
                if ratio < 1.0 {
                    failures += 1;
                }
            }
        }
    }
    Ok((failures == 0, format!("{failures} failures over 6 profiles; smallest |P(z)|/(2|z|) = {worst:.3}")))
}

fn c12(cfg: &Config) -> Outcome {
    let basilica = PolynomialSequence::constant(Polynomial::unicritical(2, C64::new(-1.0, 0.0)), SequenceBounds::new(2, 1.0, 1.0)?)?;
    let spec = ImageSpec::new(C64::new(0.0, 0.0), 5.0, 201, 161)?;
    let i1 = render_escape(&basilica, &spec);
    let i2 = render_escape(&basilica, &spec);
    let small = ImageSpec::new(C64::new(0.0, 0.0), 4.0, 64, 64)?;
    let s1 = render_semigroup(6, &small, cfg.seed)?;
    let s2 = render_semigroup(6, &small, cfg.seed)?;
    let same = i1.to_ppm() == i2.to_ppm() && s1.to_ppm() == s2.to_ppm();
    let px = |z: C64| spec.pixel(z).map(|(x, y)| i1.get(x, y));
    let inner = px(C64::new(0.0, 0.0)) == Some(INTERIOR);
    let outer = px(C64::new(2.0, 0.0)).is_some_and(|c| c != INTERIOR);
    Ok((same && inner && outer, format!("byte-identical {same}; pixel at 0 interior {inner}; pixel at 2 escaping {outer}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_are_distinct_and_cover_prefixes() {
        let w = sample_words(7);
        let heads: BTreeSet<&str> = w.iter().map(|s| &s[..3]).collect();
        assert_eq!(heads.len(), 8);
        assert_eq!(sample_words(7), w);
    }

    #[test]
    fn brute_force_counts_catalan() {
        for n in 1..=5u64 {
            let pts: Vec<Angle> = (0..2 * n).map(|k| Angle::new(k, 2 * n).unwrap()).collect();
            let xs: Vec<Angle> = pts.iter().step_by(2).cloned().collect();
            let ys: Vec<Angle> = pts.iter().skip(1).step_by(2).cloned().collect();
            assert_eq!(brute_force_matchings(&xs, &ys).len() as u64, crate::lamination::catalan(n));
        }
    }

    #[test]
    fn quick_criteria() {
        let cfg = Config::default();
        for id in [1, 2, 3, 11] {
            let r = run_criterion(id, &cfg);
            assert!(r.passed, "{r}");
        }
    }
}
