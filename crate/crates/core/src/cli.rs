//! Command-line front end.
//!
//! Usage errors exit 2, numerical failures and failed checks exit 1. Every
//! numeric report carries `config_hash=…`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::acceptance;
use crate::angle::{Angle, AngleSet};
use crate::catalog::{get_example, run_checks, IDS};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::format::{parse_complex, parse_portrait, parse_sequence, write_portrait, write_sequence};
use crate::lamination::{enumerate_matchings, face_groups, parse_chords, pullback_endpoints};
use crate::poly::{format_complex, PolynomialSequence};
use crate::portrait::{unlinked, FormalPortrait};
use crate::rays::{angle_grid, coland_clusters, landing_of, measured_portrait, trace_ray};
use crate::render::{render_escape, render_rays, render_semigroup, ImageSpec, Palette, SEMIGROUP_CONVENTION};
use crate::verify::{hyperbolicity_estimate, postcritical_distance, ray_length_diagnostic, sector_theorem_check, word_experiment};

#[derive(Parser, Debug)]
#[command(name = "orbitport", version, about = "Orbit portraits of polynomial sequences")]
struct Cli {
    /// key = value file overriding tolerances and seeds.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    #[command(subcommand)]
    Portrait(PortraitCmd),
    #[command(subcommand)]
    Lamination(LaminationCmd),
    #[command(subcommand)]
    Seq(SeqCmd),
    #[command(subcommand)]
    Ray(RayCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
    #[command(subcommand)]
    Catalog(CatalogCmd),
    #[command(subcommand)]
    Render(RenderCmd),
    /// Run the acceptance suite.
    Accept {
        /// Comma-separated criterion numbers; all when absent.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum PortraitCmd {
    Validate { file: PathBuf },
    /// Critical and critical value arcs at one time.
    Arcs {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        time: usize,
    },
    Preperiod { file: PathBuf },
    /// A_m for m = 0..=time.
    Extend {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        time: usize,
    },
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 8)]
        shift_bound: usize,
    },
    /// Whether two angle sets, written "p/q p/q ...", are unlinked.
    Unlinked { a: String, b: String },
}

#[derive(Subcommand, Debug)]
enum LaminationCmd {
    /// All noncrossing matchings of the pullback endpoints.
    Matchings {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        time: usize,
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Group a matching, written "{a,b},{c,d},...", into preimage components.
    Groups {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        time: usize,
        #[arg(long)]
        matching: String,
    },
}

#[derive(Args, Debug)]
struct Source {
    /// Sequence file, or a catalog id such as cubic_fixed or word_seq(0110).
    source: String,
    #[arg(long, default_value_t = 0)]
    time: usize,
}

#[derive(Subcommand, Debug)]
enum SeqCmd {
    CheckBounds {
        #[command(flatten)]
        src: Source,
        /// Polynomials checked (they repeat after the generator's shape).
        #[arg(long, default_value_t = 32)]
        count: usize,
    },
    Green {
        #[command(flatten)]
        src: Source,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    Bottcher {
        #[command(flatten)]
        src: Source,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
}

#[derive(Args, Debug)]
struct RayOpts {
    #[command(flatten)]
    src: Source,
    /// Repeatable; p/q.
    #[arg(long = "angle")]
    angles: Vec<String>,
    #[arg(long)]
    hmin: Option<f64>,
    /// Angle grid p/q for q in this list, used when no --angle is given.
    #[arg(long, value_delimiter = ',')]
    grid_denoms: Vec<u64>,
    #[arg(long)]
    cluster_eps: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum RayCmd {
    /// Polyline points, one row each; h_final holds each point's potential.
    Trace(RayOpts),
    Land(RayOpts),
    Cluster(RayOpts),
    /// Clusters at times time..time+times-1, linked forward.
    PortraitMeasure {
        #[command(flatten)]
        opts: RayOpts,
        #[arg(long, default_value_t = 2)]
        times: usize,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    Sector {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        portrait: PathBuf,
    },
    Pd {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        #[arg(long, default_value_t = 16)]
        n_max: usize,
        #[arg(long, default_value_t = 400)]
        sample: usize,
    },
    Hyp {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 12)]
        horizon: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Compare two binary words at the time before their first difference.
    #[command(visible_alias = "words")]
    Thm110 {
        #[arg(long)]
        word1: String,
        #[arg(long)]
        word2: String,
    },
    John {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 16)]
        rays: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogCmd {
    List,
    Show { id: String },
    Run { id: String },
}

#[derive(Args, Debug)]
struct Frame {
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    center: String,
    #[arg(long, default_value_t = 4.0)]
    width: f64,
    /// WIDTHxHEIGHT or a single size for a square.
    #[arg(long, default_value = "512")]
    px: String,
    #[arg(long, default_value_t = 0)]
    time: usize,
    #[arg(long, default_value_t = 256)]
    max_iter: usize,
    #[arg(long, default_value = "fire")]
    palette: String,
    /// .ppm or .png
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum RenderCmd {
    Julia {
        source: String,
        #[command(flatten)]
        frame: Frame,
    },
    Rays {
        source: String,
        #[arg(long = "angle")]
        angles: Vec<String>,
        #[command(flatten)]
        frame: Frame,
    },
    Semigroup {
        #[arg(long, default_value_t = 32)]
        samples: usize,
        #[command(flatten)]
        frame: Frame,
    },
}

/// Run with process stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let cfg = match &cli.config {
        Some(p) => Config::load(p),
        None => Ok(Config::default()),
    };
    let result = cfg.and_then(|cfg| {
        if cfg.threads == 0 {
            return dispatch(cli.cmd, &cfg, out);
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        // the pool needs a Send writer
        let mut buf = Vec::new();
        let r = pool.install(|| dispatch(cli.cmd, &cfg, &mut buf));
        out.write_all(&buf)?;
        r
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let usage = matches!(
                e,
                Error::Parse(_)
                    | Error::Config(_)
                    | Error::UnknownId(_)
                    | Error::Io(_)
                    | Error::InvalidAngle(_)
                    | Error::InvalidArc(_)
                    | Error::InvalidAngleSet(_)
                    | Error::InvalidDegree(_)
            );
            let _ = writeln!(err, "status=error kind={} message=\"{e}\"", kind(&e));
            if usage {
                2
            } else {
                1
            }
        }
    }
}

fn kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_portrait(path: &Path) -> Result<FormalPortrait> {
    parse_portrait(&read(path)?)
}

fn load_sequence(source: &str) -> Result<PolynomialSequence> {
    let path = Path::new(source);
    if path.is_file() {
        return parse_sequence(&read(path)?);
    }
    get_example(source)?
        .sequence
        .ok_or_else(|| Error::Config(format!("catalog entry {source} has no polynomial sequence")))
}

fn angles(list: &[String]) -> Result<Vec<Angle>> {
    list.iter().map(|s| s.parse()).collect()
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|e| Error::Io(e.to_string()))?
    };
}

fn dispatch(cmd: Cmd, cfg: &Config, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Cmd::Portrait(c) => portrait_cmd(c, out),
        Cmd::Lamination(c) => lamination_cmd(c, out),
        Cmd::Seq(c) => seq_cmd(c, cfg, out),
        Cmd::Ray(c) => ray_cmd(c, cfg, out),
        Cmd::Verify(c) => verify_cmd(c, cfg, out),
        Cmd::Catalog(c) => catalog_cmd(c, cfg, out),
        Cmd::Render(c) => render_cmd(c, cfg, out),
        Cmd::Accept { only } => {
            let ids = if only.is_empty() { (1..=12).collect() } else { only };
            if let Some(bad) = ids.iter().find(|&&i| !(1..=12).contains(&i)) {
                return Err(Error::Config(format!("no criterion {bad}")));
            }
            say!(out, "config_hash={}", cfg.hash());
            let mut failed = 0;
            for i in ids {
                let r = acceptance::run_criterion(i, cfg);
                failed += usize::from(!r.passed);
                say!(out, "{r}");
            }
            Ok(i32::from(failed > 0))
        }
    }
}

fn portrait_cmd(c: PortraitCmd, out: &mut dyn Write) -> Result<i32> {
    match c {
        PortraitCmd::Validate { file } => {
            let p = load_portrait(&file)?;
            let r = p.validate();
            if r.valid {
                let c = p.detect_preperiodicity();
                say!(out, "valid, preperiod {} period {}", c.preperiod, c.period);
                Ok(0)
            } else {
                say!(out, "invalid at time {}: {}", r.failing_time.unwrap_or(0), r.reason);
                Ok(1)
            }
        }
        PortraitCmd::Arcs { file, time } => {
            let p = load_portrait(&file)?;
            let cs = p.critical_structure(time)?;
            say!(out, "time {time}, degree {}, unicritical {}", p.degree_after(time), cs.unicritical);
            for ((arc, k), (value, _)) in cs.critical_arcs.iter().zip(&cs.critical_value_arcs) {
                say!(out, "critical arc {arc} (length {}) covers {value} {k} times", arc.length());
            }
            Ok(0)
        }
        PortraitCmd::Preperiod { file } => {
            let c = load_portrait(&file)?.detect_preperiodicity();
            say!(out, "preperiod {} period {} witness {}", c.preperiod, c.period, c.witness.0);
            Ok(0)
        }
        PortraitCmd::Extend { file, time } => {
            let p = load_portrait(&file)?;
            for m in 0..=time {
                say!(out, "A_{m} = {}", p.extend(m));
            }
            Ok(0)
        }
        PortraitCmd::Equiv { first, second, shift_bound } => {
            let (p, q) = (load_portrait(&first)?, load_portrait(&second)?);
            match p.equivalent(&q, shift_bound) {
                Some((t, m1, m2)) => say!(out, "equivalent: rotation {t}, shifts {m1} and {m2}"),
                None => say!(out, "not equivalent within shift bound {shift_bound}"),
            }
            Ok(0)
        }
        PortraitCmd::Unlinked { a, b } => {
            let u = unlinked(&AngleSet::parse_list(&a)?, &AngleSet::parse_list(&b)?)?;
            say!(out, "{}", if u { "unlinked" } else { "linked" });
            Ok(0)
        }
    }
}

fn lamination_cmd(c: LaminationCmd, out: &mut dyn Write) -> Result<i32> {
    let (file, time) = match &c {
        LaminationCmd::Matchings { file, time, .. } | LaminationCmd::Groups { file, time, .. } => (file, *time),
    };
    let p = load_portrait(file)?;
    let cs = p.critical_structure(time)?;
    let d = p.degree_after(time);
    match c {
        LaminationCmd::Matchings { limit, .. } => {
            for ((arc, _), (value, _)) in cs.critical_arcs.iter().zip(&cs.critical_value_arcs) {
                let (al, be) = pullback_endpoints(arc, d, value)?;
                let ms = enumerate_matchings(&al, &be)?;
                say!(out, "critical arc {arc}: {} matchings", ms.len());
                for m in ms.iter().take(limit) {
                    let s: Vec<String> = m.iter().map(|c| c.to_string()).collect();
                    say!(out, "  {}", s.join(", "));
                }
            }
        }
        LaminationCmd::Groups { matching, .. } => {
            let chords = parse_chords(&matching)?;
            let (arc, _) = cs.critical_arcs.first().ok_or_else(|| Error::Config("no critical arc".into()))?;
            let lam = face_groups(&chords, d, arc, &cs.critical_value_arcs[0].0)?;
            say!(out, "{lam}");
            let degs: Vec<String> = lam.groups.iter().map(|g| g.degree.to_string()).collect();
            say!(out, "degrees {}", degs.join(" "));
        }
    }
    Ok(0)
}

fn seq_cmd(c: SeqCmd, cfg: &Config, out: &mut dyn Write) -> Result<i32> {
    match c {
        SeqCmd::CheckBounds { src, count } => {
            let s = load_sequence(&src.source)?;
            let b = s.bounds();
            let mut bad = 0;
            for m in 1..=count {
                if let Err(r) = b.check(s.poly(m)) {
                    bad += 1;
                    say!(out, "P_{m}: {r}");
                }
            }
            say!(out, "bounds d={} K={} M={}, escape radius {}", b.d, b.k, b.m, s.escape_radius());
            say!(out, "{}", write_sequence(&s).trim_end());
            say!(out, "{}", if bad == 0 { "within bounds" } else { "bounds violated" });
            Ok(i32::from(bad > 0))
        }
        SeqCmd::Green { src, z } => {
            let s = load_sequence(&src.source)?;
            let g = s.green(src.time, parse_complex(&z)?, cfg.newton_tol);
            say!(out, "config_hash={}", cfg.hash());
            say!(out, "time={} z={} green={:e} escaped={} steps={}", src.time, z, g.value, g.escaped, g.steps);
            Ok(0)
        }
        SeqCmd::Bottcher { src, z } => {
            let s = load_sequence(&src.source)?;
            let w = s.bottcher(src.time, parse_complex(&z)?, cfg.newton_tol)?;
            say!(out, "config_hash={}", cfg.hash());
            say!(out, "time={} z={} bottcher={} modulus={:e} argument_turns={:.15}", src.time, z, format_complex(w), w.norm(), w.arg().rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU);
            Ok(0)
        }
    }
}

fn ray_cmd(c: RayCmd, cfg: &Config, out: &mut dyn Write) -> Result<i32> {
    let (opts, times) = match c {
        RayCmd::Trace(o) => (o, None),
        RayCmd::Land(o) => (o, Some(0)),
        RayCmd::Cluster(o) => (o, Some(1)),
        RayCmd::PortraitMeasure { opts, times } => (opts, Some(times.max(1))),
    };
    let s = load_sequence(&opts.src.source)?;
    let mut rc = cfg.ray_config();
    if let Some(h) = opts.hmin {
        rc.h_min = h;
    }
    if let Some(e) = opts.cluster_eps {
        rc.cluster_eps = e;
    }
    let mut list = angles(&opts.angles)?;
    if list.is_empty() {
        list = angle_grid(&opts.grid_denoms);
    }
    if list.is_empty() {
        return Err(Error::Config("give --angle or --grid-denoms".into()));
    }
    let m = opts.src.time;
    say!(out, "# config_hash={}", cfg.hash());
    match times {
        None => {
            say!(out, "time,angle,re,im,converged,steps,h_final");
            let mut all_ok = true;
            for a in &list {
                let t = trace_ray(&s, m, a, rc.h_min, &rc)?;
                let l = landing_of(&t, &rc);
                all_ok &= l.converged;
                for (i, (h, z)) in t.points.iter().enumerate() {
                    say!(out, "{m},{a},{},{},{},{i},{h:e}", z.re, z.im, l.converged);
                }
            }
            Ok(i32::from(!all_ok))
        }
        Some(0) => {
            say!(out, "time,angle,re,im,converged,steps,h_final");
            let mut all_ok = true;
            for a in &list {
                let t = trace_ray(&s, m, a, rc.h_min, &rc)?;
                let l = landing_of(&t, &rc);
                all_ok &= l.converged;
                say!(out, "{m},{a},{},{},{},{},{:e}", l.point.re, l.point.im, l.converged, t.steps, l.h_final);
            }
            Ok(i32::from(!all_ok))
        }
        Some(1) => {
            let cl = coland_clusters(&s, m, &list, &rc)?;
            say!(out, "time,angle,re,im,converged,steps,h_final,cluster");
            for (k, c) in cl.iter().enumerate() {
                for a in &c.angles {
                    say!(out, "{m},{a},{},{},true,0,{:e},{k}", c.point.re, c.point.im, rc.h_min);
                }
            }
            Ok(0)
        }
        Some(n) => {
            let ts: Vec<usize> = (m..m + n).collect();
            let mp = measured_portrait(&s, &ts, &list, &rc)?;
            say!(out, "time,angle,re,im,converged,steps,h_final,cluster");
            for (ti, cls) in mp.clusters.iter().enumerate() {
                for (k, c) in cls.iter().enumerate() {
                    for a in &c.angles {
                        say!(out, "{},{a},{},{},true,0,{:e},{k}", ts[ti], c.point.re, c.point.im, rc.h_min);
                    }
                }
            }
            for (ti, a, b) in &mp.links {
                say!(out, "# link time {} cluster {a} -> time {} cluster {b}", ts[*ti], ts[*ti] + 1);
            }
            say!(out, "# max multiplicity {} over denominators ≤ {}", mp.max_multiplicity(), mp.grid_bound);
            Ok(0)
        }
    }
}

fn verify_cmd(c: VerifyCmd, cfg: &Config, out: &mut dyn Write) -> Result<i32> {
    let rc = cfg.ray_config();
    let head = |out: &mut dyn Write, what: &str| -> Result<()> {
        say!(out, "check={what} config_hash={} seed={}", cfg.hash(), cfg.seed);
        Ok(())
    };
    match c {
        VerifyCmd::Sector { src, portrait } => {
            head(out, "sector")?;
            let r = sector_theorem_check(&load_sequence(&src.source)?, &load_portrait(&portrait)?, src.time, &rc)?;
            say!(out, "time={} degree={}", r.time, r.degree);
            for (i, a) in r.arcs.iter().enumerate() {
                say!(out, "sector {i}: arc {a}{}", if r.critical_arcs.contains(&i) { " critical" } else { "" });
            }
            for (z, s) in &r.critical_points {
                say!(out, "critical point {} in sector {s}", format_complex(*z));
            }
            for q in &r.probes {
                say!(out, "probe in image sector {}: counts {:?} expected {:?}", q.target, q.counts, q.expected);
            }
            say!(out, "passed={}", r.passed());
            Ok(i32::from(!r.passed()))
        }
        VerifyCmd::Pd { src, m_max, n_max, sample } => {
            head(out, "pd")?;
            let e = postcritical_distance(&load_sequence(&src.source)?, m_max, n_max, sample, cfg.seed)?;
            say!(out, "pd={:e} m_max={} n_max={} julia_sample={}", e.value, e.m_max, e.n_max, e.julia_sample_size);
            let pc: Vec<String> = e.postcritical.iter().map(|z| format_complex(*z)).collect();
            say!(out, "postcritical {}", pc.join(" "));
            Ok(0)
        }
        VerifyCmd::Hyp { src, horizon, samples } => {
            head(out, "hyp")?;
            let h = hyperbolicity_estimate(&load_sequence(&src.source)?, src.time, horizon, samples, cfg.seed)?;
            say!(out, "mu={:.6} c={:.6} residual={:.3e} samples={} horizon={}", h.mu_est, h.c_est, h.residual, h.samples, h.horizon);
            Ok(0)
        }
        VerifyCmd::Thm110 { word1, word2 } => {
            head(out, "words")?;
            let r = word_experiment(&word1, &word2, cfg.arc_tol, &cfg.search_options(), &rc)?;
            say!(out, "first_difference={:?} time={} arc_tol={:e}", r.first_difference, r.time, r.arc_tol);
            for w in [&r.first, &r.second] {
                say!(
                    out,
                    "word={} p={:.12} theta={} radius={:e} gap={:.3e} degree={} critical_arc={:.9} value_arc={:.9}",
                    w.word, w.p, w.theta, w.radius, w.landing_gap, w.next_degree, w.critical_arc, w.value_arc
                );
            }
            say!(out, "cubic_ok={} quadratic_ok={} lengths_differ={} passed={}", r.cubic_ok(), r.quadratic_ok(), r.lengths_differ(), r.passed());
            Ok(i32::from(!r.passed()))
        }
        VerifyCmd::John { src, rays } => {
            head(out, "john")?;
            let f = ray_length_diagnostic(&load_sequence(&src.source)?, src.time, rays, &rc)?;
            say!(
                out,
                "alpha={:.6} c={:.6} residual={:.3e} c_envelope={:.6} samples={} held_out={} violations={}",
                f.alpha_fit, f.c_fit, f.residual, f.c_envelope, f.samples, f.held_out, f.violations
            );
            Ok(i32::from(f.violations > 0))
        }
    }
}

fn catalog_cmd(c: CatalogCmd, cfg: &Config, out: &mut dyn Write) -> Result<i32> {
    match c {
        CatalogCmd::List => {
            for id in IDS {
                say!(out, "{id}");
            }
            Ok(0)
        }
        CatalogCmd::Show { id } => {
            let e = get_example(&id)?;
            say!(out, "{}: {}", e.id, e.title);
            say!(out, "{}", write_portrait(&e.portrait).trim_end());
            if let Some(s) = &e.sequence {
                say!(out, "{}", write_sequence(s).trim_end());
            }
            for f in &e.facts {
                say!(out, "fact [{:?}] {}", f.provenance, f.label);
            }
            Ok(0)
        }
        CatalogCmd::Run { id } => {
            let e = get_example(&id)?;
            say!(out, "config_hash={}", cfg.hash());
            let outcomes = run_checks(&e, &cfg.ray_config());
            for o in &outcomes {
                say!(out, "[{}] {} ({:?}): {}", if o.passed { "PASS" } else { "FAIL" }, o.label, o.provenance, o.detail);
            }
            Ok(i32::from(outcomes.iter().any(|o| !o.passed)))
        }
    }
}

fn image_spec(f: &Frame) -> Result<ImageSpec> {
    let (w, h) = match f.px.split_once(['x', 'X']) {
        Some((w, h)) => (w.trim().parse(), h.trim().parse()),
        None => (f.px.trim().parse(), f.px.trim().parse()),
    };
    let (w, h) = (w.map_err(|_| Error::Parse(format!("bad --px {:?}", f.px)))?, h.map_err(|_| Error::Parse(format!("bad --px {:?}", f.px)))?);
    let mut spec = ImageSpec::new(parse_complex(&f.center)?, f.width, w, h)?;
    spec.time = f.time;
    spec.max_iter = f.max_iter;
    spec.palette = f.palette.parse::<Palette>()?;
    spec.check()?;
    Ok(spec)
}

fn render_cmd(c: RenderCmd, cfg: &Config, out: &mut dyn Write) -> Result<i32> {
    let (mut img, frame, what) = match c {
        RenderCmd::Julia { source, frame } => {
            let spec = image_spec(&frame)?;
            (render_escape(&load_sequence(&source)?, &spec), frame, format!("escape image of {source}"))
        }
        RenderCmd::Rays { source, angles: a, frame } => {
            let spec = image_spec(&frame)?;
            let img = render_rays(&load_sequence(&source)?, &spec, &angles(&a)?, &cfg.ray_config())?;
            (img, frame, format!("rays {} over {source}", a.join(" ")))
        }
        RenderCmd::Semigroup { samples, frame } => {
            let spec = image_spec(&frame)?;
            (render_semigroup(samples, &spec, cfg.seed)?, frame, format!("semigroup, {samples} words; {SEMIGROUP_CONVENTION}"))
        }
    };
    let note = format!("{what}\nconfig_hash={} seed={}", cfg.hash(), cfg.seed);
    img.comment = Some(match img.comment.take() {
        Some(c) => format!("{c}\n{note}"),
        None => note,
    });
    img.save(&frame.out)?;
    say!(out, "wrote {} ({}x{}) config_hash={}", frame.out.display(), img.width, img.height, cfg.hash());
    Ok(0)
}
