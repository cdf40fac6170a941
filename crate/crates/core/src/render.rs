//! Escape-time pictures of iterated Julia sets.

use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::poly::{PolynomialSequence, C64};
use crate::rays::{trace_ray, RayConfig};
use crate::verify::words::word_sequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Palette {
    Gray,
    Fire,
}

impl std::str::FromStr for Palette {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gray" | "grey" => Ok(Palette::Gray),
            "fire" => Ok(Palette::Fire),
            _ => Err(Error::Parse(format!("unknown palette {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImageSpec {
    pub center: C64,
    /// Width of the frame in the plane.
    pub width: f64,
    pub px_width: usize,
    pub px_height: usize,
    pub time: usize,
    pub max_iter: usize,
    pub palette: Palette,
}

impl ImageSpec {
    pub fn new(center: C64, width: f64, px_width: usize, px_height: usize) -> Result<Self> {
        let s = ImageSpec { center, width, px_width, px_height, time: 0, max_iter: 256, palette: Palette::Fire };
        s.check()?;
        Ok(s)
    }

    pub fn check(&self) -> Result<()> {
        if self.px_width == 0 || self.px_height == 0 || !(self.width > 0.0) || self.max_iter == 0 {
            return Err(Error::Config("image needs positive size, width and iteration count".into()));
        }
        Ok(())
    }

    pub fn pixel_size(&self) -> f64 {
        self.width / self.px_width as f64
    }

    /// Centre of pixel (x, y); y grows downward.
    pub fn point(&self, x: usize, y: usize) -> C64 {
        let s = self.pixel_size();
        C64::new(
            self.center.re + (x as f64 + 0.5 - self.px_width as f64 / 2.0) * s,
            self.center.im - (y as f64 + 0.5 - self.px_height as f64 / 2.0) * s,
        )
    }

    pub fn pixel(&self, z: C64) -> Option<(usize, usize)> {
        let s = self.pixel_size();
        let x = ((z.re - self.center.re) / s + self.px_width as f64 / 2.0).floor();
        let y = ((self.center.im - z.im) / s + self.px_height as f64 / 2.0).floor();
        (x >= 0.0 && y >= 0.0 && (x as usize) < self.px_width && (y as usize) < self.px_height).then(|| (x as usize, y as usize))
    }
}

/// RGB raster with an optional comment carried into the PPM header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub rgb: Vec<u8>,
    pub comment: Option<String>,
}

impl Image {
    fn blank(width: usize, height: usize) -> Self {
        Image { width, height, rgb: vec![0; width * height * 3], comment: None }
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.rgb[i], self.rgb[i + 1], self.rgb[i + 2]]
    }

    fn set(&mut self, x: usize, y: usize, c: [u8; 3]) {
        let i = 3 * (y * self.width + x);
        self.rgb[i..i + 3].copy_from_slice(&c);
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.rgb.len() + 64);
        out.extend_from_slice(b"P6\n");
        if let Some(c) = &self.comment {
            for line in c.lines() {
                out.extend_from_slice(format!("# {line}\n").as_bytes());
            }
        }
        out.extend_from_slice(format!("{} {}\n255\n", self.width, self.height).as_bytes());
        out.extend_from_slice(&self.rgb);
        out
    }

    /// PPM, or PNG when the path ends in `.png`.
    pub fn save(&self, path: &Path) -> Result<()> {
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("png")) {
            image::save_buffer(path, &self.rgb, self.width as u32, self.height as u32, image::ExtendedColorType::Rgb8)
                .map_err(|e| Error::Io(e.to_string()))
        } else {
            let mut f = std::fs::File::create(path)?;
            f.write_all(&self.to_ppm())?;
            Ok(())
        }
    }
}

pub const INTERIOR: [u8; 3] = [0, 0, 0];
const BAILOUT: f64 = 1e3;

/// Smoothed escape count of z at time m, None when the orbit stays bounded.
fn smooth_escape(seq: &PolynomialSequence, m: usize, z: C64, cap: usize) -> Option<f64> {
    let r = seq.escape_radius().max(BAILOUT);
    let (n, w) = seq.escape_time(m, z, r, cap)?;
    let d = seq.degree(n + 1) as f64;
    let nu = (n - m) as f64 - ((w.norm().ln() / r.ln()).ln() / d.ln());
    Some(nu.max(0.0))
}

fn color(p: Palette, nu: f64) -> [u8; 3] {
    let t = (nu / 24.0).fract();
    match p {
        Palette::Gray => {
            let v = (64.0 + 191.0 * t) as u8;
            [v, v, v]
        }
        Palette::Fire => {
            let r = (255.0 * (3.0 * t).min(1.0)) as u8;
            let g = (255.0 * (3.0 * t - 1.0).clamp(0.0, 1.0)) as u8;
            let b = (255.0 * (3.0 * t - 2.0).clamp(0.0, 1.0)) as u8;
            [r.max(24), g, b.max(16)]
        }
    }
}

/// Per-pixel smoothed escape count (None = bounded up to max_iter).
pub fn escape_field(seq: &PolynomialSequence, spec: &ImageSpec) -> Vec<Option<f64>> {
    let mut out = vec![None; spec.px_width * spec.px_height];
    out.par_chunks_mut(spec.px_width).enumerate().for_each(|(y, row)| {
        for (x, v) in row.iter_mut().enumerate() {
            *v = smooth_escape(seq, spec.time, spec.point(x, y), spec.max_iter);
        }
    });
    out
}

fn paint(field: &[Option<f64>], spec: &ImageSpec) -> Image {
    let mut img = Image::blank(spec.px_width, spec.px_height);
    for (i, v) in field.iter().enumerate() {
        let c = v.map_or(INTERIOR, |nu| color(spec.palette, nu));
        img.rgb[3 * i..3 * i + 3].copy_from_slice(&c);
    }
    img
}

pub fn render_escape(seq: &PolynomialSequence, spec: &ImageSpec) -> Image {
    paint(&escape_field(seq, spec), spec)
}

/// Escape image with traced rays drawn on top in white.
pub fn render_rays(seq: &PolynomialSequence, spec: &ImageSpec, angles: &[Angle], cfg: &RayConfig) -> Result<Image> {
    let mut img = render_escape(seq, spec);
    for a in angles {
        let t = trace_ray(seq, spec.time, a, cfg.h_min.max(1e-20), cfg)?;
        for w in t.points.windows(2) {
            draw_segment(&mut img, spec, w[0].1, w[1].1);
        }
    }
    Ok(img)
}

fn draw_segment(img: &mut Image, spec: &ImageSpec, p: C64, q: C64) {
    // clip crudely: skip segments far outside the frame
    let far = 4.0 * spec.width + spec.center.norm();
    if p.norm() > far && q.norm() > far {
        return;
    }
    let steps = (((q - p).norm() / spec.pixel_size()).ceil() as usize).clamp(1, 100_000);
    for k in 0..=steps {
        let z = p + (q - p) * (k as f64 / steps as f64);
        if let Some((x, y)) = spec.pixel(z) {
            img.set(x, y, [255, 255, 255]);
        }
    }
}

/// How sampled words are combined into one picture.
pub const SEMIGROUP_CONVENTION: &str = "union of filled sets: a pixel is interior when its orbit stays bounded under at least one sampled word";

/// Sampled words for the semigroup picture: the first is all zeros, the
/// rest are random binary words of the given length.
pub fn semigroup_words(samples: usize, length: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|i| {
            if i == 0 {
                "0".repeat(length)
            } else {
                (0..length).map(|_| if rng.gen::<bool>() { '1' } else { '0' }).collect()
            }
        })
        .collect()
}

/// Union over sampled words of the filled sets of the word sequences.
/// Escaping pixels take the slowest escape over the words.
pub fn render_semigroup(samples: usize, spec: &ImageSpec, seed: u64) -> Result<Image> {
    spec.check()?;
    let words = semigroup_words(samples, 16, seed);
    let mut field: Vec<Option<f64>> = vec![Some(0.0); spec.px_width * spec.px_height];
    for w in &words {
        let f = escape_field(&word_sequence(w)?, spec);
        for (acc, v) in field.iter_mut().zip(f) {
            *acc = match (*acc, v) {
                (None, _) | (_, None) => None,
                (Some(a), Some(b)) => Some(a.max(b)),
            };
        }
    }
    let mut img = if samples == 0 { Image::blank(spec.px_width, spec.px_height) } else { paint(&field, spec) };
    img.comment = Some(format!("{SEMIGROUP_CONVENTION}\nwords: {}", words.join(" ")));
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::cubic_sequence;
    use crate::poly::{Polynomial, SequenceBounds};

    fn quad(c: f64) -> PolynomialSequence {
        PolynomialSequence::constant(Polynomial::unicritical(2, C64::new(c, 0.0)), SequenceBounds::new(2, 1.0, 1.0).unwrap()).unwrap()
    }

    fn interior(img: &Image, spec: &ImageSpec, z: C64) -> bool {
        let (x, y) = spec.pixel(z).unwrap();
        img.get(x, y) == INTERIOR
    }

    #[test]
    fn unit_disk_for_z_squared() {
        let spec = ImageSpec::new(C64::new(0.0, 0.0), 2.5, 101, 101).unwrap();
        let field = escape_field(&quad(0.0), &spec);
        let s = spec.pixel_size();
        for y in 0..101 {
            for x in 0..101 {
                let r = spec.point(x, y).norm();
                if (r - 1.0).abs() > s {
                    assert_eq!(field[y * 101 + x].is_none(), r < 1.0, "pixel ({x},{y}) r={r}");
                }
            }
        }
    }

    #[test]
    fn basilica_and_cubic_pixels() {
        let spec = ImageSpec::new(C64::new(0.0, 0.0), 5.0, 200, 160).unwrap();
        let img = render_escape(&quad(-1.0), &spec);
        assert!(interior(&img, &spec, C64::new(0.0, 0.0)));
        assert!(!interior(&img, &spec, C64::new(2.0, 0.0)));
        let img = render_escape(&cubic_sequence(), &spec);
        let s = 0.5f64.sqrt();
        assert!(interior(&img, &spec, C64::new(0.0, s)));
        assert!(interior(&img, &spec, C64::new(0.0, -s)));
    }

    #[test]
    fn rendering_is_deterministic() {
        let spec = ImageSpec::new(C64::new(-0.2, 0.1), 3.0, 64, 48).unwrap();
        assert_eq!(render_escape(&quad(-1.0), &spec).to_ppm(), render_escape(&quad(-1.0), &spec).to_ppm());
        assert_eq!(render_semigroup(3, &spec, 5).unwrap().to_ppm(), render_semigroup(3, &spec, 5).unwrap().to_ppm());
    }

    #[test]
    fn semigroup_union_grows_with_samples() {
        let spec = ImageSpec::new(C64::new(0.0, 0.0), 4.0, 80, 60).unwrap();
        let count = |n: usize| {
            let img = render_semigroup(n, &spec, 3).unwrap();
            (0..60).flat_map(|y| (0..80).map(move |x| (x, y))).filter(|&(x, y)| img.get(x, y) == INTERIOR).count()
        };
        let (c1, c4, c8) = (count(1), count(4), count(8));
        assert!(c1 <= c4 && c4 <= c8);
        // one all-zero word is the basilica
        let basilica = escape_field(&quad(-1.0), &spec).iter().filter(|v| v.is_none()).count();
        assert_eq!(c1, basilica);
        let blank = render_semigroup(0, &spec, 3).unwrap();
        assert!(blank.rgb.iter().all(|&b| b == 0));
    }

    #[test]
    fn rays_overlay() {
        let spec = ImageSpec::new(C64::new(0.0, 0.0), 4.0, 120, 120).unwrap();
        let plain = render_escape(&cubic_sequence(), &spec);
        assert_eq!(render_rays(&cubic_sequence(), &spec, &[], &RayConfig::default()).unwrap(), plain);
        let angles: Vec<Angle> = ["0", "1/2", "1/6", "1/3"].iter().map(|s| s.parse().unwrap()).collect();
        let img = render_rays(&cubic_sequence(), &spec, &angles, &RayConfig::default()).unwrap();
        assert_ne!(img, plain);
        // conjugate symmetry: the 1/6 ray's mirror is the 5/6 ray
        let up = render_rays(&cubic_sequence(), &spec, &angles[2..3], &RayConfig::default()).unwrap();
        let down = render_rays(&cubic_sequence(), &spec, &["5/6".parse().unwrap()], &RayConfig::default()).unwrap();
        let white = |im: &Image, x: usize, y: usize| im.get(x, y) == [255, 255, 255];
        let mut mismatched = 0;
        for y in 0..120 {
            for x in 0..120 {
                if white(&up, x, y) != white(&down, x, 119 - y) {
                    mismatched += 1;
                }
            }
        }
        assert!(mismatched <= 4, "{mismatched}");
    }
}
