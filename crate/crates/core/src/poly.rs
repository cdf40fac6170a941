//! Bounded polynomial sequences {P_m}: compositions Q_{m,n}, escape radius,
//! Green's functions and Böttcher coordinates.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Polynomial with complex coefficients a₀…a_deg (low to high).
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<C64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<C64>) -> Result<Self> {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.len() < 3 {
            return Err(Error::InvalidDegree(coeffs.len().saturating_sub(1) as u64));
        }
        Ok(Polynomial { coeffs })
    }

    /// z^d + c.
    pub fn unicritical(d: usize, c: C64) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); d + 1];
        coeffs[0] = c;
        coeffs[d] = C64::new(1.0, 0.0);
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> C64 {
        self.coeffs[self.degree()]
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == C64::new(1.0, 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// (P(z), P'(z)) by Horner's rule.
    pub fn eval_with_derivative(&self, z: C64) -> (C64, C64) {
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative_coeffs(&self) -> Vec<C64> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect()
    }

    /// Critical points (roots of P').
    pub fn critical_points(&self) -> Result<Vec<C64>> {
        roots(&self.derivative_coeffs())
    }

    /// Solutions of P(z) = w.
    pub fn preimages(&self, w: C64) -> Result<Vec<C64>> {
        let mut c = self.coeffs.clone();
        c[0] -= w;
        roots(&c)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_complex(*c))?;
        }
        write!(f, "]")
    }
}

/// `re+imi` text form used by sequence files.
pub fn format_complex(c: C64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("{}{}i", c.re, c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

/// All roots of the polynomial with coefficients `c` (low to high).
///
/// Aberth–Ehrlich simultaneous iteration followed by a Newton polish.
pub fn roots(c: &[C64]) -> Result<Vec<C64>> {
    let mut c = c.to_vec();
    while c.len() > 1 && c.last().map_or(false, |x| x.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Ok(vec![]);
    }
    let lead = c[n];
    let monic: Vec<C64> = c.iter().map(|x| x / lead).collect();
    if n == 1 {
        return Ok(vec![-monic[0]]);
    }
    if n == 2 {
        // stable quadratic formula
        let (b, cc) = (monic[1], monic[0]);
        let disc = (b * b - 4.0 * cc).sqrt();
        let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) / 2.0 } else { -(b - disc) / 2.0 };
        if q.norm() == 0.0 {
            return Ok(vec![C64::new(0.0, 0.0); 2]);
        }
        return Ok(vec![q, cc / q]);
    }
    let poly = Polynomial { coeffs: monic.clone() };
    let radius = 1.0 + monic[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius * 0.5 + 0.1, 2.0 * PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    let scale = radius.max(1.0);
    let mut converged = false;
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = poly.eval_with_derivative(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: C64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 { C64::new(0.0, 0.0) } else { 1.0 / diff }
                })
                .sum();
            let step = ratio / (1.0 - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm());
            }
        }
        if max_step <= 1e-15 * scale {
            converged = true;
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = poly.eval_with_derivative(*r);
            let step = p / dp;
            if !step.is_finite() || step.norm() == 0.0 {
                break;
            }
            *r -= step;
        }
    }
    if !converged && !residuals_small(&poly, &z) {
        return Err(Error::RootSolveFailure);
    }
    if z.iter().any(|r| !r.is_finite()) {
        return Err(Error::RootSolveFailure);
    }
    Ok(z)
}

fn residuals_small(p: &Polynomial, z: &[C64]) -> bool {
    z.iter().all(|&r| {
        let scale: f64 = p
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * r.norm().powi(k as i32))
            .sum();
        p.eval(r).norm() <= 1e-9 * scale.max(1.0)
    })
}

/// Declared bounds (d, K, M) of a sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SequenceBounds {
    pub d: usize,
    pub k: f64,
    pub m: f64,
}

impl SequenceBounds {
    pub fn new(d: usize, k: f64, m: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDegree(d as u64));
        }
        if !(k >= 1.0) || !(m >= 0.0) || !k.is_finite() || !m.is_finite() {
            return Err(Error::Config(format!("bounds need K ≥ 1 and M ≥ 0, got K={k}, M={m}")));
        }
        Ok(SequenceBounds { d, k, m })
    }

    /// Whether `p` obeys the bounds; the reason when it does not.
    pub fn check(&self, p: &Polynomial) -> std::result::Result<(), String> {
        let deg = p.degree();
        if deg < 2 || deg > self.d {
            return Err(format!("degree {deg} outside [2, {}]", self.d));
        }
        let lead = p.leading().norm();
        if lead > self.k * (1.0 + 1e-12) || lead < (1.0 / self.k) * (1.0 - 1e-12) {
            return Err(format!("|leading coefficient| = {lead} outside [1/K, K]"));
        }
        if let Some((i, c)) = p.coeffs()[..deg].iter().enumerate().find(|(_, c)| c.norm() > self.m * (1.0 + 1e-12)) {
            return Err(format!("|a_{i}| = {} exceeds M", c.norm()));
        }
        Ok(())
    }
}

/// R = max(1, K(Md + 2)).
///
/// For |z| ≥ R and any admissible P of degree e, |P(z)| ≥ |z|^{e−1}(|z|/K − dM) ≥ 2|z|.
/// This is one admissible radius, not a canonical one.
pub fn escape_radius(b: &SequenceBounds) -> f64 {
    (b.k * (b.m * b.d as f64 + 2.0)).max(1.0)
}

/// How the sequence P₁, P₂, … is generated.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// P_m = pre[m−1] for m ≤ |pre|, then cycles through `per`.
    Periodic { pre: Vec<Polynomial>, per: Vec<Polynomial> },
    /// Binary word, repeated. With `odd`, P_m = odd for odd m and P_{2k} is
    /// the polynomial of letter k; otherwise P_m is the polynomial of letter m.
    Word { word: String, zero: Polynomial, one: Polynomial, odd: Option<Polynomial> },
}

/// A finitely presented bounded sequence of polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialSequence {
    generator: Generator,
    bounds: SequenceBounds,
    radius: f64,
}

/// Q_{m,n}(z), its derivative, and D_{m,n}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: C64,
    pub derivative: C64,
    /// D_{m,n} as a float; exact up to 2^53.
    pub degree: f64,
}

/// Green's function value; `escaped` is false when the orbit stayed inside
/// the escape radius up to the iteration cap and the value 0 was returned.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenValue {
    pub value: f64,
    pub escaped: bool,
    pub steps: usize,
}

pub const ITERATION_CAP: usize = 10_000;

impl PolynomialSequence {
    pub fn new(generator: Generator, bounds: SequenceBounds) -> Result<Self> {
        let members: Vec<&Polynomial> = match &generator {
            Generator::Periodic { pre, per } => {
                if per.is_empty() {
                    return Err(Error::Config("periodic part of a sequence is empty".into()));
                }
                pre.iter().chain(per).collect()
            }
            Generator::Word { word, zero, one, odd } => {
                if word.is_empty() {
                    return Err(Error::Config("empty binary word".into()));
                }
                if let Some(c) = word.chars().find(|&c| c != '0' && c != '1') {
                    return Err(Error::Parse(format!("'{c}' is not a binary letter")));
                }
                [zero, one].into_iter().chain(odd.iter()).collect()
            }
        };
        // every generated polynomial is one of these members, so checking
        // them checks the whole sequence
        for p in &members {
            if let Err(reason) = bounds.check(p) {
                let time = (1..=4 * members.len() + 4)
                    .find(|&m| std::ptr::eq(Self::pick(&generator, m), *p))
                    .unwrap_or(1);
                return Err(Error::BoundsViolation { time, reason });
            }
        }
        let radius = escape_radius(&bounds);
        Ok(PolynomialSequence { generator, bounds, radius })
    }

    pub fn constant(p: Polynomial, bounds: SequenceBounds) -> Result<Self> {
        Self::new(Generator::Periodic { pre: vec![], per: vec![p] }, bounds)
    }

    fn pick(g: &Generator, m: usize) -> &Polynomial {
        match g {
            Generator::Periodic { pre, per } => {
                if m <= pre.len() {
                    &pre[m - 1]
                } else {
                    &per[(m - 1 - pre.len()) % per.len()]
                }
            }
            Generator::Word { word, zero, one, odd } => {
                let letter_at = |i: usize| word.as_bytes()[i % word.len()];
                let idx = match odd {
                    Some(o) if m % 2 == 1 => return o,
                    Some(_) => m / 2 - 1,
                    None => m - 1,
                };
                if letter_at(idx) == b'0' {
                    zero
                } else {
                    one
                }
            }
        }
    }

    /// P_m for m ≥ 1.
    pub fn poly(&self, m: usize) -> &Polynomial {
        assert!(m >= 1, "sequence members are indexed from 1");
        Self::pick(&self.generator, m)
    }

    pub fn degree(&self, m: usize) -> usize {
        self.poly(m).degree()
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn bounds(&self) -> &SequenceBounds {
        &self.bounds
    }

    pub fn escape_radius(&self) -> f64 {
        self.radius
    }

    fn members(&self) -> Vec<&Polynomial> {
        match &self.generator {
            Generator::Periodic { pre, per } => pre.iter().chain(per).collect(),
            Generator::Word { zero, one, odd, .. } => [zero, one].into_iter().chain(odd.iter()).collect(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.members().iter().all(|p| p.is_monic())
    }

    pub fn is_real(&self) -> bool {
        self.members().iter().all(|p| p.is_real())
    }

    /// Period after which the sequence repeats, from time 0 on or after the preperiod.
    pub fn shape(&self) -> (usize, usize) {
        match &self.generator {
            Generator::Periodic { pre, per } => (pre.len(), per.len()),
            Generator::Word { word, odd, .. } => (0, word.len() * if odd.is_some() { 2 } else { 1 }),
        }
    }

    /// Q_{m,n}(z), Q'_{m,n}(z) and D_{m,n}.
    pub fn evaluate(&self, m: usize, n: usize, z: C64) -> Result<Evaluation> {
        assert!(n >= m, "evaluate needs n ≥ m");
        let mut w = z;
        let mut dw = C64::new(1.0, 0.0);
        let mut deg = 1.0;
        for j in m + 1..=n {
            let p = self.poly(j);
            let (v, dv) = p.eval_with_derivative(w);
            dw *= dv;
            w = v;
            deg *= p.degree() as f64;
            if !w.is_finite() || !dw.is_finite() {
                return Err(Error::Overflow);
            }
        }
        Ok(Evaluation { value: w, derivative: dw, degree: deg })
    }

    /// First n > m with |Q_{m,n}(z)| > `radius`, and the iterate there.
    pub fn escape_time(&self, m: usize, z: C64, radius: f64, cap: usize) -> Option<(usize, C64)> {
        let mut w = z;
        if w.norm() > radius {
            return Some((m, w));
        }
        for j in m + 1..=m + cap {
            w = self.poly(j).eval(w);
            if !(w.norm() <= radius) {
                return Some((j, w));
            }
        }
        None
    }

    /// G_m(z) = lim (1/D_{m,n}) log|Q_{m,n}(z)|.
    ///
    /// Plain iteration runs until the orbit passes max(R, 10³); from there
    /// the orbit is followed as a complex logarithm, where each step adds
    /// log a_d + d·log w + log(1 + ε) with ε the lower-order terms relative to
    /// the leading one. Terms stop once the remaining tail is below `tol`.
    pub fn green(&self, m: usize, z: C64, tol: f64) -> GreenValue {
        let switch = self.radius.max(1e3);
        let Some((n, w)) = self.escape_time(m, z, switch, ITERATION_CAP) else {
            return GreenValue { value: 0.0, escaped: false, steps: ITERATION_CAP };
        };
        let mut logw = w.ln();
        let mut inv_deg = 1.0;
        for j in m + 1..=n {
            inv_deg /= self.degree(j) as f64;
        }
        let mut acc = logw.re * inv_deg;
        let mut j = n;
        loop {
            j += 1;
            let p = self.poly(j);
            let (step, eps) = log_step(p, logw);
            logw = step;
            inv_deg /= p.degree() as f64;
            acc += (p.leading().norm().ln() + log1p_abs(eps)) * inv_deg;
            // later terms shrink at least geometrically by 1/2
            if 2.0 * (self.bounds.k.ln() + 2.0 * self.tail_eps(logw.re)) * inv_deg < tol || j > n + 2000 {
                break;
            }
        }
        GreenValue { value: acc, escaped: true, steps: j - m }
    }

    /// Bound on |ε| for any admissible polynomial at log-modulus `l` ≥ 0.
    fn tail_eps(&self, l: f64) -> f64 {
        let b = &self.bounds;
        b.k * b.m * b.d as f64 * (-l.max(0.0)).exp()
    }

    /// φ_m(z) for a monic sequence, with the branch fixed by continuity
    /// from the identity at infinity.
    pub fn bottcher(&self, m: usize, z: C64, tol: f64) -> Result<C64> {
        Ok(self.bottcher_log(m, z, tol)?.exp())
    }

    /// log φ_m(z) = log z + Σ_j log(1 + ε_j)/D_{m,m+j+1}.
    ///
    /// Every factor must stay on the principal branch: `BranchLoss` when some
    /// |ε_j| ≥ 1/2 or its argument turns by more than π/d_{m+j+1}. Points with
    /// G_m well above log(2R) are always safe.
    pub fn bottcher_log(&self, m: usize, z: C64, tol: f64) -> Result<C64> {
        if !self.is_monic() {
            return Err(Error::MonicRequired);
        }
        if z.norm() == 0.0 {
            return Err(Error::BranchLoss);
        }
        let mut logw = z.ln();
        let mut acc = logw;
        let mut inv_deg = 1.0;
        let mut j = m;
        loop {
            j += 1;
            let p = self.poly(j);
            let d = p.degree() as f64;
            let (next, eps) = log_step(p, logw);
            if eps.norm() >= 0.5 || (C64::new(1.0, 0.0) + eps).arg().abs() > PI / d {
                return Err(Error::BranchLoss);
            }
            inv_deg /= d;
            acc += (C64::new(1.0, 0.0) + eps).ln() * inv_deg;
            logw = next;
            if 4.0 * self.tail_eps(logw.re) * inv_deg < tol || j > m + 2000 {
                break;
            }
        }
        Ok(acc)
    }
}

/// One step w ↦ P(w) in logarithmic form; returns (log P(w), ε).
///
/// log P(w) = log a_d + d·log w + log(1 + ε), ε = Σ_{k<d} (a_k/a_d) w^{k−d}.
/// The imaginary part is reduced to (−π, π].
fn log_step(p: &Polynomial, logw: C64) -> (C64, C64) {
    let d = p.degree();
    let lead = p.leading();
    let mut eps = C64::new(0.0, 0.0);
    for (k, &a) in p.coeffs()[..d].iter().enumerate() {
        if a.norm() != 0.0 {
            eps += (a / lead) * ((k as f64 - d as f64) * logw).exp();
        }
    }
    let raw = lead.ln() + d as f64 * logw + (C64::new(1.0, 0.0) + eps).ln();
    (C64::new(raw.re, wrap_pi(raw.im)), eps)
}

fn log1p_abs(eps: C64) -> f64 {
    (C64::new(1.0, 0.0) + eps).norm().ln()
}

/// Reduce an angle to (−π, π].
pub fn wrap_pi(x: f64) -> f64 {
    let t = x.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn z2() -> PolynomialSequence {
        PolynomialSequence::constant(Polynomial::unicritical(2, c(0.0, 0.0)), SequenceBounds::new(2, 1.0, 0.0).unwrap()).unwrap()
    }

    fn basilica() -> PolynomialSequence {
        PolynomialSequence::constant(Polynomial::unicritical(2, c(-1.0, 0.0)), SequenceBounds::new(2, 1.0, 1.0).unwrap()).unwrap()
    }

    fn cubic() -> PolynomialSequence {
        PolynomialSequence::constant(
            Polynomial::from_real(&[0.0, 1.5, 0.0, 1.0]).unwrap(),
            SequenceBounds::new(3, 1.0, 1.5).unwrap(),
        )
        .unwrap()
    }

    fn mixed() -> PolynomialSequence {
        PolynomialSequence::new(
            Generator::Word {
                word: "0110".into(),
                zero: Polynomial::unicritical(2, c(-1.0, 0.0)),
                one: Polynomial::unicritical(3, c(0.0, 0.0)),
                odd: Some(Polynomial::unicritical(2, c(-1.0, 0.0))),
            },
            SequenceBounds::new(3, 1.0, 1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let z = c(0.3, -0.7);
        let e = cubic().evaluate(4, 4, z).unwrap();
        assert_eq!((e.value, e.derivative, e.degree), (z, c(1.0, 0.0), 1.0));
        let e = basilica().evaluate(0, 2, c(0.0, 0.0)).unwrap();
        assert_eq!((e.value, e.derivative, e.degree), (c(0.0, 0.0), c(0.0, 0.0), 4.0));
        let e = cubic().evaluate(0, 1, c(0.0, 1.5f64.sqrt())).unwrap();
        assert!(e.value.norm() < 1e-14);
        assert_eq!(e.degree, 3.0);
    }

    #[test]
    fn word_generation() {
        let s = mixed();
        let degs: Vec<usize> = (1..=10).map(|m| s.degree(m)).collect();
        assert_eq!(degs, [2, 2, 2, 3, 2, 3, 2, 2, 2, 2]);
    }

    #[test]
    fn bounds_are_enforced() {
        let r = PolynomialSequence::constant(
            Polynomial::from_real(&[-2.0, 0.0, 1.0]).unwrap(),
            SequenceBounds::new(2, 1.0, 1.0).unwrap(),
        );
        assert!(matches!(r, Err(Error::BoundsViolation { time: 1, .. })));
        let r = PolynomialSequence::constant(
            Polynomial::from_real(&[0.0, 0.0, 0.0, 1.0]).unwrap(),
            SequenceBounds::new(2, 1.0, 1.0).unwrap(),
        );
        assert!(r.is_err());
        assert!(Polynomial::from_real(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn escape_radius_examples() {
        assert_eq!(escape_radius(&SequenceBounds::new(2, 1.0, 0.0).unwrap()), 2.0);
        assert_eq!(escape_radius(&SequenceBounds::new(2, 1.0, 1.0).unwrap()), 4.0);
        assert_eq!(escape_radius(&SequenceBounds::new(3, 1.0, 1.5).unwrap()), 6.5);
    }

    fn random_admissible(rng: &mut ChaCha8Rng, b: &SequenceBounds) -> Polynomial {
        let deg = rng.gen_range(2..=b.d);
        let mut coeffs: Vec<C64> = (0..deg)
            .map(|_| C64::from_polar(b.m * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI)))
            .collect();
        let lead = (rng.gen_range(-1.0..1.0) * b.k.ln()).exp();
        coeffs.push(C64::from_polar(lead, rng.gen_range(0.0..2.0 * PI)));
        Polynomial::new(coeffs).unwrap()
    }

    #[test]
    fn escape_radius_doubles_sampled_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (d, k, m) in [(2, 1.0, 1.0), (3, 1.0, 1.5), (4, 2.0, 0.5)] {
            let b = SequenceBounds::new(d, k, m).unwrap();
            let r = escape_radius(&b);
            for _ in 0..10_000 {
                let p = random_admissible(&mut rng, &b);
                assert!(b.check(&p).is_ok());
                let z = C64::from_polar(r, rng.gen_range(0.0..2.0 * PI));
                assert!(p.eval(z).norm() >= 2.0 * r * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn green_examples() {
        let g = z2().green(0, c(4.0, 0.0), 1e-14);
        assert!(g.escaped);
        assert!((g.value - 4f64.ln()).abs() < 1e-15);
        let z = C64::from_polar(1e6, 0.3);
        for s in [cubic(), basilica(), mixed()] {
            let g = s.green(0, z, 1e-12).value;
            assert!((g - 1e6f64.ln()).abs() < 1e-3);
        }
        let inside = basilica().green(0, c(0.0, 0.0), 1e-12);
        assert!(!inside.escaped);
        assert_eq!(inside.value, 0.0);
    }

    #[test]
    fn green_functional_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for s in [cubic(), basilica(), mixed()] {
            for _ in 0..100 {
                let m = rng.gen_range(0..6);
                let z = C64::from_polar(rng.gen_range(1.2..20.0), rng.gen_range(0.0..2.0 * PI));
                let g0 = s.green(m, z, 1e-15);
                if !g0.escaped {
                    continue;
                }
                let p = s.poly(m + 1);
                let g1 = s.green(m + 1, p.eval(z), 1e-15);
                let lhs = g1.value;
                let rhs = p.degree() as f64 * g0.value;
                assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs(), "{lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn bottcher_examples() {
        for d in 2..5 {
            let s = PolynomialSequence::constant(
                Polynomial::unicritical(d, c(0.0, 0.0)),
                SequenceBounds::new(d, 1.0, 0.0).unwrap(),
            )
            .unwrap();
            let z = c(1.3, -0.4);
            assert!((s.bottcher(0, z, 1e-14).unwrap() - z).norm() < 1e-14);
        }
        let z = C64::from_polar(1e6, 2.0);
        for s in [cubic(), basilica(), mixed()] {
            let w = s.bottcher(0, z, 1e-14).unwrap();
            assert!((w - z).norm() <= 1e-3 * z.norm());
        }
        let nonmonic = PolynomialSequence::constant(
            Polynomial::from_real(&[0.0, 0.0, 2.0]).unwrap(),
            SequenceBounds::new(2, 2.0, 0.0).unwrap(),
        )
        .unwrap();
        assert_eq!(nonmonic.bottcher(0, c(5.0, 0.0), 1e-12), Err(Error::MonicRequired));
        assert_eq!(basilica().bottcher(0, c(0.1, 0.0), 1e-12), Err(Error::BranchLoss));
    }

    #[test]
    fn bottcher_conjugacy_and_modulus() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for s in [cubic(), basilica(), mixed()] {
            let r = s.escape_radius();
            for _ in 0..100 {
                let m = rng.gen_range(0..6);
                let z = C64::from_polar(rng.gen_range(2.0 * r..20.0 * r), rng.gen_range(0.0..2.0 * PI));
                let p = s.poly(m + 1);
                let w0 = s.bottcher(m, z, 1e-16).unwrap();
                let w1 = s.bottcher(m + 1, p.eval(z), 1e-16).unwrap();
                let expect = w0.powu(p.degree() as u32);
                assert!((w1 - expect).norm() < 1e-9 * expect.norm());
                let g = s.green(m, z, 1e-15).value;
                assert!((w0.norm().ln() - g).abs() < 1e-10 * g);
            }
        }
    }

    #[test]
    fn roots_of_known_polynomials() {
        let r = roots(&[c(-6.0, 0.0), c(11.0, 0.0), c(-6.0, 0.0), c(1.0, 0.0)]).unwrap();
        let mut re: Vec<f64> = r.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        for (x, e) in re.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-12);
        }
        let crit = cubic().poly(1).critical_points().unwrap();
        for z in crit {
            assert!((z.norm() - 0.5f64.sqrt()).abs() < 1e-14 && z.re.abs() < 1e-14);
        }
        // double root
        let r = roots(&[c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(r.iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-7));
    }

    proptest! {
        #[test]
        fn escape_dichotomy(theta in 0.0..(2.0 * PI), scale in 1.0f64..5.0) {
            for s in [cubic(), basilica(), mixed()] {
                let r = s.escape_radius();
                let mut w = C64::from_polar(r * scale, theta);
                for j in 1..6 {
                    let next = s.poly(j).eval(w);
                    prop_assert!(next.norm() >= 2.0 * w.norm() * (1.0 - 1e-12));
                    w = next;
                }
            }
        }

        #[test]
        fn roots_reproduce_coefficients(seed in any::<u64>(), deg in 3usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let want: Vec<C64> = (0..deg).map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
            let mut coeffs = vec![c(1.0, 0.0)];
            for r in &want {
                let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
                for (i, a) in coeffs.iter().enumerate() {
                    next[i + 1] += a;
                    next[i] -= a * r;
                }
                coeffs = next;
            }
            let got = roots(&coeffs).unwrap();
            for r in &want {
                let best = got.iter().map(|g| (g - r).norm()).fold(f64::INFINITY, f64::min);
                prop_assert!(best < 1e-6, "missing root {}", r);
            }
        }
    }
}
