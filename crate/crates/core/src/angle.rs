//! Exact rational angles on the circle ℝ/ℤ, open arcs, and the
//! degree-`d` multiplier map θ ↦ dθ (mod 1).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact rational point of ℝ/ℤ, stored as a reduced fraction in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Angle(BigRational);

fn frac(x: BigRational) -> BigRational {
    let f = x.fract();
    if f.is_negative() {
        f + BigRational::one()
    } else {
        f
    }
}

impl Angle {
    /// `p/q` taken modulo 1.
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidAngle(format!("{p}/0")));
        }
        Ok(Angle(frac(BigRational::new(BigInt::from(p), BigInt::from(q)))))
    }

    pub fn from_big(p: BigUint, q: BigUint) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidAngle(format!("{p}/0")));
        }
        Ok(Angle(frac(BigRational::new(p.into(), q.into()))))
    }

    /// Any rational, reduced modulo 1.
    pub fn from_rational(x: BigRational) -> Self {
        Angle(frac(x))
    }

    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> BigUint {
        self.0.numer().magnitude().clone()
    }

    pub fn denom(&self) -> BigUint {
        self.0.denom().magnitude().clone()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    /// Representative in `(-1/2, 1/2]`.
    pub fn centered_f64(&self) -> f64 {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        if self.0 > half {
            (&self.0 - BigRational::one()).to_f64().unwrap_or(0.0)
        } else {
            self.to_f64()
        }
    }

    /// Rotation by `other`.
    pub fn add(&self, other: &Angle) -> Angle {
        Angle(frac(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Angle) -> Angle {
        Angle(frac(&self.0 - &other.0))
    }

    /// 1 − θ (mod 1), the angle of the complex-conjugate ray.
    pub fn neg(&self) -> Angle {
        Angle(frac(-self.0.clone()))
    }

    /// Counterclockwise distance from `self` to `other`, in `[0, 1)`.
    pub fn ccw_distance_to(&self, other: &Angle) -> BigRational {
        frac(&other.0 - &self.0)
    }

    /// θ ↦ dθ (mod 1).
    pub fn dmap(&self, d: u64) -> Angle {
        Angle(frac(&self.0 * BigRational::from_integer(BigInt::from(d))))
    }

    /// θ ↦ Dθ (mod 1) for a product of degrees `D` that may not fit a machine word.
    pub fn dmap_big(&self, d: &BigUint) -> Angle {
        Angle(frac(&self.0 * BigRational::from_integer(BigInt::from(d.clone()))))
    }

    /// The `d` solutions of dx ≡ θ, i.e. (θ + k)/d, in increasing order.
    pub fn preimages(&self, d: u64) -> Vec<Angle> {
        let dd = BigRational::from_integer(BigInt::from(d));
        (0..d)
            .map(|k| Angle((&self.0 + BigRational::from_integer(BigInt::from(k))) / &dd))
            .collect()
    }
}

/// The map θ ↦ dθ (mod 1).
pub fn dmap(theta: &Angle, d: u64) -> Result<Angle> {
    if d < 2 {
        return Err(Error::InvalidDegree(d));
    }
    Ok(theta.dmap(d))
}

/// All `d` preimages of θ under θ ↦ dθ, in increasing order.
pub fn preimages(theta: &Angle, d: u64) -> Result<Vec<Angle>> {
    if d < 2 {
        return Err(Error::InvalidDegree(d));
    }
    Ok(theta.preimages(d))
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidAngle(s.to_string());
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: BigUint = p.parse().map_err(|_| bad())?;
        let q: BigUint = q.parse().map_err(|_| bad())?;
        Angle::from_big(p, q)
    }
}

/// Open arc traversed counterclockwise from `start` to `end`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    start: Angle,
    end: Angle,
}

impl Arc {
    pub fn new(start: Angle, end: Angle) -> Result<Self> {
        if start == end {
            return Err(Error::InvalidArc(format!("degenerate arc at {start}")));
        }
        Ok(Arc { start, end })
    }

    pub fn start(&self) -> &Angle {
        &self.start
    }

    pub fn end(&self) -> &Angle {
        &self.end
    }

    pub fn length(&self) -> BigRational {
        self.start.ccw_distance_to(&self.end)
    }

    pub fn length_f64(&self) -> f64 {
        self.length().to_f64().unwrap_or(0.0)
    }

    /// Membership in the open arc.
    pub fn contains(&self, theta: &Angle) -> bool {
        let t = self.start.ccw_distance_to(theta);
        !t.is_zero() && t < self.length()
    }

    /// Membership in the closed arc.
    pub fn closure_contains(&self, theta: &Angle) -> bool {
        self.start.ccw_distance_to(theta) <= self.length()
    }

    /// Point halfway along the arc.
    pub fn midpoint(&self) -> Angle {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        Angle::from_rational(&self.start.0 + self.length() * half)
    }

    /// The complementary open arc.
    pub fn complement(&self) -> Arc {
        Arc {
            start: self.end.clone(),
            end: self.start.clone(),
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.start, self.end)
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Number of times the image of `i` under θ ↦ dθ covers `j`.
///
/// The count is the number of preimages inside `i` of a point of `j`, which
/// is constant exactly when neither image endpoint of `i` falls inside `j`.
pub fn covering_count(i: &Arc, d: u64, j: &Arc) -> Result<u64> {
    if d < 2 {
        return Err(Error::InvalidDegree(d));
    }
    let img_start = i.start.dmap(d);
    let img_end = i.end.dmap(d);
    if j.contains(&img_start) || j.contains(&img_end) {
        return Err(Error::NonConstantCover);
    }
    let count_in = |y: &Angle, closed: bool| {
        y.preimages(d)
            .iter()
            .filter(|x| if closed { i.closure_contains(x) } else { i.contains(x) })
            .count() as u64
    };
    let witness = count_in(&j.midpoint(), false);
    // Endpoint preimages in the closure agree with the interior count, up to
    // the endpoints of `i` themselves.
    for y in [&j.start, &j.end] {
        let closed = count_in(y, true);
        let on_boundary = [&i.start, &i.end]
            .iter()
            .filter(|e| e.dmap(d) == *y)
            .count() as u64;
        if closed < on_boundary || closed - on_boundary > witness || witness > closed {
            return Err(Error::NonConstantCover);
        }
    }
    Ok(witness)
}

/// N ≥ 2 distinct angles in increasing order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AngleSet {
    angles: Vec<Angle>,
}

impl AngleSet {
    pub fn new(mut angles: Vec<Angle>) -> Result<Self> {
        angles.sort();
        if angles.len() < 2 {
            return Err(Error::InvalidAngleSet(format!(
                "need at least two angles, got {}",
                angles.len()
            )));
        }
        if angles.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidAngleSet("duplicate angle".into()));
        }
        Ok(AngleSet { angles })
    }

    /// Sorted input with possible repeats; only for images of invalid portraits.
    pub(crate) fn from_sorted_unchecked(angles: Vec<Angle>) -> Self {
        AngleSet { angles }
    }

    pub fn parse_list(s: &str) -> Result<Self> {
        let angles = s
            .split(|c: char| c.is_whitespace() || c == ',' || c == '{' || c == '}')
            .filter(|t| !t.is_empty())
            .map(Angle::from_str)
            .collect::<Result<Vec<_>>>()?;
        AngleSet::new(angles)
    }

    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    pub fn valence(&self) -> usize {
        self.angles.len()
    }

    pub fn contains(&self, theta: &Angle) -> bool {
        self.angles.binary_search(theta).is_ok()
    }

    /// The N open complementary arcs `(a_i, a_{i+1})`, cyclically.
    pub fn complementary_arcs(&self) -> Vec<Arc> {
        let n = self.angles.len();
        (0..n)
            .map(|i| Arc {
                start: self.angles[i].clone(),
                end: self.angles[(i + 1) % n].clone(),
            })
            .collect()
    }

    /// Elementwise rotation.
    pub fn rotate(&self, theta: &Angle) -> AngleSet {
        let mut angles: Vec<Angle> = self.angles.iter().map(|a| a.add(theta)).collect();
        angles.sort();
        AngleSet { angles }
    }
}

impl fmt::Display for AngleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.angles.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for AngleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn arc(s: &str, e: &str) -> Arc {
        Arc::new(a(s), a(e)).unwrap()
    }

    #[test]
    fn dmap_examples() {
        assert_eq!(dmap(&a("1/14"), 2).unwrap(), a("1/7"));
        for d in 2..8 {
            assert_eq!(dmap(&Angle::zero(), d).unwrap(), Angle::zero());
        }
        assert_eq!(dmap(&a("11/36"), 6).unwrap(), a("5/6"));
        assert_eq!(dmap(&a("1/3"), 1), Err(Error::InvalidDegree(1)));
    }

    #[test]
    fn preimage_examples() {
        let pre: Vec<String> = preimages(&a("1/6"), 6)
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(pre, ["1/36", "7/36", "13/36", "19/36", "25/36", "31/36"]);
        assert_eq!(preimages(&Angle::zero(), 2).unwrap(), vec![Angle::zero(), a("1/2")]);
        let pre: Vec<String> = preimages(&a("5/6"), 6)
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(pre, ["5/36", "11/36", "17/36", "23/36", "29/36", "35/36"]);
    }

    #[test]
    fn covering_examples() {
        let i = arc("1/3", "1/6");
        assert_eq!(covering_count(&i, 3, &arc("0", "1/2")).unwrap(), 3);
        assert_eq!(covering_count(&i, 3, &arc("1/2", "0")).unwrap(), 2);
        assert_eq!(
            covering_count(&arc("11/36", "7/36"), 6, &arc("5/6", "1/6")).unwrap(),
            6
        );
        // image endpoints of (1/12, 1/6) under tripling are 1/4 and 1/2
        assert_eq!(
            covering_count(&arc("1/12", "1/6"), 3, &arc("1/3", "2/3")),
            Err(Error::NonConstantCover)
        );
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(a("2/4").to_string(), "1/2");
        assert_eq!(a("0").to_string(), "0");
        assert_eq!(a("7/7"), Angle::zero());
        assert!("1/0".parse::<Angle>().is_err());
        assert!("x".parse::<Angle>().is_err());
        assert!(Arc::new(a("1/3"), a("1/3")).is_err());
        assert!(AngleSet::parse_list("1/3").is_err());
        assert!(AngleSet::parse_list("1/3 2/6").is_err());
    }

    #[test]
    fn arc_membership() {
        let i = arc("3/4", "1/4");
        assert!(i.contains(&Angle::zero()));
        assert!(!i.contains(&a("1/4")));
        assert!(i.closure_contains(&a("1/4")));
        assert!(!i.contains(&a("1/2")));
        assert_eq!(i.midpoint(), Angle::zero());
        assert_eq!(i.length_f64(), 0.5);
    }

    fn angle_strategy() -> impl Strategy<Value = Angle> {
        (1u64..500).prop_flat_map(|q| (0..q, Just(q))).prop_map(|(p, q)| Angle::new(p, q).unwrap())
    }

    proptest! {
        #[test]
        fn dmap_is_a_semigroup_action(t in angle_strategy(), x in 2u64..9, y in 2u64..9) {
            prop_assert_eq!(t.dmap(x).dmap(y), t.dmap(x * y));
        }

        #[test]
        fn dmap_never_grows_denominators(t in angle_strategy(), d in 2u64..9) {
            let img = t.dmap(d);
            prop_assert!((t.denom() % img.denom()).is_zero());
        }

        #[test]
        fn preimages_are_evenly_spaced(t in angle_strategy(), d in 2u64..9) {
            let pre = t.preimages(d);
            prop_assert_eq!(pre.len() as u64, d);
            let gap = BigRational::new(BigInt::one(), BigInt::from(d));
            for (k, x) in pre.iter().enumerate() {
                prop_assert_eq!(&x.dmap(d), &t);
                let next = &pre[(k + 1) % pre.len()];
                prop_assert_eq!(x.ccw_distance_to(next), gap.clone());
            }
        }

        #[test]
        fn length_covering_identity(s in angle_strategy(), e in angle_strategy(),
                                    extra in proptest::collection::vec(angle_strategy(), 0..4),
                                    d in 2u64..7) {
            prop_assume!(s != e);
            let i = Arc::new(s.clone(), e.clone()).unwrap();
            let mut cuts = vec![s.dmap(d), e.dmap(d)];
            cuts.extend(extra);
            cuts.sort();
            cuts.dedup();
            prop_assume!(cuts.len() >= 2);
            let parts = AngleSet::new(cuts).unwrap().complementary_arcs();
            let mut total = BigRational::zero();
            for j in &parts {
                let k = covering_count(&i, d, j).unwrap();
                total += j.length() * BigRational::from_integer(BigInt::from(k));
            }
            prop_assert_eq!(total, i.length() * BigRational::from_integer(BigInt::from(d)));
        }

        #[test]
        fn short_arcs_cover_at_most_once(s in angle_strategy(), e in angle_strategy(), d in 2u64..7) {
            prop_assume!(s != e);
            let i = Arc::new(s.clone(), e.clone()).unwrap();
            prop_assume!(i.length() < BigRational::new(BigInt::one(), BigInt::from(d)));
            let parts = AngleSet::new(vec![s.dmap(d), e.dmap(d)]).unwrap().complementary_arcs();
            for j in &parts {
                prop_assert!(covering_count(&i, d, j).unwrap() <= 1);
            }
        }
    }
}
