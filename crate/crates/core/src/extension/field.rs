use crate::error::{Error, Result};
use crate::geometry::vec2::{self, Point};
use crate::geometry::{ring_width, translate_to_contain_origin, ConvexDomain};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// `S(s) = 3s² − 2s³` on `[0, 1]`, clamped outside.
pub fn smoothstep(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    s * s * (3.0 - 2.0 * s)
}

/// Cut-off `θ(x) = S(1 − d(x)/r̃)` outside the domain and `1` inside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub r_tilde: f64,
    /// `sup |Dθ| = 3 / (2 r̃)`.
    pub gradient_bound: f64,
}

impl Cutoff {
    /// Profile as a function of the exterior distance.
    pub fn at_distance(&self, d_ext: f64) -> f64 {
        if d_ext <= 0.0 {
            1.0
        } else {
            smoothstep(1.0 - d_ext / self.r_tilde)
        }
    }

    pub fn value(&self, domain: &ConvexDomain, x: Point) -> Result<f64> {
        if domain.contains(x) {
            return Ok(1.0);
        }
        Ok(self.at_distance(domain.project(x)?.d))
    }
}

pub fn build_cutoff(domain: &ConvexDomain) -> Result<Cutoff> {
    let r_tilde = ring_width(domain)?;
    Ok(Cutoff { r_tilde, gradient_bound: 1.5 / r_tilde })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// Inside Ω, where the extension equals the input.
    Inner,
    /// Exterior collar `0 < d < r̃` carrying reflected, cut-off values.
    Ring,
    /// Everything farther out, where the extension vanishes.
    Outer,
}

impl Region {
    pub fn tag(self) -> &'static str {
        match self {
            Region::Inner => "inner",
            Region::Ring => "ring",
            Region::Outer => "outer",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Conjugation {
    delta: f64,
    direction: Point,
    translated: ConvexDomain,
}

/// Extension by reflection across the boundary, cut off by [`Cutoff`].
///
/// Domains not containing the origin are handled by translating them to
/// `T(Ω) = Ω − δe`, conjugating with `exp(−δ e·y/2 − δ²/4)`, extending there
/// and conjugating back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extension {
    domain: ConvexDomain,
    cutoff: Cutoff,
    conjugation: Option<Conjugation>,
}

impl Extension {
    /// Plain reflection extension; the domain must contain the origin.
    pub fn new(domain: &ConvexDomain) -> Result<Self> {
        if !domain.contains_origin() {
            return Err(Error::NotApplicable("domain does not contain the origin; use the conjugated extension".into()));
        }
        Ok(Self { domain: domain.clone(), cutoff: build_cutoff(domain)?, conjugation: None })
    }

    /// Conjugated extension for a domain that does not contain the origin.
    pub fn conjugated(domain: &ConvexDomain) -> Result<Self> {
        let t = translate_to_contain_origin(domain)?;
        let cutoff = build_cutoff(&t.domain)?;
        Ok(Self {
            domain: domain.clone(),
            cutoff,
            conjugation: Some(Conjugation { delta: t.delta, direction: t.direction, translated: t.domain }),
        })
    }

    /// Plain or conjugated, whichever applies.
    pub fn for_domain(domain: &ConvexDomain) -> Result<Self> {
        if domain.contains_origin() {
            Self::new(domain)
        } else {
            Self::conjugated(domain)
        }
    }

    pub fn domain(&self) -> &ConvexDomain {
        &self.domain
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    /// Translation `(δ, e)` when the extension is conjugated.
    pub fn translation(&self) -> Option<(f64, Point)> {
        self.conjugation.as_ref().map(|c| (c.delta, c.direction))
    }

    /// `ũ(x)` and the region `x` falls in.
    pub fn evaluate(&self, x: Point, u: &dyn Fn(Point) -> f64) -> Result<(f64, Region)> {
        match &self.conjugation {
            None => reflect_extend(&self.domain, &self.cutoff, x, u),
            Some(c) => {
                let (delta, e) = (c.delta, c.direction);
                let v = |y: Point| u(vec2::add(y, vec2::scale(delta, e))) * (-0.5 * delta * vec2::dot(e, y) - 0.25 * delta * delta).exp();
                let y = vec2::sub(x, vec2::scale(delta, e));
                let (vt, region) = reflect_extend(&c.translated, &self.cutoff, y, &v)?;
                Ok((vt * (0.5 * delta * vec2::dot(e, x) - 0.25 * delta * delta).exp(), region))
            }
        }
    }
}

fn reflect_extend(domain: &ConvexDomain, cutoff: &Cutoff, x: Point, u: &dyn Fn(Point) -> f64) -> Result<(f64, Region)> {
    if domain.contains(x) {
        return Ok((u(x), Region::Inner));
    }
    let bp = domain.project(x)?;
    if bp.d >= cutoff.r_tilde {
        return Ok((0.0, Region::Outer));
    }
    // exterior reflection x ↦ 2p − x inverts Φ on the collar
    let pre = vec2::sub(vec2::scale(2.0, bp.p), x);
    Ok((cutoff.at_distance(bp.d) * u(pre), Region::Ring))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub x: Point,
    pub value: f64,
    pub region: Region,
}

/// Sampled extension `ũ` together with the cut-off used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionField {
    pub samples: Vec<FieldSample>,
    pub theta_profile: Cutoff,
}

impl ExtensionField {
    pub fn inner(&self) -> impl Iterator<Item = &FieldSample> {
        self.samples.iter().filter(|s| s.region == Region::Inner)
    }

    pub fn ring(&self) -> impl Iterator<Item = &FieldSample> {
        self.samples.iter().filter(|s| s.region == Region::Ring)
    }

    pub fn outer(&self) -> impl Iterator<Item = &FieldSample> {
        self.samples.iter().filter(|s| s.region == Region::Outer)
    }

    /// `x,y,value,region` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,value,region\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{},{},{}", s.x[0], s.x[1], s.value, s.region.tag());
        }
        out
    }
}

/// Samples the plain extension of `u` at `points`.
pub fn extend(domain: &ConvexDomain, u: &dyn Fn(Point) -> f64, points: &[Point]) -> Result<ExtensionField> {
    sample(&Extension::new(domain)?, u, points)
}

/// Samples the conjugated extension of `u` at `points`.
pub fn conjugate_extend(domain: &ConvexDomain, u: &dyn Fn(Point) -> f64, points: &[Point]) -> Result<ExtensionField> {
    if domain.contains_origin() {
        return Err(Error::NotApplicable("domain contains the origin; use the plain extension".into()));
    }
    sample(&Extension::conjugated(domain)?, u, points)
}

fn sample(ext: &Extension, u: &dyn Fn(Point) -> f64, points: &[Point]) -> Result<ExtensionField> {
    let samples = points
        .iter()
        .map(|&x| ext.evaluate(x, u).map(|(value, region)| FieldSample { x, value, region }))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtensionField { samples, theta_profile: ext.cutoff })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_profile() {
        let disk = ConvexDomain::disk([0.0, 0.0], 1.0);
        let c = build_cutoff(&disk).unwrap();
        assert_eq!(c.r_tilde, 0.5);
        assert_eq!(c.gradient_bound, 3.0);
        assert_eq!(c.value(&disk, [0.3, 0.2]).unwrap(), 1.0);
        assert_eq!(c.value(&disk, [1.5, 0.0]).unwrap(), 0.0);
        assert!((c.value(&disk, [1.25, 0.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!(build_cutoff(&ConvexDomain::WholeSpace { dim: 2 }).is_err());
    }

    #[test]
    fn cutoff_gradient_bound_is_attained() {
        let c = Cutoff { r_tilde: 0.5, gradient_bound: 3.0 };
        let h = 1e-6;
        let slope = (c.at_distance(0.25 - h) - c.at_distance(0.25 + h)) / (2.0 * h);
        assert!((slope - 3.0).abs() < 1e-6);
        for k in 0..=100 {
            let v = c.at_distance(0.6 * k as f64 / 100.0);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn constant_transports_to_theta() {
        let disk = ConvexDomain::disk([0.0, 0.0], 1.0);
        let ext = Extension::new(&disk).unwrap();
        let c = ext.cutoff();
        for x in [[1.1, 0.0], [0.0, -1.3], [0.9, 0.9]] {
            let (v, region) = ext.evaluate(x, &|_| 1.0).unwrap();
            assert_eq!(region, Region::Ring);
            assert_eq!(v, c.value(&disk, x).unwrap());
        }
    }

    #[test]
    fn strip_flat_reflection() {
        let strip = ConvexDomain::strip(1.0);
        let ext = Extension::new(&strip).unwrap();
        let (v, _) = ext.evaluate([1.2, 0.0], &|x| x[0]).unwrap();
        let theta = smoothstep(1.0 - 0.2 / 0.5);
        assert!((v - 0.8 * theta).abs() < 1e-15);
        let (inner, region) = ext.evaluate([0.3, 4.0], &|x| x[0] * x[1]).unwrap();
        assert_eq!((inner, region), (1.2, Region::Inner));
        assert_eq!(ext.evaluate([1.6, 0.0], &|x| x[0]).unwrap(), (0.0, Region::Outer));
    }

    #[test]
    fn conjugation_round_trip_inside() {
        let disk = ConvexDomain::disk([3.0, 0.0], 1.0);
        let u = |x: Point| 1.0 + x[0] * x[1] + x[1].sin();
        let pts: Vec<Point> = (0..50).map(|k| {
            let t = k as f64 * 0.37;
            [3.0 + 0.9 * (k as f64 / 50.0) * t.cos(), 0.9 * (k as f64 / 50.0) * t.sin()]
        }).collect();
        let field = conjugate_extend(&disk, &u, &pts).unwrap();
        for s in &field.samples {
            assert_eq!(s.region, Region::Inner);
            assert!((s.value - u(s.x)).abs() < 1e-12 * u(s.x).abs().max(1.0));
        }
        assert!(conjugate_extend(&ConvexDomain::disk([0.0, 0.0], 1.0), &u, &pts).is_err());
    }

    #[test]
    fn csv_export() {
        let field = extend(&ConvexDomain::interval(-1.0, 1.0), &|x| x[0], &[[0.5, 0.0], [1.1, 0.0], [3.0, 0.0]]).unwrap();
        let csv = field.to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().nth(1).unwrap().ends_with(",inner"));
        assert!(csv.lines().nth(3).unwrap().ends_with(",outer"));
    }
}
