//! Sliceable planar BV functions.

use super::geometry::{dot, Point, Region};
use crate::bvcalc::{cantor, Bv1d, JumpSet, OpenSet1D};
use crate::error::{domain, param, Error, Result};

/// Catalog of planar forms.
#[derive(Clone, Debug)]
pub enum Form2D {
    /// `profile(⟨p, direction⟩)`.
    Ridge { profile: Bv1d, direction: Point },
    /// `profile(|p - center|)`; only jump profiles are sliceable exactly.
    Radial { profile: Bv1d, center: Point },
    /// `height · 1_region`.
    Indicator { region: Region, height: f64 },
    /// `mass · C(⟨p, axis⟩)` with the Cantor function on `[0, 1]`.
    CantorSheet { mass: f64, axis: Point },
    Sum(Vec<Form2D>),
}

/// A planar form on a convex domain.
#[derive(Clone, Debug)]
pub struct Bv2d {
    pub form: Form2D,
    pub domain: Region,
}

fn unit(v: Point) -> Result<Point> {
    let n = dot(v, v).sqrt();
    if !(n > 0.0 && n.is_finite()) {
        return param("direction must be a nonzero vector");
    }
    Ok([v[0] / n, v[1] / n])
}

impl Form2D {
    pub fn ridge(profile: Bv1d, direction: Point) -> Result<Self> {
        Ok(Form2D::Ridge { profile, direction: unit(direction)? })
    }

    pub fn radial(profile: Bv1d, center: Point) -> Result<Self> {
        if profile.has_ac() || profile.has_cantor() {
            return Err(Error::UnsupportedForm(
                "radial profiles must be jump functions; smooth radial slices are not in the exact catalog".into(),
            ));
        }
        Ok(Form2D::Radial { profile, center })
    }

    pub fn indicator(region: Region, height: f64) -> Self {
        Form2D::Indicator { region, height }
    }

    pub fn cantor_sheet(mass: f64, axis: Point) -> Result<Self> {
        Ok(Form2D::CantorSheet { mass, axis: unit(axis)? })
    }

    pub fn value(&self, p: Point) -> f64 {
        match self {
            Form2D::Ridge { profile, direction } => profile.value(dot(p, *direction)),
            Form2D::Radial { profile, center } => {
                profile.value(((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)).sqrt())
            }
            Form2D::Indicator { region, height } => {
                if region.contains(p) {
                    *height
                } else {
                    0.0
                }
            }
            Form2D::CantorSheet { mass, axis } => mass * cantor(dot(p, *axis)),
            Form2D::Sum(parts) => parts.iter().map(|f| f.value(p)).sum(),
        }
    }

    /// Upper bound on `sup u - inf u` over `domain`.
    pub fn oscillation(&self, domain: &Region) -> f64 {
        match self {
            Form2D::Ridge { profile, direction } => {
                let (a, b) = domain.projection(*direction);
                let (lo, hi) = profile.range_open(a, b);
                let ends = [profile.left_limit(a), profile.right_limit(a), profile.left_limit(b), profile.right_limit(b)];
                let lo = ends.iter().cloned().fold(lo, f64::min);
                let hi = ends.iter().cloned().fold(hi, f64::max);
                hi - lo
            }
            Form2D::Radial { profile, .. } => profile.jumps().heights().iter().map(|h| h.abs()).sum(),
            Form2D::Indicator { height, .. } => height.abs(),
            Form2D::CantorSheet { mass, .. } => mass.abs(),
            Form2D::Sum(parts) => parts.iter().map(|f| f.oscillation(domain)).sum(),
        }
    }

    /// `t ↦ u(z·normal + t·sigma)` on `chord`.
    pub fn slice(&self, sigma: Point, normal: Point, z: f64, chord: &OpenSet1D) -> Result<Bv1d> {
        let base = [z * normal[0], z * normal[1]];
        match self {
            Form2D::Ridge { profile, direction } => {
                let alpha = dot(sigma, *direction);
                let beta = dot(base, *direction);
                if alpha.abs() < 1e-14 {
                    return Ok(Bv1d::constant(profile.value(beta), chord.clone()));
                }
                Ok(profile.compose_affine(alpha, beta)?.with_domain(chord.clone()))
            }
            Form2D::CantorSheet { mass, axis } => {
                let alpha = dot(sigma, *axis);
                let beta = dot(base, *axis);
                if alpha.abs() < 1e-14 {
                    return Ok(Bv1d::constant(mass * cantor(beta), chord.clone()));
                }
                let c = Bv1d::cantor(0.0, 1.0, *mass, OpenSet1D::interval(-1e300, 1e300)?)?;
                Ok(c.compose_affine(alpha, beta)?.with_domain(chord.clone()))
            }
            Form2D::Indicator { region, height } => {
                let jumps = match region.chord(sigma, normal, z) {
                    Some((a, b)) => vec![(a, *height), (b, -*height)],
                    None => vec![],
                };
                Bv1d::from_raw(0.0, vec![], JumpSet::new(jumps)?, vec![], chord.clone())
            }
            Form2D::Radial { profile, center } => {
                let e = z - dot(*center, normal);
                let t0 = dot(*center, sigma);
                let mut base_value = profile.right_limit(0.0);
                let mut jumps = Vec::new();
                for (r, h) in profile.jumps().iter() {
                    if r <= 0.0 {
                        continue;
                    }
                    let s2 = r * r - e * e;
                    if s2 > 0.0 {
                        let s = s2.sqrt();
                        jumps.push((t0 - s, -h));
                        jumps.push((t0 + s, h));
                        base_value += h;
                    } else {
                        // the whole line lies outside this circle
                        base_value += h;
                    }
                }
                Bv1d::from_raw(base_value, vec![], JumpSet::new(jumps)?, vec![], chord.clone())
            }
            Form2D::Sum(parts) => {
                let mut acc = Bv1d::constant(0.0, chord.clone());
                for f in parts {
                    acc = acc.add_unchecked(&f.slice(sigma, normal, z, chord)?, chord.clone())?;
                }
                Ok(acc)
            }
        }
    }

    /// Offsets along `normal` where slices change character.
    pub fn critical_offsets(&self, sigma: Point, normal: Point, domain: &Region) -> Vec<f64> {
        match self {
            Form2D::Indicator { region, .. } => region.critical_offsets(normal),
            Form2D::Radial { profile, center } => {
                let c = dot(*center, normal);
                profile.jumps().locations().iter().filter(|&&r| r > 0.0).flat_map(|&r| [c - r, c + r]).collect()
            }
            Form2D::Ridge { profile, direction } => {
                // chords whose endpoints cross a profile breakpoint line
                ridge_offsets(&profile.breakpoints(), *direction, sigma, normal, domain)
            }
            Form2D::CantorSheet { axis, .. } => ridge_offsets(&[0.0, 1.0], *axis, sigma, normal, domain),
            Form2D::Sum(parts) => parts.iter().flat_map(|f| f.critical_offsets(sigma, normal, domain)).collect(),
        }
    }

    fn rotated(&self, theta: f64) -> Form2D {
        use super::geometry::rotate;
        match self {
            Form2D::Ridge { profile, direction } => Form2D::Ridge { profile: profile.clone(), direction: rotate(*direction, theta) },
            Form2D::Radial { profile, center } => Form2D::Radial { profile: profile.clone(), center: rotate(*center, theta) },
            Form2D::Indicator { region, height } => Form2D::Indicator { region: region.rotated(theta), height: *height },
            Form2D::CantorSheet { mass, axis } => Form2D::CantorSheet { mass: *mass, axis: rotate(*axis, theta) },
            Form2D::Sum(parts) => Form2D::Sum(parts.iter().map(|f| f.rotated(theta)).collect()),
        }
    }
}

/// Offsets `z` at which the line `z·normal + t·sigma` meets the line
/// `⟨p, dir⟩ = c` on the domain boundary, for every breakpoint `c`.
fn ridge_offsets(cs: &[f64], dir: Point, _sigma: Point, normal: Point, domain: &Region) -> Vec<f64> {
    let mut out = Vec::new();
    if let Region::Polygon { vertices } = domain {
        let n = vertices.len();
        for &c in cs {
            for i in 0..n {
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                let (da, db) = (dot(a, dir) - c, dot(b, dir) - c);
                if da * db <= 0.0 && da != db {
                    let s = da / (da - db);
                    let p = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
                    out.push(dot(p, normal));
                }
            }
        }
    }
    out
}

impl Bv2d {
    pub fn new(form: Form2D, domain: Region) -> Self {
        Self { form, domain }
    }

    pub fn value(&self, p: Point) -> f64 {
        self.form.value(p)
    }

    /// Exact 1D restriction and its domain `Ω_{σ,z}`.
    pub fn slice(&self, sigma: Point, z: f64) -> Result<(Bv1d, OpenSet1D)> {
        let sigma = unit(sigma)?;
        let normal = [-sigma[1], sigma[0]];
        let Some((a, b)) = self.domain.chord(sigma, normal, z) else {
            return domain(format!("offset {z} misses the domain"));
        };
        let chord = OpenSet1D::interval(a, b)?;
        let u = self.form.slice(sigma, normal, z, &chord)?;
        Ok((u, chord))
    }

    /// Same function and domain rotated by `theta` about the origin.
    pub fn rotated(&self, theta: f64) -> Bv2d {
        Bv2d { form: self.form.rotated(theta), domain: self.domain.rotated(theta) }
    }
}
