//! Serializable descriptions of catalog functions, used by configs and the
//! command line.

use serde::{Deserialize, Serialize};

use crate::bvcalc::{Bv1d, CantorComponent, JumpSet, OpenSet1D, PieceForm, SmoothPiece};
use crate::error::{Error, Result};
use crate::slicer::{Bv2d, Form2D, Point, Region};

fn unit_interval() -> Vec<(f64, f64)> {
    vec![(0.0, 1.0)]
}

fn unit_mass() -> f64 {
    1.0
}

/// One additive term of a 1D function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Term {
    /// Smooth piece; the support defaults to the hull of the domain.
    Piece {
        #[serde(default)]
        support: Option<(f64, f64)>,
        #[serde(flatten)]
        form: PieceForm,
    },
    Step { location: f64, height: f64 },
    Cantor {
        #[serde(default = "unit_support")]
        support: (f64, f64),
        #[serde(default = "unit_mass")]
        mass: f64,
    },
}

fn unit_support() -> (f64, f64) {
    (0.0, 1.0)
}

/// `base + Σ terms` on a finite union of open intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    #[serde(default = "unit_interval")]
    pub domain: Vec<(f64, f64)>,
    #[serde(default)]
    pub base: f64,
    #[serde(default)]
    pub terms: Vec<Term>,
}

impl FunctionSpec {
    pub fn on_unit(terms: Vec<Term>) -> Self {
        Self { domain: unit_interval(), base: 0.0, terms }
    }

    pub fn build(&self) -> Result<Bv1d> {
        let dom = OpenSet1D::new(self.domain.clone())?;
        let hull = (dom.inf(), dom.sup());
        let mut u = Bv1d::constant(self.base, dom.clone());
        for t in &self.terms {
            let part = match t {
                Term::Piece { support, form } => {
                    let piece = SmoothPiece::new(support.unwrap_or(hull), form.clone())?;
                    Bv1d::new(0.0, vec![piece], JumpSet::empty(), vec![], dom.clone())?
                }
                Term::Step { location, height } => Bv1d::step(*location, *height, dom.clone())?,
                Term::Cantor { support, mass } => {
                    let c = CantorComponent::new(support.0, support.1, *mass)?;
                    Bv1d::new(0.0, vec![], JumpSet::empty(), vec![c], dom.clone())?
                }
            };
            u = u.add(&part)?;
        }
        Ok(u)
    }

    /// Built-in functions by name: `linear`, `step`, `cantor`, `sbv_mix`,
    /// `sine`, `spline`.
    pub fn named(name: &str) -> Result<Self> {
        let affine = |slope: f64, intercept: f64| Term::Piece { support: None, form: PieceForm::Affine { slope, intercept } };
        let terms = match name {
            "linear" => vec![affine(1.0, 0.0)],
            "step" => vec![Term::Step { location: 0.5, height: 1.0 }],
            "cantor" => vec![Term::Cantor { support: unit_support(), mass: 1.0 }],
            "sbv_mix" => vec![affine(0.5, 0.0), Term::Step { location: 0.3, height: -0.25 }],
            "sine" => vec![Term::Piece {
                support: None,
                form: PieceForm::ScaledSine { amplitude: 0.2, frequency: 2.0 * std::f64::consts::PI, phase: 0.0 },
            }],
            "spline" => vec![Term::Piece {
                support: None,
                form: PieceForm::Spline { knots: vec![0.0, 0.25, 0.5, 0.75, 1.0], values: vec![0.0, 0.4, 0.3, 0.9, 1.0] },
            }],
            _ => return Err(Error::Config(format!("unknown function '{name}'"))),
        };
        Ok(Self::on_unit(terms))
    }
}

/// Planar form description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FormSpec {
    Ridge { profile: FunctionSpec, direction: Point },
    Radial { profile: FunctionSpec, center: Point },
    Indicator { region: Region, height: f64 },
    CantorSheet { mass: f64, axis: Point },
    Sum { parts: Vec<FormSpec> },
}

impl FormSpec {
    pub fn build(&self) -> Result<Form2D> {
        match self {
            FormSpec::Ridge { profile, direction } => Form2D::ridge(profile.build()?, *direction),
            FormSpec::Radial { profile, center } => Form2D::radial(profile.build()?, *center),
            FormSpec::Indicator { region, height } => Ok(Form2D::indicator(region.clone(), *height)),
            FormSpec::CantorSheet { mass, axis } => Form2D::cantor_sheet(*mass, *axis),
            FormSpec::Sum { parts } => Ok(Form2D::Sum(parts.iter().map(FormSpec::build).collect::<Result<_>>()?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Function2DSpec {
    pub domain: Region,
    pub form: FormSpec,
}

impl Function2DSpec {
    pub fn build(&self) -> Result<Bv2d> {
        Ok(Bv2d::new(self.form.build()?, self.domain.clone()))
    }

    /// Built-in planar functions: `disk` (indicator of the disk of radius
    /// 0.3 in `(-1, 1)^2`), `ridge` (`x_1` on the same square),
    /// `cantor_sheet` (on the unit square).
    pub fn named(name: &str) -> Result<Self> {
        let square = Region::centered_square(1.0)?;
        let form = match name {
            "disk" => FormSpec::Indicator { region: Region::disk([0.0, 0.0], 0.3)?, height: 1.0 },
            "ridge" => FormSpec::Ridge {
                profile: FunctionSpec {
                    domain: vec![(-1.0, 1.0)],
                    base: 0.0,
                    terms: vec![Term::Piece { support: None, form: PieceForm::Affine { slope: 1.0, intercept: 0.0 } }],
                },
                direction: [1.0, 0.0],
            },
            "cantor_sheet" => {
                return Ok(Self {
                    domain: Region::rect(0.0, 1.0, 0.0, 1.0)?,
                    form: FormSpec::CantorSheet { mass: 1.0, axis: [1.0, 0.0] },
                })
            }
            _ => return Err(Error::Config(format!("unknown planar function '{name}'"))),
        };
        Ok(Self { domain: square, form })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_json_round_trip() {
        let spec = FunctionSpec {
            domain: vec![(0.0, 0.4), (0.5, 1.0)],
            base: 0.1,
            terms: vec![
                Term::Piece { support: Some((0.0, 1.0)), form: PieceForm::Polynomial { coefficients: vec![0.0, 1.0, -0.5] } },
                Term::Step { location: 0.7, height: 0.2 },
                Term::Cantor { support: (0.0, 0.4), mass: 0.3 },
            ],
        };
        let t = toml::to_string(&spec).unwrap();
        assert_eq!(toml::from_str::<FunctionSpec>(&t).unwrap(), spec);
        let j = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<FunctionSpec>(&j).unwrap(), spec);
        let u = spec.build().unwrap();
        let x = 0.8;
        let expect = 0.1 + x - 0.5 * x * x + 0.2 + 0.3;
        assert!((u.value(x) - expect).abs() < 1e-12);
    }

    #[test]
    fn minimal_toml_uses_defaults() {
        let u: FunctionSpec = toml::from_str("[[terms]]\nkind = \"cantor\"\n").unwrap();
        let f = u.build().unwrap();
        assert!((f.value(0.5) - 0.5).abs() < 1e-15);
        let s: Function2DSpec = toml::from_str(
            "[domain]\nshape = \"disk\"\ncenter = [0.0, 0.0]\nradius = 1.0\n[form]\nkind = \"indicator\"\nheight = 2.0\n[form.region]\nshape = \"disk\"\ncenter = [0.0, 0.0]\nradius = 0.5\n",
        )
        .unwrap();
        assert_eq!(s.build().unwrap().value([0.1, 0.1]), 2.0);
    }

    #[test]
    fn named_functions_build() {
        for n in ["linear", "step", "cantor", "sbv_mix", "sine", "spline"] {
            FunctionSpec::named(n).unwrap().build().unwrap();
        }
        for n in ["disk", "ridge", "cantor_sheet"] {
            Function2DSpec::named(n).unwrap().build().unwrap();
        }
        assert!(FunctionSpec::named("nope").is_err());
    }
}
