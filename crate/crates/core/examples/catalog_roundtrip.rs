//! Functions described in TOML, built, evaluated and written back as JSON.

use bvlab::bvcalc::variation_decomposition;
use bvlab::catalog::{Function2DSpec, FunctionSpec};

const SPEC: &str = r#"
domain = [[0.0, 0.4], [0.5, 1.0]]
base = 0.25

[[terms]]
kind = "piece"
form = "polynomial"
coefficients = [0.0, 1.0, -0.5]

[[terms]]
kind = "step"
location = 0.7
height = -0.2

[[terms]]
kind = "cantor"
support = [0.0, 0.4]
mass = 0.3
"#;

fn main() -> bvlab::Result<()> {
    let spec: FunctionSpec = toml::from_str(SPEC).map_err(|e| bvlab::Error::Config(e.to_string()))?;
    let u = spec.build()?;
    println!("u(0.2) = {:.6}, u(0.8) = {:.6}", u.value(0.2), u.value(0.8));
    println!("{:?}", variation_decomposition(&u, u.domain())?);
    println!("{}", serde_json::to_string_pretty(&spec).map_err(|e| bvlab::Error::Serialization(e.to_string()))?);
    let disk = Function2DSpec::named("disk")?;
    println!("{}", toml::to_string(&disk).map_err(|e| bvlab::Error::Serialization(e.to_string()))?);
    Ok(())
}
