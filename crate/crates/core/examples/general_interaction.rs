//! Interaction report on a model read from JSON: a four-valued opinion
//! scale, a three-level chain and a yes/no flag, both methods side by
//! side.

use std::sync::Arc;

use latint::interaction::ltilde_targets;
use latint::io::parse_model;
use latint::value::{format_decimal, rat};
use latint::{mobius, CoefficientScheme, InteractionReport, LatticeFunction, Method, Result};

const MODEL: &str = r#"{
  "attributes": [
    {"name": "opinion", "elements": ["unsatisfactory", "neutral", "dont_know", "satisfactory"],
     "covers": [["unsatisfactory", "neutral"], ["unsatisfactory", "dont_know"],
                ["neutral", "satisfactory"], ["dont_know", "satisfactory"]]},
    {"name": "grade", "kind": {"chain": 3}},
    {"name": "urgent", "kind": "boolean"}
  ]
}"#;

fn main() -> Result<()> {
    let domain = Arc::new(parse_model(MODEL)?);
    let v = LatticeFunction::from_fn(Arc::clone(&domain), |x| {
        let (o, g, u) = (x.0[0] as i64, x.0[1] as i64, x.0[2] as i64);
        rat(o * o + 2 * g + o * g + 3 * u * g, 12)
    })?;
    let m = mobius(&v);
    let targets = ltilde_targets(&domain)?;
    for scheme in [CoefficientScheme::shapley(), CoefficientScheme::banzhaf()] {
        let report = InteractionReport::compute(&v, Some(&m), &targets, &scheme, Method::Both);
        println!("{} ({} targets, {} disagreements)", report.scheme, report.rows.len(), report.disagreements());
        for row in &report.rows {
            let value = row.value().map_or("-".to_string(), |r| format_decimal(r, 6));
            println!("  {:<32} {value}", domain.display(&row.target));
        }
    }
    Ok(())
}
