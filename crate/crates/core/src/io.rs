//! Marked-group files and point output.
//!
//! A marked group is stored as JSON, either a bare list of maps or an object
//! with a `generators` list. Each map is
//! `{"matrix": [[re, im], [re, im], [re, im], [re, im]], "orientation": "preserving"}`
//! with entries in the order `a, b, c, d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mobius::{MobiusMap, SpherePoint};
use crate::schottky::MarkedSchottky;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MarkedFile {
    Bare(Vec<MobiusMap>),
    Wrapped { generators: Vec<MobiusMap> },
}

pub fn parse_marked(text: &str) -> Result<MarkedSchottky> {
    let file: MarkedFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let gens = match file {
        MarkedFile::Bare(g) | MarkedFile::Wrapped { generators: g } => g,
    };
    if gens.iter().any(|g| !g.is_preserving()) {
        return Err(Error::Parse(
            "marked groups take orientation-preserving generators".into(),
        ));
    }
    MarkedSchottky::new(gens)
}

pub fn marked_to_json(m: &MarkedSchottky) -> String {
    let file = MarkedFile::Wrapped {
        generators: m.generators().to_vec(),
    };
    serde_json::to_string_pretty(&file).expect("maps serialize")
}

/// A sphere point as `[re, im]`, or `null` at infinity.
pub fn point_json(p: &SpherePoint) -> serde_json::Value {
    match p.to_complex() {
        Some(z) => serde_json::json!([z.re, z.im]),
        None => serde_json::Value::Null,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par::Execution;
    use crate::schottky::sample_classical;

    #[test]
    fn round_trip() {
        let m = sample_classical(3, 1, 5, Execution::Sequential)
            .pop()
            .unwrap()
            .unwrap();
        let back = parse_marked(&marked_to_json(&m)).unwrap();
        for (x, y) in m.generators().iter().zip(back.generators()) {
            assert!(x.approx_eq(y, 1e-12));
        }
    }

    #[test]
    fn bare_list_and_errors() {
        let text = r#"[
            {"matrix": [[2,0],[0,0],[0,0],[0.5,0]], "orientation": "preserving"},
            {"matrix": [[3,0],[8,0],[1,0],[3,0]], "orientation": "preserving"}
        ]"#;
        assert_eq!(parse_marked(text).unwrap().rank(), 2);
        assert!(matches!(parse_marked("[1, 2]"), Err(Error::Parse(_))));
        let singular = r#"[{"matrix": [[1,0],[1,0],[1,0],[1,0]], "orientation": "preserving"}]"#;
        assert!(matches!(parse_marked(singular), Err(Error::Parse(_))));
        let parabolic = r#"[{"matrix": [[1,0],[1,0],[0,0],[1,0]], "orientation": "preserving"}]"#;
        assert!(matches!(
            parse_marked(parabolic),
            Err(Error::NotLoxodromic { .. })
        ));
    }
}
