//! Optional TOML defaults. Command-line flags override these, and these
//! override the built-in defaults.

use std::path::Path;

use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mode: Option<String>,
    pub rho: Option<f64>,
    pub step: Option<f64>,
    #[serde(rename = "K")]
    pub filter_order: Option<usize>,
    pub mmax: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<String>,
    pub kind: Option<String>,
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub k: Option<usize>,
    pub methods: Option<Vec<String>>,
    pub points: Option<Vec<f64>>,
    pub clusters: Option<usize>,
    pub trials: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys() {
        let c: FileConfig = toml::from_str("mode = \"edge\"\nK = 4\npoints = [0.1, 1.0]\n").unwrap();
        assert_eq!(c.mode.as_deref(), Some("edge"));
        assert_eq!(c.filter_order, Some(4));
        assert_eq!(c.points, Some(vec![0.1, 1.0]));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<FileConfig>("colour = 1\n").is_err());
    }
}
