//! TOML file for `construct`, mirroring `DesignSpec`. Command-line flags
//! override fields read from the file.

use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConstructFile {
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub girth: Option<usize>,
    pub ranges: Option<String>,
    pub mode: Option<Mode>,
    pub lifting: Option<u32>,
    pub n_min: Option<u32>,
    pub n_max: Option<u32>,
    pub b_max: Option<usize>,
    pub a_cap: Option<usize>,
    pub budget_secs: Option<u64>,
    pub column_cap: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// One lifting degree.
    Fixed,
    /// Smallest lifting degree in `n_min..=n_max`.
    MinN,
    /// Largest `a_max` at a fixed lifting degree.
    MaxA,
}

impl ConstructFile {
    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    /// Fields of `other` that are set replace ours.
    pub fn overlay(self, other: ConstructFile) -> ConstructFile {
        ConstructFile {
            rows: other.rows.or(self.rows),
            cols: other.cols.or(self.cols),
            girth: other.girth.or(self.girth),
            ranges: other.ranges.or(self.ranges),
            mode: other.mode.or(self.mode),
            lifting: other.lifting.or(self.lifting),
            n_min: other.n_min.or(self.n_min),
            n_max: other.n_max.or(self.n_max),
            b_max: other.b_max.or(self.b_max),
            a_cap: other.a_cap.or(self.a_cap),
            budget_secs: other.budget_secs.or(self.budget_secs),
            column_cap: other.column_cap.or(self.column_cap),
            seed: other.seed.or(self.seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overlays() {
        let f =
            ConstructFile::parse("rows = 3\ncols = 5\ngirth = 8\nranges = \"8:3;10:2\"\nmode = \"min-n\"\nseed = 4\n")
                .unwrap();
        assert_eq!(f.mode, Some(Mode::MinN));
        let g = f.overlay(ConstructFile {
            seed: Some(9),
            ..Default::default()
        });
        assert_eq!(g.seed, Some(9));
        assert_eq!(g.cols, Some(5));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(ConstructFile::parse("colums = 5\n").is_err());
    }
}
