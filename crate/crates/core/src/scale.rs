//! Comparison scales an expert chooses judgments from.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::judgment::Ratio;

/// The value set offered to an expert for one pairwise judgment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "ScaleRepr", into = "ScaleRepr")]
pub enum ComparisonScale {
    /// Integers 1..=9 and their reciprocals.
    Saaty9,
    /// `{1/G, 1/F, 1, F, G}` with integer `G > F > 1`.
    ThreePoint { f: u32, g: u32 },
}

/// One menu entry: a scale value with its verbal anchor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Choice {
    #[serde(flatten)]
    pub value: Ratio,
    pub verbal: String,
}

impl Default for ComparisonScale {
    fn default() -> Self {
        ComparisonScale::ThreePoint { f: 3, g: 9 }
    }
}

impl ComparisonScale {
    pub fn three_point(f: u32, g: u32) -> Result<Self> {
        if f <= 1 || g <= f {
            return Err(Error::BadScale(format!("three-point scale needs integer G > F > 1, got F={f}, G={g}")));
        }
        Ok(ComparisonScale::ThreePoint { f, g })
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            ComparisonScale::Saaty9 => Ok(self),
            ComparisonScale::ThreePoint { f, g } => ComparisonScale::three_point(f, g),
        }
    }

    /// The values at and above 1; the full set is their reciprocal closure.
    fn upper_values(self) -> Vec<u32> {
        match self {
            ComparisonScale::Saaty9 => (1..=9).collect(),
            ComparisonScale::ThreePoint { f, g } => vec![1, f, g],
        }
    }

    /// All scale values in ascending order.
    pub fn values(self) -> Vec<Ratio> {
        let upper = self.upper_values();
        let mut out: Vec<Ratio> = upper.iter().rev().filter(|&&n| n > 1).map(|&n| Ratio::new(1, n).expect("n > 0")).collect();
        out.extend(upper.iter().map(|&n| Ratio::integer(n).expect("n > 0")));
        out
    }

    pub fn contains(self, value: Ratio) -> bool {
        self.upper_values().iter().any(|&n| (value.den() == 1 && value.num() == n) || (value.num() == 1 && value.den() == n))
    }

    /// Verbal descriptor for a value of this scale, `None` when not in the scale.
    pub fn verbal(self, value: Ratio) -> Option<String> {
        if !self.contains(value) {
            return None;
        }
        let (magnitude, more) = if value.den() == 1 { (value.num(), true) } else { (value.den(), false) };
        if magnitude == 1 {
            return Some("the objects are equal".to_string());
        }
        let word = match self {
            ComparisonScale::ThreePoint { f, .. } => {
                if magnitude == f {
                    "more important"
                } else {
                    "much more important"
                }
            }
            ComparisonScale::Saaty9 => match magnitude {
                3 => "moderately more important",
                5 => "strongly more important",
                7 => "very strongly more important",
                9 => "extremely more important",
                _ => "intermediately more important",
            },
        };
        Some(if more { format!("first is {word}") } else { format!("second is {word}") })
    }

    /// The value menu presented for one pair, ascending.
    pub fn choices(self) -> Vec<Choice> {
        self.values()
            .into_iter()
            .map(|value| Choice { value, verbal: self.verbal(value).unwrap_or_default() })
            .collect()
    }
}

impl fmt::Display for ComparisonScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparisonScale::Saaty9 => f.write_str("saaty9"),
            ComparisonScale::ThreePoint { f: ff, g } => write!(f, "three:{ff},{g}"),
        }
    }
}

/// Parses `saaty9` or `three:F,G`.
impl FromStr for ComparisonScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("saaty9") || s.eq_ignore_ascii_case("saaty") {
            return Ok(ComparisonScale::Saaty9);
        }
        let rest = s
            .strip_prefix("three:")
            .ok_or_else(|| Error::BadScale(format!("unrecognized scale {s:?}; use saaty9 or three:F,G")))?;
        let (f, g) = rest.split_once(',').ok_or_else(|| Error::BadScale(format!("expected three:F,G, got {s:?}")))?;
        let parse = |x: &str| x.trim().parse::<u32>().map_err(|e| Error::BadScale(format!("{x:?}: {e}")));
        ComparisonScale::three_point(parse(f)?, parse(g)?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ScaleRepr {
    Saaty9,
    ThreePoint {
        #[serde(rename = "F")]
        f: u32,
        #[serde(rename = "G")]
        g: u32,
    },
}

impl TryFrom<ScaleRepr> for ComparisonScale {
    type Error = Error;

    fn try_from(r: ScaleRepr) -> Result<Self> {
        match r {
            ScaleRepr::Saaty9 => Ok(ComparisonScale::Saaty9),
            ScaleRepr::ThreePoint { f, g } => ComparisonScale::three_point(f, g),
        }
    }
}

impl From<ComparisonScale> for ScaleRepr {
    fn from(s: ComparisonScale) -> Self {
        match s {
            ComparisonScale::Saaty9 => ScaleRepr::Saaty9,
            ComparisonScale::ThreePoint { f, g } => ScaleRepr::ThreePoint { f, g },
        }
    }
}

/// Scale declaration of a matrix file, which may also be `free` for raw
/// real-valued fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScaleSpec {
    Saaty9,
    ThreePoint {
        #[serde(rename = "F")]
        f: u32,
        #[serde(rename = "G")]
        g: u32,
    },
    Free,
}

impl ScaleSpec {
    pub fn scale(self) -> Result<Option<ComparisonScale>> {
        match self {
            ScaleSpec::Saaty9 => Ok(Some(ComparisonScale::Saaty9)),
            ScaleSpec::ThreePoint { f, g } => ComparisonScale::three_point(f, g).map(Some),
            ScaleSpec::Free => Ok(None),
        }
    }
}

impl From<ComparisonScale> for ScaleSpec {
    fn from(s: ComparisonScale) -> Self {
        match s {
            ComparisonScale::Saaty9 => ScaleSpec::Saaty9,
            ComparisonScale::ThreePoint { f, g } => ScaleSpec::ThreePoint { f, g },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::judgment::Relation;

    fn r(n: u32, d: u32) -> Ratio {
        Ratio::new(n, d).unwrap()
    }

    #[test]
    fn saaty_has_seventeen_values() {
        let v = ComparisonScale::Saaty9.values();
        assert_eq!(v.len(), 17);
        assert_eq!(v[0], r(1, 9));
        assert_eq!(v[8], Ratio::ONE);
        assert_eq!(v[16], r(9, 1));
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn three_point_value_set() {
        let s = ComparisonScale::three_point(3, 9).unwrap();
        assert_eq!(s.values(), vec![r(1, 9), r(1, 3), Ratio::ONE, r(3, 1), r(9, 1)]);
        assert!(!s.contains(r(7, 1)));
        assert!(s.contains(r(1, 9)));
    }

    #[test]
    fn three_point_rejects_bad_parameters() {
        assert!(ComparisonScale::three_point(1, 9).is_err());
        assert!(ComparisonScale::three_point(4, 4).is_err());
        assert!(ComparisonScale::three_point(5, 3).is_err());
        assert!(serde_json::from_str::<ComparisonScale>(r#"{"kind":"three_point","F":9,"G":3}"#).is_err());
    }

    #[test]
    fn closed_under_reciprocal_and_relations_pair_up() {
        for s in [ComparisonScale::Saaty9, ComparisonScale::three_point(2, 5).unwrap(), ComparisonScale::default()] {
            let values = s.values();
            assert!(values.contains(&Ratio::ONE));
            for v in values {
                assert!(s.contains(v.recip()), "{s}: {v}");
                assert_eq!(v.relation().reverse(), v.recip().relation());
                if v.relation() == Relation::Equal {
                    assert_eq!(v.recip().relation(), Relation::Equal);
                }
            }
        }
    }

    #[test]
    fn three_point_is_reciprocal_closure_of_one_f_g() {
        for (f, g) in [(2, 3), (2, 9), (3, 9), (4, 7)] {
            let s = ComparisonScale::three_point(f, g).unwrap();
            let mut closure: Vec<Ratio> = [1, f, g].iter().flat_map(|&n| [r(n, 1), r(1, n)]).collect();
            closure.sort();
            closure.dedup();
            assert_eq!(s.values(), closure);
        }
    }

    #[test]
    fn verbal_anchors() {
        let s = ComparisonScale::default();
        assert_eq!(s.verbal(Ratio::ONE).unwrap(), "the objects are equal");
        assert_eq!(s.verbal(r(3, 1)).unwrap(), "first is more important");
        assert_eq!(s.verbal(r(1, 9)).unwrap(), "second is much more important");
        assert_eq!(s.verbal(r(7, 1)), None);
        assert_eq!(s.choices().len(), 5);
    }

    #[test]
    fn parse_and_serde() {
        assert_eq!("three:3,9".parse::<ComparisonScale>().unwrap(), ComparisonScale::default());
        assert_eq!("saaty9".parse::<ComparisonScale>().unwrap(), ComparisonScale::Saaty9);
        assert!("three:3".parse::<ComparisonScale>().is_err());
        let json = serde_json::to_string(&ComparisonScale::default()).unwrap();
        assert_eq!(json, r#"{"kind":"three_point","F":3,"G":9}"#);
        let s: ComparisonScale = serde_json::from_str(r#"{"kind":"saaty9"}"#).unwrap();
        assert_eq!(s, ComparisonScale::Saaty9);
        let spec: ScaleSpec = serde_json::from_str(r#"{"kind":"free"}"#).unwrap();
        assert_eq!(spec.scale().unwrap(), None);
    }
}
