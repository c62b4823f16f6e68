use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the four supported scenario years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u16", into = "u16")]
pub enum Year {
    Y2020,
    Y2030,
    Y2040,
    Y2050,
}

impl Year {
    pub const ALL: [Year; 4] = [Year::Y2020, Year::Y2030, Year::Y2040, Year::Y2050];

    pub fn value(self) -> u16 {
        match self {
            Year::Y2020 => 2020,
            Year::Y2030 => 2030,
            Year::Y2040 => 2040,
            Year::Y2050 => 2050,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Year::Y2020 => 0,
            Year::Y2030 => 1,
            Year::Y2040 => 2,
            Year::Y2050 => 3,
        }
    }
}

impl TryFrom<u16> for Year {
    type Error = Error;

    fn try_from(value: u16) -> Result<Self> {
        match value {
            2020 => Ok(Year::Y2020),
            2030 => Ok(Year::Y2030),
            2040 => Ok(Year::Y2040),
            2050 => Ok(Year::Y2050),
            other => Err(Error::param(format!(
                "unsupported year {other}; expected 2020, 2030, 2040 or 2050"
            ))),
        }
    }
}

impl From<Year> for u16 {
    fn from(year: Year) -> u16 {
        year.value()
    }
}

impl fmt::Display for Year {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A value given separately for each supported year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ByYear {
    #[serde(rename = "2020")]
    pub y2020: f64,
    #[serde(rename = "2030")]
    pub y2030: f64,
    #[serde(rename = "2040")]
    pub y2040: f64,
    #[serde(rename = "2050")]
    pub y2050: f64,
}

impl ByYear {
    pub const fn new(y2020: f64, y2030: f64, y2040: f64, y2050: f64) -> Self {
        ByYear {
            y2020,
            y2030,
            y2040,
            y2050,
        }
    }

    pub const fn constant(v: f64) -> Self {
        ByYear::new(v, v, v, v)
    }

    pub fn get(&self, year: Year) -> f64 {
        self.as_array()[year.index()]
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.y2020, self.y2030, self.y2040, self.y2050]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn only_supported_years_construct() {
        for y in [2020u16, 2030, 2040, 2050] {
            assert_eq!(Year::try_from(y).unwrap().value(), y);
        }
        for y in [0u16, 2019, 2025, 2060] {
            assert!(Year::try_from(y).is_err());
        }
        assert!(serde_json::from_str::<Year>("2035").is_err());
        assert_eq!(serde_json::from_str::<Year>("2040").unwrap(), Year::Y2040);
    }

    #[test]
    fn by_year_lookup() {
        let v = ByYear::new(1.0, 2.0, 3.0, 4.0);
        let got: Vec<f64> = Year::ALL.iter().map(|&y| v.get(y)).collect();
        assert_eq!(got, vec![1.0, 2.0, 3.0, 4.0]);
    }
}
