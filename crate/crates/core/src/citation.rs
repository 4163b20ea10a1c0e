//! The fixed registry of result tags that verdicts cite.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Citation {
    #[serde(rename = "Thm-1.2")]
    Thm1_2,
    #[serde(rename = "Thm-2.1")]
    Thm2_1,
    #[serde(rename = "Cor-2.2")]
    Cor2_2,
    #[serde(rename = "Cor-2.3")]
    Cor2_3,
    #[serde(rename = "Prop-2.4")]
    Prop2_4,
    #[serde(rename = "Thm-3.1")]
    Thm3_1,
    #[serde(rename = "Thm-4.1")]
    Thm4_1,
    #[serde(rename = "Thm-5.1")]
    Thm5_1,
    #[serde(rename = "Def-5.2")]
    Def5_2,
    #[serde(rename = "Prop-5.3")]
    Prop5_3,
    #[serde(rename = "Prop-6.3")]
    Prop6_3,
    #[serde(rename = "Thm-6.4")]
    Thm6_4,
}

impl Citation {
    pub const ALL: [Citation; 12] = [
        Citation::Thm1_2,
        Citation::Thm2_1,
        Citation::Cor2_2,
        Citation::Cor2_3,
        Citation::Prop2_4,
        Citation::Thm3_1,
        Citation::Thm4_1,
        Citation::Thm5_1,
        Citation::Def5_2,
        Citation::Prop5_3,
        Citation::Prop6_3,
        Citation::Thm6_4,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Citation::Thm1_2 => "Thm-1.2",
            Citation::Thm2_1 => "Thm-2.1",
            Citation::Cor2_2 => "Cor-2.2",
            Citation::Cor2_3 => "Cor-2.3",
            Citation::Prop2_4 => "Prop-2.4",
            Citation::Thm3_1 => "Thm-3.1",
            Citation::Thm4_1 => "Thm-4.1",
            Citation::Thm5_1 => "Thm-5.1",
            Citation::Def5_2 => "Def-5.2",
            Citation::Prop5_3 => "Prop-5.3",
            Citation::Prop6_3 => "Prop-6.3",
            Citation::Thm6_4 => "Thm-6.4",
        }
    }
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Citation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Citation::ALL
            .into_iter()
            .find(|c| c.tag() == s)
            .ok_or_else(|| format!("unknown citation tag {s:?}"))
    }
}
