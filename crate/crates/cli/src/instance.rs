//! On-disk form of a compiled matching instance.

use anyhow::{Context, Result};
use hom_core::reduction::MatchingInstance;
use hom_core::syntax::{parse_closed_term, parse_type, print_ssts, print_term, print_type, Style};
use hom_core::Ssts;
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub sigma: String,
    pub tau: String,
    #[serde(rename = "F")]
    pub f: String,
    #[serde(rename = "N")]
    pub n: String,
    /// Source rules, one `a b => c d` per entry.
    #[serde(default)]
    pub rules: Vec<String>,
    #[serde(default)]
    pub alphabet_size: Option<u32>,
}

impl InstanceDoc {
    pub fn new(instance: &MatchingInstance, system: &Ssts) -> InstanceDoc {
        InstanceDoc {
            sigma: print_type(&instance.sigma),
            tau: print_type(&instance.tau),
            f: print_term(&instance.f, Style::Named),
            n: print_term(&instance.n, Style::Named),
            rules: print_ssts(system).lines().map(str::to_string).collect(),
            alphabet_size: Some(system.alphabet_size()),
        }
    }

    pub fn to_instance(&self) -> Result<MatchingInstance> {
        Ok(MatchingInstance::new(
            parse_closed_term(&self.f).context("field F")?,
            parse_closed_term(&self.n).context("field N")?,
            parse_type(&self.sigma).context("field sigma")?,
            parse_type(&self.tau).context("field tau")?,
        ))
    }
}
