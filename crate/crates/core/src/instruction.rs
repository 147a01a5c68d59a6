//! User instructions (task goals).

use serde::{Deserialize, Serialize};

/// A user instruction the agent is asked to accomplish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instruction {
    pub id: String,
    /// Natural-language goal; never empty for a valid instruction.
    pub goal_text: String,
    #[serde(default)]
    pub domain_tag: String,
}

impl Instruction {
    pub fn new(id: impl Into<String>, goal_text: impl Into<String>, domain_tag: impl Into<String>) -> Self {
        Instruction {
            id: id.into(),
            goal_text: goal_text.into(),
            domain_tag: domain_tag.into(),
        }
    }
}
