//! The typed web-action grammar and its canonical text form.
//!
//! Canonical strings follow the bracketed-argument convention used by the
//! policy prompts:
//!
//! ```text
//! click [42]
//! type [7] [hello] [1]
//! hover [12]
//! scroll [down]
//! goto [http://example.com]
//! go_back
//! stop [answer]
//! none
//! ```
//!
//! [`parse_action`] accepts full model output: it extracts the final
//! triple-backtick fenced span when present (the "In summary ..." pattern)
//! and otherwise parses the whole string.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    Click,
    Type,
    Hover,
    Scroll,
    Goto,
    GoBack,
    Stop,
    None,
}

impl ActionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ActionKind::Click => "click",
            ActionKind::Type => "type",
            ActionKind::Hover => "hover",
            ActionKind::Scroll => "scroll",
            ActionKind::Goto => "goto",
            ActionKind::GoBack => "go_back",
            ActionKind::Stop => "stop",
            ActionKind::None => "none",
        }
    }
}

/// A typed web action.
///
/// `rationale` carries any chain-of-thought text that accompanied the
/// action; it is never part of the canonical rendering, so round-trip
/// equality holds for actions with `rationale: None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Action {
    pub kind: ActionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub press_enter: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rationale: Option<String>,
}

impl Action {
    pub fn click(target: u64) -> Self {
        Self::new(ActionKind::Click).with_target(target)
    }

    pub fn hover(target: u64) -> Self {
        Self::new(ActionKind::Hover).with_target(target)
    }

    pub fn type_text(target: u64, text: impl Into<String>, press_enter: Option<bool>) -> Self {
        let mut a = Self::new(ActionKind::Type).with_target(target);
        a.text = Some(text.into());
        a.press_enter = press_enter;
        a
    }

    pub fn scroll(direction: impl Into<String>) -> Self {
        let mut a = Self::new(ActionKind::Scroll);
        a.text = Some(direction.into());
        a
    }

    pub fn goto(url: impl Into<String>) -> Self {
        let mut a = Self::new(ActionKind::Goto);
        a.text = Some(url.into());
        a
    }

    pub fn go_back() -> Self {
        Self::new(ActionKind::GoBack)
    }

    pub fn stop(answer: Option<String>) -> Self {
        let mut a = Self::new(ActionKind::Stop);
        a.text = answer;
        a
    }

    pub fn none() -> Self {
        Self::new(ActionKind::None)
    }

    fn new(kind: ActionKind) -> Self {
        Action {
            kind,
            target: None,
            text: None,
            press_enter: None,
            rationale: None,
        }
    }

    fn with_target(mut self, target: u64) -> Self {
        self.target = Some(target);
        self
    }

    /// Canonical deterministic rendering; inverse of [`parse_action`].
    pub fn render(&self) -> String {
        render_action(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseActionError {
    #[error("no action found in output: {0:?}")]
    UnparseableAction(String),
}

/// Render the canonical action string.
pub fn render_action(a: &Action) -> String {
    match a.kind {
        ActionKind::Click => format!("click [{}]", a.target.unwrap_or(0)),
        ActionKind::Hover => format!("hover [{}]", a.target.unwrap_or(0)),
        ActionKind::Type => {
            let mut s = format!(
                "type [{}] [{}]",
                a.target.unwrap_or(0),
                a.text.as_deref().unwrap_or("")
            );
            if let Some(enter) = a.press_enter {
                s.push_str(if enter { " [1]" } else { " [0]" });
            }
            s
        }
        ActionKind::Scroll => format!("scroll [{}]", a.text.as_deref().unwrap_or("down")),
        ActionKind::Goto => format!("goto [{}]", a.text.as_deref().unwrap_or("")),
        ActionKind::GoBack => "go_back".to_string(),
        ActionKind::Stop => match &a.text {
            Some(answer) => format!("stop [{answer}]"),
            None => "stop".to_string(),
        },
        ActionKind::None => "none".to_string(),
    }
}

/// Parse a model output into a canonical [`Action`].
///
/// The final fenced span wins when several are present; unknown verbs are
/// an error rather than a pass-through.
pub fn parse_action(model_output: &str) -> Result<Action, ParseActionError> {
    let body = extract_fenced(model_output).unwrap_or(model_output).trim();
    parse_action_body(body)
        .ok_or_else(|| ParseActionError::UnparseableAction(truncate(model_output, 120)))
}

fn truncate(s: &str, max: usize) -> String {
    if s.len() <= max {
        s.to_string()
    } else {
        let mut end = max;
        while !s.is_char_boundary(end) {
            end -= 1;
        }
        format!("{}...", &s[..end])
    }
}

/// Last ```fenced``` span in the output, if any.
fn extract_fenced(s: &str) -> Option<&str> {
    let mut last: Option<&str> = None;
    let mut rest = s;
    while let Some(open) = rest.find("```") {
        let after = &rest[open + 3..];
        let Some(close) = after.find("```") else {
            break;
        };
        last = Some(&after[..close]);
        rest = &after[close + 3..];
    }
    last
}

fn parse_action_body(body: &str) -> Option<Action> {
    let body = body.trim();
    let verb_end = body.find([' ', '[']).unwrap_or(body.len());
    let verb = body[..verb_end].trim().to_ascii_lowercase();
    let args = bracket_args(&body[verb_end..]);
    match verb.as_str() {
        "click" | "hover" => {
            let target: u64 = args.first()?.trim().parse().ok()?;
            Some(if verb == "click" {
                Action::click(target)
            } else {
                Action::hover(target)
            })
        }
        "type" => {
            let target: u64 = args.first()?.trim().parse().ok()?;
            let text = args.get(1)?.clone();
            let press_enter = match args.get(2).map(|s| s.trim()) {
                Some("1") => Some(true),
                Some("0") => Some(false),
                Some(_) => return None,
                None => None,
            };
            Some(Action::type_text(target, text, press_enter))
        }
        "scroll" => {
            let dir = args
                .first()
                .cloned()
                .or_else(|| body[verb_end..].trim().is_empty().then(|| "down".to_string()))
                .or_else(|| Some(body[verb_end..].trim().to_string()))?;
            let dir = dir.trim().to_ascii_lowercase();
            matches!(dir.as_str(), "up" | "down").then(|| Action::scroll(dir))
        }
        "goto" => Some(Action::goto(args.first()?.clone())),
        "go_back" | "goback" => Some(Action::go_back()),
        "stop" => Some(Action::stop(args.first().cloned())),
        "none" => Some(Action::none()),
        _ => None,
    }
}

/// Top-level `[...]` groups; nested brackets stay inside their group.
fn bracket_args(s: &str) -> Vec<String> {
    let mut args = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '[' => {
                if depth == 0 {
                    start = i + 1;
                }
                depth += 1;
            }
            ']' => {
                if depth > 0 {
                    depth -= 1;
                    if depth == 0 {
                        args.push(s[start..i].to_string());
                    }
                }
            }
            _ => {}
        }
    }
    args
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_click() {
        assert_eq!(parse_action("```click [42]```").unwrap(), Action::click(42));
    }

    #[test]
    fn type_with_enter() {
        let a = parse_action("```type [7] [hello] [1]```").unwrap();
        assert_eq!(a, Action::type_text(7, "hello", Some(true)));
        assert_eq!(parse_action(&a.render()).unwrap(), a);
    }

    #[test]
    fn no_action_token_is_unparseable() {
        assert!(matches!(
            parse_action("I will do nothing"),
            Err(ParseActionError::UnparseableAction(_))
        ));
    }

    #[test]
    fn unknown_verb_rejected() {
        assert!(parse_action("```drag [3]```").is_err());
    }

    #[test]
    fn canonical_renderings() {
        assert_eq!(Action::click(42).render(), "click [42]");
        assert_eq!(Action::stop(Some("3".into())).render(), "stop [3]");
        assert_eq!(Action::scroll("down").render(), "scroll [down]");
        assert_eq!(Action::go_back().render(), "go_back");
    }

    #[test]
    fn summary_pattern_takes_last_fence() {
        let out = "Let's think. First I could ```click [1]``` but better:\n\
                   In summary, the next action I will perform is ```type [5] [shoes] [1]```";
        assert_eq!(
            parse_action(out).unwrap(),
            Action::type_text(5, "shoes", Some(true))
        );
    }

    #[test]
    fn bare_string_without_fence_parses() {
        assert_eq!(parse_action("click [9]").unwrap(), Action::click(9));
        assert_eq!(parse_action("stop").unwrap(), Action::stop(None));
        assert_eq!(
            parse_action("stop []").unwrap(),
            Action::stop(Some(String::new()))
        );
    }

    #[test]
    fn type_text_with_spaces_and_brackets() {
        let a = parse_action("type [3] [blue shoes size [9]] [0]").unwrap();
        assert_eq!(a.text.as_deref(), Some("blue shoes size [9]"));
        assert_eq!(a.press_enter, Some(false));
        assert_eq!(parse_action(&a.render()).unwrap(), a);
    }

    #[test]
    fn click_requires_integer_target() {
        assert!(parse_action("click [abc]").is_err());
        assert!(parse_action("click").is_err());
    }

    #[test]
    fn scroll_accepts_bare_direction() {
        assert_eq!(parse_action("scroll down").unwrap(), Action::scroll("down"));
        assert_eq!(parse_action("scroll [up]").unwrap(), Action::scroll("up"));
        assert!(parse_action("scroll [left]").is_err());
    }
}
