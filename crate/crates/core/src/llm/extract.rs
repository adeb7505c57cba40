//! Pulling a program out of a chat response and picking the best candidate.

use crate::script::{parse, validate, PolicyProgram};

/// Responses interleave prose with fenced code. Returns the contents of the
/// last fenced block, the text after an unclosed fence (truncated replies),
/// or the whole response when no fence appears. A language tag on the fence
/// line is dropped.
pub fn extract_program(response: &str) -> String {
    let mut segments: Vec<&str> = response.split("```").collect();
    if segments.len() == 1 {
        return response.trim().to_string();
    }
    // segments at odd indices are inside fences; an even segment count means
    // the final fence never closed
    let inside = if segments.len().is_multiple_of(2) {
        segments.pop().unwrap()
    } else {
        segments[segments.len() - 2]
    };
    strip_language_tag(inside).trim().to_string()
}

fn strip_language_tag(block: &str) -> &str {
    match block.split_once('\n') {
        Some((first, rest)) => {
            let tag = first.trim();
            if !tag.is_empty() && tag.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                rest
            } else {
                block
            }
        }
        None => block,
    }
}

/// Best-of-n selection: the first candidate that parses and validates with
/// zero violations. Deterministic and reproducible.
pub fn select_best(candidates: &[String], strict_range: bool) -> Option<PolicyProgram> {
    candidates.iter().find_map(|text| {
        let program = parse(&extract_program(text)).ok()?;
        if validate(&program, strict_range).is_empty() {
            Some(program)
        } else {
            None
        }
    })
}
