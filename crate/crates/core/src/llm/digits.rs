//! Digit spacing for numeric prompts: the integer part, decimal point, and
//! first fractional digit stay joined; every later fractional digit gets a
//! space in front, so "f(1.393)=4.107" becomes "f(1.3 9 3)=4.1 0 7".

use super::LlmError;

/// Reformat every decimal literal in the text. Inputs carrying no digits at
/// all are rejected. Idempotent: already-spaced text has only one-fraction
/// digit literals left, which pass through unchanged.
pub fn digit_space_format(text: &str) -> Result<String, LlmError> {
    if !text.bytes().any(|b| b.is_ascii_digit()) {
        return Err(LlmError::InvalidLiteral(format!(
            "no numeric literal in {text:?}"
        )));
    }
    let bytes = text.as_bytes();
    let mut out = String::with_capacity(text.len() * 2);
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            // integer part (copied verbatim)
            out.push_str(&text[start..i]);
            let has_fraction = i + 1 < bytes.len()
                && bytes[i] == b'.'
                && bytes[i + 1].is_ascii_digit();
            if has_fraction {
                out.push('.');
                i += 1;
                let mut fraction_index = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    if fraction_index > 0 {
                        out.push(' ');
                    }
                    out.push(bytes[i] as char);
                    fraction_index += 1;
                    i += 1;
                }
            }
        } else {
            out.push(bytes[i] as char);
            i += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_the_worked_example_exactly() {
        assert_eq!(
            digit_space_format("f(1.393)=4.107").unwrap(),
            "f(1.3 9 3)=4.1 0 7"
        );
    }

    #[test]
    fn single_fraction_digit_unchanged() {
        assert_eq!(digit_space_format("0.5").unwrap(), "0.5");
    }

    #[test]
    fn longer_fraction() {
        assert_eq!(digit_space_format("12.345").unwrap(), "12.3 4 5");
    }

    #[test]
    fn integers_unchanged() {
        assert_eq!(digit_space_format("f(12)=34").unwrap(), "f(12)=34");
    }

    #[test]
    fn non_numeric_rejected() {
        assert!(digit_space_format("hello").is_err());
    }

    #[test]
    fn idempotent_on_formatted_text() {
        let once = digit_space_format("f(1.393)=4.107").unwrap();
        let twice = digit_space_format(&once).unwrap();
        assert_eq!(once, twice);
    }
}
