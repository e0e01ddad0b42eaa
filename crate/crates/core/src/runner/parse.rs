//! YES/NO answer parsing and compliance.

use serde::{Deserialize, Serialize};

/// How strictly raw responses are normalized before the equality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParseMode {
    /// Trim whitespace and uppercase; the remainder must equal YES or NO.
    Strict,
    /// Additionally strip surrounding quotes, trailing punctuation (. , !),
    /// and markdown emphasis markers.
    Lenient,
}

impl std::str::FromStr for ParseMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(ParseMode::Strict),
            "lenient" => Ok(ParseMode::Lenient),
            other => Err(format!("unknown parse mode {other:?} (use strict|lenient)")),
        }
    }
}

/// Outcome of parsing a raw response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParsedAnswer {
    #[serde(rename = "YES")]
    Yes,
    #[serde(rename = "NO")]
    No,
    #[serde(rename = "noncompliant")]
    Noncompliant,
}

impl ParsedAnswer {
    pub fn is_compliant(&self) -> bool {
        !matches!(self, ParsedAnswer::Noncompliant)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ParsedAnswer::Yes => "YES",
            ParsedAnswer::No => "NO",
            ParsedAnswer::Noncompliant => "noncompliant",
        }
    }
}

/// Total, deterministic answer parser; anything that does not normalize to
/// YES or NO is noncompliant.
pub fn parse_answer(raw: &str, mode: ParseMode) -> ParsedAnswer {
    let mut text = raw.trim().to_string();
    if mode == ParseMode::Lenient {
        loop {
            let before = text.clone();
            text = text.trim().to_string();
            // Markdown emphasis markers on either end.
            text = text.trim_matches(|c| c == '*' || c == '_' || c == '`').to_string();
            // Surrounding quotes.
            text = text
                .trim_matches(|c| matches!(c, '"' | '\'' | '\u{201c}' | '\u{201d}' | '\u{2018}' | '\u{2019}'))
                .to_string();
            // Trailing punctuation.
            text = text.trim_end_matches(['.', ',', '!']).to_string();
            if text == before {
                break;
            }
        }
    }
    match text.to_uppercase().as_str() {
        "YES" => ParsedAnswer::Yes,
        "NO" => ParsedAnswer::No,
        _ => ParsedAnswer::Noncompliant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ParseMode::{Lenient, Strict};
    use ParsedAnswer::{No, Noncompliant, Yes};

    #[test]
    fn strict_identity_cases() {
        assert_eq!(parse_answer("YES", Strict), Yes);
        assert_eq!(parse_answer("NO", Strict), No);
        assert_eq!(parse_answer("  yes \n", Strict), Yes);
    }

    #[test]
    fn normalization_suite_both_modes() {
        // Hand-built suite: (raw, strict expectation, lenient expectation).
        let suite: [(&str, ParsedAnswer, ParsedAnswer); 20] = [
            ("YES", Yes, Yes),
            ("no", No, No),
            ("Yes", Yes, Yes),
            ("  NO  ", No, No),
            ("yes.", Noncompliant, Yes),
            ("NO!", Noncompliant, No),
            ("\"YES\"", Noncompliant, Yes),
            ("'no'", Noncompliant, No),
            ("**YES**", Noncompliant, Yes),
            ("*no*", Noncompliant, No),
            ("_YES_", Noncompliant, Yes),
            ("`no`", Noncompliant, No),
            ("\u{201c}Yes.\u{201d}", Noncompliant, Yes),
            ("**\"no.\"**", Noncompliant, No),
            ("YES,", Noncompliant, Yes),
            ("I would prefer not to.", Noncompliant, Noncompliant),
            ("YES and NO", Noncompliant, Noncompliant),
            ("maybe", Noncompliant, Noncompliant),
            ("", Noncompliant, Noncompliant),
            ("Y", Noncompliant, Noncompliant),
        ];
        for (raw, strict_want, lenient_want) in suite {
            assert_eq!(parse_answer(raw, Strict), strict_want, "strict {raw:?}");
            assert_eq!(parse_answer(raw, Lenient), lenient_want, "lenient {raw:?}");
        }
    }

    #[test]
    fn parser_is_deterministic() {
        for raw in ["YES", "odd input", "**no.**"] {
            assert_eq!(parse_answer(raw, Lenient), parse_answer(raw, Lenient));
            assert_eq!(parse_answer(raw, Strict), parse_answer(raw, Strict));
        }
    }
}
