//! Token normalization shared by drift detection, rubric heuristics and
//! context rules.

/// Lowercases, strips punctuation and splits on whitespace. Besides ASCII
/// punctuation, typographic quotes, dashes and ellipses are stripped.
/// Tokens that were pure punctuation are dropped.
pub fn normalized_tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|raw| {
            raw.chars()
                .filter(|&c| !is_punctuation(c))
                .flat_map(char::to_lowercase)
                .collect::<String>()
        })
        .filter(|t| !t.is_empty())
        .collect()
}

fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation() || matches!(c, '‘' | '’' | '“' | '”' | '—' | '–' | '…')
}

/// Whitespace split with no other processing.
pub fn raw_tokens(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}

/// Normalized text padded with single spaces, for whole-phrase matching:
/// `padded(t).contains(" i will ")`.
pub fn padded(text: &str) -> String {
    let mut out = String::from(" ");
    for tok in normalized_tokens(text) {
        out.push_str(&tok);
        out.push(' ');
    }
    out
}

/// True when `phrase` occurs in `text` on token boundaries, ignoring case
/// and punctuation.
pub fn contains_phrase(text: &str, phrase: &str) -> bool {
    let needle = padded(phrase);
    if needle.trim().is_empty() {
        return false;
    }
    padded(text).contains(&needle)
}

const STOPWORDS: &[&str] = &[
    "about", "after", "also", "because", "been", "being", "could", "does", "doing", "dont", "from",
    "have", "having", "into", "just", "like", "more", "much", "only", "other", "over", "should",
    "some", "such", "than", "that", "thats", "their", "them", "then", "there", "these", "they",
    "this", "those", "very", "want", "were", "what", "when", "where", "which", "while", "will",
    "with", "would", "your", "youre",
];

/// Normalized tokens of at least four characters that are not stopwords.
pub fn content_words(text: &str) -> Vec<String> {
    normalized_tokens(text)
        .into_iter()
        .filter(|t| t.chars().count() >= 4 && !STOPWORDS.contains(&t.as_str()))
        .collect()
}
