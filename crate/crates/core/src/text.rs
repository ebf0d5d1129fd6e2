//! Tokenization, stopword removal and keyword-family matching.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub surface: String,
    pub position: usize,
}

impl Token {
    pub fn new(surface: impl Into<String>, position: usize) -> Self {
        Token {
            surface: surface.into(),
            position,
        }
    }
}

// Combining diacritics (U+0300..U+036F) stay attached to their base letter so
// decomposed input such as "a\u{328}" is not split.
fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || ('\u{300}'..='\u{36f}').contains(&c)
}

/// Splits `text` into lowercase word tokens.
///
/// Any character that is not alphanumeric separates tokens, so hyphens,
/// apostrophes and `#` split words. Diacritics are kept.
pub fn tokenize(text: &str) -> Vec<Token> {
    text.split(|c: char| !is_word_char(c))
        .filter(|w| !w.is_empty())
        .enumerate()
        .map(|(position, w)| Token {
            surface: w.chars().flat_map(char::to_lowercase).collect(),
            position,
        })
        .collect()
}

/// Lowercase surfaces of a text, without positions.
pub fn words(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !is_word_char(c))
        .filter(|w| !w.is_empty())
        .map(|w| w.chars().flat_map(char::to_lowercase).collect())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordList {
    words: BTreeSet<String>,
    language: Option<String>,
}

impl StopwordList {
    pub fn new<I, S>(words: I, language: Option<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopwordList {
            words: words
                .into_iter()
                .map(|w| w.as_ref().trim().chars().flat_map(char::to_lowercase).collect())
                .filter(|w: &String| !w.is_empty())
                .collect(),
            language,
        }
    }

    pub fn empty() -> Self {
        StopwordList::default()
    }

    pub fn contains(&self, surface: &str) -> bool {
        self.words.contains(surface)
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// Drops stopwords and renumbers the survivors from 0.
pub fn remove_stopwords(tokens: &[Token], stops: &StopwordList) -> Vec<Token> {
    tokens
        .iter()
        .filter(|t| !stops.contains(&t.surface))
        .enumerate()
        .map(|(position, t)| Token {
            surface: t.surface.clone(),
            position,
        })
        .collect()
}

/// Tokenizes and removes stopwords in one pass.
pub fn content_tokens(text: &str, stops: &StopwordList) -> Vec<Token> {
    words(text)
        .filter(|w| !stops.contains(w))
        .enumerate()
        .map(|(position, surface)| Token { surface, position })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchMode {
    Prefix,
    Exact,
}

impl MatchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchMode::Prefix => "prefix",
            MatchMode::Exact => "exact",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "prefix" => Some(MatchMode::Prefix),
            "exact" => Some(MatchMode::Exact),
            _ => None,
        }
    }
}

impl fmt::Display for MatchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const MIN_PREFIX_LEN: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyError {
    EmptyStem,
    ShortPrefix { stem: String },
    Whitespace { stem: String },
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::EmptyStem => f.write_str("keyword stem is empty"),
            FamilyError::ShortPrefix { stem } => write!(
                f,
                "prefix stem {stem:?} is shorter than {MIN_PREFIX_LEN} characters"
            ),
            FamilyError::Whitespace { stem } => write!(f, "keyword stem {stem:?} contains whitespace"),
        }
    }
}

impl core::error::Error for FamilyError {}

/// A stem standing in for every inflected form of one coded word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KeywordFamily {
    stem: String,
    mode: MatchMode,
}

impl KeywordFamily {
    pub fn new(stem: &str, mode: MatchMode) -> Result<Self, FamilyError> {
        let stem: String = stem.trim().chars().flat_map(char::to_lowercase).collect();
        if stem.is_empty() {
            return Err(FamilyError::EmptyStem);
        }
        if stem.chars().any(char::is_whitespace) {
            return Err(FamilyError::Whitespace { stem });
        }
        if mode == MatchMode::Prefix && stem.chars().count() < MIN_PREFIX_LEN {
            return Err(FamilyError::ShortPrefix { stem });
        }
        Ok(KeywordFamily { stem, mode })
    }

    pub fn stem(&self) -> &str {
        &self.stem
    }

    pub fn mode(&self) -> MatchMode {
        self.mode
    }

    pub fn matches(&self, surface: &str) -> bool {
        match self.mode {
            MatchMode::Exact => surface == self.stem,
            MatchMode::Prefix => surface.starts_with(self.stem.as_str()),
        }
    }
}

pub fn match_family(token: &Token, family: &KeywordFamily) -> bool {
    family.matches(&token.surface)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn surfaces(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    #[test]
    fn empty_text_has_no_tokens() {
        assert!(tokenize("").is_empty());
        assert!(tokenize(" ,.!? ").is_empty());
    }

    #[test]
    fn polish_sentence() {
        assert_eq!(
            tokenize("Szwedzka policja!"),
            vec![Token::new("szwedzka", 0), Token::new("policja", 1)]
        );
    }

    #[test]
    fn punctuation_inside_words_splits() {
        assert_eq!(surfaces(&tokenize("multi-kulti don't #Svpol")), ["multi", "kulti", "don", "t", "svpol"]);
    }

    #[test]
    fn diacritics_survive() {
        assert_eq!(surfaces(&tokenize("Używać ŁÓDŹ Göteborg")), ["używać", "łódź", "göteborg"]);
        // decomposed ą
        assert_eq!(surfaces(&tokenize("Sa\u{328}d")), ["sa\u{328}d"]);
    }

    #[test]
    fn stopword_removal_reindexes() {
        let stops = StopwordList::new(["a", "i"], None);
        let toks = tokenize("a kot i pies");
        assert_eq!(
            remove_stopwords(&toks, &stops),
            vec![Token::new("kot", 0), Token::new("pies", 1)]
        );
        assert_eq!(remove_stopwords(&toks, &StopwordList::empty()), toks);
        assert_eq!(content_tokens("a kot i pies", &stops), remove_stopwords(&toks, &stops));
    }

    #[test]
    fn stopwords_are_stored_lowercase() {
        let stops = StopwordList::new(["Oraz", " ", "I"], Some("pl".into()));
        assert!(stops.contains("oraz"));
        assert!(stops.contains("i"));
        assert_eq!(stops.len(), 2);
    }

    #[test]
    fn family_matching() {
        let swedes = KeywordFamily::new("szwedz", MatchMode::Prefix).unwrap();
        assert!(match_family(&Token::new("szwedzka", 0), &swedes));
        let police = KeywordFamily::new("policja", MatchMode::Exact).unwrap();
        assert!(match_family(&Token::new("policja", 0), &police));
        assert!(!match_family(&Token::new("policjanci", 0), &police));
        let prefix = KeywordFamily::new("policj", MatchMode::Prefix).unwrap();
        assert!(!match_family(&Token::new("polityka", 0), &prefix));
    }

    #[test]
    fn family_validation() {
        assert_eq!(KeywordFamily::new(" ", MatchMode::Exact), Err(FamilyError::EmptyStem));
        assert!(matches!(
            KeywordFamily::new("my", MatchMode::Prefix),
            Err(FamilyError::ShortPrefix { .. })
        ));
        assert!(KeywordFamily::new("my", MatchMode::Exact).is_ok());
        assert_eq!(KeywordFamily::new("Praca", MatchMode::Exact).unwrap().stem(), "praca");
    }
}
