//! Plain-text resource files: stopword lists, taxonomies, pronoun groups and
//! sentiment lexicons. All are UTF-8, tab-separated where there is more than
//! one field, with `#` comment lines and blank lines ignored.
//!
//! ```text
//! # taxonomy: category declarations, then families
//! @category   6       Politics
//! @category   6.1     Politics-multikulti
//! 6.1         toleranc    prefix
//!
//! # pronoun groups: group, label, surface
//! them        they    oni
//!
//! # lexicon: stem, polarity, boost 0..=4, mode
//! mordow      negative    3   prefix
//! ```

use std::fs;
use std::path::Path;

use tagscope_core::coding::{Category, CategoryId, FamilyEntry, PronounGroup, PronounGroups, PronounRow, Taxonomy};
use tagscope_core::sentiment::{LexiconEntry, Polarity, SentimentLexicon};
use tagscope_core::text::{KeywordFamily, MatchMode, StopwordList};

use crate::error::{Error, Result};

pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords_pl.txt");
pub const DEFAULT_TAXONOMY: &str = include_str!("../data/taxonomy_pl.tsv");
pub const DEFAULT_PRONOUNS: &str = include_str!("../data/pronouns_pl.tsv");
pub const DEFAULT_LEXICON: &str = include_str!("../data/lexicon_pl.tsv");

fn syntax(origin: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        path: origin.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
}

fn fields(line: &str) -> Vec<&str> {
    line.split('\t').map(str::trim).collect()
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(Error::read(path))
}

pub fn parse_stopwords(text: &str, language: Option<String>) -> StopwordList {
    StopwordList::new(content_lines(text).map(|(_, l)| l.trim()), language)
}

pub fn load_stopwords(path: &Path) -> Result<StopwordList> {
    Ok(parse_stopwords(&read_text(path)?, None))
}

pub fn default_stopwords() -> StopwordList {
    parse_stopwords(DEFAULT_STOPWORDS, Some("pl".into()))
}

fn parse_mode(origin: &Path, line: usize, s: &str) -> Result<MatchMode> {
    MatchMode::parse(s).ok_or_else(|| syntax(origin, line, format!("match mode must be `prefix` or `exact`, got {s:?}")))
}

pub fn parse_taxonomy(text: &str, origin: &Path) -> Result<Taxonomy> {
    let mut categories = Vec::new();
    let mut families = Vec::new();
    for (n, line) in content_lines(text) {
        let f = fields(line);
        if f[0] == "@category" {
            let [_, id, label] = f[..] else {
                return Err(syntax(origin, n, "expected `@category<TAB>id<TAB>label`"));
            };
            let id: CategoryId = id.parse().map_err(|e| syntax(origin, n, format!("{e}")))?;
            categories.push(Category {
                id,
                label: label.to_string(),
            });
            continue;
        }
        let [id, stem, mode] = f[..] else {
            return Err(syntax(origin, n, "expected `category_id<TAB>stem<TAB>mode`"));
        };
        let category: CategoryId = id.parse().map_err(|e| syntax(origin, n, format!("{e}")))?;
        let family = KeywordFamily::new(stem, parse_mode(origin, n, mode)?)
            .map_err(|e| syntax(origin, n, e.to_string()))?;
        families.push(FamilyEntry { family, category });
    }
    Taxonomy::new(categories, families).map_err(|source| Error::Taxonomy {
        path: origin.to_path_buf(),
        source,
    })
}

pub fn load_taxonomy(path: &Path) -> Result<Taxonomy> {
    parse_taxonomy(&read_text(path)?, path)
}

pub fn default_taxonomy() -> Taxonomy {
    parse_taxonomy(DEFAULT_TAXONOMY, Path::new("<builtin taxonomy_pl.tsv>")).expect("built-in taxonomy is valid")
}

/// Consecutive or repeated `(group, label)` lines merge into one row.
pub fn parse_pronouns(text: &str, origin: &Path) -> Result<PronounGroups> {
    let mut them: Vec<PronounRow> = Vec::new();
    let mut us: Vec<PronounRow> = Vec::new();
    for (n, line) in content_lines(text) {
        let [group, label, surface] = fields(line)[..] else {
            return Err(syntax(origin, n, "expected `group<TAB>label<TAB>surface`"));
        };
        let group = PronounGroup::parse(group)
            .ok_or_else(|| syntax(origin, n, format!("group must be `them` or `us`, got {group:?}")))?;
        let surface = surface.to_lowercase();
        if surface.is_empty() || surface.chars().any(char::is_whitespace) {
            return Err(syntax(origin, n, "pronoun surface must be a single word"));
        }
        let rows = match group {
            PronounGroup::Them => &mut them,
            PronounGroup::Us => &mut us,
        };
        match rows.iter_mut().find(|r| r.label == label) {
            Some(row) => row.surfaces.push(surface),
            None => rows.push(PronounRow {
                label: label.to_string(),
                surfaces: vec![surface],
            }),
        }
    }
    PronounGroups::new(them, us).map_err(|e| syntax(origin, 0, e.to_string()))
}

pub fn load_pronouns(path: &Path) -> Result<PronounGroups> {
    parse_pronouns(&read_text(path)?, path)
}

pub fn default_pronouns() -> PronounGroups {
    parse_pronouns(DEFAULT_PRONOUNS, Path::new("<builtin pronouns_pl.tsv>")).expect("built-in pronoun groups are valid")
}

pub fn parse_lexicon(text: &str, origin: &Path) -> Result<SentimentLexicon> {
    let mut lex = SentimentLexicon::new();
    for (n, line) in content_lines(text) {
        let [stem, polarity, boost, mode] = fields(line)[..] else {
            return Err(syntax(origin, n, "expected `stem<TAB>polarity<TAB>boost<TAB>mode`"));
        };
        let polarity = Polarity::parse(polarity)
            .ok_or_else(|| syntax(origin, n, format!("polarity must be `positive` or `negative`, got {polarity:?}")))?;
        let boost: u8 = boost
            .parse()
            .map_err(|_| syntax(origin, n, format!("boost must be an integer in 0..=4, got {boost:?}")))?;
        let mode = parse_mode(origin, n, mode)?;
        lex.insert(stem, LexiconEntry { polarity, boost, mode })
            .map_err(|e| syntax(origin, n, e.to_string()))?;
    }
    Ok(lex)
}

pub fn load_lexicon(path: &Path) -> Result<SentimentLexicon> {
    parse_lexicon(&read_text(path)?, path)
}

pub fn default_lexicon() -> SentimentLexicon {
    parse_lexicon(DEFAULT_LEXICON, Path::new("<builtin lexicon_pl.tsv>")).expect("built-in lexicon is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use tagscope_core::coding::TaxonomyError;

    const ORIGIN: &str = "test.tsv";

    #[test]
    fn default_taxonomy_shape() {
        let t = default_taxonomy();
        assert_eq!(t.top_level().count(), 10);
        assert_eq!(t.subcategories().count(), 14);
        let label = |id: &str| t.category(id.parse().unwrap()).unwrap().label.clone();
        assert_eq!(label("1.1"), "Employment");
        assert_eq!(label("8.1"), "Police-induce");
        assert_eq!(label("9.1"), "Riots-pro");
        assert_eq!(label("10"), "External fields");
    }

    #[test]
    fn duplicate_family_across_categories() {
        let text = "@category\t1\tWork\n@category\t2\tFamily\n1\tpraca\texact\n2\tpraca\texact\n";
        let err = parse_taxonomy(text, Path::new(ORIGIN)).unwrap_err();
        assert!(matches!(
            err,
            Error::Taxonomy {
                source: TaxonomyError::DuplicateFamily { .. },
                ..
            }
        ));
    }

    #[test]
    fn minimal_taxonomy() {
        let t = parse_taxonomy("@category\t3\tReligion\n3\tislam\tprefix\n", Path::new(ORIGIN)).unwrap();
        assert_eq!(t.categories().len(), 1);
        assert_eq!(t.families().len(), 1);
    }

    #[test]
    fn taxonomy_syntax_errors_carry_line() {
        let err = parse_taxonomy("# c\n@category\t1\tWork\n1\tprac\tfuzzy\n", Path::new(ORIGIN)).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }), "{err}");
        let err = parse_taxonomy("@category\t1\n", Path::new(ORIGIN)).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
        let err = parse_taxonomy("@category\t6.1\tx\n", Path::new(ORIGIN)).unwrap_err();
        assert!(matches!(err, Error::Taxonomy { source: TaxonomyError::OrphanSubcategory(_), .. }));
    }

    #[test]
    fn default_pronoun_groups() {
        let g = default_pronouns();
        let them: Vec<&str> = g.group(PronounGroup::Them).iter().flat_map(|r| r.surfaces.iter().map(String::as_str)).collect();
        assert_eq!(them, ["im", "tym", "oni", "ci", "nich"]);
        let ours = g.group(PronounGroup::Us).iter().find(|r| r.label == "ours/our").unwrap();
        assert_eq!(ours.surfaces, ["nasze", "nasz", "nasza"]);
    }

    #[test]
    fn lexicon_rows() {
        let lex = default_lexicon();
        assert_eq!(lex.len(), 2);
        let err = parse_lexicon("zły\tnegative\t7\texact\n", Path::new(ORIGIN)).unwrap_err();
        assert!(err.to_string().contains("outside"), "{err}");
        let err = parse_lexicon("zły\tbad\t1\texact\n", Path::new(ORIGIN)).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
    }

    #[test]
    fn stopword_file_comments() {
        let s = parse_stopwords("# polish\ni\n  oraz \n\n#x\n", None);
        assert_eq!(s.len(), 2);
        let d = default_stopwords();
        assert!(d.contains("się"));
        assert!(!d.contains("jaka"));
        assert!(!d.contains("mogła"));
        assert!(!d.contains("policja"));
    }
}
