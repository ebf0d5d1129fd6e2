//! Chunked counting over scoped threads. Every counter here is additive
//! over a partition of the documents, so results do not depend on `jobs`.

use std::thread;

use tagscope_core::corpus::Document;
use tagscope_core::ngram::{self, CountTable, TagPair, TokenPair};
use tagscope_core::text::{KeywordFamily, StopwordList};

fn chunked<K, F>(documents: &[Document], jobs: usize, count: F) -> CountTable<K>
where
    K: Ord + Send,
    F: Fn(&[Document]) -> CountTable<K> + Sync,
{
    let jobs = jobs.max(1);
    if jobs == 1 || documents.len() < 2 {
        return count(documents);
    }
    let size = documents.len().div_ceil(jobs);
    let count = &count;
    thread::scope(|s| {
        let handles: Vec<_> = documents.chunks(size).map(|chunk| s.spawn(move || count(chunk))).collect();
        let mut total = CountTable::new();
        for h in handles {
            total.merge(h.join().expect("counting thread panicked"));
        }
        total
    })
}

pub fn count_tags(documents: &[Document], jobs: usize) -> CountTable<String> {
    chunked(documents, jobs, ngram::count_tags)
}

pub fn count_tag_pairs(documents: &[Document], jobs: usize) -> CountTable<TagPair> {
    chunked(documents, jobs, ngram::count_tag_pairs)
}

pub fn count_token_2grams(
    documents: &[Document],
    stops: &StopwordList,
    filter: Option<&KeywordFamily>,
    jobs: usize,
) -> CountTable<TokenPair> {
    chunked(documents, jobs, |d| ngram::count_token_2grams(d, stops, filter))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tagscope_core::corpus::Source;

    fn doc(id: usize, tags: &[&str], text: &str) -> Document {
        Document {
            id: id.to_string(),
            timestamp: id as i64,
            text: text.into(),
            hashtags: tags.iter().map(|t| t.to_string()).collect(),
            lang: None,
            source: Source::Tweet,
        }
    }

    #[test]
    fn jobs_do_not_change_counts() {
        let docs: Vec<Document> = (0..23)
            .map(|i| doc(i, &[["a", "b", "c"][i % 3], ["b", "d"][i % 2]], "x y z y x"))
            .collect();
        let stops = StopwordList::empty();
        for jobs in [0, 1, 2, 3, 8, 64] {
            assert_eq!(count_tags(&docs, jobs), ngram::count_tags(&docs));
            assert_eq!(count_tag_pairs(&docs, jobs), ngram::count_tag_pairs(&docs));
            assert_eq!(
                count_token_2grams(&docs, &stops, None, jobs),
                ngram::count_token_2grams(&docs, &stops, None)
            );
        }
    }
}
