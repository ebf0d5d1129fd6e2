//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with `cargo test -p tagscope --test acceptance`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tagscope::config::{Config, CorpusConfig};
use tagscope::graph_io::parse_dot;
use tagscope::{analysis, formats, parallel};
use tagscope_core::coding::{code_vocabulary, rollup, CategoryId, CountMode};
use tagscope_core::corpus::{Document, Source};
use tagscope_core::ngram::{count_tags, TagPair, TokenPair};
use tagscope_core::sentiment::{score_str, LexiconEntry, Polarity, SentimentLexicon};
use tagscope_core::text::{MatchMode, StopwordList};
use tagscope_core::timeline::{classify_shape, cumulative_series, CumulativeSeries, Shape, ShapeParams};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn tagscope(args: &[&str]) -> Result<(String, Duration), String> {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_tagscope"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    if !out.status.success() {
        return Err(format!(
            "tagscope {args:?} exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok((String::from_utf8(out.stdout).map_err(|e| e.to_string())?, elapsed))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    csv::ReaderBuilder::new()
        .flexible(true)
        .from_reader(text.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .filter(|r: &Vec<String>| !r[0].starts_with('#'))
        .collect()
}

fn twitter() -> String {
    fixture("twitter.jsonl").to_string_lossy().into_owned()
}

fn forum() -> String {
    fixture("forum.jsonl").to_string_lossy().into_owned()
}

fn c1_tag_counts() -> Outcome {
    let (out, elapsed) = tagscope(&["tags", &twitter(), "--top", "20", "--format", "csv"])?;
    let rows = csv_rows(&out);
    check(rows.len() == 20, || format!("{} rows", rows.len()))?;
    let expected = [("svpol", "3897"), ("sthlmriots", "1319"), ("migpol", "436")];
    for (i, (tag, n)) in expected.iter().enumerate() {
        check(rows[i] == [*tag, *n], || format!("row {i}: {:?}", rows[i]))?;
    }
    check(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("svpol 3897, sthlmriots 1319, migpol 436 in {:.2}s", elapsed.as_secs_f64()))
}

const PAIRS: [(&str, &str, u64); 6] = [
    ("sthlmriots", "svpol", 533),
    ("migpol", "svpol", 353),
    ("sthlmriot", "svpol", 107),
    ("migpol", "nymo", 50),
    ("svpol", "vpol", 47),
    ("migpol", "sthlmriots", 37),
];

fn c2_pairs_and_graph() -> Outcome {
    let (out, _) = tagscope(&["pairs", &twitter(), "--top", "6", "--format", "csv"])?;
    let rows = csv_rows(&out);
    for (row, (a, b, n)) in rows.iter().zip(PAIRS) {
        check(*row == [a.to_string(), b.to_string(), n.to_string()], || format!("pair row {row:?}"))?;
    }
    check(rows.len() == 6, || format!("{} pair rows", rows.len()))?;
    let edges = |threshold: &str| -> Result<BTreeMap<TagPair, u64>, String> {
        let (dot, _) = tagscope(&["graph", &twitter(), "--threshold", threshold, "--format", "dot"])?;
        Ok(parse_dot(&dot).map_err(|e| e.to_string())?.graph.edges().clone())
    };
    let at2 = edges("2")?;
    let at38 = edges("38")?;
    for (i, (a, b, n)) in PAIRS.iter().enumerate() {
        let p = TagPair::new(*a, *b).unwrap();
        check(at2.get(&p) == Some(n), || format!("threshold 2 lost {p}"))?;
        let kept = at38.contains_key(&p);
        check(kept == (i < 5), || format!("threshold 38: {p} kept={kept}"))?;
    }
    Ok(format!("six pairs exact; {} edges at threshold 2, {} at 38", at2.len(), at38.len()))
}

const VOCAB: [&str; 12] = ["Policja", "i", "svpol", "w", "Riot", "kraj", "na", "dom", "ÅR", "z", "noc", "ulica"];
const SEPARATORS: [&str; 5] = [" ", ", ", "! ", " - ", "\n"];
const TAG_POOL: [&str; 9] = ["svpol", "migpol", "sthlmriots", "nymo", "vpol", "a", "b", "c", "d"];
const STOPS: [&str; 4] = ["i", "w", "na", "z"];

fn random_corpus(rng: &mut ChaCha8Rng) -> Vec<Document> {
    let n = rng.gen_range(0..=50);
    (0..n)
        .map(|i| {
            let k = rng.gen_range(0..=6);
            let hashtags = (0..k).map(|_| TAG_POOL.choose(rng).unwrap().to_string()).collect();
            let words = rng.gen_range(0..15);
            let mut text = String::new();
            for _ in 0..words {
                text.push_str(VOCAB.choose(rng).unwrap());
                text.push_str(SEPARATORS.choose(rng).unwrap());
            }
            Document {
                id: format!("r{i}"),
                timestamp: i as i64,
                text,
                hashtags,
                lang: None,
                source: Source::Tweet,
            }
        })
        .collect()
}

fn naive_tags(docs: &[Document]) -> BTreeMap<String, u64> {
    let mut m = BTreeMap::new();
    for d in docs {
        let mut seen: Vec<&String> = Vec::new();
        for t in &d.hashtags {
            if !seen.contains(&t) {
                seen.push(t);
                *m.entry(t.clone()).or_insert(0) += 1;
            }
        }
    }
    m
}

fn naive_pairs(docs: &[Document]) -> BTreeMap<(String, String), u64> {
    let mut m = BTreeMap::new();
    for d in docs {
        let mut tags = d.hashtags.clone();
        tags.sort();
        tags.dedup();
        for i in 0..tags.len() {
            for j in i + 1..tags.len() {
                *m.entry((tags[i].clone(), tags[j].clone())).or_insert(0) += 1;
            }
        }
    }
    m
}

fn naive_2grams(docs: &[Document]) -> BTreeMap<(String, String), u64> {
    let mut m = BTreeMap::new();
    for d in docs {
        let mut words = Vec::new();
        let mut cur = String::new();
        for c in d.text.chars() {
            if c.is_alphanumeric() {
                cur.extend(c.to_lowercase());
            } else if !cur.is_empty() {
                words.push(std::mem::take(&mut cur));
            }
        }
        if !cur.is_empty() {
            words.push(cur);
        }
        words.retain(|w| !STOPS.contains(&w.as_str()));
        for w in words.windows(2) {
            *m.entry((w[0].clone(), w[1].clone())).or_insert(0) += 1;
        }
    }
    m
}

fn c3_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let stops = StopwordList::new(STOPS, None);
    for case in 0..100 {
        let docs = random_corpus(&mut rng);
        let tags = naive_tags(&docs);
        let pairs = naive_pairs(&docs);
        let grams = naive_2grams(&docs);
        for jobs in [1, 2, 8] {
            let t: BTreeMap<String, u64> = parallel::count_tags(&docs, jobs).iter().map(|(k, v)| (k.clone(), v)).collect();
            check(t == tags, || format!("case {case} jobs {jobs}: tag counts differ"))?;
            let p: BTreeMap<(String, String), u64> = parallel::count_tag_pairs(&docs, jobs)
                .iter()
                .map(|(k, v)| ((k.a().to_string(), k.b().to_string()), v))
                .collect();
            check(p == pairs, || format!("case {case} jobs {jobs}: pair counts differ"))?;
            let g: BTreeMap<(String, String), u64> = parallel::count_token_2grams(&docs, &stops, None, jobs)
                .iter()
                .map(|(k, v): (&TokenPair, u64)| ((k.first.clone(), k.second.clone()), v))
                .collect();
            check(g == grams, || format!("case {case} jobs {jobs}: 2-gram counts differ"))?;
        }
    }
    Ok("100 corpora x jobs {1,2,8}: tags, pairs, 2-grams match brute force".into())
}

fn c4_timeline() -> Outcome {
    let config = Config {
        twitter: Some(CorpusConfig::new(twitter())),
        ..Config::default()
    };
    let (corpus, _) = analysis::load_twitter(&config).map_err(|e| e.to_string())?;
    let counts = count_tags(corpus.documents());
    for (tag, n) in counts.iter() {
        let s = cumulative_series(&corpus, tag);
        check(s.final_count() == n, || format!("{tag}: endpoint {} != {n}", s.final_count()))?;
    }
    let params = ShapeParams::default();
    let linear = classify_shape(&CumulativeSeries::from_increments("u", 0, &[7; 60]), &params);
    check(linear.shape == Shape::Linear && linear.linearity_r2 >= 0.95, || format!("uniform: {linear:?}"))?;
    let mut step = vec![0u64; 60];
    step[30] = 100;
    let stepwise = classify_shape(&CumulativeSeries::from_increments("s", 0, &step), &params);
    check(stepwise.shape == Shape::Stepwise, || format!("single day: {stepwise:?}"))?;
    let mut burst = vec![0u64; 60];
    burst[20..24].copy_from_slice(&[20, 21, 21, 20]);
    check(burst.iter().sum::<u64>() == 82, || "burst series must hold 82 events".into())?;
    let b = classify_shape(&CumulativeSeries::from_increments("b", 0, &burst), &params);
    check(b.shape == Shape::Burst, || format!("4-day burst: {b:?}"))?;
    Ok(format!(
        "{} tag endpoints equal counts; linear r2={:.3}, stepwise, burst",
        counts.len(),
        linear.linearity_r2
    ))
}

fn c5_pronouns() -> Outcome {
    let (out, _) = tagscope(&["pronouns", &forum(), "--format", "csv"])?;
    let counts: BTreeMap<String, u64> = csv_rows(&out).into_iter().map(|r| (r[2].clone(), r[3].parse().unwrap())).collect();
    for (p, n) in [("im", 79), ("oni", 53), ("nich", 38), ("nam", 4), ("nas", 13), ("my", 1)] {
        check(counts.get(p) == Some(&n), || format!("{p}: {:?}", counts.get(p)))?;
    }
    let ratio_line = out.lines().find(|l| l.starts_with("# them_us_ratio")).ok_or("no ratio row")?;
    let ratio: f64 = ratio_line.split(',').nth(1).unwrap().parse().map_err(|_| ratio_line.to_string())?;
    check(ratio > 1.0, || format!("ratio {ratio}"))?;
    Ok(format!("im 79, oni 53, nich 38, nam 4, nas 13, my 1; them/us = {ratio}"))
}

fn c6_coding() -> Outcome {
    let taxonomy = formats::default_taxonomy();
    let stops = formats::default_stopwords();
    let top = taxonomy.top_level().count();
    let sub = taxonomy.subcategories().count();
    check(top == 10 && sub == 14, || format!("{top} categories, {sub} subcategories"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (forum_corpus, _) = tagscope::ingest::load_corpus(Path::new(&forum()), Default::default(), None)
        .map_err(|e| e.to_string())?;
    let mut corpora = vec![forum_corpus.documents().to_vec()];
    let words: Vec<&str> = formats::DEFAULT_TAXONOMY
        .lines()
        .filter_map(|l| l.split('\t').nth(1))
        .chain(["ludzie", "dom", "i", "się", "szwedzkiej", "pracownik"])
        .collect();
    for _ in 0..50 {
        let docs = (0..rng.gen_range(0..20))
            .map(|i| Document {
                id: i.to_string(),
                timestamp: 0,
                text: (0..rng.gen_range(0..12)).map(|_| *words.choose(&mut rng).unwrap()).collect::<Vec<_>>().join(" "),
                hashtags: Vec::new(),
                lang: None,
                source: Source::ForumPost,
            })
            .collect();
        corpora.push(docs);
    }
    for docs in &corpora {
        for mode in [CountMode::UniqueWords, CountMode::Occurrences] {
            let r = code_vocabulary(docs, &taxonomy, &stops, 1, mode);
            check(r.categorized() + r.uncategorized.len() == r.vocabulary_size, || {
                format!("{} + {} != {}", r.categorized(), r.uncategorized.len(), r.vocabulary_size)
            })?;
        }
    }

    let (small, _) = tagscope::ingest::load_corpus(&fixture("coding20.jsonl"), Default::default(), None)
        .map_err(|e| e.to_string())?;
    let result = code_vocabulary(small.documents(), &taxonomy, &stops, 1, CountMode::UniqueWords);
    check(result.vocabulary_size == 20, || format!("vocabulary {}", result.vocabulary_size))?;
    let rolled = rollup(&result, &taxonomy);
    let golden = std::fs::read_to_string(fixture("coding20_golden.tsv")).map_err(|e| e.to_string())?;
    for line in golden.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let f: Vec<&str> = line.split('\t').collect();
        let id: CategoryId = f[0].parse().map_err(|_| line.to_string())?;
        let unique: usize = f[1].parse().unwrap();
        let total: u64 = f[2].parse().unwrap();
        let got_unique = result.per_category.get(&id).map_or(0, |t| t.unique_words.len());
        check(got_unique == unique, || format!("{id}: unique {got_unique} != {unique}"))?;
        check(rolled.get(&id).copied().unwrap_or(0) == total, || format!("{id}: rolled {:?} != {total}", rolled.get(&id)))?;
    }
    Ok(format!("conservation on {} corpora; 10/14 categories; 20-word rollup matches", corpora.len()))
}

fn c7_power() -> Outcome {
    let (out, _) = tagscope(&["sentiment", &forum(), "--format", "csv"])?;
    let rows = csv_rows(&out);
    let expected = [
        ("szwedzka policja", 0),
        ("policja używa", 0),
        ("granatniki policjanci", -2),
        ("jaka policja", 0),
        ("mogła policja", 0),
        ("mordować policja", -6),
    ];
    check(rows.len() == expected.len(), || format!("{} rows: {rows:?}", rows.len()))?;
    for (row, (gram, power)) in rows.iter().zip(expected) {
        let freq: i64 = row[1].parse().unwrap();
        let strength: i64 = row[2].parse().unwrap();
        check(row[0] == gram && row[3] == power.to_string(), || format!("row {row:?}"))?;
        check(freq * strength == power, || format!("{gram}: {freq} x {strength} != {power}"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let stems = ["zł", "dobr", "mordow", "granatnik", "spok", "policj", "kocha", "nienawi"];
    let mut worst = (0i8, 0i8);
    for i in 0..1000 {
        let mut lex = SentimentLexicon::new();
        for stem in stems {
            if !rng.gen_bool(0.6) {
                continue;
            }
            let entry = LexiconEntry {
                polarity: if rng.gen_bool(0.5) { Polarity::Positive } else { Polarity::Negative },
                boost: rng.gen_range(0..=4),
                mode: if rng.gen_bool(0.5) { MatchMode::Prefix } else { MatchMode::Exact },
            };
            lex.insert(stem, entry).map_err(|e| e.to_string())?;
        }
        let text: Vec<String> = (0..rng.gen_range(0..10))
            .map(|_| format!("{}{}", stems.choose(&mut rng).unwrap(), ["", "a", "ować", "y"].choose(&mut rng).unwrap()))
            .collect();
        let s = score_str(&text.join(" "), &lex);
        worst = (worst.0.min(s), worst.1.max(s));
        check((-4..=4).contains(&s), || format!("case {i}: strength {s}"))?;
    }
    Ok(format!(
        "powers 0,0,-2,0,0,-6; 1000 random scores within [{}, {}]",
        worst.0, worst.1
    ))
}

fn c8_determinism() -> Outcome {
    let config = fixture("run.toml").to_string_lossy().into_owned();
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (m1, _) = tagscope(&["run", "--config", &config, "--jobs", "1", "--out", a.path().to_str().unwrap()])?;
    let (m8, _) = tagscope(&["run", "--config", &config, "--jobs", "8", "--out", b.path().to_str().unwrap()])?;
    check(m1 == m8, || "manifests differ".into())?;
    let files = |dir: &Path| -> Result<Vec<(String, Vec<u8>)>, String> {
        let mut all = Vec::new();
        for run in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
            let run = run.map_err(|e| e.to_string())?.path();
            for (name, bytes) in tagscope::pipeline::read_run(&run).map_err(|e| e.to_string())? {
                all.push((format!("{}/{name}", run.file_name().unwrap().to_string_lossy()), bytes));
            }
        }
        all.sort();
        Ok(all)
    };
    let fa = files(a.path())?;
    let fb = files(b.path())?;
    check(fa == fb, || "artifacts differ".into())?;
    let names: BTreeSet<&str> = fa.iter().map(|(n, _)| n.as_str()).collect();
    Ok(format!("{} files byte-identical across --jobs 1 and 8", names.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 tag counts", c1_tag_counts),
        ("2 pair counts and graph threshold", c2_pairs_and_graph),
        ("3 oracle equivalence", c3_oracle_equivalence),
        ("4 timeline invariant and shapes", c4_timeline),
        ("5 pronoun counts", c5_pronouns),
        ("6 coding conservation and rollup", c6_coding),
        ("7 sentiment power", c7_power),
        ("8 run determinism", c8_determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

