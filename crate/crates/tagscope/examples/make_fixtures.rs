//! Regenerates `fixtures/twitter.jsonl` and `fixtures/forum.jsonl`.
//!
//!     cargo run -p tagscope --example make_fixtures
//!
//! Output is fully determined by the seed. After writing, both files are
//! loaded back through the library and the planted counts are checked.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use tagscope::config::Config;
use tagscope::ingest::{format_timestamp, load_corpus, parse_timestamp, InputFormat};
use tagscope::{analysis, formats};
use tagscope_core::coding::pronoun_orientation;
use tagscope_core::ngram::{count_tag_pairs, count_tags, TagPair};
use tagscope_core::timeline::{classify_shape, cumulative_series, ShapeParams};

const SEED: u64 = 0x5eed_2013;
const DAYS: i64 = 62;
const WINDOW_START: &str = "2013-05-15";

const TOP_TAGS: [(&str, u64); 20] = [
    ("svpol", 3897),
    ("sthlmriots", 1319),
    ("migpol", 436),
    ("sthlmriot", 236),
    ("stockholm", 200),
    ("aftonbladet", 142),
    ("nymo", 124),
    ("rinkeby", 109),
    ("polisen", 108),
    ("sweden", 100),
    ("upplopp", 92),
    ("kista", 89),
    ("svtdebatt", 82),
    ("vpol", 80),
    ("debatt", 76),
    ("08pol", 75),
    ("expressentv", 72),
    ("megafonen", 71),
    ("kravaller", 70),
    ("tensta", 69),
];

/// Pairs with fixed weights; the fill step never adds to these.
const FIXED_PAIRS: [(&str, &str, u64); 6] = [
    ("sthlmriots", "svpol", 533),
    ("migpol", "svpol", 353),
    ("sthlmriot", "svpol", 107),
    ("migpol", "nymo", 50),
    ("svpol", "vpol", 47),
    ("migpol", "sthlmriots", 37),
];

/// Docs carrying all three of migpol, sthlmriots, svpol. Without them the
/// three migpol pairs alone would need more migpol docs than exist.
const TRIPLES: u64 = 10;
const OTHER_PAIR_CAP: u64 = 30;
const FILLER_TAGS: usize = 230;
const SINGLE_TAG_DOCS: usize = 2000;

const RIOT_TAGS: [&str; 10] = [
    "sthlmriots", "sthlmriot", "upplopp", "kravaller", "rinkeby", "kista", "tensta", "polisen", "08pol", "stockholm",
];

fn fixtures_dir() -> PathBuf {
    std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
}

fn pair_key(a: &str, b: &str) -> (String, String) {
    if a < b {
        (a.into(), b.into())
    } else {
        (b.into(), a.into())
    }
}

struct TagBuilder {
    remaining: BTreeMap<String, u64>,
    pairs: BTreeMap<(String, String), u64>,
    fixed: BTreeSet<(String, String)>,
    docs: Vec<Vec<String>>,
}

impl TagBuilder {
    fn allowed(&self, a: &str, b: &str) -> bool {
        let k = pair_key(a, b);
        a != b && !self.fixed.contains(&k) && self.pairs.get(&k).copied().unwrap_or(0) < OTHER_PAIR_CAP
    }

    fn fits(&self, doc: &[String], tag: &str) -> bool {
        doc.iter().all(|t| self.allowed(t, tag))
    }

    fn push(&mut self, doc: Vec<String>) {
        for (i, a) in doc.iter().enumerate() {
            *self.remaining.get_mut(a).expect("known tag") -= 1;
            for b in &doc[i + 1..] {
                *self.pairs.entry(pair_key(a, b)).or_default() += 1;
            }
        }
        self.docs.push(doc);
    }

    fn weighted(&self, rng: &mut ChaCha8Rng, candidates: &[(&String, u64)]) -> Option<String> {
        let total: u64 = candidates.iter().map(|c| c.1).sum();
        if total == 0 {
            return None;
        }
        let mut pick = rng.gen_range(0..total);
        for (t, w) in candidates {
            if pick < *w {
                return Some((*t).clone());
            }
            pick -= w;
        }
        unreachable!()
    }

    fn fill(&mut self, rng: &mut ChaCha8Rng) {
        let first_fill = self.docs.len();
        while let Some((anchor, _)) = self
            .remaining
            .iter()
            .filter(|(_, &r)| r > 0)
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(t, r)| (t.clone(), *r))
        {
            let candidates: Vec<(&String, u64)> = self
                .remaining
                .iter()
                .filter(|(t, &r)| r > 0 && self.allowed(&anchor, t))
                .map(|(t, &r)| (t, r))
                .collect();
            match self.weighted(rng, &candidates) {
                Some(partner) => {
                    let mut doc = vec![anchor.clone(), partner.clone()];
                    if rng.gen_bool(0.1) {
                        let third: Vec<(&String, u64)> = self
                            .remaining
                            .iter()
                            .filter(|(t, &r)| {
                                let need = if **t == anchor || **t == partner { 2 } else { 1 };
                                r >= need && self.fits(&doc, t)
                            })
                            .map(|(t, &r)| (t, r))
                            .collect();
                        if let Some(t) = self.weighted(rng, &third) {
                            doc.push(t);
                        }
                    }
                    self.push(doc);
                }
                None => {
                    // Nothing left to pair with: add the tag to an earlier doc.
                    let mut order: Vec<usize> = (first_fill..self.docs.len()).collect();
                    order.shuffle(rng);
                    let slot = order
                        .into_iter()
                        .find(|&i| self.fits(&self.docs[i], &anchor))
                        .expect("some earlier doc accepts the leftover tag");
                    let old = std::mem::take(&mut self.docs[slot]);
                    for t in &old {
                        *self.remaining.get_mut(t).unwrap() += 1;
                        // push() below re-adds the old pairs.
                    }
                    for (i, a) in old.iter().enumerate() {
                        for b in &old[i + 1..] {
                            *self.pairs.get_mut(&pair_key(a, b)).unwrap() -= 1;
                        }
                    }
                    let mut doc = old;
                    doc.push(anchor.clone());
                    self.push(doc);
                    self.docs.swap_remove(slot);
                }
            }
        }
    }
}

#[derive(Serialize)]
struct Record<'a> {
    id: String,
    ts: String,
    text: String,
    tags: Vec<String>,
    lang: &'a str,
    source: &'a str,
}

fn write_records(path: &Path, records: &[Record]) {
    let mut out = BufWriter::new(File::create(path).expect("create fixture"));
    for r in records {
        serde_json::to_writer(&mut out, r).unwrap();
        out.write_all(b"\n").unwrap();
    }
    out.flush().unwrap();
}

/// Index of the day with the fewest hits so far; ties go to a random one.
fn emptiest_day(counts: &[u64], rng: &mut ChaCha8Rng) -> usize {
    let min = *counts.iter().min().unwrap();
    let days: Vec<usize> = (0..counts.len()).filter(|&d| counts[d] == min).collect();
    *days.choose(rng).unwrap()
}

fn riot_day(rng: &mut ChaCha8Rng) -> usize {
    // Starts 2013-05-19, decays over roughly a week, gone by early June.
    let weights: Vec<f64> = (0..17).map(|i| (-(i as f64) / 4.0).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut x = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return 4 + i;
        }
        x -= w;
    }
    20
}

const TWEET_WORDS: [&str; 24] = [
    "i", "kväll", "bilar", "brinner", "igen", "polisen", "säger", "att", "läget", "är", "lugnt", "nu", "debatten",
    "om", "integration", "fortsätter", "vad", "händer", "i", "förorten", "regeringen", "måste", "agera", "idag",
];

fn tweet_text(rng: &mut ChaCha8Rng, tags: &[String]) -> String {
    let n = rng.gen_range(4..10);
    let mut words: Vec<String> = (0..n).map(|_| TWEET_WORDS.choose(rng).unwrap().to_string()).collect();
    words.extend(tags.iter().map(|t| format!("#{t}")));
    words.join(" ")
}

fn surface_tag(rng: &mut ChaCha8Rng, tag: &str) -> String {
    let mut s = if rng.gen_bool(0.15) {
        let mut c = tag.chars();
        c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
    } else {
        tag.to_string()
    };
    if rng.gen_bool(0.1) {
        s.insert(0, '#');
    }
    s
}

fn make_twitter(rng: &mut ChaCha8Rng) -> Vec<Record<'static>> {
    let mut remaining: BTreeMap<String, u64> = TOP_TAGS.iter().map(|(t, c)| (t.to_string(), *c)).collect();
    for i in 0..FILLER_TAGS {
        remaining.insert(format!("topic{i:03}"), rng.gen_range(25..=50));
    }
    let fixed = FIXED_PAIRS.iter().map(|(a, b, _)| pair_key(a, b)).collect();
    let mut b = TagBuilder {
        remaining,
        pairs: BTreeMap::new(),
        fixed,
        docs: Vec::new(),
    };
    let tags = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    for _ in 0..TRIPLES {
        b.push(tags(&["migpol", "sthlmriots", "svpol"]));
    }
    for (x, y, n) in FIXED_PAIRS {
        let already = if ["migpol", "sthlmriots", "svpol"].contains(&x) && ["migpol", "sthlmriots", "svpol"].contains(&y) {
            TRIPLES
        } else {
            0
        };
        for _ in 0..n - already {
            b.push(tags(&[x, y]));
        }
    }
    b.fill(rng);
    let mut docs = b.docs;
    docs.shuffle(rng);

    // Day assignment, most constrained docs first.
    let mut day: Vec<Option<usize>> = vec![None; docs.len()];
    let has = |d: &Vec<String>, t: &str| d.iter().any(|x| x == t);
    let mut nymo_step = 0;
    for (i, d) in docs.iter().enumerate() {
        if has(d, "svtdebatt") {
            day[i] = Some(rng.gen_range(19..=22));
        } else if has(d, "debatt") {
            day[i] = Some(rng.gen_range(18..=23));
        } else if has(d, "nymo") && !has(d, "migpol") && nymo_step < 60 {
            day[i] = Some(26);
            nymo_step += 1;
        } else if d.iter().any(|t| RIOT_TAGS.contains(&t.as_str())) {
            day[i] = Some(riot_day(rng));
        }
    }
    for tag in ["migpol", "svpol"] {
        let mut counts = vec![0u64; DAYS as usize];
        for (i, d) in docs.iter().enumerate() {
            if let (Some(x), true) = (day[i], has(d, tag)) {
                counts[x] += 1;
            }
        }
        for (i, d) in docs.iter().enumerate() {
            if day[i].is_none() && has(d, tag) {
                let x = emptiest_day(&counts, rng);
                counts[x] += 1;
                day[i] = Some(x);
            }
        }
    }

    let start = parse_timestamp(WINDOW_START).unwrap();
    let mut timed: Vec<(i64, Vec<String>)> = docs
        .into_iter()
        .zip(day)
        .map(|(d, x)| {
            let x = x.unwrap_or_else(|| rng.gen_range(0..DAYS as usize)) as i64;
            (start + x * 86_400 + rng.gen_range(0..86_400), d)
        })
        .collect();

    let all_tags: Vec<String> = TOP_TAGS
        .iter()
        .map(|(t, _)| t.to_string())
        .chain((0..FILLER_TAGS).map(|i| format!("topic{i:03}")))
        .collect();
    for i in 0..SINGLE_TAG_DOCS {
        let tag = all_tags.choose(rng).unwrap().clone();
        // Some single-tag docs repeat their tag in another spelling.
        let doc = if i % 100 == 0 {
            vec![tag.clone(), tag.to_uppercase()]
        } else {
            vec![tag]
        };
        timed.push((start + rng.gen_range(0..DAYS * 86_400), doc));
    }
    timed.sort_by_key(|(ts, _)| *ts);

    timed
        .into_iter()
        .enumerate()
        .map(|(i, (ts, doc))| {
            let text = tweet_text(rng, &doc);
            let tags = doc.iter().map(|t| surface_tag(rng, t)).collect();
            Record {
                id: format!("tw{:05}", i + 1),
                ts: format_timestamp(ts),
                text,
                tags,
                lang: "sv",
                source: "tweet",
            }
        })
        .collect()
}

const FORUM_POSTS: usize = 525;

/// Pronoun surfaces and how often each is planted.
const PRONOUNS: [(&str, usize); 11] = [
    ("im", 79),
    ("tym", 102),
    ("oni", 53),
    ("ci", 48),
    ("nich", 38),
    ("nam", 4),
    ("nasze", 1),
    ("nasz", 1),
    ("nasza", 0),
    ("my", 1),
    ("nas", 13),
];

/// One post each. Every 2-gram touching a police word is either one of
/// the six repeated ones or unique.
const POLICE_POSTS: [&str; 33] = [
    "Szwedzka policja reaguje za późno.",
    "Szwedzka policja czeka na rozkazy.",
    "Szwedzka policja stoi z boku.",
    "Szwedzka policja patrzy bezradnie.",
    "Szwedzka policja ucieka z Husby.",
    "Szwedzka policja przyjechała wieczorem.",
    "Szwedzka policja obserwuje sytuację.",
    "Szwedzka policja milczy.",
    "Szwedzka policja zawiodła mieszkańców.",
    "Szwedzka policja odpoczywa.",
    "Policja używa gazu.",
    "Policja używa pałek.",
    "Policja używa armatek wodnych.",
    "Granatniki, policjanci, gaz.",
    "Granatniki i policjanci przeciwko młodzieży.",
    "Jaka policja taki kraj.",
    "Jaka policja, takie porządki.",
    "Co mogła policja zrobić?",
    "Więcej mogła policja powiedzieć.",
    "Zaczęli mordować, policja spóźniona.",
    "Chcieli mordować, policja bezradna.",
    "Wczoraj policjanci zatrzymali chłopaka.",
    "Rzecznik policji przeprasza.",
    "Komendant policji podał się do dymisji.",
    "Trzech policjantów zostało rannych.",
    "Policję wezwano dopiero rano.",
    "Biedna policja pracuje bez przerwy.",
    "Dzielni policjanci gasili samochody.",
    "Szwedzcy policjanci rozmawiali spokojnie.",
    "Najlepiej opłacana policja w Unii.",
    "Zmęczeni policjanci wracali nad ranem.",
    "Mądra policja unika konfrontacji.",
    "Słaba policja zachęca chuliganów.",
];

const NEUTRAL: [&str; 60] = [
    "wczoraj", "ludzie", "człowiek", "sytuacja", "sprawa", "czas", "miasto", "wiadomości", "zdanie", "myślę",
    "wiem", "widać", "chcą", "mówią", "robią", "trudno", "źle", "nikt", "sens", "pytanie", "odpowiedź", "przykład",
    "prawda", "historia", "temat", "forum", "artykuł", "słyszałem", "czytałem", "uważam", "szkoda", "niestety",
    "oczywiście", "raczej", "chyba", "naprawdę", "głównie", "tydzień", "dni", "miesiąc", "rok", "wieczorem", "rano",
    "kolega", "znajomy", "sąsiad", "pomoc", "spokój", "strach", "złość", "wina", "winni", "kraj", "kraju",
    "miejsce", "życie", "dom", "domu", "świat", "gazety",
];

const TOPICAL: [&str; 119] = [
    "praca", "pracy", "pracować", "pracują", "pracownicy", "bogaci", "bogactwo", "pieniądze", "pieniędzy",
    "podatki", "podatków", "zarobki", "pensja", "pensje", "bezrobocie", "bezrobotni", "zasiłki", "zasiłek",
    "socjal", "socjalne", "bieda", "biedni", "rodzina", "rodziny", "rodzice", "islam", "islamu", "muzułmanie",
    "religia", "religii", "meczet", "edukacja", "szkoła", "szkoły", "uczyć", "nauka", "języka", "język",
    "mieszkania", "mieszkańcy", "dzielnica", "dzielnicy", "osiedle", "osiedla", "getto", "rząd", "rządu",
    "debata", "partia", "partii", "polityka", "politycy", "demokracja", "multikulti", "nadzieja", "tolerancja",
    "azyl", "azylu", "dostają", "przyjeżdżają", "rasista", "rasizm", "segregacja", "deportacja", "nienawiść",
    "naród", "narodowy", "sztokholm", "sztokholmie", "społeczeństwo", "imigranci", "imigrantów", "arabowie",
    "obcokrajowcy", "narody", "pochodzenia", "szwedzi", "szwedzkie", "szwedzki", "szwecja", "szwecji", "europa",
    "europie", "wojsko", "zabili", "rany", "ranni", "prowokacja", "kule", "broń", "strzelać", "gliny", "nóż",
    "prawo", "prawa", "praworządność", "rzezimieszki", "rzucali", "zamieszki", "zamieszek", "nocy", "ulice",
    "ulicach", "przemoc", "kamienie", "samochody", "bunt", "młodzież", "młodzieży", "protest", "wrażliwi",
    "pożary", "podpalili", "wandalizm", "agresja", "wojna", "media", "mediach", "problemy",
];

fn sentence(rng: &mut ChaCha8Rng) -> Vec<String> {
    let n = rng.gen_range(5..=11);
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.4) {
                TOPICAL.choose(rng).unwrap().to_string()
            } else {
                NEUTRAL.choose(rng).unwrap().to_string()
            }
        })
        .collect()
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

fn make_forum(rng: &mut ChaCha8Rng) -> Vec<Record<'static>> {
    let plain = FORUM_POSTS - POLICE_POSTS.len();
    let mut posts: Vec<Vec<Vec<String>>> = (0..plain)
        .map(|_| (0..rng.gen_range(1..=3)).map(|_| sentence(rng)).collect())
        .collect();
    let mut planted: Vec<&str> = PRONOUNS.iter().flat_map(|(p, n)| std::iter::repeat_n(*p, *n)).collect();
    planted.shuffle(rng);
    for p in planted {
        let post = rng.gen_range(0..posts.len());
        let s = rng.gen_range(0..posts[post].len());
        let at = rng.gen_range(0..=posts[post][s].len());
        posts[post][s].insert(at, p.to_string());
    }
    let mut texts: Vec<String> = posts
        .into_iter()
        .map(|sentences| {
            sentences
                .into_iter()
                .map(|words| format!("{}.", capitalize(&words.join(" "))))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    texts.extend(POLICE_POSTS.iter().map(|s| s.to_string()));
    texts.shuffle(rng);

    let start = parse_timestamp("2013-05-19").unwrap();
    let mut stamps: Vec<i64> = (0..texts.len()).map(|_| start + rng.gen_range(0..40 * 86_400)).collect();
    stamps.sort();
    texts
        .into_iter()
        .zip(stamps)
        .enumerate()
        .map(|(i, (text, ts))| Record {
            id: format!("p{:04}", i + 1),
            ts: format_timestamp(ts),
            text,
            tags: Vec::new(),
            lang: "pl",
            source: "forum_post",
        })
        .collect()
}

fn check_twitter(path: &Path) {
    let (corpus, report) = load_corpus(path, InputFormat::Jsonl, None).unwrap();
    let multi = corpus.filter_multi_tag(2);
    println!("twitter: {} records, {} with two or more tags", report.records_read, multi.len());
    let tags = count_tags(multi.documents());
    for (t, c) in TOP_TAGS {
        assert_eq!(tags.get(t), c, "tag {t}");
    }
    let top20: Vec<String> = tags.top_k(20).into_iter().map(|(t, _)| t).collect();
    let expected: Vec<String> = TOP_TAGS.iter().map(|(t, _)| t.to_string()).collect();
    assert_eq!(top20, expected);
    let pairs = count_tag_pairs(multi.documents());
    for (a, b, n) in FIXED_PAIRS {
        assert_eq!(pairs.get(&TagPair::new(a, b).unwrap()), n, "pair {a} {b}");
    }
    let others = pairs
        .iter()
        .filter(|(p, _)| !FIXED_PAIRS.iter().any(|(a, b, _)| p.contains(a) && p.contains(b)))
        .map(|(_, n)| n)
        .max()
        .unwrap();
    assert!(others <= OTHER_PAIR_CAP, "other pair weight {others}");
    let params = ShapeParams::default();
    for tag in ["svpol", "migpol", "sthlmriots", "nymo", "svtdebatt", "debatt"] {
        let s = cumulative_series(&multi, tag);
        let v = classify_shape(&s, &params);
        println!(
            "  {tag:<12} {:<8} r2={:.3} step={:.3} burst={:.3}",
            v.shape.as_str(),
            v.linearity_r2,
            v.max_step_fraction,
            v.burst_mass_fraction
        );
    }
}

fn check_forum(path: &Path) {
    let (corpus, _) = load_corpus(path, InputFormat::Jsonl, None).unwrap();
    assert_eq!(corpus.len(), FORUM_POSTS);
    let report = pronoun_orientation(corpus.documents(), &formats::default_pronouns());
    for (p, n) in PRONOUNS {
        assert_eq!(report.count(p), n as u64, "pronoun {p}");
    }
    let mut config = Config::default();
    config.forum = Some(tagscope::config::CorpusConfig::new(path));
    let power = analysis::sentiment(&config, &corpus).unwrap();
    let rows: Vec<(String, u64, i64)> = power.rows.iter().map(|r| (r.ngram.to_string(), r.frequency, r.power)).collect();
    println!("forum: {} posts, police 2-grams seen twice or more:", corpus.len());
    for r in &rows {
        println!("  {:<24} {:>3} {:>4}", r.0, r.1, r.2);
    }
    let expected = [
        ("szwedzka policja", 10, 0),
        ("policja używa", 3, 0),
        ("granatniki policjanci", 2, -2),
        ("jaka policja", 2, 0),
        ("mogła policja", 2, 0),
        ("mordować policja", 2, -6),
    ];
    let expected: Vec<(String, u64, i64)> = expected.iter().map(|(g, f, p)| (g.to_string(), *f, *p)).collect();
    assert_eq!(rows, expected);
}

fn main() {
    let dir = fixtures_dir();
    std::fs::create_dir_all(&dir).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let twitter = dir.join("twitter.jsonl");
    write_records(&twitter, &make_twitter(&mut rng));
    check_twitter(&twitter);
    let forum = dir.join("forum.jsonl");
    write_records(&forum, &make_forum(&mut rng));
    check_forum(&forum);
    println!("wrote {} and {}", twitter.display(), forum.display());
}
