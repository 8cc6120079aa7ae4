// SPDX-License-Identifier: Apache-2.0

//! Seeded synthetic corpora: accounts, a preferential-attachment follow
//! graph and a tweet stream that references it.

use std::collections::HashSet;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::distr::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{LogNormal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{AccountRecord, Category, FollowRecord, TweetRecord};

pub const TWEETS_FILE: &str = "tweets.jsonl";
pub const ACCOUNTS_FILE: &str = "accounts.jsonl";
pub const FOLLOWS_FILE: &str = "follows.jsonl";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CategoryMix {
    pub org: f64,
    pub jmb: f64,
    pub oi: f64,
    pub other: f64,
}

impl Default for CategoryMix {
    fn default() -> Self {
        CategoryMix {
            org: 0.15,
            jmb: 0.35,
            oi: 0.45,
            other: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub seed: u64,
    pub account_count: usize,
    pub category_mix: CategoryMix,
    /// Attachment weight is `(in_degree + 1) ^ exponent`; 0 is uniform.
    pub follow_attachment_exponent: f64,
    pub follow_edges_target: usize,
    pub tweets_per_account_mean: f64,
    pub mention_rate: f64,
    pub retweet_rate: f64,
    pub reply_rate: f64,
    pub url_rate: f64,
    pub hashtag: String,
    pub window_start: i64,
    pub window_end: i64,
}

impl Default for SynthConfig {
    /// The "athens-like" shape: 527 accounts, 1947 follow edges, one
    /// month of tweets.
    fn default() -> Self {
        SynthConfig {
            seed: 2011,
            account_count: 527,
            category_mix: CategoryMix::default(),
            follow_attachment_exponent: 1.0,
            follow_edges_target: 1947,
            tweets_per_account_mean: 3.0,
            mention_rate: 0.2,
            retweet_rate: 0.1,
            reply_rate: 0.01,
            url_rate: 0.43,
            hashtag: "athens".into(),
            // 2011-02-18 .. 2011-03-19 UTC
            window_start: 1_297_987_200,
            window_end: 1_300_492_800,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.account_count == 0 {
            return Err(Error::config("account_count", "must be at least 1"));
        }
        let mix = &self.category_mix;
        let parts = [mix.org, mix.jmb, mix.oi, mix.other];
        if parts.iter().any(|p| !(p.is_finite() && *p >= 0.0)) || ((parts.iter().sum::<f64>()) - 1.0).abs() > 1e-9 {
            return Err(Error::config(
                "category_mix",
                "fractions must be nonnegative and sum to 1",
            ));
        }
        if !(self.follow_attachment_exponent.is_finite() && self.follow_attachment_exponent >= 0.0) {
            return Err(Error::config("follow_attachment_exponent", "must be finite and >= 0"));
        }
        let n = self.account_count as u128;
        if self.follow_edges_target as u128 > n * (n - 1) {
            return Err(Error::config(
                "follow_edges_target",
                format!("at most {} edges fit on {} accounts", n * (n - 1), n),
            ));
        }
        if !(self.tweets_per_account_mean.is_finite() && self.tweets_per_account_mean > 0.0) {
            return Err(Error::config("tweets_per_account_mean", "must be > 0"));
        }
        for (field, p) in [
            ("mention_rate", self.mention_rate),
            ("retweet_rate", self.retweet_rate),
            ("reply_rate", self.reply_rate),
            ("url_rate", self.url_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(field, "must be a probability in [0, 1]"));
            }
        }
        let tag = self.hashtag.trim_start_matches('#');
        if tag.is_empty() || tag.chars().any(char::is_whitespace) {
            return Err(Error::config("hashtag", "must be a nonempty tag without whitespace"));
        }
        if self.window_start >= self.window_end {
            return Err(Error::config("window", "window_start must precede window_end"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    pub tweets: Vec<TweetRecord>,
    pub accounts: Vec<AccountRecord>,
    pub follows: Vec<(String, String)>,
}

const WORDS: [&str; 16] = [
    "acropolis",
    "concert",
    "metro",
    "news",
    "traffic",
    "sunny",
    "rain",
    "museum",
    "coffee",
    "strike",
    "market",
    "festival",
    "tonight",
    "square",
    "photo",
    "update",
];
const EXTRA_TAGS: [&str; 5] = ["greece", "news", "music", "travel", "food"];

/// Roulette selection over cumulative weights.
struct Attachment {
    exponent: f64,
    in_degree: Vec<usize>,
}

impl Attachment {
    fn weight(&self, v: usize) -> f64 {
        ((self.in_degree[v] + 1) as f64).powf(self.exponent)
    }

    fn cumulative(&self, upto: usize) -> Vec<f64> {
        let mut acc = 0.0;
        (0..upto)
            .map(|v| {
                acc += self.weight(v);
                acc
            })
            .collect()
    }

    fn pick(cumulative: &[f64], rng: &mut impl Rng) -> usize {
        let total = *cumulative.last().expect("nonempty candidate set");
        let x = rng.random::<f64>() * total;
        cumulative.partition_point(|&c| c <= x).min(cumulative.len() - 1)
    }
}

fn follow_graph(config: &SynthConfig, rng: &mut ChaCha8Rng) -> (Vec<(usize, usize)>, Vec<usize>) {
    let n = config.account_count;
    let target = config.follow_edges_target;
    let mut pa = Attachment {
        exponent: config.follow_attachment_exponent,
        in_degree: vec![0; n],
    };
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut edges = Vec::with_capacity(target);

    // Accounts arrive in id order; each newcomer follows earlier accounts.
    if n > 1 {
        for i in 1..n {
            let quota = (i * target / (n - 1) - (i - 1) * target / (n - 1)).min(i);
            if quota == 0 {
                continue;
            }
            let cumulative = pa.cumulative(i);
            let mut chosen = Vec::with_capacity(quota);
            while chosen.len() < quota {
                let j = Attachment::pick(&cumulative, rng);
                if !chosen.contains(&j) {
                    chosen.push(j);
                }
            }
            for j in chosen {
                seen.insert((i, j));
                edges.push((i, j));
                pa.in_degree[j] += 1;
            }
        }
    }

    // Early arrivals cannot fill their quota; top up with follows from
    // uniformly chosen accounts.
    while edges.len() < target {
        let cumulative = pa.cumulative(n);
        let follower = rng.random_range(0..n);
        let followed = Attachment::pick(&cumulative, rng);
        if follower != followed && seen.insert((follower, followed)) {
            edges.push((follower, followed));
            pa.in_degree[followed] += 1;
        }
    }
    (edges, pa.in_degree)
}

fn pick_category(mix: &CategoryMix, rng: &mut impl Rng) -> Category {
    let x: f64 = rng.random();
    let bounds = [
        (mix.org, Category::Org),
        (mix.jmb, Category::Jmb),
        (mix.oi, Category::Oi),
    ];
    let mut acc = 0.0;
    for (p, cat) in bounds {
        acc += p;
        if x < acc {
            return cat;
        }
    }
    Category::Other
}

/// Generates a corpus that is a pure function of `config`.
///
/// Mention, retweet and reply targets are drawn with weight
/// `in_degree + 1` so accounts without followers can still be named.
pub fn generate_corpus(config: &SynthConfig) -> Result<Corpus> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.account_count;
    let width = n.to_string().len().max(3);
    let ids: Vec<String> = (0..n).map(|i| format!("u{i:0width$}")).collect();

    let followers_dist = LogNormal::new(5.0, 1.5).expect("valid lognormal");
    let statuses_dist = LogNormal::new(7.0, 1.2).expect("valid lognormal");
    let accounts: Vec<AccountRecord> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| AccountRecord {
            account_id: id.clone(),
            screen_name: format!("user_{i}"),
            followers_count_global: followers_dist.sample(&mut rng) as u64,
            statuses_count_global: statuses_dist.sample(&mut rng) as u64,
            category: pick_category(&config.category_mix, &mut rng),
        })
        .collect();

    let (edges, in_degree) = follow_graph(config, &mut rng);
    let follows = edges
        .into_iter()
        .map(|(s, t)| (ids[s].clone(), ids[t].clone()))
        .collect();

    let popularity = Attachment {
        exponent: 1.0,
        in_degree,
    }
    .cumulative(n);
    let extra = config.tweets_per_account_mean - 1.0;
    let extra_tweets = (extra > 0.0).then(|| Poisson::new(extra).expect("positive rate"));
    let timestamps = Uniform::new(config.window_start, config.window_end).expect("valid window");
    let hashtag = config.hashtag.trim_start_matches('#').to_lowercase();

    let other_account = |author: usize, rng: &mut ChaCha8Rng| -> Option<String> {
        if n < 2 {
            return None;
        }
        loop {
            let j = Attachment::pick(&popularity, rng);
            if j != author {
                return Some(ids[j].clone());
            }
        }
    };

    let mut tweets = Vec::new();
    for (author, author_id) in ids.iter().enumerate() {
        let count = 1 + extra_tweets.as_ref().map_or(0, |d| d.sample(&mut rng) as usize);
        for _ in 0..count {
            let mut hashtags = vec![hashtag.clone()];
            if rng.random_bool(0.3) {
                let tag = EXTRA_TAGS[rng.random_range(0..EXTRA_TAGS.len())];
                if tag != hashtag {
                    hashtags.push(tag.to_owned());
                }
            }
            let words = rng.random_range(4..9);
            let mut text: Vec<String> = (0..words)
                .map(|_| WORDS[rng.random_range(0..WORDS.len())].to_owned())
                .collect();
            text.push(format!("#{hashtag}"));

            let mentions: Vec<String> = if rng.random_bool(config.mention_rate) {
                other_account(author, &mut rng).into_iter().collect()
            } else {
                Vec::new()
            };
            let retweet = if rng.random_bool(config.retweet_rate) {
                other_account(author, &mut rng)
            } else {
                None
            };
            let reply = if rng.random_bool(config.reply_rate) {
                other_account(author, &mut rng)
            } else {
                None
            };
            let url_count = if rng.random_bool(config.url_rate) {
                1 + u32::from(rng.random_bool(0.15))
            } else {
                0
            };
            for k in 0..url_count {
                text.push(format!("http://t.co/{}{k}", tweets.len()));
            }

            tweets.push(TweetRecord {
                tweet_id: format!("t{:07}", tweets.len()),
                author_id: author_id.clone(),
                timestamp: timestamps.sample(&mut rng),
                text: text.join(" "),
                hashtags,
                mentioned_account_ids: mentions,
                retweet_of_author_id: retweet,
                reply_to_author_id: reply,
                url_count,
            });
        }
    }

    Ok(Corpus {
        tweets,
        accounts,
        follows,
    })
}

fn write_lines<T: Serialize>(path: &Path, records: impl IntoIterator<Item = T>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for record in records {
        let line = serde_json::to_string(&record).expect("records serialize");
        writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

impl Corpus {
    /// Writes `tweets.jsonl`, `accounts.jsonl` and `follows.jsonl` into
    /// `dir`, creating it if needed.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_lines(&dir.join(TWEETS_FILE), &self.tweets)?;
        write_lines(&dir.join(ACCOUNTS_FILE), &self.accounts)?;
        write_lines(
            &dir.join(FOLLOWS_FILE),
            self.follows.iter().map(|(s, t)| FollowRecord {
                follower_id: s.clone(),
                followed_id: t.clone(),
            }),
        )
    }
}
