// SPDX-License-Identifier: Apache-2.0

//! Corpus records, line-delimited JSON parsing, hashtag filtering and
//! construction of the follow / mention / reply networks.
//!
//! All three input files are JSON Lines: one object per line, blank lines
//! ignored. Field names are documented in `docs/schema.md`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, GraphBuilder};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub tweet_id: String,
    pub author_id: String,
    pub timestamp: i64,
    #[serde(default)]
    pub text: String,
    #[serde(default)]
    pub hashtags: Vec<String>,
    #[serde(default, rename = "mentions")]
    pub mentioned_account_ids: Vec<String>,
    #[serde(default, rename = "retweet_of")]
    pub retweet_of_author_id: Option<String>,
    #[serde(default, rename = "reply_to")]
    pub reply_to_author_id: Option<String>,
    #[serde(default, rename = "urls")]
    pub url_count: u32,
}

impl TweetRecord {
    /// Lowercases hashtags, strips a leading `#` and checks the record
    /// invariants.
    fn normalize(mut self) -> std::result::Result<Self, String> {
        if self.tweet_id.is_empty() {
            return Err("empty tweet_id".into());
        }
        if self.author_id.is_empty() {
            return Err("empty author_id".into());
        }
        for tag in &mut self.hashtags {
            let lowered = tag.trim_start_matches('#').to_lowercase();
            if lowered.is_empty() || lowered.chars().any(char::is_whitespace) {
                return Err(format!("invalid hashtag {tag:?}"));
            }
            *tag = lowered;
        }
        if self.mentioned_account_ids.iter().any(String::is_empty) {
            return Err("empty mention target".into());
        }
        if matches!(self.retweet_of_author_id.as_deref(), Some("")) {
            return Err("empty retweet_of".into());
        }
        if matches!(self.reply_to_author_id.as_deref(), Some("")) {
            return Err("empty reply_to".into());
        }
        Ok(self)
    }
}

/// Account type labels used for the centrality-elite tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Category {
    Org,
    Jmb,
    Oi,
    Other,
    #[default]
    Unlabeled,
}

impl Category {
    pub const LABELED: [Category; 4] = [Category::Org, Category::Jmb, Category::Oi, Category::Other];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Org => "ORG",
            Category::Jmb => "JMB",
            Category::Oi => "OI",
            Category::Other => "OTHER",
            Category::Unlabeled => "UNLABELED",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountRecord {
    pub account_id: String,
    #[serde(default)]
    pub screen_name: String,
    #[serde(default, rename = "followers")]
    pub followers_count_global: u64,
    #[serde(default, rename = "statuses")]
    pub statuses_count_global: u64,
    #[serde(default)]
    pub category: Category,
}

impl AccountRecord {
    pub fn placeholder(account_id: &str) -> Self {
        AccountRecord {
            account_id: account_id.to_owned(),
            screen_name: String::new(),
            followers_count_global: 0,
            statuses_count_global: 0,
            category: Category::Unlabeled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FollowRecord {
    pub follower_id: String,
    pub followed_id: String,
}

/// Hashtag query with keyword exclusions and a manual exclusion list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterQuery {
    pub include_hashtag: String,
    #[serde(default)]
    pub exclude_terms: Vec<String>,
    #[serde(default)]
    pub exclude_tweet_ids: BTreeSet<String>,
    /// Inclusive.
    pub window_start: i64,
    /// Exclusive.
    pub window_end: i64,
}

impl FilterQuery {
    pub fn new(include_hashtag: &str, window_start: i64, window_end: i64) -> Self {
        FilterQuery {
            include_hashtag: include_hashtag.to_owned(),
            exclude_terms: Vec::new(),
            exclude_tweet_ids: BTreeSet::new(),
            window_start,
            window_end,
        }
    }

    pub fn excluding<I, S>(mut self, terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.exclude_terms
            .extend(terms.into_iter().map(|t| t.as_ref().to_owned()));
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.include_hashtag.trim_start_matches('#').is_empty() {
            return Err(Error::config("include_hashtag", "must be nonempty"));
        }
        if self.window_start >= self.window_end {
            return Err(Error::config(
                "window",
                format!(
                    "window_start ({}) must precede window_end ({})",
                    self.window_start, self.window_end
                ),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationKind {
    /// Follows.
    F,
    /// Mentions and retweets.
    M,
    /// Replies.
    R,
}

impl RelationKind {
    pub const ALL: [RelationKind; 3] = [RelationKind::F, RelationKind::M, RelationKind::R];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationKind::F => "F",
            RelationKind::M => "M",
            RelationKind::R => "R",
        }
    }
}

impl FromStr for RelationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "F" => Ok(RelationKind::F),
            "M" => Ok(RelationKind::M),
            "R" => Ok(RelationKind::R),
            other => Err(Error::Usage(format!("unknown relation layer {other:?}"))),
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The three relationship layers over a shared account registry.
#[derive(Debug, Clone)]
pub struct LayeredNetwork {
    /// Sorted ids of accounts that authored at least one retained tweet.
    pub core_tweeters: Vec<String>,
    pub layers: BTreeMap<RelationKind, DirectedGraph>,
    /// Attribute record for every node appearing in any layer.
    pub attributes: BTreeMap<String, AccountRecord>,
}

impl LayeredNetwork {
    pub fn layer(&self, kind: RelationKind) -> &DirectedGraph {
        &self.layers[&kind]
    }

    pub fn is_core(&self, id: &str) -> bool {
        self.core_tweeters
            .binary_search_by(|probe| probe.as_str().cmp(id))
            .is_ok()
    }
}

/// Rows dropped while reading the support files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowWarning {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct SupportData {
    pub accounts: Vec<AccountRecord>,
    pub follows: Vec<(String, String)>,
    pub warnings: Vec<RowWarning>,
}

fn for_each_record<R, T, F>(reader: R, mut sink: F) -> Result<()>
where
    R: BufRead,
    T: serde::de::DeserializeOwned,
    F: FnMut(usize, T) -> Result<()>,
{
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: T = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        sink(line_no, record)?;
    }
    Ok(())
}

/// Reads a tweets file. Records come back in file order.
pub fn parse_tweet_stream<R: BufRead>(reader: R) -> Result<Vec<TweetRecord>> {
    let mut seen = HashSet::new();
    let mut tweets = Vec::new();
    for_each_record(reader, |line, record: TweetRecord| {
        let record = record.normalize().map_err(|message| Error::Parse { line, message })?;
        if !seen.insert(record.tweet_id.clone()) {
            return Err(Error::DuplicateKey {
                line,
                key: record.tweet_id,
            });
        }
        tweets.push(record);
        Ok(())
    })?;
    Ok(tweets)
}

/// Reads the accounts and follows files.
///
/// Later account records replace earlier ones with the same id (the
/// first occurrence keeps its position). Exact duplicate follow rows are
/// dropped silently; self-follows are dropped with a warning.
pub fn parse_support_files<A: BufRead, F: BufRead>(accounts: A, follows: F) -> Result<SupportData> {
    let mut data = SupportData::default();

    let mut position: BTreeMap<String, usize> = BTreeMap::new();
    for_each_record(accounts, |line, record: AccountRecord| {
        if record.account_id.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty account_id".into(),
            });
        }
        match position.get(&record.account_id) {
            Some(&at) => data.accounts[at] = record,
            None => {
                position.insert(record.account_id.clone(), data.accounts.len());
                data.accounts.push(record);
            }
        }
        Ok(())
    })?;

    let mut seen = HashSet::new();
    for_each_record(follows, |line, row: FollowRecord| {
        if row.follower_id.is_empty() || row.followed_id.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty follow endpoint".into(),
            });
        }
        if row.follower_id == row.followed_id {
            data.warnings.push(RowWarning {
                line,
                message: format!("self-follow by {:?} dropped", row.follower_id),
            });
            return Ok(());
        }
        let pair = (row.follower_id, row.followed_id);
        if seen.insert(pair.clone()) {
            data.follows.push(pair);
        }
        Ok(())
    })?;

    Ok(data)
}

/// Reads a manual exclusion list: one tweet id per line, `#` comments
/// and blank lines ignored.
pub fn parse_exclusion_list<R: BufRead>(reader: R) -> Result<BTreeSet<String>> {
    let mut ids = BTreeSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        let id = line.trim();
        if id.is_empty() || id.starts_with('#') {
            continue;
        }
        ids.insert(id.to_owned());
    }
    Ok(ids)
}

fn mentions_excluded_term(tweet: &TweetRecord, terms: &[String]) -> bool {
    if terms.is_empty() {
        return false;
    }
    let hit = |candidate: &str| terms.iter().any(|t| t == candidate);
    if tweet.hashtags.iter().any(|h| hit(h)) {
        return true;
    }
    tweet.text.split_whitespace().any(|token| {
        let token = token.to_lowercase();
        hit(&token) || hit(token.trim_start_matches('#'))
    })
}

/// Keeps tweets that carry the include hashtag, fall inside the window,
/// are not manually excluded and contain none of the exclusion keywords
/// (as hashtags or whitespace-delimited text tokens, case-insensitive).
pub fn filter_corpus(tweets: &[TweetRecord], query: &FilterQuery) -> Vec<TweetRecord> {
    let include = query.include_hashtag.trim_start_matches('#').to_lowercase();
    let terms: Vec<String> = query
        .exclude_terms
        .iter()
        .map(|t| t.trim_start_matches('#').to_lowercase())
        .filter(|t| !t.is_empty())
        .collect();

    tweets
        .iter()
        .filter(|t| t.hashtags.contains(&include))
        .filter(|t| t.timestamp >= query.window_start && t.timestamp < query.window_end)
        .filter(|t| !query.exclude_tweet_ids.contains(&t.tweet_id))
        .filter(|t| !mentions_excluded_term(t, &terms))
        .cloned()
        .collect()
}

/// Builds the F, M and R layers from filtered tweets.
///
/// F keeps follow pairs between core tweeters only and registers every
/// core tweeter as a node. M (mentions and retweets merged) and R keep
/// edges to targets outside the tweeter set; their node sets are the
/// edge endpoints. Multiplicity and self-references are discarded.
pub fn build_layered_network(
    tweets: &[TweetRecord],
    accounts: &[AccountRecord],
    follow_pairs: &[(String, String)],
) -> LayeredNetwork {
    let core: BTreeSet<&str> = tweets.iter().map(|t| t.author_id.as_str()).collect();

    let mut f_edges: BTreeSet<(&str, &str)> = BTreeSet::new();
    for (follower, followed) in follow_pairs {
        if follower != followed && core.contains(follower.as_str()) && core.contains(followed.as_str()) {
            f_edges.insert((follower, followed));
        }
    }

    let mut m_edges: BTreeSet<(&str, &str)> = BTreeSet::new();
    let mut r_edges: BTreeSet<(&str, &str)> = BTreeSet::new();
    for tweet in tweets {
        let author = tweet.author_id.as_str();
        let mention_targets = tweet
            .mentioned_account_ids
            .iter()
            .map(String::as_str)
            .chain(tweet.retweet_of_author_id.as_deref());
        for target in mention_targets {
            if target != author {
                m_edges.insert((author, target));
            }
        }
        if let Some(target) = tweet.reply_to_author_id.as_deref() {
            if target != author {
                r_edges.insert((author, target));
            }
        }
    }

    let layer_from = |nodes: &mut dyn Iterator<Item = &str>, edges: &BTreeSet<(&str, &str)>| {
        let mut builder = GraphBuilder::new();
        for node in nodes {
            builder.add_node(node);
        }
        let mut incident: BTreeSet<&str> = BTreeSet::new();
        for &(s, t) in edges {
            incident.insert(s);
            incident.insert(t);
        }
        for node in incident {
            builder.add_node(node);
        }
        for &(s, t) in edges {
            builder.add_edge(s, t).expect("self-references were filtered out");
        }
        builder.build()
    };

    let mut layers = BTreeMap::new();
    layers.insert(RelationKind::F, layer_from(&mut core.iter().copied(), &f_edges));
    layers.insert(RelationKind::M, layer_from(&mut std::iter::empty(), &m_edges));
    layers.insert(RelationKind::R, layer_from(&mut std::iter::empty(), &r_edges));

    let by_id: BTreeMap<&str, &AccountRecord> = accounts.iter().map(|a| (a.account_id.as_str(), a)).collect();
    let mut attributes = BTreeMap::new();
    for graph in layers.values() {
        for id in graph.node_ids() {
            attributes.entry(id.clone()).or_insert_with(|| {
                by_id
                    .get(id.as_str())
                    .map(|&a| a.clone())
                    .unwrap_or_else(|| AccountRecord::placeholder(id))
            });
        }
    }

    LayeredNetwork {
        core_tweeters: core.into_iter().map(str::to_owned).collect(),
        layers,
        attributes,
    }
}
