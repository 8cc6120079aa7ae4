// SPDX-License-Identifier: Apache-2.0

//! Quantified community indicators: high centers, interactivity,
//! main-component membership, informational tweets and account-type
//! tallies of the most central nodes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::centrality::{MetricKind, MetricVector};
use crate::error::{Error, Result};
use crate::graph::{union_layers, weakly_connected_components, DirectedGraph};
use crate::ingest::{Category, LayeredNetwork, RelationKind, TweetRecord};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighCenterStats<T> {
    /// `None` when the mean is zero.
    pub max_over_mean: Option<T>,
    /// `None` when the median is zero.
    pub max_over_median: Option<T>,
}

/// How far the most central node stands above the typical one.
pub fn high_center_stats<T: Scalar>(betweenness: &MetricVector<T>) -> Result<HighCenterStats<T>> {
    let (Some(max), Some(mean), Some(median)) = (betweenness.max(), betweenness.mean(), betweenness.median()) else {
        return Err(Error::UndefinedRatio("high-center ratios of an empty vector".into()));
    };
    let ratio = |d: T| (d != T::zero()).then(|| max / d);
    Ok(HighCenterStats {
        max_over_mean: ratio(mean),
        max_over_median: ratio(median),
    })
}

fn ratio<T: Scalar>(num: usize, den: usize, what: &str) -> Result<T> {
    if den == 0 {
        return Err(Error::UndefinedRatio(format!("{what}: empty denominator")));
    }
    Ok(T::from_count(num) / T::from_count(den))
}

/// Conversational share of the combined network: `(edge_ratio,
/// vertex_ratio)` of M∪R against F∪M∪R.
pub fn interactivity_ratio<T: Scalar>(network: &LayeredNetwork) -> Result<(T, T)> {
    let all = union_layers(network, &RelationKind::ALL)?;
    let talk = union_layers(network, &[RelationKind::M, RelationKind::R])?;
    Ok((
        ratio(talk.edge_count(), all.edge_count(), "interactivity edge ratio")?,
        ratio(talk.node_count(), all.node_count(), "interactivity vertex ratio")?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentShare<T> {
    pub node_share: T,
    /// `None` when the graph has no edges.
    pub edge_share: Option<T>,
}

/// Node and edge fractions held by the largest weak component.
pub fn main_component_share<T: Scalar>(g: &DirectedGraph) -> Result<ComponentShare<T>> {
    let parts = weakly_connected_components(g);
    let Some(main) = parts.largest() else {
        return Err(Error::UndefinedRatio("main component of an empty graph".into()));
    };
    let id = parts.component_of[main[0]];
    let inside = g.edges().filter(|&(s, _)| parts.component_of[s] == id).count();
    Ok(ComponentShare {
        node_share: ratio(main.len(), g.node_count(), "main component node share")?,
        edge_share: ratio(inside, g.edge_count(), "main component edge share").ok(),
    })
}

/// Fraction of tweets carrying at least one URL.
pub fn url_tweet_fraction<T: Scalar>(tweets: &[TweetRecord]) -> Result<T> {
    let with_urls = tweets.iter().filter(|t| t.url_count >= 1).count();
    ratio(with_urls, tweets.len(), "url tweet fraction")
}

/// Account types among one metric's top nodes. `other` includes the
/// unlabeled accounts, which are also counted separately.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryTally {
    #[serde(rename = "ORG")]
    pub org: usize,
    #[serde(rename = "JMB")]
    pub jmb: usize,
    #[serde(rename = "OI")]
    pub oi: usize,
    #[serde(rename = "OTHER")]
    pub other: usize,
    pub unlabeled: usize,
}

impl CategoryTally {
    pub fn add(&mut self, category: Category) {
        match category {
            Category::Org => self.org += 1,
            Category::Jmb => self.jmb += 1,
            Category::Oi => self.oi += 1,
            Category::Other => self.other += 1,
            Category::Unlabeled => {
                self.other += 1;
                self.unlabeled += 1;
            }
        }
    }

    pub fn count(&self, category: Category) -> usize {
        match category {
            Category::Org => self.org,
            Category::Jmb => self.jmb,
            Category::Oi => self.oi,
            Category::Other => self.other,
            Category::Unlabeled => self.unlabeled,
        }
    }

    pub fn total(&self) -> usize {
        self.org + self.jmb + self.oi + self.other
    }
}

pub type TopLists<T> = BTreeMap<MetricKind, Vec<(String, T)>>;

pub fn category_tally<T>(
    network: &LayeredNetwork,
    top_lists: &TopLists<T>,
) -> Result<BTreeMap<MetricKind, CategoryTally>> {
    top_lists
        .iter()
        .map(|(&kind, list)| {
            let mut tally = CategoryTally::default();
            for (id, _) in list {
                let record = network
                    .attributes
                    .get(id)
                    .ok_or_else(|| Error::MissingAttribute(id.clone()))?;
                tally.add(record.category);
            }
            Ok((kind, tally))
        })
        .collect()
}

/// Thresholds for the pass/fail criteria. Comparisons are inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CommunityThresholds {
    pub interactivity_edge_ratio: f64,
    pub main_component_node_share: f64,
    pub url_tweet_fraction: f64,
    pub high_center_max_over_mean: f64,
}

impl Default for CommunityThresholds {
    fn default() -> Self {
        CommunityThresholds {
            interactivity_edge_ratio: 0.192,
            main_component_node_share: 0.814,
            url_tweet_fraction: 0.429,
            high_center_max_over_mean: 27.9,
        }
    }
}

/// Criterion outcomes; an undefined indicator never passes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommunityCriteria {
    pub interactive: bool,
    pub membership: bool,
    pub informational: bool,
    pub high_centers: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityIndicators<T> {
    pub high_center_max_over_mean: Option<T>,
    pub high_center_max_over_median: Option<T>,
    pub interactivity_edge_ratio: Option<T>,
    pub interactivity_vertex_ratio: Option<T>,
    pub main_component_node_share: Option<T>,
    pub main_component_edge_share: Option<T>,
    pub url_tweet_fraction: Option<T>,
    pub category_tallies: BTreeMap<MetricKind, CategoryTally>,
    pub criteria: CommunityCriteria,
    /// Free-text annotations passed through from the run configuration.
    pub narrative_fields: BTreeMap<String, String>,
}

/// Inputs for [`community_report`].
pub struct CommunityInputs<'a, T> {
    pub network: &'a LayeredNetwork,
    pub tweets: &'a [TweetRecord],
    /// The graph the metrics were computed on.
    pub graph: &'a DirectedGraph,
    pub betweenness: &'a MetricVector<T>,
    pub top_lists: &'a TopLists<T>,
}

/// Narrative slots every report carries, empty unless configured.
pub const NARRATIVE_SLOTS: [&str; 3] = ["common_language", "temporality", "sustained_membership"];

/// Assembles every indicator. Undefined ratios become `None` instead of
/// failing the report; only an unresolvable top-list account is an error.
pub fn community_report<T: Scalar>(
    inputs: &CommunityInputs<'_, T>,
    thresholds: &CommunityThresholds,
    narrative: &BTreeMap<String, String>,
) -> Result<CommunityIndicators<T>> {
    let high = high_center_stats(inputs.betweenness).ok();
    let interactivity = interactivity_ratio::<T>(inputs.network).ok();
    let share = main_component_share::<T>(inputs.graph).ok();
    let urls = url_tweet_fraction::<T>(inputs.tweets).ok();
    let category_tallies = category_tally(inputs.network, inputs.top_lists)?;

    let at_least = |value: Option<T>, threshold: f64| value.is_some_and(|v| v >= T::lit(threshold));
    let max_over_mean = high.and_then(|h| h.max_over_mean);
    let edge_ratio = interactivity.map(|r| r.0);
    let node_share = share.map(|s| s.node_share);
    let criteria = CommunityCriteria {
        interactive: at_least(edge_ratio, thresholds.interactivity_edge_ratio),
        membership: at_least(node_share, thresholds.main_component_node_share),
        informational: at_least(urls, thresholds.url_tweet_fraction),
        high_centers: at_least(max_over_mean, thresholds.high_center_max_over_mean),
    };

    let mut narrative_fields: BTreeMap<String, String> =
        NARRATIVE_SLOTS.iter().map(|k| (k.to_string(), String::new())).collect();
    narrative_fields.extend(narrative.iter().map(|(k, v)| (k.clone(), v.clone())));

    Ok(CommunityIndicators {
        high_center_max_over_mean: max_over_mean,
        high_center_max_over_median: high.and_then(|h| h.max_over_median),
        interactivity_edge_ratio: edge_ratio,
        interactivity_vertex_ratio: interactivity.map(|r| r.1),
        main_component_node_share: node_share,
        main_component_edge_share: share.and_then(|s| s.edge_share),
        url_tweet_fraction: urls,
        category_tallies,
        criteria,
        narrative_fields,
    })
}
