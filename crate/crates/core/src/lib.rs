// SPDX-License-Identifier: Apache-2.0

//! Hashtag community network analysis.
//!
//! Builds follow / mention / reply networks from archived tweet corpora,
//! computes degree, path, betweenness, eigenvector, PageRank and
//! clustering metrics, and derives community indicators from them.
//!
//! Metric and indicator code is generic over [`Scalar`]; the aliases
//! below fix the scalar to `f64`, which is what the pipeline and reports
//! use.

pub mod centrality;
pub mod community;
pub mod error;
pub mod export;
pub mod graph;
pub mod ingest;
pub mod pipeline;
pub mod report;
pub mod scalar;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{union_layers, weakly_connected_components, ComponentPartition, DirectedGraph};
pub use ingest::{
    build_layered_network, filter_corpus, parse_support_files, parse_tweet_stream, AccountRecord, Category,
    FilterQuery, LayeredNetwork, RelationKind, TweetRecord,
};
pub use scalar::Scalar;

pub type MetricVector = centrality::MetricVector<f64>;
pub type MetricSuite = centrality::MetricSuite<f64>;
pub type NetworkSummary = centrality::NetworkSummary<f64>;
pub type Distribution = centrality::Distribution<f64>;
pub type CommunityIndicators = community::CommunityIndicators<f64>;
pub type TopLists = community::TopLists<f64>;
