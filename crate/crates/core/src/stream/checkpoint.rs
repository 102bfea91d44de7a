use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::forest::OnlineForest;
use super::hoeffding::HoeffdingTree;
use super::model::StreamModel;
use super::naive_bayes::IncrementalNb;
use crate::analysis::DecisionTree;
use crate::features::FeatureVector;
use crate::{Error, Result};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnyModel {
    NaiveBayes(IncrementalNb),
    HoeffdingTree(HoeffdingTree),
    OnlineForest(OnlineForest),
}

impl AnyModel {
    /// Tree snapshots; empty for naive Bayes.
    pub fn decision_trees(&self) -> Vec<DecisionTree> {
        match self {
            AnyModel::NaiveBayes(_) => Vec::new(),
            AnyModel::HoeffdingTree(t) => vec![t.to_decision_tree()],
            AnyModel::OnlineForest(f) => f.trees().iter().map(HoeffdingTree::to_decision_tree).collect(),
        }
    }

    fn inner(&self) -> &dyn StreamModel {
        match self {
            AnyModel::NaiveBayes(m) => m,
            AnyModel::HoeffdingTree(m) => m,
            AnyModel::OnlineForest(m) => m,
        }
    }
}

impl StreamModel for AnyModel {
    fn n_classes(&self) -> usize {
        self.inner().n_classes()
    }

    fn learn_weighted(&mut self, x: &FeatureVector, y: usize, weight: f64) -> Result<()> {
        match self {
            AnyModel::NaiveBayes(m) => m.learn_weighted(x, y, weight),
            AnyModel::HoeffdingTree(m) => m.learn_weighted(x, y, weight),
            AnyModel::OnlineForest(m) => m.learn_weighted(x, y, weight),
        }
    }

    fn predict_proba(&self, x: &FeatureVector) -> Option<Vec<f64>> {
        self.inner().predict_proba(x)
    }
}

/// Versioned model snapshot together with the width of its input space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub vocab_len: usize,
    pub model: AnyModel,
}

impl Checkpoint {
    pub fn new(model: AnyModel, vocab_len: usize) -> Self {
        Self {
            version: CHECKPOINT_VERSION,
            vocab_len,
            model,
        }
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer(w, self)?;
        Ok(())
    }

    pub fn read_json<R: Read>(mut r: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Header {
            #[serde(default)]
            version: u32,
        }
        // generator states hold 128-bit counters, which `serde_json::Value`
        // cannot represent, so the text is parsed twice instead
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        let header: Header = serde_json::from_str(&text)?;
        if header.version != CHECKPOINT_VERSION {
            return Err(Error::Version(header.version));
        }
        Ok(serde_json::from_str(&text)?)
    }
}
