//! Fitted feature space: dimension selection and TF-IDF vectorization.
//!
//! Selection drops features seen only once in the whole corpus, ranks
//! the rest by mutual information between feature presence and the
//! author label, and keeps at most `selection_cap` dimensions. Vectors
//! are weighted `tf * (ln((1+N)/(1+df)) + 1)` and L2-normalized.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use super::{extract_kind, FeatureBag, FeatureKind};
use crate::lang::ast::SourceProgram;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dim {
    pub name: String,
    pub kind: FeatureKind,
    pub df: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpace {
    pub dims: Vec<Dim>,
    pub corpus_size: usize,
    #[serde(skip)]
    index: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    /// Fingerprint of the space this vector lives in.
    pub space_id: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeatureError {
    EmptyCorpus,
    UnlabeledProgram,
    SpaceMismatch,
}

impl fmt::Display for FeatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureError::EmptyCorpus => write!(f, "empty corpus"),
            FeatureError::UnlabeledProgram => write!(f, "corpus program lacks an author label"),
            FeatureError::SpaceMismatch => write!(f, "vectors come from different feature spaces"),
        }
    }
}

impl FeatureSpace {
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Stable fingerprint over dimension names and dfs.
    pub fn fingerprint(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        for d in &self.dims {
            for b in d.name.as_bytes() {
                h ^= *b as u64;
                h = h.wrapping_mul(0x1000_0000_01b3);
            }
            h ^= d.df as u64;
            h = h.wrapping_mul(0x1000_0000_01b3);
        }
        h ^ (self.corpus_size as u64)
    }

    pub fn rebuild_index(&mut self) {
        self.index =
            self.dims.iter().enumerate().map(|(i, d)| (d.name.clone(), i)).collect();
    }

    fn dim_index(&self, name: &str) -> Option<usize> {
        if self.index.len() == self.dims.len() {
            self.index.get(name).copied()
        } else {
            self.dims.iter().position(|d| d.name == name)
        }
    }
}

fn prefixed(kind: FeatureKind, name: &str) -> String {
    let mut s = String::from(kind.prefix());
    s.push(':');
    s.push_str(name);
    s
}

/// Fit a feature space over the given kinds.
pub fn fit_space_kinds(
    corpus: &[SourceProgram],
    selection_cap: usize,
    kinds: &[FeatureKind],
) -> Result<FeatureSpace, FeatureError> {
    if corpus.is_empty() {
        return Err(FeatureError::EmptyCorpus);
    }
    let mut labels = Vec::with_capacity(corpus.len());
    for p in corpus {
        labels.push(p.author.as_ref().ok_or(FeatureError::UnlabeledProgram)?.id);
    }
    let n = corpus.len();
    // Per-document bags with kind-prefixed names.
    let mut doc_bags: Vec<BTreeMap<String, f64>> = Vec::with_capacity(n);
    for p in corpus {
        let mut merged = BTreeMap::new();
        for kind in kinds {
            for (name, v) in extract_kind(*kind, p) {
                merged.insert(prefixed(*kind, &name), v);
            }
        }
        doc_bags.push(merged);
    }
    // df and total occurrence mass per feature.
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    let mut total: BTreeMap<&str, f64> = BTreeMap::new();
    for bag in &doc_bags {
        for (name, v) in bag {
            if *v != 0.0 {
                *df.entry(name).or_insert(0) += 1;
                *total.entry(name).or_insert(0.0) += *v;
            }
        }
    }
    // Selection rule: a feature whose whole corpus mass is a single
    // occurrence carries no reusable style signal; drop it.
    let candidates: Vec<&str> =
        df.keys().copied().filter(|name| total[*name] > 1.0).collect();

    // Mutual information between presence and author label.
    let n_authors = labels.iter().copied().max().unwrap_or(0) + 1;
    let mut author_counts = alloc::vec![0usize; n_authors];
    for l in &labels {
        author_counts[*l] += 1;
    }
    let mut scored: Vec<(f64, &str)> = Vec::with_capacity(candidates.len());
    for name in candidates {
        let mut present_by_author = alloc::vec![0usize; n_authors];
        let mut present_total = 0usize;
        for (bag, l) in doc_bags.iter().zip(&labels) {
            if bag.get(name).copied().unwrap_or(0.0) != 0.0 {
                present_by_author[*l] += 1;
                present_total += 1;
            }
        }
        let mut mi = 0.0f64;
        let nf = n as f64;
        for (a, &ca) in author_counts.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for present in [true, false] {
                let nxy = if present {
                    present_by_author[a]
                } else {
                    ca - present_by_author[a]
                } as f64;
                if nxy == 0.0 {
                    continue;
                }
                let nx = if present { present_total } else { n - present_total } as f64;
                if nx == 0.0 {
                    continue;
                }
                let p_xy = nxy / nf;
                mi += p_xy * libm::log(nf * nxy / (nx * ca as f64));
            }
        }
        scored.push((mi, name));
    }
    // Descending MI, ties by name for determinism.
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(core::cmp::Ordering::Equal).then(a.1.cmp(b.1)));
    scored.truncate(selection_cap);
    let mut names: Vec<&str> = scored.into_iter().map(|(_, n)| n).collect();
    names.sort_unstable();

    let dims: Vec<Dim> = names
        .into_iter()
        .map(|name| {
            let kind = FeatureKind::from_prefix(name.split(':').next().unwrap_or(""))
                .expect("prefixed name");
            Dim { name: name.to_string(), kind, df: df[name] }
        })
        .collect();
    let mut space = FeatureSpace { dims, corpus_size: n, index: BTreeMap::new() };
    space.rebuild_index();
    Ok(space)
}

/// Default attackable space: lexical + syntactic features. Layout is
/// extracted separately and never enters this space.
pub fn fit_space(
    corpus: &[SourceProgram],
    selection_cap: usize,
) -> Result<FeatureSpace, FeatureError> {
    fit_space_kinds(corpus, selection_cap, &[FeatureKind::Lexical, FeatureKind::Syntactic])
}

/// TF-IDF vectorization against a fitted space; unknown features are
/// ignored, and the result has unit L2 norm unless it is all-zero.
pub fn vectorize(program: &SourceProgram, space: &FeatureSpace) -> FeatureVector {
    let mut values = alloc::vec![0.0f64; space.dims.len()];
    let kinds_present: Vec<FeatureKind> = {
        let mut ks: Vec<FeatureKind> = space.dims.iter().map(|d| d.kind).collect();
        ks.dedup();
        ks.sort_by_key(|k| k.prefix());
        ks.dedup();
        ks
    };
    for kind in kinds_present {
        let bag: FeatureBag = extract_kind(kind, program);
        for (name, tf) in bag {
            let full = prefixed(kind, &name);
            if let Some(i) = space.dim_index(&full) {
                let df = space.dims[i].df as f64;
                let nf = space.corpus_size as f64;
                let idf = libm::log((1.0 + nf) / (1.0 + df)) + 1.0;
                values[i] = tf * idf;
            }
        }
    }
    let norm = libm::sqrt(values.iter().map(|v| v * v).sum::<f64>());
    if norm > 0.0 {
        for v in &mut values {
            *v /= norm;
        }
    }
    FeatureVector { values, space_id: space.fingerprint() }
}

/// Fraction of dimensions whose values differ by more than 1e-12.
pub fn changed_feature_ratio(a: &FeatureVector, b: &FeatureVector) -> Result<f64, FeatureError> {
    if a.space_id != b.space_id || a.values.len() != b.values.len() {
        return Err(FeatureError::SpaceMismatch);
    }
    if a.values.is_empty() {
        return Ok(0.0);
    }
    let changed = a
        .values
        .iter()
        .zip(&b.values)
        .filter(|(x, y)| libm::fabs(**x - **y) > 1e-12)
        .count();
    Ok(changed as f64 / a.values.len() as f64)
}
