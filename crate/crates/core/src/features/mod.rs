//! Stylometric feature extraction: layout, lexical and syntactic
//! feature bags, the fitted TF-IDF feature space, the layout
//! normalizer, and the line-diff used by the attack reports.

pub mod diff;
pub mod space;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::lang::ast::{walk_ast, NodeId, SourceProgram};
use crate::lang::token::{tokenize, TokenKind};
use crate::lang::{parse, pretty_print, ParseError};

pub use diff::{loc_diff, LocDiff};
pub use space::{
    changed_feature_ratio, fit_space, fit_space_kinds, vectorize, Dim, FeatureError,
    FeatureSpace, FeatureVector,
};

/// A named bag of feature values (term frequencies or metrics).
pub type FeatureBag = BTreeMap<String, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeatureKind {
    Layout,
    Lexical,
    Syntactic,
}

impl FeatureKind {
    pub fn prefix(self) -> &'static str {
        match self {
            FeatureKind::Layout => "lay",
            FeatureKind::Lexical => "lex",
            FeatureKind::Syntactic => "syn",
        }
    }

    pub fn from_prefix(p: &str) -> Option<Self> {
        match p {
            "lay" => Some(FeatureKind::Layout),
            "lex" => Some(FeatureKind::Lexical),
            "syn" => Some(FeatureKind::Syntactic),
            _ => None,
        }
    }
}

pub fn extract_kind(kind: FeatureKind, program: &SourceProgram) -> FeatureBag {
    match kind {
        FeatureKind::Layout => extract_layout(&program.source_text),
        FeatureKind::Lexical => extract_lexical(program),
        FeatureKind::Syntactic => extract_syntactic(program),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Layout features from the raw (pre-normalization) text.
pub fn extract_layout(source: &str) -> FeatureBag {
    let mut bag = FeatureBag::new();
    let lines: Vec<&str> = source.lines().collect();
    if lines.is_empty() {
        for k in [
            "indent_tab_ratio",
            "indent_width",
            "brace_same_line_ratio",
            "comment_line_ratio",
            "blank_line_density",
            "mean_line_length",
        ] {
            bag.insert(k.to_string(), 0.0);
        }
        return bag;
    }
    let mut indented = 0usize;
    let mut tab_indented = 0usize;
    let mut space_unit = 0usize;
    let mut blank = 0usize;
    let mut total_len = 0usize;
    let mut braces = 0usize;
    let mut braces_after_code = 0usize;
    for line in &lines {
        total_len += line.len();
        if line.trim().is_empty() {
            blank += 1;
            continue;
        }
        let lead: Vec<u8> = line.bytes().take_while(|b| *b == b' ' || *b == b'\t').collect();
        if !lead.is_empty() {
            indented += 1;
            if lead[0] == b'\t' {
                tab_indented += 1;
            } else {
                space_unit = gcd(space_unit, lead.len());
            }
        }
        for (i, b) in line.bytes().enumerate() {
            if b == b'{' {
                braces += 1;
                if line[..i].trim_start().chars().any(|c| c != '{') {
                    braces_after_code += 1;
                }
            }
        }
    }
    let (mut line_comments, mut block_comments) = (0usize, 0usize);
    if let Ok(toks) = tokenize(source) {
        for t in toks.iter().filter(|t| t.kind == TokenKind::Comment) {
            if t.text.starts_with("//") {
                line_comments += 1;
            } else {
                block_comments += 1;
            }
        }
    }
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    bag.insert("indent_tab_ratio".to_string(), ratio(tab_indented, indented));
    bag.insert("indent_width".to_string(), space_unit as f64);
    bag.insert("brace_same_line_ratio".to_string(), ratio(braces_after_code, braces));
    bag.insert(
        "comment_line_ratio".to_string(),
        ratio(line_comments, line_comments + block_comments),
    );
    bag.insert("blank_line_density".to_string(), ratio(blank, lines.len()));
    bag.insert("mean_line_length".to_string(), ratio(total_len, lines.len()));
    bag
}

/// Lexical features: term frequencies over keyword, identifier and
/// punctuator lexems. Comments, whitespace and literals are excluded.
pub fn extract_lexical(program: &SourceProgram) -> FeatureBag {
    let mut bag = FeatureBag::new();
    let Ok(toks) = tokenize(&program.source_text) else {
        return bag;
    };
    for t in toks {
        match t.kind {
            TokenKind::Keyword | TokenKind::Ident | TokenKind::Punct => {
                *bag.entry(t.text).or_insert(0.0) += 1.0;
            }
            _ => {}
        }
    }
    bag
}

/// Syntactic features: node-kind unigrams, parent-child kind bigrams,
/// maximum depth and mean leaf depth.
pub fn extract_syntactic(program: &SourceProgram) -> FeatureBag {
    let mut bag = FeatureBag::new();
    let mut max_depth = 0u32;
    let mut parents: alloc::collections::BTreeSet<NodeId> = Default::default();
    let mut nodes: Vec<(NodeId, u32)> = Vec::new();
    walk_ast(&program.ast, &mut |v| {
        *bag.entry(format!("node:{}", v.kind.name())).or_insert(0.0) += 1.0;
        if let Some((pid, pkind)) = v.parent {
            *bag.entry(format!("edge:{}>{}", pkind.name(), v.kind.name())).or_insert(0.0) += 1.0;
            parents.insert(pid);
        }
        max_depth = max_depth.max(v.depth);
        nodes.push((v.id, v.depth));
    });
    let leaf_depths: Vec<u32> =
        nodes.iter().filter(|(id, _)| !parents.contains(id)).map(|(_, d)| *d).collect();
    let mean_leaf = if leaf_depths.is_empty() {
        0.0
    } else {
        leaf_depths.iter().map(|d| *d as f64).sum::<f64>() / leaf_depths.len() as f64
    };
    bag.insert("max_depth".to_string(), max_depth as f64);
    bag.insert("mean_leaf_depth".to_string(), mean_leaf);
    bag
}

/// Total parent-child bigram count of a tree (equals node count - 1).
pub fn bigram_total(program: &SourceProgram) -> f64 {
    extract_syntactic(program)
        .iter()
        .filter(|(k, _)| k.starts_with("edge:"))
        .map(|(_, v)| *v)
        .sum()
}

/// Canonicalize layout: parse and re-print. The AST is unchanged, so
/// semantics are preserved exactly; the operation is idempotent.
pub fn normalize_layout(source: &str) -> Result<String, ParseError> {
    Ok(pretty_print(&parse(source)?.ast))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::ast::structurally_equal;
    use crate::samples::{LOOP_SUM, RECURSIVE_FOO};

    fn prog(src: &str) -> SourceProgram {
        parse(src).unwrap()
    }

    #[test]
    fn running_example_lexical_counts() {
        let bag = extract_lexical(&prog(RECURSIVE_FOO));
        assert_eq!(bag.get("int").copied(), Some(3.0));
        assert_eq!(bag.get("foo").copied(), Some(2.0));
        // Comments and literals are not lexical features.
        assert!(bag.keys().all(|k| !k.contains("base case")));
        assert!(!bag.contains_key("1"));
    }

    #[test]
    fn running_example_layout() {
        let bag = extract_layout(RECURSIVE_FOO);
        assert_eq!(bag["indent_width"], 2.0);
        assert_eq!(bag["comment_line_ratio"], 1.0);
        assert_eq!(bag["brace_same_line_ratio"], 1.0);
        assert_eq!(bag["indent_tab_ratio"], 0.0);
    }

    #[test]
    fn empty_file_layout_is_all_zero() {
        let bag = extract_layout("");
        assert!(bag.values().all(|v| *v == 0.0));
    }

    #[test]
    fn normalized_layout_uses_four_space_indent() {
        let normalized = normalize_layout(RECURSIVE_FOO).unwrap();
        let bag = extract_layout(&normalized);
        assert_eq!(bag["indent_width"], 4.0);
        assert_eq!(bag["indent_tab_ratio"], 0.0);
    }

    #[test]
    fn normalize_is_idempotent_and_preserves_ast() {
        let once = normalize_layout(LOOP_SUM).unwrap();
        let twice = normalize_layout(&once).unwrap();
        assert_eq!(once, twice);
        assert!(structurally_equal(&parse(LOOP_SUM).unwrap().ast, &parse(&once).unwrap().ast));
    }

    #[test]
    fn bigram_total_is_node_count_minus_one() {
        for src in [RECURSIVE_FOO, LOOP_SUM] {
            let p = prog(src);
            // Independent oracle: direct node count via the walker.
            let mut count = 0.0;
            walk_ast(&p.ast, &mut |_| count += 1.0);
            assert_eq!(bigram_total(&p), count - 1.0);
        }
    }

    #[test]
    fn rename_preserves_total_lexical_mass() {
        let a = prog("int main() { int b = 1; b = b + 1; return b; }");
        let b = prog("int main() { int tmp = 1; tmp = tmp + 1; return tmp; }");
        let total = |bag: &FeatureBag| bag.values().sum::<f64>();
        let (ba, bb) = (extract_lexical(&a), extract_lexical(&b));
        assert_eq!(total(&ba), total(&bb));
        assert_eq!(ba.get("b").copied(), Some(4.0));
        assert_eq!(bb.get("tmp").copied(), Some(4.0));
        assert_eq!(bb.get("b"), None);
    }

    #[test]
    fn diff_on_loop_sum_edit() {
        let before = LOOP_SUM;
        let after = before.replace("s = s + i;", "s += i;");
        let d = loc_diff(before, &after);
        assert_eq!((d.added, d.removed, d.changed), (0, 0, 1));
    }

    #[test]
    fn space_fit_vectorize_basics() {
        let mut a = prog("int main() { int alpha = 1; alpha = alpha + 1; return alpha; }");
        a.author = Some(crate::AuthorLabel { id: 0, name: "a".into() });
        let mut b = prog("int main() { int beta = 2; beta = beta * 2; return beta; }");
        b.author = Some(crate::AuthorLabel { id: 1, name: "b".into() });
        let corpus = alloc::vec![a.clone(), b.clone()];
        let space = fit_space(&corpus, 1000).unwrap();
        assert!(space.dims.iter().all(|d| d.df >= 1 && d.df <= 2));
        // Single-file corpus: every dimension has df = 1.
        let solo = fit_space(&corpus[..1], 1000).unwrap();
        assert!(!solo.is_empty());
        assert!(solo.dims.iter().all(|d| d.df == 1));
        // Cap is respected exactly when more candidates exist.
        let capped = fit_space(&corpus, 5).unwrap();
        assert_eq!(capped.len(), 5);
        // Vectors are unit length or all-zero.
        for p in &corpus {
            let v = vectorize(p, &space);
            let norm: f64 = v.values.iter().map(|x| x * x).sum::<f64>();
            assert!((norm - 1.0).abs() < 1e-9 || norm == 0.0);
        }
        // Identical vectors have ratio zero; different programs differ.
        let va = vectorize(&a, &space);
        let vb = vectorize(&b, &space);
        assert_eq!(changed_feature_ratio(&va, &va).unwrap(), 0.0);
        assert!(changed_feature_ratio(&va, &vb).unwrap() > 0.0);
    }

    #[test]
    fn idf_matches_hand_computation() {
        // Two documents, term in one of them: idf = ln(3/2) + 1.
        let mut a = prog("int main() { int alpha = 1; return alpha; }");
        a.author = Some(crate::AuthorLabel { id: 0, name: "a".into() });
        let mut b = prog("int main() { int beta = 2; beta = beta + 1; return beta; }");
        b.author = Some(crate::AuthorLabel { id: 1, name: "b".into() });
        let corpus = alloc::vec![a, b];
        let space = fit_space(&corpus, 10_000).unwrap();
        // "beta" occurs 4 times in doc b only; "int" occurs in both.
        let beta_dim = space.dims.iter().find(|d| d.name == "lex:beta").unwrap();
        assert_eq!(beta_dim.df, 1);
        let int_dim = space.dims.iter().find(|d| d.name == "lex:int").unwrap();
        assert_eq!(int_dim.df, 2);
        let v = vectorize(&corpus[1], &space);
        let idx_beta = space.dims.iter().position(|d| d.name == "lex:beta").unwrap();
        let idx_int = space.dims.iter().position(|d| d.name == "lex:int").unwrap();
        // Pre-normalization weights: beta: 4 * (ln(3/2)+1); int: 2 * (ln(1)+1) = 2.
        let w_beta = 4.0 * (libm::log(1.5) + 1.0);
        let w_int = 2.0;
        let ratio_expected = w_beta / w_int;
        let ratio_actual = v.values[idx_beta] / v.values[idx_int];
        assert!((ratio_actual - ratio_expected).abs() < 1e-9);
        assert!((libm::log(1.5) + 1.0 - 1.4054651081081644).abs() < 1e-12);
    }

    #[test]
    fn discriminative_feature_outranks_uniform_one() {
        // Author 0 always writes "alpha", author 1 never does; "int"
        // appears everywhere. With a tight cap the discriminative
        // feature must survive.
        let mut corpus = Vec::new();
        for i in 0..4 {
            let src = if i % 2 == 0 {
                "int main() { int alpha = 1; alpha = alpha + 1; return alpha; }"
            } else {
                "int main() { int beta = 1; beta = beta + 1; return beta; }"
            };
            let mut p = prog(src);
            p.author = Some(crate::AuthorLabel {
                id: i % 2,
                name: format!("a{}", i % 2),
            });
            p.task = Some(format!("t{i}"));
            corpus.push(p);
        }
        let space = fit_space_kinds(&corpus, 2, &[FeatureKind::Lexical]).unwrap();
        let names: Vec<&str> = space.dims.iter().map(|d| d.name.as_str()).collect();
        assert!(names.contains(&"lex:alpha"));
        assert!(names.contains(&"lex:beta"));
        assert!(!names.contains(&"lex:int"));
    }
}
