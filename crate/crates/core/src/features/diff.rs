//! Line-based diff on top of a longest-common-subsequence alignment.
//! Within a hunk, paired deletions and insertions count as changed
//! lines rather than one removal plus one addition.

use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LocDiff {
    pub added: usize,
    pub removed: usize,
    pub changed: usize,
}

impl LocDiff {
    pub fn total(&self) -> usize {
        self.added + self.removed + self.changed
    }
}

/// LCS-based line diff between two texts.
pub fn loc_diff(a: &str, b: &str) -> LocDiff {
    let xs: Vec<&str> = a.lines().collect();
    let ys: Vec<&str> = b.lines().collect();
    let n = xs.len();
    let m = ys.len();
    // DP table of LCS lengths.
    let mut dp = alloc::vec![0u32; (n + 1) * (m + 1)];
    let at = |i: usize, j: usize| i * (m + 1) + j;
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            dp[at(i, j)] = if xs[i] == ys[j] {
                dp[at(i + 1, j + 1)] + 1
            } else {
                dp[at(i + 1, j)].max(dp[at(i, j + 1)])
            };
        }
    }
    // Walk the alignment, accumulating hunks of deletions/insertions.
    let mut out = LocDiff::default();
    let (mut i, mut j) = (0, 0);
    let (mut del, mut ins) = (0usize, 0usize);
    let mut flush = |del: &mut usize, ins: &mut usize, out: &mut LocDiff| {
        let paired = (*del).min(*ins);
        out.changed += paired;
        out.removed += *del - paired;
        out.added += *ins - paired;
        *del = 0;
        *ins = 0;
    };
    while i < n && j < m {
        if xs[i] == ys[j] {
            flush(&mut del, &mut ins, &mut out);
            i += 1;
            j += 1;
        } else if dp[at(i + 1, j)] >= dp[at(i, j + 1)] {
            del += 1;
            i += 1;
        } else {
            ins += 1;
            j += 1;
        }
    }
    del += n - i;
    ins += m - j;
    flush(&mut del, &mut ins, &mut out);
    out
}

pub fn line_count(text: &str) -> usize {
    text.lines().count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_texts_have_empty_diff() {
        let d = loc_diff("a\nb\nc\n", "a\nb\nc\n");
        assert_eq!(d, LocDiff::default());
    }

    #[test]
    fn one_line_edit_counts_as_changed() {
        let d = loc_diff("a\nb\nc\n", "a\nX\nc\n");
        assert_eq!(d, LocDiff { added: 0, removed: 0, changed: 1 });
    }

    #[test]
    fn pure_insertions_and_deletions() {
        assert_eq!(loc_diff("a\nc\n", "a\nb\nc\n"), LocDiff { added: 1, removed: 0, changed: 0 });
        assert_eq!(loc_diff("a\nb\nc\n", "a\nc\n"), LocDiff { added: 0, removed: 1, changed: 0 });
    }

    #[test]
    fn mixed_hunk_pairs_lines() {
        // Two old lines replaced by three new ones: 2 changed + 1 added.
        let d = loc_diff("keep\nold1\nold2\nkeep2\n", "keep\nnew1\nnew2\nnew3\nkeep2\n");
        assert_eq!(d, LocDiff { added: 1, removed: 0, changed: 2 });
    }
}
