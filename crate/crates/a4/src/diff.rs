//! Sequence alignment helpers and unified diff output.

use std::fmt::Write as _;

/// Matched index pairs of a longest common subsequence, in order.
pub fn lcs_pairs<T: PartialEq>(a: &[T], b: &[T]) -> Vec<(usize, usize)> {
    let prefix = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    let suffix = a[prefix..]
        .iter()
        .rev()
        .zip(b[prefix..].iter().rev())
        .take_while(|(x, y)| x == y)
        .count();
    let (am, bm) = (&a[prefix..a.len() - suffix], &b[prefix..b.len() - suffix]);
    let (n, m) = (am.len(), bm.len());
    // table[i][j] = LCS length of am[i..], bm[j..]
    let mut table = vec![0u32; (n + 1) * (m + 1)];
    let at = |i: usize, j: usize| i * (m + 1) + j;
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            table[at(i, j)] = if am[i] == bm[j] {
                table[at(i + 1, j + 1)] + 1
            } else {
                table[at(i + 1, j)].max(table[at(i, j + 1)])
            };
        }
    }
    let mut out: Vec<(usize, usize)> = (0..prefix).map(|i| (i, i)).collect();
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        if am[i] == bm[j] {
            out.push((prefix + i, prefix + j));
            i += 1;
            j += 1;
        } else if table[at(i + 1, j)] >= table[at(i, j + 1)] {
            i += 1;
        } else {
            j += 1;
        }
    }
    out.extend((0..suffix).map(|k| (a.len() - suffix + k, b.len() - suffix + k)));
    out
}

/// Edit distance with unit-cost insert, delete and substitute.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// A maximal run of differing lines: `old[old_start..old_end]` became
/// `new[new_start..new_end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineChange {
    pub old_start: usize,
    pub old_end: usize,
    pub new_start: usize,
    pub new_end: usize,
}

pub fn line_changes(old: &str, new: &str) -> Vec<LineChange> {
    let a: Vec<&str> = old.split_inclusive('\n').collect();
    let b: Vec<&str> = new.split_inclusive('\n').collect();
    let pairs = lcs_pairs(&a, &b);
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    for (pi, pj) in pairs.into_iter().chain(std::iter::once((a.len(), b.len()))) {
        if pi > i || pj > j {
            out.push(LineChange {
                old_start: i,
                old_end: pi,
                new_start: j,
                new_end: pj,
            });
        }
        i = pi + 1;
        j = pj + 1;
    }
    out
}

/// Standard unified diff with `context` lines around each change. Empty
/// when the texts are equal.
pub fn unified_diff(old: &str, new: &str, old_name: &str, new_name: &str, context: usize) -> String {
    let changes = line_changes(old, new);
    if changes.is_empty() {
        return String::new();
    }
    let a: Vec<&str> = old.split_inclusive('\n').collect();
    let b: Vec<&str> = new.split_inclusive('\n').collect();
    let mut out = format!("--- {old_name}\n+++ {new_name}\n");
    let mut k = 0;
    while k < changes.len() {
        // group changes whose context windows touch
        let mut last = k;
        while last + 1 < changes.len()
            && changes[last + 1].old_start - changes[last].old_end <= 2 * context
        {
            last += 1;
        }
        let first = changes[k];
        let end = changes[last];
        let lead = first.old_start.min(context);
        let trail = (a.len() - end.old_end).min(context);
        let old_from = first.old_start - lead;
        let new_from = first.new_start - lead;
        let old_len = end.old_end + trail - old_from;
        let new_len = end.new_end + trail - new_from;
        let _ = writeln!(
            out,
            "@@ -{} +{} @@",
            hunk_range(old_from, old_len),
            hunk_range(new_from, new_len)
        );
        let mut cursor = old_from;
        for c in &changes[k..=last] {
            for line in &a[cursor..c.old_start] {
                push_line(&mut out, ' ', line);
            }
            for line in &a[c.old_start..c.old_end] {
                push_line(&mut out, '-', line);
            }
            for line in &b[c.new_start..c.new_end] {
                push_line(&mut out, '+', line);
            }
            cursor = c.old_end;
        }
        for line in &a[cursor..cursor + trail] {
            push_line(&mut out, ' ', line);
        }
        k = last + 1;
    }
    out
}

fn hunk_range(from: usize, len: usize) -> String {
    match len {
        0 => format!("{from},0"),
        1 => format!("{}", from + 1),
        _ => format!("{},{len}", from + 1),
    }
}

fn push_line(out: &mut String, mark: char, line: &str) {
    out.push(mark);
    out.push_str(line);
    if !line.ends_with('\n') {
        out.push_str("\n\\ No newline at end of file\n");
    }
}
