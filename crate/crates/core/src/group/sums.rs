//! FS and FS_matrix enumeration.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Element, GroupError, GroupSpec};

/// Default cap on `|X|` for [`fs_set`].
pub const DEFAULT_FS_LIMIT: usize = 20;

/// One formal subset-sum: the indices used and the resulting value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSum {
    pub indices: Vec<usize>,
    pub value: Element,
}

fn check_family(xs: &[Element], limit: usize) -> Result<(), GroupError> {
    if xs.len() > limit {
        return Err(GroupError::SizeLimit {
            what: "finite-sum generator count",
            size: xs.len() as u128,
            limit: limit as u128,
        });
    }
    for (i, x) in xs.iter().enumerate() {
        if !x.same_group(&xs[0]) {
            return Err(GroupError::SpecMismatch);
        }
        if xs[..i].contains(x) {
            return Err(GroupError::Duplicate(x.to_json().to_string()));
        }
    }
    Ok(())
}

/// Subset sums indexed by bitmask; entry 0 is the empty sum (zero).
pub(crate) fn subset_sums(zero: Element, xs: &[Element]) -> Vec<Element> {
    let mut sums = Vec::with_capacity(1 << xs.len());
    sums.push(zero);
    for mask in 1usize..(1 << xs.len()) {
        let low = mask.trailing_zeros() as usize;
        let rest = sums[mask & (mask - 1)].add_unchecked(&xs[low]);
        sums.push(rest);
    }
    sums
}

/// Every nonempty subset-sum with its generating index set, in mask order.
pub fn fs_formal(xs: &[Element], limit: usize) -> Result<Vec<FormalSum>, GroupError> {
    check_family(xs, limit)?;
    let Some(first) = xs.first() else {
        return Ok(Vec::new());
    };
    let sums = subset_sums(first.spec().zero(), xs);
    Ok(sums
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(mask, value)| FormalSum {
            indices: (0..xs.len()).filter(|i| mask >> i & 1 == 1).collect(),
            value,
        })
        .collect())
}

/// `FS(X)` as a set of values (colliding sums merge).
pub fn fs_set(xs: &[Element]) -> Result<BTreeSet<Element>, GroupError> {
    fs_set_with_limit(xs, DEFAULT_FS_LIMIT)
}

pub fn fs_set_with_limit(xs: &[Element], limit: usize) -> Result<BTreeSet<Element>, GroupError> {
    Ok(fs_formal(xs, limit)?.into_iter().map(|f| f.value).collect())
}

/// A `rows x cols` array of elements `x[α][i]` over one group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Element>,
}

impl IndexedMatrix {
    /// `entries` is row-major.
    pub fn new(rows: usize, cols: usize, entries: Vec<Element>) -> Result<Self, GroupError> {
        if rows == 0 || cols == 0 {
            return Err(GroupError::InvalidSpec("matrix must be nonempty".into()));
        }
        if entries.len() != rows * cols {
            return Err(GroupError::InvalidSpec(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.same_group(&entries[0])) {
            return Err(GroupError::SpecMismatch);
        }
        Ok(IndexedMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Element>>) -> Result<Self, GroupError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(GroupError::InvalidSpec("ragged matrix".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Element {
        &self.entries[row * self.cols + col]
    }

    pub fn spec(&self) -> &Arc<GroupSpec> {
        self.entries[0].spec()
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    /// Whether all entries are pairwise distinct.
    pub fn entries_distinct(&self) -> bool {
        let set: BTreeSet<&Element> = self.entries.iter().collect();
        set.len() == self.entries.len()
    }
}

/// One formal FS_matrix sum: `(row, col)` picks with strictly increasing columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSum {
    pub picks: Vec<(usize, usize)>,
    pub value: Element,
}

/// All formal sums `x[α_1][i_1] + ... + x[α_k][i_k]` with `i_1 < ... < i_k`.
/// There are `(rows + 1)^cols - 1` of them.
pub fn fs_matrix_formal(m: &IndexedMatrix, limit: usize) -> Result<Vec<MatrixSum>, GroupError> {
    let count = (m.rows as u128 + 1)
        .checked_pow(m.cols as u32)
        .map(|c| c - 1)
        .unwrap_or(u128::MAX);
    let cap = 1u128 << limit.min(100);
    if count > cap {
        return Err(GroupError::SizeLimit { what: "FS_matrix formal sums", size: count, limit: cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut picks = Vec::new();
    collect_matrix_sums(m, 0, m.spec().zero(), &mut picks, &mut out);
    Ok(out)
}

fn collect_matrix_sums(
    m: &IndexedMatrix,
    col: usize,
    acc: Element,
    picks: &mut Vec<(usize, usize)>,
    out: &mut Vec<MatrixSum>,
) {
    if col == m.cols {
        if !picks.is_empty() {
            out.push(MatrixSum { picks: picks.clone(), value: acc });
        }
        return;
    }
    collect_matrix_sums(m, col + 1, acc.clone(), picks, out);
    for row in 0..m.rows {
        picks.push((row, col));
        collect_matrix_sums(m, col + 1, acc.add_unchecked(m.get(row, col)), picks, out);
        picks.pop();
    }
}

pub fn fs_matrix(m: &IndexedMatrix) -> Result<BTreeSet<Element>, GroupError> {
    Ok(fs_matrix_formal(m, DEFAULT_FS_LIMIT)?
        .into_iter()
        .map(|s| s.value)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(g: &Arc<GroupSpec>, v: &[i64]) -> Element {
        Element::from_ints(g, v).unwrap()
    }

    #[test]
    fn pair_and_singleton() {
        let g = GroupSpec::cyclic_power(5, 2).unwrap();
        let (x, y) = (el(&g, &[1, 0]), el(&g, &[0, 2]));
        let fs = fs_set(&[x.clone(), y.clone()]).unwrap();
        let expect: BTreeSet<_> = [x.clone(), y.clone(), x.add(&y).unwrap()].into();
        assert_eq!(fs, expect);
        assert_eq!(fs_set(std::slice::from_ref(&x)).unwrap(), [x].into());
    }

    #[test]
    fn boolean_collisions_merge() {
        // the seven subset sums of {10, 01, 11} hit only four values
        let g = GroupSpec::cyclic_power(2, 2).unwrap();
        let xs = [el(&g, &[1, 0]), el(&g, &[0, 1]), el(&g, &[1, 1])];
        assert_eq!(fs_formal(&xs, 20).unwrap().len(), 7);
        let fs = fs_set(&xs).unwrap();
        assert_eq!(fs.len(), 4);
        assert!(fs.contains(&g.zero()));
    }

    #[test]
    fn limits_and_duplicates() {
        let g = GroupSpec::cyclic_power(2, 5).unwrap();
        let all = g.elements().unwrap();
        assert!(matches!(fs_set_with_limit(&all[..4], 3), Err(GroupError::SizeLimit { .. })));
        let x = el(&g, &[1, 0, 0, 0, 0]);
        assert!(matches!(fs_set(&[x.clone(), x]), Err(GroupError::Duplicate(_))));
    }

    #[test]
    fn matrix_with_one_row_is_plain_fs() {
        let g = GroupSpec::cyclic_power(7, 3).unwrap();
        let row = vec![el(&g, &[1, 0, 0]), el(&g, &[0, 3, 0]), el(&g, &[2, 2, 5])];
        let m = IndexedMatrix::from_rows(vec![row.clone()]).unwrap();
        assert_eq!(fs_matrix(&m).unwrap(), fs_set(&row).unwrap());
        let single = IndexedMatrix::from_rows(vec![vec![row[0].clone()]]).unwrap();
        assert_eq!(fs_matrix(&single).unwrap(), [row[0].clone()].into());
    }

    #[test]
    fn two_by_two_has_eight_formal_sums() {
        let g = GroupSpec::int_box(10, 4).unwrap();
        let e = |i: usize| g.basis(i);
        let m = IndexedMatrix::from_rows(vec![vec![e(0), e(1)], vec![e(2), e(3)]]).unwrap();
        let formal = fs_matrix_formal(&m, 20).unwrap();
        assert_eq!(formal.len(), 8);
        // hand enumeration: x_{a,0}, x_{a,1}, x_{a,0} + x_{b,1}
        let mut expect = BTreeSet::new();
        for a in 0..2 {
            expect.insert(m.get(a, 0).clone());
            expect.insert(m.get(a, 1).clone());
            for b in 0..2 {
                expect.insert(m.get(a, 0).add(m.get(b, 1)).unwrap());
            }
        }
        assert_eq!(fs_matrix(&m).unwrap(), expect);
        for s in &formal {
            assert!(s.picks.windows(2).all(|w| w[0].1 < w[1].1));
        }
    }
}
