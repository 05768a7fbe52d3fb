//! Exhaustive search for adequate patterns.
//!
//! Lengths are tried in ascending order. For each length the rows of the
//! region are indexed in lexicographic order and a pattern is a sequence of
//! row indices, so the search visits patterns in lexicographic order of the
//! concatenated entries. All rows of an adequate pattern share the sigma value
//! of its first row, which splits the rows into classes; the depth-first
//! search keeps, for the next row, only the candidates `d` with
//! `sigma(d + t) = s` for every partial sum `t` placed so far.
//!
//! With symmetry reduction enabled the search only visits patterns with
//! strictly increasing rows, whose first row is lexicographically least among
//! all unit multiples of all rows, and (above `l_min`) with no zero column.
//! Each of these is the orbit-least representative of a class of adequate
//! patterns closed under row permutation, unit scaling and zero-column
//! deletion, so exhaustion remains a certificate for the full region.

use std::collections::HashMap;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::parallel::{Cancel, Workers};
use crate::pattern::{is_adequate, units, Pattern, MAX_ROWS};

/// Upper bound on the number of rows `alphabet^l` in one length.
pub const MAX_ROW_TABLE: u64 = 1 << 22;
/// Upper bound on the pairwise compatibility tables, in bits.
pub const MAX_COMPAT_BITS: u128 = 1 << 33;

const CANCEL_POLL: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("region too large at l = {l}: {what}")]
    RegionTooLarge { l: usize, what: String },
    #[error("found pattern failed self-verification: {0}")]
    SelfCheck(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub n: usize,
    pub m: u64,
    pub l_min: usize,
    pub l_max: usize,
    /// Entry bound `B` (entries in `[-B, B]`); only for `m = 0`.
    pub entry_bound: Option<u64>,
    pub deterministic: bool,
    pub threads: usize,
    pub node_cap: Option<u64>,
    pub symmetry: bool,
}

impl SearchConfig {
    pub fn new(n: usize, m: u64, l_max: usize) -> Self {
        SearchConfig {
            n,
            m,
            l_min: 1,
            l_max,
            entry_bound: None,
            deterministic: true,
            threads: 1,
            node_cap: None,
            symmetry: true,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |s: String| Err(SearchError::InvalidConfig(s));
        if self.n == 0 || self.n > MAX_ROWS {
            return bad(format!("n = {} outside 1..={MAX_ROWS}", self.n));
        }
        if self.m == 1 {
            return bad("m = 1 has no nonzero rows".into());
        }
        if self.l_min == 0 || self.l_min > self.l_max {
            return bad(format!("need 1 <= l_min <= l_max, got {}..{}", self.l_min, self.l_max));
        }
        match (self.m, self.entry_bound) {
            (0, None) | (0, Some(0)) => return bad("m = 0 needs an entry bound B >= 1".into()),
            (0, Some(b)) if b > 1 << 20 => return bad(format!("entry bound {b} too large")),
            (m, Some(_)) if m != 0 => return bad("an entry bound is only meaningful for m = 0".into()),
            _ => {}
        }
        if self.threads == 0 {
            return bad("thread budget must be at least 1".into());
        }
        Ok(())
    }

    fn alphabet(&self) -> u64 {
        match self.m {
            0 => 2 * self.entry_bound.unwrap_or(1) + 1,
            m => m,
        }
    }

    /// The region an exhaustion certificate covers.
    pub fn region(&self) -> Value {
        let mut r = json!({"n": self.n, "m": self.m, "l_min": self.l_min, "l_max": self.l_max});
        if let Some(b) = self.entry_bound {
            r["entry_bound"] = json!(b);
        }
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LengthStats {
    pub l: usize,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchStatus {
    Found { pattern: Pattern, signature: Vec<i64> },
    Exhausted,
    /// The node cap was exceeded while searching length `l`.
    Inconclusive { l: usize, node_cap: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub region: Value,
    /// Search-tree nodes (placed rows); equals `node_cap + 1` when inconclusive.
    pub nodes: u64,
    pub per_length: Vec<LengthStats>,
}

impl SearchOutcome {
    pub fn status_str(&self) -> &'static str {
        match self.status {
            SearchStatus::Found { .. } => "found",
            SearchStatus::Exhausted => "exhausted",
            SearchStatus::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn pattern(&self) -> Option<&Pattern> {
        match &self.status {
            SearchStatus::Found { pattern, .. } => Some(pattern),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "status": self.status_str(),
            "nodes": self.nodes,
            "per_length": self.per_length,
            "region": self.region,
        });
        match &self.status {
            SearchStatus::Found { pattern, signature } => {
                v["pattern"] = pattern.to_json();
                v["signature"] = json!(signature);
            }
            SearchStatus::Exhausted => {}
            SearchStatus::Inconclusive { l, node_cap } => {
                v["node_cap"] = json!(node_cap);
                v["stopped_at_l"] = json!(l);
            }
        }
        v
    }
}

/// Runs the search described by `cfg`.
pub fn search(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    search_with(cfg, Engine::Auto)
}

/// Node expansion strategy. `Auto` uses bitset compatibility tables for
/// `m >= 2` and candidate lists for `m = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Auto,
    Bitset,
    List,
}

/// [`search`] with an explicit engine. Every engine visits the same nodes in
/// the same order.
pub fn search_with(cfg: &SearchConfig, engine: Engine) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    let workers = Workers::new(cfg.threads);
    let cap = cfg.node_cap.unwrap_or(u64::MAX);
    let mut total = 0u64;
    let mut per_length = Vec::new();
    for l in cfg.l_min..=cfg.l_max {
        let table = RowTable::new(cfg, l)?;
        let use_bitset = match engine {
            Engine::Auto => cfg.m != 0,
            Engine::Bitset => true,
            Engine::List => false,
        };
        if use_bitset && cfg.m == 0 {
            return Err(SearchError::InvalidConfig("bitset engine needs m >= 2".into()));
        }
        let ctx = Context::new(cfg, table, l > cfg.l_min, use_bitset, &workers)?;
        let remaining = cap - total;
        let results = workers.scan(ctx.table.count, cfg.deterministic, |r0, cancel| {
            let res = ctx.run_task(r0, remaining, cancel)?;
            let hit = res.found.is_some() || res.capped;
            Some((res, hit))
        });
        let mut here = 0u64;
        for (res, _) in results {
            if res.capped || here + res.nodes > remaining {
                per_length.push(LengthStats { l, nodes: remaining + 1 });
                return Ok(SearchOutcome {
                    status: SearchStatus::Inconclusive { l, node_cap: cap },
                    region: cfg.region(),
                    nodes: cap.saturating_add(1),
                    per_length,
                });
            }
            here += res.nodes;
            if let Some(rows) = res.found {
                total += here;
                per_length.push(LengthStats { l, nodes: here });
                let pattern = ctx.table.pattern(&rows)?;
                let report = is_adequate(&pattern);
                let Some(signature) = report.signature.filter(|_| report.adequate) else {
                    return Err(SearchError::SelfCheck(pattern.to_json().to_string()));
                };
                return Ok(SearchOutcome {
                    status: SearchStatus::Found { pattern, signature },
                    region: cfg.region(),
                    nodes: total,
                    per_length,
                });
            }
        }
        total += here;
        per_length.push(LengthStats { l, nodes: here });
    }
    Ok(SearchOutcome { status: SearchStatus::Exhausted, region: cfg.region(), nodes: total, per_length })
}

/// All rows of one length in lexicographic order, as a flat table.
struct RowTable {
    m: u64,
    l: usize,
    /// Value of digit 0 (`-B` for `m = 0`).
    low: i32,
    alphabet: usize,
    count: usize,
    entries: Vec<i32>,
}

impl RowTable {
    fn new(cfg: &SearchConfig, l: usize) -> Result<Self, SearchError> {
        let alphabet = cfg.alphabet();
        let count = alphabet
            .checked_pow(l as u32)
            .filter(|&c| c <= MAX_ROW_TABLE)
            .ok_or_else(|| SearchError::RegionTooLarge {
                l,
                what: format!("{alphabet}^{l} rows exceeds {MAX_ROW_TABLE}"),
            })? as usize;
        let low = if cfg.m == 0 { -(cfg.entry_bound.unwrap() as i32) } else { 0 };
        let mut entries = vec![0i32; count * l];
        let mut digits = vec![0usize; l];
        for r in 0..count {
            for j in 0..l {
                entries[r * l + j] = low + digits[j] as i32;
            }
            for j in (0..l).rev() {
                digits[j] += 1;
                if digits[j] < alphabet as usize {
                    break;
                }
                digits[j] = 0;
            }
        }
        Ok(RowTable { m: cfg.m, l, low, alphabet: alphabet as usize, count, entries })
    }

    fn row(&self, i: usize) -> &[i32] {
        &self.entries[i * self.l..(i + 1) * self.l]
    }

    fn reduce(&self, v: i64) -> i32 {
        if self.m == 0 {
            v as i32
        } else {
            v.rem_euclid(self.m as i64) as i32
        }
    }

    fn add_into(&self, a: &[i32], b: &[i32], out: &mut [i32]) {
        for j in 0..self.l {
            out[j] = self.reduce(a[j] as i64 + b[j] as i64);
        }
    }

    /// Lexicographic index of a vector, or `None` outside the entry bound.
    fn index_of(&self, v: &[i32]) -> Option<usize> {
        let mut idx = 0usize;
        for &x in v {
            let d = x - self.low;
            if d < 0 || d as usize >= self.alphabet {
                return None;
            }
            idx = idx * self.alphabet + d as usize;
        }
        Some(idx)
    }

    fn pattern(&self, rows: &[usize]) -> Result<Pattern, SearchError> {
        let rows = rows
            .iter()
            .map(|&r| self.row(r).iter().map(|&v| v as i64).collect())
            .collect();
        Pattern::new(self.m, rows).map_err(|e| SearchError::SelfCheck(e.to_string()))
    }
}

fn sigma_matches(v: &[i32], s: &[i32]) -> bool {
    let mut k = 0;
    for &x in v {
        if x != 0 {
            if k == s.len() || s[k] != x {
                return false;
            }
            k += 1;
        }
    }
    k == s.len()
}

struct Class {
    sigma: Vec<i32>,
    members: Vec<usize>,
    words: usize,
    /// Row-major bitsets: bit `j` of row `i` is set iff
    /// `sigma(members[i] + members[j]) = sigma`.
    compat: Vec<u64>,
}

impl Class {
    fn compat_row(&self, pos: usize) -> &[u64] {
        &self.compat[pos * self.words..(pos + 1) * self.words]
    }
}

struct Context {
    n: usize,
    symmetry: bool,
    zero_column_filter: bool,
    use_bitset: bool,
    table: RowTable,
    classes: Vec<Class>,
    /// Class id and position within it for each row; `u32::MAX` for zero.
    class_of: Vec<u32>,
    pos: Vec<u32>,
    /// Least lexicographic index among the unit multiples of each row.
    unit_min: Vec<usize>,
}

struct TaskResult {
    nodes: u64,
    found: Option<Vec<usize>>,
    capped: bool,
}

impl Context {
    fn new(
        cfg: &SearchConfig,
        table: RowTable,
        zero_column_filter: bool,
        use_bitset: bool,
        workers: &Workers,
    ) -> Result<Self, SearchError> {
        let mut index: HashMap<Vec<i32>, u32> = HashMap::new();
        let mut classes: Vec<Class> = Vec::new();
        let mut class_of = vec![u32::MAX; table.count];
        let mut pos = vec![u32::MAX; table.count];
        for r in 0..table.count {
            let sigma: Vec<i32> = table.row(r).iter().copied().filter(|&v| v != 0).collect();
            if sigma.is_empty() {
                continue;
            }
            let next = classes.len() as u32;
            let c = *index.entry(sigma.clone()).or_insert(next);
            if c == next {
                classes.push(Class { sigma, members: Vec::new(), words: 0, compat: Vec::new() });
            }
            class_of[r] = c;
            pos[r] = classes[c as usize].members.len() as u32;
            classes[c as usize].members.push(r);
        }
        let us: Vec<i64> = units(cfg.m);
        let mut unit_min = vec![0usize; table.count];
        let mut buf = vec![0i32; table.l];
        for (r, slot) in unit_min.iter_mut().enumerate() {
            let mut best = r;
            for &u in &us {
                for (b, &x) in buf.iter_mut().zip(table.row(r)) {
                    *b = table.reduce(x as i64 * u);
                }
                best = best.min(table.index_of(&buf).expect("unit multiples stay in range"));
            }
            *slot = best;
        }
        if use_bitset {
            let bits: u128 = classes
                .iter()
                .filter(|c| c.members.len() >= cfg.n)
                .map(|c| (c.members.len() as u128).pow(2))
                .sum();
            if bits > MAX_COMPAT_BITS {
                return Err(SearchError::RegionTooLarge {
                    l: table.l,
                    what: format!("compatibility tables need {bits} bits"),
                });
            }
            let n = cfg.n;
            let built: Vec<Option<Vec<u64>>> = workers.map(classes.len(), |c| {
                let class = &classes[c];
                (class.members.len() >= n).then(|| build_compat(&table, class))
            });
            for (class, compat) in classes.iter_mut().zip(built) {
                class.words = class.members.len().div_ceil(64);
                class.compat = compat.unwrap_or_default();
            }
        }
        Ok(Context {
            n: cfg.n,
            symmetry: cfg.symmetry,
            zero_column_filter: zero_column_filter && cfg.symmetry,
            use_bitset,
            table,
            classes,
            class_of,
            pos,
            unit_min,
        })
    }

    fn leaf_ok(&self, rows: &[usize]) -> bool {
        if !self.zero_column_filter {
            return true;
        }
        (0..self.table.l).all(|j| rows.iter().any(|&r| self.table.row(r)[j] != 0))
    }

    fn run_task(&self, r0: usize, cap: u64, cancel: &Cancel) -> Option<TaskResult> {
        let empty = TaskResult { nodes: 0, found: None, capped: false };
        let c = self.class_of[r0];
        if c == u32::MAX {
            return Some(empty);
        }
        let class = &self.classes[c as usize];
        if class.members.len() < self.n || (self.symmetry && self.unit_min[r0] < r0) {
            return Some(empty);
        }
        let mut st = DfsState { nodes: 0, cap, rows: vec![r0], capped: false, cancelled: false };
        let found = if self.use_bitset {
            self.bitset_task(class, r0, &mut st, cancel)
        } else {
            self.list_task(class, r0, &mut st, cancel)
        };
        if st.cancelled {
            return None;
        }
        Some(TaskResult { nodes: st.nodes, found, capped: st.capped })
    }

    fn bitset_task(&self, class: &Class, r0: usize, st: &mut DfsState, cancel: &Cancel) -> Option<Vec<usize>> {
        if !st.visit(cancel) {
            return None;
        }
        if self.n == 1 {
            return self.leaf_ok(&st.rows).then(|| st.rows.clone());
        }
        let w = class.words;
        let p0 = self.pos[r0] as usize;
        let mut cand = class.compat_row(p0).to_vec();
        if self.symmetry {
            clear_upto(&mut cand, p0);
            for (i, &m) in class.members.iter().enumerate() {
                if self.unit_min[m] < r0 {
                    cand[i / 64] &= !(1u64 << (i % 64));
                }
            }
        }
        let mut levels = vec![0u64; w * self.n];
        levels[w..2 * w].copy_from_slice(&cand);
        let mut sums = vec![p0];
        self.bitset_dfs(class, 1, &mut levels, &mut sums, st, cancel)
    }

    /// `levels[k]` holds the candidates for row `k`; `sums` the class
    /// positions of all nonzero partial sums of the rows placed so far.
    fn bitset_dfs(
        &self,
        class: &Class,
        k: usize,
        levels: &mut [u64],
        sums: &mut Vec<usize>,
        st: &mut DfsState,
        cancel: &Cancel,
    ) -> Option<Vec<usize>> {
        let w = class.words;
        let mut buf = vec![0i32; self.table.l];
        for word in 0..w {
            let mut bits = levels[k * w + word];
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let p = word * 64 + b;
                let row = class.members[p];
                if !st.visit(cancel) {
                    return None;
                }
                st.rows.push(row);
                if k + 1 == self.n {
                    if self.leaf_ok(&st.rows) {
                        return Some(st.rows.clone());
                    }
                    st.rows.pop();
                    continue;
                }
                let base = sums.len();
                let (head, tail) = levels.split_at_mut((k + 1) * w);
                let next = &mut tail[..w];
                next.copy_from_slice(&head[k * w..(k + 1) * w]);
                if self.symmetry {
                    clear_upto(next, p);
                } else {
                    next[p / 64] &= !(1u64 << (p % 64));
                }
                and_into(next, class.compat_row(p));
                sums.push(p);
                for i in 0..base {
                    let t = class.members[sums[i]];
                    self.table.add_into(self.table.row(row), self.table.row(t), &mut buf);
                    let idx = self.table.index_of(&buf).expect("residues stay in range");
                    let q = self.pos[idx] as usize;
                    and_into(next, class.compat_row(q));
                    sums.push(q);
                }
                let alive = next.iter().any(|&x| x != 0);
                let res = if alive {
                    self.bitset_dfs(class, k + 1, levels, sums, st, cancel)
                } else {
                    None
                };
                sums.truncate(base);
                st.rows.pop();
                if res.is_some() || st.stopped() {
                    return res;
                }
            }
        }
        None
    }

    fn list_task(&self, class: &Class, r0: usize, st: &mut DfsState, cancel: &Cancel) -> Option<Vec<usize>> {
        if !st.visit(cancel) {
            return None;
        }
        if self.n == 1 {
            return self.leaf_ok(&st.rows).then(|| st.rows.clone());
        }
        let s = &class.sigma;
        let r0v = self.table.row(r0);
        let mut buf = vec![0i32; self.table.l];
        let cand: Vec<usize> = class
            .members
            .iter()
            .copied()
            .filter(|&d| d != r0 && (!self.symmetry || (d > r0 && self.unit_min[d] >= r0)))
            .filter(|&d| {
                self.table.add_into(self.table.row(d), r0v, &mut buf);
                sigma_matches(&buf, s)
            })
            .collect();
        let mut sums = vec![r0v.to_vec()];
        self.list_dfs(s, &cand, &mut sums, st, cancel)
    }

    fn list_dfs(
        &self,
        s: &[i32],
        cand: &[usize],
        sums: &mut Vec<Vec<i32>>,
        st: &mut DfsState,
        cancel: &Cancel,
    ) -> Option<Vec<usize>> {
        let k = st.rows.len();
        let mut buf = vec![0i32; self.table.l];
        for &row in cand {
            if !st.visit(cancel) {
                return None;
            }
            st.rows.push(row);
            if k + 1 == self.n {
                if self.leaf_ok(&st.rows) {
                    return Some(st.rows.clone());
                }
                st.rows.pop();
                continue;
            }
            let rv = self.table.row(row);
            let base = sums.len();
            let mut fresh = vec![rv.to_vec()];
            for t in &sums[..base] {
                let mut v = vec![0i32; self.table.l];
                self.table.add_into(rv, t, &mut v);
                fresh.push(v);
            }
            let next: Vec<usize> = cand
                .iter()
                .copied()
                .filter(|&d| d != row && (!self.symmetry || d > row) && !st.rows.contains(&d))
                .filter(|&d| {
                    fresh.iter().all(|t| {
                        self.table.add_into(self.table.row(d), t, &mut buf);
                        sigma_matches(&buf, s)
                    })
                })
                .collect();
            sums.extend(fresh);
            let res = if next.is_empty() { None } else { self.list_dfs(s, &next, sums, st, cancel) };
            sums.truncate(base);
            st.rows.pop();
            if res.is_some() || st.stopped() {
                return res;
            }
        }
        None
    }
}

fn build_compat(table: &RowTable, class: &Class) -> Vec<u64> {
    let n = class.members.len();
    let w = n.div_ceil(64);
    let mut out = vec![0u64; n * w];
    let mut buf = vec![0i32; table.l];
    for i in 0..n {
        for j in i + 1..n {
            table.add_into(table.row(class.members[i]), table.row(class.members[j]), &mut buf);
            if sigma_matches(&buf, &class.sigma) {
                out[i * w + j / 64] |= 1 << (j % 64);
                out[j * w + i / 64] |= 1 << (i % 64);
            }
        }
    }
    out
}

/// Clears bits `0..=p`.
fn clear_upto(bits: &mut [u64], p: usize) {
    let word = p / 64;
    for b in &mut bits[..word] {
        *b = 0;
    }
    let keep = if p % 64 == 63 { 0 } else { !0u64 << (p % 64 + 1) };
    bits[word] &= keep;
}

fn and_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= s;
    }
}

struct DfsState {
    nodes: u64,
    cap: u64,
    rows: Vec<usize>,
    capped: bool,
    cancelled: bool,
}

impl DfsState {
    /// Counts one node; false once the cap is exceeded or the task is cancelled.
    fn visit(&mut self, cancel: &Cancel) -> bool {
        self.nodes += 1;
        if self.nodes > self.cap {
            self.capped = true;
            return false;
        }
        if self.nodes.is_multiple_of(CANCEL_POLL) && cancel.is_set() {
            self.cancelled = true;
            return false;
        }
        true
    }

    fn stopped(&self) -> bool {
        self.capped || self.cancelled
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, m: u64, l_max: usize) -> SearchConfig {
        SearchConfig::new(n, m, l_max)
    }

    #[test]
    fn two_rows_mod_three() {
        let out = search(&cfg(2, 3, 3)).unwrap();
        let p = out.pattern().expect("found");
        assert!(is_adequate(p).adequate);
        assert_eq!(p.n(), 2);
    }

    #[test]
    fn three_rows_mod_two_within_eight() {
        let out = search(&cfg(3, 2, 8)).unwrap();
        let p = out.pattern().expect("found");
        assert!(is_adequate(p).adequate);
        assert_eq!(p.l(), 7);
    }

    #[test]
    fn integers_bounded_region_is_empty() {
        let mut c = cfg(3, 0, 4);
        c.entry_bound = Some(2);
        let out = search(&c).unwrap();
        assert_eq!(out.status, SearchStatus::Exhausted);
        assert_eq!(out.per_length.len(), 4);
    }

    #[test]
    fn single_row_is_first_nonzero_row() {
        let out = search(&cfg(1, 5, 3)).unwrap();
        assert_eq!(out.pattern().unwrap().rows(), &[vec![1]]);
        assert_eq!(out.nodes, 1);
    }

    #[test]
    fn node_cap_gives_inconclusive() {
        let mut c = cfg(3, 2, 8);
        c.node_cap = Some(10);
        let out = search(&c).unwrap();
        assert!(matches!(out.status, SearchStatus::Inconclusive { node_cap: 10, .. }));
        assert_eq!(out.nodes, 11);
        assert_eq!(out.per_length.iter().map(|s| s.nodes).sum::<u64>(), 11);
    }

    #[test]
    fn engines_agree() {
        for (n, m, l) in [(2, 2, 3), (2, 3, 3), (3, 2, 7), (3, 3, 4), (2, 4, 3), (2, 5, 3)] {
            for symmetry in [true, false] {
                let mut c = cfg(n, m, l);
                c.symmetry = symmetry;
                let a = search_with(&c, Engine::Bitset).unwrap();
                let b = search_with(&c, Engine::List).unwrap();
                assert_eq!(a, b, "n={n} m={m} l={l} symmetry={symmetry}");
            }
        }
    }

    #[test]
    fn thread_budget_does_not_change_outcome() {
        for (n, m, l) in [(3, 2, 8), (2, 7, 3), (3, 3, 4)] {
            let base = search(&cfg(n, m, l)).unwrap();
            for threads in [2, 5] {
                let mut c = cfg(n, m, l);
                c.threads = threads;
                assert_eq!(search(&c).unwrap(), base);
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(search(&cfg(0, 2, 3)).is_err());
        assert!(search(&cfg(2, 1, 3)).is_err());
        assert!(search(&cfg(2, 0, 3)).is_err());
        let mut c = cfg(2, 3, 3);
        c.entry_bound = Some(2);
        assert!(search(&c).is_err());
        let mut c = cfg(2, 3, 3);
        c.l_min = 4;
        assert!(search(&c).is_err());
    }

    #[test]
    fn clear_upto_boundaries() {
        let mut b = vec![!0u64; 2];
        clear_upto(&mut b, 63);
        assert_eq!(b, vec![0, !0]);
        let mut b = vec![!0u64; 2];
        clear_upto(&mut b, 0);
        assert_eq!(b, vec![!1, !0]);
    }
}
