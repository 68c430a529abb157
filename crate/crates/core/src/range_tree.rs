//! Static d-dimensional range trees with canonical subsets.
//!
//! A box query returns identifiers of pairwise disjoint canonical subsets
//! whose union is exactly the set of points inside the box.

use std::ops::Bound;

use crate::error::{IglError, Result};
use crate::scalar::Scalar;

/// Identifier of a canonical subset: `(start << 32) | len` into the shared
/// member array of the tree.
pub type CanonicalId = u64;

#[derive(Clone, Debug, PartialEq)]
pub struct Interval<T> {
    pub lo: Bound<T>,
    pub hi: Bound<T>,
}

impl<T: Scalar> Interval<T> {
    pub fn all() -> Self {
        Interval { lo: Bound::Unbounded, hi: Bound::Unbounded }
    }

    pub fn closed(lo: T, hi: T) -> Self {
        Interval { lo: Bound::Included(lo), hi: Bound::Included(hi) }
    }

    pub fn open(lo: T, hi: T) -> Self {
        Interval { lo: Bound::Excluded(lo), hi: Bound::Excluded(hi) }
    }

    fn below(&self, x: &T) -> bool {
        match &self.lo {
            Bound::Included(l) => x < l,
            Bound::Excluded(l) => x <= l,
            Bound::Unbounded => false,
        }
    }

    fn above(&self, x: &T) -> bool {
        match &self.hi {
            Bound::Included(h) => x > h,
            Bound::Excluded(h) => x >= h,
            Bound::Unbounded => false,
        }
    }

    pub fn contains(&self, x: &T) -> bool {
        !self.below(x) && !self.above(x)
    }
}

/// Product of intervals, one per dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryBox<T> {
    pub dims: Vec<Interval<T>>,
}

impl<T: Scalar> QueryBox<T> {
    pub fn all(d: usize) -> Self {
        QueryBox { dims: vec![Interval::all(); d] }
    }

    pub fn contains(&self, p: &[T]) -> bool {
        self.dims.iter().zip(p).all(|(iv, x)| iv.contains(x))
    }
}

#[derive(Clone, Debug)]
pub struct PointSet<T> {
    d: usize,
    coords: Vec<T>,
    payload: Vec<usize>,
}

impl<T: Scalar> PointSet<T> {
    pub fn new(d: usize) -> Self {
        PointSet { d, coords: Vec::new(), payload: Vec::new() }
    }

    pub fn push(&mut self, coords: Vec<T>, payload: usize) -> Result<()> {
        if coords.len() != self.d {
            return Err(IglError::Dimension { expected: self.d, got: coords.len() });
        }
        self.coords.extend(coords);
        self.payload.push(payload);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.payload.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payload.is_empty()
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn coord(&self, i: usize, j: usize) -> &T {
        &self.coords[i * self.d + j]
    }

    pub fn payload(&self, i: usize) -> usize {
        self.payload[i]
    }
}

#[derive(Clone, Copy, Debug)]
enum Assoc {
    Line { start: u32, len: u32 },
    Tree(u32),
}

#[derive(Clone, Debug)]
struct Node<T> {
    min: T,
    max: T,
    children: Option<(u32, u32)>,
    assoc: Assoc,
}

#[derive(Clone, Debug)]
pub struct RangeTree<T> {
    points: PointSet<T>,
    nodes: Vec<Node<T>>,
    members: Vec<u32>,
    root: Option<Assoc>,
}

impl<T: Scalar> RangeTree<T> {
    pub fn build(points: PointSet<T>) -> Result<Self> {
        let d = points.d;
        if d == 0 {
            return Err(IglError::invalid("range tree needs dimension ≥ 1"));
        }
        let mut tree = RangeTree { points, nodes: Vec::new(), members: Vec::new(), root: None };
        let n = tree.points.len();
        if n == 0 {
            return Ok(tree);
        }
        let lists: Vec<Vec<u32>> = (0..d)
            .map(|j| {
                let mut v: Vec<u32> = (0..n as u32).collect();
                v.sort_by(|&a, &b| tree.key_cmp(a, b, j));
                v
            })
            .collect();
        let mut mark = vec![false; n];
        let root = tree.build_level(lists, &mut mark);
        tree.root = Some(root);
        Ok(tree)
    }

    fn key_cmp(&self, a: u32, b: u32, j: usize) -> std::cmp::Ordering {
        let (a, b) = (a as usize, b as usize);
        self.points
            .coord(a, j)
            .total_cmp(self.points.coord(b, j))
            .then(self.points.payload[a].cmp(&self.points.payload[b]))
            .then(a.cmp(&b))
    }

    fn build_level(&mut self, mut lists: Vec<Vec<u32>>, mark: &mut [bool]) -> Assoc {
        let k = lists.len();
        if k == 1 {
            let start = self.members.len();
            let list = lists.pop().unwrap();
            let len = list.len();
            assert!(start + len <= u32::MAX as usize, "range tree exceeds 2^32 members");
            self.members.extend(list);
            return Assoc::Line { start: start as u32, len: len as u32 };
        }
        let split = &lists[k - 1];
        let len = split.len();
        let min = self.points.coord(split[0] as usize, k - 1).clone();
        let max = self.points.coord(split[len - 1] as usize, k - 1).clone();
        let id = self.nodes.len();
        self.nodes.push(Node { min, max, children: None, assoc: Assoc::Tree(0) });
        let children = if len > 1 {
            let half = len.div_ceil(2);
            for &p in &split[..half] {
                mark[p as usize] = true;
            }
            for &p in &split[half..] {
                mark[p as usize] = false;
            }
            let (left, right): (Vec<Vec<u32>>, Vec<Vec<u32>>) = lists
                .iter()
                .map(|l| {
                    let (a, b): (Vec<u32>, Vec<u32>) = l.iter().partition(|&&p| mark[p as usize]);
                    (a, b)
                })
                .unzip();
            let l = self.build_level(left, mark);
            let r = self.build_level(right, mark);
            match (l, r) {
                (Assoc::Tree(l), Assoc::Tree(r)) => Some((l, r)),
                _ => unreachable!(),
            }
        } else {
            None
        };
        lists.pop();
        let assoc = self.build_level(lists, mark);
        self.nodes[id].children = children;
        self.nodes[id].assoc = assoc;
        Assoc::Tree(id as u32)
    }

    pub fn points(&self) -> &PointSet<T> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point indices (into the point set) of a canonical subset.
    pub fn members(&self, id: CanonicalId) -> &[u32] {
        let start = (id >> 32) as usize;
        let len = (id & 0xffff_ffff) as usize;
        &self.members[start..start + len]
    }

    pub fn query(&self, r: &QueryBox<T>) -> Result<Vec<CanonicalId>> {
        let mut out = Vec::new();
        self.query_into(r, &mut out)?;
        Ok(out)
    }

    pub fn query_into(&self, r: &QueryBox<T>, out: &mut Vec<CanonicalId>) -> Result<()> {
        if r.dims.len() != self.points.d {
            return Err(IglError::Dimension { expected: self.points.d, got: r.dims.len() });
        }
        if let Some(root) = self.root {
            self.query_assoc(root, r, self.points.d, out);
        }
        Ok(())
    }

    fn query_assoc(&self, a: Assoc, r: &QueryBox<T>, k: usize, out: &mut Vec<CanonicalId>) {
        match a {
            Assoc::Line { start, len } => {
                let slice = &self.members[start as usize..(start + len) as usize];
                let iv = &r.dims[0];
                let lo = slice.partition_point(|&p| iv.below(self.points.coord(p as usize, 0)));
                let hi = slice.partition_point(|&p| !iv.above(self.points.coord(p as usize, 0)));
                if lo < hi {
                    decompose(start as u64, 0, len as u64, lo as u64, hi as u64, out);
                }
            }
            Assoc::Tree(id) => {
                let node = &self.nodes[id as usize];
                let iv = &r.dims[k - 1];
                if iv.above(&node.min) || iv.below(&node.max) {
                    return;
                }
                if !iv.below(&node.min) && !iv.above(&node.max) {
                    self.query_assoc(node.assoc, r, k - 1, out);
                    return;
                }
                if let Some((l, rr)) = node.children {
                    self.query_assoc(Assoc::Tree(l), r, k, out);
                    self.query_assoc(Assoc::Tree(rr), r, k, out);
                }
            }
        }
    }

    /// Every registered canonical subset, for inspection.
    pub fn canonical_sets(&self) -> Vec<CanonicalId> {
        let mut out = Vec::new();
        let mut lines = Vec::new();
        if let Some(root) = self.root {
            self.collect_lines(root, &mut lines);
        }
        for (start, len) in lines {
            enumerate_segments(start as u64, 0, len as u64, &mut out);
        }
        out
    }

    fn collect_lines(&self, a: Assoc, lines: &mut Vec<(u32, u32)>) {
        match a {
            Assoc::Line { start, len } => lines.push((start, len)),
            Assoc::Tree(id) => {
                let node = &self.nodes[id as usize];
                self.collect_lines(node.assoc, lines);
                if let Some((l, r)) = node.children {
                    self.collect_lines(Assoc::Tree(l), lines);
                    self.collect_lines(Assoc::Tree(r), lines);
                }
            }
        }
    }

    /// `Σ |P_i|` over all canonical subsets.
    pub fn total_canonical_size(&self) -> u64 {
        self.canonical_sets().iter().map(|id| id & 0xffff_ffff).sum()
    }
}

fn split_point(lo: u64, hi: u64) -> u64 {
    lo + (hi - lo).div_ceil(2)
}

fn decompose(base: u64, lo: u64, hi: u64, a: u64, b: u64, out: &mut Vec<CanonicalId>) {
    if b <= lo || hi <= a {
        return;
    }
    if a <= lo && hi <= b {
        out.push(((base + lo) << 32) | (hi - lo));
        return;
    }
    let mid = split_point(lo, hi);
    decompose(base, lo, mid, a, b, out);
    decompose(base, mid, hi, a, b, out);
}

fn enumerate_segments(base: u64, lo: u64, hi: u64, out: &mut Vec<CanonicalId>) {
    out.push(((base + lo) << 32) | (hi - lo));
    if hi - lo > 1 {
        let mid = split_point(lo, hi);
        enumerate_segments(base, lo, mid, out);
        enumerate_segments(base, mid, hi, out);
    }
}

/// `B(n, d) = binom(d + ⌈log₂ n⌉, d)`.
pub fn b_bound(n: usize, d: usize) -> f64 {
    let l = if n <= 1 { 0 } else { (n as f64).log2().ceil() as usize };
    let mut r = 1.0;
    for i in 1..=d {
        r = r * (l + i) as f64 / i as f64;
    }
    r
}
