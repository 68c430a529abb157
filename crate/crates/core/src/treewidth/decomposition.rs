use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;
use std::fmt::Write as _;

use crate::error::{IglError, Result};
use crate::graph::{VertexId, WeightedGraph};
use crate::scalar::Scalar;

/// Bags over vertex ids plus a tree over bag indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<VertexId>>,
    pub adj: Vec<Vec<usize>>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<VertexId>>, tree_edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); bags.len()];
        for &(a, b) in tree_edges {
            if a >= bags.len() || b >= bags.len() || a == b {
                return Err(IglError::invalid(format!("bad decomposition tree edge ({a},{b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut bags = bags;
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        Ok(TreeDecomposition { bags, adj })
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ns) in self.adj.iter().enumerate() {
            for &b in ns {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Checks the three decomposition axioms and that the bag graph is a tree.
    pub fn validate<T: Scalar>(&self, g: &WeightedGraph<T>) -> Result<()> {
        let n = g.n();
        let nb = self.bags.len();
        if n > 0 && nb == 0 {
            return Err(IglError::invariant("decomposition has no bags"));
        }
        let edges: usize = self.adj.iter().map(|a| a.len()).sum::<usize>() / 2;
        if nb > 0 && edges != nb - 1 {
            return Err(IglError::invariant("decomposition tree must have #bags − 1 edges"));
        }
        if nb > 0 {
            let mut seen = vec![false; nb];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(b) = stack.pop() {
                for &c in &self.adj[b] {
                    if !seen[c] {
                        seen[c] = true;
                        stack.push(c);
                    }
                }
            }
            if seen.iter().any(|s| !s) {
                return Err(IglError::invariant("decomposition tree is disconnected"));
            }
        }
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    return Err(IglError::invariant(format!("bag {i} holds unknown vertex {v}")));
                }
                holders[v].push(i);
            }
        }
        if let Some(v) = holders.iter().position(|h| h.is_empty()) {
            return Err(IglError::invariant(format!("vertex {v} is in no bag")));
        }
        let mut in_set = vec![false; nb];
        for (v, hs) in holders.iter().enumerate() {
            for &b in hs {
                in_set[b] = true;
            }
            let mut seen = 1;
            let mut stack = vec![hs[0]];
            let mut visited = vec![hs[0]];
            in_set[hs[0]] = false;
            while let Some(b) = stack.pop() {
                for &c in &self.adj[b] {
                    if in_set[c] {
                        in_set[c] = false;
                        seen += 1;
                        stack.push(c);
                        visited.push(c);
                    }
                }
            }
            for &b in hs {
                in_set[b] = false;
            }
            if seen != hs.len() {
                return Err(IglError::invariant(format!("bags of vertex {v} are not connected")));
            }
        }
        for (u, v, _) in g.edges() {
            let ok = holders[u].iter().any(|&b| self.bags[b].binary_search(&v).is_ok());
            if !ok {
                return Err(IglError::invariant(format!("edge ({u},{v}) is in no bag")));
            }
        }
        Ok(())
    }

    /// Restricts to the bags meeting `vertices`, relabelled through `local`
    /// (`usize::MAX` marks dropped vertices).
    pub fn restrict(&self, keep_bag: &[bool], local: &[usize]) -> TreeDecomposition {
        let mut bag_map = vec![usize::MAX; self.bags.len()];
        let mut bags = Vec::new();
        for (i, bag) in self.bags.iter().enumerate() {
            if !keep_bag[i] {
                continue;
            }
            let nb: Vec<VertexId> = bag.iter().filter(|&&v| local[v] != usize::MAX).map(|&v| local[v]).collect();
            bag_map[i] = bags.len();
            bags.push(nb);
        }
        let mut adj = vec![Vec::new(); bags.len()];
        for (a, ns) in self.adj.iter().enumerate() {
            if bag_map[a] == usize::MAX {
                continue;
            }
            for &b in ns {
                if bag_map[b] != usize::MAX {
                    adj[bag_map[a]].push(bag_map[b]);
                }
            }
        }
        for b in &mut bags {
            b.sort_unstable();
        }
        TreeDecomposition { bags, adj }
    }

    /// PACE 2017 `.td` text (1-based ids).
    pub fn to_pace(&self, n: usize) -> String {
        let mut out = format!("s td {} {} {}\n", self.bags.len(), self.width() + 1, n);
        for (i, bag) in self.bags.iter().enumerate() {
            write!(out, "b {}", i + 1).unwrap();
            for v in bag {
                write!(out, " {}", v + 1).unwrap();
            }
            out.push('\n');
        }
        for (a, b) in self.tree_edges() {
            writeln!(out, "{} {}", a + 1, b + 1).unwrap();
        }
        out
    }

    pub fn parse_pace(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut bags: Vec<Option<Vec<VertexId>>> = Vec::new();
        let mut edges = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let ln = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let int = |t: &str| t.parse::<usize>().map_err(|_| IglError::parse(ln, format!("bad integer '{t}'")));
            match toks[0] {
                "s" => {
                    if toks.len() != 5 || toks[1] != "td" {
                        return Err(IglError::parse(ln, "header must be 's td <bags> <width+1> <n>'"));
                    }
                    let nb = int(toks[2])?;
                    let n = int(toks[4])?;
                    header = Some((nb, n));
                    bags = vec![None; nb];
                }
                "b" => {
                    let (nb, n) = header.ok_or_else(|| IglError::parse(ln, "bag before header"))?;
                    if toks.len() < 2 {
                        return Err(IglError::parse(ln, "missing bag id"));
                    }
                    let id = int(toks[1])?;
                    if id == 0 || id > nb {
                        return Err(IglError::parse(ln, format!("bag id {id} out of range")));
                    }
                    let mut bag = Vec::new();
                    for t in &toks[2..] {
                        let v = int(t)?;
                        if v == 0 || v > n {
                            return Err(IglError::parse(ln, format!("vertex {v} out of range")));
                        }
                        bag.push(v - 1);
                    }
                    if bags[id - 1].replace(bag).is_some() {
                        return Err(IglError::parse(ln, format!("bag {id} given twice")));
                    }
                }
                _ => {
                    let (nb, _) = header.ok_or_else(|| IglError::parse(ln, "edge before header"))?;
                    if toks.len() != 2 {
                        return Err(IglError::parse(ln, "tree edge must be '<i> <j>'"));
                    }
                    let (a, b) = (int(toks[0])?, int(toks[1])?);
                    if a == 0 || b == 0 || a > nb || b > nb {
                        return Err(IglError::parse(ln, "tree edge out of range"));
                    }
                    edges.push((a - 1, b - 1));
                }
            }
        }
        if header.is_none() {
            return Err(IglError::parse(1, "missing 's td' header"));
        }
        let bags: Vec<Vec<VertexId>> = bags.into_iter().map(|b| b.unwrap_or_default()).collect();
        TreeDecomposition::new(bags, &edges).map_err(|e| IglError::parse(0, e.to_string()))
    }
}

/// Greedy min-fill elimination; ties by smaller degree, then smaller id.
pub fn min_fill<T: Scalar>(g: &WeightedGraph<T>) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition { bags: Vec::new(), adj: Vec::new() };
    }
    let mut nb: Vec<BTreeSet<VertexId>> = (0..n).map(|v| g.neighbors(v).iter().map(|&(u, _)| u).collect()).collect();
    let fill = |nb: &[BTreeSet<VertexId>], v: VertexId| -> usize {
        let ns: Vec<VertexId> = nb[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                if !nb[a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    };
    let mut version = vec![0usize; n];
    let mut heap = BinaryHeap::new();
    for v in 0..n {
        heap.push(Reverse((fill(&nb, v), nb[v].len(), v, 0usize)));
    }
    let mut eliminated = vec![false; n];
    let mut position = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    let mut later_nbrs: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    while let Some(Reverse((_, _, v, ver))) = heap.pop() {
        if eliminated[v] || ver != version[v] {
            continue;
        }
        eliminated[v] = true;
        position[v] = order.len();
        order.push(v);
        let ns: Vec<VertexId> = nb[v].iter().copied().collect();
        for (i, &a) in ns.iter().enumerate() {
            nb[a].remove(&v);
            for &b in &ns[i + 1..] {
                nb[a].insert(b);
                nb[b].insert(a);
            }
        }
        later_nbrs[v] = ns.clone();
        let mut touched: BTreeSet<VertexId> = ns.iter().copied().collect();
        for &a in &ns {
            touched.extend(nb[a].iter().copied());
        }
        for u in touched {
            if !eliminated[u] {
                version[u] += 1;
                heap.push(Reverse((fill(&nb, u), nb[u].len(), u, version[u])));
            }
        }
    }
    // bag i belongs to order[i]
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let mut bag = later_nbrs[v].clone();
        bag.push(v);
        bags.push(bag);
        match later_nbrs[v].iter().map(|&u| position[u]).min() {
            Some(p) => edges.push((i, p)),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition::new(bags, &edges).expect("elimination tree")
}
