//! Seeded instance generators.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::error::{IglError, Result};
use crate::graph::{EdgeId, VertexId, WeightedGraph};
use crate::planar::PlaneGraph;
use crate::treewidth::TreeDecomposition;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Distribution of generated edge lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightSpec {
    Unit,
    /// Uniform integers in `[lo, hi]`.
    Integer { lo: u32, hi: u32 },
    /// `p/q` with `p ∈ [1, max_num]`, `q ∈ [1, max_den]`.
    Rational { max_num: u32, max_den: u32 },
}

impl WeightSpec {
    pub fn sample(&self, rng: &mut impl Rng) -> BigRational {
        match *self {
            WeightSpec::Unit => BigRational::from_integer(1.into()),
            WeightSpec::Integer { lo, hi } => BigRational::from_integer(rng.gen_range(lo..=hi).into()),
            WeightSpec::Rational { max_num, max_den } => {
                BigRational::new(rng.gen_range(1..=max_num).into(), rng.gen_range(1..=max_den).into())
            }
        }
    }
}

impl std::str::FromStr for WeightSpec {
    type Err = IglError;
    /// `unit`, `int:LO:HI` or `rational:P:Q`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.parse::<u32>().map_err(|_| IglError::invalid(format!("bad weight spec '{s}'")));
        match parts.as_slice() {
            ["unit"] => Ok(WeightSpec::Unit),
            ["int", lo, hi] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                if lo == 0 || lo > hi {
                    return Err(IglError::invalid(format!("bad weight range in '{s}'")));
                }
                Ok(WeightSpec::Integer { lo, hi })
            }
            ["rational", p, q] => {
                let (p, q) = (num(p)?, num(q)?);
                if p == 0 || q == 0 {
                    return Err(IglError::invalid(format!("bad weight range in '{s}'")));
                }
                Ok(WeightSpec::Rational { max_num: p, max_den: q })
            }
            _ => Err(IglError::invalid(format!("bad weight spec '{s}'"))),
        }
    }
}

/// Random `k`-tree on `n` vertices with its width-`k` decomposition. With
/// `drop_prob > 0` each edge is removed independently (a partial `k`-tree;
/// the decomposition stays valid).
pub fn ktree(
    n: usize,
    k: usize,
    weights: WeightSpec,
    drop_prob: f64,
    seed: u64,
) -> Result<(WeightedGraph<BigRational>, TreeDecomposition)> {
    if n < k + 1 {
        return Err(IglError::invalid(format!("a {k}-tree needs at least {} vertices", k + 1)));
    }
    let mut rng = rng(seed);
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut bags: Vec<Vec<VertexId>> = vec![(0..=k).collect()];
    let mut tree = Vec::new();
    for u in 0..=k {
        for v in u + 1..=k {
            edges.push((u, v));
        }
    }
    for v in k + 1..n {
        let parent = rng.gen_range(0..bags.len());
        let mut base = bags[parent].clone();
        base.shuffle(&mut rng);
        base.truncate(k);
        for &u in &base {
            edges.push((u, v));
        }
        base.push(v);
        tree.push((parent, bags.len()));
        bags.push(base);
    }
    let mut list = Vec::with_capacity(edges.len());
    for (u, v) in edges {
        if drop_prob > 0.0 && rng.gen_bool(drop_prob.min(1.0)) {
            continue;
        }
        list.push((u, v, weights.sample(&mut rng)));
    }
    let g = WeightedGraph::from_edges(n, list)?;
    Ok((g, TreeDecomposition::new(bags, &tree)?))
}

/// Connected graph on `n` vertices with roughly `m` edges: a random spanning
/// tree plus random chords.
pub fn random_connected(n: usize, m: usize, weights: WeightSpec, seed: u64) -> WeightedGraph<BigRational> {
    let mut rng = rng(seed);
    let mut list = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        list.push((u, v, weights.sample(&mut rng)));
    }
    if n >= 2 {
        for _ in n.saturating_sub(1)..m {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                list.push((u, v, weights.sample(&mut rng)));
            }
        }
    }
    WeightedGraph::from_edges(n, list).expect("generated edges are valid")
}

/// Random graph with independent edges of probability `p`.
pub fn random_gnp(n: usize, p: f64, weights: WeightSpec, seed: u64) -> WeightedGraph<BigRational> {
    let mut rng = rng(seed);
    let mut list = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                list.push((u, v, weights.sample(&mut rng)));
            }
        }
    }
    WeightedGraph::from_edges(n, list).expect("generated edges are valid")
}

/// `w × h` grid; vertex `(x, y)` is `y·w + x`, rotation N, E, S, W.
pub fn grid(w: usize, h: usize, weights: WeightSpec, seed: u64) -> Result<PlaneGraph<BigRational>> {
    if w == 0 || h == 0 {
        return Err(IglError::invalid("grid sides must be positive"));
    }
    let mut rng = rng(seed);
    let id = |x: usize, y: usize| y * w + x;
    let mut list = Vec::new();
    let mut horiz = vec![usize::MAX; w * h];
    let mut vert = vec![usize::MAX; w * h];
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                horiz[id(x, y)] = list.len();
                list.push((id(x, y), id(x + 1, y), weights.sample(&mut rng)));
            }
            if y + 1 < h {
                vert[id(x, y)] = list.len();
                list.push((id(x, y), id(x, y + 1), weights.sample(&mut rng)));
            }
        }
    }
    let mut rot = vec![Vec::new(); w * h];
    for y in 0..h {
        for x in 0..w {
            let r = &mut rot[id(x, y)];
            if y > 0 {
                r.push(vert[id(x, y - 1)]);
            }
            if x + 1 < w {
                r.push(horiz[id(x, y)]);
            }
            if y + 1 < h {
                r.push(vert[id(x, y)]);
            }
            if x > 0 {
                r.push(horiz[id(x - 1, y)]);
            }
        }
    }
    PlaneGraph::new(WeightedGraph::from_edges(w * h, list)?, rot)
}

/// Random triangulation of the sphere on `n ≥ 3` vertices: stacked
/// insertions into random faces followed by `flips` random edge flips.
pub fn random_triangulation(n: usize, weights: WeightSpec, flips: usize, seed: u64) -> Result<PlaneGraph<BigRational>> {
    if n < 3 {
        return Err(IglError::invalid("a triangulation needs at least 3 vertices"));
    }
    let mut rng = rng(seed);
    let mut edges: Vec<(VertexId, VertexId)> = vec![(0, 1), (1, 2), (2, 0)];
    let mut rot: Vec<Vec<EdgeId>> = vec![vec![0, 2], vec![1, 0], vec![2, 1]];
    rot.resize(n, Vec::new());
    let mut adj: std::collections::HashMap<(VertexId, VertexId), EdgeId> =
        edges.iter().enumerate().map(|(e, &(u, v))| ((u.min(v), u.max(v)), e)).collect();
    let find = |adj: &std::collections::HashMap<(VertexId, VertexId), EdgeId>, u: VertexId, v: VertexId| adj[&(u.min(v), u.max(v))];
    let insert_after = |rot: &mut Vec<Vec<EdgeId>>, at: VertexId, after: EdgeId, e: EdgeId| {
        let p = rot[at].iter().position(|&f| f == after).unwrap();
        rot[at].insert(p + 1, e);
    };
    let mut faces: Vec<[VertexId; 3]> = vec![[0, 1, 2], [0, 2, 1]];
    for v in 3..n {
        let fi = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[fi];
        let (eab, ebc, eca) = (find(&adj, a, b), find(&adj, b, c), find(&adj, c, a));
        let base = edges.len();
        let (eva, evb, evc) = (base, base + 1, base + 2);
        edges.extend([(v, a), (v, b), (v, c)]);
        adj.insert((a.min(v), a.max(v)), eva);
        adj.insert((b.min(v), b.max(v)), evb);
        adj.insert((c.min(v), c.max(v)), evc);
        insert_after(&mut rot, b, eab, evb);
        insert_after(&mut rot, c, ebc, evc);
        insert_after(&mut rot, a, eca, eva);
        rot[v] = vec![evb, eva, evc];
        faces[fi] = [a, b, v];
        faces.push([b, c, v]);
        faces.push([c, a, v]);
    }
    let other = |e: EdgeId, x: VertexId, edges: &[(VertexId, VertexId)]| {
        let (p, q) = edges[e];
        if p == x {
            q
        } else {
            p
        }
    };
    let succ = |rot: &[Vec<EdgeId>], at: VertexId, e: EdgeId| {
        let r = &rot[at];
        let p = r.iter().position(|&f| f == e).unwrap();
        r[(p + 1) % r.len()]
    };
    for _ in 0..flips {
        let e = rng.gen_range(0..edges.len());
        let (x, y) = edges[e];
        if rot[x].len() <= 3 || rot[y].len() <= 3 {
            continue;
        }
        let eyu = succ(&rot, y, e);
        let exw = succ(&rot, x, e);
        let u = other(eyu, y, &edges);
        let w = other(exw, x, &edges);
        if u == w || adj.contains_key(&(u.min(w), u.max(w))) {
            continue;
        }
        rot[x].retain(|&f| f != e);
        rot[y].retain(|&f| f != e);
        adj.remove(&(x.min(y), x.max(y)));
        edges[e] = (u, w);
        adj.insert((u.min(w), u.max(w)), e);
        insert_after(&mut rot, w, exw, e);
        insert_after(&mut rot, u, eyu, e);
    }
    let list: Vec<_> = edges.iter().map(|&(u, v)| (u, v, weights.sample(&mut rng))).collect();
    let pg = PlaneGraph::new(WeightedGraph::from_edges(n, list)?, rot)?;
    pg.check_euler()?;
    Ok(pg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ktree_shape() {
        let (g, td) = ktree(40, 3, WeightSpec::Unit, 0.0, 7).unwrap();
        assert_eq!(g.m(), 6 + 3 * 36);
        assert_eq!(td.width(), 3);
        td.validate(&g).unwrap();
        let (p, ptd) = ktree(40, 3, WeightSpec::Integer { lo: 1, hi: 5 }, 0.3, 7).unwrap();
        assert!(p.m() < g.m());
        ptd.validate(&p).unwrap();
    }

    #[test]
    fn grid_two_by_two_is_a_square() {
        let g = grid(2, 2, WeightSpec::Unit, 0).unwrap();
        assert_eq!((g.n(), g.m(), g.faces().len()), (4, 4, 2));
        let g = grid(3, 3, WeightSpec::Unit, 0).unwrap();
        assert_eq!(g.faces().len(), 5);
        g.check_euler().unwrap();
    }

    #[test]
    fn triangulations_are_triangulated() {
        for seed in 0..5 {
            let t = random_triangulation(100, WeightSpec::Unit, 300, seed).unwrap();
            assert!(t.is_triangulated());
            assert_eq!(t.m(), 3 * 100 - 6);
        }
    }

    #[test]
    fn weight_specs() {
        assert_eq!("int:1:20".parse::<WeightSpec>().unwrap(), WeightSpec::Integer { lo: 1, hi: 20 });
        assert!("int:0:3".parse::<WeightSpec>().is_err());
        assert!("gauss".parse::<WeightSpec>().is_err());
    }
}
