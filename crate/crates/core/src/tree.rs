//! Rooted and unrooted trees, generators, the rooted sum/product/power
//! operations and the combinatorial functionals (moment, root-transmission).
//!
//! Vertex ids are 0-based. The text format is 1-based:
//!
//! ```text
//! 6
//! 0 1 1 2 3 3
//! ```
//!
//! where line 2 lists the parent of each vertex and `0` marks the root.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::SplitMix64;

/// Largest order any constructor will produce.
pub const DEFAULT_VERTEX_CAP: usize = 1_000_000;

fn check_cap(requested: u128, cap: usize) -> Result<()> {
    if requested > cap as u128 {
        Err(Error::Capacity { requested, cap })
    } else {
        Ok(())
    }
}

/// An immutable rooted tree stored as a parent array with derived caches.
#[derive(Debug, Clone)]
pub struct RootedTree {
    parent: Vec<Option<usize>>,
    root: usize,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    degree: Vec<usize>,
    /// Preorder (root first, children in ascending id order).
    preorder: Vec<usize>,
    /// Position of each vertex in `preorder`.
    tin: Vec<usize>,
    /// Subtree sizes.
    size: Vec<usize>,
}

impl PartialEq for RootedTree {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent
    }
}

impl Eq for RootedTree {}

impl RootedTree {
    /// Builds a tree from a 0-based parent array (`None` marks the root).
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return invalid("a rooted tree needs at least one vertex");
        }
        check_cap(n as u128, DEFAULT_VERTEX_CAP)?;
        let mut root = None;
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            match *p {
                None => {
                    if root.replace(v).is_some() {
                        return invalid("more than one root in parent array");
                    }
                }
                Some(p) if p >= n => {
                    return invalid(format!("parent {p} of vertex {v} out of range"))
                }
                Some(p) if p == v => return invalid(format!("vertex {v} is its own parent")),
                Some(p) => children[p].push(v),
            }
        }
        let root = match root {
            Some(r) => r,
            None => return invalid("parent array has no root"),
        };

        let mut depth = vec![0usize; n];
        let mut preorder = Vec::with_capacity(n);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            preorder.push(v);
            for &c in children[v].iter().rev() {
                depth[c] = depth[v] + 1;
                stack.push(c);
            }
        }
        if preorder.len() != n {
            return invalid("parent array contains a cycle or is disconnected");
        }
        let mut tin = vec![0usize; n];
        for (i, &v) in preorder.iter().enumerate() {
            tin[v] = i;
        }
        let mut size = vec![1usize; n];
        for &v in preorder.iter().rev() {
            if let Some(p) = parent[v] {
                size[p] += size[v];
            }
        }
        let degree = (0..n)
            .map(|v| children[v].len() + usize::from(parent[v].is_some()))
            .collect();

        Ok(Self {
            parent,
            root,
            children,
            depth,
            degree,
            preorder,
            tin,
            size,
        })
    }

    pub fn trivial() -> Self {
        Self::from_parents(vec![None]).expect("single vertex is a tree")
    }

    pub fn order(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    pub fn depths(&self) -> &[usize] {
        &self.depth
    }

    /// Number of vertices in the subtree hanging from `v` (including `v`).
    pub fn subtree_size(&self, v: usize) -> usize {
        self.size[v]
    }

    /// Vertices in preorder; every vertex appears after its parent.
    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// True iff `ancestor` lies on the path from `v` to the root
    /// (`v ⪯ ancestor`); every vertex is its own ancestor.
    pub fn is_ancestor_or_self(&self, ancestor: usize, v: usize) -> bool {
        let a = self.tin[ancestor];
        let b = self.tin[v];
        a <= b && b < a + self.size[ancestor]
    }

    /// Two distinct vertices with a common parent.
    pub fn are_brothers(&self, i: usize, j: usize) -> bool {
        i != j && self.parent[i].is_some() && self.parent[i] == self.parent[j]
    }

    pub fn are_adjacent(&self, i: usize, j: usize) -> bool {
        self.parent[i] == Some(j) || self.parent[j] == Some(i)
    }

    /// Edges as `(parent, child)` pairs in ascending child order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v)))
            .collect()
    }

    /// Root adjacent to every other vertex.
    pub fn is_star(&self) -> bool {
        self.children[self.root].len() + 1 == self.order()
    }

    /// Root is an endpoint of a chain containing every vertex.
    pub fn is_path(&self) -> bool {
        self.children.iter().all(|c| c.len() <= 1)
    }

    pub fn to_unrooted(&self) -> UnrootedTree {
        UnrootedTree::from_edges(self.order(), &self.edges())
            .expect("edges of a rooted tree form a tree")
    }

    /// 1-based text encoding: order on line 1, parents on line 2.
    pub fn to_text(&self) -> String {
        let parents: Vec<String> = self
            .one_based_parents()
            .iter()
            .map(|p| p.to_string())
            .collect();
        format!("{}\n{}\n", self.order(), parents.join(" "))
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_ascii_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty tree file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad vertex count: {e}")))?;
        let parents = tokens
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad parent entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if parents.len() != n {
            return Err(Error::Parse(format!(
                "expected {n} parent entries, found {}",
                parents.len()
            )));
        }
        Self::from_one_based(&parents)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TreeFile {
            n: self.order(),
            parent: self.one_based_parents(),
        })
        .expect("tree file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TreeFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("tree json: {e}")))?;
        if file.parent.len() != file.n {
            return Err(Error::Parse(format!(
                "expected {} parent entries, found {}",
                file.n,
                file.parent.len()
            )));
        }
        Self::from_one_based(&file.parent)
    }

    fn one_based_parents(&self) -> Vec<usize> {
        self.parent.iter().map(|p| p.map_or(0, |p| p + 1)).collect()
    }

    fn from_one_based(parents: &[usize]) -> Result<Self> {
        let parent = parents
            .iter()
            .map(|&p| if p == 0 { None } else { Some(p - 1) })
            .collect();
        Self::from_parents(parent)
    }
}

#[derive(Serialize, Deserialize)]
struct TreeFile {
    n: usize,
    parent: Vec<usize>,
}

/// An unrooted tree given by its edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnrootedTree {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl UnrootedTree {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return invalid("a tree needs at least one vertex");
        }
        if edges.len() + 1 != n {
            return invalid(format!(
                "{n} vertices need {} edges, got {}",
                n - 1,
                edges.len()
            ));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return invalid(format!("edge ({a}, {b}) out of range"));
            }
            if a == b {
                return invalid(format!("self-loop at {a}"));
            }
            if adjacency[a].contains(&b) {
                return invalid(format!("duplicate edge ({a}, {b})"));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        if count != n {
            return invalid("edge list is not connected");
        }
        Ok(Self {
            n,
            edges: edges.to_vec(),
            adjacency,
        })
    }

    pub fn path(n: usize) -> Result<Self> {
        make_path(n).map(|t| t.to_unrooted())
    }

    pub fn star(n: usize) -> Result<Self> {
        make_star(n).map(|t| t.to_unrooted())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Roots the tree at `root`, keeping vertex ids.
    pub fn rooted_at(&self, root: usize) -> Result<RootedTree> {
        if root >= self.n {
            return invalid(format!("vertex {root} out of range"));
        }
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &u in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(v);
                    stack.push(u);
                }
            }
        }
        RootedTree::from_parents(parent)
    }
}

/// The rooted star S_n: vertex 0 is the root, 1..n are leaves.
pub fn make_star(n: usize) -> Result<RootedTree> {
    if n == 0 {
        return invalid("star order must be positive");
    }
    check_cap(n as u128, DEFAULT_VERTEX_CAP)?;
    let parent = (0..n)
        .map(|v| if v == 0 { None } else { Some(0) })
        .collect();
    RootedTree::from_parents(parent)
}

/// The rooted path P_n: chain 0 - 1 - ... - (n-1) rooted at 0.
pub fn make_path(n: usize) -> Result<RootedTree> {
    if n == 0 {
        return invalid("path order must be positive");
    }
    check_cap(n as u128, DEFAULT_VERTEX_CAP)?;
    let parent = (0..n).map(|v| v.checked_sub(1)).collect();
    RootedTree::from_parents(parent)
}

/// The rooted broom B(x, y): a path on `x` vertices rooted at one end with
/// `y` pendent vertices attached to the other end. B(1, y) is S_{y+1} and
/// B(0, 1) is the trivial tree.
pub fn make_broom(x: usize, y: usize) -> Result<RootedTree> {
    if x == 0 {
        return if y == 1 {
            Ok(RootedTree::trivial())
        } else {
            invalid("broom with x = 0 is only defined for y = 1")
        };
    }
    check_cap(x as u128 + y as u128, DEFAULT_VERTEX_CAP)?;
    let mut parent: Vec<Option<usize>> = (0..x).map(|v| v.checked_sub(1)).collect();
    parent.extend(std::iter::repeat_n(Some(x - 1), y));
    RootedTree::from_parents(parent)
}

/// Order of the Bethe tree B_{p,k}: (k^p - 1) / (k - 1).
pub fn bethe_order(p: u32, k: u64) -> Result<u128> {
    check_bethe_args(p, k)?;
    let k = k as u128;
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..p {
        total = total
            .checked_add(level)
            .ok_or_else(|| Error::Overflow("bethe order".into()))?;
        level = level.saturating_mul(k);
    }
    Ok(total)
}

fn check_bethe_args(p: u32, k: u64) -> Result<()> {
    if p == 0 {
        return invalid("bethe depth p must be at least 1");
    }
    if k < 2 {
        return invalid("bethe branching k must be at least 2");
    }
    Ok(())
}

/// The rooted Bethe tree: B_{1,k} = E, B_{p,k} = rooted sum of k copies of
/// B_{p-1,k}.
pub fn make_bethe(p: u32, k: u64) -> Result<RootedTree> {
    check_cap(bethe_order(p, k)?, DEFAULT_VERTEX_CAP)?;
    let mut tree = RootedTree::trivial();
    for _ in 1..p {
        let parts = vec![tree; k as usize];
        tree = rooted_sum(&parts)?;
    }
    Ok(tree)
}

/// Uniform random labelled tree on `n` vertices, decoded from a Prüfer
/// sequence drawn from [`SplitMix64`] seeded with `seed`, rooted at vertex 0.
pub fn make_random(n: usize, seed: u64) -> Result<RootedTree> {
    if n == 0 {
        return invalid("random tree order must be positive");
    }
    check_cap(n as u128, DEFAULT_VERTEX_CAP)?;
    if n == 1 {
        return Ok(RootedTree::trivial());
    }
    let mut rng = SplitMix64::new(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| rng.below(n as u64) as usize).collect();
    let edges = prufer_decode(n, &code);
    UnrootedTree::from_edges(n, &edges)?.rooted_at(0)
}

/// Linear-time Prüfer decoding; `code.len()` must be `n - 2`.
pub fn prufer_decode(n: usize, code: &[usize]) -> Vec<(usize, usize)> {
    debug_assert_eq!(code.len() + 2, n);
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &c in code {
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 && c < ptr {
            leaf = c;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    edges
}

/// Joins the roots of `parts` to a new root. Numbering: the new root is 0,
/// then each part in list order with its own internal numbering.
pub fn rooted_sum(parts: &[RootedTree]) -> Result<RootedTree> {
    if parts.is_empty() {
        return invalid("rooted sum needs at least one part");
    }
    let n: u128 = 1 + parts.iter().map(|t| t.order() as u128).sum::<u128>();
    check_cap(n, DEFAULT_VERTEX_CAP)?;
    let mut parent = Vec::with_capacity(n as usize);
    parent.push(None);
    let mut offset = 1;
    for t in parts {
        parent.extend(
            t.parents()
                .iter()
                .map(|p| Some(p.map_or(0, |p| p + offset))),
        );
        offset += t.order();
    }
    RootedTree::from_parents(parent)
}

/// Rooted product `t1 ⊠ t2`: one copy of `t2` per vertex of `t1`, copies
/// joined root-to-root along the edges of `t1`. Vertex `a` of the copy for
/// `i` gets id `i * n2 + a`, which makes the Kronecker forms of the path,
/// bottleneck and neckbottle matrices hold without permutation.
pub fn rooted_product(t1: &RootedTree, t2: &RootedTree) -> Result<RootedTree> {
    rooted_product_capped(t1, t2, DEFAULT_VERTEX_CAP)
}

pub fn rooted_product_capped(t1: &RootedTree, t2: &RootedTree, cap: usize) -> Result<RootedTree> {
    let (n1, n2) = (t1.order(), t2.order());
    check_cap(n1 as u128 * n2 as u128, cap)?;
    let r2 = t2.root();
    let mut parent = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        for a in 0..n2 {
            let p = match t2.parent(a) {
                Some(pa) => Some(i * n2 + pa),
                None => t1.parent(i).map(|pi| pi * n2 + r2),
            };
            parent.push(p);
        }
    }
    RootedTree::from_parents(parent)
}

/// `T^{⊠0} = E`, `T^{⊠k} = T ⊠ T^{⊠(k-1)}`.
pub fn rooted_power(t: &RootedTree, k: u32) -> Result<RootedTree> {
    rooted_power_capped(t, k, DEFAULT_VERTEX_CAP)
}

pub fn rooted_power_capped(t: &RootedTree, k: u32, cap: usize) -> Result<RootedTree> {
    let requested = (t.order() as u128).checked_pow(k).ok_or(Error::Capacity {
        requested: u128::MAX,
        cap,
    })?;
    check_cap(requested, cap)?;
    let mut acc = RootedTree::trivial();
    for _ in 0..k {
        acc = rooted_product_capped(t, &acc, cap)?;
    }
    Ok(acc)
}

/// μ(T) = Σ_v dist(v, r) · deg(v).
pub fn moment(t: &RootedTree) -> u64 {
    t.depth
        .iter()
        .zip(&t.degree)
        .map(|(&d, &g)| d as u64 * g as u64)
        .sum()
}

/// t(T) = Σ_v dist(v, r).
pub fn root_transmission(t: &RootedTree) -> u64 {
    t.depth.iter().map(|&d| d as u64).sum()
}

fn overflow(what: &str) -> Error {
    Error::Overflow(what.to_string())
}

/// Closed-form moment of B_{p,k}.
pub fn moment_bethe_closed(p: u32, k: u64) -> Result<i128> {
    check_bethe_args(p, k)?;
    let of = || overflow("bethe moment closed form");
    let k = k as i128;
    let p_ = p as i128;
    let kp = k.checked_pow(p).ok_or_else(of)?;
    let kp1 = kp.checked_mul(k).ok_or_else(of)?;
    let terms = [
        (2 * p_).checked_mul(kp1),
        Some(-3).and_then(|c: i128| c.checked_mul(kp1)),
        (-2 * p_).checked_mul(kp),
        Some(kp),
        Some(k * k),
        Some(k),
    ];
    let mut num: i128 = 0;
    for t in terms {
        num = num.checked_add(t.ok_or_else(of)?).ok_or_else(of)?;
    }
    let den = (k - 1) * (k - 1);
    debug_assert_eq!(num % den, 0);
    Ok(num / den)
}

/// Right-hand side of the rooted-sum moment identity:
/// Σ μ(T_i) + 2n - 2 - k with n the order of the sum.
pub fn moment_sum_identity(parts: &[RootedTree]) -> Result<i128> {
    if parts.is_empty() {
        return invalid("rooted sum needs at least one part");
    }
    let k = parts.len() as i128;
    let n = 1 + parts.iter().map(|t| t.order() as i128).sum::<i128>();
    let mu: i128 = parts.iter().map(|t| moment(t) as i128).sum();
    Ok(mu + 2 * n - 2 - k)
}

/// Right-hand side of the rooted-product moment identity:
/// μ(T1) + n1 μ(T2) + 2 (n2 - 1) t(T1).
pub fn moment_product_identity(t1: &RootedTree, t2: &RootedTree) -> i128 {
    let n1 = t1.order() as i128;
    let n2 = t2.order() as i128;
    moment(t1) as i128 + n1 * moment(t2) as i128 + 2 * (n2 - 1) * root_transmission(t1) as i128
}

/// Right-hand side of the rooted-power moment identity:
/// (μ - 2t) (n^k - 1)/(n - 1) + 2 t k n^{k-1}. Requires a nontrivial tree.
pub fn moment_power_identity(t: &RootedTree, k: u32) -> Result<i128> {
    if t.is_trivial() {
        return invalid("power moment identity requires a nontrivial tree");
    }
    let of = || overflow("power moment identity");
    let n = t.order() as i128;
    let mu = moment(t) as i128;
    let tr = root_transmission(t) as i128;
    if k == 0 {
        return Ok(0);
    }
    let nk = n.checked_pow(k).ok_or_else(of)?;
    let geometric = (nk - 1) / (n - 1);
    let nk1 = n.checked_pow(k - 1).ok_or_else(of)?;
    let first = (mu - 2 * tr).checked_mul(geometric).ok_or_else(of)?;
    let second = (2 * tr * k as i128).checked_mul(nk1).ok_or_else(of)?;
    first.checked_add(second).ok_or_else(of)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sample_tree() -> RootedTree {
        RootedTree::from_text("6\n0 1 1 2 3 3\n").unwrap()
    }

    fn degree_sum_ok(t: &RootedTree) {
        assert_eq!(t.degrees().iter().sum::<usize>(), 2 * (t.order() - 1));
        assert_eq!(t.depth(t.root()), 0);
        for v in 0..t.order() {
            if let Some(p) = t.parent(v) {
                assert_eq!(t.depth(v), t.depth(p) + 1);
            }
        }
    }

    #[test]
    fn star_basics() {
        let s1 = make_star(1).unwrap();
        assert!(s1.is_trivial());
        assert!(s1.edges().is_empty());
        let s4 = make_star(4).unwrap();
        assert_eq!(s4.children(0), &[1, 2, 3]);
        assert!((1..4).all(|v| s4.depth(v) == 1));
        assert_eq!(s4.degree(0), 3);
        assert_eq!(moment(&make_star(3).unwrap()), 2);
        assert_eq!(moment(&make_star(6).unwrap()), 5);
        assert!(matches!(make_star(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn path_basics() {
        assert!(make_path(1).unwrap().is_trivial());
        let p5 = make_path(5).unwrap();
        assert_eq!(moment(&p5), 16);
        assert_eq!((0..5).map(|v| p5.depth(v)).max(), Some(4));
        assert_eq!(root_transmission(&make_path(2).unwrap()), 1);
        assert_eq!(root_transmission(&make_path(4).unwrap()), 6);
        assert!(make_path(0).is_err());
    }

    #[test]
    fn broom_cases() {
        assert_eq!(make_broom(1, 3).unwrap(), make_star(4).unwrap());
        assert_eq!(make_broom(4, 1).unwrap(), make_path(5).unwrap());
        let b = make_broom(2, 2).unwrap();
        assert_eq!(b.order(), 4);
        assert_eq!(moment(&b), 7);
        assert!(make_broom(0, 1).unwrap().is_trivial());
        assert!(make_broom(0, 2).is_err());
        assert!(make_broom(0, 0).is_err());
    }

    #[test]
    fn bethe_cases() {
        assert_eq!(make_bethe(3, 4).unwrap().order(), 21);
        assert!(make_bethe(1, 7).unwrap().is_trivial());
        assert_eq!(make_bethe(2, 2).unwrap(), make_star(3).unwrap());
        assert!(make_bethe(2, 1).is_err());
        assert_eq!(bethe_order(1, 5).unwrap(), 1);
        assert_eq!(bethe_order(2, 2).unwrap(), 3);
        assert_eq!(moment_bethe_closed(1, 5).unwrap(), 0);
        assert_eq!(moment_bethe_closed(2, 2).unwrap(), 2);
        let b = make_bethe(4, 3).unwrap();
        for v in 0..b.order() {
            let c = b.children(v).len();
            assert!(c == 0 || c == 3);
            if c == 0 {
                assert_eq!(b.depth(v), 3);
            }
        }
    }

    #[test]
    fn bethe_closed_forms_match_construction() {
        for p in 1..=6u32 {
            for k in 2..=5u64 {
                let t = make_bethe(p, k).unwrap();
                assert_eq!(t.order() as u128, bethe_order(p, k).unwrap());
                assert_eq!(moment(&t) as i128, moment_bethe_closed(p, k).unwrap());
            }
        }
    }

    #[test]
    fn random_small_orders() {
        assert!(make_random(1, 99).unwrap().is_trivial());
        for seed in 0..5 {
            assert_eq!(make_random(2, seed).unwrap(), make_path(2).unwrap());
        }
        let a = make_random(50, 7).unwrap();
        let b = make_random(50, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.root(), 0);
        degree_sum_ok(&a);
    }

    #[test]
    fn prufer_decode_known_sequence() {
        // Standard textbook example (0-based): code [3, 3, 3, 4] on 6 vertices.
        let edges = prufer_decode(6, &[3, 3, 3, 4]);
        assert_eq!(edges, vec![(0, 3), (1, 3), (2, 3), (3, 4), (4, 5)]);
    }

    #[test]
    fn sum_examples() {
        let e = RootedTree::trivial();
        assert_eq!(
            rooted_sum(&[e.clone(), e.clone(), e.clone()]).unwrap(),
            make_star(4).unwrap()
        );
        assert_eq!(
            rooted_sum(&[make_path(2).unwrap()]).unwrap(),
            make_path(3).unwrap()
        );
        let t = rooted_sum(&[make_star(3).unwrap(), make_path(3).unwrap(), e]).unwrap();
        assert_eq!(t.order(), 8);
        assert_eq!(t.children(0), &[1, 4, 7]);
        assert!(rooted_sum(&[]).is_err());
    }

    #[test]
    fn product_examples() {
        let e = RootedTree::trivial();
        let t = sample_tree();
        assert_eq!(rooted_product(&t, &e).unwrap(), t);
        assert_eq!(rooted_product(&e, &t).unwrap(), t);

        let prod = rooted_product(&make_star(3).unwrap(), &make_path(3).unwrap()).unwrap();
        assert_eq!(prod.order(), 9);
        assert_eq!(prod.root(), 0);
        assert_eq!(prod.children(0), &[1, 3, 6]);

        let p2 = make_path(2).unwrap();
        let comb = rooted_product(&p2, &p2).unwrap();
        assert_eq!(comb.order(), 4);
        // 0 - 1, 0 - 2, 2 - 3: depths 0,1,1,2 degrees 2,1,2,1.
        assert_eq!(moment(&comb), 5);
        assert_eq!(moment_product_identity(&p2, &p2), 5);
    }

    #[test]
    fn power_examples() {
        let s3 = make_star(3).unwrap();
        assert!(rooted_power(&s3, 0).unwrap().is_trivial());
        assert_eq!(rooted_power(&s3, 3).unwrap().order(), 27);
        assert_eq!(rooted_power(&make_path(2).unwrap(), 5).unwrap().order(), 32);
        assert_eq!(
            rooted_power(&make_path(2).unwrap(), 1).unwrap(),
            make_path(2).unwrap()
        );
        assert!(matches!(
            rooted_power_capped(&s3, 5, 100),
            Err(Error::Capacity {
                requested: 243,
                cap: 100
            })
        ));
        assert!(matches!(
            rooted_power(&s3, 200),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn functionals_on_sample() {
        let t = sample_tree();
        assert_eq!(moment(&t), 11);
        assert_eq!(root_transmission(&t), 8);
        assert!(moment(&RootedTree::trivial()) == 0);
    }

    #[test]
    fn moment_identities_small() {
        let e = RootedTree::trivial();
        assert_eq!(
            moment_sum_identity(&[e.clone(), e.clone(), e.clone()]).unwrap(),
            3
        );
        let p2 = make_path(2).unwrap();
        assert_eq!(moment_power_identity(&p2, 1).unwrap(), 1);
        assert!(moment_power_identity(&e, 2).is_err());
    }

    #[test]
    fn text_and_json_round_trip() {
        let t = sample_tree();
        assert_eq!(t.to_text(), "6\n0 1 1 2 3 3\n");
        assert_eq!(t.to_json(), r#"{"n":6,"parent":[0,1,1,2,3,3]}"#);
        assert_eq!(RootedTree::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn rejects_malformed_parent_arrays() {
        assert!(RootedTree::from_parents(vec![]).is_err());
        assert!(RootedTree::from_parents(vec![None, None]).is_err());
        assert!(RootedTree::from_parents(vec![Some(1), Some(0)]).is_err());
        assert!(RootedTree::from_parents(vec![None, Some(2), Some(1)]).is_err());
        assert!(RootedTree::from_parents(vec![None, Some(5)]).is_err());
        assert!(RootedTree::from_text("3\n0 1").is_err());
        assert!(RootedTree::from_text("x\n0").is_err());
    }

    #[test]
    fn unrooted_validation() {
        assert!(UnrootedTree::from_edges(3, &[(0, 1), (1, 2)]).is_ok());
        assert!(UnrootedTree::from_edges(3, &[(0, 1), (0, 1)]).is_err());
        assert!(UnrootedTree::from_edges(3, &[(0, 0), (1, 2)]).is_err());
        assert!(UnrootedTree::from_edges(4, &[(0, 1), (1, 0), (2, 3)]).is_err());
        assert!(UnrootedTree::from_edges(4, &[(0, 1), (2, 3), (3, 2)]).is_err());
        assert!(UnrootedTree::from_edges(4, &[(0, 1), (1, 2)]).is_err());
    }

    #[test]
    fn structural_predicates() {
        assert!(make_star(5).unwrap().is_star());
        assert!(!make_star(5).unwrap().is_path());
        assert!(make_path(5).unwrap().is_path());
        assert!(make_path(2).unwrap().is_star());
        assert!(!sample_tree().is_star());
        assert!(!sample_tree().is_path());
        let t = sample_tree();
        assert!(t.are_brothers(4, 5));
        assert!(!t.are_brothers(3, 4));
        assert!(t.is_ancestor_or_self(0, 5));
        assert!(t.is_ancestor_or_self(2, 4));
        assert!(!t.is_ancestor_or_self(1, 4));
    }
}
