//! Exact integer matrices attached to a rooted tree: the path matrix N,
//! the bottleneck matrix M = NᵀN, the neckbottle matrix Q = NNᵀ, their
//! combinatorial inverses and the Kronecker forms for rooted products.
//!
//! Rows and columns are indexed by vertex id.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{invalid, Error, Result};
use crate::tree::{RootedTree, DEFAULT_VERTEX_CAP};

/// Dense row-major matrix of `i64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// All-ones matrix J.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![1; rows * cols],
        }
    }

    /// Column vector with a single 1 in position `i`.
    pub fn unit_column(n: usize, i: usize) -> Self {
        let mut m = Self::zeros(n, 1);
        m.set(i, 0, 1);
        m
    }

    pub fn column(values: &[i64]) -> Self {
        Self {
            rows: values.len(),
            cols: 1,
            data: values.to_vec(),
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn scale(&self, c: i64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// Sum of all entries.
    pub fn total(&self) -> i128 {
        self.data.iter().map(|&x| x as i128).sum()
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                // Tree matrices are sparse enough that skipping zeros pays off.
                if a == 0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    fn checked_zip(&self, rhs: &Self, f: impl Fn(i64, i64) -> i64) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Plain text grid: `rows cols` followed by one line per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(i64::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_ascii_whitespace();
        let mut next_usize = |what: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
        };
        let rows = next_usize("row count")?;
        let cols = next_usize("column count")?;
        let data = tokens
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if data.len() != rows * cols {
            return Err(Error::Parse(format!(
                "expected {} entries, found {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_mul(rhs).expect("matrix dimensions agree")
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;

    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_zip(rhs, |a, b| a + b)
            .expect("matrix dimensions agree")
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;

    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_zip(rhs, |a, b| a - b)
            .expect("matrix dimensions agree")
    }
}

/// N: entry (i, j) is 1 iff i lies on the path from j to the root.
pub fn path_matrix(t: &RootedTree) -> ExactMatrix {
    let n = t.order();
    let mut m = ExactMatrix::zeros(n, n);
    for j in 0..n {
        let mut v = Some(j);
        while let Some(i) = v {
            m.set(i, j, 1);
            v = t.parent(i);
        }
    }
    m
}

/// M: entry (i, j) counts the vertices common to the root paths of i and j.
/// Each row is its parent's row plus the indicator of its own subtree.
pub fn bottleneck_matrix(t: &RootedTree) -> ExactMatrix {
    let n = t.order();
    let mut m = ExactMatrix::zeros(n, n);
    let order = t.preorder();
    for (pos, &v) in order.iter().enumerate() {
        match t.parent(v) {
            None => m.data[v * n..(v + 1) * n].fill(1),
            Some(p) => {
                let (src, dst) = (p * n, v * n);
                m.data.copy_within(src..src + n, dst);
                for &u in &order[pos..pos + t.subtree_size(v)] {
                    m.data[dst + u] += 1;
                }
            }
        }
    }
    m
}

/// Q: entry (i, j) counts the vertices lying below both i and j.
pub fn neckbottle_matrix(t: &RootedTree) -> ExactMatrix {
    let n = t.order();
    let mut m = ExactMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let common = if t.is_ancestor_or_self(j, i) {
                t.subtree_size(i)
            } else if t.is_ancestor_or_self(i, j) {
                t.subtree_size(j)
            } else {
                0
            };
            m.set(i, j, common as i64);
        }
    }
    m
}

/// N⁻¹: 1 on the diagonal, -1 at (parent, child), 0 elsewhere.
pub fn path_matrix_inverse(t: &RootedTree) -> ExactMatrix {
    let n = t.order();
    let mut x = ExactMatrix::identity(n);
    for (p, c) in t.edges() {
        x.set(p, c, -1);
    }
    x
}

/// Q⁻¹: 1 at the root, 2 on the rest of the diagonal, -1 on edges and
/// +1 between brothers.
pub fn neckbottle_inverse(t: &RootedTree) -> ExactMatrix {
    let n = t.order();
    let mut y = ExactMatrix::zeros(n, n);
    for v in 0..n {
        y.set(v, v, if v == t.root() { 1 } else { 2 });
    }
    for (p, c) in t.edges() {
        y.set(p, c, -1);
        y.set(c, p, -1);
    }
    for v in 0..n {
        let kids = t.children(v);
        for (a, &i) in kids.iter().enumerate() {
            for &j in &kids[a + 1..] {
                y.set(i, j, 1);
                y.set(j, i, 1);
            }
        }
    }
    y
}

/// M⁻¹ = N⁻¹ (N⁻¹)ᵀ.
pub fn bottleneck_inverse(t: &RootedTree) -> ExactMatrix {
    let x = path_matrix_inverse(t);
    &x * &x.transpose()
}

/// Laplacian of the tree extended by one extra vertex above the root,
/// restricted to the original vertices. Equals M⁻¹.
pub fn extended_laplacian_block(t: &RootedTree) -> ExactMatrix {
    let n = t.order();
    let mut l = ExactMatrix::zeros(n, n);
    for v in 0..n {
        let d = t.degree(v) + usize::from(v == t.root());
        l.set(v, v, d as i64);
    }
    for (p, c) in t.edges() {
        l.set(p, c, -1);
        l.set(c, p, -1);
    }
    l
}

fn check_product_dim(t1: &RootedTree, t2: &RootedTree) -> Result<()> {
    let requested = t1.order() as u128 * t2.order() as u128;
    if requested > DEFAULT_VERTEX_CAP as u128 {
        return Err(Error::Capacity {
            requested,
            cap: DEFAULT_VERTEX_CAP,
        });
    }
    Ok(())
}

/// e_r eᵀ for a tree of order n rooted at r.
fn root_row(n: usize, r: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(n, n);
    m.data[r * n..(r + 1) * n].fill(1);
    m
}

/// I ⊗ N₂ + (N₁ - I) ⊗ e_{r₂}eᵀ.
pub fn product_path_matrix(t1: &RootedTree, t2: &RootedTree) -> Result<ExactMatrix> {
    check_product_dim(t1, t2)?;
    let (n1, n2) = (t1.order(), t2.order());
    let i1 = ExactMatrix::identity(n1);
    let n1m = path_matrix(t1);
    Ok(&i1.kron(&path_matrix(t2)) + &(&n1m - &i1).kron(&root_row(n2, t2.root())))
}

/// I ⊗ M₂ + (M₁ - I) ⊗ J.
pub fn product_bottleneck(t1: &RootedTree, t2: &RootedTree) -> Result<ExactMatrix> {
    check_product_dim(t1, t2)?;
    let (n1, n2) = (t1.order(), t2.order());
    let i1 = ExactMatrix::identity(n1);
    Ok(&i1.kron(&bottleneck_matrix(t2))
        + &(&bottleneck_matrix(t1) - &i1).kron(&ExactMatrix::ones(n2, n2)))
}

/// I ⊗ Q₂ + (N₁ᵀ - I) ⊗ N₂eeᵀ_{r₂} + (N₁ - I) ⊗ e_{r₂}eᵀN₂ᵀ
/// + n₂ (Q₁ - N₁ - N₁ᵀ + I) ⊗ e_{r₂}eᵀ_{r₂}.
pub fn product_neckbottle(t1: &RootedTree, t2: &RootedTree) -> Result<ExactMatrix> {
    check_product_dim(t1, t2)?;
    let (n1, n2) = (t1.order(), t2.order());
    let r2 = t2.root();
    let i1 = ExactMatrix::identity(n1);
    let big_n1 = path_matrix(t1);
    let big_n1t = big_n1.transpose();
    let big_n2 = path_matrix(t2);
    let e2 = ExactMatrix::ones(n2, 1);
    let er2 = ExactMatrix::unit_column(n2, r2);

    let n2_e_er = &(&big_n2 * &e2) * &er2.transpose();
    let er_e_n2t = &(&er2 * &e2.transpose()) * &big_n2.transpose();
    let er_er = &er2 * &er2.transpose();
    let corner = &(&(&neckbottle_matrix(t1) - &big_n1) - &big_n1t) + &i1;

    let mut q = i1.kron(&neckbottle_matrix(t2));
    q = &q + &(&big_n1t - &i1).kron(&n2_e_er);
    q = &q + &(&big_n1 - &i1).kron(&er_e_n2t);
    q = &q + &corner.scale(n2 as i64).kron(&er_er);
    Ok(q)
}

/// Outcome of a permutation-similarity search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Similarity {
    /// `perm[i] = j` maps row/column i of `a` to row/column j of `b`:
    /// `a[i][k] == b[perm[i]][perm[k]]` for all i, k.
    Similar(Vec<usize>),
    NotSimilar,
    /// Backtracking exceeded its node budget.
    Undecided,
}

pub const DEFAULT_SEARCH_CAP: usize = 1_000_000;

pub fn is_permutation_similar(a: &ExactMatrix, b: &ExactMatrix) -> Result<Similarity> {
    is_permutation_similar_capped(a, b, DEFAULT_SEARCH_CAP)
}

/// Looks for a simultaneous row/column permutation taking `a` to `b`.
/// Vertices are first coloured by iterated refinement of (diagonal, row
/// multiset); remaining freedom is resolved by backtracking within colour
/// classes.
pub fn is_permutation_similar_capped(
    a: &ExactMatrix,
    b: &ExactMatrix,
    node_cap: usize,
) -> Result<Similarity> {
    if !a.is_square() || !b.is_square() {
        return invalid("permutation similarity needs square matrices");
    }
    if a.rows() != b.rows() {
        return invalid(format!("dimension mismatch: {} vs {}", a.rows(), b.rows()));
    }
    let n = a.rows();
    let (ca, cb) = refine_colors(a, b);
    let mut sa = ca.clone();
    let mut sb = cb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(Similarity::NotSimilar);
    }

    // Assign rows of `a` with the rarest colour first.
    let mut class_size = std::collections::HashMap::new();
    for &c in &ca {
        *class_size.entry(c).or_insert(0usize) += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (class_size[&ca[i]], ca[i], i));

    let mut search = Search {
        a,
        b,
        ca: &ca,
        cb: &cb,
        order: &order,
        perm: vec![usize::MAX; n],
        used: vec![false; n],
        nodes: 0,
        cap: node_cap,
    };
    Ok(match search.run(0) {
        Some(true) => Similarity::Similar(search.perm),
        Some(false) => Similarity::NotSimilar,
        None => Similarity::Undecided,
    })
}

/// Joint colour refinement on both matrices so colours are comparable.
fn refine_colors(a: &ExactMatrix, b: &ExactMatrix) -> (Vec<usize>, Vec<usize>) {
    use std::collections::BTreeMap;
    let n = a.rows();
    let initial = |m: &ExactMatrix, i: usize| {
        let mut row = m.row(i).to_vec();
        row.sort_unstable();
        (m.get(i, i), row)
    };
    let mut table = BTreeMap::new();
    let mut relabel = |keys: Vec<_>| -> Vec<usize> {
        keys.into_iter()
            .map(|k| {
                let next = table.len();
                *table.entry(k).or_insert(next)
            })
            .collect()
    };
    let keys: Vec<_> = (0..n)
        .map(|i| initial(a, i))
        .chain((0..n).map(|i| initial(b, i)))
        .collect();
    let mut colors = relabel(keys);
    let mut classes = count_distinct(&colors);
    loop {
        let signature = |m: &ExactMatrix, i: usize, off: usize, colors: &[usize]| {
            let mut sig: Vec<(i64, usize)> =
                (0..n).map(|k| (m.get(i, k), colors[off + k])).collect();
            sig.sort_unstable();
            (colors[off + i], sig)
        };
        let keys: Vec<_> = (0..n)
            .map(|i| signature(a, i, 0, &colors))
            .chain((0..n).map(|i| signature(b, i, n, &colors)))
            .collect();
        let mut table = BTreeMap::new();
        let next: Vec<usize> = keys
            .into_iter()
            .map(|k| {
                let id = table.len();
                *table.entry(k).or_insert(id)
            })
            .collect();
        let refined = count_distinct(&next);
        colors = next;
        if refined == classes {
            break;
        }
        classes = refined;
    }
    let cb = colors.split_off(n);
    (colors, cb)
}

fn count_distinct(v: &[usize]) -> usize {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

struct Search<'a> {
    a: &'a ExactMatrix,
    b: &'a ExactMatrix,
    ca: &'a [usize],
    cb: &'a [usize],
    order: &'a [usize],
    perm: Vec<usize>,
    used: Vec<bool>,
    nodes: usize,
    cap: usize,
}

impl Search<'_> {
    /// `Some(found)` when the subtree was fully explored, `None` on budget
    /// exhaustion.
    fn run(&mut self, depth: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let i = self.order[depth];
        for j in 0..self.b.rows() {
            if self.used[j] || self.cb[j] != self.ca[i] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                return None;
            }
            if self.a.get(i, i) != self.b.get(j, j) {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&k| {
                let pk = self.perm[k];
                self.a.get(i, k) == self.b.get(j, pk) && self.a.get(k, i) == self.b.get(pk, j)
            });
            if !consistent {
                continue;
            }
            self.perm[i] = j;
            self.used[j] = true;
            match self.run(depth + 1) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.used[j] = false;
            self.perm[i] = usize::MAX;
        }
        Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{make_path, make_star, rooted_product};

    fn sample_tree() -> RootedTree {
        RootedTree::from_text("6\n0 1 1 2 3 3\n").unwrap()
    }

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn trivial_tree_matrices_are_one() {
        let e = RootedTree::trivial();
        let one = m(&[&[1]]);
        for mat in [
            path_matrix(&e),
            bottleneck_matrix(&e),
            neckbottle_matrix(&e),
            path_matrix_inverse(&e),
            neckbottle_inverse(&e),
            bottleneck_inverse(&e),
        ] {
            assert_eq!(mat, one);
        }
    }

    #[test]
    fn path_on_three_vertices() {
        let p3 = make_path(3).unwrap();
        // Row i has ones in the columns of i's descendants.
        assert_eq!(path_matrix(&p3), m(&[&[1, 1, 1], &[0, 1, 1], &[0, 0, 1]]));
        assert_eq!(
            path_matrix_inverse(&p3),
            m(&[&[1, -1, 0], &[0, 1, -1], &[0, 0, 1]])
        );
    }

    #[test]
    fn star_on_three_vertices() {
        let s3 = make_star(3).unwrap();
        assert_eq!(
            bottleneck_matrix(&s3),
            m(&[&[1, 1, 1], &[1, 2, 1], &[1, 1, 2]])
        );
        assert_eq!(
            neckbottle_inverse(&s3),
            m(&[&[1, -1, -1], &[-1, 2, 1], &[-1, 1, 2]])
        );
        assert_eq!(
            &neckbottle_inverse(&s3) * &neckbottle_matrix(&s3),
            ExactMatrix::identity(3)
        );
    }

    #[test]
    fn star_neckbottle_block_form() {
        for n in 1..8 {
            let q = neckbottle_matrix(&make_star(n).unwrap());
            let mut expected = ExactMatrix::identity(n);
            expected.set(0, 0, n as i64);
            for j in 1..n {
                expected.set(0, j, 1);
                expected.set(j, 0, 1);
            }
            assert_eq!(q, expected);
        }
    }

    #[test]
    fn two_path_bottleneck_inverse() {
        let p2 = make_path(2).unwrap();
        assert_eq!(bottleneck_inverse(&p2), m(&[&[2, -1], &[-1, 1]]));
    }

    #[test]
    fn sample_tree_definitions_agree() {
        let t = sample_tree();
        let n = path_matrix(&t);
        assert_eq!(bottleneck_matrix(&t), &n.transpose() * &n);
        assert_eq!(neckbottle_matrix(&t), &n * &n.transpose());
        assert_eq!(bottleneck_inverse(&t), extended_laplacian_block(&t));
        assert!(neckbottle_matrix(&t).data().contains(&0));
    }

    #[test]
    fn product_forms_reduce_for_trivial_factor() {
        let t = sample_tree();
        let e = RootedTree::trivial();
        assert_eq!(product_path_matrix(&t, &e).unwrap(), path_matrix(&t));
        assert_eq!(product_bottleneck(&t, &e).unwrap(), bottleneck_matrix(&t));
        assert_eq!(product_neckbottle(&t, &e).unwrap(), neckbottle_matrix(&t));
        assert_eq!(product_path_matrix(&e, &t).unwrap(), path_matrix(&t));
        assert_eq!(product_bottleneck(&e, &t).unwrap(), bottleneck_matrix(&t));
        assert_eq!(product_neckbottle(&e, &t).unwrap(), neckbottle_matrix(&t));
    }

    #[test]
    fn product_forms_match_direct_construction() {
        let p2 = make_path(2).unwrap();
        let comb = rooted_product(&p2, &p2).unwrap();
        assert_eq!(product_path_matrix(&p2, &p2).unwrap(), path_matrix(&comb));
        assert_eq!(
            product_bottleneck(&p2, &p2).unwrap(),
            bottleneck_matrix(&comb)
        );
        assert_eq!(
            product_neckbottle(&p2, &p2).unwrap(),
            neckbottle_matrix(&comb)
        );
        let (a, b) = (sample_tree(), make_star(3).unwrap());
        let t = rooted_product(&a, &b).unwrap();
        assert_eq!(product_neckbottle(&a, &b).unwrap(), neckbottle_matrix(&t));
        let t = rooted_product(&b, &a).unwrap();
        assert_eq!(product_neckbottle(&b, &a).unwrap(), neckbottle_matrix(&t));
        assert_eq!(product_bottleneck(&b, &a).unwrap(), bottleneck_matrix(&t));
    }

    #[test]
    fn similarity_identity() {
        let mm = bottleneck_matrix(&sample_tree());
        assert_eq!(
            is_permutation_similar(&mm, &mm).unwrap(),
            Similarity::Similar((0..6).collect())
        );
    }

    #[test]
    fn similarity_reversed_path() {
        let root_first = bottleneck_matrix(&make_path(3).unwrap());
        let leaf_first = bottleneck_matrix(&RootedTree::from_text("3\n2 3 0\n").unwrap());
        assert_eq!(
            is_permutation_similar(&root_first, &leaf_first).unwrap(),
            Similarity::Similar(vec![2, 1, 0])
        );
    }

    #[test]
    fn similarity_rejects_star_vs_path() {
        let a = bottleneck_matrix(&make_path(3).unwrap());
        let b = bottleneck_matrix(&make_star(3).unwrap());
        assert_eq!(
            is_permutation_similar(&a, &b).unwrap(),
            Similarity::NotSimilar
        );
        let c = bottleneck_matrix(&make_path(4).unwrap());
        assert!(is_permutation_similar(&a, &c).is_err());
    }

    #[test]
    fn similarity_budget_exhaustion_is_undecided() {
        // Highly symmetric: refinement leaves one big class.
        let z = ExactMatrix::zeros(8, 8);
        let mut other = ExactMatrix::zeros(8, 8);
        other.set(0, 0, 0);
        assert_eq!(
            is_permutation_similar_capped(&z, &other, 3).unwrap(),
            Similarity::Undecided
        );
        assert!(matches!(
            is_permutation_similar(&z, &other).unwrap(),
            Similarity::Similar(_)
        ));
    }

    #[test]
    fn text_grid_round_trip() {
        let q = neckbottle_matrix(&sample_tree());
        assert_eq!(ExactMatrix::from_text(&q.to_text()).unwrap(), q);
        assert!(q.to_text().starts_with("6 6\n6 2 3 1 1 1\n"));
        assert!(ExactMatrix::from_text("2 2\n1 2 3").is_err());
    }
}
