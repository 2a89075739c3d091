//! Perron values, Perron vectors and Perron entropy.
//!
//! The workhorse is power iteration over a [`SymmetricOperator`]. Tree
//! bottleneck and neckbottle matrices are applied matrix-free in O(n) per
//! step through the factorisations M = NᵀN and Q = NNᵀ; dense matrices go
//! through [`DenseMatrix`]. A cyclic Jacobi eigensolver is kept as an
//! independent dense reference for small inputs.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::exact::ExactMatrix;
use crate::tree::RootedTree;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Convergence threshold on the relative residual ‖Av − ρv‖ / |ρ|.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Dominant eigenpair from power iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub rho: f64,
    /// Unit-norm eigenvector, sign chosen so its entries sum to a positive value.
    pub vector: Vec<f64>,
    pub iterations: usize,
    /// Relative residual ‖Av − ρv‖ / |ρ| at the returned vector.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyResult {
    pub h: f64,
    pub spectral: SpectralResult,
}

/// A real symmetric linear map.
pub trait SymmetricOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// Dense square `f64` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return invalid("matrix must be square");
        }
        Ok(Self {
            n,
            data: rows.concat(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { n, data }
    }

    pub fn from_exact(m: &ExactMatrix) -> Result<Self> {
        if !m.is_square() {
            return invalid("matrix must be square");
        }
        Ok(Self {
            n: m.rows(),
            data: m.data().iter().map(|&x| x as f64).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn max_abs_row_sum(&self) -> f64 {
        self.data
            .chunks(self.n.max(1))
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `self - beta * J`.
    pub fn minus_scaled_ones(&self, beta: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| x - beta).collect(),
        }
    }
}

impl SymmetricOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (yi, row) in y.iter_mut().zip(self.data.chunks(self.n)) {
            *yi = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

/// Tree data laid out in preorder for the matrix-free products.
#[derive(Debug, Clone)]
struct PreorderLayout {
    /// `vertex[k]` is the k-th vertex in preorder.
    vertex: Vec<usize>,
    /// Preorder position of the parent of position k (`usize::MAX` at the root).
    parent_pos: Vec<usize>,
}

impl PreorderLayout {
    fn new(t: &RootedTree) -> Self {
        let vertex = t.preorder().to_vec();
        let mut pos = vec![0; t.order()];
        for (k, &v) in vertex.iter().enumerate() {
            pos[v] = k;
        }
        let parent_pos = vertex
            .iter()
            .map(|&v| t.parent(v).map_or(usize::MAX, |p| pos[p]))
            .collect();
        Self { vertex, parent_pos }
    }

    /// z ← N z: each entry becomes the sum over its subtree.
    fn subtree_sums(&self, z: &mut [f64]) {
        for k in (1..z.len()).rev() {
            let p = self.parent_pos[k];
            z[p] += z[k];
        }
    }

    /// z ← Nᵀ z: each entry becomes the sum over its root path.
    fn root_path_sums(&self, z: &mut [f64]) {
        for k in 1..z.len() {
            let p = self.parent_pos[k];
            z[k] += z[p];
        }
    }

    fn gather(&self, x: &[f64], z: &mut [f64]) {
        for (zk, &v) in z.iter_mut().zip(&self.vertex) {
            *zk = x[v];
        }
    }

    fn scatter(&self, z: &[f64], y: &mut [f64]) {
        for (&zk, &v) in z.iter().zip(&self.vertex) {
            y[v] = zk;
        }
    }
}

/// Bottleneck matrix M = NᵀN applied without forming it.
#[derive(Debug, Clone)]
pub struct BottleneckOperator {
    layout: PreorderLayout,
}

impl BottleneckOperator {
    pub fn new(t: &RootedTree) -> Self {
        Self {
            layout: PreorderLayout::new(t),
        }
    }
}

impl SymmetricOperator for BottleneckOperator {
    fn dim(&self) -> usize {
        self.layout.vertex.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut z = vec![0.0; x.len()];
        self.layout.gather(x, &mut z);
        self.layout.subtree_sums(&mut z);
        self.layout.root_path_sums(&mut z);
        self.layout.scatter(&z, y);
    }
}

/// Neckbottle matrix Q = NNᵀ applied without forming it.
#[derive(Debug, Clone)]
pub struct NeckbottleOperator {
    layout: PreorderLayout,
}

impl NeckbottleOperator {
    pub fn new(t: &RootedTree) -> Self {
        Self {
            layout: PreorderLayout::new(t),
        }
    }
}

impl SymmetricOperator for NeckbottleOperator {
    fn dim(&self) -> usize {
        self.layout.vertex.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut z = vec![0.0; x.len()];
        self.layout.gather(x, &mut z);
        self.layout.root_path_sums(&mut z);
        self.layout.subtree_sums(&mut z);
        self.layout.scatter(&z, y);
    }
}

/// `base - beta * J`.
#[derive(Debug, Clone)]
pub struct MinusScaledOnes<O> {
    pub base: O,
    pub beta: f64,
}

impl<O: SymmetricOperator> SymmetricOperator for MinusScaledOnes<O> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.base.apply(x, y);
        let s: f64 = x.iter().sum::<f64>() * self.beta;
        y.iter_mut().for_each(|yi| *yi -= s);
    }
}

struct Shifted<'a, O: ?Sized> {
    base: &'a O,
    shift: f64,
}

impl<O: SymmetricOperator + ?Sized> SymmetricOperator for Shifted<'_, O> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.base.apply(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi += self.shift * xi;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(v: &mut [f64]) -> f64 {
    let nv = norm(v);
    if nv > 0.0 {
        v.iter_mut().for_each(|x| *x /= nv);
    }
    nv
}

fn power_iterate<O: SymmetricOperator + ?Sized>(
    op: &O,
    mut v: Vec<f64>,
    opts: PowerOptions,
) -> Result<SpectralResult> {
    let n = op.dim();
    if n == 0 {
        return invalid("empty operator");
    }
    normalize(&mut v);
    let mut y = vec![0.0; n];
    op.apply(&v, &mut y);
    let mut rho = 0.0;
    let mut rel = f64::INFINITY;
    for it in 1..=opts.max_iter {
        rho = dot(&v, &y);
        let r = v
            .iter()
            .zip(&y)
            .map(|(vi, yi)| (yi - rho * vi).powi(2))
            .sum::<f64>()
            .sqrt();
        rel = if rho != 0.0 { r / rho.abs() } else { r };
        if rel <= opts.tol {
            if v.iter().sum::<f64>() < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            return Ok(SpectralResult {
                rho,
                vector: v,
                iterations: it,
                residual: rel,
            });
        }
        if normalize(&mut y) == 0.0 {
            return Err(Error::IterationLimit {
                iterations: it,
                estimate: rho,
                residual: rel,
            });
        }
        std::mem::swap(&mut v, &mut y);
        op.apply(&v, &mut y);
    }
    Err(Error::IterationLimit {
        iterations: opts.max_iter,
        estimate: rho,
        residual: rel,
    })
}

/// Perron value and vector of a symmetric entrywise-nonnegative matrix.
pub fn perron(m: &DenseMatrix, opts: PowerOptions) -> Result<SpectralResult> {
    if !m.is_symmetric() {
        return invalid("perron() needs a symmetric matrix");
    }
    if m.data.iter().any(|&x| x < 0.0) {
        return invalid("perron() needs an entrywise nonnegative matrix");
    }
    perron_operator(m, opts)
}

/// Power iteration from the all-ones vector on an arbitrary operator; the
/// caller is responsible for symmetry and nonnegativity.
pub fn perron_operator<O: SymmetricOperator + ?Sized>(
    op: &O,
    opts: PowerOptions,
) -> Result<SpectralResult> {
    power_iterate(op, vec![1.0; op.dim()], opts)
}

/// Which factorised matrix to iterate on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PerronMatrix {
    #[default]
    Bottleneck,
    Neckbottle,
}

/// ρ(T) with default options on the bottleneck matrix.
pub fn perron_value(t: &RootedTree) -> Result<SpectralResult> {
    perron_value_with(t, PerronMatrix::Bottleneck, PowerOptions::default())
}

pub fn perron_value_with(
    t: &RootedTree,
    which: PerronMatrix,
    opts: PowerOptions,
) -> Result<SpectralResult> {
    match which {
        PerronMatrix::Bottleneck => perron_operator(&BottleneckOperator::new(t), opts),
        PerronMatrix::Neckbottle => perron_operator(&NeckbottleOperator::new(t), opts),
    }
}

/// Largest eigenvalue of a symmetric matrix that may have negative entries.
/// Iterates on `m + cI` with `c` the largest absolute row sum.
pub fn symmetric_max_eig(m: &DenseMatrix, opts: PowerOptions) -> Result<f64> {
    if !m.is_symmetric() {
        return invalid("symmetric_max_eig() needs a symmetric matrix");
    }
    symmetric_max_eig_operator(m, m.max_abs_row_sum(), opts)
}

/// As [`symmetric_max_eig`] with a caller-supplied shift, which must bound
/// the spectral radius of `op`.
pub fn symmetric_max_eig_operator<O: SymmetricOperator + ?Sized>(
    op: &O,
    shift: f64,
    opts: PowerOptions,
) -> Result<f64> {
    let n = op.dim();
    let shifted = Shifted { base: op, shift };
    let ones = vec![1.0; n];
    let mut first = vec![0.0; n];
    shifted.apply(&ones, &mut first);
    let scale = shift.abs().max(1.0) * (n as f64).sqrt();
    let start = if norm(&first) <= 1e-12 * scale {
        perturbed_start(n)
    } else {
        ones
    };
    Ok(power_iterate(&shifted, start, opts)?.rho - shift)
}

/// Fixed non-constant start vector.
fn perturbed_start(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.618_033_988_75).sin())
        .collect()
}

/// H(T) = (Σ w)² / Σ w² for the Perron vector w.
pub fn perron_entropy(t: &RootedTree) -> Result<EntropyResult> {
    perron_entropy_with(t, PerronMatrix::Bottleneck, PowerOptions::default())
}

pub fn perron_entropy_with(
    t: &RootedTree,
    which: PerronMatrix,
    opts: PowerOptions,
) -> Result<EntropyResult> {
    let spectral = perron_value_with(t, which, opts)?;
    let h = entropy_of(&spectral.vector);
    Ok(EntropyResult { h, spectral })
}

/// (Σ w)² / Σ w²; invariant under scaling of `w`.
pub fn entropy_of(w: &[f64]) -> f64 {
    let s: f64 = w.iter().sum();
    s * s / dot(w, w)
}

/// eᵀMe / n, a lower bound on ρ(T). eᵀMe = ‖Ne‖² is the sum of squared
/// subtree sizes, accumulated exactly.
pub fn rayleigh_lower_bound(t: &RootedTree) -> f64 {
    let total: u128 = (0..t.order())
        .map(|v| (t.subtree_size(v) as u128).pow(2))
        .sum();
    total as f64 / t.order() as f64
}

fn positive(n: usize) -> Result<f64> {
    if n == 0 {
        invalid("order must be positive")
    } else {
        Ok(n as f64)
    }
}

/// ρ(S_n) = (n + 1 + √(n² + 2n − 3)) / 2.
pub fn rho_star_closed(n: usize) -> Result<f64> {
    let x = positive(n)?;
    Ok(0.5 * (x + 1.0 + (x * x + 2.0 * x - 3.0).sqrt()))
}

/// ρ(P_n) = 1 / (2 (1 − cos(π / (2n + 1)))), evaluated as
/// 1 / (4 sin²(π / (4n + 2))) to avoid cancellation.
pub fn rho_path_closed(n: usize) -> Result<f64> {
    let x = positive(n)?;
    let s = (PI / (4.0 * x + 2.0)).sin();
    Ok(1.0 / (4.0 * s * s))
}

/// H(P_n) = cot²(π / (4n + 2)) / (2n + 1).
pub fn entropy_path_closed(n: usize) -> Result<f64> {
    let x = positive(n)?;
    let cot = 1.0 / (PI / (4.0 * x + 2.0)).tan();
    Ok(cot * cot / (2.0 * x + 1.0))
}

/// H(S_n); equal to 1 for n = 1.
pub fn entropy_star_closed(n: usize) -> Result<f64> {
    let x = positive(n)?;
    if n == 1 {
        return Ok(1.0);
    }
    let root = (x * x + 2.0 * x - 3.0).sqrt();
    let num = (x * x + 2.0 * x) * root + x.powi(3) + 3.0 * x * x - 2.0;
    let den = (x + 2.0) * root + x * x + 3.0 * x;
    Ok(num / den)
}

/// Unnormalised Perron vector of P_n: w_i = sin(iπ / (2n + 1)) for the
/// vertex at depth i − 1.
pub fn perron_vector_path_closed(n: usize) -> Result<Vec<f64>> {
    let x = positive(n)?;
    Ok((1..=n)
        .map(|i| (i as f64 * PI / (2.0 * x + 1.0)).sin())
        .collect())
}

/// ρ(B_{p,k}) from the p × p symmetrised level quotient of the bottleneck
/// matrix, S[a][b] = Σ_{d ≤ min(a,b)} k^{(a+b)/2 − d}. Needs no tree, so it
/// reaches orders far beyond the vertex cap.
pub fn rho_bethe_levels(p: u32, k: u64) -> Result<f64> {
    if p == 0 || k < 2 {
        return invalid(format!(
            "Bethe levels need p >= 1 and k >= 2, got p = {p}, k = {k}"
        ));
    }
    let p = p as usize;
    let kf = k as f64;
    let mut rows = vec![vec![0.0; p]; p];
    for (a, row) in rows.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            let half = (a + b) as f64 / 2.0;
            *entry = (0..=a.min(b)).map(|d| kf.powf(half - d as f64)).sum();
        }
    }
    Ok(perron(&DenseMatrix::from_rows(&rows)?, PowerOptions::default())?.rho)
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
/// ascending. Dense reference for small inputs.
pub fn jacobi_eigenvalues(m: &DenseMatrix) -> Result<Vec<f64>> {
    if !m.is_symmetric() {
        return invalid("jacobi_eigenvalues() needs a symmetric matrix");
    }
    let n = m.dim();
    let mut a = m.clone();
    let frob: f64 = a.data.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.get(i, j).powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * frob.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(eig)
}
