//! Type I / type II classification of unrooted trees and algebraic
//! connectivity through Perron values of branches.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::rng::SplitMix64;
use crate::spectral::{
    perron_value, perron_value_with, symmetric_max_eig_operator, BottleneckOperator,
    MinusScaledOnes, PerronMatrix, PowerOptions,
};
use crate::tree::{make_bethe, RootedTree, UnrootedTree};

/// Relative tolerance used to decide that two branch Perron values tie.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

const BISECTION_STEPS: usize = 60;

/// A component of G − v, rooted at the neighbour of v it contains.
#[derive(Debug, Clone)]
pub struct Branch {
    /// Neighbour of the removed vertex; local vertex 0 of `tree`.
    pub attach: usize,
    pub tree: RootedTree,
    /// `vertices[local] = original id`.
    pub vertices: Vec<usize>,
}

/// Branches of `g` at `v`, one per neighbour in ascending neighbour order.
pub fn branches_at(g: &UnrootedTree, v: usize) -> Result<Vec<Branch>> {
    if v >= g.order() {
        return invalid(format!("vertex {v} out of range for order {}", g.order()));
    }
    g.neighbors(v)
        .iter()
        .map(|&u| branch_toward(g, v, u))
        .collect()
}

/// The branch at `v` containing its neighbour `u`, numbered in BFS order
/// from `u`.
fn branch_toward(g: &UnrootedTree, v: usize, u: usize) -> Result<Branch> {
    let mut local = HashMap::new();
    let mut vertices = vec![u];
    let mut parent = vec![None];
    local.insert(u, 0usize);
    let mut head = 0;
    while head < vertices.len() {
        let x = vertices[head];
        for &y in g.neighbors(x) {
            if y == v || local.contains_key(&y) {
                continue;
            }
            local.insert(y, vertices.len());
            vertices.push(y);
            parent.push(Some(head));
        }
        head += 1;
    }
    Ok(Branch {
        attach: u,
        tree: RootedTree::from_parents(parent)?,
        vertices,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TreeKind {
    /// Characteristic vertex with at least two Perron branches, identified
    /// by the neighbour of `vertex` they contain.
    TypeI {
        vertex: usize,
        perron_branches: Vec<usize>,
        branch_rho: f64,
    },
    /// Characteristic edge `p q`; `p < q`.
    TypeII {
        p: usize,
        q: usize,
        beta: f64,
        /// ρ of the Perron branch at `p` (which contains `q`) and at `q`.
        branch_rho: (f64, f64),
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeClassification {
    pub kind: TreeKind,
    pub algebraic_connectivity: f64,
}

impl TreeClassification {
    pub fn is_type_i(&self) -> bool {
        matches!(self.kind, TreeKind::TypeI { .. })
    }
}

struct VertexSummary {
    max_rho: f64,
    /// Neighbours whose branch ties with the maximum.
    argmax: Vec<usize>,
}

/// Classifies `g` and computes a(G) from Perron values of its branches.
pub fn classify(g: &UnrootedTree, tol: f64) -> Result<TreeClassification> {
    classify_with(g, tol, PowerOptions::default())
}

pub fn classify_with(g: &UnrootedTree, tol: f64, opts: PowerOptions) -> Result<TreeClassification> {
    let n = g.order();
    if n < 2 {
        return invalid("classification needs at least two vertices");
    }

    let mut summaries = Vec::with_capacity(n);
    let mut branch_rho: HashMap<(usize, usize), f64> = HashMap::new();
    for v in 0..n {
        let mut rhos = Vec::new();
        for branch in branches_at(g, v)? {
            let rho = perron_value_with(&branch.tree, PerronMatrix::Bottleneck, opts)?.rho;
            branch_rho.insert((v, branch.attach), rho);
            rhos.push((branch.attach, rho));
        }
        let max_rho = rhos
            .iter()
            .map(|&(_, r)| r)
            .fold(f64::NEG_INFINITY, f64::max);
        let argmax = rhos
            .iter()
            .filter(|&&(_, r)| max_rho - r <= tol * max_rho)
            .map(|&(u, _)| u)
            .collect();
        summaries.push(VertexSummary { max_rho, argmax });
    }

    let type_i: Vec<usize> = (0..n).filter(|&v| summaries[v].argmax.len() >= 2).collect();
    let type_ii: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .filter(|&(p, q)| summaries[p].argmax == [q] && summaries[q].argmax == [p])
        .collect();

    match (type_i.as_slice(), type_ii.as_slice()) {
        ([z], []) => {
            let s = &summaries[*z];
            Ok(TreeClassification {
                kind: TreeKind::TypeI {
                    vertex: *z,
                    perron_branches: s.argmax.clone(),
                    branch_rho: s.max_rho,
                },
                algebraic_connectivity: 1.0 / s.max_rho,
            })
        }
        ([], [(p, q)]) => {
            let (p, q) = (*p, *q);
            let bp = branch_toward(g, p, q)?;
            let bq = branch_toward(g, q, p)?;
            let (beta, lambda) = solve_beta(&bp.tree, &bq.tree, opts)?;
            Ok(TreeClassification {
                kind: TreeKind::TypeII {
                    p,
                    q,
                    beta,
                    branch_rho: (branch_rho[&(p, q)], branch_rho[&(q, p)]),
                },
                algebraic_connectivity: 1.0 / lambda,
            })
        }
        _ => Err(Error::Ambiguous(format!(
            "{} candidate characteristic vertices {:?} and {} candidate edges {:?} at tol {tol:e}",
            type_i.len(),
            type_i,
            type_ii.len(),
            type_ii
        ))),
    }
}

/// λmax(M - βJ). M ≥ J entrywise, so for β ≤ 1 the matrix is nonnegative
/// and no spectral shift is needed.
fn shifted_max(op: &BottleneckOperator, beta: f64, opts: PowerOptions) -> Result<f64> {
    let shifted = MinusScaledOnes {
        base: op.clone(),
        beta,
    };
    symmetric_max_eig_operator(&shifted, 0.0, opts)
}

/// Bisection for β with λmax(M_p − βJ) = λmax(M_q − (1 − β)J).
/// Returns β and the common eigenvalue.
fn solve_beta(bp: &RootedTree, bq: &RootedTree, opts: PowerOptions) -> Result<(f64, f64)> {
    let mp = BottleneckOperator::new(bp);
    let mq = BottleneckOperator::new(bq);
    let gap = |beta: f64| -> Result<(f64, f64, f64)> {
        let lp = shifted_max(&mp, beta, opts)?;
        let lq = shifted_max(&mq, 1.0 - beta, opts)?;
        Ok((lp - lq, lp, lq))
    };
    let (g0, ..) = gap(0.0)?;
    let (g1, ..) = gap(1.0)?;
    if !(g0 >= 0.0 && g1 <= 0.0) {
        return Err(Error::Bracket(format!("g(0) = {g0}, g(1) = {g1}")));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if gap(mid)?.0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta = 0.5 * (lo + hi);
    let (_, lp, lq) = gap(beta)?;
    Ok((beta, 0.5 * (lp + lq)))
}

/// Second-smallest Laplacian eigenvalue by inverse iteration on the
/// complement of the all-ones vector. Uses a dense Cholesky factor of the
/// Laplacian with one vertex deleted; independent of the branch machinery.
pub fn algebraic_connectivity_oracle(g: &UnrootedTree) -> Result<f64> {
    let n = g.order();
    if n < 2 {
        return invalid("algebraic connectivity needs at least two vertices");
    }
    let mut lap = vec![0.0f64; n * n];
    for &(a, b) in g.edges() {
        lap[a * n + a] += 1.0;
        lap[b * n + b] += 1.0;
        lap[a * n + b] -= 1.0;
        lap[b * n + a] -= 1.0;
    }
    let m = n - 1;
    let mut chol = vec![0.0f64; m * m];
    for i in 0..m {
        for j in 0..=i {
            let mut s = lap[i * n + j];
            for k in 0..j {
                s -= chol[i * m + k] * chol[j * m + k];
            }
            if i == j {
                if s <= 0.0 {
                    return invalid("reduced Laplacian is not positive definite");
                }
                chol[i * m + i] = s.sqrt();
            } else {
                chol[i * m + j] = s / chol[j * m + j];
            }
        }
    }
    let solve = |b: &[f64]| -> Vec<f64> {
        let mut y = vec![0.0; m];
        for i in 0..m {
            let mut s = b[i];
            for k in 0..i {
                s -= chol[i * m + k] * y[k];
            }
            y[i] = s / chol[i * m + i];
        }
        for i in (0..m).rev() {
            let mut s = y[i];
            for k in i + 1..m {
                s -= chol[k * m + i] * y[k];
            }
            y[i] = s / chol[i * m + i];
        }
        y.push(0.0);
        y
    };
    let project = |x: &mut Vec<f64>| {
        let mean = x.iter().sum::<f64>() / n as f64;
        x.iter_mut().for_each(|v| *v -= mean);
        let nv = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= nv);
    };
    let apply_lap = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| (0..n).map(|j| lap[i * n + j] * x[j]).sum())
            .collect()
    };

    let mut rng = SplitMix64::new(0x5EED_F1ED);
    let mut x: Vec<f64> = (0..n)
        .map(|_| rng.next_u64() as f64 / u64::MAX as f64 - 0.5)
        .collect();
    project(&mut x);
    let max_iter = 10_000;
    let mut theta = 0.0;
    let mut rel = f64::INFINITY;
    for _ in 0..max_iter {
        let lx = apply_lap(&x);
        theta = x.iter().zip(&lx).map(|(a, b)| a * b).sum::<f64>();
        let r = x
            .iter()
            .zip(&lx)
            .map(|(a, b)| (b - theta * a).powi(2))
            .sum::<f64>()
            .sqrt();
        rel = r / theta;
        if rel <= 1e-11 {
            return Ok(theta);
        }
        // x_v = 0 after the reduced solve; shift back onto the complement of e.
        x = solve(&x[..m]);
        project(&mut x);
    }
    Err(Error::IterationLimit {
        iterations: max_iter,
        estimate: theta,
        residual: rel,
    })
}

fn check_bethe_range(p: u32, k: u64, min_p: u32) -> Result<()> {
    if p < min_p {
        return invalid(format!("p must be at least {min_p}, got {p}"));
    }
    if k < 2 {
        return invalid(format!("k must be at least 2, got {k}"));
    }
    Ok(())
}

/// Lower bound on a(B_{p,k}): (k − 1)² / (k^p − pk + p − 1).
pub fn bethe_alg_conn_lower(p: u32, k: u64) -> Result<f64> {
    check_bethe_range(p, k, 2)?;
    let (pf, kf) = (p as f64, k as f64);
    Ok((kf - 1.0).powi(2) / (kf.powi(p as i32) - pf * kf + pf - 1.0))
}

/// Upper bound on ρ(B_{p,k}): (k^{p+1} − pk − k + p) / (k − 1)².
pub fn bethe_rho_upper(p: u32, k: u64) -> Result<f64> {
    check_bethe_range(p, k, 1)?;
    let (pf, kf) = (p as f64, k as f64);
    Ok((kf.powi(p as i32 + 1) - pf * kf - kf + pf) / (kf - 1.0).powi(2))
}

/// a(B_{p,k}) = 1 / ρ(B_{p−1,k}): every branch at the root is a Perron branch.
pub fn bethe_alg_conn_exact(p: u32, k: u64) -> Result<f64> {
    check_bethe_range(p, k, 2)?;
    Ok(1.0 / perron_value(&make_bethe(p - 1, k)?)?.rho)
}
