//! Independent reference routines and random instance generators shared by
//! the integration tests. Nothing here calls the solvers under test.
#![allow(dead_code)]

use boundcast::{build_design, DMatrix, DesignSet, Embedding, RegressorSpec, TrainingPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rows_of(a: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect())
        .collect()
}

pub fn transpose(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gauss-Jordan inverse with partial pivoting; `None` when (numerically) singular.
pub fn gj_inverse(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut aug: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    let scale = m
        .iter()
        .flatten()
        .fold(0.0_f64, |s, x| s.max(x.abs()))
        .max(1e-300);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| aug[i][col].abs().total_cmp(&aug[j][col].abs()))?;
        if aug[piv][col].abs() < 1e-12 * scale {
            return None;
        }
        aug.swap(col, piv);
        let p = aug[col][col];
        for x in aug[col].iter_mut() {
            *x /= p;
        }
        for i in 0..n {
            if i != col {
                let f = aug[i][col];
                if f != 0.0 {
                    for j in 0..2 * n {
                        aug[i][j] -= f * aug[col][j];
                    }
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn gj_solve(m: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    gj_inverse(m).map(|inv| mat_vec(&inv, b))
}

/// `Ψ^S = W⁻¹A(AᵀW⁻¹A)⁻¹r` with the dense inverse above.
pub fn closed_form_psi_s(a: &DMatrix<f64>, w: &[f64], r: &[f64]) -> Option<Vec<f64>> {
    let a = rows_of(a);
    let winv_a: Vec<Vec<f64>> = a
        .iter()
        .zip(w)
        .map(|(row, wj)| row.iter().map(|x| x / wj).collect())
        .collect();
    let m = mat_mul(&transpose(&a), &winv_a);
    let lambda = gj_solve(&m, r)?;
    Some(mat_vec(&winv_a, &lambda))
}

/// Every `k`-subset of `0..n`, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Minimum of `Σ w_j|Ψ_j|` over the basic solutions of `AᵀΨ = r`: every
/// support of `n_r` rows with a nonsingular block.
pub fn l1_vertex_enumeration(a: &DMatrix<f64>, w: &[f64], r: &[f64]) -> Option<f64> {
    let rows = rows_of(a);
    let (v, n) = (a.nrows(), a.ncols());
    let mut best: Option<f64> = None;
    for s in subsets(v, n) {
        // A_Sᵀ Ψ_S = r
        let block: Vec<Vec<f64>> = (0..n)
            .map(|i| s.iter().map(|&j| rows[j][i]).collect())
            .collect();
        if let Some(psi) = gj_solve(&block, r) {
            let obj: f64 = s.iter().zip(&psi).map(|(&j, p)| w[j] * p.abs()).sum();
            best = Some(best.map_or(obj, |b: f64| b.min(obj)));
        }
    }
    best
}

/// Orthogonal projection of `x` onto `{Ψ : AᵀΨ = 0}`.
pub fn project_null(a: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    let rows = rows_of(a);
    let at = transpose(&rows);
    let ata = mat_mul(&at, &rows);
    let lambda = gj_solve(&ata, &mat_vec(&at, x)).expect("A has full column rank");
    let correction = mat_vec(&rows, &lambda);
    x.iter().zip(correction).map(|(a, b)| a - b).collect()
}

/// A random point of `{AᵀΨ = r}` near `base` (which must be feasible).
pub fn random_feasible(
    a: &DMatrix<f64>,
    base: &[f64],
    scale: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let delta: Vec<f64> = (0..base.len())
        .map(|_| rng.gen_range(-scale..scale))
        .collect();
    let step = project_null(a, &delta);
    base.iter().zip(step).map(|(b, s)| b + s).collect()
}

/// Random well-posed `(A, w, r)` with `v` rows and `n_r` columns; `r` lies in
/// the range of `Aᵀ`.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    v: usize,
    n_r: usize,
) -> (DMatrix<f64>, Vec<f64>, Vec<f64>) {
    loop {
        let a = DMatrix::from_fn(v, n_r, |_, _| rng.gen_range(-1.0..1.0));
        let rows = rows_of(&a);
        if gj_inverse(&mat_mul(&transpose(&rows), &rows)).is_none() {
            continue;
        }
        let w: Vec<f64> = (0..v).map(|_| rng.gen_range(0.1..2.0)).collect();
        let x: Vec<f64> = (0..v).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = mat_vec(&transpose(&rows), &x);
        return (a, w, r);
    }
}

/// `Σ w_j |Ψ_j|`.
pub fn weighted_l1(w: &[f64], psi: &[f64]) -> f64 {
    w.iter().zip(psi).map(|(w, p)| w * p.abs()).sum()
}

pub fn l1_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Exact optimum of `min Σ w|Ψ|` s.t. `AᵀΨ = r`, `‖Ψ − s‖₁ ≤ γ` when the
/// feasible affine set is two-dimensional (`v = n_r + 2`).
///
/// Writes `Ψ = s + t₁n₁ + t₂n₂` and evaluates the objective at every vertex
/// of the arrangement formed by the lines `Ψ_j = 0`, `Ψ_j = s_j` and the ball
/// boundary; a piecewise-linear convex program over a polygon attains its
/// minimum at one of these points.
pub fn combined_2d_oracle(a: &DMatrix<f64>, w: &[f64], s: &[f64], gamma: f64) -> f64 {
    let v = a.nrows();
    assert_eq!(
        v,
        a.ncols() + 2,
        "oracle needs a two-dimensional null space"
    );
    // Null-space basis by Gram-Schmidt on projected unit vectors.
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for i in 0..v {
        let mut e = vec![0.0; v];
        e[i] = 1.0;
        let mut u = project_null(a, &e);
        for b in &basis {
            let c = dot(&u, b);
            for (x, y) in u.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
        let norm = dot(&u, &u).sqrt();
        if norm > 1e-8 {
            basis.push(u.iter().map(|x| x / norm).collect());
        }
        if basis.len() == 2 {
            break;
        }
    }
    let (n1, n2) = (&basis[0], &basis[1]);
    let psi =
        |t: (f64, f64)| -> Vec<f64> { (0..v).map(|j| s[j] + t.0 * n1[j] + t.1 * n2[j]).collect() };
    let ball = |t: (f64, f64)| l1_dist(&psi(t), s);

    // Lines a·t = c in t-space.
    let mut lines: Vec<(f64, f64, f64)> = Vec::new();
    for j in 0..v {
        if n1[j].abs() + n2[j].abs() > 1e-12 {
            lines.push((n1[j], n2[j], -s[j])); // Ψ_j = 0
            lines.push((n1[j], n2[j], 0.0)); // Ψ_j = s_j
        }
    }
    let mut candidates: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    for i in 0..lines.len() {
        for k in i + 1..lines.len() {
            let (a1, b1, c1) = lines[i];
            let (a2, b2, c2) = lines[k];
            let det = a1 * b2 - a2 * b1;
            if det.abs() > 1e-12 {
                candidates.push(((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det));
            }
        }
    }
    // Crossings of each line with the ball boundary.
    for &(a1, b1, c1) in &lines {
        let norm2 = a1 * a1 + b1 * b1;
        let p0 = (a1 * c1 / norm2, b1 * c1 / norm2);
        let d = (-b1, a1);
        let at = |u: f64| (p0.0 + u * d.0, p0.1 + u * d.1);
        let mut knots: Vec<f64> = Vec::new();
        for j in 0..v {
            let slope = n1[j] * d.0 + n2[j] * d.1;
            if slope.abs() > 1e-14 {
                let base = n1[j] * p0.0 + n2[j] * p0.1;
                knots.push(-base / slope);
            }
        }
        knots.sort_by(f64::total_cmp);
        let span = knots.last().copied().unwrap_or(0.0) - knots.first().copied().unwrap_or(0.0);
        let far = 10.0 * (1.0 + gamma + span);
        let mut us = vec![knots.first().copied().unwrap_or(0.0) - far];
        us.extend(&knots);
        us.push(knots.last().copied().unwrap_or(0.0) + far);
        for pair in us.windows(2) {
            let (g0, g1) = (ball(at(pair[0])) - gamma, ball(at(pair[1])) - gamma);
            if g0 == 0.0 {
                candidates.push(at(pair[0]));
            }
            if (g0 < 0.0) != (g1 < 0.0) {
                let u = pair[0] + (pair[1] - pair[0]) * g0 / (g0 - g1);
                candidates.push(at(u));
            }
        }
    }
    candidates
        .into_iter()
        .filter(|&t| ball(t) <= gamma * (1.0 + 1e-9) + 1e-12)
        .map(|t| weighted_l1(w, &psi(t)))
        .fold(f64::INFINITY, f64::min)
}

/// Random embeddings of dimension `p` with targets from `target(z, j)`.
pub fn random_design(
    rng: &mut ChaCha8Rng,
    v: usize,
    spec: &RegressorSpec,
    mut target: impl FnMut(&Embedding, usize) -> f64,
) -> DesignSet {
    let p = spec.order();
    let pairs: Vec<TrainingPair> = (0..v)
        .map(|j| {
            let z = Embedding::new((0..p).map(|_| rng.gen_range(-1.0..1.0)).collect(), j);
            let y = target(&z, j);
            TrainingPair {
                embedding: z,
                target: y,
            }
        })
        .collect();
    build_design(&pairs, spec).expect("enough rows")
}

pub fn random_embedding(rng: &mut ChaCha8Rng, p: usize) -> Embedding {
    Embedding::new((0..p).map(|_| rng.gen_range(-1.0..1.0)).collect(), 10_000)
}
