//! Curvature from the Gauss equation of a real hypersurface in CP² with
//! holomorphic sectional curvature 4.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::frame::{PhiStructure, ShapeOp};
use crate::GeometryError;

/// ⟨R(x, y)z, w⟩ = ⟨y,z⟩⟨x,w⟩ − ⟨x,z⟩⟨y,w⟩ + ⟨φy,z⟩⟨φx,w⟩ − ⟨φx,z⟩⟨φy,w⟩
/// − 2⟨φx,y⟩⟨φz,w⟩ + ⟨Ay,z⟩⟨Ax,w⟩ − ⟨Ax,z⟩⟨Ay,w⟩.
pub fn gauss_form(
    a: &ShapeOp,
    phi: &PhiStructure,
    x: &Vector3<f64>,
    y: &Vector3<f64>,
    z: &Vector3<f64>,
    w: &Vector3<f64>,
) -> f64 {
    let m = a.matrix();
    let (ax, ay) = (m * x, m * y);
    y.dot(z) * x.dot(w) - x.dot(z) * y.dot(w) + phi.pair(y, z) * phi.pair(x, w)
        - phi.pair(x, z) * phi.pair(y, w)
        - 2.0 * phi.pair(x, y) * phi.pair(z, w)
        + ay.dot(z) * ax.dot(w)
        - ax.dot(z) * ay.dot(w)
}

/// Sectional curvature of the plane spanned by orthonormal `x`, `y`.
pub fn sectional(a: &ShapeOp, phi: &PhiStructure, x: &Vector3<f64>, y: &Vector3<f64>) -> f64 {
    gauss_form(a, phi, x, y, y, x)
}

/// All frame components `r[i][j][k][l] = ⟨R(eᵢ, eⱼ)eₖ, eₗ⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureTensor {
    pub r: [[[[f64; 3]; 3]; 3]; 3],
}

impl CurvatureTensor {
    pub fn from_gauss(a: &ShapeOp, phi: &PhiStructure) -> Self {
        let e = |i| Vector3::ith(i, 1.0);
        let mut r = [[[[0.0; 3]; 3]; 3]; 3];
        for (i, ri) in r.iter_mut().enumerate() {
            for (j, rij) in ri.iter_mut().enumerate() {
                for (k, rijk) in rij.iter_mut().enumerate() {
                    for (l, v) in rijk.iter_mut().enumerate() {
                        *v = gauss_form(a, phi, &e(i), &e(j), &e(k), &e(l));
                    }
                }
            }
        }
        CurvatureTensor { r }
    }

    pub fn sectional(&self, i: usize, j: usize) -> f64 {
        self.r[i][j][j][i]
    }

    /// Ric(eⱼ, eₖ) = Σᵢ ⟨R(eᵢ, eⱼ)eₖ, eᵢ⟩.
    pub fn ricci(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|j, k| (0..3).map(|i| self.r[i][j][k][i]).sum())
    }

    pub fn max_abs_diff(&self, other: &CurvatureTensor) -> f64 {
        let mut out: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        out = out.max((self.r[i][j][k][l] - other.r[i][j][k][l]).abs());
                    }
                }
            }
        }
        out
    }
}

/// Pointwise curvature data of a shape operator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PointCurvature {
    #[serde(rename = "K12")]
    pub k12: f64,
    #[serde(rename = "K13")]
    pub k13: f64,
    #[serde(rename = "K23")]
    pub k23: f64,
    pub tau: f64,
    pub ricci: [[f64; 3]; 3],
    /// Largest Ricci eigenvalue.
    pub delta2: f64,
    /// trace(A)/3.
    #[serde(rename = "H")]
    pub h: f64,
    /// δ(2) − ((9/4)H² + 5).
    pub ideal_residual: f64,
}

pub fn pointwise(a: &ShapeOp, phi: &PhiStructure) -> PointCurvature {
    let t = CurvatureTensor::from_gauss(a, phi);
    let ric = t.ricci();
    let (k12, k13, k23) = (t.sectional(0, 1), t.sectional(0, 2), t.sectional(1, 2));
    let delta2 = SymmetricEigen::new(ric).eigenvalues.max();
    let h = a.trace() / 3.0;
    let ricci = [
        [ric[(0, 0)], ric[(0, 1)], ric[(0, 2)]],
        [ric[(1, 0)], ric[(1, 1)], ric[(1, 2)]],
        [ric[(2, 0)], ric[(2, 1)], ric[(2, 2)]],
    ];
    PointCurvature {
        k12,
        k13,
        k23,
        tau: k12 + k13 + k23,
        ricci,
        delta2,
        h,
        ideal_residual: delta2 - (2.25 * h * h + 5.0),
    }
}

/// `n` nearly uniform unit vectors on the sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<Vector3<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let t = golden * i as f64;
            Vector3::new(r * t.cos(), r * t.sin(), z)
        })
        .collect()
}

fn complement(u: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let axis = if u.x.abs() <= u.y.abs() && u.x.abs() <= u.z.abs() {
        Vector3::x()
    } else if u.y.abs() <= u.z.abs() {
        Vector3::y()
    } else {
        Vector3::z()
    };
    let v = (axis - u * axis.dot(u)).normalize();
    (v, u.cross(&v))
}

/// Sectional curvature of the plane orthogonal to unit `u`.
fn normal_plane_curvature(a: &ShapeOp, phi: &PhiStructure, u: &Vector3<f64>) -> f64 {
    let (v, w) = complement(u);
    sectional(a, phi, &v, &w)
}

/// δ(2) = τ − inf K found by searching plane normals: a Fibonacci grid of
/// `n` normals followed by a shrinking pattern search around the best one.
pub fn delta2_plane_grid(a: &ShapeOp, phi: &PhiStructure, n: usize) -> f64 {
    let tau = pointwise_tau(a, phi);
    let grid = fibonacci_sphere(n.max(1));
    let (mut best_u, mut best) =
        grid.iter().map(|u| (*u, normal_plane_curvature(a, phi, u))).fold((Vector3::z(), f64::INFINITY), |acc, x| {
            if x.1 < acc.1 {
                x
            } else {
                acc
            }
        });
    let mut step = (4.0 / n.max(1) as f64).sqrt();
    while step > 1e-10 {
        let (t1, t2) = complement(&best_u);
        let mut improved = false;
        for dir in [t1, -t1, t2, -t2] {
            let cand = (best_u + dir * step).normalize();
            let k = normal_plane_curvature(a, phi, &cand);
            if k < best {
                best = k;
                best_u = cand;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    tau - best
}

fn pointwise_tau(a: &ShapeOp, phi: &PhiStructure) -> f64 {
    let e = |i| Vector3::ith(i, 1.0);
    sectional(a, phi, &e(0), &e(1)) + sectional(a, phi, &e(0), &e(2)) + sectional(a, phi, &e(1), &e(2))
}

/// Right side minus left side of τ − K(π) ≤ (9/4)H² + 5 − 3⟨φe₁, e₂⟩² for
/// the plane π spanned by orthonormal `e1`, `e2`.
pub fn inequality_residual(
    a: &ShapeOp,
    phi: &PhiStructure,
    e1: &Vector3<f64>,
    e2: &Vector3<f64>,
) -> Result<f64, GeometryError> {
    const ORTHO_TOL: f64 = 1e-9;
    if (e1.norm() - 1.0).abs() > ORTHO_TOL || (e2.norm() - 1.0).abs() > ORTHO_TOL || e1.dot(e2).abs() > ORTHO_TOL {
        return Err(GeometryError::Usage("plane vectors must be orthonormal".into()));
    }
    let h = a.trace() / 3.0;
    let j = phi.pair(e1, e2);
    let lhs = pointwise_tau(a, phi) - sectional(a, phi, e1, e2);
    Ok(2.25 * h * h + 5.0 - 3.0 * j * j - lhs)
}

/// Symmetric matrix with entries uniform in `[-scale, scale]`.
pub fn random_symmetric<R: Rng>(rng: &mut R, scale: f64) -> ShapeOp {
    let mut m = Matrix3::zeros();
    for i in 0..3 {
        for j in i..3 {
            let v = rng.gen_range(-scale..=scale);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    ShapeOp(m)
}

fn random_unit<R: Rng>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// A uniformly random orthonormal pair.
pub fn random_plane<R: Rng>(rng: &mut R) -> (Vector3<f64>, Vector3<f64>) {
    let u = random_unit(rng);
    let (v, w) = complement(&u);
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let e2 = v * t.cos() + w * t.sin();
    let e1 = e2.cross(&u);
    (e1, e2)
}

/// An orthonormal frame `(f1, f2, f3)` with ⟨φf₁, f₂⟩ = 0.
pub fn random_adapted_frame<R: Rng>(rng: &mut R, phi: &PhiStructure) -> Matrix3<f64> {
    loop {
        let f1 = random_unit(rng);
        let pf = phi.apply(&f1);
        let cand = random_unit(rng);
        let mut f2 = cand - f1 * cand.dot(&f1);
        if pf.norm() > 1e-6 {
            let pn = (pf - f1 * pf.dot(&f1)).normalize();
            f2 -= pn * f2.dot(&pn);
        }
        if f2.norm() < 1e-3 {
            continue;
        }
        let f2 = f2.normalize();
        let f3 = f1.cross(&f2);
        return Matrix3::from_columns(&[f1, f2, f3]);
    }
}

/// A shape operator of the equality form in a random adapted frame, together
/// with the plane of the first two frame vectors.
pub fn random_equality_case<R: Rng>(
    rng: &mut R,
    phi: &PhiStructure,
    scale: f64,
) -> (ShapeOp, Vector3<f64>, Vector3<f64>) {
    let f = random_adapted_frame(rng, phi);
    let alpha = rng.gen_range(-scale..=scale);
    let beta = rng.gen_range(-scale..=scale);
    let gamma = rng.gen_range(-scale..=scale);
    let m = ShapeOp::from_entries(alpha, beta, gamma, alpha + gamma);
    (ShapeOp(f * m.0 * f.transpose()), f.column(0).into(), f.column(1).into())
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct InequalitySummary {
    pub draws: usize,
    pub min_residual: f64,
}

const CHUNK: usize = 1024;

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Smallest inequality residual over `draws` random symmetric operators and
/// random planes. Draws come in fixed chunks with their own random streams,
/// so the result does not depend on scheduling.
pub fn inequality_monte_carlo(draws: usize, seed: u64, scale: f64, sequential: bool) -> InequalitySummary {
    let phi = PhiStructure::standard();
    let chunks = draws.div_ceil(CHUNK);
    let run = |c: usize| {
        let mut rng = chunk_rng(seed, c);
        let n = CHUNK.min(draws - c * CHUNK);
        (0..n)
            .map(|_| {
                let a = random_symmetric(&mut rng, scale);
                let (e1, e2) = random_plane(&mut rng);
                inequality_residual(&a, &phi, &e1, &e2).expect("random planes are orthonormal")
            })
            .fold(f64::INFINITY, f64::min)
    };
    let min_residual = if sequential {
        (0..chunks).map(run).fold(f64::INFINITY, f64::min)
    } else {
        (0..chunks).into_par_iter().map(run).reduce(|| f64::INFINITY, f64::min)
    };
    InequalitySummary { draws, min_residual }
}

/// Largest |Ricci δ(2) − plane-grid δ(2)| over `count` random operators.
pub fn delta2_cross_check(count: usize, seed: u64, scale: f64, grid: usize) -> f64 {
    let phi = PhiStructure::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ops: Vec<ShapeOp> = (0..count).map(|_| random_symmetric(&mut rng, scale)).collect();
    ops.par_iter()
        .map(|a| (pointwise(a, &phi).delta2 - delta2_plane_grid(a, &phi, grid)).abs())
        .reduce(|| 0.0, f64::max)
}
