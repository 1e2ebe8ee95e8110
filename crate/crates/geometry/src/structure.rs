//! Codazzi and Gauss residuals of the frame data along a trajectory.
//!
//! Everything depends on s alone, so e₃f = df/ds and ξf = e₂f = 0. The
//! connection is rebuilt from the state with κ₂ = 0, κ₃ = γ and κ₁ from the
//! β-relation.

use hypersurf::algebra::{BETA, GAMMA, KAPPA1, MU, OMEGA};
use hypersurf::derivation::{DerivationTable, Direction};
use nalgebra::{Matrix3, Vector3};

use crate::frame::{FrameState, PhiStructure};
use crate::ode::{rhs_general, Trajectory};
use crate::GeometryError;

/// Offsets added to the connection functions; all zero for the true data.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mutation {
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
}

/// (α′, β′, γ′, μ′) at a sample, with μ′ = α′ + γ′.
pub fn state_derivative(st: &FrameState) -> Result<[f64; 4], GeometryError> {
    let [da, db, dg] = rhs_general(st.alpha, st.beta, st.gamma, st.mu)?;
    Ok([da, db, dg, da + dg])
}

/// `g[a][b]` is ∇_{E_a}E_b in frame components, E = (ξ, e₂, e₃).
type Christoffel = [[Vector3<f64>; 3]; 3];

fn christoffel(st: &FrameState, k1: f64, k2: f64, k3: f64) -> Christoffel {
    let (b, g, m) = (st.beta, st.gamma, st.mu);
    let v = Vector3::new;
    [
        [v(0.0, 0.0, b), v(0.0, 0.0, k3), v(-b, -k3, 0.0)],
        [v(0.0, 0.0, g), v(0.0, 0.0, k1), v(-g, -k1, 0.0)],
        [v(0.0, -m, 0.0), v(m, 0.0, k2), v(0.0, -k2, 0.0)],
    ]
}

struct FrameData {
    a: Matrix3<f64>,
    /// e₃-derivative of the shape matrix.
    da: Matrix3<f64>,
    gamma: Christoffel,
    /// e₃-derivative of `gamma`.
    dgamma: Christoffel,
}

fn frame_data(st: &FrameState, dk1: f64, mutation: &Mutation) -> Result<FrameData, GeometryError> {
    let [dal, db, dg, dm] = state_derivative(st)?;
    let k1 = st.kappa1();
    let a = *st.shape_operator().matrix();
    let da = Matrix3::new(dal, db, 0.0, db, dg, 0.0, 0.0, 0.0, dm);
    let gamma = christoffel(st, k1 + mutation.kappa1, mutation.kappa2, st.gamma + mutation.kappa3);
    let dst = FrameState { s: st.s, alpha: dal, beta: db, gamma: dg, mu: dm };
    let dgamma = christoffel(&dst, dk1, 0.0, dg);
    Ok(FrameData { a, da, gamma, dgamma })
}

fn e(i: usize) -> Vector3<f64> {
    Vector3::ith(i, 1.0)
}

/// (∇_{E_x}A)E_y.
fn nabla_a(fd: &FrameData, x: usize, y: usize) -> Vector3<f64> {
    let dir = if x == 2 { fd.da.column(y).into_owned() } else { Vector3::zeros() };
    let mut out = dir;
    for k in 0..3 {
        out += fd.gamma[x][k] * fd.a[(k, y)];
    }
    out - fd.a * fd.gamma[x][y]
}

fn codazzi_from(fd: &FrameData, phi: &PhiStructure) -> f64 {
    let xi = phi.xi();
    let mut worst: f64 = 0.0;
    for (x, y) in [(0, 1), (0, 2), (1, 2)] {
        let (ex, ey) = (e(x), e(y));
        let lhs = nabla_a(fd, x, y) - nabla_a(fd, y, x);
        let rhs = phi.apply(&ey) * ex.dot(&xi) - phi.apply(&ex) * ey.dot(&xi) - xi * (2.0 * phi.pair(&ex, &ey));
        worst = worst.max((lhs - rhs).amax());
    }
    worst
}

/// ∇_{E_x}∇_{E_y}E_z in frame components.
fn second(fd: &FrameData, x: usize, y: usize, z: usize) -> Vector3<f64> {
    let mut out = if x == 2 { fd.dgamma[y][z] } else { Vector3::zeros() };
    for k in 0..3 {
        out += fd.gamma[x][k] * fd.gamma[y][z][k];
    }
    out
}

fn intrinsic(fd: &FrameData, x: usize, y: usize, z: usize) -> Vector3<f64> {
    let bracket = fd.gamma[x][y] - fd.gamma[y][x];
    let mut out = second(fd, x, y, z) - second(fd, y, x, z);
    for k in 0..3 {
        out -= fd.gamma[k][z] * bracket[k];
    }
    out
}

fn gauss_from(fd: &FrameData, phi: &PhiStructure) -> f64 {
    let shape = crate::frame::ShapeOp(fd.a);
    let mut worst: f64 = 0.0;
    for x in 0..3 {
        for y in 0..3 {
            for z in 0..3 {
                let r = intrinsic(fd, x, y, z);
                for w in 0..3 {
                    let g = crate::curvature::gauss_form(&shape, phi, &e(x), &e(y), &e(z), &e(w));
                    worst = worst.max((r[w] - g).abs());
                }
            }
        }
    }
    worst
}

/// e₃κ₁ from the table rule at the sample.
pub fn kappa1_derivative(st: &FrameState, table: &DerivationTable) -> Result<f64, GeometryError> {
    let rule = table
        .rule(KAPPA1, Direction::E3)
        .ok_or_else(|| GeometryError::Usage("derivation table has no e3 rule for kappa1".into()))?;
    let mut point = vec![0.0; rule.vars().len()];
    point[BETA] = st.beta;
    point[GAMMA] = st.gamma;
    point[MU] = st.mu;
    point[OMEGA] = st.beta * st.beta;
    point[KAPPA1] = st.kappa1();
    Ok(rule.numerator().evaluate_f64(&point) / st.beta.powi(rule.beta_power() as i32))
}

/// Largest component of (∇_XA)Y − (∇_YA)X minus the Codazzi right side.
pub fn codazzi_at(st: &FrameState, phi: &PhiStructure, mutation: &Mutation) -> Result<f64, GeometryError> {
    Ok(codazzi_from(&frame_data(st, 0.0, mutation)?, phi))
}

/// Largest component of the connection curvature minus the Gauss right side.
pub fn gauss_at(
    st: &FrameState,
    phi: &PhiStructure,
    table: &DerivationTable,
    mutation: &Mutation,
) -> Result<f64, GeometryError> {
    let dk1 = kappa1_derivative(st, table)?;
    Ok(gauss_from(&frame_data(st, dk1, mutation)?, phi))
}

pub fn codazzi_residual(traj: &Trajectory, index: usize) -> Result<f64, GeometryError> {
    let st = sample(traj, index)?;
    codazzi_at(st, &PhiStructure::standard(), &Mutation::default())
}

pub fn gauss_residual(traj: &Trajectory, index: usize, table: &DerivationTable) -> Result<f64, GeometryError> {
    let st = sample(traj, index)?;
    gauss_at(st, &PhiStructure::standard(), table, &Mutation::default())
}

fn sample(traj: &Trajectory, index: usize) -> Result<&FrameState, GeometryError> {
    traj.samples
        .get(index)
        .ok_or_else(|| GeometryError::Usage(format!("sample {index} out of range ({} samples)", traj.len())))
}
