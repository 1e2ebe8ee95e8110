use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

/// Shape-operator entries at arc parameter `s`, in curvature units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameState {
    pub s: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub mu: f64,
}

impl FrameState {
    /// A state on the ideal slice, `mu = alpha + gamma`.
    pub fn on_slice(s: f64, alpha: f64, beta: f64, gamma: f64) -> Self {
        FrameState { s, alpha, beta, gamma, mu: alpha + gamma }
    }

    pub fn slice_defect(&self) -> f64 {
        self.alpha + self.gamma - self.mu
    }

    /// κ₁ = (β² + 2γ² − μγ − 1)/β.
    pub fn kappa1(&self) -> f64 {
        (self.beta * self.beta + 2.0 * self.gamma * self.gamma - self.mu * self.gamma - 1.0) / self.beta
    }

    pub fn connection(&self) -> ConnectionCoeffs {
        ConnectionCoeffs { kappa1: self.kappa1(), kappa2: 0.0, kappa3: self.gamma }
    }

    pub fn shape_operator(&self) -> ShapeOp {
        ShapeOp::from_entries(self.alpha, self.beta, self.gamma, self.mu)
    }
}

/// φ on the frame (ξ, e₂, e₃): φξ = 0, φe₂ = e₃, φe₃ = −e₂.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiStructure {
    /// Column `j` is φ applied to frame vector `j`.
    pub matrix: Matrix3<f64>,
}

impl PhiStructure {
    pub fn standard() -> Self {
        PhiStructure { matrix: Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0) }
    }

    pub fn apply(&self, x: &Vector3<f64>) -> Vector3<f64> {
        self.matrix * x
    }

    /// ⟨φx, y⟩.
    pub fn pair(&self, x: &Vector3<f64>, y: &Vector3<f64>) -> f64 {
        self.apply(x).dot(y)
    }

    pub fn xi(&self) -> Vector3<f64> {
        Vector3::x()
    }
}

impl Default for PhiStructure {
    fn default() -> Self {
        Self::standard()
    }
}

/// Symmetric shape operator in frame order (ξ, e₂, e₃).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShapeOp(pub Matrix3<f64>);

impl ShapeOp {
    /// `[[α, β, 0], [β, γ, 0], [0, 0, μ]]`.
    pub fn from_entries(alpha: f64, beta: f64, gamma: f64, mu: f64) -> Self {
        ShapeOp(Matrix3::new(alpha, beta, 0.0, beta, gamma, 0.0, 0.0, 0.0, mu))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self.0 - self.0.transpose()).abs().max() <= tol
    }
}

/// Connection functions: ∇_{e₂}e₂ = κ₁e₃, ∇_{e₃}e₂ = κ₂e₃ + μξ, ∇_ξe₂ = κ₃e₃.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConnectionCoeffs {
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_identities() {
        let phi = PhiStructure::standard();
        let xi = phi.xi();
        for i in 0..3 {
            let x = Vector3::ith(i, 1.0);
            let lhs = phi.apply(&phi.apply(&x));
            let rhs = -x + xi * x.dot(&xi);
            assert_eq!(lhs, rhs);
            for j in 0..3 {
                let y = Vector3::ith(j, 1.0);
                assert_eq!(phi.pair(&x, &y), -x.dot(&phi.apply(&y)));
            }
        }
    }

    #[test]
    fn shape_operator_examples() {
        let a = FrameState::on_slice(0.0, 0.0, 1.0, 0.0).shape_operator();
        assert_eq!(a.0, Matrix3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0));
        let sphere = ShapeOp::from_entries(0.0, 0.0, 1.0, 1.0);
        assert_eq!(sphere.0, Matrix3::from_diagonal(&Vector3::new(0.0, 1.0, 1.0)));
        assert!(FrameState::on_slice(0.3, 0.2, -1.7, 0.9).shape_operator().is_symmetric(0.0));
    }

    #[test]
    fn connection_on_slice() {
        let st = FrameState::on_slice(0.0, 0.5, 2.0, -0.25);
        let c = st.connection();
        assert_eq!(c.kappa2, 0.0);
        assert_eq!(c.kappa3, st.gamma);
        let expected = (4.0 + 2.0 * 0.0625 - 0.25 * -0.25 - 1.0) / 2.0;
        assert!((c.kappa1 - expected).abs() < 1e-15);
    }
}
