//! Complex bivectors held as a pair of complex 3-vectors `(E, B)`.
//!
//! The contravariant matrix form is
//!
//! ```text
//!          | 0    -E1   -E2   -E3 |
//! F^{αβ} = | E1    0    -B3    B2 |
//!          | E2    B3    0    -B1 |
//!          | E3   -B2    B1    0  |
//! ```
//!
//! and the sixtor index map is `1↔[10] 2↔[20] 3↔[30] 4↔[32] 5↔[13] 6↔[21]`
//! (zero-based in code), so the sixtor is `(E, B)` stacked.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::BivectorError;
use crate::scalar::{Complex64, Scalar};
use crate::tensor::{dual2_with, SmallTensor, Variance, DIM, SIGNATURE};

/// Tensor index pair for each sixtor slot.
pub const SIXTOR_PAIRS: [(usize, usize); 6] = [(1, 0), (2, 0), (3, 0), (3, 2), (1, 3), (2, 1)];

/// Sixtor slot and orientation sign for an index pair, `None` on the diagonal.
pub fn sixtor_slot(alpha: usize, beta: usize) -> Option<(usize, i8)> {
    SIXTOR_PAIRS.iter().enumerate().find_map(|(a, &(p, q))| {
        if (alpha, beta) == (p, q) {
            Some((a, 1))
        } else if (alpha, beta) == (q, p) {
            Some((a, -1))
        } else {
            None
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bivector<S> {
    pub e: [S; 3],
    pub b: [S; 3],
}

/// Six-component representation of a bivector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sixtor<S>(pub [S; 6]);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfDualParts<S> {
    /// `(F + i★F)/2`
    pub minus: Bivector<S>,
    /// `(F − i★F)/2`
    pub plus: Bivector<S>,
    /// `(F̄ − i★F̄)/2`
    pub conj_minus: Bivector<S>,
    /// `(F̄ + i★F̄)/2`
    pub conj_plus: Bivector<S>,
}

impl<S: Scalar> Bivector<S> {
    pub fn new(e: [S; 3], b: [S; 3]) -> Self {
        Self { e, b }
    }

    pub fn zero() -> Self {
        Self { e: [S::zero(); 3], b: [S::zero(); 3] }
    }

    pub fn from_sixtor(s: &Sixtor<S>) -> Self {
        let c = s.0;
        Self { e: [c[0], c[1], c[2]], b: [c[3], c[4], c[5]] }
    }

    pub fn sixtor_form(&self) -> Sixtor<S> {
        let (e, b) = (self.e, self.b);
        Sixtor([e[0], e[1], e[2], b[0], b[1], b[2]])
    }

    /// All-contravariant antisymmetric matrix `F^{αβ}`.
    pub fn matrix_form(&self) -> SmallTensor<S> {
        let s = self.sixtor_form();
        SmallTensor::from_fn(&[Variance::Upper, Variance::Upper], |idx| match sixtor_slot(idx[0], idx[1]) {
            Some((a, 1)) => s.0[a],
            Some((a, _)) => -s.0[a],
            None => S::zero(),
        })
        .expect("rank 2")
    }

    /// Inverse of [`matrix_form`](Self::matrix_form); antisymmetry is checked
    /// exactly (rational) or to the relative tolerance `tol` (float).
    pub fn from_matrix_tol(m: &SmallTensor<S>, tol: f64) -> Result<Self, BivectorError> {
        if m.variance() != [Variance::Upper, Variance::Upper] {
            return Err(BivectorError::NotRank2Contravariant);
        }
        for row in 0..DIM {
            for col in row..DIM {
                if !m[[row, col]].approx_eq(&-m[[col, row]], tol) {
                    return Err(BivectorError::NotAntisymmetric { row, col });
                }
            }
        }
        Ok(Self::from_antisymmetric(m))
    }

    pub fn from_matrix(m: &SmallTensor<S>) -> Result<Self, BivectorError> {
        Self::from_matrix_tol(m, 1e-12)
    }

    fn from_antisymmetric(m: &SmallTensor<S>) -> Self {
        let mut c = [S::zero(); 6];
        for (a, &(p, q)) in SIXTOR_PAIRS.iter().enumerate() {
            c[a] = m[[p, q]];
        }
        Self::from_sixtor(&Sixtor(c))
    }

    pub fn conj(&self) -> Self {
        Self { e: self.e.map(|c| c.conj()), b: self.b.map(|c| c.conj()) }
    }

    /// `★F^{αβ} = ½ ε^{αβ}{}_{μν} F^{μν}`, computed through the tensor kernel.
    pub fn dual(&self) -> Self {
        self.dual_with(&S::constants().eps_dual)
    }

    /// [`dual`](Self::dual) with an explicit `ε^{αβ}{}_{μν}` operator.
    pub fn dual_with(&self, eps_dual: &SmallTensor<S>) -> Self {
        let d = dual2_with(&self.matrix_form(), eps_dual).expect("rank-2 contraction");
        Self::from_antisymmetric(&d)
    }

    /// The duality transform as a 3-vector exchange `E ↦ −B, B ↦ E`.
    pub fn duality_transform(&self) -> Self {
        Self { e: self.b.map(|c| -c), b: self.e }
    }

    pub fn self_dual_parts(&self) -> SelfDualParts<S> {
        let half = S::from_ratio(1, 2);
        let i = S::i();
        let star = self.dual();
        let fbar = self.conj();
        let star_bar = fbar.dual();
        let combine = |x: &Self, y: &Self, c: S| x.add(&y.scale(c)).scale(half);
        SelfDualParts {
            minus: combine(self, &star, i),
            plus: combine(self, &star, -i),
            conj_minus: combine(&fbar, &star_bar, -i),
            conj_plus: combine(&fbar, &star_bar, i),
        }
    }

    /// Multiplies every component by the unit-modulus `factor`.
    pub fn phase_rotate(&self, factor: S) -> Result<Self, BivectorError> {
        if !factor.norm_sqr().approx_eq(&S::one(), 1e-12) {
            return Err(BivectorError::NonUnitPhase);
        }
        Ok(self.scale(factor))
    }

    pub fn scale(&self, s: S) -> Self {
        Self { e: self.e.map(|c| s * c), b: self.b.map(|c| s * c) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            e: std::array::from_fn(|k| self.e[k] + other.e[k]),
            b: std::array::from_fn(|k| self.b[k] + other.b[k]),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-S::one()))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.e.iter().chain(&self.b).all(|c| c.is_real(tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.e.iter().chain(&self.b).zip(other.e.iter().chain(&other.b)).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn components(&self) -> [S; 6] {
        self.sixtor_form().0
    }

    pub fn to_c64(&self) -> Bivector<Complex64> {
        Bivector { e: self.e.map(|c| c.to_c64()), b: self.b.map(|c| c.to_c64()) }
    }
}

impl Bivector<Complex64> {
    /// Multiplies every component by `e^{iφ}`.
    pub fn phase_rotate_angle(&self, phi: f64) -> Self {
        self.scale(Complex64::from_polar(1.0, phi))
    }
}

/// Deterministic pseudo-random bivector.
pub fn random_bivector<S: Scalar>(seed: u64) -> Bivector<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Bivector {
        e: std::array::from_fn(|_| S::sample(&mut rng)),
        b: std::array::from_fn(|_| S::sample(&mut rng)),
    }
}

/// Deterministic pseudo-random bivector with zero imaginary part.
pub fn random_real_bivector<S: Scalar>(seed: u64) -> Bivector<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EA1_B1FE_C70F_0000);
    Bivector {
        e: std::array::from_fn(|_| S::sample_real(&mut rng)),
        b: std::array::from_fn(|_| S::sample_real(&mut rng)),
    }
}

/// A proper orthochronous Lorentz transformation `Λ^α{}_μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzTransform {
    matrix: [[f64; 4]; 4],
}

impl LorentzTransform {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = 1.0;
        }
        Self { matrix: m }
    }

    /// Wraps a matrix, checking `Λᵀ g Λ = g` to `tol`.
    pub fn from_matrix(matrix: [[f64; 4]; 4], tol: f64) -> Option<Self> {
        let t = Self { matrix };
        (t.metric_residual() <= tol).then_some(t)
    }

    /// Boost into a frame moving with `velocity` (units of c).
    pub fn boost(velocity: [f64; 3]) -> Result<Self, BivectorError> {
        let v2: f64 = velocity.iter().map(|v| v * v).sum();
        let speed = v2.sqrt();
        if speed >= 1.0 || !speed.is_finite() {
            return Err(BivectorError::Superluminal(speed));
        }
        if v2 == 0.0 {
            return Ok(Self::identity());
        }
        let gamma = 1.0 / (1.0 - v2).sqrt();
        let mut m = [[0.0; 4]; 4];
        m[0][0] = gamma;
        for i in 0..3 {
            m[0][i + 1] = -gamma * velocity[i];
            m[i + 1][0] = -gamma * velocity[i];
            for j in 0..3 {
                let delta = if i == j { 1.0 } else { 0.0 };
                m[i + 1][j + 1] = delta + (gamma - 1.0) * velocity[i] * velocity[j] / v2;
            }
        }
        Ok(Self { matrix: m })
    }

    /// Active spatial rotation by `angle` about `axis` (right-hand rule).
    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self, BivectorError> {
        let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(BivectorError::ZeroAxis);
        }
        let n = axis.map(|a| a / norm);
        let (s, c) = angle.sin_cos();
        let cross = [[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]];
        let mut m = Self::identity().matrix;
        for i in 0..3 {
            for j in 0..3 {
                let delta = if i == j { 1.0 } else { 0.0 };
                m[i + 1][j + 1] = c * delta + (1.0 - c) * n[i] * n[j] + s * cross[i][j];
            }
        }
        Ok(Self { matrix: m })
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum();
            }
        }
        Self { matrix: m }
    }

    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.matrix
    }

    /// Largest entry of `Λᵀ g Λ − g`.
    pub fn metric_residual(&self) -> f64 {
        let m = &self.matrix;
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let v: f64 = (0..4).map(|k| m[k][a] * SIGNATURE[k] as f64 * m[k][b]).sum();
                let target = if a == b { SIGNATURE[a] as f64 } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }

    pub fn determinant(&self) -> f64 {
        fn det(m: &[Vec<f64>]) -> f64 {
            if m.len() == 1 {
                return m[0][0];
            }
            (0..m.len())
                .map(|c| {
                    let minor: Vec<Vec<f64>> =
                        m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, v)| *v).collect()).collect();
                    let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                    sign * m[0][c] * det(&minor)
                })
                .sum()
        }
        det(&self.matrix.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    /// Per-slot transformation matrix: `Λ^α{}_μ` for upper slots and
    /// `Λ_α{}^μ = g_{αβ} Λ^β{}_ν g^{νμ}` for lower slots.
    fn slot_matrix(&self, v: Variance) -> [[f64; 4]; 4] {
        match v {
            Variance::Upper => self.matrix,
            Variance::Lower => {
                let mut m = self.matrix;
                for (a, row) in m.iter_mut().enumerate() {
                    for (nu, cell) in row.iter_mut().enumerate() {
                        *cell *= (SIGNATURE[a] * SIGNATURE[nu]) as f64;
                    }
                }
                m
            }
        }
    }

    /// Transforms every slot of a tensor.
    pub fn apply_tensor(&self, t: &SmallTensor<Complex64>) -> SmallTensor<Complex64> {
        let mut out = t.clone();
        for slot in 0..t.rank() {
            let m = self.slot_matrix(t.variance()[slot]);
            let v = t.variance()[slot];
            let lam = SmallTensor::from_components(&[v, v.flipped()], m.iter().flatten().map(|&x| Complex64::new(x, 0.0)).collect())
                .expect("16 components");
            let moved = lam.tensordot(&out, &[(1, slot)]).expect("opposite variance");
            let perm: Vec<usize> = std::iter::once(slot).chain((0..t.rank()).filter(|&s| s != slot)).collect();
            out = moved.permuted(&perm).expect("valid permutation");
        }
        out
    }

    pub fn apply_bivector(&self, f: &Bivector<Complex64>) -> Bivector<Complex64> {
        let m = self.apply_tensor(&f.matrix_form());
        Bivector::from_antisymmetric(&m)
    }
}

/// `F'^{αβ} = Λ^α{}_μ Λ^β{}_ν F^{μν}`.
pub fn lorentz_transform(f: &Bivector<Complex64>, lambda: &LorentzTransform) -> Bivector<Complex64> {
    lambda.apply_bivector(f)
}
