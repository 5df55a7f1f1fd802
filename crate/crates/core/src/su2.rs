//! SU(2) group elements, Haar sampling, characters and irreducible representations.
//!
//! An element is held as a unit quaternion `(q0, q1, q2, q3)` with the matrix
//!
//! ```text
//! U = q0·I + i·(q1·σx + q2·σy + q3·σz)
//!   = ⎡ q0 + i·q3   q2 + i·q1 ⎤
//!     ⎣ −q2 + i·q1  q0 − i·q3 ⎦
//! ```
//!
//! so `Tr U = 2·q0 = 2·cos(θ/2)` where θ ∈ [0, 2π] is the class angle. The
//! class angle labels conjugacy classes completely: `θ` and `4π − θ` are
//! conjugate, and `θ = 2π` is the central element `−I`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = [[Complex64; 2]; 2];

/// An element of SU(2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    q: [f64; 4],
}

impl GroupElement {
    pub fn identity() -> Self {
        Self {
            q: [1.0, 0.0, 0.0, 0.0],
        }
    }

    /// Builds an element from quaternion components, normalizing them.
    pub fn from_quaternion(q: [f64; 4]) -> Result<Self> {
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::InvalidArgument(format!(
                "quaternion norm {norm} cannot be normalized"
            )));
        }
        Ok(Self {
            q: [q[0] / norm, q[1] / norm, q[2] / norm, q[3] / norm],
        })
    }

    /// Reads an element back from a 2×2 matrix of the form above.
    ///
    /// Only the first row is used; the caller is responsible for passing an
    /// SU(2) matrix.
    pub fn from_matrix(m: &Mat2) -> Result<Self> {
        Self::from_quaternion([m[0][0].re, m[0][1].im, m[0][1].re, m[0][0].im])
    }

    pub fn quaternion(&self) -> [f64; 4] {
        self.q
    }

    pub fn matrix(&self) -> Mat2 {
        let [q0, q1, q2, q3] = self.q;
        [
            [Complex64::new(q0, q3), Complex64::new(q2, q1)],
            [Complex64::new(-q2, q1), Complex64::new(q0, -q3)],
        ]
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.q[0]
    }

    /// Class angle θ ∈ [0, 2π] with `Tr U = 2·cos(θ/2)`.
    pub fn class_angle(&self) -> f64 {
        let v = (self.q[1] * self.q[1] + self.q[2] * self.q[2] + self.q[3] * self.q[3]).sqrt();
        2.0 * v.atan2(self.q[0])
    }

    /// Conjugation parameters `(φ1, φ2)` of the rotation axis, with
    /// `φ1 ∈ [0, π/2]` and `φ2 ∈ (−π, π]`. Central elements have no axis and
    /// report `(0, 0)`.
    pub fn axis_params(&self) -> (f64, f64) {
        let [_, q1, q2, q3] = self.q;
        let v = (q1 * q1 + q2 * q2 + q3 * q3).sqrt();
        if v < 1e-15 {
            return (0.0, 0.0);
        }
        let (nx, ny, nz) = (q1 / v, q2 / v, q3 / v);
        let phi1 = 0.5 * nz.clamp(-1.0, 1.0).acos();
        let phi2 = if nx.abs() < 1e-15 && ny.abs() < 1e-15 {
            0.0
        } else {
            (-ny).atan2(nx)
        };
        (phi1, phi2)
    }

    pub fn inverse(&self) -> Self {
        Self {
            q: [self.q[0], -self.q[1], -self.q[2], -self.q[3]],
        }
    }

    /// Group product `self · other` (matrix product order).
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let m = mat2_mul(&self.matrix(), &other.matrix());
        // Product of unit quaternions is unit up to rounding.
        GroupElement::from_matrix(&m).expect("product of SU(2) elements")
    }

    pub fn neg(&self) -> Self {
        Self {
            q: [-self.q[0], -self.q[1], -self.q[2], -self.q[3]],
        }
    }
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `W† · diag(e^{iθ/2}, e^{−iθ/2}) · W` with
/// `W = [[cos φ1, sin φ1·e^{iφ2}], [−sin φ1·e^{−iφ2}, cos φ1]]`.
///
/// Conjugating σz by `W` gives the axis
/// `n = (sin 2φ1·cos φ2, −sin 2φ1·sin φ2, cos 2φ1)`, so the product is
/// `cos(θ/2)·I + i·sin(θ/2)·n·σ`.
pub fn make_group_element(theta: f64, phi1: f64, phi2: f64) -> GroupElement {
    let (s, c) = (0.5 * theta).sin_cos();
    let (s2, c2) = (2.0 * phi1).sin_cos();
    let n = [s2 * phi2.cos(), -s2 * phi2.sin(), c2];
    GroupElement {
        q: [c, s * n[0], s * n[1], s * n[2]],
    }
}

/// Haar-distributed element: a uniform point on the unit 3-sphere.
pub fn haar_sample<R: Rng + ?Sized>(rng: &mut R) -> GroupElement {
    loop {
        let q: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        if let Ok(g) = GroupElement::from_quaternion(q) {
            return g;
        }
    }
}

/// Dimension label `j ≥ 1` of an irreducible representation (spin `(j−1)/2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrrepLabel(usize);

impl IrrepLabel {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "irrep dimension must be >= 1".into(),
            ));
        }
        Ok(Self(dim))
    }

    pub fn dim(&self) -> usize {
        self.0
    }
}

/// Character of the `j`-dimensional irrep at class angle θ:
/// `Σ_{l=1}^{j} e^{i(l−(j+1)/2)θ} = sin(jθ/2)/sin(θ/2)`.
pub fn character(j: IrrepLabel, theta: f64) -> f64 {
    character_dim(j.dim(), theta)
}

pub(crate) fn character_dim(j: usize, theta: f64) -> f64 {
    let half = 0.5 * theta;
    let s = half.sin();
    if s.abs() < 1e-6 {
        // Near a removable singularity the ratio loses digits; sum directly.
        let centre = 0.5 * (j as f64 + 1.0);
        return (1..=j).map(|l| ((l as f64 - centre) * theta).cos()).sum();
    }
    (j as f64 * half).sin() / s
}

fn factorials(n: usize) -> Vec<f64> {
    let mut f = vec![1.0; n + 1];
    for i in 1..=n {
        f[i] = f[i - 1] * i as f64;
    }
    f
}

/// The `j`-dimensional irreducible representation matrix `V_g^j`.
///
/// Built on homogeneous polynomials of degree `j − 1` in `(x, y)` with
/// `(V_g f)(v) = f(v·g)` and orthonormal basis `x^p y^q / √(p! q!)`. Basis
/// index `i` carries `p = j − 1 − i`, so for `j = 2` the result is `g` itself
/// and the diagonal torus acts as `diag(e^{i s θ}, …, e^{−i s θ})`.
pub fn irrep_matrix(j: IrrepLabel, g: &GroupElement) -> DMatrix<Complex64> {
    let j = j.dim();
    let deg = j - 1;
    let m = g.matrix();
    let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    let fact = factorials(deg);
    let binom = |n: usize, k: usize| fact[n] / (fact[k] * fact[n - k]);

    let mut out = DMatrix::<Complex64>::zeros(j, j);
    for col in 0..j {
        let p = deg - col;
        let q = col;
        for row in 0..j {
            let p_out = deg - row;
            let q_out = row;
            let mut acc = Complex64::zero();
            // x-power i from (a x + c y)^p, r from (b x + d y)^q, with i + r = p_out.
            let i_lo = p_out.saturating_sub(q);
            let i_hi = p.min(p_out);
            for i in i_lo..=i_hi {
                let r = p_out - i;
                let term = a.powu(i as u32)
                    * c.powu((p - i) as u32)
                    * b.powu(r as u32)
                    * d.powu((q - r) as u32);
                acc += term * (binom(p, i) * binom(q, r));
            }
            let norm = ((fact[p_out] * fact[q_out]) / (fact[p] * fact[q])).sqrt();
            out[(row, col)] = acc * norm;
        }
    }
    out
}

/// Gate-fidelity distance `1 − |Tr(u⁻¹v)/2|²`.
///
/// For unit quaternions `Tr(u⁻¹v)/2` is their Euclidean inner product.
pub fn distance(u: &GroupElement, v: &GroupElement) -> f64 {
    let dot: f64 = u.q.iter().zip(v.q.iter()).map(|(a, b)| a * b).sum();
    (1.0 - dot * dot).clamp(0.0, 1.0)
}

/// Multiplicity of one irrep inside `(C²)^{⊗n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrrepMultiplicity {
    pub dim: usize,
    pub multiplicity: BigUint,
}

/// Irreducible decomposition of `(C²)^{⊗n}`; entries sorted by ascending dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicitySpectrum {
    pub n: usize,
    pub entries: Vec<IrrepMultiplicity>,
}

impl MultiplicitySpectrum {
    pub fn total_dimension(&self) -> BigUint {
        self.entries
            .iter()
            .map(|e| &e.multiplicity * BigUint::from(e.dim))
            .sum()
    }

    pub fn multiplicity_of(&self, dim: usize) -> Option<&BigUint> {
        self.entries
            .iter()
            .find(|e| e.dim == dim)
            .map(|e| &e.multiplicity)
    }
}

fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigUint::from(n - k) / BigUint::from(k + 1);
        row.push(c.clone());
    }
    row
}

/// Multiplicities of the irreps in `(C²)^{⊗n}`.
///
/// The `m`-dimensional irrep appears `C(n, t) − C(n, t − 1)` times with
/// `t = (n + 1 − m)/2`, for `m = n + 1, n − 1, …` down to 2 (odd `n`) or
/// 1 (even `n`). Arithmetic is exact.
pub fn multiplicity_spectrum(n: usize) -> Result<MultiplicitySpectrum> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let row = binomial_row(n);
    let mut entries = Vec::with_capacity(n / 2 + 1);
    for t in (0..=n / 2).rev() {
        let dim = n + 1 - 2 * t;
        let multiplicity = if t == 0 {
            row[0].clone()
        } else {
            &row[t] - &row[t - 1]
        };
        entries.push(IrrepMultiplicity { dim, multiplicity });
    }
    Ok(MultiplicitySpectrum { n, entries })
}

/// The torus element `diag(e^{iθ/2}, e^{−iθ/2})`.
pub fn torus_element(theta: f64) -> GroupElement {
    make_group_element(theta, 0.0, 0.0)
}

pub(crate) const TWO_PI: f64 = 2.0 * PI;
