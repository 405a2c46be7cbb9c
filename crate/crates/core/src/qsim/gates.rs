use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) const UNITARY_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Unitary check `U·U† = I` within `tol`, entrywise.
fn is_unitary<const D: usize>(m: &[[Complex64; D]; D], tol: f64) -> bool {
    (0..D).all(|r| {
        (0..D).all(|c| {
            let dot: Complex64 = (0..D).map(|k| m[r][k] * m[c][k].conj()).sum();
            let target = if r == c { ONE } else { ZERO };
            (dot - target).norm() <= tol
        })
    })
}

fn matmul<const D: usize>(a: &[[Complex64; D]; D], b: &[[Complex64; D]; D]) -> [[Complex64; D]; D] {
    let mut out = [[ZERO; D]; D];
    for r in 0..D {
        for c in 0..D {
            out[r][c] = (0..D).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    out
}

fn adjoint<const D: usize>(m: &[[Complex64; D]; D]) -> [[Complex64; D]; D] {
    let mut out = [[ZERO; D]; D];
    for r in 0..D {
        for c in 0..D {
            out[r][c] = m[c][r].conj();
        }
    }
    out
}

fn max_abs_diff<const D: usize>(a: &[[Complex64; D]; D], b: &[[Complex64; D]; D]) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..D {
        for c in 0..D {
            worst = worst.max((a[r][c] - b[r][c]).norm());
        }
    }
    worst
}

/// A 2×2 single-qubit unitary. Row/column 0 is `|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate1Q(pub(crate) [[Complex64; 2]; 2]);

impl Gate1Q {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        if !is_unitary(&m, UNITARY_TOL) {
            return Err(Error::invalid("1-qubit gate is not unitary"));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.0
    }

    pub fn identity() -> Self {
        Self([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn x() -> Self {
        Self([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn y() -> Self {
        Self([[ZERO, -I], [I, ZERO]])
    }

    pub fn z() -> Self {
        Self([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn h() -> Self {
        let s = real(std::f64::consts::FRAC_1_SQRT_2);
        Self([[s, s], [s, -s]])
    }

    /// `exp(-i·angle·Y/2)`.
    pub fn ry(angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        Self([[real(c), real(-s)], [real(s), real(c)]])
    }

    /// `exp(-i·angle·Z/2)`.
    pub fn rz(angle: f64) -> Self {
        let phase = Complex64::from_polar(1.0, angle / 2.0);
        Self([[phase.conj(), ZERO], [ZERO, phase]])
    }

    /// `exp(-i·angle·X/2)`.
    pub fn rx(angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        Self([[real(c), Complex64::new(0.0, -s)], [Complex64::new(0.0, -s), real(c)]])
    }

    /// `diag(d0, d1)`.
    pub fn diagonal(d0: Complex64, d1: Complex64) -> Result<Self> {
        Self::new([[d0, ZERO], [ZERO, d1]])
    }

    /// `self · other` (apply `other` first).
    pub fn then_after(&self, other: &Gate1Q) -> Gate1Q {
        Gate1Q(matmul(&self.0, &other.0))
    }

    pub fn adjoint(&self) -> Gate1Q {
        Gate1Q(adjoint(&self.0))
    }

    pub fn apply_to(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn distance(&self, other: &Gate1Q) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }

    /// Kronecker product `self ⊗ other`; `self` acts on the first qubit.
    pub fn kron(&self, other: &Gate1Q) -> Gate2Q {
        let mut m = [[ZERO; 4]; 4];
        for (a, row_a) in self.0.iter().enumerate() {
            for (b, &ab) in row_a.iter().enumerate() {
                for (c, row_c) in other.0.iter().enumerate() {
                    for (d, &cd) in row_c.iter().enumerate() {
                        m[2 * a + c][2 * b + d] = ab * cd;
                    }
                }
            }
        }
        Gate2Q(m)
    }
}

/// A 4×4 two-qubit unitary on an ordered pair `(first, second)`.
///
/// Row/column index is `2·b_first + b_second`, i.e. `|b_first b_second⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate2Q(pub(crate) [[Complex64; 4]; 4]);

impl Gate2Q {
    pub fn new(m: [[Complex64; 4]; 4]) -> Result<Self> {
        if !is_unitary(&m, UNITARY_TOL) {
            return Err(Error::invalid("2-qubit gate is not unitary"));
        }
        Ok(Self(m))
    }

    pub(crate) fn from_matrix_unchecked(m: [[Complex64; 4]; 4]) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &[[Complex64; 4]; 4] {
        &self.0
    }

    pub fn identity() -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = ONE;
        }
        Self(m)
    }

    /// `|0⟩⟨0| ⊗ on_zero + |1⟩⟨1| ⊗ on_one`: the first qubit selects the
    /// gate applied to the second.
    pub fn controlled_pair(on_zero: &Gate1Q, on_one: &Gate1Q) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] = on_zero.0[r][c];
                m[2 + r][2 + c] = on_one.0[r][c];
            }
        }
        Self(m)
    }

    /// `diag(d)` in the `|00⟩, |01⟩, |10⟩, |11⟩` basis.
    pub fn diagonal(d: [Complex64; 4]) -> Result<Self> {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = d[i];
        }
        Self::new(m)
    }

    /// `self · other` (apply `other` first).
    pub fn then_after(&self, other: &Gate2Q) -> Gate2Q {
        Gate2Q(matmul(&self.0, &other.0))
    }

    pub fn adjoint(&self) -> Gate2Q {
        Gate2Q(adjoint(&self.0))
    }

    /// Same operator with the qubit roles exchanged.
    pub fn swapped(&self) -> Gate2Q {
        let perm = [0, 2, 1, 3];
        let mut m = [[ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                m[perm[r]][perm[c]] = self.0[r][c];
            }
        }
        Gate2Q(m)
    }

    pub fn apply_to(&self, v: [Complex64; 4]) -> [Complex64; 4] {
        let m = &self.0;
        std::array::from_fn(|r| m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3])
    }

    pub fn distance(&self, other: &Gate2Q) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }

    /// Distance after aligning global phases on the largest entry of `other`.
    pub fn distance_up_to_phase(&self, other: &Gate2Q) -> f64 {
        let (mut r0, mut c0, mut biggest) = (0, 0, 0.0);
        for r in 0..4 {
            for c in 0..4 {
                if other.0[r][c].norm() > biggest {
                    biggest = other.0[r][c].norm();
                    (r0, c0) = (r, c);
                }
            }
        }
        let phase = self.0[r0][c0] / other.0[r0][c0];
        let phase = phase / phase.norm();
        let mut scaled = other.0;
        for row in &mut scaled {
            for v in row.iter_mut() {
                *v *= phase;
            }
        }
        max_abs_diff(&self.0, &scaled)
    }

    pub fn is_unitary(&self) -> bool {
        is_unitary(&self.0, UNITARY_TOL)
    }
}
