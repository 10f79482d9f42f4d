//! Parametrisation of the unital qubit channels by their Bloch matrices
//! `T = R₁ diag(λ) R₂` with `λ` in the Pauli tetrahedron.

use crate::channels::{BlochAffine, KrausChannel};
use crate::error::Result;
use crate::numerics::{Mat3, Vec3};

/// Outward normals `n_k` of the tetrahedron `{λ : n_k·λ ≤ 1}`.
const FACES: [[f64; 3]; 4] = [
    [1.0, 1.0, -1.0],
    [1.0, -1.0, 1.0],
    [-1.0, 1.0, 1.0],
    [-1.0, -1.0, -1.0],
];

/// ZYZ Euler angles of two rotations around signed singular values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitalQubitParam {
    pub r1: [f64; 3],
    pub lambdas: Vec3,
    pub r2: [f64; 3],
}

pub fn rotation_zyz(angles: &[f64; 3]) -> Mat3 {
    let rz = |t: f64| {
        let (s, c) = t.sin_cos();
        Mat3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
    };
    let (s, c) = angles[1].sin_cos();
    let ry = Mat3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c);
    rz(angles[0]) * ry * rz(angles[2])
}

/// Angles `(α, β, γ)` with `R = R_z(α) R_y(β) R_z(γ)` for a proper rotation.
pub fn zyz_angles(r: &Mat3) -> [f64; 3] {
    let beta = r[(2, 2)].clamp(-1.0, 1.0).acos();
    if beta.sin().abs() > 1e-9 {
        [
            r[(1, 2)].atan2(r[(0, 2)]),
            beta,
            r[(2, 1)].atan2(-r[(2, 0)]),
        ]
    } else if r[(2, 2)] > 0.0 {
        [r[(1, 0)].atan2(r[(0, 0)]), 0.0, 0.0]
    } else {
        [(-r[(1, 0)]).atan2(-r[(0, 0)]), std::f64::consts::PI, 0.0]
    }
}

pub fn in_tetrahedron(l: &Vec3, tol: f64) -> bool {
    FACES
        .iter()
        .all(|n| n[0] * l[0] + n[1] * l[1] + n[2] * l[2] <= 1.0 + tol)
}

/// Euclidean projection onto the tetrahedron: the nearest feasible point
/// among the projections onto the affine hulls of all faces, edges and vertices.
pub fn project_tetrahedron(l: &Vec3) -> Vec3 {
    if in_tetrahedron(l, 0.0) {
        return *l;
    }
    let mut best = Vec3::zeros();
    let mut best_d = f64::INFINITY;
    for mask in 1u8..16 {
        let active: Vec<Vec3> = (0..4)
            .filter(|k| mask & (1 << k) != 0)
            .map(|k| Vec3::from(FACES[k]))
            .collect();
        if active.len() > 3 {
            continue;
        }
        let m = active.len();
        let gram = nalgebra::DMatrix::from_fn(m, m, |i, j| active[i].dot(&active[j]));
        let resid = nalgebra::DVector::from_fn(m, |i, _| active[i].dot(l) - 1.0);
        let Some(mu) = gram.lu().solve(&resid) else {
            continue;
        };
        let mut p = *l;
        for (i, n) in active.iter().enumerate() {
            p -= n * mu[i];
        }
        let d = (p - l).norm();
        if in_tetrahedron(&p, 1e-12) && d < best_d {
            best_d = d;
            best = p;
        }
    }
    best
}

impl UnitalQubitParam {
    pub fn identity() -> Self {
        Self {
            r1: [0.0; 3],
            lambdas: Vec3::new(1.0, 1.0, 1.0),
            r2: [0.0; 3],
        }
    }

    pub fn to_vec(&self) -> [f64; 9] {
        [
            self.r1[0],
            self.r1[1],
            self.r1[2],
            self.lambdas[0],
            self.lambdas[1],
            self.lambdas[2],
            self.r2[0],
            self.r2[1],
            self.r2[2],
        ]
    }

    /// Reads nine numbers; `λ` is projected onto the tetrahedron.
    pub fn from_slice(x: &[f64]) -> Self {
        Self {
            r1: [x[0], x[1], x[2]],
            lambdas: project_tetrahedron(&Vec3::new(x[3], x[4], x[5])),
            r2: [x[6], x[7], x[8]],
        }
    }

    pub fn matrix(&self) -> Mat3 {
        rotation_zyz(&self.r1) * Mat3::from_diagonal(&self.lambdas) * rotation_zyz(&self.r2)
    }

    /// Parameters of the nearest point (in `λ`) to a given Bloch matrix.
    pub fn from_matrix(t: &Mat3) -> Self {
        let svd = t.svd(true, true);
        let mut u = svd.u.expect("requested");
        let mut vt = svd.v_t.expect("requested");
        let mut l = svd.singular_values;
        if u.determinant() < 0.0 {
            u.column_mut(2).neg_mut();
            l[2] = -l[2];
        }
        if vt.determinant() < 0.0 {
            vt.row_mut(2).neg_mut();
            l[2] = -l[2];
        }
        Self {
            r1: zyz_angles(&u),
            lambdas: project_tetrahedron(&l),
            r2: zyz_angles(&vt),
        }
    }

    pub fn bloch(&self) -> BlochAffine {
        BlochAffine {
            a: Vec3::zeros(),
            m: self.matrix(),
        }
    }

    pub fn channel(&self) -> Result<KrausChannel> {
        self.bloch().to_channel()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::random;

    #[test]
    fn zyz_round_trip() {
        for angles in [[0.3, 1.1, -2.0], [0.0, 0.0, 0.7], [1.0, std::f64::consts::PI, 0.0]] {
            let r = rotation_zyz(&angles);
            let back = rotation_zyz(&zyz_angles(&r));
            assert!((r - back).norm() < 1e-12);
        }
    }

    #[test]
    fn projection_is_feasible_and_idempotent() {
        let l = Vec3::new(1.0, 1.0, -1.0);
        let p = project_tetrahedron(&l);
        assert!(in_tetrahedron(&p, 1e-12));
        assert!((project_tetrahedron(&p) - p).norm() < 1e-12);
        assert_eq!(project_tetrahedron(&Vec3::new(0.2, 0.1, 0.0)), Vec3::new(0.2, 0.1, 0.0));
        // vertex region
        let v = project_tetrahedron(&Vec3::new(3.0, 3.0, 3.0));
        assert!((v - Vec3::new(1.0, 1.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn random_mixed_unitaries_round_trip() {
        for seed in 0..20 {
            let ch = random::random_mixed_unitary(2, 3, seed);
            let t = ch.bloch_affine().unwrap().m;
            let p = UnitalQubitParam::from_matrix(&t);
            assert!((p.matrix() - t).norm() < 1e-9, "seed {seed}");
            assert!(p.channel().unwrap().same_map(&ch));
        }
    }
}
