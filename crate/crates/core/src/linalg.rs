//! Small dense complex linear algebra: 3x3 solves and eigenvalues.
//!
//! The RWA dynamics closes on three complex modes, so everything here is
//! specialized to 3x3. Solves use partial-pivot elimination; eigenvalues come
//! from the characteristic cubic (Cardano) polished with Newton steps.

use crate::error::{Error, Result};
use crate::C64;

pub type Mat3 = [[C64; 3]; 3];
pub type Vec3 = [C64; 3];

/// Solve `m x = b` for several right-hand sides by Gaussian elimination with
/// partial pivoting. `rhs` is a set of columns.
pub fn solve3_multi<const N: usize>(m: &Mat3, rhs: &[[C64; 3]; N]) -> Result<[[C64; 3]; N]> {
    let mut a = *m;
    let mut b = *rhs;
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| {
                a[i][col]
                    .norm_sqr()
                    .partial_cmp(&a[j][col].norm_sqr())
                    .unwrap()
            })
            .unwrap();
        if a[piv][col].norm() == 0.0 {
            return Err(Error::Singular(format!("pivot {col} is zero")));
        }
        a.swap(col, piv);
        for r in b.iter_mut() {
            r.swap(col, piv);
        }
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                let sub = f * a[col][k];
                a[row][k] -= sub;
            }
            for r in b.iter_mut() {
                let sub = f * r[col];
                r[row] -= sub;
            }
        }
    }
    let mut x = b;
    for r in x.iter_mut() {
        for row in (0..3).rev() {
            let mut s = r[row];
            for k in row + 1..3 {
                s -= a[row][k] * r[k];
            }
            r[row] = s / a[row][row];
        }
    }
    Ok(x)
}

/// Eigenvalues of a complex 3x3 matrix via its characteristic cubic.
///
/// p(lambda) = lambda^3 - tr lambda^2 + m2 lambda - det, where m2 is the sum
/// of principal 2x2 minors. Roots are Cardano's, each polished with a few
/// Newton iterations to recover accuracy lost to cancellation.
pub fn eigenvalues3(m: &Mat3) -> [C64; 3] {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    // monic cubic x^3 + c2 x^2 + c1 x + c0
    let c2 = -tr;
    let c1 = m2;
    let c0 = -det;
    let mut roots = cubic_roots(c2, c1, c0);
    for r in roots.iter_mut() {
        *r = newton_polish(*r, c2, c1, c0);
    }
    roots
}

fn cubic_roots(c2: C64, c1: C64, c0: C64) -> [C64; 3] {
    // depressed cubic t^3 + p t + q via x = t - c2/3
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = c0 - c1 * c2 / 3.0 + 2.0 * c2 * c2 * c2 / 27.0;
    let half_q = q / 2.0;
    let disc = (half_q * half_q + p * p * p / 27.0).sqrt();
    // pick the branch with larger |u^3| to avoid cancellation
    let u3a = -half_q + disc;
    let u3b = -half_q - disc;
    let u3 = if u3a.norm() >= u3b.norm() { u3a } else { u3b };
    if u3.norm() == 0.0 {
        // triple root t = 0 (p = q = 0)
        return [-shift, -shift, -shift];
    }
    let u = u3.cbrt();
    let omega = C64::new(-0.5, 0.75f64.sqrt());
    let mut out = [C64::new(0.0, 0.0); 3];
    let mut uk = u;
    for slot in out.iter_mut() {
        *slot = uk - p / (3.0 * uk) - shift;
        uk *= omega;
    }
    out
}

fn newton_polish(mut x: C64, c2: C64, c1: C64, c0: C64) -> C64 {
    for _ in 0..4 {
        let f = ((x + c2) * x + c1) * x + c0;
        let df = (3.0 * x + 2.0 * c2) * x + c1;
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        x -= step;
        if step.norm() <= 1e-15 * x.norm().max(1.0) {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn solve3_recovers_known_solution() {
        let m: Mat3 = [
            [c(2.0, 1.0), c(0.0, -1.0), c(0.5, 0.0)],
            [c(0.0, 0.0), c(1.0, 3.0), c(-1.0, 0.2)],
            [c(1.0, -2.0), c(0.3, 0.0), c(4.0, 0.0)],
        ];
        let x_true: Vec3 = [c(1.0, -1.0), c(2.0, 0.5), c(-0.3, 2.0)];
        let mut b = [c(0.0, 0.0); 3];
        for i in 0..3 {
            for j in 0..3 {
                b[i] += m[i][j] * x_true[j];
            }
        }
        let x = solve3_multi(&m, &[b]).unwrap()[0];
        for i in 0..3 {
            assert_relative_eq!(x[i].re, x_true[i].re, max_relative = 1e-12);
            assert_relative_eq!(x[i].im, x_true[i].im, max_relative = 1e-12);
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let m: Mat3 = [
            [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
            [c(2.0, 0.0), c(4.0, 0.0), c(6.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ];
        assert!(solve3_multi(&m, &[[c(1.0, 0.0); 3]]).is_err());
    }

    #[test]
    fn eigenvalues_of_diagonal_matrix() {
        let m: Mat3 = [
            [c(-1.0, 2.0), c(0.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(0.5, -1.0)],
        ];
        let mut ev = eigenvalues3(&m).to_vec();
        ev.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert_relative_eq!(ev[0].re, -3.0, max_relative = 1e-12);
        assert_relative_eq!(ev[1].re, -1.0, max_relative = 1e-12);
        assert_relative_eq!(ev[2].re, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn eigenvalues_match_generic_solver_on_random_matrices() {
        use nalgebra::DMatrix;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let mut m: Mat3 = [[c(0.0, 0.0); 3]; 3];
            for row in m.iter_mut() {
                for v in row.iter_mut() {
                    *v = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                }
            }
            let ours = eigenvalues3(&m);
            // real 6x6 embedding [[X, -Y], [Y, X]] has eigenvalues eig ∪ conj(eig)
            let mut emb = DMatrix::<f64>::zeros(6, 6);
            for i in 0..3 {
                for j in 0..3 {
                    emb[(i, j)] = m[i][j].re;
                    emb[(i, j + 3)] = -m[i][j].im;
                    emb[(i + 3, j)] = m[i][j].im;
                    emb[(i + 3, j + 3)] = m[i][j].re;
                }
            }
            let reference = emb.complex_eigenvalues();
            let scale = m
                .iter()
                .flatten()
                .map(|v| v.norm())
                .fold(0.0f64, f64::max)
                .max(1.0);
            for lam in ours {
                let best = reference
                    .iter()
                    .map(|r| (C64::new(r.re, r.im) - lam).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(
                    best < 1e-8 * scale,
                    "eigenvalue {lam} not found by reference solver (dist {best:.2e})"
                );
            }
        }
    }
}
