//! Complex and quaternion scalar algebra.
//!
//! A complex number is `re + im*i` with `i^2 = -1`; a quaternion is
//! `a + b*i + c*j + d*k` with the basis relations
//!
//! ```text
//! i^2 = j^2 = k^2 = ijk = -1
//! ij = k,  ji = -k,  jk = i,  kj = -i,  ki = j,  ik = -j
//! ```
//!
//! which make the Hamilton product associative and distributive but not
//! commutative. All operations here are pure functions in double precision
//! and are safe to call from any number of threads.

use rand_core::Rng;
use thiserror::Error;

use crate::matrix::Matrix;
use crate::rng;

/// Numerically stable logistic sigmoid: never exponentiates a positive
/// argument, so saturated logits give 0/1 instead of NaN.
pub fn stable_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Complex scalar `re + im*i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0)
    }

    pub fn conj(self) -> Complex {
        Complex::new(self.re, -self.im)
    }

    /// Sigmoid applied independently to both components.
    pub fn split_sigmoid(self) -> Complex {
        Complex::new(stable_sigmoid(self.re), stable_sigmoid(self.im))
    }
}

impl std::ops::Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

/// Complex multiplication: `(ac - bd) + (bc + ad)i`. Commutative.
impl std::ops::Mul for Complex {
    type Output = Complex;
    fn mul(self, y: Complex) -> Complex {
        Complex {
            re: self.re * y.re - self.im * y.im,
            im: self.im * y.re + self.re * y.im,
        }
    }
}

/// Quaternion scalar `a + b*i + c*j + d*k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    pub const fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0)
    }

    /// Hamilton product, expanded over the basis relations. Not commutative.
    pub fn hamilton(self, q: Quaternion) -> Quaternion {
        Quaternion {
            a: self.a * q.a - self.b * q.b - self.c * q.c - self.d * q.d,
            b: self.a * q.b + self.b * q.a + self.c * q.d - self.d * q.c,
            c: self.a * q.c - self.b * q.d + self.c * q.a + self.d * q.b,
            d: self.a * q.d + self.b * q.c - self.c * q.b + self.d * q.a,
        }
    }

    pub fn conj(self) -> Quaternion {
        Quaternion::new(self.a, -self.b, -self.c, -self.d)
    }

    /// Euclidean norm `sqrt(a^2 + b^2 + c^2 + d^2)`.
    pub fn norm(self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    /// Sigmoid applied independently to each of the four components.
    pub fn split_sigmoid(self) -> Quaternion {
        Quaternion::new(
            stable_sigmoid(self.a),
            stable_sigmoid(self.b),
            stable_sigmoid(self.c),
            stable_sigmoid(self.d),
        )
    }

    pub fn scale(self, s: f64) -> Quaternion {
        Quaternion::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Componentwise product (used for split-activation derivatives).
    pub fn comp_mul(self, q: Quaternion) -> Quaternion {
        Quaternion::new(self.a * q.a, self.b * q.b, self.c * q.c, self.d * q.d)
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }
}

impl std::ops::Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c, self.d + rhs.d)
    }
}

impl std::ops::Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c, self.d - rhs.d)
    }
}

/// `quaternion_init` rejected a degenerate shape.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("quaternion init requires nonzero dimensions, got {rows}x{dim}")]
pub struct InitError {
    pub rows: usize,
    pub dim: usize,
}

/// Standard-normal draw via Box-Muller on the raw uniform stream.
fn gaussian(rng: &mut impl Rng) -> f64 {
    // 1 - u maps [0,1) onto (0,1], keeping the log finite.
    let u1 = 1.0 - rng::unit_f64(rng);
    let u2 = rng::unit_f64(rng);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Real-valued table initialization: i.i.d. `N(0, std^2)` entries. The
/// baseline init for real-space models.
pub fn normal_init(
    rows: usize,
    dim: usize,
    std: f64,
    rng: &mut impl Rng,
) -> Result<Matrix, InitError> {
    if rows == 0 || dim == 0 {
        return Err(InitError { rows, dim });
    }
    let mut m = Matrix::zeros(rows, dim);
    for r in 0..rows {
        for c in 0..dim {
            m.set(r, c, std * gaussian(rng));
        }
    }
    Ok(m)
}

/// Quaternion-aware random initialization of a `rows x dim` table.
///
/// Each entry is an independent quaternion `phi * (cos(theta) + u*sin(theta))`
/// where `u` is a uniformly random unit purely-imaginary quaternion, `theta ~
/// U(-pi, pi)` and `phi ~ U(0, sigma)` with `sigma = 1/sqrt(2*dim)`. The four
/// returned matrices hold, per entry, the a/b/c/d components. Deterministic
/// given the generator state; every entry has norm at most `sigma`.
pub fn quaternion_init(
    rows: usize,
    dim: usize,
    rng: &mut impl Rng,
) -> Result<[Matrix; 4], InitError> {
    if rows == 0 || dim == 0 {
        return Err(InitError { rows, dim });
    }
    let sigma = 1.0 / ((2 * dim) as f64).sqrt();
    let mut parts = [
        Matrix::zeros(rows, dim),
        Matrix::zeros(rows, dim),
        Matrix::zeros(rows, dim),
        Matrix::zeros(rows, dim),
    ];
    for r in 0..rows {
        for c in 0..dim {
            // Unit imaginary axis: z uniform on [-1, 1), azimuth uniform.
            let z = rng::uniform(rng, -1.0, 1.0);
            let azimuth = rng::uniform(rng, 0.0, 2.0 * std::f64::consts::PI);
            let theta = rng::uniform(rng, -std::f64::consts::PI, std::f64::consts::PI);
            let modulus = rng::uniform(rng, 0.0, sigma);
            let planar = (1.0 - z * z).max(0.0).sqrt();
            let (ux, uy, uz) = (planar * azimuth.cos(), planar * azimuth.sin(), z);
            let s = modulus * theta.sin();
            parts[0].set(r, c, modulus * theta.cos());
            parts[1].set(r, c, s * ux);
            parts[2].set(r, c, s * uy);
            parts[3].set(r, c, s * uz);
        }
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    fn random_quat(rng: &mut impl Rng) -> Quaternion {
        Quaternion::new(
            rng::uniform(rng, -2.0, 2.0),
            rng::uniform(rng, -2.0, 2.0),
            rng::uniform(rng, -2.0, 2.0),
            rng::uniform(rng, -2.0, 2.0),
        )
    }

    #[test]
    fn complex_identity() {
        let x = Complex::new(1.0, 0.0);
        let y = Complex::new(3.5, -2.25);
        assert_eq!(x * y, y);
    }

    #[test]
    fn complex_i_squared_is_minus_one() {
        let i = Complex::new(0.0, 1.0);
        assert_eq!(i * i, Complex::new(-1.0, 0.0));
    }

    #[test]
    fn complex_hand_expanded_product() {
        // (2+3i)(4-i) = 8 - 2i + 12i - 3i^2 = 11 + 10i, expanded by hand.
        let p = Complex::new(2.0, 3.0) * Complex::new(4.0, -1.0);
        assert_eq!(p, Complex::new(11.0, 10.0));
    }

    #[test]
    fn complex_mul_commutes_exactly() {
        let mut rng = stream(11, 1);
        for _ in 0..1_000 {
            let x = Complex::new(rng::uniform(&mut rng, -2.0, 2.0), rng::uniform(&mut rng, -2.0, 2.0));
            let y = Complex::new(rng::uniform(&mut rng, -2.0, 2.0), rng::uniform(&mut rng, -2.0, 2.0));
            assert_eq!(x * y, y * x);
        }
    }

    #[test]
    fn hamilton_identity() {
        let q = Quaternion::new(0.3, -1.4, 2.0, 7.5);
        assert_eq!(Quaternion::identity().hamilton(q), q);
        assert_eq!(q.hamilton(Quaternion::identity()), q);
    }

    #[test]
    fn hamilton_basis_relations() {
        assert_eq!(I.hamilton(I), Quaternion::new(-1.0, 0.0, 0.0, 0.0));
        assert_eq!(J.hamilton(J), Quaternion::new(-1.0, 0.0, 0.0, 0.0));
        assert_eq!(K.hamilton(K), Quaternion::new(-1.0, 0.0, 0.0, 0.0));
        // ij = k but ji = -k: the product does not commute.
        assert_eq!(I.hamilton(J), K);
        assert_eq!(J.hamilton(I), Quaternion::new(0.0, 0.0, 0.0, -1.0));
        // ijk = -1
        assert_eq!(I.hamilton(J).hamilton(K), Quaternion::new(-1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn hamilton_known_product() {
        // Verified against the distributive expansion over all 16 basis
        // products (see the expansion oracle in the integration tests).
        let p = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let q = Quaternion::new(5.0, 6.0, 7.0, 8.0);
        assert_eq!(p.hamilton(q), Quaternion::new(-60.0, 12.0, 30.0, 24.0));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(Quaternion::zero().norm(), 0.0);
        assert_eq!(Quaternion::identity().norm(), 1.0);
        assert_eq!(Quaternion::new(1.0, 2.0, 2.0, 4.0).norm(), 5.0);
    }

    #[test]
    fn norm_is_multiplicative() {
        let mut rng = stream(11, 2);
        for _ in 0..10_000 {
            let p = random_quat(&mut rng);
            let q = random_quat(&mut rng);
            let lhs = p.hamilton(q).norm();
            let rhs = p.norm() * q.norm();
            assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn hamilton_is_associative() {
        let mut rng = stream(11, 3);
        for _ in 0..10_000 {
            let p = random_quat(&mut rng);
            let q = random_quat(&mut rng);
            let r = random_quat(&mut rng);
            let lhs = p.hamilton(q).hamilton(r);
            let rhs = p.hamilton(q.hamilton(r));
            for (l, r) in [(lhs.a, rhs.a), (lhs.b, rhs.b), (lhs.c, rhs.c), (lhs.d, rhs.d)] {
                assert!((l - r).abs() <= 1e-9 * r.abs().max(1.0));
            }
        }
    }

    #[test]
    fn hamilton_distributes_over_addition() {
        let mut rng = stream(11, 4);
        for _ in 0..10_000 {
            let p = random_quat(&mut rng);
            let q = random_quat(&mut rng);
            let r = random_quat(&mut rng);
            let lhs = p.hamilton(q + r);
            let rhs = p.hamilton(q) + p.hamilton(r);
            for (l, r) in [(lhs.a, rhs.a), (lhs.b, rhs.b), (lhs.c, rhs.c), (lhs.d, rhs.d)] {
                assert!((l - r).abs() <= 1e-9 * r.abs().max(1.0));
            }
        }
    }

    #[test]
    fn complex_embeds_in_quaternions() {
        let mut rng = stream(11, 5);
        for _ in 0..1_000 {
            let x = Complex::new(rng::uniform(&mut rng, -2.0, 2.0), rng::uniform(&mut rng, -2.0, 2.0));
            let y = Complex::new(rng::uniform(&mut rng, -2.0, 2.0), rng::uniform(&mut rng, -2.0, 2.0));
            let p = Quaternion::new(x.re, x.im, 0.0, 0.0);
            let q = Quaternion::new(y.re, y.im, 0.0, 0.0);
            let h = p.hamilton(q);
            let z = x * y;
            assert_eq!((h.a, h.b, h.c, h.d), (z.re, z.im, 0.0, 0.0));
        }
    }

    #[test]
    fn split_sigmoid_center_and_saturation() {
        let q = Quaternion::zero().split_sigmoid();
        assert_eq!(q, Quaternion::new(0.5, 0.5, 0.5, 0.5));

        let s = Quaternion::new(1e4, -1e4, 0.0, 0.0).split_sigmoid();
        assert!(s.is_finite());
        assert!((s.a - 1.0).abs() < 1e-12);
        assert!(s.b.abs() < 1e-12);
        assert_eq!(s.c, 0.5);
        assert_eq!(s.d, 0.5);

        let t = Quaternion::new(3.0f64.ln(), 0.0, 0.0, 0.0).split_sigmoid();
        assert!((t.a - 0.75).abs() < 1e-15);
        assert_eq!((t.b, t.c, t.d), (0.5, 0.5, 0.5));
    }

    #[test]
    fn init_is_deterministic() {
        let a = quaternion_init(4, 3, &mut stream(9, 1)).unwrap();
        let b = quaternion_init(4, 3, &mut stream(9, 1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn init_rejects_zero_shapes() {
        assert!(quaternion_init(0, 3, &mut stream(9, 1)).is_err());
        assert!(quaternion_init(3, 0, &mut stream(9, 1)).is_err());
    }

    #[test]
    fn init_entries_bounded_by_sigma() {
        let dim = 6;
        let sigma = 1.0 / ((2 * dim) as f64).sqrt();
        let parts = quaternion_init(50, dim, &mut stream(9, 2)).unwrap();
        for r in 0..50 {
            for c in 0..dim {
                let q = Quaternion::new(
                    parts[0].at(r, c),
                    parts[1].at(r, c),
                    parts[2].at(r, c),
                    parts[3].at(r, c),
                );
                assert!(q.norm() <= sigma * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn init_component_means_vanish() {
        // Monte Carlo oracle: over 1e5 samples each component mean should be
        // within 3 standard errors of zero.
        let n = 100_000;
        let parts = quaternion_init(n, 1, &mut stream(9, 3)).unwrap();
        for part in &parts {
            let xs = part.data();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
            let se = (var / n as f64).sqrt();
            assert!(mean.abs() <= 3.0 * se, "mean {mean} exceeds 3 x {se}");
        }
    }
}
