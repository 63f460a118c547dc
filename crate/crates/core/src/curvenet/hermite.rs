use crate::{Error, Result, Vec3};

/// Cubic Hermite curve on `t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteSegment {
    pub p0: Vec3,
    pub p1: Vec3,
    pub m0: Vec3,
    pub m1: Vec3,
}

#[inline]
fn basis(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        2.0 * t3 - 3.0 * t2 + 1.0,
        t3 - 2.0 * t2 + t,
        -2.0 * t3 + 3.0 * t2,
        t3 - t2,
    ]
}

#[inline]
fn basis_derivative(t: f64) -> [f64; 4] {
    let t2 = t * t;
    [
        6.0 * t2 - 6.0 * t,
        3.0 * t2 - 4.0 * t + 1.0,
        -6.0 * t2 + 6.0 * t,
        3.0 * t2 - 2.0 * t,
    ]
}

impl HermiteSegment {
    pub fn new(p0: Vec3, p1: Vec3, m0: Vec3, m1: Vec3) -> Self {
        Self { p0, p1, m0, m1 }
    }

    /// Point at `t`. Panics if `t` is outside `[0, 1]`.
    #[inline]
    pub fn eval(&self, t: f64) -> Vec3 {
        assert!(
            (0.0..=1.0).contains(&t),
            "hermite parameter {t} outside [0, 1]"
        );
        let [h00, h10, h01, h11] = basis(t);
        self.p0 * h00 + self.m0 * h10 + self.p1 * h01 + self.m1 * h11
    }

    pub fn try_eval(&self, t: f64) -> Result<Vec3> {
        if (0.0..=1.0).contains(&t) {
            Ok(self.eval(t))
        } else {
            Err(Error::ParameterOutOfRange(t))
        }
    }

    pub fn derivative(&self, t: f64) -> Vec3 {
        let [h00, h10, h01, h11] = basis_derivative(t);
        self.p0 * h00 + self.m0 * h10 + self.p1 * h01 + self.m1 * h11
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        Self {
            p0: self.p1,
            p1: self.p0,
            m0: -self.m1,
            m1: -self.m0,
        }
    }

    pub fn chord(&self) -> Vec3 {
        self.p1 - self.p0
    }
}
