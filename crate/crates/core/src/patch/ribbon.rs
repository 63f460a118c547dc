use crate::cellloop::CellLoop;
use crate::curvenet::HermiteSegment;
use crate::{Error, Result, Vec3};

/// A boundary curve and its offset copy. The offset at each end follows the
/// adjoining curve of the loop, pointing into the patch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ribbon {
    pub base: HermiteSegment,
    pub loft: HermiteSegment,
    pub width: f64,
    /// Unit offset directions at the start and end of the base curve.
    pub offsets: [Vec3; 2],
}

impl Ribbon {
    pub fn new(base: HermiteSegment, a0: Vec3, a1: Vec3, width: f64) -> Self {
        let loft =
            HermiteSegment::new(base.p0 + a0 * width, base.p1 + a1 * width, base.m0, base.m1);
        Ribbon {
            base,
            loft,
            width,
            offsets: [a0, a1],
        }
    }

    /// Linear loft between the base (`s = 0`) and offset (`s = 1`) curves.
    pub fn eval(&self, s: f64, t: f64) -> Vec3 {
        self.base.eval(t) * (1.0 - s) + self.loft.eval(t) * s
    }

    /// Cross-boundary direction `g(t) - f(t)`.
    pub fn cross_direction(&self, t: f64) -> Vec3 {
        self.loft.eval(t) - self.base.eval(t)
    }
}

fn unit(v: Vec3, lp: &CellLoop, vertex: usize) -> Result<Vec3> {
    let n = v.norm();
    if n > 0.0 && n.is_finite() {
        Ok(v / n)
    } else {
        Err(Error::DegenerateTangent {
            cell: lp.cell,
            vertex,
        })
    }
}

/// One ribbon per loop curve.
pub fn build_ribbons(lp: &CellLoop, width: f64) -> Result<Vec<Ribbon>> {
    let k = lp.len();
    (0..k)
        .map(|i| {
            let next = (i + 1) % k;
            // back along the previous curve, forward along the next one
            let a0 = unit(-lp.corners[i].incoming, lp, i)?;
            let a1 = unit(lp.corners[next].outgoing, lp, next)?;
            Ok(Ribbon::new(lp.curves[i].curve, a0, a1, width))
        })
        .collect()
}
