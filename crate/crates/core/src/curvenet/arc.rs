use crate::Vec3;

/// Circle through three consecutive isoline points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcFit {
    /// Unit tangent at the middle point, oriented from the first point
    /// toward the last.
    pub tangent: Vec3,
    /// Side lengths `|P1P2|`, `|P2P3|`, `|P1P3|`.
    pub sides: [f64; 3],
    pub semi_perimeter: f64,
    /// Triangle area by Heron's formula.
    pub area: f64,
    /// Circumradius, `None` when the points are collinear.
    pub radius: Option<f64>,
    /// Angle at the middle point between `P1 - P2` and `P3 - P2`, in `[0, π]`.
    pub theta: f64,
}

impl ArcFit {
    pub fn is_collinear(&self) -> bool {
        self.radius.is_none()
    }

    /// Tangent of the same circle at the first point, oriented like
    /// [`ArcFit::tangent`].
    pub fn tangent_at_first(&self, p1: &Vec3, p2: &Vec3) -> Vec3 {
        reflect_across_chord(&self.tangent, &(p2 - p1))
    }

    /// Tangent of the same circle at the last point.
    pub fn tangent_at_last(&self, p2: &Vec3, p3: &Vec3) -> Vec3 {
        reflect_across_chord(&self.tangent, &(p3 - p2))
    }
}

// Tangents at both ends of a circular chord make equal angles with it.
fn reflect_across_chord(tangent: &Vec3, chord: &Vec3) -> Vec3 {
    let n = chord.norm();
    if n == 0.0 {
        return *tangent;
    }
    let c = chord / n;
    (2.0 * tangent.dot(&c) * c - tangent).normalize()
}

pub fn fit_arc(p1: &Vec3, p2: &Vec3, p3: &Vec3) -> ArcFit {
    let va = p1 - p2;
    let vb = p3 - p2;
    let a = va.norm();
    let b = vb.norm();
    let c = (p3 - p1).norm();
    let s = 0.5 * (a + b + c);
    let area = (s * (s - a) * (s - b) * (s - c)).max(0.0).sqrt();
    let theta = if a > 0.0 && b > 0.0 {
        (va.dot(&vb) / (a * b)).clamp(-1.0, 1.0).acos()
    } else {
        std::f64::consts::PI
    };
    let chord = p3 - p1;
    let fallback = || {
        if c > 0.0 {
            chord / c
        } else if b > 0.0 {
            vb / b
        } else if a > 0.0 {
            -va / a
        } else {
            Vec3::zeros()
        }
    };

    if area < 1e-12 * c * c || area == 0.0 {
        return ArcFit {
            tangent: fallback(),
            sides: [a, b, c],
            semi_perimeter: s,
            area,
            radius: None,
            theta,
        };
    }

    let radius = a * b * c / (4.0 * area);
    // Perpendicular to the radius at P2: with the centre o relative to P2,
    // |a|² = 2 a·o and |b|² = 2 b·o, so (|a|² b - |b|² a)·o = 0.
    let mut tangent = (a * a * vb - b * b * va).normalize();
    if tangent.dot(&chord) < 0.0 {
        tangent = -tangent;
    }
    ArcFit {
        tangent,
        sides: [a, b, c],
        semi_perimeter: s,
        area,
        radius: Some(radius),
        theta,
    }
}

/// Unit tangent at `p2` of the circle through the three points.
pub fn fit_arc_tangent(p1: &Vec3, p2: &Vec3, p3: &Vec3) -> Vec3 {
    fit_arc(p1, p2, p3).tangent
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Vec3 {
        Vec3::new(x, y, 0.0)
    }

    #[test]
    fn unit_circle_top() {
        let t = fit_arc_tangent(&p(1.0, 0.0), &p(0.0, 1.0), &p(-1.0, 0.0));
        assert_abs_diff_eq!(t, p(-1.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn collinear_fallback() {
        let fit = fit_arc(&p(0.0, 0.0), &p(1.0, 0.0), &p(2.0, 0.0));
        assert!(fit.is_collinear());
        assert_eq!(fit.tangent, p(1.0, 0.0));
    }

    #[test]
    fn heron_on_three_four_five() {
        // a = |P1P2| = 3, b = |P2P3| = 4, c = |P1P3| = 5
        let fit = fit_arc(&p(0.0, 3.0), &p(0.0, 0.0), &p(4.0, 0.0));
        assert_eq!(fit.sides, [3.0, 4.0, 5.0]);
        assert_eq!(fit.semi_perimeter, 6.0);
        assert_eq!(fit.area, 6.0);
        assert_eq!(fit.radius, Some(2.5));
        assert_abs_diff_eq!(fit.theta, std::f64::consts::FRAC_PI_2, epsilon = 1e-15);
    }

    #[test]
    fn end_tangents_on_circle() {
        let (a, b, c) = (p(1.0, 0.0), p(0.0, 1.0), p(-1.0, 0.0));
        let fit = fit_arc(&a, &b, &c);
        assert_abs_diff_eq!(fit.tangent_at_first(&a, &b), p(0.0, 1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(fit.tangent_at_last(&b, &c), p(0.0, -1.0), epsilon = 1e-15);
    }

    #[test]
    fn tangent_stays_in_plane() {
        let z = 0.3;
        let t = fit_arc_tangent(
            &Vec3::new(0.2, 1.0, z),
            &Vec3::new(0.7, 1.4, z),
            &Vec3::new(1.5, 1.1, z),
        );
        assert_eq!(t.z, 0.0);
    }

    proptest! {
        #[test]
        fn tangent_is_perpendicular_to_radius(
            cx in -5.0f64..5.0, cy in -5.0f64..5.0, r in 0.1f64..10.0,
            a0 in 0.0f64..std::f64::consts::TAU, d1 in 0.2f64..2.0, d2 in 0.2f64..2.0,
        ) {
            let at = |ang: f64| p(cx + r * ang.cos(), cy + r * ang.sin());
            let (p1, p2, p3) = (at(a0), at(a0 + d1), at(a0 + d1 + d2));
            let t = fit_arc_tangent(&p1, &p2, &p3);
            let radial = (p2 - p(cx, cy)) / r;
            prop_assert!(t.dot(&radial).abs() < 1e-9);
            prop_assert!((t.norm() - 1.0).abs() < 1e-12);
            prop_assert!(t.dot(&(p3 - p1)) > 0.0);
        }
    }
}
