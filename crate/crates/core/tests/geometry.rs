use hbie::geometry::*;
use std::f64::consts::{PI, TAU};

fn derivative_by_differences(c: &Curve, t: f64, order: usize) -> Point {
    let h = 1e-4;
    let f = |s: f64| if order == 1 { c.eval(s) } else { c.deriv1(s) };
    (1.0 / (12.0 * h)) * (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h))
}

#[test]
fn derivatives_match_finite_differences() {
    let curves = [make_circle(1.3).unwrap(), make_star(), make_cavity(), make_rounded_diamond(0.1).unwrap()];
    for c in &curves {
        for t in [0.3, 1.9, 4.4] {
            let d1 = derivative_by_differences(c, t, 1);
            let d2 = derivative_by_differences(c, t, 2);
            let scale = 1.0 + c.deriv2(t).norm();
            assert!((d1 - c.deriv1(t)).norm() < 1e-7 * scale, "{} d1 at {t}", c.name());
            assert!((d2 - c.deriv2(t)).norm() < 1e-5 * scale * scale, "{} d2 at {t}", c.name());
        }
    }
}

#[test]
fn areas_and_lengths_of_closed_forms() {
    let circle = make_circle(1.5).unwrap();
    assert!((circle.arclength() - TAU * 1.5).abs() < 1e-12);
    assert!((circle.signed_area() - PI * 2.25).abs() < 1e-12);
    // polar area (1/2) int r^2 with r = 1 + 0.3 cos t
    let star = make_star();
    assert!((star.signed_area() - PI * 1.045).abs() < 1e-12);
    // (1/3A) int r^3 cos t
    assert!((star.centroid().x - (0.9 + 0.75 * 0.027) / (3.0 * 1.045)).abs() < 1e-12);
}

#[test]
fn frames_are_orthonormal_and_outward() {
    for c in [make_star(), make_cavity()] {
        for i in 0..64 {
            let f = c.frame(TAU * i as f64 / 64.0);
            assert!((f.tangent.norm() - 1.0).abs() < 1e-14);
            assert!(f.tangent.dot(f.normal).abs() < 1e-14);
            assert!(!c.contains(f.pos + 1e-3 * f.normal), "{} at {}", c.name(), f.t);
            assert!(c.contains(f.pos - 1e-3 * f.normal), "{} at {}", c.name(), f.t);
        }
    }
    let f = make_circle(2.0).unwrap().frame(0.7);
    assert!((f.curvature - 0.5).abs() < 1e-14);
}

#[test]
fn clockwise_samples_are_reoriented() {
    let n = 64;
    let pts: Vec<Point> = (0..n)
        .map(|j| {
            let t = -TAU * j as f64 / n as f64;
            Point::new(2.0 * t.cos(), t.sin())
        })
        .collect();
    let fc = FourierCurve::from_samples(&pts).unwrap();
    let c = Curve::new(std::sync::Arc::new(fc), "ellipse");
    assert!(c.signed_area() > 0.0);
    assert!((c.signed_area() - 2.0 * PI).abs() < 1e-10);
}

#[test]
fn four_diamonds_layout() {
    let multi = make_four_diamonds(0.1).unwrap();
    assert_eq!(multi.len(), 4);
    let d = DIAMOND_OFFSET;
    for (i, c) in multi.components.iter().enumerate() {
        let centre = c.centroid();
        let want = [Point::new(d, d), Point::new(-d, d), Point::new(-d, -d), Point::new(d, -d)][i];
        assert!((centre - want).norm() < 1e-10, "component {i}");
        // rounding shaves a little off the square of half-diagonal R
        let square = 2.0 * DIAMOND_HALF_DIAGONAL * DIAMOND_HALF_DIAGONAL;
        let area = c.signed_area();
        assert!(area < square && area > 0.95 * square, "{area} vs {square}");
    }
    assert!(multi.contains(Point::new(d, -d)));
    assert!(!multi.contains(Point::new(0.0, 0.0)));
    assert!(multi.min_separation() > 0.0);
    let rotated = multi.rotated(0.4);
    assert!((rotated.arclength() - multi.arclength()).abs() < 1e-9 * multi.arclength());
}

#[test]
fn distance_to_circle() {
    let c = make_circle(1.0).unwrap();
    for p in [Point::new(3.0, 0.0), Point::new(0.2, -0.1), Point::new(-0.5, 1.5)] {
        let want = (p.norm() - 1.0).abs();
        assert!((c.distance_to(p) - want).abs() < 1e-12, "{p:?}");
    }
}

#[test]
fn geometry_from_sample_file() {
    let path = std::env::temp_dir().join(format!("hbie-geometry-{}.txt", std::process::id()));
    let mut text = String::from("# ellipse\n");
    for j in 0..48 {
        let t = TAU * j as f64 / 48.0;
        text.push_str(&format!("{},{}\n", 1.5 * t.cos(), 0.5 * t.sin()));
    }
    std::fs::write(&path, text).unwrap();
    let multi = parse_geometry(&format!("fourier:{}", path.display())).unwrap();
    assert!((multi.components[0].signed_area() - 0.75 * PI).abs() < 1e-10);
    std::fs::write(&path, "1,2\nnot a point\n").unwrap();
    let err = parse_geometry(&format!("fourier:{}", path.display())).unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
    std::fs::remove_file(&path).unwrap();
    assert!(parse_geometry("circle:r=-1").is_err());
    assert!(parse_geometry("torus").is_err());
}
