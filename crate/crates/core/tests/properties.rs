//! Property tests across modules.

use proptest::prelude::*;

use circle_envelopes::assoc::{contrapedal, evolute, evolutoid, midpoint_family, pedal, pedaloid, Angle, BasePoint};
use circle_envelopes::expr::{Exponent, Expr};
use circle_envelopes::geom::derivative;
use circle_envelopes::mohr::{fit_failure_line, MohrCircle};
use circle_envelopes::parser::parse_expr;
use circle_envelopes::render::{render_svg, Scene, Style};
use circle_envelopes::verify::random::{random_fixture, Profile};
use circle_envelopes::verify::{verify_2ii, verify_envelope_def};
use circle_envelopes::{build_frontal, parse_family, CircleFamily, Tolerances, Vec2};

/// Polynomial/trig expressions that stay finite and moderate on `[-1, 1]`.
fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::T),
        Just(Expr::Pi),
        (-20i32..=20).prop_map(|k| Expr::constant(k as f64 / 8.0)),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            inner.clone().prop_map(Expr::neg),
            inner.clone().prop_map(Expr::sin),
            inner.clone().prop_map(Expr::cos),
            (inner.clone(), 2i64..=3).prop_map(|(a, k)| Expr::pow(a, Exponent::integer(k))),
            // denominators and radicands bounded away from zero
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::div(a, Expr::add(Expr::constant(2.0), Expr::sin(b)))),
            inner.prop_map(|a| Expr::sqrt(Expr::add(Expr::constant(1.0), Expr::pow(a, Exponent::integer(2))))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn derivative_matches_central_difference(e in expr(), t in -1.0f64..1.0) {
        let h = 1e-6;
        let exact = e.differentiate().eval(t).unwrap();
        let fd = (e.eval(t + h).unwrap() - e.eval(t - h).unwrap()) / (2.0 * h);
        prop_assert!((exact - fd).abs() < 1e-5 * (1.0 + exact.abs()), "{}: {} vs {}", e, exact, fd);
    }
}

proptest! {
    #[test]
    fn print_then_parse_is_idempotent(e in expr()) {
        let once = parse_expr(&e.to_string()).unwrap();
        let twice = parse_expr(&once.to_string()).unwrap();
        prop_assert_eq!(&once, &twice);
        // and printing preserves the value
        for t in [-0.7, 0.0, 0.4] {
            let (a, b) = (e.eval(t).unwrap(), once.eval(t).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }
}

#[test]
fn derivatives_of_leaves() {
    assert_eq!(Expr::constant(4.2).differentiate().eval(0.3).unwrap(), 0.0);
    assert_eq!(Expr::T.differentiate().eval(0.3).unwrap(), 1.0);
}

fn fixture(seed: u64) -> CircleFamily {
    random_fixture(seed, Profile::Unit).family
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn frame_identities_hold(seed in 0u64..10_000) {
        let fd = fixture(seed).frontal;
        for i in 0..fd.len() {
            let speed = 1.0 + fd.gamma_dot[i].norm();
            prop_assert!((fd.nu[i].norm() - 1.0).abs() < 1e-9);
            prop_assert!(fd.gamma_dot[i].dot(fd.nu[i]).abs() < 1e-9 * speed);
            prop_assert!((fd.gamma_dot[i] - fd.beta[i] * fd.mu[i]).norm() < 1e-9 * speed);
            prop_assert_eq!(fd.mu[i], fd.nu[i].rotate90());
        }
    }

    #[test]
    fn mixed_envelopes_are_tangent(seed in 0u64..10_000) {
        let fam = random_fixture(seed, Profile::Mixed).family;
        let (plus, minus) = fam.envelopes().unwrap();
        for b in [&plus, &minus] {
            let r = verify_envelope_def(&fam, &b.f, 1e-5).unwrap();
            prop_assert!(r.pass, "seed {}: {:?}", seed, r);
            for i in 0..fam.len() {
                let lam = fam.lambda[i];
                let d = (b.f[i] - fam.frontal.gamma[i]).norm_sq();
                prop_assert!((d - lam * lam).abs() < 1e-9 * (1.0 + lam * lam));
            }
        }
    }

    #[test]
    fn unit_profile_branches_coincide(seed in 0u64..10_000) {
        let fam = fixture(seed);
        let (plus, minus) = fam.envelopes().unwrap();
        for i in 0..fam.len() {
            prop_assert!(plus.f[i].distance(minus.f[i]) < 1e-12);
        }
    }

    #[test]
    fn classification_ignores_reversal(seed in 0u64..10_000, mixed in any::<bool>()) {
        let profile = if mixed { Profile::Mixed } else { Profile::Unit };
        let fam = random_fixture(seed, profile).family;
        let back = fam.reparametrized_backwards().unwrap();
        prop_assert_eq!(fam.classify().variant, back.classify().variant);
    }

    #[test]
    fn pedaloid_special_angles(seed in 0u64..10_000, px in -3.0f64..3.0, py in -3.0f64..3.0) {
        let fd = fixture(seed).frontal;
        let p = BasePoint(Vec2::new(px, py));
        let half_pi = pedaloid(&fd, p, Angle(std::f64::consts::FRAC_PI_2));
        let zero = pedaloid(&fd, p, Angle(0.0));
        let (pe, cp) = (pedal(&fd, p), contrapedal(&fd, p));
        prop_assert!(half_pi.max_distance(&pe.points) < 1e-12);
        prop_assert!(zero.max_distance(&cp.points) < 1e-12);
        let scale = 1.0 + fd.gamma.iter().map(|g| g.distance(p.0)).fold(0.0, f64::max).powi(2);
        for i in 0..fd.len() {
            let ip = (pe.points[i] - fd.gamma[i]).dot(cp.points[i] - fd.gamma[i]);
            prop_assert!(ip.abs() < 1e-9 * scale);
        }
    }

    #[test]
    fn evolutoid_special_angles(seed in 0u64..10_000) {
        let mut fd = fixture(seed).frontal;
        let zero = evolutoid(&fd, Angle(0.0)).unwrap();
        prop_assert!(zero.max_distance(&fd.gamma) < 1e-12);
        // random centers may inflect; a declared α keeps the evolute defined
        let alpha: Vec<f64> = (0..fd.len()).map(|i| if fd.l[i].abs() > 1e-10 { fd.beta[i] / fd.l[i] } else { 0.0 }).collect();
        if fd.l.iter().all(|l| l.abs() > 1e-6) {
            fd.set_alpha(alpha).unwrap();
            let right = evolutoid(&fd, Angle(std::f64::consts::FRAC_PI_2)).unwrap();
            prop_assert!(right.max_distance(&evolute(&fd).unwrap().points) < 1e-12);
        }
    }

    #[test]
    fn midpoint_family_passes_through_base_point(seed in 0u64..10_000, px in -3.0f64..3.0, py in -3.0f64..3.0) {
        let fam = fixture(seed);
        let p = Vec2::new(px, py);
        if let Ok(aux) = midpoint_family(&fam, BasePoint(p)) {
            for i in 0..aux.len() {
                let d = aux.frontal.gamma[i].distance(p);
                prop_assert!((d - aux.lambda[i]).abs() <= 1e-12 * (1.0 + aux.lambda[i]));
            }
        }
    }

    #[test]
    fn verdicts_are_monotone_in_tolerance(seed in 0u64..10_000, phi in -1.2f64..1.2, exp in -16i32..-4) {
        let fam = fixture(seed);
        let tol = 10f64.powi(exp);
        let tight = verify_2ii(&fam, Angle(phi), tol).unwrap();
        let loose = verify_2ii(&fam, Angle(phi), 10.0 * tol).unwrap();
        prop_assert_eq!(tight.max_residual, loose.max_residual);
        prop_assert!(!tight.pass || loose.pass);
    }
}

proptest! {
    #[test]
    fn failure_line_is_scale_equivariant(
        data in prop::collection::vec((1.0f64..1000.0, 0.05f64..0.6), 3..12),
        k in 1e-3f64..1e4,
    ) {
        let circles: Vec<MohrCircle> = data.iter().map(|&(s, f)| MohrCircle::new(s, f * s + 5.0)).collect();
        prop_assume!(fit_failure_line(&circles).is_ok());
        let a = fit_failure_line(&circles).unwrap();
        let scaled: Vec<MohrCircle> = circles.iter().map(|c| MohrCircle::new(k * c.center_s, k * c.radius_r)).collect();
        let b = fit_failure_line(&scaled).unwrap();
        prop_assert!((a.phi().sin() - b.phi().sin()).abs() < 1e-12);
        prop_assert!((k * a.c_kpa - b.c_kpa).abs() <= 1e-9 * (1.0 + b.c_kpa.abs()));
    }

    #[test]
    fn tangent_data_is_fitted_exactly(
        centers in prop::collection::btree_set(1u32..5000, 2..10),
        phi_deg in 5.0f64..45.0,
        c in 0.0f64..50.0,
    ) {
        let (s, co) = phi_deg.to_radians().sin_cos();
        let circles: Vec<MohrCircle> =
            centers.iter().map(|&x| MohrCircle::new(x as f64, x as f64 * s + c * co)).collect();
        let line = fit_failure_line(&circles).unwrap();
        let max_r = circles.iter().map(|c| c.radius_r).fold(0.0, f64::max);
        for circle in &circles {
            prop_assert!(line.residual(circle).abs() < 1e-9 * max_r);
        }
    }

    #[test]
    fn svg_element_counts_match_scene(
        circles in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0, 0.01f64..5.0), 0..30),
        lines in prop::collection::vec(prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..20), 0..4),
        markers in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 0..4),
    ) {
        prop_assume!(circles.len() + lines.len() + markers.len() > 0);
        let mut scene = Scene::new("random");
        for &(x, y, r) in &circles {
            scene = scene.circle(Vec2::new(x, y), r, Style::Thin);
        }
        for pts in &lines {
            scene = scene.polyline(pts.iter().map(|&(x, y)| Vec2::new(x, y)).collect(), Style::Dashed);
        }
        for &(x, y) in &markers {
            scene = scene.marker(Vec2::new(x, y));
        }
        let svg = render_svg(&scene).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let count = |tag: &str| doc.descendants().filter(|n| n.has_tag_name(tag)).count();
        prop_assert_eq!(count("circle"), circles.len());
        prop_assert_eq!(count("polyline"), lines.len());
        prop_assert_eq!(count("path"), markers.len());
        prop_assert_eq!(svg, render_svg(&scene).unwrap());
    }
}

/// Frenet row `ν̇ = l μ` by finite differences on unit-scale examples.
#[test]
fn gauss_map_derivative_matches_l() {
    for src in [
        include_str!("../fixtures/parabola.fam"),
        include_str!("../fixtures/unit_circle.fam"),
        include_str!("../fixtures/cusp.fam"),
        include_str!("../fixtures/pedal.fam"),
        include_str!("../fixtures/cubic.fam"),
    ] {
        let fd = build_frontal(&parse_family(src).unwrap(), &Tolerances::default()).unwrap();
        let dnu = derivative(&fd.nu, fd.grid.step());
        for i in 1..fd.len() - 1 {
            assert!((dnu[i] - fd.l[i] * fd.mu[i]).norm() < 1e-4 * (1.0 + fd.l[i].abs()), "{}", src);
        }
    }
}

#[test]
fn reversing_the_normal_keeps_the_envelope_set() {
    let src = "curve x=-4*t^3; y=3*t^2+1/2\nnu x=1/sqrt(1+4*t^2); y=2*t/sqrt(1+4*t^2)\n\
               radius (1+4*t^2)^(3/2)/2\ndomain (-1, 1)";
    let fam = CircleFamily::from_spec(&parse_family(src).unwrap(), &Tolerances::default()).unwrap();
    let rev = fam.with_reversed_normal();
    for i in 0..fam.len() {
        assert_eq!(rev.frontal.l[i], fam.frontal.l[i]);
        assert_eq!(rev.frontal.beta[i], -fam.frontal.beta[i]);
    }
    let (a, _) = fam.envelopes().unwrap();
    let (b, c) = rev.envelopes().unwrap();
    for i in 0..fam.len() {
        assert!(a.f[i].distance(b.f[i]).min(a.f[i].distance(c.f[i])) < 1e-12);
    }
}
