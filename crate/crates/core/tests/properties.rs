//! Randomized invariants of prismatoids, unfoldings, regions and I/O.

mod common;

use std::collections::BTreeSet;
use std::f64::consts::PI;

use proptest::prelude::*;

use patchfold::geom::{orient2d, Orientation, Point2};
use patchfold::io::{format_f64, layout_json, parse_layout, prismatoid_json, PrismatoidJson};
use patchfold::overlap::layout_overlaps;
use patchfold::polyhedron::edge_key;
use patchfold::prismatoid::Prismatoid;
use patchfold::regions::{altitude_partition, base_unfolding, diamond, region_within, v_wedge};
use patchfold::search::{random_nonobtuse_prismatoid, random_prismatoid, GeneratorConfig, ShapeBias};
use patchfold::svg::{render_svg, RenderStyle};
use patchfold::unfold::{
    band_unfolding, enumerate_petal_unfoldings, lateral_edge_count, petal_unfold_topless, PetalStructure,
};

fn arb_prismatoid() -> impl Strategy<Value = Prismatoid> {
    (any::<u64>(), 0usize..4, 0u64..1_000_000, -3.0f64..1.0).prop_map(|(seed, b, index, lz)| {
        let cfg = GeneratorConfig { seed, bias: ShapeBias::ALL[b], ..Default::default() };
        let p = random_prismatoid(&cfg, index).unwrap();
        let z = 10f64.powf(lz) * p.diameter();
        p.at_height(z).unwrap()
    })
}

/// Small prismatoids, so that exhaustive petal enumeration stays cheap.
fn arb_small_prismatoid() -> impl Strategy<Value = Prismatoid> {
    (any::<u64>(), 0u64..1_000_000).prop_map(|(seed, index)| {
        let cfg = GeneratorConfig { seed, n_top: (3, 4), n_base: (3, 4), ..Default::default() };
        random_prismatoid(&cfg, index).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn topless_unfolding_is_an_isometric_clear_forest(p in arb_prismatoid()) {
        let u = petal_unfold_topless(&p).unwrap();
        let l = &u.layout;
        l.check_structure().unwrap();
        prop_assert!(l.isometry_residual(&p.to_polyhedron()) < p.tol.eps_len * 10.0);
        let d = common::layout_diameter(l);
        prop_assert!(common::overlapping_pairs(l, 1e-9 * d * d).is_empty());
        // The base is never cut.
        let n = p.n_base();
        for k in 0..n {
            prop_assert!(!l.cuts.contains(&edge_key(k, (k + 1) % n)));
        }
        prop_assert!(l.face(Prismatoid::TOP_FACE).is_none());
        prop_assert_eq!(l.faces.len(), p.hull.faces.len() + 1);
    }

    #[test]
    fn band_is_one_isometric_tree(p in arb_prismatoid(), c in 0usize..64) {
        let c = c % lateral_edge_count(&p);
        let l = band_unfolding(&p, c).unwrap();
        l.check_structure().unwrap();
        prop_assert_eq!(l.faces.iter().filter(|f| f.parent.is_none()).count(), 1);
        prop_assert_eq!(l.faces.len(), p.hull.faces.len() + 2);
        prop_assert!(l.isometry_residual(&p.to_polyhedron()) < p.tol.eps_len * 10.0);
    }

    #[test]
    fn enumeration_covers_every_split(p in arb_small_prismatoid()) {
        let s = PetalStructure::topless(&p).unwrap();
        let expected: u128 = s.fans.iter().map(|f| f.faces.len() as u128 + 1).product();
        prop_assert_eq!(s.choice_count(false), expected);
        let mut seen = BTreeSet::new();
        for (c, l) in enumerate_petal_unfoldings(&s, false, 10_000).unwrap() {
            let l = l.unwrap();
            l.check_structure().unwrap();
            prop_assert!(l.isometry_residual(&p.to_polyhedron()) < p.tol.eps_len * 10.0);
            prop_assert!(seen.insert(c));
        }
        prop_assert_eq!(seen.len() as u128, expected);
    }

    #[test]
    fn regions_contain_their_hinge_edges(p in arb_prismatoid(), t in 0.0f64..=1.0) {
        let part = altitude_partition(&p).unwrap();
        let bu = base_unfolding(&p);
        let n = p.n_base();
        for i in 0..n {
            let b = p.base[i];
            let prev = bu.apex((i + n - 1) % n);
            let next = bu.apex(i);
            prop_assert!(part.regions[i].contains_point(b.lerp(prev, t), &p.tol));
            prop_assert!(part.regions[i].contains_point(b.lerp(next, t), &p.tol));
        }
    }

    #[test]
    fn prismatoid_json_round_trips(p in arb_prismatoid()) {
        let s = prismatoid_json(&p).unwrap();
        let back: PrismatoidJson = serde_json::from_str(&s).unwrap();
        let q = back.build().unwrap();
        prop_assert_eq!(&q.top, &p.top);
        prop_assert_eq!(&q.base, &p.base);
        prop_assert_eq!(q.z.to_bits(), p.z.to_bits());
        prop_assert_eq!(prismatoid_json(&q).unwrap(), s);
    }

    #[test]
    fn layout_json_and_svg_are_stable(p in arb_prismatoid()) {
        let u = petal_unfold_topless(&p).unwrap();
        let s = layout_json(&u.layout).unwrap();
        let back = parse_layout(&s).unwrap();
        prop_assert_eq!(&back, &u.layout);
        prop_assert_eq!(layout_json(&back).unwrap(), s);
        let style = RenderStyle::default();
        let w = layout_overlaps(&u.layout, &p.tol).witnesses;
        let a = render_svg(&u.layout, Some(&u.partition), &w, &style);
        prop_assert_eq!(a, render_svg(&back, Some(&u.partition), &w, &style));
    }

    #[test]
    fn float_text_round_trips(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        let y: f64 = format_f64(x).parse().unwrap();
        prop_assert_eq!(x.to_bits(), y.to_bits());
    }

    #[test]
    fn orientation_flips_with_swaps(
        ax in -10.0f64..10.0, ay in -10.0f64..10.0,
        bx in -10.0f64..10.0, by in -10.0f64..10.0,
        cx in -10.0f64..10.0, cy in -10.0f64..10.0,
    ) {
        let tol = patchfold::Tolerance::for_diameter(20.0);
        let (a, b, c) = (Point2::new(ax, ay), Point2::new(bx, by), Point2::new(cx, cy));
        prop_assume!(a != b && b != c && a != c);
        let o1 = orient2d(a, b, c, &tol).unwrap();
        let o2 = orient2d(b, a, c, &tol).unwrap();
        prop_assert_eq!(o1.sign(), -o2.sign());
        prop_assert_eq!(o1, orient2d(b, c, a, &tol).unwrap());
        if o1 == Orientation::Collinear {
            prop_assert!(((bx - ax) * (cy - ay) - (by - ay) * (cx - ax)).abs() < 1e-6);
        }
    }

    #[test]
    fn surface_is_a_sphere(p in arb_prismatoid()) {
        let poly = p.to_polyhedron();
        let v = poly.vertices.len() as i64;
        let f = poly.faces.len() as i64;
        let e = poly.edge_faces().len() as i64;
        prop_assert_eq!(v - e + f, 2);
        prop_assert!((poly.total_curvature().unwrap() - 4.0 * PI).abs() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nonobtuse_regions_nest(seed in any::<u64>(), index in 0u64..1_000_000) {
        let p = random_nonobtuse_prismatoid(seed, index, 500).unwrap();
        let part = altitude_partition(&p).unwrap();
        let reach = 4.0 * p.diameter();
        for i in 0..p.n_base() {
            let d = diamond(&p, i).unwrap();
            let v = v_wedge(&p, i).unwrap();
            prop_assert!(region_within(&d, &part.regions[i], reach, &p.tol));
            prop_assert!(region_within(&part.regions[i], &v, reach, &p.tol));
        }
    }
}
