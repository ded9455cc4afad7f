use proptest::prelude::*;
use tableware::encoder::{encode_deep_plate, encode_jug, encode_mug, encode_small_plate, EncoderConfig};
use tableware::fixture;
use tableware::geodata::{
    builtup_fraction, parse_ascii_grid, scale_polyline, slope_percent, ElevationProfile, MapScale, Polygon2D,
    Polyline2D, RasterGrid,
};
use tableware::mesher::{export_stl, mesh_stats, parse_stl, revolve, Profile2D};
use tableware::report::round_significant;

fn grid() -> impl Strategy<Value = RasterGrid> {
    (1usize..12, 1usize..12, 0.1f64..100.0, -1e5f64..1e5, -1e5f64..1e5, any::<bool>()).prop_flat_map(
        |(nc, nr, cs, ox, oy, with_nodata)| {
            prop::collection::vec(prop_oneof![9 => -1e4f64..1e4, 1 => Just(-9999.0)], nc * nr).prop_map(
                move |values| {
                    let nodata = with_nodata.then_some(-9999.0);
                    RasterGrid::new(nc, nr, cs, (ox, oy), nodata, values).unwrap()
                },
            )
        },
    )
}

proptest! {
    #[test]
    fn ascii_grid_round_trip(g in grid()) {
        let back = parse_ascii_grid(&g.to_ascii_grid()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn zonal_mean_of_constant_scores_is_that_score(
        nc in 2usize..20, nr in 2usize..20, score in 0.0f64..=100.0,
        x0 in 0.0f64..0.4, x1 in 0.6f64..1.0, y0 in 0.0f64..0.4, y1 in 0.6f64..1.0,
    ) {
        let g = RasterGrid::new(nc, nr, 1.0, (0.0, 0.0), None, vec![score; nc * nr]).unwrap();
        let (w, h) = (nc as f64, nr as f64);
        let zone = Polygon2D::new(vec![[x0 * w, y0 * h], [x1 * w, y0 * h], [x1 * w, y1 * h], [x0 * w, y1 * h]]).unwrap();
        if let Ok(m) = builtup_fraction(&g, &zone) {
            prop_assert!((m.fraction - score / 100.0).abs() <= 1e-12);
            prop_assert!(m.cells <= nc * nr);
        }
    }

    #[test]
    fn zonal_mean_stays_within_cell_range(g in grid()) {
        let (x0, y0, x1, y1) = g.extent();
        let zone = Polygon2D::new(vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]]).unwrap();
        let scores = RasterGrid::new(g.ncols(), g.nrows(), g.cell_size(), g.origin(), g.nodata(),
            g.values().iter().map(|v| if *v == -9999.0 { -9999.0 } else { (v.abs() / 100.0).min(100.0) }).collect()).unwrap();
        match (builtup_fraction(&scores, &zone), scores.value_range()) {
            (Ok(m), Some((lo, hi))) => {
                prop_assert!(m.fraction >= lo / 100.0 - 1e-12 && m.fraction <= hi / 100.0 + 1e-12);
            }
            (Err(_), None) => {}
            (a, b) => prop_assert!(false, "{:?} {:?}", a, b),
        }
    }

    #[test]
    fn slope_ignores_offset_and_direction(
        zs in prop::collection::vec(-50.0f64..50.0, 3..40), step in 0.5f64..50.0, offset in -1e3f64..1e3,
    ) {
        let samples: Vec<(f64, f64)> = zs.iter().enumerate().map(|(i, z)| (i as f64 * step, *z)).collect();
        let p = ElevationProfile::new(samples.clone()).unwrap();
        let shifted = ElevationProfile::new(samples.iter().map(|&(d, z)| (d, z + offset)).collect()).unwrap();
        let base = slope_percent(&p);
        let tol = 1e-9 * base.max(1.0);
        prop_assert!((slope_percent(&shifted) - base).abs() <= tol);
        prop_assert!((slope_percent(&p.reversed()) - base).abs() <= tol);
        prop_assert!(base >= 0.0);
    }

    #[test]
    fn scaling_preserves_ratios(
        pts in prop::collection::vec((-5e3f64..5e3, -5e3f64..5e3), 3..20), denom in 500.0f64..50_000.0,
    ) {
        let line = Polyline2D::new(pts.iter().map(|&(x, y)| [x, y]).collect());
        prop_assume!(line.is_ok());
        let line = line.unwrap();
        prop_assume!(!line.is_degenerate());
        let (scaled, fit) = scale_polyline(&line, MapScale::new(denom).unwrap(), (260.0, 260.0)).unwrap();
        let k = 1000.0 / denom;
        prop_assert!((scaled.length() - k * line.length()).abs() <= 1e-9 * line.length().max(1.0));
        let (lo, hi) = scaled.bbox();
        prop_assert!(((lo[0] + hi[0]) / 2.0 - 130.0).abs() < 1e-7);
        prop_assert!(((lo[1] + hi[1]) / 2.0 - 130.0).abs() < 1e-7);
        prop_assert_eq!(fit.fits, fit.width_mm <= 260.0 && fit.height_mm <= 260.0);
    }

    #[test]
    fn encodings_are_monotone(
        a in 1.0f64..8000.0, b in 1.0f64..8000.0, fa in 0.0f64..=1.0, fb in 0.0f64..=1.0,
        sa in 0.0f64..80.0, sb in 0.0f64..80.0,
    ) {
        let cfg = EncoderConfig::default();
        let mut ra = fixture::record("Zánka");
        let mut rb = ra.clone();
        ra.reedbed_length = a;
        rb.reedbed_length = b;
        ra.reedbed_cuts = 0;
        rb.reedbed_cuts = 0;
        ra.coastline_length = a;
        rb.coastline_length = b;
        ra.artificial_shoreline = 0.0;
        rb.artificial_shoreline = 0.0;
        ra.builtup_fraction = fa;
        rb.builtup_fraction = fb;
        ra.slope = sa;
        rb.slope = sb;
        let (ma, mb) = (encode_mug(&ra, &cfg).unwrap(), encode_mug(&rb, &cfg).unwrap());
        prop_assert_eq!(a < b, ma.height < mb.height);
        prop_assert_eq!(a < b, encode_jug(&ra, &cfg).height < encode_jug(&rb, &cfg).height);
        let (pa, pb) = (encode_small_plate(&ra, &cfg), encode_small_plate(&rb, &cfg));
        if fa < fb {
            prop_assert!(pa.segment_angle <= pb.segment_angle);
        }
        prop_assert_eq!(sa < sb, encode_deep_plate(&ra, &cfg).tilt_angle < encode_deep_plate(&rb, &cfg).tilt_angle);
    }

    #[test]
    fn jug_sector_follows_fraction(f in 0.0f64..=1.0, coast in 100.0f64..10_000.0) {
        let mut r = fixture::record("Zánka");
        r.coastline_length = coast;
        r.artificial_shoreline = f * coast;
        let jug = encode_jug(&r, &EncoderConfig::default());
        prop_assert!((jug.concrete_sector_angle - 360.0 * jug.concrete_fraction).abs() < 1e-9);
        prop_assert!((0.0..=360.0).contains(&jug.concrete_sector_angle));
    }

    #[test]
    fn perforation_count_is_cut_count(cuts in 0u32..25, spacing in 10.0f64..600.0) {
        let mut r = fixture::record("Balatonkenese");
        r.reedbed_cuts = cuts;
        r.avg_cut_distance = spacing;
        let m = encode_mug(&r, &EncoderConfig::default()).unwrap();
        prop_assert_eq!(m.perforation_count, cuts);
        prop_assert!(f64::from(cuts) * m.perforation_spacing_along_spiral <= m.spiral_length + 1e-9);
    }

    #[test]
    fn revolved_rectangles_are_closed(
        r0 in 0.0f64..20.0, dr in 0.5f64..30.0, z0 in -20.0f64..20.0, dz in 0.5f64..30.0, n in 3usize..96,
    ) {
        let r0 = if r0 < 1.0 { 0.0 } else { r0 };
        let mesh = revolve(&Profile2D::rectangle(r0, r0 + dr, z0, z0 + dz).unwrap(), n).unwrap();
        let s = mesh_stats(&mesh);
        prop_assert!(s.watertight);
        prop_assert_eq!(s.genus, Some(if r0 > 0.0 { 1 } else { 0 }));
        prop_assert!(s.signed_volume_mm3 > 0.0);
        let bytes = export_stl(&mesh).unwrap();
        prop_assert_eq!(export_stl(&parse_stl(&bytes).unwrap()).unwrap(), bytes);
    }

    #[test]
    fn rounding_is_idempotent(x in prop::num::f64::NORMAL) {
        let r = round_significant(x);
        prop_assert_eq!(round_significant(r), r);
        prop_assert!((r - x).abs() <= 5e-6 * x.abs());
    }
}
