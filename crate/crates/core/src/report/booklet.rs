//! The printed companion to a collection, rendered from its manifest.

use std::fmt::Write as _;

use super::manifest::{Manifest, MunicipalityEntry, ServingEntry};
use crate::encoder::JugMould;

fn config_text(m: &Manifest, key: &str) -> String {
    match m.config.get(key) {
        Some(serde_json::Value::String(s)) => s.clone(),
        Some(v) => v.to_string(),
        None => "?".into(),
    }
}

fn pct(x: f64) -> String {
    format!("{:.1}%", 100.0 * x)
}

/// CommonMark text with one section per municipality and one for the
/// serving plate.
pub fn render_booklet(m: &Manifest) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Tableware of the lake shore\n");
    let _ = writeln!(
        out,
        "Every municipality on the shore is served as a set of five pieces. The mug \
         carries its reedbeds, the jug its shoreline, the deep plate the slope of its \
         land, the small plate the built-up share of the ancient lakebed and the flat \
         plate the outline of its coast. All dimensions are in millimeters.\n"
    );
    for entry in &m.municipalities {
        municipality_section(&mut out, m, entry);
    }
    serving_section(&mut out, m.serving_plate.as_ref());
    let mat = &m.materials;
    let _ = writeln!(out, "## Materials\n");
    let _ = writeln!(
        out,
        "The collection holds {:.2} kg of concrete ({:.0} cm³) at {} kg/m³. Firing its {} pieces \
         at {} kWh each takes about {:.0} kWh.\n",
        mat.concrete_mass_kg,
        mat.concrete_volume_mm3 / 1000.0,
        config_text(m, "concrete_density"),
        mat.pieces,
        mat.firing_kwh_per_piece,
        mat.firing_energy_kwh,
    );
    if !m.failures.is_empty() {
        let _ = writeln!(out, "## Not produced\n");
        for f in &m.failures {
            let _ = writeln!(out, "- {}: {}", f.name, f.error);
        }
        out.push('\n');
    }
    out
}

fn municipality_section(out: &mut String, m: &Manifest, e: &MunicipalityEntry) {
    let r = &e.record.values;
    let v = &e.vessels;
    let _ = writeln!(out, "## {}\n", e.name);
    if r.reconstructed {
        let _ = writeln!(out, "_Some values for {} were reconstructed from imagery._\n", e.name);
    }

    let mug = &v.mug.spec;
    let _ = write!(
        out,
        "**Mug.** A spiral of {:.0} mm winds {:.1} times around the mug, one turn every {} mm, \
         drawn from {:.0} m of reedbed at {}. The mug stands {:.1} mm tall. ",
        mug.spiral_length,
        mug.spiral_turns,
        mug.pitch,
        r.reedbed_length_m,
        config_text(m, "map_scale_reedbed"),
        mug.height,
    );
    if mug.perforation_count == 0 {
        let _ = writeln!(out, "The mug has no perforations: no reedbed cuts were recorded here.\n");
    } else {
        let _ = write!(
            out,
            "Its {} perforations are the {} cuts through the reeds, {:.1} mm apart along the spiral.",
            mug.perforation_count, r.reedbed_cuts, mug.perforation_spacing_along_spiral,
        );
        if let Some(requested) = mug.requested_spacing {
            let _ = write!(
                out,
                " The recorded {:.0} m between cuts would not fit on the spiral, so the spacing was reduced from {:.1} mm.",
                r.avg_cut_distance_m, requested,
            );
        }
        out.push_str("\n\n");
    }

    let jug = &v.jug.spec;
    let mould = match jug.mould {
        JugMould::Tall => "tall",
        JugMould::Short => "short",
    };
    let _ = write!(
        out,
        "**Jug.** Cast in the {mould} mould, the jug is {:.1} mm tall for {:.0} m of coastline. ",
        jug.height, r.coastline_length_m,
    );
    if jug.concrete_fraction == 0.0 {
        let _ = writeln!(out, "It holds no concrete: none of the shoreline is artificial.\n");
    } else {
        let _ = writeln!(
            out,
            "Concrete fills a {:.1}° sector of it, the {} of the shoreline ({:.0} m) that is artificial.\n",
            jug.concrete_sector_angle,
            pct(jug.concrete_fraction),
            r.artificial_shoreline_m,
        );
    }

    let deep = &v.deep_plate.spec;
    if deep.slope == 0.0 {
        let _ = writeln!(out, "**Deep plate.** The land is flat, so the deep plate is left uncut.\n");
    } else {
        let _ = writeln!(
            out,
            "**Deep plate.** The rim is cut at {:.2}°, the {}% slope of the land above the shore; \
             the steeper the slope, the less soup the plate holds.\n",
            deep.tilt_angle, deep.slope,
        );
    }

    let small = &v.small_plate.spec;
    if small.suppressed {
        let _ = writeln!(
            out,
            "**Small plate.** Only {} of the ancient lakebed is built up. A {:.2}° segment is below the \
             {}° that can be cast, so the small plate carries no concrete.\n",
            pct(small.fraction),
            360.0 * small.fraction,
            config_text(m, "small_plate_min_angle"),
        );
    } else {
        let _ = writeln!(
            out,
            "**Small plate.** A {:.1}° concrete segment marks the {} of the ancient lakebed that is built up.\n",
            small.segment_angle,
            pct(small.fraction),
        );
    }

    let flat = &v.flat_plate.spec;
    let _ = write!(
        out,
        "**Flat plate.** Blue glass cut to the coastline at {} measures {:.0} × {:.0} mm.",
        config_text(m, "map_scale_shoreline_outline"),
        flat.fit.width_mm,
        flat.fit.height_mm,
    );
    if !flat.fits_frame {
        let _ = write!(
            out,
            " It overflows the {:.0} × {:.0} mm plate and has to be trimmed.",
            flat.frame[0], flat.frame[1],
        );
    }
    out.push_str("\n\n");
}

fn serving_section(out: &mut String, serving: Option<&ServingEntry>) {
    let _ = writeln!(out, "## Serving plate\n");
    let Some(s) = serving else {
        let _ = writeln!(out, "No serving plate was made.\n");
        return;
    };
    let spec = &s.vessel.spec;
    let _ = write!(
        out,
        "Shared by {} municipalities ({}), the serving plate shows their mean built-up share, {}. ",
        spec.members.len(),
        spec.members.join(", "),
        pct(spec.plate.fraction),
    );
    if spec.plate.suppressed {
        let _ = writeln!(out, "The segment would be too thin to cast and is left out.\n");
    } else {
        let _ = writeln!(
            out,
            "Its concrete segment spans {:.1}°{}.\n",
            spec.plate.segment_angle,
            if spec.plate.segment_angle < 45.0 { ", just under one eighth of the plate" } else { "" },
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::encoder::{encode_all, EncoderConfig};
    use crate::report::manifest::tests::sample_output;
    use crate::report::build_manifest;

    #[test]
    fn sections_and_special_cases() {
        let mut quiet = sample_output();
        quiet.record.name = "Aszófő".into();
        quiet.record.reedbed_cuts = 0;
        quiet.record.artificial_shoreline = 0.0;
        quiet.record.builtup_fraction = 0.004;
        quiet.specs = encode_all(&quiet.record, &EncoderConfig::default()).unwrap();
        let m = build_manifest(&Config::defaults(), &[sample_output(), quiet], None, &[]).unwrap();
        let text = render_booklet(&m);
        assert_eq!(text.matches("\n## ").count(), 2 + 2);
        assert!(text.contains("## Zánka"));
        assert!(text.contains("## Aszófő"));
        assert!(text.contains("The mug has no perforations"));
        assert!(text.contains("carries no concrete"));
        assert!(text.contains("holds no concrete"));
    }
}
