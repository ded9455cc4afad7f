//! Data-to-form mappings for the six vessel types.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::config::EncoderConfig;
use super::record::MunicipalityRecord;
use crate::geodata::{scale_polyline, FitReport, Polyline2D, ScaleError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncodeError {
    #[error("no reedbed; mug undefined")]
    NoReedbed,
    #[error("serving plate needs at least one municipality")]
    EmptyServingSet,
    #[error("shoreline outline: {0}")]
    Shoreline(#[from] ScaleError),
}

/// Reedbed spiral and perforations of a mug. Lengths in millimeters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MugSpec {
    pub height: f64,
    pub diameter: f64,
    pub pitch: f64,
    pub spiral_turns: f64,
    pub spiral_length: f64,
    pub perforation_count: u32,
    pub perforation_spacing_along_spiral: f64,
    /// Spacing requested by the data before clamping, when clamped.
    pub requested_spacing: Option<f64>,
}

impl MugSpec {
    pub fn spacing_clamped(&self) -> bool {
        self.requested_spacing.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JugMould {
    Tall,
    Short,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JugSpec {
    pub height: f64,
    pub diameter: f64,
    pub mould: JugMould,
    pub concrete_fraction: f64,
    pub concrete_sector_angle: f64,
    /// Millimeters of height per meter of coastline.
    pub height_factor: f64,
}

/// Pie segment of a small plate, or of the serving plate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentPlateSpec {
    pub diameter: f64,
    pub fraction: f64,
    pub segment_angle: f64,
    pub suppressed: bool,
}

pub type SmallPlateSpec = SegmentPlateSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServingPlateSpec {
    pub members: Vec<String>,
    #[serde(flatten)]
    pub plate: SegmentPlateSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeepPlateSpec {
    pub diameter: f64,
    pub slope: f64,
    /// Degrees.
    pub tilt_angle: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlatPlateSpec {
    pub frame: (f64, f64),
    pub glass_outline: Polyline2D,
    pub fits_frame: bool,
    pub fit: FitReport,
}

/// All five per-municipality encodings.
#[derive(Debug, Clone, PartialEq)]
pub struct VesselSet {
    pub mug: MugSpec,
    pub jug: JugSpec,
    pub deep_plate: DeepPlateSpec,
    pub small_plate: SmallPlateSpec,
    pub flat_plate: FlatPlateSpec,
}

pub fn encode_mug(record: &MunicipalityRecord, config: &EncoderConfig) -> Result<MugSpec, EncodeError> {
    if record.reedbed_length <= 0.0 {
        return Err(EncodeError::NoReedbed);
    }
    let spiral_length = config.map_scale_reedbed.meters_to_model_mm(record.reedbed_length);
    let spiral_turns = spiral_length / config.spiral_turn_length();
    let count = record.reedbed_cuts;
    let (spacing, requested) = if count == 0 {
        (0.0, None)
    } else {
        let wanted = config.map_scale_reedbed.meters_to_model_mm(record.avg_cut_distance);
        if f64::from(count) * wanted > spiral_length {
            (spiral_length / f64::from(count), Some(wanted))
        } else {
            (wanted, None)
        }
    };
    Ok(MugSpec {
        height: spiral_turns * config.spiral_pitch,
        diameter: config.mug_diameter,
        pitch: config.spiral_pitch,
        spiral_turns,
        spiral_length,
        perforation_count: count,
        perforation_spacing_along_spiral: spacing,
        requested_spacing: requested,
    })
}

pub fn encode_jug(record: &MunicipalityRecord, config: &EncoderConfig) -> JugSpec {
    let height_factor = config.height_mm_per_data_meter();
    let height = record.coastline_length * height_factor;
    let (mould, diameter) = if height >= config.jug_tall_threshold {
        (JugMould::Tall, config.jug_diameter_tall)
    } else {
        (JugMould::Short, config.jug_diameter_short)
    };
    let fraction = record.artificial_shoreline / record.coastline_length;
    JugSpec {
        height,
        diameter,
        mould,
        concrete_fraction: fraction,
        concrete_sector_angle: 360.0 * fraction,
        height_factor,
    }
}

fn segment_plate(diameter: f64, fraction: f64, min_angle: f64) -> SegmentPlateSpec {
    let angle = 360.0 * fraction;
    let suppressed = angle < min_angle || angle <= 0.0;
    SegmentPlateSpec {
        diameter,
        fraction,
        segment_angle: if suppressed { 0.0 } else { angle },
        suppressed,
    }
}

pub fn encode_small_plate(record: &MunicipalityRecord, config: &EncoderConfig) -> SmallPlateSpec {
    segment_plate(config.small_plate_diameter, record.builtup_fraction, config.small_plate_min_angle)
}

pub fn encode_deep_plate(record: &MunicipalityRecord, config: &EncoderConfig) -> DeepPlateSpec {
    DeepPlateSpec {
        diameter: config.deep_plate_diameter,
        slope: record.slope,
        tilt_angle: (record.slope / 100.0).atan().to_degrees(),
    }
}

pub fn encode_flat_plate(record: &MunicipalityRecord, config: &EncoderConfig) -> Result<FlatPlateSpec, EncodeError> {
    let frame = (config.flat_plate_frame[0], config.flat_plate_frame[1]);
    let (glass_outline, fit) = scale_polyline(&record.shoreline, config.map_scale_shoreline_outline, frame)?;
    Ok(FlatPlateSpec {
        frame,
        glass_outline,
        fits_frame: fit.fits,
        fit,
    })
}

/// Mean built-up fraction over `records`, shown as one pie segment.
pub fn encode_serving_plate(
    records: &[&MunicipalityRecord],
    config: &EncoderConfig,
) -> Result<ServingPlateSpec, EncodeError> {
    if records.is_empty() {
        return Err(EncodeError::EmptyServingSet);
    }
    let mean = records.iter().map(|r| r.builtup_fraction).sum::<f64>() / records.len() as f64;
    Ok(ServingPlateSpec {
        members: records.iter().map(|r| r.name.clone()).collect(),
        plate: segment_plate(config.serving_plate_diameter, mean, config.small_plate_min_angle),
    })
}

pub fn encode_all(record: &MunicipalityRecord, config: &EncoderConfig) -> Result<VesselSet, EncodeError> {
    Ok(VesselSet {
        mug: encode_mug(record, config)?,
        jug: encode_jug(record, config),
        deep_plate: encode_deep_plate(record, config),
        small_plate: encode_small_plate(record, config),
        flat_plate: encode_flat_plate(record, config)?,
    })
}
