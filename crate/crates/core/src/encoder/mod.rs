//! Mapping of municipality records onto vessel parameters.

mod config;
mod record;
mod vessels;

pub use config::{ConfigError, EncoderConfig};
pub use record::{
    read_record_rows, write_record_rows, CsvInputError, MunicipalityRecord, RecordError,
    RecordRow, RECORD_CSV_HEADER,
};
pub use vessels::{
    encode_all, encode_deep_plate, encode_flat_plate, encode_jug, encode_mug,
    encode_serving_plate, encode_small_plate, DeepPlateSpec, EncodeError, FlatPlateSpec,
    JugMould, JugSpec, MugSpec, SegmentPlateSpec, ServingPlateSpec, SmallPlateSpec, VesselSet,
};

#[cfg(test)]
pub(crate) use record::tests::sample_record;
