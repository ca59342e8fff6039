//! Motif catalog, construct records, one-hot encoding and correlation-based
//! feature ordering.

mod catalog;
mod construct;
mod encode;
mod order;

pub use catalog::{motif, Annotation, AnnotationAxis, Motif, MotifId, CATALOG};
pub use construct::{
    binarize_cytotoxicity, load_constructs, read_constructs, write_constructs, Construct,
    Cytotoxicity, SURVIVAL_THRESHOLD,
};
pub use encode::{
    decode_one_hot, encode_dataset, encode_one_hot, read_encoded_csv, write_encoded_csv,
    Category, EncodedDataset, EncodedSample, N_CATEGORIES, N_POSITIONS,
};
pub use order::{apply_permutation, correlation_order, matthews_corr};
