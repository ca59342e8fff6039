use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use log::info;
use serde::{Deserialize, Serialize};

use super::catalog::MotifId;
use crate::error::{PqkError, Result};

/// Nalm6 survival below this fraction is labelled high cytotoxicity.
pub const SURVIVAL_THRESHOLD: f64 = 0.62;

const HEADER: [&str; 4] = ["pos1", "pos2", "pos3", "cytotoxicity"];

/// A tested motif combination. The terminal motif is implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Construct {
    pub motifs: Vec<MotifId>,
    pub survival: f64,
}

impl Construct {
    pub fn new(motifs: Vec<MotifId>, survival: f64) -> Result<Self> {
        if motifs.is_empty() || motifs.len() > 3 {
            return Err(PqkError::Data(format!(
                "construct must carry 1 to 3 motifs, got {}",
                motifs.len()
            )));
        }
        if let Some(t) = motifs.iter().find(|m| m.is_terminal()) {
            return Err(PqkError::Data(format!("{t} is appended implicitly and may not be listed")));
        }
        check_survival(survival)?;
        Ok(Construct { motifs, survival })
    }

    pub fn label(&self) -> Cytotoxicity {
        // survival is validated on construction
        binarize_cytotoxicity(self.survival).expect("validated survival")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cytotoxicity {
    High,
    Low,
}

impl Cytotoxicity {
    /// `High` maps to `+1`, `Low` to `-1`.
    pub fn sign(self) -> i8 {
        match self {
            Cytotoxicity::High => 1,
            Cytotoxicity::Low => -1,
        }
    }

    pub fn from_sign(s: i8) -> Option<Self> {
        match s {
            1 => Some(Cytotoxicity::High),
            -1 => Some(Cytotoxicity::Low),
            _ => None,
        }
    }
}

fn check_survival(survival: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&survival) {
        return Err(PqkError::SurvivalOutOfRange(survival));
    }
    Ok(())
}

pub fn binarize_cytotoxicity(survival: f64) -> Result<Cytotoxicity> {
    check_survival(survival)?;
    Ok(if survival < SURVIVAL_THRESHOLD {
        Cytotoxicity::High
    } else {
        Cytotoxicity::Low
    })
}

pub fn load_constructs(path: impl AsRef<Path>) -> Result<Vec<Construct>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| PqkError::Data(format!("{}: {e}", path.display())))?;
    let constructs = read_constructs(file, path)?;
    info!("loaded {} constructs from {}", constructs.len(), path.display());
    Ok(constructs)
}

/// Parses construct CSV (`pos1,pos2,pos3,cytotoxicity`) from any reader.
/// `source` is only used in error messages.
pub fn read_constructs<R: Read>(reader: R, source: impl AsRef<Path>) -> Result<Vec<Construct>> {
    let source: PathBuf = source.as_ref().to_path_buf();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header = rdr.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(PqkError::Data(format!(
            "{}: expected header `{}`, found `{}`",
            source.display(),
            HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut out = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let row_err = |message: String| PqkError::Row {
            path: source.clone(),
            row,
            message,
        };
        let record = record.map_err(|e| row_err(e.to_string()))?;
        if record.len() != HEADER.len() {
            return Err(row_err(format!("expected {} fields, found {}", HEADER.len(), record.len())));
        }

        let mut motifs = Vec::with_capacity(3);
        let mut gap = false;
        for token in record.iter().take(3) {
            if token.is_empty() {
                gap = true;
                continue;
            }
            if gap {
                return Err(row_err("motif positions must be filled left to right".into()));
            }
            let id: MotifId = token.parse().map_err(|e: PqkError| row_err(e.to_string()))?;
            motifs.push(id);
        }
        let survival: f64 = record[3]
            .parse()
            .map_err(|_| row_err(format!("cannot parse cytotoxicity `{}`", &record[3])))?;
        let construct = Construct::new(motifs, survival).map_err(|e| row_err(e.to_string()))?;
        out.push(construct);
    }
    Ok(out)
}

pub fn write_constructs<W: Write>(writer: W, constructs: &[Construct]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(HEADER)?;
    for c in constructs {
        let mut fields: Vec<String> = c.motifs.iter().map(|m| m.to_string()).collect();
        fields.resize(3, String::new());
        fields.push(c.survival.to_string());
        wtr.write_record(&fields)?;
    }
    wtr.flush()?;
    Ok(())
}
