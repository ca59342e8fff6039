use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::catalog::MotifId;
use super::construct::{Construct, Cytotoxicity};
use crate::error::{PqkError, Result};

/// One-hot categories per position: `M1..M14` then `empty`.
pub const N_CATEGORIES: usize = 15;
/// Positions in the full encoding: three motif slots and the terminal slot.
pub const N_POSITIONS: usize = 4;

const EMPTY_INDEX: usize = N_CATEGORIES - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    Motif(MotifId),
    Empty,
}

impl Category {
    pub fn index(self) -> usize {
        match self {
            Category::Motif(m) => m.category_index(),
            Category::Empty => EMPTY_INDEX,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        match i {
            EMPTY_INDEX => Some(Category::Empty),
            i if i < EMPTY_INDEX => MotifId::new(i as u8 + 1).map(Category::Motif),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedSample {
    pub bits: Vec<u8>,
    pub label: Cytotoxicity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodedDataset {
    pub n_positions: usize,
    pub samples: Vec<EncodedSample>,
}

impl EncodedDataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn width(&self) -> usize {
        self.samples.first().map_or(self.n_positions * N_CATEGORIES, |s| s.bits.len())
    }

    /// Labels as `+1` (high) / `-1` (low).
    pub fn labels(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.label.sign() as f64).collect()
    }

    pub fn feature_matrix(&self) -> Vec<Vec<f64>> {
        self.samples
            .iter()
            .map(|s| s.bits.iter().map(|&b| b as f64).collect())
            .collect()
    }

    pub fn bit_rows(&self) -> Vec<Vec<u8>> {
        self.samples.iter().map(|s| s.bits.clone()).collect()
    }

    pub fn subset(&self, indices: &[usize]) -> EncodedDataset {
        EncodedDataset {
            n_positions: self.n_positions,
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
        }
    }
}

/// Slot contents for the first `n_positions` positions: the construct's
/// motifs, then the terminal motif, then `Empty` padding.
fn slots(c: &Construct, n_positions: usize) -> Result<Vec<Category>> {
    if c.motifs.len() > 3 {
        return Err(PqkError::Data(format!(
            "construct carries {} motifs, at most 3 are allowed",
            c.motifs.len()
        )));
    }
    let mut slots: Vec<Category> = c.motifs.iter().copied().map(Category::Motif).collect();
    slots.push(Category::Motif(MotifId::TERMINAL));
    slots.resize(n_positions.max(slots.len()), Category::Empty);
    slots.truncate(n_positions);
    Ok(slots)
}

pub fn encode_one_hot(c: &Construct, n_positions: usize) -> Result<EncodedSample> {
    if n_positions == 0 || n_positions > N_POSITIONS {
        return Err(PqkError::Config(format!(
            "n_positions must be in 1..={N_POSITIONS}, got {n_positions}"
        )));
    }
    let mut bits = vec![0u8; n_positions * N_CATEGORIES];
    for (p, cat) in slots(c, n_positions)?.into_iter().enumerate() {
        bits[p * N_CATEGORIES + cat.index()] = 1;
    }
    Ok(EncodedSample {
        bits,
        label: crate::motif::binarize_cytotoxicity(c.survival)?,
    })
}

pub fn encode_dataset(constructs: &[Construct], n_positions: usize) -> Result<EncodedDataset> {
    let samples = constructs
        .iter()
        .map(|c| encode_one_hot(c, n_positions))
        .collect::<Result<Vec<_>>>()?;
    Ok(EncodedDataset { n_positions, samples })
}

/// Recovers the per-position categories of a one-hot vector.
pub fn decode_one_hot(bits: &[u8]) -> Result<Vec<Category>> {
    if bits.is_empty() || !bits.len().is_multiple_of(N_CATEGORIES) {
        return Err(PqkError::Dimension(format!(
            "encoded width {} is not a positive multiple of {N_CATEGORIES}",
            bits.len()
        )));
    }
    bits.chunks(N_CATEGORIES)
        .enumerate()
        .map(|(p, block)| {
            let set: Vec<usize> = block
                .iter()
                .enumerate()
                .filter(|(_, &b)| b != 0)
                .map(|(i, _)| i)
                .collect();
            match set.as_slice() {
                [i] => Ok(Category::from_index(*i).expect("index < 15")),
                _ => Err(PqkError::Data(format!(
                    "position {p} has {} set bits, expected exactly one",
                    set.len()
                ))),
            }
        })
        .collect()
}

pub fn write_encoded_csv<W: Write>(writer: W, data: &EncodedDataset) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let width = data.width();
    let mut header: Vec<String> = (0..width).map(|j| format!("b{j}")).collect();
    header.push("label".into());
    wtr.write_record(&header)?;
    for s in &data.samples {
        let mut row: Vec<String> = s.bits.iter().map(|b| b.to_string()).collect();
        row.push(s.label.sign().to_string());
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_encoded_csv<R: Read>(reader: R) -> Result<EncodedDataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let width = rdr
        .headers()?
        .len()
        .checked_sub(1)
        .filter(|w| *w > 0)
        .ok_or_else(|| PqkError::Data("encoded CSV needs bit columns and a label column".into()))?;
    let mut samples = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row_err = |m: String| PqkError::Data(format!("encoded row {}: {m}", i + 1));
        if rec.len() != width + 1 {
            return Err(row_err(format!("expected {} fields, found {}", width + 1, rec.len())));
        }
        let bits = rec
            .iter()
            .take(width)
            .map(|t| match t.trim() {
                "0" => Ok(0u8),
                "1" => Ok(1u8),
                other => Err(row_err(format!("bit `{other}` is not 0/1"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        let label = rec[width]
            .trim()
            .parse::<i8>()
            .ok()
            .and_then(Cytotoxicity::from_sign)
            .ok_or_else(|| row_err(format!("label `{}` is not +1/-1", &rec[width])))?;
        samples.push(EncodedSample { bits, label });
    }
    Ok(EncodedDataset {
        n_positions: width.div_ceil(N_CATEGORIES),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn construct(ids: &[u8], survival: f64) -> Construct {
        Construct::new(ids.iter().map(|&n| MotifId::new(n).unwrap()).collect(), survival).unwrap()
    }

    fn set_bits(s: &EncodedSample) -> Vec<usize> {
        s.bits.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| i).collect()
    }

    #[test]
    fn layout_examples() {
        let s = encode_one_hot(&construct(&[1], 0.3), 4).unwrap();
        assert_eq!(s.bits.len(), 60);
        assert_eq!(set_bits(&s), vec![0, 28, 44, 59]);
        assert_eq!(s.label, Cytotoxicity::High);

        let s = encode_one_hot(&construct(&[2, 5, 9], 0.7), 4).unwrap();
        assert_eq!(set_bits(&s), vec![1, 19, 38, 58]);
        assert_eq!(s.label, Cytotoxicity::Low);
    }

    #[test]
    fn truncated_positions() {
        let s = encode_one_hot(&construct(&[2, 5, 9], 0.7), 2).unwrap();
        assert_eq!(set_bits(&s), vec![1, 19]);
        assert!(encode_one_hot(&construct(&[1], 0.7), 0).is_err());
        assert!(encode_one_hot(&construct(&[1], 0.7), 5).is_err());
    }

    #[test]
    fn too_many_motifs() {
        let c = Construct {
            motifs: [1, 2, 3, 4].iter().map(|&n| MotifId::new(n).unwrap()).collect(),
            survival: 0.5,
        };
        assert!(encode_one_hot(&c, 4).is_err());
    }

    #[test]
    fn decode_rejects_bad_blocks() {
        assert!(decode_one_hot(&[0u8; 15]).is_err());
        assert!(decode_one_hot(&[1u8; 14]).is_err());
    }

    #[test]
    fn encoded_csv_roundtrip() {
        let data = encode_dataset(&[construct(&[1], 0.3), construct(&[4, 13], 0.9)], 4).unwrap();
        let mut buf = Vec::new();
        write_encoded_csv(&mut buf, &data).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("b0,b1,"));
        assert!(text.lines().nth(1).unwrap().ends_with(",1"));
        assert_eq!(read_encoded_csv(buf.as_slice()).unwrap(), data);
    }

    fn arb_construct() -> impl Strategy<Value = Construct> {
        (prop::collection::vec(1u8..=13, 1..=3), 0.0f64..=1.0).prop_map(|(ids, s)| construct(&ids, s))
    }

    proptest! {
        #[test]
        fn one_hot_roundtrip(c in arb_construct()) {
            let s = encode_one_hot(&c, 4).unwrap();
            prop_assert_eq!(s.bits.iter().map(|&b| b as usize).sum::<usize>(), 4);
            for block in s.bits.chunks(N_CATEGORIES) {
                prop_assert_eq!(block.iter().filter(|&&b| b == 1).count(), 1);
            }
            let decoded = decode_one_hot(&s.bits).unwrap();
            let mut expected: Vec<Category> = c.motifs.iter().copied().map(Category::Motif).collect();
            expected.push(Category::Motif(MotifId::TERMINAL));
            expected.resize(4, Category::Empty);
            prop_assert_eq!(decoded, expected);
        }
    }
}
