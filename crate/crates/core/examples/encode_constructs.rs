//! One-hot encoding, decoding and correlation-based feature ordering.

use pqk::harness::synthetic_constructs;
use pqk::motif::{correlation_order, decode_one_hot, encode_dataset, encode_one_hot, Construct, MotifId};

fn main() -> pqk::Result<()> {
    let c = Construct::new(vec!["M3".parse::<MotifId>()?, "M12".parse()?], 0.41)?;
    let sample = encode_one_hot(&c, 4)?;
    let set: Vec<usize> = sample.bits.iter().enumerate().filter(|(_, b)| **b == 1).map(|(i, _)| i).collect();
    println!("{:?} survival {} -> label {:?}", c.motifs, c.survival, sample.label);
    println!("set bits of the 60-bit vector: {set:?}");
    println!("decoded slots: {:?}", decode_one_hot(&sample.bits)?);

    let data = encode_dataset(&synthetic_constructs(80, 1)?, 4)?;
    let order = correlation_order(&data.bit_rows());
    println!("correlation order of the first 20 columns: {:?}", &order[..20]);
    Ok(())
}
