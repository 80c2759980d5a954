// Syndrome decoding and codeword decoding with a Reed–Solomon code.

use ffcs::field::Field;
use ffcs::matrix::FieldVector;
use ffcs::rscode::RsCode;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = Field::of_order(256)?;
    let code = RsCode::new(&f, 255, 8)?;
    println!("[{}, {}, {}] code over F_256", code.len(), code.dimension(), code.min_distance());

    let mut e = vec![0u32; 255];
    e[3] = 17;
    e[100] = 200;
    e[254] = 1;
    let e = FieldVector::new(&f, e)?;
    let syn = code.syndrome(&e)?;
    let (found, stats) = code.syndrome_decode_with_stats(&syn)?;
    assert_eq!(found, e);
    println!("recovered 3 errors with {} field operations", stats.field_ops);

    let msg = FieldVector::new(&f, (0..code.dimension() as u32).collect())?;
    let mut word = code.encode(&msg)?.into_inner();
    for j in [0, 50, 120, 200] {
        word[j] ^= 0x5a;
    }
    let decoded = code.codeword_decode(&FieldVector::new(&f, word)?)?;
    assert_eq!(decoded, msg);
    println!("corrected 4 corrupted symbols in a codeword");
    Ok(())
}

fn main() {
    run_example().unwrap();
}
