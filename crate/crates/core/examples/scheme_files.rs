// Writing and reading scheme, signal and measurement files.

use ffcs::format::{read_scheme, read_vector, write_dense, write_scheme, write_sparse};
use ffcs::matrix::FieldVector;
use ffcs::sensing::{SensingScheme, SparseSignal};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scheme = SensingScheme::build(16, 40, 3)?;
    let mut file = Vec::new();
    write_scheme(&mut file, &scheme)?;
    let loaded = read_scheme(&file[..])?;
    assert_eq!(loaded.matrix(), scheme.matrix());
    println!("{}", String::from_utf8_lossy(&file).lines().take(4).collect::<Vec<_>>().join("\n"));

    let x = SparseSignal::from_pairs(40, [(2, 5), (17, 9), (39, 1)])?;
    let mut sig = Vec::new();
    write_sparse(&mut sig, &x)?;
    let y = loaded.measure(&SparseSignal::from_dense(&read_vector(&sig[..])?))?;
    let mut meas = Vec::new();
    write_dense(&mut meas, y.as_slice())?;
    let y = FieldVector::new(loaded.base_field(), read_vector(&meas[..])?)?;
    assert_eq!(loaded.recover(&y)?, x);
    print!("{}", String::from_utf8(sig)?);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
