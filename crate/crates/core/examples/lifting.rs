// Grouping base-field symbols into extension-field symbols and back.

use ffcs::field::Field;
use ffcs::lifting::LiftSpec;
use ffcs::matrix::FieldVector;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let base = Field::of_order(2)?;
    let lift = LiftSpec::new(&base, 3)?;
    let c = FieldVector::new(&base, vec![1, 1, 0, 0, 0, 1])?;
    let lifted = lift.lift_vector(&c)?;
    for &z in lifted.as_slice() {
        println!("lifted symbol {z} = alpha^{}", lift.lifted().log(z).unwrap());
    }
    assert_eq!(lift.unlift_vector(&lifted)?, c);

    let base = Field::of_order(4)?;
    let lift = LiftSpec::new(&base, 3)?;
    for a in 0..4 {
        println!("F_4 element {a} sits at {} in F_64", lift.embed(a));
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
