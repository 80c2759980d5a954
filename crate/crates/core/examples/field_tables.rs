// Power table of F_8 and primitive polynomial counts.

use ffcs::field::{count_primitive_polynomials, euler_phi, Field};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = Field::build(2, 3, Some(&[1, 1, 0, 1]))?;
    println!("F_8 with x^3 + x + 1");
    for e in 0..f.group_order() {
        let a = f.alpha(e as i64);
        println!("alpha^{e} = {:?}", a.coords());
    }
    let a4 = f.alpha(4);
    let a2 = f.alpha(2);
    println!("alpha^4 * alpha^2 = alpha^{}", f.log(a4.mul(&a2)?.value()).unwrap());

    for s in 1..=6 {
        let count = count_primitive_polynomials(2, s)?;
        let expected = euler_phi((1u64 << s) - 1) / s as u64;
        println!("degree {s}: {count} primitive polynomials (phi(2^s - 1)/s = {expected})");
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
