//! Generate the fifth-order reconstruction table and compare the ideal
//! weights at the Gauss nodes with their exact rational/radical values.

use swe::weno_gen::{format_table, generate_table, parse_points, Weno5Table};

fn main() -> swe::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "interfaces,gauss4".into());
    let table = generate_table(3, &parse_points(&spec)?)?;
    print!("{}", format_table(&table));

    let w = Weno5Table::standard()?;
    println!("\noffset      d0        d1        d2");
    for (x, d) in w.points.iter().zip(&w.d) {
        println!("{x:+.6}  {:.6}  {:.6}  {:.6}", d[0], d[1], d[2]);
    }
    Ok(())
}
