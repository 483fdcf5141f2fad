//! Binary round trip of a structure field and a form field.

use std::fs::File;
use std::io::{BufReader, BufWriter};

use kcontact_hodge::discrete_forms::FormField;
use kcontact_hodge::field_io::{read_form, read_structure, write_form, write_structure};
use kcontact_hodge::transverse_geometry::make_perturbed_structure;

fn main() -> kcontact_hodge::Result<()> {
    let dir = std::env::temp_dir();
    let s = make_perturbed_structure(6, 9, 0.3, 1)?;
    let path = dir.join("kcontact_structure.bin");
    write_structure(&s, &mut BufWriter::new(File::create(&path)?))?;
    let back = read_structure(&mut BufReader::new(File::open(&path)?))?;
    let diff = (0..s.nodes()).map(|p| (s.j(p) - back.j(p)).amax()).fold(0.0, f64::max);
    println!("{}: {} bytes, max |ΔJ| = {diff:e}", path.display(), std::fs::metadata(&path)?.len());

    let w = FormField::omega0(6);
    let path = dir.join("kcontact_omega.bin");
    write_form(&w, &mut BufWriter::new(File::create(&path)?))?;
    let back = read_form(&mut BufReader::new(File::open(&path)?))?;
    println!("{}: degree {}  identical {}", path.display(), back.degree(), back == w);
    Ok(())
}
