use astro_float::{BigFloat, Sign, RoundingMode, Consts};
fn main() {
    let g = BigFloat::from_i8(3, 64);
    println!("3 raw: {:?}", g.as_raw_parts());
    let h = BigFloat::from_i8(12, 64);
    println!("12 raw: {:?}", h.as_raw_parts());
    let q = BigFloat::from_f64(0.75, 64);
    println!("0.75 raw: {:?}", q.as_raw_parts());
    let f = BigFloat::from_words(&[3u64 << 62], Sign::Pos, 2);
    println!("from_words([3<<62],2) = {:?} cmp3={:?}", f.as_raw_parts(), f.cmp(&g));
    let f2 = BigFloat::from_words(&[3], Sign::Pos, 2);
    println!("from_words([3],2) raw = {:?} cmp3={:?}", f2.as_raw_parts(), f2.cmp(&g));
    let mut cc = Consts::new().unwrap();
    let l = BigFloat::from_i8(2,128).ln(128, RoundingMode::ToEven, &mut cc);
    println!("ln2 = {:?} f64ish exp={:?}", l.as_raw_parts().map(|p| (p.3, p.1)), l.exponent());
}
