use frieze_core::*;
fn main() {
    for n in 4..=11 { let t=std::time::Instant::now(); let c=frieze_a::enumerate_nonzero_a(n, ring::Ring::Z).unwrap().len(); println!("A n={n} {c} {:?}", t.elapsed()); }
    for n in 2..=6 { let t=std::time::Instant::now(); let v=frieze_d::enumerate_nonzero_d(n).unwrap(); println!("D n={n} {} pos {} {:?}", v.len(), v.iter().filter(|f|f.is_positive()).count(), t.elapsed()); }
}
