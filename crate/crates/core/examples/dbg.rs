use cuspcert::domain::*;
fn main() {
    let seg = PolytopeDomain::new(vec![vec![-1.0], vec![1.0]]).unwrap();
    println!("contains 0: {}", seg.contains(&[0.0]));
    println!("contains -0.5: {}", seg.contains(&[-0.5]));
    println!("contains -1: {}", seg.contains(&[-1.0]));
    println!("contains -1.5: {}", seg.contains(&[-1.5]));
    println!("contains 2: {}", seg.contains(&[2.0]));
    let r = line_boundary_intersect(&seg, &[0.0], &[0.5]);
    println!("{r:?}");
}
