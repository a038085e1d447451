use schubert_kit::dag::det_lifted;

fn main() {
    let mut seq = Vec::new();
    for n in 4..=20usize {
        let lift = det_lifted(n);
        let phi = lift.system.phi_size();
        let norm = phi as f64 / (n * n * n) as f64;
        seq.push(norm);
        println!("n={n:2} phi={phi:8} phi/n^3={norm:.3}");
    }
    let max = seq.iter().cloned().fold(f64::MIN, f64::max);
    let min = seq.iter().cloned().fold(f64::MAX, f64::min);
    println!("ratio max/min = {:.4}", max / min);
}
