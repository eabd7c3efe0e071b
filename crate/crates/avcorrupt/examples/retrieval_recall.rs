//! Retrieval recall from a similarity matrix: row i's ground-truth match
//! is column i, and R@k is the fraction of rows whose diagonal lands in
//! the row's top k.
//!
//! Run: cargo run --example retrieval_recall

use avcorrupt::metrics::recall_at_k;
use avcorrupt::rng::RngStream;

fn main() {
    let n = 200;
    let mut rng = RngStream::from_fields([b"retrieval-example".as_slice()]);

    // Simulated cross-modal similarities: matched pairs score higher on
    // average, with enough noise that retrieval is imperfect.
    let mut sim = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            let base = if i == j { 0.55 } else { 0.0 };
            sim[i * n + j] = base + 0.3 * rng.standard_normal();
        }
    }

    println!("{} queries, matched pairs on the diagonal", n);
    for k in [1usize, 5, 10] {
        let r = recall_at_k(&sim, n, k).expect("valid k");
        println!("  R@{k:<2} = {:.3}", r);
    }

    // Degenerate sanity case: an identity matrix retrieves perfectly.
    let mut identity = vec![0.0f64; 16];
    for i in 0..4 {
        identity[i * 4 + i] = 1.0;
    }
    println!(
        "identity matrix R@1 = {:.1}",
        recall_at_k(&identity, 4, 1).unwrap()
    );
}
