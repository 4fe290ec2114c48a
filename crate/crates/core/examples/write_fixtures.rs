use ginv_core::io::exact_matrix_to_json;
use ginv_core::samples;

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    let a = samples::sample_a();
    let b = samples::sample_b();
    let writes = [
        ("a_matrix.json", exact_matrix_to_json(&a.a)),
        ("a_subspace.json", exact_matrix_to_json(a.l.basis())),
        ("a_candidate.json", exact_matrix_to_json(&a.candidate)),
        ("a_rhs.json", exact_matrix_to_json(&a.rhs)),
        ("a_pnorm.json", exact_matrix_to_json(&a.jordan_p)),
        ("b_matrix.json", exact_matrix_to_json(&b.a)),
        ("b_subspace.json", exact_matrix_to_json(b.l.basis())),
    ];
    for (name, text) in writes {
        let path = format!("{dir}/{name}");
        std::fs::write(&path, text).unwrap();
        println!("wrote {path}");
    }
}
