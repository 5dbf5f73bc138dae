use cho_core::validation::{all_ids, run_criterion, ValidationOptions};

fn main() {
    let opts = ValidationOptions::default();
    for id in all_ids() {
        match run_criterion(id, &opts) {
            Ok(o) => {
                println!("{}", o.summary_line());
                for d in &o.diagnostics {
                    println!("        {} = {:.4e}{}", d.name, d.value, d.threshold.map(|t| format!(" (limit {t:.3e})")).unwrap_or_default());
                }
            }
            Err(e) => println!("[FAIL] {id:>2} error: {e}"),
        }
    }
}
