fn main() {
    let conv = koszul_core::SignConventions::pinned();
    let report = koszul_conformance::run_suite(None, &conv, 42, 40, 4);
    for c in &report.cases {
        println!("{}", koszul_conformance::format_case_line(c));
    }
    println!("total {} passed {} failed {}", report.total, report.passed, report.failed);
}
