use std::path::PathBuf;

use folwork_core::docproc::{parse_document, process_document, RenderOptions, Session};

fn documents_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../documents")
}

fn render(name: &str) -> (String, usize) {
    let text = std::fs::read_to_string(documents_dir().join(name)).unwrap();
    let doc = parse_document(&text).unwrap();
    let p = process_document(&doc, name, Session::new(), RenderOptions::default());
    (p.latex, p.failures)
}

/// Set `UPDATE_GOLDEN=1` to rewrite the stored output.
#[test]
fn shipped_document_matches_golden() {
    let (latex, failures) = render("paper.lgd");
    assert_eq!(failures, 0, "{latex}");
    let golden = documents_dir().join("paper.tex");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&golden, &latex).unwrap();
    }
    let stored = std::fs::read_to_string(&golden).unwrap();
    assert_eq!(latex, stored);
}

#[test]
fn repeated_processing_is_identical() {
    assert_eq!(render("paper.lgd"), render("paper.lgd"));
}
