use super::*;

const KB: &str = "\
% knowledge base
def kb1 :: (sprinkler_was_on -> wet(grass)), (rained_last_night -> wet(grass)), (wet(grass) -> wet(shoes)).
def explanation(Kb, Na, Ob) :: all2(Na, (Kb -> Ob)).
def circ(P, F) :: F, ~ex2(P_p, (F_p, T1, ~T2))
  where [F_p, P_p] := rename_free_predicate(F, P),
        A := arity(P, F),
        T1 := implications([P_p/A], [P/A]),
        T2 := implications([P/A], [P_p/A]).
";

fn process(text: &str) -> Processed {
    let doc = parse_document(text).unwrap();
    process_document(&doc, "test", Session::new(), RenderOptions::default())
}

#[test]
fn parses_blocks_in_order() {
    let text = format!("{KB}@text\nHello \\emph{{world}}.\n@end\n:- set(max_depth=8).\n:- valid((kb1, rained_last_night -> wet(shoes))).\n");
    let doc = parse_document(&text).unwrap();
    assert_eq!(doc.blocks.len(), 6);
    assert!(matches!(&doc.blocks[0], Block::Macro(d) if d.name.as_str() == "kb1" && d.arity() == 0));
    assert!(matches!(&doc.blocks[2], Block::Macro(d) if d.where_bindings.len() == 4));
    assert_eq!(doc.blocks[3], Block::Prose("Hello \\emph{world}.\n".into()));
    assert_eq!(doc.blocks[4], Block::Config(Options::from([("max_depth".into(), OptValue::Int(8))])));
    assert!(matches!(&doc.blocks[5], Block::Directive(d) if d.kind == DirectiveKind::Valid && d.line == 13));
}

#[test]
fn empty_document() {
    assert_eq!(parse_document("").unwrap(), Document::default());
    let p = process("");
    assert_eq!(p.latex, "");
    assert_eq!(p.failures, 0);
}

#[test]
fn errors_carry_lines() {
    let e = parse_document("def kb1 :: p.\n\n:- ipol(p).\n").unwrap_err();
    assert_eq!(e.line, 3);
    let e = parse_document("@text\nno end\n").unwrap_err();
    assert_eq!(e.line, 1);
    let e = parse_document("def a :: p.\n:- valid(p)\n").unwrap_err();
    assert_eq!(e.line, 2);
    let e = parse_document("\n:- frobnicate(p).\n").unwrap_err();
    assert_eq!(e.line, 2);
}

#[test]
fn load_registers_without_running() {
    let doc = parse_document(&format!("{KB}:- valid(p).\n")).unwrap();
    let s = load_document(&doc, "kb", Session::new());
    assert_eq!(s.registry.len(), 3);
    assert!(s.last_result.is_none());
    let again = load_document(&doc, "kb", s.clone());
    assert_eq!(again, s);
    let other = load_document(&doc, "other", s);
    assert_eq!(other.registry.len(), 6);
    assert_eq!(other.warnings.len(), 3);
}

#[test]
fn paper_directives() {
    let text = format!(
        "{KB}:- valid((kb1, rained_last_night -> wet(shoes))).\n\
         :- ipol((all(x, p(a,x)), q) -> (ex(x, p(x,b)) ; r)).\n\
         :- elim(explanation(kb1, [wet], wet(shoes))).\n"
    );
    let p = process(&text);
    assert_eq!(p.failures, 0, "{}", p.latex);
    assert!(p.latex.contains("\\noindent Valid: $"));
    assert!(p.latex.contains("Result of interpolation:"));
    assert!(p.latex.contains("\\mathsf{rained\\_last\\_night} \\lor \\mathsf{sprinkler\\_was\\_on}."));
}

#[test]
fn not_valid_is_not_a_failure() {
    let p = process(":- valid((p -> q)).\n");
    assert!(p.latex.starts_with("\\noindent Not valid: $"));
    assert_eq!(p.failures, 0);
}

#[test]
fn silent_elimination_sets_register() {
    let text = format!("{KB}:- elim(explanation(kb1, [wet], wet(shoes)), [printing=false, r=result1]).\n:- print(result1).\n");
    let p = process(&text);
    assert_eq!(p.failures, 0);
    assert!(!p.latex.contains("Result of elimination"));
    assert!(p.session.registers.contains_key("result1"));
    assert!(p.latex.contains("expands into"));
    assert!(p.latex.contains("\\mathsf{rained\\_last\\_night}"));
}

#[test]
fn failures_render_inline() {
    let p = process(":- elim(undefined_macro(p, [q])).\n:- valid(p).\n");
    assert_eq!(p.failures, 1);
    assert!(p.latex.contains("Failed elimination (line 1)"));
    assert!(p.latex.contains("Not valid"));
}

#[test]
fn definitions_render_with_where() {
    let p = process(KB);
    assert!(p.latex.contains("\\noindent where"));
    assert!(p.latex.contains("\\mathrm{transfer\\ clauses}"));
    assert!(p.latex.contains("(\\mathsf{wet}(\\mathsf{grass}) \\rightarrow \\mathsf{wet}(\\mathsf{shoes}))."));
}

#[test]
fn deterministic_and_load_then_process() {
    let text = format!("{KB}:- elim(circ(wet, kb1), [simp_result=[c6]]).\n:- print(circ(p, p(a))).\n");
    let a = process(&text);
    let b = process(&text);
    assert_eq!(a.latex, b.latex);
    let doc = parse_document(&text).unwrap();
    let loaded = load_document(&doc, "test", Session::new());
    let c = process_document(&doc, "test", loaded, RenderOptions::default());
    assert_eq!(c.latex, a.latex);
}

#[test]
fn standalone_wraps() {
    let doc = parse_document("@text\nx\n@end\n").unwrap();
    let p = process_document(&doc, "t", Session::new(), RenderOptions { standalone: true });
    assert!(p.latex.starts_with("\\documentclass"));
    assert!(p.latex.contains("\\begin{document}\nx\n\\end{document}"));
}
