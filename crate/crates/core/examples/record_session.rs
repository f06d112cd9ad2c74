//! Records one debugging session by hand: breakpoints, stepping with stack
//! snapshots, and the invocations foraged from them.

use swarm_debugging::ingestion::*;
use swarm_debugging::model::*;
use swarm_debugging::Store;

fn main() -> swarm_debugging::Result<()> {
    let store = Store::in_memory();
    store.create_product("jabref")?;
    store.create_task("jabref", "318", "Entry editor loses focus")?;
    store.declare_type(
        "jabref",
        &TypeDeclaration {
            full_name: "net.sf.jabref.gui.BasePanel".into(),
            source_path: None,
            methods: vec![MethodDeclaration { signature: "runCommand(String)".into(), declared_line: Some(900) }],
        },
    )?;

    let session = store.open_session(&OpenSession {
        developer: "ana".into(),
        product: "jabref".into(),
        task: "318".into(),
        label: String::new(),
        started_at: Some(Timestamp(0)),
    })?;
    let bp = store.record_breakpoint(
        &session.id,
        &NewBreakpoint {
            type_full_name: "net.sf.jabref.gui.BasePanel".into(),
            line_number: 969,
            kind: BreakpointKind::Line,
            condition: None,
            created_at: Some(Timestamp(40_000)),
        },
    )?;
    println!("breakpoint at line {} in method {:?}", bp.line_number, bp.method_id);

    let stack = StackSnapshot::new(vec![
        StackFrame::new("net.sf.jabref.gui.BasePanel", "runCommand(String)", 969),
        StackFrame::new("net.sf.jabref.gui.JabRefFrame", "actionPerformed(ActionEvent)", 212),
        StackFrame::new("net.sf.jabref.JabRef", "main(String[])", 40),
    ]);
    let first = store.record_step_event(&session.id, DebugEventKind::StepInto, &stack, Some(Timestamp(50_000)))?;
    let again = store.record_step_event(&session.id, DebugEventKind::StepOver, &stack, Some(Timestamp(51_000)))?;
    println!("first step foraged {} invocations, repeating it {}", first.len(), again.len());

    let late = store.record_step_event(&session.id, DebugEventKind::StepInto, &stack, Some(Timestamp(10)));
    println!("out of order step: {}", late.unwrap_err());

    let closed = store.close_session(&session.id, SessionOutcome::FaultFound, Some(Timestamp(120_000)))?;
    println!("closed with {:?} after {} ms", closed.outcome, closed.finished_at.unwrap().millis());
    Ok(())
}
