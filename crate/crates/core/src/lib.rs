//! Desk-scale benchmark for compliant contact-rich manipulation policies:
//! an admittance control core, penalty-contact task environments, the
//! MoveScript policy language, a code-generation harness, and the
//! evaluation protocol tying them together.

pub mod control;
pub mod eval;
pub mod llm;
pub mod pose;
pub mod script;
pub mod sim;
