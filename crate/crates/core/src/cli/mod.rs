//! Batch front end: spec documents in, report documents out.

pub mod render;
pub mod run;
pub mod spec;

pub use render::render_text;
pub use run::{
    error_exit_code, perturbed_element, run, Command, ReportDocument, RunOptions, Status, Summary, TaskResult,
    EXIT_FAIL, EXIT_PASS, EXIT_UNKNOWN, EXIT_USAGE, REPORT_SCHEMA,
};
pub use spec::{
    builtin, load_spec, parse_spec, ActionBlock, ElementSpec, GroupBlock, KTask, Overrides, Parameters, PatternBlock,
    PermutationLevel, SpecDocument, SubgroupSpec, TaskBlock, TowerTask, TranslationLevel, WitnessTask, BUILTINS,
    SPEC_SCHEMA,
};
