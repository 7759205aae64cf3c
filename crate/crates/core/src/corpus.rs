//! Declarations shipped with the crate, used by tests, benches and the CLI docs.

pub const EQUAL: &str = include_str!("../corpus/equal.gdt");
pub const SEQ: &str = include_str!("../corpus/seq.gdt");
pub const SEQ_HF: &str = include_str!("../corpus/seq_hf.gdt");
pub const LTERM: &str = include_str!("../corpus/lterm.gdt");
pub const LIST: &str = include_str!("../corpus/list.gdt");
pub const ROSE: &str = include_str!("../corpus/rose.gdt");
pub const PTREE: &str = include_str!("../corpus/ptree.gdt");
pub const BUSH: &str = include_str!("../corpus/bush.gdt");
pub const NESTED_GADT: &str = include_str!("../corpus/nested_gadt.gdt");
pub const EMPTY: &str = include_str!("../corpus/empty.gdt");

/// Every accepted corpus declaration in one module (Seq in its constrained form).
pub const ALL: &str = concat!(
    include_str!("../corpus/equal.gdt"),
    include_str!("../corpus/list.gdt"),
    include_str!("../corpus/rose.gdt"),
    include_str!("../corpus/ptree.gdt"),
    include_str!("../corpus/bush.gdt"),
    include_str!("../corpus/seq_hf.gdt"),
    include_str!("../corpus/lterm.gdt"),
);

/// `(file name, contents)` for each corpus file.
pub const FILES: &[(&str, &str)] = &[
    ("equal.gdt", EQUAL),
    ("seq.gdt", SEQ),
    ("seq_hf.gdt", SEQ_HF),
    ("lterm.gdt", LTERM),
    ("list.gdt", LIST),
    ("rose.gdt", ROSE),
    ("ptree.gdt", PTREE),
    ("bush.gdt", BUSH),
    ("nested_gadt.gdt", NESTED_GADT),
    ("empty.gdt", EMPTY),
];
