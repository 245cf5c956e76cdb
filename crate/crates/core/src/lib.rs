pub mod error;
pub mod folding;
pub mod frieze;
pub mod frieze_a;
pub mod frieze_d;
pub mod labeling;
pub mod oracle;
pub mod polygon;
pub mod punctured;
pub mod relations;
pub mod render;
pub mod verify;
pub mod ring;
