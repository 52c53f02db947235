//! The field tower F_p ⊂ F_q ⊂ F_{q^n}.

mod ctx;
mod fq;
mod parse;
mod table;

pub use ctx::{
    make_field, ElemOp, FieldCtx, FieldElement, Overrides, DEFAULT_DLOG_CEILING_BITS,
};
pub use fq::{Fq, MAX_TABLE_Q};
pub use parse::{desk_fields, parse_fq, parse_fq_list, prime_power, FieldSpec};
pub use table::{FieldTable, DEFAULT_TABLE_CEILING_BITS};
