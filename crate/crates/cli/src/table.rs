use std::fmt::Write as _;

use mackey_core::amodel::{GeneratorKind, RigidObject};
use mackey_core::homext::{hom_space, HomDescriptor};
use mackey_core::natseq::NatSeq;
use serde_json::json;

use crate::{CliError, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    /// Stable part 1, one deviation per level, nothing free: `A(Z_p)`.
    BurnsideRing,
    /// A finite-dimensional space of the given dimension.
    Finite(u64),
}

impl Expected {
    pub fn matches(&self, h: &HomDescriptor) -> bool {
        match *self {
            Expected::BurnsideRing => {
                h.stable_dim == 1 && h.dev_dims == NatSeq::constant(1) && h.free_dims.is_zero()
            }
            Expected::Finite(d) => h.free_dims.is_zero() && h.dev_dims.tail() == 0 && total_dim(h) == Some(d),
        }
    }
}

/// `stable + Σ dev` when both the deviation and free parts are finitely supported.
pub fn total_dim(h: &HomDescriptor) -> Option<u64> {
    if h.dev_dims.tail() != 0 || !h.free_dims.is_zero() {
        return None;
    }
    Some(h.stable_dim as u64 + h.dev_dims.partial_sum(h.dev_dims.stable_from()))
}

pub struct Row {
    pub entry: String,
    pub value: String,
    pub expected: Expected,
    pub hom: HomDescriptor,
}

impl Row {
    pub fn matches(&self) -> bool {
        self.expected.matches(&self.hom)
    }
}

/// The eleven Hom spaces between `U`, `L^n`, `E^n` (and `L^m`, `E^m` with
/// `m ≠ n`) together with their expected values.
pub fn rows(p: u64, n: u32, m: u32) -> mackey_core::Result<Vec<Row>> {
    use GeneratorKind::{A, E, L};
    let g = |k, i| RigidObject::generator(p, k, i);
    let u = g(A, 0)?;
    let (ln, lm, en, em) = (g(L, n)?, g(L, m)?, g(E, n)?, g(E, m)?);
    let pn = p.pow(n);
    let pmin = p.pow(n.min(m));
    let cases: Vec<(String, String, Expected, &RigidObject, &RigidObject)> = vec![
        ("Hom(U,U)".into(), "A(Z_p)".into(), Expected::BurnsideRing, &u, &u),
        (format!("Hom(U,L^{n})"), "Q".into(), Expected::Finite(1), &u, &ln),
        (format!("Hom(U,E^{n})"), "Q".into(), Expected::Finite(1), &u, &en),
        (format!("Hom(L^{n},U)"), "0".into(), Expected::Finite(0), &ln, &u),
        (format!("Hom(L^{n},L^{n})"), format!("Q[Z_p/p^{n}]"), Expected::Finite(pn), &ln, &ln),
        (format!("Hom(L^{n},E^{m})"), "0".into(), Expected::Finite(0), &ln, &em),
        (format!("Hom(L^{m},L^{n})"), format!("Q[Z_p/p^{}]", n.min(m)), Expected::Finite(pmin), &lm, &ln),
        (format!("Hom(E^{n},U)"), "Q".into(), Expected::Finite(1), &en, &u),
        (format!("Hom(E^{n},E^{n})"), format!("Q[Z_p/p^{n}]"), Expected::Finite(pn), &en, &en),
        (format!("Hom(E^{n},L^{m})"), "0".into(), Expected::Finite(0), &en, &lm),
        (format!("Hom(E^{n},E^{m})"), "0".into(), Expected::Finite(0), &en, &em),
    ];
    cases
        .into_iter()
        .map(|(entry, value, expected, a, b)| Ok(Row { entry, value, expected, hom: hom_space(a, b)? }))
        .collect()
}

pub fn run(p: u64, n: u32, m: u32, as_json: bool) -> Result<Outcome, CliError> {
    if n == m {
        return Err(CliError::Usage("table needs --n and --m to differ".into()));
    }
    let rows = rows(p, n, m)?;
    let mut text = String::new();
    let mut values = Vec::new();
    for r in &rows {
        let h = &r.hom;
        let _ = writeln!(
            text,
            "{:<14} = {:<12} stable {} dev {} free {}  {}",
            r.entry,
            r.value,
            h.stable_dim,
            h.dev_dims,
            h.free_dims,
            if r.matches() { "ok" } else { "MISMATCH" }
        );
        values.push(json!({
            "entry": r.entry,
            "value": r.value,
            "hom": h,
            "total_dim": total_dim(h),
            "matches": r.matches(),
        }));
    }
    let code = if rows.iter().all(Row::matches) { 0 } else { 2 };
    let mut out = if as_json {
        Outcome { code: 0, stdout: format!("{}\n", serde_json::Value::Array(values)), stderr: String::new() }
    } else {
        Outcome { code: 0, stdout: text, stderr: String::new() }
    };
    out.code = code;
    Ok(out)
}
