use serde::ser::{Serialize, SerializeSeq, Serializer};
use serde::Serialize as DeriveSerialize;

use super::{MatDiffOp, Matrix, MultiIndex};
use crate::diffring::DiffPoly;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum OperatorFormat {
    Text,
    Json,
    Latex,
}

#[derive(DeriveSerialize)]
struct TermDump<'a> {
    multi_index: [u32; 3],
    matrix: &'a Matrix,
}

/// Serializes as a list of `{multi_index, matrix}` in multi-index order.
impl Serialize for MatDiffOp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for (alpha, m) in &self.coeffs {
            seq.serialize_element(&TermDump { multi_index: alpha.0, matrix: m })?;
        }
        seq.end()
    }
}

fn latex_partial(alpha: MultiIndex) -> String {
    let mut s = String::new();
    for (i, &n) in alpha.0.iter().enumerate() {
        match n {
            0 => {}
            1 => s.push_str(&format!("\\partial_{}", i + 1)),
            n => s.push_str(&format!("\\partial_{}^{{{n}}}", i + 1)),
        }
    }
    s
}

/// One entry as an operator expression, e.g. `d1 - k*beta(t12)`.
fn entry_expr(terms: &[(MultiIndex, &DiffPoly)], latex: bool) -> String {
    let mut out = String::new();
    for (alpha, p) in terms {
        let coef = if latex { p.to_latex() } else { p.to_string() };
        let (neg, body) = match coef.strip_prefix('-') {
            Some(rest) if p.len() == 1 => (true, rest.to_string()),
            _ => (false, coef),
        };
        let piece = if alpha.order() == 0 {
            body
        } else {
            let d = if latex { latex_partial(*alpha) } else { alpha.to_string() };
            match (p.len(), body.as_str()) {
                (1, "1") => d,
                (1, _) if latex => format!("{body}\\,{d}"),
                (1, _) => format!("{body}*{d}"),
                _ if latex => format!("\\left({body}\\right){d}"),
                _ => format!("({body})*{d}"),
            }
        };
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&piece);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl MatDiffOp {
    fn entry_terms(&self, i: usize, j: usize) -> Vec<(MultiIndex, &DiffPoly)> {
        self.coeffs.iter().filter(|(_, m)| !m[i][j].is_zero()).map(|(a, m)| (*a, &m[i][j])).collect()
    }

    pub fn render(&self, format: OperatorFormat) -> String {
        match format {
            OperatorFormat::Json => serde_json::to_string_pretty(self).expect("operator dump is valid JSON"),
            OperatorFormat::Text => self.render_text(),
            OperatorFormat::Latex => self.render_latex(),
        }
    }

    fn render_text(&self) -> String {
        if self.is_scalar() {
            return format!("{}\n", entry_expr(&self.entry_terms(0, 0), false));
        }
        let mut s = String::new();
        for i in 0..3 {
            for j in 0..3 {
                s.push_str(&format!("[{},{}] {}\n", i + 1, j + 1, entry_expr(&self.entry_terms(i, j), false)));
            }
        }
        s
    }

    fn render_latex(&self) -> String {
        if self.is_scalar() {
            return format!("{}\n", entry_expr(&self.entry_terms(0, 0), true));
        }
        let rows: Vec<String> = (0..3)
            .map(|i| (0..3).map(|j| entry_expr(&self.entry_terms(i, j), true)).collect::<Vec<_>>().join(" & "))
            .collect();
        format!("\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}\n", rows.join(" \\\\\n"))
    }
}
