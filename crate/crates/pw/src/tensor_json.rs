//! `{"wires":k,"amplitudes":[[re,im],...]}` with exactly `2^k` entries in
//! MSB-first index order.

use pw_core::complex::c;
use pw_core::Tensor;
use serde::{Deserialize, Serialize};

use crate::span::{ParseError, Position, SourceSpan};

/// Largest width the JSON reader accepts.
pub const MAX_JSON_WIRES: usize = 24;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorDoc {
    wires: usize,
    amplitudes: Vec<[f64; 2]>,
}

fn whole(text: &str) -> SourceSpan {
    let end = text.lines().count().max(1);
    SourceSpan::new(
        Position::start(),
        Position {
            line: end,
            column: 1,
            offset: text.len(),
        },
    )
}

pub fn parse_tensor(text: &str) -> Result<Tensor, ParseError> {
    let doc: TensorDoc = serde_json::from_str(text).map_err(|e| {
        let p = Position {
            line: e.line().max(1),
            column: e.column().max(1),
            offset: 0,
        };
        ParseError::new(format!("invalid tensor JSON: {e}"), SourceSpan::point(p))
    })?;
    if doc.wires > MAX_JSON_WIRES {
        return Err(ParseError::new(
            format!("{} wires exceed the limit of {MAX_JSON_WIRES}", doc.wires),
            whole(text),
        ));
    }
    let expected = 1usize << doc.wires;
    if doc.amplitudes.len() != expected {
        return Err(ParseError::new(
            format!(
                "{} wires need {expected} amplitudes, found {}",
                doc.wires,
                doc.amplitudes.len()
            ),
            whole(text),
        ));
    }
    if let Some(i) = doc
        .amplitudes
        .iter()
        .position(|[re, im]| !re.is_finite() || !im.is_finite())
    {
        return Err(ParseError::new(format!("amplitude {i} is not finite"), whole(text)));
    }
    let amps = doc.amplitudes.iter().map(|&[re, im]| c(re, im)).collect();
    Tensor::new(doc.wires, amps).map_err(|e| ParseError::new(e.to_string(), whole(text)))
}

pub fn print_tensor(t: &Tensor) -> String {
    let doc = TensorDoc {
        wires: t.wires(),
        amplitudes: t.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string(&doc).expect("finite amplitudes serialize")
}
